//! The textual coalgebra format.
//!
//! ```text
//! # comments start with '#'
//! {F,T} * X * X
//! 0: (F, 1, 2)
//! 1: (F, 3, 2)
//! ```
//!
//! The first non-comment line is the functor; every following line defines
//! one state. Term syntax follows the functor shape: tuples `(F, 2, 3)`,
//! sets `{2, 3}`, weighted maps `{2: 1/3, 3: 2/3}`, variants `tag(args)`
//! or a bare `tag`, neighbourhood systems `{{1,2},{3}}`. Rationals are
//! written `p/q`, with plain integers standing for `p/1`.

use std::fmt::Write as _;

use crate::error::{FormatError, ParseError};
use crate::functor::{parse_functor_expr, FunctorExpr, MonoidKind};
use crate::rational::Rational;
use crate::table::{build_table, CoalgebraTable};
use crate::term::{MonoidValue, SuccessorTerm};

pub fn parse_coalg_text(text: &str) -> Result<CoalgebraTable, FormatError> {
    let mut functor: Option<FunctorExpr> = None;
    let mut entries: Vec<(usize, u32, SuccessorTerm)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let f = match &functor {
            None => {
                functor = Some(
                    parse_functor_expr(line)
                        .map_err(|source| FormatError::Syntax { line: lineno, source })?,
                );
                continue;
            }
            Some(f) => f,
        };
        let (state, term_src) = line
            .split_once(':')
            .ok_or_else(|| FormatError::malformed(lineno, "expected '<state>: <term>'"))?;
        let state: u32 = state
            .trim()
            .parse()
            .map_err(|_| FormatError::malformed(lineno, "invalid state number"))?;
        let base = line.len() - term_src.len();
        let mut p = TermParser {
            src: term_src,
            pos: 0,
        };
        let term = (|| {
            let t = p.term(f)?;
            p.skip_ws();
            if p.pos < p.src.len() {
                return Err(p.err("trailing input"));
            }
            Ok(t)
        })()
        .map_err(|e| FormatError::Syntax {
            line: lineno,
            source: ParseError::new(base + e.offset, e.message),
        })?;
        entries.push((lineno, state, term));
    }
    if functor.is_none() {
        return Err(FormatError::malformed(1, "missing functor line"));
    }
    let n = entries.len();
    let mut terms: Vec<Option<SuccessorTerm>> = vec![None; n];
    for (lineno, state, term) in entries {
        let slot = terms.get_mut(state as usize).ok_or_else(|| {
            FormatError::malformed(
                lineno,
                format!("state {state} out of range: {n} states are defined"),
            )
        })?;
        if slot.is_some() {
            return Err(FormatError::malformed(
                lineno,
                format!("state {state} defined twice"),
            ));
        }
        *slot = Some(term);
    }
    let terms = terms.into_iter().map(|t| t.unwrap()).collect();
    Ok(build_table(functor.unwrap(), terms)?)
}

struct TermParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> TermParser<'a> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, message)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !(c.is_alphanumeric() || c == '_' || c == '-' || c == '/') {
                break;
            }
            self.pos += c.len_utf8();
        }
        if start == self.pos {
            Err(self.err("expected a value"))
        } else {
            Ok(&self.src[start..self.pos])
        }
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let start = self.pos;
        let w = self.word()?;
        w.parse().map_err(|_| ParseError::new(start, format!("invalid {what}: '{w}'")))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let start = self.pos;
        let w = self.word()?;
        let (num, den) = match w.split_once('/') {
            Some((p, q)) => (p, q),
            None => (w, "1"),
        };
        let bad = |_| ParseError::new(start, format!("invalid rational: '{w}'"));
        let num: i64 = num.parse().map_err(bad)?;
        let den: i64 = den.parse().map_err(bad)?;
        Rational::new(num, den).map_err(|e| ParseError::new(start, e.to_string()))
    }

    fn monoid_value(&mut self, kind: MonoidKind) -> Result<MonoidValue, ParseError> {
        Ok(match kind {
            MonoidKind::BoolOr => MonoidValue::Bool(self.number::<u8>("boolean (0 or 1)")? != 0),
            MonoidKind::NatAdd => MonoidValue::Nat(self.number("natural number")?),
            MonoidKind::IntAdd => MonoidValue::Int(self.number("integer")?),
            MonoidKind::Word64Or => MonoidValue::Word(self.number("64-bit word")?),
            MonoidKind::RationalAdd => MonoidValue::Rat(self.rational()?),
        })
    }

    fn state_set(&mut self) -> Result<Vec<u32>, ParseError> {
        self.expect('{')?;
        let mut out = Vec::new();
        if !self.eat('}') {
            loop {
                out.push(self.number("state number")?);
                if self.eat('}') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok(out)
    }

    fn tuple(&mut self, comps: &[FunctorExpr]) -> Result<SuccessorTerm, ParseError> {
        self.expect('(')?;
        let mut items = Vec::with_capacity(comps.len());
        for (i, c) in comps.iter().enumerate() {
            if i > 0 {
                self.expect(',')?;
            }
            items.push(self.term(c)?);
        }
        self.expect(')')?;
        Ok(SuccessorTerm::Tuple(items))
    }

    fn term(&mut self, f: &FunctorExpr) -> Result<SuccessorTerm, ParseError> {
        match f {
            FunctorExpr::Const(labels) => {
                let start = self.pos;
                let w = self.word()?;
                match labels.iter().position(|l| l == w) {
                    Some(i) => Ok(SuccessorTerm::Label(i as u32)),
                    None => Err(ParseError::new(start, format!("unknown label '{w}'"))),
                }
            }
            FunctorExpr::MonoidConst(kind) => {
                Ok(SuccessorTerm::MonoidLabel(self.monoid_value(*kind)?))
            }
            FunctorExpr::StateVar => Ok(SuccessorTerm::State(self.number("state number")?)),
            FunctorExpr::Product(cs) => self.tuple(cs),
            FunctorExpr::Coproduct(vs) => {
                let start = self.pos;
                let w = self.word()?;
                let (tag, (_, payload_shape)) = vs
                    .iter()
                    .enumerate()
                    .find(|(_, (name, _))| name == w)
                    .ok_or_else(|| ParseError::new(start, format!("unknown variant '{w}'")))?;
                let payload = if self.peek() == Some('(') {
                    match payload_shape {
                        // variant arguments are written without inner parens
                        FunctorExpr::Product(cs) => self.tuple(cs)?,
                        other => {
                            self.expect('(')?;
                            let t = self.term(other)?;
                            self.expect(')')?;
                            t
                        }
                    }
                } else {
                    match payload_shape {
                        FunctorExpr::Product(cs) if cs.is_empty() => {
                            SuccessorTerm::Tuple(Vec::new())
                        }
                        _ => return Err(self.err(format!("variant '{w}' takes arguments"))),
                    }
                };
                Ok(SuccessorTerm::Variant(tag as u32, Box::new(payload)))
            }
            FunctorExpr::Powerset(c) => {
                self.expect('{')?;
                let mut items = Vec::new();
                if !self.eat('}') {
                    loop {
                        items.push(self.term(c)?);
                        if self.eat('}') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(SuccessorTerm::Set(items))
            }
            FunctorExpr::MonoidValued(kind, c) => {
                self.expect('{')?;
                let mut items = Vec::new();
                if !self.eat('}') {
                    loop {
                        let key = self.term(c)?;
                        self.expect(':')?;
                        items.push((key, self.monoid_value(*kind)?));
                        if self.eat('}') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(SuccessorTerm::Weighted(items))
            }
            FunctorExpr::Distribution(c) => {
                self.expect('{')?;
                let mut items = Vec::new();
                if !self.eat('}') {
                    loop {
                        let key = self.term(c)?;
                        self.expect(':')?;
                        items.push((key, self.rational()?));
                        if self.eat('}') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(SuccessorTerm::Dist(items))
            }
            FunctorExpr::MonotoneNeighbourhood => {
                self.expect('{')?;
                let mut sets = Vec::new();
                if !self.eat('}') {
                    loop {
                        sets.push(self.state_set()?);
                        if self.eat('}') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(SuccessorTerm::Neighbourhood(sets))
            }
        }
    }
}

pub fn write_coalg_text(table: &CoalgebraTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", table.functor);
    for (i, t) in table.terms.iter().enumerate() {
        let mut line = String::new();
        write_term(&table.functor, t, &mut line);
        let _ = writeln!(out, "{i}: {line}");
    }
    out
}

fn write_term(f: &FunctorExpr, t: &SuccessorTerm, out: &mut String) {
    match (f, t) {
        (FunctorExpr::Const(labels), SuccessorTerm::Label(i)) => {
            out.push_str(&labels[*i as usize]);
        }
        (FunctorExpr::MonoidConst(_), SuccessorTerm::MonoidLabel(w)) => {
            let _ = write!(out, "{w}");
        }
        (FunctorExpr::StateVar, SuccessorTerm::State(s)) => {
            let _ = write!(out, "{s}");
        }
        (FunctorExpr::Product(cs), SuccessorTerm::Tuple(ts)) => {
            out.push('(');
            for (i, (c, u)) in cs.iter().zip(ts).enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_term(c, u, out);
            }
            out.push(')');
        }
        (FunctorExpr::Coproduct(vs), SuccessorTerm::Variant(tag, payload)) => {
            let (name, shape) = &vs[*tag as usize];
            out.push_str(name);
            match (shape, payload.as_ref()) {
                (FunctorExpr::Product(cs), _) if cs.is_empty() => {}
                (FunctorExpr::Product(cs), SuccessorTerm::Tuple(ts)) => {
                    out.push('(');
                    for (i, (c, u)) in cs.iter().zip(ts).enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        write_term(c, u, out);
                    }
                    out.push(')');
                }
                (shape, payload) => {
                    out.push('(');
                    write_term(shape, payload, out);
                    out.push(')');
                }
            }
        }
        (FunctorExpr::Powerset(c), SuccessorTerm::Set(ts)) => {
            out.push('{');
            for (i, u) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_term(c, u, out);
            }
            out.push('}');
        }
        (FunctorExpr::MonoidValued(_, c), SuccessorTerm::Weighted(entries)) => {
            out.push('{');
            for (i, (key, w)) in entries.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_term(c, key, out);
                let _ = write!(out, ": {w}");
            }
            out.push('}');
        }
        (FunctorExpr::Distribution(c), SuccessorTerm::Dist(entries)) => {
            out.push('{');
            for (i, (key, w)) in entries.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_term(c, key, out);
                let _ = write!(out, ": {w}");
            }
            out.push('}');
        }
        (FunctorExpr::MonotoneNeighbourhood, SuccessorTerm::Neighbourhood(sets)) => {
            out.push('{');
            for (i, set) in sets.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push('{');
                for (j, s) in set.iter().enumerate() {
                    if j > 0 {
                        out.push_str(", ");
                    }
                    let _ = write!(out, "{s}");
                }
                out.push('}');
            }
            out.push('}');
        }
        (f, t) => unreachable!("term {t:?} does not match shape {f}"),
    }
}
