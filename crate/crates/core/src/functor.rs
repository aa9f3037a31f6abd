//! The composable grammar of built-in functors describing a system type.
//!
//! Concrete syntax (whitespace-insensitive):
//!
//! ```text
//! {F,T} * X * X          booleans times two successors
//! P(X)                   finite powerset
//! {F,T} * D(X)           label times probability distribution
//! P({a,b} * X)           labelled transition systems
//! Q^(X)                  rational-weighted systems
//! W * W^(4 * X^5)        weighted tree automata, branching factor 5
//! N(X)                   monotone neighbourhood frames
//! cons(X * X) + nil      tagged coproduct (signature functor)
//! ```
//!
//! Monoid names: `2` bool-or, `N` nat-add, `Z` int-add, `W` word64-or,
//! `Q` rational-add. A name followed by `^( .. )` is the monoid-valued
//! functor; a bare name is the constant functor over the monoid's values.
//! An integer literal `k` is the constant functor with labels `0..k-1`,
//! and `E^k` abbreviates the k-fold product of `E`.

use crate::error::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonoidKind {
    BoolOr,
    NatAdd,
    IntAdd,
    Word64Or,
    RationalAdd,
}

impl MonoidKind {
    pub fn name(self) -> &'static str {
        match self {
            MonoidKind::BoolOr => "bool-or",
            MonoidKind::NatAdd => "nat-add",
            MonoidKind::IntAdd => "int-add",
            MonoidKind::Word64Or => "word64-or",
            MonoidKind::RationalAdd => "rational-add",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            MonoidKind::BoolOr => "2",
            MonoidKind::NatAdd => "N",
            MonoidKind::IntAdd => "Z",
            MonoidKind::Word64Or => "W",
            MonoidKind::RationalAdd => "Q",
        }
    }

    pub fn from_name(name: &str) -> Option<MonoidKind> {
        match name {
            "bool-or" => Some(MonoidKind::BoolOr),
            "nat-add" => Some(MonoidKind::NatAdd),
            "int-add" => Some(MonoidKind::IntAdd),
            "word64-or" => Some(MonoidKind::Word64Or),
            "rational-add" => Some(MonoidKind::RationalAdd),
            _ => None,
        }
    }

    fn from_symbol(sym: &str) -> Option<MonoidKind> {
        match sym {
            "2" => Some(MonoidKind::BoolOr),
            "N" => Some(MonoidKind::NatAdd),
            "Z" => Some(MonoidKind::IntAdd),
            "W" => Some(MonoidKind::Word64Or),
            "Q" => Some(MonoidKind::RationalAdd),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorExpr {
    /// Constant functor over a finite ordered label set.
    Const(Vec<String>),
    /// Constant functor over a monoid's value set.
    MonoidConst(MonoidKind),
    /// The argument X.
    StateVar,
    /// F1 x ... x Fk; the empty product is the one-element set.
    Product(Vec<FunctorExpr>),
    /// Tagged sum of variants.
    Coproduct(Vec<(String, FunctorExpr)>),
    /// Finite powerset.
    Powerset(Box<FunctorExpr>),
    /// Finitely supported monoid-valued maps.
    MonoidValued(MonoidKind, Box<FunctorExpr>),
    /// Finite probability distributions (positive rationals summing to 1).
    Distribution(Box<FunctorExpr>),
    /// Monotone neighbourhood functor over X, stored as antichains.
    MonotoneNeighbourhood,
}

impl FunctorExpr {
    /// True if X occurs somewhere in the expression.
    pub fn mentions_state(&self) -> bool {
        match self {
            FunctorExpr::Const(_) | FunctorExpr::MonoidConst(_) => false,
            FunctorExpr::StateVar | FunctorExpr::MonotoneNeighbourhood => true,
            FunctorExpr::Product(cs) => cs.iter().any(|c| c.mentions_state()),
            FunctorExpr::Coproduct(vs) => vs.iter().any(|(_, c)| c.mentions_state()),
            FunctorExpr::Powerset(inner)
            | FunctorExpr::MonoidValued(_, inner)
            | FunctorExpr::Distribution(inner) => inner.mentions_state(),
        }
    }
}

impl std::fmt::Display for FunctorExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FunctorExpr::Const(labels) => write!(f, "{{{}}}", labels.join(",")),
            FunctorExpr::MonoidConst(kind) => write!(f, "{}", kind.symbol()),
            FunctorExpr::StateVar => write!(f, "X"),
            FunctorExpr::Product(cs) => {
                if cs.is_empty() {
                    return write!(f, "1");
                }
                let parts: Vec<String> = cs
                    .iter()
                    .map(|c| match c {
                        FunctorExpr::Coproduct(_) | FunctorExpr::Product(_) => format!("({c})"),
                        _ => format!("{c}"),
                    })
                    .collect();
                write!(f, "{}", parts.join(" * "))
            }
            FunctorExpr::Coproduct(vs) => {
                let parts: Vec<String> = vs
                    .iter()
                    .enumerate()
                    .map(|(i, (tag, c))| {
                        if matches!(c, FunctorExpr::Product(p) if p.is_empty()) {
                            tag.clone()
                        } else if *tag == i.to_string() {
                            // positional tags are reassigned by the parser
                            match c {
                                FunctorExpr::Coproduct(_) => format!("({c})"),
                                _ => format!("{c}"),
                            }
                        } else {
                            format!("{tag}({c})")
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join(" + "))
            }
            FunctorExpr::Powerset(inner) => write!(f, "P({inner})"),
            FunctorExpr::MonoidValued(kind, inner) => write!(f, "{}^({inner})", kind.symbol()),
            FunctorExpr::Distribution(inner) => write!(f, "D({inner})"),
            FunctorExpr::MonotoneNeighbourhood => write!(f, "N(X)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Punct(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let n: u64 = text[start..i]
                .parse()
                .map_err(|_| ParseError::new(start, "integer literal too large"))?;
            toks.push((Tok::Int(n), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            toks.push((Tok::Ident(text[start..i].to_string()), start));
        } else if "{}()*+^,".contains(c) {
            toks.push((Tok::Punct(c), i));
            i += 1;
        } else {
            return Err(ParseError::new(i, format!("unexpected character '{c}'")));
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: text.len(),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, o)| o).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, p: char) -> bool {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: char) -> Result<(), ParseError> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(ParseError::new(self.offset(), format!("expected '{p}'")))
        }
    }
}

/// Parse the concrete functor syntax described in the module docs.
pub fn parse_functor_expr(text: &str) -> Result<FunctorExpr, ParseError> {
    let mut lx = lex(text)?;
    let e = parse_sum(&mut lx)?;
    if lx.peek().is_some() {
        return Err(ParseError::new(lx.offset(), "trailing input"));
    }
    Ok(e)
}

fn parse_sum(lx: &mut Lexer) -> Result<FunctorExpr, ParseError> {
    let first = parse_prod(lx)?;
    if lx.peek() != Some(&Tok::Punct('+')) {
        return Ok(first);
    }
    let mut alts = vec![first];
    while lx.eat('+') {
        alts.push(parse_prod(lx)?);
    }
    // collect variants: single-variant coproducts keep their tag, anything
    // else is tagged by position
    let mut variants = Vec::new();
    for (i, alt) in alts.into_iter().enumerate() {
        match alt {
            FunctorExpr::Coproduct(vs) if vs.len() == 1 => variants.extend(vs),
            other => variants.push((i.to_string(), other)),
        }
    }
    Ok(FunctorExpr::Coproduct(variants))
}

fn parse_prod(lx: &mut Lexer) -> Result<FunctorExpr, ParseError> {
    let first = parse_power(lx)?;
    if lx.peek() != Some(&Tok::Punct('*')) {
        return Ok(first);
    }
    let mut comps = vec![first];
    while lx.eat('*') {
        comps.push(parse_power(lx)?);
    }
    // flatten nested X^k expansions
    let mut flat = Vec::new();
    for c in comps {
        match c {
            FunctorExpr::Product(inner) => flat.extend(inner),
            other => flat.push(other),
        }
    }
    Ok(FunctorExpr::Product(flat))
}

fn parse_power(lx: &mut Lexer) -> Result<FunctorExpr, ParseError> {
    let base = parse_atom(lx)?;
    if lx.peek() == Some(&Tok::Punct('^')) {
        lx.next();
        let off = lx.offset();
        match lx.next() {
            Some(Tok::Int(k)) => {
                let k = k as usize;
                if k == 1 {
                    Ok(base)
                } else {
                    Ok(FunctorExpr::Product(vec![base; k]))
                }
            }
            _ => Err(ParseError::new(off, "expected integer exponent after '^'")),
        }
    } else {
        Ok(base)
    }
}

fn parse_atom(lx: &mut Lexer) -> Result<FunctorExpr, ParseError> {
    let off = lx.offset();
    match lx.next() {
        Some(Tok::Punct('(')) => {
            let e = parse_sum(lx)?;
            lx.expect(')')?;
            Ok(e)
        }
        Some(Tok::Punct('{')) => {
            let mut labels = Vec::new();
            if !lx.eat('}') {
                loop {
                    let off = lx.offset();
                    match lx.next() {
                        Some(Tok::Ident(name)) => labels.push(name),
                        Some(Tok::Int(n)) => labels.push(n.to_string()),
                        _ => return Err(ParseError::new(off, "expected label")),
                    }
                    if lx.eat('}') {
                        break;
                    }
                    lx.expect(',')?;
                }
            }
            Ok(FunctorExpr::Const(labels))
        }
        Some(Tok::Int(n)) => {
            if monoid_valued_follows(lx) {
                let kind = MonoidKind::from_symbol(&n.to_string())
                    .ok_or_else(|| ParseError::new(off, format!("unknown monoid '{n}'")))?;
                parse_monoid_valued(lx, kind)
            } else {
                Ok(FunctorExpr::Const((0..n).map(|i| i.to_string()).collect()))
            }
        }
        Some(Tok::Ident(name)) => match name.as_str() {
            "X" => Ok(FunctorExpr::StateVar),
            "P" => {
                lx.expect('(')?;
                let inner = parse_sum(lx)?;
                lx.expect(')')?;
                Ok(FunctorExpr::Powerset(Box::new(inner)))
            }
            "D" => {
                lx.expect('(')?;
                let inner = parse_sum(lx)?;
                lx.expect(')')?;
                Ok(FunctorExpr::Distribution(Box::new(inner)))
            }
            "N" if lx.peek() == Some(&Tok::Punct('(')) => {
                lx.next();
                let inner_off = lx.offset();
                let inner = parse_sum(lx)?;
                lx.expect(')')?;
                if inner != FunctorExpr::StateVar {
                    return Err(ParseError::new(
                        inner_off,
                        "monotone neighbourhood functor is only supported over X",
                    ));
                }
                Ok(FunctorExpr::MonotoneNeighbourhood)
            }
            _ => {
                if let Some(kind) = MonoidKind::from_symbol(&name) {
                    if monoid_valued_follows(lx) {
                        return parse_monoid_valued(lx, kind);
                    }
                    return Ok(FunctorExpr::MonoidConst(kind));
                }
                // coproduct variant: tag(expr) or bare tag with unit payload
                if lx.eat('(') {
                    let inner = parse_sum(lx)?;
                    lx.expect(')')?;
                    Ok(FunctorExpr::Coproduct(vec![(name, inner)]))
                } else {
                    Ok(FunctorExpr::Coproduct(vec![(
                        name,
                        FunctorExpr::Product(Vec::new()),
                    )]))
                }
            }
        },
        Some(tok) => Err(ParseError::new(off, format!("unexpected token {tok:?}"))),
        None => Err(ParseError::new(off, "unexpected end of input")),
    }
}

fn monoid_valued_follows(lx: &Lexer) -> bool {
    lx.toks.get(lx.pos).map(|(t, _)| t) == Some(&Tok::Punct('^'))
        && lx.toks.get(lx.pos + 1).map(|(t, _)| t) == Some(&Tok::Punct('('))
}

fn parse_monoid_valued(lx: &mut Lexer, kind: MonoidKind) -> Result<FunctorExpr, ParseError> {
    lx.expect('^')?;
    lx.expect('(')?;
    let inner = parse_sum(lx)?;
    lx.expect(')')?;
    Ok(FunctorExpr::MonoidValued(kind, Box::new(inner)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dfa_functor() {
        let f = parse_functor_expr("{F,T} * X * X").unwrap();
        assert_eq!(
            f,
            FunctorExpr::Product(vec![
                FunctorExpr::Const(vec!["F".into(), "T".into()]),
                FunctorExpr::StateVar,
                FunctorExpr::StateVar,
            ])
        );
    }

    #[test]
    fn powerset() {
        assert_eq!(
            parse_functor_expr("P(X)").unwrap(),
            FunctorExpr::Powerset(Box::new(FunctorExpr::StateVar))
        );
        assert_eq!(
            parse_functor_expr("P({a,b} * X)").unwrap(),
            FunctorExpr::Powerset(Box::new(FunctorExpr::Product(vec![
                FunctorExpr::Const(vec!["a".into(), "b".into()]),
                FunctorExpr::StateVar,
            ])))
        );
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_functor_expr("P(").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn monoid_valued_and_const() {
        assert_eq!(
            parse_functor_expr("Q^(X)").unwrap(),
            FunctorExpr::MonoidValued(MonoidKind::RationalAdd, Box::new(FunctorExpr::StateVar))
        );
        let wta = parse_functor_expr("W * W^(4 * X^5)").unwrap();
        let expected_inner = FunctorExpr::Product(vec![
            FunctorExpr::Const((0..4).map(|i| i.to_string()).collect()),
            FunctorExpr::StateVar,
            FunctorExpr::StateVar,
            FunctorExpr::StateVar,
            FunctorExpr::StateVar,
            FunctorExpr::StateVar,
        ]);
        assert_eq!(
            wta,
            FunctorExpr::Product(vec![
                FunctorExpr::MonoidConst(MonoidKind::Word64Or),
                FunctorExpr::MonoidValued(MonoidKind::Word64Or, Box::new(expected_inner)),
            ])
        );
    }

    #[test]
    fn neighbourhood() {
        assert_eq!(
            parse_functor_expr("N(X)").unwrap(),
            FunctorExpr::MonotoneNeighbourhood
        );
        assert!(parse_functor_expr("N(P(X))").is_err());
        // bare N is the nat-add constant functor
        assert_eq!(
            parse_functor_expr("N").unwrap(),
            FunctorExpr::MonoidConst(MonoidKind::NatAdd)
        );
    }

    #[test]
    fn coproduct_variants() {
        let f = parse_functor_expr("cons(X * X) + nil").unwrap();
        assert_eq!(
            f,
            FunctorExpr::Coproduct(vec![
                (
                    "cons".into(),
                    FunctorExpr::Product(vec![FunctorExpr::StateVar, FunctorExpr::StateVar])
                ),
                ("nil".into(), FunctorExpr::Product(Vec::new())),
            ])
        );
        // untagged alternatives get positional tags
        let g = parse_functor_expr("X + P(X)").unwrap();
        assert_eq!(
            g,
            FunctorExpr::Coproduct(vec![
                ("0".into(), FunctorExpr::StateVar),
                ("1".into(), FunctorExpr::Powerset(Box::new(FunctorExpr::StateVar))),
            ])
        );
    }

    #[test]
    fn composed_functor() {
        let f = parse_functor_expr("P(D(X))").unwrap();
        assert_eq!(
            f,
            FunctorExpr::Powerset(Box::new(FunctorExpr::Distribution(Box::new(
                FunctorExpr::StateVar
            ))))
        );
    }

    #[test]
    fn display_roundtrip() {
        for text in [
            "{F,T} * X * X",
            "P(X)",
            "{F,T} * D(X)",
            "P({a,b} * X)",
            "Q^(X)",
            "W * W^(4 * X^5)",
            "N(X)",
            "cons(X * X) + nil",
            "P(D(X))",
        ] {
            let f = parse_functor_expr(text).unwrap();
            let reparsed = parse_functor_expr(&f.to_string()).unwrap();
            assert_eq!(f, reparsed, "{text}");
        }
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(
            parse_functor_expr("{F,T}*X*X").unwrap(),
            parse_functor_expr("  { F , T }  *  X * X ").unwrap()
        );
    }
}
