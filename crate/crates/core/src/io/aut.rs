//! The Aldebaran `.aut` format for labelled transition systems.
//!
//! ```text
//! des (0,2,2)
//! (0,"a",1)
//! (1,"a",1)
//! ```
//!
//! The result is a coalgebra for `P({labels} * X)` with the label set
//! collected from the file in order of first occurrence. The initial
//! state is accepted but has no bearing on minimization.

use std::collections::HashMap;

use crate::error::FormatError;
use crate::functor::FunctorExpr;
use crate::table::{build_table, CoalgebraTable};
use crate::term::SuccessorTerm;

pub fn parse_aut(text: &str) -> Result<CoalgebraTable, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (lineno, header) = lines
        .next()
        .ok_or_else(|| FormatError::malformed(1, "empty file"))?;
    let (init, m, n) = parse_header(header).ok_or_else(|| {
        FormatError::malformed(lineno, "expected header 'des (init,transitions,states)'")
    })?;
    if n > 0 && init >= n {
        return Err(FormatError::malformed(
            lineno,
            format!("initial state {init} out of range for {n} states"),
        ));
    }
    let mut labels: Vec<String> = Vec::new();
    let mut label_idx: HashMap<String, u32> = HashMap::new();
    let mut succ: Vec<Vec<SuccessorTerm>> = vec![Vec::new(); n as usize];
    let mut count = 0u64;
    for (lineno, line) in lines {
        if line.is_empty() {
            continue;
        }
        let (src, label, dst) = parse_transition(line)
            .ok_or_else(|| FormatError::malformed(lineno, "expected '(src,\"label\",dst)'"))?;
        for (what, s) in [("source", src), ("target", dst)] {
            if s >= n {
                return Err(FormatError::malformed(
                    lineno,
                    format!("{what} state {s} out of range for {n} states"),
                ));
            }
        }
        let li = *label_idx.entry(label.clone()).or_insert_with(|| {
            labels.push(label);
            labels.len() as u32 - 1
        });
        succ[src as usize].push(SuccessorTerm::Tuple(vec![
            SuccessorTerm::Label(li),
            SuccessorTerm::State(dst),
        ]));
        count += 1;
    }
    if count != m {
        return Err(FormatError::malformed(
            1,
            format!("header announces {m} transitions, file has {count}"),
        ));
    }
    let functor = FunctorExpr::Powerset(Box::new(FunctorExpr::Product(vec![
        FunctorExpr::Const(labels),
        FunctorExpr::StateVar,
    ])));
    let terms = succ.into_iter().map(SuccessorTerm::Set).collect();
    Ok(build_table(functor, terms)?)
}

fn parse_header(line: &str) -> Option<(u32, u64, u32)> {
    let rest = line.strip_prefix("des")?.trim_start();
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
    let mut parts = inner.split(',').map(str::trim);
    let init = parts.next()?.parse().ok()?;
    let m = parts.next()?.parse().ok()?;
    let n = parts.next()?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((init, m, n))
}

fn parse_transition(line: &str) -> Option<(u32, String, u32)> {
    let inner = line.strip_prefix('(')?.strip_suffix(')')?;
    let (src, rest) = inner.split_once(',')?;
    let src = src.trim().parse().ok()?;
    let rest = rest.trim();
    let (label, dst) = if let Some(quoted) = rest.strip_prefix('"') {
        let (label, after) = quoted.split_once('"')?;
        (label.to_string(), after.trim().strip_prefix(',')?)
    } else {
        let (label, dst) = rest.rsplit_once(',')?;
        let label = label.trim();
        if label.contains(['(', ')', ',', '"']) {
            return None;
        }
        (label.to_string(), dst)
    };
    let dst = dst.trim().parse().ok()?;
    Some((src, label, dst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimize::{minimize, naive_minimize};

    #[test]
    fn smallest_wellformed_file() {
        let table = parse_aut("des (0,2,2)\n(0,\"a\",1)\n(1,\"a\",1)\n").unwrap();
        assert_eq!(table.n, 2);
        assert_eq!(table.m, 2);
        assert_eq!(table.functor.to_string(), "P({a} * X)");
    }

    #[test]
    fn unquoted_labels_and_spaces() {
        let table = parse_aut("des (0, 2, 2)\n(0, tau, 1)\n(1, tau, 1)\n").unwrap();
        assert_eq!(table.n, 2);
        assert_eq!(table.functor.to_string(), "P({tau} * X)");
    }

    #[test]
    fn crlf_and_blank_lines() {
        let table = parse_aut("des (0,1,2)\r\n\r\n(0,\"a\",1)\r\n").unwrap();
        assert_eq!(table.n, 2);
    }

    #[test]
    fn transition_count_mismatch() {
        let err = parse_aut("des (0,3,2)\n(0,\"a\",1)\n(1,\"a\",1)\n").unwrap_err();
        assert!(err.to_string().contains("3 transitions"));
    }

    #[test]
    fn out_of_range_state() {
        let err = parse_aut("des (0,1,2)\n(0,\"a\",5)\n").unwrap_err();
        assert!(err.to_string().contains("out of range"));
    }

    #[test]
    fn malformed_header() {
        assert!(parse_aut("res (0,1,1)\n").is_err());
        assert!(parse_aut("des (0,1)\n").is_err());
    }

    #[test]
    fn single_label_ts_example() {
        // the five-state transition system example written as an LTS
        let mut text = String::from("des (0,10,5)\n");
        for (src, dsts) in [
            (0, vec![1, 2, 3]),
            (1, vec![0, 3]),
            (2, vec![2, 3, 4]),
            (3, vec![3, 4]),
            (4, vec![]),
        ] {
            for d in dsts {
                text.push_str(&format!("({src},\"a\",{d})\n"));
            }
        }
        let table = parse_aut(&text).unwrap();
        let res = minimize(&table).unwrap();
        assert_eq!(res.assignment, naive_minimize(&table).unwrap().assignment);
        assert_eq!(res.assignment, vec![0, 0, 1, 1, 2]);
    }

    #[test]
    fn duplicate_transitions_collapse() {
        let table = parse_aut("des (0,3,2)\n(0,\"a\",1)\n(0,\"a\",1)\n(1,\"a\",1)\n").unwrap();
        // the duplicate disappears in the normalized set
        assert_eq!(table.terms[0], table.terms[1]);
    }
}
