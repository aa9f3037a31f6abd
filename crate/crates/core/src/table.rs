//! Assembling validated coalgebras from a functor and per-state terms.

use crate::error::BuildError;
use crate::functor::{FunctorExpr, MonoidKind};
use crate::rational::Rational;
use crate::term::{MonoidValue, SuccessorTerm};

/// A validated coalgebra: `n` states, each with a normalized successor
/// term shaped by `functor`, plus the predecessor table used by the
/// refinement loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalgebraTable {
    pub functor: FunctorExpr,
    pub n: usize,
    pub terms: Vec<SuccessorTerm>,
    /// `pred[y]` lists the states whose term mentions `y`, sorted and
    /// duplicate-free.
    pub pred: Vec<Vec<u32>>,
    /// Total number of edges: the sum of all predecessor list lengths.
    pub m: u64,
}

/// Validate the terms against the functor, normalize them, and build the
/// predecessor table.
pub fn build_table(
    functor: FunctorExpr,
    terms: Vec<SuccessorTerm>,
) -> Result<CoalgebraTable, BuildError> {
    let n = terms.len();
    let mut normalized = Vec::with_capacity(n);
    for (x, t) in terms.into_iter().enumerate() {
        let x = x as u32;
        check_shape(&functor, &t, n, x, "term")?;
        let t = t.normalize().map_err(|source| BuildError::Arithmetic {
            state: x,
            source,
        })?;
        normalized.push(t);
    }
    let mut pred: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (x, t) in normalized.iter().enumerate() {
        for y in t.successors() {
            pred[y as usize].push(x as u32);
        }
    }
    let m = pred.iter().map(|v| v.len() as u64).sum();
    Ok(CoalgebraTable {
        functor,
        n,
        terms: normalized,
        pred,
        m,
    })
}

fn mismatch(state: u32, path: &str, message: impl Into<String>) -> BuildError {
    BuildError::ShapeMismatch {
        state,
        path: path.to_string(),
        message: message.into(),
    }
}

fn check_state(s: u32, n: usize, state: u32) -> Result<(), BuildError> {
    if (s as usize) < n {
        Ok(())
    } else {
        Err(BuildError::StateOutOfRange {
            state,
            referenced: s,
            n: n as u32,
        })
    }
}

fn check_weight_kind(
    w: &MonoidValue,
    kind: MonoidKind,
    state: u32,
    path: &str,
) -> Result<(), BuildError> {
    if w.kind() == kind {
        Ok(())
    } else {
        Err(mismatch(
            state,
            path,
            format!("expected {} value, got {}", kind.name(), w.kind().name()),
        ))
    }
}

fn check_shape(
    f: &FunctorExpr,
    t: &SuccessorTerm,
    n: usize,
    state: u32,
    path: &str,
) -> Result<(), BuildError> {
    match (f, t) {
        (FunctorExpr::Const(labels), SuccessorTerm::Label(i)) => {
            if (*i as usize) < labels.len() {
                Ok(())
            } else {
                Err(mismatch(state, path, format!("label index {i} out of range")))
            }
        }
        (FunctorExpr::MonoidConst(kind), SuccessorTerm::MonoidLabel(w)) => {
            check_weight_kind(w, *kind, state, path)
        }
        (FunctorExpr::StateVar, SuccessorTerm::State(s)) => check_state(*s, n, state),
        (FunctorExpr::Product(cs), SuccessorTerm::Tuple(ts)) => {
            if cs.len() != ts.len() {
                return Err(mismatch(
                    state,
                    path,
                    format!("expected {} components, got {}", cs.len(), ts.len()),
                ));
            }
            for (i, (c, u)) in cs.iter().zip(ts).enumerate() {
                check_shape(c, u, n, state, &format!("{path}.{i}"))?;
            }
            Ok(())
        }
        (FunctorExpr::Coproduct(vs), SuccessorTerm::Variant(tag, payload)) => {
            let (name, c) = vs.get(*tag as usize).ok_or_else(|| {
                mismatch(state, path, format!("variant tag {tag} out of range"))
            })?;
            check_shape(c, payload, n, state, &format!("{path}.{name}"))
        }
        (FunctorExpr::Powerset(c), SuccessorTerm::Set(ts)) => {
            for (i, u) in ts.iter().enumerate() {
                check_shape(c, u, n, state, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        (FunctorExpr::MonoidValued(kind, c), SuccessorTerm::Weighted(entries)) => {
            for (i, (key, w)) in entries.iter().enumerate() {
                let p = format!("{path}[{i}]");
                check_shape(c, key, n, state, &p)?;
                check_weight_kind(w, *kind, state, &p)?;
            }
            Ok(())
        }
        (FunctorExpr::Distribution(c), SuccessorTerm::Dist(entries)) => {
            let mut sum = Rational::ZERO;
            for (i, (key, w)) in entries.iter().enumerate() {
                let p = format!("{path}[{i}]");
                check_shape(c, key, n, state, &p)?;
                if !w.is_positive() {
                    return Err(mismatch(state, &p, "probability must be positive"));
                }
                sum = sum.checked_add(*w).map_err(|source| BuildError::Arithmetic {
                    state,
                    source,
                })?;
            }
            if sum != Rational::ONE {
                return Err(BuildError::DistributionSum { state });
            }
            Ok(())
        }
        (FunctorExpr::MonotoneNeighbourhood, SuccessorTerm::Neighbourhood(sets)) => {
            for set in sets {
                for &s in set {
                    check_state(s, n, state)?;
                }
            }
            Ok(())
        }
        _ => Err(mismatch(
            state,
            path,
            format!("expected a value of shape {f}"),
        )),
    }
}
