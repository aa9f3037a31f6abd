//! Successor terms: the structured value a coalgebra assigns to each state.
//!
//! Terms are kept in a canonical normal form so that structural equality
//! coincides with equality of the encoded elements: sets are sorted and
//! duplicate-free, weighted maps are sorted by key with weights merged and
//! zero entries dropped, and neighbourhood systems are minimal antichains.

use crate::error::SigError;
use crate::functor::MonoidKind;
use crate::rational::Rational;

/// An element of one of the supported commutative monoids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MonoidValue {
    Bool(bool),
    Nat(u64),
    Int(i64),
    Word(u64),
    Rat(Rational),
}

impl MonoidValue {
    pub fn kind(&self) -> MonoidKind {
        match self {
            MonoidValue::Bool(_) => MonoidKind::BoolOr,
            MonoidValue::Nat(_) => MonoidKind::NatAdd,
            MonoidValue::Int(_) => MonoidKind::IntAdd,
            MonoidValue::Word(_) => MonoidKind::Word64Or,
            MonoidValue::Rat(_) => MonoidKind::RationalAdd,
        }
    }

    pub fn zero(kind: MonoidKind) -> MonoidValue {
        match kind {
            MonoidKind::BoolOr => MonoidValue::Bool(false),
            MonoidKind::NatAdd => MonoidValue::Nat(0),
            MonoidKind::IntAdd => MonoidValue::Int(0),
            MonoidKind::Word64Or => MonoidValue::Word(0),
            MonoidKind::RationalAdd => MonoidValue::Rat(Rational::ZERO),
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == MonoidValue::zero(self.kind())
    }

    pub fn checked_add(self, other: MonoidValue) -> Result<MonoidValue, SigError> {
        match (self, other) {
            (MonoidValue::Bool(a), MonoidValue::Bool(b)) => Ok(MonoidValue::Bool(a | b)),
            (MonoidValue::Nat(a), MonoidValue::Nat(b)) => {
                a.checked_add(b).map(MonoidValue::Nat).ok_or(SigError::Overflow)
            }
            (MonoidValue::Int(a), MonoidValue::Int(b)) => {
                a.checked_add(b).map(MonoidValue::Int).ok_or(SigError::Overflow)
            }
            (MonoidValue::Word(a), MonoidValue::Word(b)) => Ok(MonoidValue::Word(a | b)),
            (MonoidValue::Rat(a), MonoidValue::Rat(b)) => a.checked_add(b).map(MonoidValue::Rat),
            _ => panic!("monoid value kind mismatch in addition"),
        }
    }
}

impl std::fmt::Display for MonoidValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MonoidValue::Bool(b) => write!(f, "{}", if *b { "1" } else { "0" }),
            MonoidValue::Nat(n) => write!(f, "{n}"),
            MonoidValue::Int(n) => write!(f, "{n}"),
            MonoidValue::Word(w) => write!(f, "{w}"),
            MonoidValue::Rat(r) => write!(f, "{r}"),
        }
    }
}

/// A successor structure, shaped by a [`crate::FunctorExpr`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuccessorTerm {
    /// Index into the label list of a `Const` component.
    Label(u32),
    /// Value of a `MonoidConst` component.
    MonoidLabel(MonoidValue),
    /// A successor state.
    State(u32),
    /// Product component values, in order.
    Tuple(Vec<SuccessorTerm>),
    /// Coproduct: variant index plus payload.
    Variant(u32, Box<SuccessorTerm>),
    /// Powerset element; canonical form is sorted and duplicate-free.
    Set(Vec<SuccessorTerm>),
    /// Monoid-valued map; canonical form is key-sorted with no zero weights.
    Weighted(Vec<(SuccessorTerm, MonoidValue)>),
    /// Probability distribution; canonical form is key-sorted.
    Dist(Vec<(SuccessorTerm, Rational)>),
    /// Monotone neighbourhood system, given by its minimal sets (an
    /// antichain of sorted state sets).
    Neighbourhood(Vec<Vec<u32>>),
}

impl SuccessorTerm {
    /// All states mentioned in the term, sorted and duplicate-free.
    pub fn successors(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_states(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_states(&self, out: &mut Vec<u32>) {
        match self {
            SuccessorTerm::Label(_) | SuccessorTerm::MonoidLabel(_) => {}
            SuccessorTerm::State(s) => out.push(*s),
            SuccessorTerm::Tuple(ts) | SuccessorTerm::Set(ts) => {
                for t in ts {
                    t.collect_states(out);
                }
            }
            SuccessorTerm::Variant(_, t) => t.collect_states(out),
            SuccessorTerm::Weighted(entries) => {
                for (t, _) in entries {
                    t.collect_states(out);
                }
            }
            SuccessorTerm::Dist(entries) => {
                for (t, _) in entries {
                    t.collect_states(out);
                }
            }
            SuccessorTerm::Neighbourhood(sets) => {
                for set in sets {
                    out.extend_from_slice(set);
                }
            }
        }
    }

    /// Replace every state `s` with `map[s]`. The result is generally not
    /// in normal form; follow with [`SuccessorTerm::normalize`].
    pub fn rename(&self, map: &[u32]) -> SuccessorTerm {
        match self {
            SuccessorTerm::Label(_) | SuccessorTerm::MonoidLabel(_) => self.clone(),
            SuccessorTerm::State(s) => SuccessorTerm::State(map[*s as usize]),
            SuccessorTerm::Tuple(ts) => {
                SuccessorTerm::Tuple(ts.iter().map(|t| t.rename(map)).collect())
            }
            SuccessorTerm::Set(ts) => {
                SuccessorTerm::Set(ts.iter().map(|t| t.rename(map)).collect())
            }
            SuccessorTerm::Variant(tag, t) => {
                SuccessorTerm::Variant(*tag, Box::new(t.rename(map)))
            }
            SuccessorTerm::Weighted(entries) => SuccessorTerm::Weighted(
                entries.iter().map(|(t, w)| (t.rename(map), *w)).collect(),
            ),
            SuccessorTerm::Dist(entries) => SuccessorTerm::Dist(
                entries.iter().map(|(t, w)| (t.rename(map), *w)).collect(),
            ),
            SuccessorTerm::Neighbourhood(sets) => SuccessorTerm::Neighbourhood(
                sets.iter()
                    .map(|set| set.iter().map(|&s| map[s as usize]).collect())
                    .collect(),
            ),
        }
    }

    /// Bring the term into canonical normal form. Weights of equal keys are
    /// combined with the monoid operation, which can overflow.
    pub fn normalize(&self) -> Result<SuccessorTerm, SigError> {
        Ok(match self {
            SuccessorTerm::Label(_)
            | SuccessorTerm::MonoidLabel(_)
            | SuccessorTerm::State(_) => self.clone(),
            SuccessorTerm::Tuple(ts) => SuccessorTerm::Tuple(
                ts.iter().map(|t| t.normalize()).collect::<Result<_, _>>()?,
            ),
            SuccessorTerm::Variant(tag, t) => {
                SuccessorTerm::Variant(*tag, Box::new(t.normalize()?))
            }
            SuccessorTerm::Set(ts) => {
                let mut ts: Vec<SuccessorTerm> =
                    ts.iter().map(|t| t.normalize()).collect::<Result<_, _>>()?;
                ts.sort_unstable();
                ts.dedup();
                SuccessorTerm::Set(ts)
            }
            SuccessorTerm::Weighted(entries) => {
                let mut entries: Vec<(SuccessorTerm, MonoidValue)> = entries
                    .iter()
                    .map(|(t, w)| Ok((t.normalize()?, *w)))
                    .collect::<Result<_, SigError>>()?;
                entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                let mut merged: Vec<(SuccessorTerm, MonoidValue)> = Vec::new();
                for (t, w) in entries {
                    match merged.last_mut() {
                        Some(last) if last.0 == t => last.1 = last.1.checked_add(w)?,
                        _ => merged.push((t, w)),
                    }
                }
                merged.retain(|(_, w)| !w.is_zero());
                SuccessorTerm::Weighted(merged)
            }
            SuccessorTerm::Dist(entries) => {
                let mut entries: Vec<(SuccessorTerm, Rational)> = entries
                    .iter()
                    .map(|(t, w)| Ok((t.normalize()?, *w)))
                    .collect::<Result<_, SigError>>()?;
                entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                let mut merged: Vec<(SuccessorTerm, Rational)> = Vec::new();
                for (t, w) in entries {
                    match merged.last_mut() {
                        Some(last) if last.0 == t => last.1 = last.1.checked_add(w)?,
                        _ => merged.push((t, w)),
                    }
                }
                SuccessorTerm::Dist(merged)
            }
            SuccessorTerm::Neighbourhood(sets) => {
                let mut sets: Vec<Vec<u32>> = sets
                    .iter()
                    .map(|set| {
                        let mut s = set.clone();
                        s.sort_unstable();
                        s.dedup();
                        s
                    })
                    .collect();
                sets.sort_unstable();
                sets.dedup();
                // keep only the minimal sets: a monotone system is determined
                // by the antichain of its inclusion-minimal members
                let minimal: Vec<Vec<u32>> = sets
                    .iter()
                    .filter(|s| {
                        !sets
                            .iter()
                            .any(|t| t.len() < s.len() && is_subset(t, s))
                    })
                    .cloned()
                    .collect();
                SuccessorTerm::Neighbourhood(minimal)
            }
        })
    }
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    // both sorted
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}
