//! Canonical byte encodings of successor structures modulo a partition.
//!
//! `encode_sig(f, t, p)` serializes `F[p](t)`: the term with every state
//! replaced by its current block number, written in a canonical order so
//! that two terms get equal bytes exactly when they denote the same
//! element of `F(blocks)`.
//!
//! Layout: all indices, counts, block numbers and variant tags are
//! little-endian u32; monoid weights are fixed-width little-endian
//! (1 byte for booleans, 8 bytes for the 64-bit monoids, two i64 for
//! rationals in lowest terms). Products concatenate their components.
//! Set, map and neighbourhood encodings are length-prefixed lists of the
//! canonically sorted, merged entries.

use std::collections::HashMap;

use crate::error::SigError;
use crate::rational::Rational;
use crate::term::{MonoidValue, SuccessorTerm};

/// A signature: equal as byte strings iff the underlying structures are
/// equal after applying the partition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignatureBytes(pub Vec<u8>);

/// Encode the signature of term `t` under block assignment `p`.
pub fn encode_sig(t: &SuccessorTerm, p: &[u32]) -> Result<SignatureBytes, SigError> {
    let mut out = Vec::new();
    encode_into(t, p, &mut out)?;
    Ok(SignatureBytes(out))
}

fn push_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn push_weight(out: &mut Vec<u8>, w: &MonoidValue) {
    match w {
        MonoidValue::Bool(b) => out.push(*b as u8),
        MonoidValue::Nat(n) => out.extend_from_slice(&n.to_le_bytes()),
        MonoidValue::Int(n) => out.extend_from_slice(&n.to_le_bytes()),
        MonoidValue::Word(n) => out.extend_from_slice(&n.to_le_bytes()),
        MonoidValue::Rat(r) => {
            out.extend_from_slice(&r.num().to_le_bytes());
            out.extend_from_slice(&r.den().to_le_bytes());
        }
    }
}

fn encode_into(t: &SuccessorTerm, p: &[u32], out: &mut Vec<u8>) -> Result<(), SigError> {
    match t {
        SuccessorTerm::Label(i) => push_u32(out, *i),
        SuccessorTerm::MonoidLabel(w) => push_weight(out, w),
        SuccessorTerm::State(s) => push_u32(out, p[*s as usize]),
        SuccessorTerm::Tuple(ts) => {
            for c in ts {
                encode_into(c, p, out)?;
            }
        }
        SuccessorTerm::Variant(tag, payload) => {
            push_u32(out, *tag);
            encode_into(payload, p, out)?;
        }
        SuccessorTerm::Set(ts) => {
            let mut encs: Vec<Vec<u8>> = Vec::with_capacity(ts.len());
            for c in ts {
                let mut buf = Vec::new();
                encode_into(c, p, &mut buf)?;
                encs.push(buf);
            }
            encs.sort_unstable();
            encs.dedup();
            push_u32(out, encs.len() as u32);
            for e in encs {
                out.extend_from_slice(&e);
            }
        }
        SuccessorTerm::Weighted(entries) => {
            let merged = merge_weights(entries, p)?;
            push_u32(out, merged.len() as u32);
            for (key, w) in merged {
                out.extend_from_slice(&key);
                push_weight(out, &w);
            }
        }
        SuccessorTerm::Dist(entries) => {
            let mut encs: Vec<(Vec<u8>, Rational)> = Vec::with_capacity(entries.len());
            for (c, w) in entries {
                let mut buf = Vec::new();
                encode_into(c, p, &mut buf)?;
                encs.push((buf, *w));
            }
            encs.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            let mut merged: Vec<(Vec<u8>, Rational)> = Vec::new();
            for (key, w) in encs {
                match merged.last_mut() {
                    Some(last) if last.0 == key => last.1 = last.1.checked_add(w)?,
                    _ => merged.push((key, w)),
                }
            }
            push_u32(out, merged.len() as u32);
            for (key, w) in merged {
                out.extend_from_slice(&key);
                out.extend_from_slice(&w.num().to_le_bytes());
                out.extend_from_slice(&w.den().to_le_bytes());
            }
        }
        SuccessorTerm::Neighbourhood(sets) => {
            // map each set through p, then keep the minimal antichain
            let mut mapped: Vec<Vec<u32>> = sets
                .iter()
                .map(|set| {
                    let mut s: Vec<u32> = set.iter().map(|&x| p[x as usize]).collect();
                    s.sort_unstable();
                    s.dedup();
                    s
                })
                .collect();
            mapped.sort_unstable();
            mapped.dedup();
            let minimal: Vec<&Vec<u32>> = mapped
                .iter()
                .filter(|s| {
                    !mapped
                        .iter()
                        .any(|t| t.len() < s.len() && is_subset(t, s))
                })
                .collect();
            push_u32(out, minimal.len() as u32);
            for set in minimal {
                push_u32(out, set.len() as u32);
                for &b in set {
                    push_u32(out, b);
                }
            }
        }
    }
    Ok(())
}

fn merge_weights(
    entries: &[(SuccessorTerm, MonoidValue)],
    p: &[u32],
) -> Result<Vec<(Vec<u8>, MonoidValue)>, SigError> {
    let mut encs: Vec<(Vec<u8>, MonoidValue)> = Vec::with_capacity(entries.len());
    for (c, w) in entries {
        let mut buf = Vec::new();
        encode_into(c, p, &mut buf)?;
        encs.push((buf, *w));
    }
    encs.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(Vec<u8>, MonoidValue)> = Vec::new();
    for (key, w) in encs {
        match merged.last_mut() {
            Some(last) if last.0 == key => last.1 = last.1.checked_add(w)?,
            _ => merged.push((key, w)),
        }
    }
    merged.retain(|(_, w)| !w.is_zero());
    Ok(merged)
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// Map signatures to dense numbers 0..k in order of first occurrence.
pub fn renumber(sigs: &[SignatureBytes]) -> Vec<u32> {
    let mut ids: HashMap<&SignatureBytes, u32> = HashMap::with_capacity(sigs.len());
    let mut next = 0u32;
    sigs.iter()
        .map(|s| {
            *ids.entry(s).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            })
        })
        .collect()
}

/// Like [`renumber`], but with number 0 reserved for the clean
/// representative's signature: a dirty state gets 0 exactly when its
/// signature equals the clean one, so it stays with the clean states.
pub fn renumber_prime(dirty: &[SignatureBytes], clean: Option<&SignatureBytes>) -> Vec<u32> {
    let mut a = renumber(dirty);
    let clean_sig = match clean {
        Some(s) => s,
        None => return a,
    };
    match dirty.iter().position(|s| s == clean_sig) {
        Some(i) => {
            let v = a[i];
            if v != 0 {
                for x in a.iter_mut() {
                    if *x == v {
                        *x = 0;
                    } else if *x == 0 {
                        *x = v;
                    }
                }
            }
        }
        None => {
            for x in a.iter_mut() {
                *x += 1;
            }
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::MonoidKind;

    fn st(s: u32) -> SuccessorTerm {
        SuccessorTerm::State(s)
    }

    fn sig(t: &SuccessorTerm, p: &[u32]) -> SignatureBytes {
        encode_sig(t, p).unwrap()
    }

    #[test]
    fn identified_set_elements_collapse() {
        // {1,1,1} under a partition putting 1,2,3 into one block equals {1}
        let many = SuccessorTerm::Set(vec![st(1), st(2), st(3)]);
        let one = SuccessorTerm::Set(vec![st(1)]);
        let p = [0, 1, 1, 1];
        assert_eq!(sig(&many, &p), sig(&one, &p));
        let q = [0, 1, 2, 1];
        assert_ne!(sig(&many, &q), sig(&one, &q));
    }

    #[test]
    fn distribution_weights_merge() {
        // (F, {5: 1/2, 3: 1/2}) with 5 and 3 in block 2 becomes (F, {2: 1})
        let t = SuccessorTerm::Tuple(vec![
            SuccessorTerm::Label(0),
            SuccessorTerm::Dist(vec![
                (st(5), Rational::new(1, 2).unwrap()),
                (st(3), Rational::new(1, 2).unwrap()),
            ]),
        ]);
        let u = SuccessorTerm::Tuple(vec![
            SuccessorTerm::Label(0),
            SuccessorTerm::Dist(vec![(st(3), Rational::ONE)]),
        ]);
        let p = [0, 0, 0, 2, 0, 2];
        assert_eq!(sig(&t, &p), sig(&u, &p));
    }

    #[test]
    fn weighted_zero_sum_entries_vanish() {
        let t = SuccessorTerm::Weighted(vec![
            (st(0), MonoidValue::Int(7)),
            (st(1), MonoidValue::Int(-7)),
        ]);
        let empty = SuccessorTerm::Weighted(vec![]);
        assert_eq!(sig(&t, &[0, 0]), sig(&empty, &[0, 0]));
        assert_ne!(sig(&t, &[0, 1]), sig(&empty, &[0, 1]));
    }

    #[test]
    fn weighted_merge_overflow_propagates() {
        let t = SuccessorTerm::Weighted(vec![
            (st(0), MonoidValue::Nat(u64::MAX)),
            (st(1), MonoidValue::Nat(1)),
        ]);
        assert_eq!(encode_sig(&t, &[0, 0]), Err(SigError::Overflow));
        assert!(encode_sig(&t, &[0, 1]).is_ok());
    }

    #[test]
    fn neighbourhood_minimal_sets_only() {
        // atoms {{1,2},{1},{2,3}} reduce to {{1},{2,3}}
        let t = SuccessorTerm::Neighbourhood(vec![vec![1, 2], vec![1], vec![2, 3]]);
        let u = SuccessorTerm::Neighbourhood(vec![vec![1], vec![2, 3]]);
        let id = [0, 1, 2, 3];
        assert_eq!(sig(&t, &id), sig(&u, &id));
    }

    #[test]
    fn neighbourhood_collapse_under_partition() {
        // identifying 1 and 2 makes {1,2} collapse to {1}, absorbing {2,3}
        let t = SuccessorTerm::Neighbourhood(vec![vec![1, 2], vec![2, 3]]);
        let u = SuccessorTerm::Neighbourhood(vec![vec![1]]);
        let p = [0, 1, 1, 2];
        assert_eq!(sig(&t, &p), sig(&u, &p));
    }

    #[test]
    fn monoid_labels_have_fixed_width() {
        for kind in [
            MonoidKind::BoolOr,
            MonoidKind::NatAdd,
            MonoidKind::IntAdd,
            MonoidKind::Word64Or,
            MonoidKind::RationalAdd,
        ] {
            let z = SuccessorTerm::MonoidLabel(MonoidValue::zero(kind));
            let width = sig(&z, &[]).0.len();
            assert!(width == 1 || width == 8 || width == 16);
        }
    }

    #[test]
    fn renumber_first_occurrence() {
        let sigs: Vec<SignatureBytes> = ["b", "a", "a", "c"]
            .iter()
            .map(|s| SignatureBytes(s.as_bytes().to_vec()))
            .collect();
        assert_eq!(renumber(&sigs), vec![0, 1, 1, 2]);
    }

    #[test]
    fn renumber_prime_pins_clean_signature_to_zero() {
        let s = SignatureBytes(b"sigma".to_vec());
        let t = SignatureBytes(b"tau".to_vec());
        let dirty = vec![s.clone(), t.clone(), s.clone()];
        assert_eq!(renumber_prime(&dirty, Some(&t)), vec![1, 0, 1]);
        // clean signature absent: no dirty state may stay in sub-block 0
        let u = SignatureBytes(b"ups".to_vec());
        assert_eq!(renumber_prime(&dirty, Some(&u)), vec![1, 2, 1]);
        // no clean state at all
        assert_eq!(renumber_prime(&dirty, None), vec![0, 1, 0]);
        // clean signature already first
        assert_eq!(renumber_prime(&dirty, Some(&s)), vec![0, 1, 0]);
    }

    #[test]
    fn tuple_concatenation_order_matters() {
        let ab = SuccessorTerm::Tuple(vec![st(0), st(1)]);
        let ba = SuccessorTerm::Tuple(vec![st(1), st(0)]);
        assert_ne!(sig(&ab, &[0, 1]), sig(&ba, &[0, 1]));
        assert_eq!(sig(&ab, &[0, 0]), sig(&ba, &[0, 0]));
    }

    #[test]
    fn variant_tags_distinguish() {
        let a = SuccessorTerm::Variant(0, Box::new(st(0)));
        let b = SuccessorTerm::Variant(1, Box::new(st(0)));
        assert_ne!(sig(&a, &[0]), sig(&b, &[0]));
    }
}
