//! Partition refinement up to behavioural equivalence.
//!
//! [`minimize`] runs the worklist algorithm over the refinable partition:
//! pop a block, compute signatures for its dirty states and one clean
//! representative, split the block by signature, and mark the predecessors
//! of every state that changed block. Signature computations total
//! O(m log n) because a state's signature is only recomputed after one of
//! its successors moves, and each state moves between blocks at most
//! ceil(log2 n) times.
//!
//! [`naive_minimize`] recomputes all n signatures per pass until the
//! partition stops changing; it serves as a reference implementation.

use crate::error::{BuildError, SigError};
use crate::partition::RefinablePartition;
use crate::sig::{encode_sig, renumber, renumber_prime, SignatureBytes};
use crate::table::{build_table, CoalgebraTable};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InstrumentationStats {
    /// Number of signature encodings performed.
    pub sig_calls: u64,
    /// Number of dirty markings, counting the n initial ones.
    pub mark_dirty_calls: u64,
    /// Largest number of block changes any single state went through.
    pub max_block_moves: u32,
    /// Worklist pops (optimized) or refinement passes (naive).
    pub iterations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionResult {
    /// Block number per state, numbered 0.. in order of first occurrence.
    pub assignment: Vec<u32>,
    pub block_count: usize,
    pub stats: InstrumentationStats,
}

/// ceil(log2 n), with n <= 1 giving 0.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// The guaranteed ceiling on signature computations: 2 (m ceil(log2 n) + n).
pub fn sig_call_bound(n: usize, m: u64) -> u64 {
    2 * (m * ceil_log2(n) as u64 + n as u64)
}

/// The guaranteed ceiling on dirty markings: m ceil(log2 n) + n.
pub fn mark_dirty_bound(n: usize, m: u64) -> u64 {
    m * ceil_log2(n) as u64 + n as u64
}

fn empty_result() -> PartitionResult {
    PartitionResult {
        assignment: Vec::new(),
        block_count: 0,
        stats: InstrumentationStats::default(),
    }
}

/// Renumber an arbitrary block assignment densely by first occurrence.
fn canonical_assignment(raw: &[u32]) -> (Vec<u32>, usize) {
    let mut remap: Vec<Option<u32>> = vec![None; raw.len()];
    let mut next = 0u32;
    let out = raw
        .iter()
        .map(|&b| {
            *remap[b as usize].get_or_insert_with(|| {
                let id = next;
                next += 1;
                id
            })
        })
        .collect();
    (out, next as usize)
}

/// Compute the coarsest stable partition with the worklist algorithm.
pub fn minimize(table: &CoalgebraTable) -> Result<PartitionResult, SigError> {
    if table.n == 0 {
        return Ok(empty_result());
    }
    let mut part = RefinablePartition::new(table.n);
    let mut sig_calls = 0u64;
    let mut iterations = 0u64;
    let mut touched: Vec<u32> = Vec::new();
    while let Some(b) = part.pop_worklist() {
        iterations += 1;
        let dirty: Vec<u32> = part.dirty_states(b).to_vec();
        if dirty.is_empty() {
            continue;
        }
        let clean = part.one_clean(b);
        let (dirty_sigs, clean_sig) = {
            let p = part.assignment();
            let mut sigs = Vec::with_capacity(dirty.len());
            for &x in &dirty {
                sigs.push(encode_sig(&table.terms[x as usize], p)?);
                sig_calls += 1;
            }
            let clean_sig = match clean {
                Some(c) => {
                    sig_calls += 1;
                    Some(encode_sig(&table.terms[c as usize], p)?)
                }
                None => None,
            };
            (sigs, clean_sig)
        };
        let a = renumber_prime(&dirty_sigs, clean_sig.as_ref());
        let new_blocks = part.split(b, &a);
        touched.clear();
        for &nb in &new_blocks {
            touched.extend_from_slice(part.states_of(nb));
        }
        for &y in &touched {
            for &x in &table.pred[y as usize] {
                part.mark_dirty(x);
            }
        }
    }
    let (assignment, block_count) = canonical_assignment(part.assignment());
    Ok(PartitionResult {
        assignment,
        block_count,
        stats: InstrumentationStats {
            sig_calls,
            mark_dirty_calls: part.mark_dirty_calls(),
            max_block_moves: part.max_block_moves(),
            iterations,
        },
    })
}

/// Reference algorithm: refine the whole partition by full signature
/// passes until it stabilizes.
pub fn naive_minimize(table: &CoalgebraTable) -> Result<PartitionResult, SigError> {
    if table.n == 0 {
        return Ok(empty_result());
    }
    let mut p: Vec<u32> = vec![0; table.n];
    let mut block_count = 1usize;
    let mut sig_calls = 0u64;
    let mut iterations = 0u64;
    // refine until the number of blocks stops growing
    loop {
        iterations += 1;
        let sigs: Vec<SignatureBytes> = table
            .terms
            .iter()
            .map(|t| encode_sig(t, &p))
            .collect::<Result<_, _>>()?;
        sig_calls += table.n as u64;
        p = renumber(&sigs);
        let next_count = p.iter().copied().max().map_or(0, |b| b as usize + 1);
        if next_count == block_count {
            break;
        }
        block_count = next_count;
    }
    Ok(PartitionResult {
        assignment: p,
        block_count,
        stats: InstrumentationStats {
            sig_calls,
            mark_dirty_calls: 0,
            max_block_moves: 0,
            iterations,
        },
    })
}

/// Check that the assignment is stable: states in the same block must have
/// equal signatures under it. Returns the first violating pair, if any.
pub fn check_stable(
    table: &CoalgebraTable,
    assignment: &[u32],
) -> Result<Option<(u32, u32)>, SigError> {
    assert_eq!(assignment.len(), table.n, "assignment length mismatch");
    let mut rep_sig: Vec<Option<(u32, SignatureBytes)>> = Vec::new();
    for x in 0..table.n {
        let b = assignment[x] as usize;
        if b >= rep_sig.len() {
            rep_sig.resize(b + 1, None);
        }
        let s = encode_sig(&table.terms[x], assignment)?;
        match &rep_sig[b] {
            Some((rep, sig)) if *sig != s => return Ok(Some((*rep, x as u32))),
            Some(_) => {}
            None => rep_sig[b] = Some((x as u32, s)),
        }
    }
    Ok(None)
}

/// Build the quotient coalgebra on the blocks of a stable partition. Block
/// `b` takes its term from the least state assigned to it, with all state
/// references renamed to block numbers and the term renormalized.
pub fn quotient(
    table: &CoalgebraTable,
    result: &PartitionResult,
) -> Result<CoalgebraTable, BuildError> {
    let mut rep: Vec<Option<u32>> = vec![None; result.block_count];
    for x in 0..table.n {
        let b = result.assignment[x] as usize;
        if rep[b].is_none() {
            rep[b] = Some(x as u32);
        }
    }
    let terms = rep
        .iter()
        .map(|r| {
            let r = r.expect("every block has a representative") as usize;
            table.terms[r].rename(&result.assignment)
        })
        .collect();
    build_table(table.functor.clone(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::parse_functor_expr;
    use crate::rational::Rational;
    use crate::term::SuccessorTerm;

    fn st(s: u32) -> SuccessorTerm {
        SuccessorTerm::State(s)
    }

    fn dfa_state(acc: u32, a: u32, b: u32) -> SuccessorTerm {
        SuccessorTerm::Tuple(vec![SuccessorTerm::Label(acc), st(a), st(b)])
    }

    /// The five-state automaton example: states 1 and 2 are equivalent, as
    /// are 3 and 4.
    fn dfa_example() -> CoalgebraTable {
        let f = parse_functor_expr("{F,T} * X * X").unwrap();
        build_table(
            f,
            vec![
                dfa_state(0, 1, 2),
                dfa_state(0, 3, 2),
                dfa_state(0, 4, 2),
                dfa_state(1, 4, 3),
                dfa_state(1, 3, 3),
            ],
        )
        .unwrap()
    }

    fn ts_example() -> CoalgebraTable {
        let f = parse_functor_expr("P(X)").unwrap();
        build_table(
            f,
            vec![
                SuccessorTerm::Set(vec![st(1), st(2), st(3)]),
                SuccessorTerm::Set(vec![st(0), st(3)]),
                SuccessorTerm::Set(vec![st(2), st(3), st(4)]),
                SuccessorTerm::Set(vec![st(3), st(4)]),
                SuccessorTerm::Set(vec![]),
            ],
        )
        .unwrap()
    }

    fn markov_state(acc: u32, dist: &[(u32, i64, i64)]) -> SuccessorTerm {
        SuccessorTerm::Tuple(vec![
            SuccessorTerm::Label(acc),
            SuccessorTerm::Dist(
                dist.iter()
                    .map(|&(s, p, q)| (st(s), Rational::new(p, q).unwrap()))
                    .collect(),
            ),
        ])
    }

    fn markov_example() -> CoalgebraTable {
        let f = parse_functor_expr("{F,T} * D(X)").unwrap();
        build_table(
            f,
            vec![
                markov_state(0, &[(1, 1, 3), (2, 2, 3)]),
                markov_state(0, &[(1, 1, 2), (3, 1, 2)]),
                markov_state(0, &[(1, 1, 4), (3, 1, 2), (4, 1, 4)]),
                markov_state(1, &[(3, 1, 1)]),
                markov_state(0, &[(2, 1, 2), (3, 1, 2)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn dfa_golden_partition() {
        let table = dfa_example();
        let res = minimize(&table).unwrap();
        assert_eq!(res.assignment, vec![0, 1, 1, 2, 2]);
        assert_eq!(res.block_count, 3);
    }

    #[test]
    fn ts_golden_partition() {
        let table = ts_example();
        let res = minimize(&table).unwrap();
        assert_eq!(res.assignment, vec![0, 0, 1, 1, 2]);
        assert_eq!(res.block_count, 3);
    }

    #[test]
    fn markov_golden_partition() {
        let table = markov_example();
        let res = minimize(&table).unwrap();
        assert_eq!(res.assignment, vec![0, 1, 1, 2, 1]);
        assert_eq!(res.block_count, 3);
    }

    #[test]
    fn naive_agrees_on_examples() {
        for table in [dfa_example(), ts_example(), markov_example()] {
            let a = minimize(&table).unwrap();
            let b = naive_minimize(&table).unwrap();
            assert_eq!(a.assignment, b.assignment);
            assert_eq!(a.block_count, b.block_count);
        }
    }

    #[test]
    fn naive_iteration_trace_on_dfa() {
        // block counts go 1 -> 2 -> 3 -> 3, so three passes
        let table = dfa_example();
        let res = naive_minimize(&table).unwrap();
        assert_eq!(res.stats.iterations, 3);
        assert_eq!(res.stats.sig_calls, 15);
    }

    #[test]
    fn counters_respect_bounds_on_examples() {
        for table in [dfa_example(), ts_example(), markov_example()] {
            let res = minimize(&table).unwrap();
            assert!(res.stats.sig_calls <= sig_call_bound(table.n, table.m));
            assert!(res.stats.mark_dirty_calls <= mark_dirty_bound(table.n, table.m));
            assert!(res.stats.max_block_moves <= ceil_log2(table.n));
        }
    }

    #[test]
    fn outputs_are_stable_and_coarsest_on_examples() {
        for table in [dfa_example(), ts_example(), markov_example()] {
            let res = minimize(&table).unwrap();
            assert_eq!(check_stable(&table, &res.assignment).unwrap(), None);
            // the all-singletons partition is stable but not coarsest;
            // the computed one must have no more blocks than any stable one
            let singletons: Vec<u32> = (0..table.n as u32).collect();
            assert_eq!(check_stable(&table, &singletons).unwrap(), None);
            assert!(res.block_count <= table.n);
        }
    }

    #[test]
    fn check_stable_reports_violations() {
        let table = dfa_example();
        // lumping an accepting with a non-accepting state is unstable
        let bad = vec![0, 0, 0, 0, 0];
        let pair = check_stable(&table, &bad).unwrap();
        assert!(pair.is_some());
    }

    #[test]
    fn dfa_quotient_golden() {
        let table = dfa_example();
        let res = minimize(&table).unwrap();
        let q = quotient(&table, &res).unwrap();
        assert_eq!(q.n, 3);
        assert_eq!(
            q.terms,
            vec![dfa_state(0, 1, 1), dfa_state(0, 2, 1), dfa_state(1, 2, 2)]
        );
    }

    #[test]
    fn markov_quotient_golden() {
        let table = markov_example();
        let res = minimize(&table).unwrap();
        let q = quotient(&table, &res).unwrap();
        assert_eq!(q.n, 3);
        assert_eq!(
            q.terms,
            vec![
                markov_state(0, &[(1, 1, 1)]),
                markov_state(0, &[(1, 1, 2), (2, 1, 2)]),
                markov_state(1, &[(2, 1, 1)]),
            ]
        );
    }

    #[test]
    fn quotient_is_already_minimal() {
        for table in [dfa_example(), ts_example(), markov_example()] {
            let res = minimize(&table).unwrap();
            let q = quotient(&table, &res).unwrap();
            let res_q = minimize(&q).unwrap();
            let identity: Vec<u32> = (0..q.n as u32).collect();
            assert_eq!(res_q.assignment, identity);
        }
    }

    #[test]
    fn quotient_by_singletons_is_isomorphic_copy() {
        let table = dfa_example();
        let identity = PartitionResult {
            assignment: (0..table.n as u32).collect(),
            block_count: table.n,
            stats: InstrumentationStats::default(),
        };
        assert_eq!(quotient(&table, &identity).unwrap(), table);
    }

    #[test]
    fn empty_and_singleton_systems() {
        let f = parse_functor_expr("P(X)").unwrap();
        let empty = build_table(f.clone(), vec![]).unwrap();
        assert_eq!(minimize(&empty).unwrap(), empty_result());
        let single = build_table(f, vec![SuccessorTerm::Set(vec![st(0)])]).unwrap();
        let res = minimize(&single).unwrap();
        assert_eq!(res.assignment, vec![0]);
        assert_eq!(res.block_count, 1);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(0), 0);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }
}
