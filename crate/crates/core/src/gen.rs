//! Deterministic benchmark and test-input generators.

use std::collections::HashSet;

use crate::functor::{parse_functor_expr, FunctorExpr, MonoidKind};
use crate::rational::Rational;
use crate::table::{build_table, CoalgebraTable};
use crate::term::{MonoidValue, SuccessorTerm};

/// splitmix64; the constants are the standard ones from Steele, Lea and
/// Flood's reference implementation.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform value in 0..bound via the multiply-shift reduction.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}

/// Parameters for the weighted tree automaton generator.
#[derive(Debug, Clone, Copy)]
pub struct WtaSpec {
    /// Number of states.
    pub n: usize,
    /// Rank: number of successor positions per transition.
    pub r: usize,
    /// Weight monoid.
    pub monoid: MonoidKind,
    /// Transitions per state.
    pub k: usize,
    pub seed: u64,
}

fn random_weight(rng: &mut SplitMix64, kind: MonoidKind, nonzero: bool) -> MonoidValue {
    loop {
        let w = match kind {
            MonoidKind::BoolOr => MonoidValue::Bool(rng.below(2) == 1),
            MonoidKind::NatAdd => MonoidValue::Nat(rng.below(5)),
            MonoidKind::IntAdd => MonoidValue::Int(rng.below(7) as i64 - 3),
            MonoidKind::Word64Or => MonoidValue::Word(rng.below(16)),
            MonoidKind::RationalAdd => {
                let num = rng.below(9) as i64 - 4;
                let den = rng.below(4) as i64 + 1;
                MonoidValue::Rat(Rational::new(num, den).unwrap())
            }
        };
        if !nonzero || !w.is_zero() {
            return w;
        }
    }
}

/// Weighted tree automaton over the functor `M * M^(4 * X^r)`: every state
/// carries a final weight and `k` distinct transitions, each labelled by
/// one of four symbols and weighted with a nonzero monoid value.
pub fn gen_wta(spec: WtaSpec) -> CoalgebraTable {
    assert!(spec.n >= 1);
    let sym = spec.monoid.symbol();
    let functor = parse_functor_expr(&format!("{sym} * {sym}^(4 * X^{r})", r = spec.r))
        .unwrap();
    let mut rng = SplitMix64::new(spec.seed);
    let mut terms = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let label = SuccessorTerm::MonoidLabel(random_weight(&mut rng, spec.monoid, false));
        let mut keys = HashSet::with_capacity(spec.k);
        let mut entries = Vec::with_capacity(spec.k);
        while entries.len() < spec.k {
            let symbol = rng.below(4) as u32;
            let succ: Vec<u32> = (0..spec.r)
                .map(|_| rng.below(spec.n as u64) as u32)
                .collect();
            if !keys.insert((symbol, succ.clone())) {
                continue;
            }
            let mut comps = vec![SuccessorTerm::Label(symbol)];
            comps.extend(succ.into_iter().map(SuccessorTerm::State));
            entries.push((
                SuccessorTerm::Tuple(comps),
                random_weight(&mut rng, spec.monoid, true),
            ));
        }
        terms.push(SuccessorTerm::Tuple(vec![
            label,
            SuccessorTerm::Weighted(entries),
        ]));
    }
    build_table(functor, terms).expect("generated wta is well-shaped")
}

/// A deterministic automaton shaped as one long cycle with a single
/// accepting state; all states are behaviourally distinct.
pub fn gen_cycle_dfa(n: usize) -> CoalgebraTable {
    assert!(n >= 1);
    let functor = parse_functor_expr("{F,T} * X * X").unwrap();
    let terms = (0..n)
        .map(|i| {
            SuccessorTerm::Tuple(vec![
                SuccessorTerm::Label((i == 0) as u32),
                SuccessorTerm::State(i as u32),
                SuccessorTerm::State(((i + 1) % n) as u32),
            ])
        })
        .collect();
    build_table(functor, terms).expect("generated cycle is well-shaped")
}

/// A transition system shaped as one chain ending in a deadlock; all
/// states are behaviourally distinct.
pub fn gen_chain_ts(n: usize) -> CoalgebraTable {
    assert!(n >= 1);
    let functor = parse_functor_expr("P(X)").unwrap();
    let terms = (0..n)
        .map(|i| {
            if i + 1 < n {
                SuccessorTerm::Set(vec![SuccessorTerm::State(i as u32 + 1)])
            } else {
                SuccessorTerm::Set(vec![])
            }
        })
        .collect();
    build_table(functor, terms).expect("generated chain is well-shaped")
}

/// A ladder-shaped rational-weighted system over `{F,T} * Q^(X)`. States
/// 0..n/2 form the left rail (walking down), states n/2..n the right rail
/// (walking up), with one crossing per rung alternating direction; all
/// edges have weight 1/2. State 0 and state n-1 are marked.
pub fn gen_prob_ladder(n: usize) -> CoalgebraTable {
    assert!(n >= 4 && n.is_multiple_of(2), "ladder needs an even state count >= 4");
    let functor = parse_functor_expr("{F,T} * Q^(X)").unwrap();
    let h = n / 2;
    let half = Rational::new(1, 2).unwrap();
    let mut edges: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, e) in edges.iter_mut().enumerate().take(h - 1) {
        e.push(i as u32 + 1);
    }
    for (j, e) in edges.iter_mut().enumerate().skip(h + 1) {
        e.push(j as u32 - 1);
    }
    for t in 0..h {
        if t % 2 == 0 {
            edges[t].push((h + t) as u32);
        } else {
            edges[h + t].push(t as u32);
        }
    }
    let terms = (0..n)
        .map(|i| {
            let marked = i == 0 || i == n - 1;
            SuccessorTerm::Tuple(vec![
                SuccessorTerm::Label(marked as u32),
                SuccessorTerm::Weighted(
                    edges[i]
                        .iter()
                        .map(|&s| (SuccessorTerm::State(s), MonoidValue::Rat(half)))
                        .collect(),
                ),
            ])
        })
        .collect();
    build_table(functor, terms).expect("generated ladder is well-shaped")
}

/// A random coalgebra with the given functor shape. Successor structures
/// are kept small so that behavioural collisions actually occur.
pub fn gen_random(functor: &FunctorExpr, n: usize, seed: u64) -> CoalgebraTable {
    assert!(n >= 1);
    let mut rng = SplitMix64::new(seed);
    let terms = (0..n)
        .map(|_| random_term(functor, n, &mut rng))
        .collect();
    build_table(functor.clone(), terms).expect("generated coalgebra is well-shaped")
}

fn random_term(f: &FunctorExpr, n: usize, rng: &mut SplitMix64) -> SuccessorTerm {
    match f {
        FunctorExpr::Const(labels) => {
            assert!(!labels.is_empty(), "cannot draw from an empty label set");
            SuccessorTerm::Label(rng.below(labels.len() as u64) as u32)
        }
        FunctorExpr::MonoidConst(kind) => {
            SuccessorTerm::MonoidLabel(random_weight(rng, *kind, false))
        }
        FunctorExpr::StateVar => SuccessorTerm::State(rng.below(n as u64) as u32),
        FunctorExpr::Product(cs) => {
            SuccessorTerm::Tuple(cs.iter().map(|c| random_term(c, n, rng)).collect())
        }
        FunctorExpr::Coproduct(vs) => {
            let tag = rng.below(vs.len() as u64) as usize;
            SuccessorTerm::Variant(tag as u32, Box::new(random_term(&vs[tag].1, n, rng)))
        }
        FunctorExpr::Powerset(c) => {
            let size = rng.below(4);
            SuccessorTerm::Set((0..size).map(|_| random_term(c, n, rng)).collect())
        }
        FunctorExpr::MonoidValued(kind, c) => {
            let size = rng.below(4);
            SuccessorTerm::Weighted(
                (0..size)
                    .map(|_| (random_term(c, n, rng), random_weight(rng, *kind, true)))
                    .collect(),
            )
        }
        FunctorExpr::Distribution(c) => {
            let size = rng.below(3) + 1;
            let parts: Vec<u64> = (0..size).map(|_| rng.below(4) + 1).collect();
            let total: u64 = parts.iter().sum();
            SuccessorTerm::Dist(
                parts
                    .iter()
                    .map(|&a| {
                        (
                            random_term(c, n, rng),
                            Rational::new(a as i64, total as i64).unwrap(),
                        )
                    })
                    .collect(),
            )
        }
        FunctorExpr::MonotoneNeighbourhood => {
            let sets = rng.below(4);
            SuccessorTerm::Neighbourhood(
                (0..sets)
                    .map(|_| {
                        let size = rng.below(4);
                        (0..size).map(|_| rng.below(n as u64) as u32).collect()
                    })
                    .collect(),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimize::{minimize, naive_minimize};

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 1234567, from the published reference code
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
    }

    #[test]
    fn generators_are_deterministic() {
        let spec = WtaSpec {
            n: 20,
            r: 2,
            monoid: MonoidKind::IntAdd,
            k: 3,
            seed: 42,
        };
        assert_eq!(gen_wta(spec).terms, gen_wta(spec).terms);
        let f = parse_functor_expr("P({a,b} * X)").unwrap();
        assert_eq!(gen_random(&f, 15, 7).terms, gen_random(&f, 15, 7).terms);
        assert_ne!(gen_random(&f, 15, 7).terms, gen_random(&f, 15, 8).terms);
    }

    #[test]
    fn wta_has_k_transitions_per_state() {
        let spec = WtaSpec {
            n: 10,
            r: 3,
            monoid: MonoidKind::Word64Or,
            k: 5,
            seed: 9,
        };
        let table = gen_wta(spec);
        for t in &table.terms {
            match t {
                SuccessorTerm::Tuple(comps) => match &comps[1] {
                    SuccessorTerm::Weighted(entries) => assert_eq!(entries.len(), 5),
                    other => panic!("unexpected component: {other:?}"),
                },
                other => panic!("unexpected term: {other:?}"),
            }
        }
    }

    #[test]
    fn cycle_and_chain_are_already_minimal() {
        for n in [1, 2, 5, 16] {
            let identity: Vec<u32> = (0..n as u32).collect();
            assert_eq!(minimize(&gen_cycle_dfa(n)).unwrap().assignment, identity);
            assert_eq!(minimize(&gen_chain_ts(n)).unwrap().assignment, identity);
        }
    }

    #[test]
    fn chain_needs_a_pass_per_state() {
        let table = gen_chain_ts(12);
        let res = naive_minimize(&table).unwrap();
        assert!(res.stats.iterations >= 12);
    }

    #[test]
    fn ladder_smallest_instance() {
        // n=4 by hand: the two marked corner states have the same outgoing
        // weights, the two unmarked states have none
        let table = gen_prob_ladder(4);
        let res = minimize(&table).unwrap();
        assert_eq!(res.assignment, vec![0, 1, 1, 0]);
    }

    #[test]
    fn ladder_matches_naive_oracle() {
        for n in [4, 10, 20] {
            let table = gen_prob_ladder(n);
            let fast = minimize(&table).unwrap();
            let slow = naive_minimize(&table).unwrap();
            assert_eq!(fast.assignment, slow.assignment);
        }
    }

    #[test]
    #[should_panic(expected = "even state count")]
    fn ladder_rejects_odd() {
        gen_prob_ladder(7);
    }

    #[test]
    fn random_coalgebras_build_for_all_shapes() {
        for text in [
            "P(X)",
            "P({a,b} * X)",
            "{F,T} * D(X)",
            "2^(X)",
            "N^(X)",
            "Z^(X)",
            "W^(X)",
            "Q^(X)",
            "N(X)",
            "P(D(X))",
            "cons(X * X) + nil",
        ] {
            let f = parse_functor_expr(text).unwrap();
            for seed in 0..5 {
                let table = gen_random(&f, 12, seed);
                assert_eq!(table.n, 12);
            }
        }
    }
}
