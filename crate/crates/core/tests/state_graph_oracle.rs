//! The state-graph engine against a naive oracle: block graph built from the
//! transition definition alone, minimum cycle mean taken as the least
//! `min_v (A^k)[v][v] / k` over `k ≤ 2^c` in the min-plus semiring.

use proptest::prelude::*;

use domrat_core::circulant;
use domrat_core::generators::GeneratorSet;
use domrat_core::meancycle;
use domrat_core::rational::Rational;
use domrat_core::stategraph::{self, Coverage, State, StateGraph};

const INF: i64 = i64::MAX / 4;

/// `T → T'` iff every `j ∈ [a+1, a+c]` is in `T ∪ (T'+c)` or is `x + s` for
/// such an `x` (and, for exact cover, exactly one way).
fn naive_edge(t: u32, u: u32, gens: &GeneratorSet, exact: bool) -> bool {
    let c = gens.c() as i64;
    let a = gens.a() as i64;
    let member = |x: i64| -> bool {
        if (1..=c).contains(&x) {
            t >> (x - 1) & 1 == 1
        } else if (c + 1..=2 * c).contains(&x) {
            u >> (x - c - 1) & 1 == 1
        } else {
            false
        }
    };
    (a + 1..=a + c).all(|j| {
        let hits =
            usize::from(member(j)) + gens.elements().iter().filter(|&&s| member(j - s)).count();
        if exact {
            hits == 1
        } else {
            hits >= 1
        }
    })
}

fn naive_min_mean(gens: &GeneratorSet, exact: bool) -> Option<Rational> {
    let n = 1usize << gens.c();
    let mut w = vec![INF; n * n];
    for t in 0..n {
        for u in 0..n {
            if naive_edge(t as u32, u as u32, gens, exact) {
                w[t * n + u] = u.count_ones() as i64;
            }
        }
    }
    let mut power = w.clone();
    let mut best: Option<Rational> = None;
    for k in 1..=n {
        let diag = (0..n).map(|v| power[v * n + v]).min().unwrap();
        if diag < INF {
            let q = Rational::new(diag, k as i64).unwrap();
            best = Some(best.map_or(q, |b| b.min(q)));
        }
        let mut next = vec![INF; n * n];
        for i in 0..n {
            for m in 0..n {
                let x = power[i * n + m];
                if x >= INF {
                    continue;
                }
                for j in 0..n {
                    let y = w[m * n + j];
                    if y < INF && x + y < next[i * n + j] {
                        next[i * n + j] = x + y;
                    }
                }
            }
        }
        power = next;
    }
    best
}

fn small_set(max_c: u64) -> impl Strategy<Value = GeneratorSet> {
    prop::collection::btree_set((-6i64..=6).prop_filter("nonzero", |&s| s != 0), 1..=3)
        .prop_map(|s| GeneratorSet::new(s).unwrap())
        .prop_filter("small c", move |g| g.c() <= max_c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn engine_matches_naive_oracle(gens in small_set(6)) {
        for (coverage, exact) in [(Coverage::AtLeastOnce, false), (Coverage::ExactlyOnce, true)] {
            let g = StateGraph::build(&gens, coverage, 16).unwrap();
            let engine = g.min_mean_cycle();
            prop_assert_eq!(engine.as_ref().map(|b| b.mean), naive_min_mean(&gens, exact), "{}", gens);
            if let Some(bc) = engine {
                let mut seen = bc.cycle.clone();
                seen.sort_unstable();
                seen.dedup();
                prop_assert_eq!(seen.len(), bc.cycle.len());
                for i in 0..bc.cycle.len() {
                    let (t, u) = (bc.cycle[i], bc.cycle[(i + 1) % bc.cycle.len()]);
                    prop_assert!(naive_edge(t.bits(), u.bits(), &gens, exact));
                }
            }
        }
    }

    #[test]
    fn successors_match_definition(gens in small_set(6)) {
        let g = StateGraph::build(&gens, Coverage::AtLeastOnce, 16).unwrap();
        for t in g.states() {
            let mut expected: Vec<State> = (0..1u32 << gens.c())
                .filter(|&u| naive_edge(t.bits(), u, &gens, false))
                .map(State)
                .collect();
            expected.sort_unstable();
            let mut got = g.successors(t);
            got.sort_unstable();
            prop_assert_eq!(got, expected);
        }
    }

    #[test]
    fn karp_and_howard_agree_on_block_graph(gens in small_set(7)) {
        let g = StateGraph::build(&gens, Coverage::AtLeastOnce, 16).unwrap();
        let adj = g.to_adjacency().unwrap();
        let karp = meancycle::karp(&adj).unwrap();
        let howard = meancycle::howard(&adj).unwrap();
        prop_assert_eq!(karp.mean, howard.mean);
        prop_assert_eq!(Some(karp.mean), g.min_mean_cycle().map(|b| b.mean));
    }

    #[test]
    fn ratio_bounded_by_circulant_oracle(gens in small_set(8)) {
        let cert = stategraph::domination_ratio(&gens, 16).unwrap();
        let start = gens.elements().iter().map(|s| s.unsigned_abs()).max().unwrap() + 1;
        let limit = (gens.c() << gens.c()).clamp(start, 40);
        let scan = circulant::ratio_oracle(&gens, limit, 64).unwrap();
        prop_assert!(scan.ratio >= cert.ratio, "{}: {} < {}", gens, scan.ratio, cert.ratio);
        if scan.covers_period(cert.minimal_period) {
            prop_assert_eq!(scan.ratio, cert.ratio);
        }
    }
}

#[test]
fn two_three_against_circulant_scan() {
    let gens: GeneratorSet = "{2,3}".parse().unwrap();
    let cert = stategraph::domination_ratio(&gens, 16).unwrap();
    let scan = circulant::ratio_oracle(&gens, 40, 40).unwrap();
    assert_eq!(cert.ratio, Rational::new(2, 5).unwrap());
    assert_eq!(scan.ratio, cert.ratio);
    assert!(scan.covers_period(cert.minimal_period));
}
