//! State graphs of `Γ(ℤ,S)` and the exact domination ratio.
//!
//! A *state* is a subset of `[1,c]`, the trace of a dominating set on one
//! length-`c` window. `T → T'` is a transition when every `j ∈ [a+1, c+a]` is
//! dominated by `T ∪ (T'+c)`; no other position can dominate those `j`. A
//! doubly infinite walk is exactly a dominating set, and the domination ratio
//! is the minimum cycle mean of the state graph (edge weight `|T'|`) divided by
//! `c`.
//!
//! The block graph can have on the order of `4^c` edges, so the ratio is
//! computed on the equivalent *window graph*: nodes are again `2^c` bit
//! patterns, but each step slides the window by one position and appends one
//! bit, so every node has at most two successors. A `c`-step path in the window
//! graph from `T` to `T'` exists iff `T → T'` is a transition, and the two
//! graphs have the same minimum mean per position.

use thiserror::Error;

use crate::generators::GeneratorSet;
use crate::meancycle::{self, AdjacencyGraph, MeanCycle, WeightedGraph};
use crate::periodic::PeriodicSet;
use crate::rational::Rational;

/// Default largest `c` accepted.
pub const DEFAULT_C_MAX: u64 = 16;

/// Largest `c` ever accepted, regardless of configuration.
pub const ABSOLUTE_C_MAX: u64 = 24;

/// Largest `c` for which the block graph may be materialized edge by edge.
pub const MATERIALIZE_C_MAX: u64 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateGraphError {
    #[error("generator set is empty (c = 0)")]
    EmptyGenerators,
    #[error("c = {c} exceeds the cap {cap}")]
    CapExceeded { c: u64, cap: u64 },
}

/// A subset of `[1,c]`; position `i` is bit `i-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct State(pub u32);

impl State {
    pub fn empty() -> State {
        State(0)
    }

    pub fn full(c: u64) -> State {
        State(((1u64 << c) - 1) as u32)
    }

    pub fn from_positions<I: IntoIterator<Item = u64>>(positions: I) -> State {
        State(
            positions
                .into_iter()
                .fold(0u32, |acc, i| acc | 1 << (i - 1)),
        )
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, i: u64) -> bool {
        (1..=32).contains(&i) && self.0 >> (i - 1) & 1 == 1
    }

    /// Positions in increasing order.
    pub fn positions(self) -> Vec<u64> {
        (0..32)
            .filter(|k| self.0 >> k & 1 == 1)
            .map(|k| k + 1)
            .collect()
    }

    /// `|T|`.
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }
}

/// Which transitions are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coverage {
    /// Every vertex dominated at least once (dominating sets).
    AtLeastOnce,
    /// Every vertex dominated exactly once (efficient dominating sets).
    ExactlyOnce,
}

impl Coverage {
    fn accepts(self, count: u32) -> bool {
        match self {
            Coverage::AtLeastOnce => count >= 1,
            Coverage::ExactlyOnce => count == 1,
        }
    }
}

fn check_c(gens: &GeneratorSet, c_max: u64) -> Result<u64, StateGraphError> {
    let c = gens.c();
    if c == 0 {
        return Err(StateGraphError::EmptyGenerators);
    }
    let cap = c_max.min(ABSOLUTE_C_MAX);
    if c > cap {
        return Err(StateGraphError::CapExceeded { c, cap });
    }
    Ok(c)
}

/// For each `j ∈ [a+1, c+a]`, the positions in `[1, 2c]` that dominate `j`,
/// as a bit mask (position `x` is bit `x-1`).
fn dominator_masks(gens: &GeneratorSet) -> Vec<u64> {
    let (a, _, c) = gens.bounds();
    (a + 1..=a + c)
        .map(|j| {
            let mut m = 1u64 << (j - 1);
            for &s in gens.elements() {
                let x = j as i64 - s;
                debug_assert!(x >= 1 && x <= 2 * c as i64);
                m |= 1u64 << (x - 1);
            }
            m
        })
        .collect()
}

fn transition_with(t: State, next: State, gens: &GeneratorSet, coverage: Coverage) -> bool {
    let c = gens.c();
    if c == 0 {
        return false;
    }
    let both = t.0 as u64 | (next.0 as u64) << c;
    dominator_masks(gens)
        .iter()
        .all(|m| coverage.accepts((both & m).count_ones()))
}

/// Whether `T → T'` is a transition of the state graph of `Γ(ℤ,S)`.
pub fn is_transition(t: State, next: State, gens: &GeneratorSet) -> bool {
    transition_with(t, next, gens, Coverage::AtLeastOnce)
}

/// Whether `T → T'` keeps every vertex of `[a+1, c+a]` dominated exactly once.
pub fn is_exact_transition(t: State, next: State, gens: &GeneratorSet) -> bool {
    transition_with(t, next, gens, Coverage::ExactlyOnce)
}

/// The block state graph, with successors generated on demand.
#[derive(Debug, Clone)]
pub struct StateGraph {
    gens: GeneratorSet,
    c: u64,
    coverage: Coverage,
    /// Dominator masks split into the part inside `T` and the part inside `T'`.
    own: Vec<u32>,
    next: Vec<u32>,
}

/// How one window position constrains `T'` once `T` is fixed.
#[derive(Debug, Clone, Copy)]
struct Constraint {
    mask: u32,
    top: u32,
    exact: bool,
}

impl StateGraph {
    pub fn build(
        gens: &GeneratorSet,
        coverage: Coverage,
        c_max: u64,
    ) -> Result<Self, StateGraphError> {
        let c = check_c(gens, c_max)?;
        let low = (1u64 << c) - 1;
        let masks = dominator_masks(gens);
        Ok(StateGraph {
            gens: gens.clone(),
            c,
            coverage,
            own: masks.iter().map(|m| (m & low) as u32).collect(),
            next: masks.iter().map(|m| (m >> c) as u32).collect(),
        })
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn coverage(&self) -> Coverage {
        self.coverage
    }

    pub fn state_count(&self) -> usize {
        1usize << self.c
    }

    pub fn states(&self) -> impl Iterator<Item = State> {
        (0..(1u32 << self.c)).map(State)
    }

    pub fn is_edge(&self, t: State, next: State) -> bool {
        transition_with(t, next, &self.gens, self.coverage)
    }

    /// Successors of `t` in increasing order.
    ///
    /// Positions already settled by `t` are dropped; every other position
    /// becomes a constraint on the bits of `T'`, and only assignments that
    /// can still satisfy all constraints are explored.
    pub fn successors(&self, t: State) -> Vec<State> {
        let mut forbidden = 0u32;
        let mut constraints = Vec::new();
        for (own, next) in self.own.iter().zip(&self.next) {
            let have = (t.0 & own).count_ones();
            match (self.coverage, have) {
                (Coverage::AtLeastOnce, 0) | (Coverage::ExactlyOnce, 0) => {
                    if *next == 0 {
                        return Vec::new();
                    }
                    constraints.push(Constraint {
                        mask: *next,
                        top: 31 - next.leading_zeros(),
                        exact: self.coverage == Coverage::ExactlyOnce,
                    });
                }
                (Coverage::AtLeastOnce, _) => {}
                (Coverage::ExactlyOnce, 1) => forbidden |= next,
                (Coverage::ExactlyOnce, _) => return Vec::new(),
            }
        }
        constraints.sort_by_key(|k| k.top);
        let mut out = Vec::new();
        self.extend(0, 0, forbidden, &constraints, 0, &mut out);
        out.sort_unstable();
        out
    }

    fn extend(
        &self,
        bit: u32,
        partial: u32,
        forbidden: u32,
        constraints: &[Constraint],
        mut checked: usize,
        out: &mut Vec<State>,
    ) {
        // Every constraint whose highest bit is below `bit` is fully decided.
        while checked < constraints.len() && constraints[checked].top < bit {
            let k = constraints[checked];
            let hits = (partial & k.mask).count_ones();
            if hits == 0 || (k.exact && hits > 1) {
                return;
            }
            checked += 1;
        }
        if bit as u64 == self.c {
            out.push(State(partial));
            return;
        }
        self.extend(bit + 1, partial, forbidden, constraints, checked, out);
        if forbidden >> bit & 1 == 0 {
            self.extend(
                bit + 1,
                partial | 1 << bit,
                forbidden,
                constraints,
                checked,
                out,
            );
        }
    }

    /// Every edge, materialized with weight `|T'|`. Only for small `c`.
    pub fn to_adjacency(&self) -> Result<AdjacencyGraph, StateGraphError> {
        if self.c > MATERIALIZE_C_MAX {
            return Err(StateGraphError::CapExceeded {
                c: self.c,
                cap: MATERIALIZE_C_MAX,
            });
        }
        let mut g = AdjacencyGraph::new(self.state_count());
        for t in self.states() {
            for u in self.successors(t) {
                g.add_edge(t.0 as usize, u.0 as usize, u.weight() as i64);
            }
        }
        Ok(g)
    }

    /// The one-position window graph with the same transitions.
    pub fn window_graph(&self) -> WindowGraph {
        WindowGraph::new(&self.gens, self.coverage)
    }

    /// A minimum mean cycle of the block graph, with mean in `|T'|` per
    /// block, or `None` when the graph is acyclic (possible only for
    /// [`Coverage::ExactlyOnce`]).
    pub fn min_mean_cycle(&self) -> Option<BlockCycle> {
        let wg = self.window_graph();
        let mc = meancycle::howard(&wg)?;
        Some(wg.to_block_cycle(&mc))
    }
}

/// Shorthand for [`StateGraph::build`] with at-least-once coverage.
pub fn build_state_graph(gens: &GeneratorSet, c_max: u64) -> Result<StateGraph, StateGraphError> {
    StateGraph::build(gens, Coverage::AtLeastOnce, c_max)
}

/// Node `v` holds the bits of positions `[j-a, j+b-1]`; the step appends
/// position `j+b` and checks that `j` is covered.
#[derive(Debug, Clone)]
pub struct WindowGraph {
    c: u64,
    mask: u64,
    coverage: Coverage,
}

impl WindowGraph {
    pub fn new(gens: &GeneratorSet, coverage: Coverage) -> Self {
        let (a, _, c) = gens.bounds();
        assert!(
            (1..=ABSOLUTE_C_MAX).contains(&c),
            "window graph needs 1 <= c <= {ABSOLUTE_C_MAX}"
        );
        let mask = gens
            .elements()
            .iter()
            .fold(1u64 << a, |m, &s| m | 1u64 << (a as i64 - s));
        WindowGraph { c, mask, coverage }
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    /// Successor reached by appending `bit`, if the step is allowed.
    pub fn step(&self, v: usize, bit: u64) -> Option<usize> {
        let ext = v as u64 | bit << self.c;
        self.coverage
            .accepts((ext & self.mask).count_ones())
            .then_some((ext >> 1) as usize)
    }

    /// Converts a cycle of window states into the corresponding simple cycle
    /// of block states.
    ///
    /// The window cycle has length `L` and spells a set with minimal period
    /// `L`; its block trace repeats after `m = L / gcd(L, c)` blocks. The
    /// result starts at its least block state.
    pub fn to_block_cycle(&self, mc: &MeanCycle) -> BlockCycle {
        let len = mc.cycle.len() as u64;
        let c = self.c;
        // Appended bits; bit t sits at position c + 1 + t when cycle[0] covers [1, c].
        let appended: Vec<bool> = (0..mc.cycle.len())
            .map(|t| {
                let next = mc.cycle[(t + 1) % mc.cycle.len()];
                (next >> (c - 1)) & 1 == 1
            })
            .collect();
        let member = |x: u64| appended[((x + len * c - c - 1) % len) as usize];
        let blocks = len / gcd(len, c);
        let states: Vec<State> = (0..blocks)
            .map(|i| State::from_positions((1..=c).filter(|&k| member(i * c + k))))
            .collect();
        let start = (0..states.len())
            .min_by_key(|&i| states[i])
            .expect("nonempty");
        let cycle: Vec<State> = states[start..]
            .iter()
            .chain(&states[..start])
            .copied()
            .collect();
        let weight: u64 = cycle.iter().map(|t| t.weight() as u64).sum();
        BlockCycle {
            mean: Rational::new(weight as i64, blocks as i64).expect("nonempty"),
            cycle,
            c,
            minimal_period: len,
        }
    }
}

impl WeightedGraph for WindowGraph {
    fn node_count(&self) -> usize {
        1usize << self.c
    }

    fn for_each_edge(&self, v: usize, f: &mut dyn FnMut(usize, i64)) {
        for bit in 0..2u64 {
            if let Some(u) = self.step(v, bit) {
                f(u, bit as i64);
            }
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A simple cycle of block states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCycle {
    /// Mean of `|T|` over the cycle.
    pub mean: Rational,
    pub cycle: Vec<State>,
    pub c: u64,
    /// Minimal period of the set the cycle spells.
    pub minimal_period: u64,
}

impl BlockCycle {
    /// `cycle.len() · c`.
    pub fn period(&self) -> u64 {
        self.cycle.len() as u64 * self.c
    }

    /// `∪ (T_i + i·c)` with period `cycle.len() · c`.
    pub fn periodic_set(&self) -> PeriodicSet {
        let residues = self.cycle.iter().enumerate().flat_map(|(i, t)| {
            t.positions()
                .into_iter()
                .map(move |k| k + i as u64 * self.c)
        });
        PeriodicSet::new(self.period(), residues).expect("positions lie in one period")
    }
}

/// Exact domination ratio with a periodic witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioCertificate {
    pub generators: GeneratorSet,
    pub ratio: Rational,
    /// Simple cycle of block states, starting at its least state.
    pub cycle: Vec<State>,
    /// `∪ (T_i + i·c)` over the cycle.
    pub witness: PeriodicSet,
    /// `cycle.len() · c`.
    pub period: u64,
    /// Minimal period of the witness.
    pub minimal_period: u64,
}

impl RatioCertificate {
    pub fn c(&self) -> u64 {
        self.generators.c()
    }

    /// `c · 2^c`.
    pub fn period_bound(&self) -> u128 {
        (self.c() as u128) << self.c()
    }

    /// Checks every certificate invariant, returning the first violation.
    pub fn validate(&self) -> Result<(), String> {
        let c = self.c();
        let weight: u64 = self.cycle.iter().map(|t| t.weight() as u64).sum();
        if self.period != self.cycle.len() as u64 * c {
            return Err(format!(
                "period {} is not cycle length times c",
                self.period
            ));
        }
        if Rational::new(weight as i64, self.period as i64).ok() != Some(self.ratio) {
            return Err("ratio differs from cycle weight over period".into());
        }
        for i in 0..self.cycle.len() {
            let (t, u) = (self.cycle[i], self.cycle[(i + 1) % self.cycle.len()]);
            if !is_transition(t, u, &self.generators) {
                return Err(format!(
                    "{:?} -> {:?} is not a transition",
                    t.positions(),
                    u.positions()
                ));
            }
        }
        let mut seen = self.cycle.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.cycle.len() {
            return Err("cycle repeats a state".into());
        }
        if self.witness.period() != self.period {
            return Err("witness period differs from certificate period".into());
        }
        if self.witness.density() != self.ratio {
            return Err("witness density differs from ratio".into());
        }
        match self.witness.verify_dominating(&self.generators) {
            Ok(true) => {}
            Ok(false) => return Err("witness does not dominate".into()),
            Err(e) => return Err(e.to_string()),
        }
        if self.period as u128 > self.period_bound() {
            return Err(format!("period {} above c*2^c", self.period));
        }
        Ok(())
    }
}

/// Domination ratio of `Γ(ℤ,S)` for nonempty `S` with `c ≤ c_max`.
pub fn domination_ratio(
    gens: &GeneratorSet,
    c_max: u64,
) -> Result<RatioCertificate, StateGraphError> {
    let g = build_state_graph(gens, c_max)?;
    let bc = g
        .min_mean_cycle()
        .expect("the full state always has a self-loop");
    Ok(RatioCertificate {
        generators: gens.clone(),
        ratio: bc.mean.checked_div_int(bc.c as i64).expect("small values"),
        witness: bc.periodic_set(),
        period: bc.period(),
        minimal_period: bc.minimal_period,
        cycle: bc.cycle,
    })
}

/// Outcome of the efficient-dominating-set search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdsResult {
    pub exists: bool,
    /// Exact-cover cycle of block states, empty when none exists.
    pub cycle: Vec<State>,
    pub witness: Option<PeriodicSet>,
}

/// Decides whether `Γ(ℤ,S)` has an efficient dominating set by searching the
/// exact-cover state graph for a cycle.
pub fn eds_exists(gens: &GeneratorSet, c_max: u64) -> Result<EdsResult, StateGraphError> {
    let g = StateGraph::build(gens, Coverage::ExactlyOnce, c_max)?;
    Ok(match g.min_mean_cycle() {
        Some(bc) => EdsResult {
            exists: true,
            witness: Some(bc.periodic_set()),
            cycle: bc.cycle,
        },
        None => EdsResult {
            exists: false,
            cycle: Vec::new(),
            witness: None,
        },
    })
}
