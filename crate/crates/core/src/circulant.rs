//! Exact domination numbers of circulant digraphs `Γ(ℤ_n, S_n)`.
//!
//! Vertices are `0..n`; `u` dominates `u` and `u + r (mod n)` for every `r`
//! in the connection set. Sets are `u64` bit masks, so `n ≤ 64`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::generators::GeneratorSet;
use crate::rational::Rational;

/// Default largest order accepted by [`domination_number`].
pub const DEFAULT_N_MAX: u64 = 30;

/// Largest order the bit-mask solver can represent.
pub const ABSOLUTE_N_MAX: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CirculantError {
    #[error("order n must be positive")]
    ZeroOrder,
    #[error("generator {s} is congruent to 0 modulo {n}")]
    ZeroResidue { s: i64, n: u64 },
    #[error("residue {r} lies outside [1, {n}]")]
    ResidueOutOfRange { r: u64, n: u64 },
    #[error("n = {n} exceeds the cap {cap}")]
    CapExceeded { n: u64, cap: u64 },
    #[error("scan limit {limit} is below the smallest admissible order {min}")]
    LimitTooSmall { limit: u64, min: u64 },
}

/// `Γ(ℤ_n, S_n)` with `S_n` given by least positive residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CirculantInstance {
    n: u64,
    connection: BTreeSet<u64>,
}

impl CirculantInstance {
    /// Builds an instance from residues in `[1, n]`. The residue `n` is a
    /// loop and does not affect domination.
    pub fn new<I: IntoIterator<Item = u64>>(n: u64, connection: I) -> Result<Self, CirculantError> {
        if n == 0 {
            return Err(CirculantError::ZeroOrder);
        }
        let connection: BTreeSet<u64> = connection.into_iter().collect();
        if let Some(&r) = connection.iter().find(|&&r| r == 0 || r > n) {
            return Err(CirculantError::ResidueOutOfRange { r, n });
        }
        Ok(CirculantInstance { n, connection })
    }

    /// Least positive residues of `S` modulo `n`, merging duplicates.
    pub fn from_generators(gens: &GeneratorSet, n: u64) -> Result<Self, CirculantError> {
        if n == 0 {
            return Err(CirculantError::ZeroOrder);
        }
        let mut connection = BTreeSet::new();
        for &s in gens.elements() {
            let r = s.rem_euclid(n as i64) as u64;
            if r == 0 {
                return Err(CirculantError::ZeroResidue { s, n });
            }
            connection.insert(r);
        }
        Ok(CirculantInstance { n, connection })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn connection(&self) -> &BTreeSet<u64> {
        &self.connection
    }

    /// Connection residues other than the loop residue `n`.
    fn moves(&self) -> impl Iterator<Item = u64> + '_ {
        self.connection
            .iter()
            .copied()
            .filter(move |&r| r != self.n)
    }

    /// Number of vertices one vertex can dominate.
    pub fn max_coverage(&self) -> u64 {
        1 + self.moves().count() as u64
    }

    /// `⌈n / (|S_n| + 1)⌉`.
    pub fn counting_bound(&self) -> u64 {
        self.n.div_ceil(self.max_coverage())
    }

    /// Whether `set ⊆ [0, n)` dominates every vertex.
    pub fn is_dominating(&self, set: &[u64]) -> bool {
        let mut covered = vec![false; self.n as usize];
        for &u in set {
            covered[(u % self.n) as usize] = true;
            for r in self.moves() {
                covered[((u + r) % self.n) as usize] = true;
            }
        }
        covered.iter().all(|&c| c)
    }
}

/// `S_n` for `S` and `n`; see [`CirculantInstance::from_generators`].
pub fn residues(gens: &GeneratorSet, n: u64) -> Result<CirculantInstance, CirculantError> {
    CirculantInstance::from_generators(gens, n)
}

/// A minimum dominating set: the lexicographically least one, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domination {
    pub gamma: u64,
    pub witness: Vec<u64>,
}

struct Solver {
    n: u32,
    /// `cover[u]`: vertices dominated by `u`.
    cover: Vec<u64>,
    /// `sources[v]`: vertices dominating `v`.
    sources: Vec<u64>,
    max_cover: u32,
}

impl Solver {
    fn new(inst: &CirculantInstance) -> Solver {
        let n = inst.n;
        let mut cover = vec![0u64; n as usize];
        let mut sources = vec![0u64; n as usize];
        for u in 0..n {
            let mut m = 1u64 << u;
            for r in inst.moves() {
                m |= 1u64 << ((u + r) % n);
            }
            cover[u as usize] = m;
            for v in 0..n {
                if m >> v & 1 == 1 {
                    sources[v as usize] |= 1u64 << u;
                }
            }
        }
        Solver {
            n: n as u32,
            cover,
            sources,
            max_cover: inst.max_coverage() as u32,
        }
    }

    fn all(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Can `left` more vertices from `allowed` dominate `uncovered`?
    fn feasible(&self, uncovered: u64, mut allowed: u64, left: u32) -> bool {
        if uncovered == 0 {
            return true;
        }
        if left == 0 || uncovered.count_ones() > left * self.max_cover {
            return false;
        }
        // Branch on the uncovered vertex with the fewest candidate dominators.
        let mut pick = None;
        let mut fewest = u32::MAX;
        let mut rest = uncovered;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            let k = (self.sources[v as usize] & allowed).count_ones();
            if k < fewest {
                fewest = k;
                pick = Some(v);
                if k <= 1 {
                    break;
                }
            }
        }
        let Some(v) = pick else { return false };
        let mut cands = self.sources[v as usize] & allowed;
        while cands != 0 {
            let d = cands.trailing_zeros();
            cands &= cands - 1;
            if self.feasible(uncovered & !self.cover[d as usize], allowed, left - 1) {
                return true;
            }
            // Sets containing d are exhausted.
            allowed &= !(1u64 << d);
        }
        false
    }
}

/// Exact domination number with the lexicographically least minimum
/// dominating set.
pub fn domination_number(
    inst: &CirculantInstance,
    n_max: u64,
) -> Result<Domination, CirculantError> {
    let cap = n_max.min(ABSOLUTE_N_MAX);
    if inst.n > cap {
        return Err(CirculantError::CapExceeded { n: inst.n, cap });
    }
    let solver = Solver::new(inst);
    let all = solver.all();
    // Rotations of a dominating set dominate, so some minimum set contains 0.
    let gamma = (inst.counting_bound().max(1)..=inst.n)
        .find(|&k| solver.feasible(all & !solver.cover[0], all & !1, k as u32 - 1))
        .expect("the whole vertex set dominates");

    let mut witness = vec![0u64];
    let mut uncovered = all & !solver.cover[0];
    for i in 1..gamma {
        let last = *witness.last().expect("nonempty");
        let v = (last + 1..inst.n)
            .find(|&v| {
                let above = all & !(u64::MAX >> (63 - v));
                solver.feasible(
                    uncovered & !solver.cover[v as usize],
                    above,
                    (gamma - i - 1) as u32,
                )
            })
            .expect("a completion exists at every step");
        witness.push(v);
        uncovered &= !solver.cover[v as usize];
    }
    debug_assert_eq!(uncovered, 0);
    Ok(Domination { gamma, witness })
}

/// Result of scanning `γ(ℤ_n, S_n)/n` over a range of orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleScan {
    /// Least ratio seen, an upper bound on the domination ratio of `Γ(ℤ,S)`.
    pub ratio: Rational,
    /// Smallest `n` attaining `ratio`.
    pub attained_at: u64,
    /// Every `(n, γ)` evaluated, in increasing `n`; orders with a zero
    /// residue are skipped.
    pub scanned: Vec<(u64, u64)>,
}

impl OracleScan {
    /// Whether the scan included a multiple of `period`. If a dominating set
    /// of `Γ(ℤ,S)` attaining the ratio has that period, the scan's minimum is
    /// then exactly the ratio rather than an upper bound.
    pub fn covers_period(&self, period: u64) -> bool {
        self.scanned.iter().any(|&(n, _)| n % period == 0)
    }
}

/// `min γ(ℤ_n, S_n)/n` over `n ∈ [max|s|+1, n_limit]` without zero residues.
pub fn ratio_oracle(
    gens: &GeneratorSet,
    n_limit: u64,
    n_max: u64,
) -> Result<OracleScan, CirculantError> {
    let start = gens
        .elements()
        .iter()
        .map(|s| s.unsigned_abs())
        .max()
        .unwrap_or(0)
        + 1;
    if n_limit < start {
        return Err(CirculantError::LimitTooSmall {
            limit: n_limit,
            min: start,
        });
    }
    let cap = n_max.min(ABSOLUTE_N_MAX);
    if n_limit > cap {
        return Err(CirculantError::CapExceeded { n: n_limit, cap });
    }
    let mut best: Option<(Rational, u64)> = None;
    let mut scanned = Vec::new();
    for n in start..=n_limit {
        let inst = match residues(gens, n) {
            Ok(i) => i,
            Err(CirculantError::ZeroResidue { .. }) => continue,
            Err(e) => return Err(e),
        };
        let gamma = domination_number(&inst, cap)?.gamma;
        scanned.push((n, gamma));
        let q = Rational::new(gamma as i64, n as i64).expect("n > 0");
        if best.is_none_or(|(b, _)| q < b) {
            best = Some((q, n));
        }
    }
    let (ratio, attained_at) = best.expect("n = max|s| + 1 never has a zero residue");
    Ok(OracleScan {
        ratio,
        attained_at,
        scanned,
    })
}
