//! Periodic subsets of ℤ and their block structures.

use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::generators::GeneratorSet;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodicError {
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("residue {residue} lies outside [1, {period}]")]
    ResidueOutOfRange { residue: u64, period: u64 },
    #[error("block structure must contain at least one block")]
    EmptyBlocks,
    #[error("block sizes must be positive")]
    ZeroBlock,
    #[error("period {period} exceeds the verification limit {limit}")]
    PeriodTooLarge { period: u64, limit: u64 },
    #[error("the empty set has no block structure")]
    NoElements,
}

/// Longest period that [`PeriodicSet::verify_dominating`] will scan.
pub const MAX_VERIFY_PERIOD: u64 = 100_000_000;

/// A set `U ⊆ ℤ` given by one period: `x ∈ U` iff the representative of `x`
/// in `[1, period]` is one of `residues`.
///
/// `period` need not be minimal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicSet {
    period: u64,
    residues: BTreeSet<u64>,
}

impl PeriodicSet {
    pub fn new<I: IntoIterator<Item = u64>>(
        period: u64,
        residues: I,
    ) -> Result<Self, PeriodicError> {
        if period == 0 {
            return Err(PeriodicError::ZeroPeriod);
        }
        let residues: BTreeSet<u64> = residues.into_iter().collect();
        if let Some(&r) = residues.iter().find(|&&r| r == 0 || r > period) {
            return Err(PeriodicError::ResidueOutOfRange { residue: r, period });
        }
        Ok(PeriodicSet { period, residues })
    }

    /// Builds the set from arbitrary integers, reducing each into `[1, period]`.
    pub fn from_integers<I: IntoIterator<Item = i64>>(
        period: u64,
        xs: I,
    ) -> Result<Self, PeriodicError> {
        if period == 0 {
            return Err(PeriodicError::ZeroPeriod);
        }
        let p = period as i64;
        Self::new(
            period,
            xs.into_iter().map(|x| (x - 1).rem_euclid(p) as u64 + 1),
        )
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Representative of `x` in `[1, period]`.
    pub fn reduce(&self, x: i64) -> u64 {
        (x - 1).rem_euclid(self.period as i64) as u64 + 1
    }

    pub fn contains(&self, x: i64) -> bool {
        self.residues.contains(&self.reduce(x))
    }

    /// `|U ∩ [1,p]| / p`.
    pub fn density(&self) -> Rational {
        Rational::new(self.residues.len() as i64, self.period as i64).expect("positive period")
    }

    /// `U + k`.
    pub fn translated(&self, k: i64) -> PeriodicSet {
        PeriodicSet {
            period: self.period,
            residues: self
                .residues
                .iter()
                .map(|&r| self.reduce(r as i64 + k))
                .collect(),
        }
    }

    /// Translate so the smallest residue is 1; the empty set is returned as is.
    pub fn normalized(&self) -> PeriodicSet {
        match self.residues.first() {
            Some(&r) => self.translated(1 - r as i64),
            None => self.clone(),
        }
    }

    /// Whether the two sets, viewed with the same period, differ by a translation.
    pub fn equal_up_to_translation(&self, other: &PeriodicSet) -> bool {
        if self.period != other.period || self.len() != other.len() {
            return false;
        }
        let Some(&first) = other.residues.first() else {
            return true;
        };
        self.residues
            .iter()
            .any(|&r| &self.translated(first as i64 - r as i64) == other)
    }

    /// The same set described with period `k·p`.
    pub fn repeated(&self, k: u64) -> PeriodicSet {
        let p = self.period;
        PeriodicSet {
            period: p * k,
            residues: (0..k)
                .flat_map(|i| self.residues.iter().map(move |&r| r + i * p))
                .collect(),
        }
    }

    /// The same set described with its minimal period.
    pub fn reduced(&self) -> PeriodicSet {
        let p = self.period;
        for d in (1..=p).filter(|d| p.is_multiple_of(*d)) {
            if self
                .residues
                .iter()
                .all(|&r| self.contains(r as i64 + d as i64))
            {
                return PeriodicSet {
                    period: d,
                    residues: self.residues.iter().copied().filter(|&r| r <= d).collect(),
                };
            }
        }
        unreachable!("p itself is a period")
    }

    /// For each `j ∈ [1,p]`, the number of `x ∈ U` with `x = j` or `j - x ∈ S`.
    pub fn coverage_counts(&self, gens: &GeneratorSet) -> Result<Vec<u32>, PeriodicError> {
        if self.period > MAX_VERIFY_PERIOD {
            return Err(PeriodicError::PeriodTooLarge {
                period: self.period,
                limit: MAX_VERIFY_PERIOD,
            });
        }
        let p = self.period as i64;
        let mut member = vec![false; self.period as usize + 1];
        for &r in &self.residues {
            member[r as usize] = true;
        }
        let idx = |x: i64| ((x - 1).rem_euclid(p) + 1) as usize;
        Ok((1..=p)
            .map(|j| {
                let own = member[j as usize] as u32;
                own + gens
                    .elements()
                    .iter()
                    .filter(|&&s| member[idx(j - s)])
                    .count() as u32
            })
            .collect())
    }

    /// Whether the two-way infinite set dominates `Γ(ℤ,S)`.
    pub fn verify_dominating(&self, gens: &GeneratorSet) -> Result<bool, PeriodicError> {
        Ok(self.coverage_counts(gens)?.iter().all(|&n| n >= 1))
    }

    /// Whether every vertex is dominated exactly once.
    pub fn verify_efficient(&self, gens: &GeneratorSet) -> Result<bool, PeriodicError> {
        Ok(self.coverage_counts(gens)?.iter().all(|&n| n == 1))
    }

    /// Gaps between consecutive elements, starting at the smallest residue.
    pub fn to_blocks(&self) -> Result<BlockStructure, PeriodicError> {
        let rs: Vec<u64> = self.residues.iter().copied().collect();
        if rs.is_empty() {
            return Err(PeriodicError::NoElements);
        }
        let mut sizes: Vec<u64> = rs.windows(2).map(|w| w[1] - w[0]).collect();
        sizes.push(rs[0] + self.period - rs[rs.len() - 1]);
        BlockStructure::new(sizes)
    }
}

/// Block sizes `(b_1, …, b_ℓ)` of a periodic set, repeated in both directions.
///
/// Two structures compare equal when one is a rotation of the other, since
/// they then describe translates of the same set. Use [`BlockStructure::sizes`]
/// for exact sequence comparison.
#[derive(Debug, Clone)]
pub struct BlockStructure {
    sizes: Vec<u64>,
    period: u64,
}

impl BlockStructure {
    pub fn new(sizes: Vec<u64>) -> Result<Self, PeriodicError> {
        if sizes.is_empty() {
            return Err(PeriodicError::EmptyBlocks);
        }
        if sizes.contains(&0) {
            return Err(PeriodicError::ZeroBlock);
        }
        let period = sizes
            .iter()
            .try_fold(0u64, |acc, &b| acc.checked_add(b))
            .ok_or(PeriodicError::PeriodTooLarge {
                period: u64::MAX,
                limit: u64::MAX,
            })?;
        Ok(BlockStructure { sizes, period })
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Elements at `1, 1+b_1, 1+b_1+b_2, …` modulo the period.
    pub fn to_periodic(&self) -> PeriodicSet {
        let mut x = 1u64;
        let mut residues = BTreeSet::new();
        for &b in &self.sizes {
            residues.insert(x);
            x += b;
        }
        PeriodicSet {
            period: self.period,
            residues,
        }
    }

    /// `ℓ / period`.
    pub fn density(&self) -> Rational {
        Rational::new(self.sizes.len() as i64, self.period as i64).expect("positive period")
    }

    /// Lexicographically least rotation of the sizes.
    pub fn canonical_rotation(&self) -> Vec<u64> {
        let n = self.sizes.len();
        (0..n)
            .map(|k| {
                self.sizes[k..]
                    .iter()
                    .chain(&self.sizes[..k])
                    .copied()
                    .collect::<Vec<_>>()
            })
            .min()
            .expect("nonempty")
    }
}

impl PartialEq for BlockStructure {
    fn eq(&self, other: &Self) -> bool {
        self.period == other.period
            && self.sizes.len() == other.sizes.len()
            && self.canonical_rotation() == other.canonical_rotation()
    }
}

impl Eq for BlockStructure {}

impl Hash for BlockStructure {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_rotation().hash(state);
    }
}
