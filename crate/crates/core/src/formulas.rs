//! Closed-form domination ratios and circulant domination numbers.
//!
//! Where only inequalities are known the result is a [`Known::Bounds`] pair,
//! never a point value.

use thiserror::Error;

use crate::generators::{GeneratorError, GeneratorSet};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("outside the formula's domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Generators(#[from] GeneratorError),
}

fn domain<T>(msg: impl Into<String>) -> Result<T, FormulaError> {
    Err(FormulaError::Domain(msg.into()))
}

fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num, den).expect("positive denominator")
}

/// Which closed form governs `{1, s}`, with its parameter `k ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneSCase {
    /// `s ≡ 2 (mod 3)`.
    TwoModThree,
    /// `s = 3k + 1`.
    ThreeKPlusOne(i64),
    /// `s = −3k`.
    MinusThreeK(i64),
    /// `s = 3k`.
    ThreeK(i64),
    /// `s = −3k + 1`.
    OneMinusThreeK(i64),
}

/// Classifies `s ∉ {0, 1}` into exactly one case.
pub fn classify_one_s(s: i64) -> Result<OneSCase, FormulaError> {
    if s == 0 || s == 1 {
        return domain(format!("{{1,{s}}} requires s outside {{0,1}}"));
    }
    let q = s.div_euclid(3);
    Ok(match s.rem_euclid(3) {
        2 => OneSCase::TwoModThree,
        1 if s > 0 => OneSCase::ThreeKPlusOne(q),
        1 => OneSCase::OneMinusThreeK(-q),
        _ if s > 0 => OneSCase::ThreeK(q),
        _ => OneSCase::MinusThreeK(-q),
    })
}

/// Domination ratio of `Γ(ℤ, {1, s})`.
pub fn ratio_one_s(s: i64) -> Result<Rational, FormulaError> {
    Ok(match classify_one_s(s)? {
        OneSCase::TwoModThree => ratio(1, 3),
        OneSCase::ThreeKPlusOne(k) | OneSCase::MinusThreeK(k) => ratio(k + 1, 3 * k + 2),
        OneSCase::ThreeK(k) | OneSCase::OneMinusThreeK(k) => ratio(2 * k, 6 * k - 1),
    })
}

fn quotient(s: i64, t: i64) -> Result<i64, FormulaError> {
    if s == 0 || t == 0 || s == t {
        return domain(format!("({s},{t}) must be distinct and nonzero"));
    }
    if t % s != 0 {
        return domain(format!("{s} does not divide {t}"));
    }
    Ok(t / s)
}

/// Domination ratio of `Γ(ℤ, {s, t})` when `s | t`.
pub fn ratio_pair_dividing(s: i64, t: i64) -> Result<Rational, FormulaError> {
    ratio_one_s(quotient(s, t)?)
}

/// Whether `Γ(ℤ, {s, t})` with `s | t` has an efficient dominating set.
pub fn eds_predicted(s: i64, t: i64) -> Result<bool, FormulaError> {
    Ok(quotient(s, t)?.rem_euclid(3) == 2)
}

/// Ratio of a single generator set `{s}`, or of the empty set.
pub fn ratio_small(gens: &GeneratorSet) -> Result<Rational, FormulaError> {
    match gens.len() {
        0 => Ok(Rational::ONE),
        1 => Ok(ratio(1, 2)),
        n => domain(format!("expected at most one generator, got {n}")),
    }
}

/// `{i_r (s+1) + r : r = 1..s}`, whose ratio is `1/(s+1)` with efficient
/// dominating set `(s+1)ℤ`.
pub fn cong_family(s: u64, offsets: &[i64]) -> Result<GeneratorSet, FormulaError> {
    if offsets.len() as u64 != s {
        return domain(format!("expected {s} offsets, got {}", offsets.len()));
    }
    let m = s as i64 + 1;
    let elements: Vec<i64> = offsets.iter().zip(1..).map(|(&i, r)| i * m + r).collect();
    Ok(GeneratorSet::new(elements)?)
}

/// Predicted ratio `1/(|S|+1)` of a congruence family.
pub fn cong_ratio(s: u64) -> Rational {
    ratio(1, s as i64 + 1)
}

/// Ratio of the undirected sets covered by closed forms: `{±s}` and
/// `{±1, ±s}` with `s ≡ ±2 (mod 5)`.
pub fn ratio_undirected(gens: &GeneratorSet) -> Option<Rational> {
    if *gens != gens.negated() {
        return None;
    }
    let positive: Vec<i64> = gens.elements().iter().copied().filter(|&s| s > 0).collect();
    match positive[..] {
        [_] => Some(ratio(1, 3)),
        [1, s] if matches!(s % 5, 2 | 3) => Some(ratio(1, 5)),
        _ => None,
    }
}

/// Circulant families with known domination numbers or bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CirculantFamily {
    /// `{1, 2, …, s}` with `1 ≤ s ≤ n − 1`.
    Consecutive(u64),
    /// `{±1, ±3}` with `n ≥ 7`.
    PlusMinusOneThree,
    /// `{1, 2}` with `n = 3k + 2`, `k ≥ 1`.
    OneTwo,
    /// `{±1}` with `n = 3k + 2`, `k ≥ 1`.
    PlusMinusOne,
    /// `{1, 3k}` with `n = 6k − 1`, `k ≥ 1`.
    OneThreeK,
    /// `{1, s}` with `1 < s < n`.
    OneS(u64),
    /// `{±1, ±s}` with `1 < s < ⌈n/2⌉`.
    PlusMinusOneS(u64),
}

impl CirculantFamily {
    /// Connection residues of the family in `ℤ_n`. For [`OneThreeK`] the
    /// parameter `k` is derived from `n`.
    ///
    /// [`OneThreeK`]: CirculantFamily::OneThreeK
    pub fn connection(&self, n: u64) -> Vec<u64> {
        let mut v = match *self {
            CirculantFamily::Consecutive(s) => (1..=s).collect(),
            CirculantFamily::PlusMinusOneThree => vec![1, 3, n - 1, n - 3],
            CirculantFamily::OneTwo => vec![1, 2],
            CirculantFamily::PlusMinusOne => vec![1, n - 1],
            CirculantFamily::OneThreeK => vec![1, n.div_ceil(2)],
            CirculantFamily::OneS(s) => vec![1, s],
            CirculantFamily::PlusMinusOneS(s) => vec![1, s, n - 1, n - s],
        };
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// A domination number known exactly or only within bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Known {
    Exact(u64),
    Bounds { lower: u64, upper: u64 },
}

impl Known {
    pub fn exact(&self) -> Option<u64> {
        match *self {
            Known::Exact(v) => Some(v),
            Known::Bounds { .. } => None,
        }
    }

    pub fn admits(&self, gamma: u64) -> bool {
        match *self {
            Known::Exact(v) => v == gamma,
            Known::Bounds { lower, upper } => (lower..=upper).contains(&gamma),
        }
    }
}

/// `γ(ℤ_n, ·)` for a family, exactly or as a bound pair.
pub fn circulant_known(n: u64, family: CirculantFamily) -> Result<Known, FormulaError> {
    match family {
        CirculantFamily::Consecutive(s) if s >= 1 && s < n => Ok(Known::Exact(n.div_ceil(s + 1))),
        CirculantFamily::PlusMinusOneThree if n >= 7 => {
            Ok(Known::Exact(n.div_ceil(5) + u64::from(n % 5 == 4)))
        }
        CirculantFamily::OneTwo | CirculantFamily::PlusMinusOne if n >= 5 && n % 3 == 2 => {
            Ok(Known::Exact((n - 2) / 3 + 1))
        }
        CirculantFamily::OneThreeK if n >= 5 && n % 6 == 5 => Ok(Known::Exact((n + 1) / 3)),
        CirculantFamily::OneS(s) if 1 < s && s < n => Ok(Known::Bounds {
            lower: n.div_ceil(3),
            upper: n.div_ceil(2),
        }),
        CirculantFamily::PlusMinusOneS(s) if 1 < s && s < n.div_ceil(2) => Ok(Known::Bounds {
            lower: n.div_ceil(5),
            upper: n.div_ceil(3),
        }),
        _ => domain(format!("{family:?} is not covered at n = {n}")),
    }
}

/// Whether the circulant family has an efficient dominating set, where known.
pub fn circulant_eds_predicted(n: u64, family: CirculantFamily) -> Result<bool, FormulaError> {
    match family {
        CirculantFamily::OneS(s) if 1 < s && s < n => Ok(n.is_multiple_of(3) && s % 3 == 2),
        CirculantFamily::PlusMinusOneS(s) if 1 < s && s < n.div_ceil(2) => {
            Ok(n.is_multiple_of(5) && matches!(s % 5, 2 | 3))
        }
        _ => domain(format!(
            "no efficient-domination criterion for {family:?} at n = {n}"
        )),
    }
}
