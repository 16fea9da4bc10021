//! Finite generator sets `S ⊆ ℤ \ {0}` of integer distance digraphs.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("generator set contains 0")]
    ZeroElement,
    #[error("generator {0} appears more than once")]
    Duplicate(i64),
    #[error("generator magnitude {0} is out of range")]
    OutOfRange(i64),
    #[error("malformed set literal `{text}`: {reason}")]
    Syntax { text: String, reason: String },
}

/// Largest |s| accepted; keeps every derived bound comfortably inside `i64`.
pub const MAX_GENERATOR: i64 = 1 << 40;

/// A finite set of nonzero integers together with its window bounds.
///
/// `a = max(S ∪ {0})`, `b = -min(S ∪ {0})`, `c = a + b`. A vertex `j` of
/// `Γ(ℤ,S)` can only be dominated from `[j - a, j + b]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSet {
    elements: Vec<i64>,
    a: u64,
    b: u64,
}

impl GeneratorSet {
    /// Builds a set, rejecting zero and repeated elements.
    pub fn new<I: IntoIterator<Item = i64>>(elements: I) -> Result<Self, GeneratorError> {
        let mut seen = BTreeSet::new();
        for s in elements {
            if s == 0 {
                return Err(GeneratorError::ZeroElement);
            }
            if s.abs() > MAX_GENERATOR {
                return Err(GeneratorError::OutOfRange(s));
            }
            if !seen.insert(s) {
                return Err(GeneratorError::Duplicate(s));
            }
        }
        Ok(Self::from_sorted(seen.into_iter().collect()))
    }

    fn from_sorted(elements: Vec<i64>) -> Self {
        let a = elements.last().copied().unwrap_or(0).max(0) as u64;
        let b = (-elements.first().copied().unwrap_or(0)).max(0) as u64;
        GeneratorSet { elements, a, b }
    }

    pub fn empty() -> Self {
        Self::from_sorted(Vec::new())
    }

    /// Elements in increasing order.
    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, s: i64) -> bool {
        self.elements.binary_search(&s).is_ok()
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn c(&self) -> u64 {
        self.a + self.b
    }

    /// `(a, b, c)`.
    pub fn bounds(&self) -> (u64, u64, u64) {
        (self.a, self.b, self.c())
    }

    /// `-S`.
    pub fn negated(&self) -> Self {
        let mut v: Vec<i64> = self.elements.iter().map(|s| -s).collect();
        v.sort_unstable();
        Self::from_sorted(v)
    }

    /// `d·S` for a nonzero integer `d`.
    pub fn scaled(&self, d: i64) -> Result<Self, GeneratorError> {
        if d == 0 {
            return Err(GeneratorError::ZeroElement);
        }
        let mut v = Vec::with_capacity(self.len());
        for &s in &self.elements {
            let t = s.checked_mul(d).ok_or(GeneratorError::OutOfRange(s))?;
            if t.abs() > MAX_GENERATOR {
                return Err(GeneratorError::OutOfRange(t));
            }
            v.push(t);
        }
        v.sort_unstable();
        Ok(Self::from_sorted(v))
    }

    /// `S ∪ {s}`; fails if `s` is zero or already present.
    pub fn with(&self, s: i64) -> Result<Self, GeneratorError> {
        Self::new(self.elements.iter().copied().chain(std::iter::once(s)))
    }

    pub fn is_subset_of(&self, other: &GeneratorSet) -> bool {
        self.elements.iter().all(|&s| other.contains(s))
    }

    /// Every subset of `S`, including `∅` and `S` itself.
    pub fn subsets(&self) -> impl Iterator<Item = GeneratorSet> + '_ {
        let n = self.len();
        (0u64..(1u64 << n)).map(move |mask| {
            let v = (0..n)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| self.elements[i])
                .collect();
            Self::from_sorted(v)
        })
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for GeneratorSet {
    type Err = GeneratorError;

    /// Parses set literals such as `{1,-3}` or `{ 2, 5 }`. `{}` is the empty set.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let syntax = |reason: &str| GeneratorError::Syntax {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let t = text.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| syntax("expected braces around the elements"))?;
        if inner.trim().is_empty() {
            return Ok(GeneratorSet::empty());
        }
        let mut elements = Vec::new();
        for part in inner.split(',') {
            let p = part.trim();
            if p.is_empty() {
                return Err(syntax("empty element"));
            }
            let v = p
                .parse::<i64>()
                .map_err(|_| syntax(&format!("`{p}` is not an integer")))?;
            elements.push(v);
        }
        GeneratorSet::new(elements)
    }
}
