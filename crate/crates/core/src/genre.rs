//! Genre spaces and proportion vectors on the probability simplex.
//!
//! A [`GenreSpace`] fixes the order of the K genres. A [`GenreVector`] holds
//! one nonnegative proportion per genre, summing to one. Proportions are
//! always fractions in `[0, 1]`; percentages only exist at display time.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GenreError, Result};

/// Accepted deviation of `Σ w` from 1 for externally supplied vectors.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Ordered, duplicate-free list of K ≥ 2 genre names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GenreSpace {
    names: Vec<String>,
}

impl GenreSpace {
    /// Names are trimmed; uniqueness is checked on the trimmed, case-sensitive form.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let names: Vec<String> = names
            .into_iter()
            .map(|n| n.as_ref().trim().to_owned())
            .collect();
        if names.len() < 2 {
            return Err(GenreError::TooFewGenres(names.len()));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(GenreError::EmptyGenreName);
            }
            if names[..i].contains(name) {
                return Err(GenreError::DuplicateGenre(name.clone()));
            }
        }
        Ok(Self { names })
    }

    /// Number of genres K.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Always false: a valid space has at least two genres.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn normalize(&self, raw: &[f64]) -> Result<GenreVector> {
        normalize(raw, self)
    }

    /// The centroid `(1/K, ..., 1/K)`.
    pub fn uniform(&self) -> GenreVector {
        let k = self.len();
        let mut weights = vec![1.0 / k as f64; k];
        absorb_residue(&mut weights);
        GenreVector { weights }
    }
}

impl<'de> Deserialize<'de> for GenreSpace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let names = Vec::<String>::deserialize(deserializer)?;
        GenreSpace::new(names).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for GenreSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names.join(", "))
    }
}

/// A point on the (K−1)-simplex: per-genre proportions in `[0, 1]` summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct GenreVector {
    weights: Vec<f64>,
}

impl GenreVector {
    /// Accepts externally supplied proportions as given, provided they pass
    /// [`validate_vector`]. Use [`normalize`] for counts or percentages.
    pub fn new(weights: Vec<f64>, space: &GenreSpace) -> Result<Self> {
        let report = validate_vector(&weights, space);
        if !report.is_valid() {
            return Err(GenreError::InvalidVector(report));
        }
        Ok(Self { weights })
    }

    /// Builds a vector without validation. Callers must uphold the simplex invariants.
    pub(crate) fn from_weights_unchecked(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }
}

impl AsRef<[f64]> for GenreVector {
    fn as_ref(&self) -> &[f64] {
        &self.weights
    }
}

/// Scales nonnegative raw values (counts, percentages, fractions) onto the simplex.
///
/// The result sums to exactly `1.0` under left-to-right summation: after the
/// division, the largest component absorbs the rounding residue.
pub fn normalize(raw: &[f64], space: &GenreSpace) -> Result<GenreVector> {
    if raw.len() != space.len() {
        return Err(GenreError::DimensionMismatch {
            expected: space.len(),
            actual: raw.len(),
        });
    }
    for (index, &value) in raw.iter().enumerate() {
        if !value.is_finite() {
            return Err(GenreError::NonFiniteWeight { index });
        }
        if value < 0.0 {
            return Err(GenreError::NegativeWeight { index, value });
        }
    }
    let max = raw.iter().copied().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return Err(GenreError::ZeroMass);
    }
    let mut scaled = raw.to_vec();
    let mut total: f64 = scaled.iter().sum();
    if !total.is_finite() {
        // huge inputs: pre-scale by the maximum so the sum stays finite
        scaled.iter_mut().for_each(|r| *r /= max);
        total = scaled.iter().sum();
    }
    let mut weights: Vec<f64> = scaled
        .iter()
        .map(|&s| if s == 0.0 { 0.0 } else { s / total })
        .collect();
    absorb_residue(&mut weights);
    Ok(GenreVector { weights })
}

/// Index of the first largest component.
pub(crate) fn argmax(weights: &[f64]) -> usize {
    let mut best = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > weights[best] {
            best = i;
        }
    }
    best
}

/// Sets the largest component so that the left-to-right sum is exactly 1.
///
/// Starts from `1 - Σ others` and searches neighboring doubles, nearest
/// first. If no neighbor of the largest component works (partial sums can
/// round past 1), the last nonzero component takes the correction.
pub(crate) fn absorb_residue(weights: &mut [f64]) {
    let n = weights.len();
    if n == 0 || exact_sum_is_one(weights) {
        return;
    }
    let largest = argmax(weights);
    let others: f64 = weights
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != largest)
        .map(|(_, w)| w)
        .sum();
    let start = (1.0 - others).clamp(0.0, 1.0);
    if try_neighbors(weights, largest, start) {
        return;
    }
    // Only zeros follow the last nonzero term, so the total is exactly
    // `prefix + w`, which rounds to 1 for w = 1 - prefix.
    let Some(last) = weights.iter().rposition(|&w| w > 0.0) else {
        return;
    };
    let prefix: f64 = weights[..last].iter().sum();
    let start = (1.0 - prefix).clamp(0.0, 1.0);
    try_neighbors(weights, last, start);
}

fn exact_sum_is_one(weights: &[f64]) -> bool {
    weights.iter().sum::<f64>() == 1.0
}

fn try_neighbors(weights: &mut [f64], index: usize, start: f64) -> bool {
    let original = weights[index];
    let (mut up, mut down) = (start, start);
    for _ in 0..=256 {
        for candidate in [down, up] {
            weights[index] = candidate;
            if exact_sum_is_one(weights) {
                return true;
            }
        }
        up = next_up(up).min(1.0);
        down = next_down(down);
    }
    weights[index] = original;
    false
}

fn next_up(x: f64) -> f64 {
    if x == 0.0 {
        return f64::from_bits(1);
    }
    f64::from_bits(x.to_bits() + 1)
}

fn next_down(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    f64::from_bits(x.to_bits() - 1)
}

/// Sum of squared component differences, accumulated in index order.
///
/// Both search paths rank by `squared_euclidean(..).sqrt()` so that their
/// distances agree bit for bit.
#[inline]
pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// Euclidean distance between two vectors of the same space.
pub fn distance(u: &GenreVector, v: &GenreVector) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(GenreError::DimensionMismatch {
            expected: u.dim(),
            actual: v.dim(),
        });
    }
    Ok(squared_euclidean(&u.weights, &v.weights).sqrt())
}

/// One broken invariant found by [`validate_vector`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DimensionMismatch { expected: usize, actual: usize },
    NonFinite { index: usize },
    NegativeComponent { index: usize, value: f64 },
    ComponentAboveOne { index: usize, value: f64 },
    SumOutOfTolerance { sum: f64, tolerance: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionMismatch { expected, actual } => {
                write!(f, "expected {expected} components, got {actual}")
            }
            Violation::NonFinite { index } => write!(f, "component {index} is not finite"),
            Violation::NegativeComponent { index, value } => {
                write!(f, "component {index} is negative ({value})")
            }
            Violation::ComponentAboveOne { index, value } => {
                write!(f, "component {index} exceeds 1 ({value})")
            }
            Violation::SumOutOfTolerance { sum, tolerance } => {
                write!(
                    f,
                    "components sum to {sum}, not 1 (tolerance {tolerance:e})"
                )
            }
        }
    }
}

/// List of violations; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks raw weights against every [`GenreVector`] invariant of `space`.
pub fn validate_vector(weights: &[f64], space: &GenreSpace) -> ValidationReport {
    validate_with_tolerance(weights, space.len(), SUM_TOLERANCE)
}

/// Like [`validate_vector`] with an explicit sum tolerance.
pub fn validate_with_tolerance(weights: &[f64], k: usize, tolerance: f64) -> ValidationReport {
    let mut violations = Vec::new();
    if weights.len() != k {
        violations.push(Violation::DimensionMismatch {
            expected: k,
            actual: weights.len(),
        });
    }
    let mut all_finite = true;
    for (index, &value) in weights.iter().enumerate() {
        if !value.is_finite() {
            all_finite = false;
            violations.push(Violation::NonFinite { index });
        } else if value < 0.0 {
            violations.push(Violation::NegativeComponent { index, value });
        } else if value > 1.0 {
            violations.push(Violation::ComponentAboveOne { index, value });
        }
    }
    if all_finite {
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tolerance {
            violations.push(Violation::SumOutOfTolerance { sum, tolerance });
        }
    }
    ValidationReport { violations }
}
