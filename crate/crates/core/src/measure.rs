//! Self-similar measures on a price interval `[L, M]`.
//!
//! The interval is split by the two halving contractions `f₁` (onto the left
//! half) and `f₂` (onto the right half). A [`Word`] over `{1, 2}` addresses
//! the dyadic cell `f_W([L, M])`, and the measure of that cell is the product
//! of the weights along the word. All masses here are for the probability
//! normalization (total mass 1); multiply by [`SelfSimilarMeasure::total_mass`]
//! when the `M − L` normalization is wanted.

use std::fmt;

use crate::error::{Error, Result};

/// Largest level accepted for word and grid arithmetic (`2^m` must fit in `u64`).
pub const MAX_LEVEL: u32 = 62;

/// The pair `(μ₁, μ₂)` with `μ₁ + μ₂ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    mu1: f64,
    mu2: f64,
}

impl Weights {
    /// The uniform (Lebesgue) case `μ₁ = μ₂ = 1/2`.
    pub const EQUAL: Weights = Weights { mu1: 0.5, mu2: 0.5 };

    pub fn new(mu1: f64) -> Result<Self> {
        if !(mu1 > 0.0 && mu1 < 1.0) {
            return Err(Error::domain(format!("mu1 must lie in (0, 1), got {mu1}")));
        }
        Ok(Weights { mu1, mu2: 1.0 - mu1 })
    }

    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    pub fn mu2(&self) -> f64 {
        self.mu2
    }

    /// Weight attached to a single letter.
    pub fn of(&self, letter: Letter) -> f64 {
        match letter {
            Letter::One => self.mu1,
            Letter::Two => self.mu2,
        }
    }

    /// The mirrored weights `(μ₂, μ₁)`.
    pub fn swapped(&self) -> Weights {
        Weights { mu1: self.mu2, mu2: self.mu1 }
    }

    pub fn is_equal(&self) -> bool {
        self.mu1 == 0.5
    }
}

/// A letter of a word: which contraction is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// `f₁`, the left half.
    One,
    /// `f₂`, the right half.
    Two,
}

impl Letter {
    pub fn from_digit(d: u8) -> Result<Self> {
        match d {
            1 => Ok(Letter::One),
            2 => Ok(Letter::Two),
            other => Err(Error::domain(format!("word letters must be 1 or 2, got {other}"))),
        }
    }

    pub fn digit(self) -> u8 {
        match self {
            Letter::One => 1,
            Letter::Two => 2,
        }
    }
}

/// Finite word over `{1, 2}`; `f_W = f_{W₁} ∘ … ∘ f_{W_m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        digits.iter().map(|&d| Letter::from_digit(d)).collect::<Result<Vec<_>>>().map(Word)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn digits(&self) -> Vec<u8> {
        self.0.iter().map(|l| l.digit()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word `W·a`, addressing one of the two children of the cell `f_W`.
    pub fn child(&self, letter: Letter) -> Word {
        let mut letters = self.0.clone();
        letters.push(letter);
        Word(letters)
    }

    /// Normalized image `f_W([0, 1])` as `(left, width)`.
    pub fn unit_cell(&self) -> (f64, f64) {
        // f_W(y) = f_{W1}(... f_{Wm}(y)), so the outermost letter picks the coarsest half.
        let mut left = 0.0;
        let mut width = 1.0;
        for letter in &self.0 {
            width *= 0.5;
            if *letter == Letter::Two {
                left += width;
            }
        }
        (left, width)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", l.digit())?;
        }
        write!(f, ")")
    }
}

pub(crate) fn check_level(m: u32) -> Result<()> {
    if m > MAX_LEVEL {
        return Err(Error::domain(format!("level {m} exceeds the maximum {MAX_LEVEL}")));
    }
    Ok(())
}

/// Word of length `m` addressing the `k`-th dyadic cell (1-based, left to right).
///
/// The letters are the big-endian binary digits of `k − 1`, with bit 0 mapped
/// to letter 1.
pub fn cell_word(k: u64, m: u32) -> Result<Word> {
    check_level(m)?;
    let cells = 1u64 << m;
    if k < 1 || k > cells {
        return Err(Error::domain(format!("cell index {k} outside 1..={cells} at level {m}")));
    }
    let bits = k - 1;
    let letters = (0..m)
        .rev()
        .map(|i| if (bits >> i) & 1 == 0 { Letter::One } else { Letter::Two })
        .collect();
    Ok(Word(letters))
}

/// Number of letters equal to 1 in the word.
pub fn s_count(word: &Word) -> u32 {
    word.0.iter().filter(|&&l| l == Letter::One).count() as u32
}

/// Measure of the cell `f_W([L, M])`: `μ₁^{s(W)} μ₂^{|W|−s(W)}`.
pub fn word_mass(word: &Word, weights: Weights) -> f64 {
    let s = s_count(word) as i32;
    let rest = word.len() as i32 - s;
    weights.mu1.powi(s) * weights.mu2.powi(rest)
}

/// Measure of the `k`-th level-`m` cell, without materializing the word.
pub fn cell_mass(k: u64, m: u32, weights: Weights) -> Result<f64> {
    check_level(m)?;
    let cells = 1u64 << m;
    if k < 1 || k > cells {
        return Err(Error::domain(format!("cell index {k} outside 1..={cells} at level {m}")));
    }
    let twos = (k - 1).count_ones() as i32;
    Ok(weights.mu1.powi(m as i32 - twos) * weights.mu2.powi(twos))
}

/// `∫ψ^m_{x_k} dμ` for the hat function at vertex `k ∈ {0..2^m}`.
pub fn spline_integral(k: u64, m: u32, weights: Weights) -> Result<f64> {
    check_level(m)?;
    if m == 0 {
        return Err(Error::domain("spline integrals need level m >= 1"));
    }
    let vertices = 1u64 << m;
    if k > vertices {
        return Err(Error::domain(format!("vertex index {k} outside 0..={vertices} at level {m}")));
    }
    let (mu1, mu2) = (weights.mu1, weights.mu2);
    let m = m as i32;
    if k == 0 {
        return Ok(mu1.powi(m + 1));
    }
    if k == vertices {
        return Ok(mu2.powi(m + 1));
    }
    // Rising half of the hat lives on cell k, falling half on cell k + 1.
    let s_left = s_count(&cell_word(k, m as u32)?) as i32;
    let s_right = s_count(&cell_word(k + 1, m as u32)?) as i32;
    Ok(mu1.powi(s_left) * mu2.powi(m + 1 - s_left) + mu1.powi(s_right + 1) * mu2.powi(m - s_right))
}

/// All `2^m + 1` spline integrals at level `m`.
pub fn spline_integrals(m: u32, weights: Weights) -> Result<Vec<f64>> {
    (0..=(1u64 << m.min(MAX_LEVEL))).map(|k| spline_integral(k, m, weights)).collect()
}

/// Lower and upper sums bracketing `μ([L, x])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfEstimate {
    pub lower: f64,
    pub upper: f64,
}

impl CdfEstimate {
    pub fn error_bound(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Self-similar probability measure on `[L, M]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfSimilarMeasure {
    weights: Weights,
    lower: f64,
    upper: f64,
}

impl SelfSimilarMeasure {
    pub fn new(weights: Weights, lower: f64, upper: f64) -> Result<Self> {
        if !(lower >= 0.0 && upper > lower && upper.is_finite()) {
            return Err(Error::domain(format!(
                "measure interval must satisfy 0 <= L < M, got [{lower}, {upper}]"
            )));
        }
        Ok(SelfSimilarMeasure { weights, lower, upper })
    }

    pub fn weights(&self) -> Weights {
        self.weights
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    /// `𝕄 = M − L`, the factor turning this probability measure into the
    /// measure of total mass `M − L`.
    pub fn total_mass(&self) -> f64 {
        self.upper - self.lower
    }

    /// Cell `f_W([L, M])` as a closed interval.
    pub fn cell(&self, word: &Word) -> (f64, f64) {
        let (left, width) = word.unit_cell();
        let span = self.total_mass();
        (self.lower + left * span, self.lower + (left + width) * span)
    }

    /// `scale · μ(f_W([L, M]))`; pass `scale = total_mass()` for the `M − L` normalization.
    pub fn cell_measure(&self, word: &Word, scale: f64) -> f64 {
        scale * word_mass(word, self.weights)
    }

    /// `μ([L, x])` by dyadic subdivision down to `depth`.
    ///
    /// `lower` sums the maximal dyadic cells inside `[L, x]`; the one cell
    /// that straddles `x` is only counted in `upper`, so
    /// `upper − lower ≤ max(μ₁, μ₂)^depth`.
    pub fn cdf(&self, x: f64, depth: u32) -> Result<CdfEstimate> {
        if !(x >= self.lower && x <= self.upper) {
            return Err(Error::domain(format!(
                "cdf argument {x} outside [{}, {}]",
                self.lower, self.upper
            )));
        }
        if depth == 0 {
            return Err(Error::domain("cdf depth must be at least 1"));
        }
        if x == self.upper {
            return Ok(CdfEstimate { lower: 1.0, upper: 1.0 });
        }
        let t = (x - self.lower) / self.total_mass();
        let (mu1, mu2) = (self.weights.mu1, self.weights.mu2);
        let mut acc = 0.0;
        let mut left = 0.0;
        let mut width = 1.0;
        let mut mass = 1.0;
        for _ in 0..depth {
            width *= 0.5;
            if t >= left + width {
                acc += mass * mu1;
                left += width;
                mass *= mu2;
            } else {
                mass *= mu1;
            }
        }
        if t >= left + width {
            Ok(CdfEstimate { lower: acc + mass, upper: acc + mass })
        } else if t == left {
            Ok(CdfEstimate { lower: acc, upper: acc })
        } else {
            Ok(CdfEstimate { lower: acc, upper: acc + mass })
        }
    }
}
