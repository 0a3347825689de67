//! Tsallis q-entropies on probability vectors and density matrices.
//!
//! All entropies are in natural units. The base-2 convention used by the normalized
//! discord enters only through [`norm_factor`].

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::states::DensityMatrix;

/// `|q - 1|` below this is treated as the Shannon / von Neumann limit.
pub const SHANNON_BAND: f64 = 1e-6;

/// Largest accepted entropic index.
pub const Q_MAX: f64 = 200.0;

/// Tolerance on `Σp = 1`.
pub const PROB_SUM_TOL: f64 = 1e-9;

/// Probabilities in `[-PROB_CLAMP_TOL, 0)` are clamped to zero.
pub const PROB_CLAMP_TOL: f64 = 1e-12;

/// Spectrum values in `[-SPECTRUM_CLAMP_TOL, 0)` are clamped to zero.
pub const SPECTRUM_CLAMP_TOL: f64 = 1e-10;

/// Entropic index `q`, restricted to `(0, 200]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QParam(f64);

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 && q <= Q_MAX {
            Ok(Self(q))
        } else {
            Err(Error::InvalidQ(q))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True inside the band where the q -> 1 limit formulas are used.
    pub fn is_shannon(self) -> bool {
        (self.0 - 1.0).abs() < SHANNON_BAND
    }
}

impl TryFrom<f64> for QParam {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        Self::new(q)
    }
}

impl std::fmt::Display for QParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A validated probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(mut p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidProbabilities("empty vector".into()));
        }
        for x in p.iter_mut() {
            if !x.is_finite() || *x < -PROB_CLAMP_TOL || *x > 1.0 + PROB_SUM_TOL {
                return Err(Error::InvalidProbabilities(format!(
                    "entry {x} outside [0, 1]"
                )));
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidProbabilities(format!("sum is {sum}")));
        }
        Ok(Self(p))
    }

    /// Builds a probability vector from a Hermitian spectrum, clamping rounding-level
    /// negative eigenvalues.
    pub fn from_spectrum(eigenvalues: &[f64]) -> Result<Self> {
        let mut p = Vec::with_capacity(eigenvalues.len());
        for &l in eigenvalues {
            if l < -SPECTRUM_CLAMP_TOL {
                return Err(Error::NotPsd(l));
            }
            p.push(l.max(0.0));
        }
        Self::new(p)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `ln_q(x) = (x^{1-q} - 1)/(1 - q)`, the natural log inside the Shannon band.
pub fn q_log(x: f64, q: QParam) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::LogDomain(x));
    }
    if q.is_shannon() {
        Ok(x.ln())
    } else {
        let one_minus_q = 1.0 - q.value();
        Ok((x.powf(one_minus_q) - 1.0) / one_minus_q)
    }
}

/// `p^q ln_q(p)`, extended by continuity to 0 at `p = 0`.
pub(crate) fn weighted_q_log(p: f64, q: QParam) -> f64 {
    if p <= 0.0 {
        0.0
    } else if q.is_shannon() {
        p * p.ln()
    } else {
        (p - p.powf(q.value())) / (1.0 - q.value())
    }
}

/// Tsallis entropy of nonnegative weights with no validation. Uses `(1 - Σp^q)/(q-1)`, or
/// `-Σ p ln p` in the Shannon band.
pub(crate) fn tsallis_unchecked(p: &[f64], q: QParam) -> f64 {
    if q.is_shannon() {
        -p.iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| x * x.ln())
            .sum::<f64>()
    } else {
        let qv = q.value();
        let s: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(qv)).sum();
        (1.0 - s) / (qv - 1.0)
    }
}

/// Tsallis entropy `S_q(p)` in natural units.
pub fn tsallis_probs(p: &ProbVector, q: QParam) -> f64 {
    // The closed form can dip to -1e-16 on pure distributions.
    tsallis_unchecked(p.as_slice(), q).max(0.0)
}

/// Shannon entropy `-Σ p ln p`.
pub fn shannon(p: &ProbVector) -> f64 {
    tsallis_probs(p, QParam(1.0))
}

/// `S_q` of the spectrum of `rho`.
pub fn tsallis_state(rho: &DensityMatrix, q: QParam) -> Result<f64> {
    let eig = hermitian_eigenvalues(rho.matrix())?;
    Ok(tsallis_probs(&ProbVector::from_spectrum(&eig)?, q))
}

/// Linear entropy `(4/3)(1 - Tr ρ²)` of a two-qubit state.
pub fn linear_entropy(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "linear entropy is normalized for dim 4, got {}",
            rho.dim()
        )));
    }
    Ok(4.0 / 3.0 * (1.0 - rho.purity()))
}

/// `(q - 1)/(1 - 2^{1-q})`, the reciprocal of the maximal single-qubit q-entropy;
/// `1/ln 2` in the Shannon band.
pub fn norm_factor(q: QParam) -> f64 {
    if q.is_shannon() {
        1.0 / std::f64::consts::LN_2
    } else {
        let qv = q.value();
        (qv - 1.0) / (1.0 - 2f64.powf(1.0 - qv))
    }
}

/// Joint distribution `p(x, y)` of two discrete variables, rows indexed by `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    rows: usize,
    cols: usize,
    p: Vec<f64>,
}

impl JointTable {
    pub fn new(table: Vec<Vec<f64>>) -> Result<Self> {
        let rows = table.len();
        let cols = table.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 || table.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidProbabilities(
                "joint table must be rectangular and nonempty".into(),
            ));
        }
        let flat = ProbVector::new(table.into_iter().flatten().collect())?;
        Ok(Self {
            rows,
            cols,
            p: flat.0,
        })
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.p[x * self.cols + y]
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|x| (0..self.cols).map(|y| self.get(x, y)).sum())
            .collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|y| (0..self.rows).map(|x| self.get(x, y)).sum())
            .collect()
    }

    /// `H_q(X, Y)`.
    pub fn joint_entropy(&self, q: QParam) -> f64 {
        tsallis_unchecked(&self.p, q)
    }
}

/// `H_q(X|Y) = Σ_y p(y)^q H_q(X|y)`.
pub fn conditional_q_entropy_classical(joint: &JointTable, q: QParam) -> f64 {
    joint
        .marginal_y()
        .iter()
        .enumerate()
        .filter(|(_, &py)| py > 0.0)
        .map(|(y, &py)| {
            let cond: Vec<f64> = (0..joint.rows).map(|x| joint.get(x, y) / py).collect();
            let weight = if q.is_shannon() {
                py
            } else {
                py.powf(q.value())
            };
            weight * tsallis_unchecked(&cond, q)
        })
        .sum()
}
