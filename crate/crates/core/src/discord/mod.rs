//! Tsallis q-discord of two-qubit states.
//!
//! The classical part maximizes `J_q = S_q(ρ_A) - Σ_j p_j^q S_q(ρ_{A|j})` over rank-1
//! projective measurements `{|ψ><ψ|, |ψ⊥><ψ⊥|}` on B, with
//! `|ψ> = cos θ |0> + e^{iφ} sin θ |1>`. The discord is `ϑ_q = I_q - C_q` and the
//! normalized `D_q = norm_factor(q) · ϑ_q`.
//!
//! Two evaluation routes exist for the measured conditional entropy: the public
//! [`measured_conditional_entropy`] builds the projectors, sandwiches and partial-traces
//! with the generic linear algebra; the search uses [`ConditionalEvaluator`], which forms
//! the 2×2 unnormalized conditional operators directly and diagonalizes them in closed form.

mod search;

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

pub use search::{canonical_basis, maximize, SearchConfig, SearchOutcome};

use crate::entropy::{
    norm_factor, q_log, tsallis_probs, tsallis_state, weighted_q_log, ProbVector, QParam,
};
use crate::error::{Error, Result};
use crate::linalg::{self, kron, sandwich, ComplexMatrix, Subsystem};
use crate::states::{bell_eigenvalues, bell_params_valid, DensityMatrix};

/// Outcomes with probability below this are dropped from the conditional entropy.
pub const MIN_OUTCOME_PROB: f64 = 1e-14;

/// A rank-1 projective measurement on a qubit, `θ ∈ [0, π/2]`, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) || !(0.0..TAU).contains(&phi) {
            return Err(Error::InvalidParameters(format!(
                "basis angles (θ={theta}, φ={phi}) outside [0, π/2] × [0, 2π)"
            )));
        }
        Ok(Self { theta, phi })
    }

    /// The computational basis `{|0>, |1>}`.
    pub fn computational() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `|ψ> = cos θ |0> + e^{iφ} sin θ |1>`.
    pub fn ket(&self) -> [Complex64; 2] {
        ket(self.theta, self.phi)
    }

    /// `|ψ⊥> = e^{-iφ} sin θ |0> - cos θ |1>`.
    pub fn ket_perp(&self) -> [Complex64; 2] {
        let (s, c) = self.theta.sin_cos();
        [Complex64::from_polar(s, -self.phi), Complex64::new(-c, 0.0)]
    }
}

fn ket(theta: f64, phi: f64) -> [Complex64; 2] {
    let (s, c) = theta.sin_cos();
    [Complex64::new(c, 0.0), Complex64::from_polar(s, phi)]
}

/// `(Π₁, Π₂) = (|ψ><ψ|, |ψ⊥><ψ⊥|)`.
pub fn projectors(basis: &MeasurementBasis) -> (ComplexMatrix, ComplexMatrix) {
    (
        ComplexMatrix::outer(&basis.ket()),
        ComplexMatrix::outer(&basis.ket_perp()),
    )
}

/// Everything computed for one `(state, q)` evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    pub q: QParam,
    pub i_q: f64,
    pub c_q: f64,
    /// `i_q - c_q`, unnormalized.
    pub theta_raw: f64,
    /// `norm_factor(q) * theta_raw`.
    pub d_q: f64,
    pub best_basis: MeasurementBasis,
    pub optimizer_evals: usize,
}

impl DiscordResult {
    fn assemble(q: QParam, i_q: f64, outcome: SearchOutcome) -> Self {
        let theta_raw = i_q - outcome.value;
        Self {
            q,
            i_q,
            c_q: outcome.value,
            theta_raw,
            d_q: norm_factor(q) * theta_raw,
            best_basis: outcome.basis,
            optimizer_evals: outcome.evals,
        }
    }
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.is_two_qubit() {
        Ok(())
    } else {
        Err(Error::Bipartition {
            dim: rho.dim(),
            dim_a: 2,
            dim_b: 2,
        })
    }
}

fn reduced_entropy(rho: &DensityMatrix, keep: Subsystem, q: QParam) -> Result<f64> {
    tsallis_state(&rho.reduced_state(keep)?, q)
}

/// Quantum q-mutual information `S_q(ρ_A) + S_q(ρ_B) - S_q(ρ)`.
pub fn i_q(rho: &DensityMatrix, q: QParam) -> Result<f64> {
    Ok(
        reduced_entropy(rho, Subsystem::A, q)? + reduced_entropy(rho, Subsystem::B, q)?
            - tsallis_state(rho, q)?,
    )
}

/// `Σ_j p_j^q S_q(ρ_{A|j})` for the measurement `basis` on B, via explicit projectors
/// `I ⊗ Π_j` and a partial trace of each post-measurement state.
pub fn measured_conditional_entropy(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    q: QParam,
) -> Result<f64> {
    require_two_qubit(rho)?;
    let (p1, p2) = projectors(basis);
    let id = ComplexMatrix::identity(2);
    let mut total = 0.0;
    for pi in [p1, p2] {
        let post = sandwich(&kron(&id, &pi), rho.matrix())?;
        let p = post.trace().re;
        if p < MIN_OUTCOME_PROB {
            continue;
        }
        let cond = linalg::partial_trace(&post, 2, 2, Subsystem::A)?.scale(1.0 / p);
        let cond = DensityMatrix::new(cond, 2, 1)?;
        total += pow_q(p, q) * tsallis_state(&cond, q)?;
    }
    Ok(total)
}

/// `J_q = S_q(ρ_A) - measured_conditional_entropy`.
pub fn j_q(rho: &DensityMatrix, basis: &MeasurementBasis, q: QParam) -> Result<f64> {
    Ok(reduced_entropy(rho, Subsystem::A, q)? - measured_conditional_entropy(rho, basis, q)?)
}

/// `x^q`, or `x` inside the Shannon band so that weights match the q = 1 entropy.
fn pow_q(x: f64, q: QParam) -> f64 {
    if q.is_shannon() {
        x
    } else {
        x.powf(q.value())
    }
}

/// Fast evaluator of the measured conditional entropy of a fixed two-qubit state.
///
/// For `|ψ>` on B, the unnormalized conditional operator on A is
/// `M(i,i') = Σ_{k,l} ψ_k* ρ(2i+k, 2i'+l) ψ_l`, the other outcome is `ρ_A - M`, and
/// `p_j^q S_q(M_j/p_j) = (p_j^q - Σ μ^q)/(q - 1)` with `μ` the eigenvalues of `M_j`.
#[derive(Debug, Clone)]
pub struct ConditionalEvaluator {
    rho: [[Complex64; 4]; 4],
    rho_a: [Complex64; 3],
}

impl ConditionalEvaluator {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        require_two_qubit(rho)?;
        let m = rho.matrix();
        let mut r = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = m[(i, j)];
            }
        }
        let ra = rho.reduced(Subsystem::A);
        Ok(Self {
            rho: r,
            rho_a: [ra[(0, 0)], ra[(1, 1)], ra[(0, 1)]],
        })
    }

    /// The two unnormalized conditional operators as `(a, d, b)` for `[[a, b], [b*, d]]`.
    #[inline]
    fn conditional_blocks(&self, theta: f64, phi: f64) -> [(f64, f64, Complex64); 2] {
        let psi = ket(theta, phi);
        let w = |k: usize, l: usize| psi[k].conj() * psi[l];
        let w00 = w(0, 0);
        let w01 = w(0, 1);
        let w10 = w(1, 0);
        let w11 = w(1, 1);
        let r = &self.rho;
        let block = |i: usize, j: usize| {
            w00 * r[i][j] + w01 * r[i][j + 1] + w10 * r[i + 1][j] + w11 * r[i + 1][j + 1]
        };
        let a = block(0, 0).re;
        let d = block(2, 2).re;
        let b = block(0, 2);
        let [ra00, ra11, ra01] = self.rho_a;
        [(a, d, b), (ra00.re - a, ra11.re - d, ra01 - b)]
    }

    /// `Σ_j p_j^q S_q(ρ_{A|j})`.
    pub fn conditional_entropy(&self, theta: f64, phi: f64, q: QParam) -> f64 {
        self.conditional_blocks(theta, phi)
            .iter()
            .map(|&(a, d, b)| weighted_conditional_term(a, d, b, q))
            .sum()
    }

    /// `Σ_j p_j^2 S_2(ρ_{A|j}) = Σ_j (p_j² - Tr M_j²)`, with no diagonalization.
    pub fn conditional_entropy_q2(&self, theta: f64, phi: f64) -> f64 {
        self.conditional_blocks(theta, phi)
            .iter()
            .map(|&(a, d, b)| {
                let p = a + d;
                if p < MIN_OUTCOME_PROB {
                    0.0
                } else {
                    p * p - (a * a + d * d + 2.0 * b.norm_sqr())
                }
            })
            .sum()
    }
}

/// Eigenvalues of `[[a, b], [b*, d]]`, larger first. The smaller one is taken from the
/// determinant to avoid cancellation.
#[inline]
fn hermitian2_eigenvalues(a: f64, d: f64, b: Complex64) -> (f64, f64) {
    let half_tr = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let radius = (half_diff * half_diff + b.norm_sqr()).sqrt();
    let hi = half_tr + radius;
    let lo = if hi > 0.0 {
        (a * d - b.norm_sqr()) / hi
    } else {
        half_tr - radius
    };
    (hi, lo)
}

#[inline]
fn weighted_conditional_term(a: f64, d: f64, b: Complex64, q: QParam) -> f64 {
    let p = a + d;
    if p < MIN_OUTCOME_PROB {
        return 0.0;
    }
    let (hi, lo) = hermitian2_eigenvalues(a, d, b);
    let (hi, lo) = (hi.max(0.0), lo.max(0.0));
    if q.is_shannon() {
        let xlnx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
        p * p.ln() - xlnx(hi) - xlnx(lo)
    } else {
        let qv = q.value();
        let pow = |x: f64| if x > 0.0 { x.powf(qv) } else { 0.0 };
        (pow(p) - pow(hi) - pow(lo)) / (qv - 1.0)
    }
}

/// `C_q = sup_Π J_q` with the default search settings.
pub fn c_q(rho: &DensityMatrix, q: QParam) -> Result<(f64, MeasurementBasis)> {
    let out = c_q_with(rho, q, &SearchConfig::default())?;
    Ok((out.value, out.basis))
}

/// `C_q` with explicit search settings.
pub fn c_q_with(rho: &DensityMatrix, q: QParam, config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let eval = ConditionalEvaluator::new(rho)?;
    let s_a = reduced_entropy(rho, Subsystem::A, q)?;
    Ok(maximize(config, |t, p| {
        s_a - eval.conditional_entropy(t, p, q)
    }))
}

/// Discord with the default search settings.
pub fn q_discord(rho: &DensityMatrix, q: QParam) -> Result<DiscordResult> {
    q_discord_with(rho, q, &SearchConfig::default())
}

pub fn q_discord_with(
    rho: &DensityMatrix,
    q: QParam,
    config: &SearchConfig,
) -> Result<DiscordResult> {
    let outcome = c_q_with(rho, q, config)?;
    Ok(DiscordResult::assemble(q, i_q(rho, q)?, outcome))
}

/// The q = 2 discord using only traces of squares: `S_2(σ) = 1 - Tr σ²`.
pub fn q_discord_fast2(rho: &DensityMatrix) -> Result<DiscordResult> {
    q_discord_fast2_with(rho, &SearchConfig::default())
}

pub fn q_discord_fast2_with(rho: &DensityMatrix, config: &SearchConfig) -> Result<DiscordResult> {
    config.validate()?;
    let eval = ConditionalEvaluator::new(rho)?;
    let s2 = |m: &ComplexMatrix| 1.0 - m.trace_of_square();
    let s_a = s2(&rho.reduced(Subsystem::A));
    let s_b = s2(&rho.reduced(Subsystem::B));
    let s_ab = s2(rho.matrix());
    let outcome = maximize(config, |t, p| s_a - eval.conditional_entropy_q2(t, p));
    let q2 = QParam::new(2.0).expect("2 is a valid q");
    Ok(DiscordResult::assemble(q2, s_a + s_b - s_ab, outcome))
}

fn single_qubit_terms(c: f64, q: QParam) -> f64 {
    weighted_q_log(0.5 * (1.0 - c), q) + weighted_q_log(0.5 * (1.0 + c), q)
}

fn half_ln_half(q: QParam) -> f64 {
    q_log(0.5, q).expect("1/2 is in the q-log domain")
}

/// Closed-form `I_q` of a Bell-diagonal state:
/// `-4 (1/2)^q ln_q(1/2) + Σ_i λ_i^q ln_q λ_i`.
pub fn mutual_information_analytic_bell(c1: f64, c2: f64, c3: f64, q: QParam) -> Result<f64> {
    check_bell(c1, c2, c3)?;
    let lam_terms: f64 = bell_eigenvalues(c1, c2, c3)
        .iter()
        .map(|&l| weighted_q_log(l.max(0.0), q))
        .sum();
    Ok(-4.0 * pow_q(0.5, q) * half_ln_half(q) + lam_terms)
}

/// Closed-form `C_q` of a Bell-diagonal state, `c = max |c_i|`.
pub fn classical_correlation_analytic_bell(c1: f64, c2: f64, c3: f64, q: QParam) -> Result<f64> {
    check_bell(c1, c2, c3)?;
    let c = c1.abs().max(c2.abs()).max(c3.abs());
    Ok(2.0 * pow_q(0.5, q) * (-half_ln_half(q) + single_qubit_terms(c, q)))
}

/// Closed-form `ϑ_q` of a Bell-diagonal state.
pub fn theta_analytic_bell(c1: f64, c2: f64, c3: f64, q: QParam) -> Result<f64> {
    check_bell(c1, c2, c3)?;
    let c = c1.abs().max(c2.abs()).max(c3.abs());
    let lam_terms: f64 = bell_eigenvalues(c1, c2, c3)
        .iter()
        .map(|&l| weighted_q_log(l.max(0.0), q))
        .sum();
    Ok(-2.0 * pow_q(0.5, q) * (half_ln_half(q) + single_qubit_terms(c, q)) + lam_terms)
}

/// Closed-form `ϑ_q` of the α-state family, `ξ = max{|α|, |2α - 1|}`.
pub fn theta_analytic_alpha(alpha: f64, q: QParam) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameters(format!(
            "alpha {alpha} outside [0, 1]"
        )));
    }
    let xi = alpha.abs().max((2.0 * alpha - 1.0).abs());
    Ok(
        -2.0 * pow_q(0.5, q) * (half_ln_half(q) + single_qubit_terms(xi, q))
            + 2.0 * weighted_q_log(0.5 * (1.0 - alpha), q)
            + weighted_q_log(alpha, q),
    )
}

fn check_bell(c1: f64, c2: f64, c3: f64) -> Result<()> {
    if bell_params_valid(c1, c2, c3) {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!(
            "Bell-diagonal ({c1}, {c2}, {c3}) is not a valid state"
        )))
    }
}

/// `S_q` of the Bell-diagonal spectrum, used to cross-check [`mutual_information_analytic_bell`].
pub fn bell_state_entropy(c1: f64, c2: f64, c3: f64, q: QParam) -> Result<f64> {
    check_bell(c1, c2, c3)?;
    let p = ProbVector::new(
        bell_eigenvalues(c1, c2, c3)
            .iter()
            .map(|l| l.max(0.0))
            .collect(),
    )?;
    Ok(tsallis_probs(&p, q))
}
