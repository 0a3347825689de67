//! Deterministic maximization over the measurement sphere: a coarse `(θ, φ)` grid followed
//! by step-halving 9×9 stencil refinement around the incumbent.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::MeasurementBasis;

/// Grid and refinement settings for the measurement search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Coarse grid points in θ over `[0, π/2]`, endpoints included.
    pub grid_theta: usize,
    /// Coarse grid points in φ over `[0, 2π)`.
    pub grid_phi: usize,
    /// Minimum number of refinement rounds.
    pub refine: usize,
    /// Refinement continues until both angular steps are at most this (radians).
    pub min_step: f64,
    /// Hard cap on refinement rounds.
    pub max_rounds: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_theta: 64,
            grid_phi: 128,
            refine: 3,
            min_step: 1e-9,
            max_rounds: 64,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.grid_theta < 2 || self.grid_phi < 1 {
            return Err(crate::Error::InvalidSpec(format!(
                "search grid {}x{} too small (need grid_theta >= 2, grid_phi >= 1)",
                self.grid_theta, self.grid_phi
            )));
        }
        if self.min_step.is_nan() || self.min_step <= 0.0 || self.max_rounds < self.refine {
            return Err(crate::Error::InvalidSpec(
                "min_step must be > 0 and max_rounds >= refine".into(),
            ));
        }
        Ok(())
    }
}

/// Best point found by [`maximize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOutcome {
    pub value: f64,
    pub basis: MeasurementBasis,
    pub evals: usize,
}

/// Candidates only replace the incumbent when they beat it by more than this, so exact
/// ties resolve to the first point visited (lexicographically smallest `(θ, φ)`).
fn tie_margin(best: f64) -> f64 {
    4.0 * f64::EPSILON * best.abs().max(1.0)
}

/// Maximizes `f(θ, φ)`. `f` must be defined for every real `(θ, φ)` and represent the same
/// measurement under `θ -> θ + π`, `θ -> -θ, φ -> φ + π` and `φ -> φ + 2π`.
pub fn maximize(config: &SearchConfig, mut f: impl FnMut(f64, f64) -> f64) -> SearchOutcome {
    let mut evals = 0usize;
    let mut eval = |t: f64, p: f64| {
        evals += 1;
        f(t, p)
    };

    let mut step_t = FRAC_PI_2 / (config.grid_theta - 1) as f64;
    let mut step_p = TAU / config.grid_phi as f64;

    let (mut best_t, mut best_p) = (0.0, 0.0);
    let mut best = f64::NEG_INFINITY;
    for i in 0..config.grid_theta {
        let t = i as f64 * step_t;
        for j in 0..config.grid_phi {
            let p = j as f64 * step_p;
            let v = eval(t, p);
            if v > best + tie_margin(best) || best == f64::NEG_INFINITY {
                best = v;
                best_t = t;
                best_p = p;
            }
        }
    }

    let mut round = 0;
    while round < config.max_rounds
        && (round < config.refine || step_t > config.min_step || step_p > config.min_step)
    {
        round += 1;
        step_t *= 0.5;
        step_p *= 0.5;
        let (center_t, center_p) = (best_t, best_p);
        for a in -4i32..=4 {
            for b in -4i32..=4 {
                if a == 0 && b == 0 {
                    continue;
                }
                let t = center_t + a as f64 * step_t;
                let p = center_p + b as f64 * step_p;
                let v = eval(t, p);
                if v > best + tie_margin(best) {
                    best = v;
                    best_t = t;
                    best_p = p;
                }
            }
        }
    }

    SearchOutcome {
        value: best,
        basis: canonical_basis(best_t, best_p),
        evals,
    }
}

/// Maps any `(θ, φ)` to the equivalent pair with `θ ∈ [0, π/2]`, `φ ∈ [0, 2π)`. The
/// projector pair is unchanged up to swapping its two elements.
pub fn canonical_basis(theta: f64, phi: f64) -> MeasurementBasis {
    // |ψ(θ+π)> = -|ψ(θ)>
    let mut t = theta.rem_euclid(PI);
    let mut p = phi;
    if t > FRAC_PI_2 {
        // cos(π-t)|0> + e^{iφ} sin(π-t)|1> = -(cos t|0> + e^{i(φ+π)} sin t|1>)
        t = PI - t;
        p += PI;
    }
    let mut p = p.rem_euclid(TAU);
    if p >= TAU {
        p = 0.0;
    }
    MeasurementBasis::new(t.min(FRAC_PI_2), p).expect("canonical angles are in range")
}
