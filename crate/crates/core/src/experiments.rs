//! Seeded Monte Carlo and parameter-sweep drivers.
//!
//! Every random sample `i` draws from its own [`RngStream`] `(seed, i)`, and results are
//! gathered in index order, so a table depends only on the [`ExperimentSpec`] and never on
//! the number of worker threads.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::discord::{q_discord_with, theta_analytic_alpha, theta_analytic_bell, SearchConfig};
use crate::entropy::{linear_entropy, norm_factor, tsallis_state, QParam};
use crate::error::{Error, Result};
use crate::linalg::Subsystem;
use crate::states::{
    alpha_beta_state, alpha_state, random_mixed, werner, DensityMatrix, RngStream,
};

/// Default seed used when none is given.
pub const DEFAULT_SEED: u64 = 0xD15C04D;

/// Desk-scale default sample count.
pub const DEFAULT_SAMPLES: usize = 10_000;

pub const DEFAULT_BINS: usize = 100;

/// Hilbert-space dimension of the random states in the concavity experiment.
pub const CONCAVITY_DIM: usize = 4;

/// Tolerance in `q` for locating sign changes in [`ordering_scan`].
pub const CROSSING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    ConcavityPdf,
    WernerSweep,
    AlphaSweep,
    OrderingScan,
    RandomScatter,
    DiscordPdf,
    DiffScatter,
    AlphaBetaScatter,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        Self::ConcavityPdf,
        Self::WernerSweep,
        Self::AlphaSweep,
        Self::OrderingScan,
        Self::RandomScatter,
        Self::DiscordPdf,
        Self::DiffScatter,
        Self::AlphaBetaScatter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::ConcavityPdf => "concavity-pdf",
            Self::WernerSweep => "werner-sweep",
            Self::AlphaSweep => "alpha-sweep",
            Self::OrderingScan => "ordering-scan",
            Self::RandomScatter => "random-scatter",
            Self::DiscordPdf => "discord-pdf",
            Self::DiffScatter => "diff-scatter",
            Self::AlphaBetaScatter => "alpha-beta-scatter",
        }
    }

    fn is_histogram(self) -> bool {
        matches!(self, Self::ConcavityPdf | Self::DiscordPdf)
    }

    fn default_q_values(self) -> Vec<f64> {
        match self {
            Self::ConcavityPdf => vec![0.2, 0.5, 0.8, 2.0, 5.0],
            Self::WernerSweep | Self::AlphaSweep | Self::DiscordPdf => vec![0.5, 1.0, 2.0],
            Self::OrderingScan => vec![],
            Self::RandomScatter | Self::DiffScatter => vec![0.5, 2.0],
            Self::AlphaBetaScatter => vec![2.0],
        }
    }

    fn default_grid(self) -> ParamGrid {
        match self {
            Self::WernerSweep | Self::AlphaSweep => ParamGrid::Linear { points: 101 },
            Self::AlphaBetaScatter => ParamGrid::Rect {
                n_alpha: 50,
                n_beta: 50,
            },
            Self::OrderingScan => ParamGrid::Ordering {
                alpha1: 0.4,
                alpha2: 0.5,
                q_min: 0.1,
                q_max: 3.0,
                steps: 200,
            },
            _ => ParamGrid::None,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown experiment kind `{s}`")))
    }
}

/// Family-specific parameter grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamGrid {
    None,
    /// `points` equally spaced values over `[0, 1]`, endpoints included.
    Linear {
        points: usize,
    },
    /// `n_alpha` values of α over `[0, 1]`, and for each α, `n_beta` values of β over
    /// `[α - 1, 1 - α]`.
    Rect {
        n_alpha: usize,
        n_beta: usize,
    },
    /// `steps + 1` values of q over `[q_min, q_max]`.
    Ordering {
        alpha1: f64,
        alpha2: f64,
        q_min: f64,
        q_max: f64,
        steps: usize,
    },
}

/// Full description of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub q_values: Vec<QParam>,
    pub samples: usize,
    pub seed: u64,
    pub bins: usize,
    pub grid: ParamGrid,
    pub search: SearchConfig,
    /// Subsystem conditioned on in the concavity functional.
    pub conditioning: Subsystem,
    /// Worker threads; `None` uses the rayon default. Never affects results.
    pub threads: Option<usize>,
}

impl ExperimentSpec {
    /// Spec with the desk-scale defaults for `kind`.
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            q_values: kind
                .default_q_values()
                .into_iter()
                .map(|q| QParam::new(q).expect("default q values are valid"))
                .collect(),
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            bins: DEFAULT_BINS,
            grid: kind.default_grid(),
            search: SearchConfig::default(),
            conditioning: Subsystem::A,
            threads: None,
        }
    }

    pub fn with_q_values(mut self, q: &[f64]) -> Result<Self> {
        self.q_values = q.iter().map(|&v| QParam::new(v)).collect::<Result<_>>()?;
        Ok(self)
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_bins(mut self, bins: usize) -> Self {
        self.bins = bins;
        self
    }

    pub fn with_grid(mut self, grid: ParamGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.samples == 0 {
            return bad("samples must be >= 1".into());
        }
        if self.kind.is_histogram() && self.bins < 2 {
            return bad(format!("bins must be >= 2, got {}", self.bins));
        }
        if self.kind != ExperimentKind::OrderingScan && self.q_values.is_empty() {
            return bad("q_values must be nonempty".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be >= 1".into());
        }
        self.search.validate()?;
        match (self.kind, self.grid) {
            (
                ExperimentKind::WernerSweep | ExperimentKind::AlphaSweep,
                ParamGrid::Linear { points },
            ) => {
                if points < 2 {
                    return bad(format!("grid needs >= 2 points, got {points}"));
                }
            }
            (ExperimentKind::AlphaBetaScatter, ParamGrid::Rect { n_alpha, n_beta }) => {
                if n_alpha < 2 || n_beta < 2 {
                    return bad(format!("alpha-beta grid {n_alpha}x{n_beta} too small"));
                }
            }
            (
                ExperimentKind::OrderingScan,
                ParamGrid::Ordering {
                    alpha1,
                    alpha2,
                    q_min,
                    q_max,
                    steps,
                },
            ) => {
                for a in [alpha1, alpha2] {
                    if !(0.0..=1.0).contains(&a) {
                        return bad(format!("alpha {a} outside [0, 1]"));
                    }
                }
                QParam::new(q_min)?;
                QParam::new(q_max)?;
                if q_max <= q_min || steps == 0 {
                    return bad("ordering scan needs q_min < q_max and steps >= 1".into());
                }
            }
            (
                ExperimentKind::WernerSweep
                | ExperimentKind::AlphaSweep
                | ExperimentKind::AlphaBetaScatter
                | ExperimentKind::OrderingScan,
                grid,
            ) => return bad(format!("{} does not accept grid {grid:?}", self.kind)),
            _ => {}
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.threads {
            b = b.num_threads(n);
        }
        b.build()
            .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))
    }

    /// Runs `f(i)` for every sample index and returns the results in index order.
    fn per_sample<T: Send>(&self, f: impl Fn(u64) -> Result<T> + Sync) -> Result<Vec<T>> {
        let pool = self.pool()?;
        pool.install(|| (0..self.samples as u64).into_par_iter().map(&f).collect())
    }

    fn per_item<I: Sync, T: Send>(
        &self,
        items: &[I],
        f: impl Fn(&I) -> Result<T> + Sync,
    ) -> Result<Vec<T>> {
        let pool = self.pool()?;
        pool.install(|| items.par_iter().map(&f).collect())
    }
}

/// Rectangular table of finite numbers with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; rejects wrong widths and non-finite values.
    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::DimensionMismatch(format!(
                "row has {} values, header has {} columns",
                row.len(),
                self.header.len()
            )));
        }
        if let Some(i) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(self.header[i].clone()));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// One histogram bin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub left: f64,
    pub right: f64,
    pub count: usize,
    /// `count / (n · width)`.
    pub density: f64,
}

impl Bin {
    pub fn center(&self) -> f64 {
        0.5 * (self.left + self.right)
    }

    pub fn width(&self) -> f64 {
        self.right - self.left
    }
}

/// Equal-width histogram over `[min, max]` of `values`. A degenerate range is widened to
/// unit width around the single value.
pub fn histogram(values: &[f64], bins: usize) -> Result<Vec<Bin>> {
    if bins < 2 {
        return Err(Error::InvalidSpec(format!("bins must be >= 2, got {bins}")));
    }
    if values.is_empty() {
        return Err(Error::InvalidSpec("histogram of no values".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("histogram input".into()));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if max > min {
        (min, max)
    } else {
        (min - 0.5, min + 0.5)
    };
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let k = (((v - lo) / width).floor() as usize).min(bins - 1);
        counts[k] += 1;
    }
    let n = values.len() as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| Bin {
            left: lo + k as f64 * width,
            right: if k + 1 == bins {
                hi
            } else {
                lo + (k + 1) as f64 * width
            },
            count,
            density: count as f64 / (n * width),
        })
        .collect())
}

const HISTOGRAM_HEADER: [&str; 6] = [
    "q",
    "bin_left",
    "bin_right",
    "bin_center",
    "density",
    "count",
];

fn histogram_table(per_q: &[(QParam, Vec<f64>)], bins: usize) -> Result<CsvTable> {
    let mut table = CsvTable::new(HISTOGRAM_HEADER);
    for (q, values) in per_q {
        for b in histogram(values, bins)? {
            table.push(vec![
                q.value(),
                b.left,
                b.right,
                b.center(),
                b.density,
                b.count as f64,
            ])?;
        }
    }
    Ok(table)
}

/// `Δ_q = [S_q(ρ) - S_q(ρ_A)] - t[S_q(σ) - S_q(σ_A)] - (1-t)[S_q(ξ) - S_q(ξ_A)]` with
/// `ρ = tσ + (1-t)ξ`.
pub fn concavity_delta(
    sigma: &DensityMatrix,
    xi: &DensityMatrix,
    t: f64,
    q: QParam,
) -> Result<f64> {
    concavity_delta_on(sigma, xi, t, q, Subsystem::A)
}

/// [`concavity_delta`] with the conditioning subsystem chosen explicitly.
pub fn concavity_delta_on(
    sigma: &DensityMatrix,
    xi: &DensityMatrix,
    t: f64,
    q: QParam,
    keep: Subsystem,
) -> Result<f64> {
    let rho = sigma.mix(xi, t)?;
    let conditional = |s: &DensityMatrix| -> Result<f64> {
        Ok(tsallis_state(s, q)? - tsallis_state(&s.reduced_state(keep)?, q)?)
    };
    Ok(conditional(&rho)? - t * conditional(sigma)? - (1.0 - t) * conditional(xi)?)
}

/// Raw `Δ_q` samples, one vector per entry of `spec.q_values`. Sample `i` draws σ, ξ and
/// then `t ~ U[0, 1]` from stream `(seed, i)`.
pub fn concavity_samples(spec: &ExperimentSpec) -> Result<Vec<(QParam, Vec<f64>)>> {
    spec.validate()?;
    let per_sample = spec.per_sample(|i| {
        use rand::Rng;
        let mut rng = RngStream::new(spec.seed, i);
        let sigma = random_mixed(CONCAVITY_DIM, &mut rng);
        let xi = random_mixed(CONCAVITY_DIM, &mut rng);
        let t: f64 = rng.gen_range(0.0..=1.0);
        spec.q_values
            .iter()
            .map(|&q| concavity_delta_on(&sigma, &xi, t, q, spec.conditioning))
            .collect::<Result<Vec<f64>>>()
    })?;
    Ok(transpose(&spec.q_values, per_sample))
}

fn transpose(qs: &[QParam], per_sample: Vec<Vec<f64>>) -> Vec<(QParam, Vec<f64>)> {
    qs.iter()
        .enumerate()
        .map(|(k, &q)| (q, per_sample.iter().map(|row| row[k]).collect()))
        .collect()
}

/// Per-q histogram of `Δ_q`.
pub fn concavity_pdf(spec: &ExperimentSpec) -> Result<CsvTable> {
    expect_kind(spec, &[ExperimentKind::ConcavityPdf])?;
    histogram_table(&concavity_samples(spec)?, spec.bins)
}

fn expect_kind(spec: &ExperimentSpec, kinds: &[ExperimentKind]) -> Result<()> {
    if kinds.contains(&spec.kind) {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "expected one of {kinds:?}, got {}",
            spec.kind
        )))
    }
}

fn linear_points(points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| {
            if i + 1 == points {
                1.0
            } else {
                i as f64 / (points - 1) as f64
            }
        })
        .collect()
}

fn linear_grid(spec: &ExperimentSpec) -> Vec<f64> {
    match spec.grid {
        ParamGrid::Linear { points } => linear_points(points),
        _ => unreachable!("validated grid"),
    }
}

/// Rows `(c, q, D_q, S_L)` for Werner states from the closed form.
pub fn werner_sweep(spec: &ExperimentSpec) -> Result<CsvTable> {
    expect_kind(spec, &[ExperimentKind::WernerSweep])?;
    spec.validate()?;
    let mut table = CsvTable::new(["c", "q", "D_q", "S_L"]);
    for &q in &spec.q_values {
        for c in linear_grid(spec) {
            let d = norm_factor(q) * theta_analytic_bell(-c, -c, -c, q)?;
            let s_l = linear_entropy(&werner(c)?)?;
            table.push(vec![c, q.value(), d, s_l])?;
        }
    }
    Ok(table)
}

/// Rows `(alpha, q, D_q, S_L)` for α-states from the closed form.
pub fn alpha_sweep(spec: &ExperimentSpec) -> Result<CsvTable> {
    expect_kind(spec, &[ExperimentKind::AlphaSweep])?;
    spec.validate()?;
    let mut table = CsvTable::new(["alpha", "q", "D_q", "S_L"]);
    for &q in &spec.q_values {
        for a in linear_grid(spec) {
            let d = norm_factor(q) * theta_analytic_alpha(a, q)?;
            let s_l = linear_entropy(&alpha_state(a)?)?;
            table.push(vec![a, q.value(), d, s_l])?;
        }
    }
    Ok(table)
}

/// Result of [`ordering_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingScan {
    /// Columns `q, delta_D, crossing`: one row per grid point (`crossing = 0`) and one row
    /// per located sign change (`crossing = 1`), sorted by q.
    pub table: CsvTable,
    /// q-values where `D_q(α1) - D_q(α2)` changes sign, located to [`CROSSING_TOL`].
    pub crossings: Vec<f64>,
}

fn alpha_discord_difference(alpha1: f64, alpha2: f64, q: f64) -> Result<f64> {
    let q = QParam::new(q)?;
    Ok(norm_factor(q) * (theta_analytic_alpha(alpha1, q)? - theta_analytic_alpha(alpha2, q)?))
}

/// `D_q(ρ_{α1}) - D_q(ρ_{α2})` over `q_grid`, with sign changes between adjacent grid
/// points refined by bisection.
pub fn ordering_scan(alpha1: f64, alpha2: f64, q_grid: &[QParam]) -> Result<OrderingScan> {
    let f = |q: f64| alpha_discord_difference(alpha1, alpha2, q);
    let values: Vec<(f64, f64)> = q_grid
        .iter()
        .map(|q| Ok((q.value(), f(q.value())?)))
        .collect::<Result<_>>()?;

    let mut crossings = Vec::new();
    for w in values.windows(2) {
        let ((mut lo, mut f_lo), (mut hi, _)) = (w[0], w[1]);
        if (w[0].1 < 0.0 && w[1].1 > 0.0) || (w[0].1 > 0.0 && w[1].1 < 0.0) {
            while hi - lo > CROSSING_TOL {
                let mid = 0.5 * (lo + hi);
                let f_mid = f(mid)?;
                if f_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (f_mid < 0.0) == (f_lo < 0.0) {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            crossings.push(0.5 * (lo + hi));
        }
    }

    let mut rows: Vec<[f64; 3]> = values.iter().map(|&(q, d)| [q, d, 0.0]).collect();
    for &c in &crossings {
        rows.push([c, f(c)?, 1.0]);
    }
    rows.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[2].total_cmp(&b[2])));
    let mut table = CsvTable::new(["q", "delta_D", "crossing"]);
    for r in rows {
        table.push(r.to_vec())?;
    }
    Ok(OrderingScan { table, crossings })
}

/// q grid `q_min + k (q_max - q_min)/steps`, `k = 0..=steps`.
pub fn q_grid(q_min: f64, q_max: f64, steps: usize) -> Result<Vec<QParam>> {
    if steps == 0 || q_max.is_nan() || q_max <= q_min {
        return Err(Error::InvalidSpec(
            "q grid needs q_min < q_max and steps >= 1".into(),
        ));
    }
    (0..=steps)
        .map(|k| {
            let q = if k == steps {
                q_max
            } else {
                q_min + k as f64 * (q_max - q_min) / steps as f64
            };
            QParam::new(q)
        })
        .collect()
}

fn ordering_from_spec(spec: &ExperimentSpec) -> Result<OrderingScan> {
    expect_kind(spec, &[ExperimentKind::OrderingScan])?;
    spec.validate()?;
    match spec.grid {
        ParamGrid::Ordering {
            alpha1,
            alpha2,
            q_min,
            q_max,
            steps,
        } => ordering_scan(alpha1, alpha2, &q_grid(q_min, q_max, steps)?),
        _ => unreachable!("validated grid"),
    }
}

fn discord_value(rho: &DensityMatrix, q: QParam, search: &SearchConfig) -> Result<f64> {
    Ok(q_discord_with(rho, q, search)?.d_q)
}

/// `D_1` followed by `D_q` for every `q` in `spec.q_values`.
fn discord_profile(rho: &DensityMatrix, spec: &ExperimentSpec) -> Result<Vec<f64>> {
    let one = QParam::new(1.0).expect("1 is valid");
    let mut out = Vec::with_capacity(spec.q_values.len() + 1);
    out.push(discord_value(rho, one, &spec.search)?);
    for &q in &spec.q_values {
        out.push(if q == one {
            out[0]
        } else {
            discord_value(rho, q, &spec.search)?
        });
    }
    Ok(out)
}

/// Random-state scatters.
///
/// - `random-scatter`: rows `(state_id, q, D_1, D_q)` over μ-random two-qubit states.
/// - `diff-scatter`: rows `(pair_id, q, dD_1, dD_q)` with `dD = D(ρ) - D(σ)`, both drawn
///   from stream `(seed, pair_id)`.
/// - `alpha-beta-scatter`: rows `(alpha, beta, q, D_1, D_q)` over the (α, β) grid.
pub fn random_scatter(spec: &ExperimentSpec) -> Result<CsvTable> {
    expect_kind(
        spec,
        &[
            ExperimentKind::RandomScatter,
            ExperimentKind::DiffScatter,
            ExperimentKind::AlphaBetaScatter,
        ],
    )?;
    spec.validate()?;
    match spec.kind {
        ExperimentKind::RandomScatter => {
            let profiles = spec.per_sample(|i| {
                let rho = random_mixed(4, &mut RngStream::new(spec.seed, i));
                discord_profile(&rho, spec)
            })?;
            let mut table = CsvTable::new(["state_id", "q", "D_1", "D_q"]);
            for (i, p) in profiles.iter().enumerate() {
                for (k, q) in spec.q_values.iter().enumerate() {
                    table.push(vec![i as f64, q.value(), p[0], p[k + 1]])?;
                }
            }
            Ok(table)
        }
        ExperimentKind::DiffScatter => {
            let diffs = spec.per_sample(|i| {
                let mut rng = RngStream::new(spec.seed, i);
                let rho = random_mixed(4, &mut rng);
                let sigma = random_mixed(4, &mut rng);
                let a = discord_profile(&rho, spec)?;
                let b = discord_profile(&sigma, spec)?;
                Ok(a.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<f64>>())
            })?;
            let mut table = CsvTable::new(["pair_id", "q", "dD_1", "dD_q"]);
            for (i, d) in diffs.iter().enumerate() {
                for (k, q) in spec.q_values.iter().enumerate() {
                    table.push(vec![i as f64, q.value(), d[0], d[k + 1]])?;
                }
            }
            Ok(table)
        }
        ExperimentKind::AlphaBetaScatter => {
            let points = alpha_beta_points(spec);
            let profiles = spec.per_item(&points, |&(a, b)| {
                discord_profile(&alpha_beta_state(a, b)?, spec)
            })?;
            let mut table = CsvTable::new(["alpha", "beta", "q", "D_1", "D_q"]);
            for (&(a, b), p) in points.iter().zip(&profiles) {
                for (k, q) in spec.q_values.iter().enumerate() {
                    table.push(vec![a, b, q.value(), p[0], p[k + 1]])?;
                }
            }
            Ok(table)
        }
        _ => unreachable!(),
    }
}

fn alpha_beta_points(spec: &ExperimentSpec) -> Vec<(f64, f64)> {
    let ParamGrid::Rect { n_alpha, n_beta } = spec.grid else {
        unreachable!("validated grid")
    };
    let mut pts = Vec::with_capacity(n_alpha * n_beta);
    for a in linear_points(n_alpha) {
        let span = 1.0 - a;
        for b in linear_points(n_beta) {
            // clamp guards the β = 1 - α endpoint against rounding
            let beta = (-span + 2.0 * span * b).clamp(a - 1.0, 1.0 - a);
            pts.push((a, beta));
        }
    }
    pts
}

/// Raw `D_q` samples over μ-random two-qubit states, one vector per q.
pub fn discord_samples(spec: &ExperimentSpec) -> Result<Vec<(QParam, Vec<f64>)>> {
    spec.validate()?;
    let per_sample = spec.per_sample(|i| {
        let rho = random_mixed(4, &mut RngStream::new(spec.seed, i));
        spec.q_values
            .iter()
            .map(|&q| discord_value(&rho, q, &spec.search))
            .collect::<Result<Vec<f64>>>()
    })?;
    Ok(transpose(&spec.q_values, per_sample))
}

/// Per-q histogram of `D_q` over μ-random two-qubit states.
pub fn discord_pdf(spec: &ExperimentSpec) -> Result<CsvTable> {
    expect_kind(spec, &[ExperimentKind::DiscordPdf])?;
    histogram_table(&discord_samples(spec)?, spec.bins)
}

/// Dispatches on `spec.kind`.
pub fn run(spec: &ExperimentSpec) -> Result<CsvTable> {
    match spec.kind {
        ExperimentKind::ConcavityPdf => concavity_pdf(spec),
        ExperimentKind::WernerSweep => werner_sweep(spec),
        ExperimentKind::AlphaSweep => alpha_sweep(spec),
        ExperimentKind::OrderingScan => Ok(ordering_from_spec(spec)?.table),
        ExperimentKind::RandomScatter
        | ExperimentKind::DiffScatter
        | ExperimentKind::AlphaBetaScatter => random_scatter(spec),
        ExperimentKind::DiscordPdf => discord_pdf(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{maximally_mixed, werner};

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    fn quick_search() -> SearchConfig {
        SearchConfig {
            grid_theta: 16,
            grid_phi: 32,
            refine: 3,
            min_step: 1e-6,
            max_rounds: 40,
        }
    }

    #[test]
    fn concavity_delta_endpoints() {
        let mut rng = RngStream::new(1, 1);
        let s = random_mixed(4, &mut rng);
        let x = random_mixed(4, &mut rng);
        for qv in [0.5, 1.0, 2.0] {
            assert!(concavity_delta(&s, &x, 0.0, q(qv)).unwrap().abs() < 1e-12);
            assert!(concavity_delta(&s, &x, 1.0, q(qv)).unwrap().abs() < 1e-12);
            for t in [0.2, 0.7] {
                assert!(concavity_delta(&s, &s, t, q(qv)).unwrap().abs() < 1e-12);
            }
        }
        let other = maximally_mixed(4, 1);
        assert!(concavity_delta(&s, &other, 0.5, q(1.0)).is_err());
    }

    #[test]
    fn histogram_normalized() {
        let vals: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let h = histogram(&vals, 13).unwrap();
        let mass: f64 = h.iter().map(|b| b.density * b.width()).sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert_eq!(h.iter().map(|b| b.count).sum::<usize>(), 1000);
        assert!(h.iter().all(|b| b.density >= 0.0));
        let flat = histogram(&[2.0; 5], 4).unwrap();
        assert_eq!(flat.iter().map(|b| b.count).sum::<usize>(), 5);
        assert!(histogram(&[1.0], 1).is_err());
        assert!(histogram(&[f64::NAN], 4).is_err());
    }

    #[test]
    fn csv_table_rejects_bad_rows() {
        let mut t = CsvTable::new(["a", "b"]);
        assert!(t.push(vec![1.0]).is_err());
        assert!(matches!(t.push(vec![1.0, f64::NAN]), Err(Error::NonFinite(c)) if c == "b"));
        t.push(vec![1.0, 2.0]).unwrap();
        assert_eq!(t.column("b").unwrap(), vec![2.0]);
    }

    #[test]
    fn werner_sweep_shape_and_endpoints() {
        let spec = ExperimentSpec::new(ExperimentKind::WernerSweep);
        let t = werner_sweep(&spec).unwrap();
        assert_eq!(t.header(), ["c", "q", "D_q", "S_L"]);
        assert_eq!(t.rows().len(), 3 * 101);
        for r in t.rows() {
            if r[0] == 0.0 {
                assert!(r[2].abs() < 1e-12);
                assert!((r[3] - 1.0).abs() < 1e-12);
            }
            if r[0] == 1.0 && r[1] == 1.0 {
                assert!((r[2] - 1.0).abs() < 1e-12);
            }
        }
        // S_L(werner(1/2)) = 0.75
        assert!((linear_entropy(&werner(0.5).unwrap()).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn alpha_sweep_endpoints_and_multivalued() {
        let spec = ExperimentSpec::new(ExperimentKind::AlphaSweep);
        let t = alpha_sweep(&spec).unwrap();
        let rows: Vec<&Vec<f64>> = t.rows().iter().filter(|r| r[1] == 1.0).collect();
        assert!(rows[0][2].abs() < 1e-12);
        assert!((rows.last().unwrap()[2] - 1.0).abs() < 1e-12);
        assert!(rows.iter().all(|r| (0.0..=1.0 + 1e-12).contains(&r[3])));
    }

    #[test]
    fn ordering_identical_states_is_zero() {
        let grid = q_grid(0.1, 3.0, 50).unwrap();
        let scan = ordering_scan(0.3, 0.3, &grid).unwrap();
        assert!(scan.crossings.is_empty());
        assert!(scan
            .table
            .column("delta_D")
            .unwrap()
            .iter()
            .all(|&d| d == 0.0));
    }

    #[test]
    fn ordering_extremes() {
        let scan = ordering_scan(1.0, 0.0, &[q(1.0)]).unwrap();
        assert!((scan.table.rows()[0][1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ordering_finds_crossing() {
        let scan = ordering_scan(0.4, 0.5, &q_grid(0.1, 3.0, 200).unwrap()).unwrap();
        assert!(!scan.crossings.is_empty());
        for &c in &scan.crossings {
            let lo = alpha_discord_difference(0.4, 0.5, c - CROSSING_TOL).unwrap();
            let hi = alpha_discord_difference(0.4, 0.5, c + CROSSING_TOL).unwrap();
            assert!(lo * hi <= 0.0);
        }
    }

    #[test]
    fn spec_validation() {
        let ok = ExperimentSpec::new(ExperimentKind::DiscordPdf);
        assert!(ok.validate().is_ok());
        assert!(ok.clone().with_samples(0).validate().is_err());
        assert!(ok.clone().with_bins(1).validate().is_err());
        assert!(ok.clone().with_q_values(&[]).unwrap().validate().is_err());
        assert!(ok.clone().with_q_values(&[0.0]).is_err());
        assert!(ExperimentSpec::new(ExperimentKind::WernerSweep)
            .with_grid(ParamGrid::None)
            .validate()
            .is_err());
        assert_eq!(
            "diff-scatter".parse::<ExperimentKind>().unwrap(),
            ExperimentKind::DiffScatter
        );
        assert!("nope".parse::<ExperimentKind>().is_err());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let mut spec = ExperimentSpec::new(ExperimentKind::RandomScatter).with_samples(12);
        spec.search = quick_search();
        let a = random_scatter(&spec.clone().with_threads(Some(1))).unwrap();
        let b = random_scatter(&spec.clone().with_threads(Some(4))).unwrap();
        assert_eq!(a, b);
        let mut spec = ExperimentSpec::new(ExperimentKind::ConcavityPdf).with_samples(200);
        spec.bins = 10;
        let a = concavity_pdf(&spec.clone().with_threads(Some(1))).unwrap();
        let b = concavity_pdf(&spec.with_threads(Some(3))).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn alpha_beta_grid_within_domain() {
        let spec = ExperimentSpec::new(ExperimentKind::AlphaBetaScatter);
        let pts = alpha_beta_points(&spec);
        assert_eq!(pts.len(), 2500);
        for (a, b) in pts {
            assert!(alpha_beta_state(a, b).is_ok(), "({a}, {b})");
        }
    }

    #[test]
    fn discord_pdf_normalized() {
        let mut spec = ExperimentSpec::new(ExperimentKind::DiscordPdf).with_samples(60);
        spec.search = quick_search();
        spec.bins = 8;
        let t = discord_pdf(&spec).unwrap();
        for qv in [0.5, 1.0, 2.0] {
            let mass: f64 = t
                .rows()
                .iter()
                .filter(|r| r[0] == qv)
                .map(|r| r[4] * (r[2] - r[1]))
                .sum();
            assert!((mass - 1.0).abs() < 1e-9);
        }
    }
}
