//! Density matrices: validation, the parametric two-qubit families, and random states
//! drawn from the Haar × flat-simplex product measure.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, kron, pauli, ComplexMatrix, Subsystem, HERMITIAN_TOL};

/// Allowed deviation of `Tr ρ` from 1.
pub const TRACE_TOL: f64 = 1e-9;

/// Most negative eigenvalue accepted as rounding noise.
pub const PSD_TOL: f64 = 1e-10;

/// Tolerance on the Bell-diagonal eigenvalues.
pub const BELL_PARAM_TOL: f64 = 1e-12;

/// A validated density matrix on a `dim_a ⊗ dim_b` space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, positivity and the bipartition. The stored matrix
    /// is the Hermitian part of `mat`.
    pub fn new(mat: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || dim_a * dim_b != mat.dim() {
            return Err(Error::Bipartition {
                dim: mat.dim(),
                dim_a,
                dim_b,
            });
        }
        let defect = mat.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let mat = mat.hermitian_part();
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let min_eig = linalg::hermitian_eigenvalues(&mat)?[0];
        if min_eig < -PSD_TOL {
            return Err(Error::NotPsd(min_eig));
        }
        Ok(Self { mat, dim_a, dim_b })
    }

    /// Two-qubit state (2 ⊗ 2 split).
    pub fn two_qubit(mat: ComplexMatrix) -> Result<Self> {
        Self::new(mat, 2, 2)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn is_two_qubit(&self) -> bool {
        self.dim_a == 2 && self.dim_b == 2
    }

    /// Reduced density matrix of `keep`.
    pub fn reduced(&self, keep: Subsystem) -> ComplexMatrix {
        linalg::partial_trace(&self.mat, self.dim_a, self.dim_b, keep)
            .expect("bipartition validated on construction")
    }

    /// Reduced state of `keep` as a validated single-party state.
    pub fn reduced_state(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let r = self.reduced(keep);
        let d = r.dim();
        DensityMatrix::new(r, d, 1)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.mat.trace_of_square()
    }

    /// Ascending eigenvalues.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        linalg::hermitian_eigenvalues(&self.mat)
    }

    /// `U ρ U^H`.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "unitary is {0}x{0}, state is {1}x{1}",
                u.dim(),
                self.dim()
            )));
        }
        DensityMatrix::new(&(u * &self.mat) * &u.adjoint(), self.dim_a, self.dim_b)
    }

    /// `t·self + (1-t)·other`.
    pub fn mix(&self, other: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        if self.dim_a != other.dim_a || self.dim_b != other.dim_b {
            return Err(Error::DimensionMismatch(
                "mixing states on different splits".into(),
            ));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameters(format!(
                "mixing weight {t} outside [0, 1]"
            )));
        }
        let m = &self.mat.scale(t) + &other.mat.scale(1.0 - t);
        DensityMatrix::new(m, self.dim_a, self.dim_b)
    }
}

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() || lambdas.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return Err(Error::InvalidParameters(format!(
                "simplex coordinates must lie in [0, 1]: {lambdas:?}"
            )));
        }
        let s: f64 = lambdas.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameters(format!(
                "simplex coordinates sum to {s}"
            )));
        }
        Ok(Self(lambdas))
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Deterministic random stream keyed by `(seed, stream_id)`.
///
/// Each Monte Carlo sample owns one stream, so draws never depend on which worker ran the
/// sample or in what order.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha12Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Eigenvalues of `(1/4)(I + Σ c_j σ_j⊗σ_j)` in the order
/// `(1-c1-c2-c3, 1-c1+c2+c3, 1+c1-c2+c3, 1+c1+c2-c3) / 4`.
pub fn bell_eigenvalues(c1: f64, c2: f64, c3: f64) -> [f64; 4] {
    [
        0.25 * (1.0 - c1 - c2 - c3),
        0.25 * (1.0 - c1 + c2 + c3),
        0.25 * (1.0 + c1 - c2 + c3),
        0.25 * (1.0 + c1 + c2 - c3),
    ]
}

/// True when all four Bell-diagonal eigenvalues are nonnegative (up to [`BELL_PARAM_TOL`]).
pub fn bell_params_valid(c1: f64, c2: f64, c3: f64) -> bool {
    [c1, c2, c3].iter().all(|c| c.is_finite())
        && bell_eigenvalues(c1, c2, c3)
            .iter()
            .all(|&l| l >= -BELL_PARAM_TOL)
}

/// Bell-diagonal state `(1/4)(I + Σ c_j σ_j⊗σ_j)`.
pub fn bell_diagonal(c1: f64, c2: f64, c3: f64) -> Result<DensityMatrix> {
    if !bell_params_valid(c1, c2, c3) {
        return Err(Error::InvalidParameters(format!(
            "Bell-diagonal ({c1}, {c2}, {c3}) has eigenvalues {:?}",
            bell_eigenvalues(c1, c2, c3)
        )));
    }
    let mut m = ComplexMatrix::identity(4);
    for (c, s) in [c1, c2, c3].into_iter().zip(pauli()) {
        m = &m + &kron(&s, &s).scale(c);
    }
    DensityMatrix::two_qubit(m.scale(0.25))
}

/// Werner state `(1-c) I/4 + c |Ψ-><Ψ-|`, `c ∈ [0, 1]`.
pub fn werner(c: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::InvalidParameters(format!(
            "Werner parameter {c} outside [0, 1]"
        )));
    }
    bell_diagonal(-c, -c, -c)
}

/// `α |Φ+><Φ+| + (1-α)/2 (|01><01| + |10><10|)`, `α ∈ [0, 1]`.
pub fn alpha_state(alpha: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameters(format!(
            "alpha {alpha} outside [0, 1]"
        )));
    }
    alpha_beta_state(alpha, 0.0)
}

/// Two-parameter X state with diagonal `(α, 1-α-β, 1-α+β, α)/2` and coherence `α/2`
/// between `|00>` and `|11>`. Domain: `0 <= α <= 1`, `α-1 <= β <= 1-α`.
pub fn alpha_beta_state(alpha: f64, beta: f64) -> Result<DensityMatrix> {
    let in_domain = (0.0..=1.0).contains(&alpha) && beta >= alpha - 1.0 && beta <= 1.0 - alpha;
    if !in_domain {
        return Err(Error::InvalidParameters(format!(
            "(alpha, beta) = ({alpha}, {beta}) outside 0<=alpha<=1, alpha-1<=beta<=1-alpha"
        )));
    }
    let h = 0.5 * alpha;
    #[rustfmt::skip]
    let m = ComplexMatrix::from_real(4, &[
        h,   0.0,                          0.0,                          h,
        0.0, 0.5 * (1.0 - alpha - beta),   0.0,                          0.0,
        0.0, 0.0,                          0.5 * (1.0 - alpha + beta),   0.0,
        h,   0.0,                          0.0,                          h,
    ])?;
    DensityMatrix::two_qubit(m)
}

/// Pure state `Σ_i √λ_i |ii>`, so that the reduced spectrum is exactly `λ`.
pub fn pure_from_schmidt(lams: &SimplexPoint) -> Result<DensityMatrix> {
    if lams.len() != 2 {
        return Err(Error::InvalidParameters(format!(
            "two-qubit Schmidt form needs 2 coefficients, got {}",
            lams.len()
        )));
    }
    let l = lams.lambdas();
    let ket = [real(l[0].sqrt()), real(0.0), real(0.0), real(l[1].sqrt())];
    DensityMatrix::two_qubit(ComplexMatrix::outer(&ket))
}

/// Haar-random `n × n` unitary: QR of a complex Ginibre matrix with the phases of `R`'s
/// diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    assert!(n >= 1, "n must be >= 1");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let g = ComplexMatrix::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    });
    let (q, r) = linalg::qr(&g);
    let phases: Vec<Complex64> = (0..n)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                real(1.0)
            } else {
                d / d.norm()
            }
        })
        .collect();
    ComplexMatrix::from_fn(n, |i, j| q[(i, j)] * phases[j])
}

/// Flat-Dirichlet point on the `(n-1)`-simplex (normalized standard exponentials).
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SimplexPoint {
    assert!(n >= 1, "n must be >= 1");
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    let mut lambdas: Vec<f64> = draws.iter().map(|x| x / total).collect();
    // fold the rounding residue into the largest coordinate
    let residue = 1.0 - lambdas.iter().sum::<f64>();
    let imax = (0..n)
        .max_by(|&a, &b| lambdas[a].total_cmp(&lambdas[b]))
        .unwrap();
    lambdas[imax] = (lambdas[imax] + residue).clamp(0.0, 1.0);
    SimplexPoint(lambdas)
}

/// Bipartition used for an `n`-dimensional random state: `2 ⊗ n/2` when `n` is even and
/// at least 4, otherwise `n ⊗ 1`.
pub fn default_bipartition(n: usize) -> (usize, usize) {
    if n >= 4 && n.is_multiple_of(2) {
        (2, n / 2)
    } else {
        (n, 1)
    }
}

/// `U D[λ] U^H` with `λ` flat on the simplex and `U` Haar. The simplex point is drawn
/// first, then the unitary.
pub fn random_mixed<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix {
    let (dim_a, dim_b) = default_bipartition(n);
    random_mixed_split(dim_a, dim_b, rng)
}

/// [`random_mixed`] on an explicit `dim_a ⊗ dim_b` split.
pub fn random_mixed_split<R: Rng + ?Sized>(
    dim_a: usize,
    dim_b: usize,
    rng: &mut R,
) -> DensityMatrix {
    let n = dim_a * dim_b;
    let lams = random_simplex(n, rng);
    let u = random_unitary(n, rng);
    let d = ComplexMatrix::from_real_diagonal(lams.lambdas());
    let rho = &(&u * &d) * &u.adjoint();
    DensityMatrix::new(rho, dim_a, dim_b).expect("U D U^H is a valid state")
}

/// `|ψ><ψ|` with `|ψ>` the first column of a Haar unitary.
pub fn random_pure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix {
    assert!(n >= 2, "n must be >= 2");
    let u = random_unitary(n, rng);
    let (dim_a, dim_b) = default_bipartition(n);
    DensityMatrix::new(ComplexMatrix::outer(&u.column(0)), dim_a, dim_b)
        .expect("rank-1 projector is a valid state")
}

/// `|Φ+> = (|00> + |11>)/√2`.
pub fn phi_plus() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::two_qubit(ComplexMatrix::outer(&[
        real(h),
        real(0.0),
        real(0.0),
        real(h),
    ]))
    .unwrap()
}

/// `|Ψ-> = (|01> - |10>)/√2`.
pub fn psi_minus() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::two_qubit(ComplexMatrix::outer(&[
        real(0.0),
        real(h),
        real(-h),
        real(0.0),
    ]))
    .unwrap()
}

/// `I/n` on a `dim_a ⊗ dim_b` split.
pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> DensityMatrix {
    let n = dim_a * dim_b;
    DensityMatrix::new(
        ComplexMatrix::identity(n).scale(1.0 / n as f64),
        dim_a,
        dim_b,
    )
    .unwrap()
}

/// `σ_A ⊗ σ_B`.
pub fn product_state(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(kron(a.matrix(), b.matrix()), a.dim(), b.dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    fn half_identity() -> ComplexMatrix {
        ComplexMatrix::identity(2).scale(0.5)
    }

    #[test]
    fn density_matrix_validation() {
        let not_herm = ComplexMatrix::from_real(2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(matches!(
            DensityMatrix::new(not_herm, 2, 1),
            Err(Error::NotHermitian(_))
        ));
        let bad_trace = ComplexMatrix::identity(2);
        assert!(matches!(
            DensityMatrix::new(bad_trace, 2, 1),
            Err(Error::InvalidTrace(_))
        ));
        let not_psd = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(
            DensityMatrix::new(not_psd, 2, 1),
            Err(Error::NotPsd(_))
        ));
        let ok = ComplexMatrix::identity(4).scale(0.25);
        assert!(matches!(
            DensityMatrix::new(ok, 2, 3),
            Err(Error::Bipartition { .. })
        ));
    }

    #[test]
    fn bell_diagonal_examples() {
        let mm = bell_diagonal(0.0, 0.0, 0.0).unwrap();
        assert!(close(
            mm.matrix(),
            &ComplexMatrix::identity(4).scale(0.25),
            1e-15
        ));
        let singlet = bell_diagonal(-1.0, -1.0, -1.0).unwrap();
        assert!(close(singlet.matrix(), psi_minus().matrix(), 1e-15));
        assert!(bell_diagonal(1.0, 1.0, 1.0).is_err());
        assert_eq!(bell_eigenvalues(1.0, 1.0, 1.0)[0], -0.5);
    }

    #[test]
    fn bell_diagonal_spectrum_matches_formula() {
        // λ = (0.1, 0.25, 0.3, 0.35) for c = (0.3, 0.2, 0.1)
        let lam = bell_eigenvalues(0.3, 0.2, 0.1);
        let expected = [0.1, 0.25, 0.3, 0.35];
        for (a, b) in lam.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let spec = bell_diagonal(0.3, 0.2, 0.1).unwrap().spectrum().unwrap();
        for (a, b) in spec.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{spec:?}");
        }
    }

    #[test]
    fn werner_examples() {
        assert!(close(
            werner(0.0).unwrap().matrix(),
            &ComplexMatrix::identity(4).scale(0.25),
            1e-15
        ));
        assert!(close(
            werner(1.0).unwrap().matrix(),
            psi_minus().matrix(),
            1e-15
        ));
        assert!(werner(1.1).is_err());
        assert!(werner(-0.1).is_err());
        for c in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let w = werner(c).unwrap();
            let direct =
                &ComplexMatrix::identity(4).scale((1.0 - c) / 4.0) + &psi_minus().matrix().scale(c);
            assert!(close(w.matrix(), &direct, 1e-15));
            let mut expected = [
                (1.0 - c) / 4.0,
                (1.0 - c) / 4.0,
                (1.0 - c) / 4.0,
                (1.0 + 3.0 * c) / 4.0,
            ];
            expected.sort_by(f64::total_cmp);
            let spec = w.spectrum().unwrap();
            for (a, b) in spec.iter().zip(expected) {
                assert!((a - b).abs() < 1e-12);
            }
            let ra = w.reduced(Subsystem::A);
            assert!(close(&ra, &half_identity(), 1e-12));
        }
    }

    #[test]
    fn alpha_examples() {
        let a0 = alpha_state(0.0).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.0, 0.5, 0.5, 0.0]);
        assert!(close(a0.matrix(), &expected, 1e-15));
        assert!(close(
            alpha_state(1.0).unwrap().matrix(),
            phi_plus().matrix(),
            1e-15
        ));
        let spec = alpha_state(0.4).unwrap().spectrum().unwrap();
        for (a, b) in spec.iter().zip([0.0, 0.3, 0.3, 0.4]) {
            assert!((a - b).abs() < 1e-12, "{spec:?}");
        }
        for a in [0.0, 0.3, 0.7, 1.0] {
            let s = alpha_state(a).unwrap();
            assert!(close(&s.reduced(Subsystem::A), &half_identity(), 1e-12));
            assert!(close(&s.reduced(Subsystem::B), &half_identity(), 1e-12));
        }
        assert!(alpha_state(1.5).is_err());
    }

    #[test]
    fn alpha_is_bell_diagonal() {
        // c = (α, -α, 2α-1)
        for a in [0.0, 0.25, 0.6, 1.0] {
            let bd = bell_diagonal(a, -a, 2.0 * a - 1.0).unwrap();
            assert!(close(bd.matrix(), alpha_state(a).unwrap().matrix(), 1e-15));
        }
    }

    #[test]
    fn alpha_beta_examples() {
        for a in [0.0, 0.4, 1.0] {
            assert_eq!(alpha_beta_state(a, 0.0).unwrap(), alpha_state(a).unwrap());
        }
        assert!(close(
            alpha_beta_state(1.0, 0.0).unwrap().matrix(),
            phi_plus().matrix(),
            1e-15
        ));
        assert!(alpha_beta_state(0.5, 0.6).is_err());
        assert!(alpha_beta_state(0.5, -0.6).is_err());
        assert!(alpha_beta_state(0.5, 0.5).is_ok());
    }

    #[test]
    fn schmidt_examples() {
        let p = pure_from_schmidt(&SimplexPoint::new(vec![1.0, 0.0]).unwrap()).unwrap();
        assert!(close(
            p.matrix(),
            &ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0]),
            1e-15
        ));
        let p = pure_from_schmidt(&SimplexPoint::new(vec![0.5, 0.5]).unwrap()).unwrap();
        assert!(close(p.matrix(), phi_plus().matrix(), 1e-15));
        let p = pure_from_schmidt(&SimplexPoint::new(vec![0.7, 0.3]).unwrap()).unwrap();
        assert!(close(
            &p.reduced(Subsystem::A),
            &ComplexMatrix::from_real_diagonal(&[0.7, 0.3]),
            1e-15
        ));
        assert!(pure_from_schmidt(&SimplexPoint::new(vec![1.0]).unwrap()).is_err());
    }

    #[test]
    fn random_unitary_is_unitary_and_reproducible() {
        for n in 1..=5 {
            let mut rng = RngStream::new(11, n as u64);
            let u = random_unitary(n, &mut rng);
            let uhu = &u.adjoint() * &u;
            assert!(close(&uhu, &ComplexMatrix::identity(n), 1e-10));
        }
        let a = random_unitary(4, &mut RngStream::new(5, 9));
        let b = random_unitary(4, &mut RngStream::new(5, 9));
        assert_eq!(a, b);
        let c = random_unitary(4, &mut RngStream::new(5, 10));
        assert_ne!(a, c);
    }

    #[test]
    fn random_simplex_basic() {
        let p = random_simplex(1, &mut RngStream::new(1, 1));
        assert_eq!(p.lambdas(), &[1.0]);
        let mut rng = RngStream::new(3, 0);
        for _ in 0..1000 {
            let p = random_simplex(4, &mut rng);
            let s: f64 = p.lambdas().iter().sum();
            assert!((s - 1.0).abs() <= 1e-12);
            assert!(p.lambdas().iter().all(|l| (0.0..=1.0).contains(l)));
        }
    }

    #[test]
    fn random_mixed_spectrum_is_generating_point() {
        let mut a = RngStream::new(17, 3);
        let mut b = RngStream::new(17, 3);
        let rho = random_mixed(4, &mut a);
        let mut lams = random_simplex(4, &mut b).lambdas().to_vec();
        lams.sort_by(f64::total_cmp);
        let spec = rho.spectrum().unwrap();
        for (x, y) in spec.iter().zip(&lams) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        assert_eq!((rho.dim_a(), rho.dim_b()), (2, 2));
        assert_eq!(random_mixed(4, &mut RngStream::new(17, 3)), rho);
    }

    #[test]
    fn random_pure_is_rank_one() {
        let mut rng = RngStream::new(23, 0);
        for _ in 0..50 {
            let rho = random_pure(4, &mut rng);
            assert!((rho.purity() - 1.0).abs() < 1e-12);
            let red = rho.reduced(Subsystem::A);
            let spec = linalg::hermitian_eigenvalues(&red).unwrap();
            assert!(spec.iter().all(|&l| (-1e-12..=1.0 + 1e-12).contains(&l)));
            assert!((spec[0] + spec[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mix_and_conjugate() {
        let a = werner(0.3).unwrap();
        let b = alpha_state(0.6).unwrap();
        assert_eq!(
            a.mix(&b, 1.0).unwrap().matrix().max_abs_diff(a.matrix()),
            0.0
        );
        assert!(a.mix(&b, 1.5).is_err());
        let u = random_unitary(4, &mut RngStream::new(1, 2));
        let c = a.conjugate(&u).unwrap();
        assert!((c.purity() - a.purity()).abs() < 1e-12);
    }
}
