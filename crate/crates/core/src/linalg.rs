//! Dense complex linear algebra for the small matrices that show up in two-qubit
//! problems: products, Kronecker products, partial traces, QR and a cyclic Jacobi
//! Hermitian eigensolver.
//!
//! Storage is row-major. Everything here is sized for `dim <= 8`; there is no
//! blocking and no sparse path.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used to accept a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Tolerance used to accept an operator as a projector.
pub const PROJECTOR_TOL: f64 = 1e-10;

/// Jacobi sweeps stop once the off-diagonal Frobenius norm falls below this.
const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which factor of a bipartite space to keep when tracing out the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. `data.len()` must be a nonzero perfect square
    /// equal to `dim * dim`.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("dim must be >= 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for dim {}, got {}",
                dim * dim,
                dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dim must be >= 1");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::new(dim, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// The rank-1 operator `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A - A^H|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(A + A^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// `Tr(A^2)` taking only the real part; for Hermitian `A` this is the squared Frobenius norm.
    pub fn trace_of_square(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += (self[(i, j)] * self[(j, i)]).re;
            }
        }
        acc
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {0}x{0} by {1}x{1}",
                self.dim, rhs.dim
            )));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on a dimension mismatch.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs)
            .expect("matrix product dimension mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Pauli matrices σ_x, σ_y, σ_z.
pub fn pauli() -> [ComplexMatrix; 3] {
    let i = Complex64::i();
    [
        ComplexMatrix::new(2, vec![ZERO, ONE, ONE, ZERO]).unwrap(),
        ComplexMatrix::new(2, vec![ZERO, -i, i, ZERO]).unwrap(),
        ComplexMatrix::new(2, vec![ONE, ZERO, ZERO, -ONE]).unwrap(),
    ]
}

/// Kronecker product: entry `(i*db + k, j*db + l)` is `a(i,j) * b(k,l)`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    ComplexMatrix::from_fn(da * db, |r, c| a[(r / db, c / db)] * b[(r % db, c % db)])
}

/// Reduced operator on `keep` after tracing out the other factor of a `dim_a x dim_b` split.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    if dim_a == 0 || dim_b == 0 || rho.dim != dim_a * dim_b {
        return Err(Error::Bipartition {
            dim: rho.dim,
            dim_a,
            dim_b,
        });
    }
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(dim_a, |i, j| {
            (0..dim_b)
                .map(|k| rho[(i * dim_b + k, j * dim_b + k)])
                .sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(dim_b, |i, j| {
            (0..dim_a)
                .map(|k| rho[(k * dim_b + i, k * dim_b + j)])
                .sum()
        }),
    };
    Ok(out)
}

/// `pi * rho * pi`, unnormalized. `pi` must be idempotent within [`PROJECTOR_TOL`].
pub fn sandwich(pi: &ComplexMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if pi.dim != rho.dim {
        return Err(Error::DimensionMismatch(format!(
            "projector is {0}x{0}, state is {1}x{1}",
            pi.dim, rho.dim
        )));
    }
    let defect = (pi * pi).max_abs_diff(pi);
    if defect > PROJECTOR_TOL {
        return Err(Error::NotProjector(defect));
    }
    Ok(&(pi * rho) * pi)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    /// `V diag(λ) V^H`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * self.eigenvalues[k])
                .sum()
        })
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// The input is symmetrized before rotating, so rounding-level anti-Hermitian noise is
/// discarded. Inputs further than [`HERMITIAN_TOL`] from Hermitian are rejected.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianSpectrum> {
    let defect = a.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = a.dim;
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.max_abs().max(1.0);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) < JACOBI_OFF_TOL * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&m) >= JACOBI_OFF_TOL * scale {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(a)?.eigenvalues)
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Zeroes `m(p,q)` with the unitary `G = diag(1, e^{-iφ}) R(θ)` acting on rows/columns p,q,
/// where φ is the phase of `m(p,q)`. Updates `m <- G^H m G` and `v <- v G`.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = m[(p, q)];
    let b_abs = b.norm();
    if b_abs == 0.0 {
        return;
    }
    let n = m.dim;
    let phase = b / b_abs;
    let (app, aqq) = (m[(p, p)].re, m[(q, q)].re);

    let theta = (aqq - app) / (2.0 * b_abs);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G columns: g_p = (c, -s e^{-iφ}) and g_q = (s, c e^{-iφ}) in the (p, q) coordinates.
    let gpp = Complex64::new(c, 0.0);
    let gqp = -phase.conj() * s;
    let gpq = Complex64::new(s, 0.0);
    let gqq = phase.conj() * c;

    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * gpp + mkq * gqp;
        m[(k, q)] = mkp * gpq + mkq * gqq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = gpp.conj() * mpk + gqp.conj() * mqk;
        m[(q, k)] = gpq.conj() * mpk + gqq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
}

/// Householder QR. Returns `(Q, R)` with `Q` unitary and `R` upper triangular; the diagonal
/// of `R` carries arbitrary phases.
pub fn qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim;
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(1) {
        let norm_x: f64 = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() == 0.0 {
            ONE
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;
        let mut w: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        w[0] -= alpha;
        let w_norm: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if w_norm == 0.0 {
            continue;
        }
        for z in w.iter_mut() {
            *z /= w_norm;
        }
        // R <- (I - 2 w w^H) R on rows k..n
        for j in 0..n {
            let dot: Complex64 = (k..n).map(|i| w[i - k].conj() * r[(i, j)]).sum();
            for i in k..n {
                r[(i, j)] -= w[i - k] * dot * 2.0;
            }
        }
        // Q <- Q (I - 2 w w^H) on columns k..n
        for i in 0..n {
            let dot: Complex64 = (k..n).map(|j| q[(i, j)] * w[j - k]).sum();
            for j in k..n {
                q[(i, j)] -= dot * w[j - k].conj() * 2.0;
            }
        }
    }
    for i in 1..n {
        for j in 0..i {
            r[(i, j)] = ZERO;
        }
    }
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn phi_plus() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::outer(&[c(h), c(0.0), c(0.0), c(h)])
    }

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = ComplexMatrix::from_fn(n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        g.hermitian_part()
    }

    #[test]
    fn kron_identities_and_paulis() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let [_, _, z] = pauli();
        let zz = kron(&z, &z);
        assert_eq!(
            zz,
            ComplexMatrix::from_real_diagonal(&[1.0, -1.0, -1.0, 1.0])
        );
    }

    #[test]
    fn kron_xx_bell_offdiagonals() {
        // (1/4)(I + σx⊗σx): off-diagonal 1/4 at (0,3),(3,0),(1,2),(2,1)
        let [x, _, _] = pauli();
        let rho = (&ComplexMatrix::identity(4) + &kron(&x, &x)).scale(0.25);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j || i + j == 3 { 0.25 } else { 0.0 };
                assert!((rho[(i, j)] - c(expected)).norm() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn partial_trace_product_state() {
        let ket00 = [c(1.0), c(0.0), c(0.0), c(0.0)];
        let rho = ComplexMatrix::outer(&ket00);
        let ra = partial_trace(&rho, 2, 2, Subsystem::A).unwrap();
        assert_eq!(ra, ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
        let rb = partial_trace(&rho, 2, 2, Subsystem::B).unwrap();
        assert_eq!(rb, ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn partial_trace_keeps_correct_factor() {
        let a = ComplexMatrix::from_real_diagonal(&[0.9, 0.1]);
        let b = ComplexMatrix::from_real_diagonal(&[0.3, 0.7]);
        let ab = kron(&a, &b);
        assert!(
            partial_trace(&ab, 2, 2, Subsystem::A)
                .unwrap()
                .max_abs_diff(&a)
                < 1e-15
        );
        assert!(
            partial_trace(&ab, 2, 2, Subsystem::B)
                .unwrap()
                .max_abs_diff(&b)
                < 1e-15
        );
        // asymmetric split
        let c3 = ComplexMatrix::from_real_diagonal(&[0.2, 0.3, 0.5]);
        let ac = kron(&a, &c3);
        assert!(
            partial_trace(&ac, 2, 3, Subsystem::B)
                .unwrap()
                .max_abs_diff(&c3)
                < 1e-15
        );
    }

    #[test]
    fn partial_trace_rejects_bad_split() {
        let rho = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_trace(&rho, 2, 3, Subsystem::A),
            Err(Error::Bipartition { .. })
        ));
    }

    #[test]
    fn eig_scalar_matrix() {
        let s = hermitian_eig(&ComplexMatrix::identity(4).scale(0.25)).unwrap();
        for l in s.eigenvalues {
            assert!((l - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        for seed in 0..50 {
            let n = 1 + (seed as usize % 8);
            let a = random_hermitian(n, seed);
            let s = hermitian_eig(&a).unwrap();
            assert!(s.reconstruct().max_abs_diff(&a) < 1e-10);
            let v = &s.eigenvectors;
            let vhv = &v.adjoint() * v;
            assert!(vhv.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            for k in 0..n {
                let col = v.column(k);
                for i in 0..n {
                    let av: Complex64 = (0..n).map(|j| a[(i, j)] * col[j]).sum();
                    assert!((av - col[i] * s.eigenvalues[k]).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn sandwich_cases() {
        let rho = phi_plus();
        let same = sandwich(&ComplexMatrix::identity(4), &rho).unwrap();
        assert!(same.max_abs_diff(&rho) < 1e-15);

        // I ⊗ |0><0| on |Φ+><Φ+| leaves (1/2)|00><00|
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let pi = kron(&ComplexMatrix::identity(2), &p0);
        let out = sandwich(&pi, &rho).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.0]);
        assert!(out.max_abs_diff(&expected) < 1e-15);

        let not_proj = ComplexMatrix::identity(4).scale(2.0);
        assert!(matches!(
            sandwich(&not_proj, &rho),
            Err(Error::NotProjector(_))
        ));
        assert!(matches!(
            sandwich(&ComplexMatrix::identity(2), &rho),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn qr_factorizes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..=6 {
            let a = ComplexMatrix::from_fn(n, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let (q, r) = qr(&a);
            assert!((&q * &r).max_abs_diff(&a) < 1e-12);
            assert!((&q.adjoint() * &q).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
            for i in 0..n {
                for j in 0..i {
                    assert_eq!(r[(i, j)], ZERO);
                }
            }
        }
    }

    #[test]
    fn new_validates_shape() {
        assert!(ComplexMatrix::new(0, vec![]).is_err());
        assert!(ComplexMatrix::new(2, vec![ZERO; 3]).is_err());
    }
}
