//! Small dense complex linear algebra.
//!
//! Everything here works on square matrices of modest size (the library is
//! used up to N = 16). The Hermitian eigensolver is a cyclic complex Jacobi
//! iteration, which is slow for large N but accurate to a few ulps on the
//! sizes that matter here.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Max `|m - m^H|` entry tolerated by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues in `[-PSD_FLOOR, 0)` are treated as round-off and clamped to zero.
pub const PSD_FLOOR: f64 = 1e-10;
/// Positive eigenvalues below `NOISE_REL * lambda_max` are clamped to zero in
/// [`psd_sqrt`]; their square roots would otherwise amplify solver noise.
pub const NOISE_REL: f64 = 1e-14;

const JACOBI_REL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        CMatrix { dim, data: vec![C0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C1;
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails unless `data.len() == dim * dim`.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDim(0));
        }
        if data.len() != dim * dim {
            return Err(Error::DimMismatch { left: dim * dim, right: data.len() });
        }
        Ok(CMatrix { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimMismatch { left: dim, right: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(dim, data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimMismatch { left: a.len(), right: b.len() });
        }
        let n = a.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = a[i] * b[j].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimMismatch { left: self.dim, right: rhs.dim });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &CMatrix) -> Result<CMatrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &CMatrix) -> Result<CMatrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &CMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<CMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimMismatch { left: self.dim, right: rhs.dim });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(CMatrix { dim: self.dim, data })
    }

    /// `Tr(self * rhs)` without forming the product.
    pub fn trace_of_product(&self, rhs: &CMatrix) -> Result<Complex64> {
        if self.dim != rhs.dim {
            return Err(Error::DimMismatch { left: self.dim, right: rhs.dim });
        }
        let n = self.dim;
        let mut acc = C0;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * rhs.data[k * n + i];
            }
        }
        Ok(acc)
    }

    /// Largest entry of `|m - m^H|`.
    pub fn max_hermitian_asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m^H) / 2`, with an exactly real diagonal.
    pub fn hermitian_part(&self) -> CMatrix {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            out[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.data.iter().zip(&rhs.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

// Operator forms panic on a dimension mismatch; use the `try_*` methods when
// the dimensions are not known to agree.
impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("matrix dimensions must agree")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.try_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.rows() {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// The Pauli matrices `[sigma_x, sigma_y, sigma_z]`.
pub fn pauli() -> [CMatrix; 3] {
    let i = Complex64::i();
    [
        CMatrix::from_vec(2, vec![C0, C1, C1, C0]).unwrap(),
        CMatrix::from_vec(2, vec![C0, -i, i, C0]).unwrap(),
        CMatrix::from_vec(2, vec![C1, C0, C0, -C1]).unwrap(),
    ]
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    /// `V diag(f(e)) V^H`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fe: Vec<f64> = self.eigenvalues.iter().map(|&e| f(e)).collect();
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C0;
                for k in 0..n {
                    if fe[k] != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * fe[k];
                    }
                }
                out[(i, j)] = acc;
                if i != j {
                    out[(j, i)] = acc.conj();
                }
            }
            out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|e| e)
    }
}

/// Diagonalises a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Sweeps over every off-diagonal pair `(p, q)` and applies the unitary
/// rotation that zeroes `a_pq`, until the off-diagonal Frobenius norm drops
/// below `1e-13 * ||m||_F`.
pub fn hermitian_eig(m: &CMatrix) -> Result<EigenDecomposition> {
    let max_asymmetry = m.max_hermitian_asymmetry();
    if max_asymmetry > HERMITIAN_TOL || !max_asymmetry.is_finite() {
        return Err(Error::NotHermitian { max_asymmetry });
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let threshold = JACOBI_REL_TOL * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..=JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut eigenvectors = CMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, col)] = v[(row, k)];
        }
    }
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi step on the `(p, q)` plane: `a <- G^H a G`, `v <- v G` with
/// `G = [[c, s e], [-s conj(e), c]]` and `e` the phase of `a_pq`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let g_pq = phase * s;
    let g_qp = -phase.conj() * s;

    let n = a.dim();
    // a <- a G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * c;
    }
    // a <- G^H a
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * g_qp.conj();
        a[(q, k)] = apk * g_pq.conj() + aqk * c;
    }
    a[(p, q)] = C0;
    a[(q, p)] = C0;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // v <- v G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * c;
    }
}

/// Clamps an eigen-spectrum for square rooting: round-off negatives in
/// `[-PSD_FLOOR, 0)` and positives below the relative noise floor go to zero.
pub(crate) fn clamp_spectrum(eigenvalues: &[f64]) -> Result<Vec<f64>> {
    let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -PSD_FLOOR {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let max = eigenvalues.iter().copied().fold(0.0, f64::max);
    let floor = NOISE_REL * max;
    Ok(eigenvalues.iter().map(|&e| if e <= floor { 0.0 } else { e }).collect())
}

/// Principal square root of a Hermitian positive semidefinite matrix.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eig(m)?;
    let clamped = clamp_spectrum(&eig.eigenvalues)?;
    let roots =
        EigenDecomposition { eigenvalues: clamped.iter().map(|e| e.sqrt()).collect(), eigenvectors: eig.eigenvectors };
    Ok(roots.reconstruct())
}

/// Sum of the square roots of the (clamped) eigenvalues, i.e. `Tr sqrt(m)`.
pub fn trace_sqrt(m: &CMatrix) -> Result<f64> {
    let eig = hermitian_eig(m)?;
    Ok(clamp_spectrum(&eig.eigenvalues)?.iter().map(|e| e.sqrt()).sum())
}
