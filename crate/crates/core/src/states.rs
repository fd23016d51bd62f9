//! Density matrices, generalized Bloch vectors and the SU(N) generator basis.
//!
//! A qunit state is written as
//!
//! ```text
//! rho(m) = (1/N) [ 1_N + sqrt(N(N-1)/2) * sum_a m_a lambda_a ]
//! ```
//!
//! with `lambda_a` the generalized Gell-Mann matrices normalised to
//! `Tr(lambda_a lambda_b) = 2 delta_ab`. For `N = 2` this is the familiar
//! `(1 + sigma . n) / 2`.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eig, psd_sqrt, CMatrix};

/// Hermiticity and unit-trace tolerance for [`DensityMatrix`].
pub const STATE_TOL: f64 = 1e-9;
/// Slack allowed above unit norm for a Bloch vector.
pub const BLOCH_NORM_SLACK: f64 = 1e-12;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
///
/// The stored matrix is the exact Hermitian part of the input. Its principal
/// square root is computed lazily and cached, since every fidelity needs it.
#[derive(Clone)]
pub struct DensityMatrix {
    matrix: CMatrix,
    sqrt: OnceLock<CMatrix>,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let max_asymmetry = matrix.max_hermitian_asymmetry();
        if max_asymmetry > STATE_TOL || !max_asymmetry.is_finite() {
            return Err(Error::NotHermitian { max_asymmetry });
        }
        let matrix = matrix.hermitian_part();
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        let eig = hermitian_eig(&matrix)?;
        let min_eigenvalue = eig.eigenvalues[0];
        if min_eigenvalue < -linalg::PSD_FLOOR {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(DensityMatrix { matrix, sqrt: OnceLock::new() })
    }

    /// The maximally mixed state `1/N`.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix { matrix: CMatrix::identity(dim).scale_real(1.0 / dim as f64), sqrt: OnceLock::new() }
    }

    /// `|psi><psi|` for a (not necessarily normalised) vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("pure state vector has zero norm".into()));
        }
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(CMatrix::outer(&unit, &unit)?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Principal square root, cached after the first call.
    pub fn sqrt(&self) -> Result<&CMatrix> {
        if let Some(s) = self.sqrt.get() {
            return Ok(s);
        }
        let s = psd_sqrt(&self.matrix)?;
        Ok(self.sqrt.get_or_init(|| s))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.matrix).map(|e| e.eigenvalues).unwrap_or_default()
    }

    /// Row-major `[re, im]` pairs, the layout used by state files and reports.
    pub fn to_entries(&self) -> Vec<Vec<[f64; 2]>> {
        self.matrix.rows().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
    }
}

impl std::fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DensityMatrix {:?}", self.matrix)
    }
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

/// Real coefficient vector of a state in the generator basis; length `N^2 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    dim: usize,
    coords: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDim(dim));
        }
        if coords.len() != dim * dim - 1 {
            return Err(Error::DimMismatch { left: dim * dim - 1, right: coords.len() });
        }
        let v = BlochVector { dim, coords };
        let norm = v.norm();
        if norm.is_nan() || norm > 1.0 + BLOCH_NORM_SLACK {
            return Err(Error::NormExceeded { norm });
        }
        Ok(v)
    }

    /// Qubit Bloch vector `(x, y, z)`.
    pub fn qubit(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(2, vec![x, y, z])
    }

    pub fn zero(dim: usize) -> Self {
        BlochVector { dim, coords: vec![0.0; dim * dim - 1] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { left: self.dim, right: other.dim });
        }
        Ok(self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum())
    }

    /// `self * s`, rejecting results outside the unit ball.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.dim, self.coords.iter().map(|x| x * s).collect())
    }
}

/// The `N^2 - 1` generalized Gell-Mann matrices.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<CMatrix>,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }
}

/// Builds the generalized Gell-Mann basis for SU(N).
///
/// Ordering: symmetric `E_jk + E_kj` for `j < k` in lexicographic order,
/// then antisymmetric `-i E_jk + i E_kj` in the same order, then the
/// `N - 1` diagonal generators `sqrt(2/(l(l+1))) (sum_{j<l} E_jj - l E_ll)`.
/// For `N = 2` this yields the Pauli matrices in order x, y, z.
pub fn generator_basis(dim: usize) -> Result<GeneratorBasis> {
    if dim < 2 {
        return Err(Error::InvalidDim(dim));
    }
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|j| ((j + 1)..dim).map(move |k| (j, k))).collect();
    let mut generators = Vec::with_capacity(dim * dim - 1);
    for &(j, k) in &pairs {
        let mut m = CMatrix::zeros(dim);
        m[(j, k)] = one;
        m[(k, j)] = one;
        generators.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = CMatrix::zeros(dim);
        m[(j, k)] = -i;
        m[(k, j)] = i;
        generators.push(m);
    }
    for l in 1..dim {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; dim];
        diag[..l].fill(norm);
        diag[l] = -(l as f64) * norm;
        generators.push(CMatrix::diag_real(&diag));
    }
    Ok(GeneratorBasis { dim, generators })
}

fn basis_for(dim: usize) -> Result<&'static GeneratorBasis> {
    static CACHE: OnceLock<Vec<GeneratorBasis>> = OnceLock::new();
    const CACHED: usize = 16;
    let cache = CACHE.get_or_init(|| (2..=CACHED).map(|n| generator_basis(n).unwrap()).collect());
    cache.get(dim.wrapping_sub(2)).ok_or(Error::InvalidDim(dim))
}

/// `(1 + sigma . n) / 2`.
pub fn qubit_from_bloch(n: &BlochVector) -> Result<DensityMatrix> {
    if n.dim() != 2 {
        return Err(Error::DimMismatch { left: 2, right: n.dim() });
    }
    let [x, y, z] = [n.coords[0], n.coords[1], n.coords[2]];
    let m = CMatrix::from_vec(
        2,
        vec![
            Complex64::new(0.5 * (1.0 + z), 0.0),
            Complex64::new(0.5 * x, -0.5 * y),
            Complex64::new(0.5 * x, 0.5 * y),
            Complex64::new(0.5 * (1.0 - z), 0.0),
        ],
    )?;
    DensityMatrix::new(m)
}

/// `(1/N)[1 + sqrt(N(N-1)/2) lambda . m]`, rejected if not positive semidefinite.
///
/// For `N > 2` the unit ball contains vectors that are not states; those
/// fail with [`Error::NotPsd`].
pub fn qunit_from_bloch(m: &BlochVector, basis: &GeneratorBasis) -> Result<DensityMatrix> {
    if m.dim() != basis.dim() {
        return Err(Error::DimMismatch { left: basis.dim(), right: m.dim() });
    }
    DensityMatrix::new(bloch_to_matrix(m, basis))
}

fn bloch_to_matrix(m: &BlochVector, basis: &GeneratorBasis) -> CMatrix {
    let n = m.dim();
    let nf = n as f64;
    let pref = (nf * (nf - 1.0) / 2.0).sqrt();
    let mut acc = CMatrix::identity(n);
    for (lambda, &c) in basis.generators.iter().zip(&m.coords) {
        if c != 0.0 {
            acc = &acc + &lambda.scale_real(pref * c);
        }
    }
    acc.scale_real(1.0 / nf)
}

/// Density matrix for a Bloch vector of any dimension, using the cached basis.
pub fn state_from_bloch(m: &BlochVector) -> Result<DensityMatrix> {
    if m.dim() == 2 {
        qubit_from_bloch(m)
    } else {
        qunit_from_bloch(m, basis_for(m.dim())?)
    }
}

/// Inverse of the Bloch map: `m_a = sqrt(N/(2(N-1))) Tr(rho lambda_a)`.
pub fn bloch_from_density(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<BlochVector> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimMismatch { left: basis.dim(), right: rho.dim() });
    }
    let nf = rho.dim() as f64;
    let pref = (nf / (2.0 * (nf - 1.0))).sqrt();
    let coords = basis
        .generators
        .iter()
        .map(|l| Ok(pref * rho.matrix().trace_of_product(l)?.re))
        .collect::<Result<Vec<f64>>>()?;
    BlochVector::new(rho.dim(), coords)
}

/// [`bloch_from_density`] with the cached basis for `rho`'s dimension.
pub fn bloch_of(rho: &DensityMatrix) -> Result<BlochVector> {
    bloch_from_density(rho, basis_for(rho.dim())?)
}

/// `sqrt(1 - |m|^2)` for the Bloch vector `m` of `rho`, computed from the
/// spectrum as `sqrt(N/(N-1) * 2 sum_{i<j} l_i l_j / (sum_i l_i)^2)`.
///
/// Unlike `1 - |m|^2` this has no cancellation near the sphere, and it is
/// exactly zero for a state whose spectrum clamps to rank one.
pub fn bloch_co_norm(rho: &DensityMatrix) -> Result<f64> {
    let eig = hermitian_eig(rho.matrix())?;
    let l = linalg::clamp_spectrum(&eig.eigenvalues)?;
    let total: f64 = l.iter().sum();
    let mut pairs = 0.0;
    for i in 0..l.len() {
        for j in (i + 1)..l.len() {
            pairs += l[i] * l[j];
        }
    }
    let nf = rho.dim() as f64;
    Ok((nf / (nf - 1.0) * 2.0 * pairs / (total * total)).sqrt())
}

/// `Tr(rho^2)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().trace_of_product(rho.matrix()).map(|z| z.re).unwrap_or(f64::NAN)
}

/// On-disk state description: exactly one of `matrix` or `bloch`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<Vec<f64>>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        StateFile { dim: rho.dim(), matrix: Some(rho.to_entries()), bloch: None }
    }

    pub fn into_state(self) -> Result<DensityMatrix> {
        if self.dim < 1 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        match (self.matrix, self.bloch) {
            (Some(_), Some(_)) => Err(Error::Parse("both \"matrix\" and \"bloch\" given".into())),
            (None, None) => Err(Error::Parse("one of \"matrix\" or \"bloch\" is required".into())),
            (Some(rows), None) => {
                if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                    return Err(Error::Parse(format!("matrix is not {0}x{0} as declared by dim", self.dim)));
                }
                let data = rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
                DensityMatrix::new(CMatrix::from_vec(self.dim, data)?)
            }
            (None, Some(coords)) => {
                if self.dim < 2 {
                    return Err(Error::Parse("bloch form needs dim >= 2".into()));
                }
                if coords.len() != self.dim * self.dim - 1 {
                    return Err(Error::Parse(format!(
                        "bloch vector has {} entries, dim {} needs {}",
                        coords.len(),
                        self.dim,
                        self.dim * self.dim - 1
                    )));
                }
                state_from_bloch(&BlochVector::new(self.dim, coords)?)
            }
        }
    }
}

/// Parses and validates a JSON state document.
pub fn parse_state_json(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_state()
}
