//! Matrix-form fidelities and distances between density matrices.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, trace_sqrt};
use crate::states::DensityMatrix;

/// How far outside `[0, 1]` a fidelity may land before it is treated as a
/// solver failure rather than round-off.
pub const CLAMP_TOL: f64 = 1e-9;
const G_DOMAIN_TOL: f64 = 1e-12;

fn same_dim(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<usize> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimMismatch { left: r1.dim(), right: r2.dim() });
    }
    Ok(r1.dim())
}

pub(crate) fn clamp_unit(x: f64, what: &str) -> Result<f64> {
    if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&x) {
        return Err(Error::Consistency(format!("{what} = {x} is outside [0, 1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

/// Bures (Uhlmann) fidelity `[Tr sqrt(sqrt(r1) r2 sqrt(r1))]^2`.
///
/// Identical inputs return exactly 1.
pub fn bures_fidelity(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    same_dim(r1, r2)?;
    if r1 == r2 {
        return Ok(1.0);
    }
    let s1 = r1.sqrt()?;
    let inner = (&(s1 * r2.matrix()) * s1).hermitian_part();
    let t = trace_sqrt(&inner)?;
    clamp_unit(t * t, "Bures fidelity")
}

/// A-fidelity (quantum affinity) `[Tr(sqrt(r1) sqrt(r2))]^2`.
pub fn a_fidelity(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    same_dim(r1, r2)?;
    if r1 == r2 {
        return Ok(1.0);
    }
    let t = r1.sqrt()?.trace_of_product(r2.sqrt()?)?.re;
    clamp_unit(t * t, "A-fidelity")
}

/// `Tr|r1 - r2| / 2`.
pub fn trace_distance(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    same_dim(r1, r2)?;
    let diff = r1.matrix().try_sub(r2.matrix())?;
    let eig = hermitian_eig(&diff)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|e| e.abs()).sum::<f64>())
}

/// Overlap `g(r1, r2) = (N Tr(r1 r2) - 1) / (N - 1)`, the inner product of the
/// generalized Bloch vectors.
pub fn overlap_g(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    let n = same_dim(r1, r2)?;
    if n < 2 {
        return Err(Error::InvalidDim(n));
    }
    let nf = n as f64;
    let tr = r1.matrix().trace_of_product(r2.matrix())?.re;
    Ok((nf * tr - 1.0) / (nf - 1.0))
}

fn sqrt_one_minus(g: f64) -> Result<f64> {
    let arg = 1.0 - g;
    if arg < -G_DOMAIN_TOL {
        return Err(Error::Domain(format!("1 - g(rho, rho) = {arg} is negative")));
    }
    Ok(arg.max(0.0).sqrt())
}

/// Alternative A-fidelity for N-level systems, written in terms of `g`:
///
/// ```text
/// [(1 + sqrt(1 - g11))(1 + sqrt(1 - g22)) + g12]^2
/// ------------------------------------------------
///    4 (1 + sqrt(1 - g11))(1 + sqrt(1 - g22))
/// ```
///
/// Coincides with [`a_fidelity`] for qubits.
pub fn alt_a_fidelity(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    let g11 = overlap_g(r1, r1)?;
    let g22 = overlap_g(r2, r2)?;
    let g12 = overlap_g(r1, r2)?;
    alt_a_fidelity_from_overlaps(g11, g22, g12)
}

pub(crate) fn alt_a_fidelity_from_overlaps(g11: f64, g22: f64, g12: f64) -> Result<f64> {
    let a = 1.0 + sqrt_one_minus(g11)?;
    let b = 1.0 + sqrt_one_minus(g22)?;
    let num = a * b + g12;
    clamp_unit(num * num / (4.0 * a * b), "alternative A-fidelity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{qubit_from_bloch, BlochVector};
    use num_complex::Complex64;

    fn qubit(x: f64, y: f64, z: f64) -> DensityMatrix {
        qubit_from_bloch(&BlochVector::qubit(x, y, z).unwrap()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identical_states() {
        let r = qubit(0.1, 0.4, -0.3);
        assert!((bures_fidelity(&r, &r).unwrap() - 1.0).abs() < 1e-14);
        assert!((a_fidelity(&r, &r).unwrap() - 1.0).abs() < 1e-14);
        assert!(trace_distance(&r, &r).unwrap() < 1e-15);
        assert!((alt_a_fidelity(&r, &r).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pure_state_overlaps() {
        let phi = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let psi = [c(0.6, 0.0), c(0.0, 0.48), c(0.64, 0.0)];
        let overlap = 0.36; // |<phi|psi>|^2
        let a = DensityMatrix::pure(&phi).unwrap();
        let b = DensityMatrix::pure(&psi).unwrap();
        assert!((bures_fidelity(&a, &b).unwrap() - overlap).abs() < 1e-12);
        assert!((a_fidelity(&a, &b).unwrap() - overlap * overlap).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_vs_pure_qubit() {
        let mixed = DensityMatrix::maximally_mixed(2);
        let pure = qubit(0.0, 0.6, 0.8);
        assert!((bures_fidelity(&mixed, &pure).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn worked_qubit_pair() {
        let u = qubit(0.6, 0.0, 0.0);
        let v = qubit(0.0, 0.6, 0.0);
        assert!((bures_fidelity(&u, &v).unwrap() - 0.82).abs() < 1e-12);
        assert!((a_fidelity(&u, &v).unwrap() - 0.81).abs() < 1e-12);
        assert!((alt_a_fidelity(&u, &v).unwrap() - 0.81).abs() < 1e-12);
    }

    #[test]
    fn commuting_states_have_equal_fidelities() {
        let a = DensityMatrix::new(crate::linalg::CMatrix::diag_real(&[0.7, 0.2, 0.1])).unwrap();
        let b = DensityMatrix::new(crate::linalg::CMatrix::diag_real(&[0.1, 0.3, 0.6])).unwrap();
        let fb = bures_fidelity(&a, &b).unwrap();
        let fa = a_fidelity(&a, &b).unwrap();
        assert!((fa - fb).abs() < 1e-10);
        let want = (0.07f64.sqrt() + 0.06f64.sqrt() + 0.06f64.sqrt()).powi(2);
        assert!((fb - want).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_examples() {
        assert!((trace_distance(&qubit(0.0, 0.0, 1.0), &qubit(0.0, 0.0, -1.0)).unwrap() - 1.0).abs() < 1e-15);
        let d = trace_distance(&qubit(0.2, 0.0, 0.0), &qubit(0.0, 0.2, 0.0)).unwrap();
        assert!((d - 0.1 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn overlap_examples() {
        let pure = qubit(0.0, 0.0, 1.0);
        assert!((overlap_g(&pure, &pure).unwrap() - 1.0).abs() < 1e-15);
        for n in 2..6 {
            let m = DensityMatrix::maximally_mixed(n);
            assert!(overlap_g(&m, &m).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn dim_mismatch() {
        let a = DensityMatrix::maximally_mixed(2);
        let b = DensityMatrix::maximally_mixed(3);
        for r in [
            bures_fidelity(&a, &b),
            a_fidelity(&a, &b),
            trace_distance(&a, &b),
            overlap_g(&a, &b),
            alt_a_fidelity(&a, &b),
        ] {
            assert!(matches!(r, Err(Error::DimMismatch { left: 2, right: 3 })));
        }
    }

    #[test]
    fn alt_a_fidelity_domain_guard() {
        assert!(matches!(alt_a_fidelity_from_overlaps(1.0 + 1e-9, 0.5, 0.0), Err(Error::Domain(_))));
        assert!(alt_a_fidelity_from_overlaps(1.0 + 1e-13, 1.0, 1.0).is_ok());
    }

    #[test]
    fn clamp_rejects_large_excursions() {
        assert_eq!(clamp_unit(1.0 + 1e-12, "x").unwrap(), 1.0);
        assert_eq!(clamp_unit(-1e-14, "x").unwrap(), 0.0);
        assert!(matches!(clamp_unit(1.0 + 1e-6, "x"), Err(Error::Consistency(_))));
    }
}
