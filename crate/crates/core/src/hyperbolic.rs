//! Hyperbolic-geometry view of qubit fidelities.
//!
//! A Bloch vector `n` with `|n| < 1` is read as a relativistic velocity with
//! rapidity `phi = atanh |n|`. For two states `u`, `v` the rapidities
//! `phi_u`, `phi_v` and the rapidity `phi_w` of the Einstein sum `u (+) v`
//! are the sides of a hyperbolic triangle. The Bures fidelity is
//!
//! ```text
//! F_B = cosh^2(phi_w / 2) / (cosh phi_u cosh phi_v)
//! ```
//!
//! and the A-fidelity is `F_A = F_B cos^2(delta / 2)` with `delta` the
//! triangle's defect:
//!
//! ```text
//! cos(delta/2) = (1 + cosh phi_u + cosh phi_v + cosh phi_w)
//!              / (4 cosh(phi_u/2) cosh(phi_v/2) cosh(phi_w/2))
//! ```
//!
//! Rapidities diverge for pure states, so the geometric routes reject
//! `|n| > 1 - 1e-12`. The closed forms in Bloch-vector norms further down
//! stay finite on the sphere and are the path for pure states.
//!
//! The triangle routines accept generalized Bloch vectors of any equal
//! dimension; the cosine law only needs the norms and `u . v`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{pauli, CMatrix};
use crate::states::BlochVector;

/// Largest Bloch norm accepted by the rapidity-based routines.
pub const MAX_GEOMETRIC_NORM: f64 = 1.0 - 1e-12;
const COS_TOL: f64 = 1e-12;

/// A hyperbolic angle; nonnegative and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Rapidity(f64);

impl Rapidity {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::Domain(format!("rapidity must be finite and >= 0, got {value}")));
        }
        Ok(Rapidity(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `atanh |n|`.
pub fn rapidity_of(n: &BlochVector) -> Result<Rapidity> {
    rapidity_of_norm(n.norm())
}

fn rapidity_of_norm(norm: f64) -> Result<Rapidity> {
    if norm > MAX_GEOMETRIC_NORM {
        return Err(Error::PureStateSingularity { norm });
    }
    Ok(Rapidity(norm.atanh()))
}

fn check_geometric(u: &BlochVector, v: &BlochVector) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::DimMismatch { left: u.dim(), right: v.dim() });
    }
    for n in [u, v] {
        let norm = n.norm();
        if norm > MAX_GEOMETRIC_NORM {
            return Err(Error::PureStateSingularity { norm });
        }
    }
    Ok(())
}

/// Einstein velocity addition `u (+) v` (not commutative).
///
/// ```text
/// w = [u + v / gamma_u + gamma_u / (1 + gamma_u) (u . v) u] / (1 + u . v)
/// ```
pub fn einstein_add(u: &BlochVector, v: &BlochVector) -> Result<BlochVector> {
    check_geometric(u, v)?;
    let uu = u.dot(u)?;
    let uv = u.dot(v)?;
    let gamma = 1.0 / (1.0 - uu).sqrt();
    let k = gamma / (1.0 + gamma) * uv;
    let coords = u.coords().iter().zip(v.coords()).map(|(&a, &b)| (a + b / gamma + k * a) / (1.0 + uv)).collect();
    BlochVector::new(u.dim(), coords)
}

/// Hyperbolic law of cosines, `cosh phi_w` for sides `phi_u`, `phi_v` whose
/// directions have `u_hat . v_hat = cos_angle`.
pub fn cosine_law_cosh_w(phi_u: Rapidity, phi_v: Rapidity, cos_angle: f64) -> Result<f64> {
    if cos_angle.is_nan() || cos_angle.abs() > 1.0 + COS_TOL {
        return Err(Error::Domain(format!("cos_angle {cos_angle} is outside [-1, 1]")));
    }
    let cos_angle = cos_angle.clamp(-1.0, 1.0);
    let (u, v) = (phi_u.0, phi_v.0);
    let cosh_w = u.cosh() * v.cosh() * (1.0 + cos_angle * u.tanh() * v.tanh());
    Ok(cosh_w.max(1.0))
}

/// `u_hat . v_hat`, defined as 1 when either vector is zero.
fn direction_cosine(u: &BlochVector, v: &BlochVector) -> Result<f64> {
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return Ok(1.0);
    }
    Ok((u.dot(v)? / (nu * nv)).clamp(-1.0, 1.0))
}

/// `cosh(phi / 2)` from `cosh phi`, avoiding an `acosh` round trip.
fn cosh_half(cosh_full: f64) -> f64 {
    (0.5 * (1.0 + cosh_full)).sqrt()
}

/// The triangle with sides `phi_u`, `phi_v`, `phi_w` and its defect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicTriangle {
    phi_u: Rapidity,
    phi_v: Rapidity,
    phi_w: Rapidity,
    cosh_w: f64,
    cos_half_defect: f64,
}

impl HyperbolicTriangle {
    /// Builds the triangle from two sides and the cosine of the direction
    /// angle between the corresponding Bloch vectors.
    pub fn from_sides(phi_u: Rapidity, phi_v: Rapidity, cos_angle: f64) -> Result<Self> {
        let cosh_w = cosine_law_cosh_w(phi_u, phi_v, cos_angle)?;
        let (cu, cv) = (phi_u.0.cosh(), phi_v.0.cosh());
        let num = 1.0 + cu + cv + cosh_w;
        let den = 4.0 * cosh_half(cu) * cosh_half(cv) * cosh_half(cosh_w);
        let cos_half_defect = num / den;
        if !(cos_half_defect > 0.0 && cos_half_defect <= 1.0 + COS_TOL) {
            return Err(Error::Consistency(format!("cos(delta/2) = {cos_half_defect} outside (0, 1]")));
        }
        Ok(HyperbolicTriangle {
            phi_u,
            phi_v,
            phi_w: Rapidity(cosh_w.acosh()),
            cosh_w,
            cos_half_defect: cos_half_defect.min(1.0),
        })
    }

    pub fn phi_u(&self) -> Rapidity {
        self.phi_u
    }

    pub fn phi_v(&self) -> Rapidity {
        self.phi_v
    }

    pub fn phi_w(&self) -> Rapidity {
        self.phi_w
    }

    pub fn cosh_w(&self) -> f64 {
        self.cosh_w
    }

    /// `cos(delta / 2)`, in `(0, 1]`.
    pub fn cos_half_defect(&self) -> f64 {
        self.cos_half_defect
    }

    pub fn cos2_half_defect(&self) -> f64 {
        self.cos_half_defect * self.cos_half_defect
    }

    /// The defect `delta` itself, in radians.
    pub fn defect(&self) -> f64 {
        2.0 * self.cos_half_defect.acos()
    }

    /// `cosh(phi_w/2)/cosh(phi_u) * cosh(phi_w/2)/cosh(phi_v)`.
    pub fn bures(&self) -> f64 {
        let ch = cosh_half(self.cosh_w);
        (ch / self.phi_u.0.cosh()) * (ch / self.phi_v.0.cosh())
    }
}

/// Triangle spanned by the rapidities of `u`, `v` and `u (+) v`.
pub fn triangle_of(u: &BlochVector, v: &BlochVector) -> Result<HyperbolicTriangle> {
    check_geometric(u, v)?;
    let phi_u = rapidity_of(u)?;
    let phi_v = rapidity_of(v)?;
    HyperbolicTriangle::from_sides(phi_u, phi_v, direction_cosine(u, v)?)
}

/// Bures fidelity of the qubit states `u`, `v` through the triangle.
pub fn geometric_bures(u: &BlochVector, v: &BlochVector) -> Result<f64> {
    Ok(triangle_of(u, v)?.bures())
}

/// A-fidelity of the qubit states `u`, `v` as `F_B cos^2(delta/2)`.
pub fn geometric_a_fidelity(u: &BlochVector, v: &BlochVector) -> Result<f64> {
    let t = triangle_of(u, v)?;
    Ok(t.bures() * t.cos2_half_defect())
}

/// `Tr(sqrt(rho_u) sqrt(rho_v))` in half-rapidities:
///
/// ```text
/// cosh(phi_u/2) cosh(phi_v/2) / sqrt(cosh phi_u cosh phi_v)
///     * [1 + u_hat . v_hat tanh(phi_u/2) tanh(phi_v/2)]
/// ```
pub fn geometric_trace_sqrt_product(u: &BlochVector, v: &BlochVector) -> Result<f64> {
    check_geometric(u, v)?;
    let (pu, pv) = (rapidity_of(u)?.0, rapidity_of(v)?.0);
    let cos = direction_cosine(u, v)?;
    let pref = (0.5 * pu).cosh() * (0.5 * pv).cosh() / (pu.cosh() * pv.cosh()).sqrt();
    Ok(pref * (1.0 + cos * (0.5 * pu).tanh() * (0.5 * pv).tanh()))
}

/// Square root of the qubit state `n` built from its rapidity:
/// `cosh(phi/2) / sqrt(2 cosh phi) * [1 + sigma . n_hat tanh(phi/2)]`.
pub fn qubit_sqrt_via_rapidity(n: &BlochVector) -> Result<CMatrix> {
    if n.dim() != 2 {
        return Err(Error::DimMismatch { left: 2, right: n.dim() });
    }
    let phi = rapidity_of(n)?.0;
    let norm = n.norm();
    let pref = (0.5 * phi).cosh() / (2.0 * phi.cosh()).sqrt();
    let mut m = CMatrix::identity(2);
    if norm > 0.0 {
        let t = (0.5 * phi).tanh() / norm;
        for (sigma, &x) in pauli().iter().zip(n.coords()) {
            m = &m + &sigma.scale_real(t * x);
        }
    }
    Ok(m.scale(Complex64::new(pref, 0.0)))
}

fn check_norm(x: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0 + COS_TOL).contains(&x) {
        return Err(Error::Domain(format!("{what} = {x} is outside [0, 1]")));
    }
    Ok(())
}

/// `sqrt(1 - x^2)`, i.e. `sin(acos x)` for a Bloch norm `x`.
fn co_norm(x: f64) -> f64 {
    (1.0 - x * x).max(0.0).sqrt()
}

/// Qubit Bures fidelity from norms and inner product:
/// `[1 + u.v + sqrt(1 - |u|^2) sqrt(1 - |v|^2)] / 2`. Valid on the sphere.
pub fn closed_form_bures(abs_u: f64, abs_v: f64, dot_uv: f64) -> Result<f64> {
    check_norm(abs_u, "|u|")?;
    check_norm(abs_v, "|v|")?;
    if dot_uv.abs() > abs_u * abs_v + COS_TOL {
        return Err(Error::Domain(format!("|u.v| = {} exceeds |u||v| = {}", dot_uv.abs(), abs_u * abs_v)));
    }
    Ok(0.5 * (1.0 + dot_uv + co_norm(abs_u) * co_norm(abs_v)))
}

/// `cos^2(delta/2)` from the Bures fidelity and the two Bloch norms:
///
/// ```text
/// [2 F_B + sqrt(1 - |u|^2) + sqrt(1 - |v|^2)]^2
/// ---------------------------------------------------
/// 4 (1 + sqrt(1 - |u|^2)) (1 + sqrt(1 - |v|^2)) F_B
/// ```
pub fn closed_form_cos2_half_defect(fidelity: f64, abs_u: f64, abs_v: f64) -> Result<f64> {
    check_norm(abs_u, "|u|")?;
    check_norm(abs_v, "|v|")?;
    cos2_half_defect_from_co_norms(fidelity, co_norm(abs_u), co_norm(abs_v))
}

/// [`closed_form_cos2_half_defect`] with `sqrt(1 - |u|^2)` and
/// `sqrt(1 - |v|^2)` supplied directly, for callers that can compute them
/// without cancellation (see [`crate::states::bloch_co_norm`]).
pub fn cos2_half_defect_from_co_norms(fidelity: f64, co_u: f64, co_v: f64) -> Result<f64> {
    if !(fidelity > 0.0 && fidelity <= 1.0 + crate::fidelity::CLAMP_TOL) {
        return Err(Error::Domain(format!("F_B = {fidelity} is outside (0, 1]")));
    }
    for (x, what) in [(co_u, "sqrt(1 - |u|^2)"), (co_v, "sqrt(1 - |v|^2)")] {
        check_norm(x, what)?;
    }
    let num = 2.0 * fidelity + co_u + co_v;
    Ok(num * num / (4.0 * (1.0 + co_u) * (1.0 + co_v) * fidelity))
}

/// The quadratic whose sign decides `F_B <= cos^2(delta/2)`:
///
/// ```text
/// f(x) = 4[(1 + sin a)(1 + sin b) - 1] x^2 - 4(sin a + sin b) x - (sin a + sin b)^2
/// ```
///
/// with `a = acos|u|`, `b = acos|v|`, so that
/// `F_B - cos^2(delta/2) = f(F_B) / [4 (1 + sin a)(1 + sin b) F_B]`.
pub fn defect_quadratic_f(x: f64, abs_u: f64, abs_v: f64) -> Result<f64> {
    check_norm(abs_u, "|u|")?;
    check_norm(abs_v, "|v|")?;
    let (sa, sb) = (co_norm(abs_u), co_norm(abs_v));
    let s = sa + sb;
    Ok(4.0 * ((1.0 + sa) * (1.0 + sb) - 1.0) * x * x - 4.0 * s * x - s * s)
}

/// `4 (1 + sin a)(1 + sin b)`, the positive factor relating `f(F_B)` to the gap.
pub fn defect_quadratic_scale(abs_u: f64, abs_v: f64) -> f64 {
    4.0 * (1.0 + co_norm(abs_u)) * (1.0 + co_norm(abs_v))
}

/// Range of the Bures fidelity for fixed norms:
/// `[(1 - cos(a + b))/2, (1 + cos(a - b))/2]` with `a = acos|u|`, `b = acos|v|`.
pub fn bures_range(abs_u: f64, abs_v: f64) -> Result<(f64, f64)> {
    check_norm(abs_u, "|u|")?;
    check_norm(abs_v, "|v|")?;
    let a = abs_u.min(1.0).acos();
    let b = abs_v.min(1.0).acos();
    Ok((0.5 * (1.0 - (a + b).cos()), 0.5 * (1.0 + (a - b).cos())))
}
