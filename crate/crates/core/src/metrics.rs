//! Distances built from the Bures fidelity and from the A-fidelity, and a
//! checker for the metric axioms on sampled triples.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::{a_fidelity, bures_fidelity};
use crate::states::{qubit_from_bloch, BlochVector, DensityMatrix};

/// A distance below this counts as zero for axiom M2. The arccos and square
/// root forms turn a round-off error `e` in the fidelity into `sqrt(e)`.
pub const M2_ZERO_TOL: f64 = 1e-6;
/// States closer than `M2_ZERO_TOL` must be within this Frobenius distance.
pub const M2_SEPARATION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    /// `arccos sqrt(F_B)`
    BuresAngle,
    /// `sqrt(2 - 2 sqrt(F_B))`
    BuresMetric,
    /// `sqrt(1 - F_B)`
    GoldMetric,
    /// `arccos sqrt(F_A)`
    AAngle,
    /// `sqrt(2 - 2 sqrt(F_A))`
    AMetric,
    /// `sqrt(1 - F_A)`
    AcMetric,
}

impl MetricKind {
    pub const ALL: [MetricKind; 6] = [
        MetricKind::BuresAngle,
        MetricKind::BuresMetric,
        MetricKind::GoldMetric,
        MetricKind::AAngle,
        MetricKind::AMetric,
        MetricKind::AcMetric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::BuresAngle => "bures-angle",
            MetricKind::BuresMetric => "bures-metric",
            MetricKind::GoldMetric => "gold-metric",
            MetricKind::AAngle => "a-angle",
            MetricKind::AMetric => "a-metric",
            MetricKind::AcMetric => "ac-metric",
        }
    }

    /// True for the three kinds derived from the A-fidelity.
    pub fn uses_a_fidelity(self) -> bool {
        matches!(self, MetricKind::AAngle | MetricKind::AMetric | MetricKind::AcMetric)
    }

    /// The distance as a function of the underlying fidelity.
    pub fn from_fidelity(self, f: f64) -> Result<f64> {
        let f = crate::fidelity::clamp_unit(f, "fidelity")?;
        Ok(match self {
            MetricKind::BuresAngle | MetricKind::AAngle => f.sqrt().acos(),
            MetricKind::BuresMetric | MetricKind::AMetric => (2.0 - 2.0 * f.sqrt()).max(0.0).sqrt(),
            MetricKind::GoldMetric | MetricKind::AcMetric => (1.0 - f).sqrt(),
        })
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MetricKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown metric {s:?}")))
    }
}

pub fn distance(kind: MetricKind, r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    let f = if kind.uses_a_fidelity() { a_fidelity(r1, r2)? } else { bures_fidelity(r1, r2)? };
    kind.from_fidelity(f)
}

/// Most adverse triangle-inequality slack of a triple over its three labelings:
/// `min(d(x,z) + d(z,y) - d(x,y), d(x,y) + d(y,z) - d(x,z), d(y,x) + d(x,z) - d(y,z))`.
pub fn triangle_slack(kind: MetricKind, x: &DensityMatrix, y: &DensityMatrix, z: &DensityMatrix) -> Result<f64> {
    let dxy = distance(kind, x, y)?;
    let dxz = distance(kind, x, z)?;
    let dyz = distance(kind, y, z)?;
    Ok(slack_of(dxy, dxz, dyz))
}

pub(crate) fn slack_of(dxy: f64, dxz: f64, dyz: f64) -> f64 {
    (dxz + dyz - dxy).min(dxy + dyz - dxz).min(dxy + dxz - dyz)
}

/// Per-axiom tallies from [`check_metric_axioms`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub kind: MetricKind,
    pub triples: usize,
    pub tol: f64,
    /// Triples whose three pairwise distances are all `>= 0`.
    pub m1_pass: usize,
    /// Triples whose states each have `d(x, x) <= M2_ZERO_TOL` and whose pairs
    /// closer than `M2_ZERO_TOL` are within `M2_SEPARATION` in Frobenius norm.
    pub m2_pass: usize,
    /// Triples whose pairs all satisfy `|d(a, b) - d(b, a)| <= tol`.
    pub m3_pass: usize,
    pub m4_pass: usize,
    pub m4_violations: usize,
    /// Smallest triangle slack seen.
    pub min_slack: f64,
    /// Index of the triple achieving `min_slack`.
    pub worst_triple: Option<usize>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.m1_pass == self.triples
            && self.m2_pass == self.triples
            && self.m3_pass == self.triples
            && self.m4_violations == 0
    }
}

struct TripleOutcome {
    m1: bool,
    m2: bool,
    m3: bool,
    slack: f64,
}

fn check_triple(kind: MetricKind, [x, y, z]: &[DensityMatrix; 3], tol: f64) -> Result<TripleOutcome> {
    let pairs = [(x, y), (x, z), (y, z)];
    let mut fwd = [0.0; 3];
    let mut m1 = true;
    let mut m3 = true;
    for (k, (a, b)) in pairs.iter().enumerate() {
        let ab = distance(kind, a, b)?;
        let ba = distance(kind, b, a)?;
        m1 &= ab >= 0.0 && ba >= 0.0;
        m3 &= (ab - ba).abs() <= tol;
        fwd[k] = ab;
    }
    let mut m2 = true;
    for s in [x, y, z] {
        m2 &= distance(kind, s, s)? <= M2_ZERO_TOL;
    }
    for (k, (a, b)) in pairs.iter().enumerate() {
        if fwd[k] < M2_ZERO_TOL {
            m2 &= a.matrix().try_sub(b.matrix())?.frobenius_norm() < M2_SEPARATION;
        }
    }
    Ok(TripleOutcome { m1, m2, m3, slack: slack_of(fwd[0], fwd[1], fwd[2]) })
}

/// Checks axioms M1-M4 on every triple. Triples are evaluated in parallel;
/// the report does not depend on the schedule.
pub fn check_metric_axioms(kind: MetricKind, triples: &[[DensityMatrix; 3]], tol: f64) -> Result<AxiomReport> {
    if let Some(first) = triples.first() {
        let dim = first[0].dim();
        for t in triples {
            for s in t {
                if s.dim() != dim {
                    return Err(Error::DimMismatch { left: dim, right: s.dim() });
                }
            }
        }
    }
    let outcomes: Vec<TripleOutcome> = triples
        .par_iter()
        .enumerate()
        .map(|(i, t)| check_triple(kind, t, tol).map_err(|e| e.at_trial(i)))
        .collect::<Result<_>>()?;

    let mut report = AxiomReport {
        kind,
        triples: triples.len(),
        tol,
        m1_pass: 0,
        m2_pass: 0,
        m3_pass: 0,
        m4_pass: 0,
        m4_violations: 0,
        min_slack: f64::INFINITY,
        worst_triple: None,
    };
    for (i, o) in outcomes.iter().enumerate() {
        report.m1_pass += o.m1 as usize;
        report.m2_pass += o.m2 as usize;
        report.m3_pass += o.m3 as usize;
        if o.slack < -tol {
            report.m4_violations += 1;
        } else {
            report.m4_pass += 1;
        }
        if o.slack < report.min_slack {
            report.min_slack = o.slack;
            report.worst_triple = Some(i);
        }
    }
    Ok(report)
}

/// `|d(eps u, eps v) - eps |u - v| / 2|`, the deviation from the
/// trace-distance limit near the centre of the Bloch ball.
pub fn small_ball_limit_error(kind: MetricKind, u: &BlochVector, v: &BlochVector, eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::Domain(format!("eps = {eps} must lie in [0, 1]")));
    }
    let (su, sv) = (u.scaled(eps)?, v.scaled(eps)?);
    let d = distance(kind, &qubit_from_bloch(&su)?, &qubit_from_bloch(&sv)?)?;
    Ok((d - half_distance(&su, &sv)).abs())
}

pub(crate) fn half_distance(u: &BlochVector, v: &BlochVector) -> f64 {
    0.5 * u.coords().iter().zip(v.coords()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}
