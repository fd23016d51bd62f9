//! Seeded randomized checks of the fidelity inequalities and identities.
//!
//! Each experiment draws its states from a [`SamplerSpec`] by trial index
//! (trial `t` of a pair experiment uses draws `2t` and `2t + 1`, a triple
//! experiment `3t`, `3t + 1`, `3t + 2`), evaluates a margin per trial that
//! is negative when the checked relation fails, and folds the margins in
//! trial order. Trials run in parallel, so the report is the same for any
//! thread count.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::{a_fidelity, bures_fidelity};
use crate::hyperbolic::{cos2_half_defect_from_co_norms, geometric_a_fidelity, triangle_of, MAX_GEOMETRIC_NORM};
use crate::metrics::{self, triangle_slack, MetricKind};
use crate::sampling::{sample_bloch_ball, sample_state, Measure, SamplerSpec};
use crate::states::{
    bloch_co_norm, bloch_of, qubit_from_bloch, state_from_bloch, BlochVector, DensityMatrix, StateFile,
};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_TRIALS: usize = 100_000;
pub const DEFAULT_SEED: u64 = 42;
/// Required convergence order of the small-ball fidelity expansion.
pub const MIN_LIMIT_ORDER: f64 = 3.5;
/// Draws for the dual-route A-fidelity check are pulled inside this Bloch radius.
pub const THEOREM1_MAX_NORM: f64 = 1.0 - 1e-6;

/// The most adverse trial of a run, with the states needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub trial: usize,
    pub margin: f64,
    pub states: Vec<StateFile>,
}

impl WorstCase {
    pub fn density_matrices(&self) -> Result<Vec<DensityMatrix>> {
        self.states.iter().cloned().map(StateFile::into_state).collect()
    }
}

/// Tallies for one way of evaluating the checked relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantReport {
    pub name: String,
    pub evaluated: usize,
    /// Trials the variant cannot evaluate (e.g. pure states for rapidity routes).
    pub skipped: usize,
    pub violations: usize,
    pub marginal: usize,
    pub min_margin: Option<f64>,
    pub worst_case: Option<WorstCase>,
}

/// A hand-constructed case checked alongside the random trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedCase {
    pub label: String,
    pub margin: f64,
    pub passed: bool,
}

/// Error series for one quantity along the epsilon ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSeries {
    pub name: String,
    /// Mean absolute error over all pairs at each rung.
    pub mean_error: Vec<f64>,
    pub max_error: Vec<f64>,
    /// `log(err_k / err_{k+1}) / log(eps_k / eps_{k+1})` per rung.
    pub orders: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSummary {
    pub eps: Vec<f64>,
    pub fidelities: Vec<LimitSeries>,
    pub metrics: Vec<LimitSeries>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment_name: String,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub measure: String,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricKind>,
    /// Trials with margin `< -tolerance` (for the gating variant).
    pub violations: usize,
    /// Trials with margin in `[-tolerance, 0)`.
    pub marginal: usize,
    pub min_margin: Option<f64>,
    pub worst_case: Option<WorstCase>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<VariantReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed_cases: Vec<FixedCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<LimitSummary>,
    /// Wall-clock time; excluded from reproducibility comparisons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_s: Option<f64>,
}

impl ExperimentReport {
    /// True when no trial or fixed case failed.
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.fixed_cases.iter().all(|c| c.passed)
    }

    pub fn without_timing(&self) -> Self {
        ExperimentReport { elapsed_s: None, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub const CSV_HEADER: &'static str = "name,dim,measure,trials,seed,tol,violations,marginal,min_margin,elapsed_s";

    pub fn to_csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{:e},{},{},{},{}",
            self.experiment_name,
            self.dim,
            self.measure,
            self.trials,
            self.seed,
            self.tolerance,
            self.violations,
            self.marginal,
            opt(self.min_margin),
            self.elapsed_s.map(|e| format!("{e:.3}")).unwrap_or_default(),
        )
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let metric = self.metric.map(|m| format!(" metric={m}")).unwrap_or_default();
        format!(
            "{status} {}{metric} dim={} measure={} trials={} seed={} violations={} marginal={} min_margin={}",
            self.experiment_name,
            self.dim,
            self.measure,
            self.trials,
            self.seed,
            self.violations,
            self.marginal,
            self.min_margin.map(|m| format!("{m:e}")).unwrap_or_else(|| "n/a".into()),
        )
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    evaluated: usize,
    skipped: usize,
    violations: usize,
    marginal: usize,
    worst: Option<(usize, f64)>,
}

impl Tally {
    fn push(&mut self, trial: usize, margin: Option<f64>, tol: f64) {
        let Some(m) = margin else {
            self.skipped += 1;
            return;
        };
        self.evaluated += 1;
        if m < -tol {
            self.violations += 1;
        } else if m < 0.0 {
            self.marginal += 1;
        }
        if self.worst.is_none_or(|(_, w)| m < w) {
            self.worst = Some((trial, m));
        }
    }

    fn into_variant(self, name: &str, replay: impl Fn(usize) -> Result<Vec<DensityMatrix>>) -> Result<VariantReport> {
        let worst_case = match self.worst {
            Some((trial, margin)) => {
                Some(WorstCase { trial, margin, states: replay(trial)?.iter().map(StateFile::from_state).collect() })
            }
            None => None,
        };
        Ok(VariantReport {
            name: name.to_string(),
            evaluated: self.evaluated,
            skipped: self.skipped,
            violations: self.violations,
            marginal: self.marginal,
            min_margin: self.worst.map(|(_, m)| m),
            worst_case,
        })
    }
}

fn run_trials<T: Send>(trials: usize, f: impl Fn(usize) -> Result<T> + Sync) -> Result<Vec<T>> {
    (0..trials).into_par_iter().map(|t| f(t).map_err(|e| e.at_trial(t))).collect()
}

fn draw(spec: &SamplerSpec, index: usize) -> Result<DensityMatrix> {
    sample_state(spec, index as u64)
}

fn draw_pair(spec: &SamplerSpec, trial: usize) -> Result<(DensityMatrix, DensityMatrix)> {
    Ok((draw(spec, 2 * trial)?, draw(spec, 2 * trial + 1)?))
}

fn check_dim(spec: &SamplerSpec, dim: usize) -> Result<()> {
    if spec.dim() != dim {
        return Err(Error::InvalidSpec(format!("sampler dim {} but experiment dim {dim}", spec.dim())));
    }
    Ok(())
}

fn base_report(name: &str, spec: &SamplerSpec, trials: usize, tol: f64, gate: VariantReport) -> ExperimentReport {
    ExperimentReport {
        experiment_name: name.to_string(),
        dim: spec.dim(),
        trials,
        seed: spec.seed(),
        measure: spec.measure().name().to_string(),
        tolerance: tol,
        metric: None,
        violations: gate.violations,
        marginal: gate.marginal,
        min_margin: gate.min_margin,
        worst_case: gate.worst_case,
        variants: Vec::new(),
        fixed_cases: Vec::new(),
        limits: None,
        elapsed_s: None,
    }
}

/// Margins `cos^2(delta/2) - F_B` for the bound experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundMargins {
    pub bures: f64,
    /// Triangle built from the generalized Bloch vectors; `None` when either
    /// state is too close to pure for a finite rapidity.
    pub geometric: Option<f64>,
    /// Closed form in `F_B` and the two Bloch norms; `None` when `F_B = 0`.
    pub closed_form: Option<f64>,
}

pub fn bound_margins(a: &DensityMatrix, b: &DensityMatrix) -> Result<BoundMargins> {
    let fb = bures_fidelity(a, b)?;
    let (ma, mb) = (bloch_of(a)?, bloch_of(b)?);
    let (na, nb) = (ma.norm(), mb.norm());
    let closed_form = if fb > 0.0 {
        Some(cos2_half_defect_from_co_norms(fb, bloch_co_norm(a)?, bloch_co_norm(b)?)? - fb)
    } else {
        None
    };
    let geometric = if na <= MAX_GEOMETRIC_NORM && nb <= MAX_GEOMETRIC_NORM {
        Some(triangle_of(&ma, &mb)?.cos2_half_defect() - fb)
    } else {
        None
    };
    Ok(BoundMargins { bures: fb, geometric, closed_form })
}

/// Checks `F_B <= cos^2(delta/2)` on random pairs, with `delta` from the
/// hyperbolic triangle (variant `geometric`) and from the closed form in
/// `F_B`, `|m_u|`, `|m_v|` (variant `closed-form`). The closed form gates
/// the report; the geometric variant is informational for `dim > 2`.
pub fn run_bound_experiment(dim: usize, trials: usize, spec: &SamplerSpec, tol: f64) -> Result<ExperimentReport> {
    check_dim(spec, dim)?;
    let start = Instant::now();
    let margins = run_trials(trials, |t| {
        let (a, b) = draw_pair(spec, t)?;
        bound_margins(&a, &b)
    })?;
    let (mut geo, mut closed) = (Tally::default(), Tally::default());
    for (t, m) in margins.iter().enumerate() {
        geo.push(t, m.geometric, tol);
        closed.push(t, m.closed_form, tol);
    }
    let replay = |t| draw_pair(spec, t).map(|(a, b)| vec![a, b]);
    let closed = closed.into_variant("closed-form", replay)?;
    let geo = geo.into_variant("geometric", replay)?;

    let mut report = base_report("bound", spec, trials, tol, closed.clone());
    report.variants = vec![geo, closed];
    report.fixed_cases = bound_fixed_cases(dim, tol)?;
    report.elapsed_s = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

/// Equality cases of the bound: `u = v` and two pure states.
fn bound_fixed_cases(dim: usize, tol: f64) -> Result<Vec<FixedCase>> {
    let mut cases = Vec::new();
    let equality = |label: &str, a: &DensityMatrix, b: &DensityMatrix| -> Result<FixedCase> {
        let m = bound_margins(a, b)?;
        let gap = m.closed_form.unwrap_or(f64::INFINITY).abs();
        let gap = match m.geometric {
            Some(g) => gap.max(g.abs()),
            None => gap,
        };
        Ok(FixedCase { label: label.to_string(), margin: -gap, passed: gap < tol })
    };
    let mixed = sample_state(&SamplerSpec::new(Measure::HilbertSchmidtMixed, dim, 7)?, 0)?;
    cases.push(equality("u = v (mixed)", &mixed, &mixed)?);
    let pa = sample_state(&SamplerSpec::new(Measure::HaarPure, dim, 7)?, 0)?;
    let pb = sample_state(&SamplerSpec::new(Measure::HaarPure, dim, 7)?, 1)?;
    cases.push(equality("|u| = |v| = 1 (pure pair)", &pa, &pb)?);
    Ok(cases)
}

/// Checks the triangle inequality of `kind` on random triples.
pub fn run_triangle_experiment(
    kind: MetricKind,
    dim: usize,
    trials: usize,
    spec: &SamplerSpec,
    tol: f64,
) -> Result<ExperimentReport> {
    check_dim(spec, dim)?;
    let start = Instant::now();
    let triple = |t: usize| -> Result<[DensityMatrix; 3]> {
        Ok([draw(spec, 3 * t)?, draw(spec, 3 * t + 1)?, draw(spec, 3 * t + 2)?])
    };
    let slacks = run_trials(trials, |t| {
        let [x, y, z] = triple(t)?;
        triangle_slack(kind, &x, &y, &z)
    })?;
    let mut tally = Tally::default();
    for (t, &s) in slacks.iter().enumerate() {
        tally.push(t, Some(s), tol);
    }
    let gate = tally.into_variant("triangle", |t| triple(t).map(Vec::from))?;
    let mut report = base_report("triangle", spec, trials, tol, gate);
    report.metric = Some(kind);
    report.elapsed_s = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

/// `-|F_A(matrix) - F_B cos^2(delta/2)|` for two qubit states.
pub fn theorem1_margin(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let matrix = a_fidelity(a, b)?;
    let geometric = geometric_a_fidelity(&bloch_of(a)?, &bloch_of(b)?)?;
    Ok(-(matrix - geometric).abs())
}

fn pull_inside(rho: DensityMatrix) -> Result<DensityMatrix> {
    let n = bloch_of(&rho)?;
    let norm = n.norm();
    if norm <= THEOREM1_MAX_NORM {
        return Ok(rho);
    }
    state_from_bloch(&n.scaled(THEOREM1_MAX_NORM / norm)?)
}

/// Compares the matrix A-fidelity with its hyperbolic-triangle form on
/// random qubit pairs. Draws outside radius `1 - 1e-6` are scaled onto it.
pub fn run_theorem1_check(trials: usize, spec: &SamplerSpec, tol: f64) -> Result<ExperimentReport> {
    check_dim(spec, 2)?;
    let start = Instant::now();
    let pair = |t: usize| -> Result<(DensityMatrix, DensityMatrix)> {
        let (a, b) = draw_pair(spec, t)?;
        Ok((pull_inside(a)?, pull_inside(b)?))
    };
    let margins = run_trials(trials, |t| {
        let (a, b) = pair(t)?;
        theorem1_margin(&a, &b)
    })?;
    let mut tally = Tally::default();
    for (t, &m) in margins.iter().enumerate() {
        tally.push(t, Some(m), tol);
    }
    let gate = tally.into_variant("theorem1", |t| pair(t).map(|(a, b)| vec![a, b]))?;
    let mut report = base_report("theorem1", spec, trials, tol, gate);

    let q = |x, y, z| BlochVector::qubit(x, y, z).and_then(|b| qubit_from_bloch(&b));
    let (u, v) = (q(0.6, 0.0, 0.0)?, q(0.0, 0.6, 0.0)?);
    let matrix = a_fidelity(&u, &v)?;
    let geometric = geometric_a_fidelity(&bloch_of(&u)?, &bloch_of(&v)?)?;
    let gap = (matrix - 0.81).abs().max((geometric - 0.81).abs()).max((matrix - geometric).abs());
    report.fixed_cases.push(FixedCase {
        label: "u=(0.6,0,0), v=(0,0.6,0) gives F_A = 0.81".into(),
        margin: -gap,
        passed: gap <= tol,
    });
    let (u, v) = (q(0.3, 0.4, 0.0)?, q(-0.15, -0.2, 0.0)?);
    let matrix = a_fidelity(&u, &v)?;
    let geometric = geometric_a_fidelity(&bloch_of(&u)?, &bloch_of(&v)?)?;
    let fb = bures_fidelity(&u, &v)?;
    let gap = (matrix - geometric).abs().max((geometric - fb).abs());
    report.fixed_cases.push(FixedCase {
        label: "collinear pair gives F_A = F_B".into(),
        margin: -gap,
        passed: gap <= tol,
    });
    report.elapsed_s = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

/// `min(F_A - F_B^2, F_B - F_A)`.
pub fn sandwich_margin(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let fb = bures_fidelity(a, b)?;
    let fa = a_fidelity(a, b)?;
    Ok((fa - fb * fb).min(fb - fa))
}

/// Checks `F_B^2 <= F_A <= F_B` on random pairs.
pub fn run_sandwich_check(dim: usize, trials: usize, spec: &SamplerSpec, tol: f64) -> Result<ExperimentReport> {
    check_dim(spec, dim)?;
    let start = Instant::now();
    let margins = run_trials(trials, |t| {
        let (a, b) = draw_pair(spec, t)?;
        sandwich_margin(&a, &b)
    })?;
    let mut tally = Tally::default();
    for (t, &m) in margins.iter().enumerate() {
        tally.push(t, Some(m), tol);
    }
    let gate = tally.into_variant("sandwich", |t| draw_pair(spec, t).map(|(a, b)| vec![a, b]))?;
    let mut report = base_report("sandwich", spec, trials, tol, gate);

    let basis_state = |k: usize| {
        let mut psi = vec![num_complex::Complex64::new(0.0, 0.0); dim];
        psi[k] = num_complex::Complex64::new(1.0, 0.0);
        DensityMatrix::pure(&psi)
    };
    let (e0, e1) = (basis_state(0)?, basis_state(1)?);
    let m = sandwich_margin(&e0, &e1)?;
    report.fixed_cases.push(FixedCase { label: "orthogonal pure pair".into(), margin: m, passed: m.abs() <= tol });
    let same = draw(spec, 0)?;
    let m = sandwich_margin(&same, &same)?;
    report.fixed_cases.push(FixedCase { label: "identical states".into(), margin: m, passed: m.abs() <= tol });
    report.elapsed_s = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

/// Small-ball behaviour near the maximally mixed qubit.
///
/// For `pairs` random direction pairs `(u, v)` drawn uniformly from the Bloch
/// ball, and each `eps` of the ladder, measures
/// `|F(eps u, eps v) - (1 - eps^2 |u - v|^2 / 4)|` for both fidelities and
/// `|d(eps u, eps v) - eps |u - v| / 2|` for the six metrics. Errors are
/// averaged over pairs at each rung.
///
/// Margins: `min order - 3.5` for each fidelity series, and the smallest
/// relative decrease between rungs for each metric series.
pub fn run_limit_scaling_check(eps_ladder: &[f64], pairs: usize, seed: u64, tol: f64) -> Result<ExperimentReport> {
    if eps_ladder.len() < 2 {
        return Err(Error::Domain("epsilon ladder needs at least two rungs".into()));
    }
    for w in eps_ladder.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::Domain("epsilon ladder must be strictly descending".into()));
        }
    }
    if eps_ladder.iter().any(|&e| !(e > 0.0 && e <= 0.5)) {
        return Err(Error::Domain("epsilon values must lie in (0, 0.5]".into()));
    }
    let start = Instant::now();
    let rungs = eps_ladder.len();

    // rows: [F_B, F_A, six metrics] errors for each rung
    let per_pair = run_trials(pairs, |p| {
        let u = sample_bloch_ball(seed, 2 * p as u64);
        let v = sample_bloch_ball(seed, 2 * p as u64 + 1);
        limit_errors(&u, &v, eps_ladder)
    })?;

    let series = |idx: usize, name: &str| -> LimitSeries {
        let mut mean = vec![0.0; rungs];
        let mut max = vec![0.0_f64; rungs];
        for row in &per_pair {
            for k in 0..rungs {
                mean[k] += row[k][idx];
                max[k] = max[k].max(row[k][idx]);
            }
        }
        mean.iter_mut().for_each(|m| *m /= pairs.max(1) as f64);
        let orders =
            (0..rungs - 1).map(|k| (mean[k] / mean[k + 1]).ln() / (eps_ladder[k] / eps_ladder[k + 1]).ln()).collect();
        LimitSeries { name: name.to_string(), mean_error: mean, max_error: max, orders }
    };
    let fidelities = vec![series(0, "bures-fidelity"), series(1, "a-fidelity")];
    let metric_series: Vec<LimitSeries> =
        MetricKind::ALL.iter().enumerate().map(|(i, k)| series(2 + i, k.name())).collect();

    let mut tally = Tally::default();
    let mut labels = Vec::new();
    for s in &fidelities {
        let worst = s.orders.iter().copied().fold(f64::INFINITY, f64::min);
        tally.push(labels.len(), Some(worst - MIN_LIMIT_ORDER), tol);
        labels.push(s.name.clone());
    }
    for s in &metric_series {
        let worst = s.mean_error.windows(2).map(|w| (w[0] - w[1]) / w[0]).fold(f64::INFINITY, f64::min);
        tally.push(labels.len(), Some(worst), tol);
        labels.push(s.name.clone());
    }
    let (violations, marginal, min_margin) = (tally.violations, tally.marginal, tally.worst.map(|w| w.1));

    // coincident directions: the fidelity error must vanish at every rung
    let same = BlochVector::qubit(0.3, -0.5, 0.2)?;
    let errors = limit_errors(&same, &same, eps_ladder)?;
    let gap = errors.iter().map(|r| r[0].max(r[1])).fold(0.0, f64::max);

    Ok(ExperimentReport {
        experiment_name: "limits".into(),
        dim: 2,
        trials: pairs,
        seed,
        measure: Measure::BlochBallUniform.name().into(),
        tolerance: tol,
        metric: None,
        violations,
        marginal,
        min_margin,
        worst_case: None,
        variants: Vec::new(),
        fixed_cases: vec![FixedCase {
            label: "u = v gives zero fidelity error".into(),
            margin: -gap,
            passed: gap <= tol,
        }],
        limits: Some(LimitSummary { eps: eps_ladder.to_vec(), fidelities, metrics: metric_series }),
        elapsed_s: Some(start.elapsed().as_secs_f64()),
    })
}

/// Per rung: `[F_B err, F_A err, metric errs...]`.
fn limit_errors(u: &BlochVector, v: &BlochVector, eps_ladder: &[f64]) -> Result<Vec<[f64; 8]>> {
    eps_ladder
        .iter()
        .map(|&eps| {
            let (su, sv) = (u.scaled(eps)?, v.scaled(eps)?);
            let (a, b) = (qubit_from_bloch(&su)?, qubit_from_bloch(&sv)?);
            let half = metrics::half_distance(&su, &sv);
            let expected = 1.0 - half * half;
            let fb = bures_fidelity(&a, &b)?;
            let fa = a_fidelity(&a, &b)?;
            let mut row = [0.0; 8];
            row[0] = (fb - expected).abs();
            row[1] = (fa - expected).abs();
            for (i, kind) in MetricKind::ALL.iter().enumerate() {
                let f = if kind.uses_a_fidelity() { fa } else { fb };
                row[2 + i] = (kind.from_fidelity(f)? - half).abs();
            }
            Ok(row)
        })
        .collect()
}
