//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use qfid::experiments::{
    run_bound_experiment, run_limit_scaling_check, run_sandwich_check, run_theorem1_check, run_triangle_experiment,
    ExperimentReport, DEFAULT_SEED, DEFAULT_TOL,
};
use qfid::fidelity::{a_fidelity, bures_fidelity};
use qfid::hyperbolic::{
    closed_form_bures, closed_form_cos2_half_defect, geometric_a_fidelity, geometric_bures, triangle_of,
};
use qfid::metrics::MetricKind;
use qfid::sampling::{sample_state, Measure, SamplerSpec};
use qfid::states::{bloch_of, qubit_from_bloch, BlochVector};
use qfid::Result;

type Check = fn() -> Result<Outcome>;
type Rerun<'a> = Box<dyn Fn() -> Result<ExperimentReport> + 'a>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn spec(measure: Measure, dim: usize) -> Result<SamplerSpec> {
    SamplerSpec::new(measure, dim, DEFAULT_SEED)
}

fn fmt_margin(r: &ExperimentReport) -> String {
    r.min_margin.map(|m| format!("{m:.3e}")).unwrap_or_else(|| "n/a".into())
}

fn ac1() -> Result<Outcome> {
    let r = run_theorem1_check(10_000, &spec(Measure::HilbertSchmidtMixed, 2)?, DEFAULT_TOL)?;
    let max_dev = -r.min_margin.unwrap_or(0.0);
    Ok(Outcome {
        passed: r.passed() && max_dev < 1e-9,
        detail: format!("10^4 qubit pairs, max |F_A - F_B cos^2(delta/2)| = {max_dev:.3e}"),
    })
}

fn ac2() -> Result<Outcome> {
    let mut passed = true;
    let mut parts = Vec::new();
    for dim in [3, 4] {
        let r = run_bound_experiment(dim, 100_000, &spec(Measure::HilbertSchmidtMixed, dim)?, DEFAULT_TOL)?;
        passed &= r.violations == 0;
        let geo = r.variants.iter().find(|v| v.name == "geometric").expect("geometric variant");
        parts.push(format!(
            "dim {dim}: closed-form violations {} (min margin {}), geometric violations {} skipped {}, {:.1}s",
            r.violations,
            fmt_margin(&r),
            geo.violations,
            geo.skipped,
            r.elapsed_s.unwrap_or(0.0)
        ));
    }
    Ok(Outcome { passed, detail: parts.join("; ") })
}

fn ac3() -> Result<Outcome> {
    let r = run_bound_experiment(2, 100_000, &spec(Measure::HilbertSchmidtMixed, 2)?, DEFAULT_TOL)?;
    let eq: Vec<String> = r.fixed_cases.iter().map(|c| format!("{} gap {:.1e}", c.label, -c.margin)).collect();
    let equality_ok = r.fixed_cases.len() == 2 && r.fixed_cases.iter().all(|c| c.margin.abs() < 1e-9);
    Ok(Outcome {
        passed: r.violations == 0 && equality_ok,
        detail: format!("dim 2: violations {}, min margin {}; {}", r.violations, fmt_margin(&r), eq.join(", ")),
    })
}

fn ac4() -> Result<Outcome> {
    let mut passed = true;
    let mut parts = Vec::new();
    for kind in [MetricKind::AAngle, MetricKind::AcMetric, MetricKind::AMetric] {
        for dim in [2, 3, 4] {
            let r =
                run_triangle_experiment(kind, dim, 100_000, &spec(Measure::HilbertSchmidtMixed, dim)?, DEFAULT_TOL)?;
            passed &= r.violations == 0;
            parts.push(format!("{kind}/{dim}: {} ({})", r.violations, fmt_margin(&r)));
        }
    }
    Ok(Outcome { passed, detail: format!("violations (min slack) {}", parts.join(", ")) })
}

fn ac5() -> Result<Outcome> {
    let mut passed = true;
    let mut parts = Vec::new();
    for dim in [2, 3, 4] {
        for measure in Measure::ALL {
            if measure == Measure::BlochBallUniform && dim != 2 {
                continue;
            }
            let r = run_sandwich_check(dim, 10_000, &spec(measure, dim)?, DEFAULT_TOL)?;
            passed &= r.passed();
            parts.push(format!("{}/{dim}: {}", measure.name(), r.violations));
        }
    }
    Ok(Outcome { passed, detail: format!("violations {}", parts.join(", ")) })
}

fn ac6() -> Result<Outcome> {
    let s = spec(Measure::HilbertSchmidtMixed, 2)?;
    let (mut bures_dev, mut defect_dev) = (0.0_f64, 0.0_f64);
    let mut used = 0;
    let mut index = 0;
    while used < 10_000 {
        let (a, b) = (sample_state(&s, index)?, sample_state(&s, index + 1)?);
        index += 2;
        let (u, v) = (bloch_of(&a)?, bloch_of(&b)?);
        if u.norm() >= 1.0 - 1e-6 || v.norm() >= 1.0 - 1e-6 {
            continue;
        }
        used += 1;
        bures_dev = bures_dev.max((geometric_bures(&u, &v)? - bures_fidelity(&a, &b)?).abs());
        let f = closed_form_bures(u.norm(), v.norm(), u.dot(&v)?)?;
        let closed = closed_form_cos2_half_defect(f, u.norm(), v.norm())?;
        defect_dev = defect_dev.max((closed - triangle_of(&u, &v)?.cos2_half_defect()).abs());
    }
    Ok(Outcome {
        passed: bures_dev < 1e-9 && defect_dev < 1e-9,
        detail: format!("10^4 qubit pairs, max |geometric - matrix F_B| = {bures_dev:.3e}, max |closed - triangle cos^2(delta/2)| = {defect_dev:.3e}"),
    })
}

fn ac7() -> Result<Outcome> {
    let r = run_limit_scaling_check(&[0.1, 0.05, 0.025], 1000, DEFAULT_SEED, DEFAULT_TOL)?;
    let limits = r.limits.as_ref().expect("limit summary");
    let orders_ok = limits.fidelities.iter().all(|s| s.orders.iter().all(|&o| o >= 3.5));
    let monotone = limits.metrics.iter().all(|s| s.mean_error.windows(2).all(|w| w[1] < w[0]));
    let orders: Vec<String> = limits
        .fidelities
        .iter()
        .map(|s| format!("{} {:?}", s.name, s.orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>()))
        .collect();
    Ok(Outcome {
        passed: r.passed() && orders_ok && monotone,
        detail: format!("orders {}; metric errors monotone: {monotone}", orders.join(", ")),
    })
}

fn ac8() -> Result<Outcome> {
    let (u, v) = (BlochVector::qubit(0.6, 0.0, 0.0)?, BlochVector::qubit(0.0, 0.6, 0.0)?);
    let (a, b) = (qubit_from_bloch(&u)?, qubit_from_bloch(&v)?);
    let fb_closed = closed_form_bures(0.6, 0.6, 0.0)?;
    let fb = [fb_closed, geometric_bures(&u, &v)?, bures_fidelity(&a, &b)?];
    let fa = [
        fb_closed * closed_form_cos2_half_defect(fb_closed, 0.6, 0.6)?,
        geometric_a_fidelity(&u, &v)?,
        a_fidelity(&a, &b)?,
    ];
    let fb_dev = fb.iter().map(|x| (x - 0.82).abs()).fold(0.0, f64::max);
    let fa_dev = fa.iter().map(|x| (x - 0.81).abs()).fold(0.0, f64::max);
    Ok(Outcome {
        passed: fb_dev <= 1e-12 && fa_dev <= 1e-9,
        detail: format!("closed/geometric/matrix: max |F_B - 0.82| = {fb_dev:.1e}, max |F_A - 0.81| = {fa_dev:.1e}"),
    })
}

fn ac9() -> Result<Outcome> {
    let hs2 = spec(Measure::HilbertSchmidtMixed, 2)?;
    let hs3 = spec(Measure::HilbertSchmidtMixed, 3)?;
    let runs: Vec<(&str, Rerun)> = vec![
        ("theorem1", Box::new(|| run_theorem1_check(10_000, &hs2, DEFAULT_TOL))),
        ("bound", Box::new(|| run_bound_experiment(3, 20_000, &hs3, DEFAULT_TOL))),
        ("triangle", Box::new(|| run_triangle_experiment(MetricKind::AAngle, 3, 20_000, &hs3, DEFAULT_TOL))),
        ("sandwich", Box::new(|| run_sandwich_check(3, 10_000, &hs3, DEFAULT_TOL))),
        ("limits", Box::new(|| run_limit_scaling_check(&[0.1, 0.05, 0.025], 1000, DEFAULT_SEED, DEFAULT_TOL))),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, run) in runs {
        let same = run()?.without_timing().to_json() == run()?.without_timing().to_json();
        passed &= same;
        parts.push(format!("{name}: {}", if same { "identical" } else { "DIFFERENT" }));
    }
    Ok(Outcome { passed, detail: parts.join(", ") })
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 9] = [
        ("AC1 dual-route A-fidelity identity", ac1),
        ("AC2 bound, dims 3 and 4", ac2),
        ("AC3 qubit bound and equality cases", ac3),
        ("AC4 triangle inequality", ac4),
        ("AC5 sandwich inequality", ac5),
        ("AC6 cross-route agreement", ac6),
        ("AC7 small-ball limits", ac7),
        ("AC8 worked value", ac8),
        ("AC9 determinism", ac9),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome { passed: false, detail: format!("error: {e}") });
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        failures += usize::from(!outcome.passed);
        println!("{status} {name} [{:.1}s]: {}", start.elapsed().as_secs_f64(), outcome.detail);
    }
    if failures == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 9 criteria failed");
        ExitCode::FAILURE
    }
}
