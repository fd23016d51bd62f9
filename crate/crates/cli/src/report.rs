use serde::{Deserialize, Serialize};

use qfid::experiments::ExperimentReport;
use qfid::fidelity::{a_fidelity, alt_a_fidelity, bures_fidelity, trace_distance};
use qfid::hyperbolic::{triangle_of, MAX_GEOMETRIC_NORM};
use qfid::states::bloch_of;
use qfid::{DensityMatrix, MetricKind, Result};

use crate::Format;

/// Rounds to 12 significant digits for display.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let mag = rounded.abs();
    if mag != 0.0 && !(1e-4..1e12).contains(&mag) {
        format!("{rounded:e}")
    } else {
        rounded.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub metric: MetricKind,
    pub value: f64,
}

/// Hyperbolic-triangle quantities for a pair of mixed qubit states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub phi_u: f64,
    pub phi_v: f64,
    pub phi_w: f64,
    pub cos2_half_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelitySummary {
    pub dim: usize,
    pub bures_fidelity: f64,
    pub a_fidelity: f64,
    pub alt_a_fidelity: f64,
    pub trace_distance: f64,
    pub metrics: Vec<MetricValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
}

impl FidelitySummary {
    pub fn compute(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        let fb = bures_fidelity(a, b)?;
        let fa = a_fidelity(a, b)?;
        let metrics = MetricKind::ALL
            .into_iter()
            .map(|kind| {
                let f = if kind.uses_a_fidelity() { fa } else { fb };
                Ok(MetricValue { metric: kind, value: kind.from_fidelity(f)? })
            })
            .collect::<Result<_>>()?;
        let geometry = if a.dim() == 2 {
            let (u, v) = (bloch_of(a)?, bloch_of(b)?);
            if u.norm() <= MAX_GEOMETRIC_NORM && v.norm() <= MAX_GEOMETRIC_NORM {
                let t = triangle_of(&u, &v)?;
                Some(Geometry {
                    phi_u: t.phi_u().value(),
                    phi_v: t.phi_v().value(),
                    phi_w: t.phi_w().value(),
                    cos2_half_defect: t.cos2_half_defect(),
                })
            } else {
                None
            }
        } else {
            None
        };
        Ok(FidelitySummary {
            dim: a.dim(),
            bures_fidelity: fb,
            a_fidelity: fa,
            alt_a_fidelity: alt_a_fidelity(a, b)?,
            trace_distance: trace_distance(a, b)?,
            metrics,
            geometry,
        })
    }

    fn rows(&self) -> Vec<(String, f64)> {
        let mut rows = vec![
            ("bures_fidelity".to_string(), self.bures_fidelity),
            ("a_fidelity".to_string(), self.a_fidelity),
            ("alt_a_fidelity".to_string(), self.alt_a_fidelity),
            ("trace_distance".to_string(), self.trace_distance),
        ];
        rows.extend(self.metrics.iter().map(|m| (m.metric.name().to_string(), m.value)));
        if let Some(g) = &self.geometry {
            rows.extend([
                ("phi_u".to_string(), g.phi_u),
                ("phi_v".to_string(), g.phi_v),
                ("phi_w".to_string(), g.phi_w),
                ("cos2_half_defect".to_string(), g.cos2_half_defect),
            ]);
        }
        rows
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("summary serializes") + "\n",
            Format::Csv => {
                let mut out = String::from("quantity,value\n");
                for (k, v) in self.rows() {
                    out += &format!("{k},{v:e}\n");
                }
                out
            }
            Format::Table => {
                let mut out = format!("{:<18} {}\n", "dim", self.dim);
                for (k, v) in self.rows() {
                    out += &format!("{k:<18} {}\n", sig12(v));
                }
                out
            }
        }
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_else(|| "n/a".into())
}

pub fn render_experiment(r: &ExperimentReport, format: Format) -> String {
    match format {
        Format::Json => r.to_json() + "\n",
        Format::Csv => format!("{}\n{}\n", ExperimentReport::CSV_HEADER, r.to_csv_row()),
        Format::Table => table(r),
    }
}

fn table(r: &ExperimentReport) -> String {
    let mut lines = vec![
        format!("{:<12} {}", "experiment", r.experiment_name),
        format!("{:<12} {}", "dim", r.dim),
        format!("{:<12} {}", "measure", r.measure),
        format!("{:<12} {}", "trials", r.trials),
        format!("{:<12} {}", "seed", r.seed),
        format!("{:<12} {}", "tolerance", sig12(r.tolerance)),
    ];
    if let Some(m) = r.metric {
        lines.push(format!("{:<12} {m}", "metric"));
    }
    lines.push(format!("{:<12} {}", "violations", r.violations));
    lines.push(format!("{:<12} {}", "marginal", r.marginal));
    lines.push(format!("{:<12} {}", "min_margin", opt(r.min_margin)));
    if let Some(w) = &r.worst_case {
        lines.push(format!("{:<12} trial {}", "worst_case", w.trial));
    }
    if let Some(e) = r.elapsed_s {
        lines.push(format!("{:<12} {e:.3}", "elapsed_s"));
    }
    if !r.variants.is_empty() {
        lines.push(String::new());
        lines.push(format!(
            "{:<14} {:>9} {:>8} {:>10} {:>8} {:>20}",
            "variant", "evaluated", "skipped", "violations", "marginal", "min_margin"
        ));
        for v in &r.variants {
            lines.push(format!(
                "{:<14} {:>9} {:>8} {:>10} {:>8} {:>20}",
                v.name,
                v.evaluated,
                v.skipped,
                v.violations,
                v.marginal,
                opt(v.min_margin)
            ));
        }
    }
    if !r.fixed_cases.is_empty() {
        lines.push(String::new());
        for c in &r.fixed_cases {
            let status = if c.passed { "ok" } else { "FAILED" };
            lines.push(format!("{status:<6} {} (margin {})", c.label, sig12(c.margin)));
        }
    }
    if let Some(l) = &r.limits {
        lines.push(String::new());
        lines.push(format!("eps {}", l.eps.iter().map(|e| sig12(*e)).collect::<Vec<_>>().join(" ")));
        for s in l.fidelities.iter().chain(&l.metrics) {
            let errs: Vec<String> = s.mean_error.iter().map(|e| sig12(*e)).collect();
            let orders: Vec<String> = s.orders.iter().map(|o| format!("{o:.3}")).collect();
            lines.push(format!("{:<15} mean error {}  order {}", s.name, errs.join(" "), orders.join(" ")));
        }
    }
    lines.join("\n") + "\n"
}
