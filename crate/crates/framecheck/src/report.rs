//! Suite execution and report rendering.
//!
//! The machine format is pretty-printed JSON; its schema is documented in
//! `docs/report.md`. Reals are written in shortest round-trip form, so a
//! report parses back to the exact values that were computed.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::checks::{
    check_frame_indifference, check_isotropy, check_observer_independence, check_symmetry,
    check_zero_map, schur_reduce, CheckResult, Witness,
};
use crate::config::{CheckKind, CheckSpec, RawConfig, SuiteConfig};
use crate::groups::{GroupKind, SymmetryGroup};
use crate::tensor::{sig6, Tensor2};

pub const TOOL_NAME: &str = "framecheck";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Human,
    Machine,
}

/// Witness flattened to plain numbers; matrices are row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub group_element: [f64; 9],
    pub observer: Option<[f64; 9]>,
    pub theta: f64,
    pub grad_theta: [f64; 3],
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        WitnessRecord {
            group_element: w.group_element.to_row_major(),
            observer: w.observer.map(|q| q.matrix().to_row_major()),
            theta: w.state.theta,
            grad_theta: w.state.grad_theta.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    /// Absent when the check could not be constructed.
    pub max_residual: Option<f64>,
    pub samples_used: usize,
    pub witness: Option<WitnessRecord>,
    pub note: Option<String>,
}

impl CheckRecord {
    fn from_result(kind: CheckKind, r: CheckResult) -> Self {
        CheckRecord {
            name: kind.as_str().to_string(),
            passed: r.passed,
            max_residual: Some(r.max_residual),
            samples_used: r.samples_used,
            witness: r.witness.as_ref().map(WitnessRecord::from),
            note: r.note,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub tool: String,
    pub version: String,
    /// Conjunction of every check's `passed`.
    pub passed: bool,
    pub config: RawConfig,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn failed_count(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

fn group_for(spec: &CheckSpec, group: &SymmetryGroup) -> SymmetryGroup {
    if group.kind() == GroupKind::FullOrthogonal && group.sample_count() != Some(spec.sample_count)
    {
        SymmetryGroup::full_orthogonal(spec.sample_count).expect("validated sample count")
    } else {
        group.clone()
    }
}

fn run_check(sc: &SuiteConfig, spec: &CheckSpec) -> CheckRecord {
    let kind = spec.kind;
    let group = match (&sc.group, kind.uses_group()) {
        (Err(e), true) => {
            return CheckRecord {
                name: kind.as_str().to_string(),
                passed: false,
                max_residual: None,
                samples_used: 0,
                witness: None,
                note: Some(format!("group construction failed: {e}")),
            }
        }
        (Ok(g), true) => Some(group_for(spec, g)),
        _ => None,
    };
    let result = match kind {
        CheckKind::Symmetry => check_symmetry(&sc.model, group.as_ref().unwrap(), &spec.cfg),
        CheckKind::FrameIndifference => {
            check_frame_indifference(&sc.model, group.as_ref().unwrap(), &sc.observers, &spec.cfg)
        }
        CheckKind::Isotropy => check_isotropy(&sc.model, &spec.cfg, spec.sample_count),
        CheckKind::ObserverIndependence => {
            check_observer_independence(&sc.model, &sc.observers, &spec.cfg)
        }
        CheckKind::ZeroMap => check_zero_map(&sc.model, &spec.cfg),
        CheckKind::Schur => return run_schur(sc, spec),
    };
    CheckRecord::from_result(kind, result)
}

fn run_schur(sc: &SuiteConfig, spec: &CheckSpec) -> CheckRecord {
    let mut record = CheckRecord {
        name: CheckKind::Schur.as_str().to_string(),
        passed: true,
        max_residual: Some(0.0),
        samples_used: 0,
        witness: None,
        note: None,
    };
    let mut alphas = Vec::new();
    let mut worst = -1.0;
    for &theta in &spec.cfg.theta_samples {
        let kappa = sc
            .model
            .gradient_independent_kappa(theta)
            .expect("schur is only accepted for linear families");
        let s = schur_reduce(&kappa, &spec.cfg);
        record.samples_used += 1;
        record.passed &= s.is_isotropic_invariant;
        if let Some(a) = s.alpha {
            alphas.push(format!("α({theta}) = {a}"));
        }
        if s.residual > worst {
            worst = s.residual;
            record.max_residual = Some(s.residual);
            record.witness = s.witness.map(|r| WitnessRecord {
                group_element: r.to_row_major(),
                observer: None,
                theta,
                grad_theta: [0.0; 3],
            });
        }
    }
    if record.passed {
        record.witness = None;
        record.note = Some(format!("κ = α·1 with {}", alphas.join(", ")));
    } else {
        record.note = Some("conductivity is not invariant under O(3), so it is not α·1".into());
    }
    record
}

/// Runs every requested check in configuration order.
pub fn run_suite(sc: &SuiteConfig) -> SuiteReport {
    let checks: Vec<CheckRecord> = sc.checks.iter().map(|spec| run_check(sc, spec)).collect();
    SuiteReport {
        tool: TOOL_NAME.to_string(),
        version: TOOL_VERSION.to_string(),
        passed: checks.iter().all(|c| c.passed),
        config: sc.echo(),
        checks,
    }
}

pub fn emit_report(r: &SuiteReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Machine => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes to JSON");
            s.push('\n');
            s
        }
        ReportFormat::Human => human(r),
    }
}

fn matrix_lines(out: &mut String, label: &str, m: &[f64; 9]) {
    let t = Tensor2::from_row_major(*m);
    let _ = writeln!(out, "    {label}");
    for line in t.to_string().lines() {
        let _ = writeln!(out, "      {line}");
    }
}

fn human(r: &SuiteReport) -> String {
    let mut out = String::new();
    let run = &r.config.run;
    let group = r
        .config
        .group
        .name
        .clone()
        .unwrap_or_else(|| "generated".into());
    let _ = writeln!(
        out,
        "{} {}  model={}  group={}  seed={}  tol={}",
        r.tool,
        r.version,
        r.config.model.family,
        group,
        run.seed.unwrap_or(0),
        run.tol.map(sig6).unwrap_or_default()
    );
    let width = r
        .checks
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let _ = writeln!(
        out,
        "{:<width$}  {:<6}  {:>12}  {:>9}",
        "CHECK", "RESULT", "MAX_RESIDUAL", "SAMPLES"
    );
    for c in &r.checks {
        let residual = c.max_residual.map(sig6).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:<width$}  {:<6}  {:>12}  {:>9}",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            residual,
            c.samples_used
        );
        if let Some(w) = &c.witness {
            let identity = Tensor2::identity().to_row_major();
            if w.observer.is_none() || w.group_element != identity {
                matrix_lines(&mut out, "witness H =", &w.group_element);
            }
            if let Some(q) = &w.observer {
                matrix_lines(&mut out, "observer Q =", q);
            }
            let g = w.grad_theta.map(sig6);
            let _ = writeln!(
                out,
                "    state Θ = {}, ∇Θ = ({}, {}, {})",
                sig6(w.theta),
                g[0],
                g[1],
                g[2]
            );
        }
        if let Some(note) = &c.note {
            let _ = writeln!(out, "    note: {note}");
        }
    }
    let failed = r.failed_count();
    if failed == 0 {
        let _ = writeln!(out, "suite: PASS ({} checks)", r.checks.len());
    } else {
        let _ = writeln!(
            out,
            "suite: FAIL ({failed} of {} checks failed)",
            r.checks.len()
        );
    }
    out
}
