//! Suite configuration: a TOML document with `model`, `group`, `checks` and
//! `run` tables, resolved into validated library values.
//!
//! The grammar is documented in `docs/config.md`. Every default is made
//! explicit by [`SuiteConfig::echo`], and parsing the echo reproduces the
//! resolved configuration exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checks::{CheckConfig, DEFAULT_GRADIENT_SAMPLES, DEFAULT_THETA_SAMPLES, DEFAULT_TOL};
use crate::groups::{
    catalog_lookup_with_samples, generate_closure, GroupError, SymmetryGroup, DEFAULT_MAX_ORDER,
    DEFAULT_SAMPLE_COUNT,
};
use crate::model::{ConstitutiveModel, Family};
use crate::tensor::{nearest_orthogonal, orthogonality_defect, ObserverChange, RngSeed, Tensor2};

/// Orthogonality tolerance for matrices typed into a config file.
pub const CONFIG_ORTH_TOL: f64 = 1e-6;
pub const DEFAULT_OBSERVER_COUNT: usize = 100;
/// Seed stream reserved for random observers.
const OBSERVER_STREAM: u64 = u64::MAX - 1;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{key}`: {message}")]
    Validation { key: String, message: String },
}

impl ConfigError {
    fn invalid(key: impl Into<String>, message: impl fmt::Display) -> Self {
        ConfigError::Validation {
            key: key.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    Symmetry,
    Isotropy,
    FrameIndifference,
    ObserverIndependence,
    ZeroMap,
    Schur,
}

impl CheckKind {
    pub const ALL: [CheckKind; 6] = [
        CheckKind::Symmetry,
        CheckKind::Isotropy,
        CheckKind::FrameIndifference,
        CheckKind::ObserverIndependence,
        CheckKind::ZeroMap,
        CheckKind::Schur,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Symmetry => "symmetry",
            CheckKind::Isotropy => "isotropy",
            CheckKind::FrameIndifference => "frame_indifference",
            CheckKind::ObserverIndependence => "observer_independence",
            CheckKind::ZeroMap => "zero_map",
            CheckKind::Schur => "schur",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            CheckKind::Symmetry => "Hᵀ·M(H·z) = M(z) for every H in the configured group",
            CheckKind::Isotropy => "symmetry under sampled O(3) plus adversarial elements",
            CheckKind::FrameIndifference => {
                "component maps of different observers transform into each other"
            }
            CheckKind::ObserverIndependence => "component maps coincide across observers",
            CheckKind::ZeroMap => "M(Θ, 0) = 0",
            CheckKind::Schur => "an invariant constant conductivity is α·1",
        }
    }

    /// Checks that read the configured group.
    pub fn uses_group(self) -> bool {
        matches!(self, CheckKind::Symmetry | CheckKind::FrameIndifference)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or(())
    }
}

// ---------------------------------------------------------------------------
// File schema
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub model: RawModel,
    #[serde(default)]
    pub group: RawGroup,
    pub checks: RawChecks,
    #[serde(default)]
    pub run: RawRun,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa0: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_coeffs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_tensor: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGroup {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Row-major 3×3 matrices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RawChecks {
    pub enabled: Vec<String>,
    /// Per-check tables, e.g. `[checks.isotropy]`.
    #[serde(flatten)]
    pub overrides: BTreeMap<String, CheckOverride>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckOverride {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawObservers {
    Count(usize),
    Matrices(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRun {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_samples: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observers: Option<RawObservers>,
}

// ---------------------------------------------------------------------------
// Resolved configuration
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub enum GroupSpec {
    Named(String),
    Generators {
        generators: Vec<Tensor2>,
        max_order: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ObserverSpec {
    Random(usize),
    Explicit(Vec<Tensor2>),
}

/// One requested check with its effective settings.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckSpec {
    pub kind: CheckKind,
    pub cfg: CheckConfig,
    pub sample_count: usize,
    pub overrides: CheckOverride,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub model: ConstitutiveModel,
    pub group_spec: GroupSpec,
    /// Closure failures are kept here and reported per check by the runner.
    pub group: Result<SymmetryGroup, GroupError>,
    pub checks: Vec<CheckSpec>,
    pub base: CheckConfig,
    pub sample_count: usize,
    pub observer_spec: ObserverSpec,
    pub observers: Vec<ObserverChange>,
}

/// Command-line values that replace the corresponding `run` keys.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

pub fn parse_config(text: &str) -> Result<SuiteConfig, ConfigError> {
    parse_config_with(text, Overrides::default())
}

pub fn parse_config_with(text: &str, overrides: Overrides) -> Result<SuiteConfig, ConfigError> {
    let mut raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map(|s| line_col(text, s.start)).unwrap_or((1, 1));
        ConfigError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    if let Some(seed) = overrides.seed {
        raw.run.seed = Some(seed);
    }
    if let Some(tol) = overrides.tol {
        raw.run.tol = Some(tol);
    }
    resolve(&raw)
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn tensor9(key: &str, v: &[f64]) -> Result<Tensor2, ConfigError> {
    let arr: [f64; 9] = v.try_into().map_err(|_| {
        ConfigError::invalid(
            key,
            format!("expected 9 reals (row-major 3×3), got {}", v.len()),
        )
    })?;
    let t = Tensor2::from_row_major(arr);
    if !t.is_finite() {
        return Err(ConfigError::invalid(key, "entries must be finite"));
    }
    Ok(t)
}

fn orthogonal9(key: &str, v: &[f64]) -> Result<Tensor2, ConfigError> {
    let t = tensor9(key, v)?;
    let defect = orthogonality_defect(&t);
    if defect > CONFIG_ORTH_TOL {
        return Err(ConfigError::invalid(
            key,
            format!("matrix is not orthogonal (max |Q·Qᵀ - 1| = {defect:e} > {CONFIG_ORTH_TOL:e})"),
        ));
    }
    nearest_orthogonal(&t).map_err(|e| ConfigError::invalid(key, e))
}

fn require<T: Clone>(key: &str, v: &Option<T>) -> Result<T, ConfigError> {
    v.clone()
        .ok_or_else(|| ConfigError::invalid(key, "required for this model family"))
}

fn resolve_model(m: &RawModel) -> Result<ConstitutiveModel, ConfigError> {
    let family: Family = m
        .family
        .parse()
        .map_err(|e| ConfigError::invalid("model.family", e))?;
    let allowed: &[&str] = match family {
        Family::LinearConstant => &["kappa0"],
        Family::LinearTemperature => &["kappa0", "theta_coeffs"],
        Family::NonlinearIsotropic => &["a", "b"],
        Family::NonlinearAnisotropic => &["a_tensor", "c"],
    };
    let present = [
        ("kappa0", m.kappa0.is_some()),
        ("theta_coeffs", m.theta_coeffs.is_some()),
        ("a", m.a.is_some()),
        ("b", m.b.is_some()),
        ("c", m.c.is_some()),
        ("a_tensor", m.a_tensor.is_some()),
    ];
    if let Some((key, _)) = present.iter().find(|(k, p)| *p && !allowed.contains(k)) {
        return Err(ConfigError::invalid(
            format!("model.{key}"),
            format!("not a parameter of family {family}"),
        ));
    }
    let model = match family {
        Family::LinearConstant => ConstitutiveModel::LinearConstant {
            kappa0: tensor9("model.kappa0", &require("model.kappa0", &m.kappa0)?)?,
        },
        Family::LinearTemperature => ConstitutiveModel::LinearTemperature {
            kappa0: tensor9("model.kappa0", &require("model.kappa0", &m.kappa0)?)?,
            theta_coeffs: require("model.theta_coeffs", &m.theta_coeffs)?,
        },
        Family::NonlinearIsotropic => ConstitutiveModel::NonlinearIsotropic {
            a: require("model.a", &m.a)?,
            b: require("model.b", &m.b)?,
        },
        Family::NonlinearAnisotropic => ConstitutiveModel::NonlinearAnisotropic {
            a_tensor: tensor9("model.a_tensor", &require("model.a_tensor", &m.a_tensor)?)?,
            c: require("model.c", &m.c)?,
        },
    };
    model
        .validate()
        .map_err(|e| ConfigError::invalid("model", e))?;
    Ok(model)
}

fn resolve(raw: &RawConfig) -> Result<SuiteConfig, ConfigError> {
    let model = resolve_model(&raw.model)?;

    let run = &raw.run;
    let seed = run.seed.unwrap_or(0);
    if seed > i64::MAX as u64 {
        return Err(ConfigError::invalid("run.seed", "must not exceed 2^63 - 1"));
    }
    let base = CheckConfig {
        tol: run.tol.unwrap_or(DEFAULT_TOL),
        theta_samples: run
            .theta_samples
            .clone()
            .unwrap_or_else(|| DEFAULT_THETA_SAMPLES.to_vec()),
        gradient_samples: run.gradient_samples.unwrap_or(DEFAULT_GRADIENT_SAMPLES),
        seed: RngSeed(seed),
    };
    base.validate().map_err(|e| {
        let key = match e {
            crate::checks::CheckError::InvalidTolerance(_) => "run.tol",
            crate::checks::CheckError::NoGradientSamples => "run.gradient_samples",
            _ => "run.theta_samples",
        };
        ConfigError::invalid(key, e)
    })?;
    let sample_count = run.sample_count.unwrap_or(DEFAULT_SAMPLE_COUNT);
    if sample_count == 0 {
        return Err(ConfigError::invalid(
            "run.sample_count",
            "must be at least 1",
        ));
    }

    let group_spec = match (&raw.group.name, &raw.group.generators) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::invalid(
                "group",
                "give either `name` or `generators`, not both",
            ))
        }
        (Some(name), None) => {
            if raw.group.max_order.is_some() {
                return Err(ConfigError::invalid(
                    "group.max_order",
                    "only applies to `generators`",
                ));
            }
            GroupSpec::Named(name.clone())
        }
        (None, Some(gens)) => {
            let generators = gens
                .iter()
                .enumerate()
                .map(|(i, g)| orthogonal9(&format!("group.generators[{i}]"), g))
                .collect::<Result<Vec<_>, _>>()?;
            let max_order = raw.group.max_order.unwrap_or(DEFAULT_MAX_ORDER);
            if max_order == 0 {
                return Err(ConfigError::invalid(
                    "group.max_order",
                    "must be at least 1",
                ));
            }
            GroupSpec::Generators {
                generators,
                max_order,
            }
        }
        (None, None) => GroupSpec::Named("trivial".into()),
    };
    let group = match &group_spec {
        GroupSpec::Named(name) => match catalog_lookup_with_samples(name, sample_count) {
            Err(e @ GroupError::UnknownGroupName(_)) => {
                return Err(ConfigError::invalid("group.name", e))
            }
            other => other,
        },
        GroupSpec::Generators {
            generators,
            max_order,
        } => generate_closure(generators, *max_order),
    };

    if raw.checks.enabled.is_empty() {
        return Err(ConfigError::invalid(
            "checks.enabled",
            "at least one check must be requested",
        ));
    }
    for name in raw.checks.overrides.keys() {
        if name.parse::<CheckKind>().is_err() {
            return Err(ConfigError::invalid(
                format!("checks.{name}"),
                "unknown check name",
            ));
        }
    }
    let mut checks = Vec::new();
    for name in &raw.checks.enabled {
        let kind: CheckKind = name.parse().map_err(|_| {
            ConfigError::invalid("checks.enabled", format!("unknown check `{name}`"))
        })?;
        if checks.iter().any(|c: &CheckSpec| c.kind == kind) {
            return Err(ConfigError::invalid(
                "checks.enabled",
                format!("check `{name}` listed twice"),
            ));
        }
        if kind == CheckKind::Schur && model.family().is_nonlinear() {
            return Err(ConfigError::invalid(
                "checks.enabled",
                "`schur` needs a gradient-independent conductivity (linear family)",
            ));
        }
        let ov = raw.checks.overrides.get(name).cloned().unwrap_or_default();
        let mut cfg = base.clone();
        if let Some(tol) = ov.tol {
            cfg.tol = tol;
        }
        if let Some(n) = ov.gradient_samples {
            cfg.gradient_samples = n;
        }
        cfg.validate()
            .map_err(|e| ConfigError::invalid(format!("checks.{name}"), e))?;
        let count = ov.sample_count.unwrap_or(sample_count);
        if count == 0 {
            return Err(ConfigError::invalid(
                format!("checks.{name}.sample_count"),
                "must be at least 1",
            ));
        }
        checks.push(CheckSpec {
            kind,
            cfg,
            sample_count: count,
            overrides: ov,
        });
    }

    let (observer_spec, observers) = match run.observers.clone() {
        None | Some(RawObservers::Count(_)) => {
            let n = match run.observers {
                Some(RawObservers::Count(n)) => n,
                _ => DEFAULT_OBSERVER_COUNT,
            };
            if n == 0 {
                return Err(ConfigError::invalid("run.observers", "must be at least 1"));
            }
            let stream = base.seed.derive(OBSERVER_STREAM);
            let obs = (0..n as u64)
                .map(|i| ObserverChange::random(stream.derive(i)))
                .collect();
            (ObserverSpec::Random(n), obs)
        }
        Some(RawObservers::Matrices(ms)) => {
            if ms.is_empty() {
                return Err(ConfigError::invalid("run.observers", "must not be empty"));
            }
            let mut tensors = Vec::new();
            let mut obs = Vec::new();
            for (i, m) in ms.iter().enumerate() {
                let key = format!("run.observers[{i}]");
                let q = orthogonal9(&key, m)?;
                tensors.push(q);
                obs.push(
                    ObserverChange::new(q, crate::tensor::INTERNAL_ORTH_TOL)
                        .map_err(|e| ConfigError::invalid(&key, e))?,
                );
            }
            (ObserverSpec::Explicit(tensors), obs)
        }
    };

    Ok(SuiteConfig {
        model,
        group_spec,
        group,
        checks,
        base,
        sample_count,
        observer_spec,
        observers,
    })
}

impl SuiteConfig {
    /// The resolved configuration in file form, with every default spelled out.
    pub fn echo(&self) -> RawConfig {
        let mut model = RawModel {
            family: self.model.family().as_str().to_string(),
            ..RawModel::default()
        };
        match &self.model {
            ConstitutiveModel::LinearConstant { kappa0 } => {
                model.kappa0 = Some(kappa0.to_row_major().to_vec());
            }
            ConstitutiveModel::LinearTemperature {
                kappa0,
                theta_coeffs,
            } => {
                model.kappa0 = Some(kappa0.to_row_major().to_vec());
                model.theta_coeffs = Some(theta_coeffs.clone());
            }
            ConstitutiveModel::NonlinearIsotropic { a, b } => {
                model.a = Some(*a);
                model.b = Some(*b);
            }
            ConstitutiveModel::NonlinearAnisotropic { a_tensor, c } => {
                model.a_tensor = Some(a_tensor.to_row_major().to_vec());
                model.c = Some(*c);
            }
        }
        let group = match &self.group_spec {
            GroupSpec::Named(name) => RawGroup {
                name: Some(name.clone()),
                ..RawGroup::default()
            },
            GroupSpec::Generators {
                generators,
                max_order,
            } => RawGroup {
                name: None,
                generators: Some(
                    generators
                        .iter()
                        .map(|g| g.to_row_major().to_vec())
                        .collect(),
                ),
                max_order: Some(*max_order),
            },
        };
        let checks = RawChecks {
            enabled: self
                .checks
                .iter()
                .map(|c| c.kind.as_str().to_string())
                .collect(),
            overrides: self
                .checks
                .iter()
                .filter(|c| c.overrides != CheckOverride::default())
                .map(|c| (c.kind.as_str().to_string(), c.overrides.clone()))
                .collect(),
        };
        let observers = match &self.observer_spec {
            ObserverSpec::Random(n) => RawObservers::Count(*n),
            ObserverSpec::Explicit(ms) => {
                RawObservers::Matrices(ms.iter().map(|m| m.to_row_major().to_vec()).collect())
            }
        };
        RawConfig {
            model,
            group,
            checks,
            run: RawRun {
                tol: Some(self.base.tol),
                seed: Some(self.base.seed.0),
                gradient_samples: Some(self.base.gradient_samples),
                theta_samples: Some(self.base.theta_samples.clone()),
                sample_count: Some(self.sample_count),
                observers: Some(observers),
            },
        }
    }

    /// [`Self::echo`] rendered as config-file text.
    pub fn echo_text(&self) -> String {
        toml::to_string(&self.echo()).expect("config echo is always representable in TOML")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupKind;

    const MINIMAL: &str = r#"
[model]
family = "linear_constant"
kappa0 = [1, 0, 0, 0, 1, 0, 0, 0, 1]

[group]
name = "trivial"

[checks]
enabled = ["symmetry"]
"#;

    fn key_of(e: ConfigError) -> String {
        match e {
            ConfigError::Validation { key, .. } => key,
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_resolves_defaults() {
        let sc = parse_config(MINIMAL).unwrap();
        assert_eq!(
            sc.model,
            ConstitutiveModel::LinearConstant {
                kappa0: Tensor2::identity()
            }
        );
        assert_eq!(sc.base.tol, 1e-9);
        assert_eq!(sc.base.seed, RngSeed(0));
        assert_eq!(sc.base.theta_samples, vec![0.5, 1.0, 300.0]);
        assert_eq!(sc.group.as_ref().unwrap().order(), Some(1));
        assert_eq!(sc.checks.len(), 1);
        assert_eq!(sc.observers.len(), DEFAULT_OBSERVER_COUNT);
    }

    #[test]
    fn generators_close_to_a_group() {
        let text = MINIMAL.replace(
            "name = \"trivial\"",
            "generators = [[0, -1, 0, 1, 0, 0, 0, 0, 1]]",
        );
        let sc = parse_config(&text).unwrap();
        assert_eq!(sc.group.unwrap().order(), Some(4));
    }

    #[test]
    fn low_precision_generators_are_snapped() {
        let text = MINIMAL.replace(
            "name = \"trivial\"",
            "generators = [[0.7071068, -0.7071068, 0, 0.7071068, 0.7071068, 0, 0, 0, 1]]",
        );
        let sc = parse_config(&text).unwrap();
        assert_eq!(sc.group.unwrap().order(), Some(8));
    }

    #[test]
    fn irrational_generator_is_kept_as_closure_error() {
        let (s, c) = 1f64.sin_cos();
        let text = MINIMAL.replace(
            "name = \"trivial\"",
            &format!(
                "generators = [[{c}, {}, 0, {s}, {c}, 0, 0, 0, 1]]\nmax_order = 50",
                -s
            ),
        );
        let sc = parse_config(&text).unwrap();
        assert_eq!(sc.group, Err(GroupError::ClosureOverflow { max_order: 50 }));
    }

    #[test]
    fn short_kappa_row_names_the_key() {
        let text = MINIMAL.replace("0, 0, 0, 1]", "0, 0, 1]");
        assert_eq!(key_of(parse_config(&text).unwrap_err()), "model.kappa0");
    }

    #[test]
    fn validation_errors() {
        let cases = [
            (MINIMAL.replace("linear_constant", "linear"), "model.family"),
            (
                MINIMAL.replace("\"trivial\"", "\"hexagonal\""),
                "group.name",
            ),
            (
                MINIMAL.replace("[\"symmetry\"]", "[\"symmetry\", \"bogus\"]"),
                "checks.enabled",
            ),
            (MINIMAL.replace("[\"symmetry\"]", "[]"), "checks.enabled"),
            (
                MINIMAL.replace("[\"symmetry\"]", "[\"symmetry\", \"symmetry\"]"),
                "checks.enabled",
            ),
            (
                format!("{MINIMAL}\n[run]\ntheta_samples = [1.0, 0.0]\n"),
                "run.theta_samples",
            ),
            (format!("{MINIMAL}\n[run]\ntol = -1.0\n"), "run.tol"),
            (
                format!("{MINIMAL}\n[run]\nobservers = 0\n"),
                "run.observers",
            ),
            (
                format!("{MINIMAL}\n[run]\nobservers = [[1, 0, 0, 0, 1, 0, 0, 0, 1.01]]\n"),
                "run.observers[0]",
            ),
            (
                MINIMAL.replace(
                    "name = \"trivial\"",
                    "generators = [[2, 0, 0, 0, 1, 0, 0, 0, 1]]",
                ),
                "group.generators[0]",
            ),
            (
                MINIMAL.replace("kappa0 = ", "a = 1.0\nkappa0 = "),
                "model.a",
            ),
        ];
        for (text, key) in cases {
            assert_eq!(key_of(parse_config(&text).unwrap_err()), key, "{text}");
        }
    }

    #[test]
    fn unknown_override_table_is_rejected() {
        let text = format!("{MINIMAL}\n[checks.nonsense]\ntol = 1e-3\n");
        assert_eq!(key_of(parse_config(&text).unwrap_err()), "checks.nonsense");
    }

    #[test]
    fn schur_rejected_for_nonlinear_models() {
        let text = r#"
[model]
family = "nonlinear_isotropic"
a = 1.0
b = 2.0
[checks]
enabled = ["schur"]
"#;
        assert_eq!(key_of(parse_config(text).unwrap_err()), "checks.enabled");
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = "[model]\nfamily = \"linear_constant\"\nkappa0 = [1, 2\n";
        match parse_config(text).unwrap_err() {
            ConfigError::Parse { line, .. } => assert!(line >= 3, "line {line}"),
            other => panic!("{other:?}"),
        }
        match parse_config("[model]\nfamily = \"linear_constant\"\nfoo = 1\n").unwrap_err() {
            ConfigError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overrides_beat_file_values() {
        let text = format!("{MINIMAL}\n[run]\nseed = 5\ntol = 1e-6\n");
        let sc = parse_config_with(
            &text,
            Overrides {
                seed: Some(9),
                tol: Some(1e-4),
            },
        )
        .unwrap();
        assert_eq!(sc.base.seed, RngSeed(9));
        assert_eq!(sc.base.tol, 1e-4);
        assert_eq!(sc.checks[0].cfg.tol, 1e-4);
    }

    #[test]
    fn per_check_overrides_apply() {
        let text = MINIMAL.replace("[\"symmetry\"]", "[\"symmetry\", \"isotropy\"]")
            + "\n[checks.isotropy]\ntol = 1e-6\nsample_count = 17\n";
        let sc = parse_config(&text).unwrap();
        assert_eq!(sc.checks[0].cfg.tol, 1e-9);
        assert_eq!(sc.checks[1].cfg.tol, 1e-6);
        assert_eq!(sc.checks[1].sample_count, 17);
    }

    #[test]
    fn full_orthogonal_group_uses_run_sample_count() {
        let text =
            MINIMAL.replace("\"trivial\"", "\"full_orthogonal\"") + "\n[run]\nsample_count = 12\n";
        let g = parse_config(&text).unwrap().group.unwrap();
        assert_eq!(g.kind(), GroupKind::FullOrthogonal);
        assert_eq!(g.sample_count(), Some(12));
    }

    #[test]
    fn echo_round_trips() {
        let texts = [
            MINIMAL.to_string(),
            r#"
[model]
family = "linear_temperature"
kappa0 = [0.1, 0.2, 0.30000000000000004, 0.2, 1e-300, 0, 0.30000000000000004, 0, 3]
theta_coeffs = [1.0, 0.001, 1e-7]
[group]
generators = [[0, -1, 0, 1, 0, 0, 0, 0, 1], [1, 0, 0, 0, 0, -1, 0, 1, 0]]
max_order = 48
[checks]
enabled = ["symmetry", "isotropy", "schur"]
[checks.isotropy]
sample_count = 8
[run]
seed = 77
tol = 1.5e-9
observers = [[0, 1, 0, -1, 0, 0, 0, 0, 1]]
"#
            .to_string(),
        ];
        for text in texts {
            let sc = parse_config(&text).unwrap();
            let again = parse_config(&sc.echo_text()).unwrap();
            assert_eq!(again, sc);
        }
    }
}
