//! Sampling-based checkers for material symmetry, frame indifference,
//! isotropy, observer independence of components, the zero-map consequence
//! and the reduction of invariant constant tensors to `α·1`.
//!
//! Every checker enumerates group elements (and observers) in a fixed order
//! and states in seed order, keeps the running maximum residual, and reports
//! the first `(element, state)` pair that attains it.

use nalgebra::{Matrix3, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{
    catalog_lookup, group_elements_for_check, SymmetryGroup, DEFAULT_SAMPLE_COUNT,
};
use crate::model::{ComponentMap, ConstitutiveModel, StatePoint};
use crate::tensor::{transform_vector, ObserverChange, RngSeed, Tensor2, Vec3};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_THETA_SAMPLES: [f64; 3] = [0.5, 1.0, 300.0];
pub const DEFAULT_GRADIENT_SAMPLES: usize = 32;
/// Gradient magnitudes swept for gradient-dependent conductivities.
pub const NONLINEAR_MAGNITUDES: [f64; 3] = [0.1, 1.0, 10.0];
/// Largest asymmetry `max |κ - κᵀ|` the classifier accepts.
pub const SYMMETRY_TOL: f64 = 1e-9;

const GRADIENT_STREAM: u64 = u64::MAX;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum CheckError {
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("theta_samples must be non-empty")]
    NoThetaSamples,
    #[error("theta sample {0} is not a positive temperature")]
    NonPositiveTheta(f64),
    #[error("gradient_samples must be at least 1")]
    NoGradientSamples,
    #[error("conductivity is not symmetric: max |κ - κᵀ| = {0:e}")]
    NotSymmetric(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub tol: f64,
    pub theta_samples: Vec<f64>,
    /// Random unit gradients drawn per check, in addition to the axes and zero.
    pub gradient_samples: usize,
    pub seed: RngSeed,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            tol: DEFAULT_TOL,
            theta_samples: DEFAULT_THETA_SAMPLES.to_vec(),
            gradient_samples: DEFAULT_GRADIENT_SAMPLES,
            seed: RngSeed(0),
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<(), CheckError> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CheckError::InvalidTolerance(self.tol));
        }
        if self.theta_samples.is_empty() {
            return Err(CheckError::NoThetaSamples);
        }
        if let Some(&t) = self
            .theta_samples
            .iter()
            .find(|t| !(t.is_finite() && **t > 0.0))
        {
            return Err(CheckError::NonPositiveTheta(t));
        }
        if self.gradient_samples == 0 {
            return Err(CheckError::NoGradientSamples);
        }
        Ok(())
    }

    pub fn with_tol(&self, tol: f64) -> CheckConfig {
        CheckConfig {
            tol,
            ..self.clone()
        }
    }
}

/// The concrete sample at which a check attained its maximum residual.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub group_element: Tensor2,
    pub observer: Option<ObserverChange>,
    pub state: StatePoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub passed: bool,
    pub max_residual: f64,
    /// Present iff the check failed.
    pub witness: Option<Witness>,
    pub samples_used: usize,
    pub note: Option<String>,
}

impl CheckResult {
    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

struct MaxTracker {
    max: f64,
    witness: Option<Witness>,
    samples: usize,
}

impl MaxTracker {
    fn new() -> Self {
        MaxTracker {
            max: 0.0,
            witness: None,
            samples: 0,
        }
    }

    fn observe(&mut self, residual: f64, witness: impl FnOnce() -> Witness) {
        self.samples += 1;
        let r = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        if r > self.max {
            self.max = r;
            self.witness = Some(witness());
        }
    }

    fn finish(self, tol: f64) -> CheckResult {
        let passed = self.max <= tol;
        CheckResult {
            passed,
            max_residual: self.max,
            witness: if passed { None } else { self.witness },
            samples_used: self.samples,
            note: None,
        }
    }
}

/// `max |lhs - reference| / (1 + max |reference|)`.
pub fn relative_residual(lhs: &Vec3, reference: &Vec3) -> f64 {
    (*lhs - *reference).max_norm() / (1.0 + reference.max_norm())
}

pub fn relative_tensor_residual(lhs: &Tensor2, reference: &Tensor2) -> f64 {
    (*lhs - *reference).max_norm() / (1.0 + reference.max_norm())
}

/// Unit gradients: zero, the three axes, then `cfg.gradient_samples` points
/// uniform on the sphere. Gradient-dependent families repeat every nonzero
/// direction at each magnitude in [`NONLINEAR_MAGNITUDES`].
pub fn sample_gradients(cfg: &CheckConfig, nonlinear: bool) -> Vec<Vec3> {
    let mut rng = cfg.seed.derive(GRADIENT_STREAM).rng();
    let mut dirs: Vec<Vec3> = (0..3).map(Vec3::axis).collect();
    while dirs.len() < 3 + cfg.gradient_samples {
        let v = Vec3(std::array::from_fn(|_| rng.sample(StandardNormal)));
        let n = v.norm();
        if n > 1e-12 {
            dirs.push(v * (1.0 / n));
        }
    }
    let mut out = vec![Vec3::ZERO];
    if nonlinear {
        for m in NONLINEAR_MAGNITUDES {
            out.extend(dirs.iter().map(|d| *d * m));
        }
    } else {
        out.extend(dirs);
    }
    out
}

/// Every temperature sample crossed with every gradient sample.
pub fn sample_states(model: &ConstitutiveModel, cfg: &CheckConfig) -> Vec<StatePoint> {
    let grads = sample_gradients(cfg, model.family().is_nonlinear());
    cfg.theta_samples
        .iter()
        .flat_map(|&theta| {
            grads.iter().map(move |&g| StatePoint {
                theta,
                grad_theta: g,
            })
        })
        .collect()
}

/// Both forms of the symmetry axiom at one `(H, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryResiduals {
    /// `Hᵀ·M(Θ, H·∇Θ) - M(Θ, ∇Θ)`.
    pub flux_form: Vec3,
    /// `H·κ(Θ, ∇Θ) - κ(Θ, H·∇Θ)·H`.
    pub kappa_form: Tensor2,
    /// `M(Θ, ∇Θ)`, the normalizing reference.
    pub reference: Vec3,
    /// Relative residual of the flux form.
    pub flux_relative: f64,
    /// Relative residual reached through the conductivity form, `|Hᵀ·D·∇Θ|`.
    pub kappa_relative: f64,
}

pub fn symmetry_residuals(
    model: &ConstitutiveModel,
    h: &Tensor2,
    z: &StatePoint,
) -> SymmetryResiduals {
    let hz = z.with_gradient(h.mul_vec(&z.grad_theta));
    let reference = model.evaluate(z);
    let lhs = h.transpose().mul_vec(&model.evaluate(&hz));
    let flux_form = lhs - reference;
    let kappa_form = *h * model.kappa_of(z) - model.kappa_of(&hz) * *h;
    // Hᵀ·M(H·z) - M(z) = -Hᵀ·D·∇Θ with D the conductivity-form residual.
    let via_kappa = (h.transpose() * kappa_form).mul_vec(&z.grad_theta);
    let scale = 1.0 + reference.max_norm();
    SymmetryResiduals {
        flux_form,
        kappa_form,
        reference,
        flux_relative: flux_form.max_norm() / scale,
        kappa_relative: via_kappa.max_norm() / scale,
    }
}

/// Material symmetry under `g`: `Hᵀ·M(H·z) = M(z)` for every sampled `H`, `z`.
pub fn check_symmetry(
    model: &ConstitutiveModel,
    g: &SymmetryGroup,
    cfg: &CheckConfig,
) -> CheckResult {
    let elements = group_elements_for_check(g, cfg.seed);
    let states = sample_states(model, cfg);
    let mut t = MaxTracker::new();
    for h in &elements {
        for z in &states {
            let r = symmetry_residuals(model, h, z).flux_relative;
            t.observe(r, || Witness {
                group_element: *h,
                observer: None,
                state: *z,
            });
        }
    }
    t.finish(cfg.tol)
}

/// Symmetry under the full orthogonal group, decided on Haar samples plus
/// the adversarial set. A pass is sampled evidence; a fail is a proof.
pub fn check_isotropy(
    model: &ConstitutiveModel,
    cfg: &CheckConfig,
    sample_count: usize,
) -> CheckResult {
    let g =
        SymmetryGroup::full_orthogonal(sample_count.max(1)).expect("sample count is at least one");
    check_symmetry(model, &g, cfg).with_note(
        "sampled over O(3): a pass is evidence of isotropy, a failure is a proof of anisotropy",
    )
}

pub const FRAME_INDIFFERENCE_NOTE: &str = "consistency check: holds for every model whose \
component maps derive from one observer-independent tensorial map; passing does not imply isotropy";

/// Transformation of component maps between observers.
///
/// For each observer `Q`, element `H` and state `z`, compares
/// `Qᵀ·M*(Q·H·∇Θ)` with `M(H·∇Θ)` and `Qᵀ·κ*(Θ, Q·H·∇Θ)·Q` with
/// `κ(Θ, H·∇Θ)`; the residual is the larger of the two.
///
/// # Panics
/// If `observers` is empty.
pub fn check_frame_indifference(
    model: &ConstitutiveModel,
    g: &SymmetryGroup,
    observers: &[ObserverChange],
    cfg: &CheckConfig,
) -> CheckResult {
    assert!(!observers.is_empty(), "at least one observer is required");
    let elements = group_elements_for_check(g, cfg.seed);
    let states = sample_states(model, cfg);
    let mut t = MaxTracker::new();
    for q in observers {
        let cm = ComponentMap::new(model.clone(), *q);
        let qt = q.matrix().transpose();
        for h in &elements {
            for z in &states {
                let hz = z.with_gradient(h.mul_vec(&z.grad_theta));
                let z_star = hz.with_gradient(transform_vector(q, &hz.grad_theta));
                let flux = qt.mul_vec(&cm.evaluate_components(&z_star));
                let kappa = qt * cm.kappa_components(&z_star) * *q.matrix();
                let r = relative_residual(&flux, &model.evaluate(&hz))
                    .max(relative_tensor_residual(&kappa, &model.kappa_of(&hz)));
                t.observe(r, || Witness {
                    group_element: *h,
                    observer: Some(*q),
                    state: *z,
                });
            }
        }
    }
    t.finish(cfg.tol).with_note(FRAME_INDIFFERENCE_NOTE)
}

/// Whether component maps coincide across observers: `M*_j(z) = M_j(z)` for
/// the same numeric arguments. Holds for isotropic materials only.
///
/// # Panics
/// If `observers` is empty.
pub fn check_observer_independence(
    model: &ConstitutiveModel,
    observers: &[ObserverChange],
    cfg: &CheckConfig,
) -> CheckResult {
    assert!(!observers.is_empty(), "at least one observer is required");
    let states = sample_states(model, cfg);
    let mut t = MaxTracker::new();
    for q in observers {
        let cm = ComponentMap::new(model.clone(), *q);
        for z in &states {
            let r = relative_residual(&cm.evaluate_components(z), &model.evaluate(z));
            t.observe(r, || Witness {
                group_element: Tensor2::identity(),
                observer: Some(*q),
                state: *z,
            });
        }
    }
    t.finish(cfg.tol)
        .with_note("component maps compared on identical arguments across observers")
}

/// `M(Θ, 0) = 0` at every temperature sample (absolute residual).
pub fn check_zero_map(model: &ConstitutiveModel, cfg: &CheckConfig) -> CheckResult {
    let mut t = MaxTracker::new();
    for &theta in &cfg.theta_samples {
        let z = StatePoint {
            theta,
            grad_theta: Vec3::ZERO,
        };
        t.observe(model.evaluate(&z).max_norm(), || Witness {
            group_element: Tensor2::identity(),
            observer: None,
            state: z,
        });
    }
    t.finish(cfg.tol)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchurReduction {
    pub is_isotropic_invariant: bool,
    /// `trace(L)/3`, present only when `L` is invariant.
    pub alpha: Option<f64>,
    /// Largest `max |Rᵀ·L·R - L|` over the sampled and adversarial `R`
    /// (absolute, in the units of `L`).
    pub residual: f64,
    /// The `R` attaining `residual` when `L` is not invariant.
    pub witness: Option<Tensor2>,
}

/// Tests `Rᵀ·L·R = L` over Haar samples and the adversarial set; an
/// invariant `L` must equal `(trace(L)/3)·1`.
pub fn schur_reduce(l: &Tensor2, cfg: &CheckConfig) -> SchurReduction {
    let g = SymmetryGroup::full_orthogonal(DEFAULT_SAMPLE_COUNT).expect("nonzero sample count");
    let mut residual = 0.0;
    let mut witness = None;
    for r in group_elements_for_check(&g, cfg.seed) {
        let d = (r.transpose() * *l * r - *l).max_norm();
        let d = if d.is_nan() { f64::INFINITY } else { d };
        if d > residual {
            residual = d;
            witness = Some(r);
        }
    }
    if residual > cfg.tol {
        return SchurReduction {
            is_isotropic_invariant: false,
            alpha: None,
            residual,
            witness,
        };
    }
    let alpha = l.trace() / 3.0;
    let off_scalar = (*l - Tensor2::scalar(alpha)).max_norm();
    if off_scalar > cfg.tol {
        return SchurReduction {
            is_isotropic_invariant: false,
            alpha: None,
            residual: residual.max(off_scalar),
            witness: None,
        };
    }
    SchurReduction {
        is_isotropic_invariant: true,
        alpha: Some(alpha),
        residual,
        witness: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryClass {
    Isotropic,
    TransverselyIsotropic,
    Orthotropic,
    /// Returned when the eigenvalue-based class fails its symmetry-group cross-check.
    Triclinic,
}

/// Classifies a symmetric constant conductivity by eigenvalue multiplicity,
/// then confirms the class with a symmetry check against the matching
/// catalog group rotated into the eigenframe.
pub fn classify_linear_symmetry(
    kappa0: &Tensor2,
    cfg: &CheckConfig,
) -> Result<SymmetryClass, CheckError> {
    let asym = (*kappa0 - kappa0.transpose()).max_norm();
    if asym > SYMMETRY_TOL {
        return Err(CheckError::NotSymmetric(asym));
    }
    let sym = (*kappa0 + kappa0.transpose()) * 0.5;
    let eig = SymmetricEigen::new(Matrix3::from_fn(|i, j| sym[(i, j)]));
    let mut pairs: Vec<(f64, Vec3)> = (0..3)
        .map(|k| {
            let v = eig.eigenvectors.column(k);
            (eig.eigenvalues[k], Vec3([v[0], v[1], v[2]]))
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let scale = 1.0 + pairs.iter().fold(0.0f64, |m, p| m.max(p.0.abs()));
    let same = |a: f64, b: f64| (a - b).abs() <= cfg.tol * scale;
    let low_pair = same(pairs[0].0, pairs[1].0);
    let high_pair = same(pairs[1].0, pairs[2].0);

    let model = ConstitutiveModel::LinearConstant { kappa0: *kappa0 };
    let (class, confirmed) = if low_pair && high_pair {
        let ok = check_isotropy(&model, cfg, DEFAULT_SAMPLE_COUNT).passed;
        (SymmetryClass::Isotropic, ok)
    } else if low_pair || high_pair {
        // The distinct eigenvector becomes the local z axis.
        let axis = if low_pair { 2 } else { 0 };
        let others: Vec<Vec3> = (0..3).filter(|&k| k != axis).map(|k| pairs[k].1).collect();
        let frame = proper_frame(others[0], others[1], pairs[axis].1);
        let g = transverse_group().conjugated(&frame);
        let ok = check_symmetry(&model, &g, cfg).passed;
        (SymmetryClass::TransverselyIsotropic, ok)
    } else {
        let frame = proper_frame(pairs[0].1, pairs[1].1, pairs[2].1);
        let g = catalog_lookup("orthotropic")
            .expect("catalog group")
            .conjugated(&frame);
        let ok = check_symmetry(&model, &g, cfg).passed;
        (SymmetryClass::Orthotropic, ok)
    };
    Ok(if confirmed {
        class
    } else {
        SymmetryClass::Triclinic
    })
}

fn transverse_group() -> SymmetryGroup {
    catalog_lookup("transverse_z_6").expect("catalog group")
}

fn proper_frame(c0: Vec3, c1: Vec3, c2: Vec3) -> Tensor2 {
    let frame = Tensor2::from_columns(c0, c1, c2);
    if frame.det() < 0.0 {
        Tensor2::from_columns(-c0, c1, c2)
    } else {
        frame
    }
}
