//! Constitutive maps of rigid heat conductors, stored factored through the
//! conductivity: `q = κ(Θ, ∇Θ)·∇Θ`.
//!
//! The state space holds only temperature and its gradient. No deformation
//! quantity is representable, which is what makes the conductor rigid.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tensor::{conjugate_tensor, transform_vector, ObserverChange, Tensor2, Vec3};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ModelError {
    #[error("temperature must be positive and finite, got {0}")]
    NonPositiveTemperature(f64),
    #[error("temperature gradient has non-finite components")]
    NonFiniteGradient,
    #[error("model parameter `{0}` is not finite")]
    NonFiniteParameter(&'static str),
    #[error("theta_coeffs must not be empty")]
    EmptyPolynomial,
    #[error("unknown model family `{0}`")]
    UnknownFamily(String),
}

/// A state `z = (Θ, ∇Θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatePoint {
    pub theta: f64,
    pub grad_theta: Vec3,
}

impl StatePoint {
    pub fn new(theta: f64, grad_theta: Vec3) -> Result<Self, ModelError> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(ModelError::NonPositiveTemperature(theta));
        }
        if !grad_theta.is_finite() {
            return Err(ModelError::NonFiniteGradient);
        }
        Ok(StatePoint { theta, grad_theta })
    }

    pub fn with_gradient(&self, grad_theta: Vec3) -> StatePoint {
        StatePoint {
            theta: self.theta,
            grad_theta,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    LinearConstant,
    LinearTemperature,
    NonlinearIsotropic,
    NonlinearAnisotropic,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::LinearConstant,
        Family::LinearTemperature,
        Family::NonlinearIsotropic,
        Family::NonlinearAnisotropic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::LinearConstant => "linear_constant",
            Family::LinearTemperature => "linear_temperature",
            Family::NonlinearIsotropic => "nonlinear_isotropic",
            Family::NonlinearAnisotropic => "nonlinear_anisotropic",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Family::LinearConstant => "κ = kappa0",
            Family::LinearTemperature => "κ = (Σ c_k Θ^k)·kappa0",
            Family::NonlinearIsotropic => "κ = (a + b·|∇Θ|²)·1",
            Family::NonlinearAnisotropic => "κ = a_tensor + c·(∇Θ ⊗ ∇Θ)",
        }
    }

    /// Whether κ depends on the gradient.
    pub fn is_nonlinear(self) -> bool {
        matches!(
            self,
            Family::NonlinearIsotropic | Family::NonlinearAnisotropic
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, ModelError> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| ModelError::UnknownFamily(s.to_string()))
    }
}

/// The constitutive map `z ↦ q` of a rigid heat conductor.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstitutiveModel {
    LinearConstant {
        kappa0: Tensor2,
    },
    /// `κ(Θ) = p(Θ)·kappa0` with `p(Θ) = Σ theta_coeffs[k]·Θ^k`.
    LinearTemperature {
        kappa0: Tensor2,
        theta_coeffs: Vec<f64>,
    },
    NonlinearIsotropic {
        a: f64,
        b: f64,
    },
    NonlinearAnisotropic {
        a_tensor: Tensor2,
        c: f64,
    },
}

impl ConstitutiveModel {
    pub fn family(&self) -> Family {
        match self {
            ConstitutiveModel::LinearConstant { .. } => Family::LinearConstant,
            ConstitutiveModel::LinearTemperature { .. } => Family::LinearTemperature,
            ConstitutiveModel::NonlinearIsotropic { .. } => Family::NonlinearIsotropic,
            ConstitutiveModel::NonlinearAnisotropic { .. } => Family::NonlinearAnisotropic,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let finite_tensor = |t: &Tensor2, name| {
            if t.is_finite() {
                Ok(())
            } else {
                Err(ModelError::NonFiniteParameter(name))
            }
        };
        let finite = |x: f64, name| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(ModelError::NonFiniteParameter(name))
            }
        };
        match self {
            ConstitutiveModel::LinearConstant { kappa0 } => finite_tensor(kappa0, "kappa0"),
            ConstitutiveModel::LinearTemperature {
                kappa0,
                theta_coeffs,
            } => {
                finite_tensor(kappa0, "kappa0")?;
                if theta_coeffs.is_empty() {
                    return Err(ModelError::EmptyPolynomial);
                }
                theta_coeffs
                    .iter()
                    .try_for_each(|&c| finite(c, "theta_coeffs"))
            }
            ConstitutiveModel::NonlinearIsotropic { a, b } => {
                finite(*a, "a")?;
                finite(*b, "b")
            }
            ConstitutiveModel::NonlinearAnisotropic { a_tensor, c } => {
                finite_tensor(a_tensor, "a_tensor")?;
                finite(*c, "c")
            }
        }
    }

    /// The conductivity `κ(Θ, ∇Θ)` in the canonical frame.
    pub fn kappa_of(&self, z: &StatePoint) -> Tensor2 {
        match self {
            ConstitutiveModel::LinearConstant { kappa0 } => *kappa0,
            ConstitutiveModel::LinearTemperature {
                kappa0,
                theta_coeffs,
            } => {
                let p = theta_coeffs
                    .iter()
                    .rev()
                    .fold(0.0, |acc, &c| acc * z.theta + c);
                *kappa0 * p
            }
            ConstitutiveModel::NonlinearIsotropic { a, b } => {
                Tensor2::scalar(a + b * z.grad_theta.norm_sq())
            }
            ConstitutiveModel::NonlinearAnisotropic { a_tensor, c } => {
                *a_tensor + z.grad_theta.outer(&z.grad_theta) * *c
            }
        }
    }

    /// Heat flux `q = κ(Θ, ∇Θ)·∇Θ`; exactly zero for a zero gradient.
    pub fn evaluate(&self, z: &StatePoint) -> Vec3 {
        if z.grad_theta == Vec3::ZERO {
            return Vec3::ZERO;
        }
        self.kappa_of(z).mul_vec(&z.grad_theta)
    }

    /// Conductivity tensor when it does not depend on the gradient.
    pub fn gradient_independent_kappa(&self, theta: f64) -> Option<Tensor2> {
        if self.family().is_nonlinear() {
            return None;
        }
        Some(self.kappa_of(&StatePoint {
            theta,
            grad_theta: Vec3::ZERO,
        }))
    }
}

/// Small set of representative models spanning every family and both
/// isotropic and anisotropic behaviour.
pub fn reference_models() -> Vec<(&'static str, ConstitutiveModel)> {
    vec![
        (
            "anisotropic_diag_1_2_3",
            ConstitutiveModel::LinearConstant {
                kappa0: Tensor2::diag(1.0, 2.0, 3.0),
            },
        ),
        (
            "isotropic_2.5",
            ConstitutiveModel::LinearConstant {
                kappa0: Tensor2::scalar(2.5),
            },
        ),
        (
            "transverse_temperature",
            ConstitutiveModel::LinearTemperature {
                kappa0: Tensor2::diag(2.0, 2.0, 5.0),
                theta_coeffs: vec![1.0, 0.01],
            },
        ),
        (
            "nonlinear_isotropic",
            ConstitutiveModel::NonlinearIsotropic { a: 1.0, b: 2.0 },
        ),
        (
            "nonlinear_anisotropic",
            ConstitutiveModel::NonlinearAnisotropic {
                a_tensor: Tensor2::diag(1.0, 2.0, 3.0),
                c: 1.0,
            },
        ),
    ]
}

/// One observer's component representation of a tensorial constitutive map.
///
/// `observer` carries `Q` with `v* = Q·v`. Arguments and results of the
/// methods are components in the observer's basis; temperature is a scalar
/// and is the same for every observer.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentMap {
    pub model: ConstitutiveModel,
    pub observer: ObserverChange,
}

impl ComponentMap {
    pub fn new(model: ConstitutiveModel, observer: ObserverChange) -> Self {
        ComponentMap { model, observer }
    }

    fn physical_state(&self, z_star: &StatePoint) -> StatePoint {
        z_star.with_gradient(transform_vector(
            &self.observer.inverse(),
            &z_star.grad_theta,
        ))
    }

    /// Flux components `q*` for gradient components `∇Θ*`.
    pub fn evaluate_components(&self, z_star: &StatePoint) -> Vec3 {
        let q = self.model.evaluate(&self.physical_state(z_star));
        transform_vector(&self.observer, &q)
    }

    /// Conductivity components `κ* = Q·κ·Qᵀ` at gradient components `∇Θ*`.
    pub fn kappa_components(&self, z_star: &StatePoint) -> Tensor2 {
        let kappa = self.model.kappa_of(&self.physical_state(z_star));
        conjugate_tensor(&self.observer, &kappa)
    }
}
