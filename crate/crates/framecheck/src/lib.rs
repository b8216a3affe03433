//! Numerical verification of material symmetry, material frame
//! indifference and isotropy for constitutive maps of rigid heat conductors.
//!
//! The three properties are checked independently. Frame indifference
//! concerns how component representations of one tensorial map relate
//! between observers; it holds for anisotropic conductors too and so does
//! not imply isotropy. Isotropy is material symmetry under the whole
//! orthogonal group, and only for isotropic materials do component maps
//! coincide across observers.

pub mod checks;
pub mod config;
pub mod groups;
pub mod model;
pub mod report;
pub mod tensor;

pub use checks::{
    check_frame_indifference, check_isotropy, check_observer_independence, check_symmetry,
    check_zero_map, classify_linear_symmetry, schur_reduce, CheckConfig, CheckError, CheckResult,
    SchurReduction, SymmetryClass, Witness,
};
pub use config::{parse_config, parse_config_with, ConfigError, Overrides, SuiteConfig};
pub use groups::{
    catalog_lookup, generate_closure, group_elements_for_check, GroupError, GroupKind,
    SymmetryGroup,
};
pub use model::{ComponentMap, ConstitutiveModel, Family, ModelError, StatePoint};
pub use report::{emit_report, run_suite, ReportFormat, SuiteReport};
pub use tensor::{
    conjugate_tensor, is_orthogonal, random_orthogonal, transform_vector, ObserverChange, RngSeed,
    Tensor2, Vec3,
};
