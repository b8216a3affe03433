//! Material symmetry groups: finite point groups built by closure, a small
//! named catalog, and a sampled stand-in for the full orthogonal group.

use std::f64::consts::PI;

use thiserror::Error;

use crate::tensor::{is_orthogonal, random_orthogonal, RngSeed, Tensor2, Vec3, USER_ORTH_TOL};

/// Elements closer than this in max norm are the same element.
pub const ELEMENT_MERGE_TOL: f64 = 1e-6;
/// Tolerance for the group axioms of a finite group.
pub const GROUP_AXIOM_TOL: f64 = 1e-9;
pub const DEFAULT_SAMPLE_COUNT: usize = 256;
pub const DEFAULT_MAX_ORDER: usize = 1000;

/// Names accepted by [`catalog_lookup`]. `transverse_z_<n>` takes the fold as a suffix.
pub const CATALOG_NAMES: &[(&str, &str)] = &[
    ("trivial", "identity only (order 1)"),
    ("z4", "4-fold rotations about z (order 4)"),
    ("transverse_z_<n>", "n-fold rotations about z (order n)"),
    ("orthotropic", "diagonal sign flips with det +1 (order 4)"),
    ("cubic_rotations", "proper rotations of the cube (order 24)"),
    (
        "full_orthogonal",
        "Haar-sampled O(3) plus a fixed adversarial set",
    ),
];

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GroupError {
    #[error("closure exceeded {max_order} elements; generators do not close to a finite group")]
    ClosureOverflow { max_order: usize },
    #[error("unknown group name `{0}`")]
    UnknownGroupName(String),
    #[error("generator {index} is not orthogonal")]
    NotOrthogonal { index: usize },
    #[error("max_order must be at least 1")]
    ZeroMaxOrder,
    #[error("sample_count must be at least 1")]
    ZeroSampleCount,
    #[error("element set violates the group axioms: {0}")]
    NotAGroup(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Finite,
    FullOrthogonal,
}

#[derive(Clone, Debug, PartialEq)]
enum Members {
    Finite(Vec<Tensor2>),
    FullOrthogonal { sample_count: usize },
}

/// A symmetry group `G ⊂ O(3)`, stored in the spatial configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryGroup {
    name: String,
    members: Members,
}

impl SymmetryGroup {
    /// Builds a finite group from an explicit element list, checking every axiom.
    pub fn from_elements(
        name: impl Into<String>,
        elements: Vec<Tensor2>,
    ) -> Result<Self, GroupError> {
        if let Some(index) = elements
            .iter()
            .position(|h| !is_orthogonal(h, GROUP_AXIOM_TOL))
        {
            return Err(GroupError::NotOrthogonal { index });
        }
        if find(&elements, &Tensor2::identity(), GROUP_AXIOM_TOL).is_none() {
            return Err(GroupError::NotAGroup("identity missing"));
        }
        for (i, a) in elements.iter().enumerate() {
            if elements[i + 1..]
                .iter()
                .any(|b| (*a - *b).max_norm() <= ELEMENT_MERGE_TOL)
            {
                return Err(GroupError::NotAGroup("duplicate elements"));
            }
            if find(&elements, &a.transpose(), GROUP_AXIOM_TOL).is_none() {
                return Err(GroupError::NotAGroup("not closed under inverses"));
            }
            for b in &elements {
                if find(&elements, &(*a * *b), GROUP_AXIOM_TOL).is_none() {
                    return Err(GroupError::NotAGroup("not closed under products"));
                }
            }
        }
        Ok(SymmetryGroup {
            name: name.into(),
            members: Members::Finite(elements),
        })
    }

    pub fn full_orthogonal(sample_count: usize) -> Result<Self, GroupError> {
        if sample_count == 0 {
            return Err(GroupError::ZeroSampleCount);
        }
        Ok(SymmetryGroup {
            name: "full_orthogonal".into(),
            members: Members::FullOrthogonal { sample_count },
        })
    }

    pub fn trivial() -> Self {
        SymmetryGroup {
            name: "trivial".into(),
            members: Members::Finite(vec![Tensor2::identity()]),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> GroupKind {
        match self.members {
            Members::Finite(_) => GroupKind::Finite,
            Members::FullOrthogonal { .. } => GroupKind::FullOrthogonal,
        }
    }

    /// Elements of a finite group; empty for the sampled full orthogonal group.
    pub fn elements(&self) -> &[Tensor2] {
        match &self.members {
            Members::Finite(e) => e,
            Members::FullOrthogonal { .. } => &[],
        }
    }

    /// Group order for finite groups.
    pub fn order(&self) -> Option<usize> {
        match &self.members {
            Members::Finite(e) => Some(e.len()),
            Members::FullOrthogonal { .. } => None,
        }
    }

    pub fn sample_count(&self) -> Option<usize> {
        match self.members {
            Members::Finite(_) => None,
            Members::FullOrthogonal { sample_count } => Some(sample_count),
        }
    }

    pub fn contains(&self, h: &Tensor2) -> bool {
        match &self.members {
            Members::Finite(e) => find(e, h, ELEMENT_MERGE_TOL).is_some(),
            Members::FullOrthogonal { .. } => is_orthogonal(h, GROUP_AXIOM_TOL),
        }
    }

    /// The same group expressed in a rotated frame: every `H` becomes `V·H·Vᵀ`.
    pub fn conjugated(&self, frame: &Tensor2) -> SymmetryGroup {
        match &self.members {
            Members::Finite(e) => SymmetryGroup {
                name: self.name.clone(),
                members: Members::Finite(
                    e.iter().map(|h| *frame * *h * frame.transpose()).collect(),
                ),
            },
            Members::FullOrthogonal { .. } => self.clone(),
        }
    }
}

fn find(elements: &[Tensor2], h: &Tensor2, tol: f64) -> Option<usize> {
    elements.iter().position(|e| (*e - *h).max_norm() <= tol)
}

/// Smallest finite group containing `generators`.
///
/// Breadth-first: every new element is multiplied by each generator until
/// nothing new appears. For orthogonal generators of a finite group this
/// reaches every product, since inverses are positive powers.
pub fn generate_closure(
    generators: &[Tensor2],
    max_order: usize,
) -> Result<SymmetryGroup, GroupError> {
    if max_order == 0 {
        return Err(GroupError::ZeroMaxOrder);
    }
    if let Some(index) = generators
        .iter()
        .position(|g| !is_orthogonal(g, USER_ORTH_TOL))
    {
        return Err(GroupError::NotOrthogonal { index });
    }
    let mut elements = vec![Tensor2::identity()];
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier];
        frontier += 1;
        for g in generators {
            let p = current * *g;
            if find(&elements, &p, ELEMENT_MERGE_TOL).is_none() {
                elements.push(p);
                if elements.len() > max_order {
                    return Err(GroupError::ClosureOverflow { max_order });
                }
            }
        }
    }
    Ok(SymmetryGroup {
        name: "generated".into(),
        members: Members::Finite(elements),
    })
}

/// Looks up a named group; `full_orthogonal` gets the default sample count.
pub fn catalog_lookup(name: &str) -> Result<SymmetryGroup, GroupError> {
    catalog_lookup_with_samples(name, DEFAULT_SAMPLE_COUNT)
}

pub fn catalog_lookup_with_samples(
    name: &str,
    sample_count: usize,
) -> Result<SymmetryGroup, GroupError> {
    let unknown = || GroupError::UnknownGroupName(name.to_string());
    let group = match name {
        "trivial" => SymmetryGroup::trivial(),
        "z4" => generate_closure(&[Tensor2::quarter_turns(2, 1)], 4)?,
        "orthotropic" => generate_closure(
            &[
                Tensor2::diag(1.0, -1.0, -1.0),
                Tensor2::diag(-1.0, 1.0, -1.0),
            ],
            4,
        )?,
        "cubic_rotations" => generate_closure(
            &[Tensor2::quarter_turns(2, 1), Tensor2::quarter_turns(0, 1)],
            24,
        )?,
        "full_orthogonal" => return SymmetryGroup::full_orthogonal(sample_count),
        _ => {
            let n: usize = name
                .strip_prefix("transverse_z_")
                .and_then(|n| n.parse().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(unknown)?;
            let g = Tensor2::rotation(Vec3::axis(2), 2.0 * PI / n as f64);
            generate_closure(&[g], n)?
        }
    };
    Ok(group.with_name(name))
}

/// Fixed elements that expose axis-aligned anisotropy deterministically:
/// identity, central inversion, 90°/120°/180° about each axis, and one
/// rotation about an irrational direction.
pub fn adversarial_set() -> Vec<Tensor2> {
    let mut set = vec![Tensor2::identity(), Tensor2::scalar(-1.0)];
    for axis in 0..3 {
        set.push(Tensor2::quarter_turns(axis, 1));
        set.push(Tensor2::rotation(Vec3::axis(axis), 2.0 * PI / 3.0));
        set.push(Tensor2::quarter_turns(axis, 2));
    }
    set.push(Tensor2::rotation(
        Vec3::new(1.0, 2f64.sqrt(), 3f64.sqrt()),
        1.0,
    ));
    set
}

/// Elements to test a constitutive map against. For the full orthogonal
/// group the adversarial set comes first, then `sample_count` Haar draws
/// over all of O(3) (both determinants).
pub fn group_elements_for_check(g: &SymmetryGroup, seed: RngSeed) -> Vec<Tensor2> {
    match &g.members {
        Members::Finite(e) => e.clone(),
        Members::FullOrthogonal { sample_count } => {
            let mut out = adversarial_set();
            out.extend((0..*sample_count as u64).map(|i| random_orthogonal(seed.derive(i), false)));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: naive closure over all pairwise products.
    fn naive_order(gens: &[Tensor2]) -> usize {
        let mut set = vec![Tensor2::identity()];
        set.extend_from_slice(gens);
        loop {
            let mut grew = false;
            let snapshot = set.clone();
            for a in &snapshot {
                for b in &snapshot {
                    let p = *a * *b;
                    if !set.iter().any(|e| (*e - p).max_norm() < 1e-6) {
                        set.push(p);
                        grew = true;
                    }
                }
            }
            if !grew {
                return set.len();
            }
        }
    }

    fn assert_group_axioms(g: &SymmetryGroup) {
        let e = g.elements();
        for a in e {
            assert!(is_orthogonal(a, 1e-9));
            assert!(g.contains(&a.transpose()));
            for b in e {
                assert!(find(e, &(*a * *b), 1e-9).is_some());
            }
        }
        SymmetryGroup::from_elements(g.name(), e.to_vec()).unwrap();
    }

    #[test]
    fn closure_orders() {
        let rz = Tensor2::quarter_turns(2, 1);
        let rx = Tensor2::quarter_turns(0, 1);
        assert_eq!(generate_closure(&[rz], 48).unwrap().order(), Some(4));
        assert_eq!(naive_order(&[rz]), 4);
        assert_eq!(generate_closure(&[], 1).unwrap().order(), Some(1));
        let cubic = generate_closure(&[rz, rx], 48).unwrap();
        assert_eq!(cubic.order(), Some(24));
        assert_eq!(naive_order(&[rz, rx]), 24);
        assert_group_axioms(&cubic);
    }

    #[test]
    fn irrational_rotation_overflows() {
        let g = Tensor2::rotation(Vec3::axis(2), 1.0);
        assert_eq!(
            generate_closure(&[g], 1000),
            Err(GroupError::ClosureOverflow { max_order: 1000 })
        );
    }

    #[test]
    fn closure_rejects_bad_input() {
        assert_eq!(
            generate_closure(&[Tensor2::diag(1.0, 2.0, 1.0)], 10),
            Err(GroupError::NotOrthogonal { index: 0 })
        );
        assert_eq!(generate_closure(&[], 0), Err(GroupError::ZeroMaxOrder));
    }

    #[test]
    fn closure_is_idempotent() {
        for name in ["z4", "orthotropic", "cubic_rotations", "transverse_z_6"] {
            let g = catalog_lookup(name).unwrap();
            let again = generate_closure(g.elements(), 100).unwrap();
            assert_eq!(again.order(), g.order(), "{name}");
        }
    }

    #[test]
    fn catalog_orders_and_axioms() {
        for (name, order) in [
            ("trivial", 1),
            ("z4", 4),
            ("orthotropic", 4),
            ("cubic_rotations", 24),
            ("transverse_z_3", 3),
            ("transverse_z_12", 12),
        ] {
            let g = catalog_lookup(name).unwrap();
            assert_eq!(g.order(), Some(order), "{name}");
            assert_eq!(g.name(), name);
            assert_group_axioms(&g);
        }
    }

    #[test]
    fn orthotropic_is_even_sign_flips() {
        // Enumerate all diagonal sign patterns, keep the ones with det +1.
        let g = catalog_lookup("orthotropic").unwrap();
        let mut expected = 0;
        for bits in 0..8 {
            let s = |k: u32| if bits >> k & 1 == 1 { -1.0 } else { 1.0 };
            let d = Tensor2::diag(s(0), s(1), s(2));
            if d.det() > 0.0 {
                expected += 1;
                assert!(g.contains(&d));
            }
        }
        assert_eq!(g.order(), Some(expected));
    }

    #[test]
    fn catalog_errors_and_full_orthogonal() {
        for bad in [
            "cubic",
            "transverse_z_",
            "transverse_z_0",
            "transverse_z_x",
            "",
        ] {
            assert_eq!(
                catalog_lookup(bad),
                Err(GroupError::UnknownGroupName(bad.to_string()))
            );
        }
        let o = catalog_lookup("full_orthogonal").unwrap();
        assert_eq!(o.kind(), GroupKind::FullOrthogonal);
        assert_eq!(o.sample_count(), Some(DEFAULT_SAMPLE_COUNT));
        assert_eq!(
            SymmetryGroup::full_orthogonal(0),
            Err(GroupError::ZeroSampleCount)
        );
    }

    #[test]
    fn elements_for_check() {
        let z4 = catalog_lookup("z4").unwrap();
        assert_eq!(group_elements_for_check(&z4, RngSeed(3)), z4.elements());
        let o = SymmetryGroup::full_orthogonal(100).unwrap();
        let a = group_elements_for_check(&o, RngSeed(9));
        let b = group_elements_for_check(&o, RngSeed(9));
        assert_eq!(a.len(), 100 + adversarial_set().len());
        assert_eq!(a, b);
        assert!(a.iter().all(|h| is_orthogonal(h, 1e-12)));
        assert!(a.iter().any(|h| h.det() < 0.0));
    }

    #[test]
    fn from_elements_detects_violations() {
        let rz = Tensor2::quarter_turns(2, 1);
        assert_eq!(
            SymmetryGroup::from_elements("x", vec![rz]),
            Err(GroupError::NotAGroup("identity missing"))
        );
        assert_eq!(
            SymmetryGroup::from_elements("x", vec![Tensor2::identity(), rz]),
            Err(GroupError::NotAGroup("not closed under inverses"))
        );
        assert_eq!(
            SymmetryGroup::from_elements("x", vec![Tensor2::identity(), Tensor2::identity()]),
            Err(GroupError::NotAGroup("duplicate elements"))
        );
    }

    #[test]
    fn conjugated_group_keeps_axioms() {
        let frame = random_orthogonal(RngSeed(5), true);
        let g = catalog_lookup("cubic_rotations")
            .unwrap()
            .conjugated(&frame);
        assert_group_axioms(&g);
    }
}
