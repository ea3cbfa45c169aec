//! Blowing up a closed stratum of the special fiber.
//!
//! Combinatorially this is the stellar subdivision of the dual complex at the
//! face `J`. Classes follow the blow-up relation
//! `[Bl_Z W] = [W] + (L + ... + L^(c-1)) [Z]` for a center of codimension `c`,
//! and the exceptional divisor over `Z` is a `P^(c-1)`-bundle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ring::VarElement;
use crate::snc::{Component, ComponentId, Face, SncModel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupMove {
    pub center: Face,
    pub new_id: ComponentId,
}

impl BlowupMove {
    pub fn new(center: Face, new_id: ComponentId) -> Self {
        BlowupMove { center, new_id }
    }
}

/// `L + L^2 + ... + L^(c-1)`.
fn exceptional_excess(c: usize) -> VarElement {
    VarElement::l_geometric(c as u32) - VarElement::one()
}

pub fn blow_up_stratum(model: &SncModel, mv: &BlowupMove) -> Result<SncModel> {
    let viol = model.structural_violations();
    if !viol.is_empty() {
        return Err(Error::InvalidModel(viol));
    }
    let center = &mv.center;
    if center.len() < 2 {
        return Err(Error::InvalidCenter(format!(
            "center {{{center}}} has fewer than two components"
        )));
    }
    if model.stratum(center).is_none() {
        return Err(Error::InvalidCenter(format!(
            "stratum {{{center}}} is empty"
        )));
    }
    if model.component_ids().any(|id| id == &mv.new_id) {
        return Err(Error::IdCollision(mv.new_id.to_string()));
    }

    let mut strata: BTreeMap<Face, VarElement> = BTreeMap::new();

    // strict transforms of the faces not containing the center
    for (face, class) in model.strata() {
        if center.is_subset(face) {
            continue;
        }
        let mut class = class.clone();
        let c = center.difference(face).len();
        if c >= 2 {
            if let Some(z) = model.stratum(&face.union(center)) {
                class += &exceptional_excess(c) * z;
            }
        }
        strata.insert(face.clone(), class);
    }

    // faces through the exceptional divisor: {new} ∪ S with S ∪ J = T a stratum
    for (t, z) in model.strata() {
        if !center.is_subset(t) {
            continue;
        }
        let outside = t.difference(center);
        for part in center.subsets() {
            if &part == center {
                continue;
            }
            let s = outside.union(&part);
            let c = center.len() - part.len();
            let class = &VarElement::l_geometric(c as u32) * z;
            strata.insert(s.with(mv.new_id.clone()), class);
        }
    }

    let mut components: Vec<Component> = model.components().to_vec();
    let multiplicity = center
        .ids()
        .try_fold(0u32, |acc, id| {
            acc.checked_add(model.multiplicity(id).unwrap_or(0))
        })
        .ok_or_else(|| Error::InvalidCenter(format!("multiplicity of {{{center}}} overflows")))?;
    components.push(Component {
        id: mv.new_id.clone(),
        multiplicity,
    });
    Ok(SncModel::from_parts(
        model.generic_dim(),
        components,
        strata,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::snc::{face_of, ngon_model, numbered};

    fn v(s: &str) -> VarElement {
        s.parse().unwrap()
    }

    fn eps() -> ComponentId {
        ComponentId::new("e").unwrap()
    }

    fn two_lines() -> SncModel {
        SncModel::new(
            1,
            numbered(2).into_iter().map(|id| (id, 1, v("1 + L"))),
            [(face_of(&[1, 2]), v("1"))],
        )
    }

    #[test]
    fn blowing_up_a_node() {
        let m = two_lines();
        let out = blow_up_stratum(&m, &BlowupMove::new(face_of(&[1, 2]), eps())).unwrap();
        let f = |s: &str| s.parse::<Face>().unwrap();
        let faces: Vec<String> = out.strata().map(|(k, _)| k.to_string()).collect();
        assert_eq!(faces, ["1", "1,e", "2", "2,e", "e"]);
        assert_eq!(out.stratum(&f("1")), Some(&v("1 + L")));
        assert_eq!(out.stratum(&f("2")), Some(&v("1 + L")));
        assert_eq!(out.stratum(&f("e")), Some(&v("1 + L")));
        assert_eq!(out.stratum(&f("1,e")), Some(&v("1")));
        assert_eq!(out.stratum(&f("2,e")), Some(&v("1")));
        assert_eq!(out.stratum(&f("1,2")), None);
        assert_eq!(out.multiplicity(&eps()), Some(2));
        assert!(out.violations(&Catalog::default_catalog()).is_empty());
        assert_eq!(out.rho_var().unwrap(), v("1 + L"));
        assert_eq!(m.rho_var().unwrap(), v("1 + L"));
    }

    #[test]
    fn blowing_up_a_triangle_vertex() {
        let cat = Catalog::default_catalog();
        let m = ngon_model(3);
        let out = blow_up_stratum(&m, &BlowupMove::new(face_of(&[1, 2]), eps())).unwrap();
        assert_eq!(out.components().len(), 4);
        // the result is a 4-cycle
        assert_eq!(out.strata().filter(|(k, _)| k.len() == 2).count(), 4);
        assert!(out.violations(&cat).is_empty());
        assert!(out.rho_var().unwrap().is_zero());
        assert!(out.rho_sgt(&cat).unwrap().is_zero());
    }

    #[test]
    fn blowing_up_a_curve_in_a_threefold_fiber() {
        // two P^3 meeting along a P^2, third component meeting both in P^2s
        let cat = Catalog::default_catalog();
        let p3 = v("1 + L + L^2 + L^3");
        let m = SncModel::new(
            3,
            numbered(3).into_iter().map(|id| (id, 1, p3.clone())),
            [
                (face_of(&[1, 2]), v("1 + L + L^2")),
                (face_of(&[1, 3]), v("1 + L + L^2")),
                (face_of(&[2, 3]), v("1 + L + L^2")),
                (face_of(&[1, 2, 3]), v("1 + L")),
            ],
        );
        assert!(m.violations(&cat).is_empty());
        for center in [face_of(&[1, 2]), face_of(&[1, 2, 3])] {
            let out = blow_up_stratum(&m, &BlowupMove::new(center, eps())).unwrap();
            assert!(
                out.violations(&cat).is_empty(),
                "{:?}",
                out.violations(&cat)
            );
            assert_eq!(out.rho_var().unwrap(), m.rho_var().unwrap());
            assert_eq!(out.rho_sgt(&cat).unwrap(), m.rho_sgt(&cat).unwrap());
        }
    }

    #[test]
    fn rejects_bad_moves() {
        let m = two_lines();
        assert!(matches!(
            blow_up_stratum(&m, &BlowupMove::new(face_of(&[1]), eps())),
            Err(Error::InvalidCenter(_))
        ));
        assert!(matches!(
            blow_up_stratum(&m, &BlowupMove::new(face_of(&[1, 3]), eps())),
            Err(Error::InvalidCenter(_))
        ));
        assert!(matches!(
            blow_up_stratum(&m, &BlowupMove::new(face_of(&[1, 2]), ComponentId::from(2))),
            Err(Error::IdCollision(_))
        ));
    }

    #[test]
    fn repeated_blowups_preserve_rho() {
        let cat = Catalog::default_catalog();
        let m = two_lines();
        let once = blow_up_stratum(&m, &BlowupMove::new(face_of(&[1, 2]), eps())).unwrap();
        let center: Face = "1,e".parse().unwrap();
        let twice = blow_up_stratum(
            &once,
            &BlowupMove::new(center, ComponentId::new("f").unwrap()),
        )
        .unwrap();
        assert!(twice.violations(&cat).is_empty());
        assert_eq!(twice.rho_var().unwrap(), m.rho_var().unwrap());
        assert_eq!(twice.rho_sgt(&cat).unwrap(), m.rho_sgt(&cat).unwrap());
    }
}
