//! Builders for Kulikov type II and type III special fibers.
//!
//! Type II: a chain `V0 - V1 - ... - Vr` with rational ends, elliptic ruled
//! middle components and elliptic double curves. Type III: rational
//! components glued along rational curves with dual complex a triangulated
//! sphere.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::catalog::{rational_surface_class, Catalog, LabelKind};
use crate::error::{Error, Result};
use crate::ring::{SgtElement, VarElement};
use crate::snc::{ComponentId, Face, SncModel};

/// Label of the ruled surface used for middle components when none is given.
pub const DEFAULT_MIDDLE_LABEL: &str = "RuledE";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeIIData {
    pub r: u32,
    pub end_eulers: (i64, i64),
    pub elliptic_label: String,
    pub middle_label: String,
}

impl TypeIIData {
    pub fn new(r: u32, e0: i64, er: i64) -> Self {
        TypeIIData {
            r,
            end_eulers: (e0, er),
            elliptic_label: "E".into(),
            middle_label: DEFAULT_MIDDLE_LABEL.into(),
        }
    }
}

pub fn build_type_ii(d: &TypeIIData, catalog: &Catalog) -> Result<SncModel> {
    if d.r < 1 {
        return Err(Error::BadChain("r must be at least 1".into()));
    }
    let (e0, er) = d.end_eulers;
    for e in [e0, er] {
        if e < 3 {
            return Err(Error::BadChain(format!(
                "rational end with Euler number {e} (minimum is 3)"
            )));
        }
    }
    let ell = catalog.label(&d.elliptic_label)?;
    if ell.kind != LabelKind::Opaque || ell.dim != 1 || ell.euler != 0 {
        return Err(Error::BadChain(format!(
            "[{}] is not an opaque curve of Euler number 0",
            d.elliptic_label
        )));
    }
    let mid_entry = catalog.entry(&d.middle_label)?;
    if mid_entry.label.dim != 2 {
        return Err(Error::BadChain(format!(
            "[{}] is not a surface",
            d.middle_label
        )));
    }
    let middle = mid_entry
        .var_expansion
        .clone()
        .unwrap_or_else(|| VarElement::label(&d.middle_label));

    let id = |i: u32| ComponentId::from(i);
    let comps = (0..=d.r).map(|i| {
        let class = if i == 0 {
            rational_surface_class(e0)
        } else if i == d.r {
            rational_surface_class(er)
        } else {
            middle.clone()
        };
        (id(i), 1, class)
    });
    let curve = VarElement::label(&d.elliptic_label);
    let strata = (0..d.r).map(|i| (Face::new([id(i), id(i + 1)]), curve.clone()));
    Ok(SncModel::new(2, comps, strata))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeIIIData {
    pub vertices: Vec<(ComponentId, i64)>,
    pub edges: Vec<(ComponentId, ComponentId)>,
    pub faces: Vec<(ComponentId, ComponentId, ComponentId)>,
}

impl TypeIIIData {
    /// `V - E + F`.
    pub fn euler_count(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// `sum e_i - 4 #edges + 3 #faces`, the expected pt-coefficient of rho_sgt.
    pub fn expected_pt(&self) -> i64 {
        self.vertices.iter().map(|(_, e)| e).sum::<i64>() - 4 * self.edges.len() as i64
            + 3 * self.faces.len() as i64
    }

    fn check(&self) -> Result<(BTreeSet<Face>, BTreeSet<Face>)> {
        let mut verts = BTreeSet::new();
        for (v, _) in &self.vertices {
            if !verts.insert(v.clone()) {
                return Err(Error::NotAComplex(format!("vertex {v} listed twice")));
            }
        }
        let mut edges = BTreeSet::new();
        for (a, b) in &self.edges {
            let f = Face::new([a.clone(), b.clone()]);
            if f.len() != 2 {
                return Err(Error::NotAComplex(format!("degenerate edge {{{a},{b}}}")));
            }
            for v in [a, b] {
                if !verts.contains(v) {
                    return Err(Error::NotAComplex(format!(
                        "edge {{{f}}} uses unknown vertex {v}"
                    )));
                }
            }
            if !edges.insert(f.clone()) {
                return Err(Error::NotAComplex(format!("edge {{{f}}} listed twice")));
            }
        }
        let mut faces = BTreeSet::new();
        for (a, b, c) in &self.faces {
            let f = Face::new([a.clone(), b.clone(), c.clone()]);
            if f.len() != 3 {
                return Err(Error::NotAComplex(format!(
                    "degenerate face {{{a},{b},{c}}}"
                )));
            }
            for v in f.ids() {
                let e = f.without(v);
                if !edges.contains(&e) {
                    return Err(Error::NotAComplex(format!(
                        "face {{{f}}} is missing edge {{{e}}}"
                    )));
                }
            }
            if !faces.insert(f.clone()) {
                return Err(Error::NotAComplex(format!("face {{{f}}} listed twice")));
            }
        }
        Ok((edges, faces))
    }
}

pub fn build_type_iii(d: &TypeIIIData) -> Result<SncModel> {
    let (edges, faces) = d.check()?;
    let comps = d
        .vertices
        .iter()
        .map(|(v, e)| (v.clone(), 1, rational_surface_class(*e)));
    let line = VarElement::l_geometric(2);
    let strata = edges
        .into_iter()
        .map(|f| (f, line.clone()))
        .chain(faces.into_iter().map(|f| (f, VarElement::one())));
    Ok(SncModel::new(2, comps, strata))
}

/// Warnings for a K3-type degeneration whose K0(sGT) specialization has a
/// nonzero point part, where the Euler bookkeeping `e = 0` would force zero.
pub fn euler_discrepancy_warning(rho: &SgtElement) -> Option<String> {
    let pt = rho.pt_coeff();
    if pt == BigInt::from(0) {
        return None;
    }
    let rest = rho.without_pt();
    Some(format!(
        "euler discrepancy: point part {} is nonzero (vanishing would follow from e = 0); retained; non-point part {rest}",
        SgtElement::from_int(pt)
    ))
}

/// Type II/III input files share the model grammar with a `kind` header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KulikovData {
    II(TypeIIData),
    III(TypeIIIData),
}

impl KulikovData {
    pub fn build(&self, catalog: &Catalog) -> Result<SncModel> {
        match self {
            KulikovData::II(d) => build_type_ii(d, catalog),
            KulikovData::III(d) => build_type_iii(d),
        }
    }

    /// Non-fatal observations about the input (type III Euler count).
    pub fn input_warnings(&self) -> Vec<String> {
        match self {
            KulikovData::III(d) if d.euler_count() != 2 => vec![format!(
                "dual complex has V - E + F = {} (a triangulated sphere has 2)",
                d.euler_count()
            )],
            _ => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cid(n: u32) -> ComponentId {
        ComponentId::from(n)
    }

    fn tetrahedron(e: i64) -> TypeIIIData {
        let vs = [1, 2, 3, 4];
        TypeIIIData {
            vertices: vs.iter().map(|&v| (cid(v), e)).collect(),
            edges: vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
                .into_iter()
                .map(|(a, b)| (cid(a), cid(b)))
                .collect(),
            faces: vec![(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
                .into_iter()
                .map(|(a, b, c)| (cid(a), cid(b), cid(c)))
                .collect(),
        }
    }

    #[test]
    fn type_ii_r1() {
        let cat = Catalog::default_catalog();
        let m = build_type_ii(&TypeIIData::new(1, 12, 12), &cat).unwrap();
        assert!(m.violations(&cat).is_empty());
        assert_eq!(m.components().len(), 2);
        let rho = m.rho_sgt(&cat).unwrap();
        assert_eq!(rho.to_string(), "24*[pt] - 2*[E]");
        assert!(euler_discrepancy_warning(&rho).is_some());
    }

    #[test]
    fn type_ii_middle_components_cancel() {
        let cat = Catalog::default_catalog();
        for r in 1..=5 {
            let m = build_type_ii(&TypeIIData::new(r, 12, 12), &cat).unwrap();
            assert!(m.violations(&cat).is_empty());
            assert_eq!(m.rho_sgt(&cat).unwrap().to_string(), "24*[pt] - 2*[E]");
            assert_eq!(m.rho_var().unwrap(), m.rho_var_via_bundles().unwrap());
        }
    }

    #[test]
    fn type_ii_rejects_bad_input() {
        let cat = Catalog::default_catalog();
        assert!(matches!(
            build_type_ii(&TypeIIData::new(0, 12, 12), &cat),
            Err(Error::BadChain(_))
        ));
        assert!(matches!(
            build_type_ii(&TypeIIData::new(1, 2, 12), &cat),
            Err(Error::BadChain(_))
        ));
        let mut d = TypeIIData::new(1, 12, 12);
        d.elliptic_label = "K3".into();
        assert!(matches!(build_type_ii(&d, &cat), Err(Error::BadChain(_))));
        d.elliptic_label = "Nope".into();
        assert!(matches!(
            build_type_ii(&d, &cat),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn tetrahedron_vanishes() {
        let cat = Catalog::default_catalog();
        let d = tetrahedron(3);
        assert_eq!(d.euler_count(), 2);
        assert_eq!(d.expected_pt(), 0);
        let m = build_type_iii(&d).unwrap();
        assert!(m.violations(&cat).is_empty());
        assert!(m.rho_sgt(&cat).unwrap().is_zero());
        assert!(KulikovData::III(d).input_warnings().is_empty());
    }

    #[test]
    fn octahedron_balanced_and_unbalanced() {
        let cat = Catalog::default_catalog();
        // vertices 1..6, 1 and 6 are poles
        let ring = [2u32, 3, 4, 5];
        let mut edges = Vec::new();
        let mut faces = Vec::new();
        for i in 0..4 {
            let (a, b) = (ring[i], ring[(i + 1) % 4]);
            edges.push((cid(a), cid(b)));
            edges.push((cid(1), cid(a)));
            edges.push((cid(6), cid(a)));
            faces.push((cid(1), cid(a), cid(b)));
            faces.push((cid(6), cid(a), cid(b)));
        }
        // 4E - 3F = 48 - 24 = 24 spread over six components
        let eulers = [4i64, 4, 4, 4, 4, 4];
        let d = TypeIIIData {
            vertices: (1..=6).map(|v| (cid(v), eulers[v as usize - 1])).collect(),
            edges,
            faces,
        };
        assert_eq!(d.euler_count(), 2);
        let m = build_type_iii(&d).unwrap();
        assert!(m.violations(&cat).is_empty());
        assert!(m.rho_sgt(&cat).unwrap().is_zero());

        let mut unbalanced = d.clone();
        unbalanced.vertices[0].1 = 7;
        let rho = build_type_iii(&unbalanced).unwrap().rho_sgt(&cat).unwrap();
        assert_eq!(rho, SgtElement::from_int(3));
        assert_eq!(unbalanced.expected_pt(), 3);
    }

    #[test]
    fn missing_edge_is_not_a_complex() {
        let d = TypeIIIData {
            vertices: (1..=3).map(|v| (cid(v), 3)).collect(),
            edges: vec![(cid(1), cid(2)), (cid(2), cid(3))],
            faces: vec![(cid(1), cid(2), cid(3))],
        };
        assert!(matches!(build_type_iii(&d), Err(Error::NotAComplex(_))));
    }

    #[test]
    fn non_sphere_warns() {
        let d = TypeIIIData {
            vertices: (1..=3).map(|v| (cid(v), 3)).collect(),
            edges: vec![(cid(1), cid(2)), (cid(2), cid(3)), (cid(1), cid(3))],
            faces: vec![(cid(1), cid(2), cid(3))],
        };
        assert_eq!(KulikovData::III(d).input_warnings().len(), 1);
    }
}
