//! Snc special fibers as class-labeled dual complexes.
//!
//! A model stores the class `[D_J]` of every nonempty closed stratum
//! `D_J = intersection of D_j for j in J`. Missing faces are empty strata. Singleton
//! faces hold the component classes.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::ring::{monomial_dim, SgtElement, VarElement};
use crate::term::is_label_char;

/// Identifier of a component of the special fiber.
///
/// Ids that are both decimal integers compare numerically, so `2 < 10`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComponentId(String);

impl ComponentId {
    pub fn new(s: impl Into<String>) -> Result<Self> {
        let s = s.into();
        if s.is_empty() || !s.chars().all(is_label_char) {
            return Err(Error::parse(format!("invalid component id {s:?}")));
        }
        Ok(ComponentId(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn numeric(&self) -> Option<u128> {
        if self.0.bytes().all(|b| b.is_ascii_digit()) {
            self.0.parse().ok()
        } else {
            None
        }
    }
}

impl From<u32> for ComponentId {
    fn from(n: u32) -> Self {
        ComponentId(n.to_string())
    }
}

impl Ord for ComponentId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric(), other.numeric()) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for ComponentId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A nonempty set of component ids, displayed comma-joined in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face(BTreeSet<ComponentId>);

impl Face {
    pub fn new(ids: impl IntoIterator<Item = ComponentId>) -> Self {
        Face(ids.into_iter().collect())
    }

    pub fn singleton(id: ComponentId) -> Self {
        Face(BTreeSet::from([id]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &ComponentId> {
        self.0.iter()
    }

    pub fn contains(&self, id: &ComponentId) -> bool {
        self.0.contains(id)
    }

    pub fn is_subset(&self, other: &Face) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Face) -> Face {
        Face(self.0.union(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &Face) -> Face {
        Face(self.0.difference(&other.0).cloned().collect())
    }

    pub fn with(&self, id: ComponentId) -> Face {
        let mut s = self.0.clone();
        s.insert(id);
        Face(s)
    }

    pub fn without(&self, id: &ComponentId) -> Face {
        let mut s = self.0.clone();
        s.remove(id);
        Face(s)
    }

    /// All subsets (including the empty one and `self`).
    pub fn subsets(&self) -> Vec<Face> {
        let ids: Vec<&ComponentId> = self.0.iter().collect();
        let n = ids.len();
        assert!(n < 32, "face too large to enumerate");
        (0u32..(1 << n))
            .map(|mask| {
                Face(
                    ids.iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, id)| (*id).clone())
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(ComponentId::as_str).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Face {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut set = BTreeSet::new();
        for part in s.split(',') {
            let id = ComponentId::new(part.trim())?;
            if !set.insert(id) {
                return Err(Error::parse(format!("repeated id in stratum key {s:?}")));
            }
        }
        Ok(Face(set))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: ComponentId,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    DuplicateId,
    ZeroMultiplicity,
    FaceClosure,
    ExcessIntersection,
    DimensionLaw,
    UnknownLabel(String),
}

/// A broken model invariant at a particular face.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub face: Face,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.kind {
            ViolationKind::DuplicateId => "duplicate component id".to_string(),
            ViolationKind::ZeroMultiplicity => "zero multiplicity".to_string(),
            ViolationKind::FaceClosure => "face closure".to_string(),
            ViolationKind::ExcessIntersection => "excess intersection".to_string(),
            ViolationKind::DimensionLaw => "dimension law".to_string(),
            ViolationKind::UnknownLabel(l) => format!("unknown label [{l}]"),
        };
        write!(f, "{what} at {{{}}}", self.face)
    }
}

/// Snc special fiber: components with multiplicities plus closed-stratum classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SncModel {
    generic_dim: u32,
    components: Vec<Component>,
    strata: BTreeMap<Face, VarElement>,
    duplicates: Vec<ComponentId>,
}

impl SncModel {
    /// Assembles a model. `strata` lists the nonempty strata with `|J| >= 2`;
    /// component classes go in `components`. No invariants are checked here.
    pub fn new(
        generic_dim: u32,
        components: impl IntoIterator<Item = (ComponentId, u32, VarElement)>,
        strata: impl IntoIterator<Item = (Face, VarElement)>,
    ) -> Self {
        let mut model = SncModel {
            generic_dim,
            components: Vec::new(),
            strata: BTreeMap::new(),
            duplicates: Vec::new(),
        };
        for (id, multiplicity, class) in components {
            if model
                .strata
                .insert(Face::singleton(id.clone()), class)
                .is_some()
            {
                model.duplicates.push(id.clone());
                continue;
            }
            model.components.push(Component { id, multiplicity });
        }
        for (face, class) in strata {
            if face.len() >= 2 {
                model.strata.insert(face, class);
            }
        }
        model
    }

    pub fn generic_dim(&self) -> u32 {
        self.generic_dim
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_ids(&self) -> impl Iterator<Item = &ComponentId> {
        self.components.iter().map(|c| &c.id)
    }

    pub fn multiplicity(&self, id: &ComponentId) -> Option<u32> {
        self.components
            .iter()
            .find(|c| &c.id == id)
            .map(|c| c.multiplicity)
    }

    /// Nonempty strata in face order, singletons included.
    pub fn strata(&self) -> impl Iterator<Item = (&Face, &VarElement)> {
        self.strata.iter()
    }

    /// `[D_J]`, or `None` for an empty stratum.
    pub fn stratum(&self, face: &Face) -> Option<&VarElement> {
        self.strata.get(face)
    }

    /// Catalog-free invariants: ids, multiplicities, face closure, `|J| <= dim X + 1`.
    pub fn structural_violations(&self) -> Vec<Violation> {
        let mut out = BTreeSet::new();
        for id in &self.duplicates {
            out.insert(Violation {
                face: Face::singleton(id.clone()),
                kind: ViolationKind::DuplicateId,
            });
        }
        for c in &self.components {
            if c.multiplicity == 0 {
                out.insert(Violation {
                    face: Face::singleton(c.id.clone()),
                    kind: ViolationKind::ZeroMultiplicity,
                });
            }
        }
        for face in self.strata.keys() {
            if face.len() as u64 > self.generic_dim as u64 + 1 {
                out.insert(Violation {
                    face: face.clone(),
                    kind: ViolationKind::ExcessIntersection,
                });
            }
            if face.len() < 2 {
                continue;
            }
            for id in face.ids() {
                let sub = face.without(id);
                if !self.strata.contains_key(&sub) {
                    out.insert(Violation {
                        face: sub,
                        kind: ViolationKind::FaceClosure,
                    });
                }
            }
        }
        out.into_iter().collect()
    }

    /// Every invariant, including the dimension law `dim D_J = dim X + 1 - |J|`
    /// checked term by term against `catalog`.
    pub fn violations(&self, catalog: &Catalog) -> Vec<Violation> {
        let mut out: BTreeSet<Violation> = self.structural_violations().into_iter().collect();
        for (face, class) in &self.strata {
            let Some(target) = (self.generic_dim as u64 + 1).checked_sub(face.len() as u64) else {
                continue;
            };
            let mut top_seen = false;
            let mut ok = true;
            for (m, k, _) in class.terms() {
                match monomial_dim(m, catalog) {
                    Ok(d) => {
                        let d = d as u64 + k as u64;
                        if d > target {
                            ok = false;
                        }
                        if d == target {
                            top_seen = true;
                        }
                    }
                    Err(Error::UnknownLabel(l)) => {
                        out.insert(Violation {
                            face: face.clone(),
                            kind: ViolationKind::UnknownLabel(l),
                        });
                        ok = true;
                        top_seen = true;
                        break;
                    }
                    Err(_) => unreachable!("monomial_dim only fails on unknown labels"),
                }
            }
            if !ok || !top_seen {
                out.insert(Violation {
                    face: face.clone(),
                    kind: ViolationKind::DimensionLaw,
                });
            }
        }
        out.into_iter().collect()
    }

    pub fn validate(&self, catalog: &Catalog) -> Result<()> {
        let v = self.violations(catalog);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidModel(v))
        }
    }

    fn check_structure(&self) -> Result<()> {
        let v = self.structural_violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidModel(v))
        }
    }

    /// `[D_J°] = sum over J' ⊇ J of (-1)^(|J'|-|J|) [D_J']`.
    pub fn open_stratum_class(&self, face: &Face) -> Result<VarElement> {
        self.check_structure()?;
        if !self.strata.contains_key(face) {
            return Err(Error::EmptyStratum(face.to_string()));
        }
        Ok(self.open_unchecked(face))
    }

    fn open_unchecked(&self, face: &Face) -> VarElement {
        let mut out = VarElement::zero();
        for (other, class) in &self.strata {
            if face.is_subset(other) {
                if (other.len() - face.len()).is_multiple_of(2) {
                    out += class;
                } else {
                    out -= class;
                }
            }
        }
        out
    }

    /// Specialization of the generic fiber's class in K0(Var):
    /// `sum_J (1 - L)^(|J|-1) [D_J°]`.
    pub fn rho_var(&self) -> Result<VarElement> {
        self.check_structure()?;
        let mut out = VarElement::zero();
        let mut powers: BTreeMap<usize, VarElement> = BTreeMap::new();
        for face in self.strata.keys() {
            let w = powers
                .entry(face.len())
                .or_insert_with(|| VarElement::one_minus_l_pow(face.len() as u32 - 1));
            out += &*w * &self.open_unchecked(face);
        }
        Ok(out)
    }

    /// Same map through projectivized normal bundles:
    /// `sum_J (-1)^(|J|-1) (1 + L + ... + L^(|J|-1)) [D_J]`.
    pub fn rho_var_via_bundles(&self) -> Result<VarElement> {
        self.check_structure()?;
        let mut out = VarElement::zero();
        for (face, class) in &self.strata {
            let term = &VarElement::l_geometric(face.len() as u32) * class;
            if face.len() % 2 == 1 {
                out += term;
            } else {
                out -= &term;
            }
        }
        Ok(out)
    }

    /// `sum_J (-1)^(|J|-1) |J| [D_J]` in K0(Var); `rho_sgt` is its image under mu.
    pub fn rho_sgt_lift(&self) -> Result<VarElement> {
        self.check_structure()?;
        let mut out = VarElement::zero();
        for (face, class) in &self.strata {
            let mut w = BigInt::from(face.len());
            if face.len() % 2 == 0 {
                w = -w;
            }
            out += class.scale(&w);
        }
        Ok(out)
    }

    pub fn rho_sgt(&self, catalog: &Catalog) -> Result<SgtElement> {
        self.rho_sgt_lift()?.mu(catalog)
    }

    /// Class of the reduced special fiber by inclusion-exclusion.
    pub fn special_fiber_class(&self) -> Result<VarElement> {
        self.check_structure()?;
        let mut out = VarElement::zero();
        for (face, class) in &self.strata {
            if face.len() % 2 == 1 {
                out += class;
            } else {
                out -= class;
            }
        }
        Ok(out)
    }

    /// Rebuilds a model from raw parts; used by moves that produce new strata tables.
    pub(crate) fn from_parts(
        generic_dim: u32,
        components: Vec<Component>,
        strata: BTreeMap<Face, VarElement>,
    ) -> Self {
        SncModel {
            generic_dim,
            components,
            strata,
            duplicates: Vec::new(),
        }
    }
}

/// Ids `1..=n` as component ids.
pub fn numbered(n: u32) -> Vec<ComponentId> {
    (1..=n).map(ComponentId::from).collect()
}

/// Face from plain integers, for fixtures and tests.
pub fn face_of(ids: &[u32]) -> Face {
    Face::new(ids.iter().map(|&i| ComponentId::from(i)))
}

/// Cycle of `n >= 2` copies of `P^1`, consecutive ones meeting in a point
/// (for `n = 2` the two lines meet in two points).
pub fn ngon_model(n: u32) -> SncModel {
    assert!(n >= 2);
    let p1: VarElement = VarElement::l_geometric(2);
    let comps = numbered(n).into_iter().map(|id| (id, 1, p1.clone()));
    let strata: Vec<(Face, VarElement)> = if n == 2 {
        vec![(face_of(&[1, 2]), VarElement::from_int(2))]
    } else {
        (1..=n)
            .map(|i| (face_of(&[i, i % n + 1]), VarElement::one()))
            .collect()
    };
    SncModel::new(1, comps, strata)
}
