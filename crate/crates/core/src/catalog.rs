//! Registry of atomic variety labels.
//!
//! Expandable labels stand for varieties whose class is a polynomial in `L`
//! (projective spaces, rational surfaces). Opaque labels stay formal; they may
//! carry a known reduction in K0(sGT), e.g. a P^1-bundle over an elliptic curve
//! reduces to two copies of the curve.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ring::{self, SgtElement, VarElement, PT};
use crate::term::{valid_label_name, MAX_DIM};

const DEFAULT_CATALOG: &str = include_str!("../data/default.cat");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelKind {
    Expandable,
    Opaque,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomicLabel {
    pub name: String,
    pub dim: u32,
    pub euler: i64,
    pub kind: LabelKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: AtomicLabel,
    pub var_expansion: Option<VarElement>,
    pub sgt_expansion: Option<SgtElement>,
}

impl CatalogEntry {
    pub fn expandable(name: &str, dim: u32, euler: i64, expansion: VarElement) -> Self {
        CatalogEntry {
            label: AtomicLabel {
                name: name.to_string(),
                dim,
                euler,
                kind: LabelKind::Expandable,
            },
            var_expansion: Some(expansion),
            sgt_expansion: None,
        }
    }

    pub fn opaque(name: &str, dim: u32, euler: i64) -> Self {
        CatalogEntry {
            label: AtomicLabel {
                name: name.to_string(),
                dim,
                euler,
                kind: LabelKind::Opaque,
            },
            var_expansion: None,
            sgt_expansion: None,
        }
    }

    pub fn with_var_expansion(mut self, e: VarElement) -> Self {
        self.var_expansion = Some(e);
        self
    }

    pub fn with_sgt_expansion(mut self, e: SgtElement) -> Self {
        self.sgt_expansion = Some(e);
        self
    }
}

/// An immutable, validated set of catalog entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    entries: BTreeMap<String, CatalogEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    entry: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    dim: u32,
    euler: i64,
    kind: LabelKind,
    var_expansion: Option<String>,
    sgt_expansion: Option<String>,
}

impl Catalog {
    /// Validates `entries` and builds a catalog. The point label is added if missing.
    pub fn new(entries: impl IntoIterator<Item = CatalogEntry>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for e in entries {
            if !valid_label_name(&e.label.name) {
                return Err(Error::Catalog(format!("invalid name {:?}", e.label.name)));
            }
            let name = e.label.name.clone();
            if map.insert(name.clone(), e).is_some() {
                return Err(Error::Catalog(format!("duplicate label {name}")));
            }
        }
        map.entry(PT.to_string())
            .or_insert_with(|| CatalogEntry::expandable(PT, 0, 1, VarElement::one()));
        let cat = Catalog { entries: map };
        cat.check()?;
        Ok(cat)
    }

    /// The catalog shipped with the crate.
    pub fn default_catalog() -> Self {
        Self::from_toml_str(DEFAULT_CATALOG).expect("embedded catalog is valid")
    }

    /// Parses the TOML catalog format (`[[entry]]` records).
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: CatalogFile =
            toml::from_str(text).map_err(|e| Error::parse(format!("catalog: {e}")))?;
        let mut entries = Vec::with_capacity(file.entry.len());
        for raw in file.entry {
            if raw.dim > MAX_DIM {
                return Err(Error::parse(format!(
                    "catalog: dimension of {} out of range",
                    raw.name
                )));
            }
            let var_expansion = raw
                .var_expansion
                .as_deref()
                .map(str::parse::<VarElement>)
                .transpose()?;
            let sgt_expansion = raw
                .sgt_expansion
                .as_deref()
                .map(str::parse::<SgtElement>)
                .transpose()?;
            entries.push(CatalogEntry {
                label: AtomicLabel {
                    name: raw.name,
                    dim: raw.dim,
                    euler: raw.euler,
                    kind: raw.kind,
                },
                var_expansion,
                sgt_expansion,
            });
        }
        Self::new(entries).map_err(|e| match e {
            Error::Catalog(m) => Error::parse(format!("catalog: {m}")),
            other => other,
        })
    }

    fn check(&self) -> Result<()> {
        let bad = |name: &str, msg: &str| Err(Error::Catalog(format!("{name}: {msg}")));
        for (name, e) in &self.entries {
            let l = &e.label;
            if name == PT {
                if l.kind != LabelKind::Expandable || l.dim != 0 || l.euler != 1 {
                    return bad(name, "pt must be expandable of dim 0 and euler 1");
                }
            } else if l.kind == LabelKind::Opaque && l.dim == 0 {
                return bad(name, "opaque labels of dimension 0 are not allowed");
            }
            if l.kind == LabelKind::Expandable {
                if e.var_expansion.is_none() {
                    return bad(name, "expandable label without var_expansion");
                }
                if e.sgt_expansion.is_some() {
                    return bad(
                        name,
                        "expandable labels reduce to euler*pt; sgt_expansion not allowed",
                    );
                }
            }
            if let Some(v) = &e.var_expansion {
                for dep in v.labels() {
                    if !self.entries.contains_key(dep) {
                        return bad(name, &format!("var_expansion uses unknown label {dep}"));
                    }
                }
            }
            if let Some(s) = &e.sgt_expansion {
                for dep in s.labels() {
                    match self.entries.get(dep) {
                        None => {
                            return bad(name, &format!("sgt_expansion uses unknown label {dep}"))
                        }
                        Some(d) if d.label.kind != LabelKind::Opaque => {
                            return bad(name, &format!("sgt_expansion uses non-opaque label {dep}"))
                        }
                        _ => {}
                    }
                }
            }
        }
        self.check_acyclic()?;
        for (name, e) in &self.entries {
            let euler = BigInt::from(e.label.euler);
            if let Some(v) = &e.var_expansion {
                if v.euler(self)? != euler {
                    return bad(name, "var_expansion Euler number differs from euler");
                }
                if let Some(top) = v.top_dim(self)? {
                    if top > e.label.dim {
                        return bad(name, "var_expansion exceeds the label dimension");
                    }
                }
            }
            if let Some(s) = &e.sgt_expansion {
                if s.euler(self)? != euler {
                    return bad(name, "sgt_expansion Euler number differs from euler");
                }
            }
            if let (Some(v), Some(s)) = (&e.var_expansion, &e.sgt_expansion) {
                // mu of the label itself resolves to s; compare against its expansion
                if &v.mu(self)? != s {
                    return bad(name, "mu(var_expansion) differs from sgt_expansion");
                }
            }
        }
        Ok(())
    }

    fn deps(&self, name: &str) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        if let Some(e) = self.entries.get(name) {
            if let Some(v) = &e.var_expansion {
                out.extend(v.labels());
            }
            if let Some(s) = &e.sgt_expansion {
                out.extend(s.labels());
            }
        }
        out
    }

    fn check_acyclic(&self) -> Result<()> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        let mut marks: BTreeMap<&str, Mark> = BTreeMap::new();
        for start in self.entries.keys() {
            if marks.contains_key(start.as_str()) {
                continue;
            }
            // iterative DFS: (node, remaining children)
            let mut stack: Vec<(&str, Vec<&str>)> =
                vec![(start, self.deps(start).into_iter().collect())];
            marks.insert(start, Mark::Active);
            while let Some((node, children)) = stack.last_mut() {
                match children.pop() {
                    Some(c) => match marks.get(c) {
                        Some(Mark::Active) => {
                            return Err(Error::Catalog(format!("expansion cycle through {c}")))
                        }
                        Some(Mark::Done) => {}
                        None => {
                            marks.insert(c, Mark::Active);
                            let kids = self.deps(c).into_iter().collect();
                            stack.push((c, kids));
                        }
                    },
                    None => {
                        marks.insert(node, Mark::Done);
                        stack.pop();
                    }
                }
            }
        }
        Ok(())
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries.get(name).ok_or_else(|| ring::unknown(name))
    }

    pub fn label(&self, name: &str) -> Result<&AtomicLabel> {
        self.entry(name).map(|e| &e.label)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.values()
    }

    /// Fails with `UnknownLabel` on the first unregistered label of `a`.
    pub fn check_labels(&self, a: &VarElement) -> Result<()> {
        for name in a.labels() {
            self.entry(name)?;
        }
        Ok(())
    }

    /// K0(Var) class of a label: its polynomial for expandable labels, itself otherwise.
    pub fn expand(&self, name: &str) -> Result<VarElement> {
        let e = self.entry(name)?;
        Ok(match e.label.kind {
            LabelKind::Expandable => e.var_expansion.clone().expect("checked on load"),
            LabelKind::Opaque => VarElement::label(name),
        })
    }

    /// K0(sGT) class of a label.
    pub fn sgt_class(&self, name: &str) -> Result<SgtElement> {
        let e = self.entry(name)?;
        Ok(match e.label.kind {
            LabelKind::Expandable => SgtElement::from_int(e.label.euler),
            LabelKind::Opaque => e
                .sgt_expansion
                .clone()
                .unwrap_or_else(|| SgtElement::label(name)),
        })
    }
}

impl Default for Catalog {
    fn default() -> Self {
        Self::default_catalog()
    }
}

/// Class `1 + (e-2) L + L^2` of a smooth projective rational surface with Euler number `e`.
pub fn rational_surface_class(euler: i64) -> VarElement {
    VarElement::one()
        + VarElement::lefschetz().scale(&BigInt::from(euler - 2))
        + VarElement::l_pow(2)
}

/// Class of a smooth complete toric variety from the f-vector of its fan:
/// `sum_k f[k] (L-1)^(d-k)`, one torus orbit `(L-1)^(d-k)` per k-dimensional cone.
pub fn toric_class(f: &[u64]) -> Result<VarElement> {
    if f.is_empty() {
        return Err(Error::MalformedFVector("empty f-vector".into()));
    }
    if f[0] != 1 {
        return Err(Error::MalformedFVector(format!(
            "f[0] = {} (expected 1)",
            f[0]
        )));
    }
    if let Some(k) = f.iter().position(|&x| x == 0) {
        return Err(Error::MalformedFVector(format!("f[{k}] = 0")));
    }
    let d = (f.len() - 1) as u32;
    let l_minus_one = VarElement::lefschetz() - VarElement::one();
    let mut out = VarElement::zero();
    let mut pow = VarElement::one();
    // pow = (L-1)^(d-k), built from k = d downwards
    for k in (0..=d as usize).rev() {
        out += pow.scale(&BigInt::from(f[k]));
        pow = &pow * &l_minus_one;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VarElement {
        s.parse().unwrap()
    }

    #[test]
    fn default_catalog_loads() {
        let cat = Catalog::default_catalog();
        for name in [
            "pt",
            "P1",
            "P2",
            "P3",
            "P4",
            "E",
            "RuledE",
            "K3",
            "K3_X",
            "RatSurf_e12",
        ] {
            assert!(cat.contains(name), "{name} missing");
        }
    }

    #[test]
    fn expand_examples() {
        let cat = Catalog::default_catalog();
        assert_eq!(cat.expand("P2").unwrap(), v("1 + L + L^2"));
        assert_eq!(cat.expand("E").unwrap(), VarElement::label("E"));
        assert_eq!(cat.expand("RatSurf_e12").unwrap(), v("1 + 10*L + L^2"));
        assert!(matches!(cat.expand("nope"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn sgt_class_examples() {
        let cat = Catalog::default_catalog();
        assert_eq!(cat.sgt_class("P2").unwrap(), SgtElement::from_int(3));
        assert_eq!(
            cat.sgt_class("RuledE").unwrap(),
            SgtElement::label("E").scale(&2.into())
        );
        assert_eq!(cat.sgt_class("K3_X").unwrap(), SgtElement::label("K3_X"));
    }

    #[test]
    fn expandable_invariants_hold_on_default() {
        let cat = Catalog::default_catalog();
        for e in cat.entries() {
            if e.label.kind == LabelKind::Expandable {
                let x = cat.expand(&e.label.name).unwrap();
                assert_eq!(x.euler(&cat).unwrap(), BigInt::from(e.label.euler));
                assert_eq!(cat.sgt_class(&e.label.name).unwrap(), x.mu(&cat).unwrap());
            }
        }
    }

    #[test]
    fn euler_and_mu_examples() {
        let cat = Catalog::default_catalog();
        assert_eq!(v("1 + L + L^2").euler(&cat).unwrap(), BigInt::from(3));
        assert_eq!(v("[E]").euler(&cat).unwrap(), BigInt::from(0));
        // e(K3) = 1 + 0 + 22 + 0 + 1 from the Betti numbers of a K3 surface
        let k3_betti: i64 = [1, 0, 22, 0, 1].iter().sum();
        assert_eq!(v("L*[K3]").euler(&cat).unwrap(), BigInt::from(k3_betti));

        assert_eq!(v("1 + L + L^2").mu(&cat).unwrap(), SgtElement::from_int(3));
        assert_eq!(
            v("[E] + L*[E]").mu(&cat).unwrap(),
            SgtElement::label("E").scale(&2.into())
        );
        assert!(v("L*[E] - [E]").mu(&cat).unwrap().is_zero());
        assert!(matches!(v("[Q]").mu(&cat), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn tuple_labels_stay_formal() {
        let cat = Catalog::default_catalog();
        let got = v("[E]*[K3]").mu(&cat).unwrap();
        assert_eq!(got.to_string(), "[E]*[K3]");
    }

    #[test]
    fn toric_examples() {
        assert_eq!(toric_class(&[1, 2]).unwrap(), v("1 + L"));
        assert_eq!(toric_class(&[1, 3, 3]).unwrap(), v("1 + L + L^2"));
        assert_eq!(toric_class(&[1]).unwrap(), VarElement::one());
        // P^1 x P^1: (L-1)^2 + 4(L-1) + 4 = (1+L)^2
        assert_eq!(toric_class(&[1, 4, 4]).unwrap(), v("1 + 2*L + L^2"));
        assert!(toric_class(&[]).is_err());
        assert!(toric_class(&[2, 3]).is_err());
        assert!(toric_class(&[1, 0, 1]).is_err());
    }

    #[test]
    fn toric_class_at_one_counts_maximal_cones() {
        let f = [1u64, 7, 12, 6];
        let x = toric_class(&f).unwrap().reduce_mod_l_minus_1();
        assert_eq!(x, VarElement::from_int(6));
    }

    #[test]
    fn rejects_bad_catalogs() {
        let cycle = Catalog::new([
            CatalogEntry::opaque("A", 1, 0).with_var_expansion(v("[B]")),
            CatalogEntry::opaque("B", 1, 0).with_var_expansion(v("[A]")),
        ]);
        assert!(matches!(cycle, Err(Error::Catalog(_))));

        let self_loop =
            Catalog::new([CatalogEntry::opaque("A", 1, 0).with_var_expansion(v("[A]"))]);
        assert!(self_loop.is_err());

        let wrong_euler = Catalog::new([CatalogEntry::expandable("X", 1, 5, v("1 + L"))]);
        assert!(wrong_euler.is_err());

        let opaque_point = Catalog::new([CatalogEntry::opaque("Q", 0, 1)]);
        assert!(opaque_point.is_err());

        let dup = Catalog::new([
            CatalogEntry::opaque("A", 1, 0),
            CatalogEntry::opaque("A", 1, 0),
        ]);
        assert!(dup.is_err());

        let bad_sgt = Catalog::new([
            CatalogEntry::opaque("A", 1, 0).with_sgt_expansion("3*[pt]".parse().unwrap())
        ]);
        assert!(bad_sgt.is_err());
    }

    #[test]
    fn parses_toml_catalog() {
        let text = r#"
            [[entry]]
            name = "C"
            dim = 1
            euler = -2
            kind = "opaque"

            [[entry]]
            name = "RuledC"
            dim = 2
            euler = -4
            kind = "opaque"
            var_expansion = "[C] + L*[C]"
            sgt_expansion = "2*[C]"
        "#;
        let cat = Catalog::from_toml_str(text).unwrap();
        assert!(cat.contains("pt"));
        assert_eq!(cat.sgt_class("RuledC").unwrap().to_string(), "2*[C]");
        assert!(Catalog::from_toml_str("[[entry]]\nname=1")
            .unwrap_err()
            .is_parse());
    }
}
