//! Exact arithmetic in the Grothendieck ring of varieties.
//!
//! A [`VarElement`] is a finite integer combination of terms `L^k * [A1]*...*[An]`
//! where `L` is the Lefschetz class and the `[Ai]` are atomic labels registered
//! in a [`Catalog`]. The empty label product is the class of a point, which is
//! the unit of the ring.
//!
//! [`SgtElement`]s live in the Grothendieck group of geometric triangulated
//! categories. That group carries no ring structure, so products of several
//! opaque labels are kept as formal sorted tuples.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::catalog::{Catalog, LabelKind};
use crate::error::{Error, Result};

/// Name of the distinguished point label.
pub const PT: &str = "pt";

/// A multiset of atomic label names, kept sorted. Empty means `[pt] = 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassMonomial(Vec<String>);

impl ClassMonomial {
    pub fn unit() -> Self {
        ClassMonomial(Vec::new())
    }

    /// Builds a monomial from labels in any order. `pt` factors are dropped.
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut v: Vec<String> = labels
            .into_iter()
            .map(Into::into)
            .filter(|s| s != PT)
            .collect();
        v.sort();
        ClassMonomial(v)
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn product(&self, other: &ClassMonomial) -> ClassMonomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        v.sort();
        ClassMonomial(v)
    }
}

/// Key of a single term: label monomial and power of `L`.
pub type TermKey = (ClassMonomial, u32);

/// Element of K0(Var): integer polynomial in `L` over class monomials.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct VarElement {
    terms: BTreeMap<TermKey, BigInt>,
}

impl VarElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::term(n, ClassMonomial::unit(), 0)
    }

    /// The Lefschetz class `L`.
    pub fn lefschetz() -> Self {
        Self::l_pow(1)
    }

    pub fn l_pow(k: u32) -> Self {
        Self::term(1, ClassMonomial::unit(), k)
    }

    /// The class `[name]` of a single label.
    pub fn label(name: &str) -> Self {
        Self::term(1, ClassMonomial::new([name]), 0)
    }

    pub fn term(coeff: impl Into<BigInt>, monomial: ClassMonomial, l_exp: u32) -> Self {
        let mut e = Self::zero();
        e.add_term(monomial, l_exp, coeff.into());
        e
    }

    /// `1 + L + ... + L^(n-1)`, the class of `P^(n-1)` (zero for `n = 0`).
    pub fn l_geometric(n: u32) -> Self {
        let mut e = Self::zero();
        for k in 0..n {
            e.add_term(ClassMonomial::unit(), k, BigInt::one());
        }
        e
    }

    /// `(1 - L)^n`, expanded.
    pub fn one_minus_l_pow(n: u32) -> Self {
        let base = Self::one() - Self::lefschetz();
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * &base;
        }
        acc
    }

    pub fn add_term(&mut self, monomial: ClassMonomial, l_exp: u32, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry((monomial, l_exp)) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order: monomial lexicographic, then `L`-exponent ascending.
    pub fn terms(&self) -> impl Iterator<Item = (&ClassMonomial, u32, &BigInt)> {
        self.terms.iter().map(|((m, k), c)| (m, *k, c))
    }

    pub fn coeff(&self, monomial: &ClassMonomial, l_exp: u32) -> BigInt {
        self.terms
            .get(&(monomial.clone(), l_exp))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Every label name occurring in some term.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.terms
            .keys()
            .flat_map(|(m, _)| m.labels().iter().map(String::as_str))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        VarElement {
            terms: self
                .terms
                .iter()
                .map(|(key, c)| (key.clone(), c * k))
                .collect(),
        }
    }

    /// Multiplies by `L^k`.
    pub fn shift_l(&self, k: u32) -> Self {
        VarElement {
            terms: self
                .terms
                .iter()
                .map(|((m, e), c)| ((m.clone(), e + k), c.clone()))
                .collect(),
        }
    }

    /// Highest `L`-exponent plus label dimension over all terms.
    pub fn top_dim(&self, catalog: &Catalog) -> Result<Option<u32>> {
        let mut top = None;
        for (m, k, _) in self.terms() {
            let d = k + monomial_dim(m, catalog)?;
            top = Some(top.map_or(d, |t: u32| t.max(d)));
        }
        Ok(top)
    }

    /// Substitutes `L -> 1` keeping labels unexpanded.
    pub fn reduce_mod_l_minus_1(&self) -> Self {
        let mut out = Self::zero();
        for ((m, _), c) in &self.terms {
            out.add_term(m.clone(), 0, c.clone());
        }
        out
    }

    /// Euler characteristic: `L -> 1`, each label to its catalog Euler number.
    pub fn euler(&self, catalog: &Catalog) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for ((m, _), c) in &self.terms {
            let mut prod = c.clone();
            for name in m.labels() {
                prod *= catalog.label(name)?.euler;
            }
            total += prod;
        }
        Ok(total)
    }

    /// Projection to K0(sGT): `L -> 1`, expandable labels to their Euler number,
    /// opaque labels to their SOD reduction when the catalog has one.
    pub fn mu(&self, catalog: &Catalog) -> Result<SgtElement> {
        let mut out = SgtElement::zero();
        for ((m, _), c) in &self.terms {
            let mut acc = SgtElement::from_int(c.clone());
            for name in m.labels() {
                let entry = catalog.entry(name)?;
                match entry.label.kind {
                    LabelKind::Expandable => {
                        acc = acc.scale(&BigInt::from(entry.label.euler));
                    }
                    LabelKind::Opaque => {
                        let factor = match &entry.sgt_expansion {
                            Some(s) => s.clone(),
                            None => SgtElement::label(name),
                        };
                        acc = acc.formal_product(&factor);
                    }
                }
                if acc.is_zero() {
                    break;
                }
            }
            out += acc;
        }
        Ok(out)
    }
}

pub(crate) fn monomial_dim(m: &ClassMonomial, catalog: &Catalog) -> Result<u32> {
    m.labels()
        .iter()
        .map(|n| catalog.label(n).map(|l| l.dim))
        .sum()
}

/// Free-function form of [`VarElement::mu`].
pub fn mu(a: &VarElement, catalog: &Catalog) -> Result<SgtElement> {
    a.mu(catalog)
}

/// Free-function form of [`VarElement::euler`].
pub fn euler(a: &VarElement, catalog: &Catalog) -> Result<BigInt> {
    a.euler(catalog)
}

pub fn reduce_mod_l_minus_1(a: &VarElement) -> VarElement {
    a.reduce_mod_l_minus_1()
}

impl Add for &VarElement {
    type Output = VarElement;
    fn add(self, rhs: &VarElement) -> VarElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for VarElement {
    type Output = VarElement;
    fn add(mut self, rhs: VarElement) -> VarElement {
        self += &rhs;
        self
    }
}

impl AddAssign<&VarElement> for VarElement {
    fn add_assign(&mut self, rhs: &VarElement) {
        for ((m, k), c) in &rhs.terms {
            self.add_term(m.clone(), *k, c.clone());
        }
    }
}

impl AddAssign for VarElement {
    fn add_assign(&mut self, rhs: VarElement) {
        *self += &rhs;
    }
}

impl SubAssign<&VarElement> for VarElement {
    fn sub_assign(&mut self, rhs: &VarElement) {
        for ((m, k), c) in &rhs.terms {
            self.add_term(m.clone(), *k, -c.clone());
        }
    }
}

impl Sub for &VarElement {
    type Output = VarElement;
    fn sub(self, rhs: &VarElement) -> VarElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for VarElement {
    type Output = VarElement;
    fn sub(mut self, rhs: VarElement) -> VarElement {
        self -= &rhs;
        self
    }
}

impl Neg for VarElement {
    type Output = VarElement;
    fn neg(mut self) -> VarElement {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for &VarElement {
    type Output = VarElement;
    fn mul(self, rhs: &VarElement) -> VarElement {
        let mut out = VarElement::zero();
        for ((ma, ka), ca) in &self.terms {
            for ((mb, kb), cb) in &rhs.terms {
                out.add_term(ma.product(mb), ka + kb, ca * cb);
            }
        }
        out
    }
}

impl Mul for VarElement {
    type Output = VarElement;
    fn mul(self, rhs: VarElement) -> VarElement {
        &self * &rhs
    }
}

/// Basis element of K0(sGT): a sorted tuple of opaque labels; empty is `[pt]`.
pub type SgtBasis = ClassMonomial;

/// Element of K0(sGT) as an integer combination of basis labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SgtElement {
    terms: BTreeMap<SgtBasis, BigInt>,
}

impl SgtElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `n * [pt]`.
    pub fn from_int(n: impl Into<BigInt>) -> Self {
        let mut e = Self::zero();
        e.add_term(ClassMonomial::unit(), n.into());
        e
    }

    pub fn label(name: &str) -> Self {
        let mut e = Self::zero();
        e.add_term(ClassMonomial::new([name]), BigInt::one());
        e
    }

    pub fn add_term(&mut self, basis: SgtBasis, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(basis) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SgtBasis, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, basis: &SgtBasis) -> BigInt {
        self.terms.get(basis).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Coefficient of `[pt]`.
    pub fn pt_coeff(&self) -> BigInt {
        self.coeff(&ClassMonomial::unit())
    }

    /// The element with its `[pt]` term removed.
    pub fn without_pt(&self) -> SgtElement {
        let mut out = self.clone();
        out.terms.remove(&ClassMonomial::unit());
        out
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.terms
            .keys()
            .flat_map(|m| m.labels().iter().map(String::as_str))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        SgtElement {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), c * k)).collect(),
        }
    }

    /// Multilinear extension of tuple concatenation. Imposes no relations.
    pub fn formal_product(&self, other: &SgtElement) -> SgtElement {
        let mut out = SgtElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.product(b), ca * cb);
            }
        }
        out
    }

    /// Euler number of an SGT class, with `e(pt) = 1` and each label its catalog value.
    pub fn euler(&self, catalog: &Catalog) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (b, c) in &self.terms {
            let mut prod = c.clone();
            for name in b.labels() {
                prod *= catalog.label(name)?.euler;
            }
            total += prod;
        }
        Ok(total)
    }

    pub fn has_negative(&self) -> bool {
        self.terms.values().any(|c| c.is_negative())
    }
}

impl AddAssign<&SgtElement> for SgtElement {
    fn add_assign(&mut self, rhs: &SgtElement) {
        for (b, c) in &rhs.terms {
            self.add_term(b.clone(), c.clone());
        }
    }
}

impl AddAssign for SgtElement {
    fn add_assign(&mut self, rhs: SgtElement) {
        *self += &rhs;
    }
}

impl Add for SgtElement {
    type Output = SgtElement;
    fn add(mut self, rhs: SgtElement) -> SgtElement {
        self += &rhs;
        self
    }
}

impl Sub for SgtElement {
    type Output = SgtElement;
    fn sub(mut self, rhs: SgtElement) -> SgtElement {
        for (b, c) in rhs.terms {
            self.add_term(b, -c);
        }
        self
    }
}

impl Neg for SgtElement {
    type Output = SgtElement;
    fn neg(mut self) -> SgtElement {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

pub(crate) fn unknown(name: &str) -> Error {
    Error::UnknownLabel(name.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> VarElement {
        VarElement::lefschetz()
    }

    #[test]
    fn square_of_one_plus_l() {
        let a = VarElement::one() + l();
        let expect = VarElement::one() + l().scale(&2.into()) + VarElement::l_pow(2);
        assert_eq!(&a * &a, expect);
    }

    #[test]
    fn label_times_one_plus_l() {
        let e = VarElement::label("E");
        let got = &e * &(VarElement::one() + l());
        assert_eq!(got, e.clone() + e.shift_l(1));
    }

    #[test]
    fn label_squared_is_formal() {
        let e = VarElement::label("E");
        let sq = &e * &e;
        assert_eq!(sq.len(), 1);
        assert_eq!(sq.coeff(&ClassMonomial::new(["E", "E"]), 0), BigInt::one());
    }

    #[test]
    fn reduce_examples() {
        let three_l_minus_one = (l() - VarElement::one()).scale(&3.into());
        assert!(three_l_minus_one.reduce_mod_l_minus_1().is_zero());

        let e = VarElement::label("E");
        let a = e.shift_l(1) + e.clone();
        assert_eq!(a.reduce_mod_l_minus_1(), e.scale(&2.into()));

        let b = (l() + VarElement::one()).scale(&3.into()) - VarElement::from_int(6);
        assert!(b.reduce_mod_l_minus_1().is_zero());
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let a = l() - l();
        assert!(a.is_zero());
        assert_eq!(a.len(), 0);
    }

    #[test]
    fn one_minus_l_powers() {
        let sq = VarElement::one_minus_l_pow(2);
        let expect = VarElement::one() - l().scale(&2.into()) + VarElement::l_pow(2);
        assert_eq!(sq, expect);
        assert_eq!(VarElement::one_minus_l_pow(0), VarElement::one());
    }

    #[test]
    fn pt_is_the_unit_monomial() {
        assert_eq!(VarElement::label(PT), VarElement::one());
    }
}
