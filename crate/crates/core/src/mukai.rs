//! The Mukai lattice of a K3 surface, period points, Hodge isometries and the
//! Kulikov type of a monodromy operator.
//!
//! Basis order is fixed: index 0 is H⁰, indices 1..=22 are H² as
//! `E8(-1) ⊕ E8(-1) ⊕ U ⊕ U ⊕ U`, index 23 is H⁴. The H⁰/H⁴ pair has Gram
//! block `[[0,-1],[-1,0]]`, so the flattened form is exactly the pairing
//! `<a, b> = a1.b1 - a0 b2 - a2 b0`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{GaussRat, IntMatrix, RatMatrix};

pub const MUKAI_RANK: usize = 24;
pub const H2_RANK: usize = 22;

/// Offset of the `k`-th U summand (k = 0, 1, 2) inside H².
pub fn h2_u_offset(k: usize) -> usize {
    16 + 2 * k
}

/// Offset inside the full Mukai basis of the `k`-th U summand of H².
pub fn mukai_u_offset(k: usize) -> usize {
    1 + h2_u_offset(k)
}

/// The Cartan matrix of E8 (Bourbaki labelling).
pub fn e8_cartan() -> IntMatrix {
    let edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
    let mut m = IntMatrix::zeros(8, 8);
    for i in 0..8 {
        m.set(i, i, BigInt::from(2));
    }
    for (a, b) in edges {
        m.set(a - 1, b - 1, BigInt::from(-1));
        m.set(b - 1, a - 1, BigInt::from(-1));
    }
    m
}

/// The hyperbolic plane `[[0,1],[1,0]]`.
pub fn hyperbolic_plane() -> IntMatrix {
    IntMatrix::from_i64(2, 2, &[0, 1, 1, 0])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLattice {
    gram: IntMatrix,
}

impl IntegerLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::DimensionMismatch(
                "Gram matrix must be square and symmetric".into(),
            ));
        }
        Ok(IntegerLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant().expect("square")
    }

    /// `(positive, negative)` index of inertia.
    pub fn signature(&self) -> (usize, usize) {
        let (p, n, _) = self.gram.to_rational().inertia().expect("symmetric");
        (p, n)
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| (self.gram.get(i, i) % BigInt::from(2)).is_zero())
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.gram.bilinear(x, y)
    }

    fn pair_rat(&self, x: &[BigRational], y: &[BigRational]) -> Result<BigRational> {
        self.gram.to_rational().bilinear(x, y)
    }
}

/// Rank-22 Gram matrix of H²: `E8(-1) ⊕ E8(-1) ⊕ U ⊕ U ⊕ U`.
pub fn h2_gram() -> IntMatrix {
    let mut g = IntMatrix::zeros(H2_RANK, H2_RANK);
    let e8 = -&e8_cartan();
    g.put_block(0, 0, &e8);
    g.put_block(8, 8, &e8);
    for k in 0..3 {
        g.put_block(h2_u_offset(k), h2_u_offset(k), &hyperbolic_plane());
    }
    g
}

/// The rank-24 Mukai lattice in the fixed basis order.
pub fn mukai_gram() -> IntegerLattice {
    let mut g = IntMatrix::zeros(MUKAI_RANK, MUKAI_RANK);
    g.put_block(1, 1, &h2_gram());
    g.set(0, MUKAI_RANK - 1, BigInt::from(-1));
    g.set(MUKAI_RANK - 1, 0, BigInt::from(-1));
    IntegerLattice::new(g).expect("symmetric by construction")
}

/// A Mukai vector `(a0, a1, a2)` in H⁰ ⊕ H² ⊕ H⁴.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MukaiVector {
    pub a0: BigInt,
    pub a1: Vec<BigInt>,
    pub a2: BigInt,
}

impl MukaiVector {
    pub fn new(a0: impl Into<BigInt>, a1: Vec<BigInt>, a2: impl Into<BigInt>) -> Self {
        MukaiVector {
            a0: a0.into(),
            a1,
            a2: a2.into(),
        }
    }

    /// Coordinates in the fixed 24-dimensional basis order.
    pub fn flatten(&self) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.a1.len() + 2);
        v.push(self.a0.clone());
        v.extend(self.a1.iter().cloned());
        v.push(self.a2.clone());
        v
    }

    pub fn from_flat(v: &[BigInt]) -> Result<Self> {
        if v.len() != MUKAI_RANK {
            return Err(Error::DimensionMismatch(format!(
                "Mukai vector of length {}",
                v.len()
            )));
        }
        Ok(MukaiVector {
            a0: v[0].clone(),
            a1: v[1..MUKAI_RANK - 1].to_vec(),
            a2: v[MUKAI_RANK - 1].clone(),
        })
    }
}

/// `<a, b> = a1.G.b1 - a0 b2 - a2 b0`.
pub fn mukai_pairing(a: &MukaiVector, b: &MukaiVector, h2: &IntMatrix) -> Result<BigInt> {
    if a.a1.len() != h2.rows() || b.a1.len() != h2.rows() || !h2.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "H2 parts of length {} and {} against a {}x{} Gram block",
            a.a1.len(),
            b.a1.len(),
            h2.rows(),
            h2.cols()
        )));
    }
    Ok(h2.bilinear(&a.a1, &b.a1)? - &a.a0 * &b.a2 - &a.a2 * &b.a0)
}

fn check_square(m: &IntMatrix, lattice: &IntegerLattice) -> Result<()> {
    if !m.is_square() || m.rows() != lattice.rank() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix on a rank {} lattice",
            m.rows(),
            m.cols(),
            lattice.rank()
        )));
    }
    Ok(())
}

/// True iff `mᵀ G m = G`.
pub fn is_isometry(m: &IntMatrix, lattice: &IntegerLattice) -> Result<bool> {
    check_square(m, lattice)?;
    let pulled = m.transpose().checked_mul(lattice.gram())?.checked_mul(m)?;
    Ok(&pulled == lattice.gram())
}

/// Inverse of an isometry: `G⁻¹ mᵀ G`.
pub fn isometry_inverse(m: &IntMatrix, lattice: &IntegerLattice) -> Result<IntMatrix> {
    let g_inv = lattice.gram().unimodular_inverse()?;
    g_inv
        .checked_mul(&m.transpose())?
        .checked_mul(lattice.gram())
}

/// A period `σ = x + i y` spanning F².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodPoint {
    pub re: Vec<BigRational>,
    pub im: Vec<BigRational>,
}

impl PeriodPoint {
    pub fn new(re: Vec<BigRational>, im: Vec<BigRational>) -> Self {
        PeriodPoint { re, im }
    }

    pub fn from_integers(re: &[i64], im: &[i64]) -> Self {
        let conv = |v: &[i64]| {
            v.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        };
        PeriodPoint {
            re: conv(re),
            im: conv(im),
        }
    }

    /// Reads a 2-row matrix: first row `x`, second row `y`.
    pub fn from_matrix(m: &RatMatrix) -> Result<Self> {
        if m.rows() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "period file must have 2 rows, found {}",
                m.rows()
            )));
        }
        Ok(PeriodPoint {
            re: m.row(0).to_vec(),
            im: m.row(1).to_vec(),
        })
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        PeriodPoint {
            re: self.re.iter().map(|x| x * k).collect(),
            im: self.im.iter().map(|x| x * k).collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.iter().chain(&self.im).all(Zero::is_zero)
    }

    fn coords(&self) -> Vec<GaussRat> {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(a, b)| GaussRat::new(a.clone(), b.clone()))
            .collect()
    }
}

/// `Q(x,x) = Q(y,y)`, `Q(x,y) = 0`, `Q(x,x) + Q(y,y) > 0`, `σ ≠ 0`.
pub fn is_period_point(p: &PeriodPoint, lattice: &IntegerLattice) -> Result<bool> {
    let n = lattice.rank();
    if p.re.len() != n || p.im.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "period of length {}/{} on a rank {n} lattice",
            p.re.len(),
            p.im.len()
        )));
    }
    if p.is_zero() {
        return Ok(false);
    }
    let xx = lattice.pair_rat(&p.re, &p.re)?;
    let yy = lattice.pair_rat(&p.im, &p.im)?;
    let xy = lattice.pair_rat(&p.re, &p.im)?;
    Ok(xx == yy && xy.is_zero() && (xx + yy).is_positive())
}

/// True iff `m` is an isometry carrying the period line of `px` onto that of `py`.
pub fn is_hodge_isometry(
    m: &IntMatrix,
    px: &PeriodPoint,
    py: &PeriodPoint,
    lattice: &IntegerLattice,
) -> Result<bool> {
    check_square(m, lattice)?;
    for (name, p) in [("source", px), ("target", py)] {
        if !is_period_point(p, lattice)? {
            return Err(Error::InvalidPeriod(format!(
                "{name} period fails the period conditions"
            )));
        }
    }
    if !is_isometry(m, lattice)? {
        return Ok(false);
    }
    let rm = m.to_rational();
    let image = PeriodPoint {
        re: rm.mul_vec(&px.re)?,
        im: rm.mul_vec(&px.im)?,
    };
    let u = image.coords();
    let v = py.coords();
    if u.iter().all(GaussRat::is_zero) {
        return Ok(false);
    }
    // rank of the 24x2 complex matrix [u | v] is 1 iff all 2x2 minors vanish
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if !(&u[i] * &v[j] - &u[j] * &v[i]).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Kulikov type of a degeneration, read off the monodromy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum KulikovType {
    TypeI,
    TypeII,
    TypeIII,
}

impl fmt::Display for KulikovType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KulikovType::TypeI => "Type I",
            KulikovType::TypeII => "Type II",
            KulikovType::TypeIII => "Type III",
        })
    }
}

/// Square integer matrix `T` acting on cohomology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyOperator {
    pub t: IntMatrix,
}

impl MonodromyOperator {
    pub fn new(t: IntMatrix) -> Self {
        MonodromyOperator { t }
    }
}

/// Least `i <= 3` with `(T - id)^i = 0`.
pub fn classify_monodromy(op: &MonodromyOperator) -> Result<KulikovType> {
    let t = &op.t;
    if !t.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "monodromy must be square, got {}x{}",
            t.rows(),
            t.cols()
        )));
    }
    let n = t - &IntMatrix::identity(t.rows());
    if n.is_zero() {
        return Ok(KulikovType::TypeI);
    }
    let n2 = n.checked_mul(&n)?;
    if n2.is_zero() {
        return Ok(KulikovType::TypeII);
    }
    if n2.checked_mul(&n)?.is_zero() {
        return Ok(KulikovType::TypeIII);
    }
    Err(Error::NotKulikov)
}

/// Permutation matrix of the Mukai basis swapping the `a`-th and `b`-th U summands of H².
pub fn swap_u_factors(a: usize, b: usize) -> IntMatrix {
    let mut perm: Vec<usize> = (0..MUKAI_RANK).collect();
    let (oa, ob) = (mukai_u_offset(a), mukai_u_offset(b));
    perm.swap(oa, ob);
    perm.swap(oa + 1, ob + 1);
    permutation_matrix(&perm)
}

/// Exchanges `e` and `f` inside the `k`-th U summand.
pub fn flip_u_factor(k: usize) -> IntMatrix {
    let mut perm: Vec<usize> = (0..MUKAI_RANK).collect();
    let o = mukai_u_offset(k);
    perm.swap(o, o + 1);
    permutation_matrix(&perm)
}

/// Acts by `-1` on the `k`-th U summand.
pub fn negate_u_factor(k: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(MUKAI_RANK);
    let o = mukai_u_offset(k);
    m.set(o, o, BigInt::from(-1));
    m.set(o + 1, o + 1, BigInt::from(-1));
    m
}

/// Matrix sending basis vector `j` to basis vector `perm[j]`.
pub fn permutation_matrix(perm: &[usize]) -> IntMatrix {
    let n = perm.len();
    let mut m = IntMatrix::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        m.set(i, j, BigInt::from(1));
    }
    m
}
