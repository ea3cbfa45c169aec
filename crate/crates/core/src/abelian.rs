//! Abelian-variety data at lattice level.
//!
//! A homomorphism `f: A × Aᵗ -> B × Bᵗ` is a 2x2 block matrix of integer
//! matrices acting on rank-2g homology lattices; duals are plain transposes.
//! Künnemann-type degenerations are described by their cone orbits, each
//! contributing a contraction product with class `[Z_σ]·[A0]`.

use num_bigint::BigInt;

use crate::catalog::{toric_class, Catalog};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::ring::{SgtElement, VarElement};

/// `f = (α β; γ δ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockHom {
    pub alpha: IntMatrix,
    pub beta: IntMatrix,
    pub gamma: IntMatrix,
    pub delta: IntMatrix,
}

impl BlockHom {
    pub fn new(
        alpha: IntMatrix,
        beta: IntMatrix,
        gamma: IntMatrix,
        delta: IntMatrix,
    ) -> Result<Self> {
        let f = BlockHom {
            alpha,
            beta,
            gamma,
            delta,
        };
        f.check_shapes()?;
        Ok(f)
    }

    pub fn identity(rank: usize) -> Self {
        BlockHom {
            alpha: IntMatrix::identity(rank),
            beta: IntMatrix::zeros(rank, rank),
            gamma: IntMatrix::zeros(rank, rank),
            delta: IntMatrix::identity(rank),
        }
    }

    fn check_shapes(&self) -> Result<()> {
        let shape = |m: &IntMatrix| (m.rows(), m.cols());
        let s = shape(&self.alpha);
        for (name, m) in [
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("delta", &self.delta),
        ] {
            if shape(m) != s {
                return Err(Error::ShapeMismatch(format!(
                    "alpha is {}x{} but {name} is {}x{}",
                    s.0,
                    s.1,
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if s.0 == 0 || s.1 == 0 || s.0 % 2 != 0 || s.1 % 2 != 0 {
            return Err(Error::ShapeMismatch(format!(
                "blocks must be 2g_B x 2g_A with g >= 1, found {}x{}",
                s.0, s.1
            )));
        }
        Ok(())
    }

    /// The full `(2 rows) x (2 cols)` block matrix.
    pub fn to_matrix(&self) -> IntMatrix {
        let (r, c) = (self.alpha.rows(), self.alpha.cols());
        let mut m = IntMatrix::zeros(2 * r, 2 * c);
        m.put_block(0, 0, &self.alpha);
        m.put_block(0, c, &self.beta);
        m.put_block(r, 0, &self.gamma);
        m.put_block(r, c, &self.delta);
        m
    }

    pub fn from_matrix(m: &IntMatrix) -> Result<Self> {
        if !m.rows().is_multiple_of(2) || !m.cols().is_multiple_of(2) {
            return Err(Error::ShapeMismatch("odd block matrix".into()));
        }
        let (r, c) = (m.rows() / 2, m.cols() / 2);
        BlockHom::new(
            m.block(0, 0, r, c),
            m.block(0, c, r, c),
            m.block(r, 0, r, c),
            m.block(r, c, r, c),
        )
    }

    /// Composite `self ∘ other`.
    pub fn compose(&self, other: &BlockHom) -> Result<BlockHom> {
        let m = self
            .to_matrix()
            .checked_mul(&other.to_matrix())
            .map_err(|_| Error::ShapeMismatch("composite of incompatible blocks".into()))?;
        BlockHom::from_matrix(&m)
    }
}

/// `f̃ = (δᵀ  -βᵀ; -γᵀ  αᵀ)`.
pub fn f_tilde(f: &BlockHom) -> Result<BlockHom> {
    f.check_shapes()?;
    Ok(BlockHom {
        alpha: f.delta.transpose(),
        beta: -&f.beta.transpose(),
        gamma: -&f.gamma.transpose(),
        delta: f.alpha.transpose(),
    })
}

/// `f⁻¹ = f̃`, checked on both sides.
pub fn is_symplectic(f: &BlockHom) -> Result<bool> {
    f.check_shapes()?;
    if !f.alpha.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "symplectic check needs g_A = g_B, blocks are {}x{}",
            f.alpha.rows(),
            f.alpha.cols()
        )));
    }
    let m = f.to_matrix();
    let t = f_tilde(f)?.to_matrix();
    let id = IntMatrix::identity(m.rows());
    Ok(t.checked_mul(&m)? == id && m.checked_mul(&t)? == id)
}

/// One torus orbit class of cones, `Z_σ` given by its fan's f-vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub cone_dim: u32,
    pub f_vector: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KunnemannOrbitData {
    pub torus_rank: u32,
    pub abelian_label: String,
    pub good_reduction: bool,
    pub orbits: Vec<OrbitRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KunnemannRho {
    pub var: VarElement,
    pub sgt: SgtElement,
    /// `var` with `L -> 1`.
    pub reduced: VarElement,
}

impl KunnemannOrbitData {
    fn check(&self) -> Result<()> {
        if self.good_reduction {
            if !self.orbits.is_empty() {
                return Err(Error::BadOrbit("good reduction takes no orbits".into()));
            }
            return Ok(());
        }
        let r = self.torus_rank;
        if r < 1 {
            return Err(Error::BadOrbit("torus rank must be at least 1".into()));
        }
        let mut seen = vec![false; r as usize + 1];
        for (i, o) in self.orbits.iter().enumerate() {
            if o.cone_dim < 1 || o.cone_dim > r + 1 {
                return Err(Error::BadOrbit(format!(
                    "orbit {i}: cone dimension {} outside 1..={}",
                    o.cone_dim,
                    r + 1
                )));
            }
            let toric_dim = (r + 1 - o.cone_dim) as usize;
            if o.f_vector.len() != toric_dim + 1 {
                return Err(Error::BadOrbit(format!(
                    "orbit {i}: f-vector of length {} for a toric variety of dimension {toric_dim}",
                    o.f_vector.len()
                )));
            }
            seen[o.cone_dim as usize - 1] = true;
        }
        if let Some(s) = seen.iter().position(|x| !x) {
            return Err(Error::BadOrbit(format!(
                "no orbit of cone dimension {}",
                s + 1
            )));
        }
        Ok(())
    }
}

/// Specialization data of a split degeneration from its orbit decomposition:
/// `V = sum over orbits (-1)^(s-1) s [A0] [Z_σ]` with `s` the cone dimension,
/// or `[A0]` itself under good reduction.
pub fn kunnemann_rho(data: &KunnemannOrbitData, catalog: &Catalog) -> Result<KunnemannRho> {
    data.check()?;
    let a0 = catalog.expand(&data.abelian_label)?;
    let var = if data.good_reduction {
        a0
    } else {
        let mut v = VarElement::zero();
        for o in &data.orbits {
            let z = toric_class(&o.f_vector)?;
            let s = o.cone_dim as i64;
            let w = BigInt::from(if s % 2 == 1 { s } else { -s });
            v += (&a0 * &z).scale(&w);
        }
        v
    };
    let sgt = var.mu(catalog)?;
    let reduced = var.reduce_mod_l_minus_1();
    Ok(KunnemannRho { var, sgt, reduced })
}

/// Orbit data of the Tate-curve degeneration with an `n`-gon special fiber.
pub fn tate_ngon_orbits(n: u32, abelian_label: &str) -> KunnemannOrbitData {
    let mut orbits = Vec::new();
    for _ in 0..n {
        orbits.push(OrbitRecord {
            cone_dim: 1,
            f_vector: vec![1, 2],
        });
    }
    for _ in 0..n {
        orbits.push(OrbitRecord {
            cone_dim: 2,
            f_vector: vec![1],
        });
    }
    KunnemannOrbitData {
        torus_rank: 1,
        abelian_label: abelian_label.to_string(),
        good_reduction: false,
        orbits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snc::ngon_model;

    fn blocks(g: usize, a: i64, b: i64, c: i64, d: i64) -> BlockHom {
        let n = 2 * g;
        let s = |k: i64| IntMatrix::identity(n).map(|x| x * k);
        BlockHom::new(s(a), s(b), s(c), s(d)).unwrap()
    }

    #[test]
    fn tilde_examples() {
        let id = BlockHom::identity(2);
        assert_eq!(f_tilde(&id).unwrap(), id);
        let f = blocks(1, 0, 1, -1, 0);
        assert_eq!(f_tilde(&f).unwrap(), blocks(1, 0, -1, 1, 0));
    }

    #[test]
    fn symplectic_examples() {
        assert!(is_symplectic(&BlockHom::identity(2)).unwrap());
        assert!(is_symplectic(&blocks(1, 0, 1, -1, 0)).unwrap());
        assert!(!is_symplectic(&blocks(1, 2, 0, 0, 1)).unwrap());
        let rect = BlockHom::new(
            IntMatrix::zeros(2, 4),
            IntMatrix::zeros(2, 4),
            IntMatrix::zeros(2, 4),
            IntMatrix::zeros(2, 4),
        )
        .unwrap();
        assert!(matches!(is_symplectic(&rect), Err(Error::ShapeMismatch(_))));
        assert!(BlockHom::new(
            IntMatrix::zeros(2, 2),
            IntMatrix::zeros(2, 4),
            IntMatrix::zeros(2, 2),
            IntMatrix::zeros(2, 2)
        )
        .is_err());
    }

    #[test]
    fn tate_ngon() {
        let cat = Catalog::default_catalog();
        for n in [2u32, 3, 5] {
            let res = kunnemann_rho(&tate_ngon_orbits(n, "pt"), &cat).unwrap();
            let expect: VarElement = format!("{n}*L - {n}").parse().unwrap();
            assert_eq!(res.var, expect);
            assert!(res.sgt.is_zero());
            assert!(res.reduced.is_zero());
            let m = ngon_model(n);
            assert_eq!(m.rho_sgt_lift().unwrap(), res.var);
            assert_eq!(m.rho_sgt(&cat).unwrap(), res.sgt);
        }
    }

    #[test]
    fn abelian_part_factor() {
        let cat = Catalog::default_catalog();
        let res = kunnemann_rho(&tate_ngon_orbits(3, "Ep"), &cat).unwrap();
        assert_eq!(res.var.to_string(), "-3*[Ep] + 3*L*[Ep]");
        assert!(res.sgt.is_zero());
    }

    #[test]
    fn good_reduction_branch() {
        let cat = Catalog::default_catalog();
        let data = KunnemannOrbitData {
            torus_rank: 0,
            abelian_label: "Ab2".into(),
            good_reduction: true,
            orbits: vec![],
        };
        let res = kunnemann_rho(&data, &cat).unwrap();
        assert_eq!(res.var, VarElement::label("Ab2"));
        assert_eq!(res.sgt, SgtElement::label("Ab2"));
    }

    #[test]
    fn bad_orbits() {
        let cat = Catalog::default_catalog();
        let mut d = tate_ngon_orbits(3, "pt");
        d.orbits.retain(|o| o.cone_dim == 1);
        assert!(matches!(kunnemann_rho(&d, &cat), Err(Error::BadOrbit(_))));
        let mut d = tate_ngon_orbits(3, "pt");
        d.orbits[0].f_vector = vec![1, 2, 1];
        assert!(matches!(kunnemann_rho(&d, &cat), Err(Error::BadOrbit(_))));
        let mut d = tate_ngon_orbits(3, "pt");
        d.orbits[0].cone_dim = 3;
        assert!(matches!(kunnemann_rho(&d, &cat), Err(Error::BadOrbit(_))));
        let mut d = tate_ngon_orbits(3, "pt");
        d.good_reduction = true;
        assert!(matches!(kunnemann_rho(&d, &cat), Err(Error::BadOrbit(_))));
        let d = tate_ngon_orbits(3, "Nope");
        assert!(matches!(
            kunnemann_rho(&d, &cat),
            Err(Error::UnknownLabel(_))
        ));
        let mut d = tate_ngon_orbits(3, "pt");
        d.orbits[0].f_vector = vec![1, 0];
        assert!(matches!(
            kunnemann_rho(&d, &cat),
            Err(Error::MalformedFVector(_))
        ));
    }

    #[test]
    fn rank_two_orbits_vanish_mod_l_minus_one() {
        // one-vertex triangulation of the 2-torus: a hexagonal toric surface
        // over the vertex, three edge orbits, two triangle orbits
        let cat = Catalog::default_catalog();
        let mut orbits = Vec::new();
        orbits.push(OrbitRecord {
            cone_dim: 1,
            f_vector: vec![1, 6, 6],
        });
        for _ in 0..3 {
            orbits.push(OrbitRecord {
                cone_dim: 2,
                f_vector: vec![1, 2],
            });
        }
        for _ in 0..2 {
            orbits.push(OrbitRecord {
                cone_dim: 3,
                f_vector: vec![1],
            });
        }
        let d = KunnemannOrbitData {
            torus_rank: 2,
            abelian_label: "pt".into(),
            good_reduction: false,
            orbits,
        };
        let res = kunnemann_rho(&d, &cat).unwrap();
        // 6 - 2*3*2 + 3*2 = 0 at L = 1
        assert!(res.reduced.is_zero());
        assert!(res.sgt.is_zero());
    }
}
