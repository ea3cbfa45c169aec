//! Exact specialization maps for Grothendieck groups of varieties and of
//! geometric triangulated categories, computed from snc degeneration data.
//!
//! The ring layer ([`VarElement`], [`SgtElement`]) is exact over `BigInt`.
//! Models ([`SncModel`]) carry closed-stratum classes; [`blowup`] moves
//! and the builders in [`kulikov`] and [`abelian`] produce them. [`mukai`]
//! covers the lattice side.

pub mod abelian;
pub mod blowup;
pub mod catalog;
pub mod error;
pub mod formats;
pub mod kulikov;
pub mod matrix;
pub mod mukai;
pub mod random;
pub mod ring;
pub mod snc;
pub mod term;

pub use abelian::{
    f_tilde, is_symplectic, kunnemann_rho, BlockHom, KunnemannOrbitData, KunnemannRho,
};
pub use blowup::{blow_up_stratum, BlowupMove};
pub use catalog::{AtomicLabel, Catalog, CatalogEntry, LabelKind};
pub use error::{Error, Result};
pub use kulikov::{build_type_ii, build_type_iii, KulikovData, TypeIIData, TypeIIIData};
pub use matrix::{IntMatrix, RatMatrix};
pub use mukai::{
    classify_monodromy, IntegerLattice, KulikovType, MonodromyOperator, MukaiVector, PeriodPoint,
};
pub use ring::{ClassMonomial, SgtElement, VarElement};
pub use snc::{ComponentId, Face, SncModel, Violation, ViolationKind};
