//! Seeded generators for property suites and benchmarks.
//!
//! Models are built complex-first: a random face-closed simplicial complex on
//! at most five vertices, then a class for each face that respects the
//! dimension law. Classes use labels from the default catalog.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blowup::BlowupMove;
use crate::ring::{ClassMonomial, VarElement};
use crate::snc::{numbered, ComponentId, Face, SncModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// (label, dim) pairs from the default catalog used in random classes.
const LABELS: &[(&str, u32)] = &[
    ("E", 1),
    ("C_g2", 1),
    ("P1", 1),
    ("K3", 2),
    ("RuledE", 2),
    ("Ab2", 2),
    ("RatSurf_e7", 2),
    ("Ab3", 3),
];

/// Random class of exact dimension `target`: one positive top-dimensional
/// term plus up to two lower-dimensional terms of either sign.
pub fn random_class<R: Rng>(rng: &mut R, target: u32) -> VarElement {
    let mut out = VarElement::zero();
    let (m, k) = random_monomial(rng, target, true);
    out.add_term(m, k, BigInt::from(rng.gen_range(1..=3)));
    if target > 0 {
        for _ in 0..rng.gen_range(0..=2) {
            let lower = rng.gen_range(0..target);
            let (m, k) = random_monomial(rng, lower, false);
            let c = *[-2i64, -1, 1, 2].choose(rng).unwrap();
            out.add_term(m, k, BigInt::from(c));
        }
    }
    out
}

fn random_monomial<R: Rng>(rng: &mut R, dim: u32, top: bool) -> (ClassMonomial, u32) {
    let fits: Vec<&(&str, u32)> = LABELS.iter().filter(|(_, d)| *d <= dim).collect();
    let use_label = !fits.is_empty() && rng.gen_bool(if top { 0.5 } else { 0.4 });
    if use_label {
        let (name, d) = **fits.choose(rng).unwrap();
        (ClassMonomial::new([name]), dim - d)
    } else {
        (ClassMonomial::unit(), dim)
    }
}

/// Random valid snc model with `1..=max_components` components.
pub fn random_model<R: Rng>(rng: &mut R, max_components: u32) -> SncModel {
    let generic_dim = rng.gen_range(0..=3u32);
    let n = rng.gen_range(1..=max_components.max(1));
    let ids = numbered(n);
    let max_face = (generic_dim as usize + 1).min(n as usize);

    let mut faces: BTreeSet<Face> = ids.iter().cloned().map(Face::singleton).collect();
    let all = Face::new(ids.iter().cloned());
    let mut candidates: Vec<Face> = all
        .subsets()
        .into_iter()
        .filter(|f| f.len() >= 2 && f.len() <= max_face)
        .collect();
    candidates.shuffle(rng);
    let density = rng.gen_range(0.2..0.9);
    for f in candidates {
        if rng.gen_bool(density) {
            for sub in f.subsets() {
                if !sub.is_empty() {
                    faces.insert(sub);
                }
            }
        }
    }

    let mut comps = Vec::new();
    let mut strata = Vec::new();
    for f in faces {
        let target = generic_dim + 1 - f.len() as u32;
        let class = random_class(rng, target);
        if f.len() == 1 {
            let id = f.ids().next().unwrap().clone();
            comps.push((id, rng.gen_range(1..=3), class));
        } else {
            strata.push((f, class));
        }
    }
    SncModel::new(generic_dim, comps, strata)
}

/// A random admissible blow-up center (a nonempty stratum with `|J| >= 2`).
pub fn random_center<R: Rng>(rng: &mut R, model: &SncModel, new_id: &str) -> Option<BlowupMove> {
    let centers: Vec<&Face> = model
        .strata()
        .map(|(f, _)| f)
        .filter(|f| f.len() >= 2)
        .collect();
    let center = (*centers.choose(rng)?).clone();
    Some(BlowupMove::new(
        center,
        ComponentId::new(new_id).expect("valid id"),
    ))
}

/// Random element for ring property tests: up to six terms, coefficients in [-9, 9].
pub fn random_element<R: Rng>(rng: &mut R) -> VarElement {
    let names = ["A", "B", "E", "K3"];
    let mut out = VarElement::zero();
    for _ in 0..rng.gen_range(0..=6) {
        let len = rng.gen_range(0..=2);
        let labels: Vec<&str> = (0..len).map(|_| *names.choose(rng).unwrap()).collect();
        out.add_term(
            ClassMonomial::new(labels),
            rng.gen_range(0..4),
            BigInt::from(rng.gen_range(-9..=9)),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    #[test]
    fn generated_models_are_valid_and_reproducible() {
        let cat = Catalog::default_catalog();
        for seed in 0..200 {
            let m = random_model(&mut rng(seed), 5);
            assert!(
                m.violations(&cat).is_empty(),
                "seed {seed}: {:?}",
                m.violations(&cat)
            );
            assert_eq!(m, random_model(&mut rng(seed), 5));
        }
    }
}
