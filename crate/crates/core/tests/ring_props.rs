use num_bigint::BigInt;
use proptest::prelude::*;

use degenkit_core::ring::{ClassMonomial, SgtElement, VarElement};
use degenkit_core::Catalog;

const NAMES: &[&str] = &["E", "Ep", "K3", "P2", "Ab2", "RuledE", "C_g2", "RatSurf_e9"];

fn element() -> impl Strategy<Value = VarElement> {
    let term = (
        prop::collection::vec(0..NAMES.len(), 0..=2),
        0u32..4,
        -9i64..=9,
    );
    prop::collection::vec(term, 0..6).prop_map(|terms| {
        let mut out = VarElement::zero();
        for (idx, k, c) in terms {
            let m = ClassMonomial::new(idx.into_iter().map(|i| NAMES[i]));
            out.add_term(m, k, BigInt::from(c));
        }
        out
    })
}

/// Independent Euler evaluation straight from the term list.
fn euler_oracle(a: &VarElement, cat: &Catalog) -> BigInt {
    let mut total = BigInt::from(0);
    for (m, _, c) in a.terms() {
        let mut e = c.clone();
        for l in m.labels() {
            e *= cat.label(l).unwrap().euler;
        }
        total += e;
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &VarElement::one(), a.clone());
    }

    #[test]
    fn euler_is_a_ring_map(a in element(), b in element()) {
        let cat = Catalog::default_catalog();
        let ea = a.euler(&cat).unwrap();
        let eb = b.euler(&cat).unwrap();
        prop_assert_eq!(&ea, &euler_oracle(&a, &cat));
        prop_assert_eq!((&a * &b).euler(&cat).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).euler(&cat).unwrap(), &ea + &eb);
        prop_assert_eq!(a.mu(&cat).unwrap().euler(&cat).unwrap(), ea);
    }

    #[test]
    fn mu_kills_l_minus_one(a in element(), b in element()) {
        let cat = Catalog::default_catalog();
        let ma = a.mu(&cat).unwrap();
        prop_assert_eq!(&a.shift_l(1).mu(&cat).unwrap(), &ma);
        prop_assert_eq!(&a.reduce_mod_l_minus_1().mu(&cat).unwrap(), &ma);
        prop_assert_eq!((&a + &b).mu(&cat).unwrap(), ma.clone() + b.mu(&cat).unwrap());
        prop_assert_eq!(
            (&a * &b).mu(&cat).unwrap(),
            ma.formal_product(&b.mu(&cat).unwrap())
        );
    }

    #[test]
    fn reduction_is_an_idempotent_projection(a in element(), b in element()) {
        let r = a.reduce_mod_l_minus_1();
        prop_assert_eq!(&r.reduce_mod_l_minus_1(), &r);
        prop_assert!(r.terms().all(|(_, k, _)| k == 0));
        prop_assert_eq!(
            (&a + &b).reduce_mod_l_minus_1(),
            &r + &b.reduce_mod_l_minus_1()
        );
    }

    #[test]
    fn text_roundtrip(a in element()) {
        let back: VarElement = a.to_string().parse().unwrap();
        prop_assert_eq!(&back, &a);
        let cat = Catalog::default_catalog();
        let s = a.mu(&cat).unwrap();
        let back: SgtElement = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }
}
