use conekit::contract::Contraction;
use conekit::km_surface::{build_km_surface, ell, ell_prime, exc, fibre, gamma, KmSurface};
use conekit::qlattice::{NamedDivisor, Rat};
use proptest::prelude::*;

/// `ψ*` by hand: `E_i^T ↦ E_i + (ℓ_i + ℓ'_i)/2 + Γ/(2d-4)` and `F^T ↦ F + Γ/(d-2)`.
fn hand_pullback(d: usize, a: &[i64], b: i64) -> NamedDivisor {
    let mut out = NamedDivisor::zero();
    let n = 2 * d as i64 - 4;
    let mut gamma_coeff = Rat::new(2 * b, n);
    for (k, &c) in a.iter().enumerate() {
        let i = k + 1;
        out.add_term(exc(i), Rat::int(c));
        out.add_term(ell(i), Rat::new(c, 2));
        out.add_term(ell_prime(i), Rat::new(c, 2));
        gamma_coeff += Rat::new(c, n);
    }
    out.add_term(fibre(), Rat::int(b));
    out.add_term(gamma(), gamma_coeff);
    out
}

fn target_divisor(a: &[i64], b: i64) -> NamedDivisor {
    let mut d = NamedDivisor::from_terms(a.iter().enumerate().map(|(k, &c)| (exc(k + 1), Rat::int(c))));
    d.add_term(fibre(), Rat::int(b));
    d
}

fn setup(d: usize) -> (KmSurface, Contraction) {
    let s = build_km_surface(d).unwrap();
    let psi = Contraction::km(&s).unwrap();
    (s, psi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pullback_matches_hand_formula(d in 3usize..=8, seed in proptest::collection::vec(-3i64..=3, 8), b in -2i64..=2) {
        let (s, psi) = setup(d);
        let a = &seed[..d];
        let div = target_divisor(a, b);
        let pb = psi.pullback(&div).unwrap();
        prop_assert_eq!(&pb, &hand_pullback(d, a, b));
        for c in s.contracted_curves() {
            prop_assert!(s.surface.intersect(&pb, &NamedDivisor::curve(c)).unwrap().is_zero());
        }
        prop_assert_eq!(psi.pushforward(&pb), div);
    }

    #[test]
    fn target_form_is_symmetric_bilinear(
        d in 3usize..=7,
        x in proptest::collection::vec(-3i64..=3, 7),
        y in proptest::collection::vec(-3i64..=3, 7),
        z in proptest::collection::vec(-3i64..=3, 7),
        k in -3i64..=3,
    ) {
        let (_, psi) = setup(d);
        let dx = target_divisor(&x[..d], x[0]);
        let dy = target_divisor(&y[..d], y[1]);
        let dz = target_divisor(&z[..d], 0);
        let dot = |p: &NamedDivisor, q: &NamedDivisor| psi.target_intersect(p, q).unwrap();
        prop_assert_eq!(dot(&dx, &dy), dot(&dy, &dx));
        let combo = dx.plus(&dz.scale(&Rat::int(k)));
        prop_assert_eq!(dot(&combo, &dy), &dot(&dx, &dy) + &(&Rat::int(k) * &dot(&dz, &dy)));
        let kt = psi.target_canonical().unwrap();
        for i in 1..=d {
            let e = NamedDivisor::curve(exc(i));
            prop_assert_eq!(dot(&kt, &dx), &Rat::int(-2) * &dot(&e, &dx));
        }
    }
}

#[test]
fn discrepancies_and_klt() {
    for d in 3..=20usize {
        let (s, psi) = setup(d);
        let table = psi.relative_canonical().unwrap();
        let expected_gamma = Rat::new(-(d as i64 - 3), d as i64 - 2);
        assert_eq!(table.get("Gamma"), Some(&expected_gamma), "d = {d}");
        for i in 1..=d {
            assert_eq!(table.get(&ell(i)), Some(&Rat::zero()));
            assert_eq!(table.get(&ell_prime(i)), Some(&Rat::zero()));
        }
        // K_S - Σ a_C C is orthogonal to every contracted curve.
        let mut rel = s.anticanonical_divisor().scale(&Rat::int(-1));
        for (c, a) in &table.entries {
            rel.add_term(c.as_str(), -a);
        }
        for c in s.contracted_curves() {
            assert!(s.surface.intersect(&rel, &NamedDivisor::curve(c)).unwrap().is_zero());
        }
        let sing = psi.classify_singularities(&NamedDivisor::zero()).unwrap();
        assert!(sing.class.is_klt(), "d = {d}");
        assert_eq!(sing.min_discrepancy, expected_gamma);
        assert!(sing.min_discrepancy > Rat::int(-1));
        assert_eq!(psi.picard_rank_after(), 1);
        assert!(psi.is_rank_one_fano());
    }
}

#[test]
fn degrees_and_ampleness() {
    let (_, psi) = setup(5);
    let e1 = NamedDivisor::curve(exc(1));
    assert_eq!(psi.target_degree(&e1).unwrap(), Rat::new(1, 3));
    assert!(psi.is_ample_rho1(&"E_1 + E_2 + E_3 - E_4".parse().unwrap()).unwrap());
    assert!(!psi.is_ample_rho1(&"E_1 - E_2".parse().unwrap()).unwrap());
    assert!(psi.is_numerically_trivial(&"E_1 - E_2".parse().unwrap()).unwrap());
    assert_eq!(psi.target_intersect(&e1, &e1).unwrap(), Rat::new(1, 6));
}
