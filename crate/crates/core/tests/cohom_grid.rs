use conekit::cohom::{
    chi_rr, cohomology_of_na, effective_ample_rewrite, floor_pullback_stats, h0_zero_by_degree, h1_vanish_eff_nef_big,
    km_family_cohomology, serre_dual, CanonicalDivisor, CohomStatus, FamilyDescriptor, Rule, TContext,
};
use conekit::km_surface::{ell, ell_prime, exc, gamma};
use conekit::qlattice::{NamedDivisor, Rat};

/// `⌊ψ*A⌋` written down by hand: each `E_i^T` pulls back to
/// `E_i + (ℓ_i + ℓ'_i)/2 + Γ/(2d-4)`.
fn floor_pullback_by_hand(d: usize, q1: usize, q2: usize) -> NamedDivisor {
    let mut out = NamedDivisor::zero();
    for i in 1..=q1 {
        out.add_term(exc(i), Rat::one());
    }
    for j in q1 + 1..=q1 + q2 {
        out.add_term(exc(j), Rat::int(-1));
        out.add_term(ell(j), Rat::int(-1));
        out.add_term(ell_prime(j), Rat::int(-1));
    }
    let gamma_coeff = Rat::new(q1 as i64 - q2 as i64, 2 * d as i64 - 4).floor();
    out.add_term(gamma(), gamma_coeff);
    out
}

fn expected_h1(q1: usize, q2: usize) -> u64 {
    if q2 == 0 {
        0
    } else if q1 >= q2 {
        (q2 - 1) as u64
    } else {
        q1 as u64
    }
}

fn grid(d_max: usize) -> impl Iterator<Item = FamilyDescriptor> {
    (3..=d_max)
        .flat_map(|d| (0..=d).flat_map(move |q1| (0..=d - q1).map(move |q2| FamilyDescriptor::new(d, q1, q2).unwrap())))
}

#[test]
fn floor_pullback_matches_hand_expansion() {
    for d in 3..=10 {
        let ctx = TContext::new(d).unwrap();
        for q1 in 0..=d {
            for q2 in 0..=d - q1 {
                let fam = FamilyDescriptor::new(d, q1, q2).unwrap();
                let stats = floor_pullback_stats(&ctx, fam).unwrap();
                assert_eq!(stats.divisor, floor_pullback_by_hand(d, q1, q2), "{fam:?}");
            }
        }
    }
}

#[test]
fn family_table_on_grid() {
    let mut last_d = 0;
    let mut ctx = None;
    for fam in grid(12) {
        if fam.d != last_d {
            ctx = Some(TContext::new(fam.d).unwrap());
            last_d = fam.d;
        }
        let ctx = ctx.as_ref().unwrap();
        let r = km_family_cohomology(ctx, fam).unwrap();
        assert_eq!(r.h1.value(), Some(expected_h1(fam.q1, fam.q2)), "{fam:?}");
        assert_eq!(r.h2, CohomStatus::ExactZero);
        if fam.q2 > 0 {
            assert_eq!(r.h0, CohomStatus::ExactZero);
        }
        assert!(r.is_consistent(), "{fam:?}");
        assert!(r.fully_certified(), "{fam:?}");
        let chi = chi_rr(ctx.psi.source(), &floor_pullback_by_hand(fam.d, fam.q1, fam.q2)).unwrap();
        assert_eq!(r.chi, chi, "{fam:?}");
    }
}

#[test]
fn spec_points() {
    let ctx5 = TContext::new(5).unwrap();
    let s = floor_pullback_stats(&ctx5, FamilyDescriptor::new(5, 3, 1).unwrap()).unwrap();
    assert_eq!((s.square, s.dot_minus_k), (Rat::int(-4), Rat::int(2)));
    assert_eq!(chi_rr(ctx5.psi.source(), &s.divisor).unwrap(), 0);

    let r = km_family_cohomology(&ctx5, FamilyDescriptor::new(5, 3, 2).unwrap()).unwrap();
    assert_eq!((r.chi, r.h1), (-1, CohomStatus::Exact(1)));

    let ctx3 = TContext::new(3).unwrap();
    let fam = FamilyDescriptor::new(3, 0, 3).unwrap();
    assert_eq!(fam.gamma_floor(), -2);
    let s = floor_pullback_stats(&ctx3, fam).unwrap();
    assert_eq!((s.square, s.dot_minus_k), (Rat::int(1), Rat::int(-3)));
    let r = km_family_cohomology(&ctx3, fam).unwrap();
    assert_eq!((r.chi, r.h1), (0, CohomStatus::ExactZero));

    let ctx14 = TContext::new(14).unwrap();
    let r = km_family_cohomology(&ctx14, FamilyDescriptor::new(14, 9, 3).unwrap()).unwrap();
    assert_eq!(r.h1, CohomStatus::Exact(2));

    let r = km_family_cohomology(&ctx5, FamilyDescriptor::new(5, 3, 0).unwrap()).unwrap();
    assert_eq!(r.h1, CohomStatus::ExactZero);
    assert_eq!(r.h0, CohomStatus::AtLeastOne);

    let s = floor_pullback_stats(&ctx5, FamilyDescriptor::new(5, 0, 0).unwrap()).unwrap();
    assert!(s.divisor.is_zero());
    assert_eq!((s.square, s.dot_minus_k), (Rat::zero(), Rat::zero()));
}

#[test]
fn serre_dual_basics() {
    let ctx = TContext::new(5).unwrap();
    let k = ctx.canonical_divisor().unwrap();
    assert!(serre_dual(&ctx, &k).unwrap().is_zero());
    assert_eq!(serre_dual(&ctx, &NamedDivisor::zero()).unwrap(), k);
    assert_eq!(
        serre_dual(&ctx.surface, &NamedDivisor::zero()).unwrap(),
        ctx.surface.canonical_divisor().unwrap()
    );
}

#[test]
fn degree_rule() {
    let ctx = TContext::new(5).unwrap();
    let a: NamedDivisor = "E_1 + E_2 + E_3 - E_4".parse().unwrap();
    let dual = serre_dual(&ctx, &a.plus(&NamedDivisor::term(Rat::int(-1), exc(5)))).unwrap();
    // Each E_i^T has degree 1/(d-2) against -K_T, so the dual has degree
    // -2/(2d-4)·2 - (q1-q2-1)·2/(2d-4).
    let unit = Rat::new(2, 2 * 5 - 4);
    let expected = &(&Rat::int(-2) * &unit) - &(&Rat::int(3 - 1 - 1) * &unit);
    assert_eq!(ctx.psi.target_degree(&dual).unwrap(), expected);
    assert_eq!(h0_zero_by_degree(&ctx, &dual).unwrap(), CohomStatus::ExactZero);
    assert_eq!(
        h0_zero_by_degree(&ctx, &NamedDivisor::zero()).unwrap(),
        CohomStatus::Unknown
    );
    assert_eq!(
        h0_zero_by_degree(&ctx, &NamedDivisor::term(Rat::int(-1), exc(1))).unwrap(),
        CohomStatus::ExactZero
    );
}

/// Brute-force oracle: search over shifts of `±2` between pairs of components.
fn brute_force_effective(coeffs: &[i64], depth: usize) -> bool {
    if coeffs.iter().all(|&c| c >= 0) {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let n = coeffs.len();
    for i in 0..n {
        for j in 0..n {
            if i != j && coeffs[i] < 0 {
                let mut next = coeffs.to_vec();
                next[i] += 2;
                next[j] -= 2;
                if brute_force_effective(&next, depth - 1) {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn rewrite_matches_brute_force() {
    let ctx = TContext::new(4).unwrap();
    for a in -3..=3i64 {
        for b in -3..=3i64 {
            for c in -2..=2i64 {
                let coeffs = [a, b, c, 0];
                let d = NamedDivisor::from_terms((1..=4).map(|i| (exc(i), Rat::int(coeffs[i - 1]))));
                let got = effective_ample_rewrite(&ctx, &d).unwrap();
                assert_eq!(got.is_some(), brute_force_effective(&coeffs, 5), "{coeffs:?}");
                if let Some(rep) = got {
                    assert!(rep.is_effective());
                    let diff = rep.minus(&d);
                    let total: Rat = diff.terms().map(|(_, c)| c.clone()).sum();
                    assert!(total.is_zero());
                    assert!(diff.terms().all(|(_, c)| (c / &Rat::int(2)).is_integer()));
                }
            }
        }
    }
}

#[test]
fn multiples_of_plt_divisor() {
    for q in 2..=5usize {
        let d = q + 2;
        let ctx = TContext::new(d).unwrap();
        let fam = FamilyDescriptor::new(d, q, 1).unwrap();
        let a = fam.divisor();
        let two_a = effective_ample_rewrite(&ctx, &a.scale(&Rat::int(2))).unwrap().unwrap();
        assert_eq!(two_a.coeff(&exc(q + 1)), Rat::int(2 * (q as i64 - 1)));
        let three_a = effective_ample_rewrite(&ctx, &a.scale(&Rat::int(3))).unwrap().unwrap();
        let mut expected = NamedDivisor::from_terms((1..=q).map(|i| (exc(i), Rat::one())));
        expected.add_term(exc(q + 1), Rat::int(2 * q as i64 - 3));
        assert_eq!(three_a, expected);

        for n in 0..=6 {
            let r = cohomology_of_na(&ctx, fam, n, None).unwrap();
            assert_eq!(r.h1, CohomStatus::ExactZero, "q={q} n={n}");
            assert!(r.is_consistent() && r.fully_certified());
        }
        let r = cohomology_of_na(&ctx, fam, 1, Some(q + 2)).unwrap();
        assert_eq!(r.h1, CohomStatus::Exact(1));
        for n in 0..=6 {
            let r = cohomology_of_na(&ctx, fam, n, Some(q + 2)).unwrap();
            assert_eq!(r.h2, CohomStatus::ExactZero, "q={q} n={n}");
        }
        let v = h1_vanish_eff_nef_big(&ctx, &a.scale(&Rat::int(2))).unwrap();
        assert!(v.applicable);
        assert!(v.rules.contains(&Rule::EffNefBigVanishing));
        assert!(!h1_vanish_eff_nef_big(&ctx, &NamedDivisor::zero()).unwrap().applicable);
    }
}

#[test]
fn structure_sheaf() {
    let ctx = TContext::new(5).unwrap();
    let fam = FamilyDescriptor::new(5, 3, 1).unwrap();
    let r = cohomology_of_na(&ctx, fam, 0, None).unwrap();
    assert_eq!(
        (r.h0, r.h1, r.h2, r.chi),
        (CohomStatus::Exact(1), CohomStatus::ExactZero, CohomStatus::ExactZero, 1)
    );
    assert!(effective_ample_rewrite(&ctx, &NamedDivisor::term(Rat::int(-1), exc(1)))
        .unwrap()
        .is_none());
}
