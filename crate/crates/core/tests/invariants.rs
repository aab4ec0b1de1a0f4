use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use raynaud_core::equivariant::{equiv_semistable, to_parabolic, to_parabolic_parts, CoverContext, EquivBundle};
use raynaud_core::harness::random_automorphism;
use raynaud_core::hompar::{hom_par_basis, hom_par_dim, is_parabolic_map};
use raynaud_core::parabolic::{gauge_twist, line_sum_build, oracle_semistable_line_sum, ParLineData, ParabolicBundle, Weight};
use raynaud_core::projline::PointOnLine;
use raynaud_core::Rational;

fn point(i: u8) -> PointOnLine {
    match i {
        0 => PointOnLine::zero(),
        1 => PointOnLine::Infinity,
        _ => PointOnLine::Finite(Rational::from_int(i as i64)),
    }
}

fn line() -> impl Strategy<Value = ParLineData> {
    (-2i64..=2, proptest::collection::vec((0u8..3, 0i64..4), 0..3)).prop_map(|(deg, ws)| {
        ParLineData::new(deg, ws.into_iter().map(|(p, a)| (point(p), Weight::frac(a, 4))))
    })
}

fn line_sum() -> impl Strategy<Value = Vec<ParLineData>> {
    proptest::collection::vec(line(), 1..4)
}

/// `Hom_par` between line sums, entry by entry: a polynomial of degree at most
/// `b - a` vanishing at every point where the source weight is larger.
fn entrywise(src: &[ParLineData], dst: &[ParLineData]) -> usize {
    let mut total = 0i64;
    for a in src {
        for b in dst {
            let points: std::collections::BTreeSet<&PointOnLine> = a.weights().keys().collect();
            let zeros = points.iter().filter(|p| a.weight_at(p) > b.weight_at(p)).count() as i64;
            total += (b.degree - a.degree + 1 - zeros).max(0);
        }
    }
    total as usize
}

fn twist(e: &ParabolicBundle, seed: u64) -> ParabolicBundle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_automorphism(e.underlying(), &mut rng);
    gauge_twist(e, &g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hom_par_matches_entrywise_count(s in line_sum(), t in line_sum()) {
        let (e, f) = (line_sum_build(&s).unwrap(), line_sum_build(&t).unwrap());
        prop_assert_eq!(hom_par_dim(&e, &f).unwrap(), entrywise(&s, &t));
    }

    #[test]
    fn hom_par_is_gauge_invariant(s in line_sum(), t in line_sum(), seed in any::<u64>()) {
        let (e, f) = (line_sum_build(&s).unwrap(), line_sum_build(&t).unwrap());
        let base = hom_par_dim(&e, &f).unwrap();
        let (ge, gf) = (twist(&e, seed), twist(&f, seed ^ 1));
        prop_assert_eq!(hom_par_dim(&ge, &f).unwrap(), base);
        prop_assert_eq!(hom_par_dim(&e, &gf).unwrap(), base);
        prop_assert_eq!(hom_par_dim(&ge, &gf).unwrap(), base);
    }

    #[test]
    fn endomorphisms_include_scalars(s in line_sum(), seed in any::<u64>()) {
        let e = twist(&line_sum_build(&s).unwrap(), seed);
        prop_assert!(hom_par_dim(&e, &e).unwrap() >= 1);
    }

    #[test]
    fn hom_par_is_additive(a in line_sum(), b in line_sum(), t in line_sum()) {
        let (e1, e2, f) = (line_sum_build(&a).unwrap(), line_sum_build(&b).unwrap(), line_sum_build(&t).unwrap());
        let sum = e1.direct_sum(&e2);
        prop_assert_eq!(
            hom_par_dim(&sum, &f).unwrap(),
            hom_par_dim(&e1, &f).unwrap() + hom_par_dim(&e2, &f).unwrap()
        );
        prop_assert_eq!(
            hom_par_dim(&f, &sum).unwrap(),
            hom_par_dim(&f, &e1).unwrap() + hom_par_dim(&f, &e2).unwrap()
        );
    }

    #[test]
    fn basis_members_are_parabolic(s in line_sum(), t in line_sum(), seed in any::<u64>()) {
        let e = line_sum_build(&s).unwrap();
        let f = twist(&line_sum_build(&t).unwrap(), seed);
        let basis = hom_par_basis(&e, &f).unwrap();
        prop_assert_eq!(basis.len(), hom_par_dim(&e, &f).unwrap());
        for phi in &basis {
            prop_assert!(is_parabolic_map(&e, &f, phi).unwrap());
        }
    }

    #[test]
    fn parabolic_degree_is_additive_and_dual_negates(a in line_sum(), b in line_sum()) {
        let (e1, e2) = (line_sum_build(&a).unwrap(), line_sum_build(&b).unwrap());
        prop_assert_eq!(e1.direct_sum(&e2).parabolic_degree(), e1.parabolic_degree() + e2.parabolic_degree());
        for l in &a {
            prop_assert_eq!(l.dual().parabolic_degree(), -l.parabolic_degree());
            prop_assert_eq!(l.dual().dual(), l.clone());
        }
    }

    #[test]
    fn cover_semistability_matches_line_sum_oracle(
        n in 2u32..5,
        lines in proptest::collection::vec((-5i64..=5, 0i64..5), 1..4),
    ) {
        let ctx = CoverContext::new(n).unwrap();
        let b = EquivBundle::new(ctx, lines).unwrap();
        prop_assert_eq!(equiv_semistable(&b), oracle_semistable_line_sum(&to_parabolic_parts(&b)));
        let pd = to_parabolic(&b).parabolic_degree() * Rational::from_int(n as i64);
        prop_assert_eq!(pd, Rational::from_int(b.degree()));
    }
}
