//! Exact identity checks behind the identity campaign. Each check returns an
//! [`IdentityTally`] rather than failing, so campaigns can merge them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::IdentityTally;
use crate::equivariant::{
    build_w, equiv_h0, filtration_subspace, from_parabolic, to_parabolic, to_parabolic_parts, CoverContext,
    EquivBundle,
};
use crate::error::Result;
use crate::exactlin::Rational;
use crate::hompar::hom_par_dim;
use crate::parabolic::{par_dual_line, par_tensor_line, ParLineData, ParabolicBundle};
use crate::projline::{hom_dim, pushforward_cyclic, SplitBundle};
use crate::raynaud::{build_r_two_point, raynaud_cover_line, Mode, Provenance, RaynaudBundle, RaynaudRequest};

/// Seeded random linearized bundles of rank 1..=`max_rank` with degrees in
/// `[-5, 5]` and arbitrary characters.
pub fn random_equiv_bundles(ctx: CoverContext, count: usize, max_rank: usize, seed: u64) -> Vec<EquivBundle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ctx.n() as i64;
    (0..count)
        .map(|_| {
            let rank = rng.gen_range(1..=max_rank);
            let lines: Vec<(i64, i64)> = (0..rank).map(|_| (rng.gen_range(-5..=5), rng.gen_range(0..n))).collect();
            EquivBundle::new(ctx, lines).expect("nonempty")
        })
        .collect()
}

fn sorted(mut v: Vec<ParLineData>) -> Vec<ParLineData> {
    v.sort();
    v
}

fn show(b: &EquivBundle) -> String {
    let lines: Vec<String> = b.lines().iter().map(|l| l.to_string()).collect();
    format!("N={} [{}]", b.ctx().n(), lines.join(", "))
}

/// `N * pardeg(to_parabolic(B)) = deg B`.
pub fn check_degree_relation(bundles: &[EquivBundle]) -> IdentityTally {
    let mut t = IdentityTally::default();
    for b in bundles {
        let lhs = to_parabolic(b).parabolic_degree() * Rational::from_int(b.ctx().n() as i64);
        t.record(lhs == Rational::from_int(b.degree()), || {
            format!("{}: N*pardeg = {lhs}, degree = {}", show(b), b.degree())
        });
    }
    t
}

/// Both composites of the correspondence are the identity.
pub fn check_round_trip(bundles: &[EquivBundle]) -> IdentityTally {
    let mut t = IdentityTally::default();
    for b in bundles {
        let parts = to_parabolic_parts(b);
        let back = from_parabolic(&parts, b.ctx());
        let ok = matches!(&back, Ok(x) if x.lines() == b.lines());
        t.record(ok, || format!("{}: from_parabolic(to_parabolic(B)) = {:?}", show(b), back));
        let again = back.map(|x| to_parabolic_parts(&x));
        let ok = matches!(&again, Ok(p) if *p == parts);
        t.record(ok, || format!("{}: to_parabolic(from_parabolic(P)) differs", show(b)));
    }
    t
}

/// Tensor product, dual and direct sum commute with the correspondence.
/// Consecutive bundles are paired.
pub fn check_functoriality(bundles: &[EquivBundle]) -> IdentityTally {
    let mut t = IdentityTally::default();
    for (k, a) in bundles.iter().enumerate() {
        let b = &bundles[(k + 1) % bundles.len()];
        let (pa, pb) = (to_parabolic_parts(a), to_parabolic_parts(b));

        let lhs = a.tensor(b).map(|x| sorted(to_parabolic_parts(&x)));
        let rhs = sorted(pa.iter().flat_map(|x| pb.iter().map(move |y| par_tensor_line(x, y))).collect());
        t.record(matches!(&lhs, Ok(l) if *l == rhs), || format!("tensor: {} and {}", show(a), show(b)));

        let lhs = to_parabolic_parts(&a.dual());
        let rhs: Vec<ParLineData> = pa.iter().map(par_dual_line).collect();
        t.record(lhs == rhs, || format!("dual: {}", show(a)));

        let lhs = a.direct_sum(b).map(|x| to_parabolic(&x));
        let rhs = to_parabolic(a).direct_sum(&to_parabolic(b));
        t.record(matches!(&lhs, Ok(l) if l.same_as(&rhs)), || {
            format!("direct sum: {} and {}", show(a), show(b))
        });
    }
    t
}

/// Invariant sections on the cover equal sections of the parabolic
/// correspondent, and equal `Hom_par` from the trivial parabolic line.
pub fn check_invariant_sections(bundles: &[EquivBundle]) -> Result<IdentityTally> {
    let mut t = IdentityTally::default();
    let trivial = ParabolicBundle::trivial(SplitBundle::line(0));
    for b in bundles {
        let (_, inv) = equiv_h0(b);
        let par = to_parabolic(b);
        let h0 = par.underlying().cohomology().0;
        t.record(inv == h0, || format!("{}: invariant sections {inv}, h0 {h0}", show(b)));
        let hp = hom_par_dim(&trivial, &par)? as u64;
        t.record(inv == hp, || format!("{}: invariant sections {inv}, Hom_par(O, V) {hp}", show(b)));
    }
    Ok(t)
}

/// All sections on the cover equal `Hom_par(W, V)`.
pub fn check_sections_from_w(bundles: &[EquivBundle]) -> Result<IdentityTally> {
    let mut t = IdentityTally::default();
    let mut w_cache: Vec<(u32, ParabolicBundle)> = Vec::new();
    for b in bundles {
        let n = b.ctx().n();
        if !w_cache.iter().any(|(m, _)| *m == n) {
            w_cache.push((n, build_w(b.ctx()).1));
        }
        let wpar = &w_cache.iter().find(|(m, _)| *m == n).expect("cached").1;
        let (total, _) = equiv_h0(b);
        let hp = hom_par_dim(wpar, &to_parabolic(b))? as u64;
        t.record(total == hp, || format!("{}: sections {total}, Hom_par(W, V) {hp}", show(b)));
    }
    Ok(t)
}

fn induced_type(r: &RaynaudBundle) -> SplitBundle {
    match &r.provenance {
        Provenance::TwoPoint { induced, .. } => induced.splitting(),
        Provenance::SinglePoint { .. } => unreachable!("two-point bundle expected"),
    }
}

/// `hom_dim(R~, F) = hom_par_dim(W (x) R', to_parabolic(F))` for a two-point
/// Raynaud bundle.
pub fn check_induced_hom_bridge(r: &RaynaudBundle, bundles: &[EquivBundle]) -> Result<IdentityTally> {
    let mut t = IdentityTally::default();
    let cover_type = induced_type(r);
    for b in bundles {
        let lhs = hom_dim(&cover_type, &b.splitting());
        let rhs = hom_par_dim(&r.bundle, &to_parabolic(b))? as u64;
        t.record(lhs == rhs, || {
            format!(
                "r={} d={}: {}: hom on the cover {lhs}, Hom_par {rhs}",
                r.request.r,
                r.request.d,
                show(b)
            )
        });
    }
    Ok(t)
}

/// The bridge over a grid of `(r, d, N)` with `per_cell` random bundles each.
pub fn induced_hom_bridge_grid(
    ranks: &[u32],
    ns: &[u32],
    dn_range: std::ops::RangeInclusive<i64>,
    per_cell: usize,
    seed: u64,
) -> Result<IdentityTally> {
    let mut t = IdentityTally::default();
    let mut cell = 0u64;
    for &n in ns {
        let ctx = CoverContext::new(n)?;
        for &r in ranks {
            for dn in dn_range.clone() {
                let req = RaynaudRequest::new(r, Rational::new(dn, n as i64), n, Mode::TwoPoint)?;
                let rb = build_r_two_point(&req)?;
                let bundles = random_equiv_bundles(ctx, per_cell, 3, seed.wrapping_add(cell));
                t.merge(check_induced_hom_bridge(&rb, &bundles)?);
                cell += 1;
            }
        }
    }
    Ok(t)
}

/// `hom_dim(O(m)^N, E) = N * hom_dim(O(m), E)`.
pub fn check_cover_multiplicity(m: i64, n: u32, bundles: &[EquivBundle]) -> IdentityTally {
    let mut t = IdentityTally::default();
    let many = SplitBundle::new(vec![m; n as usize]).expect("N >= 2");
    let one = SplitBundle::line(m);
    for b in bundles {
        let e = b.splitting();
        let lhs = hom_dim(&many, &e);
        let rhs = n as u64 * hom_dim(&one, &e);
        t.record(lhs == rhs, || format!("m={m}: {}: {lhs} vs N*{}", show(b), rhs / n as u64));
    }
    t
}

/// Dimensions, weights and assembled flags of the vanishing-order filtration
/// against `W`.
pub fn check_w_filtration(ctx: CoverContext) -> Result<IdentityTally> {
    let mut t = IdentityTally::default();
    let n = ctx.n();
    let (what, wpar) = build_w(ctx);
    t.record(wpar.parabolic_degree().is_zero(), || format!("N={n}: pardeg(W) = {}", wpar.parabolic_degree()));
    t.record(what.degree() == 0, || format!("N={n}: deg(W~) = {}", what.degree()));
    let pushed = pushforward_cyclic(0, n)?;
    t.record(*wpar.underlying() == pushed, || format!("N={n}: underlying type of W differs from the direct image"));
    for p in ctx.branch_points() {
        let mut prev = None;
        for j in (1..=n).rev() {
            let (basis, weight) = filtration_subspace(j, &p, ctx)?;
            t.record(basis.rank() == j as usize, || format!("N={n} at {p}: dim W^{j} = {}", basis.rank()));
            let expect = Rational::new((n - j) as i64, n as i64);
            t.record(*weight.value() == expect, || format!("N={n} at {p}: weight of W^{j} is {weight}"));
            if let Some(bigger) = prev.replace(basis.clone()) {
                let bigger: crate::exactlin::RatMatrix = bigger;
                let inside = bigger.vstack(&basis)?.rank() == bigger.rank();
                t.record(inside, || format!("N={n} at {p}: W^{j} not inside W^{}", j + 1));
            }
        }
        let built = crate::equivariant::filtration_flag(&p, ctx)?;
        let ok = wpar.flag_or_trivial(&p).same_as(&built);
        t.record(ok, || format!("N={n} at {p}: assembled flag differs from W"));
    }
    Ok(t)
}

/// Every splitting type of rank `1..=max_rank` with entries in `lo..=hi`:
/// `hom_dim(O(floor(D/r) + 1), E) = 0` exactly when `E` has constant type and
/// `r | D`.
pub fn check_cover_raynaud_property(max_rank: usize, lo: i64, hi: i64) -> Result<IdentityTally> {
    use itertools::Itertools;
    let mut t = IdentityTally::default();
    for r in 1..=max_rank {
        for degs in (lo..=hi).combinations_with_replacement(r) {
            let e = SplitBundle::new(degs)?;
            let big_d = e.degree();
            let m = raynaud_cover_line(r as u32, big_d)?;
            let vanishes = hom_dim(&SplitBundle::line(m), &e) == 0;
            let expect = e.is_semistable() && big_d.rem_euclid(r as i64) == 0;
            t.record(vanishes == expect, || format!("type {:?}: m = {m}, hom vanishes {vanishes}", e.degrees()));
        }
    }
    Ok(t)
}

/// Names of the eight families checked by the identity campaign.
pub const FAMILIES: [&str; 8] = [
    "degree_relation",
    "round_trip",
    "functoriality",
    "invariant_sections",
    "sections_from_w",
    "induced_hom_bridge",
    "cover_multiplicity",
    "w_filtration",
];

/// Runs all eight families on one sample. `bridge` supplies the two-point
/// Raynaud bundle for the bridge and multiplicity checks.
pub(crate) fn run_families(
    ctx: CoverContext,
    bundles: &[EquivBundle],
    bridge: &RaynaudBundle,
) -> Result<Vec<(&'static str, IdentityTally)>> {
    let m = match &bridge.provenance {
        Provenance::TwoPoint { m, .. } => *m,
        Provenance::SinglePoint { .. } => unreachable!("two-point bundle expected"),
    };
    Ok(vec![
        (FAMILIES[0], check_degree_relation(bundles)),
        (FAMILIES[1], check_round_trip(bundles)),
        (FAMILIES[2], check_functoriality(bundles)),
        (FAMILIES[3], check_invariant_sections(bundles)?),
        (FAMILIES[4], check_sections_from_w(bundles)?),
        (FAMILIES[5], check_induced_hom_bridge(bridge, bundles)?),
        (FAMILIES[6], check_cover_multiplicity(m, ctx.n(), bundles)),
        (FAMILIES[7], check_w_filtration(ctx)?),
    ])
}

/// The single-line instance used in docs: `L(2, 0)` against `O(1)^2` for
/// `N = 2` has a four-dimensional Hom space.
pub fn worked_bridge_instance() -> Result<(u64, u64)> {
    let ctx = CoverContext::new(2)?;
    let req = RaynaudRequest::new(1, Rational::zero(), 2, Mode::TwoPoint)?;
    let rb = build_r_two_point(&req)?;
    let f = EquivBundle::line(ctx, 2, 0);
    let lhs = hom_dim(&induced_type(&rb), &f.splitting());
    let rhs = hom_par_dim(&rb.bundle, &to_parabolic(&f))? as u64;
    Ok((lhs, rhs))
}
