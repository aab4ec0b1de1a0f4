//! Linearized bundles on the cyclic cover `z -> z^N` of the projective line.
//!
//! The cover is totally ramified over `0` and `inf`, with Galois group cyclic
//! of order `N` acting by `z -> zeta z`. Every linearized bundle splits into
//! linearized line bundles `L(e, c)`: the line bundle `O(e)` on the cover
//! whose monomial section `z^t` transforms by the character `c + t mod N`.
//! All group-action data is tracked as residues on monomial eigenbases, so
//! no roots of unity are ever needed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{RatMatrix, Rational};
use crate::parabolic::{line_sum_build, ParLineData, ParabolicBundle, QuasiParabolicFlag, FlagStep, Weight};
use crate::projline::{PointOnLine, SplitBundle};

/// The cover `z -> z^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverContext {
    n: u32,
}

impl CoverContext {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::usage(format!("cover degree N must be at least 2, got {n}")));
        }
        Ok(CoverContext { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Order of the Galois group.
    pub fn group_order(&self) -> u32 {
        self.n
    }

    /// The branch points `0` and `inf`.
    pub fn branch_points(&self) -> [PointOnLine; 2] {
        [PointOnLine::zero(), PointOnLine::Infinity]
    }

    fn residue(&self, x: i64) -> u32 {
        x.rem_euclid(self.n as i64) as u32
    }
}

/// `L(e, c)`: degree `e`, linearization character `c` on the constant section.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EquivLine {
    pub e: i64,
    pub c: u32,
}

impl fmt::Display for EquivLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.e, self.c)
    }
}

/// A linearized bundle, as a multiset of linearized lines.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivBundle {
    ctx: CoverContext,
    lines: Vec<EquivLine>,
}

impl EquivBundle {
    /// Characters are reduced modulo `N`.
    pub fn new(ctx: CoverContext, lines: impl IntoIterator<Item = (i64, i64)>) -> Result<Self> {
        let lines: Vec<EquivLine> = lines
            .into_iter()
            .map(|(e, c)| EquivLine { e, c: ctx.residue(c) })
            .collect();
        if lines.is_empty() {
            return Err(Error::usage("a linearized bundle needs at least one line"));
        }
        Ok(EquivBundle { ctx, lines })
    }

    pub fn line(ctx: CoverContext, e: i64, c: i64) -> Self {
        EquivBundle::new(ctx, [(e, c)]).expect("one line")
    }

    pub fn ctx(&self) -> CoverContext {
        self.ctx
    }

    pub fn lines(&self) -> &[EquivLine] {
        &self.lines
    }

    pub fn rank(&self) -> usize {
        self.lines.len()
    }

    pub fn degree(&self) -> i64 {
        self.lines.iter().map(|l| l.e).sum()
    }

    /// Splitting type of the bundle on the cover, forgetting the action.
    pub fn splitting(&self) -> SplitBundle {
        SplitBundle::new(self.lines.iter().map(|l| l.e).collect()).expect("nonempty")
    }

    /// Lines sorted, for multiset comparison.
    pub fn sorted_lines(&self) -> Vec<EquivLine> {
        let mut v = self.lines.clone();
        v.sort();
        v
    }

    pub fn same_multiset(&self, other: &EquivBundle) -> bool {
        self.ctx == other.ctx && self.sorted_lines() == other.sorted_lines()
    }

    fn check_ctx(&self, other: &EquivBundle) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::usage(format!(
                "cover degrees differ: {} vs {}",
                self.ctx.n, other.ctx.n
            )));
        }
        Ok(())
    }

    pub fn tensor(&self, other: &EquivBundle) -> Result<EquivBundle> {
        self.check_ctx(other)?;
        let lines = self
            .lines
            .iter()
            .flat_map(|a| {
                other.lines.iter().map(move |b| EquivLine {
                    e: a.e + b.e,
                    c: self.ctx.residue(a.c as i64 + b.c as i64),
                })
            })
            .collect();
        Ok(EquivBundle { ctx: self.ctx, lines })
    }

    pub fn dual(&self) -> EquivBundle {
        let lines = self
            .lines
            .iter()
            .map(|l| EquivLine {
                e: -l.e,
                c: self.ctx.residue(-(l.c as i64)),
            })
            .collect();
        EquivBundle { ctx: self.ctx, lines }
    }

    pub fn direct_sum(&self, other: &EquivBundle) -> Result<EquivBundle> {
        self.check_ctx(other)?;
        let mut lines = self.lines.clone();
        lines.extend_from_slice(&other.lines);
        Ok(EquivBundle { ctx: self.ctx, lines })
    }
}

/// The parabolic line bundle corresponding to one linearized line:
/// weights `a0/N` at `0` and `ainf/N` at `inf` with `a0 = -c mod N`,
/// `ainf = c + e mod N`, and degree `(e - a0 - ainf) / N`.
pub fn line_to_parabolic(l: &EquivLine, ctx: CoverContext) -> ParLineData {
    let n = ctx.n as i64;
    let a0 = ctx.residue(-(l.c as i64)) as i64;
    let ainf = ctx.residue(l.c as i64 + l.e) as i64;
    let numer = l.e - a0 - ainf;
    debug_assert_eq!(numer.rem_euclid(n), 0);
    ParLineData::two_point(numer / n, Weight::frac(a0, n), Weight::frac(ainf, n))
}

/// Summands of the corresponding parabolic bundle, one per line, in order.
pub fn to_parabolic_parts(b: &EquivBundle) -> Vec<ParLineData> {
    b.lines.iter().map(|l| line_to_parabolic(l, b.ctx)).collect()
}

pub fn to_parabolic(b: &EquivBundle) -> ParabolicBundle {
    line_sum_build(&to_parabolic_parts(b)).expect("nonempty")
}

/// Inverse correspondence for sums of parabolic line bundles with weights in
/// (1/N)Z at `0` and `inf`.
pub fn from_parabolic(parts: &[ParLineData], ctx: CoverContext) -> Result<EquivBundle> {
    let n = ctx.n as i64;
    let mut lines = Vec::with_capacity(parts.len());
    for (idx, part) in parts.iter().enumerate() {
        let mut scaled = [0i64; 2];
        for (p, w) in part.weights() {
            let slot = match p {
                PointOnLine::Infinity => 1,
                PointOnLine::Finite(x) if x.is_zero() => 0,
                PointOnLine::Finite(_) => {
                    return Err(Error::domain(format!(
                        "summand {idx} has a weight at {p}, outside the branch locus {{0, inf}}"
                    )))
                }
            };
            let s = w.value() * Rational::from_int(n);
            scaled[slot] = s.to_i64().ok_or_else(|| {
                Error::domain(format!("summand {idx}: weight {w} at {p} is not in (1/{n})Z"))
            })?;
        }
        let [a0, ainf] = scaled;
        lines.push(EquivLine {
            e: n * part.degree + a0 + ainf,
            c: ctx.residue(-a0),
        });
    }
    if lines.is_empty() {
        return Err(Error::usage("a linearized bundle needs at least one line"));
    }
    Ok(EquivBundle { ctx, lines })
}

/// `(h^0 total, h^0 invariant)`: monomials `z^t`, `0 <= t <= e`, with the
/// invariant ones those of character `c + t = 0 mod N`.
pub fn equiv_h0(b: &EquivBundle) -> (u64, u64) {
    let n = b.ctx.n as i64;
    b.lines.iter().fold((0, 0), |(tot, inv), l| {
        let total = (l.e + 1).max(0) as u64;
        let invariant = (0..=l.e.max(-1))
            .filter(|t| (l.c as i64 + t).rem_euclid(n) == 0)
            .count() as u64;
        (tot + total, inv + invariant)
    })
}

/// Semistable iff the splitting type on the cover is constant.
pub fn equiv_semistable(b: &EquivBundle) -> bool {
    b.splitting().is_semistable()
}

/// The trivial bundle tensored with the regular representation, and its
/// parabolic correspondent.
///
/// Line `i` is `L(0, -i mod N)`, matching the monomial `z^i` in the direct
/// image of the structure sheaf; the parabolic side keeps the same order, so
/// coordinate `i` of the fiber is the frame of `z^i`.
pub fn build_w(ctx: CoverContext) -> (EquivBundle, ParabolicBundle) {
    let n = ctx.n as i64;
    let what = EquivBundle::new(ctx, (0..n).map(|i| (0, -i))).expect("N >= 2 lines");
    let wpar = to_parabolic(&what);
    (what, wpar)
}

/// Vanishing order, at the ramification point over `p`, of the local frame of
/// summand `i` of the direct image of the structure sheaf.
fn frame_order(i: u32, p: &PointOnLine, n: u32) -> Result<u32> {
    match p {
        PointOnLine::Finite(x) if x.is_zero() => Ok(i),
        // Near inf the frame of z^i (i >= 1) is z^(i - N) = w^(N - i).
        PointOnLine::Infinity => Ok((n - i) % n),
        _ => Err(Error::usage(format!("{p} is not a branch point of the cover"))),
    }
}

/// Fiber at `p` of the `j`-th sheaf of the vanishing-order filtration of the
/// direct image, in the frame basis, with its weight `(N - j)/N`.
///
/// The `j`-th sheaf consists of sections vanishing to order at least `N - j`
/// along the reduced ramification divisor; its fiber is spanned by the frames
/// of order `>= N - j`.
pub fn filtration_subspace(j: u32, p: &PointOnLine, ctx: CoverContext) -> Result<(RatMatrix, Weight)> {
    let n = ctx.n;
    if j < 1 || j > n {
        return Err(Error::usage(format!("filtration index {j} outside 1..={n}")));
    }
    let mut rows = Vec::new();
    for i in 0..n {
        if frame_order(i, p, n)? >= n - j {
            rows.push(RatMatrix::unit_row(i as usize, n as usize));
        }
    }
    let basis = RatMatrix::from_rows(rows, n as usize)?;
    Ok((basis, Weight::frac((n - j) as i64, n as i64)))
}

/// The flag at `p` assembled from `filtration_subspace` for `j = N, ..., 1`.
pub fn filtration_flag(p: &PointOnLine, ctx: CoverContext) -> Result<QuasiParabolicFlag> {
    let steps = (1..=ctx.n)
        .rev()
        .map(|j| filtration_subspace(j, p, ctx).map(|(basis, weight)| FlagStep { basis, weight }))
        .collect::<Result<Vec<_>>>()?;
    QuasiParabolicFlag::new(p.clone(), steps, ctx.n as usize)
}
