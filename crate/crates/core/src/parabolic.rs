//! Parabolic bundles on the projective line.
//!
//! A flag at a point is a decreasing chain of fiber subspaces
//! `fiber = F_1 > F_2 > ... > F_k > 0` carrying strictly increasing weights
//! `0 <= a_1 < ... < a_k < 1`. Subspaces are kept as explicit bases so that
//! gauge twists produce genuinely non-coordinate flags.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{RatMatrix, Rational};
use crate::projline::{PointOnLine, PolyHom, SplitBundle};

/// A parabolic weight in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Rational", into = "Rational")]
pub struct Weight(Rational);

impl Weight {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() || value >= Rational::one() {
            return Err(Error::domain(format!("weight {value} is outside [0, 1)")));
        }
        Ok(Weight(value))
    }

    /// `num/den`; panics when outside `[0, 1)`.
    pub fn frac(num: i64, den: i64) -> Self {
        Weight::new(Rational::new(num, den)).expect("weight in [0, 1)")
    }

    pub fn zero() -> Self {
        Weight(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn in_lattice(&self, n: u32) -> bool {
        self.0.in_lattice(n)
    }
}

impl TryFrom<Rational> for Weight {
    type Error = Error;
    fn try_from(r: Rational) -> Result<Self> {
        Weight::new(r)
    }
}

impl From<Weight> for Rational {
    fn from(w: Weight) -> Rational {
        w.0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// One step `(F_i, a_i)` of a flag; `basis` rows span `F_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagStep {
    pub basis: RatMatrix,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiParabolicFlag {
    point: PointOnLine,
    steps: Vec<FlagStep>,
}

impl QuasiParabolicFlag {
    /// Validates the flag against a fiber of dimension `rank`.
    pub fn new(point: PointOnLine, steps: Vec<FlagStep>, rank: usize) -> Result<Self> {
        let at = |i: usize| format!("flag at {point}, step {}", i + 1);
        if steps.is_empty() {
            return Err(Error::usage(format!("flag at {point} has no steps")));
        }
        for (i, s) in steps.iter().enumerate() {
            if s.basis.cols() != rank {
                return Err(Error::usage(format!(
                    "{}: basis has {} columns, fiber has dimension {rank}",
                    at(i),
                    s.basis.cols()
                )));
            }
            if s.basis.rows() == 0 || s.basis.rank() != s.basis.rows() {
                return Err(Error::usage(format!(
                    "{}: basis must be nonempty with full row rank",
                    at(i)
                )));
            }
        }
        if steps[0].basis.rows() != rank {
            return Err(Error::usage(format!("{}: first step must be the full fiber", at(0))));
        }
        for (i, w) in steps.windows(2).enumerate() {
            if w[1].weight <= w[0].weight {
                return Err(Error::usage(format!(
                    "{}: weights must be strictly increasing",
                    at(i + 1)
                )));
            }
            if w[1].basis.rows() >= w[0].basis.rows() || !w[0].basis.row_space_contains(&w[1].basis)? {
                return Err(Error::usage(format!(
                    "{}: subspace must be strictly contained in the previous one",
                    at(i + 1)
                )));
            }
        }
        Ok(QuasiParabolicFlag { point, steps })
    }

    /// The trivial structure: full fiber with weight 0.
    pub fn trivial(point: PointOnLine, rank: usize) -> Self {
        QuasiParabolicFlag {
            point,
            steps: vec![FlagStep {
                basis: RatMatrix::identity(rank),
                weight: Weight::zero(),
            }],
        }
    }

    pub fn point(&self) -> &PointOnLine {
        &self.point
    }

    pub fn steps(&self) -> &[FlagStep] {
        &self.steps
    }

    pub fn rank(&self) -> usize {
        self.steps[0].basis.rows()
    }

    pub fn is_trivial(&self) -> bool {
        self.steps.len() == 1 && self.steps[0].weight.is_zero()
    }

    /// `(weight, dim F_i - dim F_{i+1})` per step.
    pub fn multiplicities(&self) -> Vec<(Weight, usize)> {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let next = self.steps.get(i + 1).map_or(0, |n| n.basis.rows());
                (s.weight.clone(), s.basis.rows() - next)
            })
            .collect()
    }

    /// The largest step whose weight is at least `alpha`; `None` stands for the
    /// zero subspace.
    pub fn subspace_at_least(&self, alpha: &Weight) -> Option<&RatMatrix> {
        self.steps
            .iter()
            .find(|s| s.weight >= *alpha)
            .map(|s| &s.basis)
    }

    /// Same point, weights and subspaces (bases may differ).
    pub fn same_as(&self, other: &QuasiParabolicFlag) -> bool {
        self.point == other.point
            && self.steps.len() == other.steps.len()
            && self.steps.iter().zip(&other.steps).all(|(a, b)| {
                a.weight == b.weight && a.basis.same_row_space(&b.basis).unwrap_or(false)
            })
    }
}

/// A split bundle with flags at finitely many distinct points. Points without
/// a flag carry the trivial structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicBundle {
    underlying: SplitBundle,
    flags: Vec<QuasiParabolicFlag>,
}

impl ParabolicBundle {
    pub fn new(underlying: SplitBundle, mut flags: Vec<QuasiParabolicFlag>) -> Result<Self> {
        for f in &flags {
            if f.rank() != underlying.rank() {
                return Err(Error::usage(format!(
                    "flag at {} lives in a fiber of dimension {}, bundle has rank {}",
                    f.point,
                    f.rank(),
                    underlying.rank()
                )));
            }
        }
        flags.sort_by(|a, b| a.point.cmp(&b.point));
        if flags.windows(2).any(|w| w[0].point == w[1].point) {
            return Err(Error::usage("parabolic points must be pairwise distinct"));
        }
        Ok(ParabolicBundle { underlying, flags })
    }

    pub fn trivial(underlying: SplitBundle) -> Self {
        ParabolicBundle {
            underlying,
            flags: Vec::new(),
        }
    }

    pub fn underlying(&self) -> &SplitBundle {
        &self.underlying
    }

    pub fn rank(&self) -> usize {
        self.underlying.rank()
    }

    pub fn flags(&self) -> &[QuasiParabolicFlag] {
        &self.flags
    }

    pub fn flag_at(&self, p: &PointOnLine) -> Option<&QuasiParabolicFlag> {
        self.flags.iter().find(|f| &f.point == p)
    }

    /// The flag at `p`, or the trivial one.
    pub fn flag_or_trivial(&self, p: &PointOnLine) -> QuasiParabolicFlag {
        self.flag_at(p)
            .cloned()
            .unwrap_or_else(|| QuasiParabolicFlag::trivial(p.clone(), self.rank()))
    }

    /// Points whose flag is not the trivial structure.
    pub fn parabolic_points(&self) -> Vec<&PointOnLine> {
        self.flags
            .iter()
            .filter(|f| !f.is_trivial())
            .map(|f| &f.point)
            .collect()
    }

    pub fn parabolic_degree(&self) -> Rational {
        let mut d = Rational::from_int(self.underlying.degree());
        for f in &self.flags {
            for (w, m) in f.multiplicities() {
                d += &(w.value() * Rational::from_int(m as i64));
            }
        }
        d
    }

    pub fn weights_in_lattice(&self, n: u32) -> bool {
        self.flags
            .iter()
            .flat_map(|f| &f.steps)
            .all(|s| s.weight.in_lattice(n))
    }

    /// Direct sum with block flags: at each point the step of weight `t` is
    /// the sum of the two largest steps of weight `>= t`. Coordinates are
    /// reordered to keep the splitting type sorted.
    pub fn direct_sum(&self, other: &ParabolicBundle) -> ParabolicBundle {
        let (r1, r2) = (self.rank(), other.rank());
        let degs: Vec<i64> = self
            .underlying
            .degrees()
            .iter()
            .chain(other.underlying.degrees())
            .copied()
            .collect();
        let mut order: Vec<usize> = (0..r1 + r2).collect();
        order.sort_by(|&a, &b| degs[b].cmp(&degs[a]));
        let mut new_index = vec![0; r1 + r2];
        for (pos, &old) in order.iter().enumerate() {
            new_index[old] = pos;
        }
        let underlying = SplitBundle::new(degs).expect("nonempty");

        let points: BTreeSet<&PointOnLine> = self
            .flags
            .iter()
            .chain(&other.flags)
            .map(|f| &f.point)
            .collect();
        let mut flags = Vec::new();
        for p in points {
            let fa = self.flag_or_trivial(p);
            let fb = other.flag_or_trivial(p);
            let thresholds: BTreeSet<Weight> = fa
                .steps
                .iter()
                .chain(&fb.steps)
                .map(|s| s.weight.clone())
                .collect();
            let steps = thresholds
                .into_iter()
                .map(|t| {
                    let mut rows = Vec::new();
                    for (sub, offset) in [(fa.subspace_at_least(&t), 0), (fb.subspace_at_least(&t), r1)] {
                        if let Some(b) = sub {
                            for i in 0..b.rows() {
                                let mut v = vec![Rational::zero(); r1 + r2];
                                for (c, x) in b.row(i).iter().enumerate() {
                                    v[new_index[offset + c]] = x.clone();
                                }
                                rows.push(v);
                            }
                        }
                    }
                    FlagStep {
                        basis: RatMatrix::from_rows(rows, r1 + r2).expect("width"),
                        weight: t,
                    }
                })
                .collect();
            flags.push(QuasiParabolicFlag {
                point: p.clone(),
                steps,
            });
        }
        ParabolicBundle { underlying, flags }
    }

    /// Reads the bundle back as a sum of parabolic line bundles when every
    /// flag step is spanned by coordinate vectors. Parts come in coordinate
    /// order.
    pub fn as_line_sum(&self) -> Option<Vec<ParLineData>> {
        let r = self.rank();
        let mut weights: Vec<BTreeMap<PointOnLine, Weight>> = vec![BTreeMap::new(); r];
        for f in &self.flags {
            for s in &f.steps {
                for c in coordinate_support(&s.basis)? {
                    if !s.weight.is_zero() {
                        weights[c].insert(f.point.clone(), s.weight.clone());
                    }
                }
            }
        }
        Some(
            self.underlying
                .degrees()
                .iter()
                .zip(weights)
                .map(|(&degree, weights)| ParLineData { degree, weights })
                .collect(),
        )
    }

    /// Isomorphic presentation test for bundles sharing an underlying basis:
    /// same splitting type and the same flag subspaces and weights at every
    /// point.
    pub fn same_as(&self, other: &ParabolicBundle) -> bool {
        if self.underlying != other.underlying {
            return false;
        }
        let points: BTreeSet<&PointOnLine> = self
            .flags
            .iter()
            .chain(&other.flags)
            .map(|f| &f.point)
            .collect();
        points
            .into_iter()
            .all(|p| self.flag_or_trivial(p).same_as(&other.flag_or_trivial(p)))
    }
}

/// Coordinates spanned by a basis, if its row space is a coordinate subspace.
fn coordinate_support(basis: &RatMatrix) -> Option<Vec<usize>> {
    let rref = basis.rref();
    let mut coords = Vec::new();
    for i in 0..rref.pivots.len() {
        let row = rref.matrix.row(i);
        if row.iter().filter(|x| !x.is_zero()).count() != 1 {
            return None;
        }
        coords.push(rref.pivots[i]);
    }
    Some(coords)
}

/// A parabolic line bundle: a degree and a weight at each marked point.
/// Zero weights are not stored, so equality is semantic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "RawLine")]
pub struct ParLineData {
    pub degree: i64,
    weights: BTreeMap<PointOnLine, Weight>,
}

#[derive(Deserialize)]
struct RawLine {
    degree: i64,
    #[serde(default)]
    weights: BTreeMap<PointOnLine, Weight>,
}

impl From<RawLine> for ParLineData {
    fn from(raw: RawLine) -> Self {
        ParLineData::new(raw.degree, raw.weights)
    }
}

impl ParLineData {
    pub fn new(degree: i64, weights: impl IntoIterator<Item = (PointOnLine, Weight)>) -> Self {
        let weights = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        ParLineData { degree, weights }
    }

    /// Line bundle with weights at `0` and `inf`.
    pub fn two_point(degree: i64, at_zero: Weight, at_inf: Weight) -> Self {
        ParLineData::new(
            degree,
            [(PointOnLine::zero(), at_zero), (PointOnLine::Infinity, at_inf)],
        )
    }

    pub fn weight_at(&self, p: &PointOnLine) -> Weight {
        self.weights.get(p).cloned().unwrap_or_else(Weight::zero)
    }

    pub fn weights(&self) -> &BTreeMap<PointOnLine, Weight> {
        &self.weights
    }

    pub fn parabolic_degree(&self) -> Rational {
        self.weights
            .values()
            .fold(Rational::from_int(self.degree), |acc, w| acc + w.value())
    }

    /// Parabolic dual: `w -> 1 - w` for nonzero `w`, and the degree drops by
    /// one for each such point.
    pub fn dual(&self) -> ParLineData {
        let degree = -self.degree - self.weights.len() as i64;
        let weights = self
            .weights
            .iter()
            .map(|(p, w)| (p.clone(), Weight(Rational::one() - w.value())))
            .collect();
        ParLineData { degree, weights }
    }

    /// Parabolic tensor product: weights add modulo 1, carries go into the
    /// degree.
    pub fn tensor(&self, other: &ParLineData) -> ParLineData {
        let mut degree = self.degree + other.degree;
        let points: BTreeSet<&PointOnLine> =
            self.weights.keys().chain(other.weights.keys()).collect();
        let mut weights = BTreeMap::new();
        for p in points {
            let s = self.weight_at(p).value() + other.weight_at(p).value();
            let s = if s >= Rational::one() {
                degree += 1;
                s - Rational::one()
            } else {
                s
            };
            if !s.is_zero() {
                weights.insert(p.clone(), Weight(s));
            }
        }
        ParLineData { degree, weights }
    }
}

pub fn par_dual_line(l: &ParLineData) -> ParLineData {
    l.dual()
}

pub fn par_tensor_line(l: &ParLineData, m: &ParLineData) -> ParLineData {
    l.tensor(m)
}

/// Assembles a direct sum of parabolic line bundles with coordinate flags.
///
/// Parts are placed in order of non-increasing degree (stable, so parts of
/// equal degree keep their relative order); at each point the step of weight
/// `t` is spanned by the coordinates whose weight is at least `t`.
pub fn line_sum_build(parts: &[ParLineData]) -> Result<ParabolicBundle> {
    if parts.is_empty() {
        return Err(Error::usage("a line sum needs at least one summand"));
    }
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.sort_by(|&a, &b| parts[b].degree.cmp(&parts[a].degree));
    let sorted: Vec<&ParLineData> = order.iter().map(|&i| &parts[i]).collect();
    let r = sorted.len();
    let underlying = SplitBundle::new(sorted.iter().map(|p| p.degree).collect())?;

    let points: BTreeSet<&PointOnLine> = sorted.iter().flat_map(|p| p.weights.keys()).collect();
    let mut flags = Vec::new();
    for p in points {
        let w: Vec<Weight> = sorted.iter().map(|l| l.weight_at(p)).collect();
        let thresholds: BTreeSet<&Weight> = w.iter().collect();
        let steps = thresholds
            .into_iter()
            .map(|t| {
                let rows = (0..r)
                    .filter(|&c| w[c] >= *t)
                    .map(|c| RatMatrix::unit_row(c, r))
                    .collect();
                FlagStep {
                    basis: RatMatrix::from_rows(rows, r).expect("width"),
                    weight: t.clone(),
                }
            })
            .collect();
        flags.push(QuasiParabolicFlag {
            point: p.clone(),
            steps,
        });
    }
    Ok(ParabolicBundle { underlying, flags })
}

/// Transports every flag along a bundle automorphism `g`.
///
/// `g` must be an endomorphism of the underlying bundle. By the degree bounds
/// its determinant is a constant polynomial, so invertibility is decided by
/// one fiber evaluation.
pub fn gauge_twist(e: &ParabolicBundle, g: &PolyHom) -> Result<ParabolicBundle> {
    if g.source() != &e.underlying || g.target() != &e.underlying {
        return Err(Error::usage("gauge must be an endomorphism of the underlying bundle"));
    }
    let det = g.eval_fiber(&PointOnLine::zero()).determinant()?;
    if det.is_zero() {
        return Err(Error::usage("gauge is not invertible (constant determinant is zero)"));
    }
    let flags = e
        .flags
        .iter()
        .map(|f| {
            let gx = g.eval_fiber(&f.point).transpose();
            let steps = f
                .steps
                .iter()
                .map(|s| FlagStep {
                    basis: s.basis.mul(&gx).expect("square gauge"),
                    weight: s.weight.clone(),
                })
                .collect();
            QuasiParabolicFlag {
                point: f.point.clone(),
                steps,
            }
        })
        .collect();
    Ok(ParabolicBundle {
        underlying: e.underlying.clone(),
        flags,
    })
}

/// Semistability for a bundle with at most one parabolic point: the
/// splitting type is constant and the flag has a single step.
pub fn oracle_semistable_single_point(e: &ParabolicBundle) -> Result<bool> {
    let marked: Vec<&QuasiParabolicFlag> = e.flags.iter().filter(|f| !f.is_trivial()).collect();
    if marked.len() > 1 {
        return Err(Error::usage(format!(
            "single-point oracle needs at most one parabolic point, found {}",
            marked.len()
        )));
    }
    Ok(e.underlying.is_semistable() && marked.iter().all(|f| f.steps.len() == 1))
}

/// A sum of parabolic line bundles is semistable iff all summands have the
/// same parabolic degree.
pub fn oracle_semistable_line_sum(parts: &[ParLineData]) -> bool {
    let mut it = parts.iter().map(ParLineData::parabolic_degree);
    match it.next() {
        None => true,
        Some(first) => it.all(|d| d == first),
    }
}
