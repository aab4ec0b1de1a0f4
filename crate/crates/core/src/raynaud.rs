//! Parabolic Raynaud bundles on the projective line.
//!
//! Two constructions are provided. In two-point mode the parabolic points are
//! `{0, inf}` and the bundle is pulled through the cyclic cover: a line
//! bundle `O(m)` on the cover detects semistability there, it is induced up
//! to all characters, brought down to a parabolic bundle `R'`, and tensored
//! with the parabolic correspondent `W` of the regular representation. In
//! single-point mode the bundle is one parabolic line bundle at `0` built
//! from the integral and fractional parts of the slope.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::equivariant::{build_w, to_parabolic_parts, CoverContext, EquivBundle};
use crate::exactlin::Rational;
use crate::hompar::hom_par_dim;
use crate::parabolic::{line_sum_build, ParLineData, ParabolicBundle, Weight};
use crate::projline::PointOnLine;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// One parabolic point, at `0`.
    SinglePoint,
    /// Parabolic points `0` and `inf`.
    TwoPoint,
}

impl Mode {
    pub fn points(&self) -> Vec<PointOnLine> {
        match self {
            Mode::SinglePoint => vec![PointOnLine::zero()],
            Mode::TwoPoint => vec![PointOnLine::zero(), PointOnLine::Infinity],
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single-point" => Ok(Mode::SinglePoint),
            "two-point" => Ok(Mode::TwoPoint),
            _ => Err(Error::usage(format!(
                "unknown mode {s:?}, expected single-point or two-point"
            ))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::SinglePoint => "single-point",
            Mode::TwoPoint => "two-point",
        })
    }
}

/// Rank `r`, parabolic degree `d` with `d N` integral, weight lattice (1/N)Z.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaynaudRequest {
    pub r: u32,
    pub d: Rational,
    #[serde(rename = "N")]
    pub n: u32,
    pub mode: Mode,
}

impl RaynaudRequest {
    pub fn new(r: u32, d: Rational, n: u32, mode: Mode) -> Result<Self> {
        if r < 1 {
            return Err(Error::usage("rank r must be at least 1"));
        }
        CoverContext::new(n)?;
        if !d.in_lattice(n) {
            return Err(Error::domain(format!(
                "degree d = {d} is not in (1/{n})Z: its denominator does not divide N"
            )));
        }
        Ok(RaynaudRequest { r, d, n, mode })
    }

    /// Degree of the corresponding bundle on the cover, `d N`.
    pub fn cover_degree(&self) -> i64 {
        (&self.d * Rational::from_int(self.n as i64))
            .to_i64()
            .expect("d N is an integer by construction")
    }

    /// Whether the slope `d / r` lies in (1/N)Z.
    pub fn slope_in_lattice(&self) -> bool {
        (&self.d / Rational::from_int(self.r as i64)).in_lattice(self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SinglePointCase {
    /// `alpha + 1/N < 1`: `O(d0)` with weight `alpha + 1/N`.
    ShiftedWeight,
    /// `alpha + 1/N = 1`: `O(d0 + 1)` with the trivial structure.
    TrivialStructure,
    /// `alpha + 1/N > 1`: the weight overflows and its integer part is
    /// carried into the degree.
    CarriedWeight,
}

/// How a Raynaud bundle was assembled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    TwoPoint {
        /// Degree of the detecting line bundle on the cover.
        m: i64,
        /// `O(m)` with every character.
        induced: EquivBundle,
        /// Parabolic correspondent of `induced`.
        r_prime: Vec<ParLineData>,
        /// Parabolic correspondent of the regular representation.
        w: Vec<ParLineData>,
        /// The `N^2` summands of `W (x) R'`.
        summands: Vec<ParLineData>,
    },
    SinglePoint {
        d0: i64,
        alpha: Rational,
        case: SinglePointCase,
        weight: Weight,
        degree: i64,
    },
}

#[derive(Clone, Debug)]
pub struct RaynaudBundle {
    pub request: RaynaudRequest,
    pub bundle: ParabolicBundle,
    pub provenance: Provenance,
}

impl RaynaudBundle {
    pub fn build(req: &RaynaudRequest) -> Result<Self> {
        match req.mode {
            Mode::TwoPoint => build_r_two_point(req),
            Mode::SinglePoint => build_r_single_point(req),
        }
    }

    /// Weights of the bundle that fall outside (1/N)Z.
    pub fn off_lattice_weights(&self) -> Vec<Weight> {
        let n = self.request.n;
        self.bundle
            .flags()
            .iter()
            .flat_map(|f| f.steps())
            .filter(|s| !s.weight.in_lattice(n))
            .map(|s| s.weight.clone())
            .collect()
    }
}

/// Degree `m = floor(D / r) + 1` of the line bundle on a rational curve with
/// `Hom(O(m), E) = 0` exactly for the semistable `E` of rank `r`, degree `D`.
pub fn raynaud_cover_line(r: u32, cover_degree: i64) -> Result<i64> {
    if r < 1 {
        return Err(Error::usage("rank r must be at least 1"));
    }
    Ok(cover_degree.div_euclid(r as i64) + 1)
}

pub fn build_r_two_point(req: &RaynaudRequest) -> Result<RaynaudBundle> {
    if req.mode != Mode::TwoPoint {
        return Err(Error::usage("two-point construction requested with single-point mode"));
    }
    let ctx = CoverContext::new(req.n)?;
    let m = raynaud_cover_line(req.r, req.cover_degree())?;
    let n = req.n as i64;
    let induced = EquivBundle::new(ctx, (0..n).map(|c| (m, c)))?;
    let r_prime = to_parabolic_parts(&induced);
    let (_, wpar) = build_w(ctx);
    let w = wpar.as_line_sum().expect("W has coordinate flags");
    let summands: Vec<ParLineData> = w
        .iter()
        .flat_map(|a| r_prime.iter().map(move |b| a.tensor(b)))
        .collect();
    let bundle = line_sum_build(&summands)?;
    Ok(RaynaudBundle {
        request: req.clone(),
        bundle,
        provenance: Provenance::TwoPoint {
            m,
            induced,
            r_prime,
            w,
            summands,
        },
    })
}

pub fn build_r_single_point(req: &RaynaudRequest) -> Result<RaynaudBundle> {
    if req.mode != Mode::SinglePoint {
        return Err(Error::usage("single-point construction requested with two-point mode"));
    }
    let slope = &req.d / Rational::from_int(req.r as i64);
    let d0 = slope
        .floor_i64()
        .ok_or_else(|| Error::domain("slope does not fit in 64 bits"))?;
    let alpha = slope.fract();
    let shifted = &alpha + Rational::new(1, req.n as i64);
    let one = Rational::one();
    let (case, degree, weight) = if shifted < one {
        (SinglePointCase::ShiftedWeight, d0, Weight::new(shifted)?)
    } else if shifted == one {
        (SinglePointCase::TrivialStructure, d0 + 1, Weight::zero())
    } else {
        (SinglePointCase::CarriedWeight, d0 + 1, Weight::new(shifted - one)?)
    };
    let part = ParLineData::new(degree, [(PointOnLine::zero(), weight.clone())]);
    let bundle = line_sum_build(&[part])?;
    Ok(RaynaudBundle {
        request: req.clone(),
        bundle,
        provenance: Provenance::SinglePoint {
            d0,
            alpha,
            case,
            weight,
            degree,
        },
    })
}

/// Outcome of testing a bundle against a Raynaud bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub semistable: bool,
    pub hom_par_dim: usize,
}

/// Checks that `e` satisfies the hypotheses attached to `r`: rank, parabolic
/// degree, weights in (1/N)Z and parabolic points inside the mode's set.
pub fn check_hypotheses(e: &ParabolicBundle, r: &RaynaudBundle) -> Result<()> {
    let req = &r.request;
    if e.rank() != req.r as usize {
        return Err(Error::usage(format!(
            "bundle has rank {} but the Raynaud bundle was built for r = {}",
            e.rank(),
            req.r
        )));
    }
    let pd = e.parabolic_degree();
    if pd != req.d {
        return Err(Error::usage(format!(
            "bundle has parabolic degree {pd} but the Raynaud bundle was built for d = {}",
            req.d
        )));
    }
    if !e.weights_in_lattice(req.n) {
        return Err(Error::domain(format!("bundle has weights outside (1/{})Z", req.n)));
    }
    let allowed = req.mode.points();
    for p in e.parabolic_points() {
        if !allowed.contains(p) {
            return Err(Error::usage(format!(
                "parabolic point {p} is not allowed in {} mode",
                req.mode
            )));
        }
    }
    Ok(())
}

/// `semistable = (dim Hom_par(R, E) == 0)`.
pub fn certify_semistable(e: &ParabolicBundle, r: &RaynaudBundle) -> Result<Certificate> {
    check_hypotheses(e, r)?;
    let dim = hom_par_dim(&r.bundle, e)?;
    Ok(Certificate {
        semistable: dim == 0,
        hom_par_dim: dim,
    })
}
