//! Vector bundles on the projective line.
//!
//! A bundle is recorded by its splitting type `O(a_1) + ... + O(a_r)`. A map
//! `O(a) -> O(b)` is a polynomial of degree at most `b - a` in the affine
//! coordinate `z`, so every Hom space is a concrete coefficient space. At the
//! point at infinity the fiber of `O(a)` is trivialized so that a map of
//! relative degree `e` evaluates to its coefficient of `z^e`; this makes
//! evaluation multiplicative under composition.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlin::{RatMatrix, Rational};

/// Splitting type of a vector bundle, stored sorted non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplitBundle {
    degrees: Vec<i64>,
}

impl SplitBundle {
    pub fn new(mut degrees: Vec<i64>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::usage("a bundle must have rank at least 1"));
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SplitBundle { degrees })
    }

    pub fn line(a: i64) -> Self {
        SplitBundle { degrees: vec![a] }
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    pub fn tensor(&self, other: &SplitBundle) -> SplitBundle {
        let degrees = self
            .degrees
            .iter()
            .flat_map(|a| other.degrees.iter().map(move |b| a + b))
            .collect();
        SplitBundle::new(degrees).expect("nonempty")
    }

    pub fn dual(&self) -> SplitBundle {
        SplitBundle::new(self.degrees.iter().map(|a| -a).collect()).expect("nonempty")
    }

    pub fn twist(&self, t: i64) -> SplitBundle {
        SplitBundle {
            degrees: self.degrees.iter().map(|a| a + t).collect(),
        }
    }

    pub fn direct_sum(&self, other: &SplitBundle) -> SplitBundle {
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&other.degrees);
        SplitBundle::new(degrees).expect("nonempty")
    }

    /// `h^0` and `h^1`.
    pub fn cohomology(&self) -> (u64, u64) {
        self.degrees.iter().fold((0, 0), |(h0, h1), &a| {
            (h0 + (a + 1).max(0) as u64, h1 + (-a - 1).max(0) as u64)
        })
    }

    /// Semistable iff the splitting type is constant.
    pub fn is_semistable(&self) -> bool {
        self.degrees.windows(2).all(|w| w[0] == w[1])
    }
}

impl Serialize for SplitBundle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.degrees.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SplitBundle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        SplitBundle::new(v).map_err(serde::de::Error::custom)
    }
}

/// `dim Hom(A, B) = sum over pairs of max(0, b_j - a_i + 1)`.
pub fn hom_dim(a: &SplitBundle, b: &SplitBundle) -> u64 {
    a.degrees
        .iter()
        .flat_map(|ai| b.degrees.iter().map(move |bj| (bj - ai + 1).max(0) as u64))
        .sum()
}

/// Direct image of `O(k)` along the cyclic cover `z -> z^n`:
/// `sum_{i=0}^{n-1} O(floor((k - i) / n))`.
pub fn pushforward_cyclic(k: i64, n: u32) -> Result<SplitBundle> {
    if n < 2 {
        return Err(Error::usage(format!("cover degree must be at least 2, got {n}")));
    }
    let n = n as i64;
    SplitBundle::new((0..n).map(|i| (k - i).div_euclid(n)).collect())
}

/// A point of the projective line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointOnLine {
    Finite(Rational),
    Infinity,
}

impl PointOnLine {
    pub fn zero() -> Self {
        PointOnLine::Finite(Rational::zero())
    }
}

impl PartialOrd for PointOnLine {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PointOnLine {
    fn cmp(&self, other: &Self) -> Ordering {
        use PointOnLine::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinity) => Ordering::Less,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Infinity, Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for PointOnLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointOnLine::Finite(x) => write!(f, "{x}"),
            PointOnLine::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for PointOnLine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            Ok(PointOnLine::Infinity)
        } else {
            s.parse().map(PointOnLine::Finite)
        }
    }
}

impl Serialize for PointOnLine {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PointOnLine {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Polynomial in `z` with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| Rational::from_int(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, t: usize) -> Rational {
        self.coeffs.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|t| self.coeff(t) + other.coeff(t)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }
}

/// A bundle map between split bundles, `entries[j][i]: O(a_i) -> O(b_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyHom {
    source: SplitBundle,
    target: SplitBundle,
    entries: Vec<Vec<Poly>>,
}

impl PolyHom {
    /// Checks the degree bound `deg q_ji <= b_j - a_i` for every entry.
    pub fn new(source: SplitBundle, target: SplitBundle, entries: Vec<Vec<Poly>>) -> Result<Self> {
        if entries.len() != target.rank() || entries.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::usage(format!(
                "entry matrix must be {}x{}",
                target.rank(),
                source.rank()
            )));
        }
        for (j, row) in entries.iter().enumerate() {
            for (i, q) in row.iter().enumerate() {
                let bound = target.degrees[j] - source.degrees[i];
                if let Some(d) = q.degree() {
                    if d as i64 > bound {
                        return Err(Error::usage(format!(
                            "entry ({j},{i}) has degree {d} but O({}) -> O({}) allows at most {bound}",
                            source.degrees[i], target.degrees[j]
                        )));
                    }
                }
            }
        }
        Ok(PolyHom {
            source,
            target,
            entries,
        })
    }

    pub fn zero(source: SplitBundle, target: SplitBundle) -> Self {
        let entries = vec![vec![Poly::zero(); source.rank()]; target.rank()];
        PolyHom {
            source,
            target,
            entries,
        }
    }

    pub fn identity(a: &SplitBundle) -> Self {
        let n = a.rank();
        let entries = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        if i == j {
                            Poly::constant(Rational::one())
                        } else {
                            Poly::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        PolyHom {
            source: a.clone(),
            target: a.clone(),
            entries,
        }
    }

    pub fn source(&self) -> &SplitBundle {
        &self.source
    }

    pub fn target(&self) -> &SplitBundle {
        &self.target
    }

    pub fn entry(&self, j: usize, i: usize) -> &Poly {
        &self.entries[j][i]
    }

    pub fn entries(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    /// `self o inner`, where `inner: A -> B` and `self: B -> C`.
    pub fn compose(&self, inner: &PolyHom) -> Result<PolyHom> {
        if inner.target != self.source {
            return Err(Error::usage("composition of maps with mismatched middle bundle"));
        }
        let entries = (0..self.target.rank())
            .map(|j| {
                (0..inner.source.rank())
                    .map(|i| {
                        (0..self.source.rank()).fold(Poly::zero(), |acc, k| {
                            acc.add(&self.entries[j][k].mul(&inner.entries[k][i]))
                        })
                    })
                    .collect()
            })
            .collect();
        PolyHom::new(inner.source.clone(), self.target.clone(), entries)
    }

    /// The fiber map at `p` as a `target_rank x source_rank` matrix.
    pub fn eval_fiber(&self, p: &PointOnLine) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.target.rank(), self.source.rank());
        for (j, row) in self.entries.iter().enumerate() {
            for (i, q) in row.iter().enumerate() {
                m[(j, i)] = match p {
                    PointOnLine::Finite(x) => q.eval(x),
                    PointOnLine::Infinity => {
                        let e = self.target.degrees[j] - self.source.degrees[i];
                        if e < 0 {
                            Rational::zero()
                        } else {
                            q.coeff(e as usize)
                        }
                    }
                };
            }
        }
        m
    }
}
