//! JSON documents.
//!
//! Parabolic bundle:
//! `{ "splitting": [ints], "N": int, "flags": [ { "point": "0"|"inf"|"p/q",
//!   "steps": [ { "basis": [[rat]], "weight": rat } ] } ] }`
//!
//! Linearized bundle: `{ "N": int, "lines": [ { "e": int, "c": int } ] }`
//!
//! Rationals are strings `"p/q"` or `"p"`. Output is canonical: splitting
//! sorted non-increasing, rationals in lowest terms, flags ordered by point.

use serde::{Deserialize, Serialize};

use crate::equivariant::{CoverContext, EquivBundle, EquivLine};
use crate::error::{Error, Result};
use crate::exactlin::{RatMatrix, Rational};
use crate::parabolic::{FlagStep, ParLineData, ParabolicBundle, QuasiParabolicFlag, Weight};
use crate::projline::{PointOnLine, SplitBundle};
use crate::raynaud::{Mode, Provenance, RaynaudBundle, SinglePointCase};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParabolicDoc {
    pub splitting: Vec<i64>,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(default)]
    pub flags: Vec<FlagDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagDoc {
    pub point: String,
    pub steps: Vec<StepDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub basis: Vec<Vec<String>>,
    pub weight: String,
}

impl ParabolicDoc {
    pub fn from_bundle(e: &ParabolicBundle, n: u32) -> Self {
        let flags = e
            .flags()
            .iter()
            .map(|f| FlagDoc {
                point: f.point().to_string(),
                steps: f
                    .steps()
                    .iter()
                    .map(|s| StepDoc {
                        basis: s
                            .basis
                            .row_vecs()
                            .into_iter()
                            .map(|r| r.iter().map(Rational::to_string).collect())
                            .collect(),
                        weight: s.weight.to_string(),
                    })
                    .collect(),
            })
            .collect();
        ParabolicDoc {
            splitting: e.underlying().degrees().to_vec(),
            n,
            flags,
        }
    }

    /// Validates and converts. An unsorted splitting is sorted, with basis
    /// columns permuted to match.
    pub fn to_bundle(&self) -> Result<(ParabolicBundle, u32)> {
        if self.n < 2 {
            return Err(Error::schema("N", format!("must be at least 2, got {}", self.n)));
        }
        if self.splitting.is_empty() {
            return Err(Error::schema("splitting", "must be nonempty"));
        }
        let rank = self.splitting.len();
        let mut order: Vec<usize> = (0..rank).collect();
        order.sort_by(|&a, &b| self.splitting[b].cmp(&self.splitting[a]));
        let underlying = SplitBundle::new(self.splitting.clone())
            .map_err(|e| Error::schema("splitting", e.to_string()))?;

        let mut flags = Vec::with_capacity(self.flags.len());
        for (fi, f) in self.flags.iter().enumerate() {
            let fpath = format!("flags[{fi}]");
            let point: PointOnLine = f
                .point
                .parse()
                .map_err(|e: Error| Error::schema(format!("{fpath}.point"), e.to_string()))?;
            let mut steps = Vec::with_capacity(f.steps.len());
            for (si, s) in f.steps.iter().enumerate() {
                let spath = format!("{fpath}.steps[{si}]");
                let weight = s
                    .weight
                    .parse::<Rational>()
                    .and_then(Weight::new)
                    .map_err(|e| Error::schema(format!("{spath}.weight"), e.to_string()))?;
                let mut rows = Vec::with_capacity(s.basis.len());
                for (ri, row) in s.basis.iter().enumerate() {
                    if row.len() != rank {
                        return Err(Error::schema(
                            format!("{spath}.basis[{ri}]"),
                            format!("has {} entries, bundle rank is {rank}", row.len()),
                        ));
                    }
                    let parsed = row
                        .iter()
                        .enumerate()
                        .map(|(ci, x)| {
                            x.parse::<Rational>().map_err(|e| {
                                Error::schema(format!("{spath}.basis[{ri}][{ci}]"), e.to_string())
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    rows.push(order.iter().map(|&c| parsed[c].clone()).collect());
                }
                let basis = RatMatrix::from_rows(rows, rank)
                    .map_err(|e| Error::schema(format!("{spath}.basis"), e.to_string()))?;
                steps.push(FlagStep { basis, weight });
            }
            let flag = QuasiParabolicFlag::new(point, steps, rank)
                .map_err(|e| Error::schema(fpath.clone(), e.to_string()))?;
            flags.push(flag);
        }
        let bundle =
            ParabolicBundle::new(underlying, flags).map_err(|e| Error::schema("flags", e.to_string()))?;
        Ok((bundle, self.n))
    }

    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::schema("$", e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivDoc {
    #[serde(rename = "N")]
    pub n: u32,
    pub lines: Vec<EquivLine>,
}

impl EquivDoc {
    pub fn from_bundle(b: &EquivBundle) -> Self {
        EquivDoc {
            n: b.ctx().n(),
            lines: b.lines().to_vec(),
        }
    }

    pub fn to_bundle(&self) -> Result<EquivBundle> {
        let ctx = CoverContext::new(self.n).map_err(|e| Error::schema("N", e.to_string()))?;
        for (i, l) in self.lines.iter().enumerate() {
            if l.c >= self.n {
                return Err(Error::schema(
                    format!("lines[{i}].c"),
                    format!("character {} is not a residue mod {}", l.c, self.n),
                ));
            }
        }
        EquivBundle::new(ctx, self.lines.iter().map(|l| (l.e, l.c as i64)))
            .map_err(|e| Error::schema("lines", e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestDoc {
    pub r: u32,
    pub d: Rational,
    #[serde(rename = "N")]
    pub n: u32,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProvenanceDoc {
    TwoPoint {
        m: i64,
        induced: Vec<EquivLine>,
        r_prime: Vec<ParLineData>,
        w: Vec<ParLineData>,
        summands: Vec<ParLineData>,
    },
    SinglePoint {
        d0: i64,
        alpha: Rational,
        case: SinglePointCase,
        degree: i64,
        weight: Weight,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaynaudDoc {
    pub request: RequestDoc,
    pub bundle: ParabolicDoc,
    pub provenance: ProvenanceDoc,
    /// Weights of the bundle that fall outside (1/N)Z.
    pub off_lattice_weights: Vec<Weight>,
}

impl RaynaudDoc {
    pub fn from_raynaud(r: &RaynaudBundle) -> Self {
        let req = &r.request;
        let provenance = match &r.provenance {
            Provenance::TwoPoint {
                m,
                induced,
                r_prime,
                w,
                summands,
            } => ProvenanceDoc::TwoPoint {
                m: *m,
                induced: induced.lines().to_vec(),
                r_prime: r_prime.clone(),
                w: w.clone(),
                summands: summands.clone(),
            },
            Provenance::SinglePoint {
                d0,
                alpha,
                case,
                weight,
                degree,
            } => ProvenanceDoc::SinglePoint {
                d0: *d0,
                alpha: alpha.clone(),
                case: *case,
                degree: *degree,
                weight: weight.clone(),
            },
        };
        RaynaudDoc {
            request: RequestDoc {
                r: req.r,
                d: req.d.clone(),
                n: req.n,
                mode: req.mode,
            },
            bundle: ParabolicDoc::from_bundle(&r.bundle, req.n),
            provenance,
            off_lattice_weights: r.off_lattice_weights(),
        }
    }
}

/// Canonical pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::line_sum_build;

    fn sample_json() -> &'static str {
        r#"{"splitting":[0,0],"N":2,"flags":[{"point":"0","steps":[{"basis":[["1","0"],["0","1"]],"weight":"0"},{"basis":[["1","0"]],"weight":"1/2"}]}]}"#
    }

    #[test]
    fn canonical_roundtrip_is_identity() {
        let doc = ParabolicDoc::parse(sample_json()).unwrap();
        let (e, n) = doc.to_bundle().unwrap();
        let out = serde_json::to_string(&ParabolicDoc::from_bundle(&e, n)).unwrap();
        assert_eq!(out, sample_json());
    }

    #[test]
    fn non_canonical_rationals_are_reduced() {
        let json = sample_json().replace("\"1/2\"", "\"2/4\"");
        let (e, n) = ParabolicDoc::parse(&json).unwrap().to_bundle().unwrap();
        let out = serde_json::to_string(&ParabolicDoc::from_bundle(&e, n)).unwrap();
        assert_eq!(out, sample_json());
    }

    #[test]
    fn unsorted_splitting_permutes_columns() {
        let json = r#"{"splitting":[-1,2],"N":3,"flags":[{"point":"inf","steps":[{"basis":[["1","0"],["0","1"]],"weight":"0"},{"basis":[["1","0"]],"weight":"1/3"}]}]}"#;
        let (e, _) = ParabolicDoc::parse(json).unwrap().to_bundle().unwrap();
        assert_eq!(e.underlying().degrees(), &[2, -1]);
        let parts = e.as_line_sum().unwrap();
        assert_eq!(parts[1].degree, -1);
        assert_eq!(parts[1].weight_at(&PointOnLine::Infinity), Weight::frac(1, 3));
    }

    #[test]
    fn schema_errors_name_the_path() {
        let bad_weight = sample_json().replace("\"1/2\"", "\"0.5\"");
        match ParabolicDoc::parse(&bad_weight).unwrap().to_bundle() {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "flags[0].steps[1].weight"),
            other => panic!("unexpected {other:?}"),
        }
        let bad_entry = sample_json().replacen("\"0\"]", "\"x\"]", 1);
        match ParabolicDoc::parse(&bad_entry).unwrap().to_bundle() {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "flags[0].steps[0].basis[0][1]"),
            other => panic!("unexpected {other:?}"),
        }
        let bad_order = sample_json().replace("\"1/2\"", "\"0\"");
        assert!(matches!(
            ParabolicDoc::parse(&bad_order).unwrap().to_bundle(),
            Err(Error::Schema { .. })
        ));
        assert!(ParabolicDoc::parse(r#"{"splitting":[0],"N":2,"extra":1}"#).is_err());
        assert!(ParabolicDoc::parse(r#"{"splitting":[],"N":2}"#).unwrap().to_bundle().is_err());
    }

    #[test]
    fn equiv_doc_validates_characters() {
        let doc: EquivDoc = serde_json::from_str(r#"{"N":2,"lines":[{"e":3,"c":1}]}"#).unwrap();
        assert_eq!(doc.to_bundle().unwrap().lines()[0], EquivLine { e: 3, c: 1 });
        let doc: EquivDoc = serde_json::from_str(r#"{"N":2,"lines":[{"e":3,"c":2}]}"#).unwrap();
        assert!(matches!(doc.to_bundle(), Err(Error::Schema { .. })));
    }

    #[test]
    fn par_line_json_shape() {
        let l = ParLineData::two_point(-1, Weight::frac(1, 2), Weight::zero());
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, r#"{"degree":-1,"weights":{"0":"1/2"}}"#);
        let back: ParLineData = serde_json::from_str(r#"{"degree":-1,"weights":{"0":"1/2","inf":"0"}}"#).unwrap();
        assert_eq!(back, l);
        let e = line_sum_build(&[l]).unwrap();
        assert_eq!(ParabolicDoc::from_bundle(&e, 2).to_bundle().unwrap().0, e);
    }
}
