//! Dimension of the space of parabolic homomorphisms.
//!
//! A bundle map `phi: E_0 -> F_0` is parabolic when at every parabolic point
//! `x` and every source step `(E_i, a_i)` the fiber map sends `E_i` into the
//! largest target step whose weight is at least `a_i`. Equal weights impose
//! nothing. Each containment is imposed as homogeneous linear equations on
//! the polynomial coefficients of `phi`.

use crate::error::{Error, Result};
use crate::exactlin::{solution_space_dim, RatMatrix, Rational};
use crate::parabolic::ParabolicBundle;
use crate::projline::{hom_dim, PointOnLine, Poly, PolyHom};

/// Coefficient of `z^t` in entry `(j, i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Unknown {
    j: usize,
    i: usize,
    t: usize,
}

/// The linear system cutting `Hom_par(source, target)` out of
/// `Hom(source_0, target_0)`.
#[derive(Clone, Debug)]
pub struct HomParSystem {
    source: ParabolicBundle,
    target: ParabolicBundle,
    layout: Vec<Unknown>,
    constraints: RatMatrix,
}

impl HomParSystem {
    pub fn build(source: &ParabolicBundle, target: &ParabolicBundle) -> Result<Self> {
        let a = source.underlying().degrees();
        let b = target.underlying().degrees();
        let (rs, rt) = (a.len(), b.len());

        let mut layout = Vec::new();
        let mut offset = vec![vec![None; rs]; rt];
        for j in 0..rt {
            for i in 0..rs {
                let e = b[j] - a[i];
                if e >= 0 {
                    offset[j][i] = Some(layout.len());
                    layout.extend((0..=e as usize).map(|t| Unknown { j, i, t }));
                }
            }
        }
        let n = layout.len();
        debug_assert_eq!(n as u64, hom_dim(source.underlying(), target.underlying()));

        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for flag in source.flags() {
            if flag.is_trivial() {
                continue;
            }
            if flag.rank() != rs {
                return Err(Error::usage("source flag does not match the source rank"));
            }
            let x = flag.point();
            let target_flag = target.flag_or_trivial(x);
            // Value of the coefficient of z^t in the fiber at x, for an entry of
            // relative degree e.
            let max_e = layout.iter().map(|u| u.t).max().unwrap_or(0);
            let powers: Vec<Rational> = match x {
                PointOnLine::Finite(v) => {
                    let mut p = Vec::with_capacity(max_e + 1);
                    let mut acc = Rational::one();
                    for _ in 0..=max_e {
                        p.push(acc.clone());
                        acc *= v;
                    }
                    p
                }
                PointOnLine::Infinity => Vec::new(),
            };
            for step in flag.steps() {
                let annihilator = match target_flag.subspace_at_least(&step.weight) {
                    Some(g) if g.rows() == rt => continue,
                    Some(g) => g.kernel_basis(),
                    None => RatMatrix::identity(rt),
                };
                for p in 0..annihilator.rows() {
                    let y = annihilator.row(p);
                    for v_idx in 0..step.basis.rows() {
                        let v = step.basis.row(v_idx);
                        let mut row = vec![Rational::zero(); n];
                        let mut nonzero = false;
                        for j in 0..rt {
                            if y[j].is_zero() {
                                continue;
                            }
                            for i in 0..rs {
                                if v[i].is_zero() {
                                    continue;
                                }
                                let Some(start) = offset[j][i] else { continue };
                                let e = (b[j] - a[i]) as usize;
                                let yv = &y[j] * &v[i];
                                match x {
                                    PointOnLine::Finite(_) => {
                                        for t in 0..=e {
                                            if !powers[t].is_zero() {
                                                row[start + t] += &(&yv * &powers[t]);
                                                nonzero = true;
                                            }
                                        }
                                    }
                                    PointOnLine::Infinity => {
                                        row[start + e] += &yv;
                                        nonzero = true;
                                    }
                                }
                            }
                        }
                        if nonzero && row.iter().any(|c| !c.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        let constraints = RatMatrix::from_rows(rows, n)?;
        Ok(HomParSystem {
            source: source.clone(),
            target: target.clone(),
            layout,
            constraints,
        })
    }

    /// Dimension of the ambient `Hom(source_0, target_0)`.
    pub fn unknowns(&self) -> usize {
        self.layout.len()
    }

    pub fn constraints(&self) -> &RatMatrix {
        &self.constraints
    }

    pub fn dim(&self) -> usize {
        solution_space_dim(&self.constraints, self.unknowns()).expect("constraint width matches")
    }

    /// Explicit maps spanning the solution space.
    pub fn basis(&self) -> Vec<PolyHom> {
        let kernel = self.constraints.kernel_basis();
        (0..kernel.rows())
            .map(|k| self.to_poly_hom(kernel.row(k)))
            .collect()
    }

    fn to_poly_hom(&self, coeffs: &[Rational]) -> PolyHom {
        let (rs, rt) = (self.source.rank(), self.target.rank());
        let mut raw: Vec<Vec<Vec<Rational>>> = vec![vec![Vec::new(); rs]; rt];
        for (u, c) in self.layout.iter().zip(coeffs) {
            let slot = &mut raw[u.j][u.i];
            if slot.len() <= u.t {
                slot.resize(u.t + 1, Rational::zero());
            }
            slot[u.t] = c.clone();
        }
        let entries = raw
            .into_iter()
            .map(|row| row.into_iter().map(Poly::new).collect())
            .collect();
        PolyHom::new(
            self.source.underlying().clone(),
            self.target.underlying().clone(),
            entries,
        )
        .expect("layout respects degree bounds")
    }
}

pub fn hom_par_dim(e: &ParabolicBundle, f: &ParabolicBundle) -> Result<usize> {
    Ok(HomParSystem::build(e, f)?.dim())
}

pub fn hom_par_basis(e: &ParabolicBundle, f: &ParabolicBundle) -> Result<Vec<PolyHom>> {
    Ok(HomParSystem::build(e, f)?.basis())
}

/// Checks the flag conditions for a given map directly on fiber images,
/// without going through the constraint system.
pub fn is_parabolic_map(e: &ParabolicBundle, f: &ParabolicBundle, phi: &PolyHom) -> Result<bool> {
    if phi.source() != e.underlying() || phi.target() != f.underlying() {
        return Err(Error::usage("map does not go between the underlying bundles"));
    }
    for flag in e.flags() {
        let x = flag.point();
        let fiber = phi.eval_fiber(x).transpose();
        let tflag = f.flag_or_trivial(x);
        for step in flag.steps() {
            let image = step.basis.mul(&fiber)?;
            let ok = match tflag.subspace_at_least(&step.weight) {
                None => image.is_zero(),
                Some(g) => g.row_space_contains(&image)?,
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::{gauge_twist, line_sum_build, FlagStep, ParLineData, QuasiParabolicFlag, Weight};
    use crate::projline::SplitBundle;

    fn zero() -> PointOnLine {
        PointOnLine::zero()
    }
    fn w(n: i64, d: i64) -> Weight {
        Weight::frac(n, d)
    }

    fn flag_line_half() -> ParabolicBundle {
        line_sum_build(&[ParLineData::new(0, [(zero(), w(1, 2))]), ParLineData::new(0, [])]).unwrap()
    }

    #[test]
    fn identity_is_parabolic() {
        let e = line_sum_build(&[ParLineData::new(0, [(zero(), w(1, 2))])]).unwrap();
        assert_eq!(hom_par_dim(&e, &e).unwrap(), 1);
        let basis = hom_par_basis(&e, &e).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].eval_fiber(&zero())[(0, 0)] != Rational::zero());
    }

    #[test]
    fn heavy_line_into_flagged_plane_vanishes() {
        let e = line_sum_build(&[ParLineData::new(0, [(zero(), w(3, 4))])]).unwrap();
        assert_eq!(hom_par_dim(&e, &flag_line_half()).unwrap(), 0);
        assert!(hom_par_basis(&e, &flag_line_half()).unwrap().is_empty());
    }

    #[test]
    fn leading_coefficient_constraint_at_infinity() {
        let e = line_sum_build(&[ParLineData::two_point(0, Weight::zero(), w(1, 2))]).unwrap();
        let f = ParabolicBundle::trivial(SplitBundle::line(1));
        assert_eq!(hom_par_dim(&e, &f).unwrap(), 1);
        let basis = hom_par_basis(&e, &f).unwrap();
        assert_eq!(basis.len(), 1);
        // Only the constant section survives.
        assert_eq!(basis[0].entry(0, 0).degree(), Some(0));
    }

    #[test]
    fn w_into_line_two_dims() {
        let w2 = line_sum_build(&[
            ParLineData::two_point(0, Weight::zero(), Weight::zero()),
            ParLineData::two_point(-1, w(1, 2), w(1, 2)),
        ])
        .unwrap();
        let v = line_sum_build(&[ParLineData::two_point(0, Weight::zero(), w(1, 2))]).unwrap();
        assert_eq!(hom_par_dim(&w2, &v).unwrap(), 2);
    }

    #[test]
    fn equal_weights_impose_nothing() {
        let e = line_sum_build(&[ParLineData::new(0, [(zero(), w(1, 2))])]).unwrap();
        let f = line_sum_build(&[ParLineData::new(1, [(zero(), w(1, 2))])]).unwrap();
        assert_eq!(hom_par_dim(&e, &f).unwrap(), 2);
        let g = line_sum_build(&[ParLineData::new(1, [(zero(), w(1, 3))])]).unwrap();
        assert_eq!(hom_par_dim(&e, &g).unwrap(), 1);
    }

    #[test]
    fn basis_members_satisfy_flags() {
        let e = flag_line_half();
        let f = line_sum_build(&[
            ParLineData::two_point(1, w(1, 3), Weight::zero()),
            ParLineData::two_point(0, w(2, 3), w(1, 3)),
        ])
        .unwrap();
        for (s, t) in [(&e, &f), (&f, &e), (&f, &f)] {
            let basis = hom_par_basis(s, t).unwrap();
            assert_eq!(basis.len(), hom_par_dim(s, t).unwrap());
            for phi in &basis {
                assert!(is_parabolic_map(s, t, phi).unwrap());
            }
        }
    }

    #[test]
    fn general_flag_target() {
        // Target O + O with the line spanned by (1, 1) at 0 in weight 1/2.
        let flag = QuasiParabolicFlag::new(
            zero(),
            vec![
                FlagStep { basis: RatMatrix::identity(2), weight: Weight::zero() },
                FlagStep { basis: RatMatrix::from_i64(&[&[1, 1]]), weight: w(1, 2) },
            ],
            2,
        )
        .unwrap();
        let f = ParabolicBundle::new(SplitBundle::new(vec![0, 0]).unwrap(), vec![flag]).unwrap();
        let e = line_sum_build(&[ParLineData::new(0, [(zero(), w(1, 2))])]).unwrap();
        // Constant maps c -> (a, b) landing on the diagonal.
        assert_eq!(hom_par_dim(&e, &f).unwrap(), 1);
        assert_eq!(hom_par_dim(&e, &flag_line_half()).unwrap(), 1);
    }

    #[test]
    fn gauge_invariance_small() {
        let e = flag_line_half();
        let g = PolyHom::new(
            e.underlying().clone(),
            e.underlying().clone(),
            vec![
                vec![Poly::from_i64(&[2]), Poly::from_i64(&[1])],
                vec![Poly::from_i64(&[1]), Poly::from_i64(&[1])],
            ],
        )
        .unwrap();
        let t = gauge_twist(&e, &g).unwrap();
        let f = line_sum_build(&[ParLineData::new(1, [(zero(), w(1, 4))])]).unwrap();
        assert_eq!(hom_par_dim(&e, &f).unwrap(), hom_par_dim(&t, &f).unwrap());
        assert_eq!(hom_par_dim(&f, &e).unwrap(), hom_par_dim(&f, &t).unwrap());
        assert_eq!(hom_par_dim(&e, &e).unwrap(), hom_par_dim(&t, &t).unwrap());
    }
}
