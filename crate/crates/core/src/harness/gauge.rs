use rand::seq::SliceRandom;
use rand::Rng;

use crate::exactlin::Rational;
use crate::projline::{Poly, PolyHom, SplitBundle};

fn small<R: Rng>(rng: &mut R) -> Rational {
    Rational::from_int(rng.gen_range(-2..=2))
}

fn nonzero<R: Rng>(rng: &mut R) -> Rational {
    Rational::from_int(*[-2i64, -1, 1, 2].choose(rng).expect("nonempty"))
}

/// A random automorphism of a split bundle with small integer coefficients.
///
/// Built as `C o U`: `U` is unipotent with random polynomial entries
/// `O(a_i) -> O(a_j)` above the diagonal wherever `a_j > a_i`, and `C` is a
/// constant invertible matrix on each block of equal degrees (a permuted
/// `L D U` product). Its determinant is the nonzero constant `det C`.
pub fn random_automorphism<R: Rng>(a: &SplitBundle, rng: &mut R) -> PolyHom {
    let deg = a.degrees();
    let r = deg.len();

    let mut unip = vec![vec![Poly::zero(); r]; r];
    for j in 0..r {
        unip[j][j] = Poly::constant(Rational::one());
        for i in j + 1..r {
            if deg[j] > deg[i] {
                let len = (deg[j] - deg[i] + 1) as usize;
                unip[j][i] = Poly::new((0..len).map(|_| small(rng)).collect());
            }
        }
    }

    let mut constant = vec![vec![Rational::zero(); r]; r];
    let mut start = 0;
    while start < r {
        let end = (start..r).find(|&k| deg[k] != deg[start]).unwrap_or(r);
        let s = end - start;
        let mut lower = vec![vec![Rational::zero(); s]; s];
        let mut upper = vec![vec![Rational::zero(); s]; s];
        for x in 0..s {
            lower[x][x] = Rational::one();
            upper[x][x] = nonzero(rng);
            for y in 0..x {
                lower[x][y] = small(rng);
                upper[y][x] = small(rng);
            }
        }
        let mut perm: Vec<usize> = (0..s).collect();
        perm.shuffle(rng);
        for x in 0..s {
            for y in 0..s {
                let v: Rational = (0..s).map(|k| &lower[perm[x]][k] * &upper[k][y]).sum();
                constant[start + x][start + y] = v;
            }
        }
        start = end;
    }
    let c = PolyHom::new(
        a.clone(),
        a.clone(),
        constant
            .into_iter()
            .map(|row| row.into_iter().map(Poly::constant).collect())
            .collect(),
    )
    .expect("block constants respect degree bounds");
    let u = PolyHom::new(a.clone(), a.clone(), unip).expect("upper entries respect degree bounds");
    c.compose(&u).expect("same bundle")
}
