use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: RatMatrix,
    pub pivots: Vec<usize>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from row vectors. `cols` fixes the width, which matters
    /// when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::usage(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(RatMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integers; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        Self::from_rows(rows, cols).expect("ragged integer matrix")
    }

    /// The `i`-th standard basis row vector of length `n`.
    pub fn unit_row(i: usize, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::one();
        v
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.cols {
            return Err(Error::usage(format!(
                "cannot stack widths {} and {}",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_cols(&self, cols: &[usize]) -> RatMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Rank by fraction-free elimination with full pivoting.
    pub fn rank(&self) -> usize {
        let mut a = integer_rows(self);
        bareiss(&mut a, self.cols).0
    }

    /// Exact determinant of a square matrix.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::usage(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        // Row scaling multiplies the determinant by the scale; undo it below.
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let (row, l) = clear_denominators(self.row(i));
            scale *= l;
            a.push(row);
        }
        let (rank, sign, last) = bareiss(&mut a, self.cols);
        if rank < self.rows {
            return Ok(Rational::zero());
        }
        let det = if sign { -last } else { last };
        Rational::from_big(det, scale)
    }

    /// Gauss-Jordan reduction over the rationals.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = Rational::one() / &m[(r, c)];
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &f * &m[(r, j)];
                    m[(i, j)] -= &v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    /// Basis of `{ x : self * x = 0 }`, one row per basis vector.
    pub fn kernel_basis(&self) -> RatMatrix {
        let Rref { matrix, pivots } = self.rref();
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&matrix[(r, free)];
            }
            basis.push(v);
        }
        RatMatrix::from_rows(basis, n).expect("kernel rows have width n")
    }

    /// A basis (as rows) of the row space.
    pub fn row_space_basis(&self) -> RatMatrix {
        let Rref { matrix, pivots } = self.rref();
        let rows = (0..pivots.len()).map(|i| matrix.row(i).to_vec()).collect();
        RatMatrix::from_rows(rows, self.cols).expect("rref rows have width cols")
    }

    /// True when every row of `other` lies in the row space of `self`.
    pub fn row_space_contains(&self, other: &RatMatrix) -> Result<bool> {
        let r = self.rank();
        Ok(self.vstack(other)?.rank() == r)
    }

    /// Equality of row spaces.
    pub fn same_row_space(&self, other: &RatMatrix) -> Result<bool> {
        Ok(self.cols == other.cols
            && self.rank() == other.rank()
            && self.row_space_contains(other)?)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

/// Scales a rational row by the lcm of its denominators.
fn clear_denominators(row: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = row
        .iter()
        .map(|x| x.numer() * (&l / x.denom()))
        .collect();
    (ints, l)
}

fn integer_rows(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| clear_denominators(m.row(i)).0).collect()
}

/// Bareiss elimination in place. Returns `(rank, odd_permutation, last_pivot)`;
/// for a nonsingular square input `last_pivot` is the determinant up to the
/// permutation sign.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, bool, BigInt) {
    let rows = a.len();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let mut prev = BigInt::one();
    let mut odd = false;
    let mut k = 0;
    while k < rows.min(cols) {
        // Full pivoting: smallest nonzero magnitude over the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for jj in k..cols {
                let v = &a[i][col_perm[jj]];
                if v.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => v.abs() < a[bi][col_perm[bj]].abs(),
                };
                if better {
                    best = Some((i, jj));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        if pi != k {
            a.swap(pi, k);
            odd = !odd;
        }
        if pj != k {
            col_perm.swap(pj, k);
            odd = !odd;
        }
        let pc = col_perm[k];
        let pivot = a[k][pc].clone();
        let (head, tail) = a.split_at_mut(k + 1);
        let prow = &head[k];
        for row in tail.iter_mut() {
            let f = row[pc].clone();
            for &c in &col_perm[k + 1..] {
                let mut v = &row[c] * &pivot;
                if !f.is_zero() && !prow[c].is_zero() {
                    v -= &f * &prow[c];
                }
                row[c] = if prev.is_one() { v } else { v / &prev };
            }
            row[pc] = BigInt::zero();
        }
        prev = pivot;
        k += 1;
    }
    (k, odd, prev)
}

/// Returns `(rank, kernel_dim)` with `rank + kernel_dim = cols`.
pub fn rank_and_kernel(m: &RatMatrix) -> (usize, usize) {
    let r = m.rank();
    (r, m.cols() - r)
}

/// Dimension of the solution space of the homogeneous system `constraints * x = 0`.
pub fn solution_space_dim(constraints: &RatMatrix, unknowns: usize) -> Result<usize> {
    if constraints.cols() != unknowns {
        return Err(Error::usage(format!(
            "constraint matrix has {} columns but {unknowns} unknowns were declared",
            constraints.cols()
        )));
    }
    Ok(unknowns - rank_by_blocks(constraints))
}

/// Rank computed by splitting the matrix into independent blocks: columns are
/// grouped by the connected components of the "appear in a common row"
/// relation, and each block is eliminated on its own.
pub fn rank_by_blocks(m: &RatMatrix) -> usize {
    let n = m.cols();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut row_support: Vec<Vec<usize>> = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let support: Vec<usize> = (0..n).filter(|&j| !m[(i, j)].is_zero()).collect();
        for w in support.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a] = b;
            }
        }
        row_support.push(support);
    }
    let mut blocks: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> =
        Default::default();
    for (i, support) in row_support.iter().enumerate() {
        if let Some(&first) = support.first() {
            blocks.entry(find(&mut parent, first)).or_default().0.push(i);
        }
    }
    for j in 0..n {
        let root = find(&mut parent, j);
        if let Some(b) = blocks.get_mut(&root) {
            b.1.push(j);
        }
    }
    blocks
        .values()
        .map(|(rows, cols)| {
            let sub: Vec<Vec<Rational>> = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect())
                .collect();
            let k = cols.len();
            RatMatrix::from_rows(sub, k).expect("block width").rank()
        })
        .sum()
}
