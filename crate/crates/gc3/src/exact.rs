//! Exact rational arithmetic and sparse linear algebra over ℚ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-1/3"`, `"+2"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

fn height(q: &Rational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl SparseRationalMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseRationalMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::new(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Stores `x` at `(r, c)`; zero removes the entry.
    pub fn set(&mut self, r: usize, c: usize, x: Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        if x.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), x);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, x: &Rational) {
        let v = self.get(r, c) + x;
        self.set(r, c, v);
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::new(self.cols, self.rows);
        for (&(r, c), x) in &self.entries {
            t.entries.insert((c, r), x.clone());
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Rational::zero(); self.rows];
        for (&(r, c), x) in &self.entries {
            out[r] += x * &v[c];
        }
        out
    }

    fn row_maps(&self) -> Vec<BTreeMap<usize, Rational>> {
        let mut rows = vec![BTreeMap::new(); self.rows];
        for (&(r, c), x) in &self.entries {
            rows[r].insert(c, x.clone());
        }
        rows
    }
}

/// Row echelon reduction; returns pivot (row map, column) pairs in column order.
/// Pivots are chosen per column by minimal entry height, then shortest row.
fn echelon(m: &SparseRationalMatrix, full_reduce: bool) -> Vec<(BTreeMap<usize, Rational>, usize)> {
    let mut active: Vec<BTreeMap<usize, Rational>> =
        m.row_maps().into_iter().filter(|r| !r.is_empty()).collect();
    let mut pivots: Vec<(BTreeMap<usize, Rational>, usize)> = Vec::new();
    for c in 0..m.cols {
        let mut best: Option<(usize, (u64, usize))> = None;
        for (i, row) in active.iter().enumerate() {
            if let Some(x) = row.get(&c) {
                let score = (height(x), row.len());
                if best.map_or(true, |(_, s)| score < s) {
                    best = Some((i, score));
                }
            }
        }
        let Some((bi, _)) = best else { continue };
        let mut prow = active.swap_remove(bi);
        let inv = Rational::one() / prow[&c].clone();
        for x in prow.values_mut() {
            *x *= &inv;
        }
        for row in active.iter_mut() {
            if let Some(f) = row.get(&c).cloned() {
                axpy(row, &prow, &f);
            }
        }
        active.retain(|r| !r.is_empty());
        if full_reduce {
            for (prev, _) in pivots.iter_mut() {
                if let Some(f) = prev.get(&c).cloned() {
                    axpy(prev, &prow, &f);
                }
            }
        }
        pivots.push((prow, c));
        if active.is_empty() {
            break;
        }
    }
    pivots
}

/// row -= f * pivot
fn axpy(row: &mut BTreeMap<usize, Rational>, pivot: &BTreeMap<usize, Rational>, f: &Rational) {
    for (&k, p) in pivot {
        let v = row.get(&k).cloned().unwrap_or_else(Rational::zero) - f * p;
        if v.is_zero() {
            row.remove(&k);
        } else {
            row.insert(k, v);
        }
    }
}

pub fn rank(m: &SparseRationalMatrix) -> usize {
    echelon(m, false).len()
}

/// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
pub fn kernel_basis(m: &SparseRationalMatrix) -> Vec<Vec<Rational>> {
    let pivots = echelon(m, true);
    let pivot_cols: Vec<usize> = pivots.iter().map(|(_, c)| *c).collect();
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (row, pc) in &pivots {
            if let Some(x) = row.get(&free) {
                v[*pc] = -x.clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Determinant of a square integer matrix (Bareiss, exact).
pub fn det_integer(a: &[Vec<i64>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> =
        a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Determinant over ℚ by Gaussian elimination.
pub fn det_rational(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= &m[k][k];
        let inv = Rational::one() / m[k][k].clone();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] * &inv;
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Inverse over ℚ, `None` when singular.
pub fn inverse_rational(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(p, k);
        let inv = Rational::one() / m[k][k].clone();
        for x in m[k].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in 0..2 * n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&SparseRationalMatrix::identity(2)), 2);
        assert_eq!(rank(&SparseRationalMatrix::new(3, 4)), 0);
        let m = SparseRationalMatrix::from_dense(&[vec![int(1), int(-1)]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], k[0][1]);
    }

    #[test]
    fn dependent_rows() {
        let m = SparseRationalMatrix::from_dense(&[
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(0), int(1), rat(1, 2)],
        ]);
        assert_eq!(rank(&m), 2);
        for v in kernel_basis(&m) {
            assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn determinants_agree() {
        let a = vec![vec![2, -1, 0], vec![1, 3, 4], vec![0, 5, -2]];
        let q: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        assert_eq!(Rational::from_integer(det_integer(&a)), det_rational(&q));
        assert_eq!(det_integer(&a), BigInt::from(-54));
        let inv = inverse_rational(&q).unwrap();
        assert_eq!(det_rational(&inv), rat(-1, 54));
    }

    #[test]
    fn parse_literals() {
        assert_eq!(parse_rational("-1/3"), Some(rat(-1, 3)));
        assert_eq!(parse_rational("+2"), Some(int(2)));
        assert_eq!(parse_rational("4/-6"), Some(rat(-2, 3)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
