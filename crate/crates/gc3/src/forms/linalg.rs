//! Division-free Pfaffians, determinants and adjugates over a commutative
//! ring, by expansion with memoization on index subsets.

use std::collections::HashMap;

use super::ring::Ring;
use super::FormsError;

pub type Matrix<R> = Vec<Vec<R>>;

pub fn matmul<R: Ring>(a: &[Vec<R>], b: &[Vec<R>]) -> Matrix<R> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = R::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc.add_assign(&row[k].mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose<R: Ring>(a: &[Vec<R>]) -> Matrix<R> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn is_skew<R: Ring>(m: &[Vec<R>]) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n)
        && (0..n).all(|i| m[i][i].is_zero() && (0..i).all(|j| m[i][j] == m[j][i].neg()))
}

/// Pfaffian by expansion along the first remaining row.
pub fn pfaffian<R: Ring>(m: &[Vec<R>]) -> Result<R, FormsError> {
    if !is_skew(m) {
        return Err(FormsError::NotSkew);
    }
    let n = m.len();
    if n % 2 == 1 {
        return Ok(R::zero());
    }
    assert!(n <= 64);
    fn rec<R: Ring>(m: &[Vec<R>], set: u64, memo: &mut HashMap<u64, R>) -> R {
        if set == 0 {
            return R::one();
        }
        if let Some(v) = memo.get(&set) {
            return v.clone();
        }
        let i = set.trailing_zeros() as usize;
        let rest = set & !(1 << i);
        let mut acc = R::zero();
        let mut r = rest;
        let mut pos = 0;
        while r != 0 {
            let j = r.trailing_zeros() as usize;
            r &= r - 1;
            if !m[i][j].is_zero() {
                let sub = rec(m, rest & !(1 << j), memo);
                if !sub.is_zero() {
                    let t = m[i][j].mul(&sub);
                    acc.add_assign(&if pos % 2 == 0 { t } else { t.neg() });
                }
            }
            pos += 1;
        }
        memo.insert(set, acc.clone());
        acc
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(rec(m, full, &mut HashMap::new()))
}

/// The defining sum over all permutations, divided by `2ⁿ n!`.
pub fn pfaffian_permutation_sum<R: Ring>(m: &[Vec<R>]) -> Result<R, FormsError> {
    if !is_skew(m) {
        return Err(FormsError::NotSkew);
    }
    let n = m.len();
    if n % 2 == 1 {
        return Ok(R::zero());
    }
    let mut acc = R::zero();
    for p in crate::graph::permutations(n) {
        let mut t = R::from_i64(crate::graph::perm_sign(&p) as i64);
        for k in 0..n / 2 {
            t = t.mul(&m[p[2 * k]][p[2 * k + 1]]);
        }
        acc.add_assign(&t);
    }
    let norm: i64 = (1..=n as i64 / 2).product::<i64>() << (n / 2);
    acc.div_exact(&R::from_i64(norm)).ok_or(FormsError::NotSkew)
}

/// Determinant by Laplace expansion memoized on used column sets.
pub fn det<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    assert!(n <= 63 && m.iter().all(|r| r.len() == n));
    // layer[mask] = signed sum over assignments of the first |mask| rows.
    let mut layer: HashMap<u64, R> = HashMap::from([(0, R::one())]);
    for row in m.iter() {
        let mut next: HashMap<u64, R> = HashMap::new();
        for (&mask, v) in &layer {
            for (c, entry) in row.iter().enumerate() {
                if mask >> c & 1 == 1 || entry.is_zero() {
                    continue;
                }
                let above = (mask >> c >> 1).count_ones();
                let t = v.mul(entry);
                let t = if above % 2 == 0 { t } else { t.neg() };
                next.entry(mask | 1 << c).or_insert_with(R::zero).add_assign(&t);
            }
        }
        next.retain(|_, v| !v.is_zero());
        layer = next;
    }
    let full = (1u64 << n) - 1;
    layer.remove(&full).unwrap_or_else(R::zero)
}

fn minor<R: Ring>(m: &[Vec<R>], r: usize, c: usize) -> Matrix<R> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Classical adjugate, `adj(M)·M = det(M)·I`.
pub fn adjugate<R: Ring>(m: &[Vec<R>]) -> Matrix<R> {
    let n = m.len();
    if n == 1 {
        return vec![vec![R::one()]];
    }
    let mut adj = vec![vec![R::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let d = det(&minor(m, i, j));
            adj[j][i] = if (i + j) % 2 == 0 { d } else { d.neg() };
        }
    }
    adj
}

/// Determinant and adjugate of a matrix over a field, by elimination.
pub fn det_adjugate_field<R: Ring>(m: &[Vec<R>]) -> Option<(R, Matrix<R>)> {
    let n = m.len();
    let mut a: Matrix<R> = m.to_vec();
    let mut inv: Matrix<R> = (0..n).map(|i| (0..n).map(|j| if i == j { R::one() } else { R::zero() }).collect()).collect();
    let mut d = R::one();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        if p != col {
            a.swap(p, col);
            inv.swap(p, col);
            d = d.neg();
        }
        let piv = a[col][col].clone();
        d = d.mul(&piv);
        let pinv = R::one().div_exact(&piv)?;
        for j in 0..n {
            a[col][j] = a[col][j].mul(&pinv);
            inv[col][j] = inv[col][j].mul(&pinv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let (x, y) = (a[col][j].mul(&f), inv[col][j].mul(&f));
                a[r][j] = a[r][j].sub(&x);
                inv[r][j] = inv[r][j].sub(&y);
            }
        }
    }
    let adj = inv.into_iter().map(|r| r.into_iter().map(|x| x.mul(&d)).collect()).collect();
    Some((d, adj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(pfaffian(&m(&[&[0, 5], &[-5, 0]])).unwrap(), int(5));
        assert_eq!(pfaffian(&m(&[&[0, 1, 2], &[-1, 0, 3], &[-2, -3, 0]])).unwrap(), int(0));
        assert!(pfaffian(&m(&[&[0, 1], &[1, 0]])).is_err());
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(det(&a), int(18));
        let (d, adj) = det_adjugate_field(&a).unwrap();
        assert_eq!(d, int(18));
        assert_eq!(adj, adjugate(&a));
    }
}
