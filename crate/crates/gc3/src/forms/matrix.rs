//! Invariant forms on symmetric matrices evaluated exactly at a rational
//! point, in the exterior algebra on `dX_{ij}`, `i ≤ j`, ordered
//! lexicographically.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use super::exterior::ExteriorElement;
use super::linalg::{self, Matrix};
use super::ring::Ring;
use super::FormsError;
use crate::exact::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormKind {
    /// `φⁿ = Pf(dX·X⁻¹·dX)/√det X`.
    Pfaffian,
    /// `β^{4k+1} = tr((X⁻¹dX)^{4k+1})`.
    Beta(u32),
    /// `ηⁿ = ι_E(∧ dX_{ij})/det X^{(n+1)/2}`.
    Volume,
}

/// The value `form · det(X₀)^{−odd/2}`; `odd` is 1 only when `det X₀`
/// is not the square of a rational.
#[derive(Clone, Debug, PartialEq)]
pub struct PointForm {
    pub form: ExteriorElement<Rational>,
    pub det: Rational,
    pub odd: u32,
}

/// Index of the generator `dX_{ij}` (`i ≤ j`).
pub fn generator_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    i * n - i * i.saturating_sub(1) / 2 + j - i
}

fn generator_table(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![0; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            idx[i][j] = k;
            idx[j][i] = k;
            k += 1;
        }
    }
    idx
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

/// Sylvester's criterion on leading principal minors.
pub fn is_positive_definite(x: &[Vec<Rational>]) -> bool {
    let n = x.len();
    x.iter().all(|r| r.len() == n)
        && (0..n).all(|i| (0..i).all(|j| x[i][j] == x[j][i]))
        && (1..=n).all(|k| {
            let sub: Vec<Vec<Rational>> = x[..k].iter().map(|r| r[..k].to_vec()).collect();
            crate::exact::det_rational(&sub).is_positive()
        })
}

/// `(dX)_{ij} = dX_{min(i,j), max(i,j)}`, optionally premultiplied.
fn dx_matrix(n: usize, left: Option<&Matrix<Rational>>) -> Matrix<ExteriorElement<Rational>> {
    let idx = generator_table(n);
    let dx: Matrix<ExteriorElement<Rational>> =
        (0..n).map(|i| (0..n).map(|j| ExteriorElement::generator(idx[i][j])).collect()).collect();
    match left {
        None => dx,
        Some(a) => {
            let lifted: Matrix<ExteriorElement<Rational>> =
                a.iter().map(|r| r.iter().map(|x| ExteriorElement::scalar(x.clone())).collect()).collect();
            linalg::matmul(&lifted, &dx)
        }
    }
}

/// Evaluates the named invariant form on `n × n` matrices at `X₀`.
pub fn matrix_form_at_point(kind: MatrixFormKind, x0: &[Vec<Rational>]) -> Result<PointForm, FormsError> {
    let n = x0.len();
    if n == 0 || n > 6 {
        return Err(FormsError::Unsupported(format!("matrix size {n}")));
    }
    if !is_positive_definite(x0) {
        return Err(FormsError::NotPositiveDefinite);
    }
    let det = crate::exact::det_rational(x0);
    let inv = crate::exact::inverse_rational(x0).ok_or(FormsError::NotPositiveDefinite)?;
    let root = rational_sqrt(&det);
    // scale by det^{-h/2}
    let with_half_power = |form: ExteriorElement<Rational>, h: u32| -> PointForm {
        let whole = Ring::pow(&det, h / 2);
        let form = form.map(|c| c / &whole);
        match (h % 2, &root) {
            (0, _) => PointForm { form, det: det.clone(), odd: 0 },
            (_, Some(r)) => PointForm { form: form.map(|c| c / r), det: det.clone(), odd: 0 },
            (_, None) => PointForm { form, det: det.clone(), odd: 1 },
        }
    };
    match kind {
        MatrixFormKind::Pfaffian => {
            if n % 2 == 1 {
                return Ok(PointForm { form: ExteriorElement::default(), det, odd: 0 });
            }
            let dx = dx_matrix(n, None);
            let lifted: Matrix<ExteriorElement<Rational>> =
                inv.iter().map(|r| r.iter().map(|x| ExteriorElement::scalar(x.clone())).collect()).collect();
            let m = linalg::matmul(&linalg::matmul(&dx, &lifted), &dx);
            Ok(with_half_power(linalg::pfaffian(&m)?, 1))
        }
        MatrixFormKind::Beta(k) => {
            let a = dx_matrix(n, Some(&inv));
            let mut p = a.clone();
            for _ in 1..4 * k + 1 {
                p = linalg::matmul(&p, &a);
            }
            let mut tr = ExteriorElement::default();
            for (i, row) in p.iter().enumerate() {
                tr.add_assign(&row[i]);
            }
            Ok(PointForm { form: tr, det, odd: 0 })
        }
        MatrixFormKind::Volume => {
            let gens = n * (n + 1) / 2;
            let coords: Vec<Rational> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| x0[i][j].clone()).collect();
            let form = ExteriorElement::<Rational>::volume(gens).euler_contraction(&coords);
            Ok(with_half_power(form, n as u32 + 1))
        }
    }
}

/// Random symmetric positive definite integer matrix `AᵀA + I`.
pub fn random_positive_definite(n: usize, rng: &mut impl Rng) -> Matrix<Rational> {
    let a: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    (0..n)
        .map(|i| (0..n).map(|j| int((0..n).map(|k| a[k][i] * a[k][j]).sum::<i64>() + i64::from(i == j))).collect())
        .collect()
}

fn volume_ratio(n: usize, x0: &[Vec<Rational>]) -> Result<Option<Rational>, FormsError> {
    let size = 2 * n;
    let mut lhs = ExteriorElement::scalar(Rational::one());
    for k in 1..n as u32 {
        lhs = lhs.wedge(&matrix_form_at_point(MatrixFormKind::Beta(k), x0)?.form);
    }
    let phi = matrix_form_at_point(MatrixFormKind::Pfaffian, x0)?;
    let eta = matrix_form_at_point(MatrixFormKind::Volume, x0)?;
    debug_assert_eq!(phi.odd, eta.odd);
    let lhs = lhs.wedge(&phi.form);
    let gens = size * (size + 1) / 2;
    let full = (1u64 << gens) - 1;
    let mut ratio: Option<Rational> = None;
    for g in 0..gens {
        let mask = full & !(1 << g);
        let (a, b) = (lhs.coefficient(mask), eta.form.coefficient(mask));
        if b.is_zero() {
            if !a.is_zero() {
                return Err(FormsError::ProbeFailure);
            }
            continue;
        }
        let r = a / b;
        match &ratio {
            None => ratio = Some(r),
            Some(q) if *q != r => return Err(FormsError::ProbeFailure),
            _ => {}
        }
    }
    Ok(ratio)
}

/// `c_n` with `β⁵ ∧ β⁹ ∧ … ∧ β^{4n−3} ∧ φ^{2n} = c_n η^{2n}`, from two
/// random rational points. Sizes beyond `n = 2` are slow.
pub fn volume_constant(n: usize) -> Result<Rational, FormsError> {
    if n == 0 || n > 3 {
        return Err(FormsError::Unsupported(format!("c_{n}")));
    }
    let mut rng = Pcg64::seed_from_u64(0xc0_ffee + n as u64);
    let mut found: Vec<Rational> = Vec::new();
    for _ in 0..6 {
        let x0 = random_positive_definite(2 * n, &mut rng);
        if let Some(r) = volume_ratio(n, &x0)? {
            if found.first().is_some_and(|f| *f != r) {
                return Err(FormsError::ProbeFailure);
            }
            found.push(r);
            if found.len() == 2 {
                return Ok(found.remove(0));
            }
        }
    }
    Err(FormsError::ProbeFailure)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_order_is_lexicographic() {
        let t = generator_table(3);
        assert_eq!((t[0][0], t[0][2], t[1][1], t[2][2]), (0, 2, 3, 5));
        for i in 0..4 {
            for j in i..4 {
                assert_eq!(generator_index(4, i, j), generator_table(4)[i][j]);
            }
        }
    }

    #[test]
    fn rejects_indefinite() {
        let x = vec![vec![int(1), int(2)], vec![int(2), int(1)]];
        assert!(matches!(matrix_form_at_point(MatrixFormKind::Pfaffian, &x), Err(FormsError::NotPositiveDefinite)));
    }
}
