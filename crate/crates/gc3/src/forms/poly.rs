//! Sparse multivariate polynomials with rational coefficients in the
//! variables `x₁, x₂, …`, graded lexicographic term order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use super::ring::{Fp, Ring};
use crate::exact::Rational;

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(i: usize) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = 1;
        Monomial(v)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let n = self.0.len().max(o.0.len());
        Monomial((0..n).map(|i| self.exponent(i) + o.exponent(i)).collect())
    }

    /// `self / o` if `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        if o.0.len() > self.0.len() {
            return None;
        }
        let mut v = self.0.clone();
        for (i, &e) in o.0.iter().enumerate() {
            v[i] = v[i].checked_sub(e)?;
        }
        Some(Monomial::new(v))
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn constant(c: Rational) -> Self {
        let mut p = Polynomial::default();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(i: usize) -> Self {
        Polynomial::monomial(Monomial::var(i), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::default();
        p.add_term(m, c);
        p
    }

    /// `Σ coefficient · x^exponents`.
    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Polynomial::default();
        for (e, c) in terms {
            p.add_term(Monomial::new(e), c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Terms in ascending term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// One more than the largest variable index that occurs.
    pub fn variable_bound(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial::default();
        }
        Polynomial { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial::default();
        }
        Polynomial { terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect() }
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Polynomial::default();
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e > 0 {
                let mut v = m.0.clone();
                v[i] -= 1;
                p.add_term(Monomial::new(v), c * Rational::from_integer(e.into()));
            }
        }
        p
    }

    /// Substitutes `x_i = 0`.
    pub fn set_zero(&self, i: usize) -> Self {
        Polynomial {
            terms: self.terms.iter().filter(|(m, _)| m.exponent(i) == 0).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Renames variables by `map[i]`.
    pub fn relabel(&self, map: &[usize]) -> Self {
        let mut p = Polynomial::default();
        for (m, c) in &self.terms {
            let mut v = vec![0; map.iter().copied().max().map_or(0, |x| x + 1)];
            for (i, &e) in m.0.iter().enumerate() {
                v[map[i]] += e;
            }
            p.add_term(Monomial::new(v), c.clone());
        }
        p
    }

    /// Evaluates in any ring receiving rational coefficients through `coef`.
    pub fn eval_with<R: Ring>(&self, x: &[R], coef: impl Fn(&Rational) -> R) -> R {
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let mut t = coef(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&x[i].pow(e));
                }
            }
            acc.add_assign(&t);
        }
        acc
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.eval_with(x, |c| c.clone())
    }

    pub fn eval_fp(&self, x: &[Fp]) -> Fp {
        self.eval_with(x, |c| Fp::from_rational(c).expect("coefficient denominator divisible by the modulus"))
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let c = num_traits::ToPrimitive::to_f64(c).unwrap();
                m.0.iter().enumerate().fold(c, |t, (i, &e)| t * x[i].powi(e as i32))
            })
            .sum()
    }

    /// Exact quotient by `d`, `None` if `d` does not divide `self`.
    pub fn div_exact_poly(&self, d: &Polynomial) -> Option<Polynomial> {
        let (dm, dc) = d.leading_term()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = Polynomial::default();
        while let Some((rm, rc)) = r.leading_term() {
            let m = rm.div(&dm)?;
            let c = rc / &dc;
            for (tm, tc) in &d.terms {
                r.add_term(tm.mul(&m), -(tc * &c));
            }
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Largest `t ≤ max` with `dᵗ | self`, and the quotient.
    pub fn divide_out(&self, d: &Polynomial, max: u32) -> (u32, Polynomial) {
        let mut cur = self.clone();
        let mut t = 0;
        while t < max && !cur.is_empty() {
            match cur.div_exact_poly(d) {
                Some(q) => {
                    cur = q;
                    t += 1;
                }
                None => break,
            }
        }
        (t, cur)
    }
}

impl Ring for Polynomial {
    fn zero() -> Self {
        Polynomial::default()
    }
    fn one() -> Self {
        Polynomial::constant(Rational::one())
    }
    fn from_i64(n: i64) -> Self {
        Polynomial::constant(crate::exact::int(n))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        p.add_assign(o);
        p
    }
    fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut p = Polynomial::default();
        for (m, c) in &o.terms {
            for (n, d) in &self.terms {
                p.add_term(n.mul(m), c * d);
            }
        }
        p
    }
    fn neg(&self) -> Self {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        self.div_exact_poly(o)
    }
}

impl fmt::Display for Polynomial {
    /// Descending term order, e.g. `3*x1*x2^2 - 1/2*x3 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if a != <Rational as Ring>::one() || m.0.is_empty() {
                factors.push(a.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Parses the `Display` format.
pub fn parse_polynomial(s: &str) -> Option<Polynomial> {
    let s = s.trim();
    if s == "0" {
        return Some(Polynomial::default());
    }
    let mut p = Polynomial::default();
    let compact: String = s.split_whitespace().collect();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for t in terms {
        let (sign, body) = match t.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, t.strip_prefix('+').unwrap_or(&t)),
        };
        let mut c = crate::exact::int(sign);
        let mut exps: Vec<u32> = Vec::new();
        for factor in body.split('*') {
            if let Some(v) = factor.strip_prefix('x') {
                let (idx, e) = match v.split_once('^') {
                    Some((a, b)) => (a.parse::<usize>().ok()?, b.parse::<u32>().ok()?),
                    None => (v.parse::<usize>().ok()?, 1),
                };
                if idx == 0 {
                    return None;
                }
                if exps.len() < idx {
                    exps.resize(idx, 0);
                }
                exps[idx - 1] += e;
            } else {
                c *= crate::exact::parse_rational(factor)?;
            }
        }
        p.add_term(Monomial::new(exps), c);
    }
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn x(i: usize) -> Polynomial {
        Polynomial::var(i)
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::new(vec![0, 2]);
        let b = Monomial::new(vec![1, 0, 1]);
        let c = Monomial::new(vec![3]);
        assert!(a < b && b < c);
        assert!(Monomial::var(0) > Monomial::var(1));
    }

    #[test]
    fn exact_division() {
        let p = x(0).add(&x(1));
        let q = x(2).sub(&Polynomial::from_i64(2));
        let pq = p.mul(&q).mul(&p);
        assert_eq!(pq.div_exact_poly(&p).unwrap(), p.mul(&q));
        assert_eq!(pq.divide_out(&p, 5), (2, q.clone()));
        assert!(q.div_exact_poly(&p).is_none());
    }

    #[test]
    fn display_roundtrip() {
        let p = x(0).mul(&x(1)).scaled(&rat(-3, 2)).add(&x(2).mul(&x(2))).add(&Polynomial::from_i64(7));
        let s = p.to_string();
        assert_eq!(s, "-3/2*x1*x2 + x3^2 + 7");
        assert_eq!(parse_polynomial(&s).unwrap(), p);
        assert_eq!(p.derivative(2), x(2).scaled(&int(2)));
        assert_eq!(p.eval(&[int(1), int(2), int(3)]), int(13));
    }
}
