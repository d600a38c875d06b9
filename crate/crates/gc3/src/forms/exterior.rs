//! Exterior algebra on at most 64 ordered generators `dx₁, dx₂, …` with
//! coefficients in a commutative ring. Basis monomials are bitmasks.

use std::collections::BTreeMap;

use super::poly::Polynomial;
use super::ring::Ring;

/// Sign of `dx_a ∧ dx_b` relative to the sorted monomial `dx_{a∪b}`, for
/// disjoint `a`, `b`.
pub fn wedge_sign(a: u64, b: u64) -> i64 {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> j >> 1).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Generator indices of a basis monomial, ascending.
pub fn mask_indices(mut s: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(s.count_ones() as usize);
    while s != 0 {
        v.push(s.trailing_zeros() as usize);
        s &= s - 1;
    }
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExteriorElement<R> {
    terms: BTreeMap<u64, R>,
}

impl<R: Ring> Default for ExteriorElement<R> {
    fn default() -> Self {
        ExteriorElement { terms: BTreeMap::new() }
    }
}

impl<R: Ring> ExteriorElement<R> {
    pub fn scalar(c: R) -> Self {
        Self::term(0, c)
    }

    /// `dx_i`.
    pub fn generator(i: usize) -> Self {
        Self::term(1 << i, R::one())
    }

    pub fn term(mask: u64, c: R) -> Self {
        let mut e = Self::default();
        e.add_term(mask, c);
        e
    }

    pub fn add_term(&mut self, mask: u64, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &R)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coefficient(&self, mask: u64) -> R {
        self.terms.get(&mask).cloned().unwrap_or_else(R::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Form degree if homogeneous and non-zero.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.count_ones());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = Self::default();
        for (&a, x) in &self.terms {
            for (&b, y) in &o.terms {
                if a & b != 0 {
                    continue;
                }
                let c = x.mul(y);
                out.add_term(a | b, if wedge_sign(a, b) < 0 { c.neg() } else { c });
            }
        }
        out
    }

    pub fn scaled(&self, c: &R) -> Self {
        let mut out = Self::default();
        for (&m, x) in &self.terms {
            out.add_term(m, x.mul(c));
        }
        out
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> ExteriorElement<S> {
        let mut out = ExteriorElement::default();
        for (&m, x) in &self.terms {
            out.add_term(m, f(x));
        }
        out
    }

    /// Sets `dx_i = 0`.
    pub fn drop_generator(&self, i: usize) -> Self {
        ExteriorElement { terms: self.terms.iter().filter(|(&m, _)| m >> i & 1 == 0).map(|(&m, c)| (m, c.clone())).collect() }
    }

    /// Renames generators by `map[i]`, with the reordering sign.
    pub fn relabel(&self, map: &[usize]) -> Self {
        let mut out = Self::default();
        for (&m, c) in &self.terms {
            let mut sign = 1;
            let mut acc = 0u64;
            for i in mask_indices(m) {
                let b = 1u64 << map[i];
                sign *= wedge_sign(acc, b);
                acc |= b;
            }
            out.add_term(acc, if sign < 0 { c.neg() } else { c.clone() });
        }
        out
    }

    /// Interior product with `Σ xᵢ ∂/∂xᵢ`, given the coordinate values.
    pub fn euler_contraction(&self, coords: &[R]) -> Self {
        let mut out = Self::default();
        for (&m, c) in &self.terms {
            for (a, i) in mask_indices(m).into_iter().enumerate() {
                let t = c.mul(&coords[i]);
                out.add_term(m & !(1 << i), if a % 2 == 1 { t.neg() } else { t });
            }
        }
        out
    }

    /// `dx₁ ∧ … ∧ dx_n`.
    pub fn volume(n: usize) -> Self {
        Self::term(if n == 64 { u64::MAX } else { (1u64 << n) - 1 }, R::one())
    }
}

impl ExteriorElement<Polynomial> {
    /// Exterior derivative in the variables `x_i` paired with `dx_i`.
    pub fn d(&self, nvars: usize) -> Self {
        let mut out = Self::default();
        for (&m, c) in &self.terms {
            for i in 0..nvars {
                if m >> i & 1 == 1 {
                    continue;
                }
                let di = c.derivative(i);
                if !di.is_zero() {
                    out.add_term(m | 1 << i, if wedge_sign(1 << i, m) < 0 { di.neg() } else { di });
                }
            }
        }
        out
    }

    pub fn set_variable_zero(&self, i: usize) -> Self {
        self.map(|c| c.set_zero(i))
    }

    /// `Ω_n = Σ (−1)^{e−1} x_e dx₁∧…∧dx̂_e∧…∧dx_n`.
    pub fn omega(n: usize) -> Self {
        let coords: Vec<Polynomial> = (0..n).map(Polynomial::var).collect();
        Self::volume(n).euler_contraction(&coords)
    }
}

impl<R: Ring> Ring for ExteriorElement<R> {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::scalar(R::one())
    }
    fn from_i64(n: i64) -> Self {
        Self::scalar(R::from_i64(n))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut e = self.clone();
        e.add_assign(o);
        e
    }
    fn add_assign(&mut self, o: &Self) {
        for (&m, c) in &o.terms {
            self.add_term(m, c.clone());
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    /// The wedge product; commutative only on even-degree elements.
    fn mul(&self, o: &Self) -> Self {
        self.wedge(o)
    }
    fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        if o.terms.len() != 1 || !o.terms.contains_key(&0) {
            return None;
        }
        let d = &o.terms[&0];
        let mut out = Self::default();
        for (&m, c) in &self.terms {
            out.add_term(m, c.div_exact(d)?);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, Rational};

    type E = ExteriorElement<Rational>;

    #[test]
    fn anticommutation() {
        let (a, b) = (E::generator(0), E::generator(3));
        assert_eq!(a.wedge(&b), b.wedge(&a).neg());
        assert!(a.wedge(&a).is_zero());
        assert_eq!(wedge_sign(0b110, 0b001), 1);
        assert_eq!(wedge_sign(0b001, 0b110), 1);
        assert_eq!(wedge_sign(0b010, 0b001), -1);
    }

    #[test]
    fn omega_and_d() {
        let o = ExteriorElement::<Polynomial>::omega(3);
        assert_eq!(o.len(), 3);
        assert_eq!(o.coefficient(0b110), Polynomial::var(0));
        assert_eq!(o.coefficient(0b101), Polynomial::var(1).neg());
        let vol = ExteriorElement::<Polynomial>::volume(3).scaled(&Polynomial::from_i64(3));
        assert_eq!(o.d(3), vol);
        assert!(o.d(3).d(3).is_zero());
        let rel = E::generator(0).wedge(&E::generator(1)).relabel(&[1, 0]);
        assert_eq!(rel.coefficient(0b11), int(-1));
    }
}
