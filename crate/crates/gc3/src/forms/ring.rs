//! Coefficient rings for forms: exact rationals, polynomials, and a prime
//! field used for fast exact interpolation.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::exact::Rational;

/// Commutative ring with exact division where it exists.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / o` if the quotient lies in the ring.
    fn div_exact(&self, o: &Self) -> Option<Self>;

    fn add_assign(&mut self, o: &Self) {
        *self = self.add(o);
    }

    fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        crate::exact::int(n)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        (!Zero::is_zero(o)).then(|| self / o)
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
}

/// The Mersenne prime `2⁶¹ − 1`.
pub const P61: u64 = (1 << 61) - 1;

/// Element of `ℤ/P61`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Fp(pub u64);

impl Fp {
    pub fn new(n: i64) -> Fp {
        Fp(n.rem_euclid(P61 as i64) as u64)
    }

    fn reduce(x: u128) -> u64 {
        let lo = (x as u64) & P61;
        let hi = (x >> 61) as u64;
        let s = lo + (hi & P61) + ((x >> 122) as u64);
        let s = (s & P61) + (s >> 61);
        if s >= P61 {
            s - P61
        } else {
            s
        }
    }

    pub fn inv(self) -> Option<Fp> {
        if self.0 == 0 {
            return None;
        }
        let mut r = Fp(1);
        let mut b = self;
        let mut e = P61 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = Ring::mul(&r, &b);
            }
            b = Ring::mul(&b, &b);
            e >>= 1;
        }
        Some(r)
    }

    /// Symmetric representative in `(−P/2, P/2]`.
    pub fn signed(self) -> i64 {
        if self.0 > P61 / 2 {
            self.0 as i64 - P61 as i64
        } else {
            self.0 as i64
        }
    }

    /// Image of a rational number, `None` if the denominator vanishes.
    pub fn from_rational(q: &Rational) -> Option<Fp> {
        let p = num_bigint::BigInt::from(P61);
        let n = (q.numer() % &p + &p) % &p;
        let d = (q.denom() % &p + &p) % &p;
        let n = Fp(n.try_into().unwrap());
        let d = Fp(u64::try_from(d).unwrap());
        Some(Ring::mul(&n, &d.inv()?))
    }
}

impl Ring for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P61 { s - P61 } else { s })
    }
    fn sub(&self, o: &Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P61 - o.0 })
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(Fp::reduce(self.0 as u128 * o.0 as u128))
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P61 - self.0 })
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }
}

/// Smallest `n/d` with `n ≡ a·d (mod P61)` and `|n|, d < 2³⁰`.
pub fn rational_reconstruct(a: Fp) -> Option<Rational> {
    let bound: i128 = 1 << 30;
    let (mut r0, mut r1) = (P61 as i128, a.0 as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 >= bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() >= bound {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some(Rational::new(n.into(), d.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn field_arithmetic() {
        let a = Fp::new(-5);
        assert_eq!(a.signed(), -5);
        assert_eq!(a.mul(&a.inv().unwrap()), Fp(1));
        let big = Fp(P61 - 1);
        assert_eq!(big.mul(&big), Fp(1));
        assert_eq!(Fp::from_rational(&rat(-7, 3)).unwrap().mul(&Fp::new(3)), Fp::new(-7));
    }

    #[test]
    fn reconstruction() {
        for q in [rat(10, 1), rat(-20, 1), rat(3, 7), rat(-1, 3), rat(0, 1)] {
            assert_eq!(rational_reconstruct(Fp::from_rational(&q).unwrap()), Some(q));
        }
    }
}
