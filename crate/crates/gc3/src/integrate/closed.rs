//! Closed forms: Γ at half-integers, dipole integrals, and series-parallel
//! reduction of propagator integrals.

use std::fmt;

use num_traits::One;

use crate::exact::{int, Rational};

/// `q · π^{p/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPiExact {
    pub q: Rational,
    pub p: i64,
}

impl HalfPiExact {
    pub fn rational(q: Rational) -> Self {
        HalfPiExact { q, p: 0 }
    }

    pub fn mul(&self, o: &Self) -> Self {
        HalfPiExact { q: &self.q * &o.q, p: self.p + o.p }
    }

    pub fn div(&self, o: &Self) -> Self {
        HalfPiExact { q: &self.q / &o.q, p: self.p - o.p }
    }

    pub fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.q).unwrap() * std::f64::consts::PI.powf(self.p as f64 / 2.0)
    }
}

impl fmt::Display for HalfPiExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.p {
            0 => write!(f, "{}", self.q),
            p if p % 2 == 0 => write!(f, "{}*pi^{}", self.q, p / 2),
            p => write!(f, "{}*pi^({}/2)", self.q, p),
        }
    }
}

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Half(pub i64);

impl Half {
    pub fn int(n: i64) -> Half {
        Half(2 * n)
    }
}

impl std::ops::Add for Half {
    type Output = Half;
    fn add(self, o: Half) -> Half {
        Half(self.0 + o.0)
    }
}

impl std::ops::Sub for Half {
    type Output = Half;
    fn sub(self, o: Half) -> Half {
        Half(self.0 - o.0)
    }
}

/// `Γ(a)` for a positive half-integer `a`, `None` otherwise.
pub fn gamma_half(a: Half) -> Option<HalfPiExact> {
    if a.0 <= 0 {
        return None;
    }
    if a.0 % 2 == 0 {
        let n = a.0 / 2;
        let f: Rational = (1..n).fold(Rational::one(), |acc, k| acc * int(k));
        return Some(HalfPiExact::rational(f));
    }
    // Γ(k + 1/2) = (2k)!/(4^k k!) √π
    let k = (a.0 - 1) / 2;
    let mut q = Rational::one();
    for j in 0..k {
        q *= Rational::new((2 * j + 1).into(), 2.into());
    }
    Some(HalfPiExact { q, p: 1 })
}

/// `(−2π)^{−n}`.
pub fn normalization(n: i64) -> HalfPiExact {
    let base = int(-2);
    let q = if n >= 0 { Rational::one() / num_traits::pow(base, n as usize) } else { num_traits::pow(base, (-n) as usize) };
    HalfPiExact { q, p: -2 * n }
}

/// Numerator constant of the dipole form `φ_{D_{2i+1}} = c·(x₁⋯x_{2i+1})^{i−1}Ω/Ψ^{i+1/2}`.
pub fn dipole_numerator_constant(i: u32) -> Rational {
    let num: Rational = (1..=2 * i as i64).fold(Rational::one(), |a, k| a * int(k));
    let den: Rational = (1..=i as i64).fold(Rational::one(), |a, k| a * int(k)) * num_traits::pow(int(2), i as usize);
    let s = if i % 2 == 0 { int(1) } else { int(-1) };
    s * num / den
}

/// `I_{D_{2i+1}}(1)` from `Γ(1/2)^{2i+1}/Γ(i+1/2)` and the normalization.
pub fn dipole_exact(i: u32) -> Rational {
    assert!(i >= 1);
    let m = 2 * i as i64 + 1;
    let top = (0..m).fold(HalfPiExact::rational(Rational::one()), |acc, _| acc.mul(&gamma_half(Half(1)).unwrap()));
    let integral = top.div(&gamma_half(Half(m)).unwrap());
    let value = integral
        .mul(&HalfPiExact::rational(dipole_numerator_constant(i)))
        .mul(&normalization(i as i64));
    assert_eq!(value.p, 0, "dipole value must be rational");
    value.q
}

/// Why a propagator graph does not reduce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotReducible {
    /// No series or parallel pair remains and the graph is not one edge.
    Stuck,
    /// A Γ-function argument is not a positive half-integer.
    GammaPole,
}

/// `Γ(D/2−n₁)Γ(D/2−n₂)Γ(n₁+n₂−D/2) / (Γ(n₁)Γ(n₂)Γ(D−n₁−n₂))`.
pub fn bubble(n1: Half, n2: Half, dim: Half) -> Result<HalfPiExact, NotReducible> {
    let h = Half(dim.0 / 2);
    if dim.0 % 2 != 0 {
        // D/2 must itself be a half-integer
        return Err(NotReducible::GammaPole);
    }
    let g = |a: Half| gamma_half(a).ok_or(NotReducible::GammaPole);
    let num = g(h - n1)?.mul(&g(h - n2)?).mul(&g(n1 + n2 - h)?);
    let den = g(n1)?.mul(&g(n2)?).mul(&g(dim - n1 - n2)?);
    Ok(num.div(&den))
}

/// Momentum-space propagator integral of a graph with external vertices
/// `ext`, edge indices `n` and dimension `dim`, by repeated series and
/// parallel reductions down to a single edge between `ext`.
pub fn series_parallel_reduce(
    edges: &[[usize; 2]],
    n: &[Half],
    ext: (usize, usize),
    dim: Half,
) -> Result<HalfPiExact, NotReducible> {
    let mut es: Vec<([usize; 2], Half)> = edges.iter().copied().zip(n.iter().copied()).collect();
    let mut factor = HalfPiExact::rational(Rational::one());
    loop {
        if es.len() == 1 {
            let [a, b] = es[0].0;
            return if (a, b) == ext || (b, a) == ext { Ok(factor) } else { Err(NotReducible::Stuck) };
        }
        if es.iter().any(|(e, _)| e[0] == e[1]) {
            return Err(NotReducible::Stuck);
        }
        // parallel pair
        let mut merged = false;
        'par: for i in 0..es.len() {
            for j in i + 1..es.len() {
                let (a, b) = (es[i].0, es[j].0);
                if a == b || a == [b[1], b[0]] {
                    factor = factor.mul(&bubble(es[i].1, es[j].1, dim)?);
                    es[i].1 = es[i].1 + es[j].1 - Half(dim.0 / 2);
                    es.remove(j);
                    merged = true;
                    break 'par;
                }
            }
        }
        if merged {
            continue;
        }
        // series pair at an internal 2-valent vertex
        let mut deg = std::collections::HashMap::new();
        for (e, _) in &es {
            *deg.entry(e[0]).or_insert(0) += 1;
            *deg.entry(e[1]).or_insert(0) += 1;
        }
        let v = deg.iter().filter(|&(&v, &d)| d == 2 && v != ext.0 && v != ext.1).map(|(&v, _)| v).min();
        let Some(v) = v else { return Err(NotReducible::Stuck) };
        let at: Vec<usize> = (0..es.len()).filter(|&i| es[i].0.contains(&v)).collect();
        let (i, j) = (at[0], at[1]);
        let other = |e: [usize; 2]| if e[0] == v { e[1] } else { e[0] };
        let new = ([other(es[i].0), other(es[j].0)], es[i].1 + es[j].1);
        es[i] = new;
        es.remove(j);
    }
}

/// `∫ Π x_i^{n_i−1} Ω_N / Ψ_G^{D/2}` through the cut of edge `e`:
/// `P(G∖e, n, D) · Π Γ(n_i) / Γ(D/2)`.
pub fn parametric_by_cut(edges: &[[usize; 2]], n: &[Half], e: usize, dim: Half) -> Result<HalfPiExact, NotReducible> {
    let rest: Vec<[usize; 2]> = edges.iter().enumerate().filter(|&(i, _)| i != e).map(|(_, x)| *x).collect();
    let nr: Vec<Half> = n.iter().enumerate().filter(|&(i, _)| i != e).map(|(_, x)| *x).collect();
    let p = series_parallel_reduce(&rest, &nr, (edges[e][0], edges[e][1]), dim)?;
    let mut out = p.div(&gamma_half(Half(dim.0 / 2)).ok_or(NotReducible::GammaPole)?);
    for &ni in n {
        out = out.mul(&gamma_half(ni).ok_or(NotReducible::GammaPole)?);
    }
    Ok(out)
}

/// Tries every cut edge.
pub fn parametric_exact(edges: &[[usize; 2]], n: &[Half], dim: Half) -> Result<HalfPiExact, NotReducible> {
    let mut last = NotReducible::Stuck;
    for e in 0..edges.len() {
        match parametric_by_cut(edges, n, e, dim) {
            Ok(v) => return Ok(v),
            Err(err) => last = err,
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_half(Half(1)).unwrap(), HalfPiExact { q: int(1), p: 1 });
        assert_eq!(gamma_half(Half(5)).unwrap(), HalfPiExact { q: rat(3, 4), p: 1 });
        assert_eq!(gamma_half(Half::int(4)).unwrap(), HalfPiExact::rational(int(6)));
        assert!(gamma_half(Half(0)).is_none());
    }

    #[test]
    fn normalization_powers() {
        assert_eq!(normalization(3), HalfPiExact { q: rat(-1, 8), p: -6 });
    }
}
