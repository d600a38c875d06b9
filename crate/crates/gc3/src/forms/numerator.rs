//! Pointwise evaluation of `φ_G ∧ ω_G` and recovery of the top-form
//! numerator `Q_G` by interpolation modulo a prime, certified in exact
//! rational arithmetic.
//!
//! With `K = C·adj(Λ)·Cᵀ` (an `m × m` matrix of scalars at a point):
//! `Pf(dΛ·adj Λ·dΛ) = Σ_{|S|=ℓ} det(C_S)·Hf(K_S) dx_S` and
//! `tr((adj Λ·dΛ)^r) = Σ_{e₁…e_r} dx_{e₁}∧…∧dx_{e_r} K_{e₁e₂}⋯K_{e_re₁}`.

use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

use super::exterior::{mask_indices, wedge_sign, ExteriorElement};
use super::linalg::{self, Matrix};
use super::poly::{Monomial, Polynomial};
use super::ring::{rational_reconstruct, Fp, Ring};
use super::{for_each_subset, CanonicalFormSymbol, FormsError};
use crate::exact::{int, Rational};
use crate::graph::{oriented_cycle_basis, CycleBasisMatrix, OrientedGraph};

/// Precomputed data for evaluating forms of one graph in one cycle basis.
#[derive(Clone, Debug)]
pub struct GraphFormEvaluator {
    m: usize,
    l: usize,
    /// Rows of `C`, one per edge.
    rows: Vec<Vec<i64>>,
    /// Non-zero maximal minors `det C_S`.
    minors: Vec<(u64, i64)>,
    /// For each `r`: orderings of `0..r` starting with 0, with signs.
    cycles: HashMap<u32, Vec<(Vec<usize>, i64)>>,
}

/// Values at one point: `Ψ` and the numerators of `φ` and of each
/// generator of `ω`.
#[derive(Clone, Debug)]
pub struct PointValues<R> {
    pub psi: R,
    pub pfaffian: ExteriorElement<R>,
    pub traces: Vec<ExteriorElement<R>>,
}

impl GraphFormEvaluator {
    pub fn new(c: &CycleBasisMatrix) -> Self {
        let m = c.edge_count;
        let l = c.loops();
        let rows: Vec<Vec<i64>> = (0..m).map(|e| (0..l).map(|j| c.entry(e, j)).collect()).collect();
        let mut minors = Vec::new();
        if l % 2 == 0 {
            for_each_subset(m, l, |s| {
                let sub: Vec<Vec<i64>> = mask_indices(s).iter().map(|&e| rows[e].clone()).collect();
                let d = crate::exact::det_integer(&sub);
                if !d.is_zero() {
                    minors.push((s, i64::try_from(d).expect("minor fits in i64")));
                }
            });
        }
        GraphFormEvaluator { m, l, rows, minors, cycles: HashMap::new() }
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn loops(&self) -> usize {
        self.l
    }

    fn cycle_orderings(&mut self, r: u32) {
        self.cycles.entry(r).or_insert_with(|| {
            crate::graph::permutations(r as usize - 1)
                .into_iter()
                .map(|p| {
                    let seq: Vec<usize> = std::iter::once(0).chain(p.iter().map(|&i| i + 1)).collect();
                    let s = crate::graph::perm_sign(&seq) as i64;
                    (seq, s)
                })
                .collect()
        });
    }

    pub fn laplacian<R: Ring>(&self, x: &[R]) -> Matrix<R> {
        let l = self.l;
        let mut lam = vec![vec![R::zero(); l]; l];
        for (e, row) in self.rows.iter().enumerate() {
            for i in 0..l {
                if row[i] == 0 {
                    continue;
                }
                for j in 0..l {
                    if row[j] != 0 {
                        let t = x[e].mul(&R::from_i64(row[i] * row[j]));
                        lam[i][j].add_assign(&t);
                    }
                }
            }
        }
        lam
    }

    /// `(Ψ, K)` at the point `x`.
    pub fn kernel<R: Ring>(&self, x: &[R]) -> (R, Matrix<R>) {
        let lam = self.laplacian(x);
        let (psi, adj) = if self.l == 0 {
            (R::one(), Vec::new())
        } else {
            linalg::det_adjugate_field(&lam).unwrap_or_else(|| (linalg::det(&lam), linalg::adjugate(&lam)))
        };
        // adj·c_f for every edge f
        let ac: Vec<Vec<R>> = self
            .rows
            .iter()
            .map(|r| {
                (0..self.l)
                    .map(|i| {
                        let mut acc = R::zero();
                        for (j, &c) in r.iter().enumerate() {
                            if c != 0 {
                                acc.add_assign(&adj[i][j].mul(&R::from_i64(c)));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let k = (0..self.m)
            .map(|e| {
                (0..self.m)
                    .map(|f| {
                        let mut acc = R::zero();
                        for (i, &c) in self.rows[e].iter().enumerate() {
                            if c != 0 {
                                acc.add_assign(&ac[f][i].mul(&R::from_i64(c)));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        (psi, k)
    }

    /// `Pf(dΛ·adj Λ·dΛ)` from the kernel matrix.
    pub fn pfaffian_numerator<R: Ring>(&self, k: &Matrix<R>) -> ExteriorElement<R> {
        let mut out = ExteriorElement::default();
        if self.l % 2 == 1 {
            return out;
        }
        for &(s, d) in &self.minors {
            let idx = mask_indices(s);
            let hf = hafnian(k, &idx);
            out.add_term(s, hf.mul(&R::from_i64(d)));
        }
        out
    }

    /// `tr((adj Λ·dΛ)^r)` from the kernel matrix, `r` odd.
    pub fn trace_numerator<R: Ring>(&mut self, k: &Matrix<R>, r: u32) -> ExteriorElement<R> {
        assert!(r % 2 == 1);
        self.cycle_orderings(r);
        let orders = &self.cycles[&r];
        let mut out = ExteriorElement::default();
        let factor = R::from_i64(r as i64);
        for_each_subset(self.m, r as usize, |s| {
            let idx = mask_indices(s);
            let mut acc = R::zero();
            for (seq, sign) in orders {
                let mut t = R::one();
                for a in 0..seq.len() {
                    let (e, f) = (idx[seq[a]], idx[seq[(a + 1) % seq.len()]]);
                    t = t.mul(&k[e][f]);
                    if t.is_zero() {
                        break;
                    }
                }
                if !t.is_zero() {
                    acc.add_assign(&if *sign > 0 { t } else { t.neg() });
                }
            }
            out.add_term(s, acc.mul(&factor));
        });
        out
    }

    pub fn values<R: Ring>(&mut self, x: &[R], omega: &CanonicalFormSymbol) -> PointValues<R> {
        let (psi, k) = self.kernel(x);
        let pfaffian = self.pfaffian_numerator(&k);
        let traces = omega.exponents().into_iter().map(|r| self.trace_numerator(&k, r)).collect();
        PointValues { psi, pfaffian, traces }
    }

    /// Coefficient of `dx_{[m]∖e}` in `Pf ∧ tr₁ ∧ tr₂ ∧ …`.
    pub fn top_component<R: Ring>(v: &PointValues<R>, m: usize, e: usize) -> R {
        let mut omega = ExteriorElement::scalar(R::one());
        for t in &v.traces {
            omega = omega.wedge(t);
        }
        let target = ((1u64 << m) - 1) & !(1 << e);
        let mut acc = R::zero();
        for (s, c) in v.pfaffian.terms() {
            if s & !target != 0 {
                continue;
            }
            let rest = target & !s;
            let w = omega.coefficient(rest);
            if !w.is_zero() {
                let t = c.mul(&w);
                acc.add_assign(&if wedge_sign(s, rest) > 0 { t } else { t.neg() });
            }
        }
        acc
    }
}

fn hafnian<R: Ring>(k: &Matrix<R>, idx: &[usize]) -> R {
    if idx.is_empty() {
        return R::one();
    }
    let first = idx[0];
    let mut acc = R::zero();
    for j in 1..idx.len() {
        let w = &k[first][idx[j]];
        if w.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[j]).collect();
        acc.add_assign(&w.mul(&hafnian(k, &rest)));
    }
    acc
}

/// `φ_G ∧ ω_G = Q·Ω_m/Ψ^{s/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TopNumerator {
    pub q: Polynomial,
    pub s: u32,
}

impl TopNumerator {
    pub fn is_zero(&self) -> bool {
        self.q.is_empty()
    }
}

/// All monomials of total degree `d` in `m` variables, ascending.
pub fn monomials(m: usize, d: u32) -> Vec<Monomial> {
    fn rec(m: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == m {
            cur.push(left);
            out.push(Monomial::new(cur.clone()));
            cur.pop();
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(m, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        rec(m, 0, d, &mut Vec::new(), &mut out);
    } else if d == 0 {
        out.push(Monomial::one());
    }
    out.sort();
    out
}

fn solve_mod_p(mut a: Vec<Vec<Fp>>, mut b: Vec<Fp>) -> Option<Vec<Fp>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        b.swap(p, col);
        let inv = a[col][col].inv()?;
        for j in col..n {
            a[col][j] = a[col][j].mul(&inv);
        }
        b[col] = b[col].mul(&inv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in col..n {
                    let t = a[col][j].mul(&f);
                    a[r][j] = a[r][j].sub(&t);
                }
                let t = b[col].mul(&f);
                b[r] = b[r].sub(&t);
            }
        }
    }
    Some(b)
}

const MAX_MONOMIALS: usize = 6000;

/// `Q_G` and the reduced `s` for `φ_G ∧ ω_G` in the cycle basis compatible
/// with the orientation of `g`.
///
/// The numerator is interpolated from values modulo `2⁶¹ − 1`, lifted to
/// rationals, then checked in exact arithmetic on every top component at
/// two integer points. Zero when the form degree is not `m − 1`.
pub fn top_numerator(g: &OrientedGraph, omega: &CanonicalFormSymbol) -> Result<TopNumerator, FormsError> {
    let l = g.graph.loop_number();
    let m = g.edge_count();
    let zero = TopNumerator { q: Polynomial::default(), s: l as u32 + 1 };
    if l % 2 == 1 || l + omega.degree() as usize + 1 != m {
        return Ok(zero);
    }
    let c = oriented_cycle_basis(g)?;
    let mut ev = GraphFormEvaluator::new(&c);
    top_numerator_in_basis(&mut ev, omega, 0x5eed ^ m as u64)
}

/// As [`top_numerator`], for an explicit evaluator.
pub fn top_numerator_in_basis(ev: &mut GraphFormEvaluator, omega: &CanonicalFormSymbol, seed: u64) -> Result<TopNumerator, FormsError> {
    let (m, l) = (ev.m, ev.l);
    let mut rng = Pcg64::seed_from_u64(seed);
    let point = |rng: &mut Pcg64| -> Vec<Fp> { (0..m).map(|_| Fp(rng.gen_range(1..super::ring::P61))).collect() };
    let s_total = (l as u32 + 1) + 2 * omega.degree();

    // zero test on all components
    let mut nonzero = false;
    for _ in 0..3 {
        let v = ev.values(&point(&mut rng), omega);
        if (0..m).any(|e| !GraphFormEvaluator::top_component(&v, m, e).is_zero()) {
            nonzero = true;
            break;
        }
    }
    if !nonzero {
        return Ok(TopNumerator { q: Polynomial::default(), s: l as u32 + 1 });
    }

    let parity = (l as u32 + 1) % 2;
    let mut s = parity;
    while (s * l as u32) < 2 * m as u32 {
        s += 2;
    }
    while s <= s_total {
        let d = s * l as u32 / 2 - m as u32;
        let t = (s_total - s) / 2;
        let monos = monomials(m, d);
        if monos.len() > MAX_MONOMIALS {
            return Err(FormsError::Unsupported(format!("{} monomials of degree {d}", monos.len())));
        }
        if let Some(q) = interpolate(ev, omega, &monos, t, &mut rng) {
            if certify(ev, omega, &q, t, seed)? {
                return Ok(TopNumerator { q, s });
            }
        }
        s += 2;
    }
    Err(FormsError::Divisibility("no Symanzik power reproduces the numerator".into()))
}

/// `(−1)^e N_e/(x_e Ψ^t)` at `x`.
fn target_value(ev: &mut GraphFormEvaluator, omega: &CanonicalFormSymbol, x: &[Fp], t: u32, e: usize) -> Option<(Fp, PointValues<Fp>)> {
    let v = ev.values(x, omega);
    let n = GraphFormEvaluator::top_component(&v, ev.m, e);
    let den = x[e].mul(&v.psi.pow(t));
    let q = n.div_exact(&den)?;
    Some((if e % 2 == 0 { q } else { q.neg() }, v))
}

fn interpolate(ev: &mut GraphFormEvaluator, omega: &CanonicalFormSymbol, monos: &[Monomial], t: u32, rng: &mut Pcg64) -> Option<Polynomial> {
    let m = ev.m;
    let n = monos.len();
    let extra = 6;
    let mut rows = Vec::with_capacity(n + extra);
    let mut rhs = Vec::with_capacity(n + extra);
    let mut pts = Vec::with_capacity(n + extra);
    while rows.len() < n + extra {
        let x: Vec<Fp> = (0..m).map(|_| Fp(rng.gen_range(1..super::ring::P61))).collect();
        let Some((val, _)) = target_value(ev, omega, &x, t, 0) else { continue };
        rows.push(monos.iter().map(|mo| eval_monomial(mo, &x)).collect::<Vec<Fp>>());
        rhs.push(val);
        pts.push(x);
    }
    let sol = solve_mod_p(rows[..n].to_vec(), rhs[..n].to_vec())?;
    for i in n..n + extra {
        let pred = rows[i].iter().zip(&sol).fold(Fp(0), |acc, (a, b)| acc.add(&a.mul(b)));
        if pred != rhs[i] {
            return None;
        }
        // every other component must agree as well
        for e in 1..m {
            let (val, _) = target_value(ev, omega, &pts[i], t, e)?;
            if val != pred {
                return None;
            }
        }
    }
    let mut q = Polynomial::default();
    for (mo, c) in monos.iter().zip(&sol) {
        q.add_term(mo.clone(), rational_reconstruct(*c)?);
    }
    Some(q)
}

fn eval_monomial(mo: &Monomial, x: &[Fp]) -> Fp {
    mo.exponents().iter().enumerate().fold(Fp(1), |acc, (i, &e)| acc.mul(&x[i].pow(e)))
}

/// Exact check `N_e = (−1)^e x_e Ψ^t Q` for all `e` at two integer points.
fn certify(ev: &mut GraphFormEvaluator, omega: &CanonicalFormSymbol, q: &Polynomial, t: u32, seed: u64) -> Result<bool, FormsError> {
    let m = ev.m;
    let mut rng = Pcg64::seed_from_u64(seed.wrapping_add(1));
    for _ in 0..2 {
        let x: Vec<Rational> = (0..m).map(|_| int(rng.gen_range(1..50))).collect();
        let v = ev.values(&x, omega);
        let base = q.eval(&x) * Ring::pow(&v.psi, t);
        for e in 0..m {
            let n = GraphFormEvaluator::top_component(&v, m, e);
            let expect = base.mul(&x[e]);
            let expect = if e % 2 == 0 { expect } else { -expect };
            if n != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
