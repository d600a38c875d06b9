//! Canonical integrals `I_G(ω) = (−2π)^{−ℓ/2} ∫_σ φ_G ∧ ω_G`.

pub mod cache;
pub mod closed;
pub mod constants;
pub mod mc;
pub mod tropical;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::Chain;
use crate::forms::{top_numerator, vanishing_criterion, CanonicalFormSymbol, FormsError, Polynomial};
use crate::graph::{canonical_key, oriented_cycle_basis, CycleBasisMatrix, GraphError, OrientedGraph};
pub use cache::IntegralCache;
pub use closed::{bubble, dipole_exact, gamma_half, parametric_exact, series_parallel_reduce, Half, HalfPiExact, NotReducible};
pub use constants::{lambda_basis_values, tau1_from_lambda, tau1_x_closed_form};
pub use mc::{integrate_simplex, run_streams, SimplexIntegrand};
pub use tropical::TropicalSampler;

#[derive(Debug, Error)]
pub enum IntegralError {
    #[error("Symanzik polynomial not positive at a sample point")]
    NonPositiveSymanzik,
    #[error("integrand not projective: deg Q + m = {lhs}, s·deg Ψ/2 = {rhs}")]
    NotProjective { lhs: u32, rhs: u32 },
    #[error("chain is not supported in a single loop order")]
    MixedLoopOrder,
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactZero,
    ExactDipole,
    ExactSeriesParallel,
    MonteCarlo,
}

impl Method {
    pub fn is_exact(self) -> bool {
        self != Method::MonteCarlo
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub std_error: f64,
    pub method: Method,
    pub samples: u64,
    pub seed: u64,
}

impl IntegralResult {
    pub fn exact(value: f64, method: Method) -> Self {
        IntegralResult { value, std_error: 0.0, method, samples: 0, seed: 0 }
    }

    pub fn zero() -> Self {
        Self::exact(0.0, Method::ExactZero)
    }

    pub fn scaled(&self, c: f64) -> Self {
        IntegralResult { value: self.value * c, std_error: self.std_error * c.abs(), ..self.clone() }
    }
}

/// Sample budget and master seed for Monte Carlo.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { samples: 10_000_000, seed: 1 }
    }
}

/// Polynomial compiled for fast floating-point evaluation.
#[derive(Clone, Debug)]
struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    fn new(p: &Polynomial) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let f = num_traits::ToPrimitive::to_f64(c).unwrap();
                let v = m.exponents().iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e as i32)).collect();
                (f, v)
            })
            .collect();
        CompiledPoly { terms }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, v)| v.iter().fold(*c, |acc, &(i, e)| acc * if e == 1 { x[i] } else { x[i].powi(e) }))
            .sum()
    }
}

/// `Q/Ψ^{s/2}` with both polynomials given explicitly.
pub struct PolynomialIntegrand {
    q: CompiledPoly,
    psi: CompiledPoly,
    s: i32,
    m: usize,
}

impl SimplexIntegrand for PolynomialIntegrand {
    fn dimension(&self) -> usize {
        self.m
    }

    fn value(&self, x: &[f64]) -> Result<f64, IntegralError> {
        let psi = self.psi.eval(x);
        if psi <= 0.0 {
            return Err(IntegralError::NonPositiveSymanzik);
        }
        Ok(self.q.eval(x) / psi.sqrt().powi(self.s))
    }
}

/// `Q/Ψ^{s/2}` with `Ψ = det Λ_C` evaluated by Cholesky factorization.
pub struct GraphIntegrand {
    q: CompiledPoly,
    /// Per edge, the non-zero entries `(i, j, c_i c_j)` with `i ≤ j`.
    contributions: Vec<Vec<(usize, usize, f64)>>,
    l: usize,
    s: i32,
}

impl GraphIntegrand {
    pub fn new(q: &Polynomial, c: &CycleBasisMatrix, s: u32) -> Self {
        let l = c.loops();
        let contributions = (0..c.edge_count)
            .map(|e| {
                let mut v = Vec::new();
                for i in 0..l {
                    for j in i..l {
                        let a = c.entry(e, i) * c.entry(e, j);
                        if a != 0 {
                            v.push((i, j, a as f64));
                        }
                    }
                }
                v
            })
            .collect();
        GraphIntegrand { q: CompiledPoly::new(q), contributions, l, s: s as i32 }
    }

    pub fn symanzik(&self, x: &[f64]) -> f64 {
        let l = self.l;
        let mut a = [0.0f64; 256];
        assert!(l <= 16);
        for (e, cs) in self.contributions.iter().enumerate() {
            for &(i, j, c) in cs {
                a[i * l + j] += c * x[e];
            }
        }
        let mut det = 1.0;
        for k in 0..l {
            let mut d = a[k * l + k];
            for p in 0..k {
                d -= a[p * l + k] * a[p * l + k];
            }
            if d <= 0.0 {
                return 0.0;
            }
            det *= d;
            let r = d.sqrt();
            a[k * l + k] = r;
            for j in k + 1..l {
                let mut v = a[k * l + j];
                for p in 0..k {
                    v -= a[p * l + k] * a[p * l + j];
                }
                a[k * l + j] = v / r;
            }
        }
        det
    }
}

impl SimplexIntegrand for GraphIntegrand {
    fn dimension(&self) -> usize {
        self.contributions.len()
    }

    fn value(&self, x: &[f64]) -> Result<f64, IntegralError> {
        let psi = self.symanzik(x);
        if psi <= 0.0 {
            return Err(IntegralError::NonPositiveSymanzik);
        }
        Ok(self.q.eval(x) / psi.sqrt().powi(self.s))
    }
}

/// Estimate of `∫_σ Q Ω_m/Ψ^{s/2}` (no normalization).
pub fn mc_integrate(q: &Polynomial, psi: &Polynomial, s: u32, m: usize, samples: u64, seed: u64) -> Result<IntegralResult, IntegralError> {
    if q.is_empty() {
        return Ok(IntegralResult { samples, seed, ..IntegralResult::zero() });
    }
    let (dq, dpsi) = (q.degree().unwrap_or(0), psi.degree().unwrap_or(0));
    if 2 * (dq + m as u32) != s * dpsi {
        return Err(IntegralError::NotProjective { lhs: dq + m as u32, rhs: s * dpsi / 2 });
    }
    let f = PolynomialIntegrand { q: CompiledPoly::new(q), psi: CompiledPoly::new(psi), s: s as i32, m };
    integrate_simplex(&f, samples, seed)
}

/// `(−2π)^{−ℓ/2}` as a float.
pub fn normalization_f64(l: usize) -> f64 {
    closed::normalization(l as i64 / 2).to_f64()
}

fn is_dipole(g: &OrientedGraph) -> bool {
    g.vertex_count() == 2 && g.graph.edges().iter().all(|e| e[0] != e[1])
}

/// Exact value when every monomial of `Q` reduces by series-parallel steps.
fn series_parallel_value(g: &OrientedGraph, q: &Polynomial, s: u32) -> Option<f64> {
    let m = g.edge_count();
    let mut total = 0.0;
    for (mono, c) in q.terms() {
        let n: Vec<Half> = (0..m).map(|e| Half::int(mono.exponent(e) as i64 + 1)).collect();
        let v = parametric_exact(g.graph.edges(), &n, Half(s as i64)).ok()?;
        total += num_traits::ToPrimitive::to_f64(c).unwrap() * v.to_f64();
    }
    Some(total)
}

/// Estimate of `∫_σ Q Ω/Ψ_G^{s/2}` (no normalization): tropical sampling
/// when every monomial of `Q` has a finite Hepp bound, Dirichlet(½)
/// sampling otherwise.
pub fn graph_integral_mc(g: &OrientedGraph, q: &Polynomial, s: u32, cfg: McConfig) -> Result<IntegralResult, IntegralError> {
    if let Some(t) = TropicalSampler::new(&g.graph, q, s) {
        let m = g.edge_count();
        return run_streams(cfg.samples, cfg.seed, || (vec![0.0; m], Vec::with_capacity(m)), |rng, (x, order)| Ok(t.draw(rng, x, order)));
    }
    let c = oriented_cycle_basis(g)?;
    let f = GraphIntegrand::new(q, &c, s);
    integrate_simplex(&f, cfg.samples, cfg.seed)
}

/// `I_G(ω)` for the oriented graph `g`.
pub fn canonical_integral(g: &OrientedGraph, omega: &CanonicalFormSymbol, cfg: McConfig) -> Result<IntegralResult, IntegralError> {
    let l = g.graph.loop_number();
    let m = g.edge_count();
    if l % 2 == 1 || l + omega.degree() as usize + 1 != m || vanishing_criterion(&g.graph).is_some() {
        return Ok(IntegralResult::zero());
    }
    if omega.generators().is_empty() && is_dipole(g) {
        let (key, sign) = canonical_key(g);
        let reference = key.reference_graph();
        debug_assert_eq!(canonical_key(&reference).1, 1);
        let v = num_traits::ToPrimitive::to_f64(&dipole_exact(l as u32 / 2)).unwrap();
        return Ok(IntegralResult::exact(v * f64::from(sign), Method::ExactDipole));
    }
    let top = top_numerator(g, omega)?;
    if top.is_zero() {
        return Ok(IntegralResult::zero());
    }
    let norm = normalization_f64(l);
    if let Some(v) = series_parallel_value(g, &top.q, top.s) {
        return Ok(IntegralResult::exact(v * norm, Method::ExactSeriesParallel));
    }
    Ok(graph_integral_mc(g, &top.q, top.s, cfg)?.scaled(norm))
}

/// `canonical_integral` on the reference orientation through a cache, with
/// the sign of `g` applied afterwards.
pub fn canonical_integral_cached(
    cache: &mut IntegralCache,
    g: &OrientedGraph,
    omega: &CanonicalFormSymbol,
    cfg: McConfig,
) -> Result<(IntegralResult, bool), IntegralError> {
    let (key, sign) = canonical_key(g);
    let name = key.to_adjacency();
    let om = omega.to_string();
    if let Some(r) = cache.get(&name, &om, cfg.samples, cfg.seed) {
        return Ok((r.scaled(f64::from(sign)), true));
    }
    let r = canonical_integral(&key.reference_graph(), omega, cfg)?;
    cache.insert(&name, &om, cfg.samples, &IntegralResult { seed: cfg.seed, ..r.clone() })?;
    Ok((r.scaled(f64::from(sign)), false))
}

/// `Σ c_G I_G(ω)` over the chain, errors added in quadrature. Each term
/// uses the seed `cfg.seed + i` for its `i`-th graph in key order.
pub fn integrate_chain(c: &Chain, omega: &CanonicalFormSymbol, cfg: McConfig) -> Result<IntegralResult, IntegralError> {
    let mut value = 0.0;
    let mut var = 0.0;
    let mut method = Method::ExactZero;
    let mut samples = 0;
    for (i, (key, coef)) in c.terms().enumerate() {
        let r = canonical_integral(&key.reference_graph(), omega, McConfig { samples: cfg.samples, seed: cfg.seed.wrapping_add(i as u64) })?;
        let w = num_traits::ToPrimitive::to_f64(coef).unwrap();
        value += w * r.value;
        var += (w * r.std_error).powi(2);
        if r.method == Method::MonteCarlo {
            method = Method::MonteCarlo;
            samples += r.samples;
        } else if method == Method::ExactZero && r.method != Method::ExactZero {
            method = r.method;
        }
    }
    Ok(IntegralResult { value, std_error: var.sqrt(), method, samples, seed: cfg.seed })
}

/// `τ₁(c) = Σ c_G I_G(β⁵)` for a chain supported in six loops.
pub fn tau1_of_chain(c: &Chain, cfg: McConfig) -> Result<IntegralResult, IntegralError> {
    if c.terms().any(|(k, _)| k.loop_number() != 6) {
        return Err(IntegralError::MixedLoopOrder);
    }
    integrate_chain(c, &CanonicalFormSymbol::beta(1), cfg)
}
