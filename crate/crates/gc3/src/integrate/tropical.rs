//! Tropical importance sampling for graph integrals `∫ Q Ω/Ψ^{s/2}`.
//!
//! For a monomial `x^a` put `ν_e = a_e + 1` and, for an edge subset `γ`,
//! `ω(γ) = Σ_{e∈γ} ν_e − (s/2)·ℓ(γ)`. The tropical Symanzik polynomial
//! `Ψ^tr(x) = max_T Π_{e∉T} x_e` satisfies `Ψ^tr ≤ Ψ ≤ #trees·Ψ^tr`, and
//! the projective density `x^ν/(Ψ^tr)^{s/2}` integrates (against the
//! logarithmic measure) to the Hepp bound
//!
//! ```text
//! H = Σ_{edge orders σ} Π_{k<m} 1/ω({σ₁ … σ_k}),
//! ```
//!
//! finite exactly when `ω(γ) > 0` for every proper non-empty `γ`. A point
//! is drawn by choosing a sector (edge order, smallest edge first) with
//! probability `Π 1/ω/H`, then log-ratios of consecutive edges from the
//! exponential laws `Exp(ω(γ_k))`.
//!
//! The numerator is handled as a mixture over its monomials with weights
//! `|c_a| H_a`. Each sample then contributes
//!
//! ```text
//! (Σ_a |c_a| H_a) · Q(x)/Σ_a |c_a| x^a · (Ψ^tr/Ψ)^{s/2},
//! ```
//!
//! which is bounded by `Σ_a |c_a| H_a`. `Ψ/Ψ^tr` is the determinant of the
//! graph Laplacian in the fundamental cycle basis of the minimal spanning
//! tree, rescaled by the non-tree edges; its entries are `O(1)` however
//! far apart the edge lengths are.

use rand::Rng;
use rand_pcg::Pcg64;

use crate::forms::Polynomial;
use crate::graph::HalfEdgeGraph;

/// Largest number of table entries (`monomials · 2^m`) kept in memory.
const MAX_TABLE: usize = 1 << 27;

struct Component {
    coefficient: f64,
    exponents: Vec<u32>,
    /// `2ω(γ)` per edge subset.
    omega2: Vec<i64>,
    /// `J(γ) = Σ_{e∈γ} J(γ∖e)/ω(γ)`, `J(∅) = 1`.
    j: Vec<f64>,
}

/// Sampler and estimator for one graph and numerator.
pub struct TropicalSampler {
    edges: Vec<[usize; 2]>,
    vertices: usize,
    s: u32,
    loops: Vec<u8>,
    components: Vec<Component>,
    cumulative: Vec<f64>,
    total: f64,
}

/// Loop number of every edge subset.
pub fn subset_loop_numbers(edges: &[[usize; 2]], vertices: usize) -> Vec<u8> {
    let m = edges.len();
    let mut loops = vec![0u8; 1 << m];
    let mut parent = vec![0usize; vertices];
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for mask in 1usize..1 << m {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        for (v, p) in parent.iter_mut().enumerate() {
            *p = v;
        }
        for e in (0..m).filter(|&e| rest >> e & 1 == 1) {
            let (a, b) = (find(&mut parent, edges[e][0]), find(&mut parent, edges[e][1]));
            parent[a] = b;
        }
        let [a, b] = edges[low];
        let closes = find(&mut parent, a) == find(&mut parent, b);
        loops[mask] = loops[rest] + u8::from(closes);
    }
    loops
}

impl TropicalSampler {
    /// `None` when the tropical integral of some monomial diverges or the
    /// tables would be too large.
    pub fn new(g: &HalfEdgeGraph, q: &Polynomial, s: u32) -> Option<TropicalSampler> {
        let m = g.edge_count();
        if m == 0 || m > 24 || q.is_empty() || q.len().saturating_mul(1 << m) > MAX_TABLE {
            return None;
        }
        let full = (1usize << m) - 1;
        let loops = subset_loop_numbers(g.edges(), g.vertex_count());
        let mut components = Vec::with_capacity(q.len());
        for (mono, c) in q.terms() {
            let exponents: Vec<u32> = (0..m).map(|e| mono.exponent(e)).collect();
            let mut omega2 = vec![0i64; 1 << m];
            let mut j = vec![0.0f64; 1 << m];
            j[0] = 1.0;
            for mask in 1..=full {
                let low = mask.trailing_zeros() as usize;
                omega2[mask] = omega2[mask & (mask - 1)] + 2 * (i64::from(exponents[low]) + 1);
            }
            for mask in 1..=full {
                omega2[mask] -= i64::from(s) * i64::from(loops[mask]);
                if mask == full {
                    continue;
                }
                if omega2[mask] <= 0 {
                    return None;
                }
                let sum: f64 = (0..m).filter(|&e| mask >> e & 1 == 1).map(|e| j[mask ^ (1 << e)]).sum();
                j[mask] = 2.0 * sum / omega2[mask] as f64;
            }
            if omega2[full] != 0 {
                return None;
            }
            j[full] = (0..m).map(|e| j[full ^ (1 << e)]).sum();
            components.push(Component { coefficient: num_traits::ToPrimitive::to_f64(c)?, exponents, omega2, j });
        }
        let mut cumulative = Vec::with_capacity(components.len());
        let mut total = 0.0;
        for c in &components {
            total += c.coefficient.abs() * c.j[full];
            cumulative.push(total);
        }
        Some(TropicalSampler { edges: g.edges().to_vec(), vertices: g.vertex_count(), s, loops, components, cumulative, total })
    }

    /// `Σ_a |c_a| H_a`, the bound on every sample.
    pub fn bound(&self) -> f64 {
        self.total
    }

    /// Hepp bound of the `i`-th monomial of the numerator.
    pub fn hepp_bound(&self, i: usize) -> f64 {
        *self.components[i].j.last().unwrap()
    }

    /// Draws `log x` with the largest coordinate at `0`, and the sampled
    /// edge order (increasing `x`) into `order`.
    pub fn sample_point<R: Rng>(&self, rng: &mut R, logx: &mut [f64], order: &mut Vec<usize>) {
        let m = self.edges.len();
        let u = rng.gen::<f64>() * self.total;
        let k = self.cumulative.partition_point(|&c| c <= u).min(self.components.len() - 1);
        let comp = &self.components[k];
        let mut gamma = (1usize << m) - 1;
        let mut level = 0.0;
        order.clear();
        while gamma != 0 {
            if order.len() > 0 {
                let v: f64 = 1.0 - rng.gen::<f64>();
                level += 2.0 * v.ln() / comp.omega2[gamma] as f64;
            }
            let weights = (0..m).filter(|&e| gamma >> e & 1 == 1).map(|e| (e, comp.j[gamma ^ (1 << e)]));
            let target = rng.gen::<f64>() * weights.clone().map(|w| w.1).sum::<f64>();
            let mut acc = 0.0;
            let mut pick = usize::MAX;
            for (e, w) in weights {
                acc += w;
                pick = e;
                if acc > target {
                    break;
                }
            }
            logx[pick] = level;
            order.push(pick);
            gamma ^= 1 << pick;
        }
        order.reverse();
    }

    /// `log(Ψ/Ψ^tr)` at `exp(logx)`, given the increasing edge order.
    pub fn log_symanzik_ratio(&self, logx: &[f64], order: &[usize]) -> f64 {
        let n = self.vertices;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut chords = Vec::new();
        for &e in order {
            let [a, b] = self.edges[e];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                chords.push(e);
            } else {
                parent[ra] = rb;
                adjacency[a].push((b, e));
                adjacency[b].push((a, e));
            }
        }
        // Root the tree at 0: parent vertex, parent edge, sign, depth.
        let mut up = vec![(usize::MAX, usize::MAX, 0.0f64); n];
        let mut depth = vec![usize::MAX; n];
        let mut stack = vec![0];
        depth[0] = 0;
        while let Some(v) = stack.pop() {
            for &(w, e) in &adjacency[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    // Walking w → v along e.
                    up[w] = (v, e, if self.edges[e][0] == w { 1.0 } else { -1.0 });
                    stack.push(w);
                }
            }
        }
        let l = chords.len();
        let m = self.edges.len();
        let mut b = vec![0.0f64; m * l];
        for (i, &f) in chords.iter().enumerate() {
            let scale = logx[f];
            b[f * l + i] = 1.0;
            // Chord a → b, then back from b to a through the tree.
            let [mut x, mut y] = [self.edges[f][1], self.edges[f][0]];
            let mut put = |e: usize, sign: f64| b[e * l + i] += sign * (0.5 * (logx[e] - scale)).exp();
            while x != y {
                if depth[x] >= depth[y] {
                    let (p, e, s) = up[x];
                    put(e, s);
                    x = p;
                } else {
                    let (p, e, s) = up[y];
                    put(e, -s);
                    y = p;
                }
            }
        }
        let mut a = vec![0.0f64; l * l];
        for e in 0..m {
            let row = &b[e * l..(e + 1) * l];
            for i in 0..l {
                if row[i] == 0.0 {
                    continue;
                }
                for j in i..l {
                    a[i * l + j] += row[i] * row[j];
                }
            }
        }
        let mut log_det = 0.0;
        for k in 0..l {
            let mut d = a[k * l + k];
            for p in 0..k {
                d -= a[p * l + k] * a[p * l + k];
            }
            log_det += d.ln();
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
        log_det
    }

    /// `Q(x)/Σ_a |c_a| x^a`.
    pub fn numerator_ratio(&self, logx: &[f64]) -> f64 {
        let logs: Vec<f64> = self
            .components
            .iter()
            .map(|c| c.exponents.iter().zip(logx).filter(|(&a, _)| a > 0).map(|(&a, &v)| f64::from(a) * v).sum())
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (mut num, mut den) = (0.0, 0.0);
        for (c, l) in self.components.iter().zip(&logs) {
            let w = (l - top).exp();
            num += c.coefficient * w;
            den += c.coefficient.abs() * w;
        }
        num / den
    }

    /// One unbiased sample of `∫ Q Ω/Ψ^{s/2}`.
    pub fn draw(&self, rng: &mut Pcg64, logx: &mut [f64], order: &mut Vec<usize>) -> f64 {
        self.sample_point(rng, logx, order);
        let ratio = self.log_symanzik_ratio(logx, order);
        self.total * self.numerator_ratio(logx) * (-0.5 * f64::from(self.s) * ratio).exp()
    }

    /// Loop number of the edge subset `mask`.
    pub fn loops_of(&self, mask: usize) -> u8 {
        self.loops[mask]
    }
}
