//! The graph complex GC₃: chains, boundary, coboundary, insertion and
//! bracket, the pairing, graded dimensions and homology.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{self, parse_rational, Rational, SparseRationalMatrix};
use crate::graph::{
    canonicalize, contract_edge, enumerate_graphs, factorial, parse_adjacency, CanonicalKey,
    EnumerationCaps, GraphError, OrientedGraph,
};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("chain is not homogeneous in degree")]
    MixedDegree,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bidegree {
    Empty,
    Homogeneous { loops: usize, degree: i64 },
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Chain,
    Cochain,
}

/// Finite rational combination of isomorphism classes, each taken with its
/// reference orientation. Classes with odd automorphisms never appear.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    terms: BTreeMap<CanonicalKey, Rational>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    pub fn from_graph(g: &OrientedGraph) -> Self {
        let mut c = Chain::zero();
        c.add_graph(g, &Rational::one());
        c
    }

    pub fn from_key(key: CanonicalKey, coeff: Rational) -> Self {
        let mut c = Chain::zero();
        c.add_term(key, coeff);
        c
    }

    /// Adds `coeff·g`, folding the orientation sign of `g` into the coefficient.
    pub fn add_graph(&mut self, g: &OrientedGraph, coeff: &Rational) {
        self.add_directed(g.vertex_count(), &g.standard_edges(), coeff);
    }

    pub(crate) fn add_directed(&mut self, n: usize, edges: &[(usize, usize)], coeff: &Rational) {
        let c = crate::graph::canonicalize_directed(n, edges);
        match c.sign {
            0 => {}
            1 => self.add_term(c.key, coeff.clone()),
            _ => self.add_term(c.key, -coeff.clone()),
        }
    }

    /// Adds to the coefficient of a reference-oriented class.
    pub fn add_term(&mut self, key: CanonicalKey, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add_chain(&mut self, other: &Chain) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn scaled(&self, f: &Rational) -> Chain {
        if f.is_zero() {
            return Chain::zero();
        }
        Chain { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * f)).collect() }
    }

    pub fn coefficient(&self, key: &CanonicalKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `g` in this chain, in `g`'s own orientation.
    pub fn coefficient_of(&self, g: &OrientedGraph) -> Rational {
        let c = canonicalize(g);
        match c.sign {
            0 => Rational::zero(),
            s => self.coefficient(&c.key) * Rational::from_integer(BigInt::from(s)),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalKey, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn bidegree(&self) -> Bidegree {
        let mut it = self.terms.keys().map(|k| (k.loop_number(), k.degree()));
        let Some(first) = it.next() else { return Bidegree::Empty };
        if it.all(|x| x == first) {
            Bidegree::Homogeneous { loops: first.0, degree: first.1 }
        } else {
            Bidegree::Mixed
        }
    }

    fn homogeneous_degree(&self) -> Result<Option<i64>, ComplexError> {
        let mut ks = self.terms.keys().map(|k| k.degree());
        let Some(k) = ks.next() else { return Ok(None) };
        if ks.all(|x| x == k) {
            Ok(Some(k))
        } else {
            Err(ComplexError::MixedDegree)
        }
    }

    /// Part of the chain with loop number `l`.
    pub fn loop_part(&self, l: usize) -> Chain {
        Chain {
            terms: self.terms.iter().filter(|(k, _)| k.loop_number() == l).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    /// Coefficient vector in a given basis of keys; `None` if a term lies outside.
    pub fn to_vector(&self, basis: &[CanonicalKey]) -> Option<Vec<Rational>> {
        let index: BTreeMap<&CanonicalKey, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut v = vec![Rational::zero(); basis.len()];
        for (k, c) in &self.terms {
            v[*index.get(k)?] = c.clone();
        }
        Some(v)
    }

    pub fn from_vector(basis: &[CanonicalKey], v: &[Rational]) -> Chain {
        let mut c = Chain::zero();
        for (k, x) in basis.iter().zip(v) {
            c.add_term(k.clone(), x.clone());
        }
        c
    }

    fn sum_in_order(parts: Vec<Chain>) -> Chain {
        let mut out = Chain::zero();
        for p in parts {
            out.add_chain(&p);
        }
        out
    }
}

impl std::ops::Add for &Chain {
    type Output = Chain;
    fn add(self, rhs: &Chain) -> Chain {
        let mut c = self.clone();
        c.add_chain(rhs);
        c
    }
}

impl std::ops::Sub for &Chain {
    type Output = Chain;
    fn sub(self, rhs: &Chain) -> Chain {
        let mut c = self.clone();
        c.add_chain(&rhs.scaled(&-Rational::one()));
        c
    }
}

/// One line per term: `coefficient * adjacency-string`.
impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.terms {
            writeln!(f, "{} * {}", v, k.to_adjacency())?;
        }
        Ok(())
    }
}

/// Parses chain text: `coefficient * [name:] adjacency`, `#` comments; a
/// bare adjacency string has coefficient 1. Repeated graphs accumulate.
pub fn parse_chain(text: &str) -> Result<Chain, ComplexError> {
    Ok(parse_named_chain(text)?.0)
}

/// As [`parse_chain`], also returning `(name, coefficient, graph)` per line.
#[allow(clippy::type_complexity)]
pub fn parse_named_chain(text: &str) -> Result<(Chain, Vec<(Option<String>, Rational, OrientedGraph)>), ComplexError> {
    let mut chain = Chain::zero();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (coeff, rest) = match line.split_once('*') {
            Some((c, r)) => (
                parse_rational(c).ok_or_else(|| ComplexError::Parse { line: i + 1, msg: format!("bad coefficient {c:?}") })?,
                r.trim(),
            ),
            None => (Rational::one(), line),
        };
        let (name, body) = match rest.split_once(':') {
            Some((n, b)) => (Some(n.trim().to_string()), b.trim()),
            None => (None, rest),
        };
        let g = parse_adjacency(body).map_err(|e| ComplexError::Parse { line: i + 1, msg: e.to_string() })?;
        chain.add_graph(&g, &coeff);
        lines.push((name, coeff, g));
    }
    Ok((chain, lines))
}

fn boundary_of_graph(g: &OrientedGraph) -> Chain {
    let mut out = Chain::zero();
    let one = Rational::one();
    for e in 0..g.edge_count() {
        let (t, h) = g.direction(e);
        if t == h {
            continue;
        }
        if let Ok(q) = contract_edge(g, e) {
            out.add_graph(&q, &one);
        }
    }
    out
}

/// `∂(G,o) = Σ_e (G,o)/e`.
pub fn boundary(c: &Chain) -> Chain {
    let parts: Vec<Chain> = c
        .terms
        .par_iter()
        .map(|(k, v)| boundary_of_graph(&k.reference_graph()).scaled(v))
        .collect();
    Chain::sum_in_order(parts)
}

/// `G₁ ∘ G₂`: for every vertex `v` of `G₁` and every map `ρ` from the
/// half-edges at `v` to vertices of `G₂`, replace `v` by `G₂`. The vertex
/// order lists `G₂` first, then `G₁` without `v` (after moving `v` to the front).
pub fn insert_graphs(g1: &OrientedGraph, g2: &OrientedGraph) -> Chain {
    insert_graphs_filtered(g1, g2, false)
}

fn insert_graphs_filtered(g1: &OrientedGraph, g2: &OrientedGraph, skip_constant: bool) -> Chain {
    let e1 = g1.standard_edges();
    let e2 = g2.standard_edges();
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    let mut out = Chain::zero();
    for v in 0..n1 {
        let sign = if v % 2 == 0 { Rational::one() } else { -Rational::one() };
        // Vertex names after insertion: G₂ keeps 0..n2, G₁'s others follow.
        let name = |u: usize| if u < v { n2 + u } else { n2 + u - 1 };
        let halves: Vec<(usize, usize)> = e1
            .iter()
            .enumerate()
            .flat_map(|(i, &(t, h))| {
                let mut hs = Vec::new();
                if t == v {
                    hs.push((i, 0));
                }
                if h == v {
                    hs.push((i, 1));
                }
                hs
            })
            .collect();
        let d = halves.len();
        let total = n2.checked_pow(d as u32).expect("insertion map count overflow");
        let mut rho = vec![0usize; d];
        for _ in 0..total {
            let constant = rho.iter().all(|&x| x == rho[0]);
            if !(skip_constant && constant) {
                let mut edges: Vec<(usize, usize)> = e1
                    .iter()
                    .map(|&(t, h)| (if t == v { usize::MAX } else { name(t) }, if h == v { usize::MAX } else { name(h) }))
                    .collect();
                for (&(i, end), &r) in halves.iter().zip(&rho) {
                    if end == 0 {
                        edges[i].0 = r;
                    } else {
                        edges[i].1 = r;
                    }
                }
                edges.extend_from_slice(&e2);
                out.add_directed(n1 + n2 - 1, &edges, &sign);
            }
            for x in rho.iter_mut() {
                *x += 1;
                if *x < n2 {
                    break;
                }
                *x = 0;
            }
        }
    }
    out
}

fn term_degree(k: &CanonicalKey) -> i64 {
    k.degree()
}

/// Insertion extended bilinearly.
pub fn insertion(a: &Chain, b: &Chain) -> Chain {
    let pairs: Vec<(&CanonicalKey, &Rational, &CanonicalKey, &Rational)> = a
        .terms
        .iter()
        .flat_map(|(ka, va)| b.terms.iter().map(move |(kb, vb)| (ka, va, kb, vb)))
        .collect();
    let parts: Vec<Chain> = pairs
        .par_iter()
        .map(|(ka, va, kb, vb)| insert_graphs(&ka.reference_graph(), &kb.reference_graph()).scaled(&(*va * *vb)))
        .collect();
    Chain::sum_in_order(parts)
}

fn bracket_terms(a: &Chain, b: &Chain, skip_constant: bool) -> Chain {
    let pairs: Vec<(&CanonicalKey, &Rational, &CanonicalKey, &Rational)> = a
        .terms
        .iter()
        .flat_map(|(ka, va)| b.terms.iter().map(move |(kb, vb)| (ka, va, kb, vb)))
        .collect();
    let parts: Vec<Chain> = pairs
        .par_iter()
        .map(|(ka, va, kb, vb)| {
            let (ga, gb) = (ka.reference_graph(), kb.reference_graph());
            let mut t = insert_graphs_filtered(&ga, &gb, skip_constant);
            let odd = term_degree(ka) * term_degree(kb) % 2 != 0;
            let f = if odd { Rational::one() } else { -Rational::one() };
            t.add_chain(&insert_graphs_filtered(&gb, &ga, skip_constant).scaled(&f));
            t.scaled(&(*va * *vb))
        })
        .collect();
    Chain::sum_in_order(parts)
}

/// `[a, b] = a∘b − (−1)^{k_a k_b} b∘a` for chains of homogeneous degree.
pub fn bracket(a: &Chain, b: &Chain) -> Result<Chain, ComplexError> {
    a.homogeneous_degree()?;
    b.homogeneous_degree()?;
    Ok(bracket_terms(a, b, false))
}

/// Bracket with every term weighted by its own degree sign (bilinear
/// extension to chains of mixed degree).
pub fn bracket_bilinear(a: &Chain, b: &Chain) -> Chain {
    bracket_terms(a, b, false)
}

/// Bracket evaluated without the constant insertion maps, which cancel.
pub fn bracket_without_constant_maps(a: &Chain, b: &Chain) -> Chain {
    bracket_terms(a, b, true)
}

/// The single edge `D₁`.
pub fn edge_graph() -> OrientedGraph {
    OrientedGraph::from_directed(2, &[(0, 1)])
}

pub fn dipole(m: usize) -> OrientedGraph {
    OrientedGraph::from_directed(2, &vec![(0, 1); m])
}

/// `δ = ½[·, D₁]`.
pub fn coboundary(c: &Chain) -> Chain {
    bracket_bilinear(c, &Chain::from_graph(&edge_graph())).scaled(&exact::rat(1, 2))
}

/// `⟨q, g⟩ = Σ q_G g_G |Aut G|`.
pub fn pairing(q: &Chain, g: &Chain) -> Rational {
    let mut s = Rational::zero();
    for (k, a) in &q.terms {
        if let Some(b) = g.terms.get(k) {
            s += a * b * Rational::from_integer(k.info().automorphism_count.clone());
        }
    }
    s
}

/// Vertex and edge counts of bidegree `(ℓ, k)`, if any.
pub fn vertices_edges(loops: usize, degree: i64) -> Option<(usize, usize)> {
    let m = degree + 3 * loops as i64;
    let n = m - loops as i64 + 1;
    (m >= 0 && n >= 1).then_some((n as usize, m as usize))
}

/// Classes without odd automorphism in bidegree `(ℓ, k)`, sorted by key.
pub fn basis(loops: usize, degree: i64) -> Result<Vec<CanonicalKey>, ComplexError> {
    let Some((n, m)) = vertices_edges(loops, degree) else { return Ok(Vec::new()) };
    Ok(enumerate_graphs(n, m, EnumerationCaps::default())?.into_iter().filter(|(_, odd)| !odd).map(|(k, _)| k).collect())
}

pub fn graded_dimension(loops: usize, degree: i64) -> Result<usize, ComplexError> {
    Ok(basis(loops, degree)?.len())
}

/// Matrix of a linear map between two bases (columns = source).
fn map_matrix(source: &[CanonicalKey], target: &[CanonicalKey], f: impl Fn(&Chain) -> Chain + Sync) -> SparseRationalMatrix {
    let images: Vec<Chain> = source.par_iter().map(|k| f(&Chain::from_key(k.clone(), Rational::one()))).collect();
    let index: BTreeMap<&CanonicalKey, usize> = target.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut m = SparseRationalMatrix::new(target.len(), source.len());
    for (j, img) in images.iter().enumerate() {
        for (k, v) in img.terms() {
            let i = *index.get(k).expect("image outside target basis");
            m.set(i, j, v.clone());
        }
    }
    m
}

/// `∂ : C_{ℓ,k} → C_{ℓ,k−1}`.
pub fn boundary_matrix(loops: usize, degree: i64) -> Result<SparseRationalMatrix, ComplexError> {
    Ok(map_matrix(&basis(loops, degree)?, &basis(loops, degree - 1)?, boundary))
}

/// `δ : C_{ℓ,k} → C_{ℓ,k+1}`.
pub fn coboundary_matrix(loops: usize, degree: i64) -> Result<SparseRationalMatrix, ComplexError> {
    Ok(map_matrix(&basis(loops, degree)?, &basis(loops, degree + 1)?, coboundary))
}

pub fn homology_dimension(loops: usize, degree: i64, side: Side) -> Result<usize, ComplexError> {
    let dim = graded_dimension(loops, degree)?;
    let (out_rank, in_rank) = match side {
        Side::Chain => (
            exact::rank(&boundary_matrix(loops, degree)?),
            exact::rank(&boundary_matrix(loops, degree + 1)?),
        ),
        Side::Cochain => (
            exact::rank(&coboundary_matrix(loops, degree)?),
            exact::rank(&coboundary_matrix(loops, degree - 1)?),
        ),
    };
    Ok(dim - out_rank - in_rank)
}

/// `Ξ = Σ D_{2i+1} / (2·(2i+1)!)` over `2 ≤ 2i ≤ max_loops`.
#[derive(Clone, Debug)]
pub struct DipoleSum {
    pub max_loops: usize,
    pub chain: Chain,
}

impl DipoleSum {
    pub fn new(max_loops: usize) -> Self {
        let mut chain = Chain::zero();
        for i in 1..=max_loops / 2 {
            let m = 2 * i + 1;
            let c = Rational::new(BigInt::one(), BigInt::from(2) * factorial(m as u64));
            chain.add_graph(&dipole(m), &c);
        }
        DipoleSum { max_loops, chain }
    }
}

/// `δΞ + ½[Ξ,Ξ]` restricted to loop numbers `≤ max_loops`.
pub fn maurer_cartan_residual(max_loops: usize) -> Chain {
    let xi = DipoleSum::new(max_loops).chain;
    let mut r = coboundary(&xi);
    let pieces: Vec<(usize, Chain)> = (1..=max_loops / 2).map(|i| (2 * i, xi.loop_part(2 * i))).collect();
    let half = exact::rat(1, 2);
    for (la, a) in &pieces {
        for (lb, b) in &pieces {
            if la + lb <= max_loops {
                r.add_chain(&bracket_bilinear(a, b).scaled(&half));
            }
        }
    }
    r
}

/// `⟨q, ∂H⟩ = 0` for every class `H` in bidegree `(ℓ, k+1)`.
pub fn cocycle_check(q: &Chain, loops: usize, degree: i64) -> Result<bool, ComplexError> {
    let hs = basis(loops, degree + 1)?;
    Ok(hs.par_iter().all(|h| pairing(q, &boundary(&Chain::from_key(h.clone(), Rational::one()))).is_zero()))
}

/// Largest absolute coefficient, for reporting.
pub fn max_abs_coefficient(c: &Chain) -> Rational {
    c.terms().map(|(_, v)| v.abs()).max().unwrap_or_else(Rational::zero)
}
