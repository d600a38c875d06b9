//! Differential forms on graphs and on positive definite matrices.
//!
//! A form on the edge-length space of a graph is stored as
//! `numerator / Ψ^{s/2}` with a polynomial-coefficient numerator and the
//! Symanzik polynomial `Ψ`. Symbolic routines suit small loop numbers; the
//! evaluator in [`numerator`] handles six loops through exact pointwise
//! evaluation.

pub mod exterior;
pub mod linalg;
pub mod matrix;
pub mod numerator;
pub mod poly;
pub mod ring;

use std::fmt;

use thiserror::Error;

use crate::exact::{int, Rational};
use crate::graph::{CycleBasisMatrix, GraphError, HalfEdgeGraph, OrientedGraph};
pub use exterior::ExteriorElement;
use linalg::Matrix;
pub use matrix::{matrix_form_at_point, volume_constant, MatrixFormKind, PointForm};
pub use numerator::{top_numerator, GraphFormEvaluator, TopNumerator};
pub use poly::{parse_polynomial, Monomial, Polynomial};
pub use ring::{Fp, Ring};

#[derive(Debug, Error)]
pub enum FormsError {
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("invalid cycle basis: {0}")]
    InvalidBasis(String),
    #[error("division by the Symanzik polynomial failed: {0}")]
    Divisibility(String),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("probe points gave no usable component")]
    ProbeFailure,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown canonical form {0:?}")]
    Symbol(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Exterior monomial `β^{4k₁+1} ∧ β^{4k₂+1} ∧ …` with `1 ≤ k₁ < k₂ < …`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalFormSymbol {
    ks: Vec<u32>,
}

impl CanonicalFormSymbol {
    pub fn one() -> Self {
        Self::default()
    }

    /// `β^{4k+1}`.
    pub fn beta(k: u32) -> Self {
        assert!(k >= 1, "β¹ is not projective");
        CanonicalFormSymbol { ks: vec![k] }
    }

    /// Wedge of the listed generators in the given order, with the sign
    /// needed to sort them; zero if a generator repeats.
    pub fn from_product(ks: &[u32]) -> Option<(i8, Self)> {
        ks.iter().try_fold((1i8, Self::one()), |(s, acc), &k| {
            let (t, w) = acc.wedge(&Self::beta(k))?;
            Some((s * t, w))
        })
    }

    pub fn generators(&self) -> &[u32] {
        &self.ks
    }

    /// The exponents `4k+1`.
    pub fn exponents(&self) -> Vec<u32> {
        self.ks.iter().map(|k| 4 * k + 1).collect()
    }

    pub fn degree(&self) -> u32 {
        self.exponents().iter().sum()
    }

    /// `self ∧ o` as `sign · symbol`, `None` when it vanishes.
    pub fn wedge(&self, o: &Self) -> Option<(i8, Self)> {
        let mut ks = self.ks.clone();
        let mut swaps = 0;
        for &k in &o.ks {
            if ks.contains(&k) {
                return None;
            }
            // every generator has odd degree
            swaps += ks.iter().filter(|&&x| x > k).count();
            ks.push(k);
        }
        ks.sort_unstable();
        Some((if swaps % 2 == 0 { 1 } else { -1 }, CanonicalFormSymbol { ks }))
    }

    /// `Δω = Σ ± ω′ ⊗ ω″`, every generator primitive.
    pub fn coproduct(&self) -> Vec<(i8, Self, Self)> {
        let r = self.ks.len();
        (0..1u32 << r)
            .map(|left| {
                let mut swaps = 0;
                for i in 0..r {
                    for j in i + 1..r {
                        if left >> i & 1 == 0 && left >> j & 1 == 1 {
                            swaps += 1;
                        }
                    }
                }
                let pick = |bit: u32| CanonicalFormSymbol {
                    ks: (0..r).filter(|&i| left >> i & 1 == bit).map(|i| self.ks[i]).collect(),
                };
                (if swaps % 2 == 0 { 1 } else { -1 }, pick(1), pick(0))
            })
            .collect()
    }

    /// Minimal loop number where integrals of this form can be non-zero.
    pub fn minimal_loop_number(&self) -> usize {
        2 + 2 * (self.degree() as usize).div_ceil(4)
    }
}

impl fmt::Display for CanonicalFormSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ks.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.exponents().iter().map(|e| format!("beta{e}")).collect();
        write!(f, "{}", parts.join("^"))
    }
}

impl std::str::FromStr for CanonicalFormSymbol {
    type Err = FormsError;

    /// `1`, `beta5`, `beta5^beta9`.
    fn from_str(s: &str) -> Result<Self, FormsError> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::one());
        }
        let bad = || FormsError::Symbol(s.to_string());
        let mut ks = Vec::new();
        for part in s.split('^') {
            let e: u32 = part.trim().strip_prefix("beta").ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if e < 5 || e % 4 != 1 {
                return Err(bad());
            }
            ks.push((e - 1) / 4);
        }
        match Self::from_product(&ks) {
            Some((1, w)) => Ok(w),
            _ => Err(bad()),
        }
    }
}

/// Fundamental cycle basis of any graph (disconnected allowed), with edge
/// directions from the orientation. No orientation sign is imposed.
pub fn fundamental_cycle_basis(g: &OrientedGraph) -> CycleBasisMatrix {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut in_tree = vec![false; m];
    for (e, slot) in in_tree.iter_mut().enumerate() {
        let [a, b] = g.graph.edges()[e];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            *slot = true;
        }
    }
    let tree_path = |from: usize, to: usize| -> Vec<i64> {
        // signed edge path in the forest from `from` to `to`
        let mut prev: Vec<Option<(usize, usize, i64)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for e in (0..m).filter(|&e| in_tree[e]) {
                let (t, h) = g.direction(e);
                let (w, s) = if t == v { (h, 1) } else if h == v { (t, -1) } else { continue };
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some((v, e, s));
                    queue.push_back(w);
                }
            }
        }
        let mut c = vec![0; m];
        let mut v = to;
        while let Some((u, e, s)) = prev[v] {
            c[e] += s;
            v = u;
        }
        c
    };
    let cycles = (0..m)
        .filter(|&e| !in_tree[e])
        .map(|e| {
            let (t, h) = g.direction(e);
            let mut c = tree_path(h, t);
            c[e] += 1;
            c
        })
        .collect();
    CycleBasisMatrix { edge_count: m, cycles, paths: Vec::new() }
}

/// Checks that every column of `c` is a cycle of `g` and that the columns
/// span a space of dimension `ℓ(g)`.
pub fn validate_basis(g: &OrientedGraph, c: &CycleBasisMatrix) -> Result<(), FormsError> {
    let m = g.edge_count();
    if c.edge_count != m || c.cycles.iter().any(|col| col.len() != m) {
        return Err(FormsError::InvalidBasis("wrong number of rows".into()));
    }
    for (j, col) in c.cycles.iter().enumerate() {
        let mut bd = vec![0i64; g.vertex_count()];
        for (e, &a) in col.iter().enumerate() {
            let (t, h) = g.direction(e);
            bd[h] += a;
            bd[t] -= a;
        }
        if bd.iter().any(|&x| x != 0) {
            return Err(FormsError::InvalidBasis(format!("column {j} has non-zero boundary")));
        }
    }
    let l = g.graph.loop_number();
    let rows: Vec<Vec<Rational>> = (0..m).map(|e| c.cycles.iter().map(|col| int(col[e])).collect()).collect();
    let rank = crate::exact::rank(&crate::exact::SparseRationalMatrix::from_dense(&rows));
    if c.loops() != l || rank != l {
        return Err(FormsError::InvalidBasis(format!("expected {l} independent cycles")));
    }
    Ok(())
}

/// `Λ_C = Cᵀ diag(x) C`.
pub fn dual_laplacian(g: &OrientedGraph, c: &CycleBasisMatrix) -> Result<Matrix<Polynomial>, FormsError> {
    validate_basis(g, c)?;
    Ok(laplacian_of_basis(c))
}

fn laplacian_of_basis(c: &CycleBasisMatrix) -> Matrix<Polynomial> {
    let l = c.loops();
    let mut lam = vec![vec![Polynomial::default(); l]; l];
    for (i, row) in lam.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            for e in 0..c.edge_count {
                let a = c.entry(e, i) * c.entry(e, j);
                if a != 0 {
                    x.add_term(Monomial::var(e), int(a));
                }
            }
        }
    }
    lam
}

fn d_laplacian(c: &CycleBasisMatrix) -> Matrix<ExteriorElement<Polynomial>> {
    let l = c.loops();
    let mut d = vec![vec![ExteriorElement::default(); l]; l];
    for (i, row) in d.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            for e in 0..c.edge_count {
                let a = c.entry(e, i) * c.entry(e, j);
                if a != 0 {
                    x.add_term(1 << e, Polynomial::from_i64(a));
                }
            }
        }
    }
    d
}

fn lift(m: &Matrix<Polynomial>) -> Matrix<ExteriorElement<Polynomial>> {
    m.iter().map(|r| r.iter().map(|p| ExteriorElement::scalar(p.clone())).collect()).collect()
}

/// Sum over spanning forests `F` of `Π_{e∉F} x_e`.
pub fn symanzik_spanning_forests(g: &HalfEdgeGraph) -> Polynomial {
    let m = g.edge_count();
    let (_, comps) = g.components();
    let size = g.vertex_count() - comps;
    let mut p = Polynomial::default();
    for_each_subset(m, size, |s| {
        let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for e in crate::forms::exterior::mask_indices(s) {
            let [a, b] = g.edges()[e];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return;
            }
            parent[ra] = rb;
        }
        let exps = (0..m).map(|e| u32::from(s >> e & 1 == 0)).collect();
        p.add_term(Monomial::new(exps), int(1));
    });
    p
}

/// Calls `f` on every `k`-subset of `0..n` as a bitmask, in increasing order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(u64)) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let mut s: u64 = (1 << k) - 1;
    let limit = 1u64 << n;
    while s < limit {
        f(s);
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
}

/// `Ψ_G = det Λ_C`, cross-checked against the spanning-forest sum.
pub fn symanzik(g: &HalfEdgeGraph) -> Polynomial {
    let og = OrientedGraph::new(g.clone(), crate::graph::Orientation::standard(g.vertex_count(), g.edge_count()));
    let psi = linalg::det(&laplacian_of_basis(&fundamental_cycle_basis(&og)));
    assert_eq!(psi, symanzik_spanning_forests(g), "determinant and spanning-forest sum differ");
    psi
}

/// Graph-theoretic reasons for `φ_G ∧ ω_G = 0` in top degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vanishing {
    SelfLoop,
    /// Disconnected, or a vertex whose deletion disconnects.
    CutVertex,
    TwoValent,
    TwoEdgeCut,
    /// Degree `k > −3` and not the single edge.
    HighDegree,
}

fn connected_without(g: &HalfEdgeGraph, skip_vertex: Option<usize>, skip_edges: &[usize]) -> bool {
    let n = g.vertex_count();
    let alive: Vec<usize> = (0..n).filter(|&v| Some(v) != skip_vertex).collect();
    let Some(&start) = alive.first() else { return true };
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for (e, &[a, b]) in g.edges().iter().enumerate() {
            if skip_edges.contains(&e) || Some(a) == skip_vertex || Some(b) == skip_vertex {
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    alive.iter().all(|&v| seen[v])
}

/// First applicable vanishing criterion, checked in the listed order.
/// Meaningful when `ℓ` is even and `ω` has degree `m − ℓ − 1`.
pub fn vanishing_criterion(g: &HalfEdgeGraph) -> Option<Vanishing> {
    let (n, m) = (g.vertex_count(), g.edge_count());
    if n == 2 && m == 1 {
        return None;
    }
    if g.has_self_loop() {
        return Some(Vanishing::SelfLoop);
    }
    if !connected_without(g, None, &[]) || (0..n).any(|v| !connected_without(g, Some(v), &[])) {
        return Some(Vanishing::CutVertex);
    }
    if g.valences().contains(&2) {
        return Some(Vanishing::TwoValent);
    }
    if (0..m).any(|e| (e + 1..m).any(|f| !connected_without(g, None, &[e, f]))) {
        return Some(Vanishing::TwoEdgeCut);
    }
    if g.degree() > -3 {
        return Some(Vanishing::HighDegree);
    }
    None
}

/// `numerator / Ψ^{s/2}` on the edge-length space of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveForm {
    pub numerator: ExteriorElement<Polynomial>,
    pub s: u32,
    pub psi: Polynomial,
    pub variables: usize,
}

impl ProjectiveForm {
    /// Builds and reduces greedily by exact division by `Ψ`.
    pub fn new(numerator: ExteriorElement<Polynomial>, s: u32, psi: Polynomial, variables: usize) -> Self {
        let mut f = ProjectiveForm { numerator, s, psi, variables };
        f.reduce();
        f
    }

    pub fn one(psi: Polynomial, variables: usize) -> Self {
        ProjectiveForm { numerator: ExteriorElement::one(), s: 0, psi, variables }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    fn reduce(&mut self) {
        if self.numerator.is_empty() {
            return;
        }
        while self.s >= 2 && !self.psi.is_zero() {
            let mut out = ExteriorElement::default();
            let mut ok = true;
            for (mask, c) in self.numerator.terms() {
                match c.div_exact_poly(&self.psi) {
                    Some(q) => out.add_term(mask, q),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                return;
            }
            self.numerator = out;
            self.s -= 2;
        }
    }

    /// Equality as forms: numerators compared after lifting to a common
    /// power of `Ψ`.
    pub fn same_as(&self, o: &ProjectiveForm) -> bool {
        if self.psi != o.psi || self.s % 2 != o.s % 2 {
            return self.is_zero() && o.is_zero();
        }
        let lift = |f: &ProjectiveForm, k: u32| f.numerator.scaled(&Ring::pow(&f.psi, k));
        let top = self.s.max(o.s);
        lift(self, (top - self.s) / 2) == lift(o, (top - o.s) / 2)
    }

    pub fn wedge(&self, o: &ProjectiveForm) -> ProjectiveForm {
        assert_eq!(self.psi, o.psi, "forms over different Symanzik polynomials");
        ProjectiveForm::new(self.numerator.wedge(&o.numerator), self.s + o.s, self.psi.clone(), self.variables)
    }

    pub fn scaled(&self, c: i64) -> ProjectiveForm {
        ProjectiveForm { numerator: self.numerator.scaled(&Polynomial::from_i64(c)), ..self.clone() }
    }

    /// `2Ψ·dN = s·dΨ ∧ N`, i.e. `d(N/Ψ^{s/2}) = 0`.
    pub fn closedness_certificate(&self) -> bool {
        let n = self.variables;
        let lhs = self.numerator.d(n).scaled(&self.psi.scaled(&int(2)));
        let dpsi = ExteriorElement::scalar(self.psi.clone()).d(n);
        let rhs = dpsi.wedge(&self.numerator).scaled(&Polynomial::from_i64(self.s as i64));
        lhs == rhs
    }

    /// Sets `x_e = 0`, `dx_e = 0` and renumbers the remaining variables
    /// as in the contraction `G/e`.
    pub fn restrict_edge_zero(&self, e: usize) -> ProjectiveForm {
        let map: Vec<usize> = (0..self.variables).map(|i| if i > e { i - 1 } else { i }).collect();
        let num = self.numerator.drop_generator(e).set_variable_zero(e);
        let num = num.relabel(&map).map(|c| c.relabel(&map));
        let psi = self.psi.set_zero(e).relabel(&map);
        ProjectiveForm::new(num, self.s, psi, self.variables - 1)
    }

    /// `Q` with `numerator = Q·Ω_m`, for forms of degree `m − 1`.
    pub fn top_coefficient(&self) -> Option<Polynomial> {
        let m = self.variables;
        if self.numerator.is_empty() {
            return Some(Polynomial::default());
        }
        if self.numerator.degree()? as usize + 1 != m {
            return None;
        }
        let full = (1u64 << m) - 1;
        let q = self.numerator.coefficient(full & !1).div_exact_poly(&Polynomial::var(0))?;
        let omega = ExteriorElement::<Polynomial>::omega(m).scaled(&q);
        (omega == self.numerator).then_some(q)
    }

    /// `Q; s; Psi` for top-degree forms, otherwise the listed components.
    pub fn dump(&self) -> String {
        match self.top_coefficient() {
            Some(q) => format!("{q}; {}; {}", self.s, self.psi),
            None => {
                let parts: Vec<String> = self
                    .numerator
                    .terms()
                    .map(|(mask, c)| {
                        let idx: Vec<String> =
                            exterior::mask_indices(mask).iter().map(|i| (i + 1).to_string()).collect();
                        format!("[{}] {}", idx.join(","), c)
                    })
                    .collect();
                format!("{}; {}; {}", parts.join(" | "), self.s, self.psi)
            }
        }
    }
}

/// `φ_G = Pf(dΛ·adj Λ·dΛ)/Ψ^{(ℓ+1)/2}`, zero for odd `ℓ`.
pub fn pfaffian_form(g: &OrientedGraph, c: &CycleBasisMatrix) -> Result<ProjectiveForm, FormsError> {
    validate_basis(g, c)?;
    let l = c.loops();
    let m = g.edge_count();
    let lam = laplacian_of_basis(c);
    let psi = linalg::det(&lam);
    if l % 2 == 1 {
        return Ok(ProjectiveForm { numerator: ExteriorElement::default(), s: l as u32 + 1, psi, variables: m });
    }
    let dl = d_laplacian(c);
    let inner = linalg::matmul(&linalg::matmul(&dl, &lift(&linalg::adjugate(&lam))), &dl);
    let pf = linalg::pfaffian(&inner)?;
    Ok(ProjectiveForm::new(pf, l as u32 + 1, psi, m))
}

/// `β^{4k+1}_G = tr((adj Λ·dΛ)^{4k+1})/Ψ^{4k+1}`, reduced.
pub fn canonical_form(g: &OrientedGraph, c: &CycleBasisMatrix, k: u32) -> Result<ProjectiveForm, FormsError> {
    validate_basis(g, c)?;
    let m = g.edge_count();
    let lam = laplacian_of_basis(c);
    let psi = linalg::det(&lam);
    let a = linalg::matmul(&lift(&linalg::adjugate(&lam)), &d_laplacian(c));
    let r = 4 * k + 1;
    let mut p = a.clone();
    for _ in 1..r {
        p = linalg::matmul(&p, &a);
    }
    let mut tr = ExteriorElement::default();
    for (i, row) in p.iter().enumerate() {
        tr.add_assign(&row[i]);
    }
    Ok(ProjectiveForm::new(tr, 2 * r, psi, m))
}

/// `φ_G ∧ ω_G` computed symbolically.
pub fn graph_form(g: &OrientedGraph, c: &CycleBasisMatrix, omega: &CanonicalFormSymbol) -> Result<ProjectiveForm, FormsError> {
    let mut f = pfaffian_form(g, c)?;
    for &k in omega.generators() {
        if f.is_zero() {
            break;
        }
        f = f.wedge(&canonical_form(g, c, k)?);
    }
    Ok(f)
}

/// `(Q, s)` with `φ_G ∧ ω_G = Q·Ω_m/Ψ^{s/2}`, by symbolic computation in the
/// oriented cycle basis. Suitable for small loop numbers.
pub fn top_numerator_symbolic(g: &OrientedGraph, omega: &CanonicalFormSymbol) -> Result<(Polynomial, u32), FormsError> {
    let l = g.graph.loop_number();
    if l + omega.degree() as usize + 1 != g.edge_count() || l % 2 == 1 {
        return Ok((Polynomial::default(), l as u32 + 1));
    }
    let c = crate::graph::oriented_cycle_basis(g)?;
    let f = graph_form(g, &c, omega)?;
    let q = f
        .top_coefficient()
        .ok_or_else(|| FormsError::Divisibility("numerator is not a multiple of Ω_m".into()))?;
    Ok((q, f.s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_adjacency;

    #[test]
    fn coproduct_signs() {
        assert_eq!(CanonicalFormSymbol::one().coproduct().len(), 1);
        let w = CanonicalFormSymbol::from_product(&[1, 2]).unwrap().1;
        assert_eq!(w.to_string(), "beta5^beta9");
        assert_eq!("beta5^beta9".parse::<CanonicalFormSymbol>().unwrap(), w);
        assert_eq!(CanonicalFormSymbol::from_product(&[2, 1]).unwrap().0, -1);
        assert!(CanonicalFormSymbol::from_product(&[1, 1]).is_none());
        let d = w.coproduct();
        assert_eq!(d.len(), 4);
        // the term β⁹ ⊗ β⁵ carries (−1)^{5·9}
        let swapped = d.iter().find(|t| t.1 == CanonicalFormSymbol::beta(2)).unwrap();
        assert_eq!(swapped.0, -1);
    }

    #[test]
    fn subsets() {
        let mut n = 0;
        for_each_subset(6, 3, |s| {
            assert_eq!(s.count_ones(), 3);
            n += 1;
        });
        assert_eq!(n, 20);
    }

    #[test]
    fn theta_symanzik() {
        let g = parse_adjacency("111|").unwrap();
        let psi = symanzik(&g.graph);
        assert_eq!(psi.to_string(), "x1*x2 + x1*x3 + x2*x3");
    }
}
