//! Half-edge multigraphs with orientations.
//!
//! An orientation is a vertex order together with a direction for every edge.
//! Swapping two vertices in the order or reversing one edge negates it.

mod canon;
mod enumerate;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

pub(crate) use canon::{perm_sign, permutations};
pub use enumerate::{enumerate_graphs, EnumerationCaps};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed adjacency string {0:?}")]
    Malformed(String),
    #[error("target vertex {target} out of range in {text:?}")]
    TargetOutOfRange { text: String, target: usize },
    #[error("edge {0} is a self-loop and cannot be contracted")]
    ContractSelfLoop(usize),
    #[error("contraction leaves a graph without edges whose orientation is negative")]
    DegenerateContraction,
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("subgraph must be a non-empty proper connected edge subset")]
    InvalidSubgraph,
    #[error("invalid Whitney cut: {0}")]
    InvalidCut(String),
    #[error("automorphism count {count} exceeds cap {cap}")]
    AutomorphismCap { count: BigInt, cap: usize },
    #[error("enumeration cap exceeded: n={n}, m={m}")]
    EnumerationCap { n: usize, m: usize },
    #[error("a tree whose orientation disagrees with its spanning paths has no cycle column to negate")]
    TreeOrientation,
}

/// Multigraph on vertices `0..vertex_count`. Edge `e` consists of half-edges
/// `2e` and `2e+1`, attached at `edges[e][0]` and `edges[e][1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfEdgeGraph {
    vertex_count: usize,
    edges: Vec<[usize; 2]>,
}

impl HalfEdgeGraph {
    pub fn new(vertex_count: usize, edges: Vec<[usize; 2]>) -> Self {
        for e in &edges {
            assert!(e[0] < vertex_count && e[1] < vertex_count, "edge endpoint out of range");
        }
        HalfEdgeGraph { vertex_count, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    /// Vertex carrying half-edge `h`.
    pub fn incidence(&self, h: usize) -> usize {
        self.edges[h / 2][h % 2]
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for e in &self.edges {
            d[e[0]] += 1;
            d[e[1]] += 1;
        }
        d
    }

    pub fn has_self_loop(&self) -> bool {
        self.edges.iter().any(|e| e[0] == e[1])
    }

    /// Component index per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            parent[a.max(b)] = a.min(b);
        }
        let mut ids = HashMap::new();
        let mut comp = vec![0; n];
        for v in 0..n {
            let r = find(&mut parent, v);
            let next = ids.len();
            comp[v] = *ids.entry(r).or_insert(next);
        }
        let c = ids.len();
        (comp, c)
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count > 0 && self.components().1 == 1
    }

    /// First Betti number `m − n + c`.
    pub fn loop_number(&self) -> usize {
        self.edges.len() + self.components().1 - self.vertex_count
    }

    /// GC₃ degree `k = m − 3ℓ`.
    pub fn degree(&self) -> i64 {
        self.edges.len() as i64 - 3 * self.loop_number() as i64
    }

    /// Symmetric multiplicity matrix, self-loops counted once on the diagonal.
    pub fn multiplicities(&self) -> Vec<Vec<u8>> {
        let n = self.vertex_count;
        let mut a = vec![vec![0u8; n]; n];
        for e in &self.edges {
            if e[0] == e[1] {
                a[e[0]][e[0]] += 1;
            } else {
                a[e[0]][e[1]] += 1;
                a[e[1]][e[0]] += 1;
            }
        }
        a
    }

    /// Vertex automorphisms (permutations preserving multiplicities).
    pub fn vertex_automorphisms(&self) -> Vec<Vec<usize>> {
        canon::label(&self.multiplicities()).auts
    }

    /// Order of the kernel of `Aut → Aut_V`:
    /// `∏_v d_v!·2^{d_v} ∏_{v<w} d_vw!` with `d_v` loops at `v`.
    pub fn kernel_order(&self) -> BigInt {
        let a = self.multiplicities();
        let mut k = BigInt::one();
        for v in 0..self.vertex_count {
            let d = a[v][v] as u64;
            k *= factorial(d) * (BigInt::one() << d);
            for w in v + 1..self.vertex_count {
                k *= factorial(a[v][w] as u64);
            }
        }
        k
    }
}

pub(crate) fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Vertex order plus per-edge direction. `reversed[e]` means half-edge
/// `2e+1` comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub vertex_order: Vec<usize>,
    pub reversed: Vec<bool>,
}

impl Orientation {
    pub fn standard(n: usize, m: usize) -> Self {
        Orientation { vertex_order: (0..n).collect(), reversed: vec![false; m] }
    }

    /// Sign relative to the standard orientation of the same graph.
    pub fn sign(&self) -> i8 {
        let flips = self.reversed.iter().filter(|&&r| r).count();
        perm_sign(&self.position_map()) * if flips % 2 == 0 { 1 } else { -1 }
    }

    /// `pos[v]` is the position of `v` in the vertex order.
    pub fn position_map(&self) -> Vec<usize> {
        let mut pos = vec![0; self.vertex_order.len()];
        for (i, &v) in self.vertex_order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedGraph {
    pub graph: HalfEdgeGraph,
    pub orientation: Orientation,
}

impl OrientedGraph {
    pub fn new(graph: HalfEdgeGraph, orientation: Orientation) -> Self {
        assert_eq!(orientation.vertex_order.len(), graph.vertex_count());
        assert_eq!(orientation.reversed.len(), graph.edge_count());
        let mut seen = vec![false; graph.vertex_count()];
        for &v in &orientation.vertex_order {
            assert!(v < seen.len() && !seen[v], "vertex order is not a permutation");
            seen[v] = true;
        }
        OrientedGraph { graph, orientation }
    }

    /// Standard orientation: vertex order `0<1<…`, edge `(t, h)` directed `t → h`.
    pub fn from_directed(n: usize, edges: &[(usize, usize)]) -> Self {
        let g = HalfEdgeGraph::new(n, edges.iter().map(|&(t, h)| [t, h]).collect());
        let m = g.edge_count();
        OrientedGraph::new(g, Orientation::standard(n, m))
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Tail and head of edge `e`.
    pub fn direction(&self, e: usize) -> (usize, usize) {
        let [a, b] = self.graph.edges[e];
        if self.orientation.reversed[e] {
            (b, a)
        } else {
            (a, b)
        }
    }

    /// Equivalent graph in standard orientation: vertices renamed by their
    /// position in the order, edges rewritten tail → head. This is an
    /// isomorphism of oriented graphs, so no sign arises.
    pub fn to_standard(&self) -> OrientedGraph {
        let pos = self.orientation.position_map();
        let edges: Vec<(usize, usize)> = (0..self.edge_count())
            .map(|e| {
                let (t, h) = self.direction(e);
                (pos[t], pos[h])
            })
            .collect();
        OrientedGraph::from_directed(self.vertex_count(), &edges)
    }

    /// Directed edge list of `to_standard()`.
    pub fn standard_edges(&self) -> Vec<(usize, usize)> {
        let pos = self.orientation.position_map();
        (0..self.edge_count())
            .map(|e| {
                let (t, h) = self.direction(e);
                (pos[t], pos[h])
            })
            .collect()
    }

    /// The same graph with the opposite orientation.
    pub fn negated(&self) -> OrientedGraph {
        let mut o = self.orientation.clone();
        if o.vertex_order.len() >= 2 {
            o.vertex_order.swap(0, 1);
        } else {
            assert!(!o.reversed.is_empty(), "single vertex without edges has no negation");
            o.reversed[0] = !o.reversed[0];
        }
        OrientedGraph { graph: self.graph.clone(), orientation: o }
    }

    fn negate_if(self, sign: i8) -> Result<OrientedGraph, GraphError> {
        if sign > 0 {
            Ok(self)
        } else if self.vertex_count() >= 2 || self.edge_count() > 0 {
            Ok(self.negated())
        } else {
            Err(GraphError::DegenerateContraction)
        }
    }

    /// Adjacency string of the standard form; blocks list heads per tail.
    pub fn to_adjacency(&self) -> String {
        let n = self.vertex_count();
        let mut blocks = vec![String::new(); n];
        for (t, h) in self.standard_edges() {
            blocks[t].push(char::from_digit(h as u32, 36).expect("vertex index below 36"));
        }
        blocks.join("|")
    }
}

impl fmt::Display for OrientedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_adjacency())
    }
}

/// Parses `"445|446|556|456|||"`: block `i` lists the heads of the edges
/// leaving vertex `i`; the number of blocks is the number of vertices.
pub fn parse_adjacency(text: &str) -> Result<OrientedGraph, GraphError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(GraphError::Malformed(text.into()));
    }
    let blocks: Vec<&str> = text.split('|').collect();
    let n = blocks.len();
    let mut edges = Vec::new();
    for (t, b) in blocks.iter().enumerate() {
        for c in b.chars() {
            let h = c.to_digit(10).ok_or_else(|| GraphError::Malformed(text.into()))? as usize;
            if h >= n {
                return Err(GraphError::TargetOutOfRange { text: text.into(), target: h });
            }
            edges.push((t, h));
        }
    }
    Ok(OrientedGraph::from_directed(n, &edges))
}

/// Parses a graph file: one adjacency string per line, optional `name:`
/// prefix, `#` comments.
pub fn parse_graph_file(text: &str) -> Result<Vec<(Option<String>, OrientedGraph)>, GraphError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, body) = match line.split_once(':') {
            Some((n, b)) => (Some(n.trim().to_string()), b.trim()),
            None => (None, line),
        };
        out.push((name, parse_adjacency(body)?));
    }
    Ok(out)
}

/// Isomorphism class of an unoriented multigraph: vertex count followed by
/// the upper triangle of the canonical multiplicity matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        self.0[0] as usize
    }

    pub fn edge_count(&self) -> usize {
        self.0[1..].iter().map(|&x| x as usize).sum()
    }

    pub fn loop_number(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn degree(&self) -> i64 {
        self.edge_count() as i64 - 3 * self.loop_number() as i64
    }

    /// Reference orientation: canonical vertex order, edges listed by
    /// (low, high) pairs and directed low → high.
    pub fn reference_graph(&self) -> OrientedGraph {
        let n = self.vertex_count();
        let mut edges = Vec::new();
        let mut it = self.0[1..].iter();
        for i in 0..n {
            for j in i..n {
                for _ in 0..*it.next().unwrap() {
                    edges.push((i, j));
                }
            }
        }
        OrientedGraph::from_directed(n, &edges)
    }

    pub fn to_adjacency(&self) -> String {
        self.reference_graph().to_adjacency()
    }

    pub fn info(&self) -> Arc<ClassInfo> {
        canonicalize(&self.reference_graph()).info
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_adjacency())
    }
}

/// Automorphism data of an isomorphism class.
#[derive(Clone, Debug)]
pub struct ClassInfo {
    /// Vertex automorphisms of the reference graph.
    pub vertex_automorphisms: Vec<Vec<usize>>,
    /// Some automorphism reverses the orientation.
    pub odd: bool,
    /// `|Aut|` counted on half-edges.
    pub automorphism_count: BigInt,
}

#[derive(Clone, Debug)]
pub struct Canonical {
    pub key: CanonicalKey,
    /// Orientation ratio against the reference, 0 for odd classes.
    pub sign: i8,
    pub info: Arc<ClassInfo>,
}

type Memo = RwLock<HashMap<CanonicalKey, Arc<ClassInfo>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Sign of vertex permutation `a` acting on directed edges.
fn automorphism_sign(a: &[usize], edges: &[(usize, usize)]) -> i8 {
    let mut s = perm_sign(a);
    for &(t, h) in edges {
        if (a[t] > a[h]) != (t > h) {
            s = -s;
        }
    }
    s
}

pub(crate) fn canonicalize_directed(n: usize, edges: &[(usize, usize)]) -> Canonical {
    let mut adj = vec![vec![0u8; n]; n];
    let mut has_loop = false;
    for &(t, h) in edges {
        if t == h {
            adj[t][t] += 1;
            has_loop = true;
        } else {
            adj[t][h] += 1;
            adj[h][t] += 1;
        }
    }
    let lab = canon::label(&adj);
    let mut bytes = Vec::with_capacity(lab.form.len() + 1);
    bytes.push(n as u8);
    bytes.extend_from_slice(&lab.form);
    let key = CanonicalKey(bytes);

    let cached = memo().read().unwrap().get(&key).cloned();
    let info = match cached {
        Some(i) => i,
        None => {
            // Automorphisms of the reference graph, conjugated from the input's.
            let mut inv = vec![0; n];
            for (v, &l) in lab.lab.iter().enumerate() {
                inv[l] = v;
            }
            let mut ref_auts: Vec<Vec<usize>> = lab
                .auts
                .iter()
                .map(|a| (0..n).map(|l| lab.lab[a[inv[l]]]).collect())
                .collect();
            ref_auts.sort();
            let odd = has_loop || lab.auts.iter().any(|a| automorphism_sign(a, edges) < 0);
            let g = HalfEdgeGraph::new(n, edges.iter().map(|&(t, h)| [t, h]).collect());
            let count = g.kernel_order() * BigInt::from(lab.auts.len());
            let info = Arc::new(ClassInfo {
                vertex_automorphisms: ref_auts,
                odd,
                automorphism_count: count,
            });
            memo().write().unwrap().entry(key.clone()).or_insert(info).clone()
        }
    };
    let sign = if info.odd {
        0
    } else {
        let reversed = edges.iter().filter(|&&(t, h)| lab.lab[t] > lab.lab[h]).count();
        perm_sign(&lab.lab) * if reversed % 2 == 0 { 1 } else { -1 }
    };
    Canonical { key, sign, info }
}

pub fn canonicalize(g: &OrientedGraph) -> Canonical {
    canonicalize_directed(g.vertex_count(), &g.standard_edges())
}

/// Isomorphism class and orientation sign against the class reference
/// (0 when the class has an odd automorphism).
pub fn canonical_key(g: &OrientedGraph) -> (CanonicalKey, i8) {
    let c = canonicalize(g);
    (c.key, c.sign)
}

/// Every automorphism as a half-edge permutation with its orientation sign.
pub fn automorphisms(g: &HalfEdgeGraph, cap: usize) -> Result<Vec<(Vec<usize>, i8)>, GraphError> {
    let vauts = g.vertex_automorphisms();
    let count = g.kernel_order() * BigInt::from(vauts.len());
    if count > BigInt::from(cap) {
        return Err(GraphError::AutomorphismCap { count, cap });
    }
    let mut bundles: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (e, &[a, b]) in g.edges.iter().enumerate() {
        bundles.entry((a.min(b), a.max(b))).or_default().push(e);
    }
    let mut keys: Vec<(usize, usize)> = bundles.keys().copied().collect();
    keys.sort();
    let mut out = Vec::new();
    for a in &vauts {
        // Per bundle: list of (edge map choices, loop flips).
        let mut choices: Vec<Vec<Vec<(usize, usize, bool)>>> = Vec::new();
        for k in &keys {
            let src = &bundles[k];
            let img = (a[k.0].min(a[k.1]), a[k.0].max(a[k.1]));
            let dst = &bundles[&img];
            let d = src.len();
            let mut opts = Vec::new();
            for p in permutations(d) {
                let flips: usize = if k.0 == k.1 { 1 << d } else { 1 };
                for mask in 0..flips {
                    opts.push(
                        (0..d)
                            .map(|i| {
                                let (e, f) = (src[i], dst[p[i]]);
                                let cross = if k.0 == k.1 {
                                    mask >> i & 1 == 1
                                } else {
                                    g.edges[f][0] != a[g.edges[e][0]]
                                };
                                (e, f, cross)
                            })
                            .collect(),
                    );
                }
            }
            choices.push(opts);
        }
        let base = perm_sign(a);
        let mut idx = vec![0usize; choices.len()];
        'combos: loop {
            let mut perm = vec![0usize; g.half_edge_count()];
            let mut sign = base;
            for (c, &i) in choices.iter().zip(&idx) {
                for &(e, f, cross) in &c[i] {
                    if cross {
                        perm[2 * e] = 2 * f + 1;
                        perm[2 * e + 1] = 2 * f;
                        sign = -sign;
                    } else {
                        perm[2 * e] = 2 * f;
                        perm[2 * e + 1] = 2 * f + 1;
                    }
                }
            }
            out.push((perm, sign));
            for pos in 0..idx.len() {
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    continue 'combos;
                }
                idx[pos] = 0;
            }
            break;
        }
    }
    Ok(out)
}

/// Sign of reordering `order` into `front ++ (order without front)`.
fn move_to_front_sign(order: &[usize], front: &[usize]) -> i8 {
    let mut seq: Vec<usize> = front.to_vec();
    seq.extend(order.iter().copied().filter(|v| !front.contains(v)));
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let p: Vec<usize> = seq.iter().map(|v| pos[v]).collect();
    perm_sign(&p)
}

/// `(G,o)/e`: tail and head of `e` move to the front of the vertex order,
/// merge into one vertex; all other edges keep their directions and order.
pub fn contract_edge(g: &OrientedGraph, e: usize) -> Result<OrientedGraph, GraphError> {
    if e >= g.edge_count() {
        return Err(GraphError::EdgeOutOfRange(e));
    }
    let (t, h) = g.direction(e);
    if t == h {
        return Err(GraphError::ContractSelfLoop(e));
    }
    let sign = move_to_front_sign(&g.orientation.vertex_order, &[t, h]);
    let (q, order) = merge_vertices(g, &[t, h], &[e]);
    let mut orientation = Orientation {
        vertex_order: order,
        reversed: (0..g.edge_count()).filter(|&f| f != e).map(|f| g.orientation.reversed[f]).collect(),
    };
    if orientation.vertex_order.is_empty() {
        orientation.vertex_order = vec![0];
    }
    OrientedGraph::new(q, orientation).negate_if(sign)
}

/// Identifies the vertices in `merged` (first listed becomes the new vertex,
/// named 0) and deletes `removed` edges. Returns the graph and the vertex
/// order `[new vertex, remaining vertices in their old order]`.
fn merge_vertices(g: &OrientedGraph, merged: &[usize], removed: &[usize]) -> (HalfEdgeGraph, Vec<usize>) {
    let n = g.vertex_count();
    let mut name = vec![usize::MAX; n];
    for &v in merged {
        name[v] = 0;
    }
    let mut next = 1;
    for v in 0..n {
        if name[v] == usize::MAX {
            name[v] = next;
            next += 1;
        }
    }
    let edges: Vec<[usize; 2]> = (0..g.edge_count())
        .filter(|f| !removed.contains(f))
        .map(|f| {
            let [a, b] = g.graph.edges[f];
            [name[a], name[b]]
        })
        .collect();
    let mut order = vec![0];
    order.extend(g.orientation.vertex_order.iter().filter(|v| !merged.contains(v)).map(|&v| name[v]));
    (HalfEdgeGraph::new(next, edges), order)
}

/// Splits `g` along a connected edge subset `gamma`. The subgraph keeps the
/// induced vertex order and edge directions; the quotient collapses it to a
/// vertex placed first, with the sign making `o_G = o_γ ∧ o_{G/γ}`.
pub fn subgraph_quotient(
    g: &OrientedGraph,
    gamma: &[usize],
) -> Result<(OrientedGraph, OrientedGraph), GraphError> {
    let vg = subgraph_vertices(g, gamma)?;
    let pos = g.orientation.position_map();
    let mut order = vg.clone();
    order.sort_by_key(|&v| pos[v]);
    let sub_orientation = Orientation {
        vertex_order: order,
        reversed: gamma.iter().map(|&e| g.orientation.reversed[e]).collect(),
    };
    subgraph_quotient_oriented(g, gamma, &sub_orientation)
}

/// As [`subgraph_quotient`] with a chosen orientation of the subgraph,
/// given in the graph's own vertex names and per-edge `reversed` flags
/// (relative to the half-edge order in `g`).
pub fn subgraph_quotient_oriented(
    g: &OrientedGraph,
    gamma: &[usize],
    sub: &Orientation,
) -> Result<(OrientedGraph, OrientedGraph), GraphError> {
    let vg = subgraph_vertices(g, gamma)?;
    if sub.reversed.len() != gamma.len() || sub.vertex_order.len() != vg.len() {
        return Err(GraphError::InvalidSubgraph);
    }
    let local: HashMap<usize, usize> = vg.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let sub_graph = HalfEdgeGraph::new(
        vg.len(),
        gamma.iter().map(|&e| {
            let [a, b] = g.graph.edges[e];
            [local[&a], local[&b]]
        }).collect(),
    );
    let sub_o = Orientation {
        vertex_order: sub.vertex_order.iter().map(|v| local[v]).collect(),
        reversed: sub.reversed.clone(),
    };
    let mut sign = move_to_front_sign(&g.orientation.vertex_order, &sub.vertex_order);
    for (i, &e) in gamma.iter().enumerate() {
        if sub.reversed[i] != g.orientation.reversed[e] {
            sign = -sign;
        }
    }
    let (q, order) = merge_vertices(g, &vg, gamma);
    let qo = Orientation {
        vertex_order: order,
        reversed: (0..g.edge_count())
            .filter(|f| !gamma.contains(f))
            .map(|f| g.orientation.reversed[f])
            .collect(),
    };
    let quotient = OrientedGraph::new(q, qo).negate_if(sign)?;
    Ok((OrientedGraph::new(sub_graph, sub_o), quotient))
}

fn subgraph_vertices(g: &OrientedGraph, gamma: &[usize]) -> Result<Vec<usize>, GraphError> {
    let m = g.edge_count();
    let mut seen = vec![false; m];
    for &e in gamma {
        if e >= m || seen[e] {
            return Err(GraphError::InvalidSubgraph);
        }
        seen[e] = true;
    }
    if gamma.is_empty() || gamma.len() == m {
        return Err(GraphError::InvalidSubgraph);
    }
    let mut vs: Vec<usize> = gamma.iter().flat_map(|&e| g.graph.edges[e]).collect();
    vs.sort_unstable();
    vs.dedup();
    let local: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let sub = HalfEdgeGraph::new(
        vs.len(),
        gamma.iter().map(|&e| [local[&g.graph.edges[e][0]], local[&g.graph.edges[e][1]]]).collect(),
    );
    if !sub.is_connected() {
        return Err(GraphError::InvalidSubgraph);
    }
    Ok(vs)
}

/// Integer cycle basis `C` (m × ℓ) whose columns, followed by tree paths
/// `P₂ … P_n` from the first vertex, form a matrix `A` with `det A = +1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBasisMatrix {
    pub edge_count: usize,
    /// Cycle columns, each of length `edge_count`.
    pub cycles: Vec<Vec<i64>>,
    /// Path columns `P₂ … P_n` in vertex-order positions 2..n.
    pub paths: Vec<Vec<i64>>,
}

impl CycleBasisMatrix {
    pub fn loops(&self) -> usize {
        self.cycles.len()
    }

    pub fn entry(&self, e: usize, j: usize) -> i64 {
        self.cycles[j][e]
    }

    /// `A = (C₁ … C_ℓ P₂ … P_n)` with rows indexed by edges.
    pub fn full_matrix(&self) -> Vec<Vec<i64>> {
        let cols: Vec<&Vec<i64>> = self.cycles.iter().chain(self.paths.iter()).collect();
        (0..self.edge_count).map(|e| cols.iter().map(|c| c[e]).collect()).collect()
    }

    pub fn det_a(&self) -> BigInt {
        crate::exact::det_integer(&self.full_matrix())
    }

    /// Same cycle space with columns `C·P`.
    pub fn transformed(&self, p: &[Vec<i64>]) -> CycleBasisMatrix {
        let l = self.loops();
        let cycles = (0..l)
            .map(|j| (0..self.edge_count).map(|e| (0..l).map(|i| self.cycles[i][e] * p[i][j]).sum()).collect())
            .collect();
        CycleBasisMatrix { edge_count: self.edge_count, cycles, paths: self.paths.clone() }
    }
}

/// Oriented cycle basis compatible with the orientation of `g`.
pub fn oriented_cycle_basis(g: &OrientedGraph) -> Result<CycleBasisMatrix, GraphError> {
    if !g.graph.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let n = g.vertex_count();
    let m = g.edge_count();
    // Spanning tree preferring later edges; root = first vertex in the order.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut in_tree = vec![false; m];
    for e in (0..m).rev() {
        let [a, b] = g.graph.edges[e];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            in_tree[e] = true;
        }
    }
    let root = g.orientation.vertex_order[0];
    // Path chains from root by BFS over tree edges.
    let mut path: Vec<Option<Vec<i64>>> = vec![None; n];
    path[root] = Some(vec![0; m]);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for e in (0..m).filter(|&e| in_tree[e]) {
            let (t, h) = g.direction(e);
            let (w, s) = if t == v { (h, 1) } else if h == v { (t, -1) } else { continue };
            if path[w].is_none() {
                let mut p = path[v].clone().unwrap();
                p[e] += s;
                path[w] = Some(p);
                queue.push_back(w);
            }
        }
    }
    let path: Vec<Vec<i64>> = path.into_iter().map(|p| p.unwrap()).collect();
    let mut cycles = Vec::new();
    for e in (0..m).filter(|&e| !in_tree[e]) {
        let (t, h) = g.direction(e);
        let mut c: Vec<i64> = (0..m).map(|f| path[t][f] - path[h][f]).collect();
        c[e] += 1;
        cycles.push(c);
    }
    let paths = g.orientation.vertex_order[1..].iter().map(|&v| path[v].clone()).collect();
    let mut basis = CycleBasisMatrix { edge_count: m, cycles, paths };
    let d = basis.det_a();
    debug_assert!(d == BigInt::one() || d == -BigInt::one());
    if d != BigInt::one() {
        match basis.cycles.first_mut() {
            Some(c) => c.iter_mut().for_each(|x| *x = -*x),
            None => return Err(GraphError::TreeOrientation),
        }
    }
    Ok(basis)
}

/// Loop number of the edge subset `es` (with the vertices it touches).
pub fn subgraph_loop_number(g: &HalfEdgeGraph, es: &[usize]) -> usize {
    let mut vs: Vec<usize> = es.iter().flat_map(|&e| g.edges[e]).collect();
    vs.sort_unstable();
    vs.dedup();
    let local: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    HalfEdgeGraph::new(vs.len(), es.iter().map(|&e| [local[&g.edges[e][0]], local[&g.edges[e][1]]]).collect())
        .loop_number()
}

/// Whitney flip along the 2-vertex cut `{v, w}`: half-edges of `g2` at `v`
/// move to `w` and vice versa. Orientation gains `(−1)^{ℓ(G₂)+1}`.
pub fn whitney_flip(g: &OrientedGraph, v: usize, w: usize, g2: &[usize]) -> Result<OrientedGraph, GraphError> {
    let m = g.edge_count();
    if v == w || v >= g.vertex_count() || w >= g.vertex_count() {
        return Err(GraphError::InvalidCut("cut vertices must be two distinct vertices".into()));
    }
    if g2.is_empty() || g2.len() >= m || g2.iter().any(|&e| e >= m) {
        return Err(GraphError::InvalidCut("edge bipartition must be proper".into()));
    }
    let in2: Vec<bool> = (0..m).map(|e| g2.contains(&e)).collect();
    let mut touch = vec![[false; 2]; g.vertex_count()];
    for e in 0..m {
        for &x in &g.graph.edges[e] {
            touch[x][usize::from(in2[e])] = true;
        }
    }
    let shared: Vec<usize> = (0..g.vertex_count()).filter(|&x| touch[x][0] && touch[x][1]).collect();
    if shared != [v.min(w), v.max(w)] {
        return Err(GraphError::InvalidCut(format!("sides meet in {shared:?}, expected {{{v}, {w}}}")));
    }
    let edges = (0..m)
        .map(|e| {
            let swap = |x: usize| if !in2[e] { x } else if x == v { w } else if x == w { v } else { x };
            let [a, b] = g.graph.edges[e];
            [swap(a), swap(b)]
        })
        .collect();
    let l2 = subgraph_loop_number(&g.graph, g2);
    let flipped = OrientedGraph::new(HalfEdgeGraph::new(g.vertex_count(), edges), g.orientation.clone());
    flipped.negate_if(if l2 % 2 == 1 { 1 } else { -1 })
}

/// Glues vertex 0 of `b` onto vertex 0 of `a`; the other vertices of `b`
/// follow those of `a`.
pub fn one_vertex_join(a: &OrientedGraph, b: &OrientedGraph) -> OrientedGraph {
    let na = a.vertex_count();
    let shift = |v: usize| if v == 0 { 0 } else { v + na - 1 };
    let mut edges: Vec<(usize, usize)> = (0..a.edge_count()).map(|e| a.direction(e)).collect();
    edges.extend((0..b.edge_count()).map(|e| b.direction(e)).map(|(t, h)| (shift(t), shift(h))));
    OrientedGraph::from_directed(na + b.vertex_count() - 1, &edges)
}

pub fn disjoint_union(a: &OrientedGraph, b: &OrientedGraph) -> OrientedGraph {
    let na = a.vertex_count();
    let mut edges: Vec<(usize, usize)> = (0..a.edge_count()).map(|e| a.direction(e)).collect();
    edges.extend((0..b.edge_count()).map(|e| b.direction(e)).map(|(t, h)| (t + na, h + na)));
    OrientedGraph::from_directed(na + b.vertex_count(), &edges)
}

/// Every 2-vertex cut `{v, w}` with the edges of one side, suitable for
/// [`whitney_flip`].
pub fn two_vertex_cuts(g: &OrientedGraph) -> Vec<(usize, usize, Vec<usize>)> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for v in 0..n {
        for w in v + 1..n {
            let mut comp = vec![usize::MAX; n];
            let mut count = 0;
            for s in (0..n).filter(|&s| s != v && s != w) {
                if comp[s] != usize::MAX {
                    continue;
                }
                comp[s] = count;
                let mut stack = vec![s];
                while let Some(a) = stack.pop() {
                    for &[x, y] in g.graph.edges() {
                        for (p, q) in [(x, y), (y, x)] {
                            if p == a && q != v && q != w && comp[q] == usize::MAX {
                                comp[q] = count;
                                stack.push(q);
                            }
                        }
                    }
                }
                count += 1;
            }
            if count < 2 {
                continue;
            }
            let side: Vec<usize> = (0..g.edge_count())
                .filter(|&e| g.graph.edges()[e].iter().any(|&x| x != v && x != w && comp[x] == 0))
                .collect();
            out.push((v, w, side));
        }
    }
    out
}
