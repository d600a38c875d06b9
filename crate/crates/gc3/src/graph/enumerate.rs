//! Exhaustive enumeration of connected loopless multigraphs with all
//! valences at least 3, by degree sequence and row-wise matrix filling.

use std::collections::BTreeMap;

use super::{canonicalize_directed, CanonicalKey, GraphError, HalfEdgeGraph};

#[derive(Clone, Copy, Debug)]
pub struct EnumerationCaps {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps { max_vertices: 10, max_edges: 16 }
    }
}

fn degree_sequences(n: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slots = n - cur.len();
        for d in (3..=max.min(left)).rev() {
            if left - d < 3 * (slots - 1) {
                continue;
            }
            cur.push(d);
            rec(n, left - d, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, total, total, &mut Vec::new(), &mut out);
    out
}

struct Filler<'a> {
    n: usize,
    deg: &'a [usize],
    a: Vec<Vec<u8>>,
    rem: Vec<usize>,
    found: &'a mut BTreeMap<CanonicalKey, bool>,
}

impl Filler<'_> {
    fn go(&mut self, i: usize, j: usize) {
        let n = self.n;
        if i + 1 >= n {
            if self.rem[n - 1] == 0 {
                self.emit();
            }
            return;
        }
        if j == n {
            if self.rem[i] == 0 {
                self.go(i + 1, i + 2);
            }
            return;
        }
        let capacity: usize = (j..n).map(|k| self.rem[k]).sum();
        if capacity < self.rem[i] {
            return;
        }
        let mut hi = self.rem[i].min(self.rem[j]);
        // Interchangeable columns j-1, j: enforce a[i][j-1] >= a[i][j].
        if j > i + 1 && self.deg[j - 1] == self.deg[j] && (0..i).all(|r| self.a[r][j - 1] == self.a[r][j]) {
            hi = hi.min(self.a[i][j - 1] as usize);
        }
        let lo = if j == n - 1 { self.rem[i] } else { 0 };
        if lo > hi {
            return;
        }
        for x in (lo..=hi).rev() {
            self.a[i][j] = x as u8;
            self.a[j][i] = x as u8;
            self.rem[i] -= x;
            self.rem[j] -= x;
            self.go(i, j + 1);
            self.rem[i] += x;
            self.rem[j] += x;
        }
        self.a[i][j] = 0;
        self.a[j][i] = 0;
    }

    fn emit(&mut self) {
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                for _ in 0..self.a[i][j] {
                    edges.push((i, j));
                }
            }
        }
        let g = HalfEdgeGraph::new(self.n, edges.iter().map(|&(a, b)| [a, b]).collect());
        if !g.is_connected() {
            return;
        }
        let c = canonicalize_directed(self.n, &edges);
        self.found.entry(c.key).or_insert(c.info.odd);
    }
}

/// All isomorphism classes of connected multigraphs without self-loops,
/// `n` vertices, `m` edges, every valence at least 3. Each key is paired
/// with whether the class has an odd automorphism. Sorted by key.
pub fn enumerate_graphs(n: usize, m: usize, caps: EnumerationCaps) -> Result<Vec<(CanonicalKey, bool)>, GraphError> {
    if n > caps.max_vertices || m > caps.max_edges {
        return Err(GraphError::EnumerationCap { n, m });
    }
    let mut found = BTreeMap::new();
    if n < 2 || 3 * n > 2 * m {
        return Ok(Vec::new());
    }
    for deg in degree_sequences(n, 2 * m) {
        let mut f = Filler { n, deg: &deg, a: vec![vec![0; n]; n], rem: deg.clone(), found: &mut found };
        f.go(0, 1);
    }
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_is_the_only_two_vertex_graph_with_three_edges() {
        let g = enumerate_graphs(2, 3, EnumerationCaps::default()).unwrap();
        assert_eq!(g.len(), 1);
        assert!(!g[0].1);
        assert_eq!(g[0].0.to_adjacency(), "111|");
    }

    #[test]
    fn empty_bidegrees() {
        assert!(enumerate_graphs(3, 4, EnumerationCaps::default()).unwrap().is_empty());
        assert!(enumerate_graphs(11, 16, EnumerationCaps::default()).is_err());
    }
}
