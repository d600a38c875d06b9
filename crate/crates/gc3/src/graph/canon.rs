//! Canonical labeling of small multigraphs by partition refinement and
//! exhaustive individualization.

/// Result of labeling a multiplicity matrix.
#[derive(Clone, Debug)]
pub(crate) struct Labeling {
    /// `lab[v]` is the canonical label of vertex `v`.
    pub lab: Vec<usize>,
    /// Upper triangle (with diagonal) of the relabeled matrix, row-major.
    pub form: Vec<u8>,
    /// Vertex automorphisms of the input, identity included.
    pub auts: Vec<Vec<usize>>,
}

type Partition = Vec<Vec<usize>>;

fn refine(adj: &[Vec<u8>], mut cells: Partition) -> Partition {
    let n = adj.len();
    let mut cell_of = vec![0usize; n];
    loop {
        for (ci, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = ci;
            }
        }
        let mut next: Partition = Vec::with_capacity(n);
        let mut split = false;
        for c in &cells {
            if c.len() == 1 {
                next.push(c.clone());
                continue;
            }
            let mut sigs: Vec<(Vec<(usize, u8)>, usize)> = c
                .iter()
                .map(|&v| {
                    let mut s: Vec<(usize, u8)> = (0..n)
                        .filter(|&u| adj[v][u] > 0)
                        .map(|u| (cell_of[u], adj[v][u]))
                        .collect();
                    s.sort_unstable();
                    (s, v)
                })
                .collect();
            sigs.sort();
            let mut start = 0;
            for i in 1..=sigs.len() {
                if i == sigs.len() || sigs[i].0 != sigs[start].0 {
                    next.push(sigs[start..i].iter().map(|x| x.1).collect());
                    start = i;
                }
            }
            if sigs[0].0 != sigs[sigs.len() - 1].0 {
                split = true;
            }
        }
        cells = next;
        if !split {
            return cells;
        }
    }
}

fn leaf_form(adj: &[Vec<u8>], cells: &Partition) -> (Vec<usize>, Vec<u8>) {
    let n = adj.len();
    let inv: Vec<usize> = cells.iter().map(|c| c[0]).collect();
    let mut lab = vec![0; n];
    for (i, &v) in inv.iter().enumerate() {
        lab[v] = i;
    }
    let mut form = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            form.push(adj[inv[i]][inv[j]]);
        }
    }
    (lab, form)
}

fn search(adj: &[Vec<u8>], cells: Partition, leaves: &mut Vec<(Vec<u8>, Vec<usize>)>) {
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let (lab, form) = leaf_form(adj, &cells);
        leaves.push((form, lab));
        return;
    };
    for &v in &cells[target] {
        let mut next = Vec::with_capacity(cells.len() + 1);
        next.extend_from_slice(&cells[..target]);
        next.push(vec![v]);
        next.push(cells[target].iter().copied().filter(|&u| u != v).collect());
        next.extend_from_slice(&cells[target + 1..]);
        search(adj, refine(adj, next), leaves);
    }
}

/// Labels a symmetric multiplicity matrix (diagonal = number of self-loops).
/// The canonical form is the lexicographically largest leaf.
pub(crate) fn label(adj: &[Vec<u8>]) -> Labeling {
    let n = adj.len();
    if n == 0 {
        return Labeling { lab: vec![], form: vec![], auts: vec![vec![]] };
    }
    let mut keyed: Vec<((u8, u32), usize)> = (0..n)
        .map(|v| {
            let deg: u32 = (0..n).map(|u| adj[v][u] as u32).sum::<u32>() + adj[v][v] as u32;
            ((adj[v][v], deg), v)
        })
        .collect();
    keyed.sort();
    let mut cells: Partition = Vec::new();
    for (i, &(k, v)) in keyed.iter().enumerate() {
        if i > 0 && keyed[i - 1].0 == k {
            cells.last_mut().unwrap().push(v);
        } else {
            cells.push(vec![v]);
        }
    }
    let mut leaves = Vec::new();
    search(adj, refine(adj, cells), &mut leaves);
    let best = leaves.iter().map(|l| &l.0).max().unwrap().clone();
    let mut matching = leaves.into_iter().filter(|l| l.0 == best).map(|l| l.1);
    let lab = matching.next().unwrap();
    let mut inv = vec![0; n];
    for (v, &l) in lab.iter().enumerate() {
        inv[l] = v;
    }
    let mut auts = vec![(0..n).collect::<Vec<_>>()];
    for other in matching {
        auts.push((0..n).map(|v| inv[other[v]]).collect());
    }
    auts.sort();
    Labeling { lab, form: best, auts }
}

/// Sign of the permutation `i ↦ p[i]`.
pub(crate) fn perm_sign(p: &[usize]) -> i8 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1i8;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// All permutations of `0..d` in lexicographic order.
pub(crate) fn permutations(d: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}
