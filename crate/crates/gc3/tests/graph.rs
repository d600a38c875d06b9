use std::collections::BTreeSet;

use gc3::graph::*;
use proptest::prelude::*;

fn parse(s: &str) -> OrientedGraph {
    parse_adjacency(s).unwrap()
}

fn dipole(m: usize) -> OrientedGraph {
    OrientedGraph::from_directed(2, &vec![(0, 1); m])
}

fn table4() -> Vec<(String, String)> {
    include_str!("../data/table4.txt")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0].to_string(), f[1].to_string())
        })
        .collect()
}

/// Relabels vertices by `p` and reverses the edges flagged in `rev`.
fn relabel(g: &OrientedGraph, p: &[usize], rev: &[bool]) -> OrientedGraph {
    let edges: Vec<(usize, usize)> = g
        .standard_edges()
        .iter()
        .zip(rev)
        .map(|(&(t, h), &r)| if r { (p[h], p[t]) } else { (p[t], p[h]) })
        .collect();
    OrientedGraph::from_directed(g.vertex_count(), &edges)
}

/// Orientation ratio of `b` against `a` by trying every vertex bijection,
/// 0 if both ratios occur.
fn brute_ratio(a: &OrientedGraph, b: &OrientedGraph) -> Option<i8> {
    let n = a.vertex_count();
    let ma = a.graph.multiplicities();
    let mb = b.graph.multiplicities();
    let ea = a.standard_edges();
    let eb = b.standard_edges();
    let mut signs = BTreeSet::new();
    for p in all_perms(n) {
        if (0..n).any(|i| (0..n).any(|j| ma[i][j] != mb[p[i]][p[j]])) {
            continue;
        }
        // vertex part: order p(0),…,p(n−1) against 0,…,n−1
        let mut s = perm_parity(&p);
        // edge part: pair edges of a with edges of b bundle by bundle
        let mut used = vec![false; eb.len()];
        for &(t, h) in &ea {
            let (x, y) = (p[t], p[h]);
            let f = (0..eb.len())
                .find(|&f| !used[f] && (eb[f] == (x, y) || eb[f] == (y, x)))
                .unwrap();
            used[f] = true;
            if eb[f] != (x, y) {
                s = -s;
            }
        }
        if ea.iter().any(|&(t, h)| t == h) {
            signs.insert(-s);
        }
        signs.insert(s);
    }
    match signs.len() {
        0 => None,
        1 => signs.into_iter().next(),
        _ => Some(0),
    }
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn perm_parity(p: &[usize]) -> i8 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

#[test]
fn parse_and_serialize() {
    let g = parse("445|446|556|456|||");
    assert_eq!((g.vertex_count(), g.edge_count(), g.graph.loop_number()), (7, 12, 6));
    let d3 = parse("111|");
    assert_eq!((d3.vertex_count(), d3.edge_count(), d3.graph.loop_number()), (2, 3, 2));
    for (_, s) in table4() {
        assert_eq!(parse(&s).to_adjacency(), s);
    }
    assert!(parse_adjacency("12|x|").is_err());
    assert!(parse_adjacency("5|").is_err());
    assert!(parse_adjacency("0|").unwrap().graph.has_self_loop());
}

#[test]
fn graph_files_with_names_and_comments() {
    let text = "# header\nG199: 445|446|556|456||| # trailing\n\n111|\n";
    let gs = parse_graph_file(text).unwrap();
    assert_eq!(gs.len(), 2);
    assert_eq!(gs[0].0.as_deref(), Some("G199"));
    assert_eq!(gs[1].0, None);
}

#[test]
fn dipole_signs() {
    assert_eq!(canonical_key(&dipole(2)).1, 0);
    assert_eq!(canonical_key(&dipole(4)).1, 0);
    let d3 = dipole(3);
    let (k, s) = canonical_key(&d3);
    let mut rev = d3.clone();
    rev.orientation.reversed[1] = true;
    let (k2, s2) = canonical_key(&rev);
    assert_eq!(k, k2);
    assert_eq!(s2, -s);
    assert_eq!(s, 1);
}

#[test]
fn relabelings_of_g266_match_brute_force() {
    let g = parse("456|346|356|6|5|6|");
    let (k, s) = canonical_key(&g);
    let mut state = 12345u64;
    for _ in 0..40 {
        let mut p: Vec<usize> = (0..7).collect();
        for i in (1..7).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            p.swap(i, (state >> 33) as usize % (i + 1));
        }
        let rev: Vec<bool> = (0..12).map(|e| (state >> (e + 3)) & 1 == 1).collect();
        let h = relabel(&g, &p, &rev);
        let (k2, s2) = canonical_key(&h);
        assert_eq!(k, k2);
        assert_eq!(brute_ratio(&g, &h), Some(s * s2));
    }
}

#[test]
fn automorphism_counts() {
    for m in 1..=5usize {
        let auts = automorphisms(&dipole(m).graph, 1_000_000).unwrap();
        assert_eq!(auts.len(), 2 * (1..=m).product::<usize>());
    }
    let k4 = parse("123|23|3|");
    assert_eq!(automorphisms(&k4.graph, 1_000_000).unwrap().len(), 24);
    let t122 = parse("1122|2|");
    assert_eq!(t122.edge_count(), 5);
    assert_eq!(automorphisms(&t122.graph, 1_000_000).unwrap().len(), 8);
    assert!(matches!(
        automorphisms(&dipole(12).graph, 1000),
        Err(GraphError::AutomorphismCap { .. })
    ));
}

#[test]
fn automorphism_signs_detect_odd_classes() {
    for (_, s) in table4() {
        let g = parse(&s);
        let auts = automorphisms(&g.graph, 1_000_000).unwrap();
        let info = canonicalize(&g).info;
        assert_eq!(auts.iter().any(|a| a.1 < 0), info.odd);
        assert_eq!(num_bigint::BigInt::from(auts.len()), info.automorphism_count);
        let ids: BTreeSet<Vec<usize>> = auts.iter().map(|a| a.0.clone()).collect();
        assert_eq!(ids.len(), auts.len());
    }
    let d2 = automorphisms(&dipole(2).graph, 100).unwrap();
    assert!(d2.iter().any(|a| a.1 < 0));
}

#[test]
fn contracting_k4_gives_t122() {
    let k4 = parse("123|23|3|");
    let (t, _) = canonical_key(&parse("1122|2|"));
    for e in 0..6 {
        let q = contract_edge(&k4, e).unwrap();
        assert_eq!((q.vertex_count(), q.edge_count(), q.graph.loop_number()), (3, 5, 3));
        assert_eq!(canonical_key(&q).0, t);
    }
    let d3 = dipole(3);
    let q = contract_edge(&d3, 0).unwrap();
    assert_eq!((q.vertex_count(), q.edge_count()), (1, 2));
    assert!(q.graph.has_self_loop());
    assert!(matches!(contract_edge(&q, 0), Err(GraphError::ContractSelfLoop(0))));
}

#[test]
fn subgraph_quotient_of_a_multiedge() {
    // Triangle: 0→1 simple, 0→2 double, 1→2 triple; collapsing the triple edge gives −D₃.
    let g = OrientedGraph::from_directed(3, &[(0, 1), (0, 2), (0, 2), (1, 2), (1, 2), (1, 2)]);
    let (sub, q) = subgraph_quotient(&g, &[3, 4, 5]).unwrap();
    assert_eq!(canonical_key(&sub), canonical_key(&dipole(3)));
    let (kd, sd) = canonical_key(&dipole(3));
    assert_eq!(canonical_key(&q), (kd, -sd));
    let k4 = parse("123|23|3|");
    for e in 0..6 {
        let (_, q) = subgraph_quotient(&k4, &[e]).unwrap();
        assert_eq!(canonical_key(&q), canonical_key(&contract_edge(&k4, e).unwrap()));
    }
}

#[test]
fn theta_cycle_basis_matches_the_worked_example() {
    let b = oriented_cycle_basis(&dipole(3)).unwrap();
    assert_eq!(b.cycles, vec![vec![1, 0, -1], vec![0, 1, -1]]);
    assert_eq!(b.paths, vec![vec![0, 0, 1]]);
    assert_eq!(b.det_a(), 1.into());
    let d1 = oriented_cycle_basis(&dipole(1)).unwrap();
    assert_eq!(d1.loops(), 0);
}

#[test]
fn g244_is_an_odd_whitney_flip_of_itself() {
    let g = parse("112|46|56|4566|5||");
    let f = whitney_flip(&g, 1, 2, &[0, 1, 2]).unwrap();
    let (k, s) = canonical_key(&g);
    let (kf, sf) = canonical_key(&f);
    assert_eq!(k, kf);
    assert_eq!(sf, -s);
    let back = whitney_flip(&f, 1, 2, &[0, 1, 2]).unwrap();
    assert_eq!(canonical_key(&back), (k, s));
    assert!(whitney_flip(&g, 0, 3, &[0, 1, 2]).is_err());
}

/// Brute-force generator: all symmetric loopless multiplicity matrices.
fn brute_classes(n: usize, m: usize) -> BTreeSet<CanonicalKey> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = BTreeSet::new();
    fn rec(
        pairs: &[(usize, usize)],
        i: usize,
        left: usize,
        cur: &mut Vec<(usize, usize)>,
        n: usize,
        out: &mut BTreeSet<CanonicalKey>,
    ) {
        if i == pairs.len() {
            if left == 0 {
                let g = OrientedGraph::from_directed(n, cur);
                if g.graph.is_connected() && g.graph.valences().iter().all(|&d| d >= 3) {
                    out.insert(canonical_key(&g).0);
                }
            }
            return;
        }
        for x in 0..=left {
            for _ in 0..x {
                cur.push(pairs[i]);
            }
            rec(pairs, i + 1, left - x, cur, n, out);
            for _ in 0..x {
                cur.pop();
            }
        }
    }
    rec(&pairs, 0, m, &mut Vec::new(), n, &mut out);
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for (n, m) in [(2, 3), (2, 5), (3, 5), (4, 6), (4, 7), (5, 8), (6, 9)] {
        let fast: BTreeSet<CanonicalKey> =
            enumerate_graphs(n, m, EnumerationCaps::default()).unwrap().into_iter().map(|x| x.0).collect();
        assert_eq!(fast, brute_classes(n, m), "({n},{m})");
    }
    let k4 = canonical_key(&parse("123|23|3|")).0;
    assert!(enumerate_graphs(4, 6, EnumerationCaps::default()).unwrap().iter().any(|x| x.0 == k4));
}

#[test]
fn count_288_at_six_loops_degree_minus_six() {
    let all = enumerate_graphs(7, 12, EnumerationCaps::default()).unwrap();
    assert_eq!(all.iter().filter(|(_, odd)| !odd).count(), 288);
    let keys: BTreeSet<CanonicalKey> = all.iter().map(|x| x.0.clone()).collect();
    for (_, s) in table4() {
        assert!(keys.contains(&canonical_key(&parse(&s)).0));
    }
}

proptest! {
    #[test]
    fn swapping_vertices_or_reversing_an_edge_negates(i in 0usize..7, j in 0usize..7, e in 0usize..12) {
        prop_assume!(i != j);
        let g = parse("445|446|556|456|||");
        let (k, s) = canonical_key(&g);
        let mut h = g.clone();
        h.orientation.vertex_order.swap(i, j);
        prop_assert_eq!(canonical_key(&h), (k.clone(), -s));
        let mut r = g.clone();
        r.orientation.reversed[e] = true;
        prop_assert_eq!(canonical_key(&r), (k, -s));
    }

    #[test]
    fn contraction_is_independent_of_representative(seed in 0u64..1000, e in 0usize..12) {
        let g = parse("456|346|356|6|5|6|");
        let mut p: Vec<usize> = (0..7).collect();
        let mut st = seed;
        for i in (1..7).rev() {
            st = st.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            p.swap(i, (st >> 33) as usize % (i + 1));
        }
        // Equivalent representative: same graph, permuted vertex order with
        // an even number of compensating flips.
        let mut h = g.clone();
        h.orientation.vertex_order = p.clone();
        let s = h.orientation.sign();
        if s < 0 {
            h.orientation.reversed[(e + 1) % 12] = true;
        }
        let a = canonical_key(&contract_edge(&g, e).unwrap());
        let b = canonical_key(&contract_edge(&h, e).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn cycle_basis_certificate(idx in 0usize..45) {
        let (_, s) = &table4()[idx];
        let g = parse(s);
        let b = oriented_cycle_basis(&g).unwrap();
        prop_assert_eq!(b.det_a(), 1.into());
        prop_assert_eq!(oriented_cycle_basis(&g.negated()).unwrap().cycles[0].clone(),
            b.cycles[0].iter().map(|x| -x).collect::<Vec<_>>());
    }

    #[test]
    fn contraction_keeps_loop_number(idx in 0usize..45, e in 0usize..12) {
        let g = parse(&table4()[idx].1);
        let q = contract_edge(&g, e).unwrap();
        prop_assert_eq!(q.graph.loop_number(), g.graph.loop_number());
        prop_assert_eq!(q.graph.degree(), g.graph.degree() - 1);
    }

    #[test]
    fn subgraph_orientation_flip_flips_quotient(idx in 0usize..45, e in 0usize..12) {
        let g = parse(&table4()[idx].1);
        let (sub, q) = subgraph_quotient(&g, &[e]).unwrap();
        let mut o = sub.orientation.clone();
        // express the flipped subgraph orientation in g's vertex names
        let [a, b] = g.graph.edges()[e];
        let names = if a < b { [a, b] } else { [b, a] };
        o.vertex_order = o.vertex_order.iter().rev().map(|&v| names[v]).collect();
        let (_, q2) = subgraph_quotient_oriented(&g, &[e], &o).unwrap();
        let (k1, s1) = canonical_key(&q);
        let (k2, s2) = canonical_key(&q2);
        prop_assert_eq!(k1, k2);
        prop_assert_eq!(s1, -s2);
    }
}
