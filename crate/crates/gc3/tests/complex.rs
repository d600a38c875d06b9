use std::collections::BTreeMap;

use gc3::complex::*;
use gc3::data;
use gc3::exact::{int, kernel_basis, rat, Rational, SparseRationalMatrix};
use gc3::graph::*;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn parse(s: &str) -> OrientedGraph {
    parse_adjacency(s).unwrap()
}

fn single(s: &str) -> Chain {
    Chain::from_graph(&parse(s))
}

const K4: &str = "123|23|3|";
const T122: &str = "1122|2|";
const Y3: &str = "123|24|5|45|5|";

fn key(s: &str) -> CanonicalKey {
    canonical_key(&parse(s)).0
}

#[test]
fn boundary_of_k4_is_six_t122() {
    let b = boundary(&single(K4));
    assert_eq!(b.len(), 1);
    assert_eq!(b.coefficient_of(&parse(T122)).abs(), int(6));
    assert!(boundary(&Chain::from_graph(&dipole(3))).is_zero());
    assert!(boundary(&boundary(&single(K4))).is_zero());
}

#[test]
fn coboundary_of_t122() {
    let d = coboundary(&single(T122));
    assert_eq!(d.len(), 2);
    assert_eq!(d.coefficient_of(&parse(K4)).abs(), int(2));
    // D₂ × K₂: a triangle with edge multiplicities 1, 2, 2 plus one more vertex.
    assert_eq!(d.coefficient_of(&parse("122|33|3|")).abs(), int(1));
    assert!(coboundary(&Chain::from_graph(&dipole(3))).is_zero());
}

#[test]
fn pairings_of_small_graphs() {
    let t = single(T122);
    let k4 = single(K4);
    assert_eq!(pairing(&coboundary(&t), &k4), int(48));
    assert_eq!(pairing(&t, &boundary(&k4)), int(48));
    let d3 = Chain::from_graph(&dipole(3));
    assert_eq!(pairing(&d3, &d3), int(12));
    assert_eq!(pairing(&d3, &k4), int(0));
}

#[test]
fn even_dipoles_vanish() {
    for m in [2, 4, 6] {
        assert!(Chain::from_graph(&dipole(m)).is_zero());
    }
    for m in [1, 3, 5, 7] {
        assert_eq!(Chain::from_graph(&dipole(m)).len(), 1);
    }
}

#[test]
fn bracket_of_prism_with_theta() {
    let b = bracket(&single(Y3), &Chain::from_graph(&dipole(3))).unwrap();
    let expected: BTreeMap<CanonicalKey, Rational> = [
        ("125|36|56|56|566||", -72),
        ("125|35|36|6|566|6|", -36),
        ("124|45|56|456|6|6|", -144),
        ("124|25|6|456|56|6|", 24),
        ("123|34|45|6|6|666|", 24),
        ("123|25|6|56|566|6|", -72),
        ("123|24|5|46|6|666|", -12),
    ]
    .into_iter()
    .map(|(s, c)| (key(s), int(c)))
    .collect();
    let got: BTreeMap<CanonicalKey, Rational> = b.terms().map(|(k, v)| (k.clone(), v.clone())).collect();
    assert_eq!(got, expected);
    let mut mags: Vec<i64> = got.values().map(|v| v.abs().to_integer().try_into().unwrap()).collect();
    mags.sort();
    assert_eq!(mags, vec![12, 24, 24, 36, 72, 72, 144]);
}

#[test]
fn bracket_of_k4_with_itself() {
    let k4 = single(K4);
    let b = bracket(&k4, &k4).unwrap();
    assert_eq!(b.len(), 2);
    assert_eq!(b.coefficient(&key("124|25|6|456|56|6|")), int(-192));
    assert_eq!(b.coefficient(&key("125|26|6|456|56|6|")), int(-288));
    assert!(bracket(&k4, &Chain::zero()).unwrap().is_zero());
}

#[test]
fn bracket_rejects_mixed_degree() {
    let mut c = single(K4);
    c.add_chain(&Chain::from_graph(&dipole(5)));
    assert!(matches!(bracket(&c, &c), Err(ComplexError::MixedDegree)));
}

#[test]
fn shipped_cycle() {
    let x = data::x_cycle();
    assert_eq!(x.len(), 20);
    assert!(boundary(&x).is_zero());
    let d3 = Chain::from_graph(&dipole(3));
    let y3d3 = bracket(&single(Y3), &d3).unwrap();
    assert_eq!(pairing(&y3d3, &x), int(-192));
    let k4 = single(K4);
    assert_eq!(pairing(&bracket(&k4, &k4).unwrap(), &x), int(384));
}

#[test]
fn cycle_spans_kernel_on_its_support() {
    let x = data::x_cycle();
    let support: Vec<CanonicalKey> = x.terms().map(|(k, _)| k.clone()).collect();
    let target = basis(6, -7).unwrap();
    let index: BTreeMap<&CanonicalKey, usize> = target.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut m = SparseRationalMatrix::new(target.len(), support.len());
    for (j, k) in support.iter().enumerate() {
        for (t, v) in boundary(&Chain::from_key(k.clone(), Rational::one())).terms() {
            m.set(index[t], j, v.clone());
        }
    }
    let ker = kernel_basis(&m);
    assert_eq!(ker.len(), 1);
    let xv = x.to_vector(&support).unwrap();
    let f = &xv[0] / &ker[0][0];
    assert!(ker[0].iter().zip(&xv).all(|(a, b)| a * &f == *b));
}

#[test]
fn corrupted_cycle_is_detected() {
    let mut x = data::x_cycle();
    x.add_graph(&parse("445|446|556|456|||"), &int(1));
    assert!(!boundary(&x).is_zero());
}

#[test]
fn graded_dimensions() {
    assert_eq!(graded_dimension(6, -6).unwrap(), 288);
    assert_eq!(graded_dimension(2, -3).unwrap(), 1);
    assert_eq!(graded_dimension(2, -2).unwrap(), 0);
    assert_eq!(graded_dimension(3, -3).unwrap(), 2);
    assert!(graded_dimension(6, 10).is_err());
}

#[test]
fn homology_in_low_loop_orders() {
    for side in [Side::Chain, Side::Cochain] {
        assert_eq!(homology_dimension(2, -3, side).unwrap(), 1);
        assert_eq!(homology_dimension(3, -3, side).unwrap(), 1);
        assert_eq!(homology_dimension(4, -4, side).unwrap(), 0);
        assert_eq!(homology_dimension(6, -6, side).unwrap(), 1);
    }
}

#[test]
fn maurer_cartan() {
    let xi = DipoleSum::new(6);
    assert_eq!(xi.chain.len(), 3);
    assert_eq!(xi.chain.coefficient_of(&dipole(5)), rat(1, 240));
    for l in [2, 4, 6] {
        assert!(maurer_cartan_residual(l).is_zero(), "ℓ ≤ {l}");
    }
    // δD₅/240 alone is non-zero and cancels against ½[D₃/12, D₃/12].
    let d5 = coboundary(&Chain::from_graph(&dipole(5)).scaled(&rat(1, 240)));
    let d3 = Chain::from_graph(&dipole(3)).scaled(&rat(1, 12));
    assert!(!d5.is_zero());
    assert!((&d5 + &bracket(&d3, &d3).unwrap().scaled(&rat(1, 2))).is_zero());
}

#[test]
fn lambda_vectors_are_cocycles() {
    for i in 0..7 {
        let q = data::lambda_cochain(i);
        assert!(cocycle_check(&q, 6, -6).unwrap(), "λ{}", i + 1);
    }
    assert!(cocycle_check(&Chain::zero(), 6, -6).unwrap());
    // Raise the value on G199 (|Aut| = 8) by one.
    let mut bad = data::lambda_cochain(0);
    bad.add_graph(&parse("445|446|556|456|||"), &rat(1, 8));
    assert!(!cocycle_check(&bad, 6, -6).unwrap());
}

#[test]
fn chain_text_round_trip() {
    let x = data::x_cycle();
    assert_eq!(parse_chain(&x.to_string()).unwrap(), x);
    let c = parse_chain("-1/3 * 445|446|556|456|||\n# comment\n2 * G: 111|\n").unwrap();
    assert_eq!(c.len(), 2);
    assert!(parse_chain("x * 111|").is_err());
}

/// Connected graph on `n` vertices with all valences at least 3: a random
/// tree plus extra edges, then edges to the next vertex where needed.
fn small_graph(max_n: usize, max_extra: usize) -> impl Strategy<Value = OrientedGraph> {
    (2..=max_n).prop_flat_map(move |n| {
        let tree = proptest::collection::vec(any::<prop::sample::Index>(), n - 1);
        let extra = proptest::collection::vec((0..n, 0..n), 0..=max_extra);
        (Just(n), tree, extra).prop_map(|(n, tree, extra)| {
            let mut edges: Vec<(usize, usize)> = tree.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
            edges.extend(extra.into_iter().filter(|(a, b)| a != b));
            let mut val = vec![0; n];
            for &(a, b) in &edges {
                val[a] += 1;
                val[b] += 1;
            }
            for v in 0..n {
                while val[v] < 3 {
                    let w = (v + 1) % n;
                    edges.push((v, w));
                    val[v] += 1;
                    val[w] += 1;
                }
            }
            OrientedGraph::from_directed(n, &edges)
        })
    })
}

fn degree(c: &Chain) -> i64 {
    match c.bidegree() {
        Bidegree::Homogeneous { degree, .. } => degree,
        _ => 0,
    }
}

fn graded_sign(a: &Chain, b: &Chain) -> Rational {
    if degree(a) * degree(b) % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Sum over connected proper edge subsets `γ` of `⟨g2, γ⟩⟨g1, G/γ⟩`.
fn duality_rhs(g1: &Chain, g2: &Chain, g: &OrientedGraph) -> Rational {
    let m = g.edge_count();
    let mut total = Rational::zero();
    for mask in 1u32..(1 << m) - 1 {
        let gamma: Vec<usize> = (0..m).filter(|e| mask >> e & 1 == 1).collect();
        let Ok((sub, quo)) = subgraph_quotient(g, &gamma) else { continue };
        let a = pairing(g2, &Chain::from_graph(&sub));
        if a.is_zero() {
            continue;
        }
        total += a * pairing(g1, &Chain::from_graph(&quo));
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boundary_squares_to_zero(g in small_graph(8, 5)) {
        prop_assert!(boundary(&boundary(&Chain::from_graph(&g))).is_zero());
    }

    #[test]
    fn coboundary_squares_to_zero(g in small_graph(5, 4)) {
        prop_assert!(coboundary(&coboundary(&Chain::from_graph(&g))).is_zero());
    }

    #[test]
    fn coboundary_is_adjoint_to_boundary(q in small_graph(5, 4), seed in any::<prop::sample::Index>()) {
        let q = Chain::from_graph(&q);
        let dq = coboundary(&q);
        // Pair against a graph from the support of δq and against an unrelated one.
        let keys: Vec<CanonicalKey> = dq.terms().map(|(k, _)| k.clone()).collect();
        if !keys.is_empty() {
            let g = Chain::from_key(keys[seed.index(keys.len())].clone(), Rational::one());
            prop_assert_eq!(pairing(&dq, &g), pairing(&q, &boundary(&g)));
        }
        let k4 = single(K4);
        prop_assert_eq!(pairing(&dq, &k4), pairing(&q, &boundary(&k4)));
    }

    #[test]
    fn bracket_is_graded_antisymmetric(a in small_graph(4, 3), b in small_graph(4, 3)) {
        let (a, b) = (Chain::from_graph(&a), Chain::from_graph(&b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let ab = bracket(&a, &b).unwrap();
        let ba = bracket(&b, &a).unwrap();
        prop_assert_eq!(ab, ba.scaled(&-graded_sign(&a, &b)));
    }

    #[test]
    fn constant_insertions_cancel_in_bracket(a in small_graph(4, 3), b in small_graph(4, 3)) {
        let (a, b) = (Chain::from_graph(&a), Chain::from_graph(&b));
        prop_assert_eq!(bracket_bilinear(&a, &b), bracket_without_constant_maps(&a, &b));
    }

    #[test]
    fn insertion_is_dual_to_subgraph_sum(g1 in small_graph(3, 3), g2 in small_graph(3, 3), pick in any::<prop::sample::Index>()) {
        let (c1, c2) = (Chain::from_graph(&g1), Chain::from_graph(&g2));
        prop_assume!(!c1.is_zero() && !c2.is_zero() && g1.vertex_count() >= 2);
        let ins = insertion(&c1, &c2);
        let keys: Vec<CanonicalKey> = ins.terms().map(|(k, _)| k.clone()).collect();
        prop_assume!(!keys.is_empty());
        let k = &keys[pick.index(keys.len())];
        let lhs = pairing(&ins, &Chain::from_key(k.clone(), Rational::one()));
        prop_assert_eq!(lhs, duality_rhs(&c1, &c2, &k.reference_graph()));
    }
}

#[test]
fn graded_jacobi_on_small_generators() {
    let gens: Vec<Chain> = ["1|", "111|", "12|2|", T122, "11111|"].iter().map(|s| single(s)).collect();
    for a in &gens {
        for b in &gens {
            for c in &gens {
                let lhs = bracket(a, &bracket(b, c).unwrap()).unwrap();
                let mut rhs = bracket(&bracket(a, b).unwrap(), c).unwrap();
                rhs.add_chain(&bracket(b, &bracket(a, c).unwrap()).unwrap().scaled(&graded_sign(a, b)));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
