//! Exact property checks of Pfaffian and canonical forms on a fixed graph
//! corpus. Graphs with at most four loops are checked symbolically; the
//! six-loop graphs are checked at random rational points, still in exact
//! arithmetic.

use gc3::data::table4;
use gc3::exact::{det_integer, int, rat, Rational};
use gc3::forms::linalg::{self, Matrix};
use gc3::forms::*;
use gc3::graph::*;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;

use crate::CliError;

/// Outcome of one property on one graph.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub graph: String,
    pub property: &'static str,
    pub ok: bool,
}

fn parse(s: &str) -> OrientedGraph {
    parse_adjacency(s).expect("corpus graph parses")
}

fn table_graph(name: &str) -> OrientedGraph {
    table4().into_iter().find(|r| r.name == name).expect("table row").graph()
}

/// A six-loop graph whose only defect is a two-edge cut.
pub fn two_edge_cut_witness() -> OrientedGraph {
    OrientedGraph::from_directed(
        7,
        &[(0, 1), (0, 1), (0, 2), (1, 3), (4, 5), (5, 6), (6, 4), (4, 5), (2, 4), (2, 6), (3, 5), (3, 6)],
    )
}

/// Graphs with `ℓ ≤ 4`.
pub fn small_corpus() -> Vec<(String, OrientedGraph)> {
    let theta = parse("111|");
    [
        ("theta", theta.clone()),
        ("subdivided theta", OrientedGraph::from_directed(3, &[(0, 1), (0, 1), (0, 2), (2, 1)])),
        ("D4 with a chord", OrientedGraph::from_directed(3, &[(0, 1), (0, 1), (0, 2), (1, 2), (0, 2)])),
        ("K4", parse("123|23|3|")),
        ("T122", parse("1122|2|")),
        ("D5", parse("11111|")),
        ("prism", parse("123|24|5|45|5|")),
        ("K33", parse("345|345|345|||")),
        ("W4", parse("1234|24|3|4|")),
        ("K4 doubled edge", parse("1123|23|3|")),
        ("theta v theta", one_vertex_join(&theta, &theta)),
        ("theta + theta", disjoint_union(&theta, &theta)),
        ("necklace", OrientedGraph::from_directed(5, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (4, 1), (0, 4)])),
    ]
    .into_iter()
    .map(|(n, g)| (n.to_string(), g))
    .collect()
}

/// Six-loop graphs.
pub fn large_corpus() -> Vec<(String, OrientedGraph)> {
    let k4 = parse("123|23|3|");
    let mut out: Vec<(String, OrientedGraph)> =
        ["G97", "G100", "G199", "G234", "G244", "G266", "G241"].iter().map(|n| (n.to_string(), table_graph(n))).collect();
    out.push(("K4 v K4".into(), one_vertex_join(&k4, &k4)));
    out.push(("two-edge cut".into(), two_edge_cut_witness()));
    out
}

fn random_point(m: usize, rng: &mut Pcg64) -> Vec<Rational> {
    (0..m).map(|_| rat(rng.gen_range(1..40), rng.gen_range(1..7))).collect()
}

/// Product of elementary operations, with a sign flip half the time.
fn random_unimodular(l: usize, rng: &mut Pcg64) -> Vec<Vec<i64>> {
    let mut p: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..3 * l {
        let (i, j) = (rng.gen_range(0..l), rng.gen_range(0..l));
        if i != j {
            let c = rng.gen_range(-1..=1);
            for r in p.iter_mut() {
                r[j] += c * r[i];
            }
        }
    }
    if rng.gen_bool(0.5) {
        for r in p.iter_mut() {
            r[0] = -r[0];
        }
    }
    p
}

/// Cycle basis of `g / e` obtained by deleting row `e`.
fn contracted_basis(c: &CycleBasisMatrix, e: usize) -> CycleBasisMatrix {
    let cycles = c.cycles.iter().map(|col| col.iter().enumerate().filter(|&(f, _)| f != e).map(|(_, &a)| a).collect()).collect();
    CycleBasisMatrix { edge_count: c.edge_count - 1, cycles, paths: vec![] }
}

/// `Pf(dΛ·adj Λ·dΛ)` at `x` computed directly, compared with the fast
/// evaluator, and `Pf² = det` for the same matrix.
fn pointwise_pfaffian(c: &CycleBasisMatrix, x: &[Rational]) -> (bool, bool) {
    let l = c.loops();
    let mut ev = gc3::forms::numerator::GraphFormEvaluator::new(c);
    let v = ev.values(x, &CanonicalFormSymbol::one());
    let adj: Matrix<ExteriorElement<Rational>> =
        linalg::adjugate(&ev.laplacian(x)).into_iter().map(|r| r.into_iter().map(ExteriorElement::scalar).collect()).collect();
    let dl: Matrix<ExteriorElement<Rational>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let mut f = ExteriorElement::default();
                    for e in 0..c.edge_count {
                        let a = c.entry(e, i) * c.entry(e, j);
                        if a != 0 {
                            f.add_term(1 << e, int(a));
                        }
                    }
                    f
                })
                .collect()
        })
        .collect();
    let inner = linalg::matmul(&linalg::matmul(&dl, &adj), &dl);
    let pf = linalg::pfaffian(&inner).expect("skew");
    (pf == v.pfaffian, pf.wedge(&pf) == linalg::det(&inner))
}

fn symbolic_checks(name: &str, g: &OrientedGraph, seed: u64) -> Result<Vec<Outcome>, CliError> {
    let mut out = Vec::new();
    let mut push = |property, ok| out.push(Outcome { graph: name.to_string(), property, ok });
    let mut rng = Pcg64::seed_from_u64(seed);
    let c = fundamental_cycle_basis(g);
    let l = c.loops();
    let phi = pfaffian_form(g, &c)?;
    push("closed", phi.closedness_certificate());
    push("phi^phi = 0", phi.wedge(&phi).is_zero());
    if l % 2 == 0 && l > 0 {
        let x = random_point(g.edge_count(), &mut rng);
        let (agree, square) = pointwise_pfaffian(&c, &x);
        push("Pf = Pf(dL adj L dL)", agree);
        push("Pf^2 = det", square);
    }
    let p = random_unimodular(l, &mut rng);
    let d = i64::try_from(det_integer(&p)).expect("unimodular");
    push("basis change", pfaffian_form(g, &c.transformed(&p))?.same_as(&phi.scaled(d)));
    for e in 0..g.edge_count() {
        let (t, h) = g.direction(e);
        if t == h {
            continue;
        }
        let q = contract_edge(g, e)?;
        let cq = contracted_basis(&c, e);
        push("restriction = contraction", phi.restrict_edge_zero(e).same_as(&pfaffian_form(&q, &cq)?));
    }
    if l == 3 {
        let beta = canonical_form(g, &c, 1)?;
        push("beta5 closed", beta.closedness_certificate());
        push("phi^beta5 closed", phi.wedge(&beta).closedness_certificate());
    }
    Ok(out)
}

fn pointwise_checks(name: &str, g: &OrientedGraph, seed: u64) -> Result<Vec<Outcome>, CliError> {
    let mut out = Vec::new();
    let mut push = |property, ok| out.push(Outcome { graph: name.to_string(), property, ok });
    let mut rng = Pcg64::seed_from_u64(seed);
    let b5 = CanonicalFormSymbol::beta(1);
    let c = oriented_cycle_basis(g)?;
    let x = random_point(g.edge_count(), &mut rng);
    let v = gc3::forms::numerator::GraphFormEvaluator::new(&c).values(&x, &b5);
    push("phi^phi = 0", v.pfaffian.wedge(&v.pfaffian).is_empty());
    let (agree, square) = pointwise_pfaffian(&c, &x);
    push("Pf = Pf(dL adj L dL)", agree);
    push("Pf^2 = det", square);
    let p = random_unimodular(c.loops(), &mut rng);
    let d = i64::try_from(det_integer(&p)).expect("unimodular");
    let w = gc3::forms::numerator::GraphFormEvaluator::new(&c.transformed(&p)).values(&x, &b5);
    push("basis change", w.traces == v.traces && w.pfaffian == v.pfaffian.scaled(&int(d)));
    Ok(out)
}

/// Pointwise restriction to `x_e = 0` against the contracted graph, every edge.
fn contraction_checks(name: &str, g: &OrientedGraph, seed: u64) -> Result<Vec<Outcome>, CliError> {
    let mut rng = Pcg64::seed_from_u64(seed);
    let b5 = CanonicalFormSymbol::beta(1);
    let c = oriented_cycle_basis(g)?;
    let m = g.edge_count();
    let mut out = Vec::new();
    for e in 0..m {
        let q = contract_edge(g, e)?;
        let cq = contracted_basis(&c, e);
        validate_basis(&q, &cq)?;
        let mut x = random_point(m, &mut rng);
        x[e] = int(0);
        let xq: Vec<Rational> = x.iter().enumerate().filter(|&(f, _)| f != e).map(|(_, v)| v.clone()).collect();
        let a = gc3::forms::numerator::GraphFormEvaluator::new(&c).values(&x, &b5);
        let b = gc3::forms::numerator::GraphFormEvaluator::new(&cq).values(&xq, &b5);
        let map: Vec<usize> = (0..m).map(|f| if f > e { f - 1 } else { f }).collect();
        let restrict = |f: &ExteriorElement<Rational>| f.drop_generator(e).relabel(&map);
        let ok = a.psi == b.psi && restrict(&a.pfaffian) == b.pfaffian && restrict(&a.traces[0]) == b.traces[0];
        out.push(Outcome { graph: name.to_string(), property: "restriction = contraction", ok });
    }
    Ok(out)
}

fn whitney_checks(name: &str, g: &OrientedGraph) -> Result<Vec<Outcome>, CliError> {
    let b5 = CanonicalFormSymbol::beta(1);
    let q = top_numerator(g, &b5)?;
    let mut out = Vec::new();
    for (v, w, side) in two_vertex_cuts(g) {
        let f = whitney_flip(g, v, w, &side)?;
        out.push(Outcome { graph: name.to_string(), property: "Whitney flip", ok: top_numerator(&f, &b5)? == q });
    }
    Ok(out)
}

fn block_checks() -> Result<Vec<Outcome>, CliError> {
    let theta = parse("111|");
    let joined = one_vertex_join(&theta, &theta);
    let phi = pfaffian_form(&joined, &fundamental_cycle_basis(&joined))?;
    let phi1 = pfaffian_form(&theta, &fundamental_cycle_basis(&theta))?;
    let shift = |f: &ProjectiveForm, by: usize| {
        let map: Vec<usize> = (0..6).map(|i| i + by).collect();
        (f.numerator.relabel(&map).map(|p| p.relabel(&map)), f.psi.relabel(&map))
    };
    let (n1, p1) = shift(&phi1, 0);
    let (n2, p2) = shift(&phi1, 3);
    let product = ProjectiveForm::new(n1.wedge(&n2), 3, phi.psi.clone(), 6);
    let factorizes = phi.psi == Ring::mul(&p1, &p2) && phi.same_as(&product);
    let union = disjoint_union(&theta, &theta);
    let c = fundamental_cycle_basis(&union);
    let lam = dual_laplacian(&union, &c)?;
    // off-diagonal blocks couple the two components and must vanish
    let side = |p: &Polynomial| p.variable_bound() > 3;
    let block_diagonal = (0..4).all(|i| (0..4).all(|j| side(&lam[i][i]) == side(&lam[j][j]) || lam[i][j].is_empty()));
    Ok(vec![
        Outcome { graph: "theta v theta".into(), property: "block factorization", ok: factorizes },
        Outcome { graph: "theta + theta".into(), property: "block factorization", ok: block_diagonal },
    ])
}

fn vanishing_checks() -> Result<Vec<Outcome>, CliError> {
    let b5 = CanonicalFormSymbol::beta(1);
    let one = CanonicalFormSymbol::one();
    let mut out = Vec::new();
    let loop_graph = OrientedGraph::from_directed(2, &[(0, 0), (0, 1), (0, 1)]);
    out.push(("self-loop", vanishing_criterion(&loop_graph.graph) == Some(Vanishing::SelfLoop) && top_numerator_symbolic(&loop_graph, &one)?.0.is_empty()));
    let k4 = parse("123|23|3|");
    let joined = one_vertex_join(&k4, &k4);
    out.push(("cut vertex", vanishing_criterion(&joined.graph) == Some(Vanishing::CutVertex) && top_numerator(&joined, &b5)?.is_zero()));
    let sub = OrientedGraph::from_directed(7, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 6), (6, 3), (1, 4), (2, 5)]);
    out.push(("two-valent vertex", vanishing_criterion(&sub.graph) == Some(Vanishing::TwoValent) && top_numerator(&sub, &b5)?.is_zero()));
    let cut = two_edge_cut_witness();
    out.push(("two-edge cut", vanishing_criterion(&cut.graph) == Some(Vanishing::TwoEdgeCut) && top_numerator(&cut, &b5)?.is_zero()));
    Ok(out.into_iter().map(|(graph, ok)| Outcome { graph: graph.into(), property: "vanishing witness", ok }).collect())
}

/// Runs every property on the corpus. Returns the outcomes and the number
/// of distinct corpus graphs.
pub fn run(seed: u64) -> Result<(Vec<Outcome>, usize), CliError> {
    let small = small_corpus();
    let large = large_corpus();
    let graphs = small.len() + large.len();
    let mut tasks: Vec<Box<dyn Fn() -> Result<Vec<Outcome>, CliError> + Send + Sync>> = Vec::new();
    for (i, (name, g)) in small.into_iter().enumerate() {
        tasks.push(Box::new(move || symbolic_checks(&name, &g, seed.wrapping_add(i as u64))));
    }
    for (i, (name, g)) in large.into_iter().enumerate() {
        let s = seed.wrapping_add(100 + i as u64);
        let (n2, g2) = (name.clone(), g.clone());
        tasks.push(Box::new(move || pointwise_checks(&name, &g, s)));
        if n2 == "G199" || n2 == "G266" {
            tasks.push(Box::new(move || contraction_checks(&n2, &g2, s ^ 1)));
        } else if n2 == "G97" || n2 == "G244" {
            tasks.push(Box::new(move || whitney_checks(&n2, &g2)));
        }
    }
    tasks.push(Box::new(|| whitney_checks("G266", &table_graph("G266"))));
    tasks.push(Box::new(block_checks));
    tasks.push(Box::new(vanishing_checks));
    let results: Vec<Vec<Outcome>> = tasks.par_iter().map(|t| t()).collect::<Result<_, _>>()?;
    Ok((results.into_iter().flatten().collect(), graphs))
}
