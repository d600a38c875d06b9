use std::f64::consts::PI;

use gc3::complex::{dipole, pairing, Chain};
use gc3::data::{self, table4};
use gc3::exact::{int, rat, Rational};
use gc3::forms::*;
use gc3::graph::*;
use gc3::integrate::closed::{dipole_numerator_constant, normalization};
use gc3::integrate::constants::{CATALAN, IM_LI4_I, LI4_HALF, ZETA3};
use gc3::integrate::*;
use proptest::prelude::*;

fn parse(s: &str) -> OrientedGraph {
    parse_adjacency(s).unwrap()
}

fn row(name: &str) -> data::Table4Row {
    table4().into_iter().find(|r| r.name == name).unwrap()
}

fn b5() -> CanonicalFormSymbol {
    CanonicalFormSymbol::beta(1)
}

fn cfg(samples: u64, seed: u64) -> McConfig {
    McConfig { samples, seed }
}

fn mono(exps: &[u32]) -> Polynomial {
    Polynomial::from_terms([(exps.to_vec(), int(1))])
}

fn within(r: &IntegralResult, target: f64, sigmas: f64) -> bool {
    (r.value - target).abs() <= sigmas * r.std_error
}

/// Theta with one edge subdivided: edges 0-1, 0-1, 0-2, 2-1.
fn subdivided_theta() -> OrientedGraph {
    parse("112|2|")
}

/// `Σ_orders Π_{k<m} 1/ω(first k edges)` by brute force over permutations.
fn hepp_brute(g: &HalfEdgeGraph, nu: &[f64], s: f64) -> f64 {
    fn rec(g: &HalfEdgeGraph, nu: &[f64], s: f64, used: &mut Vec<usize>, acc: f64) -> f64 {
        let m = nu.len();
        if used.len() == m - 1 {
            return acc;
        }
        let mut total = 0.0;
        for e in 0..m {
            if used.contains(&e) {
                continue;
            }
            used.push(e);
            let omega: f64 = used.iter().map(|&i| nu[i]).sum::<f64>() - s / 2.0 * subgraph_loop_number(g, used) as f64;
            total += rec(g, nu, s, used, acc / omega);
            used.pop();
        }
        total
    }
    // the last edge of an order is determined by the others
    rec(g, nu, s, &mut Vec::new(), 1.0)
}

#[test]
fn gamma_and_normalization() {
    assert!((gamma_half(Half(1)).unwrap().to_f64() - PI.sqrt()).abs() < 1e-14);
    assert!((gamma_half(Half(7)).unwrap().to_f64() - 15.0 / 8.0 * PI.sqrt()).abs() < 1e-13);
    assert!((normalization_f64(2) + 1.0 / (2.0 * PI)).abs() < 1e-15);
    assert!((normalization_f64(6) + 1.0 / (8.0 * PI.powi(3))).abs() < 1e-15);
}

#[test]
fn dipoles_are_exactly_one() {
    for i in 1..=3 {
        assert_eq!(dipole_exact(i), int(1), "D{}", 2 * i + 1);
    }
    for m in [3, 5, 7] {
        let g = dipole(m);
        let r = canonical_integral(&g, &CanonicalFormSymbol::one(), cfg(1000, 1)).unwrap();
        let sign = f64::from(canonical_key(&g).1);
        assert_eq!(r.method, Method::ExactDipole);
        assert_eq!(r.value, sign);
        assert_eq!(canonical_integral(&g.negated(), &CanonicalFormSymbol::one(), cfg(1000, 1)).unwrap().value, -sign);
    }
}

#[test]
fn dipole_constant_matches_top_numerator() {
    for i in 1..=2u32 {
        let m = 2 * i as usize + 1;
        let g = dipole(m);
        let top = top_numerator(&g, &CanonicalFormSymbol::one()).unwrap();
        assert_eq!(top.s, m as u32);
        let expected = mono(&vec![i - 1; m]).scaled(&dipole_numerator_constant(i));
        let sign = canonical_key(&g).1;
        assert_eq!(top.q, expected.scaled(&int(sign.into())), "D{m}");
    }
    assert_eq!(dipole_numerator_constant(1), int(-1));
    assert_eq!(dipole_numerator_constant(2), int(3));
    assert_eq!(dipole_numerator_constant(3), int(-15));
}

#[test]
fn dipole_value_by_monte_carlo() {
    // independent check of the exact dipole path
    let g = dipole(5);
    let top = top_numerator(&g, &CanonicalFormSymbol::one()).unwrap();
    let r = graph_integral_mc(&g, &top.q, top.s, cfg(200_000, 3)).unwrap().scaled(normalization_f64(4));
    let sign = f64::from(canonical_key(&g).1);
    assert!(within(&r, sign, 4.0), "{r:?}");
}

#[test]
fn bubble_values() {
    // one loop in D = 3 with unit indices: Γ(1/2)³
    let v = bubble(Half(2), Half(2), Half(6)).unwrap();
    assert_eq!(v, HalfPiExact { q: int(1), p: 3 });
    assert!((v.to_f64() - PI.powf(1.5)).abs() < 1e-13);
    assert_eq!(bubble(Half(2), Half(4), Half(6)), bubble(Half(4), Half(2), Half(6)));
    // D/2 must be a half-integer
    assert_eq!(bubble(Half(2), Half(2), Half(3)), Err(NotReducible::GammaPole));
    // Γ(n₁ + n₂ − D/2) at a pole
    assert_eq!(bubble(Half(2), Half(2), Half(8)), Err(NotReducible::GammaPole));
}

#[test]
fn theta_parametric_is_two_pi() {
    let g = parse("111|");
    let v = parametric_exact(g.graph.edges(), &[Half::int(1); 3], Half::int(3)).unwrap();
    assert_eq!(v, HalfPiExact { q: int(2), p: 2 });
}

#[test]
fn series_parallel_matches_sampling() {
    let g = subdivided_theta();
    let n = [Half::int(2), Half::int(1), Half::int(1), Half::int(1)];
    let exact = parametric_exact(g.graph.edges(), &n, Half::int(5)).unwrap().to_f64();
    let q = mono(&[1, 0, 0, 0]);
    let tropical = graph_integral_mc(&g, &q, 5, cfg(400_000, 11)).unwrap();
    assert!(within(&tropical, exact, 4.0), "{tropical:?} vs {exact}");
    let c = oriented_cycle_basis(&g).unwrap();
    let dirichlet = integrate_simplex(&GraphIntegrand::new(&q, &c, 5), 400_000, 12).unwrap();
    assert!(within(&dirichlet, exact, 4.0), "{dirichlet:?} vs {exact}");
}

#[test]
fn theta_monte_carlo() {
    let g = parse("111|");
    let psi = symanzik(&g.graph);
    let r = mc_integrate(&Polynomial::constant(int(-1)), &psi, 3, 3, 1_000_000, 7).unwrap();
    assert_eq!(r.method, Method::MonteCarlo);
    assert!(within(&r, -2.0 * PI, 3.0), "{r:?}");
    assert!(r.std_error < 0.01 * 2.0 * PI);
}

#[test]
fn std_error_scales_with_samples() {
    let psi = symanzik(&parse("111|").graph);
    let one = Polynomial::constant(int(1));
    let small = mc_integrate(&one, &psi, 3, 3, 10_000, 5).unwrap();
    let large = mc_integrate(&one, &psi, 3, 3, 1_000_000, 5).unwrap();
    let ratio = small.std_error / large.std_error;
    assert!((7.0..14.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn not_projective_is_rejected() {
    let psi = symanzik(&parse("111|").graph);
    let err = mc_integrate(&Polynomial::constant(int(1)), &psi, 4, 3, 100, 1).unwrap_err();
    assert!(matches!(err, IntegralError::NotProjective { .. }));
}

#[test]
fn seeds_are_deterministic() {
    let psi = symanzik(&parse("111|").graph);
    let one = Polynomial::constant(int(1));
    let a = mc_integrate(&one, &psi, 3, 3, 50_000, 9).unwrap();
    let b = mc_integrate(&one, &psi, 3, 3, 50_000, 9).unwrap();
    let c = mc_integrate(&one, &psi, 3, 3, 50_000, 10).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.value, c.value);
    let g = row("G234").graph();
    let x = canonical_integral(&g, &b5(), cfg(20_000, 4)).unwrap();
    let y = canonical_integral(&g, &b5(), cfg(20_000, 4)).unwrap();
    assert_eq!(x, y);
}

#[test]
fn orientation_covariance() {
    let g = row("G234").graph();
    let a = canonical_integral(&g, &b5(), cfg(20_000, 2)).unwrap();
    let b = canonical_integral(&g.negated(), &b5(), cfg(20_000, 2)).unwrap();
    assert_eq!(a.method, Method::MonteCarlo);
    assert!((a.value + b.value).abs() <= 1e-12 * a.value.abs(), "{a:?} {b:?}");
    assert_eq!(a.std_error, b.std_error);
}

#[test]
fn hepp_bounds() {
    let theta = parse("111|");
    let t = TropicalSampler::new(&theta.graph, &Polynomial::constant(int(1)), 3).unwrap();
    assert!((t.hepp_bound(0) - 12.0).abs() < 1e-12);
    assert!((t.bound() - 12.0).abs() < 1e-12);
    assert_eq!(t.loops_of(0b111), 2);
    assert_eq!(t.loops_of(0b011), 1);

    let g = subdivided_theta();
    let q = Polynomial::from_terms([(vec![1, 0, 0, 0], int(2)), (vec![0, 0, 0, 1], int(-3))]);
    // the second monomial puts ν = 2 on edge 3, leaving the loop {0, 1} at ω = 2 − 5/2
    assert!(TropicalSampler::new(&g.graph, &q, 5).is_none());
    let q = mono(&[1, 0, 0, 0]);
    let t = TropicalSampler::new(&g.graph, &q, 5).unwrap();
    let brute = hepp_brute(&g.graph, &[2.0, 1.0, 1.0, 1.0], 5.0);
    assert!((t.hepp_bound(0) - brute).abs() < 1e-9 * brute, "{} vs {brute}", t.hepp_bound(0));
}

#[test]
fn tropical_samples_are_bounded() {
    use rand::SeedableRng;
    let g = row("G199").graph();
    let top = top_numerator(&g, &b5()).unwrap();
    let t = TropicalSampler::new(&g.graph, &top.q, top.s).unwrap();
    let mut rng = rand_pcg::Pcg64::seed_from_u64(8);
    let (mut x, mut order) = (vec![0.0; g.edge_count()], Vec::new());
    for _ in 0..2000 {
        let v = t.draw(&mut rng, &mut x, &mut order);
        assert!(v.is_finite() && v.abs() <= t.bound() * (1.0 + 1e-9));
        assert_eq!(x.iter().copied().fold(f64::NEG_INFINITY, f64::max), 0.0);
        let ratio = t.log_symanzik_ratio(&x, &order);
        assert!(ratio >= -1e-9, "Ψ ≥ Ψ^tr fails: {ratio}");
    }
}

#[test]
fn symanzik_ratio_matches_direct_evaluation() {
    use rand::{Rng, SeedableRng};
    let g = row("G100").graph();
    let psi = symanzik(&g.graph);
    let top = top_numerator(&g, &b5()).unwrap();
    let t = TropicalSampler::new(&g.graph, &top.q, top.s).unwrap();
    let trees: Vec<Vec<usize>> = psi.terms().map(|(m, _)| (0..g.edge_count()).filter(|&e| m.exponent(e) > 0).collect()).collect();
    let mut rng = rand_pcg::Pcg64::seed_from_u64(2);
    for _ in 0..50 {
        let logx: Vec<f64> = (0..g.edge_count()).map(|_| rng.gen_range(-4.0..0.0)).collect();
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        order.sort_by(|&a, &b| logx[a].partial_cmp(&logx[b]).unwrap());
        let x: Vec<f64> = logx.iter().map(|v| v.exp()).collect();
        let tropical = trees.iter().map(|t| t.iter().map(|&e| logx[e]).sum::<f64>()).fold(f64::NEG_INFINITY, f64::max);
        let direct = psi.eval_f64(&x).ln() - tropical;
        assert!((t.log_symanzik_ratio(&logx, &order) - direct).abs() < 1e-9);
    }
}

#[test]
fn tropical_agrees_with_dirichlet_on_small_graph() {
    let g = dipole(5);
    let top = top_numerator(&g, &CanonicalFormSymbol::one()).unwrap();
    let a = graph_integral_mc(&g, &top.q, top.s, cfg(200_000, 21)).unwrap();
    let c = oriented_cycle_basis(&g).unwrap();
    let b = integrate_simplex(&GraphIntegrand::new(&top.q, &c, top.s), 200_000, 22).unwrap();
    let combined = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    assert!((a.value - b.value).abs() < 4.0 * combined, "{a:?} {b:?}");
}

#[test]
fn six_loop_table_values() {
    for (name, seed) in [("G100", 1), ("G199", 2)] {
        let r = row(name);
        let got = canonical_integral(&r.graph(), &b5(), cfg(300_000, seed)).unwrap();
        assert!(within(&got, r.value, 4.0), "{name}: {got:?} vs {}", r.value);
        let from_lambda = tau1_from_lambda(&r.lambda);
        assert!((from_lambda - r.value).abs() < 1e-4 * r.value.abs().max(1.0), "{name}");
    }
    assert!((row("G100").value - 13.267735).abs() < 1e-5);
}

#[test]
fn tau1_of_single_graph_chain() {
    let r = row("G234");
    let g = r.graph();
    let t = tau1_of_chain(&Chain::from_graph(&g), cfg(200_000, 5)).unwrap();
    assert!(within(&t, r.value, 4.0), "{t:?} vs {}", r.value);
    let twice = tau1_of_chain(&Chain::from_graph(&g).scaled(&int(2)), cfg(200_000, 5)).unwrap();
    assert!((twice.value - 2.0 * t.value).abs() < 1e-12 * t.value.abs());
    assert!(matches!(tau1_of_chain(&Chain::from_graph(&dipole(3)), cfg(10, 1)), Err(IntegralError::MixedLoopOrder)));
}

#[test]
fn zero_chain_and_vanishing_graphs() {
    let z = tau1_of_chain(&Chain::zero(), cfg(1000, 1)).unwrap();
    assert_eq!((z.value, z.std_error, z.method), (0.0, 0.0, Method::ExactZero));
    // two-edge cut at six loops
    let g = OrientedGraph::from_directed(
        7,
        &[(0, 1), (0, 1), (0, 2), (1, 3), (4, 5), (5, 6), (6, 4), (4, 5), (2, 4), (2, 6), (3, 5), (3, 6)],
    );
    assert_eq!(g.graph.loop_number(), 6);
    assert_eq!(canonical_integral(&g, &b5(), cfg(1000, 1)).unwrap(), IntegralResult::zero());
    // wrong form degree and odd loop number
    assert_eq!(canonical_integral(&dipole(5), &b5(), cfg(10, 1)).unwrap(), IntegralResult::zero());
    assert_eq!(canonical_integral(&dipole(4), &CanonicalFormSymbol::one(), cfg(10, 1)).unwrap(), IntegralResult::zero());
}

#[test]
fn constants_against_series() {
    let zeta3: f64 = (1..200_000u64).rev().map(|n| 1.0 / (n as f64).powi(3)).sum::<f64>() + 1.0 / (2.0 * 200_000f64.powi(2));
    assert!((zeta3 - ZETA3).abs() < 1e-12);
    // alternating series: average of consecutive partial sums
    let alt = |p: i32, n: u64| -> f64 {
        let s: f64 = (0..n).rev().map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / ((2 * k + 1) as f64).powi(p)).sum();
        let next = if n % 2 == 0 { 1.0 } else { -1.0 } / ((2 * n + 1) as f64).powi(p);
        s + next / 2.0
    };
    assert!((alt(2, 1_000_000) - CATALAN).abs() < 1e-12);
    assert!((alt(4, 10_000) - IM_LI4_I).abs() < 1e-14);
    let li4: f64 = (1..80).map(|n| 0.5f64.powi(n) / f64::from(n).powi(4)).sum();
    assert!((li4 - LI4_HALF).abs() < 1e-15);
}

#[test]
fn tau1_of_x_in_constant_basis() {
    let x = data::x_cycle();
    let lambda: Vec<Rational> = (0..7).map(|i| pairing(&data::lambda_cochain(i), &x)).collect();
    assert_eq!(lambda, [0, 0, -32, -24, 0, 0, 0].map(int).to_vec());
    let v = tau1_from_lambda(&[0, 0, -32, -24, 0, 0, 0]);
    assert!((v - tau1_x_closed_form()).abs() < 1e-9);
    assert!((v - 77.78).abs() < 0.01, "{v}");
}

#[test]
fn cache_replays_without_sampling() {
    let g = row("G234").graph();
    let mut cache = IntegralCache::in_memory();
    let (a, hit) = canonical_integral_cached(&mut cache, &g, &b5(), cfg(20_000, 6)).unwrap();
    assert!(!hit);
    let (b, hit) = canonical_integral_cached(&mut cache, &g, &b5(), cfg(20_000, 6)).unwrap();
    assert!(hit);
    assert_eq!(a, b);
    let (c, hit) = canonical_integral_cached(&mut cache, &g.negated(), &b5(), cfg(20_000, 6)).unwrap();
    assert!(hit);
    assert_eq!(c.value, -a.value);
    let (_, hit) = canonical_integral_cached(&mut cache, &g, &b5(), cfg(20_000, 7)).unwrap();
    assert!(!hit);

    let path = std::env::temp_dir().join(format!("gc3-cache-{}.jsonl", std::process::id()));
    let _ = std::fs::remove_file(&path);
    let mut file = IntegralCache::open(&path).unwrap();
    let (d, _) = canonical_integral_cached(&mut file, &dipole(5), &CanonicalFormSymbol::one(), cfg(100, 1)).unwrap();
    let (e, _) = canonical_integral_cached(&mut file, &g, &b5(), cfg(20_000, 6)).unwrap();
    drop(file);
    let mut reopened = IntegralCache::open(&path).unwrap();
    assert_eq!(reopened.len(), 2);
    let (e2, hit) = canonical_integral_cached(&mut reopened, &g, &b5(), cfg(20_000, 6)).unwrap();
    assert!(hit);
    assert_eq!(e, e2);
    assert_eq!(d.method, Method::ExactDipole);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn corrupt_cache_is_an_error() {
    let path = std::env::temp_dir().join(format!("gc3-bad-cache-{}.jsonl", std::process::id()));
    std::fs::write(&path, "{not json\n").unwrap();
    assert!(matches!(IntegralCache::open(&path), Err(IntegralError::Cache(_))));
    std::fs::remove_file(&path).unwrap();
}

proptest! {
    #[test]
    fn gamma_recurrence(a in 1i64..30) {
        let g = gamma_half(Half(a)).unwrap();
        let next = gamma_half(Half(a + 2)).unwrap();
        prop_assert_eq!(next, g.mul(&HalfPiExact::rational(rat(a, 2))));
    }

    #[test]
    fn normalization_inverse(n in -6i64..6) {
        let p = normalization(n).mul(&normalization(-n));
        prop_assert_eq!(p, HalfPiExact::rational(int(1)));
    }

    #[test]
    fn constant_draws_have_no_error(c in -100.0f64..100.0, n in 2u64..500, seed in any::<u64>()) {
        let r = run_streams(n, seed, || (), |_, _| Ok(c)).unwrap();
        prop_assert!((r.value - c).abs() <= 1e-12 * c.abs().max(1.0));
        prop_assert!(r.std_error < 1e-9);
        prop_assert_eq!(r.samples, n);
    }

    #[test]
    fn scaled_results(v in -10.0f64..10.0, e in 0.0f64..1.0, c in -5.0f64..5.0) {
        let r = IntegralResult { value: v, std_error: e, method: Method::MonteCarlo, samples: 1, seed: 0 };
        let s = r.scaled(c);
        prop_assert_eq!(s.value, v * c);
        prop_assert_eq!(s.std_error, e * c.abs());
    }
}
