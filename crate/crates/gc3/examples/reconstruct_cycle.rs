//! Completes the 6-loop cycle from its tabulated members: searches for the
//! remaining graphs (coefficients ±1, ±2) that cancel the boundary exactly.

use std::collections::{BTreeMap, BTreeSet};

use gc3::complex::*;
use gc3::exact::{int, rat, Rational};
use gc3::graph::*;
use num_traits::{One, Zero};

struct Search<'a> {
    cands: &'a [CanonicalKey],
    images: &'a [Chain],
    hits: BTreeMap<CanonicalKey, Vec<usize>>,
    found: Vec<Vec<(usize, i64)>>,
}

impl Search<'_> {
    fn go(&mut self, r: &Chain, budget: usize, forbidden: &mut BTreeSet<usize>, chosen: &mut Vec<(usize, i64)>) {
        if r.is_zero() {
            self.found.push(chosen.clone());
            return;
        }
        if budget == 0 {
            return;
        }
        // residual term with fewest admissible candidates
        let mut best: Option<(CanonicalKey, Vec<usize>)> = None;
        for (t, _) in r.terms() {
            let c: Vec<usize> = self.hits.get(t).map_or(vec![], |v| v.iter().copied().filter(|i| !forbidden.contains(i)).collect());
            if c.is_empty() {
                return;
            }
            if best.as_ref().map_or(true, |b| c.len() < b.1.len()) {
                best = Some((t.clone(), c));
            }
        }
        let (t, cs) = best.unwrap();
        let target = -r.coefficient(&t);
        // choose a non-empty subset of cs of size <= budget with coefficients summing to target on t
        let k = cs.len();
        for mask in 1u32..(1 << k) {
            let size = mask.count_ones() as usize;
            if size > budget {
                continue;
            }
            let members: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| cs[i]).collect();
            let mut coeffs = vec![0i64; size];
            self.assign(r, &t, &target, &members, 0, &mut coeffs, budget, forbidden, chosen, &cs);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(&mut self, r: &Chain, t: &CanonicalKey, target: &Rational, members: &[usize], i: usize, coeffs: &mut Vec<i64>,
              budget: usize, forbidden: &mut BTreeSet<usize>, chosen: &mut Vec<(usize, i64)>, cs: &[usize]) {
        if i == members.len() {
            let s: Rational = members.iter().zip(coeffs.iter()).map(|(&g, &c)| self.images[g].coefficient(t) * int(c)).sum();
            if &s != target {
                return;
            }
            let mut r2 = r.clone();
            for (&g, &c) in members.iter().zip(coeffs.iter()) {
                r2.add_chain(&self.images[g].scaled(&int(c)));
                chosen.push((g, c));
            }
            let added: Vec<usize> = cs.iter().copied().filter(|x| forbidden.insert(*x)).collect();
            self.go(&r2, budget - members.len(), forbidden, chosen);
            for x in added {
                forbidden.remove(&x);
            }
            for _ in members {
                chosen.pop();
            }
            return;
        }
        for c in [1, -1, 2, -2] {
            coeffs[i] = c;
            self.assign(r, t, target, members, i + 1, coeffs, budget, forbidden, chosen, cs);
        }
    }
}

fn main() {
    let table: BTreeMap<String, String> = include_str!("../data/table4.txt")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0].to_string(), f[1].to_string())
        })
        .collect();
    let known: [(&str, Rational); 13] = [
        ("G266", int(1)), ("G103", int(1)), ("G106", int(1)), ("G107", int(-2)), ("G109", int(-1)),
        ("G99", int(1)), ("G101", int(1)), ("G112", int(1)), ("G236", int(1)), ("G195", int(-1)),
        ("G198", rat(-1, 3)), ("G199", int(-1)), ("G234", int(-1)),
    ];
    let mut x = Chain::zero();
    for (name, c) in &known {
        x.add_graph(&parse_adjacency(&table[*name]).unwrap(), c);
    }
    let k4 = Chain::from_graph(&parse_adjacency("123|23|3|").unwrap());
    let kk = bracket(&k4, &k4).unwrap();
    let g288 = kk.terms().find(|(_, v)| **v == int(-192)).unwrap().0.clone();
    x.add_term(g288.clone(), rat(-1, 3));

    let y3 = Chain::from_graph(&parse_adjacency("123|24|5|45|5|").unwrap());
    let yd = bracket(&y3, &Chain::from_graph(&dipole(3))).unwrap();
    let excluded: BTreeSet<CanonicalKey> = yd.terms().map(|(k, _)| k.clone()).collect();
    let used: BTreeSet<CanonicalKey> = x.terms().map(|(k, _)| k.clone()).collect();
    let cands: Vec<CanonicalKey> = basis(6, -6).unwrap().into_iter().filter(|k| !excluded.contains(k) && !used.contains(k)).collect();
    let images: Vec<Chain> = cands.iter().map(|k| boundary(&Chain::from_key(k.clone(), Rational::one()))).collect();
    let mut hits: BTreeMap<CanonicalKey, Vec<usize>> = BTreeMap::new();
    for (i, im) in images.iter().enumerate() {
        for (t, _) in im.terms() {
            hits.entry(t.clone()).or_default().push(i);
        }
    }
    let r = boundary(&x);
    eprintln!("candidates {}, residual terms {}", cands.len(), r.len());
    let mut s = Search { cands: &cands, images: &images, hits, found: vec![] };
    s.go(&r, 6, &mut BTreeSet::new(), &mut vec![]);
    eprintln!("{} completions", s.found.len());
    for sol in &s.found {
        let mut full = x.clone();
        for &(g, c) in sol {
            full.add_term(s.cands[g].clone(), int(c));
        }
        assert!(boundary(&full).is_zero());
        let p = pairing(&yd, &full);
        eprintln!("pairing with [Y3,D3]: {p}; with [K4,K4]: {}", pairing(&kk, &full));
        for &(g, c) in sol {
            eprintln!("  {c:+} * {}", s.cands[g].to_adjacency());
        }
        if p == int(-192) {
            print!("{full}");
        }
    }
    let _ = Rational::zero();
}
