//! Shipped data: the 6-loop numerator table with its λ-vectors, the
//! 6-loop cycle `X`, and the 288 classes of bidegree (6, −6).

use crate::complex::{parse_named_chain, Chain};
use crate::exact::{int, Rational};
use crate::graph::{canonical_key, parse_adjacency, OrientedGraph};

pub const TABLE4: &str = include_str!("../data/table4.txt");
pub const X_CYCLE: &str = include_str!("../data/x_cycle.txt");
pub const GRAPHS_6_6: &str = include_str!("../data/graphs_6_6.txt");

/// One row of the numerator table: τ₁(G) = 10·Σ λᵢ·bᵢ in the constant basis
/// of [`crate::integrate::lambda_basis_values`].
#[derive(Clone, Debug, PartialEq)]
pub struct Table4Row {
    pub name: String,
    pub edges: String,
    pub lambda: [i64; 7],
    pub value: f64,
}

impl Table4Row {
    pub fn graph(&self) -> OrientedGraph {
        parse_adjacency(&self.edges).expect("table graph parses")
    }
}

pub fn parse_table4(text: &str) -> Result<Vec<Table4Row>, String> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 10 {
            return Err(format!("line {}: expected 10 fields, got {}", i + 1, f.len()));
        }
        let mut lambda = [0i64; 7];
        for (j, x) in f[2..9].iter().enumerate() {
            lambda[j] = x.parse().map_err(|_| format!("line {}: bad λ {x:?}", i + 1))?;
        }
        let value = f[9].parse().map_err(|_| format!("line {}: bad value {:?}", i + 1, f[9]))?;
        rows.push(Table4Row { name: f[0].to_string(), edges: f[1].to_string(), lambda, value });
    }
    Ok(rows)
}

pub fn table4() -> Vec<Table4Row> {
    parse_table4(TABLE4).expect("shipped table parses")
}

pub fn x_cycle() -> Chain {
    parse_named_chain(X_CYCLE).expect("shipped cycle parses").0
}

/// The cochain taking the value `λᵢ(G)` on each table graph (in its listed
/// orientation) and 0 elsewhere, `i` in `0..7`. Under the pairing its
/// coefficient on `G` is `λᵢ(G)/|Aut G|`.
pub fn lambda_cochain(i: usize) -> Chain {
    let mut c = Chain::zero();
    for r in table4() {
        let g = r.graph();
        let aut = Rational::from_integer(canonical_key(&g).0.info().automorphism_count.clone());
        c.add_graph(&g, &(int(r.lambda[i]) / aut));
    }
    c
}

/// `(name, graph)` for the 288 classes of bidegree (6, −6).
pub fn graphs_6_6() -> Vec<(Option<String>, OrientedGraph)> {
    crate::graph::parse_graph_file(GRAPHS_6_6).expect("shipped graph list parses")
}
