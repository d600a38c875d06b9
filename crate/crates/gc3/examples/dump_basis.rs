//! Writes the classes of bidegree (6, −6) in graph-file format, using
//! table names and strings where available.

use std::collections::BTreeMap;

use gc3::complex::basis;
use gc3::data::table4;
use gc3::graph::canonical_key;
use gc3::graph::parse_adjacency;

fn main() {
    let mut named = BTreeMap::new();
    for r in table4() {
        named.insert(canonical_key(&r.graph()).0, (r.name.clone(), r.edges.clone()));
    }
    for (name, s) in [("G287", "125|26|6|456|56|6|"), ("G288", "124|25|6|456|56|6|")] {
        named.insert(canonical_key(&parse_adjacency(s).unwrap()).0, (name.to_string(), s.to_string()));
    }
    println!("# Connected graphs with 7 vertices, 12 edges, all valences >= 3 and");
    println!("# no odd automorphism. Unnamed lines use the reference orientation.");
    for k in basis(6, -6).unwrap() {
        match named.get(&k) {
            Some((n, s)) => println!("{n}: {s}"),
            None => println!("{}", k.to_adjacency()),
        }
    }
}
