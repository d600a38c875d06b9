//! Integration of the non-zero six-loop numerators against the table.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use gc3::complex::Chain;
use gc3::data::{self, Table4Row};
use gc3::forms::CanonicalFormSymbol;
use gc3::graph::{canonical_key, CanonicalKey, OrientedGraph};
use gc3::integrate::{canonical_integral, IntegralCache, IntegralResult, McConfig, Method};
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::report::{Check, Status, TableRow};
use crate::suites::census;
use crate::{load_graphs, CliError, Options};

/// Table values are printed to about six decimals.
pub const ROUNDING: f64 = 5e-6;
/// Rows whose value is below this in size get ten times the sample budget.
pub const SMALL_VALUE: f64 = 0.5;

/// Acceptance of one row: within three standard errors (plus rounding of the
/// printed value), with the standard error at most 1 % of the value or 0.05.
pub fn row_passes(expected: f64, r: &IntegralResult) -> bool {
    let sigma_ok = r.std_error <= (0.01 * expected.abs()).max(0.05);
    sigma_ok && (r.value - expected).abs() <= 3.0 * r.std_error + ROUNDING
}

pub struct TableRun {
    pub graphs: Vec<(Option<String>, OrientedGraph)>,
    pub nonzero: Vec<bool>,
    pub rows: Vec<TableRow>,
    /// Results on reference orientations; `None` for skipped rows.
    pub reference: HashMap<CanonicalKey, Option<IntegralResult>>,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::ExactZero => "exact-zero",
        Method::ExactDipole => "exact-dipole",
        Method::ExactSeriesParallel => "exact-series-parallel",
        Method::MonteCarlo => "monte-carlo",
    }
}

/// Computes the census over all graphs and integrates every non-zero one.
/// The graph at position `i` of the list uses seed `opts.seed + i`.
pub fn run(opts: &Options) -> Result<TableRun, CliError> {
    let start = Instant::now();
    let deadline = opts.time_limit.map(Duration::from_secs_f64);
    let graphs = load_graphs(opts)?;
    let nonzero = census(&graphs)?;
    let table = data::table4();
    let by_key: HashMap<CanonicalKey, &Table4Row> = table.iter().map(|r| (canonical_key(&r.graph()).0, r)).collect();
    let b5 = CanonicalFormSymbol::beta(1);
    let omega = b5.to_string();

    struct Item<'a> {
        key: CanonicalKey,
        name: String,
        edges: String,
        expected: Option<f64>,
        cfg: McConfig,
        graph: OrientedGraph,
        row: Option<&'a Table4Row>,
    }
    let items: Vec<Item> = graphs
        .iter()
        .enumerate()
        .filter(|(i, _)| nonzero[*i])
        .map(|(index, (name, g))| {
            let key = canonical_key(g).0;
            let row = by_key.get(&key).copied();
            let expected = row.map(|r| r.value);
            let small = expected.map_or(false, |v| v.abs() < SMALL_VALUE);
            let samples = if small { opts.samples.saturating_mul(10) } else { opts.samples };
            Item {
                key: key.clone(),
                name: row.map(|r| r.name.clone()).or_else(|| name.clone()).unwrap_or_else(|| format!("#{index}")),
                edges: row.map(|r| r.edges.clone()).unwrap_or_else(|| g.to_adjacency()),
                expected,
                cfg: McConfig { samples, seed: opts.seed.wrapping_add(index as u64) },
                // integrate in the orientation the table values refer to
                graph: row.map(|r| r.graph()).unwrap_or_else(|| key.reference_graph()),
                row,
            }
        })
        .collect();

    let mut cache = match &opts.cache {
        Some(p) => IntegralCache::open(p)?,
        None => IntegralCache::in_memory(),
    };
    let reference_name = |k: &CanonicalKey| k.to_adjacency();
    // cache hits first, then the misses in parallel
    let hits: Vec<Option<IntegralResult>> =
        items.iter().map(|it| cache.get(&reference_name(&it.key), &omega, it.cfg.samples, it.cfg.seed)).collect();
    let computed: Vec<Option<Result<IntegralResult, CliError>>> = items
        .par_iter()
        .zip(&hits)
        .map(|(it, hit)| {
            if hit.is_some() {
                return None;
            }
            if deadline.is_some_and(|d| start.elapsed() > d) {
                return None;
            }
            Some(canonical_integral(&it.key.reference_graph(), &b5, it.cfg).map_err(CliError::from))
        })
        .collect();

    let mut rows = Vec::with_capacity(items.len());
    let mut reference = HashMap::new();
    for ((it, hit), fresh) in items.iter().zip(hits).zip(computed) {
        let (result, new_samples) = match (hit, fresh) {
            (Some(r), _) => (Some(r), 0),
            (None, Some(r)) => {
                let r = r?;
                cache.insert(&reference_name(&it.key), &omega, it.cfg.samples, &r)?;
                let n = if r.method == Method::MonteCarlo { r.samples } else { 0 };
                (Some(r), n)
            }
            (None, None) => (None, 0),
        };
        reference.insert(it.key.clone(), result.clone());
        let sign = f64::from(canonical_key(&it.graph).1);
        let row = match result {
            Some(r) => {
                let r = r.scaled(sign);
                let status = match (it.expected, it.row) {
                    (Some(p), Some(_)) => Status::from_bool(row_passes(p, &r)),
                    _ => Status::Fail,
                };
                TableRow {
                    name: it.name.clone(),
                    edges: it.edges.clone(),
                    expected: it.expected.unwrap_or(f64::NAN),
                    value: r.value,
                    std_error: r.std_error,
                    method: method_name(r.method).into(),
                    samples: r.samples,
                    new_samples,
                    status,
                }
            }
            None => TableRow {
                name: it.name.clone(),
                edges: it.edges.clone(),
                expected: it.expected.unwrap_or(f64::NAN),
                value: f64::NAN,
                std_error: f64::NAN,
                method: "-".into(),
                samples: 0,
                new_samples: 0,
                status: Status::Skipped,
            },
        };
        rows.push(row);
    }
    Ok(TableRun { graphs, nonzero, rows, reference })
}

impl TableRun {
    /// Criterion check over all rows of the table.
    pub fn table_check(&self) -> Check {
        let expected = data::table4().len();
        let passed = self.rows.iter().filter(|r| r.status == Status::Pass).count();
        let failed: Vec<&str> = self.rows.iter().filter(|r| r.status == Status::Fail).map(|r| r.name.as_str()).collect();
        let skipped = self.rows.iter().filter(|r| r.status == Status::Skipped).count();
        let done = self.rows.iter().filter(|r| r.status != Status::Skipped);
        let max_z = done.clone().filter(|r| r.std_error > 0.0).map(|r| ((r.value - r.expected) / r.std_error).abs()).fold(0.0, f64::max);
        let max_sigma = done.map(|r| r.std_error).fold(0.0, f64::max);
        let status = if !failed.is_empty() || self.rows.len() != expected {
            Status::Fail
        } else if skipped > 0 {
            Status::Skipped
        } else {
            Status::Pass
        };
        let mut observed = format!("{passed}/{expected} rows pass, max |z| {max_z:.2}, max sigma {max_sigma:.4}");
        if !failed.is_empty() {
            observed += &format!(", failing: {}", failed.join(","));
        }
        if skipped > 0 {
            observed += &format!(", {skipped} skipped by the time limit");
        }
        Check {
            id: "table4".into(),
            status,
            expected: format!("{expected} rows match the table"),
            observed,
            tolerance: format!("3 sigma + {ROUNDING}, sigma <= max(1% |value|, 0.05)"),
        }
    }

    /// `Σ c_G I_G(β⁵)` over a six-loop chain from the computed rows; graphs
    /// with zero numerator contribute exactly 0. `None` if a needed row was
    /// skipped or the chain has a graph outside the list.
    pub fn chain_value(&self, c: &Chain) -> Option<IntegralResult> {
        let listed: HashMap<CanonicalKey, bool> =
            self.graphs.iter().zip(&self.nonzero).map(|((_, g), &z)| (canonical_key(g).0, z)).collect();
        let (mut value, mut var, mut samples) = (0.0, 0.0, 0);
        for (key, coef) in c.terms() {
            let w = coef.to_f64()?;
            match listed.get(key)? {
                false => {}
                true => {
                    let r = self.reference.get(key)?.as_ref()?;
                    value += w * r.value;
                    var += (w * r.std_error).powi(2);
                    samples += r.samples;
                }
            }
        }
        Some(IntegralResult { value, std_error: var.sqrt(), method: Method::MonteCarlo, samples, seed: 0 })
    }
}
