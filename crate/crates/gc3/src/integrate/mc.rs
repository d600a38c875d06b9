//! Monte Carlo integration over the open simplex with Dirichlet(½)
//! importance sampling.
//!
//! Sampling `y_e = Z_e²` with standard normal `Z_e` and `x = y/Σy` gives
//! the Dirichlet(½,…,½) law with density `Γ(m/2)/π^{m/2}·Π x_e^{−1/2}`, so
//! each sample contributes `f(x)·π^{m/2}/Γ(m/2)·Π √x_e`.
//!
//! The master seed is split into `STREAMS` generators
//! `Pcg64::new(splitmix(seed), i)`; stream `i` draws its share of the
//! samples and the partial sums are added in stream order, so the result
//! does not depend on the number of worker threads.

use rand_distr::{Distribution, StandardNormal};
use rand_pcg::Pcg64;
use rayon::prelude::*;

use super::closed::{gamma_half, Half};
use super::{IntegralError, IntegralResult, Method};

pub const STREAMS: u64 = 64;

/// SplitMix64 finalizer.
pub fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn stream_rng(seed: u64, i: u64) -> Pcg64 {
    let state = (u128::from(splitmix(seed)) << 64) | u128::from(splitmix(seed ^ 0xa5a5_a5a5_a5a5_a5a5));
    Pcg64::new(state, u128::from(i))
}

/// Count, mean and sum of squared deviations of one stream.
#[derive(Clone, Copy, Debug, Default)]
struct Partial {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Partial {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let d = v - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, o: Partial) -> Partial {
        if o.n == 0 {
            return self;
        }
        if self.n == 0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Partial {
            n,
            mean: self.mean + d * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * (self.n as f64 * o.n as f64) / n as f64,
        }
    }
}

/// Integrand on the simplex returning `Q(x)/Ψ(x)^{s/2}`.
pub trait SimplexIntegrand: Sync {
    fn dimension(&self) -> usize;
    fn value(&self, x: &[f64]) -> Result<f64, IntegralError>;
}

/// Mean and standard error of `draw` over `samples` draws split across
/// the fixed streams. `scratch` builds per-stream working storage.
pub fn run_streams<S, I, D>(samples: u64, seed: u64, scratch: I, draw: D) -> Result<IntegralResult, IntegralError>
where
    I: Fn() -> S + Sync,
    D: Fn(&mut Pcg64, &mut S) -> Result<f64, IntegralError> + Sync,
{
    let partials: Vec<Partial> = (0..STREAMS)
        .into_par_iter()
        .map(|i| -> Result<Partial, IntegralError> {
            let n = samples / STREAMS + u64::from(i < samples % STREAMS);
            let mut rng = stream_rng(seed, i);
            let mut state = scratch();
            let mut p = Partial::default();
            for _ in 0..n {
                p.push(draw(&mut rng, &mut state)?);
            }
            Ok(p)
        })
        .collect::<Result<_, _>>()?;
    let total = partials.into_iter().fold(Partial::default(), Partial::merge);
    let n = total.n as f64;
    let var = if total.n > 1 { total.m2 / (n - 1.0) } else { 0.0 };
    Ok(IntegralResult { value: total.mean, std_error: (var / n.max(1.0)).sqrt(), method: Method::MonteCarlo, samples, seed })
}

/// Estimates `∫_σ f Ω_m`.
pub fn integrate_simplex<F: SimplexIntegrand>(f: &F, samples: u64, seed: u64) -> Result<IntegralResult, IntegralError> {
    let m = f.dimension();
    let weight = gamma_half(Half(1)).unwrap().to_f64().powi(m as i32) / gamma_half(Half(m as i64)).unwrap().to_f64();
    run_streams(samples, seed, || vec![0.0; m], |rng, x| {
        let mut total = 0.0;
        for xe in x.iter_mut() {
            let z: f64 = StandardNormal.sample(rng);
            *xe = z * z;
            total += *xe;
        }
        let mut root = 1.0;
        for xe in x.iter_mut() {
            *xe /= total;
            root *= xe.sqrt();
        }
        Ok(f.value(x)? * root * weight)
    })
}
