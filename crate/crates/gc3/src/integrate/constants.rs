//! Numerical values of the constants spanning the six-loop integrals.

use std::f64::consts::{LN_2, PI};

pub const ZETA3: f64 = 1.202_056_903_159_594_3;
/// Catalan's constant `Σ (−1)ⁿ/(2n+1)²`.
pub const CATALAN: f64 = 0.915_965_594_177_219;
/// `Im Li₄(i) = Σ (−1)ⁿ/(2n+1)⁴`.
pub const IM_LI4_I: f64 = 0.988_944_551_741_105_3;
/// `Li₄(1/2) = Σ 1/(2ⁿ n⁴)`.
pub const LI4_HALF: f64 = 0.517_479_061_673_899_4;

/// The seven constants `bᵢ` with `τ₁(G) = 10·Σ λᵢ(G)·bᵢ`.
pub fn lambda_basis_values() -> [f64; 7] {
    let pi2 = PI * PI;
    [
        1.0 / 3.0,
        pi2 / 9.0,
        ZETA3,
        (2.0 * pi2 * LN_2 - 21.0 * ZETA3) / 6.0,
        pi2 * pi2 / 180.0,
        (LN_2.powi(4) + 24.0 * LI4_HALF) / 3.0,
        (pi2 * CATALAN + 24.0 * IM_LI4_I) / 9.0,
    ]
}

/// `10·Σ λᵢ·bᵢ`.
pub fn tau1_from_lambda(lambda: &[i64; 7]) -> f64 {
    10.0 * lambda.iter().zip(lambda_basis_values()).map(|(&l, b)| l as f64 * b).sum::<f64>()
}

/// `40·(13ζ(3) − 2π² ln 2)`.
pub fn tau1_x_closed_form() -> f64 {
    40.0 * (13.0 * ZETA3 - 2.0 * PI * PI * LN_2)
}
