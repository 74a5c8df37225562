//! Modified Bessel function of the first kind, in the normalized form the
//! fading densities need.
//!
//! The densities only ever use the combination I_v(z)/z^v, which is an even,
//! strictly positive, entire function of z. Working with its logarithm keeps
//! the large-argument tails (z of a few hundred in the quadrature oracles)
//! inside f64 range; the exp(-z)-type damping of the surrounding density is
//! applied by the caller in log space.

use super::gamma::ln_gamma;
use std::f64::consts::LN_2;

/// ln( I_v(z) / z^v ) for v > -1, any real z (even in z).
///
/// Power series with running renormalization; the series terms are all
/// positive so there is no cancellation.
pub fn ln_bessel_i_norm(v: f64, z: f64) -> f64 {
    debug_assert!(v > -1.0, "order must exceed -1");
    let q = 0.25 * z * z;
    // t_0 = 1 / (2^v Gamma(v+1)); series in units of t_0.
    let ln_t0 = -v * LN_2 - ln_gamma(v + 1.0);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut offset = 0.0_f64;
    let mut k = 0.0_f64;
    loop {
        k += 1.0;
        term *= q / (k * (k + v));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        if sum > 1e270 {
            offset += sum.ln();
            term /= sum;
            sum = 1.0;
        }
        if k > 100_000.0 {
            // |z| would have to be ~600+ digits for this; treat as converged.
            break;
        }
    }
    ln_t0 + offset + sum.ln()
}

/// I_v(z) for moderate arguments (used by test oracles).
pub fn bessel_i(v: f64, z: f64) -> f64 {
    if z < 0.0 {
        // Only even-order combinations appear here; restrict to z >= 0.
        return f64::NAN;
    }
    if z == 0.0 {
        return if v == 0.0 { 1.0 } else { 0.0 };
    }
    (ln_bessel_i_norm(v, z) + v * z.ln()).exp()
}
