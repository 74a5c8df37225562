//! Average symbol error rates of QAM over a dual-hop decode-and-forward
//! relay in mixed eta-mu / kappa-mu fading.
//!
//! The crate provides, layer by layer:
//!
//! * [`specfun`] — gamma/beta helpers, adaptive quadrature, the bounded
//!   Gaussian Q-integral, Lauricella F_D / Phi_1 / Phi_2 and Yacoub's
//!   integral;
//! * [`channel`] — eta-mu and kappa-mu fading parameter sets with PDFs,
//!   MGFs, CDFs, classical special cases and random variate samplers;
//! * [`relay`] — the three-node system composition: link budgets, decode
//!   outage, end-to-end MGF, and the closed-form trigonometric MGF
//!   integrals (exact and high-SNR asymptotic) in all angle variants;
//! * [`modulation`] — RQAM / SQAM / BPSK / XQAM constellations, their
//!   conditional SER in AWGN, and exact/asymptotic average SER assembly;
//! * [`poweralloc`] — the convex optimal source/relay power split;
//! * [`mcsim`] — reproducible semi-analytic and symbol-level Monte Carlo
//!   validation;
//! * [`config`] — JSON scenario configs and CSV sweep plumbing shared by
//!   the CLI.
//!
//! All dB/linear conversions happen at interface boundaries; every internal
//! quantity is linear-scale.

pub mod channel;
pub mod config;
pub mod error;
pub mod mcsim;
pub mod modulation;
pub mod poweralloc;
pub mod relay;
pub mod specfun;

pub use channel::{EtaMuParams, FadingParams, KappaMuParams};
pub use error::{Error, Result};
pub use modulation::{Constellation, RqamSpec, XqamSpec};
pub use relay::{LinkBudget, RelaySystem};
pub use specfun::SeriesControl;

/// Convert decibels to the linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear ratio to decibels.
pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}
