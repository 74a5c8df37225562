//! Self-contained special-function kernel.
//!
//! Gamma/Beta/Pochhammer, adaptive Gauss–Legendre quadrature, the bounded
//! Gaussian Q-integral, Lauricella F_D and the confluent Phi_1/Phi_2
//! functions, and Yacoub's integral. Everything is a pure function of its
//! arguments and safe to call concurrently.

pub mod bessel;
pub mod gamma;
pub mod lauricella;
pub mod quad;
pub mod yacoub;

pub use gamma::{beta, gamma, ln_beta, ln_gamma, ln_pochhammer, pochhammer};
pub use lauricella::{
    lauricella_fd, lauricella_fd_series, lauricella_phi1, lauricella_phi1_series,
    lauricella_phi2, lauricella_phi2_ln, lauricella_phi2_series, SeriesControl,
};
pub use quad::{integrate, integrate_semi_inf, QuadControl};
pub use yacoub::{ln_yacoub_complement, yacoub_y};

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// Bounded Gaussian Q-integral
///   Q(x, phi) = (1/pi) int_0^phi exp(-x^2 / (2 sin^2 theta)) dtheta
/// for x >= 0 and 0 < phi <= pi/2. Q(x, pi/2) is the classical Gaussian
/// tail Q(x).
pub fn bounded_q(x: f64, phi: f64) -> Result<f64> {
    bounded_q_with(x, phi, &QuadControl::default())
}

/// `bounded_q` with caller-supplied quadrature control (the Monte Carlo
/// loops run this at a looser tolerance).
pub fn bounded_q_with(x: f64, phi: f64, ctl: &QuadControl) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("bounded_q", format!("x must be nonnegative, got {x}")));
    }
    if !(phi > 0.0 && phi <= FRAC_PI_2 + 1e-12) {
        return Err(Error::domain("bounded_q", format!("phi must lie in (0, pi/2], got {phi}")));
    }
    let phi = phi.min(FRAC_PI_2);
    if x == 0.0 {
        return Ok(phi / std::f64::consts::PI);
    }
    let half_x2 = 0.5 * x * x;
    let v = quad::integrate(
        |theta| {
            let s = theta.sin();
            if s <= 0.0 {
                0.0
            } else {
                (-half_x2 / (s * s)).exp()
            }
        },
        0.0,
        phi,
        ctl,
    )?;
    Ok(v / std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn zero_argument_is_angle_fraction() {
        assert!((bounded_q(0.0, FRAC_PI_2).unwrap() - 0.5).abs() < 1e-15);
        assert!((bounded_q(0.0, FRAC_PI_4).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn full_angle_reproduces_gaussian_tail() {
        // Q(1) = 0.15865525393145705 (standard normal tail).
        let v = bounded_q(1.0, FRAC_PI_2).unwrap();
        assert!((v - 0.158_655_253_931_457_05).abs() < 1e-12, "{v}");
    }

    #[test]
    fn craig_product_identity() {
        // Q(x)^2 = Q(x, pi/4).
        for &x in &[0.3, 1.0, 2.2] {
            let q = bounded_q(x, FRAC_PI_2).unwrap();
            let q4 = bounded_q(x, FRAC_PI_4).unwrap();
            assert!((q * q - q4).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn domain_checks() {
        assert!(bounded_q(-1.0, FRAC_PI_2).is_err());
        assert!(bounded_q(1.0, 0.0).is_err());
        assert!(bounded_q(1.0, 0.6 * PI).is_err());
    }

    #[test]
    fn monotone_decreasing_in_x() {
        let mut prev = 0.5;
        for i in 1..=10 {
            let v = bounded_q(0.4 * i as f64, FRAC_PI_2).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }
}
