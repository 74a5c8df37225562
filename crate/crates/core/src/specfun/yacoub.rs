//! Yacoub's integral Y_v(a, b), the survival-function kernel of the eta-mu
//! SNR distribution, evaluated through its Phi_2 solution
//!
//!   Y_v(a, b) = 1 - (1-a^2)^v b^{4v}
//!               Phi_2(v, v; 1+2v; -(1+a) b^2, -(1-a) b^2) / Gamma(1+2v).
//!
//! The complement 1 - Y is exposed separately because it is the quantity the
//! outage probability needs, and toward the high-SNR tail it is
//! exponentially close to 1 while Y itself underflows.
//!
//! When Y is so small that the Phi_2 route has no absolute precision left
//! (the log of the complement lands inside its own rounding noise), or when
//! b is so large that the transformed series would need more shells than
//! the budget allows, Y is integrated directly from its defining tail
//! integral instead; the integrand is evaluated in log space with the
//! normalized Bessel kernel, so it is exact all the way into underflow.

use crate::error::{Error, Result};

use super::bessel::ln_bessel_i_norm;
use super::gamma::ln_gamma;
use super::lauricella::{lauricella_phi2_ln, SeriesControl};
use super::quad;

fn check_domain(nu: f64, a: f64, b: f64) -> Result<()> {
    if !(nu > 0.0) {
        return Err(Error::domain("yacoub_y", "nu must be positive"));
    }
    if !(a.abs() < 1.0) {
        return Err(Error::domain("yacoub_y", format!("|a| must be < 1, got {a}")));
    }
    if !(b >= 0.0) {
        return Err(Error::domain("yacoub_y", "b must be nonnegative"));
    }
    Ok(())
}

/// Direct quadrature of the defining tail integral,
///   Y = [2^{3/2-v} sqrt(pi) (1-a^2)^v / Gamma(v)]
///       int_b^inf x^{4v-1} e^{-x^2} Inorm_{v-1/2}(a x^2) dx,
/// with the a^{v-1/2} prefactor cancelled against the Bessel kernel so the
/// a -> 0 limit is regular.
fn tail_quadrature(nu: f64, a: f64, b: f64, ctl: &SeriesControl) -> Result<f64> {
    let ln_pref = (1.5 - nu) * std::f64::consts::LN_2
        + 0.5 * std::f64::consts::PI.ln()
        + nu * (1.0 - a * a).ln()
        - ln_gamma(nu);
    let qctl = ctl.quad();
    let v = quad::integrate_semi_inf(
        |x| {
            if x <= 0.0 {
                return 0.0;
            }
            let ln = (4.0 * nu - 1.0) * x.ln() - x * x
                + ln_bessel_i_norm(nu - 0.5, a * x * x)
                + ln_pref;
            ln.exp()
        },
        b,
        &qctl,
    )?;
    Ok(v.clamp(0.0, 1.0))
}

/// ln(1 - Y_v(a, b)); keeps relative accuracy when the complement is
/// exponentially small (the high-SNR outage tail).
pub fn ln_yacoub_complement(nu: f64, a: f64, b: f64, ctl: &SeriesControl) -> Result<f64> {
    check_domain(nu, a, b)?;
    if b == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let b2 = b * b;
    // Shell budget of the transformed Phi_2 series scales with |x1| + |x2|
    // = 2 b^2; beyond it, or when the complement is within floating noise
    // of 1, fall back to the defining integral for Y itself.
    if 2.0 * b2 <= 0.5 * ctl.max_terms as f64 {
        let ln_phi2 =
            lauricella_phi2_ln(nu, nu, 1.0 + 2.0 * nu, -(1.0 + a) * b2, -(1.0 - a) * b2, ctl)?;
        let ln_c =
            nu * (1.0 - a * a).ln() + 4.0 * nu * b.ln() - ln_gamma(1.0 + 2.0 * nu) + ln_phi2;
        if ln_c <= -1e-6 {
            return Ok(ln_c.min(0.0));
        }
    }
    let y = tail_quadrature(nu, a, b, ctl)?;
    Ok((-y).ln_1p())
}

/// Y_v(a, b) in [0, 1].
pub fn yacoub_y(nu: f64, a: f64, b: f64, ctl: &SeriesControl) -> Result<f64> {
    check_domain(nu, a, b)?;
    if b == 0.0 {
        return Ok(1.0);
    }
    let ln_c = ln_yacoub_complement(nu, a, b, ctl)?;
    if ln_c > -1e-4 {
        // Complement hugging 1: recover Y from the tail integral so the
        // subtraction does not eat it.
        return tail_quadrature(nu, a, b, ctl);
    }
    Ok((1.0 - ln_c.exp()).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn unit_at_zero_threshold() {
        for &(nu, a) in &[(0.5, 0.0), (1.0, 0.3), (2.5, -0.7)] {
            assert_eq!(yacoub_y(nu, a, 0.0, &ctl()).unwrap(), 1.0);
        }
    }

    #[test]
    fn rayleigh_special_case_is_exp_tail() {
        // nu = 1/2, a = 0: Y = exp(-b^2).
        for &b in &[0.2, 1.0, 2.0, 3.0] {
            let y = yacoub_y(0.5, 0.0, b, &ctl()).unwrap();
            let expect = (-(b * b) as f64).exp();
            assert!((y - expect).abs() < 1e-12, "b={b}: {y} vs {expect}");
        }
    }

    #[test]
    fn matches_tail_quadrature_at_moderate_arguments() {
        for &(nu, a, b) in &[(0.5f64, 0.0f64, 1.0f64), (1.5, 0.6, 0.8), (2.0, -0.4, 1.7)] {
            let y = yacoub_y(nu, a, b, &ctl()).unwrap();
            let q = tail_quadrature(nu, a, b, &ctl()).unwrap();
            assert!((y - q).abs() < 1e-9, "nu={nu} a={a} b={b}: {y} vs {q}");
        }
    }

    #[test]
    fn vanishes_at_large_threshold() {
        let y = yacoub_y(0.75, 0.4, 20.0, &ctl()).unwrap();
        assert!(y < 1e-12, "{y}");
        // Far beyond the series budget the tail integral takes over.
        let y = yacoub_y(2.0, 0.4, 1e4, &ctl()).unwrap();
        assert_eq!(y, 0.0);
    }

    #[test]
    fn nonincreasing_in_b() {
        let mut prev = 1.0;
        for i in 0..40 {
            let b = 0.15 * i as f64;
            let y = yacoub_y(1.3, -0.5, b, &ctl()).unwrap();
            assert!(y <= prev + 1e-12, "b={b}");
            prev = y;
        }
    }

    #[test]
    fn domain_errors() {
        assert!(yacoub_y(1.0, 1.0, 1.0, &ctl()).is_err());
        assert!(yacoub_y(0.0, 0.5, 1.0, &ctl()).is_err());
        assert!(yacoub_y(1.0, 0.5, -1.0, &ctl()).is_err());
    }
}
