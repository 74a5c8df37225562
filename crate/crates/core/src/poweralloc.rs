//! Optimal split of the total power budget between source and relay.
//!
//! The objective is the high-SNR asymptotic ASER as a function of the
//! source share xi; it blows up at both ends of (0, 1) and is convex in
//! between, so a golden-section pass followed by bisection on the numeric
//! derivative pins the minimizer and certifies stationarity.

use crate::error::{Error, Result};
use crate::modulation::{aser_asym, Constellation};
use crate::relay::RelaySystem;
use crate::specfun::SeriesControl;

/// Result of one power-split optimization.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PowerSolution {
    /// Optimal fraction of P at the source.
    pub xi_opt: f64,
    /// Asymptotic ASER at the optimum.
    pub aser_at_opt: f64,
    /// Objective evaluations spent.
    pub iterations: u32,
    /// |d ASER / d xi| at the solution.
    pub residual: f64,
}

/// Asymptotic ASER with the power split overridden to (xi, 1-xi).
pub fn asym_aser_of_xi(
    sys: &RelaySystem,
    c: &Constellation,
    xi: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::domain("asym_aser_of_xi", format!("xi must lie in (0,1), got {xi}")));
    }
    aser_asym(&sys.with_xi(xi)?, c, ctl)
}

/// Lower end of the analytic bracket on the optimal share,
/// 2 mu_sd / (2 mu_sd + mu_rd).
pub fn xi_lower_bound(sys: &RelaySystem) -> Result<f64> {
    let (sd, _, rd) = sys
        .scenario1()
        .ok_or_else(|| Error::unsupported("xi_lower_bound", "requires scenario 1"))?;
    Ok(2.0 * sd.mu / (2.0 * sd.mu + rd.mu))
}

/// Minimize the asymptotic ASER over xi in (0, 1).
pub fn optimize_xi(
    sys: &RelaySystem,
    c: &Constellation,
    tol: f64,
    ctl: &SeriesControl,
) -> Result<PowerSolution> {
    if !(tol > 0.0) {
        return Err(Error::domain("optimize_xi", "tol must be positive"));
    }
    const EDGE: f64 = 1e-6;
    let evals = std::cell::Cell::new(0u32);
    let f = |xi: f64| -> Result<f64> {
        evals.set(evals.get() + 1);
        let v = asym_aser_of_xi(sys, c, xi, ctl)?;
        if !v.is_finite() {
            return Err(Error::non_convergence(
                "optimize_xi",
                format!("objective not finite at xi={xi}"),
            ));
        }
        Ok(v)
    };

    // Golden section on [EDGE, 1-EDGE].
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (EDGE, 1.0 - EDGE);
    let mut c1 = hi - ratio * (hi - lo);
    let mut c2 = lo + ratio * (hi - lo);
    let mut f1 = f(c1)?;
    let mut f2 = f(c2)?;
    while hi - lo > 0.5 * tol {
        if f1 <= f2 {
            hi = c2;
            c2 = c1;
            f2 = f1;
            c1 = hi - ratio * (hi - lo);
            f1 = f(c1)?;
        } else {
            lo = c1;
            c1 = c2;
            f1 = f2;
            c2 = lo + ratio * (hi - lo);
            f2 = f(c2)?;
        }
    }
    let golden = 0.5 * (lo + hi);

    // Refine by bisection on the numeric first derivative, when a sign
    // change brackets the stationary point. If the derivative does not
    // change sign in the window (minimizer hugging the feasibility edge),
    // the golden result stands.
    let h = (0.05 * tol).max(1e-9);
    let deriv = |xi: f64| -> Result<f64> { Ok((f(xi + h)? - f(xi - h)?) / (2.0 * h)) };
    let lo_w = (golden - 50.0 * tol).max(EDGE + h);
    let hi_w = (golden + 50.0 * tol).min(1.0 - EDGE - h);
    let mut xi_opt = golden;
    if deriv(lo_w)? < 0.0 && deriv(hi_w)? > 0.0 {
        let (mut a, mut b) = (lo_w, hi_w);
        let mut da = deriv(a)?;
        while b - a > tol {
            let m = 0.5 * (a + b);
            let dm = deriv(m)?;
            if dm.signum() == da.signum() {
                a = m;
                da = dm;
            } else {
                b = m;
            }
        }
        xi_opt = 0.5 * (a + b);
    }

    let aser_at_opt = f(xi_opt)?;
    let residual = deriv(xi_opt)?.abs();
    Ok(PowerSolution { xi_opt, aser_at_opt, iterations: evals.get(), residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{EtaMuParams, FadingParams, KappaMuParams};
    use crate::relay::LinkBudget;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    fn table_system(
        mu_sdsr: f64,
        eta_sdsr: f64,
        mu_rd: f64,
        kappa_rd: f64,
        omega_rd: f64,
    ) -> RelaySystem {
        let em = |eta, mu| FadingParams::EtaMu(EtaMuParams::new(eta, mu).unwrap());
        let km = |kappa, mu| FadingParams::KappaMu(KappaMuParams::new(kappa, mu).unwrap());
        RelaySystem::with_rate(
            LinkBudget::new(em(eta_sdsr, mu_sdsr), 1.0).unwrap(),
            LinkBudget::new(em(eta_sdsr, mu_sdsr), 1.0).unwrap(),
            LinkBudget::new(km(kappa_rd, mu_rd), omega_rd).unwrap(),
            crate::db_to_linear(40.0),
            0.5,
            1.0,
        )
        .unwrap()
    }

    fn rqam42() -> Constellation {
        Constellation::Rqam { mi: 4, mq: 2, beta: 1.0 }
    }

    #[test]
    fn objective_matches_equal_split_asym() {
        let sys = table_system(1.0, 1.0, 1.0, 1.0, 1.0);
        let direct = aser_asym(&sys.with_xi(0.5).unwrap(), &rqam42(), &ctl()).unwrap();
        let via = asym_aser_of_xi(&sys, &rqam42(), 0.5, &ctl()).unwrap();
        assert!((direct - via).abs() <= 1e-12 * direct);
    }

    #[test]
    fn objective_is_convex_on_grid() {
        let sys = table_system(1.0, 0.5, 1.5, 2.0, 1.0);
        let n = 19;
        let mut v = Vec::new();
        for i in 0..=n {
            let xi = 0.05 + 0.9 * i as f64 / n as f64;
            v.push(asym_aser_of_xi(&sys, &rqam42(), xi, &ctl()).unwrap());
        }
        for w in v.windows(3) {
            let second = w[2] - 2.0 * w[1] + w[0];
            assert!(second >= -1e-9 * w[1].abs(), "second difference {second}");
        }
    }

    #[test]
    fn reproduces_reference_split_values() {
        // Equal-variance row: mu_sd = mu_sr = mu_rd = 1, eta = kappa = 1
        // has its optimum near 0.6668 at 40 dB.
        let sys = table_system(1.0, 1.0, 1.0, 1.0, 1.0);
        let sol = optimize_xi(&sys, &rqam42(), 1e-6, &ctl()).unwrap();
        assert!((sol.xi_opt - 0.6668).abs() < 1e-3, "xi = {}", sol.xi_opt);
        assert!(sol.residual.abs() < 1e-3 * sol.aser_at_opt / 1e-6);
    }

    #[test]
    fn solution_is_inside_analytic_bracket() {
        let sys = table_system(0.5, 0.01, 1.0, 1.0, 1.0);
        let sol = optimize_xi(&sys, &rqam42(), 1e-6, &ctl()).unwrap();
        let lo = xi_lower_bound(&sys).unwrap();
        assert!(sol.xi_opt > lo - 1e-6 && sol.xi_opt < 1.0, "{} vs {lo}", sol.xi_opt);
    }

    #[test]
    fn omega_sd_does_not_move_the_optimum() {
        let mut sys = table_system(1.0, 1.0, 1.0, 1.0, 1.0);
        let s1 = optimize_xi(&sys, &rqam42(), 1e-6, &ctl()).unwrap();
        sys.sd.omega = 100.0;
        let s2 = optimize_xi(&sys, &rqam42(), 1e-6, &ctl()).unwrap();
        assert!((s1.xi_opt - s2.xi_opt).abs() < 2e-6, "{} vs {}", s1.xi_opt, s2.xi_opt);
    }

    #[test]
    fn optimality_certificate() {
        let sys = table_system(1.0, 1.0, 1.0, 4.0, 10.0);
        let tol = 1e-6;
        let sol = optimize_xi(&sys, &rqam42(), tol, &ctl()).unwrap();
        let at = sol.aser_at_opt;
        let up = asym_aser_of_xi(&sys, &rqam42(), sol.xi_opt + 10.0 * tol, &ctl()).unwrap();
        let dn = asym_aser_of_xi(&sys, &rqam42(), sol.xi_opt - 10.0 * tol, &ctl()).unwrap();
        assert!(at <= up && at <= dn, "{at} vs ({dn}, {up})");
    }
}
