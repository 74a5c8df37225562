//! Dual-hop decode-and-forward system composition.
//!
//! Link budgets, the source-relay decode outage probability, the end-to-end
//! MGF of the MRC output SNR, and the closed-form building blocks of every
//! ASER expression: the trigonometric MGF integrals
//!
//!   I1(x, phi) = (1/pi) int_0^phi M_sd(x^2 / (2 sin^2 t)) dt
//!   I2(x, phi) = (1/pi) int_0^phi M_sd(.) M_rd(.) dt
//!
//! in the three angle variants phi = pi/2, arccot(y/x), arctan(y/z), their
//! high-SNR asymptotic counterparts, and the adaptive-quadrature evaluator
//! that serves both as the oracle for the closed forms and as the only ASER
//! path for mixed-fading scenarios without closed forms.

use serde::{Deserialize, Serialize};

use crate::channel::{fading_cdf, EtaMuParams, FadingParams, KappaMuParams};
use crate::error::{Error, Result};
use crate::specfun::{
    beta, lauricella_fd, lauricella_phi1, ln_gamma, quad, SeriesControl,
};

use std::f64::consts::{FRAC_PI_2, PI};

/// One directed link: fading model, channel variance, and the share of the
/// total power its transmitter gets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub fading: FadingParams,
    pub omega: f64,
    pub power_share: f64,
}

impl LinkBudget {
    pub fn new(fading: FadingParams, omega: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::domain("link_budget", format!("omega must be positive, got {omega}")));
        }
        Ok(LinkBudget { fading, omega, power_share: 1.0 })
    }

    /// Mean SNR gbar = Omega * share * (P/N0).
    pub fn gbar(&self, total_snr: f64) -> f64 {
        self.omega * self.power_share * total_snr
    }
}

/// The three-node system: source-destination, source-relay and
/// relay-destination links, total power budget and decode threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaySystem {
    pub sd: LinkBudget,
    pub sr: LinkBudget,
    pub rd: LinkBudget,
    /// P/N0, linear scale.
    pub total_snr: f64,
    /// Fraction of P given to the source; the relay gets 1 - xi.
    pub xi: f64,
    /// Decode threshold on the source-relay SNR.
    pub gamma_th: f64,
    /// Suppress the relay entirely (outage forced certain).
    #[serde(default)]
    pub direct_only: bool,
}

impl RelaySystem {
    pub fn new(
        sd: LinkBudget,
        sr: LinkBudget,
        rd: LinkBudget,
        total_snr: f64,
        xi: f64,
        gamma_th: f64,
    ) -> Result<Self> {
        if !total_snr.is_finite() || total_snr <= 0.0 {
            return Err(Error::domain("relay_system", "total SNR must be positive"));
        }
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::domain("relay_system", format!("xi must lie in [0,1], got {xi}")));
        }
        if !(gamma_th >= 0.0) {
            return Err(Error::domain("relay_system", "gamma_th must be nonnegative"));
        }
        let mut sys =
            RelaySystem { sd, sr, rd, total_snr, xi, gamma_th, direct_only: false };
        sys.apply_power_split();
        Ok(sys)
    }

    /// Same, with gamma_th = 2^{2R} - 1 from the spectral efficiency R.
    pub fn with_rate(
        sd: LinkBudget,
        sr: LinkBudget,
        rd: LinkBudget,
        total_snr: f64,
        xi: f64,
        rate: f64,
    ) -> Result<Self> {
        if !(rate > 0.0) {
            return Err(Error::domain("relay_system", "rate must be positive"));
        }
        Self::new(sd, sr, rd, total_snr, xi, (2f64).powf(2.0 * rate) - 1.0)
    }

    /// Both source-fed links transmit with share xi, the relay with 1 - xi.
    fn apply_power_split(&mut self) {
        self.sd.power_share = self.xi;
        self.sr.power_share = self.xi;
        self.rd.power_share = 1.0 - self.xi;
    }

    pub fn with_total_snr(&self, total_snr: f64) -> Self {
        RelaySystem { total_snr, ..*self }
    }

    pub fn with_xi(&self, xi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::domain("relay_system", format!("xi must lie in [0,1], got {xi}")));
        }
        let mut sys = RelaySystem { xi, ..*self };
        sys.apply_power_split();
        Ok(sys)
    }

    pub fn set_direct_only(mut self, on: bool) -> Self {
        self.direct_only = on;
        self
    }

    pub fn gbar_sd(&self) -> f64 {
        self.sd.gbar(self.total_snr)
    }
    pub fn gbar_sr(&self) -> f64 {
        self.sr.gbar(self.total_snr)
    }
    pub fn gbar_rd(&self) -> f64 {
        self.rd.gbar(self.total_snr)
    }

    pub fn mgf_sd(&self, z: f64) -> Result<f64> {
        self.sd.fading.mgf(z, self.gbar_sd())
    }
    pub fn mgf_rd(&self, z: f64) -> Result<f64> {
        self.rd.fading.mgf(z, self.gbar_rd())
    }

    /// Scenario-1 typing: sd and sr eta-mu, rd kappa-mu (the closed-form path).
    pub fn scenario1(&self) -> Option<(&EtaMuParams, &EtaMuParams, &KappaMuParams)> {
        match (&self.sd.fading, &self.sr.fading, &self.rd.fading) {
            (FadingParams::EtaMu(sd), FadingParams::EtaMu(sr), FadingParams::KappaMu(rd)) => {
                Some((sd, sr, rd))
            }
            _ => None,
        }
    }

    /// Decode-outage probability of the source-relay hop,
    /// A_sr = F_{gamma_sr}(gamma_th).
    pub fn outage_prob_sr(&self, ctl: &SeriesControl) -> Result<f64> {
        if self.direct_only {
            return Ok(1.0);
        }
        fading_cdf(&self.sr.fading, self.gamma_th, self.gbar_sr(), ctl)
    }

    /// High-SNR approximation of the decode-outage probability.
    pub fn outage_prob_sr_asym(&self) -> Result<f64> {
        if self.direct_only {
            return Ok(1.0);
        }
        let sr = self.sr.fading.as_eta_mu().ok_or_else(|| {
            Error::unsupported("outage_prob_sr_asym", "closed form requires an eta-mu sr link")
        })?;
        let mu = sr.mu;
        let ln = 2.0 * mu * (2.0 * mu * sr.h.sqrt() * self.gamma_th / self.gbar_sr()).ln()
            - ln_gamma(2.0 * mu + 1.0);
        Ok(ln.exp())
    }

    /// MGF of the MRC output SNR:
    ///   A_sr M_sd(z) + (1 - A_sr) M_sd(z) M_rd(z).
    pub fn end_to_end_mgf(&self, z: f64, ctl: &SeriesControl) -> Result<f64> {
        let a = self.outage_prob_sr(ctl)?;
        let msd = self.mgf_sd(z)?;
        if a >= 1.0 {
            return Ok(msd);
        }
        let mrd = self.mgf_rd(z)?;
        Ok(a * msd + (1.0 - a) * msd * mrd)
    }
}

/// Upper limit of the trigonometric integrals, parameterized the way the
/// closed forms consume it: by the defining side lengths, not the angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiSpec {
    /// phi = pi/2.
    HalfPi,
    /// phi = arccot(y / x) where x is the integral's own first argument.
    Arccot { y: f64 },
    /// phi = arctan(y / z).
    Arctan { y: f64, z: f64 },
}

impl PhiSpec {
    /// The angle in radians, given the companion argument x.
    pub fn angle(&self, x: f64) -> f64 {
        match *self {
            PhiSpec::HalfPi => FRAC_PI_2,
            PhiSpec::Arccot { y } => (x / y).atan(),
            PhiSpec::Arctan { y, z } => (y / z).atan(),
        }
    }

    fn validate(&self, op: &'static str, x: f64) -> Result<()> {
        if !(x > 0.0) {
            return Err(Error::domain(op, format!("x must be positive, got {x}")));
        }
        match *self {
            PhiSpec::HalfPi => Ok(()),
            PhiSpec::Arccot { y } if y > 0.0 => Ok(()),
            PhiSpec::Arctan { y, z } if y > 0.0 && z > 0.0 => Ok(()),
            _ => Err(Error::domain(op, "auxiliary lengths must be positive")),
        }
    }
}

/// Adaptive-quadrature evaluation of (1/pi) int_0^phi M(x^2/(2 sin^2 t)) dt.
///
/// This is the universal oracle for the closed forms below and the only
/// ASER path for fading scenarios without closed forms.
pub fn mgf_theta_quadrature<M: Fn(f64) -> f64>(
    mgf: M,
    x: f64,
    phi: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("mgf_theta_quadrature", "x must be positive"));
    }
    if !(phi > 0.0 && phi <= FRAC_PI_2 + 1e-12) {
        return Err(Error::domain("mgf_theta_quadrature", "phi must lie in (0, pi/2]"));
    }
    let half_x2 = 0.5 * x * x;
    let qctl = quad::QuadControl { rel_tol: (0.5 * ctl.rel_tol).max(1e-12), ..ctl.quad() };
    let v = quad::integrate(
        |theta: f64| {
            let s = theta.sin();
            if s <= 0.0 {
                return 0.0;
            }
            mgf(half_x2 / (s * s))
        },
        0.0,
        phi.min(FRAC_PI_2),
        &qctl,
    )?;
    Ok(v / PI)
}

// ---------------------------------------------------------------------------
// Exact closed forms
// ---------------------------------------------------------------------------

/// I1(x, phi): the direct-path integral over the eta-mu MGF.
pub fn i1_exact(
    x: f64,
    phi: PhiSpec,
    sd: &EtaMuParams,
    gbar_sd: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    phi.validate("i1_exact", x)?;
    let (mu, h, bh) = (sd.mu, sd.h, sd.big_h);
    let am = 4.0 * mu * (h - bh); // 4 mu (h - H)
    let ap = 4.0 * mu * (h + bh);
    match phi {
        PhiSpec::HalfPi => {
            let x2g = x * x * gbar_sd;
            let pref = (ln_gamma(2.0 * mu + 0.5) - ln_gamma(2.0 * mu + 1.0)).exp()
                / (2.0 * PI.sqrt())
                * crate::channel::eta_mu_mgf(sd, 0.5 * x * x, gbar_sd)?;
            let fd = lauricella_fd(
                0.5,
                &[mu, mu],
                2.0 * mu + 1.0,
                &[am / (am + x2g), ap / (ap + x2g)],
                ctl,
            )?;
            Ok(pref * fd)
        }
        PhiSpec::Arccot { y } => {
            let s2 = x * x + y * y;
            let pref = x * y * crate::channel::eta_mu_mgf(sd, 0.5 * s2, gbar_sd)?
                / (2.0 * PI * s2 * (2.0 * mu + 0.5));
            let fd = lauricella_fd(
                1.0,
                &[1.0, mu, mu],
                2.0 * mu + 1.5,
                &[
                    x * x / s2,
                    (am + x * x * gbar_sd) / (am + s2 * gbar_sd),
                    (ap + x * x * gbar_sd) / (ap + s2 * gbar_sd),
                ],
                ctl,
            )?;
            Ok(pref * fd)
        }
        PhiSpec::Arctan { y, z } => {
            let y2 = y * y;
            let s2 = y2 + z * z;
            let arg = x * x * s2 / (2.0 * y2);
            let pref = y * z * crate::channel::eta_mu_mgf(sd, arg, gbar_sd)?
                / (2.0 * PI * s2 * (2.0 * mu + 0.5));
            let fd = lauricella_fd(
                1.0,
                &[1.0, mu, mu],
                2.0 * mu + 1.5,
                &[
                    y2 / s2,
                    (am * y2 + x * x * y2 * gbar_sd) / (am * y2 + x * x * s2 * gbar_sd),
                    (ap * y2 + x * x * y2 * gbar_sd) / (ap * y2 + x * x * s2 * gbar_sd),
                ],
                ctl,
            )?;
            Ok(pref * fd)
        }
    }
}

/// I2(x, phi): the relayed-path integral over the product of the eta-mu and
/// kappa-mu MGFs.
pub fn i2_exact(
    x: f64,
    phi: PhiSpec,
    sd: &EtaMuParams,
    gbar_sd: f64,
    rd: &KappaMuParams,
    gbar_rd: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    phi.validate("i2_exact", x)?;
    let (mu1, h, bh) = (sd.mu, sd.h, sd.big_h);
    let (kappa, mu2) = (rd.kappa, rd.mu);
    let b2 = 2.0 * mu2 * (1.0 + kappa); // 2 B
    let am = 4.0 * mu1 * (h - bh);
    let ap = 4.0 * mu1 * (h + bh);
    let a_param = 2.0 * mu1 + mu2 + 0.5;

    match phi {
        PhiSpec::HalfPi => {
            let d = b2 + x * x * gbar_rd;
            let beta_c = b2 / d;
            let ln_pref = -mu2 * kappa
                + ln_gamma(a_param)
                - ln_gamma(a_param + 0.5)
                - 0.5 * PI.ln()
                - std::f64::consts::LN_2
                + x.ln()
                + mu2 * b2.ln()
                + 2.0 * mu1 * (4.0 * mu1 * h.sqrt() * gbar_rd / gbar_sd).ln()
                + 0.5 * gbar_rd.ln()
                - a_param * d.ln();
            let phi1 = lauricella_phi1(
                a_param,
                &[1.0, mu1, mu1],
                a_param + 0.5,
                &[
                    beta_c,
                    (b2 * gbar_sd - am * gbar_rd) / (gbar_sd * d),
                    (b2 * gbar_sd - ap * gbar_rd) / (gbar_sd * d),
                ],
                mu2 * kappa * beta_c,
                ctl,
            )?;
            Ok(ln_pref.exp() * phi1)
        }
        PhiSpec::Arccot { y } => {
            let s2 = x * x + y * y;
            let d = b2 + s2 * gbar_rd;
            let beta_c = b2 / d;
            let ln_pref = -mu2 * kappa + x.ln() + 0.5 * gbar_rd.ln()
                + mu2 * b2.ln()
                + 2.0 * mu1 * (4.0 * mu1 * h.sqrt() * gbar_rd / gbar_sd).ln()
                - (2.0 * PI * a_param).ln()
                - a_param * d.ln();
            let phi1 = lauricella_phi1(
                a_param,
                &[1.0, 0.5, mu1, mu1],
                a_param + 1.0,
                &[
                    beta_c,
                    (b2 + x * x * gbar_rd) / d,
                    (b2 * gbar_sd - am * gbar_rd) / (gbar_sd * d),
                    (b2 * gbar_sd - ap * gbar_rd) / (gbar_sd * d),
                ],
                mu2 * kappa * beta_c,
                ctl,
            )?;
            Ok(ln_pref.exp() * phi1)
        }
        PhiSpec::Arctan { y, z } => {
            let y2 = y * y;
            let s2 = y2 + z * z;
            let d = b2 * y2 + x * x * s2 * gbar_rd;
            let beta_c = b2 * y2 / d;
            let ln_pref = -mu2 * kappa + (x * y).ln() + 0.5 * gbar_rd.ln()
                + mu2 * (b2 * y2).ln()
                + 2.0 * mu1 * (4.0 * mu1 * h.sqrt() * y2 * gbar_rd / gbar_sd).ln()
                - (2.0 * PI * a_param).ln()
                - a_param * d.ln();
            let phi1 = lauricella_phi1(
                a_param,
                &[1.0, 0.5, mu1, mu1],
                a_param + 1.0,
                &[
                    beta_c,
                    (b2 * y2 + x * x * y2 * gbar_rd) / d,
                    y2 * (b2 * gbar_sd - am * gbar_rd) / (gbar_sd * d),
                    y2 * (b2 * gbar_sd - ap * gbar_rd) / (gbar_sd * d),
                ],
                mu2 * kappa * beta_c,
                ctl,
            )?;
            Ok(ln_pref.exp() * phi1)
        }
    }
}

// ---------------------------------------------------------------------------
// High-SNR asymptotic forms
// ---------------------------------------------------------------------------

/// I1 under the high-SNR MGF approximation.
pub fn i1_asym(
    x: f64,
    phi: PhiSpec,
    sd: &EtaMuParams,
    gbar_sd: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    phi.validate("i1_asym", x)?;
    let (mu, h) = (sd.mu, sd.h);
    let two_mu = 2.0 * mu;
    match phi {
        PhiSpec::HalfPi => {
            let ln = two_mu * (4.0 * mu * h.sqrt() / (x * x * gbar_sd)).ln();
            Ok(beta(0.5, two_mu + 0.5) / (2.0 * PI) * ln.exp())
        }
        PhiSpec::Arccot { y } => {
            let s2 = x * x + y * y;
            let w = x * x / s2;
            let ln = two_mu * (4.0 * mu * h.sqrt() / (s2 * gbar_sd)).ln();
            let fd = lauricella_fd(1.0, &[two_mu + 1.0], two_mu + 1.5, &[w], ctl)?;
            Ok(ln.exp() * x * y / (2.0 * PI * s2) * beta(1.0, two_mu + 0.5) * fd)
        }
        PhiSpec::Arctan { y, z } => {
            let y2 = y * y;
            let s2 = y2 + z * z;
            let w = y2 / s2;
            let ln = two_mu * (4.0 * mu * h.sqrt() * y2 / (x * x * s2 * gbar_sd)).ln();
            let fd = lauricella_fd(1.0, &[two_mu + 1.0], two_mu + 1.5, &[w], ctl)?;
            Ok(ln.exp() * z * y / (2.0 * PI * s2) * beta(1.0, two_mu + 0.5) * fd)
        }
    }
}

/// I2 under the high-SNR MGF approximations of both hops.
pub fn i2_asym(
    x: f64,
    phi: PhiSpec,
    sd: &EtaMuParams,
    gbar_sd: f64,
    rd: &KappaMuParams,
    gbar_rd: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    phi.validate("i2_asym", x)?;
    let (mu1, h) = (sd.mu, sd.h);
    let (kappa, mu2) = (rd.kappa, rd.mu);
    let two_mu1 = 2.0 * mu1;
    let rho = two_mu1 + mu2;
    match phi {
        PhiSpec::HalfPi => {
            let ln = two_mu1 * (4.0 * mu1 * h.sqrt() / (x * x * gbar_sd)).ln()
                + mu2 * (2.0 * mu2 * (1.0 + kappa) / (x * x * gbar_rd)).ln()
                - mu2 * kappa;
            Ok(beta(0.5, rho + 0.5) / (2.0 * PI) * ln.exp())
        }
        PhiSpec::Arccot { y } => {
            let s2 = x * x + y * y;
            let w = x * x / s2;
            let ln = two_mu1 * (4.0 * mu1 * h.sqrt() / (s2 * gbar_sd)).ln()
                + mu2 * (2.0 * mu2 * (1.0 + kappa) / (s2 * gbar_rd)).ln()
                - mu2 * kappa;
            let fd = lauricella_fd(1.0, &[rho + 1.0], rho + 1.5, &[w], ctl)?;
            Ok(ln.exp() * x * y / (2.0 * PI * s2) * beta(1.0, rho + 0.5) * fd)
        }
        PhiSpec::Arctan { y, z } => {
            let y2 = y * y;
            let s2 = y2 + z * z;
            let w = y2 / s2;
            let ln = two_mu1 * (4.0 * mu1 * h.sqrt() * y2 / (x * x * s2 * gbar_sd)).ln()
                + mu2 * (2.0 * mu2 * (1.0 + kappa) * y2 / (x * x * s2 * gbar_rd)).ln()
                - mu2 * kappa;
            let fd = lauricella_fd(1.0, &[rho + 1.0], rho + 1.5, &[w], ctl)?;
            Ok(ln.exp() * z * y / (2.0 * PI * s2) * beta(1.0, rho + 0.5) * fd)
        }
    }
}
