//! eta-mu and kappa-mu fading models (Format 1).
//!
//! Parameter containers, SNR densities, moment generating functions,
//! numeric CDFs, the classical special-case mappings, and random variate
//! samplers. Densities are evaluated in log space so the Bessel growth and
//! the exponential damping cancel before exponentiation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::bessel::ln_bessel_i_norm;
use crate::specfun::quad;
use crate::specfun::yacoub::ln_yacoub_complement;
use crate::specfun::SeriesControl;

use std::f64::consts::{LN_2, PI};

/// eta-mu parameter set, Format 1: eta in (0, inf) is the in-phase to
/// quadrature scattered-power ratio, mu > 0 counts multipath clusters.
/// `h` and `big_h` are the derived shape constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaMuParams {
    pub eta: f64,
    pub mu: f64,
    pub h: f64,
    pub big_h: f64,
}

impl EtaMuParams {
    pub fn new(eta: f64, mu: f64) -> Result<Self> {
        if !eta.is_finite() || eta <= 0.0 {
            return Err(Error::domain("eta_mu", format!("eta must be in (0, inf), got {eta}")));
        }
        if !mu.is_finite() || mu <= 0.0 {
            return Err(Error::domain("eta_mu", format!("mu must be positive, got {mu}")));
        }
        let h = (2.0 + 1.0 / eta + eta) / 4.0;
        let big_h = (1.0 / eta - eta) / 4.0;
        Ok(EtaMuParams { eta, mu, h, big_h })
    }
}

/// kappa-mu parameter set: kappa > 0 is the dominant-to-scattered power
/// ratio, mu > 0 counts multipath clusters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaMuParams {
    pub kappa: f64,
    pub mu: f64,
}

impl KappaMuParams {
    pub fn new(kappa: f64, mu: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa <= 0.0 {
            return Err(Error::domain("kappa_mu", format!("kappa must be positive, got {kappa}")));
        }
        if !mu.is_finite() || mu <= 0.0 {
            return Err(Error::domain("kappa_mu", format!("mu must be positive, got {mu}")));
        }
        Ok(KappaMuParams { kappa, mu })
    }
}

/// Fading model of one link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FadingParamsRepr", into = "FadingParamsRepr")]
pub enum FadingParams {
    EtaMu(EtaMuParams),
    KappaMu(KappaMuParams),
}

/// Wire format: {"type":"eta-mu","eta":..,"mu":..} | {"type":"kappa-mu",...}.
#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum FadingParamsRepr {
    EtaMu {
        eta: f64,
        mu: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        format: Option<u8>,
    },
    KappaMu { kappa: f64, mu: f64 },
}

impl TryFrom<FadingParamsRepr> for FadingParams {
    type Error = Error;
    fn try_from(r: FadingParamsRepr) -> Result<Self> {
        match r {
            FadingParamsRepr::EtaMu { eta, mu, format } => {
                if let Some(f) = format {
                    if f != 1 {
                        return Err(Error::unsupported(
                            "eta_mu",
                            format!("only Format 1 is supported, got format {f}"),
                        ));
                    }
                }
                Ok(FadingParams::EtaMu(EtaMuParams::new(eta, mu)?))
            }
            FadingParamsRepr::KappaMu { kappa, mu } => {
                Ok(FadingParams::KappaMu(KappaMuParams::new(kappa, mu)?))
            }
        }
    }
}

impl From<FadingParams> for FadingParamsRepr {
    fn from(p: FadingParams) -> Self {
        match p {
            FadingParams::EtaMu(p) => {
                FadingParamsRepr::EtaMu { eta: p.eta, mu: p.mu, format: None }
            }
            FadingParams::KappaMu(p) => FadingParamsRepr::KappaMu { kappa: p.kappa, mu: p.mu },
        }
    }
}

fn check_gbar(op: &'static str, gbar: f64) -> Result<()> {
    if !gbar.is_finite() || gbar <= 0.0 {
        return Err(Error::domain(op, format!("mean SNR must be positive, got {gbar}")));
    }
    Ok(())
}

/// SNR density of an eta-mu faded link.
///
/// The Bessel factor is folded into its normalized form I_v(z)/z^v so the
/// expression stays finite and continuous across eta = 1 (where H = 0):
///   f = C * gamma^{2mu-1} exp(-2 mu h gamma / gbar) * Inorm(2 mu H gamma / gbar).
pub fn eta_mu_pdf(p: &EtaMuParams, gamma: f64, gbar: f64) -> Result<f64> {
    check_gbar("eta_mu_pdf", gbar)?;
    if gamma < 0.0 {
        return Err(Error::domain("eta_mu_pdf", "gamma must be nonnegative"));
    }
    let (mu, h, bh) = (p.mu, p.h, p.big_h);
    let pow = 2.0 * mu - 1.0;
    let ln_const = LN_2 + 0.5 * PI.ln() + (mu + 0.5) * mu.ln() + mu * h.ln()
        + (mu - 0.5) * (2.0 * mu / gbar).ln()
        - crate::specfun::ln_gamma(mu)
        - (mu + 0.5) * gbar.ln();
    if gamma == 0.0 {
        return Ok(if pow > 0.0 {
            0.0
        } else if pow == 0.0 {
            (ln_const + ln_bessel_i_norm(mu - 0.5, 0.0)).exp()
        } else {
            f64::INFINITY
        });
    }
    let ln = ln_const + pow * gamma.ln() - 2.0 * mu * h * gamma / gbar
        + ln_bessel_i_norm(mu - 0.5, 2.0 * mu * bh * gamma / gbar);
    Ok(ln.exp())
}

/// SNR density of a kappa-mu faded link (full form, including the Bessel
/// factor; self-consistency with the closed-form MGF is enforced by test).
pub fn kappa_mu_pdf(p: &KappaMuParams, gamma: f64, gbar: f64) -> Result<f64> {
    check_gbar("kappa_mu_pdf", gbar)?;
    if gamma < 0.0 {
        return Err(Error::domain("kappa_mu_pdf", "gamma must be nonnegative"));
    }
    let (kappa, mu) = (p.kappa, p.mu);
    let pow = mu - 1.0;
    let ln_const = mu.ln() + (mu - 1.0) * (2.0 * mu).ln() + mu * (1.0 + kappa).ln()
        - mu * gbar.ln()
        - mu * kappa;
    if gamma == 0.0 {
        return Ok(if pow > 0.0 {
            0.0
        } else if pow == 0.0 {
            (ln_const + ln_bessel_i_norm(mu - 1.0, 0.0)).exp()
        } else {
            f64::INFINITY
        });
    }
    let z = 2.0 * mu * (kappa * (1.0 + kappa) * gamma / gbar).sqrt();
    let ln = ln_const + pow * gamma.ln() - mu * (1.0 + kappa) * gamma / gbar
        + ln_bessel_i_norm(mu - 1.0, z);
    Ok(ln.exp())
}

/// MGF E[exp(-z gamma)] of an eta-mu faded link.
pub fn eta_mu_mgf(p: &EtaMuParams, z: f64, gbar: f64) -> Result<f64> {
    check_gbar("eta_mu_mgf", gbar)?;
    if z < 0.0 {
        return Err(Error::domain("eta_mu_mgf", "z must be nonnegative"));
    }
    let (mu, h, bh) = (p.mu, p.h, p.big_h);
    // The two pole factors are subtracted smallest-first so the value is
    // bitwise invariant under eta <-> 1/eta (which only swaps them).
    let f1 = 2.0 * mu * (h - bh) + z * gbar;
    let f2 = 2.0 * mu * (h + bh) + z * gbar;
    let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
    let ln = mu * ((4.0 * mu * mu * h).ln() - lo.ln() - hi.ln());
    Ok(ln.exp())
}

/// MGF E[exp(-z gamma)] of a kappa-mu faded link.
pub fn kappa_mu_mgf(p: &KappaMuParams, z: f64, gbar: f64) -> Result<f64> {
    check_gbar("kappa_mu_mgf", gbar)?;
    if z < 0.0 {
        return Err(Error::domain("kappa_mu_mgf", "z must be nonnegative"));
    }
    let (kappa, mu) = (p.kappa, p.mu);
    let b = mu * (1.0 + kappa);
    let ln = mu * (b.ln() - (b + z * gbar).ln()) - z * mu * kappa * gbar / (b + z * gbar);
    Ok(ln.exp())
}

impl FadingParams {
    pub fn pdf(&self, gamma: f64, gbar: f64) -> Result<f64> {
        match self {
            FadingParams::EtaMu(p) => eta_mu_pdf(p, gamma, gbar),
            FadingParams::KappaMu(p) => kappa_mu_pdf(p, gamma, gbar),
        }
    }

    pub fn mgf(&self, z: f64, gbar: f64) -> Result<f64> {
        match self {
            FadingParams::EtaMu(p) => eta_mu_mgf(p, z, gbar),
            FadingParams::KappaMu(p) => kappa_mu_mgf(p, z, gbar),
        }
    }

    /// Number of multipath clusters.
    pub fn mu(&self) -> f64 {
        match self {
            FadingParams::EtaMu(p) => p.mu,
            FadingParams::KappaMu(p) => p.mu,
        }
    }

    pub fn as_eta_mu(&self) -> Option<&EtaMuParams> {
        match self {
            FadingParams::EtaMu(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_kappa_mu(&self) -> Option<&KappaMuParams> {
        match self {
            FadingParams::KappaMu(p) => Some(p),
            _ => None,
        }
    }
}

/// P(gamma <= gamma_th). Closed form via Yacoub's integral for eta-mu,
/// numeric integration of the density for kappa-mu.
pub fn fading_cdf(p: &FadingParams, gamma_th: f64, gbar: f64, ctl: &SeriesControl) -> Result<f64> {
    check_gbar("fading_cdf", gbar)?;
    if gamma_th < 0.0 {
        return Err(Error::domain("fading_cdf", "gamma_th must be nonnegative"));
    }
    if gamma_th == 0.0 {
        return Ok(0.0);
    }
    match p {
        FadingParams::EtaMu(p) => {
            let b = (2.0 * p.mu * p.h * gamma_th / gbar).sqrt();
            let a = p.big_h / p.h;
            Ok(ln_yacoub_complement(p.mu, a, b, ctl)?.exp().min(1.0))
        }
        FadingParams::KappaMu(p) => {
            // gamma = t^k substitution removes the integrable singularity of
            // the gamma^{mu-1} prefactor when mu < 1.
            let k = (1.0 / p.mu).ceil().max(1.0);
            let qctl = ctl.quad();
            let v = quad::integrate(
                |t| {
                    let g = t.powf(k);
                    let f = kappa_mu_pdf(p, g, gbar).unwrap_or(0.0);
                    if f == 0.0 {
                        0.0
                    } else {
                        k * t.powf(k - 1.0) * f
                    }
                },
                0.0,
                gamma_th.powf(1.0 / k),
                &qctl,
            )?;
            Ok(v.clamp(0.0, 1.0))
        }
    }
}

/// Classical single-parameter special cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassicalFading {
    /// Hoyt (Nakagami-q), q in (0, 1].
    Hoyt { q: f64 },
    /// Nakagami-m, m >= 0.5, via the eta-mu embedding.
    Nakagami { m: f64 },
    /// Rice with K-factor K > 0, via the kappa-mu embedding.
    Rice { k: f64 },
    Rayleigh,
}

/// Map a classical model onto its generalized parameter set.
pub fn special_case(c: ClassicalFading) -> Result<FadingParams> {
    match c {
        ClassicalFading::Hoyt { q } => {
            if !(q > 0.0 && q <= 1.0) {
                return Err(Error::domain("special_case", format!("hoyt q must be in (0,1], got {q}")));
            }
            Ok(FadingParams::EtaMu(EtaMuParams::new(q * q, 0.5)?))
        }
        ClassicalFading::Nakagami { m } => {
            if !(m >= 0.5) {
                return Err(Error::domain("special_case", format!("nakagami m must be >= 0.5, got {m}")));
            }
            Ok(FadingParams::EtaMu(EtaMuParams::new(1.0, m / 2.0)?))
        }
        ClassicalFading::Rice { k } => {
            if !(k > 0.0) {
                return Err(Error::domain("special_case", format!("rice K must be positive, got {k}")));
            }
            Ok(FadingParams::KappaMu(KappaMuParams::new(k, 1.0)?))
        }
        ClassicalFading::Rayleigh => Ok(FadingParams::EtaMu(EtaMuParams::new(1.0, 0.5)?)),
    }
}

/// One standard normal draw (Marsaglia polar method).
pub(crate) fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = 2.0 * rng.gen::<f64>() - 1.0;
        let v: f64 = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// Draw one SNR sample through the physical Gaussian-cluster construction.
///
/// Requires 2*mu integer for eta-mu, mu integer for kappa-mu; other shapes
/// have no finite Gaussian decomposition and must go through
/// [`GainSampler::inverse_cdf`].
pub fn sample_power_gain<R: Rng + ?Sized>(
    p: &FadingParams,
    gbar: f64,
    rng: &mut R,
) -> Result<f64> {
    check_gbar("sample_power_gain", gbar)?;
    let sampler = GainSampler::physical(p, gbar)?;
    Ok(sampler.sample(rng))
}

fn near_integer(x: f64) -> Option<u32> {
    let r = x.round();
    if (x - r).abs() < 1e-9 && r >= 1.0 && r < 1e6 {
        Some(r as u32)
    } else {
        None
    }
}

/// Random variate generator for the power gain of one fading link.
#[derive(Debug, Clone)]
pub enum GainSampler {
    /// Sum of 2*mu Gaussian cluster pairs with variance ratio eta.
    EtaMuPhysical { eta: f64, clusters: u32, scale: f64 },
    /// Sum of mu noncentral Gaussian pairs with per-cluster offset sqrt(kappa).
    KappaMuPhysical { kappa: f64, clusters: u32, scale: f64 },
    /// Tabulated inverse CDF on a log grid (any real mu).
    InverseCdf { gammas: Vec<f64>, cdf: Vec<f64> },
}

impl GainSampler {
    /// Physical construction; errors for parameter shapes it cannot express.
    pub fn physical(p: &FadingParams, gbar: f64) -> Result<Self> {
        check_gbar("sampler", gbar)?;
        match p {
            FadingParams::EtaMu(p) => {
                let clusters = near_integer(2.0 * p.mu).ok_or_else(|| {
                    Error::unsupported(
                        "sample_power_gain",
                        format!(
                            "eta-mu physical sampler needs 2*mu integer (mu={}); use the inverse-CDF sampler",
                            p.mu
                        ),
                    )
                })?;
                let scale = gbar / (clusters as f64 * (p.eta + 1.0));
                Ok(GainSampler::EtaMuPhysical { eta: p.eta, clusters, scale })
            }
            FadingParams::KappaMu(p) => {
                let clusters = near_integer(p.mu).ok_or_else(|| {
                    Error::unsupported(
                        "sample_power_gain",
                        format!(
                            "kappa-mu physical sampler needs mu integer (mu={}); use the inverse-CDF sampler",
                            p.mu
                        ),
                    )
                })?;
                let scale = gbar / (2.0 * clusters as f64 * (1.0 + p.kappa));
                Ok(GainSampler::KappaMuPhysical { kappa: p.kappa, clusters, scale })
            }
        }
    }

    /// Inverse-transform sampler on a 4096-point log grid.
    pub fn inverse_cdf(p: &FadingParams, gbar: f64, ctl: &SeriesControl) -> Result<Self> {
        check_gbar("sampler", gbar)?;
        const N: usize = 4096;
        // Find an upper end holding all but ~1e-10 of the mass.
        let mut hi = 10.0 * gbar;
        for _ in 0..60 {
            if fading_cdf(p, hi, gbar, ctl)? > 1.0 - 1e-10 {
                break;
            }
            hi *= 2.0;
        }
        let lo = gbar * 1e-9;
        let ratio = (hi / lo).ln() / (N as f64 - 1.0);
        let mut gammas = Vec::with_capacity(N + 1);
        let mut cdf = Vec::with_capacity(N + 1);
        gammas.push(0.0);
        cdf.push(0.0);
        let qctl = ctl.quad();
        let mut acc = 0.0;
        let mut prev = 0.0;
        for i in 0..N {
            let g = lo * ((i as f64) * ratio).exp();
            acc += quad::integrate(|t| p.pdf(t, gbar).unwrap_or(0.0), prev, g, &qctl)?;
            gammas.push(g);
            cdf.push(acc.min(1.0));
            prev = g;
        }
        Ok(GainSampler::InverseCdf { gammas, cdf })
    }

    /// Physical when the parameters admit it, inverse-CDF otherwise.
    pub fn auto(p: &FadingParams, gbar: f64, ctl: &SeriesControl) -> Result<Self> {
        match Self::physical(p, gbar) {
            Ok(s) => Ok(s),
            Err(Error::Unsupported { .. }) => Self::inverse_cdf(p, gbar, ctl),
            Err(e) => Err(e),
        }
    }

    /// One power-gain draw with mean equal to the construction `gbar`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            GainSampler::EtaMuPhysical { eta, clusters, scale } => {
                let sx = eta.sqrt();
                let mut acc = 0.0;
                for _ in 0..*clusters {
                    let x = sx * standard_normal(rng);
                    let y = standard_normal(rng);
                    acc += x * x + y * y;
                }
                acc * scale
            }
            GainSampler::KappaMuPhysical { kappa, clusters, scale } => {
                let d = kappa.sqrt();
                let mut acc = 0.0;
                for _ in 0..*clusters {
                    let x = standard_normal(rng) + d;
                    let y = standard_normal(rng) + d;
                    acc += x * x + y * y;
                }
                acc * scale
            }
            GainSampler::InverseCdf { gammas, cdf } => {
                let u: f64 = rng.gen();
                match cdf.binary_search_by(|c| c.total_cmp(&u)) {
                    Ok(i) => gammas[i],
                    Err(i) => {
                        if i == 0 {
                            gammas[0]
                        } else if i >= cdf.len() {
                            *gammas.last().unwrap()
                        } else {
                            let (c0, c1) = (cdf[i - 1], cdf[i]);
                            let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.0 };
                            gammas[i - 1] + t * (gammas[i] - gammas[i - 1])
                        }
                    }
                }
            }
        }
    }
}
