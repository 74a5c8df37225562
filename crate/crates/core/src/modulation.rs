//! Constellations and average symbol error rates.
//!
//! Every supported scheme (general-order RQAM, its SQAM and BPSK special
//! cases, and cross XQAM) reduces to a weighted list of bounded-Q terms
//! `coef * Q(x sqrt(gamma), phi)`. The same term list drives
//!
//! * the conditional SER in AWGN (through `bounded_q`),
//! * the exact ASER (each term averaged by the closed-form I1/I2 appendix
//!   integrals, mixed by the decode-outage probability),
//! * the theta-quadrature ASER used for scenarios without closed forms and
//!   as the oracle, and
//! * the high-SNR asymptotic ASER (I1/I2 replaced by their power-law
//!   limits),
//!
//! so the coefficients cannot drift between the four paths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relay::{
    i1_asym, i1_exact, i2_asym, i2_exact, mgf_theta_quadrature, PhiSpec, RelaySystem,
};
use crate::specfun::{bounded_q_with, QuadControl, SeriesControl};

/// Rectangular QAM: M_I x M_Q points with quadrature-to-in-phase decision
/// distance ratio beta = d_Q/d_I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RqamSpec {
    pub m_i: u32,
    pub m_q: u32,
    pub beta: f64,
    /// 1 - 1/M_I.
    pub p: f64,
    /// 1 - 1/M_Q.
    pub q: f64,
    /// In-phase half-distance factor sqrt(6 / ((M_I^2-1) + (M_Q^2-1) beta^2)).
    pub a: f64,
    /// Quadrature factor b = beta a.
    pub b: f64,
}

impl RqamSpec {
    pub fn new(m_i: u32, m_q: u32, beta: f64) -> Result<Self> {
        if m_i < 1 || m_q < 1 || m_i * m_q < 2 {
            return Err(Error::domain("rqam", "need M_I * M_Q >= 2 constellation points"));
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::domain("rqam", "beta must be finite and nonnegative"));
        }
        if beta == 0.0 && m_q != 1 {
            return Err(Error::domain("rqam", "beta = 0 is only meaningful for M_Q = 1"));
        }
        let mi2 = (m_i * m_i - 1) as f64;
        let mq2 = (m_q * m_q - 1) as f64;
        let denom = mi2 + mq2 * beta * beta;
        if denom <= 0.0 {
            return Err(Error::domain("rqam", "degenerate energy normalization"));
        }
        let a = (6.0 / denom).sqrt();
        Ok(RqamSpec {
            m_i,
            m_q,
            beta,
            p: 1.0 - 1.0 / m_i as f64,
            q: 1.0 - 1.0 / m_q as f64,
            a,
            b: beta * a,
        })
    }

    pub fn size(&self) -> u32 {
        self.m_i * self.m_q
    }
}

/// Cross QAM of size M = 32, 128, 512, ... (odd power of two >= 32).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XqamSpec {
    pub m: u32,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    /// Number of corner rows: nu = sqrt(2M)/8.
    pub nu: u32,
    pub a0: f64,
}

impl XqamSpec {
    pub fn new(m: u32) -> Result<Self> {
        if m < 32 || !m.is_power_of_two() || m.trailing_zeros() % 2 == 0 {
            return Err(Error::domain(
                "xqam",
                format!("M must be an odd power of two >= 32 (32, 128, 512, ...), got {m}"),
            ));
        }
        let mf = m as f64;
        let s2m = (2.0 * mf).sqrt();
        Ok(XqamSpec {
            m,
            g1: 4.0 - 6.0 / s2m,
            g2: 4.0 / mf,
            g3: 4.0 - 12.0 / s2m + 12.0 / mf,
            nu: (s2m / 8.0).round() as u32,
            a0: (96.0 / (31.0 * mf - 32.0)).sqrt(),
        })
    }

    /// a_k = sqrt(2) k a_0.
    pub fn a_k(&self, k: u32) -> f64 {
        std::f64::consts::SQRT_2 * k as f64 * self.a0
    }
}

/// Modulation scheme selector with the JSON wire format
/// {"type":"rqam","mi":..,"mq":..,"beta":..} | {"type":"sqam","m":..}
/// | {"type":"bpsk"} | {"type":"xqam","m":..}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Constellation {
    Rqam { mi: u32, mq: u32, beta: f64 },
    Sqam { m: u32 },
    Bpsk,
    Xqam { m: u32 },
}

impl Constellation {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Constellation::Rqam { mi, mq, beta } => RqamSpec::new(mi, mq, beta).map(|_| ()),
            Constellation::Sqam { m } => {
                let r = (m as f64).sqrt().round() as u32;
                if r * r != m || m < 4 {
                    return Err(Error::domain("sqam", format!("M must be a square >= 4, got {m}")));
                }
                Ok(())
            }
            Constellation::Bpsk => Ok(()),
            Constellation::Xqam { m } => XqamSpec::new(m).map(|_| ()),
        }
    }

    /// Total constellation size.
    pub fn size(&self) -> Result<u32> {
        self.validate()?;
        Ok(match *self {
            Constellation::Rqam { mi, mq, .. } => mi * mq,
            Constellation::Sqam { m } | Constellation::Xqam { m } => m,
            Constellation::Bpsk => 2,
        })
    }

    /// The equivalent rectangular spec, where one exists.
    pub fn as_rqam(&self) -> Result<RqamSpec> {
        match *self {
            Constellation::Rqam { mi, mq, beta } => RqamSpec::new(mi, mq, beta),
            Constellation::Sqam { m } => {
                self.validate()?;
                let r = (m as f64).sqrt().round() as u32;
                RqamSpec::new(r, r, 1.0)
            }
            Constellation::Bpsk => RqamSpec::new(2, 1, 0.0),
            Constellation::Xqam { .. } => {
                Err(Error::unsupported("constellation", "XQAM has no rectangular equivalent"))
            }
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Constellation::Rqam { mi, mq, .. } => format!("{mi}x{mq}-RQAM"),
            Constellation::Sqam { m } => format!("{m}-SQAM"),
            Constellation::Bpsk => "BPSK".to_string(),
            Constellation::Xqam { m } => format!("{m}-XQAM"),
        }
    }

    /// Unit-average-energy point set (in-phase, quadrature).
    pub fn points(&self) -> Result<Vec<(f64, f64)>> {
        self.validate()?;
        let pts = match *self {
            Constellation::Rqam { mi, mq, beta } => rect_grid(mi, mq, beta),
            Constellation::Sqam { m } => {
                let r = (m as f64).sqrt().round() as u32;
                rect_grid(r, r, 1.0)
            }
            Constellation::Bpsk => rect_grid(2, 1, 0.0),
            Constellation::Xqam { m } => cross_grid(XqamSpec::new(m)?),
        };
        Ok(normalize_energy(pts))
    }
}

fn rect_grid(mi: u32, mq: u32, beta: f64) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity((mi * mq) as usize);
    for i in 1..=mi {
        let re = (2 * i) as f64 - 1.0 - mi as f64;
        for q in 1..=mq {
            let im = ((2 * q) as f64 - 1.0 - mq as f64) * beta;
            pts.push((re, im));
        }
    }
    pts
}

fn cross_grid(spec: XqamSpec) -> Vec<(f64, f64)> {
    // Outer square of side n = (3/4) sqrt(2M) at odd-integer levels, minus
    // nu x nu corner blocks.
    let n = (0.75 * (2.0 * spec.m as f64).sqrt()).round() as i64;
    let corner = (n - 1 - 2 * spec.nu as i64) as f64;
    let mut pts = Vec::with_capacity(spec.m as usize);
    let mut level = -(n - 1);
    while level <= n - 1 {
        let re = level as f64;
        let mut lq = -(n - 1);
        while lq <= n - 1 {
            let im = lq as f64;
            if !(re.abs() > corner && im.abs() > corner) {
                pts.push((re, im));
            }
            lq += 2;
        }
        level += 2;
    }
    debug_assert_eq!(pts.len(), spec.m as usize);
    pts
}

fn normalize_energy(pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let e: f64 =
        pts.iter().map(|(re, im)| re * re + im * im).sum::<f64>() / pts.len() as f64;
    let s = 1.0 / e.sqrt();
    pts.into_iter().map(|(re, im)| (re * s, im * s)).collect()
}

/// One conditional-SER term: coef * Q(x sqrt(gamma), phi).
#[derive(Debug, Clone, Copy)]
pub(crate) struct SerTerm {
    pub coef: f64,
    pub x: f64,
    pub phi: PhiSpec,
}

/// The bounded-Q decomposition of the scheme's conditional SER.
pub(crate) fn ser_terms(c: &Constellation) -> Result<Vec<SerTerm>> {
    match *c {
        Constellation::Rqam { mi, mq, beta } => Ok(rqam_terms(&RqamSpec::new(mi, mq, beta)?)),
        Constellation::Sqam { m } => {
            c.validate()?;
            let mf = m as f64;
            let p = 1.0 - 1.0 / mf.sqrt();
            let a = (3.0 / (mf - 1.0)).sqrt();
            Ok(vec![
                SerTerm { coef: 4.0 * p, x: a, phi: PhiSpec::HalfPi },
                SerTerm { coef: -4.0 * p * p, x: a, phi: PhiSpec::Arccot { y: a } },
            ])
        }
        Constellation::Bpsk => {
            Ok(vec![SerTerm { coef: 1.0, x: std::f64::consts::SQRT_2, phi: PhiSpec::HalfPi }])
        }
        Constellation::Xqam { m } => Ok(xqam_terms(&XqamSpec::new(m)?)),
    }
}

fn rqam_terms(s: &RqamSpec) -> Vec<SerTerm> {
    let mut terms = Vec::with_capacity(4);
    if s.p > 0.0 {
        terms.push(SerTerm { coef: 2.0 * s.p, x: s.a, phi: PhiSpec::HalfPi });
    }
    if s.q > 0.0 {
        terms.push(SerTerm { coef: 2.0 * s.q, x: s.b, phi: PhiSpec::HalfPi });
    }
    if s.p > 0.0 && s.q > 0.0 {
        // Corner overlap; vanishes analytically when either axis is binary
        // by coefficient, and when beta = 0 the b-leg is skipped entirely.
        terms.push(SerTerm {
            coef: -2.0 * s.p * s.q,
            x: s.a,
            phi: PhiSpec::Arccot { y: s.b },
        });
        terms.push(SerTerm {
            coef: -2.0 * s.p * s.q,
            x: s.b,
            phi: PhiSpec::Arctan { y: s.b, z: s.a },
        });
    }
    terms
}

fn xqam_terms(s: &XqamSpec) -> Vec<SerTerm> {
    let mut t = Vec::new();
    t.push(SerTerm { coef: s.g1, x: s.a0, phi: PhiSpec::HalfPi });
    t.push(SerTerm { coef: s.g2, x: s.a_k(1), phi: PhiSpec::HalfPi });
    for k in 1..s.nu {
        t.push(SerTerm {
            coef: -s.g2,
            x: s.a_k(k),
            phi: PhiSpec::Arctan { y: k as f64, z: (k + 1) as f64 },
        });
    }
    for k in 2..=s.nu {
        t.push(SerTerm {
            coef: s.g2,
            x: s.a_k(k),
            phi: PhiSpec::Arctan { y: k as f64, z: (k - 1) as f64 },
        });
    }
    t.push(SerTerm { coef: -s.g3, x: s.a0, phi: PhiSpec::Arccot { y: s.a0 } });
    for k in 1..s.nu {
        t.push(SerTerm {
            coef: -2.0 * s.g2,
            x: s.a0,
            phi: PhiSpec::Arctan { y: 1.0, z: (2 * k + 1) as f64 },
        });
    }
    t
}

fn eval_terms<F>(terms: &[SerTerm], mut f: F) -> Result<f64>
where
    F: FnMut(&SerTerm) -> Result<f64>,
{
    let mut acc = 0.0;
    for t in terms {
        acc += t.coef * f(t)?;
    }
    Ok(acc)
}

fn clamp_prob(op: &'static str, raw: f64) -> f64 {
    if !(-1e-9..=1.0 + 1e-9).contains(&raw) {
        eprintln!("warning: {op} produced {raw:.3e} outside [0,1]; clamping");
    }
    raw.clamp(0.0, 1.0)
}

// ---------------------------------------------------------------------------
// Conditional SER in AWGN
// ---------------------------------------------------------------------------

pub(crate) fn conditional_from_terms(
    terms: &[SerTerm],
    gamma: f64,
    qctl: &QuadControl,
) -> Result<f64> {
    let sq = gamma.sqrt();
    let raw = eval_terms(terms, |t| bounded_q_with(t.x * sq, t.phi.angle(t.x), qctl))?;
    Ok(raw.clamp(0.0, 1.0))
}

/// Conditional SER of rectangular QAM at instantaneous SNR `gamma`.
pub fn rqam_conditional_ser(spec: &RqamSpec, gamma: f64) -> Result<f64> {
    if gamma < 0.0 {
        return Err(Error::domain("rqam_conditional_ser", "gamma must be nonnegative"));
    }
    conditional_from_terms(&rqam_terms(spec), gamma, &QuadControl::default())
}

/// Conditional SER of cross QAM at instantaneous SNR `gamma`.
pub fn xqam_conditional_ser(spec: &XqamSpec, gamma: f64) -> Result<f64> {
    if gamma < 0.0 {
        return Err(Error::domain("xqam_conditional_ser", "gamma must be nonnegative"));
    }
    conditional_from_terms(&xqam_terms(spec), gamma, &QuadControl::default())
}

/// Conditional SER of any supported scheme.
pub fn conditional_ser(c: &Constellation, gamma: f64) -> Result<f64> {
    conditional_ser_with(c, gamma, &QuadControl::default())
}

pub(crate) fn conditional_ser_with(
    c: &Constellation,
    gamma: f64,
    qctl: &QuadControl,
) -> Result<f64> {
    if gamma < 0.0 {
        return Err(Error::domain("conditional_ser", "gamma must be nonnegative"));
    }
    conditional_from_terms(&ser_terms(c)?, gamma, qctl)
}

// ---------------------------------------------------------------------------
// Exact ASER
// ---------------------------------------------------------------------------

/// Exact average SER. Scenario-1 systems (sd, sr eta-mu; rd kappa-mu) go
/// through the closed forms; every other fading mix is averaged by theta
/// quadrature over the end-to-end MGF.
pub fn aser_exact(sys: &RelaySystem, c: &Constellation, ctl: &SeriesControl) -> Result<f64> {
    if sys.scenario1().is_some() {
        aser_closed_form(sys, c, ctl)
    } else {
        aser_via_quadrature(sys, c, ctl)
    }
}

/// Closed-form ASER for scenario-1 systems.
pub fn aser_closed_form(
    sys: &RelaySystem,
    c: &Constellation,
    ctl: &SeriesControl,
) -> Result<f64> {
    let (sd, _, rd) = sys
        .scenario1()
        .ok_or_else(|| Error::unsupported("aser_closed_form", "requires a scenario-1 system"))?;
    let terms = ser_terms(c)?;
    let a = sys.outage_prob_sr(ctl)?;
    let g_sd = sys.gbar_sd();
    let g_rd = sys.gbar_rd();
    let t1 = eval_terms(&terms, |t| i1_exact(t.x, t.phi, sd, g_sd, ctl))?;
    let t2 = if a < 1.0 {
        eval_terms(&terms, |t| i2_exact(t.x, t.phi, sd, g_sd, rd, g_rd, ctl))?
    } else {
        0.0
    };
    Ok(clamp_prob("aser_closed_form", a * t1 + (1.0 - a) * t2))
}

/// ASER by direct quadrature of the conditional SER against the end-to-end
/// MGF, term by term. Valid for every fading scenario; doubles as the
/// oracle for the closed forms.
pub fn aser_via_quadrature(
    sys: &RelaySystem,
    c: &Constellation,
    ctl: &SeriesControl,
) -> Result<f64> {
    let terms = ser_terms(c)?;
    let a = sys.outage_prob_sr(ctl)?;
    let raw = eval_terms(&terms, |t| {
        mgf_theta_quadrature(
            |z| {
                let msd = sys.mgf_sd(z).unwrap_or(0.0);
                if a >= 1.0 {
                    msd
                } else {
                    let mrd = sys.mgf_rd(z).unwrap_or(0.0);
                    a * msd + (1.0 - a) * msd * mrd
                }
            },
            t.x,
            t.phi.angle(t.x),
            ctl,
        )
    })?;
    Ok(clamp_prob("aser_via_quadrature", raw))
}

/// Exact ASER of M-ary SQAM (reduces exactly to RQAM(sqrt M, sqrt M, 1)).
pub fn aser_sqam(sys: &RelaySystem, m: u32, ctl: &SeriesControl) -> Result<f64> {
    aser_exact(sys, &Constellation::Sqam { m }, ctl)
}

/// Exact ASER of BPSK (reduces exactly to RQAM(2, 1, 0)).
pub fn aser_bpsk(sys: &RelaySystem, ctl: &SeriesControl) -> Result<f64> {
    aser_exact(sys, &Constellation::Bpsk, ctl)
}

/// Exact ASER of general-order RQAM.
pub fn aser_rqam(sys: &RelaySystem, spec: &RqamSpec, ctl: &SeriesControl) -> Result<f64> {
    aser_exact(
        sys,
        &Constellation::Rqam { mi: spec.m_i, mq: spec.m_q, beta: spec.beta },
        ctl,
    )
}

/// Exact ASER of cross XQAM.
pub fn aser_xqam(sys: &RelaySystem, spec: &XqamSpec, ctl: &SeriesControl) -> Result<f64> {
    aser_exact(sys, &Constellation::Xqam { m: spec.m }, ctl)
}

// ---------------------------------------------------------------------------
// Asymptotic ASER and diversity order
// ---------------------------------------------------------------------------

/// High-SNR asymptotic ASER (scenario-1 closed form).
pub fn aser_asym(sys: &RelaySystem, c: &Constellation, ctl: &SeriesControl) -> Result<f64> {
    let (sd, _, rd) = sys
        .scenario1()
        .ok_or_else(|| Error::unsupported("aser_asym", "requires a scenario-1 system"))?;
    let terms = ser_terms(c)?;
    let a_inf = sys.outage_prob_sr_asym()?;
    let g_sd = sys.gbar_sd();
    let g_rd = sys.gbar_rd();
    let t1 = eval_terms(&terms, |t| i1_asym(t.x, t.phi, sd, g_sd, ctl))?;
    let t2 = if sys.direct_only {
        0.0
    } else {
        eval_terms(&terms, |t| i2_asym(t.x, t.phi, sd, g_sd, rd, g_rd, ctl))?
    };
    // At high SNR 1 - A_sr ~ 1, so the relayed branch keeps unit weight.
    Ok(a_inf * t1 + t2)
}

/// The two power-law coefficients of the asymptotic ASER,
///   P_inf = E1 (P/N0)^{-2(mu_sd+mu_sr)} + E2 (P/N0)^{-(2 mu_sd + mu_rd)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCoefficients {
    pub e1: f64,
    pub e2: f64,
    /// 2 (mu_sd + mu_sr).
    pub d1: f64,
    /// 2 mu_sd + mu_rd.
    pub d2: f64,
}

impl AsymptoticCoefficients {
    /// Re-evaluate the two-term power law at a total SNR (linear).
    pub fn eval(&self, total_snr: f64) -> f64 {
        self.e1 * total_snr.powf(-self.d1) + self.e2 * total_snr.powf(-self.d2)
    }
}

/// Extract E1/E2 by peeling the known SNR powers off the two asymptotic
/// term groups.
pub fn extract_coefficients(
    sys: &RelaySystem,
    c: &Constellation,
    ctl: &SeriesControl,
) -> Result<AsymptoticCoefficients> {
    let (sd, sr, rd) = sys
        .scenario1()
        .ok_or_else(|| Error::unsupported("extract_coefficients", "requires scenario 1"))?;
    let terms = ser_terms(c)?;
    let a_inf = sys.outage_prob_sr_asym()?;
    let g_sd = sys.gbar_sd();
    let g_rd = sys.gbar_rd();
    let t1 = eval_terms(&terms, |t| i1_asym(t.x, t.phi, sd, g_sd, ctl))?;
    let t2 = if sys.direct_only {
        0.0
    } else {
        eval_terms(&terms, |t| i2_asym(t.x, t.phi, sd, g_sd, rd, g_rd, ctl))?
    };
    let d1 = 2.0 * (sd.mu + sr.mu);
    let d2 = 2.0 * sd.mu + rd.mu;
    Ok(AsymptoticCoefficients {
        e1: a_inf * t1 * sys.total_snr.powf(d1),
        e2: t2 * sys.total_snr.powf(d2),
        d1,
        d2,
    })
}

/// Diversity order 2 mu_sd + min(2 mu_sr, mu_rd) of a scenario-1 system.
pub fn diversity_order(sys: &RelaySystem) -> Result<f64> {
    let (sd, sr, rd) = sys
        .scenario1()
        .ok_or_else(|| Error::unsupported("diversity_order", "requires scenario 1"))?;
    Ok(2.0 * sd.mu + (2.0 * sr.mu).min(rd.mu))
}
