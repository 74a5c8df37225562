//! Monte Carlo validation of the analytic ASER chain.
//!
//! Two estimators:
//!
//! * semi-analytic — sample the three link SNRs, apply the decode
//!   threshold, and average the conditional SER at the MRC output SNR;
//! * symbol level — run the full two-slot baseband protocol: complex
//!   fading draws, AWGN, SNR-threshold decoding at the relay, MRC
//!   combining with perfect CSI, and minimum-distance detection on the
//!   explicit constellation grid.
//!
//! Reproducibility contract: trial i draws from its own counter-based
//! ChaCha substream (seed = master_seed, stream = i), so results are
//! bit-identical for a given (seed, trials) regardless of the worker
//! count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{standard_normal, GainSampler};
use crate::error::{Error, Result};
use crate::modulation::{conditional_from_terms, ser_terms, Constellation};
use crate::relay::RelaySystem;
use crate::specfun::{QuadControl, SeriesControl};

/// Which estimator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimMode {
    SemiAnalytic,
    SymbolLevel,
}

impl std::str::FromStr for SimMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "semi-analytic" | "semi_analytic" | "semi" => Ok(SimMode::SemiAnalytic),
            "symbol-level" | "symbol_level" | "symbol" => Ok(SimMode::SymbolLevel),
            other => Err(Error::Config(format!(
                "unknown simulation mode '{other}' (expected semi-analytic or symbol-level)"
            ))),
        }
    }
}

/// Simulation budget and reproducibility knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub master_seed: u64,
    pub n_trials: u64,
    pub mode: SimMode,
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { master_seed: 1, n_trials: 100_000, mode: SimMode::SemiAnalytic, workers: 1 }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trials < 1 {
            return Err(Error::domain("sim_config", "n_trials must be at least 1"));
        }
        if self.workers < 1 {
            return Err(Error::domain("sim_config", "workers must be at least 1"));
        }
        Ok(())
    }
}

/// Estimate plus its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimResult {
    pub aser_hat: f64,
    pub stderr: f64,
    /// Symbol errors counted (symbol level) or the rounded expected error
    /// count (semi-analytic).
    pub n_errors: u64,
    /// Wall-clock seconds.
    pub elapsed: f64,
}

/// Per-trial substream: deterministic in (seed, trial index) alone.
fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Partial sums that merge associatively across workers.
#[derive(Default, Clone, Copy)]
struct Accum {
    sum: f64,
    sumsq: f64,
    errors: u64,
}

impl Accum {
    fn merge(self, other: Accum) -> Accum {
        Accum {
            sum: self.sum + other.sum,
            sumsq: self.sumsq + other.sumsq,
            errors: self.errors + other.errors,
        }
    }
}

fn split_ranges(n: u64, workers: usize) -> Vec<(u64, u64)> {
    let w = workers.max(1) as u64;
    let chunk = n.div_ceil(w);
    (0..w)
        .map(|k| (k * chunk, ((k + 1) * chunk).min(n)))
        .filter(|(a, b)| a < b)
        .collect()
}

fn run_trials<F>(n: u64, workers: usize, body: F) -> Accum
where
    F: Fn(u64, &mut Accum) + Sync,
{
    let ranges = split_ranges(n, workers);
    if ranges.len() <= 1 {
        let mut acc = Accum::default();
        for i in 0..n {
            body(i, &mut acc);
        }
        return acc;
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(a, b)| {
                let body = &body;
                scope.spawn(move || {
                    let mut acc = Accum::default();
                    for i in a..b {
                        body(i, &mut acc);
                    }
                    acc
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation worker panicked"))
            .fold(Accum::default(), Accum::merge)
    })
}

/// Dispatch on `cfg.mode`.
pub fn simulate(
    sys: &RelaySystem,
    c: &Constellation,
    cfg: &SimConfig,
    ctl: &SeriesControl,
) -> Result<SimResult> {
    match cfg.mode {
        SimMode::SemiAnalytic => simulate_semi_analytic(sys, c, cfg, ctl),
        SimMode::SymbolLevel => simulate_symbol_level(sys, c, cfg, ctl),
    }
}

/// Sample link SNRs, apply the decode threshold, average the conditional SER.
pub fn simulate_semi_analytic(
    sys: &RelaySystem,
    c: &Constellation,
    cfg: &SimConfig,
    ctl: &SeriesControl,
) -> Result<SimResult> {
    cfg.validate()?;
    let start = std::time::Instant::now();
    let terms = ser_terms(c)?;
    let s_sd = GainSampler::auto(&sys.sd.fading, sys.gbar_sd(), ctl)?;
    let s_sr = GainSampler::auto(&sys.sr.fading, sys.gbar_sr(), ctl)?;
    let s_rd = GainSampler::auto(&sys.rd.fading, sys.gbar_rd(), ctl)?;
    let gamma_th = sys.gamma_th;
    let direct_only = sys.direct_only;
    // The conditional SER only needs to be accurate well below the Monte
    // Carlo noise floor; 1e-9 keeps the inner quadrature to one panel.
    let qctl = QuadControl { rel_tol: 1e-9, ..Default::default() };

    let acc = run_trials(cfg.n_trials, cfg.workers, |trial, acc| {
        let mut rng = trial_rng(cfg.master_seed, trial);
        let g_sd = s_sd.sample(&mut rng);
        let g_sr = s_sr.sample(&mut rng);
        let g_rd = s_rd.sample(&mut rng);
        let relays = !direct_only && g_sr > gamma_th;
        let g_t = g_sd + if relays { g_rd } else { 0.0 };
        let p = conditional_from_terms(&terms, g_t, &qctl).unwrap_or(1.0);
        acc.sum += p;
        acc.sumsq += p * p;
    });

    let n = cfg.n_trials as f64;
    let mean = acc.sum / n;
    let var = ((acc.sumsq - n * mean * mean) / (n - 1.0).max(1.0)).max(0.0);
    Ok(SimResult {
        aser_hat: mean,
        stderr: (var / n).sqrt(),
        n_errors: acc.sum.round() as u64,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// Full two-slot baseband simulation with MRC and minimum-distance detection.
pub fn simulate_symbol_level(
    sys: &RelaySystem,
    c: &Constellation,
    cfg: &SimConfig,
    ctl: &SeriesControl,
) -> Result<SimResult> {
    cfg.validate()?;
    let start = std::time::Instant::now();
    let points = c.points()?;
    // Channel gain samplers at unit transmit power: mean |alpha|^2 = Omega.
    let a_sd = GainSampler::auto(&sys.sd.fading, sys.sd.omega, ctl)?;
    let a_sr = GainSampler::auto(&sys.sr.fading, sys.sr.omega, ctl)?;
    let a_rd = GainSampler::auto(&sys.rd.fading, sys.rd.omega, ctl)?;
    let p_s = sys.xi * sys.total_snr; // P_s / N0
    let p_r = (1.0 - sys.xi) * sys.total_snr; // P_r / N0
    let gamma_th = sys.gamma_th;
    let direct_only = sys.direct_only;

    let acc = run_trials(cfg.n_trials, cfg.workers, |trial, acc| {
        let mut rng = trial_rng(cfg.master_seed, trial);
        let sym = (rng.gen::<u64>() % points.len() as u64) as usize;
        let (xr, xi) = points[sym];

        // Complex fading draws: cluster-construction amplitude, uniform phase.
        let mut coeff = |s: &GainSampler| {
            let amp = s.sample(&mut rng).sqrt();
            let ph = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
            (amp * ph.cos(), amp * ph.sin())
        };
        let (hsd_r, hsd_i) = coeff(&a_sd);
        let (hsr_r, hsr_i) = coeff(&a_sr);
        let (hrd_r, hrd_i) = coeff(&a_rd);

        // Slot 1: source broadcast (noise normalized to unit variance).
        let rt2 = std::f64::consts::FRAC_1_SQRT_2;
        let sq_ps = p_s.sqrt();
        let y_sd_r = sq_ps * (hsd_r * xr - hsd_i * xi) + rt2 * standard_normal(&mut rng);
        let y_sd_i = sq_ps * (hsd_r * xi + hsd_i * xr) + rt2 * standard_normal(&mut rng);

        // Relay decode test on the sr SNR.
        let g_sr = (hsr_r * hsr_r + hsr_i * hsr_i) * p_s;
        let relays = !direct_only && g_sr > gamma_th;

        // MRC accumulators: sum of sqrt(P) h* y and of P |h|^2.
        let mut num_r = sq_ps * (hsd_r * y_sd_r + hsd_i * y_sd_i);
        let mut num_i = sq_ps * (hsd_r * y_sd_i - hsd_i * y_sd_r);
        let mut den = p_s * (hsd_r * hsd_r + hsd_i * hsd_i);

        if relays && p_r > 0.0 {
            let sq_pr = p_r.sqrt();
            let y_rd_r = sq_pr * (hrd_r * xr - hrd_i * xi) + rt2 * standard_normal(&mut rng);
            let y_rd_i = sq_pr * (hrd_r * xi + hrd_i * xr) + rt2 * standard_normal(&mut rng);
            num_r += sq_pr * (hrd_r * y_rd_r + hrd_i * y_rd_i);
            num_i += sq_pr * (hrd_r * y_rd_i - hrd_i * y_rd_r);
            den += p_r * (hrd_r * hrd_r + hrd_i * hrd_i);
        }

        let (rr, ri) = if den > 0.0 { (num_r / den, num_i / den) } else { (0.0, 0.0) };
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (idx, &(pr, pi)) in points.iter().enumerate() {
            let d = (rr - pr) * (rr - pr) + (ri - pi) * (ri - pi);
            if d < best_d {
                best_d = d;
                best = idx;
            }
        }
        if best != sym {
            acc.errors += 1;
        }
    });

    let n = cfg.n_trials as f64;
    let p_hat = acc.errors as f64 / n;
    Ok(SimResult {
        aser_hat: p_hat,
        stderr: (p_hat * (1.0 - p_hat) / n).sqrt(),
        n_errors: acc.errors,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// Symbol-level SER at a fixed (non-faded) SNR: the AWGN-only sanity check
/// that validates the conditional SER expressions independently.
pub fn simulate_awgn_ser(
    c: &Constellation,
    gamma: f64,
    n_trials: u64,
    master_seed: u64,
) -> Result<SimResult> {
    if !(gamma > 0.0) {
        return Err(Error::domain("simulate_awgn_ser", "gamma must be positive"));
    }
    let start = std::time::Instant::now();
    let points = c.points()?;
    let sigma = (0.5 / gamma).sqrt();
    let acc = run_trials(n_trials, 1, |trial, acc| {
        let mut rng = trial_rng(master_seed, trial);
        let sym = (rng.gen::<u64>() % points.len() as u64) as usize;
        let (xr, xi) = points[sym];
        let rr = xr + sigma * standard_normal(&mut rng);
        let ri = xi + sigma * standard_normal(&mut rng);
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (idx, &(pr, pi)) in points.iter().enumerate() {
            let d = (rr - pr) * (rr - pr) + (ri - pi) * (ri - pi);
            if d < best_d {
                best_d = d;
                best = idx;
            }
        }
        if best != sym {
            acc.errors += 1;
        }
    });
    let n = n_trials as f64;
    let p_hat = acc.errors as f64 / n;
    Ok(SimResult {
        aser_hat: p_hat,
        stderr: (p_hat * (1.0 - p_hat) / n).sqrt(),
        n_errors: acc.errors,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{EtaMuParams, FadingParams, KappaMuParams};
    use crate::relay::LinkBudget;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    fn fig_system(db: f64) -> RelaySystem {
        let em = FadingParams::EtaMu(EtaMuParams::new(1.0, 2.0).unwrap());
        let km = FadingParams::KappaMu(KappaMuParams::new(2.0, 2.0).unwrap());
        RelaySystem::with_rate(
            LinkBudget::new(em, 1.0).unwrap(),
            LinkBudget::new(em, 1.0).unwrap(),
            LinkBudget::new(km, 1.0).unwrap(),
            crate::db_to_linear(db),
            0.5,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let sys = fig_system(10.0);
        let c = Constellation::Rqam { mi: 4, mq: 2, beta: 1.0 };
        let base = SimConfig { master_seed: 42, n_trials: 4000, mode: SimMode::SymbolLevel, workers: 1 };
        // Repeat runs are bit-identical; error counts are worker-invariant
        // because every trial has its own substream and counting is an
        // integer (associative) merge.
        let r1 = simulate(&sys, &c, &base, &ctl()).unwrap();
        let r1b = simulate(&sys, &c, &base, &ctl()).unwrap();
        assert_eq!(r1.n_errors, r1b.n_errors);
        assert_eq!(r1.aser_hat, r1b.aser_hat);
        let r4 = simulate(&sys, &c, &SimConfig { workers: 4, ..base }, &ctl()).unwrap();
        assert_eq!(r1.n_errors, r4.n_errors);
        assert_eq!(r1.aser_hat, r4.aser_hat);

        // Semi-analytic sums are f64; same-config reruns are bit-identical,
        // different worker counts agree to accumulation roundoff.
        let semi = SimConfig { mode: SimMode::SemiAnalytic, ..base };
        let s1 = simulate_semi_analytic(&sys, &c, &semi, &ctl()).unwrap();
        let s1b = simulate_semi_analytic(&sys, &c, &semi, &ctl()).unwrap();
        assert_eq!(s1.aser_hat, s1b.aser_hat);
        let s4 = simulate_semi_analytic(&sys, &c, &SimConfig { workers: 4, ..semi }, &ctl()).unwrap();
        assert!((s1.aser_hat - s4.aser_hat).abs() <= 1e-12 * s1.aser_hat.abs());
    }

    #[test]
    fn awgn_ser_matches_conditional_formula() {
        // Fixed-SNR symbol simulation against the analytic conditional SER.
        for (c, gamma) in [
            (Constellation::Rqam { mi: 4, mq: 2, beta: 1.0 }, 8.0),
            (Constellation::Xqam { m: 32 }, 20.0),
            (Constellation::Bpsk, 2.0),
        ] {
            let mc = simulate_awgn_ser(&c, gamma, 200_000, 7).unwrap();
            let exact = crate::modulation::conditional_ser(&c, gamma).unwrap();
            let dev = (mc.aser_hat - exact).abs();
            assert!(
                dev < 3.5 * mc.stderr.max(1e-6),
                "{}: mc {} vs exact {} (3.5 sigma {})",
                c.name(),
                mc.aser_hat,
                exact,
                3.5 * mc.stderr
            );
        }
    }

    #[test]
    fn relay_outage_fraction_matches_analytic_outage() {
        use rand::SeedableRng;
        let sys = fig_system(10.0);
        let sampler = GainSampler::auto(&sys.sr.fading, sys.gbar_sr(), &ctl()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let n = 200_000;
        let mut below = 0u64;
        for _ in 0..n {
            if sampler.sample(&mut rng) <= sys.gamma_th {
                below += 1;
            }
        }
        let frac = below as f64 / n as f64;
        let a = sys.outage_prob_sr(&ctl()).unwrap();
        let se = (a * (1.0 - a) / n as f64).sqrt();
        assert!((frac - a).abs() < 4.0 * se, "{frac} vs {a} (se {se})");
    }

    #[test]
    fn semi_analytic_close_to_closed_form() {
        let sys = fig_system(15.0);
        let c = Constellation::Rqam { mi: 4, mq: 2, beta: 1.0 };
        let cfg = SimConfig { master_seed: 3, n_trials: 150_000, mode: SimMode::SemiAnalytic, workers: 4 };
        let mc = simulate(&sys, &c, &cfg, &ctl()).unwrap();
        let closed = crate::modulation::aser_exact(&sys, &c, &ctl()).unwrap();
        assert!(
            (mc.aser_hat - closed).abs() < 3.5 * mc.stderr,
            "mc {} vs closed {closed} (sigma {})",
            mc.aser_hat,
            mc.stderr
        );
    }

    #[test]
    fn infinite_threshold_reduces_to_direct_link() {
        let sys = RelaySystem { gamma_th: f64::INFINITY, ..fig_system(12.0) };
        let direct = fig_system(12.0).set_direct_only(true);
        let c = Constellation::Bpsk;
        let cfg = SimConfig { master_seed: 9, n_trials: 20_000, mode: SimMode::SemiAnalytic, workers: 2 };
        let a = simulate(&sys, &c, &cfg, &ctl()).unwrap();
        let b = simulate(&direct, &c, &cfg, &ctl()).unwrap();
        // Identical substreams, identical gating: estimates agree exactly.
        assert_eq!(a.aser_hat, b.aser_hat);
    }

    #[test]
    fn outage_trials_ignore_rd_draw() {
        // With the relay always in outage, changing the rd fading must not
        // change any trial's contribution.
        let base = RelaySystem { gamma_th: f64::INFINITY, ..fig_system(12.0) };
        let mut other = base;
        other.rd.fading = FadingParams::KappaMu(KappaMuParams::new(9.0, 1.0).unwrap());
        let c = Constellation::Rqam { mi: 4, mq: 2, beta: 1.0 };
        let cfg = SimConfig { master_seed: 11, n_trials: 10_000, mode: SimMode::SemiAnalytic, workers: 1 };
        let a = simulate(&base, &c, &cfg, &ctl()).unwrap();
        let b = simulate(&other, &c, &cfg, &ctl()).unwrap();
        assert_eq!(a.aser_hat, b.aser_hat);
    }

    #[test]
    fn stderr_shrinks_like_inverse_sqrt_n() {
        let sys = fig_system(8.0);
        let c = Constellation::Bpsk;
        let mk = |n| SimConfig { master_seed: 13, n_trials: n, mode: SimMode::SemiAnalytic, workers: 2 };
        let r1 = simulate(&sys, &c, &mk(20_000), &ctl()).unwrap();
        let r4 = simulate(&sys, &c, &mk(80_000), &ctl()).unwrap();
        let ratio = r1.stderr / r4.stderr;
        assert!((ratio - 2.0).abs() < 0.4, "ratio {ratio}");
    }

    #[test]
    fn mode_parse() {
        assert_eq!("semi-analytic".parse::<SimMode>().unwrap(), SimMode::SemiAnalytic);
        assert_eq!("symbol-level".parse::<SimMode>().unwrap(), SimMode::SymbolLevel);
        assert!("nope".parse::<SimMode>().is_err());
    }
}
