//! JSON scenario configuration and sweep plumbing shared by the CLI.
//!
//! Schema (defaults in brackets):
//!
//! ```json
//! {
//!   "system": {
//!     "links": {
//!       "sd": {"fading": {"type":"eta-mu","eta":1.0,"mu":2.0}, "omega": 1.0},
//!       "sr": {"fading": {"type":"eta-mu","eta":1.0,"mu":2.0}, "omega": 1.0},
//!       "rd": {"fading": {"type":"kappa-mu","kappa":2.0,"mu":2.0}, "omega": 1.0}
//!     },
//!     "total_snr_db": 20.0,
//!     "sweep": {"snr_start_db": 0, "snr_stop_db": 40, "snr_step_db": 2},
//!     "xi": 0.5,          // [0.5]
//!     "rate": 1.0         // [1.0]; or "gamma_th": 3.0
//!   },
//!   "constellation": {"type":"rqam","mi":4,"mq":2,"beta":1.0},
//!   "sim": {"seed": 1, "trials": 100000, "mode": "semi-analytic", "workers": 1}
//! }
//! ```
//!
//! dB is the only unit at this boundary; everything behind it is linear.

use serde::{Deserialize, Serialize};

use crate::channel::FadingParams;
use crate::error::{Error, Result};
use crate::mcsim::{SimConfig, SimMode};
use crate::modulation::Constellation;
use crate::relay::{LinkBudget, RelaySystem};

fn default_omega() -> f64 {
    1.0
}
fn default_xi() -> f64 {
    0.5
}
fn default_seed() -> u64 {
    1
}
fn default_trials() -> u64 {
    100_000
}
fn default_mode() -> SimMode {
    SimMode::SemiAnalytic
}
fn default_workers() -> usize {
    1
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LinkConfig {
    pub fading: FadingParams,
    #[serde(default = "default_omega")]
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LinksConfig {
    pub sd: LinkConfig,
    pub sr: LinkConfig,
    pub rd: LinkConfig,
}

/// SNR sweep grid in dB of P/N0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub snr_start_db: f64,
    pub snr_stop_db: f64,
    pub snr_step_db: f64,
    #[serde(default)]
    pub outputs: Vec<OutputKind>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputKind {
    Exact,
    Asymptotic,
    Montecarlo,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.snr_step_db > 0.0) {
            return Err(Error::Config(format!(
                "sweep: snr_step_db must be positive, got {}",
                self.snr_step_db
            )));
        }
        if self.snr_stop_db < self.snr_start_db {
            return Err(Error::Config("sweep: snr_stop_db must be >= snr_start_db".into()));
        }
        Ok(())
    }

    /// Inclusive dB grid; a start == stop sweep yields one point.
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.snr_stop_db - self.snr_start_db) / self.snr_step_db + 1e-9).floor()
            as usize;
        (0..=n).map(|i| self.snr_start_db + i as f64 * self.snr_step_db).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemConfig {
    pub links: LinksConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_snr_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_th: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SimSettings {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_mode")]
    pub mode: SimMode,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

impl Default for SimSettings {
    fn default() -> Self {
        SimSettings {
            seed: default_seed(),
            trials: default_trials(),
            mode: default_mode(),
            workers: default_workers(),
        }
    }
}

impl From<SimSettings> for SimConfig {
    fn from(s: SimSettings) -> SimConfig {
        SimConfig { master_seed: s.seed, n_trials: s.trials, mode: s.mode, workers: s.workers }
    }
}

/// One complete scenario: system, modulation, simulation settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub system: SystemConfig,
    pub constellation: Constellation,
    #[serde(default)]
    pub sim: SimSettings,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| {
            Error::Config(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.constellation.validate()?;
        if let Some(sweep) = &self.system.sweep {
            sweep.validate()?;
        }
        if self.system.rate.is_some() && self.system.gamma_th.is_some() {
            return Err(Error::Config(
                "system: specify either rate or gamma_th, not both".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.system.xi) {
            return Err(Error::Config(format!("system: xi must lie in [0,1], got {}", self.system.xi)));
        }
        // Construct once to surface link/fading domain errors early.
        self.build_system_at_db(self.reference_db()?)?;
        Ok(())
    }

    /// The dB point a single-shot command runs at.
    pub fn reference_db(&self) -> Result<f64> {
        if let Some(db) = self.system.total_snr_db {
            return Ok(db);
        }
        if let Some(sweep) = &self.system.sweep {
            return Ok(sweep.snr_start_db);
        }
        Err(Error::Config("system: need total_snr_db or sweep".into()))
    }

    /// The dB grid a sweep command walks (a lone total_snr_db is a
    /// single-point grid).
    pub fn sweep_grid(&self) -> Result<Vec<f64>> {
        if let Some(sweep) = &self.system.sweep {
            sweep.validate()?;
            return Ok(sweep.grid());
        }
        if let Some(db) = self.system.total_snr_db {
            return Ok(vec![db]);
        }
        Err(Error::Config("system: need sweep or total_snr_db".into()))
    }

    pub fn gamma_th(&self) -> f64 {
        if let Some(g) = self.system.gamma_th {
            g
        } else {
            let rate = self.system.rate.unwrap_or(1.0);
            (2f64).powf(2.0 * rate) - 1.0
        }
    }

    pub fn build_system_at_db(&self, snr_db: f64) -> Result<RelaySystem> {
        let l = &self.system.links;
        RelaySystem::new(
            LinkBudget::new(l.sd.fading, l.sd.omega)?,
            LinkBudget::new(l.sr.fading, l.sr.omega)?,
            LinkBudget::new(l.rd.fading, l.rd.omega)?,
            crate::db_to_linear(snr_db),
            self.system.xi,
            self.gamma_th(),
        )
    }

    pub fn sim_config(&self) -> SimConfig {
        self.sim.into()
    }
}

/// One row of a sweep: the CSV unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AserPoint {
    pub snr_db: f64,
    pub aser_exact: Option<f64>,
    pub aser_asym: Option<f64>,
    pub mc_aser: Option<f64>,
    pub mc_stderr: Option<f64>,
}

impl AserPoint {
    pub fn csv_header(outputs: &[OutputKind]) -> String {
        let mut cols = vec!["snr_db"];
        if outputs.contains(&OutputKind::Exact) {
            cols.push("aser_exact");
        }
        if outputs.contains(&OutputKind::Asymptotic) {
            cols.push("aser_asym");
        }
        if outputs.contains(&OutputKind::Montecarlo) {
            cols.push("mc_aser");
            cols.push("mc_stderr");
        }
        cols.join(",")
    }

    pub fn csv_row(&self, outputs: &[OutputKind]) -> String {
        let fmt = |v: Option<f64>| match v {
            Some(v) => format!("{v:.10e}"),
            None => String::new(),
        };
        let mut cols = vec![format!("{}", self.snr_db)];
        if outputs.contains(&OutputKind::Exact) {
            cols.push(fmt(self.aser_exact));
        }
        if outputs.contains(&OutputKind::Asymptotic) {
            cols.push(fmt(self.aser_asym));
        }
        if outputs.contains(&OutputKind::Montecarlo) {
            cols.push(fmt(self.mc_aser));
            cols.push(fmt(self.mc_stderr));
        }
        cols.join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const EXAMPLE: &str = r#"{
        "system": {
            "links": {
                "sd": {"fading": {"type": "eta-mu", "eta": 1.0, "mu": 2.0}},
                "sr": {"fading": {"type": "eta-mu", "eta": 1.0, "mu": 2.0}},
                "rd": {"fading": {"type": "kappa-mu", "kappa": 2.0, "mu": 2.0}}
            },
            "sweep": {"snr_start_db": 0, "snr_stop_db": 30, "snr_step_db": 5}
        },
        "constellation": {"type": "rqam", "mi": 4, "mq": 2, "beta": 1.0}
    }"#;

    #[test]
    fn parses_with_defaults() {
        let cfg = ScenarioConfig::from_json(EXAMPLE).unwrap();
        assert_eq!(cfg.system.xi, 0.5);
        assert_eq!(cfg.system.links.sd.omega, 1.0);
        assert_eq!(cfg.gamma_th(), 3.0); // R = 1 default
        assert_eq!(cfg.sweep_grid().unwrap().len(), 7);
        let sys = cfg.build_system_at_db(10.0).unwrap();
        assert!((sys.gbar_sd() - 5.0).abs() < 1e-12); // 10 dB * xi
    }

    #[test]
    fn round_trips_through_serde() {
        let cfg = ScenarioConfig::from_json(EXAMPLE).unwrap();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let again = ScenarioConfig::from_json(&text).unwrap();
        assert_eq!(again.system.xi, cfg.system.xi);
        assert_eq!(again.constellation, cfg.constellation);
        assert_eq!(again.sweep_grid().unwrap(), cfg.sweep_grid().unwrap());
    }

    #[test]
    fn rejects_conflicting_threshold_spec() {
        let mut cfg = ScenarioConfig::from_json(EXAMPLE).unwrap();
        cfg.system.rate = Some(1.0);
        cfg.system.gamma_th = Some(3.0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn single_point_sweep() {
        let spec = SweepSpec {
            snr_start_db: 10.0,
            snr_stop_db: 10.0,
            snr_step_db: 2.0,
            outputs: vec![],
        };
        assert_eq!(spec.grid(), vec![10.0]);
    }

    #[test]
    fn config_error_carries_location() {
        let broken = r#"{"system": {"links": {"sd": 3}}}"#;
        match ScenarioConfig::from_json(broken) {
            Err(Error::Config(msg)) => assert!(msg.contains("line"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn csv_schema_is_stable() {
        use OutputKind::*;
        assert_eq!(AserPoint::csv_header(&[Exact, Asymptotic]), "snr_db,aser_exact,aser_asym");
        assert_eq!(
            AserPoint::csv_header(&[Exact, Asymptotic, Montecarlo]),
            "snr_db,aser_exact,aser_asym,mc_aser,mc_stderr"
        );
        assert_eq!(AserPoint::csv_header(&[Asymptotic]), "snr_db,aser_asym");
        let p = AserPoint {
            snr_db: 10.0,
            aser_exact: Some(1e-3),
            aser_asym: Some(2e-3),
            mc_aser: None,
            mc_stderr: None,
        };
        assert_eq!(p.csv_row(&[Exact, Asymptotic]), "10,1.0000000000e-3,2.0000000000e-3");
    }
}
