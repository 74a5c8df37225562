//! Subcommand implementations.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use relay_aser::config::{AserPoint, OutputKind, ScenarioConfig};
use relay_aser::mcsim::{simulate, SimConfig};
use relay_aser::modulation::{aser_asym, aser_exact};
use relay_aser::poweralloc::{optimize_xi, xi_lower_bound};
use relay_aser::specfun::{
    bounded_q, gamma, lauricella_fd, lauricella_phi1, lauricella_phi2, yacoub_y, SeriesControl,
};
use relay_aser::Error as CoreError;

pub enum CliError {
    Config(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    ScenarioConfig::from_json(&text).map_err(CliError::from)
}

fn write_output(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

/// Asymptotic value, or an empty cell for fading mixes without a closed form.
fn asym_or_blank(
    sys: &relay_aser::RelaySystem,
    c: &relay_aser::Constellation,
    ctl: &SeriesControl,
) -> Result<Option<f64>> {
    match aser_asym(sys, c, ctl) {
        Ok(v) => Ok(Some(v)),
        Err(CoreError::Unsupported { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// `aser` (exact + asymptotic) and `asym` (asymptotic only) sweeps.
pub fn cmd_aser(
    config: &Path,
    out: Option<&Path>,
    direct_only: bool,
    workers: Option<usize>,
    asym_only: bool,
) -> Result<()> {
    let cfg = load_config(config)?;
    let ctl = SeriesControl::from_env();
    let grid = cfg.sweep_grid()?;
    let workers = workers.unwrap_or(1);

    let outputs: &[OutputKind] = if asym_only {
        &[OutputKind::Asymptotic]
    } else {
        &[OutputKind::Exact, OutputKind::Asymptotic]
    };

    let rows: Vec<Result<AserPoint>> = crate::pool::par_map_indexed(grid.len(), workers, |i| {
        let snr_db = grid[i];
        let sys = cfg.build_system_at_db(snr_db)?.set_direct_only(direct_only);
        let aser_exact_v = if asym_only {
            None
        } else {
            Some(aser_exact(&sys, &cfg.constellation, &ctl)?)
        };
        let aser_asym_v = asym_or_blank(&sys, &cfg.constellation, &ctl)?;
        Ok(AserPoint {
            snr_db,
            aser_exact: aser_exact_v,
            aser_asym: aser_asym_v,
            mc_aser: None,
            mc_stderr: None,
        })
    });

    let mut text = String::new();
    text.push_str(&AserPoint::csv_header(outputs));
    text.push('\n');
    for row in rows {
        text.push_str(&row?.csv_row(outputs));
        text.push('\n');
    }
    write_output(out, &text)
}

/// Optimal power split at the configured reference SNR; JSON out.
pub fn cmd_power_opt(config: &Path, out: Option<&Path>, tol: f64) -> Result<()> {
    let cfg = load_config(config)?;
    let ctl = SeriesControl::from_env();
    let sys = cfg.build_system_at_db(cfg.reference_db()?)?;
    let solution = optimize_xi(&sys, &cfg.constellation, tol, &ctl)?;
    let lower = xi_lower_bound(&sys)?;
    let report = serde_json::json!({
        "xi_opt": solution.xi_opt,
        "aser_at_opt": solution.aser_at_opt,
        "iterations": solution.iterations,
        "residual": solution.residual,
        "xi_lower_bound": lower,
        "near_lower_bound": (solution.xi_opt - lower).abs() < 5e-3,
    });
    let mut text = serde_json::to_string_pretty(&report).expect("static schema");
    text.push('\n');
    write_output(out, &text)
}

pub struct SimOverrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub workers: Option<usize>,
    pub mode: Option<String>,
    pub direct_only: bool,
}

/// Monte Carlo sweep: exact/asym columns plus mc_aser, mc_stderr.
pub fn cmd_simulate(config: &Path, out: Option<&Path>, ovr: SimOverrides) -> Result<()> {
    let cfg = load_config(config)?;
    let ctl = SeriesControl::from_env();
    let grid = cfg.sweep_grid()?;

    let mut sim: SimConfig = cfg.sim_config();
    if let Some(seed) = ovr.seed {
        sim.master_seed = seed;
    }
    if let Some(trials) = ovr.trials {
        sim.n_trials = trials;
    }
    if let Some(workers) = ovr.workers {
        sim.workers = workers;
    }
    if let Some(mode) = &ovr.mode {
        sim.mode = mode.parse().map_err(CliError::from)?;
    }

    let outputs = [OutputKind::Exact, OutputKind::Asymptotic, OutputKind::Montecarlo];
    let mut text = String::new();
    text.push_str(&AserPoint::csv_header(&outputs));
    text.push('\n');
    for &snr_db in &grid {
        let sys = cfg.build_system_at_db(snr_db)?.set_direct_only(ovr.direct_only);
        let exact = aser_exact(&sys, &cfg.constellation, &ctl)?;
        let asym = asym_or_blank(&sys, &cfg.constellation, &ctl)?;
        let mc = simulate(&sys, &cfg.constellation, &sim, &ctl)?;
        let point = AserPoint {
            snr_db,
            aser_exact: Some(exact),
            aser_asym: asym,
            mc_aser: Some(mc.aser_hat),
            mc_stderr: Some(mc.stderr),
        };
        text.push_str(&point.csv_row(&outputs));
        text.push('\n');
    }
    write_output(out, &text)
}

fn arg_f64(v: &serde_json::Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| CliError::Config(format!("{what} must be a number, got {v}")))
}

fn arg_vec(v: &serde_json::Value, what: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| CliError::Config(format!("{what} must be an array, got {v}")))?
        .iter()
        .map(|x| arg_f64(x, what))
        .collect()
}

/// `specfun eval <name> <json-args>`: prints one decimal value.
pub fn cmd_specfun_eval(name: &str, args_json: &str) -> Result<()> {
    let args: serde_json::Value = serde_json::from_str(args_json)
        .map_err(|e| CliError::Config(format!("argument array: {e}")))?;
    let a = args
        .as_array()
        .ok_or_else(|| CliError::Config("arguments must form a JSON array".into()))?;
    let ctl = SeriesControl::from_env();
    let expect = |n: usize| -> Result<()> {
        if a.len() == n {
            Ok(())
        } else {
            Err(CliError::Config(format!("{name} expects {n} arguments, got {}", a.len())))
        }
    };
    let value = match name {
        "bounded-q" | "bounded_q" => {
            expect(2)?;
            bounded_q(arg_f64(&a[0], "x")?, arg_f64(&a[1], "phi")?)?
        }
        "fd" | "lauricella-fd" => {
            expect(4)?;
            lauricella_fd(
                arg_f64(&a[0], "a")?,
                &arg_vec(&a[1], "b")?,
                arg_f64(&a[2], "c")?,
                &arg_vec(&a[3], "x")?,
                &ctl,
            )?
        }
        "phi1" | "lauricella-phi1" => {
            expect(5)?;
            lauricella_phi1(
                arg_f64(&a[0], "a")?,
                &arg_vec(&a[1], "b")?,
                arg_f64(&a[2], "c")?,
                &arg_vec(&a[3], "x")?,
                arg_f64(&a[4], "xn")?,
                &ctl,
            )?
        }
        "phi2" | "lauricella-phi2" => {
            expect(5)?;
            lauricella_phi2(
                arg_f64(&a[0], "b1")?,
                arg_f64(&a[1], "b2")?,
                arg_f64(&a[2], "c")?,
                arg_f64(&a[3], "x1")?,
                arg_f64(&a[4], "x2")?,
                &ctl,
            )?
        }
        "yacoub-y" | "yacoub_y" => {
            expect(3)?;
            yacoub_y(arg_f64(&a[0], "nu")?, arg_f64(&a[1], "a")?, arg_f64(&a[2], "b")?, &ctl)?
        }
        "gamma" => {
            expect(1)?;
            gamma(arg_f64(&a[0], "x")?)
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown function '{other}' (expected bounded-q, fd, phi1, phi2, yacoub-y, gamma)"
            )))
        }
    };
    println!("{value}");
    Ok(())
}
