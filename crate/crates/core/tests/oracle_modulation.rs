//! Monte Carlo oracles for the conditional SER expressions and the
//! dual-hop ASER chain: symbol-level simulations validate the analytic
//! formulas end to end.

use relay_aser::channel::{EtaMuParams, FadingParams, KappaMuParams};
use relay_aser::mcsim::{simulate, simulate_awgn_ser, SimConfig, SimMode};
use relay_aser::modulation::{aser_exact, conditional_ser, Constellation};
use relay_aser::relay::{LinkBudget, RelaySystem};
use relay_aser::specfun::SeriesControl;

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

#[test]
fn rqam_conditional_ser_awgn_oracle() {
    // 4x2 RQAM with beta = 1 at 10 dB symbol SNR.
    let c = Constellation::Rqam { mi: 4, mq: 2, beta: 1.0 };
    let gamma = relay_aser::db_to_linear(10.0);
    let mc = simulate_awgn_ser(&c, gamma, 400_000, 17).unwrap();
    let exact = conditional_ser(&c, gamma).unwrap();
    assert!(
        (mc.aser_hat - exact).abs() < 3.0 * mc.stderr,
        "mc {} vs exact {exact} (sigma {})",
        mc.aser_hat,
        mc.stderr
    );
}

#[test]
fn rqam_conditional_ser_zero_snr_oracle() {
    // At gamma = 0 the detector guesses: SER = 1 - 1/M, and the analytic
    // expression must agree with simulation at a tiny positive SNR.
    let c = Constellation::Rqam { mi: 4, mq: 4, beta: 1.0 };
    let exact0 = conditional_ser(&c, 0.0).unwrap();
    assert!((exact0 - (1.0 - 1.0 / 16.0)).abs() < 1e-12);
    let mc = simulate_awgn_ser(&c, 1e-9, 200_000, 23).unwrap();
    assert!(
        (mc.aser_hat - exact0).abs() < 3.0 * mc.stderr,
        "mc {} vs {exact0}",
        mc.aser_hat
    );
}

#[test]
fn rqam_unequal_beta_oracle() {
    let c = Constellation::Rqam { mi: 4, mq: 2, beta: 1.5 };
    let gamma = relay_aser::db_to_linear(12.0);
    let mc = simulate_awgn_ser(&c, gamma, 400_000, 31).unwrap();
    let exact = conditional_ser(&c, gamma).unwrap();
    assert!(
        (mc.aser_hat - exact).abs() < 3.0 * mc.stderr,
        "mc {} vs exact {exact}",
        mc.aser_hat
    );
}

#[test]
fn xqam_conditional_ser_awgn_oracle() {
    let c = Constellation::Xqam { m: 32 };
    for db in [0.0, 15.0] {
        let gamma = relay_aser::db_to_linear(db);
        let mc = simulate_awgn_ser(&c, gamma, 400_000, 41).unwrap();
        let exact = conditional_ser(&c, gamma).unwrap();
        assert!(
            (mc.aser_hat - exact).abs() < 3.0 * mc.stderr,
            "{db} dB: mc {} vs exact {exact} (sigma {})",
            mc.aser_hat,
            mc.stderr
        );
    }
}

#[test]
fn xqam_128_conditional_ser_awgn_oracle() {
    // nu = 2 exercises every sum group in the cross-QAM expression.
    let c = Constellation::Xqam { m: 128 };
    let gamma = relay_aser::db_to_linear(18.0);
    let mc = simulate_awgn_ser(&c, gamma, 400_000, 43).unwrap();
    let exact = conditional_ser(&c, gamma).unwrap();
    assert!(
        (mc.aser_hat - exact).abs() < 3.0 * mc.stderr,
        "mc {} vs exact {exact} (sigma {})",
        mc.aser_hat,
        mc.stderr
    );
}

#[test]
fn bpsk_all_rayleigh_dual_hop_symbol_level() {
    // Rayleigh on every link is the classical dual-hop DF baseline.
    let ray = FadingParams::EtaMu(EtaMuParams::new(1.0, 0.5).unwrap());
    let lb = |f| LinkBudget::new(f, 1.0).unwrap();
    let sys = RelaySystem::with_rate(
        lb(ray),
        lb(ray),
        lb(ray),
        relay_aser::db_to_linear(12.0),
        0.5,
        1.0,
    )
    .unwrap();
    let closed = aser_exact(&sys, &Constellation::Bpsk, &ctl()).unwrap();
    let cfg = SimConfig {
        master_seed: 57,
        n_trials: 400_000,
        mode: SimMode::SymbolLevel,
        workers: 4,
    };
    let mc = simulate(&sys, &Constellation::Bpsk, &cfg, &ctl()).unwrap();
    assert!(
        (mc.aser_hat - closed).abs() < 3.0 * mc.stderr,
        "mc {} vs closed {closed} (sigma {})",
        mc.aser_hat,
        mc.stderr
    );
}

#[test]
fn semi_analytic_and_symbol_level_agree() {
    let em = FadingParams::EtaMu(EtaMuParams::new(1.0, 2.0).unwrap());
    let km = FadingParams::KappaMu(KappaMuParams::new(2.0, 2.0).unwrap());
    let lb = |f| LinkBudget::new(f, 1.0).unwrap();
    let c = Constellation::Rqam { mi: 4, mq: 2, beta: 1.0 };
    for db in [8.0, 14.0] {
        let sys = RelaySystem::with_rate(
            lb(em),
            lb(em),
            lb(km),
            relay_aser::db_to_linear(db),
            0.5,
            1.0,
        )
        .unwrap();
        let semi = simulate(
            &sys,
            &c,
            &SimConfig { master_seed: 71, n_trials: 300_000, mode: SimMode::SemiAnalytic, workers: 4 },
            &ctl(),
        )
        .unwrap();
        let sym = simulate(
            &sys,
            &c,
            &SimConfig { master_seed: 73, n_trials: 300_000, mode: SimMode::SymbolLevel, workers: 4 },
            &ctl(),
        )
        .unwrap();
        let combined = (semi.stderr.powi(2) + sym.stderr.powi(2)).sqrt();
        assert!(
            (semi.aser_hat - sym.aser_hat).abs() < 3.0 * combined,
            "{db} dB: semi {} vs symbol {} (combined sigma {combined})",
            semi.aser_hat,
            sym.aser_hat
        );
    }
}
