//! Hard-coded figure recipes: n = 500, P = 10^4, mu = (0.5, 0.5), K_2 = K_1 + 5.

use crate::config::{AxisName, RunConfig, SweepConfig};
use crate::error::{CliError, CliResult};

pub const NODES: usize = 500;
pub const POOL: u64 = 10_000;
pub const TRIALS: u64 = 400;
pub const OFFSETS: [u64; 2] = [0, 5];

/// One CSV worth of a figure: a file stem and the config that produces it.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub config: RunConfig,
}

fn base(alpha: [f64; 4], trials: u64, seed: u64) -> RunConfig {
    RunConfig {
        r: 2,
        mu: vec![0.5, 0.5],
        k: None,
        k1: None,
        offsets: None,
        pool: POOL,
        alpha: alpha.to_vec(),
        n: Some(NODES),
        trials: Some(trials),
        seed: Some(seed),
        sweep: None,
    }
}

fn k1_sweep(mut config: RunConfig, from: u64, to: u64) -> RunConfig {
    config.k1 = Some(from);
    config.offsets = Some(OFFSETS.to_vec());
    config.sweep = Some(SweepConfig {
        axis: AxisName::K1,
        i: None,
        j: None,
        values: (from..=to).map(|k| k as f64).collect(),
    });
    config
}

fn alpha_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

fn alpha_sweep(mut config: RunConfig, k1: u64, axis: AxisName) -> RunConfig {
    config.k = Some(vec![k1 + OFFSETS[0], k1 + OFFSETS[1]]);
    let (i, j) = match axis {
        AxisName::AlphaEntry => (Some(1), Some(2)),
        _ => (None, None),
    };
    config.sweep = Some(SweepConfig {
        axis,
        i,
        j,
        values: alpha_grid(),
    });
    config
}

/// Curves of figure `id` (1 to 4).
///
/// 1. `alpha = [[0.3, a12], [a12, 0.3]]`, `a12` in {0.2, 0.4, 0.6}, K1 = 5..=25.
/// 2. `alpha = [[a11, 0.2], [0.2, 0.2]]`, `a11` in {0.2, 0.4, 0.6}, K1 = 10..=25.
/// 3. `alpha = [[a, 0.2], [0.2, a]]`, K1 in {20, 25, 30, 35}, `a` = 0, 0.05, .., 1.
/// 4. `alpha = [[0.2, a12], [a12, 0.2]]`, K1 in {20, 25, 30, 35}, `a12` = 0, 0.05, .., 1.
pub fn figure(id: u8, trials: u64, seed: u64) -> CliResult<Vec<Curve>> {
    let curves = match id {
        1 => [0.2, 0.4, 0.6]
            .iter()
            .map(|&a| Curve {
                name: format!("fig1_alpha12_{a}"),
                config: k1_sweep(base([0.3, a, a, 0.3], trials, seed), 5, 25),
            })
            .collect(),
        2 => [0.2, 0.4, 0.6]
            .iter()
            .map(|&a| Curve {
                name: format!("fig2_alpha11_{a}"),
                config: k1_sweep(base([a, 0.2, 0.2, 0.2], trials, seed), 10, 25),
            })
            .collect(),
        3 => [20, 25, 30, 35]
            .iter()
            .map(|&k1| Curve {
                name: format!("fig3_k1_{k1}"),
                config: alpha_sweep(
                    base([0.0, 0.2, 0.2, 0.0], trials, seed),
                    k1,
                    AxisName::AlphaDiag,
                ),
            })
            .collect(),
        4 => [20, 25, 30, 35]
            .iter()
            .map(|&k1| Curve {
                name: format!("fig4_k1_{k1}"),
                config: alpha_sweep(
                    base([0.2, 0.0, 0.0, 0.2], trials, seed),
                    k1,
                    AxisName::AlphaEntry,
                ),
            })
            .collect(),
        other => {
            return Err(CliError::field(
                "figure.id",
                format!("expected 1 to 4, got {other}"),
            ));
        }
    };
    Ok(curves)
}
