use std::fmt::Write as _;

use keygraph::model::{critical_k1, derive_all, exceeds_threshold, KeyProfile};
use keygraph::montecarlo::{run_sweep, SweepResult};
use keygraph::scaling::ConditionReport;
use keygraph::SystemParams;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const CSV_HEADER: &str = "sweep_value,n,trials,connected_count,isolated_free_count,\
p_connected,p_isolated_free,lambda_m,c_n,at_threshold";

pub const SCALING_HEADER: &str =
    "n,K,P,m,lambda_m,c_n,pool_ratio,edge_floor,ring_spread,channel_spread";

/// Text tables of `p_ij`, `lambda_i`, `Lambda_i` and the indices m, d, s
/// (one-based).
pub fn edge_prob_report(config: &RunConfig) -> CliResult<String> {
    let params = config.params()?;
    Ok(format_edge_prob(&params, config.n))
}

pub fn format_edge_prob(params: &SystemParams, n: Option<usize>) -> String {
    let d = derive_all(params);
    let r = params.classes();
    let mut out = String::new();
    let _ = writeln!(out, "classes = {r}, P = {}", params.keys().pool_size());
    let _ = writeln!(out, "class,mu,K,lambda,Lambda");
    for i in 0..r {
        let _ = writeln!(
            out,
            "{},{:.6},{},{:.6e},{:.6e}",
            i + 1,
            params.dist().weight(i),
            params.keys().ring_size(i),
            d.mean_key_share[i],
            d.mean_edge[i]
        );
    }
    let _ = writeln!(out, "p_ij:");
    for row in &d.key_share {
        let cells: Vec<String> = row.iter().map(|p| format!("{p:.6e}")).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    let _ = writeln!(out, "m={} d={} s={}", d.m + 1, d.d + 1, d.s + 1);
    let _ = writeln!(out, "alpha_min={} alpha_max={}", d.alpha_min, d.alpha_max);
    if let Some(n) = n.filter(|&n| n >= 2) {
        let nf = n as f64;
        let _ = writeln!(
            out,
            "n={n} Lambda_m={:.6e} log(n)/n={:.6e} at_threshold={}",
            d.min_mean_edge(),
            nf.ln() / nf,
            u8::from(exceeds_threshold(d.min_mean_edge(), n))
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub n: usize,
    pub k1: u64,
    pub ring_sizes: Vec<u64>,
    /// Zero-based minimising class at the critical point.
    pub m: usize,
    pub lambda_m: f64,
}

impl ThresholdReport {
    pub fn render(&self) -> String {
        let nf = self.n as f64;
        let sizes: Vec<String> = self.ring_sizes.iter().map(u64::to_string).collect();
        format!(
            "K1*={}\nK={}\nm={}\nLambda_m={:.6e}\nlog(n)/n={:.6e}\n",
            self.k1,
            sizes.join(","),
            self.m + 1,
            self.lambda_m,
            nf.ln() / nf
        )
    }
}

/// Smallest K1 clearing the threshold. `offsets` overrides the ones in the
/// config.
pub fn threshold(config: &RunConfig, offsets: Option<&[u64]>) -> CliResult<ThresholdReport> {
    let n = config.require_n()?;
    if n < 2 {
        return Err(CliError::field("config.n", "threshold needs n >= 2"));
    }
    let offsets = match offsets {
        Some(o) => {
            if o.len() != config.r {
                return Err(CliError::field(
                    "offsets",
                    format!("expected {} entries, got {}", config.r, o.len()),
                ));
            }
            o.to_vec()
        }
        None => config.ring_offsets()?,
    };
    let dist = config.dist()?;
    let channel = config.channel()?;
    let k1 = critical_k1(n, &dist, &channel, &offsets, config.pool)?;
    let keys = KeyProfile::from_offsets(k1, &offsets, config.pool)?;
    let params = SystemParams::new(dist, keys, channel)?;
    let d = derive_all(&params);
    Ok(ThresholdReport {
        n,
        k1,
        ring_sizes: params.keys().ring_sizes().to_vec(),
        m: d.m,
        lambda_m: d.min_mean_edge(),
    })
}

pub fn sweep(config: &RunConfig, workers: usize) -> CliResult<SweepResult> {
    let spec = config.sweep_spec()?;
    Ok(run_sweep(&spec, workers)?)
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::with_capacity(64 * (result.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        let t = &row.tally;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{}",
            row.value,
            result.n,
            t.trials,
            t.connected_count,
            t.isolated_free_count,
            t.p_connected(),
            t.p_isolated_free(),
            row.lambda_m,
            row.c_n,
            u8::from(row.at_threshold)
        );
    }
    out
}

pub fn scaling_csv(report: &ConditionReport) -> String {
    let mut out = String::new();
    out.push_str(SCALING_HEADER);
    out.push('\n');
    for row in &report.rows {
        let sizes: Vec<String> = row.ring_sizes.iter().map(u64::to_string).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6e},{:.6},{:.6},{:.6},{:.6},{:.6}",
            row.n,
            sizes.join(";"),
            row.pool_size,
            row.m + 1,
            row.lambda_m,
            row.c_n,
            row.pool_ratio,
            row.edge_floor,
            row.ring_spread,
            row.channel_spread
        );
    }
    out
}

pub fn scaling_trends(report: &ConditionReport) -> String {
    let mut out = format!("family: {}\ntau: {}\n", report.family, report.tau);
    for t in &report.trends {
        let _ = writeln!(
            out,
            "{}: min={:.6} max={:.6} {}",
            t.diagnostic,
            t.min,
            t.max,
            t.direction.as_str()
        );
    }
    out
}
