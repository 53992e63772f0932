//! JSON run configuration.
//!
//! ```json
//! {
//!   "r": 2, "mu": [0.5, 0.5],
//!   "K1": 20, "offsets": [0, 5],
//!   "P": 10000, "alpha": [0.3, 0.2, 0.2, 0.3],
//!   "n": 500, "trials": 400, "seed": 0,
//!   "sweep": { "axis": "K1", "values": [5, 6, 7] }
//! }
//! ```
//!
//! Ring sizes are given either as `"K": [..]` or as `"K1"` plus `"offsets"`.
//! Class indices in `sweep.i` / `sweep.j` are one-based.

use std::path::Path;

use keygraph::montecarlo::{ExperimentConfig, SweepAxis, SweepSpec};
use keygraph::{ChannelMatrix, ClassDistribution, KeyProfile, SystemParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub r: usize,
    pub mu: Vec<f64>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<u64>>,
    #[serde(rename = "K1", default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Vec<u64>>,
    #[serde(rename = "P")]
    pub pool: u64,
    /// Row-major `r x r`.
    pub alpha: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: AxisName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisName {
    #[serde(rename = "K1")]
    K1,
    #[serde(rename = "alpha_entry")]
    AlphaEntry,
    #[serde(rename = "alpha_diag")]
    AlphaDiag,
    #[serde(rename = "channel_scalar")]
    ChannelScalar,
}

fn prefixed(e: keygraph::Error) -> CliError {
    match e {
        keygraph::Error::Invalid { field, reason } => {
            CliError::field(format!("config.{field}"), reason)
        }
        other => other.into(),
    }
}

impl RunConfig {
    pub fn from_bytes(bytes: &[u8]) -> CliResult<Self> {
        let mut de = serde_json::Deserializer::from_slice(bytes);
        let config: RunConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                CliError::field("config", inner)
            } else {
                CliError::field(format!("config.{path}"), inner)
            }
        })?;
        de.end().map_err(|e| CliError::field("config", e))?;
        Ok(config)
    }

    /// Reads the file and returns the raw bytes too, for hashing.
    pub fn load(path: &Path) -> CliResult<(Self, Vec<u8>)> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        Ok((Self::from_bytes(&bytes)?, bytes))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("config serialises");
        out.push(b'\n');
        out
    }

    fn check_len<T>(&self, field: &str, v: &[T], want: usize) -> CliResult<()> {
        if v.len() != want {
            return Err(CliError::field(
                format!("config.{field}"),
                format!(
                    "expected {want} entries for r = {}, got {}",
                    self.r,
                    v.len()
                ),
            ));
        }
        Ok(())
    }

    pub fn ring_sizes(&self) -> CliResult<Vec<u64>> {
        match (&self.k, self.k1, &self.offsets) {
            (Some(k), None, None) => {
                self.check_len("K", k, self.r)?;
                Ok(k.clone())
            }
            (None, Some(k1), Some(offsets)) => {
                self.check_len("offsets", offsets, self.r)?;
                Ok(offsets.iter().map(|o| k1.saturating_add(*o)).collect())
            }
            (None, Some(_), None) => Err(CliError::field("config.offsets", "required with K1")),
            (None, None, Some(_)) => Err(CliError::field("config.K1", "required with offsets")),
            (None, None, None) => Err(CliError::field(
                "config.K",
                "give either K or K1 with offsets",
            )),
            _ => Err(CliError::field(
                "config.K",
                "give either K or K1 with offsets, not both",
            )),
        }
    }

    /// Ring offsets `K_j - K_1`, from `offsets` or derived from `K`.
    pub fn ring_offsets(&self) -> CliResult<Vec<u64>> {
        if let Some(offsets) = &self.offsets {
            self.check_len("offsets", offsets, self.r)?;
            return Ok(offsets.clone());
        }
        let k = self.ring_sizes()?;
        Ok(k.iter().map(|&kj| kj.saturating_sub(k[0])).collect())
    }

    pub fn dist(&self) -> CliResult<ClassDistribution> {
        if self.r == 0 {
            return Err(CliError::field(
                "config.r",
                "at least one class is required",
            ));
        }
        self.check_len("mu", &self.mu, self.r)?;
        ClassDistribution::new(self.mu.clone()).map_err(prefixed)
    }

    pub fn channel(&self) -> CliResult<ChannelMatrix> {
        self.check_len("alpha", &self.alpha, self.r * self.r)?;
        ChannelMatrix::new(self.r, self.alpha.clone()).map_err(prefixed)
    }

    pub fn params(&self) -> CliResult<SystemParams> {
        let dist = self.dist()?;
        let channel = self.channel()?;
        let keys = KeyProfile::new(self.ring_sizes()?, self.pool).map_err(prefixed)?;
        SystemParams::new(dist, keys, channel).map_err(prefixed)
    }

    pub fn require_n(&self) -> CliResult<usize> {
        match self.n {
            Some(n) if n >= 1 => Ok(n),
            Some(n) => Err(CliError::field(
                "config.n",
                format!("must be at least 1, got {n}"),
            )),
            None => Err(CliError::field("config.n", "required for this command")),
        }
    }

    pub fn experiment(&self) -> CliResult<ExperimentConfig> {
        let trials = self
            .trials
            .ok_or_else(|| CliError::field("config.trials", "required for this command"))?;
        ExperimentConfig::new(
            self.require_n()?,
            self.params()?,
            trials,
            self.seed.unwrap_or(0),
        )
        .map_err(prefixed)
    }

    pub fn sweep_spec(&self) -> CliResult<SweepSpec> {
        let sweep = self
            .sweep
            .as_ref()
            .ok_or_else(|| CliError::field("config.sweep", "required for this command"))?;
        let axis = match sweep.axis {
            AxisName::K1 => SweepAxis::K1 {
                ring_offsets: self.ring_offsets()?,
            },
            AxisName::AlphaEntry => {
                let class = |name: &str, v: Option<usize>| match v {
                    Some(c) if (1..=self.r).contains(&c) => Ok(c - 1),
                    Some(c) => Err(CliError::field(
                        format!("config.sweep.{name}"),
                        format!("class {c} outside 1..={}", self.r),
                    )),
                    None => Err(CliError::field(
                        format!("config.sweep.{name}"),
                        "required for axis alpha_entry",
                    )),
                };
                SweepAxis::AlphaEntry {
                    i: class("i", sweep.i)?,
                    j: class("j", sweep.j)?,
                }
            }
            AxisName::AlphaDiag => SweepAxis::AlphaDiag,
            AxisName::ChannelScalar => SweepAxis::ChannelScalar,
        };
        SweepSpec::new(axis, sweep.values.clone(), self.experiment()?).map_err(prefixed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = r#"{"r":2,"mu":[0.5,0.5],"K1":20,"offsets":[0,5],"P":10000,
        "alpha":[0.3,0.2,0.2,0.3],"n":500,"trials":400,"seed":0}"#;

    #[test]
    fn parses_offsets_form() {
        let c = RunConfig::from_bytes(FIG1.as_bytes()).unwrap();
        assert_eq!(c.ring_sizes().unwrap(), vec![20, 25]);
        assert_eq!(c.params().unwrap().keys().ring_sizes(), &[20, 25]);
    }

    #[test]
    fn offsets_derived_from_k() {
        let c = RunConfig::from_bytes(
            br#"{"r":3,"mu":[0.2,0.3,0.5],"K":[4,6,9],"P":50,"alpha":[1,1,1,1,1,1,1,1,1]}"#,
        )
        .unwrap();
        assert_eq!(c.ring_offsets().unwrap(), vec![0, 2, 5]);
    }

    #[test]
    fn bad_mu_reports_field() {
        let c =
            RunConfig::from_bytes(br#"{"r":2,"mu":[0.5,0.6],"K":[2,3],"P":10,"alpha":[1,1,1,1]}"#)
                .unwrap();
        let msg = c.params().unwrap_err().to_string();
        assert!(msg.contains("config.mu"), "{msg}");
    }

    #[test]
    fn type_errors_carry_a_path() {
        let err =
            RunConfig::from_bytes(br#"{"r":2,"mu":[0.5,"x"],"K":[2,3],"P":10,"alpha":[1,1,1,1]}"#)
                .unwrap_err()
                .to_string();
        assert!(err.contains("config.mu[1]"), "{err}");
        let err = RunConfig::from_bytes(br#"{"r":1,"mu":[1],"K":[1],"P":2,"alpha":[1],"x":0}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("unknown field"), "{err}");
    }

    #[test]
    fn both_ring_forms_rejected() {
        let c = RunConfig::from_bytes(
            br#"{"r":1,"mu":[1],"K":[1],"K1":1,"offsets":[0],"P":2,"alpha":[1]}"#,
        )
        .unwrap();
        assert!(c.params().is_err());
    }

    #[test]
    fn round_trips() {
        let c = RunConfig::from_bytes(FIG1.as_bytes()).unwrap();
        assert_eq!(RunConfig::from_bytes(&c.to_bytes()).unwrap(), c);
    }

    #[test]
    fn sweep_class_indices_are_one_based() {
        let mut c = RunConfig::from_bytes(FIG1.as_bytes()).unwrap();
        c.sweep = Some(SweepConfig {
            axis: AxisName::AlphaEntry,
            i: Some(1),
            j: Some(2),
            values: vec![0.0, 0.5],
        });
        assert_eq!(
            c.sweep_spec().unwrap().axis,
            SweepAxis::AlphaEntry { i: 0, j: 1 }
        );
        c.sweep.as_mut().unwrap().j = Some(3);
        assert!(c
            .sweep_spec()
            .unwrap_err()
            .to_string()
            .contains("config.sweep.j"));
    }
}
