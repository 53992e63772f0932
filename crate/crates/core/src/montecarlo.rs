//! Seeded, parallel estimation of the probability that the composite graph
//! is connected and that it has no isolated nodes.
//!
//! Every trial draws from its own generator seeded by
//! [`derive_trial_seed`], so tallies do not depend on how trials are spread
//! over workers.

use std::ops::{Add, AddAssign};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{has_no_isolated, summarize};
use crate::error::{Error, Result};
use crate::model::{derive_all, exceeds_threshold, KeyProfile, SystemParams};
use crate::sampler::build_intersection;
use crate::seed::{mix64, splitmix_at};

/// Generator used for every trial.
pub type TrialRng = ChaCha8Rng;

/// `mix64(mix64(master) + (index + 1) * 0x9E3779B97F4A7C15)`, where `mix64`
/// is the SplitMix64 finaliser.
///
/// For a fixed master the map is a bijection of the trial index, and for a
/// fixed index a bijection of the master, so neither direction collides.
pub fn derive_trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix_at(mix64(master_seed), trial_index)
}

pub fn trial_rng(master_seed: u64, trial_index: u64) -> TrialRng {
    TrialRng::seed_from_u64(derive_trial_seed(master_seed, trial_index))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub params: SystemParams,
    pub trials: u64,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn new(n: usize, params: SystemParams, trials: u64, master_seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "node count must be at least 1"));
        }
        if trials == 0 {
            return Err(Error::invalid("trials", "at least one trial is required"));
        }
        Ok(Self {
            n,
            params,
            trials,
            master_seed,
        })
    }
}

/// Counts of trials in which the sampled graph was connected and in which it
/// had no isolated node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct TrialTally {
    pub trials: u64,
    pub connected_count: u64,
    pub isolated_free_count: u64,
}

impl TrialTally {
    pub fn p_connected(&self) -> f64 {
        self.connected_count as f64 / self.trials as f64
    }

    pub fn p_isolated_free(&self) -> f64 {
        self.isolated_free_count as f64 / self.trials as f64
    }
}

impl Add for TrialTally {
    type Output = TrialTally;

    fn add(self, rhs: Self) -> Self {
        TrialTally {
            trials: self.trials + rhs.trials,
            connected_count: self.connected_count + rhs.connected_count,
            isolated_free_count: self.isolated_free_count + rhs.isolated_free_count,
        }
    }
}

impl AddAssign for TrialTally {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

/// Outcome of one sampled graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub connected: bool,
    pub isolated_free: bool,
}

impl From<TrialOutcome> for TrialTally {
    fn from(o: TrialOutcome) -> Self {
        TrialTally {
            trials: 1,
            connected_count: u64::from(o.connected),
            isolated_free_count: u64::from(o.isolated_free),
        }
    }
}

pub fn run_single_trial(config: &ExperimentConfig, trial_index: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(config.master_seed, trial_index);
    let (_, graph) = build_intersection(config.n, &config.params, &mut rng)?;
    let connected = summarize(&graph).component_count == 1;
    let isolated_free = has_no_isolated(&graph);
    assert!(
        !connected || isolated_free || config.n < 2,
        "connected graph with an isolated node (trial {trial_index})"
    );
    Ok(TrialOutcome {
        connected,
        isolated_free,
    })
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers <= 1 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::precondition(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

fn tally_trials(config: &ExperimentConfig, parallel: bool) -> Result<TrialTally> {
    let one = |t: u64| run_single_trial(config, t).map(TrialTally::from);
    if parallel {
        (0..config.trials)
            .into_par_iter()
            .map(one)
            .try_reduce(TrialTally::default, |a, b| Ok(a + b))
    } else {
        (0..config.trials).map(one).sum()
    }
}

impl std::iter::Sum for TrialTally {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(TrialTally::default(), Add::add)
    }
}

/// Runs `config.trials` independent trials on `workers` threads (1 runs
/// inline on the caller's thread).
pub fn run_trials(config: &ExperimentConfig, workers: usize) -> Result<TrialTally> {
    with_pool(workers, || tally_trials(config, workers > 1))?
}

/// Parameter varied along a sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    /// Smallest ring size, with `K_j = value + offsets[j]`.
    K1 { ring_offsets: Vec<u64> },
    /// Channel entry `(i, j)` and its mirror `(j, i)`.
    AlphaEntry { i: usize, j: usize },
    /// Every diagonal channel entry.
    AlphaDiag,
    /// Every channel entry.
    ChannelScalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub base: ExperimentConfig,
}

impl SweepSpec {
    pub fn new(axis: SweepAxis, values: Vec<f64>, base: ExperimentConfig) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid(
                "sweep.values",
                "at least one value is required",
            ));
        }
        let increasing = values.windows(2).all(|w| w[0] < w[1]);
        let decreasing = values.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(Error::invalid(
                "sweep.values",
                "values must be strictly monotone",
            ));
        }
        let spec = Self { axis, values, base };
        for (idx, &v) in spec.values.iter().enumerate() {
            spec.params_at(v).map_err(|e| match e {
                Error::Invalid { field, reason } => {
                    Error::invalid(format!("sweep.values[{idx}]"), format!("{field}: {reason}"))
                }
                other => other,
            })?;
        }
        Ok(spec)
    }

    /// Base parameters with the axis set to `value`.
    pub fn params_at(&self, value: f64) -> Result<SystemParams> {
        let base = &self.base.params;
        match &self.axis {
            SweepAxis::K1 { ring_offsets } => {
                if !(value >= 1.0 && value.fract() == 0.0) {
                    return Err(Error::invalid(
                        "K1",
                        format!("ring size must be a positive integer, got {value}"),
                    ));
                }
                if ring_offsets.len() != base.classes() {
                    return Err(Error::invalid(
                        "offsets",
                        format!(
                            "{} offsets for {} classes",
                            ring_offsets.len(),
                            base.classes()
                        ),
                    ));
                }
                let keys =
                    KeyProfile::from_offsets(value as u64, ring_offsets, base.keys().pool_size())?;
                base.with_keys(keys)
            }
            SweepAxis::AlphaEntry { i, j } => {
                base.with_channel(base.channel().with_entry(*i, *j, value)?)
            }
            SweepAxis::AlphaDiag => base.with_channel(base.channel().with_diagonal(value)?),
            SweepAxis::ChannelScalar => {
                let r = base.classes();
                base.with_channel(crate::model::ChannelMatrix::uniform(r, value)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub tally: TrialTally,
    /// Minimum mean edge probability at this point.
    pub lambda_m: f64,
    /// `n * lambda_m / ln n`.
    pub c_n: f64,
    /// Whether `lambda_m > ln(n) / n`.
    pub at_threshold: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub n: usize,
    pub rows: Vec<SweepRow>,
}

pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    let n = spec.base.n;
    let rows = with_pool(workers, || {
        spec.values
            .iter()
            .map(|&value| {
                let params = spec.params_at(value)?;
                let lambda_m = derive_all(&params).min_mean_edge();
                let config = ExperimentConfig {
                    params,
                    ..spec.base.clone()
                };
                Ok(SweepRow {
                    value,
                    tally: tally_trials(&config, workers > 1)?,
                    lambda_m,
                    c_n: scaled_degree(lambda_m, n),
                    at_threshold: n >= 2 && exceeds_threshold(lambda_m, n),
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(SweepResult { n, rows })
}

/// `n * lambda / ln n`; zero when `n < 2`.
pub fn scaled_degree(lambda: f64, n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    nf * lambda / nf.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ChannelMatrix, ClassDistribution};

    fn params(k: Vec<u64>, pool: u64, alpha: f64) -> SystemParams {
        let r = k.len();
        SystemParams::new(
            ClassDistribution::uniform(r).unwrap(),
            KeyProfile::new(k, pool).unwrap(),
            ChannelMatrix::uniform(r, alpha).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn seeds_are_deterministic_and_distinct() {
        assert_eq!(derive_trial_seed(42, 7), derive_trial_seed(42, 7));
        assert_ne!(derive_trial_seed(42, 0), derive_trial_seed(42, 1));
        assert_ne!(derive_trial_seed(0, 0), derive_trial_seed(1, 0));
    }

    #[test]
    fn complete_graph_always_connected() {
        let cfg = ExperimentConfig::new(30, params(vec![5, 5], 5, 1.0), 20, 3).unwrap();
        let tally = run_trials(&cfg, 1).unwrap();
        assert_eq!(tally.connected_count, 20);
        assert_eq!(tally.isolated_free_count, 20);
    }

    #[test]
    fn empty_graph_never_connected() {
        let cfg = ExperimentConfig::new(30, params(vec![5, 5], 50, 0.0), 20, 3).unwrap();
        let tally = run_trials(&cfg, 1).unwrap();
        assert_eq!((tally.connected_count, tally.isolated_free_count), (0, 0));
    }

    #[test]
    fn worker_count_does_not_change_tally() {
        let cfg = ExperimentConfig::new(60, params(vec![4, 6], 200, 0.6), 40, 11).unwrap();
        let one = run_trials(&cfg, 1).unwrap();
        let four = run_trials(&cfg, 4).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn sweep_rejects_bad_values() {
        let base = ExperimentConfig::new(10, params(vec![2, 3], 50, 0.5), 1, 0).unwrap();
        let k1 = SweepAxis::K1 {
            ring_offsets: vec![0, 1],
        };
        assert!(SweepSpec::new(k1.clone(), vec![], base.clone()).is_err());
        assert!(SweepSpec::new(k1.clone(), vec![1.0, 3.0, 2.0], base.clone()).is_err());
        assert!(SweepSpec::new(k1.clone(), vec![1.5], base.clone()).is_err());
        assert!(SweepSpec::new(k1, vec![50.0], base.clone()).is_err());
        assert!(SweepSpec::new(SweepAxis::AlphaDiag, vec![0.5, 1.5], base.clone()).is_err());
        assert!(SweepSpec::new(SweepAxis::AlphaEntry { i: 0, j: 2 }, vec![0.5], base).is_err());
    }

    #[test]
    fn sweep_axis_semantics() {
        let base = ExperimentConfig::new(10, params(vec![2, 3], 50, 0.5), 1, 0).unwrap();
        let spec = SweepSpec::new(
            SweepAxis::AlphaEntry { i: 0, j: 1 },
            vec![0.1],
            base.clone(),
        )
        .unwrap();
        let p = spec.params_at(0.1).unwrap();
        assert_eq!(p.channel().get(1, 0), 0.1);
        assert_eq!(p.channel().get(0, 0), 0.5);

        let spec = SweepSpec::new(SweepAxis::AlphaDiag, vec![0.9], base.clone()).unwrap();
        let p = spec.params_at(0.9).unwrap();
        assert_eq!(p.channel().entries(), &[0.9, 0.5, 0.5, 0.9]);

        let spec = SweepSpec::new(SweepAxis::ChannelScalar, vec![0.2], base.clone()).unwrap();
        assert_eq!(spec.params_at(0.2).unwrap().channel().entries(), &[0.2; 4]);

        let spec = SweepSpec::new(
            SweepAxis::K1 {
                ring_offsets: vec![0, 4],
            },
            vec![7.0],
            base,
        )
        .unwrap();
        assert_eq!(spec.params_at(7.0).unwrap().keys().ring_sizes(), &[7, 11]);
    }

    #[test]
    fn single_value_sweep_matches_run_trials() {
        let base = ExperimentConfig::new(40, params(vec![3, 4], 60, 0.5), 25, 5).unwrap();
        let spec = SweepSpec::new(SweepAxis::ChannelScalar, vec![0.5], base.clone()).unwrap();
        let result = run_sweep(&spec, 1).unwrap();
        assert_eq!(result.rows.len(), 1);
        assert_eq!(result.rows[0].tally, run_trials(&base, 1).unwrap());
    }
}
