//! Parameter families indexed by the node count and finite-n diagnostics of
//! the conditions the connectivity zero-one law places on them.
//!
//! The conditions are limit statements, so nothing here returns a verdict:
//! reports hold the numbers and their trend across the grid.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{
    derive_all, key_share_probability, ChannelMatrix, ClassDistribution, KeyProfile, SystemParams,
};

/// Closed-form choice of the smallest channel probability as a function of n.
#[derive(Clone)]
pub enum AlphaMinRule {
    /// `(ln n)^(-exponent)`
    InverseLogPower(f64),
    /// `n^(-exponent)`
    InversePower(f64),
    Constant(f64),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl AlphaMinRule {
    pub fn eval(&self, n: f64) -> f64 {
        match self {
            AlphaMinRule::InverseLogPower(e) => n.ln().powf(-e),
            AlphaMinRule::InversePower(e) => n.powf(-e),
            AlphaMinRule::Constant(c) => *c,
            AlphaMinRule::Custom(f) => f(n),
        }
    }
}

impl fmt::Debug for AlphaMinRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaMinRule::InverseLogPower(e) => write!(f, "(ln n)^-{e}"),
            AlphaMinRule::InversePower(e) => write!(f, "n^-{e}"),
            AlphaMinRule::Constant(c) => write!(f, "{c}"),
            AlphaMinRule::Custom(_) => f.write_str("custom"),
        }
    }
}

/// Unvalidated parameter values of a family at one n.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyPoint {
    pub n: u64,
    pub ring_sizes: Vec<u64>,
    pub pool_size: u64,
    /// Row-major `r x r`.
    pub alpha: Vec<f64>,
}

type PointFn = dyn Fn(u64) -> FamilyPoint + Send + Sync;

#[derive(Clone)]
enum Rule {
    TwoClassExample {
        epsilon: f64,
        alpha_min: AlphaMinRule,
    },
    Fixed {
        keys: KeyProfile,
        channel: ChannelMatrix,
    },
    Custom(Arc<PointFn>),
}

/// Map `n -> (K_n, P_n, alpha_n)` for a fixed class distribution.
#[derive(Clone)]
pub struct ScalingFamily {
    name: String,
    mu: ClassDistribution,
    rule: Rule,
}

impl fmt::Debug for ScalingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalingFamily")
            .field("name", &self.name)
            .field("mu", &self.mu)
            .finish_non_exhaustive()
    }
}

/// Two-class family with `P_n = ceil(n ln n)`,
/// `K_1 = ceil((ln n)^(1/2+eps) / sqrt(a))`,
/// `K_2 = ceil((1+eps)(ln n)^(3/2-eps) / (mu_2 sqrt(a)))` and
/// `alpha = a * [[(1+eps)(ln n)^(1-2eps)/mu_1, 1], [1, mu_2 (ln n)^(1+2eps)/(1+eps)]]`,
/// where `a = alpha_min(n)`.
pub fn example_family(
    epsilon: f64,
    mu: ClassDistribution,
    alpha_min: AlphaMinRule,
) -> Result<ScalingFamily> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::invalid(
            "epsilon",
            format!("must lie in (0, 0.5), got {epsilon}"),
        ));
    }
    if mu.classes() != 2 {
        return Err(Error::invalid(
            "mu",
            format!("two classes required, got {}", mu.classes()),
        ));
    }
    Ok(ScalingFamily {
        name: format!("two-class example (eps = {epsilon}, alpha_min = {alpha_min:?})"),
        mu,
        rule: Rule::TwoClassExample { epsilon, alpha_min },
    })
}

impl ScalingFamily {
    /// The same parameters at every n.
    pub fn fixed(params: SystemParams) -> Self {
        Self {
            name: "fixed".to_string(),
            mu: params.dist().clone(),
            rule: Rule::Fixed {
                keys: params.keys().clone(),
                channel: params.channel().clone(),
            },
        }
    }

    pub fn custom(
        name: impl Into<String>,
        mu: ClassDistribution,
        point: impl Fn(u64) -> FamilyPoint + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            mu,
            rule: Rule::Custom(Arc::new(point)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dist(&self) -> &ClassDistribution {
        &self.mu
    }

    /// Raw values at `n`; only fails for `n < 2`.
    pub fn point(&self, n: u64) -> Result<FamilyPoint> {
        if n < 2 {
            return Err(Error::precondition(format!(
                "families start at n = 2, got {n}"
            )));
        }
        Ok(match &self.rule {
            Rule::TwoClassExample { epsilon, alpha_min } => {
                two_class_point(n, *epsilon, self.mu.weights(), alpha_min)
            }
            Rule::Fixed { keys, channel } => FamilyPoint {
                n,
                ring_sizes: keys.ring_sizes().to_vec(),
                pool_size: keys.pool_size(),
                alpha: channel.entries().to_vec(),
            },
            Rule::Custom(f) => f(n),
        })
    }

    /// Validated parameters at `n`. Ring sizes must be ordered with
    /// `K_r <= P/2` and every channel entry must lie in `(0, 1)`.
    pub fn materialize(&self, n: u64) -> Result<SystemParams> {
        let point = self.point(n)?;
        let r = self.mu.classes();
        let keys = KeyProfile::new(point.ring_sizes, point.pool_size)?;
        keys.check_scaling()?;
        let channel = ChannelMatrix::new(r, point.alpha)?;
        channel.check_open_interval()?;
        SystemParams::new(self.mu.clone(), keys, channel)
    }
}

fn two_class_point(n: u64, eps: f64, mu: &[f64], alpha_min: &AlphaMinRule) -> FamilyPoint {
    let nf = n as f64;
    let log_n = nf.ln();
    let a = alpha_min.eval(nf);
    let root = a.sqrt();
    let k1 = (log_n.powf(0.5 + eps) / root).ceil();
    let k2 = ((1.0 + eps) * log_n.powf(1.5 - eps) / (mu[1] * root)).ceil();
    let pool = (nf * log_n).ceil();
    let a11 = a * (1.0 + eps) / mu[0] * log_n.powf(1.0 - 2.0 * eps);
    let a22 = a * mu[1] / (1.0 + eps) * log_n.powf(1.0 + 2.0 * eps);
    FamilyPoint {
        n,
        ring_sizes: vec![k1 as u64, k2 as u64],
        pool_size: pool as u64,
        alpha: vec![a11, a, a, a22],
    }
}

/// Diagnostics at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionRow {
    pub n: u64,
    pub ring_sizes: Vec<u64>,
    pub pool_size: u64,
    pub m: usize,
    pub lambda_m: f64,
    /// `n Lambda_m / ln n`
    pub c_n: f64,
    /// `P_n / n`
    pub pool_ratio: f64,
    /// `n alpha_min p_1r / ln n`
    pub edge_floor: f64,
    /// `(K_r / K_1) / ln n`
    pub ring_spread: f64,
    /// `(alpha_max / alpha_min) / (ln n)^tau`
    pub channel_spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

impl Direction {
    pub fn of(values: &[f64]) -> Self {
        let steps = values.windows(2).map(|w| w[1] - w[0]);
        let (mut up, mut down) = (false, false);
        for d in steps {
            up |= d > 0.0;
            down |= d < 0.0;
        }
        match (up, down) {
            (true, false) => Direction::Increasing,
            (false, true) => Direction::Decreasing,
            (false, false) => Direction::Constant,
            (true, true) => Direction::Mixed,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
            Direction::Constant => "constant",
            Direction::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trend {
    pub diagnostic: &'static str,
    pub min: f64,
    pub max: f64,
    pub direction: Direction,
}

impl Trend {
    fn over(diagnostic: &'static str, values: &[f64]) -> Self {
        Trend {
            diagnostic,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            direction: Direction::of(values),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub family: String,
    pub tau: f64,
    pub rows: Vec<ConditionRow>,
    pub trends: Vec<Trend>,
}

impl ConditionReport {
    pub fn trend(&self, diagnostic: &str) -> Option<&Trend> {
        self.trends.iter().find(|t| t.diagnostic == diagnostic)
    }
}

pub const DEFAULT_TAU: f64 = 2.0;

fn check_grid(grid: &[u64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "at least one n is required"));
    }
    if let Some(&n) = grid.iter().find(|&&n| n < 3) {
        return Err(Error::invalid(
            "grid",
            format!("every n must be >= 3, got {n}"),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("grid", "values must be strictly increasing"));
    }
    Ok(())
}

/// `alpha_min * p_1r`, the smallest-ring / largest-ring edge floor.
fn edge_floor_product(params: &SystemParams) -> f64 {
    let keys = params.keys();
    let r = keys.classes();
    let p_1r = key_share_probability(keys.ring_size(0), keys.ring_size(r - 1), keys.pool_size())
        .expect("validated key profile");
    params.channel().min_entry() * p_1r
}

pub fn evaluate_conditions(
    family: &ScalingFamily,
    grid: &[u64],
    tau: f64,
) -> Result<ConditionReport> {
    check_grid(grid)?;
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::invalid(
            "tau",
            format!("must be positive, got {tau}"),
        ));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &n in grid {
        let params = family.materialize(n)?;
        let derived = derive_all(&params);
        let nf = n as f64;
        let log_n = nf.ln();
        let keys = params.keys();
        let lambda_m = derived.min_mean_edge();
        rows.push(ConditionRow {
            n,
            ring_sizes: keys.ring_sizes().to_vec(),
            pool_size: keys.pool_size(),
            m: derived.m,
            lambda_m,
            c_n: nf * lambda_m / log_n,
            pool_ratio: keys.pool_size() as f64 / nf,
            edge_floor: nf * edge_floor_product(&params) / log_n,
            ring_spread: (*keys.ring_sizes().last().unwrap() as f64 / keys.ring_size(0) as f64)
                / log_n,
            channel_spread: (derived.alpha_max / derived.alpha_min) / log_n.powf(tau),
        });
    }
    let column = |f: fn(&ConditionRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let trends = vec![
        Trend::over("c_n", &column(|r| r.c_n)),
        Trend::over("pool_ratio", &column(|r| r.pool_ratio)),
        Trend::over("edge_floor", &column(|r| r.edge_floor)),
        Trend::over("ring_spread", &column(|r| r.ring_spread)),
        Trend::over("channel_spread", &column(|r| r.channel_spread)),
    ];
    Ok(ConditionReport {
        family: family.name().to_string(),
        tau,
        rows,
        trends,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaPoint {
    pub n: u64,
    /// `n alpha_min p_1r / ln n`
    pub edge_floor: f64,
    /// Smallest ring size.
    pub k1: u64,
}

pub fn lemma_diagnostics(family: &ScalingFamily, grid: &[u64]) -> Result<Vec<LemmaPoint>> {
    check_grid(grid)?;
    grid.iter()
        .map(|&n| {
            let params = family.materialize(n)?;
            let nf = n as f64;
            Ok(LemmaPoint {
                n,
                edge_floor: nf * edge_floor_product(&params) / nf.ln(),
                k1: params.keys().ring_size(0),
            })
        })
        .collect()
}
