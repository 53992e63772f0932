//! Closed-form edge probabilities of the composite key/channel graph.
//!
//! Class indices are zero-based throughout the library. Text output in the
//! CLI converts to one-based labels.

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;
const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Probability that a node falls into each class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDistribution {
    mu: Vec<f64>,
}

impl ClassDistribution {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::invalid("mu", "at least one class is required"));
        }
        for (i, &w) in mu.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::invalid(
                    format!("mu[{i}]"),
                    format!("class probability must be positive, got {w}"),
                ));
            }
        }
        let total: f64 = mu.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::invalid(
                "mu",
                format!("class probabilities sum to {total}, expected 1"),
            ));
        }
        Ok(Self { mu })
    }

    /// Equal weight on `r` classes.
    pub fn uniform(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("mu", "at least one class is required"));
        }
        let mut mu = vec![1.0 / r as f64; r];
        // absorb rounding so the sum check is exact
        let head: f64 = mu[..r - 1].iter().sum();
        mu[r - 1] = 1.0 - head;
        Self::new(mu)
    }

    pub fn classes(&self) -> usize {
        self.mu.len()
    }

    pub fn weight(&self, class: usize) -> f64 {
        self.mu[class]
    }

    pub fn weights(&self) -> &[f64] {
        &self.mu
    }
}

/// Ring sizes per class plus the pool size they are drawn from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyProfile {
    ring_sizes: Vec<u64>,
    pool_size: u64,
}

impl KeyProfile {
    /// Ring sizes must be positive, non-decreasing and no larger than the pool.
    pub fn new(ring_sizes: Vec<u64>, pool_size: u64) -> Result<Self> {
        if ring_sizes.is_empty() {
            return Err(Error::invalid("K", "at least one ring size is required"));
        }
        if pool_size == 0 {
            return Err(Error::invalid("P", "key pool must be non-empty"));
        }
        for (i, &k) in ring_sizes.iter().enumerate() {
            if k == 0 {
                return Err(Error::invalid(
                    format!("K[{i}]"),
                    "ring size must be positive",
                ));
            }
            if k > pool_size {
                return Err(Error::invalid(
                    format!("K[{i}]"),
                    format!("ring size {k} exceeds pool size {pool_size}"),
                ));
            }
            if i > 0 && k < ring_sizes[i - 1] {
                return Err(Error::invalid(
                    format!("K[{i}]"),
                    "ring sizes must be non-decreasing in class index",
                ));
            }
        }
        Ok(Self {
            ring_sizes,
            pool_size,
        })
    }

    /// `K_1 = k1` and `K_j = k1 + offsets[j]`.
    pub fn from_offsets(k1: u64, offsets: &[u64], pool_size: u64) -> Result<Self> {
        check_offsets(offsets)?;
        Self::new(offsets.iter().map(|o| k1 + o).collect(), pool_size)
    }

    pub fn classes(&self) -> usize {
        self.ring_sizes.len()
    }

    pub fn ring_size(&self, class: usize) -> u64 {
        self.ring_sizes[class]
    }

    pub fn ring_sizes(&self) -> &[u64] {
        &self.ring_sizes
    }

    pub fn pool_size(&self) -> u64 {
        self.pool_size
    }

    /// Strict check used by the asymptotic theory: `K_r <= P / 2`.
    pub fn check_scaling(&self) -> Result<()> {
        let largest = *self.ring_sizes.last().expect("non-empty");
        if 2 * largest > self.pool_size {
            return Err(Error::invalid(
                format!("K[{}]", self.ring_sizes.len() - 1),
                format!(
                    "largest ring {largest} exceeds half the pool ({})",
                    self.pool_size
                ),
            ));
        }
        Ok(())
    }
}

pub(crate) fn check_offsets(offsets: &[u64]) -> Result<()> {
    match offsets.first() {
        None => return Err(Error::invalid("offsets", "at least one offset is required")),
        Some(&o) if o != 0 => {
            return Err(Error::invalid("offsets[0]", "first ring offset must be 0"))
        }
        _ => {}
    }
    if offsets.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid(
            "offsets",
            "ring offsets must be non-decreasing",
        ));
    }
    Ok(())
}

/// Symmetric matrix of channel-on probabilities between classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    r: usize,
    entries: Vec<f64>,
}

impl ChannelMatrix {
    /// Build from a row-major `r x r` slice. Entries may sit anywhere in the
    /// closed interval `[0, 1]`.
    pub fn new(r: usize, entries: Vec<f64>) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("alpha", "at least one class is required"));
        }
        if entries.len() != r * r {
            return Err(Error::invalid(
                "alpha",
                format!(
                    "expected {} entries for {r} classes, got {}",
                    r * r,
                    entries.len()
                ),
            ));
        }
        let mut entries = entries;
        for i in 0..r {
            for j in 0..r {
                let a = entries[i * r + j];
                if !(0.0..=1.0).contains(&a) {
                    return Err(Error::invalid(
                        format!("alpha[{i}][{j}]"),
                        format!("channel probability must lie in [0, 1], got {a}"),
                    ));
                }
            }
            for j in (i + 1)..r {
                let upper = entries[i * r + j];
                let lower = entries[j * r + i];
                if (upper - lower).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::invalid(
                        format!("alpha[{j}][{i}]"),
                        format!("matrix must be symmetric: {upper} vs {lower}"),
                    ));
                }
                entries[j * r + i] = upper;
            }
        }
        Ok(Self { r, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != r) {
            return Err(Error::invalid(
                format!("alpha[{i}]"),
                format!("row has {} entries, expected {r}", row.len()),
            ));
        }
        Self::new(r, rows.concat())
    }

    /// Every entry equal to `value`.
    pub fn uniform(r: usize, value: f64) -> Result<Self> {
        Self::new(r, vec![value; r * r])
    }

    pub fn classes(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.r + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.r..(i + 1) * self.r]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_entry(&self) -> f64 {
        self.entries
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Copy with `(i, j)` and `(j, i)` both set to `value`.
    pub fn with_entry(&self, i: usize, j: usize, value: f64) -> Result<Self> {
        check_index(i, self.r)?;
        check_index(j, self.r)?;
        let mut entries = self.entries.clone();
        entries[i * self.r + j] = value;
        entries[j * self.r + i] = value;
        Self::new(self.r, entries)
    }

    /// Copy with every diagonal entry set to `value`.
    pub fn with_diagonal(&self, value: f64) -> Result<Self> {
        let mut entries = self.entries.clone();
        for i in 0..self.r {
            entries[i * self.r + i] = value;
        }
        Self::new(self.r, entries)
    }

    /// Strict check used by the asymptotic theory: every entry in `(0, 1)`.
    pub fn check_open_interval(&self) -> Result<()> {
        for i in 0..self.r {
            for j in 0..self.r {
                let a = self.get(i, j);
                if a <= 0.0 || a >= 1.0 {
                    return Err(Error::invalid(
                        format!("alpha[{i}][{j}]"),
                        format!("entry {a} is outside the open interval (0, 1)"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The full parameter tuple for one network instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    dist: ClassDistribution,
    keys: KeyProfile,
    channel: ChannelMatrix,
}

impl SystemParams {
    pub fn new(dist: ClassDistribution, keys: KeyProfile, channel: ChannelMatrix) -> Result<Self> {
        let r = dist.classes();
        if keys.classes() != r {
            return Err(Error::invalid(
                "K",
                format!("{} ring sizes for {r} classes", keys.classes()),
            ));
        }
        if channel.classes() != r {
            return Err(Error::invalid(
                "alpha",
                format!("{0}x{0} matrix for {r} classes", channel.classes()),
            ));
        }
        Ok(Self {
            dist,
            keys,
            channel,
        })
    }

    pub fn classes(&self) -> usize {
        self.dist.classes()
    }

    pub fn dist(&self) -> &ClassDistribution {
        &self.dist
    }

    pub fn keys(&self) -> &KeyProfile {
        &self.keys
    }

    pub fn channel(&self) -> &ChannelMatrix {
        &self.channel
    }

    pub fn with_keys(&self, keys: KeyProfile) -> Result<Self> {
        Self::new(self.dist.clone(), keys, self.channel.clone())
    }

    pub fn with_channel(&self, channel: ChannelMatrix) -> Result<Self> {
        Self::new(self.dist.clone(), self.keys.clone(), channel)
    }

    /// Both strict-mode checks: `K_r <= P/2` and channel entries in `(0, 1)`.
    pub fn check_scaling(&self) -> Result<()> {
        self.keys.check_scaling()?;
        self.channel.check_open_interval()
    }
}

/// Everything derived from a [`SystemParams`] in one pass.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedProbabilities {
    /// `key_share[i][j]`: probability a class-i and a class-j ring intersect.
    pub key_share: Vec<Vec<f64>>,
    /// Mean key-sharing probability of a class-i node.
    pub mean_key_share: Vec<f64>,
    /// Mean edge probability of a class-i node in the composite graph.
    pub mean_edge: Vec<f64>,
    /// Class with the smallest mean edge probability.
    pub m: usize,
    /// Class maximising the channel probability in row `m`.
    pub d: usize,
    /// Class maximising `alpha[m][j] * key_share[m][j]`.
    pub s: usize,
    pub alpha_min: f64,
    pub alpha_max: f64,
}

impl DerivedProbabilities {
    pub fn min_mean_edge(&self) -> f64 {
        self.mean_edge[self.m]
    }
}

fn check_index(index: usize, classes: usize) -> Result<()> {
    if index >= classes {
        Err(Error::ClassIndex { index, classes })
    } else {
        Ok(())
    }
}

/// `ln( C(P - removed, drawn) / C(P, drawn) )`, the log-probability that a
/// uniform `drawn`-subset of a `pool`-set misses a fixed `removed`-subset.
///
/// Uses whichever of the two equivalent product forms has fewer factors, so
/// the result is exactly symmetric in `(removed, drawn)`. Caller guarantees
/// `removed + drawn <= pool`.
pub(crate) fn log_miss_ratio(removed: u64, drawn: u64, pool: u64) -> f64 {
    debug_assert!(removed + drawn <= pool);
    let (factors, hit) = if removed <= drawn {
        (removed, drawn)
    } else {
        (drawn, removed)
    };
    let hit = hit as f64;
    (0..factors)
        .map(|l| (-hit / (pool - l) as f64).ln_1p())
        .sum()
}

/// Probability that two uniformly drawn rings of sizes `k_i` and `k_j` from
/// a pool of `pool` keys share at least one key.
pub fn key_share_probability(k_i: u64, k_j: u64, pool: u64) -> Result<f64> {
    if k_i == 0 || k_j == 0 {
        return Err(Error::precondition("ring sizes must be positive"));
    }
    if k_i > pool || k_j > pool {
        return Err(Error::precondition(format!(
            "ring sizes ({k_i}, {k_j}) exceed pool size {pool}"
        )));
    }
    if k_i + k_j > pool {
        return Ok(1.0);
    }
    Ok(-log_miss_ratio(k_i, k_j, pool).exp_m1())
}

/// `ln(1 - p)` for rings of sizes `k_i`, `k_j`: negative infinity exactly
/// when `k_i + k_j > pool`. Stays finite where `p` itself rounds to 1.
pub fn log_miss_probability(k_i: u64, k_j: u64, pool: u64) -> Result<f64> {
    let p = key_share_probability(k_i, k_j, pool)?;
    if k_i + k_j > pool {
        debug_assert_eq!(p, 1.0);
        return Ok(f64::NEG_INFINITY);
    }
    Ok(log_miss_ratio(k_i, k_j, pool))
}

/// Key-sharing probability between classes `i` and `j`.
pub fn pairwise_key_prob(i: usize, j: usize, keys: &KeyProfile) -> Result<f64> {
    check_index(i, keys.classes())?;
    check_index(j, keys.classes())?;
    key_share_probability(keys.ring_size(i), keys.ring_size(j), keys.pool_size())
}

#[allow(clippy::needless_range_loop)]
fn key_share_matrix(keys: &KeyProfile) -> Vec<Vec<f64>> {
    let r = keys.classes();
    let mut p = vec![vec![0.0; r]; r];
    for i in 0..r {
        for j in i..r {
            // KeyProfile guarantees positive sizes within the pool
            let v = key_share_probability(keys.ring_size(i), keys.ring_size(j), keys.pool_size())
                .expect("validated key profile");
            p[i][j] = v;
            p[j][i] = v;
        }
    }
    p
}

/// `lambda_i = sum_j mu_j p_ij`.
pub fn mean_key_prob(i: usize, params: &SystemParams) -> Result<f64> {
    check_index(i, params.classes())?;
    let mut total = 0.0;
    for j in 0..params.classes() {
        total += params.dist.weight(j) * pairwise_key_prob(i, j, &params.keys)?;
    }
    Ok(total)
}

/// `Lambda_i = sum_j mu_j alpha_ij p_ij`.
pub fn mean_edge_prob(i: usize, params: &SystemParams) -> Result<f64> {
    check_index(i, params.classes())?;
    let mut total = 0.0;
    for j in 0..params.classes() {
        total += params.dist.weight(j)
            * params.channel.get(i, j)
            * pairwise_key_prob(i, j, &params.keys)?;
    }
    Ok(total)
}

/// First index of the minimum; ties go to the lowest index.
fn argmin(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.into_iter().enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// First index of the maximum; ties go to the lowest index.
fn argmax(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.into_iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

pub fn derive_all(params: &SystemParams) -> DerivedProbabilities {
    let r = params.classes();
    let mu = params.dist.weights();
    let alpha = &params.channel;
    let key_share = key_share_matrix(&params.keys);

    let mean_key_share: Vec<f64> = (0..r)
        .map(|i| (0..r).map(|j| mu[j] * key_share[i][j]).sum())
        .collect();
    let mean_edge: Vec<f64> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| mu[j] * alpha.get(i, j) * key_share[i][j])
                .sum()
        })
        .collect();

    let m = argmin(mean_edge.iter().copied());
    let d = argmax(alpha.row(m).iter().copied());
    let s = argmax((0..r).map(|j| alpha.get(m, j) * key_share[m][j]));

    DerivedProbabilities {
        key_share,
        mean_key_share,
        mean_edge,
        m,
        d,
        s,
        alpha_min: alpha.min_entry(),
        alpha_max: alpha.max_entry(),
    }
}

/// Whether the minimum mean degree clears the connectivity threshold,
/// i.e. `Lambda_m > ln(n) / n`.
pub fn exceeds_threshold(min_mean_edge: f64, n: usize) -> bool {
    let n = n as f64;
    min_mean_edge > n.ln() / n
}

/// Smallest `K_1` (with `K_j = K_1 + offsets[j]`) for which
/// `Lambda_m > ln(n) / n`. The minimising class is recomputed at every
/// candidate.
pub fn critical_k1(
    n: usize,
    dist: &ClassDistribution,
    channel: &ChannelMatrix,
    ring_offsets: &[u64],
    pool: u64,
) -> Result<u64> {
    if n < 2 {
        return Err(Error::precondition("threshold scan needs n >= 2"));
    }
    check_offsets(ring_offsets)?;
    let widest = *ring_offsets.last().expect("checked non-empty");
    if widest >= pool {
        return Err(Error::NoSolution { n, max_k1: 0 });
    }
    let max_k1 = pool - widest;
    for k1 in 1..=max_k1 {
        let keys = KeyProfile::from_offsets(k1, ring_offsets, pool)?;
        let params = SystemParams::new(dist.clone(), keys, channel.clone())?;
        if exceeds_threshold(derive_all(&params).min_mean_edge(), n) {
            return Ok(k1);
        }
    }
    Err(Error::NoSolution { n, max_k1 })
}

/// Elementary bracket around `p_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeProbBounds {
    /// `1 - exp(-K_i K_j / P)`
    pub lower: f64,
    /// `K_i K_j / (P - K_i)`, unclamped
    pub upper: f64,
}

impl EdgeProbBounds {
    pub fn upper_clamped(&self) -> f64 {
        self.upper.min(1.0)
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper_clamped()
    }
}

pub fn edge_prob_bounds(i: usize, j: usize, keys: &KeyProfile) -> Result<EdgeProbBounds> {
    check_index(i, keys.classes())?;
    check_index(j, keys.classes())?;
    ring_pair_bounds(keys.ring_size(i), keys.ring_size(j), keys.pool_size())
}

pub fn ring_pair_bounds(k_i: u64, k_j: u64, pool: u64) -> Result<EdgeProbBounds> {
    if k_i == 0 || k_j == 0 {
        return Err(Error::precondition("ring sizes must be positive"));
    }
    if k_i + k_j > pool {
        return Err(Error::precondition(format!(
            "bounds need K_i + K_j <= P, got {k_i} + {k_j} > {pool}"
        )));
    }
    let product = (k_i as f64) * (k_j as f64);
    Ok(EdgeProbBounds {
        lower: -(-product / pool as f64).exp_m1(),
        upper: product / (pool - k_i) as f64,
    })
}

/// Tests `C(P - ceil(a K_i), K_j) / C(P, K_j) <= (C(P - K_i, K_j) / C(P, K_j))^a`
/// for classes `i`, `j`.
pub fn combinatorial_bound_check(a: f64, i: usize, j: usize, keys: &KeyProfile) -> Result<bool> {
    check_index(i, keys.classes())?;
    check_index(j, keys.classes())?;
    combinatorial_bound_holds(a, keys.ring_size(i), keys.ring_size(j), keys.pool_size())
}

pub fn combinatorial_bound_holds(a: f64, k_i: u64, k_j: u64, pool: u64) -> Result<bool> {
    if !(a.is_finite() && a >= 1.0) {
        return Err(Error::precondition(format!(
            "scalar a must be >= 1, got {a}"
        )));
    }
    let scaled = (a * k_i as f64).ceil();
    if scaled + k_j as f64 > pool as f64 {
        return Err(Error::precondition(format!(
            "need ceil(a K_i) + K_j <= P, got {scaled} + {k_j} > {pool}"
        )));
    }
    let lhs = log_miss_ratio(scaled as u64, k_j, pool);
    let rhs = a * log_miss_ratio(k_i, k_j, pool);
    // both sides are sums of O(K) log terms; allow for their rounding
    Ok(lhs <= rhs + 1e-12 * (1.0 + rhs.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_class(k: [u64; 2], pool: u64, alpha: [[f64; 2]; 2]) -> SystemParams {
        SystemParams::new(
            ClassDistribution::new(vec![0.5, 0.5]).unwrap(),
            KeyProfile::new(k.to_vec(), pool).unwrap(),
            ChannelMatrix::from_rows(&[alpha[0].to_vec(), alpha[1].to_vec()]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn key_share_small_pools() {
        // 70 of the 100 subset pairs of a 5-pool intersect
        assert!((key_share_probability(2, 2, 5).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(key_share_probability(2, 2, 3).unwrap(), 1.0);
        assert!((key_share_probability(1, 3, 6).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn key_share_tiny_probability_keeps_precision() {
        let p = key_share_probability(1, 1, 1_000_000).unwrap();
        assert!((p - 1e-6).abs() < 1e-18, "{p}");
    }

    #[test]
    fn pairwise_rejects_bad_index() {
        let keys = KeyProfile::new(vec![2, 2], 5).unwrap();
        assert_eq!(
            pairwise_key_prob(0, 2, &keys),
            Err(Error::ClassIndex {
                index: 2,
                classes: 2
            })
        );
    }

    #[test]
    fn raw_key_share_rejects_oversized_ring() {
        assert!(key_share_probability(6, 1, 5).is_err());
    }

    #[test]
    fn mean_key_prob_examples() {
        let params = two_class([2, 2], 5, [[1.0, 1.0], [1.0, 1.0]]);
        assert!((mean_key_prob(0, &params).unwrap() - 0.7).abs() < 1e-12);

        let single = SystemParams::new(
            ClassDistribution::new(vec![1.0]).unwrap(),
            KeyProfile::new(vec![2], 3).unwrap(),
            ChannelMatrix::uniform(1, 1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(mean_key_prob(0, &single).unwrap(), 1.0);

        let params = two_class([1, 3], 6, [[1.0, 1.0], [1.0, 1.0]]);
        assert!((mean_key_prob(0, &params).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn mean_edge_prob_examples() {
        let ones = two_class([2, 3], 9, [[1.0, 1.0], [1.0, 1.0]]);
        for i in 0..2 {
            assert_eq!(
                mean_edge_prob(i, &ones).unwrap(),
                mean_key_prob(i, &ones).unwrap()
            );
        }
        let mixed = two_class([2, 2], 5, [[0.5, 1.0], [1.0, 0.5]]);
        assert!((mean_edge_prob(0, &mixed).unwrap() - 0.525).abs() < 1e-12);
        let zeros = two_class([2, 2], 5, [[0.0, 0.0], [0.0, 0.0]]);
        assert_eq!(mean_edge_prob(1, &zeros).unwrap(), 0.0);
    }

    #[test]
    fn derive_all_indices() {
        let fig1 = two_class([20, 25], 10_000, [[0.3, 0.2], [0.2, 0.3]]);
        assert_eq!(derive_all(&fig1).m, 0);

        let symmetric = two_class([10, 10], 1000, [[0.4, 0.4], [0.4, 0.4]]);
        let derived = derive_all(&symmetric);
        assert_eq!((derived.m, derived.d, derived.s), (0, 0, 0));

        let lopsided = two_class([10, 10], 1000, [[0.3, 0.6], [0.6, 0.9]]);
        let derived = derive_all(&lopsided);
        assert_eq!(derived.m, 0);
        assert_eq!(derived.d, 1);
        assert_eq!(derived.alpha_min, 0.3);
        assert_eq!(derived.alpha_max, 0.9);
    }

    #[test]
    fn critical_k1_trivial_cases() {
        let dist = ClassDistribution::new(vec![0.5, 0.5]).unwrap();
        let ones = ChannelMatrix::uniform(2, 1.0).unwrap();
        // n = 2 and rings covering most of a tiny pool clear ln2/2 at once
        assert_eq!(critical_k1(2, &dist, &ones, &[0, 1], 4).unwrap(), 1);

        let zeros = ChannelMatrix::uniform(2, 0.0).unwrap();
        assert!(matches!(
            critical_k1(500, &dist, &zeros, &[0, 5], 10_000),
            Err(Error::NoSolution { .. })
        ));
        assert!(critical_k1(1, &dist, &ones, &[0, 5], 10_000).is_err());
        assert!(critical_k1(500, &dist, &ones, &[1, 5], 10_000).is_err());
    }

    #[test]
    fn bounds_examples() {
        let b = ring_pair_bounds(2, 2, 5).unwrap();
        assert!((b.lower - (1.0 - (-0.8f64).exp())).abs() < 1e-15);
        assert!((b.upper - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(b.upper_clamped(), 1.0);
        assert!(b.contains(0.7));

        assert!(ring_pair_bounds(0, 2, 5).is_err());
        assert!(ring_pair_bounds(3, 3, 5).is_err());

        let b = ring_pair_bounds(1, 1, 1_000_000).unwrap();
        assert!((b.lower / 1e-6 - 1.0).abs() < 1e-5);
        assert!((b.upper / 1e-6 - 1.0).abs() < 1e-5);
        assert!(b.contains(key_share_probability(1, 1, 1_000_000).unwrap()));
    }

    #[test]
    fn combinatorial_bound_examples() {
        assert!(combinatorial_bound_holds(1.0, 5, 7, 40).unwrap());
        assert!(combinatorial_bound_holds(2.0, 2, 2, 10).unwrap());
        assert!(combinatorial_bound_holds(1.5, 3, 4, 30).unwrap());
        assert!(combinatorial_bound_holds(0.5, 3, 4, 30).is_err());
        assert!(combinatorial_bound_holds(4.0, 3, 20, 30).is_err());
    }

    #[test]
    fn validation_names_fields() {
        let err = ClassDistribution::new(vec![0.5, 0.4]).unwrap_err();
        assert!(matches!(err, Error::Invalid { ref field, .. } if field == "mu"));
        let err = KeyProfile::new(vec![5, 3], 10).unwrap_err();
        assert!(matches!(err, Error::Invalid { ref field, .. } if field == "K[1]"));
        let err = ChannelMatrix::from_rows(&[vec![0.1, 0.2], vec![0.3, 0.1]]).unwrap_err();
        assert!(matches!(err, Error::Invalid { ref field, .. } if field == "alpha[1][0]"));
        let err = ChannelMatrix::uniform(2, 1.5).unwrap_err();
        assert!(matches!(err, Error::Invalid { ref field, .. } if field == "alpha[0][0]"));
    }

    #[test]
    fn strict_mode_checks() {
        let keys = KeyProfile::new(vec![3, 6], 10).unwrap();
        assert!(keys.check_scaling().is_err());
        assert!(ChannelMatrix::uniform(2, 0.0)
            .unwrap()
            .check_open_interval()
            .is_err());
        assert!(ChannelMatrix::uniform(2, 0.5)
            .unwrap()
            .check_open_interval()
            .is_ok());
    }
}
