//! Brute-force reference computations. Nothing here shares code with the
//! formula or sampler paths it is used to check.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::sampler::SampledGraph;

/// Largest pool the exhaustive enumeration accepts.
pub const MAX_EXHAUSTIVE_POOL: u64 = 12;

/// Largest graph [`dfs_component_count`] accepts.
pub const MAX_DFS_NODES: usize = 64;

fn subsets_of_size(pool: u32, k: u32) -> Vec<u32> {
    (0u32..1 << pool).filter(|m| m.count_ones() == k).collect()
}

/// `(intersecting, total)` over all ordered pairs of a `k_i`-subset and a
/// `k_j`-subset of a `pool`-set.
pub fn exhaustive_key_fraction(k_i: u64, k_j: u64, pool: u64) -> Result<(u64, u64)> {
    if pool > MAX_EXHAUSTIVE_POOL {
        return Err(Error::precondition(format!(
            "exhaustive enumeration limited to P <= {MAX_EXHAUSTIVE_POOL}, got {pool}"
        )));
    }
    if k_i > pool || k_j > pool {
        return Err(Error::precondition("ring size exceeds pool"));
    }
    let left = subsets_of_size(pool as u32, k_i as u32);
    let right = subsets_of_size(pool as u32, k_j as u32);
    let mut hits = 0u64;
    for &a in &left {
        hits += right.iter().filter(|&&b| a & b != 0).count() as u64;
    }
    Ok((hits, (left.len() * right.len()) as u64))
}

pub fn exhaustive_key_prob(k_i: u64, k_j: u64, pool: u64) -> Result<f64> {
    let (hits, total) = exhaustive_key_fraction(k_i, k_j, pool)?;
    Ok(hits as f64 / total as f64)
}

/// Exact binomial coefficient; `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// `C(P - removed, drawn) / C(P, drawn)` from exact integer binomials.
pub fn exact_miss_ratio(removed: u64, drawn: u64, pool: u64) -> Result<f64> {
    if removed > pool {
        return Err(Error::precondition("removed exceeds pool"));
    }
    let num =
        binomial(pool - removed, drawn).ok_or_else(|| Error::precondition("binomial overflow"))?;
    let den = binomial(pool, drawn).ok_or_else(|| Error::precondition("binomial overflow"))?;
    Ok(num as f64 / den as f64)
}

/// Bitmask adjacency rows of a graph with at most 64 nodes.
pub fn adjacency_masks(graph: &SampledGraph) -> Result<Vec<u64>> {
    let n = graph.node_count();
    if n > MAX_DFS_NODES {
        return Err(Error::precondition(format!(
            "bitmask adjacency limited to {MAX_DFS_NODES} nodes, got {n}"
        )));
    }
    let mut rows = vec![0u64; n];
    for &(u, v) in graph.edges() {
        rows[u as usize] |= 1 << v;
        rows[v as usize] |= 1 << u;
    }
    Ok(rows)
}

/// Counts components by recursive depth-first search.
pub fn dfs_component_count(adjacency: &[u64]) -> Result<usize> {
    let n = adjacency.len();
    if n > MAX_DFS_NODES {
        return Err(Error::precondition(format!(
            "DFS oracle limited to {MAX_DFS_NODES} nodes, got {n}"
        )));
    }
    fn visit(node: usize, adjacency: &[u64], seen: &mut u64) {
        *seen |= 1 << node;
        let mut next = adjacency[node] & !*seen;
        while next != 0 {
            let v = next.trailing_zeros() as usize;
            if *seen & (1 << v) == 0 {
                visit(v, adjacency, seen);
            }
            next &= next - 1;
        }
    }
    let mut seen = 0u64;
    let mut components = 0;
    for node in 0..n {
        if seen & (1 << node) == 0 {
            components += 1;
            visit(node, adjacency, &mut seen);
        }
    }
    Ok(components)
}

/// Fraction of `samples` independent (class-i ring, class-j ring, channel
/// coin) triples that produce an edge.
pub fn empirical_edge_freq<R: Rng + ?Sized>(
    params: &SystemParams,
    i: usize,
    j: usize,
    samples: u64,
    rng: &mut R,
) -> Result<f64> {
    if samples < 10_000 {
        return Err(Error::precondition("at least 10^4 samples are required"));
    }
    let r = params.classes();
    if i >= r || j >= r {
        return Err(Error::ClassIndex {
            index: i.max(j),
            classes: r,
        });
    }
    let keys = params.keys();
    let pool = keys.pool_size() as usize;
    let (k_i, k_j) = (keys.ring_size(i) as usize, keys.ring_size(j) as usize);
    let alpha = params.channel().get(i, j);
    let mut hits = 0u64;
    for _ in 0..samples {
        let ring_i: HashSet<usize> = index::sample(rng, pool, k_i).into_iter().collect();
        let ring_j = index::sample(rng, pool, k_j);
        let on = rng.random_bool(alpha);
        if on && ring_j.iter().any(|key| ring_i.contains(&key)) {
            hits += 1;
        }
    }
    Ok(hits as f64 / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_examples() {
        assert_eq!(exhaustive_key_fraction(2, 2, 5).unwrap(), (70, 100));
        assert_eq!(exhaustive_key_prob(1, 1, 2).unwrap(), 0.5);
        assert_eq!(exhaustive_key_prob(3, 3, 5).unwrap(), 1.0);
        assert!(exhaustive_key_prob(1, 1, 13).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(60, 30), Some(118_264_581_564_861_424));
        assert_eq!(binomial(3, 4), Some(0));
        assert_eq!(exact_miss_ratio(1, 3, 6).unwrap(), 0.5);
    }

    #[test]
    fn dfs_examples() {
        assert_eq!(dfs_component_count(&[0, 0, 0]).unwrap(), 3);
        let triangle = [0b110, 0b101, 0b011];
        assert_eq!(dfs_component_count(&triangle).unwrap(), 1);
        let with_isolated = [0b0110, 0b0101, 0b0011, 0];
        assert_eq!(dfs_component_count(&with_isolated).unwrap(), 2);
        assert!(dfs_component_count(&[0; 65]).is_err());
    }
}
