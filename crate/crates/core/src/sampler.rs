//! Random instances of the key graph, the channel graph and their
//! intersection.

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::model::{ChannelMatrix, ClassDistribution, KeyProfile, SystemParams};
use crate::seed::splitmix_at;

/// Class labels and key rings for every node.
///
/// Rings are stored back to back in one buffer; ring `x` is sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeAssignment {
    classes: Vec<usize>,
    keys: Vec<u32>,
    offsets: Vec<usize>,
}

impl NodeAssignment {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn class_of(&self, node: usize) -> usize {
        self.classes[node]
    }

    pub fn ring(&self, node: usize) -> &[u32] {
        &self.keys[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn rings(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.len()).map(move |x| self.ring(x))
    }
}

/// Undirected simple graph with edges kept as `(u, v)` pairs, `u < v`,
/// sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    degree: Vec<u32>,
}

impl SampledGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            degree: vec![0; n],
        }
    }

    /// Build from arbitrary pairs. Rejects self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::precondition(format!(
                    "edge ({a}, {b}) out of range for {n} nodes"
                )));
            }
            if a == b {
                return Err(Error::precondition(format!("self-loop at node {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            edges.push((u as u32, v as u32));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::precondition(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        let mut graph = Self::empty(n);
        for (u, v) in edges {
            graph.push_edge(u, v);
        }
        Ok(graph)
    }

    fn push_edge(&mut self, u: u32, v: u32) {
        self.edges.push((u, v));
        self.degree[u as usize] += 1;
        self.degree[v as usize] += 1;
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degree(&self, node: usize) -> u32 {
        self.degree[node]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degree
    }
}

/// Above this ring-to-pool ratio keys are drawn by partial Fisher-Yates,
/// below it by rejection into a sorted buffer.
const SHUFFLE_RATIO: f64 = 1.0 / 64.0;

/// Reusable state for drawing uniform k-subsets of `[0, pool)`.
struct RingSampler {
    pool: u32,
    perm: Vec<u32>,
    swaps: Vec<u32>,
}

impl RingSampler {
    fn new(pool: u64) -> Result<Self> {
        let pool = u32::try_from(pool)
            .map_err(|_| Error::invalid("P", format!("pool size {pool} exceeds u32 key ids")))?;
        Ok(Self {
            pool,
            perm: Vec::new(),
            swaps: Vec::new(),
        })
    }

    /// Appends a sorted uniform `k`-subset to `out`.
    fn draw<R: Rng + ?Sized>(&mut self, k: u32, rng: &mut R, out: &mut Vec<u32>) {
        debug_assert!(k <= self.pool);
        let start = out.len();
        if f64::from(k) > SHUFFLE_RATIO * f64::from(self.pool) {
            self.shuffle_draw(k, rng, out);
        } else {
            while out.len() - start < k as usize {
                let key = rng.random_range(0..self.pool);
                let ring = &out[start..];
                if let Err(pos) = ring.binary_search(&key) {
                    out.insert(start + pos, key);
                }
            }
        }
        debug_assert!(out[start..].windows(2).all(|w| w[0] < w[1]));
    }

    fn shuffle_draw<R: Rng + ?Sized>(&mut self, k: u32, rng: &mut R, out: &mut Vec<u32>) {
        if self.perm.is_empty() {
            self.perm = (0..self.pool).collect();
        }
        self.swaps.clear();
        for pos in 0..k {
            let pick = rng.random_range(pos..self.pool);
            self.perm.swap(pos as usize, pick as usize);
            self.swaps.push(pick);
        }
        let start = out.len();
        out.extend_from_slice(&self.perm[..k as usize]);
        out[start..].sort_unstable();
        // undo the swaps so the scratch permutation is the identity again
        for (pos, &pick) in self.swaps.iter().enumerate().rev() {
            self.perm.swap(pos, pick as usize);
        }
    }
}

/// i.i.d. class labels drawn from `dist`.
pub fn assign_classes<R: Rng + ?Sized>(
    n: usize,
    dist: &ClassDistribution,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::precondition("node count must be at least 1"));
    }
    let r = dist.classes();
    if r == 1 {
        return Ok(vec![0; n]);
    }
    let mut cumulative = Vec::with_capacity(r);
    let mut acc = 0.0;
    for &w in dist.weights() {
        acc += w;
        cumulative.push(acc);
    }
    Ok((0..n)
        .map(|_| {
            let u: f64 = rng.random();
            cumulative[..r - 1]
                .iter()
                .position(|&c| u < c)
                .unwrap_or(r - 1)
        })
        .collect())
}

/// Draws one uniform ring per node, sized by the node's class.
pub fn sample_key_rings<R: Rng + ?Sized>(
    classes: &[usize],
    keys: &KeyProfile,
    rng: &mut R,
) -> Result<NodeAssignment> {
    let mut sampler = RingSampler::new(keys.pool_size())?;
    let mut offsets = Vec::with_capacity(classes.len() + 1);
    offsets.push(0);
    let total = classes
        .iter()
        .map(|&c| keys.ring_sizes().get(c).copied().unwrap_or(0) as usize)
        .sum();
    let mut ring_keys = Vec::with_capacity(total);
    for (x, &class) in classes.iter().enumerate() {
        if class >= keys.classes() {
            return Err(Error::invalid(
                format!("classes[{x}]"),
                format!("class {class} out of range for {} classes", keys.classes()),
            ));
        }
        // KeyProfile keeps every size within the pool
        sampler.draw(keys.ring_size(class) as u32, rng, &mut ring_keys);
        offsets.push(ring_keys.len());
    }
    Ok(NodeAssignment {
        classes: classes.to_vec(),
        keys: ring_keys,
        offsets,
    })
}

/// Whether two sorted rings share an element.
#[inline]
pub fn rings_intersect(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (x, y) = (a[i], b[j]);
        if x == y {
            return true;
        }
        i += usize::from(x < y);
        j += usize::from(y < x);
    }
    false
}

/// Edge between every pair of nodes whose rings intersect.
pub fn build_key_graph(assignment: &NodeAssignment) -> SampledGraph {
    let n = assignment.len();
    let mut graph = SampledGraph::empty(n);
    for x in 0..n {
        let ring_x = assignment.ring(x);
        for y in (x + 1)..n {
            if rings_intersect(ring_x, assignment.ring(y)) {
                graph.push_edge(x as u32, y as u32);
            }
        }
    }
    graph
}

/// Bernoulli test against a 64-bit uniform draw. `p = 1` always succeeds
/// and `p = 0` never does.
#[derive(Debug, Clone, Copy)]
enum Coin {
    Never,
    Always,
    Below(u64),
}

impl Coin {
    fn new(p: f64) -> Self {
        if p <= 0.0 {
            Coin::Never
        } else if p >= 1.0 {
            Coin::Always
        } else {
            // P[u < t] = t / 2^64 for uniform u
            Coin::Below((p * 18_446_744_073_709_551_616.0) as u64)
        }
    }

    #[inline]
    fn accepts(self, u: u64) -> bool {
        match self {
            Coin::Never => false,
            Coin::Always => true,
            Coin::Below(t) => u < t,
        }
    }
}

/// Channel states for every unordered pair in one graph.
///
/// The coin of pair `(x, y)`, `x < y`, is a fixed function of a per-graph
/// seed and the pair index, so any traversal order (or a traversal that
/// skips pairs) sees the same decision for a given pair.
struct ChannelCoins {
    seed: u64,
    n: u64,
    r: usize,
    coins: Vec<Coin>,
}

impl ChannelCoins {
    fn draw<R: RngCore + ?Sized>(n: usize, channel: &ChannelMatrix, rng: &mut R) -> Self {
        Self {
            seed: rng.next_u64(),
            n: n as u64,
            r: channel.classes(),
            coins: channel.entries().iter().map(|&a| Coin::new(a)).collect(),
        }
    }

    #[inline]
    fn is_on(&self, x: usize, class_x: usize, y: usize, class_y: usize) -> bool {
        let coin = self.coins[class_x * self.r + class_y];
        match coin {
            Coin::Never => false,
            Coin::Always => true,
            Coin::Below(_) => {
                let pair = x as u64 * self.n + y as u64;
                coin.accepts(splitmix_at(self.seed, pair))
            }
        }
    }
}

fn check_classes(classes: &[usize], r: usize) -> Result<()> {
    match classes.iter().enumerate().find(|(_, &c)| c >= r) {
        Some((x, &c)) => Err(Error::invalid(
            format!("classes[{x}]"),
            format!("class {c} out of range for {r} classes"),
        )),
        None => Ok(()),
    }
}

/// One channel coin per unordered pair. Draws a single `u64` from `rng`
/// as the per-graph channel seed.
pub fn build_channel_graph<R: Rng + ?Sized>(
    classes: &[usize],
    channel: &ChannelMatrix,
    rng: &mut R,
) -> Result<SampledGraph> {
    check_classes(classes, channel.classes())?;
    let n = classes.len();
    let coins = ChannelCoins::draw(n, channel, rng);
    let mut graph = SampledGraph::empty(n);
    for x in 0..n {
        for y in (x + 1)..n {
            if coins.is_on(x, classes[x], y, classes[y]) {
                graph.push_edge(x as u32, y as u32);
            }
        }
    }
    Ok(graph)
}

/// Classes followed by key rings, both drawn from `rng`.
pub fn sample_assignment<R: Rng + ?Sized>(
    n: usize,
    params: &SystemParams,
    rng: &mut R,
) -> Result<NodeAssignment> {
    let classes = assign_classes(n, params.dist(), rng)?;
    sample_key_rings(&classes, params.keys(), rng)
}

/// How the fused builder finds pairs that are adjacent in both graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FusedStrategy {
    /// Visit every pair, flip its channel coin and merge the two rings only
    /// when the channel is on.
    PairScan,
    /// Walk a key-to-holders index so only key-sharing pairs are visited,
    /// then flip their channel coins.
    KeyIndex,
    /// `KeyIndex` when rings are sparse in the pool, else `PairScan`.
    Auto,
}

impl FusedStrategy {
    fn resolve(self, assignment: &NodeAssignment, pool: u64) -> FusedStrategy {
        match self {
            FusedStrategy::Auto => {
                // expected holder-list work per node vs. one pass over its pairs
                let n = assignment.len() as f64;
                let mean_ring = assignment.keys.len() as f64 / n.max(1.0);
                let index_work = mean_ring * mean_ring * n / pool as f64;
                if index_work < 0.25 * n {
                    FusedStrategy::KeyIndex
                } else {
                    FusedStrategy::PairScan
                }
            }
            other => other,
        }
    }
}

/// Samples the composite graph: an edge needs a shared key and an on
/// channel.
///
/// Stream usage matches [`sample_assignment`] followed by
/// [`build_channel_graph`], so the result equals the explicit intersection
/// of [`build_key_graph`] and the channel graph built from the same seed.
pub fn build_intersection<R: Rng + ?Sized>(
    n: usize,
    params: &SystemParams,
    rng: &mut R,
) -> Result<(NodeAssignment, SampledGraph)> {
    build_intersection_with(n, params, rng, FusedStrategy::Auto)
}

pub fn build_intersection_with<R: Rng + ?Sized>(
    n: usize,
    params: &SystemParams,
    rng: &mut R,
    strategy: FusedStrategy,
) -> Result<(NodeAssignment, SampledGraph)> {
    let assignment = sample_assignment(n, params, rng)?;
    let coins = ChannelCoins::draw(n, params.channel(), rng);
    let graph = match strategy.resolve(&assignment, params.keys().pool_size()) {
        FusedStrategy::KeyIndex => fused_key_index(&assignment, &coins, params.keys().pool_size()),
        _ => fused_pair_scan(&assignment, &coins),
    };
    Ok((assignment, graph))
}

fn fused_pair_scan(assignment: &NodeAssignment, coins: &ChannelCoins) -> SampledGraph {
    let n = assignment.len();
    let classes = assignment.classes();
    let mut graph = SampledGraph::empty(n);
    for x in 0..n {
        let ring_x = assignment.ring(x);
        for y in (x + 1)..n {
            if coins.is_on(x, classes[x], y, classes[y])
                && rings_intersect(ring_x, assignment.ring(y))
            {
                graph.push_edge(x as u32, y as u32);
            }
        }
    }
    graph
}

fn fused_key_index(assignment: &NodeAssignment, coins: &ChannelCoins, pool: u64) -> SampledGraph {
    let n = assignment.len();
    let classes = assignment.classes();
    let pool = pool as usize;

    // holders of each key in CSR form, node ids ascending within a key
    let mut start = vec![0u32; pool + 1];
    for &key in &assignment.keys {
        start[key as usize + 1] += 1;
    }
    for k in 0..pool {
        start[k + 1] += start[k];
    }
    let mut fill = start.clone();
    let mut holders = vec![0u32; assignment.keys.len()];
    for x in 0..n {
        for &key in assignment.ring(x) {
            let slot = &mut fill[key as usize];
            holders[*slot as usize] = x as u32;
            *slot += 1;
        }
    }

    let mut last_seen = vec![u32::MAX; n];
    let mut graph = SampledGraph::empty(n);
    for x in 0..n {
        let row_start = graph.edges.len();
        for &key in assignment.ring(x) {
            let list = &holders[start[key as usize] as usize..start[key as usize + 1] as usize];
            let later = list.partition_point(|&y| y as usize <= x);
            for &y in &list[later..] {
                let slot = &mut last_seen[y as usize];
                if *slot == x as u32 {
                    continue;
                }
                *slot = x as u32;
                if coins.is_on(x, classes[x], y as usize, classes[y as usize]) {
                    graph.push_edge(x as u32, y);
                }
            }
        }
        graph.edges[row_start..].sort_unstable();
    }
    graph
}

/// Edges present in both graphs.
pub fn intersect_graphs(a: &SampledGraph, b: &SampledGraph) -> Result<SampledGraph> {
    if a.node_count() != b.node_count() {
        return Err(Error::precondition("graphs have different node counts"));
    }
    let mut graph = SampledGraph::empty(a.node_count());
    for &(u, v) in a.edges() {
        if b.edges().binary_search(&(u, v)).is_ok() {
            graph.push_edge(u, v);
        }
    }
    Ok(graph)
}
