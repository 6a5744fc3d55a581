//! Critical FK (random-cluster) percolation on lattice regions: cluster
//! labelling, Chayes–Machta dynamics, exact enumeration on small graphs.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{Region, NONE};

#[derive(Debug, Error, PartialEq)]
pub enum SamplerError {
    #[error("q must be at least 1, got {0}")]
    QTooSmall(f64),
    #[error("p must lie in (0, 1), got {0}")]
    BadP(f64),
    #[error("exact enumeration supports at most {max} edges, region has {got}")]
    TooManyEdges { max: usize, got: usize },
    #[error("thinning must be at least one sweep")]
    ZeroThin,
    #[error("snapshot: {0}")]
    Snapshot(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Free,
    /// All of `∂V` identified through a ghost vertex.
    Wired,
}

/// `p_c(q) = √q / (1 + √q)`.
pub fn p_critical(q: f64) -> Result<f64, SamplerError> {
    if !(q >= 1.0) {
        return Err(SamplerError::QTooSmall(q));
    }
    Ok(q.sqrt() / (1.0 + q.sqrt()))
}

/// Open/closed state of every edge of a region, in the region's edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BondConfig {
    region: Arc<Region>,
    open: Vec<bool>,
}

impl BondConfig {
    pub fn all_open(region: Arc<Region>) -> Self {
        let n = region.n_edges();
        BondConfig {
            region,
            open: vec![true; n],
        }
    }

    pub fn all_closed(region: Arc<Region>) -> Self {
        let n = region.n_edges();
        BondConfig {
            region,
            open: vec![false; n],
        }
    }

    pub fn from_bits(region: Arc<Region>, open: Vec<bool>) -> Result<Self, SamplerError> {
        if open.len() != region.n_edges() {
            return Err(SamplerError::Snapshot(format!(
                "expected {} edges, got {}",
                region.n_edges(),
                open.len()
            )));
        }
        Ok(BondConfig { region, open })
    }

    /// Configuration whose edge `i` is open iff bit `i` of `mask` is set.
    pub fn from_mask(region: Arc<Region>, mask: u64) -> Self {
        let open = (0..region.n_edges()).map(|i| mask >> i & 1 == 1).collect();
        BondConfig { region, open }
    }

    pub fn region(&self) -> &Arc<Region> {
        &self.region
    }

    pub fn bits(&self) -> &[bool] {
        &self.open
    }

    #[inline]
    pub fn is_open(&self, e: usize) -> bool {
        self.open[e]
    }

    pub fn set(&mut self, e: usize, open: bool) {
        self.open[e] = open;
    }

    pub fn n_open(&self) -> usize {
        self.open.iter().filter(|&&b| b).count()
    }

    pub fn mask(&self) -> u64 {
        self.open
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &b)| if b { m | 1 << i } else { m })
    }

    /// The configuration seen on a subregion: edges are matched by their
    /// endpoint coordinates; edges of `sub` absent here are closed.
    pub fn restrict_to(&self, sub: &Arc<Region>) -> BondConfig {
        let open = (0..sub.n_edges())
            .map(|e| {
                let (p, q) = sub.edge_points(e);
                self.region.edge_between(p, q).is_some_and(|f| self.open[f])
            })
            .collect();
        BondConfig {
            region: Arc::clone(sub),
            open,
        }
    }

    /// `bonds <n>` header, then hex digits; edge `4k` is the most
    /// significant bit of digit `k`.
    pub fn to_snapshot(&self) -> String {
        let mut s = format!("bonds {}\n", self.open.len());
        for chunk in self.open.chunks(4) {
            let mut d = 0u32;
            for (i, &b) in chunk.iter().enumerate() {
                if b {
                    d |= 8 >> i;
                }
            }
            s.push(char::from_digit(d, 16).unwrap_or('0'));
        }
        s.push('\n');
        s
    }

    pub fn from_snapshot(region: Arc<Region>, text: &str) -> Result<Self, SamplerError> {
        let bad = |m: &str| SamplerError::Snapshot(m.to_string());
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty snapshot"))?;
        let n: usize = header
            .strip_prefix("bonds ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| bad("header must be `bonds <n>`"))?;
        let hex: String = lines.flat_map(|l| l.trim().chars()).collect();
        if hex.len() != n.div_ceil(4) {
            return Err(bad("hex length does not match edge count"));
        }
        let mut open = Vec::with_capacity(n);
        for c in hex.chars() {
            let d = c.to_digit(16).ok_or_else(|| bad("non-hex digit"))?;
            for i in 0..4 {
                if open.len() < n {
                    open.push(d & (8 >> i) != 0);
                }
            }
        }
        BondConfig::from_bits(region, open)
    }
}

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn reset(&mut self, n: usize) {
        self.parent.clear();
        self.parent.extend(0..n as u32);
        self.size.clear();
        self.size.resize(n, 1);
    }

    #[inline]
    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let g = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = g;
            x = g;
        }
        x
    }

    #[inline]
    pub(crate) fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

/// Cluster decomposition of `ω^ξ`.
///
/// Ids are canonical: clusters are numbered in increasing order of their
/// smallest vertex. With wired boundary conditions the ghost belongs to
/// the boundary cluster and is not a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSet {
    cluster_of: Vec<u32>,
    count: usize,
    touches_inner: Vec<bool>,
    touches_outer: Vec<bool>,
    touches_boundary: Vec<bool>,
    ghost: Option<u32>,
}

impl ClusterSet {
    #[inline]
    pub fn cluster_of(&self, v: u32) -> u32 {
        self.cluster_of[v as usize]
    }

    pub fn ids(&self) -> &[u32] {
        &self.cluster_of
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn touches_inner(&self, c: u32) -> bool {
        self.touches_inner[c as usize]
    }

    pub fn touches_outer(&self, c: u32) -> bool {
        self.touches_outer[c as usize]
    }

    pub fn touches_boundary(&self, c: u32) -> bool {
        self.touches_boundary[c as usize]
    }

    /// Id of the cluster containing the ghost vertex (wired only).
    pub fn ghost(&self) -> Option<u32> {
        self.ghost
    }

    /// Vertex lists per cluster.
    pub fn members(&self) -> Vec<Vec<u32>> {
        let mut m = vec![Vec::new(); self.count];
        for (v, &c) in self.cluster_of.iter().enumerate() {
            m[c as usize].push(v as u32);
        }
        m
    }
}

pub fn label_clusters(cfg: &BondConfig, bc: BoundaryCondition) -> ClusterSet {
    let mut uf = UnionFind::new(0);
    label_with(cfg.region(), cfg.bits(), bc, &mut uf)
}

pub(crate) fn label_with(
    region: &Region,
    open: &[bool],
    bc: BoundaryCondition,
    uf: &mut UnionFind,
) -> ClusterSet {
    let n = region.n_vertices();
    let bnd = region.boundaries();
    let wired = bc == BoundaryCondition::Wired;
    let ghost_v = n as u32;
    uf.reset(n + 1);
    for (e, &(a, b)) in region.edges().iter().enumerate() {
        if open[e] {
            uf.union(a, b);
        }
    }
    let mut any_boundary = false;
    if wired {
        for v in 0..n as u32 {
            if bnd.is_full(v) {
                uf.union(v, ghost_v);
                any_boundary = true;
            }
        }
    }
    // canonical ids in order of smallest member
    let mut id_of_root = vec![NONE; n + 1];
    let mut cluster_of = vec![0u32; n];
    let mut count = 0u32;
    for v in 0..n as u32 {
        let r = uf.find(v) as usize;
        if id_of_root[r] == NONE {
            id_of_root[r] = count;
            count += 1;
        }
        cluster_of[v as usize] = id_of_root[r];
    }
    let ghost = if wired {
        if any_boundary {
            Some(id_of_root[uf.find(ghost_v) as usize])
        } else {
            // isolated ghost: a cluster of its own with no vertices
            let g = count;
            count += 1;
            Some(g)
        }
    } else {
        None
    };
    let count = count as usize;
    let mut touches_inner = vec![false; count];
    let mut touches_outer = vec![false; count];
    let mut touches_boundary = vec![false; count];
    for &v in region.inner_ring() {
        touches_inner[cluster_of[v as usize] as usize] = true;
    }
    for &v in region.outer_ring() {
        touches_outer[cluster_of[v as usize] as usize] = true;
    }
    for v in 0..n as u32 {
        if bnd.is_full(v) {
            touches_boundary[cluster_of[v as usize] as usize] = true;
        }
    }
    ClusterSet {
        cluster_of,
        count,
        touches_inner,
        touches_outer,
        touches_boundary,
        ghost,
    }
}

/// Number of clusters of `ω^ξ` for an edge mask, counting the wired boundary
/// cluster once.
fn cluster_count_mask(
    region: &Region,
    mask: u64,
    bc: BoundaryCondition,
    uf: &mut UnionFind,
) -> usize {
    let open: Vec<bool> = (0..region.n_edges()).map(|i| mask >> i & 1 == 1).collect();
    label_with(region, &open, bc, uf).count()
}

pub const MAX_EXACT_EDGES: usize = 20;

/// Exact random-cluster law, indexed by edge mask (bit `i` = edge `i` open).
pub fn exact_rc_distribution(
    region: &Region,
    q: f64,
    p: f64,
    bc: BoundaryCondition,
) -> Result<Vec<f64>, SamplerError> {
    let m = region.n_edges();
    if m > MAX_EXACT_EDGES {
        return Err(SamplerError::TooManyEdges {
            max: MAX_EXACT_EDGES,
            got: m,
        });
    }
    if !(q > 0.0) {
        return Err(SamplerError::QTooSmall(q));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(SamplerError::BadP(p));
    }
    let mut uf = UnionFind::new(0);
    let mut w: Vec<f64> = (0..1u64 << m)
        .map(|mask| {
            let o = mask.count_ones() as i32;
            let k = cluster_count_mask(region, mask, bc, &mut uf) as i32;
            p.powi(o) * (1.0 - p).powi(m as i32 - o) * q.powi(k)
        })
        .collect();
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= z);
    Ok(w)
}

/// One Markov chain of the Chayes–Machta dynamics.
#[derive(Clone, Debug)]
pub struct ChainState {
    config: BondConfig,
    rng: ChaCha8Rng,
    sweeps: u64,
    q: f64,
    p: f64,
    bc: BoundaryCondition,
    uf: UnionFind,
    active: Vec<bool>,
    labels: Option<ClusterSet>,
}

/// Generator for chain `chain` of a run with master seed `seed`: the
/// ChaCha stream number separates chains.
pub fn chain_rng(seed: u64, chain: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain);
    rng
}

impl ChainState {
    /// Chain at `p_c(q)` started from the all-open configuration.
    pub fn new(
        region: Arc<Region>,
        q: f64,
        bc: BoundaryCondition,
        seed: u64,
        chain: u64,
    ) -> Result<Self, SamplerError> {
        let p = p_critical(q)?;
        Self::with_p(region, q, p, bc, seed, chain)
    }

    pub fn with_p(
        region: Arc<Region>,
        q: f64,
        p: f64,
        bc: BoundaryCondition,
        seed: u64,
        chain: u64,
    ) -> Result<Self, SamplerError> {
        if !(q >= 1.0) {
            return Err(SamplerError::QTooSmall(q));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(SamplerError::BadP(p));
        }
        Ok(ChainState {
            config: BondConfig::all_open(region),
            rng: chain_rng(seed, chain),
            sweeps: 0,
            q,
            p,
            bc,
            uf: UnionFind::new(0),
            active: Vec::new(),
            labels: None,
        })
    }

    pub fn config(&self) -> &BondConfig {
        &self.config
    }

    pub fn set_config(&mut self, cfg: BondConfig) {
        self.config = cfg;
        self.labels = None;
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn sweeps(&self) -> u64 {
        self.sweeps
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn boundary(&self) -> BoundaryCondition {
        self.bc
    }

    /// Clusters of the current configuration.
    pub fn clusters(&mut self) -> ClusterSet {
        self.clusters_and_rng().0.clone()
    }

    /// Clusters of the current configuration together with the chain's
    /// generator. The labelling is kept for the next sweep.
    pub fn clusters_and_rng(&mut self) -> (&ClusterSet, &mut ChaCha8Rng) {
        if self.labels.is_none() {
            let region = Arc::clone(self.config.region());
            self.labels = Some(label_with(
                &region,
                self.config.bits(),
                self.bc,
                &mut self.uf,
            ));
        }
        (
            self.labels.as_ref().expect("labels were just computed"),
            &mut self.rng,
        )
    }

    /// One sweep: activate each cluster with probability `1/q`, resample the
    /// edges inside the active set, keep inactive clusters frozen.
    pub fn step(&mut self) {
        self.sweeps += 1;
        let region = Arc::clone(self.config.region());
        let p = self.p;
        let cached = self.labels.take();
        if self.q == 1.0 {
            for b in self.config.open.iter_mut() {
                *b = self.rng.random::<f64>() < p;
            }
            return;
        }
        let cs = cached
            .unwrap_or_else(|| label_with(&region, self.config.bits(), self.bc, &mut self.uf));
        let inv_q = 1.0 / self.q;
        self.active.clear();
        for _ in 0..cs.count() {
            let a = self.rng.random::<f64>() < inv_q;
            self.active.push(a);
        }
        for (e, &(a, b)) in region.edges().iter().enumerate() {
            let (ca, cb) = (cs.cluster_of(a), cs.cluster_of(b));
            let (aa, ab) = (self.active[ca as usize], self.active[cb as usize]);
            if aa && ab {
                self.config.open[e] = self.rng.random::<f64>() < p;
            } else if ca != cb {
                self.config.open[e] = false;
            }
        }
    }

    pub fn run(&mut self, sweeps: u64) {
        for _ in 0..sweeps {
            self.step();
        }
    }
}

/// `count` configurations, `thin` sweeps apart, after `burn_in` sweeps from
/// the all-open start. Chain 0 of master seed `seed`.
pub fn sample(
    region: Arc<Region>,
    q: f64,
    bc: BoundaryCondition,
    burn_in: u64,
    thin: u64,
    count: usize,
    seed: u64,
) -> Result<Vec<BondConfig>, SamplerError> {
    if thin == 0 {
        return Err(SamplerError::ZeroThin);
    }
    let mut chain = ChainState::new(region, q, bc, seed, 0)?;
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    chain.run(burn_in);
    for _ in 0..count {
        chain.run(thin);
        out.push(chain.config().clone());
    }
    Ok(out)
}

/// Integrated autocorrelation time `1 + 2 Σ ρ(t)` of a scalar series, with
/// the sum truncated at the first nonpositive autocorrelation.
pub fn integrated_autocorrelation(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 2 {
        return 1.0;
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    if var == 0.0 {
        return 1.0;
    }
    let mut tau = 1.0;
    for t in 1..n / 2 {
        let c = (0..n - t)
            .map(|i| (series[i] - mean) * (series[i + t] - mean))
            .sum::<f64>()
            / ((n - t) as f64 * var);
        if c <= 0.0 {
            break;
        }
        tau += 2.0 * c;
    }
    tau
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryCondition::Free => "free",
            BoundaryCondition::Wired => "wired",
        })
    }
}
