//! Cluster hulls, almost-arms and the almost-arm events `B_τ`, `B⁺_τ`,
//! `B⁺⁺_τ`.
//!
//! An almost-arm of colour `c` is an open path from `A`, then a `c`-path
//! (strong for red, weak for blue) through clusters avoiding the boundary,
//! then an open path to `B`. Since every vertex of the coloured middle lies
//! in an interior cluster, existence reduces to reachability between
//! clusters: start at a cluster meeting `A`, move through adjacent interior
//! clusters of colour `c`, stop at a cluster meeting `B`.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::arm_events::{face_step, reduce, ArmDetection, ArmError, ColorSeq, SiteDomain};
use crate::coloring::{Color, Coloring};
use crate::exponents::Setting;
use crate::fine::SiteIndex;
use crate::fk_sampler::{label_clusters, BondConfig, BoundaryCondition, ClusterSet};
use crate::geometry::{Adjacency, Ambient, Point, Region, Shape, NONE};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlmostArmError {
    #[error("colouring has {sigma} vertices, bond configuration {omega}")]
    SizeMismatch { sigma: usize, omega: usize },
    #[error("boundary with respect to Z x Z+ needs a halfplane region")]
    WrtNeedsHalfplane,
    #[error(transparent)]
    Arm(#[from] ArmError),
}

/// Lattice with respect to which the boundary of `S` is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlmostArmWrt {
    /// `∂S` relative to `ℤ²`.
    Z2,
    /// `∂₊S` relative to `ℤ × ℤ₊`.
    HalfplaneZ,
}

impl fmt::Display for AlmostArmWrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlmostArmWrt::Z2 => "Z2",
            AlmostArmWrt::HalfplaneZ => "ZxZ+",
        })
    }
}

fn boundary_mask(region: &Region, wrt: AlmostArmWrt) -> Result<&[bool], AlmostArmError> {
    match wrt {
        AlmostArmWrt::Z2 => Ok(region.boundaries().full_mask()),
        AlmostArmWrt::HalfplaneZ if region.ambient() == Ambient::Halfplane => {
            Ok(region.boundaries().half_mask())
        }
        AlmostArmWrt::HalfplaneZ => Err(AlmostArmError::WrtNeedsHalfplane),
    }
}

/// `f64` ordered by `total_cmp`, for heap keys.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Union of the `ω`-clusters (within the region) met by a path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterHull {
    /// Sorted vertex indices.
    pub vertices: Vec<u32>,
    /// Sorted cluster ids, in the free labelling of `ω`.
    pub clusters: Vec<u32>,
}

impl ClusterHull {
    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn is_disjoint(&self, other: &ClusterHull) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.vertices.len() && j < other.vertices.len() {
            match self.vertices[i].cmp(&other.vertices[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }
}

pub fn cluster_hull(omega: &BondConfig, path: &[u32]) -> ClusterHull {
    let cs = label_clusters(omega, BoundaryCondition::Free);
    hull_of(&cs, path)
}

fn hull_of(cs: &ClusterSet, path: &[u32]) -> ClusterHull {
    let mut clusters: Vec<u32> = path.iter().map(|&v| cs.cluster_of(v)).collect();
    clusters.sort_unstable();
    clusters.dedup();
    let vertices = (0..cs.ids().len() as u32)
        .filter(|&v| clusters.binary_search(&cs.cluster_of(v)).is_ok())
        .collect();
    ClusterHull { vertices, clusters }
}

/// A witnessed almost-arm: `path[..=k_a]` and `path[k_b..]` are open paths,
/// `path[k_a..=k_b]` is a strong (red) or weak (blue) path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostArm {
    pub path: Vec<u32>,
    pub k_a: usize,
    pub k_b: usize,
    pub color: Color,
    pub wrt: AlmostArmWrt,
}

/// Clusters, boundary status and colouring of one `(ω, σ)` pair, shared by
/// all almost-arm queries on it.
pub struct AlmostArmField<'a> {
    region: &'a Region,
    omega: &'a BondConfig,
    wrt: AlmostArmWrt,
    clusters: ClusterSet,
    members: Vec<Vec<u32>>,
    interior: Vec<bool>,
    cluster_color: Vec<Color>,
    index: SiteIndex,
}

impl<'a> AlmostArmField<'a> {
    pub fn new(
        omega: &'a BondConfig,
        sigma: &Coloring,
        wrt: AlmostArmWrt,
    ) -> Result<Self, AlmostArmError> {
        let region: &Region = omega.region();
        if sigma.colors().len() != region.n_vertices() {
            return Err(AlmostArmError::SizeMismatch {
                sigma: sigma.colors().len(),
                omega: region.n_vertices(),
            });
        }
        let bnd = boundary_mask(region, wrt)?;
        let clusters = label_clusters(omega, BoundaryCondition::Free);
        let members = clusters.members();
        let interior = members
            .iter()
            .map(|m| m.iter().all(|&v| !bnd[v as usize]))
            .collect();
        // interior clusters are monochromatic when σ comes from ω; the
        // colour of a cluster is that of its smallest vertex otherwise
        let cluster_color = members.iter().map(|m| sigma.get(m[0])).collect();
        let coords: Vec<(i32, i32)> = region.vertices().iter().map(|p| (p.x, p.y)).collect();
        Ok(AlmostArmField {
            region,
            omega,
            wrt,
            index: SiteIndex::new(&coords),
            clusters,
            members,
            interior,
            cluster_color,
        })
    }

    pub fn clusters(&self) -> &ClusterSet {
        &self.clusters
    }

    pub fn is_interior(&self, c: u32) -> bool {
        self.interior[c as usize]
    }

    pub fn hull(&self, path: &[u32]) -> ClusterHull {
        hull_of(&self.clusters, path)
    }

    fn adjacent_vertices(&self, v: u32, adj: Adjacency, out: &mut Vec<u32>) {
        out.clear();
        let p = self.region.point(v);
        for &(dx, dy) in adj.steps() {
            if !face_step(&self.index, p.x, p.y, dx, dy) {
                continue;
            }
            if let Some(w) = self.index.get(p.x + dx, p.y + dy) {
                out.push(w);
            }
        }
    }

    fn adjacency(color: Color) -> Adjacency {
        match color {
            Color::R => Adjacency::Strong,
            Color::B => Adjacency::Weak,
        }
    }

    /// Cluster chain from a cluster in `starts` to a cluster meeting `B`,
    /// through unblocked interior clusters of colour `color`. Minimises the
    /// largest `cost` along the chain, then the number of links; without
    /// costs this is a shortest chain. Returns the chain and the connecting
    /// vertex pairs.
    fn cluster_chain(
        &self,
        starts: &[u32],
        color: Color,
        meets_b: &[bool],
        blocked: &[bool],
        cost: Option<&[f64]>,
    ) -> Option<(Vec<u32>, Vec<(u32, u32)>)> {
        let nc = self.members.len();
        let adj = Self::adjacency(color);
        let cost_of = |c: u32| cost.map_or(0.0, |k| k[c as usize]);
        // parent[c] = (previous cluster, vertex in previous, vertex in c)
        let mut parent: Vec<(u32, u32, u32)> = vec![(NONE, NONE, NONE); nc];
        let mut best: Vec<Option<(f64, u32)>> = vec![None; nc];
        let mut done = vec![false; nc];
        let mut heap = BinaryHeap::new();
        for &c in starts {
            if !blocked[c as usize] && best[c as usize].is_none() {
                let key = (cost_of(c), 0);
                best[c as usize] = Some(key);
                heap.push(Reverse((Key(key.0), key.1, c)));
            }
        }
        let mut buf = Vec::new();
        while let Some(Reverse((Key(k), hops, c))) = heap.pop() {
            if done[c as usize] {
                continue;
            }
            done[c as usize] = true;
            if meets_b[c as usize] {
                let mut chain = vec![c];
                let mut links = Vec::new();
                let mut cur = c;
                while parent[cur as usize].0 != NONE {
                    let (prev, u, w) = parent[cur as usize];
                    links.push((u, w));
                    chain.push(prev);
                    cur = prev;
                }
                chain.reverse();
                links.reverse();
                return Some((chain, links));
            }
            // leaving `c`: the start cluster or an interior link
            for &u in &self.members[c as usize] {
                self.adjacent_vertices(u, adj, &mut buf);
                for &w in &buf {
                    let d = self.clusters.cluster_of(w);
                    if done[d as usize] || blocked[d as usize] {
                        continue;
                    }
                    let usable = meets_b[d as usize]
                        || (self.interior[d as usize] && self.cluster_color[d as usize] == color);
                    if !usable {
                        continue;
                    }
                    let key = (k.max(cost_of(d)), hops + 1);
                    let better = best[d as usize]
                        .is_none_or(|(bk, bh)| key.0 < bk || (key.0 == bk && key.1 < bh));
                    if better {
                        best[d as usize] = Some(key);
                        parent[d as usize] = (c, u, w);
                        heap.push(Reverse((Key(key.0), key.1, d)));
                    }
                }
            }
        }
        None
    }

    fn meets(&self, mask: &[bool]) -> Vec<bool> {
        self.members
            .iter()
            .map(|m| m.iter().any(|&v| mask[v as usize]))
            .collect()
    }

    /// Clusters from which some chain of colour `color` reaches a cluster
    /// meeting `B`, ignoring disjointness.
    fn reach_set(&self, color: Color, meets_b: &[bool]) -> Vec<bool> {
        let nc = self.members.len();
        let adj = Self::adjacency(color);
        let relay = |d: usize| meets_b[d] || (self.interior[d] && self.cluster_color[d] == color);
        let mut mark: Vec<bool> = meets_b.to_vec();
        let mut queue: VecDeque<u32> = (0..nc as u32).filter(|&c| meets_b[c as usize]).collect();
        let mut reach = meets_b.to_vec();
        let mut buf = Vec::new();
        while let Some(c) = queue.pop_front() {
            for &u in &self.members[c as usize] {
                self.adjacent_vertices(u, adj, &mut buf);
                for &w in &buf {
                    let d = self.clusters.cluster_of(w) as usize;
                    reach[d] = true;
                    if !mark[d] && relay(d) {
                        mark[d] = true;
                        queue.push_back(d as u32);
                    }
                }
            }
        }
        reach
    }

    /// Open path inside one cluster from `from` to `to` (breadth first).
    fn open_path(&self, from: u32, to: u32) -> Vec<u32> {
        let n = self.region.n_vertices();
        let mut parent = vec![NONE; n];
        parent[from as usize] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for e in self.region.incident_edges(v) {
                if e == NONE || !self.omega.is_open(e as usize) {
                    continue;
                }
                let (a, b) = self.region.edges()[e as usize];
                let w = if a == v { b } else { a };
                if parent[w as usize] == NONE {
                    parent[w as usize] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur as usize];
            path.push(cur);
        }
        path.reverse();
        path
    }

    fn first_in(&self, cluster: u32, mask: &[bool]) -> u32 {
        *self.members[cluster as usize]
            .iter()
            .find(|&&v| mask[v as usize])
            .expect("cluster meets the set")
    }

    fn witness(
        &self,
        chain: &[u32],
        links: &[(u32, u32)],
        a_mask: &[bool],
        b_mask: &[bool],
        color: Color,
    ) -> AlmostArm {
        let start = self.first_in(chain[0], a_mask);
        let end = self.first_in(*chain.last().expect("nonempty chain"), b_mask);
        if chain.len() == 1 {
            return AlmostArm {
                path: self.open_path(start, end),
                k_a: 0,
                k_b: 0,
                color,
                wrt: self.wrt,
            };
        }
        let mut path = self.open_path(start, links[0].0);
        let k_a = path.len() - 1;
        for (i, &(_, w)) in links.iter().enumerate() {
            let next = links.get(i + 1).map_or(end, |l| l.0);
            let seg = self.open_path(w, next);
            if i + 1 == links.len() {
                let k_b = path.len();
                path.extend(seg);
                return AlmostArm {
                    path,
                    k_a,
                    k_b,
                    color,
                    wrt: self.wrt,
                };
            }
            path.extend(seg);
        }
        unreachable!("links is nonempty")
    }

    /// Some almost-arm of colour `color` from `a` to `b`, if one exists.
    pub fn find(&self, color: Color, a: &[u32], b: &[u32]) -> Option<AlmostArm> {
        let n = self.region.n_vertices();
        let a_mask = mask_of(n, a);
        let b_mask = mask_of(n, b);
        let starts = self.start_clusters(a);
        let blocked = vec![false; self.members.len()];
        self.cluster_chain(&starts, color, &self.meets(&b_mask), &blocked, None)
            .map(|(chain, links)| self.witness(&chain, &links, &a_mask, &b_mask, color))
    }

    fn start_clusters(&self, a: &[u32]) -> Vec<u32> {
        let mut starts: Vec<u32> = a.iter().map(|&v| self.clusters.cluster_of(v)).collect();
        starts.sort_unstable();
        starts.dedup();
        starts
    }
}

fn mask_of(n: usize, set: &[u32]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v as usize] = true;
    }
    m
}

/// Is there an almost-arm of colour `color` from `a` to `b` in the region
/// of `ω`?
pub fn exists_almost_arm(
    omega: &BondConfig,
    sigma: &Coloring,
    color: Color,
    a: &[u32],
    b: &[u32],
    wrt: AlmostArmWrt,
) -> Result<bool, AlmostArmError> {
    let field = AlmostArmField::new(omega, sigma, wrt)?;
    Ok(field.find(color, a, b).is_some())
}

/// Checks a candidate vertex sequence by exploring it from both ends:
/// maximal open prefix and suffix, a strong/weak middle, and coloured
/// middle vertices whose clusters avoid the boundary.
pub fn verify_almost_arm(
    omega: &BondConfig,
    sigma: &Coloring,
    path: &[u32],
    color: Color,
    a: &[u32],
    b: &[u32],
    wrt: AlmostArmWrt,
) -> Result<bool, AlmostArmError> {
    let region: &Region = omega.region();
    let bnd = boundary_mask(region, wrt)?;
    let (Some(&first), Some(&last)) = (path.first(), path.last()) else {
        return Ok(false);
    };
    if !a.contains(&first) || !b.contains(&last) {
        return Ok(false);
    }
    let open_step = |u: u32, w: u32| {
        region
            .edge_between(region.point(u), region.point(w))
            .is_some_and(|e| omega.is_open(e))
    };
    let l = path.len() - 1;
    let Some(k_a) = (0..l).find(|&i| !open_step(path[i], path[i + 1])) else {
        return Ok(true);
    };
    let k_b = (0..l)
        .rev()
        .find(|&j| !open_step(path[j], path[j + 1]))
        .expect("some step is not open")
        + 1;
    for i in k_a..k_b {
        let (p, q) = (region.point(path[i]), region.point(path[i + 1]));
        let (dx, dy) = ((q.x - p.x).abs(), (q.y - p.y).abs());
        let ok = match color {
            Color::R => dx + dy == 1,
            Color::B => {
                dx.max(dy) == 1
                    && (dx + dy == 1
                        || (region.contains(Point::new(q.x, p.y))
                            && region.contains(Point::new(p.x, q.y))))
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    for &v in &path[k_a + 1..k_b] {
        if sigma.get(v) != color {
            return Ok(false);
        }
        // explore the open cluster of v
        let mut seen = vec![false; region.n_vertices()];
        let mut stack = vec![v];
        seen[v as usize] = true;
        while let Some(u) = stack.pop() {
            if bnd[u as usize] || sigma.get(u) != color {
                return Ok(false);
            }
            for e in region.incident_edges(u) {
                if e == NONE || !omega.is_open(e as usize) {
                    continue;
                }
                let (x, y) = region.edges()[e as usize];
                let w = if x == u { y } else { x };
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
    }
    Ok(true)
}

/// One extracted almost-arm of a greedy disjoint family. `color` is `None`
/// when a single open cluster crosses, which serves as either colour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordEntry {
    pub color: Option<Color>,
    pub clusters: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostArmWord {
    pub entries: Vec<WordEntry>,
    pub cyclic: bool,
}

impl AlmostArmWord {
    /// `R`, `B`, or `*` for an open crossing.
    pub fn word(&self) -> String {
        self.entries
            .iter()
            .map(|e| e.color.map_or('*', Color::as_char))
            .collect()
    }
}

/// Greedy extraction of almost-arms with pairwise disjoint hulls on an
/// annulus or semi-annulus.
pub struct AlmostArmSweep<'a> {
    field: AlmostArmField<'a>,
    walk: Vec<u32>,
    cyclic: bool,
    meets_b: Vec<bool>,
    /// Clusters meeting both rings.
    crossing: Vec<bool>,
    /// Per colour: clusters from which an almost-arm exists at all.
    reachable: [Vec<bool>; 2],
}

fn slot(c: Color) -> usize {
    match c {
        Color::R => 0,
        Color::B => 1,
    }
}

impl<'a> AlmostArmSweep<'a> {
    pub fn new(
        omega: &'a BondConfig,
        sigma: &Coloring,
        wrt: AlmostArmWrt,
    ) -> Result<Self, AlmostArmError> {
        let region: &Region = omega.region();
        if !matches!(
            region.shape(),
            Shape::Annulus { .. } | Shape::HalfAnnulus { .. }
        ) {
            return Err(ArmError::NotAnnular.into());
        }
        let field = AlmostArmField::new(omega, sigma, wrt)?;
        let dom = SiteDomain::from_region(region)?;
        let b_mask = mask_of(region.n_vertices(), region.outer_ring());
        let meets_b = field.meets(&b_mask);
        let meets_a = field.meets(&mask_of(region.n_vertices(), region.inner_ring()));
        let crossing = meets_a
            .iter()
            .zip(&meets_b)
            .map(|(a, b)| *a && *b)
            .collect();
        let reachable = [Color::R, Color::B].map(|c| field.reach_set(c, &meets_b));
        Ok(AlmostArmSweep {
            field,
            walk: dom.walk,
            cyclic: dom.cyclic,
            meets_b,
            crossing,
            reachable,
        })
    }

    /// Chain from `start` that does not end on another crossing cluster;
    /// such a cluster is an arm of either colour on its own, with a smaller
    /// hull.
    /// Per-cluster largest angle swept from the start ray of `offset`, in
    /// the direction of the walk.
    fn angle_costs(&self, offset: usize) -> Vec<f64> {
        use std::f64::consts::TAU;
        let region = self.field.region;
        let ang = |v: u32| {
            let p = region.vertices()[v as usize];
            f64::from(p.y).atan2(f64::from(p.x))
        };
        let l = self.walk.len();
        let theta0 = ang(self.walk[offset % l]);
        let dir = if l > 1 {
            let d = (ang(self.walk[(offset + 1) % l]) - theta0).rem_euclid(TAU);
            if d <= std::f64::consts::PI {
                1.0
            } else {
                -1.0
            }
        } else {
            1.0
        };
        self.field
            .members
            .iter()
            .map(|ms| {
                ms.iter()
                    .map(|&v| (dir * (ang(v) - theta0)).rem_euclid(TAU))
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    fn extract(&self, start: u32, color: Color, used: &[bool], cost: &[f64]) -> Option<Vec<u32>> {
        if used[start as usize] || !self.reachable[slot(color)][start as usize] {
            return None;
        }
        if self.crossing[start as usize] {
            return Some(vec![start]);
        }
        let mut blocked: Vec<bool> = used.to_vec();
        for (k, b) in blocked.iter_mut().enumerate() {
            *b |= self.crossing[k];
        }
        self.field
            .cluster_chain(&[start], color, &self.meets_b, &blocked, Some(cost))
            .map(|(chain, _)| chain)
    }

    /// Walk positions in scan order for a given starting offset.
    fn scan(&self, offset: usize) -> impl Iterator<Item = u32> + '_ {
        let l = self.walk.len();
        (0..l).map(move |i| self.walk[(offset + i) % l])
    }

    /// Offsets at which a new cluster begins along the walk.
    fn offsets(&self) -> Vec<usize> {
        if !self.cyclic {
            return vec![0];
        }
        let cl = |i: usize| self.field.clusters.cluster_of(self.walk[i]);
        let l = self.walk.len();
        let mut out: Vec<usize> = (0..l).filter(|&i| cl(i) != cl((i + l - 1) % l)).collect();
        if out.is_empty() {
            out.push(0);
        }
        out
    }

    fn greedy(&self, tau: &[Color], offset: usize) -> bool {
        let mut used = vec![false; self.field.members.len()];
        let cost = self.angle_costs(offset);
        let mut scan = self.scan(offset);
        'letters: for &c in tau {
            for v in scan.by_ref() {
                let k = self.field.clusters.cluster_of(v);
                if let Some(chain) = self.extract(k, c, &used, &cost) {
                    for &x in &chain {
                        used[x as usize] = true;
                    }
                    continue 'letters;
                }
            }
            return false;
        }
        true
    }

    /// Does a greedy disjoint-hull family realise `tau` in scan order?
    pub fn realises(&self, tau: &[Color]) -> bool {
        self.offsets().into_iter().any(|o| self.greedy(tau, o))
    }

    /// Greedy maximal family from a given offset along the walk: at each
    /// position take an open crossing if present, else the colour with the
    /// smaller hull.
    pub fn word_from(&self, offset: usize) -> AlmostArmWord {
        let mut used = vec![false; self.field.members.len()];
        let cost = self.angle_costs(offset);
        let mut entries = Vec::new();
        for v in self.scan(offset) {
            let k = self.field.clusters.cluster_of(v);
            if used[k as usize] {
                continue;
            }
            let red = self.extract(k, Color::R, &used, &cost);
            let blue = self.extract(k, Color::B, &used, &cost);
            let pick = match (red, blue) {
                (Some(r), _) if r.len() == 1 => Some((None, r)),
                (Some(r), Some(b)) if b.len() < r.len() => Some((Some(Color::B), b)),
                (Some(r), _) => Some((Some(Color::R), r)),
                (None, Some(b)) => Some((Some(Color::B), b)),
                (None, None) => None,
            };
            if let Some((color, chain)) = pick {
                for &x in &chain {
                    used[x as usize] = true;
                }
                entries.push(WordEntry {
                    color,
                    clusters: chain,
                });
            }
        }
        AlmostArmWord {
            entries,
            cyclic: self.cyclic,
        }
    }
}

/// Colour word of a greedy disjoint-hull almost-arm family, scanning the
/// inner ring counterclockwise from its first corner (rightmost first in the
/// halfplane).
pub fn count_disjoint_almost_arm_word(
    omega: &BondConfig,
    sigma: &Coloring,
    wrt: AlmostArmWrt,
) -> Result<AlmostArmWord, AlmostArmError> {
    let sweep = AlmostArmSweep::new(omega, sigma, wrt)?;
    let offset = sweep.offsets()[0];
    Ok(sweep.word_from(offset))
}

/// `B_τ` (annulus, `Z2`), `B⁺_τ` (semi-annulus, `HalfplaneZ`) or `B⁺⁺_τ`
/// (semi-annulus, `Z2`), detected by greedy extraction. Non-alternating
/// `τ` are replaced by their reduction and tagged.
pub fn b_event(
    omega: &BondConfig,
    sigma: &Coloring,
    tau: &ColorSeq,
    wrt: AlmostArmWrt,
) -> Result<ArmDetection, AlmostArmError> {
    let sweep = AlmostArmSweep::new(omega, sigma, wrt)?;
    let setting = if sweep.cyclic {
        Setting::Plane
    } else {
        Setting::Halfplane
    };
    let red = reduce(tau, setting);
    Ok(ArmDetection {
        occurs: sweep.realises(red.letters()),
        reduced_only: red != *tau,
    })
}
