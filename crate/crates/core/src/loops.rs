//! Loop encodings of bond and site configurations, interfaces, nesting
//! levels and approximate loop metrics.
//!
//! All geometry lives on the quarter mesh: a lattice point `(x, y)` sits at
//! quarter coordinates `(4x, 4y)`, and one quarter unit is `ε/4`. Occupancy
//! grids are unit cells `[i, i+1] × [j, j+1]` in these coordinates, so tiles,
//! edge rectangles and corner boxes are exact cell unions.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::coloring::{Color, Coloring};
use crate::fk_sampler::{label_clusters, BondConfig, BoundaryCondition};
use crate::geometry::{Point, Region};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoopError {
    #[error("loop has fewer than four corners or zero area")]
    Degenerate,
    #[error("consecutive vertices {0:?} and {1:?} are not axis-parallel")]
    NotAxisParallel((i32, i32), (i32, i32)),
    #[error("curve needs at least two distinct points")]
    DegenerateCurve,
    #[error("loops {0} and {1} cross")]
    Crossing(usize, usize),
    #[error("point ({}, {}) is not on the domain boundary", .0.x, .0.y)]
    NotOnBoundary(Point),
    #[error("interface endpoints coincide")]
    SameEndpoints,
    #[error("domain boundary is not a single simple loop")]
    NotSimplyConnected,
    #[error("interface walker got stuck at {0:?}")]
    Stuck((i32, i32)),
}

/// Provenance of a loop in a [`LoopSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LoopTag {
    OuterBond,
    InnerBond,
    ColorPlus,
    ColorMinus,
}

impl fmt::Display for LoopTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LoopTag::OuterBond => "OuterBond",
            LoopTag::InnerBond => "InnerBond",
            LoopTag::ColorPlus => "ColorPlus",
            LoopTag::ColorMinus => "ColorMinus",
        })
    }
}

/// Tile convention for blue vertices: `X⁺` (corner boxes added, weak blue
/// connectivity) or `X⁻` (corner boxes removed, strong blue connectivity).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

type Q = (i32, i32);

/// Closed axis-parallel polygon on the quarter mesh, stored by its corners.
#[derive(Clone, Debug, PartialEq)]
pub struct Loop {
    corners: Vec<Q>,
    ccw: bool,
    eps: f64,
}

impl Loop {
    /// Builds a loop from a closed vertex list (the closing repeat of the
    /// first vertex is optional). Collinear and repeated points are removed.
    pub fn new(points: Vec<Q>, eps: f64) -> Result<Self, LoopError> {
        let mut pts = points;
        if pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        for i in 0..pts.len() {
            let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
            if a.0 != b.0 && a.1 != b.1 {
                return Err(LoopError::NotAxisParallel(a, b));
            }
        }
        let corners = compress(&pts, true);
        if corners.len() < 4 {
            return Err(LoopError::Degenerate);
        }
        let a2 = area2(&corners);
        if a2 == 0 {
            return Err(LoopError::Degenerate);
        }
        Ok(Loop {
            corners,
            ccw: a2 > 0,
            eps,
        })
    }

    /// Axis-parallel rectangle `[x0, x1] × [y0, y1]` in quarter units.
    pub fn rectangle(x0: i32, y0: i32, x1: i32, y1: i32, eps: f64) -> Result<Self, LoopError> {
        Loop::new(vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)], eps)
    }

    pub fn corners(&self) -> &[Q] {
        &self.corners
    }

    pub fn is_ccw(&self) -> bool {
        self.ccw
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn reversed(&self) -> Loop {
        let mut corners = self.corners.clone();
        corners.reverse();
        Loop {
            corners,
            ccw: !self.ccw,
            eps: self.eps,
        }
    }

    /// Every integer point along the loop, in order, without repeating the
    /// first.
    pub fn unit_points(&self) -> Vec<Q> {
        let n = self.corners.len();
        let mut out = Vec::new();
        for i in 0..n {
            push_segment(&mut out, self.corners[i], self.corners[(i + 1) % n]);
        }
        out
    }

    /// Length in quarter units.
    pub fn perimeter(&self) -> i64 {
        let n = self.corners.len();
        (0..n)
            .map(|i| manhattan(self.corners[i], self.corners[(i + 1) % n]))
            .sum()
    }

    pub fn bbox(&self) -> (Q, Q) {
        bbox(&self.corners)
    }

    /// Doubled signed area in quarter units squared.
    pub fn area2(&self) -> i64 {
        area2(&self.corners)
    }

    /// Euclidean diameter in units of length.
    pub fn diam(&self) -> f64 {
        max_pairwise(&self.corners) * self.eps / 4.0
    }

    /// Test point in eighth-quarter units, just left of the first unit step.
    fn probe(&self) -> (i64, i64) {
        let (a, b) = (self.corners[0], self.corners[1]);
        let (dx, dy) = ((b.0 - a.0).signum() as i64, (b.1 - a.1).signum() as i64);
        (8 * a.0 as i64 + 4 * dx - dy, 8 * a.1 as i64 + 4 * dy + dx)
    }

    /// Even-odd containment of a point in eighth-quarter units. The point
    /// must not lie on a grid line.
    fn contains8(&self, p: (i64, i64)) -> bool {
        let n = self.corners.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = (self.corners[i], self.corners[(i + 1) % n]);
            if a.0 != b.0 {
                continue;
            }
            let x = 8 * a.0 as i64;
            let (lo, hi) = (8 * a.1.min(b.1) as i64, 8 * a.1.max(b.1) as i64);
            if x > p.0 && lo < p.1 && p.1 < hi {
                inside = !inside;
            }
        }
        inside
    }

    /// Does the loop surround the open point `(x + 1/2, y + 1/2)`?
    pub fn surrounds_cell(&self, x: i32, y: i32) -> bool {
        self.contains8((8 * x as i64 + 4, 8 * y as i64 + 4))
    }

    fn float_points(&self) -> Vec<(f64, f64)> {
        to_float(&self.unit_points(), self.eps)
    }
}

/// Open axis-parallel polyline on the quarter mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    corners: Vec<Q>,
    eps: f64,
}

impl Curve {
    pub fn new(points: Vec<Q>, eps: f64) -> Result<Self, LoopError> {
        for w in points.windows(2) {
            if w[0].0 != w[1].0 && w[0].1 != w[1].1 {
                return Err(LoopError::NotAxisParallel(w[0], w[1]));
            }
        }
        let corners = compress(&points, false);
        if corners.len() < 2 {
            return Err(LoopError::DegenerateCurve);
        }
        Ok(Curve { corners, eps })
    }

    pub fn corners(&self) -> &[Q] {
        &self.corners
    }

    pub fn start(&self) -> Q {
        self.corners[0]
    }

    pub fn end(&self) -> Q {
        self.corners[self.corners.len() - 1]
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Every integer point along the curve, endpoints included.
    pub fn unit_points(&self) -> Vec<Q> {
        let mut out = Vec::new();
        for w in self.corners.windows(2) {
            push_segment(&mut out, w[0], w[1]);
        }
        out.push(self.end());
        out
    }

    /// Is every unit point visited once?
    pub fn is_simple(&self) -> bool {
        let pts = self.unit_points();
        let mut seen = pts.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == pts.len()
    }
}

/// A collection of loops with tags and nesting levels.
#[derive(Clone, Debug, Default)]
pub struct LoopSet {
    loops: Vec<Loop>,
    tags: Vec<LoopTag>,
    levels: Vec<u32>,
}

impl LoopSet {
    /// Builds a set and computes nesting levels.
    pub fn new(loops: Vec<Loop>, tags: Vec<LoopTag>) -> Result<Self, LoopError> {
        assert_eq!(loops.len(), tags.len());
        let levels = nesting_levels(&loops)?;
        Ok(LoopSet {
            loops,
            tags,
            levels,
        })
    }

    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }

    pub fn tag(&self, i: usize) -> LoopTag {
        self.tags[i]
    }

    pub fn level(&self, i: usize) -> u32 {
        self.levels[i]
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    /// Plain-text export: a header line per loop followed by its corners.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, l) in self.loops.iter().enumerate() {
            s.push_str(&format!(
                "loop tag={} level={} n={}\n",
                self.tags[i],
                self.levels[i],
                l.corners.len()
            ));
            let coords: Vec<String> = l.corners.iter().map(|(x, y)| format!("{x},{y}")).collect();
            s.push_str(&coords.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Bond loop encoding `Γ_ω` with per-loop cluster ids and the indices of
/// the boundary-touching outer loops `Γ^∂`.
#[derive(Clone, Debug)]
pub struct BondLoops {
    pub set: LoopSet,
    pub cluster: Vec<u32>,
    pub boundary: Vec<usize>,
}

/// Occupancy grid over a rectangle of cells.
#[derive(Clone, Debug)]
struct Raster {
    x0: i32,
    y0: i32,
    w: i32,
    h: i32,
    cells: Vec<bool>,
}

impl Raster {
    /// Grid covering cells `[x0, x1) × [y0, y1)` plus a margin.
    fn new(x0: i32, y0: i32, x1: i32, y1: i32, margin: i32) -> Self {
        let (x0, y0) = (x0 - margin, y0 - margin);
        let (w, h) = (x1 + margin - x0, y1 + margin - y0);
        Raster {
            x0,
            y0,
            w,
            h,
            cells: vec![false; (w * h) as usize],
        }
    }

    #[inline]
    fn get(&self, x: i32, y: i32) -> bool {
        let (i, j) = (x - self.x0, y - self.y0);
        i >= 0 && j >= 0 && i < self.w && j < self.h && self.cells[(j * self.w + i) as usize]
    }

    fn put(&mut self, x: i32, y: i32, v: bool) {
        let (i, j) = (x - self.x0, y - self.y0);
        if i >= 0 && j >= 0 && i < self.w && j < self.h {
            self.cells[(j * self.w + i) as usize] = v;
        }
    }

    /// Sets cells `[xa, xb) × [ya, yb)`.
    fn fill(&mut self, xa: i32, ya: i32, xb: i32, yb: i32, v: bool) {
        for y in ya..yb {
            for x in xa..xb {
                self.put(x, y, v);
            }
        }
    }

    fn and(&mut self, other: &Raster) {
        for y in self.y0..self.y0 + self.h {
            for x in self.x0..self.x0 + self.w {
                if !other.get(x, y) {
                    self.put(x, y, false);
                }
            }
        }
    }

    /// Boundary cycles with the set on the left: outer boundaries come out
    /// counterclockwise and holes clockwise. At a corner where two set cells
    /// touch diagonally the set is treated as connected.
    fn contours(&self) -> Vec<Vec<Q>> {
        // outgoing boundary directions per lattice point, bit k = DIRS[k]
        let (pw, ph) = (self.w + 1, self.h + 1);
        let pid = |x: i32, y: i32| ((y - self.y0) * pw + (x - self.x0)) as usize;
        let mut out = vec![0u8; (pw * ph) as usize];
        for y in self.y0..self.y0 + self.h {
            for x in self.x0..self.x0 + self.w {
                if !self.get(x, y) {
                    continue;
                }
                if !self.get(x, y - 1) {
                    out[pid(x, y)] |= 1 << E;
                }
                if !self.get(x + 1, y) {
                    out[pid(x + 1, y)] |= 1 << N;
                }
                if !self.get(x, y + 1) {
                    out[pid(x + 1, y + 1)] |= 1 << W;
                }
                if !self.get(x - 1, y) {
                    out[pid(x, y + 1)] |= 1 << S;
                }
            }
        }
        let mut cycles = Vec::new();
        // start away from diagonal touches so their pairing follows the rule
        for pass in 0..2 {
            for y in self.y0..self.y0 + ph {
                for x in self.x0..self.x0 + pw {
                    while out[pid(x, y)] != 0 && (pass == 1 || out[pid(x, y)].count_ones() == 1) {
                        let bits = out[pid(x, y)];
                        let mut d = bits.trailing_zeros() as usize;
                        let mut p = (x, y);
                        let mut cyc = vec![p];
                        loop {
                            out[pid(p.0, p.1)] &= !(1 << d);
                            p = (p.0 + DIRS[d].0, p.1 + DIRS[d].1);
                            let here = out[pid(p.0, p.1)];
                            if here == 0 {
                                break;
                            }
                            d = turn_pick(d, here, &[RIGHT, STRAIGHT, LEFT]);
                            cyc.push(p);
                        }
                        debug_assert_eq!(p, (x, y));
                        cycles.push(cyc);
                    }
                }
            }
        }
        cycles
    }
}

const E: usize = 0;
const N: usize = 1;
const W: usize = 2;
const S: usize = 3;
const DIRS: [Q; 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
const RIGHT: usize = 3;
const STRAIGHT: usize = 0;
const LEFT: usize = 1;

fn turn_pick(d: usize, avail: u8, order: &[usize]) -> usize {
    for &t in order {
        let nd = (d + t) % 4;
        if avail & (1 << nd) != 0 {
            return nd;
        }
    }
    unreachable!("boundary edge without successor")
}

fn compress(pts: &[Q], closed: bool) -> Vec<Q> {
    let mut v: Vec<Q> = Vec::with_capacity(pts.len());
    for &p in pts {
        if v.last() != Some(&p) {
            v.push(p);
        }
    }
    if closed {
        while v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
    }
    let collinear = |a: Q, b: Q, c: Q| (a.0 == b.0 && b.0 == c.0) || (a.1 == b.1 && b.1 == c.1);
    let mut changed = true;
    while changed && v.len() >= 3 {
        changed = false;
        let n = v.len();
        let mut keep = Vec::with_capacity(n);
        for i in 0..n {
            let interior = closed || (i > 0 && i + 1 < n);
            if interior && collinear(v[(i + n - 1) % n], v[i], v[(i + 1) % n]) {
                changed = true;
                continue;
            }
            keep.push(v[i]);
        }
        // removing one of a back-and-forth spike can expose repeats
        v = compress_dupes(keep, closed);
    }
    v
}

fn compress_dupes(v: Vec<Q>, closed: bool) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::with_capacity(v.len());
    for p in v {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    if closed {
        while out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
    }
    out
}

fn push_segment(out: &mut Vec<Q>, a: Q, b: Q) {
    let (dx, dy) = ((b.0 - a.0).signum(), (b.1 - a.1).signum());
    let mut p = a;
    while p != b {
        out.push(p);
        p = (p.0 + dx, p.1 + dy);
    }
}

fn manhattan(a: Q, b: Q) -> i64 {
    ((a.0 - b.0).abs() + (a.1 - b.1).abs()) as i64
}

fn area2(c: &[Q]) -> i64 {
    let n = c.len();
    (0..n)
        .map(|i| {
            let (a, b) = (c[i], c[(i + 1) % n]);
            a.0 as i64 * b.1 as i64 - b.0 as i64 * a.1 as i64
        })
        .sum()
}

fn bbox(c: &[Q]) -> (Q, Q) {
    let x0 = c.iter().map(|p| p.0).min().unwrap_or(0);
    let x1 = c.iter().map(|p| p.0).max().unwrap_or(0);
    let y0 = c.iter().map(|p| p.1).min().unwrap_or(0);
    let y1 = c.iter().map(|p| p.1).max().unwrap_or(0);
    ((x0, y0), (x1, y1))
}

fn max_pairwise(c: &[Q]) -> f64 {
    let mut best = 0i64;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            let (dx, dy) = ((c[i].0 - c[j].0) as i64, (c[i].1 - c[j].1) as i64);
            best = best.max(dx * dx + dy * dy);
        }
    }
    (best as f64).sqrt()
}

fn to_float(pts: &[Q], eps: f64) -> Vec<(f64, f64)> {
    let s = eps / 4.0;
    pts.iter()
        .map(|&(x, y)| (x as f64 * s, y as f64 * s))
        .collect()
}

fn quarter(p: Point) -> Q {
    (4 * p.x, 4 * p.y)
}

fn region_cells(region: &Region) -> (i32, i32, i32, i32) {
    let vs = region.vertices();
    let x0 = vs.iter().map(|p| p.x).min().unwrap_or(0);
    let x1 = vs.iter().map(|p| p.x).max().unwrap_or(0);
    let y0 = vs.iter().map(|p| p.y).min().unwrap_or(0);
    let y1 = vs.iter().map(|p| p.y).max().unwrap_or(0);
    (4 * x0 - 4, 4 * y0 - 4, 4 * x1 + 4, 4 * y1 + 4)
}

/// Closure of the domain: unit faces whose four corners and four sides
/// belong to the region.
fn domain_raster(region: &Region) -> Raster {
    let (x0, y0, x1, y1) = region_cells(region);
    let mut r = Raster::new(x0, y0, x1, y1, 2);
    for &p in region.vertices() {
        let c = [
            p,
            Point::new(p.x + 1, p.y),
            Point::new(p.x + 1, p.y + 1),
            Point::new(p.x, p.y + 1),
        ];
        let full = (0..4).all(|k| region.edge_between(c[k], c[(k + 1) % 4]).is_some());
        if full {
            let (qx, qy) = quarter(p);
            r.fill(qx, qy, qx + 4, qy + 4, true);
        }
    }
    r
}

/// `Γ_ω = Γ^O ∪ Γ^I`: per free-boundary cluster, the outer and inner
/// contours of the union of its open-edge rectangles and vertex squares.
/// The mesh `ε` is the region's mesh.
pub fn encode_bond_loops(omega: &BondConfig) -> Result<BondLoops, LoopError> {
    let region: &Region = omega.region();
    let eps = region.mesh().value();
    let cs = label_clusters(omega, BoundaryCondition::Free);
    let members = cs.members();
    let mut edges_of: Vec<Vec<usize>> = vec![Vec::new(); cs.count()];
    for e in (0..region.n_edges()).filter(|&e| omega.is_open(e)) {
        let (u, _) = region.edges()[e];
        edges_of[cs.cluster_of(u) as usize].push(e);
    }
    let bmask = region.boundaries().full_mask();
    let mut loops = Vec::new();
    let mut tags = Vec::new();
    let mut cluster = Vec::new();
    let mut boundary = Vec::new();
    for (c, ms) in members.iter().enumerate() {
        let qs: Vec<Q> = ms.iter().map(|&v| quarter(region.point(v))).collect();
        let ((x0, y0), (x1, y1)) = bbox(&qs);
        let mut r = Raster::new(x0 - 1, y0 - 1, x1 + 1, y1 + 1, 1);
        for &(qx, qy) in &qs {
            r.fill(qx - 1, qy - 1, qx + 1, qy + 1, true);
        }
        for &e in &edges_of[c] {
            let (p, q) = region.edge_points(e);
            let (a, b) = (quarter(p), quarter(q));
            r.fill(
                a.0.min(b.0) - 1,
                a.1.min(b.1) - 1,
                a.0.max(b.0) + 1,
                a.1.max(b.1) + 1,
                true,
            );
        }
        let touches = ms.iter().any(|&v| bmask[v as usize]);
        let mut outer_seen = 0;
        for cyc in r.contours() {
            let l = Loop::new(cyc, eps)?;
            let tag = if l.is_ccw() {
                outer_seen += 1;
                if touches {
                    boundary.push(loops.len());
                }
                LoopTag::OuterBond
            } else {
                LoopTag::InnerBond
            };
            loops.push(l);
            tags.push(tag);
            cluster.push(c as u32);
        }
        debug_assert_eq!(outer_seen, 1, "cluster set must be connected");
    }
    Ok(BondLoops {
        set: LoopSet::new(loops, tags)?,
        cluster,
        boundary,
    })
}

/// Cells of the tile `X^±` centred at quarter point `(qx, qy)`.
fn fill_tile(r: &mut Raster, qx: i32, qy: i32, sign: Sign) {
    r.fill(qx - 2, qy - 2, qx + 2, qy + 2, true);
    for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let (cx, cy) = (qx + 2 * sx, qy + 2 * sy);
        match sign {
            Sign::Plus => r.fill(cx - 1, cy - 1, cx + 1, cy + 1, true),
            Sign::Minus => {
                // the corner cell of the square lying inside the open box
                let (ix, iy) = (
                    if sx > 0 { cx - 1 } else { cx },
                    if sy > 0 { cy - 1 } else { cy },
                );
                r.put(ix, iy, false);
            }
        }
    }
}

/// Raster of `O^±_σ`, tile union over blue vertices clipped to the closed
/// domain. Overlapping `X⁻` tiles are laid down before any corner removal.
fn color_raster(sigma: &Coloring, sign: Sign) -> Raster {
    let region = sigma.region();
    let (x0, y0, x1, y1) = region_cells(region);
    let mut r = Raster::new(x0, y0, x1, y1, 2);
    let blue: Vec<Point> = region
        .vertices()
        .iter()
        .enumerate()
        .filter(|&(i, _)| sigma.get(i as u32) == Color::B)
        .map(|(_, &p)| p)
        .collect();
    match sign {
        Sign::Plus => {
            for &p in &blue {
                let (qx, qy) = quarter(p);
                fill_tile(&mut r, qx, qy, sign);
            }
        }
        Sign::Minus => {
            // tiles are unions, so build each in isolation and OR it in
            for &p in &blue {
                let (qx, qy) = quarter(p);
                let mut t = Raster::new(qx - 2, qy - 2, qx + 2, qy + 2, 0);
                fill_tile(&mut t, qx, qy, sign);
                for y in qy - 2..qy + 2 {
                    for x in qx - 2..qx + 2 {
                        if t.get(x, y) {
                            r.put(x, y, true);
                        }
                    }
                }
            }
        }
    }
    r.and(&domain_raster(region));
    r
}

/// `Σ^±_σ`: boundary contours of `O^±_σ`.
pub fn encode_color_loops(sigma: &Coloring, sign: Sign) -> Result<LoopSet, LoopError> {
    let eps = sigma.region().mesh().value();
    let tag = match sign {
        Sign::Plus => LoopTag::ColorPlus,
        Sign::Minus => LoopTag::ColorMinus,
    };
    let loops = color_raster(sigma, sign)
        .contours()
        .into_iter()
        .map(|c| Loop::new(c, eps))
        .collect::<Result<Vec<_>, _>>()?;
    let tags = vec![tag; loops.len()];
    LoopSet::new(loops, tags)
}

/// The domain boundary `λ` as a counterclockwise loop.
pub fn domain_boundary(region: &Region) -> Result<Loop, LoopError> {
    let cycles = domain_raster(region).contours();
    if cycles.len() != 1 {
        return Err(LoopError::NotSimplyConnected);
    }
    let l = Loop::new(
        cycles.into_iter().next().unwrap_or_default(),
        region.mesh().value(),
    )?;
    let pts = l.unit_points();
    let mut s = pts.clone();
    s.sort_unstable();
    s.dedup();
    if s.len() != pts.len() {
        return Err(LoopError::NotSimplyConnected);
    }
    Ok(l)
}

/// `γ^±_{σ,a,b}`: runs counterclockwise along `λ` from `a`, follows the
/// boundary of `O^±_σ` clockwise whenever it meets it, and stops at `b`.
/// Blue lies on its right and red on its left.
///
/// Realised as the boundary of the blue set after colouring the outside
/// of the counterclockwise arc from `a` to `b` blue and the rest red.
pub fn interface_curve(
    sigma: &Coloring,
    a: Point,
    b: Point,
    sign: Sign,
) -> Result<Curve, LoopError> {
    if a == b {
        return Err(LoopError::SameEndpoints);
    }
    let region = sigma.region();
    let eps = region.mesh().value();
    let lambda = domain_boundary(region)?.unit_points();
    let find = |p: Point| {
        lambda
            .iter()
            .position(|&q| q == quarter(p))
            .ok_or(LoopError::NotOnBoundary(p))
    };
    let (ia, ib) = (find(a)?, find(b)?);
    let dom = domain_raster(region);
    let mut blue = color_raster(sigma, sign);
    let l = lambda.len();
    let mut i = ia;
    while i != ib {
        let (p, q) = (lambda[i], lambda[(i + 1) % l]);
        let (rx, ry) = right_cell(p, (q.0 - p.0, q.1 - p.1));
        if !dom.get(rx, ry) {
            blue.put(rx, ry, true);
        }
        i = (i + 1) % l;
    }
    let is_blue = |x: i32, y: i32| blue.get(x, y);
    let out_dirs = |p: Q| -> u8 {
        let mut bits = 0;
        for (k, &d) in DIRS.iter().enumerate() {
            let (rx, ry) = right_cell(p, d);
            let (lx, ly) = left_cell(p, d);
            if is_blue(rx, ry) && !is_blue(lx, ly) {
                bits |= 1 << k;
            }
        }
        bits
    };
    let target = quarter(b);
    let mut p = quarter(a);
    let prev = lambda[(ia + l - 1) % l];
    let mut d = DIRS
        .iter()
        .position(|&d| d == (p.0 - prev.0, p.1 - prev.1))
        .unwrap_or(E);
    let mut used: HashMap<(Q, usize), ()> = HashMap::new();
    let mut path = vec![p];
    let limit = 4 * (blue.w as usize + 1) * (blue.h as usize + 1);
    while p != target {
        let mut avail = out_dirs(p);
        for k in 0..4 {
            if used.contains_key(&(p, k)) {
                avail &= !(1 << k);
            }
        }
        if avail == 0 || path.len() > limit {
            return Err(LoopError::Stuck(p));
        }
        // blue on the right: a left turn keeps diagonal blue cells joined
        d = turn_pick(d, avail, &[LEFT, STRAIGHT, RIGHT, 2]);
        used.insert((p, d), ());
        p = (p.0 + DIRS[d].0, p.1 + DIRS[d].1);
        path.push(p);
    }
    Curve::new(path, eps)
}

fn right_cell(p: Q, d: Q) -> Q {
    match d {
        (1, 0) => (p.0, p.1 - 1),
        (0, 1) => (p.0, p.1),
        (-1, 0) => (p.0 - 1, p.1),
        _ => (p.0 - 1, p.1 - 1),
    }
}

fn left_cell(p: Q, d: Q) -> Q {
    match d {
        (1, 0) => (p.0, p.1),
        (0, 1) => (p.0 - 1, p.1),
        (-1, 0) => (p.0 - 1, p.1 - 1),
        _ => (p.0, p.1 - 1),
    }
}

/// `N = 1 + #{surrounding loops}`, by point-in-polygon on one probe point
/// per loop. Rejects pairs of loops that cross.
pub fn nesting_levels(loops: &[Loop]) -> Result<Vec<u32>, LoopError> {
    let boxes: Vec<(Q, Q)> = loops.iter().map(|l| l.bbox()).collect();
    let inside = |outer: usize, p: (i64, i64)| {
        let ((x0, y0), (x1, y1)) = boxes[outer];
        let in_box = 8 * x0 as i64 <= p.0
            && p.0 <= 8 * x1 as i64
            && 8 * y0 as i64 <= p.1
            && p.1 <= 8 * y1 as i64;
        in_box && loops[outer].contains8(p)
    };
    let mut levels = vec![1u32; loops.len()];
    for (j, l) in loops.iter().enumerate() {
        let probe = l.probe();
        for (i, _) in loops.iter().enumerate() {
            if i != j && inside(i, probe) {
                levels[j] += 1;
            }
        }
    }
    check_non_crossing(loops, &boxes)?;
    Ok(levels)
}

/// Every edge probe of one loop lies on the same side of any other loop.
fn check_non_crossing(loops: &[Loop], boxes: &[(Q, Q)]) -> Result<(), LoopError> {
    let overlap = |a: (Q, Q), b: (Q, Q)| {
        a.0 .0 <= b.1 .0 && b.0 .0 <= a.1 .0 && a.0 .1 <= b.1 .1 && b.0 .1 <= a.1 .1
    };
    for i in 0..loops.len() {
        for j in 0..loops.len() {
            if i == j || !overlap(boxes[i], boxes[j]) {
                continue;
            }
            let c = &loops[j].corners;
            let n = c.len();
            let mut side = None;
            for k in 0..n {
                let (a, b) = (c[k], c[(k + 1) % n]);
                let (dx, dy) = ((b.0 - a.0).signum() as i64, (b.1 - a.1).signum() as i64);
                let p = (8 * a.0 as i64 + 4 * dx - dy, 8 * a.1 as i64 + 4 * dy + dx);
                let s = loops[i].contains8(p);
                if *side.get_or_insert(s) != s {
                    return Err(LoopError::Crossing(i.min(j), i.max(j)));
                }
            }
        }
    }
    Ok(())
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Discrete Fréchet distance between point sequences, or `None` once it
/// provably exceeds `cutoff`.
fn frechet(p: &[(f64, f64)], q: &[(f64, f64)], cutoff: f64) -> Option<f64> {
    let m = q.len();
    let mut prev = vec![f64::INFINITY; m];
    let mut cur = vec![f64::INFINITY; m];
    for (i, &pi) in p.iter().enumerate() {
        let mut row_min = f64::INFINITY;
        for j in 0..m {
            let d = dist(pi, q[j]);
            let reach = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => cur[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(prev[j - 1]).min(cur[j - 1]),
            };
            cur[j] = reach.max(d);
            row_min = row_min.min(cur[j]);
        }
        if row_min > cutoff {
            return None;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Some(prev[m - 1]).filter(|&v| v <= cutoff)
}

/// Approximate `d_C`: discrete Fréchet distance on unit-step resamplings,
/// minimised over cyclic shifts and both orientations.
pub fn d_loops(a: &Loop, b: &Loop) -> f64 {
    d_loops_within(a, b, f64::INFINITY).unwrap_or(f64::INFINITY)
}

fn d_loops_within(a: &Loop, b: &Loop, cutoff: f64) -> Option<f64> {
    let pa = a.float_points();
    let pb = b.float_points();
    let floor = hausdorff(&pa, &pb);
    if floor > cutoff {
        return None;
    }
    let mut best = cutoff;
    let mut found = None;
    for orient in [false, true] {
        if found.is_some_and(|f| f <= floor) {
            break;
        }
        let mut q = pb.clone();
        if orient {
            q.reverse();
        }
        q.push(q[0]);
        let mut shifts: Vec<(f64, usize)> = pa
            .iter()
            .enumerate()
            .map(|(s, &p)| (dist(p, q[0]), s))
            .collect();
        shifts.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (d0, s) in shifts {
            if d0 > best {
                break;
            }
            let mut p: Vec<(f64, f64)> = pa[s..].iter().chain(&pa[..s]).copied().collect();
            p.push(pa[s]);
            if let Some(v) = frechet(&p, &q, best) {
                if found.is_none_or(|f| v < f) {
                    found = Some(v);
                    best = v;
                }
                if v <= floor {
                    break;
                }
            }
        }
    }
    found
}

/// Hausdorff distance between point sets, a lower bound for any Fréchet
/// distance between their orderings.
fn hausdorff(p: &[(f64, f64)], q: &[(f64, f64)]) -> f64 {
    let directed = |a: &[(f64, f64)], b: &[(f64, f64)]| {
        a.iter()
            .map(|&x| b.iter().map(|&y| dist(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(p, q).max(directed(q, p))
}

/// Approximate `d_C'`: discrete Fréchet distance on unit-step resamplings.
pub fn d_curves(a: &Curve, b: &Curve) -> f64 {
    let pa = to_float(&a.unit_points(), a.eps);
    let pb = to_float(&b.unit_points(), b.eps);
    frechet(&pa, &pb, f64::INFINITY).unwrap_or(f64::INFINITY)
}

/// Euclidean diameter of a loop.
pub fn diam(l: &Loop) -> f64 {
    l.diam()
}

/// Approximate `d_L` with at most 48 loops matched per side.
pub fn d_loopsets(a: &LoopSet, b: &LoopSet) -> f64 {
    d_loopsets_capped(a, b, 48)
}

/// Approximate `d_L`: for each threshold `t` on a grid of loop diameters,
/// loops larger than `t` are greedily matched by `d_loops` and the score is
/// the worst of the matched distances and the unmatched diameters. Returns
/// the best score; only the `cap` largest loops of each set are matched.
pub fn d_loopsets_capped(a: &LoopSet, b: &LoopSet, cap: usize) -> f64 {
    let sorted = |s: &LoopSet| {
        let mut v: Vec<(f64, usize)> = s
            .loops
            .iter()
            .enumerate()
            .map(|(i, l)| (l.diam(), i))
            .collect();
        v.sort_by(|x, y| y.0.total_cmp(&x.0));
        v
    };
    let (da, db) = (sorted(a), sorted(b));
    let beyond = |v: &[(f64, usize)]| v.get(cap).map_or(0.0, |x| x.0);
    let floor = beyond(&da).max(beyond(&db));
    let (ka, kb) = (da.len().min(cap), db.len().min(cap));
    let mut grid: Vec<f64> = da[..ka]
        .iter()
        .chain(&db[..kb])
        .map(|x| x.0)
        .filter(|&d| d >= floor)
        .collect();
    grid.push(floor);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut cache: HashMap<(usize, usize), Option<f64>> = HashMap::new();
    let mut best = f64::INFINITY;
    // Large thresholds first: pairs costing more than the best score so far
    // cannot lower the minimum and are treated as unmatchable.
    for &t in grid.iter().rev() {
        let big_a: Vec<usize> = (0..ka).filter(|&i| da[i].0 > t).collect();
        let big_b: Vec<usize> = (0..kb).filter(|&j| db[j].0 > t).collect();
        let small = da
            .iter()
            .chain(&db)
            .map(|x| x.0)
            .filter(|&d| d <= t)
            .fold(0.0, f64::max);
        let mut pairs = Vec::new();
        for &i in &big_a {
            for &j in &big_b {
                let cut = da[i].0.max(db[j].0).min(best);
                let la = &a.loops[da[i].1];
                let lb = &b.loops[db[j].1];
                let c = *cache.entry((i, j)).or_insert_with(|| {
                    if bbox_gap(la, lb) >= cut {
                        None
                    } else {
                        d_loops_within(la, lb, cut)
                    }
                });
                if let Some(c) = c.filter(|&c| c <= best) {
                    pairs.push((c, i, j));
                }
            }
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut ma = vec![false; ka];
        let mut mb = vec![false; kb];
        let mut score = small;
        for (c, i, j) in pairs {
            if !ma[i] && !mb[j] {
                ma[i] = true;
                mb[j] = true;
                score = score.max(c);
            }
        }
        for &i in &big_a {
            if !ma[i] {
                score = score.max(da[i].0);
            }
        }
        for &j in &big_b {
            if !mb[j] {
                score = score.max(db[j].0);
            }
        }
        best = best.min(score);
    }
    if da.is_empty() && db.is_empty() {
        0.0
    } else {
        best
    }
}

/// Lower bound on the uniform distance from bounding boxes.
fn bbox_gap(a: &Loop, b: &Loop) -> f64 {
    let ((ax0, ay0), (ax1, ay1)) = a.bbox();
    let ((bx0, by0), (bx1, by1)) = b.bbox();
    let m = [ax0 - bx0, ax1 - bx1, ay0 - by0, ay1 - by1]
        .iter()
        .map(|d| d.abs())
        .max()
        .unwrap_or(0);
    m as f64 * a.eps.min(b.eps) / 4.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compress_drops_collinear_points() {
        let l = Loop::new(vec![(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (0, 1)], 1.0).unwrap();
        assert_eq!(l.corners(), &[(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert!(l.is_ccw());
    }

    #[test]
    fn rejects_degenerate() {
        assert_eq!(
            Loop::new(vec![(0, 0), (2, 0)], 1.0),
            Err(LoopError::Degenerate)
        );
        assert!(matches!(
            Loop::new(vec![(0, 0), (1, 1), (0, 1)], 1.0),
            Err(LoopError::NotAxisParallel(..))
        ));
    }

    #[test]
    fn single_cell_contour() {
        let mut r = Raster::new(0, 0, 1, 1, 1);
        r.put(0, 0, true);
        let c = r.contours();
        assert_eq!(c.len(), 1);
        assert_eq!(Loop::new(c[0].clone(), 1.0).unwrap().area2(), 2);
    }

    #[test]
    fn diagonal_cells_form_one_contour() {
        let mut r = Raster::new(0, 0, 2, 2, 1);
        r.put(0, 0, true);
        r.put(1, 1, true);
        assert_eq!(r.contours().len(), 1);
    }
}
