//! Lattice regions on the square lattice: boxes, annuli, half-annuli,
//! their vertex boundaries, adjacency and the dual lattice.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Sentinel index for "no vertex" / "no edge".
pub const NONE: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("invalid radii: need 1 <= m <= n, got m={m}, n={n}")]
    InvalidRadii { m: i32, n: i32 },
    #[error("box radius must be at least 1, got {0}")]
    InvalidRadius(i32),
    #[error("region has no vertices")]
    Empty,
    #[error("vertex ({0}, {1}) lies below the axis in a halfplane region")]
    BelowAxis(i32, i32),
    #[error("edge ({0:?}, {1:?}) does not join nearest neighbours of the region")]
    BadEdge(Point, Point),
    #[error("mesh must be a positive rational, got {0:?}")]
    BadMesh(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Integer lattice point. Ordering is lexicographic in `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const fn new(x: i32, y: i32) -> Self {
        Point { x, y }
    }

    /// Max-norm.
    pub fn norm_inf(self) -> i32 {
        self.x.abs().max(self.y.abs())
    }
}

impl From<(i32, i32)> for Point {
    fn from((x, y): (i32, i32)) -> Self {
        Point { x, y }
    }
}

/// A point of the dual lattice `(1/2,1/2) + Z^2`, stored with doubled coordinates
/// (both odd).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualPoint {
    pub x2: i32,
    pub y2: i32,
}

impl DualPoint {
    pub fn coords(self) -> (f64, f64) {
        (self.x2 as f64 / 2.0, self.y2 as f64 / 2.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    Plane,
    Halfplane,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ambient::Plane => "plane",
            Ambient::Halfplane => "halfplane",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Adjacency {
    /// Four axis neighbours.
    Strong,
    /// Eight neighbours including diagonals.
    Weak,
}

pub const STRONG_STEPS: [(i32, i32); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
pub const WEAK_STEPS: [(i32, i32); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

impl Adjacency {
    pub fn steps(self) -> &'static [(i32, i32)] {
        match self {
            Adjacency::Strong => &STRONG_STEPS,
            Adjacency::Weak => &WEAK_STEPS,
        }
    }
}

/// Positive rational mesh size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mesh {
    num: u32,
    den: u32,
}

impl Mesh {
    pub const UNIT: Mesh = Mesh { num: 1, den: 1 };

    pub fn new(num: u32, den: u32) -> Result<Self, GeometryError> {
        if num == 0 || den == 0 {
            return Err(GeometryError::BadMesh(format!("{num}/{den}")));
        }
        let g = gcd(num, den);
        Ok(Mesh {
            num: num / g,
            den: den / g,
        })
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Default for Mesh {
    fn default() -> Self {
        Mesh::UNIT
    }
}

impl fmt::Display for Mesh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Mesh {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeometryError::BadMesh(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: u32 = n.parse().map_err(|_| bad())?;
        let d: u32 = d.parse().map_err(|_| bad())?;
        Mesh::new(n, d).map_err(|_| bad())
    }
}

/// Which standard shape a region was built as. Determines the inner and
/// outer rings used by the arm detectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    /// `Λ_n`.
    Box {
        n: i32,
    },
    /// `Λ_{m,n} = Λ_n \ Λ_{m-1}`.
    Annulus {
        m: i32,
        n: i32,
    },
    /// `Λ⁺_n`.
    HalfBox {
        n: i32,
    },
    /// `Λ⁺_{m,n}`.
    HalfAnnulus {
        m: i32,
        n: i32,
    },
    Custom,
}

impl Shape {
    /// Radii `(m, n)` of an annular shape.
    pub fn radii(self) -> Option<(i32, i32)> {
        match self {
            Shape::Annulus { m, n } | Shape::HalfAnnulus { m, n } => Some((m, n)),
            _ => None,
        }
    }
}

/// A finite subgraph of the square lattice.
///
/// Vertices are kept sorted lexicographically; edges are stored as index
/// pairs `(a, b)` with `a < b`, sorted lexicographically. This fixes the
/// edge order used by every per-edge array and by the snapshot formats.
#[derive(Clone, Debug)]
pub struct Region {
    vertices: Vec<Point>,
    edges: Vec<(u32, u32)>,
    ambient: Ambient,
    mesh: Mesh,
    shape: Shape,
    x0: i32,
    y0: i32,
    w: i32,
    h: i32,
    lookup: Vec<u32>,
    // per vertex, the edge towards E, N, W, S (or NONE)
    vertex_edges: Vec<[u32; 4]>,
    bnd: BoundarySets,
    inner: Vec<u32>,
    outer: Vec<u32>,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges == other.edges
            && self.ambient == other.ambient
            && self.mesh == other.mesh
    }
}

impl Eq for Region {}

impl Region {
    /// Region induced by a vertex set.
    pub fn induced<I: IntoIterator<Item = Point>>(
        points: I,
        ambient: Ambient,
        mesh: Mesh,
    ) -> Result<Self, GeometryError> {
        let mut vertices: Vec<Point> = points.into_iter().collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut r = Self::skeleton(vertices, ambient, mesh)?;
        let mut edges = Vec::new();
        for (i, &p) in r.vertices.iter().enumerate() {
            for (dx, dy) in [(1, 0), (0, 1)] {
                if let Some(j) = r.index_of(Point::new(p.x + dx, p.y + dy)) {
                    edges.push((i as u32, j));
                }
            }
        }
        edges.sort_unstable();
        r.set_edges(edges);
        r.finish();
        Ok(r)
    }

    /// Region with an explicit edge list (not necessarily induced).
    pub fn with_edges<I, J>(
        points: I,
        edges: J,
        ambient: Ambient,
        mesh: Mesh,
    ) -> Result<Self, GeometryError>
    where
        I: IntoIterator<Item = Point>,
        J: IntoIterator<Item = (Point, Point)>,
    {
        let mut vertices: Vec<Point> = points.into_iter().collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut r = Self::skeleton(vertices, ambient, mesh)?;
        let mut idx = Vec::new();
        for (p, q) in edges {
            let (a, b) = match (r.index_of(p), r.index_of(q)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(GeometryError::BadEdge(p, q)),
            };
            if (p.x - q.x).abs() + (p.y - q.y).abs() != 1 {
                return Err(GeometryError::BadEdge(p, q));
            }
            idx.push((a.min(b), a.max(b)));
        }
        idx.sort_unstable();
        idx.dedup();
        r.set_edges(idx);
        r.finish();
        Ok(r)
    }

    fn skeleton(vertices: Vec<Point>, ambient: Ambient, mesh: Mesh) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::Empty);
        }
        if ambient == Ambient::Halfplane {
            if let Some(p) = vertices.iter().find(|p| p.y < 0) {
                return Err(GeometryError::BelowAxis(p.x, p.y));
            }
        }
        let x0 = vertices.iter().map(|p| p.x).min().unwrap_or(0);
        let x1 = vertices.iter().map(|p| p.x).max().unwrap_or(0);
        let y0 = vertices.iter().map(|p| p.y).min().unwrap_or(0);
        let y1 = vertices.iter().map(|p| p.y).max().unwrap_or(0);
        let (w, h) = (x1 - x0 + 1, y1 - y0 + 1);
        let mut lookup = vec![NONE; (w as usize) * (h as usize)];
        for (i, p) in vertices.iter().enumerate() {
            lookup[((p.y - y0) * w + (p.x - x0)) as usize] = i as u32;
        }
        let n = vertices.len();
        Ok(Region {
            vertices,
            edges: Vec::new(),
            ambient,
            mesh,
            shape: Shape::Custom,
            x0,
            y0,
            w,
            h,
            lookup,
            vertex_edges: vec![[NONE; 4]; n],
            bnd: BoundarySets {
                full: Vec::new(),
                half: Vec::new(),
            },
            inner: Vec::new(),
            outer: Vec::new(),
        })
    }

    fn set_edges(&mut self, edges: Vec<(u32, u32)>) {
        for (e, &(a, b)) in edges.iter().enumerate() {
            let (pa, pb) = (self.vertices[a as usize], self.vertices[b as usize]);
            // a < b in lexicographic order, so b is east or north of a
            let (da, db) = if pb.x > pa.x { (0, 2) } else { (1, 3) };
            self.vertex_edges[a as usize][da] = e as u32;
            self.vertex_edges[b as usize][db] = e as u32;
        }
        self.edges = edges;
    }

    fn finish(&mut self) {
        self.shape = self.infer_shape();
        self.inner = match self.shape.radii() {
            Some((m, _)) => self.ring(m),
            None => Vec::new(),
        };
        self.bnd = self.compute_boundaries();
        self.outer = match self.shape {
            Shape::Box { n }
            | Shape::HalfBox { n }
            | Shape::Annulus { n, .. }
            | Shape::HalfAnnulus { n, .. } => self.ring(n),
            Shape::Custom => Vec::new(),
        };
    }

    fn infer_shape(&self) -> Shape {
        let outer = self
            .vertices
            .iter()
            .map(|p| p.norm_inf())
            .max()
            .unwrap_or(0);
        let inner = self
            .vertices
            .iter()
            .map(|p| p.norm_inf())
            .min()
            .unwrap_or(0);
        let induced = self.edges.len() == self.count_induced_edges();
        if !induced || outer < 1 {
            return Shape::Custom;
        }
        let ymin = self.y0;
        let in_shape = |p: &Point, lo: i32, half: bool| {
            p.norm_inf() >= lo && p.norm_inf() <= outer && (!half || p.y >= 0)
        };
        let count = |lo: i32, half: bool| -> usize {
            let mut c = 0usize;
            for x in -outer..=outer {
                for y in -outer..=outer {
                    let p = Point::new(x, y);
                    if in_shape(&p, lo, half) {
                        c += 1;
                    }
                }
            }
            c
        };
        let half = ymin >= 0;
        let matches = |lo: i32| {
            self.vertices.iter().all(|p| in_shape(p, lo, half))
                && self.vertices.len() == count(lo, half)
        };
        if inner == 0 && matches(0) {
            return if half {
                Shape::HalfBox { n: outer }
            } else {
                Shape::Box { n: outer }
            };
        }
        if inner >= 1 && matches(inner) {
            return if half {
                Shape::HalfAnnulus { m: inner, n: outer }
            } else {
                Shape::Annulus { m: inner, n: outer }
            };
        }
        Shape::Custom
    }

    fn count_induced_edges(&self) -> usize {
        self.vertices
            .iter()
            .map(|p| {
                [(1, 0), (0, 1)]
                    .iter()
                    .filter(|(dx, dy)| self.index_of(Point::new(p.x + dx, p.y + dy)).is_some())
                    .count()
            })
            .sum()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn mesh(&self) -> Mesh {
        self.mesh
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn point(&self, i: u32) -> Point {
        self.vertices[i as usize]
    }

    pub fn edge_points(&self, e: usize) -> (Point, Point) {
        let (a, b) = self.edges[e];
        (self.point(a), self.point(b))
    }

    #[inline]
    pub fn index_of(&self, p: Point) -> Option<u32> {
        let (dx, dy) = (p.x - self.x0, p.y - self.y0);
        if dx < 0 || dy < 0 || dx >= self.w || dy >= self.h {
            return None;
        }
        let i = self.lookup[(dy * self.w + dx) as usize];
        (i != NONE).then_some(i)
    }

    pub fn contains(&self, p: Point) -> bool {
        self.index_of(p).is_some()
    }

    /// Edges at vertex `i` towards E, N, W, S.
    #[inline]
    pub fn incident_edges(&self, i: u32) -> [u32; 4] {
        self.vertex_edges[i as usize]
    }

    pub fn edge_between(&self, p: Point, q: Point) -> Option<usize> {
        let a = self.index_of(p)?;
        let d = match (q.x - p.x, q.y - p.y) {
            (1, 0) => 0,
            (0, 1) => 1,
            (-1, 0) => 2,
            (0, -1) => 3,
            _ => return None,
        };
        let e = self.vertex_edges[a as usize][d];
        (e != NONE).then_some(e as usize)
    }

    /// In-region neighbours of the vertex with index `i` (vertex adjacency,
    /// not edge adjacency).
    #[inline]
    pub fn neighbor_indices(&self, i: u32, mode: Adjacency, out: &mut Vec<u32>) {
        out.clear();
        let p = self.vertices[i as usize];
        for &(dx, dy) in mode.steps() {
            if let Some(j) = self.index_of(Point::new(p.x + dx, p.y + dy)) {
                out.push(j);
            }
        }
    }

    /// Number of `Z^2` neighbours of `p` that lie in the region.
    pub fn degree(&self, p: Point) -> usize {
        STRONG_STEPS
            .iter()
            .filter(|(dx, dy)| self.contains(Point::new(p.x + dx, p.y + dy)))
            .count()
    }

    /// Region vertices on `∂Λ_m` for annular shapes, empty otherwise.
    pub fn inner_ring(&self) -> &[u32] {
        &self.inner
    }

    /// Region vertices on `∂Λ_n` (the outermost max-norm ring) for standard
    /// shapes, empty for custom regions.
    pub fn outer_ring(&self) -> &[u32] {
        &self.outer
    }

    fn ring(&self, k: i32) -> Vec<u32> {
        (0..self.vertices.len() as u32)
            .filter(|&i| self.vertices[i as usize].norm_inf() == k)
            .collect()
    }

    pub fn boundaries(&self) -> &BoundarySets {
        &self.bnd
    }

    fn compute_boundaries(&self) -> BoundarySets {
        let n = self.vertices.len();
        let mut full = vec![false; n];
        let mut half = vec![false; n];
        for (i, &p) in self.vertices.iter().enumerate() {
            let d = self.degree(p);
            full[i] = d < 4;
            if self.ambient == Ambient::Halfplane {
                let full_deg = if p.y == 0 { 3 } else { 4 };
                half[i] = d < full_deg;
            }
        }
        // the whole inner ring of an annulus, including its full-degree
        // corners, bounds the region
        for &i in &self.inner {
            full[i as usize] = true;
            half[i as usize] = self.ambient == Ambient::Halfplane;
        }
        BoundarySets { full, half }
    }

    pub fn dual(&self) -> DualRegion {
        let ends: Vec<(DualPoint, DualPoint)> = self
            .edges
            .iter()
            .map(|&(a, b)| dual_edge_of(self.point(a), self.point(b)))
            .collect();
        let mut dv: Vec<DualPoint> = ends.iter().flat_map(|&(u, v)| [u, v]).collect();
        dv.sort_unstable();
        dv.dedup();
        let pos = |d: DualPoint| dv.binary_search(&d).map(|i| i as u32).unwrap_or(NONE);
        let dual_edges = ends.iter().map(|&(u, v)| (pos(u), pos(v))).collect();
        DualRegion {
            dual_edges,
            dual_vertices: dv,
            crossing: (0..self.edges.len()).collect(),
        }
    }

    /// Line-oriented text serialization.
    pub fn to_text(&self) -> String {
        let mut s = format!("region ambient={} eps={}\n", self.ambient, self.mesh);
        for p in &self.vertices {
            s.push_str(&format!("v {} {}\n", p.x, p.y));
        }
        for e in 0..self.edges.len() {
            let (p, q) = self.edge_points(e);
            s.push_str(&format!("e {} {} {} {}\n", p.x, p.y, q.x, q.y));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, GeometryError> {
        let perr = |line: usize, msg: &str| GeometryError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
        let mut toks = header.split_whitespace();
        if toks.next() != Some("region") {
            return Err(perr(hl + 1, "header must start with `region`"));
        }
        let mut ambient = None;
        let mut mesh = Mesh::UNIT;
        for t in toks {
            match t.split_once('=') {
                Some(("ambient", "plane")) => ambient = Some(Ambient::Plane),
                Some(("ambient", "halfplane")) => ambient = Some(Ambient::Halfplane),
                Some(("eps", v)) => mesh = v.parse()?,
                _ => return Err(perr(hl + 1, &format!("unknown header field `{t}`"))),
            }
        }
        let ambient = ambient.ok_or_else(|| perr(hl + 1, "missing ambient"))?;
        let mut pts = Vec::new();
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let mut it = line.split_whitespace();
            let kind = it.next().unwrap_or("");
            let nums: Result<Vec<i32>, _> = it.map(str::parse::<i32>).collect();
            let nums = nums.map_err(|_| perr(ln + 1, "bad integer"))?;
            match (kind, nums.as_slice()) {
                ("v", &[x, y]) => pts.push(Point::new(x, y)),
                ("e", &[a, b, c, d]) => edges.push((Point::new(a, b), Point::new(c, d))),
                _ => return Err(perr(ln + 1, "expected `v x y` or `e x1 y1 x2 y2`")),
            }
        }
        Region::with_edges(pts, edges, ambient, mesh)
    }
}

/// Dual edge crossing the primal edge `p–q`.
pub fn dual_edge_of(p: Point, q: Point) -> (DualPoint, DualPoint) {
    let (p, q) = if p < q { (p, q) } else { (q, p) };
    if q.x > p.x {
        (
            DualPoint {
                x2: 2 * p.x + 1,
                y2: 2 * p.y - 1,
            },
            DualPoint {
                x2: 2 * p.x + 1,
                y2: 2 * p.y + 1,
            },
        )
    } else {
        (
            DualPoint {
                x2: 2 * p.x - 1,
                y2: 2 * p.y + 1,
            },
            DualPoint {
                x2: 2 * p.x + 1,
                y2: 2 * p.y + 1,
            },
        )
    }
}

/// `Λ_n`.
pub fn build_box(n: i32) -> Result<Region, GeometryError> {
    if n < 1 {
        return Err(GeometryError::InvalidRadius(n));
    }
    rect_region(-n, -n, n, n, Ambient::Plane, |_| true)
}

/// `Λ⁺_n = Λ_n ∩ (Z × Z₊)`.
pub fn build_half_box(n: i32) -> Result<Region, GeometryError> {
    if n < 1 {
        return Err(GeometryError::InvalidRadius(n));
    }
    rect_region(-n, 0, n, n, Ambient::Halfplane, |_| true)
}

/// `Λ_{m,n} = Λ_n \ Λ_{m-1}`.
pub fn build_annulus(m: i32, n: i32) -> Result<Region, GeometryError> {
    if m < 1 || m > n {
        return Err(GeometryError::InvalidRadii { m, n });
    }
    rect_region(-n, -n, n, n, Ambient::Plane, |p| p.norm_inf() >= m)
}

/// `Λ⁺_{m,n}`.
pub fn build_half_annulus(m: i32, n: i32) -> Result<Region, GeometryError> {
    if m < 1 || m > n {
        return Err(GeometryError::InvalidRadii { m, n });
    }
    rect_region(-n, 0, n, n, Ambient::Halfplane, |p| p.norm_inf() >= m)
}

/// Axis-parallel rectangle `[x0,x1] × [y0,y1]` in the plane.
pub fn build_rectangle(x0: i32, y0: i32, x1: i32, y1: i32) -> Result<Region, GeometryError> {
    rect_region(x0, y0, x1, y1, Ambient::Plane, |_| true)
}

fn rect_region(
    x0: i32,
    y0: i32,
    x1: i32,
    y1: i32,
    ambient: Ambient,
    keep: impl Fn(Point) -> bool,
) -> Result<Region, GeometryError> {
    let pts = (x0..=x1)
        .flat_map(|x| (y0..=y1).map(move |y| Point::new(x, y)))
        .filter(|&p| keep(p));
    Region::induced(pts, ambient, Mesh::UNIT)
}

/// Neighbours of `v` in `Z^2`, clipped to `region` when given.
pub fn neighbors(v: Point, mode: Adjacency, region: Option<&Region>) -> Vec<Point> {
    mode.steps()
        .iter()
        .map(|&(dx, dy)| Point::new(v.x + dx, v.y + dy))
        .filter(|&p| region.is_none_or(|r| r.contains(p)))
        .collect()
}

/// Vertex boundaries of a region, as membership masks over vertex indices.
///
/// Both sets are given by degree deficiency, except that annular shapes
/// always include their whole inner ring `∂Λ_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundarySets {
    full: Vec<bool>,
    half: Vec<bool>,
}

impl BoundarySets {
    /// `∂S`: vertices with fewer than four neighbours in `S`.
    pub fn is_full(&self, i: u32) -> bool {
        self.full[i as usize]
    }

    /// `∂₊S`: degree deficiency relative to `Z × Z₊` (never set in the plane).
    pub fn is_half(&self, i: u32) -> bool {
        self.half[i as usize]
    }

    pub fn full_mask(&self) -> &[bool] {
        &self.full
    }

    pub fn half_mask(&self) -> &[bool] {
        &self.half
    }

    pub fn full_boundary(&self) -> Vec<u32> {
        mask_indices(&self.full)
    }

    pub fn half_boundary(&self) -> Vec<u32> {
        mask_indices(&self.half)
    }
}

fn mask_indices(mask: &[bool]) -> Vec<u32> {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u32)
        .collect()
}

#[derive(Clone, Debug)]
pub struct DualRegion {
    dual_vertices: Vec<DualPoint>,
    dual_edges: Vec<(u32, u32)>,
    // dual edge i crosses primal edge crossing[i]
    crossing: Vec<usize>,
}

impl DualRegion {
    pub fn dual_vertices(&self) -> &[DualPoint] {
        &self.dual_vertices
    }

    pub fn dual_edges(&self) -> &[(u32, u32)] {
        &self.dual_edges
    }

    pub fn dual_edge_points(&self, i: usize) -> (DualPoint, DualPoint) {
        let (a, b) = self.dual_edges[i];
        (
            self.dual_vertices[a as usize],
            self.dual_vertices[b as usize],
        )
    }

    /// Primal edge crossed by dual edge `i`.
    pub fn primal_of(&self, i: usize) -> usize {
        self.crossing[i]
    }

    /// Dual edge crossing primal edge `e`.
    pub fn dual_of(&self, e: usize) -> Option<usize> {
        self.crossing.iter().position(|&c| c == e)
    }
}

/// Convenience for tests and fixtures: set of points of a region.
pub fn point_set(r: &Region) -> HashSet<Point> {
    r.vertices().iter().copied().collect()
}
