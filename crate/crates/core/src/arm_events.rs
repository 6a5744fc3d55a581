//! Colour and type sequences, colour components, and detection of fuzzy
//! Potts and FK arm events in annuli and semi-annuli.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::coloring::{Color, Coloring};
use crate::fine::{FineGrid, SiteIndex};
use crate::fk_sampler::BondConfig;
use crate::geometry::{Adjacency, Region, Shape, NONE};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArmError {
    #[error("empty sequence")]
    Empty,
    #[error("invalid letter {0:?}")]
    BadLetter(char),
    #[error("region is not an annulus of the required kind")]
    NotAnnular,
    #[error("instance too large for the exhaustive oracle ({size} > {max})")]
    TooLarge { size: usize, max: usize },
}

pub use crate::exponents::Setting;

/// Word over `{R, B}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColorSeq(Vec<Color>);

impl ColorSeq {
    pub fn new(letters: Vec<Color>) -> Result<Self, ArmError> {
        if letters.is_empty() {
            return Err(ArmError::Empty);
        }
        Ok(ColorSeq(letters))
    }

    pub fn letters(&self) -> &[Color] {
        &self.0
    }

    pub fn first(&self) -> Color {
        self.0[0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn swapped(&self) -> ColorSeq {
        ColorSeq(self.0.iter().map(|c| c.swap()).collect())
    }

    fn codes(&self) -> Vec<u8> {
        self.0.iter().map(|&c| color_class(c)).collect()
    }

    fn from_codes(codes: &[u8]) -> ColorSeq {
        ColorSeq(codes.iter().map(|&k| class_color(k)).collect())
    }
}

impl FromStr for ColorSeq {
    type Err = ArmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters: Result<Vec<Color>, ArmError> = s
            .trim()
            .chars()
            .map(|c| Color::from_char(c).ok_or(ArmError::BadLetter(c)))
            .collect();
        ColorSeq::new(letters?)
    }
}

impl fmt::Display for ColorSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

/// Word over `{0, 1}`: 1 is a primal open arm, 0 a dual open arm.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeSeq(Vec<u8>);

impl TypeSeq {
    pub fn new(letters: Vec<u8>) -> Result<Self, ArmError> {
        if letters.is_empty() {
            return Err(ArmError::Empty);
        }
        if let Some(&b) = letters.iter().find(|&&b| b > 1) {
            return Err(ArmError::BadLetter(char::from(b'0' + b)));
        }
        Ok(TypeSeq(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl FromStr for TypeSeq {
    type Err = ArmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters: Result<Vec<u8>, ArmError> = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(ArmError::BadLetter(c)),
            })
            .collect();
        TypeSeq::new(letters?)
    }
}

impl fmt::Display for TypeSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|b| write!(f, "{b}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArmVariant {
    /// Red arms strong, blue arms weak.
    Mixed,
    AllStrong,
}

impl ArmVariant {
    /// Adjacency indexed by site class (0 = red, 1 = blue).
    pub(crate) fn adjacency(self) -> [Adjacency; 2] {
        match self {
            ArmVariant::Mixed => [Adjacency::Strong, Adjacency::Weak],
            ArmVariant::AllStrong => [Adjacency::Strong, Adjacency::Strong],
        }
    }

    pub fn adjacency_of(self, c: Color) -> Adjacency {
        self.adjacency()[color_class(c) as usize]
    }
}

#[inline]
pub(crate) fn color_class(c: Color) -> u8 {
    match c {
        Color::R => 0,
        Color::B => 1,
    }
}

#[inline]
pub(crate) fn class_color(k: u8) -> Color {
    if k == 0 {
        Color::R
    } else {
        Color::B
    }
}

fn changes(codes: &[u8]) -> usize {
    codes.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `(I(τ), I⁺(τ))`: cyclic number of colour changes and one plus the
/// linear number.
pub fn interface_count(tau: &ColorSeq) -> (usize, usize) {
    let c = tau.codes();
    let lin = changes(&c);
    let wrap = (c.len() > 1 && c[0] != c[c.len() - 1]) as usize;
    (lin + wrap, lin + 1)
}

fn reduce_codes(codes: &[u8], setting: Setting) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::with_capacity(codes.len());
    for &c in codes {
        if out.last() != Some(&c) {
            out.push(c);
        }
    }
    if setting == Setting::Plane && out.len() > 1 && out[0] == out[out.len() - 1] {
        out.pop();
    }
    out
}

/// Collapse runs of equal letters (cyclically in the plane).
pub fn reduce(tau: &ColorSeq, setting: Setting) -> ColorSeq {
    ColorSeq::from_codes(&reduce_codes(&tau.codes(), setting))
}

pub fn reduce_types(tau: &TypeSeq, setting: Setting) -> TypeSeq {
    TypeSeq(reduce_codes(&tau.0, setting))
}

pub fn is_alternating(tau: &ColorSeq, setting: Setting) -> bool {
    reduce(tau, setting) == *tau
}

/// Per-site component labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabels {
    comp: Vec<u32>,
    colors: Vec<Color>,
}

impl ComponentLabels {
    pub fn component_of(&self, v: u32) -> u32 {
        self.comp[v as usize]
    }

    pub fn color_of(&self, c: u32) -> Color {
        self.colors[c as usize]
    }

    pub fn count(&self) -> usize {
        self.colors.len()
    }
}

/// Monochromatic components: red under strong adjacency, blue under the
/// variant's blue adjacency. Diagonal steps must cross a face of the region.
pub fn color_components(region: &Region, sigma: &Coloring, variant: ArmVariant) -> ComponentLabels {
    let coords: Vec<(i32, i32)> = region.vertices().iter().map(|p| (p.x, p.y)).collect();
    let index = SiteIndex::new(&coords);
    let class: Vec<u8> = sigma.colors().iter().map(|&c| color_class(c)).collect();
    let (comp, cc) = label_sites(&coords, &index, &class, variant.adjacency());
    ComponentLabels {
        comp,
        colors: cc.into_iter().map(class_color).collect(),
    }
}

/// A diagonal step is allowed only across a face whose four corners are all
/// sites; this keeps weak paths from cutting through the hole of an annulus.
#[inline]
pub(crate) fn face_step(index: &SiteIndex, x: i32, y: i32, dx: i32, dy: i32) -> bool {
    dx == 0 || dy == 0 || (index.get(x + dx, y).is_some() && index.get(x, y + dy).is_some())
}

fn label_sites(
    coords: &[(i32, i32)],
    index: &SiteIndex,
    class: &[u8],
    adj: [Adjacency; 2],
) -> (Vec<u32>, Vec<u8>) {
    let n = coords.len();
    let mut comp = vec![NONE; n];
    let mut comp_class = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != NONE {
            continue;
        }
        let id = comp_class.len() as u32;
        let k = class[s];
        comp_class.push(k);
        comp[s] = id;
        stack.push(s as u32);
        while let Some(v) = stack.pop() {
            let (x, y) = coords[v as usize];
            for &(dx, dy) in adj[k as usize].steps() {
                if !face_step(index, x, y, dx, dy) {
                    continue;
                }
                if let Some(w) = index.get(x + dx, y + dy) {
                    if comp[w as usize] == NONE && class[w as usize] == k {
                        comp[w as usize] = id;
                        stack.push(w);
                    }
                }
            }
        }
    }
    (comp, comp_class)
}

/// Sites of an annular domain with its inner/outer touch sets and the
/// counterclockwise walk along the inner ring.
#[derive(Clone, Debug)]
pub(crate) struct SiteDomain {
    pub(crate) coords: Vec<(i32, i32)>,
    pub(crate) index: SiteIndex,
    pub(crate) inner: Vec<bool>,
    pub(crate) outer: Vec<bool>,
    pub(crate) walk: Vec<u32>,
    pub(crate) cyclic: bool,
}

/// Lattice points of max-norm `k`, counterclockwise: from `(k,k)` around
/// the full ring, or from `(k,0)` to `(-k,0)` over the upper half.
pub(crate) fn ring_walk(k: i32, half: bool) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    if half {
        out.extend((0..k).map(|y| (k, y)));
        out.extend((-k + 1..=k).rev().map(|x| (x, k)));
        out.extend((0..=k).rev().map(|y| (-k, y)));
    } else {
        out.extend((-k + 1..=k).rev().map(|x| (x, k)));
        out.extend((-k + 1..=k).rev().map(|y| (-k, y)));
        out.extend((-k..k).map(|x| (x, -k)));
        out.extend((-k..k).map(|y| (k, y)));
    }
    out
}

impl SiteDomain {
    fn radii(region: &Region) -> Result<(i32, i32, bool), ArmError> {
        match region.shape() {
            Shape::Annulus { m, n } => Ok((m, n, false)),
            Shape::HalfAnnulus { m, n } => Ok((m, n, true)),
            _ => Err(ArmError::NotAnnular),
        }
    }

    pub(crate) fn from_region(region: &Region) -> Result<Self, ArmError> {
        let (m, n, half) = Self::radii(region)?;
        let coords: Vec<(i32, i32)> = region.vertices().iter().map(|p| (p.x, p.y)).collect();
        let norm = |&(x, y): &(i32, i32)| x.abs().max(y.abs());
        let inner = coords.iter().map(|c| norm(c) <= m).collect();
        let outer = coords.iter().map(|c| norm(c) >= n).collect();
        Ok(Self::assemble(coords, inner, outer, m, half))
    }

    /// Domain over the annular fine grid of `region`.
    pub(crate) fn fine(region: &Region) -> Result<(Self, FineGrid), ArmError> {
        let (m, n, half) = Self::radii(region)?;
        let grid = FineGrid::annular(region, m, n, half);
        let coords = grid.coords.clone();
        let norm = |&(x, y): &(i32, i32)| x.abs().max(y.abs());
        let inner = coords.iter().map(|c| norm(c) <= 2 * m).collect();
        let outer = coords.iter().map(|c| norm(c) >= 2 * n).collect();
        Ok((Self::assemble(coords, inner, outer, 2 * m, half), grid))
    }

    fn assemble(
        coords: Vec<(i32, i32)>,
        inner: Vec<bool>,
        outer: Vec<bool>,
        k: i32,
        half: bool,
    ) -> Self {
        let index = SiteIndex::new(&coords);
        let walk = ring_walk(k, half)
            .into_iter()
            .filter_map(|(x, y)| index.get(x, y))
            .collect();
        SiteDomain {
            coords,
            index,
            inner,
            outer,
            walk,
            cyclic: !half,
        }
    }

    fn components(&self, class: &[u8], adj: [Adjacency; 2]) -> (Vec<u32>, Vec<u8>) {
        label_sites(&self.coords, &self.index, class, adj)
    }

    /// Crossing components in counterclockwise order along the inner walk.
    fn word(&self, comp: &[u32], comp_class: &[u8]) -> Vec<(u32, u8)> {
        let nc = comp_class.len();
        let mut hits_in = vec![false; nc];
        let mut hits_out = vec![false; nc];
        for (s, &c) in comp.iter().enumerate() {
            hits_in[c as usize] |= self.inner[s];
            hits_out[c as usize] |= self.outer[s];
        }
        let mut word: Vec<u32> = Vec::new();
        for &s in &self.walk {
            let c = comp[s as usize];
            if hits_in[c as usize] && hits_out[c as usize] && word.last() != Some(&c) {
                word.push(c);
            }
        }
        if self.cyclic && word.len() > 1 && word[0] == word[word.len() - 1] {
            word.pop();
        }
        let mut seen = vec![false; nc];
        for &c in &word {
            assert!(
                !seen[c as usize],
                "crossing components interleave along the inner ring"
            );
            seen[c as usize] = true;
        }
        word.into_iter()
            .map(|c| (c, comp_class[c as usize]))
            .collect()
    }
}

/// Is `tau` a (cyclic) subsequence of `word`?
pub(crate) fn word_contains(word: &[u8], tau: &[u8], cyclic: bool) -> bool {
    let l = word.len();
    if tau.len() > l {
        return false;
    }
    let linear = |start: usize| {
        let mut j = 0;
        for i in 0..l {
            if j < tau.len() && word[(start + i) % l] == tau[j] {
                j += 1;
            }
        }
        j == tau.len()
    };
    if cyclic {
        (0..l).any(linear)
    } else {
        linear(0)
    }
}

/// Crossing components of an annulus, ordered counterclockwise along the
/// inner ring (rightmost first in the halfplane).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingWord {
    pub entries: Vec<(u32, Color)>,
    pub cyclic: bool,
}

impl CrossingWord {
    pub fn colors(&self) -> Vec<Color> {
        self.entries.iter().map(|e| e.1).collect()
    }

    pub fn word(&self) -> String {
        self.entries.iter().map(|e| e.1.as_char()).collect()
    }
}

pub fn crossing_word(
    region: &Region,
    sigma: &Coloring,
    variant: ArmVariant,
) -> Result<CrossingWord, ArmError> {
    let dom = SiteDomain::from_region(region)?;
    let class: Vec<u8> = sigma.colors().iter().map(|&c| color_class(c)).collect();
    let (comp, cc) = dom.components(&class, variant.adjacency());
    let entries = dom
        .word(&comp, &cc)
        .into_iter()
        .map(|(c, k)| (c, class_color(k)))
        .collect();
    Ok(CrossingWord {
        entries,
        cyclic: dom.cyclic,
    })
}

/// Result of an arm detector. `reduced_only` marks answers obtained for the
/// reduced sequence because the requested one is not alternating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ArmDetection {
    pub occurs: bool,
    pub reduced_only: bool,
}

fn detect_codes(dom: &SiteDomain, class: &[u8], adj: [Adjacency; 2], tau: &[u8]) -> ArmDetection {
    let setting = if dom.cyclic {
        Setting::Plane
    } else {
        Setting::Halfplane
    };
    let red = reduce_codes(tau, setting);
    let reduced_only = red != tau;
    let (comp, cc) = dom.components(class, adj);
    let word: Vec<u8> = dom.word(&comp, &cc).into_iter().map(|e| e.1).collect();
    ArmDetection {
        occurs: word_contains(&word, &red, dom.cyclic),
        reduced_only,
    }
}

fn color_detect(
    region: &Region,
    sigma: &Coloring,
    tau: &ColorSeq,
    variant: ArmVariant,
    want_half: bool,
) -> Result<ArmDetection, ArmError> {
    let dom = SiteDomain::from_region(region)?;
    if dom.cyclic == want_half {
        return Err(ArmError::NotAnnular);
    }
    let class: Vec<u8> = sigma.colors().iter().map(|&c| color_class(c)).collect();
    Ok(detect_codes(
        &dom,
        &class,
        variant.adjacency(),
        &tau.codes(),
    ))
}

/// `A_τ(m,n)` (Mixed) or `A^s_τ(m,n)` (AllStrong) in an annulus.
pub fn detect_arm_event(
    region: &Region,
    sigma: &Coloring,
    tau: &ColorSeq,
    variant: ArmVariant,
) -> Result<ArmDetection, ArmError> {
    color_detect(region, sigma, tau, variant, false)
}

/// `A⁺_τ(m,n)` or `A^{+s}_τ(m,n)` in a semi-annulus.
pub fn detect_halfplane_arm_event(
    region: &Region,
    sigma: &Coloring,
    tau: &ColorSeq,
    variant: ArmVariant,
) -> Result<ArmDetection, ArmError> {
    color_detect(region, sigma, tau, variant, true)
}

/// FK arm event with primal (1) and dual (0) arms, in an annulus or a
/// semi-annulus.
pub fn detect_fk_arm_event(
    region: &Region,
    omega: &BondConfig,
    tau: &TypeSeq,
) -> Result<ArmDetection, ArmError> {
    let (dom, grid) = SiteDomain::fine(region)?;
    let class = grid.classes(omega);
    // class 1 = primal, letter 1 = primal: letters are classes already
    Ok(detect_codes(&dom, &class, [Adjacency::Strong; 2], &tau.0))
}

/// Largest region (in vertices) accepted by the exhaustive oracles.
pub const ORACLE_MAX_VERTICES: usize = 64;

/// Exhaustive search for vertex-disjoint arms with the colours of `tau`
/// in counterclockwise order. Exact for every `tau`.
pub fn oracle_arm_event(
    region: &Region,
    sigma: &Coloring,
    tau: &ColorSeq,
    variant: ArmVariant,
) -> Result<bool, ArmError> {
    if region.n_vertices() > ORACLE_MAX_VERTICES {
        return Err(ArmError::TooLarge {
            size: region.n_vertices(),
            max: ORACLE_MAX_VERTICES,
        });
    }
    let dom = SiteDomain::from_region(region)?;
    let class: Vec<u8> = sigma.colors().iter().map(|&c| color_class(c)).collect();
    Ok(Oracle::new(&dom, &class, variant.adjacency()).run(&tau.codes()))
}

pub fn oracle_fk_arm_event(
    region: &Region,
    omega: &BondConfig,
    tau: &TypeSeq,
) -> Result<bool, ArmError> {
    if region.n_vertices() > ORACLE_MAX_VERTICES {
        return Err(ArmError::TooLarge {
            size: region.n_vertices(),
            max: ORACLE_MAX_VERTICES,
        });
    }
    let (dom, grid) = SiteDomain::fine(region)?;
    let class = grid.classes(omega);
    Ok(Oracle::new(&dom, &class, [Adjacency::Strong; 2]).run(&tau.0))
}

struct Oracle<'a> {
    dom: &'a SiteDomain,
    class: &'a [u8],
    used: Vec<bool>,
    nbrs: Vec<Vec<u32>>,
    seen: Vec<u32>,
    stamp: u32,
    queue: Vec<u32>,
}

impl<'a> Oracle<'a> {
    fn new(dom: &'a SiteDomain, class: &'a [u8], adj: [Adjacency; 2]) -> Self {
        let n = dom.coords.len();
        let nbrs = (0..n)
            .map(|s| {
                let (x, y) = dom.coords[s];
                adj[class[s] as usize]
                    .steps()
                    .iter()
                    .filter(|&&(dx, dy)| face_step(&dom.index, x, y, dx, dy))
                    .filter_map(|&(dx, dy)| dom.index.get(x + dx, y + dy))
                    .filter(|&w| class[w as usize] == class[s])
                    .collect()
            })
            .collect();
        Oracle {
            dom,
            class,
            used: vec![false; n],
            nbrs,
            seen: vec![0; n],
            stamp: 0,
            queue: Vec::new(),
        }
    }

    fn run(&mut self, tau: &[u8]) -> bool {
        if self.dom.cyclic {
            (0..tau.len()).any(|r| {
                let rot: Vec<u8> = tau[r..].iter().chain(&tau[..r]).copied().collect();
                self.arms(&rot, 0, 0)
            })
        } else {
            self.arms(tau, 0, 0)
        }
    }

    /// Can some unused site of class `k` reach the outer set from `from`
    /// without entering the inner set after the first step?
    fn reaches_outer(&mut self, from: u32) -> bool {
        self.stamp += 1;
        let st = self.stamp;
        self.queue.clear();
        self.queue.push(from);
        self.seen[from as usize] = st;
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            if self.dom.outer[v as usize] {
                return true;
            }
            for i in 0..self.nbrs[v as usize].len() {
                let w = self.nbrs[v as usize][i];
                if self.seen[w as usize] != st
                    && !self.used[w as usize]
                    && !self.dom.inner[w as usize]
                {
                    self.seen[w as usize] = st;
                    self.queue.push(w);
                }
            }
        }
        false
    }

    fn feasible(&mut self, tau: &[u8], pos: usize) -> bool {
        let walk = &self.dom.walk;
        tau.iter().all(|&k| {
            (pos..walk.len()).any(|p| {
                let s = walk[p];
                self.class[s as usize] == k && !self.used[s as usize] && self.reaches_outer(s)
            })
        })
    }

    fn arms(&mut self, tau: &[u8], i: usize, pos: usize) -> bool {
        if i == tau.len() {
            return true;
        }
        if !self.feasible(&tau[i..], pos) {
            return false;
        }
        for p in pos..self.dom.walk.len() {
            let s = self.dom.walk[p];
            if self.class[s as usize] != tau[i] || self.used[s as usize] {
                continue;
            }
            if i + 1 == tau.len() {
                if self.reaches_outer(s) {
                    return true;
                }
                continue;
            }
            if self.extend(tau, i, p, s) {
                return true;
            }
        }
        false
    }

    /// Enumerate simple paths from `v` to the outer set, then place the
    /// remaining arms.
    fn extend(&mut self, tau: &[u8], i: usize, p: usize, v: u32) -> bool {
        self.used[v as usize] = true;
        let found = if self.dom.outer[v as usize] {
            self.arms(tau, i + 1, p + 1)
        } else {
            let mut found = false;
            let nb = self.nbrs[v as usize].clone();
            for w in nb {
                if self.used[w as usize] || self.dom.inner[w as usize] {
                    continue;
                }
                if !self.reaches_outer(w) {
                    continue;
                }
                if self.extend(tau, i, p, w) {
                    found = true;
                    break;
                }
            }
            found
        };
        self.used[v as usize] = false;
        found
    }
}

/// Direction of a box crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Crossing {
    LeftRight,
    TopBottom,
}

/// Monochromatic crossing of the bounding box of `region` with the given
/// adjacency.
pub fn color_crossing(
    region: &Region,
    sigma: &Coloring,
    color: Color,
    adj: Adjacency,
    dir: Crossing,
) -> bool {
    let v = region.vertices();
    let (xmin, xmax) = (
        v.iter().map(|p| p.x).min().unwrap_or(0),
        v.iter().map(|p| p.x).max().unwrap_or(0),
    );
    let (ymin, ymax) = (
        v.iter().map(|p| p.y).min().unwrap_or(0),
        v.iter().map(|p| p.y).max().unwrap_or(0),
    );
    let (start, end): (Box<dyn Fn(i32, i32) -> bool>, Box<dyn Fn(i32, i32) -> bool>) = match dir {
        Crossing::LeftRight => (
            Box::new(move |x, _| x == xmin),
            Box::new(move |x, _| x == xmax),
        ),
        Crossing::TopBottom => (
            Box::new(move |_, y| y == ymax),
            Box::new(move |_, y| y == ymin),
        ),
    };
    let mut seen = vec![false; v.len()];
    let mut stack: Vec<u32> = (0..v.len() as u32)
        .filter(|&i| sigma.get(i) == color && start(v[i as usize].x, v[i as usize].y))
        .collect();
    stack.iter().for_each(|&i| seen[i as usize] = true);
    let mut nb = Vec::new();
    while let Some(i) = stack.pop() {
        let p = v[i as usize];
        if end(p.x, p.y) {
            return true;
        }
        region.neighbor_indices(i, adj, &mut nb);
        for &j in &nb {
            if !seen[j as usize] && sigma.get(j) == color {
                seen[j as usize] = true;
                stack.push(j);
            }
        }
    }
    false
}

/// Open left-right crossing of the bounding box of `omega`'s region.
pub fn fk_open_crossing_lr(omega: &BondConfig) -> bool {
    let region = omega.region();
    let v = region.vertices();
    let xmin = v.iter().map(|p| p.x).min().unwrap_or(0);
    let xmax = v.iter().map(|p| p.x).max().unwrap_or(0);
    let mut seen = vec![false; v.len()];
    let mut stack: Vec<u32> = (0..v.len() as u32)
        .filter(|&i| v[i as usize].x == xmin)
        .collect();
    stack.iter().for_each(|&i| seen[i as usize] = true);
    while let Some(i) = stack.pop() {
        if v[i as usize].x == xmax {
            return true;
        }
        for e in region.incident_edges(i) {
            if e == NONE || !omega.is_open(e as usize) {
                continue;
            }
            let (a, b) = region.edges()[e as usize];
            let j = if a == i { b } else { a };
            if !seen[j as usize] {
                seen[j as usize] = true;
                stack.push(j);
            }
        }
    }
    false
}

/// Dual-open top-bottom crossing of the dual rectangle of a primal
/// rectangle `[a,b] × [c,d]`: dual vertices `(x+½, y+½)` for `a ≤ x < b`,
/// `c−1 ≤ y ≤ d`, joined across closed primal edges.
pub fn fk_dual_crossing_tb(omega: &BondConfig) -> bool {
    let region = omega.region();
    let v = region.vertices();
    let a = v.iter().map(|p| p.x).min().unwrap_or(0);
    let b = v.iter().map(|p| p.x).max().unwrap_or(0);
    let c = v.iter().map(|p| p.y).min().unwrap_or(0);
    let d = v.iter().map(|p| p.y).max().unwrap_or(0);
    // dual vertex (x+½, y+½) stored at column x-a, row y-(c-1)
    let w = (b - a) as usize;
    let h = (d - c + 2) as usize;
    if w == 0 {
        return true;
    }
    let id = |x: i32, y: i32| (y - c + 1) as usize * w + (x - a) as usize;
    let closed =
        |p: crate::geometry::Point, q: crate::geometry::Point| match region.edge_between(p, q) {
            Some(e) => !omega.is_open(e),
            None => true,
        };
    let mut seen = vec![false; w * h];
    let mut stack: Vec<(i32, i32)> = (a..b).map(|x| (x, d)).collect();
    stack.iter().for_each(|&(x, y)| seen[id(x, y)] = true);
    use crate::geometry::Point as P;
    while let Some((x, y)) = stack.pop() {
        if y == c - 1 {
            return true;
        }
        let mut push = |nx: i32, ny: i32, ok: bool, stack: &mut Vec<(i32, i32)>| {
            if ok && nx >= a && nx < b && ny >= c - 1 && ny <= d && !seen[id(nx, ny)] {
                seen[id(nx, ny)] = true;
                stack.push((nx, ny));
            }
        };
        // down crosses the horizontal edge (x,y)-(x+1,y)
        push(x, y - 1, closed(P::new(x, y), P::new(x + 1, y)), &mut stack);
        if y < d {
            push(
                x,
                y + 1,
                closed(P::new(x, y + 1), P::new(x + 1, y + 1)),
                &mut stack,
            );
        }
        // sideways crosses a vertical edge, only strictly inside the box
        if y >= c && y < d {
            if x + 1 < b {
                push(
                    x + 1,
                    y,
                    closed(P::new(x + 1, y), P::new(x + 1, y + 1)),
                    &mut stack,
                );
            }
            if x > a {
                push(x - 1, y, closed(P::new(x, y), P::new(x, y + 1)), &mut stack);
            }
        }
    }
    false
}
