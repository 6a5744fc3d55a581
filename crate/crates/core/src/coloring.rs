//! Fuzzy Potts colourings: every FK cluster is painted red with probability
//! `r`, blue otherwise.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::fk_sampler::ClusterSet;
use crate::geometry::Region;

#[derive(Debug, Error, PartialEq)]
pub enum ColoringError {
    #[error("r must lie in (0, 1), got {0}")]
    BadR(f64),
    #[error("wired-red colouring needs wired clusters")]
    NotWired,
    #[error("cluster set covers {clusters} vertices, region has {region}")]
    SizeMismatch { clusters: usize, region: usize },
    #[error("snapshot: {0}")]
    Snapshot(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    R,
    B,
}

impl Color {
    pub fn swap(self) -> Color {
        match self {
            Color::R => Color::B,
            Color::B => Color::R,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Color::R => 'R',
            Color::B => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Color> {
        match c {
            'R' | 'r' => Some(Color::R),
            'B' | 'b' => Some(Color::B),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ColorMode {
    Iid,
    /// The wired boundary cluster is red, all other clusters i.i.d.
    WiredRed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    region: Arc<Region>,
    colors: Vec<Color>,
}

impl Coloring {
    pub fn new(region: Arc<Region>, colors: Vec<Color>) -> Result<Self, ColoringError> {
        if colors.len() != region.n_vertices() {
            return Err(ColoringError::SizeMismatch {
                clusters: colors.len(),
                region: region.n_vertices(),
            });
        }
        Ok(Coloring { region, colors })
    }

    pub fn uniform(region: Arc<Region>, c: Color) -> Self {
        let n = region.n_vertices();
        Coloring {
            region,
            colors: vec![c; n],
        }
    }

    pub fn from_fn(
        region: Arc<Region>,
        mut f: impl FnMut(crate::geometry::Point) -> Color,
    ) -> Self {
        let colors = region.vertices().iter().map(|&p| f(p)).collect();
        Coloring { region, colors }
    }

    pub fn region(&self) -> &Arc<Region> {
        &self.region
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    #[inline]
    pub fn get(&self, v: u32) -> Color {
        self.colors[v as usize]
    }

    pub fn set(&mut self, v: u32, c: Color) {
        self.colors[v as usize] = c;
    }

    /// Colour of the vertex at `p`, if present.
    pub fn at(&self, p: crate::geometry::Point) -> Option<Color> {
        self.region.index_of(p).map(|i| self.get(i))
    }

    /// Restriction to a subregion, matching vertices by coordinates.
    /// Vertices of `sub` outside this colouring's region are blue.
    pub fn restrict_to(&self, sub: &Arc<Region>) -> Coloring {
        let colors = sub
            .vertices()
            .iter()
            .map(|&p| self.at(p).unwrap_or(Color::B))
            .collect();
        Coloring {
            region: Arc::clone(sub),
            colors,
        }
    }

    pub fn is_constant_on(&self, clusters: &ClusterSet) -> bool {
        let mut seen: Vec<Option<Color>> = vec![None; clusters.count()];
        self.colors.iter().enumerate().all(|(v, &c)| {
            let slot = &mut seen[clusters.cluster_of(v as u32) as usize];
            match slot {
                Some(prev) => *prev == c,
                None => {
                    *slot = Some(c);
                    true
                }
            }
        })
    }

    /// `colors <n>` header then one `R`/`B` character per vertex in sorted
    /// vertex order.
    pub fn to_snapshot(&self) -> String {
        let body: String = self.colors.iter().map(|c| c.as_char()).collect();
        format!("colors {}\n{}\n", self.colors.len(), body)
    }

    pub fn from_snapshot(region: Arc<Region>, text: &str) -> Result<Self, ColoringError> {
        let bad = |m: &str| ColoringError::Snapshot(m.to_string());
        let mut lines = text.lines();
        let n: usize = lines
            .next()
            .and_then(|h| h.strip_prefix("colors "))
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| bad("header must be `colors <n>`"))?;
        let colors: Option<Vec<Color>> = lines
            .flat_map(|l| l.trim().chars())
            .map(Color::from_char)
            .collect();
        let colors = colors.ok_or_else(|| bad("expected only R/B characters"))?;
        if colors.len() != n {
            return Err(bad("length does not match header"));
        }
        Coloring::new(region, colors)
    }
}

/// Paint every cluster independently. Colours are drawn in increasing
/// cluster-id order; under `WiredRed` the ghost cluster draws nothing.
pub fn color_clusters<R: Rng + ?Sized>(
    region: &Arc<Region>,
    clusters: &ClusterSet,
    r: f64,
    mode: ColorMode,
    rng: &mut R,
) -> Result<Coloring, ColoringError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(ColoringError::BadR(r));
    }
    if clusters.ids().len() != region.n_vertices() {
        return Err(ColoringError::SizeMismatch {
            clusters: clusters.ids().len(),
            region: region.n_vertices(),
        });
    }
    let forced = match mode {
        ColorMode::Iid => None,
        ColorMode::WiredRed => Some(clusters.ghost().ok_or(ColoringError::NotWired)?),
    };
    let per_cluster: Vec<Color> = (0..clusters.count() as u32)
        .map(|c| {
            if Some(c) == forced || rng.random::<f64>() < r {
                Color::R
            } else {
                Color::B
            }
        })
        .collect();
    let colors = clusters
        .ids()
        .iter()
        .map(|&c| per_cluster[c as usize])
        .collect();
    Ok(Coloring {
        region: Arc::clone(region),
        colors,
    })
}

pub fn color_swap(sigma: &Coloring) -> Coloring {
    Coloring {
        region: Arc::clone(&sigma.region),
        colors: sigma.colors.iter().map(|c| c.swap()).collect(),
    }
}
