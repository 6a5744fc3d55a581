//! The doubled lattice: primal vertices at even/even, edge midpoints at
//! mixed parity and dual vertices at odd/odd coordinates. Primal and dual
//! open paths become 4-connected paths of two site classes.

use crate::fk_sampler::BondConfig;
use crate::geometry::{Region, NONE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum FineKind {
    Primal(u32),
    Mid(u32),
    Dual,
}

/// Coordinate lookup over a bounding box.
#[derive(Clone, Debug)]
pub(crate) struct SiteIndex {
    x0: i32,
    y0: i32,
    w: i32,
    h: i32,
    idx: Vec<u32>,
}

impl SiteIndex {
    pub(crate) fn new(coords: &[(i32, i32)]) -> Self {
        let x0 = coords.iter().map(|c| c.0).min().unwrap_or(0);
        let x1 = coords.iter().map(|c| c.0).max().unwrap_or(0);
        let y0 = coords.iter().map(|c| c.1).min().unwrap_or(0);
        let y1 = coords.iter().map(|c| c.1).max().unwrap_or(0);
        let (w, h) = (x1 - x0 + 1, y1 - y0 + 1);
        let mut idx = vec![NONE; (w as usize) * (h as usize)];
        for (i, &(x, y)) in coords.iter().enumerate() {
            idx[((y - y0) * w + (x - x0)) as usize] = i as u32;
        }
        SiteIndex { x0, y0, w, h, idx }
    }

    #[inline]
    pub(crate) fn get(&self, x: i32, y: i32) -> Option<u32> {
        let (dx, dy) = (x - self.x0, y - self.y0);
        if dx < 0 || dy < 0 || dx >= self.w || dy >= self.h {
            return None;
        }
        let i = self.idx[(dy * self.w + dx) as usize];
        (i != NONE).then_some(i)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct FineGrid {
    pub(crate) coords: Vec<(i32, i32)>,
    pub(crate) kind: Vec<FineKind>,
}

impl FineGrid {
    /// Fine grid of an annulus `Λ_{m,n}` (or semi-annulus): dual vertices
    /// are kept only inside the closed geometric annulus.
    pub(crate) fn annular(region: &Region, m: i32, n: i32, half: bool) -> Self {
        Self::filtered(region, |(x, y)| {
            let k = x.abs().max(y.abs());
            k >= 2 * m && k <= 2 * n && (!half || y >= 0)
        })
    }

    fn filtered(region: &Region, keep_dual: impl Fn((i32, i32)) -> bool) -> Self {
        let mut coords = Vec::new();
        let mut kind = Vec::new();
        for (i, p) in region.vertices().iter().enumerate() {
            coords.push((2 * p.x, 2 * p.y));
            kind.push(FineKind::Primal(i as u32));
        }
        let mut duals = Vec::new();
        for e in 0..region.n_edges() {
            let (p, q) = region.edge_points(e);
            coords.push((p.x + q.x, p.y + q.y));
            kind.push(FineKind::Mid(e as u32));
            if q.x != p.x {
                duals.push((p.x + q.x, 2 * p.y - 1));
                duals.push((p.x + q.x, 2 * p.y + 1));
            } else {
                duals.push((2 * p.x - 1, p.y + q.y));
                duals.push((2 * p.x + 1, p.y + q.y));
            }
        }
        duals.sort_unstable();
        duals.dedup();
        for d in duals.into_iter().filter(|&d| keep_dual(d)) {
            coords.push(d);
            kind.push(FineKind::Dual);
        }
        FineGrid { coords, kind }
    }

    /// Class 1 for primal vertices and open-edge midpoints, class 0 for dual
    /// vertices and closed-edge midpoints.
    pub(crate) fn classes(&self, omega: &BondConfig) -> Vec<u8> {
        self.kind
            .iter()
            .map(|k| match *k {
                FineKind::Primal(_) => 1,
                FineKind::Mid(e) => omega.is_open(e as usize) as u8,
                FineKind::Dual => 0,
            })
            .collect()
    }
}
