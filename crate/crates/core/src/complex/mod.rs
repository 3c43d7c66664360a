//! The lattice cube `[0, n]^d`, its cubical faces, axis-aligned boxes, the
//! flag of big faces walked by the descent, and the Kuhn triangulation.

mod kuhn;

pub use kuhn::{subdivide_l, triangulate, Simplex, SimplicialRegion};

use serde::{Deserialize, Serialize};

use crate::algebra::{parity_sign, Cell, CellComplex};
use crate::error::{Error, Result};

pub type Coord = u32;

/// A lattice point of the grid.
pub type Point = Vec<Coord>;

/// Largest supported ambient dimension (axis sets are stored as `u32` masks).
pub const MAX_DIM: usize = 16;

/// Dimension `d`, side length `n` and color-constraint parameter `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    pub d: usize,
    pub n: u32,
    pub m: usize,
}

impl GridSpec {
    pub fn new(d: usize, n: u32, m: usize) -> Result<Self> {
        let spec = GridSpec { d, n, m };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<()> {
        if self.d == 0 || self.d > MAX_DIM {
            return Err(Error::InvalidSpec(format!(
                "d must lie in 1..={MAX_DIM}, got {}",
                self.d
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidSpec("n must be positive".into()));
        }
        if self.m >= self.d {
            return Err(Error::InvalidSpec(format!(
                "m must lie in 0..={}, got {}",
                self.d - 1,
                self.m
            )));
        }
        if self.vertex_count_checked().is_none() {
            return Err(Error::InvalidSpec("(n+1)^d overflows".into()));
        }
        Ok(())
    }

    fn vertex_count_checked(&self) -> Option<usize> {
        let side = usize::try_from(self.n).ok()?.checked_add(1)?;
        side.checked_pow(u32::try_from(self.d).ok()?)
    }

    /// `(n + 1)^d`.
    pub fn vertex_count(&self) -> usize {
        self.vertex_count_checked().expect("checked at construction")
    }

    /// The whole cube `Q` as a region.
    pub fn cube(&self) -> Region {
        Region {
            lo: vec![0; self.d],
            hi: vec![self.n; self.d],
        }
    }

    /// Linear index of a vertex, axis 1 varying fastest.
    pub fn vertex_index(&self, p: &[Coord]) -> usize {
        let side = self.n as usize + 1;
        p.iter().rev().fold(0usize, |acc, &x| acc * side + x as usize)
    }

    pub fn vertex_at(&self, mut index: usize) -> Point {
        let side = self.n as usize + 1;
        (0..self.d)
            .map(|_| {
                let x = (index % side) as Coord;
                index /= side;
                x
            })
            .collect()
    }

    /// Vertices in file order (axis 1 fastest).
    pub fn vertices(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.vertex_count()).map(move |i| self.vertex_at(i))
    }

    /// The canonical flag `F_m = Q ⊃ F_{m-1} ⊃ ... ⊃ F_0`.
    pub fn flag(&self) -> BigFaceFlag {
        BigFaceFlag::new(self)
    }
}

/// Axis-aligned box `lo <= x <= hi` inside the grid. Axes with `lo == hi`
/// are pinned.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    lo: Vec<Coord>,
    hi: Vec<Coord>,
}

impl Region {
    pub fn new(lo: Vec<Coord>, hi: Vec<Coord>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() || lo.len() > MAX_DIM {
            return Err(Error::InvalidSpec("region bounds have inconsistent length".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::InvalidSpec("region has lo > hi".into()));
        }
        Ok(Region { lo, hi })
    }

    pub fn lo(&self) -> &[Coord] {
        &self.lo
    }

    pub fn hi(&self) -> &[Coord] {
        &self.hi
    }

    /// Length of the coordinate vectors.
    pub fn ambient_dim(&self) -> usize {
        self.lo.len()
    }

    /// Number of non-pinned axes.
    pub fn dim(&self) -> usize {
        self.free_axes().len()
    }

    pub fn free_axes(&self) -> Vec<usize> {
        (0..self.lo.len()).filter(|&a| self.lo[a] < self.hi[a]).collect()
    }

    pub fn is_free(&self, axis: usize) -> bool {
        self.lo[axis] < self.hi[axis]
    }

    pub fn max_side(&self) -> u32 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).max().unwrap_or(0)
    }

    /// The sub-box with `axis` pinned at `level`.
    pub fn pinned(&self, axis: usize, level: Coord) -> Result<Region> {
        if level < self.lo[axis] || level > self.hi[axis] {
            return Err(Error::InvalidSpec(format!(
                "level {level} outside axis {axis} range"
            )));
        }
        let mut out = self.clone();
        out.lo[axis] = level;
        out.hi[axis] = level;
        Ok(out)
    }

    pub fn contains_point(&self, p: &[Coord]) -> bool {
        p.len() == self.lo.len()
            && p
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(&x, (&a, &b))| a <= x && x <= b)
    }

    pub fn contains_face(&self, f: &CubeFace) -> bool {
        if f.anchor.len() != self.lo.len() || !self.contains_point(&f.anchor) {
            return false;
        }
        f.free.iter().all(|&a| f.anchor[a] < self.hi[a])
    }

    /// Lattice points of the box in lexicographic order.
    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        let mut cur = self.lo.clone();
        loop {
            out.push(cur.clone());
            // odometer with the last axis fastest gives lexicographic order
            let mut a = cur.len();
            loop {
                if a == 0 {
                    return out;
                }
                a -= 1;
                if cur[a] < self.hi[a] {
                    cur[a] += 1;
                    break;
                }
                cur[a] = self.lo[a];
            }
        }
    }

    /// All `k`-faces of the cubical partition of the box, ordered by
    /// `(free, anchor)`.
    pub fn faces(&self, k: usize) -> Result<Vec<CubeFace>> {
        let axes = self.free_axes();
        if k > axes.len() {
            return Err(Error::Dimension(format!(
                "no {k}-faces in a {}-dimensional region",
                axes.len()
            )));
        }
        let mut out = Vec::new();
        for free in combinations(&axes, k) {
            let mut hi = self.hi.clone();
            for &a in &free {
                hi[a] -= 1;
            }
            let anchors = Region {
                lo: self.lo.clone(),
                hi,
            };
            for anchor in anchors.points() {
                out.push(CubeFace {
                    anchor,
                    free: free.clone(),
                });
            }
        }
        Ok(out)
    }
}

impl CellComplex for Region {
    type Cell = CubeFace;

    fn contains(&self, cell: &CubeFace) -> bool {
        self.contains_face(cell)
    }

    fn cells(&self, dim: usize) -> Vec<CubeFace> {
        self.faces(dim).unwrap_or_default()
    }

    fn cofaces_with_incidence(&self, cell: &CubeFace) -> Vec<(CubeFace, i64)> {
        let mut out = Vec::new();
        for a in self.free_axes() {
            if cell.free.contains(&a) {
                continue;
            }
            let mut free = cell.free.clone();
            let pos = free.partition_point(|&x| x < a);
            free.insert(pos, a);
            let sign = parity_sign(pos);
            // cell as the bottom copy along `a`
            if cell.anchor[a] < self.hi[a] {
                out.push((
                    CubeFace {
                        anchor: cell.anchor.clone(),
                        free: free.clone(),
                    },
                    -sign,
                ));
            }
            // cell as the top copy along `a`
            if cell.anchor[a] > self.lo[a] {
                let mut anchor = cell.anchor.clone();
                anchor[a] -= 1;
                out.push((CubeFace { anchor, free }, sign));
            }
        }
        out.sort();
        out
    }
}

/// All `k`-element subsets of `items`, in lexicographic order.
pub(crate) fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// A face of the unit-cell partition: `anchor + [0,1]^free`.
///
/// Field order makes the derived ordering compare `free` first, then
/// `anchor`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeFace {
    free: Vec<usize>,
    anchor: Point,
}

impl CubeFace {
    /// `free` must be strictly increasing and index into `anchor`.
    pub fn new(anchor: Point, free: Vec<usize>) -> Result<Self> {
        if anchor.is_empty() || anchor.len() > MAX_DIM {
            return Err(Error::Dimension("anchor length out of range".into()));
        }
        if free.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Dimension("free axes must be strictly increasing".into()));
        }
        if free.last().is_some_and(|&a| a >= anchor.len()) {
            return Err(Error::Dimension("free axis exceeds dimension".into()));
        }
        Ok(CubeFace { free, anchor })
    }

    /// Like [`CubeFace::new`] but also checks the face fits in `spec`'s grid.
    pub fn in_grid(spec: &GridSpec, anchor: Point, free: Vec<usize>) -> Result<Self> {
        if anchor.len() != spec.d {
            return Err(Error::Dimension(format!(
                "anchor has length {}, grid has dimension {}",
                anchor.len(),
                spec.d
            )));
        }
        let f = CubeFace::new(anchor, free)?;
        if !spec.cube().contains_face(&f) {
            return Err(Error::Membership(format!("{f:?} does not fit in the grid")));
        }
        Ok(f)
    }

    pub fn vertex(p: Point) -> Self {
        CubeFace {
            free: Vec::new(),
            anchor: p,
        }
    }

    pub fn anchor(&self) -> &[Coord] {
        &self.anchor
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Collapses free `axis` to `level`.
    pub(crate) fn drop_axis(&self, axis: usize, level: Coord) -> CubeFace {
        let mut anchor = self.anchor.clone();
        anchor[axis] = level;
        CubeFace {
            free: self.free.iter().copied().filter(|&a| a != axis).collect(),
            anchor,
        }
    }

    /// The unit extrusion along pinned `axis` starting at `level`.
    pub(crate) fn extrude(&self, axis: usize, level: Coord) -> CubeFace {
        let mut anchor = self.anchor.clone();
        anchor[axis] = level;
        let mut free = self.free.clone();
        let pos = free.partition_point(|&a| a < axis);
        free.insert(pos, axis);
        CubeFace { free, anchor }
    }

    /// Moves a face with pinned `axis` to `level`.
    pub(crate) fn translate_to(&self, axis: usize, level: Coord) -> CubeFace {
        let mut anchor = self.anchor.clone();
        anchor[axis] = level;
        CubeFace {
            free: self.free.clone(),
            anchor,
        }
    }

    /// Corner points of the face.
    pub fn vertices(&self) -> Vec<Point> {
        let k = self.free.len();
        (0u32..1 << k)
            .map(|mask| {
                let mut p = self.anchor.clone();
                for (i, &a) in self.free.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        p[a] += 1;
                    }
                }
                p
            })
            .collect()
    }

    /// Whether the lattice point lies on this face.
    pub fn contains_point(&self, p: &[Coord]) -> bool {
        p.len() == self.anchor.len()
            && (0..p.len()).all(|a| {
                if self.free.contains(&a) {
                    p[a] == self.anchor[a] || p[a] == self.anchor[a] + 1
                } else {
                    p[a] == self.anchor[a]
                }
            })
    }
}

impl Cell for CubeFace {
    fn dim(&self) -> usize {
        self.free.len()
    }

    /// `sum_i (-1)^i (top_i - bottom_i)` over the free axes in order.
    fn boundary(&self) -> Vec<(CubeFace, i64)> {
        let mut out = Vec::with_capacity(2 * self.free.len());
        for (i, &a) in self.free.iter().enumerate() {
            let sign = parity_sign(i);
            let bottom = self.drop_axis(a, self.anchor[a]);
            let top = self.drop_axis(a, self.anchor[a] + 1);
            out.push((top, sign));
            out.push((bottom, -sign));
        }
        out
    }
}

/// Every `k`-face of `region` inside `spec`'s grid.
pub fn faces_of(spec: &GridSpec, region: &Region, k: usize) -> Result<Vec<CubeFace>> {
    if region.ambient_dim() != spec.d {
        return Err(Error::Dimension("region does not match the grid".into()));
    }
    region.faces(k)
}

/// Cubical boundary of a single face.
pub fn boundary_cube(face: &CubeFace) -> Result<crate::algebra::Chain<CubeFace>> {
    if face.dim() == 0 {
        return Err(Error::Dimension("a vertex has no boundary".into()));
    }
    crate::algebra::Chain::from_terms(face.dim() - 1, face.boundary())
}

/// The flag of big faces used by the descent. Level `k` holds the
/// `(d - m + k)`-dimensional face `F_k` spanned by the first `d - m + k`
/// axes; `F_{k-1}` pins the last of them to `0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigFaceFlag {
    levels: Vec<Region>,
}

impl BigFaceFlag {
    pub fn new(spec: &GridSpec) -> Self {
        let levels = (0..=spec.m)
            .map(|k| {
                let free = spec.d - spec.m + k;
                let mut hi = vec![0; spec.d];
                for h in hi.iter_mut().take(free) {
                    *h = spec.n;
                }
                Region {
                    lo: vec![0; spec.d],
                    hi,
                }
            })
            .collect();
        BigFaceFlag { levels }
    }

    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// `F_k`.
    pub fn face(&self, k: usize) -> &Region {
        &self.levels[k]
    }

    /// The axis pinned when passing from `F_k` to `F_{k-1}`.
    pub fn pinned_axis(&self, k: usize) -> usize {
        self.levels[k].dim() - 1
    }
}
