//! Kuhn (Freudenthal) triangulation of the lattice grid.
//!
//! A simplex is a chain `v_0 < v_1 < ... < v_k` of lattice points in the
//! product order whose total span `v_k - v_0` is a 0/1 vector. The top
//! simplices of a cubical face are the monotone unit-step paths from its
//! anchor to the opposite corner; lower simplices (diagonals and the like)
//! are their faces. Simplices are stored in this canonical increasing order
//! and orientation is carried by chain coefficients.

use crate::algebra::{checked_mul, parity_sign, Cell, CellComplex, Chain};
use crate::complex::{CubeFace, Point, Region, MAX_DIM};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    vertices: Vec<Point>,
}

/// Bitmask of axes where `b - a` is 1, if `b - a` is a 0/1 vector.
fn step_mask(a: &[u32], b: &[u32]) -> Option<u32> {
    let mut mask = 0u32;
    for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
        match y.checked_sub(x) {
            Some(0) => {}
            Some(1) => mask |= 1 << i,
            _ => return None,
        }
    }
    Some(mask)
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::Dimension("a simplex needs at least one vertex".into()));
        };
        let d = first.len();
        if d == 0 || d > MAX_DIM || vertices.iter().any(|v| v.len() != d) {
            return Err(Error::Dimension("simplex vertices have inconsistent length".into()));
        }
        for w in vertices.windows(2) {
            match step_mask(&w[0], &w[1]) {
                Some(m) if m != 0 => {}
                _ => {
                    return Err(Error::Dimension(
                        "consecutive simplex vertices must differ by a nonzero 0/1 step".into(),
                    ))
                }
            }
        }
        if step_mask(first, vertices.last().unwrap()).is_none() {
            return Err(Error::Dimension("simplex does not fit in one unit cube".into()));
        }
        Ok(Simplex { vertices })
    }

    pub fn vertex(p: Point) -> Self {
        Simplex { vertices: vec![p] }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Axes spanned by the simplex (the free axes of its carrier cube).
    pub fn carrier_axes(&self) -> Vec<usize> {
        let mask = self.carrier_mask();
        (0..self.vertices[0].len()).filter(|&a| mask >> a & 1 == 1).collect()
    }

    fn carrier_mask(&self) -> u32 {
        step_mask(&self.vertices[0], self.vertices.last().unwrap()).expect("validated chain")
    }

    /// Dimension of the smallest cubical face containing the simplex.
    pub fn carrier_dim(&self) -> usize {
        self.carrier_mask().count_ones() as usize
    }

    /// The smallest cubical face containing the simplex.
    pub fn carrier(&self) -> CubeFace {
        CubeFace::new(self.vertices[0].clone(), self.carrier_axes()).expect("valid carrier")
    }
}

impl Cell for Simplex {
    fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    fn boundary(&self) -> Vec<(Simplex, i64)> {
        if self.vertices.len() == 1 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|i| {
                let mut vs = self.vertices.clone();
                vs.remove(i);
                (Simplex { vertices: vs }, parity_sign(i))
            })
            .collect()
    }
}

/// All permutations of `items` in lexicographic order of positions, each
/// with its sign.
fn signed_permutations(items: &[usize]) -> Vec<(Vec<usize>, i64)> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if rest.is_empty() {
            out.push((cur.clone(), sign));
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            // moving element i to the front costs i transpositions
            rec(rest, cur, sign * parity_sign(i), out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut items.to_vec(), &mut Vec::new(), 1, &mut out);
    out
}

/// The `k!` top Kuhn simplices of a `k`-face, each signed by the parity of
/// its axis permutation relative to the sorted free list.
pub fn triangulate(face: &CubeFace) -> Vec<(Simplex, i64)> {
    signed_permutations(face.free())
        .into_iter()
        .map(|(perm, sign)| {
            let mut p = face.anchor().to_vec();
            let mut vertices = Vec::with_capacity(perm.len() + 1);
            vertices.push(p.clone());
            for a in perm {
                p[a] += 1;
                vertices.push(p.clone());
            }
            (Simplex { vertices }, sign)
        })
        .collect()
}

/// The subdivision map `L`: linear extension of [`triangulate`].
pub fn subdivide_l(c: &Chain<CubeFace>) -> Result<Chain<Simplex>> {
    let mut out = Chain::zero(c.dim());
    for (face, v) in c.iter() {
        for (s, sign) in triangulate(face) {
            out.add_term(s, checked_mul(v, sign)?)?;
        }
    }
    Ok(out)
}

/// The Kuhn triangulation of the `skeleton`-dimensional cubical skeleton of
/// a box: simplices with all vertices in the box and carrier dimension at
/// most `skeleton`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialRegion {
    pub region: Region,
    pub skeleton: usize,
}

impl SimplicialRegion {
    pub fn new(region: Region, skeleton: usize) -> Self {
        SimplicialRegion { region, skeleton }
    }

    fn fits(&self, s: &Simplex) -> bool {
        s.vertices[0].len() == self.region.ambient_dim()
            && s.carrier_dim() <= self.skeleton
            && self.region.contains_point(&s.vertices[0])
            && self.region.contains_point(s.vertices.last().unwrap())
    }

    /// All `k`-simplices, sorted.
    pub fn simplices(&self, k: usize) -> Vec<Simplex> {
        let free = self.region.free_axes();
        let mut out = Vec::new();
        for base in self.region.points() {
            let avail: u32 = free
                .iter()
                .filter(|&&a| base[a] < self.region.hi()[a])
                .fold(0, |m, &a| m | 1 << a);
            let mut chain = vec![base];
            extend_chain(&mut chain, k, avail, self.skeleton, &mut out);
        }
        out.sort();
        out
    }

    /// Every `(k+1)`-simplex of the ambient triangulation containing `s`.
    pub fn cofaces(&self, s: &Simplex) -> Result<Vec<Simplex>> {
        if !self.fits(s) {
            return Err(Error::Membership(format!("{s:?} is not in the ambient skeleton")));
        }
        Ok(self.cofaces_with_incidence(s).into_iter().map(|(t, _)| t).collect())
    }
}

fn add_mask(p: &[u32], mask: u32) -> Point {
    p.iter()
        .enumerate()
        .map(|(a, &x)| x + (mask >> a & 1))
        .collect()
}

fn sub_mask(p: &[u32], mask: u32) -> Point {
    p.iter()
        .enumerate()
        .map(|(a, &x)| x - (mask >> a & 1))
        .collect()
}

/// Nonempty submasks of `mask`.
fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut sub = mask;
    let mut done = mask == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = sub;
        sub = (sub - 1) & mask;
        if sub == 0 {
            done = true;
        }
        Some(cur)
    })
}

fn extend_chain(chain: &mut Vec<Point>, k: usize, avail: u32, budget: usize, out: &mut Vec<Simplex>) {
    if chain.len() == k + 1 {
        out.push(Simplex {
            vertices: chain.clone(),
        });
        return;
    }
    for step in submasks(avail) {
        let used = step.count_ones() as usize;
        if used > budget {
            continue;
        }
        let next = add_mask(chain.last().unwrap(), step);
        chain.push(next);
        extend_chain(chain, k, avail & !step, budget - used, out);
        chain.pop();
    }
}

impl CellComplex for SimplicialRegion {
    type Cell = Simplex;

    fn contains(&self, cell: &Simplex) -> bool {
        self.fits(cell)
    }

    fn cells(&self, dim: usize) -> Vec<Simplex> {
        self.simplices(dim)
    }

    fn cofaces_with_incidence(&self, s: &Simplex) -> Vec<(Simplex, i64)> {
        let vs = &s.vertices;
        let carrier = s.carrier_mask();
        let free: u32 = self.region.free_axes().iter().fold(0, |m, &a| m | 1 << a);
        let spare = self.skeleton.saturating_sub(carrier.count_ones() as usize);
        let mut out = Vec::new();
        let mut push = |pos: usize, w: Point| {
            let mut vertices = vs.clone();
            vertices.insert(pos, w);
            let t = Simplex { vertices };
            if self.fits(&t) {
                out.push((t, parity_sign(pos)));
            }
        };
        // new bottom vertex
        let down = free & !carrier;
        for mask in submasks(down) {
            if mask.count_ones() as usize > spare {
                continue;
            }
            let lo = self.region.lo();
            if (0..lo.len()).any(|a| mask >> a & 1 == 1 && vs[0][a] == lo[a]) {
                continue;
            }
            push(0, sub_mask(&vs[0], mask));
        }
        // new top vertex
        let last = vs.last().unwrap();
        for mask in submasks(down) {
            if mask.count_ones() as usize > spare {
                continue;
            }
            let hi = self.region.hi();
            if (0..hi.len()).any(|a| mask >> a & 1 == 1 && last[a] == hi[a]) {
                continue;
            }
            push(vs.len(), add_mask(last, mask));
        }
        // split an existing step
        for i in 0..vs.len() - 1 {
            let step = step_mask(&vs[i], &vs[i + 1]).expect("validated chain");
            for sub in submasks(step) {
                if sub != step {
                    push(i + 1, add_mask(&vs[i], sub));
                }
            }
        }
        out.sort();
        out
    }
}
