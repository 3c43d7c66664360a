//! Vertex colorings, the face constraint in its simplicial and cubical
//! forms, the color cochains `chi_C`, and splitting colors into
//! monochromatic components.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::algebra::{parity_sign, Cochain};
use crate::complex::{triangulate, Coord, GridSpec, Point, Simplex, SimplicialRegion};
use crate::error::{Error, Result};

pub type Color = u32;

/// Which faces carry the color constraint (and which vertices count as
/// adjacent when splitting into components).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `(m+1)`-simplices of the Kuhn triangulation.
    #[default]
    Simplicial,
    /// `(m+1)`-dimensional cubical faces.
    Cubical,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Simplicial => "simplicial",
            Mode::Cubical => "cubical",
        })
    }
}

/// A color for every vertex of the grid, stored in file order (axis 1
/// fastest).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    spec: GridSpec,
    colors: Vec<Color>,
}

impl Coloring {
    pub fn new(spec: GridSpec, colors: Vec<Color>) -> Result<Self> {
        spec.check()?;
        if colors.len() != spec.vertex_count() {
            return Err(Error::InvalidSpec(format!(
                "expected {} colors, got {}",
                spec.vertex_count(),
                colors.len()
            )));
        }
        Ok(Coloring { spec, colors })
    }

    pub fn constant(spec: GridSpec, color: Color) -> Self {
        Coloring {
            spec,
            colors: vec![color; spec.vertex_count()],
        }
    }

    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(&[Coord]) -> Color) -> Self {
        let colors = spec.vertices().map(|p| f(&p)).collect();
        Coloring { spec, colors }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color_at(&self, p: &[Coord]) -> Color {
        self.colors[self.spec.vertex_index(p)]
    }

    /// Sorted distinct colors.
    pub fn palette(&self) -> Vec<Color> {
        let mut p = self.colors.clone();
        p.sort_unstable();
        p.dedup();
        p
    }

    pub fn usage(&self) -> BTreeMap<Color, usize> {
        let mut out = BTreeMap::new();
        for &c in &self.colors {
            *out.entry(c).or_insert(0) += 1;
        }
        out
    }

    pub fn max_usage(&self) -> usize {
        self.usage().into_values().max().unwrap_or(0)
    }

    /// Relabels colors `0, 1, 2, ...` in order of first appearance.
    pub fn canonical(&self) -> Coloring {
        Coloring {
            spec: self.spec,
            colors: canonical_labels(&self.colors),
        }
    }
}

pub(crate) fn canonical_labels(colors: &[Color]) -> Vec<Color> {
    let mut map = HashMap::new();
    colors
        .iter()
        .map(|c| {
            let next = map.len() as Color;
            *map.entry(*c).or_insert(next)
        })
        .collect()
}

/// A face carrying more than `m + 1` colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub face: ViolatingFace,
    pub colors: Vec<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolatingFace {
    Simplex(Vec<Point>),
    Cube { anchor: Point, free: Vec<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.face {
            ViolatingFace::Simplex(vs) => write!(f, "simplex {vs:?}")?,
            ViolatingFace::Cube { anchor, free } => {
                let free: Vec<usize> = free.iter().map(|a| a + 1).collect();
                write!(f, "cube face anchor {anchor:?} free {free:?}")?
            }
        }
        write!(f, " carries colors {:?}", self.colors)
    }
}

impl std::error::Error for Violation {}

fn distinct_colors(coloring: &Coloring, points: &[Point]) -> Vec<Color> {
    let mut cs: Vec<Color> = points.iter().map(|p| coloring.color_at(p)).collect();
    cs.sort_unstable();
    cs.dedup();
    cs
}

/// Scans the `(m+1)`-faces in canonical order and reports the first one with
/// `m + 2` or more colors.
pub fn validate(coloring: &Coloring, mode: Mode) -> Result<(), Violation> {
    let spec = coloring.spec();
    let limit = spec.m + 1;
    let faces = spec.cube().faces(spec.m + 1).expect("m + 1 <= d");
    for face in faces {
        match mode {
            Mode::Cubical => {
                let cs = distinct_colors(coloring, &face.vertices());
                if cs.len() > limit {
                    return Err(Violation {
                        face: ViolatingFace::Cube {
                            anchor: face.anchor().to_vec(),
                            free: face.free().to_vec(),
                        },
                        colors: cs,
                    });
                }
            }
            Mode::Simplicial => {
                // cheap pass over the whole face first
                if distinct_colors(coloring, &face.vertices()).len() <= limit {
                    continue;
                }
                for (s, _) in triangulate(&face) {
                    let cs = distinct_colors(coloring, s.vertices());
                    if cs.len() > limit {
                        return Err(Violation {
                            face: ViolatingFace::Simplex(s.vertices().to_vec()),
                            colors: cs,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// An ordered tuple of pairwise distinct colors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColorTuple(Vec<Color>);

impl ColorTuple {
    pub fn new(colors: Vec<Color>) -> Result<Self> {
        let mut sorted = colors.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::ColorTuple(format!("repeated color in {colors:?}")));
        }
        Ok(ColorTuple(colors))
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The sorted representative and the sign of the permutation taking it
    /// to this tuple.
    pub fn canonical(&self) -> (ColorTuple, i64) {
        let sign = permutation_sign(&self.0);
        let mut sorted = self.0.clone();
        sorted.sort_unstable();
        (ColorTuple(sorted), sign)
    }

    /// `C c`: this tuple with `c` appended, if `c` is new.
    pub fn extended(&self, c: Color) -> Option<ColorTuple> {
        if self.0.contains(&c) {
            return None;
        }
        let mut v = self.0.clone();
        v.push(c);
        Some(ColorTuple(v))
    }

    /// `c C`: this tuple with `c` in front, if `c` is new. With the boundary
    /// `sum (-1)^i` (drop vertex `i`), `delta chi(C) = sum_c chi(c C)`; the
    /// appended form picks up the sign `(-1)^|C|`.
    pub fn prepended(&self, c: Color) -> Option<ColorTuple> {
        if self.0.contains(&c) {
            return None;
        }
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(c);
        v.extend_from_slice(&self.0);
        Some(ColorTuple(v))
    }
}

/// Parity of the number of inversions, as `+1` / `-1`.
pub(crate) fn permutation_sign<T: Ord>(xs: &[T]) -> i64 {
    let mut inv = 0usize;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i] > xs[j] {
                inv += 1;
            }
        }
    }
    parity_sign(inv)
}

/// `chi_C` on the canonically oriented simplex: `+1` / `-1` when the vertex
/// colors read in order are an even / odd arrangement of `C`, `0` otherwise.
pub fn chi_value(tuple: &ColorTuple, s: &Simplex, coloring: &Coloring) -> Result<i64> {
    if tuple.len() != s.dim() + 1 {
        return Err(Error::ColorTuple(format!(
            "{} colors against a {}-simplex",
            tuple.len(),
            s.dim()
        )));
    }
    let mut positions = Vec::with_capacity(tuple.len());
    for p in s.vertices() {
        let c = coloring.color_at(p);
        match tuple.0.iter().position(|&x| x == c) {
            Some(i) if !positions.contains(&i) => positions.push(i),
            _ => return Ok(0),
        }
    }
    Ok(permutation_sign(&positions))
}

/// If the simplex is colored with pairwise distinct colors, returns the
/// sorted color set and `chi` of that sorted tuple on the simplex.
pub fn rainbow_signature(s: &Simplex, coloring: &Coloring) -> Option<(Vec<Color>, i64)> {
    let cs: Vec<Color> = s.vertices().iter().map(|p| coloring.color_at(p)).collect();
    let mut sorted = cs.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sorted, permutation_sign(&cs)))
}

/// The cochain `chi_C` on the `(|C|-1)`-simplices of `ambient`.
pub fn chi_cochain(
    tuple: &ColorTuple,
    ambient: &SimplicialRegion,
    coloring: &Coloring,
) -> Result<Cochain<Simplex>> {
    let k = tuple
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::ColorTuple("empty color tuple".into()))?;
    let mut out = Cochain::zero(k);
    for s in ambient.simplices(k) {
        let v = chi_value(tuple, &s, coloring)?;
        out.add_term(s, v)?;
    }
    Ok(out)
}

/// Lazily computed `chi` cochains, keyed by sorted color set. A permuted
/// tuple is served as the signed copy of its sorted representative.
pub struct ChiCache {
    ambient: SimplicialRegion,
    coloring: Arc<Coloring>,
    cache: RwLock<HashMap<ColorTuple, Arc<Cochain<Simplex>>>>,
}

impl ChiCache {
    pub fn new(ambient: SimplicialRegion, coloring: Arc<Coloring>) -> Self {
        ChiCache {
            ambient,
            coloring,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn get(&self, tuple: &ColorTuple) -> Result<Cochain<Simplex>> {
        let (key, sign) = tuple.canonical();
        let hit = self.cache.read().expect("chi cache poisoned").get(&key).cloned();
        let base = match hit {
            Some(c) => c,
            None => {
                let c = Arc::new(chi_cochain(&key, &self.ambient, &self.coloring)?);
                self.cache
                    .write()
                    .expect("chi cache poisoned")
                    .entry(key)
                    .or_insert(c)
                    .clone()
            }
        };
        base.scaled(sign)
    }

    pub fn len(&self) -> usize {
        self.cache.read().expect("chi cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Lattice neighbors of `p` that share an `(m+1)`-face with it.
pub fn neighbors(spec: &GridSpec, p: &[Coord], adjacency: Mode) -> Vec<Point> {
    let d = spec.d;
    let limit = spec.m + 1;
    let mut out = Vec::new();
    match adjacency {
        Mode::Simplicial => {
            for mask in 1u32..(1 << d) {
                if mask.count_ones() as usize > limit {
                    continue;
                }
                let up = (0..d).all(|a| mask >> a & 1 == 0 || p[a] < spec.n);
                if up {
                    out.push((0..d).map(|a| p[a] + (mask >> a & 1)).collect());
                }
                let down = (0..d).all(|a| mask >> a & 1 == 0 || p[a] > 0);
                if down {
                    out.push((0..d).map(|a| p[a] - (mask >> a & 1)).collect());
                }
            }
        }
        Mode::Cubical => {
            let total = 3usize.pow(d as u32);
            for code in 0..total {
                let mut c = code;
                let mut q = p.to_vec();
                let mut changed = 0;
                let mut ok = true;
                for x in q.iter_mut() {
                    match c % 3 {
                        1 if *x < spec.n => {
                            *x += 1;
                            changed += 1;
                        }
                        2 if *x > 0 => {
                            *x -= 1;
                            changed += 1;
                        }
                        0 => {}
                        _ => ok = false,
                    }
                    c /= 3;
                }
                if ok && changed > 0 && changed <= limit {
                    out.push(q);
                }
            }
        }
    }
    out.sort();
    out
}

/// Gives every monochromatic connected component its own color. Components
/// are labeled `0, 1, ...` in order of their first vertex in file order.
pub fn split_components(coloring: &Coloring, adjacency: Mode) -> Result<Coloring> {
    validate(coloring, adjacency).map_err(|v| Error::InvalidColoring(Box::new(v)))?;
    let spec = *coloring.spec();
    let n_vertices = spec.vertex_count();
    let mut label: Vec<Option<Color>> = vec![None; n_vertices];
    let mut next = 0;
    for start in 0..n_vertices {
        if label[start].is_some() {
            continue;
        }
        let color = coloring.colors[start];
        label[start] = Some(next);
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let p = spec.vertex_at(i);
            for q in neighbors(&spec, &p, adjacency) {
                let j = spec.vertex_index(&q);
                if label[j].is_none() && coloring.colors[j] == color {
                    label[j] = Some(next);
                    queue.push_back(j);
                }
            }
        }
        next += 1;
    }
    Coloring::new(spec, label.into_iter().map(|l| l.expect("every vertex labeled")).collect())
}
