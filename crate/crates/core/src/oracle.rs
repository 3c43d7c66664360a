//! Brute-force ground truth on small grids: exhaustive enumeration of valid
//! colorings up to relabeling, seeded random valid colorings, and
//! monochromatic component sizes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{neighbors, validate, Color, Coloring, Mode};
use crate::complex::{GridSpec, SimplicialRegion};
use crate::error::{Error, Result};

/// Largest grid the exhaustive search accepts.
pub const EXHAUSTIVE_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    Exhaustive,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub spec: GridSpec,
    pub mode: OracleMode,
    /// Minimum over the colorings seen of the maximum color usage.
    pub value: usize,
    /// A coloring attaining `value`, in file order.
    pub extremal: Vec<Color>,
    pub samples: usize,
    /// Largest monochromatic component size -> number of colorings.
    pub component_stats: BTreeMap<usize, usize>,
}

impl OracleReport {
    pub const CSV_HEADER: &'static str = "d,n,m,mode,value,samples";

    pub fn csv_row(&self) -> String {
        let mode = match self.mode {
            OracleMode::Exhaustive => "exhaustive",
            OracleMode::Random => "random",
        };
        format!(
            "{},{},{},{},{},{}",
            self.spec.d, self.spec.n, self.spec.m, mode, self.value, self.samples
        )
    }
}

/// Vertex indices of every `(m+1)`-simplex of `T`, bucketed by the largest
/// index so a partial coloring can be checked as soon as a simplex is full.
fn constraints_by_last(spec: &GridSpec) -> Vec<Vec<Vec<usize>>> {
    let mut buckets = vec![Vec::new(); spec.vertex_count()];
    let t = SimplicialRegion::new(spec.cube(), spec.m + 1);
    for s in t.simplices(spec.m + 1) {
        let idx: Vec<usize> = s.vertices().iter().map(|p| spec.vertex_index(p)).collect();
        let last = *idx.iter().max().expect("nonempty simplex");
        buckets[last].push(idx);
    }
    buckets
}

fn fits(constraints: &[Vec<usize>], colors: &[Color], limit: usize) -> bool {
    constraints.iter().all(|idx| {
        let mut cs: Vec<Color> = idx.iter().map(|&i| colors[i]).collect();
        cs.sort_unstable();
        cs.dedup();
        cs.len() <= limit
    })
}

fn guard(spec: &GridSpec) -> Result<()> {
    spec.check()?;
    let vertices = spec.vertex_count();
    if vertices > EXHAUSTIVE_LIMIT {
        return Err(Error::SizeGuard {
            vertices,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(())
}

struct Search<'a> {
    buckets: &'a [Vec<Vec<usize>>],
    limit: usize,
    max_palette: Color,
}

impl Search<'_> {
    /// Restricted growth strings: vertex `i` takes a used color or the next
    /// fresh one.
    fn extend(&self, colors: &mut Vec<Color>, used: Color, out: &mut Vec<Vec<Color>>) {
        let i = colors.len();
        if i == self.buckets.len() {
            out.push(colors.clone());
            return;
        }
        let top = if used < self.max_palette { used + 1 } else { used };
        for c in 0..top {
            colors.push(c);
            if fits(&self.buckets[i], colors, self.limit) {
                self.extend(colors, used.max(c + 1), out);
            }
            colors.pop();
        }
    }
}

/// Every valid simplicial coloring with at most `max_palette` colors, once
/// per relabeling class, in canonical labels and lexicographic order of the
/// color vectors.
pub fn enumerate_valid(spec: &GridSpec, max_palette: usize) -> Result<Vec<Coloring>> {
    guard(spec)?;
    let buckets = constraints_by_last(spec);
    let search = Search {
        buckets: &buckets,
        limit: spec.m + 1,
        max_palette: max_palette.clamp(1, spec.vertex_count()) as Color,
    };
    // vertex 0 is always color 0; split the tree on vertex 1
    let first = vec![0];
    let branches: Vec<Color> = if buckets.len() > 1 {
        (0..search.max_palette.min(2)).collect()
    } else {
        Vec::new()
    };
    let mut all: Vec<Vec<Color>> = if branches.is_empty() {
        vec![first]
    } else {
        branches
            .into_par_iter()
            .map(|c| {
                let mut colors = vec![0, c];
                let mut out = Vec::new();
                if fits(&buckets[1], &colors, search.limit) {
                    search.extend(&mut colors, c + 1, &mut out);
                }
                out
            })
            .flatten()
            .collect()
    };
    all.sort();
    all.into_iter().map(|cs| Coloring::new(*spec, cs)).collect()
}

/// Exact minimum over valid colorings of the largest color class, with the
/// first minimizer in enumeration order.
pub fn min_max_usage(spec: &GridSpec) -> Result<(usize, Coloring)> {
    let all = enumerate_valid(spec, spec.vertex_count())?;
    let best = all
        .into_iter()
        .min_by_key(|c| c.max_usage())
        .expect("the constant coloring is valid");
    Ok((best.max_usage(), best))
}

/// Greedy seeded coloring in file order: each vertex takes a neighbor's
/// color or a fresh one, whichever choices keep every completed simplex
/// within `m + 1` colors. A dead end restarts with the next seed, and after
/// a few restarts the constant coloring is returned.
pub fn random_valid(spec: &GridSpec, seed: u64) -> Coloring {
    const ATTEMPTS: u64 = 16;
    let buckets = constraints_by_last(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        if let Some(colors) = greedy(spec, &buckets, &mut rng) {
            return Coloring::new(*spec, colors).expect("length matches");
        }
    }
    Coloring::constant(*spec, 0)
}

fn greedy(spec: &GridSpec, buckets: &[Vec<Vec<usize>>], rng: &mut ChaCha8Rng) -> Option<Vec<Color>> {
    let limit = spec.m + 1;
    let mut colors: Vec<Color> = Vec::with_capacity(buckets.len());
    let mut fresh: Color = 0;
    for (i, bucket) in buckets.iter().enumerate() {
        let p = spec.vertex_at(i);
        let mut options: Vec<Color> = neighbors(spec, &p, Mode::Simplicial)
            .iter()
            .map(|q| spec.vertex_index(q))
            .filter(|&j| j < i)
            .map(|j| colors[j])
            .collect();
        options.push(fresh);
        options.sort_unstable();
        options.dedup();
        colors.push(0);
        let legal: Vec<Color> = options
            .into_iter()
            .filter(|&c| {
                colors[i] = c;
                fits(bucket, &colors, limit)
            })
            .collect();
        if legal.is_empty() {
            return None;
        }
        let c = legal[rng.random_range(0..legal.len())];
        colors[i] = c;
        if c == fresh {
            fresh += 1;
        }
    }
    Some(colors)
}

/// Stripes across axis 1: vertex `p` gets color `p_1`. Every simplex of `T`
/// spans at most two consecutive layers, so this is valid whenever `m >= 1`.
pub fn striped(spec: &GridSpec) -> Coloring {
    Coloring::from_fn(*spec, |p| p[0])
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub largest: usize,
    pub components: usize,
}

/// Sizes of the monochromatic components under the given adjacency.
pub fn component_stats(coloring: &Coloring, adjacency: Mode) -> Result<ComponentStats> {
    validate(coloring, adjacency).map_err(|v| Error::InvalidColoring(Box::new(v)))?;
    let spec = coloring.spec();
    let colors = coloring.colors();
    let mut uf = UnionFind::new(colors.len());
    for (i, p) in spec.vertices().enumerate() {
        for q in neighbors(spec, &p, adjacency) {
            let j = spec.vertex_index(&q);
            if colors[i] == colors[j] {
                uf.union(i, j);
            }
        }
    }
    let mut largest = 0;
    let mut components = 0;
    for i in 0..colors.len() {
        if uf.find(i) == i {
            components += 1;
            largest = largest.max(uf.size[i]);
        }
    }
    Ok(ComponentStats { largest, components })
}

/// Exhaustive study of one small grid.
pub fn exhaustive_report(spec: &GridSpec, adjacency: Mode) -> Result<OracleReport> {
    let all = enumerate_valid(spec, spec.vertex_count())?;
    report(spec, OracleMode::Exhaustive, &all, adjacency)
}

/// Study of `samples` seeded random colorings (seeds `seed, seed + 1, ...`).
pub fn random_report(spec: &GridSpec, samples: usize, seed: u64, adjacency: Mode) -> Result<OracleReport> {
    spec.check()?;
    let all: Vec<Coloring> = (0..samples as u64)
        .into_par_iter()
        .map(|i| random_valid(spec, seed.wrapping_add(i)))
        .collect();
    report(spec, OracleMode::Random, &all, adjacency)
}

fn report(spec: &GridSpec, mode: OracleMode, all: &[Coloring], adjacency: Mode) -> Result<OracleReport> {
    let extremal = all
        .iter()
        .min_by_key(|c| c.max_usage())
        .ok_or_else(|| Error::InvalidSpec("no colorings to report on".into()))?;
    let mut largest_sizes = BTreeMap::new();
    for c in all {
        // a simplicially valid coloring need not be cubically valid
        let Ok(stats) = component_stats(c, adjacency) else {
            continue;
        };
        let largest = stats.largest;
        *largest_sizes.entry(largest).or_insert(0) += 1;
    }
    Ok(OracleReport {
        spec: *spec,
        mode,
        value: extremal.max_usage(),
        extremal: extremal.colors().to_vec(),
        samples: all.len(),
        component_stats: largest_sizes,
    })
}
