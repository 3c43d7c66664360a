#![allow(dead_code)]

use cubecolor::complex::Simplex;
use cubecolor::{BalanceState, Cell, Chain, Color, Coloring, GridSpec};

/// `chi_C` straight from the definition: the vertex colors, read in order,
/// must be a rearrangement of `C`; the sign counts transpositions by
/// selection sort.
pub fn naive_chi(tuple: &[Color], s: &Simplex, coloring: &Coloring) -> i64 {
    let mut pos: Vec<usize> = Vec::new();
    for p in s.vertices() {
        match tuple.iter().position(|&c| c == coloring.color_at(p)) {
            Some(i) if !pos.contains(&i) => pos.push(i),
            _ => return 0,
        }
    }
    if pos.len() != tuple.len() {
        return 0;
    }
    let mut sign = 1;
    for i in 0..pos.len() {
        let j = (i..pos.len()).min_by_key(|&j| pos[j]).unwrap();
        if j != i {
            pos.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

pub fn naive_chi_of_chain(tuple: &[Color], chain: &Chain<Simplex>, coloring: &Coloring) -> i64 {
    chain.iter().map(|(s, v)| v * naive_chi(tuple, s, coloring)).sum()
}

/// Every increasing `k`-subset of `items`.
pub fn subsets(items: &[Color], k: usize) -> Vec<Vec<Color>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Balance at the state's level, checked tuple by tuple with `naive_chi`.
pub fn naive_balanced(state: &BalanceState) -> bool {
    let k = state.level();
    let region = state.region();
    if region.dim() < k + 1 {
        return true;
    }
    let palette = state.coloring().palette();
    let tuples = subsets(&palette, k + 1);
    for tau in region.faces(k + 1).unwrap() {
        let mut chain = Chain::zero(k);
        for (sigma, inc) in tau.boundary() {
            chain.add_scaled(&state.a_chain(&sigma).unwrap(), inc).unwrap();
        }
        for t in &tuples {
            if naive_chi_of_chain(t, &chain, state.coloring()) != 0 {
                return false;
            }
        }
    }
    true
}

/// All grid points of `spec` in file order, built by counting in base
/// `n + 1`.
pub fn points(spec: &GridSpec) -> Vec<Vec<u32>> {
    let side = spec.n as usize + 1;
    (0..spec.vertex_count())
        .map(|mut i| {
            (0..spec.d)
                .map(|_| {
                    let x = (i % side) as u32;
                    i /= side;
                    x
                })
                .collect()
        })
        .collect()
}
