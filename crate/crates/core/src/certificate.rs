//! Endgame on the ground level: read off `x_c = chi_c(A(v))`, pick a color
//! with `x_c != 0`, and collect one witness of that color from every
//! `A(v)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::algebra::Chain;
use crate::balancing::BalanceState;
use crate::coloring::{Color, Coloring};
use crate::complex::{CubeFace, GridSpec, Point, Simplex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub color: Color,
    /// `x_c` for every color of the palette.
    pub x: BTreeMap<Color, i64>,
    /// Distinct vertices colored `color`, sorted.
    pub witnesses: Vec<Point>,
    /// Support of `A(v)` for each ground vertex `v`, when kept for audit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_vertex_support: Option<BTreeMap<Point, Vec<Point>>>,
    /// Upper bound on how many ground vertices can share one witness.
    pub incidence_bound: u64,
}

/// The ground vertices of `F_0` in breadth-first order from the origin.
fn ground_vertices_bfs(state: &BalanceState) -> Vec<Point> {
    let region = state.flag().face(0).clone();
    let axes = region.free_axes();
    let origin = region.lo().to_vec();
    let mut seen = BTreeSet::from([origin.clone()]);
    let mut queue = VecDeque::from([origin]);
    let mut out = Vec::new();
    while let Some(p) = queue.pop_front() {
        for &a in &axes {
            for q in [
                p[a].checked_sub(1).map(|x| with(&p, a, x)),
                Some(with(&p, a, p[a] + 1)),
            ]
            .into_iter()
            .flatten()
            {
                if region.contains_point(&q) && seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        out.push(p);
    }
    out
}

fn with(p: &[u32], axis: usize, x: u32) -> Point {
    let mut q = p.to_vec();
    q[axis] = x;
    q
}

fn color_sums(a: &Chain<Simplex>, coloring: &Coloring) -> BTreeMap<Color, i64> {
    let mut x: BTreeMap<Color, i64> = coloring.palette().into_iter().map(|c| (c, 0)).collect();
    for (s, v) in a.iter() {
        *x.get_mut(&coloring.color_at(&s.vertices()[0])).expect("palette color") += v;
    }
    x
}

/// `1 + sum of usage over the 1-simplices at w`, maximized over the
/// vertices `w` of `color`.
fn incidence_bound(state: &BalanceState, color: Color) -> u64 {
    let coloring = state.coloring();
    let mut at: BTreeMap<&Point, u64> = BTreeMap::new();
    for (s, &u) in state.usage() {
        for p in s.vertices() {
            *at.entry(p).or_insert(0) += u;
        }
    }
    coloring
        .spec()
        .vertices()
        .filter(|p| coloring.color_at(p) == color)
        .map(|p| 1 + at.get(&p).copied().unwrap_or(0))
        .max()
        .unwrap_or(1)
}

/// Extracts the certificate from a balanced ground-level state.
pub fn endgame(state: &BalanceState) -> Result<Certificate> {
    if state.level() != 0 {
        return Err(Error::Dimension(format!(
            "endgame needs a level-0 state, got level {}",
            state.level()
        )));
    }
    if !state.verify_balanced() {
        return Err(Error::Invariant("ground level is not balanced".into()));
    }
    let coloring = state.coloring();
    let mut supports = BTreeMap::new();
    let mut x: Option<BTreeMap<Color, i64>> = None;
    for v in ground_vertices_bfs(state) {
        let a = state.a_chain(&CubeFace::vertex(v.clone()))?;
        if a.coefficient_sum()? != 1 {
            return Err(Error::Invariant(format!("coefficients of A({v:?}) do not sum to 1")));
        }
        let xv = color_sums(&a, coloring);
        match &x {
            None => x = Some(xv),
            Some(x0) if *x0 != xv => {
                return Err(Error::Invariant(format!(
                    "x depends on the ground vertex: {x0:?} vs {xv:?} at {v:?}"
                )))
            }
            Some(_) => {}
        }
        supports.insert(v, a);
    }
    let x = x.expect("F_0 has at least one vertex");
    let Some((&color, _)) = x.iter().find(|(_, &v)| v != 0) else {
        return Err(Error::Invariant("every x_c vanishes".into()));
    };
    let mut witnesses = BTreeSet::new();
    for a in supports.values() {
        let w = a
            .cells()
            .map(|s| &s.vertices()[0])
            .find(|p| coloring.color_at(p) == color)
            .ok_or_else(|| Error::Invariant("support misses the chosen color".into()))?;
        witnesses.insert(w.clone());
    }
    let per_vertex_support = supports
        .into_iter()
        .map(|(v, a)| (v, a.cells().map(|s| s.vertices()[0].clone()).collect()))
        .collect();
    Ok(Certificate {
        color,
        x,
        witnesses: witnesses.into_iter().collect(),
        per_vertex_support: Some(per_vertex_support),
        incidence_bound: incidence_bound(state, color),
    })
}

/// Re-derives everything the certificate claims from the coloring and the
/// ground-level `B`.
pub fn verify_certificate(spec: &GridSpec, coloring: &Coloring, state: &BalanceState, cert: &Certificate) -> bool {
    check_certificate(spec, coloring, state, cert).is_ok()
}

fn check_certificate(spec: &GridSpec, coloring: &Coloring, state: &BalanceState, cert: &Certificate) -> Result<()> {
    let fail = |msg: &str| Err(Error::Invariant(msg.to_string()));
    if state.spec() != spec || state.coloring() != coloring || coloring.spec() != spec {
        return fail("certificate state does not match the instance");
    }
    if state.level() != 0 {
        return fail("state is not at the ground level");
    }
    let nonzero = |m: &BTreeMap<Color, i64>| -> BTreeMap<Color, i64> {
        m.iter().filter(|(_, &v)| v != 0).map(|(&c, &v)| (c, v)).collect()
    };
    let claimed = nonzero(&cert.x);
    if claimed.values().sum::<i64>() != 1 {
        return fail("x does not sum to 1");
    }
    if cert.x.get(&cert.color).copied().unwrap_or(0) == 0 {
        return fail("x vanishes on the chosen color");
    }
    let witnesses: BTreeSet<&Point> = cert.witnesses.iter().collect();
    if witnesses.len() != cert.witnesses.len() {
        return fail("repeated witness");
    }
    for w in &witnesses {
        if !spec.cube().contains_point(w) || coloring.color_at(w) != cert.color {
            return fail("witness outside the cube or of the wrong color");
        }
    }
    let ground = state.flag().face(0);
    for v in ground.points() {
        let a = state.a_chain(&CubeFace::vertex(v.clone()))?;
        if nonzero(&color_sums(&a, coloring)) != claimed {
            return fail("recomputed x differs");
        }
        if !a.cells().any(|s| witnesses.contains(&s.vertices()[0])) {
            return fail("a ground vertex has no witness in its support");
        }
    }
    if incidence_bound(state, cert.color) != cert.incidence_bound {
        return fail("incidence bound differs");
    }
    let ground_count = ground.points().len() as u64;
    if (cert.witnesses.len() as u64).saturating_mul(cert.incidence_bound) < ground_count {
        return fail("witnesses times incidence bound below the ground vertex count");
    }
    if coloring.usage().get(&cert.color).copied().unwrap_or(0) < cert.witnesses.len() {
        return fail("color used fewer times than there are witnesses");
    }
    Ok(())
}

/// Number of distinct witnesses: a constructive lower bound on how often
/// the chosen color is used.
pub fn lower_bound(cert: &Certificate) -> usize {
    cert.witnesses.len()
}
