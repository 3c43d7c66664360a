//! The balancing descent.
//!
//! A state at level `k` carries, for every `k`-face `sigma` of the big face
//! `F_k`, a simplicial `(k+1)`-chain `B(sigma)` such that
//! `chi_C(A(d tau)) = 0` for every `(k+1)`-face `tau` of `F_k` and every
//! tuple `C` of `k + 1` colors, where `A(sigma) = L(sigma) + d B(sigma)`.
//! At level `m` the empty assignment already balances the cube. Each
//! [`BalanceState::descend`] step builds the cocycles `xi_D`, fills them on a
//! light section, pushes the slab between the section and `F_{k-1}` down by
//! direct image, and realizes the resulting primitive with `D`-colored
//! simplices.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{checked_mul, direct_image, Cell, CellComplex, Chain, Cochain};
use crate::coloring::{chi_value, rainbow_signature, validate, Color, ColorTuple, Coloring, Mode};
use crate::complex::{subdivide_l, BigFaceFlag, Coord, CubeFace, GridSpec, Region, Simplex, SimplicialRegion};
use crate::error::{Error, Result};
use crate::filling::{fill, section_norms, SweepRecord};

/// `chi_D(chain)` for every color set `D` at once, keyed by the sorted set.
/// Only nonzero entries are kept; a chain is annihilated by every `chi_D`
/// exactly when its profile is empty.
pub fn color_profile(chain: &Chain<Simplex>, coloring: &Coloring) -> Result<BTreeMap<Vec<Color>, i64>> {
    let mut out: BTreeMap<Vec<Color>, i64> = BTreeMap::new();
    for (s, v) in chain.iter() {
        if let Some((set, sign)) = rainbow_signature(s, coloring) {
            let e = out.entry(set).or_insert(0);
            *e = e.checked_add(checked_mul(v, sign)?).ok_or(Error::Overflow)?;
        }
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

/// Everything computed for one color set `D` while building the primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaBuild {
    pub colors: ColorTuple,
    /// `|xi_D|`.
    pub xi_norm: u64,
    /// Level of the section `Q'` along the pinned axis.
    pub section_level: Coord,
    /// Constant certified by the filling solver on `Q'`.
    pub fill_constant: u64,
    pub sweeps: Vec<SweepRecord>,
    /// Filled cochain on `Q'`, moved onto `F_{k-1}`.
    pub beta: Cochain<CubeFace>,
    /// `xi_D` on the faces crossing the slab between `F_{k-1}` and `Q'`.
    pub xi_prime: Cochain<CubeFace>,
    pub eta: Cochain<CubeFace>,
}

impl EtaBuild {
    /// `(C_F + 1) |xi_D|`.
    pub fn norm_bound(&self) -> u64 {
        (self.fill_constant + 1).saturating_mul(self.xi_norm)
    }
}

/// Partial assignment `B_D` produced for one color set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Realization {
    pub b: BTreeMap<CubeFace, Chain<Simplex>>,
    pub usage: BTreeMap<Simplex, u64>,
    pub pool_size: usize,
}

impl Realization {
    pub fn max_usage(&self) -> u64 {
        self.usage.values().copied().max().unwrap_or(0)
    }
}

/// Per-`D` entry of the descent trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorSetTrace {
    pub colors: Vec<Color>,
    #[serde(rename = "M")]
    pub xi_norm: u64,
    pub section_level: Coord,
    pub sweeps: Vec<SweepRecord>,
    pub eta_norm: u64,
    pub eta_bound: u64,
    pub pool_size: usize,
    pub max_usage: u64,
}

/// One descent step `k -> k - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelTrace {
    pub from_level: usize,
    pub color_sets: Vec<ColorSetTrace>,
    /// Largest multiplicity of a single simplex across the new `B`.
    pub max_multiplicity: u64,
    /// Largest number of `(k+1)`-simplices of the triangulation containing a
    /// `k`-simplex used in the new `B`.
    pub max_cofaces: usize,
}

#[derive(Clone, Debug)]
pub struct BalanceState {
    spec: GridSpec,
    coloring: Arc<Coloring>,
    flag: BigFaceFlag,
    level: usize,
    b: BTreeMap<CubeFace, Chain<Simplex>>,
    usage: BTreeMap<Simplex, u64>,
    trace: Vec<LevelTrace>,
}

/// Sign `s` with `chi_D(B_D(sigma)) = s * eta(sigma)`, found once by running
/// both conventions on a reference instance.
pub fn realization_sign() -> i64 {
    static SIGN: OnceLock<i64> = OnceLock::new();
    *SIGN.get_or_init(|| {
        let state = BalanceState::init(reference_coloring(), Mode::Simplicial)
            .expect("reference coloring is valid");
        let ok: Vec<i64> = [1, -1]
            .into_iter()
            .filter(|&s| state.descend_with_sign(s).is_ok())
            .collect();
        assert_eq!(ok.len(), 1, "exactly one realization sign must balance the reference instance");
        ok[0]
    })
}

/// Unit square with columns colored 0 and 1: the bottom edge is rainbow, so
/// `B` on its endpoints must cancel it and only one sign does.
pub fn reference_coloring() -> Coloring {
    let spec = GridSpec::new(2, 1, 1).expect("valid spec");
    Coloring::new(spec, vec![0, 1, 0, 1]).expect("four vertices")
}

impl BalanceState {
    /// Level-`m` state with `B = 0`. Fails if the coloring violates the face
    /// constraint in `mode`.
    pub fn init(coloring: Coloring, mode: Mode) -> Result<Self> {
        validate(&coloring, mode).map_err(|v| Error::InvalidColoring(Box::new(v)))?;
        if mode == Mode::Cubical {
            // every Kuhn simplex sits in a cubical face of the same dimension
            validate(&coloring, Mode::Simplicial).map_err(|v| Error::InvalidColoring(Box::new(v)))?;
        }
        let spec = *coloring.spec();
        let state = BalanceState {
            spec,
            flag: spec.flag(),
            level: spec.m,
            coloring: Arc::new(coloring),
            b: BTreeMap::new(),
            usage: BTreeMap::new(),
            trace: Vec::new(),
        };
        if !state.verify_balanced() {
            return Err(Error::Invariant("level-m skeleton is not balanced".into()));
        }
        Ok(state)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn flag(&self) -> &BigFaceFlag {
        &self.flag
    }

    /// The big face `F_k` of the current level.
    pub fn region(&self) -> &Region {
        self.flag.face(self.level)
    }

    /// `B` on the `k`-faces of the current level.
    pub fn b(&self) -> &BTreeMap<CubeFace, Chain<Simplex>> {
        &self.b
    }

    /// How often each simplex appears (with multiplicity) across `B`.
    pub fn usage(&self) -> &BTreeMap<Simplex, u64> {
        &self.usage
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.usage.values().copied().max().unwrap_or(0)
    }

    pub fn trace(&self) -> &[LevelTrace] {
        &self.trace
    }

    /// The triangulated `(m+1)`-skeleton of the cube.
    pub fn triangulation(&self) -> SimplicialRegion {
        SimplicialRegion::new(self.spec.cube(), self.spec.m + 1)
    }

    /// Replaces `B(sigma)`; meant for tests that corrupt a state.
    pub fn set_b(&mut self, sigma: CubeFace, chain: Chain<Simplex>) {
        if chain.is_zero() {
            self.b.remove(&sigma);
        } else {
            self.b.insert(sigma, chain);
        }
    }

    /// `A(sigma) = L(sigma) + d B(sigma)` for a `k`-face of `F_k`.
    pub fn a_chain(&self, sigma: &CubeFace) -> Result<Chain<Simplex>> {
        if sigma.dim() != self.level || !self.region().contains_face(sigma) {
            return Err(Error::Dimension(format!(
                "{sigma:?} is not a {}-face of the level-{} big face",
                self.level, self.level
            )));
        }
        let mut a = subdivide_l(&Chain::unit(sigma.clone()))?;
        if let Some(b) = self.b.get(sigma) {
            a.add_scaled(&b.boundary()?, 1)?;
        }
        Ok(a)
    }

    fn all_a_chains(&self) -> Result<BTreeMap<CubeFace, Chain<Simplex>>> {
        self.region()
            .faces(self.level)?
            .into_iter()
            .map(|f| self.a_chain(&f).map(|a| (f, a)))
            .collect()
    }

    /// `xi_D(tau) = chi_D(A(tau))` on the `k`-faces of `F_k`.
    pub fn xi(&self, tuple: &ColorTuple) -> Result<Cochain<CubeFace>> {
        if tuple.len() != self.level + 1 {
            return Err(Error::ColorTuple(format!(
                "level {} needs {} colors, got {}",
                self.level,
                self.level + 1,
                tuple.len()
            )));
        }
        let mut out = Cochain::zero(self.level);
        for tau in self.region().faces(self.level)? {
            let a = self.a_chain(&tau)?;
            let mut v = 0i64;
            for (s, c) in a.iter() {
                v = v
                    .checked_add(checked_mul(c, chi_value(tuple, s, &self.coloring)?)?)
                    .ok_or(Error::Overflow)?;
            }
            out.add_term(tau, v)?;
        }
        Ok(out)
    }

    /// `xi_D` for every sorted color set `D` on which it is nonzero.
    fn xi_all(&self, a: &BTreeMap<CubeFace, Chain<Simplex>>) -> Result<BTreeMap<Vec<Color>, Cochain<CubeFace>>> {
        let mut out: BTreeMap<Vec<Color>, Cochain<CubeFace>> = BTreeMap::new();
        for (tau, chain) in a {
            for (set, v) in color_profile(chain, &self.coloring)? {
                out.entry(set)
                    .or_insert_with(|| Cochain::zero(self.level))
                    .add_term(tau.clone(), v)?;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Builds `eta` with `delta eta = xi_D` on `F_{k-1}`.
    pub fn build_eta(&self, tuple: &ColorTuple) -> Result<EtaBuild> {
        let xi = self.xi(tuple)?;
        self.eta_from_xi(tuple.clone(), &xi)
    }

    fn eta_from_xi(&self, colors: ColorTuple, xi: &Cochain<CubeFace>) -> Result<EtaBuild> {
        let k = self.level;
        if k == 0 {
            return Err(Error::Dimension("no descent below level 0".into()));
        }
        let region = self.region();
        let axis = self.flag.pinned_axis(k);
        let lower = self.flag.face(k - 1);
        let xi_norm = xi.norm();

        // lightest section among x_axis = 1..=n; F_{k-1} itself sits at 0
        let norms = section_norms(xi, region, axis);
        let section_level = (1..norms.len())
            .min_by_key(|&t| (norms[t], t))
            .expect("n >= 1") as Coord;
        let section = region.pinned(axis, section_level)?;
        let restricted = xi.restrict(&section);
        let filled = fill(&restricted, &section)?;
        let fill_constant = (section.dim() + 1).saturating_sub(k) as u64;
        let beta = filled.beta.map_cells(|f| f.translate_to(axis, 0))?;

        let xi_prime = xi.filter(|f| f.free().contains(&axis) && f.anchor()[axis] < section_level);
        let pushed = direct_image(&xi_prime, axis, 0)?;
        // the projected slab enters with the opposite orientation to the
        // direct image convention
        let eta = beta.checked_sub(&pushed)?;

        let target = xi.restrict(lower);
        if eta.coboundary(lower)? != target {
            return Err(Error::Invariant(format!(
                "sign convention failure: delta eta != xi on F_{} for colors {:?}",
                k - 1,
                colors.colors()
            )));
        }
        Ok(EtaBuild {
            colors,
            xi_norm,
            section_level,
            fill_constant,
            sweeps: filled.sweeps,
            beta,
            xi_prime,
            eta,
        })
    }

    /// `k`-simplices of the triangulation colored bijectively by `tuple`,
    /// each oriented so that `chi_D` is `+1` on it.
    pub fn candidate_pool(&self, tuple: &ColorTuple) -> Result<Vec<(Simplex, i64)>> {
        let k = self.level;
        if tuple.len() != k + 1 {
            return Err(Error::ColorTuple(format!(
                "candidates at level {k} are colored by {} colors, got {}",
                k + 1,
                tuple.len()
            )));
        }
        let mut out = Vec::new();
        for s in self.triangulation().simplices(k) {
            let v = chi_value(tuple, &s, &self.coloring)?;
            if v != 0 {
                out.push((s, v));
            }
        }
        Ok(out)
    }

    fn all_pools(&self) -> BTreeMap<Vec<Color>, Vec<(Simplex, i64)>> {
        let mut out: BTreeMap<Vec<Color>, Vec<(Simplex, i64)>> = BTreeMap::new();
        for s in self.triangulation().simplices(self.level) {
            if let Some((set, sign)) = rainbow_signature(&s, &self.coloring) {
                out.entry(set).or_default().push((s, sign));
            }
        }
        out
    }

    /// Distributes `|eta(sigma)|` oriented candidates to each `sigma`,
    /// round-robin over the pool in canonical order.
    pub fn realize(&self, build: &EtaBuild) -> Result<Realization> {
        let pool = self.candidate_pool(&build.colors)?;
        realize_with(&build.colors, &build.eta, &pool, realization_sign())
    }

    /// Exhaustive check of the balance condition at the current level.
    pub fn verify_balanced(&self) -> bool {
        self.check_balanced().is_ok()
    }

    fn check_balanced(&self) -> Result<()> {
        let k = self.level;
        let region = self.region();
        if region.dim() < k + 1 {
            return Ok(());
        }
        let a = self.all_a_chains()?;
        for tau in region.faces(k + 1)? {
            let mut chain = Chain::zero(k);
            for (sigma, inc) in tau.boundary() {
                let piece = a.get(&sigma).ok_or_else(|| {
                    Error::Invariant(format!("missing A for boundary face {sigma:?}"))
                })?;
                chain.add_scaled(piece, inc)?;
            }
            let profile = color_profile(&chain, &self.coloring)?;
            if !profile.is_empty() {
                return Err(Error::Invariant(format!(
                    "balance fails on {tau:?}: {profile:?}"
                )));
            }
        }
        Ok(())
    }

    /// One descent step `k -> k - 1`.
    pub fn descend(&self) -> Result<BalanceState> {
        self.descend_with_sign(realization_sign())
    }

    /// Descends all the way to level 0.
    pub fn descend_to_ground(self) -> Result<BalanceState> {
        let mut state = self;
        while state.level > 0 {
            state = state.descend()?;
        }
        Ok(state)
    }

    fn descend_with_sign(&self, sign: i64) -> Result<BalanceState> {
        let k = self.level;
        if k == 0 {
            return Err(Error::Dimension("no descent below level 0".into()));
        }
        let a_old = self.all_a_chains()?;
        let xis = self.xi_all(&a_old)?;
        let pools = self.all_pools();
        let empty = Vec::new();

        let built: Vec<(EtaBuild, Realization)> = xis
            .into_par_iter()
            .map(|(set, xi)| {
                let tuple = ColorTuple::new(set.clone())?;
                let build = self.eta_from_xi(tuple.clone(), &xi)?;
                let pool = pools.get(&set).unwrap_or(&empty);
                let real = realize_with(&tuple, &build.eta, pool, sign)?;
                Ok((build, real))
            })
            .collect::<Result<_>>()?;

        let mut b_new: BTreeMap<CubeFace, Chain<Simplex>> = BTreeMap::new();
        let mut usage: BTreeMap<Simplex, u64> = BTreeMap::new();
        let mut color_sets = Vec::with_capacity(built.len());
        for (build, real) in &built {
            for (sigma, chain) in &real.b {
                b_new
                    .entry(sigma.clone())
                    .or_insert_with(|| Chain::zero(k))
                    .add_scaled(chain, 1)?;
            }
            for (s, &u) in &real.usage {
                if usage.insert(s.clone(), u).is_some() {
                    return Err(Error::Invariant(format!(
                        "simplex {s:?} realized for two color sets"
                    )));
                }
            }
            color_sets.push(ColorSetTrace {
                colors: build.colors.colors().to_vec(),
                xi_norm: build.xi_norm,
                section_level: build.section_level,
                sweeps: build.sweeps.clone(),
                eta_norm: build.eta.norm(),
                eta_bound: build.norm_bound(),
                pool_size: real.pool_size,
                max_usage: real.max_usage(),
            });
        }
        b_new.retain(|_, c| !c.is_zero());

        self.check_lowered(&a_old, &b_new)?;

        let triangulation = self.triangulation();
        let max_cofaces = usage
            .keys()
            .map(|s| triangulation.cofaces_with_incidence(s).len())
            .max()
            .unwrap_or(0);
        let max_multiplicity = usage.values().copied().max().unwrap_or(0);
        let mut trace = self.trace.clone();
        trace.push(LevelTrace {
            from_level: k,
            color_sets,
            max_multiplicity,
            max_cofaces,
        });
        let next = BalanceState {
            spec: self.spec,
            coloring: self.coloring.clone(),
            flag: self.flag.clone(),
            level: k - 1,
            b: b_new,
            usage,
            trace,
        };
        next.check_balanced()?;
        Ok(next)
    }

    /// For every `k`-face `tau` of `F_{k-1}`: `chi_D(A(tau) + B'(d tau)) = 0`
    /// for all `D` of size `k + 1`, and independently
    /// `chi_C(d A(tau) + d B'(d tau)) = 0` for all `C` of size `k`.
    fn check_lowered(
        &self,
        a_old: &BTreeMap<CubeFace, Chain<Simplex>>,
        b_new: &BTreeMap<CubeFace, Chain<Simplex>>,
    ) -> Result<()> {
        let k = self.level;
        let lower = self.flag.face(k - 1);
        if lower.dim() < k {
            return Ok(());
        }
        for tau in lower.faces(k)? {
            let mut chain = a_old
                .get(&tau)
                .cloned()
                .ok_or_else(|| Error::Invariant(format!("missing A for {tau:?}")))?;
            for (sigma, inc) in tau.boundary() {
                if let Some(b) = b_new.get(&sigma) {
                    chain.add_scaled(b, inc)?;
                }
            }
            let p = color_profile(&chain, &self.coloring)?;
            if !p.is_empty() {
                return Err(Error::Invariant(format!(
                    "lowered balance fails on {tau:?}: {p:?}"
                )));
            }
            let p = color_profile(&chain.boundary()?, &self.coloring)?;
            if !p.is_empty() {
                return Err(Error::Invariant(format!(
                    "boundary balance fails on {tau:?}: {p:?}"
                )));
            }
        }
        Ok(())
    }
}

fn realize_with(
    tuple: &ColorTuple,
    eta: &Cochain<CubeFace>,
    pool: &[(Simplex, i64)],
    sign: i64,
) -> Result<Realization> {
    let mut out = Realization {
        pool_size: pool.len(),
        ..Realization::default()
    };
    if eta.is_zero() {
        return Ok(out);
    }
    if pool.is_empty() {
        let (sorted, _) = tuple.canonical();
        return Err(Error::InfeasibleRealization {
            colors: sorted.colors().to_vec(),
        });
    }
    let dim = pool[0].0.dim();
    let mut cursor = 0usize;
    for (sigma, v) in eta.iter() {
        let dir = sign * v.signum();
        let mut chain = Chain::zero(dim);
        for _ in 0..v.unsigned_abs() {
            let (s, orient) = &pool[cursor % pool.len()];
            cursor += 1;
            chain.add_term(s.clone(), dir * orient)?;
            *out.usage.entry(s.clone()).or_insert(0) += 1;
        }
        out.b.insert(sigma.clone(), chain);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: usize, n: u32, m: usize) -> GridSpec {
        GridSpec::new(d, n, m).unwrap()
    }

    #[test]
    fn sign_is_forced() {
        let s = realization_sign();
        let state = BalanceState::init(reference_coloring(), Mode::Simplicial).unwrap();
        assert!(state.descend_with_sign(s).is_ok());
        assert!(state.descend_with_sign(-s).is_err());
        let d = ColorTuple::new(vec![0, 1]).unwrap();
        assert!(!state.build_eta(&d).unwrap().eta.is_zero());
    }

    #[test]
    fn constant_coloring_stays_trivial() {
        let st = BalanceState::init(Coloring::constant(spec(3, 2, 2), 4), Mode::Simplicial).unwrap();
        assert!(st.verify_balanced());
        let low = st.descend_to_ground().unwrap();
        assert_eq!(low.level(), 0);
        assert!(low.b().is_empty());
        assert!(low.verify_balanced());
    }

    #[test]
    fn level_m_a_is_l() {
        let sp = spec(2, 2, 1);
        let st = BalanceState::init(Coloring::from_fn(sp, |p| p[0] % 2), Mode::Simplicial).unwrap();
        let e = CubeFace::new(vec![0, 1], vec![0]).unwrap();
        assert_eq!(
            st.a_chain(&e).unwrap(),
            subdivide_l(&Chain::unit(e.clone())).unwrap()
        );
        let v = CubeFace::vertex(vec![0, 0]);
        assert!(st.a_chain(&v).is_err());
    }

    #[test]
    fn rainbow_square_is_rejected() {
        let c = Coloring::new(spec(2, 1, 1), vec![0, 1, 2, 3]).unwrap();
        assert!(matches!(
            BalanceState::init(c, Mode::Cubical),
            Err(Error::InvalidColoring(_))
        ));
    }

    #[test]
    fn xi_vanishes_for_unused_colors() {
        let sp = spec(2, 2, 1);
        let st = BalanceState::init(Coloring::from_fn(sp, |p| p[0] % 2), Mode::Simplicial).unwrap();
        let d = ColorTuple::new(vec![0, 9]).unwrap();
        assert!(st.xi(&d).unwrap().is_zero());
        let k = BalanceState::init(Coloring::constant(sp, 0), Mode::Simplicial).unwrap();
        assert!(k.xi(&ColorTuple::new(vec![0, 1]).unwrap()).unwrap().is_zero());
        assert!(st.xi(&ColorTuple::new(vec![0]).unwrap()).is_err());
    }

    #[test]
    fn xi_matches_direct_expansion() {
        // colors 0 on the even diagonals x1 + x2, 1 elsewhere
        let sp = spec(2, 2, 1);
        let c = Coloring::from_fn(sp, |p| (p[0] + p[1]) % 2);
        let st = BalanceState::init(c.clone(), Mode::Simplicial).unwrap();
        let d = ColorTuple::new(vec![0, 1]).unwrap();
        let xi = st.xi(&d).unwrap();
        for e in sp.cube().faces(1).unwrap() {
            let vs = e.vertices();
            let want = match (c.color_at(&vs[0]), c.color_at(&vs[1])) {
                (0, 1) => 1,
                (1, 0) => -1,
                _ => 0,
            };
            assert_eq!(xi.value(&e), want, "{e:?}");
        }
        assert!(xi.coboundary(&sp.cube()).unwrap().is_zero());
    }

    #[test]
    fn eta_for_zero_xi() {
        let sp = spec(2, 2, 1);
        let st = BalanceState::init(Coloring::constant(sp, 0), Mode::Simplicial).unwrap();
        let b = st.build_eta(&ColorTuple::new(vec![0, 1]).unwrap()).unwrap();
        assert!(b.eta.is_zero());
        assert_eq!(b.section_level, 1);
    }

    #[test]
    fn eta_when_xi_lives_on_the_bottom() {
        // a single color-1 vertex on the bottom edge: xi sits next to F_0
        let sp = spec(2, 2, 1);
        let c = Coloring::from_fn(sp, |p| u32::from(p == [1, 0]));
        let st = BalanceState::init(c, Mode::Simplicial).unwrap();
        let d = ColorTuple::new(vec![0, 1]).unwrap();
        let b = st.build_eta(&d).unwrap();
        assert_eq!(b.section_level, 1);
        let lower = st.flag().face(0);
        assert_eq!(b.eta.coboundary(lower).unwrap(), st.xi(&d).unwrap().restrict(lower));
        assert!(b.eta.norm() <= b.norm_bound());
    }

    #[test]
    fn realize_round_robin() {
        let sp = spec(2, 2, 1);
        let c = Coloring::from_fn(sp, |p| u32::from(p[1] > 0));
        let st = BalanceState::init(c, Mode::Simplicial).unwrap();
        let d = ColorTuple::new(vec![0, 1]).unwrap();
        assert!(st.candidate_pool(&ColorTuple::new(vec![0]).unwrap()).is_err());
        let pool = st.candidate_pool(&d).unwrap();
        assert_eq!(pool, st.all_pools()[&vec![0, 1]]);
        let three: Vec<_> = pool.iter().take(3).cloned().collect();
        let sigma = |x: u32| CubeFace::vertex(vec![x, 0]);
        let eta = Cochain::from_terms(0, [(sigma(0), 4), (sigma(1), -2)]).unwrap();
        let r = realize_with(&d, &eta, &three, -1).unwrap();
        assert_eq!(r.max_usage(), 2);
        assert_eq!(r.usage.values().sum::<u64>(), 6);
        for (s, chain) in &r.b {
            let mut v = 0;
            for (x, c) in chain.iter() {
                v += c * chi_value(&d, x, st.coloring()).unwrap();
            }
            assert_eq!(v, -eta.value(s));
        }
        assert!(realize_with(&d, &Cochain::zero(0), &[], -1).unwrap().b.is_empty());
        assert!(matches!(
            realize_with(&d, &eta, &[], -1),
            Err(Error::InfeasibleRealization { .. })
        ));
    }

    #[test]
    fn one_candidate() {
        let sp = spec(2, 2, 1);
        let c = Coloring::from_fn(sp, |p| u32::from(p[1] > 0));
        let st = BalanceState::init(c, Mode::Simplicial).unwrap();
        let d = ColorTuple::new(vec![0, 1]).unwrap();
        let pool = vec![st.all_pools()[&vec![0, 1]][0].clone()];
        let eta = Cochain::unit(CubeFace::vertex(vec![2, 0]));
        let r = realize_with(&d, &eta, &pool, -1).unwrap();
        let chain = &r.b[&CubeFace::vertex(vec![2, 0])];
        assert_eq!(chain.len(), 1);
        assert_eq!(chain.iter().next().unwrap().1.abs(), 1);
    }

    #[test]
    fn corrupted_state_is_unbalanced() {
        let sp = spec(2, 2, 1);
        let c = Coloring::from_fn(sp, |p| u32::from(p[1] > 0));
        let st = BalanceState::init(c, Mode::Simplicial).unwrap();
        let mut low = st.descend().unwrap();
        assert!(low.verify_balanced());
        let v = CubeFace::vertex(vec![1, 0]);
        let e = Simplex::new(vec![vec![1, 0], vec![1, 1]]).unwrap();
        let mut corrupted = low.b().get(&v).cloned().unwrap_or_else(|| Chain::zero(1));
        corrupted.add_term(e, 1).unwrap();
        low.set_b(v, corrupted);
        assert!(!low.verify_balanced());
    }

    #[test]
    fn two_step_descent_in_three_dimensions() {
        let sp = spec(3, 2, 2);
        let c = Coloring::from_fn(sp, |p| p[0] + p[2]);
        let st = BalanceState::init(c, Mode::Simplicial).unwrap();
        let one = st.descend().unwrap();
        assert_eq!(one.level(), 1);
        let zero = one.descend().unwrap();
        assert!(zero.verify_balanced());
        assert_eq!(zero.trace().len(), 2);
    }
}
