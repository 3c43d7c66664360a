//! Primitive of a cubical cocycle with a linear norm bound.
//!
//! Each sweep picks the lightest hyperplane section `x_j = t`, pulls the
//! cocycle back to that section along prisms, and leaves a residual that is
//! zero on every face with `j` free and constant along `j` elsewhere. After
//! sweeping `d' - k + 1` axes no `k`-face survives, so the residual is zero
//! and the accumulated primitive is exact.

use serde::{Deserialize, Serialize};

use crate::algebra::{prism_eval, Cochain};
use crate::complex::{Coord, CubeFace, Region};
use crate::error::{Error, Result};

/// One sweep of the solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    /// Zero-based axis.
    pub axis: usize,
    pub level: Coord,
    pub alpha_norm: u64,
    pub beta_norm: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillResult {
    pub beta: Cochain<CubeFace>,
    pub sweeps: Vec<SweepRecord>,
    /// `(d' - k + 1) * side * |alpha|`.
    pub bound: u64,
    /// Norm of each residual `alpha_0, alpha_1, ...` (the last one is zero).
    pub residual_norms: Vec<u64>,
}

impl FillResult {
    /// Whether the residual norms never increased.
    pub fn residuals_monotone(&self) -> bool {
        self.residual_norms.windows(2).all(|w| w[1] <= w[0])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweep {
    pub level: Coord,
    pub beta: Cochain<CubeFace>,
    pub next: Cochain<CubeFace>,
}

fn ensure_cocycle(alpha: &Cochain<CubeFace>, region: &Region) -> Result<()> {
    let d = alpha.coboundary(region)?;
    if d.is_zero() {
        Ok(())
    } else {
        Err(Error::NotCocycle { residual: d.norm() })
    }
}

/// Norm of `alpha` restricted to each section `x_axis = t`, indexed by
/// `t - lo`.
pub fn section_norms(alpha: &Cochain<CubeFace>, region: &Region, axis: usize) -> Vec<u64> {
    let lo = region.lo()[axis];
    let hi = region.hi()[axis];
    let mut norms = vec![0u64; (hi - lo) as usize + 1];
    for (face, v) in alpha.iter() {
        if face.free().contains(&axis) {
            continue;
        }
        let t = face.anchor()[axis];
        if (lo..=hi).contains(&t) {
            let slot = &mut norms[(t - lo) as usize];
            *slot = slot.checked_add(v.unsigned_abs()).expect("section norm overflow");
        }
    }
    norms
}

/// Smallest level minimizing the restricted norm along `axis`.
pub fn choose_section(alpha: &Cochain<CubeFace>, region: &Region, axis: usize) -> Coord {
    let norms = section_norms(alpha, region, axis);
    let best = norms
        .iter()
        .enumerate()
        .min_by_key(|&(i, &v)| (v, i))
        .map(|(i, _)| i)
        .unwrap_or(0);
    region.lo()[axis] + best as Coord
}

/// One sweep along `axis`: `next = alpha - delta beta`, where `beta` pulls
/// `alpha` back to the chosen section along prisms.
pub fn sweep(alpha: &Cochain<CubeFace>, region: &Region, axis: usize) -> Result<Sweep> {
    if !region.is_free(axis) {
        return Err(Error::Dimension(format!("axis {axis} is pinned in the region")));
    }
    if alpha.dim() == 0 {
        return Err(Error::UnsupportedDimension);
    }
    ensure_cocycle(alpha, region)?;
    let level = choose_section(alpha, region, axis);
    let k = alpha.dim();
    let mut beta = Cochain::zero(k - 1);
    if !alpha.is_zero() {
        // prisms only see faces with `axis` free; skip columns that are empty
        let mut columns = std::collections::BTreeSet::new();
        for face in alpha.cells() {
            if face.free().contains(&axis) {
                columns.insert(face.drop_axis(axis, region.lo()[axis]));
            }
        }
        for base in columns {
            for t in region.lo()[axis]..=region.hi()[axis] {
                let tau = base.translate_to(axis, t);
                // the prism runs from the section back to tau
                let v = prism_eval(alpha, &tau, axis, level)?;
                beta.add_term(tau, -v)?;
            }
        }
    }
    let next = alpha.checked_sub(&beta.coboundary(region)?)?;
    Ok(Sweep { level, beta, next })
}

/// Solves `delta beta = alpha` for a `k`-cocycle on a box, `k >= 1`.
pub fn fill(alpha: &Cochain<CubeFace>, region: &Region) -> Result<FillResult> {
    let k = alpha.dim();
    if k == 0 {
        return Err(Error::UnsupportedDimension);
    }
    ensure_cocycle(alpha, region)?;
    let axes = region.free_axes();
    let dim = axes.len();
    let mut beta = Cochain::zero(k - 1);
    let mut sweeps = Vec::new();
    let alpha_norm = alpha.norm();
    let mut residual_norms = vec![alpha_norm];
    if k > dim {
        // a box of lower dimension has no k-faces; the cocycle is zero
        return Ok(FillResult {
            beta,
            sweeps,
            bound: 0,
            residual_norms,
        });
    }
    let passes = dim - k + 1;
    let mut cur = alpha.clone();
    for &axis in axes.iter().take(passes) {
        let s = sweep(&cur, region, axis)?;
        sweeps.push(SweepRecord {
            axis,
            level: s.level,
            alpha_norm: cur.norm(),
            beta_norm: s.beta.norm(),
        });
        beta.add_scaled(&s.beta, 1)?;
        cur = s.next;
        residual_norms.push(cur.norm());
    }
    if !cur.is_zero() {
        return Err(Error::Invariant(format!(
            "filling residual has norm {} after {passes} sweeps",
            cur.norm()
        )));
    }
    let bound = (passes as u64)
        .checked_mul(region.max_side() as u64)
        .and_then(|x| x.checked_mul(alpha_norm))
        .ok_or(Error::Overflow)?;
    Ok(FillResult {
        beta,
        sweeps,
        bound,
        residual_norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::GridSpec;

    fn face(anchor: &[u32], free: &[usize]) -> CubeFace {
        CubeFace::new(anchor.to_vec(), free.to_vec()).unwrap()
    }

    fn delta_vertex(spec: &GridSpec, p: &[u32]) -> Cochain<CubeFace> {
        Cochain::unit(face(p, &[])).coboundary(&spec.cube()).unwrap()
    }

    #[test]
    fn section_choice() {
        let spec = GridSpec::new(2, 2, 1).unwrap();
        let q = spec.cube();
        assert_eq!(choose_section(&Cochain::zero(1), &q, 1), 0);
        // supported on x2 = 0 only
        let a = Cochain::from_terms(1, [(face(&[0, 0], &[0]), 3)]).unwrap();
        assert_eq!(choose_section(&a, &q, 1), 1);
        // section norms 4, 1, 4
        let b = Cochain::from_terms(
            1,
            [
                (face(&[0, 0], &[0]), 2),
                (face(&[1, 0], &[0]), -2),
                (face(&[0, 1], &[0]), 1),
                (face(&[0, 2], &[0]), 4),
            ],
        )
        .unwrap();
        assert_eq!(section_norms(&b, &q, 1), vec![4, 1, 4]);
        assert_eq!(choose_section(&b, &q, 1), 1);
    }

    #[test]
    fn sweep_of_zero() {
        let spec = GridSpec::new(2, 2, 1).unwrap();
        let s = sweep(&Cochain::zero(1), &spec.cube(), 0).unwrap();
        assert!(s.beta.is_zero() && s.next.is_zero());
    }

    #[test]
    fn sweep_leaves_translated_section() {
        let spec = GridSpec::new(2, 2, 1).unwrap();
        let q = spec.cube();
        let alpha = delta_vertex(&spec, &[1, 1]);
        let s = sweep(&alpha, &q, 0).unwrap();
        assert!(s.beta.norm() <= 2 * alpha.norm());
        for (f, v) in s.next.iter() {
            assert_eq!(f.free(), &[1], "residual on an axis-1 edge {f:?}");
            let moved = f.translate_to(0, s.level);
            assert_eq!(v, alpha.value(&moved));
        }
        assert!(s.next.coboundary(&q).unwrap().is_zero());
        assert!(s.next.norm() <= alpha.norm());
        assert_eq!(alpha.checked_sub(&s.beta.coboundary(&q).unwrap()).unwrap(), s.next);
    }

    #[test]
    fn already_invariant_cocycle() {
        // alpha = 1 on every axis-2 edge in the column x1 = 0: translation
        // invariant along axis 2, zero on axis-2-pinned faces
        let spec = GridSpec::new(2, 2, 1).unwrap();
        let q = spec.cube();
        let alpha = Cochain::from_terms(
            1,
            [(face(&[0, 0], &[0]), 1), (face(&[0, 1], &[0]), 1), (face(&[0, 2], &[0]), 1)],
        )
        .unwrap();
        assert!(alpha.coboundary(&q).unwrap().is_zero());
        let s = sweep(&alpha, &q, 1).unwrap();
        assert_eq!(s.next, alpha);
        assert!(s.beta.is_zero());
    }

    #[test]
    fn fill_vertex_coboundary() {
        let spec = GridSpec::new(2, 2, 1).unwrap();
        let q = spec.cube();
        let alpha = delta_vertex(&spec, &[1, 1]);
        assert_eq!(alpha.norm(), 4);
        let r = fill(&alpha, &q).unwrap();
        assert_eq!(r.beta.coboundary(&q).unwrap(), alpha);
        assert_eq!(r.bound, 16);
        assert!(r.beta.norm() <= r.bound);
        assert!(r.sweeps.len() <= 2);
        assert!(r.residuals_monotone());
    }

    #[test]
    fn fill_zero_and_errors() {
        let spec = GridSpec::new(3, 2, 1).unwrap();
        let q = spec.cube();
        let r = fill(&Cochain::zero(2), &q).unwrap();
        assert!(r.beta.is_zero());
        assert!(matches!(fill(&Cochain::zero(0), &q), Err(Error::UnsupportedDimension)));
        let bad = Cochain::unit(face(&[0, 0, 0], &[0]));
        assert!(matches!(fill(&bad, &q), Err(Error::NotCocycle { .. })));
        assert!(matches!(sweep(&bad, &q, 0), Err(Error::NotCocycle { .. })));
    }

    #[test]
    fn fill_on_a_pinned_box() {
        let region = Region::new(vec![0, 2, 0], vec![3, 2, 2]).unwrap();
        let gamma = Cochain::from_terms(
            0,
            [(face(&[1, 2, 1], &[]), 2), (face(&[3, 2, 0], &[]), -1)],
        )
        .unwrap();
        let alpha = gamma.coboundary(&region).unwrap();
        let r = fill(&alpha, &region).unwrap();
        assert_eq!(r.beta.coboundary(&region).unwrap(), alpha);
        assert!(r.beta.norm() <= r.bound);
        assert_eq!(r.bound, 2 * 3 * alpha.norm());
    }

    #[test]
    fn fill_top_dimension() {
        // every 2-cochain on a square grid is a cocycle
        let region = GridSpec::new(2, 3, 1).unwrap().cube();
        let alpha = Cochain::from_terms(
            2,
            [(face(&[0, 0], &[0, 1]), 1), (face(&[2, 1], &[0, 1]), -3)],
        )
        .unwrap();
        let r = fill(&alpha, &region).unwrap();
        assert_eq!(r.sweeps.len(), 1);
        assert_eq!(r.beta.coboundary(&region).unwrap(), alpha);
    }
}
