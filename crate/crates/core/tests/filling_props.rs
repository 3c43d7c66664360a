use cubecolor::filling::{choose_section, section_norms, sweep};
use cubecolor::{fill, Cochain, CubeFace, Error, Region};
use proptest::prelude::*;
use proptest::sample::Index;

/// A box in up to five ambient axes with one optional pinned axis.
fn region() -> impl Strategy<Value = Region> {
    (1usize..=4, 1u32..=4, any::<bool>(), 0u32..3).prop_map(|(dim, n, pin, at)| {
        let mut lo = vec![0; dim];
        let mut hi = vec![n; dim];
        if pin {
            lo.insert(1.min(dim), at);
            hi.insert(1.min(dim), at);
        }
        Region::new(lo, hi).unwrap()
    })
}

fn cochain(cells: &[CubeFace], dim: usize, t: &[(Index, i64)]) -> Cochain<CubeFace> {
    let mut out = Cochain::zero(dim);
    for (i, v) in t {
        out.add_term(i.get(cells).clone(), *v).unwrap();
    }
    out
}

fn terms() -> impl Strategy<Value = Vec<(Index, i64)>> {
    prop::collection::vec((any::<Index>(), -4i64..=4), 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn fills_exact_coboundaries(r in region(), k in 1usize..=4, t in terms()) {
        let dim = r.dim();
        prop_assume!(k <= dim);
        let gamma = cochain(&r.faces(k - 1).unwrap(), k - 1, &t);
        let alpha = gamma.coboundary(&r).unwrap();
        let res = fill(&alpha, &r).unwrap();
        prop_assert_eq!(res.beta.coboundary(&r).unwrap(), alpha.clone());
        let passes = (dim - k + 1) as u64;
        prop_assert_eq!(res.bound, passes * r.max_side() as u64 * alpha.norm());
        prop_assert!(res.beta.norm() <= res.bound);
        prop_assert!(res.sweeps.len() as u64 <= passes);
        prop_assert!(res.residuals_monotone());
        prop_assert_eq!(*res.residual_norms.last().unwrap(), 0);
        prop_assert!(res.beta.cells().all(|f| r.contains_face(f)));
    }

    #[test]
    fn top_dimension_is_always_fillable(r in region(), t in terms()) {
        let k = r.dim();
        let alpha = cochain(&r.faces(k).unwrap(), k, &t);
        let res = fill(&alpha, &r).unwrap();
        prop_assert_eq!(res.beta.coboundary(&r).unwrap(), alpha);
        prop_assert_eq!(res.sweeps.len(), 1);
    }

    #[test]
    fn section_is_light(r in region(), k in 1usize..=3, t in terms()) {
        prop_assume!(k <= r.dim());
        let gamma = cochain(&r.faces(k - 1).unwrap(), k - 1, &t);
        let alpha = gamma.coboundary(&r).unwrap();
        let axis = r.free_axes()[0];
        let norms = section_norms(&alpha, &r, axis);
        let t0 = choose_section(&alpha, &r, axis);
        let chosen = norms[(t0 - r.lo()[axis]) as usize];
        prop_assert_eq!(chosen, *norms.iter().min().unwrap());
        // each cell pinned along the axis lies in exactly one section
        prop_assert!(chosen * norms.len() as u64 <= alpha.norm());
        let s = sweep(&alpha, &r, axis).unwrap();
        prop_assert_eq!(s.level, t0);
        prop_assert!(s.next.norm() <= alpha.norm());
        prop_assert!(s.next.cells().all(|f| !f.free().contains(&axis)));
    }

    #[test]
    fn non_cocycles_are_rejected(r in region(), k in 1usize..=3, t in terms()) {
        prop_assume!(k < r.dim());
        let alpha = cochain(&r.faces(k).unwrap(), k, &t);
        let d = alpha.coboundary(&r).unwrap();
        match fill(&alpha, &r) {
            Err(Error::NotCocycle { residual }) => prop_assert_eq!(residual, d.norm()),
            Ok(res) => {
                prop_assert!(d.is_zero());
                prop_assert_eq!(res.beta.coboundary(&r).unwrap(), alpha);
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }
}
