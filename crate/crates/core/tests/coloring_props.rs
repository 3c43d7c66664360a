mod common;

use std::collections::VecDeque;

use common::{naive_balanced, naive_chi, points, subsets};
use cubecolor::coloring::{chi_cochain, chi_value};
use cubecolor::oracle::{component_stats, random_valid};
use cubecolor::{
    split_components, validate, BalanceState, Cell, ColorTuple, Coloring, GridSpec, Mode, SimplicialRegion,
};
use proptest::prelude::*;

const SPECS: [(usize, u32, usize); 5] = [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 2, 2), (3, 3, 1)];

fn instance() -> impl Strategy<Value = Coloring> {
    (0..SPECS.len(), any::<u64>()).prop_map(|(i, seed)| {
        let (d, n, m) = SPECS[i];
        random_valid(&GridSpec::new(d, n, m).unwrap(), seed)
    })
}

/// Largest monochromatic component by BFS over explicit coordinate
/// differences.
fn bfs_largest(c: &Coloring, cubical: bool) -> usize {
    let spec = c.spec();
    let pts = points(spec);
    let limit = spec.m + 1;
    let adjacent = |a: &[u32], b: &[u32]| {
        let diff: Vec<i64> = a.iter().zip(b).map(|(&x, &y)| y as i64 - x as i64).collect();
        let moved = diff.iter().filter(|&&x| x != 0).count();
        if moved == 0 || moved > limit || diff.iter().any(|x| x.abs() > 1) {
            return false;
        }
        cubical || diff.iter().all(|&x| x >= 0) || diff.iter().all(|&x| x <= 0)
    };
    let mut seen = vec![false; pts.len()];
    let mut best = 0;
    for s in 0..pts.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut size = 0;
        let mut q = VecDeque::from([s]);
        while let Some(i) = q.pop_front() {
            size += 1;
            for j in 0..pts.len() {
                if !seen[j] && c.colors()[j] == c.colors()[i] && adjacent(&pts[i], &pts[j]) {
                    seen[j] = true;
                    q.push_back(j);
                }
            }
        }
        best = best.max(size);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundary_of_chi(c in instance()) {
        let spec = *c.spec();
        let t = SimplicialRegion::new(spec.cube(), spec.m + 1);
        let palette = c.palette();
        for size in 1..=spec.m + 1 {
            let k = size - 1;
            for set in subsets(&palette, size) {
                let tuple = ColorTuple::new(set.clone()).unwrap();
                let lhs = chi_cochain(&tuple, &t, &c).unwrap().coboundary(&t).unwrap();
                for sigma in t.simplices(k + 1) {
                    let by_hand: i64 = sigma
                        .boundary()
                        .iter()
                        .map(|(f, inc)| inc * naive_chi(&set, f, &c))
                        .sum();
                    let others = palette.iter().filter(|x| !set.contains(x));
                    let front: i64 = others
                        .clone()
                        .map(|&x| {
                            let mut e = vec![x];
                            e.extend(&set);
                            naive_chi(&e, &sigma, &c)
                        })
                        .sum();
                    let back: i64 = others
                        .map(|&x| {
                            let mut e = set.clone();
                            e.push(x);
                            naive_chi(&e, &sigma, &c)
                        })
                        .sum();
                    let sign = if size % 2 == 0 { 1 } else { -1 };
                    prop_assert_eq!(lhs.value(&sigma), by_hand);
                    prop_assert_eq!(by_hand, front);
                    prop_assert_eq!(by_hand, sign * back);
                    if size == spec.m + 1 {
                        prop_assert_eq!(by_hand, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn chi_matches_definition_and_alternates(c in instance(), i in 0usize..4, j in 0usize..4) {
        let spec = *c.spec();
        let t = SimplicialRegion::new(spec.cube(), spec.m + 1);
        let palette = c.palette();
        let k = spec.m.min(palette.len() - 1);
        for set in subsets(&palette, k + 1).into_iter().take(20) {
            let tuple = ColorTuple::new(set.clone()).unwrap();
            let mut swapped = set.clone();
            let (a, b) = (i % swapped.len(), j % swapped.len());
            swapped.swap(a, b);
            let sign = if a == b { 1 } else { -1 };
            let other = ColorTuple::new(swapped).unwrap();
            for s in t.simplices(k) {
                let v = chi_value(&tuple, &s, &c).unwrap();
                prop_assert_eq!(v, naive_chi(&set, &s, &c));
                prop_assert_eq!(chi_value(&other, &s, &c).unwrap(), sign * v);
            }
        }
    }

    #[test]
    fn level_m_is_balanced(c in instance()) {
        let st = BalanceState::init(c, Mode::Simplicial).unwrap();
        prop_assert!(st.verify_balanced());
        prop_assert!(naive_balanced(&st));
    }

    #[test]
    fn cubical_implies_simplicial(colors in prop::collection::vec(0u32..3, 9)) {
        let c = Coloring::new(GridSpec::new(2, 2, 1).unwrap(), colors).unwrap();
        if validate(&c, Mode::Cubical).is_ok() {
            prop_assert!(validate(&c, Mode::Simplicial).is_ok());
        }
    }

    #[test]
    fn split_matches_components(c in instance()) {
        let largest = bfs_largest(&c, false);
        prop_assert_eq!(component_stats(&c, Mode::Simplicial).unwrap().largest, largest);
        let s = split_components(&c, Mode::Simplicial).unwrap();
        prop_assert!(validate(&s, Mode::Simplicial).is_ok());
        prop_assert_eq!(s.max_usage(), largest);
        prop_assert_eq!(split_components(&s, Mode::Simplicial).unwrap(), s.canonical());
    }
}

#[test]
fn cubical_components_on_a_cubically_valid_coloring() {
    let spec = GridSpec::new(2, 3, 1).unwrap();
    let c = Coloring::from_fn(spec, |p| u32::from(p[0] >= 2) + 2 * u32::from(p[1] == 3 && p[0] == 0));
    assert!(validate(&c, Mode::Cubical).is_ok());
    let largest = bfs_largest(&c, true);
    assert_eq!(component_stats(&c, Mode::Cubical).unwrap().largest, largest);
    assert_eq!(split_components(&c, Mode::Cubical).unwrap().max_usage(), largest);
}

#[test]
fn corners_split_apart() {
    let spec = GridSpec::new(2, 4, 1).unwrap();
    let c = Coloring::from_fn(spec, |p| u32::from(p == [0, 0] || p == [4, 4]));
    let s = split_components(&c, Mode::Simplicial).unwrap();
    let a = s.color_at(&[0, 0]);
    let b = s.color_at(&[4, 4]);
    assert_ne!(a, b);
    assert_eq!(s.usage()[&a], 1);
    assert_eq!(s.usage()[&b], 1);
    assert_eq!(s.palette().len(), 3);
}
