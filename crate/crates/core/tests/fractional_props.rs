mod common;

use common::*;
use dhl_core::combinatorics::DEFAULT_GUARD;
use dhl_core::fractional::{
    check_pq_condition, intermix_dichotomy, is_box_intermixed, max_common_subfamily, piercing_set, slab_instance,
    tuple_hit_fraction, verify_fractional_strong, Dichotomy, IndexedParts, Side,
};
use dhl_core::rational::ratio;
use dhl_core::{Error, Point, PointSet};
use proptest::prelude::*;

fn pow(base: (i64, i64), exp: u32) -> (i128, i128) {
    ((base.0 as i128).pow(exp), (base.1 as i128).pow(exp))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fractions_match_exhaustive_counts((d, raw, pts) in family(1..=2, 1..=8, 1..=8, 6), k in 1usize..=4) {
        let boxes = to_boxes(&raw);
        let points = to_points(d, &pts);
        let k = k.min(raw.len());
        let hits = subsets_of_size(raw.len(), k).filter(|&m| !captured(&raw, m, &pts).is_empty()).count() as i64;
        let total = subsets_of_size(raw.len(), k).count() as i64;
        prop_assert_eq!(tuple_hit_fraction(&boxes, &points, k, DEFAULT_GUARD).unwrap(), ratio(hits, total));
        let best = distinct(&pts).iter().map(|p| raw.iter().filter(|b| inside(b, p)).count()).max().unwrap();
        prop_assert_eq!(max_common_subfamily(&boxes, &points).unwrap().members.len(), best);
    }

    /// `(1−β)^{2d} ≤ 1−α`, checked with integer cross-multiplication.
    #[test]
    fn relaxed_fractional_bound((d, raw, pts) in family(1..=2, 4..=9, 1..=10, 6)) {
        prop_assume!(raw.len() >= 2 * d);
        let report = verify_fractional_strong(&to_boxes(&raw), &to_points(d, &pts), DEFAULT_GUARD).unwrap();
        let n = raw.len() as i64;
        let best = distinct(&pts).iter().map(|p| raw.iter().filter(|b| inside(b, p)).count()).max().unwrap() as i64;
        let k = 2 * d;
        let total = subsets_of_size(raw.len(), k).count() as i128;
        let hits = subsets_of_size(raw.len(), k).filter(|&m| !captured(&raw, m, &pts).is_empty()).count() as i128;
        let (num, den) = pow((n - best, n), 2 * d as u32);
        let relaxed = num * total <= (total - hits) * den;
        prop_assert_eq!(report.relaxed_bound_pass, Some(relaxed));
        prop_assert!(relaxed);
    }

    #[test]
    fn exact_piercing_is_minimum((d, raw, pts) in family(1..=2, 1..=8, 1..=9, 5)) {
        let boxes = to_boxes(&raw);
        let points = to_points(d, &pts);
        let uniq = distinct(&pts);
        let pierces = |mask: u32| raw.iter().all(|b| (0..uniq.len()).any(|i| mask >> i & 1 == 1 && inside(b, &uniq[i])));
        let best = (0u32..1 << uniq.len()).filter(|&m| pierces(m)).map(u32::count_ones).min();
        match piercing_set(&boxes, &points) {
            Ok(found) => {
                prop_assert!(found.exact);
                prop_assert_eq!(Some(found.points.len() as u32), best);
                let chosen: Vec<IntPoint> = found.points.iter().map(to_int_point).collect();
                prop_assert!(raw.iter().all(|b| chosen.iter().any(|p| inside(b, p))));
            }
            Err(Error::Unpierceable(b)) => {
                prop_assert_eq!(best, None);
                prop_assert!(!uniq.iter().any(|p| inside(&raw[b], p)));
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn pq_condition_implies_piercing((d, raw, pts) in family(1..=2, 1..=8, 1..=9, 5)) {
        let boxes = to_boxes(&raw);
        let points = to_points(d, &pts);
        let p = d + 1;
        if raw.len() < p {
            prop_assert!(check_pq_condition(&boxes, &points, p, p, DEFAULT_GUARD).is_err());
        } else if check_pq_condition(&boxes, &points, p, p, DEFAULT_GUARD).unwrap().is_none() {
            prop_assert!(piercing_set(&boxes, &points).is_ok());
        }
    }

    #[test]
    fn dichotomy_is_verifiable(
        d in 1usize..=2,
        parts in 2usize..=3,
        coords in prop::collection::vec(0i64..6, 72),
        len in 1usize..=6,
    ) {
        let mut it = coords.chunks(d).map(|c| Point::from_ints(c));
        let raw: Vec<Vec<Point>> = (0..parts).map(|_| it.by_ref().take(len).collect()).collect();
        let ip = IndexedParts::new(d, raw.clone()).unwrap();
        let sets: Vec<PointSet> = raw.iter().map(|p| PointSet::multiset(d, p.iter().cloned()).unwrap()).collect();
        let intermixed = is_box_intermixed(&sets, &ratio(1, 2 * d as i64)).unwrap().is_none();
        let hull = |pts: Vec<&Point>| -> IntBox {
            let ints: Vec<IntPoint> = pts.into_iter().map(to_int_point).collect();
            (0..d).map(|i| (ints.iter().map(|p| p[i]).min().unwrap(), ints.iter().map(|p| p[i]).max().unwrap())).collect()
        };
        match intermix_dichotomy(&ip).unwrap() {
            Dichotomy::Case1 { point } => {
                prop_assert!(intermixed);
                let x = to_int_point(&point);
                prop_assert!(raw.iter().all(|part| inside(&hull(part.iter().collect()), &x)));
            }
            Dichotomy::Case2 { halfspace, missed, dense, indices } => {
                prop_assert!(!intermixed);
                prop_assert!(!raw[missed].iter().any(|p| halfspace.contains(p)));
                prop_assert!(indices.iter().all(|&i| halfspace.contains(&raw[dense][i])));
                prop_assert!(indices.len() * 2 * d >= len);
                let a = hull(indices.iter().map(|&i| &raw[missed][i]).collect());
                let b = hull(indices.iter().map(|&i| &raw[dense][i]).collect());
                let overlap = a.iter().zip(&b).all(|(x, y)| x.0.max(y.0) <= x.1.min(y.1));
                prop_assert!(!overlap);
                prop_assert!(matches!(halfspace.side, Side::AtMost | Side::AtLeast));
            }
        }
    }
}

#[test]
fn slab_tuple_counts() {
    for d in [2, 3] {
        for m in 1..=3 {
            let (boxes, points) = slab_instance(d, m).unwrap();
            let n = boxes.len();
            assert_eq!(n, d * m);
            let meets = |subset: &[usize]| points.iter().any(|p| subset.iter().all(|&b| boxes[b].contains(p).unwrap()));
            let count = |k: usize| (0u32..1 << n).filter(|s| s.count_ones() as usize == k).filter(|&s| {
                let subset: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
                meets(&subset)
            }).count();
            assert_eq!(count(d), m.pow(d as u32), "d={d} m={m}");
            assert_eq!(count(d + 1), 0, "d={d} m={m}");
        }
    }
}

#[test]
fn stated_exponent_fails_on_an_interval_chain() {
    let boxes = to_boxes(&[vec![(0, 2)], vec![(1, 3)], vec![(2, 4)], vec![(3, 5)]]);
    let points = to_points(1, &[vec![2], vec![3]]);
    let report = verify_fractional_strong(&boxes, &points, DEFAULT_GUARD).unwrap();
    assert_eq!(report.alpha, ratio(5, 6));
    assert_eq!(report.beta, ratio(3, 4));
    assert_eq!(report.bound_pass, Some(false));
    assert_eq!(report.relaxed_bound_pass, Some(true));
}
