mod common;

use common::*;
use dhl_core::rational::{format_rational, parse_rational, ratio};
use dhl_core::{achiever_subfamily, bbox, box_intersection, AxisBox};
use proptest::prelude::*;

fn raw_intersection(boxes: &[IntBox]) -> Option<IntBox> {
    let dim = boxes[0].len();
    let b: IntBox = (0..dim)
        .map(|i| (boxes.iter().map(|b| b[i].0).max().unwrap(), boxes.iter().map(|b| b[i].1).min().unwrap()))
        .collect();
    b.iter().all(|(lo, hi)| lo <= hi).then_some(b)
}

proptest! {
    #[test]
    fn intersection_matches_coordinatewise_oracle((_, raw, _) in family(1..=4, 1..=8, 0..=0, 12)) {
        let got = box_intersection(&to_boxes(&raw)).unwrap();
        match raw_intersection(&raw) {
            Some(b) => prop_assert_eq!(got, AxisBox::from_ints(&b)),
            None => prop_assert!(got.is_empty()),
        }
    }

    #[test]
    fn achievers_keep_the_intersection((d, raw, _) in family(1..=4, 1..=10, 0..=0, 12)) {
        let boxes = to_boxes(&raw);
        let idx = achiever_subfamily(&boxes).unwrap();
        prop_assert!(idx.len() <= 2 * d);
        let sub: Vec<AxisBox> = idx.iter().map(|&i| boxes[i].clone()).collect();
        prop_assert_eq!(box_intersection(&sub).unwrap(), box_intersection(&boxes).unwrap());
    }

    #[test]
    fn bbox_is_the_tight_hull((d, _, raw) in family(1..=4, 0..=0, 1..=10, 12)) {
        let points = to_points(d, &raw);
        let hull = bbox(points.iter()).unwrap();
        for p in &raw {
            prop_assert!(hull.contains(&dhl_core::Point::from_ints(p)).unwrap());
        }
        let expected: IntBox = (0..d)
            .map(|i| (raw.iter().map(|p| p[i]).min().unwrap(), raw.iter().map(|p| p[i]).max().unwrap()))
            .collect();
        prop_assert_eq!(hull, AxisBox::from_ints(&expected));
    }

    #[test]
    fn containment_matches_oracle((d, raw, pts) in family(1..=4, 1..=4, 1..=6, 8)) {
        let boxes = to_boxes(&raw);
        for p in &pts {
            let point = dhl_core::Point::from_ints(p);
            for (b, r) in boxes.iter().zip(&raw) {
                prop_assert_eq!(b.contains(&point).unwrap(), inside(r, p));
            }
        }
        prop_assert_eq!(to_points(d, &pts).distinct_len(), distinct(&pts).len());
    }

    #[test]
    fn rationals_round_trip(num in -1_000_000i64..1_000_000, den in 1i64..10_000) {
        let r = ratio(num, den);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}
