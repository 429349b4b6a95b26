use proptest::prelude::*;

use radon_core::geometry::{boundary_near_count, davenport_residual, dilate_body, lattice_points, ConvexBody};

fn brute_disk(r: f64) -> u64 {
    let m = r.floor() as i64;
    let r2 = r * r;
    let mut n = 0;
    for x in -m..=m {
        for y in -m..=m {
            if ((x * x + y * y) as f64) <= r2 {
                n += 1;
            }
        }
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn disk_counts_match_brute_force(r in 1.0f64..40.0) {
        let r2 = r * r;
        prop_assume!((r2 - r2.round()).abs() > 1e-6);
        let b = ConvexBody::centered_ball(2, r).unwrap();
        prop_assert_eq!(lattice_points(&b, false).unwrap().count, brute_disk(r));
    }

    #[test]
    fn box_counts_are_products(lo in prop::collection::vec(-9.0f64..0.0, 3), len in prop::collection::vec(0.1f64..9.0, 3)) {
        let hi: Vec<f64> = lo.iter().zip(&len).map(|(a, l)| a + l).collect();
        let want: u64 = lo.iter().zip(&hi).map(|(a, b)| (b.floor() - a.ceil() + 1.0).max(0.0) as u64).product();
        let b = ConvexBody::axis_box(lo, hi).unwrap();
        prop_assert_eq!(lattice_points(&b, false).unwrap().count, want);
    }

    #[test]
    fn listed_points_agree_with_count(r in 1.0f64..12.0, cx in -0.5f64..0.5, cy in -0.5f64..0.5) {
        let b = ConvexBody::ball(vec![cx, cy], r).unwrap();
        let c = lattice_points(&b, true).unwrap();
        let pts = c.points.unwrap();
        prop_assert_eq!(pts.len() as u64, c.count);
        prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(pts.iter().all(|p| b.contains(&[p[0] as f64, p[1] as f64])));
    }

    #[test]
    fn dilation_shrinks_counts(r in 2.0f64..25.0, d1 in 0.05f64..1.0, d2 in 0.05f64..1.0, k in 2usize..=3) {
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let b = ConvexBody::centered_ball(k, r).unwrap();
        let small = lattice_points(&dilate_body(&b, lo).unwrap(), false).unwrap().count;
        let big = lattice_points(&dilate_body(&b, hi).unwrap(), false).unwrap().count;
        prop_assert!(small <= big);
    }

    #[test]
    fn boundary_layers_grow_with_width(r in 3.0f64..30.0, s1 in 1.0f64..10.0, s2 in 1.0f64..10.0) {
        let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
        let b = ConvexBody::centered_ball(2, r).unwrap();
        let a = boundary_near_count(&b, lo, 0.1).unwrap();
        let c = boundary_near_count(&b, hi, 0.1).unwrap();
        prop_assert!(a.count <= c.count && c.count <= c.total);
        if hi > r {
            prop_assert_eq!(c.count, c.total);
        }
    }

    #[test]
    fn disk_residual_stays_below_two_pi(r in 5.0f64..60.0, cx in -0.5f64..0.5, cy in -0.5f64..0.5) {
        let b = ConvexBody::ball(vec![cx, cy], r).unwrap();
        prop_assert!(davenport_residual(&b).unwrap().abs() <= 2.0 * std::f64::consts::PI);
    }
}

#[test]
fn widths_below_one_are_rejected() {
    let b = ConvexBody::centered_ball(2, 5.0).unwrap();
    assert!(boundary_near_count(&b, 0.5, 0.1).is_err());
    assert!(boundary_near_count(&b, 1.0, 0.5).is_err());
}
