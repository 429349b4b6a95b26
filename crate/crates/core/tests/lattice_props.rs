use num_complex::Complex64;
use proptest::prelude::*;

use radon_core::kernels::kernel_by_name;
use radon_core::lattice::{canonical_eval_i64, dilate, lift, LatticeFunction, MultiIndexSet, PolynomialMapping, Term};
use radon_core::operators::{apply_average, apply_truncated, maximal, Operator};

fn term() -> impl Strategy<Value = (i64, Vec<u32>)> {
    (prop_oneof![-5i64..=-1, 1i64..=5], prop::collection::vec(0u32..=3, 2))
        .prop_filter("nonconstant, degree at most 3", |(_, e)| {
            let d: u32 = e.iter().sum();
            (1..=3).contains(&d)
        })
}

fn mapping() -> impl Strategy<Value = (PolynomialMapping, Vec<Vec<Term>>)> {
    prop::collection::vec(prop::collection::vec(term(), 1..=3), 1..=2).prop_map(|comps| {
        let terms: Vec<Vec<Term>> = comps
            .into_iter()
            .map(|c| c.into_iter().map(|(coeff, exp)| Term { coeff, exp }).collect())
            .collect();
        (PolynomialMapping::from_terms(2, &terms).unwrap(), terms)
    })
}

fn function(dim: usize) -> impl Strategy<Value = LatticeFunction> {
    prop::collection::vec((prop::collection::vec(-4i64..=4, dim), -1.0f64..1.0, -1.0f64..1.0), 1..5).prop_map(
        move |pts| {
            let mut f = LatticeFunction::zero(dim);
            for (x, re, im) in pts {
                f.add_at(x, Complex64::new(re, im)).unwrap();
            }
            f
        },
    )
}

fn close(a: &LatticeFunction, b: &LatticeFunction, tol: f64) -> bool {
    a.iter().chain(b.iter()).all(|(x, _)| (a.get(x) - b.get(x)).norm() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lifting_reproduces_the_polynomial((p, terms) in mapping(), y in prop::collection::vec(-10i64..=10, 2)) {
        let direct: Vec<i64> = terms
            .iter()
            .map(|c| c.iter().map(|t| t.coeff * t.exp.iter().zip(&y).map(|(&e, &v)| v.pow(e)).product::<i64>()).sum())
            .collect();
        prop_assert_eq!(p.eval(&y).unwrap(), direct);
    }

    #[test]
    fn dilations_form_a_group(s in 0.1f64..4.0, t in 0.1f64..4.0, x in prop::collection::vec(-1.0f64..1.0, 5)) {
        let a = MultiIndexSet::new(2, 1).unwrap();
        let g = MultiIndexSet::new(1, 5).unwrap();
        for set in [&a, &g] {
            let m = set.degree_matrix();
            let xs = &x[..set.len()];
            let twice = dilate(s, &m, &dilate(t, &m, xs).unwrap()).unwrap();
            let once = dilate(s * t, &m, xs).unwrap();
            for (u, v) in twice.iter().zip(&once) {
                prop_assert!((u - v).abs() <= 1e-12 * v.abs().max(1.0));
            }
        }
    }

    #[test]
    fn lp_norms_decrease_in_p(f in function(2), p in 1.0f64..3.0, dp in 0.0f64..3.0) {
        prop_assert!(f.lp_norm(p + dp).unwrap() <= f.lp_norm(p).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn averages_commute_with_translation(f in function(2), z in prop::collection::vec(-6i64..=6, 2), n in 1u64..=6) {
        let p = PolynomialMapping::moment_curve(2).unwrap();
        let lhs = apply_average(&f.translate(&z).unwrap(), &p, n).unwrap().function;
        let rhs = apply_average(&f, &p, n).unwrap().function.translate(&z).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-14));
    }

    #[test]
    fn operators_are_linear(f in function(2), g in function(2), re in -2.0f64..2.0, im in -2.0f64..2.0, n in 1u64..=6) {
        let p = PolynomialMapping::moment_curve(2).unwrap();
        let c = Complex64::new(re, im);
        let h = kernel_by_name("hilbert", 1).unwrap();
        let combo = f.scale(c).add(&g).unwrap();
        let lhs = apply_average(&combo, &p, n).unwrap().function;
        let rhs = apply_average(&f, &p, n).unwrap().function.scale(c).add(&apply_average(&g, &p, n).unwrap().function).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-13));
        let lhs = apply_truncated(&combo, &p, h.as_ref(), n).unwrap().function;
        let rhs = apply_truncated(&f, &p, h.as_ref(), n).unwrap().function.scale(c)
            .add(&apply_truncated(&g, &p, h.as_ref(), n).unwrap().function).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn averages_factor_through_the_canonical_mapping((p, _) in mapping(), n in 1u64..=5) {
        let (gamma, l) = lift(&p);
        let q = PolynomialMapping::canonical(gamma.clone());
        let on_canonical = apply_average(&LatticeFunction::delta(vec![0; gamma.len()]), &q, n).unwrap().function;
        let mut pushed = LatticeFunction::zero(p.d0());
        for (x, v) in on_canonical.iter() {
            pushed.add_at(l.apply_i64(x).unwrap(), *v).unwrap();
        }
        let direct = apply_average(&LatticeFunction::delta(vec![0; p.d0()]), &p, n).unwrap().function;
        prop_assert!(close(&pushed, &direct, 1e-14));
        // the canonical average sits on the points Q(y)
        let y = vec![n as i64; 2];
        prop_assert!(on_canonical.get(&canonical_eval_i64(&y, &gamma).unwrap()).re > 0.0);
    }

    #[test]
    fn maximal_grows_with_the_grid(f in function(2), extra in 3u64..20) {
        let p = PolynomialMapping::moment_curve(2).unwrap();
        let small = maximal(&f, &p, Operator::Average, &[1, 2]).unwrap();
        let mut grid = vec![1, 2, extra];
        grid.sort_unstable();
        let large = maximal(&f, &p, Operator::Average, &grid).unwrap();
        for (x, v) in small.iter() {
            prop_assert!(large.get(x).re >= v.re - 1e-15);
        }
    }

    #[test]
    fn maximal_dominates_each_average(f in function(2)) {
        let f = f.abs();
        let p = PolynomialMapping::moment_curve(2).unwrap();
        let grid = [1, 2, 4, 8];
        let m = maximal(&f, &p, Operator::Average, &grid).unwrap();
        for n in grid {
            for (x, v) in apply_average(&f, &p, n).unwrap().function.iter() {
                prop_assert!(m.get(x).re >= v.norm() - 1e-15);
            }
        }
    }
}
