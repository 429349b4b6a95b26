use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use radon_core::expsums::{
    crt_split, dirichlet, dirichlet_exhaustive, gauss_sum, multiplier_m, phi, rescale_rational, RationalPoint, RescaleCase,
    RescaleParams,
};
use radon_core::kernels::{dyadic_decompose_kernel, kernel_by_name, CzKernel, FnKernel};
use radon_core::lattice::{MultiIndexSet, PolynomialMapping};
use radon_core::operators::{dyadic_kernel_pushed, truncated_kernel_pushed};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn exact(theta: f64) -> BigRational {
    BigRational::from_float(theta).unwrap()
}

// |θ − a/q| ≤ 1/(qB), decided in exact rationals.
fn dirichlet_holds(theta: f64, a: i64, q: u64, bound: u64) -> bool {
    let lhs = (exact(theta) - BigRational::new(BigInt::from(a), BigInt::from(q))).abs();
    let rhs = BigRational::new(BigInt::from(1), BigInt::from(q) * BigInt::from(bound));
    lhs <= rhs
}

#[test]
fn dirichlet_on_ten_thousand_angles() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for i in 0..10_000 {
        let theta: f64 = rng.gen_range(-3.0..3.0);
        let bound: u64 = rng.gen_range(1..=2000);
        let (a, q) = dirichlet(theta, bound).unwrap();
        assert!((1..=bound).contains(&q), "θ={theta} B={bound} q={q}");
        assert!(dirichlet_holds(theta, a, q, bound), "θ={theta} B={bound} a={a} q={q}");
        assert_eq!(gcd(a.unsigned_abs(), q), 1, "θ={theta} a={a} q={q} not reduced");
        if i % 20 == 0 {
            let (_, qmin) = dirichlet_exhaustive(theta, bound).unwrap();
            assert!(qmin <= q);
        }
    }
}

#[test]
fn dirichlet_on_exact_rationals_recovers_them() {
    for q in 1..60u64 {
        for a in 0..q {
            if gcd(a, q) != 1 {
                continue;
            }
            let theta = a as f64 / q as f64;
            let (b, r) = dirichlet(theta, 1000).unwrap();
            assert_eq!((b, r), (a as i64, q), "θ = {a}/{q}");
        }
    }
}

#[test]
fn rescaled_fractions_satisfy_both_window_inequalities() {
    let prm = RescaleParams { n: 1 << 20, j: 2, beta: 4.0, beta_prime: 1.0, beta2: 1.0 };
    let (a, q, big_q) = (990i64, 100_003u64, 6u64);
    let log_n = (prm.n as f64).ln();
    let nj = (prm.n as f64).powi(2);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for i in 0..200 {
        let jitter = if i == 0 { 0.0 } else { rng.gen_range(-0.9..0.9) / (q as f64 * q as f64) };
        let theta = a as f64 / q as f64 + jitter;
        let r = rescale_rational(theta, a, q, big_q, &prm).unwrap();
        assert_eq!(gcd(r.a.unsigned_abs(), r.q), 1);
        let qt = exact(theta) * BigRational::from_integer(BigInt::from(big_q));
        let err = (qt - BigRational::new(BigInt::from(r.a), BigInt::from(r.q))).abs();
        let bound = BigRational::from_float(log_n.powf(prm.beta2) / (r.q as f64 * nj)).unwrap();
        assert!(err <= bound, "θ={theta}: {}/{}", r.a, r.q);
        let qf = r.q as f64;
        assert!(qf >= log_n.powf(prm.beta2) && qf <= nj / log_n.powf(prm.beta2));
        if i == 0 {
            // 6 is coprime to the prime 100003, so the fraction itself survives
            assert_eq!((r.a, r.q, r.case), (6 * a, q, RescaleCase::SameFraction));
        }
    }
}

fn brute_multiplier(xi: &[f64], n: u64) -> Complex64 {
    let mut s = Complex64::zero();
    for y in 1..=n {
        let y = y as f64;
        let t = xi[0] * y + xi[1] * y * y;
        s += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t);
    }
    s / n as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_sums_factor_over_coprime_moduli(
        q1 in 1u64..=9, q2 in 1u64..=9, d in 1u32..=3, seed in any::<u64>()
    ) {
        prop_assume!(gcd(q1, q2) == 1);
        let gamma = MultiIndexSet::new(1, d).unwrap();
        let q = q1 * q2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<i64> = (0..d).map(|_| rng.gen_range(0..q as i64)).collect();
        prop_assume!(a.iter().fold(q, |g, &x| gcd(g, x as u64)) == 1);
        let a = RationalPoint::from_residues(&a, q).unwrap();
        let (a1, a2) = crt_split(&a, q1, q2).unwrap();
        let whole = gauss_sum(&a, &gamma).unwrap();
        let split = gauss_sum(&a1, &gamma).unwrap() * gauss_sum(&a2, &gamma).unwrap();
        prop_assert!((whole - split).norm() < 1e-12, "{whole} vs {split}");
    }

    #[test]
    fn parabola_multiplier_matches_direct_sum(x1 in -0.5f64..0.5, x2 in -0.5f64..0.5, n in 1u64..=40) {
        let gamma = MultiIndexSet::new(1, 2).unwrap();
        let got = multiplier_m(&[x1, x2], n, &gamma).unwrap();
        let want = brute_multiplier(&[x1, x2], n);
        prop_assert!((got - want).norm() < 1e-11);
    }
}

fn ephase(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
}

#[test]
fn phi_matches_midpoint_rule_in_one_variable() {
    let gamma = MultiIndexSet::new(1, 2).unwrap();
    let m = 400_000;
    for &(x1, x2, n) in &[(0.3, -0.2, 5.0), (0.01, 0.004, 40.0), (-0.45, 0.5, 9.0), (0.0, 0.0, 3.0)] {
        let xi = [x1, x2];
        let h = 1.0 / m as f64;
        let mut s = Complex64::zero();
        for i in 0..m {
            let t = (i as f64 + 0.5) * h * n;
            s += ephase(x1 * t + x2 * t * t);
        }
        let want = s * h;
        let got = phi(&xi, n, &gamma).unwrap();
        assert!((got - want).norm() < 1e-6, "ξ={xi:?} N={n}: {got} vs {want}");
    }
}

#[test]
fn phi_matches_rank_one_lattice_rule_in_two_variables() {
    // Fibonacci lattice: F_m points with generator (1, F_{m-1}).
    let (mut f0, mut f1) = (1u64, 1u64);
    while f1 < 500_000 {
        (f0, f1) = (f1, f0 + f1);
    }
    let (m, g) = (f1, f0);
    let gamma = MultiIndexSet::new(2, 1).unwrap();
    let exps: Vec<Vec<u32>> = gamma.iter().map(|g| g.to_vec()).collect();
    for (xi, n) in [(vec![0.1, -0.05, 0.02], 4.0), (vec![0.0, 0.2, 0.01], 6.0), (vec![0.3, 0.3, -0.1], 2.0)] {
        let mut s = Complex64::zero();
        for i in 0..m {
            let u = (i as f64 + 0.5) / m as f64;
            let v = ((i * g) % m) as f64 / m as f64 + 0.5 / m as f64;
            let v = v - v.floor();
            let y = [u * n, v * n];
            let ph: f64 = exps
                .iter()
                .zip(&xi)
                .map(|(e, &c)| c * y[0].powi(e[0] as i32) * y[1].powi(e[1] as i32))
                .sum();
            s += ephase(ph);
        }
        let want = s / m as f64;
        let got = phi(&xi, n, &gamma).unwrap();
        assert!((got - want).norm() < 1e-3, "ξ={xi:?} N={n}: {got} vs {want}");
    }
}

fn wobbly(k: usize) -> Arc<dyn CzKernel> {
    // Even, so annular means do not vanish by symmetry.
    Arc::new(FnKernel::new(k, 4.0, "wobbly", move |y: &[f64]| {
        let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        Complex64::new((r.ln()).cos() / r.powi(k as i32), 0.0)
    }))
}

#[test]
fn dyadic_pieces_beyond_the_first_have_zero_integral() {
    for k in 1..=2 {
        let pieces = dyadic_decompose_kernel(wobbly(k), 6).unwrap();
        let mut saw_nonzero_parent = false;
        for p in &pieces[1..] {
            assert!(p.integral().unwrap().norm() < 1e-8, "k={k} j={}", p.index());
            let (lo, hi) = p.support();
            let mid = vec![(lo + hi) / 2.0; 1].into_iter().chain(std::iter::repeat(0.0)).take(k).collect::<Vec<_>>();
            saw_nonzero_parent |= p.parent().eval(&mid).norm() > 1e-3;
        }
        assert!(saw_nonzero_parent);
    }
}

#[test]
fn dyadic_partial_sums_agree_with_truncation_inside_the_plateau() {
    let hilbert = kernel_by_name("hilbert", 1).unwrap();
    let pieces = dyadic_decompose_kernel(hilbert.clone(), 7).unwrap();
    let p = PolynomialMapping::identity(1).unwrap();
    for n in 1..=7u32 {
        let plateau = 1i64 << (n - 1);
        let dy = dyadic_kernel_pushed(&p, &pieces, n as u64).unwrap();
        let tr = truncated_kernel_pushed(&p, hilbert.as_ref(), plateau as u64).unwrap();
        for x in -plateau..=plateau {
            let diff = (dy.get(&[x]) - tr.get(&[x])).norm();
            assert!(diff < 1e-12, "n={n} x={x}: {} vs {}", dy.get(&[x]), tr.get(&[x]));
        }
    }
}
