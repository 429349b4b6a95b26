//! Gauss–Legendre rules, adaptive 1-D integration and spherical averages
//! used by kernel and oscillatory-integral code.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

pub(crate) fn gl10() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(10))
}

pub(crate) fn gl_rule(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static R6: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static R8: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static R16: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    match n {
        6 => R6.get_or_init(|| gauss_legendre(6)),
        8 => R8.get_or_init(|| gauss_legendre(8)),
        10 => gl10(),
        16 => R16.get_or_init(|| gauss_legendre(16)),
        _ => panic!("unsupported cached rule {n}"),
    }
}

fn gl_panel(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
    let (x, w) = gl10();
    let h = 0.5 * (b - a);
    let c = 0.5 * (b + a);
    x.iter().zip(w).map(|(&xi, &wi)| f(c + h * xi) * wi).sum::<Complex64>() * h
}

/// Adaptive bisection with a 10-point Gauss–Legendre panel.
/// Returns the value and the accumulated error estimate.
pub fn integrate(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Result<(Complex64, f64)> {
    fn rec(
        f: &dyn Fn(f64) -> Complex64,
        a: f64,
        b: f64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> (Complex64, f64, bool) {
        let m = 0.5 * (a + b);
        let l = gl_panel(f, a, m);
        let r = gl_panel(f, m, b);
        let err = (l + r - whole).norm();
        if err <= tol || depth == 0 {
            return (l + r, err, err <= tol);
        }
        let (lv, le, lok) = rec(f, a, m, l, 0.5 * tol, depth - 1);
        let (rv, re, rok) = rec(f, m, b, r, 0.5 * tol, depth - 1);
        (lv + rv, le + re, lok && rok)
    }
    if a == b {
        return Ok((Complex64::default(), 0.0));
    }
    let whole = gl_panel(f, a, b);
    let (v, err, ok) = rec(f, a, b, whole, tol, 40);
    if !ok {
        return Err(Error::Quadrature { achieved: err, target: tol });
    }
    Ok((v, err))
}

/// `∫_{a ≤ |y| ≤ b} F(y) dy` over `R^k`, `k ≤ 3`, with the angular rule
/// applied to antipodal pairs `F(y) + F(-y)` so odd integrands vanish exactly.
pub fn annulus_integral(
    k: usize,
    f: &dyn Fn(&[f64]) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(Complex64, f64)> {
    if !(1..=3).contains(&k) {
        return Err(Error::invalid(format!("annulus integrals need 1 <= k <= 3, got {k}")));
    }
    if !(0.0 < a && a <= b) {
        return Err(Error::invalid(format!("bad annulus [{a}, {b}]")));
    }
    let mut prev: Option<Complex64> = None;
    let mut m = 16usize;
    loop {
        let dirs = half_sphere(k, m);
        let shell = |r: f64| -> Complex64 {
            let mut s = Complex64::default();
            let mut y = vec![0.0; k];
            let mut ny = vec![0.0; k];
            for (w, omega) in &dirs {
                for i in 0..k {
                    y[i] = r * omega[i];
                    ny[i] = -y[i];
                }
                s += (f(&y) + f(&ny)) * *w;
            }
            s * r.powi(k as i32 - 1)
        };
        // log-radial substitution keeps dyadic shells equally resolved
        let g = |u: f64| {
            let r = u.exp();
            shell(r) * r
        };
        let (v, err) = integrate(&g, a.ln(), b.ln(), 0.5 * tol)?;
        if let Some(p) = prev {
            let diff = (v - p).norm();
            if diff + err <= tol || k == 1 {
                return Ok((v, diff + err));
            }
            if m > 1024 {
                return Err(Error::Quadrature { achieved: diff + err, target: tol });
            }
        } else if k == 1 {
            return Ok((v, err));
        }
        prev = Some(v);
        m *= 2;
    }
}

/// Weighted directions covering half of `S^{k-1}`; their antipodes give the rest.
fn half_sphere(k: usize, m: usize) -> Vec<(f64, Vec<f64>)> {
    match k {
        1 => vec![(1.0, vec![1.0])],
        2 => (0..m)
            .map(|i| {
                let t = PI * i as f64 / m as f64;
                (PI / m as f64, vec![t.cos(), t.sin()])
            })
            .collect(),
        _ => {
            let (x, w) = gauss_legendre(m / 2);
            let nphi = m;
            let mut out = Vec::new();
            for (ct, wt) in x.iter().zip(&w) {
                let st = (1.0 - ct * ct).sqrt();
                for j in 0..nphi {
                    let phi = PI * j as f64 / nphi as f64;
                    out.push((wt * PI / nphi as f64, vec![st * phi.cos(), st * phi.sin(), *ct]));
                }
            }
            out
        }
    }
}

/// Surface area of `S^{k-1}`.
pub fn sphere_area(k: usize) -> f64 {
    match k {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => {
            let kf = k as f64;
            2.0 * PI.powf(kf / 2.0) / gamma_half_integer(k)
        }
    }
}

fn gamma_half_integer(k: usize) -> f64 {
    // Γ(k/2)
    if k.is_multiple_of(2) {
        (1..k / 2).map(|i| i as f64).product()
    } else {
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x < k as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        for n in [1usize, 2, 5, 10, 16] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = 2 * n - 1;
            let s: f64 = x.iter().zip(&w).map(|(a, b)| a.powi(deg as i32 - 1) * b).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((s - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn adaptive_oscillatory() {
        let f = |x: f64| Complex64::new(0.0, 40.0 * x).exp();
        let (v, _) = integrate(&f, 0.0, 1.0, 1e-12).unwrap();
        let exact = (Complex64::new(0.0, 40.0).exp() - 1.0) / Complex64::new(0.0, 40.0);
        assert!((v - exact).norm() < 1e-12);
    }

    #[test]
    fn annulus_volumes() {
        let one = |_: &[f64]| Complex64::new(1.0, 0.0);
        for k in 1..=3usize {
            let (v, _) = annulus_integral(k, &one, 1.0, 3.0, 1e-10).unwrap();
            let exact = sphere_area(k) * (3f64.powi(k as i32) - 1.0) / k as f64;
            assert!((v.re - exact).abs() < 1e-8, "k={k}: {} vs {exact}", v.re);
        }
        let r2 = |y: &[f64]| Complex64::new(y.iter().map(|v| v * v).sum::<f64>(), 0.0);
        let (v, _) = annulus_integral(3, &r2, 0.5, 2.0, 1e-10).unwrap();
        let exact = 4.0 * PI * (2f64.powi(5) - 0.5f64.powi(5)) / 5.0;
        assert!((v.re - exact).abs() < 1e-8);
    }

    #[test]
    fn odd_integrands_vanish_exactly() {
        let odd = |y: &[f64]| Complex64::new(y[0] / y.iter().map(|v| v * v).sum::<f64>().powf(1.5), 0.0);
        let (v, _) = annulus_integral(2, &odd, 1.0, 50.0, 1e-10).unwrap();
        assert_eq!(v, Complex64::default());
    }
}
