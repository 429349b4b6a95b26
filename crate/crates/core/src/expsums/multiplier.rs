//! Discrete multipliers `m_N`, `m_j`, their continuous models `Φ_N`, `Φ_j`,
//! `Ψ_n`, the major-arc approximation error and van der Corput fits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gauss::gauss_sum;
use super::phase::{centered_frac, e, frac_mul, CompensatedSum, RationalPoint};
use crate::error::{Error, Result};
use crate::kernels::{for_each_in_box, CzKernel, DyadicKernelPiece};
use crate::lattice::{canonical_eval, MultiIndexSet, PolynomialMapping};
use crate::quadrature::gl_rule;

/// Absolute accuracy targeted by the oscillatory quadratures.
pub const PHI_TOL: f64 = 1e-8;
const MAX_PANELS: usize = 4_000_000;

fn check_xi(xi: &[f64], gamma: &MultiIndexSet) -> Result<()> {
    if xi.len() != gamma.len() {
        return Err(Error::DimensionMismatch { expected: gamma.len(), got: xi.len() });
    }
    if xi.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("ξ must be finite"));
    }
    Ok(())
}

/// `frac⟨ξ, Q(y)⟩`, each coordinate reduced exactly.
fn canonical_phase(xi: &[f64], y: &[i64], gamma: &MultiIndexSet) -> Result<f64> {
    let q = canonical_eval(y, gamma)?;
    let s: f64 = xi.iter().zip(&q).map(|(&x, n)| super::phase::frac_mul_bigint(x, n)).sum();
    Ok(s - s.floor())
}

/// `m_N(ξ) = N^{-k} Σ_{y∈[1,N]^k} e(⟨ξ, Q(y)⟩)`.
pub fn multiplier_m(xi: &[f64], n: u64, gamma: &MultiIndexSet) -> Result<Complex64> {
    check_xi(xi, gamma)?;
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let mut acc = CompensatedSum::default();
    for_each_in_box(gamma.k(), 1, n as i64, |y| {
        acc.add(e(canonical_phase(xi, y, gamma)?));
        Ok(())
    })?;
    Ok(acc.value() / (n as f64).powi(gamma.k() as i32))
}

/// `m_j(ξ) = Σ_y e(⟨ξ, Q(y)⟩) K_j(y)`.
pub fn multiplier_m_piece(xi: &[f64], piece: &DyadicKernelPiece, gamma: &MultiIndexSet) -> Result<Complex64> {
    check_xi(xi, gamma)?;
    if piece.dim() != gamma.k() {
        return Err(Error::DimensionMismatch { expected: gamma.k(), got: piece.dim() });
    }
    let mut acc = CompensatedSum::default();
    for y in piece.lattice_support() {
        let yf: Vec<f64> = y.iter().map(|&v| v as f64).collect();
        acc.add(e(canonical_phase(xi, &y, gamma)?) * piece.eval_at(&yf));
    }
    Ok(acc.value())
}

/// `N^{-k} Σ_y e(⟨ξ, P(y)⟩)` for a general mapping; equals `m_N(L^T ξ)`.
pub fn multiplier_for_mapping(xi: &[f64], n: u64, p: &PolynomialMapping) -> Result<Complex64> {
    if xi.len() != p.d0() {
        return Err(Error::DimensionMismatch { expected: p.d0(), got: xi.len() });
    }
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let mut acc = CompensatedSum::default();
    for_each_in_box(p.k(), 1, n as i64, |y| {
        let v = p.eval(y)?;
        let s: f64 = xi.iter().zip(&v).map(|(&x, &c)| frac_mul(x, c as i128)).sum();
        acc.add(e(s - s.floor()));
        Ok(())
    })?;
    Ok(acc.value() / (n as f64).powi(p.k() as i32))
}

fn monomial(y: &[f64], g: &[u32]) -> f64 {
    y.iter().zip(g).map(|(&v, &p)| v.powi(p as i32)).product()
}

/// Bound on the oscillation `2π·var_box ⟨η, Q⟩` through `|∂_i y^γ|`.
fn phase_variation(eta: &[f64], gamma: &MultiIndexSet, lo: &[f64], hi: &[f64]) -> f64 {
    let m: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| a.abs().max(b.abs())).collect();
    let mut var = 0.0;
    for (g, &h) in gamma.iter().zip(eta) {
        if h == 0.0 {
            continue;
        }
        let mut s = 0.0;
        for i in 0..g.len() {
            if g[i] == 0 {
                continue;
            }
            let mut d = g[i] as f64 * (hi[i] - lo[i]);
            for (l, &ml) in m.iter().enumerate() {
                let p = if l == i { g[l] - 1 } else { g[l] };
                d *= ml.powi(p as i32);
            }
            s += d;
        }
        var += h.abs() * s;
    }
    std::f64::consts::TAU * var
}

struct Panel {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

fn tensor_rule(n: usize, lo: &[f64], hi: &[f64], f: &dyn Fn(&[f64]) -> Complex64) -> Complex64 {
    let (x, w) = gl_rule(n);
    let k = lo.len();
    let mut idx = vec![0usize; k];
    let mut pt = vec![0.0; k];
    let mut acc = Complex64::default();
    let half: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (b - a)).collect();
    let mid: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
    loop {
        let mut wt = 1.0;
        for i in 0..k {
            pt[i] = mid[i] + half[i] * x[idx[i]];
            wt *= w[idx[i]] * half[i];
        }
        acc += f(&pt) * wt;
        let mut pos = k;
        loop {
            if pos == 0 {
                return acc;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Adaptive tensor Gauss–Legendre over a box. `split_first` forces
/// subdivision (oscillation or kernel scale); `skip` marks panels where the
/// integrand vanishes identically.
fn box_integrate(
    lo: Vec<f64>,
    hi: Vec<f64>,
    f: &dyn Fn(&[f64]) -> Complex64,
    split_first: &dyn Fn(&[f64], &[f64]) -> bool,
    skip: &dyn Fn(&[f64], &[f64]) -> bool,
    tol: f64,
) -> Result<Complex64> {
    let k = lo.len();
    let volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let mut stack = vec![Panel { lo, hi }];
    let mut acc = CompensatedSum::default();
    let mut err_total = 0.0;
    let mut panels = 0usize;
    while let Some(Panel { lo, hi }) = stack.pop() {
        panels += 1;
        if panels > MAX_PANELS {
            return Err(Error::Quadrature { achieved: err_total, target: tol });
        }
        if skip(&lo, &hi) {
            continue;
        }
        let vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
        let tiny = lo.iter().zip(&hi).any(|(a, b)| b - a < 1e-12 * (1.0 + a.abs()));
        if !tiny && !split_first(&lo, &hi) {
            let fine = tensor_rule(8, &lo, &hi, f);
            let coarse = tensor_rule(6, &lo, &hi, f);
            let err = (fine - coarse).norm();
            if err <= tol * vol / volume {
                acc.add(fine);
                err_total += err;
                continue;
            }
        } else if tiny {
            acc.add(tensor_rule(8, &lo, &hi, f));
            continue;
        }
        // children pushed in reverse so the traversal is lexicographic
        let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        for mask in (0..1usize << k).rev() {
            let mut clo = lo.clone();
            let mut chi = hi.clone();
            for i in 0..k {
                if mask >> (k - 1 - i) & 1 == 1 {
                    clo[i] = mid[i];
                } else {
                    chi[i] = mid[i];
                }
            }
            stack.push(Panel { lo: clo, hi: chi });
        }
    }
    Ok(acc.value())
}

fn check_k(gamma: &MultiIndexSet) -> Result<()> {
    if gamma.k() > 3 {
        return Err(Error::invalid("oscillatory integrals are supported for k <= 3"));
    }
    Ok(())
}

/// `Φ_N(ξ) = ∫_{[0,1]^k} e(⟨ξ, Q(Ny)⟩) dy`, accurate to about [`PHI_TOL`].
pub fn phi(xi: &[f64], n: f64, gamma: &MultiIndexSet) -> Result<Complex64> {
    check_xi(xi, gamma)?;
    check_k(gamma)?;
    if !(n > 0.0) {
        return Err(Error::invalid("N must be positive"));
    }
    let eta: Vec<f64> = gamma.iter().zip(xi).map(|(g, &x)| x * n.powi(g.iter().sum::<u32>() as i32)).collect();
    let k = gamma.k();
    let f = |y: &[f64]| -> Complex64 {
        let ph: f64 = gamma.iter().zip(&eta).map(|(g, &h)| h * monomial(y, g)).sum();
        e(ph)
    };
    let split = |lo: &[f64], hi: &[f64]| phase_variation(&eta, gamma, lo, hi) > std::f64::consts::FRAC_PI_4;
    box_integrate(vec![0.0; k], vec![1.0; k], &f, &split, &|_, _| false, PHI_TOL)
}

/// `Φ_j(ξ) = ∫_{R^k} e(⟨ξ, Q(y)⟩) K_j(y) dy`.
pub fn phi_piece(xi: &[f64], piece: &DyadicKernelPiece, gamma: &MultiIndexSet) -> Result<Complex64> {
    check_xi(xi, gamma)?;
    check_k(gamma)?;
    if piece.dim() != gamma.k() {
        return Err(Error::DimensionMismatch { expected: gamma.k(), got: piece.dim() });
    }
    let k = gamma.k();
    let (r_in, r_out) = piece.support();
    let f = |y: &[f64]| -> Complex64 {
        let ph: f64 = gamma.iter().zip(xi).map(|(g, &h)| h * monomial(y, g)).sum();
        e(ph) * piece.eval_at(y)
    };
    let max_width = r_out / 16.0;
    let split = |lo: &[f64], hi: &[f64]| {
        lo.iter().zip(hi).any(|(a, b)| b - a > max_width)
            || phase_variation(xi, gamma, lo, hi) > std::f64::consts::FRAC_PI_4
    };
    let skip = |lo: &[f64], hi: &[f64]| {
        let near: f64 = lo
            .iter()
            .zip(hi)
            .map(|(a, b)| if *a > 0.0 { *a } else if *b < 0.0 { -*b } else { 0.0 })
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        let far: f64 = lo.iter().zip(hi).map(|(a, b)| a.abs().max(b.abs()).powi(2)).sum::<f64>().sqrt();
        near >= r_out || far <= r_in
    };
    // scale the tolerance by the kernel's natural size 2^{-jk}
    let tol = PHI_TOL * r_out.powi(-(k as i32)).min(1.0);
    box_integrate(vec![-r_out; k], vec![r_out; k], &f, &split, &skip, tol)
}

/// `Ψ_n(ξ) = Σ_{j=0}^n Φ_j(ξ)`.
pub fn psi(xi: &[f64], pieces: &[DyadicKernelPiece], n: usize, gamma: &MultiIndexSet) -> Result<Complex64> {
    if n >= pieces.len() {
        return Err(Error::invalid(format!("n={n} but only {} pieces", pieces.len())));
    }
    pieces[..=n].iter().map(|p| phi_piece(xi, p, gamma)).sum()
}

/// Preconditions of the major-arc approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxWindow {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub n: u64,
    pub q: u64,
    /// `|m_N(ξ) − G(a/q) Φ_N(ξ − a/q)|`.
    pub error: f64,
    /// `L2·L3/N`.
    pub bound_shape: f64,
    pub gauss: Complex64,
    pub multiplier: Complex64,
    pub phi: Complex64,
}

/// `θ = ξ − a/q` reduced coordinatewise to `[−1/2, 1/2)`.
pub fn offset_from(xi: &[f64], a: &RationalPoint) -> Vec<f64> {
    xi.iter()
        .zip(a.numerators())
        .map(|(&x, &num)| centered_frac(x - num as f64 / a.q() as f64))
        .collect()
}

/// Checks whether `(a, ξ, N)` lies inside the window of the approximation.
pub fn approx_preconditions(a: &RationalPoint, xi: &[f64], n: u64, gamma: &MultiIndexSet, w: &ApproxWindow) -> Result<()> {
    let theta = offset_from(xi, a);
    let q = a.q() as f64;
    if !(w.l1 >= n as f64) || !(w.l2 >= 1.0) {
        return Err(Error::pre(format!("need L1 >= N and L2 >= 1, got L1={}, L2={}", w.l1, w.l2)));
    }
    if !(q <= w.l3 && w.l3 <= (n as f64).sqrt()) {
        return Err(Error::pre(format!("need q <= L3 <= N^(1/2), got q={q}, L3={}, N={n}", w.l3)));
    }
    for (g, t) in gamma.iter().zip(&theta) {
        let ord: u32 = g.iter().sum();
        let lim = w.l1.powi(-(ord as i32)) * w.l2;
        if t.abs() > lim {
            return Err(Error::pre(format!("|ξ_γ − a_γ/q| = {} exceeds {lim} at γ={g:?}", t.abs())));
        }
    }
    Ok(())
}

pub fn approx_error(
    a: &RationalPoint,
    xi: &[f64],
    n: u64,
    gamma: &MultiIndexSet,
    window: &ApproxWindow,
) -> Result<ApproxReport> {
    check_xi(xi, gamma)?;
    if a.dim() != gamma.len() {
        return Err(Error::DimensionMismatch { expected: gamma.len(), got: a.dim() });
    }
    approx_preconditions(a, xi, n, gamma, window)?;
    let theta = offset_from(xi, a);
    let g = gauss_sum(a, gamma)?;
    let m = multiplier_m(xi, n, gamma)?;
    let ph = phi(&theta, n as f64, gamma)?;
    Ok(ApproxReport {
        n,
        q: a.q(),
        error: (m - g * ph).norm(),
        bound_shape: window.l2 * window.l3 / n as f64,
        gauss: g,
        multiplier: m,
        phi: ph,
    })
}

/// `|m_j(ξ) − G(a/q) Φ_j(ξ − a/q)|` for a kernel piece.
pub fn approx_error_piece(a: &RationalPoint, xi: &[f64], piece: &DyadicKernelPiece, gamma: &MultiIndexSet) -> Result<f64> {
    let theta = offset_from(xi, a);
    let g = gauss_sum(a, gamma)?;
    Ok((multiplier_m_piece(xi, piece, gamma)? - g * phi_piece(&theta, piece, gamma)?).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayKind {
    /// `|Φ_N| / min{1, ‖N^Aξ‖^{−1/d}}`.
    PhiN,
    /// `|Φ_N − 1| / min{1, ‖N^Aξ‖}`.
    PhiNMinusOne,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Largest ratio over the grid.
    pub constant: f64,
    pub worst_xi: Vec<f64>,
    pub evaluated: usize,
    /// Points skipped because both sides vanish.
    pub excluded: usize,
}

fn scaled_norm(xi: &[f64], t: f64, gamma: &MultiIndexSet) -> f64 {
    gamma
        .iter()
        .zip(xi)
        .map(|(g, &x)| (x * t.powi(g.iter().sum::<u32>() as i32)).abs())
        .fold(0.0, f64::max)
}

fn fit(grid: &[Vec<f64>], mut ratio: impl FnMut(&[f64]) -> Result<Option<f64>>) -> Result<DecayFit> {
    let mut out = DecayFit { constant: 0.0, worst_xi: Vec::new(), evaluated: 0, excluded: 0 };
    for xi in grid {
        match ratio(xi)? {
            Some(r) => {
                out.evaluated += 1;
                if r > out.constant || out.worst_xi.is_empty() {
                    out.constant = out.constant.max(r);
                    out.worst_xi = xi.clone();
                }
            }
            None => out.excluded += 1,
        }
    }
    Ok(out)
}

/// van der Corput fitted constant for `Φ_N` over a grid of frequencies.
pub fn decay_check(kind: DecayKind, grid: &[Vec<f64>], n: u64, gamma: &MultiIndexSet) -> Result<DecayFit> {
    let d = gamma.len() as f64;
    fit(grid, |xi| {
        let s = scaled_norm(xi, n as f64, gamma);
        let v = phi(xi, n as f64, gamma)?;
        Ok(match kind {
            DecayKind::PhiN => Some(v.norm() / 1f64.min(s.powf(-1.0 / d))),
            DecayKind::PhiNMinusOne => (s > 0.0).then(|| (v - 1.0).norm() / s.min(1.0)),
        })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceDecayFit {
    pub j: u32,
    /// Against `min{1, ‖2^{jA}ξ‖^{−1/d}}`.
    pub decay: DecayFit,
    /// Against `min{1, ‖2^{jA}ξ‖}`; only for mean-zero pieces.
    pub small_frequency: Option<DecayFit>,
}

pub fn decay_check_piece(grid: &[Vec<f64>], piece: &DyadicKernelPiece, gamma: &MultiIndexSet) -> Result<PieceDecayFit> {
    let d = gamma.len() as f64;
    let t = 2f64.powi(piece.index() as i32);
    let values: Vec<(f64, f64)> = grid
        .iter()
        .map(|xi| Ok((scaled_norm(xi, t, gamma), phi_piece(xi, piece, gamma)?.norm())))
        .collect::<Result<_>>()?;
    let mut it = values.iter();
    let decay = fit(grid, |_| {
        let (s, v) = it.next().expect("one value per grid point");
        Ok(Some(v / 1f64.min(s.powf(-1.0 / d))))
    })?;
    let small_frequency = if piece.mean_zero() {
        let mut it = values.iter();
        Some(fit(grid, |_| {
            let (s, v) = it.next().expect("one value per grid point");
            Ok((*s > 0.0).then(|| v / s.min(1.0)))
        })?)
    } else {
        None
    };
    Ok(PieceDecayFit { j: piece.index(), decay, small_frequency })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplier_at_zero_and_symmetry() {
        let g = MultiIndexSet::new(1, 2).unwrap();
        assert!((multiplier_m(&[0.0, 0.0], 9, &g).unwrap() - 1.0).norm() < 1e-15);
        let xi = [0.123, -0.377];
        let m = multiplier_m(&xi, 20, &g).unwrap();
        let mm = multiplier_m(&[-0.123, 0.377], 20, &g).unwrap();
        assert!((m - mm.conj()).norm() < 1e-12);
        assert!(m.norm() <= 1.0);
    }

    #[test]
    fn phi_linear_closed_form() {
        let g = MultiIndexSet::new(1, 1).unwrap();
        for &x in &[0.0, 0.01, 0.3, -0.47] {
            let n = 16.0;
            let eta: f64 = x * n;
            let exact = if eta == 0.0 { Complex64::new(1.0, 0.0) } else { (e(eta) - 1.0) / Complex64::new(0.0, std::f64::consts::TAU * eta) };
            assert!((phi(&[x], n, &g).unwrap() - exact).norm() < 1e-10);
        }
    }

    #[test]
    fn offset_is_centered() {
        let a = RationalPoint::new(vec![1], 2).unwrap();
        let t = offset_from(&[0.5 + 1.0 / 64.0], &a);
        assert!((t[0] - 1.0 / 64.0).abs() < 1e-16);
    }
}
