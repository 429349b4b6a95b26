//! Calderón–Zygmund kernels, their smooth dyadic decomposition and the
//! discrete averaging kernel `K_N = N^{-k} Σ_{y ∈ [1,N]^k} δ_{Q(y)}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{canonical_eval_i64, LatticeFunction, MultiIndexSet, Point};
use crate::quadrature::{annulus_integral, integrate, sphere_area};

/// Absolute accuracy of the annulus integrals.
pub const ANNULUS_TOL: f64 = 1e-10;

/// A kernel on `R^k \ {0}`.
pub trait CzKernel: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, y: &[f64]) -> Complex64;
    /// Analytic gradient, when known. Finite differences are used otherwise.
    fn gradient(&self, _y: &[f64]) -> Option<Vec<Complex64>> {
        None
    }
    /// Claimed constant in the size/gradient and cancellation conditions.
    fn cz_constant(&self) -> f64;
    fn name(&self) -> String;
}

impl fmt::Debug for dyn CzKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CzKernel({}, k={})", self.name(), self.dim())
    }
}

fn norm(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Gradient of `K` at `y`: analytic if provided, else central differences.
pub fn kernel_gradient(k: &dyn CzKernel, y: &[f64]) -> Vec<Complex64> {
    if let Some(g) = k.gradient(y) {
        return g;
    }
    let h = 1e-5 * norm(y).max(1.0);
    let mut yp = y.to_vec();
    (0..y.len())
        .map(|i| {
            yp[i] = y[i] + h;
            let fp = k.eval(&yp);
            yp[i] = y[i] - h;
            let fm = k.eval(&yp);
            yp[i] = y[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// The Hilbert kernel `1/y` on `R`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Hilbert;

impl CzKernel for Hilbert {
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, y: &[f64]) -> Complex64 {
        Complex64::new(1.0 / y[0], 0.0)
    }
    fn gradient(&self, y: &[f64]) -> Option<Vec<Complex64>> {
        Some(vec![Complex64::new(-1.0 / (y[0] * y[0]), 0.0)])
    }
    fn cz_constant(&self) -> f64 {
        2.0
    }
    fn name(&self) -> String {
        "hilbert".into()
    }
}

/// The Riesz kernel `y_i / |y|^{k+1}` on `R^k` (component `i` is 0-based here).
#[derive(Debug, Clone, Copy)]
pub struct Riesz {
    pub component: usize,
    pub k: usize,
}

impl CzKernel for Riesz {
    fn dim(&self) -> usize {
        self.k
    }
    fn eval(&self, y: &[f64]) -> Complex64 {
        let r = norm(y);
        Complex64::new(y[self.component] / r.powi(self.k as i32 + 1), 0.0)
    }
    fn gradient(&self, y: &[f64]) -> Option<Vec<Complex64>> {
        let r = norm(y);
        let k = self.k as i32;
        let yi = y[self.component];
        Some(
            (0..self.k)
                .map(|j| {
                    let mut g = -((k + 1) as f64) * yi * y[j] / r.powi(k + 3);
                    if j == self.component {
                        g += 1.0 / r.powi(k + 1);
                    }
                    Complex64::new(g, 0.0)
                })
                .collect(),
        )
    }
    fn cz_constant(&self) -> f64 {
        // |y|^k|K| <= 1 and |y|^{k+1}|∇K| = (1 + (k²-1)cos²)^{1/2} <= k
        self.k as f64 + 1.0
    }
    fn name(&self) -> String {
        format!("riesz-{}", self.component + 1)
    }
}

type KernelFn = Box<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// A kernel given by a closure; the library-only route to custom kernels.
pub struct FnKernel {
    k: usize,
    constant: f64,
    name: String,
    f: KernelFn,
}

impl FnKernel {
    pub fn new(
        k: usize,
        constant: f64,
        name: impl Into<String>,
        f: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { k, constant, name: name.into(), f: Box::new(f) }
    }
}

impl CzKernel for FnKernel {
    fn dim(&self) -> usize {
        self.k
    }
    fn eval(&self, y: &[f64]) -> Complex64 {
        (self.f)(y)
    }
    fn cz_constant(&self) -> f64 {
        self.constant
    }
    fn name(&self) -> String {
        self.name.clone()
    }
}

/// Built-in kernels by CLI name: `hilbert` or `riesz-<i>` (1-based `i`).
pub fn kernel_by_name(name: &str, k: usize) -> Result<Arc<dyn CzKernel>> {
    if name == "hilbert" {
        if k != 1 {
            return Err(Error::invalid(format!("the Hilbert kernel lives on R^1, not R^{k}")));
        }
        return Ok(Arc::new(Hilbert));
    }
    if let Some(i) = name.strip_prefix("riesz-") {
        let i: usize = i.parse().map_err(|_| Error::invalid(format!("bad Riesz index in {name:?}")))?;
        if i == 0 || i > k {
            return Err(Error::invalid(format!("Riesz index {i} out of range for k={k}")));
        }
        return Ok(Arc::new(Riesz { component: i - 1, k }));
    }
    Err(Error::invalid(format!("unknown kernel {name:?} (expected hilbert or riesz-<i>)")))
}

/// Outcome of [`cz_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct CzReport {
    /// `max |y|^k|K(y)| + |y|^{k+1}|∇K(y)|` over the samples.
    pub worst_size_ratio: f64,
    /// `max_λ |∫_{1≤|y|≤λ} K|`.
    pub worst_cancellation: f64,
    /// Cancellation integral at every λ of the grid, in grid order.
    pub cancellation: Vec<(f64, f64)>,
    pub size_ok: bool,
    pub cancellation_ok: bool,
}

impl CzReport {
    pub fn passed(&self) -> bool {
        self.size_ok && self.cancellation_ok
    }
}

fn sample_directions(k: usize) -> Vec<Vec<f64>> {
    use std::f64::consts::PI;
    match k {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..24).map(|i| {
            let t = 2.0 * PI * (i as f64 + 0.13) / 24.0;
            vec![t.cos(), t.sin()]
        }).collect(),
        _ => {
            // Fibonacci sphere in the first three coordinates
            let n = 64;
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                    let s = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    let mut v = vec![0.0; k];
                    v[0] = s * t.cos();
                    v[1] = s * t.sin();
                    v[2] = z;
                    v
                })
                .collect()
        }
    }
}

/// Size ratio `|y|^k|K| + |y|^{k+1}|∇K|` at a single point.
pub fn size_ratio_at(kernel: &dyn CzKernel, y: &[f64]) -> Result<f64> {
    let k = kernel.dim() as i32;
    let r = norm(y);
    let v = kernel.eval(y);
    let g = kernel_gradient(kernel, y);
    let gn = g.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let ratio = r.powi(k) * v.norm() + r.powi(k + 1) * gn;
    if !ratio.is_finite() {
        return Err(Error::Evaluation(format!("{y:?}")));
    }
    Ok(ratio)
}

/// Largest sampled size ratio over radii in `[r_min, r_max]` (log-spaced).
pub fn sampled_size_ratio(kernel: &dyn CzKernel, radial_samples: usize, r_min: f64, r_max: f64) -> Result<f64> {
    let dirs = sample_directions(kernel.dim());
    let n = radial_samples.max(2);
    let (lo, hi) = (r_min.ln(), r_max.ln());
    let mut worst = 0.0f64;
    for i in 0..n {
        let r = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
        for d in &dirs {
            let y: Vec<f64> = d.iter().map(|c| c * r).collect();
            worst = worst.max(size_ratio_at(kernel, &y)?);
        }
    }
    Ok(worst)
}

/// Empirical check of the size/gradient bound and of the cancellation
/// condition, both against the kernel's claimed constant.
pub fn cz_check(kernel: &dyn CzKernel, radial_samples: usize, lambda_grid: &[f64]) -> Result<CzReport> {
    if radial_samples == 0 {
        return Err(Error::invalid("need at least one radial sample"));
    }
    if lambda_grid.iter().any(|&l| !(l >= 1.0) || !l.is_finite()) {
        return Err(Error::invalid("every λ must be a finite real >= 1"));
    }
    let r_max = lambda_grid.iter().copied().fold(1024.0, f64::max);
    let worst_size_ratio = sampled_size_ratio(kernel, radial_samples, 1.0, r_max)?;

    let mut sorted: Vec<(usize, f64)> = lambda_grid.iter().copied().enumerate().collect();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1));
    let k = kernel.dim();
    let f = |y: &[f64]| kernel.eval(y);
    let mut acc = Complex64::default();
    let mut last = 1.0;
    let mut values = vec![0.0; lambda_grid.len()];
    for (idx, lam) in sorted {
        if lam > last {
            let (v, _) = annulus_integral(k, &f, last, lam, ANNULUS_TOL)?;
            acc += v;
            last = lam;
        }
        if !acc.re.is_finite() || !acc.im.is_finite() {
            return Err(Error::Evaluation(format!("annulus up to λ={lam}")));
        }
        values[idx] = acc.norm();
    }
    let worst_cancellation = values.iter().copied().fold(0.0, f64::max);
    let c = kernel.cz_constant();
    Ok(CzReport {
        worst_size_ratio,
        worst_cancellation,
        cancellation: lambda_grid.iter().copied().zip(values).collect(),
        size_ok: worst_size_ratio <= c * (1.0 + 1e-9),
        cancellation_ok: worst_cancellation <= c * (1.0 + 1e-9),
    })
}

fn mollifier(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth step: 1 on `[0, 1/2]`, 0 on `[1, ∞)`.
pub fn smooth_step(r: f64) -> f64 {
    if r <= 0.5 {
        return 1.0;
    }
    if r >= 1.0 {
        return 0.0;
    }
    let a = mollifier(1.0 - r);
    let b = mollifier(r - 0.5);
    a / (a + b)
}

/// `ψ_j(y) = σ(|y|/2^j) − σ(|y|/2^{j−1})`, supported in `2^{j−2} ≤ |y| ≤ 2^j`.
/// The sum over `j ≤ J` equals 1 on `1/2 ≤ |y| ≤ 2^{J−1}`.
pub fn dyadic_cutoff(j: u32, r: f64) -> f64 {
    let s = 2f64.powi(j as i32);
    smooth_step(r / s) - smooth_step(2.0 * r / s)
}

fn shell_bump(r: f64) -> f64 {
    if r <= 0.5 || r >= 1.0 {
        0.0
    } else {
        (-1.0 / (r - 0.5) - 1.0 / (1.0 - r)).exp()
    }
}

/// `∫_{1/2}^{1} b(r) r^{k-1} dr` for the radial bump `b`.
fn shell_bump_moment(k: usize) -> f64 {
    static CACHE: OnceLock<[f64; 4]> = OnceLock::new();
    let table = CACHE.get_or_init(|| {
        let mut t = [0.0; 4];
        for (kk, slot) in t.iter_mut().enumerate().skip(1) {
            let f = |r: f64| Complex64::new(shell_bump(r) * r.powi(kk as i32 - 1), 0.0);
            *slot = integrate(&f, 0.5, 1.0, 1e-15).expect("smooth bump integrates").0.re;
        }
        t
    });
    table[k]
}

/// Radial bump with unit integral, supported in `2^{j−1} < |y| < 2^j`.
fn unit_bump(k: usize, j: u32, r: f64) -> f64 {
    let s = 2f64.powi(j as i32);
    shell_bump(r / s) / (s.powi(k as i32) * sphere_area(k) * shell_bump_moment(k))
}

/// The piece `K_j` of the dyadic decomposition `K = Σ_j K_j`.
///
/// `K_j = K·ψ_j + T_{j−1}B_{j−1} − T_j B_j` where `T_j = Σ_{1≤i≤j} ∫K·ψ_i`
/// and `B_j` is a unit-mass bump on `2^{j−1} < |y| < 2^j`. The corrections
/// telescope, so partial sums still reproduce `K`, and every piece with
/// `j ≥ 1` has integral zero.
#[derive(Clone)]
pub struct DyadicKernelPiece {
    j: u32,
    parent: Arc<dyn CzKernel>,
    carry_in: Complex64,
    carry_out: Complex64,
}

impl fmt::Debug for DyadicKernelPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DyadicKernelPiece")
            .field("j", &self.j)
            .field("parent", &self.parent.name())
            .field("carry_in", &self.carry_in)
            .field("carry_out", &self.carry_out)
            .finish()
    }
}

impl DyadicKernelPiece {
    pub fn index(&self) -> u32 {
        self.j
    }

    pub fn mean_zero(&self) -> bool {
        self.j >= 1
    }

    /// Support annulus `[2^{j−2}, 2^j]`.
    pub fn support(&self) -> (f64, f64) {
        (2f64.powi(self.j as i32 - 2), 2f64.powi(self.j as i32))
    }

    pub fn parent(&self) -> &Arc<dyn CzKernel> {
        &self.parent
    }

    pub fn eval_at(&self, y: &[f64]) -> Complex64 {
        let r = norm(y);
        let (lo, hi) = self.support();
        if r <= lo || r >= hi {
            return Complex64::default();
        }
        let k = self.parent.dim();
        let mut v = self.parent.eval(y) * dyadic_cutoff(self.j, r);
        if self.j >= 1 {
            v -= self.carry_out * unit_bump(k, self.j, r);
        }
        if self.j >= 2 {
            v += self.carry_in * unit_bump(k, self.j - 1, r);
        }
        v
    }

    /// Lattice points of the support, in lexicographic order.
    pub fn lattice_support(&self) -> Vec<Point> {
        let k = self.parent.dim();
        let (lo, hi) = self.support();
        let m = hi.floor() as i64;
        let mut out = Vec::new();
        let mut cur = vec![-m; k];
        loop {
            let r = cur.iter().map(|&c| (c * c) as f64).sum::<f64>().sqrt();
            if r > lo && r < hi {
                out.push(cur.clone());
            }
            let mut pos = k;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if cur[pos] < m {
                    cur[pos] += 1;
                    for c in cur.iter_mut().skip(pos + 1) {
                        *c = -m;
                    }
                    break;
                }
            }
        }
    }

    /// `∫ K_j` by quadrature over the support annulus.
    pub fn integral(&self) -> Result<Complex64> {
        let (lo, hi) = self.support();
        let f = |y: &[f64]| self.eval_at(y);
        Ok(annulus_integral(self.parent.dim(), &f, lo, hi, ANNULUS_TOL)?.0)
    }
}

impl CzKernel for DyadicKernelPiece {
    fn dim(&self) -> usize {
        self.parent.dim()
    }
    fn eval(&self, y: &[f64]) -> Complex64 {
        self.eval_at(y)
    }
    fn cz_constant(&self) -> f64 {
        self.parent.cz_constant()
    }
    fn name(&self) -> String {
        format!("{}[j={}]", self.parent.name(), self.j)
    }
}

/// Splits `K` into pieces `K_0, …, K_jmax`.
pub fn dyadic_decompose_kernel(kernel: Arc<dyn CzKernel>, jmax: u32) -> Result<Vec<DyadicKernelPiece>> {
    if jmax < 1 {
        return Err(Error::invalid("jmax must be at least 1"));
    }
    let k = kernel.dim();
    if !(1..=3).contains(&k) {
        return Err(Error::invalid(format!("dyadic decomposition supports k <= 3, got {k}")));
    }
    let mut pieces = Vec::with_capacity(jmax as usize + 1);
    let mut running = Complex64::default();
    for j in 0..=jmax {
        let carry_in = running;
        if j >= 1 {
            let lo = 2f64.powi(j as i32 - 2);
            let hi = 2f64.powi(j as i32);
            let f = |y: &[f64]| kernel.eval(y) * dyadic_cutoff(j, norm(y));
            running += annulus_integral(k, &f, lo, hi, ANNULUS_TOL)?.0;
        }
        pieces.push(DyadicKernelPiece { j, parent: kernel.clone(), carry_in, carry_out: running });
    }
    Ok(pieces)
}

/// `K_N` for the canonical mapping, with exact integer multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragingKernel {
    n: u64,
    gamma: MultiIndexSet,
    counts: BTreeMap<Point, u64>,
}

impl AveragingKernel {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn gamma(&self) -> &MultiIndexSet {
        &self.gamma
    }

    /// Multiplicity of each support point; masses are `count / N^k`.
    pub fn counts(&self) -> &BTreeMap<Point, u64> {
        &self.counts
    }

    /// `N^k`, the common denominator of every mass.
    pub fn denominator(&self) -> u64 {
        self.n.pow(self.gamma.k() as u32)
    }

    /// Total mass as an exact fraction `(Σ counts, N^k)`.
    pub fn total_mass(&self) -> (u64, u64) {
        (self.counts.values().sum(), self.denominator())
    }

    pub fn to_lattice_function(&self) -> LatticeFunction {
        let den = self.denominator() as f64;
        let pairs = self.counts.iter().map(|(p, &c)| (p.clone(), Complex64::new(c as f64 / den, 0.0)));
        LatticeFunction::from_pairs(self.gamma.len(), pairs).expect("points of dimension d")
    }
}

/// Iterates `[1, n]^k` in lexicographic order.
pub(crate) fn for_each_in_box(k: usize, lo: i64, hi: i64, mut f: impl FnMut(&[i64]) -> Result<()>) -> Result<()> {
    if lo > hi {
        return Ok(());
    }
    let mut cur = vec![lo; k];
    loop {
        f(&cur)?;
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            if cur[pos] < hi {
                cur[pos] += 1;
                for c in cur.iter_mut().skip(pos + 1) {
                    *c = lo;
                }
                break;
            }
        }
    }
}

pub fn averaging_kernel(n: u64, gamma: &MultiIndexSet) -> Result<AveragingKernel> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    n.checked_pow(gamma.k() as u32)
        .ok_or_else(|| Error::BudgetExceeded(format!("N^k for N={n}")))?;
    let mut counts: BTreeMap<Point, u64> = BTreeMap::new();
    for_each_in_box(gamma.k(), 1, n as i64, |y| {
        *counts.entry(canonical_eval_i64(y, gamma)?).or_default() += 1;
        Ok(())
    })?;
    Ok(AveragingKernel { n, gamma: gamma.clone(), counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hilbert_cz_check() {
        let grid = [1.0, 2.0, 10.0, 1e3, 1e6];
        let rep = cz_check(&Hilbert, 50, &grid).unwrap();
        assert!((rep.worst_size_ratio - 2.0).abs() < 1e-12);
        assert_eq!(rep.worst_cancellation, 0.0);
        assert!(rep.passed());
    }

    #[test]
    fn even_kernel_fails_cancellation() {
        let k = FnKernel::new(1, 2.0, "abs-inverse", |y| Complex64::new(1.0 / y[0].abs(), 0.0));
        let lam = 10f64.exp();
        let rep = cz_check(&k, 20, &[lam]).unwrap();
        assert!((rep.worst_cancellation - 20.0).abs() < 1e-8, "{}", rep.worst_cancellation);
        assert!(!rep.cancellation_ok);
    }

    #[test]
    fn riesz_in_the_plane() {
        let k = Riesz { component: 0, k: 2 };
        let rep = cz_check(&k, 30, &[1.0, 4.0, 100.0]).unwrap();
        assert_eq!(rep.worst_cancellation, 0.0);
        assert!(rep.worst_size_ratio <= 3.0 + 1e-12);
        assert!(rep.worst_size_ratio > 2.5);
        assert!(rep.passed());
    }

    #[test]
    fn kernel_names() {
        assert_eq!(kernel_by_name("hilbert", 1).unwrap().name(), "hilbert");
        assert_eq!(kernel_by_name("riesz-2", 3).unwrap().name(), "riesz-2");
        assert!(kernel_by_name("hilbert", 2).is_err());
        assert!(kernel_by_name("riesz-3", 2).is_err());
        assert!(kernel_by_name("gauss", 1).is_err());
    }

    #[test]
    fn partition_of_unity_telescopes() {
        for &r in &[0.5, 0.7, 1.0, 3.3, 17.0, 63.9, 64.0] {
            let s: f64 = (0..=7).map(|j| dyadic_cutoff(j, r)).sum();
            assert!((s - 1.0).abs() < 1e-15, "r={r}: {s}");
        }
        assert!(dyadic_cutoff(3, 1.99) == 0.0 && dyadic_cutoff(3, 8.01) == 0.0);
    }

    #[test]
    fn decomposition_rejects_jmax_zero() {
        assert!(dyadic_decompose_kernel(Arc::new(Hilbert), 0).is_err());
    }

    #[test]
    fn averaging_kernel_examples() {
        let g = MultiIndexSet::new(1, 2).unwrap();
        let k1 = averaging_kernel(1, &g).unwrap();
        assert_eq!(k1.counts().iter().collect::<Vec<_>>(), vec![(&vec![1, 1], &1)]);
        let k2 = averaging_kernel(2, &g).unwrap();
        let f = k2.to_lattice_function();
        assert_eq!(f.get(&[1, 1]).re, 0.5);
        assert_eq!(f.get(&[2, 4]).re, 0.5);
        assert_eq!(f.len(), 2);
        assert!(averaging_kernel(0, &g).is_err());
    }

    #[test]
    fn averaging_kernel_mass_is_exactly_one() {
        for k in 1..=2usize {
            let g = MultiIndexSet::new(k, 2).unwrap();
            for n in 1..=50u64 {
                let ak = averaging_kernel(n, &g).unwrap();
                let (num, den) = ak.total_mass();
                assert_eq!(num, den);
                // Q contains every coordinate, so it is injective
                assert_eq!(ak.counts().len() as u64, den);
            }
        }
    }
}
