//! Weyl sums over lattice points of convex regions and the log-decay
//! experiment on minor-arc phases.

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::phase::{e, frac_mul, frac_mul_bigint, CompensatedSum};
use crate::error::{Error, Result};
use crate::geometry::{scan_lattice, ConvexBody};
use crate::lattice::monomial_mod;
use crate::numtheory::next_prime;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PhaseCoefficients {
    Real { xi: Vec<f64> },
    /// `ξ_γ = a_γ / q`, reduced modulo `q` exactly.
    Rational { a: Vec<i64>, q: u64 },
}

/// `P(n) = Σ_γ ξ_γ n^γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylPhase {
    k: usize,
    exps: Vec<Vec<u32>>,
    coeffs: PhaseCoefficients,
}

fn check_exps(k: usize, exps: &[Vec<u32>]) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    for g in exps {
        if g.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: g.len() });
        }
        if g.iter().all(|&v| v == 0) {
            return Err(Error::invalid("the zero multi-index carries no phase"));
        }
    }
    Ok(())
}

impl WeylPhase {
    pub fn real(k: usize, terms: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        let (exps, xi): (Vec<_>, Vec<_>) = terms.into_iter().unzip();
        check_exps(k, &exps)?;
        if xi.iter().any(|x: &f64| !x.is_finite()) {
            return Err(Error::invalid("phase coefficients must be finite"));
        }
        Ok(Self { k, exps, coeffs: PhaseCoefficients::Real { xi } })
    }

    pub fn rational(k: usize, terms: Vec<(Vec<u32>, i64)>, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("denominator must be at least 1"));
        }
        let (exps, a): (Vec<_>, Vec<_>) = terms.into_iter().unzip();
        check_exps(k, &exps)?;
        Ok(Self { k, exps, coeffs: PhaseCoefficients::Rational { a, q } })
    }

    pub fn zero(k: usize) -> Result<Self> {
        Self::real(k, Vec::new())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coefficients(&self) -> &PhaseCoefficients {
        &self.coeffs
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exps
    }

    /// Largest total degree present.
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|g| g.iter().sum()).max().unwrap_or(0)
    }

    /// The phase `−P`.
    pub fn negated(&self) -> Self {
        let coeffs = match &self.coeffs {
            PhaseCoefficients::Real { xi } => PhaseCoefficients::Real { xi: xi.iter().map(|x| -x).collect() },
            PhaseCoefficients::Rational { a, q } => PhaseCoefficients::Rational { a: a.iter().map(|x| -x).collect(), q: *q },
        };
        Self { k: self.k, exps: self.exps.clone(), coeffs }
    }

    /// `P(n) mod 1` in `[0, 1)`.
    pub fn eval_mod1(&self, n: &[i64]) -> Result<f64> {
        if n.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: n.len() });
        }
        match &self.coeffs {
            PhaseCoefficients::Real { xi } => {
                let mut s = 0.0;
                for (g, &x) in self.exps.iter().zip(xi) {
                    s += match monomial_i128(n, g) {
                        Some(v) => frac_mul(x, v),
                        None => frac_mul_bigint(x, &monomial_big(n, g)),
                    };
                }
                Ok(s - s.floor())
            }
            PhaseCoefficients::Rational { a, q } => {
                let qi = *q as i128;
                let y: Vec<u64> = n.iter().map(|&v| (v as i128).rem_euclid(qi) as u64).collect();
                let mut acc: i128 = 0;
                for (g, &c) in self.exps.iter().zip(a) {
                    let m = monomial_mod(&y, g, *q) as i128;
                    acc = (acc + (c as i128).rem_euclid(qi) * m) % qi;
                }
                Ok(acc as f64 / *q as f64)
            }
        }
    }
}

fn monomial_i128(n: &[i64], g: &[u32]) -> Option<i128> {
    let mut acc: i128 = 1;
    for (&v, &p) in n.iter().zip(g) {
        acc = acc.checked_mul((v as i128).checked_pow(p)?)?;
    }
    Some(acc)
}

fn monomial_big(n: &[i64], g: &[u32]) -> BigInt {
    n.iter().zip(g).map(|(&v, &p)| BigInt::from(v).pow(p)).product()
}

/// Weight `φ` in `S_N = Σ e(P(n)) φ(n)`; `None` means `φ ≡ 1`.
pub type Weight<'a> = Option<&'a (dyn Fn(&[f64]) -> f64 + Sync)>;

/// `Σ_{n ∈ Ω ∩ Z^k} e(P(n)) φ(n)` with compensated summation. Slabs of the
/// scan are reduced in a fixed order, so the value does not depend on the
/// number of threads.
pub fn weyl_sum(phase: &WeylPhase, region: &ConvexBody, weight: Weight<'_>) -> Result<Complex64> {
    if region.dim() != phase.k() {
        return Err(Error::DimensionMismatch { expected: phase.k(), got: region.dim() });
    }
    let (acc, err) = scan_lattice(
        region,
        || (CompensatedSum::default(), None::<Error>),
        |acc, x, xf| {
            if acc.1.is_some() || !region.contains(xf) {
                return;
            }
            match phase.eval_mod1(x) {
                Ok(t) => {
                    let w = weight.map_or(1.0, |f| f(xf));
                    acc.0.add(e(t) * w);
                }
                Err(err) => acc.1 = Some(err),
            }
        },
        |a, b| (a.0.merge(b.0), a.1.or(b.1)),
    )?;
    match err {
        Some(err) => Err(err),
        None => Ok(acc.value()),
    }
}

/// A phase together with the rational approximation of its distinguished
/// coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuiltPhase {
    pub phase: WeylPhase,
    pub a: u64,
    pub q: u64,
    /// The `β` the builder aimed for.
    pub beta: f64,
}

pub trait PhaseBuilder: Sync {
    fn build(&self, n: u64) -> Result<BuiltPhase>;
    fn name(&self) -> String;
}

/// `k = 1`, `ξ₂ = 1/2 − 1/(2q)` with `q` the first prime above `(log N)^β`.
#[derive(Debug, Clone, Copy)]
pub struct MinorArcQuadratic {
    pub beta: f64,
}

impl PhaseBuilder for MinorArcQuadratic {
    fn build(&self, n: u64) -> Result<BuiltPhase> {
        if n < 3 {
            return Err(Error::invalid("N must be at least 3"));
        }
        let target = (n as f64).ln().powf(self.beta).ceil().max(3.0) as u64;
        let q = next_prime(target);
        let a = (q - 1) / 2;
        let phase = WeylPhase::rational(1, vec![(vec![2], a as i64)], q)?;
        Ok(BuiltPhase { phase, a, q, beta: self.beta })
    }

    fn name(&self) -> String {
        format!("minor-arc-quadratic(beta={})", self.beta)
    }
}

/// `k = 1`, `ξ₂ = a/q` fixed: a major-arc control.
#[derive(Debug, Clone, Copy)]
pub struct FixedQuadratic {
    pub a: u64,
    pub q: u64,
}

impl PhaseBuilder for FixedQuadratic {
    fn build(&self, _n: u64) -> Result<BuiltPhase> {
        Ok(BuiltPhase { phase: WeylPhase::rational(1, vec![(vec![2], self.a as i64)], self.q)?, a: self.a, q: self.q, beta: 0.0 })
    }

    fn name(&self) -> String {
        format!("fixed-quadratic({}/{})", self.a, self.q)
    }
}

/// `P ≡ 0` in dimension `k`.
#[derive(Debug, Clone, Copy)]
pub struct ZeroPhase {
    pub k: usize,
}

impl PhaseBuilder for ZeroPhase {
    fn build(&self, _n: u64) -> Result<BuiltPhase> {
        Ok(BuiltPhase { phase: WeylPhase::zero(self.k)?, a: 0, q: 1, beta: 0.0 })
    }

    fn name(&self) -> String {
        "zero".into()
    }
}

/// `(α+2)(2d²−2d+1)`.
pub fn beta_alpha(alpha: f64, d: u32) -> f64 {
    let d = d as f64;
    (alpha + 2.0) * (2.0 * d * d - 2.0 * d + 1.0)
}

/// Whether an integer `q` with `(log N)^β ≤ q ≤ N^{deg}(log N)^{−β}` exists.
pub fn log_window(n: u64, deg: u32, beta: f64) -> (f64, f64, bool) {
    let l = (n as f64).ln();
    let lo = l.powf(beta);
    let hi = (n as f64).powi(deg as i32) / lo;
    (lo, hi, lo.ceil() <= hi.floor())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylDecayRow {
    pub n: u64,
    pub q: u64,
    pub a: u64,
    pub abs_sum: f64,
    /// `|S_N| / N^k`.
    pub normalized: f64,
    /// `N^k (log N)^{−α}`.
    pub bound: f64,
    pub beta_alpha: f64,
    /// The window for `β_α` contains an integer.
    pub alpha_window_nonempty: bool,
    /// The builder's `q` lies in its own window.
    pub builder_window_ok: bool,
}

/// `S_N` over `[1, N]^k` along `ngrid`, compared with `N^k (log N)^{−α}`.
pub fn weyl_log_decay_experiment(
    gamma0: &[u32],
    alpha: f64,
    ngrid: &[u64],
    builder: &dyn PhaseBuilder,
) -> Result<Vec<WeylDecayRow>> {
    if gamma0.is_empty() || gamma0.iter().all(|&g| g == 0) {
        return Err(Error::invalid("γ0 must be a nonzero multi-index"));
    }
    if !(alpha > 0.0) {
        return Err(Error::invalid("α must be positive"));
    }
    let k = gamma0.len();
    let deg0: u32 = gamma0.iter().sum();
    ngrid
        .iter()
        .map(|&n| {
            if n < 3 {
                return Err(Error::invalid("every N must be at least 3"));
            }
            let built = builder.build(n)?;
            if built.phase.k() != k {
                return Err(Error::DimensionMismatch { expected: k, got: built.phase.k() });
            }
            let d = built.phase.degree().max(deg0);
            let ba = beta_alpha(alpha, d);
            let region = ConvexBody::axis_box(vec![1.0; k], vec![n as f64; k])?;
            let s = weyl_sum(&built.phase, &region, None)?.norm();
            let nk = (n as f64).powi(k as i32);
            let (lo, hi, _) = log_window(n, deg0, built.beta);
            Ok(WeylDecayRow {
                n,
                q: built.q,
                a: built.a,
                abs_sum: s,
                normalized: s / nk,
                bound: nk * (n as f64).ln().powf(-alpha),
                beta_alpha: ba,
                alpha_window_nonempty: log_window(n, deg0, ba).2,
                builder_window_ok: built.beta > 0.0 && lo <= built.q as f64 && built.q as f64 <= hi,
            })
        })
        .collect()
}
