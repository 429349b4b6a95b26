//! Points on the torus and phase reduction modulo 1.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::gcd;

/// Reduces to `[−1/2, 1/2)`.
pub fn centered_frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 0.5 {
        f - 1.0
    } else {
        f
    }
}

/// A point of `T^d`, coordinates in `[−1/2, 1/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint(Vec<f64>);

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("torus coordinates must be finite"));
        }
        Ok(Self(coords.into_iter().map(centered_frac).collect()))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// `a/q` with numerators in `[1, q]`; `a_γ = q` stands for the zero residue.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalPoint {
    a: Vec<u64>,
    q: u64,
}

impl RationalPoint {
    pub fn new(a: Vec<u64>, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("denominator must be at least 1"));
        }
        if let Some(bad) = a.iter().find(|&&x| x == 0 || x > q) {
            return Err(Error::invalid(format!("numerator {bad} outside [1, {q}]")));
        }
        Ok(Self { a, q })
    }

    /// Any integer numerators, reduced into `[1, q]`.
    pub fn from_residues(a: &[i64], q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::invalid("denominator must be at least 1"));
        }
        let qi = q as i128;
        Self::new(
            a.iter()
                .map(|&x| {
                    let r = (x as i128).rem_euclid(qi) as u64;
                    if r == 0 {
                        q
                    } else {
                        r
                    }
                })
                .collect(),
            q,
        )
    }

    pub fn numerators(&self) -> &[u64] {
        &self.a
    }

    /// Numerators as residues in `[0, q)`.
    pub fn residues(&self) -> Vec<u64> {
        self.a.iter().map(|&x| x % self.q).collect()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Membership in `A_q`: `gcd(q, gcd_γ a_γ) = 1`.
    pub fn in_aq(&self) -> bool {
        self.a.iter().fold(self.q, |g, &x| gcd(g, x)) == 1
    }

    pub fn to_torus(&self) -> TorusPoint {
        TorusPoint::new(self.a.iter().map(|&x| x as f64 / self.q as f64).collect()).expect("finite")
    }

    /// Exact `a/q` as `f64` tuple (not reduced).
    pub fn to_f64(&self) -> Vec<f64> {
        self.a.iter().map(|&x| x as f64 / self.q as f64).collect()
    }
}

/// `(m, e)` with `x = m · 2^e` exactly.
fn decompose(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
    (sign * m as i64, e)
}

/// `frac(x·n) ∈ [0, 1)` computed without rounding the product.
pub fn frac_mul(x: f64, n: i128) -> f64 {
    let (m, e) = decompose(x);
    if m == 0 || n == 0 || e >= 0 {
        return 0.0;
    }
    let shift = (-e) as u32;
    let scale = 2f64.powi(e);
    match (m as i128).checked_mul(n) {
        Some(prod) if shift <= 126 => {
            let r = prod.rem_euclid(1i128 << shift);
            (r as f64 * scale).min(1.0 - f64::EPSILON / 2.0)
        }
        Some(prod) => {
            // |prod| < 2^126 < 2^shift, so the product is already below 1
            let v = prod as f64 * scale;
            if v < 0.0 {
                (v + 1.0).min(1.0 - f64::EPSILON / 2.0)
            } else {
                v
            }
        }
        None => frac_mul_big(m, e, &BigInt::from(n)),
    }
}

fn frac_mul_big(m: i64, e: i32, n: &BigInt) -> f64 {
    let modulus = BigInt::from(1) << ((-e) as usize);
    let r = (BigInt::from(m) * n).mod_floor(&modulus);
    let r = r.to_f64().unwrap_or(0.0) * 2f64.powi(e.max(-1074));
    r.min(1.0 - f64::EPSILON / 2.0)
}

/// `frac(x·n)` for a big integer `n`.
pub fn frac_mul_bigint(x: f64, n: &BigInt) -> f64 {
    match n.to_i128() {
        Some(v) => frac_mul(x, v),
        None => {
            let (m, e) = decompose(x);
            if m == 0 || n.is_zero() || e >= 0 {
                0.0
            } else {
                frac_mul_big(m, e, n)
            }
        }
    }
}

/// `frac(Σ_i ξ_i n_i)`, each term reduced exactly before summing.
pub fn phase_dot(xi: &[f64], n: &[i128]) -> f64 {
    let s: f64 = xi.iter().zip(n).map(|(&x, &v)| frac_mul(x, v)).sum();
    s - s.floor()
}

/// `e(t) = exp(2πit)`.
pub fn e(t: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * t).sin_cos();
    Complex64::new(c, s)
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

fn two_sum(acc: &mut f64, comp: &mut f64, x: f64) {
    let t = *acc + x;
    if acc.abs() >= x.abs() {
        *comp += (*acc - t) + x;
    } else {
        *comp += (x - t) + *acc;
    }
    *acc = t;
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        two_sum(&mut self.sum.re, &mut self.comp.re, z.re);
        two_sum(&mut self.sum.im, &mut self.comp.im, z.im);
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.add(other.sum);
        self.add(other.comp);
        self
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// Table `e(j/q)`, `j ∈ [0, q)`.
pub fn root_table(q: u64) -> Vec<Complex64> {
    (0..q).map(|j| e(j as f64 / q as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_reduction() {
        let t = TorusPoint::new(vec![0.5, -0.5, 1.25, -0.75, 3.0]).unwrap();
        assert_eq!(t.coords(), &[-0.5, -0.5, 0.25, 0.25, 0.0]);
    }

    #[test]
    fn exact_fractional_products() {
        assert_eq!(frac_mul(0.5, 3), 0.5);
        assert_eq!(frac_mul(0.25, -1), 0.75);
        assert_eq!(frac_mul(2.0, 7), 0.0);
        // 0.1 is not exact, but frac(0.1 · 10^15) is computed from its bits
        let big = 1_000_000_000_000_000i128;
        let exact = (num_rational::BigRational::from_float(0.1).unwrap() * BigInt::from(big)).fract();
        assert!((frac_mul(0.1, big) - exact.to_f64().unwrap()).abs() < 1e-15);
        let huge = BigInt::from(3).pow(100);
        let exact = (num_rational::BigRational::from_float(0.3).unwrap() * &huge).fract();
        assert!((frac_mul_bigint(0.3, &huge) - exact.to_f64().unwrap()).abs() < 1e-15);
    }

    #[test]
    fn rational_points() {
        let r = RationalPoint::from_residues(&[0, 4, -1], 4).unwrap();
        assert_eq!(r.numerators(), &[4, 4, 3]);
        assert!(r.in_aq());
        assert!(!RationalPoint::new(vec![2, 4], 4).unwrap().in_aq());
        assert!(RationalPoint::new(vec![0], 4).is_err());
        assert!(RationalPoint::new(vec![1], 1).unwrap().in_aq());
    }

    #[test]
    fn compensation_recovers_cancellation() {
        let mut s = CompensatedSum::default();
        for z in [1e16, 1.0, -1e16, 1.0] {
            s.add(Complex64::new(z, 0.0));
        }
        assert_eq!(s.value().re, 2.0);
    }
}
