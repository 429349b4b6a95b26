//! Dirichlet approximation by continued fractions and the rational
//! rescaling step used in the Weyl-sum induction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn exact(theta: f64) -> Result<BigRational> {
    BigRational::from_float(theta).ok_or_else(|| Error::invalid(format!("θ must be finite, got {theta}")))
}

fn within(theta: &BigRational, a: i64, q: u64, bound: u64) -> bool {
    let err = (theta - BigRational::new(BigInt::from(a), BigInt::from(q))).abs();
    // |θ − a/q| ≤ 1/(q·bound)
    err * BigInt::from(q) * BigInt::from(bound) <= BigRational::from_integer(BigInt::from(1))
}

/// `a/q` in lowest terms with `1 ≤ q ≤ bound` and `|θ − a/q| ≤ 1/(q·bound)`.
pub fn dirichlet(theta: f64, bound: u64) -> Result<(i64, u64)> {
    if bound == 0 {
        return Err(Error::invalid("the Dirichlet bound must be at least 1"));
    }
    let t = exact(theta)?;
    // convergents h_n/k_n of the continued fraction of θ
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut x = t.clone();
    let mut best: Option<(BigInt, BigInt)> = None;
    loop {
        let ai = x.floor().to_integer();
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(bound) {
            break;
        }
        best = Some((h2.clone(), k2.clone()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let f = &x - BigRational::from_integer(ai);
        if f.is_zero() {
            break;
        }
        x = f.recip();
    }
    if let Some((h, k)) = best {
        if let (Some(a), Some(q)) = (h.to_i64(), k.to_u64()) {
            if within(&t, a, q, bound) {
                return Ok((a, q));
            }
        }
    }
    if bound <= 10_000 {
        return dirichlet_exhaustive(theta, bound);
    }
    Err(Error::Evaluation(format!("no Dirichlet approximation found for θ={theta}, bound={bound}")))
}

/// Smallest `q ≤ bound` admitting `a` with `|θ − a/q| ≤ 1/(q·bound)`.
pub fn dirichlet_exhaustive(theta: f64, bound: u64) -> Result<(i64, u64)> {
    let t = exact(theta)?;
    for q in 1..=bound {
        let qa = (&t * BigInt::from(q)).round().to_integer();
        let a = qa.to_i64().ok_or_else(|| Error::Overflow("numerator".into()))?;
        if within(&t, a, q, bound) {
            let g = a.unsigned_abs().gcd(&q);
            return Ok((a / g as i64, q / g));
        }
    }
    Err(Error::Evaluation(format!("exhaustive search failed for θ={theta}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RescaleCase {
    /// `Qa/q` in lowest terms already satisfies the conclusion.
    SameFraction,
    /// A fresh Dirichlet approximation of `Qθ` was needed.
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaleParams {
    pub n: u64,
    /// Power of `N` in the window, the degree of the coefficient.
    pub j: u32,
    pub beta: f64,
    pub beta_prime: f64,
    pub beta2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaleResult {
    pub a: i64,
    pub q: u64,
    pub case: RescaleCase,
    /// `|Qθ − a′/q′|`.
    pub error: f64,
    /// `(log N)^{β2}/(q′N^j)`.
    pub error_bound: f64,
    pub q_lower: f64,
    pub q_upper: f64,
}

/// Replaces an approximation `a/q` of `θ` by one of `Qθ` whose denominator
/// stays in the window `[(log N)^{β2}, N^j (log N)^{−β2}]`.
pub fn rescale_rational(theta: f64, a: i64, q: u64, big_q: u64, prm: &RescaleParams) -> Result<RescaleResult> {
    let t = exact(theta)?;
    if q == 0 || big_q == 0 || prm.n < 3 || prm.j == 0 {
        return Err(Error::invalid("need q, Q, j >= 1 and N >= 3"));
    }
    let log_n = (prm.n as f64).ln();
    let nj = (prm.n as f64).powi(prm.j as i32);
    let lb = |b: f64| log_n.powf(b);
    let approx = (&t - BigRational::new(BigInt::from(a), BigInt::from(q))).abs();
    if approx * BigInt::from(q) * BigInt::from(q) > BigRational::from_integer(BigInt::from(1)) {
        return Err(Error::pre("|θ − a/q| exceeds 1/q²"));
    }
    let qf = q as f64;
    if qf < lb(prm.beta) || qf > nj / lb(prm.beta) {
        return Err(Error::pre(format!(
            "q={q} outside [(log N)^β, N^j (log N)^-β] = [{}, {}]",
            lb(prm.beta),
            nj / lb(prm.beta)
        )));
    }
    if prm.beta_prime >= prm.beta || big_q as f64 > lb(prm.beta_prime) {
        return Err(Error::pre("need β′ < β and Q <= (log N)^β′"));
    }
    if prm.beta2 > (prm.beta / 2.0).min(prm.beta - prm.beta_prime) {
        return Err(Error::pre("β2 exceeds min{β/2, β − β′}"));
    }
    let q_lower = lb(prm.beta2);
    let q_upper = nj / lb(prm.beta2);
    let qt = &t * BigInt::from(big_q);
    let check = |a2: i64, q2: u64| -> Option<(f64, f64)> {
        let err = (&qt - BigRational::new(BigInt::from(a2), BigInt::from(q2))).abs().to_f64()?;
        let bound = lb(prm.beta2) / (q2 as f64 * nj);
        let q2f = q2 as f64;
        (err <= bound && q2f >= q_lower && q2f <= q_upper).then_some((err, bound))
    };
    let num = (a as i128) * big_q as i128;
    let g = (num.unsigned_abs()).gcd(&(q as u128)) as i128;
    if let (Ok(a2), Ok(q2)) = (i64::try_from(num / g), u64::try_from(q as i128 / g)) {
        if let Some((error, error_bound)) = check(a2, q2) {
            return Ok(RescaleResult { a: a2, q: q2, case: RescaleCase::SameFraction, error, error_bound, q_lower, q_upper });
        }
    }
    let bound = q_upper.floor();
    if bound < 1.0 || bound > u64::MAX as f64 {
        return Err(Error::pre("empty denominator window"));
    }
    let theta_q = qt.to_f64().ok_or_else(|| Error::Overflow("Qθ".into()))?;
    // Qθ is exact as a product of an f64 and a small integer only when it
    // round-trips; otherwise approximate the rational directly.
    let (a2, q2) = if BigRational::from_float(theta_q).as_ref() == Some(&qt) {
        dirichlet(theta_q, bound as u64)?
    } else {
        dirichlet_rational(&qt, bound as u64)?
    };
    let (error, error_bound) = check(a2, q2).ok_or_else(|| {
        Error::Evaluation(format!("rescaled fraction {a2}/{q2} misses the window; hypotheses are inconsistent"))
    })?;
    Ok(RescaleResult { a: a2, q: q2, case: RescaleCase::Dirichlet, error, error_bound, q_lower, q_upper })
}

fn dirichlet_rational(t: &BigRational, bound: u64) -> Result<(i64, u64)> {
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut x = t.clone();
    loop {
        let ai = x.floor().to_integer();
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(bound) {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let f = &x - BigRational::from_integer(ai);
        if f.is_zero() {
            break;
        }
        x = f.recip();
    }
    match (h1.to_i64(), k1.to_u64()) {
        (Some(a), Some(q)) if q >= 1 => Ok((a, q)),
        _ => Err(Error::Overflow("convergent".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet(0.5, 10).unwrap(), (1, 2));
        assert_eq!(dirichlet(0.0, 10).unwrap(), (0, 1));
        assert_eq!(dirichlet(0.1415926, 100).unwrap(), (1, 7));
        assert_eq!(dirichlet(-2.25, 100).unwrap(), (-9, 4));
        assert!(dirichlet(f64::NAN, 3).is_err());
        assert!(dirichlet(0.3, 0).is_err());
    }

    #[test]
    fn exhaustive_agrees_on_small_bounds() {
        for &t in &[0.1415926, 0.7072, 0.333, 0.9999] {
            let (a, q) = dirichlet_exhaustive(t, 50).unwrap();
            assert!((t - a as f64 / q as f64).abs() <= 1.0 / (q as f64 * 50.0));
        }
    }

    fn params(j: u32) -> RescaleParams {
        RescaleParams { n: 1 << 20, j, beta: 4.0, beta_prime: 1.0, beta2: 1.0 }
    }

    #[test]
    fn identity_rescale() {
        let q = 100_003u64;
        let a = 990;
        let r = rescale_rational(a as f64 / q as f64, a, q, 1, &params(2)).unwrap();
        assert_eq!((r.a, r.q, r.case), (a, q, RescaleCase::SameFraction));
    }

    #[test]
    fn rescale_rejects_bad_windows() {
        // q = 101 is below (log 2^20)^4
        assert!(matches!(rescale_rational(1.0 / 101.0, 1, 101, 6, &params(1)), Err(Error::Precondition(_))));
    }
}
