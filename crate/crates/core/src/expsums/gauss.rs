//! Normalized complete exponential sums `G(a/q)` of the canonical mapping.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::phase::{root_table, CompensatedSum, RationalPoint};
use crate::error::{Error, Result};
use crate::kernels::for_each_in_box;
use crate::lattice::{monomial_mod, MultiIndexSet};
use crate::numtheory::{factorize, gcd, inv_mod};

fn check(a: &RationalPoint, gamma: &MultiIndexSet) -> Result<()> {
    if a.dim() != gamma.len() {
        return Err(Error::DimensionMismatch { expected: gamma.len(), got: a.dim() });
    }
    if !a.in_aq() {
        return Err(Error::NotAMember(format!("{:?}/{} is not in A_q", a.numerators(), a.q())));
    }
    Ok(())
}

/// `G(a/q) = q^{-k} Σ_{y∈[1,q]^k} e(⟨a, Q(y)⟩/q)` with the phase reduced
/// modulo `q` in integer arithmetic.
pub fn gauss_sum(a: &RationalPoint, gamma: &MultiIndexSet) -> Result<Complex64> {
    check(a, gamma)?;
    let q = a.q();
    let k = gamma.k();
    let total = q
        .checked_pow(k as u32)
        .filter(|&t| t <= 1 << 32)
        .ok_or_else(|| Error::BudgetExceeded(format!("q^k = {q}^{k} terms")))?;
    let roots = root_table(q);
    let res = a.residues();
    let mut acc = CompensatedSum::default();
    let mut yu = vec![0u64; k];
    for_each_in_box(k, 1, q as i64, |y| {
        for (u, &v) in yu.iter_mut().zip(y) {
            *u = v as u64 % q;
        }
        let mut ph: u128 = 0;
        for (g, &c) in gamma.iter().zip(&res) {
            if c != 0 {
                ph += c as u128 * monomial_mod(&yu, g, q) as u128;
            }
        }
        acc.add(roots[(ph % q as u128) as usize]);
        Ok(())
    })?;
    Ok(acc.value() / total as f64)
}

/// Splits `a/(q1 q2)` as `a1/q1 + a2/q2 (mod Z^d)` for coprime `q1, q2`.
pub fn crt_split(a: &RationalPoint, q1: u64, q2: u64) -> Result<(RationalPoint, RationalPoint)> {
    if q1.checked_mul(q2) != Some(a.q()) || gcd(q1, q2) != 1 {
        return Err(Error::invalid(format!("{q1}·{q2} is not a coprime factorization of {}", a.q())));
    }
    let inv2 = inv_mod(q2 % q1, q1).unwrap_or(0);
    let inv1 = inv_mod(q1 % q2, q2).unwrap_or(0);
    let res = a.residues();
    let a1: Vec<i64> = res.iter().map(|&x| ((x as u128 * inv2 as u128) % q1 as u128) as i64).collect();
    let a2: Vec<i64> = res.iter().map(|&x| ((x as u128 * inv1 as u128) % q2 as u128) as i64).collect();
    Ok((RationalPoint::from_residues(&a1, q1)?, RationalPoint::from_residues(&a2, q2)?))
}

/// `max_{a∈A_q} |G(a/q)|` for the moment curve `y ↦ (y, y², …, y^d)`.
///
/// The maximum is multiplicative over the prime-power factors of `q`. For a
/// prime power the sum is invariant under `a_i ↦ u^i a_i` for units `u`, so
/// the top coefficient runs over orbit representatives, the middle ones over
/// all residues and the linear one through a single FFT.
pub fn gauss_max_moment_curve(q: u64, d: u32) -> Result<f64> {
    if q == 0 || d == 0 {
        return Err(Error::invalid("need q >= 1 and d >= 1"));
    }
    if d > 4 {
        return Err(Error::invalid("moment-curve Gauss maxima are supported for d <= 4"));
    }
    let mut planner = FftPlanner::new();
    let mut out = 1.0;
    for (p, e) in factorize(q) {
        out *= prime_power_max(p, p.pow(e), d, &mut planner)?;
    }
    Ok(out)
}

fn orbit_representatives(qq: u64, d: u32) -> Vec<u64> {
    let units: Vec<u64> = (1..qq).filter(|&u| gcd(u, qq) == 1).collect();
    let powers: Vec<u64> = {
        let mut v: Vec<u64> = units.iter().map(|&u| crate::numtheory::pow_mod(u, d as u64, qq)).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut seen = vec![false; qq as usize];
    let mut reps = Vec::new();
    for c in 0..qq {
        if seen[c as usize] {
            continue;
        }
        reps.push(c);
        for &w in &powers {
            seen[((c as u128 * w as u128) % qq as u128) as usize] = true;
        }
    }
    reps
}

fn prime_power_max(p: u64, qq: u64, d: u32, planner: &mut FftPlanner<f64>) -> Result<f64> {
    if d == 1 {
        // G(a/q) = 0 unless a ≡ 0, which A_q excludes for q > 1
        return Ok(if qq == 1 { 1.0 } else { 0.0 });
    }
    let middle = d as usize - 2;
    let work = (qq as u128).pow(middle as u32 + 1) * qq as u128;
    if work > 1 << 36 {
        return Err(Error::BudgetExceeded(format!("moment-curve maximum for q={qq}, d={d}")));
    }
    let n = qq as usize;
    let fft = planner.plan_fft_inverse(n);
    let mut pow_tab = vec![vec![0u64; n]; d as usize + 1];
    for y in 0..n {
        let mut v = 1u64;
        for row in pow_tab.iter_mut() {
            row[y] = v;
            v = ((v as u128 * y as u128) % qq as u128) as u64;
        }
    }
    let roots = root_table(qq);
    let mut best = 0.0f64;
    let mut buf = vec![Complex64::default(); n];
    for top in orbit_representatives(qq, d) {
        let mut mids = vec![0u64; middle];
        loop {
            let fixed_divisible = top % p == 0 && mids.iter().all(|&m| m % p == 0);
            for (y, slot) in buf.iter_mut().enumerate() {
                let mut ph = top as u128 * pow_tab[d as usize][y] as u128;
                for (i, &m) in mids.iter().enumerate() {
                    ph += m as u128 * pow_tab[i + 2][y] as u128;
                }
                *slot = roots[(ph % qq as u128) as usize];
            }
            fft.process(&mut buf);
            for (a1, v) in buf.iter().enumerate() {
                if fixed_divisible && (a1 as u64).is_multiple_of(p) {
                    continue;
                }
                best = best.max(v.norm() / qq as f64);
            }
            // odometer over the middle coefficients
            let mut pos = middle;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                mids[pos] += 1;
                if mids[pos] < qq {
                    break;
                }
                mids[pos] = 0;
            }
            if mids.iter().all(|&m| m == 0) {
                break;
            }
        }
    }
    Ok(best)
}

/// Brute-force `max_{a∈A_q} |G(a/q)|` for any Γ; small `q` only.
pub fn gauss_max_brute(q: u64, gamma: &MultiIndexSet) -> Result<f64> {
    let d = gamma.len() as u32;
    if (q as u128).pow(d) * (q as u128).pow(gamma.k() as u32) > 1 << 28 {
        return Err(Error::BudgetExceeded(format!("brute-force maximum for q={q}")));
    }
    let mut best = 0.0f64;
    for_each_in_box(gamma.len(), 1, q as i64, |a| {
        let r = RationalPoint::new(a.iter().map(|&x| x as u64).collect(), q)?;
        if r.in_aq() {
            best = best.max(gauss_sum(&r, gamma)?.norm());
        }
        Ok(())
    })?;
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussDecayRow {
    pub q: u64,
    pub max_abs: f64,
    /// `q^{−1/d + slack}`.
    pub surrogate: f64,
    /// `max_abs · q^{1/d}`.
    pub scaled: f64,
}

/// The surrogate decay table `max_a |G(a/q)|` versus `q^{−1/d+slack}`.
pub fn gauss_decay_table(qmax: u64, d: u32, slack: f64) -> Result<Vec<GaussDecayRow>> {
    (1..=qmax)
        .map(|q| {
            let m = gauss_max_moment_curve(q, d)?;
            let qf = q as f64;
            Ok(GaussDecayRow { q, max_abs: m, surrogate: qf.powf(-1.0 / d as f64 + slack), scaled: m * qf.powf(1.0 / d as f64) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let g1 = MultiIndexSet::new(1, 1).unwrap();
        assert!((gauss_sum(&RationalPoint::new(vec![1], 1).unwrap(), &g1).unwrap() - 1.0).norm() < 1e-15);
        assert!(gauss_sum(&RationalPoint::new(vec![1], 3).unwrap(), &g1).unwrap().norm() < 1e-15);
        let g2 = MultiIndexSet::new(1, 2).unwrap();
        let quad = RationalPoint::new(vec![5, 1], 5).unwrap();
        assert!((gauss_sum(&quad, &g2).unwrap().norm() - 5f64.powf(-0.5)).abs() < 1e-12);
        assert!(matches!(gauss_sum(&RationalPoint::new(vec![2, 4], 4).unwrap(), &g2), Err(Error::NotAMember(_))));
    }

    #[test]
    fn fft_maximum_matches_brute_force() {
        for d in 1..=3u32 {
            let gamma = MultiIndexSet::new(1, d).unwrap();
            for q in 1..=16 {
                let fast = gauss_max_moment_curve(q, d).unwrap();
                let slow = gauss_max_brute(q, &gamma).unwrap();
                assert!((fast - slow).abs() < 1e-12, "q={q} d={d}: {fast} vs {slow}");
            }
        }
    }
}
