//! Dyadic interval decomposition and the maximal-to-square-function
//! inequality `max_j |a_j| ≤ |a_{j0}| + √2 Σ_i (Σ_j |a_{(j+1)2^i} − a_{j2^i}|²)^{1/2}`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeFunction, Point};

/// Slack on the inequality checks.
pub const RM_SLACK: f64 = 1e-12;

/// `[j·2^i, (j+1)·2^i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub scale: u32,
    pub index: u64,
}

impl DyadicInterval {
    pub fn start(&self) -> u64 {
        self.index << self.scale
    }

    pub fn end(&self) -> u64 {
        (self.index + 1) << self.scale
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u64 {
        1 << self.scale
    }
}

/// Greedy decomposition of `[m, n)`: from each left end take the longest
/// dyadic interval that still fits. The per-scale multiplicity bound is
/// checked, not assumed.
pub fn dyadic_interval_decomposition(m: u64, n: u64, s: u32) -> Result<Vec<DyadicInterval>> {
    if s > 62 {
        return Err(Error::invalid("s must be at most 62"));
    }
    if m >= n || n > 1u64 << s {
        return Err(Error::invalid(format!("need 0 <= m < n <= 2^s, got m={m}, n={n}, s={s}")));
    }
    let mut out = Vec::new();
    let mut mult = vec![0u8; s as usize + 1];
    let mut at = m;
    while at < n {
        let align = if at == 0 { s } else { at.trailing_zeros().min(s) };
        let mut i = align;
        while at + (1u64 << i) > n {
            i -= 1;
        }
        mult[i as usize] += 1;
        if mult[i as usize] > 2 {
            return Err(Error::Evaluation(format!("scale {i} used three times in [{m}, {n})")));
        }
        out.push(DyadicInterval { scale: i, index: at >> i });
        at += 1 << i;
    }
    Ok(out)
}

fn log2_len(len: usize) -> Result<u32> {
    let m = len.checked_sub(1).filter(|m| m.is_power_of_two());
    m.map(|m| m.trailing_zeros())
        .ok_or_else(|| Error::invalid(format!("sequence length must be 2^s + 1, got {len}")))
}

/// The per-scale square sums `(Σ_j |a_{(j+1)2^i} − a_{j2^i}|²)^{1/2}`, `i = 0..=s`.
pub fn rm_square_sums(a: &[Complex64]) -> Result<Vec<f64>> {
    let s = log2_len(a.len())?;
    Ok((0..=s)
        .map(|i| {
            let step = 1usize << i;
            let sum: f64 = (0..(1usize << (s - i))).map(|j| (a[(j + 1) * step] - a[j * step]).norm_sqr()).sum();
            sum.sqrt()
        })
        .collect())
}

pub fn rm_rhs(a: &[Complex64], j0: usize) -> Result<f64> {
    let sq = rm_square_sums(a)?;
    if j0 >= a.len() {
        return Err(Error::invalid(format!("j0={j0} outside 0..={}", a.len() - 1)));
    }
    Ok(a[j0].norm() + std::f64::consts::SQRT_2 * sq.iter().sum::<f64>())
}

pub fn rm_check(a: &[Complex64], j0: usize) -> Result<bool> {
    let rhs = rm_rhs(a, j0)?;
    let max = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(max <= rhs + RM_SLACK)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmAudit {
    pub trials: usize,
    pub max_s: u32,
    pub violations: usize,
    /// Largest `max_j |a_j| / rhs` seen.
    pub worst_ratio: f64,
}

/// Random complex sequences with `s` cycling through `0..=max_s` and a
/// random `j0`.
pub fn rm_audit(trials: usize, max_s: u32, seed: u64) -> Result<RmAudit> {
    if max_s > 20 {
        return Err(Error::invalid("max_s must be at most 20"));
    }
    let mut rng = crate::rng::stream(seed, "rm-audit");
    let mut violations = 0;
    let mut worst = 0.0f64;
    for t in 0..trials {
        let s = (t % (max_s as usize + 1)) as u32;
        let len = (1usize << s) + 1;
        let a: Vec<Complex64> =
            (0..len).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let j0 = rng.gen_range(0..len);
        let rhs = rm_rhs(&a, j0)?;
        let max = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max > rhs + RM_SLACK {
            violations += 1;
        }
        if rhs > 0.0 {
            worst = worst.max(max / rhs);
        }
    }
    Ok(RmAudit { trials, max_s, violations, worst_ratio: worst })
}

/// Exhaustive validity of the greedy decomposition for `0 ≤ m < n ≤ 2^s`.
/// Returns the number of intervals examined.
pub fn rm_decomposition_audit(s: u32) -> Result<u64> {
    let top = 1u64 << s;
    (0..top)
        .into_par_iter()
        .map(|m| {
            let mut checked = 0;
            for n in m + 1..=top {
                let parts = dyadic_interval_decomposition(m, n, s)?;
                let mut at = m;
                for p in &parts {
                    if p.start() != at || p.end() > n {
                        return Err(Error::Evaluation(format!("[{m}, {n}) is not tiled by {parts:?}")));
                    }
                    at = p.end();
                }
                if at != n {
                    return Err(Error::Evaluation(format!("[{m}, {n}) is not covered by {parts:?}")));
                }
                checked += 1;
            }
            Ok(checked)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RmFunctionDecomposition {
    pub base: LatticeFunction,
    pub square_functions: Vec<LatticeFunction>,
    /// `sup_j |g_j|`.
    pub maximal: LatticeFunction,
    /// Largest `sup_j |g_j(x)| − bound(x)` over the support; `≤ 1e-12` means the
    /// pointwise inequality holds.
    pub worst_excess: f64,
}

impl RmFunctionDecomposition {
    pub fn holds(&self) -> bool {
        self.worst_excess <= RM_SLACK
    }
}

/// Pointwise version over a family `g_0, …, g_{2^s}`: `base = |g_{j0}|` and
/// one square function per scale.
pub fn rm_function_decomposition(family: &[LatticeFunction], j0: usize) -> Result<RmFunctionDecomposition> {
    let s = log2_len(family.len())?;
    let dim = family[0].dim();
    if let Some(f) = family.iter().find(|f| f.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: f.dim() });
    }
    if j0 >= family.len() {
        return Err(Error::invalid(format!("j0={j0} outside 0..={}", family.len() - 1)));
    }
    let support: Vec<Point> =
        family.iter().flat_map(|f| f.support().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
    let rows: Vec<(f64, Vec<f64>, f64)> = support
        .par_iter()
        .map(|x| {
            let a: Vec<Complex64> = family.iter().map(|f| f.get(x)).collect();
            let sq = rm_square_sums(&a).expect("length checked");
            let max = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
            (a[j0].norm(), sq, max)
        })
        .collect();
    let mut worst = f64::NEG_INFINITY;
    let mut base = Vec::new();
    let mut squares = vec![Vec::new(); s as usize + 1];
    let mut maximal = Vec::new();
    for (x, (b, sq, max)) in support.iter().zip(rows) {
        let bound = b + std::f64::consts::SQRT_2 * sq.iter().sum::<f64>();
        worst = worst.max(max - bound);
        base.push((x.clone(), Complex64::new(b, 0.0)));
        maximal.push((x.clone(), Complex64::new(max, 0.0)));
        for (i, v) in sq.into_iter().enumerate() {
            squares[i].push((x.clone(), Complex64::new(v, 0.0)));
        }
    }
    Ok(RmFunctionDecomposition {
        base: LatticeFunction::from_pairs(dim, base)?,
        square_functions: squares
            .into_iter()
            .map(|p| LatticeFunction::from_pairs(dim, p))
            .collect::<Result<_>>()?,
        maximal: LatticeFunction::from_pairs(dim, maximal)?,
        worst_excess: if worst.is_finite() { worst } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spans(v: &[DyadicInterval]) -> Vec<(u64, u64)> {
        v.iter().map(|d| (d.start(), d.end())).collect()
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(spans(&dyadic_interval_decomposition(0, 16, 4).unwrap()), vec![(0, 16)]);
        assert_eq!(spans(&dyadic_interval_decomposition(3, 9, 4).unwrap()), vec![(3, 4), (4, 8), (8, 9)]);
        let d = dyadic_interval_decomposition(1, 7, 3).unwrap();
        assert_eq!(spans(&d), vec![(1, 2), (2, 4), (4, 6), (6, 7)]);
        assert_eq!(d.iter().map(|x| x.scale).collect::<Vec<_>>(), vec![0, 1, 1, 0]);
        assert!(dyadic_interval_decomposition(5, 5, 3).is_err());
        assert!(dyadic_interval_decomposition(0, 9, 3).is_err());
    }

    #[test]
    fn scalar_examples() {
        let c = vec![Complex64::new(0.3, -0.4); 5];
        assert!((rm_rhs(&c, 2).unwrap() - 0.5).abs() < 1e-15);
        let a = [0.0, 1.0, 0.0].map(|x| Complex64::new(x, 0.0));
        let rhs = rm_rhs(&a, 0).unwrap();
        assert!((rhs - std::f64::consts::SQRT_2 * 2f64.sqrt()).abs() < 1e-15);
        assert!(rm_check(&a, 0).unwrap());
        assert!(rm_rhs(&a[..2], 0).is_ok());
        assert!(rm_rhs(&a[..1], 0).is_err());
        assert!(rm_rhs(&[a[0]; 4], 0).is_err());
    }

    #[test]
    fn audit_small() {
        assert_eq!(rm_decomposition_audit(6).unwrap(), 64 * 65 / 2);
        assert_eq!(rm_audit(500, 6, 1).unwrap().violations, 0);
    }

    #[test]
    fn equal_functions_give_zero_squares() {
        let f = LatticeFunction::delta(vec![1, 2]);
        let dec = rm_function_decomposition(&[f.clone(), f.clone(), f], 1).unwrap();
        assert!(dec.square_functions.iter().all(|g| g.sup_norm() == 0.0));
        assert!(dec.holds());
        assert_eq!(dec.worst_excess, 0.0);
    }
}
