//! The denominator sets `P_N` and the rational sets `U_N = R(P_N)`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expsums::RationalPoint;
use crate::kernels::for_each_in_box;
use crate::lattice::MultiIndexSet;
use crate::numtheory::primes_up_to;

/// Desk-scale guard on `N0`; `(N0!)^D` grows factorially.
pub const MAX_N0: u64 = 60;

/// `P_N = {Q·w : Q | Q0, w ∈ Π(V) ∪ {1}}` with `V` the primes in `(N0, N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenominatorSet {
    n: u64,
    rho: f64,
    n0: u64,
    d: u32,
    q0: BigUint,
    /// `(p, v_p(Q0))` for the primes `p ≤ N0`.
    q0_factors: Vec<(u64, u32)>,
    window: Vec<u64>,
}

/// `⌊N^{ρ/2}⌋ + 1`, computed with a guard against rounding just below an
/// integer.
fn n0_of(n: u64, rho: f64) -> u64 {
    let x = (n as f64).powf(rho / 2.0);
    let mut f = x.floor() as u64;
    if ((f + 1) as f64 - x).abs() < 1e-9 * x.max(1.0) {
        f += 1;
    }
    f + 1
}

fn legendre(n: u64, p: u64) -> u32 {
    let (mut v, mut pk) = (0u32, p);
    while pk <= n {
        v += (n / pk) as u32;
        match pk.checked_mul(p) {
            Some(x) => pk = x,
            None => break,
        }
    }
    v
}

pub fn build_denominator_set(n: u64, rho: f64) -> Result<DenominatorSet> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::invalid(format!("ρ must be positive, got {rho}")));
    }
    let n0 = n0_of(n, rho);
    if n0 > MAX_N0 {
        return Err(Error::BudgetExceeded(format!("N0 = {n0} exceeds the desk guard {MAX_N0}")));
    }
    let d = (2.0 / rho).floor() as u32 + 1;
    let q0_factors: Vec<(u64, u32)> = primes_up_to(n0).into_iter().map(|p| (p, legendre(n0, p) * d)).collect();
    let mut q0 = BigUint::one();
    for &(p, e) in &q0_factors {
        q0 *= BigUint::from(p).pow(e);
    }
    let window = primes_up_to(n).into_iter().filter(|&p| p > n0).collect();
    Ok(DenominatorSet { n, rho, n0, d, q0, q0_factors, window })
}

impl DenominatorSet {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    /// `D = ⌊2/ρ⌋ + 1`.
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn q0(&self) -> &BigUint {
        &self.q0
    }

    pub fn primes_window(&self) -> &[u64] {
        &self.window
    }

    /// Number of divisors of `Q0`.
    pub fn divisor_count(&self) -> BigUint {
        self.q0_factors.iter().map(|&(_, e)| BigUint::from(e + 1)).product()
    }

    /// `Π(V)` in increasing order: products of at most `D` distinct window
    /// primes with exponents in `[1, D]`.
    pub fn pi_set(&self) -> Vec<BigUint> {
        let mut out = Vec::new();
        pi_rec(&self.window, self.d, 0, 0, BigUint::one(), &mut out);
        out.sort();
        out
    }

    /// Divisors of `Q0`, lazily, in mixed-radix order of the exponents.
    pub fn divisors(&self) -> impl Iterator<Item = BigUint> + '_ {
        let m = self.q0_factors.len();
        let mut exps = vec![0u32; m];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let v: BigUint =
                self.q0_factors.iter().zip(&exps).map(|(&(p, _), &e)| BigUint::from(p).pow(e)).product();
            let mut pos = 0;
            loop {
                if pos == m {
                    done = true;
                    break;
                }
                exps[pos] += 1;
                if exps[pos] <= self.q0_factors[pos].1 {
                    break;
                }
                exps[pos] = 0;
                pos += 1;
            }
            Some(v)
        })
    }

    /// Members `Q·w`, lazily; the same `q` never appears twice.
    pub fn members(&self) -> impl Iterator<Item = BigUint> + '_ {
        let mut ws = vec![BigUint::one()];
        ws.extend(self.pi_set());
        ws.into_iter().flat_map(move |w| self.divisors().map(move |q| q * &w))
    }

    /// `|P_N| = τ(Q0)·(|Π(V)| + 1)`.
    pub fn len(&self) -> BigUint {
        self.divisor_count() * BigUint::from(self.pi_set().len() + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Splits `q = Q·w` with `Q | Q0` and `w ∈ Π(V) ∪ {1}`.
    pub fn unique_factorization(&self, q: &BigUint) -> Result<(BigUint, BigUint)> {
        if q.is_zero() {
            return Err(Error::NotAMember("0".into()));
        }
        let mut rest = q.clone();
        let mut big_q = BigUint::one();
        for &(p, e) in &self.q0_factors {
            let bp = BigUint::from(p);
            let mut v = 0;
            while (&rest % &bp).is_zero() {
                rest /= &bp;
                v += 1;
            }
            if v > e {
                return Err(Error::NotAMember(format!("{q}: {p}^{v} does not divide Q0")));
            }
            big_q *= bp.pow(v);
        }
        let w = rest.clone();
        let mut distinct = 0u32;
        for &p in &self.window {
            let bp = BigUint::from(p);
            let mut v = 0u32;
            while (&rest % &bp).is_zero() {
                rest /= &bp;
                v += 1;
            }
            if v > 0 {
                distinct += 1;
                if v > self.d {
                    return Err(Error::NotAMember(format!("{q}: exponent {v} of {p} exceeds D")));
                }
            }
        }
        if !rest.is_one() {
            return Err(Error::NotAMember(format!("{q} has a prime factor outside [2, N]")));
        }
        if distinct > self.d {
            return Err(Error::NotAMember(format!("{q}: {distinct} window primes exceed D")));
        }
        Ok((big_q, w))
    }

    pub fn contains(&self, q: &BigUint) -> bool {
        self.unique_factorization(q).is_ok()
    }

    /// `log max P_N`, to compare with `N^ρ`.
    pub fn log_max_member(&self) -> f64 {
        let log_q0: f64 = self.q0_factors.iter().map(|&(p, e)| e as f64 * (p as f64).ln()).sum();
        let mut primes: Vec<u64> = self.window.clone();
        primes.sort_unstable_by(|a, b| b.cmp(a));
        let log_w: f64 = primes.iter().take(self.d as usize).map(|&p| self.d as f64 * (p as f64).ln()).sum();
        log_q0 + log_w
    }
}

fn pi_rec(v: &[u64], d: u32, start: usize, used: u32, acc: BigUint, out: &mut Vec<BigUint>) {
    for i in start..v.len() {
        let mut pk = acc.clone();
        for _ in 1..=d {
            pk *= v[i];
            out.push(pk.clone());
            if used + 1 < d {
                pi_rec(v, d, i + 1, used + 1, pk.clone(), out);
            }
        }
    }
}

/// `R(S)`: all `a/q` with `a ∈ A_q`, `q ∈ S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalSet {
    d: usize,
    points: Vec<RationalPoint>,
}

impl RationalSet {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, r: &RationalPoint) -> bool {
        self.points.binary_search(r).is_ok()
    }
}

/// Default cap on `Σ_q q^d` for [`build_rational_set`].
pub const RATIONAL_BUDGET: u128 = 5_000_000;

pub fn build_rational_set(denoms: &[u64], gamma: &MultiIndexSet, budget: u128) -> Result<RationalSet> {
    let d = gamma.len();
    let mut qs: Vec<u64> = denoms.to_vec();
    qs.sort_unstable();
    qs.dedup();
    if qs.first() == Some(&0) {
        return Err(Error::invalid("denominators must be at least 1"));
    }
    let mut work: u128 = 0;
    for &q in &qs {
        work = work.saturating_add((q as u128).saturating_pow(d as u32));
    }
    if work > budget {
        return Err(Error::BudgetExceeded(format!("Σ q^d = {work} exceeds {budget}")));
    }
    let mut points = Vec::new();
    for &q in &qs {
        for_each_in_box(d, 1, q as i64, |a| {
            let g = a.iter().fold(q, |g, &x| g.gcd(&(x as u64)));
            if g == 1 {
                points.push(RationalPoint::new(a.iter().map(|&x| x as u64).collect(), q)?);
            }
            Ok(())
        })?;
    }
    points.sort();
    Ok(RationalSet { d, points })
}

/// `U_N = R(P_N)`; every member of `P_N` must fit the budget.
pub fn build_un(set: &DenominatorSet, gamma: &MultiIndexSet, budget: u128) -> Result<RationalSet> {
    let qs: Vec<u64> = set
        .members()
        .map(|q| q.to_u64().ok_or_else(|| Error::BudgetExceeded(format!("denominator {q} exceeds u64"))))
        .collect::<Result<_>>()?;
    build_rational_set(&qs, gamma, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_u64(v: impl Iterator<Item = BigUint>) -> Vec<u64> {
        let mut out: Vec<u64> = v.map(|x| x.to_u64().unwrap()).collect();
        out.sort_unstable();
        out
    }

    #[test]
    fn small_set() {
        let s = build_denominator_set(2, 2.0).unwrap();
        assert_eq!((s.d(), s.n0(), s.q0().to_u64().unwrap()), (2, 3, 36));
        assert!(s.primes_window().is_empty());
        assert_eq!(as_u64(s.members()), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
        assert_eq!(s.unique_factorization(&BigUint::from(36u32)).unwrap(), (BigUint::from(36u32), BigUint::one()));
        assert_eq!(s.unique_factorization(&BigUint::one()).unwrap(), (BigUint::one(), BigUint::one()));
        assert!(s.unique_factorization(&BigUint::from(8u32)).is_err());
    }

    #[test]
    fn window_primes() {
        let s = build_denominator_set(10, 1.0).unwrap();
        assert_eq!((s.d(), s.n0()), (3, 4));
        assert_eq!(s.q0().to_u64().unwrap(), 24u64.pow(3));
        assert_eq!(s.primes_window(), &[5, 7]);
        let pi = as_u64(s.pi_set().into_iter());
        assert_eq!(pi.len(), 15);
        assert!(pi.contains(&(125 * 343)));
        let (q, w) = s.unique_factorization(&BigUint::from(120u32)).unwrap();
        assert_eq!((q.to_u64().unwrap(), w.to_u64().unwrap()), (24, 5));
        assert_eq!(s.len(), BigUint::from(40u32 * 16));
    }

    #[test]
    fn guard() {
        assert!(matches!(build_denominator_set(1 << 20, 1.0), Err(Error::BudgetExceeded(_))));
        assert!(build_denominator_set(5, 0.0).is_err());
    }

    #[test]
    fn rational_sets() {
        let g = MultiIndexSet::new(1, 1).unwrap();
        assert_eq!(build_rational_set(&[1], &g, 100).unwrap().len(), 1);
        assert_eq!(build_rational_set(&[2], &g, 100).unwrap().points()[0], RationalPoint::new(vec![1], 2).unwrap());
        assert_eq!(build_rational_set(&[1, 2, 3], &g, 100).unwrap().len(), 4);
        assert!(build_rational_set(&[1000], &MultiIndexSet::new(1, 3).unwrap(), 100).is_err());
    }
}
