//! Sets with the O property and the decomposition of `Π(V)` into them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::partitions::{partition_bound, partition_family};
use crate::error::{Error, Result};
use crate::kernels::for_each_in_box;
use crate::numtheory::{factorize, gcd};

/// A certificate: slots `S_1..S_k` of prime powers `p^{γ_j}` whose
/// products represent `Λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OPropertyFamily {
    pub k: usize,
    /// `γ_j` for each slot.
    pub exponents: Vec<u32>,
    /// `S_j` as sorted prime powers.
    pub slots: Vec<Vec<u64>>,
    /// The represented set, sorted.
    pub lambda: Vec<u64>,
}

impl OPropertyFamily {
    /// Checks conditions (i)–(iv) directly from the slots.
    pub fn verify(&self, d: u32) -> bool {
        if self.k == 0 {
            return self.lambda == [1];
        }
        if self.slots.len() != self.k || self.exponents.len() != self.k || self.k > d as usize {
            return false;
        }
        // (ii): every entry is a prime to the slot exponent, exponent in [1, D]
        for (slot, &g) in self.slots.iter().zip(&self.exponents) {
            if g == 0 || g > d || slot.is_empty() {
                return false;
            }
            for &q in slot {
                let f = factorize(q);
                if f.len() != 1 || f[0].1 != g {
                    return false;
                }
            }
        }
        // (iv): pairwise coprime across all entries
        let all: Vec<u64> = self.slots.iter().flatten().copied().collect();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if gcd(all[i], all[j]) != 1 {
                    return false;
                }
            }
        }
        // (iii): exactly one divisor per slot and their product is w
        self.lambda.iter().all(|&w| {
            let mut prod: u128 = 1;
            for slot in &self.slots {
                let hits: Vec<u64> = slot.iter().copied().filter(|&q| w % q == 0).collect();
                if hits.len() != 1 {
                    return false;
                }
                prod *= hits[0] as u128;
            }
            prod == w as u128
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OPropertyOutcome {
    pub holds: bool,
    pub certificate: Option<OPropertyFamily>,
    pub refutation: Option<String>,
}

fn refute(msg: String) -> OPropertyOutcome {
    OPropertyOutcome { holds: false, certificate: None, refutation: Some(msg) }
}

/// Searches for slots witnessing the O property of `Λ`.
///
/// All members must have the same number `k` of prime factors, each prime
/// a single exponent. Slots are then a colouring of the primes with `k`
/// colours in which co-occurring primes differ and each colour carries one
/// exponent; it is found by backtracking.
pub fn o_property_check(lambda: &[u64], d: u32) -> Result<OPropertyOutcome> {
    let set: BTreeSet<u64> = lambda.iter().copied().collect();
    if set.is_empty() {
        return Err(Error::invalid("Λ must be nonempty"));
    }
    if set.contains(&0) {
        return Err(Error::invalid("Λ must contain positive integers"));
    }
    if set.len() == 1 && set.contains(&1) {
        let cert = OPropertyFamily { k: 0, exponents: vec![], slots: vec![], lambda: vec![1] };
        return Ok(OPropertyOutcome { holds: true, certificate: Some(cert), refutation: None });
    }
    let facts: Vec<(u64, Vec<(u64, u32)>)> = set.iter().map(|&w| (w, factorize(w))).collect();
    let k = facts[0].1.len();
    if let Some((w, f)) = facts.iter().find(|(_, f)| f.len() != k) {
        return Ok(refute(format!("{w} has {} prime factors, {} has {k}", f.len(), facts[0].0)));
    }
    if k > d as usize {
        return Ok(refute(format!("{k} prime factors exceed D={d}")));
    }
    let mut exponent: BTreeMap<u64, u32> = BTreeMap::new();
    for (w, f) in &facts {
        for &(p, e) in f {
            if e > d {
                return Err(Error::invalid(format!("{w}: exponent {e} of {p} exceeds D={d}")));
            }
            if let Some(&old) = exponent.get(&p) {
                if old != e {
                    return Ok(refute(format!("prime {p} appears with exponents {old} and {e}")));
                }
            }
            exponent.insert(p, e);
        }
    }
    let primes: Vec<u64> = exponent.keys().copied().collect();
    let index: BTreeMap<u64, usize> = primes.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut adj = vec![BTreeSet::new(); primes.len()];
    for (_, f) in &facts {
        for &(p, _) in f {
            for &(r, _) in f {
                if p != r {
                    adj[index[&p]].insert(index[&r]);
                }
            }
        }
    }
    let mut colour = vec![usize::MAX; primes.len()];
    let mut slot_exp = vec![0u32; k];
    if !assign(0, &primes, &exponent, &adj, &mut colour, &mut slot_exp) {
        return Ok(refute(format!("no assignment of the primes to {k} coprime slots exists")));
    }
    let mut slots = vec![Vec::new(); k];
    for (i, &p) in primes.iter().enumerate() {
        slots[colour[i]].push(p.pow(exponent[&p]));
    }
    for s in &mut slots {
        s.sort_unstable();
    }
    let cert = OPropertyFamily { k, exponents: slot_exp, slots, lambda: set.into_iter().collect() };
    debug_assert!(cert.verify(d));
    Ok(OPropertyOutcome { holds: true, certificate: Some(cert), refutation: None })
}

fn assign(
    i: usize,
    primes: &[u64],
    exponent: &BTreeMap<u64, u32>,
    adj: &[BTreeSet<usize>],
    colour: &mut [usize],
    slot_exp: &mut [u32],
) -> bool {
    if i == primes.len() {
        return true;
    }
    let e = exponent[&primes[i]];
    let k = slot_exp.len();
    // symmetry breaking: only one fresh slot is tried
    let mut tried_fresh = false;
    for c in 0..k {
        let fresh = slot_exp[c] == 0;
        if fresh && tried_fresh {
            continue;
        }
        if !fresh && slot_exp[c] != e {
            continue;
        }
        if adj[i].iter().any(|&j| colour[j] == c) {
            continue;
        }
        if fresh {
            tried_fresh = true;
            slot_exp[c] = e;
        }
        colour[i] = c;
        if assign(i + 1, primes, exponent, adj, colour, slot_exp) {
            return true;
        }
        colour[i] = usize::MAX;
        if fresh && !colour.contains(&c) {
            slot_exp[c] = 0;
        }
    }
    false
}

/// `Π(V)` for a prime list, sorted.
pub fn pi_of(v: &[u64], d: u32) -> Result<Vec<u64>> {
    let mut out = BTreeSet::new();
    let m = v.len();
    for k in 1..=(d as usize).min(m) {
        for_each_subset(m, k, &mut |sub: &[usize]| {
            for_each_in_box(k, 1, d as i64, |g| {
                let mut w: u64 = 1;
                for (&i, &e) in sub.iter().zip(g) {
                    w = w
                        .checked_mul(v[i].checked_pow(e as u32).ok_or_else(|| Error::Overflow("prime power".into()))?)
                        .ok_or_else(|| Error::Overflow("product of prime powers".into()))?;
                }
                out.insert(w);
                Ok(())
            })
        })?;
    }
    Ok(out.into_iter().collect())
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return Ok(());
    }
    loop {
        f(&cur)?;
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ODecomposition {
    /// Pairwise disjoint O-property sets whose union is `Π(V)`.
    pub sets: Vec<OPropertyFamily>,
    /// Partition-family size used for each `k`.
    pub family_sizes: Vec<usize>,
    /// `D·D^D·max_k r(|V|, k)`.
    pub bound: usize,
}

/// Splits `Π(V)` into O-property sets: for each `k ≤ D`, each exponent
/// pattern `γ ∈ [1, D]^k` and each partition `V = V_1 ⊔ … ⊔ V_k` of a
/// covering family, the set `{Π_j p_j^{γ_j} : p_j ∈ V_j}`. Elements already
/// emitted are removed from later sets, which keeps the O property.
pub fn decompose_o_property(v: &[u64], d: u32, seed: u64) -> Result<ODecomposition> {
    let mut primes: Vec<u64> = v.to_vec();
    primes.sort_unstable();
    primes.dedup();
    if primes.is_empty() || d == 0 {
        return Err(Error::invalid("need a nonempty prime set and D >= 1"));
    }
    if let Some(&bad) = primes.iter().find(|&&p| factorize(p).len() != 1 || factorize(p)[0].1 != 1) {
        return Err(Error::invalid(format!("{bad} is not prime")));
    }
    let m = primes.len();
    let kmax = (d as usize).min(m);
    let mut covered = BTreeSet::new();
    let mut sets = Vec::new();
    let mut family_sizes = Vec::new();
    let mut r_max = 0;
    for k in 1..=kmax {
        let fam = partition_family(m, k, crate::rng::split(seed, &format!("odecomp/{k}")))?;
        family_sizes.push(fam.len());
        r_max = r_max.max(partition_bound(m, k));
        for_each_in_box(k, 1, d as i64, |g| {
            for i in 0..fam.len() {
                let parts: Vec<Vec<u64>> = fam.parts(i).iter().map(|p| p.iter().map(|&x| primes[x]).collect()).collect();
                let mut lambda = Vec::new();
                let sizes: Vec<i64> = parts.iter().map(|p| p.len() as i64).collect();
                let mut idx = vec![0usize; k];
                loop {
                    let mut w: u64 = 1;
                    for j in 0..k {
                        w = w
                            .checked_mul(parts[j][idx[j]].pow(g[j] as u32))
                            .ok_or_else(|| Error::Overflow("element of Π(V)".into()))?;
                    }
                    if covered.insert(w) {
                        lambda.push(w);
                    }
                    let mut pos = k;
                    loop {
                        if pos == 0 {
                            break;
                        }
                        pos -= 1;
                        idx[pos] += 1;
                        if (idx[pos] as i64) < sizes[pos] {
                            break;
                        }
                        idx[pos] = 0;
                    }
                    if idx.iter().all(|&x| x == 0) {
                        break;
                    }
                }
                if lambda.is_empty() {
                    continue;
                }
                lambda.sort_unstable();
                let exponents: Vec<u32> = g.iter().map(|&e| e as u32).collect();
                let slots: Vec<Vec<u64>> = parts
                    .iter()
                    .zip(&exponents)
                    .map(|(p, &e)| {
                        let mut s: Vec<u64> =
                            p.iter().map(|&q| q.pow(e)).filter(|&q| lambda.iter().any(|&w| w % q == 0)).collect();
                        s.sort_unstable();
                        s
                    })
                    .collect();
                sets.push(OPropertyFamily { k, exponents, slots, lambda });
            }
            Ok(())
        })?;
    }
    let bound = d as usize * (d as usize).pow(d) * r_max;
    if sets.len() > bound {
        return Err(Error::Evaluation(format!("{} sets exceed the bound {bound}", sets.len())));
    }
    Ok(ODecomposition { sets, family_sizes, bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sets() {
        let one = o_property_check(&[1], 2).unwrap();
        assert!(one.holds && one.certificate.unwrap().k == 0);
        assert!(!o_property_check(&[6, 10, 15], 2).unwrap().holds);
        let ok = o_property_check(&[10, 14, 15, 21], 2).unwrap();
        assert!(ok.holds);
        let cert = ok.certificate.unwrap();
        assert_eq!(cert.slots, vec![vec![2, 3], vec![5, 7]]);
        assert!(cert.verify(2));
    }

    #[test]
    fn exponent_conflicts() {
        assert!(!o_property_check(&[2, 4], 2).unwrap().holds);
        assert!(!o_property_check(&[6, 5], 2).unwrap().holds);
        assert!(o_property_check(&[4, 9], 2).unwrap().holds);
        assert!(!o_property_check(&[4, 3], 2).unwrap().holds);
    }

    #[test]
    fn single_prime() {
        let dec = decompose_o_property(&[5], 2, 1).unwrap();
        let lambdas: Vec<Vec<u64>> = dec.sets.iter().map(|s| s.lambda.clone()).collect();
        assert_eq!(lambdas, vec![vec![5], vec![25]]);
    }

    #[test]
    fn two_primes() {
        let dec = decompose_o_property(&[5, 7], 2, 3).unwrap();
        let s = dec.sets.iter().find(|s| s.k == 2 && s.exponents == [1, 1]).unwrap();
        assert_eq!(s.lambda, vec![35]);
        assert_eq!(pi_of(&[5, 7], 2).unwrap().len(), 8);
    }
}
