//! Families of partitions of `[1, N]` into `k` parts such that every
//! `k`-subset is split by at least one member.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::binomial;
use crate::rng;

/// Exhaustive verification budget on `C(N, k)`.
pub const VERIFY_BUDGET: u128 = 1_000_000;
const CANDIDATES: usize = 48;
const MAX_ATTEMPTS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionFamily {
    pub n: usize,
    pub k: usize,
    /// Each partition labels the ground set `0..n` with parts `0..k`.
    pub partitions: Vec<Vec<usize>>,
}

impl PartitionFamily {
    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// The parts of partition `i` as sorted index lists.
    pub fn parts(&self, i: usize) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.k];
        for (x, &l) in self.partitions[i].iter().enumerate() {
            parts[l].push(x);
        }
        parts
    }

    /// Every partition surjective and every `k`-subset split by a member.
    pub fn verify(&self) -> Result<bool> {
        let surjective = self.partitions.iter().all(|p| {
            let mut seen = vec![false; self.k];
            for &l in p {
                match seen.get_mut(l) {
                    Some(s) => *s = true,
                    None => return false,
                }
            }
            p.len() == self.n && seen.iter().all(|&s| s)
        });
        if !surjective {
            return Ok(false);
        }
        let subsets = k_subsets(self.n, self.k)?;
        Ok(subsets.iter().all(|e| self.partitions.iter().any(|p| splits(p, e, self.k))))
    }
}

/// `⌈(k^{k+1}/k!)·ln(eN/k)⌉ + 1`.
pub fn partition_bound(n: usize, k: usize) -> usize {
    let kf = k as f64;
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    let c = kf.powi(k as i32 + 1) / fact * (std::f64::consts::E * n as f64 / kf).ln();
    c.ceil() as usize + 1
}

fn k_subsets(n: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    if binomial(n as u64, k as u64) > VERIFY_BUDGET {
        return Err(Error::BudgetExceeded(format!("C({n}, {k}) subsets to verify")));
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return Ok(out);
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
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

fn splits(labels: &[usize], e: &[usize], k: usize) -> bool {
    let mut seen = 0u64;
    for &x in e {
        seen |= 1 << labels[x];
    }
    seen.count_ones() as usize == k
}

fn random_surjection(rng: &mut rng::StreamRng, n: usize, k: usize) -> Vec<usize> {
    loop {
        let p: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let mut seen = vec![false; k];
        for &l in &p {
            seen[l] = true;
        }
        if seen.iter().all(|&s| s) {
            return p;
        }
    }
}

/// Builds a covering family greedily from seeded random surjections and
/// verifies it exhaustively before returning.
pub fn partition_family(n: usize, k: usize, seed: u64) -> Result<PartitionFamily> {
    if k == 0 || n < k {
        return Err(Error::invalid(format!("need 1 <= k <= N, got N={n}, k={k}")));
    }
    if k > 64 {
        return Err(Error::invalid("k is limited to 64 parts"));
    }
    if k == 1 {
        return Ok(PartitionFamily { n, k, partitions: vec![vec![0; n]] });
    }
    if k == n {
        return Ok(PartitionFamily { n, k, partitions: vec![(0..n).collect()] });
    }
    let subsets = k_subsets(n, k)?;
    let bound = partition_bound(n, k);
    let mut rng = rng::stream(seed, &format!("partition-family/{n}/{k}"));
    for _ in 0..MAX_ATTEMPTS {
        let mut uncovered: Vec<bool> = vec![true; subsets.len()];
        let mut left = subsets.len();
        let mut family = Vec::new();
        while left > 0 && family.len() < bound {
            let mut best: Option<(usize, Vec<usize>)> = None;
            for _ in 0..CANDIDATES {
                let cand = random_surjection(&mut rng, n, k);
                let gain = subsets
                    .iter()
                    .zip(&uncovered)
                    .filter(|(e, &u)| u && splits(&cand, e, k))
                    .count();
                if best.as_ref().is_none_or(|(g, _)| gain > *g) {
                    best = Some((gain, cand));
                }
            }
            let (gain, cand) = best.expect("at least one candidate");
            if gain == 0 {
                continue;
            }
            for (e, u) in subsets.iter().zip(uncovered.iter_mut()) {
                if *u && splits(&cand, e, k) {
                    *u = false;
                    left -= 1;
                }
            }
            family.push(cand);
        }
        if left == 0 {
            let fam = PartitionFamily { n, k, partitions: family };
            if fam.verify()? {
                return Ok(fam);
            }
        }
    }
    Err(Error::RetryLimit(format!(
        "no covering family of size <= {bound} for N={n}, k={k} after {MAX_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_sizes() {
        assert_eq!(partition_family(5, 1, 0).unwrap().partitions, vec![vec![0; 5]]);
        assert_eq!(partition_family(4, 4, 0).unwrap().partitions, vec![vec![0, 1, 2, 3]]);
        assert!(partition_family(3, 4, 0).is_err());
    }

    #[test]
    fn pairs_of_four() {
        let fam = PartitionFamily { n: 4, k: 2, partitions: vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]] };
        assert!(fam.verify().unwrap());
        let bad = PartitionFamily { n: 4, k: 2, partitions: vec![vec![0, 0, 1, 1]] };
        assert!(!bad.verify().unwrap());
        let built = partition_family(4, 2, 7).unwrap();
        assert!(built.verify().unwrap() && built.len() <= partition_bound(4, 2));
    }

    #[test]
    fn bound_formula() {
        // (8/2)·ln(2e) = 6.77…
        assert_eq!(partition_bound(4, 2), 8);
    }
}
