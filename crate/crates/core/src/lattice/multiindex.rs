use num_bigint::BigInt;

use crate::error::{Error, Result};

/// Largest magnitude kept on the machine-integer path of [`canonical_eval`].
pub const DEFAULT_MAGNITUDE_LIMIT: u128 = 1 << 62;

/// The index set Γ of nonzero multi-indices in the box `[0, n0]^k`, in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndexSet {
    k: usize,
    n0: u32,
    gammas: Vec<Vec<u32>>,
}

impl MultiIndexSet {
    /// Γ for a source lattice `Z^k` and maximal degree `n0`.
    pub fn new(k: usize, n0: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if n0 == 0 {
            return Err(Error::invalid("N0 must be at least 1"));
        }
        let side = n0 as usize + 1;
        let total = side
            .checked_pow(k as u32)
            .ok_or_else(|| Error::BudgetExceeded(format!("(N0+1)^k for k={k}, N0={n0}")))?;
        let mut gammas = Vec::with_capacity(total - 1);
        let mut cur = vec![0u32; k];
        // odometer with the last coordinate running fastest gives lexicographic order
        loop {
            let mut pos = k;
            loop {
                if pos == 0 {
                    return Ok(Self { k, n0, gammas });
                }
                pos -= 1;
                if cur[pos] < n0 {
                    cur[pos] += 1;
                    for c in cur.iter_mut().skip(pos + 1) {
                        *c = 0;
                    }
                    break;
                }
            }
            gammas.push(cur.clone());
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n0(&self) -> u32 {
        self.n0
    }

    /// Cardinality `d = (n0+1)^k - 1`.
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.gammas.iter().map(|g| g.as_slice())
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.gammas[i]
    }

    pub fn index_of(&self, gamma: &[u32]) -> Option<usize> {
        self.gammas.binary_search_by(|g| g.as_slice().cmp(gamma)).ok()
    }

    /// Total degree `|γ|` of each index, in order.
    pub fn orders(&self) -> Vec<u32> {
        self.gammas.iter().map(|g| g.iter().sum()).collect()
    }

    pub fn degree_matrix(&self) -> DegreeMatrix {
        DegreeMatrix { orders: self.orders() }
    }
}

/// The diagonal matrix `A` with `(Av)_γ = |γ| v_γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeMatrix {
    orders: Vec<u32>,
}

impl DegreeMatrix {
    pub fn from_orders(orders: Vec<u32>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::invalid("degree entries must be positive"));
        }
        Ok(Self { orders })
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn dim(&self) -> usize {
        self.orders.len()
    }
}

/// `t^A x = (t^{|γ|} x_γ)`.
pub fn dilate(t: f64, a: &DegreeMatrix, x: &[f64]) -> Result<Vec<f64>> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("dilation parameter must be positive, got {t}")));
    }
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: x.len() });
    }
    Ok(x.iter()
        .zip(a.orders())
        .map(|(&v, &o)| t.powi(o as i32) * v)
        .collect())
}

/// `‖t^A x‖_∞`.
pub fn dilated_sup_norm(t: f64, a: &DegreeMatrix, x: &[f64]) -> Result<f64> {
    Ok(dilate(t, a, x)?.into_iter().fold(0.0, |m, v| m.max(v.abs())))
}

fn monomial_checked(y: &[i64], gamma: &[u32], limit: u128) -> Option<i128> {
    let mut acc: i128 = 1;
    for (&yi, &e) in y.iter().zip(gamma) {
        for _ in 0..e {
            acc = acc.checked_mul(yi as i128)?;
            if acc.unsigned_abs() > limit {
                return None;
            }
        }
    }
    Some(acc)
}

fn monomial_big(y: &[i64], gamma: &[u32]) -> BigInt {
    y.iter()
        .zip(gamma)
        .map(|(&yi, &e)| num_traits::pow(BigInt::from(yi), e as usize))
        .product()
}

fn check_dim(y: &[i64], gamma: &MultiIndexSet) -> Result<()> {
    if y.len() != gamma.k() {
        return Err(Error::DimensionMismatch { expected: gamma.k(), got: y.len() });
    }
    Ok(())
}

/// The canonical mapping `Q(y) = (y^γ)_{γ∈Γ}` in exact arithmetic. Monomials
/// whose magnitude exceeds `limit` are recomputed with big integers.
pub fn canonical_eval_with_limit(y: &[i64], gamma: &MultiIndexSet, limit: u128) -> Result<Vec<BigInt>> {
    check_dim(y, gamma)?;
    Ok(gamma
        .iter()
        .map(|g| match monomial_checked(y, g, limit) {
            Some(v) => BigInt::from(v),
            None => monomial_big(y, g),
        })
        .collect())
}

pub fn canonical_eval(y: &[i64], gamma: &MultiIndexSet) -> Result<Vec<BigInt>> {
    canonical_eval_with_limit(y, gamma, DEFAULT_MAGNITUDE_LIMIT)
}

/// Machine-integer `Q(y)`; fails with [`Error::Overflow`] past 2^62.
pub fn canonical_eval_i64(y: &[i64], gamma: &MultiIndexSet) -> Result<Vec<i64>> {
    check_dim(y, gamma)?;
    gamma
        .iter()
        .map(|g| {
            monomial_checked(y, g, DEFAULT_MAGNITUDE_LIMIT)
                .map(|v| v as i64)
                .ok_or_else(|| Error::Overflow(format!("y^{g:?} at y={y:?}")))
        })
        .collect()
}

/// `y^γ mod q` for nonnegative `y`.
pub(crate) fn monomial_mod(y: &[u64], gamma: &[u32], q: u64) -> u64 {
    let mut acc: u128 = 1 % q as u128;
    for (&yi, &e) in y.iter().zip(gamma) {
        acc = acc * crate::numtheory::pow_mod(yi, e as u64, q) as u128 % q as u128;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_small_cases() {
        let g = MultiIndexSet::new(1, 2).unwrap();
        assert_eq!(g.iter().collect::<Vec<_>>(), vec![&[1][..], &[2][..]]);
        let g = MultiIndexSet::new(2, 1).unwrap();
        assert_eq!(
            g.iter().collect::<Vec<_>>(),
            vec![&[0, 1][..], &[1, 0][..], &[1, 1][..]]
        );
        assert_eq!(MultiIndexSet::new(2, 2).unwrap().len(), 8);
        assert_eq!(MultiIndexSet::new(3, 3).unwrap().len(), 63);
    }

    #[test]
    fn gamma_rejects_zero_parameters() {
        assert!(MultiIndexSet::new(0, 2).is_err());
        assert!(MultiIndexSet::new(2, 0).is_err());
    }

    #[test]
    fn gamma_is_strictly_sorted_without_zero() {
        for k in 1..=3 {
            for n0 in 1..=3 {
                let g = MultiIndexSet::new(k, n0).unwrap();
                assert_eq!(g.len(), (n0 as usize + 1).pow(k as u32) - 1);
                assert!(g.iter().all(|x| x.iter().any(|&c| c > 0)));
                assert!(g.iter().zip(g.iter().skip(1)).all(|(a, b)| a < b));
            }
        }
    }

    #[test]
    fn canonical_examples() {
        let g = MultiIndexSet::new(1, 2).unwrap();
        assert_eq!(canonical_eval_i64(&[2], &g).unwrap(), vec![2, 4]);
        let g2 = MultiIndexSet::new(2, 1).unwrap();
        assert_eq!(canonical_eval_i64(&[2, 3], &g2).unwrap(), vec![3, 2, 6]);
        let g3 = MultiIndexSet::new(2, 3).unwrap();
        assert!(canonical_eval_i64(&[1, 1], &g3).unwrap().iter().all(|&v| v == 1));
        assert!(canonical_eval_i64(&[1, 2, 3], &g3).is_err());
    }

    #[test]
    fn canonical_promotes_to_big_integers() {
        let g = MultiIndexSet::new(1, 5).unwrap();
        let y = [3_000_000_000i64];
        assert!(canonical_eval_i64(&y, &g).is_err());
        let big = canonical_eval(&y, &g).unwrap();
        assert_eq!(big[4], num_traits::pow(BigInt::from(3_000_000_000i64), 5));
        // a tiny limit forces the big path everywhere and must agree
        let small = canonical_eval_with_limit(&[7, -3], &MultiIndexSet::new(2, 2).unwrap(), 1).unwrap();
        let fast = canonical_eval(&[7, -3], &MultiIndexSet::new(2, 2).unwrap()).unwrap();
        assert_eq!(small, fast);
    }

    #[test]
    fn dilation_examples() {
        let a = DegreeMatrix::from_orders(vec![1, 2]).unwrap();
        assert_eq!(dilate(1.0, &a, &[3.0, -5.0]).unwrap(), vec![3.0, -5.0]);
        assert_eq!(dilate(2.0, &a, &[1.0, 1.0]).unwrap(), vec![2.0, 4.0]);
        assert_eq!(dilate(0.5, &a, &[4.0, 8.0]).unwrap(), vec![2.0, 2.0]);
        assert!(dilate(0.0, &a, &[1.0, 1.0]).is_err());
        assert!(dilate(-1.0, &a, &[1.0, 1.0]).is_err());
    }
}
