use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::multiindex::{canonical_eval_i64, MultiIndexSet};
use crate::error::{Error, Result};

/// One monomial `c · x^γ` of a mapping component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: i64,
    pub exp: Vec<u32>,
}

/// An integer polynomial mapping `P = (P_1, …, P_{d0}) : Z^k → Z^{d0}` with
/// `P(0) = 0`, stored through its coefficients over Γ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialMapping {
    d0: usize,
    gamma: MultiIndexSet,
    /// `coeffs[j][i]` is the coefficient of `x^{Γ_i}` in `P_j`.
    coeffs: Vec<Vec<i64>>,
}

/// Serialized form accepted by the CLI: `{"k":1,"components":[[{"coeff":1,"exp":[1]}], …]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingSpec {
    pub k: usize,
    pub components: Vec<Vec<Term>>,
}

impl PolynomialMapping {
    /// Builds a mapping from per-component monomial lists. The largest
    /// single exponent fixes `N0` and hence Γ.
    pub fn from_terms(k: usize, components: &[Vec<Term>]) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if components.is_empty() {
            return Err(Error::invalid("mapping needs at least one component"));
        }
        let mut n0 = 1u32;
        for t in components.iter().flatten() {
            if t.exp.len() != k {
                return Err(Error::DimensionMismatch { expected: k, got: t.exp.len() });
            }
            let deg: u32 = t.exp.iter().sum();
            if deg == 0 && t.coeff != 0 {
                return Err(Error::invalid("constant terms are not allowed (P(0) must be 0)"));
            }
            n0 = n0.max(t.exp.iter().copied().max().unwrap_or(0));
        }
        let gamma = MultiIndexSet::new(k, n0)?;
        let mut coeffs = vec![vec![0i64; gamma.len()]; components.len()];
        for (j, comp) in components.iter().enumerate() {
            for t in comp {
                if t.coeff == 0 {
                    continue;
                }
                let i = gamma.index_of(&t.exp).expect("degree bounded by N0");
                coeffs[j][i] = coeffs[j][i]
                    .checked_add(t.coeff)
                    .ok_or_else(|| Error::Overflow("coefficient sum".into()))?;
            }
        }
        Ok(Self { d0: components.len(), gamma, coeffs })
    }

    pub fn from_spec(spec: &MappingSpec) -> Result<Self> {
        Self::from_terms(spec.k, &spec.components)
    }

    /// Coefficients given directly over an existing Γ.
    pub fn from_coefficients(gamma: MultiIndexSet, coeffs: Vec<Vec<i64>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("mapping needs at least one component"));
        }
        for row in &coeffs {
            if row.len() != gamma.len() {
                return Err(Error::DimensionMismatch { expected: gamma.len(), got: row.len() });
            }
        }
        Ok(Self { d0: coeffs.len(), gamma, coeffs })
    }

    /// The canonical mapping itself: `L` is the identity on `Z^d`.
    pub fn canonical(gamma: MultiIndexSet) -> Self {
        let d = gamma.len();
        let coeffs = (0..d)
            .map(|j| (0..d).map(|i| i64::from(i == j)).collect())
            .collect();
        Self { d0: d, gamma, coeffs }
    }

    /// `P(x) = (x_1, …, x_k)`.
    pub fn identity(k: usize) -> Result<Self> {
        let comps: Vec<Vec<Term>> = (0..k)
            .map(|i| {
                let mut exp = vec![0; k];
                exp[i] = 1;
                vec![Term { coeff: 1, exp }]
            })
            .collect();
        Self::from_terms(k, &comps)
    }

    /// The moment curve `x ↦ (x, x², …, x^d)` on `Z`.
    pub fn moment_curve(d: u32) -> Result<Self> {
        let comps: Vec<Vec<Term>> = (1..=d).map(|e| vec![Term { coeff: 1, exp: vec![e] }]).collect();
        Self::from_terms(1, &comps)
    }

    pub fn k(&self) -> usize {
        self.gamma.k()
    }

    pub fn d0(&self) -> usize {
        self.d0
    }

    pub fn gamma(&self) -> &MultiIndexSet {
        &self.gamma
    }

    pub fn coefficients(&self) -> &[Vec<i64>] {
        &self.coeffs
    }

    pub fn to_spec(&self) -> MappingSpec {
        let components = self
            .coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| Term { coeff: c, exp: self.gamma.get(i).to_vec() })
                    .collect()
            })
            .collect();
        MappingSpec { k: self.k(), components }
    }

    /// `P(y)` through the lifted form `L(Q(y))`.
    pub fn eval(&self, y: &[i64]) -> Result<Vec<i64>> {
        let q = canonical_eval_i64(y, &self.gamma)?;
        LinearMap::from_mapping(self).apply_i64(&q)
    }
}

/// The integer matrix `L : R^d → R^{d0}` with `(Lv)_j = Σ_γ c_j^γ v_γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    rows: Vec<Vec<i64>>,
}

impl LinearMap {
    fn from_mapping(p: &PolynomialMapping) -> Self {
        Self { rows: p.coeffs.clone() }
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn source_dim(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn target_dim(&self) -> usize {
        self.rows.len()
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.source_dim() {
            return Err(Error::DimensionMismatch { expected: self.source_dim(), got: len });
        }
        Ok(())
    }

    pub fn apply_i64(&self, v: &[i64]) -> Result<Vec<i64>> {
        self.check(v.len())?;
        self.rows
            .iter()
            .map(|row| {
                let mut acc: i128 = 0;
                for (&c, &x) in row.iter().zip(v) {
                    acc += c as i128 * x as i128;
                }
                i64::try_from(acc).map_err(|_| Error::Overflow("L v".into()))
            })
            .collect()
    }

    pub fn apply_big(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check(v.len())?;
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(&c, x)| BigInt::from(c) * x).sum())
            .collect())
    }

    /// `L^T ξ`, which turns a frequency on `T^{d0}` into one on `T^d`.
    pub fn transpose_apply(&self, xi: &[f64]) -> Result<Vec<f64>> {
        if xi.len() != self.target_dim() {
            return Err(Error::DimensionMismatch { expected: self.target_dim(), got: xi.len() });
        }
        let d = self.source_dim();
        Ok((0..d)
            .map(|i| self.rows.iter().zip(xi).map(|(row, &x)| row[i] as f64 * x).sum())
            .collect())
    }

    /// Integer form of `L^T a` for integer frequency numerators.
    pub fn transpose_apply_i64(&self, a: &[i64]) -> Result<Vec<i64>> {
        if a.len() != self.target_dim() {
            return Err(Error::DimensionMismatch { expected: self.target_dim(), got: a.len() });
        }
        let d = self.source_dim();
        (0..d)
            .map(|i| {
                let s: i128 = self.rows.iter().zip(a).map(|(row, &x)| row[i] as i128 * x as i128).sum();
                s.to_i64().ok_or_else(|| Error::Overflow("L^T a".into()))
            })
            .collect()
    }
}

/// Returns Γ and `L` with `L ∘ Q = P`.
pub fn lift(p: &PolynomialMapping) -> (MultiIndexSet, LinearMap) {
    (p.gamma.clone(), LinearMap::from_mapping(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(coeff: i64, exp: &[u32]) -> Term {
        Term { coeff, exp: exp.to_vec() }
    }

    #[test]
    fn lift_of_square() {
        let p = PolynomialMapping::from_terms(1, &[vec![t(1, &[2])]]).unwrap();
        let (g, l) = lift(&p);
        assert_eq!(g.len(), 2);
        assert_eq!(l.rows(), &[vec![0, 1]]);
        assert_eq!(l.apply_i64(&[3, 9]).unwrap(), vec![9]);
        assert_eq!(p.eval(&[3]).unwrap(), vec![9]);
    }

    #[test]
    fn lift_of_mixed_term() {
        let p = PolynomialMapping::from_terms(2, &[vec![t(1, &[1, 0]), t(2, &[1, 1])]]).unwrap();
        let (_, l) = lift(&p);
        assert_eq!(l.rows(), &[vec![0, 1, 2]]);
        assert_eq!(p.eval(&[4, -2]).unwrap(), vec![4 - 16]);
    }

    #[test]
    fn constant_terms_rejected() {
        assert!(PolynomialMapping::from_terms(1, &[vec![t(3, &[0])]]).is_err());
        assert!(PolynomialMapping::from_terms(2, &[vec![t(3, &[1])]]).is_err());
    }

    #[test]
    fn transpose_matches_pairing() {
        let p = PolynomialMapping::from_terms(1, &[vec![t(1, &[1]), t(-2, &[2])], vec![t(5, &[2])]]).unwrap();
        let (_, l) = lift(&p);
        let xi = [0.3, -0.7];
        let lt = l.transpose_apply(&xi).unwrap();
        let v = [2i64, 4];
        let lv = l.apply_i64(&v).unwrap();
        let lhs: f64 = xi.iter().zip(&lv).map(|(a, &b)| a * b as f64).sum();
        let rhs: f64 = lt.iter().zip(&v).map(|(a, &b)| a * b as f64).sum();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn spec_round_trip() {
        let p = PolynomialMapping::moment_curve(3).unwrap();
        let back = PolynomialMapping::from_spec(&p.to_spec()).unwrap();
        assert_eq!(p, back);
    }
}
