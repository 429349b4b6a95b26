//! The projection multiplier `Ξ(ξ) = Σ_{a/q} η(E^{-1}(ξ − a/q))`.

use serde::{Deserialize, Serialize};

use super::denominators::RationalSet;
use crate::error::{Error, Result};
use crate::expsums::centered_frac;
use crate::kernels::smooth_step;

/// Radial cutoff in the sup norm: 1 on `‖x‖ ≤ 1/(16d)`, 0 on `‖x‖ ≥ 1/(8d)`.
pub fn projection_bump(x: &[f64], d: usize) -> f64 {
    let r = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    smooth_step(8.0 * d as f64 * r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionValue {
    pub value: f64,
    /// Bump supports are pairwise disjoint.
    pub disjoint: bool,
}

/// `Ξ` for a fixed rational set and scales `ε_γ`.
#[derive(Debug, Clone)]
pub struct ProjectionMultiplier<'a> {
    set: &'a RationalSet,
    eps: Vec<f64>,
    disjoint: bool,
    overlap: Option<(usize, usize)>,
}

fn scaled_offset(xi: &[f64], r: &[f64], eps: &[f64]) -> Vec<f64> {
    xi.iter().zip(r).zip(eps).map(|((x, a), e)| centered_frac(x - a) / e).collect()
}

impl<'a> ProjectionMultiplier<'a> {
    pub fn new(set: &'a RationalSet, eps: Vec<f64>) -> Result<Self> {
        if eps.len() != set.dim() {
            return Err(Error::DimensionMismatch { expected: set.dim(), got: eps.len() });
        }
        if eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return Err(Error::invalid("every ε must be a positive real"));
        }
        let d = set.dim();
        let centers: Vec<Vec<f64>> = set.points().iter().map(|p| p.to_f64()).collect();
        let mut overlap = None;
        'outer: for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                let off = scaled_offset(&centers[i], &centers[j], &eps);
                if off.iter().fold(0.0f64, |m, v| m.max(v.abs())) < 1.0 / (4.0 * d as f64) {
                    overlap = Some((i, j));
                    break 'outer;
                }
            }
        }
        Ok(Self { set, eps, disjoint: overlap.is_none(), overlap })
    }

    pub fn disjoint(&self) -> bool {
        self.disjoint
    }

    /// Indices of a pair of rationals whose bumps meet, if any.
    pub fn overlap(&self) -> Option<(usize, usize)> {
        self.overlap
    }

    pub fn eval(&self, xi: &[f64]) -> Result<ProjectionValue> {
        let d = self.set.dim();
        if xi.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: xi.len() });
        }
        let value = self
            .set
            .points()
            .iter()
            .map(|p| projection_bump(&scaled_offset(xi, &p.to_f64(), &self.eps), d))
            .sum();
        Ok(ProjectionValue { value, disjoint: self.disjoint })
    }
}

pub fn projection_multiplier(xi: &[f64], set: &RationalSet, eps: &[f64]) -> Result<ProjectionValue> {
    ProjectionMultiplier::new(set, eps.to_vec())?.eval(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::build_rational_set;
    use crate::lattice::MultiIndexSet;

    #[test]
    fn centre_and_far_field() {
        let g = MultiIndexSet::new(1, 1).unwrap();
        let set = build_rational_set(&[1, 2, 3], &g, 100).unwrap();
        let eps = [1e-3];
        assert_eq!(projection_multiplier(&[1.0 / 3.0], &set, &eps).unwrap().value, 1.0);
        assert_eq!(projection_multiplier(&[0.0], &set, &eps).unwrap().value, 1.0);
        assert_eq!(projection_multiplier(&[0.1], &set, &eps).unwrap().value, 0.0);
        let wide = ProjectionMultiplier::new(&set, vec![2.0]).unwrap();
        assert!(!wide.disjoint());
    }
}
