//! Discrete Radon averages `M_N`, truncated singular transforms `T_N`,
//! dyadic partial sums `Σ_{j≤n} K_j` and their maximal functions.
//!
//! Everything is computed by direct summation: the kernel is pushed forward
//! through `P = L ∘ Q` (collisions accumulated, lexicographic in `y`) and
//! then convolved with `f`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{averaging_kernel, for_each_in_box, CzKernel, DyadicKernelPiece};
use crate::lattice::{lift, FunctionFamily, LatticeFunction, PolynomialMapping, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    Average,
    Truncated,
    DyadicSum,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Average => "average",
            Self::Truncated => "truncated",
            Self::DyadicSum => "dyadic-sum",
        })
    }
}

/// An operator family indexed by a grid parameter: `N` for averages and
/// truncations, the top index `n` for dyadic sums.
#[derive(Clone, Copy)]
pub enum Operator<'a> {
    Average,
    Truncated(&'a dyn CzKernel),
    DyadicSum(&'a [DyadicKernelPiece]),
}

impl Operator<'_> {
    pub fn kind(&self) -> OperatorKind {
        match self {
            Self::Average => OperatorKind::Average,
            Self::Truncated(_) => OperatorKind::Truncated,
            Self::DyadicSum(_) => OperatorKind::DyadicSum,
        }
    }

    /// The convolution kernel on `Z^{d0}` at grid parameter `n`.
    pub fn kernel(&self, p: &PolynomialMapping, n: u64) -> Result<LatticeFunction> {
        match self {
            Self::Average => average_kernel_pushed(p, n),
            Self::Truncated(k) => truncated_kernel_pushed(p, *k, n),
            Self::DyadicSum(pieces) => dyadic_kernel_pushed(p, pieces, n),
        }
    }

    pub fn apply(&self, f: &LatticeFunction, p: &PolynomialMapping, n: u64) -> Result<OperatorResult> {
        check_dims(f, p)?;
        let kernel = self.kernel(p, n)?;
        Ok(OperatorResult { function: f.convolve(&kernel)?, n, kind: self.kind() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorResult {
    pub function: LatticeFunction,
    /// `N`, or the top dyadic index for [`OperatorKind::DyadicSum`].
    pub n: u64,
    pub kind: OperatorKind,
}

fn check_dims(f: &LatticeFunction, p: &PolynomialMapping) -> Result<()> {
    if f.dim() != p.d0() {
        return Err(Error::DimensionMismatch { expected: p.d0(), got: f.dim() });
    }
    Ok(())
}

/// `N^{-k} Σ_{y∈[1,N]^k} δ_{P(y)}`: the canonical averaging kernel pushed
/// through `L`, with integer multiplicities until the final division.
pub fn average_kernel_pushed(p: &PolynomialMapping, n: u64) -> Result<LatticeFunction> {
    let (gamma, l) = lift(p);
    let ak = averaging_kernel(n, &gamma)?;
    let mut counts: BTreeMap<Point, u64> = BTreeMap::new();
    for (z, &c) in ak.counts() {
        *counts.entry(l.apply_i64(z)?).or_default() += c;
    }
    let den = ak.denominator() as f64;
    LatticeFunction::from_pairs(p.d0(), counts.into_iter().map(|(x, c)| (x, Complex64::new(c as f64 / den, 0.0))))
}

fn to_f64(y: &[i64]) -> Vec<f64> {
    y.iter().map(|&v| v as f64).collect()
}

/// `Σ_{0<|y|_∞≤N} K(y) δ_{P(y)}`.
pub fn truncated_kernel_pushed(p: &PolynomialMapping, kernel: &dyn CzKernel, n: u64) -> Result<LatticeFunction> {
    if kernel.dim() != p.k() {
        return Err(Error::DimensionMismatch { expected: p.k(), got: kernel.dim() });
    }
    let n = i64::try_from(n).map_err(|_| Error::Overflow("N".into()))?;
    let mut out = LatticeFunction::zero(p.d0());
    for_each_in_box(p.k(), -n, n, |y| {
        if y.iter().all(|&c| c == 0) {
            return Ok(());
        }
        out.add_at(p.eval(y)?, kernel.eval(&to_f64(y)))
    })?;
    Ok(out)
}

/// `Σ_{j≤n} Σ_y K_j(y) δ_{P(y)}`, pieces visited in order of `j`.
pub fn dyadic_kernel_pushed(p: &PolynomialMapping, pieces: &[DyadicKernelPiece], n: u64) -> Result<LatticeFunction> {
    let n = usize::try_from(n).map_err(|_| Error::Overflow("n".into()))?;
    if n >= pieces.len() {
        return Err(Error::invalid(format!("n={n} but only pieces 0..{} are available", pieces.len())));
    }
    let mut out = LatticeFunction::zero(p.d0());
    for (j, piece) in pieces[..=n].iter().enumerate() {
        if piece.index() as usize != j {
            return Err(Error::invalid(format!("piece {j} carries index {}", piece.index())));
        }
        if piece.dim() != p.k() {
            return Err(Error::DimensionMismatch { expected: p.k(), got: piece.dim() });
        }
        for y in piece.lattice_support() {
            out.add_at(p.eval(&y)?, piece.eval_at(&to_f64(&y)))?;
        }
    }
    Ok(out)
}

/// `M_N^P f(x) = N^{-k} Σ_{y∈[1,N]^k} f(x − P(y))`.
pub fn apply_average(f: &LatticeFunction, p: &PolynomialMapping, n: u64) -> Result<OperatorResult> {
    Operator::Average.apply(f, p, n)
}

/// `T_N^P f(x) = Σ_{0<|y|_∞≤N} f(x − P(y)) K(y)`.
pub fn apply_truncated(f: &LatticeFunction, p: &PolynomialMapping, kernel: &dyn CzKernel, n: u64) -> Result<OperatorResult> {
    Operator::Truncated(kernel).apply(f, p, n)
}

/// `Σ_{j=0}^n Σ_y f(x − P(y)) K_j(y)`.
pub fn apply_dyadic_singular_sum(
    f: &LatticeFunction,
    p: &PolynomialMapping,
    pieces: &[DyadicKernelPiece],
    n: u64,
) -> Result<OperatorResult> {
    Operator::DyadicSum(pieces).apply(f, p, n)
}

/// The dyadic grid `{2^0, …, 2^nmax}`.
pub fn dyadic_grid(nmax: u32) -> Vec<u64> {
    (0..=nmax).map(|i| 1u64 << i).collect()
}

fn check_grid(grid: &[u64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("the grid is empty"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("the grid must be strictly ascending"));
    }
    Ok(())
}

/// Applies the operator at every grid value (in parallel, order kept).
pub fn apply_on_grid(f: &LatticeFunction, p: &PolynomialMapping, op: Operator<'_>, grid: &[u64]) -> Result<Vec<LatticeFunction>> {
    check_dims(f, p)?;
    grid.par_iter()
        .map(|&n| op.apply(f, p, n).map(|r| r.function))
        .collect()
}

fn pointwise_max_abs(into: &mut BTreeMap<Point, f64>, g: &LatticeFunction) {
    for (x, v) in g.iter() {
        let e = into.entry(x.clone()).or_insert(0.0);
        *e = e.max(v.norm());
    }
}

fn to_function(dim: usize, m: &BTreeMap<Point, f64>) -> LatticeFunction {
    LatticeFunction::from_pairs(dim, m.iter().map(|(x, &v)| (x.clone(), Complex64::new(v, 0.0))))
        .expect("points share the dimension")
}

/// `x ↦ max_{N∈grid} |A_N f(x)|`.
pub fn maximal(f: &LatticeFunction, p: &PolynomialMapping, op: Operator<'_>, grid: &[u64]) -> Result<LatticeFunction> {
    check_grid(grid)?;
    let mut sup = BTreeMap::new();
    for g in apply_on_grid(f, p, op, grid)? {
        pointwise_max_abs(&mut sup, &g);
    }
    Ok(to_function(p.d0(), &sup))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRatioRow {
    /// Largest grid value included.
    pub n: u64,
    pub numerator: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRatioReport {
    pub kind: OperatorKind,
    pub p: f64,
    pub family_size: usize,
    pub denominator: f64,
    pub ratio: f64,
    /// Ratio with the grid truncated after each of its values.
    pub per_n: Vec<NormRatioRow>,
}

/// `‖(Σ_t max_N |A_N f_t|²)^{1/2}‖_p / ‖(Σ_t |f_t|²)^{1/2}‖_p`, together with
/// the same ratio for every prefix of the grid.
pub fn norm_ratio_experiment(
    family: &FunctionFamily,
    p: &PolynomialMapping,
    op: Operator<'_>,
    exponent: f64,
    grid: &[u64],
) -> Result<NormRatioReport> {
    if !(exponent > 1.0 && exponent.is_finite()) {
        return Err(Error::invalid(format!("p must lie in (1, ∞), got {exponent}")));
    }
    check_grid(grid)?;
    let denominator = family.lp_l2_norm(exponent)?;
    if denominator == 0.0 {
        return Err(Error::invalid("the family has zero norm"));
    }
    let per_member: Vec<Vec<LatticeFunction>> = family
        .members()
        .iter()
        .map(|f| apply_on_grid(f, p, op, grid))
        .collect::<Result<_>>()?;
    let mut sups: Vec<BTreeMap<Point, f64>> = vec![BTreeMap::new(); family.len()];
    let mut per_n = Vec::with_capacity(grid.len());
    for (i, &n) in grid.iter().enumerate() {
        for (sup, outs) in sups.iter_mut().zip(&per_member) {
            pointwise_max_abs(sup, &outs[i]);
        }
        let members: Vec<LatticeFunction> = sups.iter().map(|s| to_function(p.d0(), s)).collect();
        let numerator = FunctionFamily::new(members)?.lp_l2_norm(exponent)?;
        per_n.push(NormRatioRow { n, numerator, ratio: numerator / denominator });
    }
    let ratio = per_n.last().map(|r| r.ratio).unwrap_or(0.0);
    Ok(NormRatioReport { kind: op.kind(), p: exponent, family_size: family.len(), denominator, ratio, per_n })
}

/// `T` deltas at `(t, 0, …, 0)`, `t = 0..T`.
pub fn delta_family(dim: usize, count: usize) -> Result<FunctionFamily> {
    if dim == 0 || count == 0 {
        return Err(Error::invalid("a delta family needs dim >= 1 and count >= 1"));
    }
    FunctionFamily::new(
        (0..count)
            .map(|t| {
                let mut x = vec![0; dim];
                x[0] = t as i64;
                LatticeFunction::delta(x)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Hilbert;

    #[test]
    fn average_of_delta_along_the_line() {
        let p = PolynomialMapping::identity(1).unwrap();
        let g = apply_average(&LatticeFunction::delta(vec![0]), &p, 3).unwrap().function;
        assert_eq!(g.len(), 3);
        for x in 1..=3 {
            assert_eq!(g.get(&[x]).re, 1.0 / 3.0);
        }
    }

    #[test]
    fn truncated_hilbert_of_delta() {
        let p = PolynomialMapping::identity(1).unwrap();
        let g = apply_truncated(&LatticeFunction::delta(vec![0]), &p, &Hilbert, 5).unwrap().function;
        assert_eq!(g.len(), 10);
        for x in 1..=5i64 {
            assert_eq!(g.get(&[x]).re, 1.0 / x as f64);
            assert_eq!(g.get(&[-x]).re, -1.0 / x as f64);
        }
    }

    #[test]
    fn maximal_attains_small_scale() {
        let p = PolynomialMapping::identity(1).unwrap();
        let m = maximal(&LatticeFunction::delta(vec![0]), &p, Operator::Average, &[1, 2, 4]).unwrap();
        assert_eq!(m.get(&[1]).re, 1.0);
        assert_eq!(m.get(&[3]).re, 0.25);
        assert!(maximal(&LatticeFunction::delta(vec![0]), &p, Operator::Average, &[]).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let p = PolynomialMapping::identity(2).unwrap();
        let err = apply_average(&LatticeFunction::delta(vec![0]), &p, 2).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn norm_ratio_of_single_delta() {
        let p = PolynomialMapping::identity(1).unwrap();
        let fam = delta_family(1, 1).unwrap();
        let rep = norm_ratio_experiment(&fam, &p, Operator::Average, 2.0, &dyadic_grid(3)).unwrap();
        assert_eq!(rep.per_n.len(), 4);
        assert_eq!(rep.per_n[0].ratio, 1.0);
        assert!(rep.ratio > 1.0 && rep.ratio.is_finite());
        assert!(rep.per_n.windows(2).all(|w| w[0].ratio <= w[1].ratio));
    }
}
