use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = Vec<i64>;

/// A finitely supported function `Z^m → C`. Exact zeros are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFunction {
    dim: usize,
    values: BTreeMap<Point, Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFunctionJson {
    dim: usize,
    points: Vec<Point>,
    values: Vec<[f64; 2]>,
}

impl LatticeFunction {
    pub fn zero(dim: usize) -> Self {
        Self { dim, values: BTreeMap::new() }
    }

    /// Dirac delta at `at`.
    pub fn delta(at: Point) -> Self {
        let mut f = Self::zero(at.len());
        f.values.insert(at, Complex64::new(1.0, 0.0));
        f
    }

    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (Point, Complex64)>) -> Result<Self> {
        let mut f = Self::zero(dim);
        for (p, v) in pairs {
            f.add_at(p, v)?;
        }
        Ok(f)
    }

    /// Indicator of a point set (duplicates accumulate).
    pub fn indicator(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        Self::from_pairs(dim, points.into_iter().map(|p| (p, Complex64::new(1.0, 0.0))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, p: &[i64]) -> Complex64 {
        self.values.get(p).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, &Complex64)> {
        self.values.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.values.keys()
    }

    fn check_point(&self, p: &[i64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.len() });
        }
        Ok(())
    }

    pub fn set(&mut self, p: Point, v: Complex64) -> Result<()> {
        self.check_point(&p)?;
        if v == Complex64::default() {
            self.values.remove(&p);
        } else {
            self.values.insert(p, v);
        }
        Ok(())
    }

    /// `f(p) += v`, dropping the entry if the sum is exactly zero.
    pub fn add_at(&mut self, p: Point, v: Complex64) -> Result<()> {
        self.check_point(&p)?;
        match self.values.entry(p) {
            Entry::Occupied(mut e) => {
                let s = *e.get() + v;
                if s == Complex64::default() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            Entry::Vacant(e) => {
                if v != Complex64::default() {
                    e.insert(v);
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut out = self.clone();
        for (p, &v) in other.iter() {
            out.add_at(p.clone(), v)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let values = self
            .values
            .iter()
            .map(|(p, &v)| (p.clone(), v * c))
            .filter(|(_, v)| *v != Complex64::default())
            .collect();
        Self { dim: self.dim, values }
    }

    /// `x ↦ f(x - z)`.
    pub fn translate(&self, z: &[i64]) -> Result<Self> {
        self.check_point(z)?;
        let values = self
            .values
            .iter()
            .map(|(p, &v)| (p.iter().zip(z).map(|(a, b)| a + b).collect(), v))
            .collect();
        Ok(Self { dim: self.dim, values })
    }

    pub fn map_values(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let values = self
            .values
            .iter()
            .map(|(p, &v)| (p.clone(), f(v)))
            .filter(|(_, v)| *v != Complex64::default())
            .collect();
        Self { dim: self.dim, values }
    }

    /// Pointwise modulus as a real-valued lattice function.
    pub fn abs(&self) -> Self {
        self.map_values(|v| Complex64::new(v.norm(), 0.0))
    }

    /// Sparse convolution `(k * self)(x) = Σ_z k(z) self(x - z)`.
    ///
    /// Contributions to one output point are added in increasing order of
    /// `z`, so the result is independent of how the inputs were built and
    /// translation commutes with convolution bit for bit.
    pub fn convolve(&self, kernel: &Self) -> Result<Self> {
        if kernel.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: kernel.dim });
        }
        let mut acc: BTreeMap<Point, Complex64> = BTreeMap::new();
        for (z, &kv) in kernel.iter() {
            for (u, &fv) in self.iter() {
                let x: Point = u.iter().zip(z).map(|(a, b)| a + b).collect();
                *acc.entry(x).or_default() += kv * fv;
            }
        }
        acc.retain(|_, v| *v != Complex64::default());
        Ok(Self { dim: self.dim, values: acc })
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.values().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `‖f‖_p` for `p ∈ [1, ∞]`; pass `f64::INFINITY` for the sup norm.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_of_moduli(self.values.values().map(|v| v.norm()), p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_repr()).expect("lattice function serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_repr()).expect("lattice function serializes")
    }

    fn to_json_repr(&self) -> LatticeFunctionJson {
        LatticeFunctionJson {
            dim: self.dim,
            points: self.values.keys().cloned().collect(),
            values: self.values.values().map(|v| [v.re, v.im]).collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: LatticeFunctionJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(raw)
    }

    fn from_json_value(raw: LatticeFunctionJson) -> Result<Self> {
        if raw.points.len() != raw.values.len() {
            return Err(Error::Parse(format!(
                "{} points but {} values",
                raw.points.len(),
                raw.values.len()
            )));
        }
        let mut f = Self::zero(raw.dim);
        for (p, [re, im]) in raw.points.into_iter().zip(raw.values) {
            f.add_at(p, Complex64::new(re, im))?;
        }
        Ok(f)
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::invalid(format!("norm exponent must lie in [1, ∞], got {p}")));
    }
    Ok(())
}

fn lp_of_moduli(moduli: impl Iterator<Item = f64>, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Ok(moduli.fold(0.0, f64::max));
    }
    if p == 1.0 {
        return Ok(moduli.sum());
    }
    if p == 2.0 {
        return Ok(moduli.map(|m| m * m).sum::<f64>().sqrt());
    }
    Ok(moduli.map(|m| m.powf(p)).sum::<f64>().powf(1.0 / p))
}

/// An ordered family `(f_t)` of lattice functions on a common lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionFamily {
    dim: usize,
    members: Vec<LatticeFunction>,
}

impl FunctionFamily {
    pub fn new(members: Vec<LatticeFunction>) -> Result<Self> {
        let dim = members
            .first()
            .map(|f| f.dim())
            .ok_or_else(|| Error::invalid("a family needs at least one member"))?;
        if let Some(bad) = members.iter().find(|f| f.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.dim() });
        }
        Ok(Self { dim, members })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[LatticeFunction] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Pointwise `(Σ_t |f_t(x)|²)^{1/2}`.
    pub fn square_function(&self) -> LatticeFunction {
        square_function(self.members.iter())
    }

    /// `‖(Σ_t |f_t|²)^{1/2}‖_p`.
    pub fn lp_l2_norm(&self, p: f64) -> Result<f64> {
        self.square_function().lp_norm(p)
    }

    pub fn to_json(&self) -> String {
        let v: Vec<serde_json::Value> = self
            .members
            .iter()
            .map(|f| serde_json::to_value(f.to_json_repr()).expect("serializes"))
            .collect();
        serde_json::to_string(&v).expect("family serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Vec<LatticeFunctionJson> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.into_iter().map(LatticeFunction::from_json_value).collect::<Result<_>>()?)
    }
}

/// Pointwise `(Σ |g_i(x)|²)^{1/2}` of any sequence of functions.
pub fn square_function<'a>(fs: impl Iterator<Item = &'a LatticeFunction>) -> LatticeFunction {
    let mut dim = 0;
    let mut acc: BTreeMap<Point, f64> = BTreeMap::new();
    for f in fs {
        dim = f.dim();
        for (p, v) in f.iter() {
            *acc.entry(p.clone()).or_default() += v.norm_sqr();
        }
    }
    let values = acc
        .into_iter()
        .filter(|(_, s)| *s != 0.0)
        .map(|(p, s)| (p, Complex64::new(s.sqrt(), 0.0)))
        .collect();
    LatticeFunction { dim, values }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn norm_examples() {
        let d = LatticeFunction::delta(vec![0, 0]);
        for p in [1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
            assert_eq!(d.lp_norm(p).unwrap(), 1.0);
        }
        let pts: Vec<Point> = (0..8).map(|i| vec![i, -i]).collect();
        let ind = LatticeFunction::indicator(2, pts).unwrap();
        assert!((ind.lp_norm(2.0).unwrap() - 8f64.sqrt()).abs() < 1e-15);
        let fam = FunctionFamily::new(vec![d.clone(), d]).unwrap();
        assert!((fam.lp_l2_norm(2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_small_exponent() {
        let d = LatticeFunction::delta(vec![0]);
        assert!(d.lp_norm(0.5).is_err());
        assert!(d.lp_norm(f64::NAN).is_err());
    }

    #[test]
    fn zeros_are_dropped() {
        let mut f = LatticeFunction::zero(1);
        f.add_at(vec![3], c(2.0)).unwrap();
        f.add_at(vec![3], c(-2.0)).unwrap();
        assert!(f.is_empty());
        f.set(vec![1], c(0.0)).unwrap();
        assert!(f.is_empty());
        assert!(f.add_at(vec![1, 2], c(1.0)).is_err());
    }

    #[test]
    fn json_shape_and_round_trip() {
        let f = LatticeFunction::from_pairs(
            2,
            vec![(vec![0, 1], Complex64::new(0.1, -1.0 / 3.0)), (vec![-5, 2], c(1e-300))],
        )
        .unwrap();
        let s = f.to_json();
        assert!(s.starts_with("{\"dim\":2,\"points\":[[-5,2],[0,1]],\"values\":"));
        assert_eq!(LatticeFunction::from_json(&s).unwrap(), f);
        assert!(LatticeFunction::from_json("{\"dim\":1,\"points\":[[1]],\"values\":[]}").is_err());
        assert!(LatticeFunction::from_json("{\"dim\":1,\"points\":[],\"values\":[],\"x\":1}").is_err());
    }

    #[test]
    fn convolution_with_delta_is_translation() {
        let f = LatticeFunction::from_pairs(1, vec![(vec![0], c(1.0)), (vec![2], c(-3.0))]).unwrap();
        let k = LatticeFunction::delta(vec![5]);
        assert_eq!(f.convolve(&k).unwrap(), f.translate(&[5]).unwrap());
    }
}
