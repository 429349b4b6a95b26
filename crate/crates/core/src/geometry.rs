//! Convex bodies in `R^k`, exact lattice-point counts and counts of lattice
//! points close to the boundary.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Point;

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Shape {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// `{x : normals[i]·x ≤ offsets[i]}`, bounded, with an interior center.
    Polytope { normals: Vec<Vec<f64>>, offsets: Vec<f64>, center: Vec<f64> },
}

/// A convex body with its bounding radius `r` about `center` and the radius
/// of the largest ball about `center` that it contains.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    shape: Shape,
    center: Vec<f64>,
    bounding_radius: f64,
    inner_radius: f64,
    vertices: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Solves a `k×k` system (k ≤ 3) by Cramer's rule.
fn solve(rows: &[&[f64]], rhs: &[f64]) -> Option<Vec<f64>> {
    let det = |m: &[Vec<f64>]| -> f64 {
        match m.len() {
            1 => m[0][0],
            2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            _ => {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            }
        }
    };
    let a: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    let d = det(&a);
    let scale: f64 = rows.iter().map(|r| norm(r)).product();
    if d.abs() <= 1e-12 * scale.max(1e-300) {
        return None;
    }
    Some(
        (0..rows.len())
            .map(|c| {
                let mut m = a.clone();
                for (row, &b) in m.iter_mut().zip(rhs) {
                    row[c] = b;
                }
                det(&m) / d
            })
            .collect(),
    )
}

/// Unit-free direction spanning the common kernel of `k−1` normals in `R^k`.
fn kernel_direction(rows: &[&[f64]], k: usize) -> Option<Vec<f64>> {
    let v = match k {
        1 => vec![1.0],
        2 => vec![-rows[0][1], rows[0][0]],
        3 => {
            let (a, b) = (rows[0], rows[1]);
            vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
        }
        _ => return None,
    };
    let n = norm(&v);
    let scale: f64 = rows.iter().map(|r| norm(r)).product::<f64>().max(1.0);
    (n > 1e-12 * scale).then(|| v.iter().map(|x| x / n).collect())
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

impl ConvexBody {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || !finite(&center) || !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("a ball needs a finite center and a positive radius"));
        }
        Ok(Self {
            shape: Shape::Ball { center: center.clone(), radius },
            center,
            bounding_radius: radius,
            inner_radius: radius,
            vertices: Vec::new(),
        })
    }

    /// The ball of radius `r` about the origin of `R^k`.
    pub fn centered_ball(k: usize, radius: f64) -> Result<Self> {
        Self::ball(vec![0.0; k], radius)
    }

    pub fn axis_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() || !finite(&lo) || !finite(&hi) {
            return Err(Error::invalid("a box needs finite corners of equal dimension"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::invalid("box corners must satisfy lo <= hi"));
        }
        let center: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let half: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (b - a)).collect();
        Ok(Self {
            bounding_radius: norm(&half),
            inner_radius: half.iter().copied().fold(f64::INFINITY, f64::min),
            shape: Shape::Box { lo, hi },
            center,
            vertices: Vec::new(),
        })
    }

    /// The cube `[−r, r]^k`.
    pub fn centered_cube(k: usize, r: f64) -> Result<Self> {
        Self::axis_box(vec![-r; k], vec![r; k])
    }

    /// A bounded polytope in dimension `k ≤ 3`; `center` must be interior.
    pub fn polytope(normals: Vec<Vec<f64>>, offsets: Vec<f64>, center: Vec<f64>) -> Result<Self> {
        let k = center.len();
        if !(1..=3).contains(&k) {
            return Err(Error::invalid("polytopes are supported for k <= 3"));
        }
        if normals.len() != offsets.len() || normals.iter().any(|a| a.len() != k || norm(a) == 0.0 || !finite(a)) {
            return Err(Error::invalid("each halfspace needs a nonzero normal of dimension k and an offset"));
        }
        if !finite(&offsets) || !finite(&center) {
            return Err(Error::invalid("non-finite polytope data"));
        }
        let slack: Vec<f64> = normals.iter().zip(&offsets).map(|(a, b)| (b - dot(a, &center)) / norm(a)).collect();
        if slack.iter().any(|&s| s <= 0.0) {
            return Err(Error::invalid("the center must lie strictly inside every halfspace"));
        }
        // bounded iff the recession cone {v : Av ≤ 0} is trivial
        for sub in subsets(normals.len(), k - 1) {
            let rows: Vec<&[f64]> = sub.iter().map(|&i| normals[i].as_slice()).collect();
            if let Some(v) = kernel_direction(&rows, k) {
                for sign in [1.0, -1.0] {
                    let w: Vec<f64> = v.iter().map(|x| x * sign).collect();
                    if normals.iter().all(|a| dot(a, &w) <= 1e-12 * norm(a)) {
                        return Err(Error::invalid("the polytope is unbounded"));
                    }
                }
            }
        }
        if normals.len() < k + 1 {
            return Err(Error::invalid("the polytope is unbounded"));
        }
        let mut vertices: Vec<Vec<f64>> = Vec::new();
        for sub in subsets(normals.len(), k) {
            let rows: Vec<&[f64]> = sub.iter().map(|&i| normals[i].as_slice()).collect();
            let rhs: Vec<f64> = sub.iter().map(|&i| offsets[i]).collect();
            if let Some(x) = solve(&rows, &rhs) {
                let inside = normals.iter().zip(&offsets).all(|(a, b)| dot(a, &x) <= b + EPS * (1.0 + b.abs()));
                if inside && !vertices.iter().any(|v| dist(v, &x) < 1e-9) {
                    vertices.push(x);
                }
            }
        }
        let bounding_radius = vertices.iter().map(|v| dist(v, &center)).fold(0.0, f64::max);
        let inner_radius = slack.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Self {
            shape: Shape::Polytope { normals, offsets, center: center.clone() },
            center,
            bounding_radius,
            inner_radius,
            vertices,
        })
    }

    pub fn from_shape(shape: Shape) -> Result<Self> {
        match shape {
            Shape::Ball { center, radius } => Self::ball(center, radius),
            Shape::Box { lo, hi } => Self::axis_box(lo, hi),
            Shape::Polytope { normals, offsets, center } => Self::polytope(normals, offsets, center),
        }
    }

    /// Parses `ball:r=50[,k=2][,c=x;y]`, `cube:r=10[,k=2]` or
    /// `box:lo=a;b,hi=c;d`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut fields = std::collections::BTreeMap::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
            fields.insert(key.trim(), val.trim());
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {s:?}")));
        let vec = |s: &str| s.split(';').map(num).collect::<Result<Vec<f64>>>();
        let known: &[&str] = match kind {
            "ball" | "cube" => &["r", "k", "c"],
            "box" => &["lo", "hi"],
            _ => return Err(Error::Parse(format!("unknown body kind {kind:?}"))),
        };
        if let Some(bad) = fields.keys().find(|k| !known.contains(k)) {
            return Err(Error::Parse(format!("unknown field {bad:?} for {kind}")));
        }
        match kind {
            "box" => {
                let lo = vec(fields.get("lo").ok_or_else(|| Error::Parse("box needs lo".into()))?)?;
                let hi = vec(fields.get("hi").ok_or_else(|| Error::Parse("box needs hi".into()))?)?;
                Self::axis_box(lo, hi)
            }
            _ => {
                let r = num(fields.get("r").ok_or_else(|| Error::Parse(format!("{kind} needs r")))?)?;
                let center = match fields.get("c") {
                    Some(c) => vec(c)?,
                    None => {
                        let k = fields.get("k").map(|s| s.parse::<usize>()).transpose().map_err(|e| Error::Parse(e.to_string()))?;
                        vec![0.0; k.unwrap_or(2)]
                    }
                };
                if let Some(k) = fields.get("k") {
                    if k.parse::<usize>().ok() != Some(center.len()) {
                        return Err(Error::Parse("k disagrees with the center".into()));
                    }
                }
                if kind == "ball" {
                    Self::ball(center, r)
                } else {
                    Self::axis_box(center.iter().map(|c| c - r).collect(), center.iter().map(|c| c + r).collect())
                }
            }
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn bounding_radius(&self) -> f64 {
        self.bounding_radius
    }

    /// Radius of the largest ball about the center inside the body.
    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match &self.shape {
            Shape::Ball { center, radius } => {
                x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>() <= radius * radius
            }
            Shape::Box { lo, hi } => x.iter().zip(lo.iter().zip(hi)).all(|(v, (a, b))| a <= v && v <= b),
            Shape::Polytope { normals, offsets, .. } => normals.iter().zip(offsets).all(|(a, b)| dot(a, x) <= *b),
        }
    }

    /// Distance from an interior point to the boundary (negative outside for
    /// balls and polytopes).
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        match &self.shape {
            Shape::Ball { center, radius } => radius - dist(x, center),
            Shape::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (a, b))| (v - a).min(b - v))
                .fold(f64::INFINITY, f64::min),
            Shape::Polytope { normals, offsets, .. } => normals
                .iter()
                .zip(offsets)
                .map(|(a, b)| (b - dot(a, x)) / norm(a))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Axis-aligned integer scan range containing the body.
    fn scan_box(&self) -> (Vec<i64>, Vec<i64>) {
        match &self.shape {
            Shape::Box { lo, hi } => (
                lo.iter().map(|v| v.ceil() as i64).collect(),
                hi.iter().map(|v| v.floor() as i64).collect(),
            ),
            _ => {
                let r = self.bounding_radius * (1.0 + 1e-12) + 1e-9;
                (
                    self.center.iter().map(|c| (c - r).ceil() as i64).collect(),
                    self.center.iter().map(|c| (c + r).floor() as i64).collect(),
                )
            }
        }
    }

    /// `Ω_δ = {y : δ^{-1}y ∈ Ω}` taken about the center.
    pub fn dilate(&self, delta: f64) -> Result<Self> {
        dilate_body(self, delta)
    }

    /// Lebesgue measure.
    pub fn volume(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => unit_ball_volume(self.dim()) * radius.powi(self.dim() as i32),
            Shape::Box { lo, hi } => lo.iter().zip(hi).map(|(a, b)| b - a).product(),
            Shape::Polytope { normals, offsets, .. } => polytope_volume(normals, offsets, &self.center, &self.vertices),
        }
    }
}

pub fn unit_ball_volume(k: usize) -> f64 {
    use std::f64::consts::PI;
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(k - 2) * 2.0 * PI / k as f64,
    }
}

/// Sorts coplanar points by angle about their centroid inside the plane
/// with unit normal `n` (2D when `n` is empty).
fn polygon_area(points: &[Vec<f64>], n: Option<&[f64]>) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let m = points.len() as f64;
    let c: Vec<f64> = (0..points[0].len()).map(|i| points.iter().map(|p| p[i]).sum::<f64>() / m).collect();
    let (u, v): (Vec<f64>, Vec<f64>) = match n {
        None => (vec![1.0, 0.0], vec![0.0, 1.0]),
        Some(n) => {
            let t = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
            let u = [n[1] * t[2] - n[2] * t[1], n[2] * t[0] - n[0] * t[2], n[0] * t[1] - n[1] * t[0]];
            let un = norm(&u);
            let u: Vec<f64> = u.iter().map(|x| x / un).collect();
            let v = vec![n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]];
            (u, v)
        }
    };
    let mut planar: Vec<(f64, f64)> = points
        .iter()
        .map(|p| {
            let d: Vec<f64> = p.iter().zip(&c).map(|(a, b)| a - b).collect();
            (dot(&d, &u), dot(&d, &v))
        })
        .collect();
    planar.sort_by(|a, b| a.1.atan2(a.0).total_cmp(&b.1.atan2(b.0)));
    let mut area = 0.0;
    for i in 0..planar.len() {
        let (x0, y0) = planar[i];
        let (x1, y1) = planar[(i + 1) % planar.len()];
        area += x0 * y1 - x1 * y0;
    }
    0.5 * area.abs()
}

fn polytope_volume(normals: &[Vec<f64>], offsets: &[f64], center: &[f64], vertices: &[Vec<f64>]) -> f64 {
    match center.len() {
        1 => {
            let xs = vertices.iter().map(|v| v[0]);
            xs.clone().fold(f64::NEG_INFINITY, f64::max) - xs.fold(f64::INFINITY, f64::min)
        }
        2 => polygon_area(vertices, None),
        _ => normals
            .iter()
            .zip(offsets)
            .map(|(a, b)| {
                let na = norm(a);
                let on: Vec<Vec<f64>> =
                    vertices.iter().filter(|v| ((b - dot(a, v)) / na).abs() < 1e-7).cloned().collect();
                let unit: Vec<f64> = a.iter().map(|x| x / na).collect();
                let h = (b - dot(a, center)) / na;
                h * polygon_area(&on, Some(&unit)) / 3.0
            })
            .sum(),
    }
}

fn scan_budget(k: usize) -> u128 {
    match k {
        1 => 1 << 40,
        2 => 4 * 10u128.pow(8) + 4 * 10u128.pow(4) + 1,
        _ => 401u128.pow(3),
    }
}

/// Visits every lattice point of the body, slab by slab in parallel.
pub(crate) fn scan_lattice<T: Send>(
    body: &ConvexBody,
    init: impl Fn() -> T + Sync,
    visit: impl Fn(&mut T, &[i64], &[f64]) + Sync,
    merge: impl Fn(T, T) -> T + Sync + Send,
) -> Result<T> {
    let k = body.dim();
    let (lo, hi) = body.scan_box();
    if lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return Ok(init());
    }
    let cells: u128 = lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as u128).product();
    if cells > scan_budget(k) {
        return Err(Error::BudgetExceeded(format!("{cells} lattice cells to scan in dimension {k}")));
    }
    let slabs: Vec<i64> = (lo[0]..=hi[0]).collect();
    let parts: Vec<T> = slabs
        .par_iter()
        .map(|&x0| {
            let mut acc = init();
            let mut cur = lo.clone();
            cur[0] = x0;
            let mut xf = vec![0.0; k];
            loop {
                for (f, &c) in xf.iter_mut().zip(&cur) {
                    *f = c as f64;
                }
                visit(&mut acc, &cur, &xf);
                let mut pos = k;
                loop {
                    if pos == 1 {
                        return acc;
                    }
                    pos -= 1;
                    if cur[pos] < hi[pos] {
                        cur[pos] += 1;
                        cur[pos + 1..k].copy_from_slice(&lo[pos + 1..k]);
                        break;
                    }
                }
                if k == 1 {
                    return acc;
                }
            }
        })
        .collect();
    Ok(parts.into_iter().fold(init(), merge))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeCount {
    pub count: u64,
    pub points: Option<Vec<Point>>,
}

/// `#(Ω ∩ Z^k)`, optionally with the points in lexicographic order.
pub fn lattice_points(body: &ConvexBody, with_points: bool) -> Result<LatticeCount> {
    if with_points {
        let pts = scan_lattice(
            body,
            Vec::new,
            |acc: &mut Vec<Point>, x, xf| {
                if body.contains(xf) {
                    acc.push(x.to_vec());
                }
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        )?;
        Ok(LatticeCount { count: pts.len() as u64, points: Some(pts) })
    } else {
        let count = scan_lattice(body, || 0u64, |acc, _, xf| *acc += u64::from(body.contains(xf)), |a, b| a + b)?;
        Ok(LatticeCount { count, points: None })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCount {
    /// Lattice points of `Ω` at distance `< s` from `∂Ω`.
    pub count: u64,
    pub total: u64,
    pub s: f64,
    pub r: f64,
    pub sigma: f64,
    /// `s·r^{k−1}`.
    pub inner_scale: f64,
    /// `s·r^{k−1+2σ}`.
    pub outer_scale: f64,
}

pub fn boundary_near_count(body: &ConvexBody, s: f64, sigma: f64) -> Result<BoundaryCount> {
    if !(s >= 1.0) || !s.is_finite() {
        return Err(Error::pre(format!("the boundary width must satisfy s >= 1, got {s}")));
    }
    if !(0.0..=1.0 / 3.0).contains(&sigma) {
        return Err(Error::invalid(format!("σ must lie in [0, 1/3], got {sigma}")));
    }
    let (count, total) = scan_lattice(
        body,
        || (0u64, 0u64),
        |acc, _, xf| {
            if body.contains(xf) {
                acc.1 += 1;
                if body.boundary_distance(xf) < s {
                    acc.0 += 1;
                }
            }
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    )?;
    let r = body.bounding_radius();
    let k = body.dim() as f64;
    Ok(BoundaryCount {
        count,
        total,
        s,
        r,
        sigma,
        inner_scale: s * r.powf(k - 1.0),
        outer_scale: s * r.powf(k - 1.0 + 2.0 * sigma),
    })
}

pub fn dilate_body(body: &ConvexBody, delta: f64) -> Result<ConvexBody> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid(format!("δ must lie in (0, 1], got {delta}")));
    }
    let c = &body.center;
    let scale = |v: &[f64]| -> Vec<f64> { v.iter().zip(c).map(|(x, c)| c + delta * (x - c)).collect() };
    match &body.shape {
        Shape::Ball { center, radius } => ConvexBody::ball(center.clone(), radius * delta),
        Shape::Box { lo, hi } => ConvexBody::axis_box(scale(lo), scale(hi)),
        Shape::Polytope { normals, offsets, center } => {
            let off = normals.iter().zip(offsets).map(|(a, b)| dot(a, center) + delta * (b - dot(a, center))).collect();
            ConvexBody::polytope(normals.clone(), off, center.clone())
        }
    }
}

/// `(count − volume) / r^{k−1}` for the body.
pub fn davenport_residual(body: &ConvexBody) -> Result<f64> {
    let count = lattice_points(body, false)?.count as f64;
    Ok((count - body.volume()) / body.bounding_radius().powi(body.dim() as i32 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_counts() {
        for r in [1.0, 3.0, 10.0] {
            let b = ConvexBody::centered_cube(2, r).unwrap();
            let n = (2.0 * r + 1.0) as u64;
            assert_eq!(lattice_points(&b, false).unwrap().count, n * n);
            let ring = boundary_near_count(&b, 1.0, 0.0).unwrap();
            assert_eq!(ring.count, 8 * r as u64);
        }
    }

    #[test]
    fn disk_of_radius_ten() {
        let b = ConvexBody::centered_ball(2, 10.0).unwrap();
        let c = lattice_points(&b, true).unwrap();
        assert_eq!(c.count, 317);
        assert_eq!(c.points.unwrap().len(), 317);
    }

    #[test]
    fn thin_box_is_empty() {
        let b = ConvexBody::axis_box(vec![0.2, -3.0], vec![0.7, 3.0]).unwrap();
        assert_eq!(lattice_points(&b, false).unwrap().count, 0);
    }

    #[test]
    fn whole_body_when_s_exceeds_r() {
        let b = ConvexBody::centered_ball(2, 7.0).unwrap();
        let total = lattice_points(&b, false).unwrap().count;
        assert_eq!(boundary_near_count(&b, 7.5, 0.1).unwrap().count, total);
    }

    #[test]
    fn dilation() {
        let b = ConvexBody::centered_ball(2, 8.0).unwrap();
        assert_eq!(dilate_body(&b, 1.0).unwrap(), b);
        assert_eq!(dilate_body(&b, 0.5).unwrap().bounding_radius(), 4.0);
        assert!(dilate_body(&b, 0.0).is_err() && dilate_body(&b, 1.5).is_err());
    }

    #[test]
    fn square_polytope_matches_box() {
        let normals = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let p = ConvexBody::polytope(normals, vec![5.0; 4], vec![0.0, 0.0]).unwrap();
        let b = ConvexBody::centered_cube(2, 5.0).unwrap();
        assert_eq!(lattice_points(&p, false).unwrap(), lattice_points(&b, false).unwrap());
        assert!((p.volume() - 100.0).abs() < 1e-9);
        assert_eq!(boundary_near_count(&p, 1.0, 0.0).unwrap().count, 40);
    }

    #[test]
    fn octahedron_volume() {
        let mut normals = Vec::new();
        for sx in [1.0, -1.0] {
            for sy in [1.0, -1.0] {
                for sz in [1.0, -1.0] {
                    normals.push(vec![sx, sy, sz]);
                }
            }
        }
        let p = ConvexBody::polytope(normals, vec![3.0; 8], vec![0.0; 3]).unwrap();
        assert!((p.volume() - 4.0 / 3.0 * 27.0).abs() < 1e-9);
        // |x|+|y|+|z| ≤ 3: 1 + 6 + 18 + 38 = 63
        assert_eq!(lattice_points(&p, false).unwrap().count, 63);
    }

    #[test]
    fn unbounded_polytope_rejected() {
        let normals = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]];
        assert!(ConvexBody::polytope(normals, vec![1.0; 3], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn parse_specs() {
        let b = ConvexBody::parse("ball:r=50").unwrap();
        assert_eq!((b.dim(), b.bounding_radius()), (2, 50.0));
        let b = ConvexBody::parse("ball:r=5,k=3").unwrap();
        assert_eq!(b.dim(), 3);
        let b = ConvexBody::parse("box:lo=0;0,hi=2;3").unwrap();
        assert_eq!(lattice_points(&b, false).unwrap().count, 12);
        assert!(ConvexBody::parse("ball:r=5,q=1").is_err());
        assert!(ConvexBody::parse("disk:r=5").is_err());
    }
}
