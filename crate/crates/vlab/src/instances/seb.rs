//! Smallest enclosing ball of points in `R^d`, as a space: a point violates
//! a subset when it lies strictly outside the subset's minimum ball.
//!
//! Two numeric modes:
//!
//! * exact — rational coordinates, rational arithmetic end to end; this is
//!   the only mode the structural checkers accept, because basis and
//!   degeneracy questions are decided by exact ties (four points on a
//!   common circle, and similar);
//! * float — `f64` with a relative tolerance; distances within tolerance of
//!   the radius count as inside, and an ill-conditioned support system
//!   raises `NumericInstability` instead of guessing.
//!
//! The solver is Welzl's move-to-front recursion with a fixed seeded
//! shuffle. When the recursion's boundary set turns out affinely dependent
//! (reachable with degenerate inputs), the exact mode falls back to a
//! brute-force minimum ball of that boundary set. [`brute_force_seb`]
//! doubles as the independent reference implementation: it enumerates every
//! candidate support subset of size ≤ dim+1 directly.
//!
//! The empty set's violators are a convention choice. The objective view
//! says `ω(∅) = -∞` and every point raises it, so `V(∅) = H` — the
//! default. `V(∅) = ∅` is available for consistent-space experiments.

use num::{BigRational, Zero};
use rand::seq::SliceRandom;

use crate::error::SpaceError;
use crate::space::{GroundSet, ObjectiveValue, Space};
use crate::stream::{domain, rng_for};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<BigRational>>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<BigRational>>) -> Result<Self, SpaceError> {
        if dim == 0 || dim > 8 {
            return Err(SpaceError::InvalidInstance(format!(
                "ambient dimension must be in 1..=8, got {dim}"
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(SpaceError::InvalidInstance(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
        }
        Ok(PointSet { dim, points })
    }

    pub fn from_integers(dim: usize, rows: &[&[i64]]) -> Result<Self, SpaceError> {
        let points = rows
            .iter()
            .map(|row| row.iter().map(|&c| BigRational::from_integer(c.into())).collect())
            .collect();
        PointSet::new(dim, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: u32) -> &[BigRational] {
        &self.points[i as usize]
    }

    pub fn labels(&self) -> Vec<String> {
        self.points
            .iter()
            .map(|p| {
                let coords: Vec<String> = p.iter().map(|c| c.to_string()).collect();
                format!("({})", coords.join(", "))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: Vec<BigRational>,
    pub sq_radius: BigRational,
}

impl Ball {
    pub fn contains(&self, p: &[BigRational]) -> bool {
        sq_dist(&self.center, p) <= self.sq_radius
    }
}

fn sq_dist(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Unique sphere through affinely independent `support` with center in
/// their affine hull; `None` when the points are affinely dependent.
fn circumball(points: &PointSet, support: &[u32]) -> Option<Ball> {
    let q0 = points.point(support[0]);
    let s = support.len() - 1;
    if s == 0 {
        return Some(Ball { center: q0.to_vec(), sq_radius: BigRational::zero() });
    }
    // solve sum_j 2(v_i · v_j) λ_j = v_i · v_i for v_i = q_i - q0
    let vs: Vec<Vec<BigRational>> = support[1..]
        .iter()
        .map(|&qi| points.point(qi).iter().zip(q0).map(|(a, b)| a - b).collect())
        .collect();
    let mut m: Vec<Vec<BigRational>> = (0..s)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..s)
                .map(|j| {
                    let two: BigRational = BigRational::from_integer(2.into());
                    two * dot(&vs[i], &vs[j])
                })
                .collect();
            row.push(dot(&vs[i], &vs[i]));
            row
        })
        .collect();
    let lambda = solve_exact(&mut m)?;
    let mut center = q0.to_vec();
    for (j, l) in lambda.iter().enumerate() {
        for (c, v) in center.iter_mut().zip(&vs[j]) {
            *c += l * v;
        }
    }
    let sq_radius = sq_dist(&center, q0);
    Some(Ball { center, sq_radius })
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination on an augmented `s × (s+1)` system; `None` when
/// singular.
#[allow(clippy::needless_range_loop)] // row/col elimination reads clearest indexed
fn solve_exact(m: &mut [Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let s = m.len();
    for col in 0..s {
        let pivot = (col..s).find(|&row| !m[row][col].is_zero())?;
        m.swap(col, pivot);
        for row in 0..s {
            if row != col && !m[row][col].is_zero() {
                let factor = &m[row][col] / &m[col][col];
                for j in col..=s {
                    let sub = &factor * &m[col][j];
                    m[row][j] -= sub;
                }
            }
        }
    }
    Some((0..s).map(|i| &m[i][s] / &m[i][i]).collect())
}

/// Reference solver: try every candidate support subset of size ≤ dim+1,
/// keep the smallest ball that contains all the given points.
pub fn brute_force_seb(points: &PointSet, ids: &[u32]) -> Option<Ball> {
    if ids.is_empty() {
        return None;
    }
    let max_support = (points.dim + 1).min(ids.len());
    let mut best: Option<Ball> = None;
    let mut stack: Vec<u32> = Vec::with_capacity(max_support);
    brute_recurse(points, ids, 0, &mut stack, max_support, &mut best);
    best
}

fn brute_recurse(
    points: &PointSet,
    ids: &[u32],
    from: usize,
    support: &mut Vec<u32>,
    max_support: usize,
    best: &mut Option<Ball>,
) {
    if !support.is_empty() {
        if let Some(ball) = circumball(points, support) {
            let enclosing = ids.iter().all(|&i| ball.contains(points.point(i)));
            if enclosing && best.as_ref().is_none_or(|b| ball.sq_radius < b.sq_radius) {
                *best = Some(ball);
            }
        }
    }
    if support.len() == max_support {
        return;
    }
    for i in from..ids.len() {
        support.push(ids[i]);
        brute_recurse(points, ids, i + 1, support, max_support, best);
        support.pop();
    }
}

/// Smallest enclosing ball of the listed points (`None` for no points),
/// via move-to-front Welzl with a fixed seeded shuffle.
pub fn seb_of_subset(points: &PointSet, ids: &[u32]) -> Option<Ball> {
    if ids.is_empty() {
        return None;
    }
    let mut order: Vec<u32> = ids.to_vec();
    let mut rng = rng_for(0x5345_4231, domain::SHUFFLE, &[ids.len() as u64]);
    order.shuffle(&mut rng);
    let mut boundary = Vec::with_capacity(points.dim + 1);
    Some(mtf(points, &mut order, ids.len(), &mut boundary))
}

/// Smallest enclosing ball of all points of the set.
pub fn smallest_enclosing_ball(points: &PointSet) -> Option<Ball> {
    let ids: Vec<u32> = (0..points.len() as u32).collect();
    seb_of_subset(points, &ids)
}

fn mtf(points: &PointSet, order: &mut [u32], end: usize, boundary: &mut Vec<u32>) -> Ball {
    if end == 0 || boundary.len() == points.dim + 1 {
        return ball_of_boundary(points, boundary);
    }
    let p = order[end - 1];
    let ball = mtf(points, order, end - 1, boundary);
    if ball.contains(points.point(p)) {
        return ball;
    }
    boundary.push(p);
    let ball = mtf(points, order, end - 1, boundary);
    boundary.pop();
    order[..end].rotate_right(1); // move-to-front
    ball
}

fn ball_of_boundary(points: &PointSet, boundary: &[u32]) -> Ball {
    if boundary.is_empty() {
        // radius -∞ stand-in: a ball containing nothing
        return Ball {
            center: vec![BigRational::zero(); points.dim],
            sq_radius: BigRational::from_integer((-1).into()),
        };
    }
    match circumball(points, boundary) {
        Some(ball) => ball,
        // affinely dependent boundary (degenerate input reached under an
        // adversarial insertion order): the smallest ball containing it
        None => brute_force_seb(points, boundary).expect("boundary is nonempty"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptySetConvention {
    /// `V(∅) = H`: the objective reading, `ω(∅) = -∞`.
    AllViolate,
    /// `V(∅) = ∅`.
    NoneViolate,
}

pub struct SebSpaceExact {
    points: PointSet,
    convention: EmptySetConvention,
}

impl SebSpaceExact {
    pub fn new(points: PointSet) -> Self {
        SebSpaceExact { points, convention: EmptySetConvention::AllViolate }
    }

    pub fn with_convention(points: PointSet, convention: EmptySetConvention) -> Self {
        SebSpaceExact { points, convention }
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }
}

impl Space for SebSpaceExact {
    fn n(&self) -> usize {
        self.points.len()
    }

    fn violators(&self, set: &[u32]) -> Result<Vec<u32>, SpaceError> {
        let Some(ball) = seb_of_subset(&self.points, set) else {
            return Ok(match self.convention {
                EmptySetConvention::AllViolate => (0..self.points.len() as u32).collect(),
                EmptySetConvention::NoneViolate => Vec::new(),
            });
        };
        Ok((0..self.points.len() as u32)
            .filter(|&i| set.binary_search(&i).is_err() && !ball.contains(self.points.point(i)))
            .collect())
    }

    fn ground(&self) -> GroundSet {
        GroundSet::labeled(self.points.labels())
    }

    fn objective(&self, set: &[u32]) -> Option<Result<ObjectiveValue, SpaceError>> {
        Some(Ok(match seb_of_subset(&self.points, set) {
            None => ObjectiveValue::NegInfinity,
            Some(ball) => ObjectiveValue::Finite(ball.sq_radius),
        }))
    }
}

// ---------------------------------------------------------------------------
// float mode

#[derive(Debug, Clone, PartialEq)]
pub struct BallF {
    pub center: Vec<f64>,
    pub sq_radius: f64,
}

pub struct SebSpaceFloat {
    dim: usize,
    points: Vec<Vec<f64>>,
    /// Relative slack on the inside test.
    pub tolerance: f64,
    convention: EmptySetConvention,
}

impl SebSpaceFloat {
    pub const DEFAULT_TOLERANCE: f64 = 1e-9;

    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self, SpaceError> {
        Self::with_tolerance(dim, points, Self::DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(
        dim: usize,
        points: Vec<Vec<f64>>,
        tolerance: f64,
    ) -> Result<Self, SpaceError> {
        if dim == 0 || dim > 8 {
            return Err(SpaceError::InvalidInstance(format!(
                "ambient dimension must be in 1..=8, got {dim}"
            )));
        }
        if !(tolerance >= 0.0 && tolerance.is_finite()) {
            return Err(SpaceError::InvalidInstance(format!("bad tolerance {tolerance}")));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim || p.iter().any(|c| !c.is_finite()) {
                return Err(SpaceError::InvalidInstance(format!(
                    "point {i} must have {dim} finite coordinates"
                )));
            }
        }
        Ok(SebSpaceFloat { dim, points, tolerance, convention: EmptySetConvention::AllViolate })
    }

    fn inside(&self, ball: &BallF, p: &[f64]) -> bool {
        // within tolerance of the radius counts as inside
        sq_dist_f(&ball.center, p) <= ball.sq_radius * (1.0 + self.tolerance) + self.tolerance
    }

    fn seb(&self, ids: &[u32]) -> Result<Option<BallF>, SpaceError> {
        if ids.is_empty() {
            return Ok(None);
        }
        let mut order = ids.to_vec();
        let mut rng = rng_for(0x5345_4231, domain::SHUFFLE, &[ids.len() as u64]);
        order.shuffle(&mut rng);
        let mut boundary = Vec::with_capacity(self.dim + 1);
        let len = ids.len();
        self.mtf_f(&mut order, len, &mut boundary).map(Some)
    }

    fn mtf_f(
        &self,
        order: &mut [u32],
        end: usize,
        boundary: &mut Vec<u32>,
    ) -> Result<BallF, SpaceError> {
        if end == 0 || boundary.len() == self.dim + 1 {
            return self.ball_of_boundary_f(boundary);
        }
        let p = order[end - 1];
        let ball = self.mtf_f(order, end - 1, boundary)?;
        if self.inside(&ball, &self.points[p as usize]) {
            return Ok(ball);
        }
        boundary.push(p);
        let ball = self.mtf_f(order, end - 1, boundary)?;
        boundary.pop();
        order[..end].rotate_right(1);
        Ok(ball)
    }

    fn ball_of_boundary_f(&self, boundary: &[u32]) -> Result<BallF, SpaceError> {
        if boundary.is_empty() {
            return Ok(BallF { center: vec![0.0; self.dim], sq_radius: -1.0 });
        }
        let q0 = &self.points[boundary[0] as usize];
        let s = boundary.len() - 1;
        if s == 0 {
            return Ok(BallF { center: q0.clone(), sq_radius: 0.0 });
        }
        let vs: Vec<Vec<f64>> = boundary[1..]
            .iter()
            .map(|&qi| self.points[qi as usize].iter().zip(q0).map(|(a, b)| a - b).collect())
            .collect();
        let mut m: Vec<Vec<f64>> = (0..s)
            .map(|i| {
                let mut row: Vec<f64> = (0..s).map(|j| 2.0 * dot_f(&vs[i], &vs[j])).collect();
                row.push(dot_f(&vs[i], &vs[i]));
                row
            })
            .collect();
        let scale =
            m.iter().flat_map(|row| row.iter()).fold(0.0f64, |acc, &v| acc.max(v.abs())).max(1.0);
        let lambda = solve_float(&mut m, 1e-12 * scale).ok_or_else(|| {
            SpaceError::NumericInstability(format!(
                "support system for boundary {boundary:?} is within tolerance of singular; \
                 use exact mode"
            ))
        })?;
        let mut center = q0.clone();
        for (j, l) in lambda.iter().enumerate() {
            for (c, v) in center.iter_mut().zip(&vs[j]) {
                *c += l * v;
            }
        }
        let sq_radius = sq_dist_f(&center, q0);
        Ok(BallF { center, sq_radius })
    }
}

fn dot_f(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sq_dist_f(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[allow(clippy::needless_range_loop)] // row/col elimination reads clearest indexed
fn solve_float(m: &mut [Vec<f64>], min_pivot: f64) -> Option<Vec<f64>> {
    let s = m.len();
    for col in 0..s {
        let pivot =
            (col..s).max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())?;
        if m[pivot][col].abs() < min_pivot {
            return None;
        }
        m.swap(col, pivot);
        for row in 0..s {
            if row != col {
                let factor = m[row][col] / m[col][col];
                for j in col..=s {
                    m[row][j] -= factor * m[col][j];
                }
            }
        }
    }
    Some((0..s).map(|i| m[i][s] / m[i][i]).collect())
}

impl Space for SebSpaceFloat {
    fn n(&self) -> usize {
        self.points.len()
    }

    fn violators(&self, set: &[u32]) -> Result<Vec<u32>, SpaceError> {
        let Some(ball) = self.seb(set)? else {
            return Ok(match self.convention {
                EmptySetConvention::AllViolate => (0..self.points.len() as u32).collect(),
                EmptySetConvention::NoneViolate => Vec::new(),
            });
        };
        Ok((0..self.points.len() as u32)
            .filter(|&i| {
                set.binary_search(&i).is_err() && !self.inside(&ball, &self.points[i as usize])
            })
            .collect())
    }
}
