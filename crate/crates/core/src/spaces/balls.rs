//! Separation by dyadic balls in the cube `[0,1]^d`.
//!
//! Balls use the sup-norm, so they are axis-parallel boxes. All coordinates
//! are integers over a common denominator `2^precision`, so membership is
//! exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Fuel;

/// A point of `[0,1]^d` with coordinates `coords[i] / 2^precision`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicPoint {
    pub coords: Vec<u64>,
    pub precision: u32,
}

impl DyadicPoint {
    pub fn new(coords: Vec<u64>, precision: u32) -> Result<Self> {
        let one = 1u64.checked_shl(precision).ok_or(Error::PrecisionExhausted { needed: precision, precision: 63 })?;
        if coords.iter().any(|&c| c > one) {
            return Err(Error::Precondition("dyadic point outside [0,1]".into()));
        }
        Ok(DyadicPoint { coords, precision })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    fn at_precision(&self, target: u32) -> Result<Vec<u64>> {
        rescale(&self.coords, self.precision, target)
    }
}

fn rescale(coords: &[u64], from: u32, to: u32) -> Result<Vec<u64>> {
    if from > to {
        return Err(Error::PrecisionExhausted { needed: from, precision: to });
    }
    Ok(coords.iter().map(|&c| c << (to - from)).collect())
}

/// The sup-norm ball of `radius` around `center`, all over `2^precision`.
/// The closed ball is `|x_i - c_i| ≤ r` for all `i`, the open one `< r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicBall {
    pub center: Vec<u64>,
    pub radius: u64,
    pub precision: u32,
}

impl DyadicBall {
    pub fn new(center: Vec<u64>, radius: u64, precision: u32) -> Self {
        DyadicBall { center, radius, precision }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    fn scaled(&self, target: u32) -> Result<(Vec<u64>, u64)> {
        let c = rescale(&self.center, self.precision, target)?;
        Ok((c, self.radius << (target - self.precision)))
    }

    /// Whether the closed balls `self` and `other` intersect.
    pub fn closed_meets(&self, other: &DyadicBall) -> bool {
        let p = self.precision.max(other.precision);
        let ((a, ra), (b, rb)) = (self.scaled(p).expect("max precision"), other.scaled(p).expect("max precision"));
        a.iter().zip(&b).all(|(&x, &y)| x.abs_diff(y) <= ra + rb)
    }
}

/// A region `⋃ₙ (Bₙ ∖ ⋃_{k ∈ Kₙ} Ĉₖ)` where `Bₙ` are open balls of one
/// stream and `Ĉₖ` closed balls of the other. For `U` the excluded indices
/// are `k < n`, for `V` they are `k ≤ m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallRegion {
    pub dim: usize,
    pub precision: u32,
    own: Vec<(Vec<u64>, u64)>,
    other: Vec<(Vec<u64>, u64)>,
    inclusive: bool,
}

impl BallRegion {
    /// Membership of an exact dyadic point.
    pub fn contains(&self, x: &DyadicPoint) -> Result<bool> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.dim() });
        }
        if x.precision > self.precision {
            return Ok(self.lifted(x.precision).contains_scaled(&x.coords));
        }
        Ok(self.contains_scaled(&x.at_precision(self.precision)?))
    }

    /// The same region with everything over `2^target`, `target ≥ precision`.
    fn lifted(&self, target: u32) -> BallRegion {
        let shift = target - self.precision;
        let up = |s: &[(Vec<u64>, u64)]| {
            s.iter().map(|(c, r)| (c.iter().map(|x| x << shift).collect(), r << shift)).collect()
        };
        BallRegion {
            dim: self.dim,
            precision: target,
            own: up(&self.own),
            other: up(&self.other),
            inclusive: self.inclusive,
        }
    }

    fn contains_scaled(&self, x: &[u64]) -> bool {
        let Some(first_own) = self.own.iter().position(|(c, r)| in_open(x, c, *r)) else {
            return false;
        };
        let first_other = self.other.iter().position(|(c, r)| in_closed(x, c, *r)).unwrap_or(usize::MAX);
        if self.inclusive {
            first_other > first_own
        } else {
            first_other >= first_own
        }
    }

    /// Coordinates where some ball boundary lies, per axis.
    fn breakpoints(&self, axis: usize) -> Vec<u64> {
        let mut v: Vec<u64> =
            self.own.iter().chain(&self.other).flat_map(|(c, r)| [c[axis].saturating_sub(*r), c[axis] + r]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn in_open(x: &[u64], c: &[u64], r: u64) -> bool {
    x.iter().zip(c).all(|(&a, &b)| a.abs_diff(b) < r)
}

fn in_closed(x: &[u64], c: &[u64], r: u64) -> bool {
    x.iter().zip(c).all(|(&a, &b)| a.abs_diff(b) <= r)
}

/// `(V̂ₙ)` lists closed balls missing `A`, `(Ûₙ)` closed balls missing `B`.
/// With `Uₙ`, `Vₙ` the matching open balls, returns
/// `U = ⋃ₙ (Uₙ ∖ ⋃_{k<n} V̂ₖ)` and `V = ⋃ₘ (Vₘ ∖ ⋃_{k≤m} Ûₖ)`,
/// reading the first `fuel` entries of each stream.
pub fn separate_by_balls(
    dim: usize,
    missing_a: &[DyadicBall],
    missing_b: &[DyadicBall],
    fuel: Fuel,
) -> Result<(BallRegion, BallRegion)> {
    let take = |s: &[DyadicBall]| s.iter().take(fuel.min(s.len() as Fuel) as usize).cloned().collect::<Vec<_>>();
    let (va, ub) = (take(missing_a), take(missing_b));
    for b in va.iter().chain(&ub) {
        if b.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: b.dim() });
        }
    }
    let precision = va.iter().chain(&ub).map(|b| b.precision).max().unwrap_or(0);
    let scale = |s: &[DyadicBall]| s.iter().map(|b| b.scaled(precision)).collect::<Result<Vec<_>>>();
    let (va, ub) = (scale(&va)?, scale(&ub)?);
    let u = BallRegion { dim, precision, own: ub.clone(), other: va.clone(), inclusive: false };
    let v = BallRegion { dim, precision, own: va, other: ub, inclusive: true };
    Ok((u, v))
}

/// Every closed ball of radius `2^-j`, centre on the `2^-j` grid, for
/// `j = 1..=depth`, that misses all the given closed boxes. Ordered by
/// level, then centre lexicographically.
pub fn canonical_enumeration(dim: usize, closed: &[DyadicBall], depth: u32) -> Vec<DyadicBall> {
    let mut out = Vec::new();
    for j in 1..=depth {
        let side = (1u64 << j) + 1;
        let count = side.pow(dim as u32);
        for idx in 0..count {
            let mut rest = idx;
            let mut center = vec![0; dim];
            for c in center.iter_mut().rev() {
                *c = rest % side;
                rest /= side;
            }
            let ball = DyadicBall::new(center, 1, j);
            if closed.iter().all(|b| !ball.closed_meets(b)) {
                out.push(ball);
            }
        }
    }
    out
}

/// Result of scanning the full grid of step `2^-grid_exp`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub grid_exp: u32,
    pub points: u64,
    pub in_u: u64,
    pub in_v: u64,
    pub in_both: u64,
}

/// Classifies every point of the grid. Region membership only changes at
/// ball boundaries, so each axis is split into boundary classes first and
/// every grid point is looked up in a table over class tuples.
pub fn grid_report(u: &BallRegion, v: &BallRegion, grid_exp: u32) -> Result<GridReport> {
    if u.dim != v.dim {
        return Err(Error::DimensionMismatch { expected: u.dim, got: v.dim });
    }
    let dim = u.dim;
    let prec = u.precision.max(v.precision).max(grid_exp);
    let (u, v) = (u.lifted(prec), v.lifted(prec));
    let side = (1u64 << grid_exp) + 1;
    let step = 1u64 << (prec - grid_exp);
    // per axis: breakpoints, and the class of each grid coordinate
    let mut classes: Vec<Vec<usize>> = Vec::with_capacity(dim);
    let mut reps: Vec<Vec<u64>> = Vec::with_capacity(dim);
    for axis in 0..dim {
        let mut bp = u.breakpoints(axis);
        bp.extend(v.breakpoints(axis));
        bp.sort_unstable();
        bp.dedup();
        let mut class_of = Vec::with_capacity(side as usize);
        let mut rep: Vec<u64> = Vec::new();
        let mut last_key = None;
        for g in 0..side {
            let x = g * step;
            let key = match bp.binary_search(&x) {
                Ok(i) => 2 * i + 1,
                Err(i) => 2 * i,
            };
            if last_key != Some(key) {
                rep.push(x);
                last_key = Some(key);
            }
            class_of.push(rep.len() - 1);
        }
        classes.push(class_of);
        reps.push(rep);
    }
    let sizes: Vec<usize> = reps.iter().map(Vec::len).collect();
    let total: usize = sizes.iter().product();
    let mut table = vec![(false, false); total];
    let mut point = vec![0u64; dim];
    for (t, slot) in table.iter_mut().enumerate() {
        let mut rest = t;
        for axis in 0..dim {
            point[axis] = reps[axis][rest % sizes[axis]];
            rest /= sizes[axis];
        }
        *slot = (u.contains_scaled(&point), v.contains_scaled(&point));
    }
    let mut report = GridReport { grid_exp, points: 0, in_u: 0, in_v: 0, in_both: 0 };
    let n_points = side.pow(dim as u32);
    for g in 0..n_points {
        let (mut rest, mut idx, mut mult) = (g, 0usize, 1usize);
        for axis in 0..dim {
            idx += mult * classes[axis][(rest % side) as usize];
            rest /= side;
            mult *= sizes[axis];
        }
        let (a, b) = table[idx];
        report.points += 1;
        report.in_u += u64::from(a);
        report.in_v += u64::from(b);
        report.in_both += u64::from(a && b);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[u64], p: u32) -> DyadicPoint {
        DyadicPoint::new(c.to_vec(), p).unwrap()
    }

    #[test]
    fn empty_streams_give_empty_regions() {
        let (u, v) = separate_by_balls(1, &[], &[], 100).unwrap();
        let r = grid_report(&u, &v, 8).unwrap();
        assert_eq!((r.points, r.in_u, r.in_v), (257, 0, 0));
    }

    #[test]
    fn separates_zero_from_one_on_the_line() {
        let a = [DyadicBall::new(vec![0], 0, 0)];
        let b = [DyadicBall::new(vec![1], 0, 0)];
        let missing_a = canonical_enumeration(1, &a, 4);
        let missing_b = canonical_enumeration(1, &b, 4);
        let (u, v) = separate_by_balls(1, &missing_a, &missing_b, 10_000).unwrap();
        assert!(u.contains(&pt(&[0], 0)).unwrap());
        assert!(v.contains(&pt(&[1], 0)).unwrap());
        let r = grid_report(&u, &v, 8).unwrap();
        assert_eq!(r.in_both, 0);
    }

    #[test]
    fn shared_ball_is_excluded_consistently() {
        let ball = DyadicBall::new(vec![2, 2], 1, 2);
        let (u, v) = separate_by_balls(2, std::slice::from_ref(&ball), std::slice::from_ref(&ball), 10).unwrap();
        let r = grid_report(&u, &v, 8).unwrap();
        assert_eq!(r.in_both, 0);
        assert!(r.in_u > 0);
        assert_eq!(r.in_v, 0);
    }

    #[test]
    fn dimension_checks() {
        let ball = DyadicBall::new(vec![1, 1], 1, 1);
        assert!(matches!(separate_by_balls(1, &[ball], &[], 10), Err(Error::DimensionMismatch { .. })));
        let (u, _) = separate_by_balls(2, &[], &[], 10).unwrap();
        assert!(u.contains(&pt(&[0], 1)).is_err());
    }

    #[test]
    fn grid_report_matches_direct_evaluation() {
        let a = [DyadicBall::new(vec![1, 1], 1, 2)];
        let b = [DyadicBall::new(vec![3, 2], 1, 3)];
        let (u, v) =
            separate_by_balls(2, &canonical_enumeration(2, &a, 3), &canonical_enumeration(2, &b, 3), 10_000).unwrap();
        let r = grid_report(&u, &v, 5).unwrap();
        let (mut iu, mut iv) = (0, 0);
        for x in 0..=32 {
            for y in 0..=32 {
                let p = pt(&[x, y], 5);
                iu += u64::from(u.contains(&p).unwrap());
                iv += u64::from(v.contains(&p).unwrap());
            }
        }
        assert_eq!((r.in_u, r.in_v), (iu, iv));
        assert_eq!(r.in_both, 0);
    }
}
