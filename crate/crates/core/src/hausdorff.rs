//! Hausdorff distance between finite sets and the iterated hyperspace metric.
//!
//! [`hausdorff`] is the brute-force definition and serves as the oracle for
//! [`hausdorff_accelerated`]. [`hyperspace_distance`] lifts the construction
//! to sets of sets: the ground distance at level `k` is the hyperspace
//! distance at level `k - 1`.

use crate::error::{Error, Result};
use crate::kdtree::{KdTree, Nearest};
use crate::metric::{distance, Metric, Point};
use crate::numeric::{NumericMode, Scalar};
use crate::set::FiniteSet;

/// Default cap on hyperspace levels.
pub const DEFAULT_MAX_LEVEL: usize = 4;

/// Smallest target set for which the accelerated path builds a kd-tree.
const KD_MIN_POINTS: usize = 32;
const KD_MAX_DIM: usize = 8;

/// `sup_{x in a} inf_{y in b} dist(x, y)` by exhaustive scan.
pub fn directed_by<T, S: Scalar>(a: &[T], b: &[T], mut dist: impl FnMut(&T, &T) -> Result<S>) -> Result<S> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut worst = S::zero();
    for x in a {
        let mut best: Option<S> = None;
        for y in b {
            let d = dist(x, y)?;
            if best.as_ref().is_none_or(|m| d.lt_value(m)) {
                best = Some(d);
            }
        }
        worst = worst.max_value(best.expect("b is nonempty"));
    }
    Ok(worst)
}

fn level_one<S: Scalar>(set: &FiniteSet<S>) -> Result<&[Point<S>]> {
    set.points().ok_or(Error::LevelMismatch { left: set.level(), right: 1 })
}

/// `sup_{a in A} D(a, B)` for level-1 sets.
pub fn directed_hausdorff<S: Scalar>(metric: &Metric<S>, a: &FiniteSet<S>, b: &FiniteSet<S>) -> Result<S> {
    directed_by(level_one(a)?, level_one(b)?, |x, y| distance(metric, x, y))
}

/// `H(A, B) = max(sup_{a in A} D(a, B), sup_{b in B} D(b, A))` for level-1 sets.
pub fn hausdorff<S: Scalar>(metric: &Metric<S>, a: &FiniteSet<S>, b: &FiniteSet<S>) -> Result<S> {
    let ab = directed_hausdorff(metric, a, b)?;
    let ba = directed_hausdorff(metric, b, a)?;
    Ok(ab.max_value(ba))
}

/// Same value as [`hausdorff`], computed with an early break on the inner
/// minimum and, for float-mode dense points in low dimension, a kd-tree over
/// the target set.
pub fn hausdorff_accelerated<S: Scalar>(metric: &Metric<S>, a: &FiniteSet<S>, b: &FiniteSet<S>) -> Result<S> {
    let (mut pa, mut pb) = (level_one(a)?, level_one(b)?);
    // The larger set usually has the larger directed distance; scanning it
    // first raises the running maximum early, which lets the second pass
    // break out sooner.
    if pb.len() > pa.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    let first = directed_accelerated(metric, pa, pb, S::zero())?;
    directed_accelerated(metric, pb, pa, first)
}

/// `max(floor, sup_{x in a} inf_{y in b} d(x, y))`.
fn directed_accelerated<S: Scalar>(metric: &Metric<S>, a: &[Point<S>], b: &[Point<S>], floor: S) -> Result<S> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(coords) = kd_coordinates(metric, a, b) {
        return directed_kd(metric, a, b, coords, floor);
    }
    let mut cmax = floor;
    'outer: for x in a {
        let mut cmin: Option<S> = None;
        for y in b {
            let d = distance(metric, x, y)?;
            if d.le_value(&cmax) {
                // x cannot raise the running maximum.
                continue 'outer;
            }
            if cmin.as_ref().is_none_or(|m| d.lt_value(m)) {
                cmin = Some(d);
            }
        }
        cmax = cmax.max_value(cmin.expect("b is nonempty"));
    }
    Ok(cmax)
}

/// Float coordinates of `b` when the kd-tree path applies.
fn kd_coordinates<S: Scalar>(metric: &Metric<S>, a: &[Point<S>], b: &[Point<S>]) -> Option<Vec<Vec<f64>>> {
    if S::MODE != NumericMode::Float || b.len() < KD_MIN_POINTS {
        return None;
    }
    if !matches!(metric, Metric::Euclidean | Metric::SupNorm) {
        return None;
    }
    let dim = b[0].as_dense()?.len();
    if dim == 0 || dim > KD_MAX_DIM {
        return None;
    }
    if a.iter().any(|p| p.as_dense().is_none_or(|c| c.len() != dim)) {
        return None;
    }
    b.iter()
        .map(|p| p.as_dense().filter(|c| c.len() == dim).map(|c| c.iter().map(S::to_f64).collect()))
        .collect()
}

fn directed_kd<S: Scalar>(
    metric: &Metric<S>,
    a: &[Point<S>],
    b: &[Point<S>],
    coords: Vec<Vec<f64>>,
    floor: S,
) -> Result<S> {
    let tree = KdTree::build(coords);
    let euclidean = matches!(metric, Metric::Euclidean);
    // Lower bound on the computed distance of any point at least `g` away along one axis.
    let gap_bound = move |g: f64| if euclidean { (g * g).sqrt() } else { g };
    let mut cmax = floor;
    let mut failure: Option<Error> = None;
    for x in a {
        let query: Vec<f64> = x.as_dense().expect("checked dense").iter().map(S::to_f64).collect();
        let cutoff = cmax.to_f64();
        let mut dist = |i: usize| match distance(metric, x, &b[i]) {
            Ok(d) => d.to_f64(),
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        };
        let found = tree.nearest(&query, Some(cutoff), &gap_bound, &mut dist);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        if let Nearest::Found { index, .. } = found {
            cmax = cmax.max_value(distance(metric, x, &b[index])?);
        }
    }
    Ok(cmax)
}

/// Hausdorff distance at hyperspace level `k` (the level of both sets), with
/// the level capped at [`DEFAULT_MAX_LEVEL`].
pub fn hyperspace_distance<S: Scalar>(metric: &Metric<S>, u: &FiniteSet<S>, v: &FiniteSet<S>) -> Result<S> {
    hyperspace_distance_capped(metric, u, v, DEFAULT_MAX_LEVEL)
}

pub fn hyperspace_distance_capped<S: Scalar>(
    metric: &Metric<S>,
    u: &FiniteSet<S>,
    v: &FiniteSet<S>,
    max_level: usize,
) -> Result<S> {
    if u.level() != v.level() {
        return Err(Error::LevelMismatch { left: u.level(), right: v.level() });
    }
    if u.level() > max_level {
        return Err(Error::LevelTooDeep { level: u.level(), cap: max_level });
    }
    match (u.sets(), v.sets()) {
        (Some(us), Some(vs)) => {
            let ground = |x: &FiniteSet<S>, y: &FiniteSet<S>| hyperspace_distance_capped(metric, x, y, max_level);
            let uv = directed_by(us, vs, ground)?;
            let vu = directed_by(vs, us, ground)?;
            Ok(uv.max_value(vu))
        }
        _ => hausdorff(metric, u, v),
    }
}
