//! Constructive fixed-point iteration for set-valued maps satisfying
//! `H(Tx, Ty) <= alpha(d(x, y)) d(x, y)`.
//!
//! From `x_n` the next point is the nearest point of `T x_n`; it must lie
//! within `beta(s_n) s_n` of `x_n`, where `s_n = d(x_{n-1}, x_n)` and
//! `beta = (1 + alpha) / 2`. The iteration stops once `D(x_n, T x_n) <= tol`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::map::SetValuedMap;
use crate::metric::{distance, nearest, Metric, Point};
use crate::numeric::Scalar;
use crate::set::FiniteSet;

pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Nearest point of `image` to `current` (lowest canonical order on ties),
/// with its distance. Fails with [`Error::BoundUnachievable`] when even the
/// nearest point is farther than `bound`.
pub fn select_next<S: Scalar>(
    metric: &Metric<S>,
    current: &Point<S>,
    image: &FiniteSet<S>,
    bound: Option<&S>,
) -> Result<(Point<S>, S)> {
    let points = image.points().ok_or(Error::LevelMismatch { left: image.level(), right: 1 })?;
    let (i, d) = nearest(metric, current, points)?;
    if let Some(bound) = bound {
        if !d.approx_le(bound) {
            return Err(Error::BoundUnachievable { distance: d.to_string(), bound: bound.to_string() });
        }
    }
    Ok((points[i].clone(), d))
}

#[derive(Clone, Debug)]
pub struct IterationStep<S> {
    pub n: usize,
    pub point: Point<S>,
    /// `d(x_{n-1}, x_n)`; absent for the starting point.
    pub step_distance: Option<S>,
    /// `D(x_n, T x_n)`.
    pub image_distance: S,
    /// `beta(d(x_{n-1}, x_n))`; absent for the starting point.
    pub beta_value: Option<S>,
}

#[derive(Clone, Debug)]
pub enum Outcome<S> {
    /// `D(point, T point) = certificate <= tol`.
    FixedPoint { point: Point<S>, certificate: S },
    MaxIterExceeded,
    /// Selecting `x_step` failed: the nearest image point was `distance`
    /// away but the bound was `bound`.
    BoundViolation { step: usize, distance: S, bound: S },
}

impl<S> Outcome<S> {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::FixedPoint { .. } => "FixedPoint",
            Outcome::MaxIterExceeded => "MaxIterExceeded",
            Outcome::BoundViolation { .. } => "BoundViolation",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IterationTrace<S> {
    pub steps: Vec<IterationStep<S>>,
    pub outcome: Outcome<S>,
}

impl<S: Scalar> IterationTrace<S> {
    /// Number of moves made (steps after the starting point).
    pub fn moves(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn points(&self) -> impl Iterator<Item = &Point<S>> {
        self.steps.iter().map(|s| &s.point)
    }

    pub fn step_distances(&self) -> Vec<S> {
        self.steps.iter().filter_map(|s| s.step_distance.clone()).collect()
    }

    /// One-line summary, e.g. `FixedPoint c, 2 steps`.
    pub fn summary(&self) -> String {
        let moves = self.moves();
        let unit = if moves == 1 { "step" } else { "steps" };
        match &self.outcome {
            Outcome::FixedPoint { point, .. } => format!("FixedPoint {point}, {moves} {unit}"),
            Outcome::MaxIterExceeded => format!("MaxIterExceeded, {moves} {unit}"),
            Outcome::BoundViolation { step, distance, bound } => {
                format!("BoundViolation at step {step}: distance {distance} > bound {bound}, {moves} {unit}")
            }
        }
    }

    /// Write the trace as CSV: `n,point_id,step_distance,image_distance,beta_value`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let io = |e: csv::Error| Error::InvalidArgument(format!("writing trace: {e}"));
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["n", "point_id", "step_distance", "image_distance", "beta_value"]).map_err(io)?;
        let opt = |v: &Option<S>| v.as_ref().map(S::to_string).unwrap_or_default();
        for s in &self.steps {
            w.write_record([
                s.n.to_string(),
                s.point.to_string(),
                opt(&s.step_distance),
                s.image_distance.to_string(),
                opt(&s.beta_value),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidArgument(format!("writing trace: {e}")))
    }
}

/// Run the iteration from `x0` for at most `max_iter` moves.
///
/// `tol` must be nonnegative, and positive in float mode.
pub fn iterate<S: Scalar>(
    map: &SetValuedMap<S>,
    metric: &Metric<S>,
    gauge: &Gauge<S>,
    x0: &Point<S>,
    tol: &S,
    max_iter: usize,
) -> Result<IterationTrace<S>> {
    if tol.is_negative() {
        return Err(Error::InvalidArgument(format!("tolerance {tol} is negative")));
    }
    if S::MODE == crate::numeric::NumericMode::Float && tol.is_zero() {
        return Err(Error::InvalidArgument("tolerance must be positive in float mode".into()));
    }
    let beta = gauge.beta();
    let mut image = map.image(x0)?;
    let image_distance = nearest_distance(metric, x0, &image)?;
    let mut steps = vec![IterationStep { n: 0, point: x0.clone(), step_distance: None, image_distance, beta_value: None }];
    loop {
        let last = steps.last().expect("nonempty");
        if last.image_distance.le_value(tol) {
            let outcome = Outcome::FixedPoint { point: last.point.clone(), certificate: last.image_distance.clone() };
            return Ok(IterationTrace { steps, outcome });
        }
        if last.n >= max_iter {
            return Ok(IterationTrace { steps, outcome: Outcome::MaxIterExceeded });
        }
        let bound = match (&last.step_distance, &last.beta_value) {
            (Some(s), Some(b)) => Some(b.clone() * s.clone()),
            _ => None,
        };
        let (next, d) = match select_next(metric, &last.point, &image, bound.as_ref()) {
            Ok(found) => found,
            Err(Error::BoundUnachievable { .. }) => {
                let outcome = Outcome::BoundViolation {
                    step: last.n + 1,
                    distance: last.image_distance.clone(),
                    bound: bound.expect("only bounded selections fail"),
                };
                return Ok(IterationTrace { steps, outcome });
            }
            Err(e) => return Err(e),
        };
        let n = last.n + 1;
        image = map.image(&next)?;
        let image_distance = nearest_distance(metric, &next, &image)?;
        let beta_value = beta.evaluate(&d)?;
        steps.push(IterationStep { n, point: next, step_distance: Some(d), image_distance, beta_value: Some(beta_value) });
    }
}

fn nearest_distance<S: Scalar>(metric: &Metric<S>, x: &Point<S>, image: &FiniteSet<S>) -> Result<S> {
    let points = image.points().ok_or(Error::LevelMismatch { left: image.level(), right: 1 })?;
    Ok(nearest(metric, x, points)?.1)
}

/// First violations found by [`verify_orbit_conditions`]; `None` means clean.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrbitDiagnostics {
    /// Step `n + 1` with `d(x_n, x_{n+1}) > beta(s_n) s_n`.
    pub contraction: Option<usize>,
    /// Step `n + 1` whose distance does not drop below a positive `s_n`.
    pub monotonicity: Option<usize>,
    /// Pair `(n, m)` violating
    /// `(1 - beta(d(x_n, x_m))) d(x_n, x_m) <= d(x_n, x_{n+1}) + d(x_m, x_{m+1})`.
    pub cauchy: Option<(usize, usize)>,
    pub pairs_checked: usize,
}

impl OrbitDiagnostics {
    pub fn is_clean(&self) -> bool {
        self.contraction.is_none() && self.monotonicity.is_none() && self.cauchy.is_none()
    }
}

/// Re-check the orbit inequalities on a finished trace.
///
/// The distance from `x_n` to the next orbit point is taken to be
/// `D(x_n, T x_n)` (the selection attains it), which also covers the final
/// point of the trace.
pub fn verify_orbit_conditions<S: Scalar>(
    metric: &Metric<S>,
    trace: &IterationTrace<S>,
    gauge: &Gauge<S>,
) -> Result<OrbitDiagnostics> {
    let beta = gauge.beta();
    let steps = &trace.steps;
    let mut report = OrbitDiagnostics::default();
    for w in steps.windows(2) {
        let (Some(prev), Some(next)) = (&w[0].step_distance, &w[1].step_distance) else { continue };
        if report.contraction.is_none() && !next.approx_le(&(beta.evaluate(prev)? * prev.clone())) {
            report.contraction = Some(w[1].n);
        }
        if report.monotonicity.is_none() && !prev.is_zero() && !next.lt_value(prev) {
            report.monotonicity = Some(w[1].n);
        }
    }
    for (i, a) in steps.iter().enumerate() {
        for b in &steps[i + 1..] {
            report.pairs_checked += 1;
            let d = distance(metric, &a.point, &b.point)?;
            let lhs = (S::one() - beta.evaluate(&d)?) * d;
            let rhs = a.image_distance.clone() + b.image_distance.clone();
            if report.cauchy.is_none() && !lhs.approx_le(&rhs) {
                report.cauchy = Some((a.n, b.n));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Exact;
    use crate::metric::DistanceTable;

    fn q(n: i64, d: i64) -> Exact {
        Exact::ratio(n, d)
    }

    fn three_point() -> (SetValuedMap<Exact>, Metric<Exact>) {
        let table = DistanceTable::new(
            vec!["a", "b", "c"],
            vec![vec![q(0, 1), q(1, 1), q(5, 4)], vec![q(1, 1), q(0, 1), q(1, 2)], vec![q(5, 4), q(1, 2), q(0, 1)]],
        )
        .unwrap();
        let l = Point::label;
        let map = SetValuedMap::table(vec![
            (l("a"), FiniteSet::singleton(l("b"))),
            (l("b"), FiniteSet::singleton(l("c"))),
            (l("c"), FiniteSet::singleton(l("c"))),
        ])
        .unwrap();
        (map, Metric::table(table))
    }

    #[test]
    fn three_point_orbit() {
        let (map, metric) = three_point();
        let g = Gauge::constant(q(1, 2)).unwrap();
        let trace = iterate(&map, &metric, &g, &Point::label("a"), &q(0, 1), DEFAULT_MAX_ITER).unwrap();
        let ids: Vec<String> = trace.points().map(ToString::to_string).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(trace.summary(), "FixedPoint c, 2 steps");
        assert_eq!(trace.step_distances(), vec![q(1, 1), q(1, 2)]);
        assert_eq!(trace.steps[1].beta_value, Some(q(3, 4)));
        let diag = verify_orbit_conditions(&metric, &trace, &g).unwrap();
        assert!(diag.is_clean(), "{diag:?}");
        assert_eq!(diag.pairs_checked, 3);
    }

    #[test]
    fn start_at_fixed_point() {
        let (map, metric) = three_point();
        let g = Gauge::constant(q(1, 2)).unwrap();
        let trace = iterate(&map, &metric, &g, &Point::label("c"), &q(0, 1), 10).unwrap();
        assert_eq!(trace.moves(), 0);
        assert!(matches!(&trace.outcome, Outcome::FixedPoint { certificate, .. } if certificate.is_zero()));
        assert!(verify_orbit_conditions(&metric, &trace, &g).unwrap().is_clean());
    }

    #[test]
    fn non_contractive_swap_violates_bound() {
        let table = DistanceTable::new(vec!["p", "q"], vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let l = Point::label;
        let map = SetValuedMap::table(vec![(l("p"), FiniteSet::singleton(l("q"))), (l("q"), FiniteSet::singleton(l("p")))])
            .unwrap();
        let g = Gauge::constant(0.99).unwrap();
        let trace = iterate(&map, &Metric::table(table), &g, &l("p"), &1e-9, 100).unwrap();
        assert!(matches!(trace.outcome, Outcome::BoundViolation { step: 2, .. }));
        assert_eq!(trace.moves(), 1);
    }

    #[test]
    fn halving_map_converges() {
        let map = SetValuedMap::scaling(0.5);
        let g = Gauge::constant(0.5).unwrap();
        // D(z, {z/2}) = |z|/2, so this tolerance stops exactly when |z| <= 1e-9.
        let trace = iterate(&map, &Metric::Euclidean, &g, &Point::dense(vec![1.0]), &5e-10, 35).unwrap();
        let Outcome::FixedPoint { point, .. } = &trace.outcome else { panic!("{:?}", trace.outcome) };
        assert!(point.as_dense().unwrap()[0].abs() <= 1e-9);
        assert!(trace.moves() <= 35);
        let csv = {
            let mut buf = Vec::new();
            trace.write_csv(&mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        assert!(csv.starts_with("n,point_id,step_distance,image_distance,beta_value\n0,"));
        assert_eq!(csv.lines().count(), trace.steps.len() + 1);
    }

    #[test]
    fn max_iter_and_tolerance_validation() {
        let map = SetValuedMap::scaling(0.5);
        let g = Gauge::constant(0.5).unwrap();
        let x0 = Point::dense(vec![1.0]);
        let trace = iterate(&map, &Metric::Euclidean, &g, &x0, &1e-9, 3).unwrap();
        assert!(matches!(trace.outcome, Outcome::MaxIterExceeded));
        assert_eq!(trace.moves(), 3);
        assert!(iterate(&map, &Metric::Euclidean, &g, &x0, &0.0, 3).is_err());
        assert!(iterate(&map, &Metric::Euclidean, &g, &x0, &-1.0, 3).is_err());
    }

    #[test]
    fn forged_increasing_step_is_flagged() {
        let (map, metric) = three_point();
        let g = Gauge::constant(q(1, 2)).unwrap();
        let mut trace = iterate(&map, &metric, &g, &Point::label("a"), &q(0, 1), 10).unwrap();
        trace.steps[2].step_distance = Some(q(2, 1));
        let diag = verify_orbit_conditions(&metric, &trace, &g).unwrap();
        assert_eq!(diag.monotonicity, Some(2));
        assert_eq!(diag.contraction, Some(2));
    }

    #[test]
    fn select_next_tie_break_and_bound() {
        let pts: Vec<Point<f64>> = [1.0, -1.0, 3.0].iter().map(|&x| Point::dense(vec![x])).collect();
        let image = FiniteSet::from_points(pts).unwrap();
        let (p, d) = select_next(&Metric::Euclidean, &Point::dense(vec![0.0]), &image, None).unwrap();
        assert_eq!((p, d), (Point::dense(vec![-1.0]), 1.0));
        let err = select_next(&Metric::Euclidean, &Point::dense(vec![0.0]), &image, Some(&0.5)).unwrap_err();
        assert!(matches!(err, Error::BoundUnachievable { .. }));
    }
}
