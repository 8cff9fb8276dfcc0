//! Iterate a float map and write the convergence trace as CSV to stdout.

use hausfix::solver::DEFAULT_MAX_ITER;
use hausfix::{iterate, FiniteSet, Gauge, GaugeRule, Metric, Point, SetValuedMap};

fn main() -> hausfix::Result<()> {
    // T(x) = {x/2, x/3}.
    let map = SetValuedMap::rule("thirds", |x: &Point<f64>| {
        FiniteSet::from_points([x.scaled(&0.5)?, x.scaled(&(1.0 / 3.0))?])
    });
    let gauge = Gauge::rule(GaugeRule::SaturatingRatio { scale: 1.0 })?;
    let x0 = Point::dense(vec![3.0, -1.5]);
    let trace = iterate(&map, &Metric::Euclidean, &gauge, &x0, &1e-9, DEFAULT_MAX_ITER)?;
    trace.write_csv(std::io::stdout())?;
    eprintln!("{}", trace.summary());
    Ok(())
}
