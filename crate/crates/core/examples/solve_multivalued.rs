//! Fixed point of a set-valued map on a small table space.

use hausfix::metric::DistanceTable;
use hausfix::solver::{verify_orbit_conditions, DEFAULT_MAX_ITER};
use hausfix::{iterate, Exact, FiniteSet, Gauge, Metric, Point, SetValuedMap};

fn main() -> hausfix::Result<()> {
    let q = Exact::ratio;
    let table = DistanceTable::new(
        vec!["a", "b", "c", "d"],
        vec![
            vec![q(0, 1), q(1, 1), q(5, 4), q(3, 2)],
            vec![q(1, 1), q(0, 1), q(1, 2), q(3, 4)],
            vec![q(5, 4), q(1, 2), q(0, 1), q(1, 4)],
            vec![q(3, 2), q(3, 4), q(1, 4), q(0, 1)],
        ],
    )?;
    let metric = Metric::table(table);
    let p = Point::label;
    let map = SetValuedMap::table([
        (p("a"), FiniteSet::from_points([p("b"), p("d")])?),
        (p("b"), FiniteSet::from_points([p("c")])?),
        (p("c"), FiniteSet::from_points([p("c"), p("d")])?),
        (p("d"), FiniteSet::from_points([p("d")])?),
    ])?;
    let gauge = Gauge::constant(q(1, 2))?;
    let trace = iterate(&map, &metric, &gauge, &p("a"), &Exact::zero(), DEFAULT_MAX_ITER)?;
    for step in &trace.steps {
        println!("x{} = {}  D(x, Tx) = {}", step.n, step.point, step.image_distance);
    }
    println!("{}", trace.summary());
    println!("orbit diagnostics: {:?}", verify_orbit_conditions(&metric, &trace, &gauge)?);
    Ok(())
}
