//! Distances between sets of sets: the Hausdorff metric lifted level by level.

use hausfix::{hyperspace_distance, Exact, FiniteSet, Metric, Point};

fn point(x: i64, y: i64) -> Point<Exact> {
    Point::dense(vec![Exact::from(x), Exact::from(y)])
}

fn main() -> hausfix::Result<()> {
    let metric = Metric::Euclidean;
    let a = FiniteSet::from_points([point(0, 0), point(1, 0)])?;
    let b = FiniteSet::from_points([point(1, 1)])?;
    let c = FiniteSet::from_points([point(0, 0), point(1, 1)])?;
    println!("level 1: H(A, B) = {}", hyperspace_distance(&metric, &a, &b)?);

    let u = FiniteSet::from_sets([a.clone(), b.clone()])?;
    let v = FiniteSet::from_sets([c.clone()])?;
    println!("level 2: H({{A, B}}, {{C}}) = {}", hyperspace_distance(&metric, &u, &v)?);

    let top_u = FiniteSet::from_sets([u.clone()])?;
    let top_v = FiniteSet::from_sets([v.clone(), u])?;
    println!("level 3: {}", hyperspace_distance(&metric, &top_u, &top_v)?);
    Ok(())
}
