//! Hausdorff distance between two finite planar sets, exact and in floats.

use hausfix::{directed_hausdorff, hausdorff, hausdorff_accelerated, Exact, FiniteSet, Metric, Point};

fn exact_set(points: &[(i64, i64)]) -> FiniteSet<Exact> {
    FiniteSet::from_points(points.iter().map(|&(x, y)| Point::dense(vec![Exact::from(x), Exact::from(y)]))).unwrap()
}

fn main() -> hausfix::Result<()> {
    let a = exact_set(&[(0, 0), (1, 0), (0, 1)]);
    let b = exact_set(&[(0, 0), (3, 4)]);
    for metric in [Metric::Euclidean, Metric::SupNorm] {
        println!(
            "{:<9} h(A,B) = {}  h(B,A) = {}  H(A,B) = {}",
            metric.name(),
            directed_hausdorff(&metric, &a, &b)?,
            directed_hausdorff(&metric, &b, &a)?,
            hausdorff(&metric, &a, &b)?
        );
    }

    // A larger float instance goes through the kd-tree path.
    let circle = |n: usize, r: f64| {
        FiniteSet::from_points((0..n).map(|k| {
            let t = k as f64 / n as f64 * std::f64::consts::TAU;
            Point::dense(vec![r * t.cos(), r * t.sin()])
        }))
        .unwrap()
    };
    let (inner, outer) = (circle(500, 1.0), circle(700, 1.25));
    println!("circles: H = {:.6}", hausdorff_accelerated(&Metric::Euclidean, &inner, &outer)?);
    Ok(())
}
