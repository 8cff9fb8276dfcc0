//! Generators and brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use hausfix::metric::DistanceTable;
use hausfix::{Exact, FiniteSet, Metric, Point, Scalar, SetValuedMap};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

/// `tau_1..tau_n` by the recurrence, independently of the library.
pub fn tau_oracle(n: usize) -> Vec<Exact> {
    let mut out = vec![Exact::ratio(1, 2)];
    while out.len() < n {
        let t = out.last().unwrap().clone();
        out.push((Exact::one() - t.clone()) * t);
    }
    out
}

/// `tau_1..tau_n` as reduced big rationals (small `n` only: the
/// denominator of `tau_n` has `2^(n-1)` bits).
pub fn tau_rational(n: usize) -> Vec<BigRational> {
    let mut t = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut out = vec![t.clone()];
    for _ in 1..n {
        t = (BigRational::from_integer(BigInt::from(1)) - &t) * &t;
        out.push(t.clone());
    }
    out
}

/// Textbook `max(sup_a min_b d, sup_b min_a d)` over explicit point lists.
pub fn brute_hausdorff<S: Scalar>(metric: &Metric<S>, a: &[Point<S>], b: &[Point<S>]) -> S {
    let directed = |x: &[Point<S>], y: &[Point<S>]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| hausfix::distance(metric, p, q).unwrap())
                    .reduce(|m, d| if d.lt_value(&m) { d } else { m })
                    .unwrap()
            })
            .reduce(|m, d| if m.lt_value(&d) { d } else { m })
            .unwrap()
    };
    directed(a, b).max_value(directed(b, a))
}

pub fn random_float_points(rng: &mut impl Rng, count: usize, dim: usize) -> Vec<Point<f64>> {
    (0..count).map(|_| Point::dense((0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect())).collect()
}

/// Points with coordinates `k / den`, `|k| <= 20 den`.
pub fn random_exact_points(rng: &mut impl Rng, count: usize, dim: usize) -> Vec<Point<Exact>> {
    (0..count)
        .map(|_| {
            Point::dense(
                (0..dim)
                    .map(|_| {
                        let den = rng.gen_range(1..=8);
                        Exact::ratio(rng.gen_range(-20 * den..=20 * den), den)
                    })
                    .collect(),
            )
        })
        .collect()
}

/// A random set of the given hyperspace level with at most `width` members per level.
pub fn random_nested_set(rng: &mut impl Rng, level: usize, width: usize, dim: usize) -> FiniteSet<f64> {
    let n = rng.gen_range(1..=width);
    if level == 1 {
        let pts = (0..n).map(|_| Point::dense((0..dim).map(|_| f64::from(rng.gen_range(-6..=6)) / 2.0).collect()));
        FiniteSet::from_points(pts).unwrap()
    } else {
        FiniteSet::from_sets((0..n).map(|_| random_nested_set(rng, level - 1, width, dim))).unwrap()
    }
}

/// A finite metric space: distinct integer points of the plane under the
/// sup norm, as a labelled table `p0..p{k-1}`.
pub fn random_table_space(rng: &mut impl Rng, k: usize) -> (Vec<Point<Exact>>, Metric<Exact>) {
    let mut coords: Vec<(i64, i64)> = Vec::new();
    while coords.len() < k {
        let c = (rng.gen_range(0..40), rng.gen_range(0..40));
        if !coords.contains(&c) {
            coords.push(c);
        }
    }
    let rows = coords
        .iter()
        .map(|a| coords.iter().map(|b| Exact::from((a.0 - b.0).abs().max((a.1 - b.1).abs()))).collect())
        .collect();
    let labels: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
    let points = labels.iter().map(|l| Point::label(l.as_str())).collect();
    (points, Metric::table(DistanceTable::new(labels, rows).unwrap()))
}

/// Random table map with sink `T p0 = {p0}`; other images are drawn from
/// the points nearest to `p0`.
pub fn random_table_map(rng: &mut impl Rng, points: &[Point<Exact>], metric: &Metric<Exact>) -> SetValuedMap<Exact> {
    let mut by_distance: Vec<&Point<Exact>> = points.iter().collect();
    by_distance.sort_by(|a, b| {
        let da = hausfix::distance(metric, &points[0], a).unwrap();
        let db = hausfix::distance(metric, &points[0], b).unwrap();
        da.cmp(&db)
    });
    let entries = points.iter().enumerate().map(|(i, x)| {
        if i == 0 {
            return (x.clone(), FiniteSet::singleton(x.clone()));
        }
        let pool = rng.gen_range(1..=points.len().min(3));
        let mut image: Vec<Point<Exact>> =
            by_distance[..pool].iter().filter(|_| rng.gen_bool(0.6)).map(|p| (*p).clone()).collect();
        if image.is_empty() {
            image.push(by_distance[rng.gen_range(0..pool)].clone());
        }
        (x.clone(), FiniteSet::from_points(image).unwrap())
    });
    SetValuedMap::table(entries.collect::<Vec<_>>()).unwrap()
}

/// Whether `H(Tx, Ty) <= r d(x, y)` for every pair of distinct points.
pub fn satisfies_condition(map: &SetValuedMap<Exact>, metric: &Metric<Exact>, points: &[Point<Exact>], r: &Exact) -> bool {
    points.iter().enumerate().all(|(i, x)| {
        points[i + 1..].iter().all(|y| {
            let (tx, ty) = (map.image(x).unwrap(), map.image(y).unwrap());
            let h = brute_hausdorff(metric, tx.points().unwrap(), ty.points().unwrap());
            h <= r.clone() * hausfix::distance(metric, x, y).unwrap()
        })
    })
}
