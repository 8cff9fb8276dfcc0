//! A worked instance in `l^inf` whose map satisfies the gauge condition but
//! admits no Nadler constant and whose gauge fails the Mizoguchi–Takahashi
//! condition at 0.
//!
//! `tau_1 = 1/2`, `tau_{n+1} = (1 - tau_n) tau_n`, `x_n = tau_n e_n`,
//! `T x_n = {x_{n+1}, x_{n+2}, ...}` and `alpha(tau_n) = 1 - tau_n`
//! (0 elsewhere). The finite slice of depth `N` closes the map with the
//! sentinel `T x_N = {x_N}`; pair checks never involve the sentinel's image.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::gauge::{
    check_geraghty_class, check_mizoguchi_takahashi, distinct_pairs, estimate_nadler_constant, halving_grid, Gauge,
    GeraghtyReport, MtReport, MtVerdict, NadlerEstimate, Verdict,
};
use crate::hausdorff::hausdorff_accelerated;
use crate::map::SetValuedMap;
use crate::metric::{distance, Metric, Point};
use crate::numeric::NumericMode;
use crate::problem::{GaugeSpec, Literal, MapSpec, MetricName, PointSpec, ProblemFile, SetElement, SetSpec, SolverSpec};
use crate::set::FiniteSet;
use crate::solver::{iterate, IterationTrace, DEFAULT_MAX_ITER};

/// `tau_1, ..., tau_N`, exact.
#[derive(Clone, Debug)]
pub struct TauSequence {
    values: Vec<Exact>,
}

impl TauSequence {
    pub fn new(len: usize) -> Self {
        let values = std::iter::successors(Some(Exact::ratio(1, 2)), |t| Some((Exact::one() - t) * t))
            .take(len)
            .collect();
        TauSequence { values }
    }

    /// `tau_n`, 1-based.
    pub fn get(&self, n: usize) -> &Exact {
        &self.values[n - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Exact] {
        &self.values
    }
}

/// `tau_n` for `n >= 1`.
pub fn tau(n: usize) -> Exact {
    assert!(n >= 1, "tau is indexed from 1");
    TauSequence::new(n).get(n).clone()
}

/// Finite slice of depth `N` of the worked instance.
#[derive(Clone, Debug)]
pub struct ExampleInstance {
    pub depth: usize,
    pub tau: TauSequence,
    /// `x_1..x_N`; `points[n - 1] = x_n`.
    pub points: Vec<Point<Exact>>,
    pub map: SetValuedMap<Exact>,
    pub gauge: Gauge<Exact>,
    pub metric: Metric<Exact>,
}

impl ExampleInstance {
    pub fn point(&self, n: usize) -> &Point<Exact> {
        &self.points[n - 1]
    }

    pub fn image(&self, n: usize) -> FiniteSet<Exact> {
        self.map.image(self.point(n)).expect("map is total on its points")
    }

    /// Index of the truncation sentinel `x_N` (`T x_N = {x_N}`).
    pub fn sentinel(&self) -> usize {
        self.depth
    }
}

pub fn build_example(depth: usize) -> Result<ExampleInstance> {
    if depth < 3 {
        return Err(Error::InvalidArgument(format!("example depth {depth} < 3")));
    }
    let tau = TauSequence::new(depth);
    let points: Vec<Point<Exact>> = (1..=depth)
        .map(|n| Ok(Point::sparse([(n, tau.get(n).clone())])?.with_id(format!("x{n}"))))
        .collect::<Result<_>>()?;
    let entries = (1..=depth).map(|n| {
        let tail = if n < depth { &points[n..] } else { &points[n - 1..] };
        Ok((points[n - 1].clone(), FiniteSet::from_points(tail.to_vec())?))
    });
    let map = SetValuedMap::table(entries.collect::<Result<Vec<_>>>()?)?;
    let gauge = Gauge::tabulated(tau.values().iter().map(|t| (t.clone(), Exact::one() - t)), Exact::zero())?;
    Ok(ExampleInstance { depth, tau, points, map, gauge, metric: Metric::SupNorm })
}

/// Outcome of an exhaustive equality sweep over index pairs `n < m`.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimCheck {
    pub verdict: Verdict,
    pub pairs_checked: usize,
    /// First failing pair `(m, n)`.
    pub first_failure: Option<(usize, usize)>,
}

impl ClaimCheck {
    fn sweep(max_m: usize, mut holds: impl FnMut(usize, usize) -> Result<bool>) -> Result<ClaimCheck> {
        let mut pairs_checked = 0;
        for m in 2..=max_m {
            for n in 1..m {
                pairs_checked += 1;
                if !holds(m, n)? {
                    return Ok(ClaimCheck { verdict: Verdict::Fail, pairs_checked, first_failure: Some((m, n)) });
                }
            }
        }
        Ok(ClaimCheck { verdict: Verdict::Pass, pairs_checked, first_failure: None })
    }
}

/// First pair breaking a candidate Nadler constant `r`.
#[derive(Clone, Debug, Serialize)]
pub struct NadlerFinding {
    pub r: Exact,
    /// Smallest `n` with `H(T x_{n+1}, T x_n) > r d(x_{n+1}, x_n)`, i.e. `tau_n < 1 - r`.
    pub first_index: Option<usize>,
    pub witness: Option<(String, String)>,
    pub ratio: Option<Exact>,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub nadler_r: Vec<Exact>,
    /// Depth cap for the quadratic equality sweeps.
    pub sweep_limit: usize,
    pub epsilons: Vec<Exact>,
    pub deltas: Vec<Exact>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            nadler_r: vec![Exact::ratio(1, 2), Exact::ratio(9, 10), Exact::ratio(99, 100)],
            sweep_limit: 30,
            epsilons: halving_grid(Exact::ratio(1, 2), 10),
            deltas: halving_grid(Exact::one(), 30),
        }
    }
}

/// Per-claim findings of [`verify_example`].
#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub depth: usize,
    pub sweep_depth: usize,
    /// Id of the truncation sentinel; its image is excluded from every pair check.
    pub sentinel: String,
    /// `d(x_m, x_n) = tau_n` for `n < m <= sweep_depth`.
    pub distances: ClaimCheck,
    /// `H(T x_m, T x_n) = tau_{n+1}` for `n < m <= sweep_depth - 1`.
    pub hausdorff: ClaimCheck,
    /// `H(T x_m, T x_n) = alpha(d(x_m, x_n)) d(x_m, x_n)` on the same pairs.
    pub gauge_condition: ClaimCheck,
    pub nadler: Vec<NadlerFinding>,
    pub geraghty: GeraghtyReport<Exact>,
    pub mizoguchi_takahashi: MtReport<Exact>,
}

impl ExampleReport {
    /// Whether the three equality sweeps pass.
    pub fn equalities_hold(&self) -> bool {
        [&self.distances, &self.hausdorff, &self.gauge_condition].iter().all(|c| c.verdict == Verdict::Pass)
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

impl fmt::Display for ExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "depth {} (sweeps at depth {}, sentinel {} excluded)", self.depth, self.sweep_depth, self.sentinel)?;
        for (name, c) in [
            ("d(x_m, x_n) = tau_n", &self.distances),
            ("H(Tx_m, Tx_n) = tau_{n+1}", &self.hausdorff),
            ("H(Tx_m, Tx_n) = alpha(d) d", &self.gauge_condition),
        ] {
            write!(f, "{:<28} {} ({} pairs)", name, verdict_word(c.verdict), c.pairs_checked)?;
            if let Some((m, n)) = c.first_failure {
                write!(f, " first failure at m={m}, n={n}")?;
            }
            writeln!(f)?;
        }
        for finding in &self.nadler {
            match (&finding.first_index, &finding.witness, &finding.ratio) {
                (Some(n), Some((a, b)), Some(ratio)) => writeln!(
                    f,
                    "Nadler r = {}: violated, first index {n}, pair ({a}, {b}), ratio ~{:.6}",
                    finding.r,
                    ratio.to_f64()
                )?,
                _ => writeln!(f, "Nadler r = {}: no violation up to depth {}", finding.r, self.depth)?,
            }
        }
        let mut s = String::new();
        for (eps, sup) in self.geraghty.epsilons.iter().zip(&self.geraghty.sup_t) {
            let sup = sup.as_ref().map_or("none".to_string(), |v| format!("{:.6}", v.to_f64()));
            let _ = write!(s, " {eps}:{sup}");
        }
        writeln!(f, "class S: {} (s(eps):{s})", verdict_word(self.geraghty.verdict))?;
        let mt = &self.mizoguchi_takahashi;
        let word = match mt.verdict {
            MtVerdict::Pass => "PASS-MT",
            MtVerdict::Fail => "FAIL-MT",
        };
        write!(f, "MT at t0 = 0: {word}, limsup estimate ~{:.6} at delta {}", mt.limsup_estimate.to_f64(), mt.final_delta)
    }
}

/// Check every claim of the worked instance at depth `N`.
pub fn verify_example(depth: usize, options: &VerifyOptions) -> Result<ExampleReport> {
    let full = build_example(depth)?;
    let sweep_depth = depth.min(options.sweep_limit).max(3);
    let small = if sweep_depth == depth { full.clone() } else { build_example(sweep_depth)? };
    let m = &small.metric;

    let distances = ClaimCheck::sweep(sweep_depth, |i, j| Ok(distance(m, small.point(i), small.point(j))? == *small.tau.get(j)))?;
    let hausdorff = ClaimCheck::sweep(sweep_depth - 1, |i, j| {
        Ok(hausdorff_accelerated(m, &small.image(i), &small.image(j))? == *small.tau.get(j + 1))
    })?;
    let gauge_condition = ClaimCheck::sweep(sweep_depth - 1, |i, j| {
        let d = distance(m, small.point(i), small.point(j))?;
        let h = hausdorff_accelerated(m, &small.image(i), &small.image(j))?;
        Ok(h == small.gauge.evaluate(&d)? * d)
    })?;

    let nadler = options.nadler_r.iter().map(|r| first_nadler_violation(&full, r)).collect::<Result<_>>()?;
    let probes = full.tau.values().to_vec();
    let geraghty = check_geraghty_class(&full.gauge, &probes, &options.epsilons)?;
    let mizoguchi_takahashi = check_mizoguchi_takahashi(&full.gauge, &Exact::zero(), &probes, &options.deltas)?;
    Ok(ExampleReport {
        depth,
        sweep_depth,
        sentinel: format!("x{depth}"),
        distances,
        hausdorff,
        gauge_condition,
        nadler,
        geraghty,
        mizoguchi_takahashi,
    })
}

/// Scan consecutive non-sentinel pairs `(x_{n+1}, x_n)` for a ratio above `r`.
fn first_nadler_violation(inst: &ExampleInstance, r: &Exact) -> Result<NadlerFinding> {
    for n in 1..inst.depth - 1 {
        let d = distance(&inst.metric, inst.point(n + 1), inst.point(n))?;
        let h = hausdorff_accelerated(&inst.metric, &inst.image(n + 1), &inst.image(n))?;
        if h > r.clone() * d.clone() {
            return Ok(NadlerFinding {
                r: r.clone(),
                first_index: Some(n),
                witness: Some((format!("x{}", n + 1), format!("x{n}"))),
                ratio: Some(h / d),
            });
        }
    }
    Ok(NadlerFinding { r: r.clone(), first_index: None, witness: None, ratio: None })
}

/// Run the solver from `x_k` with tolerance 0.
pub fn run_example_orbit(depth: usize, k: usize) -> Result<IterationTrace<Exact>> {
    let inst = build_example(depth)?;
    if k == 0 || k > depth {
        return Err(Error::InvalidArgument(format!("start index {k} outside 1..={depth}")));
    }
    iterate(&inst.map, &inst.metric, &inst.gauge, inst.point(k), &Exact::zero(), DEFAULT_MAX_ITER)
}

/// Nadler estimate over all pairs among `x_1..x_N`, none of whose images is a
/// sentinel (the slice is built one level deeper).
pub fn example_nadler_estimate(depth: usize) -> Result<NadlerEstimate<Exact>> {
    let inst = build_example(depth + 1)?;
    let pairs = distinct_pairs(&inst.points[..depth]);
    estimate_nadler_constant(&inst.map, &inst.metric, &pairs)
}

/// The depth-`N` slice as a rational-mode problem file, with the named sets
/// `Tx1..TxN` and the solver starting at `x1` with tolerance 0.
///
/// Fails when some `tau_n` is too large to render as `p/q`.
pub fn export_problem(depth: usize) -> Result<ProblemFile> {
    let inst = build_example(depth)?;
    let lit = |v: &Exact| {
        v.to_fraction_string()
            .map(Literal)
            .ok_or_else(|| Error::InvalidArgument(format!("depth {depth} is too deep to export exactly")))
    };
    let id = |n: usize| format!("x{n}");
    let points = (1..=depth)
        .map(|n| {
            let sparse = BTreeMap::from([(n.to_string(), lit(inst.tau.get(n))?)]);
            Ok(PointSpec { id: id(n), coords: None, sparse: Some(sparse) })
        })
        .collect::<Result<Vec<_>>>()?;
    let image_ids = |n: usize| -> Vec<String> {
        let first = if n < depth { n + 1 } else { n };
        (first..=depth).map(id).collect()
    };
    let table = (1..=depth).map(|n| (id(n), image_ids(n))).collect();
    let sets = (1..=depth)
        .map(|n| (format!("Tx{n}"), SetSpec { set: image_ids(n).into_iter().map(SetElement::Id).collect() }))
        .collect();
    let entries = (1..=depth)
        .map(|n| Ok((lit(inst.tau.get(n))?, lit(&(Exact::one() - inst.tau.get(n)))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProblemFile {
        mode: NumericMode::Rational,
        metric: MetricName::Sup,
        points,
        table: None,
        sets,
        map: Some(MapSpec::Table(table)),
        gauge: Some(GaugeSpec::Tabulated { entries, default: Some(Literal("0".into())) }),
        solver: Some(SolverSpec { x0: id(1), tol: Some(Literal("0".into())), max_iter: None }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hausdorff::hausdorff;
    use crate::solver::{verify_orbit_conditions, Outcome};

    fn q(n: i64, d: i64) -> Exact {
        Exact::ratio(n, d)
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau(1), q(1, 2));
        assert_eq!(tau(2), q(1, 4));
        assert_eq!(tau(4), q(39, 256));
        let seq = TauSequence::new(40);
        assert!(seq.values().windows(2).all(|w| w[1] < w[0] && w[1] > Exact::zero()));
    }

    #[test]
    fn small_instance_shape() {
        let inst = build_example(3).unwrap();
        assert_eq!(inst.image(1), FiniteSet::from_points(vec![inst.point(2).clone(), inst.point(3).clone()]).unwrap());
        assert_eq!(inst.image(2), FiniteSet::singleton(inst.point(3).clone()));
        assert_eq!(inst.image(3), FiniteSet::singleton(inst.point(3).clone()));
        assert_eq!(inst.sentinel(), 3);
        assert_eq!(inst.gauge.evaluate(&q(1, 4)).unwrap(), q(3, 4));
        assert_eq!(inst.gauge.evaluate(&q(3, 10)).unwrap(), Exact::zero());
        assert_eq!(distance(&inst.metric, inst.point(3), inst.point(2)).unwrap(), q(1, 4));
        assert!(build_example(2).is_err());
    }

    #[test]
    fn accelerated_matches_oracle_on_images() {
        let inst = build_example(9).unwrap();
        for m in 1..=9 {
            for n in 1..=9 {
                let (a, b) = (inst.image(m), inst.image(n));
                assert_eq!(hausdorff(&inst.metric, &a, &b).unwrap(), hausdorff_accelerated(&inst.metric, &a, &b).unwrap());
            }
        }
        assert_eq!(hausdorff(&inst.metric, &inst.image(3), &inst.image(1)).unwrap(), q(1, 4));
    }

    #[test]
    fn verify_depth_five() {
        let report = verify_example(5, &VerifyOptions::default()).unwrap();
        assert!(report.equalities_hold(), "{report}");
        assert_eq!(report.distances.pairs_checked, 10);
        assert_eq!(report.hausdorff.pairs_checked, 6);
        assert_eq!(report.nadler[0].first_index, Some(2));
        assert_eq!(report.nadler[1].first_index, None);
        assert_eq!(report.sentinel, "x5");
        assert!(serde_json::to_string(&report).is_ok());
    }

    #[test]
    fn orbit_from_start() {
        let trace = run_example_orbit(6, 1).unwrap();
        assert_eq!(trace.step_distances(), (1..=5).map(tau).collect::<Vec<_>>());
        assert!(matches!(&trace.outcome, Outcome::FixedPoint { point, .. } if point.id() == Some("x6")));
        let inst = build_example(6).unwrap();
        assert!(verify_orbit_conditions(&inst.metric, &trace, &inst.gauge).unwrap().is_clean());
        let sentinel = run_example_orbit(6, 6).unwrap();
        assert_eq!(sentinel.moves(), 0);
        assert!(run_example_orbit(6, 7).is_err());
    }

    #[test]
    fn export_round_trips() {
        let file = export_problem(6).unwrap();
        let again = ProblemFile::from_json(&file.to_json()).unwrap();
        assert_eq!(again, file);
        let p = again.resolve::<Exact>().unwrap();
        let inst = build_example(6).unwrap();
        assert_eq!(p.points, inst.points);
        assert_eq!(p.map.as_ref().unwrap().entries().unwrap(), inst.map.entries().unwrap());
        assert_eq!(hausdorff(&p.metric, &p.sets["Tx3"], &p.sets["Tx1"]).unwrap(), q(1, 4));
        for n in 1..=6 {
            assert_eq!(p.gauge.as_ref().unwrap().evaluate(&tau(n)).unwrap(), Exact::one() - tau(n));
        }
        assert!(export_problem(40).is_err());
    }

    #[test]
    fn nadler_estimate_on_small_slices() {
        for depth in 3..=8 {
            let est = example_nadler_estimate(depth).unwrap();
            assert_eq!(est.ratio, Exact::one() - tau(depth - 1), "depth {depth}");
        }
    }
}
