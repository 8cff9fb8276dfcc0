//! Gauge functions `alpha: [0, inf) -> [0, 1)` and sample-based checkers for
//! the three contraction conditions: a Nadler constant, the
//! Mizoguchi–Takahashi right-limsup condition and Geraghty's class S.
//!
//! The checkers work on explicit probe sets. They can falsify or corroborate
//! a condition at the sampled scale; they never prove one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hausdorff::hausdorff_accelerated;
use crate::map::SetValuedMap;
use crate::metric::{distance, Metric, Point};
use crate::numeric::Scalar;

#[derive(Clone, Debug)]
pub struct Gauge<S> {
    kind: GaugeKind<S>,
}

#[derive(Clone, Debug)]
pub enum GaugeKind<S> {
    Constant(S),
    /// `alpha(keys[i]) = values[i]`, `default` elsewhere. Keys sorted and distinct.
    Tabulated { keys: Vec<S>, values: Vec<S>, default: S },
    Rule(GaugeRule<S>),
    /// `t -> (1 + inner(t)) / 2`
    Beta(Box<Gauge<S>>),
}

/// Registered closed-form gauges.
#[derive(Clone, Debug)]
pub enum GaugeRule<S> {
    /// `scale * t / (1 + t)`. Tends to `scale` as `t -> inf`.
    SaturatingRatio { scale: S },
    /// `scale / (1 + t)`. Equals `scale` at `t = 0`.
    ReciprocalShift { scale: S },
}

impl<S: Scalar> GaugeRule<S> {
    pub fn name(&self) -> &'static str {
        match self {
            GaugeRule::SaturatingRatio { .. } => "t_over_1_plus_t",
            GaugeRule::ReciprocalShift { .. } => "inverse_1_plus_t",
        }
    }

    pub fn scale(&self) -> &S {
        match self {
            GaugeRule::SaturatingRatio { scale } | GaugeRule::ReciprocalShift { scale } => scale,
        }
    }

    /// Look a rule up by its registered name.
    pub fn from_name(name: &str, scale: S) -> Result<Self> {
        match name {
            "t_over_1_plus_t" => Ok(GaugeRule::SaturatingRatio { scale }),
            "inverse_1_plus_t" => Ok(GaugeRule::ReciprocalShift { scale }),
            other => Err(Error::InvalidArgument(format!(
                "unknown gauge rule `{other}` (known: t_over_1_plus_t, inverse_1_plus_t)"
            ))),
        }
    }

    fn apply(&self, t: &S) -> S {
        let denom = S::one() + t.clone();
        match self {
            GaugeRule::SaturatingRatio { scale } => scale.clone() * t.clone() / denom,
            GaugeRule::ReciprocalShift { scale } => scale.clone() / denom,
        }
    }
}

fn in_unit_interval<S: Scalar>(v: &S) -> bool {
    !v.is_negative() && v.lt_value(&S::one())
}

fn codomain_error<S: Scalar>(at: &S, value: &S) -> Error {
    Error::CodomainViolation { at: at.to_string(), value: value.to_string() }
}

impl<S: Scalar> Gauge<S> {
    pub fn constant(r: S) -> Result<Self> {
        if !in_unit_interval(&r) {
            return Err(Error::CodomainViolation { at: "any t".into(), value: r.to_string() });
        }
        Ok(Gauge { kind: GaugeKind::Constant(r) })
    }

    /// Tabulated gauge. Keys must be distinct and nonnegative; values and the
    /// default must lie in `[0, 1)`.
    pub fn tabulated(entries: impl IntoIterator<Item = (S, S)>, default: S) -> Result<Self> {
        let mut entries: Vec<(S, S)> = entries.into_iter().collect();
        for (k, v) in &entries {
            if k.is_negative() {
                return Err(Error::NegativeArgument(k.to_string()));
            }
            if !in_unit_interval(v) {
                return Err(codomain_error(k, v));
            }
        }
        if !in_unit_interval(&default) {
            return Err(Error::CodomainViolation { at: "default".into(), value: default.to_string() });
        }
        entries.sort_by(|a, b| a.0.cmp_value(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0.approx_eq(&w[1].0)) {
            return Err(Error::InvalidArgument(format!("repeated gauge key {}", w[0].0)));
        }
        let (keys, values) = entries.into_iter().unzip();
        Ok(Gauge { kind: GaugeKind::Tabulated { keys, values, default } })
    }

    pub fn rule(rule: GaugeRule<S>) -> Result<Self> {
        let scale = rule.scale();
        if scale.is_negative() || S::one().lt_value(scale) {
            return Err(Error::InvalidArgument(format!("rule scale {scale} outside [0, 1]")));
        }
        Ok(Gauge { kind: GaugeKind::Rule(rule) })
    }

    pub fn kind(&self) -> &GaugeKind<S> {
        &self.kind
    }

    /// `alpha(t)`. Fails for `t < 0` and for values outside `[0, 1)`.
    pub fn evaluate(&self, t: &S) -> Result<S> {
        if t.is_negative() {
            return Err(Error::NegativeArgument(t.to_string()));
        }
        let value = self.raw(t)?;
        if !in_unit_interval(&value) {
            return Err(codomain_error(t, &value));
        }
        Ok(value)
    }

    fn raw(&self, t: &S) -> Result<S> {
        Ok(match &self.kind {
            GaugeKind::Constant(r) => r.clone(),
            GaugeKind::Tabulated { keys, values, default } => lookup(keys, t).map_or_else(|| default.clone(), |i| values[i].clone()),
            GaugeKind::Rule(rule) => rule.apply(t),
            GaugeKind::Beta(inner) => (S::one() + inner.evaluate(t)?) / S::from_ratio(2, 1),
        })
    }

    /// The gauge `t -> (1 + alpha(t)) / 2`, which lies strictly between
    /// `alpha` and 1 everywhere.
    pub fn beta(&self) -> Gauge<S> {
        let half = |v: &S| (S::one() + v.clone()) / S::from_ratio(2, 1);
        let kind = match &self.kind {
            GaugeKind::Constant(r) => GaugeKind::Constant(half(r)),
            GaugeKind::Tabulated { keys, values, default } => GaugeKind::Tabulated {
                keys: keys.clone(),
                values: values.iter().map(half).collect(),
                default: half(default),
            },
            _ => GaugeKind::Beta(Box::new(self.clone())),
        };
        Gauge { kind }
    }
}

/// Index of the key equal to `t` (exactly, or within the float tolerance).
fn lookup<S: Scalar>(keys: &[S], t: &S) -> Option<usize> {
    match keys.binary_search_by(|k| k.cmp_value(t)) {
        Ok(i) => Some(i),
        Err(pos) => [pos.checked_sub(1), Some(pos)]
            .into_iter()
            .flatten()
            .find(|&i| i < keys.len() && keys[i].approx_eq(t)),
    }
}

/// Free-function form of [`Gauge::beta`].
pub fn beta_of<S: Scalar>(g: &Gauge<S>) -> Gauge<S> {
    g.beta()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Result of [`check_geraghty_class`].
#[derive(Clone, Debug, Serialize)]
pub struct GeraghtyReport<S> {
    pub epsilons: Vec<S>,
    /// `s(eps) = sup { t in probes : alpha(t) >= 1 - eps }`, `None` when no probe qualifies.
    pub sup_t: Vec<Option<S>>,
    pub threshold: S,
    pub verdict: Verdict,
}

/// Sample-scale check of `alpha(t_n) -> 1 => t_n -> 0`, using the smallest
/// grid epsilon as the pass threshold.
pub fn check_geraghty_class<S: Scalar>(g: &Gauge<S>, probes: &[S], epsilons: &[S]) -> Result<GeraghtyReport<S>> {
    let threshold = epsilons
        .last()
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("empty epsilon grid".into()))?;
    check_geraghty_class_with_threshold(g, probes, epsilons, threshold)
}

/// For each `eps` computes `s(eps)`. Verdict:
///
/// * `Fail` when at least two grid points have a defined `s`, `s` never
///   decreases across them, and it stays above `threshold` (the near-1
///   values of `alpha` sit at a fixed `t` bounded away from 0);
/// * `Pass` when the last `s` is undefined or at most `threshold`, and `s`
///   is not stuck as above;
/// * `Inconclusive` otherwise.
pub fn check_geraghty_class_with_threshold<S: Scalar>(
    g: &Gauge<S>,
    probes: &[S],
    epsilons: &[S],
    threshold: S,
) -> Result<GeraghtyReport<S>> {
    if probes.is_empty() {
        return Err(Error::EmptyProbeSet);
    }
    validate_decreasing(epsilons, "epsilon grid")?;
    if let Some(e) = epsilons.iter().find(|e| !e.lt_value(&S::one())) {
        return Err(Error::InvalidArgument(format!("epsilon {e} not in (0, 1)")));
    }
    let alphas = probes.iter().map(|t| g.evaluate(t)).collect::<Result<Vec<S>>>()?;
    let sup_t: Vec<Option<S>> = epsilons
        .iter()
        .map(|eps| {
            let floor = S::one() - eps.clone();
            probes
                .iter()
                .zip(&alphas)
                .filter(|(_, a)| floor.le_value(a))
                .map(|(t, _)| t.clone())
                .reduce(S::max_value)
        })
        .collect();

    let defined: Vec<&S> = sup_t.iter().flatten().collect();
    let stuck = defined.len() >= 2
        && defined.windows(2).all(|w| w[1].cmp_value(w[0]).is_eq())
        && threshold.lt_value(defined[defined.len() - 1]);
    let settled = sup_t.last().is_none_or(|s| s.as_ref().is_none_or(|s| s.le_value(&threshold)));
    let verdict = if stuck {
        Verdict::Fail
    } else if settled {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    Ok(GeraghtyReport { epsilons: epsilons.to_vec(), sup_t, threshold, verdict })
}

fn validate_decreasing<S: Scalar>(values: &[S], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidArgument(format!("empty {what}")));
    }
    if let Some(v) = values.iter().find(|v| !S::zero().lt_value(v)) {
        return Err(Error::InvalidArgument(format!("{what} entry {v} is not positive")));
    }
    if values.windows(2).any(|w| !w[1].lt_value(&w[0])) {
        return Err(Error::InvalidArgument(format!("{what} is not strictly decreasing")));
    }
    Ok(())
}

/// `start, start/2, ..., start/2^(count-1)`.
pub fn halving_grid<S: Scalar>(start: S, count: usize) -> Vec<S> {
    let half = S::from_ratio(1, 2);
    std::iter::successors(Some(start), |x| Some(x.clone() * half.clone()))
        .take(count)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MtVerdict {
    #[serde(rename = "PASS-MT")]
    Pass,
    #[serde(rename = "FAIL-MT")]
    Fail,
}

/// Result of [`check_mizoguchi_takahashi`].
#[derive(Clone, Debug, Serialize)]
pub struct MtReport<S> {
    pub t0: S,
    pub deltas: Vec<S>,
    /// `sup { alpha(s) : s in probes, t0 < s <= t0 + delta }` per delta.
    pub estimates: Vec<Option<S>>,
    /// The probe attaining each estimate.
    pub witnesses: Vec<Option<S>>,
    /// Estimate at the smallest delta whose window holds a probe.
    pub limsup_estimate: S,
    pub final_delta: S,
    pub margin: S,
    pub verdict: MtVerdict,
}

/// Default closeness-to-1 margin used by [`check_mizoguchi_takahashi`].
pub fn default_mt_margin<S: Scalar>() -> S {
    S::from_ratio(1, 100)
}

pub fn check_mizoguchi_takahashi<S: Scalar>(g: &Gauge<S>, t0: &S, probes: &[S], deltas: &[S]) -> Result<MtReport<S>> {
    check_mizoguchi_takahashi_with_margin(g, t0, probes, deltas, default_mt_margin())
}

/// Estimates `limsup_{s -> t0+} alpha(s)` on shrinking right windows.
///
/// The verdict is `Fail` when, at the smallest nonempty window `delta`, the
/// gap `1 - estimate` is at most both `delta` and `margin`: the estimate is
/// within `margin` of 1 and closes in on 1 at least as fast as the window
/// shrinks. Otherwise `Pass`.
pub fn check_mizoguchi_takahashi_with_margin<S: Scalar>(
    g: &Gauge<S>,
    t0: &S,
    probes: &[S],
    deltas: &[S],
    margin: S,
) -> Result<MtReport<S>> {
    if t0.is_negative() {
        return Err(Error::NegativeArgument(t0.to_string()));
    }
    if probes.is_empty() {
        return Err(Error::EmptyProbeSet);
    }
    validate_decreasing(deltas, "delta schedule")?;
    let right: Vec<(S, S)> = probes
        .iter()
        .filter(|s| t0.lt_value(s))
        .map(|s| Ok((s.clone(), g.evaluate(s)?)))
        .collect::<Result<_>>()?;
    if right.is_empty() {
        return Err(Error::NoProbesRightOfT0(t0.to_string()));
    }
    let mut estimates = Vec::with_capacity(deltas.len());
    let mut witnesses = Vec::with_capacity(deltas.len());
    for delta in deltas {
        let edge = t0.clone() + delta.clone();
        let best = right
            .iter()
            .filter(|(s, _)| s.le_value(&edge))
            .fold(None::<&(S, S)>, |best, cand| match best {
                Some(b) if !b.1.lt_value(&cand.1) => Some(b),
                _ => Some(cand),
            });
        estimates.push(best.map(|(_, a)| a.clone()));
        witnesses.push(best.map(|(s, _)| s.clone()));
    }
    let Some(last) = estimates.iter().rposition(Option::is_some) else {
        return Err(Error::NoProbesRightOfT0(format!("{t0} (none within t0 + {})", deltas[0])));
    };
    let limsup_estimate = estimates[last].clone().expect("defined");
    let final_delta = deltas[last].clone();
    let gap = S::one() - limsup_estimate.clone();
    let verdict = if gap.le_value(&final_delta) && gap.le_value(&margin) {
        MtVerdict::Fail
    } else {
        MtVerdict::Pass
    };
    Ok(MtReport { t0: t0.clone(), deltas: deltas.to_vec(), estimates, witnesses, limsup_estimate, final_delta, margin, verdict })
}

/// Largest observed ratio `H(Tx, Ty) / d(x, y)` over the given pairs.
#[derive(Clone, Debug)]
pub struct NadlerEstimate<S> {
    pub ratio: S,
    pub witness: (Point<S>, Point<S>),
    pub pairs: usize,
}

impl<S: Scalar> NadlerEstimate<S> {
    /// Whether a Nadler constant `r` is consistent with the sample.
    pub fn admits(&self, r: &S) -> bool {
        self.ratio.le_value(r)
    }
}

pub fn estimate_nadler_constant<S: Scalar>(
    map: &SetValuedMap<S>,
    metric: &Metric<S>,
    pairs: &[(Point<S>, Point<S>)],
) -> Result<NadlerEstimate<S>> {
    let mut best: Option<(S, usize)> = None;
    for (k, (x, y)) in pairs.iter().enumerate() {
        let d = distance(metric, x, y)?;
        if d.is_zero() {
            return Err(Error::ZeroDistancePair(x.to_string(), y.to_string()));
        }
        let h = hausdorff_accelerated(metric, &map.image(x)?, &map.image(y)?)?;
        let ratio = h / d;
        if best.as_ref().is_none_or(|(b, _)| b.lt_value(&ratio)) {
            best = Some((ratio, k));
        }
    }
    let (ratio, k) = best.ok_or_else(|| Error::InvalidArgument("no pairs to estimate from".into()))?;
    Ok(NadlerEstimate { ratio, witness: pairs[k].clone(), pairs: pairs.len() })
}

/// All pairs `(points[i], points[j])` with `i < j`.
pub fn distinct_pairs<S: Scalar>(points: &[Point<S>]) -> Vec<(Point<S>, Point<S>)> {
    let mut out = Vec::new();
    for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}
