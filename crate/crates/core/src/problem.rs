//! JSON problem files shared by every CLI subcommand.
//!
//! ```json
//! {
//!   "mode": "rational",
//!   "metric": "table",
//!   "points": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
//!   "table": [["0", "1", "5/4"], ["1", "0", "1/2"], ["5/4", "1/2", "0"]],
//!   "sets": {"A": {"set": ["a", "b"]}},
//!   "map": {"table": {"a": ["b"], "b": ["c"], "c": ["c"]}},
//!   "gauge": {"kind": "constant", "value": "1/2"},
//!   "solver": {"x0": "a", "tol": "0", "max_iter": 100}
//! }
//! ```
//!
//! Scalars are strings (`"p/q"`, integers or decimals) or JSON numbers.
//! Coordinate points are `{"id", "coords": [..]}` or `{"id", "sparse": {"index": value}}`.
//! Map rules: `scale {factor}`, `halve`, `scale_set {factors: [..]}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge::{Gauge, GaugeRule};
use crate::map::SetValuedMap;
use crate::metric::{DistanceTable, Metric, Point};
use crate::numeric::{NumericMode, Scalar};
use crate::set::FiniteSet;

/// A scalar literal kept as text, so exact values survive the round trip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Literal(pub String);

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(serde_json::Number),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Text(s) => Literal(s),
            Raw::Number(n) => Literal(n.to_string()),
        })
    }
}

impl From<&str> for Literal {
    fn from(s: &str) -> Self {
        Literal(s.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricName {
    Euclidean,
    Sup,
    Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Literal>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sparse: Option<BTreeMap<String, Literal>>,
}

/// `{"set": [...]}`; elements are point ids or nested sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    pub set: Vec<SetElement>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetElement {
    Id(String),
    Set(SetSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapSpec {
    Table(BTreeMap<String, Vec<String>>),
    Rule(RuleSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Param>,
    /// Declare the map on the listed points only; images must stay among them.
    #[serde(default)]
    pub restrict_to_points: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    One(Literal),
    Many(Vec<Literal>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GaugeSpec {
    Constant {
        value: Literal,
    },
    Tabulated {
        entries: Vec<(Literal, Literal)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        default: Option<Literal>,
    },
    Rule {
        name: String,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        params: BTreeMap<String, Literal>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub x0: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<Literal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
}

fn default_mode() -> NumericMode {
    NumericMode::Float
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default = "default_mode")]
    pub mode: NumericMode,
    pub metric: MetricName,
    pub points: Vec<PointSpec>,
    /// Row-major distances, rows and columns in `points` order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<Literal>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sets: BTreeMap<String, SetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSpec>,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse("problem file", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::parse("problem file", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    /// Resolve into typed objects for numeric mode `S`.
    pub fn resolve<S: Scalar>(&self) -> Result<Problem<S>> {
        if self.mode != S::MODE {
            return Err(Error::ModeMismatch(format!("file declares {} mode, requested {}", self.mode, S::MODE)));
        }
        let points = self.resolve_points::<S>()?;
        let index: BTreeMap<String, usize> =
            self.points.iter().enumerate().map(|(i, p)| (p.id.clone(), i)).collect();
        let metric = self.resolve_metric::<S>()?;
        let mut problem = Problem { metric, points, index, sets: BTreeMap::new(), map: None, gauge: None, solver: None };
        for (name, spec) in &self.sets {
            let set = problem.resolve_set(spec, &format!("sets.{name}"))?;
            problem.sets.insert(name.clone(), set);
        }
        if let Some(map) = &self.map {
            problem.map = Some(problem.resolve_map(map)?);
        }
        if let Some(g) = &self.gauge {
            problem.gauge = Some(resolve_gauge(g, "gauge")?);
        }
        if let Some(s) = &self.solver {
            let x0 = problem.point_at(&s.x0, "solver.x0")?.clone();
            let tol = s.tol.as_ref().map(|t| scalar(t, "solver.tol")).transpose()?;
            problem.solver = Some(SolverParams { x0, tol, max_iter: s.max_iter });
        }
        Ok(problem)
    }

    fn resolve_points<S: Scalar>(&self) -> Result<Vec<Point<S>>> {
        let mut seen = BTreeMap::new();
        let mut out = Vec::with_capacity(self.points.len());
        for (i, spec) in self.points.iter().enumerate() {
            let field = format!("points[{i}]");
            if seen.insert(spec.id.clone(), i).is_some() {
                return Err(Error::parse(format!("{field}.id"), format!("duplicate id `{}`", spec.id)));
            }
            let point = match (self.metric, &spec.coords, &spec.sparse) {
                (MetricName::Table, None, None) => Point::label(spec.id.as_str()),
                (MetricName::Table, _, _) => {
                    return Err(Error::parse(field, "table-metric points carry only an id"));
                }
                (_, Some(coords), None) => {
                    let values = coords
                        .iter()
                        .enumerate()
                        .map(|(k, c)| scalar(c, &format!("{field}.coords[{k}]")))
                        .collect::<Result<Vec<S>>>()?;
                    Point::dense(values).with_id(spec.id.as_str())
                }
                (MetricName::Sup, None, Some(sparse)) => {
                    let entries = sparse
                        .iter()
                        .map(|(k, v)| {
                            let f = format!("{field}.sparse.{k}");
                            let index = k.parse::<usize>().map_err(|e| Error::parse(&f, e.to_string()))?;
                            Ok((index, scalar(v, &f)?))
                        })
                        .collect::<Result<Vec<(usize, S)>>>()?;
                    Point::sparse(entries).map_err(|e| Error::parse(&field, e.to_string()))?.with_id(spec.id.as_str())
                }
                (MetricName::Euclidean, None, Some(_)) => {
                    return Err(Error::parse(field, "sparse points need the sup metric"));
                }
                _ => return Err(Error::parse(field, "give exactly one of `coords` or `sparse`")),
            };
            out.push(point);
        }
        let mut sorted: Vec<(usize, &Point<S>)> = out.iter().enumerate().collect();
        sorted.sort_by(|a, b| a.1.cmp(b.1));
        if let Some(w) = sorted.windows(2).find(|w| w[0].1 == w[1].1) {
            let (a, b) = (w[0].0.min(w[1].0), w[0].0.max(w[1].0));
            return Err(Error::parse(
                format!("points[{b}]"),
                format!("same coordinates as `{}`", self.points[a].id),
            ));
        }
        Ok(out)
    }

    fn resolve_metric<S: Scalar>(&self) -> Result<Metric<S>> {
        match (self.metric, &self.table) {
            (MetricName::Euclidean, None) => Ok(Metric::Euclidean),
            (MetricName::Sup, None) => Ok(Metric::SupNorm),
            (MetricName::Table, Some(rows)) => {
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter().enumerate().map(|(j, v)| scalar(v, &format!("table[{i}][{j}]"))).collect()
                    })
                    .collect::<Result<Vec<Vec<S>>>>()?;
                let labels: Vec<&str> = self.points.iter().map(|p| p.id.as_str()).collect();
                let table = DistanceTable::new(labels, rows).map_err(|e| Error::parse("table", e.to_string()))?;
                Ok(Metric::table(table))
            }
            (MetricName::Table, None) => Err(Error::parse("table", "the table metric needs a `table`")),
            (_, Some(_)) => Err(Error::parse("table", "a `table` is only allowed with the table metric")),
        }
    }
}

fn scalar<S: Scalar>(lit: &Literal, field: &str) -> Result<S> {
    S::parse_literal(&lit.0).map_err(|e| match e {
        Error::ModeMismatch(m) => Error::ModeMismatch(format!("{field}: {m}")),
        other => Error::parse(field, other.to_string()),
    })
}

fn resolve_gauge<S: Scalar>(spec: &GaugeSpec, field: &str) -> Result<Gauge<S>> {
    let invalid = |e: Error| Error::parse(field, e.to_string());
    match spec {
        GaugeSpec::Constant { value } => Gauge::constant(scalar(value, &format!("{field}.value"))?).map_err(invalid),
        GaugeSpec::Tabulated { entries, default } => {
            let entries = entries
                .iter()
                .enumerate()
                .map(|(i, (k, v))| {
                    let f = format!("{field}.entries[{i}]");
                    Ok((scalar(k, &f)?, scalar(v, &f)?))
                })
                .collect::<Result<Vec<(S, S)>>>()?;
            let default = default.as_ref().map(|d| scalar(d, &format!("{field}.default"))).transpose()?;
            Gauge::tabulated(entries, default.unwrap_or_else(S::zero)).map_err(invalid)
        }
        GaugeSpec::Rule { name, params } => {
            if let Some(k) = params.keys().find(|k| k.as_str() != "scale") {
                return Err(Error::parse(format!("{field}.params.{k}"), "unknown parameter (expected `scale`)"));
            }
            let scale = params.get("scale").map(|s| scalar(s, &format!("{field}.params.scale"))).transpose()?;
            let rule = GaugeRule::from_name(name, scale.unwrap_or_else(S::one)).map_err(invalid)?;
            Gauge::rule(rule).map_err(invalid)
        }
    }
}

/// Parse a standalone gauge spec (as used by `check-gauge`).
pub fn parse_gauge<S: Scalar>(json: &str) -> Result<Gauge<S>> {
    let spec: GaugeSpec = serde_json::from_str(json).map_err(|e| Error::parse("gauge", e.to_string()))?;
    resolve_gauge(&spec, "gauge")
}

#[derive(Clone, Debug)]
pub struct SolverParams<S> {
    pub x0: Point<S>,
    pub tol: Option<S>,
    pub max_iter: Option<usize>,
}

/// A resolved problem file.
#[derive(Clone, Debug)]
pub struct Problem<S: Scalar> {
    pub metric: Metric<S>,
    /// Points in file order.
    pub points: Vec<Point<S>>,
    index: BTreeMap<String, usize>,
    pub sets: BTreeMap<String, FiniteSet<S>>,
    pub map: Option<SetValuedMap<S>>,
    pub gauge: Option<Gauge<S>>,
    pub solver: Option<SolverParams<S>>,
}

impl<S: Scalar> Problem<S> {
    pub fn point(&self, id: &str) -> Result<&Point<S>> {
        self.point_at(id, "point")
    }

    fn point_at(&self, id: &str, field: &str) -> Result<&Point<S>> {
        self.index
            .get(id)
            .map(|&i| &self.points[i])
            .ok_or_else(|| Error::parse(field, format!("unknown point id `{id}`")))
    }

    /// A named set from the file, or else a comma-separated list of point ids.
    pub fn set_arg(&self, arg: &str, field: &str) -> Result<FiniteSet<S>> {
        if let Some(set) = self.sets.get(arg) {
            return Ok(set.clone());
        }
        let points = arg
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|id| self.point_at(id, field).cloned())
            .collect::<Result<Vec<_>>>()?;
        FiniteSet::from_points(points).map_err(|e| Error::parse(field, e.to_string()))
    }

    fn resolve_set(&self, spec: &SetSpec, field: &str) -> Result<FiniteSet<S>> {
        let invalid = |e: Error| Error::parse(field, e.to_string());
        let ids: Vec<&String> = spec.set.iter().filter_map(|e| if let SetElement::Id(id) = e { Some(id) } else { None }).collect();
        if ids.len() == spec.set.len() {
            let points = ids.iter().map(|id| self.point_at(id, field).cloned()).collect::<Result<Vec<_>>>()?;
            return FiniteSet::from_points(points).map_err(invalid);
        }
        if !ids.is_empty() {
            return Err(Error::parse(field, "a set mixes point ids and nested sets"));
        }
        let sets = spec
            .set
            .iter()
            .enumerate()
            .map(|(i, e)| match e {
                SetElement::Set(inner) => self.resolve_set(inner, &format!("{field}.set[{i}]")),
                SetElement::Id(_) => unreachable!(),
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteSet::from_sets(sets).map_err(invalid)
    }

    fn resolve_map(&self, spec: &MapSpec) -> Result<SetValuedMap<S>> {
        match spec {
            MapSpec::Table(table) => {
                let entries = table
                    .iter()
                    .map(|(k, ids)| {
                        let field = format!("map.table.{k}");
                        let x = self.point_at(k, &field)?.clone();
                        let image = ids.iter().map(|id| self.point_at(id, &field).cloned()).collect::<Result<Vec<_>>>()?;
                        Ok((x, FiniteSet::from_points(image).map_err(|e| Error::parse(&field, e.to_string()))?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                SetValuedMap::table(entries).map_err(|e| Error::parse("map.table", e.to_string()))
            }
            MapSpec::Rule(rule) => self.resolve_rule(rule),
        }
    }

    fn resolve_rule(&self, spec: &RuleSpec) -> Result<SetValuedMap<S>> {
        let field = "map.rule";
        let one = |key: &str| -> Result<S> {
            match spec.params.get(key) {
                Some(Param::One(lit)) => scalar(lit, &format!("{field}.params.{key}")),
                Some(Param::Many(_)) => Err(Error::parse(format!("{field}.params.{key}"), "expected a single scalar")),
                None => Err(Error::parse(format!("{field}.params"), format!("missing `{key}`"))),
            }
        };
        let expect_params = |allowed: &[&str]| -> Result<()> {
            match spec.params.keys().find(|k| !allowed.contains(&k.as_str())) {
                Some(k) => Err(Error::parse(format!("{field}.params.{k}"), "unknown parameter")),
                None => Ok(()),
            }
        };
        let factors: Vec<S> = match spec.name.as_str() {
            "scale" => {
                expect_params(&["factor"])?;
                vec![one("factor")?]
            }
            "halve" => {
                expect_params(&[])?;
                vec![S::from_ratio(1, 2)]
            }
            "scale_set" => {
                expect_params(&["factors"])?;
                match spec.params.get("factors") {
                    Some(Param::Many(list)) if !list.is_empty() => list
                        .iter()
                        .enumerate()
                        .map(|(i, l)| scalar(l, &format!("{field}.params.factors[{i}]")))
                        .collect::<Result<_>>()?,
                    _ => return Err(Error::parse(format!("{field}.params.factors"), "expected a nonempty list")),
                }
            }
            other => {
                return Err(Error::parse(
                    format!("{field}.name"),
                    format!("unknown rule `{other}` (known: scale, halve, scale_set)"),
                ))
            }
        };
        let name = spec.name.clone();
        let rule = move |x: &Point<S>| FiniteSet::from_points(factors.iter().map(|c| x.scaled(c)).collect::<Result<Vec<_>>>()?);
        Ok(if spec.restrict_to_points {
            SetValuedMap::rule_on(name, self.points.clone(), rule)
        } else {
            SetValuedMap::rule(name, rule)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Exact;

    const THREE_POINT: &str = r#"{
        "mode": "rational",
        "metric": "table",
        "points": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
        "table": [["0", "1", "5/4"], ["1", "0", "1/2"], ["5/4", "1/2", "0"]],
        "sets": {"A": {"set": ["a", "b"]}, "U": {"set": [{"set": ["a"]}, {"set": ["b", "c"]}]}},
        "map": {"table": {"a": ["b"], "b": ["c"], "c": ["c"]}},
        "gauge": {"kind": "constant", "value": "1/2"},
        "solver": {"x0": "a", "tol": "0"}
    }"#;

    #[test]
    fn resolves_three_point_problem() {
        let file = ProblemFile::from_json(THREE_POINT).unwrap();
        let p: Problem<Exact> = file.resolve().unwrap();
        assert_eq!(p.points.len(), 3);
        assert_eq!(p.sets["U"].level(), 2);
        assert_eq!(p.set_arg("b,a", "a").unwrap(), p.sets["A"]);
        assert_eq!(p.map.as_ref().unwrap().image(&Point::label("a")).unwrap(), FiniteSet::singleton(Point::label("b")));
        assert_eq!(p.solver.as_ref().unwrap().tol, Some(Exact::zero()));
        let again = ProblemFile::from_json(&file.to_json()).unwrap();
        assert_eq!(again, file);
    }

    #[test]
    fn mode_mismatch() {
        let file = ProblemFile::from_json(THREE_POINT).unwrap();
        assert!(matches!(file.resolve::<f64>(), Err(Error::ModeMismatch(_))));
        let float = THREE_POINT.replace("\"rational\"", "\"float\"");
        let file = ProblemFile::from_json(&float).unwrap();
        assert!(matches!(file.resolve::<f64>(), Err(Error::ModeMismatch(m)) if m.contains("table[0][2]")));
    }

    #[test]
    fn errors_name_the_field() {
        let bad = THREE_POINT.replace(r#""b": ["c"]"#, r#""b": ["zz"]"#);
        let err = ProblemFile::from_json(&bad).unwrap().resolve::<Exact>().unwrap_err();
        assert!(matches!(&err, Error::Parse { field, .. } if field == "map.table.b"), "{err}");

        let bad = THREE_POINT.replace(r#"["5/4", "1/2", "0"]"#, r#"["5/4", "1/2", "x"]"#);
        let err = ProblemFile::from_json(&bad).unwrap().resolve::<Exact>().unwrap_err();
        assert!(matches!(&err, Error::Parse { field, .. } if field == "table[2][2]"), "{err}");

        let bad = THREE_POINT.replace(r#""5/4", "1/2", "0"]"#, r#""3", "1/2", "0"]"#);
        let err = ProblemFile::from_json(&bad).unwrap().resolve::<Exact>().unwrap_err();
        assert!(matches!(&err, Error::Parse { field, .. } if field == "table"), "{err}");

        assert!(matches!(ProblemFile::from_json("{\"metric\": 3}"), Err(Error::Parse { .. })));
    }

    #[test]
    fn float_points_and_rules() {
        let json = r#"{
            "metric": "euclidean",
            "points": [{"id": "one", "coords": [1.0]}, {"id": "half", "coords": ["0.5"]}],
            "map": {"rule": {"name": "scale_set", "params": {"factors": [0.5, "0.25"]}}},
            "gauge": {"kind": "rule", "name": "t_over_1_plus_t", "params": {"scale": "0.5"}},
            "solver": {"x0": "one", "tol": 1e-9, "max_iter": 50}
        }"#;
        let p: Problem<f64> = ProblemFile::from_json(json).unwrap().resolve().unwrap();
        let image = p.map.as_ref().unwrap().image(p.point("one").unwrap()).unwrap();
        assert_eq!(image.len(), 2);
        assert_eq!(p.gauge.unwrap().evaluate(&1.0).unwrap(), 0.25);
        assert_eq!(p.solver.unwrap().max_iter, Some(50));
    }

    #[test]
    fn sparse_points() {
        let json = r#"{
            "mode": "exact",
            "metric": "sup",
            "points": [{"id": "x1", "sparse": {"1": "1/2"}}, {"id": "x2", "sparse": {"2": "1/4"}}]
        }"#;
        let p: Problem<Exact> = ProblemFile::from_json(json).unwrap().resolve().unwrap();
        let d = crate::metric::distance(&p.metric, p.point("x1").unwrap(), p.point("x2").unwrap()).unwrap();
        assert_eq!(d, Exact::ratio(1, 2));
        let dup = json.replace(r#""2": "1/4""#, r#""1": "1/2""#);
        assert!(matches!(ProblemFile::from_json(&dup).unwrap().resolve::<Exact>(), Err(Error::Parse { field, .. }) if field == "points[1]"));
    }

    #[test]
    fn standalone_gauges() {
        let g: Gauge<Exact> = parse_gauge(r#"{"kind": "tabulated", "entries": [["1/2", "1/2"]]}"#).unwrap();
        assert_eq!(g.evaluate(&Exact::ratio(1, 3)).unwrap(), Exact::zero());
        assert!(parse_gauge::<f64>(r#"{"kind": "constant", "value": 1.5}"#).is_err());
        assert!(parse_gauge::<f64>(r#"{"kind": "rule", "name": "nope"}"#).is_err());
    }
}
