//! Points, metrics and point-to-set distances.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::Scalar;
use crate::set::FiniteSet;

#[derive(Clone, Debug)]
pub enum Coords<S> {
    Dense(Vec<S>),
    /// Finitely supported sequence: sorted by index, no explicit zeros.
    Sparse(Vec<(usize, S)>),
    /// A bare label, located through a distance table by the point id.
    Label,
}

/// A point of a metric space.
///
/// Equality and ordering look at the coordinates only (the id for labelled
/// points), never at the optional id of a coordinate point.
#[derive(Clone, Debug)]
pub struct Point<S> {
    id: Option<Arc<str>>,
    coords: Coords<S>,
}

impl<S: Scalar> Point<S> {
    pub fn dense(coords: Vec<S>) -> Self {
        Point { id: None, coords: Coords::Dense(coords) }
    }

    /// A finitely supported point. Zero entries are dropped; a repeated index
    /// is an error.
    pub fn sparse(entries: impl IntoIterator<Item = (usize, S)>) -> Result<Self> {
        let mut entries: Vec<(usize, S)> = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        entries.sort_by_key(|(i, _)| *i);
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument(format!("repeated sparse index {}", w[0].0)));
        }
        Ok(Point { id: None, coords: Coords::Sparse(entries) })
    }

    /// A point of a table metric, identified by its label.
    pub fn label(label: impl Into<Arc<str>>) -> Self {
        Point { id: Some(label.into()), coords: Coords::Label }
    }

    pub fn with_id(mut self, id: impl Into<Arc<str>>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn id(&self) -> Option<&str> {
        self.id.as_deref()
    }

    pub fn coords(&self) -> &Coords<S> {
        &self.coords
    }

    /// Dense coordinates, if this is a dense point.
    pub fn as_dense(&self) -> Option<&[S]> {
        match &self.coords {
            Coords::Dense(v) => Some(v),
            _ => None,
        }
    }

    /// Coordinate `i` (zero off the support of a sparse point).
    pub fn coordinate(&self, i: usize) -> Option<S> {
        match &self.coords {
            Coords::Dense(v) => v.get(i).cloned(),
            Coords::Sparse(e) => Some(
                e.binary_search_by_key(&i, |(j, _)| *j)
                    .map(|k| e[k].1.clone())
                    .unwrap_or_else(|_| S::zero()),
            ),
            Coords::Label => None,
        }
    }

    /// Multiply every coordinate by `factor`. Labelled points are rejected.
    pub fn scaled(&self, factor: &S) -> Result<Self> {
        let coords = match &self.coords {
            Coords::Dense(v) => Coords::Dense(v.iter().map(|x| x.clone() * factor.clone()).collect()),
            Coords::Sparse(e) => {
                return Point::sparse(e.iter().map(|(i, x)| (*i, x.clone() * factor.clone())));
            }
            Coords::Label => {
                return Err(Error::IncompatiblePoints(format!("cannot scale labelled point {self}")));
            }
        };
        Ok(Point { id: None, coords })
    }

    fn variant_rank(&self) -> u8 {
        match self.coords {
            Coords::Dense(_) => 0,
            Coords::Sparse(_) => 1,
            Coords::Label => 2,
        }
    }
}

fn cmp_slices<S: Scalar>(a: &[S], b: &[S]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp_value(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

impl<S: Scalar> Ord for Point<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.coords, &other.coords) {
            (Coords::Dense(a), Coords::Dense(b)) => cmp_slices(a, b),
            (Coords::Sparse(a), Coords::Sparse(b)) => {
                for ((i, x), (j, y)) in a.iter().zip(b) {
                    match i.cmp(j).then_with(|| x.cmp_value(y)) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                a.len().cmp(&b.len())
            }
            (Coords::Label, Coords::Label) => self.id.cmp(&other.id),
            _ => self.variant_rank().cmp(&other.variant_rank()),
        }
    }
}

impl<S: Scalar> PartialOrd for Point<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> PartialEq for Point<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for Point<S> {}

impl<S: Scalar> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(id) = &self.id {
            return f.write_str(id);
        }
        match &self.coords {
            Coords::Dense(v) => {
                f.write_str("(")?;
                for (k, x) in v.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            Coords::Sparse(e) => {
                f.write_str("{")?;
                for (k, (i, x)) in e.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{i}: {x}")?;
                }
                f.write_str("}")
            }
            Coords::Label => f.write_str("?"),
        }
    }
}

/// Symmetric distance table over labelled points, validated at construction.
#[derive(Clone, Debug)]
pub struct DistanceTable<S> {
    labels: Vec<Arc<str>>,
    index: HashMap<Arc<str>, usize>,
    rows: Vec<Vec<S>>,
}

/// Outcome of [`validate_metric_table`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableReport {
    Valid,
    NotSquare { row: usize },
    DuplicateLabel(String),
    Negative { a: String, b: String },
    NonzeroDiagonal(String),
    /// Two distinct labels at distance zero.
    ZeroOffDiagonal { a: String, b: String },
    Asymmetric { a: String, b: String },
    /// `d(a, c) > d(a, b) + d(b, c)`.
    Triangle { a: String, b: String, c: String },
}

impl TableReport {
    pub fn is_valid(&self) -> bool {
        matches!(self, TableReport::Valid)
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableReport::Valid => f.write_str("valid"),
            TableReport::NotSquare { row } => write!(f, "row {row} has the wrong length"),
            TableReport::DuplicateLabel(l) => write!(f, "duplicate label {l}"),
            TableReport::Negative { a, b } => write!(f, "negative distance d({a}, {b})"),
            TableReport::NonzeroDiagonal(a) => write!(f, "nonzero diagonal d({a}, {a})"),
            TableReport::ZeroOffDiagonal { a, b } => write!(f, "distinct labels {a}, {b} at distance 0"),
            TableReport::Asymmetric { a, b } => write!(f, "d({a}, {b}) != d({b}, {a})"),
            TableReport::Triangle { a, b, c } => write!(f, "triangle inequality fails: d({a}, {c}) > d({a}, {b}) + d({b}, {c})"),
        }
    }
}

/// Check that a labelled square table is a metric: square shape, zero
/// diagonal, positive off-diagonal entries, symmetry and the triangle
/// inequality over all triples. Returns the first violation found.
#[allow(clippy::needless_range_loop)]
pub fn validate_metric_table<S: Scalar>(labels: &[impl AsRef<str>], rows: &[Vec<S>]) -> TableReport {
    let n = labels.len();
    let name = |i: usize| labels[i].as_ref().to_string();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return TableReport::NotSquare { row: r };
        }
    }
    if rows.len() != n {
        return TableReport::NotSquare { row: rows.len().min(n) };
    }
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l.as_ref()) {
            return TableReport::DuplicateLabel(l.as_ref().to_string());
        }
    }
    for i in 0..n {
        if !rows[i][i].approx_eq(&S::zero()) {
            return TableReport::NonzeroDiagonal(name(i));
        }
        for j in 0..n {
            if rows[i][j].is_negative() {
                return TableReport::Negative { a: name(i), b: name(j) };
            }
            if i != j && rows[i][j].is_zero() {
                return TableReport::ZeroOffDiagonal { a: name(i), b: name(j) };
            }
            if !rows[i][j].approx_eq(&rows[j][i]) {
                return TableReport::Asymmetric { a: name(i), b: name(j) };
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let via = rows[a][b].clone() + rows[b][c].clone();
                if !rows[a][c].approx_le(&via) {
                    return TableReport::Triangle { a: name(a), b: name(b), c: name(c) };
                }
            }
        }
    }
    TableReport::Valid
}

impl<S: Scalar> DistanceTable<S> {
    pub fn new(labels: Vec<impl Into<Arc<str>>>, rows: Vec<Vec<S>>) -> Result<Self> {
        let labels: Vec<Arc<str>> = labels.into_iter().map(Into::into).collect();
        let report = validate_metric_table(&labels, &rows);
        if !report.is_valid() {
            return Err(Error::InvalidTable(report.to_string()));
        }
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Ok(DistanceTable { labels, index, rows })
    }

    pub fn labels(&self) -> &[Arc<str>] {
        &self.labels
    }

    pub fn points(&self) -> Vec<Point<S>> {
        self.labels.iter().map(|l| Point::label(l.clone())).collect()
    }

    pub fn get(&self, a: &str, b: &str) -> Option<&S> {
        Some(&self.rows[*self.index.get(a)?][*self.index.get(b)?])
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }
}

#[derive(Clone, Debug)]
pub enum Metric<S> {
    Euclidean,
    /// Sup norm on dense vectors and finitely supported sequences.
    SupNorm,
    Table(Arc<DistanceTable<S>>),
}

impl<S: Scalar> Metric<S> {
    pub fn table(table: DistanceTable<S>) -> Self {
        Metric::Table(Arc::new(table))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::SupNorm => "sup",
            Metric::Table(_) => "table",
        }
    }
}

fn incompatible<S: Scalar>(metric: &Metric<S>, p: &Point<S>, q: &Point<S>) -> Error {
    Error::IncompatiblePoints(format!("{p} and {q} under the {} metric", metric.name()))
}

/// `d(p, q)` under `metric`.
pub fn distance<S: Scalar>(metric: &Metric<S>, p: &Point<S>, q: &Point<S>) -> Result<S> {
    match (metric, &p.coords, &q.coords) {
        (Metric::Euclidean, Coords::Dense(a), Coords::Dense(b)) if a.len() == b.len() => {
            let sum = a.iter().zip(b).fold(S::zero(), |acc, (x, y)| {
                let d = x.clone() - y.clone();
                acc + d.clone() * d
            });
            Ok(sum.sqrt())
        }
        (Metric::SupNorm, Coords::Dense(a), Coords::Dense(b)) if a.len() == b.len() => Ok(a
            .iter()
            .zip(b)
            .fold(S::zero(), |acc, (x, y)| acc.max_value((x.clone() - y.clone()).abs()))),
        (Metric::SupNorm, Coords::Sparse(a), Coords::Sparse(b)) => Ok(sup_sparse(a, b)),
        (Metric::SupNorm, Coords::Sparse(a), Coords::Dense(b)) | (Metric::SupNorm, Coords::Dense(b), Coords::Sparse(a)) => {
            if a.last().is_some_and(|(i, _)| *i >= b.len()) {
                return Err(incompatible(metric, p, q));
            }
            let padded: Vec<(usize, S)> = b.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect();
            Ok(sup_sparse(a, &padded))
        }
        (Metric::Table(t), Coords::Label, Coords::Label) => {
            let (Some(a), Some(b)) = (p.id(), q.id()) else {
                return Err(incompatible(metric, p, q));
            };
            t.get(a, b).cloned().ok_or_else(|| incompatible(metric, p, q))
        }
        _ => Err(incompatible(metric, p, q)),
    }
}

/// Sup norm of the difference of two sparse vectors, walking the union of supports.
fn sup_sparse<S: Scalar>(a: &[(usize, S)], b: &[(usize, S)]) -> S {
    let (mut i, mut j) = (0, 0);
    let mut best = S::zero();
    while i < a.len() || j < b.len() {
        let diff = match (a.get(i), b.get(j)) {
            (Some((ia, x)), Some((ib, y))) if ia == ib => {
                i += 1;
                j += 1;
                x.clone() - y.clone()
            }
            (Some((ia, x)), Some((ib, _))) if ia < ib => {
                i += 1;
                x.clone()
            }
            (Some(_), Some((_, y))) | (None, Some((_, y))) => {
                j += 1;
                y.clone()
            }
            (Some((_, x)), None) => {
                i += 1;
                x.clone()
            }
            (None, None) => unreachable!(),
        };
        best = best.max_value(diff.abs());
    }
    best
}

/// Nearest element of `candidates` to `x`: index and distance. Ties go to the
/// earliest candidate.
pub fn nearest<S: Scalar>(metric: &Metric<S>, x: &Point<S>, candidates: &[Point<S>]) -> Result<(usize, S)> {
    let mut best: Option<(usize, S)> = None;
    for (k, a) in candidates.iter().enumerate() {
        let d = distance(metric, x, a)?;
        if best.as_ref().is_none_or(|(_, b)| d.lt_value(b)) {
            best = Some((k, d));
        }
    }
    best.ok_or(Error::EmptySet)
}

/// `D(x, A) = min_{a in A} d(x, a)`.
pub fn point_to_set_distance<S: Scalar>(metric: &Metric<S>, x: &Point<S>, set: &FiniteSet<S>) -> Result<S> {
    let points = set.points().ok_or(Error::LevelMismatch { left: set.level(), right: 1 })?;
    nearest(metric, x, points).map(|(_, d)| d)
}
