//! Canonical finite sets of points, and sets of sets for hyperspace levels.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::metric::Point;
use crate::numeric::Scalar;

/// A nonempty, sorted, deduplicated finite set. Level 1 holds points; level
/// `k > 1` holds level `k - 1` sets.
#[derive(Clone, Debug)]
pub struct FiniteSet<S> {
    members: Members<S>,
}

#[derive(Clone, Debug)]
enum Members<S> {
    Points(Vec<Point<S>>),
    Sets { level: usize, sets: Vec<FiniteSet<S>> },
}

fn canonical<T: Ord>(mut items: Vec<T>) -> Result<Vec<T>> {
    if items.is_empty() {
        return Err(Error::EmptySet);
    }
    items.sort();
    items.dedup();
    Ok(items)
}

impl<S: Scalar> FiniteSet<S> {
    pub fn from_points(points: impl IntoIterator<Item = Point<S>>) -> Result<Self> {
        Ok(FiniteSet { members: Members::Points(canonical(points.into_iter().collect())?) })
    }

    pub fn singleton(point: Point<S>) -> Self {
        FiniteSet { members: Members::Points(vec![point]) }
    }

    /// A set of sets. All members must share one level.
    pub fn from_sets(sets: impl IntoIterator<Item = FiniteSet<S>>) -> Result<Self> {
        let sets = canonical(sets.into_iter().collect())?;
        let level = sets[0].level();
        if let Some(bad) = sets.iter().find(|s| s.level() != level) {
            return Err(Error::LevelMismatch { left: level, right: bad.level() });
        }
        Ok(FiniteSet { members: Members::Sets { level: level + 1, sets } })
    }

    pub fn level(&self) -> usize {
        match &self.members {
            Members::Points(_) => 1,
            Members::Sets { level, .. } => *level,
        }
    }

    pub fn len(&self) -> usize {
        match &self.members {
            Members::Points(p) => p.len(),
            Members::Sets { sets, .. } => sets.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Members of a level-1 set.
    pub fn points(&self) -> Option<&[Point<S>]> {
        match &self.members {
            Members::Points(p) => Some(p),
            Members::Sets { .. } => None,
        }
    }

    /// Members of a set of level at least 2.
    pub fn sets(&self) -> Option<&[FiniteSet<S>]> {
        match &self.members {
            Members::Points(_) => None,
            Members::Sets { sets, .. } => Some(sets),
        }
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        self.points().is_some_and(|pts| pts.binary_search(p).is_ok())
    }

    /// Subset test for level-1 sets.
    pub fn is_subset_of(&self, other: &FiniteSet<S>) -> bool {
        match self.points() {
            Some(pts) => pts.iter().all(|p| other.contains(p)),
            None => false,
        }
    }

    pub fn union(&self, other: &FiniteSet<S>) -> Result<Self> {
        match (&self.members, &other.members) {
            (Members::Points(a), Members::Points(b)) => FiniteSet::from_points(a.iter().chain(b).cloned()),
            (Members::Sets { sets: a, .. }, Members::Sets { sets: b, .. }) if self.level() == other.level() => {
                FiniteSet::from_sets(a.iter().chain(b).cloned())
            }
            _ => Err(Error::LevelMismatch { left: self.level(), right: other.level() }),
        }
    }
}

impl<S: Scalar> Ord for FiniteSet<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.members, &other.members) {
            (Members::Points(a), Members::Points(b)) => a.cmp(b),
            (Members::Sets { level: la, sets: a }, Members::Sets { level: lb, sets: b }) => la.cmp(lb).then_with(|| a.cmp(b)),
            _ => self.level().cmp(&other.level()),
        }
    }
}

impl<S: Scalar> PartialOrd for FiniteSet<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> PartialEq for FiniteSet<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for FiniteSet<S> {}

impl<S: Scalar> fmt::Display for FiniteSet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        match &self.members {
            Members::Points(p) => {
                for (k, x) in p.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
            }
            Members::Sets { sets, .. } => {
                for (k, x) in sets.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
            }
        }
        f.write_str("}")
    }
}
