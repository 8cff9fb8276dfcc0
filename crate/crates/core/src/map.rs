//! Set-valued maps `T: X -> CB(X)` with finite images.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::Point;
use crate::numeric::Scalar;
use crate::set::FiniteSet;

type RuleFn<S> = dyn Fn(&Point<S>) -> Result<FiniteSet<S>> + Send + Sync;

#[derive(Clone)]
pub struct SetValuedMap<S> {
    kind: MapKind<S>,
}

#[derive(Clone)]
enum MapKind<S> {
    /// Sorted by domain point.
    Table(Vec<(Point<S>, FiniteSet<S>)>),
    Rule {
        name: String,
        rule: Arc<RuleFn<S>>,
        /// When present, the map is declared on this finite space and images must stay in it.
        space: Option<Vec<Point<S>>>,
    },
}

impl<S: Scalar> SetValuedMap<S> {
    /// A map given by an explicit table over a finite space. The domain is the
    /// set of table keys; every image point must itself be a key.
    pub fn table(entries: impl IntoIterator<Item = (Point<S>, FiniteSet<S>)>) -> Result<Self> {
        let mut entries: Vec<(Point<S>, FiniteSet<S>)> = entries.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument(format!("point {} has two table entries", w[0].0)));
        }
        for (x, image) in &entries {
            let points = image
                .points()
                .ok_or(Error::LevelMismatch { left: image.level(), right: 1 })?;
            for p in points {
                if entries.binary_search_by(|(k, _)| k.cmp(p)).is_err() {
                    return Err(Error::DomainEscape(format!("{p} (image of {x})")));
                }
            }
        }
        Ok(SetValuedMap { kind: MapKind::Table(entries) })
    }

    /// A map given by a rule, defined wherever the rule is.
    pub fn rule(
        name: impl Into<String>,
        rule: impl Fn(&Point<S>) -> Result<FiniteSet<S>> + Send + Sync + 'static,
    ) -> Self {
        SetValuedMap { kind: MapKind::Rule { name: name.into(), rule: Arc::new(rule), space: None } }
    }

    /// A rule map declared on a finite space: arguments outside the space are
    /// rejected and images leaving it raise [`Error::DomainEscape`].
    pub fn rule_on(
        name: impl Into<String>,
        space: Vec<Point<S>>,
        rule: impl Fn(&Point<S>) -> Result<FiniteSet<S>> + Send + Sync + 'static,
    ) -> Self {
        let mut space = space;
        space.sort();
        space.dedup();
        SetValuedMap { kind: MapKind::Rule { name: name.into(), rule: Arc::new(rule), space: Some(space) } }
    }

    /// Single-valued map `x -> {f(x)}`.
    pub fn single_valued(
        name: impl Into<String>,
        f: impl Fn(&Point<S>) -> Result<Point<S>> + Send + Sync + 'static,
    ) -> Self {
        SetValuedMap::rule(name, move |x| Ok(FiniteSet::singleton(f(x)?)))
    }

    /// `x -> {c x}`.
    pub fn scaling(factor: S) -> Self {
        SetValuedMap::single_valued(format!("scale({factor})"), move |x| x.scaled(&factor))
    }

    pub fn image(&self, x: &Point<S>) -> Result<FiniteSet<S>> {
        match &self.kind {
            MapKind::Table(entries) => entries
                .binary_search_by(|(k, _)| k.cmp(x))
                .map(|i| entries[i].1.clone())
                .map_err(|_| Error::NotInDomain(x.to_string())),
            MapKind::Rule { rule, space, .. } => {
                if let Some(space) = space {
                    if space.binary_search(x).is_err() {
                        return Err(Error::NotInDomain(x.to_string()));
                    }
                }
                let image = rule(x)?;
                if let Some(space) = space {
                    let points = image
                        .points()
                        .ok_or(Error::LevelMismatch { left: image.level(), right: 1 })?;
                    if let Some(p) = points.iter().find(|p| space.binary_search(p).is_err()) {
                        return Err(Error::DomainEscape(format!("{p} (image of {x})")));
                    }
                }
                Ok(image)
            }
        }
    }

    /// The declared finite domain, if any.
    pub fn domain(&self) -> Option<Vec<Point<S>>> {
        match &self.kind {
            MapKind::Table(entries) => Some(entries.iter().map(|(k, _)| k.clone()).collect()),
            MapKind::Rule { space, .. } => space.clone(),
        }
    }

    /// Table entries, if this is a table map.
    pub fn entries(&self) -> Option<&[(Point<S>, FiniteSet<S>)]> {
        match &self.kind {
            MapKind::Table(e) => Some(e),
            MapKind::Rule { .. } => None,
        }
    }
}

impl<S: Scalar> fmt::Debug for SetValuedMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            MapKind::Table(e) => f.debug_struct("SetValuedMap::Table").field("entries", &e.len()).finish(),
            MapKind::Rule { name, space, .. } => f
                .debug_struct("SetValuedMap::Rule")
                .field("name", name)
                .field("space", &space.as_ref().map(Vec::len))
                .finish(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Point<f64> {
        Point::label(s)
    }

    #[test]
    fn table_lookup_and_domain() {
        let m = SetValuedMap::table(vec![
            (l("a"), FiniteSet::singleton(l("b"))),
            (l("b"), FiniteSet::from_points(vec![l("a"), l("b")]).unwrap()),
        ])
        .unwrap();
        assert_eq!(m.image(&l("b")).unwrap().len(), 2);
        assert!(matches!(m.image(&l("z")), Err(Error::NotInDomain(_))));
        assert_eq!(m.domain().unwrap().len(), 2);
    }

    #[test]
    fn table_images_must_stay_in_space() {
        let r = SetValuedMap::table(vec![(l("a"), FiniteSet::singleton(l("q")))]);
        assert!(matches!(r, Err(Error::DomainEscape(_))));
    }

    #[test]
    fn rule_on_space_detects_escape() {
        let space = vec![Point::dense(vec![1.0]), Point::dense(vec![0.5])];
        let m = SetValuedMap::rule_on("halve", space, |x| Ok(FiniteSet::singleton(x.scaled(&0.5)?)));
        assert_eq!(m.image(&Point::dense(vec![1.0])).unwrap(), FiniteSet::singleton(Point::dense(vec![0.5])));
        assert!(matches!(m.image(&Point::dense(vec![0.5])), Err(Error::DomainEscape(_))));
        assert!(matches!(m.image(&Point::dense(vec![3.0])), Err(Error::NotInDomain(_))));
    }

    #[test]
    fn scaling_rule() {
        let m = SetValuedMap::scaling(0.5);
        assert_eq!(m.image(&Point::dense(vec![2.0, -4.0])).unwrap(), FiniteSet::singleton(Point::dense(vec![1.0, -2.0])));
        assert!(m.domain().is_none());
    }
}
