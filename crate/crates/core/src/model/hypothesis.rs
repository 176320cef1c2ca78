use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::space::{MetricOracle, Point};
use crate::error::{Error, Result};

/// Binary label, serialized as `+1` / `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Label::Positive => 1,
            Label::Negative => -1,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Positive => "+1",
            Label::Negative => "-1",
        })
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i8::deserialize(d)? {
            1 => Ok(Label::Positive),
            -1 => Ok(Label::Negative),
            other => Err(serde::de::Error::custom(format!("label must be +1 or -1, got {other}"))),
        }
    }
}

/// Anything with a finite positive region.
pub trait Classifier {
    fn is_positive(&self, x: &Point) -> bool;

    /// The positive region. May repeat points.
    fn positive_points(&self) -> impl Iterator<Item = &Point>;

    fn has_positive(&self) -> bool {
        self.positive_points().next().is_some()
    }
}

/// A binary classifier given by its (finite) positive region.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hypothesis {
    positive: Vec<Point>,
}

impl Hypothesis {
    pub fn new(mut positive: Vec<Point>) -> Self {
        positive.sort();
        positive.dedup();
        Hypothesis { positive }
    }

    pub fn singleton(p: Point) -> Self {
        Hypothesis { positive: vec![p] }
    }

    /// The all-negative classifier.
    pub fn empty() -> Self {
        Hypothesis { positive: Vec::new() }
    }

    pub fn positive(&self) -> &[Point] {
        &self.positive
    }
}

impl Classifier for Hypothesis {
    fn is_positive(&self, x: &Point) -> bool {
        self.positive.binary_search(x).is_ok()
    }

    fn positive_points(&self) -> impl Iterator<Item = &Point> {
        self.positive.iter()
    }
}

/// Ordered list of distinct hypotheses over one space.
#[derive(Clone, Debug)]
pub struct HypothesisClass {
    members: Vec<Hypothesis>,
}

impl HypothesisClass {
    pub fn new(space: &dyn MetricOracle, members: Vec<Hypothesis>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidClass("empty class".into()));
        }
        let mut sorted: Vec<&Hypothesis> = members.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidClass("duplicate positive sets".into()));
        }
        for h in &members {
            for p in h.positive() {
                space.check(p)?;
            }
        }
        Ok(HypothesisClass { members })
    }

    /// One singleton per point, in the given order.
    pub fn singletons(space: &dyn MetricOracle, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        Self::new(space, points.into_iter().map(Hypothesis::singleton).collect())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, i: usize) -> &Hypothesis {
        &self.members[i]
    }

    pub fn members(&self) -> &[Hypothesis] {
        &self.members
    }

    /// Evaluate a union of members against this class.
    pub fn view<'a>(&'a self, f: &'a UnionPredictor) -> UnionView<'a> {
        UnionView { class: self, parts: &f.parts }
    }

    /// Materialize a union as a standalone hypothesis.
    pub fn materialize(&self, f: &UnionPredictor) -> Hypothesis {
        Hypothesis::new(self.view(f).positive_points().cloned().collect())
    }
}

/// Union `h_1 ∨ .. ∨ h_k` of class members, by index. Duplicates are
/// allowed. The empty union is the all-negative predictor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnionPredictor {
    parts: Vec<usize>,
}

impl UnionPredictor {
    pub fn new(parts: Vec<usize>) -> Self {
        UnionPredictor { parts }
    }

    pub fn single(i: usize) -> Self {
        UnionPredictor { parts: vec![i] }
    }

    pub fn all_negative() -> Self {
        UnionPredictor { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn is_all_negative(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sorted, de-duplicated part indices; equal for unions with equal
    /// positive regions built from the same members.
    pub fn canonical(&self) -> Vec<usize> {
        let mut v = self.parts.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn same_region(&self, other: &UnionPredictor) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn check(&self, class: &HypothesisClass) -> Result<()> {
        match self.parts.iter().find(|&&i| i >= class.len()) {
            Some(i) => Err(Error::contract(format!("part {i} outside class of size {}", class.len()))),
            None => Ok(()),
        }
    }
}

/// A union evaluated against its class.
#[derive(Clone, Copy, Debug)]
pub struct UnionView<'a> {
    class: &'a HypothesisClass,
    parts: &'a [usize],
}

impl Classifier for UnionView<'_> {
    fn is_positive(&self, x: &Point) -> bool {
        self.parts.iter().any(|&i| self.class.get(i).is_positive(x))
    }

    fn positive_points(&self) -> impl Iterator<Item = &Point> {
        self.parts.iter().flat_map(|&i| self.class.get(i).positive().iter())
    }
}

/// Finite distribution over unions: a randomized predictor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mixture {
    atoms: Vec<(UnionPredictor, f64)>,
}

impl Mixture {
    /// Weights must be non-negative and sum to 1 within 1e-12.
    pub fn new(atoms: Vec<(UnionPredictor, f64)>) -> Result<Self> {
        let total: f64 = atoms.iter().map(|(_, w)| *w).sum();
        if atoms.iter().any(|(_, w)| w.is_nan() || *w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::MixtureWeights(total));
        }
        Ok(Mixture { atoms })
    }

    pub fn point_mass(f: UnionPredictor) -> Self {
        Mixture { atoms: vec![(f, 1.0)] }
    }

    /// Uniform over the given predictors (repeats add weight).
    pub fn uniform(fs: impl IntoIterator<Item = UnionPredictor>) -> Result<Self> {
        let fs: Vec<_> = fs.into_iter().collect();
        if fs.is_empty() {
            return Err(Error::MixtureWeights(0.0));
        }
        let w = 1.0 / fs.len() as f64;
        Ok(Mixture { atoms: fs.into_iter().map(|f| (f, w)).collect() })
    }

    /// Empirical distribution of samples, merged by positive region.
    pub fn empirical(samples: Vec<UnionPredictor>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::MixtureWeights(0.0));
        }
        let w = 1.0 / samples.len() as f64;
        let mut merged: std::collections::BTreeMap<Vec<usize>, f64> = Default::default();
        for f in samples {
            *merged.entry(f.canonical()).or_default() += w;
        }
        let total: f64 = merged.values().sum();
        Ok(Mixture { atoms: merged.into_iter().map(|(p, c)| (UnionPredictor::new(p), c / total)).collect() })
    }

    pub fn atoms(&self) -> &[(UnionPredictor, f64)] {
        &self.atoms
    }

    /// The single predictor of a point mass.
    pub fn as_point_mass(&self) -> Option<&UnionPredictor> {
        let mut support = self.atoms.iter().filter(|(_, w)| *w > 0.0);
        match (support.next(), support.next()) {
            (Some((f, _)), None) => Some(f),
            (Some((f, _)), Some(_)) => {
                let first = f.canonical();
                self.atoms.iter().filter(|(_, w)| *w > 0.0).all(|(g, _)| g.canonical() == first).then_some(f)
            }
            _ => None,
        }
    }

    /// Probability of the event `pred(f)`.
    pub fn prob(&self, mut pred: impl FnMut(&UnionPredictor) -> bool) -> f64 {
        self.atoms.iter().filter(|(f, _)| pred(f)).map(|(_, w)| *w).sum()
    }
}

/// Shared handle to a space and its hypothesis class.
#[derive(Clone, Debug)]
pub struct Instance {
    pub space: Arc<dyn MetricOracle>,
    pub class: Arc<HypothesisClass>,
}

impl Instance {
    pub fn new(space: Arc<dyn MetricOracle>, class: HypothesisClass) -> Self {
        Instance { space, class: Arc::new(class) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::StarSpace;

    #[test]
    fn label_serializes_as_signed_unit() {
        assert_eq!(serde_json::to_string(&Label::Negative).unwrap(), "-1");
        let l: Label = serde_json::from_str("1").unwrap();
        assert_eq!(l, Label::Positive);
        assert!(serde_json::from_str::<Label>("0").is_err());
    }

    #[test]
    fn class_rejects_duplicates_and_foreign_points() {
        let star = StarSpace::new(3).unwrap();
        let dup = vec![Hypothesis::singleton(Point::Index(1)), Hypothesis::singleton(Point::Index(1))];
        assert!(HypothesisClass::new(&star, dup).is_err());
        let foreign = vec![Hypothesis::singleton(Point::Origin)];
        assert!(matches!(HypothesisClass::new(&star, foreign), Err(Error::UnknownPoint(_))));
    }

    #[test]
    fn mixture_weight_check() {
        let f = UnionPredictor::single(0);
        assert!(Mixture::new(vec![(f.clone(), 0.5), (f.clone(), 0.4)]).is_err());
        assert!(Mixture::new(vec![(f.clone(), 0.5), (f, 0.5)]).is_ok());
    }

    #[test]
    fn point_mass_detection_merges_equal_regions() {
        let m = Mixture::new(vec![(UnionPredictor::new(vec![1, 1]), 0.5), (UnionPredictor::single(1), 0.5)]).unwrap();
        assert!(m.as_point_mass().is_some());
        let m = Mixture::uniform([UnionPredictor::single(0), UnionPredictor::single(1)]).unwrap();
        assert!(m.as_point_mass().is_none());
    }
}
