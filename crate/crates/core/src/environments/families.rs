use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::instances::{discrete_instance, sphere_instance, star_instance};
use crate::error::{Error, Result};
use crate::model::{
    strategic_loss, Agent, FiniteSupport, Instance, Label, ManipulationSet, Permutation, PermutationSphere, Point,
    TieBreakPolicy,
};
use crate::protocol::AgentDistribution;

/// Largest `n` whose permutation support is enumerated.
pub const MAX_ENUMERABLE_N: usize = 8;

/// Samples drawn to spot-check realizability of non-enumerable families.
pub const SPOT_CHECK_SAMPLES: usize = 10_000;

/// The lower-bound distribution families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyTag {
    /// Permutation sphere with origin negatives; singletons over the basis.
    #[serde(rename = "appG")]
    SphereOrigin,
    /// Permutation sphere without origin; labels `Rad(1 - 6 eps)`.
    #[serde(rename = "appI")]
    SphereLabelNoise,
    /// Star space.
    #[serde(rename = "appJ")]
    Star,
    /// Explicit prefix manipulation sets over `{0, .., n}`.
    #[serde(rename = "appK")]
    PrefixSets,
}

impl FamilyTag {
    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::SphereOrigin => "appG",
            FamilyTag::SphereLabelNoise => "appI",
            FamilyTag::Star => "appJ",
            FamilyTag::PrefixSets => "appK",
        }
    }

    /// Probability mass that must fit in `[0, 1]`.
    pub fn mass(self, n: usize, eps: f64) -> f64 {
        match self {
            FamilyTag::SphereOrigin => 3.0 * n as f64 * eps,
            FamilyTag::SphereLabelNoise | FamilyTag::PrefixSets => 6.0 * eps,
            FamilyTag::Star => 3.0 * (n as f64 - 1.0) * eps,
        }
    }

    pub fn check(self, n: usize, eps: f64, target: usize) -> Result<()> {
        let min_n = if self == FamilyTag::PrefixSets || self == FamilyTag::Star { 1 } else { 2 };
        if n < min_n {
            return Err(Error::parameter(format!("{} needs n >= {min_n}", self.name())));
        }
        if target >= n {
            return Err(Error::parameter(format!("target {target} outside [0, {n})")));
        }
        let mass = self.mass(n, eps);
        if eps.is_nan() || eps < 0.0 || mass > 1.0 + 1e-12 {
            return Err(Error::parameter(format!(
                "{} needs its noise mass <= 1, got {mass} (n={n}, eps={eps})",
                self.name()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [FamilyTag::SphereOrigin, FamilyTag::SphereLabelNoise, FamilyTag::Star, FamilyTag::PrefixSets]
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Unknown { kind: "family", name: s.to_string() })
    }
}

/// i.i.d. draws from an explicit list of atoms.
#[derive(Clone, Debug)]
pub struct IidFinite {
    name: String,
    atoms: Vec<(Agent, f64)>,
    index: WeightedIndex<f64>,
    target: Option<usize>,
    tie: TieBreakPolicy,
}

impl IidFinite {
    /// Validates weights, agents, and realizability by `target`.
    pub fn new(
        name: impl Into<String>,
        instance: &Instance,
        atoms: Vec<(Agent, f64)>,
        target: Option<usize>,
        tie: TieBreakPolicy,
    ) -> Result<Self> {
        let total: f64 = atoms.iter().map(|(_, p)| p).sum();
        if atoms.iter().any(|(_, p)| p.is_nan() || *p < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::MixtureWeights(total));
        }
        for (a, _) in &atoms {
            a.validate(instance.space.as_ref())?;
        }
        if let Some(h) = target {
            check_target(instance, h, atoms.iter().filter(|(_, p)| *p > 0.0).map(|(a, _)| a), tie)?;
        }
        let index = WeightedIndex::new(atoms.iter().map(|(_, p)| *p)).map_err(|e| Error::parameter(e.to_string()))?;
        Ok(IidFinite { name: name.into(), atoms, index, target, tie })
    }

    pub fn atoms(&self) -> &[(Agent, f64)] {
        &self.atoms
    }
}

fn check_target<'a>(
    instance: &Instance,
    h: usize,
    agents: impl Iterator<Item = &'a Agent>,
    tie: TieBreakPolicy,
) -> Result<()> {
    if h >= instance.class.len() {
        return Err(Error::parameter(format!("target {h} outside class of size {}", instance.class.len())));
    }
    let f = instance.class.get(h);
    for a in agents {
        if strategic_loss(instance.space.as_ref(), f, a, tie)? != 0.0 {
            return Err(Error::Realizability { round: 0, detail: format!("target {h} errs on {a:?}") });
        }
    }
    Ok(())
}

impl AgentDistribution for IidFinite {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn target(&self) -> Option<usize> {
        self.target
    }

    fn tie_policy(&self) -> TieBreakPolicy {
        self.tie
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Agent {
        self.atoms[self.index.sample(rng)].0.clone()
    }
}

impl FiniteSupport for IidFinite {
    fn support(&self) -> Result<Vec<(Agent, f64)>> {
        Ok(self.atoms.clone())
    }
}

/// Star family: `(0, 1, +)` with mass `1 - 3(n-1) eps`, `(j, 1, -)` with
/// mass `3 eps` for every spoke `j` other than the target's.
pub fn star_family(n: usize, eps: f64, target: usize) -> Result<(Instance, IidFinite)> {
    FamilyTag::Star.check(n, eps, target)?;
    let instance = star_instance(n)?;
    let mut atoms = vec![(Agent::ball(Point::Index(0), 1.0, Label::Positive)?, 1.0 - FamilyTag::Star.mass(n, eps))];
    for j in (0..n).filter(|&j| j != target) {
        atoms.push((Agent::ball(Point::Index(j + 1), 1.0, Label::Negative)?, 3.0 * eps));
    }
    let dist = IidFinite::new("appJ", &instance, atoms, Some(target), TieBreakPolicy::FixedLowestIndex)?;
    Ok((instance, dist))
}

/// The permutation-based families, sampled lazily.
#[derive(Clone, Debug)]
pub struct PermutationFamily {
    pub tag: FamilyTag,
    pub n: usize,
    pub eps: f64,
    pub target: usize,
    sphere: Option<PermutationSphere>,
}

impl PermutationFamily {
    /// Families G and I live on the permutation sphere, K on `{0..n}`.
    pub fn new(tag: FamilyTag, n: usize, eps: f64, alpha: f64, target: usize) -> Result<(Instance, Self)> {
        tag.check(n, eps, target)?;
        let (instance, sphere) = match tag {
            FamilyTag::SphereOrigin => {
                let (i, s) = sphere_instance(n, alpha, true)?;
                (i, Some(s))
            }
            FamilyTag::SphereLabelNoise => {
                let (i, s) = sphere_instance(n, alpha, false)?;
                (i, Some(s))
            }
            FamilyTag::PrefixSets => (discrete_instance(n)?, None),
            FamilyTag::Star => return Err(Error::parameter("appJ is not a permutation family")),
        };
        let fam = PermutationFamily { tag, n, eps, target, sphere };
        fam.validate(&instance)?;
        Ok((instance, fam))
    }

    pub fn sphere(&self) -> Option<&PermutationSphere> {
        self.sphere.as_ref()
    }

    fn validate(&self, instance: &Instance) -> Result<()> {
        let tie = self.tie_policy();
        match self.support() {
            Ok(atoms) => {
                check_target(instance, self.target, atoms.iter().filter(|(_, p)| *p > 0.0).map(|(a, _)| a), tie)
            }
            Err(Error::NotEnumerable) => {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                let sample: Vec<Agent> = (0..SPOT_CHECK_SAMPLES).map(|_| self.sample(&mut rng)).collect();
                check_target(instance, self.target, sample.iter(), tie)
            }
            Err(e) => Err(e),
        }
    }

    /// `sqrt(1 + alpha² - 2 (x_i + 1/z))`: reaches `e_j` iff `x_j > x_i`.
    pub fn negative_radius_i(&self, x: &Permutation) -> f64 {
        let s = self.sphere.as_ref().expect("sphere family");
        let a2 = s.alpha * s.alpha;
        (1.0 + a2 - 2.0 * (s.coord(x, self.target) + 1.0 / s.z)).sqrt()
    }

    fn g_agent(&self, x: Permutation) -> Agent {
        let s = self.sphere.as_ref().expect("sphere family");
        let r = if x.ranks()[self.target] == 0 { s.r_upper() } else { s.r_lower() };
        Agent { x: Point::Perm(x), u: ManipulationSet::ball(r), y: Label::Positive }
    }

    fn i_agent(&self, x: Permutation, y: Label) -> Agent {
        let r = match y {
            Label::Positive => 2.0,
            Label::Negative => self.negative_radius_i(&x),
        };
        Agent { x: Point::Perm(x), u: ManipulationSet::ball(r), y }
    }

    /// `(0, {0} ∪ s, -)` with `s` the elements before the target in `order`.
    fn k_negative(&self, order: &[usize]) -> Agent {
        let goal = self.target + 1;
        let before = order.iter().take_while(|&&e| e != goal).map(|&e| Point::Index(e));
        Agent {
            x: Point::Index(0),
            u: ManipulationSet::explicit(std::iter::once(Point::Index(0)).chain(before)),
            y: Label::Negative,
        }
    }

    fn k_positive(&self) -> Agent {
        Agent { x: Point::Index(0), u: ManipulationSet::explicit((0..=self.n).map(Point::Index)), y: Label::Positive }
    }
}

impl AgentDistribution for PermutationFamily {
    fn name(&self) -> String {
        self.tag.name().to_string()
    }

    fn target(&self) -> Option<usize> {
        Some(self.target)
    }

    fn tie_policy(&self) -> TieBreakPolicy {
        match self.tag {
            FamilyTag::PrefixSets => TieBreakPolicy::UniformRandom,
            _ => TieBreakPolicy::FixedLowestIndex,
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Agent {
        let u: f64 = rng.gen();
        match self.tag {
            FamilyTag::SphereOrigin => {
                if u < 1.0 - self.tag.mass(self.n, self.eps) {
                    Agent { x: Point::Origin, u: ManipulationSet::ball(0.0), y: Label::Negative }
                } else {
                    self.g_agent(Permutation::random(self.n, rng))
                }
            }
            FamilyTag::SphereLabelNoise => {
                let y = Label::from_bool(u < 1.0 - 6.0 * self.eps);
                self.i_agent(Permutation::random(self.n, rng), y)
            }
            FamilyTag::PrefixSets => {
                if u < 1.0 - 6.0 * self.eps {
                    self.k_positive()
                } else {
                    let mut order: Vec<usize> = (1..=self.n).collect();
                    order.shuffle(rng);
                    self.k_negative(&order)
                }
            }
            FamilyTag::Star => unreachable!("rejected at construction"),
        }
    }
}

impl FiniteSupport for PermutationFamily {
    /// All atoms; `n!` of them, so only for `n <= 8`.
    fn support(&self) -> Result<Vec<(Agent, f64)>> {
        if self.n > MAX_ENUMERABLE_N {
            return Err(Error::NotEnumerable);
        }
        let perms: Vec<Vec<usize>> = (0..self.n).permutations(self.n).collect();
        let per = 1.0 / perms.len() as f64;
        let mut atoms = Vec::with_capacity(2 * perms.len() + 1);
        match self.tag {
            FamilyTag::SphereOrigin => {
                let mass = self.tag.mass(self.n, self.eps);
                atoms.push((Agent { x: Point::Origin, u: ManipulationSet::ball(0.0), y: Label::Negative }, 1.0 - mass));
                for p in perms {
                    atoms.push((self.g_agent(ranks(p)), mass * per));
                }
            }
            FamilyTag::SphereLabelNoise => {
                for p in perms {
                    let x = ranks(p);
                    atoms.push((self.i_agent(x.clone(), Label::Positive), (1.0 - 6.0 * self.eps) * per));
                    atoms.push((self.i_agent(x, Label::Negative), 6.0 * self.eps * per));
                }
            }
            FamilyTag::PrefixSets => {
                atoms.push((self.k_positive(), 1.0 - 6.0 * self.eps));
                for p in perms {
                    let order: Vec<usize> = p.into_iter().map(|e| e + 1).collect();
                    atoms.push((self.k_negative(&order), 6.0 * self.eps * per));
                }
            }
            FamilyTag::Star => unreachable!("rejected at construction"),
        }
        Ok(atoms)
    }
}

fn ranks(p: Vec<usize>) -> Permutation {
    Permutation::new(p.into_iter().map(|r| r as u32).collect()).expect("a permutation")
}
