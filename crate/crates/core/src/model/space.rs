//! Finite feature spaces and their metrics.
//!
//! Small spaces are matrix-backed. The permutation spheres used by the
//! lower-bound families have `n!` points and are formula-backed: a point is
//! identified by the permutation that lays out its coordinates and distances
//! are computed from that identity on demand.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used for every distance comparison.
pub const TOL: f64 = 1e-9;

/// A scale factor carried by [`Point::ScaledBasis`]; totally ordered by bits.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Factor(pub f64);

impl PartialEq for Factor {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}
impl Eq for Factor {}
impl Hash for Factor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state)
    }
}
impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Factor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Coordinate layout of a point on a permutation sphere: coordinate `k`
/// equals `ranks[k] / z`, where `ranks` is a permutation of `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Arc<[u32]>);

impl Permutation {
    pub fn new(ranks: Vec<u32>) -> Result<Self> {
        let n = ranks.len();
        let mut seen = vec![false; n];
        for &r in &ranks {
            let r = r as usize;
            if r >= n || seen[r] {
                return Err(Error::parameter(format!("not a permutation: {ranks:?}")));
            }
            seen[r] = true;
        }
        Ok(Permutation(ranks.into()))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect::<Vec<_>>().into())
    }

    /// Uniform random permutation (Fisher–Yates).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut ranks: Vec<u32> = (0..n as u32).collect();
        ranks.shuffle(rng);
        Permutation(ranks.into())
    }

    pub fn ranks(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coordinate that holds rank 0.
    pub fn zero_position(&self) -> usize {
        self.0.iter().position(|&r| r == 0).unwrap_or(0)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0[..])
    }
}

/// Identity of a point. Which variants are meaningful depends on the space.
///
/// The derived order is the fixed total order used by
/// [`TieBreakPolicy::FixedLowestIndex`](crate::model::TieBreakPolicy).
/// Basis indices are zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Point {
    Index(usize),
    Origin,
    Basis(usize),
    ScaledBasis(usize, Factor),
    Perm(Permutation),
}

/// A point universe with a distance function.
pub trait MetricOracle: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    fn contains(&self, p: &Point) -> bool;

    /// Distance between two points of the universe.
    fn dist(&self, a: &Point, b: &Point) -> Result<f64>;

    /// All points, when the universe is small enough to list.
    fn points(&self) -> Option<Vec<Point>>;

    /// A uniformly random point of the universe.
    fn sample_point(&self, rng: &mut dyn RngCore) -> Point;

    /// Distinguished points worth over-sampling when checking axioms on a
    /// universe too large to list.
    fn landmarks(&self) -> Vec<Point> {
        Vec::new()
    }

    fn check(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::UnknownPoint(p.clone()))
        }
    }
}

/// Explicit symmetric distance matrix over `Index(0..len)`.
#[derive(Clone, Debug)]
pub struct MatrixSpace {
    len: usize,
    d: Vec<f64>,
    label: String,
}

impl MatrixSpace {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let len = rows.len();
        let mut d = Vec::with_capacity(len * len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != len {
                return Err(Error::InvalidMetric(format!("row {i} has {} entries", row.len())));
            }
            d.extend_from_slice(row);
        }
        for i in 0..len {
            if d[i * len + i] != 0.0 {
                return Err(Error::InvalidMetric(format!("d({i},{i}) != 0")));
            }
            for j in 0..len {
                let v = d[i * len + j];
                if v.is_nan() || v < 0.0 {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) = {v}")));
                }
                if (v - d[j * len + i]).abs() > TOL {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) is not symmetric")));
                }
            }
        }
        Ok(MatrixSpace { len, d, label: format!("matrix({len})") })
    }

    /// Discrete metric (distance 1 between distinct points) over `Index(0..len)`.
    pub fn discrete(len: usize) -> Self {
        let mut d = vec![1.0; len * len];
        for i in 0..len {
            d[i * len + i] = 0.0;
        }
        MatrixSpace { len, d, label: format!("discrete({len})") }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn index(&self, p: &Point) -> Result<usize> {
        match p {
            Point::Index(i) if *i < self.len => Ok(*i),
            other => Err(Error::UnknownPoint(other.clone())),
        }
    }
}

impl MetricOracle for MatrixSpace {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn contains(&self, p: &Point) -> bool {
        matches!(p, Point::Index(i) if *i < self.len)
    }

    fn dist(&self, a: &Point, b: &Point) -> Result<f64> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        Ok(self.d[i * self.len + j])
    }

    fn points(&self) -> Option<Vec<Point>> {
        Some((0..self.len).map(Point::Index).collect())
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Point {
        Point::Index(rng.gen_range(0..self.len))
    }
}

/// Hub `Index(0)` at distance 1 from spokes `Index(1..=n)`; spokes are
/// pairwise at distance 2.
#[derive(Clone, Copy, Debug)]
pub struct StarSpace {
    pub n: usize,
}

impl StarSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::parameter("star space needs at least one spoke"));
        }
        Ok(StarSpace { n })
    }

    fn index(&self, p: &Point) -> Result<usize> {
        match p {
            Point::Index(i) if *i <= self.n => Ok(*i),
            other => Err(Error::UnknownPoint(other.clone())),
        }
    }
}

impl MetricOracle for StarSpace {
    fn name(&self) -> String {
        format!("star({})", self.n)
    }

    fn contains(&self, p: &Point) -> bool {
        matches!(p, Point::Index(i) if *i <= self.n)
    }

    fn dist(&self, a: &Point, b: &Point) -> Result<f64> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        Ok(if i == j {
            0.0
        } else if i == 0 || j == 0 {
            1.0
        } else {
            2.0
        })
    }

    fn points(&self) -> Option<Vec<Point>> {
        Some((0..=self.n).map(Point::Index).collect())
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Point {
        Point::Index(rng.gen_range(0..=self.n))
    }
}

/// `{0, e_1..e_n, s·e_1..s·e_n}` in `R^n` with Euclidean distance
/// (`s` defaults to 0.9).
#[derive(Clone, Copy, Debug)]
pub struct ScaledBasisSpace {
    pub n: usize,
    pub scale: f64,
}

impl ScaledBasisSpace {
    pub fn new(n: usize, scale: f64) -> Result<Self> {
        if n == 0 || !(scale > 0.0 && scale < 1.0) {
            return Err(Error::parameter(format!("scaled basis space n={n} scale={scale}")));
        }
        Ok(ScaledBasisSpace { n, scale })
    }

    /// (axis, length) along a single axis; the origin has no axis.
    fn axis(&self, p: &Point) -> Result<Option<(usize, f64)>> {
        match p {
            Point::Origin => Ok(None),
            Point::Basis(i) if *i < self.n => Ok(Some((*i, 1.0))),
            Point::ScaledBasis(i, f) if *i < self.n && f.0 == self.scale => Ok(Some((*i, f.0))),
            other => Err(Error::UnknownPoint(other.clone())),
        }
    }

    pub fn scaled(&self, i: usize) -> Point {
        Point::ScaledBasis(i, Factor(self.scale))
    }
}

impl MetricOracle for ScaledBasisSpace {
    fn name(&self) -> String {
        format!("scaled-basis({}, {})", self.n, self.scale)
    }

    fn contains(&self, p: &Point) -> bool {
        self.axis(p).is_ok()
    }

    fn dist(&self, a: &Point, b: &Point) -> Result<f64> {
        Ok(match (self.axis(a)?, self.axis(b)?) {
            (None, None) => 0.0,
            (None, Some((_, s))) | (Some((_, s)), None) => s,
            (Some((i, s)), Some((j, t))) if i == j => (s - t).abs(),
            (Some((_, s)), Some((_, t))) => (s * s + t * t).sqrt(),
        })
    }

    fn points(&self) -> Option<Vec<Point>> {
        let mut pts = vec![Point::Origin];
        pts.extend((0..self.n).map(Point::Basis));
        pts.extend((0..self.n).map(|i| self.scaled(i)));
        Some(pts)
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Point {
        let k = rng.gen_range(0..2 * self.n + 1);
        match k {
            0 => Point::Origin,
            k if k <= self.n => Point::Basis(k - 1),
            k => self.scaled(k - self.n - 1),
        }
    }
}

/// Basis vectors `e_1..e_n` plus the sphere `X_0` of points whose
/// coordinates permute `{0, 1/z, .., (n-1)/z}`, optionally with the origin.
/// `z = sqrt(1² + .. + (n-1)²) / alpha`, so every point of `X_0` has norm
/// `alpha`. `X_0` is never materialized.
#[derive(Clone, Copy, Debug)]
pub struct PermutationSphere {
    pub n: usize,
    pub alpha: f64,
    pub z: f64,
    pub with_origin: bool,
}

impl PermutationSphere {
    pub fn new(n: usize, alpha: f64, with_origin: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::parameter("permutation sphere needs n >= 2"));
        }
        if !(alpha > 0.0 && alpha < 0.25) {
            return Err(Error::parameter(format!("alpha = {alpha} outside (0, 0.25)")));
        }
        let sq: f64 = (1..n).map(|k| (k * k) as f64).sum();
        Ok(PermutationSphere { n, alpha, z: sq.sqrt() / alpha, with_origin })
    }

    /// Coordinate `i` of a sphere point.
    pub fn coord(&self, p: &Permutation, i: usize) -> f64 {
        p.ranks()[i] as f64 / self.z
    }

    /// `d(x, e_i) = sqrt(1 + alpha² - 2 x_i)`.
    pub fn dist_to_basis(&self, p: &Permutation, i: usize) -> f64 {
        (1.0 + self.alpha * self.alpha - 2.0 * self.coord(p, i)).sqrt()
    }

    /// Radius that reaches `e_i` exactly when `x_i = 0`.
    pub fn r_upper(&self) -> f64 {
        (1.0 + self.alpha * self.alpha).sqrt()
    }

    /// Radius that reaches `e_i` exactly when `x_i >= 1/z`.
    pub fn r_lower(&self) -> f64 {
        (1.0 + self.alpha * self.alpha - 2.0 / self.z).sqrt()
    }

    fn valid(&self, p: &Point) -> bool {
        match p {
            Point::Origin => self.with_origin,
            Point::Basis(i) => *i < self.n,
            Point::Perm(s) => s.len() == self.n,
            _ => false,
        }
    }
}

impl MetricOracle for PermutationSphere {
    fn name(&self) -> String {
        format!("perm-sphere({}, {})", self.n, self.alpha)
    }

    fn contains(&self, p: &Point) -> bool {
        self.valid(p)
    }

    fn dist(&self, a: &Point, b: &Point) -> Result<f64> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (Point::Origin, Point::Origin) => 0.0,
            (Point::Origin, Point::Basis(_)) | (Point::Basis(_), Point::Origin) => 1.0,
            (Point::Origin, Point::Perm(_)) | (Point::Perm(_), Point::Origin) => self.alpha,
            (Point::Basis(i), Point::Basis(j)) => {
                if i == j {
                    0.0
                } else {
                    std::f64::consts::SQRT_2
                }
            }
            (Point::Perm(p), Point::Basis(i)) | (Point::Basis(i), Point::Perm(p)) => self.dist_to_basis(p, *i),
            (Point::Perm(p), Point::Perm(q)) => {
                let s: f64 = p
                    .ranks()
                    .iter()
                    .zip(q.ranks())
                    .map(|(&a, &b)| {
                        let d = a as f64 - b as f64;
                        d * d
                    })
                    .sum();
                s.sqrt() / self.z
            }
            _ => unreachable!("validated above"),
        })
    }

    fn points(&self) -> Option<Vec<Point>> {
        None
    }

    fn landmarks(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = (0..self.n).map(Point::Basis).collect();
        if self.with_origin {
            pts.push(Point::Origin);
        }
        pts
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Point {
        let perms: f64 = (1..=self.n).map(|k| k as f64).product();
        let extra = self.n as f64 + if self.with_origin { 1.0 } else { 0.0 };
        let u: f64 = rng.gen::<f64>() * (perms + extra);
        if u < perms {
            Point::Perm(Permutation::random(self.n, rng))
        } else {
            let k = rng.gen_range(0..extra as usize);
            if k < self.n {
                Point::Basis(k)
            } else {
                Point::Origin
            }
        }
    }
}

/// Check the metric axioms: exhaustively when the universe lists at most 200
/// points, otherwise on `samples` random triples.
pub fn check_metric_axioms(space: &dyn MetricOracle, rng: &mut dyn RngCore, samples: usize) -> Result<()> {
    let triple = |a: &Point, b: &Point, c: &Point| -> Result<()> {
        let ab = space.dist(a, b)?;
        let ba = space.dist(b, a)?;
        let bc = space.dist(b, c)?;
        let ac = space.dist(a, c)?;
        if space.dist(a, a)?.abs() > TOL || ab < 0.0 {
            return Err(Error::InvalidMetric(format!("identity fails at {a:?}")));
        }
        if (ab - ba).abs() > TOL {
            return Err(Error::InvalidMetric(format!("asymmetric at {a:?}, {b:?}")));
        }
        if ac > ab + bc + TOL {
            return Err(Error::InvalidMetric(format!("triangle fails at {a:?}, {b:?}, {c:?}")));
        }
        Ok(())
    };
    match space.points() {
        Some(pts) if pts.len() <= 200 => {
            for a in &pts {
                for b in &pts {
                    for c in &pts {
                        triple(a, b, c)?;
                    }
                }
            }
        }
        _ => {
            let landmarks = space.landmarks();
            let draw = |rng: &mut dyn RngCore| {
                if !landmarks.is_empty() && rng.gen_bool(0.3) {
                    landmarks[rng.gen_range(0..landmarks.len())].clone()
                } else {
                    space.sample_point(rng)
                }
            };
            for _ in 0..samples {
                let a = draw(rng);
                let b = draw(rng);
                let c = draw(rng);
                triple(&a, &b, &c)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn star_distances() {
        let s = StarSpace::new(4).unwrap();
        assert_eq!(s.dist(&Point::Index(0), &Point::Index(3)).unwrap(), 1.0);
        assert_eq!(s.dist(&Point::Index(2), &Point::Index(3)).unwrap(), 2.0);
        assert!(s.dist(&Point::Index(5), &Point::Index(0)).is_err());
    }

    #[test]
    fn scaled_basis_distances() {
        let s = ScaledBasisSpace::new(3, 0.9).unwrap();
        let d = |a: &Point, b: &Point| s.dist(a, b).unwrap();
        assert_eq!(d(&Point::Origin, &Point::Basis(1)), 1.0);
        assert!((d(&Point::Origin, &s.scaled(1)) - 0.9).abs() < 1e-12);
        assert!((d(&s.scaled(1), &Point::Basis(1)) - 0.1).abs() < 1e-12);
        assert!((d(&s.scaled(0), &Point::Basis(1)) - 1.81f64.sqrt()).abs() < 1e-12);
        assert!(!s.contains(&Point::ScaledBasis(0, Factor(0.5))));
    }

    #[test]
    fn sphere_distance_matches_coordinates() {
        let s = PermutationSphere::new(3, 0.1, true).unwrap();
        // coordinate 0 carries rank 0
        let p = Permutation::new(vec![0, 2, 1]).unwrap();
        let d = s.dist(&Point::Perm(p.clone()), &Point::Basis(0)).unwrap();
        assert!((d - 1.01f64.sqrt()).abs() < 1e-12);
        let norm: f64 = (0..3).map(|i| s.coord(&p, i).powi(2)).sum::<f64>().sqrt();
        assert!((norm - 0.1).abs() < 1e-12);
        assert!((s.dist(&Point::Perm(p), &Point::Origin).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn sphere_radii_ordering() {
        let s = PermutationSphere::new(6, 0.1, true).unwrap();
        assert!(s.r_lower() < s.r_upper());
        assert!(s.r_lower() > 2.0 * s.alpha);
    }

    #[test]
    fn metric_axioms_hold_on_every_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        check_metric_axioms(&StarSpace::new(6).unwrap(), &mut rng, 0).unwrap();
        check_metric_axioms(&ScaledBasisSpace::new(5, 0.9).unwrap(), &mut rng, 0).unwrap();
        check_metric_axioms(&MatrixSpace::discrete(7), &mut rng, 0).unwrap();
        for n in [3, 5, 12] {
            let s = PermutationSphere::new(n, 0.1, true).unwrap();
            check_metric_axioms(&s, &mut rng, 100_000).unwrap();
        }
    }

    #[test]
    fn matrix_rejects_asymmetry() {
        let err = MatrixSpace::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::InvalidMetric(_)));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert_eq!(Permutation::new(vec![2, 0, 1]).unwrap().zero_position(), 1);
    }
}
