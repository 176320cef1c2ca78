//! Exact population losses of the lower-bound families by enumeration.
//!
//! The geometry here is rebuilt from explicit coordinates and shares no
//! code with the metric spaces used by the simulator. Squared sphere
//! distances have the form `a + b·w` with `w = 1/z` and `w²` rational, so
//! every radius comparison is decided exactly.

use std::cmp::Ordering;

use itertools::Itertools;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use super::families::FamilyTag;
use crate::error::{Error, Result};
use crate::model::{Hypothesis, Point};

pub type Rational = Ratio<i128>;

/// Largest `n` the oracle enumerates.
pub const ORACLE_MAX_N: usize = 7;

/// Parse `"0.05"`, `"3/100"` or `"2"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::parameter(format!("not a decimal or fraction: {s:?}"));
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i128 = num.trim().parse().map_err(|_| bad())?;
        let den: i128 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
        || frac.len() > 30
    {
        return Err(bad());
    }
    let digits: i128 = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let value = Rational::new(digits, 10i128.pow(frac.len() as u32));
    Ok(if neg { -value } else { value })
}

/// `a + b·w`.
#[derive(Clone, Copy, Debug)]
struct Surd {
    a: Rational,
    b: Rational,
}

impl Surd {
    fn rational(a: Rational) -> Self {
        Surd { a, b: Rational::zero() }
    }

    fn sub(self, o: Surd) -> Surd {
        Surd { a: self.a - o.a, b: self.b - o.b }
    }

    /// Sign of `a + b·w` given `w > 0`, `w² = w2`.
    fn sign(self, w2: Rational) -> Ordering {
        let (a, b) = (self.a, self.b);
        let zero = Rational::zero();
        match (a.cmp(&zero), b.cmp(&zero)) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // opposite signs: compare a² with b² w²
            (sa, _) => match (a * a).cmp(&(b * b * w2)) {
                Ordering::Greater => sa,
                Ordering::Less => sa.reverse(),
                Ordering::Equal => Ordering::Equal,
            },
        }
    }
}

/// A point with explicit coordinates: origin, basis vector, or `ranks · w`.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Coord {
    Zero,
    Unit(usize),
    Ranks(Vec<i128>),
}

struct Sphere {
    /// `alpha²`.
    a2: Rational,
    /// `w² = alpha² / sum_{k<n} k²`.
    w2: Rational,
}

impl Sphere {
    fn new(n: usize) -> Self {
        let alpha = Rational::new(1, 10);
        let s: i128 = (1..n as i128).map(|k| k * k).sum();
        let a2 = alpha * alpha;
        Sphere { a2, w2: a2 / Rational::from_integer(s) }
    }

    fn inner(&self, p: &Coord, q: &Coord) -> Surd {
        match (p, q) {
            (Coord::Zero, _) | (_, Coord::Zero) => Surd::rational(Rational::zero()),
            (Coord::Unit(i), Coord::Unit(j)) => Surd::rational(Rational::from_integer(i128::from(i == j))),
            (Coord::Unit(i), Coord::Ranks(r)) | (Coord::Ranks(r), Coord::Unit(i)) => {
                Surd { a: Rational::zero(), b: Rational::from_integer(r[*i]) }
            }
            (Coord::Ranks(r), Coord::Ranks(s)) => {
                let dot: i128 = r.iter().zip(s).map(|(a, b)| a * b).sum();
                Surd::rational(Rational::from_integer(dot) * self.w2)
            }
        }
    }

    /// `|p - q|²`.
    fn dist2(&self, p: &Coord, q: &Coord) -> Surd {
        let pp = self.inner(p, p);
        let qq = self.inner(q, q);
        let pq = self.inner(p, q);
        Surd { a: pp.a + qq.a - pq.a * 2, b: pp.b + qq.b - pq.b * 2 }
    }

    fn within(&self, p: &Coord, q: &Coord, r2: Surd) -> bool {
        self.dist2(p, q).sub(r2).sign(self.w2) != Ordering::Greater
    }
}

enum Reach {
    Ball(Surd),
    Set(Vec<usize>),
}

struct Atom {
    x: Coord,
    reach: Reach,
    positive: bool,
    weight: Rational,
}

fn sphere_coord(p: &Point, n: usize, with_origin: bool) -> Result<Coord> {
    match p {
        Point::Origin if with_origin => Ok(Coord::Zero),
        Point::Basis(i) if *i < n => Ok(Coord::Unit(*i)),
        Point::Perm(s) if s.len() == n => Ok(Coord::Ranks(s.ranks().iter().map(|&r| i128::from(r)).collect())),
        other => Err(Error::UnknownPoint(other.clone())),
    }
}

fn index_coord(p: &Point, n: usize) -> Result<Coord> {
    match p {
        Point::Index(k) if *k <= n => Ok(Coord::Unit(*k)),
        other => Err(Error::UnknownPoint(other.clone())),
    }
}

/// Star metric on `{0..n}`, squared: 0, 1 (hub to spoke), 4 (spoke to spoke).
fn star_within(p: &Coord, q: &Coord, r2: Surd) -> bool {
    let (Coord::Unit(i), Coord::Unit(j)) = (p, q) else { unreachable!("star points are indices") };
    let d2 = match (i, j) {
        _ if i == j => 0,
        (0, _) | (_, 0) => 1,
        _ => 4,
    };
    Rational::from_integer(d2) <= r2.a
}

/// Exact `L_D(f)` for family `D_target` with parameter `eps`, `n <= 7`.
///
/// The sphere families use `alpha = 1/10`. Targets and spokes are
/// zero-based hypothesis indices: `e_target` for the sphere families,
/// point `target + 1` for the star and explicit-set families.
pub fn brute_force_loss_oracle(
    family: FamilyTag,
    n: usize,
    eps: Rational,
    target: usize,
    f: &Hypothesis,
) -> Result<Rational> {
    if n > ORACLE_MAX_N {
        return Err(Error::SupportTooLarge(n));
    }
    let one = Rational::from_integer(1);
    let mass = match family {
        FamilyTag::SphereOrigin => eps * 3 * n as i128,
        FamilyTag::SphereLabelNoise | FamilyTag::PrefixSets => eps * 6,
        FamilyTag::Star => eps * 3 * (n as i128 - 1),
    };
    if eps.is_negative() || mass > one || target >= n || n == 0 {
        return Err(Error::parameter(format!("{family} with n={n}, eps={eps}, target={target}")));
    }
    let sphere = Sphere::new(n);
    let orders: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let per_perm = Rational::new(1, orders.len() as i128);
    let ranks = |p: &Vec<usize>| p.iter().map(|&r| r as i128).collect::<Vec<_>>();

    let (positives, atoms): (Vec<Coord>, Vec<Atom>) = match family {
        FamilyTag::SphereOrigin => {
            let pos = f.positive().iter().map(|p| sphere_coord(p, n, true)).collect::<Result<_>>()?;
            let r_u2 = Surd::rational(one + sphere.a2);
            let r_l2 = Surd { a: one + sphere.a2, b: Rational::from_integer(-2) };
            let mut atoms = vec![Atom {
                x: Coord::Zero,
                reach: Reach::Ball(Surd::rational(Rational::zero())),
                positive: false,
                weight: one - mass,
            }];
            for p in &orders {
                let r = ranks(p);
                let r2 = if r[target] == 0 { r_u2 } else { r_l2 };
                atoms.push(Atom {
                    x: Coord::Ranks(r),
                    reach: Reach::Ball(r2),
                    positive: true,
                    weight: mass * per_perm,
                });
            }
            (pos, atoms)
        }
        FamilyTag::SphereLabelNoise => {
            let pos = f.positive().iter().map(|p| sphere_coord(p, n, false)).collect::<Result<_>>()?;
            let mut atoms = Vec::new();
            for p in &orders {
                let r = ranks(p);
                let neg_r2 = Surd { a: one + sphere.a2, b: Rational::from_integer(-2 * (r[target] + 1)) };
                atoms.push(Atom {
                    x: Coord::Ranks(r.clone()),
                    reach: Reach::Ball(Surd::rational(Rational::from_integer(4))),
                    positive: true,
                    weight: (one - mass) * per_perm,
                });
                atoms.push(Atom {
                    x: Coord::Ranks(r),
                    reach: Reach::Ball(neg_r2),
                    positive: false,
                    weight: mass * per_perm,
                });
            }
            (pos, atoms)
        }
        FamilyTag::Star => {
            let pos = f.positive().iter().map(|p| index_coord(p, n)).collect::<Result<_>>()?;
            let ball1 = || Reach::Ball(Surd::rational(one));
            let mut atoms = vec![Atom { x: Coord::Unit(0), reach: ball1(), positive: true, weight: one - mass }];
            for j in (1..=n).filter(|&j| j != target + 1) {
                atoms.push(Atom { x: Coord::Unit(j), reach: ball1(), positive: false, weight: eps * 3 });
            }
            (pos, atoms)
        }
        FamilyTag::PrefixSets => {
            let pos = f.positive().iter().map(|p| index_coord(p, n)).collect::<Result<_>>()?;
            let mut atoms = vec![Atom {
                x: Coord::Unit(0),
                reach: Reach::Set((0..=n).collect()),
                positive: true,
                weight: one - mass,
            }];
            for p in &orders {
                let mut set = vec![0];
                set.extend(p.iter().map(|&e| e + 1).take_while(|&e| e != target + 1));
                atoms.push(Atom {
                    x: Coord::Unit(0),
                    reach: Reach::Set(set),
                    positive: false,
                    weight: mass * per_perm,
                });
            }
            (pos, atoms)
        }
    };

    let mut loss = Rational::zero();
    for atom in &atoms {
        let reached = positives.iter().any(|q| {
            *q == atom.x
                || match &atom.reach {
                    Reach::Set(set) => matches!(q, Coord::Unit(k) if set.contains(k)),
                    Reach::Ball(r2) if family == FamilyTag::Star => star_within(&atom.x, q, *r2),
                    Reach::Ball(r2) => sphere.within(&atom.x, q, *r2),
                }
        });
        if reached != atom.positive {
            loss += atom.weight;
        }
    }
    Ok(loss)
}
