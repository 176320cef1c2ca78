use std::sync::Arc;

use crate::error::Result;
use crate::model::{HypothesisClass, Instance, MatrixSpace, PermutationSphere, Point, ScaledBasisSpace, StarSpace};

/// Scale of the inner points `s·e_i` of the scaled-basis space.
pub const INNER_SCALE: f64 = 0.9;

/// Default sphere norm `alpha`.
pub const DEFAULT_ALPHA: f64 = 0.1;

/// Star space with singletons over the spokes; hypothesis `j` is spoke `j + 1`.
pub fn star_instance(n: usize) -> Result<Instance> {
    let space = StarSpace::new(n)?;
    let class = HypothesisClass::singletons(&space, (1..=n).map(Point::Index))?;
    Ok(Instance::new(Arc::new(space), class))
}

/// `{0, e_i, 0.9 e_i}` with singletons over the basis; hypothesis `j` is `e_j`.
pub fn scaled_basis_instance(n: usize) -> Result<Instance> {
    let space = ScaledBasisSpace::new(n, INNER_SCALE)?;
    let class = HypothesisClass::singletons(&space, (0..n).map(Point::Basis))?;
    Ok(Instance::new(Arc::new(space), class))
}

/// Permutation sphere with singletons over the basis.
pub fn sphere_instance(n: usize, alpha: f64, with_origin: bool) -> Result<(Instance, PermutationSphere)> {
    let space = PermutationSphere::new(n, alpha, with_origin)?;
    let class = HypothesisClass::singletons(&space, (0..n).map(Point::Basis))?;
    Ok((Instance::new(Arc::new(space), class), space))
}

/// `{0, .., n}` under the discrete metric with singletons over `1..=n`.
pub fn discrete_instance(n: usize) -> Result<Instance> {
    let space = MatrixSpace::discrete(n + 1);
    let class = HypothesisClass::singletons(&space, (1..=n).map(Point::Index))?;
    Ok(Instance::new(Arc::new(space), class))
}
