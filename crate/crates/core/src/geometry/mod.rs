//! Little cubes with exact rational coordinates, the gravity and skewer
//! filtrations on configurations of them, and the horizontal shrinking
//! deformation into decomposable configurations.
//!
//! All filtration data depends only on the first axis of each cube. Nothing in
//! this module uses floating point.
//!
//! Cube labels in error payloads are 1-based; indices in the Rust API
//! (subsets, partitions) are 0-based.

mod deform;
mod filtration;
mod rational;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use deform::{deform_g, is_decomposable, shrink_h, sigma, DeformParams};
pub use filtration::{
    dis, gravity_degree, is_stable, m_clamp, mol, ol, overlap_d, skewer_degree, u_value, SubsetPartition,
};
pub use rational::{format_rational, parse_rational, rat, ParseRationalError, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("configuration has no cubes")]
    Empty,
    #[error("cube {0} has no axes")]
    ZeroDimensional(usize),
    #[error("cube {cube} has {found} axes, expected {expected}")]
    DimensionMismatch { cube: usize, expected: usize, found: usize },
    #[error("cube {0} has a non-positive radius on axis {1}")]
    NonPositiveRadius(usize, usize),
    #[error("cube {0} leaves [-1,1] on axis {1}")]
    OutOfBounds(usize, usize),
    #[error("cubes {0} and {1} have intersecting interiors")]
    NonDisjoint(usize, usize),
    #[error("empty subset")]
    EmptySubset,
    #[error("cube index {0} out of range")]
    BadIndex(usize),
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("s = {s} out of range 1..={j}")]
    BadS { s: usize, j: usize },
    #[error("{0} outside [0,1]")]
    OutOfRange(String),
    #[error("shrink parameter {0} must lie in [0,1)")]
    BadShrink(String),
    #[error("sigma_{0} does not exist: fewer than {0} distinct first-axis centers")]
    Unreachable(usize),
}

/// One coordinate of a little cube: the affine map `x -> center + radius * x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Axis {
    pub center: Rational,
    pub radius: Rational,
}

impl Axis {
    pub fn new(center: Rational, radius: Rational) -> Self {
        Self { center, radius }
    }

    pub fn lo(&self) -> Rational {
        &self.center - &self.radius
    }

    pub fn hi(&self) -> Rational {
        &self.center + &self.radius
    }
}

/// An axis-parallel little n-cube, one [`Axis`] per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LittleCube {
    pub axes: Vec<Axis>,
}

impl LittleCube {
    pub fn new(axes: Vec<Axis>) -> Self {
        Self { axes }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn first(&self) -> &Axis {
        &self.axes[0]
    }

    fn interiors_meet(&self, other: &LittleCube) -> bool {
        self.axes
            .iter()
            .zip(&other.axes)
            .all(|(a, b)| (&a.center - &b.center).abs() < &a.radius + &b.radius)
    }
}

/// A validated configuration of little cubes with pairwise disjoint interiors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeConfig {
    cubes: Vec<LittleCube>,
}

impl CubeConfig {
    pub fn cubes(&self) -> &[LittleCube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.cubes[0].dim()
    }

    pub fn into_cubes(self) -> Vec<LittleCube> {
        self.cubes
    }

    /// Builds a config whose validity is already guaranteed by construction.
    pub(crate) fn new_unchecked(cubes: Vec<LittleCube>) -> Self {
        debug_assert!(validate_config(cubes.clone()).is_ok());
        Self { cubes }
    }
}

/// Checks dimensions, bounds, and pairwise disjointness of open images.
pub fn validate_config(cubes: Vec<LittleCube>) -> Result<CubeConfig, GeometryError> {
    let n = cubes.first().ok_or(GeometryError::Empty)?.dim();
    let one = Rational::one();
    for (i, cube) in cubes.iter().enumerate() {
        if cube.dim() == 0 {
            return Err(GeometryError::ZeroDimensional(i + 1));
        }
        if cube.dim() != n {
            return Err(GeometryError::DimensionMismatch {
                cube: i + 1,
                expected: n,
                found: cube.dim(),
            });
        }
        for (a, axis) in cube.axes.iter().enumerate() {
            if axis.radius <= Rational::zero() {
                return Err(GeometryError::NonPositiveRadius(i + 1, a + 1));
            }
            if axis.center.abs() + &axis.radius > one {
                return Err(GeometryError::OutOfBounds(i + 1, a + 1));
            }
        }
    }
    for i in 0..cubes.len() {
        for k in i + 1..cubes.len() {
            if cubes[i].interiors_meet(&cubes[k]) {
                return Err(GeometryError::NonDisjoint(i + 1, k + 1));
            }
        }
    }
    Ok(CubeConfig { cubes })
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// A cube from `(center, radius)` pairs given as `(num, den)` tuples.
    /// `((center num, den), (radius num, den))` per axis.
    pub type AxisPair = ((i64, i64), (i64, i64));

    pub fn cube(axes: &[AxisPair]) -> LittleCube {
        LittleCube::new(
            axes.iter()
                .map(|&((cn, cd), (rn, rd))| Axis::new(rat(cn, cd), rat(rn, rd)))
                .collect(),
        )
    }

    /// The three-cube picture: c2 sits over c1 on a shared vertical line and
    /// c3 overlaps c1 only.
    pub fn three_cube_example() -> CubeConfig {
        validate_config(vec![
            cube(&[((0, 1), (4, 5)), ((3, 4), (3, 20))]),
            cube(&[((-1, 5), (2, 5)), ((1, 5), (1, 5))]),
            cube(&[((3, 10), (2, 5)), ((-2, 5), (1, 5))]),
        ])
        .unwrap()
    }
}
