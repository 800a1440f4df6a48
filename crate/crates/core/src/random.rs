//! Seeded generators for property tests and the `gen` subcommand.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coalgebra::{binomial_coalgebra, coalgebra_from_table, tensor_algebra, Coalgebra, CoproductTable};
use crate::geometry::{rat, validate_config, Axis, CubeConfig, LittleCube};
use crate::graded::{AlgebraError, BasisElement, GradedSpace};
use crate::linalg::{FieldError, Fp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RandomError {
    #[error("no disjoint placement found after {0} attempts")]
    GiveUp(usize),
    #[error("need n >= 1 and j >= 1")]
    BadShape,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Coordinates are snapped to this grid so equal centers occur often.
const GRID: i64 = 20;
const MAX_ATTEMPTS: usize = 10_000;
/// Failed draws for one cube before starting the placement over.
const RESTART_AFTER: usize = 200;

/// Largest radius on the grid: `3/10`, lowered for crowded low-dimensional
/// boxes so that `j` cubes of that size still fit.
fn max_radius(n: usize, j: usize) -> i64 {
    let fit = (GRID as f64 * 0.8 * (j as f64).powf(-1.0 / n as f64)).floor() as i64;
    fit.clamp(1, GRID * 3 / 10)
}

fn random_axis(rng: &mut ChaCha8Rng, max_r: i64) -> Axis {
    let r = rng.gen_range(1..=max_r);
    let c = rng.gen_range(-(GRID - r)..=(GRID - r));
    Axis::new(rat(c, GRID), rat(r, GRID))
}

fn disjoint(a: &LittleCube, b: &LittleCube) -> bool {
    a.axes.iter().zip(&b.axes).any(|(x, y)| {
        let gap = &x.center - &y.center;
        let gap = if gap < rat(0, 1) { -gap } else { gap };
        gap >= &x.radius + &y.radius
    })
}

/// `j` disjoint little `n`-cubes with coordinates on a `1/20` grid, placed
/// one at a time by rejection sampling, restarting when a cube finds no room.
pub fn gen_random_config(n: usize, j: usize, seed: u64) -> Result<CubeConfig, RandomError> {
    if n == 0 || j == 0 {
        return Err(RandomError::BadShape);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_r = max_radius(n, j);
    let mut cubes: Vec<LittleCube> = Vec::with_capacity(j);
    let mut misses = 0;
    for _ in 0..MAX_ATTEMPTS {
        if cubes.len() == j {
            break;
        }
        let cube = LittleCube::new((0..n).map(|_| random_axis(&mut rng, max_r)).collect());
        if cubes.iter().all(|c| disjoint(c, &cube)) {
            cubes.push(cube);
            misses = 0;
        } else {
            misses += 1;
            if misses == RESTART_AFTER {
                cubes.clear();
                misses = 0;
            }
        }
    }
    if cubes.len() < j {
        return Err(RandomError::GiveUp(MAX_ATTEMPTS));
    }
    Ok(validate_config(cubes).expect("placement keeps cubes disjoint and in bounds"))
}

/// A small connected coalgebra over `F_p`, chosen among tensor coalgebras on
/// random generators, binomial coalgebras and primitive coalgebras, and
/// always rebuilt through [`coalgebra_from_table`].
pub fn gen_random_coalgebra(p: u32, seed: u64) -> Result<Coalgebra, RandomError> {
    let field = Fp::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = match rng.gen_range(0..3) {
        0 => {
            let k = rng.gen_range(1..=2);
            let basis = (0..k)
                .map(|i| BasisElement::new(format!("v{}", i + 1), rng.gen_range(1..=3)))
                .collect();
            let v = GradedSpace::new(field, basis)?;
            tensor_algebra(&v, 4, 10)?.into_coalgebra()
        }
        1 => {
            let degree = if p == 2 {
                rng.gen_range(1..=3)
            } else {
                2 * rng.gen_range(1..=2)
            };
            binomial_coalgebra(field, degree, rng.gen_range(2..=5))?
        }
        _ => {
            let mut degrees: Vec<i32> = (1..=6).collect();
            degrees.shuffle(&mut rng);
            let mut basis = vec![BasisElement::new("1", 0)];
            basis.extend(
                degrees[..3]
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| BasisElement::new(format!("y{}", i + 1), d)),
            );
            coalgebra_from_table(GradedSpace::new(field, basis)?, "1", &CoproductTable::new())?
        }
    };
    let unit = c.space().name(c.unit()).to_owned();
    Ok(coalgebra_from_table(c.space().clone(), &unit, &c.to_table())?)
}
