use num_traits::{One, Zero};

use super::{filtration::u_value, format_rational, Axis, CubeConfig, GeometryError, LittleCube, Rational};

/// Stage `s` and time `t` of the combined deformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformParams {
    s: usize,
    t: Rational,
}

impl DeformParams {
    pub fn new(s: usize, t: Rational) -> Result<Self, GeometryError> {
        if s == 0 {
            return Err(GeometryError::BadS { s, j: 0 });
        }
        if t < Rational::zero() || t > Rational::one() {
            return Err(GeometryError::OutOfRange(format_rational(&t)));
        }
        Ok(Self { s, t })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }
}

/// Scales every first-axis radius by `1 - t`, keeping centers fixed.
pub fn shrink_h(cfg: &CubeConfig, t: &Rational) -> Result<CubeConfig, GeometryError> {
    if *t < Rational::zero() || *t >= Rational::one() {
        return Err(GeometryError::BadShrink(format_rational(t)));
    }
    let factor = Rational::one() - t;
    let cubes = cfg
        .cubes()
        .iter()
        .map(|c| {
            let mut axes = c.axes.clone();
            axes[0] = Axis::new(axes[0].center.clone(), &axes[0].radius * &factor);
            LittleCube::new(axes)
        })
        .collect();
    Ok(CubeConfig::new_unchecked(cubes))
}

/// Whether vertical hyperplanes split the cubes into at least `s` nonempty
/// groups. Closed first-axis images of different groups may touch.
pub fn is_decomposable(cfg: &CubeConfig, s: usize) -> Result<bool, GeometryError> {
    let j = cfg.len();
    if s == 0 || s > j {
        return Err(GeometryError::BadS { s, j });
    }
    // Sweep open intervals by left endpoint; a new component starts whenever
    // the next interval begins at or after everything seen so far.
    let mut intervals: Vec<(Rational, Rational)> =
        cfg.cubes().iter().map(|c| (c.first().lo(), c.first().hi())).collect();
    intervals.sort();
    let mut components = 0;
    let mut reach: Option<Rational> = None;
    for (lo, hi) in intervals {
        match &mut reach {
            Some(r) if lo < *r => {
                if hi > *r {
                    *r = hi;
                }
            }
            _ => {
                components += 1;
                reach = Some(hi);
            }
        }
    }
    Ok(components >= s)
}

/// Shrink thresholds at which each gap between consecutive distinct
/// first-axis centers opens, sorted ascending. Gaps between equal centers
/// never open and are omitted.
fn gap_thresholds(cfg: &CubeConfig) -> Vec<Rational> {
    let mut axes: Vec<&Axis> = cfg.cubes().iter().map(LittleCube::first).collect();
    axes.sort_by(|a, b| a.center.cmp(&b.center));
    let mut thresholds = Vec::new();
    for cut in 1..axes.len() {
        if axes[cut - 1].center == axes[cut].center {
            continue;
        }
        // The cut opens once (1-t)(R_i + R_m) <= C_m - C_i for every i left
        // of it and m right of it.
        let mut need = Rational::zero();
        for left in &axes[..cut] {
            for right in &axes[cut..] {
                let gap = &right.center - &left.center;
                let t = Rational::one() - gap / (&left.radius + &right.radius);
                if t > need {
                    need = t;
                }
            }
        }
        thresholds.push(need);
    }
    thresholds.sort();
    thresholds
}

/// Least shrink parameter at which the configuration becomes decomposable into
/// `s` groups.
pub fn sigma(cfg: &CubeConfig, s: usize) -> Result<Rational, GeometryError> {
    if s == 0 {
        return Err(GeometryError::BadS { s, j: cfg.len() });
    }
    if s == 1 {
        return Ok(Rational::zero());
    }
    gap_thresholds(cfg)
        .into_iter()
        .nth(s - 2)
        .ok_or(GeometryError::Unreachable(s))
}

/// The combined deformation `H(c, t (u σ_s + (1-u) σ_{s+1}))`. When
/// `u_s = 1` the configuration is `s` vertical piles and `σ_{s+1}` is never
/// evaluated.
pub fn deform_g(cfg: &CubeConfig, params: &DeformParams) -> Result<CubeConfig, GeometryError> {
    let s = params.s();
    let u = u_value(cfg, s)?;
    let sigma_s = sigma(cfg, s)?;
    let target = if u.is_one() {
        sigma_s
    } else {
        let sigma_next = sigma(cfg, s + 1)?;
        &u * sigma_s + (Rational::one() - &u) * sigma_next
    };
    shrink_h(cfg, &(params.t() * target))
}
