use num_traits::{One, Zero};

use super::rational::abs;
use super::{Axis, CubeConfig, GeometryError, LittleCube, Rational};

/// Overlap of the point `x` with the 1-cube `b`: 1 at the center, 0 outside
/// the open image, linear in between.
pub fn overlap_d(x: &Rational, b: &Axis) -> Rational {
    let two_r = &b.radius + &b.radius;
    let left = abs(&(&b.center + &b.radius - x));
    let right = abs(&(&b.center - &b.radius - x));
    (&two_r - abs(&(left - right))) / two_r
}

/// Symmetric first-axis overlap of two cubes.
pub fn dis(c1: &LittleCube, c2: &LittleCube) -> Rational {
    let a = overlap_d(&c1.first().center, c2.first());
    let b = overlap_d(&c2.first().center, c1.first());
    a.min(b)
}

/// A partition of `{0, .., j-1}` into disjoint nonempty parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetPartition {
    parts: Vec<Vec<usize>>,
}

impl SubsetPartition {
    pub fn new(j: usize, parts: Vec<Vec<usize>>) -> Result<Self, GeometryError> {
        let mut seen = vec![false; j];
        for part in &parts {
            if part.is_empty() {
                return Err(GeometryError::BadPartition("empty part".into()));
            }
            for &i in part {
                if i >= j {
                    return Err(GeometryError::BadIndex(i));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(GeometryError::BadPartition(format!("index {i} repeated")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(GeometryError::BadPartition(format!("index {missing} not covered")));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

fn check_subset(cfg: &CubeConfig, subset: &[usize]) -> Result<(), GeometryError> {
    if subset.is_empty() {
        return Err(GeometryError::EmptySubset);
    }
    match subset.iter().find(|&&i| i >= cfg.len()) {
        Some(&i) => Err(GeometryError::BadIndex(i)),
        None => Ok(()),
    }
}

/// Whether every cube's first-axis center lies in the open first-axis image
/// of every other cube of `subset`.
pub fn is_stable(cfg: &CubeConfig, subset: &[usize]) -> Result<bool, GeometryError> {
    check_subset(cfg, subset)?;
    let cubes = cfg.cubes();
    let inside = |x: &Rational, b: &Axis| b.lo() < *x && *x < b.hi();
    Ok(subset.iter().all(|&i| {
        subset
            .iter()
            .all(|&k| i == k || inside(&cubes[i].first().center, cubes[k].first()))
    }))
}

/// Minimum of `dis` over pairs in `subset`, including the diagonal, so a
/// singleton has overlap 1.
pub fn ol(cfg: &CubeConfig, subset: &[usize]) -> Result<Rational, GeometryError> {
    check_subset(cfg, subset)?;
    let cubes = cfg.cubes();
    let mut best = Rational::one();
    for (a, &i) in subset.iter().enumerate() {
        for &k in &subset[a + 1..] {
            best = best.min(dis(&cubes[i], &cubes[k]));
        }
    }
    Ok(best)
}

pub fn mol(cfg: &CubeConfig, partition: &SubsetPartition) -> Result<Rational, GeometryError> {
    if partition.parts().iter().map(Vec::len).sum::<usize>() != cfg.len() {
        return Err(GeometryError::BadPartition(
            "partition does not match the configuration".into(),
        ));
    }
    let mut best = Rational::one();
    for part in partition.parts() {
        best = best.min(ol(cfg, part)?);
    }
    Ok(best)
}

pub(crate) fn dis_matrix(cfg: &CubeConfig) -> Vec<Vec<Rational>> {
    let cubes = cfg.cubes();
    (0..cubes.len())
        .map(|i| (0..cubes.len()).map(|k| dis(&cubes[i], &cubes[k])).collect())
        .collect()
}

/// Minimum number of gravity-stable parts the cubes can be split into.
///
/// Stability is pairwise, so this is a minimum clique cover of the graph
/// joining cubes with positive `dis`. Exact branch and bound: cubes are placed
/// in label order into the lowest-indexed compatible group, or a new one.
pub fn gravity_degree(cfg: &CubeConfig) -> usize {
    let dm = dis_matrix(cfg);
    let adjacent: Vec<Vec<bool>> = dm
        .iter()
        .map(|row| row.iter().map(|d| !d.is_zero()).collect())
        .collect();
    min_clique_cover(&adjacent)
}

fn min_clique_cover(adjacent: &[Vec<bool>]) -> usize {
    struct Search<'a> {
        adjacent: &'a [Vec<bool>],
        groups: Vec<Vec<usize>>,
        best: usize,
    }

    impl Search<'_> {
        fn run(&mut self, v: usize) {
            if self.groups.len() >= self.best {
                return;
            }
            if v == self.adjacent.len() {
                self.best = self.groups.len();
                return;
            }
            for g in 0..self.groups.len() {
                if self.groups[g].iter().all(|&u| self.adjacent[u][v]) {
                    self.groups[g].push(v);
                    self.run(v + 1);
                    self.groups[g].pop();
                }
            }
            if self.groups.len() + 1 < self.best {
                self.groups.push(vec![v]);
                self.run(v + 1);
                self.groups.pop();
            }
        }
    }

    let n = adjacent.len();
    let mut search = Search {
        adjacent,
        groups: Vec::new(),
        best: n + 1,
    };
    search.run(0);
    search.best.min(n)
}

/// Best `MOL` over partitions into exactly `s` nonempty parts.
pub fn u_value(cfg: &CubeConfig, s: usize) -> Result<Rational, GeometryError> {
    let j = cfg.len();
    if s == 0 || s > j {
        return Err(GeometryError::BadS { s, j });
    }
    let dm = dis_matrix(cfg);
    let mut search = MaxMinSearch {
        dm: &dm,
        s,
        assignment: Vec::with_capacity(j),
        blocks: 0,
        best: None,
    };
    search.run(Rational::one());
    Ok(search.best.expect("some partition into s parts exists"))
}

struct MaxMinSearch<'a> {
    dm: &'a [Vec<Rational>],
    s: usize,
    assignment: Vec<usize>,
    blocks: usize,
    best: Option<Rational>,
}

impl MaxMinSearch<'_> {
    // Restricted growth strings with exactly `s` blocks.
    fn run(&mut self, current: Rational) {
        if let Some(best) = &self.best {
            if current <= *best {
                return;
            }
        }
        let v = self.assignment.len();
        let n = self.dm.len();
        if v == n {
            if self.blocks == self.s {
                self.best = Some(current);
            }
            return;
        }
        if n - v < self.s - self.blocks {
            return;
        }
        for b in 0..self.blocks {
            let mut next = current.clone();
            for (u, &bu) in self.assignment.iter().enumerate() {
                if bu == b && self.dm[u][v] < next {
                    next = self.dm[u][v].clone();
                }
            }
            self.assignment.push(b);
            self.run(next);
            self.assignment.pop();
        }
        if self.blocks < self.s {
            self.assignment.push(self.blocks);
            self.blocks += 1;
            self.run(current);
            self.blocks -= 1;
            self.assignment.pop();
        }
    }
}

/// `min(2t, 1)` on `[0,1]`.
pub fn m_clamp(t: &Rational) -> Result<Rational, GeometryError> {
    if *t < Rational::zero() || *t > Rational::one() {
        return Err(GeometryError::OutOfRange(super::format_rational(t)));
    }
    Ok((t + t).min(Rational::one()))
}

/// Minimum number of groups whose open first-axis intervals share a point.
///
/// Intervals on a line have the Helly property, so a greedy sweep over
/// right endpoints is optimal.
pub fn skewer_degree(cfg: &CubeConfig) -> usize {
    let mut intervals: Vec<(Rational, Rational)> =
        cfg.cubes().iter().map(|c| (c.first().lo(), c.first().hi())).collect();
    intervals.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let mut groups = 0;
    let mut skewer: Option<&Rational> = None;
    for (lo, hi) in &intervals {
        match skewer {
            // any point just left of `r` lies in every open interval with lo < r
            Some(r) if lo < r => {}
            _ => {
                groups += 1;
                skewer = Some(hi);
            }
        }
    }
    groups
}
