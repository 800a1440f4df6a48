//! Graded vector spaces over F_p, maps between them, Koszul signs and
//! shuffle operators.
//!
//! Permutations are stored as source lists: `perm[q]` is the input slot that
//! output slot `q` reads from, so acting on a tensor gives
//! `(perm . v)_q = v_{perm[q]}`. With this convention an `(i,j)`-shuffle
//! (increasing on its first `i` entries and on its last `j` entries) moves a
//! complementary pair of subsequences to the front and back of the word.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::linalg::{FieldError, Fp, FpMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("negative degree for {0}")]
    NegativeDegree(String),
    #[error("duplicate basis name {0:?}")]
    DuplicateName(String),
    #[error("unknown basis element {0:?}")]
    UnknownElement(String),
    #[error("{0:?} must be the only element of degree 0")]
    NotConnected(String),
    #[error("degrees do not add up in {0}")]
    DegreeMismatch(String),
    #[error("coassociativity fails on {0:?}")]
    NotCoassociative(String),
    #[error("counit axiom fails: {0}")]
    BadCounit(String),
    #[error("bounds must be positive")]
    EmptyBox,
    #[error("map blocks do not respect degrees: {0}")]
    BadMap(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub name: String,
    pub degree: i32,
    pub weight: Option<u32>,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Self {
            name: name.into(),
            degree,
            weight: None,
        }
    }

    pub fn with_weight(mut self, weight: u32) -> Self {
        self.weight = Some(weight);
        self
    }
}

/// A finite graded vector space with a named basis.
#[derive(Debug, Clone)]
pub struct GradedSpace {
    field: Fp,
    basis: Vec<BasisElement>,
    index: HashMap<String, usize>,
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.basis == other.basis
    }
}

impl Eq for GradedSpace {}

impl GradedSpace {
    pub fn new(field: Fp, basis: Vec<BasisElement>) -> Result<Self, AlgebraError> {
        let mut index = HashMap::with_capacity(basis.len());
        for (i, b) in basis.iter().enumerate() {
            if b.degree < 0 {
                return Err(AlgebraError::NegativeDegree(b.name.clone()));
            }
            if index.insert(b.name.clone(), i).is_some() {
                return Err(AlgebraError::DuplicateName(b.name.clone()));
            }
        }
        Ok(Self { field, basis, index })
    }

    /// The one-dimensional space spanned by `name` in degree 0.
    pub fn ground(field: Fp, name: &str) -> Self {
        Self::new(field, vec![BasisElement::new(name, 0)]).expect("single element")
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize, AlgebraError> {
        self.position(name)
            .ok_or_else(|| AlgebraError::UnknownElement(name.to_owned()))
    }

    /// Dimension per degree.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        let mut dims = BTreeMap::new();
        for b in &self.basis {
            *dims.entry(b.degree).or_insert(0) += 1;
        }
        dims
    }
}

/// Shifts every degree by `k`.
pub fn suspend(v: &GradedSpace, k: i32) -> Result<GradedSpace, AlgebraError> {
    if k == 0 {
        return Ok(v.clone());
    }
    let basis = v
        .basis
        .iter()
        .map(|b| BasisElement {
            name: format!("s^{k}({})", b.name),
            degree: b.degree + k,
            weight: b.weight,
        })
        .collect();
    GradedSpace::new(v.field, basis)
}

/// Basis of ordered pairs, `v_i (x) w_k` at index `i * |W| + k`.
pub fn tensor(v: &GradedSpace, w: &GradedSpace) -> Result<GradedSpace, AlgebraError> {
    if v.field != w.field {
        return Err(FieldError::PrimeMismatch(v.field.p(), w.field.p()).into());
    }
    let mut basis = Vec::with_capacity(v.len() * w.len());
    for a in &v.basis {
        for b in &w.basis {
            basis.push(BasisElement {
                name: format!("{}⊗{}", a.name, b.name),
                degree: a.degree + b.degree,
                weight: match (a.weight, b.weight) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                },
            });
        }
    }
    GradedSpace::new(v.field, basis)
}

/// `V^{(x) k}`; tuples are ordered lexicographically, so the tuple
/// `(i_1, .., i_k)` sits at the mixed-radix index of its digits.
pub fn tensor_power(v: &GradedSpace, k: usize) -> Result<GradedSpace, AlgebraError> {
    let mut acc = GradedSpace::ground(v.field, "1");
    for n in 0..k {
        acc = if n == 0 { v.clone() } else { tensor(&acc, v)? };
    }
    Ok(acc)
}

/// A linear map `source -> target` raising degree by `shift`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    shift: i32,
    matrix: FpMatrix,
}

impl GradedMap {
    /// `matrix` has one row per target basis element and one column per
    /// source basis element.
    pub fn new(source: GradedSpace, target: GradedSpace, shift: i32, matrix: FpMatrix) -> Result<Self, AlgebraError> {
        if source.field != target.field || matrix.field() != source.field {
            return Err(FieldError::PrimeMismatch(source.field.p(), target.field.p()).into());
        }
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(AlgebraError::BadMap(format!(
                "matrix is {}x{}, spaces have dims {} and {}",
                matrix.rows(),
                matrix.cols(),
                target.len(),
                source.len()
            )));
        }
        for (r, c, _) in matrix.triplets() {
            if target.degree(r) != source.degree(c) + shift {
                return Err(AlgebraError::BadMap(format!(
                    "{} -> {}",
                    source.name(c),
                    target.name(r)
                )));
            }
        }
        Ok(Self {
            source,
            target,
            shift,
            matrix,
        })
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    /// `other` after `self`.
    pub fn then(&self, other: &GradedMap) -> Result<GradedMap, AlgebraError> {
        if self.target != other.source {
            return Err(AlgebraError::BadMap("composable maps need matching spaces".into()));
        }
        GradedMap::new(
            self.source.clone(),
            other.target.clone(),
            self.shift + other.shift,
            other.matrix.mul(&self.matrix),
        )
    }
}

/// Koszul sign of permuting homogeneous elements of degrees `degs` by `perm`:
/// `(-1)^(sum of deg_a * deg_b over inverted pairs)`.
pub fn koszul_sign(field: Fp, perm: &[usize], degs: &[i32]) -> u32 {
    debug_assert_eq!(perm.len(), degs.len());
    let mut exponent = 0i64;
    for q in 0..perm.len() {
        for r in q + 1..perm.len() {
            if perm[q] > perm[r] {
                exponent += degs[perm[q]] as i64 * degs[perm[r]] as i64;
            }
        }
    }
    field.sign(exponent)
}

pub fn permute<T: Clone>(perm: &[usize], word: &[T]) -> Vec<T> {
    perm.iter().map(|&i| word[i].clone()).collect()
}

/// All `(i,j)`-shuffles, in lexicographic order of their first `i` entries.
pub fn shuffles(i: usize, j: usize) -> Vec<Vec<usize>> {
    let n = i + j;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(i);
    fn rec(n: usize, i: usize, start: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if chosen.len() == i {
            let mut perm = chosen.clone();
            perm.extend((0..n).filter(|x| !chosen.contains(x)));
            out.push(perm);
            return;
        }
        for x in start..n {
            if n - x < i - chosen.len() {
                break;
            }
            chosen.push(x);
            rec(n, i, x + 1, chosen, out);
            chosen.pop();
        }
    }
    rec(n, i, 0, &mut chosen, &mut out);
    out
}

/// The signed sum of all `(i,j)`-shuffles acting on elements of degrees
/// `degs`, as `(permutation, coefficient)` terms.
pub fn shuffle_sum(field: Fp, i: usize, j: usize, degs: &[i32]) -> Vec<(Vec<usize>, u32)> {
    assert_eq!(degs.len(), i + j, "need one degree per slot");
    shuffles(i, j)
        .into_iter()
        .map(|perm| {
            let sign = koszul_sign(field, &perm, degs);
            (perm, sign)
        })
        .collect()
}

/// The shuffle sum `s_{i,j}` as an endomorphism of `V^{(x)(i+j)}`.
pub fn shuffle_map(i: usize, j: usize, v: &GradedSpace) -> Result<GradedMap, AlgebraError> {
    let k = i + j;
    let space = tensor_power(v, k)?;
    let field = v.field;
    let dim = v.len();
    let mut matrix = FpMatrix::zeros(field, space.len(), space.len());
    let perms = shuffles(i, j);
    for col in 0..space.len() {
        let digits = digits_of(col, dim, k);
        let degs: Vec<i32> = digits.iter().map(|&d| v.degree(d)).collect();
        for perm in &perms {
            let sign = koszul_sign(field, perm, &degs);
            let row = index_of(&permute(perm, &digits), dim);
            matrix.add_to(row, col, sign);
        }
    }
    GradedMap::new(space.clone(), space, 0, matrix)
}

fn digits_of(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    for d in digits.iter_mut().rev() {
        *d = index % base;
        index /= base;
    }
    digits
}

fn index_of(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    fn space(p: u32, elems: &[(&str, i32)]) -> GradedSpace {
        GradedSpace::new(f(p), elems.iter().map(|&(n, d)| BasisElement::new(n, d)).collect()).unwrap()
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn suspend_shifts() {
        let v = space(2, &[("x", 2)]);
        assert_eq!(suspend(&v, 0).unwrap(), v);
        assert_eq!(suspend(&v, -1).unwrap().degree(0), 1);
        let u = space(2, &[("u", 0)]);
        assert!(matches!(suspend(&u, -1), Err(AlgebraError::NegativeDegree(_))));
    }

    #[test]
    fn tensor_shapes() {
        let v = space(3, &[("a", 1), ("b", 2)]);
        let w = space(3, &[("x", 0), ("y", 1), ("z", 3)]);
        let vw = tensor(&v, &w).unwrap();
        assert_eq!(vw.len(), 6);
        // convolution of dimension tables
        let expected: BTreeMap<i32, usize> = [(1, 1), (2, 2), (3, 1), (4, 1), (5, 1)].into();
        assert_eq!(vw.dims(), expected);
        let unit = GradedSpace::ground(f(3), "1");
        assert_eq!(tensor(&v, &unit).unwrap().dims(), v.dims());
        assert!(tensor(&v, &space(2, &[("q", 1)])).is_err());
        assert!(GradedSpace::new(f(2), vec![BasisElement::new("a", 1), BasisElement::new("a", 2)]).is_err());
    }

    #[test]
    fn koszul_examples() {
        let f3 = f(3);
        assert_eq!(koszul_sign(f3, &[0, 1, 2], &[1, 1, 1]), 1);
        assert_eq!(koszul_sign(f3, &[1, 0], &[1, 3]), 2);
        assert_eq!(koszul_sign(f3, &[1, 0], &[2, 3]), 1);
        assert_eq!(koszul_sign(f(2), &[1, 0], &[1, 1]), 1);
    }

    #[test]
    fn koszul_cocycle_exhaustive() {
        let f5 = f(5);
        let degree_choices = [0, 1, 2, 3];
        for k in 1..=4usize {
            let perms = all_perms(k);
            // all degree vectors over {0..3}^k
            for code in 0..degree_choices.len().pow(k as u32) {
                let degs: Vec<i32> = digits_of(code, degree_choices.len(), k)
                    .into_iter()
                    .map(|d| degree_choices[d])
                    .collect();
                for sigma in &perms {
                    for tau in &perms {
                        // sigma . (tau . v) reads v at tau[sigma[q]]
                        let composite: Vec<usize> = sigma.iter().map(|&q| tau[q]).collect();
                        let moved = permute(tau, &degs);
                        let lhs = koszul_sign(f5, &composite, &degs);
                        let rhs = f5.mul(koszul_sign(f5, sigma, &moved), koszul_sign(f5, tau, &degs));
                        assert_eq!(lhs, rhs, "sigma={sigma:?} tau={tau:?} degs={degs:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(1, 1).len(), 2);
        assert_eq!(shuffles(2, 1).len(), 3);
        assert_eq!(shuffles(2, 3).len(), 10);
        assert_eq!(shuffles(2, 1), vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 2, 0]]);
    }

    #[test]
    fn s11_over_f2_and_odd_p() {
        // a (x) b -> a (x) b + b (x) a, with a sign at odd p for odd degrees
        let terms = shuffle_sum(f(2), 1, 1, &[1, 1]);
        assert_eq!(terms, vec![(vec![0, 1], 1), (vec![1, 0], 1)]);
        let terms = shuffle_sum(f(3), 1, 1, &[1, 3]);
        assert_eq!(terms, vec![(vec![0, 1], 1), (vec![1, 0], 2)]);
    }

    #[test]
    fn shuffle_map_on_two_letters() {
        let v = space(3, &[("a", 1), ("b", 1)]);
        let m = shuffle_map(1, 1, &v).unwrap();
        // column a(x)b (index 1) has +1 on a(x)b and -1 on b(x)a (index 2)
        assert_eq!(m.matrix().get(1, 1), 1);
        assert_eq!(m.matrix().get(2, 1), 2);
        // a(x)a picks up 1 + (-1) = 0
        assert_eq!(m.matrix().get(0, 0), 0);
        assert_eq!(m.shift(), 0);
        let sq = m.then(&m).unwrap();
        assert_eq!(sq.source().len(), 4);
    }

    /// Cutting with an (i+j, k)-shuffle and then the front piece with an
    /// (i, j)-shuffle is the (i, j, k)-trishuffle sum.
    #[test]
    fn shuffle_refinement_matches_trishuffle() {
        for p in [2u32, 3] {
            let field = f(p);
            for n in 3..=5usize {
                for i in 1..n {
                    for j in 1..n - i {
                        let k = n - i - j;
                        for degs in [vec![1; n], (0..n as i32).collect::<Vec<_>>()] {
                            let word: Vec<usize> = (0..n).collect();
                            let mut lhs: BTreeMap<Vec<usize>, u32> = BTreeMap::new();
                            for (outer, s1) in shuffle_sum(field, i + j, k, &degs) {
                                let moved = permute(&outer, &word);
                                let moved_degs = permute(&outer, &degs);
                                for (inner, s2) in shuffle_sum(field, i, j, &moved_degs[..i + j]) {
                                    let mut w = permute(&inner, &moved[..i + j]);
                                    w.extend_from_slice(&moved[i + j..]);
                                    let e = lhs.entry(w).or_insert(0);
                                    *e = field.add(*e, field.mul(s1, s2));
                                }
                            }
                            let mut rhs: BTreeMap<Vec<usize>, u32> = BTreeMap::new();
                            for perm in all_perms(n) {
                                let inc = |r: std::ops::Range<usize>| perm[r].windows(2).all(|w| w[0] < w[1]);
                                if inc(0..i) && inc(i..i + j) && inc(i + j..n) {
                                    let e = rhs.entry(permute(&perm, &word)).or_insert(0);
                                    *e = field.add(*e, koszul_sign(field, &perm, &degs));
                                }
                            }
                            lhs.retain(|_, c| *c != 0);
                            rhs.retain(|_, c| *c != 0);
                            assert_eq!(lhs, rhs, "p={p} ({i},{j},{k}) degs={degs:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn signs_trivial_at_two() {
        let f2 = f(2);
        for perm in all_perms(4) {
            assert_eq!(koszul_sign(f2, &perm, &[1, 3, 5, 7]), 1);
        }
    }
}
