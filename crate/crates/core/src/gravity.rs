//! The gravity spectral sequence for `Ω²Σ²X` with `X` a wedge of spheres.
//!
//! `E¹_{-s}` is the `s`-fold tensor power of the desuspended augmentation
//! ideal of `H_*(ΩΣ²X) = T(H̃(ΣX))`. A basis word is a list of `s` nonempty
//! blocks, each block a word in the generators. `d¹` is built two ways: from
//! the signed shuffle sums splitting each block, and as the cobar differential
//! of the tensor coalgebra. Both preserve the Snaith weight (letter count), so
//! everything is graded by `(s, t, weight)`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::chain::Chain;
use crate::coalgebra::{tensor_algebra, TensorCoalgebra};
use crate::cobar::{cobar_differential, Bidegree, CobarWord, DSquaredReport, SignConvention};
use crate::graded::{koszul_sign, permute, shuffles, AlgebraError, BasisElement, GradedSpace};
use crate::linalg::{FieldError, Fp, FpMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GravityError {
    #[error("sphere dimensions must be at least 1, got {0}")]
    BadSphere(u32),
    #[error("the wedge needs at least one sphere")]
    EmptyWedge,
    #[error("box bounds must be positive")]
    EmptyBox,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("differential of a word in filtration {0} leaves the box")]
    Truncated(usize),
    #[error("word is not in the E1 page")]
    NotInBox,
    #[error("d1 does not square to zero on {0:?}")]
    NotAComplex(E1Word),
}

/// `X = ⋁ S^{d_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereWedge {
    dims: Vec<u32>,
}

impl SphereWedge {
    pub fn new(dims: Vec<u32>) -> Result<Self, GravityError> {
        if dims.is_empty() {
            return Err(GravityError::EmptyWedge);
        }
        if let Some(&d) = dims.iter().find(|&&d| d == 0) {
            return Err(GravityError::BadSphere(d));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    /// Degrees of the generators of `H̃(ΣX)`, one per sphere.
    pub fn generator_degrees(&self) -> Vec<i32> {
        self.dims.iter().map(|&d| d as i32 + 1).collect()
    }

    /// `H̃(ΣX)` with generators `x1, x2, ...` of weight 1.
    pub fn generator_space(&self, field: Fp) -> GradedSpace {
        let basis = self
            .generator_degrees()
            .into_iter()
            .enumerate()
            .map(|(i, d)| BasisElement::new(format!("x{}", i + 1), d).with_weight(1))
            .collect();
        GradedSpace::new(field, basis).expect("generator names are distinct")
    }
}

/// Filtrations `0..=max_s`, internal degrees `0..=max_degree`, weights
/// `0..=max_weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GravityBox {
    pub max_s: usize,
    pub max_degree: i32,
    pub max_weight: usize,
}

/// `[b_1|...|b_s]` with each block a nonempty list of generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct E1Word {
    pub blocks: Vec<Vec<usize>>,
}

impl E1Word {
    pub fn new(blocks: Vec<Vec<usize>>) -> Self {
        Self { blocks }
    }

    pub fn s(&self) -> usize {
        self.blocks.len()
    }

    /// Block lengths `(j_1, ..., j_s)`.
    pub fn profile(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn weight(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn internal_degree(&self, degs: &[i32]) -> i32 {
        self.blocks.iter().flatten().map(|&l| degs[l]).sum()
    }
}

/// A trigraded position `(-s, t)` of weight `weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub weight: usize,
    pub s: usize,
    pub t: i32,
}

impl Cell {
    pub fn bidegree(self) -> Bidegree {
        Bidegree::new(self.s, self.t)
    }

    fn target(self) -> Cell {
        Cell { s: self.s + 1, ..self }
    }
}

/// Which construction of `d¹` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum D1Route {
    Shuffle(SignConvention),
    Cobar,
}

#[derive(Debug, Clone)]
pub struct GravityE1 {
    wedge: SphereWedge,
    field: Fp,
    bounds: GravityBox,
    degs: Vec<i32>,
    tensor: TensorCoalgebra,
    groups: BTreeMap<Cell, Vec<E1Word>>,
    index: HashMap<E1Word, (Cell, usize)>,
}

pub fn build_e1(wedge: &SphereWedge, p: u32, bounds: GravityBox) -> Result<GravityE1, GravityError> {
    if bounds.max_s == 0 || bounds.max_degree < 1 || bounds.max_weight == 0 {
        return Err(GravityError::EmptyBox);
    }
    let field = Fp::new(p)?;
    let degs = wedge.generator_degrees();
    let tensor = tensor_algebra(&wedge.generator_space(field), bounds.max_weight, bounds.max_degree)?;
    let blocks: Vec<&[usize]> = tensor.augmentation().map(|x| tensor.letters(x)).collect();

    let mut groups: BTreeMap<Cell, Vec<E1Word>> = BTreeMap::new();
    let mut stack = vec![(E1Word::new(Vec::new()), 0i32, 0usize)];
    while let Some((w, t, weight)) = stack.pop() {
        if w.s() < bounds.max_s {
            for &b in &blocks {
                let t2 = t + b.iter().map(|&l| degs[l]).sum::<i32>();
                let w2 = weight + b.len();
                if t2 <= bounds.max_degree && w2 <= bounds.max_weight {
                    let mut next = w.clone();
                    next.blocks.push(b.to_vec());
                    stack.push((next, t2, w2));
                }
            }
        }
        groups.entry(Cell { weight, s: w.s(), t }).or_default().push(w);
    }
    for words in groups.values_mut() {
        words.sort();
    }
    let index = groups
        .iter()
        .flat_map(|(&cell, words)| words.iter().enumerate().map(move |(i, w)| (w.clone(), (cell, i))))
        .collect();
    Ok(GravityE1 {
        wedge: wedge.clone(),
        field,
        bounds,
        degs,
        tensor,
        groups,
        index,
    })
}

impl GravityE1 {
    pub fn wedge(&self) -> &SphereWedge {
        &self.wedge
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn bounds(&self) -> GravityBox {
        self.bounds
    }

    pub fn generator_degrees(&self) -> &[i32] {
        &self.degs
    }

    /// `T(H̃(ΣX))` truncated to the box.
    pub fn tensor_coalgebra(&self) -> &TensorCoalgebra {
        &self.tensor
    }

    pub fn groups(&self) -> &BTreeMap<Cell, Vec<E1Word>> {
        &self.groups
    }

    pub fn dim(&self, cell: Cell) -> usize {
        self.groups.get(&cell).map_or(0, Vec::len)
    }

    pub fn cell_of(&self, w: &E1Word) -> Option<Cell> {
        self.index.get(w).map(|&(c, _)| c)
    }

    fn check_source(&self, w: &E1Word) -> Result<(), GravityError> {
        if !self.index.contains_key(w) {
            return Err(GravityError::NotInBox);
        }
        if w.s() >= self.bounds.max_s {
            return Err(GravityError::Truncated(w.s()));
        }
        Ok(())
    }

    /// Matrix of `d¹: cell -> cell.target()` for every cell with `s < max_s`.
    pub fn d1_matrices(&self, route: D1Route) -> BTreeMap<Cell, FpMatrix> {
        let cells: Vec<Cell> = self
            .groups
            .keys()
            .copied()
            .filter(|c| c.s < self.bounds.max_s)
            .collect();
        cells
            .par_iter()
            .map(|&cell| (cell, self.d1_matrix(cell, route)))
            .collect()
    }

    pub fn d1_matrix(&self, cell: Cell, route: D1Route) -> FpMatrix {
        let source = self.groups.get(&cell).map_or(&[][..], Vec::as_slice);
        let rows = self.dim(cell.target());
        let mut matrix = FpMatrix::zeros(self.field, rows, source.len());
        for (col, w) in source.iter().enumerate() {
            let image = match route {
                D1Route::Shuffle(conv) => shuffle_image(self, w, conv),
                D1Route::Cobar => cobar_image(self, w),
            };
            for (img, coef) in image {
                let (img_cell, row) = self.index[&img];
                debug_assert_eq!(img_cell, cell.target());
                matrix.add_to(row, col, coef);
            }
        }
        matrix
    }

    /// Number of `d¹` terms whose weight differs from their source's weight.
    pub fn cross_weight_terms(&self, route: D1Route) -> usize {
        self.groups
            .par_iter()
            .filter(|(c, _)| c.s < self.bounds.max_s)
            .map(|(_, words)| {
                words
                    .iter()
                    .map(|w| {
                        let image = match route {
                            D1Route::Shuffle(conv) => shuffle_image(self, w, conv),
                            D1Route::Cobar => cobar_image(self, w),
                        };
                        image.iter().filter(|(img, _)| img.weight() != w.weight()).count()
                    })
                    .sum::<usize>()
            })
            .sum()
    }
}

fn shuffle_image(e1: &GravityE1, w: &E1Word, conv: SignConvention) -> Chain<E1Word> {
    let field = e1.field;
    let mut out = Chain::zero(field);
    let mut prefix: i64 = 0;
    for (m, block) in w.blocks.iter().enumerate() {
        let k = block.len();
        let degs: Vec<i32> = block.iter().map(|&l| e1.degs[l]).collect();
        for cut in 1..k {
            for perm in shuffles(cut, k - cut) {
                let letters = permute(&perm, block);
                let first_degree: i64 = letters[..cut].iter().map(|&l| e1.degs[l] as i64).sum();
                let coef = match conv {
                    SignConvention::Koszul => {
                        field.mul(koszul_sign(field, &perm, &degs), field.sign(prefix + first_degree))
                    }
                    SignConvention::Unsigned => 1,
                };
                let mut blocks = Vec::with_capacity(w.s() + 1);
                blocks.extend_from_slice(&w.blocks[..m]);
                blocks.push(letters[..cut].to_vec());
                blocks.push(letters[cut..].to_vec());
                blocks.extend_from_slice(&w.blocks[m + 1..]);
                out.add_term(E1Word::new(blocks), coef);
            }
        }
        prefix += degs.iter().map(|&d| d as i64).sum::<i64>() - 1;
    }
    out
}

fn cobar_image(e1: &GravityE1, w: &E1Word) -> Chain<E1Word> {
    let t = &e1.tensor;
    let word = CobarWord::bar(
        w.blocks
            .iter()
            .map(|b| t.index_of(b).expect("block lies in the tensor coalgebra"))
            .collect(),
    );
    cobar_differential(t, &word, SignConvention::Koszul)
        .map_words(|cw| E1Word::new(cw.blocks.iter().map(|&x| t.letters(x).to_vec()).collect()))
}

/// `d¹` from the signed shuffle sums on each block.
pub fn d1_shuffle(e1: &GravityE1, w: &E1Word, conv: SignConvention) -> Result<Chain<E1Word>, GravityError> {
    e1.check_source(w)?;
    Ok(shuffle_image(e1, w, conv))
}

/// `d¹` as the cobar differential of `T(H̃(ΣX))`.
pub fn d1_cobar(e1: &GravityE1, w: &E1Word) -> Result<Chain<E1Word>, GravityError> {
    e1.check_source(w)?;
    Ok(cobar_image(e1, w))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D1Comparison {
    pub cells_checked: usize,
    /// First source word (in cell order) whose images differ.
    pub witness: Option<E1Word>,
}

impl D1Comparison {
    pub fn equal(&self) -> bool {
        self.witness.is_none()
    }
}

/// Compares the Koszul-signed shuffle `d¹` with the cobar `d¹` cell by cell.
pub fn compare_d1(e1: &GravityE1) -> D1Comparison {
    compare_d1_routes(e1, D1Route::Shuffle(SignConvention::Koszul), D1Route::Cobar)
}

pub fn compare_d1_routes(e1: &GravityE1, a: D1Route, b: D1Route) -> D1Comparison {
    let left = e1.d1_matrices(a);
    let right = e1.d1_matrices(b);
    for (cell, ma) in &left {
        let mb = &right[cell];
        if let Some(col) = (0..ma.cols()).find(|&c| (0..ma.rows()).any(|r| ma.get(r, c) != mb.get(r, c))) {
            return D1Comparison {
                cells_checked: left.len(),
                witness: Some(e1.groups[cell][col].clone()),
            };
        }
    }
    D1Comparison {
        cells_checked: left.len(),
        witness: None,
    }
}

pub fn verify_d1_squared(e1: &GravityE1, route: D1Route) -> DSquaredReport<E1Word> {
    let matrices = e1.d1_matrices(route);
    let mut checked = 0;
    for (cell, first) in &matrices {
        let Some(second) = matrices.get(&cell.target()) else {
            continue;
        };
        checked += 1;
        if let Some((_, col, _)) = second.mul(first).first_nonzero() {
            return DSquaredReport {
                compositions_checked: checked,
                witness: Some(e1.groups[cell][col].clone()),
            };
        }
    }
    DSquaredReport {
        compositions_checked: checked,
        witness: None,
    }
}

/// Signed dimension sums keyed by `(weight, t)`.
pub type EulerTable = BTreeMap<(usize, i32), i64>;

/// Dimensions of `E¹` and `E²` per cell. `E²` is only reported where it is
/// determined by the box: `s < max_s`, or `s = weight` (no outgoing words).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedPage {
    pub p: u32,
    pub bounds: GravityBox,
    pub e1: BTreeMap<Cell, usize>,
    pub e2: BTreeMap<Cell, usize>,
    /// Set when some nonzero `E¹` cell has no `E²` entry.
    pub truncated: bool,
}

impl BigradedPage {
    pub fn e1_by_bidegree(&self) -> BTreeMap<Bidegree, usize> {
        by_bidegree(&self.e1)
    }

    pub fn e2_by_bidegree(&self) -> BTreeMap<Bidegree, usize> {
        by_bidegree(&self.e2)
    }

    /// `E²` summed over bidegrees of total degree `t - s`.
    pub fn e2_total_degree_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (cell, &d) in &self.e2 {
            *out.entry(cell.bidegree().total()).or_insert(0) += d;
        }
        out
    }

    /// Weights whose whole `s`-range lies inside the box.
    pub fn complete_weights(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.bounds.max_weight).filter(|&w| w <= self.bounds.max_s)
    }

    /// `Σ_s (-1)^s dim` per `(weight, t)` over complete weights, for `E¹` and
    /// `E²`.
    pub fn euler(&self) -> (EulerTable, EulerTable) {
        let complete = |c: &Cell| c.weight <= self.bounds.max_s;
        (euler_of(&self.e1, complete), euler_of(&self.e2, complete))
    }
}

fn by_bidegree(cells: &BTreeMap<Cell, usize>) -> BTreeMap<Bidegree, usize> {
    let mut out = BTreeMap::new();
    for (cell, &d) in cells {
        *out.entry(cell.bidegree()).or_insert(0) += d;
    }
    out
}

fn euler_of(cells: &BTreeMap<Cell, usize>, keep: impl Fn(&Cell) -> bool) -> EulerTable {
    let mut out = BTreeMap::new();
    for (cell, &d) in cells.iter().filter(|(c, _)| keep(c)) {
        let signed = if cell.s % 2 == 0 { d as i64 } else { -(d as i64) };
        *out.entry((cell.weight, cell.t)).or_insert(0) += signed;
    }
    out
}

/// `E²` from the shuffle `d¹`, after checking that it squares to zero.
pub fn compute_e2(e1: &GravityE1) -> Result<BigradedPage, GravityError> {
    let route = D1Route::Shuffle(SignConvention::Koszul);
    if let Some(w) = verify_d1_squared(e1, route).witness {
        return Err(GravityError::NotAComplex(w));
    }
    let ranks: HashMap<Cell, usize> = e1
        .d1_matrices(route)
        .into_par_iter()
        .map(|(c, m)| (c, m.rank()))
        .collect();
    let bounds = e1.bounds;
    let e1_dims: BTreeMap<Cell, usize> = e1.groups.iter().map(|(&c, w)| (c, w.len())).collect();
    let e2: BTreeMap<Cell, usize> = e1_dims
        .iter()
        .filter(|(c, _)| c.s < bounds.max_s || c.s >= c.weight)
        .map(|(&c, &d)| {
            let outgoing = ranks.get(&c).copied().unwrap_or(0);
            let incoming = if c.s == 0 {
                0
            } else {
                ranks.get(&Cell { s: c.s - 1, ..c }).copied().unwrap_or(0)
            };
            (c, d - outgoing - incoming)
        })
        .collect();
    let truncated = e1_dims.keys().any(|c| !e2.contains_key(c));
    Ok(BigradedPage {
        p: e1.field.p(),
        bounds,
        e1: e1_dims,
        e2,
        truncated,
    })
}

/// Splits a page into its weight summands.
pub fn weight_split(page: &BigradedPage) -> BTreeMap<usize, BigradedPage> {
    let mut out: BTreeMap<usize, BigradedPage> = BTreeMap::new();
    for (&cell, &d) in &page.e1 {
        let sub = out.entry(cell.weight).or_insert_with(|| BigradedPage {
            p: page.p,
            bounds: page.bounds,
            e1: BTreeMap::new(),
            e2: BTreeMap::new(),
            truncated: false,
        });
        sub.e1.insert(cell, d);
        match page.e2.get(&cell) {
            Some(&d2) => {
                sub.e2.insert(cell, d2);
            }
            None => sub.truncated = true,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle_box(max_s: usize, max_degree: i32, max_weight: usize) -> GravityBox {
        GravityBox {
            max_s,
            max_degree,
            max_weight,
        }
    }

    #[test]
    fn wedge_validation() {
        assert_eq!(SphereWedge::new(vec![]), Err(GravityError::EmptyWedge));
        assert_eq!(SphereWedge::new(vec![1, 0]), Err(GravityError::BadSphere(0)));
        assert_eq!(SphereWedge::new(vec![1, 2]).unwrap().generator_degrees(), vec![2, 3]);
    }

    #[test]
    fn e1_basis_for_circle() {
        let x = SphereWedge::new(vec![1]).unwrap();
        let e1 = build_e1(&x, 2, circle_box(3, 12, 6)).unwrap();
        assert_eq!(e1.dim(Cell { weight: 0, s: 0, t: 0 }), 1);
        assert_eq!(e1.groups().keys().filter(|c| c.s == 0).count(), 1);
        for j in 1..=6 {
            let cell = Cell {
                weight: j,
                s: 1,
                t: 2 * j as i32,
            };
            assert_eq!(e1.dim(cell), 1);
            assert_eq!(cell.bidegree().total(), 2 * j as i32 - 1);
        }
        // compositions of 4 into 2 parts
        assert_eq!(e1.dim(Cell { weight: 4, s: 2, t: 8 }), 3);
    }

    #[test]
    fn spec_d1_examples() {
        let x = SphereWedge::new(vec![1]).unwrap();
        let e1 = build_e1(&x, 2, circle_box(3, 12, 6)).unwrap();
        let single = E1Word::new(vec![vec![0]]);
        assert!(d1_shuffle(&e1, &single, SignConvention::Koszul).unwrap().is_zero());
        assert!(d1_cobar(&e1, &single).unwrap().is_zero());
        let xx = E1Word::new(vec![vec![0, 0]]);
        assert!(d1_shuffle(&e1, &xx, SignConvention::Koszul).unwrap().is_zero());
        assert!(d1_cobar(&e1, &xx).unwrap().is_zero());

        let ab = SphereWedge::new(vec![1, 1]).unwrap();
        let e1 = build_e1(&ab, 2, circle_box(3, 12, 6)).unwrap();
        let w = E1Word::new(vec![vec![0, 1]]);
        let d = d1_shuffle(&e1, &w, SignConvention::Koszul).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.coefficient(&E1Word::new(vec![vec![0], vec![1]])), 1);
        assert_eq!(d.coefficient(&E1Word::new(vec![vec![1], vec![0]])), 1);
        assert_eq!(d, d1_cobar(&e1, &w).unwrap());
    }

    #[test]
    fn d1_truncation_and_membership() {
        let x = SphereWedge::new(vec![1]).unwrap();
        let e1 = build_e1(&x, 3, circle_box(2, 12, 6)).unwrap();
        let top = E1Word::new(vec![vec![0], vec![0, 0]]);
        assert_eq!(
            d1_shuffle(&e1, &top, SignConvention::Koszul),
            Err(GravityError::Truncated(2))
        );
        assert_eq!(d1_cobar(&e1, &top), Err(GravityError::Truncated(2)));
        let outside = E1Word::new(vec![vec![0; 7]]);
        assert_eq!(d1_cobar(&e1, &outside), Err(GravityError::NotInBox));
    }

    #[test]
    fn routes_agree_and_square_to_zero() {
        for (dims, p) in [(vec![1], 2), (vec![1], 3), (vec![1, 2], 3), (vec![2, 3], 5)] {
            let x = SphereWedge::new(dims.clone()).unwrap();
            let e1 = build_e1(&x, p, circle_box(4, 12, 6)).unwrap();
            let cmp = compare_d1(&e1);
            assert!(cmp.equal(), "{dims:?} p={p}: {cmp:?}");
            assert!(verify_d1_squared(&e1, D1Route::Cobar).holds());
            assert_eq!(e1.cross_weight_terms(D1Route::Cobar), 0);
        }
    }

    #[test]
    fn unsigned_shuffle_is_detected() {
        let x = SphereWedge::new(vec![1, 2]).unwrap();
        let e1 = build_e1(&x, 3, circle_box(4, 15, 6)).unwrap();
        let cmp = compare_d1_routes(&e1, D1Route::Shuffle(SignConvention::Unsigned), D1Route::Cobar);
        let w = cmp.witness.expect("unsigned shuffles must differ");
        assert!(w.weight() >= 2);
    }

    #[test]
    fn e2_of_circle_mod_two() {
        let x = SphereWedge::new(vec![1]).unwrap();
        let e1 = build_e1(&x, 2, circle_box(9, 18, 9)).unwrap();
        let page = compute_e2(&e1).unwrap();
        let dims = page.e2_total_degree_dims();
        let got: Vec<usize> = (0..8).map(|n| dims.get(&n).copied().unwrap_or(0)).collect();
        assert_eq!(got, vec![1, 1, 1, 2, 2, 2, 3, 4]);
        let (a, b) = page.euler();
        assert_eq!(a, b);
    }

    #[test]
    fn weight_one_column_is_untouched() {
        let x = SphereWedge::new(vec![1, 2]).unwrap();
        let e1 = build_e1(&x, 3, circle_box(3, 10, 4)).unwrap();
        let page = compute_e2(&e1).unwrap();
        for (cell, d) in page.e1.iter().filter(|(c, _)| c.weight == 1) {
            assert_eq!(page.e2[cell], *d);
        }
        let split = weight_split(&page);
        let total: usize = split.values().map(|p| p.e2.values().sum::<usize>()).sum();
        assert_eq!(total, page.e2.values().sum::<usize>());
        for (w, sub) in &split {
            assert!(sub.e1.keys().all(|c| c.weight == *w));
        }
    }
}
