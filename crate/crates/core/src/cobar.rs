//! One- and two-sided cobar complexes of a connected coalgebra, and Cotor as
//! their homology.
//!
//! A word `m[a_1|...|a_s]n` has bidegree `(-s, t)` with `t` the sum of the
//! internal degrees. Blocks are desuspended, so block `a` has degree `|a| - 1`
//! in the tensor product and the differential (total degree `-1`) acts as a
//! derivation:
//!
//! * block: `d[a] = Σ (-1)^{|a'|} [a'|a'']` over `Δ̄(a) = Σ a'⊗a''`,
//! * left end (`M` a right comodule): `d(m) = -Σ (-1)^{|m'|} m'[c]` over `ψ̄(m) = Σ m'⊗c`,
//! * right end (`N` a left comodule): `d(n) = Σ [c]n'` over `ψ̄(n) = Σ c⊗n'`,
//!
//! each carrying the Koszul sign of moving `d` past everything to its left.
//! Only the normalized complex (blocks in the augmentation ideal) is built.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::chain::Chain;
use crate::coalgebra::{Coalgebra, Comodule, Side};
use crate::linalg::{Fp, FpMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CobarError {
    #[error("differential of a word in filtration {0} leaves the box")]
    Truncated(usize),
    #[error("word is not in the complex")]
    NotInComplex,
    #[error("expected a {expected:?} comodule on the {position} end")]
    WrongSide { expected: Side, position: &'static str },
    #[error("comodule and coalgebra are over different fields")]
    FieldMismatch,
}

/// How signs enter the differentials. `Unsigned` drops every sign and exists
/// to check that the sign bookkeeping is load-bearing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SignConvention {
    #[default]
    Koszul,
    Unsigned,
}

impl SignConvention {
    pub(crate) fn sign(self, field: Fp, exponent: i64) -> u32 {
        match self {
            SignConvention::Koszul => field.sign(exponent),
            SignConvention::Unsigned => 1,
        }
    }
}

/// `m[a_1|...|a_s]n`. The ends are `None` in the one-sided complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CobarWord {
    pub left: Option<usize>,
    pub blocks: Vec<usize>,
    pub right: Option<usize>,
}

impl CobarWord {
    pub fn bar(blocks: Vec<usize>) -> Self {
        Self {
            left: None,
            blocks,
            right: None,
        }
    }

    pub fn s(&self) -> usize {
        self.blocks.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub s: usize,
    pub t: i32,
}

impl Bidegree {
    pub fn new(s: usize, t: i32) -> Self {
        Self { s, t }
    }

    /// `t - s`.
    pub fn total(self) -> i32 {
        self.t - self.s as i32
    }
}

/// Box of filtrations `0..=max_s` and internal degrees `0..=max_degree`,
/// optionally bounding the weight of the blocks. A block's weight is the one
/// recorded on its basis element, or 1 if none is recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CobarBox {
    pub max_s: usize,
    pub max_degree: i32,
    pub max_weight: Option<usize>,
}

impl CobarBox {
    pub fn new(max_s: usize, max_degree: i32) -> Self {
        Self {
            max_s,
            max_degree,
            max_weight: None,
        }
    }

    /// Only meaningful when `Δ̄` preserves weight, as for tensor coalgebras.
    pub fn with_max_weight(self, max_weight: usize) -> Self {
        Self {
            max_weight: Some(max_weight),
            ..self
        }
    }
}

fn block_weight(c: &Coalgebra, x: usize) -> usize {
    c.space().basis()[x].weight.map_or(1, |w| w as usize)
}

struct Ends<'a> {
    left: Option<&'a Comodule>,
    right: Option<&'a Comodule>,
}

fn internal_degree(c: &Coalgebra, ends: &Ends<'_>, w: &CobarWord) -> i32 {
    let mut t: i32 = w.blocks.iter().map(|&b| c.degree(b)).sum();
    if let (Some(m), Some(i)) = (ends.left, w.left) {
        t += m.degree(i);
    }
    if let (Some(n), Some(i)) = (ends.right, w.right) {
        t += n.degree(i);
    }
    t
}

fn differential(c: &Coalgebra, ends: &Ends<'_>, w: &CobarWord, conv: SignConvention) -> Chain<CobarWord> {
    let field = c.field();
    let mut out = Chain::zero(field);
    let left_degree = match (ends.left, w.left) {
        (Some(m), Some(i)) => m.degree(i) as i64,
        _ => 0,
    };

    if let (Some(m), Some(i)) = (ends.left, w.left) {
        for &(cx, m1, k) in m.reduced_coaction(i) {
            let mut blocks = Vec::with_capacity(w.blocks.len() + 1);
            blocks.push(cx);
            blocks.extend_from_slice(&w.blocks);
            let sign = conv.sign(field, 1 + m.degree(m1) as i64);
            out.add_term(
                CobarWord {
                    left: Some(m1),
                    blocks,
                    right: w.right,
                },
                field.mul(k, sign),
            );
        }
    }

    let mut prefix = left_degree;
    for (pos, &a) in w.blocks.iter().enumerate() {
        for &(x, y, k) in c.reduced_coproduct(a) {
            let mut blocks = Vec::with_capacity(w.blocks.len() + 1);
            blocks.extend_from_slice(&w.blocks[..pos]);
            blocks.push(x);
            blocks.push(y);
            blocks.extend_from_slice(&w.blocks[pos + 1..]);
            let sign = conv.sign(field, prefix + c.degree(x) as i64);
            out.add_term(
                CobarWord {
                    left: w.left,
                    blocks,
                    right: w.right,
                },
                field.mul(k, sign),
            );
        }
        prefix += c.degree(a) as i64 - 1;
    }

    if let (Some(n), Some(i)) = (ends.right, w.right) {
        for &(cx, n1, k) in n.reduced_coaction(i) {
            let mut blocks = w.blocks.clone();
            blocks.push(cx);
            let sign = conv.sign(field, prefix);
            out.add_term(
                CobarWord {
                    left: w.left,
                    blocks,
                    right: Some(n1),
                },
                field.mul(k, sign),
            );
        }
    }
    out
}

/// Differential of the one-sided cobar complex on a word without ends.
pub fn cobar_differential(c: &Coalgebra, w: &CobarWord, conv: SignConvention) -> Chain<CobarWord> {
    let bare = CobarWord::bar(w.blocks.clone());
    differential(
        c,
        &Ends {
            left: None,
            right: None,
        },
        &bare,
        conv,
    )
}

fn check_ends(c: &Coalgebra, m: &Comodule, n: &Comodule) -> Result<(), CobarError> {
    if m.side() != Side::Right {
        return Err(CobarError::WrongSide {
            expected: Side::Right,
            position: "left",
        });
    }
    if n.side() != Side::Left {
        return Err(CobarError::WrongSide {
            expected: Side::Left,
            position: "right",
        });
    }
    if m.space().field() != c.field() || n.space().field() != c.field() {
        return Err(CobarError::FieldMismatch);
    }
    Ok(())
}

/// Differential of the two-sided complex `Ω(M; C; N)`; `M` must be a right
/// comodule and `N` a left comodule.
pub fn two_sided_differential(
    m: &Comodule,
    c: &Coalgebra,
    n: &Comodule,
    w: &CobarWord,
    conv: SignConvention,
) -> Result<Chain<CobarWord>, CobarError> {
    check_ends(c, m, n)?;
    if w.left.is_none() || w.right.is_none() {
        return Err(CobarError::NotInComplex);
    }
    Ok(differential(
        c,
        &Ends {
            left: Some(m),
            right: Some(n),
        },
        w,
        conv,
    ))
}

/// The cobar complex restricted to a box, with every differential matrix
/// `(s, t) -> (s + 1, t)` for `s < max_s`.
#[derive(Debug, Clone)]
pub struct CobarComplex {
    field: Fp,
    bounds: CobarBox,
    groups: BTreeMap<Bidegree, Vec<CobarWord>>,
    index: HashMap<CobarWord, (Bidegree, usize)>,
    differentials: BTreeMap<Bidegree, FpMatrix>,
}

impl CobarComplex {
    pub fn one_sided(c: &Coalgebra, bounds: CobarBox, conv: SignConvention) -> Self {
        Self::build(
            c,
            &Ends {
                left: None,
                right: None,
            },
            bounds,
            conv,
        )
    }

    pub fn two_sided(
        m: &Comodule,
        c: &Coalgebra,
        n: &Comodule,
        bounds: CobarBox,
        conv: SignConvention,
    ) -> Result<Self, CobarError> {
        check_ends(c, m, n)?;
        Ok(Self::build(
            c,
            &Ends {
                left: Some(m),
                right: Some(n),
            },
            bounds,
            conv,
        ))
    }

    fn build(c: &Coalgebra, ends: &Ends<'_>, bounds: CobarBox, conv: SignConvention) -> Self {
        let field = c.field();
        if bounds.max_weight.is_some() {
            let additive = c.augmentation().all(|x| {
                c.reduced_coproduct(x)
                    .iter()
                    .all(|&(a, b, _)| block_weight(c, a) + block_weight(c, b) == block_weight(c, x))
            });
            assert!(additive, "a weight bound needs a coproduct that preserves weight");
        }
        let lefts: Vec<Option<usize>> = match ends.left {
            Some(m) => (0..m.space().len()).map(Some).collect(),
            None => vec![None],
        };
        let rights: Vec<Option<usize>> = match ends.right {
            Some(n) => (0..n.space().len()).map(Some).collect(),
            None => vec![None],
        };
        let reduced: Vec<usize> = c.augmentation().collect();

        let mut groups: BTreeMap<Bidegree, Vec<CobarWord>> = BTreeMap::new();
        for &left in &lefts {
            for &right in &rights {
                let base = CobarWord {
                    left,
                    blocks: Vec::new(),
                    right,
                };
                let t0 = internal_degree(c, ends, &base);
                if t0 > bounds.max_degree {
                    continue;
                }
                let max_weight = bounds.max_weight.unwrap_or(usize::MAX);
                let mut stack = vec![(base, t0, 0usize)];
                while let Some((w, t, weight)) = stack.pop() {
                    if w.s() < bounds.max_s {
                        for &a in &reduced {
                            let ta = t + c.degree(a);
                            let wa = weight + block_weight(c, a);
                            if ta <= bounds.max_degree && wa <= max_weight {
                                let mut next = w.clone();
                                next.blocks.push(a);
                                stack.push((next, ta, wa));
                            }
                        }
                    }
                    groups.entry(Bidegree::new(w.s(), t)).or_default().push(w);
                }
            }
        }
        for words in groups.values_mut() {
            words.sort();
        }
        let index: HashMap<CobarWord, (Bidegree, usize)> = groups
            .iter()
            .flat_map(|(&bd, words)| words.iter().enumerate().map(move |(i, w)| (w.clone(), (bd, i))))
            .collect();

        let keys: Vec<Bidegree> = groups.keys().copied().filter(|bd| bd.s < bounds.max_s).collect();
        let differentials = keys
            .par_iter()
            .map(|&bd| {
                let source = &groups[&bd];
                let target_bd = Bidegree::new(bd.s + 1, bd.t);
                let rows = groups.get(&target_bd).map_or(0, Vec::len);
                let mut matrix = FpMatrix::zeros(field, rows, source.len());
                for (col, w) in source.iter().enumerate() {
                    for (img, coef) in differential(c, ends, w, conv) {
                        let (img_bd, row) = index[&img];
                        debug_assert_eq!(img_bd, target_bd);
                        matrix.add_to(row, col, coef);
                    }
                }
                (bd, matrix)
            })
            .collect();

        Self {
            field,
            bounds,
            groups,
            index,
            differentials,
        }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn bounds(&self) -> CobarBox {
        self.bounds
    }

    pub fn groups(&self) -> &BTreeMap<Bidegree, Vec<CobarWord>> {
        &self.groups
    }

    pub fn dim(&self, bd: Bidegree) -> usize {
        self.groups.get(&bd).map_or(0, Vec::len)
    }

    /// Matrix of `d: (s, t) -> (s + 1, t)`; `None` at `s = max_s` or outside
    /// the box.
    pub fn differential(&self, bd: Bidegree) -> Option<&FpMatrix> {
        self.differentials.get(&bd)
    }

    pub fn differentials(&self) -> &BTreeMap<Bidegree, FpMatrix> {
        &self.differentials
    }

    /// Applies the stored differential to a single basis word.
    pub fn apply(&self, w: &CobarWord) -> Result<Vec<(CobarWord, u32)>, CobarError> {
        let &(bd, col) = self.index.get(w).ok_or(CobarError::NotInComplex)?;
        let matrix = self.differentials.get(&bd).ok_or(CobarError::Truncated(bd.s))?;
        let targets = self.groups.get(&Bidegree::new(bd.s + 1, bd.t));
        Ok((0..matrix.rows())
            .filter_map(|r| {
                let v = matrix.get(r, col);
                (v != 0).then(|| (targets.expect("nonempty rows")[r].clone(), v))
            })
            .collect())
    }

    /// `E^2` dimensions at every bidegree with `s < max_s`.
    pub fn homology(&self) -> BTreeMap<Bidegree, usize> {
        let ranks: HashMap<Bidegree, usize> = self.differentials.par_iter().map(|(&bd, m)| (bd, m.rank())).collect();
        self.groups
            .iter()
            .filter(|(bd, _)| bd.s < self.bounds.max_s)
            .map(|(&bd, words)| {
                let outgoing = ranks.get(&bd).copied().unwrap_or(0);
                let incoming = if bd.s == 0 {
                    0
                } else {
                    ranks.get(&Bidegree::new(bd.s - 1, bd.t)).copied().unwrap_or(0)
                };
                (bd, words.len() - outgoing - incoming)
            })
            .collect()
    }
}

/// Outcome of checking `d ∘ d = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSquaredReport<W = CobarWord> {
    pub compositions_checked: usize,
    /// A source word whose image under `d ∘ d` is nonzero.
    pub witness: Option<W>,
}

impl<W> DSquaredReport<W> {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

pub fn verify_d_squared(complex: &CobarComplex) -> DSquaredReport {
    let mut checked = 0;
    for (&bd, first) in &complex.differentials {
        let Some(second) = complex.differentials.get(&Bidegree::new(bd.s + 1, bd.t)) else {
            continue;
        };
        checked += 1;
        if let Some((_, col, _)) = second.mul(first).first_nonzero() {
            return DSquaredReport {
                compositions_checked: checked,
                witness: Some(complex.groups[&bd][col].clone()),
            };
        }
    }
    DSquaredReport {
        compositions_checked: checked,
        witness: None,
    }
}

/// Cotor dimensions of `c` with trivial coefficients on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CotorTable {
    pub bounds: CobarBox,
    /// Dimensions of the cobar complex itself.
    pub chain_dims: BTreeMap<Bidegree, usize>,
    /// Homology at every bidegree with `s < max_s`.
    pub dims: BTreeMap<Bidegree, usize>,
    /// Set when the `s = max_s` column was dropped from `dims`.
    pub truncated: bool,
}

impl CotorTable {
    /// Sum of `dims` over bidegrees of total degree `t - s = n`.
    pub fn total_degree_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (bd, &d) in &self.dims {
            *out.entry(bd.total()).or_insert(0) += d;
        }
        out
    }
}

pub fn cotor(c: &Coalgebra, max_s: usize, max_degree: i32) -> CotorTable {
    let bounds = CobarBox::new(max_s, max_degree);
    let complex = CobarComplex::one_sided(c, bounds, SignConvention::Koszul);
    let chain_dims: BTreeMap<Bidegree, usize> = complex.groups().iter().map(|(&bd, w)| (bd, w.len())).collect();
    let truncated = chain_dims.keys().any(|bd| bd.s == max_s);
    CotorTable {
        bounds,
        chain_dims,
        dims: complex.homology(),
        truncated,
    }
}

/// `Σ_s (-1)^s dim` at each internal degree `t`.
pub fn euler_by_degree(dims: &BTreeMap<Bidegree, usize>) -> BTreeMap<i32, i64> {
    let mut out = BTreeMap::new();
    for (bd, &d) in dims {
        let signed = if bd.s % 2 == 0 { d as i64 } else { -(d as i64) };
        *out.entry(bd.t).or_insert(0) += signed;
    }
    out
}
