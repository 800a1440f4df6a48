//! Connected coalgebras and comodules over F_p, stored through their reduced
//! structure maps.
//!
//! A [`Coalgebra`] has a unit basis element in degree 0 and every other basis
//! element in positive degree. Only the reduced coproduct
//! `Δ̄(x) = Δ(x) - 1⊗x - x⊗1` is stored, so the counit axioms hold by
//! construction once the table never mentions the unit.

use std::collections::{BTreeMap, HashMap};

use crate::graded::{AlgebraError, BasisElement, GradedSpace};
use crate::linalg::Fp;

/// `(left, right, coefficient)` with basis indices.
pub type Term = (usize, usize, u32);

/// Reduced coproduct by element name: `x -> [(a, b, coef)]`.
pub type CoproductTable = BTreeMap<String, Vec<(String, String, i64)>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coalgebra {
    space: GradedSpace,
    unit: usize,
    reduced: Vec<Vec<Term>>,
}

impl Coalgebra {
    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn field(&self) -> Fp {
        self.space.field()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, x: usize) -> i32 {
        self.space.degree(x)
    }

    /// Basis indices of the augmentation ideal, in basis order.
    pub fn augmentation(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.space.len()).filter(move |&i| i != self.unit)
    }

    pub fn reduced_coproduct(&self, x: usize) -> &[Term] {
        &self.reduced[x]
    }

    /// Renders `Δ̄` back into a name-keyed table.
    pub fn to_table(&self) -> CoproductTable {
        let mut table = CoproductTable::new();
        for x in self.augmentation() {
            let terms = &self.reduced[x];
            if terms.is_empty() {
                continue;
            }
            table.insert(
                self.space.name(x).to_owned(),
                terms
                    .iter()
                    .map(|&(a, b, c)| (self.space.name(a).to_owned(), self.space.name(b).to_owned(), c as i64))
                    .collect(),
            );
        }
        table
    }
}

fn combine(field: Fp, terms: impl IntoIterator<Item = ((usize, usize), u32)>) -> Vec<Term> {
    let mut acc: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for (key, c) in terms {
        let e = acc.entry(key).or_insert(0);
        *e = field.add(*e, c);
    }
    acc.into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|((a, b), c)| (a, b, c))
        .collect()
}

fn check_connected(space: &GradedSpace, unit: usize) -> Result<(), AlgebraError> {
    if space.degree(unit) != 0 {
        return Err(AlgebraError::NotConnected(space.name(unit).to_owned()));
    }
    if let Some(i) = (0..space.len()).find(|&i| i != unit && space.degree(i) <= 0) {
        return Err(AlgebraError::NotConnected(space.name(i).to_owned()));
    }
    Ok(())
}

/// Builds and validates a coalgebra from a reduced-coproduct table.
///
/// Checks that every name is known, no term involves the unit, degrees add,
/// and that `(Δ̄⊗1)Δ̄ = (1⊗Δ̄)Δ̄` on every basis element.
pub fn coalgebra_from_table(space: GradedSpace, unit: &str, table: &CoproductTable) -> Result<Coalgebra, AlgebraError> {
    let field = space.field();
    let unit = space.lookup(unit)?;
    check_connected(&space, unit)?;
    let mut reduced = vec![Vec::new(); space.len()];
    for (name, terms) in table {
        let x = space.lookup(name)?;
        if x == unit && !terms.is_empty() {
            return Err(AlgebraError::BadCounit(format!(
                "reduced coproduct of the unit {name:?}"
            )));
        }
        let mut parsed = Vec::with_capacity(terms.len());
        for (a, b, c) in terms {
            let (ia, ib) = (space.lookup(a)?, space.lookup(b)?);
            if ia == unit || ib == unit {
                return Err(AlgebraError::BadCounit(format!("{name:?} has term ({a}, {b})")));
            }
            if space.degree(ia) + space.degree(ib) != space.degree(x) {
                return Err(AlgebraError::DegreeMismatch(format!("{name:?} -> ({a}, {b})")));
            }
            parsed.push(((ia, ib), field.reduce(*c)));
        }
        reduced[x] = combine(field, parsed);
    }
    let coalgebra = Coalgebra { space, unit, reduced };
    check_coassociative(&coalgebra)?;
    Ok(coalgebra)
}

fn check_coassociative(c: &Coalgebra) -> Result<(), AlgebraError> {
    let field = c.field();
    for x in c.augmentation() {
        let mut diff: HashMap<(usize, usize, usize), u32> = HashMap::new();
        for &(a, b, coef) in c.reduced_coproduct(x) {
            for &(a1, a2, k) in c.reduced_coproduct(a) {
                let e = diff.entry((a1, a2, b)).or_insert(0);
                *e = field.add(*e, field.mul(coef, k));
            }
            for &(b1, b2, k) in c.reduced_coproduct(b) {
                let e = diff.entry((a, b1, b2)).or_insert(0);
                *e = field.sub(*e, field.mul(coef, k));
            }
        }
        if diff.values().any(|&v| v != 0) {
            return Err(AlgebraError::NotCoassociative(c.space.name(x).to_owned()));
        }
    }
    Ok(())
}

/// Which side a comodule's coaction puts the coalgebra factor on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `M -> C ⊗ M`
    Left,
    /// `M -> M ⊗ C`
    Right,
}

/// A comodule stored through its reduced coaction `ψ̄ = ψ - 1⊗m` (or
/// `m⊗1`). Terms are `(c, m', coef)` with `c` in the augmentation ideal,
/// regardless of side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comodule {
    space: GradedSpace,
    side: Side,
    coaction: Vec<Vec<Term>>,
}

/// Reduced coaction by element name: `m -> [(c, m', coef)]`.
pub type CoactionTable = BTreeMap<String, Vec<(String, String, i64)>>;

impl Comodule {
    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn degree(&self, m: usize) -> i32 {
        self.space.degree(m)
    }

    pub fn reduced_coaction(&self, m: usize) -> &[Term] {
        &self.coaction[m]
    }

    /// The ground field in degree 0 with zero reduced coaction.
    pub fn trivial(field: Fp, side: Side) -> Self {
        Self {
            space: GradedSpace::ground(field, "k"),
            side,
            coaction: vec![Vec::new()],
        }
    }

    /// `C` coacting on itself through its coproduct.
    pub fn regular(c: &Coalgebra, side: Side) -> Self {
        let coaction = (0..c.space.len())
            .map(|x| {
                if x == c.unit {
                    return Vec::new();
                }
                // ψ̄(x) = x against the unit, plus Δ̄(x)
                let split = c.reduced_coproduct(x).iter().map(|&(a, b, k)| match side {
                    Side::Left => ((a, b), k),
                    Side::Right => ((b, a), k),
                });
                combine(c.field(), std::iter::once(((x, c.unit), 1)).chain(split))
            })
            .collect();
        Self {
            space: c.space.clone(),
            side,
            coaction,
        }
    }

    /// The sub-comodule of `C` spanned by elements of degree `<= max_degree`.
    pub fn regular_truncated(c: &Coalgebra, side: Side, max_degree: i32) -> Self {
        let keep: Vec<usize> = (0..c.space.len()).filter(|&i| c.degree(i) <= max_degree).collect();
        let remap: HashMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let full = Self::regular(c, side);
        let basis = keep.iter().map(|&i| c.space.basis()[i].clone()).collect();
        let space = GradedSpace::new(c.field(), basis).expect("subset of a valid basis");
        let coaction = keep
            .iter()
            .map(|&i| full.coaction[i].iter().map(|&(x, m, k)| (x, remap[&m], k)).collect())
            .collect();
        Self { space, side, coaction }
    }
}

/// Builds and validates a comodule over `c` from a reduced-coaction table.
pub fn comodule_from_table(
    c: &Coalgebra,
    space: GradedSpace,
    side: Side,
    table: &CoactionTable,
) -> Result<Comodule, AlgebraError> {
    let field = c.field();
    if space.field() != field {
        return Err(crate::linalg::FieldError::PrimeMismatch(space.field().p(), field.p()).into());
    }
    let mut coaction = vec![Vec::new(); space.len()];
    for (name, terms) in table {
        let m = space.lookup(name)?;
        let mut parsed = Vec::with_capacity(terms.len());
        for (cn, mn, k) in terms {
            let (ic, im) = (c.space.lookup(cn)?, space.lookup(mn)?);
            if ic == c.unit {
                return Err(AlgebraError::BadCounit(format!("{name:?} has term ({cn}, {mn})")));
            }
            if c.degree(ic) + space.degree(im) != space.degree(m) {
                return Err(AlgebraError::DegreeMismatch(format!("{name:?} -> ({cn}, {mn})")));
            }
            parsed.push(((ic, im), field.reduce(*k)));
        }
        coaction[m] = combine(field, parsed);
    }
    let module = Comodule { space, side, coaction };
    check_comodule(c, &module)?;
    Ok(module)
}

fn check_comodule(c: &Coalgebra, module: &Comodule) -> Result<(), AlgebraError> {
    let field = c.field();
    for m in 0..module.space.len() {
        // Triples (c_outer, c_inner, m'') where c_outer is the factor farther
        // from the module element.
        let mut diff: HashMap<(usize, usize, usize), u32> = HashMap::new();
        for &(x, m1, k) in module.reduced_coaction(m) {
            for &(y, m2, k2) in module.reduced_coaction(m1) {
                let e = diff.entry((x, y, m2)).or_insert(0);
                *e = field.add(*e, field.mul(k, k2));
            }
            for &(a, b, k2) in c.reduced_coproduct(x) {
                let key = match module.side {
                    Side::Left => (a, b, m1),
                    Side::Right => (b, a, m1),
                };
                let e = diff.entry(key).or_insert(0);
                *e = field.sub(*e, field.mul(k, k2));
            }
        }
        if diff.values().any(|&v| v != 0) {
            return Err(AlgebraError::NotCoassociative(module.space.name(m).to_owned()));
        }
    }
    Ok(())
}

/// A truncated tensor coalgebra `T(V)` with primitive generators and the
/// unshuffle coproduct, together with the letters of each basis word.
#[derive(Debug, Clone)]
pub struct TensorCoalgebra {
    coalgebra: Coalgebra,
    words: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl TensorCoalgebra {
    pub fn coalgebra(&self) -> &Coalgebra {
        &self.coalgebra
    }

    pub fn into_coalgebra(self) -> Coalgebra {
        self.coalgebra
    }

    /// Generator indices of basis element `x`; empty for the unit.
    pub fn letters(&self, x: usize) -> &[usize] {
        &self.words[x]
    }

    pub fn index_of(&self, letters: &[usize]) -> Option<usize> {
        self.lookup.get(letters).copied()
    }
}

impl std::ops::Deref for TensorCoalgebra {
    type Target = Coalgebra;

    fn deref(&self) -> &Coalgebra {
        &self.coalgebra
    }
}

/// `T(V)` on words of at most `max_weight` letters and total degree at most
/// `max_degree`.
///
/// The coproduct is the multiplicative extension of `Δ(v) = v⊗1 + 1⊗v`, using
/// `(a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd`; its reduced part is the signed sum over
/// proper complementary subsequences. Every factor of an in-box word is a
/// shorter word of lower degree, so the truncation is closed under `Δ̄`.
pub fn tensor_algebra(v: &GradedSpace, max_weight: usize, max_degree: i32) -> Result<TensorCoalgebra, AlgebraError> {
    if max_weight == 0 || max_degree < 1 {
        return Err(AlgebraError::EmptyBox);
    }
    if let Some(i) = (0..v.len()).find(|&i| v.degree(i) < 1) {
        return Err(AlgebraError::NotConnected(v.name(i).to_owned()));
    }
    let field = v.field();

    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_weight {
        let mut next = Vec::new();
        for w in &frontier {
            let deg: i32 = w.iter().map(|&l| v.degree(l)).sum();
            for l in 0..v.len() {
                if deg + v.degree(l) <= max_degree {
                    let mut nw = w.clone();
                    nw.push(l);
                    next.push(nw);
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let word_degree = |w: &[usize]| -> i32 { w.iter().map(|&l| v.degree(l)).sum() };
    words[1..].sort_by_key(|w| (word_degree(w), w.len(), w.clone()));

    let name_of = |w: &[usize]| -> String {
        if w.is_empty() {
            "1".to_owned()
        } else {
            w.iter().map(|&l| v.name(l)).collect::<Vec<_>>().join("*")
        }
    };
    let basis = words
        .iter()
        .map(|w| BasisElement::new(name_of(w), word_degree(w)).with_weight(w.len() as u32))
        .collect();
    let space = GradedSpace::new(field, basis)?;
    let lookup: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();

    let reduced = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                return Vec::new();
            }
            let full = full_coproduct(field, v, w);
            combine(
                field,
                full.into_iter()
                    .filter(|((a, b), _)| !a.is_empty() && !b.is_empty())
                    .map(|((a, b), c)| ((lookup[&a], lookup[&b]), c)),
            )
        })
        .collect();

    let coalgebra = Coalgebra {
        space,
        unit: 0,
        reduced,
    };
    Ok(TensorCoalgebra {
        coalgebra,
        words,
        lookup,
    })
}

/// The coalgebra `F_p{1, x, x^2, ..., x^top}` with
/// `Δ(x^k) = Σ C(k, i) x^i ⊗ x^{k-i}`, built and validated through its table.
/// Requires `|x|` even unless `p = 2`.
pub fn binomial_coalgebra(field: Fp, degree: i32, top: u32) -> Result<Coalgebra, AlgebraError> {
    if degree < 1 {
        return Err(AlgebraError::NotConnected("x".into()));
    }
    if top == 0 {
        return Err(AlgebraError::EmptyBox);
    }
    if degree % 2 != 0 && field.p() != 2 {
        return Err(AlgebraError::DegreeMismatch(format!(
            "odd generator in degree {degree}"
        )));
    }
    let name = |k: u32| match k {
        0 => "1".to_owned(),
        1 => "x".to_owned(),
        _ => format!("x^{k}"),
    };
    let basis = (0..=top)
        .map(|k| BasisElement::new(name(k), degree * k as i32))
        .collect();
    let space = GradedSpace::new(field, basis)?;
    // Pascal's triangle mod p
    let mut row = vec![1u32];
    let mut table = CoproductTable::new();
    for k in 1..=top {
        let mut next = vec![1u32; k as usize + 1];
        for i in 1..k as usize {
            next[i] = field.add(row[i - 1], row[i]);
        }
        row = next;
        let terms: Vec<_> = (1..k)
            .filter(|&i| row[i as usize] != 0)
            .map(|i| (name(i), name(k - i), row[i as usize] as i64))
            .collect();
        if !terms.is_empty() {
            table.insert(name(k), terms);
        }
    }
    coalgebra_from_table(space, "1", &table)
}

type WordPair = (Vec<usize>, Vec<usize>);

// Δ(v w') = (v⊗1 + 1⊗v) Δ(w'), expanded term by term.
fn full_coproduct(field: Fp, v: &GradedSpace, word: &[usize]) -> BTreeMap<WordPair, u32> {
    let mut acc: BTreeMap<WordPair, u32> = BTreeMap::new();
    acc.insert((Vec::new(), Vec::new()), 1);
    for &letter in word.iter().rev() {
        let lv = v.degree(letter) as i64;
        let mut next: BTreeMap<WordPair, u32> = BTreeMap::new();
        for ((a, b), c) in acc {
            let mut left = Vec::with_capacity(a.len() + 1);
            left.push(letter);
            left.extend_from_slice(&a);
            let e = next.entry((left, b.clone())).or_insert(0);
            *e = field.add(*e, c);

            let a_deg: i64 = a.iter().map(|&l| v.degree(l) as i64).sum();
            let mut right = Vec::with_capacity(b.len() + 1);
            right.push(letter);
            right.extend_from_slice(&b);
            let e = next.entry((a, right)).or_insert(0);
            *e = field.add(*e, field.mul(c, field.sign(lv * a_deg)));
        }
        acc = next;
    }
    acc.retain(|_, c| *c != 0);
    acc
}
