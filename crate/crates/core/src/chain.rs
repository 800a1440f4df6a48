use std::collections::BTreeMap;

use crate::linalg::Fp;

/// A finite F_p-linear combination of basis words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain<W: Ord> {
    field: Fp,
    terms: BTreeMap<W, u32>,
}

impl<W: Ord> Chain<W> {
    pub fn zero(field: Fp) -> Self {
        Self {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn add_term(&mut self, word: W, coef: u32) {
        let coef = coef % self.field.p();
        if coef == 0 {
            return;
        }
        let f = self.field;
        let e = self.terms.entry(word).or_insert(0);
        *e = f.add(*e, coef);
        if *e == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn coefficient(&self, word: &W) -> u32 {
        self.terms.get(word).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&W, u32)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn map_words<V: Ord>(self, mut f: impl FnMut(W) -> V) -> Chain<V> {
        let mut out = Chain::zero(self.field);
        for (w, c) in self.terms {
            out.add_term(f(w), c);
        }
        out
    }
}

impl<W: Ord> IntoIterator for Chain<W> {
    type Item = (W, u32);
    type IntoIter = std::collections::btree_map::IntoIter<W, u32>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms_cancel() {
        let f = Fp::new(3).unwrap();
        let mut c = Chain::zero(f);
        c.add_term("a", 1);
        c.add_term("b", 2);
        c.add_term("a", 2);
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient(&"b"), 2);
        assert_eq!(c.coefficient(&"a"), 0);
        c.add_term("b", 4);
        assert!(c.is_zero());
    }
}
