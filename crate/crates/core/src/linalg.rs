//! Prime fields and dense matrices over them.
//!
//! Every rank in the crate goes through [`FpMatrix::rank`]: plain Gaussian
//! elimination, pivoting on the first nonzero entry of each column, so results
//! are deterministic.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
}

/// The field F_p for a small prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if !(2..=65_521).contains(&p) || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// `(-1)^e` as a field element.
    pub fn sign(self, e: i64) -> u32 {
        if e.rem_euclid(2) == 0 {
            1
        } else {
            self.p - 1
        }
    }

    /// Multiplicative inverse by Fermat. `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a % self.p != 0);
        let mut base = a as u64 % self.p as u64;
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p as u64;
            }
            base = base * base % self.p as u64;
            exp >>= 1;
        }
        acc as u32
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = self.field.add(self.data[i], v);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// First nonzero entry in column-major order, as `(row, col, value)`.
    pub fn first_nonzero(&self) -> Option<(usize, usize, u32)> {
        (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
            .map(|(r, c)| (r, c, self.get(r, c)))
            .find(|&(_, _, v)| v != 0)
    }

    /// Nonzero entries as `(row, col, value)` triplets in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if v != 0 {
                    out.push((r, c, v));
                }
            }
        }
        out
    }

    /// `self * rhs`. Panics on a shape or field mismatch.
    pub fn mul(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.field, rhs.field, "field mismatch");
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let f = self.field;
        let mut out = FpMatrix::zeros(f, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if b != 0 {
                        out.add_to(r, c, f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let f = self.field;
        let mut rows: Vec<Vec<u32>> = self.data.chunks(self.cols).map(<[u32]>::to_vec).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = f.inv(rows[rank][col]);
            for x in rows[rank][col..].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            for row in tail.iter_mut() {
                let factor = row[col];
                if factor == 0 {
                    continue;
                }
                for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    if y != 0 {
                        *x = f.sub(*x, f.mul(factor, y));
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<u32> = (0..self.cols).map(|c| self.get(r, c)).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_accepted_composites_rejected() {
        for p in [2, 3, 5, 7, 65_521] {
            assert!(Fp::new(p).is_ok(), "{p}");
        }
        for n in [0, 1, 4, 9, 15, 65_535] {
            assert_eq!(Fp::new(n), Err(FieldError::NotPrime(n)));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Fp::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn rank_of_small_matrices() {
        let f = Fp::new(2).unwrap();
        let mut m = FpMatrix::zeros(f, 3, 3);
        // rows 110, 011, 101 sum to zero mod 2
        for (r, c) in [(0, 0), (0, 1), (1, 1), (1, 2), (2, 0), (2, 2)] {
            m.set(r, c, 1);
        }
        assert_eq!(m.rank(), 2);

        let f3 = Fp::new(3).unwrap();
        let mut m3 = FpMatrix::zeros(f3, 3, 3);
        for (r, c) in [(0, 0), (0, 1), (1, 1), (1, 2), (2, 0), (2, 2)] {
            m3.set(r, c, 1);
        }
        assert_eq!(m3.rank(), 3);
        assert_eq!(FpMatrix::zeros(f3, 0, 4).rank(), 0);
        assert_eq!(FpMatrix::zeros(f3, 4, 2).nullity(), 2);
    }

    #[test]
    fn mul_identity() {
        let f = Fp::new(5).unwrap();
        let mut id = FpMatrix::zeros(f, 2, 2);
        id.set(0, 0, 1);
        id.set(1, 1, 1);
        let mut a = FpMatrix::zeros(f, 2, 2);
        a.set(0, 1, 3);
        a.set(1, 0, 4);
        assert_eq!(id.mul(&a), a);
        assert!(a.mul(&FpMatrix::zeros(f, 2, 3)).is_zero());
    }
}
