//! q-ary strings that avoid a run of `r` copies of a symbol `b`.
//!
//! These are the message sets of the rubber strategies. Counting is exact;
//! ranking is lexicographic.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::channel::{Alphabet, Symbol};
use crate::error::{Error, Result};

/// Forbids `r` consecutive copies of `b` in strings over a q-ary alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RunConstraint {
    alphabet: Alphabet,
    b: Symbol,
    r: usize,
}

impl RunConstraint {
    pub fn new(q: usize, b: Symbol, r: usize) -> Result<Self> {
        let alphabet = Alphabet::new(q)?;
        if !alphabet.contains(b) {
            return Err(Error::InvalidParameters(format!(
                "forbidden symbol {b} outside alphabet of size {q}"
            )));
        }
        if r == 0 {
            return Err(Error::InvalidParameters("run length must be >= 1".into()));
        }
        Ok(RunConstraint { alphabet, b, r })
    }

    pub fn q(&self) -> usize {
        self.alphabet.size()
    }

    pub fn symbol(&self) -> Symbol {
        self.b
    }

    pub fn run(&self) -> usize {
        self.r
    }

    /// Trailing-run state after appending `a` to a word in state `s`;
    /// `None` if that would complete the forbidden run.
    fn advance(&self, s: usize, a: Symbol) -> Option<usize> {
        if a != self.b {
            Some(0)
        } else if s + 1 < self.r {
            Some(s + 1)
        } else {
            None
        }
    }

    pub fn is_valid(&self, w: &[Symbol]) -> bool {
        let mut s = 0;
        for &a in w {
            if !self.alphabet.contains(a) {
                return false;
            }
            match self.advance(s, a) {
                Some(n) => s = n,
                None => return false,
            }
        }
        true
    }
}

/// `c[k][s]`: number of valid strings of length `k` ending with exactly `s`
/// copies of `b`, for `0 <= s < r`.
#[derive(Clone, Debug)]
pub struct CountTable {
    constraint: RunConstraint,
    rows: Vec<Vec<BigUint>>,
}

impl CountTable {
    pub fn new(constraint: RunConstraint, max_len: usize) -> Self {
        let r = constraint.r;
        let others = BigUint::from(constraint.q() - 1);
        let mut first = vec![BigUint::zero(); r];
        first[0] = BigUint::one();
        let mut rows = vec![first];
        for k in 0..max_len {
            let prev = &rows[k];
            let mut next = vec![BigUint::zero(); r];
            let total: BigUint = prev.iter().sum();
            next[0] = &total * &others;
            next[1..].clone_from_slice(&prev[..r - 1]);
            rows.push(next);
        }
        CountTable { constraint, rows }
    }

    pub fn constraint(&self) -> RunConstraint {
        self.constraint
    }

    pub fn max_len(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn ending_with(&self, len: usize, s: usize) -> &BigUint {
        &self.rows[len][s]
    }

    pub fn count(&self, len: usize) -> BigUint {
        self.rows[len].iter().sum()
    }
}

/// Exact number of length-`len` strings satisfying the constraint.
pub fn count(constraint: RunConstraint, len: usize) -> BigUint {
    CountTable::new(constraint, len).count(len)
}

/// Number of valid completions of length `rem` from trailing-run state `s`.
/// `table[rem][s]`.
fn completions(constraint: RunConstraint, len: usize) -> Vec<Vec<BigUint>> {
    let r = constraint.r;
    let others = BigUint::from(constraint.q() - 1);
    let mut table = vec![vec![BigUint::one(); r]];
    for rem in 1..=len {
        let prev = &table[rem - 1];
        let row: Vec<BigUint> = (0..r)
            .map(|s| {
                let mut v = &prev[0] * &others;
                if s + 1 < r {
                    v += &prev[s + 1];
                }
                v
            })
            .collect();
        table.push(row);
    }
    table
}

/// Lexicographic bijection between `0..count(len)` and valid words.
#[derive(Clone, Debug)]
pub struct Codebook {
    constraint: RunConstraint,
    len: usize,
    completions: Vec<Vec<BigUint>>,
}

impl Codebook {
    pub fn new(constraint: RunConstraint, len: usize) -> Self {
        Codebook {
            constraint,
            len,
            completions: completions(constraint, len),
        }
    }

    pub fn constraint(&self) -> RunConstraint {
        self.constraint
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.size().is_zero()
    }

    pub fn size(&self) -> BigUint {
        self.completions[self.len][0].clone()
    }

    pub fn rank(&self, w: &[Symbol]) -> Result<BigUint> {
        if w.len() != self.len || !self.constraint.is_valid(w) {
            return Err(Error::ConstraintViolation(w.to_vec()));
        }
        let mut idx = BigUint::zero();
        let mut s = 0;
        for (pos, &a) in w.iter().enumerate() {
            let rem = self.len - pos - 1;
            for smaller in 0..a {
                if let Some(ns) = self.constraint.advance(s, smaller) {
                    idx += &self.completions[rem][ns];
                }
            }
            s = self.constraint.advance(s, a).expect("validated above");
        }
        Ok(idx)
    }

    pub fn unrank(&self, idx: &BigUint) -> Result<Vec<Symbol>> {
        let size = self.size();
        if idx >= &size {
            return Err(Error::IndexOutOfRange {
                index: idx.clone(),
                count: size,
            });
        }
        let mut idx = idx.clone();
        let mut s = 0;
        let mut w = Vec::with_capacity(self.len);
        for pos in 0..self.len {
            let rem = self.len - pos - 1;
            for a in self.constraint.alphabet.symbols() {
                let Some(ns) = self.constraint.advance(s, a) else {
                    continue;
                };
                let c = &self.completions[rem][ns];
                if &idx < c {
                    w.push(a);
                    s = ns;
                    break;
                }
                idx -= c;
            }
        }
        Ok(w)
    }
}

pub fn rank(constraint: RunConstraint, w: &[Symbol]) -> Result<BigUint> {
    Codebook::new(constraint, w.len()).rank(w)
}

pub fn unrank(constraint: RunConstraint, len: usize, idx: &BigUint) -> Result<Vec<Symbol>> {
    Codebook::new(constraint, len).unrank(idx)
}

/// Natural logarithm of a big integer, accurate for values beyond `f64`.
pub fn ln_big(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `count(len)^(1/len)`; tends to the largest root `z_r` as `len` grows.
pub fn growth_rate_estimate(constraint: RunConstraint, len: usize) -> Result<f64> {
    if len == 0 {
        return Err(Error::InvalidParameters("length must be >= 1".into()));
    }
    Ok((ln_big(&count(constraint, len)) / len as f64).exp())
}
