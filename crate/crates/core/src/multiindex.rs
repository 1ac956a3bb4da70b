//! Multi-indices `α ∈ ℕ₀ⁿ` and the graded lexicographic basis order.
//!
//! Every monomial-indexed table in the crate (moment tables, Fock matrices,
//! coefficient tables) is laid out in the order produced by [`enumerate_upto`]:
//! by total degree first, then lexicographically with larger leading
//! exponents first, so `(1,0)` precedes `(0,1)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::Cx;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit index `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// `α!` as an exact integer; fails once the product leaves `u64`.
    pub fn factorial_exact(&self) -> Result<u64> {
        let mut acc: u64 = 1;
        for &a in &self.0 {
            for k in 2..=a as u64 {
                acc = acc
                    .checked_mul(k)
                    .ok_or_else(|| Error::Overflow(format!("{self:?}!")))?;
            }
        }
        Ok(acc)
    }

    /// `α! = Π_i α_i!` in floating point.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial_f64(a)).product()
    }

    /// `Π_i C(α_i, γ_i)`, zero unless `γ ≤ α` componentwise.
    pub fn binomial(&self, gamma: &MultiIndex) -> f64 {
        assert_eq!(self.len(), gamma.len(), "multi-index length mismatch");
        let mut acc = 1.0;
        for (&a, &g) in self.0.iter().zip(&gamma.0) {
            if g > a {
                return 0.0;
            }
            acc *= binomial_f64(a, g);
        }
        acc
    }

    /// Componentwise `γ ≤ α`.
    pub fn dominates(&self, gamma: &MultiIndex) -> bool {
        self.0.iter().zip(&gamma.0).all(|(a, g)| g <= a)
    }

    /// `α − γ`, or `None` when `γ ≰ α`.
    pub fn checked_sub(&self, gamma: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&gamma.0)
            .map(|(&a, &g)| a.checked_sub(g))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn with_increment(&self, i: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e[i] += 1;
        MultiIndex(e)
    }

    /// `α − e_i` if `α_i > 0`.
    pub fn with_decrement(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(MultiIndex(e))
    }

    /// First coordinate with a nonzero exponent.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&a| a > 0)
    }

    /// `z^α` at a point.
    pub fn monomial(&self, z: &[Cx]) -> Cx {
        assert_eq!(self.len(), z.len(), "point has wrong dimension");
        self.0
            .iter()
            .zip(z)
            .fold(Cx::new(1.0, 0.0), |acc, (&a, &zi)| acc * zi.powu(a))
    }

    /// `α!/(α−γ)!`, the coefficient produced by `∂^γ z^α = α!/(α−γ)! z^{α−γ}`.
    pub fn falling_factorial(&self, gamma: &MultiIndex) -> f64 {
        let mut acc = 1.0;
        for (&a, &g) in self.0.iter().zip(&gamma.0) {
            if g > a {
                return 0.0;
            }
            for k in (a - g + 1)..=a {
                acc *= k as f64;
            }
        }
        acc
    }

    /// Every `γ ≤ α`.
    pub fn lower_set(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.len())];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for prefix in &out {
                for g in 0..=a {
                    let mut p = prefix.clone();
                    p.push(g);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiIndex).collect()
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;

    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        assert_eq!(self.len(), rhs.len(), "multi-index length mismatch");
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub(crate) fn factorial_f64(k: u32) -> f64 {
    (2..=k).fold(1.0, |acc, j| acc * j as f64)
}

fn binomial_f64(a: u32, g: u32) -> f64 {
    let g = g.min(a - g);
    (0..g).fold(1.0, |acc, j| acc * (a - j) as f64 / (j + 1) as f64).round()
}

/// Number of multi-indices of length `n` with `|α| ≤ d`, i.e. `C(n+d, d)`.
pub fn count_upto(n: usize, d: usize) -> usize {
    let mut acc: usize = 1;
    for j in 1..=d {
        acc = acc * (n + j) / j;
    }
    acc
}

/// All `α ∈ ℕ₀ⁿ` with `|α| ≤ d` in graded lexicographic order.
pub fn enumerate_upto(n: usize, d: usize) -> Vec<MultiIndex> {
    assert!(n >= 1, "need at least one variable");
    let mut out = Vec::with_capacity(count_upto(n, d));
    for k in 0..=d {
        let mut buf = vec![0u32; n];
        fill_degree(&mut buf, 0, k as u32, &mut out);
    }
    out
}

/// All `α` with `|α| = k` in lexicographic order, largest leading exponent first.
pub fn enumerate_degree(n: usize, k: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut buf = vec![0u32; n];
    fill_degree(&mut buf, 0, k as u32, &mut out);
    out
}

fn fill_degree(buf: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(MultiIndex(buf.to_vec()));
        return;
    }
    for a in (0..=remaining).rev() {
        buf[pos] = a;
        fill_degree(buf, pos + 1, remaining - a, out);
    }
    buf[pos] = 0;
}

/// Graded-lex basis of degree ≤ `d` with reverse lookup.
#[derive(Debug)]
pub struct IndexSet {
    n: usize,
    degree: usize,
    indices: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
}

impl IndexSet {
    pub fn new(n: usize, degree: usize) -> Arc<Self> {
        let indices = enumerate_upto(n, degree);
        let position = indices
            .iter()
            .enumerate()
            .map(|(k, a)| (a.clone(), k))
            .collect();
        Arc::new(IndexSet {
            n,
            degree,
            indices,
            position,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn get(&self, k: usize) -> &MultiIndex {
        &self.indices[k]
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.position.get(alpha).copied()
    }

    /// Number of leading entries with degree ≤ `d`.
    pub fn prefix_len(&self, d: usize) -> usize {
        count_upto(self.n, d.min(self.degree))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn enumerate_small_cases() {
        assert_eq!(enumerate_upto(1, 2), vec![mi(&[0]), mi(&[1]), mi(&[2])]);
        assert_eq!(
            enumerate_upto(2, 1),
            vec![mi(&[0, 0]), mi(&[1, 0]), mi(&[0, 1])]
        );
        assert_eq!(enumerate_upto(3, 2).len(), 10);
        assert_eq!(count_upto(3, 2), 10);
        assert_eq!(count_upto(2, 10), 66);
    }

    #[test]
    fn factorials() {
        assert_eq!(mi(&[0, 0, 0]).factorial_exact().unwrap(), 1);
        assert_eq!(mi(&[2, 1]).factorial_exact().unwrap(), 2);
        assert_eq!(mi(&[3, 3]).factorial_exact().unwrap(), 36);
        assert_eq!(mi(&[3, 3]).factorial(), 36.0);
        assert_eq!(mi(&[20]).factorial_exact().unwrap(), 2_432_902_008_176_640_000);
        assert!(matches!(mi(&[21]).factorial_exact(), Err(Error::Overflow(_))));
        assert!(mi(&[21]).factorial() > 5.1e19);
    }

    #[test]
    fn binomials() {
        assert_eq!(mi(&[2, 2]).binomial(&mi(&[1, 1])), 4.0);
        assert_eq!(mi(&[1, 0]).binomial(&mi(&[0, 1])), 0.0);
        assert_eq!(mi(&[4]).binomial(&mi(&[2])), 6.0);
    }

    #[test]
    fn falling_factorial_matches_derivative() {
        // ∂² z³ = 6 z
        assert_eq!(mi(&[3]).falling_factorial(&mi(&[2])), 6.0);
        assert_eq!(mi(&[1, 2]).falling_factorial(&mi(&[1, 1])), 2.0);
        assert_eq!(mi(&[1]).falling_factorial(&mi(&[2])), 0.0);
    }

    proptest! {
        #[test]
        fn enumeration_is_prefix(n in 1usize..4, d in 0usize..6) {
            let small = enumerate_upto(n, d);
            let big = enumerate_upto(n, d + 1);
            prop_assert_eq!(&big[..small.len()], &small[..]);
            prop_assert_eq!(small.len(), count_upto(n, d));
        }

        #[test]
        fn binomial_row_sums(a in proptest::collection::vec(0u32..7, 1..4)) {
            let alpha = MultiIndex::new(a.clone());
            let total: f64 = alpha.lower_set().iter().map(|g| alpha.binomial(g)).sum();
            let expected: f64 = a.iter().map(|&k| 2f64.powi(k as i32)).product();
            prop_assert_eq!(total, expected);
        }
    }
}
