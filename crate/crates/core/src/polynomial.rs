//! Sparse complex polynomials in `n` variables, monomial basis `z^α`.

use std::collections::BTreeMap;
use std::fmt;

use crate::multiindex::MultiIndex;
use crate::{CMat, CVec, Cx, ZERO};

#[derive(Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    coeffs: BTreeMap<MultiIndex, Cx>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Cx) -> Self {
        Self::monomial(MultiIndex::zeros(n), c)
    }

    pub fn monomial(alpha: MultiIndex, c: Cx) -> Self {
        let mut p = Self::zero(alpha.len());
        p.add_term(alpha, c);
        p
    }

    /// The coordinate function `z_i`.
    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(n, i), Cx::new(1.0, 0.0))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Cx)>) -> Self {
        let mut p = Self::zero(n);
        for (a, c) in terms {
            assert_eq!(a.len(), n, "term has wrong number of variables");
            p.add_term(a, c);
        }
        p
    }

    /// Real-coefficient convenience constructor from `(exponents, coefficient)` pairs.
    pub fn from_real(n: usize, terms: &[(&[u32], f64)]) -> Self {
        Self::from_terms(
            n,
            terms
                .iter()
                .map(|(e, c)| (MultiIndex::new(e.to_vec()), Cx::new(*c, 0.0))),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Cx) {
        let entry = self.coeffs.entry(alpha).or_insert(ZERO);
        *entry += c;
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Cx {
        self.coeffs.get(alpha).copied().unwrap_or(ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Cx)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| *c == ZERO)
    }

    /// Highest total degree with a nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|(_, c)| **c != ZERO)
            .map(|(a, _)| a.degree())
            .max()
            .unwrap_or(0)
    }

    /// Drops coefficients with `|c| ≤ rel_tol · max|c|`.
    pub fn pruned(&self, rel_tol: f64) -> Self {
        let max = self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max);
        Polynomial {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.norm() > rel_tol * max)
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    pub fn scale(&self, s: Cx) -> Self {
        Polynomial {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(a, c)| (a.clone(), c * s)).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (a, c) in other.terms() {
            out.add_term(a.clone(), *c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Polynomial::zero(self.n);
        for (a, c) in self.terms() {
            for (b, d) in other.terms() {
                out.add_term(a + b, c * d);
            }
        }
        out
    }

    /// `∂p/∂z_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Polynomial::zero(self.n);
        for (a, c) in self.terms() {
            if let Some(lower) = a.with_decrement(i) {
                out.add_term(lower, c * a.as_slice()[i] as f64);
            }
        }
        out
    }

    /// Coefficient-conjugate `p*(z) = Σ conj(c_α) z^α`.
    pub fn conj_coeffs(&self) -> Self {
        Polynomial {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(a, c)| (a.clone(), c.conj())).collect(),
        }
    }

    /// `p(−z)`.
    pub fn reflected(&self) -> Self {
        Polynomial {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, c)| {
                    let sign = if a.degree() % 2 == 0 { 1.0 } else { -1.0 };
                    (a.clone(), c * sign)
                })
                .collect(),
        }
    }

    pub fn eval(&self, z: &[Cx]) -> Cx {
        self.terms().map(|(a, c)| c * a.monomial(z)).sum()
    }

    /// `p(T) v` for commuting matrices `T`.
    pub fn apply(&self, matrices: &[CMat], v: &CVec) -> CVec {
        assert_eq!(matrices.len(), self.n);
        let mut out = CVec::zeros(v.len());
        for (a, c) in self.terms() {
            let mut w = v.clone();
            for (i, &e) in a.as_slice().iter().enumerate() {
                for _ in 0..e {
                    w = &matrices[i] * w;
                }
            }
            out += w * *c;
        }
        out
    }

    /// `p(T)` as a matrix.
    pub fn eval_matrix(&self, matrices: &[CMat]) -> CMat {
        assert_eq!(matrices.len(), self.n);
        let m = matrices.first().map(|t| t.nrows()).unwrap_or(0);
        let mut out = CMat::zeros(m, m);
        for (a, c) in self.terms() {
            let mut w = CMat::identity(m, m);
            for (i, &e) in a.as_slice().iter().enumerate() {
                for _ in 0..e {
                    w = &matrices[i] * w;
                }
            }
            out += w * *c;
        }
        out
    }

    /// Fock-space norm squared `Σ α! |p_α|²`.
    pub fn fock_norm_sqr(&self) -> f64 {
        fock_inner(self, self).re
    }
}

/// Fock-space inner product `⟨p, q⟩ = Σ_α α! p_α conj(q_α)`.
pub fn fock_inner(p: &Polynomial, q: &Polynomial) -> Cx {
    assert_eq!(p.n(), q.n(), "polynomials in different numbers of variables");
    p.terms()
        .map(|(a, c)| c * q.coeff(a).conj() * a.factorial())
        .sum()
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, c) in self.terms().filter(|(_, c)| **c != ZERO) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            for (i, &e) in a.as_slice().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·z{}", i + 1)?,
                    _ => write!(f, "·z{}^{}", i + 1, e)?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
