//! The truncated Fock-space operator `L_{T,h}` and its eigenpolynomials.
//!
//! In the orthonormal basis `z^α/√α!` the operator has entries
//! `L[row β, col α] = m(α, β)/√(α!β!)`, so `⟨Lp, q⟩_Fock = ⟨p(T)h, q(T)h⟩`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg;
use crate::multiindex::IndexSet;
use crate::polynomial::{fock_inner, Polynomial};
use crate::tuples::{CyclicTuple, MomentTable};
use crate::{CMat, CVec, Cx, ZERO};

#[derive(Clone, Debug)]
pub struct FockOperator {
    index: Arc<IndexSet>,
    matrix: CMat,
}

impl FockOperator {
    pub fn n(&self) -> usize {
        self.index.n()
    }

    pub fn degree(&self) -> usize {
        self.index.degree()
    }

    pub fn index(&self) -> &Arc<IndexSet> {
        &self.index
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// `Σ |L_{αβ}|²`.
    pub fn hs_norm_sqr(&self) -> f64 {
        self.matrix.norm_squared()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.matrix).values
    }
}

pub fn build_l(mt: &MomentTable) -> FockOperator {
    let index = mt.index().clone();
    let sq: Vec<f64> = index.indices().iter().map(|a| a.factorial().sqrt()).collect();
    let m = mt.matrix();
    let matrix = CMat::from_fn(index.len(), index.len(), |b, a| m[(b, a)] / (sq[a] * sq[b]));
    FockOperator { index, matrix }
}

/// Upper bound `e^{2Σ‖T_i‖²} ‖h‖⁴` on `‖L‖²_HS`.
pub fn hs_bound(t: &CyclicTuple) -> f64 {
    let s: f64 = t.operator_norms().iter().map(|x| x * x).sum();
    let h2 = t.norm(t.h()).powi(2);
    (2.0 * s).exp() * h2 * h2
}

/// `L = Σ_j f_j ⊗ f_j` with `‖f_j‖²_Fock = λ_j`, sorted by decreasing `λ_j`.
#[derive(Clone, Debug)]
pub struct EigenPolyDecomposition {
    pub n: usize,
    pub degree: usize,
    pub eigenvalues: Vec<f64>,
    pub polynomials: Vec<Polynomial>,
}

impl EigenPolyDecomposition {
    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ_j f_j(z) conj(f_j(w))`, the degree-`d` Taylor truncation of `F(z, w)`.
    pub fn kernel(&self, z: &[Cx], w: &[Cx]) -> Cx {
        self.polynomials
            .iter()
            .map(|f| f.eval(z) * f.eval(w).conj())
            .sum()
    }
}

/// Rotates `u` so its largest-magnitude entry is real and positive.
pub(crate) fn fix_phase(u: &mut CVec) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (k, c) in u.iter().enumerate() {
        // Prefer the earliest index among (numerically) tied entries.
        if c.norm() > best_abs * (1.0 + 1e-12) {
            best_abs = c.norm();
            best = k;
        }
    }
    if best_abs > 0.0 {
        let phase = u[best].conj() / best_abs;
        *u *= phase;
    }
}

pub fn spectral_decompose(l: &FockOperator, rank_tol: f64) -> Result<EigenPolyDecomposition> {
    let eig = linalg::hermitian_eigen(&l.matrix);
    let lmax = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let lmin = eig.values.last().copied().unwrap_or(0.0);
    if lmin < -rank_tol * lmax.max(f64::MIN_POSITIVE) {
        return Err(Error::NotPositive {
            min_eigenvalue: lmin,
        });
    }
    let sq: Vec<f64> = l.index.indices().iter().map(|a| a.factorial().sqrt()).collect();
    let mut eigenvalues = Vec::new();
    let mut polynomials = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam <= rank_tol * lmax || lam <= 0.0 {
            break;
        }
        let mut u: CVec = eig.vectors.column(k).into_owned();
        fix_phase(&mut u);
        let s = lam.sqrt();
        let f = Polynomial::from_terms(
            l.n(),
            l.index
                .indices()
                .iter()
                .zip(u.iter())
                .filter(|(_, c)| **c != ZERO)
                .map(|(a, c)| (a.clone(), c * (s / sq[l.index.position(a).unwrap()]))),
        );
        eigenvalues.push(lam);
        polynomials.push(f);
    }
    Ok(EigenPolyDecomposition {
        n: l.n(),
        degree: l.degree(),
        eigenvalues,
        polynomials,
    })
}

/// Residuals of the orthonormal-basis and intertwining identities for the
/// model built from an eigenpolynomial decomposition.
#[derive(Clone, Debug)]
pub struct ModelBasisReport {
    pub rank: usize,
    pub dim: usize,
    /// `max_{j,k} |⟨v_j, v_k⟩ − δ_jk|` with `v_j = f_j(T)h/λ_j`.
    pub gram_residual: f64,
    /// `max_{i,j,k} |⟨T_i* v_j, v_k⟩ − ⟨∂_i f_j, f_k⟩_Fock/λ_k|`.
    pub intertwining_residual: f64,
    /// Normalised Gram matrix `⟨v_j, v_k⟩` (row `k`, column `j`).
    pub gram: CMat,
}

impl ModelBasisReport {
    pub fn passes(&self, gram_tol: f64, intertwining_tol: f64) -> bool {
        self.gram_residual <= gram_tol && self.intertwining_residual <= intertwining_tol
    }
}

/// Checks that `{f_j(T)h/λ_j}` is an orthonormal basis of the space and that
/// `T_i*` acts on it as `∂_i` acts on the `f_j`.
///
/// Fails with [`Error::IncompleteBasis`] when the decomposition has fewer
/// vectors than the space has dimensions (h not cyclic, or d too small).
pub fn model_basis_check(t: &CyclicTuple, dec: &EigenPolyDecomposition) -> Result<ModelBasisReport> {
    let rank = dec.rank();
    let dim = t.dim();
    if rank != dim {
        return Err(Error::IncompleteBasis { rank, dim });
    }
    if dec.n != t.n() {
        return Err(Error::DimensionMismatch(format!(
            "decomposition in {} variables, tuple has {}",
            dec.n,
            t.n()
        )));
    }
    let vs: Vec<CVec> = dec
        .polynomials
        .iter()
        .zip(&dec.eigenvalues)
        .map(|(f, lam)| t.apply_polynomial(f) / Cx::new(*lam, 0.0))
        .collect();
    let gram = CMat::from_fn(rank, rank, |k, j| t.inner(&vs[j], &vs[k]));
    let mut gram_residual: f64 = 0.0;
    for k in 0..rank {
        for j in 0..rank {
            let target = if j == k { 1.0 } else { 0.0 };
            gram_residual = gram_residual.max((gram[(k, j)] - target).norm());
        }
    }
    let mut intertwining_residual: f64 = 0.0;
    for (i, ti) in t.matrices().iter().enumerate() {
        let tv: Vec<CVec> = vs.iter().map(|v| ti * v).collect();
        for (j, fj) in dec.polynomials.iter().enumerate() {
            let dfj = fj.derivative(i);
            for (k, fk) in dec.polynomials.iter().enumerate() {
                // ⟨T_i* v_j, v_k⟩ = ⟨v_j, T_i v_k⟩.
                let lhs = t.inner(&vs[j], &tv[k]);
                let rhs = fock_inner(&dfj, fk) / dec.eigenvalues[k];
                intertwining_residual = intertwining_residual.max((lhs - rhs).norm());
            }
        }
    }
    Ok(ModelBasisReport {
        rank,
        dim,
        gram_residual,
        intertwining_residual,
        gram,
    })
}

/// Leading eigenvalues of the truncated `L` at degree `d` and `d + 2`.
#[derive(Clone, Debug)]
pub struct SpectrumDrift {
    pub at_d: Vec<f64>,
    pub at_d_plus_2: Vec<f64>,
    pub max_change: f64,
}

pub fn spectrum_drift(t: &CyclicTuple, d: usize, count: usize) -> SpectrumDrift {
    let lo = build_l(&t.moments(d)).eigenvalues();
    let hi = build_l(&t.moments(d + 2)).eigenvalues();
    let k = count.min(lo.len()).min(hi.len());
    let at_d: Vec<f64> = lo[..k].to_vec();
    let at_d_plus_2: Vec<f64> = hi[..k].to_vec();
    let max_change = at_d
        .iter()
        .zip(&at_d_plus_2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    SpectrumDrift {
        at_d,
        at_d_plus_2,
        max_change,
    }
}
