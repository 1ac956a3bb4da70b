//! Cyclic commuting tuples `(T, h)` and their moment tables.
//!
//! Matrices act on column vectors and the inner product is
//! `⟨u, v⟩ = v* G u`, linear in the first slot, where `G` is the tuple's
//! Gram weight (the identity unless a measure model supplies weights).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg;
use crate::multiindex::{IndexSet, MultiIndex};
use crate::polynomial::Polynomial;
use crate::{CMat, CVec, Cx, ZERO};

#[derive(Clone, Debug)]
pub struct CyclicTuple {
    matrices: Vec<CMat>,
    h: CVec,
    gram: CMat,
    /// Upper-triangular `R` with `G = R* R`.
    factor: CMat,
    identity_gram: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub max_commutator: f64,
    pub tol_comm: f64,
    pub commuting: bool,
    pub krylov_rank: Option<usize>,
    pub cyclic: Option<bool>,
}

impl CyclicTuple {
    pub fn new(matrices: Vec<CMat>, h: CVec) -> Result<Self> {
        let m = h.len();
        Self::build(matrices, h, linalg::identity(m), true)
    }

    pub fn with_gram(matrices: Vec<CMat>, h: CVec, gram: CMat) -> Result<Self> {
        Self::build(matrices, h, gram, false)
    }

    fn build(matrices: Vec<CMat>, h: CVec, gram: CMat, identity_gram: bool) -> Result<Self> {
        let m = h.len();
        if matrices.is_empty() {
            return Err(Error::invalid("matrices", "need at least one matrix"));
        }
        if m == 0 {
            return Err(Error::invalid("h", "empty vector"));
        }
        for (i, t) in matrices.iter().enumerate() {
            if t.nrows() != m || t.ncols() != m {
                return Err(Error::DimensionMismatch(format!(
                    "matrix {} is {}x{}, expected {m}x{m}",
                    i + 1,
                    t.nrows(),
                    t.ncols()
                )));
            }
            if t.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::invalid(format!("matrices[{i}]"), "non-finite entry"));
            }
        }
        if gram.nrows() != m || gram.ncols() != m {
            return Err(Error::DimensionMismatch(format!(
                "gram is {}x{}, expected {m}x{m}",
                gram.nrows(),
                gram.ncols()
            )));
        }
        let defect = linalg::hermitian_defect(&gram);
        if defect > 1e-12 * gram.norm().max(1.0) {
            return Err(Error::NotHermitian { defect });
        }
        if h.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("h", "non-finite entry"));
        }
        if h.iter().all(|c| *c == ZERO) {
            return Err(Error::ZeroVector);
        }
        let factor = linalg::gram_factor(&gram).ok_or(Error::NotPositiveDefinite)?;
        Ok(CyclicTuple {
            matrices,
            h,
            gram,
            factor,
            identity_gram,
        })
    }

    /// Number of operators `n`.
    pub fn n(&self) -> usize {
        self.matrices.len()
    }

    /// Space dimension `m`.
    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn h(&self) -> &CVec {
        &self.h
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    pub fn has_identity_gram(&self) -> bool {
        self.identity_gram
    }

    /// `⟨u, v⟩ = v* G u`.
    pub fn inner(&self, u: &CVec, v: &CVec) -> Cx {
        if self.identity_gram {
            v.dotc(u)
        } else {
            v.dotc(&(&self.gram * u))
        }
    }

    pub fn norm(&self, u: &CVec) -> f64 {
        self.inner(u, u).re.max(0.0).sqrt()
    }

    /// Adjoint of `A` with respect to the Gram weight: `G⁻¹ A* G`.
    pub fn adjoint_of(&self, a: &CMat) -> CMat {
        if self.identity_gram {
            return a.adjoint();
        }
        let r = &self.factor;
        let rinv = r.clone().try_inverse().expect("gram factor is invertible");
        &rinv * (&rinv.adjoint() * a.adjoint() * r.adjoint()) * r
    }

    /// Operator norm of `A` on `(ℂ^m, ⟨·,·⟩_G)`.
    pub fn operator_norm_of(&self, a: &CMat) -> f64 {
        if self.identity_gram {
            return linalg::spectral_norm(a);
        }
        let rinv = self.factor.clone().try_inverse().expect("gram factor is invertible");
        linalg::spectral_norm(&(&self.factor * a * rinv))
    }

    pub fn operator_norms(&self) -> Vec<f64> {
        self.matrices.iter().map(|t| self.operator_norm_of(t)).collect()
    }

    /// Unitarily equivalent tuple with the identity Gram weight:
    /// `T̃ = R T R⁻¹`, `h̃ = R h` where `G = R* R`.
    pub fn to_standard(&self) -> CyclicTuple {
        if self.identity_gram {
            return self.clone();
        }
        let rinv = self.factor.clone().try_inverse().expect("gram factor is invertible");
        let matrices = self.matrices.iter().map(|t| &self.factor * t * &rinv).collect();
        CyclicTuple::new(matrices, &self.factor * &self.h).expect("standardised tuple is valid")
    }

    /// `(T + λI, h)`.
    pub fn shifted(&self, lambda: &[Cx]) -> CyclicTuple {
        assert_eq!(lambda.len(), self.n());
        let m = self.dim();
        let mut out = self.clone();
        for (t, l) in out.matrices.iter_mut().zip(lambda) {
            *t += linalg::identity(m) * *l;
        }
        out
    }

    /// Same operators with a different distinguished vector.
    pub fn with_vector(&self, h: CVec) -> Result<CyclicTuple> {
        if h.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector has length {}, expected {}",
                h.len(),
                self.dim()
            )));
        }
        if h.iter().all(|c| *c == ZERO) {
            return Err(Error::ZeroVector);
        }
        let mut out = self.clone();
        out.h = h;
        Ok(out)
    }

    /// `(S T S⁻¹, S h)` keeping the Gram weight. A unitary `S` gives a
    /// unitarily equivalent tuple; a general `S` changes the geometry.
    pub fn conjugated(&self, s: &CMat) -> Result<CyclicTuple> {
        let sinv = s
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::invalid("similarity", "matrix is singular"))?;
        let matrices = self.matrices.iter().map(|t| s * t * &sinv).collect();
        CyclicTuple::build(matrices, s * &self.h, self.gram.clone(), self.identity_gram)
    }

    pub fn max_commutator(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                worst = worst.max(linalg::commutator_norm(&self.matrices[i], &self.matrices[j]));
            }
        }
        worst
    }

    /// Default commutation tolerance `1e-10 · max_i ‖T_i‖²` (with a floor
    /// for the all-zero tuple).
    pub fn default_tol_comm(&self) -> f64 {
        let max = self.matrices.iter().map(|t| t.norm()).fold(0.0, f64::max);
        1e-10 * max.powi(2).max(1e-300)
    }

    /// Commutator and (optionally) cyclicity report.
    pub fn validate(&self, tol_comm: Option<f64>, check_cyclic: bool) -> Result<ValidationReport> {
        let tol = tol_comm.unwrap_or_else(|| self.default_tol_comm());
        let max_commutator = self.max_commutator();
        let krylov_rank = check_cyclic.then(|| self.krylov_rank(1e-10));
        Ok(ValidationReport {
            max_commutator,
            tol_comm: tol,
            commuting: max_commutator <= tol,
            krylov_rank,
            cyclic: krylov_rank.map(|r| r == self.dim()),
        })
    }

    /// Like [`validate`](Self::validate) but turns non-commuting input into an error.
    pub fn require_commuting(&self, tol_comm: Option<f64>) -> Result<()> {
        let rep = self.validate(tol_comm, false)?;
        if rep.commuting {
            Ok(())
        } else {
            Err(Error::NonCommuting {
                defect: rep.max_commutator,
                tol: rep.tol_comm,
            })
        }
    }

    /// Dimension of `span{T^α h}` by Arnoldi-style closure in standardised
    /// coordinates; a candidate direction counts when its orthogonal
    /// residual exceeds `rel_tol` times the scale of the tuple.
    pub fn krylov_rank(&self, rel_tol: f64) -> usize {
        let st = self.to_standard();
        let m = st.dim();
        let scale = st
            .matrices
            .iter()
            .map(linalg::spectral_norm)
            .fold(1.0, f64::max);
        let mut basis: Vec<CVec> = vec![st.h.normalize()];
        let mut k = 0;
        while k < basis.len() && basis.len() < m {
            let v = basis[k].clone();
            for t in &st.matrices {
                let mut w = t * &v;
                for _ in 0..2 {
                    for q in &basis {
                        let c = q.dotc(&w);
                        w -= q * c;
                    }
                }
                let r = w.norm();
                if r > rel_tol * scale {
                    basis.push(w / Cx::new(r, 0.0));
                    if basis.len() == m {
                        break;
                    }
                }
            }
            k += 1;
        }
        basis.len()
    }

    /// `T^α h` for every `|α| ≤ d` in graded-lex order, each computed once
    /// from `T^{α−e_i} h` with `i` the first nonzero coordinate of `α`.
    pub fn krylov_vectors(&self, index: &IndexSet) -> Vec<CVec> {
        let mut out: Vec<CVec> = Vec::with_capacity(index.len());
        for alpha in index.indices() {
            match alpha.first_nonzero() {
                None => out.push(self.h.clone()),
                Some(i) => {
                    let prev = alpha.with_decrement(i).expect("coordinate is nonzero");
                    let p = index.position(&prev).expect("lower index enumerated first");
                    let v = &self.matrices[i] * &out[p];
                    out.push(v);
                }
            }
        }
        out
    }

    /// The moment table `m(α, β) = ⟨T^α h, T^β h⟩` for `|α|, |β| ≤ d`.
    pub fn moments(&self, d: usize) -> MomentTable {
        let index = IndexSet::new(self.n(), d);
        let vecs = self.krylov_vectors(&index);
        let w = CMat::from_fn(self.dim(), index.len(), |r, c| vecs[c][r]);
        let matrix = if self.identity_gram {
            w.adjoint() * &w
        } else {
            w.adjoint() * &self.gram * &w
        };
        MomentTable { index, matrix }
    }

    /// `p(T) h`.
    pub fn apply_polynomial(&self, p: &Polynomial) -> CVec {
        p.apply(&self.matrices, &self.h)
    }
}

/// Finite table of moments `m(α, β)` for `|α|, |β| ≤ d`.
///
/// Stored as the Gram matrix `M` of the Krylov vectors in graded-lex order:
/// `M[row β, col α] = m(α, β)`, so `c* M c = ‖Σ c_α T^α h‖²`.
#[derive(Clone, Debug)]
pub struct MomentTable {
    index: Arc<IndexSet>,
    matrix: CMat,
}

impl MomentTable {
    /// Table with entries `f(α, β) = m(α, β)`.
    pub fn from_fn(n: usize, d: usize, mut f: impl FnMut(&MultiIndex, &MultiIndex) -> Cx) -> Self {
        let index = IndexSet::new(n, d);
        let len = index.len();
        let matrix = CMat::from_fn(len, len, |b, a| f(index.get(a), index.get(b)));
        MomentTable { index, matrix }
    }

    /// Wraps a Gram-layout matrix (`M[row β, col α] = m(α, β)`).
    pub fn from_matrix(n: usize, d: usize, matrix: CMat) -> Result<Self> {
        let index = IndexSet::new(n, d);
        if matrix.nrows() != index.len() || matrix.ncols() != index.len() {
            return Err(Error::DimensionMismatch(format!(
                "moment matrix is {}x{}, expected {} for n={n}, d={d}",
                matrix.nrows(),
                matrix.ncols(),
                index.len()
            )));
        }
        Ok(MomentTable { index, matrix })
    }

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

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// `m(α, β)`; panics if either index is outside the table.
    pub fn get(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Cx {
        let a = self.index.position(alpha).expect("α within table degree");
        let b = self.index.position(beta).expect("β within table degree");
        self.matrix[(b, a)]
    }

    /// `m(α, β)` or `None` outside the table.
    pub fn try_get(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Option<Cx> {
        let a = self.index.position(alpha)?;
        let b = self.index.position(beta)?;
        Some(self.matrix[(b, a)])
    }

    /// The same table truncated to degree `d`.
    pub fn restrict(&self, d: usize) -> Result<MomentTable> {
        if d > self.degree() {
            return Err(Error::DegreeOverflow {
                requested: d,
                available: self.degree(),
            });
        }
        let len = self.index.prefix_len(d);
        Ok(MomentTable {
            index: IndexSet::new(self.n(), d),
            matrix: self.matrix.view((0, 0), (len, len)).into_owned(),
        })
    }

    pub fn scaled(&self, s: f64) -> MomentTable {
        MomentTable {
            index: self.index.clone(),
            matrix: &self.matrix * Cx::new(s, 0.0),
        }
    }

    pub fn hermitian_defect(&self) -> f64 {
        linalg::hermitian_defect(&self.matrix)
    }

    pub fn trace(&self) -> f64 {
        linalg::trace_re(&self.matrix)
    }

    /// Smallest eigenvalue of the Gram-layout matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigen(&self.matrix)
            .values
            .last()
            .copied()
            .unwrap_or(0.0)
    }

    /// Largest entrywise difference on the common degree range.
    pub fn max_abs_diff(&self, other: &MomentTable) -> f64 {
        assert_eq!(self.n(), other.n());
        let len = self.len().min(other.len());
        let mut worst: f64 = 0.0;
        for r in 0..len {
            for c in 0..len {
                worst = worst.max((self.matrix[(r, c)] - other.matrix[(r, c)]).norm());
            }
        }
        worst
    }

    /// Coefficient vector of `p` in this table's monomial order.
    pub fn coeff_vector(&self, p: &Polynomial) -> Result<CVec> {
        let mut v = CVec::zeros(self.len());
        for (a, c) in p.terms() {
            let k = self.index.position(a).ok_or(Error::DegreeOverflow {
                requested: a.degree(),
                available: self.degree(),
            })?;
            v[k] += *c;
        }
        Ok(v)
    }

    /// `⟨p(T)h, q(T)h⟩` computed from the table.
    pub fn pairing(&self, p: &Polynomial, q: &Polynomial) -> Result<Cx> {
        let pv = self.coeff_vector(p)?;
        let qv = self.coeff_vector(q)?;
        Ok(qv.dotc(&(&self.matrix * pv)))
    }

    /// Table of `(T, h')` where the vector for index `α` becomes
    /// `Σ_γ C[γ, α] T^γ h`: the new Gram matrix is `C* M C`.
    fn transformed(&self, out_degree: usize, c: &CMat) -> MomentTable {
        MomentTable {
            index: IndexSet::new(self.n(), out_degree),
            matrix: c.adjoint() * &self.matrix * c,
        }
    }
}

/// Moment table of `(T + λI, h)` from the table of `(T, h)`:
/// `m'(α,β) = Σ_{γ≤α, δ≤β} C(α,γ) C(β,δ) λ^{α−γ} conj(λ)^{β−δ} m(γ,δ)`.
pub fn translate_moments(mt: &MomentTable, lambda: &[Cx]) -> MomentTable {
    assert_eq!(lambda.len(), mt.n(), "shift has wrong dimension");
    let index = mt.index();
    let len = index.len();
    let mut c = CMat::zeros(len, len);
    for (a, alpha) in index.indices().iter().enumerate() {
        for gamma in alpha.lower_set() {
            let g = index.position(&gamma).expect("lower index inside table");
            let rest = alpha.checked_sub(&gamma).expect("γ ≤ α");
            c[(g, a)] += rest.monomial(lambda) * alpha.binomial(&gamma);
        }
    }
    mt.transformed(mt.degree(), &c)
}

/// Moment table of `(T, p(T)h)` from the table of `(T, h)`:
/// `m'(α,β) = Σ_{γ,δ} p_γ conj(p_δ) m(α+γ, β+δ)`, of degree `d − deg p`
/// unless a smaller `out_degree` is requested.
pub fn twist_by_polynomial(
    mt: &MomentTable,
    p: &Polynomial,
    out_degree: Option<usize>,
) -> Result<MomentTable> {
    if p.n() != mt.n() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial in {} variables, table in {}",
            p.n(),
            mt.n()
        )));
    }
    let deg_p = p.degree();
    let available = mt.degree().checked_sub(deg_p).ok_or(Error::DegreeOverflow {
        requested: deg_p,
        available: mt.degree(),
    })?;
    let out = out_degree.unwrap_or(available);
    if out > available {
        return Err(Error::DegreeOverflow {
            requested: out,
            available,
        });
    }
    let index = mt.index();
    let out_index = IndexSet::new(mt.n(), out);
    let mut c = CMat::zeros(index.len(), out_index.len());
    for (a, alpha) in out_index.indices().iter().enumerate() {
        for (gamma, coeff) in p.terms() {
            let g = index.position(&(alpha + gamma)).expect("degree checked above");
            c[(g, a)] += *coeff;
        }
    }
    Ok(mt.transformed(out, &c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use proptest::prelude::*;

    fn c(re: f64) -> Cx {
        Cx::new(re, 0.0)
    }

    fn jordan2() -> CyclicTuple {
        CyclicTuple::new(
            vec![CMat::from_row_slice(2, 2, &[c(0.), c(0.), c(1.), c(0.)])],
            CVec::from_vec(vec![c(1.), c(0.)]),
        )
        .unwrap()
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn validate_examples() {
        let r = jordan2().validate(None, true).unwrap();
        assert_eq!((r.krylov_rank, r.cyclic), (Some(2), Some(true)));

        let zero = CyclicTuple::new(vec![CMat::zeros(1, 1)], CVec::from_vec(vec![c(1.)])).unwrap();
        let r = zero.validate(None, true).unwrap();
        assert_eq!((r.krylov_rank, r.cyclic), (Some(1), Some(true)));

        let diag = CyclicTuple::new(
            vec![linalg::identity(2)],
            CVec::from_vec(vec![c(1.), c(0.)]),
        )
        .unwrap();
        let r = diag.validate(None, true).unwrap();
        assert_eq!((r.krylov_rank, r.cyclic), (Some(1), Some(false)));
    }

    #[test]
    fn rejects_bad_input() {
        let t = vec![CMat::zeros(2, 2)];
        assert!(matches!(
            CyclicTuple::new(t.clone(), CVec::zeros(2)),
            Err(Error::ZeroVector)
        ));
        let g = CMat::from_row_slice(2, 2, &[c(1.), c(2.), c(0.), c(1.)]);
        assert!(matches!(
            CyclicTuple::with_gram(t, CVec::from_vec(vec![c(1.), c(0.)]), g),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn jordan_block_moments() {
        let mt = jordan2().moments(3);
        for k in 0..=3u32 {
            for l in 0..=3u32 {
                let expect = if k == l && k <= 1 { 1.0 } else { 0.0 };
                assert_eq!(mt.get(&mi(&[k]), &mi(&[l])), c(expect));
            }
        }
    }

    #[test]
    fn orientation_is_linear_in_first_slot() {
        // T = [a], h = 1: m(α, β) = a^α conj(a)^β.
        let a = Cx::new(0.3, 0.7);
        let t = CyclicTuple::new(vec![CMat::from_element(1, 1, a)], CVec::from_element(1, c(1.))).unwrap();
        let mt = t.moments(2);
        let got = mt.get(&mi(&[2]), &mi(&[1]));
        assert!((got - a * a * a.conj()).norm() < 1e-15);
    }

    #[test]
    fn translate_examples() {
        let mt = jordan2().moments(3);
        let lam = [Cx::new(0.5, -1.0)];
        let shifted = translate_moments(&mt, &lam);
        let v = shifted.get(&mi(&[1]), &mi(&[1]));
        assert!((v - c(1.0 + lam[0].norm_sqr())).norm() < 1e-14);
        assert!(translate_moments(&mt, &[ZERO]).max_abs_diff(&mt) == 0.0);
    }

    #[test]
    fn twist_examples() {
        let mt = jordan2().moments(3);
        let z = Polynomial::var(1, 0);
        let tw = twist_by_polynomial(&mt, &z, None).unwrap();
        assert_eq!(tw.degree(), 2);
        assert_eq!(tw.get(&mi(&[0]), &mi(&[0])), c(1.));
        assert_eq!(tw.get(&mi(&[1]), &mi(&[1])), c(0.));
        let two = Polynomial::constant(1, c(2.));
        let tw = twist_by_polynomial(&mt, &two, None).unwrap();
        assert!(tw.max_abs_diff(&mt.scaled(4.0)) < 1e-15);
        assert!(matches!(
            twist_by_polynomial(&mt, &z, Some(3)),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn weighted_gram_inner_product() {
        let g = CMat::from_diagonal(&CVec::from_vec(vec![c(2.), c(0.5)]));
        let t = CyclicTuple::with_gram(
            vec![CMat::from_diagonal(&CVec::from_vec(vec![c(1.), c(-1.)]))],
            CVec::from_vec(vec![c(1.), c(1.)]),
            g,
        )
        .unwrap();
        let mt = t.moments(2);
        assert!((mt.get(&mi(&[1]), &mi(&[0])) - c(1.5)).norm() < 1e-15);
        let st = t.to_standard();
        assert!(st.moments(2).max_abs_diff(&mt) < 1e-14);
        assert!((t.operator_norms()[0] - 1.0).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn moments_are_gram_matrices(seed in 0u64..10_000, n in 1usize..4) {
            let mut r = random::rng(seed);
            let t = random::polynomial_tuple(&mut r, n, 3, 1.0);
            let mt = t.moments(4);
            prop_assert!(mt.hermitian_defect() < 1e-13);
            prop_assert!(mt.min_eigenvalue() >= -1e-12 * mt.trace());
        }

        #[test]
        fn translation_matches_shifted_tuple(seed in 0u64..10_000) {
            let mut r = random::rng(seed);
            let t = random::polynomial_tuple(&mut r, 2, 3, 1.0);
            let lam: Vec<Cx> = (0..2).map(|_| random::complex_in_disc(&mut r, 2.0)).collect();
            let direct = t.shifted(&lam).moments(4);
            let derived = translate_moments(&t.moments(4), &lam);
            let scale = direct.matrix().norm().max(1.0);
            prop_assert!(direct.max_abs_diff(&derived) <= 1e-10 * scale);
        }

        #[test]
        fn twist_matches_new_vector(seed in 0u64..10_000) {
            let mut r = random::rng(seed);
            let t = random::polynomial_tuple(&mut r, 2, 3, 1.0);
            let p = Polynomial::from_terms(2, [
                (mi(&[0, 0]), random::complex_normal(&mut r)),
                (mi(&[1, 0]), random::complex_normal(&mut r)),
                (mi(&[1, 1]), random::complex_normal(&mut r)),
            ]);
            let direct = t.with_vector(t.apply_polynomial(&p)).unwrap().moments(2);
            let derived = twist_by_polynomial(&t.moments(4), &p, None).unwrap();
            prop_assert!(direct.max_abs_diff(&derived) <= 1e-10 * direct.matrix().norm().max(1.0));
        }
    }
}
