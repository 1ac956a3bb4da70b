//! Reconstruction of a cyclic tuple from a moment table on `ℂ[z]/I`, and
//! convolution of cyclic tuples by multiplying their kernels.
//!
//! The truncated reconstruction uses polynomials of degree `≤ d−1` as the
//! space and compresses multiplication by `z_i` onto it, so it reproduces
//! the input moments exactly up to degree `d−1` only.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::multiindex::MultiIndex;
use crate::tuples::{CyclicTuple, MomentTable};
use crate::{CMat, CVec, Cx, ZERO};

#[derive(Clone, Debug)]
pub struct GnsResult {
    pub tuple: CyclicTuple,
    /// Leading monomial of each retained quotient direction.
    pub basis: Vec<MultiIndex>,
    pub nullity: usize,
    pub degree: usize,
    /// `max_{i,j} ‖z_i e_j − P z_i e_j‖`: how far `z_i` maps the retained
    /// space outside itself.
    pub residual: f64,
}

pub const DEFAULT_NULL_TOL: f64 = 1e-10;

/// Builds `(M_z, 1 + I)` on the quotient of polynomials of degree `≤ d−1`,
/// discarding Gram directions with eigenvalue `≤ null_tol · trace`.
pub fn gns_reconstruct(mt: &MomentTable, null_tol: f64) -> Result<GnsResult> {
    let d = mt.degree();
    if d < 1 {
        return Err(Error::DegreeTooSmall { degree: d, needed: 1 });
    }
    let defect = mt.hermitian_defect();
    if defect > 1e-8 * mt.matrix().norm().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let n = mt.n();
    let idx = mt.index();
    let low = idx.prefix_len(d - 1);
    let m = mt.matrix();
    let g = m.view((0, 0), (low, low)).into_owned();
    let eig = linalg::hermitian_eigen(&g);
    let trace = linalg::trace_re(&g);
    let keep: Vec<usize> = (0..low)
        .filter(|&k| eig.values[k] > null_tol * trace && eig.values[k] > 0.0)
        .collect();
    if keep.is_empty() {
        return Err(Error::EmptyQuotient);
    }
    let r = keep.len();
    let mut u = CMat::from_fn(low, r, |a, j| eig.vectors[(a, keep[j])]);
    for j in 0..r {
        let mut col: CVec = u.column(j).into_owned();
        crate::fock::fix_phase(&mut col);
        u.set_column(j, &col);
    }
    let inv_sqrt: Vec<f64> = keep.iter().map(|&k| 1.0 / eig.values[k].sqrt()).collect();
    let scale = CMat::from_diagonal(&CVec::from_iterator(r, inv_sqrt.iter().map(|s| Cx::new(*s, 0.0))));
    let ua = u.adjoint();

    let mut matrices = Vec::with_capacity(n);
    let mut residual: f64 = 0.0;
    for i in 0..n {
        // C[b][a] = m(α_a + e_i, α_b), D[b][a] = m(α_a + e_i, α_b + e_i).
        let up: Vec<usize> = idx.indices()[..low]
            .iter()
            .map(|a| idx.position(&a.with_increment(i)).expect("degree ≤ d"))
            .collect();
        let c = CMat::from_fn(low, low, |b, a| m[(b, up[a])]);
        let dd = CMat::from_fn(low, low, |b, a| m[(up[b], up[a])]);
        let ri = &scale * &ua * &c * &u * &scale;
        let norms = &scale * &ua * &dd * &u * &scale;
        for j in 0..r {
            let captured: f64 = (0..r).map(|k| ri[(k, j)].norm_sqr()).sum();
            let total = norms[(j, j)].re;
            residual = residual.max((total - captured).max(0.0).sqrt());
        }
        matrices.push(ri);
    }
    let h0 = CVec::from_iterator(low, (0..low).map(|b| m[(b, 0)]));
    let h = &scale * (&ua * h0);
    let basis = (0..r)
        .map(|j| {
            let mut best = 0;
            for a in 0..low {
                if u[(a, j)].norm() > u[(best, j)].norm() * (1.0 + 1e-12) {
                    best = a;
                }
            }
            idx.get(best).clone()
        })
        .collect();
    Ok(GnsResult {
        tuple: CyclicTuple::new(matrices, h)?,
        basis,
        nullity: low - r,
        degree: d,
        residual,
    })
}

/// Moments of the tuple whose kernel is `F_a · F_b`:
/// `m(α,β) = Σ_{γ≤α, δ≤β} C(α,γ) C(β,δ) m_a(γ,δ) m_b(α−γ, β−δ)`,
/// at degree `min(d_a, d_b)`.
pub fn convolve_moments(a: &MomentTable, b: &MomentTable) -> Result<MomentTable> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(format!(
            "tables in {} and {} variables",
            a.n(),
            b.n()
        )));
    }
    let d = a.degree().min(b.degree());
    let a = a.restrict(d)?;
    let b = b.restrict(d)?;
    let idx = a.index().clone();
    let lower: Vec<Vec<(usize, usize, f64)>> = idx
        .indices()
        .iter()
        .map(|alpha| {
            alpha
                .lower_set()
                .into_iter()
                .map(|g| {
                    let rest = alpha.checked_sub(&g).expect("γ ≤ α");
                    (
                        idx.position(&g).unwrap(),
                        idx.position(&rest).unwrap(),
                        alpha.binomial(&g),
                    )
                })
                .collect()
        })
        .collect();
    let (ma, mb) = (a.matrix(), b.matrix());
    let len = idx.len();
    let rows: Vec<Vec<Cx>> = (0..len)
        .into_par_iter()
        .map(|bi| {
            (0..len)
                .map(|ai| {
                    let mut acc = ZERO;
                    for &(g, ga, cg) in &lower[ai] {
                        for &(dl, db, cd) in &lower[bi] {
                            acc += ma[(dl, g)] * mb[(db, ga)] * (cg * cd);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let matrix = CMat::from_fn(len, len, |r, c| rows[r][c]);
    MomentTable::from_matrix(a.n(), d, matrix)
}

#[derive(Clone, Debug)]
pub struct ConvolutionResult {
    pub gns: GnsResult,
    /// `‖R_i^{(d)}‖` of the reconstructed compression.
    pub norms: Vec<f64>,
    /// `‖T_i‖ + ‖S_i‖`.
    pub bounds: Vec<f64>,
}

impl ConvolutionResult {
    /// Largest `‖R_i^{(d)}‖ − (‖T_i‖ + ‖S_i‖)`; non-positive when the bound holds.
    pub fn bound_excess(&self) -> f64 {
        self.norms
            .iter()
            .zip(&self.bounds)
            .map(|(r, b)| r - b)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Reconstructs the convolution of two cyclic tuples at degree `d` and
/// reports its operator norms next to `‖T_i‖ + ‖S_i‖`.
pub fn convolve(t: &CyclicTuple, s: &CyclicTuple, d: usize, null_tol: f64) -> Result<ConvolutionResult> {
    if t.n() != s.n() {
        return Err(Error::DimensionMismatch(format!(
            "tuples have {} and {} operators",
            t.n(),
            s.n()
        )));
    }
    let mt = convolve_moments(&t.moments(d), &s.moments(d))?;
    let gns = gns_reconstruct(&mt, null_tol)?;
    let norms = gns.tuple.operator_norms();
    let bounds = t
        .operator_norms()
        .iter()
        .zip(s.operator_norms())
        .map(|(a, b)| a + b)
        .collect();
    Ok(ConvolutionResult { gns, norms, bounds })
}

/// `T ⊗ I + I ⊗ S` with vector `h ⊗ e`; an independent realisation of the
/// convolution used as a test oracle.
pub fn tensor_sum(t: &CyclicTuple, s: &CyclicTuple) -> Result<CyclicTuple> {
    let (t, s) = (t.to_standard(), s.to_standard());
    let (p, q) = (t.dim(), s.dim());
    let ip = linalg::identity(p);
    let iq = linalg::identity(q);
    let matrices = t
        .matrices()
        .iter()
        .zip(s.matrices())
        .map(|(a, b)| a.kronecker(&iq) + ip.kronecker(b))
        .collect();
    CyclicTuple::new(matrices, t.h().kronecker(s.h()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::random;
    use proptest::prelude::*;

    fn c(re: f64) -> Cx {
        Cx::new(re, 0.0)
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn scalar(a: Cx) -> CyclicTuple {
        CyclicTuple::new(vec![CMat::from_element(1, 1, a)], CVec::from_element(1, c(1.))).unwrap()
    }

    #[test]
    fn scalar_reconstruction() {
        let a = Cx::new(0.7, -0.2);
        let g = gns_reconstruct(&scalar(a).moments(3), DEFAULT_NULL_TOL).unwrap();
        assert_eq!(g.tuple.dim(), 1);
        assert!((g.tuple.matrices()[0][(0, 0)] - a).norm() < 1e-12);
        assert_eq!(g.nullity, 2);
        assert!(g.residual < 1e-7);
    }

    #[test]
    fn jordan_reconstruction_preserves_moments() {
        let t = models::jordan_block_tuple(2, c(0.));
        let mt = t.moments(3);
        let g = gns_reconstruct(&mt, DEFAULT_NULL_TOL).unwrap();
        assert_eq!(g.tuple.dim(), 2);
        assert!(g.tuple.moments(2).max_abs_diff(&mt.restrict(2).unwrap()) < 1e-12);
        assert!(g.tuple.moments(3).max_abs_diff(&mt) < 1e-12);
    }

    #[test]
    fn point_mass_and_errors() {
        let mt = MomentTable::from_fn(2, 2, |a, b| if a.is_zero() && b.is_zero() { c(1.) } else { ZERO });
        let g = gns_reconstruct(&mt, DEFAULT_NULL_TOL).unwrap();
        assert_eq!(g.tuple.dim(), 1);
        assert!(g.tuple.matrices().iter().all(|t| t.norm() < 1e-15));
        assert!((g.tuple.h().norm() - 1.0).abs() < 1e-15);
        let zero = MomentTable::from_fn(1, 2, |_, _| ZERO);
        assert!(matches!(gns_reconstruct(&zero, DEFAULT_NULL_TOL), Err(Error::EmptyQuotient)));
        let low = scalar(c(1.)).moments(0);
        assert!(matches!(
            gns_reconstruct(&low, DEFAULT_NULL_TOL),
            Err(Error::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn convolution_examples() {
        let (a, b) = (Cx::new(0.4, 0.1), Cx::new(-1.0, 0.5));
        let mt = convolve_moments(&scalar(a).moments(4), &scalar(b).moments(4)).unwrap();
        assert!(mt.max_abs_diff(&scalar(a + b).moments(4)) < 1e-12);

        let j = models::jordan_block_tuple(2, c(0.));
        let unit = scalar(c(0.));
        let mt = convolve_moments(&j.moments(4), &unit.moments(4)).unwrap();
        assert!(mt.max_abs_diff(&j.moments(4)) < 1e-15);

        let sq = convolve_moments(&j.moments(4), &j.moments(4)).unwrap();
        assert_eq!(sq.get(&mi(&[1]), &mi(&[1])), c(2.));
        assert_eq!(sq.get(&mi(&[2]), &mi(&[2])), c(4.));
        assert_eq!(sq.get(&mi(&[2]), &mi(&[1])), c(0.));
        assert_eq!(sq.get(&mi(&[3]), &mi(&[3])), c(0.));
    }

    #[test]
    fn convolution_of_tuples() {
        let r = convolve(&scalar(c(1.)), &scalar(c(2.)), 4, DEFAULT_NULL_TOL).unwrap();
        assert_eq!(r.gns.tuple.dim(), 1);
        assert!((r.norms[0] - 3.0).abs() < 1e-12);

        let j = models::jordan_block_tuple(2, c(0.));
        let r = convolve(&j, &scalar(c(0.)), 4, DEFAULT_NULL_TOL).unwrap();
        assert!(r.gns.tuple.moments(3).max_abs_diff(&j.moments(3)) < 1e-12);

        let r = convolve(&j, &j, 5, DEFAULT_NULL_TOL).unwrap();
        assert_eq!(r.gns.tuple.dim(), 3);
        assert!(r.norms[0] <= 2.0 + 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn reconstruction_round_trip(seed in 0u64..10_000) {
            let mut r = random::rng(seed);
            let t = random::polynomial_tuple(&mut r, 2, 3, 1.0);
            let mt = t.moments(4);
            let g = gns_reconstruct(&mt, DEFAULT_NULL_TOL).unwrap();
            let back = g.tuple.moments(3);
            prop_assert!(back.max_abs_diff(&mt.restrict(3).unwrap()) <= 1e-8 * mt.matrix().norm().max(1.0));
            let again = gns_reconstruct(&mt, DEFAULT_NULL_TOL).unwrap();
            prop_assert!(again.tuple.moments(3).max_abs_diff(&back) <= 1e-12 * mt.matrix().norm().max(1.0));
        }

        #[test]
        fn convolution_is_symmetric_and_matches_tensor_sum(seed in 0u64..10_000) {
            let mut r = random::rng(seed);
            let t = random::polynomial_tuple(&mut r, 2, 2, 1.0);
            let s = random::polynomial_tuple(&mut r, 2, 3, 1.0);
            let (ma, mb) = (t.moments(4), s.moments(4));
            let ab = convolve_moments(&ma, &mb).unwrap();
            let ba = convolve_moments(&mb, &ma).unwrap();
            prop_assert!(ab.max_abs_diff(&ba) <= 1e-13 * ab.matrix().norm());
            let direct = tensor_sum(&t, &s).unwrap().moments(4);
            prop_assert!(ab.max_abs_diff(&direct) <= 1e-11 * ab.matrix().norm());
        }

        #[test]
        fn convolution_norm_bound(seed in 0u64..10_000, d in 3usize..6) {
            let mut r = random::rng(seed);
            let t = random::polynomial_tuple(&mut r, 2, 2, 1.0);
            let s = random::polynomial_tuple(&mut r, 2, 3, 1.0);
            let res = convolve(&t, &s, d, DEFAULT_NULL_TOL).unwrap();
            prop_assert!(res.bound_excess() <= 1e-8, "{:?} vs {:?}", res.norms, res.bounds);
        }
    }
}
