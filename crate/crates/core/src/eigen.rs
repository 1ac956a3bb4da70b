//! Joint eigenvalues of `T* = (T_1*, …, T_n*)`, tested three ways:
//! directly by a common kernel, by the distance from `h` to
//! `⋁_i range(T_i − λ̄_i I)`, and by positivity of
//! `[c² m(α,β) − λ̄^α λ^β]`. The constant `c = 1/distance` is the best
//! constant in `|p(λ̄)| ≤ c ‖p(T)h‖`.
//!
//! Positivity of the kernel-level matrix is the same test after a diagonal
//! rescaling by `√(α!β!)`, so only the moment-level test is implemented.

use rayon::prelude::*;

use crate::error::Result;
use crate::kernel::{psd_check, PsdCheck};
use crate::linalg;
use crate::polynomial::Polynomial;
use crate::tuples::{CyclicTuple, MomentTable};
use crate::{CMat, CVec, Cx};

pub const DIRECT_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct DirectVerdict {
    pub is_eigenvalue: bool,
    /// Common eigenvector of the `T_i*` (adjoints taken in the tuple's inner product).
    pub eigenvector: Option<CVec>,
    pub smallest_singular_value: f64,
    pub stack_norm: f64,
}

/// Standardised matrices and vector (identity Gram) plus the map back.
fn standard_parts(t: &CyclicTuple) -> (CyclicTuple, CMat) {
    let st = t.to_standard();
    let back = if t.has_identity_gram() {
        linalg::identity(t.dim())
    } else {
        linalg::gram_factor(t.gram())
            .expect("validated gram")
            .try_inverse()
            .expect("gram factor invertible")
    };
    (st, back)
}

/// Vertical stack of `T_i* − λ_i I`.
fn adjoint_stack(st: &CyclicTuple, lambda: &[Cx]) -> CMat {
    let m = st.dim();
    let n = st.n();
    let mut s = CMat::zeros(n * m, m);
    for (i, (ti, li)) in st.matrices().iter().zip(lambda).enumerate() {
        let block = ti.adjoint() - linalg::identity(m) * *li;
        s.view_mut((i * m, 0), (m, m)).copy_from(&block);
    }
    s
}

/// Is `λ` a joint eigenvalue of `T*`? Decided by the smallest singular
/// value of the stacked `T_i* − λ_i I` against `tol · ‖stack‖`.
pub fn direct_joint_eigen(t: &CyclicTuple, lambda: &[Cx], tol: f64) -> DirectVerdict {
    assert_eq!(lambda.len(), t.n(), "λ has wrong dimension");
    let (st, back) = standard_parts(t);
    let stack = adjoint_stack(&st, lambda);
    let (_, s, vt) = linalg::svd_full(&stack);
    let m = st.dim();
    let stack_norm = s[0];
    let smallest = s[m - 1];
    let is_eigenvalue = smallest <= tol * stack_norm || stack_norm == 0.0;
    let eigenvector = is_eigenvalue.then(|| {
        let v = CVec::from_fn(m, |r, _| vt[(m - 1, r)].conj());
        let x = &back * v;
        let nrm = t.norm(&x);
        x / Cx::new(nrm, 0.0)
    });
    DirectVerdict {
        is_eigenvalue,
        eigenvector,
        smallest_singular_value: smallest,
        stack_norm,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Constant {
    Finite(f64),
    Unbounded,
}

impl Constant {
    pub fn value(&self) -> Option<f64> {
        match self {
            Constant::Finite(c) => Some(*c),
            Constant::Unbounded => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DistanceConstant {
    pub distance: f64,
    pub constant: Constant,
}

/// `dist(h, ⋁_i range(T_i − λ̄_i I))` and `c = 1/dist` (unbounded when the
/// distance is at most `tol · ‖h‖`).
pub fn distance_constant(t: &CyclicTuple, lambda: &[Cx], tol: f64) -> DistanceConstant {
    assert_eq!(lambda.len(), t.n(), "λ has wrong dimension");
    let st = t.to_standard();
    let m = st.dim();
    let mut h_stack = CMat::zeros(m, m * st.n());
    for (i, (ti, li)) in st.matrices().iter().zip(lambda).enumerate() {
        let block = ti - linalg::identity(m) * li.conj();
        h_stack.view_mut((0, i * m), (m, m)).copy_from(&block);
    }
    let q = linalg::range_basis(&h_stack, DIRECT_TOL);
    let h = st.h();
    let residual = h - &q * (q.adjoint() * h);
    let distance = residual.norm();
    let constant = if distance > tol * h.norm() {
        Constant::Finite(1.0 / distance)
    } else {
        Constant::Unbounded
    };
    DistanceConstant { distance, constant }
}

/// `M[row β, col α] = c² m(α,β) − λ̄^α λ^β` on `|α|,|β| ≤ d`.
pub fn psd_matrix(mt: &MomentTable, lambda: &[Cx], c: f64, d: usize) -> Result<CMat> {
    let mt = mt.restrict(d)?;
    let idx = mt.index();
    let lbar: Vec<Cx> = lambda.iter().map(|l| l.conj()).collect();
    let pa: Vec<Cx> = idx.indices().iter().map(|a| a.monomial(&lbar)).collect();
    let m = mt.matrix();
    Ok(CMat::from_fn(idx.len(), idx.len(), |b, a| {
        m[(b, a)] * (c * c) - pa[a] * pa[b].conj()
    }))
}

/// PSD test of `[c² m(α,β) − λ̄^α λ^β]` at degree `d`. A pass is only a
/// necessary condition at this degree; a failure is conclusive.
pub fn psd_criterion(mt: &MomentTable, lambda: &[Cx], c: f64, d: usize, tol: f64) -> Result<PsdCheck> {
    let m = psd_matrix(mt, lambda, c, d)?;
    let chk = psd_check(&m, tol)?;
    // The trace can vanish (M ≡ 0); fall back to the moment scale.
    let scale = (c * c * mt.trace()).max(chk.trace.abs());
    Ok(PsdCheck {
        passed: chk.min_eigenvalue >= -tol * scale,
        ..chk
    })
}

/// Polynomial from the most negative eigenvector of the PSD matrix; for it
/// `|p(λ̄)| > c ‖p(T)h‖`. Returns `(p, |p(λ̄)|, c‖p(T)h‖)`.
pub fn psd_witness(
    mt: &MomentTable,
    lambda: &[Cx],
    c: f64,
    d: usize,
) -> Result<Option<(Polynomial, f64, f64)>> {
    let m = psd_matrix(mt, lambda, c, d)?;
    let eig = linalg::hermitian_eigen(&m);
    let k = eig.values.len() - 1;
    if eig.values[k] >= 0.0 {
        return Ok(None);
    }
    let idx = mt.restrict(d)?.index().clone();
    let p = Polynomial::from_terms(
        mt.n(),
        idx.indices()
            .iter()
            .cloned()
            .zip(eig.vectors.column(k).iter().copied()),
    );
    let lbar: Vec<Cx> = lambda.iter().map(|l| l.conj()).collect();
    let lhs = p.eval(&lbar).norm();
    let rhs = c * mt.pairing(&p, &p)?.re.max(0.0).sqrt();
    Ok(Some((p, lhs, rhs)))
}

#[derive(Clone, Debug)]
pub struct EigenReport {
    pub lambda: Vec<Cx>,
    pub direct: DirectVerdict,
    pub distance: DistanceConstant,
    /// PSD test at `c = 1/distance`, when the constant is finite.
    pub psd_at_constant: Option<PsdCheck>,
    pub degree: usize,
}

impl EigenReport {
    /// The direct test and the distance test agree.
    pub fn consistent(&self) -> bool {
        self.direct.is_eigenvalue == matches!(self.distance.constant, Constant::Finite(_))
    }
}

pub fn eigen_report(t: &CyclicTuple, mt: &MomentTable, lambda: &[Cx], d: usize) -> Result<EigenReport> {
    let direct = direct_joint_eigen(t, lambda, DIRECT_TOL);
    let distance = distance_constant(t, lambda, 1e-8);
    let psd_at_constant = match distance.constant {
        Constant::Finite(c) => Some(psd_criterion(mt, lambda, c, d, 1e-10)?),
        Constant::Unbounded => None,
    };
    Ok(EigenReport {
        lambda: lambda.to_vec(),
        direct,
        distance,
        psd_at_constant,
        degree: d,
    })
}

/// Reports over a list of candidate points, computed in parallel and
/// returned in input order.
pub fn eigen_sweep(t: &CyclicTuple, d: usize, points: &[Vec<Cx>]) -> Result<Vec<EigenReport>> {
    let mt = t.moments(d);
    points
        .par_iter()
        .map(|p| eigen_report(t, &mt, p, d))
        .collect()
}

/// A `size × size` grid of points `center + (j·step, k·step)` in the
/// first coordinate's complex plane, other coordinates fixed.
pub fn grid(center: &[Cx], step: f64, size: usize) -> Vec<Vec<Cx>> {
    let half = (size as f64 - 1.0) / 2.0;
    let mut out = Vec::with_capacity(size * size);
    for k in 0..size {
        for j in 0..size {
            let mut p = center.to_vec();
            p[0] += Cx::new((j as f64 - half) * step, (k as f64 - half) * step);
            out.push(p);
        }
    }
    out
}
