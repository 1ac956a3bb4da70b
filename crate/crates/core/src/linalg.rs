//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{Cholesky, SymmetricEigen};

use crate::{CMat, CVec, Cx, ONE, ZERO};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted descending.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: CMat,
}

/// Eigen-decomposes the Hermitian part `(M + M*)/2`.
pub fn hermitian_eigen(m: &CMat) -> HermitianEigen {
    let dim = m.nrows();
    if dim == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: CMat::zeros(0, 0),
        };
    }
    let sym = (m + m.adjoint()) * Cx::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// Largest `|M_ij − conj(M_ji)|`.
pub fn hermitian_defect(m: &CMat) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

pub fn trace_re(m: &CMat) -> f64 {
    (0..m.nrows().min(m.ncols())).map(|k| m[(k, k)].re).sum()
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0, |a: f64, &b| a.max(b))
}

/// One-sided Jacobi on a matrix with `rows >= cols`: `(U, s, V)` with thin
/// `U`, unsorted `s` and square unitary `V`.
fn jacobi_svd(mut a: CMat) -> (CMat, Vec<f64>, CMat) {
    let (rows, cols) = a.shape();
    let mut v = identity(cols);
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let c = a.column(p).dotc(&a.column(q));
                if c.norm() <= f64::EPSILON * (alpha * beta).sqrt() || c.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = c / c.norm();
                let zeta = (beta - alpha) / (2.0 * c.norm());
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for m in [&mut a, &mut v] {
                    for r in 0..m.nrows() {
                        let x = m[(r, p)];
                        let y = m[(r, q)] * phase.conj();
                        m[(r, p)] = x * cs - y * sn;
                        m[(r, q)] = x * sn + y * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let s: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    let smax = s.iter().fold(0.0f64, |x, &y| x.max(y));
    let tiny = smax * f64::EPSILON * rows as f64;
    let mut u = CMat::zeros(rows, cols);
    let mut missing = Vec::new();
    for (j, &sj) in s.iter().enumerate() {
        if sj > tiny {
            u.set_column(j, &(a.column(j) / Cx::new(sj, 0.0)));
        } else {
            missing.push(j);
        }
    }
    // Complete U with the unit vector farthest from the span of the others.
    for j in missing {
        let best = (0..rows)
            .map(|e| {
                let mut x = CVec::zeros(rows);
                x[e] = ONE;
                for _ in 0..2 {
                    for k in 0..cols {
                        let proj = u.column(k).dotc(&x);
                        x -= u.column(k) * proj;
                    }
                }
                x
            })
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .expect("rows >= cols > 0");
        u.set_column(j, &best.normalize());
    }
    (u, s, v)
}

/// Singular value decomposition with both factors; singular values descending.
///
/// nalgebra's complex SVD loses accuracy on some rank-deficient input (errors
/// up to 1e-2 observed), so this uses one-sided Jacobi, which is accurate to
/// working precision on the small matrices used here.
pub fn svd_full(m: &CMat) -> (CMat, Vec<f64>, CMat) {
    let (rows, cols) = m.shape();
    let (u, s, vt) = if rows < cols {
        let (u2, s, v2) = jacobi_svd(m.adjoint());
        (v2, s, u2.adjoint())
    } else {
        let (u, s, v) = jacobi_svd(m.clone());
        (u, s, v.adjoint())
    };
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let u_sorted = CMat::from_fn(rows, order.len(), |r, c| u[(r, order[c])]);
    let vt_sorted = CMat::from_fn(order.len(), cols, |r, c| vt[(order[r], c)]);
    (u_sorted, order.iter().map(|&j| s[j]).collect(), vt_sorted)
}

/// Orthonormal basis of the null space of `m`, counting singular values
/// `≤ rel_tol · σ_max` as zero.
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    let cols = m.ncols();
    if m.nrows() == 0 {
        return CMat::identity(cols, cols);
    }
    // Pad with zero rows so the thin SVD exposes every right singular vector.
    let padded = if m.nrows() < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let (_, s, vt) = svd_full(&padded);
    let smax = s.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..s.len()).filter(|&k| s[k] <= rel_tol * smax).collect();
    CMat::from_fn(cols, keep.len(), |r, c| vt[(keep[c], r)].conj())
}

/// Orthonormal basis for the column space (singular values `> rel_tol · σ_max`).
pub fn range_basis(m: &CMat, rel_tol: f64) -> CMat {
    if m.ncols() == 0 || m.nrows() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let (u, s, _) = svd_full(m);
    let smax = s.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..s.len()).filter(|&k| s[k] > rel_tol * smax).collect();
    CMat::from_fn(m.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

/// Upper-triangular `R` with `G = R* R`, so `⟨u, v⟩_G = (Rv)* (Ru)`.
pub fn gram_factor(gram: &CMat) -> Option<CMat> {
    Cholesky::new(gram.clone()).map(|c| c.l().adjoint())
}

/// Eigenvalues of a general complex square matrix via the Schur form.
pub fn eigenvalues(m: &CMat) -> Vec<Cx> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    // The unshifted QR iteration can stall on exactly defective input such
    // as a bare Jordan block, so retry with a few complex shifts.
    let k = m.nrows();
    let scale = m.norm().max(1.0);
    for attempt in 0..6 {
        let shift = Cx::new(0.37, 0.21) * (attempt as f64 * scale);
        let shifted = m + identity(k) * shift;
        if let Some(schur) = nalgebra::Schur::try_new(shifted, f64::EPSILON, 200 * k.max(10)) {
            let (_, t) = schur.unpack();
            return (0..k).map(|j| t[(j, j)] - shift).collect();
        }
    }
    panic!("Schur iteration failed to converge for a {k}x{k} matrix");
}

pub fn commutator_norm(a: &CMat, b: &CMat) -> f64 {
    (a * b - b * a).norm()
}

/// A vector rescaled to unit Euclidean norm together with the logarithm of
/// the removed scale: the represented value is `e^{log_scale} · unit`.
#[derive(Clone, Debug)]
pub struct ScaledVector {
    pub unit: CVec,
    pub log_scale: f64,
}

/// `e^{A} v` in log-magnitude form.
///
/// The mean eigenvalue `tr(A)/m` is split off exactly, the remainder is
/// scaled by `2^{-s}` into the unit ball, exponentiated by Padé, and
/// squared back `s` times with renormalisation after every squaring so that
/// magnitudes like `e^{2000}` stay representable.
pub fn expm_action_scaled(a: &CMat, v: &CVec) -> ScaledVector {
    let m = a.nrows();
    let mut log_scale = 0.0;
    if m == 0 {
        return ScaledVector {
            unit: v.clone(),
            log_scale,
        };
    }
    let shift = a.trace() / m as f64;
    let b = a - CMat::identity(m, m) * shift;
    let norm1 = (0..m)
        .map(|c| (0..m).map(|r| b[(r, c)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = &b * Cx::new(2f64.powi(-squarings), 0.0);
    let mut e = scaled.exp();
    for _ in 0..squarings {
        e = &e * &e;
        let nrm = e.norm();
        e /= Cx::new(nrm, 0.0);
        log_scale = 2.0 * log_scale + nrm.ln();
    }
    let mut out = e * v * (Cx::new(0.0, shift.im)).exp();
    log_scale += shift.re;
    let nrm = out.norm();
    if nrm > 0.0 {
        out /= Cx::new(nrm, 0.0);
        log_scale += nrm.ln();
    } else {
        log_scale = f64::NEG_INFINITY;
    }
    ScaledVector {
        unit: out,
        log_scale,
    }
}

/// `Σ_k c_k A^k v` style helper: `p(A)` applied as a polynomial in one matrix.
pub fn poly_in_matrix(a: &CMat, coeffs: &[Cx]) -> CMat {
    let m = a.nrows();
    let mut acc = CMat::zeros(m, m);
    for &c in coeffs.iter().rev() {
        acc = &acc * a + CMat::identity(m, m) * c;
    }
    acc
}

pub fn identity(m: usize) -> CMat {
    CMat::from_fn(m, m, |r, c| if r == c { ONE } else { ZERO })
}
