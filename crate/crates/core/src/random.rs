//! Seeded generators for random commuting tuples used by tests, the CLI and
//! the acceptance suite. Every generator takes an explicit RNG so runs are
//! reproducible from a single `u64` seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg;
use crate::tuples::CyclicTuple;
use crate::{CMat, CVec, Cx, ZERO};

pub type TupleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TupleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (`E|z|² = 1`).
pub fn complex_normal<R: Rng>(rng: &mut R) -> Cx {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Cx::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Uniform point in the complex disc of radius `r`.
pub fn complex_in_disc<R: Rng>(rng: &mut R, r: f64) -> Cx {
    let rad = r * rng.random::<f64>().sqrt();
    Cx::from_polar(rad, rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn complex_vector<R: Rng>(rng: &mut R, len: usize) -> CVec {
    CVec::from_fn(len, |_, _| complex_normal(rng))
}

/// Ginibre matrix with entries of variance `1/m`.
pub fn ginibre<R: Rng>(rng: &mut R, m: usize) -> CMat {
    let s = 1.0 / (m as f64).sqrt();
    CMat::from_fn(m, m, |_, _| complex_normal(rng) * s)
}

/// Haar-distributed unitary from the QR factorisation of a Ginibre matrix.
pub fn unitary<R: Rng>(rng: &mut R, m: usize) -> CMat {
    let qr = ginibre(rng, m).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for k in 0..m {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for row in 0..m {
                u[(row, k)] *= phase;
            }
        }
    }
    u
}

/// Invertible matrix `I + strength·X` with `X` Ginibre, redrawn until its
/// condition number is below 50.
pub fn similarity<R: Rng>(rng: &mut R, m: usize, strength: f64) -> CMat {
    loop {
        let s = linalg::identity(m) + ginibre(rng, m) * Cx::new(strength, 0.0);
        let (_, sv, _) = linalg::svd_full(&s);
        if sv[m - 1] > 0.0 && sv[0] / sv[m - 1] < 50.0 {
            return s;
        }
    }
}

fn rescale(t: &CMat, target: f64) -> CMat {
    let nrm = linalg::spectral_norm(t);
    if nrm == 0.0 {
        t.clone()
    } else {
        t * Cx::new(target / nrm, 0.0)
    }
}

/// `n` commuting matrices `T_i = p_i(A)` for one Ginibre matrix `A`, each
/// rescaled to an operator norm drawn from `[0.3, 1]·max_norm`, with a
/// Gaussian distinguished vector. `p_1` has a nonzero linear term, so
/// generic draws are cyclic.
pub fn polynomial_tuple<R: Rng>(rng: &mut R, n: usize, m: usize, max_norm: f64) -> CyclicTuple {
    let a = ginibre(rng, m);
    let matrices = (0..n)
        .map(|i| {
            let mut coeffs: Vec<Cx> = (0..3).map(|_| complex_normal(rng) * 0.5).collect();
            if i == 0 {
                coeffs[1] = Cx::new(1.0, 0.0) + coeffs[1] * 0.2;
            }
            let t = linalg::poly_in_matrix(&a, &coeffs);
            rescale(&t, max_norm * rng.random_range(0.3..1.0))
        })
        .collect();
    let h = complex_vector(rng, m);
    CyclicTuple::new(matrices, h).expect("random tuple is well formed")
}

/// The `s×s` nilpotent shift with ones on the subdiagonal.
pub fn shift_matrix(s: usize) -> CMat {
    CMat::from_fn(s, s, |r, c| if r == c + 1 { Cx::new(1.0, 0.0) } else { ZERO })
}

/// A random Jordan tuple: a direct sum of blocks `λ_k I + N_k` with
/// commuting nilpotents `N_{k,i} = q_{k,i}(J)` (`J` the shift, `q(0) = 0`),
/// conjugated by a Haar unitary. Joint eigenvalues are kept at least 0.5
/// apart. Total dimension is at most `max_dim`.
pub fn jordan_tuple<R: Rng>(rng: &mut R, n: usize, max_dim: usize) -> CyclicTuple {
    let dim = rng.random_range(1..=max_dim);
    let mut sizes = Vec::new();
    let mut left = dim;
    while left > 0 {
        let s = rng.random_range(1..=left.min(3));
        sizes.push(s);
        left -= s;
    }
    jordan_tuple_with_sizes(rng, n, &sizes)
}

/// Same construction as [`jordan_tuple`] with prescribed block sizes.
pub fn jordan_tuple_with_sizes<R: Rng>(rng: &mut R, n: usize, sizes: &[usize]) -> CyclicTuple {
    assert!(!sizes.is_empty() && sizes.iter().all(|&s| s > 0), "block sizes must be positive");
    let dim: usize = sizes.iter().sum();
    let mut points: Vec<Vec<Cx>> = Vec::new();
    while points.len() < sizes.len() {
        let p: Vec<Cx> = (0..n).map(|_| complex_in_disc(rng, 1.5)).collect();
        let far = points.iter().all(|q| {
            p.iter()
                .zip(q)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt()
                > 0.5
        });
        if far {
            points.push(p);
        }
    }
    let mut matrices = vec![CMat::zeros(dim, dim); n];
    let mut h = CVec::zeros(dim);
    let mut offset = 0;
    for (s, lam) in sizes.iter().zip(&points) {
        let j = shift_matrix(*s);
        for (i, t) in matrices.iter_mut().enumerate() {
            let mut coeffs: Vec<Cx> = (0..*s).map(|_| complex_normal(rng) * 0.6).collect();
            coeffs[0] = ZERO;
            if i == 0 && *s > 1 {
                coeffs[1] = Cx::new(1.0, 0.0);
            }
            let block = linalg::poly_in_matrix(&j, &coeffs) + linalg::identity(*s) * lam[i];
            t.view_mut((offset, offset), (*s, *s)).copy_from(&block);
        }
        h[offset] = Cx::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..std::f64::consts::TAU));
        offset += s;
    }
    let u = unitary(rng, dim);
    let ua = u.adjoint();
    let matrices = matrices.iter().map(|t| &u * t * &ua).collect();
    CyclicTuple::new(matrices, &u * h).expect("random Jordan tuple is well formed")
}
