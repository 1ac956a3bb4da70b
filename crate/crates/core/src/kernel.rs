//! The kernel `F(z, w) = ⟨e^{⟨T,w⟩} h, e^{⟨T,z⟩} h⟩` with `⟨T,w⟩ = Σ w̄_i T_i`,
//! sampled growth certificates against `C(1+|z|+|w|)^N e^{H_K(z+w)}`, and
//! positivity tests on Taylor coefficient tables.
//!
//! A growth certificate is a numerical fit on finitely many samples. It is
//! evidence about the order and support of the moment functional, not a
//! proof.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, ScaledVector};
use crate::random;
use crate::tuples::{CyclicTuple, MomentTable};
use crate::{CMat, CVec, Cx};

/// Compact convex set `K ⊂ ℂⁿ` given by a ball or by the hull of finitely many points.
#[derive(Clone, Debug, PartialEq)]
pub enum SupportSet {
    Ball { center: Vec<Cx>, radius: f64 },
    Points(Vec<Vec<Cx>>),
}

impl SupportSet {
    pub fn origin(n: usize) -> Self {
        SupportSet::Points(vec![vec![Cx::new(0.0, 0.0); n]])
    }

    pub fn point(p: Vec<Cx>) -> Self {
        SupportSet::Points(vec![p])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SupportSet::Ball { radius, .. } if radius.is_nan() || *radius < 0.0 => {
                Err(Error::invalid("radius", "must be non-negative"))
            }
            SupportSet::Points(p) if p.is_empty() => Err(Error::invalid("points", "empty point set")),
            _ => Ok(()),
        }
    }
}

/// `Re⟨λ, z⟩ = Re Σ λ_i conj(z_i)`.
fn re_pairing(lambda: &[Cx], z: &[Cx]) -> f64 {
    lambda.iter().zip(z).map(|(l, z)| (l * z.conj()).re).sum()
}

fn euclid(z: &[Cx]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `H_K(z) = sup_{λ∈K} Re⟨λ, z⟩`.
pub fn supporting_function(k: &SupportSet, z: &[Cx]) -> f64 {
    match k {
        SupportSet::Ball { center, radius } => re_pairing(center, z) + radius * euclid(z),
        SupportSet::Points(points) => points
            .iter()
            .map(|p| re_pairing(p, z))
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

/// `log|F|` together with the phase `F/|F|`.
#[derive(Clone, Copy, Debug)]
pub struct LogValue {
    pub log_abs: f64,
    pub phase: Cx,
}

impl LogValue {
    pub fn value(&self) -> Cx {
        self.phase * self.log_abs.exp()
    }
}

fn exp_orbit(t: &CyclicTuple, z: &[Cx]) -> ScaledVector {
    assert_eq!(z.len(), t.n(), "point has wrong dimension");
    let m = t.dim();
    let mut a = CMat::zeros(m, m);
    for (ti, zi) in t.matrices().iter().zip(z) {
        a += ti * zi.conj();
    }
    linalg::expm_action_scaled(&a, t.h())
}

/// `e^{⟨T,z⟩} h` as an ordinary vector.
pub fn exp_vector(t: &CyclicTuple, z: &[Cx]) -> CVec {
    let s = exp_orbit(t, z);
    s.unit * Cx::new(s.log_scale.exp(), 0.0)
}

/// `F(z, w)` in log-magnitude form; usable far beyond the `f64` range.
pub fn eval_f_log(t: &CyclicTuple, z: &[Cx], w: &[Cx]) -> LogValue {
    let sz = exp_orbit(t, z);
    let sw = exp_orbit(t, w);
    let ip = t.inner(&sw.unit, &sz.unit);
    let r = ip.norm();
    LogValue {
        log_abs: sz.log_scale + sw.log_scale + r.ln(),
        phase: if r > 0.0 { ip / r } else { Cx::new(1.0, 0.0) },
    }
}

pub fn eval_f(t: &CyclicTuple, z: &[Cx], w: &[Cx]) -> Cx {
    eval_f_log(t, z, w).value()
}

/// Taylor coefficients `c_{α,β} = m(β, α)/(α!β!)` of
/// `F(z, w) = Σ c_{α,β} z^α w̄^β`, as a matrix with row `α`, column `β`.
pub fn kernel_coefficients(mt: &MomentTable) -> CMat {
    let idx = mt.index();
    let f: Vec<f64> = idx.indices().iter().map(|a| a.factorial()).collect();
    let m = mt.matrix();
    CMat::from_fn(idx.len(), idx.len(), |a, b| m[(a, b)] / (f[a] * f[b]))
}

/// Degree-`d` truncation `Σ_{|α|,|β|≤d} m(β,α)/(α!β!) z^α w̄^β`.
pub fn taylor_kernel(mt: &MomentTable, z: &[Cx], w: &[Cx]) -> Cx {
    let idx = mt.index();
    let zs = CVec::from_iterator(idx.len(), idx.indices().iter().map(|a| a.monomial(z)));
    let wb: Vec<Cx> = w.iter().map(|c| c.conj()).collect();
    let ws = CVec::from_iterator(idx.len(), idx.indices().iter().map(|a| a.monomial(&wb)));
    zs.dot(&(kernel_coefficients(mt) * ws))
}

/// Bound on `|F − taylor_kernel|` at `(z, w)`:
/// `e^{s} ‖h‖² s^{d+1}/(d+1)!` with `s = √n · max_i‖T_i‖ · (|z|+|w|)`.
pub fn taylor_tail_bound(t: &CyclicTuple, z: &[Cx], w: &[Cx], d: usize) -> f64 {
    let tn = t.operator_norms().iter().copied().fold(0.0, f64::max);
    let s = tn * (euclid(z) + euclid(w)) * (t.n() as f64).sqrt();
    let fact: f64 = (1..=d + 1).map(|k| k as f64).product();
    s.exp() * t.norm(t.h()).powi(2) * s.powi(d as i32 + 1) / fact
}

/// Sampling plan for growth fits.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthConfig {
    pub radii: Vec<f64>,
    pub directions: usize,
    pub seed: u64,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            radii: vec![10.0, 30.0, 100.0, 300.0, 1000.0],
            directions: 32,
            seed: 42,
        }
    }
}

impl GrowthConfig {
    fn check(&self) -> Result<()> {
        if self.radii.is_empty() {
            return Err(Error::invalid("radii", "empty list"));
        }
        if self.radii.windows(2).any(|w| w[1] <= w[0]) || self.radii[0] <= 0.0 {
            return Err(Error::invalid("radii", "must be positive and strictly increasing"));
        }
        if *self.radii.last().unwrap() < 10.0 {
            return Err(Error::invalid("radii", "largest radius must be at least 10"));
        }
        if self.directions == 0 {
            return Err(Error::invalid("directions", "need at least one direction"));
        }
        Ok(())
    }
}

/// One sample `(z, w)` with `x = ln(1+|z|+|w|)` and `y = log|F(z,w)| − H_K(z+w)`.
#[derive(Clone, Debug)]
pub struct GrowthSample {
    pub radius: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug)]
pub struct GrowthCertificate {
    /// Fitted exponent `N̂`.
    pub n_hat: f64,
    /// Fitted `log Ĉ`.
    pub log_c_hat: f64,
    /// `max (y − N̂x − log Ĉ)` over the fitted samples.
    pub residual_max: f64,
    pub radii: Vec<f64>,
    pub directions: usize,
    pub samples_used: usize,
    pub samples_dropped: usize,
    pub warnings: Vec<String>,
}

fn unit_direction<R: rand::Rng>(rng: &mut R, n: usize) -> Vec<Cx> {
    let v: Vec<Cx> = (0..n).map(|_| random::complex_normal(rng)).collect();
    let s = euclid(&v);
    v.into_iter().map(|c| c / s).collect()
}

/// Samples `(z, w)` at every radius; even directions draw `z` and `w`
/// independently, odd directions take `w = z̄`.
fn sample_points(n: usize, cfg: &GrowthConfig) -> Vec<(f64, Vec<Cx>, Vec<Cx>)> {
    let mut rng = random::rng(cfg.seed);
    let dirs: Vec<(Vec<Cx>, Vec<Cx>)> = (0..cfg.directions)
        .map(|k| {
            let u = unit_direction(&mut rng, n);
            let v = if k % 2 == 0 {
                unit_direction(&mut rng, n)
            } else {
                u.iter().map(|c| c.conj()).collect()
            };
            (u, v)
        })
        .collect();
    let mut out = Vec::with_capacity(cfg.radii.len() * dirs.len());
    for &r in &cfg.radii {
        for (u, v) in &dirs {
            let z = u.iter().map(|c| c * r).collect();
            let w = v.iter().map(|c| c * r).collect();
            out.push((r, z, w));
        }
    }
    out
}

fn collect_samples(
    t: &CyclicTuple,
    k: &SupportSet,
    cfg: &GrowthConfig,
) -> Result<(Vec<GrowthSample>, usize, Vec<String>)> {
    k.validate()?;
    cfg.check()?;
    let points = sample_points(t.n(), cfg);
    let raw: Vec<GrowthSample> = points
        .par_iter()
        .map(|(r, z, w)| {
            let f = eval_f_log(t, z, w);
            let sum: Vec<Cx> = z.iter().zip(w).map(|(a, b)| a + b).collect();
            GrowthSample {
                radius: *r,
                x: (1.0 + euclid(z) + euclid(w)).ln(),
                y: f.log_abs - supporting_function(k, &sum),
            }
        })
        .collect();
    let total = raw.len();
    let kept: Vec<GrowthSample> = raw.into_iter().filter(|s| s.y.is_finite()).collect();
    let dropped = total - kept.len();
    let mut warnings = Vec::new();
    if dropped > 0 {
        warnings.push(format!(
            "{dropped} of {total} samples had |F| = 0 or a non-finite logarithm and were dropped"
        ));
    }
    Ok((kept, dropped, warnings))
}

/// Least-squares fit of `y ≈ N x + log C` over the samples with `x ≥ 1`.
fn fit_line(samples: &[GrowthSample]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = samples.iter().filter(|s| s.x >= 1.0).map(|s| (s.x, s.y)).collect();
    let k = pts.len() as f64;
    if pts.is_empty() {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 1e-12 * k {
        return Some((0.0, my));
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

pub fn certify_growth(t: &CyclicTuple, k: &SupportSet, cfg: &GrowthConfig) -> Result<GrowthCertificate> {
    let (samples, dropped, mut warnings) = collect_samples(t, k, cfg)?;
    let (n_hat, log_c_hat) = fit_line(&samples).ok_or_else(|| {
        Error::invalid("radii", "no finite samples with ln(1+|z|+|w|) ≥ 1 to fit")
    })?;
    let fitted: Vec<&GrowthSample> = samples.iter().filter(|s| s.x >= 1.0).collect();
    let residual_max = fitted
        .iter()
        .map(|s| s.y - (n_hat * s.x + log_c_hat))
        .fold(f64::NEG_INFINITY, f64::max);
    if fitted.len() < samples.len() {
        warnings.push(format!(
            "{} samples below the fit window were ignored",
            samples.len() - fitted.len()
        ));
    }
    Ok(GrowthCertificate {
        n_hat,
        log_c_hat,
        residual_max,
        radii: cfg.radii.clone(),
        directions: cfg.directions,
        samples_used: fitted.len(),
        samples_dropped: dropped,
        warnings,
    })
}

/// `log|F(z, z)| − H_K(2z)` along the ray `z = r·u`, one value per radius.
pub fn excess_along_ray(t: &CyclicTuple, k: &SupportSet, direction: &[Cx], radii: &[f64]) -> Vec<f64> {
    radii
        .iter()
        .map(|r| {
            let z: Vec<Cx> = direction.iter().map(|c| c * *r).collect();
            let two_z: Vec<Cx> = z.iter().map(|c| c * 2.0).collect();
            eval_f_log(t, &z, &z).log_abs - supporting_function(k, &two_z)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct DecayRow {
    pub order: f64,
    /// `(radius, log C_N)` where `log C_N` is the smallest constant valid on
    /// every sample up to that radius.
    pub log_c: Vec<(f64, f64)>,
    /// The constant stopped growing at the largest radius.
    pub stable: bool,
}

#[derive(Clone, Debug)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    pub warnings: Vec<String>,
}

impl DecayReport {
    pub fn all_stable(&self) -> bool {
        self.rows.iter().all(|r| r.stable)
    }
}

/// For each `N` the smallest `C_N` with `|F| ≤ C_N (1+|z|+|w|)^{−N} e^{H_K(z+w)}`
/// on the samples, accumulated radius by radius.
pub fn rapid_decay_check(
    t: &CyclicTuple,
    k: &SupportSet,
    orders: &[f64],
    cfg: &GrowthConfig,
) -> Result<DecayReport> {
    let (samples, _, warnings) = collect_samples(t, k, cfg)?;
    let rows = orders
        .iter()
        .map(|&order| {
            let mut running = f64::NEG_INFINITY;
            let mut log_c = Vec::with_capacity(cfg.radii.len());
            let mut last_growth = 0.0;
            for &r in &cfg.radii {
                let here = samples
                    .iter()
                    .filter(|s| s.radius == r)
                    .map(|s| s.y + order * s.x)
                    .fold(f64::NEG_INFINITY, f64::max);
                let next = running.max(here);
                last_growth = if running.is_finite() { next - running } else { 0.0 };
                running = next;
                log_c.push((r, running));
            }
            DecayRow {
                order,
                log_c,
                stable: last_growth <= 0.1,
            }
        })
        .collect();
    Ok(DecayReport { rows, warnings })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsdCheck {
    pub passed: bool,
    pub min_eigenvalue: f64,
    pub trace: f64,
}

/// PSD test of a Hermitian matrix: every eigenvalue `≥ −tol·|trace|`.
pub fn psd_check(c: &CMat, tol: f64) -> Result<PsdCheck> {
    if c.nrows() != c.ncols() {
        return Err(Error::DimensionMismatch("coefficient table is not square".into()));
    }
    let defect = linalg::hermitian_defect(c);
    if defect > 1e-10 * c.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian { defect });
    }
    let trace = linalg::trace_re(c);
    let min_eigenvalue = linalg::hermitian_eigen(c).values.last().copied().unwrap_or(0.0);
    Ok(PsdCheck {
        passed: min_eigenvalue >= -tol * trace.abs(),
        min_eigenvalue,
        trace,
    })
}

/// Positive-definiteness of a coefficient table `[c_{α,β}]` in graded-lex order.
pub fn coefficient_psd_check(c: &CMat, tol: f64) -> Result<PsdCheck> {
    psd_check(c, tol)
}

/// `[F(z_s, z_t)]` with row `s`, column `t`.
pub fn kernel_matrix(t: &CyclicTuple, points: &[Vec<Cx>]) -> CMat {
    let k = points.len();
    CMat::from_fn(k, k, |s, u| eval_f(t, &points[s], &points[u]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use proptest::prelude::*;

    fn c(re: f64) -> Cx {
        Cx::new(re, 0.0)
    }

    #[test]
    fn supporting_function_examples() {
        assert_eq!(supporting_function(&SupportSet::origin(2), &[c(3.), c(-1.)]), 0.0);
        let ball = SupportSet::Ball { center: vec![c(0.)], radius: 1.0 };
        assert_eq!(supporting_function(&ball, &[c(2.)]), 2.0);
        let pts = SupportSet::Points(vec![vec![c(1.)], vec![Cx::new(0., 1.)]]);
        assert_eq!(supporting_function(&pts, &[c(1.)]), 1.0);
    }

    #[test]
    fn jordan_kernel_closed_form() {
        let t = models::jordan_block_tuple(2, c(0.));
        let z = [Cx::new(0.4, -1.3)];
        let w = [Cx::new(-2.0, 0.7)];
        let got = eval_f(&t, &z, &w);
        assert!((got - (c(1.) + z[0] * w[0].conj())).norm() < 1e-13);
    }

    #[test]
    fn scalar_kernel_and_origin() {
        let a = Cx::new(0.5, 0.2);
        let t = CyclicTuple::new(vec![CMat::from_element(1, 1, a)], CVec::from_element(1, c(1.))).unwrap();
        assert!((eval_f(&t, &[c(0.)], &[c(0.)]) - c(1.)).norm() < 1e-15);
        let z = [Cx::new(1.0, -2.0)];
        let w = [Cx::new(0.3, 0.9)];
        let want = (a.conj() * z[0] + a * w[0].conj()).exp();
        assert!((eval_f(&t, &z, &w) - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn growth_of_jordan_blocks() {
        for m in 1..=4usize {
            let t = models::jordan_block_tuple(m, c(0.));
            let cert = certify_growth(&t, &SupportSet::origin(1), &GrowthConfig::default()).unwrap();
            let want = 2.0 * (m as f64 - 1.0);
            assert!((cert.n_hat - want).abs() <= 0.15, "m={m}: {cert:?}");
        }
    }

    #[test]
    fn growth_of_point_mass() {
        let a = Cx::new(0.3, -0.4);
        let t = CyclicTuple::new(vec![CMat::from_element(1, 1, a)], CVec::from_element(1, c(1.))).unwrap();
        let cert = certify_growth(&t, &SupportSet::point(vec![a]), &GrowthConfig::default()).unwrap();
        assert!(cert.n_hat.abs() < 1e-6 && cert.residual_max <= 1e-6, "{cert:?}");
        let zero = CyclicTuple::new(vec![CMat::zeros(1, 1)], CVec::from_element(1, c(1.))).unwrap();
        let cert = certify_growth(&zero, &SupportSet::origin(1), &GrowthConfig::default()).unwrap();
        assert!(cert.n_hat.abs() < 1e-12 && cert.log_c_hat.abs() < 1e-12);
    }

    #[test]
    fn wrong_support_diverges_along_the_offset() {
        let lam = c(0.5);
        let other = Cx::new(-0.2, 0.3);
        let t = models::jordan_block_tuple(2, lam);
        let radii = [10.0, 100.0, 1000.0];
        let dir = [(lam - other) / (lam - other).norm()];
        let good = excess_along_ray(&t, &SupportSet::point(vec![lam]), &dir, &radii);
        let bad = excess_along_ray(&t, &SupportSet::point(vec![other]), &dir, &radii);
        assert!(good[2] - good[1] < 6.0);
        assert!(bad[2] - bad[1] > 100.0);
    }

    #[test]
    fn non_jordan_pair_has_divergent_excess() {
        // [[0,0],[1,1]]: F(z,−z) carries cross terms growing like e^{|Re z|}.
        let t = CyclicTuple::new(
            vec![CMat::from_row_slice(2, 2, &[c(0.), c(0.), c(1.), c(1.)])],
            CVec::from_vec(vec![c(1.), c(0.)]),
        )
        .unwrap();
        let k = SupportSet::Points(vec![vec![c(0.)], vec![c(1.)]]);
        let ex: Vec<f64> = [10.0, 30.0, 100.0]
            .iter()
            .map(|&r| {
                let z = [c(-r)];
                let w = [c(r)];
                eval_f_log(&t, &z, &w).log_abs - supporting_function(&k, &[c(0.)])
            })
            .collect();
        assert!(ex[2] > ex[1] + 50.0 && ex[1] > ex[0] + 10.0, "{ex:?}");
    }

    #[test]
    fn point_mass_does_not_decay() {
        let t = CyclicTuple::new(vec![CMat::zeros(1, 1)], CVec::from_element(1, c(1.))).unwrap();
        let rep = rapid_decay_check(&t, &SupportSet::origin(1), &[1.0], &GrowthConfig::default()).unwrap();
        assert!(!rep.all_stable());
    }

    #[test]
    fn coefficient_tables() {
        let t = models::jordan_block_tuple(2, c(0.));
        let coeffs = kernel_coefficients(&t.moments(3));
        let chk = coefficient_psd_check(&coeffs, 1e-12).unwrap();
        assert!(chk.passed && chk.min_eigenvalue.abs() < 1e-15);
        let neg = -crate::linalg::identity(3);
        assert!(!coefficient_psd_check(&neg, 1e-12).unwrap().passed);
        let bad = CMat::from_row_slice(2, 2, &[c(1.), c(1.), c(0.), c(1.)]);
        assert!(coefficient_psd_check(&bad, 1e-12).is_err());
    }

    #[test]
    fn huge_arguments_stay_finite() {
        let t = models::jordan_block_tuple(3, c(1.0));
        let v = eval_f_log(&t, &[c(800.)], &[c(800.)]);
        assert!(v.log_abs.is_finite() && v.log_abs > 1500.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn kernel_is_conjugate_symmetric(seed in 0u64..10_000) {
            let mut r = random::rng(seed);
            let t = random::polynomial_tuple(&mut r, 2, 3, 1.0);
            for _ in 0..10 {
                let z: Vec<Cx> = (0..2).map(|_| random::complex_in_disc(&mut r, 3.0)).collect();
                let w: Vec<Cx> = (0..2).map(|_| random::complex_in_disc(&mut r, 3.0)).collect();
                let a = eval_f(&t, &z, &w);
                let b = eval_f(&t, &w, &z);
                prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
            }
        }

        #[test]
        fn kernel_matches_taylor_series(seed in 0u64..10_000) {
            let mut r = random::rng(seed);
            let t = random::polynomial_tuple(&mut r, 2, 3, 1.0);
            let d = 12;
            let mt = t.moments(d);
            for _ in 0..5 {
                let z: Vec<Cx> = (0..2).map(|_| random::complex_in_disc(&mut r, 1.0)).collect();
                let w: Vec<Cx> = (0..2).map(|_| random::complex_in_disc(&mut r, 1.0)).collect();
                let diff = (eval_f(&t, &z, &w) - taylor_kernel(&mt, &z, &w)).norm();
                prop_assert!(diff <= taylor_tail_bound(&t, &z, &w, d) + 1e-12);
            }
        }

        #[test]
        fn kernel_matrices_are_psd(seed in 0u64..10_000) {
            let mut r = random::rng(seed);
            let t = random::polynomial_tuple(&mut r, 2, 3, 1.0);
            let pts: Vec<Vec<Cx>> = (0..8)
                .map(|_| (0..2).map(|_| random::complex_in_disc(&mut r, 2.0)).collect())
                .collect();
            let chk = psd_check(&kernel_matrix(&t, &pts), 1e-10).unwrap();
            prop_assert!(chk.passed, "{:?}", chk);
        }
    }
}
