//! End-to-end reproductions of the worked examples, shared by the CLI
//! `example` subcommand and the acceptance suite so both run the same code.

use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{build_l, hs_bound};
use crate::gns::{self, convolve, convolve_moments, gns_reconstruct, DEFAULT_NULL_TOL};
use crate::jordan::{distribution_rep, joint_spectral_decompose, round_trip_error, Classification, JordanOptions};
use crate::kernel::{certify_growth, eval_f, GrowthConfig, SupportSet};
use crate::models::{self, AtomicMeasure, RadialKind, RadialWeightModel, TorusSampling};
use crate::multiindex::enumerate_upto;
use crate::random::{self, TupleRng};
use crate::tuples::CyclicTuple;
use crate::{CMat, CVec, Cx, ONE};

pub const EXAMPLES: &[&str] = &[
    "varopoulos-kaijser",
    "jordan-block",
    "drury-arveson",
    "atomic-measure",
    "hardy-scale",
    "ht-scale",
    "convolution",
];

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Named values plus pass/fail checks from one reproduction.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub name: String,
    pub values: Vec<(String, f64)>,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(name: &str) -> Self {
        Report {
            name: name.to_string(),
            ..Default::default()
        }
    }

    fn value(&mut self, key: impl Into<String>, v: f64) {
        self.values.push((key.into(), v));
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "example {}", self.name)?;
        for (k, v) in &self.values {
            writeln!(f, "  {k:<28} {v:.9}")?;
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "  [{tag}] {} ({})", c.name, c.detail)?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

pub fn run_example(name: &str, seed: u64) -> Result<Report> {
    match name {
        "varopoulos-kaijser" => Ok(varopoulos_kaijser()),
        "jordan-block" => jordan_blocks(seed),
        "drury-arveson" => Ok(drury_arveson()),
        "atomic-measure" => atomic_measure(seed),
        "hardy-scale" => hardy_scale(seed),
        "ht-scale" => ht_scale(),
        "convolution" => convolution(seed, 10),
        other => Err(Error::invalid(
            "example",
            format!("unknown example `{other}`, expected one of {}", EXAMPLES.join(", ")),
        )),
    }
}

fn random_point(rng: &mut TupleRng, n: usize, scale: f64) -> Vec<Cx> {
    (0..n).map(|_| random::complex_normal(rng) * scale).collect()
}

/// `‖p(T)‖ = 3√3` against `sup_{𝔻³}|p| = 5`.
pub fn varopoulos_kaijser() -> Report {
    let mut r = Report::new("varopoulos-kaijser");
    let vk = models::varopoulos_kaijser();
    let pt = vk.p.eval_matrix(vk.tuple.matrices());
    let norm = vk.tuple.operator_norm_of(&pt);
    let sup = models::polydisc_sup(&vk.p, &TorusSampling::default());
    let witness = vk.p.eval(&[ONE, ONE, -ONE]);
    let ratio = norm / sup.value;
    r.value("norm_p_of_T", norm);
    r.value("polydisc_sup", sup.value);
    r.value("witness_p(1,1,-1)", witness.re);
    r.value("ratio", ratio);
    let target = 27f64.sqrt();
    r.check("norm p(T) = 3 sqrt 3", (norm - target).abs() <= 1e-10, format!("error {:.2e}", (norm - target).abs()));
    r.check(
        "sampled sup in [4.99, 5]",
        (4.99..=5.0 + 1e-9).contains(&sup.value),
        format!("{} torus samples", sup.evaluations),
    );
    r.check("witness p(1,1,-1) = 5", witness == Cx::new(5.0, 0.0), format!("{witness}"));
    r.check("violation ratio >= 1.039", ratio >= 1.039, format!("{ratio:.6}"));
    let max_norm = vk.tuple.operator_norms().into_iter().fold(0.0, f64::max);
    r.check("T_i are contractions", max_norm <= 1.0 + 1e-12, format!("max norm {max_norm:.12}"));

    // In the polydisc Hardy normalisation the moment matrix is
    // 1⊗1 + Σ z_i⊗z_i + (1/3) q⊗q; in the Fock normalisation the rank-one
    // part becomes g⊗g with g = p/(2√3), of norm 3/2.
    let mt = vk.tuple.moments(2);
    let idx = mt.index();
    let q = CVec::from_iterator(idx.len(), idx.indices().iter().map(|a| vk.q.coeff(a)));
    let mut hardy = &q * q.adjoint() / Cx::new(3.0, 0.0);
    for k in 0..4 {
        hardy[(k, k)] = ONE;
    }
    let structure_err = (mt.matrix() - hardy).norm();
    r.check("L = 1x1 + sum z_i x z_i + q x q / 3", structure_err <= 1e-14, format!("{structure_err:.2e}"));
    let l = build_l(&mt);
    let mut ev = l.eigenvalues();
    ev.retain(|x| x.abs() > 1e-12);
    let expect = [1.5, 1.0, 1.0, 1.0, 1.0];
    let ok = ev.len() == 5 && ev.iter().zip(expect).all(|(a, b)| (a - b).abs() <= 1e-12);
    r.check("Fock L spectrum {3/2,1,1,1,1}", ok, format!("{ev:.6?}"));
    let h2 = l.matrix()[(0, 0)].re;
    r.check("<L 1, 1> = |h|^2 = 1", (h2 - 1.0).abs() <= 1e-15, format!("{h2}"));
    r
}

/// Jordan blocks `m = 1..5` at 0: kernel series, moments, distribution
/// round trip and the growth exponent `2(m − 1)`.
pub fn jordan_blocks(seed: u64) -> Result<Report> {
    let mut r = Report::new("jordan-block");
    let mut rng = random::rng(seed);
    for m in 1..=5usize {
        let t = models::jordan_block_tuple(m, Cx::new(0.0, 0.0));

        let mut kernel_err: f64 = 0.0;
        for _ in 0..20 {
            let z = random_point(&mut rng, 1, 2.0);
            let w = random_point(&mut rng, 1, 2.0);
            let x = z[0] * w[0].conj();
            let mut expect = Cx::new(0.0, 0.0);
            let mut term = ONE;
            for k in 0..m {
                if k > 0 {
                    term *= x / (k * k) as f64;
                }
                expect += term;
            }
            kernel_err = kernel_err.max((eval_f(&t, &z, &w) - expect).norm() / expect.norm());
        }
        r.check(format!("m={m} kernel series"), kernel_err <= 1e-12, format!("rel err {kernel_err:.2e}"));

        let d = m + 1;
        let mt = t.moments(d);
        let mut moment_err: f64 = 0.0;
        for k in 0..=d {
            for l in 0..=d {
                let expect = if k == l && k < m { 1.0 } else { 0.0 };
                let got = mt.matrix()[(l, k)];
                moment_err = moment_err.max((got - expect).norm());
            }
        }
        r.check(format!("m={m} moments delta"), moment_err <= 1e-12, format!("err {moment_err:.2e}"));

        let dec = joint_spectral_decompose(&t, &JordanOptions::default())?;
        let jordan = dec.classification == Classification::Jordan;
        let rt = if jordan {
            let rep = distribution_rep(&t, &dec, m.max(2))?;
            round_trip_error(&rep, &mt)
        } else {
            f64::INFINITY
        };
        r.check(format!("m={m} distribution round trip"), jordan && rt <= 1e-9, format!("err {rt:.2e}"));

        let cert = certify_growth(&t, &SupportSet::origin(1), &GrowthConfig::default())?;
        let target = 2.0 * (m as f64 - 1.0);
        r.value(format!("m={m} N_hat"), cert.n_hat);
        r.check(
            format!("m={m} growth exponent"),
            (cert.n_hat - target).abs() <= 0.15,
            format!("N_hat {:.4} vs {target}", cert.n_hat),
        );

        let hs = build_l(&mt).hs_norm_sqr();
        r.check(format!("m={m} HS bound"), hs <= hs_bound(&t), format!("{hs:.4} <= {:.4}", hs_bound(&t)));
    }
    Ok(r)
}

/// `α!/|α|!` from the distribution `u`, for `n ≤ 3` and `|α| ≤ 6`.
pub fn drury_arveson() -> Report {
    let mut r = Report::new("drury-arveson");
    let mut max_weight_err: f64 = 0.0;
    let mut max_factor_err: f64 = 0.0;
    let mut max_table_err: f64 = 0.0;
    for n in 1..=3usize {
        let model = RadialWeightModel {
            n,
            kind: RadialKind::DruryArveson,
        };
        let table = models::radial_moment_table(&model, 6);
        let idx = enumerate_upto(n, 6);
        for a in &idx {
            // α!/|α|! in exact integer arithmetic.
            let num: u64 = a.as_slice().iter().map(|&k| (1..=k as u64).product::<u64>()).product();
            let den: u64 = (1..=a.degree() as u64).product();
            let exact = num as f64 / den as f64;
            for b in &idx {
                let u = models::da_distribution_moment(n, a, b);
                let target = if a == b { exact } else { 0.0 };
                max_weight_err = max_weight_err.max((u - target).norm());
                max_table_err = max_table_err.max((u - table.get(a, b)).norm());
            }
            let product = models::radial_factor_product(n, a.degree()) * models::sphere_moment(n, a, a);
            max_factor_err = max_factor_err.max((product - exact).abs());
        }
    }
    r.value("max |u - a!/|a|!|", max_weight_err);
    r.value("max |factor product - a!/|a|!|", max_factor_err);
    r.check("u(z^a conj z^b) = delta a!/|a|!", max_weight_err <= 1e-12, format!("{max_weight_err:.2e}"));
    r.check("(R + jI) factor product", max_factor_err <= 1e-12, format!("{max_factor_err:.2e}"));
    r.check("matches radial moment table", max_table_err <= 1e-12, format!("{max_table_err:.2e}"));
    r
}

/// Three weighted atoms in `ℂ²`: kernel against the Fourier–Laplace
/// transform, norms against coordinate sups, and convolution of measures
/// against convolution of tuples.
pub fn atomic_measure(seed: u64) -> Result<Report> {
    let mut r = Report::new("atomic-measure");
    let c = Cx::new;
    let mu = AtomicMeasure::new(
        vec![
            vec![c(0.5, 0.0), c(0.0, 0.3)],
            vec![c(-0.2, 0.4), c(0.6, 0.0)],
            vec![c(0.1, -0.5), c(-0.3, -0.3)],
        ],
        vec![0.5, 0.3, 0.2],
    )?;
    let nu = AtomicMeasure::new(vec![vec![c(0.2, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, -0.4)]], vec![1.0, 2.0])?;
    let t = models::atomic_tuple(&mu);
    let mut rng = random::rng(seed);
    let mut err: f64 = 0.0;
    let mut fl_err: f64 = 0.0;
    for _ in 0..50 {
        let z = random_point(&mut rng, 2, 1.5);
        let w = random_point(&mut rng, 2, 1.5);
        let f = eval_f(&t, &z, &w);
        err = err.max((f - mu.kernel(&z, &w)).norm() / f.norm());
        let hat = mu.fourier_laplace(&models::fourier_laplace_variables(&z, &w));
        fl_err = fl_err.max((f - hat).norm() / f.norm());
    }
    r.value("kernel rel err", err);
    r.check("F = sum w exp(<z,a> + <a,w>)", err <= 1e-10, format!("{err:.2e}"));
    r.check("F = Fourier-Laplace transform", fl_err <= 1e-10, format!("{fl_err:.2e}"));

    let norm_err = t
        .operator_norms()
        .iter()
        .zip(mu.coordinate_sup())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    r.check("|M_zi| = sup |z_i| on support", norm_err <= 1e-12, format!("{norm_err:.2e}"));

    let d = 4;
    let conv = mu.convolve(&nu)?;
    let direct = models::atomic_tuple(&conv).moments(d);
    let s = models::atomic_tuple(&nu);
    let table = convolve_moments(&t.moments(d), &s.moments(d))?;
    let table_err = table.max_abs_diff(&direct);
    r.check("moment convolution = atomic convolution", table_err <= 1e-9, format!("{table_err:.2e}"));
    let rebuilt = gns_reconstruct(&table, DEFAULT_NULL_TOL)?;
    let rebuilt_err = rebuilt.tuple.moments(d - 1).max_abs_diff(&direct.restrict(d - 1)?);
    r.value("reconstructed dim", rebuilt.tuple.dim() as f64);
    r.check("reconstructed tuple moments", rebuilt_err <= 1e-9, format!("{rebuilt_err:.2e}"));
    Ok(r)
}

/// Shifts on the disc Hardy space seen through the Hardy space of radius 2:
/// `F(z, w) = 1/(1 − z w̄/16)`.
pub fn hardy_scale(seed: u64) -> Result<Report> {
    let mut r = Report::new("hardy-scale");
    let base = RadialWeightModel::new(1, RadialKind::Hardy(1.0))?;
    let middle = RadialWeightModel::new(1, RadialKind::Hardy(2.0))?;
    let mut rng = random::rng(seed);
    let mut err: f64 = 0.0;
    let mut converged = true;
    for _ in 0..50 {
        let z = [random::complex_in_disc(&mut rng, 1.5)];
        let w = [random::complex_in_disc(&mut rng, 1.5)];
        let v = models::weighted_model_kernel(&base, &middle, &z, &w, 40)?;
        converged &= v.converged;
        let closed = 1.0 / (1.0 - z[0] * w[0].conj() / 16.0);
        err = err.max((v.value - closed).norm());
    }
    r.value("max abs err", err);
    r.check("F = 1/(1 - z conj(w)/16)", err <= 1e-12, format!("{err:.2e}"));
    r.check("series converged", converged, "ratio test at degree 40");
    Ok(r)
}

/// `H_t` shifts through `H_{t+s}`: first coefficient and the norm band
/// against `H_{t+2s}`.
pub fn ht_scale() -> Result<Report> {
    let mut r = Report::new("ht-scale");
    let (n, t, s) = (2usize, 1.0, 0.5);
    let base = RadialWeightModel::new(n, RadialKind::Ht(t))?;
    let middle = RadialWeightModel::new(n, RadialKind::Ht(t + s))?;
    let x = 0.1;
    let z = [Cx::new(x, 0.0), Cx::new(0.0, 0.0)];
    let lin = models::weighted_model_kernel(&base, &middle, &z, &[ONE, ONE], 1)?.value.re - 1.0;
    let expect = (t + s) * (t + s) / t * x;
    r.check("|a| = 1 coefficient (t+s)^2/t", (lin - expect).abs() <= 1e-12, format!("{lin:.12} vs {expect:.12}"));
    let band = models::ht_ratio_band(n, t, s, 40)?;
    r.value("band min", band.min);
    r.value("band max", band.max);
    r.check(
        "norm ratio bounded for |a| <= 40",
        band.min > 0.0 && band.max.is_finite(),
        format!("[{:.6}, {:.6}]", band.min, band.max),
    );
    Ok(r)
}

fn scalar_tuple(a: f64) -> CyclicTuple {
    CyclicTuple::new(vec![CMat::from_element(1, 1, Cx::new(a, 0.0))], CVec::from_element(1, ONE))
        .expect("scalar tuple is well formed")
}

/// Random pairs of contractive 2×2/3×3 tuples: `‖R_i^{(d)}‖ ≤ ‖T_i‖ + ‖S_i‖`
/// at `d = 3, 4, 5`, plus the tight scalar case `[1] ⋆ [2] = [3]`.
pub fn convolution(seed: u64, pairs: usize) -> Result<Report> {
    let mut r = Report::new("convolution");
    let mut tight_err: f64 = 0.0;
    for d in 3..=5 {
        let res = convolve(&scalar_tuple(1.0), &scalar_tuple(2.0), d, DEFAULT_NULL_TOL)?;
        tight_err = tight_err.max((res.norms[0] - 3.0).abs());
    }
    r.check("[1] * [2] has norm 3", tight_err <= 1e-12, format!("{tight_err:.2e}"));

    let mut rng = random::rng(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut oracle_err: f64 = 0.0;
    for _ in 0..pairs {
        let n = 1 + (rand::Rng::random::<u32>(&mut rng) % 2) as usize;
        let m1 = 2 + (rand::Rng::random::<u32>(&mut rng) % 2) as usize;
        let m2 = 2 + (rand::Rng::random::<u32>(&mut rng) % 2) as usize;
        let t = random::polynomial_tuple(&mut rng, n, m1, 1.0);
        let s = random::polynomial_tuple(&mut rng, n, m2, 1.0);
        for d in 3..=5 {
            let res = convolve(&t, &s, d, DEFAULT_NULL_TOL)?;
            worst = worst.max(res.bound_excess());
        }
        let oracle = gns::tensor_sum(&t, &s)?.moments(4);
        let table = convolve_moments(&t.moments(4), &s.moments(4))?;
        oracle_err = oracle_err.max(table.max_abs_diff(&oracle) / oracle.matrix().norm());
    }
    r.value("max norm excess", worst);
    r.check(
        format!("{pairs} random pairs within 1e-8 of the bound"),
        worst <= 1e-8,
        format!("max excess {worst:.3e}"),
    );
    r.check("moments match tensor-sum oracle", oracle_err <= 1e-12, format!("rel err {oracle_err:.2e}"));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_example_is_input_error() {
        assert!(matches!(run_example("nope", 1), Err(Error::InvalidInput { .. })));
    }

    #[test]
    fn closed_form_examples_pass() {
        for r in [varopoulos_kaijser(), drury_arveson(), ht_scale().unwrap(), hardy_scale(3).unwrap()] {
            assert!(r.passed(), "{r}");
        }
    }
}
