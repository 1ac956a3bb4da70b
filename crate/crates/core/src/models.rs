//! Concrete tuples and weighted spaces with closed-form answers.
//!
//! These double as golden values for the rest of the crate: atomic measures
//! (diagonal tuples), Jordan blocks, the Varopoulos–Kaijser triple and the
//! radially weighted spaces (Drury–Arveson, Hardy, `H_t`).

use std::f64::consts::TAU;

use rand::Rng;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::kernel::{psd_check, PsdCheck};
use crate::multiindex::{enumerate_upto, IndexSet};
use crate::random::{self, shift_matrix};
use crate::tuples::{CyclicTuple, MomentTable};
use crate::{linalg, CMat, CVec, Cx, MultiIndex, Polynomial, ONE, ZERO};

/// Finite positive combination of point masses `Σ_j w_j δ_{a_j}` on `ℂⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<Vec<Cx>>,
    weights: Vec<f64>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Vec<Cx>>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("atoms", "measure has no atoms"));
        }
        if atoms.len() != weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        let n = atoms[0].len();
        if n == 0 {
            return Err(Error::invalid("atoms", "atoms must have at least one coordinate"));
        }
        for (j, a) in atoms.iter().enumerate() {
            if a.len() != n {
                return Err(Error::DimensionMismatch(format!("atom {j} has {} coordinates, expected {n}", a.len())));
            }
            if a.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
                return Err(Error::invalid(format!("atoms[{j}]"), "non-finite coordinate"));
            }
            if atoms[..j].contains(a) {
                return Err(Error::invalid(format!("atoms[{j}]"), "duplicate atom, the tuple would not be cyclic"));
            }
        }
        if let Some(j) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::invalid(format!("weights[{j}]"), "weights must be positive and finite"));
        }
        Ok(AtomicMeasure { atoms, weights })
    }

    pub fn point_mass(atom: Vec<Cx>, weight: f64) -> Result<Self> {
        AtomicMeasure::new(vec![atom], vec![weight])
    }

    pub fn n(&self) -> usize {
        self.atoms[0].len()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Vec<Cx>] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫ z^α z̄^β dμ`.
    pub fn moment(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Cx {
        self.atoms
            .iter()
            .zip(&self.weights)
            .map(|(a, w)| alpha.monomial(a) * beta.monomial(a).conj() * *w)
            .sum()
    }

    pub fn moments(&self, d: usize) -> MomentTable {
        MomentTable::from_fn(self.n(), d, |a, b| self.moment(a, b))
    }

    /// Closed form `Σ_j w_j exp(⟨z, a_j⟩ + ⟨a_j, w⟩)` of the kernel.
    pub fn kernel(&self, z: &[Cx], w: &[Cx]) -> Cx {
        self.atoms
            .iter()
            .zip(&self.weights)
            .map(|(a, wt)| {
                let e: Cx = a.iter().zip(z.iter().zip(w)).map(|(ai, (zi, wi))| ai.conj() * zi + ai * wi.conj()).sum();
                e.exp() * *wt
            })
            .sum()
    }

    /// `μ̂(ζ) = ∫ e^{−i⟨ζ, x⟩} dμ` with `x = (Re a, Im a) ∈ ℝ^{2n}` and the
    /// bilinear pairing; `ζ` has `2n` complex entries.
    pub fn fourier_laplace(&self, zeta: &[Cx]) -> Cx {
        let n = self.n();
        assert_eq!(zeta.len(), 2 * n, "ζ must have 2n entries");
        self.atoms
            .iter()
            .zip(&self.weights)
            .map(|(a, wt)| {
                let pairing: Cx = (0..n).map(|i| zeta[i] * a[i].re + zeta[n + i] * a[i].im).sum();
                (-Cx::i() * pairing).exp() * *wt
            })
            .sum()
    }

    /// Atoms `a + b` carrying `w_a v_b`, with coinciding sums merged.
    pub fn convolve(&self, other: &AtomicMeasure) -> Result<AtomicMeasure> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch("measures live in different dimensions".into()));
        }
        let mut atoms: Vec<Vec<Cx>> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for (a, wa) in self.atoms.iter().zip(&self.weights) {
            for (b, wb) in other.atoms.iter().zip(&other.weights) {
                let s: Vec<Cx> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let scale = 1.0 + s.iter().map(|x| x.norm()).fold(0.0, f64::max);
                match atoms
                    .iter()
                    .position(|c| c.iter().zip(&s).all(|(x, y)| (x - y).norm() <= 1e-14 * scale))
                {
                    Some(k) => weights[k] += wa * wb,
                    None => {
                        atoms.push(s);
                        weights.push(wa * wb);
                    }
                }
            }
        }
        AtomicMeasure::new(atoms, weights)
    }

    /// `max_j |a_{j,i}|` for each coordinate, the sup norm of `z_i` on the support.
    pub fn coordinate_sup(&self) -> Vec<f64> {
        (0..self.n())
            .map(|i| self.atoms.iter().map(|a| a[i].norm()).fold(0.0, f64::max))
            .collect()
    }
}

/// Change of variables `ζ = (i(z + w̄), z − w̄)` under which `F(z, w) = μ̂(ζ)`.
pub fn fourier_laplace_variables(z: &[Cx], w: &[Cx]) -> Vec<Cx> {
    let first = z.iter().zip(w).map(|(zi, wi)| Cx::i() * (zi + wi.conj()));
    let second = z.iter().zip(w).map(|(zi, wi)| zi - wi.conj());
    first.chain(second).collect()
}

/// Multiplication by the coordinates on `P²(μ)` with `h = 1`.
pub fn atomic_tuple(mu: &AtomicMeasure) -> CyclicTuple {
    let k = mu.len();
    let matrices = (0..mu.n())
        .map(|i| CMat::from_diagonal(&CVec::from_iterator(k, mu.atoms.iter().map(|a| a[i]))))
        .collect();
    let gram = CMat::from_diagonal(&CVec::from_iterator(k, mu.weights.iter().map(|w| Cx::new(*w, 0.0))));
    CyclicTuple::with_gram(matrices, CVec::from_element(k, ONE), gram).expect("validated measure gives a valid tuple")
}

/// The `m×m` Jordan block `λI + J` (ones on the subdiagonal) with `h = e₁`.
///
/// # Panics
/// If `m == 0`.
pub fn jordan_block_tuple(m: usize, lambda: Cx) -> CyclicTuple {
    assert!(m >= 1, "Jordan block needs m >= 1");
    let t = shift_matrix(m) + linalg::identity(m) * lambda;
    let mut h = CVec::zeros(m);
    h[0] = ONE;
    CyclicTuple::new(vec![t], h).expect("Jordan block is well formed")
}

/// The three commuting 5×5 contractions, together with the polynomial `p`
/// violating von Neumann's inequality and the structure polynomial `q`.
#[derive(Clone, Debug)]
pub struct VaropoulosKaijser {
    pub tuple: CyclicTuple,
    pub p: Polynomial,
    pub q: Polynomial,
}

pub fn varopoulos_kaijser() -> VaropoulosKaijser {
    let s = 1.0 / 3f64.sqrt();
    // Row 5 of T_i pairs e_2, e_3, e_4 with sign +s on e_{i+1} and −s elsewhere.
    let matrices = (0..3)
        .map(|i| {
            let mut t = CMat::zeros(5, 5);
            t[(i + 1, 0)] = ONE;
            for j in 0..3 {
                t[(4, j + 1)] = Cx::new(if i == j { s } else { -s }, 0.0);
            }
            t
        })
        .collect();
    let mut h = CVec::zeros(5);
    h[0] = ONE;
    VaropoulosKaijser {
        tuple: CyclicTuple::new(matrices, h).expect("fixed matrices are well formed"),
        p: vk_test_polynomial(),
        q: vk_structure_polynomial(),
    }
}

/// `z₁² + z₂² + z₃² − 2z₁z₂ − 2z₁z₃ − 2z₂z₃`.
pub fn vk_test_polynomial() -> Polynomial {
    Polynomial::from_real(
        3,
        &[
            (&[2, 0, 0], 1.0),
            (&[0, 2, 0], 1.0),
            (&[0, 0, 2], 1.0),
            (&[1, 1, 0], -2.0),
            (&[1, 0, 1], -2.0),
            (&[0, 1, 1], -2.0),
        ],
    )
}

/// `z₁² + z₂² + z₃² − z₁z₂ − z₂z₃ − z₁z₃`.
pub fn vk_structure_polynomial() -> Polynomial {
    Polynomial::from_real(
        3,
        &[
            (&[2, 0, 0], 1.0),
            (&[0, 2, 0], 1.0),
            (&[0, 0, 2], 1.0),
            (&[1, 1, 0], -1.0),
            (&[1, 0, 1], -1.0),
            (&[0, 1, 1], -1.0),
        ],
    )
}

#[derive(Clone, Copy, Debug)]
pub struct TorusSampling {
    /// Angles per coordinate on the uniform grid.
    pub grid: usize,
    /// Random local refinement steps started from the best grid point.
    pub refinements: usize,
    pub seed: u64,
}

impl Default for TorusSampling {
    fn default() -> Self {
        TorusSampling {
            grid: 64,
            refinements: 4000,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SupEstimate {
    pub value: f64,
    pub witness: Vec<Cx>,
    pub evaluations: usize,
}

/// Lower estimate of `sup_{𝔻ⁿ} |p|` from samples on the torus (where the
/// maximum is attained). The grid contains every point with coordinates
/// `±1`, so sign patterns are always tested exactly.
pub fn polydisc_sup(p: &Polynomial, sampling: &TorusSampling) -> SupEstimate {
    let n = p.n();
    let g = sampling.grid.max(1);
    let total = g.checked_pow(n as u32).filter(|&t| t <= 1 << 24);
    let point = |theta: &[f64]| -> Vec<Cx> { theta.iter().map(|t| Cx::from_polar(1.0, *t)).collect() };

    let mut best_theta = vec![0.0; n];
    let mut best = p.eval(&point(&best_theta)).norm();
    let mut evaluations = 1;
    let mut rng = random::rng(sampling.seed);
    match total {
        Some(total) => {
            let mut theta = vec![0.0; n];
            for k in 0..total {
                let mut r = k;
                for t in theta.iter_mut() {
                    *t = TAU * (r % g) as f64 / g as f64;
                    r /= g;
                }
                let v = p.eval(&point(&theta)).norm();
                if v > best {
                    best = v;
                    best_theta.copy_from_slice(&theta);
                }
            }
            evaluations += total;
        }
        None => {
            // Grid too large: fall back to uniform random angles.
            for _ in 0..(1 << 20) {
                let theta: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
                let v = p.eval(&point(&theta)).norm();
                if v > best {
                    best = v;
                    best_theta = theta;
                }
            }
            evaluations += 1 << 20;
        }
    }

    let mut step = TAU / g as f64;
    for k in 0..sampling.refinements {
        let theta: Vec<f64> = best_theta.iter().map(|t| t + step * rng.random_range(-1.0..1.0)).collect();
        let v = p.eval(&point(&theta)).norm();
        if v > best {
            best = v;
            best_theta = theta;
        }
        if (k + 1) % 200 == 0 {
            step *= 0.5;
        }
    }
    evaluations += sampling.refinements;

    SupEstimate {
        value: best,
        witness: point(&best_theta),
        evaluations,
    }
}

/// Weight rule `‖z^α‖²` of a space with orthogonal monomials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadialKind {
    /// `α!/|α|!`.
    DruryArveson,
    /// `α!Γ(t)/Γ(|α| + t)`, `t > 0`.
    Ht(f64),
    /// `r^{2|α|}`, the Hardy space of the polydisc of radius `r`.
    Hardy(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialWeightModel {
    pub n: usize,
    pub kind: RadialKind,
}

impl RadialWeightModel {
    pub fn new(n: usize, kind: RadialKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "need at least one variable"));
        }
        match kind {
            RadialKind::Ht(t) if !(t.is_finite() && t > 0.0) => Err(Error::invalid("t", "must be positive")),
            RadialKind::Hardy(r) if !(r.is_finite() && r > 0.0) => Err(Error::invalid("r", "must be positive")),
            _ => Ok(RadialWeightModel { n, kind }),
        }
    }

    /// `ln ‖z^α‖²`, through log-Γ so large degrees do not overflow.
    pub fn log_weight(&self, alpha: &MultiIndex) -> f64 {
        let k = alpha.degree() as f64;
        let ln_alpha_fact: f64 = alpha.as_slice().iter().map(|&a| ln_gamma(a as f64 + 1.0)).sum();
        match self.kind {
            RadialKind::DruryArveson => ln_alpha_fact - ln_gamma(k + 1.0),
            RadialKind::Ht(t) => ln_alpha_fact + ln_gamma(t) - ln_gamma(k + t),
            RadialKind::Hardy(r) => 2.0 * k * r.ln(),
        }
    }

    pub fn weight(&self, alpha: &MultiIndex) -> f64 {
        if alpha.is_zero() {
            return 1.0;
        }
        self.log_weight(alpha).exp()
    }
}

/// `m(α, β) = δ_{αβ} ‖z^α‖²`: moments of the coordinate shifts with `h = 1`.
pub fn radial_moment_table(model: &RadialWeightModel, d: usize) -> MomentTable {
    MomentTable::from_fn(model.n, d, |a, b| {
        if a == b {
            Cx::new(model.weight(a), 0.0)
        } else {
            ZERO
        }
    })
}

/// Normalised surface measure of the unit sphere in `ℂⁿ` on `z^α z̄^β`:
/// `δ_{αβ} α!(n−1)!/(|α|+n−1)!`.
pub fn sphere_moment(n: usize, alpha: &MultiIndex, beta: &MultiIndex) -> f64 {
    if alpha != beta {
        return 0.0;
    }
    RadialWeightModel {
        n,
        kind: RadialKind::Ht(n as f64),
    }
    .weight(alpha)
}

/// `(1/(n−1)!) Π_{j=1}^{n−1} (k + j)`: the factor picked up by a
/// homogeneous polynomial of degree `k` under `(R + (n−1)I)⋯(R + I)/(n−1)!`,
/// `R = Σ z_i ∂_i`.
pub fn radial_factor_product(n: usize, k: usize) -> f64 {
    (1..n).map(|j| (k + j) as f64 / j as f64).product()
}

/// `u(z^α z̄^β)` for the distribution `u = ((−1)^{n−1}/(n−1)!)(R+(n−1)I)⋯(R+I)σ`
/// representing the Drury–Arveson inner product.
///
/// The derivatives act on `σ` in the distributional sense,
/// `(R v)(φ) = −v((R + n)φ)`, so each factor `R + jI` turns into
/// `−(R + (n − j))` on the test function, and `R` multiplies the
/// holomorphic part `z^α` by `|α|`.
pub fn da_distribution_moment(n: usize, alpha: &MultiIndex, beta: &MultiIndex) -> Cx {
    assert!(n >= 1 && alpha.len() == n && beta.len() == n, "indices must have n entries");
    let k = alpha.degree() as f64;
    let sign = if (n - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut value = sign * sphere_moment(n, alpha, beta);
    for j in 1..n {
        value *= -(k + (n - j) as f64) / j as f64;
    }
    Cx::new(value, 0.0)
}

#[derive(Clone, Copy, Debug)]
pub struct WeightedKernelValue {
    pub value: Cx,
    /// Partial sums passed the ratio test at the truncation degree.
    pub converged: bool,
    /// Estimated size of the omitted tail.
    pub tail_estimate: f64,
}

/// `Σ_{|α|≤d} base(α)/middle(α)² z^α w̄^α`: the kernel of the shifts on the
/// base space with `h = 1`, paired through the reproducing kernels of the
/// middle space.
pub fn weighted_model_kernel(
    base: &RadialWeightModel,
    middle: &RadialWeightModel,
    z: &[Cx],
    w: &[Cx],
    d: usize,
) -> Result<WeightedKernelValue> {
    let n = base.n;
    if middle.n != n || z.len() != n || w.len() != n {
        return Err(Error::DimensionMismatch("models and points must share n".into()));
    }
    let zw: Vec<Cx> = z.iter().zip(w).map(|(a, b)| a * b.conj()).collect();
    let mut blocks = vec![0.0; d + 1];
    let mut value = ZERO;
    for alpha in enumerate_upto(n, d) {
        let log_c = base.log_weight(&alpha) - 2.0 * middle.log_weight(&alpha);
        let c = if alpha.is_zero() { 1.0 } else { log_c.exp() };
        let term = alpha.monomial(&zw) * c;
        blocks[alpha.degree()] += term.norm();
        value += term;
    }
    let (converged, tail_estimate) = if d == 0 {
        (false, f64::INFINITY)
    } else if blocks[d] == 0.0 {
        (true, 0.0)
    } else {
        let ratio = blocks[d] / blocks[d - 1];
        if ratio < 1.0 {
            let tail = blocks[d] * ratio / (1.0 - ratio);
            (tail <= 1e-12 * value.norm().max(1.0), tail)
        } else {
            (false, f64::INFINITY)
        }
    };
    Ok(WeightedKernelValue {
        value,
        converged,
        tail_estimate,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct RatioBand {
    pub min: f64,
    pub max: f64,
    pub max_degree: usize,
}

/// Observed band of `‖z^α‖²_{H(F)} / ‖z^α‖²_{H_{t+2s}}` over `|α| ≤ max_degree`,
/// where `F` is the `H_t` shift kernel seen through `H_{t+s}`.
pub fn ht_ratio_band(n: usize, t: f64, s: f64, max_degree: usize) -> Result<RatioBand> {
    let base = RadialWeightModel::new(n, RadialKind::Ht(t))?;
    let middle = RadialWeightModel::new(n, RadialKind::Ht(t + s))?;
    let target = RadialWeightModel::new(n, RadialKind::Ht(t + 2.0 * s))?;
    let mut band = RatioBand {
        min: f64::INFINITY,
        max: 0.0,
        max_degree,
    };
    for alpha in enumerate_upto(n, max_degree) {
        let log_norm = 2.0 * middle.log_weight(&alpha) - base.log_weight(&alpha);
        let r = (log_norm - target.log_weight(&alpha)).exp();
        band.min = band.min.min(r);
        band.max = band.max.max(r);
    }
    Ok(band)
}

/// PSD test of `c² m(α, β) − m(α + e_i, β + e_i)` over `|α|, |β| < d`,
/// i.e. `T_i* T_i ≤ c²` on the data available at degree `d`.
pub fn contraction_check(mt: &MomentTable, i: usize, c: f64, tol: f64) -> Result<PsdCheck> {
    let d = mt.degree();
    if d == 0 {
        return Err(Error::DegreeTooSmall { degree: 0, needed: 1 });
    }
    if i >= mt.n() {
        return Err(Error::invalid("i", format!("coordinate {i} out of range for n = {}", mt.n())));
    }
    let index: &IndexSet = mt.index();
    let len = index.prefix_len(d - 1);
    let up: Vec<usize> = (0..len)
        .map(|k| index.position(&index.get(k).with_increment(i)).expect("degree d entry present"))
        .collect();
    let m = mt.matrix();
    let c2 = c * c;
    let mat = CMat::from_fn(len, len, |b, a| m[(b, a)] * c2 - m[(up[b], up[a])]);
    psd_check(&mat, tol)
}
