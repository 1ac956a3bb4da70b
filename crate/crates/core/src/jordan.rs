//! Jordan-tuple classification and the explicit representation of the
//! moment functional as `Λ = Σ_points Σ_k q_k(∂) q̄_k(∂̄) δ_λ`.
//!
//! Generalized eigenspaces are found from one generic linear combination
//! `A = Σ c_i T_i`. A tuple is Jordan exactly when the spectral projections
//! are orthogonal, which is tested in coordinates where the Gram weight is
//! the identity.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fock::{build_l, fix_phase, spectral_decompose};
use crate::linalg;
use crate::multiindex::MultiIndex;
use crate::polynomial::Polynomial;
use crate::random;
use crate::tuples::{CyclicTuple, MomentTable};
use crate::{CMat, CVec, Cx, ZERO};

const MAX_ATTEMPTS: usize = 5;
const CLUSTER_TOLS: [f64; 3] = [1e-6, 1e-4, 1e-2];
const MAX_CONDITION: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Jordan,
    NotJordan,
}

#[derive(Clone, Debug)]
pub struct SpectralBlock {
    pub lambda: Vec<Cx>,
    /// Spectral projection in the tuple's own coordinates.
    pub projection: CMat,
    /// The same projection after standardising the Gram weight to the identity.
    pub standard_projection: CMat,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub blocks: Vec<SpectralBlock>,
    pub classification: Classification,
    /// `max_k ‖P_k − P_k*‖/‖P_k‖` in standardised coordinates.
    pub selfadjoint_defect: f64,
    /// `max_{k≠l} ‖P_k P_l‖`.
    pub cross_defect: f64,
    /// `‖Σ P_k − I‖`.
    pub sum_defect: f64,
    /// `max_k ‖P_k² − P_k‖`.
    pub idempotent_defect: f64,
    pub selfadjoint_tol: f64,
    pub attempts: usize,
}

#[derive(Clone, Debug)]
pub struct JordanOptions {
    pub seed: u64,
    /// Relative threshold on `‖P − P*‖` for the Jordan verdict.
    pub selfadjoint_tol: f64,
    pub tol_comm: Option<f64>,
}

impl Default for JordanOptions {
    fn default() -> Self {
        JordanOptions {
            seed: 42,
            selfadjoint_tol: 1e-8,
            tol_comm: None,
        }
    }
}

fn cluster(values: &[Cx], tol: f64) -> Vec<Vec<usize>> {
    let k = values.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in 0..k {
        for b in (a + 1)..k {
            if (values[a] - values[b]).norm() <= tol {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for a in 0..k {
        let r = find(&mut parent, a);
        groups.entry(r).or_default().push(a);
    }
    groups.into_values().collect()
}

fn min_gap(values: &[Cx], groups: &[Vec<usize>]) -> f64 {
    let mut gap = f64::INFINITY;
    for (g, ga) in groups.iter().enumerate() {
        for gb in &groups[g + 1..] {
            for &a in ga {
                for &b in gb {
                    gap = gap.min((values[a] - values[b]).norm());
                }
            }
        }
    }
    gap
}

/// Projections onto the generalized eigenspaces of `a`, or `None` when no
/// clustering tolerance gives a clean, well-conditioned split.
fn spectral_projections(a: &CMat) -> Option<Vec<CMat>> {
    let m = a.nrows();
    let mu = linalg::eigenvalues(a);
    let scale = linalg::spectral_norm(a).max(f64::MIN_POSITIVE);
    for rel in CLUSTER_TOLS {
        let tol = rel * scale;
        let groups = cluster(&mu, tol);
        if groups.len() > 1 && min_gap(&mu, &groups) < 10.0 * tol {
            continue;
        }
        let mut bases = Vec::with_capacity(groups.len());
        for g in &groups {
            let center: Cx = g.iter().map(|&k| mu[k]).sum::<Cx>() / g.len() as f64;
            let shifted = a - linalg::identity(m) * center;
            let mut power = linalg::identity(m);
            for _ in 0..g.len() {
                power = &power * &shifted;
            }
            let (_, _, vt) = linalg::svd_full(&power);
            let cols = g.len();
            let basis = CMat::from_fn(m, cols, |r, c| vt[(m - cols + c, r)].conj());
            bases.push(basis);
        }
        let v = CMat::from_fn(m, m, |r, c| {
            let mut c = c;
            for b in &bases {
                if c < b.ncols() {
                    return b[(r, c)];
                }
                c -= b.ncols();
            }
            unreachable!()
        });
        let (_, s, _) = linalg::svd_full(&v);
        if s[m - 1] <= 0.0 || s[0] / s[m - 1] > MAX_CONDITION {
            continue;
        }
        let w = v.try_inverse()?;
        let mut offset = 0;
        let mut out = Vec::with_capacity(bases.len());
        for b in &bases {
            let k = b.ncols();
            out.push(b * w.view((offset, 0), (k, m)));
            offset += k;
        }
        return Some(out);
    }
    None
}

pub fn joint_spectral_decompose(t: &CyclicTuple, opts: &JordanOptions) -> Result<SpectralDecomposition> {
    t.require_commuting(opts.tol_comm)?;
    let st = t.to_standard();
    let m = st.dim();
    let mut rng = random::rng(opts.seed);
    for attempt in 1..=MAX_ATTEMPTS {
        let mut a = CMat::zeros(m, m);
        for ti in st.matrices() {
            a += ti * random::complex_normal(&mut rng);
        }
        let Some(projs) = spectral_projections(&a) else {
            continue;
        };
        return Ok(assemble(t, &st, projs, opts, attempt));
    }
    Err(Error::AmbiguousSpectrum {
        attempts: MAX_ATTEMPTS,
    })
}

fn assemble(
    t: &CyclicTuple,
    st: &CyclicTuple,
    projs: Vec<CMat>,
    opts: &JordanOptions,
    attempts: usize,
) -> SpectralDecomposition {
    let m = st.dim();
    let (r, rinv) = if t.has_identity_gram() {
        (linalg::identity(m), linalg::identity(m))
    } else {
        let r = linalg::gram_factor(t.gram()).expect("validated gram");
        let rinv = r.clone().try_inverse().expect("gram factor invertible");
        (r, rinv)
    };
    let mut blocks = Vec::with_capacity(projs.len());
    let mut selfadjoint_defect: f64 = 0.0;
    let mut idempotent_defect: f64 = 0.0;
    let mut sum = CMat::zeros(m, m);
    for p in &projs {
        let dim = (linalg::trace_re(p).round() as usize).max(1);
        let lambda = st
            .matrices()
            .iter()
            .map(|ti| (p * ti).trace() / dim as f64)
            .collect();
        selfadjoint_defect =
            selfadjoint_defect.max((p - p.adjoint()).norm() / p.norm().max(f64::MIN_POSITIVE));
        idempotent_defect = idempotent_defect.max((p * p - p).norm());
        sum += p;
        blocks.push(SpectralBlock {
            lambda,
            projection: &rinv * p * &r,
            standard_projection: p.clone(),
            dim,
        });
    }
    let mut cross_defect: f64 = 0.0;
    for (k, pk) in projs.iter().enumerate() {
        for (l, pl) in projs.iter().enumerate() {
            if k != l {
                cross_defect = cross_defect.max((pk * pl).norm());
            }
        }
    }
    let classification = if selfadjoint_defect <= opts.selfadjoint_tol {
        Classification::Jordan
    } else {
        Classification::NotJordan
    };
    SpectralDecomposition {
        blocks,
        classification,
        selfadjoint_defect,
        cross_defect,
        sum_defect: (sum - linalg::identity(m)).norm(),
        idempotent_defect,
        selfadjoint_tol: opts.selfadjoint_tol,
        attempts,
    }
}

/// One support point `λ` with polynomials `q_k`, meaning `Σ_k q_k(∂) q̄_k(∂̄) δ_λ`.
#[derive(Clone, Debug)]
pub struct DistributionTerm {
    pub lambda: Vec<Cx>,
    pub polys: Vec<Polynomial>,
}

impl DistributionTerm {
    /// Coefficients `a_{γ,δ} = Σ_k q_{k,γ} conj(q_{k,δ})` of the operator
    /// `Σ a_{γ,δ} ∂^γ ∂̄^δ`, dropping entries below `tol` in magnitude.
    pub fn operator_coefficients(&self, tol: f64) -> BTreeMap<(MultiIndex, MultiIndex), Cx> {
        let mut out: BTreeMap<(MultiIndex, MultiIndex), Cx> = BTreeMap::new();
        for q in &self.polys {
            for (g, cg) in q.terms() {
                for (d, cd) in q.terms() {
                    *out.entry((g.clone(), d.clone())).or_insert(ZERO) += cg * cd.conj();
                }
            }
        }
        out.retain(|_, v| v.norm() > tol);
        out
    }
}

#[derive(Clone, Debug)]
pub struct DistributionRep {
    pub n: usize,
    pub terms: Vec<DistributionTerm>,
}

/// Per-block nilpotency index: smallest `p` with `‖N^p‖ ≤ tol`, capped at the block size.
fn nilpotency_index(nmat: &CMat, tol: f64) -> usize {
    let k = nmat.nrows();
    let mut power = linalg::identity(k);
    for p in 1..=k {
        power = &power * nmat;
        if power.norm() <= tol {
            return p;
        }
    }
    k
}

/// Writes `Λ` as `Σ_k q_k(∂) q̄_k(∂̄) δ_{λ}` summed over the joint eigenvalues.
///
/// Each block is restricted to its generalized eigenspace, where
/// `N_i = T_i − λ_i` is nilpotent; the eigenpolynomials `f_j` of the
/// block's finite `L` give `q_j(z) = conj(f_j)(−z)`. `d` must be at least the
/// block's nilpotency bound `Σ_i (p_i − 1)`.
pub fn distribution_rep(t: &CyclicTuple, dec: &SpectralDecomposition, d: usize) -> Result<DistributionRep> {
    if dec.classification != Classification::Jordan {
        return Err(Error::NotJordanInput {
            defect: dec.selfadjoint_defect,
        });
    }
    let st = t.to_standard();
    let n = st.n();
    let mut terms = Vec::with_capacity(dec.blocks.len());
    for block in &dec.blocks {
        let q = linalg::range_basis(&block.standard_projection, 1e-8);
        let qa = q.adjoint();
        let k = q.ncols();
        let mut needed = 0;
        let nil: Vec<CMat> = st
            .matrices()
            .iter()
            .zip(&block.lambda)
            .map(|(ti, li)| {
                let nm = &qa * (ti - linalg::identity(st.dim()) * *li) * &q;
                let scale = ti.norm().max(1.0);
                needed += nilpotency_index(&nm, 1e-10 * scale.powi(k as i32)) - 1;
                nm
            })
            .collect();
        if d < needed {
            return Err(Error::DegreeTooSmall { degree: d, needed });
        }
        let hk: CVec = &qa * st.h();
        if hk.norm() == 0.0 {
            continue;
        }
        let local = CyclicTuple::new(nil, hk)?;
        let dec_l = spectral_decompose(&build_l(&local.moments(needed)), 1e-13)?;
        let polys = dec_l
            .polynomials
            .iter()
            .map(|f| {
                let q = f.conj_coeffs().reflected();
                let terms: Vec<(MultiIndex, Cx)> = q.terms().map(|(a, c)| (a.clone(), *c)).collect();
                let mut v = CVec::from_iterator(terms.len(), terms.iter().map(|x| x.1));
                fix_phase(&mut v);
                Polynomial::from_terms(n, terms.into_iter().zip(v.iter()).map(|((a, _), c)| (a, *c)))
            })
            .collect();
        terms.push(DistributionTerm {
            lambda: block.lambda.clone(),
            polys,
        });
    }
    Ok(DistributionRep { n, terms })
}

/// `Σ_γ q_γ (−1)^{|γ|} ∂^γ z^α |_{z=λ}`.
fn derivative_pairing(q: &Polynomial, alpha: &MultiIndex, lambda: &[Cx]) -> Cx {
    q.terms()
        .filter_map(|(g, c)| {
            let rest = alpha.checked_sub(g)?;
            let sign = if g.degree() % 2 == 0 { 1.0 } else { -1.0 };
            Some(c * sign * alpha.falling_factorial(g) * rest.monomial(lambda))
        })
        .sum()
}

/// `Λ(z^α z̄^β)` for the represented distribution.
pub fn eval_distribution(rep: &DistributionRep, alpha: &MultiIndex, beta: &MultiIndex) -> Cx {
    rep.terms
        .iter()
        .map(|term| {
            term.polys
                .iter()
                .map(|q| {
                    derivative_pairing(q, alpha, &term.lambda)
                        * derivative_pairing(q, beta, &term.lambda).conj()
                })
                .sum::<Cx>()
        })
        .sum()
}

/// Largest `|eval_distribution − m(α,β)|` over the table.
pub fn round_trip_error(rep: &DistributionRep, mt: &MomentTable) -> f64 {
    let idx = mt.index();
    let mut worst: f64 = 0.0;
    for a in idx.indices() {
        for b in idx.indices() {
            worst = worst.max((eval_distribution(rep, a, b) - mt.get(a, b)).norm());
        }
    }
    worst
}

fn fmt_complex(c: Cx) -> String {
    let r = |x: f64| {
        let s = format!("{:.6}", x);
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s == "-0" {
            "0".to_string()
        } else {
            s
        }
    };
    if c.im.abs() < 1e-12 {
        r(c.re)
    } else if c.re.abs() < 1e-12 {
        format!("{}i", r(c.im))
    } else {
        format!("({}{}{}i)", r(c.re), if c.im < 0.0 { "-" } else { "+" }, r(c.im.abs()))
    }
}

fn fmt_derivative(symbol: &str, a: &MultiIndex, n: usize) -> String {
    let mut s = String::new();
    for (i, &e) in a.as_slice().iter().enumerate() {
        if e == 0 {
            continue;
        }
        s.push_str(symbol);
        if n > 1 {
            s.push_str(&subscript(i + 1));
        }
        if e > 1 {
            s.push_str(&superscript(e as usize));
        }
    }
    s
}

fn digits(k: usize, table: &[char; 10]) -> String {
    k.to_string()
        .chars()
        .map(|c| table[c.to_digit(10).unwrap() as usize])
        .collect()
}

fn subscript(k: usize) -> String {
    digits(k, &['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'])
}

fn superscript(k: usize) -> String {
    digits(k, &['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'])
}

/// Human-readable form such as `(1 + ∂∂̄)δ₀`.
pub fn format_term(term: &DistributionTerm) -> String {
    let n = term.lambda.len();
    let coeffs = term.operator_coefficients(1e-10);
    let mut parts = Vec::new();
    for ((g, d), c) in &coeffs {
        let ops = format!("{}{}", fmt_derivative("∂", g, n), fmt_derivative("∂̄", d, n));
        let coef = fmt_complex(*c);
        parts.push(match (ops.is_empty(), coef.as_str()) {
            (true, _) => coef,
            (false, "1") => ops,
            (false, "-1") => format!("-{ops}"),
            (false, _) => format!("{coef}·{ops}"),
        });
    }
    let point = if term.lambda.iter().all(|c| c.norm() < 1e-12) {
        "δ₀".to_string()
    } else {
        let coords: Vec<String> = term.lambda.iter().map(|c| fmt_complex(*c)).collect();
        if n == 1 {
            format!("δ_{}", coords[0])
        } else {
            format!("δ_({})", coords.join(","))
        }
    };
    let mut s = String::new();
    if parts.len() == 1 && parts[0] == "1" {
        s.push_str(&point);
    } else {
        let _ = write!(s, "({}){}", parts.join(" + "), point);
    }
    s
}

pub fn format_rep(rep: &DistributionRep) -> String {
    let terms: Vec<String> = rep.terms.iter().map(format_term).collect();
    format!("Λ = {}", terms.join(" + "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use proptest::prelude::*;

    fn c(re: f64) -> Cx {
        Cx::new(re, 0.0)
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn jordan_block_is_jordan_at_zero() {
        let t = models::jordan_block_tuple(2, c(0.));
        let dec = joint_spectral_decompose(&t, &JordanOptions::default()).unwrap();
        assert_eq!(dec.classification, Classification::Jordan);
        assert_eq!(dec.blocks.len(), 1);
        assert!(dec.blocks[0].lambda[0].norm() < 1e-12);
        assert!((&dec.blocks[0].projection - linalg::identity(2)).norm() < 1e-10);
        let rep = distribution_rep(&t, &dec, 2).unwrap();
        assert_eq!(format_rep(&rep), "Λ = (1 + ∂∂̄)δ₀");
        assert!((eval_distribution(&rep, &mi(&[1]), &mi(&[1])) - c(1.)).norm() < 1e-12);
        assert!(eval_distribution(&rep, &mi(&[2]), &mi(&[2])).norm() < 1e-12);
    }

    #[test]
    fn non_normal_pair_is_not_jordan() {
        let t = CyclicTuple::new(
            vec![CMat::from_row_slice(2, 2, &[c(0.), c(0.), c(1.), c(1.)])],
            CVec::from_vec(vec![c(1.), c(0.)]),
        )
        .unwrap();
        let dec = joint_spectral_decompose(&t, &JordanOptions::default()).unwrap();
        assert_eq!(dec.classification, Classification::NotJordan);
        assert_eq!(dec.blocks.len(), 2);
        let p0 = dec
            .blocks
            .iter()
            .find(|b| b.lambda[0].norm() < 1e-9)
            .expect("block at 0");
        // Projection onto span{(1,−1)} along span{(0,1)}.
        let v = CVec::from_vec(vec![c(1.), c(-1.)]);
        assert!((&p0.projection * &v - &v).norm() < 1e-10);
        assert!((&p0.projection * CVec::from_vec(vec![c(0.), c(1.)])).norm() < 1e-10);
        assert!((&p0.projection - p0.projection.adjoint()).norm() > 0.4);
        assert!(matches!(
            distribution_rep(&t, &dec, 4),
            Err(Error::NotJordanInput { .. })
        ));
    }

    #[test]
    fn diagonal_pair_is_two_point_masses() {
        let (a, b) = (Cx::new(0.5, 0.5), c(-1.0));
        let t = CyclicTuple::new(
            vec![CMat::from_diagonal(&CVec::from_vec(vec![a, b]))],
            CVec::from_vec(vec![c(1.), c(1.)]),
        )
        .unwrap();
        let dec = joint_spectral_decompose(&t, &JordanOptions::default()).unwrap();
        assert_eq!(dec.classification, Classification::Jordan);
        let rep = distribution_rep(&t, &dec, 0).unwrap();
        assert_eq!(rep.terms.len(), 2);
        assert!(rep.terms.iter().all(|term| term.polys.len() == 1));
        assert!(round_trip_error(&rep, &t.moments(4)) < 1e-12);
    }

    #[test]
    fn point_mass_representations() {
        let zero = CyclicTuple::new(vec![CMat::zeros(1, 1)], CVec::from_element(1, c(1.))).unwrap();
        let dec = joint_spectral_decompose(&zero, &JordanOptions::default()).unwrap();
        let rep = distribution_rep(&zero, &dec, 0).unwrap();
        assert_eq!(format_rep(&rep), "Λ = δ₀");

        let a = Cx::new(0.3, -1.1);
        let rep = DistributionRep {
            n: 1,
            terms: vec![DistributionTerm {
                lambda: vec![a],
                polys: vec![Polynomial::constant(1, c(1.))],
            }],
        };
        let v = eval_distribution(&rep, &mi(&[3]), &mi(&[2]));
        assert!((v - a.powu(3) * a.conj().powu(2)).norm() < 1e-13);
    }

    #[test]
    fn degree_must_cover_nilpotency() {
        let t = models::jordan_block_tuple(3, c(0.));
        let dec = joint_spectral_decompose(&t, &JordanOptions::default()).unwrap();
        assert!(matches!(
            distribution_rep(&t, &dec, 1),
            Err(Error::DegreeTooSmall { degree: 1, needed: 2 })
        ));
        let rep = distribution_rep(&t, &dec, 2).unwrap();
        assert!(round_trip_error(&rep, &t.moments(5)) < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn random_jordan_tuples_round_trip(seed in 0u64..10_000) {
            let mut r = random::rng(seed);
            let t = random::jordan_tuple(&mut r, 2, 6);
            let dec = joint_spectral_decompose(&t, &JordanOptions::default()).unwrap();
            prop_assert_eq!(dec.classification, Classification::Jordan, "{:?}", dec.selfadjoint_defect);
            let rep = distribution_rep(&t, &dec, 6).unwrap();
            let mt = t.moments(4);
            prop_assert!(round_trip_error(&rep, &mt) <= 1e-9 * mt.matrix().norm().max(1.0));
            let eigs = crate::linalg::eigenvalues(&t.matrices()[0]);
            for term in &rep.terms {
                prop_assert!(eigs.iter().any(|e| (e - term.lambda[0]).norm() < 1e-4));
            }
        }

        #[test]
        fn classification_is_unitarily_invariant(seed in 0u64..10_000) {
            let mut r = random::rng(seed);
            let t = random::jordan_tuple(&mut r, 2, 5);
            let u = random::unitary(&mut r, t.dim());
            let tu = t.conjugated(&u).unwrap();
            let opts = JordanOptions::default();
            let (d1, d2) = (
                joint_spectral_decompose(&t, &opts).unwrap(),
                joint_spectral_decompose(&tu, &opts).unwrap(),
            );
            prop_assert_eq!(d1.classification, d2.classification);
            prop_assert_eq!(d1.blocks.len(), d2.blocks.len());
            for b in &d1.blocks {
                prop_assert!(d2.blocks.iter().any(|b2| b.lambda.iter().zip(&b2.lambda).all(|(x, y)| (x - y).norm() < 1e-9)));
            }
            let r1 = distribution_rep(&t, &d1, 6).unwrap();
            let r2 = distribution_rep(&tu, &d2, 6).unwrap();
            for a in t.moments(3).index().indices() {
                for b in t.moments(3).index().indices() {
                    prop_assert!((eval_distribution(&r1, a, b) - eval_distribution(&r2, a, b)).norm() < 1e-9);
                }
            }
        }
    }
}
