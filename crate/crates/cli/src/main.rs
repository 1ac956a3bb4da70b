//! `fockmodel`: command-line front end for the cyclic-tuple toolkit.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on
//! malformed input.

mod inputs;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fockmodel::jordan::{self, Classification, JordanOptions};
use fockmodel::kernel::{self, GrowthConfig, SupportSet};
use fockmodel::{eigen, fock, gns, io, models, showcase, Cx, CyclicTuple, Error, Result};

use inputs::BuiltinParams;
use output::{fmt_index, fmt_point, Format, Out};

#[derive(Parser)]
#[command(name = "fockmodel", version, about = "Moment functionals, Fock-space models and kernels of cyclic commuting matrix tuples")]
struct Cli {
    /// Output style; machine output is versioned `key=value` text.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

/// Where the tuple comes from: a JSON file or a builtin model.
#[derive(Args, Clone)]
struct TupleArgs {
    /// Tuple document (JSON).
    #[arg(long, conflicts_with = "model")]
    input: Option<PathBuf>,
    /// Builtin: zero, scalar, jordan, varopoulos-kaijser, nonnormal, random, random-jordan.
    #[arg(long)]
    model: Option<String>,
    /// Block size for `jordan`, matrix size for the random models.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Eigenvalue(s), comma separated, e.g. `0+0i` or `1,2-i`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    lambda: String,
    /// Number of operators for `zero`, `scalar` and the random models.
    #[arg(long, default_value_t = 1)]
    n: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Moment table m(α,β) = ⟨T^α h, T^β h⟩.
    Moments {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long)]
        degree: Option<usize>,
        /// Print the table as a JSON moment document instead.
        #[arg(long)]
        json: bool,
    },
    /// Fock-space operator L, its eigenpolynomials and the model basis check.
    Fock {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long)]
        degree: Option<usize>,
        /// Tolerance on the intertwining residual.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        /// Eigenvalues below this fraction of the largest are dropped.
        #[arg(long, default_value_t = 1e-10)]
        rank_tol: f64,
    },
    /// F(z, w), its Taylor truncation and the truncation bound.
    KernelEval {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Fit the polynomial growth of |F| e^{-H_K(z+w)}.
    Certify {
        #[command(flatten)]
        tuple: TupleArgs,
        /// `spectrum`, `origin`, `point:<c1,..>` or `ball:<radius>` (centred at 0).
        #[arg(long, default_value = "spectrum")]
        support: String,
        #[arg(long, default_value = "10,30,100,300,1000")]
        radii: String,
        #[arg(long, default_value_t = 32)]
        directions: usize,
        /// Largest accepted exponent; defaults to 2n(m-1) + 0.5.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Decide whether the tuple is a Jordan tuple.
    Classify {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Write the moment functional as derivatives of point masses.
    Distribution {
        #[command(flatten)]
        tuple: TupleArgs,
        #[arg(long)]
        degree: Option<usize>,
        /// Largest accepted round-trip error against the moments.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Print the representation as a JSON document instead.
        #[arg(long)]
        json: bool,
    },
    /// Convolve two tuples and compare norms with ‖T_i‖ + ‖S_i‖.
    Convolve {
        #[command(flatten)]
        tuple: TupleArgs,
        /// Second tuple: a file, `scalar:<λ>`, `jordan:<m>[:<λ>]` or a model name.
        #[arg(long = "with", allow_hyphen_values = true)]
        with: String,
        #[arg(long, default_value_t = 6)]
        degree: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Joint-eigenvalue tests for T* at one point or on a grid.
    Eigen {
        #[command(flatten)]
        tuple: TupleArgs,
        /// Candidate λ (n comma-separated values); omit for a grid.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Grid centre (n values); defaults to the origin.
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        #[arg(long, default_value_t = 5)]
        size: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Run a worked example with pass/fail checks (`all` runs every one).
    Example { name: String },
    /// Print a builtin model: tuple JSON, or a radial moment table.
    Model {
        /// A tuple model, or drury-arveson, hardy, ht.
        name: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Parameter of the `ht` scale.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Radius of the `hardy` scale.
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Degree of radial moment tables.
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
}

fn load_tuple(a: &TupleArgs, seed: u64) -> Result<CyclicTuple> {
    let t = match (&a.input, &a.model) {
        (Some(path), _) => inputs::read_tuple_file(path)?,
        (None, Some(name)) => {
            let params = BuiltinParams {
                n: a.n,
                m: a.m,
                lambda: inputs::parse_complex_list("lambda", &a.lambda)?,
                seed,
            };
            inputs::builtin_tuple(name, &params)?
        }
        (None, None) => {
            return Err(Error::InvalidInput {
                field: "input".into(),
                reason: "give --input FILE or --model NAME".into(),
            })
        }
    };
    t.require_commuting(None)?;
    Ok(t)
}

fn point_arg(field: &str, s: Option<&str>, n: usize) -> Result<Vec<Cx>> {
    let p = match s {
        Some(s) => inputs::parse_complex_list(field, s)?,
        None => vec![Cx::new(0.0, 0.0); n],
    };
    if p.len() != n {
        return Err(Error::InvalidInput {
            field: field.into(),
            reason: format!("expected {n} coordinates, got {}", p.len()),
        });
    }
    Ok(p)
}

fn positive_degree(d: usize) -> Result<usize> {
    if d == 0 {
        return Err(Error::InvalidInput {
            field: "degree".into(),
            reason: "must be at least 1".into(),
        });
    }
    Ok(d)
}

/// Output text plus whether every check passed.
type Outcome = (String, bool);

fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    let fmt = cli.format;
    match &cli.command {
        Command::Moments { tuple, degree, json } => {
            let t = load_tuple(tuple, seed)?;
            let d = degree.unwrap_or(2 * t.dim());
            let mt = t.moments(d);
            if *json {
                return Ok((io::moments_to_json(&mt)? + "\n", true));
            }
            cmd_moments(fmt, &mt)
        }
        Command::Fock {
            tuple,
            degree,
            tol,
            rank_tol,
        } => {
            let t = load_tuple(tuple, seed)?;
            let d = positive_degree(degree.unwrap_or(2 * t.dim()))?;
            cmd_fock(fmt, &t, d, *tol, *rank_tol)
        }
        Command::KernelEval { tuple, z, w, degree } => {
            let t = load_tuple(tuple, seed)?;
            let z = point_arg("z", z.as_deref(), t.n())?;
            let w = point_arg("w", w.as_deref(), t.n())?;
            let d = degree.unwrap_or(2 * t.dim());
            cmd_kernel_eval(fmt, &t, &z, &w, d)
        }
        Command::Certify {
            tuple,
            support,
            radii,
            directions,
            tol,
        } => {
            let t = load_tuple(tuple, seed)?;
            let k = support_set(&t, support, seed)?;
            let cfg = GrowthConfig {
                radii: inputs::parse_real_list("radii", radii)?,
                directions: *directions,
                seed,
            };
            let limit = tol.unwrap_or(2.0 * (t.n() * (t.dim() - 1)) as f64 + 0.5);
            cmd_certify(fmt, &t, &k, &cfg, limit)
        }
        Command::Classify { tuple, degree } => {
            let t = load_tuple(tuple, seed)?;
            cmd_classify(fmt, &t, degree.unwrap_or(t.n() * t.dim()), seed)
        }
        Command::Distribution {
            tuple,
            degree,
            tol,
            json,
        } => {
            let t = load_tuple(tuple, seed)?;
            let d = degree.unwrap_or(t.n() * t.dim());
            cmd_distribution(fmt, &t, d, *tol, *json, seed)
        }
        Command::Convolve {
            tuple,
            with,
            degree,
            tol,
        } => {
            let t = load_tuple(tuple, seed)?;
            let s = inputs::tuple_from_spec(with, seed)?;
            s.require_commuting(None)?;
            cmd_convolve(fmt, &t, &s, positive_degree(*degree)?, *tol)
        }
        Command::Eigen {
            tuple,
            point,
            center,
            step,
            size,
            degree,
        } => {
            let t = load_tuple(tuple, seed)?;
            let points = match point {
                Some(p) => vec![point_arg("point", Some(p), t.n())?],
                None => {
                    let c = point_arg("center", center.as_deref(), t.n())?;
                    if *size == 0 || step.is_nan() || *step <= 0.0 {
                        return Err(Error::InvalidInput {
                            field: "size".into(),
                            reason: "grid needs size ≥ 1 and step > 0".into(),
                        });
                    }
                    eigen::grid(&c, *step, *size)
                }
            };
            cmd_eigen(fmt, &t, &points, *degree)
        }
        Command::Example { name } => cmd_example(fmt, name, seed),
        Command::Model {
            name,
            m,
            lambda,
            n,
            t,
            r,
            degree,
        } => {
            if let Some(model) = inputs::radial_model(name, *n, *t, *r)? {
                let mt = models::radial_moment_table(&model, *degree);
                return Ok((io::moments_to_json(&mt)? + "\n", true));
            }
            let params = BuiltinParams {
                n: *n,
                m: *m,
                lambda: inputs::parse_complex_list("lambda", lambda)?,
                seed,
            };
            let tup = inputs::builtin_tuple(name, &params).map_err(|e| match e {
                Error::InvalidInput { field, reason } if field == "model" => Error::InvalidInput {
                    field: "name".into(),
                    reason: format!("{reason}, {}", inputs::RADIAL_MODELS.join(", ")),
                },
                e => e,
            })?;
            Ok((io::tuple_to_json(&tup)? + "\n", true))
        }
    }
}

fn cmd_moments(fmt: Format, mt: &fockmodel::MomentTable) -> Result<Outcome> {
    let mut out = Out::new(fmt, "moments");
    out.int("n", mt.n());
    out.int("degree", mt.degree());
    let idx = mt.index();
    let scale = mt.matrix().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut rows = Vec::new();
    for b in idx.indices() {
        for a in idx.indices() {
            let v = mt.get(a, b);
            if v.norm() > 1e-15 * scale {
                rows.push((a, b, v));
            }
        }
    }
    out.int("entries", rows.len());
    out.note("alpha        beta         m(alpha,beta)");
    for (a, b, v) in rows {
        let key = format!("m{};{}", fmt_index(a), fmt_index(b));
        if out.is_machine() {
            out.cx(&key, v);
        } else {
            out.note(&format!("{:<12} {:<12} {}", fmt_index(a), fmt_index(b), output::fmt_cx(v)));
        }
    }
    Ok((out.finish(), true))
}

fn cmd_fock(fmt: Format, t: &CyclicTuple, d: usize, tol: f64, rank_tol: f64) -> Result<Outcome> {
    let mut out = Out::new(fmt, "fock");
    let l = fock::build_l(&t.moments(d));
    let dec = fock::spectral_decompose(&l, rank_tol)?;
    out.int("degree", d);
    out.int("dim", t.dim());
    out.int("rank", dec.rank());
    let hs = l.hs_norm_sqr();
    let bound = fock::hs_bound(t);
    out.real("hs_norm_sqr", hs);
    out.real("hs_bound", bound);
    for (j, v) in dec.eigenvalues.iter().enumerate() {
        out.real(&format!("eigenvalue.{}", j + 1), *v);
    }
    let report = fock::model_basis_check(t, &dec)?;
    out.real("gram_residual", report.gram_residual);
    out.real("intertwining_residual", report.intertwining_residual);
    out.real("intertwining_tol", tol);
    let passed = report.passes(1e-8, tol) && hs <= bound * (1.0 + 1e-12);
    out.status(passed);
    Ok((out.finish(), passed))
}

fn cmd_kernel_eval(fmt: Format, t: &CyclicTuple, z: &[Cx], w: &[Cx], d: usize) -> Result<Outcome> {
    let mut out = Out::new(fmt, "kernel-eval");
    let lv = kernel::eval_f_log(t, z, w);
    let f = lv.value();
    let taylor = kernel::taylor_kernel(&t.moments(d), z, w);
    let bound = kernel::taylor_tail_bound(t, z, w, d);
    let diff = (f - taylor).norm();
    out.text("z", &fmt_point(z));
    out.text("w", &fmt_point(w));
    out.int("degree", d);
    out.cx("F", f);
    out.real("log_abs_F", lv.log_abs);
    out.cx("taylor", taylor);
    out.real("truncation_error", diff);
    out.real("tail_bound", bound);
    // A non-finite F (beyond f64 range) is still reported in log form.
    let passed = !f.is_finite() || diff <= bound + 1e-12 * f.norm().max(1.0);
    out.status(passed);
    Ok((out.finish(), passed))
}

fn support_set(t: &CyclicTuple, spec: &str, seed: u64) -> Result<SupportSet> {
    let bad = |reason: &str| Error::InvalidInput {
        field: "support".into(),
        reason: reason.into(),
    };
    let k = match spec.split_once(':') {
        None if spec == "origin" => SupportSet::origin(t.n()),
        None if spec == "spectrum" => {
            let opts = JordanOptions {
                seed,
                ..JordanOptions::default()
            };
            let dec = jordan::joint_spectral_decompose(t, &opts)?;
            SupportSet::Points(dec.blocks.into_iter().map(|b| b.lambda).collect())
        }
        Some(("point", p)) => SupportSet::point(point_arg("support", Some(p), t.n())?),
        Some(("ball", r)) => SupportSet::Ball {
            center: vec![Cx::new(0.0, 0.0); t.n()],
            radius: r.parse().map_err(|_| bad("ball radius is not a number"))?,
        },
        _ => return Err(bad("expected spectrum, origin, point:<c1,..> or ball:<radius>")),
    };
    k.validate()?;
    Ok(k)
}

fn cmd_certify(fmt: Format, t: &CyclicTuple, k: &SupportSet, cfg: &GrowthConfig, limit: f64) -> Result<Outcome> {
    let mut out = Out::new(fmt, "certify");
    let cert = kernel::certify_growth(t, k, cfg)?;
    out.real("N_hat", cert.n_hat);
    out.real("logC_hat", cert.log_c_hat);
    out.real("residual_max", cert.residual_max);
    out.int("samples", cert.samples_used);
    out.int("samples_dropped", cert.samples_dropped);
    out.real("N_limit", limit);
    for w in &cert.warnings {
        out.text("warning", w);
    }
    let passed = cert.n_hat <= limit;
    out.status(passed);
    Ok((out.finish(), passed))
}

fn decompose(t: &CyclicTuple, seed: u64) -> Result<jordan::SpectralDecomposition> {
    let opts = JordanOptions {
        seed,
        ..JordanOptions::default()
    };
    jordan::joint_spectral_decompose(t, &opts)
}

fn support_points(dec: &jordan::SpectralDecomposition) -> String {
    let pts: Vec<String> = dec.blocks.iter().map(|b| fmt_point(&b.lambda)).collect();
    pts.join(", ")
}

fn cmd_classify(fmt: Format, t: &CyclicTuple, d: usize, seed: u64) -> Result<Outcome> {
    let mut out = Out::new(fmt, "classify");
    let dec = decompose(t, seed)?;
    let points = support_points(&dec);
    match dec.classification {
        Classification::Jordan => {
            let rep = jordan::distribution_rep(t, &dec, d)?;
            let formula = jordan::format_rep(&rep);
            if out.is_machine() {
                out.text("classification", "Jordan");
                out.text("support", &points);
                out.text("distribution", &formula);
            } else {
                out.note(&format!("Jordan at {points}; {formula}"));
            }
        }
        Classification::NotJordan => {
            out.text("classification", "NotJordan");
            out.text("spectrum", &points);
        }
    }
    out.real("selfadjoint_defect", dec.selfadjoint_defect);
    // Classification is a verdict, not a check: both outcomes exit 0.
    Ok((out.finish(), true))
}

fn cmd_distribution(fmt: Format, t: &CyclicTuple, d: usize, tol: f64, json: bool, seed: u64) -> Result<Outcome> {
    let dec = decompose(t, seed)?;
    let rep = jordan::distribution_rep(t, &dec, d)?;
    let mt = t.moments(d);
    let err = jordan::round_trip_error(&rep, &mt);
    let passed = err <= tol;
    if json {
        return Ok((io::distribution_to_json(&rep)? + "\n", passed));
    }
    let mut out = Out::new(fmt, "distribution");
    out.int("degree", d);
    out.int("terms", rep.terms.len());
    for (k, term) in rep.terms.iter().enumerate() {
        out.text(&format!("term.{}", k + 1), &jordan::format_term(term));
    }
    out.note("alpha        beta         Λ(z^α z̄^β)          m(α,β)              |diff|");
    let idx = mt.index();
    let verify = idx.prefix_len(d.min(2));
    for b in &idx.indices()[..verify] {
        for a in &idx.indices()[..verify] {
            let lhs = jordan::eval_distribution(&rep, a, b);
            let rhs = mt.get(a, b);
            if out.is_machine() {
                continue;
            }
            out.note(&format!(
                "{:<12} {:<12} {:<20} {:<20} {:.3e}",
                fmt_index(a),
                fmt_index(b),
                output::fmt_cx(lhs),
                output::fmt_cx(rhs),
                (lhs - rhs).norm()
            ));
        }
    }
    out.real("round_trip_error", err);
    out.status(passed);
    Ok((out.finish(), passed))
}

fn cmd_convolve(fmt: Format, t: &CyclicTuple, s: &CyclicTuple, d: usize, tol: f64) -> Result<Outcome> {
    let mut out = Out::new(fmt, "convolve");
    let res = gns::convolve(t, s, d, gns::DEFAULT_NULL_TOL)?;
    out.int("degree", d);
    out.int("dim", res.gns.tuple.dim());
    out.int("nullity", res.gns.nullity);
    out.real("invariance_residual", res.gns.residual);
    for (i, (r, b)) in res.norms.iter().zip(&res.bounds).enumerate() {
        out.real(&format!("norm.{}", i + 1), *r);
        out.real(&format!("bound.{}", i + 1), *b);
    }
    let excess = res.bound_excess();
    out.real("bound_excess", excess);
    let passed = excess <= tol;
    out.status(passed);
    Ok((out.finish(), passed))
}

fn cmd_eigen(fmt: Format, t: &CyclicTuple, points: &[Vec<Cx>], d: usize) -> Result<Outcome> {
    let mut out = Out::new(fmt, "eigen");
    let reports = eigen::eigen_sweep(t, d, points)?;
    out.int("points", reports.len());
    out.note("lambda                      eigen  sigma_min   distance    c           psd");
    let mut passed = true;
    for (k, r) in reports.iter().enumerate() {
        passed &= r.consistent();
        let c = r.distance.constant.value();
        let psd = r.psd_at_constant.map(|p| p.passed);
        if out.is_machine() {
            let key = |s: &str| format!("point.{}.{s}", k + 1);
            out.text(&key("lambda"), &fmt_point(&r.lambda));
            out.text(&key("eigenvalue"), if r.direct.is_eigenvalue { "yes" } else { "no" });
            out.real(&key("sigma_min"), r.direct.smallest_singular_value);
            out.real(&key("distance"), r.distance.distance);
            match c {
                Some(c) => out.real(&key("c"), c),
                None => out.text(&key("c"), "inf"),
            }
            if let Some(p) = psd {
                out.text(&key("psd"), if p { "yes" } else { "no" });
            }
        } else {
            out.note(&format!(
                "{:<27} {:<6} {:<11.3e} {:<11.3e} {:<11} {}",
                fmt_point(&r.lambda),
                if r.direct.is_eigenvalue { "yes" } else { "no" },
                r.direct.smallest_singular_value,
                r.distance.distance,
                c.map_or("inf".to_string(), |c| format!("{c:.6}")),
                match psd {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "-",
                }
            ));
        }
    }
    out.status(passed);
    Ok((out.finish(), passed))
}

fn cmd_example(fmt: Format, name: &str, seed: u64) -> Result<Outcome> {
    let names: Vec<&str> = if name == "all" {
        showcase::EXAMPLES.to_vec()
    } else {
        vec![name]
    };
    let mut text = String::new();
    let mut all = true;
    for n in names {
        let report = showcase::run_example(n, seed)?;
        all &= report.passed();
        if fmt == Format::Machine {
            let mut out = Out::new(fmt, &format!("example {n}"));
            for (k, v) in &report.values {
                out.real(k, *v);
            }
            for c in &report.checks {
                out.text(&format!("check.{}", c.name), if c.passed { "PASS" } else { "FAIL" });
            }
            out.status(report.passed());
            text.push_str(&out.finish());
        } else {
            text.push_str(&format!("{report}\n"));
        }
    }
    Ok((text, all))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotPositive { .. }
        | Error::IncompleteBasis { .. }
        | Error::AmbiguousSpectrum { .. }
        | Error::NotJordanInput { .. }
        | Error::EmptyQuotient
        | Error::Overflow(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, passed)) => {
            print!("{text}");
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
