//! Parsing of command-line values and construction of builtin tuples.

use std::path::Path;

use fockmodel::models::{self, RadialKind, RadialWeightModel};
use fockmodel::{io, random, CMat, CVec, Cx, CyclicTuple, Error, Result};

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` (exponents like `1e-3` allowed).
pub fn parse_complex(field: &str, s: &str) -> Result<Cx> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidInput {
        field: field.to_string(),
        reason: format!("cannot parse `{s}` as a complex number"),
    };
    if t.is_empty() {
        return Err(bad());
    }
    let num = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Cx::new(t.parse::<f64>().map_err(|_| bad())?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Cx::new(
            body[..k].parse::<f64>().map_err(|_| bad())?,
            num(&body[k..])?,
        )),
        None => Ok(Cx::new(0.0, num(body)?)),
    }
}

pub fn parse_complex_list(field: &str, s: &str) -> Result<Vec<Cx>> {
    s.split(',').map(|p| parse_complex(field, p)).collect()
}

pub fn parse_real_list(field: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim().parse::<f64>().map_err(|_| Error::InvalidInput {
                field: field.to_string(),
                reason: format!("cannot parse `{p}` as a number"),
            })
        })
        .collect()
}

/// Options shared by the builtin tuple constructors.
#[derive(Clone, Debug)]
pub struct BuiltinParams {
    pub n: usize,
    pub m: usize,
    pub lambda: Vec<Cx>,
    pub seed: u64,
}

pub const TUPLE_MODELS: &[&str] = &[
    "zero",
    "scalar",
    "jordan",
    "varopoulos-kaijser",
    "nonnormal",
    "random",
    "random-jordan",
];

fn lambda_vector(p: &BuiltinParams) -> Result<Vec<Cx>> {
    match p.lambda.len() {
        1 => Ok(vec![p.lambda[0]; p.n]),
        k if k == p.n => Ok(p.lambda.clone()),
        k => Err(Error::InvalidInput {
            field: "lambda".into(),
            reason: format!("{k} values given for n = {}", p.n),
        }),
    }
}

pub fn builtin_tuple(name: &str, p: &BuiltinParams) -> Result<CyclicTuple> {
    if p.n == 0 {
        return Err(Error::InvalidInput {
            field: "n".into(),
            reason: "need at least one operator".into(),
        });
    }
    let one = CVec::from_element(1, Cx::new(1.0, 0.0));
    match name {
        "zero" => CyclicTuple::new(vec![CMat::zeros(1, 1); p.n], one),
        "scalar" => {
            let lam = lambda_vector(p)?;
            CyclicTuple::new(lam.iter().map(|l| CMat::from_element(1, 1, *l)).collect(), one)
        }
        "jordan" => {
            if p.m == 0 {
                return Err(Error::InvalidInput {
                    field: "m".into(),
                    reason: "block size must be at least 1".into(),
                });
            }
            Ok(models::jordan_block_tuple(p.m, p.lambda[0]))
        }
        "varopoulos-kaijser" | "vk" => Ok(models::varopoulos_kaijser().tuple),
        "nonnormal" => {
            let (z, o) = (Cx::new(0.0, 0.0), Cx::new(1.0, 0.0));
            CyclicTuple::new(
                vec![CMat::from_row_slice(2, 2, &[z, z, o, o])],
                CVec::from_row_slice(&[o, z]),
            )
        }
        "random" => {
            let mut rng = random::rng(p.seed);
            Ok(random::polynomial_tuple(&mut rng, p.n, p.m.max(1), 1.0))
        }
        "random-jordan" => {
            let mut rng = random::rng(p.seed);
            Ok(random::jordan_tuple(&mut rng, p.n, p.m.max(1)))
        }
        other => Err(Error::InvalidInput {
            field: "model".into(),
            reason: format!("unknown model `{other}`, expected one of {}", TUPLE_MODELS.join(", ")),
        }),
    }
}

pub fn read_tuple_file(path: &Path) -> Result<CyclicTuple> {
    let text = std::fs::read_to_string(path)?;
    io::parse_tuple(&text)
}

/// A file path, or `name[:m[:lambda]]` naming a builtin.
pub fn tuple_from_spec(spec: &str, seed: u64) -> Result<CyclicTuple> {
    let path = Path::new(spec);
    if path.exists() {
        return read_tuple_file(path);
    }
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or("");
    let mut params = BuiltinParams {
        n: 1,
        m: 2,
        lambda: vec![Cx::new(0.0, 0.0)],
        seed,
    };
    let rest: Vec<&str> = parts.collect();
    match (name, rest.as_slice()) {
        ("scalar", [l]) => params.lambda = parse_complex_list("with", l)?,
        ("jordan", [m]) => params.m = parse_usize("with", m)?,
        ("jordan", [m, l]) => {
            params.m = parse_usize("with", m)?;
            params.lambda = vec![parse_complex("with", l)?];
        }
        (_, []) => {}
        _ => {
            return Err(Error::InvalidInput {
                field: "with".into(),
                reason: format!("cannot parse `{spec}`; use a file path, scalar:<lambda>, jordan:<m>[:<lambda>] or a model name"),
            })
        }
    }
    if name == "scalar" {
        params.n = params.lambda.len();
    }
    builtin_tuple(name, &params)
}

fn parse_usize(field: &str, s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::InvalidInput {
        field: field.into(),
        reason: format!("`{s}` is not a non-negative integer"),
    })
}

pub const RADIAL_MODELS: &[&str] = &["drury-arveson", "hardy", "ht"];

pub fn radial_model(name: &str, n: usize, t: f64, r: f64) -> Result<Option<RadialWeightModel>> {
    let kind = match name {
        "drury-arveson" => RadialKind::DruryArveson,
        "hardy" => RadialKind::Hardy(r),
        "ht" => RadialKind::Ht(t),
        _ => return Ok(None),
    };
    RadialWeightModel::new(n, kind).map(Some)
}
