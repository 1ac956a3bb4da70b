//! JSON documents for tuples, moment tables and distribution representations.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major arrays of
//! rows. A tuple document looks like
//!
//! ```json
//! { "n": 1, "m": 2,
//!   "matrices": [[[[0,0],[0,0]], [[1,0],[0,0]]]],
//!   "h": [[1,0],[0,0]],
//!   "gram_diagonal": [1, 1] }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::{DistributionRep, DistributionTerm};
use crate::multiindex::MultiIndex;
use crate::tuples::{CyclicTuple, MomentTable};
use crate::{CMat, CVec, Cx, Polynomial};

pub type Pair = [f64; 2];

fn pair(c: Cx) -> Pair {
    [c.re, c.im]
}

fn cx(p: Pair) -> Cx {
    Cx::new(p[0], p[1])
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleDoc {
    pub n: usize,
    pub m: usize,
    pub matrices: Vec<Vec<Vec<Pair>>>,
    pub h: Vec<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram_diagonal: Option<Vec<f64>>,
    /// Full Hermitian gram matrix; mutually exclusive with `gram_diagonal`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<Pair>>>,
}

fn matrix_from_rows(rows: &[Vec<Pair>], m: usize, field: &str) -> Result<CMat> {
    if rows.len() != m {
        return Err(Error::invalid(field, format!("has {} rows, expected {m}", rows.len())));
    }
    let mut out = CMat::zeros(m, m);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(Error::invalid(format!("{field}[{r}]"), format!("has {} entries, expected {m}", row.len())));
        }
        for (c, v) in row.iter().enumerate() {
            out[(r, c)] = cx(*v);
        }
    }
    Ok(out)
}

fn rows_of(a: &CMat) -> Vec<Vec<Pair>> {
    (0..a.nrows()).map(|r| (0..a.ncols()).map(|c| pair(a[(r, c)])).collect()).collect()
}

impl TupleDoc {
    pub fn from_tuple(t: &CyclicTuple) -> Self {
        let gram = if t.has_identity_gram() { None } else { Some(rows_of(t.gram())) };
        TupleDoc {
            n: t.n(),
            m: t.dim(),
            matrices: t.matrices().iter().map(rows_of).collect(),
            h: t.h().iter().map(|c| pair(*c)).collect(),
            gram_diagonal: None,
            gram,
        }
    }

    pub fn to_tuple(&self) -> Result<CyclicTuple> {
        let m = self.m;
        if m == 0 {
            return Err(Error::invalid("m", "dimension must be positive"));
        }
        if self.matrices.len() != self.n || self.n == 0 {
            return Err(Error::invalid(
                "matrices",
                format!("has {} matrices, expected n = {} ≥ 1", self.matrices.len(), self.n),
            ));
        }
        let matrices = self
            .matrices
            .iter()
            .enumerate()
            .map(|(i, rows)| matrix_from_rows(rows, m, &format!("matrices[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        if self.h.len() != m {
            return Err(Error::invalid("h", format!("has {} entries, expected {m}", self.h.len())));
        }
        let h = CVec::from_iterator(m, self.h.iter().map(|p| cx(*p)));
        let gram = match (&self.gram_diagonal, &self.gram) {
            (Some(_), Some(_)) => return Err(Error::invalid("gram", "give either gram or gram_diagonal, not both")),
            (Some(d), None) => {
                if d.len() != m {
                    return Err(Error::invalid("gram_diagonal", format!("has {} entries, expected {m}", d.len())));
                }
                if let Some(j) = d.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
                    return Err(Error::invalid(format!("gram_diagonal[{j}]"), "must be positive"));
                }
                Some(CMat::from_diagonal(&CVec::from_iterator(m, d.iter().map(|x| Cx::new(*x, 0.0)))))
            }
            (None, Some(rows)) => Some(matrix_from_rows(rows, m, "gram")?),
            (None, None) => None,
        };
        match gram {
            Some(g) => CyclicTuple::with_gram(matrices, h, g),
            None => CyclicTuple::new(matrices, h),
        }
    }
}

/// Deserialises `text`, reporting failures against the JSON path of the
/// offending field (`h[0]`, `matrices[1][0][2]`, ...).
fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() || path == "." {
            Error::Json(inner)
        } else {
            Error::invalid(path, inner.to_string())
        }
    })
}

pub fn parse_tuple(text: &str) -> Result<CyclicTuple> {
    from_json::<TupleDoc>(text)?.to_tuple()
}

pub fn tuple_to_json(t: &CyclicTuple) -> Result<String> {
    Ok(serde_json::to_string_pretty(&TupleDoc::from_tuple(t))?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentEntry {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub value: Pair,
}

/// Header `{n, d}` plus one entry per pair `(α, β)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentDoc {
    pub n: usize,
    pub d: usize,
    pub entries: Vec<MomentEntry>,
}

impl MomentDoc {
    pub fn from_table(mt: &MomentTable) -> Self {
        let index = mt.index();
        let mut entries = Vec::with_capacity(mt.len() * mt.len());
        for a in 0..mt.len() {
            for b in 0..mt.len() {
                entries.push(MomentEntry {
                    alpha: index.get(a).as_slice().to_vec(),
                    beta: index.get(b).as_slice().to_vec(),
                    value: pair(mt.matrix()[(b, a)]),
                });
            }
        }
        MomentDoc {
            n: mt.n(),
            d: mt.degree(),
            entries,
        }
    }

    /// Every pair `(α, β)` with `|α|, |β| ≤ d` must appear exactly once.
    pub fn to_table(&self) -> Result<MomentTable> {
        if self.n == 0 {
            return Err(Error::invalid("n", "need at least one variable"));
        }
        let index = crate::multiindex::IndexSet::new(self.n, self.d);
        let len = index.len();
        let mut matrix = CMat::zeros(len, len);
        let mut seen = vec![false; len * len];
        for (k, e) in self.entries.iter().enumerate() {
            let lookup = |v: &Vec<u32>, name: &str| {
                if v.len() != self.n {
                    return Err(Error::invalid(format!("entries[{k}].{name}"), format!("expected {} exponents", self.n)));
                }
                index
                    .position(&MultiIndex::new(v.clone()))
                    .ok_or_else(|| Error::invalid(format!("entries[{k}].{name}"), format!("degree exceeds d = {}", self.d)))
            };
            let a = lookup(&e.alpha, "alpha")?;
            let b = lookup(&e.beta, "beta")?;
            if seen[b * len + a] {
                return Err(Error::invalid(format!("entries[{k}]"), "duplicate (alpha, beta) pair"));
            }
            seen[b * len + a] = true;
            matrix[(b, a)] = cx(e.value);
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            let (b, a) = (p / len, p % len);
            return Err(Error::invalid(
                "entries",
                format!("missing alpha={:?} beta={:?}", index.get(a).as_slice(), index.get(b).as_slice()),
            ));
        }
        MomentTable::from_matrix(self.n, self.d, matrix)
    }
}

pub fn parse_moments(text: &str) -> Result<MomentTable> {
    from_json::<MomentDoc>(text)?.to_table()
}

pub fn moments_to_json(mt: &MomentTable) -> Result<String> {
    Ok(serde_json::to_string(&MomentDoc::from_table(mt))?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub alpha: Vec<u32>,
    pub coeff: Pair,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub lambda: Vec<Pair>,
    pub polys: Vec<Vec<PolyTerm>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionDoc {
    pub n: usize,
    pub terms: Vec<TermDoc>,
}

impl DistributionDoc {
    pub fn from_rep(rep: &DistributionRep) -> Self {
        let terms = rep
            .terms
            .iter()
            .map(|t| TermDoc {
                lambda: t.lambda.iter().map(|c| pair(*c)).collect(),
                polys: t
                    .polys
                    .iter()
                    .map(|q| {
                        q.terms()
                            .map(|(a, c)| PolyTerm {
                                alpha: a.as_slice().to_vec(),
                                coeff: pair(*c),
                            })
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        DistributionDoc { n: rep.n, terms }
    }

    pub fn to_rep(&self) -> Result<DistributionRep> {
        let n = self.n;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, t) in self.terms.iter().enumerate() {
            if t.lambda.len() != n {
                return Err(Error::invalid(format!("terms[{k}].lambda"), format!("expected {n} coordinates")));
            }
            let mut polys = Vec::with_capacity(t.polys.len());
            for (j, q) in t.polys.iter().enumerate() {
                let mut p = Polynomial::zero(n);
                for (l, term) in q.iter().enumerate() {
                    if term.alpha.len() != n {
                        return Err(Error::invalid(
                            format!("terms[{k}].polys[{j}][{l}].alpha"),
                            format!("expected {n} exponents"),
                        ));
                    }
                    p.add_term(MultiIndex::new(term.alpha.clone()), cx(term.coeff));
                }
                polys.push(p);
            }
            terms.push(DistributionTerm {
                lambda: t.lambda.iter().map(|p| cx(*p)).collect(),
                polys,
            });
        }
        Ok(DistributionRep { n, terms })
    }
}

pub fn distribution_to_json(rep: &DistributionRep) -> Result<String> {
    Ok(serde_json::to_string(&DistributionDoc::from_rep(rep))?)
}

pub fn parse_distribution(text: &str) -> Result<DistributionRep> {
    from_json::<DistributionDoc>(text)?.to_rep()
}
