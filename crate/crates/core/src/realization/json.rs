//! JSON form of a realization:
//!
//! ```text
//! {"n": 3, "m": 2, "l": 2, "z0": [0, 0, 0],
//!  "g": [[field, ...] (m+1 vector fields of n entries)],
//!  "h": [field, ...] (l entries)}
//! ```
//!
//! A field is either `{"taylor": {"i1,...,in": coeff, ...}, "center": [...]}`
//! with polynomial coefficients about `center` (the origin by default), or
//! `{"builtin": "cos" | "sin" | "exp", "var": k, "scale": q, "coeff": a}`
//! for `a · f(q z_k)` with a zero-based variable index. Numbers may be JSON
//! integers, decimals or strings `"p/q"`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Realization, TaylorField};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    fn to_rational(&self) -> Result<Rational> {
        let text = match self {
            Number::Int(k) => return Ok(Rational::from_integer((*k).into())),
            Number::Float(x) => {
                if !x.is_finite() {
                    return Err(Error::Json(format!("non-finite number {x}")));
                }
                format!("{x}")
            }
            Number::Text(s) => s.clone(),
        };
        parse_rational(&text).ok_or_else(|| Error::Json(format!("malformed number `{text}`")))
    }
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum FieldJson {
    Taylor {
        taylor: BTreeMap<String, Number>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<Number>>,
    },
    Builtin {
        builtin: String,
        var: usize,
        #[serde(default)]
        scale: Option<Number>,
        #[serde(default)]
        coeff: Option<Number>,
    },
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RealizationJson {
    n: usize,
    m: usize,
    l: usize,
    z0: Vec<Number>,
    g: Vec<Vec<FieldJson>>,
    h: Vec<FieldJson>,
}

fn parse_index(key: &str, n: usize) -> Result<Vec<u16>> {
    let parts: Vec<&str> = if key.trim().is_empty() { Vec::new() } else { key.split(',').collect() };
    if parts.len() != n {
        return Err(Error::dimension(format!("multi-index `{key}` has {} entries, expected n={n}", parts.len())));
    }
    parts
        .iter()
        .map(|p| p.trim().parse::<u16>().map_err(|_| Error::Json(format!("malformed multi-index `{key}`"))))
        .collect()
}

fn build_field(field: &FieldJson, z0: &[Rational], degree: usize) -> Result<TaylorField> {
    let n = z0.len();
    match field {
        FieldJson::Taylor { taylor, center } => {
            let mut f = TaylorField::zero(n, degree);
            for (key, q) in taylor {
                f.add_term(parse_index(key, n)?, q.to_rational()?);
            }
            let center = match center {
                None => vec![Rational::zero(); n],
                Some(c) => {
                    if c.len() != n {
                        return Err(Error::dimension(format!("center has {} entries, expected n={n}", c.len())));
                    }
                    c.iter().map(Number::to_rational).collect::<Result<_>>()?
                }
            };
            let shift: Vec<Rational> = z0.iter().zip(&center).map(|(z, c)| z - c).collect();
            Ok(f.recenter(&shift))
        }
        FieldJson::Builtin { builtin, var, scale, coeff } => {
            if *var >= n {
                return Err(Error::dimension(format!("builtin variable {var} out of range for n={n}")));
            }
            if !z0[*var].is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "builtin `{builtin}` needs z0[{var}] = 0 so its expansion stays rational"
                )));
            }
            let scale = scale.as_ref().map_or_else(|| Ok(Rational::one()), Number::to_rational)?;
            let coeff = coeff.as_ref().map_or_else(|| Ok(Rational::one()), Number::to_rational)?;
            let f = match builtin.as_str() {
                "cos" => TaylorField::cos(n, degree, *var, &scale),
                "sin" => TaylorField::sin(n, degree, *var, &scale),
                "exp" => TaylorField::exp(n, degree, *var, &scale),
                other => return Err(Error::Json(format!("unknown builtin `{other}`"))),
            };
            Ok(f.scale(&coeff))
        }
    }
}

pub(super) fn from_json(text: &str, degree: usize) -> Result<Realization> {
    let raw: RealizationJson = serde_json::from_str(text)?;
    if raw.z0.len() != raw.n {
        return Err(Error::dimension(format!("z0 has {} entries, expected n={}", raw.z0.len(), raw.n)));
    }
    if raw.g.len() != raw.m + 1 {
        return Err(Error::dimension(format!("g has {} vector fields, expected m+1={}", raw.g.len(), raw.m + 1)));
    }
    if raw.h.len() != raw.l {
        return Err(Error::dimension(format!("h has {} entries, expected l={}", raw.h.len(), raw.l)));
    }
    let z0: Vec<Rational> = raw.z0.iter().map(Number::to_rational).collect::<Result<_>>()?;
    let mut g = Vec::with_capacity(raw.g.len());
    for (j, field) in raw.g.iter().enumerate() {
        if field.len() != raw.n {
            return Err(Error::dimension(format!("g{j} has {} entries, expected n={}", field.len(), raw.n)));
        }
        g.push(field.iter().map(|f| build_field(f, &z0, degree)).collect::<Result<Vec<_>>>()?);
    }
    let h = raw.h.iter().map(|f| build_field(f, &z0, degree)).collect::<Result<Vec<_>>>()?;
    Realization::new(z0, g, h)
}

fn field_json(f: &TaylorField, z0: &[Rational]) -> FieldJson {
    let taylor = f
        .iter()
        .map(|(e, q)| {
            let key = e.iter().map(u16::to_string).collect::<Vec<_>>().join(",");
            (key, Number::Text(q.to_string()))
        })
        .collect();
    FieldJson::Taylor { taylor, center: Some(z0.iter().map(|q| Number::Text(q.to_string())).collect()) }
}

pub(super) fn to_json(r: &Realization) -> String {
    let raw = RealizationJson {
        n: r.n(),
        m: r.m(),
        l: r.l(),
        z0: r.z0.iter().map(|q| Number::Text(q.to_string())).collect(),
        g: r.g.iter().map(|v| v.iter().map(|f| field_json(f, &r.z0)).collect()).collect(),
        h: r.h.iter().map(|f| field_json(f, &r.z0)).collect(),
    };
    serde_json::to_string_pretty(&raw).expect("realization serializes")
}
