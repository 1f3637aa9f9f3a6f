//! JSON documents read and written by the command-line front end.
//!
//! Every document carries `"v": 1` (a missing `v` is read as 1) and unknown
//! fields are rejected. Scalars of `Z/p^N` are written as decimal strings and
//! read from strings or numbers; scalars of `F_q[s]/(s^N)` are coefficient
//! arrays of field-element codes.

use num_bigint::BigInt;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cochar::{CoinvResult, SpValue};
use crate::error::{Error, Result};
use crate::form::{HVector, HermForm, Matrix};
use crate::linalg::QMatrix;
use crate::reduction::Similitude;
use crate::ring::{QElt, RawScalar, RingKind, RingSpec, Scalar};
use crate::teich::{
    AeRing, LinearFactorization, MonoElt, NewtonPolygon, OcModel, PiPoly, TeichSeries,
    DEFAULT_VPREC,
};

pub const SCHEMA_VERSION: u32 = 1;

fn input<T: ToString>(msg: T) -> Error {
    Error::Input(msg.to_string())
}

pub fn check_version(v: Option<u32>) -> Result<()> {
    match v {
        None | Some(SCHEMA_VERSION) => Ok(()),
        Some(other) => Err(input(format!("unsupported schema version {other}"))),
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(input)
}

/// An integer given as a JSON number or a decimal string.
pub fn int_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| input(format!("{n} is not an integer"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| input(format!("`{s}` is not an integer"))),
        other => Err(input(format!("expected an integer, got {other}"))),
    }
}

fn small_int(v: &Value) -> Result<i64> {
    i64::try_from(int_value(v)?).map_err(|_| input("integer out of range"))
}

/// Integers that fit in `i64` become JSON numbers, others strings.
pub fn bigint_value(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

// ---------------------------------------------------------------- rings

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Value>,
}

fn raw_value(v: &Value, poly: bool) -> Result<RawScalar> {
    match v {
        Value::Array(items) if poly => Ok(RawScalar::Poly(
            items.iter().map(small_int).collect::<Result<_>>()?,
        )),
        Value::Array(_) => Err(input(
            "coefficient arrays are only valid for polytrunc rings",
        )),
        other => Ok(RawScalar::Int(int_value(other)?)),
    }
}

impl RingJson {
    pub fn to_ring(&self) -> Result<RingSpec> {
        if let Some(name) = &self.preset {
            if self.kind.is_some()
                || self.p.is_some()
                || self.q.is_some()
                || self.t.is_some()
                || self.pi.is_some()
            {
                return Err(input("a preset ring only accepts an optional `n`"));
            }
            return RingSpec::preset(name, self.n);
        }
        let n = self.n.ok_or_else(|| input("ring needs `n`"))?;
        let field = |v: &Option<Value>, name: &str| -> Result<Value> {
            v.clone()
                .ok_or_else(|| input(format!("ring needs `{name}`")))
        };
        match self.kind.as_deref() {
            Some("zmod") => {
                if self.q.is_some() {
                    return Err(input("zmod rings take `p`, not `q`"));
                }
                let p = self.p.ok_or_else(|| input("zmod ring needs `p`"))?;
                RingSpec::new(
                    RingKind::IntModPrimePower { p, n },
                    &raw_value(&field(&self.t, "t")?, false)?,
                    &raw_value(&field(&self.pi, "pi")?, false)?,
                )
            }
            Some("polytrunc") => {
                if self.p.is_some() {
                    return Err(input("polytrunc rings take `q`, not `p`"));
                }
                let q = self.q.ok_or_else(|| input("polytrunc ring needs `q`"))?;
                RingSpec::new(
                    RingKind::PolyTrunc { q, n },
                    &raw_value(&field(&self.t, "t")?, true)?,
                    &raw_value(&field(&self.pi, "pi")?, true)?,
                )
            }
            Some(other) => Err(input(format!("unknown ring kind `{other}`"))),
            None => Err(input("ring needs `preset` or `kind`")),
        }
    }

    pub fn from_ring(ring: &RingSpec) -> Self {
        let (kind, p, q, n) = match ring.kind() {
            RingKind::IntModPrimePower { p, n } => ("zmod", Some(p), None, n),
            RingKind::PolyTrunc { q, n } => ("polytrunc", None, Some(q), n),
        };
        RingJson {
            preset: None,
            kind: Some(kind.into()),
            p,
            q,
            n: Some(n),
            t: Some(scalar_value(&ring.t())),
            pi: Some(scalar_value(&ring.pi())),
        }
    }
}

pub fn scalar_value(s: &Scalar) -> Value {
    match s.to_raw() {
        RawScalar::Int(x) => json!(x.to_string()),
        RawScalar::Poly(c) => json!(c),
    }
}

pub fn parse_scalar(ring: &RingSpec, v: &Value) -> Result<Scalar> {
    let poly = matches!(ring.kind(), RingKind::PolyTrunc { .. });
    ring.scalar(&raw_value(v, poly)?)
}

// ---------------------------------------------------------------- forms

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormBody {
    pub a: Vec<Vec<Value>>,
    pub b: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    #[serde(default)]
    pub v: Option<u32>,
    #[serde(default)]
    pub ring: Option<RingJson>,
    pub a: Vec<Vec<Value>>,
    pub b: Vec<Vec<Value>>,
}

fn parse_matrix(ring: &RingSpec, m: &[Vec<Value>]) -> Result<Matrix> {
    m.iter()
        .map(|row| row.iter().map(|v| parse_scalar(ring, v)).collect())
        .collect()
}

fn matrix_value(m: &Matrix) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(scalar_value).collect()))
            .collect(),
    )
}

impl FormBody {
    pub fn to_form(&self, ring: &RingSpec) -> Result<HermForm> {
        HermForm::from_matrices(
            ring,
            parse_matrix(ring, &self.a)?,
            parse_matrix(ring, &self.b)?,
        )
    }

    pub fn from_form(f: &HermForm) -> Self {
        let rows = |m: &Matrix| -> Vec<Vec<Value>> {
            m.iter()
                .map(|r| r.iter().map(scalar_value).collect())
                .collect()
        };
        FormBody {
            a: rows(f.a()),
            b: rows(f.b()),
        }
    }
}

pub fn form_doc(f: &HermForm) -> Value {
    json!({
        "v": SCHEMA_VERSION,
        "ring": RingJson::from_ring(f.ring()),
        "a": matrix_value(f.a()),
        "b": matrix_value(f.b()),
    })
}

// ---------------------------------------------------------- similitudes

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QJson {
    pub a: Value,
    pub b: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimilitudeJson {
    /// Precision the similitude lives at; defaults to the ring's.
    #[serde(default)]
    pub precision: Option<u32>,
    pub gamma1: Vec<Vec<QJson>>,
    pub gamma2: Value,
}

impl SimilitudeJson {
    pub fn to_similitude(&self, ring: &RingSpec) -> Result<Similitude> {
        let gamma1: QMatrix = self
            .gamma1
            .iter()
            .map(|row| {
                row.iter()
                    .map(|q| QElt::new(parse_scalar(ring, &q.a)?, parse_scalar(ring, &q.b)?))
                    .collect()
            })
            .collect::<Result<_>>()?;
        let n = gamma1.len();
        if let Some(row) = gamma1.iter().find(|r| r.len() != n) {
            return Err(input(format!(
                "gamma1 must be square, found a row of length {}",
                row.len()
            )));
        }
        Ok(Similitude {
            gamma1,
            gamma2: parse_scalar(ring, &self.gamma2)?,
        })
    }
}

pub fn qelt_value(x: &QElt) -> Value {
    json!({"a": scalar_value(&x.a), "b": scalar_value(&x.b)})
}

pub fn similitude_value(s: &Similitude) -> Value {
    json!({
        "precision": s.ring().precision(),
        "gamma1": s.gamma1.iter()
            .map(|row| row.iter().map(qelt_value).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "gamma2": scalar_value(&s.gamma2),
    })
}

pub fn hvector_value(v: &HVector) -> Value {
    Value::Array(v.0.iter().map(qelt_value).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftDoc {
    #[serde(default)]
    pub v: Option<u32>,
    #[serde(default)]
    pub ring: Option<RingJson>,
    pub a: Vec<Vec<Value>>,
    pub b: Vec<Vec<Value>>,
    pub similitude: SimilitudeJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimilarDoc {
    #[serde(default)]
    pub v: Option<u32>,
    #[serde(default)]
    pub ring: Option<RingJson>,
    pub f1: FormBody,
    pub f2: FormBody,
}

// --------------------------------------------------------------- series

/// `[coefficient, exponent]`, e.g. `["2", "3/1"]`.
pub type TermJson = (Value, Value);

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDoc {
    #[serde(default)]
    pub v: Option<u32>,
    pub q: u32,
    #[serde(default)]
    pub p: Option<u32>,
    pub maxden: u32,
    pub prec: usize,
    #[serde(default)]
    pub vprec: Option<u32>,
    #[serde(default)]
    pub max_terms: Option<usize>,
    pub coeffs: Vec<Vec<TermJson>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDoc {
    #[serde(default)]
    pub v: Option<u32>,
    pub q: u32,
    #[serde(default)]
    pub p: Option<u32>,
    pub maxden: u32,
    #[serde(default)]
    pub vprec: Option<u32>,
    #[serde(default)]
    pub max_terms: Option<usize>,
    /// Coefficients of `1, pi, pi^2, ..`; the last must be `1`.
    pub poly: Vec<Vec<TermJson>>,
}

pub fn oc_model(
    q: u32,
    p: Option<u32>,
    maxden: u32,
    vprec: Option<u32>,
    max_terms: Option<usize>,
) -> Result<OcModel> {
    let oc = OcModel::new(q, maxden, vprec.unwrap_or(DEFAULT_VPREC))?;
    if let Some(p) = p {
        if p != oc.p() {
            return Err(input(format!("p = {p} does not match q = {q}")));
        }
    }
    Ok(match max_terms {
        Some(m) => oc.with_max_terms(m),
        None => oc,
    })
}

pub fn parse_rational(v: &Value) -> Result<Rational64> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            let (n, d) = s.split_once('/').unwrap_or((s, "1"));
            let n: i64 = n
                .trim()
                .parse()
                .map_err(|_| input(format!("bad exponent `{s}`")))?;
            let d: i64 = d
                .trim()
                .parse()
                .map_err(|_| input(format!("bad exponent `{s}`")))?;
            if d <= 0 {
                return Err(input(format!("bad exponent `{s}`")));
            }
            Ok(Rational64::new(n, d))
        }
        other => Ok(Rational64::from_integer(small_int(other)?)),
    }
}

pub fn rational_value(r: &Rational64) -> Value {
    json!(format!("{}/{}", r.numer(), r.denom()))
}

pub fn parse_mono(oc: &OcModel, terms: &[TermJson]) -> Result<MonoElt> {
    let parsed: Vec<(u32, Rational64)> = terms
        .iter()
        .map(|(c, e)| {
            let c = u32::try_from(small_int(c)?).map_err(|_| input("negative field element"))?;
            Ok((c, parse_rational(e)?))
        })
        .collect::<Result<_>>()?;
    oc.from_terms(&parsed)
}

pub fn mono_value(oc: &OcModel, x: &MonoElt) -> Value {
    Value::Array(
        oc.terms(x)
            .iter()
            .map(|(c, e)| json!([c.to_string(), rational_value(e)]))
            .collect(),
    )
}

pub fn coeffs_value(oc: &OcModel, c: &[MonoElt]) -> Value {
    Value::Array(c.iter().map(|x| mono_value(oc, x)).collect())
}

impl SeriesDoc {
    pub fn to_series(&self) -> Result<(AeRing, TeichSeries)> {
        check_version(self.v)?;
        let oc = oc_model(self.q, self.p, self.maxden, self.vprec, self.max_terms)?;
        if self.coeffs.len() > self.prec {
            return Err(input(format!(
                "{} coefficients given for precision {}",
                self.coeffs.len(),
                self.prec
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|t| parse_mono(&oc, t))
            .collect::<Result<Vec<_>>>()?;
        let ring = AeRing::new(oc, self.prec)?;
        let s = ring.series(coeffs);
        Ok((ring, s))
    }
}

pub fn series_value(ring: &AeRing, s: &TeichSeries) -> Value {
    json!({
        "v": SCHEMA_VERSION,
        "q": ring.oc.q(),
        "p": ring.oc.p(),
        "maxden": ring.oc.maxden(),
        "prec": ring.prec,
        "vprec": ring.oc.vprec(),
        "coeffs": coeffs_value(&ring.oc, &s.coeffs),
    })
}

impl FactorDoc {
    pub fn to_poly(&self) -> Result<(AeRing, PiPoly)> {
        check_version(self.v)?;
        let oc = oc_model(self.q, self.p, self.maxden, self.vprec, self.max_terms)?;
        let coeffs = self
            .poly
            .iter()
            .map(|t| parse_mono(&oc, t))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(input("empty polynomial"));
        }
        let prec = coeffs.len();
        Ok((AeRing::new(oc, prec)?, PiPoly { coeffs }))
    }
}

pub fn newton_polygon_value(np: &NewtonPolygon) -> Value {
    json!({
        "pi_power": np.pi_power,
        "segments": np.segments.iter()
            .map(|s| json!({"slope": rational_value(&s.slope), "length": s.length}))
            .collect::<Vec<_>>(),
    })
}

pub fn factorization_value(ring: &AeRing, f: &LinearFactorization) -> Value {
    json!({
        "pi_power": f.pi_power,
        "roots": f.roots.iter()
            .map(|(w, m)| json!({"root": mono_value(&ring.oc, w), "multiplicity": m}))
            .collect::<Vec<_>>(),
        "remainder": coeffs_value(&ring.oc, &f.remainder.coeffs),
        "complete": f.complete,
    })
}

// ---------------------------------------------------------------- cochar

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    #[serde(default)]
    pub v: Option<u32>,
    pub rank: usize,
    pub generators: Vec<Vec<Vec<Value>>>,
    #[serde(default)]
    pub mu: Option<Vec<Value>>,
}

impl ActionDoc {
    pub fn generators(&self) -> Result<Vec<Vec<Vec<BigInt>>>> {
        self.generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|r| r.iter().map(int_value).collect())
                    .collect()
            })
            .collect()
    }

    pub fn mu(&self) -> Result<Option<Vec<BigInt>>> {
        self.mu
            .as_ref()
            .map(|m| m.iter().map(int_value).collect())
            .transpose()
    }
}

pub fn sp_value(v: &SpValue) -> Value {
    json!({
        "free": v.free.iter().map(bigint_value).collect::<Vec<_>>(),
        "torsion": v.torsion.iter()
            .map(|(d, x)| json!({"mod": bigint_value(d), "val": bigint_value(x)}))
            .collect::<Vec<_>>(),
    })
}

pub fn coinv_value(c: &CoinvResult) -> Value {
    json!({
        "free_rank": c.free_rank,
        "torsion": c.torsion.iter().map(bigint_value).collect::<Vec<_>>(),
    })
}

pub fn error_value(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "detail": e.to_string()}})
}
