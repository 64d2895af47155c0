//! JSON literals for scalars, matrices, group functions and finite algebras.
//!
//! Scalars are either exact rationals written `"a/b"` or capped values
//! `{"v": val, "unit": u, "N": prec}`; a value known only to vanish below
//! `p^v` is written with `unit = 0` and `N = 0`. Units that do not fit in
//! 64 bits are written as decimal strings.

use num_bigint::{BigInt, BigUint};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fp::FpMatrix;
use crate::linalg::KMatrix;
use crate::padic::{parse_rational, Field, Padic};
use crate::reduction::FiniteAlgebra;

pub fn scalar_to_json(x: &Padic) -> Value {
    match x.capped_parts() {
        None => Value::String(x.as_rational().expect("exact").to_string()),
        Some((v, unit, n)) => {
            let unit = match u64::try_from(&unit) {
                Ok(u) => json!(u),
                Err(_) => Value::String(unit.to_string()),
            };
            json!({"v": v, "unit": unit, "N": n})
        }
    }
}

fn big_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| Error::Input(format!("expected an integer, found {n}"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|e| Error::Input(format!("bad integer {s:?}: {e}"))),
        other => Err(Error::Input(format!("expected an integer, found {other}"))),
    }
}

pub fn scalar_from_json(field: &Field, v: &Value) -> Result<Padic> {
    match v {
        Value::String(s) => Ok(field.rational(parse_rational(s)?)),
        Value::Number(_) => Ok(field.rational(big_int(v)?.into())),
        Value::Object(map) => {
            let get = |k: &str| {
                map.get(k)
                    .ok_or_else(|| Error::Input(format!("scalar literal missing {k:?}")))
            };
            let val = i64::try_from(big_int(get("v")?)?)
                .map_err(|_| Error::Input("valuation out of range".into()))?;
            let unit = big_int(get("unit")?)?;
            let prec = u32::try_from(big_int(get("N")?)?)
                .map_err(|_| Error::Input("N out of range".into()))?;
            if prec == 0 {
                if unit != BigInt::from(0) {
                    return Err(Error::Input("N = 0 requires unit = 0".into()));
                }
                return Ok(field.vanished(val));
            }
            if BigUint::try_from(&unit).is_ok_and(|u| u % field.p() == BigUint::from(0u32)) {
                return Err(Error::Input(format!("unit {unit} is divisible by p")));
            }
            Ok(field.capped(val, &unit, prec))
        }
        other => Err(Error::Input(format!("not a scalar literal: {other}"))),
    }
}

#[derive(Deserialize)]
struct FieldSpec {
    p: u64,
    #[serde(default = "default_precision")]
    precision: u32,
}

fn default_precision() -> u32 {
    64
}

pub fn matrix_to_json(m: &KMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect()))
        .collect();
    json!({
        "field": {"p": m.field().p(), "precision": m.field().precision()},
        "rows": rows,
    })
}

fn grid(v: &Value) -> Result<Vec<&Vec<Value>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Input("matrix must be an array of rows".into()))?;
    let rows: Vec<&Vec<Value>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Input("row is not an array".into()))
        })
        .collect::<Result<_>>()?;
    let width = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Input("ragged matrix".into()));
    }
    Ok(rows)
}

/// Reads `{"field": {"p", "precision"}, "rows": [[scalar, ...], ...]}`.
/// The field descriptor may be replaced by `field` when given.
pub fn matrix_from_json(v: &Value, field: Option<&Field>) -> Result<KMatrix> {
    let field = match (v.get("field"), field) {
        (_, Some(f)) => f.clone(),
        (Some(spec), None) => {
            let spec: FieldSpec = serde_json::from_value(spec.clone())
                .map_err(|e| Error::Input(format!("bad field descriptor: {e}")))?;
            Field::new(spec.p, spec.precision)?
        }
        (None, None) => return Err(Error::Input("matrix has no field descriptor".into())),
    };
    let rows = grid(
        v.get("rows")
            .ok_or_else(|| Error::Input("matrix has no rows".into()))?,
    )?;
    let rows = rows
        .into_iter()
        .map(|r| r.iter().map(|x| scalar_from_json(&field, x)).collect())
        .collect::<Result<Vec<Vec<Padic>>>>()?;
    Ok(KMatrix::from_rows(&field, rows))
}

/// A function on a finite group as an array in canonical element order.
pub fn function_from_json(field: &Field, v: &Value) -> Result<Vec<Padic>> {
    v.as_array()
        .ok_or_else(|| Error::Input("function must be an array".into()))?
        .iter()
        .map(|x| scalar_from_json(field, x))
        .collect()
}

pub fn fp_matrix_from_json(p: u64, v: &Value) -> Result<FpMatrix> {
    let rows = grid(v)?;
    let ints = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    x.as_i64()
                        .ok_or_else(|| Error::Input(format!("expected an integer, found {x}")))
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&[i64]> = ints.iter().map(|r| r.as_slice()).collect();
    Ok(FpMatrix::from_ints(p, &refs))
}

/// Reads `{"p": 3, "basis": [[[1, 0], [0, 0]], ...]}`.
pub fn algebra_from_json(v: &Value) -> Result<FiniteAlgebra> {
    let p = v
        .get("p")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Input("algebra needs an integer \"p\"".into()))?;
    if !crate::padic::is_prime(p) {
        return Err(Error::ConfigInvalid(format!("{p} is not prime")));
    }
    let basis = v
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Input("algebra needs a \"basis\" array".into()))?
        .iter()
        .map(|m| fp_matrix_from_json(p, m))
        .collect::<Result<Vec<_>>>()?;
    let n = basis
        .first()
        .map(|m| m.rows())
        .ok_or_else(|| Error::Input("empty basis".into()))?;
    FiniteAlgebra::new(p, n, basis)
}

pub fn algebra_to_json(alg: &FiniteAlgebra) -> Value {
    json!({"p": alg.p(), "basis": alg.basis()})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_round_trip() {
        let f = Field::new(5, 10).unwrap();
        let zeta = crate::padic::teichmuller_root(&f, 4).unwrap();
        for x in [
            f.ratio(-3, 25),
            f.zero(),
            zeta,
            f.vanished(7),
            f.capped(-2, &BigInt::from(7), 3),
        ] {
            let back = scalar_from_json(&f, &scalar_to_json(&x)).unwrap();
            assert_eq!(format!("{back}"), format!("{x}"));
        }
        assert_eq!(
            scalar_to_json(&f.vanished(7)),
            json!({"v": 7, "unit": 0, "N": 0})
        );
    }

    #[test]
    fn matrix_round_trip() {
        let f = Field::new(3, 8).unwrap();
        let a = KMatrix::from_ints(&f, &[&[3, 3, 0], &[0, 3, 0], &[0, 0, 1]]);
        let back = matrix_from_json(&matrix_to_json(&a), None).unwrap();
        assert!(back.same_as(&a).unwrap());
        let text = r#"{"field": {"p": 3}, "rows": [["1/3", {"v": 1, "unit": 2, "N": 4}]]}"#;
        let m = matrix_from_json(&serde_json::from_str(text).unwrap(), None).unwrap();
        assert_eq!(m.field().precision(), 64);
        assert_eq!(m.cols(), 2);
    }

    #[test]
    fn algebra_input() {
        let v = json!({"p": 3, "basis": [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]});
        let alg = algebra_from_json(&v).unwrap();
        assert_eq!(alg.dim(), 2);
        let back = algebra_from_json(&algebra_to_json(&alg)).unwrap();
        assert!(back.same_span(&alg));
        let bad = json!({"p": 3, "basis": [[[0, 1], [0, 0]], [[0, 0], [1, 0]]]});
        assert!(matches!(
            algebra_from_json(&bad),
            Err(Error::NotAnAlgebra(_))
        ));
    }
}
