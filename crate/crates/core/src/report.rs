//! JSON encoding shared by every report the toolkit emits.
//!
//! Object keys come out sorted, so equal reports serialize to equal bytes.

use serde_json::{json, Value};

use crate::certify::{NspCertificate, RipCertificate};
use crate::scalar::Scalar;

pub const SCHEMA_VERSION: &str = "1";

pub fn report_schema_version() -> &'static str {
    SCHEMA_VERSION
}

/// Finite values become JSON numbers; `+inf` becomes `"inf"`, `-inf` `"-inf"`, NaN `"nan"`.
pub fn number<T: Scalar>(x: T) -> Value {
    let v = x.as_f64();
    if v.is_nan() {
        Value::from("nan")
    } else if v == f64::INFINITY {
        Value::from("inf")
    } else if v == f64::NEG_INFINITY {
        Value::from("-inf")
    } else {
        json!(v)
    }
}

pub fn numbers<T: Scalar>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(|&x| number(x)).collect())
}

/// Inverse of [`number`].
pub fn parse_number(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            "nan" => Some(f64::NAN),
            _ => None,
        },
        _ => None,
    }
}

pub fn nsp_certificate_json<T: Scalar>(c: &NspCertificate<T>) -> Value {
    json!({
        "kind": "nsp",
        "order": c.order_s,
        "constant": number(c.gamma),
        "worst_support": c.worst_support,
        "witness": numbers(&c.witness),
        "tolerance": number(c.lp_tol),
    })
}

pub fn rip_certificate_json<T: Scalar>(c: &RipCertificate<T>) -> Value {
    json!({
        "kind": "rip",
        "order": c.order_k,
        "constant": number(c.delta),
        "worst_support": c.worst_support,
        "witness": numbers(&c.witness),
        "tolerance": number(T::tol(1e-10)),
        "extremal_eigenvalue": number(c.extremal_eigenvalue),
        "side": c.side.as_str(),
        "lower_bound_only": c.lower_bound_only,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_a_string() {
        assert_eq!(number(f64::INFINITY), Value::from("inf"));
        assert_eq!(number(1.5f64), json!(1.5));
        assert_eq!(parse_number(&number(f64::INFINITY)), Some(f64::INFINITY));
        assert_eq!(parse_number(&json!(2.0)), Some(2.0));
        assert_eq!(parse_number(&json!("x")), None);
    }

    #[test]
    fn nsp_json_shape() {
        let c = NspCertificate { order_s: 1, gamma: f64::INFINITY, worst_support: vec![0], witness: vec![1.0, 0.0], lp_tol: 1e-9 };
        let v = nsp_certificate_json(&c);
        assert_eq!(v["kind"], "nsp");
        assert_eq!(v["constant"], "inf");
        assert_eq!(v["worst_support"], json!([0]));
    }

    #[test]
    fn schema_version_is_fixed() {
        assert_eq!(report_schema_version(), "1");
    }
}
