//! Closed-form stability bounds for l1 recovery and the constants behind them.
//!
//! Every function rejects inputs outside its formula's domain instead of
//! returning a vacuous `+inf`.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::report::number;
use crate::scalar::Scalar;

/// `1 - sqrt(2) delta` must exceed this for the RIP constants to be evaluated;
/// closer to the boundary the constants overflow any meaningful scale.
pub const DELTA_DOMAIN_MARGIN: f64 = 1e-6;

pub const CAI_ZHANG_L2: &str = "cai_zhang_l2";
pub const NSP_L1: &str = "nsp_l1";
pub const RIPNSP_L2: &str = "ripnsp_l2";

#[derive(Error, Debug, Clone, PartialEq)]
pub enum BoundsError {
    #[error("{parameter} = {value} is outside the domain {domain}")]
    Domain { parameter: &'static str, value: f64, domain: &'static str },
    #[error("unknown bound name {0:?}")]
    UnknownBound(String),
    #[error("identity check failed: {0}")]
    Identity(String),
}

fn domain<T: Scalar>(ok: bool, parameter: &'static str, value: T, domain: &'static str) -> Result<(), BoundsError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(BoundsError::Domain { parameter, value: value.as_f64(), domain })
    }
}

fn check_delta<T: Scalar>(delta: T) -> Result<(), BoundsError> {
    let gap = T::one() - T::of(2.0).sqrt() * delta;
    domain(delta >= T::zero() && gap > T::of(DELTA_DOMAIN_MARGIN), "delta_2s", delta, "[0, 1/sqrt(2))")
}

fn check_gamma_open<T: Scalar>(gamma: T) -> Result<(), BoundsError> {
    domain(gamma > T::zero() && gamma < T::one(), "gamma", gamma, "(0, 1)")
}

fn check_nonneg<T: Scalar>(name: &'static str, x: T) -> Result<(), BoundsError> {
    domain(x >= T::zero(), name, x, "[0, inf)")
}

fn check_positive<T: Scalar>(name: &'static str, x: T) -> Result<(), BoundsError> {
    domain(x > T::zero(), name, x, "(0, inf)")
}

fn check_count(name: &'static str, n: usize) -> Result<(), BoundsError> {
    if n >= 1 {
        Ok(())
    } else {
        Err(BoundsError::Domain { parameter: name, value: 0.0, domain: "[1, inf)" })
    }
}

/// A bound value with the inputs and constants it was computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport<T> {
    pub name: &'static str,
    pub inputs: BTreeMap<&'static str, T>,
    pub constants: BTreeMap<&'static str, T>,
    pub value: T,
}

impl<T: Scalar> BoundReport<T> {
    /// Re-evaluates the named formula from `inputs` alone.
    pub fn recompute(&self) -> Result<T, BoundsError> {
        let get = |k: &'static str| {
            self.inputs.get(k).copied().ok_or_else(|| BoundsError::UnknownBound(format!("{} lacks input {k}", self.name)))
        };
        let count = |k: &'static str| get(k).map(|x| x.as_f64().round() as usize);
        let report = match self.name {
            CAI_ZHANG_L2 => rip_l2_bound(get("delta_2s")?, get("eps")?, get("sigma_s")?, count("s")?)?,
            NSP_L1 => nsp_l1_bound(get("gamma")?, get("lambda_phi")?, count("N")?, get("eps")?, get("sigma_s")?)?,
            RIPNSP_L2 => ripnsp_l2_bound(get("delta_2s")?, get("lambda_phi")?, count("N")?, count("s")?, get("eps")?, get("sigma_s")?)?,
            other => return Err(BoundsError::UnknownBound(other.to_string())),
        };
        Ok(report.value)
    }

    pub fn to_json(&self) -> Value {
        let map = |m: &BTreeMap<&'static str, T>| Value::Object(m.iter().map(|(k, &v)| (k.to_string(), number(v))).collect());
        json!({
            "name": self.name,
            "inputs": map(&self.inputs),
            "constants": map(&self.constants),
            "value": number(self.value),
        })
    }
}

/// Cai-Zhang constants `(D1, D2)` of the sharp RIP recovery bound.
pub fn cai_zhang_constants<T: Scalar>(delta_2s: T) -> Result<(T, T), BoundsError> {
    check_delta(delta_2s)?;
    let two = T::of(2.0);
    let r2 = two.sqrt();
    let d = delta_2s;
    let d1 = two * (two * (T::one() + d)).sqrt() / (T::one() - r2 * d);
    let h = T::one() / r2 - d;
    let d2 = two * ((d + (d * h).sqrt()) / (r2 * h) + T::one());
    Ok((d1, d2))
}

/// `D1 eps + D2 sigma_s / sqrt(s)`.
pub fn rip_l2_bound<T: Scalar>(delta_2s: T, eps: T, sigma_s: T, s: usize) -> Result<BoundReport<T>, BoundsError> {
    check_nonneg("eps", eps)?;
    check_nonneg("sigma_s", sigma_s)?;
    check_count("s", s)?;
    let (d1, d2) = cai_zhang_constants(delta_2s)?;
    let value = d1 * eps + d2 * sigma_s / T::of_usize(s).sqrt();
    Ok(BoundReport {
        name: CAI_ZHANG_L2,
        inputs: BTreeMap::from([("delta_2s", delta_2s), ("eps", eps), ("sigma_s", sigma_s), ("s", T::of_usize(s))]),
        constants: BTreeMap::from([("D1", d1), ("D2", d2)]),
        value,
    })
}

/// l1 stability under `(s, gamma)`-NSP:
/// `4 sqrt(2) sqrt(N) / ((1 - gamma) lambda) eps + 4 (1 + gamma) / (sqrt(2) (1 - gamma)) sigma_s`.
pub fn nsp_l1_bound<T: Scalar>(gamma: T, lambda_phi: T, n: usize, eps: T, sigma_s: T) -> Result<BoundReport<T>, BoundsError> {
    domain(gamma >= T::zero() && gamma < T::one(), "gamma", gamma, "[0, 1)")?;
    check_positive("lambda_phi", lambda_phi)?;
    check_count("N", n)?;
    check_nonneg("eps", eps)?;
    check_nonneg("sigma_s", sigma_s)?;
    let r2 = T::of(2.0).sqrt();
    let four = T::of(4.0);
    let c_eps = four * r2 * T::of_usize(n).sqrt() / ((T::one() - gamma) * lambda_phi);
    let c_sigma = four * (T::one() + gamma) / (r2 * (T::one() - gamma));
    Ok(BoundReport {
        name: NSP_L1,
        inputs: BTreeMap::from([("gamma", gamma), ("lambda_phi", lambda_phi), ("N", T::of_usize(n)), ("eps", eps), ("sigma_s", sigma_s)]),
        constants: BTreeMap::from([("C_eps", c_eps), ("C_sigma", c_sigma)]),
        value: c_eps * eps + c_sigma * sigma_s,
    })
}

/// l2 stability for a matrix sharing its kernel with an RIP matrix:
/// `D1 sqrt(1 + delta) / lambda sqrt(N / s) eps + D2 sigma_s / sqrt(s)`.
pub fn ripnsp_l2_bound<T: Scalar>(
    delta_2s: T,
    lambda_phi: T,
    n: usize,
    s: usize,
    eps: T,
    sigma_s: T,
) -> Result<BoundReport<T>, BoundsError> {
    check_positive("lambda_phi", lambda_phi)?;
    check_count("N", n)?;
    check_count("s", s)?;
    check_nonneg("eps", eps)?;
    check_nonneg("sigma_s", sigma_s)?;
    let (d1, d2) = cai_zhang_constants(delta_2s)?;
    let ratio = (T::of_usize(n) / T::of_usize(s)).sqrt();
    let value = d1 * (T::one() + delta_2s).sqrt() / lambda_phi * ratio * eps + d2 * sigma_s / T::of_usize(s).sqrt();
    Ok(BoundReport {
        name: RIPNSP_L2,
        inputs: BTreeMap::from([
            ("delta_2s", delta_2s),
            ("lambda_phi", lambda_phi),
            ("N", T::of_usize(n)),
            ("s", T::of_usize(s)),
            ("eps", eps),
            ("sigma_s", sigma_s),
        ]),
        constants: BTreeMap::from([("D1", d1), ("D2", d2)]),
        value,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapThreshold<T> {
    /// `C = 8 (1 + delta)^2 / (1 - sqrt(2) delta)^2`.
    pub c: T,
    /// `80 C / gamma^2`; sparsity beyond this forces the contradiction.
    pub s_min: T,
}

impl<T: Scalar> GapThreshold<T> {
    pub fn to_json(&self, delta_2s: T, gamma: T) -> Value {
        json!({
            "inputs": { "delta_2s": number(delta_2s), "gamma": number(gamma) },
            "C": number(self.c),
            "s_min": number(self.s_min),
        })
    }
}

pub fn gap_threshold<T: Scalar>(delta_2s: T, gamma: T) -> Result<GapThreshold<T>, BoundsError> {
    check_delta(delta_2s)?;
    check_gamma_open(gamma)?;
    let one = T::one();
    let q = (one + delta_2s) / (one - T::of(2.0).sqrt() * delta_2s);
    let c = T::of(8.0) * q * q;
    let s_min = T::of(80.0) * c / (gamma * gamma);
    let direct = T::of(640.0) * (one + delta_2s).powi(2) / ((one - T::of(2.0).sqrt() * delta_2s).powi(2) * gamma * gamma);
    if (s_min - direct).abs() > T::tol(1e-12) * s_min.max(one) {
        return Err(BoundsError::Identity(format!("80 C / gamma^2 = {s_min} but the direct form gives {direct}")));
    }
    Ok(GapThreshold { c, s_min })
}

/// `C(gamma) = 2 ln(10) C1 C2 ((sqrt(2) + gamma) / gamma)^2`, natural logarithm.
pub fn fourier_constant<T: Scalar>(gamma: T, c1: T, c2: T) -> Result<T, BoundsError> {
    check_gamma_open(gamma)?;
    check_positive("C1", c1)?;
    check_positive("C2", c2)?;
    let q = (T::of(2.0).sqrt() + gamma) / gamma;
    Ok(T::of(2.0) * T::of(10.0).ln() * c1 * c2 * q * q)
}
