//! Unitarily invariant norms evaluated as symmetric gauge functions of the
//! singular values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{singular_values, DenseMatrix};

/// A unitarily invariant norm.
///
/// `Schatten(2.0)` is the Frobenius norm; the spectral norm (Schatten-∞) is
/// its own variant so that `p = ∞` is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    Spectral,
    /// Schatten-p with finite `p >= 1`.
    Schatten(f64),
    /// Sum of the `k` largest singular values.
    KyFan(usize),
}

impl NormSpec {
    pub const FROBENIUS: NormSpec = NormSpec::Schatten(2.0);

    pub fn schatten(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            return Ok(NormSpec::Spectral);
        }
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidNorm(format!("schatten p must be >= 1, got {p}")));
        }
        Ok(NormSpec::Schatten(p))
    }

    pub fn kyfan(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidNorm("kyfan k must be >= 1".into()));
        }
        Ok(NormSpec::KyFan(k))
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self, NormSpec::Spectral | NormSpec::KyFan(1))
    }

    pub fn is_frobenius(&self) -> bool {
        matches!(self, NormSpec::Schatten(p) if *p == 2.0)
    }

    /// Schatten-p with `p >= 2` (including the spectral norm); these are the
    /// Q-norms for which the square-root-of-sum-of-squares bounds apply.
    pub fn is_q_norm(&self) -> bool {
        match self {
            NormSpec::Spectral | NormSpec::KyFan(1) => true,
            NormSpec::Schatten(p) => *p >= 2.0,
            NormSpec::KyFan(_) => false,
        }
    }

    /// Extraction factor: 1 for the spectral and Frobenius norms, √2 for any
    /// other unitarily invariant norm.
    pub fn phi(&self) -> f64 {
        if self.is_spectral() || self.is_frobenius() {
            1.0
        } else {
            std::f64::consts::SQRT_2
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            NormSpec::Spectral => Ok(()),
            NormSpec::Schatten(p) => NormSpec::schatten(p).map(|_| ()),
            NormSpec::KyFan(k) => NormSpec::kyfan(k).map(|_| ()),
        }
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Spectral => f.write_str("spectral"),
            NormSpec::Schatten(p) if *p == 2.0 => f.write_str("frobenius"),
            NormSpec::Schatten(p) => write!(f, "schatten:{p}"),
            NormSpec::KyFan(k) => write!(f, "kyfan:{k}"),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    /// Accepts `spectral`, `frobenius`, `schatten:<p>` (`inf` allowed) and
    /// `kyfan:<k>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "spectral" => return Ok(NormSpec::Spectral),
            "frobenius" => return Ok(NormSpec::FROBENIUS),
            _ => {}
        }
        let bad = || Error::InvalidNorm(format!("cannot parse `{s}`"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "schatten" => {
                let p = match arg {
                    "inf" | "infinity" => f64::INFINITY,
                    _ => arg.parse::<f64>().map_err(|_| bad())?,
                };
                NormSpec::schatten(p)
            }
            "kyfan" => NormSpec::kyfan(arg.parse::<usize>().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Symmetric gauge function of a descending nonnegative vector.
pub fn gauge(sv: &[f64], spec: NormSpec) -> Result<f64> {
    spec.validate()?;
    if sv.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidParameter(
            "gauge needs finite nonnegative entries".into(),
        ));
    }
    if sv.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter(
            "gauge needs entries in descending order".into(),
        ));
    }
    if let NormSpec::KyFan(k) = spec {
        if k > sv.len() {
            return Err(Error::InvalidNorm(format!(
                "kyfan:{k} needs at least {k} singular values, got {}",
                sv.len()
            )));
        }
    }
    Ok(gauge_unchecked(sv, spec))
}

/// Gauge of a descending nonnegative vector, treating it as padded with
/// zeros, so Ky-Fan-k of a vector shorter than `k` is its sum.
pub(crate) fn gauge_padded(sv: &[f64], spec: NormSpec) -> f64 {
    debug_assert!(sv.windows(2).all(|w| w[0] >= w[1]));
    gauge_unchecked(sv, spec)
}

fn gauge_unchecked(sv: &[f64], spec: NormSpec) -> f64 {
    let Some(&largest) = sv.first() else {
        return 0.0;
    };
    match spec {
        NormSpec::Spectral => largest,
        NormSpec::KyFan(k) => {
            let mut acc = CompensatedSum::default();
            sv.iter().take(k).for_each(|x| acc.add(*x));
            acc.value()
        }
        NormSpec::Schatten(p) => {
            if largest == 0.0 {
                return 0.0;
            }
            // scale by the largest value so x^p cannot overflow
            let mut acc = CompensatedSum::default();
            if p == 1.0 {
                sv.iter().for_each(|x| acc.add(*x));
                return acc.value();
            }
            if p == 2.0 {
                sv.iter().for_each(|x| {
                    let r = x / largest;
                    acc.add(r * r)
                });
                return largest * acc.value().sqrt();
            }
            sv.iter().for_each(|x| acc.add((x / largest).powf(p)));
            largest * acc.value().powf(1.0 / p)
        }
    }
}

/// Unitarily invariant norm of a matrix.
pub fn matrix_norm(a: &DenseMatrix, spec: NormSpec) -> Result<f64> {
    let sv = singular_values(a)?;
    gauge(&sv, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauge_examples() {
        assert_eq!(gauge(&[3.0, 1.0], NormSpec::Spectral).unwrap(), 3.0);
        assert_relative_eq!(
            gauge(&[3.0, 1.0], NormSpec::FROBENIUS).unwrap(),
            10f64.sqrt(),
            max_relative = 1e-15
        );
        assert_eq!(gauge(&[5.0, 4.0, 3.0, 2.0, 1.0], NormSpec::KyFan(3)).unwrap(), 12.0);
    }

    #[test]
    fn gauge_errors() {
        assert!(gauge(&[1.0], NormSpec::Schatten(0.5)).is_err());
        assert!(gauge(&[1.0], NormSpec::KyFan(0)).is_err());
        assert!(gauge(&[1.0], NormSpec::KyFan(2)).is_err());
        assert!(gauge(&[1.0, 2.0], NormSpec::Spectral).is_err());
        assert!(gauge(&[-1.0], NormSpec::Spectral).is_err());
    }

    #[test]
    fn special_cases_agree() {
        let sv = [4.0, 2.5, 1.0, 0.25];
        let spectral = gauge(&sv, NormSpec::Spectral).unwrap();
        assert_eq!(gauge(&sv, NormSpec::KyFan(1)).unwrap(), spectral);
        let nuclear = gauge(&sv, NormSpec::Schatten(1.0)).unwrap();
        assert_eq!(gauge(&sv, NormSpec::KyFan(4)).unwrap(), nuclear);
        assert!(gauge(&sv, NormSpec::Schatten(1e6)).unwrap() - spectral < 1e-5);
    }

    #[test]
    fn padded_kyfan_sums_everything() {
        assert_eq!(gauge_padded(&[2.0, 1.0], NormSpec::KyFan(5)), 3.0);
        assert_eq!(gauge_padded(&[], NormSpec::FROBENIUS), 0.0);
    }

    #[test]
    fn parse_and_display() {
        for (text, spec) in [
            ("spectral", NormSpec::Spectral),
            ("frobenius", NormSpec::FROBENIUS),
            ("schatten:4", NormSpec::Schatten(4.0)),
            ("schatten:1.5", NormSpec::Schatten(1.5)),
            ("kyfan:3", NormSpec::KyFan(3)),
        ] {
            let parsed: NormSpec = text.parse().unwrap();
            assert_eq!(parsed, spec);
            assert_eq!(parsed.to_string(), text);
        }
        assert_eq!("schatten:inf".parse::<NormSpec>().unwrap(), NormSpec::Spectral);
        assert_eq!("schatten:2".parse::<NormSpec>().unwrap(), NormSpec::FROBENIUS);
        for bad in ["", "nuclear", "schatten:0.5", "schatten:x", "kyfan:0", "kyfan:-1"] {
            assert!(bad.parse::<NormSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn serde_uses_the_string_form() {
        let json = serde_json::to_string(&[NormSpec::Spectral, NormSpec::KyFan(2)]).unwrap();
        assert_eq!(json, r#"["spectral","kyfan:2"]"#);
        let back: Vec<NormSpec> = serde_json::from_str(r#"["frobenius","schatten:3"]"#).unwrap();
        assert_eq!(back, vec![NormSpec::FROBENIUS, NormSpec::Schatten(3.0)]);
        assert!(serde_json::from_str::<NormSpec>(r#""schatten:0""#).is_err());
    }

    #[test]
    fn phi_and_q_norms() {
        assert_eq!(NormSpec::Spectral.phi(), 1.0);
        assert_eq!(NormSpec::FROBENIUS.phi(), 1.0);
        assert_eq!(NormSpec::Schatten(3.0).phi(), std::f64::consts::SQRT_2);
        assert_eq!(NormSpec::KyFan(2).phi(), std::f64::consts::SQRT_2);
        assert!(NormSpec::Schatten(2.0).is_q_norm());
        assert!(NormSpec::Spectral.is_q_norm());
        assert!(!NormSpec::Schatten(1.5).is_q_norm());
        assert!(!NormSpec::KyFan(3).is_q_norm());
    }

    #[test]
    fn compensated_sum_keeps_small_terms() {
        let mut acc = CompensatedSum::default();
        acc.add(1.0);
        for _ in 0..10_000 {
            acc.add(1e-16);
        }
        assert_relative_eq!(acc.value(), 1.0 + 1e-12, max_relative = 1e-15);
    }

    #[test]
    fn matrix_norm_of_identity() {
        let i = DenseMatrix::identity(5);
        assert_relative_eq!(
            matrix_norm(&i, NormSpec::FROBENIUS).unwrap(),
            5f64.sqrt(),
            max_relative = 1e-14
        );
    }
}
