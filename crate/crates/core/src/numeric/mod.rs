//! Scalar substrate: binary64 reals, exact rationals, complex pairs and the
//! double-double [`Ext`] type.

mod ext;
mod rational;

pub use ext::{Ext, EXT_EPS, F64_EPS};
pub use num_complex::Complex64 as Complex;
pub use num_rational::BigRational;
pub use rational::{
    ext_from_rational, ratio_over_factors, rational_binomial, rational_sqrt, rational_to_sci_string,
};

use crate::error::{Error, Result};

/// Arithmetic mode for orbit and candidate-sequence computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Precision {
    /// Plain binary64.
    Double,
    /// Double-double (about 32 significant digits).
    #[default]
    Extended,
}

impl Precision {
    /// Unit roundoff of the mode.
    pub fn eps(self) -> f64 {
        match self {
            Precision::Double => F64_EPS,
            Precision::Extended => EXT_EPS,
        }
    }

    /// Unit in the last place of `x` in this mode.
    pub fn ulp(self, x: f64) -> f64 {
        let x = x.abs().max(f64::MIN_POSITIVE);
        match self {
            Precision::Double => x.next_up() - x,
            Precision::Extended => x * 2.0 * EXT_EPS,
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(Error::Parse(format!("unknown precision `{other}`"))),
        }
    }
}

/// Maps a non-finite binary64 result to a typed error.
pub fn finite(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub fn finite_ext(x: Ext, what: &str) -> Result<Ext> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// Distance in units of the last place between two binary64 values.
pub fn ulps_between(a: f64, b: f64) -> u64 {
    fn key(x: f64) -> i64 {
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    }
    key(a).abs_diff(key(b))
}
