//! Numeric modes.
//!
//! Everything in the crate is generic over [`Scalar`], implemented by
//! [`Exact`] (exact mode) and `f64` (float mode). Mixing modes inside one
//! computation is impossible by construction; at the file boundary a literal
//! written for the wrong mode is rejected with [`Error::ModeMismatch`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::error::{Error, Result};
use crate::exact::Exact;

/// Default comparison tolerance for float mode.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

static FLOAT_TOLERANCE: AtomicU64 = AtomicU64::new(DEFAULT_TOLERANCE.to_bits());

/// The float-mode comparison tolerance currently in effect.
pub fn float_tolerance() -> f64 {
    f64::from_bits(FLOAT_TOLERANCE.load(AtomicOrdering::Relaxed))
}

/// Override the float-mode comparison tolerance for the rest of the process.
pub fn set_float_tolerance(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "float tolerance must be finite and nonnegative, got {tol}"
        )));
    }
    FLOAT_TOLERANCE.store(tol.to_bits(), AtomicOrdering::Relaxed);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    #[serde(alias = "exact")]
    Rational,
    Float,
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NumericMode::Rational => "rational",
            NumericMode::Float => "float",
        })
    }
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + serde::Serialize
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    const MODE: NumericMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;

    /// Total order on values. Exact in rational mode; `f64::total_cmp` in float mode.
    fn cmp_value(&self, other: &Self) -> Ordering;

    /// Equality up to the float tolerance (exact in rational mode).
    fn approx_eq(&self, other: &Self) -> bool;

    fn to_f64(&self) -> f64;

    /// Parse a textual literal for this mode.
    fn parse_literal(s: &str) -> Result<Self>;

    /// Convert an exact value (identity in rational mode, rounding in float mode).
    fn from_exact(x: &Exact) -> Self;

    fn is_zero(&self) -> bool {
        self.cmp_value(&Self::zero()) == Ordering::Equal
    }

    fn is_negative(&self) -> bool {
        self.cmp_value(&Self::zero()) == Ordering::Less
    }

    fn lt_value(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Less
    }

    fn le_value(&self, other: &Self) -> bool {
        self.cmp_value(other) != Ordering::Greater
    }

    /// `self <= other`, allowing the float tolerance.
    fn approx_le(&self, other: &Self) -> bool {
        self.le_value(other) || self.approx_eq(other)
    }

    fn max_value(self, other: Self) -> Self {
        if other.cmp_value(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    fn min_value(self, other: Self) -> Self {
        if other.cmp_value(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

impl Scalar for Exact {
    const MODE: NumericMode = NumericMode::Rational;

    fn from_exact(x: &Exact) -> Self {
        x.clone()
    }

    fn zero() -> Self {
        Exact::zero()
    }

    fn one() -> Self {
        Exact::one()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Exact::ratio(num, den)
    }

    fn sqrt(&self) -> Self {
        Exact::sqrt(self)
    }

    fn abs(&self) -> Self {
        Exact::abs(self)
    }

    fn cmp_value(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn to_f64(&self) -> f64 {
        Exact::to_f64(self)
    }

    fn parse_literal(s: &str) -> Result<Self> {
        Exact::parse(s).ok_or_else(|| {
            Error::InvalidArgument(format!("`{s}` is not an exact rational literal (expected p/q or a decimal)"))
        })
    }

    fn is_zero(&self) -> bool {
        Exact::is_zero(self)
    }
}

impl Scalar for f64 {
    const MODE: NumericMode = NumericMode::Float;

    fn from_exact(x: &Exact) -> Self {
        x.to_f64()
    }

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn cmp_value(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= float_tolerance() * scale
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_literal(s: &str) -> Result<Self> {
        if s.contains('/') {
            return Err(Error::ModeMismatch(format!(
                "rational literal `{s}` in float mode"
            )));
        }
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::InvalidArgument(format!("`{s}`: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_literals_reject_fractions() {
        assert_eq!(f64::parse_literal("0.25").unwrap(), 0.25);
        assert!(matches!(f64::parse_literal("1/4"), Err(Error::ModeMismatch(_))));
    }

    #[test]
    fn approx_comparisons() {
        assert!(1.0f64.approx_eq(&(1.0 + 1e-13)));
        assert!(!1.0f64.approx_eq(&(1.0 + 1e-9)));
        assert!((1.0 + 1e-13).approx_le(&1.0));
        let a = Exact::ratio(1, 3);
        assert!(a.approx_le(&Exact::ratio(1, 3)));
        assert!(!Exact::ratio(1, 3).approx_le(&Exact::ratio(1, 4)));
    }

    #[test]
    fn min_max_keep_first_on_ties() {
        assert_eq!(2.0f64.max_value(3.0), 3.0);
        assert_eq!(Exact::ratio(1, 2).min_value(Exact::ratio(1, 3)), Exact::ratio(1, 3));
    }
}
