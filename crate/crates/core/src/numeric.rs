//! Extended reals, finite-dimensional vectors and tolerances.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Magnitude above which a finite value is treated as overflow.
pub const OVERFLOW_THRESHOLD: f64 = 1e300;

/// A value in `(-inf, +inf]`.
///
/// `-inf` never occurs for proper convex functions, so only the upper end is
/// represented. Ordering is total: every finite value is below `PosInf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Wraps a float. `+inf` and values at or beyond the overflow threshold
    /// become `PosInf`.
    ///
    /// Panics on NaN or on values at or below `-OVERFLOW_THRESHOLD`: neither can come
    /// out of a proper convex function evaluated correctly.
    pub fn new(value: f64) -> Self {
        assert!(!value.is_nan(), "ExtReal cannot hold NaN");
        assert!(
            value > -OVERFLOW_THRESHOLD,
            "ExtReal has no -inf (got {value})"
        );
        if value >= OVERFLOW_THRESHOLD {
            ExtReal::PosInf
        } else {
            ExtReal::Finite(value)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::PosInf => None,
        }
    }

    /// `f64` view with `PosInf` mapped to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// Indicator-style constructor: `0` when `member`, else `+inf`.
    pub fn indicator(member: bool) -> Self {
        if member {
            ExtReal::ZERO
        } else {
            ExtReal::PosInf
        }
    }
}

impl From<f64> for ExtReal {
    fn from(value: f64) -> Self {
        ExtReal::new(value)
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::new(a + b),
            _ => ExtReal::PosInf,
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: f64) -> ExtReal {
        self + ExtReal::new(rhs)
    }
}

impl Sub<f64> for ExtReal {
    type Output = ExtReal;

    fn sub(self, rhs: f64) -> ExtReal {
        match self {
            ExtReal::Finite(a) => ExtReal::new(a - rhs),
            ExtReal::PosInf => ExtReal::PosInf,
        }
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.total_cmp(b),
            (ExtReal::Finite(_), ExtReal::PosInf) => Ordering::Less,
            (ExtReal::PosInf, ExtReal::Finite(_)) => Ordering::Greater,
            (ExtReal::PosInf, ExtReal::PosInf) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => f.write_str("inf"),
        }
    }
}

/// Numerical tolerances shared by the whole crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub root_tol: f64,
    pub max_iters: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            root_tol: 1e-12,
            max_iters: 200,
        }
    }
}

impl Tolerances {
    pub fn new(abs_tol: f64, rel_tol: f64, root_tol: f64, max_iters: usize) -> Result<Self> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !(positive(abs_tol) && positive(rel_tol) && positive(root_tol)) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be positive and finite (abs {abs_tol}, rel {rel_tol}, root {root_tol})"
            )));
        }
        if max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
        }
        Ok(Tolerances {
            abs_tol,
            rel_tol,
            root_tol,
            max_iters,
        })
    }

    /// Absolute tolerance scaled by the size of the point pair, used for
    /// membership tests on `(x, x*)`.
    pub fn scaled(&self, x: &Vector, x_star: &Vector) -> f64 {
        self.abs_tol * (1.0 + x.norm() + x_star.norm())
    }
}

/// `true` iff both are `+inf`, or `|a - b| <= abs_tol + rel_tol * max(|a|, |b|)`.
pub fn approx_eq(a: ExtReal, b: ExtReal, tol: &Tolerances) -> bool {
    match (a, b) {
        (ExtReal::PosInf, ExtReal::PosInf) => true,
        (ExtReal::Finite(a), ExtReal::Finite(b)) => {
            (a - b).abs() <= tol.abs_tol + tol.rel_tol * a.abs().max(b.abs())
        }
        _ => false,
    }
}

/// A point of `R^n`, `n >= 1`, with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("vectors need at least one coordinate".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite coordinate {bad}")));
        }
        Ok(Vector(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vectors need at least one coordinate");
        Vector(vec![0.0; dim])
    }

    pub fn scalar(value: f64) -> Self {
        Vector(vec![value])
    }

    /// Builds a vector without the finiteness check. Internal arithmetic
    /// results go through here.
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Vector(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Checked inner product.
    pub fn inner(&self, other: &Vector) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.dot(other))
    }

    /// Unchecked inner product; dimensions must already agree.
    pub(crate) fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn check_dim(&self, other: &Vector) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }

    pub fn expect_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            })
        }
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + alpha * b).collect())
    }

    pub fn scale(&self, alpha: f64) -> Vector {
        Vector(self.0.iter().map(|a| alpha * a).collect())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Vector {
        Vector(self.0.iter().map(|&a| f(a)).collect())
    }

    /// Euclidean distance.
    pub fn dist(&self, other: &Vector) -> f64 {
        (self - other).norm()
    }

    /// Coordinates joined by `;`, shortest round-trip form.
    pub fn to_joined(&self) -> String {
        self.0
            .iter()
            .map(|c| format!("{c:?}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<&Vector> for f64 {
    type Output = Vector;

    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scale(self)
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Checks a step parameter.
pub fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveGamma(gamma))
    }
}
