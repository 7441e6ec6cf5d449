//! Scalar log-domain arithmetic.
//!
//! Everything downstream (ball volumes, the Δ/λ parameters) lives on log
//! scale because the underlying magnitudes are doubly exponential in the
//! dimension and radius. This module provides the stable building blocks:
//! `ln sinh`, `ln cosh`, and log-domain addition/subtraction, plus the
//! [`LogReal`] wrapper for nonnegative quantities stored as natural logs.

use std::f64::consts::LN_2;
use std::ops::{Add, Div, Mul};

/// ln(sinh x) for x >= 0, accurate down to denormals and up to any finite x.
///
/// Uses sinh x = e^x (1 - e^{-2x}) / 2; the `exp_m1` form keeps full relative
/// accuracy near zero where sinh x ~ x.
pub fn lsinh(x: f64) -> f64 {
    debug_assert!(x >= 0.0, "lsinh needs x >= 0, got {x}");
    if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        x + (-(-2.0 * x).exp_m1()).ln() - LN_2
    }
}

/// ln(cosh x), stable for all x (no overflow).
pub fn lcosh(x: f64) -> f64 {
    let x = x.abs();
    x + (-2.0 * x).exp().ln_1p() - LN_2
}

/// ln(e^a + e^b) without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// ln(e^a - e^b) for a >= b.
pub fn log_sub_exp(a: f64, b: f64) -> f64 {
    assert!(a >= b, "log_sub_exp needs a >= b, got {a} < {b}");
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a == b {
        return f64::NEG_INFINITY;
    }
    a + (-(b - a).exp_m1()).ln()
}

/// A nonnegative real stored as its natural logarithm.
///
/// `NEG_INFINITY` is the exact-zero flag. Multiplication and division add
/// and subtract logs; addition goes through [`log_add_exp`], so the type is
/// closed under arithmetic without overflow for |ln| well beyond 1e15.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogReal {
    ln: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        ln: f64::NEG_INFINITY,
    };
    pub const ONE: LogReal = LogReal { ln: 0.0 };

    /// Wraps a value already on log scale.
    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(!ln.is_nan());
        LogReal { ln }
    }

    /// Converts a nonnegative linear value. Panics on negatives or NaN.
    pub fn from_value(v: f64) -> Self {
        assert!(v >= 0.0 && !v.is_nan(), "LogReal needs a value >= 0, got {v}");
        LogReal { ln: v.ln() }
    }

    /// The stored natural logarithm (`-inf` for exact zero).
    pub fn ln(self) -> f64 {
        self.ln
    }

    /// Back to linear scale; may overflow to `+inf` for large magnitudes.
    pub fn value(self) -> f64 {
        self.ln.exp()
    }

    pub fn is_zero(self) -> bool {
        self.ln == f64::NEG_INFINITY
    }
}

impl Mul for LogReal {
    type Output = LogReal;
    fn mul(self, rhs: LogReal) -> LogReal {
        if self.is_zero() || rhs.is_zero() {
            return LogReal::ZERO;
        }
        LogReal::from_ln(self.ln + rhs.ln)
    }
}

impl Div for LogReal {
    type Output = LogReal;
    fn div(self, rhs: LogReal) -> LogReal {
        assert!(!rhs.is_zero(), "division by exact zero LogReal");
        if self.is_zero() {
            return LogReal::ZERO;
        }
        LogReal::from_ln(self.ln - rhs.ln)
    }
}

impl Add for LogReal {
    type Output = LogReal;
    fn add(self, rhs: LogReal) -> LogReal {
        LogReal::from_ln(log_add_exp(self.ln, rhs.ln))
    }
}
