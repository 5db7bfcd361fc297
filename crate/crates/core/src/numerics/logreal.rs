//! Signed reals stored as `(sign, ln|x|)` so that long factorial ratios can be
//! formed without overflow.

use std::cmp::Ordering;
use std::ops::{Div, Mul, Neg};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogReal {
    sign: i8,
    ln_abs: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogReal = LogReal {
        sign: 1,
        ln_abs: 0.0,
    };

    /// Builds from an explicit sign and log-magnitude. `sign == 0` is zero.
    pub fn new(sign: i8, ln_abs: f64) -> Self {
        match sign.cmp(&0) {
            Ordering::Equal => Self::ZERO,
            Ordering::Greater => LogReal { sign: 1, ln_abs },
            Ordering::Less => LogReal { sign: -1, ln_abs },
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude. Meaningless when the value is zero.
    pub fn ln_abs(&self) -> f64 {
        self.ln_abs
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_abs.exp()
        }
    }

    pub fn powi(self, n: i32) -> Self {
        if self.sign == 0 {
            return if n == 0 { Self::ONE } else { Self::ZERO };
        }
        let sign = if self.sign < 0 && n % 2 != 0 { -1 } else { 1 };
        LogReal {
            sign,
            ln_abs: self.ln_abs * f64::from(n),
        }
    }

    pub fn recip(self) -> Self {
        LogReal {
            sign: self.sign,
            ln_abs: -self.ln_abs,
        }
    }

    /// Log-sum-exp addition. Exact cancellation yields zero.
    pub fn add(self, other: Self) -> Self {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (big, small) = if self.ln_abs >= other.ln_abs {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = (small.ln_abs - big.ln_abs).exp();
        if big.sign == small.sign {
            LogReal {
                sign: big.sign,
                ln_abs: big.ln_abs + ratio.ln_1p(),
            }
        } else if ratio == 1.0 {
            Self::ZERO
        } else {
            LogReal {
                sign: big.sign,
                ln_abs: big.ln_abs + (-ratio).ln_1p(),
            }
        }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(-other)
    }
}

impl Neg for LogReal {
    type Output = LogReal;
    fn neg(self) -> LogReal {
        LogReal {
            sign: -self.sign,
            ln_abs: self.ln_abs,
        }
    }
}

impl Mul for LogReal {
    type Output = LogReal;
    fn mul(self, rhs: LogReal) -> LogReal {
        if self.sign == 0 || rhs.sign == 0 {
            LogReal::ZERO
        } else {
            LogReal {
                sign: self.sign * rhs.sign,
                ln_abs: self.ln_abs + rhs.ln_abs,
            }
        }
    }
}

impl Div for LogReal {
    type Output = LogReal;
    fn div(self, rhs: LogReal) -> LogReal {
        assert!(rhs.sign != 0, "LogReal division by zero");
        self * rhs.recip()
    }
}

impl From<f64> for LogReal {
    fn from(x: f64) -> Self {
        LogReal::from_f64(x)
    }
}
