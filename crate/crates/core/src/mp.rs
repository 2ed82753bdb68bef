//! Minimal complex arithmetic over MPFR floats.

use std::fmt;

use rug::float::Round;
use rug::ops::{AddAssignRound, AssignRound, MulAssignRound};
use rug::Float;

/// Precision used for error bounds; always rounded upward.
pub const BOUND_PRECISION: u32 = 64;

#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e} + {:e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl BigComplex {
    pub fn zero(prec: u32) -> Self {
        Self { re: Float::new(prec), im: Float::new(prec) }
    }

    /// Exact conversion of a pair of doubles.
    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        let prec = prec.max(53);
        Self { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn real(re: &Float, prec: u32) -> Self {
        Self { re: Float::with_val(prec, re), im: Float::new(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn set_prec(&mut self, prec: u32) {
        self.re.set_prec(prec);
        self.im.set_prec(prec);
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re + &other.re),
            im: Float::with_val(p, &self.im + &other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re - &other.re),
            im: Float::with_val(p, &self.im - &other.im),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prec();
        let ac = Float::with_val(p, &self.re * &other.re);
        let bd = Float::with_val(p, &self.im * &other.im);
        let ad = Float::with_val(p, &self.re * &other.im);
        let bc = Float::with_val(p, &self.im * &other.re);
        Self { re: ac - bd, im: ad + bc }
    }

    pub fn scale(&self, factor: &Float) -> Self {
        let p = self.prec();
        Self {
            re: Float::with_val(p, &self.re * factor),
            im: Float::with_val(p, &self.im * factor),
        }
    }

    /// `self / other`; `None` when `other` is zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let p = self.prec();
        let den = other.norm_sqr();
        if den.is_zero() {
            return None;
        }
        let ac = Float::with_val(p, &self.re * &other.re);
        let bd = Float::with_val(p, &self.im * &other.im);
        let bc = Float::with_val(p, &self.im * &other.re);
        let ad = Float::with_val(p, &self.re * &other.im);
        Some(Self { re: (ac + bd) / &den, im: (bc - ad) / &den })
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> f64 {
        let p = self.prec();
        Float::with_val(p, self.im.atan2_ref(&self.re)).to_f64()
    }
}

/// `|z|` rounded up to [`BOUND_PRECISION`] bits.
pub fn complex_abs_up(z: &BigComplex) -> Float {
    Float::with_val_round(BOUND_PRECISION, z.re.hypot_ref(&z.im), Round::Up).0
}

/// `|x|` rounded up to [`BOUND_PRECISION`] bits.
pub fn abs_up(x: &Float) -> Float {
    let mut out = Float::new(BOUND_PRECISION);
    out.assign_round(&*x.as_abs(), Round::Up);
    out
}

/// `a + b` rounded up, in bound precision.
pub fn add_up(acc: &mut Float, x: &Float) {
    acc.add_assign_round(x, Round::Up);
}

/// `acc * factor`, rounded up.
pub fn mul_up(acc: &mut Float, factor: f64) {
    acc.mul_assign_round(factor, Round::Up);
}
