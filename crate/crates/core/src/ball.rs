//! Midpoint-radius real balls.
//!
//! A [`RealBall`] represents the closed interval `[mid - rad, mid + rad]`.
//! The midpoint is an MPFR float at the working precision; the radius is a
//! short float that is only ever rounded upward. Every operation returns a
//! ball containing the exact image of its operand sets.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, OrdFloat, Round, Special};
use rug::ops::AssignRound;
use rug::{Float, Integer, Rational};

/// Precision of radius floats.
pub const RAD_PREC: u32 = 32;

#[derive(Clone)]
pub struct RealBall {
    mid: Float,
    rad: Float,
}

fn up<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    sanitize(Float::with_val_round(RAD_PREC, val, Round::Up).0)
}

fn down<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    let f = Float::with_val_round(RAD_PREC, val, Round::Down).0;
    if f.is_nan() {
        zero_rad()
    } else {
        f
    }
}

fn sanitize(r: Float) -> Float {
    if r.is_nan() {
        Float::with_val(RAD_PREC, Special::Infinity)
    } else {
        r
    }
}

fn zero_rad() -> Float {
    Float::with_val(RAD_PREC, 0)
}

/// One unit in the last place of `x` at its own precision, or zero for zero.
fn ulp(x: &Float) -> Float {
    match x.get_exp() {
        Some(e) => Float::with_val(RAD_PREC, 1) << (e - x.prec() as i32),
        None => zero_rad(),
    }
}

fn rounding_error(x: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal {
        zero_rad()
    } else {
        ulp(x)
    }
}

/// Upper bound on `|x|` as a radius float.
fn abs_up(x: &Float) -> Float {
    up(x.abs_ref())
}

fn add_up(a: &Float, b: &Float) -> Float {
    up(a + b)
}

/// Product of two nonnegative radius-like floats, with `0 * inf = 0`.
fn mul_up(a: &Float, b: &Float) -> Float {
    if a.is_zero() || b.is_zero() {
        zero_rad()
    } else {
        up(a * b)
    }
}

impl RealBall {
    /// Builds a ball from a midpoint and a radius; the radius is rounded up.
    pub fn new(mid: Float, rad: Float) -> Self {
        if !mid.is_finite() {
            return Self::full(mid.prec());
        }
        let rad = if rad.is_sign_negative() && !rad.is_zero() {
            panic!("negative radius");
        } else {
            up(&rad)
        };
        RealBall { mid, rad }
    }

    pub fn exact(mid: Float) -> Self {
        Self::new(mid, zero_rad())
    }

    /// Rounds `val` to `prec` bits; the radius covers the rounding error.
    pub fn with_val<T>(prec: u32, val: T) -> Self
    where
        Float: AssignRound<T, Round = Round, Ordering = Ordering>,
    {
        let (mid, ord) = Float::with_val_round(prec, val, Round::Nearest);
        let rad = rounding_error(&mid, ord);
        Self::new(mid, rad)
    }

    pub fn from_i64(prec: u32, v: i64) -> Self {
        Self::with_val(prec, v)
    }

    pub fn from_f64(prec: u32, v: f64) -> Self {
        Self::with_val(prec, v)
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Self::with_val(prec, q)
    }

    pub fn from_ratio(prec: u32, num: i64, den: i64) -> Self {
        Self::from_rational(prec, &Rational::from((num, den)))
    }

    pub fn from_integer(prec: u32, n: &Integer) -> Self {
        Self::with_val(prec, n)
    }

    /// Smallest ball (at `prec`) containing `[lo, hi]`.
    pub fn from_interval(prec: u32, lo: &Float, hi: &Float) -> Self {
        if lo.is_nan() || hi.is_nan() || lo.is_infinite() || hi.is_infinite() {
            return Self::full(prec);
        }
        let mid = Float::with_val(prec, lo + hi) / 2u32;
        let r1 = up(hi - &mid);
        let r2 = up(&mid - lo);
        let rad = if r1 > r2 { r1 } else { r2 };
        RealBall { mid, rad }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Float::with_val(prec, 0))
    }

    pub fn one(prec: u32) -> Self {
        Self::exact(Float::with_val(prec, 1))
    }

    /// The whole real line.
    pub fn full(prec: u32) -> Self {
        RealBall {
            mid: Float::with_val(prec, 0),
            rad: Float::with_val(RAD_PREC, Special::Infinity),
        }
    }

    pub fn pi(prec: u32) -> Self {
        Self::with_val(prec, Constant::Pi)
    }

    pub fn ln2(prec: u32) -> Self {
        Self::with_val(prec, Constant::Log2)
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    /// Same ball with the midpoint carried at `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        if prec >= self.prec() {
            let mut mid = self.mid.clone();
            mid.set_prec(prec);
            return RealBall {
                mid,
                rad: self.rad.clone(),
            };
        }
        let (mid, ord) = Float::with_val_round(prec, &self.mid, Round::Nearest);
        let rad = add_up(&self.rad, &rounding_error(&mid, ord));
        RealBall { mid, rad }
    }

    pub fn is_finite(&self) -> bool {
        self.rad.is_finite() && self.mid.is_finite()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Lower endpoint, rounded down.
    pub fn lo(&self) -> Float {
        Float::with_val_round(self.prec().max(RAD_PREC), &self.mid - &self.rad, Round::Down).0
    }

    /// Upper endpoint, rounded up.
    pub fn hi(&self) -> Float {
        Float::with_val_round(self.prec().max(RAD_PREC), &self.mid + &self.rad, Round::Up).0
    }

    /// Upper bound on `|x|` over the ball.
    pub fn abs_hi(&self) -> Float {
        let p = self.prec().max(RAD_PREC);
        let m = Float::with_val_round(p, self.mid.abs_ref(), Round::Up).0;
        Float::with_val_round(p, &m + &self.rad, Round::Up).0
    }

    /// Lower bound on `|x|` over the ball (zero if the ball contains zero).
    pub fn abs_lo(&self) -> Float {
        let p = self.prec().max(RAD_PREC);
        let m = Float::with_val_round(p, self.mid.abs_ref(), Round::Down).0;
        let d = Float::with_val_round(p, &m - &self.rad, Round::Down).0;
        if d.is_sign_negative() || d.is_nan() {
            zero_rad()
        } else {
            d
        }
    }

    pub fn contains_zero(&self) -> bool {
        !(self.lo() > 0 || self.hi() < 0)
    }

    /// Every point of the ball is `> 0`.
    pub fn is_positive(&self) -> bool {
        self.lo() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi() < 0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.lo() >= 0
    }

    /// Decides `|x - mid| <= rad` exactly.
    pub fn contains_rational(&self, x: &Rational) -> bool {
        if !self.rad.is_finite() {
            return true;
        }
        let mid = self.mid.to_rational().expect("finite midpoint");
        let rad = self.rad.to_rational().expect("finite radius");
        let diff = Rational::from(x - &mid).abs();
        diff <= rad
    }

    pub fn contains_float(&self, x: &Float) -> bool {
        match x.to_rational() {
            Some(q) => self.contains_rational(&q),
            None => false,
        }
    }

    /// `other` is a subset of `self`.
    pub fn contains(&self, other: &RealBall) -> bool {
        if !self.rad.is_finite() {
            return true;
        }
        if !other.rad.is_finite() {
            return false;
        }
        let (sm, sr) = (self.mid.to_rational().unwrap(), self.rad.to_rational().unwrap());
        let (om, or) = (other.mid.to_rational().unwrap(), other.rad.to_rational().unwrap());
        let diff = Rational::from(&sm - &om).abs();
        diff + or <= sr
    }

    pub fn overlaps(&self, other: &RealBall) -> bool {
        !(self.hi() < other.lo() || other.hi() < self.lo())
    }

    /// `self < other` holds for every pair of points.
    pub fn certainly_lt(&self, other: &RealBall) -> bool {
        self.hi() < other.lo()
    }

    pub fn certainly_le(&self, other: &RealBall) -> bool {
        self.hi() <= other.lo()
    }

    /// Widens the radius by `err`.
    pub fn add_error(&self, err: &Float) -> Self {
        RealBall {
            mid: self.mid.clone(),
            rad: up(&self.rad + err),
        }
    }

    /// Smallest ball containing both operands.
    pub fn union(&self, other: &RealBall) -> Self {
        let prec = self.prec().max(other.prec());
        let lo = min_f(self.lo(), other.lo());
        let hi = max_f(self.hi(), other.hi());
        Self::from_interval(prec, &lo, &hi)
    }

    /// Certified `floor`, if both endpoints agree.
    pub fn certified_floor(&self) -> Option<Integer> {
        if !self.is_finite() {
            return None;
        }
        let a = self.lo().to_integer_round(Round::Down)?.0;
        let b = self.hi().to_integer_round(Round::Down)?.0;
        (a == b).then_some(a)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn abs(&self) -> Self {
        if !self.contains_zero() {
            return RealBall {
                mid: Float::with_val(self.prec(), self.mid.abs_ref()),
                rad: self.rad.clone(),
            };
        }
        let hi = self.abs_hi();
        Self::from_interval(self.prec(), &Float::with_val(self.prec(), 0), &hi)
    }

    pub fn sqr(&self) -> Self {
        if !self.is_finite() {
            return Self::full(self.prec());
        }
        let (mid, ord) = Float::with_val_round(self.prec(), self.mid.square_ref(), Round::Nearest);
        let m = abs_up(&self.mid);
        let two_mr = mul_up(&m, &self.rad) << 1u32;
        let rr = mul_up(&self.rad, &self.rad);
        let rad = add_up(&add_up(&two_mr, &rr), &rounding_error(&mid, ord));
        let out = RealBall { mid, rad };
        // the square is nonnegative even when the ball straddles zero
        if out.lo() < 0 {
            let hi = out.hi();
            return Self::from_interval(self.prec(), &Float::with_val(self.prec(), 0), &hi);
        }
        out
    }

    pub fn recip(&self) -> Self {
        Self::one(self.prec()) / self
    }

    /// Square root; the ball is intersected with `[0, inf)` first.
    pub fn sqrt(&self) -> Self {
        let prec = self.prec();
        if !self.is_finite() || self.hi() < 0 {
            return Self::full(prec);
        }
        let lo = self.lo();
        let lo_s = if lo <= 0 {
            Float::with_val(prec, 0)
        } else {
            Float::with_val_round(prec, lo.sqrt_ref(), Round::Down).0
        };
        let hi_s = Float::with_val_round(prec, self.hi().sqrt_ref(), Round::Up).0;
        Self::from_interval(prec, &lo_s, &hi_s)
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        if !self.is_finite() {
            return Self::full(prec);
        }
        let lo = Float::with_val_round(prec, self.lo().exp_ref(), Round::Down).0;
        let hi = Float::with_val_round(prec, self.hi().exp_ref(), Round::Up).0;
        Self::from_interval(prec, &lo, &hi)
    }

    /// `exp(x) - 1`.
    pub fn exp_m1(&self) -> Self {
        let prec = self.prec();
        if !self.is_finite() {
            return Self::full(prec);
        }
        let lo = Float::with_val_round(prec, self.lo().exp_m1_ref(), Round::Down).0;
        let hi = Float::with_val_round(prec, self.hi().exp_m1_ref(), Round::Up).0;
        Self::from_interval(prec, &lo, &hi)
    }

    /// Natural logarithm; the full line if the ball is not strictly positive.
    pub fn ln(&self) -> Self {
        let prec = self.prec();
        if !self.is_finite() || !self.is_positive() {
            return Self::full(prec);
        }
        let lo = Float::with_val_round(prec, self.lo().ln_ref(), Round::Down).0;
        let hi = Float::with_val_round(prec, self.hi().ln_ref(), Round::Up).0;
        Self::from_interval(prec, &lo, &hi)
    }

    pub fn atan(&self) -> Self {
        let prec = self.prec();
        if !self.is_finite() {
            return Self::from_interval(
                prec,
                &-Float::with_val_round(prec, Constant::Pi, Round::Up).0,
                &Float::with_val_round(prec, Constant::Pi, Round::Up).0,
            );
        }
        let lo = Float::with_val_round(prec, self.lo().atan_ref(), Round::Down).0;
        let hi = Float::with_val_round(prec, self.hi().atan_ref(), Round::Up).0;
        Self::from_interval(prec, &lo, &hi)
    }

    /// Sine and cosine (both are 1-Lipschitz).
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec();
        if !self.is_finite() {
            let unit = Self::from_interval(prec, &Float::with_val(prec, -1), &Float::with_val(prec, 1));
            return (unit.clone(), unit);
        }
        let mut s = Float::new(prec);
        let mut c = Float::new(prec);
        let (os, oc) = (&mut s, &mut c).assign_round(self.mid.sin_cos_ref(), Round::Nearest);
        let rs = add_up(&self.rad, &rounding_error(&s, os));
        let rc = add_up(&self.rad, &rounding_error(&c, oc));
        (
            RealBall { mid: s, rad: rs }.clamp_unit(),
            RealBall { mid: c, rad: rc }.clamp_unit(),
        )
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    fn clamp_unit(self) -> Self {
        if self.rad > 1 {
            let prec = self.prec();
            let lo = max_f(self.lo(), Float::with_val(prec, -1));
            let hi = min_f(self.hi(), Float::with_val(prec, 1));
            return Self::from_interval(prec, &lo, &hi);
        }
        self
    }

    /// `self^e` for a strictly positive base.
    pub fn pow(&self, e: &RealBall) -> Self {
        (e * &self.ln()).exp()
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut result = Self::one(self.prec());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        result
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_2si(&self, k: i32) -> Self {
        RealBall {
            mid: Float::with_val(self.prec(), &self.mid << k),
            rad: up(&self.rad << k),
        }
    }

    pub fn max(&self, other: &RealBall) -> Self {
        let prec = self.prec().max(other.prec());
        Self::from_interval(prec, &max_f(self.lo(), other.lo()), &max_f(self.hi(), other.hi()))
    }

    pub fn min(&self, other: &RealBall) -> Self {
        let prec = self.prec().max(other.prec());
        Self::from_interval(prec, &min_f(self.lo(), other.lo()), &min_f(self.hi(), other.hi()))
    }

    /// Total order key on midpoints, used for deterministic sorting.
    pub fn mid_key(&self) -> OrdFloat {
        OrdFloat::from(self.mid.clone())
    }

    fn add_impl(&self, other: &RealBall, negate: bool) -> Self {
        let prec = self.prec().max(other.prec());
        if !self.is_finite() || !other.is_finite() {
            return Self::full(prec);
        }
        let (mid, ord) = if negate {
            Float::with_val_round(prec, &self.mid - &other.mid, Round::Nearest)
        } else {
            Float::with_val_round(prec, &self.mid + &other.mid, Round::Nearest)
        };
        let rad = add_up(&add_up(&self.rad, &other.rad), &rounding_error(&mid, ord));
        RealBall { mid, rad }
    }

    fn mul_impl(&self, other: &RealBall) -> Self {
        let prec = self.prec().max(other.prec());
        let self_zero = self.is_exact() && self.mid.is_zero();
        let other_zero = other.is_exact() && other.mid.is_zero();
        if self_zero || other_zero {
            return Self::zero(prec);
        }
        if !self.is_finite() || !other.is_finite() {
            return Self::full(prec);
        }
        let (mid, ord) = Float::with_val_round(prec, &self.mid * &other.mid, Round::Nearest);
        let a = mul_up(&abs_up(&self.mid), &other.rad);
        let b = mul_up(&abs_up(&other.mid), &self.rad);
        let c = mul_up(&self.rad, &other.rad);
        let rad = add_up(&add_up(&add_up(&a, &b), &c), &rounding_error(&mid, ord));
        RealBall { mid, rad }
    }

    fn div_impl(&self, other: &RealBall) -> Self {
        let prec = self.prec().max(other.prec());
        if !self.is_finite() || !other.is_finite() || other.contains_zero() {
            return Self::full(prec);
        }
        let (mid, ord) = Float::with_val_round(prec, &self.mid / &other.mid, Round::Nearest);
        let bm_up = abs_up(&other.mid);
        let bm_down = down(other.mid.abs_ref());
        let num = add_up(&mul_up(&abs_up(&self.mid), &other.rad), &mul_up(&bm_up, &self.rad));
        let gap = down(&bm_down - &other.rad);
        if gap <= 0 {
            return Self::full(prec);
        }
        let den = down(&bm_down * &gap);
        let rad = add_up(&up(&num / &den), &rounding_error(&mid, ord));
        RealBall { mid, rad }
    }
}

fn min_f(a: Float, b: Float) -> Float {
    if a < b {
        a
    } else {
        b
    }
}

fn max_f(a: Float, b: Float) -> Float {
    if a > b {
        a
    } else {
        b
    }
}

impl Neg for &RealBall {
    type Output = RealBall;
    fn neg(self) -> RealBall {
        RealBall {
            mid: Float::with_val(self.prec(), -&self.mid),
            rad: self.rad.clone(),
        }
    }
}

impl Neg for RealBall {
    type Output = RealBall;
    fn neg(self) -> RealBall {
        -&self
    }
}

macro_rules! ball_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&RealBall> for &RealBall {
            type Output = RealBall;
            fn $method(self, rhs: &RealBall) -> RealBall {
                let f: fn(&RealBall, &RealBall) -> RealBall = $body;
                f(self, rhs)
            }
        }
        impl $trait<RealBall> for RealBall {
            type Output = RealBall;
            fn $method(self, rhs: RealBall) -> RealBall {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RealBall> for RealBall {
            type Output = RealBall;
            fn $method(self, rhs: &RealBall) -> RealBall {
                (&self).$method(rhs)
            }
        }
        impl $trait<RealBall> for &RealBall {
            type Output = RealBall;
            fn $method(self, rhs: RealBall) -> RealBall {
                self.$method(&rhs)
            }
        }
        impl $trait<i64> for &RealBall {
            type Output = RealBall;
            fn $method(self, rhs: i64) -> RealBall {
                self.$method(&RealBall::from_i64(self.prec(), rhs))
            }
        }
        impl $trait<i64> for RealBall {
            type Output = RealBall;
            fn $method(self, rhs: i64) -> RealBall {
                (&self).$method(rhs)
            }
        }
    };
}

ball_binop!(Add, add, |a, b| a.add_impl(b, false));
ball_binop!(Sub, sub, |a, b| a.add_impl(b, true));
ball_binop!(Mul, mul, |a, b| a.mul_impl(b));
ball_binop!(Div, div, |a, b| a.div_impl(b));

impl fmt::Debug for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} +/- {}]",
            self.mid.to_string_radix(10, Some(20)),
            self.rad.to_string_radix(10, Some(4))
        )
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl PartialEq for RealBall {
    fn eq(&self, other: &Self) -> bool {
        self.mid == other.mid && self.rad == other.rad
    }
}
