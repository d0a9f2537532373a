//! Rectangular complex balls built from two [`RealBall`]s.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::{Float, Rational};

use crate::ball::RealBall;

#[derive(Clone, PartialEq)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    pub fn new(re: RealBall, im: RealBall) -> Self {
        ComplexBall { re, im }
    }

    pub fn from_real(re: RealBall) -> Self {
        let prec = re.prec();
        ComplexBall {
            re,
            im: RealBall::zero(prec),
        }
    }

    pub fn from_rationals(prec: u32, re: &Rational, im: &Rational) -> Self {
        ComplexBall {
            re: RealBall::from_rational(prec, re),
            im: RealBall::from_rational(prec, im),
        }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        ComplexBall {
            re: RealBall::from_f64(prec, re),
            im: RealBall::from_f64(prec, im),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_real(RealBall::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_real(RealBall::one(prec))
    }

    pub fn i(prec: u32) -> Self {
        ComplexBall {
            re: RealBall::zero(prec),
            im: RealBall::one(prec),
        }
    }

    pub fn full(prec: u32) -> Self {
        ComplexBall {
            re: RealBall::full(prec),
            im: RealBall::full(prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        ComplexBall {
            re: self.re.with_prec(prec),
            im: self.im.with_prec(prec),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_exact() && self.im.mid().is_zero()
    }

    /// Larger of the two coordinate radii.
    pub fn rad(&self) -> Float {
        if self.re.rad() > self.im.rad() {
            self.re.rad().clone()
        } else {
            self.im.rad().clone()
        }
    }

    pub fn contains(&self, other: &ComplexBall) -> bool {
        self.re.contains(&other.re) && self.im.contains(&other.im)
    }

    pub fn overlaps(&self, other: &ComplexBall) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn add_error(&self, err: &Float) -> Self {
        ComplexBall {
            re: self.re.add_error(err),
            im: self.im.add_error(err),
        }
    }

    pub fn union(&self, other: &ComplexBall) -> Self {
        ComplexBall {
            re: self.re.union(&other.re),
            im: self.im.union(&other.im),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn mul_i(&self) -> Self {
        ComplexBall {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    pub fn add_real(&self, x: &RealBall) -> Self {
        ComplexBall {
            re: &self.re + x,
            im: self.im.clone(),
        }
    }

    pub fn add_int(&self, k: i64) -> Self {
        self.add_real(&RealBall::from_i64(self.prec(), k))
    }

    pub fn mul_real(&self, x: &RealBall) -> Self {
        ComplexBall {
            re: &self.re * x,
            im: &self.im * x,
        }
    }

    pub fn mul_2si(&self, k: i32) -> Self {
        ComplexBall {
            re: self.re.mul_2si(k),
            im: self.im.mul_2si(k),
        }
    }

    pub fn sqr(&self) -> Self {
        let re = &self.re.sqr() - &self.im.sqr();
        let im = (&self.re * &self.im).mul_2si(1);
        ComplexBall { re, im }
    }

    /// `|z|^2` as a real ball.
    pub fn norm_sqr(&self) -> RealBall {
        &self.re.sqr() + &self.im.sqr()
    }

    /// Corner-based enclosure `[lo, hi]` of `|z|` over the rectangle.
    fn abs_bounds(&self) -> (Float, Float) {
        let prec = self.prec();
        let ax = self.re.abs_hi();
        let ay = self.im.abs_hi();
        let hi = Float::with_val_round(prec, ax.hypot_ref(&ay), Round::Up).0;
        let dx = self.re.abs_lo();
        let dy = self.im.abs_lo();
        let lo = Float::with_val_round(prec, dx.hypot_ref(&dy), Round::Down).0;
        (lo, hi)
    }

    pub fn abs(&self) -> RealBall {
        if !self.is_finite() {
            return RealBall::full(self.prec());
        }
        if self.re.is_exact() && self.im.is_exact() {
            let prec = self.prec();
            let (h, ord) = Float::with_val_round(prec, self.re.mid().hypot_ref(self.im.mid()), Round::Nearest);
            if ord == std::cmp::Ordering::Equal {
                return RealBall::exact(h);
            }
        }
        let (lo, hi) = self.abs_bounds();
        RealBall::from_interval(self.prec(), &lo, &hi)
    }

    /// Upper bound on `|z|`.
    pub fn abs_hi(&self) -> Float {
        self.abs_bounds().1
    }

    /// Lower bound on `|z|` (zero if the rectangle contains the origin).
    pub fn abs_lo(&self) -> Float {
        self.abs_bounds().0
    }

    /// Rectangle meets the closed half-line `(-inf, 0]`.
    pub fn touches_negative_axis(&self) -> bool {
        self.im.contains_zero() && !self.re.is_positive()
    }

    /// Principal argument in `(-pi, pi)`; the full line if the rectangle
    /// meets the branch cut `(-inf, 0]`.
    pub fn arg(&self) -> RealBall {
        let prec = self.prec();
        if !self.is_finite() || self.touches_negative_axis() {
            return RealBall::full(prec);
        }
        let xs = [self.re.lo(), self.re.hi()];
        let ys = [self.im.lo(), self.im.hi()];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for x in &xs {
            for y in &ys {
                let mut a = Float::with_val(prec, y);
                a.atan2_round(x, Round::Down);
                let mut b = Float::with_val(prec, y);
                b.atan2_round(x, Round::Up);
                lo = Some(match lo {
                    Some(l) if l < a => l,
                    _ => a,
                });
                hi = Some(match hi {
                    Some(h) if h > b => h,
                    _ => b,
                });
            }
        }
        RealBall::from_interval(prec, &lo.unwrap(), &hi.unwrap())
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let prec = self.prec();
        if !self.is_finite() || self.touches_negative_axis() {
            return Self::full(prec);
        }
        let re = if self.im.is_exact() && self.im.mid().is_zero() {
            self.re.ln()
        } else {
            self.norm_sqr().ln().mul_2si(-1)
        };
        ComplexBall { re, im: self.arg() }
    }

    pub fn exp(&self) -> Self {
        if !self.is_finite() {
            return Self::full(self.prec());
        }
        let m = self.re.exp();
        if self.im.is_exact() && self.im.mid().is_zero() {
            return Self::from_real(m);
        }
        let (s, c) = self.im.sin_cos();
        ComplexBall {
            re: &m * &c,
            im: &m * &s,
        }
    }

    pub fn cos(&self) -> Self {
        let iz = self.mul_i();
        let a = iz.exp();
        let b = (-&iz).exp();
        (&a + &b).mul_2si(-1)
    }

    pub fn sin(&self) -> Self {
        let iz = self.mul_i();
        let a = iz.exp();
        let b = (-&iz).exp();
        // (a - b) / (2i) = -i (a - b) / 2
        (&a - &b).mul_i().mul_2si(-1).neg_()
    }

    fn neg_(&self) -> Self {
        -self
    }

    /// `z^w = exp(w log z)` on the principal branch.
    pub fn pow(&self, w: &ComplexBall) -> Self {
        (w * &self.ln()).exp()
    }

    /// `base^(-s)` for a real ball `ln_base = log(base)`.
    pub fn exp_neg_mul_real(s: &ComplexBall, ln_base: &RealBall) -> Self {
        (-&s.mul_real(ln_base)).exp()
    }

    pub fn recip(&self) -> Self {
        &ComplexBall::one(self.prec()) / self
    }

    fn mul_impl(&self, o: &ComplexBall) -> Self {
        if self.is_real() {
            return o.mul_real(&self.re);
        }
        if o.is_real() {
            return self.mul_real(&o.re);
        }
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        ComplexBall { re, im }
    }

    fn div_impl(&self, o: &ComplexBall) -> Self {
        if o.is_real() {
            return ComplexBall {
                re: &self.re / &o.re,
                im: &self.im / &o.re,
            };
        }
        let d = o.norm_sqr();
        let num = self.mul_impl(&o.conj());
        ComplexBall {
            re: &num.re / &d,
            im: &num.im / &d,
        }
    }
}

impl Neg for &ComplexBall {
    type Output = ComplexBall;
    fn neg(self) -> ComplexBall {
        ComplexBall {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for ComplexBall {
    type Output = ComplexBall;
    fn neg(self) -> ComplexBall {
        -&self
    }
}

macro_rules! complex_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&ComplexBall> for &ComplexBall {
            type Output = ComplexBall;
            fn $method(self, rhs: &ComplexBall) -> ComplexBall {
                let f: fn(&ComplexBall, &ComplexBall) -> ComplexBall = $body;
                f(self, rhs)
            }
        }
        impl $trait<ComplexBall> for ComplexBall {
            type Output = ComplexBall;
            fn $method(self, rhs: ComplexBall) -> ComplexBall {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ComplexBall> for ComplexBall {
            type Output = ComplexBall;
            fn $method(self, rhs: &ComplexBall) -> ComplexBall {
                (&self).$method(rhs)
            }
        }
        impl $trait<ComplexBall> for &ComplexBall {
            type Output = ComplexBall;
            fn $method(self, rhs: ComplexBall) -> ComplexBall {
                self.$method(&rhs)
            }
        }
    };
}

complex_binop!(Add, add, |a, b| ComplexBall {
    re: &a.re + &b.re,
    im: &a.im + &b.im
});
complex_binop!(Sub, sub, |a, b| ComplexBall {
    re: &a.re - &b.re,
    im: &a.im - &b.im
});
complex_binop!(Mul, mul, |a, b| a.mul_impl(b));
complex_binop!(Div, div, |a, b| a.div_impl(b));

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}
