//! The functional-equation factor `chi(s)`, its logarithm on the slit plane,
//! and the Riemann-Siegel theta function.

use rug::Float;
use serde::Serialize;

use crate::ball::RealBall;
use crate::complex::ComplexBall;
use crate::error::{domain, Error, Result};
use crate::gamma::log_gamma;

#[derive(Clone, Debug)]
pub struct ChiValue {
    pub value: ComplexBall,
    /// `log chi(s)` on `C` minus `(-inf, 0]` and `[1, inf)`, normalised by
    /// `log chi(1/2) = 0`; `None` when `s` meets a cut.
    pub log_branch: Option<ComplexBall>,
}

#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub value: ComplexBall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChiBoundForm {
    /// `(2 pi e)^sigma |s|^{1/2 - sigma}`, `sigma > 0`, `t > 1/2`.
    Growth,
    /// `|s|^{1/2}`, additionally `|s| >= 2 pi e`.
    Critical,
    /// `6 (2 pi)^{sigma-1} ((1-sigma)^2 + t^2)^{1/4 - sigma/2}`, `sigma <= 0`, `t >= 1/2`.
    Left,
}

impl ChiBoundForm {
    pub fn name(&self) -> &'static str {
        match self {
            ChiBoundForm::Growth => "growth",
            ChiBoundForm::Critical => "critical",
            ChiBoundForm::Left => "left",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChiBound {
    pub value: RealBall,
    pub form: ChiBoundForm,
}

fn guard_prec(s: &ComplexBall) -> u32 {
    let mag = s.abs_hi().to_f64().max(1.0).log2().ceil() as u32;
    s.prec() + 10 + mag
}

fn two_pi(prec: u32) -> RealBall {
    RealBall::pi(prec).mul_2si(1)
}

/// Rejects balls that come within `2 rad + 2^-10` of a pole (odd `n >= 1`)
/// or a zero (even `n <= 0`) of `chi`.
pub fn check_chi_singularities(s: &ComplexBall) -> Result<()> {
    if !s.is_finite() {
        return Err(domain("chi argument is not finite"));
    }
    let n = s.re.mid().to_f64().round();
    if n.abs() > 1e15 {
        return Ok(());
    }
    let n = n as i64;
    let pole = n >= 1 && n % 2 != 0;
    let zero = n <= 0 && n % 2 == 0;
    if !(pole || zero) {
        return Ok(());
    }
    let d = s.add_int(-n).abs_lo();
    let margin = Float::with_val(64, s.rad() * 2u32) + (Float::with_val(64, 1) >> 10);
    if d >= margin {
        return Ok(());
    }
    if pole {
        Err(Error::Pole(format!("chi has a pole at s = {n}")))
    } else {
        Err(domain(format!("chi vanishes at s = {n}")))
    }
}

/// `s` lies in the slit plane `C \ ((-inf, 0] U [1, inf))`.
pub fn in_slit_plane(s: &ComplexBall) -> bool {
    if !s.im.contains_zero() {
        return true;
    }
    s.re.is_positive() && s.re.certainly_lt(&RealBall::one(s.prec()))
}

/// Branch of `log cos(pi s / 2)` continuous on the slit plane and real on `(0, 1)`.
fn log_cos_branch(s: &ComplexBall) -> Result<ComplexBall> {
    let prec = s.prec();
    let pi = RealBall::pi(prec);
    if s.im.is_positive() {
        // cos(pi s/2) = e^{-i pi s/2} (1 + e^{i pi s}) / 2
        let ips = s.mul_real(&pi).mul_i();
        let tail = ips.exp().add_int(1).ln();
        let lead = -&ips.mul_2si(-1);
        return Ok((&lead + &tail).add_real(&-&RealBall::ln2(prec)));
    }
    if s.im.is_negative() {
        return Ok(log_cos_branch(&s.conj())?.conj());
    }
    let one = RealBall::one(prec);
    if s.re.certainly_lt(&one) && (-&one).certainly_lt(&s.re) {
        return Ok(s.mul_real(&pi).mul_2si(-1).cos().ln());
    }
    Err(domain("log chi is undefined on the cuts (-inf, 0] and [1, inf)"))
}

/// `log chi(s) = s log 2pi - log 2 - log cos(pi s/2) - log Gamma(s)` on the slit plane.
pub fn log_chi(s: &ComplexBall) -> Result<ComplexBall> {
    if !in_slit_plane(s) {
        return Err(domain("log chi is undefined on the cuts (-inf, 0] and [1, inf)"));
    }
    let prec = s.prec();
    let wp = guard_prec(s);
    let s = s.with_prec(wp);
    let lc = log_cos_branch(&s)?;
    let lg = log_gamma(&s)?;
    let a = s.mul_real(&two_pi(wp).ln()).add_real(&-&RealBall::ln2(wp));
    Ok((&(&a - &lc) - &lg).with_prec(prec))
}

/// `(2pi)^s / (2 Gamma(s) cos(pi s/2))` for `Re s > 0`.
fn chi_direct(s: &ComplexBall) -> Result<ComplexBall> {
    let prec = s.prec();
    let lg = log_gamma(s)?;
    let num = (&s.mul_real(&two_pi(prec).ln()) - &lg).exp();
    let den = s.mul_real(&RealBall::pi(prec)).mul_2si(-1).cos().mul_2si(1);
    Ok(&num / &den)
}

fn chi_value(s: &ComplexBall) -> Result<ComplexBall> {
    let prec = s.prec();
    let half = RealBall::from_ratio(prec, 1, 2);
    if s.re.is_positive() && !s.re.certainly_lt(&half) {
        return chi_direct(s);
    }
    let r = (-s).add_int(1);
    if r.re.is_positive() {
        return Ok(chi_direct(&r)?.recip());
    }
    chi_direct(s)
}

pub fn chi(s: &ComplexBall) -> Result<ChiValue> {
    check_chi_singularities(s)?;
    let prec = s.prec();
    let wp = guard_prec(s);
    if in_slit_plane(s) {
        let lb = log_chi(&s.with_prec(wp))?;
        return Ok(ChiValue {
            value: lb.exp().with_prec(prec),
            log_branch: Some(lb.with_prec(prec)),
        });
    }
    Ok(ChiValue {
        value: chi_value(&s.with_prec(wp))?.with_prec(prec),
        log_branch: None,
    })
}

fn is_real(t: &ComplexBall) -> bool {
    t.im.is_exact() && t.im.mid().is_zero()
}

/// `theta(t) = (i/2) log chi(1/2 + i t)`.
fn theta_chi_route(t: &ComplexBall) -> Result<ComplexBall> {
    let prec = t.prec();
    let s = t.mul_i().add_real(&RealBall::from_ratio(prec, 1, 2));
    if !in_slit_plane(&s) {
        return Err(domain("theta is undefined on the cuts i[1/2, inf) and -i[1/2, inf)"));
    }
    Ok(log_chi(&s)?.mul_i().mul_2si(-1))
}

/// Asymptotic form `((s-1/2)/2i) log(s/2pi) - pi s/4 + i s/2 + O*(0.15/y)`,
/// `s = 1/2 + i t = x + i y`, valid for `x > 0`, `y >= 1`; extended to
/// `Re t <= -1` by oddness.
pub fn theta_asymptotic(t: &ComplexBall) -> Result<ComplexBall> {
    let prec = t.prec();
    if t.re.is_negative() {
        return Ok(-&theta_asymptotic(&-t)?);
    }
    let s = t.mul_i().add_real(&RealBall::from_ratio(prec, 1, 2));
    if !s.re.is_positive() || s.im.lo() < 1 {
        return Err(domain("asymptotic theta requires Re(1/2 + it) > 0 and Re t >= 1"));
    }
    let wp = guard_prec(&s);
    let s = s.with_prec(wp);
    let t = t.with_prec(wp);
    let pi = RealBall::pi(wp);
    let lg = s.mul_real(&two_pi(wp).recip()).ln();
    let main = &(&t.mul_2si(-1) * &lg) - &s.mul_real(&pi).mul_2si(-2);
    let main = &main + &s.mul_i().mul_2si(-1);
    let err = (&RealBall::from_ratio(wp, 15, 100) / &s.im).hi();
    Ok(main.add_error(&err).with_prec(prec))
}

pub fn theta(t: &ComplexBall) -> Result<ThetaValue> {
    let mut value = theta_chi_route(t)?;
    if let Ok(a) = theta_asymptotic(t) {
        if a.rad() < value.rad() {
            value = a;
        }
    }
    if is_real(t) {
        value.im = RealBall::zero(value.prec());
    }
    Ok(ThetaValue { value })
}

/// `2 |t| log |t|`, valid for `|t| >= 4`, `|Re t| >= 1`.
pub fn theta_growth_bound(t: &ComplexBall) -> Result<RealBall> {
    let m = t.abs();
    if m.lo() < 4 || t.re.abs_lo() < 1 {
        return Err(domain("theta growth bound requires |t| >= 4 and |Re t| >= 1"));
    }
    Ok((&m * &m.ln()).mul_2si(1))
}

/// `(2 pi e)^sigma |s|^{1/2 - sigma}`.
pub fn chi_bound_growth(sigma: &RealBall, t: &RealBall) -> RealBall {
    let prec = sigma.prec().max(t.prec());
    let q = &sigma.sqr() + &t.sqr();
    let tpe = &two_pi(prec) * &RealBall::one(prec).exp();
    let e = &RealBall::from_ratio(prec, 1, 4) - &sigma.mul_2si(-1);
    &tpe.pow(sigma) * &q.pow(&e)
}

/// `(sigma^2+t^2)^{1/4} (4 pi^2 e^2 / (sigma^2+t^2))^{sigma/2}`.
pub fn chi_bound_ratio_form(sigma: &RealBall, t: &RealBall) -> RealBall {
    let prec = sigma.prec().max(t.prec());
    let q = &sigma.sqr() + &t.sqr();
    let c = (&two_pi(prec) * &RealBall::one(prec).exp()).sqr();
    let quarter = RealBall::from_ratio(prec, 1, 4);
    &q.pow(&quarter) * &(&c / &q).pow(&sigma.mul_2si(-1))
}

/// `(sigma^2+t^2)^{1/4}`.
pub fn chi_bound_critical(sigma: &RealBall, t: &RealBall) -> RealBall {
    let prec = sigma.prec().max(t.prec());
    (&sigma.sqr() + &t.sqr()).pow(&RealBall::from_ratio(prec, 1, 4))
}

/// `6 / (2pi)^{1-sigma} ((1-sigma)^2 + t^2)^{1/4 - sigma/2}`.
pub fn chi_bound_left(sigma: &RealBall, t: &RealBall) -> RealBall {
    let prec = sigma.prec().max(t.prec());
    let one = RealBall::one(prec);
    let u = &one - sigma;
    let q = &u.sqr() + &t.sqr();
    let e = &RealBall::from_ratio(prec, 1, 4) - &sigma.mul_2si(-1);
    &(&RealBall::from_i64(prec, 6) / &two_pi(prec).pow(&u)) * &q.pow(&e)
}

/// Tightest applicable upper bound on `|chi(s)|`.
pub fn chi_upper_bound(s: &ComplexBall) -> Result<ChiBound> {
    let prec = s.prec();
    let (sigma, t) = (&s.re, &s.im);
    let half = RealBall::from_ratio(prec, 1, 2);
    if sigma.is_positive() && half.certainly_lt(t) {
        let growth = chi_bound_growth(sigma, t);
        let tpe = &two_pi(prec) * &RealBall::one(prec).exp();
        if s.abs().lo() >= tpe.hi() {
            let crit = chi_bound_critical(sigma, t);
            if crit.hi() < growth.hi() {
                return Ok(ChiBound {
                    value: crit,
                    form: ChiBoundForm::Critical,
                });
            }
        }
        return Ok(ChiBound {
            value: growth,
            form: ChiBoundForm::Growth,
        });
    }
    if sigma.hi() <= 0 && t.lo() >= half.hi() {
        return Ok(ChiBound {
            value: chi_bound_left(sigma, t),
            form: ChiBoundForm::Left,
        });
    }
    Err(domain(
        "no chi bound applies: need sigma > 0, t > 1/2 or sigma <= 0, t >= 1/2",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::approx;
    use rug::Rational;

    fn c(re: f64, im: f64) -> ComplexBall {
        ComplexBall::from_f64(128, re, im)
    }

    #[test]
    fn chi_at_one_half() {
        let v = chi(&c(0.5, 0.0)).unwrap();
        assert!(v.value.re.contains_rational(&Rational::from(1)));
        assert!(v.log_branch.unwrap().contains_zero());
    }

    #[test]
    fn functional_identity() {
        let s = c(0.3, 5.0);
        let a = chi(&s).unwrap().value;
        let b = chi(&(-&s).add_int(1)).unwrap().value;
        let p = &a * &b;
        assert!(p.re.contains_rational(&Rational::from(1)));
        assert!(p.im.contains_rational(&Rational::from(0)));
    }

    #[test]
    fn unit_modulus_on_critical_line() {
        let v = chi(&c(0.5, 17.0)).unwrap().value;
        assert!(v.abs().contains_rational(&Rational::from(1)));
    }

    #[test]
    fn chi_on_real_axis_off_the_slit_plane() {
        let v = chi(&c(2.0, 0.0)).unwrap();
        assert!(v.log_branch.is_none());
        let expect = RealBall::pi(128).sqr().mul_2si(1);
        assert!(v.value.re.overlaps(&-&expect));
        let v = chi(&c(-1.5, 0.0)).unwrap();
        let w = chi(&c(2.5, 0.0)).unwrap();
        assert!((&v.value * &w.value).re.contains_rational(&Rational::from(1)));
    }

    #[test]
    fn chi_rejects_poles_and_zeros() {
        assert!(matches!(chi(&c(1.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(chi(&c(3.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(chi(&c(-2.0, 0.0)), Err(Error::Domain(_))));
        assert!(chi(&c(1.0, 0.5)).is_ok());
    }

    #[test]
    fn upper_bound_examples() {
        let b = chi_upper_bound(&c(0.5, 100.0)).unwrap();
        assert!(b.value.overlaps(&approx("4.13273135412249", 1e-12)));
        assert_eq!(b.form, ChiBoundForm::Growth);
        let b = chi_upper_bound(&c(-2.0, 10.0)).unwrap();
        assert_eq!(b.form, ChiBoundForm::Left);
        assert!(b.value.overlaps(&approx("8.51912062755764", 1e-12)));
        assert!(chi(&c(-2.0, 10.0)).unwrap().value.abs().hi() < b.value.lo());
        let crit = chi_bound_critical(&RealBall::from_i64(128, 3), &RealBall::from_i64(128, 100));
        assert!(crit.overlaps(&approx("10.0022492410234", 1e-12)));
        assert!(chi(&c(3.0, 100.0)).unwrap().value.abs().hi() < crit.lo());
        assert!(chi_upper_bound(&c(0.5, 0.25)).is_err());
    }

    #[test]
    fn ratio_form_matches_growth_form() {
        let (s, t) = (RealBall::from_f64(128, 0.7), RealBall::from_f64(128, 3.0));
        assert!(chi_bound_growth(&s, &t).overlaps(&chi_bound_ratio_form(&s, &t)));
    }

    #[test]
    fn theta_values() {
        let z = theta(&c(0.0, 0.0)).unwrap();
        assert!(z.value.re.contains_rational(&Rational::new()));
        let t = theta(&c(100.0, 0.0)).unwrap().value;
        assert!(t.re.overlaps(&approx("87.9721652317872196", 1e-15)));
        assert!(t.im.is_exact());
        let m = theta(&c(-100.0, 0.0)).unwrap().value;
        assert!(m.re.overlaps(&-&t.re));
        let t10 = theta(&c(10.0, 0.0)).unwrap().value;
        assert!(t10.re.overlaps(&approx("-3.0670743962899", 1e-12)));
    }

    #[test]
    fn asymptotic_theta_encloses_exact_value() {
        let a = theta_asymptotic(&c(100.0, 0.0)).unwrap();
        assert!(a.re.overlaps(&approx("87.9721652317872196", 1e-15)));
        assert!(a.re.overlaps(&approx("87.9719568972", 1e-9)));
    }

    #[test]
    fn complex_theta_and_growth_bound() {
        let t = c(5.0, 0.3);
        let v = theta(&t).unwrap().value;
        assert!(v.re.overlaps(&approx("-3.46413287", 1e-8)));
        assert!(v.im.overlaps(&approx("-0.03442690", 1e-8)));
        let b = theta_growth_bound(&t).unwrap();
        assert!(b.overlaps(&approx("16.1413229710", 1e-9)));
        let b10 = theta_growth_bound(&c(10.0, 0.0)).unwrap();
        assert!(b10.overlaps(&approx("46.0517018599", 1e-9)));
        let b4 = theta_growth_bound(&c(4.0, 0.0)).unwrap();
        assert!(b4.overlaps(&approx("11.0903548890", 1e-9)));
        assert!(theta_growth_bound(&c(0.5, 5.0)).is_err());
    }

    #[test]
    fn theta_rejects_cuts() {
        assert!(theta(&c(0.0, 1.0)).is_err());
        assert!(theta(&c(0.0, -2.0)).is_err());
        assert!(theta(&c(0.0, 0.25)).is_ok());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(150))]

            #[test]
            fn functional_identity(sigma in -5.0f64..6.0, t in 0.6f64..1e4) {
                let s = c(sigma, t);
                let one_minus = ComplexBall::new(&RealBall::one(128) - &s.re, -&s.im);
                let p = &chi(&s).unwrap().value * &chi(&one_minus).unwrap().value;
                prop_assert!(p.re.contains_rational(&Rational::from(1)));
                prop_assert!(p.im.contains_zero());
            }

            #[test]
            fn log_branch_exponentiates_to_value(sigma in -3.0f64..4.0, t in 0.6f64..500.0) {
                let v = chi(&c(sigma, t)).unwrap();
                let lb = v.log_branch.expect("off the cuts");
                prop_assert!(lb.exp().overlaps(&v.value));
            }

            #[test]
            fn unit_modulus_on_critical_line(t in -1e3f64..1e3) {
                let v = chi(&c(0.5, t)).unwrap().value;
                prop_assert!(v.abs().contains_float(&Float::with_val(64, 1)));
            }

            #[test]
            fn theta_real_and_odd(t in -50.0f64..50.0) {
                let a = theta(&c(t, 0.0)).unwrap().value;
                let b = theta(&c(-t, 0.0)).unwrap().value;
                prop_assert!(a.im.contains_zero());
                prop_assert!(a.overlaps(&-b));
            }

            #[test]
            fn chi_bound_dominates(sigma in -20.0f64..20.0, t in 0.51f64..1e4) {
                let s = c(sigma, t);
                if let Ok(b) = chi_upper_bound(&s) {
                    prop_assert!(chi(&s).unwrap().value.abs().certainly_le(&b.value));
                }
            }
        }
    }
}
