//! Riemann-Siegel expansion of the auxiliary function `R(s)` with the
//! `C0`, `C1` terms and the explicit `RS1` remainder, and Hardy's `Z`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Float;

use crate::ball::RealBall;
use crate::chi::{chi, theta};
use crate::complex::ComplexBall;
use crate::error::{domain, Error, Result};
use crate::precision::Precision;
use crate::zeta::{partial_sum_n, zeta_eval};

#[derive(Clone, Debug)]
pub struct RSTerms {
    pub a: RealBall,
    pub n: u64,
    pub p: RealBall,
    pub u: ComplexBall,
    pub c0: ComplexBall,
    pub c1: ComplexBall,
    pub rs1_radius: RealBall,
}

#[derive(Clone, Debug)]
pub struct ZValue {
    pub value: RealBall,
    pub im_residual: RealBall,
}

/// Truncated Taylor series `c0 + c1 h + c2 h^2 + c3 h^3`.
#[derive(Clone, Debug)]
struct Jet([ComplexBall; 4]);

impl Jet {
    fn constant(c: ComplexBall) -> Self {
        let z = ComplexBall::zero(c.prec());
        Jet([c, z.clone(), z.clone(), z])
    }

    fn variable(p: &RealBall) -> Self {
        let prec = p.prec();
        let z = ComplexBall::zero(prec);
        Jet([ComplexBall::from_real(p.clone()), ComplexBall::one(prec), z.clone(), z])
    }

    fn add(&self, o: &Jet) -> Jet {
        Jet(std::array::from_fn(|k| &self.0[k] + &o.0[k]))
    }

    fn sub(&self, o: &Jet) -> Jet {
        Jet(std::array::from_fn(|k| &self.0[k] - &o.0[k]))
    }

    fn scale(&self, c: &ComplexBall) -> Jet {
        Jet(std::array::from_fn(|k| &self.0[k] * c))
    }

    fn mul(&self, o: &Jet) -> Jet {
        Jet(std::array::from_fn(|k| {
            let mut acc = ComplexBall::zero(self.0[0].prec());
            for j in 0..=k {
                acc = &acc + &(&self.0[j] * &o.0[k - j]);
            }
            acc
        }))
    }

    fn div(&self, o: &Jet) -> Jet {
        let mut q: Vec<ComplexBall> = Vec::with_capacity(4);
        for k in 0..4 {
            let mut acc = self.0[k].clone();
            for j in 1..=k {
                acc = &acc - &(&o.0[j] * &q[k - j]);
            }
            q.push(&acc / &o.0[0]);
        }
        Jet(q.try_into().expect("four coefficients"))
    }

    fn exp(&self) -> Jet {
        let prec = self.0[0].prec();
        let mut f: Vec<ComplexBall> = vec![self.0[0].exp()];
        for k in 1..4 {
            let mut acc = ComplexBall::zero(prec);
            for j in 1..=k {
                let term = (&self.0[j] * &f[k - j]).mul_real(&RealBall::from_i64(prec, j as i64));
                acc = &acc + &term;
            }
            f.push(acc.mul_real(&RealBall::from_ratio(prec, 1, k as i64)));
        }
        Jet(f.try_into().expect("four coefficients"))
    }

    fn cos(&self) -> Jet {
        let i = ComplexBall::i(self.0[0].prec());
        let a = self.scale(&i).exp();
        let b = self.scale(&-&i).exp();
        let h = ComplexBall::from_real(RealBall::from_ratio(self.0[0].prec(), 1, 2));
        a.add(&b).scale(&h)
    }
}

/// Values `F, F', F'''` at a point.
#[derive(Clone, Debug)]
pub struct FDerivatives {
    pub f: ComplexBall,
    pub f1: ComplexBall,
    pub f3: ComplexBall,
}

fn f_closed_form_jet(p: &RealBall) -> Jet {
    let prec = p.prec();
    let pi = RealBall::pi(prec);
    let ipi = ComplexBall::new(RealBall::zero(prec), pi.clone());
    let x = Jet::variable(p);
    let half = ComplexBall::from_real(RealBall::from_ratio(prec, 1, 2));
    let three_eighths = Jet::constant(ComplexBall::from_real(RealBall::from_ratio(prec, 3, 8)));
    let arg = x.mul(&x).scale(&half).add(&three_eighths).scale(&ipi);
    let sqrt2 = RealBall::from_i64(prec, 2).sqrt();
    let isqrt2 = ComplexBall::new(RealBall::zero(prec), sqrt2);
    let pi_c = ComplexBall::from_real(pi);
    let num = arg.exp().sub(&x.scale(&pi_c.mul_2si(-1)).cos().scale(&isqrt2));
    let den = x.scale(&pi_c).cos().scale(&ComplexBall::from_real(RealBall::from_i64(prec, 2)));
    num.div(&den)
}

/// Closed form of `F` at a complex point.
fn f_complex(p: &ComplexBall) -> ComplexBall {
    let prec = p.prec();
    let pi = RealBall::pi(prec);
    let arg = p.sqr().mul_2si(-1).add_real(&RealBall::from_ratio(prec, 3, 8)).mul_real(&pi).mul_i();
    let sqrt2 = RealBall::from_i64(prec, 2).sqrt();
    let num = &arg.exp() - &p.mul_real(&pi).mul_2si(-1).cos().mul_real(&sqrt2).mul_i();
    let den = p.mul_real(&pi).cos().mul_2si(1);
    &num / &den
}

/// Taylor expansion of `F` about `p0 = +-1/2`.
struct NearExpansion {
    coeffs: Vec<ComplexBall>,
    /// Bound on `|F|` on the circle `|p - p0| = RHO`.
    m_rho: Float,
}

const RHO_LOG2: i32 = -2;
const NEAR_LOG2: i32 = -6;

fn factorial_ball(prec: u32, j: usize) -> RealBall {
    let mut f = RealBall::one(prec);
    for k in 2..=j {
        f = &f * &RealBall::from_i64(prec, k as i64);
    }
    f
}

fn max_abs_on_circle(sign: i32) -> Float {
    let prec = 64;
    let pieces = 64;
    let p0 = RealBall::from_ratio(prec, sign as i64, 2);
    let mut m = Float::with_val(prec, 0);
    for k in 0..pieces {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / pieces as f64;
        let (sy, cx) = phi.sin_cos();
        let rad = Float::with_val(prec, 0.013);
        let p = ComplexBall::new(
            &RealBall::new(Float::with_val(prec, 0.25 * cx), rad.clone()) + &p0,
            RealBall::new(Float::with_val(prec, 0.25 * sy), rad),
        );
        let v = f_complex(&p).abs_hi();
        if v > m {
            m = v;
        }
    }
    m
}

fn near_expansion(sign: i32, prec: u32) -> Arc<NearExpansion> {
    static CACHE: OnceLock<Mutex<HashMap<(i32, u32), Arc<NearExpansion>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(e) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&(sign, prec)) {
        return e.clone();
    }
    let e = Arc::new(build_near_expansion(sign, prec));
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert((sign, prec), e.clone());
    e
}

fn build_near_expansion(sign: i32, prec: u32) -> NearExpansion {
    let wp = 2 * prec + 16;
    let order = (prec as usize) / 4 + 8;
    let len = order + 2;
    let pi = RealBall::pi(wp);
    let sg = RealBall::from_i64(wp, sign as i64);
    let half_pi = pi.mul_2si(-1);
    let fact: Vec<RealBall> = (0..len).map(|j| factorial_ball(wp, j)).collect();
    let zero = ComplexBall::zero(wp);
    // A = exp(sign i pi h / 2)
    let alpha = ComplexBall::new(RealBall::zero(wp), &sg * &half_pi);
    let mut a = vec![ComplexBall::one(wp)];
    for j in 1..len {
        a.push(&a[j - 1] * &alpha);
    }
    let a: Vec<ComplexBall> = a
        .iter()
        .enumerate()
        .map(|(j, c)| c.mul_real(&fact[j].recip()))
        .collect();
    // B = exp(i pi h^2 / 2)
    let beta = ComplexBall::new(RealBall::zero(wp), half_pi.clone());
    let mut b = vec![zero.clone(); len];
    let mut pow = ComplexBall::one(wp);
    let mut k = 0;
    while 2 * k < len {
        b[2 * k] = pow.mul_real(&fact[k].recip());
        pow = &pow * &beta;
        k += 1;
    }
    // C = cos(pi h/2) - sign sin(pi h/2)
    let mut c = Vec::with_capacity(len);
    let mut hp = RealBall::one(wp);
    for j in 0..len {
        let base = &hp / &fact[j];
        let v = if j % 2 == 0 {
            if (j / 2) % 2 == 0 { base } else { -&base }
        } else {
            let s = if ((j - 1) / 2) % 2 == 0 { base } else { -&base };
            -&(&s * &sg)
        };
        c.push(ComplexBall::from_real(v));
        hp = &hp * &half_pi;
    }
    // N = i (A B - C),  D = -2 sign sin(pi h)
    let mut n = Vec::with_capacity(len);
    for j in 0..len {
        let mut ab = zero.clone();
        for i in 0..=j {
            ab = &ab + &(&a[i] * &b[j - i]);
        }
        n.push((&ab - &c[j]).mul_i());
    }
    let mut d = Vec::with_capacity(len);
    let mut pp = RealBall::one(wp);
    for j in 0..len {
        let v = if j % 2 == 1 {
            let base = &pp / &fact[j];
            let s = if ((j - 1) / 2) % 2 == 0 { base } else { -&base };
            -&(&s * &sg).mul_2si(1)
        } else {
            RealBall::zero(wp)
        };
        d.push(ComplexBall::from_real(v));
        pp = &pp * &pi;
    }
    // F = (N/h) / (D/h)
    let mut f: Vec<ComplexBall> = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut acc = n[j + 1].clone();
        for k in 1..=j {
            acc = &acc - &(&d[k + 1] * &f[j - k]);
        }
        f.push(&acc / &d[1]);
    }
    NearExpansion {
        coeffs: f,
        m_rho: max_abs_on_circle(sign),
    }
}

/// Bound on `sum_{j>M} j^(k) f_j h^{j-k}` with `|f_j| <= m rho^-j`, `|h| <= hmax`.
fn cauchy_tail(m_rho: &Float, order: usize, k: u32, hmax: &Float) -> Float {
    let prec = 64;
    let rho = Float::with_val(prec, 1) << RHO_LOG2;
    let q = RealBall::exact(Float::with_val(prec, hmax / &rho));
    let m1 = (order + 1) as i64;
    let growth = RealBall::from_ratio(prec, m1 + 1, m1).powi(k);
    let ratio = &q * &growth;
    let one = RealBall::one(prec);
    if !ratio.certainly_lt(&one) {
        return Float::with_val(prec, rug::float::Special::Infinity);
    }
    let lead = &RealBall::exact(m_rho.clone())
        * &(&RealBall::from_i64(prec, m1).powi(k) * &q.powi(order as u32 + 1 - k.min(order as u32 + 1)));
    let lead = &lead / &RealBall::exact(rho).powi(k);
    (&lead / &(&one - &ratio)).hi()
}

fn near_eval(p: &RealBall, sign: i32) -> FDerivatives {
    let prec = p.prec();
    let e = near_expansion(sign, prec);
    let h = p - &RealBall::from_ratio(prec, sign as i64, 2);
    let hmax = h.abs_hi();
    let order = e.coeffs.len() - 1;
    let deriv = |k: usize| -> ComplexBall {
        let mut acc = ComplexBall::zero(prec);
        for j in (k..=order).rev() {
            let mut fall = 1i64;
            for i in 0..k {
                fall *= (j - i) as i64;
            }
            let c = e.coeffs[j].mul_real(&RealBall::from_i64(prec, fall));
            acc = &acc.mul_real(&h) + &c;
        }
        acc.with_prec(prec)
            .add_error(&cauchy_tail(&e.m_rho, order, k as u32, &hmax))
    };
    FDerivatives {
        f: deriv(0),
        f1: deriv(1),
        f3: deriv(3),
    }
}

/// `F`, `F'` and `F'''` at a real ball.
pub fn rs_f_derivatives(p: &RealBall) -> FDerivatives {
    let near_limit = Float::with_val(64, 1) << NEAR_LOG2;
    for sign in [1, -1] {
        let h = p - &RealBall::from_ratio(p.prec(), sign as i64, 2);
        if h.abs_hi() <= near_limit {
            return near_eval(p, sign);
        }
    }
    let j = f_closed_form_jet(p);
    let prec = p.prec();
    FDerivatives {
        f: j.0[0].clone(),
        f1: j.0[1].clone(),
        f3: j.0[3].mul_real(&RealBall::from_i64(prec, 6)),
    }
}

/// `F(p) = (e^{pi i (p^2/2 + 3/8)} - i sqrt2 cos(pi p/2)) / (2 cos pi p)`.
pub fn rs_f(p: &RealBall) -> ComplexBall {
    rs_f_derivatives(p).f
}

/// `C1 = (F'''/12 - (pi/2i)(sigma - 1/2) F') / pi^2`.
pub fn rs_c1(sigma: &RealBall, d: &FDerivatives) -> ComplexBall {
    let prec = sigma.prec().max(d.f.prec());
    let pi = RealBall::pi(prec);
    let a = d.f3.mul_real(&RealBall::from_ratio(prec, 1, 12));
    let coef = (&(sigma - &RealBall::from_ratio(prec, 1, 2)) * &pi).mul_2si(-1);
    let b = d.f1.mul_real(&coef).mul_i();
    (&a + &b).mul_real(&pi.sqr().recip())
}

/// `(1/7) 2^{3 sigma/2} (1.1/a)^2`.
pub fn rs1_bound(sigma: &RealBall, a: &RealBall) -> RealBall {
    let prec = sigma.prec().max(a.prec());
    let two = RealBall::from_i64(prec, 2);
    let g = two.pow(&(sigma * &RealBall::from_ratio(prec, 3, 2)));
    let r = (&RealBall::from_ratio(prec, 11, 10) / a).sqr();
    &(&g * &r) / &RealBall::from_i64(prec, 7)
}

/// `C0` cap `1/2`.
pub fn c0_cap(prec: u32) -> RealBall {
    RealBall::from_ratio(prec, 1, 2)
}

/// `C1` cap `1/(6 pi) + |sigma - 1/2| / (2 pi)`.
pub fn c1_cap(sigma: &RealBall) -> RealBall {
    let prec = sigma.prec();
    let pi = RealBall::pi(prec);
    let a = (&pi * &RealBall::from_i64(prec, 6)).recip();
    let b = &(sigma - &RealBall::from_ratio(prec, 1, 2)).abs() / &pi.mul_2si(1);
    &a + &b
}

/// Which `R` bound applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RBoundProp {
    RMinusOne,
    Right,
    Left,
}

#[derive(Clone, Debug)]
pub struct RRegionBound {
    pub value: RealBall,
    pub prop: RBoundProp,
}

/// `3/2^sigma + (2pi/t)^{min(sigma,1)/2}`, a bound on `|R - 1|`.
pub fn r_bound_minus_one(sigma: &RealBall, t: &RealBall) -> RealBall {
    let prec = sigma.prec().max(t.prec());
    let two = RealBall::from_i64(prec, 2);
    let a = &RealBall::from_i64(prec, 3) / &two.pow(sigma);
    let e = sigma.min(&RealBall::one(prec)).mul_2si(-1);
    let b = (&RealBall::pi(prec).mul_2si(1) / t).pow(&e);
    &a + &b
}

/// `2 sqrt(t/2pi)`.
pub fn r_bound_right(t: &RealBall) -> RealBall {
    rs_a(t).mul_2si(1)
}

/// `19 t / (2pi)^{1-sigma} ((1-sigma)^2 + t^2)^{1/4 - sigma/2}`.
pub fn r_bound_left(sigma: &RealBall, t: &RealBall) -> RealBall {
    let prec = sigma.prec().max(t.prec());
    let u = &RealBall::one(prec) - sigma;
    let q = &u.sqr() + &t.sqr();
    let e = &RealBall::from_ratio(prec, 1, 4) - &sigma.mul_2si(-1);
    let lead = &(t * &RealBall::from_i64(prec, 19)) / &RealBall::pi(prec).mul_2si(1).pow(&u);
    &lead * &q.pow(&e)
}

/// Tightest applicable bound on `|R(s)|`.
pub fn r_region_bound(s: &ComplexBall) -> Result<RRegionBound> {
    let prec = s.prec();
    let (sigma, t) = (&s.re, &s.im);
    let pi16 = &RealBall::pi(prec) * &RealBall::from_i64(prec, 16);
    let mut best: Option<RRegionBound> = None;
    let mut offer = |value: RealBall, prop| {
        if best.as_ref().map_or(true, |b| value.hi() < b.value.hi()) {
            best = Some(RRegionBound { value, prop });
        }
    };
    if pi16.certainly_lt(t) {
        if sigma.lo() >= 2 {
            offer(&r_bound_minus_one(sigma, t) + &RealBall::one(prec), RBoundProp::RMinusOne);
        }
        if sigma.is_positive() {
            offer(r_bound_right(t), RBoundProp::Right);
        }
    }
    if sigma.hi() <= 0 && t.lo() >= pi16.hi() {
        offer(r_bound_left(sigma, t), RBoundProp::Left);
    }
    best.ok_or_else(|| domain("no R bound applies: need t > 16 pi with sigma > 0, or t >= 16 pi with sigma <= 0"))
}

fn rs_prec(s: &ComplexBall) -> u32 {
    let t = s.im.abs_hi().to_f64().max(2.0);
    s.prec() + t.log2().ceil() as u32 + 16
}

/// `a = sqrt(t / 2pi)`.
pub fn rs_a(t: &RealBall) -> RealBall {
    (t / &RealBall::pi(t.prec()).mul_2si(1)).sqrt()
}

/// `U = exp(-i ((t/2) log(t/2pi) - t/2 - pi/8))`.
pub fn rs_u(t: &RealBall) -> ComplexBall {
    let prec = t.prec();
    let pi = RealBall::pi(prec);
    let l = (t / &pi.mul_2si(1)).ln();
    let phase = &(&(t * &l) - t).mul_2si(-1) - &pi.mul_2si(-3);
    let (s, c) = phase.sin_cos();
    ComplexBall::new(c, -&s)
}

fn check_expansion_domain(s: &ComplexBall) -> Result<()> {
    if !s.im.is_positive() || !s.re.is_nonnegative() {
        return Err(domain("the Riemann-Siegel expansion requires t > 0 and sigma >= 0"));
    }
    Ok(())
}

fn terms_with(s: &ComplexBall, a: &RealBall, a_part: &RealBall, n: u64) -> RSTerms {
    let prec = s.prec();
    let p = &RealBall::one(prec) - &(a_part - &RealBall::with_val(prec, n)).mul_2si(1);
    let d = rs_f_derivatives(&p);
    let c1 = rs_c1(&s.re, &d);
    RSTerms {
        a: a.clone(),
        n,
        p,
        u: rs_u(&s.im),
        c0: d.f,
        c1,
        rs1_radius: rs1_bound(&s.re, a),
    }
}

/// Riemann-Siegel ingredients at `s`; fails with a boundary error when `a`
/// straddles an integer.
pub fn rs_terms(s: &ComplexBall) -> Result<RSTerms> {
    check_expansion_domain(s)?;
    let prec = s.prec();
    let wp = rs_prec(s);
    let sw = s.with_prec(wp);
    let a = rs_a(&sw.im);
    let n = a
        .certified_floor()
        .ok_or_else(|| Error::Boundary("a = sqrt(t/2pi) straddles an integer".into()))?;
    let n = n.to_u64().ok_or_else(|| domain("t too large"))?;
    let mut t = terms_with(&sw, &a, &a, n);
    t.a = t.a.with_prec(prec);
    t.p = t.p.with_prec(prec);
    t.u = t.u.with_prec(prec);
    t.c0 = t.c0.with_prec(prec);
    t.c1 = t.c1.with_prec(prec);
    Ok(t)
}

/// `(-1)^{N-1} U a^-sigma (C0 + C1/a [+ RS1])`.
fn correction(s: &ComplexBall, t: &RSTerms, with_rs1: bool) -> ComplexBall {
    let prec = s.prec();
    let mut inner = &t.c0 + &t.c1.mul_real(&t.a.recip());
    if with_rs1 {
        inner = inner.add_error(&t.rs1_radius.hi());
    }
    let asig = (-&(&s.re * &t.a.ln())).exp();
    let mut v = (&t.u * &inner).mul_real(&asig);
    if t.n % 2 == 0 {
        v = -v;
    }
    v.with_prec(prec)
}

/// Pieces of the expansion over `a`, split at an integer if needed.
fn expansion_parts(s: &ComplexBall) -> Result<Vec<RSTerms>> {
    let a = rs_a(&s.im);
    if let Some(n) = a.certified_floor() {
        let n = n.to_u64().ok_or_else(|| domain("t too large"))?;
        return Ok(vec![terms_with(s, &a, &a, n)]);
    }
    let prec = s.prec();
    let n_hi = a.hi().to_integer_round(rug::float::Round::Down).map(|x| x.0);
    let n_lo = a.lo().to_integer_round(rug::float::Round::Down).map(|x| x.0);
    let (Some(n_lo), Some(n_hi)) = (n_lo, n_hi) else {
        return Err(Error::Boundary("a is not finite".into()));
    };
    if Integer::from(&n_hi - &n_lo) != 1 {
        return Err(Error::Boundary("a spans more than one integer".into()));
    }
    let n = n_hi.to_u64().ok_or_else(|| domain("t too large"))?;
    let nf = Float::with_val(prec, n);
    let lower = RealBall::from_interval(prec, &a.lo(), &nf);
    let upper = RealBall::from_interval(prec, &nf, &a.hi());
    let mut out = Vec::new();
    if n >= 1 {
        out.push(terms_with(s, &a, &lower, n - 1));
    }
    out.push(terms_with(s, &a, &upper, n));
    Ok(out)
}

use rug::Integer;

fn hull(parts: Vec<ComplexBall>) -> ComplexBall {
    let mut it = parts.into_iter();
    let first = it.next().expect("at least one part");
    it.fold(first, |acc, p| acc.union(&p))
}

/// `R(s) - sum_{n <= a} n^-s`, including the `RS1` remainder (`sigma >= 0`, `t > 0`).
pub fn rs_remainder(s: &ComplexBall) -> Result<ComplexBall> {
    check_expansion_domain(s)?;
    let prec = s.prec();
    let sw = s.with_prec(rs_prec(s));
    let a = rs_a(&sw.im);
    let main_n = a.certified_floor();
    let parts = expansion_parts(&sw)?;
    let vals: Vec<ComplexBall> = parts
        .iter()
        .map(|t| {
            let mut v = correction(&sw, t, true);
            // a part with N = n-1 differs from the common main sum by n^-s
            if main_n.is_none() && Some(t.n) != parts.last().map(|l| l.n) {
                v = &v - &crate::zeta::power_term(&sw, t.n + 1);
            }
            v
        })
        .collect();
    Ok(hull(vals).with_prec(prec))
}

fn expansion_value(s: &ComplexBall, with_rs1: bool) -> Result<ComplexBall> {
    let prec = s.prec();
    let sw = s.with_prec(rs_prec(s));
    let parts = expansion_parts(&sw)?;
    let vals: Vec<ComplexBall> = parts
        .iter()
        .map(|t| &partial_sum_n(&sw, t.n) + &correction(&sw, t, with_rs1))
        .collect();
    Ok(hull(vals).with_prec(prec))
}

/// Main sum plus `C0`, `C1` terms, without the `RS1` remainder.
pub fn r_main(s: &ComplexBall) -> Result<ComplexBall> {
    check_expansion_domain(s)?;
    expansion_value(s, false)
}

/// Enclosure of `R(s)` for `t >= 16 pi`.
///
/// For `sigma >= 0` this is the truncated expansion with the `RS1` radius;
/// for `sigma < 0` it uses `R(s) = chi(s) (zeta(1-s) - conj R(1 - conj s))`.
pub fn r_eval(s: &ComplexBall, prec: &Precision) -> Result<ComplexBall> {
    let p = s.prec();
    let pi16 = &RealBall::pi(p) * &RealBall::from_i64(p, 16);
    if s.im.lo() < pi16.hi() {
        return Err(domain("R is evaluated only for t >= 16 pi"));
    }
    if s.re.is_nonnegative() {
        return expansion_value(s, true);
    }
    let refl = (-&s.conj()).add_int(1);
    let r2 = expansion_value(&refl, true)?;
    let z = zeta_eval(&(-s).add_int(1), prec)?.value.with_prec(p);
    let c = chi(s)?.value;
    Ok(&c * &(&z - &r2.conj()))
}

/// `Z(t)` as the real part of `e^{i theta(t)} zeta(1/2 + it)`.
pub fn z_eval(t: &RealBall, prec: &Precision) -> Result<ZValue> {
    let p = t.prec().max(prec.working_bits());
    let tc = ComplexBall::from_real(t.with_prec(p));
    let th = theta(&tc)?.value;
    let s = ComplexBall::new(RealBall::from_ratio(p, 1, 2), t.with_prec(p));
    let z = zeta_eval(&s, prec)?.value;
    let rot = th.mul_i().exp();
    let v = &rot * &z;
    Ok(ZValue {
        value: v.re,
        im_residual: v.im,
    })
}
