//! Riemann zeta: Dirichlet partial sums, tail bounds, half-plane bounds and
//! a routed evaluator.

use rayon::prelude::*;
use rug::{Float, Integer};
use serde::Serialize;

use crate::ball::RealBall;
use crate::chi::chi;
use crate::complex::ComplexBall;
use crate::error::{domain, Error, Result};
use crate::gamma::log_gamma;
use crate::precision::Precision;
use crate::rs::r_eval;

/// Largest number of Dirichlet terms a single route may spend.
pub const TERM_BUDGET: u64 = 100_000;

const CHUNK: u64 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailBranch {
    /// `7 |s| x^-sigma`.
    SevenS,
    /// `x^{1-sigma} / (sigma-1) (1 + (sigma-1)/x)`.
    SigmaGt1,
}

#[derive(Clone, Debug)]
pub struct ZetaTail {
    pub x: RealBall,
    pub bound: RealBall,
    pub branch_used: TailBranch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaRoute {
    /// Dirichlet series with the `sigma > 1` tail.
    Series,
    /// Dirichlet sum plus first-order Euler-Maclaurin correction.
    EulerMaclaurin,
    /// Borwein's alternating-series acceleration of eta.
    Eta,
    /// `R(s) + chi(s) conj(R(1 - conj s))`.
    RiemannSiegel,
    /// Functional equation from `1 - s`.
    Reflection,
}

impl ZetaRoute {
    pub fn name(&self) -> &'static str {
        match self {
            ZetaRoute::Series => "series",
            ZetaRoute::EulerMaclaurin => "euler-maclaurin",
            ZetaRoute::Eta => "eta",
            ZetaRoute::RiemannSiegel => "riemann-siegel",
            ZetaRoute::Reflection => "reflection",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ZetaValue {
    pub value: ComplexBall,
    pub route: ZetaRoute,
    pub meets_target: bool,
    /// Computed by a method with no error analysis of its own in the bound set.
    pub outside_bound_set: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaRegionProp {
    /// `|zeta| < 2`, `sigma >= 2`.
    RightHalfPlane,
    /// `2 (2pi)^sigma ((1-sigma)^2+t^2)^{1/4-sigma/2}`, `sigma <= -1`, `|t| >= 1/2`.
    LeftHalfPlane,
    /// `1 + t/sigma`, `0 < sigma <= 2`, `t >= 2`.
    CriticalStrip,
    /// `3t`, `sigma >= 1/2`, `t >= 2`.
    SigmaHalf,
}

#[derive(Clone, Debug)]
pub struct ZetaRegionBound {
    pub value: RealBall,
    pub prop: ZetaRegionProp,
}

fn log2_ceil(x: f64) -> u32 {
    if x <= 1.0 {
        0
    } else {
        x.log2().ceil() as u32
    }
}

/// `n^-s` for an integer `n >= 1`.
pub fn power_term(s: &ComplexBall, n: u64) -> ComplexBall {
    let prec = s.prec();
    if n == 1 {
        return ComplexBall::one(prec);
    }
    let ln = RealBall::with_val(prec, n).ln();
    (-&s.mul_real(&ln)).exp()
}

/// Extra bits that keep the phase `t log n` accurate.
fn phase_bits(s: &ComplexBall, n: u64) -> u32 {
    let t = s.im.abs_hi().to_f64();
    log2_ceil(t * (n.max(2) as f64).ln() + 1.0) + log2_ceil(n as f64) + 8
}

/// `k^-s` for `k = 0..=n` (entry 0 unused), using `(pm)^-s = p^-s m^-s`.
fn powers_table(s: &ComplexBall, n: u64) -> Vec<ComplexBall> {
    let prec = s.prec();
    let n = n as usize;
    let mut spf = vec![0u32; n + 1];
    let mut out: Vec<ComplexBall> = Vec::with_capacity(n + 1);
    out.push(ComplexBall::zero(prec));
    for k in 1..=n {
        if k == 1 {
            out.push(ComplexBall::one(prec));
            continue;
        }
        if spf[k] == 0 {
            let mut j = k;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = k as u32;
                }
                j += k;
            }
        }
        let p = spf[k] as usize;
        let v = if p == k {
            power_term(s, k as u64)
        } else {
            &out[p] * &out[k / p]
        };
        out.push(v);
    }
    out
}

/// `sum_{n=a}^{b} w(n) n^-s`, summed in fixed-size chunks so the result does
/// not depend on the thread count.
fn weighted_sum<W>(s: &ComplexBall, a: u64, b: u64, weight: W) -> ComplexBall
where
    W: Fn(u64) -> Option<RealBall> + Sync,
{
    let prec = s.prec();
    if b < a {
        return ComplexBall::zero(prec);
    }
    let table = powers_table(s, b);
    let chunks: Vec<(u64, u64)> = (a..=b)
        .step_by(CHUNK as usize)
        .map(|lo| (lo, (lo + CHUNK - 1).min(b)))
        .collect();
    let sum_chunk = |&(lo, hi): &(u64, u64)| {
        let mut acc = ComplexBall::zero(prec);
        for n in lo..=hi {
            let term = &table[n as usize];
            acc = match weight(n) {
                Some(w) => &acc + &term.mul_real(&w),
                None => &acc + term,
            };
        }
        acc
    };
    let parts: Vec<ComplexBall> = if chunks.len() > 1 {
        chunks.par_iter().map(sum_chunk).collect()
    } else {
        chunks.iter().map(sum_chunk).collect()
    };
    parts
        .iter()
        .fold(ComplexBall::zero(prec), |acc, p| &acc + p)
}

/// `sum_{n=1}^{n_max} n^-s`; the empty sum is exactly zero.
pub fn partial_sum_n(s: &ComplexBall, n_max: u64) -> ComplexBall {
    let prec = s.prec();
    if n_max == 0 {
        return ComplexBall::zero(prec);
    }
    let wp = prec + phase_bits(s, n_max);
    weighted_sum(&s.with_prec(wp), 1, n_max, |_| None).with_prec(prec)
}

/// `floor(x)` for a ball that does not straddle an integer.
pub fn certified_count(x: &RealBall) -> Result<u64> {
    if x.is_negative() {
        return Ok(0);
    }
    let f = x
        .certified_floor()
        .ok_or_else(|| Error::Boundary("cutoff straddles an integer".into()))?;
    if f < 0 {
        return Ok(0);
    }
    f.to_u64()
        .ok_or_else(|| domain("cutoff too large for a partial sum"))
}

/// `sum_{n <= x} n^-s`.
pub fn partial_sum(s: &ComplexBall, x: &RealBall) -> Result<ComplexBall> {
    Ok(partial_sum_n(s, certified_count(x)?))
}

/// `7 |s| x^-sigma`.
pub fn tail_bound_seven(s: &ComplexBall, x: &RealBall) -> RealBall {
    let prec = s.prec();
    &(&s.abs() * &RealBall::from_i64(prec, 7)) * &x.pow(&-&s.re)
}

/// `x^{1-sigma} / (sigma - 1) (1 + (sigma-1)/x)`.
pub fn tail_bound_sigma_gt1(sigma: &RealBall, x: &RealBall) -> RealBall {
    let prec = sigma.prec();
    let u = sigma - &RealBall::one(prec);
    let lead = &x.pow(&-&u) / &u;
    &lead * &(&RealBall::one(prec) + &(&u / x))
}

pub fn zeta_tail_bound(s: &ComplexBall, x: &RealBall) -> Result<ZetaTail> {
    let prec = s.prec();
    if !x.is_positive() {
        return Err(domain("tail bound requires x > 0"));
    }
    let mut best: Option<ZetaTail> = None;
    let seven_ok = s.re.is_nonnegative()
        && s.add_int(-1).abs().lo() >= 2
        && x.certainly_le(&s.abs());
    if seven_ok {
        best = Some(ZetaTail {
            x: x.clone(),
            bound: tail_bound_seven(s, x),
            branch_used: TailBranch::SevenS,
        });
    }
    if RealBall::one(prec).certainly_lt(&s.re) {
        let b = tail_bound_sigma_gt1(&s.re, x);
        if best.as_ref().map_or(true, |c| b.hi() < c.bound.hi()) {
            best = Some(ZetaTail {
                x: x.clone(),
                bound: b,
                branch_used: TailBranch::SigmaGt1,
            });
        }
    }
    best.ok_or_else(|| {
        domain("no tail bound applies: need sigma >= 0, |s-1| >= 2, 0 < x <= |s| or sigma > 1")
    })
}

fn check_pole(s: &ComplexBall) -> Result<()> {
    let d = s.add_int(-1).abs_lo();
    let margin = Float::with_val(64, s.rad()) + (Float::with_val(64, 1) >> 20);
    if d < margin {
        return Err(Error::Pole("zeta has a pole at s = 1".into()));
    }
    Ok(())
}

struct Plan {
    route: ZetaRoute,
    terms: u64,
    log2_err: f64,
}

/// `log2 |Gamma(sigma) / Gamma(s)|` in double precision.
fn log2_gamma_ratio(sigma: f64, t: f64) -> f64 {
    let lg = |x: f64, y: f64| -> f64 {
        // Re log Gamma(x + iy) via Stirling after shifting to x >= 8
        let mut x = x;
        let mut acc = 0.0;
        while x < 8.0 {
            acc -= 0.5 * (x * x + y * y).ln();
            x += 1.0;
        }
        let r = (x * x + y * y).sqrt();
        let th = y.atan2(x);
        acc + (x - 0.5) * r.ln() - y * th - x + 0.5 * (2.0 * std::f64::consts::PI).ln()
    };
    (lg(sigma, 0.0) - lg(sigma, t)) / std::f64::consts::LN_2
}

const LOG2_BORWEIN: f64 = 2.543_106_606_327_224; // log2(3 + sqrt 8)

fn plan(route: ZetaRoute, s: &ComplexBall, target_bits: u32) -> Option<Plan> {
    let sigma = s.re.mid().to_f64();
    let t = s.im.mid().to_f64().abs();
    let sabs = s.abs_hi().to_f64();
    let tb = target_bits as f64 + 1.0;
    match route {
        ZetaRoute::Series => {
            if !s.re.is_positive() || s.re.lo() <= 1 {
                return None;
            }
            let u = s.re.lo().to_f64() - 1.0;
            // x^{-u}/u (1 + u/x) <= 2^-tb
            let x = ((tb - (u.log2()) + 1.0) / u).exp2().max(1.0);
            let terms = x.min(TERM_BUDGET as f64).ceil() as u64;
            let err = (terms as f64).powf(-u) / u * (1.0 + u / terms as f64);
            Some(Plan { route, terms, log2_err: err.log2() })
        }
        ZetaRoute::EulerMaclaurin => {
            if !s.re.is_positive() {
                return None;
            }
            let sig = s.re.lo().to_f64();
            let x = ((tb + (sabs / (2.0 * sig)).log2()) / sig).exp2().max(1.0);
            let terms = x.min(TERM_BUDGET as f64).ceil() as u64;
            let err = sabs / (2.0 * sig) * (terms as f64).powf(-sig);
            Some(Plan { route, terms, log2_err: err.log2() })
        }
        ZetaRoute::Eta => {
            if !s.re.is_positive() {
                return None;
            }
            let sig = s.re.lo().to_f64();
            let w = s.add_int(-1).mul_real(&RealBall::ln2(s.prec()));
            let denom = (&ComplexBall::one(s.prec()) - &(-&w).exp()).abs_lo().to_f64();
            if denom <= 0.0 {
                return None;
            }
            let need = log2_gamma_ratio(sig, t) - denom.log2() + tb + 1.0;
            let n = (need / LOG2_BORWEIN).ceil().max(1.0);
            let terms = n.min(TERM_BUDGET as f64) as u64;
            Some(Plan {
                route,
                terms,
                log2_err: need - tb - terms as f64 * LOG2_BORWEIN - 1.0,
            })
        }
        ZetaRoute::RiemannSiegel => {
            let pi16 = 16.0 * std::f64::consts::PI;
            if !s.re.is_positive() || s.re.hi() >= 1 || s.im.abs_lo().to_f64() < pi16 {
                return None;
            }
            let a = (t / (2.0 * std::f64::consts::PI)).sqrt();
            let rs1 = |x: f64| (1.5 * x).exp2() / 7.0 * (1.1 / a).powi(2);
            let err = a.powf(-sigma) * rs1(sigma) + a.powf(1.0 - 2.0 * sigma) * a.powf(sigma - 1.0) * rs1(1.0 - sigma);
            Some(Plan {
                route,
                terms: 2 * a as u64 + 2,
                log2_err: err.log2(),
            })
        }
        ZetaRoute::Reflection => Some(Plan {
            route,
            terms: 0,
            log2_err: f64::NEG_INFINITY,
        }),
    }
}

fn candidates(s: &ComplexBall) -> Vec<ZetaRoute> {
    use ZetaRoute::*;
    let prec = s.prec();
    let pi16 = &RealBall::pi(prec) * &RealBall::from_i64(prec, 16);
    if s.re.lo() >= Float::with_val(64, 1.1) {
        return vec![Series, Eta, EulerMaclaurin];
    }
    if s.re.is_positive() {
        if s.re.hi() < 1 && s.im.abs_lo() >= pi16.hi() {
            return vec![RiemannSiegel, Eta, EulerMaclaurin];
        }
        let mut v = vec![Eta, EulerMaclaurin];
        if s.re.lo() > 1 {
            v.insert(0, Series);
        }
        return v;
    }
    vec![Reflection]
}

fn output_prec(prec: &Precision, s: &ComplexBall) -> u32 {
    prec.working_bits().max(s.prec()).max(prec.target_bits() + 16)
}

fn working_prec(prec: &Precision, s: &ComplexBall, terms: u64) -> u32 {
    let base = prec.working_bits().max(prec.target_bits() + 16);
    base + log2_ceil(terms as f64) + log2_ceil(s.abs_hi().to_f64()) + 8
}

fn run_series(s: &ComplexBall, n: u64) -> ComplexBall {
    let prec = s.prec();
    let x = RealBall::with_val(prec, n);
    let tail = tail_bound_sigma_gt1(&s.re, &x).hi();
    partial_sum_n(s, n).add_error(&tail)
}

fn run_euler_maclaurin(s: &ComplexBall, n: u64) -> ComplexBall {
    let prec = s.prec();
    let x = RealBall::with_val(prec, n);
    let sum = partial_sum_n(s, n);
    let xs = power_term(s, n);
    // x^{1-s}/(s-1) - x^{-s}/2
    let lead = &xs.mul_real(&x) / &s.add_int(-1);
    let corr = xs.mul_2si(-1);
    let err = (&(&s.abs() * &x.pow(&-&s.re)) / &s.re.mul_2si(1)).hi();
    (&(&sum + &lead) - &corr).add_error(&err)
}

/// Borwein's `eta(s) ~ (1/d_n) sum_{k<n} (-1)^k (d_n - d_k) (k+1)^-s`
/// with `|error| <= Gamma(sigma) / (d_n |Gamma(s)|)`, `sigma > 0`.
pub fn eta_borwein(s: &ComplexBall, n: u64) -> Result<ComplexBall> {
    if !s.re.is_positive() {
        return Err(domain("alternating series needs sigma > 0"));
    }
    let prec = s.prec();
    let n = n.max(1);
    let mut d = Vec::with_capacity(n as usize + 1);
    let mut u = Integer::from(1);
    let mut acc = Integer::from(1);
    d.push(acc.clone());
    for i in 1..=n {
        u *= (n + i - 1) * (n - i + 1) * 4;
        u.div_exact_mut(&Integer::from((2 * i - 1) * (2 * i)));
        acc += &u;
        d.push(acc.clone());
    }
    let dn = &d[n as usize];
    let wp = prec + phase_bits(s, n);
    let sw = s.with_prec(wp);
    let dn_ball = RealBall::from_integer(wp, dn);
    let sum = weighted_sum(&sw, 1, n, |k| {
        let diff = Integer::from(dn - &d[(k - 1) as usize]);
        let mut w = &RealBall::from_integer(wp, &diff) / &dn_ball;
        if (k - 1) % 2 == 1 {
            w = -w;
        }
        Some(w)
    });
    let sigma = ComplexBall::from_real(sw.re.clone());
    let lg_ratio = &log_gamma(&sigma)?.re - &log_gamma(&sw)?.re;
    let err = (&lg_ratio.exp() / &dn_ball).hi();
    Ok(sum.add_error(&err).with_prec(prec))
}

fn run_eta(s: &ComplexBall, n: u64) -> Result<ComplexBall> {
    let prec = s.prec();
    let eta = eta_borwein(s, n)?;
    let w = s.add_int(-1).mul_real(&RealBall::ln2(prec));
    let factor = &ComplexBall::one(prec) - &(-&w).exp();
    Ok(&eta / &factor)
}

fn run_riemann_siegel(s: &ComplexBall, prec: &Precision) -> Result<ComplexBall> {
    let r = r_eval(s, prec)?;
    let refl = (-&s.conj()).add_int(1);
    let r2 = r_eval(&refl, prec)?;
    let c = chi(s)?.value;
    Ok(&r + &(&c * &r2.conj()))
}

/// `sin(z)/z` for `|z| <= 1`.
fn sinc(z: &ComplexBall) -> ComplexBall {
    let prec = z.prec();
    let z2 = z.sqr();
    let zabs = z.abs_hi();
    let mut acc = ComplexBall::one(prec);
    let mut term = ComplexBall::one(prec);
    let mut k: u64 = 1;
    let mut bound = Float::with_val(64, 1);
    loop {
        term = &term * &z2;
        let den = RealBall::with_val(prec, (2 * k) * (2 * k + 1));
        term = &(-&term) / &ComplexBall::from_real(den);
        acc = &acc + &term;
        bound = bound * Float::with_val(64, &zabs * &zabs) / ((2 * k + 2) * (2 * k + 3)) as u32;
        if bound < Float::with_val(64, 1) >> (prec + 8) as i32 || k > 4 * prec as u64 {
            break;
        }
        k += 1;
    }
    acc.add_error(&(bound * 2u32))
}

/// `(e^z - 1)/z` for `|z| <= 1`.
fn exprel(z: &ComplexBall) -> ComplexBall {
    let prec = z.prec();
    let zabs = z.abs_hi();
    let mut acc = ComplexBall::one(prec);
    let mut term = ComplexBall::one(prec);
    let mut k: u64 = 1;
    let mut bound = Float::with_val(64, 1);
    loop {
        term = &(&term * z) / &ComplexBall::from_real(RealBall::with_val(prec, k + 1));
        acc = &acc + &term;
        bound = bound * Float::with_val(64, &zabs) / (k + 2) as u32;
        if bound < Float::with_val(64, 1) >> (prec + 8) as i32 || k > 4 * prec as u64 {
            break;
        }
        k += 1;
    }
    acc.add_error(&(bound * 2u32))
}

fn run_reflection(s: &ComplexBall, prec: &Precision) -> Result<ComplexBall> {
    let p = s.prec();
    let pi = RealBall::pi(p);
    let w = (-s).add_int(1);
    let two_s = s.mul_real(&RealBall::ln2(p)).exp();
    let pi_s1 = s.add_int(-1).mul_real(&pi.ln()).exp();
    let gamma_w = log_gamma(&w)?.exp();
    let pre = &(&two_s * &pi_s1) * &gamma_w;
    let quarter = Float::with_val(64, 0.25);
    if s.abs_hi() < quarter {
        // sin(pi s/2) zeta(1-s) = sin(pi s/2)/(1 - 2^s) eta(1-s)
        let ln2 = RealBall::ln2(p);
        let half_pi_s = s.mul_real(&pi).mul_2si(-1);
        let ratio = &sinc(&half_pi_s) / &exprel(&s.mul_real(&ln2));
        let ratio = ratio.mul_real(&(&pi / &ln2).mul_2si(-1));
        let ratio = -&ratio;
        let eta = eta_borwein(&w, eta_terms(&w, prec.target_bits() as f64 + 8.0))?;
        return Ok(&(&pre * &ratio) * &eta);
    }
    let zw = zeta_eval(&w, prec)?.value.with_prec(p);
    let sin = s.mul_real(&pi).mul_2si(-1).sin();
    Ok(&(&pre * &sin) * &zw)
}

fn eta_terms(w: &ComplexBall, tb: f64) -> u64 {
    let need = log2_gamma_ratio(w.re.lo().to_f64(), w.im.abs_hi().to_f64()) + tb + 1.0;
    ((need / LOG2_BORWEIN).ceil().max(1.0) as u64).min(TERM_BUDGET)
}

/// Evaluates one route, or `None` if the route does not apply to `s`.
pub fn zeta_route(s: &ComplexBall, route: ZetaRoute, prec: &Precision) -> Result<Option<ComplexBall>> {
    check_pole(s)?;
    if s.im.is_negative() {
        return Ok(zeta_route(&s.conj(), route, prec)?.map(|v| v.conj()));
    }
    let Some(pl) = plan(route, s, prec.target_bits()) else {
        return Ok(None);
    };
    let wp = working_prec(prec, s, pl.terms);
    let sw = s.with_prec(wp);
    let v = match route {
        ZetaRoute::Series => run_series(&sw, pl.terms),
        ZetaRoute::EulerMaclaurin => run_euler_maclaurin(&sw, pl.terms),
        ZetaRoute::Eta => run_eta(&sw, pl.terms)?,
        ZetaRoute::RiemannSiegel => run_riemann_siegel(&sw, &prec.with_bits(wp))?,
        ZetaRoute::Reflection => run_reflection(&sw, &prec.with_bits(wp))?,
    };
    Ok(Some(v.with_prec(output_prec(prec, s))))
}

/// Enclosure of `zeta(s)`; see [`ZetaValue::meets_target`].
pub fn zeta_eval(s: &ComplexBall, prec: &Precision) -> Result<ZetaValue> {
    check_pole(s)?;
    if s.im.is_negative() {
        let mut v = zeta_eval(&s.conj(), prec)?;
        v.value = v.value.conj();
        return Ok(v);
    }
    let target = prec.target_abs_error().clone();
    let target_bits = prec.target_bits();
    let mut best: Option<ZetaValue> = None;
    let mut ranked: Vec<Plan> = candidates(s)
        .into_iter()
        .filter_map(|r| plan(r, s, target_bits))
        .collect();
    let first_fit = ranked
        .iter()
        .position(|p| p.log2_err <= -(target_bits as f64));
    if let Some(i) = first_fit {
        let p = ranked.remove(i);
        ranked.insert(0, p);
    } else {
        ranked.sort_by(|a, b| a.log2_err.partial_cmp(&b.log2_err).unwrap_or(std::cmp::Ordering::Equal));
    }
    for p in ranked {
        let Some(v) = zeta_route(s, p.route, prec)? else {
            continue;
        };
        let meets = v.rad() <= target;
        let candidate = ZetaValue {
            value: v,
            route: p.route,
            meets_target: meets,
            outside_bound_set: p.route == ZetaRoute::Eta,
        };
        if meets {
            return Ok(candidate);
        }
        let better = best
            .as_ref()
            .map_or(true, |b| candidate.value.rad() < b.value.rad());
        if better {
            best = Some(candidate);
        }
    }
    best.ok_or_else(|| domain("no zeta route applies"))
}

/// `|zeta| < 2` on `sigma >= 2`.
pub fn zeta_bound_right(prec: u32) -> RealBall {
    RealBall::from_i64(prec, 2)
}

/// `2 (2pi)^sigma ((1-sigma)^2 + t^2)^{1/4 - sigma/2}`.
pub fn zeta_bound_left(sigma: &RealBall, t: &RealBall) -> RealBall {
    let prec = sigma.prec().max(t.prec());
    let u = &RealBall::one(prec) - sigma;
    let q = &u.sqr() + &t.sqr();
    let e = &RealBall::from_ratio(prec, 1, 4) - &sigma.mul_2si(-1);
    let tp = RealBall::pi(prec).mul_2si(1).pow(sigma);
    (&tp * &q.pow(&e)).mul_2si(1)
}

/// `1 + t/sigma`.
pub fn zeta_bound_strip(sigma: &RealBall, t: &RealBall) -> RealBall {
    &RealBall::one(sigma.prec()) + &(t / sigma)
}

/// `3 t`.
pub fn zeta_bound_sigma_half(t: &RealBall) -> RealBall {
    t * &RealBall::from_i64(t.prec(), 3)
}

/// Tightest applicable half-plane or strip bound on `|zeta(s)|`.
pub fn zeta_region_bound(s: &ComplexBall) -> Result<ZetaRegionBound> {
    let prec = s.prec();
    let (sigma, t) = (&s.re, &s.im);
    let r = |n: i64, d: i64| RealBall::from_ratio(prec, n, d);
    let mut found: Vec<ZetaRegionBound> = Vec::new();
    if sigma.lo() >= 2 {
        found.push(ZetaRegionBound {
            value: zeta_bound_right(prec),
            prop: ZetaRegionProp::RightHalfPlane,
        });
    }
    if sigma.hi() <= -1 && t.abs_lo() >= r(1, 2).hi() {
        found.push(ZetaRegionBound {
            value: zeta_bound_left(sigma, t),
            prop: ZetaRegionProp::LeftHalfPlane,
        });
    }
    if sigma.is_positive() && sigma.hi() <= 2 && t.lo() >= 2 {
        found.push(ZetaRegionBound {
            value: zeta_bound_strip(sigma, t),
            prop: ZetaRegionProp::CriticalStrip,
        });
    }
    if sigma.lo() >= r(1, 2).hi() && t.lo() >= 2 {
        found.push(ZetaRegionBound {
            value: zeta_bound_sigma_half(t),
            prop: ZetaRegionProp::SigmaHalf,
        });
    }
    found
        .into_iter()
        .min_by(|a, b| a.value.hi().partial_cmp(&b.value.hi()).unwrap_or(std::cmp::Ordering::Equal))
        .ok_or_else(|| domain("no zeta region bound applies at this point"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::approx;
    use rug::Rational;

    fn c(re: f64, im: f64) -> ComplexBall {
        ComplexBall::from_f64(128, re, im)
    }

    fn p128() -> Precision {
        Precision::bits(128).unwrap()
    }

    #[test]
    fn partial_sum_examples() {
        let s = c(0.3, 7.0);
        let z = partial_sum(&s, &RealBall::from_f64(64, 0.5)).unwrap();
        assert!(z.re.is_exact() && z.im.is_exact() && z.contains_zero());
        let one = partial_sum(&s, &RealBall::from_i64(64, 1)).unwrap();
        assert!(one.re.contains_rational(&Rational::from(1)) && one.re.is_exact());
        let v = partial_sum(&c(2.0, 0.0), &RealBall::from_i64(64, 3)).unwrap();
        assert!(v.re.contains_rational(&Rational::from((49, 36))));
    }

    #[test]
    fn tail_examples() {
        let t = zeta_tail_bound(&c(2.0, 0.0), &RealBall::from_i64(128, 10)).unwrap();
        assert_eq!(t.branch_used, TailBranch::SigmaGt1);
        assert!(t.bound.overlaps(&approx("0.11", 1e-20)));
        let t = zeta_tail_bound(&c(0.5, 10.0), &RealBall::from_i64(128, 10)).unwrap();
        assert_eq!(t.branch_used, TailBranch::SevenS);
        assert!(t.bound.overlaps(&approx("22.1635962786", 1e-9)));
        let t = zeta_tail_bound(&c(3.0, 0.0), &RealBall::from_i64(128, 1)).unwrap();
        assert!(t.bound.overlaps(&approx("1.5", 1e-20)));
        assert!(zeta_tail_bound(&c(0.5, 0.5), &RealBall::from_i64(128, 1)).is_err());
    }

    #[test]
    fn zeta_at_two_and_zero() {
        let v = zeta_eval(&c(2.0, 0.0), &p128()).unwrap();
        assert!(v.meets_target);
        let pi2 = RealBall::pi(128).sqr();
        assert!(v.value.re.overlaps(&(&pi2 / &RealBall::from_i64(128, 6))));
        let z0 = zeta_eval(&c(0.0, 0.0), &p128()).unwrap();
        assert_eq!(z0.route, ZetaRoute::Reflection);
        assert!(z0.value.re.contains_rational(&Rational::from((-1, 2))));
    }

    #[test]
    fn zeta_routes_agree() {
        let s = c(0.7, 23.0);
        let p = Precision::bits(96).unwrap();
        let eta = zeta_route(&s, ZetaRoute::Eta, &p).unwrap().unwrap();
        assert!(eta.re.overlaps(&approx("1.28611858137611420", 1e-16)));
        assert!(eta.im.overlaps(&approx("0.12783239673217078", 1e-16)));
        let em = zeta_route(&s, ZetaRoute::EulerMaclaurin, &p).unwrap().unwrap();
        assert!(em.overlaps(&eta));
        let conj = zeta_eval(&s.conj(), &p).unwrap().value;
        assert!(conj.overlaps(&eta.conj()));
    }

    #[test]
    fn zeta_at_one_half_and_negative_points() {
        let v = zeta_eval(&c(0.5, 0.0), &p128()).unwrap();
        assert!(v.value.re.overlaps(&approx("-1.46035450880958681289", 1e-19)));
        let m = zeta_eval(&c(-1.0, 0.0), &p128()).unwrap();
        assert!(m.value.re.contains_rational(&Rational::from((-1, 12))));
        let m2 = zeta_eval(&c(-2.0, 10.0), &p128()).unwrap();
        let b = zeta_region_bound(&c(-2.0, 10.0)).unwrap();
        assert!(m2.value.abs().hi() < b.value.lo());
    }

    #[test]
    fn pole_is_rejected() {
        assert!(matches!(zeta_eval(&c(1.0, 0.0), &p128()), Err(Error::Pole(_))));
    }

    #[test]
    fn region_bound_examples() {
        let b = zeta_region_bound(&c(3.0, 7.0)).unwrap();
        assert_eq!(b.prop, ZetaRegionProp::RightHalfPlane);
        assert!(b.value.contains_rational(&Rational::from(2)));
        let b = zeta_region_bound(&c(0.25, 50.0)).unwrap();
        assert_eq!(b.prop, ZetaRegionProp::CriticalStrip);
        assert!(b.value.contains_rational(&Rational::from(201)));
        let b = zeta_region_bound(&c(-2.0, 10.0)).unwrap();
        assert_eq!(b.prop, ZetaRegionProp::LeftHalfPlane);
        assert!(b.value.overlaps(&approx("17.8424045190536", 1e-12)));
        assert!(zeta_region_bound(&c(0.0, 0.1)).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(60))]

            #[test]
            fn tail_is_honest(sigma in 0.05f64..6.0, t in 0.5f64..200.0, x in 2.0f64..300.0) {
                let s = ComplexBall::from_f64(64, sigma, t);
                let xb = RealBall::from_f64(64, x);
                let tail = zeta_tail_bound(&s, &xb);
                prop_assume!(tail.is_ok());
                let tail = tail.unwrap();
                let oracle = zeta_eval(&s.with_prec(256), &Precision::bits(256).unwrap()).unwrap().value;
                let gap = (&oracle - &partial_sum(&s.with_prec(256), &xb).unwrap()).abs();
                prop_assert!(gap.lo() <= tail.bound.hi());
            }

            #[test]
            fn region_bound_dominates(sigma in -6.0f64..8.0, t in 1.0f64..3e3) {
                let s = ComplexBall::from_f64(128, sigma, t);
                if let Ok(b) = zeta_region_bound(&s) {
                    let v = zeta_eval(&s, &Precision::bits(128).unwrap()).unwrap().value;
                    prop_assert!(v.abs().certainly_le(&b.value));
                }
            }

            #[test]
            fn routes_agree(sigma in 0.0f64..1.0, t in 60.0f64..1e3) {
                let s = ComplexBall::from_f64(128, sigma, t);
                let prec = Precision::bits(128).unwrap();
                let rs = zeta_route(&s, ZetaRoute::RiemannSiegel, &prec).unwrap().unwrap();
                let eta = zeta_route(&s, ZetaRoute::Eta, &prec).unwrap().unwrap();
                prop_assert!(rs.overlaps(&eta));
            }
        }
    }
}
