//! log Gamma via the Stirling series with an explicit remainder bound.

use std::sync::RwLock;

use rug::{Integer, Rational};

use crate::ball::RealBall;
use crate::complex::ComplexBall;
use crate::error::{domain, Result};

/// Largest number of Stirling terms used by [`log_gamma`].
pub const MAX_TERMS: u32 = 40;

static BERNOULLI: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// `B_m` for any `m >= 0` (with `B_1 = -1/2`).
fn bernoulli_any(m: usize) -> Rational {
    {
        let table = BERNOULLI.read().unwrap_or_else(|e| e.into_inner());
        if m < table.len() {
            return table[m].clone();
        }
    }
    let mut table = BERNOULLI.write().unwrap_or_else(|e| e.into_inner());
    while table.len() <= m {
        let j = table.len();
        if j == 0 {
            table.push(Rational::from(1));
            continue;
        }
        // sum_{k=0}^{j} C(j+1, k) B_k = 0
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (k, b) in table.iter().enumerate() {
            acc += Rational::from(b * &binom);
            binom *= (j + 1 - k) as u64;
            binom /= (k + 1) as u64;
        }
        table.push(-acc / Rational::from(j as u64 + 1));
    }
    table[m].clone()
}

/// Exact Bernoulli number `B_{index}` for even `index >= 2`.
pub fn bernoulli(index: i64) -> Result<Rational> {
    if index < 2 || index % 2 != 0 {
        return Err(domain(format!(
            "Bernoulli index must be even and at least 2, got {index}"
        )));
    }
    Ok(bernoulli_any(index as usize))
}

/// Coefficients of the truncated Stirling series.
#[derive(Clone, Debug)]
pub struct StirlingParams {
    pub k: u32,
    /// `B_2, B_4, ..., B_{2K+2}`.
    pub bernoulli: Vec<Rational>,
}

impl StirlingParams {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(domain("number of Stirling terms must be positive"));
        }
        let bernoulli = (1..=k as i64 + 1)
            .map(|n| bernoulli(2 * n))
            .collect::<Result<Vec<_>>>()?;
        Ok(StirlingParams { k, bernoulli })
    }

    /// `B_{2n} / ((2n-1) 2n)`.
    pub fn coefficient(&self, n: u32) -> Rational {
        let b = &self.bernoulli[(n - 1) as usize];
        let d = (2 * n as u64 - 1) * (2 * n as u64);
        Rational::from(b / d)
    }

    /// `|B_{2K+2}| / ((2K-1)(2K+2)) * (1 + (2K+1)/2 sqrt(pi/K))`.
    pub fn remainder_constant(&self, prec: u32) -> RealBall {
        let k = self.k as i64;
        let b = RealBall::from_rational(prec, &Rational::from(self.bernoulli[self.k as usize].abs_ref()));
        let den = RealBall::from_i64(prec, (2 * k - 1) * (2 * k + 2));
        let root = (&RealBall::pi(prec) / &RealBall::from_i64(prec, k)).sqrt();
        let factor = &RealBall::one(prec) + &(&root * &RealBall::from_ratio(prec, 2 * k + 1, 2));
        &(&b / &den) * &factor
    }
}

#[derive(Clone, Debug)]
pub struct MuResult {
    pub mu: ComplexBall,
    pub remainder_radius: RealBall,
}

/// `sum_{n<=K} B_{2n} / ((2n-1) 2n z^{2n-1})` without the remainder.
pub fn stirling_series(z: &ComplexBall, k: u32) -> Result<ComplexBall> {
    let params = StirlingParams::new(k)?;
    Ok(series(z, &params))
}

fn series(z: &ComplexBall, params: &StirlingParams) -> ComplexBall {
    let prec = z.prec();
    let w = z.recip();
    let w2 = w.sqr();
    let mut acc = ComplexBall::zero(prec);
    for n in (1..=params.k).rev() {
        let c = RealBall::from_rational(prec, &params.coefficient(n));
        acc = (&acc * &w2).add_real(&c);
    }
    &acc * &w
}

/// Stirling correction `mu(z)` for `Re z > 0`, with the remainder folded
/// into the radius.
pub fn stirling_mu(z: &ComplexBall, k: u32) -> Result<MuResult> {
    if !z.is_finite() || !z.re.is_positive() {
        return Err(domain("stirling_mu requires Re z > 0 on the whole ball"));
    }
    let params = StirlingParams::new(k)?;
    let prec = z.prec();
    let s = series(z, &params);
    let zlo = RealBall::exact(z.abs_lo());
    let r = &params.remainder_constant(prec) / &zlo.powi(2 * k + 1);
    let r_hi = r.hi();
    Ok(MuResult {
        mu: s.add_error(&r_hi),
        remainder_radius: RealBall::exact(r_hi),
    })
}

/// `log sqrt(2 pi)`.
pub fn log_sqrt_2pi(prec: u32) -> RealBall {
    RealBall::pi(prec).mul_2si(1).ln().mul_2si(-1)
}

fn log2_remainder_constant(k: u32) -> f64 {
    let b = bernoulli_any(2 * k as usize + 2).to_f64().abs();
    let k = k as f64;
    let c = b / ((2.0 * k - 1.0) * (2.0 * k + 2.0))
        * (1.0 + (2.0 * k + 1.0) / 2.0 * (std::f64::consts::PI / k).sqrt());
    c.log2()
}

/// Smallest modulus at which the `K`-term remainder drops below `2^-bits`.
fn radius_needed(k: u32, bits: u32) -> f64 {
    ((log2_remainder_constant(k) + bits as f64) / (2.0 * k as f64 + 1.0)).exp2()
}

fn plan_shift(z: &ComplexBall, bits: u32) -> u64 {
    let r = (1..=MAX_TERMS)
        .map(|k| radius_needed(k, bits))
        .fold(f64::INFINITY, f64::min);
    let x = z.re.to_f64();
    let y = z.im.to_f64().abs();
    let need_re = (1.0 - x).max(0.0);
    let need_abs = if r > y { (r * r - y * y).sqrt() - x } else { 0.0 };
    need_re.max(need_abs).max(0.0).ceil() as u64
}

fn choose_terms(w: &ComplexBall, bits: u32) -> u32 {
    let lo = w.abs_lo().to_f64().max(1e-300).log2();
    for k in 1..=MAX_TERMS {
        let l = log2_remainder_constant(k) - (2 * k + 1) as f64 * lo;
        if l <= -(bits as f64) {
            return k;
        }
    }
    MAX_TERMS
}

/// The branch of `log Gamma` on `C \ (-inf, 0]` that is real on the
/// positive axis.
pub fn log_gamma(z: &ComplexBall) -> Result<ComplexBall> {
    let prec = z.prec();
    if !z.is_finite() {
        return Err(domain("log_gamma argument is not finite"));
    }
    if z.touches_negative_axis() {
        return Err(domain("log_gamma argument meets the cut (-inf, 0]"));
    }
    let mag = z.abs_hi().to_f64().max(1.0).log2().ceil() as u32;
    let wp = prec + 12 + mag;
    let z = z.with_prec(wp);
    let bits = wp + 4;
    let m = plan_shift(&z, bits);
    let w = z.add_int(m as i64);
    let k = choose_terms(&w, bits);
    let mu = stirling_mu(&w, k)?.mu;
    let half = RealBall::from_ratio(wp, 1, 2);
    let main = &(&w.add_real(&-&half) * &w.ln()) - &w;
    let mut out = (&main + &mu).add_real(&log_sqrt_2pi(wp));
    for j in 0..m {
        out = &out - &z.add_int(j as i64).ln();
    }
    Ok(out.with_prec(prec))
}

/// `Gamma(z) = exp(log Gamma(z))` off the cut.
pub fn gamma(z: &ComplexBall) -> Result<ComplexBall> {
    Ok(log_gamma(z)?.exp())
}

/// Two-sided bound `2 e^-sigma E < |Gamma(sigma+it)| < 3 E` with
/// `E = e^{-pi|t|/2} (sigma^2+t^2)^{sigma/2-1/4}`, valid for `sigma > 0`
/// and `|s| >= 1`.
pub fn gamma_magnitude_bounds(sigma: &RealBall, t: &RealBall) -> Result<(RealBall, RealBall)> {
    if !sigma.is_positive() {
        return Err(domain("gamma_magnitude_bounds requires sigma > 0"));
    }
    let prec = sigma.prec().max(t.prec());
    let q = &sigma.sqr() + &t.sqr();
    if q.lo() < 1 {
        return Err(domain("gamma_magnitude_bounds requires |s| >= 1"));
    }
    let e = &sigma.mul_2si(-1) - &RealBall::from_ratio(prec, 1, 4);
    let growth = q.pow(&e);
    let decay = (-&(&RealBall::pi(prec) * &t.abs()).mul_2si(-1)).exp();
    let core = &growth * &decay;
    let lower = &(&(-sigma).exp() * &core) * &RealBall::from_i64(prec, 2);
    let upper = &core * &RealBall::from_i64(prec, 3);
    Ok((lower, upper))
}
