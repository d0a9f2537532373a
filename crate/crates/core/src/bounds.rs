//! Registry of explicit inequalities and randomized verification sweeps.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use rug::float::Round;
use rug::Float;
use serde::Serialize;

use crate::ball::RealBall;
use crate::chi::{chi, chi_bound_critical, chi_bound_growth, chi_bound_left, chi_bound_ratio_form, theta, theta_growth_bound};
use crate::complex::ComplexBall;
use crate::error::{domain, Error, Result};
use crate::gamma::{gamma_magnitude_bounds, log_gamma};
use crate::precision::Precision;
use crate::region::{Containment, Region};
use crate::rs::{c0_cap, c1_cap, r_bound_left, r_bound_minus_one, r_bound_right, r_eval, r_main, rs1_bound, rs_a, rs_remainder, rs_terms};
use crate::zeta::{partial_sum, tail_bound_seven, tail_bound_sigma_gt1, zeta_bound_left, zeta_bound_right, zeta_bound_sigma_half, zeta_bound_strip, zeta_eval};

/// Enclosure-valued side of an inequality `lhs <= rhs`.
pub type Evaluator = fn(&ComplexBall, &Precision) -> Result<RealBall>;

/// `|s - center| >= radius`.
#[derive(Clone, Debug)]
pub struct Exclusion {
    pub center: i64,
    pub radius: RealBall,
}

impl Exclusion {
    pub fn contains(&self, s: &ComplexBall) -> Containment {
        let d = s.add_int(-self.center);
        if d.abs_lo() >= self.radius.hi() {
            Containment::Inside
        } else if d.abs_hi() < self.radius.lo() {
            Containment::Outside
        } else {
            Containment::Uncertain
        }
    }
}

/// Sampling box used where a region is unbounded.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Caps {
    pub sigma: (f64, f64),
    pub t: (f64, f64),
    pub t_log_uniform: bool,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            sigma: (-20.0, 20.0),
            t: (0.5, 1e4),
            t_log_uniform: true,
        }
    }
}

#[derive(Clone)]
pub struct BoundCase {
    pub id: &'static str,
    pub anchor: &'static str,
    pub formula: &'static str,
    pub region: Region,
    pub exclusion: Option<Exclusion>,
    pub caps: Caps,
    pub lhs: Evaluator,
    pub rhs: Evaluator,
}

impl std::fmt::Debug for BoundCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundCase")
            .field("id", &self.id)
            .field("region", &self.region.to_string())
            .finish()
    }
}

impl BoundCase {
    /// Certified membership of `s` in the hypotheses of the case.
    pub fn contains(&self, s: &ComplexBall) -> Containment {
        let r = self.region.contains(s);
        match (&self.exclusion, r) {
            (_, Containment::Outside) | (None, _) => r,
            (Some(e), _) => match (r, e.contains(s)) {
                (_, Containment::Outside) => Containment::Outside,
                (Containment::Inside, Containment::Inside) => Containment::Inside,
                _ => Containment::Uncertain,
            },
        }
    }

    pub fn region_text(&self) -> String {
        match &self.exclusion {
            None => self.region.to_string(),
            Some(e) => {
                let c = if e.center == 0 { "s".to_string() } else { format!("s - {}", e.center) };
                format!("{}, |{c}| >= {}", self.region, fmt_sig(e.radius.mid(), 10))
            }
        }
    }
}

fn b(v: f64) -> RealBall {
    RealBall::from_f64(64, v)
}

fn pi_times(k: i64) -> RealBall {
    &RealBall::pi(64) * &RealBall::from_i64(64, k)
}

fn gamma_abs(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(log_gamma(s)?.re.exp())
}

fn gamma_lower(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(gamma_magnitude_bounds(&s.re, &s.im)?.0)
}

fn gamma_upper(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(gamma_magnitude_bounds(&s.re, &s.im)?.1)
}

fn chi_abs(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(chi(s)?.value.abs())
}

fn chi_growth(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(chi_bound_growth(&s.re, &s.im))
}

fn chi_critical(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(chi_bound_critical(&s.re, &s.im))
}

fn chi_ratio(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(chi_bound_ratio_form(&s.re, &s.im))
}

fn chi_left(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(chi_bound_left(&s.re, &s.im))
}

fn theta_abs(t: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(theta(t)?.value.abs())
}

fn theta_bound(t: &ComplexBall, _: &Precision) -> Result<RealBall> {
    theta_growth_bound(t)
}

fn zeta_abs(s: &ComplexBall, p: &Precision) -> Result<RealBall> {
    Ok(zeta_eval(s, p)?.value.abs())
}

fn zeta_right(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(zeta_bound_right(s.prec()))
}

fn zeta_left(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(zeta_bound_left(&s.re, &s.im.abs()))
}

fn zeta_strip(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(zeta_bound_strip(&s.re, &s.im))
}

fn zeta_half(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(zeta_bound_sigma_half(&s.im))
}

fn rs_diff(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(rs_remainder(s)?.abs())
}

fn t_over_2pi(s: &ComplexBall) -> RealBall {
    &s.im / &RealBall::pi(s.prec()).mul_2si(1)
}

fn thm51_strip(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(t_over_2pi(s).pow(&-&s.re.mul_2si(-1)))
}

fn thm51_right(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(t_over_2pi(s).sqrt().recip())
}

fn c0_abs(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(rs_terms(s)?.c0.abs())
}

fn c0_bound(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(c0_cap(s.prec()))
}

fn c1_abs(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(rs_terms(s)?.c1.abs())
}

fn c1_bound(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(c1_cap(&s.re))
}

fn reflected(s: &ComplexBall) -> ComplexBall {
    (-&s.conj()).add_int(1)
}

/// `|zeta(s) - M(s) - chi(s) conj M(1 - conj s)|` with `M` the expansion without `RS1`.
fn rs1_residual(s: &ComplexBall, p: &Precision) -> Result<RealBall> {
    let z = zeta_eval(s, p)?.value;
    let m = r_main(s)?;
    let m2 = r_main(&reflected(s))?;
    let c = chi(s)?.value;
    Ok((&(&z - &m) - &(&c * &m2.conj())).abs())
}

/// `a^-sigma RS1(sigma) + |chi(s)| a^{sigma-1} RS1(1-sigma)`.
fn rs1_budget(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    let prec = s.prec();
    let a = rs_a(&s.im);
    let la = a.ln();
    let one = RealBall::one(prec);
    let first = &(-&(&s.re * &la)).exp() * &rs1_bound(&s.re, &a);
    let sig2 = &one - &s.re;
    let second = &(&(-&(&sig2 * &la)).exp() * &rs1_bound(&sig2, &a)) * &chi(s)?.value.abs();
    Ok(&first + &second)
}

fn r_minus_one(s: &ComplexBall, p: &Precision) -> Result<RealBall> {
    Ok(r_eval(s, p)?.add_int(-1).abs())
}

fn r_minus_one_bound(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(r_bound_minus_one(&s.re, &s.im))
}

fn r_abs(s: &ComplexBall, p: &Precision) -> Result<RealBall> {
    Ok(r_eval(s, p)?.abs())
}

fn r_right(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(r_bound_right(&s.im))
}

fn r_left(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(r_bound_left(&s.re, &s.im))
}

/// Deterministic cutoff `0 < x <= |s|` derived from the sample point.
pub fn tail_cutoff(s: &ComplexBall) -> RealBall {
    let prec = s.prec();
    let bits = Float::with_val(prec, s.im.mid() * 4096u32).to_integer().unwrap_or_default();
    let k = (bits.mod_u(16) + 1) as i64;
    let m = Float::with_val(prec, s.abs_lo() * k) >> 4u32;
    let q = Float::with_val(prec, &m * 256u32).floor() >> 8u32;
    let min = Float::with_val(prec, 1) >> 8u32;
    RealBall::exact(if q < min { min } else { q })
}

fn tail_diff(s: &ComplexBall, p: &Precision) -> Result<RealBall> {
    let x = tail_cutoff(s);
    Ok((&zeta_eval(s, p)?.value - &partial_sum(s, &x)?).abs())
}

fn tail_seven(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(tail_bound_seven(s, &tail_cutoff(s)))
}

fn tail_gt1(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(tail_bound_sigma_gt1(&s.re, &tail_cutoff(s)))
}

fn sqrt_s_bound(s: &ComplexBall, _: &Precision) -> Result<RealBall> {
    Ok(s.abs().sqrt().mul_2si(1))
}

fn build_registry() -> Vec<BoundCase> {
    let caps = Caps::default();
    let right_half = Region::plane().sigma_gt(b(0.0));
    let upper = |r: Region| r.t_gt(b(0.5));
    vec![
        BoundCase {
            id: "prop2.2-gamma-sandwich-lower",
            anchor: "2 e^-sigma e^{-pi|t|/2} (sigma^2+t^2)^{sigma/2-1/4} < |Gamma(sigma+it)| for sigma > 0, |s| >= 1",
            formula: "2 e^-sigma e^{-pi|t|/2} (sigma^2+t^2)^{sigma/2-1/4} <= |Gamma(s)|",
            region: right_half.clone(),
            exclusion: Some(Exclusion { center: 0, radius: b(1.0) }),
            caps: Caps { sigma: (0.0, 30.0), t: (-1e3, 1e3), t_log_uniform: false },
            lhs: gamma_lower,
            rhs: gamma_abs,
        },
        BoundCase {
            id: "prop2.2-gamma-sandwich-upper",
            anchor: "|Gamma(sigma+it)| < 3 e^{-pi|t|/2} (sigma^2+t^2)^{sigma/2-1/4} for sigma > 0, |s| >= 1",
            formula: "|Gamma(s)| <= 3 e^{-pi|t|/2} (sigma^2+t^2)^{sigma/2-1/4}",
            region: right_half.clone(),
            exclusion: Some(Exclusion { center: 0, radius: b(1.0) }),
            caps: Caps { sigma: (0.0, 30.0), t: (-1e3, 1e3), t_log_uniform: false },
            lhs: gamma_abs,
            rhs: gamma_upper,
        },
        BoundCase {
            id: "prop2.3-chi-growth",
            anchor: "|chi(sigma+it)| <= (2 pi e)^sigma |s|^{1/2-sigma} for sigma > 0, t > 1/2",
            formula: "|chi(s)| <= (2 pi e)^sigma |s|^{1/2-sigma}",
            region: upper(right_half.clone()),
            exclusion: None,
            caps,
            lhs: chi_abs,
            rhs: chi_growth,
        },
        BoundCase {
            id: "prop2.3-chi-critical",
            anchor: "|chi(sigma+it)| <= (sigma^2+t^2)^{1/4} for sigma > 0, t > 1/2, |s| >= 2 pi e",
            formula: "|chi(s)| <= (sigma^2+t^2)^{1/4}",
            region: upper(right_half.clone()),
            exclusion: Some(Exclusion {
                center: 0,
                radius: &pi_times(2) * &RealBall::one(64).exp(),
            }),
            caps,
            lhs: chi_abs,
            rhs: chi_critical,
        },
        BoundCase {
            id: "prop2.3-chi-ratio-form",
            anchor: "|chi(s)| <= (sigma^2+t^2)^{1/4} (4 pi^2 e^2/(sigma^2+t^2))^{sigma/2} for sigma > 0, t > 1/2",
            formula: "|chi(s)| <= (sigma^2+t^2)^{1/4} (4 pi^2 e^2/(sigma^2+t^2))^{sigma/2}",
            region: upper(right_half.clone()),
            exclusion: None,
            caps,
            lhs: chi_abs,
            rhs: chi_ratio,
        },
        BoundCase {
            id: "prop2.4-chi-left",
            anchor: "|chi(sigma+it)| <= 6/(2 pi)^{1-sigma} ((1-sigma)^2+t^2)^{1/4-sigma/2} for sigma <= 0, t >= 1/2",
            formula: "|chi(s)| <= 6/(2 pi)^{1-sigma} ((1-sigma)^2+t^2)^{1/4-sigma/2}",
            region: Region::plane().sigma_le(b(0.0)).t_ge(b(0.5)),
            exclusion: None,
            caps,
            lhs: chi_abs,
            rhs: chi_left,
        },
        BoundCase {
            id: "prop3.1-theta-growth",
            anchor: "|theta(t)| <= 2|t| log|t| for complex t with |t| >= 4, |Re t| >= 1 (sampled on Re t >= 1; theta is odd)",
            formula: "|theta(t)| <= 2 |t| log |t|, coordinates (Re t, Im t)",
            region: Region::plane().sigma_ge(b(1.0)),
            exclusion: Some(Exclusion { center: 0, radius: b(4.0) }),
            caps: Caps { sigma: (1.0, 1e3), t: (-1e3, 1e3), t_log_uniform: false },
            lhs: theta_abs,
            rhs: theta_bound,
        },
        BoundCase {
            id: "prop4.1-right-halfplane",
            anchor: "|zeta(sigma+it)| < 2 for sigma >= 2",
            formula: "|zeta(s)| <= 2",
            region: Region::plane().sigma_ge(b(2.0)),
            exclusion: None,
            caps,
            lhs: zeta_abs,
            rhs: zeta_right,
        },
        BoundCase {
            id: "prop4.2-left-halfplane",
            anchor: "|zeta(sigma+it)| <= 2 (2 pi)^sigma ((1-sigma)^2+t^2)^{1/4-sigma/2} for sigma <= -1, |t| >= 1/2 (sampled on t >= 1/2; conjugate symmetry covers t <= -1/2)",
            formula: "|zeta(s)| <= 2 (2 pi)^sigma ((1-sigma)^2+t^2)^{1/4-sigma/2}",
            region: Region::plane().sigma_le(b(-1.0)).t_ge(b(0.5)).mirrored(),
            exclusion: None,
            caps,
            lhs: zeta_abs,
            rhs: zeta_left,
        },
        BoundCase {
            id: "prop4.3-critical-strip",
            anchor: "|zeta(s)| <= 1 + t/sigma for 0 < sigma <= 2, t >= 2",
            formula: "|zeta(s)| <= 1 + t/sigma",
            region: Region::plane().sigma_gt(b(0.0)).sigma_le(b(2.0)).t_ge(b(2.0)),
            exclusion: None,
            caps,
            lhs: zeta_abs,
            rhs: zeta_strip,
        },
        BoundCase {
            id: "prop4.4-sigma-half",
            anchor: "|zeta(sigma+it)| <= 3t for sigma >= 1/2, t >= 2",
            formula: "|zeta(s)| <= 3t",
            region: Region::plane().sigma_ge(b(0.5)).t_ge(b(2.0)),
            exclusion: None,
            caps,
            lhs: zeta_abs,
            rhs: zeta_half,
        },
        BoundCase {
            id: "thm5.1-strip",
            anchor: "|R(s) - sum_{n <= sqrt(t/2pi)} n^-s| <= (t/2pi)^{-sigma/2} for 0 <= sigma <= 1, t >= 3 pi",
            formula: "|R(s) - sum_{n<=a} n^-s| <= (t/2pi)^{-sigma/2}",
            region: Region::plane().sigma_ge(b(0.0)).sigma_le(b(1.0)).t_ge(pi_times(3)),
            exclusion: None,
            caps,
            lhs: rs_diff,
            rhs: thm51_strip,
        },
        BoundCase {
            id: "thm5.1-right",
            anchor: "|R(s) - sum_{n <= sqrt(t/2pi)} n^-s| <= (t/2pi)^{-1/2} for sigma >= 1, t >= 16 pi",
            formula: "|R(s) - sum_{n<=a} n^-s| <= (t/2pi)^{-1/2}",
            region: Region::plane().sigma_ge(b(1.0)).t_ge(pi_times(16)),
            exclusion: None,
            caps,
            lhs: rs_diff,
            rhs: thm51_right,
        },
        BoundCase {
            id: "rs-c0-cap",
            anchor: "|C0(p)| = |F(p)| <= 1/2 for t > 0, sigma > 0",
            formula: "|C0| <= 1/2",
            region: Region::plane().sigma_gt(b(0.0)).t_gt(b(0.0)),
            exclusion: None,
            caps,
            lhs: c0_abs,
            rhs: c0_bound,
        },
        BoundCase {
            id: "rs-c1-cap",
            anchor: "|C1(p)| <= 1/(6 pi) + |sigma - 1/2|/(2 pi) for t > 0, sigma > 0",
            formula: "|C1| <= 1/(6 pi) + |sigma - 1/2|/(2 pi)",
            region: Region::plane().sigma_gt(b(0.0)).t_gt(b(0.0)),
            exclusion: None,
            caps,
            lhs: c1_abs,
            rhs: c1_bound,
        },
        BoundCase {
            id: "rs-rs1-cap",
            anchor: "|RS1| <= (1/7) 2^{3 sigma/2} (1.1/a)^2, checked through zeta(s) = R(s) + chi(s) conj R(1 - conj s) for 0 <= sigma <= 1, t >= 16 pi",
            formula: "|zeta(s) - M(s) - chi(s) conj M(1-conj s)| <= a^-sigma RS1(sigma) + |chi(s)| a^{sigma-1} RS1(1-sigma), M = main sum + C0 + C1/a terms",
            region: Region::plane().sigma_ge(b(0.0)).sigma_le(b(1.0)).t_ge(pi_times(16)),
            exclusion: None,
            caps,
            lhs: rs1_residual,
            rhs: rs1_budget,
        },
        BoundCase {
            id: "prop5.2-r-minus-one",
            anchor: "|R(s) - 1| <= 3/2^sigma + (2 pi/t)^{min(sigma,1)/2} for sigma >= 2, t > 16 pi",
            formula: "|R(s) - 1| <= 3/2^sigma + (2 pi/t)^{min(sigma,1)/2}",
            region: Region::plane().sigma_ge(b(2.0)).t_gt(pi_times(16)),
            exclusion: None,
            caps,
            lhs: r_minus_one,
            rhs: r_minus_one_bound,
        },
        BoundCase {
            id: "prop5.3-r-right",
            anchor: "|R(sigma+it)| <= 2 sqrt(t/2pi) for sigma > 0, t > 16 pi",
            formula: "|R(s)| <= 2 sqrt(t/2pi)",
            region: Region::plane().sigma_gt(b(0.0)).t_gt(pi_times(16)),
            exclusion: None,
            caps,
            lhs: r_abs,
            rhs: r_right,
        },
        BoundCase {
            id: "prop5.4-r-left",
            anchor: "|R(sigma+it)| <= 19 t/(2 pi)^{1-sigma} ((1-sigma)^2+t^2)^{1/4-sigma/2} for sigma <= 0, t >= 16 pi",
            formula: "|R(s)| <= 19 t/(2 pi)^{1-sigma} ((1-sigma)^2+t^2)^{1/4-sigma/2}",
            region: Region::plane().sigma_le(b(0.0)).t_ge(pi_times(16)),
            exclusion: None,
            caps,
            lhs: r_abs,
            rhs: r_left,
        },
        BoundCase {
            id: "prop5.5-zeta-tail",
            anchor: "|zeta(s) - sum_{n <= x} n^-s| <= 7|s| x^-sigma for sigma >= 0, |s-1| >= 2, 0 < x <= |s|",
            formula: "|zeta(s) - sum_{n<=x} n^-s| <= 7 |s| x^-sigma, x a point-dependent cutoff in (0, |s|]",
            region: Region::plane().sigma_ge(b(0.0)),
            exclusion: Some(Exclusion { center: 1, radius: b(2.0) }),
            caps,
            lhs: tail_diff,
            rhs: tail_seven,
        },
        BoundCase {
            id: "prop5.5-zeta-tail-sigma-gt1",
            anchor: "|zeta(s) - sum_{n <= x} n^-s| <= x^{1-sigma}/(sigma-1) (1 + (sigma-1)/x) for sigma > 1",
            formula: "|zeta(s) - sum_{n<=x} n^-s| <= x^{1-sigma}/(sigma-1) (1 + (sigma-1)/x), x a point-dependent cutoff in (0, |s|]",
            region: Region::plane().sigma_gt(b(1.0)),
            exclusion: None,
            caps,
            lhs: tail_diff,
            rhs: tail_gt1,
        },
        BoundCase {
            id: "claim-zeta-sqrt-s",
            anchor: "|zeta(s)| <= 2|s|^{1/2} for s in [0,1/2] x [sqrt 3, 16 pi]",
            formula: "|zeta(s)| <= 2 |s|^{1/2}",
            region: Region::plane()
                .sigma_ge(b(0.0))
                .sigma_le(b(0.5))
                .t_ge(RealBall::from_i64(64, 3).sqrt())
                .t_le(pi_times(16)),
            exclusion: None,
            caps,
            lhs: zeta_abs,
            rhs: sqrt_s_bound,
        },
    ]
}

/// All registered cases, in a fixed order.
pub fn registry() -> &'static [BoundCase] {
    static REGISTRY: OnceLock<Vec<BoundCase>> = OnceLock::new();
    REGISTRY.get_or_init(build_registry)
}

/// Cases whose id equals `id` or extends it at a `-` boundary.
pub fn lookup(id: &str) -> Result<Vec<&'static BoundCase>> {
    let reg = registry();
    if let Some(c) = reg.iter().find(|c| c.id == id) {
        return Ok(vec![c]);
    }
    let found: Vec<_> = reg
        .iter()
        .filter(|c| {
            c.id.strip_prefix(id)
                .is_some_and(|rest| rest.starts_with('-'))
        })
        .collect();
    if found.is_empty() {
        return Err(Error::NotFound(format!("no bound case matches '{id}'")));
    }
    Ok(found)
}

/// Exact sample point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point {
    pub sigma: f64,
    pub t: f64,
}

impl Point {
    pub fn to_ball(self, prec: u32) -> ComplexBall {
        ComplexBall::from_f64(prec, self.sigma, self.t)
    }
}

const EDGE_FRACTION: f64 = 0.1;
const EDGE_WIDTH: f64 = 1e-3;
const QUANTUM: f64 = 4294967296.0;
const MAX_ATTEMPTS: usize = 10_000;

fn quantize(x: f64) -> f64 {
    (x * QUANTUM).round() / QUANTUM
}

struct Sampler<'a> {
    region: &'a Region,
    exclusion: Option<&'a Exclusion>,
    sigma: (f64, f64),
    t: (f64, f64),
    t_log: bool,
    edges: Vec<(bool, f64, f64)>,
}

impl<'a> Sampler<'a> {
    fn new(region: &'a Region, exclusion: Option<&'a Exclusion>, caps: &Caps) -> Result<Self> {
        let lo = |e: &Option<crate::region::Edge>, cap: f64| e.as_ref().map_or(cap, |e| e.value.to_f64().max(cap));
        let hi = |e: &Option<crate::region::Edge>, cap: f64| e.as_ref().map_or(cap, |e| e.value.to_f64().min(cap));
        let sigma = (lo(&region.sigma_lo, caps.sigma.0), hi(&region.sigma_hi, caps.sigma.1));
        let mut t = (lo(&region.t_lo, caps.t.0), hi(&region.t_hi, caps.t.1));
        let t_log = caps.t_log_uniform;
        if t_log && t.0 <= 0.0 {
            t.0 = caps.t.0.max(f64::MIN_POSITIVE);
        }
        if !(sigma.0 < sigma.1 && t.0 < t.1) {
            return Err(domain("region is empty within the sampling caps"));
        }
        // (is_sigma_axis, edge value, inward direction)
        let mut edges = Vec::new();
        let mut push = |e: &Option<crate::region::Edge>, axis: bool, dir: f64, range: (f64, f64)| {
            if let Some(e) = e {
                let v = e.value.to_f64();
                if v >= range.0 && v <= range.1 {
                    edges.push((axis, v, dir));
                }
            }
        };
        push(&region.sigma_lo, true, 1.0, sigma);
        push(&region.sigma_hi, true, -1.0, sigma);
        push(&region.t_lo, false, 1.0, t);
        push(&region.t_hi, false, -1.0, t);
        Ok(Sampler {
            region,
            exclusion,
            sigma,
            t,
            t_log,
            edges,
        })
    }

    fn draw_t(&self, rng: &mut ChaCha20Rng) -> f64 {
        if self.t_log {
            let (a, b) = (self.t.0.ln(), self.t.1.ln());
            rng.gen_range(a..b).exp()
        } else {
            rng.gen_range(self.t.0..self.t.1)
        }
    }

    fn draw(&self, rng: &mut ChaCha20Rng) -> Point {
        let mut sigma = rng.gen_range(self.sigma.0..self.sigma.1);
        let mut t = self.draw_t(rng);
        if !self.edges.is_empty() && rng.gen_bool(EDGE_FRACTION) {
            let (axis, v, dir) = self.edges[rng.gen_range(0..self.edges.len())];
            let d = EDGE_WIDTH * (1.0 - rng.gen::<f64>());
            if axis {
                sigma = v + dir * d;
            } else {
                t = v + dir * d;
            }
        }
        Point {
            sigma: quantize(sigma),
            t: quantize(t),
        }
    }

    fn accepts(&self, p: Point) -> bool {
        let s = p.to_ball(64);
        if !(p.sigma > self.sigma.0 - EDGE_WIDTH && p.sigma < self.sigma.1 + EDGE_WIDTH) {
            return false;
        }
        let strict_interior = |e: &Option<crate::region::Edge>, x: f64| {
            e.as_ref().map_or(true, |e| x != e.value.to_f64())
        };
        if !(strict_interior(&self.region.sigma_lo, p.sigma)
            && strict_interior(&self.region.sigma_hi, p.sigma)
            && strict_interior(&self.region.t_lo, p.t)
            && strict_interior(&self.region.t_hi, p.t))
        {
            return false;
        }
        self.region.contains(&s) == Containment::Inside
            && self.exclusion.map_or(true, |e| e.contains(&s) == Containment::Inside)
    }

    fn sample(&self, n: usize, rng: &mut ChaCha20Rng) -> Result<Vec<Point>> {
        if n == 0 {
            return Err(domain("sample count must be at least 1"));
        }
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let mut found = None;
            for _ in 0..MAX_ATTEMPTS {
                let p = self.draw(rng);
                if self.accepts(p) {
                    found = Some(p);
                    break;
                }
            }
            out.push(found.ok_or_else(|| domain("could not draw an interior point; region may be empty"))?);
        }
        Ok(out)
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `n` reproducible points strictly inside `r`, within the default caps.
pub fn sample_region(r: &Region, n: usize, seed: u64) -> Result<Vec<Point>> {
    sample_region_with(r, n, seed, &Caps::default())
}

pub fn sample_region_with(r: &Region, n: usize, seed: u64, caps: &Caps) -> Result<Vec<Point>> {
    Sampler::new(r, None, caps)?.sample(n, &mut rng_for(seed, 0))
}

/// Sample points for a registered case.
pub fn sample_case(case: &BoundCase, n: usize, seed: u64) -> Result<Vec<Point>> {
    Sampler::new(&case.region, case.exclusion.as_ref(), &case.caps)?.sample(n, &mut rng_for(seed, stream_of(case)))
}

fn stream_of(case: &BoundCase) -> u64 {
    registry().iter().position(|c| c.id == case.id).unwrap_or(0) as u64
}

/// `{mid, rad}` pair with decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallRepr {
    pub mid: String,
    pub rad: String,
}

pub fn fmt_sig(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits))
}

fn fmt_up(x: &Float) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix_round(10, Some(6), Round::Up)
}

impl BallRepr {
    pub fn of(b: &RealBall) -> Self {
        BallRepr {
            mid: fmt_sig(b.mid(), 20),
            rad: fmt_up(b.rad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub sigma: f64,
    pub t: f64,
    pub lhs: BallRepr,
    pub rhs: BallRepr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleStatus {
    Pass,
    Violation,
    Skipped,
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleRow {
    pub sigma: f64,
    pub t: f64,
    pub lhs_hi: String,
    pub rhs_lo: String,
    pub margin: String,
    pub prec_bits: u32,
    pub status: SampleStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub bound_id: String,
    pub anchor: String,
    pub region: String,
    pub samples: usize,
    pub seed: u64,
    pub stream: u64,
    pub prec_bits: u32,
    pub target_error: String,
    pub min_margin: Option<BallRepr>,
    pub median_margin: Option<BallRepr>,
    pub violations: Vec<Violation>,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    #[serde(skip)]
    pub rows: Vec<SampleRow>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

enum Outcome {
    Pass { margin: RealBall, lhs: RealBall, rhs: RealBall, bits: u32 },
    Violation { lhs: RealBall, rhs: RealBall, bits: u32 },
    Skipped { lhs: Option<RealBall>, rhs: Option<RealBall>, bits: u32 },
}

const RETRIES: u32 = 3;
const RELATIVE_BITS: i32 = 24;

/// Accuracy request scaled to the size of the bound, tightened on every retry.
fn relative_target(prec: &Precision, bits: u32, rhs: &RealBall, attempt: u32) -> Precision {
    let base = prec.with_bits(bits);
    let r = rhs.lo();
    if !r.is_finite() || r <= 0 {
        return base;
    }
    let shift = RELATIVE_BITS * (attempt as i32 + 1);
    let t = Float::with_val(64, &r) >> shift;
    if t.is_zero() || !t.is_normal() {
        return base;
    }
    base.with_target(t).unwrap_or(base)
}

/// Evaluates both sides at `p`, doubling the working precision on inconclusive results.
fn check_point(case: &BoundCase, p: Point, prec: &Precision) -> Outcome {
    let mut bits = prec.working_bits();
    let mut last = (None, None);
    for attempt in 0..=RETRIES {
        if attempt > 0 {
            bits *= 2;
        }
        let s = p.to_ball(bits);
        let rhs = (case.rhs)(&s, &prec.with_bits(bits));
        let pr = match &rhs {
            Ok(r) => relative_target(prec, bits, r, attempt),
            Err(_) => prec.with_bits(bits),
        };
        let lhs = (case.lhs)(&s, &pr);
        if let (Ok(l), Ok(r)) = (&lhs, &rhs) {
            if l.is_finite() && r.is_finite() {
                if l.hi() <= r.lo() {
                    return Outcome::Pass {
                        margin: r - l,
                        lhs: l.clone(),
                        rhs: r.clone(),
                        bits,
                    };
                }
                if l.lo() > r.hi() {
                    return Outcome::Violation {
                        lhs: l.clone(),
                        rhs: r.clone(),
                        bits,
                    };
                }
            }
        }
        last = (lhs.ok(), rhs.ok());
    }
    Outcome::Skipped {
        lhs: last.0,
        rhs: last.1,
        bits,
    }
}

fn margin_key(m: &RealBall) -> Float {
    m.lo()
}

/// Runs the sweep for one case.
pub fn verify_case(case: &BoundCase, n: usize, seed: u64, prec: &Precision) -> Result<VerificationReport> {
    let points = sample_case(case, n, seed)?;
    Ok(verify_points(case, &points, seed, prec))
}

/// Checks `case` at the given points; `seed` is only recorded in the report.
pub fn verify_points(case: &BoundCase, points: &[Point], seed: u64, prec: &Precision) -> VerificationReport {
    let n = points.len();
    let outcomes: Vec<Outcome> = points.par_iter().map(|p| check_point(case, *p, prec)).collect();
    let mut margins = Vec::new();
    let mut violations = Vec::new();
    let mut rows = Vec::with_capacity(n);
    let mut skipped = 0;
    for (p, o) in points.iter().zip(&outcomes) {
        let row = |lhs: Option<&RealBall>, rhs: Option<&RealBall>, margin: Option<&RealBall>, bits, status| SampleRow {
            sigma: p.sigma,
            t: p.t,
            lhs_hi: lhs.map_or(String::new(), |l| fmt_sig(&l.hi(), 17)),
            rhs_lo: rhs.map_or(String::new(), |r| fmt_sig(&r.lo(), 17)),
            margin: margin.map_or(String::new(), |m| fmt_sig(&m.lo(), 17)),
            prec_bits: bits,
            status,
        };
        match o {
            Outcome::Pass { margin, lhs, rhs, bits } => {
                rows.push(row(Some(lhs), Some(rhs), Some(margin), *bits, SampleStatus::Pass));
                margins.push(margin.clone());
            }
            Outcome::Violation { lhs, rhs, bits } => {
                rows.push(row(Some(lhs), Some(rhs), None, *bits, SampleStatus::Violation));
                violations.push(Violation {
                    sigma: p.sigma,
                    t: p.t,
                    lhs: BallRepr::of(lhs),
                    rhs: BallRepr::of(rhs),
                });
            }
            Outcome::Skipped { lhs, rhs, bits } => {
                rows.push(row(lhs.as_ref(), rhs.as_ref(), None, *bits, SampleStatus::Skipped));
                skipped += 1;
            }
        }
    }
    violations.sort_by(|a, b| a.sigma.total_cmp(&b.sigma).then(a.t.total_cmp(&b.t)));
    margins.sort_by(|a, b| margin_key(a).partial_cmp(&margin_key(b)).unwrap_or(std::cmp::Ordering::Equal));
    let min_margin = margins.first().map(BallRepr::of);
    let median_margin = margins.get(margins.len().saturating_sub(1) / 2).map(BallRepr::of);
    VerificationReport {
        bound_id: case.id.to_string(),
        anchor: case.anchor.to_string(),
        region: case.region_text(),
        samples: n,
        seed,
        stream: stream_of(case),
        prec_bits: prec.working_bits(),
        target_error: fmt_sig(prec.target_abs_error(), 6),
        min_margin,
        median_margin,
        violations,
        skipped,
        timestamp: None,
        rows,
    }
}

/// Runs the sweep for every case matching `id`.
pub fn verify_bound(id: &str, n: usize, seed: u64, prec: &Precision) -> Result<Vec<VerificationReport>> {
    lookup(id)?
        .into_iter()
        .map(|c| verify_case(c, n, seed, prec))
        .collect()
}

/// Result of evaluating one case at a user point.
#[derive(Clone, Debug)]
pub struct Applied {
    pub id: &'static str,
    pub in_region: Containment,
    pub rhs: Option<RealBall>,
}

/// Evaluates the right-hand side of each matching case at `s`.
pub fn apply_bound(id: &str, s: &ComplexBall, prec: &Precision) -> Result<Vec<Applied>> {
    Ok(lookup(id)?
        .into_iter()
        .map(|c| Applied {
            id: c.id,
            in_region: c.contains(s),
            rhs: (c.rhs)(s, prec).ok().filter(|r| r.is_finite()),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique() {
        let reg = registry();
        let mut ids: Vec<_> = reg.iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), reg.len());
        assert!(reg.len() >= 19);
        assert!(reg.iter().all(|c| c.region.is_valid()));
    }

    #[test]
    fn lookup_by_prefix() {
        assert_eq!(lookup("prop2.2-gamma-sandwich").unwrap().len(), 2);
        assert_eq!(lookup("prop4.1").unwrap()[0].id, "prop4.1-right-halfplane");
        assert!(matches!(lookup("nonexistent"), Err(Error::NotFound(_))));
        assert!(matches!(lookup("prop4"), Err(Error::NotFound(_))));
    }

    #[test]
    fn right_halfplane_case() {
        let c = lookup("prop4.1-right-halfplane").unwrap()[0];
        let s = ComplexBall::from_f64(64, 2.5, 3.0);
        assert_eq!(c.contains(&s), Containment::Inside);
        let r = (c.rhs)(&s, &Precision::default()).unwrap();
        assert!(r.contains_float(&Float::with_val(64, 2)));
    }

    #[test]
    fn sampling_is_deterministic() {
        let r = Region::plane().sigma_ge(b(2.0));
        let a = sample_region(&r, 3, 7).unwrap();
        assert_eq!(a, sample_region(&r, 3, 7).unwrap());
        assert!(a.iter().all(|p| p.sigma >= 2.0));
        assert!(sample_region(&r, 0, 7).is_err());
        let empty = Region::plane().sigma_ge(b(2.0)).sigma_le(b(1.0));
        assert!(sample_region(&empty, 3, 7).is_err());
    }

    #[test]
    fn samples_satisfy_exclusions() {
        for c in registry() {
            for p in sample_case(c, 20, 11).unwrap() {
                assert_eq!(c.contains(&p.to_ball(64)), Containment::Inside, "{} {:?}", c.id, p);
            }
        }
    }

    #[test]
    fn tail_cutoff_is_admissible() {
        for (sg, t) in [(0.5, 10.0), (3.0, 0.7), (0.0, 2500.0)] {
            let s = ComplexBall::from_f64(64, sg, t);
            let x = tail_cutoff(&s);
            assert!(x.is_exact() && x.is_positive());
            assert!(x.hi() <= s.abs_lo());
        }
    }

    #[test]
    fn small_sweep_has_no_violations() {
        let r = verify_bound("prop4.1-right-halfplane", 10, 42, &Precision::bits(64).unwrap()).unwrap();
        assert!(r[0].passed());
        assert_eq!(r[0].skipped, 0);
        assert_eq!(r[0].rows.len(), 10);
    }

    #[test]
    fn apply_sigma_half_at_100() {
        let s = ComplexBall::from_f64(64, 0.5, 100.0);
        let a = apply_bound("prop4.4", &s, &Precision::default()).unwrap();
        assert_eq!(a[0].in_region, Containment::Inside);
        assert!(a[0].rhs.as_ref().unwrap().contains_float(&Float::with_val(64, 300)));
        let a = apply_bound("prop4.1", &ComplexBall::from_f64(64, 0.5, 2.0), &Precision::default()).unwrap();
        assert_eq!(a[0].in_region, Containment::Outside);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(20))]

            #[test]
            fn samples_lie_in_their_regions(seed in any::<u64>()) {
                for case in registry() {
                    for p in sample_case(case, 25, seed).unwrap() {
                        prop_assert_eq!(case.contains(&p.to_ball(64)), Containment::Inside, "{} {:?}", case.id, p);
                    }
                }
            }
        }
    }
}
