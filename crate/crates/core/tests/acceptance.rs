use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rug::float::Round;
use rug::{Float, Rational};
use zg_core::*;

const SWEEP_SAMPLES: &str = "200";
const SWEEP_SEED: &str = "42";
const SWEEP_BITS: &str = "128";
const SWEEP_BUDGET: Duration = Duration::from_secs(300);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn target(bits: u32) -> Float {
    Float::with_val(64, 1) >> bits
}

fn prec(bits: u32, target_bits: u32) -> Precision {
    Precision::new(bits, target(target_bits)).unwrap()
}

fn f(x: &Float) -> f64 {
    x.to_f64()
}

/// The `zg` binary built next to this test executable.
fn zg_binary() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let bin = dir.join(format!("zg{}", std::env::consts::EXE_SUFFIX));
    bin.exists().then_some(bin)
}

struct Sweep {
    exit_ok: bool,
    reports: BTreeMap<String, Vec<u8>>,
    elapsed: Duration,
    how: &'static str,
}

fn json_reports(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for e in std::fs::read_dir(dir).into_iter().flatten().flatten() {
        let p = e.path();
        if p.extension().is_some_and(|x| x == "json") {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            out.insert(name, std::fs::read(&p).unwrap());
        }
    }
    out
}

fn run_sweep(dir: &Path) -> Sweep {
    let start = Instant::now();
    if let Some(bin) = zg_binary() {
        let status = Command::new(bin)
            .args(["verify", "--all", "--samples", SWEEP_SAMPLES, "--seed", SWEEP_SEED])
            .args(["--prec-bits", SWEEP_BITS, "--out-dir"])
            .arg(dir)
            .env_remove("ZG_PREC_BITS")
            .stdout(std::process::Stdio::null())
            .status()
            .expect("zg runs");
        return Sweep {
            exit_ok: status.success(),
            reports: json_reports(dir),
            elapsed: start.elapsed(),
            how: "zg verify --all",
        };
    }
    // binary not built: same sweep through the library
    let p = prec(SWEEP_BITS.parse().unwrap(), 53);
    std::fs::create_dir_all(dir).unwrap();
    let mut ok = true;
    for case in registry() {
        let r = verify_case(case, SWEEP_SAMPLES.parse().unwrap(), SWEEP_SEED.parse().unwrap(), &p).unwrap();
        ok &= r.passed();
        std::fs::write(dir.join(format!("{}.json", case.id)), r.to_json()).unwrap();
    }
    Sweep {
        exit_ok: ok,
        reports: json_reports(dir),
        elapsed: start.elapsed(),
        how: "library sweep",
    }
}

fn criterion_1(sweep: &Sweep) -> Outcome {
    let n = sweep.reports.len();
    let pass = sweep.exit_ok && n >= 19 && sweep.elapsed < SWEEP_BUDGET;
    outcome(
        pass,
        format!(
            "{}: exit_ok={} reports={} elapsed={:.1}s",
            sweep.how,
            sweep.exit_ok,
            n,
            sweep.elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let bits = 256;
    let mut min_margin: Option<Float> = None;
    let mut failures = 0;
    let mut count = 0;
    for x in [1, 2, 5, 10, 50] {
        for y in [0, 1, 10] {
            let z = ComplexBall::new(RealBall::from_i64(bits, x), RealBall::from_i64(bits, y));
            let lg = log_gamma(&z).unwrap();
            let half = RealBall::from_ratio(bits, 1, 2);
            let main = &(&z.add_real(&-&half) * &z.ln()) - &z;
            let mu_ref = (&lg - &main).add_real(&-&gamma::log_sqrt_2pi(bits));
            for k in 1..=6 {
                count += 1;
                let partial = stirling_series(&z, k).unwrap();
                let bound = stirling_mu(&z, k).unwrap().remainder_radius;
                let err = (&mu_ref - &partial).abs_hi();
                let margin = Float::with_val(64, bound.lo() - &err);
                if margin <= 0 {
                    failures += 1;
                }
                if min_margin.as_ref().map_or(true, |m| margin < *m) {
                    min_margin = Some(margin);
                }
            }
        }
    }
    let m = min_margin.unwrap();
    outcome(
        failures == 0 && m > 0,
        format!("{count} (z,K) points, failures={failures}, min margin={:.3e}", f(&m)),
    )
}

fn criterion_3() -> Outcome {
    let p = prec(128, 53);
    let mut violations = 0;
    let mut skipped = 0;
    for case in lookup("prop2.2").unwrap() {
        let r = verify_case(case, 500, 42, &p).unwrap();
        violations += r.violations.len();
        skipped += r.skipped;
    }
    let two = RealBall::from_i64(128, 2);
    let (lower, upper) = gamma_magnitude_bounds(&two, &RealBall::zero(128)).unwrap();
    let one = RealBall::one(128);
    let sandwich = lower.certainly_lt(&one) && one.certainly_lt(&upper);
    let near = |b: &RealBall, v: f64| (b.to_f64() - v).abs() <= 1e-3;
    let values = near(&lower, 0.766) && near(&upper, 8.486);
    outcome(
        violations == 0 && skipped == 0 && sandwich && values,
        format!(
            "500 samples x 2: violations={violations} skipped={skipped}; s=2: [{:.6}, {:.6}] contains 1: {sandwich}",
            lower.to_f64(),
            upper.to_f64()
        ),
    )
}

fn criterion_4() -> Outcome {
    let bits = 128;
    let case = lookup("prop3.1").unwrap()[0];
    let points: Vec<Point> = sample_case_points(case, 600, 42)
        .into_iter()
        .filter(|p| p.sigma.hypot(p.t) <= 1e3)
        .take(200)
        .enumerate()
        .map(|(i, p)| if i % 2 == 1 { Point { sigma: -p.sigma, t: -p.t } } else { p })
        .collect();
    let mut failures = 0;
    for p in &points {
        let t = p.to_ball(bits);
        let th = theta(&t).unwrap().value.abs();
        let bound = theta_growth_bound(&t).unwrap();
        if !th.certainly_le(&bound) {
            failures += 1;
        }
    }
    let t100 = ComplexBall::from_real(RealBall::from_i64(bits, 100));
    let th100 = theta(&t100).unwrap().value;
    let asym = theta_asymptotic(&t100).unwrap();
    let tol = Float::with_val_round(64, &Rational::from((1, 1000)), Round::Up).0;
    let expected = RealBall::from_rational(bits, &parse_decimal("87.9785").unwrap()).add_error(&tol);
    let routes_agree = th100.overlaps(&asym);
    let contains = th100.re.overlaps(&expected);
    outcome(
        points.len() == 200 && failures == 0 && routes_agree && contains,
        format!(
            "{} samples, failures={failures}; theta(100) = {:.6} (asymptotic route agrees: {routes_agree}), within 1e-3 of 87.9785: {contains}",
            points.len(),
            th100.re.to_f64()
        ),
    )
}

fn sample_case_points(case: &BoundCase, n: usize, seed: u64) -> Vec<Point> {
    zg_core::bounds::sample_case(case, n, seed).unwrap()
}

fn criterion_5() -> Outcome {
    let p = prec(128, 53);
    let mut parts = Vec::new();
    let mut pass = true;
    for (id, sigma) in [("thm5.1-strip", (0.0, 1.0)), ("thm5.1-right", (1.0, 8.0))] {
        let case = lookup(id).unwrap()[0];
        let caps = Caps { sigma, t: (0.5, 1e4), t_log_uniform: true };
        let points = sample_region_with(&case.region, 300, 42, &caps).unwrap();
        let r = verify_points(case, &points, 42, &p);
        pass &= r.violations.is_empty() && r.skipped == 0 && points.len() == 300;
        parts.push(format!(
            "{id}: violations={} skipped={} min_margin={}",
            r.violations.len(),
            r.skipped,
            r.min_margin.map_or("-".into(), |m| m.mid)
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let bits = 128;
    let p = prec(bits, 100);
    let region = Region::plane()
        .sigma_ge(RealBall::from_ratio(bits, 1, 10))
        .sigma_le(RealBall::from_ratio(bits, 9, 10))
        .t_ge(&RealBall::pi(bits) * &RealBall::from_i64(bits, 16))
        .t_le(RealBall::from_i64(bits, 1000));
    let caps = Caps { sigma: (0.1, 0.9), t: (0.5, 1e3), t_log_uniform: false };
    let points = sample_region_with(&region, 100, 42, &caps).unwrap();
    let mut failures = 0;
    let mut worst = 0.0f64;
    for pt in &points {
        let s = pt.to_ball(bits);
        let direct = zeta_route(&s, ZetaRoute::Eta, &p).unwrap().expect("eta route applies");
        let reflected = ComplexBall::new(&RealBall::one(bits) - &s.re, s.im.clone());
        let via_r = &r_eval(&s, &p).unwrap() + &(&chi(&s).unwrap().value * &r_eval(&reflected, &p).unwrap().conj());
        for (a, b) in [(&direct.re, &via_r.re), (&direct.im, &via_r.im)] {
            let gap = Float::with_val(bits, a.mid() - b.mid()).abs();
            let radii = Float::with_val(bits, a.rad() + b.rad());
            worst = worst.max(f(&gap) / f(&radii));
            if gap > radii {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0 && points.len() == 100,
        format!("{} samples, failures={failures}, max discrepancy/radii={worst:.3e}", points.len()),
    )
}

/// Certified sign of `Z(t)`, refining the precision when the enclosure meets zero.
fn z_sign(t: f64) -> Option<i8> {
    for (bits, tb) in [(64, 24), (128, 80), (256, 200)] {
        let z = z_eval(&RealBall::from_f64(bits, t), &prec(bits, tb)).unwrap().value;
        if z.is_positive() {
            return Some(1);
        }
        if z.is_negative() {
            return Some(-1);
        }
    }
    None
}

fn sign_changes(n: usize) -> (usize, usize) {
    let mut changes = 0;
    let mut unresolved = 0;
    let mut last: Option<i8> = None;
    for i in 0..=n {
        let t = 100.0 * i as f64 / n as f64;
        match z_sign(t) {
            Some(s) => {
                if last.is_some_and(|l| l != s) {
                    changes += 1;
                }
                last = Some(s);
            }
            None => unresolved += 1,
        }
    }
    (changes, unresolved)
}

fn criterion_7() -> Outcome {
    let bits = 128;
    let p = prec(bits, 100);
    let mut unreal = 0;
    for i in 0..200 {
        let t = RealBall::from_rational(bits, &Rational::from((500 * (2 * i + 1), 400)));
        if !z_eval(&t, &p).unwrap().im_residual.contains_zero() {
            unreal += 1;
        }
    }
    let sign_at = |t: &Float| {
        let z = z_eval(&RealBall::exact(t.clone()), &p).unwrap().value;
        if z.is_positive() {
            Some(1)
        } else if z.is_negative() {
            Some(-1)
        } else {
            None
        }
    };
    let mut lo = Float::with_val(bits, 14);
    let mut hi = Float::with_val(bits, 14.2);
    let s_lo = sign_at(&lo);
    let mut bisect_ok = s_lo.is_some() && sign_at(&hi).is_some() && s_lo != sign_at(&hi);
    while bisect_ok && Float::with_val(bits, &hi - &lo) > 1e-7 {
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        match sign_at(&mid) {
            Some(s) if Some(s) == s_lo => lo = mid,
            Some(_) => hi = mid,
            None => bisect_ok = false,
        }
    }
    let zero = (f(&lo) + f(&hi)) / 2.0;
    let localized = bisect_ok && (zero - 14.134725).abs() <= 1e-5;
    let (coarse, coarse_unresolved) = sign_changes(10_000);
    let (fine, fine_unresolved) = sign_changes(40_000);
    outcome(
        unreal == 0 && localized && coarse == 29 && fine == 29 && coarse_unresolved + fine_unresolved == 0,
        format!(
            "non-real at {unreal}/200; zero at {zero:.8}; sign changes {coarse} (1e4 grid), {fine} (4e4 grid), unresolved {}",
            coarse_unresolved + fine_unresolved
        ),
    )
}

fn criterion_8() -> Outcome {
    let bits = 64;
    let p = prec(bits, 40);
    let lo_t = RealBall::from_i64(bits, 3).sqrt();
    let hi_t = &RealBall::pi(bits) * &RealBall::from_i64(bits, 16);
    let two = RealBall::from_i64(bits, 2);
    let mut sup = 0.0f64;
    let mut failures = 0;
    for i in 0..64 {
        let sigma = RealBall::from_ratio(bits, i, 126);
        for j in 0..64 {
            let t = &lo_t + &(&(&hi_t - &lo_t) * &RealBall::from_ratio(bits, j, 63));
            let s = ComplexBall::new(sigma.clone(), t);
            let ratio = &zeta_eval(&s, &p).unwrap().value.abs() / &s.abs().sqrt();
            sup = sup.max(f(&ratio.hi()));
            if !ratio.certainly_le(&two) {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("4096 points, sup |zeta(s)|/|s|^(1/2) <= {sup:.6}, failures={failures}"))
}

struct Sample {
    b24: RealBall,
    b256: RealBall,
    inner: RealBall,
    exact: bool,
}

fn random_ball(rng: &mut ChaCha20Rng, lo: f64, hi: f64) -> Sample {
    let q = |x: f64| (x * 1048576.0).round() / 1048576.0;
    let mid = q(rng.gen_range(lo..hi));
    let rad = if rng.gen_bool(0.5) { 0.0 } else { (2f64).powi(-rng.gen_range(4..30)) };
    let inner = q(mid + rad * rng.gen_range(-1.0..1.0)).clamp(mid - rad, mid + rad);
    Sample {
        b24: RealBall::new(Float::with_val(24, mid), Float::with_val(64, rad)),
        b256: RealBall::new(Float::with_val(256, mid), Float::with_val(64, rad)),
        inner: RealBall::from_f64(256, inner),
        exact: rad == 0.0,
    }
}

/// The 24-bit enclosure must hold the 256-bit image of a point of the input
/// ball, and the whole 256-bit enclosure when the input is exact.
fn check(low: &RealBall, high: &RealBall, point: &RealBall, exact: bool) -> bool {
    low.contains(point) && (!exact || low.contains(high))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(42);
    let trials = 10_000;
    let mut failures = 0;
    for i in 0..trials {
        let x = random_ball(&mut rng, -8.0, 8.0);
        let y = random_ball(&mut rng, 0.125, 8.0);
        let e = x.exact && y.exact;
        let (x24, x256, xp) = (&x.b24, &x.b256, &x.inner);
        let (y24, y256, yp) = (&y.b24, &y.b256, &y.inner);
        let ok = match i % 12 {
            0 => check(&(x24 + y24), &(x256 + y256), &(xp + yp), e),
            1 => check(&(x24 - y24), &(x256 - y256), &(xp - yp), e),
            2 => check(&(x24 * y24), &(x256 * y256), &(xp * yp), e),
            3 => check(&(x24 / y24), &(x256 / y256), &(xp / yp), e),
            4 => check(&y24.sqrt(), &y256.sqrt(), &yp.sqrt(), y.exact),
            5 => check(&x24.exp(), &x256.exp(), &xp.exp(), x.exact),
            6 => check(&y24.ln(), &y256.ln(), &yp.ln(), y.exact),
            7 => check(&x24.sin(), &x256.sin(), &xp.sin(), x.exact),
            8 => check(&x24.cos(), &x256.cos(), &xp.cos(), x.exact),
            9 => check(&x24.atan(), &x256.atan(), &xp.atan(), x.exact),
            10 => check(&y24.pow(x24), &y256.pow(x256), &yp.pow(xp), e),
            _ => {
                let z24 = ComplexBall::new(x24.clone(), y24.clone());
                let z256 = ComplexBall::new(x256.clone(), y256.clone());
                let zp = ComplexBall::new(xp.clone(), yp.clone());
                let (a24, a256, ap) = match (i / 12) % 4 {
                    0 => (z24.exp(), z256.exp(), zp.exp()),
                    1 => (z24.ln(), z256.ln(), zp.ln()),
                    2 => (z24.recip(), z256.recip(), zp.recip()),
                    _ => (&z24 * &z24.sin(), &z256 * &z256.sin(), &zp * &zp.sin()),
                };
                check(&a24.re, &a256.re, &ap.re, e) && check(&a24.im, &a256.im, &ap.im, e)
            }
        };
        if !ok {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("{trials} trials, failures={failures}"))
}

fn criterion_10(a: &Sweep, b: &Sweep) -> Outcome {
    let same_names = a.reports.keys().eq(b.reports.keys());
    let differing: Vec<&String> = a
        .reports
        .iter()
        .filter(|(k, v)| b.reports.get(*k) != Some(v))
        .map(|(k, _)| k)
        .collect();
    outcome(
        same_names && differing.is_empty() && !a.reports.is_empty(),
        format!("{} reports compared, differing={:?}", a.reports.len(), differing),
    )
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().unwrap();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut report = |n: u32, name: &'static str, o: Outcome| {
        println!("{} criterion {n:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, name, o));
    };
    let first = run_sweep(&dir.path().join("run1"));
    report(1, "registry sweep", criterion_1(&first));
    report(2, "stirling remainder", criterion_2());
    report(3, "gamma sandwich", criterion_3());
    report(4, "theta growth", criterion_4());
    report(5, "remainder domination", criterion_5());
    report(6, "functional identity", criterion_6());
    report(7, "hardy z", criterion_7());
    report(8, "zeta over sqrt s", criterion_8());
    report(9, "enclosure soundness", criterion_9());
    let second = run_sweep(&dir.path().join("run2"));
    report(10, "determinism", criterion_10(&first, &second));
    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!("acceptance: {} passed, {} failed {:?}", results.len() - failed.len(), failed.len(), failed);
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
