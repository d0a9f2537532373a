use rug::Float;

use crate::ball::RealBall;

/// Ball around a decimal literal with absolute tolerance `tol`.
pub fn approx(v: &str, tol: f64) -> RealBall {
    let mid = Float::with_val(256, Float::parse(v).expect("decimal literal"));
    RealBall::new(mid, Float::with_val(64, tol))
}
