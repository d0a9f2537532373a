pub mod ball;
pub mod bounds;
pub mod chi;
pub mod complex;
pub mod error;
pub mod gamma;
pub mod parse;
pub mod precision;
pub mod region;
pub mod rs;
pub mod zeta;

#[cfg(test)]
mod testutil;

pub use ball::RealBall;
pub use complex::ComplexBall;
pub use error::{Error, Result};
pub use gamma::{bernoulli, gamma, gamma_magnitude_bounds, log_gamma, stirling_mu, stirling_series, MuResult, StirlingParams};
pub use precision::Precision;
pub use region::{region_contains, Containment, Edge, Region};
pub use chi::{chi, chi_upper_bound, log_chi, theta, theta_asymptotic, theta_growth_bound, ChiBound, ChiBoundForm, ChiValue, ThetaValue};
pub use zeta::{partial_sum, zeta_eval, zeta_route, zeta_region_bound, zeta_tail_bound, ZetaRoute, ZetaTail, ZetaValue};
pub use bounds::{lookup, registry, sample_region, sample_region_with, verify_bound, verify_case, verify_points, BoundCase, Caps, Point, VerificationReport};
pub use rs::{r_eval, r_region_bound, rs_f, rs_remainder, rs_terms, z_eval, RBoundProp, RRegionBound, RSTerms, ZValue};
pub use parse::{parse_complex, parse_decimal, ComplexInput, Enclosure};
