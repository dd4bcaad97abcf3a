//! Simulation and calibration of a universal single-qubit gate-set whose two
//! generators (a Z rotation by π/2 and an X rotation by π/4) carry systematic
//! errors, together with the robust-phase-estimation machinery that recovers
//! those errors at Heisenberg scaling and the closed-form error bounds that
//! certify the procedure.
//!
//! Module map:
//!
//! - [`linalg2`] — exact complex 2×2 operator algebra (states, effects, channels)
//! - [`gates`] — the faulty gate models and composite rotations
//! - [`noise`] — depolarizing noise, SPAM models, additive-offset injection
//! - [`experiments`] — experiment sequences, exact outcome probabilities, sampling
//! - [`rpe`] — the robust phase estimation engine (schedules, unwrapping, oversampling)
//! - [`calibrate`] — the three calibration protocols mapping phases to (α̂, ε̂, θ̂)
//! - [`bounds`] — tail bounds, variance bounds, and initial-bounding procedures

pub mod bounds;
pub mod calibrate;
pub mod experiments;
pub mod gates;
pub mod linalg2;
pub mod noise;
pub mod rpe;

/// Additive errors in experiment probabilities must stay below 1/√8 for the
/// estimation procedure to converge at all.
pub const ADDITIVE_ERROR_LIMIT: f64 = std::f64::consts::FRAC_1_SQRT_2 / 2.0;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),
    #[error("invalid POVM effect: {0}")]
    InvalidEffect(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("refused (inadmissible): {0}")]
    Inadmissible(String),
    #[error("refused (infeasible): {0}")]
    Infeasible(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Wrap an angle into the principal range (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut y = x.rem_euclid(two_pi);
    if y > std::f64::consts::PI {
        y -= two_pi;
    }
    y
}
