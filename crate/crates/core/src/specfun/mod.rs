//! High-accuracy scalar special functions: Jacobi and Riemann theta,
//! Dedekind eta, Hurwitz zeta and its derivatives, Barnes G, log-factorials
//! and the constant zeta'(-1).
//!
//! All series use double precision with compensated summation; truncation
//! thresholds are chosen so absolute tails stay below 1e-16 of the running
//! maximum.

mod barnes;
mod theta;
mod zeta;

pub use barnes::{
    log_barnes_g, log_barnes_g_asymptotic, log_factorial, sum_j_ln_j, sum_j_ln_j_asymptotic,
};
pub use theta::{
    dedekind_eta, jacobi_theta1, riemann_theta, theta_norm_sq, theta_with_char, PeriodMatrix,
    ThetaCharacteristic, TorusModulus,
};
pub use zeta::{
    hurwitz_zeta, hurwitz_zeta_deriv, hurwitz_zeta_scaled, riemann_zeta, zeta_prime_minus1,
};
