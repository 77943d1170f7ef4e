//! Numerical core for Coulomb-gas partition functions on compact Riemann
//! surfaces of genus 0 and 1.
//!
//! The crate evaluates the log partition function of the determinantal
//! (beta = 1) Coulomb gas two independent ways: exact closed forms and
//! Gram determinants on one side, an assembled asymptotic expansion in the
//! particle number on the other. Everything those routes need is built
//! here: Jacobi and Riemann theta functions, Dedekind eta, Hurwitz zeta,
//! Barnes G, quadrature grids on the sphere and torus, Arakelov and
//! canonical metrics with their Green functions, the classical geometric
//! functionals, zeta-regularized determinants and the bosonization
//! constants.
//!
//! Everything here is pure computation over `f64`/`Complex64`; IO, config
//! and the CLI live in the companion `coulomb-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod expansion;
pub mod exactpf;
pub mod fourier;
pub mod functionals;
pub mod geometry;
pub mod numeric;
pub mod specfun;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
