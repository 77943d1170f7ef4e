//! Surfaces, charts, quadrature grids, the canonical and Arakelov metrics,
//! and the explicit Green functions for genus 0 and 1.
//!
//! Chart conventions: the sphere is covered by a single stereographic chart
//! z with canonical volume density (1/pi)(1+|z|^2)^{-2} per unit Lebesgue
//! area; the torus C/(Z + tau Z) uses the fundamental-domain chart
//! z = x + tau y, (x, y) in [0,1)^2, with constant canonical density
//! 1/Im(tau). The positive Laplacian is -(1/rho) (d^2/dX^2 + d^2/dY^2) in
//! chart coordinates X + iY = z.

mod grid;
mod laplace;
mod potential;
mod singular;

pub use grid::{make_grid, Chart, QuadratureGrid, ScalarField};
pub use laplace::{laplacian_can_field, solve_laplacian_can};
pub use potential::{FourierMode, PotentialSpec};
pub use singular::integrate_against_green;

use num_complex::Complex64;

use crate::error::Error;
use crate::specfun::{dedekind_eta, jacobi_theta1, TorusModulus};
use crate::Result;

use core::f64::consts::PI;

/// Which surface all geometry is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfaceSpec {
    Sphere,
    Torus(TorusModulus),
}

impl SurfaceSpec {
    pub fn genus(&self) -> u32 {
        match self {
            SurfaceSpec::Sphere => 0,
            SurfaceSpec::Torus(_) => 1,
        }
    }

    pub fn tau(&self) -> Option<TorusModulus> {
        match self {
            SurfaceSpec::Sphere => None,
            SurfaceSpec::Torus(t) => Some(*t),
        }
    }
}

/// Canonical volume density with respect to Lebesgue measure dx dy of the
/// chart. Total canonical mass is 1.
pub fn canonical_density(surface: SurfaceSpec, z: Complex64) -> f64 {
    match surface {
        SurfaceSpec::Sphere => {
            let s = 1.0 + z.norm_sqr();
            1.0 / (PI * s * s)
        }
        SurfaceSpec::Torus(tau) => 1.0 / tau.im(),
    }
}

/// Arakelov conformal density rho_Ar with respect to |dz|^2.
pub fn arakelov_density(surface: SurfaceSpec, z: Complex64) -> f64 {
    match surface {
        SurfaceSpec::Sphere => {
            let s = 1.0 + z.norm_sqr();
            core::f64::consts::E / (s * s)
        }
        SurfaceSpec::Torus(tau) => {
            let eta4 = libm::pow(dedekind_eta(tau).norm(), 4.0);
            4.0 * PI * PI * eta4
        }
    }
}

/// Closed-form Arakelov volume: pi e for the sphere,
/// 4 pi^2 Im(tau) |eta(tau)|^4 for the torus.
pub fn volume_arakelov(surface: SurfaceSpec) -> f64 {
    match surface {
        SurfaceSpec::Sphere => PI * core::f64::consts::E,
        SurfaceSpec::Torus(tau) => {
            let eta4 = libm::pow(dedekind_eta(tau).norm(), 4.0);
            4.0 * PI * PI * tau.im() * eta4
        }
    }
}

/// The constant sigma_Ar with rho_Ar = e^{2 sigma_Ar} rho_can (genus <= 1).
pub fn sigma_arakelov(surface: SurfaceSpec) -> f64 {
    match surface {
        SurfaceSpec::Sphere => 0.5 * (1.0 + libm::log(PI)),
        SurfaceSpec::Torus(tau) => {
            let eta2 = dedekind_eta(tau).norm_sqr();
            libm::log(2.0 * PI * libm::sqrt(tau.im()) * eta2)
        }
    }
}

/// Scalar curvature of the canonical metric (constant for genus <= 1).
pub fn canonical_curvature(surface: SurfaceSpec) -> f64 {
    match surface {
        SurfaceSpec::Sphere => 8.0 * PI,
        SurfaceSpec::Torus(_) => 0.0,
    }
}

/// Reduce u into the fundamental cell centered at 0: u - m - n tau with
/// Im in [-Im(tau)/2, Im(tau)/2) and lattice x-coordinate in [-1/2, 1/2).
pub(crate) fn reduce_to_cell(u: Complex64, tau: Complex64) -> Complex64 {
    let n = libm::round(u.im / tau.im);
    let u = u - tau * n;
    let m = libm::round(u.re - tau.re * (u.im / tau.im));
    u - m
}

/// Green function of the canonical metric:
/// Delta_x G = -2 pi delta + 2 pi, zero canonical mean.
///
/// Sphere: 1/2 + ln(|z-w| / sqrt((1+|z|^2)(1+|w|^2))).
/// Torus:  ln|theta_1(z-w)/eta| - pi Im(z-w)^2 / Im(tau); the quadratic
/// term is the real value of (pi/(4 Im tau))(z-w-zbar+wbar)^2, its sign
/// pinned by the mean-zero and Laplacian checks in the tests.
pub fn green_canonical(surface: SurfaceSpec, z: Complex64, w: Complex64) -> Result<f64> {
    match surface {
        SurfaceSpec::Sphere => {
            let d = (z - w).norm();
            if d == 0.0 {
                return Err(Error::CoincidentPoints);
            }
            Ok(0.5 + libm::log(d)
                - 0.5 * libm::log1p(z.norm_sqr())
                - 0.5 * libm::log1p(w.norm_sqr()))
        }
        SurfaceSpec::Torus(tau) => {
            let u = reduce_to_cell(z - w, tau.get());
            if u.norm() == 0.0 {
                return Err(Error::CoincidentPoints);
            }
            let th = jacobi_theta1(u, tau)?;
            let eta = dedekind_eta(tau);
            Ok(libm::log(th.norm() / eta.norm()) - PI * u.im * u.im / tau.im())
        }
    }
}

/// Smooth part of the Green function, G(z, w) - ln|z - w| extended to the
/// diagonal. On the torus the chart distance is taken after lattice
/// reduction, so this is only meant for |z - w| well inside one cell.
pub fn green_smooth_part(surface: SurfaceSpec, z: Complex64, w: Complex64) -> Result<f64> {
    match surface {
        SurfaceSpec::Sphere => {
            Ok(0.5 - 0.5 * libm::log1p(z.norm_sqr()) - 0.5 * libm::log1p(w.norm_sqr()))
        }
        SurfaceSpec::Torus(tau) => {
            let u = reduce_to_cell(z - w, tau.get());
            let eta = dedekind_eta(tau);
            let ratio = if u.norm() < 1e-100 {
                // theta_1'(0) = 2 pi eta^3
                2.0 * PI * eta.norm() * eta.norm_sqr()
            } else {
                jacobi_theta1(u, tau)?.norm() / u.norm()
            };
            Ok(libm::log(ratio / eta.norm()) - PI * u.im * u.im / tau.im())
        }
    }
}

/// Diagonal limit lim_{w->z} (G(z,w) - ln|z-w|); by definition this is
/// (1/2) ln rho_Ar(z).
pub fn green_regularized(surface: SurfaceSpec, z: Complex64) -> f64 {
    match surface {
        SurfaceSpec::Sphere => 0.5 - libm::log1p(z.norm_sqr()),
        SurfaceSpec::Torus(tau) => {
            let eta = dedekind_eta(tau);
            libm::log(2.0 * PI * eta.norm_sqr())
        }
    }
}
