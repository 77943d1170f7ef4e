//! Quadrature of integrals carrying the logarithmic Green singularity.
//!
//! Splits the integral into a globally smooth part, handled by the grid
//! rule, and a local polar patch around the singular point where the
//! ln-distance factor is integrated with a dedicated rule. The two parts
//! are blended by a C^4 radial cutoff so the grid never sees the kink.

use num_complex::Complex64;

use crate::numeric::{gauss_legendre_unit, KahanSum};
use crate::Result;

use super::{
    canonical_density, green_canonical, green_smooth_part, reduce_to_cell, QuadratureGrid,
    SurfaceSpec,
};

use core::f64::consts::PI;

/// 9th-order smoothstep, C^4 at both ends. s in [0, 1].
fn smoothstep4(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    let s2 = s * s;
    let s4 = s2 * s2;
    s4 * s * (126.0 + s * (-420.0 + s * (540.0 + s * (-315.0 + s * 70.0))))
}

/// Cutoff chi(r): 1 for r <= r0, 0 for r >= r1.
fn chi(r: f64, r0: f64, r1: f64) -> f64 {
    if r <= r0 {
        1.0
    } else if r >= r1 {
        0.0
    } else {
        1.0 - smoothstep4((r - r0) / (r1 - r0))
    }
}

/// Chart distance from node z to the point y.
fn chart_distance(surface: SurfaceSpec, z: Complex64, y: Complex64) -> f64 {
    match surface {
        SurfaceSpec::Sphere => (z - y).norm(),
        SurfaceSpec::Torus(tau) => reduce_to_cell(z - y, tau.get()).norm(),
    }
}

/// Patch radius: about ten local node spacings, capped on the torus by the
/// shortest lattice vector.
fn patch_radius(grid: &QuadratureGrid, y: Complex64) -> f64 {
    match grid.surface {
        SurfaceSpec::Sphere => {
            // node density is rho_can * res^2 per unit chart area
            let spacing = libm::sqrt(PI) * (1.0 + y.norm_sqr()) / grid.resolution as f64;
            10.0 * spacing
        }
        SurfaceSpec::Torus(tau) => {
            let t = tau.get();
            let min_period = [
                Complex64::new(1.0, 0.0),
                t,
                t + 1.0,
                t - 1.0,
            ]
            .iter()
            .map(|v| v.norm())
            .fold(f64::INFINITY, f64::min);
            let spacing = t.norm().max(1.0) / grid.resolution as f64;
            (10.0 * spacing).min(0.45 * min_period)
        }
    }
}

/// Compute the canonical-measure integral
///   int f(z) G_can(z, y) d mu_can(z)
/// for a smooth weight f, with the Green singularity at y handled by the
/// cutoff-and-patch rule. f must be evaluable anywhere in the chart.
pub fn integrate_against_green(
    grid: &QuadratureGrid,
    f: &dyn Fn(Complex64) -> f64,
    y: Complex64,
) -> Result<f64> {
    let surface = grid.surface;
    let r1 = patch_radius(grid, y);
    let r0 = 0.4 * r1;

    // grid part: integrand vanishes smoothly inside the patch
    let mut outer = KahanSum::new();
    for (i, &z) in grid.nodes.iter().enumerate() {
        let d = chart_distance(surface, z, y);
        let cut = 1.0 - chi(d, r0, r1);
        if cut == 0.0 {
            continue;
        }
        let g = green_canonical(surface, z, y)?;
        outer.add(grid.w_can(i) * f(z) * g * cut);
    }

    // patch part in polar coordinates around y:
    //   int_0^r1 int_0^2pi rho_can f (ln r + G_sm) chi(r) r dtheta dr
    let n_rad = 32;
    let n_ang = 32;
    let (gx, gw) = gauss_legendre_unit(n_rad);
    let mut patch = KahanSum::new();
    for k in 0..n_rad {
        let r = gx[k] * r1;
        let wr = gw[k] * r1;
        let cutoff = chi(r, r0, r1);
        if cutoff == 0.0 {
            continue;
        }
        let ln_r = libm::log(r);
        let mut ring = KahanSum::new();
        for j in 0..n_ang {
            let th = 2.0 * PI * (j as f64 + 0.5) / n_ang as f64;
            let z = y + Complex64::new(r * libm::cos(th), r * libm::sin(th));
            let gsm = green_smooth_part(surface, z, y)?;
            ring.add(canonical_density(surface, z) * f(z) * (ln_r + gsm));
        }
        patch.add(wr * cutoff * r * ring.value() * 2.0 * PI / n_ang as f64);
    }

    Ok(outer.value() + patch.value())
}
