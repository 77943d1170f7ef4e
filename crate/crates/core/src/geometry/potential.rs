//! Builtin potential families and their analytic canonical Laplacians.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

use super::{QuadratureGrid, ScalarField, SurfaceSpec};

use core::f64::consts::PI;

/// One Fourier mode of a torus potential. The potential carries
/// 2 Re(coeff e^{2 pi i (m x + n y)}), so coefficients automatically come in
/// conjugate-symmetric pairs and V is real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMode {
    pub m: i32,
    pub n: i32,
    pub coeff: Complex64,
}

/// Symbolic description of the one-body potential V, restricted to families
/// whose canonical Laplacian is known in closed form.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Zero,
    /// V(x + tau y) = sum_modes 2 Re(c e^{2 pi i (m x + n y)})
    TorusFourier(Vec<FourierMode>),
    /// V(z) = amplitude * t^degree with t = (1-|z|^2)/(1+|z|^2)
    SphereZonal { degree: u32, amplitude: f64 },
}

/// Height coordinate t = cos(polar angle) of a stereographic chart point.
#[inline]
fn height(z: Complex64) -> f64 {
    let r2 = z.norm_sqr();
    (1.0 - r2) / (1.0 + r2)
}

/// Lattice coordinates (x, y) in [0,1)^2 of a torus chart point z = x + tau y.
#[inline]
fn lattice_coords(z: Complex64, tau: Complex64) -> (f64, f64) {
    let y = z.im / tau.im;
    let x = z.re - tau.re * y;
    (x, y)
}

/// Fourier symbol of the canonical torus Laplacian on e^{2 pi i (m x + n y)}:
/// Delta_can = (4 pi^2 / Im tau) |n - m conj(tau)|^2.
pub(crate) fn torus_symbol(m: i64, n: i64, tau: Complex64) -> f64 {
    let a = n as f64 - m as f64 * tau.re;
    let b = m as f64 * tau.im;
    4.0 * PI * PI * (a * a + b * b) / tau.im
}

impl PotentialSpec {
    pub fn is_zero(&self) -> bool {
        match self {
            PotentialSpec::Zero => true,
            PotentialSpec::TorusFourier(modes) => modes.is_empty(),
            PotentialSpec::SphereZonal { amplitude, .. } => *amplitude == 0.0,
        }
    }

    /// Check the family lives on the given surface.
    pub fn check_surface(&self, surface: SurfaceSpec) -> Result<()> {
        match (self, surface) {
            (PotentialSpec::Zero, _) => Ok(()),
            (PotentialSpec::TorusFourier(_), SurfaceSpec::Torus(_)) => Ok(()),
            (PotentialSpec::SphereZonal { .. }, SurfaceSpec::Sphere) => Ok(()),
            _ => Err(Error::UnsupportedFamily),
        }
    }

    /// V at a chart point.
    pub fn eval(&self, surface: SurfaceSpec, z: Complex64) -> Result<f64> {
        self.check_surface(surface)?;
        Ok(match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::TorusFourier(modes) => {
                let tau = surface.tau().ok_or(Error::MissingTau)?.get();
                let (x, y) = lattice_coords(z, tau);
                let mut v = 0.0;
                for mode in modes {
                    let ph = 2.0 * PI * (mode.m as f64 * x + mode.n as f64 * y);
                    let (s, c) = libm::sincos(ph);
                    v += 2.0 * (mode.coeff.re * c - mode.coeff.im * s);
                }
                v
            }
            PotentialSpec::SphereZonal { degree, amplitude } => {
                amplitude * libm::pow(height(z), *degree as f64)
            }
        })
    }

    /// Analytic Delta_can V at a chart point.
    ///
    /// Torus modes use the Fourier symbol above. Zonal sphere fields use the
    /// Legendre operator: Delta_can(t^p) = 4 pi (p(p+1) t^p - p(p-1) t^{p-2});
    /// the 4 pi factor relative to the round Laplacian is pinned numerically
    /// by the finite-difference oracle and the Green-function tests.
    pub fn laplacian_eval(&self, surface: SurfaceSpec, z: Complex64) -> Result<f64> {
        self.check_surface(surface)?;
        Ok(match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::TorusFourier(modes) => {
                let tau = surface.tau().ok_or(Error::MissingTau)?.get();
                let (x, y) = lattice_coords(z, tau);
                let mut v = 0.0;
                for mode in modes {
                    let lam = torus_symbol(mode.m as i64, mode.n as i64, tau);
                    let ph = 2.0 * PI * (mode.m as f64 * x + mode.n as f64 * y);
                    let (s, c) = libm::sincos(ph);
                    v += 2.0 * lam * (mode.coeff.re * c - mode.coeff.im * s);
                }
                v
            }
            PotentialSpec::SphereZonal { degree, amplitude } => {
                let p = *degree as f64;
                let t = height(z);
                let lead = p * (p + 1.0) * libm::pow(t, p);
                let sub = if *degree >= 2 {
                    p * (p - 1.0) * libm::pow(t, p - 2.0)
                } else {
                    // t^{p-2} only enters multiplied by p(p-1) = 0
                    0.0
                };
                4.0 * PI * amplitude * (lead - sub)
            }
        })
    }

    /// Equilibrium density factor f_V = 1 + Delta_can V / (4 pi).
    pub fn f_v_eval(&self, surface: SurfaceSpec, z: Complex64) -> Result<f64> {
        Ok(1.0 + self.laplacian_eval(surface, z)? / (4.0 * PI))
    }

    /// Sample V on the grid.
    pub fn sample(&self, grid: &QuadratureGrid) -> Result<ScalarField> {
        let mut values = Vec::with_capacity(grid.len());
        for &z in &grid.nodes {
            values.push(self.eval(grid.surface, z)?);
        }
        Ok(ScalarField { values })
    }

    /// Sample the analytic Delta_can V on the grid.
    pub fn laplacian_canonical(&self, grid: &QuadratureGrid) -> Result<ScalarField> {
        let mut values = Vec::with_capacity(grid.len());
        for &z in &grid.nodes {
            values.push(self.laplacian_eval(grid.surface, z)?);
        }
        Ok(ScalarField { values })
    }

    /// Minimum of f_V over the grid.
    pub fn min_f_v(&self, grid: &QuadratureGrid) -> Result<f64> {
        let lap = self.laplacian_canonical(grid)?;
        Ok(1.0 + lap.min() / (4.0 * PI))
    }

    /// Error out unless f_V stays above the admissibility floor.
    pub fn require_admissible(&self, grid: &QuadratureGrid) -> Result<()> {
        let min = self.min_f_v(grid)?;
        if min <= 1e-6 {
            return Err(Error::Admissibility(min));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_grid;
    use crate::specfun::TorusModulus;

    fn torus(re: f64, im: f64) -> SurfaceSpec {
        SurfaceSpec::Torus(TorusModulus::new(Complex64::new(re, im)).unwrap())
    }

    fn cos2pix() -> PotentialSpec {
        // V = cos(2 pi x) = 2 Re(0.5 e^{2 pi i x})
        PotentialSpec::TorusFourier(alloc::vec![FourierMode {
            m: 1,
            n: 0,
            coeff: Complex64::new(0.5, 0.0),
        }])
    }

    #[test]
    fn zero_potential_is_zero_field() {
        let g = make_grid(SurfaceSpec::Sphere, 16).unwrap();
        let lap = PotentialSpec::Zero.laplacian_canonical(&g).unwrap();
        assert!(lap.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn torus_symbol_matches_stated_form_for_rectangular_tau() {
        // tau = i t: symbol = (2 pi)^2 (m^2 + n^2/t^2) Im(tau)
        let t = 1.7;
        let tau = Complex64::new(0.0, t);
        for (m, n) in [(1i64, 0i64), (0, 1), (2, 3), (-1, 4)] {
            let sym = torus_symbol(m, n, tau);
            let expect = 4.0 * PI * PI * (m as f64 * m as f64 + (n as f64 / t) * (n as f64 / t)) * t;
            assert!((sym - expect).abs() < 1e-10 * expect.max(1.0), "({m},{n})");
        }
    }

    #[test]
    fn torus_cosine_laplacian() {
        // tau = i: Delta_can cos(2 pi x) = (2 pi)^2 cos(2 pi x)
        let surf = torus(0.0, 1.0);
        let v = cos2pix();
        let z = Complex64::new(0.2, 0.37);
        let lap = v.laplacian_eval(surf, z).unwrap();
        let expect = 4.0 * PI * PI * v.eval(surf, z).unwrap();
        assert!((lap - expect).abs() < 1e-10 * expect.abs().max(1.0));
    }

    #[test]
    fn laplacian_has_zero_canonical_mean() {
        let gt = make_grid(torus(0.3, 1.2), 32).unwrap();
        let lap = cos2pix().laplacian_canonical(&gt).unwrap();
        assert!(gt.integrate_can(&lap).unwrap().abs() < 1e-10);

        let gs = make_grid(SurfaceSpec::Sphere, 32).unwrap();
        for degree in [1u32, 2, 3, 4] {
            let pot = PotentialSpec::SphereZonal { degree, amplitude: 0.3 };
            let lap = pot.laplacian_canonical(&gs).unwrap();
            let mean = gs.integrate_can(&lap).unwrap();
            assert!(mean.abs() < 1e-10, "degree {degree}: {mean}");
        }
    }

    #[test]
    fn admissibility_gate() {
        let gs = make_grid(SurfaceSpec::Sphere, 32).unwrap();
        let ok = PotentialSpec::SphereZonal { degree: 1, amplitude: 0.05 };
        ok.require_admissible(&gs).unwrap();
        // f_V = 1 + 2 a t hits 1 - 2a at the south pole: a = 0.6 is not
        // admissible
        let bad = PotentialSpec::SphereZonal { degree: 1, amplitude: 0.6 };
        assert!(matches!(
            bad.require_admissible(&gs),
            Err(Error::Admissibility(_))
        ));
    }

    #[test]
    fn family_surface_mismatch() {
        let v = cos2pix();
        assert!(v.eval(SurfaceSpec::Sphere, Complex64::new(0.0, 0.0)).is_err());
        let z = PotentialSpec::SphereZonal { degree: 1, amplitude: 0.1 };
        assert!(z.check_surface(torus(0.0, 1.0)).is_err());
    }
}
