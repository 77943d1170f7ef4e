//! The geometric functionals: Liouville, Mabuchi, Aubin-Yau, the magnetic
//! S_1/S_2 pair, Ricci potential and Polyakov functional, the heat-kernel
//! functional pieces, and the equilibrium measure.
//!
//! Every metric handled here is conformal over the canonical one,
//! rho = e^{2 sigma} rho_can, which makes the Dirichlet forms
//! mu_rho (f Delta_rho g) = mu_can (f Delta_can g) metric-independent and
//! reduces all integrals to canonical quadrature with e^{2 sigma} weights.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::geometry::{
    canonical_curvature, integrate_against_green, laplacian_can_field, sigma_arakelov,
    solve_laplacian_can, PotentialSpec, QuadratureGrid, ScalarField, SurfaceSpec,
};
use crate::numeric::kahan_sum;
use crate::Result;

use core::f64::consts::PI;

/// Reference metric rho_0 = e^{2 sigma_0} rho_can.
#[derive(Debug, Clone, Copy)]
pub enum RefMetric<'a> {
    Canonical,
    Arakelov,
    /// e^{2 sigma} rho_can for a sampled log-factor sigma.
    Conformal(&'a ScalarField),
}

impl<'a> RefMetric<'a> {
    /// Log conformal factor relative to the canonical metric.
    pub fn log_factor(&self, grid: &QuadratureGrid) -> Result<ScalarField> {
        Ok(match self {
            RefMetric::Canonical => ScalarField::zeros(grid),
            RefMetric::Arakelov => ScalarField::constant(grid, sigma_arakelov(grid.surface)),
            RefMetric::Conformal(s) => {
                grid.check_field(s)?;
                (*s).clone()
            }
        })
    }

    /// Volume of (M, rho_0), by quadrature.
    pub fn volume(&self, grid: &QuadratureGrid) -> Result<f64> {
        match self {
            RefMetric::Canonical => Ok(1.0),
            _ => {
                let s = self.log_factor(grid)?;
                Ok(kahan_sum(
                    (0..grid.len()).map(|i| grid.w_can(i) * libm::exp(2.0 * s.values[i])),
                ))
            }
        }
    }

    /// Integral of f against the volume form of rho_0.
    pub fn integrate(&self, grid: &QuadratureGrid, f: &ScalarField) -> Result<f64> {
        grid.check_field(f)?;
        match self {
            RefMetric::Canonical => grid.integrate_can(f),
            _ => {
                let s = self.log_factor(grid)?;
                Ok(kahan_sum((0..grid.len()).map(|i| {
                    grid.w_can(i) * libm::exp(2.0 * s.values[i]) * f.values[i]
                })))
            }
        }
    }

    /// Scalar curvature field of rho_0: e^{-2 sigma}(R_can + 2 Delta_can sigma).
    pub fn curvature(&self, grid: &QuadratureGrid) -> Result<ScalarField> {
        let r_can = canonical_curvature(grid.surface);
        match self {
            RefMetric::Canonical => Ok(ScalarField::constant(grid, r_can)),
            RefMetric::Arakelov => {
                let s = sigma_arakelov(grid.surface);
                Ok(ScalarField::constant(grid, r_can * libm::exp(-2.0 * s)))
            }
            RefMetric::Conformal(s) => {
                grid.check_field(s)?;
                let lap = laplacian_can_field(grid, s)?;
                Ok(ScalarField {
                    values: (0..grid.len())
                        .map(|i| libm::exp(-2.0 * s.values[i]) * (r_can + 2.0 * lap.values[i]))
                        .collect(),
                })
            }
        }
    }

    /// int mu_0 R_0 f; by conformal covariance mu_0 R_0 = mu_can (R_can
    /// + 2 Delta_can sigma_0), so no exponential factors are needed.
    fn integrate_curvature_weighted(&self, grid: &QuadratureGrid, f: &ScalarField) -> Result<f64> {
        grid.check_field(f)?;
        let r_can = canonical_curvature(grid.surface);
        match self {
            RefMetric::Canonical | RefMetric::Arakelov => {
                Ok(kahan_sum((0..grid.len()).map(|i| grid.w_can(i) * r_can * f.values[i])))
            }
            RefMetric::Conformal(s) => {
                let lap = laplacian_can_field(grid, s)?;
                Ok(kahan_sum((0..grid.len()).map(|i| {
                    grid.w_can(i) * (r_can + 2.0 * lap.values[i]) * f.values[i]
                })))
            }
        }
    }
}

/// Dirichlet pairing int mu_can f Delta_can g; conformally invariant, so it
/// equals int mu_rho f Delta_rho g for every reference used here.
fn dirichlet(grid: &QuadratureGrid, f: &ScalarField, g: &ScalarField) -> Result<f64> {
    let lap = laplacian_can_field(grid, g)?;
    grid.integrate_can(&f.zip(&lap, |a, b| a * b))
}

/// Liouville functional S_L(sigma, rho_0) =
///   int mu_0 (sigma Delta_0 sigma + R_0 sigma).
pub fn s_liouville(grid: &QuadratureGrid, sigma: &ScalarField, reference: RefMetric) -> Result<f64> {
    Ok(dirichlet(grid, sigma, sigma)? + reference.integrate_curvature_weighted(grid, sigma)?)
}

/// Mabuchi functional, the four-term integral
///   int mu_0 [ -2 pi (1-g) phi Delta_0 phi
///              + (8 pi (1-g)/vol_0 - R_0) phi
///              + 4 sigma e^{2 sigma} / vol_rho ].
pub fn s_mabuchi(
    grid: &QuadratureGrid,
    sigma: &ScalarField,
    phi: &ScalarField,
    reference: RefMetric,
) -> Result<f64> {
    grid.check_field(sigma)?;
    grid.check_field(phi)?;
    let g = grid.surface.genus() as f64;
    let vol0 = reference.volume(grid)?;
    let s0 = reference.log_factor(grid)?;
    let vol_rho = kahan_sum(
        (0..grid.len()).map(|i| grid.w_can(i) * libm::exp(2.0 * (s0.values[i] + sigma.values[i]))),
    );
    let t1 = -2.0 * PI * (1.0 - g) * dirichlet(grid, phi, phi)?;
    let t2 = 8.0 * PI * (1.0 - g) / vol0 * reference.integrate(grid, phi)?;
    let t3 = -reference.integrate_curvature_weighted(grid, phi)?;
    let t4 = 4.0 / vol_rho
        * kahan_sum((0..grid.len()).map(|i| {
            grid.w_can(i)
                * libm::exp(2.0 * s0.values[i])
                * sigma.values[i]
                * libm::exp(2.0 * sigma.values[i])
        }));
    Ok(t1 + t2 + t3 + t4)
}

/// Aubin-Yau functional S_AY(phi, rho_0) =
///   -int mu_0 (phi Delta_0 phi / 4 - phi / vol_0).
pub fn s_aubin_yau(grid: &QuadratureGrid, phi: &ScalarField, reference: RefMetric) -> Result<f64> {
    let vol0 = reference.volume(grid)?;
    Ok(-0.25 * dirichlet(grid, phi, phi)? + reference.integrate(grid, phi)? / vol0)
}

/// Normalized magnetic density b_0 = B(rho_0, h_0)/k for an admissible h_0:
/// 2 pi e^{-2 sigma_0}, so that int mu_0 b_0 = 2 pi.
pub fn admissible_b0(grid: &QuadratureGrid, reference: RefMetric) -> Result<ScalarField> {
    let s0 = reference.log_factor(grid)?;
    Ok(s0.map(|s| 2.0 * PI * libm::exp(-2.0 * s)))
}

/// S_1(sigma, psi, rho_0, h_0) = (1/2pi) int mu_0 [ -psi R_0 / 2
///   + 2 sigma (b_0 - Delta_0 psi / 2) ].
pub fn s1(
    grid: &QuadratureGrid,
    sigma: &ScalarField,
    psi: &ScalarField,
    reference: RefMetric,
    b0: &ScalarField,
) -> Result<f64> {
    grid.check_field(b0)?;
    let curv_part = -0.5 * reference.integrate_curvature_weighted(grid, psi)?;
    let mag_part = 2.0 * reference.integrate(grid, &sigma.zip(b0, |s, b| s * b))?;
    let dir_part = -dirichlet(grid, sigma, psi)?;
    Ok((curv_part + mag_part + dir_part) / (2.0 * PI))
}

/// S_2(psi, rho_0, h_0) = (1/2pi) int mu_0 [ -psi Delta_0 psi / 4 + b_0 psi ].
pub fn s2(
    grid: &QuadratureGrid,
    psi: &ScalarField,
    reference: RefMetric,
    b0: &ScalarField,
) -> Result<f64> {
    grid.check_field(b0)?;
    let dir = -0.25 * dirichlet(grid, psi, psi)?;
    let lin = reference.integrate(grid, &psi.zip(b0, |p, b| p * b))?;
    Ok((dir + lin) / (2.0 * PI))
}

/// Ricci potential: Delta_rho Psi = R_rho - Rbar_rho with zero rho-mean.
/// Identically zero for the constant-curvature canonical and Arakelov
/// metrics on genus <= 1; solved spectrally for a conformal metric on the
/// torus.
pub fn ricci_potential(grid: &QuadratureGrid, reference: RefMetric) -> Result<ScalarField> {
    match reference {
        RefMetric::Canonical | RefMetric::Arakelov => Ok(ScalarField::zeros(grid)),
        RefMetric::Conformal(sigma) => {
            if grid.surface.genus() != 1 {
                return Err(Error::UnsupportedGenus(grid.surface.genus()));
            }
            grid.check_field(sigma)?;
            // torus: R_can = 0 and Rbar_rho = 0, so Delta_can Psi = 2 Delta_can sigma
            let rhs = laplacian_can_field(grid, sigma)?.scale(2.0);
            let psi = solve_laplacian_can(grid, &rhs)?;
            let vol = reference.volume(grid)?;
            let mean = reference.integrate(grid, &psi)? / vol;
            Ok(psi.map(|v| v - mean))
        }
    }
}

/// Polyakov functional Psi_P(rho) = (1/4) int mu_rho R_rho Psi.
pub fn polyakov(grid: &QuadratureGrid, reference: RefMetric) -> Result<f64> {
    match reference {
        RefMetric::Canonical | RefMetric::Arakelov => Ok(0.0),
        RefMetric::Conformal(_) => {
            let psi = ricci_potential(grid, reference)?;
            Ok(0.25 * reference.integrate_curvature_weighted(grid, &psi)?)
        }
    }
}

/// k-independent pieces of the heat-kernel functional
///   F(rho, h) = (k ln k)/2 + k_coeff k + lnk_coeff ln k + constant,
/// for a normalized positive magnetic density b (int mu_rho b = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FCurlyPieces {
    pub k_coeff: f64,
    pub lnk_coeff: f64,
    pub constant: f64,
}

impl FCurlyPieces {
    /// Assemble F(rho, h) for a degree k.
    pub fn eval(&self, k: f64) -> f64 {
        0.5 * k * libm::log(k) + self.k_coeff * k + self.lnk_coeff * libm::log(k) + self.constant
    }
}

/// Split F(rho, h) into its k-pieces:
///   k_coeff   = (1/2) int mu_rho b ln b
///   lnk_coeff = 2 (1-g) / 3
///   constant  = (1/12 pi) int mu_rho R_rho ln b
///             - (1/48 pi) int mu_rho ln b Delta_rho ln b
///
/// The gradient term carries a minus sign in the positive-Laplacian
/// convention (it is -(1/96 pi) int |grad ln B|^2): exact Gram evaluations
/// of the sphere and torus partition functions with a potential reject the
/// opposite sign for the constant it feeds.
pub fn f_curly(grid: &QuadratureGrid, reference: RefMetric, b: &ScalarField) -> Result<FCurlyPieces> {
    grid.check_field(b)?;
    if b.min() <= 0.0 {
        return Err(Error::NonPositiveParameter("magnetic density b"));
    }
    let mass = reference.integrate(grid, b)?;
    if libm::fabs(mass - 1.0) > 1e-8 {
        return Err(Error::IdentityCheck(mass - 1.0));
    }
    let genus = grid.surface.genus() as f64;
    let ln_b = b.map(libm::log);
    let k_coeff = 0.5 * reference.integrate(grid, &b.zip(&ln_b, |bv, lv| bv * lv))?;
    let lnk_coeff = 2.0 * (1.0 - genus) / 3.0;
    let curv = reference.integrate_curvature_weighted(grid, &ln_b)? / (12.0 * PI);
    let dir = dirichlet(grid, &ln_b, &ln_b)? / (48.0 * PI);
    Ok(FCurlyPieces { k_coeff, lnk_coeff, constant: curv - dir })
}

/// Equilibrium measure data for a quasi-subharmonic potential.
#[derive(Debug, Clone)]
pub struct EquilibriumData {
    /// density factor f_V = 1 + Delta_can V / 4 pi, sampled
    pub f_v: ScalarField,
    /// quadrature weights of mu_V = f_V mu_can
    pub mu_v_weights: Vec<f64>,
    /// c_V = 2 pi int mu_can V
    pub c_v: f64,
}

/// Deterministic probe points used by the equilibrium identity check.
pub fn probe_points(surface: SurfaceSpec, count: usize) -> Vec<Complex64> {
    let mut state = 0x5DEECE66Du64;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..count)
        .map(|_| match surface {
            SurfaceSpec::Sphere => {
                let u = 0.1 + 0.8 * next();
                let th = 2.0 * PI * next();
                let r = libm::sqrt(u / (1.0 - u));
                Complex64::new(r * libm::cos(th), r * libm::sin(th))
            }
            SurfaceSpec::Torus(tau) => {
                let x = next();
                let y = next();
                Complex64::new(x, 0.0) + tau.get() * y
            }
        })
        .collect()
}

/// Build the equilibrium volume form mu_V = f_V mu_can and verify
/// int mu_V G(., y) + V(y)/2 = c_V at five deterministic points, to 1e-4.
pub fn equilibrium(grid: &QuadratureGrid, potential: &PotentialSpec) -> Result<EquilibriumData> {
    potential.check_surface(grid.surface)?;
    let min_fv = potential.min_f_v(grid)?;
    if min_fv <= 1e-6 {
        return Err(Error::Admissibility(min_fv));
    }
    let lap = potential.laplacian_canonical(grid)?;
    let f_v = lap.map(|l| 1.0 + l / (4.0 * PI));
    let mu_v_weights: Vec<f64> = (0..grid.len()).map(|i| grid.w_can(i) * f_v.values[i]).collect();
    let mass = kahan_sum(mu_v_weights.iter().copied());
    if libm::fabs(mass - 1.0) > 1e-8 {
        return Err(Error::IdentityCheck(mass - 1.0));
    }
    let v = potential.sample(grid)?;
    let c_v = 2.0 * PI * grid.integrate_can(&v)?;

    let surface = grid.surface;
    for y in probe_points(surface, 5) {
        let weighted = integrate_against_green(
            grid,
            &|z| potential.f_v_eval(surface, z).unwrap_or(f64::NAN),
            y,
        )?;
        let defect = weighted + 0.5 * potential.eval(surface, y)? - c_v;
        if libm::fabs(defect) > 1e-4 {
            return Err(Error::IdentityCheck(defect));
        }
    }
    Ok(EquilibriumData { f_v, mu_v_weights, c_v })
}

/// Deterministic smooth torus field from a handful of low-frequency modes;
/// the cocycle-law suites draw their random fields from this.
pub fn random_smooth_field(grid: &QuadratureGrid, seed: u64, amplitude: f64) -> ScalarField {
    let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).max(1);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut modes = Vec::new();
    for m in -2i32..=2 {
        for n in -2i32..=2 {
            if (m, n) <= (0, 0) {
                continue;
            }
            modes.push((m, n, next(), next()));
        }
    }
    let tau = match grid.surface {
        SurfaceSpec::Torus(t) => t.get(),
        SurfaceSpec::Sphere => Complex64::new(0.0, 1.0),
    };
    ScalarField::from_fn(grid, |z| {
        let y = z.im / tau.im;
        let x = z.re - tau.re * y;
        let mut v = 0.0;
        for &(m, n, cr, ci) in &modes {
            let ph = 2.0 * PI * (m as f64 * x + n as f64 * y);
            let (s, co) = libm::sincos(ph);
            v += 2.0 * amplitude * (cr * co - ci * s);
        }
        v
    })
}

/// Kaehler potential phi of the metric e^{2 sigma} rho_can, solved from
/// Delta_can phi = 2 (1 - e^{2 sigma}/vol_rho) on the torus; defined up to
/// a constant (zero mode gauged to zero).
pub fn kaehler_potential_from_sigma(
    grid: &QuadratureGrid,
    sigma: &ScalarField,
) -> Result<ScalarField> {
    grid.check_field(sigma)?;
    let vol = kahan_sum((0..grid.len()).map(|i| grid.w_can(i) * libm::exp(2.0 * sigma.values[i])));
    let rhs = sigma.map(|s| 2.0 * (1.0 - libm::exp(2.0 * s) / vol));
    solve_laplacian_can(grid, &rhs)
}

/// A log conformal factor together with its compatible Kaehler potential,
/// both describing the same metric e^{2 sigma} rho_0. Pairs compose
/// additively, which is what the Mabuchi cocycle law needs.
#[derive(Debug, Clone)]
pub struct ConformalPair {
    pub sigma: ScalarField,
    pub phi: ScalarField,
}

impl ConformalPair {
    /// Build the compatible pair over the canonical torus metric.
    pub fn from_sigma(grid: &QuadratureGrid, sigma: ScalarField) -> Result<Self> {
        let phi = kaehler_potential_from_sigma(grid, &sigma)?;
        Ok(Self { sigma, phi })
    }
}
