//! Named identity suites: each checks one family of exact relations and
//! reports the worst deviation against its default tolerance. The CLI
//! `identities` command and the acceptance suite both run these.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::exactpf::{
    c_tilde, c_tilde_asymptotic, det_scalar_laplacian, ln_det_magnetic_sphere, ln_z_sphere_exact,
    DetMetric,
};
use crate::expansion::{ln_b_gk, theta_integral_check};
use crate::functionals::{
    admissible_b0, equilibrium, probe_points, random_smooth_field, s1, s2, s_aubin_yau,
    s_liouville, s_mabuchi, ConformalPair, RefMetric,
};
use crate::geometry::{
    integrate_against_green, laplacian_can_field, make_grid, FourierMode, PotentialSpec,
    ScalarField, SurfaceSpec,
};
use crate::specfun::{PeriodMatrix, TorusModulus};
use crate::Result;

use core::f64::consts::PI;

/// One verified identity: name, worst deviation, tolerance it must meet.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
}

impl IdentityReport {
    pub fn passes(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

/// The suite names the harness can select with --only.
pub const SUITE_NAMES: [&str; 6] = [
    "cocycle-laws",
    "theta-lemma",
    "zeta-k-two-route",
    "bosonization-closure",
    "c-tilde",
    "equilibrium",
];

/// Run one suite by name with its default parameters.
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<IdentityReport>> {
    match name {
        "cocycle-laws" => cocycle_laws(64, seed),
        "theta-lemma" => theta_lemma(256, 24),
        "zeta-k-two-route" => zeta_k_two_route(20),
        "bosonization-closure" => bosonization_closure(50),
        "c-tilde" => c_tilde_decay(),
        "equilibrium" => equilibrium_identities(64),
        _ => Err(Error::InvalidArgument("unknown identity suite")),
    }
}

fn tau_i() -> TorusModulus {
    TorusModulus::new(Complex64::new(0.0, 1.0)).unwrap()
}

/// Cocycle and constant-shift laws of the geometric functionals, on seeded
/// smooth torus fields at the given resolution. Tolerance 1e-5.
pub fn cocycle_laws(resolution: usize, seed: u64) -> Result<Vec<IdentityReport>> {
    let surf = SurfaceSpec::Torus(tau_i());
    let g = make_grid(surf, resolution)?;
    let tol = 1e-5;
    let s1f = random_smooth_field(&g, seed, 0.05);
    let s2f = random_smooth_field(&g, seed.wrapping_add(1), 0.04);
    let mut out = Vec::new();

    // Liouville
    let a = s_liouville(&g, &s1f, RefMetric::Canonical)?;
    let anti = a + s_liouville(&g, &s1f.scale(-1.0), RefMetric::Conformal(&s1f))?;
    out.push(IdentityReport { name: "liouville-antisymmetry", deviation: libm::fabs(anti), tolerance: tol });
    let comp = s_liouville(&g, &s1f.add(&s2f), RefMetric::Canonical)?
        - a
        - s_liouville(&g, &s2f, RefMetric::Conformal(&s1f))?;
    out.push(IdentityReport { name: "liouville-composition", deviation: libm::fabs(comp), tolerance: tol });

    // Mabuchi, with compatible Kaehler potentials
    let pair1 = ConformalPair::from_sigma(&g, s1f.clone())?;
    let pair12 = ConformalPair::from_sigma(&g, s1f.add(&s2f))?;
    let p2 = pair12.phi.zip(&pair1.phi, |x, y| x - y);
    let m1 = s_mabuchi(&g, &pair1.sigma, &pair1.phi, RefMetric::Canonical)?;
    let anti = m1
        + s_mabuchi(
            &g,
            &pair1.sigma.scale(-1.0),
            &pair1.phi.scale(-1.0),
            RefMetric::Conformal(&s1f),
        )?;
    out.push(IdentityReport { name: "mabuchi-antisymmetry", deviation: libm::fabs(anti), tolerance: tol });
    let comp = s_mabuchi(&g, &pair12.sigma, &pair12.phi, RefMetric::Canonical)?
        - m1
        - s_mabuchi(&g, &s2f, &p2, RefMetric::Conformal(&s1f))?;
    out.push(IdentityReport { name: "mabuchi-composition", deviation: libm::fabs(comp), tolerance: tol });

    // S1 / S2 antisymmetry under the paired metric changes
    let b0 = admissible_b0(&g, RefMetric::Canonical)?;
    let psi = random_smooth_field(&g, seed.wrapping_add(2), 0.04);
    let lap_psi = laplacian_can_field(&g, &psi)?;
    let b_changed = ScalarField {
        values: (0..g.len())
            .map(|i| {
                libm::exp(-2.0 * s1f.values[i]) * (b0.values[i] - 0.5 * lap_psi.values[i])
            })
            .collect(),
    };
    let v1 = s1(&g, &s1f, &psi, RefMetric::Canonical, &b0)?;
    let anti = v1
        + s1(&g, &s1f.scale(-1.0), &psi.scale(-1.0), RefMetric::Conformal(&s1f), &b_changed)?;
    out.push(IdentityReport { name: "s1-antisymmetry", deviation: libm::fabs(anti), tolerance: tol });
    let b_changed2 = ScalarField {
        values: (0..g.len()).map(|i| b0.values[i] - 0.5 * lap_psi.values[i]).collect(),
    };
    let v2 = s2(&g, &psi, RefMetric::Canonical, &b0)?;
    let anti = v2 + s2(&g, &psi.scale(-1.0), RefMetric::Canonical, &b_changed2)?;
    out.push(IdentityReport { name: "s2-antisymmetry", deviation: libm::fabs(anti), tolerance: tol });

    // constant-shift laws
    let c = 0.73;
    let ay = s_aubin_yau(&g, &pair1.phi, RefMetric::Canonical)?;
    let ay_shift = s_aubin_yau(&g, &pair1.phi.map(|v| v + c), RefMetric::Canonical)? - ay - c;
    out.push(IdentityReport { name: "aubin-yau-shift", deviation: libm::fabs(ay_shift), tolerance: tol });
    let s2_shift = s2(&g, &psi.map(|v| v + c), RefMetric::Canonical, &b0)? - v2 - c;
    out.push(IdentityReport { name: "s2-shift", deviation: libm::fabs(s2_shift), tolerance: tol });
    // S1 shift is 2(g-1)c = 0 on the torus
    let s1_shift = s1(&g, &s1f, &psi.map(|v| v + c), RefMetric::Canonical, &b0)? - v1;
    out.push(IdentityReport { name: "s1-shift", deviation: libm::fabs(s1_shift), tolerance: tol });
    Ok(out)
}

/// Theta-integral lemma at genus 1 (three moduli) and genus 2 (diagonal).
pub fn theta_lemma(res_g1: usize, res_g2: usize) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    let taus = [
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(0.3, 1.7),
    ];
    let names = ["theta-lemma-g1-i", "theta-lemma-g1-2i", "theta-lemma-g1-skew"];
    for (t, name) in taus.iter().zip(names) {
        let pm = PeriodMatrix::genus_one(TorusModulus::new(*t)?);
        let (num, closed) = theta_integral_check(1, &pm, res_g1)?;
        out.push(IdentityReport { name, deviation: libm::fabs(num - closed), tolerance: 1e-8 });
    }
    let z0 = Complex64::new(0.0, 0.0);
    let diag = PeriodMatrix::new(
        2,
        vec![Complex64::new(0.0, 1.0), z0, z0, Complex64::new(0.0, 2.0)],
    )?;
    let (num, closed) = theta_integral_check(2, &diag, res_g2)?;
    out.push(IdentityReport {
        name: "theta-lemma-g2-diag",
        deviation: libm::fabs(num - closed),
        tolerance: 1e-6,
    });
    Ok(out)
}

/// Two-route zeta_k'(0) agreement and the zeta_k(0) companion value.
pub fn zeta_k_two_route(k_max: u64) -> Result<Vec<IdentityReport>> {
    let mut worst = 0.0f64;
    for k in 0..=k_max {
        let (closed, series) = crate::exactpf::zeta_k_prime_zero(k)?;
        worst = worst.max(libm::fabs(closed - series));
    }
    let mut companion = 0.0f64;
    for k in 0..=k_max {
        let expect = -(k as f64) / 2.0 - 2.0 / 3.0;
        companion = companion.max(libm::fabs(crate::exactpf::zeta_k_zero(k) - expect));
    }
    Ok(vec![
        IdentityReport { name: "zeta-k-prime-two-routes", deviation: worst, tolerance: 1e-9 },
        IdentityReport { name: "zeta-k-zero-companion", deviation: companion, tolerance: 0.0 },
    ])
}

/// Bosonization closure at genus 0:
/// ln Z(N) = ln det box(N-1) - ln B_{0,N-1} + (1/2) ln(det Delta_Ar / pi e).
pub fn bosonization_closure(n_max: u64) -> Result<Vec<IdentityReport>> {
    let half_ratio = 0.5
        * (det_scalar_laplacian(SurfaceSpec::Sphere, DetMetric::Arakelov)
            - libm::log(PI * core::f64::consts::E));
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        let k = n - 1;
        let rhs = ln_det_magnetic_sphere(k) - ln_b_gk(0, k)?.ln_b + half_ratio;
        worst = worst.max(libm::fabs(ln_z_sphere_exact(n) - rhs));
    }
    Ok(vec![IdentityReport {
        name: "bosonization-closure-sphere",
        deviation: worst,
        tolerance: 1e-10,
    }])
}

/// c-tilde exact-vs-asymptotic residual: small at n = 100 and decreasing
/// through {25, 50, 100, 200}.
pub fn c_tilde_decay() -> Result<Vec<IdentityReport>> {
    let r = |n: u64| -> Result<f64> { Ok(libm::fabs(c_tilde(n)? - c_tilde_asymptotic(n))) };
    let r100 = r(100)?;
    let mut largest_increase = f64::NEG_INFINITY;
    let mut prev = r(25)?;
    for n in [50u64, 100, 200] {
        let cur = r(n)?;
        largest_increase = largest_increase.max(cur - prev);
        prev = cur;
    }
    Ok(vec![
        IdentityReport { name: "c-tilde-residual-at-100", deviation: r100, tolerance: 5e-2 },
        IdentityReport { name: "c-tilde-monotone-decay", deviation: largest_increase, tolerance: 0.0 },
    ])
}

/// Equilibrium-measure identities for the two builtin potential families:
/// unit mass of mu_V and y-independence of int mu_V G + V/2.
pub fn equilibrium_identities(resolution: usize) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    let cases: [(&'static str, &'static str, SurfaceSpec, PotentialSpec); 2] = [
        (
            "equilibrium-mass-torus",
            "equilibrium-spread-torus",
            SurfaceSpec::Torus(tau_i()),
            PotentialSpec::TorusFourier(vec![FourierMode {
                m: 1,
                n: 0,
                coeff: Complex64::new(0.05, 0.0),
            }]),
        ),
        (
            "equilibrium-mass-sphere",
            "equilibrium-spread-sphere",
            SurfaceSpec::Sphere,
            PotentialSpec::SphereZonal { degree: 1, amplitude: 0.05 },
        ),
    ];
    for (mass_name, spread_name, surf, pot) in cases {
        let grid = make_grid(surf, resolution)?;
        let eq = equilibrium(&grid, &pot)?;
        let mass: f64 = crate::numeric::kahan_sum(eq.mu_v_weights.iter().copied());
        out.push(IdentityReport {
            name: mass_name,
            deviation: libm::fabs(mass - 1.0),
            tolerance: 1e-8,
        });
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for y in probe_points(surf, 5) {
            let w = integrate_against_green(
                &grid,
                &|z| pot.f_v_eval(surf, z).unwrap_or(f64::NAN),
                y,
            )?;
            let val = w + 0.5 * pot.eval(surf, y)?;
            lo = lo.min(val);
            hi = hi.max(val);
        }
        out.push(IdentityReport { name: spread_name, deviation: hi - lo, tolerance: 1e-4 });
    }
    Ok(out)
}
