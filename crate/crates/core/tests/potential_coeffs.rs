//! Independent oracle for the potential-dependent expansion coefficients.
//!
//! The torus modified partition function has an exact Gram representation
//! for any potential: the pairwise |theta_1|^2 factors rewrite into
//! |det theta[j/N;0](N z_i, N tau)|^2, which is potential-independent, so
//!
//!   ln Z_theta(N, V) = N ln(2 pi^2 |eta|^2) + ln|eta|^2 + logdet M(V),
//!   M_jl = int i dz^dzbar e^{-2 N pi Im(z)^2 / Im tau} e^{N V(z)}
//!          theta[j/N;0](N z, N tau) conj(theta[l/N;0](N z, N tau)).
//!
//! At V = 0 the matrix is diagonal with entries sqrt(2 Im tau / N), which
//! reproduces the closed form; with a potential the sweep over N pins the
//! quadratic, linear and constant coefficients of the expansion, including
//! their signs.

use num_complex::Complex64;

use coulomb_core::exactpf::ln_z_theta_torus_exact;
use coulomb_core::expansion::{coeffs_modified, eval_expansion};
use coulomb_core::geometry::{make_grid, FourierMode, PotentialSpec, SurfaceSpec};
use coulomb_core::numeric::{fit_quadratic, log_det_scaled_lu};
use coulomb_core::specfun::{dedekind_eta, theta_with_char, ThetaCharacteristic, TorusModulus};

use std::f64::consts::PI;

fn tau_i() -> TorusModulus {
    TorusModulus::new(Complex64::new(0.0, 1.0)).unwrap()
}

fn ln_z_theta_gram(n: u64, pot: &PotentialSpec, res: usize) -> f64 {
    let tau = tau_i();
    let surf = SurfaceSpec::Torus(tau);
    let grid = make_grid(surf, res).unwrap();
    let ntau = TorusModulus::new(Complex64::new(0.0, n as f64)).unwrap();
    let nn = n as usize;
    let mut m = vec![Complex64::new(0.0, 0.0); nn * nn];
    let mut basis = vec![Complex64::new(0.0, 0.0); nn];
    for (idx, &z) in grid.nodes.iter().enumerate() {
        let gauss = (-2.0 * n as f64 * PI * z.im * z.im / tau.im()).exp();
        for (j, b) in basis.iter_mut().enumerate() {
            let ch = ThetaCharacteristic::new(j as i64, n as i64, 0, 1).unwrap();
            *b = theta_with_char(ch, n as f64 * z, ntau).unwrap();
        }
        let v = pot.eval(surf, z).unwrap();
        // i dz ^ dzbar = 2 dA
        let w = 2.0 * grid.weights[idx] * gauss * (n as f64 * v).exp();
        for j in 0..nn {
            for l in j..nn {
                m[j * nn + l] += basis[j] * basis[l].conj() * w;
            }
        }
    }
    for j in 0..nn {
        for l in 0..j {
            m[j * nn + l] = m[l * nn + j].conj();
        }
    }
    let (logdet, _) = log_det_scaled_lu(&m, nn).unwrap();
    let eta2 = dedekind_eta(tau).norm_sqr();
    n as f64 * (2.0 * PI * PI * eta2).ln() + eta2.ln() + logdet
}

#[test]
fn torus_gram_oracle_matches_closed_form_at_zero_potential() {
    for n in [2u64, 5, 9, 16] {
        let oracle = ln_z_theta_gram(n, &PotentialSpec::Zero, 96);
        let exact = ln_z_theta_torus_exact(n, tau_i());
        assert!(
            (oracle - exact).abs() < 1e-10,
            "N={n}: {oracle} vs {exact}"
        );
    }
}

#[test]
fn torus_gram_oracle_pins_potential_coefficient_signs() {
    let surf = SurfaceSpec::Torus(tau_i());
    let pot = PotentialSpec::TorusFourier(vec![FourierMode {
        m: 1,
        n: 0,
        coeff: Complex64::new(0.05, 0.0),
    }]);
    // assembled coefficients under test
    let grid = make_grid(surf, 64).unwrap();
    let with_v = coeffs_modified(surf, &pot, &grid).unwrap();
    let base = coeffs_modified(surf, &PotentialSpec::Zero, &grid).unwrap();
    let d_quad = with_v.quad - base.quad;
    let d_lin = with_v.linear - base.linear;
    let d_const = with_v.constant - base.constant;

    // oracle sweep; k = N at genus 1
    let ns: Vec<u64> = vec![12, 18, 24, 30, 36];
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let res = (4 * n as usize).max(96);
            ln_z_theta_gram(n, &pot, res) - ln_z_theta_gram(n, &PotentialSpec::Zero, res)
        })
        .collect();
    let (q_fit, l_fit, _) = fit_quadratic(&xs, &ys).unwrap();
    assert!(
        (q_fit - d_quad).abs() < 1e-5,
        "quadratic: fit {q_fit} vs assembled {d_quad}"
    );
    assert!(
        (l_fit - d_lin).abs() < 2e-3,
        "linear: fit {l_fit} vs assembled {d_lin}"
    );
    // both candidate signs of the quadratic part are far apart; make the
    // discrimination explicit
    assert!((q_fit + d_quad).abs() > 1e-2, "sign not discriminated");

    // constant: remainder at the largest N, with the expansion remainder
    // still O(ln N / N); the rejected opposite-sign candidate sits at
    // about -1.4e-2, two orders away from the observed gap
    let y36 = ys[ns.iter().position(|&n| n == 36).unwrap()];
    let rem = y36 - d_quad * 36.0 * 36.0 - d_lin * 36.0;
    assert!(
        (rem - d_const).abs() < 1e-3,
        "constant: remainder {rem} vs assembled {d_const}"
    );
    assert!((rem + d_const).abs() > 1e-2, "constant sign not discriminated");

    // full-expansion agreement at N = 36 to the expansion remainder scale
    let full = eval_expansion(&with_v, 36) - eval_expansion(&base, 36);
    assert!((full - y36).abs() < 1e-3, "{full} vs {y36}");
}
