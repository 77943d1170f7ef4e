//! Theta functions and the Dedekind eta function.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::numeric::{spd_solve_small, sym_eig_min};
use crate::Result;

use core::f64::consts::PI;

/// Genus-1 modulus tau with Im(tau) > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusModulus {
    tau: Complex64,
}

impl TorusModulus {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::NonFinite);
        }
        if tau.im <= 0.0 {
            return Err(Error::InvalidModulus);
        }
        Ok(Self { tau })
    }

    #[inline]
    pub fn get(&self) -> Complex64 {
        self.tau
    }

    #[inline]
    pub fn im(&self) -> f64 {
        self.tau.im
    }
}

/// Theta characteristic [a; b] stored as exact rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaCharacteristic {
    a_num: i64,
    a_den: i64,
    b_num: i64,
    b_den: i64,
}

impl ThetaCharacteristic {
    pub fn new(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> Result<Self> {
        if a_den == 0 || b_den == 0 {
            return Err(Error::InvalidArgument("zero denominator in characteristic"));
        }
        let (a_num, a_den) = if a_den < 0 { (-a_num, -a_den) } else { (a_num, a_den) };
        let (b_num, b_den) = if b_den < 0 { (-b_num, -b_den) } else { (b_num, b_den) };
        Ok(Self { a_num, a_den, b_num, b_den })
    }

    pub fn a(&self) -> f64 {
        self.a_num as f64 / self.a_den as f64
    }

    pub fn b(&self) -> f64 {
        self.b_num as f64 / self.b_den as f64
    }
}

/// Symmetric g x g period matrix with positive definite imaginary part,
/// g <= 3.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodMatrix {
    g: usize,
    tau: Vec<Complex64>,
    /// smallest eigenvalue of Im(tau), cached for truncation radii
    lambda_min: f64,
}

impl PeriodMatrix {
    pub fn new(g: usize, tau: Vec<Complex64>) -> Result<Self> {
        if g == 0 || g > 3 {
            return Err(Error::UnsupportedGenus(g as u32));
        }
        if tau.len() != g * g {
            return Err(Error::DimensionMismatch);
        }
        for v in &tau {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        for i in 0..g {
            for j in (i + 1)..g {
                if (tau[i * g + j] - tau[j * g + i]).norm() > 1e-12 {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        let im: Vec<f64> = tau.iter().map(|v| v.im).collect();
        let lambda_min = sym_eig_min(&im, g);
        if lambda_min <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self { g, tau, lambda_min })
    }

    pub fn genus_one(tau: TorusModulus) -> Self {
        Self {
            g: 1,
            tau: vec![tau.get()],
            lambda_min: tau.im(),
        }
    }

    #[inline]
    pub fn genus(&self) -> usize {
        self.g
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.tau[i * self.g + j]
    }

    pub fn im_matrix(&self) -> Vec<f64> {
        self.tau.iter().map(|v| v.im).collect()
    }

    /// det Im(tau), by cofactor expansion (g <= 3).
    pub fn det_im(&self) -> f64 {
        let m = self.im_matrix();
        match self.g {
            1 => m[0],
            2 => m[0] * m[3] - m[1] * m[2],
            3 => {
                m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                    + m[2] * (m[3] * m[7] - m[4] * m[6])
            }
            _ => unreachable!(),
        }
    }
}

/// Lattice truncation radius for a Gaussian tail exp(-pi lambda R^2) < 1e-16.
fn truncation_radius(lambda_min: f64) -> i64 {
    let r = libm::sqrt(16.0 * libm::log(10.0) / (PI * lambda_min));
    libm::ceil(r) as i64 + 2
}

const MAX_TERMS: usize = 4_000_000;

/// First Jacobi theta function, standard nome convention q = exp(i pi tau):
///
/// theta_1(z, tau) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi z)
pub fn jacobi_theta1(z: Complex64, tau: TorusModulus) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite);
    }
    let t = tau.get();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut running_max = 0.0f64;
    let i_pi_tau = Complex64::new(0.0, PI) * t;
    for n in 0..10_000u32 {
        let half = n as f64 + 0.5;
        let qpow = (i_pi_tau * (half * half)).exp();
        let term = qpow * ((2 * n + 1) as f64 * PI * z).sin();
        let term = if n % 2 == 0 { term } else { -term };
        sum += term;
        let mag = term.norm();
        running_max = running_max.max(mag);
        if n > 1 && mag <= 1e-16 * running_max {
            return Ok(2.0 * sum);
        }
    }
    Err(Error::SeriesDivergence)
}

/// Dedekind eta, q-product with q = exp(2 i pi tau), truncated at
/// |q|^n < 1e-18.
pub fn dedekind_eta(tau: TorusModulus) -> Complex64 {
    let t = tau.get();
    let q = (Complex64::new(0.0, 2.0 * PI) * t).exp();
    let qn_abs = q.norm();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qn = q;
    let mut mag = qn_abs;
    while mag >= 1e-18 {
        prod *= Complex64::new(1.0, 0.0) - qn;
        qn *= q;
        mag *= qn_abs;
    }
    let prefactor = (Complex64::new(0.0, 2.0 * PI) * t / 24.0).exp();
    prefactor * prod
}

/// Riemann theta, genus g <= 3:
///
/// theta(z, tau) = sum_{n in Z^g} exp(i pi n^T tau n + 2 i pi n^T z)
///
/// The lattice box is centered at round(-Im(tau)^{-1} Im(z)) so the largest
/// terms are always inside it; the half-width R is chosen from the Gaussian
/// tail bound exp(-pi lambda_min R^2) < 1e-16.
pub fn riemann_theta(z: &[Complex64], tau: &PeriodMatrix) -> Result<Complex64> {
    let g = tau.genus();
    if z.len() != g {
        return Err(Error::DimensionMismatch);
    }
    for v in z {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite);
        }
    }
    let r = truncation_radius(tau.lambda_min);
    let im_z: Vec<f64> = z.iter().map(|v| v.im).collect();
    let shift = spd_solve_small(&tau.im_matrix(), &im_z, g)?;
    let center: Vec<i64> = shift.iter().map(|&s| libm::round(-s) as i64).collect();

    let side = (2 * r + 1) as usize;
    let count = side.pow(g as u32);
    if count > MAX_TERMS {
        return Err(Error::SeriesDivergence);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut n = vec![0i64; g];
    for flat in 0..count {
        let mut rem = flat;
        for k in 0..g {
            n[k] = center[k] + (rem % side) as i64 - r;
            rem /= side;
        }
        // i pi n^T tau n + 2 i pi n^T z
        let mut quad = Complex64::new(0.0, 0.0);
        for a in 0..g {
            for b in 0..g {
                quad += tau.entry(a, b) * (n[a] * n[b]) as f64;
            }
        }
        let mut lin = Complex64::new(0.0, 0.0);
        for a in 0..g {
            lin += z[a] * n[a] as f64;
        }
        sum += (Complex64::new(0.0, PI) * quad + Complex64::new(0.0, 2.0 * PI) * lin).exp();
    }
    Ok(sum)
}

/// ||theta(z, tau)||^2 = exp(-2 pi Im(z)^T Im(tau)^{-1} Im(z)) |theta(z, tau)|^2.
///
/// Invariant under z -> z + m + tau n for integer vectors m, n.
pub fn theta_norm_sq(z: &[Complex64], tau: &PeriodMatrix) -> Result<f64> {
    let g = tau.genus();
    if z.len() != g {
        return Err(Error::DimensionMismatch);
    }
    let th = riemann_theta(z, tau)?;
    let im_z: Vec<f64> = z.iter().map(|v| v.im).collect();
    let y_inv_imz = spd_solve_small(&tau.im_matrix(), &im_z, g)?;
    let mut quad = 0.0;
    for a in 0..g {
        quad += im_z[a] * y_inv_imz[a];
    }
    Ok(libm::exp(-2.0 * PI * quad) * th.norm_sqr())
}

/// Genus-1 theta with characteristic:
///
/// theta[a;b](z, tau) = sum_n exp(i pi (n+a)^2 tau + 2 i pi (n+a)(z+b))
pub fn theta_with_char(
    ch: ThetaCharacteristic,
    z: Complex64,
    tau: TorusModulus,
) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite);
    }
    let t = tau.get();
    let a = ch.a();
    let b = ch.b();
    let r = truncation_radius(tau.im());
    // peak of |exp| is at n + a = -Im(z)/Im(tau)
    let center = libm::round(-z.im / tau.im() - a) as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in -r..=r {
        let n = (center + k) as f64 + a;
        let arg = Complex64::new(0.0, PI) * t * (n * n)
            + Complex64::new(0.0, 2.0 * PI) * (z + b) * n;
        sum += arg.exp();
    }
    Ok(sum)
}
