//! Quadrature grids and sampled scalar fields.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::numeric::{gauss_legendre_unit, kahan_sum};
use crate::Result;

use super::{canonical_density, SurfaceSpec};

use core::f64::consts::PI;

/// Chart the grid nodes live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// Single stereographic chart of the sphere.
    Stereographic,
    /// Fundamental domain [0,1) x [0,1) of the torus, mapped by x + tau y.
    FundamentalDomain,
}

/// Nodes and weights for surface integrals, in a fixed chart.
///
/// `weights` are with respect to Lebesgue measure dx dy of the chart, so
/// sum(weights * canonical_density(node)) = 1. Node layout is row-major:
/// sphere rows are radial rings (index = i_radial * resolution + j_angular),
/// torus rows are constant y (index = iy * resolution + ix).
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub surface: SurfaceSpec,
    pub chart: Chart,
    pub resolution: usize,
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
    /// canonical probability weights, weights[i] * rho_can(node[i]) in
    /// exact form
    w_can: Vec<f64>,
    /// sphere only: Gauss-Legendre nodes in the radial variable
    /// u = |z|^2/(1+|z|^2)
    radial_u: Vec<f64>,
}

/// Real field sampled on a grid, aligned with its nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &QuadratureGrid) -> Self {
        Self { values: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: &QuadratureGrid, c: f64) -> Self {
        Self { values: vec![c; grid.len()] }
    }

    pub fn from_fn(grid: &QuadratureGrid, f: impl Fn(Complex64) -> f64) -> Self {
        Self { values: grid.nodes.iter().map(|&z| f(z)).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &ScalarField) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Canonical probability weight of node i.
    #[inline]
    pub fn w_can(&self, i: usize) -> f64 {
        self.w_can[i]
    }

    /// Gauss-Legendre radial nodes (sphere grids only).
    pub fn radial_u(&self) -> &[f64] {
        &self.radial_u
    }

    pub fn check_field(&self, f: &ScalarField) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// Integral against the canonical volume form.
    pub fn integrate_can(&self, f: &ScalarField) -> Result<f64> {
        self.check_field(f)?;
        Ok(kahan_sum(
            self.w_can.iter().zip(&f.values).map(|(&w, &v)| w * v),
        ))
    }

    /// Integral of f against Lebesgue chart measure.
    pub fn integrate_lebesgue(&self, f: &ScalarField) -> Result<f64> {
        self.check_field(f)?;
        Ok(kahan_sum(
            self.weights.iter().zip(&f.values).map(|(&w, &v)| w * v),
        ))
    }

    /// Total canonical mass computed the honest way, from Lebesgue weights
    /// times the canonical density. Should be 1 to grid accuracy.
    pub fn canonical_mass(&self) -> f64 {
        kahan_sum(
            self.nodes
                .iter()
                .zip(&self.weights)
                .map(|(&z, &w)| w * canonical_density(self.surface, z)),
        )
    }
}

/// Build a quadrature grid.
///
/// Sphere: tensor Gauss-Legendre in the radial variable u = |z|^2/(1+|z|^2)
/// times uniform angles (the point at infinity is never a node). Torus:
/// uniform resolution x resolution grid on [0,1)^2 mapped by x + tau y with
/// equal Lebesgue weights Im(tau)/resolution^2.
pub fn make_grid(surface: SurfaceSpec, resolution: usize) -> Result<QuadratureGrid> {
    if resolution < 8 {
        return Err(Error::ResolutionTooSmall(resolution));
    }
    match surface {
        SurfaceSpec::Sphere => {
            let (u, wu) = gauss_legendre_unit(resolution);
            let n_ang = resolution;
            let mut nodes = Vec::with_capacity(resolution * n_ang);
            let mut weights = Vec::with_capacity(resolution * n_ang);
            let mut w_can = Vec::with_capacity(resolution * n_ang);
            for i in 0..resolution {
                let r = libm::sqrt(u[i] / (1.0 - u[i]));
                // dA = (1+r^2)^2/2 du dtheta
                let jac = 1.0 / (2.0 * (1.0 - u[i]) * (1.0 - u[i]));
                for j in 0..n_ang {
                    let th = 2.0 * PI * j as f64 / n_ang as f64;
                    nodes.push(Complex64::new(r * libm::cos(th), r * libm::sin(th)));
                    weights.push(wu[i] * (2.0 * PI / n_ang as f64) * jac);
                    w_can.push(wu[i] / n_ang as f64);
                }
            }
            Ok(QuadratureGrid {
                surface,
                chart: Chart::Stereographic,
                resolution,
                nodes,
                weights,
                w_can,
                radial_u: u,
            })
        }
        SurfaceSpec::Torus(tau) => {
            let n = resolution;
            let t = tau.get();
            let w = tau.im() / (n * n) as f64;
            let mut nodes = Vec::with_capacity(n * n);
            for iy in 0..n {
                let y = iy as f64 / n as f64;
                for ix in 0..n {
                    let x = ix as f64 / n as f64;
                    nodes.push(Complex64::new(x + t.re * y, t.im * y));
                }
            }
            Ok(QuadratureGrid {
                surface,
                chart: Chart::FundamentalDomain,
                resolution,
                nodes,
                weights: vec![w; n * n],
                w_can: vec![1.0 / (n * n) as f64; n * n],
                radial_u: Vec::new(),
            })
        }
    }
}
