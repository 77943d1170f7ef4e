//! Small numerical building blocks: compensated summation, Gauss-Legendre
//! nodes, finite-difference weights on arbitrary nodes, and the dense
//! factorizations used for log-determinants.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Kahan compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Sum an iterator with compensation.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = KahanSum::new();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

/// Gauss-Legendre nodes and weights on [0, 1].
///
/// Newton iteration on the Legendre polynomial; nodes ascending.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // initial guess on [-1, 1], descending in i
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut pp = 0.0;
        for _ in 0..100 {
            // recurrence for P_n(x) and derivative
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if libm::fabs(dx) < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        // map [-1,1] -> [0,1]; i-th guess is the (n-1-i)-th ascending node
        nodes[n - 1 - i] = 0.5 * (x + 1.0);
        weights[n - 1 - i] = 0.5 * w;
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Finite-difference weights for the `m`-th derivative at `x0` on the given
/// nodes (Fornberg's recursion). Returns weights for orders 0..=m.
pub fn fornberg_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Smallest eigenvalue of a small (g <= 3) symmetric matrix, by cyclic
/// Jacobi rotations.
pub fn sym_eig_min(mat: &[f64], g: usize) -> f64 {
    debug_assert_eq!(mat.len(), g * g);
    if g == 1 {
        return mat[0];
    }
    let mut a = mat.to_vec();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..g {
            for q in (p + 1)..g {
                off += a[p * g + q] * a[p * g + q];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..g {
            for q in (p + 1)..g {
                let apq = a[p * g + q];
                if libm::fabs(apq) < 1e-300 {
                    continue;
                }
                let theta = (a[q * g + q] - a[p * g + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + libm::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..g {
                    let akp = a[k * g + p];
                    let akq = a[k * g + q];
                    a[k * g + p] = c * akp - s * akq;
                    a[k * g + q] = s * akp + c * akq;
                }
                for k in 0..g {
                    let apk = a[p * g + k];
                    let aqk = a[q * g + k];
                    a[p * g + k] = c * apk - s * aqk;
                    a[q * g + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut min = a[0];
    for i in 1..g {
        min = min.min(a[i * g + i]);
    }
    min
}

/// Solve the small SPD system `mat * x = rhs` (g <= 3) by unpivoted
/// Cholesky. Used for (Im tau)^{-1} quadratic forms.
pub fn spd_solve_small(mat: &[f64], rhs: &[f64], g: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; g * g];
    for i in 0..g {
        for j in 0..=i {
            let mut s = mat[i * g + j];
            for k in 0..j {
                s -= l[i * g + k] * l[j * g + k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::NotPositiveDefinite);
                }
                l[i * g + i] = libm::sqrt(s);
            } else {
                l[i * g + j] = s / l[j * g + j];
            }
        }
    }
    let mut y = rhs.to_vec();
    for i in 0..g {
        for k in 0..i {
            let step = l[i * g + k] * y[k];
            y[i] -= step;
        }
        y[i] /= l[i * g + i];
    }
    for i in (0..g).rev() {
        for k in (i + 1)..g {
            let step = l[k * g + i] * y[k];
            y[i] -= step;
        }
        y[i] /= l[i * g + i];
    }
    Ok(y)
}

/// Log-determinant of a dense complex matrix via partially pivoted LU of
/// the diagonally pre-scaled matrix. Pivot magnitudes are accumulated in
/// log space so the raw determinant is never formed.
///
/// Returns `(log|det|, condition_estimate)` where the condition estimate is
/// the ratio of largest to smallest pivot magnitude of the scaled matrix.
pub fn log_det_scaled_lu(matrix: &[Complex64], n: usize) -> Result<(f64, f64)> {
    debug_assert_eq!(matrix.len(), n * n);
    if n == 0 {
        return Ok((0.0, 1.0));
    }
    // scale row j and column l by the geometric mean of the diagonal
    let mut scale_log = vec![0.0; n];
    for j in 0..n {
        let d = matrix[j * n + j].norm();
        if d.is_nan() || d <= 0.0 || !d.is_finite() {
            return Err(Error::SingularMatrix);
        }
        scale_log[j] = -0.5 * libm::log(d);
    }
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for l in 0..n {
            let s = libm::exp(scale_log[j] + scale_log[l]);
            a[j * n + l] = matrix[j * n + l] * s;
        }
    }
    let mut logdet = KahanSum::new();
    // undo the scaling: det M = det A * prod exp(-2 scale_log)
    for &s in &scale_log {
        logdet.add(-2.0 * s);
    }
    let mut pmax = 0.0f64;
    let mut pmin = f64::INFINITY;
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm();
        for r in (col + 1)..n {
            let v = a[r * n + col].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best.is_nan() || best <= 0.0 {
            return Err(Error::SingularMatrix);
        }
        if piv != col {
            for l in 0..n {
                a.swap(col * n + l, piv * n + l);
            }
        }
        let p = a[col * n + col];
        let pn = p.norm();
        pmax = pmax.max(pn);
        pmin = pmin.min(pn);
        logdet.add(libm::log(pn));
        for r in (col + 1)..n {
            let factor = a[r * n + col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for l in col..n {
                let v = a[col * n + l];
                a[r * n + l] -= factor * v;
            }
        }
    }
    Ok((logdet.value(), pmax / pmin))
}

/// Least-squares fit of `y ~ a2 x^2 + a1 x + a0`, via the 3x3 normal
/// equations. Returns `(a2, a1, a0)`.
pub fn fit_quadratic(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::DimensionMismatch);
    }
    // center and scale x for conditioning
    let n = xs.len() as f64;
    let xm = kahan_sum(xs.iter().copied()) / n;
    let mut spread = 0.0f64;
    for &x in xs {
        spread = spread.max(libm::fabs(x - xm));
    }
    if spread == 0.0 {
        return Err(Error::SingularMatrix);
    }
    let t: Vec<f64> = xs.iter().map(|&x| (x - xm) / spread).collect();
    let mut m = [0.0f64; 9];
    let mut b = [0.0f64; 3];
    for (i, &ti) in t.iter().enumerate() {
        let basis = [ti * ti, ti, 1.0];
        for r in 0..3 {
            for c in 0..3 {
                m[r * 3 + c] += basis[r] * basis[c];
            }
            b[r] += basis[r] * ys[i];
        }
    }
    let sol = solve3(&m, &b)?;
    // undo the affine substitution t = (x - xm)/spread
    let a2 = sol[0] / (spread * spread);
    let a1 = sol[1] / spread - 2.0 * sol[0] * xm / (spread * spread);
    let a0 = sol[2] - sol[1] * xm / spread + sol[0] * xm * xm / (spread * spread);
    Ok((a2, a1, a0))
}

fn solve3(m: &[f64; 9], b: &[f64; 3]) -> Result<[f64; 3]> {
    let mut a = *m;
    let mut rhs = *b;
    for col in 0..3 {
        let mut piv = col;
        for r in (col + 1)..3 {
            if libm::fabs(a[r * 3 + col]) > libm::fabs(a[piv * 3 + col]) {
                piv = r;
            }
        }
        if libm::fabs(a[piv * 3 + col]) < 1e-300 {
            return Err(Error::SingularMatrix);
        }
        if piv != col {
            for l in 0..3 {
                a.swap(col * 3 + l, piv * 3 + l);
            }
            rhs.swap(col, piv);
        }
        for r in (col + 1)..3 {
            let f = a[r * 3 + col] / a[col * 3 + col];
            for l in col..3 {
                a[r * 3 + l] -= f * a[col * 3 + l];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = [0.0f64; 3];
    for r in (0..3).rev() {
        let mut s = rhs[r];
        for l in (r + 1)..3 {
            s -= a[r * 3 + l] * x[l];
        }
        x[r] = s / a[r * 3 + r];
    }
    Ok(x)
}
