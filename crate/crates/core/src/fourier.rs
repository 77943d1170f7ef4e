//! Discrete Fourier transforms for the torus grids.
//!
//! Radix-2 iterative FFT when the length is a power of two, direct DFT
//! otherwise. Grid resolutions stay small (<= 512) so the O(n^2) fallback
//! is acceptable.

use alloc::vec;

use num_complex::Complex64;

fn is_pow2(n: usize) -> bool {
    n != 0 && (n & (n - 1)) == 0
}

/// In-place transform of one row; `sign` = -1 forward, +1 inverse
/// (unnormalized).
fn dft_inplace(buf: &mut [Complex64], sign: f64) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    if is_pow2(n) {
        fft_radix2(buf, sign);
    } else {
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let base = sign * core::f64::consts::TAU / n as f64;
        for (k, o) in out.iter_mut().enumerate() {
            let mut re = 0.0;
            let mut im = 0.0;
            for (j, &x) in buf.iter().enumerate() {
                let ang = base * ((k * j) % n) as f64;
                let (s, c) = libm::sincos(ang);
                re += x.re * c - x.im * s;
                im += x.re * s + x.im * c;
            }
            *o = Complex64::new(re, im);
        }
        buf.copy_from_slice(&out);
    }
}

fn fft_radix2(buf: &mut [Complex64], sign: f64) {
    let n = buf.len();
    // bit reversal
    let mut j = 0usize;
    for i in 0..n {
        if i < j {
            buf.swap(i, j);
        }
        let mut m = n >> 1;
        while m >= 1 && j & m != 0 {
            j ^= m;
            m >>= 1;
        }
        j |= m;
    }
    let mut len = 2;
    while len <= n {
        let ang = sign * core::f64::consts::TAU / len as f64;
        let (s, c) = libm::sincos(ang);
        let wl = Complex64::new(c, s);
        let half = len / 2;
        let mut start = 0;
        while start < n {
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..half {
                let u = buf[start + k];
                let v = buf[start + k + half] * w;
                buf[start + k] = u + v;
                buf[start + k + half] = u - v;
                w *= wl;
            }
            start += len;
        }
        len <<= 1;
    }
}

/// Forward 2-D DFT of an n x n row-major array (unnormalized).
pub fn fft2_forward(data: &mut [Complex64], n: usize) {
    fft2(data, n, -1.0);
}

/// Inverse 2-D DFT, normalized by 1/n^2.
pub fn fft2_inverse(data: &mut [Complex64], n: usize) {
    fft2(data, n, 1.0);
    let scale = 1.0 / (n * n) as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

fn fft2(data: &mut [Complex64], n: usize, sign: f64) {
    debug_assert_eq!(data.len(), n * n);
    // rows
    for row in data.chunks_mut(n) {
        dft_inplace(row, sign);
    }
    // columns
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..n {
        for r in 0..n {
            col[r] = data[r * n + c];
        }
        dft_inplace(&mut col, sign);
        for r in 0..n {
            data[r * n + c] = col[r];
        }
    }
}

/// Signed frequency for DFT bin `k` of an `n`-point transform.
#[inline]
pub fn freq(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// 1-D DFT of a complex row (forward, unnormalized); convenience for
/// angular derivatives on sphere rings.
pub fn dft_row(buf: &mut [Complex64], forward: bool) {
    dft_inplace(buf, if forward { -1.0 } else { 1.0 });
    if !forward {
        let scale = 1.0 / buf.len() as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(n: usize) {
        let mut data: Vec<Complex64> = (0..n * n)
            .map(|i| Complex64::new((i % 7) as f64 - 3.0, (i % 5) as f64))
            .collect();
        let orig = data.clone();
        fft2_forward(&mut data, n);
        fft2_inverse(&mut data, n);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn fft_roundtrips_pow2_and_general() {
        roundtrip(16);
        roundtrip(12);
    }

    #[test]
    fn fft_matches_plane_wave() {
        let n = 32;
        let (m, l) = (3i64, -5i64);
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for iy in 0..n {
            for ix in 0..n {
                let ph = core::f64::consts::TAU
                    * (m as f64 * ix as f64 + l as f64 * iy as f64)
                    / n as f64;
                data[iy * n + ix] = Complex64::new(libm::cos(ph), libm::sin(ph));
            }
        }
        fft2_forward(&mut data, n);
        for ky in 0..n {
            for kx in 0..n {
                let expect = if freq(kx, n) == m && freq(ky, n) == l {
                    (n * n) as f64
                } else {
                    0.0
                };
                assert!(
                    (data[ky * n + kx] - Complex64::new(expect, 0.0)).norm() < 1e-8,
                    "bin ({kx},{ky})"
                );
            }
        }
    }
}
