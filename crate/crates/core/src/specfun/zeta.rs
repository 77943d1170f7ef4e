//! Hurwitz zeta by Euler-Maclaurin, its derivative closed forms at
//! s = -1 and s = 0, and the constant zeta'(-1).

use crate::error::Error;
use crate::numeric::KahanSum;
use crate::Result;

use super::barnes::log_factorial;

/// B_{2j} / (2j)! for j = 1..=8.
const BERN_OVER_FACT: [f64; 8] = [
    8.333333333333333e-2,            // B2/2!   = 1/12
    -1.388888888888889e-3,           // B4/4!   = -1/720
    3.3068783068783067e-5,           // B6/6!   = 1/30240
    -8.267195767195768e-7,           // B8/8!   = -1/1209600
    2.08767569878681e-8,             // B10/10! = 1/47900160
    -5.284190138687493e-10,          // B12/12!
    1.3382536530684679e-11,          // B14/14!
    -3.389680296322583e-13,          // B16/16!
];

/// Shift threshold: Euler-Maclaurin is applied from a + M >= 20.
const EM_SHIFT: f64 = 20.0;

/// Hurwitz zeta(s, a) for real s != 1, a > 0, by Euler-Maclaurin with 8
/// Bernoulli terms. Absolute accuracy about 1e-12 over the range used here
/// (|s| up to ~15); exact for non-positive integer s where the tail
/// terminates.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !s.is_finite() || !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if a <= 0.0 {
        return Err(Error::NonPositiveParameter("a"));
    }
    if libm::fabs(s - 1.0) < 1e-12 {
        return Err(Error::PoleAtOne);
    }
    let m = if a >= EM_SHIFT {
        0usize
    } else {
        libm::ceil(EM_SHIFT - a) as usize
    };
    let mut head = KahanSum::new();
    for n in 0..m {
        head.add(libm::pow(n as f64 + a, -s));
    }
    let big_a = m as f64 + a;
    let mut tail = KahanSum::new();
    tail.add(libm::pow(big_a, 1.0 - s) / (s - 1.0));
    tail.add(0.5 * libm::pow(big_a, -s));
    // sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * A^{-s-2j+1}
    let mut poch = s; // rising factorial s^(2j-1)
    let mut apow = libm::pow(big_a, -s - 1.0);
    for (j, bf) in BERN_OVER_FACT.iter().enumerate() {
        tail.add(bf * poch * apow);
        if j + 1 < BERN_OVER_FACT.len() {
            poch *= (s + (2 * j + 1) as f64) * (s + (2 * j + 2) as f64);
            apow /= big_a * big_a;
        }
    }
    Ok(head.value() + tail.value())
}

/// Riemann zeta(s) = hurwitz_zeta(s, 1).
pub fn riemann_zeta(s: f64) -> Result<f64> {
    hurwitz_zeta(s, 1.0)
}

/// a^s zeta(s, a) for s > 1: the factored form sum_m (a/(a+m))^s, which
/// stays representable when zeta itself underflows. Euler-Maclaurin is used
/// while s <= 2a; beyond that the direct sum needs only a handful of terms.
pub fn hurwitz_zeta_scaled(s: f64, a: f64) -> Result<f64> {
    if a <= 0.0 {
        return Err(Error::NonPositiveParameter("a"));
    }
    if s <= 1.0 {
        return Err(Error::InvalidArgument("scaled zeta needs s > 1"));
    }
    // Euler-Maclaurin loses relative accuracy once s approaches the shifted
    // modulus, and a^s overflows for small a at huge s; the direct sum is
    // cheap exactly there (term count ~ a e^{41/s})
    if s < 15.0 || s < 0.9 * a {
        return Ok(libm::exp(s * libm::log(a)) * hurwitz_zeta(s, a)?);
    }
    let mut sum = KahanSum::new();
    sum.add(1.0);
    for m in 1..1_000_000u64 {
        let term = libm::exp(-s * libm::log1p(m as f64 / a));
        sum.add(term);
        if term < 1e-18 {
            return Ok(sum.value());
        }
    }
    Err(Error::SeriesDivergence)
}

/// zeta'(-1) = 1/12 - ln A (Glaisher), 15 significant digits. Verified at
/// test time against a stencil derivative of the Euler-Maclaurin zeta and
/// against the Glaisher identity through zeta'(2).
const ZETA_PRIME_MINUS_ONE: f64 = -0.165421143700451;

/// The constant zeta'(-1).
pub fn zeta_prime_minus1() -> f64 {
    ZETA_PRIME_MINUS_ONE
}

/// Closed forms for the s-derivative of Hurwitz zeta at s in {-1, 0} and
/// integer a = k + 2 >= 2:
///
///   zeta'(-1, a) = zeta'(-1) + sum_{n=1}^{a-1} n ln n
///   zeta'(0, a)  = -ln(2 pi)/2 + ln((a-1)!)
pub fn hurwitz_zeta_deriv(s: i32, a: u64) -> Result<f64> {
    if a < 2 {
        return Err(Error::InvalidArgument("a must be an integer >= 2"));
    }
    match s {
        -1 => {
            let mut sum = KahanSum::new();
            for n in 2..a {
                let nf = n as f64;
                sum.add(nf * libm::log(nf));
            }
            Ok(zeta_prime_minus1() + sum.value())
        }
        0 => Ok(-0.5 * libm::log(2.0 * core::f64::consts::PI) + log_factorial(a - 1)),
        _ => Err(Error::InvalidArgument("s must be -1 or 0")),
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use core::f64::consts::PI;

    /// 7-point stencil derivative in s, O(h^6).
    pub(crate) fn zeta_s_derivative(s: f64, a: f64, h: f64) -> f64 {
        let f = |x: f64| hurwitz_zeta(x, a).unwrap();
        (-f(s + 3.0 * h) + 9.0 * f(s + 2.0 * h) - 45.0 * f(s + h) + 45.0 * f(s - h)
            - 9.0 * f(s - 2.0 * h)
            + f(s - 3.0 * h))
            / (-60.0 * h)
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        assert!((hurwitz_zeta(2.0, 1.0).unwrap() - PI * PI / 6.0).abs() < 1e-13);
    }

    #[test]
    fn zeta_zero_closed_form() {
        // zeta(0, k+2) = -1/2 - (k+1); k = 3 gives -4.5, and exactly for
        // every integer a >= 2
        assert!((hurwitz_zeta(0.0, 5.0).unwrap() + 4.5).abs() < 1e-15);
        for a in 2..40u32 {
            let v = hurwitz_zeta(0.0, a as f64).unwrap();
            assert!((v - (0.5 - a as f64)).abs() < 1e-13, "a={a}");
        }
    }

    #[test]
    fn zeta_matches_direct_summation() {
        // brute force with trapezoid tail for zeta(3, 5)
        let k = 10_000u64;
        let mut s = KahanSum::new();
        for n in 0..k {
            s.add(libm::pow(n as f64 + 5.0, -3.0));
        }
        let edge = k as f64 + 5.0;
        // integral tail + half endpoint
        let brute = s.value() + 0.5 * libm::pow(edge, -2.0) + 0.5 * libm::pow(edge, -3.0);
        assert!((hurwitz_zeta(3.0, 5.0).unwrap() - brute).abs() < 1e-13);
    }

    #[test]
    fn zeta_consistency_with_riemann_values() {
        // zeta(-1) = -1/12; zeta(4) = pi^4/90
        assert!((riemann_zeta(-1.0).unwrap() + 1.0 / 12.0).abs() < 1e-14);
        assert!((riemann_zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-13);
        assert!((riemann_zeta(3.0).unwrap() - 1.2020569031595943).abs() < 1e-13);
    }

    #[test]
    fn zeta_rejects_pole_and_bad_a() {
        assert!(matches!(hurwitz_zeta(1.0, 2.0), Err(Error::PoleAtOne)));
        assert!(hurwitz_zeta(2.0, 0.0).is_err());
        assert!(hurwitz_zeta(2.0, -3.0).is_err());
    }

    #[test]
    fn zeta_prime_minus1_from_euler_maclaurin_stencil() {
        // h large enough that the stencil does not amplify the cancellation
        // noise of the Euler-Maclaurin head sum
        let d = zeta_s_derivative(-1.0, 1.0, 5e-3);
        assert!((d - zeta_prime_minus1()).abs() < 1e-10, "{d}");
        assert!((zeta_prime_minus1() + 0.1654211437).abs() < 1e-10);
    }

    #[test]
    fn zeta_prime_minus1_glaisher_identity() {
        // ln A = (gamma + ln 2pi - zeta'(2)/zeta(2)) / 12, and
        // 12 (1/12 - zeta'(-1) - ln A) = 0
        let zp2 = zeta_s_derivative(2.0, 1.0, 1e-3);
        // Euler-Mascheroni by Euler-Maclaurin on harmonic numbers
        let n = 30.0f64;
        let mut h = KahanSum::new();
        for k in 1..=30u32 {
            h.add(1.0 / k as f64);
        }
        let gamma = h.value() - libm::log(n) - 0.5 / n + 1.0 / (12.0 * n * n)
            - 1.0 / (120.0 * n * n * n * n);
        let ln_a = (gamma + libm::log(2.0 * PI) - zp2 / (PI * PI / 6.0)) / 12.0;
        let defect = 12.0 * (1.0 / 12.0 - zeta_prime_minus1() - ln_a);
        assert!(defect.abs() < 1e-10, "defect {defect}");
    }

    #[test]
    fn deriv_closed_forms() {
        // s=0, a=2: -ln(2 pi)/2 + ln(1!) = -ln(2 pi)/2
        let v = hurwitz_zeta_deriv(0, 2).unwrap();
        assert!((v + 0.5 * libm::log(2.0 * PI)).abs() < 1e-15);
        // s=-1, a=2 reduces to zeta'(-1)
        assert_eq!(hurwitz_zeta_deriv(-1, 2).unwrap(), zeta_prime_minus1());
        assert!(hurwitz_zeta_deriv(-1, 1).is_err());
        assert!(hurwitz_zeta_deriv(2, 4).is_err());
    }

    #[test]
    fn deriv_matches_stencil_derivative() {
        for a in [2u64, 5, 9] {
            let closed = hurwitz_zeta_deriv(-1, a).unwrap();
            let numeric = zeta_s_derivative(-1.0, a as f64, 5e-3);
            assert!((closed - numeric).abs() < 1e-10, "a={a}");
            let closed0 = hurwitz_zeta_deriv(0, a).unwrap();
            let numeric0 = zeta_s_derivative(0.0, a as f64, 5e-3);
            assert!((closed0 - numeric0).abs() < 1e-10, "a={a}");
        }
    }
}
