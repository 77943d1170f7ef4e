//! Barnes G, log-factorials and the cumulative sum j ln j, with their
//! large-argument expansions.

use crate::error::Error;
use crate::numeric::KahanSum;
use crate::Result;

use super::zeta::zeta_prime_minus1;

/// ln(n!) by direct compensated summation.
pub fn log_factorial(n: u64) -> f64 {
    let mut s = KahanSum::new();
    for j in 2..=n {
        s.add(libm::log(j as f64));
    }
    s.value()
}

/// ln G(n+1) = sum_{j=1}^{n-1} ln(j!), n >= 1.
pub fn log_barnes_g(n: u64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument("barnes G needs n >= 1"));
    }
    let mut log_fact = KahanSum::new();
    let mut total = KahanSum::new();
    for j in 1..n {
        log_fact.add(libm::log(j as f64));
        total.add(log_fact.value());
    }
    Ok(total.value())
}

/// Large-n form: ln G(n+1) = n^2/2 ln n - 3 n^2/4 + n/2 ln 2pi
///   - 1/12 ln n + zeta'(-1), remainder O(1/n).
pub fn log_barnes_g_asymptotic(n: u64) -> f64 {
    let nf = n as f64;
    let ln_n = libm::log(nf);
    0.5 * nf * nf * ln_n - 0.75 * nf * nf
        + 0.5 * nf * libm::log(2.0 * core::f64::consts::PI)
        - ln_n / 12.0
        + zeta_prime_minus1()
}

/// sum_{j=1}^{n} j ln j, exact cumulative.
pub fn sum_j_ln_j(n: u64) -> f64 {
    let mut s = KahanSum::new();
    for j in 2..=n {
        let jf = j as f64;
        s.add(jf * libm::log(jf));
    }
    s.value()
}

/// Large-n form: (n^2/2 + n/2 + 1/12) ln n - n^2/4 + 1/12 - zeta'(-1).
pub fn sum_j_ln_j_asymptotic(n: u64) -> f64 {
    let nf = n as f64;
    let ln_n = libm::log(nf);
    (0.5 * nf * nf + 0.5 * nf + 1.0 / 12.0) * ln_n - 0.25 * nf * nf + 1.0 / 12.0
        - zeta_prime_minus1()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barnes_small_values() {
        // G(2) = 1, G(4) = 1! * 2! = 2
        assert_eq!(log_barnes_g(1).unwrap(), 0.0);
        assert_eq!(log_barnes_g(2).unwrap(), 0.0);
        assert!((log_barnes_g(3).unwrap() - libm::log(2.0)).abs() < 1e-15);
    }

    #[test]
    fn barnes_factorial_bridge() {
        // ln G(n+2) - ln G(n+1) = ln(n!) for n <= 100
        for n in 1..=100u64 {
            let diff = log_barnes_g(n + 1).unwrap() - log_barnes_g(n).unwrap();
            assert!((diff - log_factorial(n)).abs() < 1e-10 * (1.0 + log_factorial(n)), "n={n}");
        }
    }

    #[test]
    fn barnes_asymptotic_agreement() {
        let exact = log_barnes_g(50).unwrap();
        let asym = log_barnes_g_asymptotic(50);
        assert!((exact - asym).abs() < 1e-2);
        // finite at n = 2
        assert!(log_barnes_g_asymptotic(2).is_finite());
        // remainder shrinks from n=100 to n=200; measured decay is ~1/4
        // (the true remainder is -1/(720 n^2), one order better than the
        // O(1/n) bound the expansion is usually quoted with)
        let r100 = (log_barnes_g(100).unwrap() - log_barnes_g_asymptotic(100)).abs();
        let r200 = (log_barnes_g(200).unwrap() - log_barnes_g_asymptotic(200)).abs();
        assert!(r100 < 1e-3);
        let ratio = r200 / r100;
        assert!(ratio > 0.15 && ratio < 0.6, "ratio {ratio}");
    }

    #[test]
    fn sum_j_ln_j_small_and_asymptotic() {
        assert_eq!(sum_j_ln_j(1), 0.0);
        assert!((sum_j_ln_j(2) - 2.0 * libm::log(2.0)).abs() < 1e-15);
        let diff = (sum_j_ln_j(500) - sum_j_ln_j_asymptotic(500)).abs();
        assert!(diff < 1e-4, "{diff}");
    }
}
