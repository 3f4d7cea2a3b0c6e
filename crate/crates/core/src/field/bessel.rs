//! Bessel functions of the first kind by power series.

use crate::error::{Error, Result};

/// Largest argument accepted by [`bessel_j`]. Past this the alternating
/// series loses more than about five digits to cancellation.
pub const BESSEL_SERIES_MAX_ARG: f64 = 16.0;

const MAX_TERMS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselValue {
    pub value: f64,
    /// First omitted term plus accumulated rounding of the partial sum.
    pub error_bound: f64,
    pub terms: usize,
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// `J_k(z)` for `0 <= z <= BESSEL_SERIES_MAX_ARG`.
pub fn bessel_j(k: usize, z: f64) -> Result<BesselValue> {
    if !(0.0..=BESSEL_SERIES_MAX_ARG).contains(&z) {
        return Err(Error::BesselArgument {
            arg: z,
            max: BESSEL_SERIES_MAX_ARG,
        });
    }
    let half = 0.5 * z;
    let q = half * half;
    let mut term = half.powi(k as i32) / factorial(k);
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut m = 0usize;
    loop {
        sum += term;
        abs_sum += term.abs();
        let next = -term * q / (((m + 1) * (m + 1 + k)) as f64);
        m += 1;
        let decreasing = ((m * (m + k)) as f64) > q;
        if (decreasing && next.abs() <= 1e-18 * abs_sum)
            || next == 0.0
            || m >= MAX_TERMS
        {
            return Ok(BesselValue {
                value: sum,
                error_bound: next.abs() + 2.0 * f64::EPSILON * abs_sum,
                terms: m,
            });
        }
        term = next;
    }
}

/// The smooth radial factor of `J_k(sqrt(λ)ρ) cos(kθ) = g(ρ²) Re((x₁+ix₂)^k)`
/// and its first two derivatives in `s = ρ²`.
pub(crate) fn radial_factor(k: usize, lambda: f64, s: f64) -> (f64, f64, f64) {
    let pref = (0.5 * lambda.sqrt()).powi(k as i32);
    let c = 0.25 * lambda;
    let q = c * s;
    let qmax = q.abs().max(1.0);
    let mut am = 1.0 / factorial(k);
    let (mut pm, mut pm1, mut pm2) = (1.0, 0.0, 0.0); // q^m, q^{m-1}, q^{m-2}
    let (mut g, mut g1, mut g2) = (0.0, 0.0, 0.0);
    for m in 0..MAX_TERMS {
        let mf = m as f64;
        g += am * pm;
        if m >= 1 {
            g1 += mf * am * pm1;
        }
        if m >= 2 {
            g2 += mf * (mf - 1.0) * am * pm2;
        }
        am *= -1.0 / (((m + 1) * (m + 1 + k)) as f64);
        pm2 = pm1;
        pm1 = pm;
        pm *= q;
        if (mf * mf) > q && am.abs() * qmax.powi(m as i32 + 1) * (mf + 2.0).powi(2) < 1e-40 {
            break;
        }
    }
    (pref * g, pref * c * g1, pref * c * c * g2)
}

/// The `nth` positive zero (1-based) of `J_k`, to round-off.
pub fn bessel_zero(k: usize, nth: usize) -> Result<f64> {
    if nth == 0 {
        return Err(Error::param("nth", "zeros are counted from 1"));
    }
    let j = |z: f64| bessel_j(k, z).map(|v| v.value);
    let step = 0.05;
    let mut a = (k as f64).max(step);
    let mut fa = j(a)?;
    let mut found = 0;
    while a + step <= BESSEL_SERIES_MAX_ARG {
        let b = a + step;
        let fb = j(b)?;
        if fa == 0.0 || fa.signum() != fb.signum() {
            found += 1;
            if found == nth {
                let (mut lo, mut hi, mut flo) = (a, b, fa);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    let fm = j(mid)?;
                    if fm == 0.0 {
                        return Ok(mid);
                    }
                    if fm.signum() == flo.signum() {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(0.5 * (lo + hi));
            }
        }
        a = b;
        fa = fb;
    }
    Err(Error::BesselArgument {
        arg: a,
        max: BESSEL_SERIES_MAX_ARG,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent fixed-length series, 20 terms.
    fn series_oracle(k: usize, z: f64) -> f64 {
        let mut s = 0.0;
        for m in 0..20 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * (z / 2.0).powi((2 * m + k) as i32) / (factorial(m) * factorial(m + k));
        }
        s
    }

    #[test]
    fn j0_at_one() {
        let v = bessel_j(0, 1.0).unwrap();
        assert!((v.value - series_oracle(0, 1.0)).abs() < 1e-15);
        assert!((v.value - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!(v.error_bound < 1e-15);
    }

    #[test]
    fn normalization_and_small_argument() {
        assert_eq!(bessel_j(0, 0.0).unwrap().value, 1.0);
        assert_eq!(bessel_j(3, 0.0).unwrap().value, 0.0);
    }

    #[test]
    fn matches_oracle_on_range() {
        for k in 0..6 {
            for i in 0..=24 {
                let z = 0.5 * i as f64;
                let v = bessel_j(k, z).unwrap();
                let o = series_oracle(k, z);
                if z <= 6.0 {
                    assert!((v.value - o).abs() < 1e-13, "k={k} z={z}");
                }
                assert!(v.error_bound < 1e-10, "k={k} z={z} bound={}", v.error_bound);
            }
        }
    }

    #[test]
    fn rejects_large_argument() {
        assert!(bessel_j(0, 20.0).is_err());
    }

    #[test]
    fn first_zeros() {
        // Tabulated values.
        assert!((bessel_zero(0, 1).unwrap() - 2.404_825_557_695_773).abs() < 1e-11);
        assert!((bessel_zero(1, 1).unwrap() - 3.831_705_970_207_512).abs() < 1e-11);
        assert!((bessel_zero(8, 1).unwrap() - 12.225_092_264_004_65).abs() < 1e-9);
    }

    #[test]
    fn radial_factor_reproduces_jk() {
        for k in 0..5 {
            let lambda: f64 = 25.0;
            for &rho in &[0.0, 0.1, 0.5, 1.3] {
                let (g, _, _) = radial_factor(k, lambda, rho * rho);
                let u = g * rho.powi(k as i32);
                let j = bessel_j(k, lambda.sqrt() * rho).unwrap().value;
                assert!((u - j).abs() < 1e-13, "k={k} rho={rho}");
            }
        }
    }

    #[test]
    fn radial_factor_derivatives_match_differences() {
        let (k, lambda, s) = (2usize, 49.0, 0.3);
        let h = 1e-5;
        let (g, g1, g2) = radial_factor(k, lambda, s);
        let (gp, g1p, _) = radial_factor(k, lambda, s + h);
        let (gm, g1m, _) = radial_factor(k, lambda, s - h);
        assert!((g1 - (gp - gm) / (2.0 * h)).abs() < 1e-6 * g.abs().max(1.0));
        assert!((g2 - (g1p - g1m) / (2.0 * h)).abs() < 1e-5 * g1.abs().max(1.0));
    }
}
