//! Real and complex log-gamma via the Lanczos rational approximation
//! (g = 607/128, 14 terms), with reflection for Re z < 1/2.

use super::SpecMathError;
use num_complex::Complex64;
use std::f64::consts::PI;

// Coefficient set of Godfrey/Pugh as used by Numerical Recipes' gammln;
// full double accuracy on the right half-plane.
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const G_PLUS_HALF: f64 = 5.242_187_5;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Principal-branch `log Gamma(z)`.
pub fn log_gamma(z: Complex64) -> Result<Complex64, SpecMathError> {
    if is_nonpositive_integer(z) {
        return Err(SpecMathError::PoleAtNonpositiveInteger);
    }
    Ok(log_gamma_unchecked(z))
}

fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z)
        let lp = Complex64::new(PI.ln(), 0.0);
        lp - (z * PI).sin().ln() - log_gamma_unchecked(Complex64::new(1.0, 0.0) - z)
    } else {
        let t = z + G_PLUS_HALF;
        let mut ser = Complex64::new(LANCZOS_C0, 0.0);
        for (j, &c) in LANCZOS.iter().enumerate() {
            ser += c / (z + (j + 1) as f64);
        }
        (z + 0.5) * t.ln() - t + (SQRT_2PI * ser / z).ln()
    }
}

/// `Gamma(x)` for real `x`, poles rejected.
pub fn gamma_real(x: f64) -> Result<f64, SpecMathError> {
    let (ln_abs, sign) = log_abs_gamma_sign(x)?;
    Ok(sign * ln_abs.exp())
}

/// `(ln |Gamma(x)|, sign)` for real non-pole `x`; the working form for
/// products of huge or tiny gamma values.
pub fn log_abs_gamma_sign(x: f64) -> Result<(f64, f64), SpecMathError> {
    if x <= 0.0 && x.fract() == 0.0 {
        return Err(SpecMathError::PoleAtNonpositiveInteger);
    }
    if x > 0.0 {
        let lg = log_gamma_unchecked(Complex64::new(x, 0.0)).re;
        Ok((lg, 1.0))
    } else {
        // |Gamma(x)| = pi / (|sin(pi x)| Gamma(1-x)); sign from parity of floor(x)
        let frac = x - x.floor();
        let sin_abs = (PI * frac).sin().abs();
        let lg = PI.ln() - sin_abs.ln() - log_gamma_unchecked(Complex64::new(1.0 - x, 0.0)).re;
        let sign = if (x.floor() as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        Ok((lg, sign))
    }
}

/// `ln Gamma(x)` for `x > 0`, panic-free fast path for internal callers.
pub(crate) fn log_gamma_real_positive(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    log_gamma_unchecked(Complex64::new(x, 0.0)).re
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)` as an exact product.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (x + k as f64))
}

/// `|(x + iy)_n|^2` for a conjugate pair, in real arithmetic.
pub fn pochhammer_abs2(x: f64, y: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| {
        let r = x + k as f64;
        acc * (r * r + y * y)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn anchor_values() {
        assert!(log_gamma(Complex64::new(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert_relative_eq!(
            log_gamma(Complex64::new(5.0, 0.0)).unwrap().re,
            24.0f64.ln(),
            epsilon = 1e-13
        );
        assert_relative_eq!(
            log_gamma(Complex64::new(0.5, 0.0)).unwrap().re,
            PI.sqrt().ln(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn poles_rejected() {
        assert_eq!(
            log_gamma(Complex64::new(0.0, 0.0)).unwrap_err(),
            SpecMathError::PoleAtNonpositiveInteger
        );
        assert!(log_gamma(Complex64::new(-3.0, 0.0)).is_err());
        assert!(gamma_real(-2.0).is_err());
        // off-axis points near a pole are fine
        assert!(log_gamma(Complex64::new(-3.0, 1e-6)).is_ok());
    }

    #[test]
    fn recurrence_on_random_rectangle() {
        // exp(log_gamma(z+1)) = z exp(log_gamma(z)) across [0.1,20] x [-5,5]
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let z = Complex64::new(0.1 + 19.9 * next(), -5.0 + 10.0 * next());
            let lhs = log_gamma(z + 1.0).unwrap().exp();
            let rhs = z * log_gamma(z).unwrap().exp();
            assert!(
                (lhs - rhs).norm() <= 1e-12 * rhs.norm(),
                "recurrence failed at {z}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn reflection_branch_agrees_with_direct() {
        // Gamma(-0.5) = -2 sqrt(pi)
        assert_relative_eq!(gamma_real(-0.5).unwrap(), -2.0 * PI.sqrt(), epsilon = 1e-13);
        // Gamma(-1.5) = 4 sqrt(pi) / 3
        assert_relative_eq!(gamma_real(-1.5).unwrap(), 4.0 * PI.sqrt() / 3.0, epsilon = 1e-13);
        // large negative: check against recurrence Gamma(x+1) = x Gamma(x)
        let g = gamma_real(-15.25).unwrap();
        let g1 = gamma_real(-14.25).unwrap();
        assert_relative_eq!(g1, -15.25 * g, max_relative = 1e-12);
    }

    #[test]
    fn conjugate_pair_pochhammer() {
        let v = pochhammer_abs2(3.0, -0.25, 2);
        assert_relative_eq!(v, (9.0 + 0.0625) * (16.0 + 0.0625));
        assert_eq!(pochhammer(4.5, 0), 1.0);
        assert_relative_eq!(pochhammer(4.5, 3), 4.5 * 5.5 * 6.5);
    }

    #[test]
    fn complex_modulus_squared_identity() {
        // |Gamma(1 + iy)|^2 = pi y / sinh(pi y)
        for &y in &[0.25, 1.0, 3.0] {
            let g = log_gamma(Complex64::new(1.0, y)).unwrap().exp();
            let expect = PI * y / (PI * y).sinh();
            assert_relative_eq!(g.norm_sqr(), expect, epsilon = 1e-12);
        }
    }
}
