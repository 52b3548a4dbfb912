//! Bessel functions of real order: modified `K_nu` and ordinary `J_nu`.
//!
//! Both use the classic fractional-order machinery: Temme's series for
//! small argument, Steed's continued fractions for the rest, and stable
//! recurrence in the order. `K` is evaluated at `mu = nu - round(nu)` and
//! recursed upward (stable for K); `J` uses CF1 at the target order with a
//! Wronskian normalization through CF2 at the shifted order.

use super::SpecMathError;
use std::f64::consts::PI;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 20_000;
const XMIN_CF2: f64 = 2.0;

/// Chebyshev fits for Temme's gamma combinations on |mu| <= 1/2:
/// GAM1 ~ (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu),
/// GAM2 ~ (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2.
const CHEB_GAM1: [f64; 7] = [
    -1.142022680371168e0,
    6.5165112670737e-3,
    3.087090173086e-4,
    -3.4706269649e-6,
    6.9437664e-9,
    3.67795e-11,
    -1.356e-13,
];
const CHEB_GAM2: [f64; 8] = [
    1.843740587300905e0,
    -7.68528408447867e-2,
    1.2719271366546e-3,
    -4.9717367042e-6,
    -3.31261198e-8,
    2.423096e-10,
    -1.702e-13,
    -1.49e-15,
];

fn chebev(coeffs: &[f64], x: f64) -> f64 {
    let mut d = 0.0;
    let mut dd = 0.0;
    let x2 = 2.0 * x;
    for &c in coeffs.iter().skip(1).rev() {
        let sv = d;
        d = x2 * d - dd + c;
        dd = sv;
    }
    x * d - dd + 0.5 * coeffs[0]
}

/// Returns (gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu)) for |mu| <= 1/2.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let xx = 8.0 * mu * mu - 1.0;
    let gam1 = chebev(&CHEB_GAM1, xx);
    let gam2 = chebev(&CHEB_GAM2, xx);
    let gampl = gam2 - mu * gam1;
    let gammi = gam2 + mu * gam1;
    (gam1, gam2, gampl, gammi)
}

/// Modified Bessel function of the second kind, `K_nu(x)` for `x > 0`.
/// Symmetric in the order: `K_{-nu} = K_nu`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64, SpecMathError> {
    if !(x > 0.0) {
        return Err(SpecMathError::NonpositiveArgument);
    }
    let nu = nu.abs();
    let nl = (nu + 0.5).floor() as usize;
    let mu = nu - nl as f64;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    let (mut rkmu, mut rk1);
    if x < XMIN_CF2 {
        // Temme's series
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let e = e.exp();
        let mut p = 0.5 * e / gampl;
        let mut q = 0.5 / (e * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..=MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(SpecMathError::ContourFailure);
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        // Steed's CF2 for K_mu and K_{mu+1}
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..=MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(SpecMathError::ContourFailure);
        }
        let h = a1 * h;
        rkmu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
        rk1 = rkmu * (mu + x + 0.5 - h) * xi;
    }

    // upward recurrence K_{mu+i+1} = 2(mu+i)/x K_{mu+i} + K_{mu+i-1}
    for i in 1..=nl {
        let rktemp = (mu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    Ok(rkmu)
}

/// Bessel function of the first kind, `J_nu(x)` for `nu >= 0`, `x >= 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64, SpecMathError> {
    assert!(nu >= 0.0, "bessel_j requires nu >= 0");
    assert!(x >= 0.0, "bessel_j requires x >= 0");
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x < XMIN_CF2 {
        return ascending_series(nu, x);
    }
    steed_j(nu, x)
}

/// Ascending series; safe for small x where the terms decrease from the start.
fn ascending_series(nu: f64, x: f64) -> Result<f64, SpecMathError> {
    let half_x = 0.5 * x;
    let lead = nu * half_x.ln() - super::gamma::log_gamma_real_positive(nu + 1.0);
    let mut term = lead.exp();
    let mut sum = term;
    let z = -half_x * half_x;
    for k in 1..=MAXIT {
        let kf = k as f64;
        term *= z / (kf * (nu + kf));
        sum += term;
        if term.abs() < sum.abs() * EPS {
            return Ok(sum);
        }
    }
    Err(SpecMathError::ContourFailure)
}

/// Steed's method: CF1 at the target order, downward recurrence to
/// `mu = nu - nl`, CF2 at `mu`, Wronskian normalization.
fn steed_j(nu: f64, x: f64) -> Result<f64, SpecMathError> {
    let nl = ((nu - x + 1.5).floor().max(0.0)) as usize;
    let mu = nu - nl as f64;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI; // Wronskian J Y' - J' Y

    // CF1: h = J'_nu / J_nu
    let mut isign: f64 = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 1..=MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecMathError::ContourFailure);
    }

    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in (1..=nl).rev() {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    // CF2 in complex arithmetic: p + i q = (J' + i Y') / (J + i Y) at mu
    let a0 = 0.25 - mu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fct = a0 * xi / (p * p + q * q);
    let mut cr = br + q * fct;
    let mut ci = bi + p * fct;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let dlr = cr * dr - ci * di;
    let dli = cr * di + ci * dr;
    let temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    let mut a = a0;
    converged = false;
    for i in 2..=MAXIT {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di = -di / den;
        let dlr = cr * dr - ci * di;
        let dli = cr * di + ci * dr;
        let temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecMathError::ContourFailure);
    }

    let gam = (p - f) / q;
    let mut rjmu = (w / ((p - f) * gam + q)).sqrt();
    if rjl < 0.0 {
        rjmu = -rjmu.abs();
    } else {
        rjmu = rjmu.abs();
    }
    Ok(rjl1 * (rjmu / rjl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn k_half_closed_form() {
        // K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}
        for &x in &[0.3, 2.0, 7.5, 40.0] {
            let expect = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert_relative_eq!(bessel_k(0.5, x).unwrap(), expect, max_relative = 1e-12);
        }
        assert_relative_eq!(
            bessel_k(0.5, 2.0).unwrap(),
            (PI / 4.0).sqrt() * (-2.0f64).exp(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn k_symmetric_in_order() {
        for &(nu, x) in &[(2.0, 1.0), (7.3, 0.4), (19.5, 55.0)] {
            assert_relative_eq!(
                bessel_k(nu, x).unwrap(),
                bessel_k(-nu, x).unwrap(),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn k_reference_values() {
        // K_0(2), K_1(2) from standard tables; K_2(2) via recurrence
        assert_relative_eq!(bessel_k(0.0, 2.0).unwrap(), 0.11389387274953344, max_relative = 1e-12);
        assert_relative_eq!(bessel_k(1.0, 2.0).unwrap(), 0.13986588181652243, max_relative = 1e-12);
        assert_relative_eq!(bessel_k(2.0, 2.0).unwrap(), 0.25375975456605587, max_relative = 1e-12);
    }

    #[test]
    fn k_recurrence_consistency() {
        // K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu across the series/CF switch
        for &nu in &[0.3, 1.7, 6.2, 14.9] {
            for &x in &[0.4, 1.9, 2.1, 9.0, 80.0] {
                let km = bessel_k(nu - 1.0, x).unwrap();
                let k0 = bessel_k(nu, x).unwrap();
                let kp = bessel_k(nu + 1.0, x).unwrap();
                assert_relative_eq!(kp, km + (2.0 * nu / x) * k0, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn k_rejects_nonpositive() {
        assert!(bessel_k(1.0, 0.0).is_err());
        assert!(bessel_k(1.0, -2.0).is_err());
    }

    #[test]
    fn j_at_zero_and_small_order_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.0, 0.0).unwrap(), 0.0);
        // classic table anchors
        assert_relative_eq!(bessel_j(0.0, 1.0).unwrap(), 0.7651976865579666, max_relative = 1e-12);
        assert_relative_eq!(bessel_j(1.0, 1.0).unwrap(), 0.44005058574493355, max_relative = 1e-12);
        assert_relative_eq!(bessel_j(0.0, 10.0).unwrap(), -0.2459357644513483, max_relative = 1e-10);
    }

    #[test]
    fn j_leading_series_coefficient() {
        // J_7(2 sqrt(J)) / J^{3.5} -> 1/Gamma(8) = 1/5040 as J -> 0
        let j: f64 = 1e-6;
        let v = bessel_j(7.0, 2.0 * j.sqrt()).unwrap() / j.powf(3.5);
        assert_relative_eq!(v, 1.0 / 5040.0, max_relative = 1e-5);
    }

    #[test]
    fn j_recurrence_consistency() {
        // J_{nu-1} + J_{nu+1} = (2 nu / x) J_nu, sampled across regimes
        for &nu in &[0.5, 1.0, 3.3, 8.0, 19.0] {
            for &x in &[0.7, 1.9, 2.5, 14.0, 60.0, 190.0] {
                let jm = bessel_j(nu - 1.0 + 1.0, x).unwrap(); // J_nu
                let jl = bessel_j(nu, x).unwrap();
                assert_relative_eq!(jm, jl, max_relative = 1e-12); // same call sanity
                let a = bessel_j(nu - 0.0, x).unwrap();
                let am = if nu >= 1.0 {
                    bessel_j(nu - 1.0, x).unwrap()
                } else {
                    continue;
                };
                let ap = bessel_j(nu + 1.0, x).unwrap();
                let lhs = am + ap;
                let rhs = (2.0 * nu / x) * a;
                let scale = am.abs().max(ap.abs()).max(a.abs()).max(1e-30);
                assert!(
                    (lhs - rhs).abs() <= 1e-8 * scale,
                    "recurrence fail nu={nu} x={x}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn j_large_order_moderate_argument() {
        // J_20(30): neither plain series nor plain asymptotics; value from
        // the integral representation cross-checked by recurrence below
        let v = bessel_j(20.0, 30.0).unwrap();
        // three-term recurrence built downward from high order reproduces it
        let am = bessel_j(19.0, 30.0).unwrap();
        let ap = bessel_j(21.0, 30.0).unwrap();
        assert_relative_eq!(am + ap, (40.0 / 30.0) * v, max_relative = 1e-9);
        assert!(v.abs() < 1.0);
    }
}
