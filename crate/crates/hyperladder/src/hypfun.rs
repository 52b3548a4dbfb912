//! Polynomial eigenfunctions `Phi_l`, the associated special functions
//! `Phi_{l,m} = kappa^m d^m Phi_l / ds^m`, ladder operators and norms.
//!
//! `Phi_l` is built monic by matching powers in
//! `sigma Phi'' + tau Phi' + lambda_l Phi = 0`, solved from the leading
//! coefficient downward; the divisor at power `i` is `lambda_l - lambda_i`,
//! nonzero for `l` below the validity bound. The ladder maps are exact on
//! the coefficient representation: with `Phi_{l,m} = kappa^m P`,
//!
//! ```text
//! A_m:  P -> P'                              (index m -> m+1)
//! A_m+: P -> -sigma P' - (tau + m sigma') P  (index m+1 -> m)
//! ```

use crate::cases::{CanonicalCase, CaseError, Endpoint, SigmaTag};
use crate::jet::{poly_jet, Jet};
use crate::poly;
use crate::quadrature::{self, QuadError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HypError {
    #[error("index l={l} is not below the validity bound Lambda={lambda}")]
    IndexBeyondLambda { l: u32, lambda: f64 },
    #[error("index out of range: require 0 <= m <= l < Lambda, got l={l}, m={m}")]
    IndexOutOfRange { l: u32, m: u32 },
    #[error("operator index {op_m} does not match function index {f_m}")]
    IndexMismatch { op_m: u32, f_m: u32 },
    #[error(transparent)]
    Case(#[from] CaseError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// `Phi_{l,m}(s) = kappa^m(s) P(s)` with `P = d^m Phi_l / ds^m` stored by
/// coefficients. `Phi_l` itself is the `m = 0` member, normalized monic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypFunction {
    pub case: CanonicalCase,
    pub l: u32,
    pub m: u32,
    pub coeffs: Vec<f64>,
}

impl HypFunction {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial factor, `l - m` for ladder-built members.
    pub fn poly_degree(&self) -> Option<usize> {
        poly::degree(&self.coeffs)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.case.sigma_at(s).powf(self.m as f64 / 2.0) * poly::eval(&self.coeffs, s)
    }

    /// Value and first three derivatives at `s`, exact through the
    /// representation.
    pub fn jet(&self, s: f64) -> Jet {
        let x = Jet::var(s);
        let sigma = sigma_jet(&self.case, x);
        let kappa_m = if self.m == 0 {
            Jet::constant(1.0)
        } else {
            sigma.powf(self.m as f64 / 2.0)
        };
        kappa_m * poly_jet(&self.coeffs, x)
    }
}

fn sigma_jet(case: &CanonicalCase, x: Jet) -> Jet {
    let (c0, c1, c2) = case.sigma_tag().sigma_coeffs();
    poly_jet(&[c0, c1, c2], x)
}

fn check_l(case: &CanonicalCase, l: u32) -> Result<(), HypError> {
    let cap = case.capital_lambda();
    if (l as f64) < cap {
        Ok(())
    } else {
        Err(HypError::IndexBeyondLambda { l, lambda: cap })
    }
}

/// Monic polynomial of degree `l` solving the hypergeometric equation with
/// eigenvalue `lambda_l`.
pub fn phi_l(case: &CanonicalCase, l: u32) -> Result<HypFunction, HypError> {
    check_l(case, l)?;
    let (c0, c1, _) = case.sigma_tag().sigma_coeffs();
    let tau0 = case.beta();
    let lam_l = case.lambda(l);
    let n = l as usize;
    let mut p = vec![0.0; n + 1];
    p[n] = 1.0;
    for i in (0..n).rev() {
        let fi = i as f64;
        let t2 = if i + 2 <= n {
            c0 * (fi + 2.0) * (fi + 1.0) * p[i + 2]
        } else {
            0.0
        };
        let t1 = (fi + 1.0) * (c1 * fi + tau0) * p[i + 1];
        p[i] = -(t2 + t1) / (lam_l - case.lambda(i as u32));
    }
    Ok(HypFunction {
        case: *case,
        l,
        m: 0,
        coeffs: p,
    })
}

/// `Phi_{l,m}`: the `m`-th derivative of `Phi_l` dressed with `kappa^m`.
pub fn associated(case: &CanonicalCase, l: u32, m: u32) -> Result<HypFunction, HypError> {
    if m > l {
        return Err(HypError::IndexOutOfRange { l, m });
    }
    let base = phi_l(case, l)?;
    let mut coeffs = base.coeffs;
    for _ in 0..m {
        coeffs = poly::derivative(&coeffs);
    }
    Ok(HypFunction {
        case: *case,
        l,
        m,
        coeffs,
    })
}

/// `A_m = kappa d/ds - m kappa'`, exact on the representation:
/// `kappa^m P` maps to `kappa^{m+1} P'`. Annihilates the `l = m` member.
pub fn apply_a(case: &CanonicalCase, m: u32, f: &HypFunction) -> Result<HypFunction, HypError> {
    if f.m != m {
        return Err(HypError::IndexMismatch { op_m: m, f_m: f.m });
    }
    Ok(HypFunction {
        case: *case,
        l: f.l,
        m: m + 1,
        coeffs: poly::derivative(&f.coeffs),
    })
}

/// `A_m+ = -kappa d/ds - tau/kappa - (m-1) kappa'` on an index-`m+1`
/// function: `kappa^{m+1} P` maps to `kappa^m (-sigma P' - (tau + m sigma') P)`.
pub fn apply_a_plus(
    case: &CanonicalCase,
    m: u32,
    f: &HypFunction,
) -> Result<HypFunction, HypError> {
    if f.m != m + 1 {
        return Err(HypError::IndexMismatch { op_m: m, f_m: f.m });
    }
    let (c0, c1, c2) = case.sigma_tag().sigma_coeffs();
    let sigma_dp = poly::mul_quadratic(&poly::derivative(&f.coeffs), c0, c1, c2);
    // tau + m sigma' = (beta + m c1) + (alpha + 2 m c2) s
    let mf = m as f64;
    let lin0 = case.beta() + mf * c1;
    let lin1 = case.alpha() + 2.0 * mf * c2;
    let tail = poly::mul_quadratic(&f.coeffs, lin0, lin1, 0.0);
    let coeffs = poly::scale(&poly::add(&sigma_dp, &tail), -1.0);
    Ok(HypFunction {
        case: *case,
        l: f.l,
        m,
        coeffs,
    })
}

/// First-order ladder operator applied pointwise through jets. The result
/// loses one derivative order: its `d3` slot is not meaningful.
pub fn apply_ladder_jet(case: &CanonicalCase, m: f64, dagger: bool, f: Jet, s: f64) -> Jet {
    let x = Jet::var(s);
    let sigma = sigma_jet(case, x);
    let kappa = sigma.sqrt();
    let kappa_p = {
        let (_, c1, c2) = case.sigma_tag().sigma_coeffs();
        poly_jet(&[c1, 2.0 * c2], x) * kappa.recip().scale(0.5)
    };
    let df = Jet {
        d: [f.d[1], f.d[2], f.d[3], 0.0],
    };
    if !dagger {
        kappa * df - kappa_p.scale(m) * f
    } else {
        let tau = poly_jet(&[case.beta(), case.alpha()], x);
        -(kappa * df) - (tau / kappa) * f - kappa_p.scale(m - 1.0) * f
    }
}

/// The five-term operator `H_m` applied pointwise; needs two derivatives of
/// `f`, so the result jet is meaningful through `d1` only.
pub fn apply_h_jet(case: &CanonicalCase, m: f64, f: Jet, s: f64) -> Jet {
    let x = Jet::var(s);
    let sigma = sigma_jet(case, x);
    let tau = poly_jet(&[case.beta(), case.alpha()], x);
    let (_, c1, c2) = case.sigma_tag().sigma_coeffs();
    let sigma_p = poly_jet(&[c1, 2.0 * c2], x);
    let sigma_dd = 2.0 * c2;
    let d1 = Jet {
        d: [f.d[1], f.d[2], f.d[3], 0.0],
    };
    let d2 = Jet {
        d: [f.d[2], f.d[3], 0.0, 0.0],
    };
    let c = (sigma_p * sigma_p / sigma).scale(m * (m - 2.0) / 4.0)
        + (tau * sigma_p / sigma).scale(m / 2.0)
        + Jet::constant(-0.5 * m * (m - 2.0) * sigma_dd - m * case.alpha());
    -(sigma * d2) - tau * d1 + c * f
}

/// `H_m f` at `s` for a twice-differentiable `f` given as a jet.
pub fn apply_h(case: &CanonicalCase, m: f64, f: Jet, s: f64) -> Result<f64, HypError> {
    if !case.interval().contains(s) {
        let iv = case.interval();
        return Err(HypError::Case(CaseError::OutsideInterval {
            s,
            a: iv.a.as_f64(),
            b: iv.b.as_f64(),
        }));
    }
    Ok(apply_h_jet(case, m, f, s).value())
}

/// Weighted L2 norm of `Phi_{l,m}` by quadrature; the integrand
/// `sigma^m P^2 rho` avoids the square root entirely.
pub fn norm(case: &CanonicalCase, l: u32, m: u32) -> Result<f64, HypError> {
    let f = associated(case, l, m)?;
    let mi = m as i32;
    let sq = quadrature::weighted_integral(
        case,
        |s| case.sigma_at(s).powi(mi) * {
            let p = poly::eval(&f.coeffs, s);
            p * p
        },
        1e-12,
    )?;
    Ok(sq.value.sqrt())
}

/// `phi_{l,m} = Phi_{l,m} / ||Phi_{l,m}||` with positive leading coefficient.
pub fn normalized(case: &CanonicalCase, l: u32, m: u32) -> Result<HypFunction, HypError> {
    let f = associated(case, l, m)?;
    let n = norm(case, l, m)?;
    let mut coeffs = poly::scale(&f.coeffs, 1.0 / n);
    if coeffs.last().copied().unwrap_or(0.0) < 0.0 {
        coeffs = poly::scale(&coeffs, -1.0);
    }
    Ok(HypFunction {
        case: *case,
        l,
        m,
        coeffs,
    })
}

/// Classical-polynomial value proportional to `Phi_l` (test oracle): the
/// Hermite/Laguerre/Jacobi correspondence, with the `sigma = s^2 + 1` row
/// realized by a real three-term recurrence for
/// `y_n = i^n P_n^{((alpha+i beta)/2 - 1, (alpha-i beta)/2 - 1)}(i s)`.
pub fn classical_oracle(case: &CanonicalCase, l: u32, s: f64) -> Result<f64, HypError> {
    check_l(case, l)?;
    let alpha = case.alpha();
    let beta = case.beta();
    let n = l as usize;
    let v = match case.sigma_tag() {
        SigmaTag::One => {
            let u = (-alpha / 2.0).sqrt() * s - beta / (-2.0 * alpha).sqrt();
            hermite(n, u)
        }
        SigmaTag::S => laguerre(n, beta - 1.0, -alpha * s),
        SigmaTag::OneMinusS2 => jacobi(n, -(alpha + beta) / 2.0 - 1.0, (-alpha + beta) / 2.0 - 1.0, s),
        SigmaTag::S2MinusOne => jacobi(n, (alpha - beta) / 2.0 - 1.0, (alpha + beta) / 2.0 - 1.0, -s),
        SigmaTag::S2 => (s / beta).powi(l as i32) * laguerre(n, 1.0 - alpha - 2.0 * l as f64, beta / s),
        SigmaTag::S2PlusOne => jacobi_imag(n, alpha, beta, s),
    };
    Ok(v)
}

fn hermite(n: usize, x: f64) -> f64 {
    let mut h0 = 1.0;
    if n == 0 {
        return h0;
    }
    let mut h1 = 2.0 * x;
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

fn laguerre(n: usize, p: f64, x: f64) -> f64 {
    let mut l0 = 1.0;
    if n == 0 {
        return l0;
    }
    let mut l1 = 1.0 + p - x;
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 + p - x) * l1 - (kf + p) * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

fn jacobi(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let kf = k as f64;
        let den = 2.0 * kf * (kf + a + b) * (2.0 * kf + a + b - 2.0);
        let t1 = (2.0 * kf + a + b - 1.0)
            * ((2.0 * kf + a + b) * (2.0 * kf + a + b - 2.0) * x + a * a - b * b);
        let t2 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * (2.0 * kf + a + b);
        let p2 = (t1 * p1 - t2 * p0) / den;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `i^n P_n^{(p, conj p)}(i s)` with `p = (alpha + i beta)/2 - 1`: the
/// substitution turns the Jacobi recurrence into one with real coefficients.
fn jacobi_imag(n: usize, alpha: f64, beta: f64, s: f64) -> f64 {
    let mut y0 = 1.0;
    if n == 0 {
        return y0;
    }
    let mut y1 = -(alpha * s + beta) / 2.0;
    for k in 2..=n {
        let kf = k as f64;
        let den = 2.0 * kf * (kf + alpha - 2.0) * (2.0 * kf + alpha - 4.0);
        let t1 = (2.0 * kf + alpha - 3.0)
            * ((2.0 * kf + alpha - 2.0) * (2.0 * kf + alpha - 4.0) * s + beta * (alpha - 2.0));
        let q = (kf - 2.0 + alpha / 2.0).powi(2) + beta * beta / 4.0;
        let t2 = 2.0 * q * (2.0 * kf + alpha - 2.0);
        let y2 = (-t1 * y1 + t2 * y0) / den;
        y0 = y1;
        y1 = y2;
    }
    y1
}

/// Sample points for residual checks: Chebyshev nodes on the interval, or on
/// a reference box when an endpoint is infinite.
pub fn sample_points(case: &CanonicalCase, count: usize) -> Vec<f64> {
    let iv = case.interval();
    let (a, b) = match (iv.a, iv.b) {
        (Endpoint::Finite(a), Endpoint::Finite(b)) => (a + 1e-3, b - 1e-3),
        (Endpoint::Finite(a), Endpoint::PosInf) => (a + 0.1, a + 5.0),
        (Endpoint::NegInf, Endpoint::PosInf) => (-3.0, 3.0),
        _ => unreachable!(),
    };
    (0..count)
        .map(|k| {
            let t = ((2 * k + 1) as f64) * std::f64::consts::PI / (2 * count) as f64;
            0.5 * (a + b) + 0.5 * (b - a) * t.cos()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::SigmaTag;
    use approx::assert_relative_eq;

    fn hermite_case() -> CanonicalCase {
        CanonicalCase::new(SigmaTag::One, -2.0, 0.0).unwrap()
    }

    fn laguerre_case() -> CanonicalCase {
        CanonicalCase::new(SigmaTag::S, -1.0, 1.0).unwrap()
    }

    fn gegenbauer_case() -> CanonicalCase {
        CanonicalCase::new(SigmaTag::OneMinusS2, -3.0, 0.0).unwrap()
    }

    fn sample_cases() -> Vec<CanonicalCase> {
        vec![
            hermite_case(),
            laguerre_case(),
            gegenbauer_case(),
            CanonicalCase::new(SigmaTag::S2MinusOne, -13.0, 14.0).unwrap(),
            CanonicalCase::new(SigmaTag::S2, -13.0, 1.0).unwrap(),
            CanonicalCase::new(SigmaTag::S2PlusOne, -13.0, 2.0).unwrap(),
        ]
    }

    #[test]
    fn phi_l_known_polynomials() {
        // monic Hermite: s^2 - 1/2
        let f = phi_l(&hermite_case(), 2).unwrap();
        assert_eq!(f.coeffs, vec![-0.5, 0.0, 1.0]);
        // l = 0 is the constant 1
        for c in sample_cases() {
            assert_eq!(phi_l(&c, 0).unwrap().coeffs, vec![1.0]);
        }
        // monic Laguerre-type: s - 1
        let f = phi_l(&laguerre_case(), 1).unwrap();
        assert_eq!(f.coeffs, vec![-1.0, 1.0]);
    }

    #[test]
    fn phi_l_beyond_lambda_rejected() {
        let c = CanonicalCase::new(SigmaTag::S2MinusOne, -6.0, 1.0).unwrap();
        // Lambda = 3.5: l = 3 fine, l = 4 not
        assert!(phi_l(&c, 3).is_ok());
        assert!(matches!(
            phi_l(&c, 4),
            Err(HypError::IndexBeyondLambda { .. })
        ));
    }

    #[test]
    fn ode_residual_all_cases() {
        for c in sample_cases() {
            let cap = c.capital_lambda();
            let lmax = if cap.is_finite() {
                ((cap.ceil() as u32).saturating_sub(1)).min(12)
            } else {
                12
            };
            for l in 0..=lmax {
                let f = phi_l(&c, l).unwrap();
                let pts = sample_points(&c, 2 * l as usize + 5);
                let scale = 1.0 + poly::max_abs(&f.coeffs);
                for &s in &pts {
                    let j = poly_jet(&f.coeffs, Jet::var(s));
                    let res = c.sigma_at(s) * j.d2() + c.tau_at(s) * j.d1()
                        + c.lambda(l) * j.value();
                    assert!(
                        res.abs() < 1e-9 * scale,
                        "ODE residual {res} at s={s}, l={l}, case {:?}",
                        c.sigma_tag()
                    );
                }
            }
        }
    }

    #[test]
    fn classical_correspondence_ratio_constant() {
        for c in sample_cases() {
            let cap = c.capital_lambda();
            let lmax = if cap.is_finite() { 6.min(cap.ceil() as u32 - 1) } else { 6 };
            for l in 0..=lmax {
                let f = phi_l(&c, l).unwrap();
                // both sides share their zeros; ratio-test away from them
                let mut pts = sample_points(&c, 11);
                pts.sort_by(|a, b| {
                    let va = classical_oracle(&c, l, *b).unwrap().abs();
                    let vb = classical_oracle(&c, l, *a).unwrap().abs();
                    va.partial_cmp(&vb).unwrap()
                });
                let ratios: Vec<f64> = pts[..5]
                    .iter()
                    .map(|&s| {
                        let oracle = classical_oracle(&c, l, s).unwrap();
                        poly::eval(&f.coeffs, s) / oracle
                    })
                    .collect();
                for r in &ratios {
                    assert!(
                        (r - ratios[0]).abs() <= 1e-8 * ratios[0].abs(),
                        "ratio not constant for {:?} l={l}: {ratios:?}",
                        c.sigma_tag()
                    );
                }
            }
        }
    }

    #[test]
    fn associated_derivatives() {
        let c = hermite_case();
        // Phi_{2,1}: derivative of s^2 - 1/2 dressed with kappa
        let f = associated(&c, 2, 1).unwrap();
        assert_eq!(f.coeffs, vec![0.0, 2.0]);
        // Phi_{3,2}: second derivative of s^3 - 3/2 s
        let f = associated(&c, 3, 2).unwrap();
        assert_eq!(f.coeffs, vec![0.0, 6.0]);
        // l = m: polynomial factor is the constant l!
        let f = associated(&c, 3, 3).unwrap();
        assert_eq!(f.coeffs, vec![6.0]);
        assert!(matches!(
            associated(&c, 2, 3),
            Err(HypError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn ladder_raising_matches_associated() {
        for c in sample_cases() {
            for l in 0..=6u32 {
                if l as f64 >= c.capital_lambda() {
                    continue;
                }
                for m in 0..l {
                    let f = associated(&c, l, m).unwrap();
                    let raised = apply_a(&c, m, &f).unwrap();
                    let direct = associated(&c, l, m + 1).unwrap();
                    assert_eq!(raised.coeffs.len(), direct.coeffs.len());
                    for (a, b) in raised.coeffs.iter().zip(&direct.coeffs) {
                        assert_relative_eq!(a, b, max_relative = 1e-12);
                    }
                }
                // annihilation at the top
                let top = associated(&c, l, l).unwrap();
                assert!(apply_a(&c, l, &top).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn ladder_lowering_eigenrelation() {
        // A_m+ Phi_{l,m+1} = (lambda_l - lambda_m) Phi_{l,m}
        for c in sample_cases() {
            for l in 1..=6u32 {
                if l as f64 >= c.capital_lambda() {
                    continue;
                }
                for m in 0..l {
                    let up = associated(&c, l, m + 1).unwrap();
                    let lowered = apply_a_plus(&c, m, &up).unwrap();
                    let expect =
                        poly::scale(&associated(&c, l, m).unwrap().coeffs, c.lambda(l) - c.lambda(m));
                    assert_eq!(lowered.coeffs.len(), expect.len());
                    let scale = poly::max_abs(&expect);
                    for (a, b) in lowered.coeffs.iter().zip(&expect) {
                        assert!(
                            (a - b).abs() <= 1e-12 * scale,
                            "lowering mismatch {:?} l={l} m={m}: {a} vs {b}",
                            c.sigma_tag()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn hermite_lowering_example() {
        let c = hermite_case();
        let up = associated(&c, 2, 1).unwrap();
        let lowered = apply_a_plus(&c, 0, &up).unwrap();
        // (lambda_2 - lambda_0) Phi_{2,0} = 4 (s^2 - 1/2)
        assert_eq!(lowered.coeffs, vec![-2.0, 0.0, 4.0]);
        // Laguerre l=1: A_0+ Phi_{1,1} = lambda_1 Phi_{1,0} = s - 1
        let c = laguerre_case();
        let up = associated(&c, 1, 1).unwrap();
        let lowered = apply_a_plus(&c, 0, &up).unwrap();
        assert_eq!(lowered.coeffs, vec![-1.0, 1.0]);
        // index mismatch rejected
        assert!(matches!(
            apply_a_plus(&c, 1, &up),
            Err(HypError::IndexMismatch { .. })
        ));
    }

    #[test]
    fn h_operator_eigenvalue_pointwise() {
        let c = hermite_case();
        let f = associated(&c, 2, 1).unwrap();
        let s = 0.3;
        let hv = apply_h(&c, 1.0, f.jet(s), s).unwrap();
        assert_relative_eq!(hv, c.lambda(2) * f.eval(s), max_relative = 1e-12);
        // H_0 annihilates the constant
        let f0 = phi_l(&c, 0).unwrap();
        assert!(apply_h(&c, 0.0, f0.jet(0.7), 0.7).unwrap().abs() < 1e-14);
        // outside interval rejected
        let c2 = gegenbauer_case();
        assert!(apply_h(&c2, 0.0, Jet::constant(1.0), 2.0).is_err());
    }

    #[test]
    fn factorization_and_intertwining_pointwise() {
        // random cubic f, identities of the shape-invariant factorization
        let f_coeffs = [0.3, -1.2, 0.5, 0.8];
        for c in sample_cases() {
            for &m in &[0.0f64, 1.0, 2.0] {
                for &s in &sample_points(&c, 7)[..] {
                    let f = poly_jet(&f_coeffs, Jet::var(s));
                    let scale = 1.0 + f.value().abs().max(f.d1().abs()).max(f.d2().abs());
                    // A_m+ A_m f = (H_m - lambda_m) f
                    let af = apply_ladder_jet(&c, m, false, f, s);
                    let aaf = apply_ladder_jet(&c, m, true, af, s).value();
                    let hf = apply_h_jet(&c, m, f, s).value() - c.lambda_real(m) * f.value();
                    assert!(
                        (aaf - hf).abs() < 1e-9 * scale.max(hf.abs()),
                        "A+A != H - lambda at {:?} m={m} s={s}: {aaf} vs {hf}",
                        c.sigma_tag()
                    );
                    // A_m A_m+ f = (H_{m+1} - lambda_m) f
                    let apf = apply_ladder_jet(&c, m, true, f, s);
                    let aapf = apply_ladder_jet(&c, m, false, apf, s).value();
                    let hpf =
                        apply_h_jet(&c, m + 1.0, f, s).value() - c.lambda_real(m) * f.value();
                    assert!(
                        (aapf - hpf).abs() < 1e-9 * scale.max(hpf.abs()),
                        "A A+ != H' - lambda at {:?} m={m} s={s}",
                        c.sigma_tag()
                    );
                    // intertwining H_m A_m+ = A_m+ H_{m+1}
                    let lhs = apply_h_jet(&c, m, apply_ladder_jet(&c, m, true, f, s), s).value();
                    let hpf_jet = apply_h_jet(&c, m + 1.0, f, s);
                    let rhs = apply_ladder_jet(&c, m, true, hpf_jet, s).value();
                    assert!(
                        (lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs().max(rhs.abs())),
                        "intertwining fails at {:?} m={m} s={s}: {lhs} vs {rhs}",
                        c.sigma_tag()
                    );
                }
            }
        }
    }

    #[test]
    fn norms_hermite() {
        let c = hermite_case();
        let sqrt_pi = std::f64::consts::PI.sqrt();
        // ||Phi_{1,1}||^2 = sqrt(pi), lambda_1 ||Phi_{1,0}||^2 = 2 sqrt(pi)/2
        assert_relative_eq!(norm(&c, 1, 1).unwrap().powi(2), sqrt_pi, max_relative = 1e-10);
        assert_relative_eq!(
            norm(&c, 1, 0).unwrap().powi(2),
            sqrt_pi / 2.0,
            max_relative = 1e-10
        );
        // ||Phi_{0,0}||^2 = int rho
        assert_relative_eq!(norm(&c, 0, 0).unwrap().powi(2), sqrt_pi, max_relative = 1e-10);
    }

    #[test]
    fn norm_chain_ratio() {
        // ||Phi_{l,m+1}|| = sqrt(lambda_l - lambda_m) ||Phi_{l,m}||
        let c = gegenbauer_case();
        let r = norm(&c, 1, 1).unwrap() / norm(&c, 1, 0).unwrap();
        assert_relative_eq!(r, 3.0f64.sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn normalized_functions() {
        let c = hermite_case();
        let f = normalized(&c, 2, 1).unwrap();
        let ip = quadrature::inner_product(&c, |s| f.eval(s), |s| f.eval(s), 1e-12).unwrap();
        assert_relative_eq!(ip.value, 1.0, max_relative = 1e-10);
        assert!(f.coeffs.last().unwrap() > &0.0);
        // A_m phi_{l,m} = sqrt(lambda_l - lambda_m) phi_{l,m+1} for l=2, m=0
        let lo = normalized(&c, 2, 0).unwrap();
        let hi = normalized(&c, 2, 1).unwrap();
        let raised = apply_a(&c, 0, &lo).unwrap();
        let factor = (c.lambda(2) - c.lambda(0)).sqrt();
        for (a, b) in raised.coeffs.iter().zip(&hi.coeffs) {
            assert_relative_eq!(*a, factor * b, max_relative = 1e-10);
        }
    }

    #[test]
    fn adjointness_inner_products() {
        // <A_m f, g> = <f, A_m+ g> for associated-function pairs
        let c = gegenbauer_case();
        let m = 1u32;
        let f = associated(&c, 3, m).unwrap();
        let g = associated(&c, 4, m + 1).unwrap();
        let af = apply_a(&c, m, &f).unwrap();
        let apg = apply_a_plus(&c, m, &g).unwrap();
        let lhs = quadrature::inner_product(&c, |s| af.eval(s), |s| g.eval(s), 1e-12)
            .unwrap()
            .value;
        let rhs = quadrature::inner_product(&c, |s| f.eval(s), |s| apg.eval(s), 1e-12)
            .unwrap()
            .value;
        assert!((lhs - rhs).abs() < 1e-8 * (1.0 + lhs.abs()));
    }

    #[test]
    fn orthogonality_gram() {
        for c in [hermite_case(), laguerre_case(), gegenbauer_case()] {
            for m in 0..=2u32 {
                let fam: Vec<HypFunction> = (m..m + 6)
                    .map(|l| normalized(&c, l, m).unwrap())
                    .collect();
                for (i, fi) in fam.iter().enumerate() {
                    for (k, fk) in fam.iter().enumerate().skip(i) {
                        let ip = quadrature::inner_product(
                            &c,
                            |s| fi.eval(s),
                            |s| fk.eval(s),
                            1e-12,
                        )
                        .unwrap()
                        .value;
                        if i == k {
                            assert_relative_eq!(ip, 1.0, epsilon = 1e-8);
                        } else {
                            assert!(ip.abs() < 1e-8, "off-diagonal {ip} at ({i},{k})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn serialization_round_trip() {
        let f = associated(&gegenbauer_case(), 3, 1).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: HypFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(json.contains("\"coeffs\""));
    }
}
