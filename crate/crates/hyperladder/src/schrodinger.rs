//! Change of variable to Schrodinger form.
//!
//! With `s = s(x)` chosen so `ds/dx = +-kappa(s(x))`, the eigenfunctions
//! `Psi_{l,m}(x) = sqrt(kappa rho)(s(x)) Phi_{l,m}(s(x))` solve
//! `-Psi'' + V_m Psi = lambda_l Psi` where the potential factors through the
//! superpotential `W_m = -tau/(2 kappa) - (2m-1) kappa'/2` (evaluated at
//! `s(x)`, the same expression for both orientations):
//!
//! ```text
//! V_m     = W_m^2 - kappa W_m,s + lambda_m
//! V_{m+1} = W_m^2 + kappa W_m,s + lambda_m      (partner)
//! ```
//!
//! All derivatives run through the exact jet representation; no finite
//! differences anywhere.

use crate::cases::{CanonicalCase, Endpoint, Interval, SigmaTag};
use crate::hypfun::{self, HypError, HypFunction};
use crate::jet::Jet;
use crate::quadrature::{self, QuadError};
use crate::tilde::{DeformedFunction, DeformedParams};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SchrodError {
    #[error("x={x} lies outside the mapped interval ({a}, {b})")]
    OutsideInterval { x: f64, a: f64, b: f64 },
    #[error(transparent)]
    Hyp(#[from] HypError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// The closed-form map `x -> s(x)` with `ds/dx = orientation * kappa(s(x))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariableMap {
    pub case: CanonicalCase,
    pub orientation: i8,
    pub x_interval: Interval,
}

impl VariableMap {
    pub fn build(case: CanonicalCase, orientation: i8) -> VariableMap {
        assert!(orientation == 1 || orientation == -1);
        use Endpoint::*;
        let base = match case.sigma_tag() {
            SigmaTag::One | SigmaTag::S2 | SigmaTag::S2PlusOne => Interval { a: NegInf, b: PosInf },
            SigmaTag::OneMinusS2 => Interval {
                a: Finite(-std::f64::consts::FRAC_PI_2),
                b: Finite(std::f64::consts::FRAC_PI_2),
            },
            SigmaTag::S | SigmaTag::S2MinusOne => Interval { a: Finite(0.0), b: PosInf },
        };
        let x_interval = if orientation == 1 {
            base
        } else {
            // reflect x -> -x
            let neg = |e: Endpoint| match e {
                NegInf => PosInf,
                PosInf => NegInf,
                Finite(v) => Finite(-v),
            };
            Interval { a: neg(base.b), b: neg(base.a) }
        };
        VariableMap { case, orientation, x_interval }
    }

    /// `s(x)` together with its derivatives.
    pub fn s_jet(&self, x: f64) -> Jet {
        let u = Jet::var(x).scale(self.orientation as f64);
        match self.case.sigma_tag() {
            SigmaTag::One => u,
            SigmaTag::OneMinusS2 => u.sin(),
            SigmaTag::S => {
                let h = u.scale(0.5);
                h * h
            }
            SigmaTag::S2MinusOne => u.cosh(),
            SigmaTag::S2 => u.exp(),
            SigmaTag::S2PlusOne => u.sinh(),
        }
    }

    pub fn s_of_x(&self, x: f64) -> f64 {
        self.s_jet(x).value()
    }

    /// `ds/dx`, equal to `orientation * kappa(s(x))`.
    pub fn jacobian(&self, x: f64) -> f64 {
        self.s_jet(x).d1()
    }

    fn check_inside(&self, x: f64) -> Result<(), SchrodError> {
        if self.x_interval.contains(x) {
            Ok(())
        } else {
            Err(SchrodError::OutsideInterval {
                x,
                a: self.x_interval.a.as_f64(),
                b: self.x_interval.b.as_f64(),
            })
        }
    }

    /// A uniform interior grid, excluding small neighborhoods of finite
    /// endpoints, clipped to a reference box where the interval is infinite.
    pub fn sample_grid(&self, n: usize) -> Vec<f64> {
        let lo = match self.x_interval.a {
            Endpoint::Finite(a) => a + 1e-3,
            Endpoint::NegInf => -5.0,
            Endpoint::PosInf => unreachable!(),
        };
        let hi = match self.x_interval.b {
            Endpoint::Finite(b) => b - 1e-3,
            Endpoint::PosInf => lo + 8.0,
            Endpoint::NegInf => unreachable!(),
        };
        (0..n)
            .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64)
            .collect()
    }
}

/// `sqrt(kappa(s) rho(s))` as a jet of `s`; closed form per case.
fn sqrt_kappa_rho_jet(case: &CanonicalCase, s: Jet) -> Jet {
    let (alpha, beta) = (case.alpha(), case.beta());
    let one = Jet::constant(1.0);
    let rho = match case.sigma_tag() {
        SigmaTag::One => (s * s.scale(alpha / 2.0) + s.scale(beta)).exp(),
        SigmaTag::S => s.powf(beta - 1.0) * s.scale(alpha).exp(),
        SigmaTag::OneMinusS2 => {
            (one + s).powf(-(alpha - beta) / 2.0 - 1.0) * (one - s).powf(-(alpha + beta) / 2.0 - 1.0)
        }
        SigmaTag::S2MinusOne => {
            (s + one).powf((alpha - beta) / 2.0 - 1.0) * (s - one).powf((alpha + beta) / 2.0 - 1.0)
        }
        SigmaTag::S2 => s.powf(alpha - 2.0) * (s.recip().scale(-beta)).exp(),
        SigmaTag::S2PlusOne => {
            (one + s * s).powf(alpha / 2.0 - 1.0) * s.atan().scale(beta).exp()
        }
    };
    let (c0, c1, c2) = case.sigma_tag().sigma_coeffs();
    let sigma = Jet::constant(c0) + s.scale(c1) + (s * s).scale(c2);
    (sigma.sqrt() * rho).sqrt()
}

/// One factorized family at fixed ladder index `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchrodingerFamily {
    pub map: VariableMap,
    pub m: u32,
}

impl SchrodingerFamily {
    pub fn new(map: VariableMap, m: u32) -> SchrodingerFamily {
        SchrodingerFamily { map, m }
    }

    /// Superpotential and its s-derivative at `s`, shared by both
    /// orientations.
    fn w_jet(&self, s: Jet) -> Jet {
        let case = &self.map.case;
        let (c0, c1, c2) = case.sigma_tag().sigma_coeffs();
        let sigma = Jet::constant(c0) + s.scale(c1) + (s * s).scale(c2);
        let kappa = sigma.sqrt();
        let tau = s.scale(case.alpha()) + Jet::constant(case.beta());
        let kappa_p = (Jet::constant(c1) + s.scale(2.0 * c2)) * kappa.recip().scale(0.5);
        -(tau / kappa.scale(2.0)) - kappa_p.scale((2.0 * self.m as f64 - 1.0) / 2.0)
    }

    pub fn superpotential(&self, x: f64) -> Result<f64, SchrodError> {
        self.map.check_inside(x)?;
        Ok(self.w_jet(self.map.s_jet(x)).value())
    }

    /// `V_m(x) = W^2 - kappa W_s + lambda_m`.
    pub fn potential(&self, x: f64) -> Result<f64, SchrodError> {
        self.map.check_inside(x)?;
        let s = self.map.s_jet(x);
        let w = self.w_jet(s);
        let kappa = self.map.jacobian(x) * self.map.orientation as f64;
        Ok(w.value() * w.value() - kappa * (w.d1() / s.d1())
            + self.map.case.lambda(self.m))
    }

    /// Partner `V_{m+1}(x) = W^2 + kappa W_s + lambda_m` from the reversed
    /// factorization.
    pub fn partner_potential(&self, x: f64) -> Result<f64, SchrodError> {
        self.map.check_inside(x)?;
        let s = self.map.s_jet(x);
        let w = self.w_jet(s);
        let kappa = self.map.jacobian(x) * self.map.orientation as f64;
        Ok(w.value() * w.value() + kappa * (w.d1() / s.d1())
            + self.map.case.lambda(self.m))
    }

    /// `Psi_{l,m}` as an evaluable with exact derivatives.
    pub fn psi(&self, l: u32) -> Result<PsiFunction, SchrodError> {
        let phi = hypfun::associated(&self.map.case, l, self.m)?;
        Ok(PsiFunction { map: self.map, phi })
    }

    /// Residual `-Psi'' + V_m Psi - lambda_l Psi` at `x`.
    pub fn residual(&self, psi: &PsiFunction, x: f64) -> Result<f64, SchrodError> {
        let pj = psi.jet(x)?;
        let v = self.potential(x)?;
        Ok(-pj.d2() + v * pj.value() - self.map.case.lambda(psi.phi.l) * pj.value())
    }
}

/// `Psi_{l,m}(x) = sqrt(kappa rho)(s(x)) Phi_{l,m}(s(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiFunction {
    pub map: VariableMap,
    pub phi: HypFunction,
}

impl PsiFunction {
    pub fn jet(&self, x: f64) -> Result<Jet, SchrodError> {
        if !self.map.x_interval.contains(x) {
            return Err(SchrodError::OutsideInterval {
                x,
                a: self.map.x_interval.a.as_f64(),
                b: self.map.x_interval.b.as_f64(),
            });
        }
        let s = self.map.s_jet(x);
        let weight = sqrt_kappa_rho_jet(&self.map.case, s);
        let kappa_m = if self.phi.m == 0 {
            Jet::constant(1.0)
        } else {
            let (c0, c1, c2) = self.map.case.sigma_tag().sigma_coeffs();
            let sigma = Jet::constant(c0) + s.scale(c1) + (s * s).scale(c2);
            sigma.powf(self.phi.m as f64 / 2.0)
        };
        Ok(weight * kappa_m * crate::jet::poly_jet(&self.phi.coeffs, s))
    }

    pub fn eval(&self, x: f64) -> Result<f64, SchrodError> {
        Ok(self.jet(x)?.value())
    }

    /// L2 norm over the x-interval; equals the weighted s-space norm.
    pub fn norm(&self) -> Result<f64, SchrodError> {
        let sq = quadrature::integral(
            self.map.x_interval,
            |x| self.eval(x).map(|v| v * v).unwrap_or(0.0),
            1e-12,
        )?;
        Ok(sq.value.sqrt())
    }
}

/// First-order x-space ladder: `(d/dx + W_m) f` or its adjoint
/// `(-d/dx + W_m) f` when `dagger` is set (orientation +1 convention; the
/// signs swap for the reflected map).
pub fn ladder_x(
    family: &SchrodingerFamily,
    f: Jet,
    x: f64,
    dagger: bool,
) -> Result<Jet, SchrodError> {
    family.map.check_inside(x)?;
    let w = family.w_jet(family.map.s_jet(x));
    let df = Jet {
        d: [f.d[1], f.d[2], f.d[3], 0.0],
    };
    let sign = family.map.orientation as f64 * if dagger { -1.0 } else { 1.0 };
    Ok(df.scale(sign) + w * f)
}

/// Pointwise residual of the deformed reduction: with
/// `Psi~ = sqrt(kappa rho) Phi~(s(x))` and `V~_m = V_m - delta kappa'(s(x))`,
/// checks `-Psi~'' + V~_m Psi~ - lambda~_l Psi~` at `x`.
pub fn deformed_residual(
    family: &SchrodingerFamily,
    params: &DeformedParams,
    f: &DeformedFunction,
    x: f64,
) -> Result<f64, SchrodError> {
    family.map.check_inside(x)?;
    let s = family.map.s_jet(x);
    let weight = sqrt_kappa_rho_jet(&family.map.case, s);
    let psi = weight * compose_jet(f, s);
    let v = family.potential(x)?;
    let case = &family.map.case;
    let kappa_p =
        case.sigma_prime_at(s.value()) / (2.0 * case.sigma_at(s.value()).sqrt());
    let v_tilde = v - params.delta * kappa_p;
    let lam = {
        let mut at_l = *params;
        at_l = DeformedParams::new(at_l.case, at_l.delta, f.l).expect("valid chain top");
        at_l.tilde_lambda()
    };
    Ok(-psi.d2() + v_tilde * psi.value() - lam * psi.value())
}

/// Evaluates a deformed function on a jet of `s` (composition).
fn compose_jet(f: &DeformedFunction, s: Jet) -> Jet {
    // f.jet expects a raw point; rebuild through composition: evaluate the
    // s-space jet of f at s.value(), then chain through s(x)
    let fs = f.jet(s.value());
    s.compose(fs.d)
}
