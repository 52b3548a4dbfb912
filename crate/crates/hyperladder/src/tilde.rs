//! The delta-deformed operator families.
//!
//! When the weight is a power of sigma (`tau = (k+1) sigma'`), shifting the
//! ladder operators by `epsilon = delta / (2m + 2k + 1)` produces a new
//! shape-invariant family `H~_m = H_m - delta kappa'` with eigenvalues
//! `lambda~_m = lambda_m - delta^2 / (2m + 2k + 1)^2`. Its eigenfunctions
//! close over a finite basis: a fixed exponential-type prefactor tied to the
//! chain's top index `l` times span{ s^j kappa^{l-j} } (powers of sqrt(s)
//! for `sigma = s`), so the ladder action is an exact coefficient map here
//! just as in the undeformed module.

use crate::cases::{CanonicalCase, CaseError, SigmaTag};
use crate::jet::{poly_jet, Jet};
use crate::poly;
use crate::quadrature::{self, QuadError};
use serde::de::Error as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TildeError {
    #[error("case weight is not a power of sigma; no deformed family")]
    NotPowerWeight,
    #[error("2m + 2k + 1 = 0 at m={m}: deformation shift undefined")]
    DivisionByZeroShift { m: f64 },
    #[error("m={m} is not in the admissible set for delta={delta}")]
    NotInM { m: f64, delta: f64 },
    #[error("chain index m={m} leaves the admissible set")]
    ChainLeavesM { m: f64 },
    #[error("degenerate ladder denominator: lambda~_l = lambda~_m at m={m}")]
    DegenerateDenominator { m: f64 },
    #[error("operator index {op_m} does not match function index {f_m}")]
    IndexMismatch { op_m: f64, f_m: f64 },
    #[error(transparent)]
    Case(#[from] CaseError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// A deformed operator family at base index `m` (real) with shift
/// `epsilon = delta / (2m + 2k + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedParams {
    pub case: CanonicalCase,
    pub delta: f64,
    pub m: f64,
    k: f64,
}

impl DeformedParams {
    pub fn new(case: CanonicalCase, delta: f64, m: f64) -> Result<Self, TildeError> {
        let k = case.k_exponent().ok_or(TildeError::NotPowerWeight)?;
        if 2.0 * m + 2.0 * k + 1.0 == 0.0 {
            return Err(TildeError::DivisionByZeroShift { m });
        }
        Ok(DeformedParams { case, delta, m, k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `2x + 2k + 1`, the shift denominator at index `x`.
    fn denom(&self, x: f64) -> f64 {
        2.0 * x + 2.0 * self.k + 1.0
    }

    pub fn epsilon(&self) -> f64 {
        self.delta / self.denom(self.m)
    }

    fn epsilon_at(&self, x: f64) -> f64 {
        self.delta / self.denom(x)
    }

    /// `lambda~_m = lambda_m - delta^2 / (2m + 2k + 1)^2`, the eigenvalue
    /// formula extended to real index.
    pub fn tilde_lambda(&self) -> f64 {
        self.tilde_lambda_at(self.m)
    }

    pub fn tilde_lambda_at(&self, x: f64) -> f64 {
        let d = self.denom(x);
        self.case.lambda_real(x) - self.delta * self.delta / (d * d)
    }

    /// Derivative of the deformed eigenvalue in the index.
    pub fn dlambda_dm(&self) -> f64 {
        let (alpha, beta, delta, m) = (self.case.alpha(), self.case.beta(), self.delta, self.m);
        match self.case.sigma_tag() {
            SigmaTag::S => {
                let u = 2.0 * m + 2.0 * beta - 1.0;
                4.0 * delta * delta / (u * u * u)
            }
            SigmaTag::OneMinusS2 => {
                let u = 2.0 * m - alpha - 1.0;
                u * (1.0 + 4.0 * delta * delta / (u * u * u * u))
            }
            // sigma'' = 2 rows
            _ => {
                let u = 2.0 * m + alpha - 1.0;
                u * (-1.0 + 4.0 * delta * delta / (u * u * u * u))
            }
        }
    }

    fn at(&self, m: f64) -> DeformedParams {
        DeformedParams { m, ..*self }
    }
}

/// `Phi~_{l,m}(s) = E_l(s) * sum_j c_j B_j(s)` where `E_l` is the chain
/// prefactor (exponent tied to the top index `l`) and `B_j` the closed
/// basis: `(sqrt s)^{l-j}` for `sigma = s`, `s^j kappa^{l-j}` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformedFunction {
    pub case: CanonicalCase,
    pub l: f64,
    pub m: f64,
    pub delta: f64,
    pub coeffs: Vec<f64>,
    /// Exponent parameter of the prefactor, `-delta / (2l + 2k + 1)`.
    pub exp_param: f64,
}

impl DeformedFunction {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn basis_tag(&self) -> &'static str {
        match self.case.sigma_tag() {
            SigmaTag::S => "sqrt_s_powers",
            SigmaTag::S2 => "power_of_s",
            _ => "s_powers_times_kappa",
        }
    }

    /// Prefactor `E_l(s)` as a jet.
    fn prefactor_jet(&self, x: Jet) -> Jet {
        let e = self.exp_param;
        match self.case.sigma_tag() {
            SigmaTag::S => x.sqrt().scale(2.0 * e).exp(),
            SigmaTag::OneMinusS2 => x.asin().scale(e).exp(),
            SigmaTag::S2MinusOne => x.acosh().scale(e).exp(),
            SigmaTag::S2 => x.ln().scale(e).exp(),
            SigmaTag::S2PlusOne => x.asinh().scale(e).exp(),
            SigmaTag::One => unreachable!("no deformed family for sigma = 1"),
        }
    }

    fn basis_sum_jet(&self, x: Jet) -> Jet {
        match self.case.sigma_tag() {
            SigmaTag::S => {
                // sum c_j t^{l-j}, t = sqrt(s)
                let t = x.sqrt();
                let mut acc = Jet::constant(0.0);
                for (j, &c) in self.coeffs.iter().enumerate() {
                    acc = acc + t.powf(self.l - j as f64).scale(c);
                }
                acc
            }
            _ => {
                let (c0, _, c2) = self.case.sigma_tag().sigma_coeffs();
                let sigma = poly_jet(&[c0, 0.0, c2], x);
                let kappa = sigma.sqrt();
                let mut acc = Jet::constant(0.0);
                for (j, &c) in self.coeffs.iter().enumerate() {
                    let jf = j as f64;
                    acc = acc + x.powf(jf) * kappa.powf(self.l - jf).scale(c);
                }
                acc
            }
        }
    }

    pub fn jet(&self, s: f64) -> Jet {
        let x = Jet::var(s);
        self.prefactor_jet(x) * self.basis_sum_jet(x)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.jet(s).value()
    }

    /// Weighted L2 norm against the case weight.
    pub fn norm(&self) -> Result<f64, TildeError> {
        let sq = quadrature::weighted_integral(
            &self.case,
            |s| {
                let v = self.eval(s);
                v * v
            },
            1e-12,
        )?;
        Ok(sq.value.sqrt())
    }
}

/// Ground function `Phi~_{m,m}`: the closed-form annihilator solution of the
/// deformed lowering operator, requires `m` in the admissible set.
pub fn ground(params: &DeformedParams) -> Result<DeformedFunction, TildeError> {
    let mset = params.case.m_set(params.delta)?;
    if !mset.contains(params.m) {
        return Err(TildeError::NotInM {
            m: params.m,
            delta: params.delta,
        });
    }
    Ok(ground_unchecked(params))
}

fn ground_unchecked(params: &DeformedParams) -> DeformedFunction {
    DeformedFunction {
        case: params.case,
        l: params.m,
        m: params.m,
        delta: params.delta,
        coeffs: vec![1.0],
        exp_param: -params.epsilon_at(params.m),
    }
}

fn check_op_index(op_m: f64, f_m: f64) -> Result<(), TildeError> {
    if (op_m - f_m).abs() < 1e-12 {
        Ok(())
    } else {
        Err(TildeError::IndexMismatch { op_m, f_m })
    }
}

/// `A~_m = A_m + epsilon(m)`, exact on the coefficient representation;
/// annihilates the ground function.
pub fn apply_tilde_a(
    params: &DeformedParams,
    f: &DeformedFunction,
) -> Result<DeformedFunction, TildeError> {
    check_op_index(params.m, f.m)?;
    let eps_l = -f.exp_param;
    let eps_m = params.epsilon_at(params.m);
    let (l, m) = (f.l, params.m);
    let n = f.coeffs.len();
    let mut out = vec![0.0; n + 1];
    match params.case.sigma_tag() {
        SigmaTag::S => {
            for (j, &d) in f.coeffs.iter().enumerate() {
                let jf = j as f64;
                out[j] += (eps_m - eps_l) * d;
                out[j + 1] += 0.5 * (l - jf - m) * d;
            }
        }
        _ => {
            let (_, _, c2) = params.case.sigma_tag().sigma_coeffs();
            for (j, &d) in f.coeffs.iter().enumerate() {
                let jf = j as f64;
                out[j] += (eps_m - eps_l) * d;
                if j > 0 {
                    out[j - 1] += jf * d;
                }
                out[j + 1] += c2 * (l - jf - m) * d;
            }
        }
    }
    Ok(DeformedFunction {
        case: params.case,
        l,
        m: m + 1.0,
        delta: params.delta,
        coeffs: poly::trim_eps(out, 1e-13),
        exp_param: f.exp_param,
    })
}

/// `A~_m+ = A_m+ + epsilon(m)` acting on an index-`m+1` function.
pub fn apply_tilde_a_plus(
    params: &DeformedParams,
    f: &DeformedFunction,
) -> Result<DeformedFunction, TildeError> {
    check_op_index(params.m + 1.0, f.m)?;
    let eps_l = -f.exp_param;
    let eps_m = params.epsilon_at(params.m);
    let (l, m, k) = (f.l, params.m, params.k);
    let n = f.coeffs.len();
    let mut out = vec![0.0; n + 1];
    match params.case.sigma_tag() {
        SigmaTag::S => {
            for (j, &d) in f.coeffs.iter().enumerate() {
                let jf = j as f64;
                out[j] += (eps_l + eps_m) * d;
                out[j + 1] -= 0.5 * (l - jf + 2.0 * k + m + 1.0) * d;
            }
        }
        _ => {
            let (_, _, c2) = params.case.sigma_tag().sigma_coeffs();
            for (j, &d) in f.coeffs.iter().enumerate() {
                let jf = j as f64;
                out[j] += (eps_l + eps_m) * d;
                if j > 0 {
                    out[j - 1] -= jf * d;
                }
                out[j + 1] -= c2 * (l - jf + 2.0 * k + m + 1.0) * d;
            }
        }
    }
    Ok(DeformedFunction {
        case: params.case,
        l,
        m,
        delta: params.delta,
        coeffs: poly::trim_eps(out, 1e-13),
        exp_param: f.exp_param,
    })
}

/// The ladder chain `Phi~_{l,l}, Phi~_{l,l-1}, ..., Phi~_{l,l-n}` built by
/// repeated application of `A~_m+ / (lambda~_l - lambda~_m)`. Requires every
/// chain index in the admissible set.
pub fn deformed_family(
    params: &DeformedParams,
    l: f64,
    n: u32,
) -> Result<Vec<DeformedFunction>, TildeError> {
    let mset = params.case.m_set(params.delta)?;
    for step in 0..=n {
        let m = l - step as f64;
        if !mset.contains(m) {
            return Err(TildeError::ChainLeavesM { m });
        }
    }
    let top = params.at(l);
    let lam_l = top.tilde_lambda();
    let mut chain = vec![ground_unchecked(&top)];
    for step in 1..=n {
        let m = l - step as f64;
        let pm = params.at(m);
        let gap = lam_l - pm.tilde_lambda();
        if gap.abs() < 1e-12 {
            return Err(TildeError::DegenerateDenominator { m });
        }
        let prev = chain.last().unwrap();
        let mut next = apply_tilde_a_plus(&pm, prev)?;
        next.coeffs = poly::scale(&next.coeffs, 1.0 / gap);
        chain.push(next);
    }
    Ok(chain)
}

/// Quadrature norm of `Phi~_{l,m}` with the chain built internally.
pub fn deformed_norm_chain(params: &DeformedParams, l: f64, m: f64) -> Result<f64, TildeError> {
    let steps = (l - m).round();
    if steps < 0.0 || (l - m - steps).abs() > 1e-9 {
        return Err(TildeError::ChainLeavesM { m });
    }
    let chain = deformed_family(params, l, steps as u32)?;
    chain.last().unwrap().norm()
}

/// Pointwise residual of the deformed eigen-equation
/// `H~_m Phi~_{l,m} = lambda~_l Phi~_{l,m}` with `H~_m = H_m - delta kappa'`
/// evaluated through the differential-operator route.
pub fn eigen_residual(params: &DeformedParams, f: &DeformedFunction, s: f64) -> f64 {
    let fj = f.jet(s);
    let h = crate::hypfun::apply_h_jet(&params.case, f.m, fj, s).value();
    let kappa_p = params.case.sigma_prime_at(s) / (2.0 * params.case.sigma_at(s).sqrt());
    let lam_l = params.at(f.l).tilde_lambda();
    h - params.delta * kappa_p * fj.value() - lam_l * fj.value()
}

// --- serialization: explicit repr carrying the basis tag ---

#[derive(Serialize, Deserialize)]
struct DeformedFunctionRepr {
    case: CanonicalCase,
    l: f64,
    m: f64,
    delta: f64,
    basis: String,
    exp_param: f64,
    coeffs: Vec<f64>,
}

impl Serialize for DeformedFunction {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        DeformedFunctionRepr {
            case: self.case,
            l: self.l,
            m: self.m,
            delta: self.delta,
            basis: self.basis_tag().to_string(),
            exp_param: self.exp_param,
            coeffs: self.coeffs.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for DeformedFunction {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = DeformedFunctionRepr::deserialize(de)?;
        let f = DeformedFunction {
            case: repr.case,
            l: repr.l,
            m: repr.m,
            delta: repr.delta,
            coeffs: repr.coeffs,
            exp_param: repr.exp_param,
        };
        if f.basis_tag() != repr.basis {
            return Err(D::Error::custom(format!(
                "basis tag {} does not match case {}",
                repr.basis,
                f.case.sigma_tag().name()
            )));
        }
        Ok(f)
    }
}
