//! Registry of the canonical hypergeometric cases.
//!
//! Each case is one of the six canonical second-degree coefficients
//! `sigma(s)` together with `tau(s) = alpha s + beta`, the weight `rho(s)`
//! solving `(sigma rho)' = tau rho`, and the open interval `(a, b)` on which
//! `sigma > 0`, `rho > 0`. When `rho` is a pure power of `sigma` (equivalently
//! `tau = (k+1) sigma'`), the case additionally carries the exponent `k`,
//! which unlocks the delta-deformed operator families.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tags for the six canonical forms of `sigma(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaTag {
    One,
    S,
    OneMinusS2,
    S2MinusOne,
    S2,
    S2PlusOne,
}

impl SigmaTag {
    pub const ALL: [SigmaTag; 6] = [
        SigmaTag::One,
        SigmaTag::S,
        SigmaTag::OneMinusS2,
        SigmaTag::S2MinusOne,
        SigmaTag::S2,
        SigmaTag::S2PlusOne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SigmaTag::One => "one",
            SigmaTag::S => "s",
            SigmaTag::OneMinusS2 => "one_minus_s2",
            SigmaTag::S2MinusOne => "s2_minus_one",
            SigmaTag::S2 => "s2",
            SigmaTag::S2PlusOne => "s2_plus_one",
        }
    }

    pub fn parse(name: &str) -> Option<SigmaTag> {
        SigmaTag::ALL.iter().copied().find(|t| t.name() == name)
    }

    /// Coefficients `(c0, c1, c2)` of `sigma(s) = c0 + c1 s + c2 s^2`.
    pub fn sigma_coeffs(self) -> (f64, f64, f64) {
        match self {
            SigmaTag::One => (1.0, 0.0, 0.0),
            SigmaTag::S => (0.0, 1.0, 0.0),
            SigmaTag::OneMinusS2 => (1.0, 0.0, -1.0),
            SigmaTag::S2MinusOne => (-1.0, 0.0, 1.0),
            SigmaTag::S2 => (0.0, 0.0, 1.0),
            SigmaTag::S2PlusOne => (1.0, 0.0, 1.0),
        }
    }

    /// Value of `sigma''`, one of 0, -2, 2.
    pub fn sigma_dd(self) -> i32 {
        let (_, _, c2) = self.sigma_coeffs();
        (2.0 * c2) as i32
    }
}

/// One end of the natural interval `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Endpoint {
    NegInf,
    Finite(f64),
    PosInf,
}

impl Endpoint {
    pub fn is_finite(self) -> bool {
        matches!(self, Endpoint::Finite(_))
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Endpoint::NegInf => f64::NEG_INFINITY,
            Endpoint::Finite(x) => x,
            Endpoint::PosInf => f64::INFINITY,
        }
    }
}

/// Open interval with possibly infinite endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: Endpoint,
    pub b: Endpoint,
}

impl Interval {
    pub fn contains(&self, s: f64) -> bool {
        s.is_finite() && s > self.a.as_f64() && s < self.b.as_f64()
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CaseError {
    #[error("parameter out of range for sigma={sigma}: requires {constraint} (alpha={alpha}, beta={beta})")]
    ParameterOutOfRange {
        sigma: &'static str,
        constraint: &'static str,
        alpha: f64,
        beta: f64,
    },
    #[error("s={s} lies outside the interval ({a}, {b})")]
    OutsideInterval { s: f64, a: f64, b: f64 },
    #[error("weight is not a power of sigma for this case (tau != (k+1) sigma'); no deformed family")]
    NotPowerWeight,
}

/// One canonical case: `sigma` form plus the linear coefficient
/// `tau(s) = alpha s + beta`.
///
/// Construction validates the parameter constraints of the case row; the
/// checks are strict inequalities with no epsilon slack (the bounds are open,
/// boundary values are genuinely invalid). All derived data — interval,
/// `sigma''`, power exponent `k` — is a function of `(sigma, alpha, beta)`
/// and is recomputed on deserialization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalCase {
    sigma: SigmaTag,
    alpha: f64,
    beta: f64,
}

impl<'de> Deserialize<'de> for CanonicalCase {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            sigma: SigmaTag,
            alpha: f64,
            beta: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        CanonicalCase::new(raw.sigma, raw.alpha, raw.beta).map_err(serde::de::Error::custom)
    }
}

impl CanonicalCase {
    /// Builds a case, validating the `(alpha, beta)` constraint row.
    pub fn new(sigma: SigmaTag, alpha: f64, beta: f64) -> Result<Self, CaseError> {
        let fail = |constraint: &'static str| CaseError::ParameterOutOfRange {
            sigma: sigma.name(),
            constraint,
            alpha,
            beta,
        };
        match sigma {
            SigmaTag::One => {
                if !(alpha < 0.0) {
                    return Err(fail("alpha < 0"));
                }
            }
            SigmaTag::S => {
                // alpha = 0 is the power-weight row (tau = beta).
                if !(alpha <= 0.0) {
                    return Err(fail("alpha <= 0"));
                }
                if !(beta > 0.0) {
                    return Err(fail("beta > 0"));
                }
            }
            SigmaTag::OneMinusS2 => {
                if !(alpha < beta && beta < -alpha) {
                    return Err(fail("alpha < beta < -alpha"));
                }
            }
            SigmaTag::S2MinusOne | SigmaTag::S2 => {
                if !(alpha < 0.0) {
                    return Err(fail("alpha < 0"));
                }
                if !(beta >= 0.0) {
                    return Err(fail("beta >= 0"));
                }
            }
            SigmaTag::S2PlusOne => {
                if !(alpha < 0.0) {
                    return Err(fail("alpha < 0"));
                }
            }
        }
        Ok(CanonicalCase { sigma, alpha, beta })
    }

    pub fn sigma_tag(&self) -> SigmaTag {
        self.sigma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn interval(&self) -> Interval {
        use Endpoint::*;
        let (a, b) = match self.sigma {
            SigmaTag::One | SigmaTag::S2PlusOne => (NegInf, PosInf),
            SigmaTag::S | SigmaTag::S2 => (Finite(0.0), PosInf),
            SigmaTag::OneMinusS2 => (Finite(-1.0), Finite(1.0)),
            SigmaTag::S2MinusOne => (Finite(1.0), PosInf),
        };
        Interval { a, b }
    }

    /// `sigma''`, constant per case.
    pub fn sigma_dd(&self) -> i32 {
        self.sigma.sigma_dd()
    }

    /// Exponent `k` with `rho = sigma^k`, present iff `tau = (k+1) sigma'`
    /// holds identically: `alpha = 0` for `sigma = s`, `beta = 0` for the
    /// quadratic-sigma rows, never for `sigma = 1`.
    pub fn k_exponent(&self) -> Option<f64> {
        match self.sigma {
            SigmaTag::One => None,
            SigmaTag::S => (self.alpha == 0.0).then_some(self.beta - 1.0),
            SigmaTag::OneMinusS2 => (self.beta == 0.0).then_some(-self.alpha / 2.0 - 1.0),
            SigmaTag::S2MinusOne | SigmaTag::S2 | SigmaTag::S2PlusOne => {
                (self.beta == 0.0).then_some(self.alpha / 2.0 - 1.0)
            }
        }
    }

    pub fn sigma_at(&self, s: f64) -> f64 {
        let (c0, c1, c2) = self.sigma.sigma_coeffs();
        c0 + c1 * s + c2 * s * s
    }

    /// `sigma'(s)`.
    pub fn sigma_prime_at(&self, s: f64) -> f64 {
        let (_, c1, c2) = self.sigma.sigma_coeffs();
        c1 + 2.0 * c2 * s
    }

    pub fn tau_at(&self, s: f64) -> f64 {
        self.alpha * s + self.beta
    }

    /// Eigenvalue `lambda_l = -(sigma''/2) l (l-1) - tau' l` for integer `l`.
    pub fn lambda(&self, l: u32) -> f64 {
        self.lambda_real(l as f64)
    }

    /// The same eigenvalue formula extended to real index.
    pub fn lambda_real(&self, m: f64) -> f64 {
        let half_sdd = self.sigma_dd() as f64 / 2.0;
        -half_sdd * m * (m - 1.0) - self.alpha * m
    }

    /// Upper index bound: `lambda_l` increases strictly and `Phi_l sqrt(rho)`
    /// is square integrable for `l < Lambda`.
    pub fn capital_lambda(&self) -> f64 {
        match self.sigma_dd() {
            0 | -2 => f64::INFINITY,
            _ => (1.0 - self.alpha) / 2.0,
        }
    }

    /// Weight `rho(s)`; strictly positive on the interval.
    pub fn weight_at(&self, s: f64) -> Result<f64, CaseError> {
        self.check_inside(s)?;
        let iv = self.interval();
        let da = match iv.a {
            Endpoint::Finite(a) => s - a,
            _ => f64::NAN,
        };
        let db = match iv.b {
            Endpoint::Finite(b) => b - s,
            _ => f64::NAN,
        };
        Ok(self.weight_from_dist(s, da, db))
    }

    /// Weight evaluated from precomputed distances to finite endpoints.
    ///
    /// Quadrature rules supply `da = s - a` and `db = b - s` straight from
    /// their variable transform, which avoids cancellation when an exponent
    /// in `rho` is negative and `s` sits within rounding distance of an
    /// endpoint.
    pub(crate) fn weight_from_dist(&self, s: f64, da: f64, db: f64) -> f64 {
        let (alpha, beta) = (self.alpha, self.beta);
        match self.sigma {
            SigmaTag::One => (alpha * s * s / 2.0 + beta * s).exp(),
            SigmaTag::S => {
                // rho = s^(beta-1) e^(alpha s), da = s
                da.powf(beta - 1.0) * (alpha * s).exp()
            }
            SigmaTag::OneMinusS2 => {
                // rho = (1+s)^(-(alpha-beta)/2-1) (1-s)^(-(alpha+beta)/2-1)
                da.powf(-(alpha - beta) / 2.0 - 1.0) * db.powf(-(alpha + beta) / 2.0 - 1.0)
            }
            SigmaTag::S2MinusOne => {
                // rho = (s+1)^((alpha-beta)/2-1) (s-1)^((alpha+beta)/2-1)
                (s + 1.0).powf((alpha - beta) / 2.0 - 1.0)
                    * da.powf((alpha + beta) / 2.0 - 1.0)
            }
            SigmaTag::S2 => da.powf(alpha - 2.0) * (-beta / s).exp(),
            SigmaTag::S2PlusOne => {
                (1.0 + s * s).powf(alpha / 2.0 - 1.0) * (beta * s.atan()).exp()
            }
        }
    }

    /// `kappa(s) = sqrt(sigma(s))`.
    pub fn kappa_at(&self, s: f64) -> Result<f64, CaseError> {
        self.check_inside(s)?;
        Ok(self.sigma_at(s).sqrt())
    }

    /// `kappa'(s) = sigma'(s) / (2 kappa(s))`.
    pub fn kappa_prime_at(&self, s: f64) -> Result<f64, CaseError> {
        self.check_inside(s)?;
        Ok(self.sigma_prime_at(s) / (2.0 * self.sigma_at(s).sqrt()))
    }

    fn check_inside(&self, s: f64) -> Result<(), CaseError> {
        let iv = self.interval();
        if iv.contains(s) {
            Ok(())
        } else {
            Err(CaseError::OutsideInterval {
                s,
                a: iv.a.as_f64(),
                b: iv.b.as_f64(),
            })
        }
    }

    /// The admissible set of base indices `m` for the delta-deformed family:
    /// where the deformed eigenvalue is increasing in `m` and the deformed
    /// ground function is square integrable against `rho`.
    ///
    /// Requires the power weight (`k_exponent` present). The `sigma = s^2 - 1`
    /// row has a two-component branch for `delta` in `(0, 1/2)`.
    pub fn m_set(&self, delta: f64) -> Result<MSet, CaseError> {
        if self.k_exponent().is_none() {
            return Err(CaseError::NotPowerWeight);
        }
        let alpha = self.alpha;
        let beta = self.beta;
        let intervals: Vec<(f64, f64)> = match self.sigma {
            SigmaTag::One => unreachable!("sigma=1 has no power weight"),
            SigmaTag::S => {
                if delta > 0.0 {
                    vec![(0.5 - beta, f64::INFINITY)]
                } else {
                    vec![]
                }
            }
            SigmaTag::OneMinusS2 => vec![((1.0 + alpha) / 2.0, f64::INFINITY)],
            SigmaTag::S2MinusOne => {
                let lo = -alpha / 2.0;
                let mid = (1.0 - alpha) / 2.0;
                if delta <= -0.5 {
                    vec![]
                } else if delta <= 0.0 {
                    vec![(lo, mid - (-delta / 2.0).sqrt())]
                } else if delta < 0.5 {
                    vec![
                        (lo, mid - (delta / 2.0).sqrt()),
                        (mid, mid + (delta / 2.0).sqrt()),
                    ]
                } else {
                    vec![(mid, mid + (delta / 2.0).sqrt())]
                }
            }
            SigmaTag::S2 => vec![],
            SigmaTag::S2PlusOne => {
                vec![(f64::NEG_INFINITY, (1.0 - alpha) / 2.0 - (delta.abs() / 2.0).sqrt())]
            }
        };
        debug_assert!(intervals.iter().all(|&(a, b)| a < b));
        Ok(MSet { intervals })
    }
}

/// The admissible-parameter set for a deformed family: a union of disjoint
/// open intervals, possibly empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MSet {
    pub intervals: Vec<(f64, f64)>,
}

impl MSet {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, m: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| m > a && m < b)
    }

    /// The component containing `m`, if any.
    pub fn component_of(&self, m: f64) -> Option<(f64, f64)> {
        self.intervals.iter().copied().find(|&(a, b)| m > a && m < b)
    }
}
