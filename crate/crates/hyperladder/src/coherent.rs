//! Gazeau-Klauder coherent states for the plain and deformed families.
//!
//! A family is the orthonormal ladder `|n> = phi_{m+n,m}` with energies
//! `e_n = lambda_{m+n} - lambda_m` (tilde versions for the deformed case)
//! and moment sequence `rho_n = e_1 e_2 ... e_n`, stored through closed
//! Gamma-product formulas. States are
//!
//! ```text
//! |J, gamma> = N(J)^{-1} sum_n J^{n/2} rho_n^{-1/2} e^{-i e_n gamma} |n>
//! ```
//!
//! and the resolution of identity reduces, after the Bohr-type average over
//! `gamma` annihilates cross terms (the energies are strictly increasing),
//! to the diagonal moment identities `int J^n rho(J) dJ = rho_n` for a
//! radial density `rho(J)`: a Gamma-type exponential, a Bessel-K kernel, an
//! oscillatory Bessel-J kernel, or a Meijer-G kernel for the deformed
//! families. Those identities are what `verify_moments` checks by
//! quadrature. The densities are not all positive; signed moments are
//! verified and positivity is left unclassified.

use crate::cases::{CanonicalCase, CaseError, SigmaTag};
use crate::quadrature::{self, QuadError};
use crate::specmath::{
    self, bessel_j, bessel_k, pochhammer, pochhammer_abs2, SpecMathError,
};
use crate::specmath::{MeijerG2440Params, MellinBarnesContour};
use crate::tilde::{DeformedParams, TildeError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CoherentError {
    #[error("level n={n} is not below the family cap {cap}")]
    IndexBeyondCap { n: u32, cap: f64 },
    #[error("J={j} is outside the convergence domain (requires J < {limit})")]
    OutOfConvergenceDomain { j: f64, limit: f64 },
    #[error("states belong to different families")]
    FamilyMismatch,
    #[error("measure kind does not match this family")]
    SpecMismatch,
    #[error("energy sequence is not strictly increasing below the cap")]
    EnergiesNotIncreasing,
    #[error(transparent)]
    Case(#[from] CaseError),
    #[error(transparent)]
    Tilde(#[from] TildeError),
    #[error(transparent)]
    SpecMath(#[from] SpecMathError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

pub const DEFAULT_N_MAX: u32 = 64;

/// One ladder family with its energy and moment sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentFamily {
    pub case: CanonicalCase,
    /// Base index; integer for plain families, real inside the admissible
    /// set for deformed ones.
    pub m: f64,
    /// Deformation parameter when this is a deformed family.
    pub delta: Option<f64>,
    pub n_max: u32,
    pub e: Vec<f64>,
    pub rho: Vec<f64>,
    /// JSON represents an infinite cap as null.
    #[serde(
        serialize_with = "serialize_cap",
        deserialize_with = "deserialize_cap"
    )]
    pub lambda_cap: f64,
    /// For two-component admissible sets: the component whose supremum
    /// defines the cap.
    #[serde(with = "cap_component")]
    pub lambda_cap_component: Option<(f64, f64)>,
}

/// Infinite interval bounds travel as null in JSON.
mod cap_component {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        v: &Option<(f64, f64)>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        v.map(|(a, b)| {
            (
                a.is_finite().then_some(a),
                b.is_finite().then_some(b),
            )
        })
        .serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<Option<(f64, f64)>, D::Error> {
        let raw = Option::<(Option<f64>, Option<f64>)>::deserialize(de)?;
        Ok(raw.map(|(a, b)| {
            (
                a.unwrap_or(f64::NEG_INFINITY),
                b.unwrap_or(f64::INFINITY),
            )
        }))
    }
}

impl CoherentFamily {
    /// Plain family `|n> = phi_{m+n,m}` below `Lambda_m = Lambda - m`.
    pub fn plain(case: CanonicalCase, m: u32, n_max: u32) -> Result<Self, CoherentError> {
        let cap = case.capital_lambda() - m as f64;
        if cap <= 0.0 {
            return Err(CoherentError::IndexBeyondCap { n: 0, cap });
        }
        let alpha = case.alpha();
        let mf = m as f64;
        let n_max = clamp_to_cap(n_max, cap);
        let e: Vec<f64> = (0..=n_max)
            .map(|n| {
                let nf = n as f64;
                match case.sigma_dd() {
                    0 => -alpha * nf,
                    -2 => nf * (nf + 2.0 * mf - alpha - 1.0),
                    _ => nf * (1.0 - alpha - 2.0 * mf - nf),
                }
            })
            .collect();
        let rho: Vec<f64> = (0..=n_max)
            .map(|n| {
                let nf = n as f64;
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                match case.sigma_dd() {
                    0 => (-alpha).powf(nf) * fact,
                    -2 => fact * pochhammer(2.0 * mf - alpha, n),
                    _ => {
                        // Gamma(x) / Gamma(x - n) = (x-n)(x-n+1)...(x-1)
                        let x = 1.0 - alpha - 2.0 * mf;
                        fact * (1..=n).map(|k| x - k as f64).product::<f64>()
                    }
                }
            })
            .collect();
        let fam = CoherentFamily {
            case,
            m: mf,
            delta: None,
            n_max,
            e,
            rho,
            lambda_cap: cap,
            lambda_cap_component: None,
        };
        fam.validate()
    }

    /// Deformed family `|n~> = phi~_{m+n,m}` for `m` in the admissible set.
    pub fn deformed(
        case: CanonicalCase,
        delta: f64,
        m: f64,
        n_max: u32,
    ) -> Result<Self, CoherentError> {
        let params = DeformedParams::new(case, delta, m)?;
        let mset = case.m_set(delta)?;
        let component = mset
            .component_of(m)
            .ok_or(TildeError::NotInM { m, delta })?;
        let cap = match case.sigma_tag() {
            SigmaTag::S | SigmaTag::OneMinusS2 => f64::INFINITY,
            // cap from the supremum of the component containing m
            _ => component.1 - m,
        };
        let n_max = clamp_to_cap(n_max, cap);
        let alpha = case.alpha();
        let beta = case.beta();
        let e: Vec<f64> = (0..=n_max)
            .map(|n| {
                let nf = n as f64;
                match case.sigma_tag() {
                    SigmaTag::S => {
                        let bm = 2.0 * m + 2.0 * beta - 1.0;
                        (delta * delta / (bm * bm)) * nf * (nf + bm)
                            / ((nf + bm / 2.0) * (nf + bm / 2.0))
                    }
                    SigmaTag::OneMinusS2 => {
                        let am = (1.0 + alpha) / 2.0 - m;
                        let d2 = delta / (2.0 * am);
                        nf * (nf - 2.0 * am) * ((nf - am) * (nf - am) + d2 * d2)
                            / ((nf - am) * (nf - am))
                    }
                    _ => {
                        let am = (1.0 - alpha) / 2.0 - m;
                        let d2 = delta / (2.0 * am);
                        -nf * (nf - 2.0 * am) * ((nf - am) * (nf - am) - d2 * d2)
                            / ((nf - am) * (nf - am))
                    }
                }
            })
            .collect();
        let rho: Vec<f64> = (0..=n_max)
            .map(|n| {
                let nf = n as f64;
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                match case.sigma_tag() {
                    SigmaTag::S => {
                        let bm = 2.0 * m + 2.0 * beta - 1.0;
                        (delta * delta / (bm * bm)).powf(nf) * fact * pochhammer(bm + 1.0, n)
                            / pochhammer(bm / 2.0 + 1.0, n).powi(2)
                    }
                    SigmaTag::OneMinusS2 => {
                        let am = (1.0 + alpha) / 2.0 - m;
                        let d2 = delta / (2.0 * am);
                        fact * pochhammer(1.0 - 2.0 * am, n)
                            * pochhammer_abs2(1.0 - am, d2, n)
                            / pochhammer(1.0 - am, n).powi(2)
                    }
                    _ => {
                        let am = (1.0 - alpha) / 2.0 - m;
                        let d2 = delta / (2.0 * am);
                        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                        sign * fact
                            * pochhammer(1.0 - 2.0 * am, n)
                            * pochhammer(1.0 - am - d2, n)
                            * pochhammer(1.0 - am + d2, n)
                            / pochhammer(1.0 - am, n).powi(2)
                    }
                }
            })
            .collect();
        // cross-check the closed forms against lambda~ differences
        for n in 0..=n_max.min(8) {
            let expect = params.tilde_lambda_at(m + n as f64) - params.tilde_lambda_at(m);
            let got = e[n as usize];
            debug_assert!(
                (got - expect).abs() <= 1e-9 * (1.0 + expect.abs()),
                "e~_{n} mismatch: {got} vs {expect}"
            );
        }
        let fam = CoherentFamily {
            case,
            m,
            delta: Some(delta),
            n_max,
            e,
            rho,
            lambda_cap: cap,
            lambda_cap_component: Some(component),
        };
        fam.validate()
    }

    fn validate(self) -> Result<Self, CoherentError> {
        if self.e[0] != 0.0 || self.rho[0] != 1.0 {
            return Err(CoherentError::EnergiesNotIncreasing);
        }
        for n in 1..=self.n_max as usize {
            if (n as f64) < self.lambda_cap && self.e[n] <= self.e[n - 1] {
                return Err(CoherentError::EnergiesNotIncreasing);
            }
        }
        Ok(self)
    }

    pub fn is_deformed(&self) -> bool {
        self.delta.is_some()
    }

    /// Energy level `e_n` (or `e~_n`).
    pub fn energy(&self, n: u32) -> Result<f64, CoherentError> {
        if (n as f64) >= self.lambda_cap || n > self.n_max {
            return Err(CoherentError::IndexBeyondCap {
                n,
                cap: self.lambda_cap.min(self.n_max as f64 + 1.0),
            });
        }
        Ok(self.e[n as usize])
    }

    /// The whole moment vector `rho_0..rho_{n_max}`.
    pub fn moments(&self) -> &[f64] {
        &self.rho
    }

    /// Convergence bound on `J`: finite only for the deformed `sigma = s`
    /// family, where `e~_n` accumulates at `delta^2 / beta_m^2`.
    pub fn j_limit(&self) -> f64 {
        match (self.case.sigma_tag(), self.delta) {
            (SigmaTag::S, Some(delta)) => {
                let bm = 2.0 * self.m + 2.0 * self.case.beta() - 1.0;
                delta * delta / (bm * bm)
            }
            _ => f64::INFINITY,
        }
    }

    /// `N(J) = sqrt(sum_n J^n / rho_n)` by direct summation.
    pub fn normalizer(&self, j: f64) -> Result<f64, CoherentError> {
        Ok(self.normalizer_sq(j)?.sqrt())
    }

    pub fn normalizer_sq(&self, j: f64) -> Result<f64, CoherentError> {
        if !(j >= 0.0) || j >= self.j_limit() {
            return Err(CoherentError::OutOfConvergenceDomain {
                j,
                limit: self.j_limit(),
            });
        }
        let mut sum = 0.0;
        let mut jp = 1.0;
        for n in 0..=self.n_max as usize {
            sum += jp / self.rho[n];
            jp *= j;
        }
        Ok(sum)
    }

    /// Geometric estimate of the truncation tail `sum_{n > n_max} J^n/rho_n`.
    pub fn tail_bound(&self, j: f64) -> f64 {
        let n = self.n_max as usize;
        if n < 1 || !self.lambda_cap.is_infinite() {
            return 0.0;
        }
        let t_last = j.powi(n as i32) / self.rho[n];
        let r = (j * self.rho[n - 1] / self.rho[n]).abs();
        if r < 1.0 {
            (t_last * r / (1.0 - r)).abs()
        } else {
            f64::INFINITY
        }
    }

    pub fn state(&self, j: f64, gamma: f64) -> Result<CoherentState, CoherentError> {
        let nsq = self.normalizer_sq(j)?;
        let inv_n = 1.0 / nsq.sqrt();
        let coeffs: Vec<Complex64> = (0..=self.n_max as usize)
            .map(|n| {
                let mag = inv_n * j.powf(n as f64 / 2.0) / self.rho[n].sqrt();
                Complex64::from_polar(mag, -self.e[n] * gamma)
            })
            .collect();
        Ok(CoherentState {
            family: self.clone(),
            j,
            gamma,
            coeffs,
        })
    }
}

fn serialize_cap<S: serde::Serializer>(cap: &f64, ser: S) -> Result<S::Ok, S::Error> {
    if cap.is_finite() {
        ser.serialize_some(cap)
    } else {
        ser.serialize_none()
    }
}

fn deserialize_cap<'de, D: serde::Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(de)?.unwrap_or(f64::INFINITY))
}

fn clamp_to_cap(n_max: u32, cap: f64) -> u32 {
    if cap.is_finite() {
        let top = if cap.fract() == 0.0 { cap - 1.0 } else { cap.floor() };
        n_max.min(top.max(0.0) as u32)
    } else {
        n_max
    }
}

/// A single coherent state `|J, gamma>` in its family's ladder basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    pub family: CoherentFamily,
    pub j: f64,
    pub gamma: f64,
    pub coeffs: Vec<Complex64>,
}

impl CoherentState {
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Expectation of the shifted Hamiltonian, `sum e_n |c_n|^2`; equals `J`
    /// for the infinite plain families up to the truncation tail.
    pub fn action_expectation(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(&self.family.e)
            .map(|(c, e)| e * c.norm_sqr())
            .sum()
    }
}

/// `<s1 | s2> = sum conj(c1_n) c2_n`, requires the same family.
pub fn overlap(s1: &CoherentState, s2: &CoherentState) -> Result<Complex64, CoherentError> {
    if s1.family != s2.family {
        return Err(CoherentError::FamilyMismatch);
    }
    Ok(s1
        .coeffs
        .iter()
        .zip(&s2.coeffs)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Which radial density `rho(J)` resolves the identity for a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    GammaExp,
    BesselK,
    BesselJ,
    MeijerG,
}

/// The measure data for one family: `k(J) = N(J)^2 rho(J)` with `rho` as
/// tabulated per case class.
pub struct MeasureSpec {
    pub kind: MeasureKind,
    case: CanonicalCase,
    m: f64,
    /// Log-magnitude and sign of the Gamma prefactor (Meijer-G kind).
    log_pref: f64,
    sign_pref: f64,
    contour: Option<MellinBarnesContour>,
    /// Smallest real part among the Meijer `b` parameters; controls
    /// integrability of the density at `J = 0`.
    b_min: f64,
}

impl MeasureSpec {
    /// Selects the measure matching the family's case class and deformation
    /// flag. The deformed `sigma = s` family has no tabulated measure.
    pub fn for_family(family: &CoherentFamily) -> Result<Self, CoherentError> {
        let case = family.case;
        let m = family.m;
        match family.delta {
            None => {
                let kind = match case.sigma_dd() {
                    0 => MeasureKind::GammaExp,
                    -2 => MeasureKind::BesselK,
                    _ => MeasureKind::BesselJ,
                };
                Ok(MeasureSpec {
                    kind,
                    case,
                    m,
                    log_pref: 0.0,
                    sign_pref: 1.0,
                    contour: None,
                    b_min: 0.0,
                })
            }
            Some(delta) => {
                let (a_m, complex_pair) = match case.sigma_tag() {
                    SigmaTag::OneMinusS2 => (((1.0 + case.alpha()) / 2.0) - m, true),
                    SigmaTag::S2MinusOne | SigmaTag::S2PlusOne => {
                        (((1.0 - case.alpha()) / 2.0) - m, false)
                    }
                    _ => return Err(CoherentError::SpecMismatch),
                };
                let d2 = delta / (2.0 * a_m);
                let (log_pref, sign_pref, b) = if complex_pair {
                    let g1 = specmath::log_gamma(Complex64::new(1.0 - a_m, 0.0))?.re;
                    let g2 = specmath::log_gamma(Complex64::new(1.0 - 2.0 * a_m, 0.0))?.re;
                    let gc = specmath::log_gamma(Complex64::new(1.0 - a_m, d2))?.re;
                    (
                        2.0 * g1 - g2 - 2.0 * gc,
                        1.0,
                        [
                            Complex64::new(0.0, 0.0),
                            Complex64::new(-2.0 * a_m, 0.0),
                            Complex64::new(-a_m, -d2),
                            Complex64::new(-a_m, d2),
                        ],
                    )
                } else {
                    let (g1, s1) = specmath::log_abs_gamma_sign(1.0 - a_m)?;
                    let (g2, s2) = specmath::log_abs_gamma_sign(1.0 - 2.0 * a_m)?;
                    let (g3, s3) = specmath::log_abs_gamma_sign(1.0 - a_m - d2)?;
                    let (g4, s4) = specmath::log_abs_gamma_sign(1.0 - a_m + d2)?;
                    (
                        2.0 * g1 - g2 - g3 - g4,
                        s1 * s1 * s2 * s3 * s4,
                        [
                            Complex64::new(0.0, 0.0),
                            Complex64::new(-2.0 * a_m, 0.0),
                            Complex64::new(-a_m - d2, 0.0),
                            Complex64::new(-a_m + d2, 0.0),
                        ],
                    )
                };
                let params = MeijerG2440Params::new([-a_m, -a_m], b)?;
                let b_min = b.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
                Ok(MeasureSpec {
                    kind: MeasureKind::MeijerG,
                    case,
                    m,
                    log_pref,
                    sign_pref,
                    contour: Some(params.contour()?),
                    b_min,
                })
            }
        }
    }

    fn check_family(&self, family: &CoherentFamily) -> Result<(), CoherentError> {
        let matches = family.case == self.case
            && family.m == self.m
            && (family.is_deformed() == (self.kind == MeasureKind::MeijerG));
        if matches {
            Ok(())
        } else {
            Err(CoherentError::SpecMismatch)
        }
    }

    /// Radial density `rho(J)` whose power moments are the family moments.
    pub fn rho_density(&self, j: f64) -> Result<f64, CoherentError> {
        if !(j > 0.0) {
            return Err(CoherentError::SpecMath(SpecMathError::NonpositiveArgument));
        }
        let alpha = self.case.alpha();
        let m = self.m;
        match self.kind {
            MeasureKind::GammaExp => Ok(-(1.0 / alpha) * (j / alpha).exp()),
            MeasureKind::BesselK => {
                // kernel with Mellin moments n! Gamma(n + 2m - alpha): the
                // function whose transform is Gamma(s) Gamma(s + 2m-alpha-1)
                // is 2 x^{(2m-alpha-1)/2} K_{2m-alpha-1}(2 sqrt x)
                let order = 2.0 * m - alpha - 1.0;
                let g = specmath::gamma_real(2.0 * m - alpha)?;
                Ok((2.0 / g)
                    * j.powf(m - (1.0 + alpha) / 2.0)
                    * bessel_k(order, 2.0 * j.sqrt())?)
            }
            MeasureKind::BesselJ => {
                let order = 1.0 - alpha - 2.0 * m;
                let g = specmath::gamma_real(order)?;
                Ok(g * j.powf(m - (1.0 - alpha) / 2.0) * bessel_j(order, 2.0 * j.sqrt())?)
            }
            MeasureKind::MeijerG => {
                let contour = self.contour.as_ref().expect("meijer kind carries contour");
                let g = contour.eval(j)?;
                Ok(self.sign_pref * self.log_pref.exp() * g)
            }
        }
    }

    /// `k(J) = N(J)^2 rho(J)`; for the Bessel-K class the tabulated display
    /// is the full `k(J)` itself.
    pub fn measure_k(&self, family: &CoherentFamily, j: f64) -> Result<f64, CoherentError> {
        self.check_family(family)?;
        let rho = self.rho_density(j)?;
        match self.kind {
            MeasureKind::BesselK => Ok(rho),
            _ => Ok(family.normalizer_sq(j)? * rho),
        }
    }

    /// Quadrature of `int_0^inf J^n rho(J) dJ` for `n = 0..=n_check`,
    /// compared against the family moments.
    pub fn verify_moments(
        &self,
        family: &CoherentFamily,
        n_check: u32,
    ) -> Result<MomentReport, CoherentError> {
        self.check_family(family)?;
        if (n_check as f64) >= family.lambda_cap || n_check > family.n_max {
            return Err(CoherentError::IndexBeyondCap {
                n: n_check,
                cap: family.lambda_cap.min(family.n_max as f64 + 1.0),
            });
        }
        // Meijer-G low-order moments only converge when every pole sits
        // right of -1; otherwise the identity holds by analytic continuation
        // and a numerical quadrature would be meaningless
        if self.kind == MeasureKind::MeijerG && self.b_min <= -1.0 {
            return Err(CoherentError::SpecMismatch);
        }
        let mut rows = Vec::new();
        for n in 0..=n_check {
            let quad = self.moment_quadrature(n)?;
            let expected = family.rho[n as usize];
            let rel_err = (quad - expected).abs() / expected.abs().max(1e-300);
            rows.push(MomentRow {
                n,
                moment_quadrature: quad,
                rho_n: expected,
                rel_err,
            });
        }
        Ok(MomentReport {
            family: family.clone(),
            kind: self.kind,
            rows,
        })
    }

    fn moment_quadrature(&self, n: u32) -> Result<f64, CoherentError> {
        let ni = n as i32;
        let value = match self.kind {
            MeasureKind::GammaExp | MeasureKind::BesselK => {
                quadrature::half_line_integral(
                    |j| j.powi(ni) * self.rho_density(j).unwrap_or(0.0),
                    1e-11,
                    false,
                )?
                .value
            }
            MeasureKind::BesselJ => {
                quadrature::half_line_integral(
                    |j| j.powi(ni) * self.rho_density(j).unwrap_or(0.0),
                    1e-7,
                    true,
                )?
                .value
            }
            MeasureKind::MeijerG => {
                // window: bounded density near 0 (b_min > -1 checked by the
                // caller), exponentially flushed past 1e4
                let window = crate::cases::Interval {
                    a: crate::cases::Endpoint::Finite(1e-8),
                    b: crate::cases::Endpoint::Finite(1e4),
                };
                quadrature::integral(
                    window,
                    |j| j.powi(ni) * self.rho_density(j).unwrap_or(f64::NAN),
                    1e-8,
                )?
                .value
            }
        };
        Ok(value)
    }
}

/// One verified moment row, serialized for CLI reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentRow {
    pub n: u32,
    pub moment_quadrature: f64,
    pub rho_n: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentReport {
    pub family: CoherentFamily,
    pub kind: MeasureKind,
    pub rows: Vec<MomentRow>,
}
