//! Generalized hypergeometric series `pFq` with real parameters or complex
//! conjugate pairs.
//!
//! A conjugate pair counts as two parameters and contributes the real factor
//! `(x+n)^2 + y^2` to the term recurrence, so the whole computation runs in
//! real arithmetic and the result carries an imaginary part of exactly zero.

use super::SpecMathError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PfqParam {
    Real(f64),
    /// The pair `x + iy`, `x - iy`.
    ConjugatePair { re: f64, im: f64 },
}

impl PfqParam {
    fn count(&self) -> usize {
        match self {
            PfqParam::Real(_) => 1,
            PfqParam::ConjugatePair { .. } => 2,
        }
    }

    /// Multiplier contributed at term index `n`.
    fn factor(&self, n: f64) -> f64 {
        match *self {
            PfqParam::Real(a) => a + n,
            PfqParam::ConjugatePair { re, im } => {
                let r = re + n;
                r * r + im * im
            }
        }
    }

    /// Whether this parameter terminates the series at some `n >= 0`.
    fn terminates_at(&self) -> Option<u64> {
        match *self {
            PfqParam::Real(a) if a <= 0.0 && a.fract() == 0.0 => Some((-a) as u64),
            _ => None,
        }
    }
}

/// Sum of `prod (a_i)_n / prod (b_j)_n * z^n / n!`.
///
/// Terminates when a numerator parameter is a nonpositive integer; otherwise
/// partial sums run until the term drops below `1e-16 |sum|`.
pub fn pfq(numer: &[PfqParam], denom: &[PfqParam], z: f64) -> Result<f64, SpecMathError> {
    let p: usize = numer.iter().map(PfqParam::count).sum();
    let q: usize = denom.iter().map(PfqParam::count).sum();
    let term_bound = numer.iter().filter_map(PfqParam::terminates_at).min();

    if term_bound.is_none() {
        if p > q + 1 && z != 0.0 {
            return Err(SpecMathError::DivergentSeries);
        }
        if p == q + 1 && z.abs() >= 1.0 {
            return Err(SpecMathError::DivergentSeries);
        }
    }
    // a denominator pole before termination makes the sum undefined
    if let Some(dmin) = denom.iter().filter_map(PfqParam::terminates_at).min() {
        if term_bound.map_or(true, |t| t > dmin) {
            return Err(SpecMathError::DivergentSeries);
        }
    }

    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let max_n = term_bound.unwrap_or(100_000);
    for n in 0..max_n.max(1) {
        let nf = n as f64;
        let mut ratio = z / (nf + 1.0);
        for a in numer {
            ratio *= a.factor(nf);
        }
        for b in denom {
            ratio /= b.factor(nf);
        }
        term *= ratio;
        sum += term;
        if term == 0.0 || term.abs() < 1e-16 * sum.abs() {
            break;
        }
        if n + 1 == max_n {
            break;
        }
    }
    Ok(sum)
}
