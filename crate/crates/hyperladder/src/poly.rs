//! Dense univariate polynomials with `f64` coefficients, ascending order.
//!
//! Just enough arithmetic for the coefficient-level ladder algebra: the
//! leading coefficient is kept nonzero (the zero polynomial is the empty
//! vector).

/// Coefficients `c[0] + c[1] s + c[2] s^2 + ...`.
pub type Poly = Vec<f64>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0.0) {
        p.pop();
    }
    p
}

/// Trim trailing coefficients that are rounding residue relative to the
/// vector's own scale.
pub fn trim_eps(mut p: Poly, rel: f64) -> Poly {
    let scale = max_abs(&p);
    while p.last().is_some_and(|c| c.abs() <= rel * scale) {
        p.pop();
    }
    p
}

pub fn degree(p: &[f64]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn eval(p: &[f64], s: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * s + c)
}

pub fn derivative(p: &[f64]) -> Poly {
    if p.len() <= 1 {
        return Vec::new();
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![0.0; n];
    for (i, &c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

pub fn scale(p: &[f64], k: f64) -> Poly {
    trim(p.iter().map(|&c| k * c).collect())
}

/// Multiply by `c0 + c1 s + c2 s^2`.
pub fn mul_quadratic(p: &[f64], c0: f64, c1: f64, c2: f64) -> Poly {
    if p.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; p.len() + 2];
    for (i, &c) in p.iter().enumerate() {
        out[i] += c0 * c;
        out[i + 1] += c1 * c;
        out[i + 2] += c2 * c;
    }
    trim(out)
}

/// Largest absolute coefficient (0 for the zero polynomial).
pub fn max_abs(p: &[f64]) -> f64 {
    p.iter().fold(0.0f64, |m, &c| m.max(c.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let p = vec![-0.5, 0.0, 1.0]; // s^2 - 1/2
        assert_eq!(eval(&p, 2.0), 3.5);
        assert_eq!(derivative(&p), vec![0.0, 2.0]);
        assert_eq!(degree(&p), Some(2));
        assert_eq!(add(&p, &[0.5]), vec![0.0, 0.0, 1.0]);
        assert_eq!(trim(vec![1.0, 0.0, 0.0]), vec![1.0]);
        assert_eq!(mul_quadratic(&[1.0, 1.0], 0.0, 0.0, 1.0), vec![0.0, 0.0, 1.0, 1.0]);
        assert!(derivative(&[3.0]).is_empty());
    }
}
