//! Third-order jets: value plus first three derivatives, propagated exactly.
//!
//! All pointwise operator checks in this crate (eigen-residuals, shape
//! invariance, intertwining, Schrodinger reductions) need up to three exact
//! derivatives of products like `kappa^p(s) e^{c arcsin s} P(s)`. Carrying a
//! 3-jet through the closed-form building blocks avoids finite differencing
//! entirely.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// `[f, f', f'', f''']` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub d: [f64; 4],
}

impl Jet {
    pub fn constant(v: f64) -> Jet {
        Jet { d: [v, 0.0, 0.0, 0.0] }
    }

    /// The identity function evaluated at `s`.
    pub fn var(s: f64) -> Jet {
        Jet { d: [s, 1.0, 0.0, 0.0] }
    }

    pub fn value(&self) -> f64 {
        self.d[0]
    }

    pub fn d1(&self) -> f64 {
        self.d[1]
    }

    pub fn d2(&self) -> f64 {
        self.d[2]
    }

    pub fn d3(&self) -> f64 {
        self.d[3]
    }

    /// Composition `g(self)` from the derivatives of `g` at `self.value()`.
    pub fn compose(&self, g: [f64; 4]) -> Jet {
        let u1 = self.d[1];
        let u2 = self.d[2];
        let u3 = self.d[3];
        Jet {
            d: [
                g[0],
                g[1] * u1,
                g[2] * u1 * u1 + g[1] * u2,
                g[3] * u1 * u1 * u1 + 3.0 * g[2] * u1 * u2 + g[1] * u3,
            ],
        }
    }

    pub fn sqrt(&self) -> Jet {
        let v = self.d[0].sqrt();
        let g1 = 0.5 / v;
        let g2 = -0.25 / (v * self.d[0]);
        let g3 = 0.375 / (v * self.d[0] * self.d[0]);
        self.compose([v, g1, g2, g3])
    }

    pub fn exp(&self) -> Jet {
        let v = self.d[0].exp();
        self.compose([v, v, v, v])
    }

    pub fn ln(&self) -> Jet {
        let x = self.d[0];
        self.compose([x.ln(), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)])
    }

    /// Real power `self^p`.
    pub fn powf(&self, p: f64) -> Jet {
        if p == 0.0 {
            return Jet::constant(1.0);
        }
        let x = self.d[0];
        let v = x.powf(p);
        self.compose([
            v,
            p * x.powf(p - 1.0),
            p * (p - 1.0) * x.powf(p - 2.0),
            p * (p - 1.0) * (p - 2.0) * x.powf(p - 3.0),
        ])
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.d[0].sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.d[0].sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn sinh(&self) -> Jet {
        let (s, c) = (self.d[0].sinh(), self.d[0].cosh());
        self.compose([s, c, s, c])
    }

    pub fn cosh(&self) -> Jet {
        let (s, c) = (self.d[0].sinh(), self.d[0].cosh());
        self.compose([c, s, c, s])
    }

    pub fn asin(&self) -> Jet {
        let x = self.d[0];
        let w = 1.0 - x * x;
        let r = w.sqrt();
        // d/dx asin = (1-x^2)^(-1/2); higher ones by differentiating
        let g1 = 1.0 / r;
        let g2 = x / (w * r);
        let g3 = (1.0 + 2.0 * x * x) / (w * w * r);
        self.compose([x.asin(), g1, g2, g3])
    }

    pub fn atan(&self) -> Jet {
        let x = self.d[0];
        let w = 1.0 + x * x;
        let g1 = 1.0 / w;
        let g2 = -2.0 * x / (w * w);
        let g3 = (6.0 * x * x - 2.0) / (w * w * w);
        self.compose([x.atan(), g1, g2, g3])
    }

    /// `arcsinh(self) = ln(x + sqrt(x^2+1))`.
    pub fn asinh(&self) -> Jet {
        let x = self.d[0];
        let w = x * x + 1.0;
        let r = w.sqrt();
        let g1 = 1.0 / r;
        let g2 = -x / (w * r);
        let g3 = (2.0 * x * x - 1.0) / (w * w * r);
        self.compose([x.asinh(), g1, g2, g3])
    }

    /// `arccosh(self) = ln(x + sqrt(x^2-1))` for x > 1.
    pub fn acosh(&self) -> Jet {
        let x = self.d[0];
        let w = x * x - 1.0;
        let r = w.sqrt();
        let g1 = 1.0 / r;
        let g2 = -x / (w * r);
        let g3 = (2.0 * x * x + 1.0) / (w * w * r);
        self.compose([x.acosh(), g1, g2, g3])
    }

    pub fn scale(&self, k: f64) -> Jet {
        Jet {
            d: [k * self.d[0], k * self.d[1], k * self.d[2], k * self.d[3]],
        }
    }

    pub fn recip(&self) -> Jet {
        let x = self.d[0];
        self.compose([
            1.0 / x,
            -1.0 / (x * x),
            2.0 / (x * x * x),
            -6.0 / (x * x * x * x),
        ])
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            d: [
                self.d[0] + o.d[0],
                self.d[1] + o.d[1],
                self.d[2] + o.d[2],
                self.d[3] + o.d[3],
            ],
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            d: [
                self.d[0] - o.d[0],
                self.d[1] - o.d[1],
                self.d[2] - o.d[2],
                self.d[3] - o.d[3],
            ],
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let a = self.d;
        let b = o.d;
        // Leibniz with binomial weights 1,3,3,1 at order three
        Jet {
            d: [
                a[0] * b[0],
                a[1] * b[0] + a[0] * b[1],
                a[2] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[2],
                a[3] * b[0] + 3.0 * a[2] * b[1] + 3.0 * a[1] * b[2] + a[0] * b[3],
            ],
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

/// Jet of a polynomial (ascending coefficients) at `x`.
pub fn poly_jet(coeffs: &[f64], x: Jet) -> Jet {
    let mut acc = Jet::constant(0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * x + Jet::constant(c);
    }
    acc
}
