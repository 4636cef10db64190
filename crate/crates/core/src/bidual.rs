//! First-order dual numbers in two independent directions.
//!
//! A `BiDual` carries `v + dx·εx + dy·εy + dxy·εx εy` with `εx² = εy² = 0`.
//! Arithmetic on these propagates the mixed partial `∂²/∂x∂y` exactly, which
//! is how the assembled main terms take their `x`/`y` derivatives at zero
//! without numeric differentiation.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiDual {
    pub v: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxy: f64,
}

impl BiDual {
    #[inline]
    pub fn constant(v: f64) -> Self {
        BiDual {
            v,
            dx: 0.0,
            dy: 0.0,
            dxy: 0.0,
        }
    }

    /// The variable `x` seeded at 0.
    #[inline]
    pub fn var_x() -> Self {
        BiDual {
            v: 0.0,
            dx: 1.0,
            dy: 0.0,
            dxy: 0.0,
        }
    }

    /// The variable `y` seeded at 0.
    #[inline]
    pub fn var_y() -> Self {
        BiDual {
            v: 0.0,
            dx: 0.0,
            dy: 1.0,
            dxy: 0.0,
        }
    }

    #[inline]
    pub fn exp(self) -> Self {
        let e = self.v.exp();
        BiDual {
            v: e,
            dx: e * self.dx,
            dy: e * self.dy,
            dxy: e * (self.dxy + self.dx * self.dy),
        }
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        BiDual {
            v: self.v * s,
            dx: self.dx * s,
            dy: self.dy * s,
            dxy: self.dxy * s,
        }
    }
}

impl Add for BiDual {
    type Output = BiDual;
    #[inline]
    fn add(self, o: BiDual) -> BiDual {
        BiDual {
            v: self.v + o.v,
            dx: self.dx + o.dx,
            dy: self.dy + o.dy,
            dxy: self.dxy + o.dxy,
        }
    }
}

impl Sub for BiDual {
    type Output = BiDual;
    #[inline]
    fn sub(self, o: BiDual) -> BiDual {
        BiDual {
            v: self.v - o.v,
            dx: self.dx - o.dx,
            dy: self.dy - o.dy,
            dxy: self.dxy - o.dxy,
        }
    }
}

impl Neg for BiDual {
    type Output = BiDual;
    #[inline]
    fn neg(self) -> BiDual {
        self.scale(-1.0)
    }
}

impl Mul for BiDual {
    type Output = BiDual;
    #[inline]
    fn mul(self, o: BiDual) -> BiDual {
        BiDual {
            v: self.v * o.v,
            dx: self.dx * o.v + self.v * o.dx,
            dy: self.dy * o.v + self.v * o.dy,
            dxy: self.dxy * o.v + self.v * o.dxy + self.dx * o.dy + self.dy * o.dx,
        }
    }
}

impl Mul<f64> for BiDual {
    type Output = BiDual;
    #[inline]
    fn mul(self, s: f64) -> BiDual {
        self.scale(s)
    }
}

impl Add<f64> for BiDual {
    type Output = BiDual;
    #[inline]
    fn add(self, s: f64) -> BiDual {
        BiDual {
            v: self.v + s,
            ..self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_partial_of_product() {
        // f(x,y) = (2 + x)(3 + y) e^{x+2y}: d2f/dxdy at 0
        let x = BiDual::var_x();
        let y = BiDual::var_y();
        let f = (x + 2.0) * (y + 3.0) * (x + y * 2.0).exp();
        // by hand: f = (2+x)(3+y)e^{x+2y};
        // fx = (3+y)e^{..}(1 + (2+x)); fxy at 0:
        // d/dy[(3+y)(3+x... ] evaluate: e^{x+2y}[(3+y)(3+x)+... ] easier numerically
        let h = 1e-5;
        let g = |x: f64, y: f64| (2.0 + x) * (3.0 + y) * (x + 2.0 * y).exp();
        let fd = (g(h, h) - g(h, -h) - g(-h, h) + g(-h, -h)) / (4.0 * h * h);
        assert!((f.dxy - fd).abs() < 1e-5, "{} vs {}", f.dxy, fd);
        assert!((f.v - 6.0).abs() < 1e-12);
    }
}
