//! Real polynomials in the monomial basis, plus the constraint shapes the
//! mollifier and smoothing polynomials must satisfy.

use serde::{Deserialize, Serialize};

use crate::bidual::BiDual;
use crate::{Error, Result};

/// Dense polynomial `c_0 + c_1 x + ... + c_n x^n`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_bidual(&self, x: BiDual) -> BiDual {
        let mut acc = BiDual::constant(0.0);
        for &c in self.0.iter().rev() {
            acc = acc * x + BiDual::constant(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as f64 + 1.0) * c)
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![0.0; n];
        for (i, &c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly(out)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn degree(&self) -> usize {
        self.0
            .iter()
            .rposition(|&c| c != 0.0)
            .unwrap_or(0)
    }

    /// `x (1-x)^j`, the basis used for the leading mollifier polynomial.
    pub fn x_one_minus_x_pow(j: u32) -> Poly {
        let mut p = Poly(vec![0.0, 1.0]);
        let factor = Poly(vec![1.0, -1.0]);
        for _ in 0..j {
            p = p.mul(&factor);
        }
        p
    }

    /// `(1-2x)^j`, the basis enforcing the smoothing-polynomial symmetry.
    pub fn one_minus_2x_pow(j: u32) -> Poly {
        let mut p = Poly(vec![1.0]);
        let factor = Poly(vec![1.0, -2.0]);
        for _ in 0..j {
            p = p.mul(&factor);
        }
        p
    }
}

/// Constraint class of a mollifier/smoothing polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyConstraint {
    /// Leading piece: `P(0) = 0` and `P(1) = 1`.
    P0,
    /// Higher truncation pieces: `P(0) = 0`.
    Pk,
    /// Smoothing polynomial: `Q(0) = 1` and `Q'(x) = Q'(1-x)`.
    Q,
    Free,
}

/// A polynomial together with its declared constraint class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolySpec {
    pub coeffs: Vec<f64>,
    pub constraint: PolyConstraint,
}

impl PolySpec {
    pub fn poly(&self) -> Poly {
        Poly(self.coeffs.clone())
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let p = self.poly();
        match self.constraint {
            PolyConstraint::P0 => {
                if p.eval(0.0).abs() > tol {
                    return Err(Error::Config("P0 requires P(0) = 0".into()));
                }
                if (p.eval(1.0) - 1.0).abs() > tol {
                    return Err(Error::Config("P0 requires P(1) = 1".into()));
                }
            }
            PolyConstraint::Pk => {
                if p.eval(0.0).abs() > tol {
                    return Err(Error::Config("Pk requires P(0) = 0".into()));
                }
            }
            PolyConstraint::Q => {
                if (p.eval(0.0) - 1.0).abs() > tol {
                    return Err(Error::Config("Q requires Q(0) = 1".into()));
                }
                // Q'(x) = Q'(1-x) as a coefficient identity of Q(x) + Q(1-x)
                // being constant
                let d = p.derivative();
                for t in [0.1, 0.35, 0.71] {
                    if (d.eval(t) - d.eval(1.0 - t)).abs() > tol {
                        return Err(Error::Config("Q requires Q'(x) = Q'(1-x)".into()));
                    }
                }
            }
            PolyConstraint::Free => {}
        }
        Ok(())
    }
}

/// Smoothing polynomial in the structurally symmetric basis
/// `Q(x) = c0 + sum_j odd[j] (1-2x)^{2j+1}`, with `c0 + sum odd = 1`
/// equivalent to `Q(0) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QBasis {
    pub c0: f64,
    pub odd: Vec<f64>,
}

impl QBasis {
    pub fn to_poly(&self) -> Poly {
        let mut p = Poly(vec![self.c0]);
        for (j, &c) in self.odd.iter().enumerate() {
            p = p.add(&Poly::one_minus_2x_pow(2 * j as u32 + 1).scale(c));
        }
        p
    }

    /// Rebuild from free odd coefficients, pinning `Q(0) = 1`.
    pub fn from_free_odd(odd: Vec<f64>) -> QBasis {
        let c0 = 1.0 - odd.iter().sum::<f64>();
        QBasis { c0, odd }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivative() {
        let p = Poly(vec![1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 12.0);
        assert_eq!(p.derivative().0, vec![-2.0, 6.0]);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn q_basis_symmetry() {
        let q = QBasis::from_free_odd(vec![0.636851, -0.159327, 0.032011]);
        let p = q.to_poly();
        assert!((p.eval(0.0) - 1.0).abs() < 1e-12);
        let d = p.derivative();
        for t in [0.0, 0.2, 0.43, 0.5] {
            assert!((d.eval(t) - d.eval(1.0 - t)).abs() < 1e-12);
        }
        let spec = PolySpec {
            coeffs: p.0.clone(),
            constraint: PolyConstraint::Q,
        };
        spec.validate(1e-9).unwrap();
    }

    #[test]
    fn constraint_rejection() {
        let bad = PolySpec {
            coeffs: vec![0.5, 0.5],
            constraint: PolyConstraint::P0,
        };
        assert!(bad.validate(1e-9).is_err());
        let good = PolySpec {
            coeffs: vec![0.0, 1.0],
            constraint: PolyConstraint::P0,
        };
        good.validate(1e-9).unwrap();
    }
}
