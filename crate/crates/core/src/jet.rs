//! Truncated Taylor series in one variable.
//!
//! A [`Jet`] of order `m` at a point `s` stores the normalized coefficients
//! `f(s), f'(s), f''(s)/2!, …, f⁽ᵐ⁾(s)/m!`. Sums and products of jets are
//! exact up to the truncation order, so composing polynomials through jets
//! yields derivatives of any order without expanding the composition.

use std::ops::{Add, Mul};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// The identity function expanded at `s`.
    pub fn variable(s: f64, order: usize) -> Self {
        let mut jet = Jet::constant(s, order);
        if order >= 1 {
            jet.coeffs[1] = 1.0;
        }
        jet
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// The `k`-th derivative, `k! · coeff[k]`.
    pub fn derivative(&self, k: usize) -> f64 {
        match self.coeffs.get(k) {
            Some(&c) => c * factorial(k),
            None => 0.0,
        }
    }

    pub fn scale(&self, factor: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Evaluates the polynomial `Σ poly[k] xᵏ` at this jet (Horner).
    pub fn compose_poly(&self, poly: &[f64]) -> Jet {
        let order = self.order();
        let mut acc = Jet::constant(0.0, order);
        for &c in poly.iter().rev() {
            acc = &(&acc * self) + c;
        }
        acc
    }
}

impl Add<&Jet> for &Jet {
    type Output = Jet;

    fn add(self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.coeffs.len(), rhs.coeffs.len());
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Add<f64> for &Jet {
    type Output = Jet;

    fn add(self, rhs: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += rhs;
        out
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;

    fn mul(self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.coeffs.len(), rhs.coeffs.len());
        let n = self.coeffs.len();
        let mut coeffs = vec![0.0; n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in rhs.coeffs[..n - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Jet { coeffs }
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}
