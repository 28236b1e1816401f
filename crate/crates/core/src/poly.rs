//! Dense polynomials with exact rational coefficients.
//!
//! These back the radial Zernike polynomials: construction, derivatives and
//! weighted integrals stay in exact arithmetic, and only a final conversion
//! to `f64` rounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Polynomial `Σ coeffs[p] · r^p` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    /// Builds a polynomial from dense coefficients; trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `r^p` (zero beyond the stored degree).
    pub fn coeff(&self, p: usize) -> BigRational {
        self.coeffs.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Exact termwise derivative.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(p, c)| c * BigRational::from_integer(BigInt::from(p)))
            .collect();
        Self::new(coeffs)
    }

    /// Exact product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|p| self.coeff(p) - other.coeff(p)).collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, r: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c;
        }
        acc
    }

    /// Evaluates exactly at the binary rational represented by `r`, rounding
    /// to `f64` only at the end.
    pub fn eval(&self, r: f64) -> f64 {
        let rq = BigRational::from_float(r).expect("finite radius");
        rational_to_f64(&self.eval_exact(&rq))
    }

    /// Plain `f64` Horner evaluation; cheap, adequate away from tight
    /// cancellation regimes.
    pub fn eval_f64(&self, coeffs_f64: &[f64], r: f64) -> f64 {
        debug_assert_eq!(coeffs_f64.len(), self.coeffs.len());
        horner(coeffs_f64, r)
    }

    /// Coefficients rounded to `f64`, for cached fast evaluation.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    /// Exact `∫₀¹ p(r) · r dr = Σ coeffs[p] / (p + 2)`.
    pub fn integrate_with_r_weight(&self) -> BigRational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(p, c)| c / BigRational::from_integer(BigInt::from(p + 2)))
            .sum()
    }
}

pub(crate) fn horner(coeffs: &[f64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c)
}

/// Conversion that stays accurate when numerator and denominator far exceed
/// `f64` range. Scales the integer quotient to ~80 significant bits, then
/// applies the power-of-two factor.
pub(crate) fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let magnitude = x.numer().bits() as i64 - x.denom().bits() as i64;
    let shift = 80 - magnitude;
    let num = if shift >= 0 {
        x.numer() << shift as u64
    } else {
        x.numer() >> (-shift) as u64
    };
    let q = (num / x.denom()).to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    });
    // Exact unless the result over- or underflows, which is the right answer
    // anyway. powi saturates safely for |shift| beyond f64 range.
    q * 2f64.powi((-shift).clamp(-2000, 2000) as i32)
}
