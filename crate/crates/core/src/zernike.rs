//! Radial Zernike polynomials and the complex disk modes built on them.
//!
//! The radial polynomial `R^m_n` (0 ≤ m ≤ n, n−m even) is the degree-n
//! polynomial on [0, 1] with lowest power `r^m`, orthogonal in the weight
//! `r`, normalized so `R^m_n(1) = 1`. It solves
//!
//! ```text
//! (1−r²) R'' − (3r − 1/r) R' + [n(n+2) − m²/r²] R = 0.
//! ```
//!
//! The complex modes are indexed by two naturals `k, l` with `n = k+l`,
//! `m = k−l`:
//!
//! ```text
//! V_{k,l}(r, θ) = √(k+l+1) · R^|k−l|_{k+l}(r) · e^{i(k−l)θ}
//! ```
//!
//! and satisfy `V_{l,k} = V_{k,l}* = V_{k,l}(r, −θ)`.
//!
//! Coefficients are exact rationals built from the explicit finite sum, so
//! derivatives, weighted integrals and ODE residuals can be checked in
//! exact arithmetic.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::{horner, rational_to_f64, RationalPoly};
use crate::{Error, Result};

/// Index (n, m) of a radial polynomial `R^m_n`, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RadialIndex {
    n: u32,
    m: u32,
}

impl RadialIndex {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if m > n || !(n - m).is_multiple_of(2) {
            return Err(Error::InvalidRadialIndex { n, m });
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

/// Index (k, l) of a complex mode `V_{k,l}`. Any pair of naturals is valid;
/// the derived n = k+l, m = k−l automatically satisfy the radial parity
/// constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    pub k: u32,
    pub l: u32,
}

impl ModeIndex {
    pub fn new(k: u32, l: u32) -> Self {
        Self { k, l }
    }

    /// Total degree n = k + l.
    pub fn n(&self) -> u32 {
        self.k + self.l
    }

    /// Signed azimuthal order m = k − l.
    pub fn m(&self) -> i64 {
        self.k as i64 - self.l as i64
    }

    /// Index of the radial factor `R^|m|_n`.
    pub fn radial_index(&self) -> RadialIndex {
        RadialIndex {
            n: self.n(),
            m: self.m().unsigned_abs() as u32,
        }
    }

    /// The conjugate mode (l, k).
    pub fn transpose(&self) -> ModeIndex {
        ModeIndex { k: self.l, l: self.k }
    }
}

/// `R^m_n` with exact rational coefficients, stored for the powers
/// `r^m, r^{m+2}, …, r^n` (odd-gap entries are identically zero).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPolynomial {
    index: RadialIndex,
    coeffs: Vec<BigRational>,
    coeffs_f64: Vec<f64>,
}

fn factorial(q: u32) -> BigInt {
    (1..=u64::from(q)).fold(BigInt::one(), |acc, i| acc * i)
}

impl RadialPolynomial {
    /// Builds `R^m_n` from the explicit alternating sum
    ///
    /// ```text
    /// R^m_n(r) = Σ_s (−1)^s (n−s)! / [s! ((n+m)/2 − s)! ((n−m)/2 − s)!] r^{n−2s}
    /// ```
    ///
    /// The coefficients are exact integers; `R(1) = 1` is asserted.
    pub fn new(index: RadialIndex) -> Self {
        let (n, m) = (index.n, index.m);
        let half = (n - m) / 2;
        let mut coeffs = vec![BigRational::zero(); half as usize + 1];
        for s in 0..=half {
            let num = factorial(n - s);
            let den = factorial(s) * factorial((n + m) / 2 - s) * factorial((n - m) / 2 - s);
            let mut c = BigRational::new(num, den);
            if s % 2 == 1 {
                c = -c;
            }
            // power n−2s sits at slot j = (n−2s−m)/2
            coeffs[(half - s) as usize] = c;
        }
        let at_one: BigRational = coeffs.iter().sum();
        assert!(at_one.is_one(), "radial polynomial not normalized at r=1");
        let coeffs_f64 = coeffs.iter().map(rational_to_f64).collect();
        Self { index, coeffs, coeffs_f64 }
    }

    pub fn index(&self) -> RadialIndex {
        self.index
    }

    /// Exact coefficients of `r^{m+2j}` for `j = 0, 1, …, (n−m)/2`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Value at `r ∈ [0, 1]`, computed in exact arithmetic and rounded once.
    pub fn eval(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.eval_exact_f64(r))
    }

    fn eval_exact_f64(&self, r: f64) -> f64 {
        let rq = BigRational::from_float(r).expect("finite radius");
        let r2 = &rq * &rq;
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &r2 + c;
        }
        let rm = num_traits::pow::pow(rq, self.index.m as usize);
        rational_to_f64(&(acc * rm))
    }

    /// Plain `f64` Horner on cached coefficients. Adequate for quadrature
    /// and rendering up to moderate degree; expect breakdown from
    /// coefficient growth for n ≳ 40.
    pub fn eval_f64(&self, r: f64) -> f64 {
        horner(&self.coeffs_f64, r * r) * r.powi(self.index.m as i32)
    }

    /// Dense exact polynomial over all powers of `r`.
    pub fn to_poly(&self) -> RationalPoly {
        let (n, m) = (self.index.n as usize, self.index.m as usize);
        let mut dense = vec![BigRational::zero(); n + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            dense[m + 2 * j] = c.clone();
        }
        RationalPoly::new(dense)
    }

    /// Exact termwise derivative, as a dense coefficient vector.
    pub fn derivative(&self) -> RationalPoly {
        self.to_poly().derivative()
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::RadiusOutOfRange { r });
    }
    Ok(())
}

/// Value of the complex mode `V_{k,l}` at (r, θ). θ is periodic; r must lie
/// in [0, 1].
pub fn eval_mode(idx: ModeIndex, r: f64, theta: f64) -> Result<Complex64> {
    check_radius(r)?;
    let radial = RadialPolynomial::new(idx.radial_index());
    Ok(eval_mode_with(&radial, idx, r, theta))
}

/// Same as [`eval_mode`] with the radial factor precomputed, for loops over
/// many points of one mode. Uses the exact evaluation path.
pub fn eval_mode_with(radial: &RadialPolynomial, idx: ModeIndex, r: f64, theta: f64) -> Complex64 {
    let amplitude = ((idx.n() as f64) + 1.0).sqrt() * radial.eval_exact_f64(r);
    amplitude * Complex64::cis(idx.m() as f64 * theta)
}

/// The real disk functions `(Z^m_n, Z^{−m}_n) = (R^m_n cos mθ, R^m_n sin mθ)`
/// with n = k+l, m = |k−l|. They are the real and imaginary parts of the
/// complex mode up to the √(n+1) factor.
pub fn to_real_modes(idx: ModeIndex, r: f64, theta: f64) -> Result<(f64, f64)> {
    check_radius(r)?;
    let radial = RadialPolynomial::new(idx.radial_index());
    let value = radial.eval_exact_f64(r);
    let m = idx.m().unsigned_abs() as f64;
    Ok((value * (m * theta).cos(), value * (m * theta).sin()))
}

/// Residual of the mode ODE at r ∈ (0, 1),
///
/// ```text
/// V'' − (1/(1−r²)) [ (3r − 1/r) V' − (k+l)(k+l+2) V + ((k−l)²/r²) V ]
/// ```
///
/// restricted to the radial factor (the phase drops out). Derivatives come
/// from exact coefficients; the composition is evaluated in floating point.
pub fn ode_residual(idx: ModeIndex, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InteriorPointRequired { r });
    }
    let radial = RadialPolynomial::new(idx.radial_index());
    let p = radial.to_poly();
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let n = idx.n() as f64;
    let msq = (idx.m() * idx.m()) as f64;
    let scale = (n + 1.0).sqrt();
    let v = scale * p.eval(r);
    let dv = scale * d1.eval(r);
    let ddv = scale * d2.eval(r);
    let rhs = ((3.0 * r - 1.0 / r) * dv - n * (n + 2.0) * v + msq / (r * r) * v) / (1.0 - r * r);
    Ok((ddv - rhs).abs())
}

/// Exact `∫₀¹ R^m_n(r) R^m_{n'}(r) r dr`. For matching azimuthal order this
/// equals `δ_{nn'} / (2(n+1))` exactly.
pub fn radial_overlap(p: &RadialPolynomial, q: &RadialPolynomial) -> BigRational {
    p.to_poly().mul(&q.to_poly()).integrate_with_r_weight()
}
