//! First-order differential realizations of the four ladder operators, and
//! the reduction of the second radial derivative to first order.
//!
//! On the mode family the ladder operators have the closed forms
//!
//! ```text
//! A+ = (e^{+iΘ}/2) [ −(1−R²)D_R + R(K+L+2) + (1/R)(K−L) ] √((K+L+2)/(K+L+1))
//! A− = (e^{−iΘ}/2) [ +(1−R²)D_R + R(K+L)   + (1/R)(K−L) ] √((K+L)/(K+L+1))
//! B+ = (e^{−iΘ}/2) [ −(1−R²)D_R + R(K+L+2) − (1/R)(K−L) ] √((K+L+2)/(K+L+1))
//! B− = (e^{+iΘ}/2) [ +(1−R²)D_R + R(K+L)   − (1/R)(K−L) ] √((K+L)/(K+L+1))
//! ```
//!
//! where R and Θ multiply, D_R differentiates in r, and K, L read off the
//! mode indices. Evaluating these on a single mode (so K, L become the
//! scalars k, l) must reproduce the pure index-shift actions of
//! [`crate::ladder`]; that cross-check is the heart of the verification
//! suite. Radial values and derivatives come from exact coefficients, so
//! the comparison tests the formulas, not the numerics.
//!
//! The companion identity
//!
//! ```text
//! D_R² = (1/(1−R²)) [ (3R − 1/R) D_R − (K+L)(K+L+2) + (K−L)²/R² ]
//! ```
//!
//! holds on every mode and is exposed as a residual check; it is what makes
//! every polynomial in the generators reducible to first differential
//! order.

use num_complex::Complex64;

use crate::zernike::{ModeIndex, RadialPolynomial};
use crate::{Error, Generator, Result};

/// The closed-form pieces of one ladder operator: signs, the additive
/// constants, and the square-root factor shift. Substituting the scalar
/// eigenvalues k, l reproduces the corresponding display above.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderDifferentialForm {
    pub generator: Generator,
    /// Sign of θ in the prefactor e^{±iΘ}.
    pub phase_sign: i32,
    /// Sign of the (1−R²) D_R term: −1 for raising, +1 for lowering.
    pub derivative_sign: i32,
    /// Constant c in the R·(K+L+c) term: 2 for raising, 0 for lowering.
    pub diagonal_shift: u32,
    /// Sign of the (1/R)(K−L) term: +1 for the A family, −1 for B.
    pub index_term_sign: i32,
    /// Constant c′ in √((K+L+c′)/(K+L+1)): 2 for raising, 0 for lowering.
    pub sqrt_shift: u32,
}

impl LadderDifferentialForm {
    /// The form for one of A±, B±; diagonal generators have no such form.
    pub fn for_generator(g: Generator) -> Result<Self> {
        let (phase_sign, derivative_sign, diagonal_shift, index_term_sign, sqrt_shift) = match g {
            Generator::APlus => (1, -1, 2, 1, 2),
            Generator::AMinus => (-1, 1, 0, 1, 0),
            Generator::BPlus => (-1, -1, 2, -1, 2),
            Generator::BMinus => (1, 1, 0, -1, 0),
            other => return Err(Error::NotALadderGenerator(other)),
        };
        Ok(Self {
            generator: g,
            phase_sign,
            derivative_sign,
            diagonal_shift,
            index_term_sign,
            sqrt_shift,
        })
    }

    /// Value of the operator applied to `V_{k,l}` at one interior point.
    /// `radial` and `radial_derivative` must belong to `idx`.
    fn eval(
        &self,
        idx: ModeIndex,
        radial: &RadialPolynomial,
        radial_derivative: &crate::poly::RationalPoly,
        r: f64,
        theta: f64,
    ) -> Result<Complex64> {
        let k = idx.k as i64;
        let l = idx.l as i64;
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InteriorPointRequired { r });
        }
        if r == 0.0 && k != l {
            return Err(Error::CenterSingularity);
        }
        let n = idx.n() as f64;
        let m = idx.m() as f64;
        let scale = (n + 1.0).sqrt();
        let value = scale * radial.eval(r)?;
        let slope = scale * radial_derivative.eval(r);

        let mut bracket = self.derivative_sign as f64 * (1.0 - r * r) * slope
            + r * (n + self.diagonal_shift as f64) * value;
        if k != l {
            bracket += self.index_term_sign as f64 * m / r * value;
        }
        let sqrt_factor = ((n + self.sqrt_shift as f64) / (n + 1.0)).sqrt();
        let phase = Complex64::cis(self.phase_sign as f64 * theta) * Complex64::cis(m * theta);
        Ok(0.5 * sqrt_factor * bracket * phase)
    }
}

/// Applies the differential form of a ladder generator to the mode
/// `V_{k,l}`, returning one complex value per point. Points must satisfy
/// `0 ≤ r < 1`, with r = 0 admitted only when k = l (the 1/r term vanishes
/// identically there).
pub fn apply_ladder_differential(
    g: Generator,
    idx: ModeIndex,
    points: &[(f64, f64)],
) -> Result<Vec<Complex64>> {
    let form = LadderDifferentialForm::for_generator(g)?;
    let radial = RadialPolynomial::new(idx.radial_index());
    let derivative = radial.derivative();
    points
        .iter()
        .map(|&(r, theta)| form.eval(idx, &radial, &derivative, r, theta))
        .collect()
}

/// Max residual of the second-derivative reduction identity on `V_{k,l}`
/// over the given interior points (r = 1 is rejected: the reduction divides
/// by 1 − r²).
pub fn second_derivative_identity_residual(idx: ModeIndex, points: &[(f64, f64)]) -> Result<f64> {
    let radial = RadialPolynomial::new(idx.radial_index());
    let poly = radial.to_poly();
    let d1 = poly.derivative();
    let d2 = d1.derivative();
    let n = idx.n() as f64;
    let m = idx.m() as f64;
    let scale = (n + 1.0).sqrt();
    let mut worst = 0.0f64;
    for &(r, theta) in points {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InteriorPointRequired { r });
        }
        let phase = Complex64::cis(m * theta);
        let value = scale * poly.eval(r) * phase;
        let slope = scale * d1.eval(r) * phase;
        let curvature = scale * d2.eval(r) * phase;
        let rhs = ((3.0 * r - 1.0 / r) * slope - n * (n + 2.0) * value
            + (m * m) / (r * r) * value)
            / (1.0 - r * r);
        worst = worst.max((curvature - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zernike::eval_mode;

    fn interior_points() -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        for &r in &[0.15, 0.3, 0.5, 0.7, 0.85] {
            for j in 0..8 {
                pts.push((r, 2.0 * std::f64::consts::PI * j as f64 / 8.0 + 0.1));
            }
        }
        pts
    }

    /// Pointwise value of the algebraic image of g on V_{k,l}.
    fn algebraic_image(g: Generator, idx: ModeIndex, r: f64, theta: f64) -> Complex64 {
        let (k, l) = (idx.k, idx.l);
        let zero = Complex64::new(0.0, 0.0);
        match g {
            Generator::APlus => {
                (k + 1) as f64 * eval_mode(ModeIndex::new(k + 1, l), r, theta).unwrap()
            }
            Generator::AMinus if k == 0 => zero,
            Generator::AMinus => k as f64 * eval_mode(ModeIndex::new(k - 1, l), r, theta).unwrap(),
            Generator::BPlus => {
                (l + 1) as f64 * eval_mode(ModeIndex::new(k, l + 1), r, theta).unwrap()
            }
            Generator::BMinus if l == 0 => zero,
            Generator::BMinus => l as f64 * eval_mode(ModeIndex::new(k, l - 1), r, theta).unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn raising_the_constant_mode() {
        let pts = [(0.5, 0.7)];
        let got = apply_ladder_differential(Generator::APlus, ModeIndex::new(0, 0), &pts).unwrap();
        let expect = 2f64.sqrt() * 0.5 * Complex64::cis(0.7);
        assert!((got[0] - expect).norm() < 1e-14);
        assert!((got[0] - eval_mode(ModeIndex::new(1, 0), 0.5, 0.7).unwrap()).norm() < 1e-14);

        let got = apply_ladder_differential(Generator::BPlus, ModeIndex::new(0, 0), &pts).unwrap();
        let expect = 2f64.sqrt() * 0.5 * Complex64::cis(-0.7);
        assert!((got[0] - expect).norm() < 1e-14);
        assert!((got[0] - eval_mode(ModeIndex::new(0, 1), 0.5, 0.7).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn lowering_annihilates_the_wall() {
        // the √(K+L) factor kills A− on V_{0,0}
        let pts = [(0.4, 1.2), (0.8, -0.3)];
        let got = apply_ladder_differential(Generator::AMinus, ModeIndex::new(0, 0), &pts).unwrap();
        assert!(got.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn differential_matches_algebraic_action() {
        let pts = interior_points();
        let gens = [Generator::APlus, Generator::AMinus, Generator::BPlus, Generator::BMinus];
        for k in 0..=6u32 {
            for l in 0..=6u32 {
                let idx = ModeIndex::new(k, l);
                for g in gens {
                    let got = apply_ladder_differential(g, idx, &pts).unwrap();
                    for (value, &(r, theta)) in got.iter().zip(&pts) {
                        let expect = algebraic_image(g, idx, r, theta);
                        assert!(
                            (value - expect).norm() < 1e-9,
                            "{g} on ({k},{l}) at ({r},{theta}): {value} vs {expect}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn second_derivative_identity_examples() {
        let pts = [(0.3, 0.2), (0.7, 1.1)];
        let res = second_derivative_identity_residual(ModeIndex::new(1, 1), &pts).unwrap();
        assert!(res < 1e-10);

        let res = second_derivative_identity_residual(ModeIndex::new(0, 0), &pts).unwrap();
        assert_eq!(res, 0.0);

        let res = second_derivative_identity_residual(ModeIndex::new(3, 1), &[(0.5, 0.0)]).unwrap();
        assert!(res < 1e-10);
    }

    #[test]
    fn singular_points_rejected() {
        // 1/r singularity at the center if and only if k != l
        let err = apply_ladder_differential(Generator::APlus, ModeIndex::new(1, 0), &[(0.0, 0.0)]);
        assert!(matches!(err, Err(Error::CenterSingularity)));
        let ok = apply_ladder_differential(Generator::APlus, ModeIndex::new(2, 2), &[(0.0, 0.0)]);
        assert!(ok.is_ok());

        let err = second_derivative_identity_residual(ModeIndex::new(1, 1), &[(1.0, 0.0)]);
        assert!(matches!(err, Err(Error::InteriorPointRequired { .. })));
        let err = apply_ladder_differential(Generator::BMinus, ModeIndex::new(1, 1), &[(1.0, 0.0)]);
        assert!(matches!(err, Err(Error::InteriorPointRequired { .. })));
    }

    #[test]
    fn diagonal_generators_have_no_differential_form() {
        assert!(LadderDifferentialForm::for_generator(Generator::K).is_err());
        assert!(LadderDifferentialForm::for_generator(Generator::AThree).is_err());
    }

    #[test]
    fn reduction_on_single_mode_is_the_radial_ode_check() {
        // at θ = 0 the reduction residual and the mode-ODE residual are the
        // same number
        for (k, l) in [(1, 1), (3, 2), (0, 4), (5, 5)] {
            let idx = ModeIndex::new(k, l);
            for r in [0.2, 0.55, 0.9] {
                let from_identity =
                    second_derivative_identity_residual(idx, &[(r, 0.0)]).unwrap();
                let from_ode = crate::zernike::ode_residual(idx, r).unwrap();
                assert!(
                    (from_identity - from_ode).abs() <= 1e-15 * (1.0 + from_ode),
                    "({k},{l}) at r={r}: {from_identity} vs {from_ode}"
                );
            }
        }
    }
}
