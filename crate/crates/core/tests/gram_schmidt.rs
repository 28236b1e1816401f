//! Independent construction of the radial polynomials by exact rational
//! Gram–Schmidt, checked against the explicit-sum construction.
//!
//! For fixed azimuthal order m, orthogonalize the monomials
//! r^m, r^{m+2}, …, r^n under ⟨p, q⟩ = ∫₀¹ p(r) q(r) r dr and normalize so
//! p(1) = 1. This pipeline shares no code with the coefficient formula in
//! the library, so agreement pins both down.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use zernike_disk::poly::RationalPoly;
use zernike_disk::zernike::{RadialIndex, RadialPolynomial};

fn monomial(power: usize) -> RationalPoly {
    let mut coeffs = vec![BigRational::zero(); power + 1];
    coeffs[power] = BigRational::one();
    RationalPoly::new(coeffs)
}

fn inner(p: &RationalPoly, q: &RationalPoly) -> BigRational {
    p.mul(q).integrate_with_r_weight()
}

/// Orthogonal family for order m up to degree max_n, normalized at r = 1.
fn gram_schmidt_family(m: u32, max_n: u32) -> Vec<(u32, RationalPoly)> {
    let mut family: Vec<(u32, RationalPoly)> = Vec::new();
    let mut n = m;
    while n <= max_n {
        let mut p = monomial(n as usize);
        for (_, q) in &family {
            let coeff = inner(&p, q) / inner(q, q);
            p = p.sub(&q.scale(&coeff));
        }
        let at_one = p.eval_exact(&BigRational::one());
        assert!(!at_one.is_zero());
        p = p.scale(&(BigRational::one() / at_one));
        family.push((n, p));
        n += 2;
    }
    family
}

#[test]
fn explicit_sum_matches_gram_schmidt_oracle() {
    let max_n = 12u32;
    for m in 0..=max_n {
        for (n, oracle) in gram_schmidt_family(m, max_n) {
            let built = RadialPolynomial::new(RadialIndex::new(n, m).unwrap());
            assert_eq!(
                built.to_poly().coeffs(),
                oracle.coeffs(),
                "coefficient mismatch for n={n}, m={m}"
            );
        }
    }
}

#[test]
fn oracle_low_order_values() {
    // frozen expected coefficients computed by the oracle itself
    let fam = gram_schmidt_family(0, 2);
    assert_eq!(fam[0].1.coeffs(), &[BigRational::one()]);
    let r2 = &fam[1].1;
    assert_eq!(
        r2.coeffs(),
        &[
            BigRational::from_integer(BigInt::from(-1)),
            BigRational::zero(),
            BigRational::from_integer(BigInt::from(2)),
        ]
    );

    let fam = gram_schmidt_family(1, 1);
    assert_eq!(fam[0].1.coeffs(), &[BigRational::zero(), BigRational::one()]);
}

#[test]
fn oracle_family_is_orthogonal_with_stated_norms() {
    let fam = gram_schmidt_family(2, 10);
    for (n1, p) in &fam {
        for (n2, q) in &fam {
            let got = inner(p, q);
            let expect = if n1 == n2 {
                BigRational::new(BigInt::one(), BigInt::from(2 * (n1 + 1)))
            } else {
                BigRational::zero()
            };
            assert_eq!(got, expect, "n={n1}, n'={n2}");
        }
    }
}
