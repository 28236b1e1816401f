//! Index-shift (ladder) operators on mode-coefficient tables.
//!
//! On the basis the generators act as
//!
//! ```text
//! A+ V_{k,l} = (k+1) V_{k+1,l}        B+ V_{k,l} = (l+1) V_{k,l+1}
//! A− V_{k,l} = k V_{k−1,l}            B− V_{k,l} = l V_{k,l−1}
//! A3 V_{k,l} = (k+1/2) V_{k,l}        B3 V_{k,l} = (l+1/2) V_{k,l}
//! K  V_{k,l} = k V_{k,l}              L  V_{k,l} = l V_{k,l}
//! ```
//!
//! with A3 = K + 1/2, B3 = L + 1/2. {A+, A3, A−} and {B+, B3, B−} each
//! close into su(1,1) ([X+, X−] = −2X3, [X3, X±] = ±X±), the two families
//! commute, and both Casimirs ½{X+, X−} − X3² act as the scalar 1/4.
//!
//! This module transports those actions to expansion coefficients: for
//! `f = Σ f_{k,l} V_{k,l}` the raised function `A+ f` has coefficients
//! `g_{k,l} = k f_{k−1,l}`, the lowered one `g_{k,l} = (k+1) f_{k+1,l}`,
//! and so on. Lowering annihilates at the k = 0 (or l = 0) wall; raising
//! grows the table by one row or column.
//!
//! General operators are finite sums of ordered monomials
//! `c · A+^α1 A3^α2 A−^α3 B+^β1 B3^β2 B−^β3`; only this ordered form is
//! representable, so no rewriting logic is needed or performed here.

use std::fmt;

use num_complex::Complex64;

use crate::transform::CoefficientTable;

/// One of the eight generator tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    APlus,
    AThree,
    AMinus,
    BPlus,
    BThree,
    BMinus,
    K,
    L,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Generator::APlus => "A+",
            Generator::AThree => "A3",
            Generator::AMinus => "A-",
            Generator::BPlus => "B+",
            Generator::BThree => "B3",
            Generator::BMinus => "B-",
            Generator::K => "K",
            Generator::L => "L",
        };
        f.write_str(s)
    }
}

/// Ordered monomial `coefficient · A+^α1 A3^α2 A−^α3 B+^β1 B3^β2 B−^β3`.
/// Exponents are stored in that order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UeaMonomial {
    pub coefficient: Complex64,
    pub exponents: [u32; 6],
}

impl UeaMonomial {
    pub fn new(coefficient: Complex64, exponents: [u32; 6]) -> Self {
        Self { coefficient, exponents }
    }

    /// The empty word with coefficient one.
    pub fn identity() -> Self {
        Self::new(Complex64::new(1.0, 0.0), [0; 6])
    }

    pub fn is_identity_word(&self) -> bool {
        self.exponents == [0; 6]
    }
}

/// Finite sum of ordered monomials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorExpr {
    pub monomials: Vec<UeaMonomial>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self { monomials: Vec::new() }
    }

    pub fn identity() -> Self {
        Self { monomials: vec![UeaMonomial::identity()] }
    }

    pub fn from_monomials(monomials: Vec<UeaMonomial>) -> Self {
        Self { monomials }
    }

    /// A single generator as an expression. K and L expand through
    /// A3 − 1/2 and B3 − 1/2 so that everything stays in the ordered basis.
    pub fn from_generator(g: Generator) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let single = |slot: usize| {
            let mut e = [0u32; 6];
            e[slot] = 1;
            Self::from_monomials(vec![UeaMonomial::new(one, e)])
        };
        match g {
            Generator::APlus => single(0),
            Generator::AThree => single(1),
            Generator::AMinus => single(2),
            Generator::BPlus => single(3),
            Generator::BThree => single(4),
            Generator::BMinus => single(5),
            Generator::K => single(1).add(&Self::identity().scaled(Complex64::new(-0.5, 0.0))),
            Generator::L => single(4).add(&Self::identity().scaled(Complex64::new(-0.5, 0.0))),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            monomials: self
                .monomials
                .iter()
                .map(|m| UeaMonomial::new(m.coefficient * factor, m.exponents))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut monomials = self.monomials.clone();
        monomials.extend_from_slice(&other.monomials);
        Self { monomials }
    }
}

/// Applies one generator to a coefficient table. Raising enlarges the table
/// by one row or column; lowering shrinks it, annihilating at the index
/// wall (the k = 0 entries carry factor k = 0).
pub fn apply_generator(g: Generator, c: &CoefficientTable) -> CoefficientTable {
    let (max_k, max_l) = (c.max_k(), c.max_l());
    match g {
        Generator::APlus => {
            let mut out = CoefficientTable::new(max_k + 1, max_l);
            for k in 1..=max_k + 1 {
                for l in 0..=max_l {
                    out.set(k, l, k as f64 * c.get(k - 1, l));
                }
            }
            out
        }
        Generator::AMinus => {
            let mut out = CoefficientTable::new(max_k.saturating_sub(1), max_l);
            for k in 0..=out.max_k() {
                for l in 0..=max_l {
                    out.set(k, l, (k + 1) as f64 * c.get(k + 1, l));
                }
            }
            out
        }
        Generator::BPlus => {
            let mut out = CoefficientTable::new(max_k, max_l + 1);
            for k in 0..=max_k {
                for l in 1..=max_l + 1 {
                    out.set(k, l, l as f64 * c.get(k, l - 1));
                }
            }
            out
        }
        Generator::BMinus => {
            let mut out = CoefficientTable::new(max_k, max_l.saturating_sub(1));
            for k in 0..=max_k {
                for l in 0..=out.max_l() {
                    out.set(k, l, (l + 1) as f64 * c.get(k, l + 1));
                }
            }
            out
        }
        Generator::AThree | Generator::BThree | Generator::K | Generator::L => {
            let mut out = CoefficientTable::new(max_k, max_l);
            for k in 0..=max_k {
                for l in 0..=max_l {
                    let factor = match g {
                        Generator::AThree => k as f64 + 0.5,
                        Generator::BThree => l as f64 + 0.5,
                        Generator::K => k as f64,
                        Generator::L => l as f64,
                        _ => unreachable!(),
                    };
                    out.set(k, l, factor * c.get(k, l));
                }
            }
            out
        }
    }
}

/// Applies an ordered monomial: the word acts right to left (B− first,
/// A+ last), then the scalar coefficient. A single basis entry at (k, l)
/// therefore lands at (k + α1 − α3, l + β1 − β3) or is annihilated.
pub fn apply_monomial(m: &UeaMonomial, c: &CoefficientTable) -> CoefficientTable {
    let order = [
        (Generator::BMinus, m.exponents[5]),
        (Generator::BThree, m.exponents[4]),
        (Generator::BPlus, m.exponents[3]),
        (Generator::AMinus, m.exponents[2]),
        (Generator::AThree, m.exponents[1]),
        (Generator::APlus, m.exponents[0]),
    ];
    let mut table = c.clone();
    for (g, count) in order {
        for _ in 0..count {
            table = apply_generator(g, &table);
        }
    }
    table.scaled(m.coefficient)
}

/// Sum of the monomial actions.
pub fn apply_operator(o: &OperatorExpr, c: &CoefficientTable) -> CoefficientTable {
    let mut acc = CoefficientTable::new(0, 0);
    for m in &o.monomials {
        acc = acc.add(&apply_monomial(m, c));
    }
    acc
}

/// Which su(1,1) family a Casimir acts in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasimirFamily {
    A,
    B,
}

/// `C = ½{X+, X−} − X3²` for the chosen family; scales every table by
/// exactly 1/4.
pub fn casimir(family: CasimirFamily, c: &CoefficientTable) -> CoefficientTable {
    let (plus, three, minus) = match family {
        CasimirFamily::A => (Generator::APlus, Generator::AThree, Generator::AMinus),
        CasimirFamily::B => (Generator::BPlus, Generator::BThree, Generator::BMinus),
    };
    let pm = apply_generator(plus, &apply_generator(minus, c));
    let mp = apply_generator(minus, &apply_generator(plus, c));
    let d3 = apply_generator(three, &apply_generator(three, c));
    pm.add(&mp).scaled(Complex64::new(0.5, 0.0)).sub(&d3)
}

/// Largest entry magnitude of `([g1, g2] − expected)` applied to `c`.
pub fn commutator_defect(
    g1: Generator,
    g2: Generator,
    c: &CoefficientTable,
    expected: &OperatorExpr,
) -> f64 {
    let forward = apply_generator(g1, &apply_generator(g2, c));
    let backward = apply_generator(g2, &apply_generator(g1, c));
    let expect = apply_operator(expected, c);
    forward.sub(&backward).sub(&expect).max_abs()
}
