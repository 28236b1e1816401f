//! Self-contained numerical verification of the identities the crate is
//! built on: orthonormality, exact radial orthogonality, the mode ODE, the
//! ladder recurrences, the su(1,1)⊕su(1,1) commutation relations, the
//! Casimir scalars, and the differential/algebraic agreement of the ladder
//! operators.
//!
//! Used by the command-line `verify` subcommand and by the acceptance
//! tests.

use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diffops::{apply_ladder_differential, second_derivative_identity_residual};
use crate::ladder::{
    apply_generator, casimir, commutator_defect, CasimirFamily, Generator, OperatorExpr,
};
use crate::quadrature::{inner_product, QuadratureGrid, SampledField};
use crate::transform::CoefficientTable;
use crate::zernike::{eval_mode, ode_residual, radial_overlap, ModeIndex, RadialIndex,
    RadialPolynomial};

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub max_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckReport {
    fn evaluate(name: &'static str, max_defect: f64, tolerance: f64) -> Self {
        Self { name, max_defect, tolerance, passed: max_defect <= tolerance }
    }
}

/// Suite configuration. `tolerance_override`, when set, replaces every
/// check's default tolerance.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub max_index: u32,
    pub tolerance_override: Option<f64>,
    pub random_tables: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { max_index: 8, tolerance_override: None, random_tables: 20, seed: 0x5EED }
    }
}

pub fn random_table(max_k: usize, max_l: usize, rng: &mut impl Rng) -> CoefficientTable {
    let mut t = CoefficientTable::new(max_k, max_l);
    for k in 0..=max_k {
        for l in 0..=max_l {
            t.set(
                k,
                l,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
    }
    t
}

fn interior_points() -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for &r in &[0.15, 0.3, 0.5, 0.7, 0.85] {
        for j in 0..8 {
            pts.push((r, 2.0 * std::f64::consts::PI * j as f64 / 8.0 + 0.1));
        }
    }
    pts
}

/// Runs every check and collects the reports.
pub fn run_suite(cfg: &VerifyConfig) -> Vec<CheckReport> {
    let tol = |default: f64| cfg.tolerance_override.unwrap_or(default);
    let mut reports = vec![
        CheckReport::evaluate(
            "mode orthonormality",
            orthonormality_defect(cfg.max_index as usize),
            tol(1e-10),
        ),
        CheckReport::evaluate(
            "radial orthogonality (exact arithmetic)",
            radial_orthogonality_mismatches(cfg.max_index) as f64,
            tol(0.0),
        ),
        CheckReport::evaluate("mode ODE residual", ode_defect(cfg.max_index), tol(1e-9)),
        CheckReport::evaluate(
            "ladder recurrence factors",
            recurrence_defect(cfg.max_index),
            tol(1e-13),
        ),
    ];

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    reports.push(CheckReport::evaluate(
        "commutation relations",
        commutation_defect(cfg.max_index as usize, cfg.random_tables, &mut rng),
        tol(1e-12),
    ));
    reports.push(CheckReport::evaluate(
        "casimir scaling",
        casimir_defect(cfg.max_index as usize, cfg.random_tables, &mut rng),
        tol(1e-13),
    ));

    let diff_band = cfg.max_index.min(10);
    reports.push(CheckReport::evaluate(
        "differential vs algebraic ladder action",
        differential_defect(diff_band),
        tol(1e-9),
    ));
    reports.push(CheckReport::evaluate(
        "second-derivative reduction identity",
        reduction_identity_defect(diff_band),
        tol(1e-9),
    ));
    reports
}

/// Largest deviation of pairwise mode inner products from the identity
/// matrix, over all modes with total degree ≤ `max_degree`.
pub fn orthonormality_defect(max_degree: usize) -> f64 {
    let grid = QuadratureGrid::new(max_degree);
    let mut modes = Vec::new();
    for k in 0..=max_degree as u32 {
        for l in 0..=(max_degree as u32 - k) {
            let idx = ModeIndex::new(k, l);
            modes.push((idx, SampledField::sample_mode(&grid, idx)));
        }
    }
    let mut worst = 0.0f64;
    for (i1, f1) in &modes {
        for (i2, f2) in &modes {
            let p = inner_product(f1, f2).expect("same grid");
            let expect = if i1 == i2 { 1.0 } else { 0.0 };
            worst = worst.max((p - Complex64::new(expect, 0.0)).norm());
        }
    }
    worst
}

/// Counts exact-arithmetic failures of
/// `∫₀¹ R^m_n R^m_{n'} r dr = δ_{nn'} / (2(n+1))` for n, n' ≤ `max_n`.
pub fn radial_orthogonality_mismatches(max_n: u32) -> usize {
    let mut mismatches = 0;
    for m in 0..=max_n {
        let polys: Vec<RadialPolynomial> = (m..=max_n)
            .filter(|n| (n - m) % 2 == 0)
            .map(|n| RadialPolynomial::new(RadialIndex::new(n, m).expect("valid index")))
            .collect();
        for p in &polys {
            for q in &polys {
                let got = radial_overlap(p, q);
                let expect = if p.index() == q.index() {
                    BigRational::new(1.into(), (2 * (i64::from(p.index().n()) + 1)).into())
                } else {
                    BigRational::from_integer(0.into())
                };
                if got != expect {
                    mismatches += 1;
                }
            }
        }
    }
    mismatches
}

/// Largest mode-ODE residual for k, l ≤ `max_index` at 40 interior radii.
pub fn ode_defect(max_index: u32) -> f64 {
    let mut worst = 0.0f64;
    for k in 0..=max_index {
        for l in 0..=max_index {
            let idx = ModeIndex::new(k, l);
            for i in 0..40 {
                let r = (i as f64 + 1.0) / 41.0;
                worst = worst.max(ode_residual(idx, r).expect("interior radius"));
            }
        }
    }
    worst
}

/// Checks the four recurrence factors on single-entry tables.
pub fn recurrence_defect(max_index: u32) -> f64 {
    let mut worst = 0.0f64;
    for k in 0..=max_index as usize {
        for l in 0..=max_index as usize {
            let mut t = CoefficientTable::new(k, l);
            t.set(k, l, Complex64::new(1.0, 0.0));

            let raised = apply_generator(Generator::APlus, &t);
            worst = worst.max((raised.get(k + 1, l) - Complex64::new((k + 1) as f64, 0.0)).norm());
            let lowered = apply_generator(Generator::AMinus, &t);
            worst = worst.max(if k == 0 {
                lowered.max_abs()
            } else {
                (lowered.get(k - 1, l) - Complex64::new(k as f64, 0.0)).norm()
            });

            let raised = apply_generator(Generator::BPlus, &t);
            worst = worst.max((raised.get(k, l + 1) - Complex64::new((l + 1) as f64, 0.0)).norm());
            let lowered = apply_generator(Generator::BMinus, &t);
            worst = worst.max(if l == 0 {
                lowered.max_abs()
            } else {
                (lowered.get(k, l - 1) - Complex64::new(l as f64, 0.0)).norm()
            });
        }
    }
    worst
}

/// Worst commutator defect across the full relation set on random tables.
pub fn commutation_defect(max_index: usize, tables: usize, rng: &mut impl Rng) -> f64 {
    let minus_two = Complex64::new(-2.0, 0.0);
    let plus = Complex64::new(1.0, 0.0);
    let minus = Complex64::new(-1.0, 0.0);
    let a3 = OperatorExpr::from_generator(Generator::AThree);
    let b3 = OperatorExpr::from_generator(Generator::BThree);
    let ap = OperatorExpr::from_generator(Generator::APlus);
    let am = OperatorExpr::from_generator(Generator::AMinus);
    let bp = OperatorExpr::from_generator(Generator::BPlus);
    let bm = OperatorExpr::from_generator(Generator::BMinus);
    let relations: Vec<(Generator, Generator, OperatorExpr)> = vec![
        (Generator::APlus, Generator::AMinus, a3.scaled(minus_two)),
        (Generator::AThree, Generator::APlus, ap.scaled(plus)),
        (Generator::AThree, Generator::AMinus, am.scaled(minus)),
        (Generator::K, Generator::APlus, ap.scaled(plus)),
        (Generator::K, Generator::AMinus, am.scaled(minus)),
        (Generator::BPlus, Generator::BMinus, b3.scaled(minus_two)),
        (Generator::BThree, Generator::BPlus, bp.scaled(plus)),
        (Generator::BThree, Generator::BMinus, bm.scaled(minus)),
        (Generator::L, Generator::BPlus, bp.scaled(plus)),
        (Generator::L, Generator::BMinus, bm.scaled(minus)),
        (Generator::APlus, Generator::BPlus, OperatorExpr::zero()),
        (Generator::APlus, Generator::BMinus, OperatorExpr::zero()),
        (Generator::APlus, Generator::BThree, OperatorExpr::zero()),
        (Generator::AMinus, Generator::BPlus, OperatorExpr::zero()),
        (Generator::AMinus, Generator::BMinus, OperatorExpr::zero()),
        (Generator::AMinus, Generator::BThree, OperatorExpr::zero()),
        (Generator::AThree, Generator::BPlus, OperatorExpr::zero()),
        (Generator::AThree, Generator::BMinus, OperatorExpr::zero()),
        (Generator::AThree, Generator::BThree, OperatorExpr::zero()),
    ];
    let mut worst = 0.0f64;
    for _ in 0..tables {
        let t = random_table(max_index, max_index, rng);
        for (g1, g2, expected) in &relations {
            worst = worst.max(commutator_defect(*g1, *g2, &t, expected));
        }
    }
    worst
}

/// Worst deviation of both family Casimirs from (1/4)·identity.
pub fn casimir_defect(max_index: usize, tables: usize, rng: &mut impl Rng) -> f64 {
    let quarter = Complex64::new(0.25, 0.0);
    let mut worst = 0.0f64;
    for _ in 0..tables {
        let t = random_table(max_index, max_index, rng);
        for family in [CasimirFamily::A, CasimirFamily::B] {
            let out = casimir(family, &t);
            worst = worst.max(out.sub(&t.scaled(quarter)).max_abs());
        }
    }
    worst
}

/// Worst pointwise difference between the differential and algebraic
/// actions of the four ladder operators, k, l ≤ `max_index`.
pub fn differential_defect(max_index: u32) -> f64 {
    let pts = interior_points();
    let gens = [Generator::APlus, Generator::AMinus, Generator::BPlus, Generator::BMinus];
    let mut worst = 0.0f64;
    for k in 0..=max_index {
        for l in 0..=max_index {
            let idx = ModeIndex::new(k, l);
            for g in gens {
                let got = apply_ladder_differential(g, idx, &pts).expect("interior points");
                for (value, &(r, theta)) in got.iter().zip(&pts) {
                    let expect = algebraic_image(g, idx, r, theta);
                    worst = worst.max((value - expect).norm());
                }
            }
        }
    }
    worst
}

fn algebraic_image(g: Generator, idx: ModeIndex, r: f64, theta: f64) -> Complex64 {
    let (k, l) = (idx.k, idx.l);
    let zero = Complex64::new(0.0, 0.0);
    match g {
        Generator::APlus => (k + 1) as f64 * eval_mode(ModeIndex::new(k + 1, l), r, theta).unwrap(),
        Generator::AMinus if k == 0 => zero,
        Generator::AMinus => k as f64 * eval_mode(ModeIndex::new(k - 1, l), r, theta).unwrap(),
        Generator::BPlus => (l + 1) as f64 * eval_mode(ModeIndex::new(k, l + 1), r, theta).unwrap(),
        Generator::BMinus if l == 0 => zero,
        Generator::BMinus => l as f64 * eval_mode(ModeIndex::new(k, l - 1), r, theta).unwrap(),
        _ => unreachable!("diagonal generators have no differential form"),
    }
}

/// Worst residual of the second-derivative reduction identity,
/// k, l ≤ `max_index`.
pub fn reduction_identity_defect(max_index: u32) -> f64 {
    let pts = interior_points();
    let mut worst = 0.0f64;
    for k in 0..=max_index {
        for l in 0..=max_index {
            let res = second_derivative_identity_residual(ModeIndex::new(k, l), &pts)
                .expect("interior points");
            worst = worst.max(res);
        }
    }
    worst
}
