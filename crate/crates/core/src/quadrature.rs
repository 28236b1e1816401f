//! Polar quadrature realizing the disk inner product
//! `(1/π) ∫₀^{2π} dθ ∫₀¹ dr r f g*`.
//!
//! Radially: Gauss–Legendre on [0, 1] with the `r` measure factor folded
//! into the weights, so all nodes are strictly interior. Angularly: the
//! uniform trapezoid rule, exact for trigonometric polynomials of order
//! below the node count.

use num_complex::Complex64;

use crate::zernike::{ModeIndex, RadialPolynomial};
use crate::{Error, Result};

/// Polar product grid. For a grid built with `max_degree = d`, products of
/// two modes of total degree ≤ d integrate exactly (radial integrands up to
/// degree 2d + 1 against dr, azimuthal orders up to 2d).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    radial_nodes: Vec<f64>,
    radial_weights: Vec<f64>,
    n_theta: usize,
    max_exact_degree: usize,
}

impl QuadratureGrid {
    /// Grid adequate for analyzing and pairing modes of total degree up to
    /// `max_degree`: `max_degree + 2` radial nodes, `2·max_degree + 3`
    /// angles.
    pub fn new(max_degree: usize) -> Self {
        Self::with_counts(max_degree, max_degree + 2, 2 * max_degree + 3)
    }

    /// Explicit node counts, e.g. for refinement studies. Counts below the
    /// exactness budget of `max_degree` are rejected.
    pub fn with_counts(max_degree: usize, n_radial: usize, n_theta: usize) -> Self {
        assert!(n_radial >= max_degree + 2, "too few radial nodes for the stated degree");
        assert!(n_theta >= 2 * max_degree + 3, "too few angles for the stated degree");
        let (nodes, weights) = gauss_legendre_unit(n_radial);
        let radial_weights = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x) // absorb the r measure factor
            .collect();
        Self {
            radial_nodes: nodes,
            radial_weights,
            n_theta,
            max_exact_degree: max_degree,
        }
    }

    pub fn radial_nodes(&self) -> &[f64] {
        &self.radial_nodes
    }

    /// Weights including the `r` factor; they sum to `∫₀¹ r dr = 1/2`.
    pub fn radial_weights(&self) -> &[f64] {
        &self.radial_weights
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * j as f64 / self.n_theta as f64
    }

    pub fn theta_step(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n_theta as f64
    }

    pub fn max_exact_degree(&self) -> usize {
        self.max_exact_degree
    }

    pub fn len(&self) -> usize {
        self.radial_nodes.len() * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Complex samples of a function at every (node, angle) pair of a grid.
#[derive(Debug, Clone)]
pub struct SampledField<'g> {
    grid: &'g QuadratureGrid,
    values: Vec<Complex64>,
}

impl<'g> SampledField<'g> {
    /// Samples `f(r, θ)` over the grid.
    pub fn from_fn(grid: &'g QuadratureGrid, mut f: impl FnMut(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for &r in &grid.radial_nodes {
            for j in 0..grid.n_theta {
                values.push(f(r, grid.theta(j)));
            }
        }
        Self { grid, values }
    }

    /// Samples the mode `V_{k,l}`. Radial values use the exact evaluation
    /// path, once per radial node.
    pub fn sample_mode(grid: &'g QuadratureGrid, idx: ModeIndex) -> Self {
        let radial = RadialPolynomial::new(idx.radial_index());
        let scale = ((idx.n() + 1) as f64).sqrt();
        let m = idx.m() as f64;
        let mut values = Vec::with_capacity(grid.len());
        for &r in &grid.radial_nodes {
            let amplitude = scale * radial.eval(r).expect("grid nodes are interior");
            for j in 0..grid.n_theta {
                values.push(amplitude * Complex64::cis(m * grid.theta(j)));
            }
        }
        Self { grid, values }
    }

    pub fn from_values(grid: &'g QuadratureGrid, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), grid.len(), "value count must match the grid");
        Self { grid, values }
    }

    pub fn grid(&self) -> &'g QuadratureGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, radial: usize, angular: usize) -> Complex64 {
        self.values[radial * self.grid.n_theta + angular]
    }

    /// Largest pointwise magnitude difference against another field on the
    /// same grid.
    pub fn max_abs_diff(&self, other: &SampledField<'_>) -> Result<f64> {
        check_same_grid(self, other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

fn check_same_grid(f: &SampledField<'_>, g: &SampledField<'_>) -> Result<()> {
    if std::ptr::eq(f.grid, g.grid) || f.grid == g.grid {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// `(1/π) Σ_i w_i Σ_j Δθ f(r_i, θ_j) g(r_i, θ_j)*`, the discrete form of the
/// disk inner product. Summation order is fixed, so results are
/// reproducible across runs.
pub fn inner_product(f: &SampledField<'_>, g: &SampledField<'_>) -> Result<Complex64> {
    check_same_grid(f, g)?;
    let grid = f.grid;
    let dtheta = grid.theta_step();
    let mut total = Complex64::new(0.0, 0.0);
    for (i, &w) in grid.radial_weights.iter().enumerate() {
        let mut ring = Complex64::new(0.0, 0.0);
        let base = i * grid.n_theta;
        for j in 0..grid.n_theta {
            ring += f.values[base + j] * g.values[base + j].conj();
        }
        total += w * ring;
    }
    Ok(total * dtheta / std::f64::consts::PI)
}

/// Squared norm `(1/π) ∫∫ |f|² r dr dθ` under the same discretization.
pub fn norm_squared(f: &SampledField<'_>) -> f64 {
    inner_product(f, f).expect("same grid").re
}

/// Gauss–Legendre nodes and weights on [0, 1], weight function 1.
/// Newton iteration on the Legendre recurrence.
fn gauss_legendre_unit(q: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(q >= 1);
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    for i in 0..q.div_ceil(2) {
        // Tricomi-style initial guess for the i-th root of P_q, descending
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(q, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(q, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]; roots come out in descending order
        nodes[q - 1 - i] = 0.5 * (1.0 + x);
        weights[q - 1 - i] = 0.5 * w;
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(q: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if q == 0 {
        return (1.0, 0.0);
    }
    for j in 1..q {
        let jf = j as f64;
        let p_next = ((2.0 * jf + 1.0) * x * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let d = q as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_half() {
        for d in [0, 1, 4, 16] {
            let grid = QuadratureGrid::new(d);
            let sum: f64 = grid.radial_weights().iter().sum();
            assert!((sum - 0.5).abs() < 1e-14, "degree {d}: sum {sum}");
            assert!(grid.n_theta() >= 3);
            assert!(grid.radial_nodes().iter().all(|&r| r > 0.0 && r < 1.0));
        }
    }

    #[test]
    fn monomial_moments_exact() {
        // ∫₀¹ r^8 · r dr = 1/10 for a degree-4 grid
        let grid = QuadratureGrid::new(4);
        let got: f64 = grid
            .radial_nodes()
            .iter()
            .zip(grid.radial_weights())
            .map(|(x, w)| w * x.powi(8))
            .sum();
        assert!((got - 0.1).abs() < 1e-13);
    }

    #[test]
    fn uniform_angles_kill_low_harmonics() {
        let grid = QuadratureGrid::new(2);
        let sum: Complex64 = (0..grid.n_theta())
            .map(|j| Complex64::cis(4.0 * grid.theta(j)))
            .sum();
        assert!(sum.norm() < 1e-13);
    }

    #[test]
    fn mode_inner_products() {
        let grid = QuadratureGrid::new(4);
        let v10 = SampledField::sample_mode(&grid, ModeIndex::new(1, 0));
        let v01 = SampledField::sample_mode(&grid, ModeIndex::new(0, 1));
        let one = SampledField::from_fn(&grid, |_, _| Complex64::new(1.0, 0.0));

        let p = inner_product(&v10, &v10).unwrap();
        assert!((p - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let p = inner_product(&v10, &v01).unwrap();
        assert!(p.norm() < 1e-12);
        let p = inner_product(&one, &one).unwrap();
        assert!((p - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn orthonormality_within_band() {
        let max_degree = 6usize;
        let grid = QuadratureGrid::new(max_degree);
        let mut modes = Vec::new();
        for k in 0..=max_degree as u32 {
            for l in 0..=(max_degree as u32 - k) {
                modes.push((ModeIndex::new(k, l), SampledField::sample_mode(&grid, ModeIndex::new(k, l))));
            }
        }
        for (i1, f1) in &modes {
            for (i2, f2) in &modes {
                let p = inner_product(f1, f2).unwrap();
                let expect = if i1 == i2 { 1.0 } else { 0.0 };
                assert!(
                    (p - Complex64::new(expect, 0.0)).norm() < 1e-10,
                    "pair {i1:?} {i2:?}: {p}"
                );
            }
        }
    }

    #[test]
    fn positivity() {
        let grid = QuadratureGrid::new(5);
        let f = SampledField::from_fn(&grid, |r, t| {
            Complex64::new((3.1 * r - t).sin(), (r * t).cos())
        });
        assert!(norm_squared(&f) >= -1e-14);
    }

    #[test]
    fn grid_refinement_is_stable() {
        let d = 6;
        let coarse = QuadratureGrid::new(d);
        let fine = QuadratureGrid::with_counts(d, 2 * (d + 2), 2 * d + 3);
        let idx1 = ModeIndex::new(2, 1);
        let idx2 = ModeIndex::new(3, 0);
        let p_coarse = inner_product(
            &SampledField::sample_mode(&coarse, idx1),
            &SampledField::sample_mode(&coarse, idx2),
        )
        .unwrap();
        let p_fine = inner_product(
            &SampledField::sample_mode(&fine, idx1),
            &SampledField::sample_mode(&fine, idx2),
        )
        .unwrap();
        assert!((p_coarse - p_fine).norm() < 1e-12);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let g1 = QuadratureGrid::new(2);
        let g2 = QuadratureGrid::new(3);
        let f1 = SampledField::from_fn(&g1, |_, _| Complex64::new(1.0, 0.0));
        let f2 = SampledField::from_fn(&g2, |_, _| Complex64::new(1.0, 0.0));
        assert!(matches!(inner_product(&f1, &f2), Err(Error::GridMismatch)));
    }

    #[test]
    fn gauss_legendre_high_order_spot_check() {
        // ∫₀¹ x^39 dx with 20 nodes (exact budget 2·20−1 = 39)
        let (nodes, weights) = gauss_legendre_unit(20);
        let got: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * x.powi(39)).sum();
        assert!((got - 1.0 / 40.0).abs() < 1e-15);
    }
}
