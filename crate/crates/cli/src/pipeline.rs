//! The image → coefficients → operator → image pipeline.

use anyhow::Result;
use serde::Serialize;
use zernike_disk::ladder::{apply_operator, OperatorExpr};
use zernike_disk::transform::{analyze, parseval_gap, schwartz_norm, truncate_to_tolerance};
use zernike_disk::{CoefficientTable, QuadratureGrid};

use crate::image::{render_magnitude_image, DiskImage};

/// Knobs for one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Relative tail-energy tolerance for truncation.
    pub eps: f64,
    /// Analysis band.
    pub max_k: usize,
    pub max_l: usize,
    /// Treat pixel values as intensity |f|² instead of amplitude |f|.
    pub intensity: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { eps: 1e-4, max_k: 8, max_l: 8, intensity: false }
    }
}

/// Run summary written alongside the output image.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub parseval_gap: f64,
    pub schwartz_norm: f64,
    pub k_max: usize,
    pub l_max: usize,
    pub output_scale: f64,
}

/// Everything a run produces.
#[derive(Debug)]
pub struct PipelineOutput {
    pub output_image: DiskImage,
    /// The truncated input table the operator was applied to.
    pub input_table: CoefficientTable,
    pub output_table: CoefficientTable,
    pub report: RunReport,
}

/// Decomposes the image, truncates to the tail tolerance, applies the
/// operator to the coefficients, and re-synthesizes at the input size.
pub fn run_pipeline(
    img: &DiskImage,
    operator: &OperatorExpr,
    cfg: &PipelineConfig,
) -> Result<PipelineOutput> {
    let mut working = img.clone();
    if cfg.intensity {
        working.map_values(f64::sqrt);
    }

    let grid = QuadratureGrid::new(cfg.max_k + cfg.max_l);
    let field = working.resample(&grid);
    let table = analyze(&field, cfg.max_k, cfg.max_l)?;

    let gap = parseval_gap(&table, &field);
    let smoothness = schwartz_norm(&table);
    let (k_max, l_max) = truncate_to_tolerance(&table, cfg.eps);
    let input_table = table.truncated(k_max, l_max);

    let output_table = apply_operator(operator, &input_table);

    let (mut output_image, output_scale) =
        render_magnitude_image(&output_table, img.width(), img.height())?;
    if cfg.intensity {
        output_image.map_values(|v| v * v);
    }

    Ok(PipelineOutput {
        output_image,
        input_table,
        output_table,
        report: RunReport {
            parseval_gap: gap,
            schwartz_norm: smoothness,
            k_max,
            l_max,
            output_scale,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_operator;
    use num_complex::Complex64;

    #[test]
    fn identity_operator_reproduces_input_coefficients() {
        let img = DiskImage::from_values(128, 128, vec![1.0; 128 * 128]).unwrap();
        let op = parse_operator("1.0*").unwrap();
        let cfg = PipelineConfig { max_k: 2, max_l: 2, ..Default::default() };
        let out = run_pipeline(&img, &op, &cfg).unwrap();
        assert_eq!(out.input_table, out.output_table);
        assert!(out.report.parseval_gap < 1e-3);
    }

    #[test]
    fn raising_word_moves_the_constant_mode() {
        let img = DiskImage::from_values(128, 128, vec![1.0; 128 * 128]).unwrap();
        let op = parse_operator("A+ B+").unwrap();
        let cfg = PipelineConfig { max_k: 2, max_l: 2, ..Default::default() };
        let out = run_pipeline(&img, &op, &cfg).unwrap();
        let total = out.output_table.energy();
        let at_11 = out.output_table.get(1, 1).norm_sqr();
        assert!(at_11 / total >= 0.99, "energy share {}", at_11 / total);
    }

    #[test]
    fn intensity_mode_round_trips_values() {
        // intensity input: pixel = |f|²; constant 0.25 -> amplitude 0.5
        let img = DiskImage::from_values(96, 96, vec![0.25; 96 * 96]).unwrap();
        let op = parse_operator("1.0*").unwrap();
        let cfg = PipelineConfig { max_k: 1, max_l: 1, intensity: true, ..Default::default() };
        let out = run_pipeline(&img, &op, &cfg).unwrap();
        assert!((out.input_table.get(0, 0) - Complex64::new(0.5, 0.0)).norm() < 1e-2);
        // output image squared back: interior pixels near 0.25 / scale²-normalized
        let (w, h) = (out.output_image.width(), out.output_image.height());
        let center = out.output_image.value(w / 2, h / 2);
        assert!((center - 1.0).abs() < 1e-2, "center {center}");
    }
}
