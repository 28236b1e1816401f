//! Raster images restricted to the inscribed disk, and the maps between
//! pixel space and the (r, θ) domain.
//!
//! Pixel (i, j) of a W×H image maps to
//!
//! ```text
//! x = (2i − (W−1)) / (min(W,H) − 1),    y = (2j − (H−1)) / (min(W,H) − 1)
//! ```
//!
//! so the largest inscribed circle, centered at ((W−1)/2, (H−1)/2), becomes
//! the closed unit disk. The mask covers exactly the pixels whose centers
//! land inside it; everything else reads as zero.

use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use zernike_disk::transform::CoefficientTable;
use zernike_disk::zernike::{ModeIndex, RadialPolynomial};
use zernike_disk::{QuadratureGrid, SampledField};

/// Grayscale image with values in [0, 1] and the inscribed-disk mask.
#[derive(Debug, Clone)]
pub struct DiskImage {
    width: usize,
    height: usize,
    values: Vec<f64>,
    mask: Vec<bool>,
}

impl DiskImage {
    /// Wraps row-major pixel values (index j·width + i).
    pub fn from_values(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width < 2 || height < 2 {
            bail!("image must be at least 2x2, got {width}x{height}");
        }
        if values.len() != width * height {
            bail!("expected {} pixel values, got {}", width * height, values.len());
        }
        if values.iter().any(|v| !v.is_finite()) {
            bail!("pixel values must be finite");
        }
        let mut mask = vec![false; width * height];
        for j in 0..height {
            for i in 0..width {
                let (x, y) = pixel_center(width, height, i as f64, j as f64);
                mask[j * width + i] = x * x + y * y <= 1.0;
            }
        }
        Ok(Self { width, height, values, mask })
    }

    /// Loads a grayscale-convertible raster and normalizes luminance to
    /// [0, 1] (8-bit by 255, 16-bit by 65535).
    pub fn load(path: &Path) -> Result<Self> {
        let dynamic = image::open(path).with_context(|| format!("cannot read {}", path.display()))?;
        let (width, height) = (dynamic.width() as usize, dynamic.height() as usize);
        let values: Vec<f64> = match dynamic {
            image::DynamicImage::ImageLuma8(buf) => {
                buf.into_raw().into_iter().map(|v| v as f64 / 255.0).collect()
            }
            other => other
                .into_luma16()
                .into_raw()
                .into_iter()
                .map(|v| v as f64 / 65535.0)
                .collect(),
        };
        Self::from_values(width, height, values)
    }

    /// Writes 16-bit grayscale; the format follows the file extension
    /// (.pgm and .png are always available).
    pub fn save(&self, path: &Path) -> Result<()> {
        let raw: Vec<u16> = self
            .values
            .iter()
            .map(|v| (v.clamp(0.0, 1.0) * 65535.0).round() as u16)
            .collect();
        let buf = image::ImageBuffer::<image::Luma<u16>, _>::from_raw(
            self.width as u32,
            self.height as u32,
            raw,
        )
        .expect("buffer sized to the image");
        buf.save(path)
            .with_context(|| format!("cannot write {}", path.display()))?;
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.width + i]
    }

    pub fn masked(&self, i: usize, j: usize) -> bool {
        self.mask[j * self.width + i]
    }

    /// Value for interpolation: zero outside bounds or off the mask.
    fn sample_or_zero(&self, i: i64, j: i64) -> f64 {
        if i < 0 || j < 0 || i >= self.width as i64 || j >= self.height as i64 {
            return 0.0;
        }
        let (i, j) = (i as usize, j as usize);
        if self.mask[j * self.width + i] {
            self.values[j * self.width + i]
        } else {
            0.0
        }
    }

    /// Applies `f` to every pixel value (e.g. the amplitude/intensity map).
    pub fn map_values(&mut self, f: impl Fn(f64) -> f64) {
        for v in &mut self.values {
            *v = f(*v);
        }
    }

    /// Bilinear interpolation of the image at every grid node, mapped back
    /// through the pixel transform. Outside-mask reads clamp to zero.
    pub fn resample<'g>(&self, grid: &'g QuadratureGrid) -> SampledField<'g> {
        let scale = (self.width.min(self.height) - 1) as f64;
        SampledField::from_fn(grid, |r, theta| {
            let x = r * theta.cos();
            let y = r * theta.sin();
            let px = (x * scale + (self.width as f64 - 1.0)) / 2.0;
            let py = (y * scale + (self.height as f64 - 1.0)) / 2.0;
            let i0 = px.floor();
            let j0 = py.floor();
            let fx = px - i0;
            let fy = py - j0;
            let (i0, j0) = (i0 as i64, j0 as i64);
            let v = (1.0 - fx) * (1.0 - fy) * self.sample_or_zero(i0, j0)
                + fx * (1.0 - fy) * self.sample_or_zero(i0 + 1, j0)
                + (1.0 - fx) * fy * self.sample_or_zero(i0, j0 + 1)
                + fx * fy * self.sample_or_zero(i0 + 1, j0 + 1);
            Complex64::new(v, 0.0)
        })
    }
}

/// Pixel-center coordinates on the unit-disk chart.
pub fn pixel_center(width: usize, height: usize, i: f64, j: f64) -> (f64, f64) {
    let scale = (width.min(height) - 1) as f64;
    (
        (2.0 * i - (width as f64 - 1.0)) / scale,
        (2.0 * j - (height as f64 - 1.0)) / scale,
    )
}

/// Evaluates the mode sum of a coefficient table at every pixel center
/// inside the disk; off-mask pixels stay zero.
pub fn render_field(table: &CoefficientTable, width: usize, height: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); width * height];
    let modes: Vec<(Complex64, f64, f64, RadialPolynomial)> = table
        .iter()
        .filter(|(_, _, v)| v.norm_sqr() > 0.0)
        .map(|(k, l, v)| {
            let idx = ModeIndex::new(k as u32, l as u32);
            let scale = ((idx.n() + 1) as f64).sqrt();
            (v, scale, idx.m() as f64, RadialPolynomial::new(idx.radial_index()))
        })
        .collect();
    for j in 0..height {
        for i in 0..width {
            let (x, y) = pixel_center(width, height, i as f64, j as f64);
            let rsq = x * x + y * y;
            if rsq > 1.0 {
                continue;
            }
            let r = rsq.sqrt();
            let theta = y.atan2(x);
            let mut acc = Complex64::new(0.0, 0.0);
            for (coeff, scale, m, radial) in &modes {
                acc += coeff * scale * radial.eval_f64(r) * Complex64::cis(m * theta);
            }
            out[j * width + i] = acc;
        }
    }
    out
}

/// Renders the magnitude of the mode sum, normalized by its maximum, as an
/// image. Returns the image and the normalization scale (1 for an all-zero
/// table).
pub fn render_magnitude_image(
    table: &CoefficientTable,
    width: usize,
    height: usize,
) -> Result<(DiskImage, f64)> {
    let field = render_field(table, width, height);
    let magnitudes: Vec<f64> = field.iter().map(|v| v.norm()).collect();
    let peak = magnitudes.iter().cloned().fold(0.0, f64::max);
    let scale = if peak > 0.0 { peak } else { 1.0 };
    let values = magnitudes.iter().map(|v| (v / scale).clamp(0.0, 1.0)).collect();
    let img = DiskImage::from_values(width, height, values)?;
    Ok((img, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use zernike_disk::transform::analyze;

    #[test]
    fn uniform_white_is_all_ones_on_mask() {
        let img = DiskImage::from_values(64, 64, vec![1.0; 64 * 64]).unwrap();
        for j in 0..64 {
            for i in 0..64 {
                if img.masked(i, j) {
                    assert_eq!(img.value(i, j), 1.0);
                }
            }
        }
        // corners are off the disk
        assert!(!img.masked(0, 0));
        assert!(!img.masked(63, 63));
        // center is on it
        assert!(img.masked(31, 31));
    }

    #[test]
    fn two_by_two_mask_geometry() {
        // centers map to (±1, ±1): r = √2, all outside the closed disk
        let img = DiskImage::from_values(2, 2, vec![1.0; 4]).unwrap();
        for j in 0..2 {
            for i in 0..2 {
                assert!(!img.masked(i, j));
            }
        }
        // 3x3: the four edge-midpoints and the center are inside
        let img = DiskImage::from_values(3, 3, vec![1.0; 9]).unwrap();
        let inside: usize = (0..3)
            .flat_map(|j| (0..3).map(move |i| (i, j)))
            .filter(|&(i, j)| img.masked(i, j))
            .count();
        assert_eq!(inside, 5);
    }

    #[test]
    fn constant_image_resamples_to_constant_field() {
        let img = DiskImage::from_values(128, 128, vec![0.75; 128 * 128]).unwrap();
        let grid = QuadratureGrid::new(2);
        let field = img.resample(&grid);
        for v in field.values() {
            assert!((v - Complex64::new(0.75, 0.0)).norm() < 1e-12);
        }
        let black = DiskImage::from_values(32, 32, vec![0.0; 32 * 32]).unwrap();
        let field = black.resample(&grid);
        assert!(field.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn tilt_image_resamples_within_interpolation_error() {
        let (w, h) = (256, 256);
        let mut values = vec![0.0; w * h];
        for j in 0..h {
            for i in 0..w {
                let (x, _) = pixel_center(w, h, i as f64, j as f64);
                values[j * w + i] = 0.5 + 0.4 * x; // 0.5 + 0.4 r cosθ
            }
        }
        let img = DiskImage::from_values(w, h, values).unwrap();
        let grid = QuadratureGrid::new(2);
        let field = img.resample(&grid);
        let bound = 2.0 / w.min(h) as f64;
        let mut worst = 0.0f64;
        for (i, &r) in grid.radial_nodes().iter().enumerate() {
            for j in 0..grid.n_theta() {
                let expect = 0.5 + 0.4 * r * grid.theta(j).cos();
                worst = worst.max((field.value(i, j) - Complex64::new(expect, 0.0)).norm());
            }
        }
        assert!(worst < bound, "interpolation error {worst} above {bound}");
    }

    #[test]
    fn rendered_mode_analyzes_back_to_itself() {
        // draw |V_{1,1}| = √3 |2r²−1| scaled into [0,1]; the underlying
        // signed field is recovered through the pure-mode table instead
        let table = CoefficientTable::from_entries(&[(1, 1, Complex64::new(0.5, 0.0))]);
        let field = render_field(&table, 256, 256);
        // spot-check against the closed form
        let (x, y) = pixel_center(256, 256, 128.0, 128.0);
        let r2 = x * x + y * y;
        let expect = 0.5 * 3f64.sqrt() * (2.0 * r2 - 1.0);
        assert!((field[128 * 256 + 128].re - expect).abs() < 1e-12);

        // positive rendering round trip: constant + mode, stays in [0,1]
        let table = CoefficientTable::from_entries(&[
            (0, 0, Complex64::new(0.55, 0.0)),
            (1, 1, Complex64::new(-0.1, 0.0)),
        ]);
        let field = render_field(&table, 256, 256);
        let values: Vec<f64> = field.iter().map(|v| v.re).collect();
        assert!(values.iter().all(|&v| (0.0..=1.0).contains(&v)));
        let img = DiskImage::from_values(256, 256, values).unwrap();
        let grid = QuadratureGrid::new(4);
        let got = analyze(&img.resample(&grid), 2, 2).unwrap();
        assert!((got.get(0, 0).re - 0.55).abs() < 5e-4);
        assert!((got.get(1, 1).re + 0.1).abs() < 5e-4);
    }

    #[test]
    fn degenerate_images_rejected() {
        assert!(DiskImage::from_values(1, 8, vec![0.0; 8]).is_err());
        assert!(DiskImage::from_values(4, 4, vec![0.0; 3]).is_err());
        assert!(DiskImage::from_values(4, 4, vec![f64::NAN; 16]).is_err());
    }
}
