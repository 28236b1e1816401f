use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use zernike_disk::transform::CoefficientTable;
use zernike_disk::verify::{run_suite, VerifyConfig};
use zernike_disk::QuadratureGrid;
use zernike_disk_cli::image::render_magnitude_image;
use zernike_disk_cli::{parse_operator, run_pipeline, DiskImage, PipelineConfig};

/// Images on the unit disk in the Zernike mode basis: decompose, transform
/// with ladder-operator expressions, synthesize.
#[derive(Parser)]
#[command(name = "zdisk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose an image into mode coefficients and write them as CSV.
    Analyze {
        img: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_k: usize,
        #[arg(long, default_value_t = 8)]
        max_l: usize,
        #[arg(long, default_value = "coeffs.csv")]
        out: PathBuf,
        /// Treat pixel values as intensity |f|² (take a square root first).
        #[arg(long)]
        intensity: bool,
    },
    /// Render a coefficient CSV back to an image.
    Synthesize {
        coeffs: PathBuf,
        /// Output raster size, e.g. 256x256.
        #[arg(long, default_value = "256x256")]
        size: String,
        #[arg(long, default_value = "out.pgm")]
        out: PathBuf,
        /// Square the magnitudes on output (intensity convention).
        #[arg(long)]
        intensity: bool,
    },
    /// Decompose, apply an operator expression, and re-synthesize.
    Apply {
        img: PathBuf,
        /// Operator expression, e.g. "A+ B+" or "2.0*A3 - 0.5*".
        #[arg(long)]
        op: String,
        /// Relative tail-energy tolerance for truncation.
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[arg(long, default_value = "out.pgm")]
        out: PathBuf,
        #[arg(long, default_value = "report.json")]
        report: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_k: usize,
        #[arg(long, default_value_t = 8)]
        max_l: usize,
        #[arg(long)]
        intensity: bool,
        /// Where to write the truncated input coefficients
        /// (default: <out>.in.csv).
        #[arg(long)]
        in_coeffs: Option<PathBuf>,
        /// Where to write the output coefficients (default: <out>.out.csv).
        #[arg(long)]
        out_coeffs: Option<PathBuf>,
    },
    /// Per-mode magnitude and energy of a coefficient CSV.
    Spectrum {
        coeffs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the numerical verification suite.
    Verify {
        /// Largest mode index exercised by the checks.
        #[arg(long, default_value_t = 8)]
        max_index: u32,
        /// Override every check's tolerance with one value.
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze { img, max_k, max_l, out, intensity } => {
            let mut image = DiskImage::load(&img)?;
            if intensity {
                image.map_values(f64::sqrt);
            }
            let grid = QuadratureGrid::new(max_k + max_l);
            let field = image.resample(&grid);
            let table = zernike_disk::transform::analyze(&field, max_k, max_l)?;
            write_table(&table, &out)?;
            println!(
                "analyzed {} -> {} ({}x{} coefficients, parseval gap {:.3e})",
                img.display(),
                out.display(),
                max_k + 1,
                max_l + 1,
                zernike_disk::transform::parseval_gap(&table, &field),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Synthesize { coeffs, size, out, intensity } => {
            let table = read_table(&coeffs)?;
            let (width, height) = parse_size(&size)?;
            let (mut image, scale) = render_magnitude_image(&table, width, height)?;
            if intensity {
                image.map_values(|v| v * v);
            }
            image.save(&out)?;
            println!(
                "synthesized {} -> {} ({}x{}, peak magnitude {:.6e})",
                coeffs.display(),
                out.display(),
                width,
                height,
                scale,
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Apply {
            img,
            op,
            eps,
            out,
            report,
            max_k,
            max_l,
            intensity,
            in_coeffs,
            out_coeffs,
        } => {
            let expr = parse_operator(&op)?;
            let image = DiskImage::load(&img)?;
            let cfg = PipelineConfig { eps, max_k, max_l, intensity };
            let result = run_pipeline(&image, &expr, &cfg)?;

            result.output_image.save(&out)?;
            let in_path = in_coeffs.unwrap_or_else(|| suffixed(&out, "in.csv"));
            let out_path = out_coeffs.unwrap_or_else(|| suffixed(&out, "out.csv"));
            write_table(&result.input_table, &in_path)?;
            write_table(&result.output_table, &out_path)?;
            let json = serde_json::to_string_pretty(&result.report)?;
            std::fs::write(&report, json.as_bytes())
                .with_context(|| format!("cannot write {}", report.display()))?;

            println!(
                "applied \"{op}\" to {}: truncated to ({}, {}), output scale {:.6e}",
                img.display(),
                result.report.k_max,
                result.report.l_max,
                result.report.output_scale,
            );
            println!("wrote {}, {}, {}, {}", out.display(), in_path.display(), out_path.display(), report.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectrum { coeffs, out } => {
            let table = read_table(&coeffs)?;
            let file = File::create(&out).with_context(|| format!("cannot write {}", out.display()))?;
            let mut w = BufWriter::new(file);
            writeln!(w, "k,l,magnitude,energy")?;
            for (k, l, v) in table.iter() {
                writeln!(w, "{k},{l},{:.16e},{:.16e}", v.norm(), v.norm_sqr())?;
            }
            println!("spectrum of {} -> {}", coeffs.display(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { max_index, tol } => {
            let cfg = VerifyConfig {
                max_index,
                tolerance_override: tol,
                ..Default::default()
            };
            let reports = run_suite(&cfg);
            let mut passed = 0;
            for r in &reports {
                println!(
                    "{}: {} (max defect {:.3e}, tolerance {:.1e})",
                    r.name,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.max_defect,
                    r.tolerance,
                );
                if r.passed {
                    passed += 1;
                }
            }
            println!("{passed}/{} checks passed", reports.len());
            if passed == reports.len() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
    }
}

fn write_table(table: &CoefficientTable, path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    let mut w = BufWriter::new(file);
    table.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn read_table(path: &Path) -> Result<CoefficientTable> {
    let file = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(CoefficientTable::read_csv(BufReader::new(file))?)
}

fn parse_size(size: &str) -> Result<(usize, usize)> {
    let (w, h) = size
        .split_once(['x', 'X'])
        .with_context(|| format!("size must look like 256x256, got {size:?}"))?;
    let width: usize = w.trim().parse().context("bad width")?;
    let height: usize = h.trim().parse().context("bad height")?;
    if width < 2 || height < 2 {
        bail!("size must be at least 2x2");
    }
    Ok((width, height))
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_stem().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(suffix);
    path.with_file_name(name)
}
