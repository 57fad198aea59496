//! Grayscale enhancement front end for 8-bit PGM images.
//!
//! Three subcommands: `stats` prints bounds, moments, the two-value summary
//! and both optimal gains; `enhance` applies the dynamic, mean or a manual
//! gain and writes the result; `curve` samples the range objective over a
//! gain grid as CSV for external plotting.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 I/O or parse
//! failure, 3 degenerate math (constant input, out-of-domain bounds).

mod report;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use liprange::{image, moments, pnm, range, GrayImage, LipContext, Sweep};
use report::{key_value_block, sig6};

#[derive(Parser, Debug)]
#[command(name = "liprange", version, about = "Optimal gamma-like enhancement for grayscale PGM images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Gray-scale ceiling M of the logarithmic model.
    #[arg(long, default_value_t = 256.0)]
    model_max: f64,

    /// Dequantization offset: code p maps to gray level p + offset.
    #[arg(long, default_value_t = 0.5)]
    offset: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print bounds, moments, the two-value summary and both optimal gains.
    Stats {
        /// Input PGM file (P2 or P5).
        input: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Enhance an image and write it as PGM.
    Enhance {
        /// Input PGM file (P2 or P5).
        input: PathBuf,
        /// Output PGM file.
        #[arg(short, long)]
        output: PathBuf,
        /// Gain selection: the image bounds, the moment summary, or a fixed value.
        #[arg(long, value_enum)]
        method: Method,
        /// Gain for --method manual.
        #[arg(long)]
        lambda: Option<f64>,
        /// Output encoding.
        #[arg(long, value_enum, default_value_t = Format::P5)]
        format: Format,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Write range-vs-gain samples as CSV.
    Curve {
        /// Input PGM file (P2 or P5).
        input: PathBuf,
        /// Output CSV file.
        #[arg(short, long)]
        output: PathBuf,
        /// Which value pair to sweep: the image bounds or the moment summary.
        #[arg(long, value_enum)]
        method: CurveMethod,
        /// Lowest gain of the sweep.
        #[arg(long)]
        lambda_min: f64,
        /// Highest gain of the sweep.
        #[arg(long)]
        lambda_max: f64,
        /// Number of evenly spaced samples, endpoints included.
        #[arg(long)]
        steps: u32,
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Dynamic,
    Mean,
    Manual,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CurveMethod {
    Dynamic,
    Mean,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    P2,
    P5,
}

enum CliError {
    /// Bad flags or configuration; exit 1.
    Usage(String),
    /// Unreadable, unwritable or unparsable input; exit 2.
    Io(String),
    /// The math has nothing to optimize; exit 3.
    Math(liprange::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Math(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Math(_) => 3,
        }
    }
}

impl From<liprange::Error> for CliError {
    fn from(e: liprange::Error) -> Self {
        use liprange::Error::*;
        match e {
            Parse { .. } | Unsupported { .. } => CliError::Io(e.to_string()),
            DegenerateRange { .. }
            | ZeroVariance { .. }
            | OutOfDomain { .. }
            | AtPixel { .. }
            | HomothetyOverflow { .. }
            | ProductOverflow { .. } => CliError::Math(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version arrive here too and must stay exit 0.
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = err.print();
                return ExitCode::SUCCESS;
            }
            let _ = err.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("liprange: {err}");
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Stats { input, model } => {
            let (ctx, gray) = load(&input, &model)?;
            print!("{}", stats_report(&ctx, &gray));
            Ok(())
        }
        Command::Enhance {
            input,
            output,
            method,
            lambda,
            format,
            model,
        } => {
            let (ctx, gray) = load(&input, &model)?;
            let (out, method_name, report) = enhance(&ctx, &gray, method, lambda)?;
            let raw = pnm::quantize(&out, model.offset)?;
            let format = match format {
                Format::P2 => pnm::PgmFormat::P2,
                Format::P5 => pnm::PgmFormat::P5,
            };
            write_file(&output, &pnm::write_pgm(&raw, format))?;
            print!(
                "{}",
                key_value_block(&[
                    ("lambda", sig6(report.lambda)),
                    ("method", method_name.to_string()),
                    ("range_after", sig6(report.range_after)),
                    ("range_before", sig6(report.range_before)),
                ])
            );
            Ok(())
        }
        Command::Curve {
            input,
            output,
            method,
            lambda_min,
            lambda_max,
            steps,
            model,
        } => {
            let (ctx, gray) = load(&input, &model)?;
            let sweep = Sweep::new(lambda_min, lambda_max, steps)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let (lower, upper) = match method {
                CurveMethod::Dynamic => {
                    let b = image::bounds(&gray);
                    (b.lower, b.upper)
                }
                CurveMethod::Mean => {
                    let stats = moments::image_stats(&gray);
                    let summary = moments::two_value_summary(&ctx, &stats)?;
                    (summary.lower, summary.upper)
                }
            };
            let samples = range::curve(&ctx, lower, upper, &sweep)?;
            let mut csv = String::from("lambda,range\n");
            for s in &samples {
                csv.push_str(&format!("{:.6},{:.6}\n", s.lambda, s.range));
            }
            write_file(&output, csv.as_bytes())
        }
    }
}

fn load(input: &Path, model: &ModelArgs) -> Result<(LipContext, GrayImage), CliError> {
    let ctx = LipContext::new(model.model_max).map_err(|e| CliError::Usage(e.to_string()))?;
    let bytes = std::fs::read(input)
        .map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
    let raw = pnm::read_pgm(&bytes)?;
    let gray = pnm::dequantize(&ctx, &raw, model.offset).map_err(|e| match e {
        e @ (liprange::Error::InvalidOffset { .. }
        | liprange::Error::QuantizationHeadroom { .. }) => CliError::Usage(e.to_string()),
        other => other.into(),
    })?;
    Ok((ctx, gray))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn enhance(
    ctx: &LipContext,
    gray: &GrayImage,
    method: Method,
    lambda: Option<f64>,
) -> Result<(GrayImage, &'static str, range::GainReport), CliError> {
    match method {
        Method::Manual => {
            let lambda = lambda.ok_or_else(|| {
                CliError::Usage("--method manual requires --lambda".to_string())
            })?;
            if !(lambda.is_finite() && lambda > 0.0) {
                return Err(CliError::Usage(format!(
                    "--lambda must be a positive real, got {lambda}"
                )));
            }
            let range_before = image::dynamic_range(gray);
            let out = image::scalar_mul(ctx, lambda, gray)?;
            let range_after = image::dynamic_range(&out);
            let report = range::GainReport {
                method: range::GainMethod::Dynamic,
                lambda,
                range_before,
                range_after,
            };
            Ok((out, "manual", report))
        }
        _ if lambda.is_some() => Err(CliError::Usage(
            "--lambda only applies to --method manual".to_string(),
        )),
        Method::Dynamic => {
            let (out, report) = range::enhance(ctx, gray)?;
            Ok((out, "dynamic", report))
        }
        Method::Mean => {
            let (out, report, _) = moments::enhance(ctx, gray)?;
            Ok((out, "mean", report))
        }
    }
}

/// The flat `key = value` stats report, keys in byte order. Values whose
/// preconditions fail carry a named marker instead of a number.
fn stats_report(ctx: &LipContext, gray: &GrayImage) -> String {
    let bounds = image::bounds(gray);
    let stats = moments::image_stats(gray);
    let summary = moments::two_value_summary(ctx, &stats);
    let dynamic_gain = range::optimal_gain(ctx, bounds.lower, bounds.upper);
    let mean_gain = summary
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|s| range::optimal_gain(ctx, s.lower, s.upper));

    let value = |r: &Result<f64, liprange::Error>| match r {
        Ok(v) => sig6(*v),
        Err(e) => marker(e).to_string(),
    };
    let from_summary = |f: &dyn Fn(&moments::TwoValueSummary) -> f64| {
        value(&summary.as_ref().map(f).map_err(Clone::clone))
    };

    key_value_block(&[
        ("D_m", from_summary(&moments::mean_dynamic_range)),
        ("D_t", sig6(image::dynamic_range(gray))),
        ("M", sig6(ctx.max())),
        ("f_i", sig6(bounds.lower.value())),
        ("f_s", sig6(bounds.upper.value())),
        ("height", gray.height().to_string()),
        ("lambda_m", value(&mean_gain)),
        ("lambda_t", value(&dynamic_gain)),
        ("m1", sig6(stats.m1)),
        ("m2", sig6(stats.m2)),
        ("m3", sig6(stats.m3)),
        ("mu_cubed", sig6(stats.third_central)),
        ("p_i", from_summary(&|s| s.p_lower)),
        ("p_s", from_summary(&|s| s.p_upper)),
        ("sigma_sq", sig6(stats.variance)),
        ("v_i", from_summary(&|s| s.lower.value())),
        ("v_s", from_summary(&|s| s.upper.value())),
        ("width", gray.width().to_string()),
    ])
}

fn marker(e: &liprange::Error) -> &'static str {
    match e {
        liprange::Error::DegenerateRange { .. } => "degenerate-range",
        liprange::Error::ZeroVariance { .. } => "zero-variance",
        liprange::Error::OutOfDomain { .. } => "out-of-domain",
        _ => "error",
    }
}
