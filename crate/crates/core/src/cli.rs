//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or invalid parameters, 2 I/O or malformed
//! input, 3 detection failure(s).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algorithm::{AlgoParams, Algorithm};
use crate::cdf::CdfParams;
use crate::ea::{canny, EaParams};
use crate::error::Error;
use crate::eval::{
    derive_roi, dmax_sweep, efficiency_table, load_bioid, mix_seed, read_eye_file, run_benchmark,
    run_benchmark_timed, synth_face, write_eye_file, EfficiencyCurve, EvalRecord, RoiPolicy,
    SynthFaceSpec, DEFAULT_DMAX_LEVELS,
};
use crate::image::Region;
use crate::pf::PfParams;
use crate::pgm::{read_pgm, write_pgm};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_DETECTION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pupiloc",
    version,
    about = "Eye pupil localization and benchmarking"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Locate the pupil in one image region
    Locate(LocateArgs),
    /// Benchmark the algorithms on a BioID-style dataset
    Bench(BenchArgs),
    /// Dense efficiency curve (d_max from 0 to 0.3 in 0.005 steps)
    Curve(CurveArgs),
    /// Write a synthetic BioID-style dataset
    Synth(SynthArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgoChoice {
    Cdf,
    Pf,
    Ea,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct AlgoArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub algo: AlgoChoice,
    /// CDF binarization quantile
    #[arg(long, default_value_t = 0.05)]
    pub quantile: f64,
    /// GPF blend weight of the variance projection
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// PF derivative threshold as a fraction of the peak derivative
    #[arg(long = "pf-k", default_value_t = 0.5)]
    pub pf_k: f64,
    /// Gaussian blur sigma before edge detection
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Canny weak threshold as a multiple of mean luminosity
    #[arg(long = "canny-low", default_value_t = 1.5)]
    pub canny_low: f64,
    /// Canny strong threshold as a multiple of mean luminosity
    #[arg(long = "canny-high", default_value_t = 2.0)]
    pub canny_high: f64,
    /// Minimum separation of the EA boundary lines in pixels
    #[arg(long = "min-sep", default_value_t = 7)]
    pub min_sep: usize,
    /// Minimum separation as a fraction of the region side
    #[arg(long = "min-sep-frac", default_value_t = 0.23)]
    pub min_sep_frac: f64,
}

impl AlgoArgs {
    pub fn algorithms(&self) -> Vec<Algorithm> {
        match self.algo {
            AlgoChoice::Cdf => vec![Algorithm::Cdf],
            AlgoChoice::Pf => vec![Algorithm::Pf],
            AlgoChoice::Ea => vec![Algorithm::Ea],
            AlgoChoice::All => Algorithm::ALL.to_vec(),
        }
    }

    pub fn params(&self) -> AlgoParams {
        AlgoParams {
            cdf: CdfParams {
                quantile: self.quantile,
                ..CdfParams::default()
            },
            pf: PfParams {
                alpha: self.alpha,
                threshold_factor: self.pf_k,
                ..PfParams::default()
            },
            ea: EaParams {
                sigma: self.sigma,
                low_factor: self.canny_low,
                high_factor: self.canny_high,
                min_separation_base: self.min_sep,
                min_separation_fraction: self.min_sep_frac,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct RoiArgs {
    /// Eye region side as a fraction of the interocular distance
    #[arg(long = "roi-scale", default_value_t = 0.4)]
    pub roi_scale: f64,
    /// Maximum eye region offset as a fraction of its side
    #[arg(long, default_value_t = 0.1)]
    pub jitter: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl RoiArgs {
    fn policy(&self) -> RoiPolicy {
        RoiPolicy {
            scale: self.roi_scale,
            jitter: self.jitter,
        }
    }
}

#[derive(Debug, Args)]
pub struct LocateArgs {
    /// P5 PGM image
    pub image: PathBuf,
    /// Explicit region as x,y,width,height
    #[arg(long, value_parser = parse_region, conflicts_with = "eye")]
    pub roi: Option<Region>,
    /// BioID .eye file; regions are derived from the annotated pupils
    #[arg(long, required_unless_present = "roi")]
    pub eye: Option<PathBuf>,
    #[command(flatten)]
    pub algo: AlgoArgs,
    #[command(flatten)]
    pub roi_args: RoiArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write predictions here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Dump the Canny edge map of each region as PGM with this path prefix
    #[arg(long = "edge-dump")]
    pub edge_dump: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of <name>.pgm / <name>.eye pairs
    pub dataset: PathBuf,
    #[command(flatten)]
    pub algo: AlgoArgs,
    #[command(flatten)]
    pub roi_args: RoiArgs,
    /// Comma-separated ascending d_max levels for the summary table
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_DMAX_LEVELS.to_vec())]
    pub dmax: Vec<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output directory for records and summary files
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add per-eye wall-time columns (runs sequentially)
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    pub dataset: PathBuf,
    #[command(flatten)]
    pub algo: AlgoArgs,
    #[command(flatten)]
    pub roi_args: RoiArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Output directory (created if missing)
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 384)]
    pub width: usize,
    #[arg(long, default_value_t = 286)]
    pub height: usize,
    #[arg(long, default_value_t = 100.0)]
    pub interocular: f64,
    #[arg(long = "iris-radius", default_value_t = 7.0)]
    pub iris_radius: f64,
    #[arg(long = "pupil-radius", default_value_t = 3.2)]
    pub pupil_radius: f64,
    /// Fraction of the iris covered by the upper eyelid
    #[arg(long, default_value_t = 0.1)]
    pub eyelid: f64,
    /// Standard deviation of additive Gaussian noise
    #[arg(long, default_value_t = 4.0)]
    pub noise: f64,
}

fn parse_region(s: &str) -> Result<Region, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("expected x,y,width,height: {e}"))?;
    match parts[..] {
        [x, y, w, h] => Region::new(x, y, w, h).map_err(|e| e.to_string()),
        _ => Err(format!(
            "expected 4 comma-separated integers, got {}",
            parts.len()
        )),
    }
}

/// A failure that ends the command with a specific exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidParams(_) | Error::InvalidSpec(_) => EXIT_USAGE,
            e if e.is_detection_failure() => EXIT_DETECTION,
            Error::NoEvaluatedRecords(_) => EXIT_DETECTION,
            _ => EXIT_IO,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let result = match cli.command {
        Command::Locate(args) => cmd_locate(&args, stdout),
        Command::Bench(args) => cmd_bench(&args, stdout, stderr),
        Command::Curve(args) => cmd_curve(&args, stdout),
        Command::Synth(args) => cmd_synth(&args, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

#[derive(Serialize)]
struct LocateLine {
    algo: &'static str,
    x: Option<f64>,
    y: Option<f64>,
    status: &'static str,
}

/// Prints `algo,x,y,status` per algorithm. With `--eye`, each algorithm
/// gets a line for the left region followed by one for the right region.
pub fn cmd_locate(args: &LocateArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let params = args.algo.params();
    params.validate()?;
    let img = read_pgm(&args.image)?;
    let rois = match (&args.roi, &args.eye) {
        (Some(roi), _) => {
            roi.check_within(&img)?;
            vec![*roi]
        }
        (None, Some(eye)) => {
            let annotation = read_eye_file(eye)?;
            let policy = args.roi_args.policy();
            policy.validate()?;
            let (l, r) = derive_roi(
                &annotation,
                img.width(),
                img.height(),
                &policy,
                args.roi_args.seed,
            )?;
            vec![l, r]
        }
        (None, None) => return Err(CliError::usage("either --roi or --eye is required")),
    };

    if let Some(prefix) = &args.edge_dump {
        for (i, roi) in rois.iter().enumerate() {
            let edges = canny(&img, roi, &params.ea)?;
            let path = PathBuf::from(format!("{}_{i}.pgm", prefix.display()));
            write_pgm(&path, &edges.to_image())?;
        }
    }

    let mut lines = Vec::new();
    let mut any_failed = false;
    for algorithm in args.algo.algorithms() {
        for roi in &rois {
            let line = match algorithm.locate(&img, roi, &params) {
                Ok(est) => LocateLine {
                    algo: algorithm.as_str(),
                    x: Some(est.x),
                    y: Some(est.y),
                    status: "ok",
                },
                Err(e) if e.is_detection_failure() => {
                    any_failed = true;
                    LocateLine {
                        algo: algorithm.as_str(),
                        x: None,
                        y: None,
                        status: e.code(),
                    }
                }
                Err(e) => return Err(e.into()),
            };
            lines.push(line);
        }
    }

    let text = match args.format {
        Format::Csv => lines
            .iter()
            .map(|l| {
                format!(
                    "{},{},{},{}\n",
                    l.algo,
                    fmt_opt(l.x, 2),
                    fmt_opt(l.y, 2),
                    l.status
                )
            })
            .collect(),
        Format::Json => json(&lines)?,
    };
    emit(args.out.as_deref(), &text, stdout)?;
    Ok(if any_failed { EXIT_DETECTION } else { EXIT_OK })
}

pub fn cmd_bench(
    args: &BenchArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let params = args.algo.params();
    params.validate()?;
    let policy = args.roi_args.policy();
    policy.validate()?;
    validate_dmax(&args.dmax)?;
    let dataset = load_bioid(&args.dataset)?;
    if dataset.is_empty() {
        return Err(CliError {
            code: EXIT_IO,
            message: format!("{}: no .pgm images found", args.dataset.display()),
        });
    }
    let algorithms = args.algo.algorithms();

    let (records, timings) = if args.timing {
        let timed =
            run_benchmark_timed(&dataset, &algorithms, &policy, &params, args.roi_args.seed);
        let timings: Vec<(Duration, Duration)> =
            timed.iter().map(|t| (t.left_time, t.right_time)).collect();
        (timed.into_iter().map(|t| t.record).collect(), Some(timings))
    } else {
        (
            run_benchmark(&dataset, &algorithms, &policy, &params, args.roi_args.seed),
            None,
        )
    };
    let table = efficiency_table(&records, &args.dmax);

    let records_text = match args.format {
        Format::Csv => records_csv(&records, timings.as_deref()),
        Format::Json => json(&records)?,
    };
    let summary_text = match (&table, args.format) {
        (Ok(curves), Format::Csv) => Some(summary_csv(curves)),
        (Ok(curves), Format::Json) => Some(json(curves)?),
        (Err(_), _) => None,
    };

    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
            let ext = match args.format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            write_file(&dir.join(format!("records.{ext}")), &records_text)?;
            if let Some(summary) = &summary_text {
                write_file(&dir.join(format!("summary.{ext}")), summary)?;
            }
        }
        None => {
            write_out(stdout, &records_text)?;
            if let Some(summary) = &summary_text {
                write_out(stdout, "\n")?;
                write_out(stdout, summary)?;
            }
        }
    }

    if let Some(timings) = &timings {
        for algorithm in &algorithms {
            let mut per_eye: Vec<f64> = records
                .iter()
                .zip(timings.iter())
                .filter(|(r, _)| r.algorithm == *algorithm)
                .flat_map(|(_, (l, r))| [l.as_secs_f64() * 1e3, r.as_secs_f64() * 1e3])
                .collect();
            if let Some(median) = median(&mut per_eye) {
                let _ = writeln!(stderr, "timing,{algorithm},median_eye_ms={median:.4}");
            }
        }
    }

    match table {
        Ok(_) => Ok(EXIT_OK),
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_curve(args: &CurveArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let params = args.algo.params();
    params.validate()?;
    let policy = args.roi_args.policy();
    policy.validate()?;
    let dataset = load_bioid(&args.dataset)?;
    if dataset.is_empty() {
        return Err(CliError {
            code: EXIT_IO,
            message: format!("{}: no .pgm images found", args.dataset.display()),
        });
    }
    let records = run_benchmark(
        &dataset,
        &args.algo.algorithms(),
        &policy,
        &params,
        args.roi_args.seed,
    );
    let curves = efficiency_table(&records, &dmax_sweep())?;
    let text = match args.format {
        Format::Csv => {
            let mut s = String::from("algo,dmax,efficiency\n");
            for c in &curves {
                for (dmax, eff) in &c.points {
                    s.push_str(&format!("{},{dmax:.3},{eff:.4}\n", c.algorithm));
                }
            }
            s
        }
        Format::Json => json(&curves)?,
    };
    emit(args.out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

pub fn cmd_synth(args: &SynthArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    fs::create_dir_all(&args.out).map_err(|e| io_error(&args.out, e))?;
    for i in 0..args.count {
        let spec = SynthFaceSpec {
            width: args.width,
            height: args.height,
            interocular: args.interocular,
            iris_radius: args.iris_radius,
            pupil_radius: args.pupil_radius,
            eyelid_coverage: args.eyelid,
            noise_sigma: args.noise,
            seed: mix_seed(args.seed, i as u64),
            ..SynthFaceSpec::default()
        };
        let (img, annotation) = synth_face(&spec)?;
        let stem = args.out.join(format!("synth_{i:04}"));
        write_pgm(stem.with_extension("pgm"), &img)?;
        write_eye_file(stem.with_extension("eye"), &annotation)?;
    }
    write_out(
        stdout,
        &format!(
            "wrote {} image pairs to {}\n",
            args.count,
            args.out.display()
        ),
    )?;
    Ok(EXIT_OK)
}

fn validate_dmax(levels: &[f64]) -> Result<(), CliError> {
    if levels.is_empty() {
        return Err(CliError::usage("--dmax needs at least one level"));
    }
    if levels.iter().any(|d| !d.is_finite() || *d < 0.0) || levels.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(CliError::usage(
            "--dmax levels must be non-negative and ascending",
        ));
    }
    Ok(())
}

pub fn records_csv(records: &[EvalRecord], timings: Option<&[(Duration, Duration)]>) -> String {
    let mut s = String::from("image_id,algo,lx,ly,rx,ry,d,status");
    if timings.is_some() {
        s.push_str(",left_ms,right_ms");
    }
    s.push('\n');
    for (i, r) in records.iter().enumerate() {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}",
            r.image_id,
            r.algorithm,
            fmt_opt(r.predicted_left.map(|p| p.x), 2),
            fmt_opt(r.predicted_left.map(|p| p.y), 2),
            fmt_opt(r.predicted_right.map(|p| p.x), 2),
            fmt_opt(r.predicted_right.map(|p| p.y), 2),
            fmt_opt(r.d, 4),
            r.status.as_str()
        ));
        if let Some(t) = timings {
            let (l, rt) = t[i];
            s.push_str(&format!(
                ",{:.4},{:.4}",
                l.as_secs_f64() * 1e3,
                rt.as_secs_f64() * 1e3
            ));
        }
        s.push('\n');
    }
    s
}

pub fn summary_csv(curves: &[EfficiencyCurve]) -> String {
    let mut s = String::from("algo,dmax,efficiency,evaluated\n");
    for c in curves {
        for (dmax, eff) in &c.points {
            s.push_str(&format!(
                "{},{dmax:.3},{eff:.4},{}\n",
                c.algorithm, c.evaluated_count
            ));
        }
    }
    s
}

fn fmt_opt(v: Option<f64>, decimals: usize) -> String {
    v.map(|v| format!("{v:.decimals$}")).unwrap_or_default()
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    })
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError {
            code: EXIT_IO,
            message: e.to_string(),
        })
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, text),
        None => write_out(stdout, text),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn write_out(stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    stdout.write_all(text.as_bytes()).map_err(|e| CliError {
        code: EXIT_IO,
        message: e.to_string(),
    })
}
