//! `hmpareto`: sample configurations, fit the models, predict every
//! configuration and select the time/energy Pareto frontier.

mod output;
mod params;

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hmpareto::fitting::{fit_parallel_fraction, fit_perf, fit_power};
use hmpareto::formats;
use hmpareto::harness::{ingest_measurements, simulate_runs};
use hmpareto::models::{estimate, predict_all};
use hmpareto::pareto::{compare_to_reference, pareto_frontier};
use hmpareto::sampling::{sample_configurations, SamplePlan};
use hmpareto::{Campaign, SyntheticGroundTruth};

use output::{commit, emit, RunManifest};
use params::{load_platform, parse_config, read_json, FitJson, PerfJson, PowerJson, ODROID_XU3};

#[derive(Parser)]
#[command(name = "hmpareto", version, about = "Performance/energy trade-offs on two-cluster heterogeneous multiprocessors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PlatformArg {
    /// Platform JSON file, or the `odroid-xu3` preset.
    #[arg(long, default_value = ODROID_XU3)]
    platform: String,
}

#[derive(Subcommand)]
enum Command {
    /// List every configuration of the platform.
    Enumerate {
        #[command(flatten)]
        platform: PlatformArg,
        /// Print only the number of configurations.
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw Halton-spread configurations to measure.
    Sample {
        #[command(flatten)]
        platform: PlatformArg,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        start_index: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Produce synthetic measurement runs from known parameters.
    Simulate {
        #[command(flatten)]
        platform: PlatformArg,
        #[arg(long)]
        perf_params: PathBuf,
        #[arg(long)]
        power_params: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        start_index: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the big-over-LITTLE speedup from single-core timings.
    FitSpeedup {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the chip power constants from measured average power.
    FitPower {
        #[command(flatten)]
        platform: PlatformArg,
        #[arg(long)]
        measurements: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit an application's parallel fraction from measured times.
    FitPerf {
        #[command(flatten)]
        platform: PlatformArg,
        #[arg(long)]
        perf: f64,
        /// Single LITTLE core time at the reference frequency, in seconds.
        #[arg(long)]
        tl_ref: f64,
        /// Reference frequency in Hz.
        #[arg(long)]
        f_ref: f64,
        #[arg(long)]
        measurements: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predict time and energy for one or every configuration.
    Predict {
        #[command(flatten)]
        platform: PlatformArg,
        #[arg(long)]
        perf_params: PathBuf,
        #[arg(long)]
        power_params: PathBuf,
        /// A single configuration, "b,L,fb_hz,fl_hz".
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Keep the Pareto-optimal rows of a prediction CSV.
    Pareto {
        #[arg(long)]
        estimates: PathBuf,
        #[arg(long, default_value = "frontier.csv")]
        out: PathBuf,
        /// Also write a two-column `time_s energy_j` file next to the CSV.
        #[arg(long)]
        gnuplot: bool,
    },
    /// Compare a frontier with reference runs (`label,time_s,energy_j`).
    Compare {
        #[arg(long)]
        estimates: PathBuf,
        #[arg(long)]
        measurements: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .with_context(|| format!("cannot open {}", path.display()))
}

fn manifest(command: &str, platform: Option<&str>, inputs: &[&Path], seed: Option<u64>) -> RunManifest {
    let mut m = RunManifest::new(command);
    m.platform_ref = platform.map(str::to_owned);
    m.inputs = inputs.iter().map(|p| p.display().to_string()).collect();
    m.seed = seed;
    m
}

fn json_bytes<T: serde::Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn gnuplot_path(out: &Path) -> PathBuf {
    let dat = out.with_extension("dat");
    if dat == out {
        let mut name = out.as_os_str().to_owned();
        name.push(".gnuplot.dat");
        PathBuf::from(name)
    } else {
        dat
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Enumerate { platform, count_only, out } => {
            let spec = load_platform(&platform.platform)?;
            let configs = spec.enumerate()?;
            let bytes = if count_only {
                format!("{}\n", configs.len()).into_bytes()
            } else {
                let mut buf = Vec::new();
                formats::write_configurations(&mut buf, &configs)?;
                buf
            };
            emit(out.as_deref(), bytes, manifest("enumerate", Some(&platform.platform), &[], None))
        }
        Command::Sample { platform, count, start_index, out } => {
            let spec = load_platform(&platform.platform)?;
            let configs = sample_configurations(&spec, &SamplePlan::new(count).with_start_index(start_index))?;
            let mut buf = Vec::new();
            formats::write_configurations(&mut buf, &configs)?;
            emit(out.as_deref(), buf, manifest("sample", Some(&platform.platform), &[], None))
        }
        Command::Simulate { platform, perf_params, power_params, count, start_index, seed, out } => {
            let spec = load_platform(&platform.platform)?;
            let perf: PerfJson = read_json(&perf_params)?;
            let power: PowerJson = read_json(&power_params)?;
            let mut gt = SyntheticGroundTruth::new(perf.params(), power.params(&spec), seed);
            let time_sigma = perf.noise_time_sigma.unwrap_or(gt.noise_time_sigma);
            let power_sigma = power.noise_power_sigma.unwrap_or(gt.noise_power_sigma);
            gt = gt.with_noise(time_sigma, power_sigma);
            if let Some(app) = &perf.app {
                gt = gt.with_app(app.clone());
            }
            let configs = sample_configurations(&spec, &SamplePlan::new(count).with_start_index(start_index))?;
            let rows = simulate_runs(&gt, &Campaign::new(spec, configs))?;
            let mut buf = Vec::new();
            formats::write_measurement_rows(&mut buf, &rows)?;
            let m = manifest("simulate", Some(&platform.platform), &[&perf_params, &power_params], Some(seed));
            emit(out.as_deref(), buf, m)
        }
        Command::FitSpeedup { pairs, out } => {
            let data = formats::read_speedup_pairs::<f64, _>(open(&pairs)?)?;
            let perf = fit_perf(&data)?;
            emit(out.as_deref(), format!("{perf}\n").into_bytes(), manifest("fit-speedup", None, &[&pairs], None))
        }
        Command::FitPower { platform, measurements, out } => {
            let spec = load_platform(&platform.platform)?;
            let records = ingest_measurements(open(&measurements)?, &spec)?;
            let report = fit_power(&records, &spec)?;
            let bytes = json_bytes(&FitJson::new(&report, PowerJson::from(&report.params)))?;
            emit(out.as_deref(), bytes, manifest("fit-power", Some(&platform.platform), &[&measurements], None))
        }
        Command::FitPerf { platform, perf, tl_ref, f_ref, measurements, out } => {
            let spec = load_platform(&platform.platform)?;
            let records = ingest_measurements(open(&measurements)?, &spec)?;
            let report = fit_parallel_fraction(&records, perf, tl_ref, f_ref)?;
            let bytes = json_bytes(&FitJson::new(&report, PerfJson::from(&report.params)))?;
            emit(out.as_deref(), bytes, manifest("fit-perf", Some(&platform.platform), &[&measurements], None))
        }
        Command::Predict { platform, perf_params, power_params, config, out } => {
            let spec = load_platform(&platform.platform)?;
            let perf = read_json::<PerfJson>(&perf_params)?.params();
            let power = read_json::<PowerJson>(&power_params)?.params(&spec);
            let estimates = match config {
                Some(text) => {
                    let c = parse_config(&text)?;
                    if !spec.is_valid(&c) {
                        bail!("configuration {text:?} is not valid on platform {}", platform.platform);
                    }
                    perf.validate()?;
                    power.validate()?;
                    vec![estimate(&perf, &power, &c)?]
                }
                None => predict_all(&perf, &power, &spec)?,
            };
            let mut buf = Vec::new();
            formats::write_estimates(&mut buf, &estimates)?;
            let m = manifest("predict", Some(&platform.platform), &[&perf_params, &power_params], None);
            emit(out.as_deref(), buf, m)
        }
        Command::Pareto { estimates, out, gnuplot } => {
            let points = formats::read_estimates::<f64, _>(open(&estimates)?)
                .with_context(|| format!("{}", estimates.display()))?;
            let frontier = pareto_frontier(&points)?;
            let mut csv = Vec::new();
            formats::write_frontier(&mut csv, &frontier)?;
            let mut files = vec![(out.clone(), csv)];
            if gnuplot {
                let mut dat = Vec::new();
                formats::write_gnuplot(&mut dat, &frontier)?;
                files.push((gnuplot_path(&out), dat));
            }
            commit(manifest("pareto", None, &[&estimates], None), files)
        }
        Command::Compare { estimates, measurements, out } => {
            let points = formats::read_estimates::<f64, _>(open(&estimates)?)
                .with_context(|| format!("{}", estimates.display()))?;
            let references = formats::read_references::<f64, _>(open(&measurements)?)
                .with_context(|| format!("{}", measurements.display()))?;
            if references.is_empty() {
                bail!("{} has no reference rows", measurements.display());
            }
            let frontier = pareto_frontier(&points)?;
            let report = references
                .iter()
                .map(|r| compare_to_reference(&frontier, r))
                .collect::<hmpareto::Result<Vec<_>>>()?;
            let m = manifest("compare", None, &[&estimates, &measurements], None);
            emit(out.as_deref(), json_bytes(&report)?, m)
        }
    }
}

fn one_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("hmpareto: {}", one_line(first.trim_start_matches("error: ")));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hmpareto: {}", one_line(&format!("{e:#}")));
            ExitCode::FAILURE
        }
    }
}
