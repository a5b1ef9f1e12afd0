//! Subcommand dispatch. Exit codes: 0 success, 1 runtime or verification
//! failure, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use upqi_core::imaging::{scan_object, Metrics, ObjectMap, Protocol, Sampling};
use upqi_core::verify::{run_core_checks, CheckReport};
use upqi_core::{bogoliubov_coeffs, moment_result, MeasurementSetting, ObjectPixel};

use crate::config::{parse_config, Config};
use crate::error::CliError;
use crate::object_io::load_object;
use crate::output::{
    fmt_f64, write_metrics_txt, write_object_csv, write_phi_csv, write_recon_csv,
    write_recon_pgm_pair,
};

#[derive(Parser)]
#[command(
    name = "upqi",
    version,
    about = "Homodyne statistics and image reconstruction for two-squeezer quantum imaging"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one CSV row `mean,variance,snr,gamma` for a single pixel
    Moments {
        /// Path to the key=value configuration file
        #[arg(long)]
        config: PathBuf,
        /// Pixel amplitude transmission
        #[arg(long = "T", default_value_t = 1.0)]
        transmission: f64,
        /// Pixel transmission phase (radians)
        #[arg(long = "phiT", default_value_t = 0.0)]
        transmission_phase: f64,
    },
    /// Sweep one parameter and write `param,mean,variance,snr` rows
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Parameter to sweep
        #[arg(long)]
        param: SweepParam,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        /// Number of sample points (endpoints inclusive)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Scan an object map and write the reconstruction and its metrics
    Image {
        #[arg(long)]
        config: PathBuf,
        /// Object map: `.csv` records or a `<stem>.T.pgm`/`<stem>.phi.pgm` pair
        #[arg(long)]
        object: PathBuf,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the verification suite and print one pass/fail line per check
    Verify {
        /// Reduced sweep sizes (same checks, smaller samples)
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepParam {
    /// Pump phase mismatch between the two squeezers
    #[value(name = "Delta")]
    PumpMismatch,
    /// Detection phase (seed phase + local-oscillator phase)
    #[value(name = "delta")]
    DetectionPhase,
    /// Object transmission phase
    #[value(name = "phiT")]
    TransmissionPhase,
}

/// Parse `args` and run; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Moments {
            config,
            transmission,
            transmission_phase,
        } => {
            let cfg = load_config(&config)?;
            let setup = cfg.setup()?;
            let pixel = ObjectPixel::new(transmission, transmission_phase, 0.0)?;
            let coeffs = bogoliubov_coeffs(&setup, &pixel);
            let setting = MeasurementSetting::from_setup(&setup);
            let m = moment_result(&coeffs, &setup.field, &setting);
            println!(
                "{},{},{},{}",
                fmt_f64(m.mean),
                fmt_f64(m.variance),
                fmt_f64(m.snr),
                fmt_f64(m.gamma)
            );
            Ok(0)
        }
        Command::Sweep {
            config,
            param,
            from,
            to,
            steps,
            out,
        } => {
            let cfg = load_config(&config)?;
            run_sweep(&cfg, param, from, to, steps, &out)?;
            Ok(0)
        }
        Command::Image {
            config,
            object,
            out,
        } => {
            let cfg = load_config(&config)?;
            let map = load_object(&object)?;
            run_image(&cfg, &map, &out, workers_from_env()?)?;
            Ok(0)
        }
        Command::Verify { quick } => {
            let mut reports = run_core_checks(quick);
            reports.push(cli_determinism_check(quick)?);
            let mut all_ok = true;
            for r in &reports {
                println!(
                    "{} {}: {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
                all_ok &= r.passed;
            }
            println!(
                "{} of {} checks passed",
                reports.iter().filter(|r| r.passed).count(),
                reports.len()
            );
            Ok(if all_ok { 0 } else { 1 })
        }
    }
}

fn load_config(path: &Path) -> Result<Config, CliError> {
    parse_config(&fs::read_to_string(path)?)
}

fn run_sweep(
    cfg: &Config,
    param: SweepParam,
    from: f64,
    to: f64,
    steps: u64,
    out: &Path,
) -> Result<(), CliError> {
    use std::io::Write;
    let base = cfg.setup()?;
    let mut w = std::io::BufWriter::new(fs::File::create(out)?);
    writeln!(w, "param,mean,variance,snr")?;
    for k in 0..steps {
        let value = if steps == 1 {
            from
        } else {
            from + (to - from) * k as f64 / (steps - 1) as f64
        };
        let (setup, pixel) = match param {
            SweepParam::PumpMismatch => {
                (base.with_pump_mismatch(value), ObjectPixel::transparent())
            }
            SweepParam::DetectionPhase => {
                (base.with_detection_phase(value), ObjectPixel::transparent())
            }
            SweepParam::TransmissionPhase => (base, ObjectPixel::new(1.0, value, 0.0)?),
        };
        let coeffs = bogoliubov_coeffs(&setup, &pixel);
        let setting = MeasurementSetting::from_setup(&setup);
        let m = moment_result(&coeffs, &setup.field, &setting);
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f64(value),
            fmt_f64(m.mean),
            fmt_f64(m.variance),
            fmt_f64(m.snr)
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Scan `map` with the configured protocol and write `T_hat.csv`,
/// `phi_hat.csv`, the PGM render pair, and `metrics.txt` into `out_dir`.
pub fn run_image(
    cfg: &Config,
    map: &ObjectMap,
    out_dir: &Path,
    workers: Option<usize>,
) -> Result<Metrics, CliError> {
    let setup = cfg.setup()?;
    let scan = || scan_object(&setup, map, cfg.protocol, cfg.samples, cfg.seed);
    let (recon, metrics) = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::FormatError(format!("thread pool: {e}")))?
            .install(scan),
        None => scan(),
    }?;
    fs::create_dir_all(out_dir)?;
    write_recon_csv(&out_dir.join("T_hat.csv"), &recon)?;
    write_phi_csv(&out_dir.join("phi_hat.csv"), &recon)?;
    write_recon_pgm_pair(&out_dir.join("recon"), &recon)?;
    write_metrics_txt(&out_dir.join("metrics.txt"), &metrics)?;
    Ok(metrics)
}

fn workers_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var_os("UPQI_WORKERS") {
        None => Ok(None),
        Some(value) => {
            let text = value.to_string_lossy().into_owned();
            text.parse::<usize>()
                .ok()
                .filter(|&w| w > 0)
                .map(Some)
                .ok_or(CliError::BadWorkerCount(text))
        }
    }
}

/// Image runs with the same configuration and seed must produce
/// byte-identical outputs regardless of the worker count.
fn cli_determinism_check(quick: bool) -> Result<CheckReport, CliError> {
    let side = if quick { 4 } else { 8 };
    let map = ObjectMap::test_pattern(side, side)?;
    let cfg = Config {
        r1: 0.5,
        r2: 0.5,
        alpha: 1.0,
        samples: Sampling::Draws(500),
        seed: 3,
        protocol: Protocol::Qsi,
        ..Config::default()
    };
    let dir = tempfile::tempdir()?;
    write_object_csv(&dir.path().join("object.csv"), &map)?;

    let outputs = ["T_hat.csv", "phi_hat.csv", "recon.T.pgm", "recon.phi.pgm", "metrics.txt"];
    let mut baseline: Vec<Vec<u8>> = Vec::new();
    let mut identical = true;
    for (run, workers) in [(0usize, Some(1)), (1, Some(4)), (2, Some(1))] {
        let out = dir.path().join(format!("run{run}"));
        run_image(&cfg, &map, &out, workers)?;
        let bytes: Vec<Vec<u8>> = outputs
            .iter()
            .map(|name| fs::read(out.join(name)))
            .collect::<Result<_, _>>()?;
        if run == 0 {
            baseline = bytes;
        } else {
            identical &= bytes == baseline;
        }
    }
    Ok(CheckReport {
        name: "image-determinism",
        passed: identical,
        detail: format!(
            "{side}x{side} noisy scan, workers 1/4/1: outputs byte-identical = {identical}"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_cli(["upqi", "nonsense"]), 2);
        assert_eq!(run_cli(["upqi", "sweep", "--config", "x"]), 2);
        assert_eq!(run_cli(["upqi"]), 2);
        assert_eq!(run_cli(["upqi", "--help"]), 0);
    }

    #[test]
    fn missing_config_exits_one() {
        assert_eq!(
            run_cli(["upqi", "moments", "--config", "/nonexistent/config"]),
            1
        );
    }

    #[test]
    fn sweep_param_names_are_exact() {
        use clap::CommandFactory;
        let cmd = Cli::command();
        let sweep = cmd.find_subcommand("sweep").unwrap();
        let param = sweep
            .get_arguments()
            .find(|a| a.get_id() == "param")
            .unwrap();
        let names: Vec<String> = param
            .get_possible_values()
            .iter()
            .map(|v| v.get_name().to_string())
            .collect();
        assert_eq!(names, ["Delta", "delta", "phiT"]);
    }

    #[test]
    fn determinism_check_passes() {
        let report = cli_determinism_check(true).unwrap();
        assert!(report.passed, "{}", report.detail);
    }
}
