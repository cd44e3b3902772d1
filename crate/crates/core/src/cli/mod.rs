//! `buzzati` command line: schedule tables, simulation, oracle verification
//! and the light-courier limit.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 invalid
//! kinematic input.

pub mod output;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classical::{build_classical_schedule, departure_time};
use crate::domain::{CourierSpec, KinematicConfig, Mode, ScheduleTable, DEFAULT_YEAR_LENGTH_DAYS};
use crate::error::Error;
use crate::relativistic::{build_relativistic_schedule, em_limit_city_time};
use crate::simulator::{simulate, verify_against_analytic, VerificationReport};

pub use output::{Format, OutputSpec, DEFAULT_YEAR_THRESHOLD_DAYS};

use output::EmLimitRow;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

/// Default verification threshold on relative error.
pub const DEFAULT_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "buzzati",
    version,
    about = "Courier schedules between a receding caravan and its City"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Departure times with Galilean kinematics (defaults: q = 2, seven messengers, seven tours)
    ClassicalTable {
        #[command(flatten)]
        speeds: ClassicalSpeeds,
        #[command(flatten)]
        couriers: CourierArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// City, caravan and messenger clocks (defaults: beta_c = 0.5, beta_m = 0.75, messenger 4)
    RelativisticTable {
        #[command(flatten)]
        speeds: RelativisticSpeeds,
        #[command(flatten)]
        couriers: CourierArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Event-by-event kinematic simulation
    Simulate {
        #[command(flatten)]
        speeds: AnySpeeds,
        #[command(flatten)]
        couriers: CourierArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the simulation against the closed forms
    Verify {
        #[command(flatten)]
        speeds: AnySpeeds,
        #[command(flatten)]
        couriers: CourierArgs,
        /// Largest accepted relative error
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// First-order light-courier City times against the exact ones
    EmLimit {
        #[arg(long = "beta-c")]
        beta_c: f64,
        #[arg(long, default_value_t = 1.0)]
        t1: f64,
        #[arg(long, default_value_t = 4)]
        tours: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct ClassicalSpeeds {
    /// Chase ratio V_c / (V_m - V_c); sets V_c = 1
    #[arg(long, conflicts_with_all = ["vc", "vm"])]
    q: Option<f64>,
    /// Caravan speed
    #[arg(long)]
    vc: Option<f64>,
    /// Messenger speed
    #[arg(long)]
    vm: Option<f64>,
}

#[derive(Debug, Args)]
struct RelativisticSpeeds {
    /// Caravan speed as a fraction of c
    #[arg(long = "beta-c")]
    beta_c: Option<f64>,
    /// Messenger speed as a fraction of c
    #[arg(long = "beta-m")]
    beta_m: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Classical,
    Relativistic,
}

#[derive(Debug, Args)]
struct AnySpeeds {
    /// Kinematic regime; implied relativistic when a beta flag is given
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[command(flatten)]
    classical: ClassicalSpeeds,
    #[arg(long = "beta-c", conflicts_with_all = ["q", "vc", "vm"])]
    beta_c: Option<f64>,
    #[arg(long = "beta-m", conflicts_with_all = ["q", "vc", "vm"])]
    beta_m: Option<f64>,
}

#[derive(Debug, Args)]
struct CourierArgs {
    /// First departure times in days, one per messenger (comma list)
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "messengers")]
    t1: Vec<f64>,
    /// Number of messengers, messenger i leaving i + 1 days after the caravan
    #[arg(long)]
    messengers: Option<u32>,
    /// Number of the first messenger
    #[arg(long)]
    index: Option<u32>,
    /// Number of tours (departures from the caravan) per messenger
    #[arg(long)]
    tours: Option<u32>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
    /// Days per year in pretty output
    #[arg(long = "year-days", default_value_t = DEFAULT_YEAR_LENGTH_DAYS)]
    year_days: f64,
    /// Pretty output shows years above this many days
    #[arg(long = "year-threshold", default_value_t = DEFAULT_YEAR_THRESHOLD_DAYS)]
    year_threshold: f64,
    /// Write to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Invalid(Error),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::Invalid(err)
    }
}

impl OutputArgs {
    fn spec(&self) -> Result<OutputSpec, Failure> {
        for (flag, value) in [
            ("--year-days", self.year_days),
            ("--year-threshold", self.year_threshold),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Failure::Usage(format!(
                    "{flag} must be positive, got {value}"
                )));
            }
        }
        Ok(OutputSpec {
            format: self.format,
            year_threshold_days: self.year_threshold,
            year_length_days: self.year_days,
        })
    }
}

struct CourierDefaults {
    index: u32,
    messengers: u32,
    tours: u32,
}

const CLASSICAL_DEFAULTS: CourierDefaults = CourierDefaults {
    index: 1,
    messengers: 7,
    tours: 7,
};

const RELATIVISTIC_DEFAULTS: CourierDefaults = CourierDefaults {
    index: 4,
    messengers: 1,
    tours: 7,
};

impl CourierArgs {
    fn given(&self) -> bool {
        !self.t1.is_empty() || self.messengers.is_some() || self.index.is_some()
    }

    fn resolve(&self, defaults: &CourierDefaults) -> Result<(Vec<CourierSpec>, u32), Failure> {
        let tours = self.tours.unwrap_or(defaults.tours);
        if tours == 0 {
            return Err(Failure::Invalid(Error::InvalidTour(0)));
        }
        let couriers = if self.t1.is_empty() {
            let first = self.index.unwrap_or(defaults.index);
            let count = self.messengers.unwrap_or(defaults.messengers);
            if count == 0 {
                return Err(Failure::Usage(
                    "--messengers must be at least 1".to_string(),
                ));
            }
            (first..first.saturating_add(count))
                .map(CourierSpec::tale)
                .collect::<Result<Vec<_>, _>>()?
        } else {
            CourierSpec::numbered(self.index.unwrap_or(1), &self.t1)?
        };
        Ok((couriers, tours))
    }
}

impl ClassicalSpeeds {
    fn given(&self) -> bool {
        self.q.is_some() || self.vc.is_some() || self.vm.is_some()
    }

    fn config(&self) -> Result<KinematicConfig, Error> {
        match self.q {
            Some(q) => KinematicConfig::classical_from_q(q),
            None => KinematicConfig::classical(self.vc.unwrap_or(1.0), self.vm.unwrap_or(1.5)),
        }
    }
}

fn relativistic_config(beta_c: Option<f64>, beta_m: Option<f64>) -> Result<KinematicConfig, Error> {
    KinematicConfig::relativistic(beta_c.unwrap_or(0.5), beta_m.unwrap_or(0.75))
}

impl AnySpeeds {
    fn mode(&self) -> Mode {
        match self.mode {
            Some(ModeArg::Classical) => Mode::Classical,
            Some(ModeArg::Relativistic) => Mode::Relativistic,
            None if self.beta_c.is_some() || self.beta_m.is_some() => Mode::Relativistic,
            None => Mode::Classical,
        }
    }

    fn config(&self) -> Result<KinematicConfig, Failure> {
        match self.mode() {
            Mode::Classical => {
                if self.beta_c.is_some() || self.beta_m.is_some() {
                    return Err(Failure::Usage(
                        "--beta-c/--beta-m need --mode relativistic".to_string(),
                    ));
                }
                Ok(self.classical.config()?)
            }
            Mode::Relativistic => {
                if self.classical.given() {
                    return Err(Failure::Usage(
                        "--q/--vc/--vm need --mode classical".to_string(),
                    ));
                }
                Ok(relativistic_config(self.beta_c, self.beta_m)?)
            }
        }
    }

    fn defaults(&self) -> &'static CourierDefaults {
        match self.mode() {
            Mode::Classical => &CLASSICAL_DEFAULTS,
            Mode::Relativistic => &RELATIVISTIC_DEFAULTS,
        }
    }
}

/// q values, first departures and tour count of the default classical
/// verification sweep.
pub const SWEEP_Q: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
pub const SWEEP_T1: [f64; 3] = [1.0, 2.5, 8.0];
pub const SWEEP_TOURS: u32 = 10;

/// Runs the classical verification sweep over `SWEEP_Q` x `SWEEP_T1` and
/// folds it into one report.
pub fn classical_sweep(
    threshold: f64,
    tours: u32,
) -> Result<(Vec<String>, VerificationReport), Error> {
    let couriers = CourierSpec::numbered(1, &SWEEP_T1)?;
    let mut runs = Vec::new();
    let mut total = VerificationReport::empty(threshold);
    for q in SWEEP_Q {
        let config = KinematicConfig::classical_from_q(q)?;
        let report = verify_against_analytic(&config, &couriers, tours, threshold)?;
        runs.push(format!(
            "classical q = {} t1 = {:?} tours 1..={}: max rel err {:.3e}",
            q,
            SWEEP_T1,
            tours,
            report.max_relative_error()
        ));
        total.merge(&report);
    }
    Ok((runs, total))
}

/// City time of the `n`-th exchange for light couriers without the
/// first-order expansion: `t1 (1 + 2q)^(n-1) / sqrt(1 - beta_c^2)` with
/// `q = beta_c / (1 - beta_c)`.
pub fn light_courier_city_time(beta_c: f64, t1: f64, n: u32) -> Result<f64, Error> {
    let q = beta_c / (1.0 - beta_c);
    let root_c = ((1.0 - beta_c) * (1.0 + beta_c)).sqrt();
    Ok(departure_time(q, t1, n)? / root_c)
}

pub fn em_limit_rows(beta_c: f64, t1: f64, tours: u32) -> Result<Vec<EmLimitRow>, Error> {
    if !(beta_c > 0.0 && beta_c < 1.0) {
        return Err(if beta_c >= 1.0 {
            Error::Superluminal {
                what: "convoy speed",
                beta: beta_c,
            }
        } else {
            Error::NonPositive {
                what: "convoy speed",
                value: beta_c,
            }
        });
    }
    if !t1.is_finite() || t1 <= 0.0 {
        return Err(Error::NonPositive {
            what: "first departure",
            value: t1,
        });
    }
    if tours == 0 {
        return Err(Error::InvalidTour(0));
    }
    (1..=tours)
        .map(|n| {
            let first_order = em_limit_city_time(beta_c, t1, n)?;
            let exact = light_courier_city_time(beta_c, t1, n)?;
            let abs_error = (first_order - exact).abs();
            Ok(EmLimitRow {
                tour: n,
                first_order_days: first_order,
                exact_days: exact,
                abs_error_days: abs_error,
                rel_error: abs_error / exact,
            })
        })
        .collect()
}

fn schedule(
    config: &KinematicConfig,
    couriers: &[CourierSpec],
    tours: u32,
    spec: &OutputSpec,
) -> Result<ScheduleTable, Error> {
    let table = match config.mode() {
        Mode::Classical => build_classical_schedule(config, couriers, tours)?,
        Mode::Relativistic => build_relativistic_schedule(config, couriers, tours)?,
    };
    table.with_year_length(spec.year_length_days)
}

/// Rendered text and exit status of one command.
fn execute(command: &Command) -> Result<(String, i32, &OutputArgs), Failure> {
    match command {
        Command::ClassicalTable {
            speeds,
            couriers,
            output,
        } => {
            let spec = output.spec()?;
            let config = speeds.config()?;
            let (couriers, tours) = couriers.resolve(&CLASSICAL_DEFAULTS)?;
            let table = schedule(&config, &couriers, tours, &spec)?;
            Ok((output::render_schedule(&table, &spec), EXIT_OK, output))
        }
        Command::RelativisticTable {
            speeds,
            couriers,
            output,
        } => {
            let spec = output.spec()?;
            let config = relativistic_config(speeds.beta_c, speeds.beta_m)?;
            let (couriers, tours) = couriers.resolve(&RELATIVISTIC_DEFAULTS)?;
            let table = schedule(&config, &couriers, tours, &spec)?;
            Ok((output::render_schedule(&table, &spec), EXIT_OK, output))
        }
        Command::Simulate {
            speeds,
            couriers,
            output,
        } => {
            let spec = output.spec()?;
            let config = speeds.config()?;
            let (couriers, tours) = couriers.resolve(speeds.defaults())?;
            let sim = simulate(&config, &couriers, tours)?;
            Ok((
                output::render_simulation(&config, &sim, &spec),
                EXIT_OK,
                output,
            ))
        }
        Command::Verify {
            speeds,
            couriers,
            threshold,
            output,
        } => {
            let spec = output.spec()?;
            if threshold.is_nan() || *threshold < 0.0 {
                return Err(Failure::Usage(format!(
                    "--threshold must be non-negative, got {threshold}"
                )));
            }
            let config = speeds.config()?;
            let sweep =
                config.mode() == Mode::Classical && !speeds.classical.given() && !couriers.given();
            let (runs, report) = if sweep {
                classical_sweep(*threshold, couriers.tours.unwrap_or(SWEEP_TOURS))?
            } else {
                let (couriers, tours) = couriers.resolve(speeds.defaults())?;
                let report = verify_against_analytic(&config, &couriers, tours, *threshold)?;
                let speeds = match config.mode() {
                    Mode::Classical => format!(
                        "V_c = {} V_m = {}",
                        config.convoy_speed(),
                        config.courier_speed()
                    ),
                    Mode::Relativistic => format!(
                        "beta_c = {} beta_m = {}",
                        config.convoy_speed(),
                        config.courier_speed()
                    ),
                };
                let run = format!(
                    "{} {} messengers {:?} tours 1..={}",
                    config.mode(),
                    speeds,
                    couriers.iter().map(|c| c.index()).collect::<Vec<_>>(),
                    tours
                );
                (vec![run], report)
            };
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            };
            Ok((output::render_report(&runs, &report, &spec), code, output))
        }
        Command::EmLimit {
            beta_c,
            t1,
            tours,
            output,
        } => {
            let spec = output.spec()?;
            let rows = em_limit_rows(*beta_c, *t1, *tours)?;
            Ok((
                output::render_em_limit(*beta_c, *t1, &rows, &spec),
                EXIT_OK,
                output,
            ))
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Output goes to `out` unless `--output` names a file.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, code, output)) => {
            let written = match &output.output {
                Some(path) => std::fs::write(path, text.as_bytes())
                    .map_err(|e| (path.display().to_string(), e)),
                None => out
                    .write_all(text.as_bytes())
                    .map_err(|e| ("standard output".to_string(), e)),
            };
            match written {
                Ok(()) => code,
                Err((target, e)) => {
                    let _ = writeln!(err, "error: cannot write {target}: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(Failure::Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
        Err(Failure::Invalid(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

/// Entry point for the binary.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
