use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use iot_conflict::aggregate::Strategy;
use iot_conflict::commands::{self, EvaluateArgs, IngestArgs, ResolveArgs};
use iot_conflict::ingest::LogSource;
use iot_conflict::{Error, RunConfig, ServiceId};

#[derive(Parser)]
#[command(name = "iotcr", version, about = "Detect and resolve shared-service conflicts in multi-resident homes")]
struct Cli {
    #[command(flatten)]
    config: ConfigFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigFlags {
    /// Share of singular-value mass kept when truncating.
    #[arg(long, global = true, default_value_t = 0.97)]
    alpha: f64,
    /// Items per resident taken into the candidate set.
    #[arg(long, global = true, default_value_t = 3)]
    top_n: usize,
    /// Items chosen per conflict.
    #[arg(long, global = true, default_value_t = 1)]
    k: usize,
    /// Seconds a setting must hold before it counts as a usage.
    #[arg(long, global = true, default_value_t = 60)]
    settling_window: u32,
    #[arg(long, global = true, default_value_t = 5)]
    bin_count: usize,
    /// Only use history from this many most recent days.
    #[arg(long, global = true)]
    lookback_days: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 0.6)]
    adopted_threshold: f64,
}

impl ConfigFlags {
    fn run_config(&self) -> RunConfig {
        RunConfig {
            alpha: self.alpha,
            top_n: self.top_n,
            k: self.k,
            settling_window: self.settling_window,
            bin_count: self.bin_count,
            lookback_days: self.lookback_days,
            seed: self.seed,
            adopted_threshold: self.adopted_threshold,
        }
    }
}

#[derive(Args)]
struct Inputs {
    /// Event store written by `ingest`.
    #[arg(long)]
    store: PathBuf,
    /// Requests, one JSON object per line.
    #[arg(long)]
    requests: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Build the canonical event store from raw logs.
    Ingest {
        /// `RESIDENT=PATH` for a single-resident log, or a plain `PATH`
        /// when the log has a resident column.
        #[arg(long = "log", required = true)]
        logs: Vec<String>,
        /// JSON map of sensor labels to services and locations.
        #[arg(long)]
        sensors: Option<PathBuf>,
        /// `SERVICE=CH1,CH2,...`: draw missing channels for SERVICE.
        #[arg(long)]
        augment: Option<String>,
        /// Attribute to bin (repeatable); default bins every numeric one.
        #[arg(long = "bin")]
        bins: Vec<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// List conflict situations among the requests.
    Detect {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Resolve every conflict situation.
    Resolve {
        #[command(flatten)]
        inputs: Inputs,
        /// Output of `detect` on the same inputs (`-` for stdin).
        #[arg(long)]
        situations: Option<PathBuf>,
        #[arg(long, default_value = "svd")]
        strategy: String,
        /// Include H, singular values, w, CRIM and IRIM.
        #[arg(long)]
        debug: bool,
        /// Write each situation's preference table here.
        #[arg(long)]
        dump_preferences: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare strategies across group sizes.
    Evaluate {
        #[command(flatten)]
        inputs: Inputs,
        /// Comma-separated; default all.
        #[arg(long, value_delimiter = ',')]
        strategies: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        group_sizes: Vec<usize>,
        /// Recommendation list length; default `--k`.
        #[arg(long)]
        list_size: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Directory for per-metric TSV series.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Walk through the three-resident TV example and check it.
    Demo,
}

enum Failure {
    Usage(String),
    Run(Error),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) => Failure::Usage(m),
            other => Failure::Run(other),
        }
    }
}

fn sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Error::Io { path: p.clone(), source: e })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn finish(mut out: Box<dyn Write>) -> Result<(), Failure> {
    out.flush().map_err(|e| Failure::Run(Error::Io { path: "<output>".into(), source: e }))
}

fn parse_log(spec: &str) -> LogSource {
    match spec.split_once('=') {
        Some((resident, path)) if !resident.is_empty() => LogSource { path: path.into(), resident: Some(resident.into()) },
        _ => LogSource { path: spec.into(), resident: None },
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = cli.config.run_config();
    config.validate()?;
    match cli.command {
        Command::Ingest { logs, sensors, augment, bins, output } => {
            let augment = match augment {
                Some(spec) => {
                    let (service, channels) = spec
                        .split_once('=')
                        .ok_or_else(|| Failure::Usage(format!("--augment expects SERVICE=CH1,CH2,..., got `{spec}`")))?;
                    Some((ServiceId::new(service), channels.split(',').map(str::to_owned).collect()))
                }
                None => None,
            };
            let args = IngestArgs {
                logs: logs.iter().map(|s| parse_log(s)).collect(),
                sensors,
                augment,
                bin_attributes: (!bins.is_empty()).then_some(bins),
            };
            let mut out = sink(Some(&output))?;
            let store = commands::cmd_ingest(&args, &config, &mut out)?;
            finish(out)?;
            for w in &store.header.warnings {
                eprintln!("warning: {w}");
            }
        }
        Command::Detect { inputs, output } => {
            let mut out = sink(output.as_ref())?;
            commands::cmd_detect(&inputs.store, &inputs.requests, &config, &mut out)?;
            finish(out)?;
        }
        Command::Resolve { inputs, situations, strategy, debug, dump_preferences, output } => {
            let args = ResolveArgs { strategy: strategy.parse::<Strategy>()?, debug, situations, dump_preferences };
            let mut out = sink(output.as_ref())?;
            commands::cmd_resolve(&inputs.store, &inputs.requests, &args, &config, &mut out)?;
            finish(out)?;
        }
        Command::Evaluate { inputs, strategies, group_sizes, list_size, csv, json, plot_data } => {
            let strategies = strategies.iter().map(|s| s.parse()).collect::<Result<Vec<Strategy>, Error>>()?;
            let args = EvaluateArgs {
                strategies: (!strategies.is_empty()).then_some(strategies),
                group_sizes: (!group_sizes.is_empty()).then_some(group_sizes),
                list_size,
                csv,
                json,
                plot_data,
            };
            let mut out = sink(None)?;
            commands::cmd_evaluate(&inputs.store, &inputs.requests, &args, &config, &mut out)?;
            finish(out)?;
        }
        Command::Demo => {
            let mut out = sink(None)?;
            let ok = commands::cmd_demo(&mut out)?;
            finish(out)?;
            if !ok {
                return Err(Failure::Check);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_data_error() { 2 } else { 3 })
        }
        Err(Failure::Check) => {
            eprintln!("error: worked example does not match the published values");
            ExitCode::from(3)
        }
    }
}
