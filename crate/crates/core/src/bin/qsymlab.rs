use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsymlab::attacks::{AttackKind, Backend};
use qsymlab::constructions::{CipherInstance, Variant};
use qsymlab::harness::{
    compare_attacks, render_report, report_path, run_experiment, theoretical_bounds, write_report, ConstructionSpec,
    ExperimentConfig, ExperimentReport,
};
use qsymlab::periodics::{brute_force_periods, build_truncated_fl, family_for, predict, TruncationParams};
use qsymlab::{Error, Result};

const EXIT_CONFIG: u8 = 2;
const EXIT_THRESHOLD: u8 = 3;

#[derive(Parser)]
#[command(name = "qsymlab", version, about = "Toy-scale quantum key-recovery experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form c′, iteration counts and success bound.
    Bounds(Params),
    /// Writes an instance descriptor.
    GenInstance {
        #[command(flatten)]
        params: Params,
        /// Omit the secret keys.
        #[arg(long)]
        redact: bool,
    },
    /// Exhaustive period check against the analytic prediction.
    VerifyPeriods(Params),
    /// Runs seeded trials and writes a JSON and CSV report.
    Attack(Params),
    /// Costs several attacks on one instance; `--config` takes a JSON list.
    Compare {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
    },
    /// Summarizes a report file given by `--config`.
    Report(Params),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Markdown,
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct Params {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    kappa: Option<u32>,
    #[arg(long, default_value_t = 0)]
    t: u32,
    #[arg(long, default_value_t = 2)]
    tau: u32,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long, default_value_t = 0)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "hybrid")]
    backend: String,
    #[arg(long, default_value = "offline_dedicated_q1")]
    attack: String,
    #[arg(long, default_value = "SoEM22")]
    construction: String,
    #[arg(long = "c-prime")]
    c_prime: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 3 when the success rate falls below this value.
    #[arg(long)]
    min_success: Option<f64>,
    /// JSON file replacing the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Params {
    fn n(&self) -> Result<u32> {
        self.n.ok_or_else(|| Error::Config("--n is required".into()))
    }

    fn variant(&self) -> Result<Variant> {
        self.construction.parse()
    }

    fn instance(&self) -> Result<CipherInstance> {
        if let Some(path) = &self.config {
            return CipherInstance::from_descriptor(&serde_json::from_str(&fs::read_to_string(path)?)?);
        }
        let mut spec = ConstructionSpec::new(self.variant()?, self.n()?);
        spec.kappa = self.kappa;
        spec.seed = self.seed;
        spec.build(self.seed, self.t, self.p)
    }

    fn experiment(&self) -> Result<ExperimentConfig> {
        if let Some(path) = &self.config {
            return ExperimentConfig::from_json(&fs::read_to_string(path)?);
        }
        let mut spec = ConstructionSpec::new(self.variant()?, self.n()?);
        spec.kappa = self.kappa;
        spec.seed = self.seed;
        let attack: AttackKind = self.attack.parse()?;
        let mut c = ExperimentConfig::new(spec, attack);
        c.t = self.t;
        c.tau = self.tau;
        c.p_split = self.p;
        c.c_override = self.c_prime;
        c.backend = self.backend.parse::<Backend>()?;
        c.trials = self.trials;
        c.seed_base = self.seed;
        c.output = self.out.clone();
        Ok(c)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => Ok(fs::write(path, text)?),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Bounds(p) => {
            let n = p.n()?;
            let b = theoretical_bounds(n, p.kappa.unwrap_or(n), p.t, p.tau, p.p)?;
            p.emit(&serde_json::to_string_pretty(&b)?)?;
        }
        Command::GenInstance { params, redact } => {
            let desc = params.instance()?.descriptor(redact);
            params.emit(&serde_json::to_string_pretty(&desc)?)?;
        }
        Command::VerifyPeriods(p) => {
            let inst = p.instance()?;
            let f = family_for(&inst)?;
            let trunc = (p.t > 0 || p.p.is_some()).then_some(TruncationParams { t: p.t, p_split: p.p });
            let target = match trunc {
                Some(tp) => build_truncated_fl(&f, tp)?,
                None => f,
            };
            let report = brute_force_periods(&target)?;
            let pred = predict(&inst, trunc);
            p.emit(&serde_json::to_string_pretty(&report.to_json(Some(&pred)))?)?;
            if !report.diff(&pred).is_exact() {
                eprintln!("periods differ from the prediction");
                return Ok(EXIT_THRESHOLD);
            }
        }
        Command::Attack(p) => {
            let config = p.experiment()?;
            let report = run_experiment(&config)?;
            let path = report_path(&config);
            let csv = write_report(&report, &path)?;
            let s = report.summary;
            println!(
                "{}/{} successes, rate {:.4}, Wilson 95% [{:.4}, {:.4}]; wrote {} and {}",
                s.successes,
                s.trials,
                s.success_rate,
                s.wilson_low,
                s.wilson_high,
                path.display(),
                csv.display()
            );
            if p.min_success.is_some_and(|min| s.success_rate < min) {
                return Ok(EXIT_THRESHOLD);
            }
        }
        Command::Compare { params, format } => {
            let configs: Vec<ExperimentConfig> = match &params.config {
                Some(path) => serde_json::from_str(&fs::read_to_string(path)?)?,
                None => {
                    let base = params.experiment()?;
                    [AttackKind::OfflineDedicatedQ1, AttackKind::OfflineDedicatedQ2, AttackKind::Dedicated]
                        .into_iter()
                        .map(|attack| ExperimentConfig { attack, ..base.clone() })
                        .collect()
                }
            };
            let table = compare_attacks(&configs)?;
            let text = match format {
                Format::Markdown => table.to_markdown(),
                Format::Json => table.to_json()?,
                Format::Csv => table.to_csv()?,
            };
            params.emit(&text)?;
        }
        Command::Report(p) => {
            let path = p.config.as_ref().ok_or_else(|| Error::Config("--config <report.json> is required".into()))?;
            let report: ExperimentReport = serde_json::from_str(&fs::read_to_string(path)?)?;
            print!("{}", render_report(&report));
            if p.min_success.is_some_and(|min| report.summary.success_rate < min) {
                return Ok(EXIT_THRESHOLD);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
