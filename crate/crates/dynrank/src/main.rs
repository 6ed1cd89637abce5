use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand};
use dynrank::check::{check, Axiom, CheckOptions};
use dynrank::experiments::{self, Figure, Settings};
use dynrank::format::{self, ProfileDoc, TrajectoryDoc};
use dynrank::service::{serve, ServeConfig};
use dynrank_core::generators::{generate, GenConfig, Model};
use dynrank_core::rational::fraction;
use dynrank_core::rules::compute_debts;
use dynrank_core::{rank, ImplementedSequence, RuleId, Trajectory};

#[derive(Parser)]
#[command(name = "dynrank", version, about = "Dynamic proportional rankings over approval profiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the ranking of the candidates not yet implemented, one per line.
    Rank {
        #[arg(long)]
        rule: RuleId,
        #[arg(long)]
        profile: PathBuf,
        /// Comma-separated implemented candidates, in order.
        #[arg(long, value_delimiter = ',')]
        implemented: Vec<String>,
        /// Also print each voter's debt as `voter num/den`.
        #[arg(long)]
        debts: bool,
    },
    /// Write the trajectory of an implemented sequence as JSON.
    Trajectory {
        #[arg(long)]
        rule: RuleId,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, value_delimiter = ',')]
        implemented: Vec<String>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check an axiom on a recorded trajectory and print a JSON report.
    Check {
        #[arg(long)]
        axiom: Axiom,
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long)]
        h: Option<usize>,
        /// Relative group size as `p/q`.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Generate a random profile.
    Gen {
        #[arg(long)]
        model: Model,
        #[arg(long)]
        group_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run one of the satisfaction experiments and write CSV and SVG.
    Experiment {
        #[arg(long)]
        figure: Figure,
        #[arg(long)]
        model: Model,
        #[arg(short, long, default_value = "out")]
        output: PathBuf,
        #[arg(long, default_value_t = 100)]
        elections: usize,
        #[arg(long, default_value_t = 0)]
        seed_base: u64,
        /// Comma-separated subset of rules; all five by default.
        #[arg(long, value_delimiter = ',')]
        rules: Vec<RuleId>,
    },
    /// Serve moderation sessions over HTTP.
    Serve {
        #[arg(long, env = "DYNRANK_BIND", default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
        #[arg(long, env = "DYNRANK_DATA", default_value = "data")]
        data_dir: PathBuf,
        #[arg(long, env = "DYNRANK_RULE", default_value = "dyn-phragmen")]
        rule: RuleId,
    },
}

fn write_output(path: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Rank { rule, profile, implemented, debts } => {
            let profile = format::read_profile(&profile)?;
            let x = ImplementedSequence::from_names(&profile, &implemented)?;
            let ranking = rank(rule, &profile, &x)?;
            let mut out = std::io::stdout().lock();
            for name in ranking.names(&profile) {
                writeln!(out, "{name}")?;
            }
            if debts {
                let ledger = compute_debts(&profile, &x)?;
                writeln!(out)?;
                for (i, d) in ledger.debts().iter().enumerate() {
                    writeln!(out, "{i} {}", fraction(d))?;
                }
            }
        }
        Command::Trajectory { rule, profile, implemented, h, output } => {
            let profile = Arc::new(format::read_profile(&profile)?);
            let xs = ImplementedSequence::from_names(&profile, &implemented)?;
            let traj = Trajectory::replay(profile, rule, h, xs.as_slice())?;
            let json = serde_json::to_string_pretty(&TrajectoryDoc::from_trajectory(&traj))?;
            write_output(output.as_ref(), &(json + "\n"))?;
        }
        Command::Check { axiom, trajectory, h, alpha, ell } => {
            let traj = format::read_trajectory(&trajectory)?;
            let alpha = alpha.as_deref().map(format::parse_rational).transpose()?;
            let report = check(&traj, axiom, &CheckOptions { h, alpha, ell })?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Gen { model, group_size, seed, output } => {
            let g = generate(&GenConfig::new(model, group_size, seed))?;
            let json = serde_json::to_string_pretty(&ProfileDoc::from_profile(&g.profile))?;
            write_output(output.as_ref(), &(json + "\n"))?;
        }
        Command::Experiment { figure, model, output, elections, seed_base, rules } => {
            let settings = Settings { elections, seed_base, ..Settings::default() };
            let rules = if rules.is_empty() { RuleId::ALL.to_vec() } else { rules };
            let result = experiments::run(figure, model, &rules, &settings)?;
            std::fs::create_dir_all(&output)?;
            let stem = format!("{}_{}", if figure == Figure::Row1 { "row1" } else { "row2" }, model.as_str());
            let csv = output.join(format!("{stem}.csv"));
            result.write_csv(std::fs::File::create(&csv)?)?;
            std::fs::write(output.join(format!("{stem}.svg")), dynrank::plot::render_svg(&result))?;
            std::fs::write(
                output.join(format!("{stem}.json")),
                serde_json::to_string_pretty(&experiments::run_metadata(&result))? + "\n",
            )?;
            eprintln!("wrote {}", csv.display());
        }
        Command::Serve { bind, data_dir, rule } => {
            tracing_subscriber::fmt().with_env_filter(tracing_subscriber::EnvFilter::from_default_env()).init();
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(serve(ServeConfig { bind, data_dir, default_rule: rule }))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
