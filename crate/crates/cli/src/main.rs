use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use stratgame::environments::{brute_force_loss_oracle, environment_from_name, parse_rational, EnvParams, FamilyTag};
use stratgame::harness::acceptance::{criteria, Scale};
use stratgame::harness::{emit_report, run_experiment, sweep, ExperimentConfig, MetricsReport, ReportFormat};
use stratgame::model::{Hypothesis, Point, UnionPredictor};

#[derive(Parser)]
#[command(name = "stratgame", version, about = "Strategic classification simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment.
    Run(ExperimentArgs),
    /// Run one experiment per value of `--over`.
    Sweep {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Key to vary, e.g. `T` or `n`.
        #[arg(long, default_value = "T")]
        over: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
    },
    /// Exact rational population loss of a union predictor.
    Oracle(OracleArgs),
    /// Run the built-in acceptance suite.
    Verify {
        /// A tenth of the seeds.
        #[arg(long)]
        quick: bool,
        /// Criterion ids to run; all when empty.
        ids: Vec<u8>,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// Flat `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    env: Option<String>,
    #[arg(long)]
    learner: Option<String>,
    /// x-delta, x-delta-after, delta-only or none.
    #[arg(long)]
    setting: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long = "T")]
    rounds: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    /// Count, `a..b` range or comma list.
    #[arg(long)]
    seeds: Option<String>,
    /// online or pac.
    #[arg(long)]
    mode: Option<String>,
    /// Extra `key=value` settings, e.g. `family-eps=0.02`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    extra: Vec<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv-summary.
    #[arg(long, default_value = "json")]
    format: String,
}

impl ExperimentArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            cfg.apply_text(&text)?;
        }
        let flags = [
            ("env", &self.env),
            ("learner", &self.learner),
            ("setting", &self.setting),
            ("n", &self.n),
            ("T", &self.rounds),
            ("eps", &self.eps),
            ("delta", &self.delta),
            ("seeds", &self.seeds),
            ("mode", &self.mode),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        for kv in &self.extra {
            let Some((k, v)) = kv.split_once('=') else { bail!("--set expects KEY=VALUE, got {kv:?}") };
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    fn write(&self, reports: &[MetricsReport]) -> Result<()> {
        let format: ReportFormat = self.format.parse()?;
        let mut bytes = Vec::new();
        for r in reports {
            bytes.extend(emit_report(r, format)?);
        }
        match &self.out {
            Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?,
            None => std::io::stdout().write_all(&bytes)?,
        }
        Ok(())
    }
}

#[derive(Args)]
struct OracleArgs {
    /// appG, appI, appJ or appK.
    #[arg(long)]
    env: String,
    #[arg(long)]
    n: usize,
    /// Decimal or fraction, e.g. `0.01` or `1/100`.
    #[arg(long)]
    eps: String,
    /// Realizing hypothesis index; defaults to `n - 1`.
    #[arg(long)]
    target: Option<usize>,
    /// Class indices whose union is positive; empty is all-negative.
    #[arg(long, value_delimiter = ',')]
    parts: Vec<usize>,
    /// Also label the zero point (origin or centre) positive.
    #[arg(long)]
    zero: bool,
}

fn oracle(args: &OracleArgs) -> Result<()> {
    let tag: FamilyTag = args.env.parse()?;
    let eps = parse_rational(&args.eps)?;
    let target = args.target.unwrap_or(args.n.saturating_sub(1));
    let eps_f = *eps.numer() as f64 / *eps.denom() as f64;
    let params = EnvParams { n: args.n, epsilon: eps_f, target: Some(target), ..Default::default() };
    let env = environment_from_name(tag.name(), &params)?;
    let f = UnionPredictor::new(args.parts.clone());
    f.check(&env.instance.class)?;
    let mut points = env.instance.class.materialize(&f).positive().to_vec();
    if args.zero {
        points.push(if tag == FamilyTag::SphereOrigin { Point::Origin } else { Point::Index(0) });
    }
    let loss = brute_force_loss_oracle(tag, args.n, eps, target, &Hypothesis::new(points))?;
    println!("{loss} ({:.12})", *loss.numer() as f64 / *loss.denom() as f64);
    Ok(())
}

fn verify(quick: bool, ids: &[u8]) -> bool {
    let scale = if quick { Scale::Quick } else { Scale::Full };
    let mut all = true;
    for c in criteria().into_iter().filter(|c| ids.is_empty() || ids.contains(&c.id)) {
        let outcome = c.run(scale);
        println!("{outcome}");
        all &= outcome.pass;
    }
    println!("{}", if all { "all criteria passed" } else { "some criteria failed" });
    all
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(exp) => exp.config().and_then(|cfg| {
            let report = run_experiment(&cfg)?;
            exp.write(std::slice::from_ref(&report))?;
            Ok(report.all_pass())
        }),
        Command::Sweep { exp, over, values } => exp.config().and_then(|cfg| {
            let reports = sweep(&cfg, &over, &values)?;
            exp.write(&reports)?;
            Ok(reports.iter().all(MetricsReport::all_pass))
        }),
        Command::Oracle(args) => oracle(&args).map(|_| true),
        Command::Verify { quick, ids } => Ok(verify(quick, &ids)),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
