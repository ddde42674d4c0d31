use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use semcell::design::{optimal_sem_util_radius, util_level};
use semcell::{radius_for_outage_threshold, thresholds, DesignTarget};
use semcell_cli::config::ScenarioConfig;
use semcell_cli::error::{CliError, CliResult};
use semcell_cli::presets::{apply_preset, PRESETS};
use semcell_cli::runner::{describe_mismatch, evaluate, format_f64, write_outputs};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "semcell",
    version,
    about = "Outage and cell-size analysis for hybrid bit/semantic downlinks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a sweep and write one CSV per variant plus manifest.json.
    Run(RunArgs),
    /// Compare closed forms with simulation; exit status 4 on a mismatch.
    Validate(RunArgs),
    /// Cell-radius design.
    #[command(subcommand)]
    Design(DesignCommand),
}

#[derive(Args)]
struct ConfigArgs {
    /// Scenario config (JSON). Defaults to the built-in network.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Figure preset applied on top of the config.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
    preset: Option<String>,
}

impl ConfigArgs {
    fn load(&self) -> CliResult<ScenarioConfig> {
        let base = match &self.config {
            Some(path) => ScenarioConfig::load(path)?,
            None if self.preset.is_some() => ScenarioConfig::table1(),
            None => return Err(CliError::Config("one of --config or --preset is required".into())),
        };
        match &self.preset {
            Some(name) => apply_preset(name, base),
            None => Ok(base),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Output directory [default: out/<label>].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Simulated realizations per grid point (0 disables simulation).
    #[arg(long)]
    mc_samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum DesignCommand {
    /// Largest radius with P(at least Ll users in outage) <= p_th.
    Radius {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        pth: f64,
        #[arg(long)]
        ll: u32,
    },
    /// Radius maximizing P(Ll..Lu users served semantically).
    Util {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        ll: u32,
        #[arg(long)]
        lu: u32,
    },
}

fn thread_pool() -> CliResult<()> {
    let Ok(raw) = std::env::var("SEMCELL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("SEMCELL_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))
}

fn run(args: &RunArgs, force_check: bool) -> CliResult<()> {
    let mut cfg = args.config.load()?;
    if let Some(n) = args.mc_samples {
        cfg.mc.samples = n;
    }
    if let Some(s) = args.seed {
        cfg.mc.seed = s;
    }
    if force_check {
        cfg.mc.check = true;
        if cfg.mc.samples == 0 {
            return Err(CliError::Config(
                "validate needs mc.samples > 0 (or --mc-samples)".into(),
            ));
        }
    }
    cfg.validate()?;
    let out = evaluate(&cfg)?;
    let dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.label));
    let written = write_outputs(&out, &dir)?;
    for p in &written {
        println!("wrote {}", p.display());
    }
    if cfg.mc.samples > 0 {
        println!(
            "{} of {} closed-form values outside 3 standard errors of simulation",
            out.mismatches.len(),
            out.comparisons
        );
        for m in &out.mismatches {
            println!("  {}", describe_mismatch(m));
        }
    }
    if cfg.mc.check && !out.mismatches.is_empty() {
        return Err(CliError::Validation(format!(
            "{} of {} comparisons disagree",
            out.mismatches.len(),
            out.comparisons
        )));
    }
    Ok(())
}

fn design(cmd: &DesignCommand) -> CliResult<()> {
    let (config, what) = match cmd {
        DesignCommand::Radius { config, .. } => (config, "radius design"),
        DesignCommand::Util { config, .. } => (config, "utilization design"),
    };
    let v = config.load()?.resolve_base()?;
    let core = |e: semcell::Error| match e {
        semcell::Error::Domain { .. } | semcell::Error::Boundary { .. } => CliError::Config(format!("{what}: {e}")),
        _ => CliError::Solver(format!("{what}: {e}")),
    };
    let thr = thresholds(&v.cfg, &v.fit).map_err(core)?;
    let l = v.params.num_users;
    let doc = match *cmd {
        DesignCommand::Radius { pth, ll, .. } => {
            let target = DesignTarget::new(pth, ll, l, l).map_err(core)?;
            let sol = radius_for_outage_threshold(&target, &thr, &v.params).map_err(core)?;
            json!({"target": target, "thresholds": thr, "solution": sol})
        }
        DesignCommand::Util { ll, lu, .. } => {
            let design = optimal_sem_util_radius(ll, lu, &thr, &v.params).map_err(core)?;
            let level = if ll >= 1 && lu < l {
                util_level(l, ll, lu).ok()
            } else {
                None
            };
            json!({"ll": ll, "lu": lu, "level": level, "thresholds": thr, "design": design})
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?
    );
    if let DesignCommand::Radius { .. } = cmd {
        if let Some(r) = doc["solution"]["radius"].as_f64() {
            eprintln!("radius: {} m", format_f64(r));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = thread_pool().and_then(|()| match &cli.command {
        Command::Run(args) => run(args, false),
        Command::Validate(args) => run(args, true),
        Command::Design(cmd) => design(cmd),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("semcell: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
