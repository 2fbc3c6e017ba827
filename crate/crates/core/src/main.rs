use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use trustboids::config::{self, CliConfig};
use trustboids::engine;
use trustboids::experiments;
use trustboids::output;
use trustboids::svg;

#[derive(Parser)]
#[command(
    name = "trustboids",
    about = "Trust-based networked Boids simulator with an adversarial red agent"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Config file with `key = value` lines; unset keys use defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed, overriding the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, overriding the config file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the per-tick trajectory trace CSV.
    #[arg(long)]
    trace: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one simulation run and print the effect metric.
    Run(CommonArgs),
    /// Run the noise-only factorial design and write stage1.csv.
    Stage1(CommonArgs),
    /// Run the trust + noise factorial design and write stage2.csv.
    Stage2(CommonArgs),
    /// Execute one traced run and write a footprint SVG.
    Footprint(CommonArgs),
}

fn load_config(args: &CommonArgs) -> Result<CliConfig, String> {
    let mut cli_config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            config::parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => CliConfig::default(),
    };
    if let Some(seed) = args.seed {
        cli_config.master_seed = seed;
    }
    if let Some(out) = &args.out {
        cli_config.output_dir = out.clone();
    }
    if args.trace {
        cli_config.capture_trajectory = true;
    }
    cli_config.sim.validate().map_err(|e| e.to_string())?;
    Ok(cli_config)
}

fn cmd_run(args: &CommonArgs) -> Result<(), String> {
    let cfg = load_config(args)?;
    let result = engine::run_simulation(&cfg.sim, cfg.master_seed, cfg.capture_trajectory)
        .map_err(|e| e.to_string())?;
    if let Some(trace) = &result.trajectory {
        let path = cfg.output_dir.join("trace.csv");
        output::emit_trace_csv(trace, &path).map_err(|e| e.to_string())?;
        eprintln!("wrote {}", path.display());
    }
    println!("{}", result.d_bar);
    Ok(())
}

fn cmd_stage(args: &CommonArgs, stage2: bool) -> Result<(), String> {
    let cfg = load_config(args)?;
    let (name, rows) = if stage2 {
        (
            "stage2.csv",
            experiments::run_stage2(&cfg.sim, cfg.replicates, cfg.master_seed),
        )
    } else {
        (
            "stage1.csv",
            experiments::run_stage1(&cfg.sim, cfg.replicates, cfg.master_seed),
        )
    };
    let rows = rows.map_err(|e| e.to_string())?;
    let path = cfg.output_dir.join(name);
    output::emit_results_csv(&rows, &path).map_err(|e| e.to_string())?;
    println!("wrote {}", path.display());
    println!("wrote {}", output::raw_sibling(&path).display());
    Ok(())
}

fn cmd_footprint(args: &CommonArgs) -> Result<(), String> {
    let cfg = load_config(args)?;
    let result = engine::run_simulation(&cfg.sim, cfg.master_seed, true)
        .map_err(|e| e.to_string())?;
    let trace = result.trajectory.as_deref().unwrap_or_default();
    let svg_path = cfg.output_dir.join("footprint.svg");
    svg::render_footprints(trace, &cfg.sim.bounds, &svg_path).map_err(|e| e.to_string())?;
    println!("wrote {}", svg_path.display());
    if cfg.capture_trajectory {
        let trace_path = cfg.output_dir.join("trace.csv");
        output::emit_trace_csv(trace, &trace_path).map_err(|e| e.to_string())?;
        println!("wrote {}", trace_path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Stage1(args) => cmd_stage(args, false),
        Command::Stage2(args) => cmd_stage(args, true),
        Command::Footprint(args) => cmd_footprint(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
