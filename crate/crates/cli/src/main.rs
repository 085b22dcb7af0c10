use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mobile_wall_cli::{parse_config, preset, run, Diagnostics, RunConfig, RunError, Scenario, PRESETS};

#[derive(Parser)]
#[command(version, about = "Vacuum energy profiles and photon spectra of a cavity with a mobile wall")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// 1D field fluctuations and energy density correction.
    Profile1d(Opts),
    /// 3D scalar energy density and its correction.
    Profile3d(Opts),
    /// Photon occupations of the dressed ground state.
    Spectrum(Opts),
    /// A profile per value of one cavity parameter, with a peak summary.
    Sweep(Opts),
}

#[derive(Args)]
struct Opts {
    /// Configuration file (TOML).
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Bundled configuration: fig1, fig2, fig3 or fig3-desk.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    threads: Option<usize>,
    /// Override the number of grid points.
    #[arg(long)]
    grid: Option<usize>,
}

fn load(opts: &Opts) -> Result<RunConfig, Diagnostics> {
    let text = match (&opts.config, &opts.preset) {
        (Some(path), _) => fs::read_to_string(path)
            .map_err(|e| Diagnostics::single(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(name)) => preset(name)
            .ok_or_else(|| {
                let names: Vec<&str> = PRESETS.iter().map(|p| p.0).collect();
                Diagnostics::single(format!("unknown preset `{name}` (available: {})", names.join(", ")))
            })?
            .to_string(),
        (None, None) => unreachable!("clap requires one of --config/--preset"),
    };
    let mut cfg = parse_config(&text)?;
    if let Some(n) = opts.grid {
        if n == 0 {
            return Err(Diagnostics::single("--grid must be at least 1"));
        }
        cfg.grid.points = n;
    }
    Ok(cfg)
}

fn execute(scenario: Scenario, opts: &Opts) -> Result<Vec<PathBuf>, RunError> {
    let cfg = load(opts)?;
    if cfg.scenario != scenario {
        return Err(Diagnostics::single(format!(
            "subcommand `{}` given a `{}` configuration",
            scenario.name(),
            cfg.scenario.name()
        ))
        .into());
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.threads {
        if n == 0 {
            return Err(Diagnostics::single("--threads must be at least 1").into());
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Diagnostics::single(format!("cannot start worker pool: {e}")))?;
    let bundle = pool.install(|| run(&cfg))?;
    bundle.write(&opts.out).map_err(RunError::Io)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (scenario, opts) = match &cli.command {
        Command::Profile1d(o) => (Scenario::Profile1D, o),
        Command::Profile3d(o) => (Scenario::Profile3D, o),
        Command::Spectrum(o) => (Scenario::Spectrum, o),
        Command::Sweep(o) => (Scenario::Sweep, o),
    };
    match execute(scenario, opts) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
