use std::path::PathBuf;
use std::process;

use clap::{Args, Parser, Subcommand};
use slag::commands::{self, AtlasOptions, VerifyOptions};
use slag::parallel::{thread_pool, THREADS_ENV};
use slag::{CliError, ConfigOverrides, Report, RunConfig};

#[derive(Parser)]
#[command(
    name = "slag",
    version,
    about = "Verification pipelines for the real locus of quartic sections of G(2,4)"
)]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = THREADS_ENV)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact chart-transition identities and atlas property suites.
    AtlasCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        corrupt_transition: bool,
    },
    /// Multistart search for singular points in all six charts.
    Smoothness {
        #[command(flatten)]
        common: Common,
    },
    /// Sample the normalized real locus and export it.
    Sample {
        #[command(flatten)]
        common: Common,
    },
    /// Lagrangian, volume-form, residue and quotient checks on sampled points.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        inject_perturbed: bool,
    },
    /// Fiber curves over sampled base points.
    Fibration {
        #[command(flatten)]
        common: Common,
        /// Number of base points.
        #[arg(long)]
        bases: Option<usize>,
        /// Samples per fiber (at least 3).
        #[arg(long)]
        fiber: Option<usize>,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Coefficient preset: eq1, eq7 or eq8.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of locus samples.
    #[arg(long)]
    n: Option<usize>,
    /// Master seed; every start and sample draws from its own substream.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Newton starts per chart.
    #[arg(long)]
    starts: Option<usize>,
    /// Multiplier on verification tolerances.
    #[arg(long)]
    tol_scale: Option<f64>,
}

impl Common {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            preset: self.preset.clone(),
            config: self.config.clone(),
            n: self.n,
            seed: self.seed,
            starts: self.starts,
            tol_scale: self.tol_scale,
            out: self.out.clone(),
            bases: None,
            fiber: None,
        }
    }
}

fn run(cmd: Command) -> Result<(Report, RunConfig), CliError> {
    match cmd {
        Command::AtlasCheck {
            common,
            corrupt_transition,
        } => {
            let cfg = RunConfig::resolve(&common.overrides())?;
            let opts = AtlasOptions {
                corrupt_transition,
                ..AtlasOptions::standard()
            };
            Ok((commands::atlas_check(&cfg, &opts), cfg))
        }
        Command::Smoothness { common } => {
            let cfg = RunConfig::resolve(&common.overrides())?;
            Ok((commands::smoothness(&cfg), cfg))
        }
        Command::Sample { common } => {
            let cfg = RunConfig::resolve(&common.overrides())?;
            Ok((commands::sample(&cfg)?, cfg))
        }
        Command::Verify {
            common,
            inject_perturbed,
        } => {
            let cfg = RunConfig::resolve(&common.overrides())?;
            Ok((
                commands::verify(&cfg, &VerifyOptions { inject_perturbed })?,
                cfg,
            ))
        }
        Command::Fibration {
            common,
            bases,
            fiber,
        } => {
            let cfg = RunConfig::resolve(&ConfigOverrides {
                bases,
                fiber,
                ..common.overrides()
            })?;
            Ok((commands::fibration(&cfg)?, cfg))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let pool = thread_pool(cli.threads);
    let code = pool.install(|| match run(cli.command) {
        Ok((report, cfg)) => {
            print!("{}", report.summary());
            match report.write(&cfg.out) {
                Ok(()) => report.exit_code(),
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    });
    process::exit(code as i32);
}
