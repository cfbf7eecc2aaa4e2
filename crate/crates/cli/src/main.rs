use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use pairzeta_cli::config::{self, Axis, MaassGrid};
use pairzeta_cli::error::CliError;
use pairzeta_cli::run::{self, Job, Line, Overrides};
use std::path::PathBuf;
use std::process::ExitCode;

/// Condition checks, Dirichlet-series sweeps and Maass-form grids for pairs of distributions.
#[derive(Parser, Debug)]
#[command(name = "pairzeta", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Output directory (overrides output.dir in the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance applied to every check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the checks listed in the config and write report.json.
    Verify { config: PathBuf },
    /// Completed Dirichlet series along a vertical line, written to sweep.csv.
    Sweep {
        config: PathBuf,
        /// re=sigma,tmin,tmax,step
        #[arg(long)]
        line: Line,
        /// 1 for the first distribution, 2 for the second.
        #[arg(long, default_value_t = 1)]
        which: u8,
    },
    /// Twisted conditions for the given primes.
    Twist {
        config: PathBuf,
        /// Primes d (repeat the flag or separate with commas).
        #[arg(long = "d", value_delimiter = ',', required = true)]
        d: Vec<u64>,
        /// all | primitive
        #[arg(long, default_value = "primitive")]
        psi: String,
    },
    /// Evaluate the Maass form on a grid, written to maass_grid.csv.
    MaassEval {
        config: PathBuf,
        /// xmin,xmax,nx,ymin,ymax,ny
        #[arg(long)]
        grid: Option<String>,
    },
}

fn parse_grid(s: &str) -> Result<MaassGrid, CliError> {
    let p: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || CliError::Usage(format!("--grid expects xmin,xmax,nx,ymin,ymax,ny, got {s}"));
    if p.len() != 6 {
        return Err(bad());
    }
    let f = |i: usize| p[i].parse::<f64>().map_err(|_| bad());
    let n = |i: usize| p[i].parse::<usize>().map_err(|_| bad());
    Ok(MaassGrid {
        x: Axis {
            min: f(0)?,
            max: f(1)?,
            n: n(2)?,
        },
        y: Axis {
            min: f(3)?,
            max: f(4)?,
            n: n(5)?,
        },
    })
}

fn job(path: &PathBuf, c: &Common) -> Result<Job, CliError> {
    let cfg = config::load(path)?;
    Job::new(
        cfg,
        &Overrides {
            out: c.out.clone(),
            tol: c.tol,
            seed: c.seed,
        },
    )
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Verify { config } => {
            let job = job(config, &cli.common)?;
            let reports = run::verify(&job)?;
            for r in &reports {
                println!("{}", run::summary_line(r));
            }
            let path = run::write_report(&job, &reports)?;
            println!("report: {}", path.display());
            Ok(run::exit_code(&reports))
        }
        Command::Sweep {
            config,
            line,
            which,
        } => {
            if *which != 1 && *which != 2 {
                return Err(CliError::Usage("--which must be 1 or 2".into()));
            }
            let job = job(config, &cli.common)?;
            let (rows, path) = run::sweep(&job, *line, *which)?;
            println!("{} rows written to {}", rows.len(), path.display());
            Ok(0)
        }
        Command::Twist { config, d, psi } => {
            let psi_all = match psi.as_str() {
                "all" => true,
                "primitive" => false,
                other => {
                    return Err(CliError::Usage(format!(
                        "--psi takes all or primitive, got {other}"
                    )))
                }
            };
            let job = job(config, &cli.common)?;
            let tol = job.tol.for_check(config::CheckKind::W);
            let rep = run::run_w(&job, d, "--d", psi_all, tol)?;
            println!("{}", run::summary_line(&rep));
            for n in &rep.notes {
                println!("  note: {n}");
            }
            let reports = [rep];
            let path = run::write_report(&job, &reports)?;
            println!("report: {}", path.display());
            Ok(run::exit_code(&reports))
        }
        Command::MaassEval { config, grid } => {
            let job = job(config, &cli.common)?;
            let grid = match grid {
                Some(g) => parse_grid(g)?,
                None => job.cfg.grids.maass.unwrap_or_else(run::default_maass_grid),
            };
            let (rep, path) = run::maass_grid(&job, &grid)?;
            println!("{} points written to {}", rep.points.len(), path.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            return ExitCode::from(if ok { 0 } else { 3 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
