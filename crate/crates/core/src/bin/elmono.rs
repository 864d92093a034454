use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use elmono::config::RunConfig;
use elmono::elastic::Point;
use elmono::forward::ffd;
use elmono::probe::TestDisk;
use elmono::reconstruct::{self, ProbeContext};
use elmono::validation;
use elmono::Error;

/// Elastic far-field synthesis and monotonicity-based shape reconstruction.
#[derive(Parser, Debug)]
#[command(name = "elmono", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize far-field data for the scatterer of a config file.
    Forward {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep test disks over the config grid and classify each center.
    Reconstruct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        pgm: Option<PathBuf>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        rmax: Option<usize>,
    },
    /// Print the top eigenvalues of the probe operator for one test disk.
    Spectrum {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        center: Point,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long = "nB", default_value_t = elmono::config::DEFAULT_NB)]
        nb: usize,
    },
    /// Run the acceptance suite.
    Validate {
        #[arg(long)]
        quick: bool,
    },
}

fn parse_point(s: &str) -> Result<Point, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("expected 'x,y', got '{s}'"));
    }
    let x: f64 = parts[0].parse().map_err(|_| format!("invalid coordinate '{}'", parts[0]))?;
    let y: f64 = parts[1].parse().map_err(|_| format!("invalid coordinate '{}'", parts[1]))?;
    Ok([x, y])
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn run(command: Command) -> elmono::Result<bool> {
    match command {
        Command::Forward { config, out } => {
            let cfg = RunConfig::from_file(&config)?;
            let f = reconstruct::synthesize(&cfg)?;
            ffd::write(&f, &out)?;
            println!(
                "wrote {} ({} scatterer, m = {}, noise_level = {}, seed = {})",
                out.display(),
                cfg.shape.name(),
                f.m,
                cfg.noise_level,
                cfg.seed
            );
            Ok(true)
        }
        Command::Reconstruct { config, data, out, pgm, delta, rmax } => {
            let cfg = RunConfig::from_file(&config)?;
            let f = ffd::read(&data)?;
            let (a, b) = (&cfg.medium, &f.medium);
            if !(same(a.lambda, b.lambda) && same(a.mu, b.mu) && same(a.omega, b.omega)) {
                return Err(Error::Data(format!(
                    "medium in {} (lambda {}, mu {}, omega {}) differs from the config (lambda {}, mu {}, omega {})",
                    data.display(),
                    b.lambda,
                    b.mu,
                    b.omega,
                    a.lambda,
                    a.mu,
                    a.omega
                )));
            }
            let ctx = ProbeContext::new(&f)?;
            let cal = reconstruct::resolve_calibration(
                &ctx,
                &cfg.grid,
                cfg.test_radius,
                cfg.nb,
                delta.or(cfg.delta),
                rmax.or(cfg.r_max),
            )?;
            let grid = reconstruct::sweep(&ctx, &cfg.grid, cfg.test_radius, cfg.nb, cal)?;
            reconstruct::write_indicator_csv(&grid, &out)?;
            if let Some(p) = &pgm {
                reconstruct::write_indicator_pgm(&grid, p)?;
            }
            println!(
                "delta {:.6e} ({}), r_max {} ({}), inside {} of {} cells, failed {}",
                cal.delta,
                cal.delta_source.label(),
                cal.r_max,
                cal.r_max_source.label(),
                grid.inside_count(),
                grid.cells.len(),
                grid.failed_count()
            );
            Ok(true)
        }
        Command::Spectrum { data, center, radius, top, nb } => {
            let f = ffd::read(&data)?;
            let ctx = ProbeContext::new(&f)?;
            let disk = TestDisk::new(center, radius, nb)?;
            let eigs = ctx.spectrum(&disk, &disk.gram().sqrt()?)?;
            let delta = ctx.auto_delta();
            let count = eigs.iter().filter(|&&l| l > delta).count();
            println!("center {},{} radius {radius}", center[0], center[1]);
            println!("delta {delta:.6e}");
            println!("count_above {count}");
            for (i, l) in eigs.iter().rev().take(top).enumerate() {
                println!("{:>4} {l:.10e}", i + 1);
            }
            Ok(true)
        }
        Command::Validate { quick } => {
            let mut ok = true;
            for (id, _, _) in validation::CRITERIA {
                let report = validation::run_criterion(id, quick).expect("known criterion");
                println!("{}", report.summary());
                for check in &report.checks {
                    println!("    {check}");
                }
                for note in &report.notes {
                    println!("    {note}");
                }
                if let Some(err) = &report.error {
                    println!("    error: {err}");
                }
                ok &= report.passed();
            }
            Ok(ok)
        }
    }
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
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
