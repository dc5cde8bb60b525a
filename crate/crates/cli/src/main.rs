use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wickwave_cli::config::Range;
use wickwave_cli::error::CliError;
use wickwave_cli::figures::{run_figure, FigureOptions};
use wickwave_cli::output::write_file;
use wickwave_cli::suites::run_suite;
use wickwave_cli::{catalog, noise_csv, run_eval};

#[derive(Parser)]
#[command(name = "wickwave", version, about = "Exact traveling-wave families for Wick-type stochastic equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a family on a grid described by a JSON config.
    Eval {
        config: PathBuf,
        /// Overrides the config's `output`; `-` writes to stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite: nls-ode, nls-pde, rlw-ode, rlw-alpha1, wick, caputo.
    Verify {
        suite: String,
        /// Also write the JSON report here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Reproduce a figure grid: fig1, fig2, fig3, fig4.
    Figure {
        name: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Also write an SVG raster per panel.
        #[arg(long)]
        svg: bool,
        /// x range as MIN:MAX:POINTS.
        #[arg(long, value_parser = parse_range)]
        x: Option<Range>,
        /// t range as MIN:MAX:POINTS.
        #[arg(long, value_parser = parse_range)]
        t: Option<Range>,
    },
    /// Write a seeded Brownian path as `t,B` CSV.
    NoiseGen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        t_end: f64,
        #[arg(long)]
        dt: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// List the solution families and their parameters.
    Families {
        #[arg(long)]
        json: bool,
    },
}

fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected MIN:MAX:POINTS".into());
    }
    let min = parts[0].parse::<f64>().map_err(|e| format!("min: {e}"))?;
    let max = parts[1].parse::<f64>().map_err(|e| format!("max: {e}"))?;
    let points = parts[2].parse::<usize>().map_err(|e| format!("points: {e}"))?;
    Ok(Range::new(min, max, points))
}

fn emit(bytes: &[u8], path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) if p.as_os_str() != "-" => write_file(p, bytes)?,
        _ => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval { config, output } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
            let (result, prepared) = run_eval(&text)?;
            if result.excluded > 0 {
                eprintln!("{} of {} points excluded (poles)", result.excluded, result.points);
            }
            emit(&result.csv, output.as_ref().or(prepared.output.as_ref()))
        }
        Command::Verify { suite, output } => {
            let outcome = run_suite(&suite)?;
            let json = outcome.to_json() + "\n";
            if let Some(p) = &output {
                write_file(p, json.as_bytes())?;
            }
            std::io::stdout().lock().write_all(json.as_bytes())?;
            if outcome.passed {
                Ok(())
            } else {
                let failed: Vec<&str> =
                    outcome.checks.iter().filter(|c| c.gating && !c.passed).map(|c| c.name.as_str()).collect();
                Err(CliError::Verification(format!("{suite}: {}", failed.join("; "))))
            }
        }
        Command::Figure { name, out_dir, svg, x, t } => {
            let out = run_figure(&name, &FigureOptions { out_dir, svg, x, t })?;
            for f in &out.files {
                println!("{}", f.display());
            }
            if let Some(r) = &out.report {
                for d in &r.decay {
                    println!(
                        "decay alpha={} max|V1| at t={} is {:e} ({})",
                        d.alpha,
                        d.t,
                        d.max_abs_v1,
                        if d.passed { "below 1e-3" } else { "NOT below 1e-3" }
                    );
                }
                if !r.decay_passed() {
                    return Err(CliError::Verification("late-time decay of V1".into()));
                }
            }
            Ok(())
        }
        Command::NoiseGen { seed, t_end, dt, output } => emit(&noise_csv(seed, t_end, dt)?, output.as_ref()),
        Command::Families { json } => {
            let text = if json {
                serde_json::to_string_pretty(&catalog::CATALOG).expect("catalog serializes") + "\n"
            } else {
                catalog::render()
            };
            emit(text.as_bytes(), None)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
