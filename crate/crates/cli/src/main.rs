use std::path::PathBuf;
use std::process::ExitCode;

use acit_cli::bench::{run_bench, BenchConfig};
use acit_cli::commands::{check_instance, solve_instance, CheckOutcome, ModeArg, SolveOptions};
use acit_cli::gen::{generate, Kind};
use acit_cli::instance::{CertificateFile, InstanceFile};
use acit_cli::plot::render_svg;
use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "acit", version, about = "Decide whether a point hull meets a halfspace intersection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance.
    Gen {
        #[arg(long)]
        kind: Kind,
        #[arg(long, short)]
        d: usize,
        #[arg(long, short)]
        n: usize,
        #[arg(long, short)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Solve an instance; exit 0 if the sets intersect, 1 if not.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print solver statistics as JSON.
        #[arg(long)]
        stats: bool,
        /// Write the certificate file here.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        alpha_constant: Option<f64>,
    },
    /// Verify a certificate; exit 0 if valid, 1 if not.
    Check { instance: PathBuf, certificate: PathBuf },
    /// Time solves over a size sweep and print CSV.
    Bench {
        #[arg(long, short, default_value_t = 3)]
        d: usize,
        #[arg(long, value_delimiter = ',', default_value = "1000,2000,4000,8000,16000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "float")]
        mode: ModeArg,
        #[arg(long)]
        alpha_constant: Option<f64>,
        /// Use one input family for every trial instead of alternating.
        #[arg(long)]
        kind: Option<Kind>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Draw a planar instance as SVG.
    Plot {
        instance: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Gen { kind, d, n, m, seed, output } => {
            let g = generate(kind, d, n, m, seed)?;
            emit(&g.to_file().to_json(), output.as_ref())?;
            Ok(0)
        }
        Command::Solve { instance, mode, seed, stats, certificate, alpha_constant } => {
            let inst = InstanceFile::read(&instance)?;
            let mode = ModeArg::resolve(mode)?;
            let opts = SolveOptions { mode, seed, alpha_constant, check_invariants: cfg!(debug_assertions) };
            let mut file = solve_instance(&inst, &opts)?;
            let intersects = file.certificate.intersects();
            println!("{}", file.decision.to_uppercase());
            if stats {
                println!("{}", serde_json::to_string_pretty(&file.stats)?);
            }
            if let Some(path) = certificate {
                if !stats {
                    file.stats = None;
                }
                emit(&file.to_json(), Some(&path))?;
            }
            Ok(if intersects { 0 } else { 1 })
        }
        Command::Check { instance, certificate } => {
            let inst = InstanceFile::read(&instance)?;
            let cert = CertificateFile::read(&certificate)?;
            match check_instance(&inst, &cert)? {
                CheckOutcome::Valid => {
                    println!("VALID");
                    Ok(0)
                }
                CheckOutcome::Invalid(failures) => {
                    println!("INVALID");
                    for f in failures {
                        println!("  {f}");
                    }
                    Ok(1)
                }
            }
        }
        Command::Bench { d, sizes, trials, seed, mode, alpha_constant, kind, output } => {
            let exact = ModeArg::resolve(mode)? == ModeArg::Exact;
            let report = run_bench(&BenchConfig { d, sizes, trials, seed, exact, alpha_constant, kind })?;
            emit(&report.to_csv(), output.as_ref())?;
            if let Some(s) = report.slope {
                eprintln!("log-log slope {s:.3}");
            }
            eprintln!("fallback rate {:.3}", report.fallback_rate());
            Ok(0)
        }
        Command::Plot { instance, certificate, output } => {
            let inst = InstanceFile::read(&instance)?;
            let cert = certificate.map(|p| CertificateFile::read(&p)).transpose()?;
            let svg = render_svg(&inst, cert.as_ref().map(|c| &c.certificate))?;
            emit(&svg, output.as_ref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
