use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use geomq::exec::Execution;
use geomq::report::{run, Command, What};
use geomq::sampling::Sampler;
use geomq::spec::{load_spec, ManifoldSpec};
use geomq::{Point, TangentVec};

/// Curvature and class checks for circulant-metric 3-manifolds.
#[derive(Parser, Debug)]
#[command(name = "geomq", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Run per-point work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct SpecArg {
    /// Built-in name or path to a JSON spec file.
    #[arg(long)]
    spec: String,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Metric, Christoffel symbols and curvature at one point.
    Eval {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        point: [f64; 3],
        #[arg(long, value_enum, default_value_t = WhatArg::All)]
        what: WhatArg,
    },
    /// Class fractions over the spec's sample box.
    Classify {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 1000, conflicts_with = "grid")]
        samples: usize,
        /// Regular grid `n1xn2xn3` of cell centres.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<[usize; 3]>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = geomq::classify::DEFAULT_CLASS_TOL)]
        tol: f64,
    },
    /// Sectional curvatures of the q-sections spanned by a vector.
    Sectional {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        point: [f64; 3],
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        vector: [f64; 3],
        /// Also report the curvature of the section spanned by VECTOR and this.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
        with: Option<[f64; 3]>,
    },
    /// Reproduce the worked example manifold.
    VerifyExample,
    /// Randomised checks of both q-section theorems.
    Theorems {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WhatArg {
    G,
    Gamma,
    Riemann,
    All,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"))?;
        if !slot.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
    }
    Ok(out)
}

fn parse_grid(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<&str> = s.split('x').collect();
    if parts.len() != 3 {
        return Err(format!("expected n1xn2xn3, got {s:?}"));
    }
    let mut out = [0; 3];
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse::<usize>().map_err(|e| format!("{p:?}: {e}"))?;
        if *slot == 0 {
            return Err("grid sizes must be positive".into());
        }
    }
    Ok(out)
}

fn build(cmd: &Cmd) -> geomq::Result<(Command, String, ManifoldSpec)> {
    let resolve = |s: &SpecArg| load_spec(&s.spec);
    Ok(match cmd {
        Cmd::Eval { spec, point, what } => {
            let what = match what {
                WhatArg::G => What::G,
                WhatArg::Gamma => What::Gamma,
                WhatArg::Riemann => What::Riemann,
                WhatArg::All => What::All,
            };
            let (name, s) = resolve(spec)?;
            (
                Command::Eval {
                    point: Point(*point),
                    what,
                },
                name,
                s,
            )
        }
        Cmd::Classify {
            spec,
            samples,
            grid,
            seed,
            tol,
        } => {
            let sampler = match grid {
                Some(n) => Sampler::Grid { n: *n },
                None => Sampler::Random {
                    count: *samples,
                    seed: *seed,
                },
            };
            let (name, s) = resolve(spec)?;
            (Command::Classify { sampler, tol: *tol }, name, s)
        }
        Cmd::Sectional {
            spec,
            point,
            vector,
            with,
        } => {
            let (name, s) = resolve(spec)?;
            let cmd = Command::Sectional {
                point: Point(*point),
                vector: TangentVec(*vector),
                with: with.map(TangentVec),
            };
            (cmd, name, s)
        }
        Cmd::VerifyExample => (
            Command::VerifyExample,
            "paper-example".into(),
            ManifoldSpec::paper_example(),
        ),
        Cmd::Theorems { spec, trials, seed } => {
            let (name, s) = resolve(spec)?;
            (
                Command::Theorems {
                    trials: *trials,
                    seed: *seed,
                },
                name,
                s,
            )
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let report = build(&cli.command).and_then(|(cmd, name, spec)| run(&cmd, &name, &spec, exec));
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("geomq: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("geomq: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if !report.verdict.pass {
        eprintln!("geomq: failed checks: {}", report.verdict.failed.join(", "));
    }
    ExitCode::from(report.exit_code() as u8)
}
