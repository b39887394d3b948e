use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tnpascal::experiment::{emit_csv, emit_plot, gen_rhs, run_experiment, ExperimentConfig, RhsMode};
use tnpascal::tn::{tn_eigenvalues, tn_inverse, tn_singular_values, tn_solve, AccuracyMode, Outcome};
use tnpascal::{Error, Execution, Family, FamilySpec};

#[derive(Parser)]
#[command(name = "tnpascal", version, about = "Accurate linear algebra for generalized Pascal and lattice path matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the bidiagonal decomposition as JSON.
    Bd {
        #[command(flatten)]
        target: Target,
        /// Write to a file instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Solve A x = b.
    Solve {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        accuracy: Accuracy,
        /// Comma separated right-hand side; generated from --seed if absent.
        #[arg(long, allow_hyphen_values = true)]
        rhs: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = RhsKind::Alternating)]
        rhs_mode: RhsKind,
    },
    /// Print the inverse, one row per line.
    Inverse {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        accuracy: Accuracy,
    },
    /// Eigenvalues in descending order.
    Eig {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        accuracy: Accuracy,
    },
    /// Singular values in descending order.
    Svd {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        accuracy: Accuracy,
    },
    /// Run an accuracy experiment and write a CSV report.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct Target {
    /// Family, e.g. `lattice:alpha=sqrt(2),beta=sqrt(3),gamma=sqrt(5)` or `pnl:x=3/2,lambda=1`.
    #[arg(long)]
    family: String,
    /// Size parameter; the matrix has order n + 1.
    #[arg(long)]
    n: usize,
}

impl Target {
    fn spec(&self) -> Result<FamilySpec, Error> {
        Ok(self.family.parse::<Family>()?.with_n(self.n))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeKind {
    Structured,
    Certified,
}

#[derive(Clone, Copy, ValueEnum)]
enum RhsKind {
    Alternating,
    Mixed,
}

#[derive(Args)]
struct Accuracy {
    /// Defaults to structured for solve and inverse, certified otherwise.
    #[arg(long, value_enum)]
    mode: Option<ModeKind>,
    /// Certified target of D decimal digits (tolerance 10^-D).
    #[arg(long)]
    digits: Option<u32>,
}

impl Accuracy {
    fn resolve(&self, default: ModeKind) -> Result<AccuracyMode, Error> {
        match self.mode.unwrap_or(default) {
            ModeKind::Structured => Ok(AccuracyMode::StructuredDouble),
            ModeKind::Certified => match self.digits {
                Some(d) => AccuracyMode::certified_with(10f64.powi(-(d as i32))),
                None => Ok(AccuracyMode::certified()),
            },
        }
    }
}

#[derive(Args)]
struct ExperimentArgs {
    /// File of `key = value` lines; flags given here take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    plot: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    family: Option<String>,
    /// e.g. `5:50:5` or `5,10,20`.
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    quantities: Option<String>,
    #[arg(long)]
    methods: Option<String>,
    /// Oracle digits.
    #[arg(long)]
    digits: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    rhs_max: Option<i64>,
    /// Run cells one after another.
    #[arg(long)]
    sequential: bool,
}

fn print_values(v: &[f64]) {
    for x in v {
        println!("{x:.16e}");
    }
}

fn report<T>(out: &Outcome<T>) {
    match out.error_bound {
        Some(b) => eprintln!("precision {} bits, relative change {b:.3e}, hra {}", out.precision_bits, out.hra),
        None => eprintln!("binary64 sweep, hra {}", out.hra),
    }
}

fn parse_rhs(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad right-hand side entry {s:?}"))))
        .collect()
}

fn experiment(args: ExperimentArgs) -> Result<(), Error> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::parse(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    let overrides = [
        ("family", args.family),
        ("sizes", args.sizes),
        ("quantities", args.quantities),
        ("methods", args.methods),
        ("seed", args.seed.map(|v| v.to_string())),
        ("digits", args.digits.map(|v| v.to_string())),
        ("tolerance", args.tolerance.map(|v| v.to_string())),
        ("rhs_max", args.rhs_max.map(|v| v.to_string())),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    if args.csv.is_some() {
        cfg.csv = args.csv;
    }
    if args.plot.is_some() {
        cfg.plot = args.plot;
    }
    let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let report = run_experiment(&cfg, exec)?;
    match &cfg.csv {
        Some(path) => emit_csv(&report, path)?,
        None => print!("{}", report.to_csv()?),
    }
    if let Some(path) = &cfg.plot {
        emit_plot(&report, path)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Bd { target, json } => {
            let bd = target.spec()?.bd_exact()?;
            let text = bd.to_json();
            match json {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
        }
        Command::Solve { target, accuracy, rhs, seed, rhs_mode } => {
            let spec = target.spec()?;
            let b = match rhs {
                Some(text) => parse_rhs(&text)?,
                None => {
                    let mode = match rhs_mode {
                        RhsKind::Alternating => RhsMode::Alternating,
                        RhsKind::Mixed => RhsMode::Mixed,
                    };
                    gen_rhs(spec.order(), seed, mode).into_iter().map(|v| v as f64).collect()
                }
            };
            let out = tn_solve(&spec.bd_exact()?, &b, accuracy.resolve(ModeKind::Structured)?)?;
            report(&out);
            print_values(&out.value);
        }
        Command::Inverse { target, accuracy } => {
            let out = tn_inverse(&target.spec()?.bd_exact()?, accuracy.resolve(ModeKind::Structured)?)?;
            report(&out);
            for i in 0..out.value.rows() {
                let row: Vec<String> = out.value.row(i).iter().map(|x| format!("{x:.16e}")).collect();
                println!("{}", row.join(" "));
            }
        }
        Command::Eig { target, accuracy } => {
            let out = tn_eigenvalues(&target.spec()?.bd_exact()?, accuracy.resolve(ModeKind::Certified)?)?;
            report(&out);
            print_values(&out.value);
        }
        Command::Svd { target, accuracy } => {
            let out = tn_singular_values(&target.spec()?.bd_exact()?, accuracy.resolve(ModeKind::Certified)?)?;
            report(&out);
            print_values(&out.value);
        }
        Command::Experiment(args) => experiment(args)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                ref e if e.is_validation() => 2,
                Error::NoConvergence { .. } => 3,
                _ => 1,
            })
        }
    }
}
