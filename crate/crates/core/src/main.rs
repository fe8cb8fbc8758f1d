use clap::{Args, Parser, Subcommand};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use inphase::harness::{
    emit_curve, emit_q_grid, rmse_table_with, verify_suite, write_rows, CurveSpec, GridMode,
    QGridSpec, RangeChoice, RunConfig, StateChoice, Table, TableOptions, VerifyLevel,
};
use inphase::states::QConvention;
use inphase::Result;

#[derive(Parser)]
#[command(
    name = "inphase",
    version,
    about = "In-phase coherent-state representations: tables, curves and checks"
)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

/// Numerical settings; flags win over the config file.
#[derive(Args)]
struct Overrides {
    /// `key = value` file setting cutoff, line_extent, line_samples, circle_samples
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Highest Fock index kept
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Half-length of line superpositions
    #[arg(long, global = true)]
    line_extent: Option<f64>,
    #[arg(long, global = true)]
    line_samples: Option<usize>,
    #[arg(long, global = true)]
    circle_samples: Option<usize>,
}

impl Overrides {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(c) = self.cutoff {
            cfg.cutoff = c;
        }
        if let Some(l) = self.line_extent {
            cfg.line_extent = Some(l);
        }
        if let Some(s) = self.line_samples {
            cfg.line_samples = s;
        }
        if let Some(s) = self.circle_samples {
            cfg.circle_samples = s;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// RMSE of the asymptotic approximations on the benchmark grids
    Tables {
        /// I, II or III
        #[arg(long)]
        which: Table,
        /// Upper end of the equal-index displacement grid
        #[arg(long, default_value = "caption")]
        range: RangeChoice,
        /// Whether the 512 points include the interval endpoints
        #[arg(long, default_value = "inclusive")]
        grid_mode: GridMode,
        #[arg(long, default_value_t = 512)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact and approximate values along a one-dimensional grid
    Curve {
        /// fock_wavefn, displacement_element, q_radial, q_grid or two_source_fringes
        #[arg(long)]
        kind: String,
        /// Comma-separated K=V parameters, e.g. n=20 or m=30,n=10
        #[arg(long, default_value = "")]
        params: String,
        /// Comma-separated method tags; all methods when omitted
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
        #[arg(long, default_value_t = 512)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Husimi Q function of a state on a rectangular grid
    Qfunc {
        /// fock:n=5, cat:q0=0.4,theta=0, squeezed:mu=1, coherent:q=1,p=0,
        /// circle:n=5,r=3 or gaussian:sigma=1,p0=0
        #[arg(long)]
        state: StateChoice,
        /// qmin,qmax,pmin,pmax,step
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// dqdp (integrates to one over dq dp) or d2z (over d^2z/pi)
        #[arg(long, default_value = "dqdp")]
        convention: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant and oracle checks
    Verify {
        #[arg(long, default_value = "fast")]
        level: VerifyLevel,
    },
}

fn open_sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).map_err(|e| {
                inphase::Error::Io(format!("{}: {e}", path.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn flush(mut sink: Box<dyn Write>) -> Result<()> {
    sink.flush().map_err(|e| inphase::Error::Io(e.to_string()))
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = cli.overrides.resolve()?;
    match cli.command {
        Command::Tables {
            which,
            range,
            grid_mode,
            points,
            out,
        } => {
            let opts = TableOptions {
                range,
                grid: grid_mode,
                points,
            };
            let rows = rmse_table_with(which, &opts)?;
            let mut sink = open_sink(out.as_deref())?;
            write_rows(&rows, &mut sink)?;
            flush(sink)?;
        }
        Command::Curve {
            kind,
            params,
            methods,
            points,
            out,
        } => {
            let mut spec = CurveSpec::parse(&kind, &params, &methods, points)?;
            spec.config = cfg;
            let mut sink = open_sink(out.as_deref())?;
            emit_curve(&spec, &mut sink)?;
            flush(sink)?;
        }
        Command::Qfunc {
            state,
            grid,
            convention,
            out,
        } => {
            let convention = match convention.as_str() {
                "dqdp" => QConvention::PerDqDp,
                "d2z" => QConvention::PerD2zOverPi,
                other => {
                    return Err(inphase::Error::InvalidInput(format!(
                        "unknown convention {other:?}, expected dqdp|d2z"
                    )))
                }
            };
            let spec = QGridSpec::parse(state, &grid, convention)?;
            let mut sink = open_sink(out.as_deref())?;
            emit_q_grid(&spec, &cfg, &mut sink)?;
            flush(sink)?;
        }
        Command::Verify { level } => {
            let report = verify_suite(level);
            println!("{report}");
            return Ok(report.all_passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
