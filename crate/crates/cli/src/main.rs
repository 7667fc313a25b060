//! Command-line front end: uncertainty reports, regime scans, Wigner maps,
//! and the closed-form-vs-quadrature verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 root required but not
//! found, 64 usage, 65 invalid parameters or grids, 70 numerical failure,
//! 74 output I/O failure.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use output::{ReportView, RootView};
use subfourier::{analysis, verify, Error, SuperpositionState};

#[derive(Parser)]
#[command(
    name = "subfourier",
    version,
    about = "Gaussian wavepacket superpositions: widths, orthogonality shifts, \
             Wigner maps, and self-verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Uncertainty report and orthogonality shift for one state, as JSON
    Report(ReportArgs),
    /// Sweep cat states over alpha/sigma and emit a CSV regime table
    Scan(ScanArgs),
    /// Sample the Wigner map on a phase-space grid and emit CSV
    Wigner(WignerArgs),
    /// Run the closed-form-vs-quadrature verification suite
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StateKind {
    Coherent,
    Cat,
    Compass,
}

impl StateKind {
    fn label(self) -> &'static str {
        match self {
            StateKind::Coherent => "coherent",
            StateKind::Cat => "cat",
            StateKind::Compass => "compass",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Units {
    Natural,
    Thz,
}

impl Units {
    fn label(self) -> &'static str {
        match self {
            Units::Natural => "natural",
            Units::Thz => "thz",
        }
    }
}

#[derive(Args)]
struct StateArgs {
    /// Packet family
    #[arg(long, value_enum, default_value_t = StateKind::Cat)]
    state: StateKind,
    /// Displacement scale: packet center, cat separation, or compass radius
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Packet width
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Carrier wavenumber k of exp(-i k x); compass states take none
    #[arg(long, default_value_t = 0.0)]
    carrier: f64,
    /// Action scale converting wavenumber widths into momentum widths
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
}

impl StateArgs {
    fn build(&self) -> Result<SuperpositionState, Error> {
        let state = match self.state {
            StateKind::Coherent => {
                SuperpositionState::coherent(self.alpha, self.sigma, self.carrier)?
            }
            StateKind::Cat => SuperpositionState::cat(self.alpha, self.sigma, self.carrier)?,
            StateKind::Compass => {
                if self.carrier != 0.0 {
                    return Err(Error::InvalidRange(format!(
                        "compass states take no carrier (got {})",
                        self.carrier
                    )));
                }
                SuperpositionState::compass(self.alpha, self.sigma)?
            }
        };
        state.with_hbar(self.hbar)?.normalized()
    }
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Root-search cutoff; defaults to an automatic bound from the geometry
    #[arg(long)]
    k_max: Option<f64>,
    /// Exit with status 2 when no orthogonality shift exists below the cutoff
    #[arg(long)]
    require_root: bool,
    /// Unit label attached to the report (values are never rescaled)
    #[arg(long, value_enum, default_value_t = Units::Natural)]
    units: Units,
    /// Report wavenumber-like widths per cycle: delta_k, delta_p, and
    /// delta_star are divided by 2 pi (their ratio is unchanged)
    #[arg(long)]
    units_cyclic: bool,
    /// Reference shift; with --ref-width, adds reference_ratio to the report
    #[arg(long, requires = "ref_width")]
    ref_delta: Option<f64>,
    /// Reference width for reference_ratio
    #[arg(long, requires = "ref_delta")]
    ref_width: Option<f64>,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Lower end of the alpha/sigma sweep (exclusive of zero)
    #[arg(long, default_value_t = 0.1)]
    ratio_min: f64,
    /// Upper end of the sweep
    #[arg(long, default_value_t = 6.0)]
    ratio_max: f64,
    /// Number of rows (at least 2, endpoints included)
    #[arg(long, default_value_t = 60)]
    steps: usize,
    /// Packet width held fixed across the sweep
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WignerArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Grid bounds; default covers the support with the required margins
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    k_min: Option<f64>,
    #[arg(long)]
    k_max: Option<f64>,
    /// Samples along x
    #[arg(long, default_value_t = 256)]
    nx: usize,
    /// Samples along k
    #[arg(long, default_value_t = 256)]
    nk: usize,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed for the randomized comparisons (fixed default: runs reproduce)
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Inject a relative error into the closed-form kernel check; the suite
    /// must fail for any nonzero value
    #[arg(long, default_value_t = 0.0)]
    perturb_kernel: f64,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Lib(Error),
    Io(std::io::Error),
    VerifyFailed,
    RootRequired(f64),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::MaxDepthExceeded { .. })
            | Failure::Lib(Error::NegativeVariance(_)) => 70,
            Failure::Lib(_) => 65,
            Failure::Io(_) => 74,
            Failure::VerifyFailed => 1,
            Failure::RootRequired(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => format!("error: {e}"),
            Failure::Io(e) => format!("error: cannot write output: {e}"),
            Failure::VerifyFailed => "verification failed".into(),
            Failure::RootRequired(k_max) => {
                format!("no orthogonality shift below k_max = {k_max}")
            }
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content).map_err(Failure::Io),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_report(args: &ReportArgs) -> Result<(), Failure> {
    let state = args.state.build()?;
    let rep = analysis::uncertainty_report(&state)?;
    let k_max = args.k_max.unwrap_or_else(|| analysis::auto_k_max(&state));
    let root = match analysis::find_delta_star(&state, k_max) {
        Ok(hit) => Some(hit),
        Err(Error::NoRoot { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    if root.is_none() && args.require_root {
        return Err(Failure::RootRequired(k_max));
    }
    let cyc = if args.units_cyclic {
        std::f64::consts::TAU
    } else {
        1.0
    };
    let view = ReportView {
        state: args.state.state.label(),
        alpha: args.state.alpha,
        sigma: args.state.sigma,
        carrier: args.state.carrier,
        hbar: args.state.hbar,
        units: args.units.label(),
        cyclic: args.units_cyclic,
        delta_x: rep.delta_x,
        delta_k: rep.delta_k / cyc,
        delta_p: rep.delta_p / cyc,
        product: rep.product,
        mean_x: rep.mean_x,
        mean_p: rep.mean_p,
        k_max,
        root: root.map(|hit| RootView {
            delta_star: hit.delta_star / cyc,
            residual: hit.residual,
            ratio: hit.ratio,
            subfourier: hit.subfourier,
        }),
        reference_ratio: match (args.ref_delta, args.ref_width) {
            (Some(d), Some(w)) => Some(d / w),
            _ => None,
        },
    };
    emit(&args.out, &output::report_json(&view))
}

fn cmd_scan(args: &ScanArgs) -> Result<(), Failure> {
    let rows = analysis::regime_scan((args.ratio_min, args.ratio_max), args.sigma, args.steps)?;
    emit(&args.out, &output::scan_csv(&rows))
}

fn cmd_wigner(args: &WignerArgs) -> Result<(), Failure> {
    let state = args.state.build()?;
    let s = state.sigma();
    let (mut a_lo, mut a_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut c_lo, mut c_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in state.components() {
        a_lo = a_lo.min(c.center);
        a_hi = a_hi.max(c.center);
        c_lo = c_lo.min(c.carrier);
        c_hi = c_hi.max(c.carrier);
    }
    let x_range = (
        args.x_min.unwrap_or(a_lo - 8.0 * s),
        args.x_max.unwrap_or(a_hi + 8.0 * s),
    );
    let k_range = (
        args.k_min.unwrap_or(c_lo - 4.0 / s),
        args.k_max.unwrap_or(c_hi + 4.0 / s),
    );
    let grid = analysis::wigner_grid(&state, x_range, k_range, args.nx, args.nk)?;
    emit(&args.out, &output::wigner_csv(&grid))
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let report = verify::run(args.seed, args.perturb_kernel)?;
    emit(&args.out, &output::verify_text(&report))?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::VerifyFailed)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Report(args) => cmd_report(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Wigner(args) => cmd_wigner(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
