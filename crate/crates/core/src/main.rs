//! Command-line front end: scalar evaluators, convergence sweeps,
//! samplers, matrix functions, master-equation solves and SSA ensembles,
//! all emitting CSV with '#'-prefixed metadata comments.
//!
//! Exit codes: 0 success, 2 validation failure, 3 numerical failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracteuler::densities::{self, DensityKind, DensitySpec};
use fracteuler::euler;
use fracteuler::master::{solve_fractional_master_mlf, ProbabilityVector};
use fracteuler::matrix::{self, GraphLaplacian};
use fracteuler::samplers::{sample_mlf_waiting, sample_wplus_waiting, RngStream};
use fracteuler::special::{self, MlfParams, Sign};
use fracteuler::ssa::{
    self, ensemble_histogram, schlogl_network, SchloglParams, WaitingTime,
};
use nalgebra::{DMatrix, DVector};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fracteuler", version, about = "Fractional Euler limits and Mittag-Leffler machinery")]
struct Cli {
    /// Base seed for all randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write CSV to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mittag-Leffler function evaluation.
    Mlf {
        #[command(subcommand)]
        cmd: MlfCmd,
    },
    /// Discrete Euler-scheme convergence sweeps.
    Euler {
        #[command(subcommand)]
        cmd: EulerCmd,
    },
    /// Waiting-time samplers.
    Sample {
        #[command(subcommand)]
        cmd: SampleCmd,
    },
    /// Matrix Mittag-Leffler functions of graph Laplacians.
    Matrix {
        #[command(subcommand)]
        cmd: MatrixCmd,
    },
    /// Generalized master equation solves.
    Master {
        #[command(subcommand)]
        cmd: MasterCmd,
    },
    /// Stochastic simulation ensembles.
    Ssa {
        #[command(subcommand)]
        cmd: SsaCmd,
    },
    /// Emit the CSV bundles behind the standard figures.
    Figures(FiguresArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus")]
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Subcommand)]
enum MlfCmd {
    /// Evaluate E_alpha(+-lambda t^alpha) at a single t.
    Eval {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, value_enum)]
        sign: SignArg,
        #[arg(long)]
        t: f64,
    },
    /// Tabulate over an equally spaced t-range.
    Table {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, value_enum)]
        sign: SignArg,
        #[arg(long)]
        t0: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Classic,
    Backward,
    Frac,
    Gl,
    Weighted,
}

#[derive(Subcommand)]
enum EulerCmd {
    /// Value, target and absolute error of a scheme over a list of n.
    Converge {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, value_enum)]
        sign: SignArg,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        /// Comma-separated list of step counts.
        #[arg(long, default_value = "256,1024,4096,16384", value_delimiter = ',')]
        n: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum SampleCmd {
    /// Mittag-Leffler waiting times.
    Ml {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long)]
        n: usize,
    },
    /// W_+-mixture waiting times.
    Wplus {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixMethod {
    Eig,
    Mixture,
    Postwidder,
}

#[derive(Subcommand)]
enum MatrixCmd {
    /// E_alpha(A t^alpha) for a graph Laplacian read from CSV.
    Mlf {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "eig")]
        method: MatrixMethod,
        /// Post-Widder approximation order.
        #[arg(long, default_value_t = 16)]
        order: usize,
    },
}

#[derive(Subcommand)]
enum MasterCmd {
    /// p(t) = E_alpha(A t^alpha) p0 over an equally spaced time range.
    Solve {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        t0: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p0: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WaitingArg {
    Exp,
    Mlf,
    Wplus,
}

#[derive(Subcommand)]
enum SsaCmd {
    /// Schlogl-model ensemble histogram at a snapshot time.
    Schlogl {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, value_enum)]
        waiting: WaitingArg,
        /// Number of trajectories.
        #[arg(long)]
        n: u64,
        /// Snapshot time.
        #[arg(long)]
        t: f64,
        /// Initial copy number.
        #[arg(long, default_value_t = 247)]
        x0: u64,
        /// Also dump the stream-0 trajectory (time, state) to this file.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FiguresArgs {
    /// Directory receiving fig1.csv, fig3.csv, fig4.csv, fig5.csv.
    #[arg(long)]
    out_dir: PathBuf,
    /// Ensemble size for the histogram figure.
    #[arg(long, default_value_t = 10_000)]
    n: u64,
    /// Snapshot time for the histogram figure.
    #[arg(long, default_value_t = 50.0)]
    t: f64,
}

enum AppError {
    Validation(String),
    Numerical(fracteuler::Error),
}

impl From<fracteuler::Error> for AppError {
    fn from(e: fracteuler::Error) -> Self {
        use fracteuler::Error::*;
        match e {
            Domain(_) | InvalidLaplacian(_) | InvalidProbability(_) | InvalidParameter(_) => {
                AppError::Validation(e.to_string())
            }
            other => AppError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Validation(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    env_logger::init();
    if let Ok(threads) = std::env::var("FRACTEULER_THREADS") {
        match threads.parse::<usize>() {
            Ok(k) if k >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
            _ => {
                eprintln!("error: FRACTEULER_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(csv) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, csv) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{csv}");
            }
            ExitCode::SUCCESS
        }
        Err(AppError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            ExitCode::from(3)
        }
    }
}

/// Assemble a CSV document: version and config comment lines, header,
/// then rows.
fn csv_doc(config: &str, header: &str, rows: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# fracteuler v{}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# config: {config}");
    let _ = writeln!(out, "{header}");
    for row in rows {
        out.push_str(row);
        out.push('\n');
    }
    out
}

fn run(cli: &Cli) -> Result<String, AppError> {
    match &cli.command {
        Command::Mlf { cmd } => run_mlf(cmd),
        Command::Euler { cmd } => run_euler(cmd),
        Command::Sample { cmd } => run_sample(cmd, cli.seed),
        Command::Matrix { cmd } => run_matrix(cmd),
        Command::Master { cmd } => run_master(cmd),
        Command::Ssa { cmd } => run_ssa(cmd, cli.seed),
        Command::Figures(args) => run_figures(args, cli.seed),
    }
}

fn sign_char(sign: Sign) -> char {
    match sign {
        Sign::Plus => '+',
        Sign::Minus => '-',
    }
}

fn run_mlf(cmd: &MlfCmd) -> Result<String, AppError> {
    match *cmd {
        MlfCmd::Eval {
            alpha,
            lambda,
            sign,
            t,
        } => {
            let sign: Sign = sign.into();
            let params = MlfParams::new(alpha, lambda)?;
            let value = special::mlf(params, sign, t)?;
            let method = special::mlf_method_name(params, sign, t);
            Ok(csv_doc(
                &format!(
                    "mlf eval alpha={alpha} lambda={lambda} sign={} t={t}",
                    sign_char(sign)
                ),
                "t,value,method",
                &[format!("{t},{value},{method}")],
            ))
        }
        MlfCmd::Table {
            alpha,
            lambda,
            sign,
            t0,
            t1,
            steps,
        } => {
            let sign: Sign = sign.into();
            if steps == 0 || !(t1 > t0) {
                return Err(AppError::Validation(
                    "table needs steps >= 1 and t1 > t0".into(),
                ));
            }
            let params = MlfParams::new(alpha, lambda)?;
            let mut rows = Vec::with_capacity(steps + 1);
            for k in 0..=steps {
                let t = t0 + (t1 - t0) * k as f64 / steps as f64;
                let value = special::mlf(params, sign, t)?;
                let method = special::mlf_method_name(params, sign, t);
                rows.push(format!("{t},{value},{method}"));
            }
            Ok(csv_doc(
                &format!(
                    "mlf table alpha={alpha} lambda={lambda} sign={} t0={t0} t1={t1} steps={steps}",
                    sign_char(sign)
                ),
                "t,value,method",
                &rows,
            ))
        }
    }
}

fn run_euler(cmd: &EulerCmd) -> Result<String, AppError> {
    let EulerCmd::Converge {
        alpha,
        lambda,
        sign,
        t,
        scheme,
        n,
    } = cmd;
    let (alpha, lambda, t) = (*alpha, *lambda, *t);
    let sign: Sign = (*sign).into();
    if n.is_empty() || n.contains(&0) {
        return Err(AppError::Validation(
            "step counts must be positive".into(),
        ));
    }
    let scheme_name = match scheme {
        SchemeArg::Classic => "classic",
        SchemeArg::Backward => "backward",
        SchemeArg::Frac => "frac",
        SchemeArg::Gl => "gl",
        SchemeArg::Weighted => "weighted",
    };
    // For frac and gl the rate is folded into the time variable:
    // E_alpha(+-lambda t^alpha) = E_alpha(+-(lambda^(1/alpha) t)^alpha).
    let mut rows = Vec::with_capacity(n.len());
    for &steps in n {
        let (value, target) = match scheme {
            SchemeArg::Classic => {
                let t_signed = match sign {
                    Sign::Plus => lambda * t,
                    Sign::Minus => -lambda * t,
                };
                (euler::euler_classic(t_signed, steps).final_value(), t_signed.exp())
            }
            SchemeArg::Backward => {
                let t_signed = match sign {
                    Sign::Plus => lambda * t,
                    Sign::Minus => -lambda * t,
                };
                (euler::euler_backward(t_signed, steps)?, t_signed.exp())
            }
            SchemeArg::Frac => {
                let r = euler::frac_euler(alpha, sign, lambda.powf(1.0 / alpha) * t, steps)?;
                (r.final_value(), r.target)
            }
            SchemeArg::Gl => {
                if matches!(sign, Sign::Minus) {
                    return Err(AppError::Validation(
                        "the gl scheme targets the growing solution; use sign +".into(),
                    ));
                }
                let r = euler::gl_scheme(alpha, lambda.powf(1.0 / alpha) * t, steps)?;
                (r.final_value(), r.target)
            }
            SchemeArg::Weighted => {
                let grid = special::QuadratureGrid::default_for(alpha);
                let r = euler::weighted_euler(alpha, lambda, sign, t, steps, grid)?;
                let params = MlfParams::new(alpha, lambda)?;
                (r.value, special::mlf(params, sign, t)?)
            }
        };
        rows.push(format!(
            "{steps},{value},{target},{}",
            (value - target).abs()
        ));
    }
    Ok(csv_doc(
        &format!(
            "euler converge scheme={scheme_name} alpha={alpha} lambda={lambda} sign={} t={t} n={n:?}",
            sign_char(sign)
        ),
        "n,value,target,abs_error",
        &rows,
    ))
}

fn run_sample(cmd: &SampleCmd, seed: u64) -> Result<String, AppError> {
    let (name, alpha, lambda, n) = match *cmd {
        SampleCmd::Ml { alpha, lambda, n } => ("ml", alpha, lambda, n),
        SampleCmd::Wplus { alpha, lambda, n } => ("wplus", alpha, lambda, n),
    };
    if n == 0 {
        return Err(AppError::Validation("n must be at least 1".into()));
    }
    let params = MlfParams::new(alpha, lambda)?;
    if name == "wplus" && alpha >= 1.0 {
        return Err(AppError::Validation(
            "the W+ sampler requires alpha < 1".into(),
        ));
    }
    let mut rng = RngStream::new(seed, 0);
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let tau = match *cmd {
                SampleCmd::Ml { .. } => sample_mlf_waiting(params, &mut rng),
                SampleCmd::Wplus { .. } => sample_wplus_waiting(params, &mut rng),
            };
            format!("{i},{tau}")
        })
        .collect();
    Ok(csv_doc(
        &format!("sample {name} alpha={alpha} lambda={lambda} n={n} seed={seed}"),
        "index,tau",
        &rows,
    ))
}

fn read_numeric_rows(path: &Path) -> Result<Vec<Vec<f64>>, AppError> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse()).collect();
        match row {
            Ok(r) => rows.push(r),
            Err(e) => {
                return Err(AppError::Validation(format!(
                    "{}:{}: {e}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    if rows.is_empty() {
        return Err(AppError::Validation(format!(
            "{}: no numeric rows",
            path.display()
        )));
    }
    Ok(rows)
}

fn read_matrix(path: &Path) -> Result<DMatrix<f64>, AppError> {
    let rows = read_numeric_rows(path)?;
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(AppError::Validation(format!(
            "{}: ragged rows",
            path.display()
        )));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

fn read_vector(path: &Path) -> Result<DVector<f64>, AppError> {
    let rows = read_numeric_rows(path)?;
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Ok(DVector::from_vec(flat))
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<String> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| m[(i, j)].to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

fn run_matrix(cmd: &MatrixCmd) -> Result<String, AppError> {
    let MatrixCmd::Mlf {
        alpha,
        t,
        input,
        method,
        order,
    } = cmd;
    let a = GraphLaplacian::new(read_matrix(input)?)?;
    let (name, result) = match method {
        MatrixMethod::Eig => ("eig", matrix::mlf_matrix_eig(&a, *alpha, *t)?),
        MatrixMethod::Mixture => (
            "mixture",
            matrix::mlf_matrix_mixture(
                &a,
                *alpha,
                *t,
                special::QuadratureGrid::default_for(*alpha),
            )?,
        ),
        MatrixMethod::Postwidder => (
            "postwidder",
            matrix::post_widder_mlf(&a, *alpha, *t, *order)?,
        ),
    };
    let header = (0..a.dim())
        .map(|j| format!("c{j}"))
        .collect::<Vec<_>>()
        .join(",");
    Ok(csv_doc(
        &format!(
            "matrix mlf method={name} alpha={alpha} t={t} order={order} input={}",
            input.display()
        ),
        &header,
        &matrix_rows(&result),
    ))
}

fn run_master(cmd: &MasterCmd) -> Result<String, AppError> {
    let MasterCmd::Solve {
        alpha,
        t0,
        t1,
        steps,
        input,
        p0,
    } = cmd;
    if *steps == 0 || !(t1 > t0) {
        return Err(AppError::Validation(
            "solve needs steps >= 1 and t1 > t0".into(),
        ));
    }
    let a = GraphLaplacian::new(read_matrix(input)?)?;
    let p = ProbabilityVector::new(read_vector(p0)?)?;
    let times: Vec<f64> = (0..=*steps)
        .map(|k| t0 + (t1 - t0) * k as f64 / *steps as f64)
        .collect();
    let solution = solve_fractional_master_mlf(&a, *alpha, &p, &times)?;
    let header = std::iter::once("t".to_string())
        .chain((0..a.dim()).map(|j| format!("p{j}")))
        .collect::<Vec<_>>()
        .join(",");
    let rows: Vec<String> = times
        .iter()
        .zip(&solution)
        .map(|(t, pv)| {
            std::iter::once(t.to_string())
                .chain(pv.vector().iter().map(|x| x.to_string()))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    Ok(csv_doc(
        &format!(
            "master solve alpha={alpha} t0={t0} t1={t1} steps={steps} input={} p0={}",
            input.display(),
            p0.display()
        ),
        &header,
        &rows,
    ))
}

fn waiting_time(arg: WaitingArg, alpha: f64) -> Result<WaitingTime, AppError> {
    Ok(match arg {
        WaitingArg::Exp => WaitingTime::Exponential,
        WaitingArg::Mlf => WaitingTime::mittag_leffler(alpha)?,
        WaitingArg::Wplus => WaitingTime::wplus(alpha)?,
    })
}

fn run_ssa(cmd: &SsaCmd, seed: u64) -> Result<String, AppError> {
    let SsaCmd::Schlogl {
        alpha,
        waiting,
        n,
        t,
        x0,
        trajectory,
    } = cmd;
    let waiting_name = match waiting {
        WaitingArg::Exp => "exp",
        WaitingArg::Mlf => "mlf",
        WaitingArg::Wplus => "wplus",
    };
    let waiting = waiting_time(*waiting, *alpha)?;
    let net = schlogl_network(SchloglParams::default());
    if let Some(path) = trajectory {
        let mut rng = RngStream::new(seed, 0);
        let traj = ssa::simulate_trajectory(&net, waiting, *x0, *t, &mut rng)?;
        let rows: Vec<String> = traj
            .times
            .iter()
            .zip(&traj.states)
            .map(|(time, state)| format!("{time},{state}"))
            .collect();
        let doc = csv_doc(
            &format!(
                "ssa schlogl trajectory waiting={waiting_name} alpha={alpha} t={t} x0={x0} seed={seed} stream=0"
            ),
            "time,state",
            &rows,
        );
        std::fs::write(path, doc)?;
    }
    let hist = ensemble_histogram(&net, waiting, *x0, &[*t], *n, seed)?.remove(0);
    let rows: Vec<String> = hist
        .counts
        .iter()
        .enumerate()
        .map(|(state, count)| format!("{state},{count}"))
        .collect();
    Ok(csv_doc(
        &format!(
            "ssa schlogl waiting={waiting_name} alpha={alpha} n={n} t={t} x0={x0} seed={seed}"
        ),
        "state,count",
        &rows,
    ))
}

fn run_figures(args: &FiguresArgs, seed: u64) -> Result<String, AppError> {
    std::fs::create_dir_all(&args.out_dir)?;
    let write = |name: &str, doc: String| -> Result<(), AppError> {
        std::fs::write(args.out_dir.join(name), doc)?;
        Ok(())
    };

    // fig1: classical vs fractional compound-interest iterates
    {
        let (alpha, t, n) = (0.7, 5.0, 256usize);
        let classical = euler::euler_classic(t, n);
        let fractional = euler::frac_euler(alpha, Sign::Plus, t, n)?;
        let rows: Vec<String> = (0..=n)
            .map(|j| {
                format!(
                    "{},{},{}",
                    j as f64 * classical.h,
                    classical.values[j],
                    fractional.values[j]
                )
            })
            .collect();
        write(
            "fig1.csv",
            csv_doc(
                &format!("figures fig1 alpha={alpha} t={t} n={n}"),
                "t,classical,fractional",
                &rows,
            ),
        )?;
    }

    // fig3: the mixture density w- and its log-substituted integrand
    {
        let alpha = 0.7;
        let spec = DensitySpec::new(MlfParams::new(alpha, 1.0)?, DensityKind::WMinus)?;
        let rows: Result<Vec<String>, fracteuler::Error> = (0..=400)
            .map(|k| {
                let x = -10.0 + k as f64 * 0.05;
                let s = x.exp();
                let w = densities::density_eval(&spec, s)?;
                Ok(format!("{s},{w},{x},{}", w * s))
            })
            .collect();
        write(
            "fig3.csv",
            csv_doc(
                &format!("figures fig3 alpha={alpha} lambda=1"),
                "s,w_minus,x,integrand",
                &rows?,
            ),
        )?;
    }

    // fig4: survival comparison, exponential vs Mittag-Leffler
    {
        let alpha = 0.9;
        let params = MlfParams::new(alpha, 1.0)?;
        let rows: Result<Vec<String>, fracteuler::Error> = (0..=200)
            .map(|k| {
                let t = k as f64 * 0.05;
                let ml = special::mlf(params, Sign::Minus, t)?;
                Ok(format!("{t},{},{ml}", (-t).exp()))
            })
            .collect();
        write(
            "fig4.csv",
            csv_doc(
                &format!("figures fig4 alpha={alpha} lambda=1"),
                "t,exp_survival,ml_survival",
                &rows?,
            ),
        )?;
    }

    // fig5: Schlogl ensemble histograms, exponential vs Mittag-Leffler
    {
        let alpha = 0.7;
        let net = schlogl_network(SchloglParams::default());
        let exp_hist =
            ensemble_histogram(&net, WaitingTime::Exponential, 247, &[args.t], args.n, seed)?
                .remove(0);
        let ml_hist = ensemble_histogram(
            &net,
            WaitingTime::mittag_leffler(alpha)?,
            247,
            &[args.t],
            args.n,
            seed.wrapping_add(1),
        )?
        .remove(0);
        let len = exp_hist.counts.len().max(ml_hist.counts.len());
        let rows: Vec<String> = (0..len)
            .map(|state| {
                format!(
                    "{state},{},{}",
                    exp_hist.count(state as u64),
                    ml_hist.count(state as u64)
                )
            })
            .collect();
        write(
            "fig5.csv",
            csv_doc(
                &format!(
                    "figures fig5 alpha={alpha} n={} t={} seed={seed}",
                    args.n, args.t
                ),
                "state,count_exponential,count_mlf",
                &rows,
            ),
        )?;
    }

    Ok(format!(
        "# fracteuler v{}\n# wrote fig1.csv fig3.csv fig4.csv fig5.csv to {}\n",
        env!("CARGO_PKG_VERSION"),
        args.out_dir.display()
    ))
}
