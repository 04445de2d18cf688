//! Command-line front door: solve raw instances, fit sparse SDR on
//! datasets, tune the sparsity, and run benchmark grids. Exit codes:
//! 0 solved (Optimal/GapReached), 2 node/time limit hit, 1 input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use optsgep::bnb;
use optsgep::io;
use optsgep::model_select::{select_k, Criterion, IcResult};
use optsgep::problem::{Branching, Certificate, SgepProblem, SolverOptions, SolverStatus};
use optsgep::sdr::{fit_sparse_sdr, SdrEstimate, SdrMethod};
use optsgep::simbench::{run_experiment, BenchConfig};

#[derive(Parser)]
#[command(name = "optsgep", about = "Certifiably optimal sparse generalized eigenvalue problems", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchingArg {
    Random,
    DiagRatio,
    RestrictedEig,
    GlobalEig,
}

impl From<BranchingArg> for Branching {
    fn from(value: BranchingArg) -> Self {
        match value {
            BranchingArg::Random => Branching::Random,
            BranchingArg::DiagRatio => Branching::DiagRatio,
            BranchingArg::RestrictedEig => Branching::RestrictedEig,
            BranchingArg::GlobalEig => Branching::GlobalEig,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Sir,
    Pfc,
    Save,
    PhdY,
    PhdR,
    Dr,
}

impl MethodArg {
    fn to_method(self, slices: usize) -> SdrMethod {
        match self {
            MethodArg::Sir => SdrMethod::Sir { n_slices: slices },
            MethodArg::Pfc => SdrMethod::Pfc,
            MethodArg::Save => SdrMethod::Save { n_slices: slices },
            MethodArg::PhdY => SdrMethod::PhdY,
            MethodArg::PhdR => SdrMethod::PhdR,
            MethodArg::Dr => SdrMethod::Dr { n_slices: slices },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Aic,
    Bic,
}

impl From<CriterionArg> for Criterion {
    fn from(value: CriterionArg) -> Self {
        match value {
            CriterionArg::Aic => Criterion::Aic,
            CriterionArg::Bic => Criterion::Bic,
        }
    }
}

#[derive(clap::Args)]
struct SolverFlags {
    #[arg(long, value_enum, default_value = "global-eig")]
    branching: BranchingArg,
    #[arg(long, default_value_t = 200)]
    max_depth: usize,
    /// Rifle iterations per node.
    #[arg(long, default_value_t = 2)]
    n1: usize,
    /// ADMM iterations per node.
    #[arg(long, default_value_t = 1)]
    n2: usize,
    /// Rifle step size.
    #[arg(long, default_value_t = 0.01)]
    eta: f64,
    #[arg(long)]
    node_limit: Option<u64>,
    /// Wall-clock cap in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverFlags {
    fn to_options(&self) -> SolverOptions {
        SolverOptions {
            max_depth: self.max_depth,
            branching: self.branching.into(),
            n1: self.n1,
            n2: self.n2,
            eta: self.eta,
            node_limit: self.node_limit,
            time_limit: self.time_limit,
            seed: self.seed,
            ..SolverOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance from matrix files and print the certificate.
    Solve {
        /// Kernel matrix A (headerless CSV).
        #[arg(long = "A")]
        a: PathBuf,
        /// Constraint matrix B (headerless CSV).
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long)]
        k: usize,
        /// Optimality tolerance.
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[command(flatten)]
        solver: SolverFlags,
        /// Emit one `nodes,lb,ub` line per expansion on stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Fit sparse SDR directions on a dataset (y in the first column).
    Sdr {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, default_value_t = 5)]
        slices: usize,
        #[arg(long)]
        k: usize,
        /// Number of directions.
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Pick the sparsity k by an information criterion.
    Tune {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, default_value_t = 5)]
        slices: usize,
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Run a benchmark grid and write records.csv + summary.json.
    Bench {
        /// Grid file: one `model=,n=,p=,methods=,reps=,k=` line per cell.
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
    },
}

#[derive(Serialize)]
struct CertificateOut {
    objective: f64,
    gap: f64,
    /// 1-based support indices.
    support: Vec<usize>,
    v: Vec<f64>,
    nodes: u64,
    time_lb_s: f64,
    time_ub_s: f64,
    status: SolverStatus,
}

impl CertificateOut {
    fn from(cert: &Certificate) -> Self {
        CertificateOut {
            objective: cert.objective,
            gap: cert.gap,
            support: cert.support().iter().map(|i| i + 1).collect(),
            v: cert.v_hat.iter().copied().collect(),
            nodes: cert.nodes_explored,
            time_lb_s: cert.time_to_lower,
            time_ub_s: cert.time_to_upper,
            status: cert.status,
        }
    }
}

#[derive(Serialize)]
struct EstimateOut {
    /// Column-major: one inner array per direction.
    directions: Vec<Vec<f64>>,
    /// 1-based support indices per direction.
    supports: Vec<Vec<usize>>,
    objectives: Vec<f64>,
    k: usize,
}

impl EstimateOut {
    fn from(est: &SdrEstimate) -> Self {
        EstimateOut {
            directions: (0..est.directions.ncols())
                .map(|j| est.directions.column(j).iter().copied().collect())
                .collect(),
            supports: est
                .supports
                .iter()
                .map(|s| s.iter().map(|i| i + 1).collect())
                .collect(),
            objectives: est.objectives.clone(),
            k: est.k_used,
        }
    }
}

#[derive(Serialize)]
struct TuneOut {
    k_star: usize,
    criterion: &'static str,
    table: Vec<IcResult>,
}

fn run(cli: Cli) -> optsgep::Result<ExitCode> {
    match cli.command {
        Command::Solve { a, b, k, eps, solver, trace } => {
            let a = io::read_matrix(&a)?;
            let b = io::read_matrix(&b)?;
            let problem = SgepProblem::new(a, b, k, eps)?;
            let options = solver.to_options();
            let cert = if trace {
                bnb::solve_traced(&problem, &options, |r| {
                    eprintln!("{},{},{}", r.explored, r.lb, r.ub);
                })?
            } else {
                bnb::solve(&problem, &options)?
            };
            println!("{}", serde_json::to_string_pretty(&CertificateOut::from(&cert)).expect("serializable"));
            Ok(match cert.status {
                SolverStatus::Optimal | SolverStatus::GapReached => ExitCode::SUCCESS,
                SolverStatus::NodeLimit | SolverStatus::TimeLimit => ExitCode::from(2),
            })
        }
        Command::Sdr { data, method, slices, k, d, solver } => {
            let data = io::read_dataset(&data)?;
            let fit = fit_sparse_sdr(
                &data,
                method.to_method(slices),
                k,
                d,
                1e-6,
                &solver.to_options(),
            )?;
            println!("{}", serde_json::to_string_pretty(&EstimateOut::from(&fit.estimate)).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Tune { data, method, slices, criterion, kmax, d, solver } => {
            let data = io::read_dataset(&data)?;
            let method = method.to_method(slices);
            let options = solver.to_options();
            let criterion: Criterion = criterion.into();
            let range: Vec<usize> = (1..=kmax.min(data.p())).collect();
            let (k_star, table) = select_k(
                |k| {
                    let fit = fit_sparse_sdr(&data, method, k, d, 1e-6, &options)?;
                    Ok(fit
                        .problems
                        .iter()
                        .cloned()
                        .zip(
                            (0..fit.estimate.directions.ncols())
                                .map(|j| fit.estimate.directions.column(j).into_owned()),
                        )
                        .collect())
                },
                &range,
                data.n(),
                criterion,
            )?;
            let out = TuneOut { k_star, criterion: criterion.label(), table };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { config, out, solver } => {
            let text = std::fs::read_to_string(&config)?;
            let config = BenchConfig::parse(&text)?;
            run_experiment(&config, &solver.to_options(), Some(&out))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
