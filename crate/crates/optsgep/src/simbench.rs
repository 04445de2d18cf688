//! Simulation benchmark: the four synthetic regression models, support and
//! subspace-recovery metrics, the heuristic baseline, and the experiment
//! runner that writes per-rep CSV records plus a JSON summary.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::linalg::chol;
use crate::model_select::{select_k, Criterion};
use crate::problem::{Node, SgepProblem, SolverOptions, SolverStatus};
use crate::sdr::{fit_sparse_sdr_with, Dataset, SdrEstimate, SdrMethod};

/// One synthetic regression model instance.
#[derive(Debug, Clone, Copy)]
pub struct ModelSpec {
    /// 1–4.
    pub model_id: u8,
    pub n: usize,
    pub p: usize,
    pub seed: u64,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.model_id) {
            return Err(Error::BadSpec(format!("model {} not in 1..=4", self.model_id)));
        }
        if self.n <= self.p {
            return Err(Error::BadSpec(format!("need n > p, got n={} p={}", self.n, self.p)));
        }
        if self.model_id == 4 && self.p < 8 {
            return Err(Error::BadSpec("model 4 needs p >= 8".into()));
        }
        Ok(())
    }
}

/// Draws (X, y, true central-subspace basis). Predictors are N(0, Σ) with
/// Σ_ij = 0.5^{|i−j|}; the response follows the model formula.
pub fn gen_model(
    spec: &ModelSpec,
    rng: &mut ChaCha8Rng,
) -> Result<(DMatrix<f64>, DVector<f64>, DMatrix<f64>)> {
    gen_model_with_noise(spec, rng, true)
}

/// Testing hook: `noise = false` zeroes the error draws so the clean model
/// formula can be asserted exactly.
pub fn gen_model_with_noise(
    spec: &ModelSpec,
    rng: &mut ChaCha8Rng,
    noise: bool,
) -> Result<(DMatrix<f64>, DVector<f64>, DMatrix<f64>)> {
    spec.validate()?;
    let (n, p) = (spec.n, spec.p);
    let sigma = DMatrix::from_fn(p, p, |i, j| 0.5_f64.powi((i as i32 - j as i32).abs()));
    let l = chol(&sigma)?;
    let mut x = DMatrix::zeros(n, p);
    let mut row = DVector::zeros(p);
    for i in 0..n {
        for xi in row.iter_mut() {
            *xi = StandardNormal.sample(rng);
        }
        x.row_mut(i).copy_from(&(&l * &row).transpose());
    }
    let mut y = DVector::zeros(n);
    for i in 0..n {
        let eps: f64 = if noise { StandardNormal.sample(rng) } else { 0.0 };
        let s3 = x[(i, 0)] + x[(i, 1)] + x[(i, 2)];
        y[i] = match spec.model_id {
            1 => s3 + 0.5 * eps,
            2 => s3 + 2.0 * eps,
            3 => 1.0 + (s3 / 3.0_f64.sqrt()).exp() + eps,
            4 => {
                let lead = s3 + x[(i, 3)];
                let tail = x[(i, p - 4)] + x[(i, p - 3)] + x[(i, p - 2)] + 5.0;
                lead.signum() * tail.abs().ln() + 0.1 * eps
            }
            _ => unreachable!("validated above"),
        };
    }
    let basis = true_basis(spec.model_id, p);
    Ok((x, y, basis))
}

/// The true central-subspace basis of each model.
pub fn true_basis(model_id: u8, p: usize) -> DMatrix<f64> {
    match model_id {
        1..=3 => {
            let mut b = DMatrix::zeros(p, 1);
            for i in 0..3 {
                b[(i, 0)] = 1.0;
            }
            b
        }
        4 => {
            let mut b = DMatrix::zeros(p, 2);
            for i in 0..4 {
                b[(i, 0)] = 1.0;
            }
            for i in p - 4..p - 1 {
                b[(i, 1)] = 1.0;
            }
            b
        }
        _ => unreachable!(),
    }
}

/// Frobenius distance between the orthogonal projections onto the column
/// spans of two bases; depends on the spans only.
pub fn subspace_distance(basis: &DMatrix<f64>, other: &DMatrix<f64>) -> Result<f64> {
    Ok((projector(basis)? - projector(other)?).norm())
}

fn projector(basis: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    for j in 0..basis.ncols() {
        if basis.column(j).norm() == 0.0 {
            return Err(Error::ZeroBasis);
        }
    }
    let q = basis.clone().qr().q();
    Ok(&q * q.transpose())
}

fn row_support(basis: &DMatrix<f64>) -> Vec<usize> {
    (0..basis.nrows())
        .filter(|&i| (0..basis.ncols()).any(|j| basis[(i, j)] != 0.0))
        .collect()
}

/// (TPR, FPR, Δ) of an estimate against the true basis. Supports are
/// unions over directions.
pub fn metrics(true_basis: &DMatrix<f64>, estimate: &SdrEstimate) -> Result<(f64, f64, f64)> {
    let truth = row_support(true_basis);
    let est = estimate.support_union();
    let p = true_basis.nrows();
    let hit = est.iter().filter(|i| truth.contains(i)).count();
    let miss = est.len() - hit;
    let tpr = hit as f64 / truth.len() as f64;
    let fpr = if p > truth.len() {
        miss as f64 / (p - truth.len()) as f64
    } else {
        0.0
    };
    let delta = subspace_distance(true_basis, &estimate.directions)?;
    Ok((tpr, fpr, delta))
}

/// Methods the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMethod {
    BbSir,
    BbPfc,
    HeuristicRifleSir,
    HeuristicRiflePfc,
}

impl BenchMethod {
    pub fn label(&self) -> &'static str {
        match self {
            BenchMethod::BbSir => "bb-sir",
            BenchMethod::BbPfc => "bb-pfc",
            BenchMethod::HeuristicRifleSir => "heuristic-rifle-sir",
            BenchMethod::HeuristicRiflePfc => "heuristic-rifle-pfc",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "bb-sir" => Ok(BenchMethod::BbSir),
            "bb-pfc" => Ok(BenchMethod::BbPfc),
            "heuristic-rifle-sir" => Ok(BenchMethod::HeuristicRifleSir),
            "heuristic-rifle-pfc" => Ok(BenchMethod::HeuristicRiflePfc),
            other => Err(Error::Parse(format!("unknown method '{other}'"))),
        }
    }

    fn is_heuristic(&self) -> bool {
        matches!(self, BenchMethod::HeuristicRifleSir | BenchMethod::HeuristicRiflePfc)
    }

    fn sdr_method(&self, slices: usize) -> SdrMethod {
        match self {
            BenchMethod::BbSir | BenchMethod::HeuristicRifleSir => {
                SdrMethod::Sir { n_slices: slices }
            }
            BenchMethod::BbPfc | BenchMethod::HeuristicRiflePfc => SdrMethod::Pfc,
        }
    }
}

/// Fixed sparsity or information-criterion tuning over 1..=kmax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KChoice {
    Fixed(usize),
    Tuned { criterion: Criterion, kmax: usize },
}

/// One grid cell of the benchmark configuration.
#[derive(Debug, Clone)]
pub struct BenchCell {
    pub model: u8,
    pub n: usize,
    pub p: usize,
    pub methods: Vec<BenchMethod>,
    pub reps: usize,
    pub k: KChoice,
    pub slices: usize,
    pub d: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub time_cap: Option<f64>,
}

/// A parsed grid file: one cell per line of comma-separated key=value
/// pairs. `model`, `n`, `p`, `methods` (joined with '+'), and `reps` are
/// required; `k=<int>` or `criterion=aic|bic,kmax=<int>` choose the
/// sparsity; `slices`, `d`, `eps`, `seed`, `time_cap` are optional.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub cells: Vec<BenchCell>,
}

impl BenchConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cells = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            cells.push(Self::parse_cell(line).map_err(|e| {
                Error::Parse(format!("line {}: {e}", lineno + 1))
            })?);
        }
        if cells.is_empty() {
            return Err(Error::Parse("config defines no grid cells".into()));
        }
        Ok(BenchConfig { cells })
    }

    fn parse_cell(line: &str) -> Result<BenchCell> {
        let mut model = None;
        let mut n = None;
        let mut p = None;
        let mut methods = None;
        let mut reps = None;
        let mut k = None;
        let mut criterion = None;
        let mut kmax = None;
        let mut slices = 5usize;
        let mut d = 1usize;
        let mut epsilon = 1e-6;
        let mut seed = 0u64;
        let mut time_cap = None;
        for field in line.split(',') {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{field}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Parse(format!("bad {what} '{value}'"));
            match key {
                "model" => model = Some(value.parse::<u8>().map_err(|_| bad("model"))?),
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad("n"))?),
                "p" => p = Some(value.parse::<usize>().map_err(|_| bad("p"))?),
                "methods" => {
                    let parsed: Result<Vec<_>> =
                        value.split('+').map(|t| BenchMethod::parse(t.trim())).collect();
                    methods = Some(parsed?);
                }
                "reps" => reps = Some(value.parse::<usize>().map_err(|_| bad("reps"))?),
                "k" => k = Some(value.parse::<usize>().map_err(|_| bad("k"))?),
                "criterion" => {
                    criterion = Some(match value {
                        "aic" => Criterion::Aic,
                        "bic" => Criterion::Bic,
                        _ => return Err(bad("criterion")),
                    })
                }
                "kmax" => kmax = Some(value.parse::<usize>().map_err(|_| bad("kmax"))?),
                "slices" => slices = value.parse().map_err(|_| bad("slices"))?,
                "d" => d = value.parse().map_err(|_| bad("d"))?,
                "eps" => epsilon = value.parse().map_err(|_| bad("eps"))?,
                "seed" => seed = value.parse().map_err(|_| bad("seed"))?,
                "time_cap" => time_cap = Some(value.parse().map_err(|_| bad("time_cap"))?),
                other => return Err(Error::Parse(format!("unknown key '{other}'"))),
            }
        }
        let k = match (k, criterion, kmax) {
            (Some(k), None, None) => KChoice::Fixed(k),
            (None, Some(c), Some(m)) => KChoice::Tuned { criterion: c, kmax: m },
            _ => {
                return Err(Error::Parse(
                    "choose either k=<int> or criterion=...,kmax=<int>".into(),
                ))
            }
        };
        Ok(BenchCell {
            model: model.ok_or_else(|| Error::Parse("missing model".into()))?,
            n: n.ok_or_else(|| Error::Parse("missing n".into()))?,
            p: p.ok_or_else(|| Error::Parse("missing p".into()))?,
            methods: methods.ok_or_else(|| Error::Parse("missing methods".into()))?,
            reps: reps.ok_or_else(|| Error::Parse("missing reps".into()))?,
            k,
            slices,
            d,
            epsilon,
            seed,
            time_cap,
        })
    }
}

/// One simulation run's quality and work measurements.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub model: u8,
    pub n: usize,
    pub p: usize,
    pub method: String,
    pub k: usize,
    pub tpr: f64,
    pub fpr: f64,
    pub delta: f64,
    pub time_lb: f64,
    pub time_ub: f64,
    pub nodes: u64,
    pub status: String,
}

pub const RECORD_HEADER: &str = "model,n,p,method,k,tpr,fpr,delta,time_lb,time_ub,nodes,status";

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        let mut row = String::new();
        write!(
            row,
            "{},{},{},{},{},{},{},{},{:.6},{:.6},{},{}",
            self.model,
            self.n,
            self.p,
            self.method,
            self.k,
            self.tpr,
            self.fpr,
            self.delta,
            self.time_lb,
            self.time_ub,
            self.nodes,
            self.status
        )
        .expect("writing to String cannot fail");
        row
    }
}

/// Mean and standard error (sample standard deviation over reps) per cell.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryCell {
    pub model: u8,
    pub n: usize,
    pub p: usize,
    pub method: String,
    pub reps: usize,
    pub tpr_mean: f64,
    pub tpr_se: f64,
    pub fpr_mean: f64,
    pub fpr_se: f64,
    pub delta_mean: f64,
    pub delta_se: f64,
    pub nodes_mean: f64,
    pub time_ub_mean: f64,
}

fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Groups records by (model, n, p, method), preserving first appearance
/// order.
pub fn summarize(records: &[BenchRecord]) -> Vec<SummaryCell> {
    let mut keys: Vec<(u8, usize, usize, String)> = Vec::new();
    for r in records {
        let key = (r.model, r.n, r.p, r.method.clone());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|key| {
            let rows: Vec<&BenchRecord> = records
                .iter()
                .filter(|r| (r.model, r.n, r.p, r.method.as_str()) == (key.0, key.1, key.2, key.3.as_str()))
                .collect();
            let collect = |f: fn(&BenchRecord) -> f64| -> Vec<f64> { rows.iter().map(|r| f(r)).collect() };
            let (tpr_mean, tpr_se) = mean_se(&collect(|r| r.tpr));
            let (fpr_mean, fpr_se) = mean_se(&collect(|r| r.fpr));
            let (delta_mean, delta_se) = mean_se(&collect(|r| r.delta));
            let (nodes_mean, _) = mean_se(&collect(|r| r.nodes as f64));
            let (time_ub_mean, _) = mean_se(&collect(|r| r.time_ub));
            SummaryCell {
                model: key.0,
                n: key.1,
                p: key.2,
                method: key.3,
                reps: rows.len(),
                tpr_mean,
                tpr_se,
                fpr_mean,
                fpr_se,
                delta_mean,
                delta_se,
                nodes_mean,
                time_ub_mean,
            }
        })
        .collect()
}

/// Iteration caps of the standalone Rifle baseline: a long ADMM warm start
/// followed by Rifle run to (near) convergence instead of the solver's
/// two-steps-per-node regime.
pub const HEURISTIC_ADMM_ITERS: usize = 100;
pub const HEURISTIC_RIFLE_ITERS: usize = 600;

/// Standalone heuristic: one direction from the root node, no certificate.
pub fn heuristic_rifle_direction(problem: &SgepProblem, options: &SolverOptions) -> DVector<f64> {
    let root = Node::root(problem.dim());
    let zeta = options.zeta_for(problem.dim());
    let seed_vec = bounds::ladmm_init(
        problem,
        &root,
        problem.pencil_max_vector(),
        HEURISTIC_ADMM_ITERS,
        zeta,
        options.nu,
    );
    let (_, witness) = bounds::rifle_lower(problem, &root, &seed_vec, options.eta, HEURISTIC_RIFLE_ITERS);
    witness
}

fn substream(seed: u64, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep as u64);
    rng
}

fn worst_status(statuses: &[SolverStatus]) -> SolverStatus {
    let rank = |s: &SolverStatus| match s {
        SolverStatus::Optimal => 0,
        SolverStatus::GapReached => 1,
        SolverStatus::NodeLimit => 2,
        SolverStatus::TimeLimit => 3,
    };
    *statuses.iter().max_by_key(|s| rank(s)).unwrap_or(&SolverStatus::Optimal)
}

/// Fits one method on one dataset, tuning k first when requested.
fn run_method(
    cell: &BenchCell,
    method: BenchMethod,
    data: &Dataset,
    base: &SolverOptions,
) -> Result<(SdrEstimate, f64, f64, u64, String, usize)> {
    let sdr_method = method.sdr_method(cell.slices);
    let mut options = base.clone().with_sample_size(data.p(), data.n());
    options.time_limit = cell.time_cap.or(options.time_limit);

    let solve_bb = |problem: &SgepProblem| crate::bnb::solve(problem, &options);

    let fit_for_k = |k: usize| -> Result<(SdrEstimate, Vec<Option<crate::problem::Certificate>>, Vec<SgepProblem>)> {
        if method.is_heuristic() {
            fit_sparse_sdr_with(data, sdr_method, k, cell.d, cell.epsilon, |problem, _| {
                Ok((heuristic_rifle_direction(problem, &options), None))
            })
        } else {
            fit_sparse_sdr_with(data, sdr_method, k, cell.d, cell.epsilon, |problem, _| {
                let cert = solve_bb(problem)?;
                Ok((cert.v_hat.clone(), Some(cert)))
            })
        }
    };

    let started = Instant::now();
    let (k_used, fit) = match cell.k {
        KChoice::Fixed(k) => (k, fit_for_k(k)?),
        KChoice::Tuned { criterion, kmax } => {
            let range: Vec<usize> = (1..=kmax.min(data.p())).collect();
            let mut cache: Vec<Option<_>> = vec![None; kmax + 1];
            let (k_star, _) = select_k(
                |k| {
                    let fit = fit_for_k(k)?;
                    let pairs = fit
                        .2
                        .iter()
                        .cloned()
                        .zip((0..fit.0.directions.ncols()).map(|j| fit.0.directions.column(j).into_owned()))
                        .collect();
                    cache[k] = Some(fit);
                    Ok(pairs)
                },
                &range,
                data.n(),
                criterion,
            )?;
            (k_star, cache[k_star].take().expect("scored k was cached"))
        }
    };
    let elapsed = started.elapsed().as_secs_f64();

    let (estimate, certificates, _) = fit;
    let certs: Vec<_> = certificates.into_iter().flatten().collect();
    if certs.is_empty() {
        // heuristic path: wall-clock only, no certificate
        Ok((estimate, elapsed, elapsed, 0, "Heuristic".to_string(), k_used))
    } else {
        let time_lb = certs.iter().map(|c| c.time_to_lower).sum();
        let time_ub = certs.iter().map(|c| c.time_to_upper).sum();
        let nodes = certs.iter().map(|c| c.nodes_explored).sum();
        let statuses: Vec<_> = certs.iter().map(|c| c.status).collect();
        Ok((estimate, time_lb, time_ub, nodes, worst_status(&statuses).to_string(), k_used))
    }
}

/// Runs every (cell, rep, method) combination; when `out_dir` is given the
/// records stream into `records.csv` as they are produced and a
/// `summary.json` is written at the end.
pub fn run_experiment(
    config: &BenchConfig,
    base_options: &SolverOptions,
    out_dir: Option<&Path>,
) -> Result<Vec<BenchRecord>> {
    let mut csv = match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let mut f = fs::File::create(dir.join("records.csv"))?;
            writeln!(f, "{RECORD_HEADER}")?;
            Some(f)
        }
        None => None,
    };
    let mut records = Vec::new();
    for cell in &config.cells {
        ModelSpec { model_id: cell.model, n: cell.n, p: cell.p, seed: cell.seed }.validate()?;
        for rep in 0..cell.reps {
            let mut rng = substream(cell.seed, rep);
            let spec = ModelSpec { model_id: cell.model, n: cell.n, p: cell.p, seed: cell.seed };
            let (x, y, basis) = gen_model(&spec, &mut rng)?;
            let data = Dataset::new(x, y)?;
            for &method in &cell.methods {
                let (estimate, time_lb, time_ub, nodes, status, k_used) =
                    run_method(cell, method, &data, base_options)?;
                let (tpr, fpr, delta) = metrics(&basis, &estimate)?;
                let record = BenchRecord {
                    model: cell.model,
                    n: cell.n,
                    p: cell.p,
                    method: method.label().to_string(),
                    k: k_used,
                    tpr,
                    fpr,
                    delta,
                    time_lb,
                    time_ub,
                    nodes,
                    status,
                };
                if let Some(f) = csv.as_mut() {
                    writeln!(f, "{}", record.csv_row())?;
                    f.flush()?;
                }
                records.push(record);
            }
        }
    }
    if let Some(dir) = out_dir {
        let summary = summarize(&records);
        let json = serde_json::to_string_pretty(&summary)
            .map_err(|e| Error::Parse(format!("summary serialization: {e}")))?;
        fs::write(dir.join("summary.json"), json)?;
    }
    Ok(records)
}
