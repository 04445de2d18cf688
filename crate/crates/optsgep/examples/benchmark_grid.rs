//! Run a small benchmark grid (certified solver vs the standalone Rifle
//! heuristic) and print the per-cell summary. The same machinery backs the
//! `optsgep bench` subcommand; an output directory would additionally get
//! records.csv and summary.json.
//!
//! Run with: cargo run --release --example benchmark_grid

use optsgep::problem::SolverOptions;
use optsgep::simbench::{run_experiment, summarize, BenchConfig};

fn main() -> optsgep::Result<()> {
    let grid = "\
# desk-scale cells: model, size, methods, replications, sparsity
model=1,n=150,p=50,methods=bb-sir+heuristic-rifle-sir,reps=5,k=3,seed=2
model=3,n=150,p=50,methods=bb-sir+heuristic-rifle-sir,reps=5,k=3,seed=2
";
    let config = BenchConfig::parse(grid)?;
    let records = run_experiment(&config, &SolverOptions::default(), None)?;

    println!(
        "{:<7} {:<22} {:>8} {:>8} {:>8} {:>8}",
        "model", "method", "TPR", "FPR", "delta", "nodes"
    );
    for cell in summarize(&records) {
        println!(
            "{:<7} {:<22} {:>8.3} {:>8.4} {:>8.3} {:>8.0}",
            cell.model, cell.method, cell.tpr_mean, cell.fpr_mean, cell.delta_mean, cell.nodes_mean
        );
    }
    println!("\n({} records over {} cells)", records.len(), config.cells.len());
    Ok(())
}
