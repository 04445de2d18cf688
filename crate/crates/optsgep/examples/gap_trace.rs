//! Watch the lower/upper bounds close on a random instance. The trace
//! callback fires once per expansion; the same records back the CLI's
//! `--trace` flag.
//!
//! Run with: cargo run --release --example gap_trace

use nalgebra::DMatrix;
use optsgep::bnb;
use optsgep::problem::{SgepProblem, SolverOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> optsgep::Result<()> {
    let p = 14;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let g: DMatrix<f64> = DMatrix::from_fn(p, p, |_, _| StandardNormal.sample(&mut rng));
    let a: DMatrix<f64> = &g * g.transpose();
    let h: DMatrix<f64> = DMatrix::from_fn(p, p, |_, _| StandardNormal.sample(&mut rng));
    let b: DMatrix<f64> = &h * h.transpose() + DMatrix::<f64>::identity(p, p) * 0.1;
    let problem = SgepProblem::new(a, b, 4, 0.0)?;

    println!("{:>6} {:>14} {:>14} {:>10}", "nodes", "lower", "upper", "gap");
    let mut rows = 0usize;
    let cert = bnb::solve_traced(&problem, &SolverOptions::default(), |r| {
        // print the head of the curve and then every 20th expansion
        if r.explored <= 10 || r.explored % 20 == 0 {
            println!("{:>6} {:>14.8} {:>14.8} {:>10.2e}", r.explored, r.lb, r.ub, r.ub - r.lb);
        }
        rows += 1;
    })?;
    println!("...");
    println!(
        "solved: objective {:.8}, {} expansions, status {}",
        cert.objective, cert.nodes_explored, cert.status
    );
    println!(
        "time to final incumbent {:.3}s, time to convergence {:.3}s",
        cert.time_to_lower, cert.time_to_upper
    );
    Ok(())
}
