//! Build the (A, B) kernel pair of every supported inverse-regression
//! method on one dataset and compare their leading sparse directions.
//!
//! Run with: cargo run --release --example kernel_zoo

use optsgep::problem::SolverOptions;
use optsgep::sdr::{fit_sparse_sdr, Dataset, SdrMethod};
use optsgep::simbench::{gen_model, ModelSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> optsgep::Result<()> {
    // quadratic-flavored response so second-moment methods have signal too
    let spec = ModelSpec { model_id: 3, n: 400, p: 20, seed: 17 };
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (x, y, _) = gen_model(&spec, &mut rng)?;
    let data = Dataset::new(x, y)?;
    let options = SolverOptions::default();

    let methods = [
        SdrMethod::Sir { n_slices: 5 },
        SdrMethod::Pfc,
        SdrMethod::Save { n_slices: 5 },
        SdrMethod::PhdY,
        SdrMethod::PhdR,
        SdrMethod::Dr { n_slices: 5 },
    ];
    println!("true active set: {{1, 2, 3}}\n");
    println!("{:<8} {:>24} {:>12}", "method", "support (1-based)", "objective");
    for method in methods {
        let fit = fit_sparse_sdr(&data, method, 3, 1, 1e-6, &options)?;
        let support: Vec<usize> =
            fit.estimate.supports[0].iter().map(|i| i + 1).collect();
        println!(
            "{:<8} {:>24} {:>12.5}",
            method.label(),
            format!("{support:?}"),
            fit.estimate.objectives[0]
        );
    }
    Ok(())
}
