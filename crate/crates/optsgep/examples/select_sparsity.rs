//! Pick the sparsity budget k with the BIC-type criterion: solve for each
//! candidate, score residual-plus-penalty, keep the minimizer.
//!
//! Run with: cargo run --release --example select_sparsity

use optsgep::model_select::{select_k, Criterion};
use optsgep::problem::SolverOptions;
use optsgep::sdr::{fit_sparse_sdr, Dataset, SdrMethod};
use optsgep::simbench::{gen_model, ModelSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> optsgep::Result<()> {
    let spec = ModelSpec { model_id: 1, n: 300, p: 80, seed: 31 };
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (x, y, _) = gen_model(&spec, &mut rng)?;
    let data = Dataset::new(x, y)?;
    let options = SolverOptions::default();

    let range: Vec<usize> = (1..=6).collect();
    let (k_star, table) = select_k(
        |k| {
            let fit = fit_sparse_sdr(&data, SdrMethod::Sir { n_slices: 5 }, k, 1, 1e-6, &options)?;
            Ok(fit
                .problems
                .iter()
                .cloned()
                .zip((0..1).map(|j| fit.estimate.directions.column(j).into_owned()))
                .collect())
        },
        &range,
        data.n(),
        Criterion::Bic,
    )?;

    println!("{:>3} {:>12} {:>12} {:>12} {:>4}", "k", "fit", "penalty", "score", "df");
    for row in &table {
        let marker = if row.k == k_star { "  <- selected" } else { "" };
        println!(
            "{:>3} {:>12.6} {:>12.6} {:>12.6} {:>4}{marker}",
            row.k, row.fit, row.penalty, row.score, row.df
        );
    }
    println!("\nBIC picks k = {k_star} (the data were generated with 3 active predictors)");
    Ok(())
}
