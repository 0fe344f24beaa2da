//! Runs every pricing backend on the same duals and compares what they find.

use std::time::Duration;

use fraccol::colgen::initial_columns;
use fraccol::graph::families;
use fraccol::mlmodel::Model;
use fraccol::pricing::{aco_price, exact_price, greedy_price, mlph_price, uniform_price, AcoConfig, PricingProblem};
use fraccol::RmpState;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fraccol::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = families::erdos_renyi(60, 0.3, &mut rng);
    let mut rmp = RmpState::build(&g, initial_columns(&g, 2 * g.n(), &mut rng))?;
    rmp.solve()?;
    let p = PricingProblem::new(&g, rmp.duals());
    let lambda = 50 * g.n();
    let runs = [
        ("mlph", mlph_price(&p, &Model::default(), lambda, 1, None)),
        ("uniform", uniform_price(&p, lambda, 1)),
        ("greedy", greedy_price(&p)),
        ("aco", aco_price(&p, &AcoConfig::for_graph(g.n(), 1), None)),
        ("exact", exact_price(&p, Some(Duration::from_secs(10)))),
    ];
    println!("{:<8} {:>8} {:>10} {:>8}", "backend", "columns", "best rc", "proven");
    for (name, r) in &runs {
        println!("{:<8} {:>8} {:>10.4} {:>8}", name, r.columns.len(), r.best_reduced_cost, r.proven_optimal);
    }
    Ok(())
}
