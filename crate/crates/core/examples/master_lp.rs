//! Solves a restricted master LP on the 5-cycle and prints primal and duals.

use fraccol::graph::families;
use fraccol::{Column, RmpState, VertexSet};

fn main() -> fraccol::Result<()> {
    let g = families::cycle(5);
    // the five maximum independent sets {i, i+2}
    let cols: Vec<Column> = (0..5).map(|i| Column::new(VertexSet::new(vec![i, (i + 2) % 5]))).collect();
    let mut rmp = RmpState::build(&g, cols)?;
    rmp.solve()?;
    println!("objective {:.6}", rmp.objective());
    for (c, x) in rmp.columns().iter().zip(rmp.primal()) {
        println!("  x{:?} = {:.3}", c.set.members(), x);
    }
    println!("duals {:?}", rmp.duals().0);
    println!("{}", rmp.to_lp_format());
    Ok(())
}
