//! Fractional chromatic number of a graph by column generation.
//!
//!     cargo run --release --example column_generation -- myciel5 mlph

use fraccol::colgen::{run_cg, Backend, CgConfig, Selection};
use fraccol::graph::families;

fn main() -> fraccol::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "myciel4".into());
    let backend: Backend = args.next().as_deref().unwrap_or("mlph").parse()?;
    let g = families::by_name(&name).ok_or_else(|| fraccol::Error::Param(format!("unknown graph {name}")))?;
    let cfg = CgConfig::new(backend, Selection::AddPartial, 1);
    let (rmp, stats) = run_cg(&g, &cfg)?;
    println!("{name}: {} after {} iterations ({:?})", stats.status.name(), stats.iterations, stats.wall_time);
    println!("objective {:.6} with {} columns, {} exact calls", rmp.objective(), rmp.len(), stats.exact_calls);
    Ok(())
}
