//! Chromatic number by branch-and-price.
//!
//!     cargo run --release --example branch_and_price -- myciel4

use std::time::Duration;

use fraccol::bnp::{is_proper_coloring, run_bnp, BnpConfig};
use fraccol::colgen::{Backend, CgConfig, Selection};
use fraccol::graph::families;

fn main() -> fraccol::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "myciel3".into());
    let g = families::by_name(&name).ok_or_else(|| fraccol::Error::Param(format!("unknown graph {name}")))?;
    let cg = CgConfig::new(Backend::Mlph, Selection::AddPartial, 1)
        .with_budgets(Duration::from_secs(60), Duration::from_secs(5));
    let stats = run_bnp(&g, &BnpConfig::new(cg))?;
    assert!(is_proper_coloring(&g, &stats.coloring));
    println!("{name}: {:?} after {} nodes", stats.status, stats.nodes_explored);
    println!("chi <= {}, lower bound {}, root LP {:?}", stats.upper_bound, stats.global_lower_bound, stats.root_lp);
    if let Some(gap) = stats.gap {
        println!("gap {gap:.2}%");
    }
    Ok(())
}
