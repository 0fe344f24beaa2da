//! Builds the benchmark graphs and writes them as DIMACS files.
//!
//!     cargo run --release --example benchmark_graphs -- data

use std::path::PathBuf;

use fraccol::graph::families;

fn main() -> fraccol::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    std::fs::create_dir_all(&dir)?;
    for name in ["myciel3", "myciel4", "myciel5", "queen8_8", "2-Insertions_3", "1-FullIns_4"] {
        let g = families::by_name(name).expect("known family");
        let path = dir.join(format!("{name}.col"));
        std::fs::write(&path, g.to_dimacs())?;
        // parse it back to make sure the file is usable
        let back = fraccol::Graph::parse_dimacs(&std::fs::read_to_string(&path)?)?;
        assert_eq!(back, g);
        println!("{:<16} n={:<4} m={:<5} density={:.3}  -> {}", name, g.n(), g.edge_count(), g.density(), path.display());
    }
    Ok(())
}
