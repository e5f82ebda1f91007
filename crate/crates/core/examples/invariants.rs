//! rank_n, diam_nfg and Δ for the catalog groups up to order 12.
//!
//! cargo run --release --example invariants

use wordmetric::catalog::catalog_up_to;
use wordmetric::invariants::summarize;

fn main() -> wordmetric::error::Result<()> {
    println!("{:<10} {:>5} {:>7} {:>9} {:>6}", "group", "order", "rank_n", "diam_nfg", "delta");
    for g in catalog_up_to(12) {
        let s = summarize(&g, 4, 0)?;
        let bound = if s.delta.exhaustive { "" } else { " (lower bound)" };
        println!("{:<10} {:>5} {:>7} {:>9} {:>6}{bound}", s.group, s.order, s.rank_n.value.to_string(), s.diam_nfg.value.to_string(), s.delta.value.to_string());
    }
    Ok(())
}
