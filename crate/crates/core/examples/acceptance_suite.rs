//! Runs every acceptance criterion and prints one line per criterion,
//! followed by the first few failing checks if any.
//!
//! cargo run --release --example acceptance_suite -- [max_order] [seed]

use std::time::Instant;

use wordmetric::suite::{run_criterion, SuiteConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let max_order = args.next().map_or(16, |a| a.parse().expect("max_order"));
    let seed = args.next().map_or(0, |a| a.parse().expect("seed"));
    let cfg = SuiteConfig { max_order, seed };
    for id in 1..=12 {
        let start = Instant::now();
        let outcome = run_criterion(id, &cfg);
        println!("{}  [{:.1?}]", outcome.line(), start.elapsed());
        for e in &outcome.errors {
            println!("    error: {e}");
        }
        if !outcome.report.is_ok() {
            for (name, t) in outcome.report.checks.iter().filter(|(_, t)| t.failed > 0).take(8) {
                println!("    {name}: {} failed, e.g. {}", t.failed, t.witnesses.first().map_or("", |w| w.as_str()));
            }
        }
    }
}
