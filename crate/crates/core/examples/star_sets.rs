//! Word lengths in sets with non-associative operations: the dihedral
//! quandle R5, where bracketing matters.
//!
//! cargo run --example star_sets

use wordmetric::report::Sample;
use wordmetric::star::{star_metric_table, star_powers, star_properties, star_word_lengths, StarMetricVariant, StarSet};

fn main() -> wordmetric::error::Result<()> {
    let x = StarSet::dihedral_quandle(5)?;
    x.check_quandle()?;
    let s = x.subset([0, 1])?;

    for (n, p) in star_powers(&x, &s, 4).iter().enumerate() {
        println!("S^{} = {p}", n + 1);
    }
    let lengths: Vec<String> = star_word_lengths(&x, &s)?.iter().map(ToString::to_string).collect();
    println!("nu_S = [{}]", lengths.join(", "));

    for v in [StarMetricVariant::AllParenthesizations, StarMetricVariant::LeftNormed] {
        print!("{v:?}:\n{}", star_metric_table(&x, &s, v)?.to_csv());
    }

    // A spec given as JSON: the two-element left-zero band, x * y = x.
    let band = StarSet::from_json("band", r#"{"size":2,"ops":[[[0,0],[1,1]]]}"#)?;
    let s = band.subset([0])?;
    let lengths: Vec<String> = star_word_lengths(&band, &s)?.iter().map(ToString::to_string).collect();
    println!("band, S = {s}: nu_S = [{}]", lengths.join(", "));

    print!("{}", star_properties(&x, Sample::Exhaustive, 3)?);
    Ok(())
}
