//! Word lengths, word metrics and the subset metric ν_H on a small group.
//!
//! cargo run --example word_metrics

use wordmetric::group::FiniteGroup;
use wordmetric::metric::{check_metric_axioms, hausdorff_metric, nu_h, nu_h_hat, word_lengths, word_metric_table};
use wordmetric::subsets::{power, power_leq};
use wordmetric::extnat::Fin;

fn main() -> wordmetric::error::Result<()> {
    let g = FiniteGroup::cyclic(6)?;
    let s = g.subset([1, 5])?;

    println!("S = {s} in {}", g.name());
    println!("S^2 = {}, S^<=2 = {}", power(&g, &s, Fin(2)), power_leq(&g, &s, Fin(2)));
    let lengths: Vec<String> = word_lengths(&g, &s).iter().map(ToString::to_string).collect();
    println!("nu_S = [{}]", lengths.join(", "));

    let table = word_metric_table(&g, &s);
    print!("d_S:\n{}", table.to_csv());
    println!("d_S is a {}", check_metric_axioms(&table).classification());

    // One-sided generators give an asymmetric metric.
    let one = g.subset([1])?;
    println!("S = {one}: d_S is a {}", check_metric_axioms(&word_metric_table(&g, &one)).classification());

    let (a, b) = (g.subset([0])?, g.subset([2, 3])?);
    println!("(d_S)_H({a}, {b}) = {}", hausdorff_metric(&g, &s, &a, &b));

    let (s2, t2) = (g.subset([0, 1, 5])?, g.subset([0, 2, 4])?);
    println!("nu_H({s2}, {t2}) = {}", nu_h(&g, &s2, &t2));
    println!("nu_H({t2}, {s2}) = {}", nu_h(&g, &t2, &s2));
    println!("symmetrized: {}", nu_h_hat(&g, &s2, &t2));

    let s3 = FiniteGroup::symmetric(3)?;
    let transpositions = s3.subset([0, 1, 2, 5])?;
    let lengths: Vec<String> = word_lengths(&s3, &transpositions).iter().map(ToString::to_string).collect();
    println!("S3, S = transpositions and e: nu_S = [{}]", lengths.join(", "));
    Ok(())
}
