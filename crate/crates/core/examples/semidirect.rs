//! S3 as Z2 ⋉ A3: the maps ψ, ψ' and φ between pairs of subsets and
//! subsets of the product, and the metric comparison they satisfy.
//!
//! cargo run --example semidirect

use std::sync::Arc;

use wordmetric::group::FiniteGroup;
use wordmetric::product::{psi, psi_suite, sdprod_metric_compare, SemidirectContext};
use wordmetric::report::Sample;

fn main() -> wordmetric::error::Result<()> {
    let g = Arc::new(FiniteGroup::symmetric(3)?);
    let h = g.subset([0, 1])?;
    let k = g.subset([0, 3, 4])?;
    let ctx = SemidirectContext::new(g.clone(), h.clone(), k.clone())?;
    println!("H = {h}, K = {k}, direct: {}", ctx.is_direct());

    for x in g.elements() {
        println!("{x} = h k with (h, k) = {:?}", ctx.split(x));
    }

    let u = g.subset([0, 3])?;
    let (a, b) = (psi(&ctx, &h, &u, &k, false)?, psi(&ctx, &h, &u, &k, true)?);
    println!("psi({h}, {u}) = {a}, psi'({h}, {u}) = {b}, phi(psi') = {:?}", ctx.phi(&b));

    print!("{}", psi_suite(&ctx, &k, Sample::Exhaustive)?);
    print!("{}", sdprod_metric_compare(&ctx, &k, Sample::Exhaustive)?);
    Ok(())
}
