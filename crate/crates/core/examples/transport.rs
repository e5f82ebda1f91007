//! Moving subsets along the quotient map D4 -> D4/Z(D4) and checking the
//! metric bounds that come with it.
//!
//! cargo run --example transport

use std::sync::Arc;

use wordmetric::group::{quotient_by_normal, FiniteGroup};
use wordmetric::metric::nu_h;
use wordmetric::report::Sample;
use wordmetric::transport::{eta_context, pullback, pushforward, qi_bounds_check, retraction_defect, verify_pullback_isometry};

fn main() -> wordmetric::error::Result<()> {
    let g = Arc::new(FiniteGroup::dihedral(4)?);
    let center = g.center();
    let (q, f) = quotient_by_normal(&g, &center)?;
    println!("{} / {center} has order {}", g.name(), q.order());

    let t = g.subset([0, 1, 4])?;
    let image = pushforward(&f, &t);
    println!("f({t}) = {image}, f^-1 f({t}) = {}", pullback(&f, &image));

    let (s, u) = (q.subset([1, 2])?, q.full_set());
    let (ps, pu) = (pullback(&f, &s), pullback(&f, &u));
    println!("nu_H({s}, {u}) = {} and upstairs {}", nu_h(&q, &s, &u), nu_h(&g, &ps, &pu));

    let d = retraction_defect(&f, &t)?;
    println!("nu_H_hat({t}, f^-1 f({t})) = {} <= nu_H({t}, K) + 1 = {}", d.defect, d.bound);

    let ctx = eta_context(&f, None)?;
    println!("kernel generators B = {}, m0 = {}", ctx.b(), ctx.m0());
    let lifted = ctx.eta(&q.full_set())?;
    println!("eta(G/K) = {lifted}");

    for r in [verify_pullback_isometry(&f, Sample::Exhaustive)?, qi_bounds_check(&f, None, None, Sample::Exhaustive)?] {
        print!("{r}");
    }
    Ok(())
}
