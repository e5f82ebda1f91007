//! Word metrics on sets acted on by a group: S3 permuting three points, and
//! the inner automorphism group of a dihedral quandle.
//!
//! cargo run --example actions

use wordmetric::action::{action_metric_table, automorphism_action, comparison_bound_check, orbit_map_check, orbit_map_strict, GroupAction};
use wordmetric::star::StarSet;

fn main() -> wordmetric::error::Result<()> {
    let a = GroupAction::symmetric_on_points(3)?;
    let g = a.group();
    let s = g.subset([1])?;
    print!("{} with S = {s}:\n{}", a.name(), action_metric_table(&a, &s)?.to_csv());
    println!("free point: {:?}", a.free_point());
    print!("{}", orbit_map_check(&a, &s, 0)?);
    println!("pairs where the orbit map contracts: {:?}", orbit_map_strict(&a, &s, 0)?);

    let t = g.subset([1, 2])?;
    print!("{}", comparison_bound_check(&a, &s, &t)?);

    let r5 = StarSet::dihedral_quandle(5)?;
    let qa = automorphism_action(&r5)?;
    println!("Inn(R5) has order {}", qa.action.group().order());
    for (name, gens) in [("Inn", &qa.inn_generators), ("Dis", &qa.dis_generators)] {
        print!("{name} generators {gens}:\n{}", action_metric_table(&qa.action, gens)?.to_csv());
    }
    Ok(())
}
