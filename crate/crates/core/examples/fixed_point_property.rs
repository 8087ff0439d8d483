//! The hyperplane Omega circle of SL2(3) and its fixed points under odd-order subgroups.

use std::sync::Arc;

use cagroups::group::sl2_3;
use cagroups::modrep::fixed_point_property_check;

fn main() -> cagroups::Result<()> {
    let r = fixed_point_property_check(Arc::new(sl2_3()?))?;
    println!("{}", serde_json::to_string_pretty(&r.omega_circ).unwrap());
    for c in &r.cases {
        println!("H = <{}>: fixed points of rank {}", c.subgroup.join(", "), c.free_rank);
    }
    println!("fixed-point property: {}", r.holds);
    Ok(())
}
