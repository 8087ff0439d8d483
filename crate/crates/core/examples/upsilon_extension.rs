//! Upsilon(Q8)/4 Omega^- as an explicit group of order 2048: splitting, Frattini property
//! and the centralizer audit.

use std::sync::Arc;

use cagroups::ext::{self, UpsilonTower};
use cagroups::group::quaternion;

fn main() -> cagroups::Result<()> {
    let tower = UpsilonTower::new(Arc::new(quaternion(8)?), 2)?;
    println!("rank Omega = {}, rank Omega^- = {}", tower.omega_rank(), tower.omega_minus_rank());
    for k in 1..=2 {
        let e = tower.level(k)?;
        e.verify()?;
        let split = ext::cocycle_is_coboundary(e.cocycle())?;
        let fr = ext::frattini_quality_check(&e, 16, 1)?;
        let audit = ext::centralizer_audit(&e, 0, 1)?;
        println!(
            "{}: order {}, split {}, Frattini {}, sigma lift inverts {}, audit {} violations over {} elements",
            e.label(),
            e.order(),
            split.is_coboundary,
            fr.holds,
            ext::sigma_lift_inverts(&e, tower.sigma()),
            audit.violations,
            audit.trials
        );
    }
    println!("level 2 reduces onto level 1: {}", tower.compatible(1)?);
    for g in ["c4", "cyclic(6)", "q8", "sl2_3"] {
        let r = ext::upsilon_iso_classifier(Arc::new(cagroups::group::named(g)?))?;
        println!("{}: Upsilon -> G is an isomorphism: {}", r.group, r.tau_is_isomorphism);
    }
    Ok(())
}
