//! Projective covers, Loewy series and Omega_2 for C3 x| V4 and SL2(3).

use std::sync::Arc;

use cagroups::group::{c3_semidirect_v4, sl2_3};
use cagroups::modrep::{omega2_modp, rank_identities_check, GroupAlgebra, MinimalResolution};

fn show(layers: &[cagroups::modrep::LoewyLayer]) -> String {
    layers.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ; ")
}

fn main() -> cagroups::Result<()> {
    let alg = Arc::new(GroupAlgebra::new(Arc::new(c3_semidirect_v4()?), 1)?);
    println!("C3 x| V4 over {}", alg.ring());
    for i in 0..alg.simple_count() {
        println!(
            "  P({}) = [{}]",
            alg.simple_labels()[i],
            show(&alg.loewy_series(&alg.projective_cover(i)?)?)
        );
    }
    let res = MinimalResolution::new(alg.clone())?;
    println!(
        "  Omega_2 (dim {}) = [{}]",
        res.omega().rank(),
        show(&alg.loewy_series(res.omega())?)
    );
    let g = Arc::new(sl2_3()?);
    println!("SL2(3): dim Omega_2(G, F) = {}", omega2_modp(g.clone())?.omega().rank());
    for c in rank_identities_check(g, 2)?.checks {
        println!("  {}: {} = {} ({})", c.name, c.lhs, c.rhs, c.holds);
    }
    Ok(())
}
