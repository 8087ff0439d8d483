//! A cyclic division algebra of degree 3 over Q_5: the torus Delta, reduced norms,
//! centralizers and the CA criteria.

use cagroups::division::{ca_criteria, central_witness, centralizer_dimension, transitivity_audit, AlgebraElement, CyclicAlgebra};

fn main() -> cagroups::Result<()> {
    let d = CyclicAlgebra::new(5, 3, 12)?;
    let x = AlgebraElement::x(&d);
    println!("Nrd(x) = {}, v(x) = {}", x.reduced_norm()?, x.valuation()?);
    println!("|Delta| = {}", d.delta_torus()?.len());
    let g = d.sample_sl1n(2, 1)?;
    println!(
        "sampled g in SL_1^2(D): level {}, dim C(g) = {}",
        g.congruence_level()?,
        centralizer_dimension(&g)?
    );
    for (p, l) in [(5, 3), (3, 2)] {
        let crit = ca_criteria(p, l as u64, 1)?;
        println!("(p, l) = ({p}, {l}): {crit:?}");
        let alg = CyclicAlgebra::new(p, l, 12)?;
        if crit.sl1_ca {
            let audit = transitivity_audit(&alg, 0, 50, 3)?;
            println!("  transitivity audit: {} violations in {} trials", audit.violations, audit.trials);
        } else if let Some(w) = central_witness(&alg, 3)? {
            println!("  witness (zeta, g, h) verified: {}", w.verify());
        }
    }
    Ok(())
}
