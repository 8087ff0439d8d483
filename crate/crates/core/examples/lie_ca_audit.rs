//! CA audits over the Lie algebra constructors, with exact witnesses where CA fails.

use cagroups::lie::{self, rational, CyclicFieldModel};

fn main() -> cagroups::Result<()> {
    let sl3 = lie::build_quasi_split_sl3(rational(2))?;
    let d4 = lie::build_derived_cyclic(4, CyclicFieldModel::preset(4)?, rational(3))?;
    let d3 = lie::build_derived_cyclic(3, CyclicFieldModel::preset(3)?, rational(3))?;
    let cases = [
        ("sl2", lie::build_sl2(), vec![]),
        (
            "pure quaternions (-1,-1)",
            lie::build_pure_quaternions(rational(-1), rational(-1))?,
            vec![],
        ),
        ("derived cyclic n=3", d3.algebra, d3.probes),
        ("quasi-split sl3", sl3.algebra, sl3.triple.to_vec()),
        ("derived cyclic n=4", d4.algebra, d4.probes),
    ];
    for (name, alg, probes) in cases {
        let audit = alg.ca_audit(&probes, 200, 1);
        match audit.witness {
            Some(w) => println!("{name} (dim {}): not CA, witness {}", alg.dim(), w.to_json(&alg)),
            None => println!("{name} (dim {}): no witness in {} trials", alg.dim(), audit.report.trials),
        }
    }
    Ok(())
}
