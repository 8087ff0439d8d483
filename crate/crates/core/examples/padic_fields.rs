//! Unramified extensions of Q_p: Frobenius, Teichmuller lifts, norms and roots of unity.

use cagroups::padic::{has_primitive_ell_root, norm_to_base, teichmuller, UnramifiedElement, UnramifiedField};

fn main() -> cagroups::Result<()> {
    let w = UnramifiedField::new(5, 3, 10)?;
    println!("W = Q_5(t), t root of {:?}, precision 5^10", w.modulus());
    let t = UnramifiedElement::generator(&w);
    let frob = t.frobenius();
    println!("Frobenius has order 3: {}", frob.frobenius().frobenius().agrees_with(&t));
    let z = teichmuller(&w, &[2, 1, 0])?;
    println!(
        "Teichmuller lift of 2+t satisfies z^124 = 1: {}",
        z.pow(124).agrees_with(&UnramifiedElement::one(&w))
    );
    println!("N(z) = {}", norm_to_base(&z)?);
    for (p, ell) in [(5, 3), (7, 3), (3, 2), (13, 3)] {
        println!(
            "Q_{p} contains a primitive root of unity of order {ell}: {}",
            has_primitive_ell_root(p, 1, ell)?
        );
    }
    Ok(())
}
