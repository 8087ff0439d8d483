//! The BCH group law on 3 Lambda for the pure quaternions, and the match between group
//! commutation and Lie commutation.

use cagroups::lie::{self, rational};
use rand::SeedableRng;

fn main() -> cagroups::Result<()> {
    let q = lie::build_pure_quaternions(rational(-1), rational(-1))?;
    let bch = lie::Bch::new(&q, 3, 6)?;
    println!("BCH truncated at degree {} for precision 3^{}", bch.degree(), bch.precision());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let (u, v) = (bch.random(&mut rng), bch.random(&mut rng));
    let uv = bch.multiply(&u, &v)?;
    println!("u * v = {uv:?}");
    println!("u * u^-1 = 0: {}", bch.is_zero(&bch.multiply(&u, &bch.inverse(&u))?));
    let audit = lie::group_lie_commutation_audit(&q, 3, 6, 100, 1)?;
    println!("commutation audit: {} mismatches in {} trials", audit.violations, audit.trials);
    Ok(())
}
