//! The Baker-Campbell-Hausdorff group law on `p Lambda`, `Lambda` the standard
//! lattice of a Lie algebra with `p`-integral structure constants.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::StructureLieAlgebra;
use crate::error::{Error, Result};
use crate::padic::scalar::max_digits;
use crate::padic::PadicScalar;
use crate::report::{trial_rng, AuditReport};

pub const MAX_DEGREE: usize = 20;

/// Words of length `d` in `X = 0`, `Y = 1`, first letter in the high bit, with the
/// coefficient `g_w / d` of the left-normed bracket `[..[w_1, w_2], ..., w_d]`.
type DegreeTerms = Vec<(u32, BigRational)>;

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn letter(word: u32, len: usize, k: usize) -> u32 {
    (word >> (len - 1 - k)) & 1
}

/// Coefficient of the word in `log(exp X exp Y)`.
fn goldberg(word: u32, len: usize) -> BigRational {
    // dp[e][k]: sum over splittings of the first e letters into k blocks X^a Y^b
    let mut dp = vec![vec![BigRational::zero(); len + 1]; len + 1];
    dp[0][0] = BigRational::one();
    for s in 0..len {
        for e in s + 1..=len {
            let block: Vec<u32> = (s..e).map(|k| letter(word, len, k)).collect();
            if block.windows(2).any(|w| w[0] == 1 && w[1] == 0) {
                break;
            }
            let a = block.iter().filter(|&&b| b == 0).count();
            let weight = BigRational::new(BigInt::one(), factorial(a) * factorial(block.len() - a));
            for k in 0..len {
                if !dp[s][k].is_zero() {
                    let add = &dp[s][k] * &weight;
                    dp[e][k + 1] += add;
                }
            }
        }
    }
    (1..=len).fold(BigRational::zero(), |acc, k| {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc + &dp[len][k] * BigRational::new(BigInt::from(sign), BigInt::from(k))
    })
}

fn degree_terms(d: usize) -> Arc<DegreeTerms> {
    static CACHE: OnceLock<Mutex<Vec<Arc<DegreeTerms>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    if let Some(t) = cache.lock().unwrap().get(d) {
        return t.clone();
    }
    let computed: Vec<Arc<DegreeTerms>> = (cache.lock().unwrap().len()..=d)
        .map(|len| {
            if len == 0 {
                return Arc::new(Vec::new());
            }
            if len == 1 {
                return Arc::new(vec![(0, BigRational::one()), (1, BigRational::one())]);
            }
            // left-normed brackets starting with a repeated letter vanish
            let words: Vec<u32> = (0..1u32 << len).filter(|&w| letter(w, len, 0) != letter(w, len, 1)).collect();
            let dd = BigRational::from_integer(BigInt::from(len));
            let terms = words
                .par_iter()
                .filter_map(|&w| {
                    let g = goldberg(w, len);
                    (!g.is_zero()).then(|| (w, g / &dd))
                })
                .collect();
            Arc::new(terms)
        })
        .collect();
    let mut guard = cache.lock().unwrap();
    for t in computed {
        if guard.len() <= d {
            guard.push(t);
        }
    }
    guard[d].clone()
}

/// Smallest `D` with `d - floor((d-1)/(p-1)) >= precision` for all `d >= D`.
pub fn truncation_degree(p: u64, precision: i64) -> Result<usize> {
    if p.is_multiple_of(2) {
        return Err(Error::Unsupported("BCH on p Lambda needs p odd".into()));
    }
    let bound = |d: i64| d - (d - 1) / (p as i64 - 1);
    let d = (1..).find(|&d| bound(d) >= precision).unwrap() as usize;
    if d > MAX_DEGREE {
        return Err(Error::Precision(format!(
            "precision {precision} needs BCH degree {d} > {MAX_DEGREE}"
        )));
    }
    Ok(d.max(1))
}

/// BCH product on `p Lambda` to a fixed precision.
pub struct Bch {
    prime: u64,
    precision: i64,
    degree: usize,
    algebra: StructureLieAlgebra<PadicScalar>,
    coefficients: Vec<HashMap<u32, PadicScalar>>,
}

impl Bch {
    pub fn new(alg: &StructureLieAlgebra, prime: u64, precision: i64) -> Result<Self> {
        let degree = truncation_degree(prime, precision)?;
        let digits = (precision + 2 * degree as i64).min(max_digits(prime) as i64 - 1);
        let to_padic = |c: &BigRational| -> Result<PadicScalar> {
            let (n, d) = (c.numer().to_i128(), c.denom().to_i128());
            match (n, d) {
                (Some(n), Some(d)) => PadicScalar::from_rational(prime, n, d, digits as u32),
                _ => Err(Error::Unsupported(format!("coefficient {c} exceeds i128"))),
            }
        };
        for c in alg.constants().iter().flatten().flatten() {
            to_padic(c)?;
        }
        let padic = alg.map_scalars(&format!("Q_{prime}"), PadicScalar::one(prime, digits), |c| {
            to_padic(c).expect("checked above")
        });
        if padic
            .constants()
            .iter()
            .flatten()
            .flatten()
            .any(|c| c.valuation().is_some_and(|v| v < 0))
        {
            return Err(Error::Domain(format!("structure constants are not {prime}-integral")));
        }
        let coefficients = (1..=degree)
            .map(|d| {
                degree_terms(d)
                    .iter()
                    .map(|(w, c)| to_padic(c).map(|x| (*w, x)))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            prime,
            precision,
            degree,
            algebra: padic,
            coefficients,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn precision(&self) -> i64 {
        self.precision
    }
    pub fn algebra(&self) -> &StructureLieAlgebra<PadicScalar> {
        &self.algebra
    }

    pub fn zero(&self) -> Vec<PadicScalar> {
        vec![PadicScalar::zero(self.prime, self.precision); self.algebra.dim()]
    }

    /// Random element of `p Lambda`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<PadicScalar> {
        (0..self.algebra.dim())
            .map(|_| PadicScalar::random(self.prime, self.precision, 1, rng))
            .collect()
    }

    fn check_lattice(&self, u: &[PadicScalar]) -> Result<()> {
        if u.len() != self.algebra.dim() {
            return Err(Error::Dimension {
                expected: self.algebra.dim(),
                got: u.len(),
            });
        }
        if u.iter().any(|c| c.valuation().is_some_and(|v| v < 1)) {
            return Err(Error::Domain("BCH arguments must lie in p Lambda".into()));
        }
        Ok(())
    }

    /// `log(exp u exp v)` modulo `p^precision`.
    pub fn multiply(&self, u: &[PadicScalar], v: &[PadicScalar]) -> Result<Vec<PadicScalar>> {
        self.check_lattice(u)?;
        self.check_lattice(v)?;
        let letters = [u.to_vec(), v.to_vec()];
        let mut acc = self.zero();
        // depth-first over left-normed prefixes
        let mut stack: Vec<(u32, usize, Vec<PadicScalar>)> = vec![(0, 1, u.to_vec()), (1, 1, v.to_vec())];
        while let Some((word, len, value)) = stack.pop() {
            if value.iter().all(|c| c.is_zero()) {
                continue;
            }
            if let Some(c) = self.coefficients[len - 1].get(&word) {
                for (a, x) in acc.iter_mut().zip(&value) {
                    *a = *a + *c * *x;
                }
            }
            if len < self.degree {
                for (bit, l) in letters.iter().enumerate() {
                    if len == 1 && bit as u32 == word {
                        continue;
                    }
                    stack.push(((word << 1) | bit as u32, len + 1, self.algebra.bracket(&value, l)));
                }
            }
        }
        let out: Vec<PadicScalar> = acc.iter().map(|c| c.truncate(self.precision)).collect();
        if let Some(c) = out.iter().find(|c| c.precision() < self.precision) {
            return Err(Error::Precision(format!("BCH product known only to {} digits", c.precision())));
        }
        Ok(out)
    }

    pub fn inverse(&self, u: &[PadicScalar]) -> Vec<PadicScalar> {
        u.iter().map(|c| -*c).collect()
    }

    /// `u v u^-1 v^-1`.
    pub fn group_commutator(&self, u: &[PadicScalar], v: &[PadicScalar]) -> Result<Vec<PadicScalar>> {
        let uv = self.multiply(u, v)?;
        let uvu = self.multiply(&uv, &self.inverse(u))?;
        self.multiply(&uvu, &self.inverse(v))
    }

    pub fn lie_bracket(&self, u: &[PadicScalar], v: &[PadicScalar]) -> Vec<PadicScalar> {
        self.algebra.bracket(u, v).iter().map(|c| c.truncate(self.precision)).collect()
    }

    pub fn is_zero(&self, u: &[PadicScalar]) -> bool {
        u.iter().all(|c| c.truncate(self.precision).is_zero())
    }

    pub fn agree(&self, u: &[PadicScalar], v: &[PadicScalar]) -> bool {
        u.iter().zip(v).all(|(a, b)| (*a - *b).truncate(self.precision).is_zero())
    }
}

pub fn bch_multiply(
    alg: &StructureLieAlgebra,
    u: &[PadicScalar],
    v: &[PadicScalar],
    prime: u64,
    precision: i64,
) -> Result<Vec<PadicScalar>> {
    Bch::new(alg, prime, precision)?.multiply(u, v)
}

/// Checks on sampled pairs that the group commutator vanishes at precision exactly
/// when the Lie bracket does; half the pairs are colinear.
pub fn group_lie_commutation_audit(alg: &StructureLieAlgebra, prime: u64, precision: i64, trials: usize, seed: u64) -> Result<AuditReport> {
    let bch = Bch::new(alg, prime, precision)?;
    let outcomes: Vec<Result<(bool, bool)>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let u = bch.random(&mut rng);
            let v = if i % 2 == 0 {
                let lambda = PadicScalar::random(prime, precision, 0, &mut rng);
                u.iter().map(|c| *c * lambda).collect()
            } else {
                bch.random(&mut rng)
            };
            let group = bch.is_zero(&bch.group_commutator(&u, &v)?);
            let lie = bch.is_zero(&bch.lie_bracket(&u, &v));
            Ok((group, lie))
        })
        .collect();
    let mut report = AuditReport::new(json!({"p": prime, "precision": precision, "degree": bch.degree, "dim": alg.dim(), "seed": seed}));
    report.trials = trials;
    let mut commuting = 0usize;
    for (i, o) in outcomes.into_iter().enumerate() {
        let (group, lie) = o?;
        commuting += lie as usize;
        if group != lie {
            report.violations += 1;
            report
                .witnesses
                .push(json!({"trial": i, "group_commutator_zero": group, "lie_bracket_zero": lie}));
        }
    }
    report.stat("commuting_pairs", commuting);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_pure_quaternions, rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn low_degree_goldberg_coefficients() {
        // log(e^X e^Y) = X + Y + XY/2 - YX/2 + (X^2 Y + X Y^2 + Y X^2 + Y^2 X)/12 - (XYX + YXY)/6 + ...
        assert_eq!(goldberg(0b01, 2), q(1, 2));
        assert_eq!(goldberg(0b10, 2), q(-1, 2));
        assert_eq!(goldberg(0b001, 3), q(1, 12));
        assert_eq!(goldberg(0b010, 3), q(-1, 6));
        assert_eq!(goldberg(0b101, 3), q(-1, 6));
        assert_eq!(goldberg(0b000, 3), q(0, 1));
    }

    #[test]
    fn degree_selection() {
        assert_eq!(truncation_degree(3, 6).unwrap(), 10);
        assert!(truncation_degree(2, 6).is_err());
        assert!(truncation_degree(3, 40).is_err());
    }

    #[test]
    fn identity_and_inverse() {
        let alg = build_pure_quaternions(rational(-1), rational(-1)).unwrap();
        let bch = Bch::new(&alg, 3, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = bch.random(&mut rng);
        assert!(bch.agree(&bch.multiply(&u, &bch.zero()).unwrap(), &u));
        assert!(bch.is_zero(&bch.multiply(&u, &bch.inverse(&u)).unwrap()));
        let not_in_lattice = vec![PadicScalar::one(3, 6); 3];
        assert!(bch.multiply(&not_in_lattice, &u).is_err());
    }
}
