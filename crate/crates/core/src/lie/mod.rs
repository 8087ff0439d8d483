//! Finite-dimensional Lie algebras given by structure constants, with
//! centralizers, randomized CA audits and quotients.

pub mod bch;
pub mod constructors;
pub mod cyclic;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, Scalar};
use crate::report::{trial_rng, AuditReport};

pub use bch::{bch_multiply, group_lie_commutation_audit, Bch};
pub use constructors::*;
pub use cyclic::{build_derived_cyclic, CyclicFieldModel, DerivedCyclic, NumberField};

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `[b_i, b_j] = sum_k c_ij^k b_k`.
#[derive(Clone)]
pub struct StructureLieAlgebra<F = BigRational> {
    dim: usize,
    constants: Vec<Vec<Vec<F>>>,
    labels: Vec<String>,
    field: String,
    one: F,
}

impl<F: Scalar> fmt::Debug for StructureLieAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra(dim={}, field={}, basis={:?})", self.dim, self.field, self.labels)
    }
}

impl<F: Scalar> StructureLieAlgebra<F> {
    /// Checks shape and antisymmetry; the Jacobi identity is checked separately.
    pub fn new(field: &str, labels: Vec<String>, constants: Vec<Vec<Vec<F>>>, one: F) -> Result<Self> {
        let dim = labels.len();
        if constants.len() != dim || constants.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim)) {
            return Err(Error::Dimension {
                expected: dim,
                got: constants.len(),
            });
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if !constants[i][j][k].plus(&constants[j][i][k]).is_zero() {
                        return Err(Error::Construction(format!("constants not antisymmetric at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(Self {
            dim,
            constants,
            labels,
            field: field.to_string(),
            one,
        })
    }

    /// Builds the constants from a bracket on basis indices.
    pub fn from_brackets(field: &str, labels: Vec<String>, one: F, bracket: impl Fn(usize, usize) -> Vec<F>) -> Result<Self> {
        let dim = labels.len();
        let constants = (0..dim).map(|i| (0..dim).map(|j| bracket(i, j)).collect()).collect();
        Self::new(field, labels, constants, one)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn field(&self) -> &str {
        &self.field
    }
    pub fn constants(&self) -> &Vec<Vec<Vec<F>>> {
        &self.constants
    }
    pub fn one(&self) -> &F {
        &self.one
    }

    pub fn zero_vec(&self) -> Vec<F> {
        vec![self.one.zero_like(); self.dim]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<F> {
        let mut v = self.zero_vec();
        v[i] = self.one.clone();
        v
    }

    pub fn bracket(&self, x: &[F], y: &[F]) -> Vec<F> {
        let mut out = self.zero_vec();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let s = xi.times(yj);
                for (o, c) in out.iter_mut().zip(&self.constants[i][j]) {
                    if !c.is_zero() {
                        *o = o.plus(&s.times(c));
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad x` (column `j` is `[x, b_j]`).
    pub fn ad_matrix(&self, x: &[F]) -> Vec<Vec<F>> {
        let cols: Vec<_> = (0..self.dim).map(|j| self.bracket(x, &self.basis_vec(j))).collect();
        linalg::transpose(&cols)
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.iter().flatten().flatten().all(|c| c.is_zero())
    }

    /// First basis triple violating the Jacobi identity.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let (bi, bj, bk) = (self.basis_vec(i), self.basis_vec(j), self.basis_vec(k));
                    let s1 = self.bracket(&self.bracket(&bi, &bj), &bk);
                    let s2 = self.bracket(&self.bracket(&bj, &bk), &bi);
                    let s3 = self.bracket(&self.bracket(&bk, &bi), &bj);
                    if s1.iter().zip(&s2).zip(&s3).any(|((a, b), c)| !a.plus(b).plus(c).is_zero()) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn jacobi_check(&self) -> bool {
        self.jacobi_violation().is_none()
    }

    /// Basis of `ker ad x`.
    pub fn centralizer(&self, x: &[F]) -> Vec<Vec<F>> {
        linalg::nullspace(&self.ad_matrix(x), self.dim, &self.one, &linalg::exact_zero)
    }

    pub fn commute(&self, x: &[F], y: &[F]) -> bool {
        self.bracket(x, y).iter().all(|c| c.is_zero())
    }

    pub fn map_scalars<G: Scalar>(&self, field: &str, one: G, f: impl Fn(&F) -> G) -> StructureLieAlgebra<G> {
        StructureLieAlgebra {
            dim: self.dim,
            constants: self
                .constants
                .iter()
                .map(|r| r.iter().map(|v| v.iter().map(&f).collect()).collect())
                .collect(),
            labels: self.labels.clone(),
            field: field.to_string(),
            one,
        }
    }

    /// Quotient `L/I` on a complement of `I` spanned by standard basis vectors,
    /// with the chosen complement indices.
    pub fn quotient_by_ideal(&self, ideal: &[Vec<F>]) -> Result<(Self, Vec<usize>)> {
        let mut rows = ideal.to_vec();
        let pivots = linalg::rref(&mut rows, &linalg::exact_zero);
        let basis: Vec<Vec<F>> = rows.into_iter().take(pivots.len()).collect();
        for i in 0..self.dim {
            for v in &basis {
                let w = self.bracket(&self.basis_vec(i), v);
                if linalg::coordinates(&basis, &w, &linalg::exact_zero).is_none() {
                    return Err(Error::Domain(format!(
                        "not an ideal: [{}, {:?}] leaves the span",
                        self.labels[i], v
                    )));
                }
            }
        }
        let mut full = basis.clone();
        let mut complement = Vec::new();
        for j in 0..self.dim {
            let e = self.basis_vec(j);
            let mut trial = full.clone();
            trial.push(e.clone());
            if linalg::rank(&trial, &linalg::exact_zero) == trial.len() {
                full.push(e);
                complement.push(j);
            }
        }
        let k = basis.len();
        let qdim = complement.len();
        let mut constants = vec![vec![vec![self.one.zero_like(); qdim]; qdim]; qdim];
        for (a, &ia) in complement.iter().enumerate() {
            for (b, &ib) in complement.iter().enumerate() {
                let w = self.bracket(&self.basis_vec(ia), &self.basis_vec(ib));
                let c = linalg::coordinates(&full, &w, &linalg::exact_zero)
                    .ok_or_else(|| Error::Integrity("bracket outside the full basis".into()))?;
                constants[a][b] = c[k..].to_vec();
            }
        }
        let labels = complement.iter().map(|&j| format!("{}+I", self.labels[j])).collect();
        Ok((Self::new(&self.field, labels, constants, self.one.clone())?, complement))
    }
}

/// `x, y, z` with `[x,y] = 0 = [y,z]` and `[x,z] != 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieWitness<F = BigRational> {
    pub x: Vec<F>,
    pub y: Vec<F>,
    pub z: Vec<F>,
}

impl<F: Scalar> LieWitness<F> {
    pub fn verify(&self, alg: &StructureLieAlgebra<F>) -> bool {
        let nonzero = |v: &[F]| v.iter().any(|c| !c.is_zero());
        nonzero(&self.x)
            && nonzero(&self.y)
            && nonzero(&self.z)
            && alg.commute(&self.x, &self.y)
            && alg.commute(&self.y, &self.z)
            && !alg.commute(&self.x, &self.z)
    }
}

fn vec_json(v: &[BigRational]) -> Value {
    json!(v.iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

impl LieWitness<BigRational> {
    pub fn to_json(&self, alg: &StructureLieAlgebra) -> Value {
        json!({
            "x": vec_json(&self.x), "y": vec_json(&self.y), "z": vec_json(&self.z),
            "xy": vec_json(&alg.bracket(&self.x, &self.y)),
            "yz": vec_json(&alg.bracket(&self.y, &self.z)),
            "xz": vec_json(&alg.bracket(&self.x, &self.z)),
        })
    }
}

pub struct CaAudit {
    pub report: AuditReport,
    pub witness: Option<LieWitness>,
}

fn random_vector<R: Rng + ?Sized>(dim: usize, sparse: bool, rng: &mut R) -> Vec<BigRational> {
    let mut v = vec![rational(0); dim];
    if sparse {
        for _ in 0..rng.gen_range(1..=2) {
            v[rng.gen_range(0..dim)] = rational(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
        }
    } else {
        for c in v.iter_mut() {
            *c = rational(rng.gen_range(-5..=5));
        }
    }
    v
}

impl StructureLieAlgebra<BigRational> {
    /// Randomized CA audit: probes first, then sparse and dense random elements `y`;
    /// the centralizer of each must be abelian. A failing basis pair of a centralizer
    /// is returned as an exact witness.
    pub fn ca_audit(&self, probes: &[Vec<BigRational>], trials: usize, seed: u64) -> CaAudit {
        let outcomes: Vec<Option<LieWitness>> = (0..trials as u64)
            .into_par_iter()
            .map(|i| {
                let y = match probes.get(i as usize) {
                    Some(p) => p.clone(),
                    None => {
                        let mut rng = trial_rng(seed, i);
                        random_vector(self.dim, i % 2 == 1, &mut rng)
                    }
                };
                if y.iter().all(|c| c.is_zero()) {
                    return None;
                }
                let c = self.centralizer(&y);
                for a in 0..c.len() {
                    for b in a + 1..c.len() {
                        if !self.commute(&c[a], &c[b]) {
                            return Some(LieWitness {
                                x: c[a].clone(),
                                y: y.clone(),
                                z: c[b].clone(),
                            });
                        }
                    }
                }
                None
            })
            .collect();
        let mut report = AuditReport::new(json!({"dim": self.dim, "field": self.field, "seed": seed, "probes": probes.len()}));
        report.trials = trials;
        let mut witness = None;
        for w in outcomes.into_iter().flatten() {
            report.violations += 1;
            if witness.is_none() {
                debug_assert!(w.verify(self));
                report.witnesses.push(w.to_json(self));
                witness = Some(w);
            }
        }
        CaAudit { report, witness }
    }

    pub fn to_json(&self) -> Value {
        let mut entries = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for (k, c) in self.constants[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        entries.push(json!([i, j, k, c.to_string()]));
                    }
                }
            }
        }
        json!({"dim": self.dim, "field": self.field, "labels": self.labels, "constants": entries})
    }

    /// Reads `{dim, field, constants[[i,j,k,value]]}`; entries are given for `i < j`
    /// and extended antisymmetrically.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Domain(format!("malformed Lie algebra JSON: {m}"));
        let dim = v["dim"].as_u64().ok_or_else(|| bad("dim"))? as usize;
        let field = v["field"].as_str().unwrap_or("Q");
        let labels = match v["labels"].as_array() {
            Some(a) => a.iter().map(|l| l.as_str().unwrap_or("?").to_string()).collect(),
            None => (0..dim).map(|i| format!("b{i}")).collect(),
        };
        let mut constants = vec![vec![vec![rational(0); dim]; dim]; dim];
        for e in v["constants"].as_array().ok_or_else(|| bad("constants"))? {
            let a = e.as_array().filter(|a| a.len() == 4).ok_or_else(|| bad("entry"))?;
            let idx = |t: usize| a[t].as_u64().map(|x| x as usize).filter(|&x| x < dim).ok_or_else(|| bad("index"));
            let (i, j, k) = (idx(0)?, idx(1)?, idx(2)?);
            let val: BigRational = match &a[3] {
                Value::String(s) => s.parse().map_err(|_| bad("value"))?,
                Value::Number(n) => rational(n.as_i64().ok_or_else(|| bad("value"))?),
                _ => return Err(bad("value")),
            };
            constants[i][j][k] = val.clone();
            constants[j][i][k] = -val;
        }
        Self::new(field, labels, constants, rational(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centralizer_of_h_in_sl2() {
        let sl2 = build_sl2();
        let c = sl2.centralizer(&sl2.basis_vec(0));
        assert_eq!(c.len(), 1);
        assert!(c[0][1].is_zero() && c[0][2].is_zero());
    }

    #[test]
    fn perturbed_constants_break_jacobi() {
        let sl2 = build_sl2();
        let mut c = sl2.constants().clone();
        c[0][1][1] = rational(3);
        c[1][0][1] = rational(-3);
        let bad = StructureLieAlgebra::new("Q", sl2.labels().to_vec(), c, rational(1)).unwrap();
        assert!(!bad.jacobi_check());
        assert!(sl2.jacobi_check());
    }

    #[test]
    fn json_roundtrip() {
        let q = build_pure_quaternions(rational(-1), rational(-2)).unwrap();
        let back = StructureLieAlgebra::from_json(&q.to_json()).unwrap();
        assert_eq!(back.constants(), q.constants());
    }

    #[test]
    fn quotient_by_zero_and_non_ideal() {
        let sl2 = build_sl2();
        let (q, _) = sl2.quotient_by_ideal(&[]).unwrap();
        assert_eq!(q.constants(), sl2.constants());
        assert!(sl2.quotient_by_ideal(&[sl2.basis_vec(1)]).is_err());
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn vector(dim: usize) -> impl Strategy<Value = Vec<BigRational>> {
        proptest::collection::vec(-6i64..=6, dim).prop_map(|v| v.into_iter().map(rational).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bracket_is_alternating_and_jacobi(x in vector(8), y in vector(8), z in vector(8)) {
            let l = build_quasi_split_sl3(rational(2)).unwrap().algebra;
            prop_assert!(l.bracket(&x, &x).iter().all(|c| c.is_zero()));
            let sum: Vec<BigRational> = [
                l.bracket(&x, &l.bracket(&y, &z)),
                l.bracket(&y, &l.bracket(&z, &x)),
                l.bracket(&z, &l.bracket(&x, &y)),
            ]
            .iter()
            .fold(l.zero_vec(), |acc, v| acc.iter().zip(v).map(|(a, b)| a + b).collect());
            prop_assert!(sum.iter().all(|c| c.is_zero()));
        }

        #[test]
        fn centralizers_contain_the_element(x in vector(3)) {
            let q = build_pure_quaternions(rational(-1), rational(-3)).unwrap();
            let c = q.centralizer(&x);
            prop_assert!(c.iter().all(|v| q.commute(v, &x)));
            let expected = if x.iter().all(|a| a.is_zero()) { 3 } else { 1 };
            prop_assert_eq!(c.len(), expected);
        }
    }
}
