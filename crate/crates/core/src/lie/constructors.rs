//! Explicit Lie algebras over `Q`: abelian, `sl2`, pure quaternions, the
//! quasi-split form of `sl3`, semidirect products by fixed-point-free actions.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::cyclic::NumberField;
use super::{random_vector, rational, LieWitness, StructureLieAlgebra};
use crate::division::QuaternionAlgebra;
use crate::error::{Error, Result};
use crate::linalg;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn unit_vec(dim: usize, i: usize, c: BigRational) -> Vec<BigRational> {
    let mut v = vec![rational(0); dim];
    v[i] = c;
    v
}

pub fn build_abelian(n: usize) -> StructureLieAlgebra {
    let l = (0..n).map(|i| format!("a{i}")).collect();
    StructureLieAlgebra::from_brackets("Q", l, rational(1), |_, _| vec![rational(0); n]).expect("zero constants")
}

/// Basis `h, e, f` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn build_sl2() -> StructureLieAlgebra {
    StructureLieAlgebra::from_brackets("Q", labels(&["h", "e", "f"]), rational(1), |i, j| match (i, j) {
        (0, 1) => unit_vec(3, 1, rational(2)),
        (1, 0) => unit_vec(3, 1, rational(-2)),
        (0, 2) => unit_vec(3, 2, rational(-2)),
        (2, 0) => unit_vec(3, 2, rational(2)),
        (1, 2) => unit_vec(3, 0, rational(1)),
        (2, 1) => unit_vec(3, 0, rational(-1)),
        _ => vec![rational(0); 3],
    })
    .expect("sl2 constants")
}

fn pure_part(x: [BigRational; 4]) -> Vec<BigRational> {
    let [_, a, b, c] = x;
    vec![a, b, c]
}

fn quaternion_basis(i: usize) -> [BigRational; 4] {
    let mut q = [rational(0), rational(0), rational(0), rational(0)];
    q[i] = rational(1);
    q
}

/// Pure quaternions `u, v, uv` of the algebra `(a, b)` under the commutator.
pub fn build_pure_quaternions(a: BigRational, b: BigRational) -> Result<StructureLieAlgebra> {
    let h = QuaternionAlgebra::new(a, b)?;
    StructureLieAlgebra::from_brackets("Q", labels(&["u", "v", "uv"]), rational(1), |i, j| {
        let (x, y) = (quaternion_basis(i + 1), quaternion_basis(j + 1));
        let xy = h.multiply(&x, &y);
        let yx = h.multiply(&y, &x);
        pure_part([&xy[0] - &yx[0], &xy[1] - &yx[1], &xy[2] - &yx[2], &xy[3] - &yx[3]])
    })
}

/// `r + s y` in `Q(y)`, `y^2 = q`.
type Quad = (BigRational, BigRational);
type QuadMatrix = [[Quad; 3]; 3];

fn quad_mul(a: &Quad, b: &Quad, q: &BigRational) -> Quad {
    (&a.0 * &b.0 + q * &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn qm_zero() -> QuadMatrix {
    std::array::from_fn(|_| std::array::from_fn(|_| (rational(0), rational(0))))
}

fn qm_commutator(m: &QuadMatrix, n: &QuadMatrix, q: &BigRational) -> QuadMatrix {
    let mut out = qm_zero();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = (rational(0), rational(0));
            for k in 0..3 {
                let a = quad_mul(&m[i][k], &n[k][j], q);
                let b = quad_mul(&n[i][k], &m[k][j], q);
                acc = (&acc.0 + &a.0 - &b.0, &acc.1 + &a.1 - &b.1);
            }
            out[i][j] = acc;
        }
    }
    out
}

/// The matrix with parameters `(a, ..., h)`.
fn sl3_matrix(c: &[BigRational]) -> QuadMatrix {
    let z = rational(0);
    let mut m = qm_zero();
    m[0][0] = (c[0].clone(), c[1].clone());
    m[0][1] = (c[2].clone(), c[3].clone());
    m[0][2] = (z.clone(), c[4].clone());
    m[1][0] = (c[5].clone(), c[6].clone());
    m[1][1] = (z.clone(), -&c[1] * rational(2));
    m[1][2] = (-&c[2], c[3].clone());
    m[2][0] = (z.clone(), c[7].clone());
    m[2][1] = (-&c[5], c[6].clone());
    m[2][2] = (-&c[0], c[1].clone());
    m
}

fn sl3_coords(m: &QuadMatrix) -> Result<Vec<BigRational>> {
    let c = vec![
        m[0][0].0.clone(),
        m[0][0].1.clone(),
        m[0][1].0.clone(),
        m[0][1].1.clone(),
        m[0][2].1.clone(),
        m[1][0].0.clone(),
        m[1][0].1.clone(),
        m[2][0].1.clone(),
    ];
    if sl3_matrix(&c) != *m {
        return Err(Error::Integrity("matrix outside the quasi-split sl3 family".into()));
    }
    Ok(c)
}

fn is_rational_square(q: &BigRational) -> bool {
    if q.is_negative() {
        return false;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    &(&rn * &rn) == n && &(&rd * &rd) == d
}

/// Orders three elements as a witness `(x, y, z)` (middle commutes with both ends).
pub fn order_as_witness(alg: &StructureLieAlgebra, t: [&Vec<BigRational>; 3]) -> Option<LieWitness> {
    for mid in 0..3 {
        let (a, b) = ((mid + 1) % 3, (mid + 2) % 3);
        let w = LieWitness {
            x: t[a].clone(),
            y: t[mid].clone(),
            z: t[b].clone(),
        };
        if w.verify(alg) {
            return Some(w);
        }
    }
    None
}

pub struct QuasiSplitSl3 {
    pub algebra: StructureLieAlgebra,
    /// `diag(y, -2y, y)`, `y E13`, `y (E12 + E23)`
    pub triple: [Vec<BigRational>; 3],
    pub witness: Option<LieWitness>,
    pub q: BigRational,
}

impl QuasiSplitSl3 {
    /// Trace of each basis matrix, as an element of `Q(y)`.
    pub fn traces(&self) -> Vec<(BigRational, BigRational)> {
        (0..8)
            .map(|i| {
                let m = sl3_matrix(&self.algebra.basis_vec(i));
                (0..3).fold((rational(0), rational(0)), |acc, k| (acc.0 + &m[k][k].0, acc.1 + &m[k][k].1))
            })
            .collect()
    }
}

/// The 8-dimensional quasi-split form of `sl3` attached to `Q(sqrt q)`, on the
/// parameters `a, ..., h`, with the three displayed matrices.
pub fn build_quasi_split_sl3(q: BigRational) -> Result<QuasiSplitSl3> {
    if q.is_zero() || is_rational_square(&q) {
        return Err(Error::Domain(format!("{q} is a square in Q")));
    }
    let mut constants = vec![vec![Vec::new(); 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            let mi = sl3_matrix(&unit_vec(8, i, rational(1)));
            let mj = sl3_matrix(&unit_vec(8, j, rational(1)));
            constants[i][j] = sl3_coords(&qm_commutator(&mi, &mj, &q))?;
        }
    }
    let algebra = StructureLieAlgebra::new("Q", labels(&["a", "b", "c", "d", "e", "f", "g", "h"]), constants, rational(1))?;
    let triple = [
        unit_vec(8, 1, rational(1)),
        unit_vec(8, 4, rational(1)),
        unit_vec(8, 3, rational(1)),
    ];
    let witness = order_as_witness(&algebra, [&triple[0], &triple[1], &triple[2]]);
    Ok(QuasiSplitSl3 {
        algebra,
        triple,
        witness,
        q,
    })
}

/// `alpha(c_i)` as `n x n` matrices acting on column vectors, for an abelian source.
#[derive(Clone, Debug)]
pub struct LinearAction {
    pub source: StructureLieAlgebra,
    pub matrices: Vec<Vec<Vec<BigRational>>>,
    pub certificate: Option<FieldCertificate>,
}

/// The action is multiplication by `elements` in the number field `field`.
#[derive(Clone, Debug)]
pub struct FieldCertificate {
    pub field: NumberField,
    pub elements: Vec<Vec<BigRational>>,
}

impl LinearAction {
    pub fn new(source: StructureLieAlgebra, matrices: Vec<Vec<Vec<BigRational>>>) -> Result<Self> {
        if matrices.len() != source.dim() {
            return Err(Error::Dimension {
                expected: source.dim(),
                got: matrices.len(),
            });
        }
        let n = matrices.first().map_or(0, |m| m.len());
        if matrices.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(Error::Domain("action matrices must be square of equal size".into()));
        }
        Ok(Self {
            source,
            matrices,
            certificate: None,
        })
    }

    pub fn target_dim(&self) -> usize {
        self.matrices.first().map_or(0, |m| m.len())
    }

    /// `sum_i c_i alpha(b_i)`.
    pub fn matrix_of(&self, c: &[BigRational]) -> Vec<Vec<BigRational>> {
        let n = self.target_dim();
        let mut out = vec![vec![rational(0); n]; n];
        for (ci, m) in c.iter().zip(&self.matrices) {
            for (orow, mrow) in out.iter_mut().zip(m) {
                for (o, x) in orow.iter_mut().zip(mrow) {
                    *o += ci * x;
                }
            }
        }
        out
    }

    /// Whether `alpha([x,y]) = [alpha(x), alpha(y)]` on basis pairs.
    pub fn is_homomorphism(&self) -> bool {
        let m = self.source.dim();
        (0..m).all(|i| {
            (0..m).all(|j| {
                let lhs = self.matrix_of(&self.source.bracket(&self.source.basis_vec(i), &self.source.basis_vec(j)));
                let (a, b) = (&self.matrices[i], &self.matrices[j]);
                let n = self.target_dim();
                (0..n).all(|r| {
                    (0..n).all(|c| {
                        let ab: BigRational = (0..n).map(|k| &a[r][k] * &b[k][c]).sum();
                        let ba: BigRational = (0..n).map(|k| &b[r][k] * &a[k][c]).sum();
                        lhs[r][c] == ab - ba
                    })
                })
            })
        })
    }
}

/// Multiplication by `1, t, ..., t^(r-1)` on the number field `K`.
pub fn field_multiplication_action(field: &NumberField, r: usize) -> Result<LinearAction> {
    if r == 0 || r > field.degree() {
        return Err(Error::Domain(format!("need 1 <= r <= {}", field.degree())));
    }
    let elements: Vec<Vec<BigRational>> = (0..r).map(|i| field.power_of_generator(i)).collect();
    let matrices = elements.iter().map(|e| field.multiplication_matrix(e)).collect();
    let mut action = LinearAction::new(build_abelian(r), matrices)?;
    action.certificate = Some(FieldCertificate {
        field: field.clone(),
        elements,
    });
    Ok(action)
}

/// `C x| N` with `[c, v] = alpha(c) v`, `C`, `N` abelian.
pub fn build_metabelian(action: &LinearAction) -> Result<StructureLieAlgebra> {
    if !action.source.is_abelian() {
        return Err(Error::Domain("metabelian construction needs an abelian source".into()));
    }
    if !action.is_homomorphism() {
        return Err(Error::Domain("action matrices do not commute".into()));
    }
    let (m, n) = (action.source.dim(), action.target_dim());
    let dim = m + n;
    let mut l: Vec<String> = (0..m).map(|i| format!("c{i}")).collect();
    l.extend((0..n).map(|j| format!("v{j}")));
    StructureLieAlgebra::from_brackets("Q", l, rational(1), |i, j| {
        let mut out = vec![rational(0); dim];
        if i < m && j >= m {
            for k in 0..n {
                out[m + k] = action.matrices[i][k][j - m].clone();
            }
        } else if i >= m && j < m {
            for k in 0..n {
                out[m + k] = -&action.matrices[j][k][i - m];
            }
        }
        out
    })
}

#[derive(Clone, Copy, Debug)]
pub enum FpfMode {
    Certificate,
    Randomized { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum FpfVerdict {
    /// Fixed-point-free, with a proof (single generator or field certificate).
    Proven,
    /// No fixed point found among random combinations.
    Passed {
        samples: usize,
    },
    /// `alpha(c) v = 0` with `c, v` nonzero.
    Fails {
        c: Vec<BigRational>,
        v: Vec<BigRational>,
    },
    Inconclusive(String),
}

impl FpfVerdict {
    pub fn is_fixed_point_free(&self) -> bool {
        matches!(self, FpfVerdict::Proven | FpfVerdict::Passed { .. })
    }
}

fn kernel_witness(action: &LinearAction, c: Vec<BigRational>) -> Option<FpfVerdict> {
    let m = action.matrix_of(&c);
    let ker = linalg::nullspace(&m, action.target_dim(), &rational(1), &linalg::exact_zero);
    ker.into_iter().next().map(|v| FpfVerdict::Fails { c, v })
}

pub fn fixed_point_free_check(action: &LinearAction, mode: FpfMode) -> FpfVerdict {
    let m = action.source.dim();
    for i in 0..m {
        if let Some(w) = kernel_witness(action, unit_vec(m, i, rational(1))) {
            return w;
        }
    }
    if m == 1 {
        return FpfVerdict::Proven;
    }
    match mode {
        FpfMode::Certificate => match &action.certificate {
            None => FpfVerdict::Inconclusive("no field certificate".into()),
            Some(cert) => match verify_certificate(action, cert) {
                Ok(()) => FpfVerdict::Proven,
                Err(e) => FpfVerdict::Inconclusive(e.to_string()),
            },
        },
        FpfMode::Randomized { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let c = random_vector(m, false, &mut rng);
                if c.iter().all(|x| x.is_zero()) {
                    continue;
                }
                if let Some(w) = kernel_witness(action, c) {
                    return w;
                }
            }
            FpfVerdict::Passed { samples }
        }
    }
}

/// A nonzero combination of linearly independent field elements is a unit, so
/// multiplication by it is invertible.
fn verify_certificate(action: &LinearAction, cert: &FieldCertificate) -> Result<()> {
    if cert.field.degree() != action.target_dim() || cert.elements.len() != action.source.dim() {
        return Err(Error::Domain("certificate dimensions do not match the action".into()));
    }
    for (e, m) in cert.elements.iter().zip(&action.matrices) {
        if &cert.field.multiplication_matrix(e) != m {
            return Err(Error::Domain("action is not multiplication by the certified element".into()));
        }
    }
    if linalg::rank(&cert.elements, &linalg::exact_zero) != cert.elements.len() {
        return Err(Error::Domain("certified elements are linearly dependent".into()));
    }
    Ok(())
}

/// Type (c): pure quaternions of `(a, b)` acting on `copies` copies of the
/// quaternion algebra by left multiplication. Basis `u, v, uv`, then
/// `1, u, v, uv` for each copy.
pub struct TypeC {
    pub algebra: StructureLieAlgebra,
    pub copies: usize,
    /// the norm form is definite, so every nonzero quaternion is invertible
    pub definite: bool,
}

impl TypeC {
    /// Basis of the `c`-th copy, an ideal.
    pub fn copy_ideal(&self, c: usize) -> Vec<Vec<BigRational>> {
        let dim = self.algebra.dim();
        (0..4).map(|k| unit_vec(dim, 3 + 4 * c + k, rational(1))).collect()
    }
}

pub fn build_type_c(a: BigRational, b: BigRational, copies: usize) -> Result<TypeC> {
    if copies == 0 {
        return Err(Error::Domain("need at least one copy".into()));
    }
    let definite = a.is_negative() && b.is_negative();
    let h = QuaternionAlgebra::new(a.clone(), b.clone())?;
    let pure = build_pure_quaternions(a, b)?;
    let dim = 3 + 4 * copies;
    let mut l = labels(&["u", "v", "uv"]);
    for c in 0..copies {
        l.extend(["1", "u", "v", "uv"].iter().map(|s| format!("{s}.{c}")));
    }
    let algebra = StructureLieAlgebra::from_brackets("Q", l, rational(1), |i, j| {
        let mut out = vec![rational(0); dim];
        match (i < 3, j < 3) {
            (true, true) => out[..3].clone_from_slice(&pure.constants()[i][j]),
            (true, false) | (false, true) => {
                let (q, m, sign) = if i < 3 { (i, j, 1) } else { (j, i, -1) };
                let copy = (m - 3) / 4;
                let prod = h.multiply(&quaternion_basis(q + 1), &quaternion_basis((m - 3) % 4));
                for (k, x) in prod.iter().enumerate() {
                    out[3 + 4 * copy + k] = x * rational(sign);
                }
            }
            (false, false) => {}
        }
        out
    })?;
    Ok(TypeC { algebra, copies, definite })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternions_match_scaled_cross_product() {
        let q = build_pure_quaternions(rational(-1), rational(-1)).unwrap();
        assert!(q.jacobi_check());
        // [x,y] = 2 x cross y
        for i in 0..3 {
            for j in 0..3 {
                let v = q.bracket(&q.basis_vec(i), &q.basis_vec(j));
                let mut e = vec![rational(0); 3];
                if i != j {
                    let k = 3 - i - j;
                    let sign = if (i + 1) % 3 == j { 2 } else { -2 };
                    e[k] = rational(sign);
                }
                assert_eq!(v, e, "{i} {j}");
            }
        }
    }

    #[test]
    fn quaternion_brackets() {
        let (a, b) = (rational(3), rational(-5));
        let q = build_pure_quaternions(a.clone(), b.clone()).unwrap();
        assert_eq!(q.bracket(&q.basis_vec(0), &q.basis_vec(1)), unit_vec(3, 2, rational(2)));
        assert_eq!(q.bracket(&q.basis_vec(0), &q.basis_vec(2)), unit_vec(3, 1, a * rational(2)));
        assert_eq!(q.bracket(&q.basis_vec(1), &q.basis_vec(2)), unit_vec(3, 0, -b * rational(2)));
    }

    #[test]
    fn sl3_triple_brackets() {
        let s = build_quasi_split_sl3(rational(2)).unwrap();
        assert!(s.algebra.jacobi_check());
        let [h, e, f] = &s.triple;
        assert!(s.algebra.commute(h, e));
        assert!(s.algebra.commute(e, f));
        // [h, f] = 3q (E12 - E23): the c-parameter
        assert_eq!(s.algebra.bracket(h, f), unit_vec(8, 2, rational(6)));
        let w = s.witness.as_ref().unwrap();
        assert_eq!(&w.y, e);
        assert!(s.traces().iter().all(|t| t.0.is_zero() && t.1.is_zero()));
        assert!(build_quasi_split_sl3(rational(4)).is_err());
    }

    #[test]
    fn singular_action_gives_witness() {
        let m = vec![vec![vec![rational(1), rational(0)], vec![rational(0), rational(0)]]];
        let a = LinearAction::new(build_abelian(1), m).unwrap();
        match fixed_point_free_check(&a, FpfMode::Certificate) {
            FpfVerdict::Fails { v, .. } => assert_eq!(v, vec![rational(0), rational(1)]),
            other => panic!("{other:?}"),
        }
        let id = LinearAction::new(build_abelian(1), vec![vec![vec![rational(1)]]]).unwrap();
        assert_eq!(fixed_point_free_check(&id, FpfMode::Certificate), FpfVerdict::Proven);
    }

    #[test]
    fn type_c_is_a_lie_algebra() {
        let t = build_type_c(rational(-1), rational(-1), 2).unwrap();
        assert_eq!(t.algebra.dim(), 11);
        assert!(t.algebra.jacobi_check());
    }
}
