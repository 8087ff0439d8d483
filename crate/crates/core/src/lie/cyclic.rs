//! Number fields `Q[t]/(f)` with a cyclic automorphism, the cyclic algebras
//! `W + Wx + ... + Wx^(n-1)` over `Q` built on them, and their derived Lie algebras.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{rational, LieWitness, StructureLieAlgebra};
use crate::error::{Error, Result};
use crate::linalg;
use crate::padic::unramified::irreducible_mod_p;

/// `Q[t]/(f)` with `f` monic and irreducible; elements are coefficient vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct NumberField {
    /// non-leading coefficients of `f`, low to high
    modulus: Vec<BigRational>,
}

fn small_primes() -> impl Iterator<Item = u64> {
    (2u64..200).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let bound = n.to_u64().unwrap_or(u64::MAX).min(1_000_000);
    (1..=bound).map(BigInt::from).filter(|d| (&n % d).is_zero()).collect()
}

/// Irreducibility over `Q` of the monic `f`: irreducible modulo some prime not
/// dividing the denominators, or free of rational roots in degree at most 3.
pub fn certify_irreducible(modulus: &[BigRational]) -> Result<()> {
    let n = modulus.len();
    if n <= 1 {
        return Ok(());
    }
    let lcm = modulus.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    // g = lcm * f has integer coefficients and leading coefficient lcm
    let g: Vec<BigInt> = modulus
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    for p in small_primes() {
        let pb = BigInt::from(p);
        if (&lcm % &pb).is_zero() {
            continue;
        }
        let lead_inv = lcm.modpow(&BigInt::from(p - 2), &pb);
        let mut fp: Vec<u64> = g.iter().map(|c| ((c * &lead_inv).mod_floor(&pb)).to_u64().unwrap()).collect();
        fp.push(1);
        if irreducible_mod_p(&fp, p) {
            return Ok(());
        }
    }
    if n <= 3 {
        // a reducible polynomial of degree <= 3 has a rational root r = a/b with
        // a | g_0 and b | lcm
        let f_at = |r: &BigRational| {
            let mut acc = BigRational::one();
            for c in modulus.iter().rev() {
                acc = acc * r + c;
            }
            acc
        };
        if g[0].is_zero() {
            return Err(Error::Construction("modulus divisible by t".into()));
        }
        for a in divisors(&g[0]) {
            for b in divisors(&lcm) {
                for s in [1, -1] {
                    let r = BigRational::new(a.clone() * s, b.clone());
                    if f_at(&r).is_zero() {
                        return Err(Error::Construction(format!("modulus has the rational root {r}")));
                    }
                }
            }
        }
        return Ok(());
    }
    Err(Error::Construction("could not certify irreducibility over Q".into()))
}

impl NumberField {
    pub fn new(modulus: Vec<BigRational>) -> Result<Self> {
        if modulus.is_empty() {
            return Err(Error::Domain("empty modulus".into()));
        }
        certify_irreducible(&modulus)?;
        Ok(Self { modulus })
    }

    pub fn from_ints(modulus: &[i64]) -> Result<Self> {
        Self::new(modulus.iter().map(|&c| rational(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.modulus.len()
    }

    pub fn modulus(&self) -> &[BigRational] {
        &self.modulus
    }

    pub fn zero(&self) -> Vec<BigRational> {
        vec![rational(0); self.degree()]
    }

    pub fn from_rational(&self, c: BigRational) -> Vec<BigRational> {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    pub fn power_of_generator(&self, i: usize) -> Vec<BigRational> {
        let mut t = self.zero();
        if self.degree() == 1 {
            t[0] = -&self.modulus[0];
        } else {
            t[1] = rational(1);
        }
        let mut acc = self.from_rational(rational(1));
        for _ in 0..i {
            acc = self.mul(&acc, &t);
        }
        acc
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = self.degree();
        let mut prod = vec![rational(0); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = std::mem::replace(&mut prod[k], rational(0));
            if c.is_zero() {
                continue;
            }
            for (i, m) in self.modulus.iter().enumerate() {
                prod[k - n + i] -= &c * m;
            }
        }
        prod.truncate(n);
        prod
    }

    pub fn add(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    /// Polynomial with coefficients `p` evaluated at the field element `z`.
    pub fn eval(&self, p: &[BigRational], z: &[BigRational]) -> Vec<BigRational> {
        let mut acc = self.zero();
        for c in p.iter().rev() {
            acc = self.add(&self.mul(&acc, z), &self.from_rational(c.clone()));
        }
        acc
    }

    /// Columns are `e * t^j`.
    pub fn multiplication_matrix(&self, e: &[BigRational]) -> Vec<Vec<BigRational>> {
        let cols: Vec<_> = (0..self.degree()).map(|j| self.mul(e, &self.power_of_generator(j))).collect();
        linalg::transpose(&cols)
    }

    /// Trace of the multiplication matrix.
    pub fn trace(&self, e: &[BigRational]) -> BigRational {
        let m = self.multiplication_matrix(e);
        (0..self.degree()).map(|i| m[i][i].clone()).sum()
    }

    pub fn inv(&self, e: &[BigRational]) -> Result<Vec<BigRational>> {
        let one = self.from_rational(rational(1));
        linalg::solve(&self.multiplication_matrix(e), &one, &linalg::exact_zero).ok_or(Error::PrecisionZeroDivisor)
    }
}

/// A number field with a generator `sigma` of its (cyclic) automorphism group,
/// given by `sigma(t)`.
#[derive(Clone, Debug)]
pub struct CyclicFieldModel {
    pub field: NumberField,
    sigma_t: Vec<BigRational>,
}

impl CyclicFieldModel {
    pub fn new(field: NumberField, sigma_t: Vec<BigRational>) -> Result<Self> {
        let n = field.degree();
        if sigma_t.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: sigma_t.len(),
            });
        }
        let mut f = field.modulus.clone();
        f.push(rational(1));
        if !field.eval(&f, &sigma_t).iter().all(|c| c.is_zero()) {
            return Err(Error::Construction("sigma(t) is not a root of the modulus".into()));
        }
        let model = Self { field, sigma_t };
        let order = model.order();
        if order != n {
            return Err(Error::Construction(format!("automorphism has order {order}, field degree {n}")));
        }
        Ok(model)
    }

    /// Models of degree 2..=5: `Q(i)`, the cubic and quintic real cyclotomic
    /// subfields of `Q(zeta_7)`, `Q(zeta_11)`, and `Q(zeta_5)`.
    pub fn preset(n: usize) -> Result<Self> {
        let (f, s): (&[i64], &[i64]) = match n {
            2 => (&[1, 0], &[0, -1]),
            3 => (&[-1, -2, 1], &[-2, 0, 1]),
            4 => (&[1, 1, 1, 1], &[0, 0, 1, 0]),
            5 => (&[1, 3, -3, -4, 1], &[-2, 0, 1, 0, 0]),
            _ => return Err(Error::Unsupported(format!("no preset cyclic model of degree {n}"))),
        };
        Self::new(NumberField::from_ints(f)?, s.iter().map(|&c| rational(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn sigma(&self, z: &[BigRational]) -> Vec<BigRational> {
        self.field.eval(z, &self.sigma_t)
    }

    pub fn sigma_pow(&self, z: &[BigRational], k: usize) -> Vec<BigRational> {
        (0..k % self.degree()).fold(z.to_vec(), |acc, _| self.sigma(&acc))
    }

    pub fn order(&self) -> usize {
        let t = self.field.power_of_generator(1);
        let mut z = self.sigma(&t);
        let mut k = 1;
        while z != t && k <= self.degree() {
            z = self.sigma(&z);
            k += 1;
        }
        k
    }

    /// Basis of the fixed field of `sigma^k`.
    pub fn fixed_subspace(&self, k: usize) -> Vec<Vec<BigRational>> {
        let n = self.degree();
        let cols: Vec<_> = (0..n)
            .map(|j| {
                let e = self.field.power_of_generator(j);
                self.field.sub(&self.sigma_pow(&e, k), &e)
            })
            .collect();
        linalg::nullspace(&linalg::transpose(&cols), n, &rational(1), &linalg::exact_zero)
    }
}

/// `sum_i z_i x^i` with `x z = sigma(z) x` and `x^n = gamma`, over `Q`.
#[derive(Clone, Debug)]
pub struct CyclicAlgebraQ {
    pub model: CyclicFieldModel,
    pub gamma: BigRational,
}

pub type CyclicElement = Vec<Vec<BigRational>>;

impl CyclicAlgebraQ {
    pub fn n(&self) -> usize {
        self.model.degree()
    }

    pub fn zero(&self) -> CyclicElement {
        vec![self.model.field.zero(); self.n()]
    }

    /// `z x^i`.
    pub fn monomial(&self, z: &[BigRational], i: usize) -> CyclicElement {
        let mut d = self.zero();
        d[i] = z.to_vec();
        d
    }

    pub fn mul(&self, a: &CyclicElement, b: &CyclicElement) -> CyclicElement {
        let n = self.n();
        let f = &self.model.field;
        let mut out = self.zero();
        for (i, z) in a.iter().enumerate() {
            if z.iter().all(|c| c.is_zero()) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let mut term = f.mul(z, &self.model.sigma_pow(y, i));
                if i + j >= n {
                    term = term.iter().map(|c| c * &self.gamma).collect();
                }
                out[(i + j) % n] = f.add(&out[(i + j) % n], &term);
            }
        }
        out
    }

    pub fn commutator(&self, a: &CyclicElement, b: &CyclicElement) -> CyclicElement {
        let (ab, ba) = (self.mul(a, b), self.mul(b, a));
        ab.iter().zip(&ba).map(|(x, y)| self.model.field.sub(x, y)).collect()
    }

    pub fn flatten(d: &CyclicElement) -> Vec<BigRational> {
        d.iter().flatten().cloned().collect()
    }
}

/// The derived algebra `W_0 + Wx + ... + Wx^(n-1)` of a cyclic algebra, with
/// `W_0` the trace-zero part of `W`.
pub struct DerivedCyclic {
    pub parent: CyclicAlgebraQ,
    pub algebra: StructureLieAlgebra,
    /// basis of the Lie algebra as flattened parent coordinates
    pub embedding: Vec<Vec<BigRational>>,
    /// elements the CA audit should try first
    pub probes: Vec<Vec<BigRational>>,
}

pub fn build_derived_cyclic(n: usize, model: CyclicFieldModel, gamma: BigRational) -> Result<DerivedCyclic> {
    if model.order() != n || model.degree() != n {
        return Err(Error::Domain(format!(
            "model automorphism has order {}, expected {n}",
            model.order()
        )));
    }
    if gamma.is_zero() {
        return Err(Error::Domain("x^n must be a nonzero scalar".into()));
    }
    let parent = CyclicAlgebraQ { model, gamma };
    let f = &parent.model.field;
    let trace_row: Vec<BigRational> = (0..n).map(|j| f.trace(&f.power_of_generator(j))).collect();
    let w0 = linalg::nullspace(&[trace_row], n, &rational(1), &linalg::exact_zero);
    let mut embedding = Vec::new();
    let mut labels = Vec::new();
    for (k, z) in w0.iter().enumerate() {
        embedding.push(CyclicAlgebraQ::flatten(&parent.monomial(z, 0)));
        labels.push(format!("w{k}"));
    }
    for i in 1..n {
        for a in 0..n {
            embedding.push(CyclicAlgebraQ::flatten(&parent.monomial(&f.power_of_generator(a), i)));
            labels.push(format!("t^{a}x^{i}"));
        }
    }
    let unflatten = |v: &[BigRational]| -> CyclicElement { v.chunks(n).map(|c| c.to_vec()).collect() };
    let dim = embedding.len();
    let mut constants = vec![vec![vec![rational(0); dim]; dim]; dim];
    for i in 0..dim {
        for j in i + 1..dim {
            let c = parent.commutator(&unflatten(&embedding[i]), &unflatten(&embedding[j]));
            let coords = linalg::coordinates(&embedding, &CyclicAlgebraQ::flatten(&c), &linalg::exact_zero)
                .ok_or_else(|| Error::Integrity("commutator outside the derived algebra".into()))?;
            constants[j][i] = coords.iter().map(|x| -x).collect();
            constants[i][j] = coords;
        }
    }
    let algebra = StructureLieAlgebra::new("Q", labels, constants, rational(1))?;
    let mut out = DerivedCyclic {
        parent,
        algebra,
        embedding,
        probes: Vec::new(),
    };
    let mut probes: Vec<Vec<BigRational>> = (0..dim).map(|i| out.algebra.basis_vec(i)).collect();
    for i in (2..n).filter(|i| n.is_multiple_of(*i)) {
        let (a, b, bx) = out.composite_elements(i)?;
        probes.splice(0..0, [b, a, bx]);
    }
    out.probes = probes;
    Ok(out)
}

impl DerivedCyclic {
    pub fn n(&self) -> usize {
        self.parent.n()
    }

    /// Lie coordinates of a parent element lying in the derived algebra.
    pub fn to_lie(&self, d: &CyclicElement) -> Result<Vec<BigRational>> {
        linalg::coordinates(&self.embedding, &CyclicAlgebraQ::flatten(d), &linalg::exact_zero)
            .ok_or_else(|| Error::Domain("element outside the derived algebra".into()))
    }

    /// Checks `[z, z' x^i] = (z - sigma^i(z)) z' x^i` in the parent algebra, and
    /// that the bracket lies in the derived algebra.
    pub fn star_formula_check(&self, z: &[BigRational], zp: &[BigRational], i: usize) -> Result<bool> {
        let n = self.n();
        if i == 0 || i >= n {
            return Err(Error::Domain(format!("need 1 <= i <= {}", n - 1)));
        }
        let f = &self.parent.model.field;
        let lhs = self.parent.commutator(&self.parent.monomial(z, 0), &self.parent.monomial(zp, i));
        let coeff = f.mul(&f.sub(z, &self.parent.model.sigma_pow(z, i)), zp);
        let rhs = self.parent.monomial(&coeff, i);
        Ok(lhs == rhs && self.to_lie(&lhs).is_ok())
    }

    /// `a` in `W_0` not fixed by `sigma^i`, `b` nonzero in `M cap W_0` (`M` the
    /// fixed field of `sigma^i`), and `b x^i`, as Lie coordinates.
    fn composite_elements(&self, i: usize) -> Result<(Vec<BigRational>, Vec<BigRational>, Vec<BigRational>)> {
        let n = self.n();
        let model = &self.parent.model;
        let f = &model.field;
        let trace_row: Vec<BigRational> = (0..n).map(|j| f.trace(&f.power_of_generator(j))).collect();
        let fixed_cols: Vec<_> = (0..n)
            .map(|j| {
                let e = f.power_of_generator(j);
                f.sub(&model.sigma_pow(&e, i), &e)
            })
            .collect();
        let mut rows = linalg::transpose(&fixed_cols);
        rows.push(trace_row.clone());
        let b = linalg::nullspace(&rows, n, &rational(1), &linalg::exact_zero)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Integrity("M cap W_0 is zero".into()))?;
        let w0 = linalg::nullspace(&[trace_row], n, &rational(1), &linalg::exact_zero);
        let a = w0
            .into_iter()
            .find(|a| &model.sigma_pow(a, i) != a)
            .ok_or_else(|| Error::Integrity("W_0 fixed by sigma^i".into()))?;
        let p = &self.parent;
        Ok((
            self.to_lie(&p.monomial(&a, 0))?,
            self.to_lie(&p.monomial(&b, 0))?,
            self.to_lie(&p.monomial(&b, i))?,
        ))
    }

    /// The witness `(a, b, b x^i)` for a proper divisor `i > 1` of `n`.
    pub fn composite_witness(&self, i: usize) -> Result<LieWitness> {
        let n = self.n();
        if i <= 1 || i >= n || !n.is_multiple_of(i) {
            return Err(Error::Domain(format!("{i} is not a proper divisor > 1 of {n}")));
        }
        let (a, b, bx) = self.composite_elements(i)?;
        let w = LieWitness { x: a, y: b, z: bx };
        if !w.verify(&self.algebra) {
            return Err(Error::Integrity("composite-degree witness failed".into()));
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_cyclic() {
        for n in 2..=5 {
            let m = CyclicFieldModel::preset(n).unwrap();
            assert_eq!(m.order(), n);
            // conjugate-sum trace agrees with the matrix trace
            let z: Vec<BigRational> = (0..n as i64).map(|i| rational(i * i - 2)).collect();
            let mut s = m.field.zero();
            for k in 0..n {
                s = m.field.add(&s, &m.sigma_pow(&z, k));
            }
            assert_eq!(s, m.field.from_rational(m.field.trace(&z)));
        }
    }

    #[test]
    fn reducible_moduli_rejected() {
        assert!(NumberField::from_ints(&[-1, 0]).is_err());
        assert!(NumberField::from_ints(&[2, -3]).is_err());
        assert!(NumberField::from_ints(&[1, 0]).is_ok());
        // t^4 + 1 is reducible modulo every prime and has degree 4
        assert!(NumberField::from_ints(&[1, 0, 0, 0]).is_err());
    }

    #[test]
    fn derived_dimensions() {
        for n in 2..=4 {
            let d = build_derived_cyclic(n, CyclicFieldModel::preset(n).unwrap(), rational(3)).unwrap();
            assert_eq!(d.algebra.dim(), n * n - 1);
            assert!(d.algebra.jacobi_check());
        }
        assert!(build_derived_cyclic(3, CyclicFieldModel::preset(2).unwrap(), rational(3)).is_err());
    }

    #[test]
    fn star_formula_special_cases() {
        let d = build_derived_cyclic(3, CyclicFieldModel::preset(3).unwrap(), rational(3)).unwrap();
        let f = &d.parent.model.field;
        let base = f.from_rational(rational(7));
        let zp = f.power_of_generator(2);
        assert!(d.star_formula_check(&base, &zp, 1).unwrap());
        let lhs = d.parent.commutator(&d.parent.monomial(&base, 0), &d.parent.monomial(&zp, 1));
        assert!(lhs.iter().flatten().all(|c| c.is_zero()));
        // z' = (z - sigma(z))^-1 gives bracket x
        let z = f.power_of_generator(1);
        let inv = f.inv(&f.sub(&z, &d.parent.model.sigma(&z))).unwrap();
        let br = d.parent.commutator(&d.parent.monomial(&z, 0), &d.parent.monomial(&inv, 1));
        assert_eq!(br, d.parent.monomial(&f.from_rational(rational(1)), 1));
    }

    #[test]
    fn composite_witness_for_degree_four() {
        let d = build_derived_cyclic(4, CyclicFieldModel::preset(4).unwrap(), rational(3)).unwrap();
        assert!(d.composite_witness(2).unwrap().verify(&d.algebra));
        assert!(d.composite_witness(3).is_err());
    }
}
