//! The unramified extension `W` of `Q_p` of degree `e`, presented as
//! `Q_p[t]/(f)` with `f` monic and irreducible modulo `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use super::scalar::{max_digits, PadicScalar};
use crate::error::{Error, Result};
use crate::linalg::{self, Scalar};

/// `Q_p[t]/(f)` at a fixed working precision.
#[derive(Clone)]
pub struct UnramifiedField {
    prime: u64,
    degree: usize,
    /// `f = t^e + modulus[e-1] t^(e-1) + ... + modulus[0]`
    modulus: Vec<i64>,
    precision: i64,
    /// coordinates of `sigma(t)`, the Frobenius lift of `t`
    frobenius_of_t: Vec<PadicScalar>,
}

impl fmt::Debug for UnramifiedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "W(p={}, e={}, f={:?}, N={})",
            self.prime, self.degree, self.modulus, self.precision
        )
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Remainder of `a` modulo the monic `b` over `F_p`; coefficient vectors low-to-high.
fn poly_rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - lead * bi % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Irreducibility over `F_p` of a monic polynomial of degree at most 5, by
/// searching for monic factors of degree up to half.
pub fn irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let e = f.len() - 1;
    if e <= 1 {
        return e == 1;
    }
    for d in 1..=e / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push(c % p);
                c /= p;
            }
            g.push(1);
            if poly_rem_mod_p(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible degree-`e` polynomial over `F_p` in lexicographic order
/// of its coefficients, read as a small-integer lift.
pub fn default_modulus(p: u64, e: usize) -> Vec<i64> {
    if e == 1 {
        return vec![0];
    }
    let count = p.pow(e as u32);
    for code in 0..count {
        let mut c = code;
        let mut f: Vec<u64> = (0..e)
            .map(|_| {
                let x = c % p;
                c /= p;
                x
            })
            .collect();
        f.push(1);
        if f[0] != 0 && irreducible_mod_p(&f, p) {
            return f[..e].iter().map(|&x| x as i64).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl UnramifiedField {
    /// Degree-`e` unramified extension with the default defining polynomial.
    pub fn new(prime: u64, degree: usize, precision: i64) -> Result<Arc<Self>> {
        Self::with_modulus(prime, default_modulus(prime, degree), precision)
    }

    /// `modulus` lists the non-leading coefficients of the monic `f`, low to high.
    pub fn with_modulus(prime: u64, modulus: Vec<i64>, precision: i64) -> Result<Arc<Self>> {
        if !is_prime(prime) {
            return Err(Error::Domain(format!("{prime} is not prime")));
        }
        let degree = modulus.len();
        if degree == 0 || degree > 5 {
            return Err(Error::Unsupported(format!("extension degree {degree} (supported: 1..=5)")));
        }
        if precision < 2 || precision as u32 + 2 > max_digits(prime) {
            return Err(Error::Precision(format!(
                "working precision {precision} outside 2..={} for p={prime}",
                max_digits(prime) - 2
            )));
        }
        let mut fp: Vec<u64> = modulus.iter().map(|&c| c.rem_euclid(prime as i64) as u64).collect();
        fp.push(1);
        if !irreducible_mod_p(&fp, prime) {
            return Err(Error::Construction(format!(
                "defining polynomial {modulus:?} is reducible mod {prime}"
            )));
        }
        let mut field = UnramifiedField {
            prime,
            degree,
            modulus,
            precision,
            frobenius_of_t: Vec::new(),
        };
        field.frobenius_of_t = field.compute_frobenius_of_t()?;
        Ok(Arc::new(field))
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn precision(&self) -> i64 {
        self.precision
    }
    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    fn scalar(&self, v: i128) -> PadicScalar {
        PadicScalar::from_int(self.prime, v, self.precision)
    }

    /// Newton iteration for the root of `f` congruent to `t^p`.
    fn compute_frobenius_of_t(&self) -> Result<Vec<PadicScalar>> {
        let me = Arc::new(Self {
            frobenius_of_t: Vec::new(),
            ..self.clone()
        });
        if self.degree == 1 {
            return Ok(vec![self.scalar(-self.modulus[0] as i128)]);
        }
        let t = UnramifiedElement::generator(&me);
        let mut r = t.pow(self.prime);
        let iterations = 2 + (64 - (self.precision as u64).leading_zeros());
        for _ in 0..iterations {
            let fr = me.eval_modulus(&r);
            if fr.is_zero() {
                break;
            }
            let dfr = me.eval_modulus_derivative(&r);
            r = &r - &(&fr * &dfr.inv()?);
        }
        if !me.eval_modulus(&r).is_zero() {
            return Err(Error::Integrity("Frobenius lift did not converge".into()));
        }
        Ok(r.coeffs)
    }

    fn eval_modulus(self: &Arc<Self>, z: &UnramifiedElement) -> UnramifiedElement {
        // Horner on t^e + sum c_i t^i
        let mut acc = UnramifiedElement::one(self);
        for &c in self.modulus.iter().rev() {
            acc = &(&acc * z) + &UnramifiedElement::from_int(self, c as i128);
        }
        acc
    }

    fn eval_modulus_derivative(self: &Arc<Self>, z: &UnramifiedElement) -> UnramifiedElement {
        let e = self.degree;
        let mut acc = UnramifiedElement::from_int(self, e as i128);
        for i in (1..e).rev() {
            acc = &(&acc * z) + &UnramifiedElement::from_int(self, (i as i64 * self.modulus[i]) as i128);
        }
        acc
    }
}

/// An element `sum_i c_i t^i` of `W` with `deg < e`.
#[derive(Clone)]
pub struct UnramifiedElement {
    field: Arc<UnramifiedField>,
    coeffs: Vec<PadicScalar>,
}

impl fmt::Debug for UnramifiedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl UnramifiedElement {
    pub fn new(field: &Arc<UnramifiedField>, coeffs: Vec<PadicScalar>) -> Result<Self> {
        if coeffs.len() != field.degree {
            return Err(Error::Dimension {
                expected: field.degree,
                got: coeffs.len(),
            });
        }
        Ok(Self {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn zero(field: &Arc<UnramifiedField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<UnramifiedField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<UnramifiedField>, v: i128) -> Self {
        Self::from_scalar(field, field.scalar(v))
    }

    pub fn from_scalar(field: &Arc<UnramifiedField>, c: PadicScalar) -> Self {
        let mut coeffs = vec![PadicScalar::zero(field.prime, field.precision); field.degree];
        coeffs[0] = c;
        Self {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_ints(field: &Arc<UnramifiedField>, cs: &[i128]) -> Result<Self> {
        Self::new(field, cs.iter().map(|&c| field.scalar(c)).collect())
    }

    /// The class of `t`.
    pub fn generator(field: &Arc<UnramifiedField>) -> Self {
        if field.degree == 1 {
            return Self::from_int(field, -field.modulus[0] as i128);
        }
        let mut coeffs = vec![PadicScalar::zero(field.prime, field.precision); field.degree];
        coeffs[1] = PadicScalar::one(field.prime, field.precision);
        Self {
            field: field.clone(),
            coeffs,
        }
    }

    /// Random element of `p^min_valuation O_W`.
    pub fn random<R: Rng + ?Sized>(field: &Arc<UnramifiedField>, min_valuation: i64, rng: &mut R) -> Self {
        let coeffs = (0..field.degree)
            .map(|_| PadicScalar::random(field.prime, field.precision, min_valuation, rng))
            .collect();
        Self {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn agrees_with(&self, o: &Self) -> bool {
        (self - o).is_zero()
    }

    /// `min_i v(c_i)`; the power basis of an unramified extension is integral.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(|c| c.valuation()).min()
    }

    /// Smallest absolute precision among the coordinates.
    pub fn precision(&self) -> i64 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(0)
    }

    /// Image in the residue field `F_p[t]/(f)`.
    pub fn residue(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.residue()).collect()
    }

    pub fn is_base(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        Self {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|x| *x * *c).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Matrix of multiplication by `self` in the power basis (columns are images of `t^j`).
    pub fn multiplication_matrix(&self) -> Vec<Vec<PadicScalar>> {
        let e = self.field.degree;
        let mut cols = Vec::with_capacity(e);
        let mut basis = Self::one(&self.field);
        let t = Self::generator(&self.field);
        for _ in 0..e {
            cols.push((self * &basis).coeffs);
            basis = &basis * &t;
        }
        linalg::transpose(&cols)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::PrecisionZeroDivisor);
        }
        let m = self.multiplication_matrix();
        let rhs = Self::one(&self.field).coeffs;
        let x = linalg::solve(&m, &rhs, &linalg::exact_zero).ok_or(Error::PrecisionZeroDivisor)?;
        Ok(Self {
            field: self.field.clone(),
            coeffs: x,
        })
    }

    /// The arithmetic Frobenius `sigma`, the automorphism lifting `x -> x^p`.
    pub fn frobenius(&self) -> Self {
        let f = &self.field;
        let r = Self {
            field: f.clone(),
            coeffs: f.frobenius_of_t.clone(),
        };
        let mut acc = Self::zero(f);
        let mut power = Self::one(f);
        for c in &self.coeffs {
            acc = &acc + &power.scale(c);
            power = &power * &r;
        }
        acc
    }

    /// `sigma^k`, with `k` taken modulo `e`.
    pub fn frobenius_pow(&self, k: i64) -> Self {
        let e = self.field.degree as i64;
        let mut z = self.clone();
        for _ in 0..k.rem_euclid(e) {
            z = z.frobenius();
        }
        z
    }

    /// The Galois conjugates `sigma^i(z)`, `0 <= i < e`.
    pub fn conjugates(&self) -> Vec<Self> {
        let mut out = Vec::with_capacity(self.field.degree);
        let mut z = self.clone();
        for _ in 0..self.field.degree {
            let next = z.frobenius();
            out.push(z);
            z = next;
        }
        out
    }

    /// Value of a Galois-invariant element as a base scalar.
    pub fn to_base(&self) -> Result<PadicScalar> {
        if !self.is_base() {
            return Err(Error::Integrity(format!("expected an element of Q_p, got {self:?}")));
        }
        Ok(self.coeffs[0])
    }
}

/// Field norm and trace to `Q_p`: product and sum of the conjugates.
pub fn norm_trace_to_base(z: &UnramifiedElement) -> Result<(PadicScalar, PadicScalar)> {
    let conj = z.conjugates();
    let f = z.field();
    let norm = conj.iter().fold(UnramifiedElement::one(f), |acc, c| &acc * c);
    let trace = conj.iter().fold(UnramifiedElement::zero(f), |acc, c| &acc + c);
    Ok((norm.to_base()?, trace.to_base()?))
}

pub fn norm_to_base(z: &UnramifiedElement) -> Result<PadicScalar> {
    norm_trace_to_base(z).map(|(n, _)| n)
}

/// Teichmuller lift of a nonzero residue class, given by its coordinates in `F_p[t]/(f)`.
pub fn teichmuller(field: &Arc<UnramifiedField>, residue: &[u64]) -> Result<UnramifiedElement> {
    if residue.len() != field.degree {
        return Err(Error::Dimension {
            expected: field.degree,
            got: residue.len(),
        });
    }
    if residue.iter().all(|&r| r % field.prime == 0) {
        return Err(Error::Domain("Teichmuller lift of the zero residue".into()));
    }
    let q = field.prime.pow(field.degree as u32);
    let mut w = UnramifiedElement::from_ints(field, &residue.iter().map(|&r| r as i128).collect::<Vec<_>>())?;
    // each application of z -> z^q gains one p-adic digit
    for _ in 0..=field.precision {
        let next = w.pow(q);
        if next.agrees_with(&w) {
            return Ok(next);
        }
        w = next;
    }
    Ok(w)
}

/// A principal unit `w` with norm `t`, found by Newton steps on the norm map
/// starting from the principal unit `u`.
pub fn norm_correct(u: &UnramifiedElement, t: &PadicScalar) -> Result<UnramifiedElement> {
    let f = u.field().clone();
    let p = f.prime;
    let one = UnramifiedElement::one(&f);
    let is_principal = |z: &UnramifiedElement| (z - &one).valuation().is_none_or(|v| v >= 1);
    if !is_principal(u) {
        return Err(Error::Domain("norm_correct needs u = 1 mod p".into()));
    }
    if !(*t - PadicScalar::one(p, f.precision)).valuation().is_none_or(|v| v >= 1) {
        return Err(Error::Domain("norm_correct needs t = 1 mod p".into()));
    }
    // an integral element with unit trace exists for unramified extensions
    let mut basis = UnramifiedElement::one(&f);
    let g = UnramifiedElement::generator(&f);
    let mut eta = None;
    for _ in 0..f.degree {
        let (_, tr) = norm_trace_to_base(&basis)?;
        if tr.is_unit() {
            eta = Some((basis.clone(), tr));
            break;
        }
        basis = &basis * &g;
    }
    let (eta, tr_eta) = eta.ok_or_else(|| Error::NormCorrection("no unit-trace basis element".into()))?;
    let eta = eta.scale(&tr_eta.inv()?);
    let mut w = u.clone();
    for _ in 0..4 * f.precision {
        let n = norm_to_base(&w)?;
        let delta = *t * n.inv()? - PadicScalar::one(p, f.precision);
        if delta.is_zero() {
            return Ok(w);
        }
        w = &w * &(&one + &eta.scale(&delta));
    }
    Err(Error::NormCorrection(format!("no convergence towards norm {t}")))
}

macro_rules! elementwise_op {
    ($tr:ident, $f:ident, $op:tt) => {
        impl<'a> $tr<&'a UnramifiedElement> for &'a UnramifiedElement {
            type Output = UnramifiedElement;
            fn $f(self, o: &'a UnramifiedElement) -> UnramifiedElement {
                debug_assert!(Arc::ptr_eq(&self.field, &o.field) || self.field.modulus == o.field.modulus);
                UnramifiedElement {
                    field: self.field.clone(),
                    coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| *a $op *b).collect(),
                }
            }
        }
    };
}
elementwise_op!(Add, add, +);
elementwise_op!(Sub, sub, -);

impl Neg for &UnramifiedElement {
    type Output = UnramifiedElement;
    fn neg(self) -> UnramifiedElement {
        UnramifiedElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -*c).collect(),
        }
    }
}

impl<'a> Mul<&'a UnramifiedElement> for &'a UnramifiedElement {
    type Output = UnramifiedElement;
    fn mul(self, o: &'a UnramifiedElement) -> UnramifiedElement {
        let f = &self.field;
        let e = f.degree;
        let zero = PadicScalar::zero(f.prime, f.precision);
        let mut prod = vec![zero; 2 * e - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() && a.precision() >= f.precision {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                prod[i + j] = prod[i + j] + *a * *b;
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c.is_zero() && c.precision() >= f.precision {
                continue;
            }
            for (i, &m) in f.modulus.iter().enumerate() {
                prod[k - e + i] = prod[k - e + i] - c * PadicScalar::from_int(f.prime, m as i128, f.precision);
            }
        }
        prod.truncate(e);
        UnramifiedElement {
            field: f.clone(),
            coeffs: prod,
        }
    }
}

impl Scalar for UnramifiedElement {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn is_zero(&self) -> bool {
        UnramifiedElement::is_zero(self)
    }
    fn pivot_weight(&self) -> Option<i64> {
        self.valuation()
    }
}

/// Whether the degree-`e` unramified extension of `Q_p` contains a primitive
/// `ell`-th root of unity.
pub fn has_primitive_ell_root(p: u64, e: u32, ell: u64) -> Result<bool> {
    if !is_prime(ell) {
        return Err(Error::Domain(format!("{ell} is not prime")));
    }
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if ell == p {
        // -1 for p = 2; odd p-th roots of unity need ramification
        return Ok(p == 2);
    }
    let q = (p as u128).pow(e);
    Ok((q - 1).is_multiple_of(ell as u128))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn default_modulus_is_irreducible() {
        for (p, e) in [(2, 2), (3, 2), (5, 3), (7, 3), (2, 4), (3, 5)] {
            let f = default_modulus(p, e);
            let mut fp: Vec<u64> = f.iter().map(|&c| c as u64).collect();
            fp.push(1);
            assert!(irreducible_mod_p(&fp, p));
        }
        assert_eq!(default_modulus(2, 2), vec![1, 1]);
    }

    #[test]
    fn frobenius_of_generator_mod_two() {
        // f = t^2 + t + 1 over Z_2: sigma(t) = t^2 = -t - 1, the other root
        let w = UnramifiedField::with_modulus(2, vec![1, 1], 10).unwrap();
        let t = UnramifiedElement::generator(&w);
        let s = t.frobenius();
        assert_eq!(s.residue(), vec![1, 1]);
        // exact: the other root is -1 - t
        let other = &(-&t) - &UnramifiedElement::one(&w);
        assert!(s.agrees_with(&other));
        let (_, tr) = norm_trace_to_base(&t).unwrap();
        assert!(tr.agrees_with(&PadicScalar::from_int(2, -1, 10)));
    }

    #[test]
    fn frobenius_has_order_e_and_fixes_base() {
        let w = UnramifiedField::new(5, 3, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let z = UnramifiedElement::random(&w, 0, &mut rng);
            assert!(z.frobenius_pow(3).agrees_with(&z));
            let zp = z.pow(5);
            assert_eq!(z.frobenius().residue(), zp.residue());
        }
        let one = UnramifiedElement::one(&w);
        assert!(one.frobenius().agrees_with(&one));
        let c = UnramifiedElement::from_int(&w, 17);
        assert!(c.frobenius().agrees_with(&c));
    }

    #[test]
    fn teichmuller_lifts() {
        let w = UnramifiedField::new(5, 3, 8).unwrap();
        let one = teichmuller(&w, &[1, 0, 0]).unwrap();
        assert!(one.agrees_with(&UnramifiedElement::one(&w)));
        let minus = teichmuller(&w, &[4, 0, 0]).unwrap();
        assert!(minus.agrees_with(&UnramifiedElement::from_int(&w, -1)));
        let om = teichmuller(&w, &[2, 3, 1]).unwrap();
        assert!(om.pow(124).agrees_with(&UnramifiedElement::one(&w)));
        assert_eq!(om.residue(), vec![2, 3, 1]);
        assert!(teichmuller(&w, &[0, 0, 0]).is_err());
    }

    #[test]
    fn inverse_and_norm_multiplicativity() {
        let w = UnramifiedField::new(5, 3, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let a = UnramifiedElement::random(&w, 0, &mut rng);
            let b = UnramifiedElement::random(&w, 0, &mut rng);
            if a.valuation() == Some(0) {
                assert!((&a * &a.inv().unwrap()).agrees_with(&UnramifiedElement::one(&w)));
            }
            let nab = norm_to_base(&(&a * &b)).unwrap();
            let na = norm_to_base(&a).unwrap();
            let nb = norm_to_base(&b).unwrap();
            assert!(nab.agrees_with(&(na * nb)));
        }
        let c = UnramifiedElement::from_int(&w, 7);
        assert!(norm_to_base(&c).unwrap().agrees_with(&PadicScalar::from_int(5, 343, 10)));
    }

    #[test]
    fn norm_correction_hits_target() {
        let w = UnramifiedField::new(5, 3, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let one = UnramifiedElement::one(&w);
        for _ in 0..5 {
            let t = PadicScalar::one(5, 10) + PadicScalar::random(5, 10, 1, &mut rng);
            let u = &one + &UnramifiedElement::random(&w, 1, &mut rng);
            let c = norm_correct(&u, &t).unwrap();
            assert!(norm_to_base(&c).unwrap().agrees_with(&t));
        }
        let fixed = norm_correct(&one, &PadicScalar::one(5, 10)).unwrap();
        assert!(fixed.agrees_with(&one));
    }

    #[test]
    fn roots_of_unity_criterion() {
        assert!(!has_primitive_ell_root(5, 1, 3).unwrap());
        assert!(has_primitive_ell_root(3, 1, 2).unwrap());
        assert!(has_primitive_ell_root(5, 3, 31).unwrap());
        assert!(has_primitive_ell_root(2, 1, 2).unwrap());
        assert!(!has_primitive_ell_root(3, 1, 3).unwrap());
        assert!(has_primitive_ell_root(5, 1, 4).is_err());
    }
}
