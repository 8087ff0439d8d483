//! Cyclic division algebras `D = W + Wx + ... + Wx^(l-1)` of prime degree `l`
//! over `Q_p`, with `x z = sigma(z) x` and `x^l = p`.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, Scalar};
use crate::padic::unramified::is_prime;
use crate::padic::{has_primitive_ell_root, norm_correct, teichmuller, PadicScalar, UnramifiedElement, UnramifiedField};
use crate::report::{trial_rng, AuditReport};

pub const DEFAULT_PRECISION: i64 = 12;

#[derive(Debug)]
pub struct CyclicAlgebra {
    prime: u64,
    degree: usize,
    w: Arc<UnramifiedField>,
    precision: i64,
}

impl CyclicAlgebra {
    pub fn new(prime: u64, degree: usize, precision: i64) -> Result<Arc<Self>> {
        if !is_prime(degree as u64) {
            return Err(Error::Domain(format!("degree {degree} is not prime")));
        }
        let w = UnramifiedField::new(prime, degree, precision)?;
        Ok(Arc::new(Self {
            prime,
            degree,
            w,
            precision,
        }))
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
    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.w
    }

    /// Valuations at or above this are treated as zero in rank decisions.
    pub fn floor(&self) -> i64 {
        self.precision - 2
    }

    pub fn dim_over_base(&self) -> usize {
        self.degree * self.degree
    }

    fn p_scalar(&self) -> PadicScalar {
        PadicScalar::from_int(self.prime, self.prime as i128, self.precision)
    }

    /// `t^a x^i` for the `Q_p`-basis index `i*l + a`.
    pub fn basis_element(self: &Arc<Self>, index: usize) -> AlgebraElement {
        let l = self.degree;
        let mut z = vec![UnramifiedElement::zero(&self.w); l];
        let mut c = vec![PadicScalar::zero(self.prime, self.precision); l];
        c[index % l] = PadicScalar::one(self.prime, self.precision);
        z[index / l] = UnramifiedElement::new(&self.w, c).expect("length l");
        AlgebraElement {
            alg: self.clone(),
            coeffs: z,
        }
    }

    /// Random element of `pi^n R`, `R` the maximal order.
    pub fn random_in_ideal<R: Rng + ?Sized>(self: &Arc<Self>, n: i64, rng: &mut R) -> AlgebraElement {
        let l = self.degree as i64;
        let coeffs = (0..l)
            .map(|i| {
                let min_v = ((n - i) as f64 / l as f64).ceil().max(0.0) as i64;
                UnramifiedElement::random(&self.w, min_v, rng)
            })
            .collect();
        AlgebraElement { alg: self.clone(), coeffs }
    }

    /// An element of `SL_1^n(D)`: `1 + r` with `r` in `pi^n R`, corrected by an
    /// element of `W` to reduced norm one.
    pub fn sample_sl1n_with<R: Rng + ?Sized>(self: &Arc<Self>, n: i64, rng: &mut R) -> Result<AlgebraElement> {
        if n < 1 {
            return Err(Error::Domain(format!("congruence level {n} < 1")));
        }
        let g = &AlgebraElement::one(self) + &self.random_in_ideal(n, rng);
        let t = g.reduced_norm()?;
        let w = norm_correct(&UnramifiedElement::one(&self.w), &t.inv()?)?;
        let g = &AlgebraElement::from_w(self, w) * &g;
        if !g.reduced_norm()?.agrees_with(&PadicScalar::one(self.prime, self.precision)) {
            return Err(Error::Integrity("sampled element has reduced norm != 1".into()));
        }
        if g.congruence_level()? < n {
            return Err(Error::Integrity("sampled element left the congruence subgroup".into()));
        }
        Ok(g)
    }

    pub fn sample_sl1n(self: &Arc<Self>, n: i64, seed: u64) -> Result<AlgebraElement> {
        self.sample_sl1n_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform-ish element of `Delta`: the `(p-1)`-th power of a Teichmuller lift.
    pub fn random_delta<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> Result<AlgebraElement> {
        let l = self.degree;
        let mut r = vec![0u64; l];
        while r.iter().all(|&c| c == 0) {
            r = (0..l).map(|_| rng.gen_range(0..self.prime)).collect();
        }
        let om = teichmuller(&self.w, &r)?.pow(self.prime - 1);
        Ok(AlgebraElement::from_w(self, om))
    }

    /// Element of `SL_1(D) = Delta . SL_1^1(D)`; level 0 means the whole group.
    pub fn sample_level<R: Rng + ?Sized>(self: &Arc<Self>, n: i64, rng: &mut R) -> Result<AlgebraElement> {
        if n >= 1 {
            return self.sample_sl1n_with(n, rng);
        }
        let d = self.random_delta(rng)?;
        Ok(&d * &self.sample_sl1n_with(1, rng)?)
    }

    /// All Teichmuller lifts of reduced norm one.
    pub fn delta_torus(self: &Arc<Self>) -> Result<Vec<AlgebraElement>> {
        let l = self.degree;
        let p = self.prime;
        let one = PadicScalar::one(p, self.precision);
        let mut out = Vec::new();
        for code in 1..p.pow(l as u32) {
            let mut c = code;
            let r: Vec<u64> = (0..l)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect();
            let om = AlgebraElement::from_w(self, teichmuller(&self.w, &r)?);
            if om.reduced_norm()?.agrees_with(&one) {
                out.push(om);
            }
        }
        Ok(out)
    }

    /// Teichmuller lift of an element of order `l` in `F_p^*`, when there is one.
    pub fn central_root_of_unity(self: &Arc<Self>) -> Result<Option<AlgebraElement>> {
        let (p, l) = (self.prime, self.degree as u64);
        if l == p || (p - 1) % l != 0 {
            return Ok(None);
        }
        let r = (2..p).find(|&r| mod_pow(r, l, p) == 1).unwrap_or(p - 1);
        let mut res = vec![0u64; self.degree];
        res[0] = r;
        Ok(Some(AlgebraElement::from_w(self, teichmuller(&self.w, &res)?)))
    }
}

fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let (mut acc, mut b) = (1u64, b % m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `sum_i z_i x^i`.
#[derive(Clone)]
pub struct AlgebraElement {
    alg: Arc<CyclicAlgebra>,
    coeffs: Vec<UnramifiedElement>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl AlgebraElement {
    pub fn new(alg: &Arc<CyclicAlgebra>, coeffs: Vec<UnramifiedElement>) -> Result<Self> {
        if coeffs.len() != alg.degree {
            return Err(Error::Dimension {
                expected: alg.degree,
                got: coeffs.len(),
            });
        }
        Ok(Self { alg: alg.clone(), coeffs })
    }

    pub fn zero(alg: &Arc<CyclicAlgebra>) -> Self {
        Self {
            alg: alg.clone(),
            coeffs: vec![UnramifiedElement::zero(&alg.w); alg.degree],
        }
    }

    pub fn one(alg: &Arc<CyclicAlgebra>) -> Self {
        Self::from_w(alg, UnramifiedElement::one(&alg.w))
    }

    pub fn from_w(alg: &Arc<CyclicAlgebra>, z: UnramifiedElement) -> Self {
        let mut out = Self::zero(alg);
        out.coeffs[0] = z;
        out
    }

    pub fn from_int(alg: &Arc<CyclicAlgebra>, v: i128) -> Self {
        Self::from_w(alg, UnramifiedElement::from_int(&alg.w, v))
    }

    /// The uniformizer `x`.
    pub fn x(alg: &Arc<CyclicAlgebra>) -> Self {
        let mut out = Self::zero(alg);
        if alg.degree == 1 {
            out.coeffs[0] = UnramifiedElement::from_int(&alg.w, alg.prime as i128);
        } else {
            out.coeffs[1] = UnramifiedElement::one(&alg.w);
        }
        out
    }

    pub fn algebra(&self) -> &Arc<CyclicAlgebra> {
        &self.alg
    }

    pub fn coeffs(&self) -> &[UnramifiedElement] {
        &self.coeffs
    }

    /// Coordinates over `Q_p` in the basis `t^a x^i`, index `i*l + a`.
    pub fn base_coords(&self) -> Vec<PadicScalar> {
        self.coeffs.iter().flat_map(|z| z.coeffs().iter().copied()).collect()
    }

    pub fn from_base_coords(alg: &Arc<CyclicAlgebra>, v: &[PadicScalar]) -> Result<Self> {
        let l = alg.degree;
        if v.len() != l * l {
            return Err(Error::Dimension {
                expected: l * l,
                got: v.len(),
            });
        }
        let coeffs = v
            .chunks(l)
            .map(|c| UnramifiedElement::new(&alg.w, c.to_vec()))
            .collect::<Result<_>>()?;
        Ok(Self { alg: alg.clone(), coeffs })
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &o.alg) {
            Ok(())
        } else {
            Err(Error::Domain("elements of different algebras".into()))
        }
    }

    /// Product with an explicit algebra check.
    pub fn multiply(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(self * o)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.is_zero())
    }

    /// Zero after discarding digits at or above the algebra's precision floor.
    pub fn is_negligible(&self) -> bool {
        let floor = self.alg.floor();
        self.base_coords().iter().all(|c| c.valuation().is_none_or(|v| v >= floor))
    }

    pub fn agrees_with(&self, o: &Self) -> bool {
        (self - o).is_zero()
    }

    pub fn commutes_with(&self, o: &Self) -> bool {
        (&(self * o) - &(o * self)).is_negligible()
    }

    pub fn is_central(&self) -> bool {
        self.coeffs[1..].iter().all(|z| z.is_zero()) && self.coeffs[0].is_base()
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        Self {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().map(|z| z.scale(c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.alg);
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

    /// Matrix over `Q_p` of `y -> self * y`.
    pub fn left_matrix(&self) -> Vec<Vec<PadicScalar>> {
        let n = self.alg.dim_over_base();
        let cols: Vec<_> = (0..n).map(|b| (self * &self.alg.basis_element(b)).base_coords()).collect();
        linalg::transpose(&cols)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::PrecisionZeroDivisor);
        }
        let rhs = Self::one(&self.alg).base_coords();
        let x = linalg::solve(&self.left_matrix(), &rhs, &linalg::exact_zero).ok_or(Error::PrecisionZeroDivisor)?;
        Self::from_base_coords(&self.alg, &x)
    }

    /// Determinant of left multiplication on the right `W`-module with basis `x^j`.
    pub fn reduced_norm(&self) -> Result<PadicScalar> {
        let l = self.alg.degree;
        let p = self.alg.p_scalar();
        // conj[i][s] = sigma^(-s)(z_i)
        let conj: Vec<Vec<UnramifiedElement>> = self
            .coeffs
            .iter()
            .map(|z| {
                let mut row = vec![z.clone()];
                for s in 1..l {
                    row.push(z.frobenius_pow(-(s as i64)));
                }
                row
            })
            .collect();
        let entry = |k: usize, j: usize| {
            let i = (k + l - j) % l;
            let c = &conj[i][(i + j) % l];
            if i + j >= l {
                c.scale(&p)
            } else {
                c.clone()
            }
        };
        let m: Vec<Vec<UnramifiedElement>> = (0..l).map(|k| (0..l).map(|j| entry(k, j)).collect()).collect();
        leibniz_det(&m)?.to_base()
    }

    /// `w(sum z_i x^i) = min_i (l v(z_i) + i)`.
    pub fn valuation(&self) -> Result<i64> {
        let l = self.alg.degree as i64;
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, z)| z.valuation().map(|v| l * v + i as i64))
            .min()
            .ok_or_else(|| Error::Precision("valuation of an element indistinguishable from 0".into()))
    }

    fn valuation_cap(&self) -> i64 {
        self.alg.degree as i64 * self.coeffs.iter().map(|z| z.precision()).min().unwrap_or(0)
    }

    /// Largest `n` with `self = 1 mod pi^n R`, capped by precision.
    pub fn congruence_level(&self) -> Result<i64> {
        if self.valuation()? != 0 {
            return Err(Error::Domain("congruence level of a non-unit".into()));
        }
        let d = self - &Self::one(&self.alg);
        let cap = self.valuation_cap();
        Ok(if d.is_zero() { cap } else { d.valuation()?.min(cap) })
    }

    /// Splits a unit of reduced norm one as `delta * g1` with `delta` in `Delta`
    /// and `g1` in `SL_1^1(D)`.
    pub fn delta_decomposition(&self) -> Result<(Self, Self)> {
        if self.valuation()? != 0 {
            return Err(Error::Domain("decomposition of a non-unit".into()));
        }
        let delta = Self::from_w(&self.alg, teichmuller(&self.alg.w, &self.coeffs[0].residue())?);
        let g1 = &delta.inv()? * self;
        Ok((delta, g1))
    }

    /// Smallest `1 <= m <= max` with `self^m = 1` at precision.
    pub fn torsion_order(&self, max: u64) -> Option<u64> {
        let one = Self::one(&self.alg);
        let mut acc = self.clone();
        for m in 1..=max {
            if (&acc - &one).is_negligible() {
                return Some(m);
            }
            acc = &acc * self;
        }
        None
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .coeffs
            .iter()
            .map(|z| z.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

fn leibniz_det<F: Scalar>(m: &[Vec<F>]) -> Result<F> {
    let n = m.len();
    let zero = m[0][0].zero_like();
    let mut total = zero.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut stack = vec![0usize; n];
    let mut sign = true;
    let term = |perm: &[usize]| perm.iter().enumerate().fold(m[0][0].one_like(), |acc, (r, &c)| acc.times(&m[r][c]));
    // Heap's algorithm: consecutive permutations differ by one transposition
    total = total.plus(&term(&perm));
    let mut i = 0;
    while i < n {
        if stack[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(stack[i], i);
            }
            sign = !sign;
            let t = term(&perm);
            total = if sign { total.plus(&t) } else { total.minus(&t) };
            stack[i] += 1;
            i = 0;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, o: &'a AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, o: &'a AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().map(|z| -z).collect(),
        }
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, o: &'a AlgebraElement) -> AlgebraElement {
        let alg = &self.alg;
        let l = alg.degree;
        let p = alg.p_scalar();
        let mut out = vec![UnramifiedElement::zero(&alg.w); l];
        // z_i x^i . y_j x^j = z_i sigma^i(y_j) x^(i+j), and x^l = p
        let shifted: Vec<Vec<UnramifiedElement>> = (0..l)
            .map(|i| o.coeffs.iter().map(|y| y.frobenius_pow(i as i64)).collect())
            .collect();
        for (i, z) in self.coeffs.iter().enumerate() {
            for j in 0..l {
                let mut term = z * &shifted[i][j];
                if i + j >= l {
                    term = term.scale(&p);
                }
                out[(i + j) % l] = &out[(i + j) % l] + &term;
            }
        }
        AlgebraElement {
            alg: alg.clone(),
            coeffs: out,
        }
    }
}

fn floored(floor: i64, flags: &Cell<usize>) -> impl Fn(&PadicScalar) -> bool + '_ {
    move |c: &PadicScalar| match c.valuation() {
        None => true,
        Some(v) if v >= floor => {
            flags.set(flags.get() + 1);
            true
        }
        _ => false,
    }
}

/// Rank over `Q_p` with the precision floor; fails when pivots sit in the band just
/// below the floor, where the decision would depend on the floor itself.
pub fn floored_rank(rows: &[Vec<PadicScalar>], floor: i64) -> Result<(usize, usize)> {
    let flags = Cell::new(0);
    let r = linalg::rank(rows, &floored(floor, &flags));
    let loose = Cell::new(0);
    let r2 = linalg::rank(rows, &floored((floor - 2).max(1), &loose));
    if r != r2 {
        return Err(Error::IllConditioned(format!(
            "rank {r} at floor {floor} but {r2} at floor {}",
            floor - 2
        )));
    }
    Ok((r, flags.get()))
}

/// Basis of a `Q_p`-kernel with vectors scaled to be primitive integral.
fn floored_kernel(rows: &[Vec<PadicScalar>], ncols: usize, floor: i64, p: u64, prec: i64) -> Result<(Vec<Vec<PadicScalar>>, usize)> {
    let (_, flags) = floored_rank(rows, floor)?;
    let f = Cell::new(0);
    let ker = linalg::nullspace(rows, ncols, &PadicScalar::one(p, prec), &floored(floor, &f));
    let ker = ker
        .into_iter()
        .map(|v| {
            let m = v.iter().filter_map(|c| c.valuation()).min().unwrap_or(0);
            v.iter().map(|c| c.shift(-m)).collect()
        })
        .collect();
    Ok((ker, flags))
}

/// Commutant `{y : d y = y d}` as a `Q_p`-basis, with the count of floored entries.
pub fn centralizer_basis(d: &AlgebraElement) -> Result<(Vec<AlgebraElement>, usize)> {
    let alg = &d.alg;
    let n = alg.dim_over_base();
    let cols: Vec<_> = (0..n)
        .map(|b| {
            let e = alg.basis_element(b);
            (&(d * &e) - &(&e * d)).base_coords()
        })
        .collect();
    let rows = linalg::transpose(&cols);
    let (ker, flags) = floored_kernel(&rows, n, alg.floor(), alg.prime, alg.precision)?;
    let basis = ker
        .iter()
        .map(|v| AlgebraElement::from_base_coords(alg, v))
        .collect::<Result<_>>()?;
    Ok((basis, flags))
}

pub fn centralizer_dimension(d: &AlgebraElement) -> Result<usize> {
    centralizer_basis(d).map(|(b, _)| b.len())
}

#[derive(Serialize, Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaCriteria {
    pub sl1_ca: bool,
    pub sl1_1_ca: bool,
    pub sl1n_bound: u64,
}

/// The CA criteria for `SL_1(D)`, `SL_1^1(D)` and `SL_1^n(D)` over a base with
/// residue field `F_p` and ramification index `e`.
pub fn ca_criteria(p: u64, ell: u64, e: u64) -> Result<CaCriteria> {
    if e == 0 {
        return Err(Error::Domain("ramification index 0".into()));
    }
    let roots = has_primitive_ell_root(p, 1, ell)?;
    Ok(CaCriteria {
        sl1_ca: !roots,
        sl1_1_ca: p != ell || !roots,
        sl1n_bound: (e * ell).div_ceil(p - 1),
    })
}

/// A certified failure of commutation transitivity: `a` commutes with `b` and
/// `c`, which do not commute with each other.
#[derive(Debug, Clone)]
pub struct NonCaWitness {
    pub a: AlgebraElement,
    pub b: AlgebraElement,
    pub c: AlgebraElement,
}

impl NonCaWitness {
    pub fn verify(&self) -> bool {
        self.a.commutes_with(&self.b) && self.a.commutes_with(&self.c) && !self.b.commutes_with(&self.c)
    }

    pub fn to_json(&self) -> Value {
        json!({"a": self.a.to_json(), "b": self.b.to_json(), "c": self.c.to_json(), "verified": self.verify()})
    }
}

/// `(zeta, g, h)` with `zeta` a central root of unity of order `l` and `g, h`
/// non-commuting elements of `SL_1(D)`.
pub fn central_witness(alg: &Arc<CyclicAlgebra>, seed: u64) -> Result<Option<NonCaWitness>> {
    let Some(zeta) = alg.central_root_of_unity()? else {
        return Ok(None);
    };
    if !zeta.reduced_norm()?.agrees_with(&PadicScalar::one(alg.prime, alg.precision)) {
        return Err(Error::Integrity("central root of unity has reduced norm != 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let g = alg.sample_level(0, &mut rng)?;
        let h = alg.sample_level(0, &mut rng)?;
        let w = NonCaWitness {
            a: zeta.clone(),
            b: g,
            c: h,
        };
        if w.verify() {
            return Ok(Some(w));
        }
    }
    Err(Error::Integrity("no non-commuting pair found".into()))
}

#[derive(Default)]
struct TrialOutcome {
    skipped: bool,
    violation: Option<Value>,
    flags: usize,
    commuting_pair: bool,
}

/// Sampled transitivity audit on `SL_1^n(D)` (`n = 0` for `SL_1(D)`): elements of
/// each commutant must commute, and independent samples should not.
pub fn transitivity_audit(alg: &Arc<CyclicAlgebra>, n: i64, trials: usize, seed: u64) -> Result<AuditReport> {
    let l = alg.degree;
    let criteria = ca_criteria(alg.prime, l as u64, 1)?;
    let predicted = match n {
        0 => criteria.sl1_ca,
        1 => criteria.sl1_1_ca,
        _ => criteria.sl1_1_ca || n as u64 >= criteria.sl1n_bound,
    };
    let outcomes: Vec<Result<TrialOutcome>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let mut out = TrialOutcome::default();
            let g = alg.sample_level(n, &mut rng)?;
            if g.is_central() {
                out.skipped = true;
                return Ok(out);
            }
            let (basis, flags) = match centralizer_basis(&g) {
                Ok(b) => b,
                Err(Error::IllConditioned(_)) => {
                    out.skipped = true;
                    out.flags = 1;
                    return Ok(out);
                }
                Err(e) => return Err(e),
            };
            out.flags = flags;
            if basis.len() != l {
                out.violation = Some(json!({"kind": "commutant_dimension", "g": g.to_json(), "dim": basis.len()}));
                return Ok(out);
            }
            let combo = |rng: &mut ChaCha8Rng| {
                basis.iter().fold(AlgebraElement::zero(alg), |acc, b| {
                    let c = PadicScalar::from_int(alg.prime, rng.gen_range(-20..=20), alg.precision);
                    &acc + &b.scale(&c)
                })
            };
            let a = combo(&mut rng);
            let c = combo(&mut rng);
            if !a.commutes_with(&c) || !a.commutes_with(&g) {
                out.violation = Some(json!({"kind": "commutant_not_abelian", "g": g.to_json(), "a": a.to_json(), "c": c.to_json()}));
            }
            let h = alg.sample_level(n, &mut rng)?;
            out.commuting_pair = g.commutes_with(&h);
            Ok(out)
        })
        .collect();
    let mut report = AuditReport::new(json!({"p": alg.prime, "l": l, "level": n, "precision": alg.precision, "seed": seed}));
    report.trials = trials;
    let (mut skipped, mut commuting) = (0usize, 0usize);
    for o in outcomes {
        let o = o?;
        skipped += o.skipped as usize;
        commuting += o.commuting_pair as usize;
        report.precision_flags += o.flags;
        if let Some(v) = o.violation {
            report.violations += 1;
            if report.witnesses.len() < 5 {
                report.witnesses.push(v);
            }
        }
    }
    report.stat("ca_predicted", predicted);
    report.stat("skipped_trials", skipped);
    report.stat("commuting_independent_pairs", commuting);
    if n == 0 && !criteria.sl1_ca {
        if let Some(w) = central_witness(alg, seed)? {
            let mut v = w.to_json();
            v["kind"] = json!("central_root_of_unity");
            report.witnesses.push(v);
        }
    }
    Ok(report)
}

/// Audits that the commutant `F` of a sampled `g` meets `hFh^-1` only in the
/// centre, for `h` outside the centralizer of `g`.
pub fn malnormality_audit(alg: &Arc<CyclicAlgebra>, trials: usize, seed: u64) -> Result<AuditReport> {
    let outcomes: Vec<Result<(Option<usize>, usize)>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let g = alg.sample_level(0, &mut rng)?;
            let h = alg.sample_level(0, &mut rng)?;
            malnormality_trial(&g, &h)
        })
        .collect();
    let mut report = AuditReport::new(json!({"p": alg.prime, "l": alg.degree, "precision": alg.precision, "seed": seed}));
    report.trials = trials;
    let mut dims = std::collections::BTreeMap::<usize, usize>::new();
    let mut invalid = 0usize;
    for o in outcomes {
        let (dim, flags) = o?;
        report.precision_flags += flags;
        match dim {
            None => invalid += 1,
            Some(d) => {
                *dims.entry(d).or_default() += 1;
                if d != 1 {
                    report.violations += 1;
                }
            }
        }
    }
    report.stat("invalid_trials", invalid);
    report.stat("intersection_dimensions", json!(dims));
    Ok(report)
}

/// `dim_Qp (F cap hFh^-1)` for `F` the commutant of `g`; `None` for an invalid
/// trial (`g` central, `h` in the centralizer, or ill-conditioned at precision).
pub fn malnormality_trial(g: &AlgebraElement, h: &AlgebraElement) -> Result<(Option<usize>, usize)> {
    let alg = &g.alg;
    if g.is_central() || g.commutes_with(h) {
        return Ok((None, 0));
    }
    let (f, flags) = match centralizer_basis(g) {
        Ok(b) => b,
        Err(Error::IllConditioned(_)) => return Ok((None, 1)),
        Err(e) => return Err(e),
    };
    let hinv = h.inv()?;
    let mut rows: Vec<Vec<PadicScalar>> = f.iter().map(|b| b.base_coords()).collect();
    rows.extend(f.iter().map(|b| (&(h * b) * &hinv).base_coords()));
    match floored_rank(&rows, alg.floor()) {
        Ok((r, fl)) => Ok((Some(2 * f.len() - r), flags + fl)),
        Err(Error::IllConditioned(_)) => Ok((None, flags + 1)),
        Err(e) => Err(e),
    }
}

/// Quaternion algebra `(a, b)` on the basis `1, u, v, uv` with `u^2 = a`,
/// `v^2 = b`, `vu = -uv`.
#[derive(Clone, Debug)]
pub struct QuaternionAlgebra<F: Scalar> {
    pub a: F,
    pub b: F,
}

impl<F: Scalar> QuaternionAlgebra<F> {
    pub fn new(a: F, b: F) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::Domain("quaternion parameters must be nonzero".into()));
        }
        Ok(Self { a, b })
    }

    pub fn multiply(&self, x: &[F; 4], y: &[F; 4]) -> [F; 4] {
        let (a, b) = (&self.a, &self.b);
        let ab = a.times(b);
        let m = |i: usize, j: usize| x[i].times(&y[j]);
        let c0 = m(0, 0).plus(&a.times(&m(1, 1))).plus(&b.times(&m(2, 2))).minus(&ab.times(&m(3, 3)));
        let c1 = m(0, 1).plus(&m(1, 0)).minus(&b.times(&m(2, 3))).plus(&b.times(&m(3, 2)));
        let c2 = m(0, 2).plus(&m(2, 0)).plus(&a.times(&m(1, 3))).minus(&a.times(&m(3, 1)));
        let c3 = m(0, 3).plus(&m(3, 0)).plus(&m(1, 2)).minus(&m(2, 1));
        [c0, c1, c2, c3]
    }

    pub fn reduced_norm(&self, x: &[F; 4]) -> F {
        let ab = self.a.times(&self.b);
        x[0].times(&x[0])
            .minus(&self.a.times(&x[1].times(&x[1])))
            .minus(&self.b.times(&x[2].times(&x[2])))
            .plus(&ab.times(&x[3].times(&x[3])))
    }
}

/// Dimension of the solution space `(x, y, z)` of
/// `gamma z = delta y`, `delta x = beta z`, `gamma x = beta y`.
pub fn quaternion_commutant_rank<F: Scalar>(beta: &F, gamma: &F, delta: &F) -> usize {
    let z = beta.zero_like();
    let rows = vec![
        vec![z.clone(), delta.negated(), gamma.clone()],
        vec![delta.clone(), z.clone(), beta.negated()],
        vec![gamma.clone(), beta.negated(), z],
    ];
    3 - linalg::rank(&rows, &linalg::exact_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn alg(p: u64, l: usize) -> Arc<CyclicAlgebra> {
        CyclicAlgebra::new(p, l, 12).unwrap()
    }

    #[test]
    fn defining_relations() {
        let d = alg(5, 3);
        let x = AlgebraElement::x(&d);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let z = UnramifiedElement::random(d.field(), 0, &mut rng);
        let lhs = &x * &AlgebraElement::from_w(&d, z.clone());
        let rhs = &AlgebraElement::from_w(&d, z.frobenius()) * &x;
        assert!(lhs.agrees_with(&rhs));
        assert!(x.pow(3).agrees_with(&AlgebraElement::from_int(&d, 5)));
        let one = AlgebraElement::one(&d);
        assert!((&one * &x).agrees_with(&x));
    }

    #[test]
    fn reduced_norm_of_generators() {
        for (p, l) in [(5u64, 3usize), (3, 2), (7, 3), (3, 5)] {
            let d = alg(p, l);
            let x = AlgebraElement::x(&d);
            let sign = if l % 2 == 1 { 1 } else { -1 };
            let expect = PadicScalar::from_int(p, sign * p as i128, 12);
            assert!(x.reduced_norm().unwrap().agrees_with(&expect), "p={p} l={l}");
            let c = AlgebraElement::from_int(&d, 2);
            assert!(c.reduced_norm().unwrap().agrees_with(&PadicScalar::from_int(p, 1 << l, 12)));
        }
    }

    #[test]
    fn valuation_and_levels() {
        let d = alg(5, 3);
        let one = AlgebraElement::one(&d);
        let x = AlgebraElement::x(&d);
        assert_eq!(AlgebraElement::from_int(&d, 5).valuation().unwrap(), 3);
        assert_eq!(x.valuation().unwrap(), 1);
        assert_eq!((&one + &x).congruence_level().unwrap(), 1);
        assert_eq!(one.congruence_level().unwrap(), 36);
        let t = AlgebraElement::from_w(&d, UnramifiedElement::generator(d.field()));
        let g = &one + &t.scale(&PadicScalar::from_int(5, 5, 12));
        assert_eq!(g.congruence_level().unwrap(), 3);
        assert!(x.congruence_level().is_err());
        assert!(AlgebraElement::zero(&d).valuation().is_err());
    }

    #[test]
    fn sampler_postconditions() {
        let d = alg(5, 3);
        for n in 1..=4 {
            let g = d.sample_sl1n(n, 7).unwrap();
            assert!(g.congruence_level().unwrap() >= n);
            assert!(g.reduced_norm().unwrap().agrees_with(&PadicScalar::one(5, 12)));
        }
        assert!(d.sample_sl1n(2, 9).unwrap().agrees_with(&d.sample_sl1n(2, 9).unwrap()));
    }

    #[test]
    fn delta_orders() {
        let d = alg(3, 2);
        let delta = d.delta_torus().unwrap();
        assert_eq!(delta.len(), 4);
        assert!(delta.iter().any(|e| e.agrees_with(&AlgebraElement::one(&d))));
    }

    #[test]
    fn centralizers() {
        let d = alg(5, 3);
        assert_eq!(centralizer_dimension(&AlgebraElement::one(&d)).unwrap(), 9);
        assert_eq!(centralizer_dimension(&AlgebraElement::x(&d)).unwrap(), 3);
        let g = d.sample_sl1n(1, 3).unwrap();
        assert_eq!(centralizer_dimension(&g).unwrap(), 3);
    }

    #[test]
    fn delta_decomposition_recovers_factors() {
        let d = alg(5, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = d.sample_level(0, &mut rng).unwrap();
        let (delta, g1) = g.delta_decomposition().unwrap();
        assert!(g1.congruence_level().unwrap() >= 1);
        assert!(delta.torsion_order(124).is_some());
        assert!((&delta * &g1).agrees_with(&g));
    }

    #[test]
    fn criteria_table() {
        assert_eq!(
            ca_criteria(5, 3, 1).unwrap(),
            CaCriteria {
                sl1_ca: true,
                sl1_1_ca: true,
                sl1n_bound: 1
            }
        );
        assert_eq!(
            ca_criteria(3, 2, 1).unwrap(),
            CaCriteria {
                sl1_ca: false,
                sl1_1_ca: true,
                sl1n_bound: 1
            }
        );
        assert!(ca_criteria(3, 3, 1).unwrap().sl1_1_ca);
        assert!(!ca_criteria(2, 2, 1).unwrap().sl1_1_ca);
    }

    #[test]
    fn quaternion_system() {
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        assert_eq!(quaternion_commutant_rank(&q(0), &q(0), &q(0)), 3);
        assert_eq!(quaternion_commutant_rank(&q(1), &q(0), &q(0)), 1);
        assert_eq!(quaternion_commutant_rank(&q(3), &q(-2), &q(7)), 1);
        let h = QuaternionAlgebra::new(q(-1), q(-1)).unwrap();
        let u = [q(0), q(1), q(0), q(0)];
        let v = [q(0), q(0), q(1), q(0)];
        assert_eq!(h.multiply(&u, &v), [q(0), q(0), q(0), q(1)]);
        assert_eq!(h.multiply(&v, &u), [q(0), q(0), q(0), q(-1)]);
        assert_eq!(h.reduced_norm(&u), q(1));
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn alg() -> &'static Arc<CyclicAlgebra> {
        static D: OnceLock<Arc<CyclicAlgebra>> = OnceLock::new();
        D.get_or_init(|| CyclicAlgebra::new(5, 3, 12).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn norm_and_valuation_are_multiplicative(seed in any::<u64>(), i in 0u64..3, j in 0u64..3) {
            let d = alg();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = AlgebraElement::x(d);
            let a = &d.sample_level(0, &mut rng).unwrap() * &x.pow(i);
            let b = &d.sample_level(0, &mut rng).unwrap() * &x.pow(j);
            let ab = &a * &b;
            prop_assert!(ab.reduced_norm().unwrap().agrees_with(&(a.reduced_norm().unwrap() * b.reduced_norm().unwrap())));
            prop_assert_eq!(ab.valuation().unwrap(), a.valuation().unwrap() + b.valuation().unwrap());
            prop_assert!((&a * &a.inv().unwrap()).agrees_with(&AlgebraElement::one(d)));
        }

        #[test]
        fn sl1n_samples_have_norm_one(seed in any::<u64>(), n in 1i64..4) {
            let g = alg().sample_sl1n(n, seed).unwrap();
            prop_assert!(g.congruence_level().unwrap() >= n);
            prop_assert!(g.reduced_norm().unwrap().agrees_with(&PadicScalar::one(5, 12)));
        }
    }
}
