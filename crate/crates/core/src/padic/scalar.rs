//! Truncated p-adic numbers with tracked absolute precision.
//!
//! A nonzero value is stored as `p^v * u` with `u` a unit known modulo
//! `p^(N - v)`, where `N` is the absolute precision. A value whose digits are
//! all unknown or zero below `p^N` is stored as a zero carrying `N`.
//! Every operation returns the precision it can actually guarantee.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};

/// Largest relative precision (in digits) supported for a prime: `p^d < 2^63`.
pub fn max_digits(prime: u64) -> u32 {
    let mut d = 0;
    let mut acc: u128 = 1;
    while acc * (prime as u128) < (1u128 << 63) {
        acc *= prime as u128;
        d += 1;
    }
    d
}

pub(crate) fn pow_u128(p: u64, e: u32) -> u128 {
    (p as u128).pow(e)
}

/// Inverse of a unit modulo `m` by the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: u128, m: u128) -> Option<u128> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u128)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Digits {
    valuation: i64,
    unit: u128,
}

/// An element of `Q_p` known to a finite absolute precision.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    prime: u64,
    precision: i64,
    digits: Option<Digits>,
}

impl PadicScalar {
    /// Zero known modulo `p^precision`.
    pub fn zero(prime: u64, precision: i64) -> Self {
        Self {
            prime,
            precision,
            digits: None,
        }
    }

    pub fn one(prime: u64, precision: i64) -> Self {
        Self::from_int(prime, 1, precision)
    }

    /// Build `p^valuation * unit`, reducing the unit to the available digits.
    fn normalized(prime: u64, precision: i64, valuation: i64, unit: u128) -> Self {
        if valuation >= precision {
            return Self::zero(prime, precision);
        }
        let rel = (precision - valuation) as u32;
        debug_assert!(rel <= max_digits(prime), "relative precision {rel} too large for p={prime}");
        let modulus = pow_u128(prime, rel);
        let mut u = unit % modulus;
        if u == 0 {
            return Self::zero(prime, precision);
        }
        let mut v = valuation;
        while u.is_multiple_of(prime as u128) {
            u /= prime as u128;
            v += 1;
        }
        if v >= precision {
            return Self::zero(prime, precision);
        }
        Self {
            prime,
            precision,
            digits: Some(Digits { valuation: v, unit: u }),
        }
    }

    /// An integer known modulo `p^precision`.
    pub fn from_int(prime: u64, value: i128, precision: i64) -> Self {
        if value == 0 {
            return Self::zero(prime, precision);
        }
        let mut v = 0i64;
        let mut x = value;
        while x % prime as i128 == 0 {
            x /= prime as i128;
            v += 1;
        }
        if v >= precision {
            return Self::zero(prime, precision);
        }
        let modulus = pow_u128(prime, (precision - v) as u32) as i128;
        Self::normalized(prime, precision, v, x.rem_euclid(modulus) as u128)
    }

    /// The rational `num/den` to `digits` significant digits.
    pub fn from_rational(prime: u64, num: i128, den: i128, digits: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("rational with zero denominator".into()));
        }
        if num == 0 {
            return Ok(Self::zero(prime, digits as i64));
        }
        let (mut n, mut d) = (num, den);
        let mut v = 0i64;
        while n % prime as i128 == 0 {
            n /= prime as i128;
            v += 1;
        }
        while d % prime as i128 == 0 {
            d /= prime as i128;
            v -= 1;
        }
        let modulus = pow_u128(prime, digits);
        let nn = n.rem_euclid(modulus as i128) as u128;
        let dd = d.rem_euclid(modulus as i128) as u128;
        let dinv = inv_mod(dd, modulus).ok_or(Error::PrecisionZeroDivisor)?;
        Ok(Self::normalized(prime, v + digits as i64, v, nn * dinv % modulus))
    }

    /// A uniformly random element of `p^min_valuation Z_p` known modulo `p^precision`.
    pub fn random<R: Rng + ?Sized>(prime: u64, precision: i64, min_valuation: i64, rng: &mut R) -> Self {
        if min_valuation >= precision {
            return Self::zero(prime, precision);
        }
        let rel = (precision - min_valuation) as u32;
        let x = rng.gen_range(0..pow_u128(prime, rel));
        Self::normalized(prime, precision, min_valuation, x)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Absolute precision `N`: the value is known modulo `p^N`.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Number of known unit digits; zero for an indistinguishable-from-zero value.
    pub fn relative_precision(&self) -> i64 {
        match self.digits {
            Some(d) => self.precision - d.valuation,
            None => 0,
        }
    }

    /// `None` when the value is zero at its precision.
    pub fn valuation(&self) -> Option<i64> {
        self.digits.map(|d| d.valuation)
    }

    /// Valuation, with zero reported as its precision.
    pub fn valuation_or_precision(&self) -> i64 {
        self.valuation().unwrap_or(self.precision)
    }

    pub fn unit(&self) -> Option<u128> {
        self.digits.map(|d| d.unit)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_none()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Drop digits beyond `p^precision`.
    pub fn truncate(&self, precision: i64) -> Self {
        if precision >= self.precision {
            return *self;
        }
        match self.digits {
            None => Self::zero(self.prime, precision),
            Some(d) => Self::normalized(self.prime, precision, d.valuation, d.unit),
        }
    }

    /// The residue modulo `p^n` of an integral value, `n <= precision`.
    pub fn residue_mod(&self, n: u32) -> Result<u128> {
        if (n as i64) > self.precision {
            return Err(Error::Precision(format!(
                "residue mod p^{n} requested from a value known mod p^{}",
                self.precision
            )));
        }
        let modulus = pow_u128(self.prime, n);
        match self.digits {
            None => Ok(0),
            Some(d) if d.valuation < 0 => Err(Error::Domain("residue of a non-integral p-adic".into())),
            Some(d) => {
                if d.valuation as u32 >= n {
                    Ok(0)
                } else {
                    Ok(d.unit % modulus * pow_u128(self.prime, d.valuation as u32) % modulus)
                }
            }
        }
    }

    /// Residue in `F_p` of an integral value.
    pub fn residue(&self) -> u64 {
        match self.digits {
            Some(d) if d.valuation == 0 => (d.unit % self.prime as u128) as u64,
            _ => 0,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match self.digits {
            None => Err(Error::PrecisionZeroDivisor),
            Some(d) => {
                let rel = (self.precision - d.valuation) as u32;
                let modulus = pow_u128(self.prime, rel);
                let u = inv_mod(d.unit, modulus).ok_or(Error::PrecisionZeroDivisor)?;
                Ok(Self::normalized(self.prime, -d.valuation + rel as i64, -d.valuation, u))
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc: Option<Self> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base,
                    Some(a) => a * base,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc.unwrap_or_else(|| Self::one(self.prime, self.precision.max(1)))
    }

    /// Multiply by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        match self.digits {
            None => Self::zero(self.prime, self.precision + k),
            Some(d) => Self {
                prime: self.prime,
                precision: self.precision + k,
                digits: Some(Digits {
                    valuation: d.valuation + k,
                    unit: d.unit,
                }),
            },
        }
    }

    /// Equality of the known digits.
    pub fn agrees_with(&self, other: &Self) -> bool {
        (*self - *other).is_zero()
    }
}

impl Add for PadicScalar {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        debug_assert_eq!(self.prime, o.prime, "mixed primes");
        let precision = self.precision.min(o.precision);
        match (self.digits, o.digits) {
            (None, None) => Self::zero(self.prime, precision),
            (Some(d), None) | (None, Some(d)) => Self::normalized(self.prime, precision, d.valuation, d.unit),
            (Some(a), Some(b)) => {
                let v = a.valuation.min(b.valuation);
                if v >= precision {
                    return Self::zero(self.prime, precision);
                }
                let rel = (precision - v) as u32;
                let m = pow_u128(self.prime, rel);
                let term = |d: Digits| -> u128 {
                    let s = (d.valuation - v) as u32;
                    if s >= rel {
                        0
                    } else {
                        (d.unit % m) * pow_u128(self.prime, s) % m
                    }
                };
                Self::normalized(self.prime, precision, v, (term(a) + term(b)) % m)
            }
        }
    }
}

impl Neg for PadicScalar {
    type Output = Self;
    fn neg(self) -> Self {
        match self.digits {
            None => self,
            Some(d) => {
                let m = pow_u128(self.prime, (self.precision - d.valuation) as u32);
                Self::normalized(self.prime, self.precision, d.valuation, (m - d.unit % m) % m)
            }
        }
    }
}

impl Sub for PadicScalar {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for PadicScalar {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        debug_assert_eq!(self.prime, o.prime, "mixed primes");
        match (self.digits, o.digits) {
            (None, None) => Self::zero(self.prime, self.precision + o.precision),
            (None, Some(d)) => Self::zero(self.prime, self.precision + d.valuation),
            (Some(d), None) => Self::zero(self.prime, o.precision + d.valuation),
            (Some(a), Some(b)) => {
                let rel = (self.precision - a.valuation).min(o.precision - b.valuation);
                let m = pow_u128(self.prime, rel as u32);
                let v = a.valuation + b.valuation;
                Self::normalized(self.prime, v + rel, v, (a.unit % m) * (b.unit % m) % m)
            }
        }
    }
}

macro_rules! forward_ref_binop {
    ($tr:ident, $f:ident) => {
        impl<'a> $tr<&'a PadicScalar> for &'a PadicScalar {
            type Output = PadicScalar;
            fn $f(self, o: &'a PadicScalar) -> PadicScalar {
                (*self).$f(*o)
            }
        }
    };
}
forward_ref_binop!(Add, add);
forward_ref_binop!(Sub, sub);
forward_ref_binop!(Mul, mul);

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.digits {
            None => write!(f, "O({}^{})", self.prime, self.precision),
            Some(d) if d.valuation == 0 => write!(f, "{} + O({}^{})", d.unit, self.prime, self.precision),
            Some(d) => write!(
                f,
                "{}^{}*{} + O({}^{})",
                self.prime, d.valuation, d.unit, self.prime, self.precision
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn additive_inverse_is_zero() {
        let a = PadicScalar::from_int(5, 1234, 8);
        assert!((a + (-a)).is_zero());
    }

    #[test]
    fn inverse_of_two_mod_five_to_the_four() {
        // extended Euclid on integers: 2 * 313 = 626 = 1 + 625
        let two = PadicScalar::from_int(5, 2, 4);
        let inv = two.inv().unwrap();
        assert_eq!(inv.residue_mod(4).unwrap(), 313);
        assert!((two * inv).agrees_with(&PadicScalar::one(5, 4)));
        assert!(PadicScalar::one(5, 4).inv().unwrap().agrees_with(&PadicScalar::one(5, 4)));
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let z = PadicScalar::from_int(3, 27, 3);
        assert!(z.is_zero());
        assert!(matches!(z.inv(), Err(Error::PrecisionZeroDivisor)));
    }

    #[test]
    fn precision_is_never_invented() {
        let a = PadicScalar::from_int(3, 9 * 7, 10);
        let b = PadicScalar::from_int(3, 5, 4);
        let s = a + b;
        assert_eq!(s.precision(), 4);
        let prod = a * b;
        // relative precision is the smaller one
        assert_eq!(prod.relative_precision(), 4);
        assert_eq!(prod.valuation(), Some(2));
        let q = a.inv().unwrap();
        assert_eq!(q.valuation(), Some(-2));
        assert_eq!(q.relative_precision(), 8);
    }

    #[test]
    fn rational_construction() {
        let third = PadicScalar::from_rational(2, 1, 3, 10).unwrap();
        let three = PadicScalar::from_int(2, 3, 10);
        assert!((third * three).agrees_with(&PadicScalar::one(2, 10)));
        let half = PadicScalar::from_rational(3, 5, 18, 6).unwrap();
        assert_eq!(half.valuation(), Some(-2));
    }

    #[test]
    fn valuation_is_additive_on_random_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a = PadicScalar::random(7, 12, 0, &mut rng);
            let b = PadicScalar::random(7, 12, 1, &mut rng);
            if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
                assert_eq!((a * b).valuation(), Some(va + vb));
            }
        }
    }

    #[test]
    fn max_digits_fits_in_63_bits() {
        assert_eq!(max_digits(2), 62);
        assert_eq!(max_digits(5), 27);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn integers_embed_as_a_ring(p in prop::sample::select(vec![2u64, 3, 5, 7]), a in -10_000i128..10_000, b in -10_000i128..10_000) {
            let s = |v| PadicScalar::from_int(p, v, 12);
            prop_assert!((s(a) * s(b)).agrees_with(&s(a * b)));
            prop_assert!((s(a) + s(b)).agrees_with(&s(a + b)));
            prop_assert!((s(a) - s(a)).is_zero());
        }

        #[test]
        fn units_invert(p in prop::sample::select(vec![2u64, 3, 5, 7]), seed in any::<u64>()) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x = PadicScalar::random(p, 10, 0, &mut rng);
            if let Some(v) = x.valuation() {
                let y = x.inv().unwrap();
                prop_assert_eq!(y.valuation(), Some(-v));
                prop_assert!((x * y).agrees_with(&PadicScalar::one(p, 10 - v)));
            }
        }
    }
}
