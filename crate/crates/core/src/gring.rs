//! Galois rings `GR(2^k, e) = (Z/2^k)[t]/(f)` with `f` a monic lift of the default
//! irreducible polynomial of degree `e` over `F_2`, and Smith normal form over them.
//!
//! `k = 1` gives the field `F_{2^e}`, `e = 1` gives `Z/2^k`. Both are chain rings whose
//! maximal ideal is generated by 2, so divisibility is decided by 2-adic valuation.

use crate::error::{Error, Result};
use crate::padic::unramified::default_modulus;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const MAX_DEGREE: usize = 6;
pub const MAX_LEVEL: u32 = 30;

/// Coefficients on `1, t, ..., t^(e-1)`, each reduced mod `2^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Gr(pub [u32; MAX_DEGREE]);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisRing {
    level: u32,
    degree: usize,
    modulus: Vec<u32>,
}

impl GaloisRing {
    pub fn new(level: u32, degree: usize) -> Result<Self> {
        if level == 0 || level > MAX_LEVEL {
            return Err(Error::Unsupported(format!("level {level} outside 1..={MAX_LEVEL}")));
        }
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::Unsupported(format!("degree {degree} outside 1..={MAX_DEGREE}")));
        }
        let modulus = default_modulus(2, degree).into_iter().map(|c| c as u32).collect();
        Ok(Self { level, degree, modulus })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_field(&self) -> bool {
        self.level == 1
    }

    /// Non-leading coefficients of the defining polynomial, low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn mask(&self) -> u64 {
        (1u64 << self.level) - 1
    }

    /// Number of elements, `2^(k e)`.
    pub fn cardinality(&self) -> u64 {
        1u64 << (self.level as usize * self.degree)
    }

    /// Same defining polynomial at another level.
    pub fn at_level(&self, level: u32) -> Result<Self> {
        Self::new(level, self.degree)
    }

    pub fn residue_field(&self) -> Self {
        Self { level: 1, ..self.clone() }
    }

    pub fn zero(&self) -> Gr {
        Gr::default()
    }

    pub fn one(&self) -> Gr {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Gr {
        let mut g = Gr::default();
        g.0[0] = (n.rem_euclid(1i64 << self.level)) as u32;
        g
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Gr> {
        if coeffs.len() > self.degree {
            return Err(Error::Dimension {
                expected: self.degree,
                got: coeffs.len(),
            });
        }
        let mut g = Gr::default();
        for (i, &c) in coeffs.iter().enumerate() {
            g.0[i] = c.rem_euclid(1i64 << self.level) as u32;
        }
        Ok(g)
    }

    /// The class of `t`.
    pub fn generator(&self) -> Gr {
        if self.degree == 1 {
            return self.from_int(-(self.modulus[0] as i64));
        }
        let mut g = Gr::default();
        g.0[1] = 1;
        g
    }

    pub fn coeffs<'a>(&self, a: &'a Gr) -> &'a [u32] {
        &a.0[..self.degree]
    }

    pub fn is_zero(&self, a: &Gr) -> bool {
        a.0[..self.degree].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Gr, b: &Gr) -> Gr {
        let m = self.mask();
        let mut r = Gr::default();
        for i in 0..self.degree {
            r.0[i] = ((a.0[i] as u64 + b.0[i] as u64) & m) as u32;
        }
        r
    }

    pub fn sub(&self, a: &Gr, b: &Gr) -> Gr {
        let m = self.mask();
        let mut r = Gr::default();
        for i in 0..self.degree {
            r.0[i] = ((a.0[i] as u64 + (m + 1) - b.0[i] as u64) & m) as u32;
        }
        r
    }

    pub fn neg(&self, a: &Gr) -> Gr {
        self.sub(&Gr::default(), a)
    }

    pub fn mul(&self, a: &Gr, b: &Gr) -> Gr {
        let m = self.mask();
        let e = self.degree;
        if e == 1 {
            let mut r = Gr::default();
            r.0[0] = ((a.0[0] as u64 * b.0[0] as u64) & m) as u32;
            return r;
        }
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + a.0[i] as u64 * b.0[j] as u64) & m;
            }
        }
        for d in (e..2 * e - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &fi) in self.modulus.iter().enumerate() {
                if fi != 0 {
                    prod[d - e + i] = (prod[d - e + i] + (m + 1) - ((c * fi as u64) & m)) & m;
                }
            }
        }
        let mut r = Gr::default();
        for i in 0..e {
            r.0[i] = prod[i] as u32;
        }
        r
    }

    pub fn mul_int(&self, a: &Gr, n: i64) -> Gr {
        self.mul(a, &self.from_int(n))
    }

    /// `a * b + c`.
    pub fn mul_add(&self, a: &Gr, b: &Gr, c: &Gr) -> Gr {
        self.add(&self.mul(a, b), c)
    }

    pub fn pow(&self, a: &Gr, mut n: u64) -> Gr {
        let mut base = *a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// 2-adic valuation; `level` for zero.
    pub fn valuation(&self, a: &Gr) -> u32 {
        a.0[..self.degree]
            .iter()
            .filter(|&&c| c != 0)
            .map(|c| c.trailing_zeros())
            .min()
            .unwrap_or(self.level)
    }

    pub fn is_unit(&self, a: &Gr) -> bool {
        a.0[..self.degree].iter().any(|&c| c & 1 == 1)
    }

    pub fn inv(&self, a: &Gr) -> Option<Gr> {
        if !self.is_unit(a) {
            return None;
        }
        let f = self.residue_field();
        let q = f.cardinality();
        let mut x = f.pow(&f.reduce_from(self, a), q - 2);
        let two = self.from_int(2);
        for _ in 0..=self.level.ilog2() + 1 {
            x = self.mul(&x, &self.sub(&two, &self.mul(a, &x)));
        }
        debug_assert_eq!(self.mul(a, &x), self.one());
        Some(x)
    }

    /// Some `q` with `a q = b`, when `v(a) <= v(b)`.
    pub fn div_exact(&self, b: &Gr, a: &Gr) -> Option<Gr> {
        let va = self.valuation(a);
        if va >= self.level {
            return if self.is_zero(b) { Some(Gr::default()) } else { None };
        }
        if self.valuation(b) < va {
            return None;
        }
        let mut ua = Gr::default();
        let mut ub = Gr::default();
        for i in 0..self.degree {
            ua.0[i] = a.0[i] >> va;
            ub.0[i] = b.0[i] >> va;
        }
        let q = self.mul(&ub, &self.inv(&ua)?);
        debug_assert_eq!(self.mul(a, &q), *b);
        Some(q)
    }

    /// Image of an element of `other` (same degree, any level) under reduction or
    /// coefficient-wise lift.
    pub fn reduce_from(&self, other: &GaloisRing, a: &Gr) -> Gr {
        debug_assert_eq!(self.degree, other.degree);
        let m = self.mask();
        let mut r = Gr::default();
        for i in 0..self.degree {
            r.0[i] = (a.0[i] as u64 & m) as u32;
        }
        r
    }

    /// Dense code in `0..cardinality`.
    pub fn to_index(&self, a: &Gr) -> u64 {
        a.0[..self.degree]
            .iter()
            .enumerate()
            .map(|(i, &c)| (c as u64) << (self.level as usize * i))
            .sum()
    }

    pub fn from_index(&self, mut code: u64) -> Gr {
        let m = self.mask();
        let mut g = Gr::default();
        for i in 0..self.degree {
            g.0[i] = (code & m) as u32;
            code >>= self.level;
        }
        g
    }

    /// Teichmuller representative of the residue of `a`.
    pub fn teichmuller(&self, a: &Gr) -> Gr {
        let q = self.residue_field().cardinality();
        let mut z = self.reduce_from(&self.residue_field(), a);
        loop {
            let next = self.pow(&z, q);
            if next == z {
                return z;
            }
            z = next;
        }
    }

    /// Teichmuller lift of a generator of `F_{2^e}^x`.
    pub fn primitive_root(&self) -> Gr {
        let f = self.residue_field();
        let q1 = f.cardinality() - 1;
        let primes: Vec<u64> = (2..=q1)
            .filter(|&d| q1.is_multiple_of(d) && crate::padic::unramified::is_prime(d))
            .collect();
        for code in 1..f.cardinality() {
            let a = f.from_index(code);
            if primes.iter().all(|&r| f.pow(&a, q1 / r) != f.one()) {
                return self.teichmuller(&a);
            }
        }
        unreachable!("finite fields have primitive roots")
    }

    pub fn to_json(&self, a: &Gr) -> serde_json::Value {
        if self.degree == 1 {
            a.0[0].into()
        } else {
            self.coeffs(a).to_vec().into()
        }
    }

    pub fn fmt_elem(&self, a: &Gr) -> String {
        if self.degree == 1 {
            return a.0[0].to_string();
        }
        let terms: Vec<String> = (0..self.degree)
            .filter(|&i| a.0[i] != 0)
            .map(|i| match (i, a.0[i]) {
                (0, c) => c.to_string(),
                (1, 1) => "t".into(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

impl fmt::Display for GaloisRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.level, self.degree) {
            (1, e) => write!(f, "F_{}", 1u64 << e),
            (k, 1) => write!(f, "Z/{}", 1u64 << k),
            (k, e) => write!(f, "GR(2^{k},{e})"),
        }
    }
}

/// Dense row-major matrix over a Galois ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Gr>,
}

impl GrMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Gr::default(); rows * cols],
        }
    }

    pub fn identity(ring: &GaloisRing, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Gr>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_cols(cols: &[Vec<Gr>], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..nrows {
                m.data[i * m.cols + j] = c[i];
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Gr {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Gr) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Gr] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Gr> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (c, &j) in idx.iter().enumerate() {
                m.data[i * idx.len() + c] = self.get(i, j);
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            m.data[r * self.cols..(r + 1) * self.cols].copy_from_slice(self.row(i));
        }
        m
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            m.data[i * m.cols..i * m.cols + self.cols].copy_from_slice(self.row(i));
            m.data[i * m.cols + self.cols..(i + 1) * m.cols].copy_from_slice(other.row(i));
        }
        m
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self, ring: &GaloisRing) -> bool {
        self.data.iter().all(|a| ring.is_zero(a))
    }
}

impl GaloisRing {
    pub fn mat_mul(&self, a: &GrMat, b: &GrMat) -> GrMat {
        assert_eq!(a.cols, b.rows, "matrix shapes");
        let mut c = GrMat::zeros(a.rows, b.cols);
        for i in 0..a.rows {
            for l in 0..a.cols {
                let x = a.get(i, l);
                if self.is_zero(&x) {
                    continue;
                }
                let brow = b.row(l);
                let crow = &mut c.data[i * b.cols..(i + 1) * b.cols];
                for (cj, bj) in crow.iter_mut().zip(brow) {
                    *cj = self.mul_add(&x, bj, cj);
                }
            }
        }
        c
    }

    pub fn mat_vec(&self, a: &GrMat, v: &[Gr]) -> Vec<Gr> {
        assert_eq!(a.cols, v.len(), "matrix-vector shapes");
        (0..a.rows)
            .map(|i| a.row(i).iter().zip(v).fold(self.zero(), |acc, (x, y)| self.mul_add(x, y, &acc)))
            .collect()
    }

    pub fn vec_mat(&self, v: &[Gr], a: &GrMat) -> Vec<Gr> {
        assert_eq!(a.rows, v.len(), "vector-matrix shapes");
        let mut out = vec![self.zero(); a.cols];
        for (i, x) in v.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (o, y) in out.iter_mut().zip(a.row(i)) {
                *o = self.mul_add(x, y, o);
            }
        }
        out
    }

    pub fn mat_add(&self, a: &GrMat, b: &GrMat) -> GrMat {
        GrMat {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().zip(&b.data).map(|(x, y)| self.add(x, y)).collect(),
        }
    }

    pub fn mat_sub(&self, a: &GrMat, b: &GrMat) -> GrMat {
        GrMat {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().zip(&b.data).map(|(x, y)| self.sub(x, y)).collect(),
        }
    }

    pub fn mat_scale(&self, a: &GrMat, s: &Gr) -> GrMat {
        GrMat {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().map(|x| self.mul(x, s)).collect(),
        }
    }

    pub fn vec_add(&self, a: &[Gr], b: &[Gr]) -> Vec<Gr> {
        a.iter().zip(b).map(|(x, y)| self.add(x, y)).collect()
    }

    pub fn vec_sub(&self, a: &[Gr], b: &[Gr]) -> Vec<Gr> {
        a.iter().zip(b).map(|(x, y)| self.sub(x, y)).collect()
    }

    pub fn vec_scale(&self, a: &[Gr], s: &Gr) -> Vec<Gr> {
        a.iter().map(|x| self.mul(x, s)).collect()
    }

    pub fn vec_is_zero(&self, a: &[Gr]) -> bool {
        a.iter().all(|x| self.is_zero(x))
    }

    /// Entrywise image of a matrix over `other` (reduction to a lower level or residue field).
    pub fn reduce_mat(&self, other: &GaloisRing, a: &GrMat) -> GrMat {
        GrMat {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().map(|x| self.reduce_from(other, x)).collect(),
        }
    }

    pub fn reduce_vec(&self, other: &GaloisRing, a: &[Gr]) -> Vec<Gr> {
        a.iter().map(|x| self.reduce_from(other, x)).collect()
    }

    pub fn mat_to_json(&self, a: &GrMat) -> serde_json::Value {
        (0..a.rows)
            .map(|i| a.row(i).iter().map(|x| self.to_json(x)).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .into()
    }
}

/// `u * a * v = diag`, with `u`, `v` invertible. Pivots are chosen by minimal valuation,
/// so the valuations of `diag` are non-decreasing and entries past `rank` are zero.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: GrMat,
    pub v: GrMat,
    pub diag: Vec<Gr>,
    pub rank: usize,
}

impl Smith {
    pub fn valuations(&self, ring: &GaloisRing) -> Vec<u32> {
        self.diag.iter().map(|d| ring.valuation(d)).collect()
    }

    /// Number of unit pivots.
    pub fn unit_rank(&self, ring: &GaloisRing) -> usize {
        self.diag.iter().take_while(|d| ring.is_unit(d)).count()
    }
}

pub fn smith(ring: &GaloisRing, a: &GrMat) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = GrMat::identity(ring, m);
    let mut v = GrMat::identity(ring, n);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in t..m {
            for j in t..n {
                let val = ring.valuation(&d.get(i, j));
                if val < ring.level() && best.is_none_or(|b| val < b.0) {
                    best = Some((val, i, j));
                    if val == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        swap_rows(&mut d, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        let p = d.get(t, t);
        for i in t + 1..m {
            let x = d.get(i, t);
            if ring.is_zero(&x) {
                continue;
            }
            let q = ring.div_exact(&x, &p).expect("pivot has minimal valuation");
            row_axpy(ring, &mut d, i, t, &q);
            row_axpy(ring, &mut u, i, t, &q);
        }
        for j in t + 1..n {
            let x = d.get(t, j);
            if ring.is_zero(&x) {
                continue;
            }
            let q = ring.div_exact(&x, &p).expect("pivot has minimal valuation");
            col_axpy(ring, &mut d, j, t, &q);
            col_axpy(ring, &mut v, j, t, &q);
        }
        diag.push(p);
        t += 1;
    }
    let rank = diag.len();
    diag.resize(m.min(n), ring.zero());
    Smith { u, v, diag, rank }
}

fn swap_rows(a: &mut GrMat, i: usize, j: usize) {
    if i != j {
        for c in 0..a.cols {
            a.data.swap(i * a.cols + c, j * a.cols + c);
        }
    }
}

fn swap_cols(a: &mut GrMat, i: usize, j: usize) {
    if i != j {
        for r in 0..a.rows {
            a.data.swap(r * a.cols + i, r * a.cols + j);
        }
    }
}

/// row_i -= q row_t
fn row_axpy(ring: &GaloisRing, a: &mut GrMat, i: usize, t: usize, q: &Gr) {
    for c in 0..a.cols {
        let x = a.get(t, c);
        if !ring.is_zero(&x) {
            let y = ring.sub(&a.get(i, c), &ring.mul(q, &x));
            a.set(i, c, y);
        }
    }
}

/// col_j -= q col_t
fn col_axpy(ring: &GaloisRing, a: &mut GrMat, j: usize, t: usize, q: &Gr) {
    for r in 0..a.rows {
        let x = a.get(r, t);
        if !ring.is_zero(&x) {
            let y = ring.sub(&a.get(r, j), &ring.mul(q, &x));
            a.set(r, j, y);
        }
    }
}

/// Kernel of a map whose image is a free direct summand, as a column basis.
pub fn split_kernel(ring: &GaloisRing, a: &GrMat) -> Result<GrMat> {
    let s = smith(ring, a);
    if s.unit_rank(ring) != s.rank {
        return Err(Error::Integrity(format!(
            "map is not split: elementary divisor valuations {:?}",
            &s.valuations(ring)[..s.rank]
        )));
    }
    let idx: Vec<usize> = (s.rank..a.cols).collect();
    Ok(s.v.select_cols(&idx))
}

/// Columns spanning a free direct summand, reduced to a basis.
pub fn span_basis(ring: &GaloisRing, c: &GrMat) -> Result<GrMat> {
    let s = smith(ring, c);
    if s.unit_rank(ring) != s.rank {
        return Err(Error::Integrity("span is not a direct summand".into()));
    }
    let cv = ring.mat_mul(c, &s.v);
    let idx: Vec<usize> = (0..s.rank).collect();
    Ok(cv.select_cols(&idx))
}

/// `l` with `l b = I` for a basis `b` of a direct summand.
pub fn left_inverse(ring: &GaloisRing, b: &GrMat) -> Result<GrMat> {
    let s = smith(ring, b);
    if s.rank != b.cols || s.unit_rank(ring) != s.rank {
        return Err(Error::Integrity("columns are not a basis of a direct summand".into()));
    }
    let idx: Vec<usize> = (0..b.cols).collect();
    let mut top = s.u.select_rows(&idx);
    for (i, d) in s.diag.iter().enumerate() {
        let di = ring.inv(d).expect("unit pivot");
        for c in 0..top.cols {
            let x = ring.mul(&di, &top.get(i, c));
            top.set(i, c, x);
        }
    }
    Ok(ring.mat_mul(&s.v, &top))
}

pub fn invert(ring: &GaloisRing, a: &GrMat) -> Option<GrMat> {
    if a.rows != a.cols {
        return None;
    }
    left_inverse(ring, a).ok()
}

/// Outcome of solving `a x = b`.
#[derive(Clone, Debug)]
pub enum Solution {
    Solved(Vec<Gr>),
    /// Row `row` of the Smith form has right-hand side of valuation `rhs_valuation`
    /// below the pivot valuation `pivot_valuation` (the latter is `level` past the rank).
    Obstructed {
        row: usize,
        rhs_valuation: u32,
        pivot_valuation: u32,
    },
}

pub fn solve_with(ring: &GaloisRing, s: &Smith, b: &[Gr]) -> Solution {
    let ub = ring.mat_vec(&s.u, b);
    let n = s.v.rows;
    let mut y = vec![ring.zero(); n];
    for (i, r) in ub.iter().enumerate() {
        let d = if i < s.diag.len() { s.diag[i] } else { ring.zero() };
        match ring.div_exact(r, &d) {
            Some(q) => {
                if i < n {
                    y[i] = q;
                }
            }
            None => {
                return Solution::Obstructed {
                    row: i,
                    rhs_valuation: ring.valuation(r),
                    pivot_valuation: ring.valuation(&d),
                }
            }
        }
    }
    Solution::Solved(ring.mat_vec(&s.v, &y))
}

pub fn solve(ring: &GaloisRing, a: &GrMat, b: &[Gr]) -> Solution {
    solve_with(ring, &smith(ring, a), b)
}

/// Incremental row echelon basis over the residue field `F_{2^e}` (the ring must be a field).
#[derive(Clone, Debug)]
pub struct Echelon {
    ring: GaloisRing,
    rows: Vec<Vec<Gr>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(ring: &GaloisRing) -> Self {
        assert!(ring.is_field(), "echelon bases need a field");
        Self {
            ring: ring.clone(),
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Gr>] {
        &self.rows
    }

    pub fn reduce(&self, v: &[Gr]) -> Vec<Gr> {
        let f = &self.ring;
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if !f.is_zero(&c) {
                for (wi, ri) in w.iter_mut().zip(row) {
                    *wi = f.sub(wi, &f.mul(&c, ri));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Gr]) -> bool {
        self.ring.vec_is_zero(&self.reduce(v))
    }

    /// Adds `v` when independent; returns whether it was added.
    pub fn insert(&mut self, v: &[Gr]) -> bool {
        let f = self.ring.clone();
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&w[p]).expect("nonzero in a field");
        self.rows.push(w.iter().map(|x| f.mul(x, &inv)).collect());
        self.pivots.push(p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_of_four() {
        let f = GaloisRing::new(1, 2).unwrap();
        let t = f.generator();
        let t2 = f.mul(&t, &t);
        assert_eq!(f.add(&f.add(&t2, &t), &f.one()), f.zero());
        assert_eq!(f.pow(&t, 3), f.one());
        assert_eq!(f.to_string(), "F_4");
    }

    #[test]
    fn inverses_and_division() {
        let r = GaloisRing::new(5, 3).unwrap();
        for code in 0..r.cardinality().min(4096) {
            let a = r.from_index(code * 7919 % r.cardinality());
            if let Some(b) = r.inv(&a) {
                assert_eq!(r.mul(&a, &b), r.one());
            } else {
                assert!(r.valuation(&a) >= 1);
            }
        }
        let a = r.from_int(12);
        let b = r.from_int(8);
        assert_eq!(r.div_exact(&a, &b), None);
        let q = r.div_exact(&b, &r.from_int(4)).unwrap();
        assert_eq!(r.mul(&q, &r.from_int(4)), b);
    }

    #[test]
    fn teichmuller_roots_of_unity() {
        let r = GaloisRing::new(6, 2).unwrap();
        let z = r.primitive_root();
        assert_eq!(r.pow(&z, 3), r.one());
        assert_ne!(z, r.one());
    }

    #[test]
    fn smith_over_z8() {
        let r = GaloisRing::new(3, 1).unwrap();
        let a = GrMat::from_rows(&[
            vec![r.from_int(2), r.from_int(4), r.from_int(6)],
            vec![r.from_int(4), r.from_int(1), r.from_int(0)],
        ]);
        let s = smith(&r, &a);
        let d = r.mat_mul(&r.mat_mul(&s.u, &a), &s.v);
        for i in 0..2 {
            for j in 0..3 {
                let want = if i == j { s.diag[i] } else { r.zero() };
                assert_eq!(d.get(i, j), want);
            }
        }
        assert_eq!(s.valuations(&r), vec![0, 1]);
        let b = vec![r.from_int(2), r.from_int(3)];
        match solve(&r, &a, &b) {
            Solution::Solved(x) => assert_eq!(r.mat_vec(&a, &x), b),
            other => panic!("{other:?}"),
        }
        let b = vec![r.from_int(1), r.from_int(0)];
        assert!(matches!(solve(&r, &a, &b), Solution::Obstructed { .. }));
    }

    #[test]
    fn left_inverse_of_summand() {
        let r = GaloisRing::new(4, 1).unwrap();
        let b = GrMat::from_rows(&[
            vec![r.from_int(1), r.from_int(2)],
            vec![r.from_int(3), r.from_int(7)],
            vec![r.from_int(4), r.from_int(8)],
        ]);
        let l = left_inverse(&r, &b).unwrap();
        assert_eq!(r.mat_mul(&l, &b), GrMat::identity(&r, 2));
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn ring_and_elems(n: usize) -> impl Strategy<Value = (GaloisRing, Vec<Gr>)> {
        (1u32..=6, 1usize..=3).prop_flat_map(move |(k, e)| {
            let r = GaloisRing::new(k, e).unwrap();
            let card = r.cardinality();
            proptest::collection::vec(0..card, n).prop_map(move |codes| (r.clone(), codes.iter().map(|&c| r.from_index(c)).collect()))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms((r, x) in ring_and_elems(3)) {
            let (a, b, c) = (&x[0], &x[1], &x[2]);
            prop_assert_eq!(r.mul(a, b), r.mul(b, a));
            prop_assert_eq!(r.mul(&r.mul(a, b), c), r.mul(a, &r.mul(b, c)));
            prop_assert_eq!(r.mul(a, &r.add(b, c)), r.add(&r.mul(a, b), &r.mul(a, c)));
            prop_assert_eq!(r.add(a, &r.neg(a)), r.zero());
            prop_assert_eq!(r.from_index(r.to_index(a)), *a);
            match r.inv(a) {
                Some(i) => prop_assert_eq!(r.mul(a, &i), r.one()),
                None => prop_assert!(r.valuation(a) > 0),
            }
        }

        #[test]
        fn smith_diagonalizes((r, x) in ring_and_elems(12)) {
            let a = GrMat::from_rows(&x.chunks(4).map(|c| c.to_vec()).collect::<Vec<_>>());
            let s = smith(&r, &a);
            let d = r.mat_mul(&r.mat_mul(&s.u, &a), &s.v);
            for i in 0..3 {
                for j in 0..4 {
                    let want = if i == j && i < s.diag.len() { s.diag[i] } else { r.zero() };
                    prop_assert_eq!(d.get(i, j), want);
                }
            }
            let v = s.valuations(&r);
            prop_assert!(v[..s.rank].windows(2).all(|w| w[0] <= w[1]));
            let b = r.mat_vec(&a, &x[..4]);
            match solve(&r, &a, &b) {
                Solution::Solved(y) => prop_assert_eq!(r.mat_vec(&a, &y), b),
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }
}
