//! Explicit 2-Frattini extensions: comparison cocycles from the minimal resolution,
//! extension groups `G x M` with `(g,m)(h,n) = (gh, m + g n + c(g,h))`, and finite-level
//! audits of splitting, Frattini quality and centralizers.
//!
//! The CA statements concern profinite groups; everything here checks their shadows in
//! the finite quotients `Upsilon / 2^k Omega^-`, which certify nothing about the limit.

use crate::error::{Error, Result};
use crate::gring::{smith, solve_with, GaloisRing, Gr, GrMat, Solution};
use crate::group::{subgroup_analysis, FiniteGroupTable};
use crate::modrep::{normal_sylow2, omega2_z2k, sigma_split, GModule, MinimalResolution};
use crate::report::{trial_rng, AuditReport};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Largest extension order for exhaustive sweeps.
pub const SWEEP_CAP: usize = 1 << 12;
/// Largest extension order for closure computations.
pub const CLOSURE_CAP: usize = 1 << 15;
/// Largest extension order handled at all (elements are `u32` codes).
pub const ORDER_CAP: usize = 1 << 24;

/// Normalized 2-cocycle `c: G x G -> M`, stored row-major by `(g, h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoCocycle {
    module: GModule,
    values: Vec<Vec<Gr>>,
}

impl TwoCocycle {
    pub fn new(module: GModule, values: Vec<Vec<Gr>>) -> Result<Self> {
        let n = module.group().order();
        if values.len() != n * n || values.iter().any(|v| v.len() != module.rank()) {
            return Err(Error::Dimension {
                expected: n * n,
                got: values.len(),
            });
        }
        let c = Self { module, values };
        if !c.is_normalized() {
            return Err(Error::Integrity("cocycle is not normalized".into()));
        }
        let bad = c.identity_residuals();
        if bad > 0 {
            return Err(Error::Integrity(format!("cocycle identity fails on {bad} triples")));
        }
        Ok(c)
    }

    pub fn zero(module: GModule) -> Self {
        let n = module.group().order();
        let z = vec![module.ring().zero(); module.rank()];
        Self {
            values: vec![z; n * n],
            module,
        }
    }

    /// `(delta f)(g,h) = g f(h) - f(gh) + f(g)`.
    pub fn coboundary(module: GModule, f: &[Vec<Gr>]) -> Result<Self> {
        let g = module.group().clone();
        let r = module.ring().clone();
        let n = g.order();
        if f.len() != n || !r.vec_is_zero(&f[g.identity()]) {
            return Err(Error::Domain("coboundary needs a normalized function on G".into()));
        }
        let mut values = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                values.push(r.vec_add(&r.vec_sub(&module.act(a, &f[b]), &f[g.mul(a, b)]), &f[a]));
            }
        }
        Self::new(module, values)
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn group(&self) -> &Arc<FiniteGroupTable> {
        self.module.group()
    }

    pub fn value(&self, g: usize, h: usize) -> &[Gr] {
        &self.values[g * self.group().order() + h]
    }

    pub fn is_normalized(&self) -> bool {
        let g = self.group();
        let r = self.module.ring();
        let e = g.identity();
        (0..g.order()).all(|a| r.vec_is_zero(self.value(e, a)) && r.vec_is_zero(self.value(a, e)))
    }

    /// Number of triples where `g c(h,l) - c(gh,l) + c(g,hl) - c(g,h)` is nonzero.
    pub fn identity_residuals(&self) -> usize {
        let g = self.group();
        let r = self.module.ring();
        let n = g.order();
        (0..n)
            .into_par_iter()
            .map(|a| {
                let mut bad = 0;
                for b in 0..n {
                    for l in 0..n {
                        let lhs = r.vec_add(&self.module.act(a, self.value(b, l)), self.value(a, g.mul(b, l)));
                        let rhs = r.vec_add(self.value(g.mul(a, b), l), self.value(a, b));
                        if lhs != rhs {
                            bad += 1;
                        }
                    }
                }
                bad
            })
            .sum()
    }

    /// Image under a `G`-map `phi: M -> N` (matrix over the target ring).
    pub fn push_forward(&self, target: &GModule, phi: &GrMat) -> Result<Self> {
        let r = target.ring();
        let src = self.module.reduce(r)?;
        for &s in self.group().generators() {
            if r.mat_mul(phi, src.matrix(s)) != r.mat_mul(target.matrix(s), phi) {
                return Err(Error::Domain("push-forward along a map that is not G-linear".into()));
            }
        }
        let values = self
            .values
            .iter()
            .map(|v| r.mat_vec(phi, &r.reduce_vec(self.module.ring(), v)))
            .collect();
        Self::new(target.clone(), values)
    }

    pub fn reduce(&self, target: &GaloisRing) -> Result<Self> {
        let module = self.module.reduce(target)?;
        let values = self.values.iter().map(|v| target.reduce_vec(self.module.ring(), v)).collect();
        Ok(Self { module, values })
    }

    pub fn sub(&self, other: &Self) -> Self {
        let r = self.module.ring();
        Self {
            module: self.module.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| r.vec_sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: &Gr) -> Self {
        let r = self.module.ring();
        Self {
            module: self.module.clone(),
            values: self.values.iter().map(|a| r.vec_scale(a, s)).collect(),
        }
    }
}

/// The cocycle of the resolution's extension class: `c(g,h) = g f[h] - f[gh] + f[g]` where
/// `f[g]` lifts `g e_0 - e_0` through the cover map.
pub fn comparison_cocycle(res: &MinimalResolution) -> Result<TwoCocycle> {
    let alg = res.algebra();
    let r = alg.ring();
    let g = alg.group();
    let n = g.order();
    let e0 = alg.idempotent(0);
    let psi_q1 = r.mat_mul(&res.psi, &res.q1);
    let s = smith(r, &psi_q1);
    let mut lifts: Vec<Vec<Gr>> = Vec::with_capacity(n);
    for a in 0..n {
        if a == g.identity() {
            lifts.push(vec![r.zero(); res.q1.rows]);
            continue;
        }
        let target = r.vec_sub(&alg.left_regular(a, e0), e0);
        match solve_with(r, &s, &target) {
            Solution::Solved(x) => lifts.push(r.mat_vec(&res.q1, &x)),
            Solution::Obstructed { .. } => {
                return Err(Error::Integrity("lifting system is inconsistent".into()));
            }
        }
    }
    let emb = &res.omega_embedding;
    let values: Vec<Vec<Gr>> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (a, b) = (idx / n, idx % n);
            let v = r.vec_add(&r.vec_sub(&alg.left_regular(a, &lifts[b]), &lifts[g.mul(a, b)]), &lifts[a]);
            let coords = r.mat_vec(&emb.coords, &v);
            if r.mat_vec(&emb.basis, &coords) != v {
                return Err(Error::Integrity("cocycle value outside Omega_2".into()));
            }
            Ok(coords)
        })
        .collect::<Result<_>>()?;
    TwoCocycle::new(res.omega().clone(), values)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoboundaryResult {
    pub is_coboundary: bool,
    pub unknowns: usize,
    pub equations: usize,
    pub system_rank: usize,
    /// Smith row whose right-hand side is not divisible by its pivot.
    pub obstruction: Option<Value>,
    #[serde(skip)]
    pub splitting: Option<Vec<Vec<Gr>>>,
}

/// Solves `c(g,h) = g f(h) - f(gh) + f(g)` for a normalized `f: G -> M`.
pub fn cocycle_is_coboundary(c: &TwoCocycle) -> Result<CoboundaryResult> {
    let m = c.module();
    let r = m.ring();
    let g = c.group();
    let n = g.order();
    let k = m.rank();
    let others: Vec<usize> = (0..n).filter(|&a| a != g.identity()).collect();
    let pos = |a: usize| others.iter().position(|&x| x == a);
    let unknowns = others.len() * k;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for &a in &others {
        for &b in &others {
            let ab = g.mul(a, b);
            let mut block = GrMat::zeros(k, unknowns);
            let ma = m.matrix(a);
            let pb = pos(b).unwrap() * k;
            for i in 0..k {
                for j in 0..k {
                    block.set(i, pb + j, r.add(&block.get(i, pb + j), &ma.get(i, j)));
                }
            }
            if let Some(p) = pos(ab) {
                for i in 0..k {
                    block.set(i, p * k + i, r.sub(&block.get(i, p * k + i), &r.one()));
                }
            }
            let pa = pos(a).unwrap() * k;
            for i in 0..k {
                block.set(i, pa + i, r.add(&block.get(i, pa + i), &r.one()));
            }
            rows.push(block);
            rhs.extend_from_slice(c.value(a, b));
        }
    }
    let mut system = GrMat::zeros(0, unknowns);
    for b in rows {
        system = system.vstack(&b);
    }
    let equations = system.rows;
    let s = smith(r, &system);
    let system_rank = s.rank;
    match solve_with(r, &s, &rhs) {
        Solution::Solved(x) => {
            let mut f = vec![vec![r.zero(); k]; n];
            for (i, &a) in others.iter().enumerate() {
                f[a] = x[i * k..(i + 1) * k].to_vec();
            }
            if TwoCocycle::coboundary(m.clone(), &f)?.values != c.values {
                return Err(Error::Integrity("coboundary solution does not reproduce the cocycle".into()));
            }
            Ok(CoboundaryResult {
                is_coboundary: true,
                unknowns,
                equations,
                system_rank,
                obstruction: None,
                splitting: Some(f),
            })
        }
        Solution::Obstructed {
            row,
            rhs_valuation,
            pivot_valuation,
        } => Ok(CoboundaryResult {
            is_coboundary: false,
            unknowns,
            equations,
            system_rank,
            obstruction: Some(json!({"row": row, "rhs_valuation": rhs_valuation, "pivot_valuation": pivot_valuation})),
            splitting: None,
        }),
    }
}

/// `E = G x M` with the fixed multiplication convention. Elements are codes
/// `g * |M| + m`, with `m` packing one `k`-bit field per coefficient.
#[derive(Clone, Debug)]
pub struct ExtensionGroup {
    cocycle: TwoCocycle,
    label: String,
    msize: usize,
    bits: u32,
    fields: u32,
    high: u64,
    act: Vec<u32>,
    coc: Vec<u32>,
}

impl ExtensionGroup {
    pub fn new(cocycle: TwoCocycle, label: &str) -> Result<Self> {
        let m = cocycle.module();
        let r = m.ring();
        let fields = (m.rank() * r.degree()) as u32;
        let bits = r.level();
        let total = fields * bits;
        let n = cocycle.group().order();
        if total >= 32 || n << total > ORDER_CAP {
            return Err(Error::CapExceeded {
                order: n.saturating_mul(1usize.checked_shl(total).unwrap_or(usize::MAX)),
                cap: ORDER_CAP,
            });
        }
        let msize = 1usize << total;
        let high = (0..fields).fold(0u64, |h, i| h | 1u64 << (i * bits + bits - 1));
        let mut e = Self {
            cocycle,
            label: label.into(),
            msize,
            bits,
            fields,
            high,
            act: Vec::new(),
            coc: Vec::new(),
        };
        let m = e.cocycle.module().clone();
        e.act = (0..n)
            .flat_map(|g| (0..msize).map(move |code| (g, code)))
            .map(|(g, code)| e.encode(&m.act(g, &e.decode(code as u32))))
            .collect();
        e.coc = (0..n * n).map(|i| e.encode(&e.cocycle.values[i])).collect();
        Ok(e)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn cocycle(&self) -> &TwoCocycle {
        &self.cocycle
    }

    pub fn module(&self) -> &GModule {
        self.cocycle.module()
    }

    pub fn group(&self) -> &Arc<FiniteGroupTable> {
        self.cocycle.group()
    }

    pub fn order(&self) -> usize {
        self.group().order() * self.msize
    }

    pub fn module_order(&self) -> usize {
        self.msize
    }

    pub fn encode(&self, v: &[Gr]) -> u32 {
        let r = self.module().ring();
        let mut code = 0u64;
        let mut shift = 0;
        for x in v {
            for &c in r.coeffs(x) {
                code |= (c as u64) << shift;
                shift += self.bits;
            }
        }
        code as u32
    }

    pub fn decode(&self, code: u32) -> Vec<Gr> {
        let r = self.module().ring();
        let e = r.degree();
        let mask = (1u64 << self.bits) - 1;
        (0..self.module().rank())
            .map(|i| {
                let mut g = Gr::default();
                for c in 0..e {
                    g.0[c] = ((code as u64 >> ((i * e + c) as u32 * self.bits)) & mask) as u32;
                }
                g
            })
            .collect()
    }

    /// Fieldwise addition mod `2^k` on packed codes.
    #[inline]
    fn madd(&self, a: u32, b: u32) -> u32 {
        let (a, b) = (a as u64, b as u64);
        let low = (a & !self.high) + (b & !self.high);
        ((low ^ ((a ^ b) & self.high)) & ((1u64 << (self.fields * self.bits)) - 1)) as u32
    }

    #[inline]
    fn mneg(&self, a: u32) -> u32 {
        // -a = (~a) + 1 fieldwise
        let full = (1u64 << (self.fields * self.bits)) - 1;
        let ones = (0..self.fields).fold(0u64, |h, i| h | 1u64 << (i * self.bits));
        self.madd((!(a as u64) & full) as u32, ones as u32)
    }

    #[inline]
    pub fn element(&self, g: usize, m: u32) -> u32 {
        (g * self.msize) as u32 + m
    }

    #[inline]
    pub fn split(&self, x: u32) -> (usize, u32) {
        (x as usize / self.msize, x % self.msize as u32)
    }

    /// `tau: E -> G`.
    #[inline]
    pub fn tau(&self, x: u32) -> usize {
        x as usize / self.msize
    }

    /// `j: M -> E`.
    pub fn j(&self, m: &[Gr]) -> u32 {
        self.element(self.group().identity(), self.encode(m))
    }

    pub fn in_kernel(&self, x: u32) -> bool {
        self.tau(x) == self.group().identity()
    }

    pub fn identity(&self) -> u32 {
        self.element(self.group().identity(), 0)
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        let (g, m) = self.split(x);
        let (h, n) = self.split(y);
        let ng = self.group().order();
        let gn = self.act[g * self.msize + n as usize];
        let v = self.madd(self.madd(m, gn), self.coc[g * ng + h]);
        self.element(self.group().mul(g, h), v)
    }

    pub fn inv(&self, x: u32) -> u32 {
        let (g, m) = self.split(x);
        let gi = self.group().inv(g);
        let ng = self.group().order();
        let t = self.madd(m, self.coc[g * ng + gi]);
        self.element(gi, self.mneg(self.act[gi * self.msize + t as usize]))
    }

    pub fn commute(&self, x: u32, y: u32) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn conjugate(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, x: u32) -> usize {
        let e = self.identity();
        let mut y = x;
        let mut k = 1;
        while y != e {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Generators: zero-component lifts of the generators of `G` and `j` of additive
    /// generators of `M`.
    pub fn generators(&self) -> Vec<u32> {
        let mut gens: Vec<u32> = self.group().generators().iter().map(|&g| self.element(g, 0)).collect();
        gens.extend((0..self.fields).map(|i| self.element(self.group().identity(), 1 << (i * self.bits))));
        gens
    }

    /// Group axioms: associativity by Light's test on the generators (exhaustive over all
    /// outer pairs), two-sided inverses, `j(M)` abelian and normal, `tau` multiplicative.
    pub fn verify(&self) -> Result<()> {
        let n = self.order();
        if n > SWEEP_CAP {
            return Err(Error::CapExceeded { order: n, cap: SWEEP_CAP });
        }
        let gens = self.generators();
        let e = self.identity();
        let bad = (0..n as u32)
            .into_par_iter()
            .map(|x| {
                let mut bad = 0usize;
                if self.mul(x, e) != x || self.mul(e, x) != x || self.mul(x, self.inv(x)) != e || self.mul(self.inv(x), x) != e {
                    bad += 1;
                }
                for &s in &gens {
                    let xs = self.mul(x, s);
                    if self.group().mul(self.tau(x), self.tau(s)) != self.tau(xs) {
                        bad += 1;
                    }
                    for y in 0..n as u32 {
                        if self.mul(xs, y) != self.mul(x, self.mul(s, y)) {
                            bad += 1;
                        }
                    }
                    if self.in_kernel(s) && !self.in_kernel(self.conjugate(x, s)) {
                        bad += 1;
                    }
                }
                if self.in_kernel(x) {
                    bad += (0..self.msize as u32)
                        .filter(|&m| !self.commute(x, self.element(self.group().identity(), m)))
                        .count();
                }
                bad
            })
            .sum::<usize>();
        if bad > 0 {
            return Err(Error::Integrity(format!("{}: {bad} group-axiom failures", self.label)));
        }
        Ok(())
    }

    /// Size of the subgroup generated by `gens`.
    pub fn generated_order(&self, gens: &[u32]) -> Result<usize> {
        let n = self.order();
        if n > CLOSURE_CAP {
            return Err(Error::CapExceeded {
                order: n,
                cap: CLOSURE_CAP,
            });
        }
        let mut seen = vec![false; n];
        let mut queue = vec![self.identity()];
        seen[self.identity() as usize] = true;
        let mut count = 1;
        while let Some(x) = queue.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    queue.push(y);
                }
            }
        }
        Ok(count)
    }

    pub fn centralizer(&self, x: u32) -> Vec<u32> {
        (0..self.order() as u32).filter(|&y| self.commute(x, y)).collect()
    }

    /// `2m = 0` for `j(m)`.
    pub fn is_two_torsion_in_kernel(&self, x: u32) -> bool {
        let (g, m) = self.split(x);
        g == self.group().identity() && self.madd(m, m) == 0
    }

    pub fn to_json(&self) -> Value {
        let g = self.group();
        json!({
            "schema": crate::SCHEMA,
            "label": self.label,
            "order": self.order(),
            "group": g.name(),
            "generators": self.generators(),
            "tau_images": self.generators().iter().map(|&x| g.label(self.tau(x))).collect::<Vec<_>>(),
            "module_rank": self.module().rank(),
            "k": self.module().ring().level(),
            "ring": self.module().ring().to_string(),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FrattiniReport {
    pub holds: bool,
    pub order: usize,
    pub zero_lift_generated: usize,
    pub sampled_tuples: usize,
    pub sampled_failures: usize,
}

/// Every lift of the generating tuple of `G` generates `E` (equivalently `j(M) <= Phi(E)`).
pub fn frattini_quality_check(e: &ExtensionGroup, samples: usize, seed: u64) -> Result<FrattiniReport> {
    let base: Vec<usize> = e.group().generators().to_vec();
    let zero: Vec<u32> = base.iter().map(|&g| e.element(g, 0)).collect();
    let zero_lift_generated = e.generated_order(&zero)?;
    let failures: usize = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            let lift: Vec<u32> = base
                .iter()
                .map(|&g| e.element(g, rng.gen_range(0..e.module_order() as u32)))
                .collect();
            e.generated_order(&lift).map(|c| (c != e.order()) as usize)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(FrattiniReport {
        holds: zero_lift_generated == e.order() && failures == 0,
        order: e.order(),
        zero_lift_generated,
        sampled_tuples: samples,
        sampled_failures: failures,
    })
}

/// Conjugation by the zero lift of `sigma` is `-1` on `j(M)`.
pub fn sigma_lift_inverts(e: &ExtensionGroup, sigma: usize) -> bool {
    let s = e.element(sigma, 0);
    let id = e.group().identity();
    (0..e.module_order() as u32).all(|m| e.conjugate(s, e.element(id, m)) == e.element(id, e.mneg(m)))
}

/// Image order, violations, excluded as kernel torsion, literal non-abelian centralizer.
type AuditRow = (usize, Vec<(&'static str, u32)>, bool, bool);

/// Finite-level centralizer audit of an `Upsilon` quotient.
///
/// Checks, for each audited `x`:
/// - `tau(x)` of even order: `C(x)` meets `j(M)` in 2-torsion only;
/// - `tau(x)` of odd order `> 1`: `C(x)` meets `j(M)` trivially;
/// - `x` in `j(M)` of maximal order: `C(x)` contains `j(M)`, and when `x != x^-1` the image
///   `tau(C(x))` has no element of even order;
/// - CA shadow: for `x` outside the torsion shadow `T = {j(m) : 2m = 0}`, any two elements
///   of `C(x)` commute modulo `T`, the kernel of the reduction to the previous level (one
///   digit of precision is lost, as `1 - g` has elementary divisors of valuation at most 1).
///
/// The exact variant (`C(x)` abelian for every `x` outside `T`) is reported as a statistic
/// only: for `z` a lift of an element of order 4, `z^2` lies over `sigma` and its centralizer
/// contains both `z` and all of `T`, on which `z` acts nontrivially, so it fails at every
/// finite level.
///
/// Sweeps every element up to [`SWEEP_CAP`]; above it audits all zero lifts of `G` plus
/// `samples` random elements.
pub fn centralizer_audit(e: &ExtensionGroup, samples: usize, seed: u64) -> Result<AuditReport> {
    let g = e.group();
    let n = e.order();
    let full = n <= SWEEP_CAP;
    let level = e.module().ring().level();
    let mut report = AuditReport::new(json!({
        "extension": e.label(),
        "order": n,
        "level": level,
        "mode": if full { "full sweep" } else { "stratified sample" },
        "seed": seed,
        "certificate": "finite-level shadow",
    }));
    let xs: Vec<u32> = if full {
        (0..n as u32).collect()
    } else {
        let mut v: Vec<u32> = (0..g.order()).map(|a| e.element(a, 0)).collect();
        v.extend((0..samples).map(|i| trial_rng(seed, i as u64).gen_range(0..n as u32)));
        v
    };
    let max_order = 1usize << level;
    let outcomes: Vec<AuditRow> = xs
        .par_iter()
        .map(|&x| {
            let t = e.tau(x);
            let ord = g.element_order(t);
            let c = e.centralizer(x);
            let mut bad = Vec::new();
            let kernel_part = c.iter().filter(|&&y| e.in_kernel(y));
            if ord.is_multiple_of(2) {
                if kernel_part.clone().any(|&y| !e.is_two_torsion_in_kernel(y)) {
                    bad.push(("even-order centralizer meets j(M) beyond 2-torsion", x));
                }
            } else if ord > 1 && kernel_part.clone().count() > 1 {
                bad.push(("odd-order centralizer meets j(M) nontrivially", x));
            }
            if ord == 1 && e.element_order(x) == max_order {
                if kernel_part.count() != e.module_order() {
                    bad.push(("kernel element does not centralize j(M)", x));
                }
                if e.inv(x) != x && c.iter().any(|&y| g.element_order(e.tau(y)).is_multiple_of(2)) {
                    bad.push(("centralizer image has even order", x));
                }
            }
            let excluded = e.is_two_torsion_in_kernel(x);
            let mut literal = false;
            if !excluded {
                let shadow = |y: u32, z: u32| e.is_two_torsion_in_kernel(e.mul(e.mul(y, z), e.inv(e.mul(z, y))));
                if !c.iter().all(|&y| c.iter().all(|&z| z <= y || shadow(y, z))) {
                    bad.push(("centralizer not abelian modulo the torsion shadow", x));
                }
                literal = !c.iter().all(|&y| c.iter().all(|&z| z <= y || e.commute(y, z)));
            }
            (ord, bad, excluded, literal)
        })
        .collect();
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    let mut excluded = 0;
    let mut literal = 0;
    let mut kinds: BTreeMap<&str, usize> = BTreeMap::new();
    for (ord, bad, ex, lit) in &outcomes {
        *histogram.entry(format!("tau order {ord}")).or_insert(0) += 1;
        excluded += *ex as usize;
        literal += *lit as usize;
        for (kind, x) in bad {
            *kinds.entry(kind).or_insert(0) += 1;
            report.violations += 1;
            if report.witnesses.len() < 8 {
                let (h, m) = e.split(*x);
                report.witnesses.push(json!({"kind": kind, "g": g.label(h), "m": m}));
            }
        }
    }
    report.trials = outcomes.len();
    report.stat("tau_order_histogram", serde_json::to_value(histogram).unwrap());
    report.stat("torsion_shadow_excluded", excluded);
    report.stat("nonabelian_centralizers_unrestricted", literal);
    report.stat("violation_kinds", serde_json::to_value(kinds).unwrap());
    Ok(report)
}

/// `Upsilon(G, sigma, 2) / 2^k Omega^-` for every `k` up to a top level, all reductions of
/// one resolution computed at level `top + 1`.
#[derive(Clone, Debug)]
pub struct UpsilonTower {
    group: Arc<FiniteGroupTable>,
    sigma: usize,
    top: u32,
    cocycle: TwoCocycle,
    omega_rank: usize,
}

impl UpsilonTower {
    pub fn new(group: Arc<FiniteGroupTable>, top: u32) -> Result<Self> {
        let sigma = group
            .sigma()
            .ok_or_else(|| Error::Domain(format!("{} has no central involution", group.name())))?;
        let res = omega2_z2k(group.clone(), top + 1)?;
        let full = comparison_cocycle(&res)?;
        let split = sigma_split(res.omega(), sigma)?;
        let cocycle = full.push_forward(&split.quotient, &split.projection)?;
        Ok(Self {
            group,
            sigma,
            top,
            cocycle,
            omega_rank: res.omega().rank(),
        })
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn omega_rank(&self) -> usize {
        self.omega_rank
    }

    pub fn omega_minus_rank(&self) -> usize {
        self.cocycle.module().rank()
    }

    pub fn cocycle(&self, level: u32) -> Result<TwoCocycle> {
        if level == 0 || level > self.top {
            return Err(Error::Domain(format!("level {level} outside 1..={}", self.top)));
        }
        self.cocycle.reduce(&self.cocycle.module().ring().at_level(level)?)
    }

    pub fn level(&self, level: u32) -> Result<ExtensionGroup> {
        ExtensionGroup::new(
            self.cocycle(level)?,
            &format!("Upsilon({})/{}Omega^-", self.group.name(), 1u64 << level),
        )
    }

    /// Reduction from level `k + 1` to `k` is a surjective homomorphism with kernel `2^k j(M)`.
    pub fn compatible(&self, level: u32) -> Result<bool> {
        let hi = self.level(level + 1)?;
        let lo = self.level(level)?;
        let rhi = hi.module().ring().clone();
        let rlo = lo.module().ring().clone();
        let reduce = |x: u32| {
            let (g, m) = hi.split(x);
            lo.element(g, lo.encode(&rlo.reduce_vec(&rhi, &hi.decode(m))))
        };
        let gens = hi.generators();
        let n = hi.order() as u32;
        let hom = (0..n)
            .into_par_iter()
            .all(|x| gens.iter().all(|&s| reduce(hi.mul(x, s)) == lo.mul(reduce(x), reduce(s))));
        let kernel = (0..n).filter(|&x| reduce(x) == lo.identity()).count();
        let expected = hi.order() / lo.order();
        let onto = lo.generated_order(&gens.iter().map(|&s| reduce(s)).collect::<Vec<_>>())? == lo.order();
        Ok(hom && kernel == expected && onto)
    }
}

pub fn build_upsilon_quotient(group: Arc<FiniteGroupTable>, level: u32) -> Result<ExtensionGroup> {
    UpsilonTower::new(group, level)?.level(level)
}

/// `Phi(G, Z/2^k)`: the universal Frattini extension at level `k` with kernel `Omega_2`.
pub fn build_frattini_cover(group: Arc<FiniteGroupTable>, level: u32) -> Result<ExtensionGroup> {
    let res = omega2_z2k(group.clone(), level)?;
    ExtensionGroup::new(comparison_cocycle(&res)?, &format!("Phi({},Z/{})", group.name(), 1u64 << level))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifierResult {
    pub group: String,
    pub sylow2_cyclic: bool,
    pub sylow_times_o2prime: bool,
    pub tau_is_isomorphism: bool,
    pub omega_minus_rank: usize,
    pub agrees: bool,
}

/// Whether `Upsilon(G) -> G` is an isomorphism: by the cyclic-Sylow criterion, cross-checked
/// against `rank Omega^- = 0`.
pub fn upsilon_iso_classifier(group: Arc<FiniteGroupTable>) -> Result<ClassifierResult> {
    let a = subgroup_analysis(&group)?;
    normal_sylow2(&group)?;
    let sigma = group
        .sigma()
        .ok_or_else(|| Error::Domain(format!("{} has no central involution", group.name())))?;
    let res = omega2_z2k(group.clone(), 2)?;
    let rank = sigma_split(res.omega(), sigma)?.quotient.rank();
    let product = a.sylow2.len() * a.o2prime.len() == group.order();
    let iso = a.sylow2_cyclic && product;
    Ok(ClassifierResult {
        group: group.name().into(),
        sylow2_cyclic: a.sylow2_cyclic,
        sylow_times_o2prime: product,
        tau_is_isomorphism: iso,
        omega_minus_rank: rank,
        agrees: iso == (rank == 0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, quaternion};

    #[test]
    fn cyclic_four_cover_is_cyclic_of_order_eight() {
        let e = build_frattini_cover(Arc::new(cyclic(4).unwrap()), 1).unwrap();
        e.verify().unwrap();
        assert_eq!(e.order(), 8);
        assert!((0..8).any(|x| e.element_order(x) == 8));
        let f = frattini_quality_check(&e, 4, 1).unwrap();
        assert!(f.holds);
    }

    #[test]
    fn zero_and_random_coboundaries() {
        let g = Arc::new(quaternion(8).unwrap());
        let r = GaloisRing::new(2, 1).unwrap();
        let m = GModule::trivial(&r, g.clone(), 2);
        let z = TwoCocycle::zero(m.clone());
        assert!(cocycle_is_coboundary(&z).unwrap().is_coboundary);
        let f: Vec<Vec<Gr>> = (0..8)
            .map(|a| {
                if a == 0 {
                    vec![r.zero(); 2]
                } else {
                    vec![r.from_int(a as i64), r.from_int(3 * a as i64)]
                }
            })
            .collect();
        let c = TwoCocycle::coboundary(m, &f).unwrap();
        let res = cocycle_is_coboundary(&c).unwrap();
        assert!(res.is_coboundary);
        let back = TwoCocycle::coboundary(c.module().clone(), res.splitting.as_ref().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn split_extension_fails_frattini() {
        let g = Arc::new(quaternion(8).unwrap());
        let r = GaloisRing::new(1, 1).unwrap();
        let e = ExtensionGroup::new(TwoCocycle::zero(GModule::trivial(&r, g, 1)), "split").unwrap();
        e.verify().unwrap();
        assert!(!frattini_quality_check(&e, 0, 0).unwrap().holds);
    }

    #[test]
    fn shadow_audit_rejects_a_central_product() {
        let g = Arc::new(quaternion(8).unwrap());
        let r = GaloisRing::new(2, 1).unwrap();
        let e = ExtensionGroup::new(TwoCocycle::zero(GModule::trivial(&r, g, 1)), "Q8xZ4").unwrap();
        let a = centralizer_audit(&e, 0, 0).unwrap();
        assert!(a.violations > 0);
    }

    #[test]
    fn upsilon_q8_level_one() {
        let t = UpsilonTower::new(Arc::new(quaternion(8).unwrap()), 1).unwrap();
        let e = t.level(1).unwrap();
        assert_eq!(e.order(), 128);
        e.verify().unwrap();
        assert!(sigma_lift_inverts(&e, t.sigma()));
        assert!(!cocycle_is_coboundary(e.cocycle()).unwrap().is_coboundary);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::group::quaternion;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};
    use rand::SeedableRng;
    use std::sync::OnceLock;

    fn upsilon() -> &'static ExtensionGroup {
        static E: OnceLock<ExtensionGroup> = OnceLock::new();
        E.get_or_init(|| build_upsilon_quotient(Arc::new(quaternion(8).unwrap()), 2).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn extension_is_a_group(x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
            let e = upsilon();
            let n = e.order() as u32;
            let (x, y, z) = (x % n, y % n, z % n);
            prop_assert_eq!(e.mul(e.mul(x, y), z), e.mul(x, e.mul(y, z)));
            prop_assert_eq!(e.mul(x, e.inv(x)), e.identity());
            prop_assert_eq!(e.tau(e.mul(x, y)), e.group().mul(e.tau(x), e.tau(y)));
            let (g, m) = e.split(x);
            prop_assert_eq!(e.element(g, m), x);
        }

        #[test]
        fn random_coboundaries_split(seed in any::<u64>()) {
            let e = upsilon();
            let module = e.module().clone();
            let r = module.ring().clone();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let card = r.cardinality();
            let f: Vec<Vec<Gr>> = (0..e.group().order())
                .map(|g| if g == e.group().identity() { vec![r.zero(); module.rank()] } else { (0..module.rank()).map(|_| r.from_index(rng.gen_range(0..card))).collect() })
                .collect();
            let c = TwoCocycle::coboundary(module, &f).unwrap();
            prop_assert_eq!(c.identity_residuals(), 0);
            prop_assert!(cocycle_is_coboundary(&c).unwrap().is_coboundary);
            let twisted = c.sub(&e.cocycle().scale(&r.from_int(-1)));
            prop_assert!(!cocycle_is_coboundary(&twisted).unwrap().is_coboundary);
        }
    }
}
