//! Group algebras of 2-local groups over Galois rings: radicals, simples, projective
//! covers, two-step minimal resolutions, Loewy series, and the eigenlattice splitting
//! of a central involution.

use crate::error::{Error, Result};
use crate::gring::{invert, left_inverse, smith, span_basis, split_kernel, Echelon, GaloisRing, Gr, GrMat};
use crate::group::{subgroup_analysis, FiniteGroupTable, Quotient};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Minimal `e` such that `F_{2^e}` splits the odd quotient of `group` by its normal
/// Sylow 2-subgroup.
pub fn splitting_degree(group: &FiniteGroupTable) -> Result<usize> {
    let p = normal_sylow2(group)?;
    let q = group.quotient(&p, "odd")?;
    let exp = (0..q.group.order()).map(|a| q.group.element_order(a)).fold(1, num_integer::lcm);
    Ok((1..=64).find(|&e| ((1u64 << e) - 1).is_multiple_of(exp as u64)).unwrap_or(0))
}

/// The normal Sylow 2-subgroup, or an out-of-scope error when the 2-elements do not
/// form a subgroup.
pub fn normal_sylow2(group: &FiniteGroupTable) -> Result<Vec<usize>> {
    let two_part = 1usize << group.order().trailing_zeros();
    let twos: Vec<usize> = (0..group.order()).filter(|&a| group.element_order(a).is_power_of_two()).collect();
    let mut in_p = vec![false; group.order()];
    for &a in &twos {
        in_p[a] = true;
    }
    let closed = twos.iter().all(|&a| twos.iter().all(|&b| in_p[group.mul(a, b)]));
    if twos.len() != two_part || !closed {
        return Err(Error::OutOfScope(format!("{} has no normal Sylow 2-subgroup", group.name())));
    }
    Ok(twos)
}

/// `R[G]` for `R = GR(2^k, e)` with `G` 2-local and `G/O_2(G)` abelian. Either `R` splits
/// the odd quotient (one simple per character) or `R = Z/2^k`, where the simples are the
/// Frobenius orbits of characters.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    group: Arc<FiniteGroupTable>,
    ring: GaloisRing,
    sylow: Vec<usize>,
    sylow_generators: Vec<usize>,
    odd: Quotient,
    characters: Vec<Vec<Gr>>,
    idempotents: Vec<Vec<Gr>>,
    labels: Vec<String>,
    dims: Vec<usize>,
}

impl GroupAlgebra {
    /// Level `k` over the smallest splitting degree.
    pub fn new(group: Arc<FiniteGroupTable>, level: u32) -> Result<Self> {
        let e = splitting_degree(&group)?;
        Self::with_ring(group, GaloisRing::new(level, e)?)
    }

    pub fn with_ring(group: Arc<FiniteGroupTable>, ring: GaloisRing) -> Result<Self> {
        let sylow = normal_sylow2(&group)?;
        let odd = group.quotient(&sylow, &format!("{}/O2", group.name()))?;
        if !odd.group.is_abelian() {
            return Err(Error::OutOfScope(format!("{}: odd quotient is not abelian", group.name())));
        }
        let need = splitting_degree(&group)?;
        let split = ring.degree().is_multiple_of(need);
        if !split && ring.degree() != 1 {
            return Err(Error::Domain(format!(
                "{ring} neither splits the odd quotient of {} nor is Z/2^k; use degree {need} or 1",
                group.name()
            )));
        }
        let mut sylow_generators = Vec::new();
        for &u in &sylow {
            if group.closure(&sylow_generators).len() == sylow.len() {
                break;
            }
            if !group.closure(&sylow_generators).contains(&u) {
                sylow_generators.push(u);
            }
        }
        let mut alg = Self {
            group,
            ring,
            sylow,
            sylow_generators,
            odd,
            characters: Vec::new(),
            idempotents: Vec::new(),
            labels: Vec::new(),
            dims: Vec::new(),
        };
        if split {
            alg.characters = alg.odd_characters()?;
            alg.labels = (0..alg.characters.len())
                .map(|i| if i == 0 { "F".into() } else { format!("S{i}") })
                .collect();
            alg.idempotents = (0..alg.characters.len()).map(|i| alg.lift_idempotent(i)).collect::<Result<_>>()?;
            alg.dims = vec![1; alg.idempotents.len()];
        } else {
            alg.descend_orbits(need)?;
        }
        Ok(alg)
    }

    /// Orbit idempotents over `Z/2^k`: sums of the split idempotents over Frobenius orbits
    /// `chi -> chi^2`, which have coefficients in `Z/2^k`.
    fn descend_orbits(&mut self, need: usize) -> Result<()> {
        let s = GaloisRing::new(self.ring.level(), need)?;
        let split = Self::with_ring(self.group.clone(), s.clone())?;
        let n = split.characters.len();
        let mut seen = vec![false; n];
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut orbit = vec![i];
            seen[i] = true;
            let mut c: Vec<Gr> = split.characters[i].iter().map(|x| s.mul(x, x)).collect();
            while c != split.characters[i] {
                let j = split
                    .characters
                    .iter()
                    .position(|d| *d == c)
                    .ok_or_else(|| Error::Integrity("character orbit leaves the set".into()))?;
                seen[j] = true;
                orbit.push(j);
                c = c.iter().map(|x| s.mul(x, x)).collect();
            }
            let mut e = vec![s.zero(); self.dim()];
            for &j in &orbit {
                e = s.vec_add(&e, &split.idempotents[j]);
            }
            let mut down = Vec::with_capacity(e.len());
            for x in &e {
                if s.coeffs(x)[1..].iter().any(|&c| c != 0) {
                    return Err(Error::Integrity("orbit idempotent is not defined over Z/2^k".into()));
                }
                down.push(self.ring.from_int(s.coeffs(x)[0] as i64));
            }
            self.idempotents.push(down);
            self.dims.push(orbit.len());
            self.labels.push(if i == 0 {
                "F".into()
            } else {
                format!("S{}", orbit.iter().map(|j| j.to_string()).collect::<String>())
            });
        }
        Ok(())
    }

    /// Characters of the odd quotient with Teichmuller values, as functions on `G`.
    fn odd_characters(&self) -> Result<Vec<Vec<Gr>>> {
        let q = &self.odd.group;
        let r = &self.ring;
        let mut gens: Vec<usize> = Vec::new();
        for a in 0..q.order() {
            if !q.closure(&gens).contains(&a) {
                gens.push(a);
            }
        }
        let zeta = r.primitive_root();
        let big = r.residue_field().cardinality() - 1;
        let orders: Vec<usize> = gens.iter().map(|&a| q.element_order(a)).collect();
        let mut chars = Vec::new();
        let total: usize = orders.iter().product();
        for code in 0..total {
            let mut c = code;
            let mut images = vec![r.one(); gens.len()];
            for i in (0..gens.len()).rev() {
                let a = c % orders[i];
                c /= orders[i];
                images[i] = r.pow(&zeta, a as u64 * big / orders[i] as u64);
            }
            let mut val: Vec<Option<Gr>> = vec![None; q.order()];
            val[q.identity()] = Some(r.one());
            let mut queue = vec![q.identity()];
            let mut ok = true;
            while let Some(x) = queue.pop() {
                for (i, &g) in gens.iter().enumerate() {
                    let y = q.mul(x, g);
                    let v = r.mul(&val[x].unwrap(), &images[i]);
                    match val[y] {
                        None => {
                            val[y] = Some(v);
                            queue.push(y);
                        }
                        Some(w) if w != v => ok = false,
                        _ => {}
                    }
                }
            }
            let val: Vec<Gr> = val.into_iter().map(|v| v.expect("generators generate")).collect();
            ok &= (0..q.order()).all(|a| (0..q.order()).all(|b| val[q.mul(a, b)] == r.mul(&val[a], &val[b])));
            if ok {
                chars.push((0..self.group.order()).map(|g| val[self.odd.projection[g]]).collect());
            }
        }
        if chars.len() != q.order() {
            return Err(Error::Integrity(format!(
                "found {} characters for an abelian group of order {}",
                chars.len(),
                q.order()
            )));
        }
        Ok(chars)
    }

    /// Primitive idempotent for simple `i`: the character idempotent of the odd quotient
    /// pushed through a section, then Newton steps `e <- 3e^2 - 2e^3` until exact.
    fn lift_idempotent(&self, i: usize) -> Result<Vec<Gr>> {
        let r = &self.ring;
        let q = self.odd.group.order();
        let inv_q = r.inv(&r.from_int(q as i64)).expect("odd order is a unit");
        let mut e = vec![r.zero(); self.group.order()];
        for (c, &g) in self.odd.section.iter().enumerate() {
            let x = self.characters[i][g];
            let xinv = r.inv(&x).expect("roots of unity are units");
            e[g] = r.mul(&xinv, &inv_q);
            debug_assert_eq!(self.odd.projection[g], c);
        }
        for _ in 0..200 {
            let e2 = self.mul(&e, &e);
            if e2 == e {
                return Ok(e);
            }
            let e3 = self.mul(&e2, &e);
            e = r.vec_sub(&r.vec_scale(&e2, &r.from_int(3)), &r.vec_scale(&e3, &r.from_int(2)));
        }
        Err(Error::Integrity("idempotent lifting did not converge".into()))
    }

    pub fn group(&self) -> &Arc<FiniteGroupTable> {
        &self.group
    }

    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn sylow(&self) -> &[usize] {
        &self.sylow
    }

    pub fn simple_count(&self) -> usize {
        self.idempotents.len()
    }

    /// Rank over `R` of each simple lift.
    pub fn simple_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn is_split(&self) -> bool {
        !self.characters.is_empty()
    }

    pub fn simple_labels(&self) -> &[String] {
        &self.labels
    }

    /// Character of simple `i`; `None` over `Z/2^k` when the odd quotient does not split.
    pub fn character(&self, i: usize) -> Option<&[Gr]> {
        self.characters.get(i).map(Vec::as_slice)
    }

    pub fn idempotent(&self, i: usize) -> &[Gr] {
        &self.idempotents[i]
    }

    /// Product in `R[G]` of coefficient vectors indexed by group elements.
    pub fn mul(&self, a: &[Gr], b: &[Gr]) -> Vec<Gr> {
        let r = &self.ring;
        let mut c = vec![r.zero(); self.dim()];
        for (g, x) in a.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (h, y) in b.iter().enumerate() {
                if !r.is_zero(y) {
                    let gh = self.group.mul(g, h);
                    c[gh] = r.mul_add(x, y, &c[gh]);
                }
            }
        }
        c
    }

    pub fn basis_element(&self, g: usize) -> Vec<Gr> {
        let mut v = vec![self.ring.zero(); self.dim()];
        v[g] = self.ring.one();
        v
    }

    /// `g v` for `v` in `R[G]^m`, blocks of length `|G|`.
    pub fn left_regular(&self, g: usize, v: &[Gr]) -> Vec<Gr> {
        let n = self.dim();
        let mut out = vec![self.ring.zero(); v.len()];
        for (b, block) in v.chunks(n).enumerate() {
            for (h, x) in block.iter().enumerate() {
                out[b * n + self.group.mul(g, h)] = *x;
            }
        }
        out
    }

    /// Matrix of `g` on `R[G]^m`.
    pub fn regular_matrix(&self, g: usize, blocks: usize) -> GrMat {
        let n = self.dim();
        let mut m = GrMat::zeros(n * blocks, n * blocks);
        for b in 0..blocks {
            for h in 0..n {
                m.set(b * n + self.group.mul(g, h), b * n + h, self.ring.one());
            }
        }
        m
    }

    pub fn regular_module(&self) -> GModule {
        let action = (0..self.dim()).map(|g| self.regular_matrix(g, 1)).collect();
        GModule::from_parts(self.ring.clone(), self.group.clone(), action, "R[G]".into())
    }

    /// Basis (columns in `R[G]`) of the left ideal `R[G] e_i`.
    pub fn projective_basis(&self, i: usize) -> Result<GrMat> {
        let cols: Vec<Vec<Gr>> = (0..self.dim()).map(|g| self.left_regular(g, &self.idempotents[i])).collect();
        let b = span_basis(&self.ring, &GrMat::from_cols(&cols, self.dim()))?;
        if b.cols != self.sylow.len() * self.dims[i] {
            return Err(Error::Integrity(format!(
                "projective cover of rank {} instead of {}",
                b.cols,
                self.sylow.len() * self.dims[i]
            )));
        }
        Ok(b)
    }

    pub fn projective_cover(&self, i: usize) -> Result<GModule> {
        let b = self.projective_basis(i)?;
        let (m, _) = self.regular_module().submodule(&b, &format!("P({})", self.labels[i]))?;
        Ok(m)
    }

    /// Lift of simple `i`: `R[G/O_2] e_i` inflated to `G`.
    pub fn simple(&self, i: usize) -> GModule {
        if let Some(chi) = self.characters.get(i) {
            let action = (0..self.dim())
                .map(|g| GrMat {
                    rows: 1,
                    cols: 1,
                    data: vec![chi[g]],
                })
                .collect();
            return GModule::from_parts(self.ring.clone(), self.group.clone(), action, self.labels[i].clone());
        }
        let r = &self.ring;
        let q = &self.odd.group;
        let mut e = vec![r.zero(); q.order()];
        for (g, x) in self.idempotents[i].iter().enumerate() {
            let c = self.odd.projection[g];
            e[c] = r.add(&e[c], x);
        }
        let translate = |g: usize, v: &[Gr]| {
            let mut out = vec![r.zero(); v.len()];
            for (h, x) in v.iter().enumerate() {
                out[q.mul(g, h)] = *x;
            }
            out
        };
        let cols: Vec<Vec<Gr>> = (0..q.order()).map(|g| translate(g, &e)).collect();
        let basis = span_basis(r, &GrMat::from_cols(&cols, q.order())).expect("idempotent ideal is a summand");
        let coords = left_inverse(r, &basis).expect("basis of a summand");
        let action = (0..self.dim())
            .map(|g| {
                let img: Vec<Vec<Gr>> = (0..basis.cols).map(|j| translate(self.odd.projection[g], &basis.col(j))).collect();
                r.mat_mul(&coords, &GrMat::from_cols(&img, q.order()))
            })
            .collect();
        GModule::from_parts(r.clone(), self.group.clone(), action, self.labels[i].clone())
    }

    pub fn trivial_module(&self) -> GModule {
        self.simple(0)
    }

    /// Radical of `F[G]` (field coefficients): the ideal spanned by `(u - 1) g`.
    pub fn radical(&self) -> Result<Radical> {
        let f = &self.ring;
        if !f.is_field() {
            return Err(Error::Domain("radical_basis expects field coefficients".into()));
        }
        let seeds: Vec<Vec<Gr>> = self
            .sylow_generators
            .iter()
            .flat_map(|&u| (0..self.dim()).map(move |g| (u, g)))
            .map(|(u, g)| {
                let mut v = self.basis_element(self.group.mul(u, g));
                v[g] = f.sub(&v[g], &f.one());
                v
            })
            .collect();
        let j = self.spin(&seeds, None);
        let mut powers = vec![j.dim()];
        let mut cur = j.clone();
        while cur.dim() > 0 {
            let next: Vec<Vec<Gr>> = j.rows().iter().flat_map(|a| cur.rows().iter().map(|b| self.mul(a, b))).collect();
            let mut e = Echelon::new(f);
            for v in &next {
                e.insert(v);
            }
            if e.dim() >= cur.dim() {
                return Err(Error::Integrity("radical candidate is not nilpotent".into()));
            }
            powers.push(e.dim());
            cur = e;
        }
        // the character idempotents stay orthogonal modulo J, so the quotient is split semisimple
        for a in 0..self.simple_count() {
            for b in 0..self.simple_count() {
                let prod = self.mul(&self.idempotents[a], &self.idempotents[b]);
                let want = if a == b {
                    self.idempotents[a].clone()
                } else {
                    vec![f.zero(); self.dim()]
                };
                if !j.contains(&f.vec_sub(&prod, &want)) {
                    return Err(Error::Integrity("idempotents are not orthogonal modulo the radical".into()));
                }
            }
        }
        Ok(Radical {
            dim: j.dim(),
            basis: j.rows().to_vec(),
            power_dims: powers.clone(),
            nilpotency_index: powers.len() - 1,
            quotient_dim: self.dim() - j.dim(),
        })
    }

    /// Smallest left `G`-stable subspace of `R[G]^m` (field coefficients) containing `seeds`;
    /// with `module` the action is that module's instead of the regular one.
    fn spin(&self, seeds: &[Vec<Gr>], module: Option<&GModule>) -> Echelon {
        let f = &self.ring;
        let mut e = Echelon::new(f);
        let mut queue: Vec<Vec<Gr>> = seeds.to_vec();
        while let Some(v) = queue.pop() {
            if e.insert(&v) {
                for &g in self.group.generators() {
                    queue.push(match module {
                        Some(m) => m.act(g, &v),
                        None => self.left_regular(g, &v),
                    });
                }
            }
        }
        e
    }

    /// `J V` inside a module `V` given by a spanning set (field coefficients).
    fn radical_times(&self, module: &GModule, span: &[Vec<Gr>]) -> Echelon {
        let f = &self.ring;
        let seeds: Vec<Vec<Gr>> = self
            .sylow_generators
            .iter()
            .flat_map(|&u| span.iter().map(move |v| f.vec_sub(&module.act(u, v), v)))
            .collect();
        self.spin(&seeds, Some(module))
    }

    /// Radical layers of a module over a field, with simple multiplicities per layer.
    pub fn loewy_series(&self, module: &GModule) -> Result<Vec<LoewyLayer>> {
        let f = &self.ring;
        if !f.is_field() || module.ring() != f {
            return Err(Error::Domain("Loewy series need the algebra's field coefficients".into()));
        }
        let idem: Vec<GrMat> = self.idempotents.iter().map(|e| module.element_matrix(e)).collect();
        let mut cur = Echelon::new(f);
        for i in 0..module.rank() {
            let mut v = vec![f.zero(); module.rank()];
            v[i] = f.one();
            cur.insert(&v);
        }
        let mut layers = Vec::new();
        while cur.dim() > 0 {
            let next = self.radical_times(module, cur.rows());
            if next.dim() >= cur.dim() {
                return Err(Error::Integrity("radical does not act nilpotently".into()));
            }
            let mut mult = BTreeMap::new();
            let mut total = 0;
            for (i, e) in idem.iter().enumerate() {
                let mut ext = next.clone();
                let added = cur.rows().iter().filter(|v| ext.insert(&f.mat_vec(e, v))).count();
                total += added;
                if added > 0 {
                    mult.insert(self.labels[i].clone(), added / self.dims[i]);
                }
            }
            let dim = cur.dim() - next.dim();
            if total != dim {
                return Err(Error::Integrity(format!(
                    "layer of dimension {dim} but multiplicities sum to {total}"
                )));
            }
            layers.push(LoewyLayer { dim, multiplicities: mult });
            cur = next;
        }
        Ok(layers)
    }

    /// Simples with their projective covers; each cover's head is checked to be its simple.
    pub fn simples_and_projectives(&self) -> Result<Vec<(GModule, GModule)>> {
        (0..self.simple_count())
            .map(|i| {
                let cover = self.projective_cover(i)?;
                if self.ring.is_field() {
                    let layers = self.loewy_series(&cover)?;
                    let head = &layers[0];
                    if head.dim != self.dims[i] || head.multiplicities.get(&self.labels[i]) != Some(&1) {
                        return Err(Error::Integrity(format!("head of P({}) is {}", self.labels[i], head)));
                    }
                }
                Ok((self.simple(i), cover))
            })
            .collect()
    }

    /// Fixed points of the elements `h` on a module over a field.
    pub fn fixed_points(module: &GModule, elements: &[usize]) -> Result<FixedPoints> {
        module.fixed_points(elements)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Radical {
    pub dim: usize,
    #[serde(skip)]
    pub basis: Vec<Vec<Gr>>,
    pub power_dims: Vec<usize>,
    pub nilpotency_index: usize,
    pub quotient_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoewyLayer {
    pub dim: usize,
    pub multiplicities: BTreeMap<String, usize>,
}

impl LoewyLayer {
    /// Layer from `[("F", 1), ("S1", 2)]`-style data.
    pub fn of(parts: &[(&str, usize)]) -> Self {
        let multiplicities: BTreeMap<String, usize> = parts.iter().filter(|p| p.1 > 0).map(|(s, m)| (s.to_string(), *m)).collect();
        Self {
            dim: multiplicities.values().sum(),
            multiplicities,
        }
    }
}

impl std::fmt::Display for LoewyLayer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .multiplicities
            .iter()
            .map(|(s, &m)| if m == 1 { s.clone() } else { format!("{m}{s}") })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Composition factor multiset of a module from its Loewy layers.
pub fn composition_factors(layers: &[LoewyLayer]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for l in layers {
        for (s, m) in &l.multiplicities {
            *out.entry(s.clone()).or_insert(0) += m;
        }
    }
    out
}

/// A free `R`-module with a matrix for every group element.
#[derive(Clone, Debug, PartialEq)]
pub struct GModule {
    ring: GaloisRing,
    group: Arc<FiniteGroupTable>,
    rank: usize,
    action: Vec<GrMat>,
    label: String,
}

/// Basis of a submodule in ambient coordinates and a left inverse for coordinates.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub basis: GrMat,
    pub coords: GrMat,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPoints {
    /// Rank of the free part.
    pub free_rank: usize,
    /// Valuations of the nonzero non-unit elementary divisors (torsion contributions).
    pub torsion: Vec<u32>,
    /// `log_2` of the number of fixed vectors.
    pub log2_size: u64,
    #[serde(skip)]
    pub basis: GrMat,
}

impl FixedPoints {
    pub fn is_trivial(&self) -> bool {
        self.log2_size == 0
    }
}

impl GModule {
    fn from_parts(ring: GaloisRing, group: Arc<FiniteGroupTable>, action: Vec<GrMat>, label: String) -> Self {
        let rank = action.first().map_or(0, |m| m.rows);
        Self {
            ring,
            group,
            rank,
            action,
            label,
        }
    }

    /// Checks shapes, the identity, and `rho(s) rho(h) = rho(s h)` for generators `s`.
    pub fn new(ring: GaloisRing, group: Arc<FiniteGroupTable>, action: Vec<GrMat>, label: &str) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::Dimension {
                expected: group.order(),
                got: action.len(),
            });
        }
        let m = Self::from_parts(ring, group, action, label.into());
        m.verify()?;
        Ok(m)
    }

    pub fn verify(&self) -> Result<()> {
        let r = &self.ring;
        if self.action.iter().any(|a| a.rows != self.rank || a.cols != self.rank) {
            return Err(Error::Construction("action matrices have inconsistent shapes".into()));
        }
        if self.action[self.group.identity()] != GrMat::identity(r, self.rank) {
            return Err(Error::Construction("identity does not act trivially".into()));
        }
        for &s in self.group.generators() {
            for h in 0..self.group.order() {
                if r.mat_mul(&self.action[s], &self.action[h]) != self.action[self.group.mul(s, h)] {
                    return Err(Error::Construction(format!("{}: relation fails at ({s},{h})", self.label)));
                }
            }
        }
        Ok(())
    }

    pub fn trivial(ring: &GaloisRing, group: Arc<FiniteGroupTable>, rank: usize) -> Self {
        let action = vec![GrMat::identity(ring, rank); group.order()];
        Self::from_parts(ring.clone(), group, action, "trivial".into())
    }

    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }

    pub fn group(&self) -> &Arc<FiniteGroupTable> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }

    pub fn matrix(&self, g: usize) -> &GrMat {
        &self.action[g]
    }

    pub fn act(&self, g: usize, v: &[Gr]) -> Vec<Gr> {
        self.ring.mat_vec(&self.action[g], v)
    }

    /// Matrix of an element of `R[G]`.
    pub fn element_matrix(&self, a: &[Gr]) -> GrMat {
        let r = &self.ring;
        let mut m = GrMat::zeros(self.rank, self.rank);
        for (g, x) in a.iter().enumerate() {
            if !r.is_zero(x) {
                m = r.mat_add(&m, &r.mat_scale(&self.action[g], x));
            }
        }
        m
    }

    /// The submodule spanned by the columns of `basis` (a direct summand).
    pub fn submodule(&self, basis: &GrMat, label: &str) -> Result<(GModule, Embedding)> {
        let r = &self.ring;
        let coords = left_inverse(r, basis)?;
        let mut action = Vec::with_capacity(self.group.order());
        for g in 0..self.group.order() {
            let gb = r.mat_mul(&self.action[g], basis);
            let a = r.mat_mul(&coords, &gb);
            if self.group.generators().contains(&g) && r.mat_mul(basis, &a) != gb {
                return Err(Error::Integrity(format!(
                    "{label}: span is not stable under {}",
                    self.group.label(g)
                )));
            }
            action.push(a);
        }
        let m = Self::from_parts(r.clone(), self.group.clone(), action, label.into());
        Ok((
            m,
            Embedding {
                basis: basis.clone(),
                coords,
            },
        ))
    }

    /// `M / W` for a direct summand `W` given by `sub`; returns the module, the projection
    /// `M -> M/W`, and a section basis.
    pub fn quotient(&self, sub: &GrMat, label: &str) -> Result<(GModule, GrMat, GrMat)> {
        let r = &self.ring;
        let s = smith(r, sub);
        if s.unit_rank(r) != sub.cols {
            return Err(Error::Integrity("quotient by a non-summand".into()));
        }
        // columns of u^-1 past the rank complete the span of `sub` to a basis
        let uinv = invert(r, &s.u).ok_or_else(|| Error::Integrity("singular transform".into()))?;
        let comp: Vec<usize> = (sub.cols..self.rank).collect();
        let section = uinv.select_cols(&comp);
        let full = sub.hstack(&section);
        let finv = invert(r, &full).ok_or_else(|| Error::Integrity("complement is not a basis".into()))?;
        let projection = finv.select_rows(&comp);
        let action: Vec<GrMat> = (0..self.group.order())
            .map(|g| r.mat_mul(&r.mat_mul(&projection, &self.action[g]), &section))
            .collect();
        let m = Self::new(r.clone(), self.group.clone(), action, label)?;
        Ok((m, projection, section))
    }

    /// Entrywise reduction to a lower level (or the residue field).
    pub fn reduce(&self, target: &GaloisRing) -> Result<GModule> {
        if target.degree() != self.ring.degree() || target.level() > self.ring.level() {
            return Err(Error::Domain(format!("cannot reduce {} to {target}", self.ring)));
        }
        let action = self.action.iter().map(|a| target.reduce_mat(&self.ring, a)).collect();
        Ok(Self::from_parts(target.clone(), self.group.clone(), action, self.label.clone()))
    }

    /// Twist by a linear character.
    pub fn twist(&self, chi: &[Gr], label: &str) -> GModule {
        let action = self.action.iter().zip(chi).map(|(a, c)| self.ring.mat_scale(a, c)).collect();
        Self::from_parts(self.ring.clone(), self.group.clone(), action, label.into())
    }

    /// Module through a surjection `tau: H -> G` given on elements.
    pub fn inflate(&self, source: Arc<FiniteGroupTable>, tau: &[usize], label: &str) -> Result<GModule> {
        let action = tau.iter().map(|&g| self.action[g].clone()).collect();
        Self::new(self.ring.clone(), source, action, label)
    }

    /// Common fixed vectors of `elements`, with an exact count over the ring.
    pub fn fixed_points(&self, elements: &[usize]) -> Result<FixedPoints> {
        let r = &self.ring;
        let n = self.rank;
        let id = GrMat::identity(r, n);
        let mut stacked = GrMat::zeros(0, n);
        for &h in elements {
            stacked = stacked.vstack(&r.mat_sub(&self.action[h], &id));
        }
        let s = smith(r, &stacked);
        let torsion: Vec<u32> = s.valuations(r)[..s.rank].iter().copied().filter(|&v| v > 0).collect();
        let free_rank = n - s.rank;
        let log2_size = r.degree() as u64 * (r.level() as u64 * free_rank as u64 + torsion.iter().map(|&v| v as u64).sum::<u64>());
        let idx: Vec<usize> = (s.rank..n).collect();
        Ok(FixedPoints {
            free_rank,
            torsion,
            log2_size,
            basis: s.v.select_cols(&idx),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": crate::SCHEMA,
            "group": self.group.name(),
            "ring": {"level": self.ring.level(), "degree": self.ring.degree()},
            "rank": self.rank,
            "label": self.label,
            "action": self.action.iter().map(|a| self.ring.mat_to_json(a)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, group: Arc<FiniteGroupTable>) -> Result<Self> {
        let bad = |what: &str| Error::Construction(format!("module JSON: {what}"));
        if v.get("schema").and_then(Value::as_str) != Some(crate::SCHEMA) {
            return Err(bad("schema mismatch"));
        }
        if v.get("group").and_then(Value::as_str) != Some(group.name()) {
            return Err(bad("group mismatch"));
        }
        let level = v["ring"]["level"].as_u64().ok_or_else(|| bad("ring level"))? as u32;
        let degree = v["ring"]["degree"].as_u64().ok_or_else(|| bad("ring degree"))? as usize;
        let ring = GaloisRing::new(level, degree)?;
        let rank = v["rank"].as_u64().ok_or_else(|| bad("rank"))? as usize;
        let elem = |x: &Value| -> Result<Gr> {
            match x {
                Value::Number(n) => Ok(ring.from_int(n.as_i64().ok_or_else(|| bad("entry"))?)),
                Value::Array(c) => ring.from_coeffs(&c.iter().map(|y| y.as_i64().unwrap_or(0)).collect::<Vec<_>>()),
                _ => Err(bad("entry")),
            }
        };
        let mut action = Vec::new();
        for m in v["action"].as_array().ok_or_else(|| bad("action"))? {
            let rows = m.as_array().ok_or_else(|| bad("matrix"))?;
            let mut data = Vec::with_capacity(rank * rank);
            for row in rows {
                for x in row.as_array().ok_or_else(|| bad("row"))? {
                    data.push(elem(x)?);
                }
            }
            if data.len() != rank * rank {
                return Err(bad("matrix shape"));
            }
            action.push(GrMat {
                rows: rank,
                cols: rank,
                data,
            });
        }
        let label = v["label"].as_str().unwrap_or("module");
        Self::new(ring, group, action, label)
    }
}

/// `0 -> Omega_2 -> Q_1 -> Q_0 -> R -> 0` with `Q_0 = R[G] e_0` and `Q_1` a projective cover
/// of `K_0 = ker(Q_0 -> R)`; `Q_1` sits in `R[G]^m`, one block per summand.
#[derive(Clone, Debug)]
pub struct MinimalResolution {
    pub(crate) algebra: Arc<GroupAlgebra>,
    pub(crate) q0: GrMat,
    pub(crate) k0: GrMat,
    pub(crate) cover: Vec<usize>,
    pub(crate) tops: Vec<Vec<Gr>>,
    pub(crate) q1: GrMat,
    pub(crate) psi: GrMat,
    pub(crate) omega: GModule,
    pub(crate) omega_embedding: Embedding,
}

impl MinimalResolution {
    pub fn new(algebra: Arc<GroupAlgebra>) -> Result<Self> {
        let alg = &*algebra;
        let r = alg.ring().clone();
        let f = r.residue_field();
        let n = alg.dim();
        let q0 = alg.projective_basis(0)?;
        let aug = GrMat {
            rows: 1,
            cols: n,
            data: vec![r.one(); n],
        };
        let k0 = r.mat_mul(&q0, &split_kernel(&r, &r.mat_mul(&aug, &q0))?);

        // head of K_0 over the residue field
        let falg = GroupAlgebra::with_ring(alg.group().clone(), f.clone())?;
        let kbar: Vec<Vec<Gr>> = (0..k0.cols).map(|j| f.reduce_vec(&r, &k0.col(j))).collect();
        let regular = falg.regular_module();
        let jk = falg.radical_times(&regular, &kbar);
        let mut head = jk.clone();
        let mut cover = Vec::new();
        let mut tops = Vec::new();
        for i in 0..alg.simple_count() {
            for j in 0..k0.cols {
                let y = alg.mul(alg.idempotent(i), &k0.col(j));
                if !head.contains(&f.reduce_vec(&r, &y)) {
                    for g in 0..n {
                        head.insert(&f.reduce_vec(&r, &alg.left_regular(g, &y)));
                    }
                    cover.push(i);
                    tops.push(y);
                }
            }
        }
        if head.dim() != k0.cols {
            return Err(Error::Integrity("idempotent images do not span the head".into()));
        }
        let m = cover.len();

        let mut q1 = GrMat::zeros(n * m, 0);
        let bases: Vec<GrMat> = (0..alg.simple_count()).map(|i| alg.projective_basis(i)).collect::<Result<_>>()?;
        for (b, &i) in cover.iter().enumerate() {
            let mut block = GrMat::zeros(n * m, bases[i].cols);
            for row in 0..n {
                for c in 0..bases[i].cols {
                    block.set(b * n + row, c, bases[i].get(row, c));
                }
            }
            q1 = q1.hstack(&block);
        }
        let mut psi = GrMat::zeros(n, n * m);
        for (b, y) in tops.iter().enumerate() {
            for h in 0..n {
                let hy = alg.left_regular(h, y);
                for x in 0..n {
                    psi.set(x, b * n + h, hy[x]);
                }
            }
        }
        let psi_q1 = r.mat_mul(&psi, &q1);
        let ker = split_kernel(&r, &psi_q1)?;
        if q1.cols - ker.cols != k0.cols {
            return Err(Error::Integrity("cover map is not onto the kernel".into()));
        }
        let omega_basis = r.mat_mul(&q1, &ker);
        let ambient = GModule::from_parts(
            r.clone(),
            alg.group().clone(),
            (0..n).map(|g| alg.regular_matrix(g, m)).collect(),
            "Q1".into(),
        );
        let (omega, omega_embedding) = ambient.submodule(&omega_basis, &format!("Omega2({},{})", alg.group().name(), r))?;

        // minimality: Omega_2 lies in Rad(A) Q_1
        let fq1 = GModule::from_parts(
            f.clone(),
            alg.group().clone(),
            (0..n).map(|g| falg.regular_matrix(g, m)).collect(),
            "Q1".into(),
        );
        let q1bar: Vec<Vec<Gr>> = (0..q1.cols).map(|j| f.reduce_vec(&r, &q1.col(j))).collect();
        let jq1 = falg.radical_times(&fq1, &q1bar);
        if jq1.dim() != q1.cols - cover.iter().map(|&i| alg.simple_dims()[i]).sum::<usize>() {
            return Err(Error::Integrity("radical of the cover has the wrong dimension".into()));
        }
        for j in 0..omega_basis.cols {
            if !jq1.contains(&f.reduce_vec(&r, &omega_basis.col(j))) {
                return Err(Error::Integrity("a projective summand leaked into Omega_2".into()));
            }
        }
        Ok(Self {
            algebra,
            q0,
            k0,
            cover,
            tops,
            q1,
            psi,
            omega,
            omega_embedding,
        })
    }

    pub fn algebra(&self) -> &Arc<GroupAlgebra> {
        &self.algebra
    }

    pub fn omega(&self) -> &GModule {
        &self.omega
    }

    pub fn rank_q0(&self) -> usize {
        self.q0.cols
    }

    pub fn rank_k0(&self) -> usize {
        self.k0.cols
    }

    pub fn rank_q1(&self) -> usize {
        self.q1.cols
    }

    /// Generators `y_b in K_0` whose images span the head of `K_0`.
    pub fn cover_generators(&self) -> &[Vec<Gr>] {
        &self.tops
    }

    /// Simple label of each summand of `Q_1`.
    pub fn cover_summands(&self) -> Vec<String> {
        self.cover.iter().map(|&i| self.algebra.simple_labels()[i].clone()).collect()
    }

    pub fn summary(&self) -> Value {
        json!({
            "group": self.algebra.group().name(),
            "ring": self.algebra.ring().to_string(),
            "rank_q0": self.rank_q0(),
            "rank_k0": self.rank_k0(),
            "q1_summands": self.cover_summands(),
            "rank_q1": self.rank_q1(),
            "dim": self.omega.rank(),
        })
    }
}

/// `Omega_2(G, F_{2^e})` for the minimal splitting degree.
pub fn omega2_modp(group: Arc<FiniteGroupTable>) -> Result<MinimalResolution> {
    MinimalResolution::new(Arc::new(GroupAlgebra::new(group, 1)?))
}

/// `Omega_2(G, Z/2^k)`, with coefficients in `Z/2^k` itself.
pub fn omega2_z2k(group: Arc<FiniteGroupTable>, level: u32) -> Result<MinimalResolution> {
    MinimalResolution::new(Arc::new(GroupAlgebra::with_ring(group, GaloisRing::new(level, 1)?)?))
}

/// Smith data of `rho(sigma) - 1`: unit, non-unit nonzero, and zero elementary divisors.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct DivisorCounts {
    pub units: usize,
    pub non_units: usize,
    pub zeros: usize,
}

/// Eigenlattice splitting of a central involution, one 2-adic digit below the input level.
#[derive(Clone, Debug)]
pub struct SigmaSplit {
    pub plus: GModule,
    pub minus: GModule,
    pub quotient: GModule,
    /// `M -> M^-`, at the output level.
    pub projection: GrMat,
    pub plus_basis: GrMat,
    pub minus_basis: GrMat,
    pub divisors: DivisorCounts,
}

impl SigmaSplit {
    pub fn level(&self) -> u32 {
        self.quotient.ring().level()
    }
}

/// `M_+ = ker(sigma - 1)`, `M_- = ker(sigma + 1)` and `M^- = M/M_+`, all saturated.
///
/// Saturation is decided at the input level `K >= 2` (elementary divisors of
/// `sigma - 1` over `Z_2` are 0, 1 or 2, which stay distinct mod 4) and the results are
/// returned at level `K - 1`, where they agree with the reduction of the lattices.
pub fn sigma_split(module: &GModule, sigma: usize) -> Result<SigmaSplit> {
    let r = module.ring();
    if r.level() < 2 {
        return Err(Error::Precision(
            "sigma_split needs one 2-adic digit beyond the output level".into(),
        ));
    }
    let n = module.rank();
    let id = GrMat::identity(r, n);
    let s = module.matrix(sigma);
    if r.mat_mul(s, s) != id {
        return Err(Error::Domain(format!(
            "{} does not act as an involution",
            module.group().label(sigma)
        )));
    }
    let out = r.at_level(r.level() - 1)?;
    let low = module.reduce(&out)?;
    let saturated = |x: &GrMat| -> Result<(GrMat, DivisorCounts)> {
        let sm = smith(r, x);
        let vals = sm.valuations(r);
        let counts = DivisorCounts {
            units: vals[..sm.rank].iter().filter(|&&v| v == 0).count(),
            non_units: vals[..sm.rank].iter().filter(|&&v| v > 0).count(),
            zeros: n - sm.rank,
        };
        let idx: Vec<usize> = (sm.rank..n).collect();
        Ok((out.reduce_mat(r, &sm.v.select_cols(&idx)), counts))
    };
    let (plus_basis, divisors) = saturated(&r.mat_sub(s, &id))?;
    let (minus_basis, _) = saturated(&r.mat_add(s, &id))?;
    let name = module.label();
    let (plus, _) = low.submodule(&plus_basis, &format!("{name}+"))?;
    let (minus, _) = low.submodule(&minus_basis, &format!("{name}-"))?;
    let (quotient, projection, _) = low.quotient(&plus_basis, &format!("{name}^-"))?;
    let neg = out.mat_scale(&GrMat::identity(&out, quotient.rank()), &out.from_int(-1));
    if quotient.matrix(sigma) != &neg {
        return Err(Error::Integrity("sigma does not act as -1 on the quotient".into()));
    }
    if plus.rank() + quotient.rank() != n {
        return Err(Error::Integrity("ranks of the splitting do not add up".into()));
    }
    Ok(SigmaSplit {
        plus,
        minus,
        quotient,
        projection,
        plus_basis,
        minus_basis,
        divisors,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(name: &str, lhs: i64, rhs: i64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            holds: lhs == rhs,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub group: String,
    pub level: u32,
    pub ring: String,
    pub d_g: usize,
    pub omega_dim_modp: usize,
    pub omega_rank: usize,
    pub omega_plus_rank: usize,
    pub omega_minus_sub_rank: usize,
    pub omega_minus_rank: usize,
    pub divisors: DivisorCounts,
    pub checks: Vec<IdentityCheck>,
    pub skipped: Vec<String>,
}

impl RankReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Ranks of `Omega`, `Omega_+`, `Omega^-` at level `k` and the identities relating them.
pub fn rank_identities_check(group: Arc<FiniteGroupTable>, level: u32) -> Result<RankReport> {
    let sigma = group
        .sigma()
        .ok_or_else(|| Error::Domain(format!("{} has no central involution", group.name())))?;
    let modp = omega2_modp(group.clone())?;
    let res = omega2_z2k(group.clone(), level + 1)?;
    let split = sigma_split(res.omega(), sigma)?;
    let analysis = subgroup_analysis(&group)?;
    let n = group.order() as i64;
    let d = analysis.d_g as i64;
    let (om, minus) = (res.omega().rank() as i64, split.quotient.rank() as i64);
    let mut checks = vec![
        IdentityCheck::new("rank Omega = dim Omega_2(G,F)", om, modp.omega().rank() as i64),
        IdentityCheck::new("2 rank Omega^- = rank Omega - 1", 2 * minus, om - 1),
        IdentityCheck::new(
            "rank Omega_+ = rank Omega_-  + 1",
            split.plus.rank() as i64,
            split.minus.rank() as i64 + 1,
        ),
        IdentityCheck::new("free Z[<sigma>] summands = rank Omega^-", split.divisors.units as i64, minus),
        IdentityCheck::new("sign summands of Res Omega", split.divisors.non_units as i64, 0),
    ];
    let mut skipped = Vec::new();
    if n.count_ones() == 1 {
        checks.push(IdentityCheck::new("rank Omega = (d_G - 1)|G| + 1", om, (d - 1) * n + 1));
        checks.push(IdentityCheck::new("rank Omega^- = (d_G - 1)|G|/2", minus, (d - 1) * n / 2));
    } else {
        skipped.push("2-group formulas: G is not a 2-group".into());
    }
    if analysis.frattini.contains(&sigma) {
        let q = group.quotient(&[group.identity(), sigma], &format!("{}/<sigma>", group.name()))?;
        let bar = omega2_modp(Arc::new(q.group))?;
        checks.push(IdentityCheck::new(
            "2(dim Omega_2(G/<sigma>,F) - 1) = dim Omega_2(G,F) - 1",
            2 * (bar.omega().rank() as i64 - 1),
            modp.omega().rank() as i64 - 1,
        ));
    } else {
        skipped.push("quotient identity: sigma is not in the Frattini subgroup".into());
    }
    let f2 = MinimalResolution::new(Arc::new(GroupAlgebra::with_ring(group.clone(), GaloisRing::new(1, 1)?)?))?;
    let falg = f2.algebra();
    let reduced = res.omega().reduce(falg.ring())?;
    let same_layers = falg.loewy_series(&reduced)? == falg.loewy_series(f2.omega())?;
    checks.push(IdentityCheck::new(
        "reduction mod 2 has the Loewy layers of Omega_2(G,F_2)",
        same_layers as i64,
        1,
    ));
    Ok(RankReport {
        group: group.name().into(),
        level,
        ring: split.quotient.ring().to_string(),
        d_g: analysis.d_g,
        omega_dim_modp: modp.omega().rank(),
        omega_rank: om as usize,
        omega_plus_rank: split.plus.rank(),
        omega_minus_sub_rank: split.minus.rank(),
        omega_minus_rank: minus as usize,
        divisors: split.divisors,
        checks,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{c3_semidirect_v4, cyclic, quaternion};

    #[test]
    fn radical_of_c3_v4() {
        let alg = GroupAlgebra::new(Arc::new(c3_semidirect_v4().unwrap()), 1).unwrap();
        assert_eq!(alg.ring().to_string(), "F_4");
        let j = alg.radical().unwrap();
        assert_eq!(j.dim, 9);
        assert_eq!(j.quotient_dim, 3);
        assert_eq!(*j.power_dims.last().unwrap(), 0);
    }

    #[test]
    fn two_group_radical_is_augmentation() {
        let alg = GroupAlgebra::new(Arc::new(quaternion(8).unwrap()), 1).unwrap();
        assert_eq!(alg.radical().unwrap().dim, 7);
        assert_eq!(alg.simple_count(), 1);
    }

    #[test]
    fn orbit_simples_over_the_prime_field() {
        let alg = GroupAlgebra::with_ring(Arc::new(c3_semidirect_v4().unwrap()), GaloisRing::new(1, 1).unwrap()).unwrap();
        assert_eq!(alg.simple_labels(), ["F", "S12"]);
        assert_eq!(alg.simple_dims(), [1, 2]);
        assert_eq!(alg.simple(1).rank(), 2);
        let p = alg.projective_cover(1).unwrap();
        let layers: Vec<String> = alg.loewy_series(&p).unwrap().iter().map(|l| l.to_string()).collect();
        assert_eq!(layers, ["S12", "2F+S12", "S12"]);
    }

    #[test]
    fn idempotents_lift_mod_8() {
        let alg = GroupAlgebra::new(Arc::new(c3_semidirect_v4().unwrap()), 3).unwrap();
        let r = alg.ring();
        let mut sum = vec![r.zero(); alg.dim()];
        for i in 0..3 {
            let e = alg.idempotent(i);
            assert_eq!(alg.mul(e, e), e.to_vec());
            sum = r.vec_add(&sum, e);
        }
        assert_eq!(alg.mul(&sum, &sum), sum);
    }

    #[test]
    fn cyclic_four_is_periodic() {
        let res = omega2_modp(Arc::new(cyclic(4).unwrap())).unwrap();
        assert_eq!(res.omega().rank(), 1);
        let g = res.omega().group().clone();
        assert!((0..4).all(|a| res.omega().matrix(a) == &GrMat::identity(res.omega().ring(), 1)));
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn quaternion_rank() {
        let res = omega2_z2k(Arc::new(quaternion(8).unwrap()), 3).unwrap();
        assert_eq!(res.omega().rank(), 9);
        let split = sigma_split(res.omega(), res.omega().group().sigma().unwrap()).unwrap();
        assert_eq!(split.quotient.rank(), 4);
        assert_eq!(split.level(), 2);
    }

    #[test]
    fn module_json_round_trip() {
        let res = omega2_modp(Arc::new(c3_semidirect_v4().unwrap())).unwrap();
        let m = res.omega();
        let back = GModule::from_json(&m.to_json(), m.group().clone()).unwrap();
        assert_eq!(&back, m);
    }
}

/// One trivial-quotient hyperplane `U = ker phi` of `Omega_2(G/<sigma>, F)` whose pushout class
/// matches the central extension `G -> G/<sigma>` up to a scalar.
#[derive(Clone, Debug)]
pub struct OmegaCircCandidate {
    pub functional: Vec<Gr>,
    pub scalar: Gr,
    pub module: GModule,
    pub embedding: Embedding,
    pub composition_factors: BTreeMap<String, usize>,
}

#[derive(Clone, Debug)]
pub struct OmegaCirc {
    pub quotient: Arc<FiniteGroupTable>,
    pub projection: Vec<usize>,
    pub omega_dim: usize,
    pub hyperplanes: usize,
    pub candidates: Vec<OmegaCircCandidate>,
}

impl OmegaCirc {
    pub fn module(&self) -> &GModule {
        &self.candidates[0].module
    }

    pub fn to_json(&self) -> Value {
        let r = self.module().ring();
        json!({
            "quotient": self.quotient.name(),
            "omega_dim": self.omega_dim,
            "trivial_quotient_hyperplanes": self.hyperplanes,
            "candidates": self.candidates.iter().map(|c| json!({
                "functional": c.functional.iter().map(|x| r.to_json(x)).collect::<Vec<_>>(),
                "scalar": r.to_json(&c.scalar),
                "dim": c.module.rank(),
                "composition_factors": c.composition_factors,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `Omega_2(G/<sigma>, F)^circ` over the splitting field of `G/<sigma>`.
pub fn omega_circ(group: Arc<FiniteGroupTable>, sigma: usize) -> Result<OmegaCirc> {
    let a = subgroup_analysis(&group)?;
    if !a.frattini.contains(&sigma) {
        return Err(Error::Domain(format!("{}: sigma is not in the Frattini subgroup", group.name())));
    }
    let q = group.quotient(&[group.identity(), sigma], &format!("{}/<s>", group.name()))?;
    let gbar = Arc::new(q.group);
    let res = omega2_modp(gbar.clone())?;
    let f = res.algebra().ring().clone();
    let omega = res.omega();
    let n = omega.rank();
    let c = crate::ext::comparison_cocycle(&res)?;
    let trivial = GModule::trivial(&f, gbar.clone(), 1);

    let m = gbar.order();
    let xi: Vec<Vec<Gr>> = (0..m * m)
        .map(|i| {
            let (x, y) = (i / m, i % m);
            let lhs = group.mul(q.section[x], q.section[y]);
            vec![if lhs == q.section[gbar.mul(x, y)] { f.zero() } else { f.one() }]
        })
        .collect();
    let xi = crate::ext::TwoCocycle::new(trivial.clone(), xi)?;

    // invariant functionals: phi (rho(s) - 1) = 0
    let mut stacked = GrMat::zeros(n, 0);
    for &s in gbar.generators() {
        stacked = stacked.hstack(&f.mat_sub(omega.matrix(s), &GrMat::identity(&f, n)));
    }
    let invariant = split_kernel(&f, &stacked.transpose())?;
    let d = invariant.cols;
    let q_size = f.cardinality();
    let mut hyperplanes = 0;
    let mut candidates = Vec::new();
    for code in 1..q_size.pow(d as u32) {
        let coeffs: Vec<Gr> = (0..d).map(|i| f.from_index(code / q_size.pow(i as u32) % q_size)).collect();
        let lead = coeffs.iter().find(|x| !f.is_zero(x)).unwrap();
        if *lead != f.one() {
            continue;
        }
        hyperplanes += 1;
        let phi = f.mat_vec(&invariant, &coeffs);
        let row = GrMat::from_rows(std::slice::from_ref(&phi));
        let pushed = c.push_forward(&trivial, &row)?;
        for code in 1..q_size {
            let lambda = f.from_index(code);
            if !crate::ext::cocycle_is_coboundary(&pushed.sub(&xi.scale(&lambda)))?.is_coboundary {
                continue;
            }
            let kernel = split_kernel(&f, &row)?;
            let (module, embedding) = omega.submodule(&kernel, "Omega_circ")?;
            let layers = res.algebra().loewy_series(&module)?;
            candidates.push(OmegaCircCandidate {
                functional: phi.clone(),
                scalar: lambda,
                composition_factors: composition_factors(&layers),
                module,
                embedding,
            });
        }
    }
    if candidates.is_empty() {
        return Err(Error::Integrity(format!(
            "{}: no hyperplane of Omega_2 matches the central extension",
            group.name()
        )));
    }
    Ok(OmegaCirc {
        quotient: gbar,
        projection: q.projection,
        omega_dim: n,
        hyperplanes,
        candidates,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointCase {
    pub subgroup: Vec<String>,
    pub free_rank: usize,
    pub log2_size: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointReport {
    pub group: String,
    pub holds: bool,
    pub omega_circ: Value,
    pub cases: Vec<FixedPointCase>,
}

/// `(Omega_2(G/<sigma>, F)^circ)^H = 0` for every nontrivial odd-order `H <= G`, for every
/// matching hyperplane.
pub fn fixed_point_property_check(group: Arc<FiniteGroupTable>) -> Result<FixedPointReport> {
    let sigma = group
        .sigma()
        .ok_or_else(|| Error::Domain(format!("{} has no central involution", group.name())))?;
    let oc = omega_circ(group.clone(), sigma)?;
    let a = subgroup_analysis(&group)?;
    let mut cases = Vec::new();
    let mut holds = true;
    for h in a.odd_subgroups.iter().filter(|h| h.len() > 1) {
        let image: Vec<usize> = h.iter().map(|&x| oc.projection[x]).collect();
        for c in &oc.candidates {
            let fp = c.module.fixed_points(&image)?;
            holds &= fp.is_trivial();
            cases.push(FixedPointCase {
                subgroup: h.iter().map(|&x| group.label(x).to_string()).collect(),
                free_rank: fp.free_rank,
                log2_size: fp.log2_size,
            });
        }
    }
    Ok(FixedPointReport {
        group: group.name().into(),
        holds,
        omega_circ: oc.to_json(),
        cases,
    })
}
