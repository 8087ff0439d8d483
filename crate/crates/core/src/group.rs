//! Finite groups as verified multiplication tables, named constructors, and brute-force
//! subgroup analysis for orders up to 64.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::HashMap;
use std::hash::Hash;

/// Subgroup enumeration works on bitmasks, so it is limited to 64 elements.
pub const SUBGROUP_CAP: usize = 64;
pub const ORDER_CAP: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroupTable {
    name: String,
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    sigma: Option<usize>,
    labels: Vec<String>,
}

impl FiniteGroupTable {
    /// Closes `gens` under `mul` and records the table. Element 0 is the identity and
    /// elements appear in breadth-first order over right multiplication by generators.
    pub fn from_generators<T, F>(name: &str, identity: T, gens: &[T], mul: F, label: impl Fn(&T) -> String) -> Result<Self>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut head = 0;
        while head < elems.len() {
            let a = elems[head].clone();
            head += 1;
            for g in gens {
                let b = mul(&a, g);
                if !index.contains_key(&b) {
                    if elems.len() >= ORDER_CAP {
                        return Err(Error::CapExceeded {
                            order: elems.len() + 1,
                            cap: ORDER_CAP,
                        });
                    }
                    index.insert(b.clone(), elems.len());
                    elems.push(b);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let c = mul(a, b);
                let &k = index
                    .get(&c)
                    .ok_or_else(|| Error::Construction("generated set is not closed".into()))?;
                table[i * n + j] = k as u32;
            }
        }
        let generators = gens.iter().map(|g| index[g]).collect();
        let labels = elems.iter().map(label).collect();
        Self::from_table(name, n, table, generators, labels)
    }

    /// Verifies a row-major table with identity at a single index.
    pub fn from_table(name: &str, order: usize, table: Vec<u32>, generators: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        if order == 0 || table.len() != order * order || labels.len() != order {
            return Err(Error::Construction("table shape does not match order".into()));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(Error::Construction("table entry out of range".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e * order + a] as usize == a && table[a * order + e] as usize == a))
            .ok_or_else(|| Error::Construction("no identity element".into()))?;
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| table[a * order + b] as usize == identity)
                .ok_or_else(|| Error::Construction(format!("element {a} has no right inverse")))?;
            if table[b * order + a] as usize != identity {
                return Err(Error::Construction(format!("element {a} has no two-sided inverse")));
            }
            inverse[a] = b;
        }
        let mut g = Self {
            name: name.into(),
            order,
            table,
            identity,
            inverse,
            generators,
            sigma: None,
            labels,
        };
        g.check_associative()?;
        if g.closure(&g.generators.clone()).len() != order {
            return Err(Error::Construction("generators do not generate the group".into()));
        }
        g.sigma = g.unique_involution();
        Ok(g)
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        // Elements satisfying (xg)y = x(gy) for all x, y form a submagma, so checking
        // generators suffices; small groups are checked on every triple anyway.
        let middle: Vec<usize> = if n <= SUBGROUP_CAP {
            (0..n).collect()
        } else {
            self.generators.clone()
        };
        for &g in &middle {
            for x in 0..n {
                let xg = self.mul(x, g);
                for y in 0..n {
                    if self.mul(xg, y) != self.mul(x, self.mul(g, y)) {
                        return Err(Error::Construction(format!("not associative at ({x},{g},{y})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// The recorded central involution.
    pub fn sigma(&self) -> Option<usize> {
        self.sigma
    }

    pub fn with_sigma(mut self, sigma: Option<usize>) -> Result<Self> {
        if let Some(s) = sigma {
            if s >= self.order || s == self.identity || self.mul(s, s) != self.identity || !self.is_central(s) {
                return Err(Error::Domain(format!("element {s} is not a central involution")));
            }
        }
        self.sigma = sigma;
        Ok(self)
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, n: u64) -> usize {
        (0..n).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn conjugate(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_central(&self, a: usize) -> bool {
        (0..self.order).all(|b| self.commute(a, b))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| self.generators.iter().all(|&b| self.commute(a, b)))
    }

    pub fn involutions(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&a| a != self.identity && self.mul(a, a) == self.identity)
            .collect()
    }

    pub fn unique_involution(&self) -> Option<usize> {
        match self.involutions().as_slice() {
            [s] => Some(*s),
            _ => None,
        }
    }

    /// Elements of the subgroup generated by `gens`, in breadth-first order.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        let mut out = vec![self.identity];
        seen[self.identity] = true;
        let mut head = 0;
        while head < out.len() {
            let a = out[head];
            head += 1;
            for &g in gens {
                let b = self.mul(a, g);
                if !seen[b] {
                    seen[b] = true;
                    out.push(b);
                }
            }
        }
        out
    }

    pub fn closure_mask(&self, gens: &[usize]) -> Result<u64> {
        self.require_mask()?;
        Ok(self.closure(gens).iter().fold(0u64, |m, &a| m | 1 << a))
    }

    fn require_mask(&self) -> Result<()> {
        if self.order > SUBGROUP_CAP {
            return Err(Error::CapExceeded {
                order: self.order,
                cap: SUBGROUP_CAP,
            });
        }
        Ok(())
    }

    pub fn is_normal_mask(&self, h: u64) -> bool {
        mask_elements(h).all(|a| (0..self.order).all(|g| h >> self.conjugate(g, a) & 1 == 1))
    }

    /// Quotient by a normal subgroup, with the projection and a section (smallest index
    /// in each coset).
    pub fn quotient(&self, normal: &[usize], name: &str) -> Result<Quotient> {
        let n = self.order;
        let mut in_n = vec![false; n];
        for &a in normal {
            in_n[a] = true;
        }
        let closed = normal.iter().all(|&a| normal.iter().all(|&b| in_n[self.mul(a, b)]));
        let conj = normal.iter().all(|&a| (0..n).all(|g| in_n[self.conjugate(g, a)]));
        if !in_n[self.identity] || !closed || !conj {
            return Err(Error::Domain("quotient by a subset that is not a normal subgroup".into()));
        }
        let mut projection = vec![usize::MAX; n];
        let mut section = Vec::new();
        for g in 0..n {
            if projection[g] != usize::MAX {
                continue;
            }
            let c = section.len();
            section.push(g);
            for &a in normal {
                projection[self.mul(g, a)] = c;
            }
        }
        let m = section.len();
        let mut table = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                table[i * m + j] = projection[self.mul(section[i], section[j])] as u32;
            }
        }
        let mut gens: Vec<usize> = self.generators.iter().map(|&g| projection[g]).filter(|&c| c != 0).collect();
        gens.dedup();
        if gens.is_empty() {
            gens.push(0);
        }
        let labels = section.iter().map(|&g| format!("[{}]", self.labels[g])).collect();
        let group = FiniteGroupTable::from_table(name, m, table, gens, labels)?;
        Ok(Quotient {
            group,
            projection,
            section,
        })
    }

    pub fn to_json(&self) -> Value {
        let n = self.order;
        let rows: Vec<Vec<u32>> = (0..n).map(|i| self.table[i * n..(i + 1) * n].to_vec()).collect();
        json!({
            "name": self.name,
            "order": n,
            "table": rows,
            "generators": self.generators,
            "sigma": self.sigma,
            "labels": self.labels,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Construction(format!("group JSON: {what}"));
        let name = v.get("name").and_then(Value::as_str).unwrap_or("custom");
        let rows = v.get("table").and_then(Value::as_array).ok_or_else(|| bad("missing table"))?;
        let n = rows.len();
        let mut table = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_array().ok_or_else(|| bad("table rows must be arrays"))?;
            if r.len() != n {
                return Err(bad("table is not square"));
            }
            for x in r {
                table.push(x.as_u64().ok_or_else(|| bad("entries must be indices"))? as u32);
            }
        }
        let generators = match v.get("generators").and_then(Value::as_array) {
            Some(g) => g
                .iter()
                .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad("generator")))
                .collect::<Result<_>>()?,
            None => (0..n).collect(),
        };
        let labels = match v.get("labels").and_then(Value::as_array) {
            Some(l) => l.iter().map(|x| x.as_str().unwrap_or("?").to_string()).collect(),
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        let g = Self::from_table(name, n, table, generators, labels)?;
        match v.get("sigma").and_then(Value::as_u64) {
            Some(s) => g.with_sigma(Some(s as usize)),
            None => Ok(g),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroupTable,
    pub projection: Vec<usize>,
    pub section: Vec<usize>,
}

pub fn mask_elements(m: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| m >> i & 1 == 1)
}

pub fn cyclic(n: usize) -> Result<FiniteGroupTable> {
    if n == 0 {
        return Err(Error::Construction("cyclic group of order 0".into()));
    }
    let gens = if n == 1 { vec![0usize] } else { vec![1usize] };
    let g = FiniteGroupTable::from_generators(&format!("C{n}"), 0usize, &gens, |a, b| (a + b) % n, |a| format!("g^{a}"))?;
    let sigma = n.is_multiple_of(2).then_some(n / 2);
    g.with_sigma(sigma)
}

pub fn klein4() -> Result<FiniteGroupTable> {
    FiniteGroupTable::from_generators(
        "V4",
        (0u8, 0u8),
        &[(1, 0), (0, 1)],
        |a, b| (a.0 ^ b.0, a.1 ^ b.1),
        |a| format!("({},{})", a.0, a.1),
    )
}

/// Generalized quaternion group of order `2^n`, `<x, y | x^(2^(n-1)) = y^4 = 1, y x y^-1 = x^-1>`.
pub fn quaternion(order: usize) -> Result<FiniteGroupTable> {
    if order < 8 || !order.is_power_of_two() {
        return Err(Error::Construction(format!(
            "quaternion group of order {order}: need 2^n with n >= 3"
        )));
    }
    let m = order / 2;
    let h = m / 2;
    // x^a y^b with a < m, b < 2, and y^2 = x^h.
    let mul = move |p: &(usize, usize), q: &(usize, usize)| {
        let c = if p.1 == 1 { (m - q.0) % m } else { q.0 };
        let extra = if p.1 == 1 && q.1 == 1 { h } else { 0 };
        ((p.0 + c + extra) % m, (p.1 + q.1) % 2)
    };
    let label = |p: &(usize, usize)| match *p {
        (0, 0) => "1".to_string(),
        (a, 0) => format!("x^{a}"),
        (0, 1) => "y".to_string(),
        (a, 1) => format!("x^{a}y"),
        _ => unreachable!(),
    };
    let g = FiniteGroupTable::from_generators(&format!("Q{order}"), (0, 0), &[(1, 0), (0, 1)], mul, label)?;
    let sigma = g.labels().iter().position(|l| *l == format!("x^{h}"));
    if sigma != g.unique_involution() {
        return Err(Error::Construction("quaternion presentation lost its unique involution".into()));
    }
    g.with_sigma(sigma)
}

type M2 = [[u8; 2]; 2];

/// `SL_2(F_3)`, generated by an elementary matrix and the rotation of order 4.
pub fn sl2_3() -> Result<FiniteGroupTable> {
    let mul = |a: &M2, b: &M2| {
        let mut c = [[0u8; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = ((a[i][0] as u16 * b[0][j] as u16 + a[i][1] as u16 * b[1][j] as u16) % 3) as u8;
            }
        }
        c
    };
    let label = |a: &M2| format!("[{}{};{}{}]", a[0][0], a[0][1], a[1][0], a[1][1]);
    let g = FiniteGroupTable::from_generators("SL2(3)", [[1, 0], [0, 1]], &[[[1, 1], [0, 1]], [[0, 2], [1, 0]]], mul, label)?;
    let s = g.unique_involution();
    g.with_sigma(s)
}

/// `C_3 ⋉ V_4` realized as the alternating group on four points.
pub fn c3_semidirect_v4() -> Result<FiniteGroupTable> {
    let mul = |a: &[u8; 4], b: &[u8; 4]| {
        let mut c = [0u8; 4];
        for i in 0..4 {
            c[i] = a[b[i] as usize];
        }
        c
    };
    let label = |p: &[u8; 4]| format!("{}{}{}{}", p[0], p[1], p[2], p[3]);
    FiniteGroupTable::from_generators("C3xV4", [0, 1, 2, 3], &[[1, 2, 0, 3], [1, 0, 3, 2]], mul, label)
}

pub fn direct_product(a: &FiniteGroupTable, b: &FiniteGroupTable) -> Result<FiniteGroupTable> {
    let mut gens: Vec<(usize, usize)> = a.generators.iter().map(|&g| (g, b.identity)).collect();
    gens.extend(b.generators.iter().map(|&h| (a.identity, h)));
    FiniteGroupTable::from_generators(
        &format!("{}x{}", a.name, b.name),
        (a.identity, b.identity),
        &gens,
        |p, q| (a.mul(p.0, q.0), b.mul(p.1, q.1)),
        |p| format!("({},{})", a.label(p.0), b.label(p.1)),
    )
}

/// `N ⋊ H` where `action[h]` is the permutation of `N` given by conjugation by `h`.
pub fn semidirect(n: &FiniteGroupTable, h: &FiniteGroupTable, action: &[Vec<usize>]) -> Result<FiniteGroupTable> {
    if action.len() != h.order || action.iter().any(|p| p.len() != n.order) {
        return Err(Error::Construction("action data has the wrong shape".into()));
    }
    for (x, p) in action.iter().enumerate() {
        for a in 0..n.order {
            for b in 0..n.order {
                if p[n.mul(a, b)] != n.mul(p[a], p[b]) {
                    return Err(Error::Construction(format!("action of {x} is not an endomorphism")));
                }
            }
        }
        for y in 0..h.order {
            let xy = h.mul(x, y);
            if (0..n.order).any(|a| action[xy][a] != p[action[y][a]]) {
                return Err(Error::Construction("action is not a homomorphism".into()));
            }
        }
    }
    let mut gens: Vec<(usize, usize)> = n.generators.iter().map(|&g| (g, h.identity)).collect();
    gens.extend(h.generators.iter().map(|&y| (n.identity, y)));
    FiniteGroupTable::from_generators(
        &format!("{}:{}", n.name, h.name),
        (n.identity, h.identity),
        &gens,
        |p, q| (n.mul(p.0, action[p.1][q.0]), h.mul(p.1, q.1)),
        |p| format!("({},{})", n.label(p.0), h.label(p.1)),
    )
}

/// Named constructors: `q8`, `q16`, `quaternion(32)`, `c4`, `cyclic(6)`, `klein4`, `sl2_3`,
/// `c3_semidirect_v4`.
pub fn named(spec: &str) -> Result<FiniteGroupTable> {
    let s = spec.trim().to_ascii_lowercase().replace([' ', '_', '-'], "");
    let arg = |prefix: &str| -> Option<usize> {
        let rest = s.strip_prefix(prefix)?;
        let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
        rest.parse().ok()
    };
    if let Some(n) = arg("quaternion").or_else(|| arg("q")) {
        return quaternion(n);
    }
    if let Some(n) = arg("cyclic").or_else(|| arg("c")) {
        return cyclic(n);
    }
    match s.as_str() {
        "klein4" | "v4" => klein4(),
        "sl23" | "sl2(3)" => sl2_3(),
        "c3semidirectv4" | "c3xv4" | "a4" => c3_semidirect_v4(),
        _ => Err(Error::Construction(format!("unknown group '{spec}'"))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubgroupAnalysis {
    pub order: usize,
    pub subgroup_count: usize,
    pub sylow2: Vec<usize>,
    pub sylow2_normal: bool,
    pub sylow2_cyclic: bool,
    pub o2: Vec<usize>,
    pub o2prime: Vec<usize>,
    pub odd_subgroups: Vec<Vec<usize>>,
    pub odd_subgroups_abelian: bool,
    pub frattini: Vec<usize>,
    pub d_g: usize,
    pub unique_involution: Option<usize>,
    pub sl2_like: bool,
}

fn mask_list(m: u64) -> Vec<usize> {
    mask_elements(m).collect()
}

/// All subgroups as bitmasks.
pub fn subgroups(g: &FiniteGroupTable) -> Result<Vec<u64>> {
    g.require_mask()?;
    let cyclics: Vec<u64> = (0..g.order).map(|a| g.closure_mask(&[a])).collect::<Result<_>>()?;
    let mut all: Vec<u64> = cyclics.clone();
    all.sort_unstable();
    all.dedup();
    let mut head = 0;
    while head < all.len() {
        let h = all[head];
        head += 1;
        for &c in &cyclics {
            if h | c == h {
                continue;
            }
            let gens: Vec<usize> = mask_list(h | c);
            let k = g.closure_mask(&gens)?;
            if !all.contains(&k) {
                all.push(k);
            }
        }
    }
    all.sort_by_key(|m| (m.count_ones(), *m));
    Ok(all)
}

/// Size of a smallest generating set, by exhaustive search.
pub fn min_generators(g: &FiniteGroupTable) -> usize {
    let n = g.order;
    if n == 1 {
        return 0;
    }
    (1..=n)
        .find(|&d| {
            let mut tuple: Vec<usize> = (0..d).collect();
            loop {
                if g.closure(&tuple).len() == n {
                    return true;
                }
                if !next_combination(&mut tuple, n) {
                    return false;
                }
            }
        })
        .expect("the whole group generates itself")
}

fn next_combination(t: &mut [usize], n: usize) -> bool {
    let d = t.len();
    for i in (0..d).rev() {
        if t[i] < n - d + i {
            t[i] += 1;
            for j in i + 1..d {
                t[j] = t[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn subgroup_analysis(g: &FiniteGroupTable) -> Result<SubgroupAnalysis> {
    let subs = subgroups(g)?;
    let n = g.order;
    let two_part = 1usize << n.trailing_zeros();
    let sylows: Vec<u64> = subs.iter().copied().filter(|m| m.count_ones() as usize == two_part).collect();
    let sylow2 = sylows[0];
    let o2 = sylows.iter().fold(u64::MAX, |a, &b| a & b);
    let odd: Vec<u64> = subs.iter().copied().filter(|m| m.count_ones() % 2 == 1).collect();
    let o2prime = odd
        .iter()
        .copied()
        .filter(|&m| g.is_normal_mask(m))
        .max_by_key(|m| m.count_ones())
        .unwrap_or(1 << g.identity);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let maximal: Vec<u64> = subs
        .iter()
        .copied()
        .filter(|&m| m != full && !subs.iter().any(|&k| k != m && k != full && k & m == m))
        .collect();
    let frattini = maximal.iter().fold(full, |a, &b| a & b);
    let abelian = |m: u64| mask_elements(m).all(|a| mask_elements(m).all(|b| g.commute(a, b)));
    let sylow2_cyclic = mask_elements(sylow2).any(|a| g.element_order(a) == two_part);
    let odd_subgroups_abelian = odd.iter().all(|&m| abelian(m));
    let unique_involution = g.unique_involution();
    Ok(SubgroupAnalysis {
        order: n,
        subgroup_count: subs.len(),
        sylow2: mask_list(sylow2),
        sylow2_normal: sylows.len() == 1,
        sylow2_cyclic,
        o2: mask_list(o2),
        o2prime: mask_list(o2prime),
        odd_subgroups: odd.iter().map(|&m| mask_list(m)).collect(),
        odd_subgroups_abelian,
        frattini: mask_list(frattini),
        d_g: min_generators(g),
        unique_involution,
        sl2_like: odd_subgroups_abelian && unique_involution.is_some() && !sylow2_cyclic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_groups() {
        for n in [8, 16, 32] {
            let g = quaternion(n).unwrap();
            assert_eq!(g.order(), n);
            let s = g.sigma().unwrap();
            assert!(g.is_central(s));
            assert_eq!(g.label(s), format!("x^{}", n / 4));
        }
        assert!(quaternion(12).is_err());
    }

    #[test]
    fn sl2_3_structure() {
        let g = sl2_3().unwrap();
        assert_eq!(g.order(), 24);
        let a = subgroup_analysis(&g).unwrap();
        assert!(a.sylow2_normal);
        assert_eq!(a.o2.len(), 8);
        assert!(a.sl2_like);
        assert!(a.odd_subgroups.iter().all(|h| h.len() == 1 || h.len() == 3));
        assert_eq!(a.subgroup_count, 15);
        assert_eq!(a.d_g, 2);
        assert_eq!(a.frattini.len(), 2);
    }

    #[test]
    fn small_analyses() {
        let q8 = subgroup_analysis(&quaternion(8).unwrap()).unwrap();
        assert!(q8.sl2_like);
        assert_eq!(q8.d_g, 2);
        assert_eq!(q8.odd_subgroups.len(), 1);
        let c4g = cyclic(4).unwrap();
        assert_eq!(c4g.label(c4g.sigma().unwrap()), "g^2");
        let c4 = subgroup_analysis(&c4g).unwrap();
        assert!(!c4.sl2_like);
        assert_eq!(c4.d_g, 1);
        let a4 = subgroup_analysis(&c3_semidirect_v4().unwrap()).unwrap();
        assert_eq!(a4.o2.len(), 4);
        assert_eq!(a4.unique_involution, None);
    }

    #[test]
    fn quotient_of_sl2_3() {
        let g = sl2_3().unwrap();
        let s = g.sigma().unwrap();
        let q = g.quotient(&[g.identity(), s], "PSL2(3)").unwrap();
        assert_eq!(q.group.order(), 12);
        assert_eq!(q.group.involutions().len(), 3);
    }

    #[test]
    fn products_and_json() {
        let c6 = direct_product(&cyclic(2).unwrap(), &cyclic(3).unwrap()).unwrap();
        assert_eq!(c6.order(), 6);
        assert!(c6.is_abelian());
        let v4 = klein4().unwrap();
        let c3 = cyclic(3).unwrap();
        // generator of C3 permutes the three involutions of V4
        let rot = |x: usize| -> usize { [0, 2, 3, 1][x] };
        let perm = |k: usize| -> Vec<usize> { (0..4).map(|a| (0..k).fold(a, |b, _| rot(b))).collect() };
        let lab: Vec<&str> = c3.labels().iter().map(String::as_str).collect();
        let action: Vec<Vec<usize>> = lab.iter().map(|l| perm(l[2..].parse().unwrap())).collect();
        let a4 = semidirect(&v4, &c3, &action).unwrap();
        assert_eq!(a4.order(), 12);
        assert_eq!(a4.involutions().len(), 3);
        let back = FiniteGroupTable::from_json(&a4.to_json()).unwrap();
        assert_eq!(back, a4);
        assert!(named("q16").is_ok() && named("cyclic(6)").is_ok() && named("sl2_3").is_ok());
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn groups() -> &'static [FiniteGroupTable] {
        static G: OnceLock<Vec<FiniteGroupTable>> = OnceLock::new();
        G.get_or_init(|| {
            ["q8", "quaternion(32)", "sl2_3", "c3_semidirect_v4", "cyclic(6)"]
                .iter()
                .map(|s| named(s).unwrap())
                .collect()
        })
    }

    proptest! {
        #[test]
        fn table_is_a_group(i in 0usize..5, a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
            let g = &groups()[i];
            let (a, b, c) = (a % g.order(), b % g.order(), c % g.order());
            prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
            prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
            prop_assert_eq!(g.pow(a, g.element_order(a) as u64), g.identity());
            if let Some(s) = g.sigma() {
                prop_assert!(g.commute(s, a));
            }
        }

        #[test]
        fn central_quotient_projects_homomorphically(i in 0usize..3, a in any::<usize>(), b in any::<usize>()) {
            let g = &groups()[i];
            let q = g.quotient(&[g.identity(), g.sigma().unwrap()], "Gbar").unwrap();
            let (a, b) = (a % g.order(), b % g.order());
            let p = &q.projection;
            prop_assert_eq!(p[g.mul(a, b)], q.group.mul(p[a], p[b]));
            prop_assert_eq!(p[q.section[p[a]]], p[a]);
        }
    }
}
