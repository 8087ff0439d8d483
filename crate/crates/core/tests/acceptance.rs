//! Acceptance suite: one PASS/FAIL line per criterion, with a wall-clock budget each.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cagroups::division::{
    ca_criteria, central_witness, centralizer_dimension, malnormality_audit, transitivity_audit, AlgebraElement, CyclicAlgebra,
};
use cagroups::ext::{self, UpsilonTower};
use cagroups::group::{c3_semidirect_v4, named, quaternion, sl2_3, subgroup_analysis};
use cagroups::lie::{self, rational, CyclicFieldModel, FpfMode, FpfVerdict};
use cagroups::modrep::{fixed_point_property_check, omega2_modp, omega2_z2k, sigma_split, GroupAlgebra, LoewyLayer, MinimalResolution};
use cagroups::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Named sub-checks of one criterion.
#[derive(Default)]
struct Outcome(Vec<(String, bool)>);

impl Outcome {
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.0.push((name.into(), ok));
    }
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, got: T, want: T) {
        let ok = got == want;
        self.0.push((
            if ok {
                name.to_string()
            } else {
                format!("{name}: got {got:?}, want {want:?}")
            },
            ok,
        ));
    }
    fn passed(&self) -> bool {
        self.0.iter().all(|c| c.1)
    }
}

fn rank_formulas() -> Result<Outcome> {
    let mut o = Outcome::default();
    for (n, dim, minus) in [(8usize, 9usize, 4usize), (16, 17, 8), (32, 33, 16)] {
        let g = Arc::new(quaternion(n)?);
        let a = subgroup_analysis(&g)?;
        o.eq(&format!("Q{n}: (d_G-1)|G|+1"), (a.d_g - 1) * n + 1, dim);
        o.eq(&format!("Q{n}: (d_G-1)|G|/2"), (a.d_g - 1) * n / 2, minus);
        o.eq(&format!("Q{n}: dim Omega_2(G,F_2)"), omega2_modp(g.clone())?.omega().rank(), dim);
        let z = omega2_z2k(g.clone(), 3)?;
        o.eq(&format!("Q{n}: rank Omega_2(G,Z/8)"), z.omega().rank(), dim);
        let split = sigma_split(z.omega(), g.sigma().unwrap())?;
        o.eq(&format!("Q{n}: rank Omega^- (Z/4)"), split.quotient.rank(), minus);
    }
    Ok(o)
}

fn layers(parts: &[&[(&str, usize)]]) -> Vec<LoewyLayer> {
    parts.iter().map(|p| LoewyLayer::of(p)).collect()
}

fn loewy_c3_v4() -> Result<Outcome> {
    let mut o = Outcome::default();
    let alg = Arc::new(GroupAlgebra::new(Arc::new(c3_semidirect_v4()?), 1)?);
    o.eq("ring", alg.ring().to_string(), "F_4".to_string());
    o.eq(
        "simples",
        alg.simple_labels().to_vec(),
        vec!["F".to_string(), "S1".into(), "S2".into()],
    );
    let want = [
        layers(&[&[("F", 1)], &[("S1", 1), ("S2", 1)], &[("F", 1)]]),
        layers(&[&[("S1", 1)], &[("S2", 1), ("F", 1)], &[("S1", 1)]]),
        layers(&[&[("S2", 1)], &[("F", 1), ("S1", 1)], &[("S2", 1)]]),
    ];
    for (i, w) in want.into_iter().enumerate() {
        let p = alg.projective_cover(i)?;
        o.eq(&format!("P({})", alg.simple_labels()[i]), alg.loewy_series(&p)?, w);
    }
    let res = MinimalResolution::new(alg.clone())?;
    o.eq("dim Omega_2", res.omega().rank(), 5);
    o.eq(
        "Omega_2 layers",
        alg.loewy_series(res.omega())?,
        layers(&[&[("S1", 1), ("S2", 1), ("F", 1)], &[("S1", 1), ("S2", 1)]]),
    );
    Ok(o)
}

fn sl2_3_dimension() -> Result<Outcome> {
    let mut o = Outcome::default();
    let dim = omega2_modp(Arc::new(sl2_3()?))?.omega().rank();
    o.eq("dim Omega_2(SL2(3),F)", dim, 9);
    o.check("5 - 1 = (dim - 1)/2", 2 * (5 - 1) == dim as i64 - 1);
    Ok(o)
}

fn sl2_3_fixed_points() -> Result<Outcome> {
    let mut o = Outcome::default();
    let r = fixed_point_property_check(Arc::new(sl2_3()?))?;
    let cands = r.omega_circ["candidates"].as_array().cloned().unwrap_or_default();
    o.check("at least one matching hyperplane", !cands.is_empty());
    let want: BTreeMap<String, usize> = [("S1".to_string(), 2), ("S2".to_string(), 2)].into();
    for (i, c) in cands.iter().enumerate() {
        let got: BTreeMap<String, usize> = serde_json::from_value(c["composition_factors"].clone()).unwrap();
        o.eq(&format!("candidate {i}: composition factors"), got, want.clone());
    }
    o.check("odd subgroups examined", !r.cases.is_empty());
    o.check("fixed-point property", r.holds);
    Ok(o)
}

fn upsilon_q8() -> Result<Outcome> {
    let mut o = Outcome::default();
    let tower = UpsilonTower::new(Arc::new(quaternion(8)?), 2)?;
    for k in 1..=2u32 {
        let e = tower.level(k)?;
        o.eq(&format!("k={k}: order"), e.order(), 8 << (4 * k));
        o.check(format!("k={k}: group axioms"), e.verify().is_ok());
        o.eq(
            &format!("k={k}: coboundary"),
            ext::cocycle_is_coboundary(e.cocycle())?.is_coboundary,
            false,
        );
        o.check(format!("k={k}: Frattini"), ext::frattini_quality_check(&e, 32, 11)?.holds);
        o.check(
            format!("k={k}: sigma lift inverts j(Omega^-)"),
            ext::sigma_lift_inverts(&e, tower.sigma()),
        );
        let audit = ext::centralizer_audit(&e, 0, 11)?;
        o.eq(&format!("k={k}: audit mode"), audit.params["mode"].as_str(), Some("full sweep"));
        o.eq(&format!("k={k}: audit trials"), audit.trials, e.order());
        o.eq(&format!("k={k}: audit violations"), audit.violations, 0);
    }
    o.check("level 2 reduces onto level 1", tower.compatible(1)?);
    Ok(o)
}

fn classifier() -> Result<Outcome> {
    let mut o = Outcome::default();
    for (spec, iso) in [
        ("c4", true),
        ("cyclic(6)", true),
        ("q8", false),
        ("quaternion(16)", false),
        ("sl2_3", false),
    ] {
        let r = ext::upsilon_iso_classifier(Arc::new(named(spec)?))?;
        o.eq(&format!("{spec}: tau is an isomorphism"), r.tau_is_isomorphism, iso);
        o.eq(&format!("{spec}: rank Omega^- = 0"), r.omega_minus_rank == 0, iso);
        o.check(format!("{spec}: agrees"), r.agrees);
    }
    Ok(o)
}

fn division_5_3() -> Result<Outcome> {
    let mut o = Outcome::default();
    let d = CyclicAlgebra::new(5, 3, 12)?;
    let delta = d.delta_torus()?;
    o.eq("|Delta|", delta.len(), 31);
    let find = |x: &AlgebraElement| delta.iter().position(|y| y.agrees_with(x));
    let closed = delta
        .iter()
        .all(|a| delta.iter().all(|b| a.multiply(b).is_ok_and(|ab| find(&ab).is_some())));
    o.check("Delta closed under multiplication", closed);
    o.check("Delta contains 1", find(&AlgebraElement::one(&d)).is_some());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let x = AlgebraElement::x(&d);
    let (mut norm_fail, mut val_fail) = (0, 0);
    for _ in 0..200 {
        let a = d.sample_level(0, &mut rng)?.multiply(&x.pow(rng.gen_range(0..3)))?;
        let b = d.sample_level(0, &mut rng)?.multiply(&x.pow(rng.gen_range(0..3)))?;
        let ab = a.multiply(&b)?;
        norm_fail += !ab.reduced_norm()?.agrees_with(&(a.reduced_norm()? * b.reduced_norm()?)) as usize;
        val_fail += (ab.valuation()? != a.valuation()? + b.valuation()?) as usize;
    }
    o.eq("reduced norm failures", norm_fail, 0);
    o.eq("valuation failures", val_fail, 0);
    let mut dims = Vec::new();
    while dims.len() < 50 {
        let g = d.sample_level(0, &mut rng)?;
        if !g.is_central() {
            dims.push(centralizer_dimension(&g)?);
        }
    }
    o.eq("centralizer dimensions", dims, vec![3; 50]);
    Ok(o)
}

fn ca_table() -> Result<Outcome> {
    let mut o = Outcome::default();
    for (p, l, ca) in [(5u64, 3usize, true), (3, 2, false), (7, 3, true), (7, 2, false)] {
        let crit = ca_criteria(p, l as u64, 1)?;
        o.eq(&format!("({p},{l}): SL1 CA"), crit.sl1_ca, ca);
        let d = CyclicAlgebra::new(p, l, 12)?;
        if crit.sl1_ca {
            let audit = transitivity_audit(&d, 0, 200, 17)?;
            o.eq(&format!("({p},{l}): transitivity violations"), audit.violations, 0);
        } else {
            let w = central_witness(&d, 17)?;
            o.check(format!("({p},{l}): witness (zeta, g, h) verified"), w.is_some_and(|w| w.verify()));
        }
    }
    let m = malnormality_audit(&CyclicAlgebra::new(5, 3, 12)?, 100, 17)?;
    let valid = m.trials - m.stats["invalid_trials"].as_u64().unwrap() as usize;
    o.check("(5,3): valid malnormality trials", valid > 0);
    o.eq(
        "(5,3): malnormality intersection dimensions",
        m.stats["intersection_dimensions"].clone(),
        serde_json::json!({"1": valid}),
    );
    Ok(o)
}

fn lie_suite() -> Result<Outcome> {
    let mut o = Outcome::default();
    let nf = lie::NumberField::from_ints(&[1, 1, 1, 1])?;
    let action = lie::field_multiplication_action(&nf, 4)?;
    o.eq(
        "metabelian certificate",
        lie::fixed_point_free_check(&action, FpfMode::Certificate),
        FpfVerdict::Proven,
    );
    let meta = lie::build_metabelian(&action)?;
    let sl3 = lie::build_quasi_split_sl3(rational(2))?;
    let type_c = lie::build_type_c(rational(-1), rational(-1), 2)?;
    let quat = lie::build_pure_quaternions(rational(-1), rational(-1))?;
    let mut cases = vec![
        ("abelian", lie::build_abelian(4), vec![], true),
        ("metabelian", meta.clone(), vec![], true),
        ("sl2", lie::build_sl2(), vec![], true),
        ("pure quaternions", quat.clone(), vec![], true),
        ("type c", type_c.algebra.clone(), vec![], true),
        ("quasi-split sl3", sl3.algebra.clone(), sl3.triple.to_vec(), false),
    ];
    let mut derived = Vec::new();
    for (n, name) in [(2, "derived cyclic n=2"), (3, "derived cyclic n=3"), (4, "derived cyclic n=4")] {
        let d = lie::build_derived_cyclic(n, CyclicFieldModel::preset(n)?, rational(3))?;
        cases.push((name, d.algebra.clone(), d.probes.clone(), n < 4));
        derived.push(d);
    }
    for (name, alg, probes, ca) in &cases {
        o.check(format!("{name}: jacobi"), alg.jacobi_check());
        let audit = alg.ca_audit(probes, 500, 5);
        if *ca {
            o.check(format!("{name}: no witness in 500 trials"), audit.witness.is_none());
        } else {
            o.check(format!("{name}: exact witness"), audit.witness.is_some_and(|w| w.verify(alg)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut star_fail = 0;
    for t in 0..100 {
        let d = &derived[1 + t % 2];
        let n = d.n();
        let mut v = || (0..n).map(|_| rational(rng.gen_range(-5..=5))).collect::<Vec<_>>();
        let (z, zp) = (v(), v());
        star_fail += !d.star_formula_check(&z, &zp, 1 + t % (n - 1))? as usize;
    }
    o.eq("star formula failures", star_fail, 0);
    let copies: Vec<_> = type_c.copy_ideal(0).into_iter().chain(type_c.copy_ideal(1)).collect();
    let meta_ideal: Vec<_> = (4..meta.dim()).map(|i| meta.basis_vec(i)).collect();
    let quotients = [
        ("type c / one copy", type_c.algebra.quotient_by_ideal(&type_c.copy_ideal(1))?.0, 7),
        ("type c / both copies", type_c.algebra.quotient_by_ideal(&copies)?.0, 3),
        ("metabelian / N", meta.quotient_by_ideal(&meta_ideal)?.0, 4),
        ("sl2 / 0", lie::build_sl2().quotient_by_ideal(&[])?.0, 3),
    ];
    for (name, q, dim) in &quotients {
        o.eq(&format!("{name}: dim"), q.dim(), *dim);
        o.check(format!("{name}: jacobi"), q.jacobi_check());
        o.check(format!("{name}: CA"), q.ca_audit(&[], 200, 3).witness.is_none());
    }
    o.check(
        "sl3 has no proper nonzero ideal spanned by e",
        sl3.algebra.quotient_by_ideal(&[sl3.triple[1].clone()]).is_err(),
    );
    Ok(o)
}

fn bch_quaternions() -> Result<Outcome> {
    let mut o = Outcome::default();
    let alg = lie::build_pure_quaternions(rational(-1), rational(-1))?;
    let bch = lie::Bch::new(&alg, 3, 6)?;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut id, mut inv, mut assoc) = (0, 0, 0);
    for _ in 0..50 {
        let (u, v, w) = (bch.random(&mut rng), bch.random(&mut rng), bch.random(&mut rng));
        id += !(bch.agree(&bch.multiply(&u, &bch.zero())?, &u) && bch.agree(&bch.multiply(&bch.zero(), &u)?, &u)) as usize;
        inv += !bch.is_zero(&bch.multiply(&u, &bch.inverse(&u))?) as usize;
        let l = bch.multiply(&bch.multiply(&u, &v)?, &w)?;
        let r = bch.multiply(&u, &bch.multiply(&v, &w)?)?;
        assoc += !bch.agree(&l, &r) as usize;
    }
    o.eq("identity defects", id, 0);
    o.eq("inverse defects", inv, 0);
    o.eq("associativity defects", assoc, 0);
    let audit = lie::group_lie_commutation_audit(&alg, 3, 6, 200, 31)?;
    o.eq("commutation trials", audit.trials, 200);
    o.eq("commutation mismatches", audit.violations, 0);
    Ok(o)
}

type Criterion = (u32, &'static str, u64, fn() -> Result<Outcome>);

const CRITERIA: [Criterion; 10] = [
    (1, "rank formulas for Q8, Q16, Q32", 30 * 3, rank_formulas),
    (2, "Loewy structures of C3 x| V4 over F_4", 10, loewy_c3_v4),
    (3, "dim Omega_2(SL2(3), F) = 9", 60, sl2_3_dimension),
    (4, "Omega circle of SL2(3) is 2[S1]+2[S2]", 60, sl2_3_fixed_points),
    (5, "Upsilon(Q8)/2^k Omega^- for k = 1, 2 (finite-level shadow)", 180, upsilon_q8),
    (6, "iso classifier agrees with rank Omega^- = 0", 60, classifier),
    (7, "division algebra p=5 l=3", 60, division_5_3),
    (8, "CA criteria table (sampled)", 120, ca_table),
    (9, "Lie suite", 120, lie_suite),
    (10, "BCH group law on pure quaternions, p=3", 60, bch_quaternions),
];

fn main() -> ExitCode {
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (n, name, budget, run) in CRITERIA {
        if filter.is_some_and(|f| f != n) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let (ok, notes) = match outcome {
            Ok(Ok(o)) => {
                let bad: Vec<String> = o.0.iter().filter(|c| !c.1).map(|c| c.0.clone()).collect();
                (o.passed(), bad)
            }
            Ok(Err(e)) => (false, vec![format!("error: {e}")]),
            Err(_) => (false, vec!["panicked".into()]),
        };
        let mut notes = notes;
        if !in_time {
            notes.push(format!("over budget of {budget} s"));
        }
        let pass = ok && in_time;
        failed += !pass as usize;
        println!(
            "{} criterion {n}: {name} ({:.2} s)",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        for note in notes {
            println!("    {note}");
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
