//! Named checks and the built-in corpus run.

use crate::division::{ca_criteria, central_witness, transitivity_audit, CyclicAlgebra};
use crate::error::Result;
use crate::ext::{self, UpsilonTower, CLOSURE_CAP};
use crate::group::{named, subgroup_analysis, FiniteGroupTable};
use crate::lie::{self, rational, CyclicFieldModel};
use crate::modrep::{self, omega2_modp, omega2_z2k, rank_identities_check};
use serde::Serialize;
use serde_json::{json, Value};
use std::sync::Arc;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Ordered list of named boolean checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckList(pub Vec<Check>);

impl CheckList {
    pub fn push(&mut self, name: impl Into<String>, passed: bool) -> bool {
        self.0.push(Check { name: name.into(), passed });
        passed
    }

    pub fn extend(&mut self, other: CheckList) {
        self.0.extend(other.0);
    }

    pub fn passed(&self) -> bool {
        self.0.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.0.iter().find(|c| !c.passed).map(|c| c.name.as_str())
    }
}

pub const GROUPS: [&str; 7] = [
    "c4",
    "cyclic(6)",
    "q8",
    "quaternion(16)",
    "quaternion(32)",
    "sl2_3",
    "c3_semidirect_v4",
];

/// Representation-theoretic and extension checks for one group.
pub fn group_checks(spec: &str, level: u32, seed: u64) -> Result<(Value, CheckList)> {
    let g = Arc::new(named(spec)?);
    let name = g.name().to_string();
    let mut checks = CheckList::default();
    let a = subgroup_analysis(&g)?;
    let modp = omega2_modp(g.clone())?;
    let dim = modp.omega().rank();
    let mut out = json!({"group": name, "order": g.order(), "d_g": a.d_g, "omega_dim_modp": dim});
    if a.sylow2.len() == g.order() {
        checks.push(format!("{name}: dim Omega_2 = (d_G-1)|G|+1"), dim == (a.d_g - 1) * g.order() + 1);
    }
    let z = omega2_z2k(g.clone(), level)?;
    checks.push(
        format!("{name}: rank over Z/2^k equals the mod-2 dimension"),
        z.omega().rank() == dim,
    );
    if g.sigma().is_none() {
        let layers = modp.algebra().loewy_series(modp.omega())?;
        out["loewy"] = json!(layers.iter().map(|l| l.to_string()).collect::<Vec<_>>());
        return Ok((out, checks));
    }
    let ranks = rank_identities_check(g.clone(), level.max(2))?;
    for c in &ranks.checks {
        checks.push(format!("{name}: {}", c.name), c.holds);
    }
    out["rank_identities"] = serde_json::to_value(&ranks).unwrap();
    let cls = ext::upsilon_iso_classifier(g.clone())?;
    checks.push(format!("{name}: classifier agrees with rank Omega^- = 0"), cls.agrees);
    out["classifier"] = serde_json::to_value(&cls).unwrap();
    if a.frattini.contains(&g.sigma().unwrap()) && !a.odd_subgroups.is_empty() {
        let fp = modrep::fixed_point_property_check(g.clone())?;
        out["fixed_point_property"] = serde_json::to_value(&fp).unwrap();
        if a.sl2_like {
            checks.push(format!("{name}: fixed-point property"), fp.holds);
        }
    }
    out["upsilon"] = upsilon_checks(&g, level, seed, &mut checks)?;
    Ok((out, checks))
}

fn upsilon_checks(g: &Arc<FiniteGroupTable>, level: u32, seed: u64, checks: &mut CheckList) -> Result<Value> {
    let name = g.name();
    let tower = UpsilonTower::new(g.clone(), level)?;
    let rank = tower.omega_minus_rank();
    let fits = |k: u32| (k as usize * rank) < 32 && g.order() << (k as usize * rank) <= CLOSURE_CAP;
    let Some(level) = (1..=level).rev().find(|&k| fits(k)) else {
        return Ok(json!({"skipped": format!("order exceeds {CLOSURE_CAP} at every level")}));
    };
    let order = g.order() << (level as usize * rank);
    let e = tower.level(level)?;
    checks.push(format!("{name}: Upsilon level {level} order"), e.order() == order);
    let full = e.order() <= ext::SWEEP_CAP;
    if full {
        checks.push(format!("{name}: Upsilon group axioms"), e.verify().is_ok());
    }
    checks.push(
        format!("{name}: sigma lift inverts j(Omega^-)"),
        ext::sigma_lift_inverts(&e, tower.sigma()),
    );
    let split = ext::cocycle_is_coboundary(e.cocycle())?;
    checks.push(
        format!("{name}: Upsilon class is a coboundary iff rank Omega^- = 0"),
        split.is_coboundary == (rank == 0),
    );
    let fr = ext::frattini_quality_check(&e, 16, seed)?;
    checks.push(format!("{name}: Frattini quality"), fr.holds);
    let mut out = json!({"level": level, "order": e.order(), "coboundary": split.is_coboundary, "frattini": fr});
    if rank > 0 {
        let audit = ext::centralizer_audit(&e, 256, seed)?;
        checks.push(format!("{name}: centralizer audit"), audit.passed());
        out["centralizer_audit"] = serde_json::to_value(&audit).unwrap();
    }
    if level >= 2 && full {
        checks.push(
            format!("{name}: tower compatibility at level {}", level - 1),
            tower.compatible(level - 1)?,
        );
    }
    Ok(out)
}

/// The CA criteria table checked by audit: predicted CA
/// means no transitivity violation, predicted non-CA means a verified central witness.
pub fn division_checks(trials: usize, seed: u64) -> Result<(Value, CheckList)> {
    let mut checks = CheckList::default();
    let mut rows = Vec::new();
    for (p, l) in [(5u64, 3usize), (3, 2), (7, 3), (7, 2)] {
        let crit = ca_criteria(p, l as u64, 1)?;
        let alg = CyclicAlgebra::new(p, l, 12)?;
        let mut row = json!({"p": p, "l": l, "criteria": crit});
        if crit.sl1_ca {
            let audit = transitivity_audit(&alg, 0, trials, seed)?;
            checks.push(format!("division ({p},{l}): no transitivity violation"), audit.passed());
            row["transitivity"] = serde_json::to_value(&audit).unwrap();
        } else {
            let w = central_witness(&alg, seed)?;
            checks.push(
                format!("division ({p},{l}): central witness"),
                w.as_ref().is_some_and(|w| w.verify()),
            );
            row["witness"] = w.map_or(Value::Null, |w| w.to_json());
        }
        rows.push(row);
    }
    Ok((json!(rows), checks))
}

pub fn lie_checks(trials: usize, seed: u64) -> Result<(Value, CheckList)> {
    let mut checks = CheckList::default();
    let mut rows = Vec::new();
    let nf = lie::NumberField::from_ints(&[1, 1, 1, 1])?;
    let meta = lie::build_metabelian(&lie::field_multiplication_action(&nf, 4)?)?;
    let sl3 = lie::build_quasi_split_sl3(rational(2))?;
    let mut cases: Vec<(String, lie::StructureLieAlgebra, Vec<Vec<num_rational::BigRational>>, bool)> = vec![
        ("abelian".into(), lie::build_abelian(4), vec![], true),
        ("metabelian".into(), meta, vec![], true),
        ("sl2".into(), lie::build_sl2(), vec![], true),
        (
            "pure quaternions".into(),
            lie::build_pure_quaternions(rational(-1), rational(-1))?,
            vec![],
            true,
        ),
        ("quasi-split sl3".into(), sl3.algebra.clone(), sl3.triple.to_vec(), false),
    ];
    for n in 2..=4 {
        let d = lie::build_derived_cyclic(n, CyclicFieldModel::preset(n)?, rational(3))?;
        cases.push((format!("derived cyclic n={n}"), d.algebra, d.probes, n < 4));
    }
    for (name, alg, probes, ca) in &cases {
        checks.push(format!("lie {name}: jacobi"), alg.jacobi_check());
        let audit = alg.ca_audit(probes, trials, seed);
        let ok = if *ca {
            audit.witness.is_none()
        } else {
            audit.witness.as_ref().is_some_and(|w| w.verify(alg))
        };
        checks.push(
            format!("lie {name}: ca_audit {}", if *ca { "clean" } else { "finds a witness" }),
            ok,
        );
        rows.push(json!({"algebra": name, "dim": alg.dim(), "violations": audit.report.violations}));
    }
    let q = lie::build_pure_quaternions(rational(-1), rational(-1))?;
    let bch = lie::group_lie_commutation_audit(&q, 3, 6, trials.min(200), seed)?;
    checks.push("bch: group/Lie commutation agree", bch.passed());
    Ok((json!({"algebras": rows, "bch": bch}), checks))
}

/// Every check family over the built-in group list.
pub fn run_corpus(level: u32, seed: u64) -> Result<(Value, CheckList)> {
    let mut checks = CheckList::default();
    let mut groups = Vec::new();
    for spec in GROUPS {
        let (v, c) = group_checks(spec, level, seed)?;
        groups.push(v);
        checks.extend(c);
    }
    let (division, c) = division_checks(50, seed)?;
    checks.extend(c);
    let (lie, c) = lie_checks(100, seed)?;
    checks.extend(c);
    let report = json!({
        "schema": crate::SCHEMA,
        "level": level,
        "seed": seed,
        "groups": groups,
        "division": division,
        "lie": lie,
        "checks": checks,
        "passed": checks.passed(),
    });
    Ok((report, checks))
}
