//! The acceptance catalog: twelve numbered criteria, each a bundle of exact
//! checks over fixed groups, quotients, products, actions and ∗-sets.
//!
//! Criteria run in parallel; results come back in criterion order.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::action::{action_catalog, action_distances, action_metric_table, comparison_bound_check, function_space_embedding_check, orbit_map_check, GroupAction};
use crate::bitset::{all_subsets, Subset};
use crate::catalog::{by_name, catalog_up_to};
use crate::error::Result;
use crate::extnat::{ExtNat, Fin, Inf};
use crate::group::{quotient_by_normal, FiniteGroup, GroupHom};
use crate::identities::formula_suite;
use crate::invariants::{delta, diam_nfg, rank_n};
use crate::metric::{discrete_ball_check, nu_h_axioms, word_lengths, word_metric_table, zeta_check};
use crate::product::{direct_product_collapse, psi_suite, sdprod_metric_compare, SemidirectContext};
use crate::report::{Report, Sample};
use crate::star::{phi_invariance_suite, quandle_catalog, star_powers, star_properties, star_word_lengths, StarSet};
use crate::subsets::Family;
use crate::transport::{eta_context, qi_bounds_check, retraction_suite, verify_pullback_isometry};

/// Short titles, indexed by criterion number minus one.
pub const CRITERIA: [&str; 12] = [
    "nu_H metric axioms",
    "zeta anti-isometry",
    "subset identities",
    "discrete balls",
    "pullback isometry",
    "retraction defect",
    "eta bounds",
    "semidirect formulas",
    "invariants",
    "action metrics",
    "star sets",
    "oracle equivalence",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    /// Catalog groups up to this order, plus S4 when it is at least 16.
    pub max_order: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_order: 16, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: &'static str,
    pub report: Report,
    /// Operations that returned an error instead of a report.
    pub errors: Vec<String>,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.report.is_ok() && self.report.passed() > 0
    }

    /// `PASS  3 subset identities (123 checks, 0 failed)`.
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {} ({} checks, {} failed, {} skipped{})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.report.passed() + self.report.failures(),
            self.report.failures(),
            self.report.skipped(),
            if self.errors.is_empty() { String::new() } else { format!(", {} errors", self.errors.len()) },
        )
    }

    fn absorb(&mut self, prefix: &str, r: Result<Report>) {
        match r {
            Ok(r) => self.report.merge_prefixed(prefix, r),
            Err(e) => self.errors.push(format!("{prefix}: {e}")),
        }
    }
}

/// Catalog groups of order at most `max_order`, with S4 appended when
/// `max_order ≥ 16`.
pub fn suite_groups(max_order: usize) -> Vec<FiniteGroup> {
    let mut gs = catalog_up_to(max_order);
    if max_order >= 16 && !gs.iter().any(|g| g.name() == "S4") {
        gs.extend(by_name("S4"));
    }
    gs
}

fn quotient(g: FiniteGroup, kernel: &[usize]) -> GroupHom {
    let g = Arc::new(g);
    let k = g.subset(kernel.iter().copied()).unwrap();
    quotient_by_normal(&g, &k).unwrap().1
}

/// `Z12 → Z4`, `Z12 → Z3`, `S3 → Z2` and `D4 → Z2 × Z2`.
pub fn quotient_catalog() -> Vec<(&'static str, GroupHom)> {
    vec![
        ("Z12->Z4", quotient(FiniteGroup::cyclic(12).unwrap(), &[0, 4, 8])),
        ("Z12->Z3", quotient(FiniteGroup::cyclic(12).unwrap(), &[0, 3, 6, 9])),
        ("S3->Z2", quotient(FiniteGroup::symmetric(3).unwrap(), &[0, 3, 4])),
        ("D4->Z2xZ2", quotient(FiniteGroup::dihedral(4).unwrap(), &[0, 2])),
    ]
}

/// `S3 = Z2 ⋉ A3` with `H = {e, (12)}`.
pub fn s3_semidirect() -> SemidirectContext {
    let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
    let h = g.subset([0, 1]).unwrap();
    let k = g.subset([0, 3, 4]).unwrap();
    SemidirectContext::new(g, h, k).unwrap()
}

/// `Z_a × Z_b` as a semidirect product with trivial action.
pub fn cyclic_direct(a: usize, b: usize) -> SemidirectContext {
    let (za, zb) = (FiniteGroup::cyclic(a).unwrap(), FiniteGroup::cyclic(b).unwrap());
    let trivial = vec![(0..b).collect::<Vec<_>>(); a];
    SemidirectContext::from_semidirect(&za, &zb, &trivial).unwrap()
}

fn sample_for(order: usize, exhaustive_up_to: usize, count: usize, seed: u64) -> Sample {
    if order <= exhaustive_up_to {
        Sample::Exhaustive
    } else {
        Sample::Random { count, seed }
    }
}

pub fn run_criterion(id: usize, cfg: &SuiteConfig) -> CriterionOutcome {
    assert!((1..=12).contains(&id), "criteria are numbered 1 to 12");
    let mut out = CriterionOutcome {
        id,
        title: CRITERIA[id - 1],
        report: Report::new(format!("criterion {id}: {}", CRITERIA[id - 1])),
        errors: Vec::new(),
    };
    let seed = cfg.seed;
    match id {
        1 => {
            for g in suite_groups(cfg.max_order) {
                out.absorb(g.name(), nu_h_axioms(&g, sample_for(g.order(), 8, 1000, seed)));
            }
        }
        2 => {
            for g in catalog_up_to(8) {
                let r = zeta_check(&g, Sample::Exhaustive);
                out.absorb(g.name(), Ok(r));
            }
        }
        3 => {
            let groups: Vec<FiniteGroup> = suite_groups(cfg.max_order).into_iter().filter(|g| g.order() <= 24).collect();
            let reports: Vec<(String, Result<Report>)> = groups
                .par_iter()
                .map(|g| (g.name().to_string(), formula_suite(g, sample_for(g.order(), 8, 500, seed))))
                .collect();
            for (name, r) in reports {
                out.absorb(&name, r);
            }
        }
        4 => {
            for g in catalog_up_to(8) {
                out.absorb(g.name(), discrete_ball_check(&g, Sample::Exhaustive));
            }
        }
        5 => {
            for (name, f) in quotient_catalog() {
                out.absorb(name, verify_pullback_isometry(&f, Sample::Exhaustive));
            }
        }
        6 => {
            for (name, f) in quotient_catalog() {
                out.absorb(name, retraction_suite(&f, Sample::Exhaustive));
            }
        }
        7 => {
            for (name, f) in quotient_catalog().into_iter().filter(|(n, _)| *n == "S3->Z2" || *n == "D4->Z2xZ2") {
                match eta_context(&f, None) {
                    Ok(ctx) => {
                        let m0 = ctx.m0();
                        let kernel = f.kernel();
                        let (kg, _) = crate::group::subgroup_as_group(f.source(), &kernel, "K").unwrap();
                        let diam = diam_nfg(&kg).map(|w| w.value);
                        out.report.check(&format!("{name}: m0 = diam_nfg(K)"), diam.as_ref().ok() == Some(&Fin(m0)), || format!("m0 = {m0}, diam = {diam:?}"));
                        for m in [m0, m0 + 1] {
                            out.absorb(&format!("{name}, m = {m}"), qi_bounds_check(&f, None, Some(m), Sample::Exhaustive));
                        }
                    }
                    Err(e) => out.errors.push(format!("{name}: {e}")),
                }
            }
        }
        8 => {
            let s3 = s3_semidirect();
            let l = s3.k().clone();
            out.absorb("S3, L = K", sdprod_metric_compare(&s3, &l, Sample::Exhaustive));
            out.absorb("S3, L = K", psi_suite(&s3, &l, Sample::Exhaustive));
            let z2z3 = cyclic_direct(2, 3);
            out.absorb("Z2xZ3", direct_product_collapse(&z2z3, Sample::Exhaustive));
            out.absorb("Z2xZ3", psi_suite(&z2z3, &z2z3.k().clone(), Sample::Exhaustive));
            let z4z3 = cyclic_direct(4, 3);
            let sample = Sample::Random { count: 500, seed };
            out.absorb("Z4xZ3", direct_product_collapse(&z4z3, sample));
            out.absorb("Z4xZ3", psi_suite(&z4z3, &z4z3.k().clone(), sample));
        }
        9 => {
            let s3 = FiniteGroup::symmetric(3).unwrap();
            let r = rank_n(&s3, 4);
            out.report.check("rank_n(S3) = 1", r.value == Fin(1) && r.exhaustive, || format!("{:?}", r.value));
            let d = delta(&s3, 0, seed);
            out.report.check("Delta(S3) = 2", d.value == Fin(2) && d.exhaustive, || format!("{:?}, exhaustive = {}", d.value, d.exhaustive));
            for g in suite_groups(cfg.max_order).into_iter().filter(|g| g.order() > 1) {
                match diam_nfg(&g) {
                    Ok(w) => {
                        out.report.check("diam_nfg(G) = 1", w.value == Fin(1) && w.exhaustive, || format!("{}: {:?}", g.name(), w.value));
                    }
                    Err(e) => out.errors.push(format!("{}: {e}", g.name())),
                }
            }
        }
        10 => action_criterion(&mut out, seed),
        11 => star_criterion(&mut out),
        12 => oracle_criterion(&mut out),
        _ => unreachable!(),
    }
    out
}

fn action_criterion(out: &mut CriterionOutcome, seed: u64) {
    let reports: Vec<(String, Vec<Result<Report>>)> = action_catalog()
        .par_iter()
        .map(|a| {
            let g = a.group();
            let sample = sample_for(g.order(), 6, 128, seed);
            let mut rs = Vec::new();
            let sets = Family::All.members(g, sample);
            match sets {
                Ok(sets) => {
                    for s in &sets {
                        for x in 0..a.size() {
                            rs.push(orbit_map_check(a, s, x));
                        }
                    }
                }
                Err(e) => rs.push(Err(e)),
            }
            match Family::All.pairs(g, sample_for(g.order(), 6, 2000, seed)) {
                Ok((sets, pairs)) => {
                    for (i, j) in pairs {
                        rs.push(comparison_bound_check(a, &sets[i], &sets[j]));
                    }
                }
                Err(e) => rs.push(Err(e)),
            }
            rs.push(function_space_embedding_check(a, sample_for(g.order(), 6, 1000, seed)));
            (a.name().to_string(), rs)
        })
        .collect();
    for (name, rs) in reports {
        for r in rs {
            out.absorb(&name, r);
        }
    }
    for g in catalog_up_to(8).into_iter().filter(|g| g.order() > 1) {
        let g = Arc::new(g);
        let a = GroupAction::right_translation(g.clone());
        for s in all_subsets(g.order()) {
            let same = action_metric_table(&a, &s).map(|t| t == word_metric_table(&g, &s)).unwrap_or(false);
            out.report.check("right translation reproduces d_S", same, || format!("{}: S = {s}", g.name()));
        }
    }
}

fn star_criterion(out: &mut CriterionOutcome) {
    for g in catalog_up_to(8) {
        let x = StarSet::from_group(&g);
        for s in all_subsets(g.order()) {
            let same = star_word_lengths(&x, &s).map(|l| l == word_lengths(&g, &s)).unwrap_or(false);
            out.report.check("star word length on a group table = group word length", same, || format!("{}: S = {s}", g.name()));
        }
    }
    let mut carriers: Vec<StarSet> = quandle_catalog();
    carriers.extend(catalog_up_to(6).iter().map(StarSet::from_group));
    let reports: Vec<(String, Result<Report>)> = carriers
        .par_iter()
        .filter(|x| x.size() <= 8)
        .map(|x| (x.name().to_string(), star_properties(x, Sample::Exhaustive, 3)))
        .collect();
    for (name, r) in reports {
        out.absorb(&name, r);
    }
    for q in quandle_catalog() {
        let sigmas: Vec<Vec<usize>> = (0..q.size()).map(|a| q.right_translation(a)).collect();
        for s in [q.subset([0]).unwrap(), q.subset([0, 1]).unwrap(), q.subset([1, 2]).unwrap()] {
            out.absorb(&format!("{} phi-invariance", q.name()), phi_invariance_suite(&q, &sigmas, &s, Sample::Exhaustive));
        }
    }
}

/// `S^n` for `n ≤ max`, one product layer at a time.
fn layers(g: &FiniteGroup, s: &Subset, max: usize) -> Vec<Subset> {
    let mut out = vec![g.identity_set()];
    for _ in 0..max {
        let prev = out.last().unwrap();
        let mut next = g.empty_set();
        for x in prev {
            for t in s {
                next.insert(g.mul(x, t));
            }
        }
        out.push(next);
    }
    out
}

fn first_layer(layers: &[Subset], x: usize) -> ExtNat {
    layers.iter().position(|l| l.contains(x)).map_or(Inf, |n| Fin(n as u64))
}

/// Agreement up to the oracle horizon: equal when the oracle finds x, and
/// beyond the horizon otherwise.
fn agrees(fast: ExtNat, oracle: ExtNat, horizon: u64) -> bool {
    if oracle.is_finite() {
        fast == oracle
    } else {
        fast > Fin(horizon)
    }
}

fn oracle_criterion(out: &mut CriterionOutcome) {
    const HORIZON: usize = 8;
    for g in catalog_up_to(8) {
        for s in all_subsets(g.order()) {
            let ls = layers(&g, &s, HORIZON);
            let fast = word_lengths(&g, &s);
            for x in g.elements() {
                out.report.check("group word length = layer oracle", agrees(fast[x], first_layer(&ls, x), HORIZON as u64), || {
                    format!("{}: S = {s}, x = {x}", g.name())
                });
            }
        }
    }
    let mut carriers: Vec<StarSet> = quandle_catalog();
    carriers.extend(catalog_up_to(8).iter().map(StarSet::from_group));
    for x in carriers.iter().filter(|x| x.size() <= 8) {
        for s in all_subsets(x.size()) {
            let fast = star_word_lengths(x, &s).unwrap();
            let powers = star_powers(x, &s, HORIZON);
            for p in 0..x.size() {
                let oracle = match x.unital() {
                    Some(e) if e == p => Fin(0),
                    _ => powers.iter().position(|l| l.contains(p)).map_or(Inf, |n| Fin(n as u64 + 1)),
                };
                out.report.check("star word length = inductive powers", agrees(fast[p], oracle, HORIZON as u64), || {
                    format!("{}: S = {s}, x = {p}", x.name())
                });
            }
        }
    }
    for a in action_catalog() {
        for s in all_subsets(a.group().order()) {
            for x in 0..a.size() {
                let fast = action_distances(&a, &s, x);
                let mut layer = Subset::singleton(a.size(), x);
                let mut seen = vec![Inf; a.size()];
                for n in 0..=HORIZON {
                    for y in &layer {
                        if seen[y].is_inf() {
                            seen[y] = Fin(n as u64);
                        }
                    }
                    layer = a.act_set(&layer, &s);
                }
                for y in 0..a.size() {
                    out.report.check("action distance = layer oracle", agrees(fast[y], seen[y], HORIZON as u64), || {
                        format!("{}: S = {s}, ({x}, {y})", a.name())
                    });
                }
            }
        }
    }
}

/// All twelve criteria, run in parallel and returned in order.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionOutcome> {
    (1..=12).into_par_iter().map(|id| run_criterion(id, cfg)).collect()
}
