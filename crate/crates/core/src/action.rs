//! Word metrics on sets with a right group action.
//!
//! `d_S^X(x, y)` is the least n with `y ∈ x S^n`, found by breadth-first
//! search along `x → x·s`. Besides the metric itself this module checks the
//! orbit-map dichotomy, the comparison `d_S ≤ ν_H(S, T)·d_T`, the embedding
//! of `S ↦ d_S^X` into functions on off-diagonal pairs, and monotonicity
//! under equivariant symmetries. Quandles act through their inner
//! automorphism groups.

use std::collections::VecDeque;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::Subset;
use crate::error::{axiom, Error, Result};
use crate::extnat::{ExtNat, Fin, Inf};
use crate::group::{permutation_elements, FiniteGroup, GroupSpec};
use crate::metric::{check_metric_axioms, lambda, nu_h, word_metric_table, Flavor, MetricFunction, MetricTable};
use crate::report::{Report, Sample};
use crate::star::StarSet;
use crate::subsets::{inverse, is_symmetric, power_leq, Family};

/// Largest quandle carrier whose automorphism action is materialized.
pub const AUTOMORPHISM_CARRIER_CAP: usize = 8;

/// JSON form of an action: `act[x][a] = x·a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub group: GroupSpec,
    pub act: Vec<Vec<usize>>,
    #[serde(default)]
    pub name: Option<String>,
}

/// A right action of a finite group on `0..size`.
#[derive(Clone, Debug)]
pub struct GroupAction {
    name: String,
    group: Arc<FiniteGroup>,
    size: usize,
    act: Vec<u32>,
}

impl GroupAction {
    /// Validates `act(x, e) = x` and `act(act(x, a), b) = act(x, ab)`.
    pub fn new(name: impl Into<String>, group: Arc<FiniteGroup>, act: &[Vec<usize>]) -> Result<GroupAction> {
        let (m, n) = (act.len(), group.order());
        if m == 0 {
            return Err(Error::Spec("action on an empty set".into()));
        }
        let mut flat = Vec::with_capacity(m * n);
        for (x, row) in act.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Spec(format!("row {x} has {} entries, group has order {n}", row.len())));
            }
            for &y in row {
                if y >= m {
                    return Err(Error::OutOfRange { element: y, size: m });
                }
                flat.push(y as u32);
            }
        }
        let a = GroupAction {
            name: name.into(),
            group,
            size: m,
            act: flat,
        };
        let g = &a.group;
        for x in 0..m {
            if a.act(x, g.identity()) != x {
                return Err(axiom("right action", "x e = x", format!("x = {x}")));
            }
            for p in g.elements() {
                for q in g.elements() {
                    if a.act(a.act(x, p), q) != a.act(x, g.mul(p, q)) {
                        return Err(axiom("right action", "(x a) b = x (ab)", format!("x = {x}, a = {p}, b = {q}")));
                    }
                }
            }
        }
        Ok(a)
    }

    pub fn from_spec(spec: &ActionSpec) -> Result<GroupAction> {
        let g = Arc::new(spec.group.build()?);
        let name = spec.name.clone().unwrap_or_else(|| format!("{} action", g.name()));
        GroupAction::new(name, g, &spec.act)
    }

    pub fn from_json(json: &str) -> Result<GroupAction> {
        let spec: ActionSpec = serde_json::from_str(json)?;
        GroupAction::from_spec(&spec)
    }

    /// `G` acting on itself by right translation.
    pub fn right_translation(g: Arc<FiniteGroup>) -> GroupAction {
        let act: Vec<Vec<usize>> = g.elements().map(|x| g.elements().map(|a| g.mul(x, a)).collect()).collect();
        GroupAction::new(format!("{} on itself", g.name()), g, &act).unwrap()
    }

    /// `S_n` on `0..n` by `x·σ = σ(x)`.
    pub fn symmetric_on_points(n: usize) -> Result<GroupAction> {
        let g = Arc::new(FiniteGroup::symmetric(n)?);
        let perms = permutation_elements(n, false);
        let act: Vec<Vec<usize>> = (0..n).map(|x| perms.iter().map(|p| p[x]).collect()).collect();
        GroupAction::new(format!("S{n} on {n} points"), g, &act)
    }

    /// `D_n` on the vertices of an n-gon: `x·r^a = x + a`, `x·r^a s = −(x + a)`.
    pub fn dihedral_on_vertices(n: usize) -> Result<GroupAction> {
        let g = Arc::new(FiniteGroup::dihedral(n)?);
        let act: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                g.elements()
                    .map(|i| {
                        let (a, flip) = (i % n, i / n);
                        let y = (x + a) % n;
                        if flip == 0 { y } else { (n - y) % n }
                    })
                    .collect()
            })
            .collect();
        GroupAction::new(format!("D{n} on {n} vertices"), g, &act)
    }

    /// Each group element acts by the listed permutation of `0..size`.
    pub fn from_permutations(name: impl Into<String>, g: Arc<FiniteGroup>, perms: &[Vec<usize>]) -> Result<GroupAction> {
        if perms.len() != g.order() {
            return Err(Error::Spec(format!("{} permutations for a group of order {}", perms.len(), g.order())));
        }
        let m = perms.first().map_or(0, Vec::len);
        if perms.iter().any(|p| p.len() != m) {
            return Err(Error::Spec("permutations of different degrees".into()));
        }
        let act: Vec<Vec<usize>> = (0..m).map(|x| perms.iter().map(|p| p[x]).collect()).collect();
        GroupAction::new(name, g, &act)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, x: usize, a: usize) -> usize {
        self.act[x * self.group.order() + a] as usize
    }

    pub fn to_spec(&self, group: GroupSpec) -> ActionSpec {
        ActionSpec {
            group,
            act: (0..self.size).map(|x| self.group.elements().map(|a| self.act(x, a)).collect()).collect(),
            name: Some(self.name.clone()),
        }
    }

    /// `A S = {x s | x ∈ A, s ∈ S}`.
    pub fn act_set(&self, a: &Subset, s: &Subset) -> Subset {
        let mut out = Subset::empty(self.size);
        for x in a {
            for p in s {
                out.insert(self.act(x, p));
            }
        }
        out
    }

    pub fn orbit(&self, x: usize) -> Subset {
        self.act_set(&Subset::singleton(self.size, x), &self.group.full_set())
    }

    /// Whether `η_x : a ↦ x a` is injective, i.e. the orbit of x is free.
    pub fn is_free_at(&self, x: usize) -> bool {
        self.group.elements().filter(|&a| self.act(x, a) == x).count() == 1
    }

    pub fn free_point(&self) -> Option<usize> {
        (0..self.size).find(|&x| self.is_free_at(x))
    }

    fn check(&self, s: &Subset) -> Result<()> {
        if s.universe() != self.group.order() {
            return Err(Error::Domain(format!("subset over {} elements, group has order {}", s.universe(), self.group.order())));
        }
        Ok(())
    }
}

/// Distances `d_S^X(x, ·)`.
pub fn action_distances(a: &GroupAction, s: &Subset, x: usize) -> Vec<ExtNat> {
    let mut dist = vec![Inf; a.size()];
    dist[x] = Fin(0);
    let mut queue = VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        let d = dist[y];
        for p in s {
            let z = a.act(y, p);
            if dist[z] == Inf {
                dist[z] = d + Fin(1);
                queue.push_back(z);
            }
        }
    }
    dist
}

pub fn action_word_metric(a: &GroupAction, s: &Subset, x: usize, y: usize) -> Result<ExtNat> {
    a.check(s)?;
    for p in [x, y] {
        if p >= a.size() {
            return Err(Error::OutOfRange { element: p, size: a.size() });
        }
    }
    Ok(action_distances(a, s, x)[y])
}

pub fn action_metric_table(a: &GroupAction, s: &Subset) -> Result<MetricTable> {
    a.check(s)?;
    let rows: Vec<Vec<ExtNat>> = (0..a.size()).into_par_iter().map(|x| action_distances(a, s, x)).collect();
    Ok(MetricTable::new(a.size(), rows.concat(), Flavor::Additive))
}

/// `d_S^X(xa, xb) ≤ d_S^G(a, b)` for all a, b, with equality when `η_x` is
/// injective.
pub fn orbit_map_check(a: &GroupAction, s: &Subset, x: usize) -> Result<Report> {
    a.check(s)?;
    let g = a.group();
    let free = a.is_free_at(x);
    let mut report = Report::new(format!("orbit map at {x} on {}", a.name()));
    let dg = word_metric_table(g, s);
    let dx = action_metric_table(a, s)?;
    for p in g.elements() {
        for q in g.elements() {
            let (lhs, rhs) = (dx.get(a.act(x, p), a.act(x, q)), dg.get(p, q));
            report.check("eta_x 1-Lipschitz", lhs <= rhs, || format!("S = {s}, a = {p}, b = {q}: {lhs} > {rhs}"));
            if free {
                report.check("eta_x isometric when injective", lhs == rhs, || format!("S = {s}, a = {p}, b = {q}"));
            }
        }
    }
    if !free {
        report.skip("eta_x isometric when injective", "stabilizer is nontrivial");
    }
    Ok(report)
}

/// Pairs `(a, b)` where the orbit map strictly shortens distances.
pub fn orbit_map_strict(a: &GroupAction, s: &Subset, x: usize) -> Result<Vec<(usize, usize)>> {
    a.check(s)?;
    let g = a.group();
    let dg = word_metric_table(g, s);
    let dx = action_metric_table(a, s)?;
    Ok(g.elements()
        .flat_map(|p| g.elements().map(move |q| (p, q)))
        .filter(|&(p, q)| dx.get(a.act(x, p), a.act(x, q)) < dg.get(p, q))
        .collect())
}

/// `d_S^X ≤ ν_H(S, T)·d_T^X` pointwise, with `∞·0 = 0`. Off the diagonal the
/// bound needs `T ∉ {∅, {e}}`; those pairs are reported as skipped.
pub fn comparison_bound_check(a: &GroupAction, s: &Subset, t: &Subset) -> Result<Report> {
    a.check(s)?;
    a.check(t)?;
    let nu = nu_h(a.group(), s, t);
    let (ds, dt) = (action_metric_table(a, s)?, action_metric_table(a, t)?);
    let mut report = Report::new(format!("comparison bound on {}", a.name()));
    // For T in {∅, {e}}, ν_H(S, T) = 0 and d_T = ∞ off the diagonal, so the
    // right side collapses to 0 there.
    let degenerate = !Family::Starred.contains(a.group(), t);
    for x in 0..a.size() {
        for y in 0..a.size() {
            if degenerate && x != y {
                report.skip("d_S <= nu_H(S, T) d_T", "T is empty or {e}");
                continue;
            }
            let (l, r) = (ds.get(x, y), nu * dt.get(x, y));
            report.check("d_S <= nu_H(S, T) d_T", l <= r, || format!("S = {s}, T = {t}, ({x}, {y}): {l} > {r}"));
        }
    }
    Ok(report)
}

/// `λ(d_T|, d_S|) ≤ ν_H(S, T)` over pairs of `𝒮(G)^*`, on the off-diagonal
/// pairs of X, and equality when some orbit is free.
pub fn function_space_embedding_check(a: &GroupAction, sample: Sample) -> Result<Report> {
    if a.size() < 2 {
        return Err(Error::Domain("the embedding needs at least two points".into()));
    }
    let g = a.group();
    let (sets, pairs) = Family::Starred.pairs(g, sample)?;
    let off: Vec<(usize, usize)> = (0..a.size()).flat_map(|x| (0..a.size()).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let restricted: Vec<MetricFunction> = sets
        .par_iter()
        .map(|s| {
            let t = action_metric_table(a, s).unwrap();
            MetricFunction::new(off.iter().map(|&(x, y)| t.get(x, y)).collect())
        })
        .collect();
    let free = a.free_point();
    let mut report = Report::new(format!("function space embedding on {}", a.name()));
    let results: Vec<(usize, usize, ExtNat, crate::extnat::ExtRatio)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let r = lambda(&restricted[j], &restricted[i]).expect("off-diagonal distances are at least 1");
            (i, j, nu_h(g, &sets[i], &sets[j]), r)
        })
        .collect();
    for (i, j, nu, r) in results {
        report.check("lambda(d_T|, d_S|) <= nu_H(S, T)", r <= nu.into(), || format!("S = {}, T = {}: {r:?} vs {nu}", sets[i], sets[j]));
        if free.is_some() {
            report.check("lambda(d_T|, d_S|) = nu_H(S, T) with a free point", r == nu.into(), || {
                format!("S = {}, T = {}: {r:?} vs {nu}", sets[i], sets[j])
            });
        }
    }
    if free.is_none() {
        report.skip("lambda(d_T|, d_S|) = nu_H(S, T) with a free point", "no orbit is free");
    }
    Ok(report)
}

/// An equivariant self-map `(f, φ)`: `f(x a) = f(x) φ(a)` with φ an
/// endomorphism of the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantMap {
    f: Vec<usize>,
    phi: Vec<usize>,
}

impl EquivariantMap {
    pub fn new(a: &GroupAction, f: Vec<usize>, phi: Vec<usize>) -> Result<EquivariantMap> {
        let g = a.group();
        if f.len() != a.size() || f.iter().any(|&y| y >= a.size()) {
            return Err(Error::Spec("point map is not a self-map of the carrier".into()));
        }
        if phi.len() != g.order() || phi.iter().any(|&y| y >= g.order()) {
            return Err(Error::Spec("group map is not a self-map of the group".into()));
        }
        for p in g.elements() {
            for q in g.elements() {
                if phi[g.mul(p, q)] != g.mul(phi[p], phi[q]) {
                    return Err(axiom("equivariant map", "phi(ab) = phi(a) phi(b)", format!("a = {p}, b = {q}")));
                }
            }
        }
        for x in 0..a.size() {
            for p in g.elements() {
                if f[a.act(x, p)] != a.act(f[x], phi[p]) {
                    return Err(axiom("equivariant map", "f(x a) = f(x) phi(a)", format!("x = {x}, a = {p}")));
                }
            }
        }
        Ok(EquivariantMap { f, phi })
    }

    pub fn identity(a: &GroupAction) -> EquivariantMap {
        EquivariantMap {
            f: (0..a.size()).collect(),
            phi: a.group().elements().collect(),
        }
    }

    pub fn point_map(&self) -> &[usize] {
        &self.f
    }

    pub fn group_map(&self) -> &[usize] {
        &self.phi
    }

    /// `u v`: apply u, then v.
    pub fn then(&self, v: &EquivariantMap) -> EquivariantMap {
        EquivariantMap {
            f: self.f.iter().map(|&x| v.f[x]).collect(),
            phi: self.phi.iter().map(|&x| v.phi[x]).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        is_permutation(&self.f) && is_permutation(&self.phi)
    }

    pub fn image(&self, s: &Subset) -> Subset {
        Subset::from_indices(s.universe(), s.iter().map(|p| self.phi[p])).unwrap()
    }
}

fn is_permutation(f: &[usize]) -> bool {
    let mut seen = vec![false; f.len()];
    f.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
}

/// `(ρ_a, a⁻¹(·)a)` for every a.
pub fn inner_symmetries(a: &GroupAction) -> Vec<EquivariantMap> {
    let g = a.group();
    g.elements()
        .map(|p| EquivariantMap {
            f: (0..a.size()).map(|x| a.act(x, p)).collect(),
            phi: g.elements().map(|q| g.conj(q, p)).collect(),
        })
        .collect()
}

/// The maps generated by `maps` under reversed composition.
pub fn symmetry_closure(maps: &[EquivariantMap]) -> Vec<EquivariantMap> {
    let mut out: Vec<EquivariantMap> = Vec::new();
    for u in maps {
        if !out.contains(u) {
            out.push(u.clone());
        }
    }
    let mut i = 0;
    while i < out.len() {
        for j in 0..out.len() {
            for c in [out[i].then(&out[j]), out[j].then(&out[i])] {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        i += 1;
    }
    out
}

/// For M the closure of `maps`:
///
/// - `d_{S^u}(x^u, y^u) ≤ d_S(x, y)`, with equality for units of M;
/// - when S is M-invariant, `d_S(x^u, y^u) ≤ d_S(x, y)`, with equality for
///   units.
pub fn symmetry_monotonicity_check(a: &GroupAction, maps: &[EquivariantMap], s: &Subset) -> Result<Report> {
    a.check(s)?;
    for u in maps {
        EquivariantMap::new(a, u.f.clone(), u.phi.clone())?;
    }
    let m = symmetry_closure(maps);
    let invariant = m.iter().all(|u| u.image(s).is_subset(s));
    let mut report = Report::new(format!("symmetries of {}, |M| = {}", a.name(), m.len()));
    let ds = action_metric_table(a, s)?;
    for u in &m {
        let su = u.image(s);
        let dsu = action_metric_table(a, &su)?;
        let unit = u.is_bijective();
        for x in 0..a.size() {
            for y in 0..a.size() {
                let (lhs, rhs) = (dsu.get(u.f[x], u.f[y]), ds.get(x, y));
                report.check("d_{S^u}(x^u, y^u) <= d_S(x, y)", lhs <= rhs, || format!("S = {s}, ({x}, {y}), u = {u:?}"));
                if unit {
                    report.check("d_{S^u}(x^u, y^u) = d_S(x, y) for units", lhs == rhs, || format!("S = {s}, ({x}, {y}), u = {u:?}"));
                }
                if invariant {
                    let l2 = ds.get(u.f[x], u.f[y]);
                    report.check("S invariant: d_S(x^u, y^u) <= d_S(x, y)", l2 <= rhs, || format!("S = {s}, ({x}, {y})"));
                    if unit {
                        report.check("S invariant: d_S(x^u, y^u) = d_S(x, y) for units", l2 == rhs, || format!("S = {s}, ({x}, {y})"));
                    }
                }
            }
        }
    }
    if !invariant {
        report.skip("S invariant: d_S(x^u, y^u) <= d_S(x, y)", "S is not M-invariant");
    }
    Ok(report)
}

/// General properties of `d_S^X` for sampled S: the metric axioms, inversion
/// symmetry, balls, `d_S = d_{S ∪ {e}}`, the unit sphere, conjugation, and
/// monotonicity in S.
pub fn action_properties(a: &GroupAction, sample: Sample) -> Result<Report> {
    let g = a.group();
    let sets = Family::All.members(g, sample)?;
    let mut report = Report::new(format!("action word metric on {}", a.name()));
    let tables: Vec<MetricTable> = sets.par_iter().map(|s| action_metric_table(a, s).unwrap()).collect();
    for (i, s) in sets.iter().enumerate() {
        let d = &tables[i];
        let ax = check_metric_axioms(d);
        report.check("nondegenerate asymmetric metric", ax.is_asymmetric_metric() && ax.is_nondegenerate(), || {
            format!("S = {s}: {}", ax.classification())
        });
        if is_symmetric(g, s) {
            report.check("S symmetric gives a metric", ax.is_metric(), || format!("S = {s}"));
        }
        let dinv = action_metric_table(a, &inverse(g, s))?;
        let de = action_metric_table(a, &s.with(g.identity()))?;
        for x in 0..a.size() {
            for y in 0..a.size() {
                report.check("d_S(x,y) = d_{S^-1}(y,x)", d.get(x, y) == dinv.get(y, x), || format!("S = {s}, ({x}, {y})"));
                report.check("d_S = d_{S u e}", d.get(x, y) == de.get(x, y), || format!("S = {s}, ({x}, {y})"));
            }
            let point = Subset::singleton(a.size(), x);
            for n in 0..=3u64 {
                let ball = Subset::from_indices(a.size(), (0..a.size()).filter(|&y| d.get(x, y) <= Fin(n))).unwrap();
                report.check("B(x, n) = x S^{<=n}", ball == a.act_set(&point, &power_leq(g, s, Fin(n))), || {
                    format!("S = {s}, x = {x}, n = {n}")
                });
            }
            let sphere = Subset::from_indices(a.size(), (0..a.size()).filter(|&y| d.get(x, y) == Fin(1))).unwrap();
            report.check("d_S(x, .)^-1(1) = xS - x", sphere == a.act_set(&point, s).without(x), || format!("S = {s}, x = {x}"));
        }
        for p in [1usize, g.order() / 2, g.order() - 1] {
            let p = p.min(g.order() - 1);
            let sp = Subset::from_indices(g.order(), s.iter().map(|q| g.conj(q, p))).unwrap();
            let dsp = action_metric_table(a, &sp)?;
            for x in 0..a.size() {
                for y in 0..a.size() {
                    report.check("d_{S^a}(xa, ya) = d_S(x, y)", dsp.get(a.act(x, p), a.act(y, p)) == d.get(x, y), || {
                        format!("S = {s}, a = {p}, ({x}, {y})")
                    });
                }
            }
        }
    }
    let n = sets.len();
    for (i, j) in (Sample::Random { count: n.min(2048), seed: n as u64 }).pairs(n) {
        if sets[i].is_subset(&sets[j]) {
            let (di, dj) = (&tables[i], &tables[j]);
            let ok = (0..a.size()).all(|x| (0..a.size()).all(|y| di.get(x, y) >= dj.get(x, y)));
            report.check("S in T gives d_S >= d_T", ok, || format!("S = {}, T = {}", sets[i], sets[j]));
        }
        let (s, t) = (&sets[i], &sets[j]);
        let u = s | t;
        let (du, ds) = (action_metric_table(a, &u)?, &tables[i]);
        let ok = (0..a.size()).all(|x| (0..a.size()).all(|y| ds.get(x, y) >= du.get(x, y)));
        report.check("S in T gives d_S >= d_T", ok, || format!("S = {s}, T = {u}"));
    }
    Ok(report)
}

/// The inner automorphism group of a quandle acting on its carrier, with the
/// generating sets of `Inn(X)` and `Dis(X)`.
#[derive(Clone, Debug)]
pub struct QuandleAction {
    pub action: GroupAction,
    /// `σ_a(x) = x ∗ a`, as group elements indexed by a.
    pub sigma: Vec<usize>,
    /// `{σ_a}`.
    pub inn_generators: Subset,
    /// `{σ_a σ_b⁻¹}`.
    pub dis_generators: Subset,
}

/// `Inn(X) = ⟨σ_a⟩` with `f·g = g∘f`, acting by `x·f = f(x)`.
pub fn automorphism_action(x: &StarSet) -> Result<QuandleAction> {
    if x.size() > AUTOMORPHISM_CARRIER_CAP {
        return Err(Error::Cap(format!("automorphism actions need a carrier of at most {AUTOMORPHISM_CARRIER_CAP} points")));
    }
    x.check_quandle()?;
    let sigmas: Vec<Vec<usize>> = (0..x.size()).map(|a| x.right_translation(a)).collect();
    let (g, perms) = FiniteGroup::from_permutations(format!("Inn({})", x.name()), x.size(), &sigmas)?;
    let g = Arc::new(g);
    let sigma: Vec<usize> = sigmas.iter().map(|s| perms.iter().position(|p| p == s).unwrap()).collect();
    let action = GroupAction::from_permutations(format!("Inn({}) on {}", x.name(), x.name()), g.clone(), &perms)?;
    let inn_generators = Subset::from_indices(g.order(), sigma.iter().copied()).unwrap();
    let dis_generators =
        Subset::from_indices(g.order(), sigma.iter().flat_map(|&p| sigma.iter().map(|&q| g.mul(p, g.inv(q))).collect::<Vec<_>>())).unwrap();
    Ok(QuandleAction {
        action,
        sigma,
        inn_generators,
        dis_generators,
    })
}

/// Translations of the nontrivial catalog groups of order at most 8, `S_3` on 3 points, `D_4` on a
/// square and the inner actions of the dihedral quandles `R_3 .. R_6`.
pub fn action_catalog() -> Vec<GroupAction> {
    let mut out: Vec<GroupAction> = crate::catalog::catalog_up_to(8)
        .into_iter()
        .filter(|g| g.order() > 1)
        .map(|g| GroupAction::right_translation(Arc::new(g)))
        .collect();
    out.push(GroupAction::symmetric_on_points(3).unwrap());
    out.push(GroupAction::dihedral_on_vertices(4).unwrap());
    for n in 3..=6 {
        out.push(automorphism_action(&StarSet::dihedral_quandle(n).unwrap()).unwrap().action);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::word_metric;

    fn z2_on_three() -> GroupAction {
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        GroupAction::new("Z2 on 3 points", g, &[vec![0, 1], vec![1, 0], vec![2, 2]]).unwrap()
    }

    /// `d(x, y)` by growing `x S^n` one layer at a time.
    fn naive_distance(a: &GroupAction, s: &Subset, x: usize, y: usize) -> ExtNat {
        let mut layer = Subset::singleton(a.size(), x);
        for n in 0..=a.size() as u64 {
            if layer.contains(y) {
                return Fin(n);
            }
            layer = a.act_set(&layer, s);
        }
        Inf
    }

    #[test]
    fn validation() {
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        assert!(GroupAction::new("bad", g.clone(), &[vec![1, 0], vec![0, 1]]).is_err());
        assert!(GroupAction::new("bad", g.clone(), &[vec![0, 1]]).is_err());
        assert!(GroupAction::new("bad", g, &[vec![0, 1], vec![1]]).is_err());
        // the cyclic shift of three points is not an action of S3 through lex order
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let act: Vec<Vec<usize>> = (0..3).map(|x| (0..6).map(|a| (x + a) % 3).collect()).collect();
        let err = GroupAction::new("bad", s3, &act).unwrap_err().to_string();
        assert!(err.contains("(x a) b"), "{err}");
        let json = r#"{"group": {"kind": "cyclic", "n": 2}, "act": [[0, 1], [1, 0], [2, 2]]}"#;
        assert_eq!(GroupAction::from_json(json).unwrap().size(), 3);
    }

    #[test]
    fn catalog_actions_are_valid() {
        for a in action_catalog() {
            assert!(a.size() >= 2, "{}", a.name());
        }
    }

    #[test]
    fn spec_examples() {
        let a = GroupAction::symmetric_on_points(3).unwrap();
        // transpositions (12) and (13) on points 0, 1, 2 sit at indices 1 and 2
        let perms = permutation_elements(3, false);
        assert_eq!(perms[1], vec![0, 2, 1]);
        assert_eq!(perms[2], vec![1, 0, 2]);
        let (t12, t13) = (perms.iter().position(|p| p == &vec![1, 0, 2]).unwrap(), perms.iter().position(|p| p == &vec![2, 1, 0]).unwrap());
        let s = Subset::from_indices(6, [t12, t13]).unwrap();
        assert_eq!(action_word_metric(&a, &s, 0, 2).unwrap(), Fin(1));
        assert_eq!(action_word_metric(&a, &s, 1, 1).unwrap(), Fin(0));

        let z = z2_on_three();
        let nontrivial = Subset::singleton(2, 1);
        assert_eq!(action_word_metric(&z, &nontrivial, 2, 0).unwrap(), Inf);
        assert_eq!(action_word_metric(&z, &nontrivial, 0, 1).unwrap(), Fin(1));
    }

    #[test]
    fn bfs_matches_layer_oracle() {
        for a in action_catalog().into_iter().filter(|a| a.group().order() <= 6) {
            for s in crate::bitset::all_subsets(a.group().order()) {
                let t = action_metric_table(&a, &s).unwrap();
                for x in 0..a.size() {
                    for y in 0..a.size() {
                        assert_eq!(t.get(x, y), naive_distance(&a, &s, x, y), "{} {s}", a.name());
                    }
                }
            }
        }
    }

    #[test]
    fn translation_reproduces_word_metric() {
        for g in crate::catalog::catalog_up_to(8) {
            let g = Arc::new(g);
            let a = GroupAction::right_translation(g.clone());
            for s in crate::bitset::all_subsets(g.order()).step_by(7) {
                let t = action_metric_table(&a, &s).unwrap();
                assert_eq!(t, word_metric_table(&g, &s), "{} {s}", g.name());
            }
        }
    }

    #[test]
    fn orbit_map_dichotomy() {
        let z4 = GroupAction::right_translation(Arc::new(FiniteGroup::cyclic(4).unwrap()));
        for s in crate::bitset::all_subsets(4) {
            let r = orbit_map_check(&z4, &s, 0).unwrap();
            assert!(r.is_ok() && r.get("eta_x isometric when injective").unwrap().passed == 16, "{r}");
        }
        let a = GroupAction::symmetric_on_points(3).unwrap();
        assert!(!a.is_free_at(0));
        let s = Subset::from_indices(6, [1, 2]).unwrap();
        let r = orbit_map_check(&a, &s, 0).unwrap();
        assert!(r.is_ok(), "{r}");
        // the stabilizer {e, (12)} of point 0 collapses e and its partner
        let strict = orbit_map_strict(&a, &s, 0).unwrap();
        assert!(strict.contains(&(0, 1)), "{strict:?}");
        assert_eq!(word_metric(a.group(), &s, 0, 1), Fin(1));
    }

    #[test]
    fn comparison_bound() {
        let z6 = GroupAction::right_translation(Arc::new(FiniteGroup::cyclic(6).unwrap()));
        let s = Subset::from_indices(6, [1, 5]).unwrap();
        let t = Subset::from_indices(6, [2, 3, 4]).unwrap();
        assert_eq!(nu_h(z6.group(), &s, &t), Fin(3));
        let r = comparison_bound_check(&z6, &s, &t).unwrap();
        assert!(r.is_ok(), "{r}");
        let r = comparison_bound_check(&z6, &s, &s).unwrap();
        assert!(r.is_ok(), "{r}");
        // T = {2} does not generate, so d_T is infinite off the even cosets
        let t2 = Subset::from_indices(6, [2]).unwrap();
        assert_eq!(nu_h(z6.group(), &s, &t2), Fin(2));
        assert_eq!(nu_h(z6.group(), &t2, &s), Inf);
        for (p, q) in [(&s, &t2), (&t2, &s)] {
            let r = comparison_bound_check(&z6, p, q).unwrap();
            assert!(r.is_ok(), "{r}");
        }
    }

    #[test]
    fn embedding_check() {
        let z4 = GroupAction::right_translation(Arc::new(FiniteGroup::cyclic(4).unwrap()));
        let r = function_space_embedding_check(&z4, Sample::Exhaustive).unwrap();
        assert!(r.is_ok(), "{r}");
        assert!(r.get("lambda(d_T|, d_S|) = nu_H(S, T) with a free point").unwrap().passed > 0);
        let a = GroupAction::symmetric_on_points(3).unwrap();
        let r = function_space_embedding_check(&a, Sample::Exhaustive).unwrap();
        assert!(r.is_ok(), "{r}");
        assert_eq!(r.get("lambda(d_T|, d_S|) = nu_H(S, T) with a free point").unwrap().passed, 0);
        let one = GroupAction::new("point", Arc::new(FiniteGroup::cyclic(2).unwrap()), &[vec![0, 0]]).unwrap();
        assert!(function_space_embedding_check(&one, Sample::Exhaustive).is_err());
    }

    #[test]
    fn non_free_embedding_can_be_strict() {
        // on three points {(12)} and {(12), (13)} give the same distances from
        // orbit-separated points, so lambda drops below nu_H for some pair
        let a = GroupAction::symmetric_on_points(3).unwrap();
        let (sets, pairs) = Family::Starred.pairs(a.group(), Sample::Exhaustive).unwrap();
        let off: Vec<(usize, usize)> = (0..3).flat_map(|x| (0..3).filter(move |&y| y != x).map(move |y| (x, y))).collect();
        let restrict = |s: &Subset| {
            let t = action_metric_table(&a, s).unwrap();
            MetricFunction::new(off.iter().map(|&(x, y)| t.get(x, y)).collect())
        };
        let strict = pairs.iter().any(|&(i, j)| {
            let r = lambda(&restrict(&sets[j]), &restrict(&sets[i])).unwrap();
            r < nu_h(a.group(), &sets[i], &sets[j]).into()
        });
        assert!(strict);
    }

    #[test]
    fn symmetries() {
        for a in [GroupAction::symmetric_on_points(3).unwrap(), GroupAction::dihedral_on_vertices(4).unwrap(), z2_on_three()] {
            let inner = inner_symmetries(&a);
            for s in crate::bitset::all_subsets(a.group().order()).step_by(3) {
                let r = symmetry_monotonicity_check(&a, &inner, &s).unwrap();
                assert!(r.is_ok(), "{r}");
                assert!(r.get("d_{S^u}(x^u, y^u) = d_S(x, y) for units").unwrap().passed > 0);
                let r = symmetry_monotonicity_check(&a, &[EquivariantMap::identity(&a)], &s).unwrap();
                assert!(r.is_ok(), "{r}");
            }
        }
        let a = z2_on_three();
        assert!(EquivariantMap::new(&a, vec![0, 0, 2], vec![0, 1]).is_err());
        // collapsing the free orbit onto the fixed point with the trivial hom
        let collapse = EquivariantMap::new(&a, vec![2, 2, 2], vec![0, 0]).unwrap();
        let r = symmetry_monotonicity_check(&a, &[collapse], &Subset::singleton(2, 1)).unwrap();
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn quandle_automorphisms() {
        let q = automorphism_action(&StarSet::dihedral_quandle(3).unwrap()).unwrap();
        assert_eq!(q.action.group().order(), 6);
        assert_eq!(q.inn_generators.count(), 3);
        let r = symmetry_monotonicity_check(&q.action, &inner_symmetries(&q.action), &q.inn_generators).unwrap();
        assert!(r.is_ok(), "{r}");
        assert!(r.get("S invariant: d_S(x^u, y^u) = d_S(x, y) for units").unwrap().passed > 0);

        let t = automorphism_action(&StarSet::trivial_quandle(3).unwrap()).unwrap();
        assert_eq!(t.action.group().order(), 1);
        let d = action_metric_table(&t.action, &t.inn_generators).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(d.get(x, y), if x == y { Fin(0) } else { Inf });
            }
        }

        let r4 = automorphism_action(&StarSet::dihedral_quandle(4).unwrap()).unwrap();
        let g = r4.action.group();
        for p in &r4.dis_generators {
            let shift = (4 + r4.action.act(1, p) - 1) % 4;
            assert_eq!(shift % 2, 0);
            assert!((0..4).all(|x| r4.action.act(x, p) == (x + shift) % 4));
        }
        assert_eq!(r4.dis_generators.count(), 2);
        assert!(r4.dis_generators.contains(g.identity()));

        assert!(automorphism_action(&StarSet::from_group(&FiniteGroup::cyclic(3).unwrap())).is_err());
    }

    #[test]
    fn properties_on_catalog() {
        for a in action_catalog() {
            let sample = if a.group().order() <= 6 { Sample::Exhaustive } else { Sample::Random { count: 60, seed: 3 } };
            let r = action_properties(&a, sample).unwrap();
            assert!(r.is_ok(), "{r}");
        }
    }
}
