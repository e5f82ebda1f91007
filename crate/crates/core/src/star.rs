//! Sets with one or more binary operations (∗-sets): mixed-parenthesization
//! powers, word lengths, the induced `ν_H`, two word metrics, and invariance
//! under families of ∗-endomorphisms.
//!
//! An element lies in `S^n` exactly when some product tree with n leaves
//! from S evaluates to it, so `ν_S` is a shortest expression-tree length and
//! is computed with a Knuth-style generalization of Dijkstra's algorithm.
//! The explicit inductive powers are kept for enumeration and as an oracle.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::bitset::Subset;
use crate::error::{axiom, Error, Result};
use crate::extnat::{ExtNat, Fin, Inf};
use crate::group::FiniteGroup;
use crate::metric::{Flavor, MetricTable};
use crate::report::{Report, Sample};

/// Largest supported carrier.
pub const STAR_CARRIER_CAP: usize = 64;

/// Largest number of operations.
pub const MAX_OPS: usize = 3;

/// JSON form of a ∗-set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarSetSpec {
    pub size: usize,
    pub ops: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unital: Option<usize>,
}

/// A finite carrier with 1 to 3 total binary operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarSet {
    name: String,
    size: usize,
    ops: Vec<Vec<u32>>,
    unital: Option<usize>,
}

impl StarSet {
    pub fn from_spec(name: impl Into<String>, spec: &StarSetSpec) -> Result<StarSet> {
        let m = spec.size;
        if m == 0 || m > STAR_CARRIER_CAP {
            return Err(Error::Spec(format!("carrier size {m} outside 1..={STAR_CARRIER_CAP}")));
        }
        if spec.ops.is_empty() || spec.ops.len() > MAX_OPS {
            return Err(Error::Spec(format!("{} operations, expected 1..={MAX_OPS}", spec.ops.len())));
        }
        let mut ops = Vec::with_capacity(spec.ops.len());
        for (i, table) in spec.ops.iter().enumerate() {
            if table.len() != m || table.iter().any(|row| row.len() != m) {
                return Err(Error::Spec(format!("operation {i} is not a {m}x{m} table")));
            }
            let mut flat = Vec::with_capacity(m * m);
            for row in table {
                for &v in row {
                    if v >= m {
                        return Err(Error::OutOfRange { element: v, size: m });
                    }
                    flat.push(v as u32);
                }
            }
            ops.push(flat);
        }
        let x = StarSet {
            name: name.into(),
            size: m,
            ops,
            unital: spec.unital,
        };
        if let Some(e) = spec.unital {
            if e >= m {
                return Err(Error::OutOfRange { element: e, size: m });
            }
            for i in 0..x.ops.len() {
                for a in 0..m {
                    if x.op(i, e, a) != a || x.op(i, a, e) != a {
                        return Err(axiom("star set", "identity", format!("op {i}, element {a}")));
                    }
                }
            }
        }
        Ok(x)
    }

    pub fn from_json(name: impl Into<String>, json: &str) -> Result<StarSet> {
        let spec: StarSetSpec = serde_json::from_str(json)?;
        StarSet::from_spec(name, &spec)
    }

    pub fn to_spec(&self) -> StarSetSpec {
        StarSetSpec {
            size: self.size,
            ops: self.ops.iter().map(|t| t.chunks(self.size).map(|r| r.iter().map(|&v| v as usize).collect()).collect()).collect(),
            unital: self.unital,
        }
    }

    /// The multiplication table of a group, unital at its identity.
    pub fn from_group(g: &FiniteGroup) -> StarSet {
        StarSet {
            name: g.name().to_string(),
            size: g.order(),
            ops: vec![g.elements().flat_map(|a| g.elements().map(move |b| g.mul(a, b) as u32)).collect()],
            unital: Some(g.identity()),
        }
    }

    /// `R_n`: `x ∗ y = 2y − x mod n`.
    pub fn dihedral_quandle(n: usize) -> Result<StarSet> {
        StarSet::binary(format!("R{n}"), n, |x, y| (2 * y + n - x) % n)
    }

    /// `T_n`: `x ∗ y = x`.
    pub fn trivial_quandle(n: usize) -> Result<StarSet> {
        StarSet::binary(format!("T{n}"), n, |x, _| x)
    }

    /// `Conj(G)`: `x ∗ y = y⁻¹ x y`.
    pub fn conjugation_quandle(g: &FiniteGroup) -> Result<StarSet> {
        StarSet::binary(format!("Conj({})", g.name()), g.order(), |x, y| g.conj(x, y))
    }

    fn binary(name: String, n: usize, f: impl Fn(usize, usize) -> usize) -> Result<StarSet> {
        let ops = vec![(0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect()];
        StarSet::from_spec(
            name,
            &StarSetSpec {
                size: n,
                ops,
                unital: None,
            },
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn op_count(&self) -> usize {
        self.ops.len()
    }

    pub fn unital(&self) -> Option<usize> {
        self.unital
    }

    #[inline]
    pub fn op(&self, i: usize, x: usize, y: usize) -> usize {
        self.ops[i][x * self.size + y] as usize
    }

    /// `x ∗ y` over every operation.
    fn products(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.ops.len()).map(move |i| self.op(i, x, y))
    }

    pub fn empty_set(&self) -> Subset {
        Subset::empty(self.size)
    }

    pub fn full_set(&self) -> Subset {
        Subset::full(self.size)
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, elems: I) -> Result<Subset> {
        Subset::from_indices(self.size, elems).map_err(|x| Error::OutOfRange { element: x, size: self.size })
    }

    fn check(&self, s: &Subset) -> Result<()> {
        if s.universe() != self.size {
            return Err(Error::Domain(format!("subset over {} elements, carrier has {}", s.universe(), self.size)));
        }
        Ok(())
    }

    /// Checks the quandle axioms for operation 0: `x ∗ x = x`, each `σ_a`
    /// bijective, and right self-distributivity.
    pub fn check_quandle(&self) -> Result<()> {
        let m = self.size;
        for x in 0..m {
            if self.op(0, x, x) != x {
                return Err(axiom("quandle", "idempotence", format!("{x} * {x} = {}", self.op(0, x, x))));
            }
        }
        for a in 0..m {
            let image: Subset = Subset::from_indices(m, (0..m).map(|x| self.op(0, x, a))).unwrap();
            if !image.is_full() {
                return Err(axiom("quandle", "right translations bijective", format!("sigma_{a}")));
            }
        }
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    let lhs = self.op(0, self.op(0, x, y), z);
                    let rhs = self.op(0, self.op(0, x, z), self.op(0, y, z));
                    if lhs != rhs {
                        return Err(axiom("quandle", "self-distributivity", format!("({x}, {y}, {z})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `σ_a(x) = x ∗ a` for operation 0.
    pub fn right_translation(&self, a: usize) -> Vec<usize> {
        (0..self.size).map(|x| self.op(0, x, a)).collect()
    }

    /// Whether `f` is a ∗-endomorphism, with a failing `(op, x, y)` if not.
    pub fn endomorphism_witness(&self, f: &[usize]) -> Option<(usize, usize, usize)> {
        if f.len() != self.size || f.iter().any(|&v| v >= self.size) {
            return Some((usize::MAX, usize::MAX, usize::MAX));
        }
        for i in 0..self.ops.len() {
            for x in 0..self.size {
                for y in 0..self.size {
                    if f[self.op(i, x, y)] != self.op(i, f[x], f[y]) {
                        return Some((i, x, y));
                    }
                }
            }
        }
        None
    }
}

/// `A ∗ B` over all operations.
pub fn star_product(x: &StarSet, a: &Subset, b: &Subset) -> Subset {
    let mut out = x.empty_set();
    for p in a {
        for q in b {
            for r in x.products(p, q) {
                out.insert(r);
            }
        }
    }
    out
}

/// The inductive powers `S^1, .., S^n` (index 0 holds `S^1`).
pub fn star_powers(x: &StarSet, s: &Subset, n: usize) -> Vec<Subset> {
    let mut powers: Vec<Subset> = Vec::with_capacity(n);
    if n == 0 {
        return powers;
    }
    powers.push(s.clone());
    for total in 2..=n {
        let mut next = x.empty_set();
        for k in 1..total {
            next.union_with(&star_product(x, &powers[k - 1], &powers[total - k - 1]));
        }
        powers.push(next);
    }
    powers
}

/// `⟨S⟩`, the least ∗-subset containing S.
pub fn star_closure(x: &StarSet, s: &Subset) -> Subset {
    let mut closed = s.clone();
    let mut frontier: Vec<usize> = s.to_vec();
    while let Some(p) = frontier.pop() {
        let members: Vec<usize> = closed.to_vec();
        for q in members {
            for r in x.products(p, q).chain(x.products(q, p)) {
                if closed.insert(r) {
                    frontier.push(r);
                }
            }
        }
    }
    closed
}

/// `S^n`; `S^0 = {e}` needs a unital ∗-set, and `S^∞ = ⟨S⟩` (with e added
/// in the unital case).
pub fn star_power(x: &StarSet, s: &Subset, n: ExtNat) -> Result<Subset> {
    x.check(s)?;
    match n {
        Fin(0) => match x.unital() {
            Some(e) => Ok(Subset::singleton(x.size(), e)),
            None => Err(Error::Domain("S^0 is defined only for unital star sets".into())),
        },
        Fin(k) => Ok(star_powers(x, s, k as usize).pop().unwrap()),
        Inf => {
            let mut c = star_closure(x, s);
            if let Some(e) = x.unital() {
                c.insert(e);
            }
            Ok(c)
        }
    }
}

/// `S^{≤n}`: the union of `S^k` for `1 ≤ k ≤ n`, and `S^0` when unital.
pub fn star_power_leq(x: &StarSet, s: &Subset, n: u64) -> Result<Subset> {
    x.check(s)?;
    let mut out = x.empty_set();
    if let Some(e) = x.unital() {
        out.insert(e);
    } else if n == 0 {
        return Err(Error::Domain("S^{<=0} is defined only for unital star sets".into()));
    }
    for p in star_powers(x, s, n as usize) {
        out.union_with(&p);
    }
    Ok(out)
}

/// Least number of leaves of a product tree over S evaluating to each
/// element, ignoring any identity.
fn tree_lengths(x: &StarSet, s: &Subset) -> Vec<ExtNat> {
    let m = x.size();
    let mut dist = vec![u64::MAX; m];
    let mut done = vec![false; m];
    let mut heap = BinaryHeap::new();
    for p in s {
        dist[p] = 1;
        heap.push(Reverse((1u64, p)));
    }
    let mut settled: Vec<usize> = Vec::new();
    while let Some(Reverse((d, p))) = heap.pop() {
        if done[p] || d != dist[p] {
            continue;
        }
        done[p] = true;
        settled.push(p);
        for &q in &settled {
            let cand = d + dist[q];
            for r in x.products(p, q).chain(x.products(q, p)) {
                if cand < dist[r] {
                    dist[r] = cand;
                    heap.push(Reverse((cand, r)));
                }
            }
        }
    }
    dist.into_iter().map(|d| if d == u64::MAX { Inf } else { Fin(d) }).collect()
}

/// `ν_S(x)` for every x: least n with `x ∈ S^n`, with `ν_S(e) = 0` when
/// unital.
pub fn star_word_lengths(x: &StarSet, s: &Subset) -> Result<Vec<ExtNat>> {
    x.check(s)?;
    let mut lengths = tree_lengths(x, s);
    if let Some(e) = x.unital() {
        lengths[e] = Fin(0);
    }
    Ok(lengths)
}

pub fn star_word_length(x: &StarSet, s: &Subset, p: usize) -> Result<ExtNat> {
    Ok(star_word_lengths(x, s)?[p])
}

/// `ν_H(S, T) = sup ν_S(T)` on nonempty subsets.
pub fn star_nu_h(x: &StarSet, s: &Subset, t: &Subset) -> Result<ExtNat> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::Domain("star nu_H is defined on nonempty subsets".into()));
    }
    let lengths = star_word_lengths(x, s)?;
    Ok(ExtNat::sup(t.iter().map(|p| lengths[p])))
}

/// Which family of products defines the word metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarMetricVariant {
    /// `[x, S, n]`: every product of `x, s_1, .., s_n` in this order.
    AllParenthesizations,
    /// `[x, S, n]′ = ((x ∗ s_1) ∗ s_2) ∗ ⋯ ∗ s_n`.
    LeftNormed,
}

/// Distances from `p` to every element.
pub fn star_distances(x: &StarSet, s: &Subset, p: usize, variant: StarMetricVariant) -> Result<Vec<ExtNat>> {
    x.check(s)?;
    if p >= x.size() {
        return Err(Error::OutOfRange { element: p, size: x.size() });
    }
    // [x, S, n] is the union over j < n of [x, S, j] * S^{n-j}, so a step
    // appends a whole subtree u of weight ν(u)
    let steps: Vec<(usize, u64)> = match variant {
        StarMetricVariant::AllParenthesizations => tree_lengths(x, s)
            .into_iter()
            .enumerate()
            .filter_map(|(u, l)| l.finite().map(|l| (u, l)))
            .collect(),
        StarMetricVariant::LeftNormed => s.iter().map(|u| (u, 1)).collect(),
    };
    let m = x.size();
    let mut dist = vec![u64::MAX; m];
    let mut heap = BinaryHeap::new();
    dist[p] = 0;
    heap.push(Reverse((0u64, p)));
    while let Some(Reverse((d, w))) = heap.pop() {
        if d != dist[w] {
            continue;
        }
        for &(u, l) in &steps {
            for r in x.products(w, u) {
                if d + l < dist[r] {
                    dist[r] = d + l;
                    heap.push(Reverse((d + l, r)));
                }
            }
        }
    }
    Ok(dist.into_iter().map(|d| if d == u64::MAX { Inf } else { Fin(d) }).collect())
}

pub fn star_word_metric(x: &StarSet, s: &Subset, p: usize, q: usize, variant: StarMetricVariant) -> Result<ExtNat> {
    Ok(star_distances(x, s, p, variant)?[q])
}

pub fn star_metric_table(x: &StarSet, s: &Subset, variant: StarMetricVariant) -> Result<MetricTable> {
    let mut values = Vec::with_capacity(x.size() * x.size());
    for p in 0..x.size() {
        values.extend(star_distances(x, s, p, variant)?);
    }
    Ok(MetricTable::new(x.size(), values, Flavor::Additive))
}

/// Power identities, subadditivity, the `ν_H` axioms and the comparison
/// `d_S ≤ d_S′`, for the sampled subsets of a ∗-set. Powers are checked up to
/// `max_n`.
pub fn star_properties(x: &StarSet, sample: Sample, max_n: usize) -> Result<Report> {
    let mut report = Report::new(format!("star set {}", x.name()));
    let sets: Vec<Subset> = match sample {
        Sample::Exhaustive => {
            if x.size() > 12 {
                return Err(Error::Cap(format!("refusing to enumerate subsets of a carrier of size {}", x.size())));
            }
            crate::bitset::all_subsets(x.size()).filter(|s| !s.is_empty()).collect()
        }
        Sample::Random { count, seed } => {
            let mut rng = Sample::rng(seed);
            let mut v = Vec::with_capacity(count);
            while v.len() < count {
                let s = crate::report::random_subset(&mut rng, x.size());
                if !s.is_empty() {
                    v.push(s);
                }
            }
            v
        }
    };
    let lengths: Vec<Vec<ExtNat>> = sets.iter().map(|s| star_word_lengths(x, s)).collect::<Result<_>>()?;
    let ones = |s: &Subset| match x.unital() {
        Some(e) => s.without(e),
        None => s.clone(),
    };
    for (s, nu) in sets.iter().zip(&lengths) {
        let powers = star_powers(x, s, max_n * max_n);
        for k in 1..=max_n {
            for l in 1..=max_n {
                report.check(
                    "S^k * S^l in S^{k+l}",
                    star_product(x, &powers[k - 1], &powers[l - 1]).is_subset(&powers[k + l - 1]),
                    || format!("S = {s}, k = {k}, l = {l}"),
                );
                report.check(
                    "(S^k)^l in S^{kl}",
                    star_powers(x, &powers[k - 1], l)[l - 1].is_subset(&powers[k * l - 1]),
                    || format!("S = {s}, k = {k}, l = {l}"),
                );
            }
        }
        for p in 0..x.size() {
            // the inductive definition is the oracle for the tree lengths
            let first = powers.iter().position(|sp| sp.contains(p)).map(|i| Fin(i as u64 + 1));
            let expected = match (x.unital(), first) {
                (Some(e), _) if e == p => Some(Fin(0)),
                (_, f) => f,
            };
            if let Some(want) = expected {
                report.check("nu_S matches inductive powers", nu[p] == want, || format!("S = {s}, x = {p}"));
            } else if nu[p].is_finite() {
                report.check("nu_S matches inductive powers", nu[p] > Fin((max_n * max_n) as u64), || {
                    format!("S = {s}, x = {p}")
                });
            }
            for q in 0..x.size() {
                for r in x.products(p, q) {
                    report.check("nu_S(x*y) <= nu_S(x) + nu_S(y)", nu[r] <= nu[p] + nu[q], || {
                        format!("S = {s}, x = {p}, y = {q}")
                    });
                }
            }
        }
        let level_one: Subset = Subset::from_indices(x.size(), (0..x.size()).filter(|&p| nu[p] == Fin(1))).unwrap();
        report.check("nu_S^-1(1) = S (minus e)", level_one == ones(s), || format!("S = {s}"));
        let closure = star_closure(x, s);
        if closure.is_full() {
            for t in &sets {
                let v = ExtNat::sup(t.iter().map(|p| nu[p]));
                report.check("S generating gives nu_H(S, T) finite", v.is_finite(), || format!("S = {s}, T = {t}"));
            }
        }
        for variant_pair in [(StarMetricVariant::AllParenthesizations, StarMetricVariant::LeftNormed)] {
            let d = star_metric_table(x, s, variant_pair.0)?;
            let d2 = star_metric_table(x, s, variant_pair.1)?;
            for (name, t) in [("d_S", &d), ("d_S'", &d2)] {
                let ax = crate::metric::check_metric_axioms(t);
                report.check(&format!("{name} nondegenerate asymmetric metric"), ax.is_asymmetric_metric() && ax.is_nondegenerate(), || {
                    format!("S = {s}: {}", ax.classification())
                });
            }
            for p in 0..x.size() {
                for q in 0..x.size() {
                    report.check("d_S <= d_S'", d.get(p, q) <= d2.get(p, q), || format!("S = {s}, ({p}, {q})"));
                }
            }
        }
    }
    let n = sets.len();
    let pairs = match sample {
        Sample::Exhaustive if n > 64 => Sample::Random { count: 4096, seed: 0 }.pairs(n),
        _ => sample.pairs(n),
    };
    for (i, j) in pairs {
        let nu_ij = ExtNat::sup(sets[j].iter().map(|p| lengths[i][p]));
        let nu_ji = ExtNat::sup(sets[i].iter().map(|p| lengths[j][p]));
        // with an identity, ν_S(e) = 0 and the comparisons hold up to e
        let (si, sj) = (with_unit(x, &sets[i]), with_unit(x, &sets[j]));
        report.check("nu_H(S,T) <= 1 iff T in S (up to e)", (nu_ij <= Fin(1)) == sj.is_subset(&si), || {
            format!("S = {}, T = {}", sets[i], sets[j])
        });
        report.check("nu_H nondegenerate (up to e)", !(nu_ij <= Fin(1) && nu_ji <= Fin(1)) || si == sj, || {
            format!("S = {}, T = {}", sets[i], sets[j])
        });
        let k = (i * 31 + j * 17) % n;
        if x.unital().is_some_and(|e| sets[j] == Subset::singleton(x.size(), e)) {
            report.skip("nu_H(S,S'') <= nu_H(S,S') nu_H(S',S'')", "S' = {e}");
            continue;
        }
        let nu_jk = ExtNat::sup(sets[k].iter().map(|p| lengths[j][p]));
        let nu_ik = ExtNat::sup(sets[k].iter().map(|p| lengths[i][p]));
        report.check("nu_H(S,S'') <= nu_H(S,S') nu_H(S',S'')", nu_ik <= nu_ij * nu_jk, || {
            format!("{}, {}, {}", sets[i], sets[j], sets[k])
        });
    }
    Ok(report)
}

fn with_unit(x: &StarSet, s: &Subset) -> Subset {
    match x.unital() {
        Some(e) => s.with(e),
        None => s.clone(),
    }
}

/// The maps generated by `maps` under composition. Entry order: the inputs,
/// then new composites in discovery order.
pub fn map_closure(maps: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for f in maps {
        if !out.contains(f) {
            out.push(f.clone());
        }
    }
    let mut i = 0;
    while i < out.len() {
        for j in 0..out.len() {
            for (a, b) in [(i, j), (j, i)] {
                // apply a then b
                let c: Vec<usize> = out[a].iter().map(|&p| out[b][p]).collect();
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        i += 1;
    }
    out
}

/// `S^R = {f(x) | x ∈ S, f ∈ R}`.
pub fn image_under(maps: &[Vec<usize>], s: &Subset) -> Subset {
    let mut out = Subset::empty(s.universe());
    for f in maps {
        for p in s {
            out.insert(f[p]);
        }
    }
    out
}

/// Invariance facts for a family R of ∗-endomorphisms, closed under
/// composition with `x^{a⋆b} = (x^a)^b`:
///
/// - `S^R` and `S ∪ S^R` are invariant, `⟨S⟩^a = ⟨S^a⟩`, `(S^n)^a = (S^a)^n`;
/// - for invariant `S′ = S ∪ S^R`: `ν_{S′}(x^a) ≤ ν_{S′}(x)` and
///   `ν_H(S′, T^R) ≤ ν_H(S′, T ∪ T^R) = ν_H(S′, T)`;
/// - sets `F ∪ F^R` that generate are at finite `ν_H` from each other.
pub fn phi_invariance_suite(x: &StarSet, maps: &[Vec<usize>], s: &Subset, sample: Sample) -> Result<Report> {
    x.check(s)?;
    for (k, f) in maps.iter().enumerate() {
        if let Some((i, p, q)) = x.endomorphism_witness(f) {
            return Err(axiom(
                "star endomorphism",
                "f(x * y) = f(x) * f(y)",
                if i == usize::MAX { format!("map {k} is not a self-map of the carrier") } else { format!("map {k}, op {i}, x = {p}, y = {q}") },
            ));
        }
    }
    let r = map_closure(maps);
    let mut report = Report::new(format!("phi-invariance on {}, |R| = {}", x.name(), r.len()));
    for a in 0..r.len() {
        for b in 0..r.len() {
            let ab: Vec<usize> = r[a].iter().map(|&p| r[b][p]).collect();
            report.check("R closed: x^(a*b) = (x^a)^b", r.contains(&ab), || format!("a = {a}, b = {b}"));
        }
    }

    let sr = image_under(&r, s);
    let inv = s | &sr;
    report.check("S^R is phi-invariant", image_under(&r, &sr).is_subset(&sr), || format!("S = {s}"));
    report.check("S u S^R is phi-invariant", image_under(&r, &inv).is_subset(&inv), || format!("S = {s}"));
    for f in &r {
        let fs = image_under(std::slice::from_ref(f), s);
        report.check(
            "<S>^a = <S^a>",
            image_under(std::slice::from_ref(f), &star_closure(x, s)) == star_closure(x, &fs),
            || format!("S = {s}, a = {f:?}"),
        );
        let (ps, pfs) = (star_powers(x, s, 4), star_powers(x, &fs, 4));
        for n in 0..4 {
            report.check(
                "(S^n)^a = (S^a)^n",
                image_under(std::slice::from_ref(f), &ps[n]) == pfs[n],
                || format!("S = {s}, n = {}, a = {f:?}", n + 1),
            );
        }
    }

    if inv.is_empty() {
        report.skip("nu_S(x^a) <= nu_S(x)", "S is empty");
        return Ok(report);
    }
    let nu = star_word_lengths(x, &inv)?;
    for f in &r {
        for p in 0..x.size() {
            report.check("nu_S(x^a) <= nu_S(x)", nu[f[p]] <= nu[p], || format!("S = {inv}, x = {p}, a = {f:?}"));
        }
    }
    let sup = |t: &Subset| ExtNat::sup(t.iter().map(|p| nu[p]));
    let mut rng = Sample::rng(match sample {
        Sample::Random { seed, .. } => seed,
        Sample::Exhaustive => 0,
    });
    let trials: Vec<Subset> = match sample {
        Sample::Exhaustive if x.size() <= 12 => crate::bitset::all_subsets(x.size()).filter(|t| !t.is_empty()).collect(),
        Sample::Exhaustive => (0..512).map(|_| crate::report::random_subset(&mut rng, x.size())).filter(|t| !t.is_empty()).collect(),
        Sample::Random { count, .. } => (0..count).map(|_| crate::report::random_subset(&mut rng, x.size())).filter(|t| !t.is_empty()).collect(),
    };
    for t in &trials {
        let tr = image_under(&r, t);
        let (a, b, c) = (sup(&tr), sup(&(t | &tr)), sup(t));
        report.check("nu_H(S, T^R) <= nu_H(S, T u T^R) = nu_H(S, T)", a <= b && b == c, || {
            format!("S = {inv}, T = {t}: {a}, {b}, {c}")
        });
    }
    let generating: Vec<Subset> = trials
        .iter()
        .map(|f| f | &image_under(&r, f))
        .filter(|g| star_closure(x, g).is_full())
        .collect();
    for (i, g1) in generating.iter().enumerate() {
        let g2 = &generating[(i * 7 + 1) % generating.len()];
        let v = star_nu_h(x, g1, g2)?;
        report.check("nu_H finite on S_phi-fg", v.is_finite(), || format!("S = {g1}, T = {g2}"));
    }
    Ok(report)
}

/// Small quandles used by the suites.
pub fn quandle_catalog() -> Vec<StarSet> {
    let mut out: Vec<StarSet> = (3..=8).map(|n| StarSet::dihedral_quandle(n).unwrap()).collect();
    out.push(StarSet::trivial_quandle(3).unwrap());
    out.push(StarSet::conjugation_quandle(&FiniteGroup::symmetric(3).unwrap()).unwrap());
    out.push(StarSet::conjugation_quandle(&FiniteGroup::dihedral(4).unwrap()).unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::word_lengths;
    use proptest::prelude::*;

    /// Every value of every product tree with exactly n leaves from S, by
    /// enumerating shapes and operations recursively.
    fn naive_power(x: &StarSet, s: &Subset, n: usize) -> Subset {
        if n == 1 {
            return s.clone();
        }
        let mut out = x.empty_set();
        for k in 1..n {
            let (l, r) = (naive_power(x, s, k), naive_power(x, s, n - k));
            for a in &l {
                for b in &r {
                    for i in 0..x.op_count() {
                        out.insert(x.op(i, a, b));
                    }
                }
            }
        }
        out
    }

    /// `[x, S, n]` straight from the recursion over the split point.
    fn naive_bracket(x: &StarSet, s: &Subset, p: usize, n: usize) -> Subset {
        if n == 0 {
            return Subset::singleton(x.size(), p);
        }
        let mut out = x.empty_set();
        for j in 0..n {
            out.union_with(&star_product(x, &naive_bracket(x, s, p, j), &naive_power(x, s, n - j)));
        }
        out
    }

    fn naive_left_normed(x: &StarSet, s: &Subset, p: usize, n: usize) -> Subset {
        let mut cur = Subset::singleton(x.size(), p);
        for _ in 0..n {
            cur = star_product(x, &cur, s);
        }
        cur
    }

    fn two_ops() -> StarSet {
        // subtraction and a projection on Z4, neither associative nor unital
        let spec = StarSetSpec {
            size: 4,
            ops: vec![
                (0..4).map(|a| (0..4).map(|b| (a + 4 - b) % 4).collect()).collect(),
                (0..4).map(|_| (0..4).map(|b| (2 * b) % 4).collect()).collect(),
            ],
            unital: None,
        };
        StarSet::from_spec("Sub4", &spec).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(StarSet::from_json("x", r#"{"size": 2, "ops": [[[0, 1], [1, 0]]], "unital": 0}"#).is_ok());
        assert!(StarSet::from_json("x", r#"{"size": 2, "ops": [[[0, 1], [1, 1]]], "unital": 1}"#).is_err());
        assert!(StarSet::from_json("x", r#"{"size": 2, "ops": [[[0, 2], [1, 0]]]}"#).is_err());
        assert!(StarSet::from_json("x", r#"{"size": 2, "ops": []}"#).is_err());
        assert!(StarSet::from_json("x", r#"{"size": 2, "ops": [[[0, 1]]]}"#).is_err());
        assert!(StarSet::from_json("x", r#"{"size": 1, "ops": [[[0]]], "extra": 1}"#).is_err());
        let r5 = StarSet::dihedral_quandle(5).unwrap();
        let back = StarSet::from_spec("R5", &r5.to_spec()).unwrap();
        assert_eq!(back, r5);
    }

    #[test]
    fn quandles_are_quandles() {
        for q in quandle_catalog() {
            q.check_quandle().unwrap();
        }
        assert!(two_ops().check_quandle().is_err());
        let g = StarSet::from_group(&FiniteGroup::cyclic(3).unwrap());
        let err = g.check_quandle().unwrap_err().to_string();
        assert!(err.contains("idempotence"), "{err}");
    }

    #[test]
    fn dihedral_quandle_powers() {
        let r5 = StarSet::dihedral_quandle(5).unwrap();
        let s = r5.subset([0, 1]).unwrap();
        assert_eq!(star_power(&r5, &s, Fin(2)).unwrap(), r5.subset([0, 1, 2, 4]).unwrap());
        for n in 1..=5 {
            assert_eq!(star_power(&r5, &s, Fin(n)).unwrap(), naive_power(&r5, &s, n as usize));
        }
        assert!(star_power(&r5, &s, Fin(0)).is_err());
        assert!(star_power(&r5, &s, Inf).unwrap().is_full());
        // 3 = 0 * 4 needs 1 + 2 leaves
        let nu = star_word_lengths(&r5, &s).unwrap();
        assert_eq!(nu[3], Fin(3));
        assert_eq!(nu[0], Fin(1));
        let p3 = naive_power(&r5, &s, 3);
        assert!(p3.contains(3) && !naive_power(&r5, &s, 2).contains(3));
        assert_eq!(star_nu_h(&r5, &s, &r5.full_set()).unwrap(), Fin(3));
        assert!(star_nu_h(&r5, &s, &r5.empty_set()).is_err());
    }

    #[test]
    fn unreachable_elements_are_infinite() {
        let r6 = StarSet::dihedral_quandle(6).unwrap();
        // even elements stay even
        let s = r6.subset([0, 2]).unwrap();
        let nu = star_word_lengths(&r6, &s).unwrap();
        assert_eq!(nu[1], Inf);
        assert_eq!(star_closure(&r6, &s), r6.subset([0, 2, 4]).unwrap());
    }

    #[test]
    fn group_tables_give_group_word_lengths() {
        for g in crate::catalog::catalog_up_to(8) {
            let x = StarSet::from_group(&g);
            for mask in [1u64, 2, 6, 0b1010, 0b110110] {
                let s = Subset::from_mask(g.order(), mask & ((1u64 << g.order()) - 1));
                assert_eq!(star_word_lengths(&x, &s).unwrap(), word_lengths(&g, &s), "{} {s}", g.name());
                if !s.is_empty() {
                    for n in 0..4u64 {
                        assert_eq!(star_power(&x, &s, Fin(n)).unwrap(), crate::subsets::power(&g, &s, Fin(n)));
                    }
                }
            }
        }
    }

    #[test]
    fn metrics_match_bracket_oracles() {
        for x in [StarSet::dihedral_quandle(5).unwrap(), two_ops(), StarSet::conjugation_quandle(&FiniteGroup::symmetric(3).unwrap()).unwrap()] {
            for mask in [1u64, 3, 5, 6] {
                let s = Subset::from_mask(x.size(), mask);
                for p in 0..x.size() {
                    let all = star_distances(&x, &s, p, StarMetricVariant::AllParenthesizations).unwrap();
                    let left = star_distances(&x, &s, p, StarMetricVariant::LeftNormed).unwrap();
                    for q in 0..x.size() {
                        let want = (0..8).find(|&n| naive_bracket(&x, &s, p, n).contains(q));
                        let want_left = (0..8).find(|&n| naive_left_normed(&x, &s, p, n).contains(q));
                        assert_eq!(all[q].finite(), want.map(|n| n as u64), "{} S = {s} ({p},{q})", x.name());
                        assert_eq!(left[q].finite(), want_left.map(|n| n as u64), "{} S = {s} ({p},{q})", x.name());
                    }
                }
            }
        }
    }

    #[test]
    fn left_normed_orbit() {
        let r5 = StarSet::dihedral_quandle(5).unwrap();
        let s = r5.subset([0]).unwrap();
        let d = star_distances(&r5, &s, 1, StarMetricVariant::LeftNormed).unwrap();
        // 1 * 0 = 4, and sigma_0 is an involution
        assert_eq!(d[1], Fin(0));
        assert_eq!(d[4], Fin(1));
        assert_eq!(d[2], Inf);
    }

    #[test]
    fn parenthesization_can_shorten_distances() {
        // R5, S = {0, 1}: 1 = 0 * (tree of 3 leaves) but needs four left-normed steps
        let r5 = StarSet::dihedral_quandle(5).unwrap();
        let s = r5.subset([0, 1]).unwrap();
        let all = star_distances(&r5, &s, 0, StarMetricVariant::AllParenthesizations).unwrap();
        let left = star_distances(&r5, &s, 0, StarMetricVariant::LeftNormed).unwrap();
        assert_eq!(all, vec![Fin(0), Fin(3), Fin(1), Fin(2), Fin(2)]);
        assert_eq!(left, vec![Fin(0), Fin(4), Fin(1), Fin(2), Fin(3)]);
    }

    #[test]
    fn property_suite_on_small_carriers() {
        for x in [StarSet::dihedral_quandle(3).unwrap(), StarSet::dihedral_quandle(4).unwrap(), two_ops()] {
            let r = star_properties(&x, Sample::Exhaustive, 3).unwrap();
            assert!(r.is_ok(), "{r}");
        }
        let g = StarSet::from_group(&FiniteGroup::symmetric(3).unwrap());
        let r = star_properties(&g, Sample::Exhaustive, 3).unwrap();
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn invariance_under_translations() {
        let r5 = StarSet::dihedral_quandle(5).unwrap();
        let sigmas: Vec<Vec<usize>> = (0..5).map(|a| r5.right_translation(a)).collect();
        let s = r5.subset([0, 1]).unwrap();
        let r = phi_invariance_suite(&r5, &sigmas, &s, Sample::Exhaustive).unwrap();
        assert!(r.is_ok(), "{r}");
        assert!(r.get("nu_H finite on S_phi-fg").unwrap().passed > 0);

        let id = vec![(0..5).collect::<Vec<_>>()];
        let r = phi_invariance_suite(&r5, &id, &s, Sample::Exhaustive).unwrap();
        assert!(r.is_ok(), "{r}");

        let bad = vec![vec![1, 1, 1, 1, 0]];
        assert!(phi_invariance_suite(&r5, &bad, &s, Sample::Exhaustive).is_err());
    }

    #[test]
    fn map_closure_of_translations() {
        let r3 = StarSet::dihedral_quandle(3).unwrap();
        let sigmas: Vec<Vec<usize>> = (0..3).map(|a| r3.right_translation(a)).collect();
        // the three reflections generate S3
        assert_eq!(map_closure(&sigmas).len(), 6);
    }

    proptest! {
        #[test]
        fn tree_lengths_match_powers(seed in any::<u64>(), mask in 1u64..64) {
            // random two-operation tables on six points
            let mut rng = Sample::rng(seed);
            use rand::RngExt;
            let ops: Vec<Vec<Vec<usize>>> = (0..2)
                .map(|_| (0..6).map(|_| (0..6).map(|_| rng.random_range(0..6)).collect()).collect())
                .collect();
            let x = StarSet::from_spec("random", &StarSetSpec { size: 6, ops, unital: None }).unwrap();
            let s = Subset::from_mask(6, mask);
            let nu = star_word_lengths(&x, &s).unwrap();
            let powers: Vec<Subset> = (1..=8).map(|n| naive_power(&x, &s, n)).collect();
            let closure = star_closure(&x, &s);
            for p in 0..6 {
                let first = powers.iter().position(|sp| sp.contains(p)).map(|i| i as u64 + 1);
                match first {
                    Some(n) => prop_assert_eq!(nu[p], Fin(n)),
                    None => prop_assert!(nu[p] > Fin(8)),
                }
                prop_assert_eq!(nu[p].is_finite(), closure.contains(p));
            }
        }
    }
}
