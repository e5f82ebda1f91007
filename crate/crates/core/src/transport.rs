//! Transport of subsets along an epimorphism `f : G → H` with kernel K.
//!
//! Pushforward `f_*(S) = f(S)` and pullback `f^*(S) = f⁻¹(S)`, lifts of
//! subsets of H, the bijection `χ : 𝒮(G) → 𝒮(H × K)` with inverse ω, and the
//! section `η` of `f_*` on normally generating sets. The `*_suite` and
//! `*_check` functions verify the accompanying inequalities exactly and
//! collect counterexamples in a [`Report`].

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::Subset;
use crate::error::{Error, Result};
use crate::extnat::{ExtNat, Fin, Inf};
use crate::group::{subgroup_as_group, FiniteGroup, GroupHom, Section};
use crate::invariants::{diam_nfg, nfg_family};
use crate::metric::{nu_h, nu_h_hat, sup_over, word_lengths, NormFamily};
use crate::report::{Report, Sample};
use crate::subsets::{self, classify, ConditionP, Family};

/// `f(S)`.
pub fn pushforward(f: &GroupHom, s: &Subset) -> Subset {
    subsets::check_subset(f.source(), s).expect("subset of the source");
    let mut out = f.target().empty_set();
    for x in s {
        out.insert(f.apply(x));
    }
    out
}

/// `f⁻¹(S)`.
pub fn pullback(f: &GroupHom, s: &Subset) -> Subset {
    subsets::check_subset(f.target(), s).expect("subset of the target");
    let mut out = f.source().empty_set();
    for x in f.source().elements() {
        if s.contains(f.apply(x)) {
            out.insert(x);
        }
    }
    out
}

/// Checks the compatibility of images and preimages with powers, inverses,
/// conjugation closures and translates, for `n ≤ max_n` and `n = ∞`.
pub fn compatibility_suite(f: &GroupHom, sample: Sample, max_n: u64) -> Result<Report> {
    f.check_surjective()?;
    let (g, h) = (f.source(), f.target());
    let k = f.kernel();
    let mut report = Report::new(format!("compatibility {} -> {}", g.name(), h.name()));
    let mut exponents: Vec<ExtNat> = (0..=max_n).map(Fin).collect();
    exponents.push(Inf);

    for s in Family::All.members(g, sample)? {
        let fs = pushforward(f, &s);
        for &n in &exponents {
            report.check(
                "f(S^n) = f(S)^n",
                pushforward(f, &subsets::power(g, &s, n)) == subsets::power(h, &fs, n),
                || format!("S = {s}, n = {n}"),
            );
            report.check(
                "f(S^{<=n}) = f(S)^{<=n}",
                pushforward(f, &subsets::power_leq(g, &s, n)) == subsets::power_leq(h, &fs, n),
                || format!("S = {s}, n = {n}"),
            );
        }
        report.check(
            "f(C_A) = C_f(A)",
            pushforward(f, &subsets::sym_conj_closure(g, &s)) == subsets::sym_conj_closure(h, &fs),
            || format!("A = {s}"),
        );
    }

    let targets = Family::All.members(h, sample)?;
    for (i, s) in targets.iter().enumerate() {
        let ps = pullback(f, s);
        for &n in &exponents {
            if n.is_finite() && n != Fin(0) {
                report.check(
                    "f^-1(S^n) = (f^-1 S)^n",
                    pullback(f, &subsets::power(h, s, n)) == subsets::power(g, &ps, n),
                    || format!("S = {s}, n = {n}"),
                );
            }
            report.check(
                "f^-1(S^{<=n}) = (f^-1 S)^{<=n} u K",
                pullback(f, &subsets::power_leq(h, s, n)) == &subsets::power_leq(g, &ps, n) | &k,
                || format!("S = {s}, n = {n}"),
            );
            if let Some(r) = n.finite() {
                // pair each S with a second target set for the translate identity
                let a = &targets[(i * 7 + 3) % targets.len()];
                let lhs = pullback(f, &subsets::product(h, a, &subsets::power_leq(h, s, n)));
                let rhs = subsets::product(g, &pullback(f, a), &subsets::power_leq(g, &ps, Fin(r)));
                report.check("f^-1(A S^{<=n}) = f^-1(A) (f^-1 S)^{<=n}", lhs == rhs, || {
                    format!("A = {a}, S = {s}, n = {n}")
                });
            }
        }
        report.check(
            "f^-1(S^-1) = (f^-1 S)^-1",
            pullback(f, &subsets::inverse(h, s)) == subsets::inverse(g, &ps),
            || format!("S = {s}"),
        );
        report.check(
            "f^-1(S^inf) = (f^-1 S)^inf u K",
            pullback(f, &subsets::power(h, s, Inf)) == &subsets::power(g, &ps, Inf) | &k,
            || format!("S = {s}"),
        );
    }
    Ok(report)
}

/// `ν_H(f(S), f(T)) ≤ ν_H(S, T)` over pairs of `𝒮(G)^*`. Pairs with S or T
/// inside K leave the starred domain on H and are counted as skipped.
pub fn verify_pushforward_lipschitz(f: &GroupHom, sample: Sample) -> Result<Report> {
    let (g, h) = (f.source(), f.target());
    let k = f.kernel();
    let (sets, pairs) = Family::Starred.pairs(g, sample)?;
    let images: Vec<Subset> = sets.iter().map(|s| pushforward(f, s)).collect();
    let up = NormFamily::new(g, &sets);
    let down = NormFamily::new(h, &images);
    let partial: Vec<Report> = pairs
        .par_chunks(4096)
        .map(|chunk| {
            let mut r = Report::new("");
            for &(i, j) in chunk {
                if sets[i].is_subset(&k) || sets[j].is_subset(&k) {
                    r.skip("nu_H(fS, fT) <= nu_H(S, T)", "S or T inside the kernel");
                    continue;
                }
                let (lhs, rhs) = (down.nu_h(i, j), up.nu_h(i, j));
                r.check("nu_H(fS, fT) <= nu_H(S, T)", lhs <= rhs, || {
                    format!("S = {}, T = {}: {lhs} > {rhs}", sets[i], sets[j])
                });
            }
            r
        })
        .collect();
    let mut report = Report::new(format!("pushforward {} -> {}", g.name(), h.name()));
    for r in partial {
        report.merge(r);
    }
    Ok(report)
}

/// `ν_H(f⁻¹S, f⁻¹T) = ν_H(S, T)` over pairs of `𝒮″(H)^*`, and `f(f⁻¹(S)) = S`
/// over `𝒮(H)`.
pub fn verify_pullback_isometry(f: &GroupHom, sample: Sample) -> Result<Report> {
    f.check_surjective()?;
    let (g, h) = (f.source(), f.target());
    let k = f.kernel();
    let mut report = Report::new(format!("pullback {} -> {}", g.name(), h.name()));
    let (sets, pairs) = Family::DoublePrimeStar.pairs(h, sample)?;
    let pulled: Vec<Subset> = sets.iter().map(|s| pullback(f, s)).collect();
    let down = NormFamily::new(h, &sets);
    let up = NormFamily::new(g, &pulled);
    for p in &pulled {
        report.check("f^-1 S in S''(G)^* - S(K)", Family::DoublePrimeStar.contains(g, p) && !p.is_subset(&k), || {
            format!("f^-1 S = {p}")
        });
    }
    for (i, j) in pairs {
        let (lhs, rhs) = (up.nu_h(i, j), down.nu_h(i, j));
        report.check("nu_H(f^-1 S, f^-1 T) = nu_H(S, T)", lhs == rhs, || {
            format!("S = {}, T = {}: {lhs} != {rhs}", sets[i], sets[j])
        });
    }
    for s in Family::All.members(h, sample)? {
        report.check("f_* f^* = id", pushforward(f, &pullback(f, &s)) == s, || format!("S = {s}"));
    }
    Ok(report)
}

/// How far `T` is from its saturation `f⁻¹(f(T)) = TK`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RetractionDefect {
    /// `f⁻¹(f(T))`
    pub saturation: Subset,
    /// `ν̂_H(T, f⁻¹(f(T)))`
    pub defect: ExtNat,
    /// `ν_H(T, K) + 1`
    pub bound: ExtNat,
    /// `ν_H(f⁻¹(f(T)), T)`, which is 1.
    pub back: ExtNat,
    /// Whether `T ⊂ f⁻¹(f(T)) = TK`.
    pub saturation_is_tk: bool,
}

impl RetractionDefect {
    pub fn holds(&self) -> bool {
        self.defect <= self.bound && self.back == Fin(1) && self.saturation_is_tk
    }
}

/// The retraction defect of `T ∈ 𝒮″(G)^* − 𝒮(K)`.
pub fn retraction_defect(f: &GroupHom, t: &Subset) -> Result<RetractionDefect> {
    let g = f.source();
    subsets::check_subset(g, t)?;
    let k = f.kernel();
    if !subsets::in_double_prime_star(g, t) {
        return Err(Error::Domain(format!("{t} is not in S''(G)^*")));
    }
    if t.is_subset(&k) {
        return Err(Error::Domain(format!("{t} lies inside the kernel {k}")));
    }
    Ok(defect_of(f, t, &k, &word_lengths(g, t)))
}

fn defect_of(f: &GroupHom, t: &Subset, k: &Subset, t_lengths: &[ExtNat]) -> RetractionDefect {
    let g = f.source();
    let saturation = pullback(f, &pushforward(f, t));
    let forward = sup_over(t_lengths, &saturation);
    let back = sup_over(&word_lengths(g, &saturation), t);
    RetractionDefect {
        defect: forward.max(back),
        bound: sup_over(t_lengths, k) + Fin(1),
        back,
        saturation_is_tk: t.is_subset(&saturation) && saturation == subsets::product(g, t, k),
        saturation,
    }
}

/// Retraction defects over `𝒮″(G)^* − 𝒮(K)`.
pub fn retraction_suite(f: &GroupHom, sample: Sample) -> Result<Report> {
    f.check_surjective()?;
    let g = f.source();
    let k = f.kernel();
    let members = Family::DoublePrimeStar.members(g, sample)?;
    let partial: Vec<Report> = members
        .par_chunks(256)
        .map(|chunk| {
            let mut r = Report::new("");
            for t in chunk {
                if t.is_subset(&k) {
                    r.skip("nu_H_hat(T, f^-1 f T) <= nu_H(T, K) + 1", "T inside the kernel");
                    continue;
                }
                let d = defect_of(f, t, &k, &word_lengths(g, t));
                r.check("nu_H_hat(T, f^-1 f T) <= nu_H(T, K) + 1", d.defect <= d.bound, || {
                    format!("T = {t}: {} > {}", d.defect, d.bound)
                });
                r.check("nu_H(f^-1 f T, T) = 1", d.back == Fin(1), || format!("T = {t}: {}", d.back));
                r.check("T in f^-1 f T = TK", d.saturation_is_tk, || format!("T = {t}"));
            }
            r
        })
        .collect();
    let mut report = Report::new(format!("retraction {} -> {}", g.name(), f.target().name()));
    for r in partial {
        report.merge(r);
    }
    Ok(report)
}

/// Whether `K ⊂ T^{≤m}`.
pub fn satisfies_q(f: &GroupHom, t: &Subset, m: u64) -> bool {
    sup_over(&word_lengths(f.source(), t), &f.kernel()) <= Fin(m)
}

/// The least m with `K = U^{≤m}` for every generating subset U of K.
/// Enumerates all subsets of K, so `|K| ≤ 20`.
pub fn kernel_uniform_m(f: &GroupHom) -> Result<u64> {
    let k = f.kernel();
    let (kg, _) = subgroup_as_group(f.source(), &k, "K")?;
    let all = Family::All.enumerate(&kg)?;
    let full = kg.full_set();
    let m = all
        .par_iter()
        .filter(|u| subsets::generates(&kg, u))
        .map(|u| nu_h(&kg, u, &full))
        .max()
        .unwrap_or(Fin(0));
    Ok(m.finite().expect("generating sets of a finite group have finite diameter"))
}

/// For `T ∈ 𝒮″_{Q_m}(G)^* − 𝒮(K)`: `ν̂_H(T, f⁻¹f(T)) ≤ ν_H(T, K) + 1 ≤ m + 1`.
pub fn qm_suite(f: &GroupHom, m: u64, sample: Sample) -> Result<Report> {
    f.check_surjective()?;
    let g = f.source();
    let k = f.kernel();
    let mut report = Report::new(format!("Q_{m} {} -> {}", g.name(), f.target().name()));
    for t in Family::DoublePrimeStar.members(g, sample)? {
        if t.is_subset(&k) {
            report.skip("nu_H_hat(T, f^-1 f T) <= m + 1", "T inside the kernel");
            continue;
        }
        let lengths = word_lengths(g, &t);
        if sup_over(&lengths, &k) > Fin(m) {
            report.skip("nu_H_hat(T, f^-1 f T) <= m + 1", "T fails Q_m");
            continue;
        }
        let d = defect_of(f, &t, &k, &lengths);
        report.check("nu_H_hat(T, f^-1 f T) <= m + 1", d.defect <= Fin(m + 1), || {
            format!("T = {t}: {}", d.defect)
        });
    }
    Ok(report)
}

/// Sets whose trace on K generates K satisfy `Q_m` for the uniform m of
/// [`kernel_uniform_m`], and so obey the `m + 1` retraction bound.
pub fn r_condition_suite(f: &GroupHom, sample: Sample) -> Result<Report> {
    let m = kernel_uniform_m(f)?;
    let g = f.source();
    let k = f.kernel();
    let mut report = Report::new(format!("R condition, m = {m}"));
    for t in Family::DoublePrimeStar.members(g, sample)? {
        if t.is_subset(&k) || g.closure(&(&t & &k)) != k {
            continue;
        }
        let lengths = word_lengths(g, &t);
        report.check("R implies Q_m", sup_over(&lengths, &k) <= Fin(m), || format!("T = {t}"));
        let d = defect_of(f, &t, &k, &lengths);
        report.check("nu_H_hat(T, f^-1 f T) <= m + 1", d.defect <= Fin(m + 1), || {
            format!("T = {t}: {}", d.defect)
        });
    }
    Ok(report)
}

/// How a lift chooses its preimages.
#[derive(Clone, Copy, Debug)]
pub enum LiftRule<'a> {
    /// Least preimage, except that e goes to e.
    MinIndex,
    /// The values of a section of the same homomorphism.
    ViaSection(&'a Section),
}

/// A set `R ⊂ G` meeting the fiber over each point of `S ⊂ H` exactly once.
#[derive(Clone, Debug)]
pub struct Lift {
    hom: GroupHom,
    target_set: Subset,
    choice: Vec<Option<usize>>,
}

impl Lift {
    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn target_set(&self) -> &Subset {
        &self.target_set
    }

    /// `R_x`, for `x ∈ S`.
    pub fn choice(&self, x: usize) -> Option<usize> {
        self.choice.get(x).copied().flatten()
    }

    /// R itself.
    pub fn set(&self) -> Subset {
        let mut r = self.hom.source().empty_set();
        for c in self.choice.iter().flatten() {
            r.insert(*c);
        }
        r
    }

    /// `h(x) = R_{f(x)}⁻¹ x ∈ K`, for `x ∈ f⁻¹(S)`.
    pub fn h(&self, x: usize) -> Result<usize> {
        let g = self.hom.source();
        if x >= g.order() {
            return Err(Error::OutOfRange { element: x, size: g.order() });
        }
        let r = self
            .choice(self.hom.apply(x))
            .ok_or_else(|| Error::Domain(format!("{x} is not over the lifted set {}", self.target_set)))?;
        Ok(g.mul(g.inv(r), x))
    }
}

fn same_hom(a: &GroupHom, b: &GroupHom) -> bool {
    a.source().id() == b.source().id() && a.target().id() == b.target().id() && a.table() == b.table()
}

/// A lift of `S ⊂ H` along the surjection `f`.
pub fn make_lift(f: &GroupHom, s: &Subset, rule: LiftRule<'_>) -> Result<Lift> {
    f.check_surjective()?;
    let (g, h) = (f.source(), f.target());
    subsets::check_subset(h, s)?;
    let mut choice = vec![None; h.order()];
    match rule {
        LiftRule::MinIndex => {
            for x in g.elements().rev() {
                if s.contains(f.apply(x)) {
                    choice[f.apply(x)] = Some(x);
                }
            }
            if s.contains(h.identity()) {
                choice[h.identity()] = Some(g.identity());
            }
        }
        LiftRule::ViaSection(sec) => {
            if !same_hom(sec.hom(), f) {
                return Err(Error::Domain("section belongs to a different homomorphism".into()));
            }
            for x in s {
                choice[x] = Some(sec.apply(x));
            }
        }
    }
    Ok(Lift {
        hom: f.clone(),
        target_set: s.clone(),
        choice,
    })
}

/// `h^R_S(x)` for the lift `l`.
pub fn h_map(l: &Lift, x: usize) -> Result<usize> {
    l.h(x)
}

/// `θ(S)`: the min-index lift, which sends e to e.
pub fn theta(f: &GroupHom, s: &Subset) -> Result<Lift> {
    make_lift(f, s, LiftRule::MinIndex)
}

/// Subsets of `H × K`, with K given by elements of G.
pub type PairSet = BTreeSet<(usize, usize)>;

/// `χ(T) = {(f(x), h_S(x)) | x ∈ T}` with `S = f(T)` and `h_S` taken from `θ(S)`.
pub fn chi(f: &GroupHom, t: &Subset) -> Result<PairSet> {
    subsets::check_subset(f.source(), t)?;
    let lift = theta(f, &pushforward(f, t))?;
    t.iter().map(|x| Ok((f.apply(x), lift.h(x)?))).collect()
}

/// `ω(W) = {θ(p(W))_u v | (u, v) ∈ W}` with p the projection to H.
pub fn omega(f: &GroupHom, w: &PairSet) -> Result<Subset> {
    let (g, h) = (f.source(), f.target());
    let k = f.kernel();
    let mut p = h.empty_set();
    for &(u, v) in w {
        if u >= h.order() {
            return Err(Error::OutOfRange { element: u, size: h.order() });
        }
        if v >= g.order() || !k.contains(v) {
            return Err(Error::Domain(format!("{v} is not in the kernel {k}")));
        }
        p.insert(u);
    }
    let lift = theta(f, &p)?;
    let mut out = g.empty_set();
    for &(u, v) in w {
        out.insert(g.mul(lift.choice(u).expect("u lies in p(W)"), v));
    }
    Ok(out)
}

/// `ωχ = id` on `𝒮(G)` and `χω = id` on `𝒮(H × K)`. Subsets of `H × K` are
/// drawn as subsets of a set of size `|H||K| = |G|`.
pub fn chi_omega_roundtrip(f: &GroupHom, sample: Sample) -> Result<Report> {
    f.check_surjective()?;
    let g = f.source();
    let kernel = f.kernel().to_vec();
    let mut report = Report::new(format!("chi/omega {} -> {}", g.name(), f.target().name()));
    let members = Family::All.members(g, sample)?;
    for t in &members {
        let back = omega(f, &chi(f, t)?)?;
        report.check("omega chi = id", back == *t, || format!("T = {t}, omega chi T = {back}"));
    }
    for code in &members {
        let w: PairSet = code.iter().map(|i| (i / kernel.len(), kernel[i % kernel.len()])).collect();
        let back = chi(f, &omega(f, &w)?)?;
        report.check("chi omega = id", back == w, || format!("W = {w:?}"));
    }
    Ok(report)
}

/// `R^L = {l⁻¹rl}` for `S ∈ 𝒮″(H)`, lifts `R ∋ e` of S and `L, U ∈ 𝒮″(K)`:
/// `f(R^L ∪ U) = f(R^L U) = S` and `(R^L ∪ U) ∩ K = (R^L U) ∩ K = U`.
///
/// Exhaustive sampling visits every lift with `R_e = e` when there are at
/// most 64 of them and the min-index lift otherwise; random sampling uses
/// the min-index lift.
pub fn lift_conjugation_check(f: &GroupHom, sample: Sample) -> Result<Report> {
    f.check_surjective()?;
    let (g, h) = (f.source(), f.target());
    let k = f.kernel();
    let (kg, embed) = subgroup_as_group(g, &k, "K")?;
    let to_g = |u: &Subset| g.subset(u.iter().map(|i| embed[i])).expect("kernel elements");
    let with_e = |s: Subset, e: usize| s.with(e);
    let targets: Vec<Subset> = Family::All.members(h, sample)?.into_iter().map(|s| with_e(s, h.identity())).collect();
    let kernel_sets: Vec<Subset> = Family::All
        .members(&kg, sample)?
        .into_iter()
        .map(|u| to_g(&with_e(u, kg.identity())))
        .collect();
    let mut report = Report::new(format!("lift conjugation {} -> {}", g.name(), h.name()));
    for s in &targets {
        let lifts = match sample {
            Sample::Exhaustive => all_lifts(f, s, 64).unwrap_or_else(|| vec![theta(f, s).unwrap().set()]),
            Sample::Random { .. } => vec![theta(f, s)?.set()],
        };
        for r in &lifts {
            for (li, l) in kernel_sets.iter().enumerate() {
                let rl = subsets::conjugate(g, r, l);
                let u = &kernel_sets[(li * 5 + 1) % kernel_sets.len()];
                let union = &rl | u;
                let prod = subsets::product(g, &rl, u);
                report.check("f(R^L u U) = f(R^L U) = S", pushforward(f, &union) == *s && pushforward(f, &prod) == *s, || {
                    format!("S = {s}, R = {r}, L = {l}, U = {u}")
                });
                report.check("(R^L u U) n K = (R^L U) n K = U", &union & &k == *u && &prod & &k == *u, || {
                    format!("S = {s}, R = {r}, L = {l}, U = {u}")
                });
            }
        }
    }
    Ok(report)
}

/// Every lift of `s` with `R_e = e`, or None when there are more than `cap`.
fn all_lifts(f: &GroupHom, s: &Subset, cap: usize) -> Option<Vec<Subset>> {
    let (g, h) = (f.source(), f.target());
    let mut acc = vec![g.empty_set()];
    for x in s {
        let options: Vec<usize> = if x == h.identity() { vec![g.identity()] } else { f.fiber(x).to_vec() };
        if acc.len() * options.len() > cap {
            return None;
        }
        acc = acc
            .iter()
            .flat_map(|r| options.iter().map(move |&y| r.with(y)))
            .collect();
    }
    Some(acc)
}

/// Data fixed once per epimorphism for the section `η`: a set B normally
/// generating K in `m0` steps and `U = C_B` taken in G.
#[derive(Clone, Debug)]
pub struct EtaContext {
    hom: GroupHom,
    b: Subset,
    u: Subset,
    m0: u64,
}

impl EtaContext {
    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    /// B, symmetric and containing e.
    pub fn b(&self) -> &Subset {
        &self.b
    }

    /// `U = C_B` in G.
    pub fn u(&self) -> &Subset {
        &self.u
    }

    /// Least m with `K = (C_B)^{≤m}`, conjugation taken in K.
    pub fn m0(&self) -> u64 {
        self.m0
    }

    /// `η(S) = C_{θ(S)} ∪ U` for `S ∈ 𝒮″_nfg(H)^*`.
    pub fn eta(&self, s: &Subset) -> Result<Subset> {
        let (g, h) = (self.hom.source(), self.hom.target());
        subsets::check_subset(h, s)?;
        if !subsets::in_double_prime_star(h, s) || !classify(h, s, ConditionP::Nfg) {
            return Err(Error::Domain(format!("{s} is not in S''_nfg(H)^*")));
        }
        let lift = theta(&self.hom, s)?.set();
        Ok(&subsets::sym_conj_closure(g, &lift) | &self.u)
    }
}

/// Builds the η data. Without `b`, B is a set attaining `diam_nfg K`, so that
/// `m0 = diam_nfg K`. A supplied B must lie in K; it is symmetrized and e is
/// added.
pub fn eta_context(f: &GroupHom, b: Option<&Subset>) -> Result<EtaContext> {
    f.check_surjective()?;
    let g = f.source();
    let k = f.kernel();
    let b = match b {
        Some(b) => {
            subsets::check_subset(g, b)?;
            if !b.is_subset(&k) {
                return Err(Error::Domain(format!("B = {b} is not inside the kernel {k}")));
            }
            subsets::symmetrize(g, b).with(g.identity())
        }
        None => {
            let (kg, embed) = subgroup_as_group(g, &k, "K")?;
            let w = diam_nfg(&kg)?;
            let witness = w.witness.expect("finite groups are normally finitely generated");
            g.subset(witness.iter().map(|i| embed[i]))?
        }
    };
    let in_k = subsets::conjugate(g, &b, &k);
    let m0 = nu_h(g, &in_k, &k);
    let Some(m0) = m0.finite() else {
        return Err(Error::Domain(format!(
            "B = {b} does not normally generate the kernel {k}; its normal closure is {}",
            g.closure(&in_k)
        )));
    };
    Ok(EtaContext {
        hom: f.clone(),
        u: subsets::sym_conj_closure(g, &b),
        b,
        m0,
    })
}

/// `η(S)` built from the supplied or computed B.
pub fn eta_construct(f: &GroupHom, s: &Subset, b: Option<&Subset>) -> Result<Subset> {
    eta_context(f, b)?.eta(s)
}

fn starred_nfg(g: &FiniteGroup) -> Result<Vec<Subset>> {
    Ok(nfg_family(g)?.into_iter().filter(|s| subsets::is_starred(g, s)).collect())
}

/// The quasi-isometry bounds for `f_*` and `η` with `m ≥ m0` (default `m0`):
///
/// - `η(S) ∈ 𝒮″_nfg(G)^*`, `f(η(S)) = S` and `K ⊂ η(S)^{≤m0}`;
/// - `ν̂_H(η(S), η(S′)) ≤ (m0 + 1) ν̂_H(S, S′)`;
/// - `ν̂_H(T, η(f(T))) ≤ m + 1` for `T ∈ 𝒮″_{nfg,Q_m}(G)^*`;
/// - `ν̂_H(f(T), f(T′)) ≤ ν̂_H(T, T′)` on `𝒮″_nfg(G)^*`.
pub fn qi_bounds_check(f: &GroupHom, b: Option<&Subset>, m: Option<u64>, sample: Sample) -> Result<Report> {
    let ctx = eta_context(f, b)?;
    let m0 = ctx.m0();
    let m = m.unwrap_or(m0);
    if m < m0 {
        return Err(Error::Domain(format!("m = {m} is below m0 = {m0}")));
    }
    let (g, h) = (f.source(), f.target());
    let k = f.kernel();
    let mut report = Report::new(format!("quasi-isometry {} -> {} (m0 = {m0}, m = {m})", g.name(), h.name()));

    let down = starred_nfg(h)?;
    let etas: Vec<Subset> = down.iter().map(|s| ctx.eta(s)).collect::<Result<_>>()?;
    let up_norms = NormFamily::new(g, &etas);
    let down_norms = NormFamily::new(h, &down);
    for (i, (s, t)) in down.iter().zip(&etas).enumerate() {
        let member = subsets::in_double_prime_star(g, t) && classify(g, t, ConditionP::Nfg);
        report.check("eta(S) in S''_nfg(G)^*", member, || format!("S = {s}, eta(S) = {t}"));
        report.check("f(eta(S)) = S", pushforward(f, t) == *s, || format!("S = {s}, eta(S) = {t}"));
        report.check("K in eta(S)^{<=m0}", sup_over(&up_norms.lengths[i], &k) <= Fin(m0), || {
            format!("S = {s}, eta(S) = {t}")
        });
    }
    let scale = Fin(m0 + 1);
    for (i, j) in sample.pairs(down.len()) {
        let (lhs, rhs) = (up_norms.nu_h_hat(i, j), scale * down_norms.nu_h_hat(i, j));
        report.check("nu_H_hat(eta S, eta S') <= (m0+1) nu_H_hat(S, S')", lhs <= rhs, || {
            format!("S = {}, S' = {}: {lhs} > {rhs}", down[i], down[j])
        });
    }

    let up: Vec<Subset> = starred_nfg(g)?;
    let idx = sample.indices(up.len());
    let partial: Vec<Report> = idx
        .par_iter()
        .map(|&i| {
            let mut r = Report::new("");
            let t = &up[i];
            let lengths = word_lengths(g, t);
            if sup_over(&lengths, &k) > Fin(m) {
                r.skip("nu_H_hat(T, eta f T) <= m + 1", "T fails Q_m");
                return r;
            }
            let s = pushforward(f, t);
            match ctx.eta(&s) {
                Ok(e) => {
                    let d = sup_over(&lengths, &e).max(nu_h(g, &e, t));
                    r.check("nu_H_hat(T, eta f T) <= m + 1", d <= Fin(m + 1), || {
                        format!("T = {t}: {d}")
                    });
                }
                Err(err) => {
                    r.check("nu_H_hat(T, eta f T) <= m + 1", false, || format!("T = {t}: {err}"));
                }
            }
            r
        })
        .collect();
    for r in partial {
        report.merge(r);
    }
    let images: Vec<Subset> = up.iter().map(|t| pushforward(f, t)).collect();
    for (i, j) in sample.pairs(up.len()) {
        let lhs = nu_h_hat(h, &images[i], &images[j]);
        let rhs = nu_h_hat(g, &up[i], &up[j]);
        report.check("f_* 1-Lipschitz on S''_nfg(G)^*", lhs <= rhs, || {
            format!("T = {}, T' = {}: {lhs} > {rhs}", up[i], up[j])
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::{make_section, quotient_by_normal};

    fn quotient(g: FiniteGroup, n: &[usize]) -> GroupHom {
        let g = Arc::new(g);
        let n = g.subset(n.iter().copied()).unwrap();
        quotient_by_normal(&g, &n).unwrap().1
    }

    fn z6_z3() -> GroupHom {
        quotient(FiniteGroup::cyclic(6).unwrap(), &[0, 3])
    }

    fn set(g: &FiniteGroup, xs: &[usize]) -> Subset {
        g.subset(xs.iter().copied()).unwrap()
    }

    /// Every product of at most `n` letters of S, by brute force.
    fn naive_ball(g: &FiniteGroup, s: &Subset, n: u64) -> Subset {
        let mut layer = g.identity_set();
        let mut all = layer.clone();
        for _ in 0..n {
            let mut next = g.empty_set();
            for x in &layer {
                for y in s {
                    next.insert(g.mul(x, y));
                }
            }
            all.union_with(&next);
            layer = next;
        }
        all
    }

    #[test]
    fn mod_three_images_and_preimages() {
        let f = z6_z3();
        let (g, h) = (f.source(), f.target());
        assert_eq!(pushforward(&f, &set(g, &[0, 1])), set(h, &[0, 1]));
        assert_eq!(pullback(&f, &set(h, &[0, 1])), set(g, &[0, 1, 3, 4]));
        let s = set(g, &[1, 2]);
        let sq = subsets::power(g, &s, Fin(2));
        assert_eq!(pushforward(&f, &sq), subsets::power(h, &pushforward(&f, &s), Fin(2)));
    }

    #[test]
    fn compatibility_identities_hold() {
        for f in [z6_z3(), quotient(FiniteGroup::symmetric(3).unwrap(), &[0, 3, 4])] {
            let r = compatibility_suite(&f, Sample::Exhaustive, 3).unwrap();
            assert!(r.is_ok(), "{r}");
        }
    }

    #[test]
    fn pushforward_is_lipschitz_on_z6() {
        let r = verify_pushforward_lipschitz(&z6_z3(), Sample::Exhaustive).unwrap();
        assert!(r.is_ok(), "{r}");
        let t = r.get("nu_H(fS, fT) <= nu_H(S, T)").unwrap();
        // {3} and {0, 3} are the starred subsets of K
        assert_eq!(t.skipped, 62 * 62 - 60 * 60);
    }

    #[test]
    fn identity_hom_is_an_isometry() {
        let g = Arc::new(FiniteGroup::dihedral(3).unwrap());
        let f = GroupHom::identity(g.clone());
        let (sets, pairs) = Family::Starred.pairs(&g, Sample::Random { count: 200, seed: 3 }).unwrap();
        for (i, j) in pairs {
            let (s, t) = (&sets[i], &sets[j]);
            assert_eq!(nu_h(&g, &pushforward(&f, s), &pushforward(&f, t)), nu_h(&g, s, t));
        }
    }

    #[test]
    fn pullback_isometry_on_small_quotients() {
        let cases = [
            quotient(FiniteGroup::cyclic(12).unwrap(), &[0, 4, 8]),
            quotient(FiniteGroup::cyclic(12).unwrap(), &[0, 3, 6, 9]),
            quotient(FiniteGroup::symmetric(3).unwrap(), &[0, 3, 4]),
            quotient(FiniteGroup::dihedral(4).unwrap(), &[0, 2]),
        ];
        for f in &cases {
            let r = verify_pullback_isometry(f, Sample::Exhaustive).unwrap();
            assert!(r.is_ok(), "{r}");
            assert!(r.get("nu_H(f^-1 S, f^-1 T) = nu_H(S, T)").unwrap().passed > 0);
        }
    }

    #[test]
    fn pullback_agrees_with_independent_search() {
        let f = quotient(FiniteGroup::cyclic(12).unwrap(), &[0, 4, 8]);
        let (g, h) = (f.source(), f.target());
        let s = set(h, &[0, 1]);
        let t = set(h, &[0, 2, 3]);
        let (ps, pt) = (pullback(&f, &s), pullback(&f, &t));
        // least n with f^-1(T) inside the n-ball of f^-1(S)
        let up = (0..).find(|&n| pt.is_subset(&naive_ball(g, &ps, n))).unwrap();
        let down = (0..).find(|&n| t.is_subset(&naive_ball(h, &s, n))).unwrap();
        assert_eq!(up, down);
        assert_eq!(nu_h(g, &ps, &pt), Fin(up));
    }

    #[test]
    fn retraction_examples() {
        let f = z6_z3();
        let g = f.source();
        let d = retraction_defect(&f, &set(g, &[0, 1])).unwrap();
        assert_eq!(d.saturation, set(g, &[0, 1, 3, 4]));
        assert_eq!(d.bound, Fin(4));
        // 4 = 1 + 1 + 1 + 1 needs four letters of T
        assert_eq!(d.defect, Fin(4));
        assert_eq!(d.back, Fin(1));
        assert!(d.holds());

        let full = retraction_defect(&f, &g.full_set()).unwrap();
        assert_eq!((full.defect, full.bound), (Fin(1), Fin(2)));

        // T contains K, so TK lies in T^2
        let d = retraction_defect(&f, &set(g, &[0, 2, 3])).unwrap();
        assert!(d.defect <= Fin(2));

        assert!(matches!(retraction_defect(&f, &set(g, &[0, 3])), Err(Error::Domain(_))));
        assert!(matches!(retraction_defect(&f, &set(g, &[1])), Err(Error::Domain(_))));
    }

    #[test]
    fn retraction_suite_on_small_quotients() {
        for f in [
            z6_z3(),
            quotient(FiniteGroup::cyclic(12).unwrap(), &[0, 4, 8]),
            quotient(FiniteGroup::dihedral(4).unwrap(), &[0, 2]),
        ] {
            let r = retraction_suite(&f, Sample::Exhaustive).unwrap();
            assert!(r.is_ok(), "{r}");
        }
    }

    #[test]
    fn uniform_kernel_bound() {
        // K = Z3 inside Z6: {1} needs two steps to reach 2
        let f = quotient(FiniteGroup::cyclic(6).unwrap(), &[0, 2, 4]);
        assert_eq!(kernel_uniform_m(&f).unwrap(), 2);
        // K = Z2: the only generating sets contain the involution
        assert_eq!(kernel_uniform_m(&z6_z3()).unwrap(), 1);
        let r = r_condition_suite(&f, Sample::Exhaustive).unwrap();
        assert!(r.is_ok() && r.passed() > 0, "{r}");
        let r = qm_suite(&f, 2, Sample::Exhaustive).unwrap();
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn lifts() {
        let f = z6_z3();
        let (g, h) = (f.source(), f.target());
        let l = make_lift(&f, &h.full_set(), LiftRule::MinIndex).unwrap();
        assert_eq!(l.set(), set(g, &[0, 1, 2]));
        let k = f.kernel();
        for x in g.elements() {
            let hx = l.h(x).unwrap();
            assert!(k.contains(hx));
            assert_eq!(g.mul(l.choice(f.apply(x)).unwrap(), hx), x);
            for a in &k {
                assert_eq!(l.h(g.mul(x, a)).unwrap(), g.mul(hx, a));
            }
        }
        for a in &k {
            assert_eq!(l.h(a).unwrap(), a);
        }
        let partial = make_lift(&f, &set(h, &[1]), LiftRule::MinIndex).unwrap();
        assert!(matches!(partial.h(0), Err(Error::Domain(_))));
    }

    #[test]
    fn symmetric_section_gives_symmetric_lifts() {
        let f = z6_z3();
        let (g, h) = (f.source(), f.target());
        let sec = make_section(&f, true).unwrap();
        assert!(sec.is_symmetric());
        let s = h.full_set();
        let r = make_lift(&f, &s, LiftRule::ViaSection(&sec)).unwrap().set();
        assert!(subsets::is_symmetric(g, &r));
        assert_eq!(r, set(g, &[0, 1, 5]));
        let other = quotient(FiniteGroup::cyclic(6).unwrap(), &[0, 2, 4]);
        let wrong = make_section(&other, true).unwrap();
        assert!(make_lift(&f, &s, LiftRule::ViaSection(&wrong)).is_err());
    }

    #[test]
    fn chi_and_omega() {
        let f = z6_z3();
        let g = f.source();
        let k = f.kernel();
        let chi_k = chi(&f, &k).unwrap();
        let expected: PairSet = k.iter().map(|a| (0, a)).collect();
        assert_eq!(chi_k, expected);
        let unit: PairSet = [(0, 0)].into_iter().collect();
        assert_eq!(omega(&f, &unit).unwrap(), g.identity_set());
        let bad: PairSet = [(0, 1)].into_iter().collect();
        assert!(omega(&f, &bad).is_err());
        let r = chi_omega_roundtrip(&f, Sample::Exhaustive).unwrap();
        assert!(r.is_ok(), "{r}");
        assert_eq!(r.get("omega chi = id").unwrap().passed, 64);
        let d4 = quotient(FiniteGroup::dihedral(4).unwrap(), &[0, 2]);
        assert!(chi_omega_roundtrip(&d4, Sample::Exhaustive).unwrap().is_ok());
    }

    #[test]
    fn conjugated_lifts_keep_image_and_kernel_trace() {
        for f in [
            quotient(FiniteGroup::symmetric(3).unwrap(), &[0, 3, 4]),
            quotient(FiniteGroup::dihedral(4).unwrap(), &[0, 2]),
            z6_z3(),
        ] {
            let r = lift_conjugation_check(&f, Sample::Exhaustive).unwrap();
            assert!(r.is_ok() && r.passed() > 0, "{r}");
        }
    }

    #[test]
    fn eta_examples() {
        let f = z6_z3();
        let (g, h) = (f.source(), f.target());
        let ctx = eta_context(&f, Some(&set(g, &[3]))).unwrap();
        assert_eq!(ctx.m0(), 1);
        let e = ctx.eta(&h.full_set()).unwrap();
        assert!(e.contains(3));
        assert_eq!(pushforward(&f, &e), h.full_set());
        assert!(ctx.eta(&set(h, &[0, 1])).is_err());

        let s3 = quotient(FiniteGroup::symmetric(3).unwrap(), &[0, 3, 4]);
        let (g, h) = (s3.source(), s3.target());
        let e = eta_construct(&s3, &h.full_set(), Some(&set(g, &[3, 4]))).unwrap();
        assert!(subsets::generated(g, &e, subsets::GenerationMode::Normal).is_full());
        assert_eq!(pushforward(&s3, &e), h.full_set());

        let not_normal_gen = eta_context(&s3, Some(&g.identity_set()));
        assert!(matches!(not_normal_gen, Err(Error::Domain(_))));
        assert!(eta_context(&s3, Some(&set(g, &[1]))).is_err());
    }

    #[test]
    fn eta_with_trivial_kernel() {
        let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let f = GroupHom::identity(g.clone());
        let ctx = eta_context(&f, None).unwrap();
        assert_eq!(ctx.m0(), 0);
        let s = set(&g, &[0, 1, 3]);
        assert_eq!(ctx.eta(&s).unwrap(), s);
        let r = qi_bounds_check(&f, None, Some(1), Sample::Exhaustive).unwrap();
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn qi_bounds_on_small_quotients() {
        let s3 = quotient(FiniteGroup::symmetric(3).unwrap(), &[0, 3, 4]);
        let d4 = quotient(FiniteGroup::dihedral(4).unwrap(), &[0, 2]);
        for f in [&s3, &d4] {
            let m0 = eta_context(f, None).unwrap().m0();
            assert_eq!(m0, 1);
            for m in [m0, m0 + 1] {
                let r = qi_bounds_check(f, None, Some(m), Sample::Exhaustive).unwrap();
                assert!(r.is_ok(), "{r}");
                assert!(r.get("nu_H_hat(T, eta f T) <= m + 1").unwrap().passed > 0);
            }
        }
        assert!(qi_bounds_check(&s3, None, Some(0), Sample::Exhaustive).is_err());
        let sampled = qi_bounds_check(&d4, None, None, Sample::Random { count: 50, seed: 1 }).unwrap();
        assert!(sampled.is_ok(), "{sampled}");
    }
}
