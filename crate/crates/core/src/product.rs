//! Semidirect products `G = H ⋉ K`: projections, the maps `φ`, `ψ_L` and
//! `ψ′_L`, and comparisons of the power-set metric of G with those of the
//! factors.
//!
//! Word lengths of a subset of H (or K) are the same whether computed in the
//! factor or in G, so `ν_H^H` and `ν_H^K` are evaluated in G throughout.

use std::sync::Arc;

use rand::RngExt;
use serde::Serialize;

use crate::bitset::Subset;
use crate::error::{Error, Result};
use crate::extnat::{ExtNat, Fin};
use crate::group::{subgroup_as_group, FiniteGroup, GroupHom};
use crate::metric::{nu_h, nu_h_hat, sup_over, word_lengths};
use crate::report::{Report, Sample};
use crate::subsets::{self, classify, ConditionP};

/// Subsets of a factor are enumerated exhaustively up to this order.
const FACTOR_ENUMERATION_BOUND: usize = 16;

/// A factorization `G = H ⋉ K` with K normal, `H ∩ K = {e}` and `G = HK`.
#[derive(Clone, Debug)]
pub struct SemidirectContext {
    g: Arc<FiniteGroup>,
    h: Subset,
    k: Subset,
    p: Vec<usize>,
    q: Vec<usize>,
    h_group: FiniteGroup,
    h_embed: Vec<usize>,
    k_group: FiniteGroup,
    k_embed: Vec<usize>,
}

/// Which factor a subset lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Factor {
    H,
    K,
}

impl SemidirectContext {
    /// Validates the factorization of `g` by the subgroup `h` and the normal
    /// subgroup `k`.
    pub fn new(g: Arc<FiniteGroup>, h: Subset, k: Subset) -> Result<SemidirectContext> {
        subsets::check_subset(&g, &h)?;
        subsets::check_subset(&g, &k)?;
        g.check_subgroup(&h)?;
        g.check_normal(&k)?;
        let meet = &h & &k;
        if meet != g.identity_set() {
            return Err(Error::Domain(format!("H and K meet in {meet}")));
        }
        let mut p = vec![usize::MAX; g.order()];
        let mut q = vec![usize::MAX; g.order()];
        for a in &h {
            for b in &k {
                let x = g.mul(a, b);
                if p[x] != usize::MAX {
                    return Err(Error::Domain(format!("{x} factors twice as hk")));
                }
                p[x] = a;
                q[x] = b;
            }
        }
        if let Some(x) = p.iter().position(|&a| a == usize::MAX) {
            return Err(Error::Domain(format!("{x} is not a product hk")));
        }
        GroupHom::new(g.clone(), g.clone(), p.clone())?;
        let (h_group, h_embed) = subgroup_as_group(&g, &h, "H")?;
        let (k_group, k_embed) = subgroup_as_group(&g, &k, "K")?;
        Ok(SemidirectContext {
            g,
            h,
            k,
            p,
            q,
            h_group,
            h_embed,
            k_group,
            k_embed,
        })
    }

    /// The context of `H ⋉ K` built by [`FiniteGroup::semidirect`], with
    /// `(h, k)` at index `h·|K| + k`.
    pub fn from_semidirect(h: &FiniteGroup, k: &FiniteGroup, action: &[Vec<usize>]) -> Result<SemidirectContext> {
        let g = Arc::new(FiniteGroup::semidirect(h, k, action)?);
        let n = k.order();
        let hs = g.subset(h.elements().map(|a| a * n + k.identity()))?;
        let ks = g.subset(k.elements().map(|b| h.identity() * n + b))?;
        SemidirectContext::new(g, hs, ks)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn h(&self) -> &Subset {
        &self.h
    }

    pub fn k(&self) -> &Subset {
        &self.k
    }

    /// The unique `(h, k)` with `x = hk`.
    pub fn split(&self, x: usize) -> (usize, usize) {
        (self.p[x], self.q[x])
    }

    /// `p(T)`.
    pub fn project(&self, t: &Subset) -> Subset {
        let mut out = self.g.empty_set();
        for x in t {
            out.insert(self.p[x]);
        }
        out
    }

    /// `φ(T) = (p(T), T ∩ K)`.
    pub fn phi(&self, t: &Subset) -> (Subset, Subset) {
        (self.project(t), t & &self.k)
    }

    /// A pair `(h, k)` with `hk ≠ kh`, if any.
    pub fn noncommuting_witness(&self) -> Option<(usize, usize)> {
        let g = &self.g;
        self.h
            .iter()
            .flat_map(|a| self.k.iter().map(move |b| (a, b)))
            .find(|&(a, b)| g.mul(a, b) != g.mul(b, a))
    }

    /// Whether `[H, K] = {e}`, so that G is the direct product.
    pub fn is_direct(&self) -> bool {
        self.noncommuting_witness().is_none()
    }

    fn factor(&self, side: Factor) -> (&Subset, &FiniteGroup, &[usize]) {
        match side {
            Factor::H => (&self.h, &self.h_group, &self.h_embed),
            Factor::K => (&self.k, &self.k_group, &self.k_embed),
        }
    }

    /// `s` in the coordinates of the standalone factor group.
    fn local(&self, side: Factor, s: &Subset) -> Subset {
        let (_, fg, embed) = self.factor(side);
        let mut out = fg.empty_set();
        for (i, &x) in embed.iter().enumerate() {
            if s.contains(x) {
                out.insert(i);
            }
        }
        out
    }

    /// Whether `s ⊂ side` satisfies `p` as a subset of that factor.
    pub fn classify_in(&self, side: Factor, s: &Subset, p: ConditionP) -> bool {
        let (_, fg, _) = self.factor(side);
        classify(fg, &self.local(side, s), p)
    }

    /// Whether `s ∈ 𝒮″(side)^*`.
    pub fn in_double_prime_star(&self, side: Factor, s: &Subset) -> bool {
        let (sub, _, _) = self.factor(side);
        s.is_subset(sub) && s.contains(self.g.identity()) && s.count() >= 2
    }

    /// `𝒮″(side)^*` as subsets of G: all of it, or `count` random members.
    pub fn family(&self, side: Factor, sample: Sample) -> Result<Vec<Subset>> {
        let (sub, _, _) = self.factor(side);
        let e = self.g.identity();
        let others: Vec<usize> = sub.iter().filter(|&x| x != e).collect();
        if others.is_empty() {
            return Ok(Vec::new());
        }
        match sample {
            Sample::Exhaustive => {
                if sub.count() > FACTOR_ENUMERATION_BOUND {
                    return Err(Error::Cap(format!("factor of order {} is too large to enumerate", sub.count())));
                }
                Ok((1u64..1 << others.len())
                    .map(|mask| {
                        let mut s = self.g.identity_set();
                        for (i, &x) in others.iter().enumerate() {
                            if mask >> i & 1 == 1 {
                                s.insert(x);
                            }
                        }
                        s
                    })
                    .collect())
            }
            Sample::Random { count, seed } => {
                let mut rng = Sample::rng(seed ^ side as u64);
                let mut out = Vec::with_capacity(count);
                while out.len() < count {
                    let mut s = self.g.identity_set();
                    for &x in &others {
                        if rng.random::<bool>() {
                            s.insert(x);
                        }
                    }
                    if s.count() >= 2 {
                        out.push(s);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Pairs `(S, U)` in `𝒮″(H)^* × 𝒮″(K)^*`, and pairs of indices into them.
    fn domain(&self, sample: Sample) -> Result<(Vec<(Subset, Subset)>, Vec<(usize, usize)>)> {
        match sample {
            Sample::Exhaustive => {
                let hs = self.family(Factor::H, sample)?;
                let ks = self.family(Factor::K, sample)?;
                let dom: Vec<(Subset, Subset)> = hs
                    .iter()
                    .flat_map(|s| ks.iter().map(move |u| (s.clone(), u.clone())))
                    .collect();
                let pairs = Sample::Exhaustive.pairs(dom.len());
                Ok((dom, pairs))
            }
            Sample::Random { count, seed } => {
                let hs = self.family(Factor::H, Sample::Random { count: 2 * count, seed })?;
                let ks = self.family(Factor::K, Sample::Random { count: 2 * count, seed })?;
                let dom: Vec<(Subset, Subset)> = hs.into_iter().zip(ks).collect();
                let pairs = (0..dom.len() / 2).map(|i| (2 * i, 2 * i + 1)).collect();
                Ok((dom, pairs))
            }
        }
    }
}

/// `ψ_L(S, U) = S^L ∪ U`, or `ψ′_L(S, U) = S^L U` when `primed`.
pub fn psi(ctx: &SemidirectContext, s: &Subset, u: &Subset, l: &Subset, primed: bool) -> Result<Subset> {
    let g = &ctx.g;
    for (name, set, side) in [("S", s, Factor::H), ("U", u, Factor::K)] {
        subsets::check_subset(g, set)?;
        if !ctx.in_double_prime_star(side, set) {
            return Err(Error::Domain(format!("{name} = {set} is not in S''({side:?})^*")));
        }
    }
    subsets::check_subset(g, l)?;
    if !l.is_subset(&ctx.k) || !l.contains(g.identity()) {
        return Err(Error::Domain(format!("L = {l} is not in S''(K)")));
    }
    Ok(psi_unchecked(ctx, s, u, l, primed))
}

fn psi_unchecked(ctx: &SemidirectContext, s: &Subset, u: &Subset, l: &Subset, primed: bool) -> Subset {
    let sl = subsets::conjugate(&ctx.g, s, l);
    if primed {
        subsets::product(&ctx.g, &sl, u)
    } else {
        &sl | u
    }
}

/// The maps φ, ψ_L, ψ′_L and their images, for a fixed `L ∈ 𝒮″(K)`:
///
/// - `φψ = φψ′ = id` and `ν̂_H(ψ(S,U), ψ′(S,U)) ≤ 2`;
/// - `S^K U = U S^K` for all `S ⊂ H`, `U ⊂ K`;
/// - `X ∈ Im ψ` iff `X = (X∩H)^L ∪ (X∩K)` with both traces starred, and
///   likewise for ψ′ with the product; checked against the brute-force
///   image when the domain is enumerable.
pub fn psi_suite(ctx: &SemidirectContext, l: &Subset, sample: Sample) -> Result<Report> {
    let g = &ctx.g;
    let mut report = Report::new(format!("psi {} = H x| K, L = {l}", g.name()));
    let hs = ctx.family(Factor::H, sample)?;
    let ks = ctx.family(Factor::K, sample)?;
    let (dom, _) = ctx.domain(sample)?;
    for (s, u) in &dom {
        let t = psi(ctx, s, u, l, false)?;
        let t2 = psi(ctx, s, u, l, true)?;
        let want = (s.clone(), u.clone());
        report.check("phi psi = id", ctx.phi(&t) == want, || format!("S = {s}, U = {u}"));
        report.check("phi psi' = id", ctx.phi(&t2) == want, || format!("S = {s}, U = {u}"));
        report.check("psi(S,U) n H = S", &t & &ctx.h == *s && &t2 & &ctx.h == *s, || format!("S = {s}, U = {u}"));
        let d = nu_h_hat(g, &t, &t2);
        report.check("nu_H_hat(psi, psi') <= 2", d <= Fin(2), || format!("S = {s}, U = {u}: {d}"));
    }
    for s in &hs {
        let sk = subsets::conjugate(g, s, &ctx.k);
        for u in &ks {
            report.check(
                "S^K U = U S^K",
                subsets::product(g, &sk, u) == subsets::product(g, u, &sk),
                || format!("S = {s}, U = {u}"),
            );
        }
    }
    if sample == Sample::Exhaustive && g.order() <= FACTOR_ENUMERATION_BOUND {
        let image: std::collections::BTreeSet<u64> = dom.iter().map(|(s, u)| psi_unchecked(ctx, s, u, l, false).mask()).collect();
        let image2: std::collections::BTreeSet<u64> = dom.iter().map(|(s, u)| psi_unchecked(ctx, s, u, l, true).mask()).collect();
        for mask in 0..1u64 << g.order() {
            let x = Subset::from_mask(g.order(), mask);
            if !x.contains(g.identity()) {
                continue;
            }
            let (xh, xk) = (&x & &ctx.h, &x & &ctx.k);
            let traces = ctx.in_double_prime_star(Factor::H, &xh) && ctx.in_double_prime_star(Factor::K, &xk);
            let shaped = traces && x == psi_unchecked(ctx, &xh, &xk, l, false);
            report.check("X in Im psi iff X = (X n H)^L u (X n K)", shaped == image.contains(&mask), || format!("X = {x}"));
            let shaped = traces && x == psi_unchecked(ctx, &xh, &xk, l, true);
            report.check("X in Im psi' iff X = (X n H)^L (X n K)", shaped == image2.contains(&mask), || format!("X = {x}"));
        }
    }
    Ok(report)
}

/// With `T = ψ(S,U)`: `μ = ν_H^G(T, T′) = max(ν_H^H(S,S′), ν_H^G(T,U′))`.
/// With `T = ψ′(S,U)`: `max(ν_H^H(S,S′), ν_H^G(T,U′)) ≤ μ′ ≤ 2·max(..)`.
pub fn sdprod_metric_compare(ctx: &SemidirectContext, l: &Subset, sample: Sample) -> Result<Report> {
    let g = &ctx.g;
    let mut report = Report::new(format!("semidirect metrics {}, L = {l}", g.name()));
    let (dom, pairs) = ctx.domain(sample)?;
    let images: Vec<(Subset, Subset)> = dom
        .iter()
        .map(|(s, u)| Ok((psi(ctx, s, u, l, false)?, psi(ctx, s, u, l, true)?)))
        .collect::<Result<_>>()?;
    let lengths: Vec<(Vec<ExtNat>, Vec<ExtNat>, Vec<ExtNat>)> = dom
        .iter()
        .zip(&images)
        .map(|((s, _), (t, t2))| (word_lengths(g, s), word_lengths(g, t), word_lengths(g, t2)))
        .collect();
    for (i, j) in pairs {
        let ((s, u), (s2, u2)) = (&dom[i], &dom[j]);
        let (ls, lt, lt2) = &lengths[i];
        let nu_hh = sup_over(ls, s2);

        let mu = sup_over(lt, &images[j].0);
        let max = nu_hh.max(sup_over(lt, u2));
        report.check("mu = max(nu_H^H(S,S'), nu_H^G(T,U'))", mu == max, || {
            format!("(S,U) = ({s},{u}), (S',U') = ({s2},{u2}): {mu} != {max}")
        });

        let mu2 = sup_over(lt2, &images[j].1);
        let max2 = nu_hh.max(sup_over(lt2, u2));
        report.check("max <= mu' <= 2 max", max2 <= mu2 && mu2 <= Fin(2) * max2, || {
            format!("(S,U) = ({s},{u}), (S',U') = ({s2},{u2}): mu' = {mu2}, max = {max2}")
        });
    }
    for (t, t2) in &images {
        let d = nu_h_hat(g, t, t2);
        report.check("nu_H_hat(psi, psi') <= 2", d <= Fin(2), || format!("psi = {t}, psi' = {t2}: {d}"));
    }
    Ok(report)
}

fn require_direct(ctx: &SemidirectContext) -> Result<()> {
    match ctx.noncommuting_witness() {
        None => Ok(()),
        Some((a, b)) => Err(Error::Domain(format!("not a direct product: {a} and {b} do not commute"))),
    }
}

/// For `G = H × K`: `μ = μ′ = max(ν_H^H(S,S′), ν_H^K(U,U′))`, ψ and ψ′ do not
/// depend on L, and `T′ ⊂ T^n` iff `S′ ⊂ S^n` and `U′ ⊂ U^n`.
pub fn direct_product_collapse(ctx: &SemidirectContext, sample: Sample) -> Result<Report> {
    require_direct(ctx)?;
    let g = &ctx.g;
    let e = g.identity_set();
    let mut report = Report::new(format!("direct product {}", g.name()));
    let (dom, pairs) = ctx.domain(sample)?;
    let sets: Vec<(Subset, Subset)> = dom
        .iter()
        .map(|(s, u)| (psi_unchecked(ctx, s, u, &e, false), psi_unchecked(ctx, s, u, &e, true)))
        .collect();
    for ((s, u), (t, t2)) in dom.iter().zip(&sets) {
        report.check(
            "psi, psi' independent of L",
            psi_unchecked(ctx, s, u, &ctx.k, false) == *t && psi_unchecked(ctx, s, u, &ctx.k, true) == *t2,
            || format!("S = {s}, U = {u}"),
        );
    }
    let n_max = g.order() as u64;
    for (i, j) in pairs {
        let ((s, u), (s2, u2)) = (&dom[i], &dom[j]);
        let target = nu_h(g, s, s2).max(nu_h(g, u, u2));
        let mu = nu_h(g, &sets[i].0, &sets[j].0);
        let mu2 = nu_h(g, &sets[i].1, &sets[j].1);
        report.check("mu = max(nu_H^H, nu_H^K)", mu == target, || {
            format!("(S,U) = ({s},{u}), (S',U') = ({s2},{u2}): {mu} != {target}")
        });
        report.check("mu' = max(nu_H^H, nu_H^K)", mu2 == target, || {
            format!("(S,U) = ({s},{u}), (S',U') = ({s2},{u2}): {mu2} != {target}")
        });
        for n in 0..=n_max {
            let factors = s2.is_subset(&subsets::power(g, s, Fin(n))) && u2.is_subset(&subsets::power(g, u, Fin(n)));
            for (which, t, t2) in [("psi", &sets[i].0, &sets[j].0), ("psi'", &sets[i].1, &sets[j].1)] {
                let whole = t2.is_subset(&subsets::power(g, t, Fin(n)));
                report.check("T' in T^n iff S' in S^n and U' in U^n", whole == factors, || {
                    format!("{which}, (S,U) = ({s},{u}), (S',U') = ({s2},{u2}), n = {n}")
                });
            }
        }
    }
    Ok(report)
}

/// Identities of subsets `S ∋ e` of H and `U ∋ e` of K in a direct product.
pub fn direct_product_identities(ctx: &SemidirectContext, sample: Sample, max_n: u64) -> Result<Report> {
    require_direct(ctx)?;
    let g = &ctx.g;
    let mut report = Report::new(format!("direct product identities {}", g.name()));
    let with_trivial = |side| -> Result<Vec<Subset>> {
        let mut v = ctx.family(side, sample)?;
        v.push(g.identity_set());
        Ok(v)
    };
    let q = GroupHom::new(ctx.g.clone(), ctx.g.clone(), ctx.q.clone());
    report.check("q is a homomorphism", q.is_ok(), || "q".into());
    let (hs, ks) = (with_trivial(Factor::H)?, with_trivial(Factor::K)?);
    let full = g.full_set();
    for (i, s) in hs.iter().enumerate() {
        report.check("S^K = S", subsets::conjugate(g, s, &ctx.k) == *s, || format!("S = {s}"));
        report.check(
            "S^G = S^H",
            subsets::conjugate(g, s, &full) == subsets::conjugate(g, s, &ctx.h),
            || format!("S = {s}"),
        );
        // in sampled mode visit each S with a few partners only
        let partners: Vec<&Subset> = match sample {
            Sample::Exhaustive => ks.iter().collect(),
            Sample::Random { .. } => vec![&ks[i % ks.len()]],
        };
        for u in partners {
            let su = subsets::product(g, s, u);
            report.check("SU = US", su == subsets::product(g, u, s), || format!("S = {s}, U = {u}"));
            for n in 0..=max_n {
                let n = Fin(n);
                let (sn, un) = (subsets::power(g, s, n), subsets::power(g, u, n));
                report.check(
                    "(SU)^n = S^n U^n",
                    subsets::power(g, &su, n) == subsets::product(g, &sn, &un),
                    || format!("S = {s}, U = {u}, n = {n}"),
                );
                report.check(
                    "(S u U)^n contains S^n u U^n",
                    (&sn | &un).is_subset(&subsets::power(g, &(s | u), n)),
                    || format!("S = {s}, U = {u}, n = {n}"),
                );
            }
            report.check(
                "(SU)^G = S^H U^K",
                subsets::conjugate(g, &su, &full)
                    == subsets::product(g, &subsets::conjugate(g, s, &ctx.h), &subsets::conjugate(g, u, &ctx.k)),
                || format!("S = {s}, U = {u}"),
            );
            let q_of = |t: &Subset| -> Subset {
                let mut out = g.empty_set();
                for x in t {
                    out.insert(ctx.q[x]);
                }
                out
            };
            report.check("q(S u U) = q(SU) = U", q_of(&(s | u)) == *u && q_of(&su) == *u, || {
                format!("S = {s}, U = {u}")
            });
        }
    }
    for u in &ks {
        report.check("U^H = U", subsets::conjugate(g, u, &ctx.h) == *u, || format!("U = {u}"));
        report.check(
            "U^G = U^K",
            subsets::conjugate(g, u, &full) == subsets::conjugate(g, u, &ctx.k),
            || format!("U = {u}"),
        );
    }
    Ok(report)
}

/// Why a `(P, map, L)` combination carries no assertion, if it does not.
fn preservation_gap(ctx: &SemidirectContext, p: ConditionP, primed: bool, l: &Subset) -> Option<&'static str> {
    if ctx.is_direct() {
        return None;
    }
    let l_is_k = *l == ctx.k;
    match p {
        ConditionP::F | ConditionP::G | ConditionP::S | ConditionP::Fg => None,
        ConditionP::C | ConditionP::Ng if !l_is_k => Some("needs L = K"),
        ConditionP::C | ConditionP::Ng => None,
        ConditionP::Fc | ConditionP::Nfg if primed => Some("not asserted for psi' in a semidirect product"),
        ConditionP::Fc | ConditionP::Nfg if !l_is_k => Some("needs L = K"),
        ConditionP::Fc | ConditionP::Nfg => None,
    }
}

/// Whether `(S, U)` meets the hypotheses under which ψ (or ψ′) preserves `p`.
fn preservation_inputs(ctx: &SemidirectContext, p: ConditionP, s: &Subset, u: &Subset) -> bool {
    let g = &ctx.g;
    let direct = ctx.is_direct();
    let u_normal = subsets::is_conj_invariant(g, u);
    match p {
        ConditionP::F | ConditionP::G | ConditionP::S | ConditionP::Fg => {
            ctx.classify_in(Factor::H, s, p) && ctx.classify_in(Factor::K, u, p)
        }
        ConditionP::C | ConditionP::Ng | ConditionP::Fc => {
            ctx.classify_in(Factor::H, s, p) && ctx.classify_in(Factor::K, u, p) && (direct || u_normal)
        }
        ConditionP::Nfg if direct => ctx.classify_in(Factor::H, s, p) && ctx.classify_in(Factor::K, u, p),
        ConditionP::Nfg => {
            ctx.classify_in(Factor::H, s, p)
                && ctx.classify_in(Factor::K, u, ConditionP::S)
                && ctx.classify_in(Factor::K, u, ConditionP::G)
                && u_normal
        }
    }
}

/// ψ and ψ′ send inputs satisfying `p` (with the stated side conditions) to
/// outputs in `𝒮″_P(G)^*`. Combinations without an assertion are skipped.
pub fn condition_preservation(ctx: &SemidirectContext, p: ConditionP, l: &Subset, sample: Sample) -> Result<Report> {
    let g = &ctx.g;
    let mut report = Report::new(format!("condition {p} in {}, L = {l}", g.name()));
    let (dom, _) = ctx.domain(sample)?;
    for (primed, name) in [(false, "psi preserves P"), (true, "psi' preserves P")] {
        if let Some(reason) = preservation_gap(ctx, p, primed, l) {
            report.skip(name, reason);
            continue;
        }
        for (s, u) in &dom {
            if !preservation_inputs(ctx, p, s, u) {
                continue;
            }
            let t = psi(ctx, s, u, l, primed)?;
            let ok = subsets::in_double_prime_star(g, &t) && classify(g, &t, p);
            report.check(name, ok, || format!("S = {s}, U = {u}, output {t}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::by_name;

    /// S3 with H = {e, (1 2)} and K = A3.
    fn s3() -> SemidirectContext {
        let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let h = g.subset([0, 1]).unwrap();
        let k = g.subset([0, 3, 4]).unwrap();
        SemidirectContext::new(g, h, k).unwrap()
    }

    /// D4 with H = {e, s} and K = ⟨r⟩.
    fn d4() -> SemidirectContext {
        let g = Arc::new(FiniteGroup::dihedral(4).unwrap());
        let h = g.subset([0, 4]).unwrap();
        let k = g.subset([0, 1, 2, 3]).unwrap();
        SemidirectContext::new(g, h, k).unwrap()
    }

    fn direct(a: usize, b: usize) -> SemidirectContext {
        let (za, zb) = (FiniteGroup::cyclic(a).unwrap(), FiniteGroup::cyclic(b).unwrap());
        let trivial = vec![(0..b).collect::<Vec<_>>(); a];
        SemidirectContext::from_semidirect(&za, &zb, &trivial).unwrap()
    }

    #[test]
    fn split_is_unique_factorization() {
        let ctx = s3();
        let g = ctx.group();
        for x in g.elements() {
            let (a, b) = ctx.split(x);
            assert!(ctx.h().contains(a) && ctx.k().contains(b));
            assert_eq!(g.mul(a, b), x);
            // brute force: the only factorization
            let count = ctx.h().iter().flat_map(|a| ctx.k().iter().map(move |b| (a, b))).filter(|&(a, b)| g.mul(a, b) == x).count();
            assert_eq!(count, 1);
        }
        assert_eq!(ctx.split(1), (1, 0));
        assert_eq!(ctx.split(3), (0, 3));
        assert!(!ctx.is_direct());
    }

    #[test]
    fn invalid_factorizations_are_rejected() {
        let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let h = g.subset([0, 1]).unwrap();
        let not_normal = g.subset([0, 2]).unwrap();
        assert!(SemidirectContext::new(g.clone(), h.clone(), not_normal).is_err());
        assert!(SemidirectContext::new(g.clone(), h, g.full_set()).is_err());
        let small = g.subset([0, 1]).unwrap();
        assert!(SemidirectContext::new(g.clone(), small, g.identity_set()).is_err());
    }

    #[test]
    fn constructor_contexts_match_internal_ones() {
        // Z2 acting on Z3 by inversion gives S3
        let (z2, z3) = (FiniteGroup::cyclic(2).unwrap(), FiniteGroup::cyclic(3).unwrap());
        let action = vec![vec![0, 1, 2], vec![0, 2, 1]];
        let ctx = SemidirectContext::from_semidirect(&z2, &z3, &action).unwrap();
        assert_eq!(ctx.group().order(), 6);
        assert!(!ctx.is_direct());
        assert_eq!(ctx.h().to_vec(), vec![0, 3]);
        assert_eq!(ctx.k().to_vec(), vec![0, 1, 2]);
        for x in ctx.group().elements() {
            let (a, b) = ctx.split(x);
            assert_eq!((a, b), (x / 3 * 3, x % 3));
        }
    }

    #[test]
    fn psi_examples() {
        let ctx = s3();
        let g = ctx.group();
        let s = g.subset([0, 1]).unwrap();
        let u = g.subset([0, 3]).unwrap();
        let t = psi(&ctx, &s, &u, ctx.k(), false).unwrap();
        assert_eq!(&t & ctx.h(), s);
        assert_eq!(&t & ctx.k(), u);
        // U = {e}
        assert!(psi(&ctx, &s, &g.identity_set(), ctx.k(), false).is_err());
        assert!(psi(&ctx, &g.identity_set(), &u, ctx.k(), false).is_err());
        assert!(psi(&ctx, &s, &u, &g.subset([1]).unwrap(), false).is_err());

        let z = direct(4, 3);
        let g = z.group();
        let s = g.subset([0, 3]).unwrap();
        let u = g.subset([0, 1]).unwrap();
        let plain = psi(&z, &s, &u, &g.identity_set(), false).unwrap();
        assert_eq!(psi(&z, &s, &u, z.k(), false).unwrap(), plain);
    }

    #[test]
    fn psi_suites() {
        for ctx in [s3(), d4(), direct(2, 3)] {
            for l in [ctx.k().clone(), ctx.group().identity_set()] {
                let r = psi_suite(&ctx, &l, Sample::Exhaustive).unwrap();
                assert!(r.is_ok(), "{r}");
            }
        }
    }

    #[test]
    fn semidirect_comparison() {
        let ctx = s3();
        let r = sdprod_metric_compare(&ctx, ctx.k(), Sample::Exhaustive).unwrap();
        assert!(r.is_ok(), "{r}");
        assert_eq!(r.get("mu = max(nu_H^H(S,S'), nu_H^G(T,U'))").unwrap().passed, 9);
        let ctx = d4();
        let r = sdprod_metric_compare(&ctx, ctx.k(), Sample::Random { count: 200, seed: 5 }).unwrap();
        assert!(r.is_ok(), "{r}");
        let r = sdprod_metric_compare(&ctx, &ctx.group().subset([0, 1]).unwrap(), Sample::Exhaustive).unwrap();
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn equal_pairs_are_at_distance_one() {
        let ctx = s3();
        let g = ctx.group();
        let s = g.subset([0, 1]).unwrap();
        let u = g.subset([0, 3, 4]).unwrap();
        let t = psi(&ctx, &s, &u, ctx.k(), false).unwrap();
        assert_eq!(nu_h(g, &t, &t), Fin(1));
        assert_eq!(nu_h(g, &s, &s).max(nu_h(g, &t, &u)), Fin(1));
    }

    #[test]
    fn direct_products_collapse() {
        let r = direct_product_collapse(&direct(2, 3), Sample::Exhaustive).unwrap();
        assert!(r.is_ok(), "{r}");
        let r = direct_product_collapse(&direct(4, 3), Sample::Random { count: 500, seed: 11 }).unwrap();
        assert!(r.is_ok(), "{r}");
        let err = direct_product_collapse(&s3(), Sample::Exhaustive).unwrap_err();
        assert!(err.to_string().contains("do not commute"));
    }

    #[test]
    fn collapse_with_trivial_kernel_is_nu_h_on_h() {
        let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let ctx = SemidirectContext::new(g.clone(), g.full_set(), g.identity_set()).unwrap();
        assert!(ctx.is_direct());
        assert!(ctx.family(Factor::K, Sample::Exhaustive).unwrap().is_empty());
        let r = direct_product_collapse(&ctx, Sample::Exhaustive).unwrap();
        assert_eq!(r.passed(), r.get("psi, psi' independent of L").map_or(0, |t| t.passed));
    }

    #[test]
    fn direct_identities() {
        let r = direct_product_identities(&direct(2, 3), Sample::Exhaustive, 4).unwrap();
        assert!(r.is_ok(), "{r}");
        let r = direct_product_identities(&direct(4, 3), Sample::Random { count: 100, seed: 2 }, 4).unwrap();
        assert!(r.is_ok(), "{r}");
    }

    #[test]
    fn conditions_are_preserved() {
        for ctx in [s3(), d4(), direct(4, 3)] {
            for p in ConditionP::ALL {
                for l in [ctx.k().clone(), ctx.group().identity_set()] {
                    let r = condition_preservation(&ctx, p, &l, Sample::Exhaustive).unwrap();
                    assert!(r.is_ok(), "{r}");
                }
            }
        }
        let ctx = direct(4, 3);
        let r = condition_preservation(&ctx, ConditionP::Nfg, ctx.k(), Sample::Exhaustive).unwrap();
        assert!(r.get("psi' preserves P").unwrap().passed > 0);
    }

    #[test]
    fn catalog_direct_products_split() {
        let g = Arc::new(by_name("Z6xZ2").unwrap());
        let h = g.subset(g.elements().filter(|&x| g.mul(x, x) == g.identity() && x != g.identity()).take(1).chain([g.identity()])).unwrap();
        // any order-2 subgroup meeting a complement of order 6 trivially
        let k_candidates: Vec<Subset> = crate::bitset::all_subsets(g.order())
            .filter(|k| k.count() == 6 && g.check_normal(k).is_ok() && (k & &h) == g.identity_set())
            .collect();
        assert!(!k_candidates.is_empty());
        let ctx = SemidirectContext::new(g, h, k_candidates[0].clone()).unwrap();
        assert!(ctx.is_direct());
    }
}
