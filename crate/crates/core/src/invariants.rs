//! Normal rank, `diam_nfg`, `Δ(G)` and enumeration of the subset families
//! `𝒮_P(G)`.
//!
//! Symmetric conjugation-invariant sets are unions of "orbits" `C ∪ C⁻¹` of
//! conjugacy classes, so the nfg family is enumerated over orbit unions rather
//! than over all subsets.

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::{all_subsets, Subset};
use crate::error::{Error, Result};
use crate::extnat::{ExtNat, Fin, Inf};
use crate::group::FiniteGroup;
use crate::metric::{nu_h, sup_over, word_lengths};
use crate::report::{Report, Sample};
use crate::subsets::{self, classify, ConditionP};

/// Orbit unions are enumerated exhaustively up to this many orbits.
pub const ORBIT_CAP: usize = 20;

/// Subsets are enumerated exhaustively up to this order by default.
pub const FAMILY_ORDER_BOUND: usize = 12;

/// The nonidentity classes of G merged with their inverse classes, ordered by
/// least member.
pub fn sym_class_orbits(g: &FiniteGroup) -> Vec<Subset> {
    let mut orbits: Vec<Subset> = Vec::new();
    for c in g.conjugacy_classes() {
        if c.contains(g.identity()) {
            continue;
        }
        let orbit = subsets::symmetrize(g, &c);
        if !orbits.contains(&orbit) {
            orbits.push(orbit);
        }
    }
    orbits
}

fn union_of(g: &FiniteGroup, orbits: &[Subset], mask: u64) -> Subset {
    let mut s = g.identity_set();
    for (i, o) in orbits.iter().enumerate() {
        if mask >> i & 1 == 1 {
            s.union_with(o);
        }
    }
    s
}

/// `𝒮″_nfg(G)`: every generating union of orbits, with e added, in mask
/// order. Fails when G has more than [`ORBIT_CAP`] orbits.
pub fn nfg_family(g: &FiniteGroup) -> Result<Vec<Subset>> {
    let orbits = sym_class_orbits(g);
    if orbits.len() > ORBIT_CAP {
        return Err(Error::Cap(format!(
            "{} has {} class orbits, more than {ORBIT_CAP}",
            g.name(),
            orbits.len()
        )));
    }
    let sets: Vec<Subset> = (0..1u64 << orbits.len())
        .into_par_iter()
        .map(|mask| union_of(g, &orbits, mask))
        .filter(|s| subsets::generates(g, s))
        .collect();
    Ok(sets)
}

/// Value of an optimization over a family together with the set attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witnessed {
    pub value: ExtNat,
    pub witness: Option<Subset>,
    /// False when the family was sampled and `value` is only a bound.
    pub exhaustive: bool,
}

/// `rank_n G`: least `|A|` with `⟨⟨A⟩⟩ = G`, searched up to `cap`. The witness
/// holds least members of the chosen orbits; ∞ means the cap was exceeded.
pub fn rank_n(g: &FiniteGroup, cap: usize) -> Witnessed {
    if g.order() == 1 {
        return Witnessed {
            value: Fin(0),
            witness: Some(g.empty_set()),
            exhaustive: true,
        };
    }
    // normal closure depends only on the orbits met by A
    let orbits = sym_class_orbits(g);
    for k in 1..=cap.min(orbits.len()) {
        let mut found = None;
        for_each_combination(orbits.len(), k, &mut |idx| {
            let mut s = g.empty_set();
            for &i in idx {
                s.union_with(&orbits[i]);
            }
            if subsets::generates(g, &s) {
                let a = g.subset(idx.iter().map(|&i| orbits[i].first().unwrap())).unwrap();
                found = Some(a);
                true
            } else {
                false
            }
        });
        if let Some(a) = found {
            return Witnessed {
                value: Fin(k as u64),
                witness: Some(a),
                exhaustive: true,
            };
        }
    }
    Witnessed {
        value: Inf,
        witness: None,
        exhaustive: cap >= orbits.len(),
    }
}

/// Calls `f` on each k-subset of `0..n` in lexicographic order until it
/// returns true.
fn for_each_combination(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        if f(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `ν_H(S, G)`.
pub fn diam_for(g: &FiniteGroup, s: &Subset) -> ExtNat {
    nu_h(g, s, &g.full_set())
}

fn optimize(g: &FiniteGroup, maximize: bool) -> Result<Witnessed> {
    let family = nfg_family(g)?;
    let full = g.full_set();
    let values: Vec<ExtNat> = family
        .par_iter()
        .map(|s| sup_over(&word_lengths(g, s), &full))
        .collect();
    let mut best: Option<(ExtNat, usize)> = None;
    for (i, &v) in values.iter().enumerate() {
        let better = match best {
            None => true,
            Some((b, _)) => (maximize && v > b) || (!maximize && v < b),
        };
        if better {
            best = Some((v, i));
        }
    }
    Ok(match best {
        Some((value, i)) => Witnessed {
            value,
            witness: Some(family[i].clone()),
            exhaustive: true,
        },
        None => Witnessed {
            value: if maximize { Fin(0) } else { Inf },
            witness: None,
            exhaustive: true,
        },
    })
}

/// `diam_nfg G = min { ν_H(S, G) | S ∈ 𝒮_nfg(G) }` with a minimizing S.
pub fn diam_nfg(g: &FiniteGroup) -> Result<Witnessed> {
    optimize(g, false)
}

/// `Δ(G) = sup { ν_H(S, G) | S ∈ 𝒮_nfg(G) }` with a maximizing S.
///
/// Exhaustive when G has at most [`ORBIT_CAP`] orbits; otherwise `samples`
/// random orbit unions are tried and the result is a lower bound.
pub fn delta(g: &FiniteGroup, samples: usize, seed: u64) -> Witnessed {
    if let Ok(w) = optimize(g, true) {
        return w;
    }
    use rand::RngExt;
    let orbits = sym_class_orbits(g);
    let mut rng = crate::report::Sample::rng(seed);
    let mut best = Witnessed {
        value: Fin(0),
        witness: None,
        exhaustive: false,
    };
    for _ in 0..samples {
        let mask: u64 = rng.random::<u64>() & ((1u64 << orbits.len()) - 1);
        let s = union_of(g, &orbits, mask);
        if subsets::generates(g, &s) {
            let v = diam_for(g, &s);
            if best.witness.is_none() || v > best.value {
                best.value = v;
                best.witness = Some(s);
            }
        }
    }
    best
}

/// All subsets satisfying P, as canonical `S ∪ {e}` representatives.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyEnumeration {
    pub condition: ConditionP,
    pub sets: Vec<Subset>,
    /// For nfg: whether `ν_H(S, T)` is finite for every pair in the family.
    pub pairwise_finite: Option<bool>,
}

/// Enumerates `𝒮_P(G)` up to the identity class. Full enumeration needs
/// `|G| ≤ order_bound`, except for the conditions implying `s + c`, which
/// are enumerated over orbit unions.
pub fn enumerate_family(g: &FiniteGroup, p: ConditionP, order_bound: usize) -> Result<FamilyEnumeration> {
    let sets: Vec<Subset> = match p {
        ConditionP::Ng | ConditionP::Nfg => nfg_family(g)?,
        _ => {
            if g.order() > order_bound.min(24) {
                return Err(Error::Cap(format!(
                    "{} has order {}, above the enumeration bound {order_bound}",
                    g.name(),
                    g.order()
                )));
            }
            let e = g.identity();
            let mut v: Vec<Subset> = all_subsets(g.order())
                .filter(|s| s.contains(e) && classify(g, s, p))
                .collect();
            v.sort_by_key(|s| s.to_vec());
            v
        }
    };
    // G itself is in the nfg family and every T ⊂ G, so ν_H(S, T) ≤ ν_H(S, G)
    // and pairwise finiteness reduces to finiteness against G
    let pairwise_finite = matches!(p, ConditionP::Nfg).then(|| {
        let full = g.full_set();
        sets.contains(&full) && sets.par_iter().all(|s| diam_for(g, s).is_finite())
    });
    Ok(FamilyEnumeration {
        condition: p,
        sets,
        pairwise_finite,
    })
}

/// Everything the `invariants` command reports about one group.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantSummary {
    pub group: String,
    pub order: usize,
    pub rank_n: Witnessed,
    pub diam_nfg: Witnessed,
    pub delta: Witnessed,
}

pub fn summarize(g: &FiniteGroup, cap: usize, seed: u64) -> Result<InvariantSummary> {
    Ok(InvariantSummary {
        group: g.name().to_string(),
        order: g.order(),
        rank_n: rank_n(g, cap),
        diam_nfg: diam_nfg(g)?,
        delta: delta(g, 4096, seed),
    })
}

/// Checks `ν_H(T, G) ≤ ν_H(T, S)·ν_H(S, G)` and finiteness across pairs of
/// the nfg family, and `diam_nfg ≤ Δ`.
pub fn family_consistency(g: &FiniteGroup, sample: Sample) -> Result<Report> {
    let mut report = Report::new(format!("nfg family of {}", g.name()));
    let family = nfg_family(g)?;
    let full = g.full_set();
    let lengths: Vec<Vec<ExtNat>> = family.par_iter().map(|s| word_lengths(g, s)).collect();
    let to_g: Vec<ExtNat> = lengths.iter().map(|l| sup_over(l, &full)).collect();
    for (i, j) in sample.pairs(family.len()) {
        let (t, s) = (&family[i], &family[j]);
        let ts = sup_over(&lengths[i], s);
        report.check("nu_H(T,S) finite", ts.is_finite(), || format!("T={t} S={s}"));
        report.check("nu_H(T,G) <= nu_H(T,S) nu_H(S,G)", to_g[i] <= ts * to_g[j], || {
            format!("T={t} S={s}")
        });
    }
    let d = diam_nfg(g)?.value;
    let big = delta(g, 0, 0).value;
    report.check("diam_nfg <= Delta", d <= big, || format!("{d} > {big}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    fn set(g: &FiniteGroup, xs: &[usize]) -> Subset {
        g.subset(xs.iter().copied()).unwrap()
    }

    #[test]
    fn normal_rank() {
        assert_eq!(rank_n(&FiniteGroup::cyclic(1).unwrap(), 3).value, Fin(0));
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let r = rank_n(&s3, 3);
        assert_eq!(r.value, Fin(1));
        assert_eq!(s3.element_order(r.witness.unwrap().first().unwrap()), 2);
        let v4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(2).unwrap());
        assert_eq!(rank_n(&v4, 3).value, Fin(2));
        assert_eq!(rank_n(&v4, 1).value, Inf);
    }

    #[test]
    fn diameters() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(diam_for(&s3, &set(&s3, &[0, 1, 2, 5])), Fin(2));
        assert_eq!(diam_for(&s3, &set(&s3, &[0, 3, 4])), Inf);
        for g in catalog().iter().filter(|g| g.order() > 1) {
            let d = diam_nfg(g).unwrap();
            assert_eq!(d.value, Fin(1), "{}", g.name());
        }
        let trivial = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(diam_nfg(&trivial).unwrap().value, Fin(0));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&FiniteGroup::cyclic(2).unwrap(), 0, 0).value, Fin(1));
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let d = delta(&s3, 0, 0);
        assert_eq!(d.value, Fin(2));
        assert_eq!(d.witness.unwrap(), set(&s3, &[0, 1, 2, 5]));
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let d = delta(&z4, 0, 0);
        assert_eq!(d.value, Fin(2));
        assert_eq!(d.witness.unwrap(), set(&z4, &[0, 1, 3]));
        assert!(d.exhaustive);
    }

    #[test]
    fn families() {
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let f = enumerate_family(&z3, ConditionP::G, 12).unwrap();
        assert_eq!(f.sets, vec![set(&z3, &[0, 1]), set(&z3, &[0, 1, 2]), set(&z3, &[0, 2])]);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let f = enumerate_family(&s3, ConditionP::Ng, 12).unwrap();
        assert_eq!(f.sets, vec![set(&s3, &[0, 1, 2, 5]), s3.full_set()]);
        let mut sc: Vec<Subset> = all_subsets(6)
            .filter(|s| classify(&s3, s, ConditionP::S) && classify(&s3, s, ConditionP::C))
            .map(|s| s.with(0))
            .collect();
        sc.sort_by_key(|s| s.to_vec());
        sc.dedup();
        let sym = enumerate_family(&s3, ConditionP::S, 12).unwrap().sets;
        let conj = enumerate_family(&s3, ConditionP::C, 12).unwrap().sets;
        let both: Vec<Subset> = sym.into_iter().filter(|s| conj.contains(s)).collect();
        assert_eq!(both, sc);
        assert_eq!(both.len(), 4);
        let t = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(enumerate_family(&t, ConditionP::G, 12).unwrap().sets, vec![t.full_set()]);
        let nfg = enumerate_family(&s3, ConditionP::Nfg, 12).unwrap();
        assert_eq!(nfg.pairwise_finite, Some(true));
        assert!(enumerate_family(&FiniteGroup::cyclic(13).unwrap(), ConditionP::G, 12).is_err());
    }

    #[test]
    fn consistency_on_catalog() {
        for g in catalog().iter().filter(|g| g.order() > 1) {
            let plan = if g.order() <= 8 { Sample::Exhaustive } else { Sample::Random { count: 5000, seed: 1 } };
            let r = family_consistency(g, plan).unwrap();
            assert!(r.is_ok(), "{r}");
        }
    }

    #[test]
    fn rank_is_monotone_under_quotients() {
        use std::sync::Arc;
        for g in catalog().into_iter().filter(|g| g.order() <= 12) {
            let g = Arc::new(g);
            let classes = g.conjugacy_classes();
            let r = rank_n(&g, 4).value;
            for mask in 0u32..1 << classes.len() {
                let mut n = g.empty_set();
                for (i, c) in classes.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        n.union_with(c);
                    }
                }
                if g.check_normal(&n).is_ok() {
                    let (q, _) = crate::group::quotient_by_normal(&g, &n).unwrap();
                    assert!(rank_n(&q, 4).value <= r, "{} / {n}", g.name());
                }
            }
        }
    }
}
