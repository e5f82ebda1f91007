//! Products, powers, inverses, conjugation closures and generated subgroups of
//! subsets of a finite group, plus the condition classifier.
//!
//! All functions expect subsets over the group's own universe and panic
//! otherwise; use [`check_subset`] to validate untrusted input first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::Subset;
use crate::error::{Error, Result};
use crate::extnat::ExtNat;
use crate::group::FiniteGroup;

/// Fails when `s` does not live on the elements of `g`.
pub fn check_subset(g: &FiniteGroup, s: &Subset) -> Result<()> {
    if s.universe() == g.order() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "subset over {} elements used with {} of order {}",
            s.universe(),
            g.name(),
            g.order()
        )))
    }
}

#[inline]
fn assert_on(g: &FiniteGroup, s: &Subset) {
    assert_eq!(s.universe(), g.order(), "subset does not belong to {}", g.name());
}

/// `ST = {xy | x ∈ S, y ∈ T}`.
pub fn product(g: &FiniteGroup, s: &Subset, t: &Subset) -> Subset {
    assert_on(g, s);
    assert_on(g, t);
    let mut out = g.empty_set();
    let ts = t.to_vec();
    for x in s {
        for &y in &ts {
            out.insert(g.mul(x, y));
        }
    }
    out
}

/// `xS`.
pub fn left_translate(g: &FiniteGroup, x: usize, s: &Subset) -> Subset {
    let mut out = g.empty_set();
    for y in s {
        out.insert(g.mul(x, y));
    }
    out
}

/// `Sx`.
pub fn right_translate(g: &FiniteGroup, s: &Subset, x: usize) -> Subset {
    let mut out = g.empty_set();
    for y in s {
        out.insert(g.mul(y, x));
    }
    out
}

/// `S^n`, with `S^0 = {e}` and `S^∞` the generated submonoid.
pub fn power(g: &FiniteGroup, s: &Subset, n: ExtNat) -> Subset {
    assert_on(g, s);
    let Some(mut n) = n.finite() else {
        return g.closure(s);
    };
    let mut result = g.identity_set();
    let mut base = s.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = product(g, &result, &base);
        }
        n >>= 1;
        if n > 0 {
            base = product(g, &base, &base);
        }
        if result.is_empty() {
            break;
        }
    }
    result
}

/// `S^{≤n} = S^0 ∪ .. ∪ S^n`.
pub fn power_leq(g: &FiniteGroup, s: &Subset, n: ExtNat) -> Subset {
    assert_on(g, s);
    let Some(n) = n.finite() else {
        return g.closure(s);
    };
    let mut reached = g.identity_set();
    let mut frontier = reached.clone();
    for _ in 0..n {
        let next = &product(g, &frontier, s) - &reached;
        if next.is_empty() {
            break;
        }
        reached.union_with(&next);
        frontier = next;
    }
    reached
}

/// `S^{-1}`.
pub fn inverse(g: &FiniteGroup, s: &Subset) -> Subset {
    assert_on(g, s);
    let mut out = g.empty_set();
    for x in s {
        out.insert(g.inv(x));
    }
    out
}

/// `S^± = S ∪ S^{-1}`.
pub fn symmetrize(g: &FiniteGroup, s: &Subset) -> Subset {
    s | &inverse(g, s)
}

/// `S^A = {a⁻¹xa | x ∈ S, a ∈ A}`.
pub fn conjugate(g: &FiniteGroup, s: &Subset, a: &Subset) -> Subset {
    assert_on(g, s);
    assert_on(g, a);
    let mut out = g.empty_set();
    for y in a {
        for x in s {
            out.insert(g.conj(x, y));
        }
    }
    out
}

/// `C(S) = S^G`.
pub fn conj_closure(g: &FiniteGroup, s: &Subset) -> Subset {
    conjugate(g, s, &g.full_set())
}

/// `C_S = (S^±)^G`.
pub fn sym_conj_closure(g: &FiniteGroup, s: &Subset) -> Subset {
    conj_closure(g, &symmetrize(g, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenerationMode {
    /// `S^∞`
    Submonoid,
    /// `⟨S⟩ = (S^±)^∞`
    Subgroup,
    /// `⟨⟨S⟩⟩ = (C_S)^∞`
    Normal,
}

pub fn generated(g: &FiniteGroup, s: &Subset, mode: GenerationMode) -> Subset {
    match mode {
        GenerationMode::Submonoid => g.closure(s),
        GenerationMode::Subgroup => g.closure(&symmetrize(g, s)),
        GenerationMode::Normal => g.closure(&sym_conj_closure(g, s)),
    }
}

/// The eight subset conditions. Composite ones are `fg = g + s + f`,
/// `ng = g + s + c` and `nfg = g + s + fc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionP {
    F,
    G,
    S,
    C,
    Fc,
    Fg,
    Ng,
    Nfg,
}

impl ConditionP {
    pub const ALL: [ConditionP; 8] = [
        ConditionP::F,
        ConditionP::G,
        ConditionP::S,
        ConditionP::C,
        ConditionP::Fc,
        ConditionP::Fg,
        ConditionP::Ng,
        ConditionP::Nfg,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ConditionP::F => "f",
            ConditionP::G => "g",
            ConditionP::S => "s",
            ConditionP::C => "c",
            ConditionP::Fc => "fc",
            ConditionP::Fg => "fg",
            ConditionP::Ng => "ng",
            ConditionP::Nfg => "nfg",
        }
    }
}

impl fmt::Display for ConditionP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ConditionP {
    type Err = Error;

    fn from_str(s: &str) -> Result<ConditionP> {
        ConditionP::ALL
            .into_iter()
            .find(|p| p.tag() == s)
            .ok_or_else(|| Error::Spec(format!("unknown condition `{s}`")))
    }
}

pub fn is_symmetric(g: &FiniteGroup, s: &Subset) -> bool {
    inverse(g, s) == *s
}

pub fn is_conj_invariant(g: &FiniteGroup, s: &Subset) -> bool {
    conj_closure(g, s) == *s
}

pub fn generates(g: &FiniteGroup, s: &Subset) -> bool {
    g.closure(s).is_full()
}

/// Decides condition `p` for `s`. On a finite group every subset is finite,
/// and `S = A^G` for a finite A exactly when S is conjugation-invariant, so
/// `fc` coincides with `c`.
pub fn classify(g: &FiniteGroup, s: &Subset, p: ConditionP) -> bool {
    assert_on(g, s);
    match p {
        ConditionP::F => true,
        ConditionP::G => generates(g, s),
        ConditionP::S => is_symmetric(g, s),
        ConditionP::C | ConditionP::Fc => is_conj_invariant(g, s),
        ConditionP::Fg => generates(g, s) && is_symmetric(g, s),
        ConditionP::Ng | ConditionP::Nfg => {
            generates(g, s) && is_symmetric(g, s) && is_conj_invariant(g, s)
        }
    }
}

/// Where a subset sits among `𝒮′(G)` (e ∉ S), `𝒮″(G)` (e ∈ S) and the starred
/// family `𝒮(G)^* = 𝒮(G) − {∅, {e}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarClass {
    pub contains_identity: bool,
    pub starred: bool,
    /// `S ∪ {e}`, the representative of `[S]` in `𝒮″(G)`.
    pub canonical: Subset,
}

pub fn star_class(g: &FiniteGroup, s: &Subset) -> StarClass {
    assert_on(g, s);
    StarClass {
        contains_identity: s.contains(g.identity()),
        starred: is_starred(g, s),
        canonical: s.with(g.identity()),
    }
}

/// `S ∉ {∅, {e}}`.
pub fn is_starred(g: &FiniteGroup, s: &Subset) -> bool {
    !s.is_empty() && *s != g.identity_set()
}

/// `S ⊂ G^×` and S starred.
pub fn in_prime_star(g: &FiniteGroup, s: &Subset) -> bool {
    !s.is_empty() && !s.contains(g.identity())
}

/// `e ∈ S` and S starred.
pub fn in_double_prime_star(g: &FiniteGroup, s: &Subset) -> bool {
    s.contains(g.identity()) && s.count() > 1
}

/// Every member of `𝒮″(G)^*` in mask order (`|G| ≤ 20`).
pub fn double_prime_star_family(g: &FiniteGroup) -> Vec<Subset> {
    crate::bitset::all_subsets(g.order())
        .filter(|s| in_double_prime_star(g, s))
        .collect()
}

/// Every member of `𝒮′(G)^*` in mask order (`|G| ≤ 20`).
pub fn prime_star_family(g: &FiniteGroup) -> Vec<Subset> {
    crate::bitset::all_subsets(g.order())
        .filter(|s| in_prime_star(g, s))
        .collect()
}

/// The subset families the verification suites range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `𝒮(G)`
    All,
    /// `𝒮(G)^*`
    Starred,
    /// `𝒮′(G)^*`
    PrimeStar,
    /// `𝒮″(G)^*`
    DoublePrimeStar,
}

impl Family {
    pub fn contains(self, g: &FiniteGroup, s: &Subset) -> bool {
        match self {
            Family::All => true,
            Family::Starred => is_starred(g, s),
            Family::PrimeStar => in_prime_star(g, s),
            Family::DoublePrimeStar => in_double_prime_star(g, s),
        }
    }

    /// Every member, in mask order. Needs `|G| ≤ 20`.
    pub fn enumerate(self, g: &FiniteGroup) -> Result<Vec<Subset>> {
        if g.order() > 20 {
            return Err(Error::Cap(format!(
                "refusing to enumerate all subsets of a group of order {}",
                g.order()
            )));
        }
        Ok(crate::bitset::all_subsets(g.order())
            .filter(|s| self.contains(g, s))
            .collect())
    }

    /// `count` uniformly random members, drawn by rejection.
    pub fn random(self, g: &FiniteGroup, count: usize, seed: u64) -> Vec<Subset> {
        let mut rng = crate::report::Sample::rng(seed);
        let mut out = Vec::with_capacity(count);
        // 𝒮′(G)^* and 𝒮″(G)^* are empty for the trivial group
        if g.order() == 1 && self != Family::All {
            return out;
        }
        while out.len() < count {
            let mut s = crate::report::random_subset(&mut rng, g.order());
            match self {
                Family::PrimeStar => {
                    s.remove(g.identity());
                }
                Family::DoublePrimeStar => {
                    s.insert(g.identity());
                }
                Family::All | Family::Starred => {}
            }
            if self.contains(g, &s) {
                out.push(s);
            }
        }
        out
    }

    /// Members and index pairs to visit: all ordered pairs when exhaustive,
    /// otherwise `count` independent random pairs.
    pub fn pairs(self, g: &FiniteGroup, sample: crate::report::Sample) -> Result<(Vec<Subset>, Vec<(usize, usize)>)> {
        use crate::report::Sample;
        Ok(match sample {
            Sample::Exhaustive => {
                let members = self.enumerate(g)?;
                let pairs = Sample::Exhaustive.pairs(members.len());
                (members, pairs)
            }
            Sample::Random { count, seed } => {
                let members = self.random(g, 2 * count, seed);
                let pairs = (0..members.len() / 2).map(|i| (2 * i, 2 * i + 1)).collect();
                (members, pairs)
            }
        })
    }

    /// Members to visit one at a time.
    pub fn members(self, g: &FiniteGroup, sample: crate::report::Sample) -> Result<Vec<Subset>> {
        use crate::report::Sample;
        match sample {
            Sample::Exhaustive => self.enumerate(g),
            Sample::Random { count, seed } => Ok(self.random(g, count, seed)),
        }
    }
}

/// Parses a subset literal such as `[0,1,5]` against a group of the given order.
pub fn parse_subset(literal: &str, order: usize) -> Result<Subset> {
    let body = literal
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Spec(format!("subset literal `{literal}` must look like [0,1,5]")))?;
    let mut out = Subset::empty(order);
    for (pos, item) in body.split(',').enumerate() {
        let item = item.trim();
        if item.is_empty() {
            if body.trim().is_empty() {
                break;
            }
            return Err(Error::Spec(format!("empty entry at position {pos} in `{literal}`")));
        }
        let x: usize = item
            .parse()
            .map_err(|_| Error::Spec(format!("`{item}` at position {pos} is not an index")))?;
        if x >= order {
            return Err(Error::OutOfRange { element: x, size: order });
        }
        out.insert(x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extnat::{Fin, Inf};

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    fn set(g: &FiniteGroup, xs: &[usize]) -> Subset {
        g.subset(xs.iter().copied()).unwrap()
    }

    /// Indices of the transpositions and 3-cycles of S3 in lexicographic order.
    const S3_TRANSPOSITIONS: [usize; 3] = [1, 2, 5];
    const S3_THREE_CYCLES: [usize; 2] = [3, 4];

    #[test]
    fn s3_layout() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        for t in S3_TRANSPOSITIONS {
            assert_eq!(s3.element_order(t), 2);
        }
        for c in S3_THREE_CYCLES {
            assert_eq!(s3.element_order(c), 3);
        }
    }

    #[test]
    fn products() {
        let g = z(6);
        let pm = set(&g, &[1, 5]);
        assert_eq!(product(&g, &pm, &pm), set(&g, &[0, 2, 4]));
        assert_eq!(product(&g, &pm, &g.identity_set()), pm);
        assert_eq!(product(&g, &g.empty_set(), &pm), g.empty_set());
    }

    #[test]
    fn powers() {
        let g = z(6);
        assert_eq!(power(&g, &set(&g, &[1]), Fin(3)), set(&g, &[3]));
        assert_eq!(power(&g, &set(&g, &[1, 5]), Fin(0)), g.identity_set());
        assert_eq!(power(&g, &g.empty_set(), Fin(0)), g.identity_set());
        assert_eq!(power(&g, &g.empty_set(), Fin(2)), g.empty_set());
        assert_eq!(power(&g, &g.empty_set(), Inf), g.identity_set());
        assert_eq!(power_leq(&g, &set(&g, &[1, 5]), Fin(2)), set(&g, &[0, 1, 2, 4, 5]));
        assert_eq!(power(&g, &set(&g, &[2]), Inf), set(&g, &[0, 2, 4]));
    }

    #[test]
    fn inverses() {
        let g = z(6);
        assert_eq!(inverse(&g, &set(&g, &[1, 2])), set(&g, &[4, 5]));
        let s = set(&g, &[1, 3, 5]);
        assert_eq!(symmetrize(&g, &s), s);
        assert_eq!(inverse(&g, &g.empty_set()), g.empty_set());
    }

    #[test]
    fn conjugation() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let t = set(&s3, &[1]);
        assert_eq!(conj_closure(&s3, &t), set(&s3, &S3_TRANSPOSITIONS));
        assert_eq!(sym_conj_closure(&s3, &set(&s3, &[3])), set(&s3, &S3_THREE_CYCLES));
        let inv = set(&s3, &S3_TRANSPOSITIONS);
        assert_eq!(conj_closure(&s3, &inv), inv);
        assert_eq!(conjugate(&s3, &t, &s3.identity_set()), t);
        for mask in 0..64 {
            let s = Subset::from_mask(6, mask);
            assert_eq!(
                sym_conj_closure(&s3, &s),
                symmetrize(&s3, &conj_closure(&s3, &s))
            );
            if !s.contains(0) {
                assert!(!sym_conj_closure(&s3, &s).contains(0));
            }
        }
    }

    #[test]
    fn generation() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert!(generated(&s3, &set(&s3, &[1]), GenerationMode::Normal).is_full());
        assert_eq!(generated(&s3, &set(&s3, &[1]), GenerationMode::Subgroup), set(&s3, &[0, 1]));
        for mode in [GenerationMode::Submonoid, GenerationMode::Subgroup, GenerationMode::Normal] {
            assert_eq!(generated(&s3, &s3.empty_set(), mode), s3.identity_set());
        }
        let g = z(6);
        assert_eq!(generated(&g, &set(&g, &[2]), GenerationMode::Submonoid), set(&g, &[0, 2, 4]));
    }

    #[test]
    fn conditions() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let s = set(&s3, &[0, 1, 2, 5]);
        assert!(classify(&s3, &s, ConditionP::Nfg));
        assert!(!classify(&s3, &set(&s3, &[0, 3, 4]), ConditionP::Nfg));
        assert!(!classify(&s3, &set(&s3, &[0, 3, 4]), ConditionP::Ng));
        assert!(!classify(&s3, &s3.identity_set(), ConditionP::G));
        assert!(classify(&s3, &s3.nonidentity_set(), ConditionP::S));
        for mask in 0..64 {
            let s = Subset::from_mask(6, mask);
            assert!(classify(&s3, &s, ConditionP::F));
            assert_eq!(classify(&s3, &s, ConditionP::Fc), classify(&s3, &s, ConditionP::C));
        }
        assert_eq!("nfg".parse::<ConditionP>().unwrap(), ConditionP::Nfg);
        assert!("x".parse::<ConditionP>().is_err());
    }

    #[test]
    fn star_classes() {
        let g = z(6);
        let e = star_class(&g, &g.identity_set());
        assert!(e.contains_identity && !e.starred);
        let one = star_class(&g, &set(&g, &[1]));
        assert!(!one.contains_identity && one.starred);
        assert_eq!(one.canonical, set(&g, &[0, 1]));
        assert!(!star_class(&g, &g.empty_set()).starred);
        assert_eq!(double_prime_star_family(&g).len(), 31);
        assert_eq!(prime_star_family(&g).len(), 31);
    }

    #[test]
    fn literals() {
        assert_eq!(parse_subset("[0, 1,5]", 6).unwrap().to_vec(), vec![0, 1, 5]);
        assert!(parse_subset("[]", 6).unwrap().is_empty());
        assert!(matches!(parse_subset("[6]", 6), Err(Error::OutOfRange { element: 6, size: 6 })));
        assert!(parse_subset("0,1", 6).is_err());
        assert!(parse_subset("[0,,1]", 6).is_err());
    }
}
