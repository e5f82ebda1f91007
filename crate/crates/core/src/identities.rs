//! The subset-operation identities (products, conjugates, inverses, powers,
//! symmetric and conjugation-invariant closures, generated submonoids) as a
//! checkable suite.
//!
//! Sets are handled as `u64` masks here, so the suite needs `|G| ≤ 64`. The
//! exhaustive mode runs every identity over all sets, pairs and triples of
//! subsets and is limited to `|G| ≤ 8`.

use rayon::prelude::*;

use crate::bitset::Subset;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::report::{random_subset, Report, Sample};

/// Largest order for exhaustive triples.
pub const EXHAUSTIVE_ORDER: usize = 8;

/// Largest finite power exercised.
const MAX_POWER: usize = 3;

struct Alg<'a> {
    g: &'a FiniteGroup,
    n: usize,
    e: u64,
    full: u64,
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

impl<'a> Alg<'a> {
    fn new(g: &'a FiniteGroup) -> Alg<'a> {
        let n = g.order();
        Alg {
            g,
            n,
            e: 1 << g.identity(),
            full: if n == 64 { u64::MAX } else { (1 << n) - 1 },
        }
    }

    fn mul(&self, s: u64, t: u64) -> u64 {
        let mut out = 0;
        for a in bits(s) {
            for b in bits(t) {
                out |= 1 << self.g.mul(a, b);
            }
        }
        out
    }

    fn inv(&self, s: u64) -> u64 {
        bits(s).fold(0, |m, a| m | 1 << self.g.inv(a))
    }

    /// `S^T = {t⁻¹ s t}`.
    fn conj(&self, s: u64, t: u64) -> u64 {
        let mut out = 0;
        for a in bits(s) {
            for b in bits(t) {
                out |= 1 << self.g.conj(a, b);
            }
        }
        out
    }

    /// `ᵀS = {t s t⁻¹}`.
    fn left_conj(&self, s: u64, t: u64) -> u64 {
        let mut out = 0;
        for a in bits(s) {
            for b in bits(t) {
                out |= 1 << self.g.mul(self.g.mul(b, a), self.g.inv(b));
            }
        }
        out
    }

    fn conj_by(&self, s: u64, a: usize) -> u64 {
        bits(s).fold(0, |m, x| m | 1 << self.g.conj(x, a))
    }

    fn pow(&self, s: u64, k: usize) -> u64 {
        (0..k).fold(self.e, |p, _| self.mul(p, s))
    }

    fn pow_leq(&self, s: u64, k: usize) -> u64 {
        let mut acc = self.e;
        let mut p = self.e;
        for _ in 0..k {
            p = self.mul(p, s);
            acc |= p;
        }
        acc
    }

    fn pow_inf(&self, s: u64) -> u64 {
        let mut p = self.e;
        loop {
            let next = p | self.mul(p, s);
            if next == p {
                return p;
            }
            p = next;
        }
    }

    fn is_symmetric(&self, s: u64) -> bool {
        self.inv(s) == s
    }

    fn is_conj_invariant(&self, s: u64) -> bool {
        self.conj(s, self.full) == s
    }

    fn sym(&self, s: u64) -> u64 {
        s | self.inv(s)
    }

    /// The least subgroup containing `S`, by closure under products and inverses.
    fn subgroup(&self, s: u64) -> u64 {
        self.pow_inf(self.sym(s))
    }

    fn normal_closure(&self, s: u64) -> u64 {
        let mut h = self.subgroup(s);
        loop {
            let next = self.subgroup(self.conj(h, self.full));
            if next == h {
                return h;
            }
            h = next;
        }
    }

    fn is_normal_subgroup(&self, t: u64) -> bool {
        t & self.e != 0 && self.mul(t, t) == t && self.inv(t) == t && self.is_conj_invariant(t)
    }

    fn show(&self, m: u64) -> String {
        Subset::from_mask(self.n, m).to_string()
    }
}

fn single(a: &Alg, s: u64, r: &mut Report) {
    let g = a.g;
    let w = || a.show(s);
    r.check("eS = S = Se", a.mul(a.e, s) == s && a.mul(s, a.e) == s, w);
    let p: Vec<u64> = (0..=MAX_POWER * MAX_POWER).map(|k| a.pow(s, k)).collect();
    let pl: Vec<u64> = (0..=MAX_POWER * MAX_POWER).map(|k| a.pow_leq(s, k)).collect();
    let (inf, sinv) = (a.pow_inf(s), a.inv(s));
    for k in 0..=MAX_POWER {
        for l in 0..=MAX_POWER {
            r.check("S^k S^l = S^{k+l}", a.mul(p[k], p[l]) == p[k + l], || format!("S = {}, k = {k}, l = {l}", w()));
            r.check("(S^k)^l = S^{kl}", a.pow(p[k], l) == p[k * l], || format!("S = {}, k = {k}, l = {l}", w()));
            r.check("S^{<=m} S^{<=n} = S^{<=m+n}", a.mul(pl[k], pl[l]) == pl[k + l], || format!("S = {}, m = {k}, n = {l}", w()));
            r.check("(S^{<=m})^{<=n} in S^{<=mn}", a.pow_leq(pl[k], l) & !pl[k * l] == 0, || format!("S = {}, m = {k}, n = {l}", w()));
        }
        r.check("(S^n)^-1 = (S^-1)^n", a.inv(p[k]) == a.pow(sinv, k), || format!("S = {}, n = {k}", w()));
        r.check("(S^{<=n})^-1 = (S^-1)^{<=n}", a.inv(pl[k]) == a.pow_leq(sinv, k), || format!("S = {}, n = {k}", w()));
        if s & a.e != 0 {
            r.check("e in S gives S^n = S^{<=n}", p[k] == pl[k], || format!("S = {}, n = {k}", w()));
        }
        let se = s | a.e;
        r.check("(S u e)^n = (S u e)^{<=n} = S^{<=n}", a.pow(se, k) == pl[k] && a.pow_leq(se, k) == pl[k], || format!("S = {}, n = {k}", w()));
    }
    r.check("S^inf S^inf = S^inf", a.mul(inf, inf) == inf, w);
    r.check("(S^inf)^-1 = (S^-1)^inf", a.inv(inf) == a.pow_inf(sinv), w);
    r.check("S^inf = union of S^{<=n}", inf == a.pow_leq(s, a.n), w);
    r.check("S^inf is the submonoid generated by S", inf & a.e != 0 && a.mul(inf, inf) == inf && s & !inf == 0, w);

    for x in [1 % a.n, a.n / 2, a.n - 1] {
        for y in [a.n - 1, 1 % a.n] {
            let sx = a.conj_by(s, x);
            r.check("(S^a)^b = S^{ab}", a.conj_by(sx, y) == a.conj_by(s, g.mul(x, y)), || format!("S = {}, a = {x}, b = {y}", w()));
        }
        let sx = a.conj_by(s, x);
        r.check("(S^-1)^a = (S^a)^-1", a.conj_by(sinv, x) == a.inv(sx), || format!("S = {}, a = {x}", w()));
        for k in 0..=MAX_POWER {
            r.check("(S^n)^a = (S^a)^n", a.conj_by(p[k], x) == a.pow(sx, k), || format!("S = {}, a = {x}, n = {k}", w()));
            r.check("(S^{<=n})^a = (S^a)^{<=n}", a.conj_by(pl[k], x) == a.pow_leq(sx, k), || format!("S = {}, a = {x}, n = {k}", w()));
        }
        r.check("(S^inf)^a = (S^a)^inf", a.conj_by(inf, x) == a.pow_inf(sx), || format!("S = {}, a = {x}", w()));
    }

    let cs = a.conj(s, a.full);
    let c_s = a.conj(a.sym(s), a.full);
    r.check("S^+- is symmetric", a.is_symmetric(a.sym(s)), w);
    r.check("C(S) is conjugation-invariant", a.is_conj_invariant(cs), w);
    r.check("C_S is symmetric and conjugation-invariant", a.is_symmetric(c_s) && a.is_conj_invariant(c_s), w);
    r.check("(S^+-)^G = (S^G)^+-", c_s == a.sym(cs), w);
    r.check("C_{S u e} = C_S u e", a.conj(a.sym(s | a.e), a.full) == c_s | a.e, w);
    if s & a.e == 0 {
        r.check("S in G^x gives C_S in G^x", c_s & a.e == 0, w);
    }
    let sg = a.subgroup(s);
    r.check("<S> = <S^+-> = (S^+-)^inf", sg == a.subgroup(a.sym(s)) && sg == a.pow_inf(a.sym(s)), w);
    r.check("<<S>> = <C(S)> = (C_S)^inf", a.normal_closure(s) == a.subgroup(cs) && a.subgroup(cs) == a.pow_inf(c_s), w);
}

fn pair(a: &Alg, s: u64, t: u64, r: &mut Report) {
    let w = || format!("S = {}, T = {}", a.show(s), a.show(t));
    let (st, ts, sinv, tinv) = (a.mul(s, t), a.mul(t, s), a.inv(s), a.inv(t));

    // monotonicity against the sets with their lowest element removed
    let (s1, t1) = (s & s.wrapping_sub(1), t & t.wrapping_sub(1));
    r.check("S1 in S2, T1 in T2 gives S1T1 in S2T2", a.mul(s1, t1) & !st == 0, w);
    r.check("S1 in S2, T1 in T2 gives S1^T1 in S2^T2", a.conj(s1, t1) & !a.conj(s, t) == 0, w);

    r.check("(S u T)^-1 = S^-1 u T^-1", a.inv(s | t) == sinv | tinv, w);
    r.check("(ST)^-1 = T^-1 S^-1", a.inv(st) == a.mul(tinv, sinv), w);
    r.check("(S^T)^-1 = (S^-1)^T", a.inv(a.conj(s, t)) == a.conj(sinv, t), w);

    let u = s | t;
    for n in 0..=MAX_POWER {
        let mut words = 0;
        for pattern in 0..(1u32 << n) {
            let w = (0..n).fold(a.e, |acc, k| a.mul(acc, if pattern >> k & 1 == 1 { t } else { s }));
            words |= w;
        }
        let un = a.pow(u, n);
        r.check("(S u T)^n = union of words S^I T^J", un == words, || format!("{}, n = {n}", w()));
        if st == ts {
            let mixed = (0..=n).fold(0, |acc, k| acc | a.mul(a.pow(s, k), a.pow(t, n - k)));
            r.check("ST = TS gives (S u T)^n = union S^k T^l", un == mixed, || format!("{}, n = {n}", w()));
            r.check("ST = TS gives (ST)^n = S^n T^n", a.pow(st, n) == a.mul(a.pow(s, n), a.pow(t, n)), || format!("{}, n = {n}", w()));
        }
        if a.is_normal_subgroup(t) {
            let rhs = a.pow(s, n) | if n == 0 { 0 } else { a.mul(a.pow_leq(s, n - 1), t) };
            r.check("T normal gives (S u T)^n = S^n u S^{<=n-1} T", un == rhs, || format!("{}, n = {n}", w()));
        }
    }

    // unions over a split of each set
    let half = |m: u64| {
        let lo = m & a.full >> (a.n / 2);
        (lo, m & !lo)
    };
    let ((s1, s2), (t1, t2)) = (half(s), half(t));
    let prods = [a.mul(s1, t1), a.mul(s1, t2), a.mul(s2, t1), a.mul(s2, t2)];
    let conjs = [a.conj(s1, t1), a.conj(s1, t2), a.conj(s2, t1), a.conj(s2, t2)];
    r.check("products distribute over unions", st == prods.iter().fold(0, |x, y| x | y), w);
    r.check("conjugates distribute over unions", a.conj(s, t) == conjs.iter().fold(0, |x, y| x | y), w);
    r.check("inverses distribute over unions", sinv == a.inv(s1) | a.inv(s2), w);
    r.check("(S n T)^-1 = S^-1 n T^-1", a.inv(s & t) == sinv & tinv, w);

    for x in [1 % a.n, a.n - 1] {
        r.check("(S u T)^a = S^a u T^a", a.conj_by(u, x) == a.conj_by(s, x) | a.conj_by(t, x), || format!("{}, a = {x}", w()));
        r.check("(S n T)^a = S^a n T^a", a.conj_by(s & t, x) == a.conj_by(s, x) & a.conj_by(t, x), || format!("{}, a = {x}", w()));
        r.check("(ST)^a = S^a T^a", a.conj_by(st, x) == a.mul(a.conj_by(s, x), a.conj_by(t, x)), || format!("{}, a = {x}", w()));
    }
    for n in 0..=MAX_POWER {
        r.check("(S^{<=n})^T in (S^T)^{<=n}", a.conj(a.pow_leq(s, n), t) & !a.pow_leq(a.conj(s, t), n) == 0, || format!("{}, n = {n}", w()));
    }

    r.check("(S u T)^+- = S^+- u T^+-", a.sym(u) == a.sym(s) | a.sym(t), w);
    if a.is_symmetric(s) && a.is_symmetric(t) {
        r.check("S, T symmetric gives S^-1, S u T, S n T symmetric", a.is_symmetric(sinv) && a.is_symmetric(u) && a.is_symmetric(s & t), w);
        r.check("S, T symmetric gives (ST)^-1 = TS", a.inv(st) == ts, w);
    }

    let tl = a.left_conj(s, t);
    r.check("^T S = S^{T^-1}", tl == a.conj(s, tinv), w);
    r.check("ST in T S^T", st & !a.mul(t, a.conj(s, t)) == 0, w);
    r.check("TS in S^{T^-1} T", ts & !a.mul(a.conj(s, tinv), t) == 0, w);
    if a.is_conj_invariant(s) {
        if t != 0 {
            r.check("S conjugation-invariant gives ^T S = S^T = S", tl == s && a.conj(s, t) == s, w);
        }
        r.check("S conjugation-invariant gives ST = TS", st == ts, w);
    }
    if a.is_conj_invariant(s) && a.is_conj_invariant(t) {
        let ok = [sinv, u, s & t, st].iter().all(|&m| a.is_conj_invariant(m));
        r.check("S, T conjugation-invariant gives S^-1, S u T, S n T, ST invariant", ok, w);
        if a.is_symmetric(s) && a.is_symmetric(t) {
            let ok = [sinv, u, st].iter().all(|&m| a.is_conj_invariant(m) && a.is_symmetric(m));
            r.check("symmetric conjugation-invariant sets closed under inverse, union, product", ok, w);
        }
    }
    let c = |m: u64| a.conj(a.sym(m), a.full);
    r.check("C_{S u T} = C_S u C_T", c(u) == c(s) | c(t), w);
}

fn triple(a: &Alg, s: u64, t: u64, u: u64, r: &mut Report) {
    let w = || format!("S = {}, T = {}, U = {}", a.show(s), a.show(t), a.show(u));
    r.check("(ST)U = S(TU)", a.mul(a.mul(s, t), u) == a.mul(s, a.mul(t, u)), w);
    r.check("(S^T)^U = S^{TU}", a.conj(a.conj(s, t), u) == a.conj(s, a.mul(t, u)), w);
    r.check("(S n T)^U in S^U n T^U", a.conj(s & t, u) & !(a.conj(s, u) & a.conj(t, u)) == 0, w);
    let tu = a.mul(t, u);
    if (tu | a.mul(t, a.inv(u))) & !t == 0 {
        let st = a.conj(s, t);
        r.check("TU u TU^-1 in T gives S^T U = U S^T", a.mul(st, u) == a.mul(u, st), w);
    }
}

/// Runs every identity. Exhaustive mode covers all sets, pairs and triples
/// and needs `|G| ≤ 8`; random mode draws `count` triples and runs the single
/// and pair identities on their members too.
pub fn formula_suite(g: &FiniteGroup, sample: Sample) -> Result<Report> {
    let a = Alg::new(g);
    if a.n > 64 {
        return Err(Error::Cap(format!("the identity suite works on groups of order at most 64, got {}", a.n)));
    }
    let title = format!("subset identities on {}", g.name());
    match sample {
        Sample::Exhaustive => {
            if a.n > EXHAUSTIVE_ORDER {
                return Err(Error::Cap(format!("exhaustive identity checks need order at most {EXHAUSTIVE_ORDER}, got {}", a.n)));
            }
            let all = 1u64 << a.n;
            let reports: Vec<Report> = (0..all)
                .into_par_iter()
                .map(|s| {
                    let mut r = Report::new("");
                    single(&a, s, &mut r);
                    for t in 0..all {
                        pair(&a, s, t, &mut r);
                        for u in 0..all {
                            triple(&a, s, t, u, &mut r);
                        }
                    }
                    r
                })
                .collect();
            let mut report = Report::new(title);
            for r in reports {
                report.merge(r);
            }
            Ok(report)
        }
        Sample::Random { count, seed } => {
            let mut rng = Sample::rng(seed);
            let triples: Vec<[u64; 3]> = (0..count)
                .map(|_| [0; 3].map(|_| random_subset(&mut rng, a.n).mask()))
                .collect();
            let reports: Vec<Report> = triples
                .par_iter()
                .map(|&[s, t, u]| {
                    let mut r = Report::new("");
                    single(&a, s, &mut r);
                    pair(&a, s, t, &mut r);
                    pair(&a, t, u, &mut r);
                    triple(&a, s, t, u, &mut r);
                    r
                })
                .collect();
            let mut report = Report::new(title);
            for r in reports {
                report.merge(r);
            }
            Ok(report)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsets::{conjugate, generated, inverse, power, product, GenerationMode};
    use crate::extnat::Fin;

    #[test]
    fn mask_engine_matches_subset_ops() {
        for g in crate::catalog::catalog_up_to(6) {
            let a = Alg::new(&g);
            for s in (0..1u64 << g.order()).step_by(3) {
                let ss = Subset::from_mask(g.order(), s);
                for t in (0..1u64 << g.order()).step_by(5) {
                    let tt = Subset::from_mask(g.order(), t);
                    assert_eq!(a.mul(s, t), product(&g, &ss, &tt).mask());
                    assert_eq!(a.conj(s, t), conjugate(&g, &ss, &tt).mask());
                }
                assert_eq!(a.inv(s), inverse(&g, &ss).mask());
                assert_eq!(a.pow(s, 3), power(&g, &ss, Fin(3)).mask());
                assert_eq!(a.subgroup(s), generated(&g, &ss, GenerationMode::Subgroup).mask());
                assert_eq!(a.normal_closure(s), generated(&g, &ss, GenerationMode::Normal).mask());
                assert_eq!(a.pow_inf(s), generated(&g, &ss, GenerationMode::Submonoid).mask());
            }
        }
    }

    #[test]
    fn exhaustive_small_groups() {
        for g in crate::catalog::catalog_up_to(4) {
            let r = formula_suite(&g, Sample::Exhaustive).unwrap();
            assert!(r.is_ok(), "{r}");
        }
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let r = formula_suite(&s3, Sample::Exhaustive).unwrap();
        assert!(r.is_ok(), "{r}");
        assert!(r.get("T normal gives (S u T)^n = S^n u S^{<=n-1} T").unwrap().passed > 0);
        assert!(r.get("TU u TU^-1 in T gives S^T U = U S^T").unwrap().passed > 0);
    }

    #[test]
    fn sampled_larger_groups() {
        for name in ["S4", "D6", "Q8"] {
            let g = crate::catalog::by_name(name).unwrap();
            let r = formula_suite(&g, Sample::Random { count: 100, seed: 1 }).unwrap();
            assert!(r.is_ok(), "{r}");
        }
        assert!(formula_suite(&crate::catalog::by_name("S4").unwrap(), Sample::Exhaustive).is_err());
    }
}
