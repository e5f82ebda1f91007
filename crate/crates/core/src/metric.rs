//! Word lengths, word metrics, Hausdorff extensions and balls, the power-set
//! metrics ν_H / ρ / ρ̂, axiom checking, and the function-space metrics μ / λ.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::bitset::Subset;
use crate::error::{Error, Result};
use crate::extnat::{ExtNat, ExtRatio, Fin, Inf};
use crate::group::FiniteGroup;
use crate::report::{Report, Sample};
use crate::subsets::{self, Family};

/// `ν_S(x)` for every x: breadth-first distances from e along `x → xs`.
pub fn word_lengths(g: &FiniteGroup, s: &Subset) -> Vec<ExtNat> {
    subsets::check_subset(g, s).expect("subset of the group");
    multi_source_distances(g, s, &g.identity_set())
}

/// Distances `min { n | x ∈ A S^{≤n} }` for every x.
fn multi_source_distances(g: &FiniteGroup, s: &Subset, a: &Subset) -> Vec<ExtNat> {
    let mut dist = vec![Inf; g.order()];
    let mut queue = VecDeque::new();
    for x in a {
        dist[x] = Fin(0);
        queue.push_back(x);
    }
    let gens = s.to_vec();
    while let Some(x) = queue.pop_front() {
        let next = dist[x] + Fin(1);
        for &t in &gens {
            let y = g.mul(x, t);
            if dist[y].is_inf() {
                dist[y] = next;
                queue.push_back(y);
            }
        }
    }
    dist
}

pub fn word_length(g: &FiniteGroup, s: &Subset, x: usize) -> ExtNat {
    word_lengths(g, s)[x]
}

/// `d_S(x, y) = ν_S(x⁻¹y)`.
pub fn word_metric(g: &FiniteGroup, s: &Subset, x: usize, y: usize) -> ExtNat {
    word_length(g, s, g.mul(g.inv(x), y))
}

pub fn word_metric_table(g: &FiniteGroup, s: &Subset) -> MetricTable {
    let nu = word_lengths(g, s);
    let n = g.order();
    let values = (0..n * n).map(|ij| nu[g.mul(g.inv(ij / n), ij % n)]).collect();
    MetricTable::new(n, values, Flavor::Additive)
}

/// `B(A, r) = A S^{≤r}`.
pub fn ball(g: &FiniteGroup, s: &Subset, a: &Subset, r: u64) -> Subset {
    subsets::product(g, a, &subsets::power_leq(g, s, Fin(r)))
}

/// `B_H(A, r) = {x | (d_S)_H(A, {x}) ≤ r}`.
pub fn hausdorff_ball(g: &FiniteGroup, s: &Subset, a: &Subset, r: u64) -> Subset {
    let dist = multi_source_distances(g, s, a);
    let mut out = g.empty_set();
    for (x, d) in dist.into_iter().enumerate() {
        if d <= Fin(r) {
            out.insert(x);
        }
    }
    out
}

/// `(d_S)_H(A, B) = min { n | B ⊂ A S^{≤n} }`, with ∞ when no n works.
pub fn hausdorff_metric(g: &FiniteGroup, s: &Subset, a: &Subset, b: &Subset) -> ExtNat {
    subsets::check_subset(g, a).expect("subset of the group");
    subsets::check_subset(g, b).expect("subset of the group");
    let dist = multi_source_distances(g, s, a);
    ExtNat::sup(b.iter().map(|x| dist[x]))
}

/// `(ν_S)_H(A) = sup ν_S(A)`, with `sup ∅ = 0`.
pub fn nu_sup(g: &FiniteGroup, s: &Subset, a: &Subset) -> ExtNat {
    sup_over(&word_lengths(g, s), a)
}

/// `sup` of a precomputed length table over a subset.
#[inline]
pub fn sup_over(lengths: &[ExtNat], a: &Subset) -> ExtNat {
    let mut m = Fin(0);
    for x in a {
        m = m.max(lengths[x]);
        if m.is_inf() {
            break;
        }
    }
    m
}

/// `ν_H(S, T) = (ν_S)_H(T)`.
pub fn nu_h(g: &FiniteGroup, s: &Subset, t: &Subset) -> ExtNat {
    nu_sup(g, s, t)
}

/// `ν̂_H(S, T) = max { ν_H(S, T), ν_H(T, S) }`.
pub fn nu_h_hat(g: &FiniteGroup, s: &Subset, t: &Subset) -> ExtNat {
    nu_h(g, s, t).max(nu_h(g, t, s))
}

/// `ρ = log ν_H`, for display.
pub fn rho(g: &FiniteGroup, s: &Subset, t: &Subset) -> f64 {
    nu_h(g, s, t).ln()
}

/// `ρ̂ = log ν̂_H`, for display.
pub fn rho_hat(g: &FiniteGroup, s: &Subset, t: &Subset) -> f64 {
    nu_h_hat(g, s, t).ln()
}

/// Word-length tables for a family of subsets, so that `ν_H` between members
/// is a single scan.
pub struct NormFamily<'a> {
    pub sets: &'a [Subset],
    pub lengths: Vec<Vec<ExtNat>>,
}

impl<'a> NormFamily<'a> {
    pub fn new(g: &FiniteGroup, sets: &'a [Subset]) -> NormFamily<'a> {
        use rayon::prelude::*;
        let lengths = sets.par_iter().map(|s| word_lengths(g, s)).collect();
        NormFamily { sets, lengths }
    }

    /// `ν_H(sets[i], sets[j])`.
    #[inline]
    pub fn nu_h(&self, i: usize, j: usize) -> ExtNat {
        sup_over(&self.lengths[i], &self.sets[j])
    }

    #[inline]
    pub fn nu_h_hat(&self, i: usize, j: usize) -> ExtNat {
        self.nu_h(i, j).max(self.nu_h(j, i))
    }

    /// The `ν_H` table of the family.
    pub fn table(&self) -> MetricTable {
        let n = self.sets.len();
        let values = (0..n * n).map(|ij| self.nu_h(ij / n, ij % n)).collect();
        MetricTable::new(n, values, Flavor::Multiplicative)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Additive,
    Multiplicative,
}

/// A square table of extended naturals on a finite carrier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricTable {
    pub size: usize,
    pub flavor: Flavor,
    values: Vec<ExtNat>,
}

impl MetricTable {
    pub fn new(size: usize, values: Vec<ExtNat>, flavor: Flavor) -> MetricTable {
        assert_eq!(values.len(), size * size, "table is not {size}x{size}");
        MetricTable { size, flavor, values }
    }

    pub fn from_rows(rows: Vec<Vec<ExtNat>>, flavor: Flavor) -> Result<MetricTable> {
        let size = rows.len();
        if let Some(i) = rows.iter().position(|r| r.len() != size) {
            return Err(Error::Spec(format!("row {i} has the wrong length")));
        }
        Ok(MetricTable::new(size, rows.concat(), flavor))
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> ExtNat {
        self.values[x * self.size + y]
    }

    pub fn rows(&self) -> Vec<Vec<ExtNat>> {
        self.values.chunks(self.size.max(1)).map(<[_]>::to_vec).collect()
    }

    fn unit(&self) -> ExtNat {
        match self.flavor {
            Flavor::Additive => Fin(0),
            Flavor::Multiplicative => Fin(1),
        }
    }

    fn combine(&self, a: ExtNat, b: ExtNat) -> ExtNat {
        match self.flavor {
            Flavor::Additive => a + b,
            Flavor::Multiplicative => a * b,
        }
    }

    /// Rows as CSV, one line per row, with ∞ written as `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.values.chunks(self.size.max(1)).take(self.size) {
            let line: Vec<String> = row.iter().map(ExtNat::to_string).collect();
            writeln!(out, "{}", line.join(",")).unwrap();
        }
        out
    }
}

/// `d̂(x, y) = max { d(x, y), d(y, x) }`.
pub fn symmetrize_metric(t: &MetricTable) -> MetricTable {
    let n = t.size;
    let values = (0..n * n)
        .map(|ij| t.get(ij / n, ij % n).max(t.get(ij % n, ij / n)))
        .collect();
    MetricTable::new(n, values, t.flavor)
}

/// Which metric axioms hold, each with the first counterexample found.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// `d(x,x)` is the unit.
    pub identity: Option<usize>,
    /// `d(x,y) = d(y,x) = unit` only for `x = y`.
    pub nondegenerate: Option<(usize, usize)>,
    pub symmetric: Option<(usize, usize)>,
    pub triangle: Option<(usize, usize, usize)>,
    /// Multiplicative tables must take values at least 1.
    pub codomain: Option<(usize, usize)>,
}

impl AxiomReport {
    pub fn is_asymmetric_metric(&self) -> bool {
        self.codomain.is_none() && self.identity.is_none() && self.triangle.is_none()
    }

    pub fn is_pseudo_metric(&self) -> bool {
        self.is_asymmetric_metric() && self.symmetric.is_none()
    }

    pub fn is_metric(&self) -> bool {
        self.codomain.is_none()
            && self.nondegenerate.is_none()
            && self.symmetric.is_none()
            && self.triangle.is_none()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate.is_none()
    }

    /// The strongest applicable class name.
    pub fn classification(&self) -> &'static str {
        if self.is_metric() {
            "metric"
        } else if self.is_pseudo_metric() {
            "pseudo metric"
        } else if self.is_asymmetric_metric() && self.is_nondegenerate() {
            "nondegenerate asymmetric metric"
        } else if self.is_asymmetric_metric() {
            "asymmetric metric"
        } else {
            "not a metric"
        }
    }
}

pub fn check_metric_axioms(t: &MetricTable) -> AxiomReport {
    let n = t.size;
    let unit = t.unit();
    let mut r = AxiomReport::default();
    for x in 0..n {
        if r.identity.is_none() && t.get(x, x) != unit {
            r.identity = Some(x);
        }
        for y in 0..n {
            let (a, b) = (t.get(x, y), t.get(y, x));
            if r.codomain.is_none() && t.flavor == Flavor::Multiplicative && a < Fin(1) {
                r.codomain = Some((x, y));
            }
            if r.symmetric.is_none() && a != b {
                r.symmetric = Some((x, y));
            }
            if r.nondegenerate.is_none() && ((a == unit && b == unit) != (x == y)) {
                r.nondegenerate = Some((x, y));
            }
        }
    }
    'outer: for x in 0..n {
        for y in 0..n {
            let xy = t.get(x, y);
            for z in 0..n {
                if t.get(x, z) > t.combine(xy, t.get(y, z)) {
                    r.triangle = Some((x, y, z));
                    break 'outer;
                }
            }
        }
    }
    r
}

/// A function on a finite indexed domain with values in `Z≥0 ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricFunction {
    pub values: Vec<ExtNat>,
}

impl MetricFunction {
    pub fn new(values: Vec<ExtNat>) -> MetricFunction {
        MetricFunction { values }
    }

    /// The restriction to the listed domain points.
    pub fn restrict(values: &[ExtNat], domain: impl IntoIterator<Item = usize>) -> MetricFunction {
        MetricFunction::new(domain.into_iter().map(|x| values[x]).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn same_domain(f: &MetricFunction, g: &MetricFunction) -> Result<()> {
    if f.len() == g.len() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "functions on domains of size {} and {}",
            f.len(),
            g.len()
        )))
    }
}

/// `μ(f, f′) = inf { r ≥ 0 | f′ ≤ f + r }`.
pub fn mu(f: &MetricFunction, f2: &MetricFunction) -> Result<ExtNat> {
    same_domain(f, f2)?;
    Ok(ExtNat::sup(f.values.iter().zip(&f2.values).map(|(&a, &b)| match (a, b) {
        (_, Fin(b)) => Fin(b).saturating_sub(a),
        (Fin(_), Inf) => Inf,
        (Inf, Inf) => Fin(0),
    })))
}

/// `λ(g, g′) = inf { s ≥ 1 | g′ ≤ s·g }`, for functions with values at least 1.
pub fn lambda(g: &MetricFunction, g2: &MetricFunction) -> Result<ExtRatio> {
    same_domain(g, g2)?;
    let mut best = ExtRatio::ONE;
    for (i, (&a, &b)) in g.values.iter().zip(&g2.values).enumerate() {
        let r = ExtRatio::ratio(b, a).ok_or_else(|| {
            Error::Domain(format!("λ needs values at least 1, found 0 at index {i}"))
        })?;
        best = best.max(r);
    }
    Ok(best)
}

/// `μ̂(f, f′) = max { μ(f, f′), μ(f′, f) }`.
pub fn mu_hat(f: &MetricFunction, f2: &MetricFunction) -> Result<ExtNat> {
    Ok(mu(f, f2)?.max(mu(f2, f)?))
}

pub fn lambda_hat(g: &MetricFunction, g2: &MetricFunction) -> Result<ExtRatio> {
    Ok(lambda(g, g2)?.max(lambda(g2, g)?))
}

/// Checks `ν_H(S, T) = λ(ν_T, ν_S)` and `ν̂_H(S, T) = λ̂(ν_S, ν_T)` on `G^×`
/// for pairs of `𝒮′(G)^*`, the exact forms of `ρ = μ(log ν_T, log ν_S)` and
/// `ρ̂ = μ̂(log ν_S, log ν_T)`.
///
/// Exhaustive sampling enumerates all of `𝒮′(G)^*` and needs `|G| ≤ 20`;
/// random sampling draws pairs directly.
pub fn zeta_check(g: &FiniteGroup, sample: Sample) -> Report {
    use rayon::prelude::*;
    let mut report = Report::new(format!("zeta anti-isometry on {}", g.name()));
    let (family, pairs) = match Family::PrimeStar.pairs(g, sample) {
        Ok(fp) => fp,
        Err(e) => {
            report.skip("enumeration", &e.to_string());
            return report;
        }
    };
    let norms = NormFamily::new(g, &family);
    let domain: Vec<usize> = g.nonidentity_set().to_vec();
    let restricted: Vec<MetricFunction> = norms
        .lengths
        .iter()
        .map(|l| MetricFunction::restrict(l, domain.iter().copied()))
        .collect();
    let partial: Vec<Report> = pairs
        .par_chunks(256)
        .map(|chunk| {
            let mut r = Report::new("");
            for &(i, j) in chunk {
                let nu = ExtRatio::from(norms.nu_h(i, j));
                let lam = lambda(&restricted[j], &restricted[i]).expect("lengths on G^x are >= 1");
                r.check("nu_H(S,T) = lambda(nu_T, nu_S)", nu == lam, || {
                    format!("S={} T={} nu_H={nu} lambda={lam}", family[i], family[j])
                });
                let hat = ExtRatio::from(norms.nu_h_hat(i, j));
                let lam_hat = lambda_hat(&restricted[i], &restricted[j]).expect("same domain");
                r.check("nu_H_hat(S,T) = lambda_hat(nu_S, nu_T)", hat == lam_hat, || {
                    format!("S={} T={} hat={hat} lambda_hat={lam_hat}", family[i], family[j])
                });
            }
            r
        })
        .collect();
    for r in partial {
        report.merge(r);
    }
    report
}

/// The multiplicative asymmetric metric axioms of `ν_H` on `𝒮″(G)^*`:
/// values at least 1, `ν_H(S, S) = 1`, the multiplicative triangle
/// inequality, and `ν_H(S, T) = ν_H(T, S) = 1` only for `S = T`.
///
/// Exhaustive mode checks every triple; random mode checks each sampled pair
/// with the next sampled member as the third set.
pub fn nu_h_axioms(g: &FiniteGroup, sample: Sample) -> Result<Report> {
    use rayon::prelude::*;
    let (family, pairs) = Family::DoublePrimeStar.pairs(g, sample)?;
    let norms = NormFamily::new(g, &family);
    let n = family.len();
    let mut report = Report::new(format!("nu_H axioms on {}", g.name()));
    if n == 0 {
        report.skip("nu_H(S,S) = 1", "the family is empty");
        return Ok(report);
    }
    let thirds: Vec<Vec<usize>> = match sample {
        Sample::Exhaustive => vec![(0..n).collect()],
        Sample::Random { .. } => Vec::new(),
    };
    let partial: Vec<Report> = pairs
        .par_chunks(256)
        .map(|chunk| {
            let mut r = Report::new("");
            for &(i, j) in chunk {
                let (a, b) = (norms.nu_h(i, j), norms.nu_h(j, i));
                r.check("nu_H(S,T) >= 1", a >= Fin(1), || format!("S={} T={}", family[i], family[j]));
                r.check("nu_H(S,T) = nu_H(T,S) = 1 iff S = T", (a == Fin(1) && b == Fin(1)) == (family[i] == family[j]), || {
                    format!("S={} T={}", family[i], family[j])
                });
                let ks: &[usize] = match thirds.first() {
                    Some(all) => all,
                    None => &[(j + 1) % n],
                };
                for &k in ks {
                    let lhs = norms.nu_h(i, k);
                    let rhs = a * norms.nu_h(j, k);
                    r.check("nu_H(S,U) <= nu_H(S,T) nu_H(T,U)", lhs <= rhs, || {
                        format!("S={} T={} U={}", family[i], family[j], family[k])
                    });
                }
            }
            r
        })
        .collect();
    for r in partial {
        report.merge(r);
    }
    let diagonal: Vec<usize> = match sample {
        Sample::Exhaustive => (0..n).collect(),
        Sample::Random { .. } => pairs.iter().map(|&(i, _)| i).collect(),
    };
    for i in diagonal {
        report.check("nu_H(S,S) = 1", norms.nu_h(i, i) == Fin(1), || format!("S={}", family[i]));
    }
    Ok(report)
}

/// `B_H(A, r) = B(A, r)` for `r ∈ 0..=|G|`, over all `(S, A)` or `count`
/// sampled pairs.
pub fn discrete_ball_check(g: &FiniteGroup, sample: Sample) -> Result<Report> {
    use rayon::prelude::*;
    let n = g.order();
    let sets: Vec<(Subset, Subset)> = match sample {
        Sample::Exhaustive => {
            if n > 10 {
                return Err(Error::Cap(format!("exhaustive ball checks need order at most 10, got {n}")));
            }
            let all: Vec<Subset> = crate::bitset::all_subsets(n).collect();
            all.iter().flat_map(|s| all.iter().map(move |a| (s.clone(), a.clone()))).collect()
        }
        Sample::Random { count, seed } => {
            let mut rng = Sample::rng(seed);
            (0..count)
                .map(|_| (crate::report::random_subset(&mut rng, n), crate::report::random_subset(&mut rng, n)))
                .collect()
        }
    };
    let partial: Vec<Report> = sets
        .par_chunks(512)
        .map(|chunk| {
            let mut r = Report::new("");
            for (s, a) in chunk {
                let leq: Vec<Subset> = (0..=n as u64).map(|k| subsets::power_leq(g, s, Fin(k))).collect();
                for (k, p) in leq.iter().enumerate() {
                    let via_hausdorff = hausdorff_ball(g, s, a, k as u64);
                    r.check("B_H(A, r) = B(A, r)", via_hausdorff == subsets::product(g, a, p), || {
                        format!("S={s} A={a} r={k}")
                    });
                }
            }
            r
        })
        .collect();
    let mut report = Report::new(format!("discrete balls on {}", g.name()));
    for r in partial {
        report.merge(r);
    }
    Ok(report)
}
