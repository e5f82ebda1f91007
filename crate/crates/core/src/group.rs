//! Finite groups given by multiplication tables, their standard constructions,
//! homomorphisms, quotients and sections.
//!
//! Elements are dense indices `0..order`. Every built-in constructor puts the
//! identity at index 0; raw tables may place it anywhere.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bitset::Subset;
use crate::error::{axiom, Error, Result};

/// Largest permutation group materialized by [`FiniteGroup::from_permutations`].
pub const PERMUTATION_GROUP_CAP: usize = 2048;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone)]
pub struct FiniteGroup {
    id: u64,
    name: String,
    order: usize,
    identity: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.identity == other.identity && self.mul == other.mul
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a row-major table, checking all group axioms.
    pub fn from_table(name: impl Into<String>, table: &[Vec<usize>]) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Spec("empty multiplication table".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Spec(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::Spec(format!("entry ({i},{j}) = {v} is out of range")));
                }
                mul.push(v as u32);
            }
        }
        Self::from_flat(name.into(), n, mul)
    }

    fn from_flat(name: String, n: usize, mul: Vec<u32>) -> Result<FiniteGroup> {
        let at = |i: usize, j: usize| mul[i * n + j] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| axiom("group", "identity", "no two-sided identity element".into()))?;
        let mut inv = vec![0u32; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| axiom("group", "inverse", format!("element {x} has no inverse")))?;
            inv[x] = y as u32;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(axiom(
                            "group",
                            "associativity",
                            format!("(a,b,c) = ({a},{b},{c})"),
                        ));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            name,
            order: n,
            identity,
            mul,
            inv,
        })
    }

    /// Builds a group from a product function known to satisfy the axioms.
    fn from_fn(name: String, n: usize, f: impl Fn(usize, usize) -> usize) -> FiniteGroup {
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mul.push(f(a, b) as u32);
            }
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as u32;
                }
            }
        }
        FiniteGroup {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            name,
            order: n,
            identity: 0,
            mul,
            inv,
        }
    }

    /// Z_n with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::Spec("cyclic group needs n >= 1".into()));
        }
        Ok(Self::from_fn(format!("Z{n}"), n, |a, b| (a + b) % n))
    }

    /// The dihedral group of order 2n. Index `k < n` is r^k, index `n + k` is r^k s.
    pub fn dihedral(n: usize) -> Result<FiniteGroup> {
        if n < 2 {
            return Err(Error::Spec("dihedral group needs n >= 2".into()));
        }
        Ok(Self::from_fn(format!("D{n}"), 2 * n, |x, y| {
            let (a, j) = (x % n, x / n);
            let (b, m) = (y % n, y / n);
            let rot = if j == 0 { (a + b) % n } else { (a + n - b) % n };
            ((j + m) % 2) * n + rot
        }))
    }

    /// S_n on points `0..n`, elements in lexicographic order of their images.
    /// The product `p·q` applies `p` first, so `x·σ = σ(x)` is a right action.
    pub fn symmetric(n: usize) -> Result<FiniteGroup> {
        if n == 0 || n > 5 {
            return Err(Error::Cap(format!("symmetric group needs 1 <= n <= 5, got {n}")));
        }
        let perms = permutations(n);
        Ok(Self::permutation_table(format!("S{n}"), &perms))
    }

    /// A_n as the even permutations of S_n, in lexicographic order.
    pub fn alternating(n: usize) -> Result<FiniteGroup> {
        if n == 0 || n > 5 {
            return Err(Error::Cap(format!("alternating group needs 1 <= n <= 5, got {n}")));
        }
        let perms: Vec<Vec<u32>> = permutations(n).into_iter().filter(|p| is_even(p)).collect();
        Ok(Self::permutation_table(format!("A{n}"), &perms))
    }

    fn permutation_table(name: String, perms: &[Vec<u32>]) -> FiniteGroup {
        let index: HashMap<&[u32], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        Self::from_fn(name, perms.len(), |a, b| {
            let c = compose(&perms[a], &perms[b]);
            index[c.as_slice()]
        })
    }

    /// The group generated by permutations of `0..degree`, in breadth-first
    /// order from the identity. Products apply the left factor first.
    pub fn from_permutations(
        name: impl Into<String>,
        degree: usize,
        generators: &[Vec<usize>],
    ) -> Result<(FiniteGroup, Vec<Vec<usize>>)> {
        let gens: Vec<Vec<u32>> = generators
            .iter()
            .map(|g| {
                let mut seen = vec![false; degree];
                if g.len() != degree {
                    return Err(Error::Spec(format!("generator {g:?} is not on {degree} points")));
                }
                for &x in g {
                    if x >= degree || std::mem::replace(&mut seen[x], true) {
                        return Err(Error::Spec(format!("{g:?} is not a permutation")));
                    }
                }
                Ok(g.iter().map(|&x| x as u32).collect())
            })
            .collect::<Result<_>>()?;
        let id: Vec<u32> = (0..degree as u32).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(id, 0)]);
        let mut head = 0;
        while head < elems.len() {
            for g in &gens {
                let next = compose(&elems[head], g);
                if !index.contains_key(&next) {
                    if elems.len() == PERMUTATION_GROUP_CAP {
                        return Err(Error::Cap(format!(
                            "permutation group exceeds {PERMUTATION_GROUP_CAP} elements"
                        )));
                    }
                    index.insert(next.clone(), elems.len());
                    elems.push(next);
                }
            }
            head += 1;
        }
        let group = Self::from_fn(name.into(), elems.len(), |a, b| {
            index[&compose(&elems[a], &elems[b])]
        });
        let perms = elems
            .into_iter()
            .map(|p| p.into_iter().map(|x| x as usize).collect())
            .collect();
        Ok((group, perms))
    }

    /// A × B with `(i, j)` at index `i·|B| + j`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let m = b.order;
        let name = format!("{}x{}", a.name, b.name);
        let mut g = Self::from_fn(name, a.order * m, |x, y| {
            a.mul(x / m, y / m) * m + b.mul(x % m, y % m)
        });
        g.identity = a.identity * m + b.identity;
        g.fix_inverses();
        g
    }

    /// H ⋉ K with `(h, k)` at index `h·|K| + k`, standing for the product `h·k`.
    ///
    /// `action[h][k]` is the conjugate `k^h = h⁻¹kh`; it must be an automorphism
    /// of K for each h and satisfy `action[h1·h2] = action[h2] ∘ action[h1]`.
    pub fn semidirect(h: &FiniteGroup, k: &FiniteGroup, action: &[Vec<usize>]) -> Result<FiniteGroup> {
        if action.len() != h.order {
            return Err(Error::Spec(format!(
                "action has {} rows, expected {}",
                action.len(),
                h.order
            )));
        }
        for (hi, row) in action.iter().enumerate() {
            if row.len() != k.order || row.iter().any(|&x| x >= k.order) {
                return Err(Error::Spec(format!("action row {hi} is not a map on K")));
            }
            let mut seen = vec![false; k.order];
            for &x in row {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(axiom("semidirect action", "bijective", format!("row {hi}")));
                }
            }
            for a in 0..k.order {
                for b in 0..k.order {
                    if row[k.mul(a, b)] != k.mul(row[a], row[b]) {
                        return Err(axiom(
                            "semidirect action",
                            "automorphism",
                            format!("h = {hi}, (a,b) = ({a},{b})"),
                        ));
                    }
                }
            }
        }
        for h1 in 0..h.order {
            for h2 in 0..h.order {
                let h12 = h.mul(h1, h2);
                if let Some(x) = (0..k.order).find(|&x| action[h12][x] != action[h2][action[h1][x]]) {
                    return Err(axiom(
                        "semidirect action",
                        "homomorphism",
                        format!("(h1,h2) = ({h1},{h2}) at k = {x}"),
                    ));
                }
            }
        }
        let m = k.order;
        let name = format!("{}:{}", h.name, k.name);
        let mut g = Self::from_fn(name, h.order * m, |x, y| {
            let (h1, k1) = (x / m, x % m);
            let (h2, k2) = (y / m, y % m);
            h.mul(h1, h2) * m + k.mul(action[h2][k1], k2)
        });
        g.identity = h.identity * m + k.identity;
        g.fix_inverses();
        Ok(g)
    }

    /// The metacyclic group ⟨a, b | a^m, b^n = a^s, b a b⁻¹ = a^r⟩ with
    /// `a^k b^j` at index `j·m + k`.
    pub fn metacyclic(name: impl Into<String>, m: usize, n: usize, r: usize, s: usize) -> Result<FiniteGroup> {
        if m == 0 || n == 0 {
            return Err(Error::Spec("metacyclic parameters must be positive".into()));
        }
        let mut rpow = vec![1usize; n];
        for j in 1..n {
            rpow[j] = rpow[j - 1] * r % m;
        }
        let mul = (0..m * n)
            .flat_map(|x| {
                let rpow = &rpow;
                (0..m * n).map(move |y| {
                    let (k, j) = (x % m, x / m);
                    let (l, q) = (y % m, y / m);
                    let mut a = k + rpow[j] * l;
                    let mut b = j + q;
                    if b >= n {
                        b -= n;
                        a += s;
                    }
                    (b * m + a % m) as u32
                })
            })
            .collect();
        Self::from_flat(name.into(), m * n, mul)
    }

    /// The dicyclic group of order 4n.
    pub fn dicyclic(n: usize) -> Result<FiniteGroup> {
        if n < 1 {
            return Err(Error::Spec("dicyclic group needs n >= 1".into()));
        }
        Self::metacyclic(format!("Dic{n}"), 2 * n, 2, 2 * n - 1, n)
    }

    fn fix_inverses(&mut self) {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                if self.mul[a * n + b] as usize == self.identity {
                    self.inv[a] = b as u32;
                }
            }
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> FiniteGroup {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Process-unique identifier of this table.
    pub fn id(&self) -> u64 {
        self.id
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `x^a = a⁻¹ x a`.
    #[inline]
    pub fn conj(&self, x: usize, a: usize) -> usize {
        self.mul(self.mul(self.inv(a), x), a)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// The row-major multiplication table.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn empty_set(&self) -> Subset {
        Subset::empty(self.order)
    }

    pub fn full_set(&self) -> Subset {
        Subset::full(self.order)
    }

    pub fn identity_set(&self) -> Subset {
        Subset::singleton(self.order, self.identity)
    }

    /// `G^× = G − {e}`.
    pub fn nonidentity_set(&self) -> Subset {
        self.full_set().without(self.identity)
    }

    /// A subset from element indices, rejecting indices outside the group.
    pub fn subset<I: IntoIterator<Item = usize>>(&self, elems: I) -> Result<Subset> {
        Subset::from_indices(self.order, elems).map_err(|element| Error::OutOfRange {
            element,
            size: self.order,
        })
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Conjugacy classes ordered by least member.
    pub fn conjugacy_classes(&self) -> Vec<Subset> {
        let mut seen = self.empty_set();
        let mut classes = Vec::new();
        for x in 0..self.order {
            if seen.contains(x) {
                continue;
            }
            let mut class = self.empty_set();
            for a in 0..self.order {
                class.insert(self.conj(x, a));
            }
            seen.union_with(&class);
            classes.push(class);
        }
        classes
    }

    pub fn center(&self) -> Subset {
        let mut z = self.empty_set();
        for x in 0..self.order {
            if (0..self.order).all(|a| self.mul(x, a) == self.mul(a, x)) {
                z.insert(x);
            }
        }
        z
    }

    /// The subgroup generated by all commutators.
    pub fn derived_subgroup(&self) -> Subset {
        let mut gens = self.empty_set();
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b));
                gens.insert(c);
            }
        }
        self.closure(&gens)
    }

    /// The submonoid generated by `s`, which on a finite group is a subgroup
    /// whenever `s` is nonempty.
    pub fn closure(&self, s: &Subset) -> Subset {
        let mut reached = self.identity_set();
        let mut frontier = vec![self.identity];
        let gens = s.to_vec();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if reached.insert(y) {
                    frontier.push(y);
                }
            }
        }
        reached
    }

    /// Checks that `n` is a subgroup, reporting a witness pair on failure.
    pub fn check_subgroup(&self, n: &Subset) -> Result<()> {
        if n.universe() != self.order {
            return Err(Error::NotSubgroup(format!(
                "subset lives on {} elements, group has {}",
                n.universe(),
                self.order
            )));
        }
        if !n.contains(self.identity) {
            return Err(Error::NotSubgroup(format!("identity {} is missing", self.identity)));
        }
        for a in n {
            for b in n {
                if !n.contains(self.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!(
                        "{a}·{b} = {} is missing",
                        self.mul(a, b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that `n` is a normal subgroup, reporting a witness pair on failure.
    pub fn check_normal(&self, n: &Subset) -> Result<()> {
        self.check_subgroup(n)?;
        for x in n {
            for a in 0..self.order {
                if !n.contains(self.conj(x, a)) {
                    return Err(Error::NotNormal(format!(
                        "conjugate of {x} by {a} is {}, outside the subgroup",
                        self.conj(x, a)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Cheap isomorphism invariants: sorted element orders, center size,
    /// derived subgroup size, class count and number of distinct squares.
    pub fn signature(&self) -> GroupSignature {
        let mut orders: Vec<usize> = (0..self.order).map(|x| self.element_order(x)).collect();
        orders.sort_unstable();
        GroupSignature {
            order: self.order,
            element_orders: orders,
            center: self.center().count(),
            derived: self.derived_subgroup().count(),
            classes: self.conjugacy_classes().len(),
            squares: self.elements().map(|x| self.mul(x, x)).collect::<std::collections::BTreeSet<_>>().len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSignature {
    pub order: usize,
    pub element_orders: Vec<usize>,
    pub center: usize,
    pub derived: usize,
    pub classes: usize,
    pub squares: usize,
}

/// The permutation of `0..n` behind each element of [`FiniteGroup::symmetric`]
/// (`alternating = false`) or [`FiniteGroup::alternating`], by index.
pub fn permutation_elements(n: usize, alternating: bool) -> Vec<Vec<usize>> {
    permutations(n)
        .into_iter()
        .filter(|p| !alternating || is_even(p))
        .map(|p| p.into_iter().map(|x| x as usize).collect())
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..n as u32).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

fn is_even(p: &[u32]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// Apply `p`, then `q`.
fn compose(p: &[u32], q: &[u32]) -> Vec<u32> {
    p.iter().map(|&x| q[x as usize]).collect()
}

/// The subgroup `h` of `g` as a standalone group, with members in ascending
/// order, together with the embedding table.
pub fn subgroup_as_group(g: &FiniteGroup, h: &Subset, name: impl Into<String>) -> Result<(FiniteGroup, Vec<usize>)> {
    g.check_subgroup(h)?;
    let embed = h.to_vec();
    let mut local = vec![usize::MAX; g.order()];
    for (i, &x) in embed.iter().enumerate() {
        local[x] = i;
    }
    let n = embed.len();
    let mul: Vec<u32> = (0..n * n)
        .map(|ij| local[g.mul(embed[ij / n], embed[ij % n])] as u32)
        .collect();
    let mut sub = FiniteGroup {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        name: name.into(),
        order: n,
        identity: local[g.identity()],
        mul,
        inv: vec![0; n],
    };
    sub.fix_inverses();
    Ok((sub, embed))
}

/// JSON description of a group, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic {
        n: usize,
    },
    Dihedral {
        n: usize,
    },
    Symmetric {
        n: usize,
    },
    Alternating {
        n: usize,
    },
    Dicyclic {
        n: usize,
    },
    Metacyclic {
        m: usize,
        n: usize,
        r: usize,
        s: usize,
    },
    Table {
        mul: Vec<Vec<usize>>,
        #[serde(default)]
        name: Option<String>,
    },
    Product {
        a: Box<GroupSpec>,
        b: Box<GroupSpec>,
    },
    Semidirect {
        h: Box<GroupSpec>,
        k: Box<GroupSpec>,
        action: Vec<Vec<usize>>,
    },
    /// A member of [`crate::catalog::catalog`] by name.
    Named {
        name: String,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic { n } => FiniteGroup::cyclic(*n),
            GroupSpec::Dihedral { n } => FiniteGroup::dihedral(*n),
            GroupSpec::Symmetric { n } => FiniteGroup::symmetric(*n),
            GroupSpec::Alternating { n } => FiniteGroup::alternating(*n),
            GroupSpec::Dicyclic { n } => FiniteGroup::dicyclic(*n),
            GroupSpec::Metacyclic { m, n, r, s } => {
                FiniteGroup::metacyclic(format!("M({m},{n},{r},{s})"), *m, *n, *r, *s)
            }
            GroupSpec::Table { mul, name } => {
                FiniteGroup::from_table(name.clone().unwrap_or_else(|| "table".into()), mul)
            }
            GroupSpec::Product { a, b } => Ok(FiniteGroup::direct_product(&a.build()?, &b.build()?)),
            GroupSpec::Semidirect { h, k, action } => {
                FiniteGroup::semidirect(&h.build()?, &k.build()?, action)
            }
            GroupSpec::Named { name } => crate::catalog::by_name(name)
                .ok_or_else(|| Error::Spec(format!("no catalog group named `{name}`"))),
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GroupSpec> {
        Ok(serde_json::from_str(s)?)
    }
}

/// A homomorphism stored as its full element table.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl GroupHom {
    /// Validates `map` as a homomorphism `source → target`.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Result<GroupHom> {
        if map.len() != source.order() {
            return Err(Error::NotHomomorphism(format!(
                "table has {} entries, source has order {}",
                map.len(),
                source.order()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.order()) {
            return Err(Error::OutOfRange {
                element: bad,
                size: target.order(),
            });
        }
        for x in source.elements() {
            for y in source.elements() {
                if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                    return Err(Error::NotHomomorphism(format!(
                        "f({x}·{y}) differs from f({x})·f({y})"
                    )));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    /// Extends generator images to a homomorphism, failing when the images are
    /// inconsistent or the generators do not generate the source.
    pub fn from_generators(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        images: &[(usize, usize)],
    ) -> Result<GroupHom> {
        for &(x, y) in images {
            if x >= source.order() || y >= target.order() {
                return Err(Error::OutOfRange {
                    element: x.max(y),
                    size: source.order().min(target.order()),
                });
            }
        }
        let mut map = vec![usize::MAX; source.order()];
        map[source.identity()] = target.identity();
        let mut queue = std::collections::VecDeque::from([source.identity()]);
        while let Some(x) = queue.pop_front() {
            for &(g, gy) in images {
                let next = source.mul(x, g);
                let img = target.mul(map[x], gy);
                if map[next] == usize::MAX {
                    map[next] = img;
                    queue.push_back(next);
                } else if map[next] != img {
                    return Err(Error::NotHomomorphism(format!(
                        "generator images force two values at element {next}"
                    )));
                }
            }
        }
        if let Some(x) = map.iter().position(|&y| y == usize::MAX) {
            return Err(Error::Spec(format!("generators do not reach element {x}")));
        }
        GroupHom::new(source, target, map)
    }

    pub fn identity(g: Arc<FiniteGroup>) -> GroupHom {
        let map = g.elements().collect();
        GroupHom {
            source: g.clone(),
            target: g,
            map,
        }
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn source_arc(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target_arc(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    pub fn kernel(&self) -> Subset {
        let e = self.target.identity();
        let mut k = self.source.empty_set();
        for (x, &y) in self.map.iter().enumerate() {
            if y == e {
                k.insert(x);
            }
        }
        k
    }

    pub fn image(&self) -> Subset {
        let mut im = self.target.empty_set();
        for &y in &self.map {
            im.insert(y);
        }
        im
    }

    pub fn check_surjective(&self) -> Result<()> {
        match self.image().complement().first() {
            Some(x) => Err(Error::NotSurjective(x)),
            None => Ok(()),
        }
    }

    pub fn is_surjective(&self) -> bool {
        self.check_surjective().is_ok()
    }

    /// The fiber `f⁻¹(y)`.
    pub fn fiber(&self, y: usize) -> Subset {
        let mut s = self.source.empty_set();
        for (x, &fx) in self.map.iter().enumerate() {
            if fx == y {
                s.insert(x);
            }
        }
        s
    }
}

/// `G/N` with cosets ordered by least member, and the canonical epimorphism.
pub fn quotient_by_normal(g: &Arc<FiniteGroup>, n: &Subset) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    g.check_normal(n)?;
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        for k in n {
            coset_of[g.mul(x, k)] = reps.len();
        }
        reps.push(x);
    }
    let q = reps.len();
    let mul: Vec<u32> = (0..q * q)
        .map(|ij| coset_of[g.mul(reps[ij / q], reps[ij % q])] as u32)
        .collect();
    let mut quotient = FiniteGroup {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        name: format!("{}/N{}", g.name(), n.count()),
        order: q,
        identity: coset_of[g.identity()],
        mul,
        inv: vec![0; q],
    };
    quotient.fix_inverses();
    let quotient = Arc::new(quotient);
    let hom = GroupHom {
        source: g.clone(),
        target: quotient.clone(),
        map: coset_of,
    };
    Ok((quotient, hom))
}

/// A right inverse `g : H → G` of a surjection `f : G → H`.
#[derive(Clone, Debug)]
pub struct Section {
    hom: GroupHom,
    map: Vec<usize>,
    symmetric: bool,
}

impl Section {
    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    #[inline]
    pub fn apply(&self, y: usize) -> usize {
        self.map[y]
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    /// Whether `g(e) = e` and `g(x⁻¹) = g(x)⁻¹` hold for every x.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }
}

/// Builds a section of a surjection.
///
/// Without `symmetric` every element goes to its least preimage. With it,
/// e goes to e, each pair `{x, x⁻¹}` of non-involutions goes to a least
/// preimage `y` of x and to `y⁻¹`, and each involution goes to an involutive
/// preimage when one exists (least such), else to its least preimage. The
/// resulting [`Section::is_symmetric`] flag records whether the inverse
/// condition holds everywhere.
pub fn make_section(f: &GroupHom, symmetric: bool) -> Result<Section> {
    f.check_surjective()?;
    let (g, h) = (f.source(), f.target());
    let mut least = vec![usize::MAX; h.order()];
    for x in g.elements().rev() {
        least[f.apply(x)] = x;
    }
    let map = if !symmetric {
        least
    } else {
        let mut map = vec![usize::MAX; h.order()];
        map[h.identity()] = g.identity();
        for x in h.elements() {
            if map[x] != usize::MAX {
                continue;
            }
            let xi = h.inv(x);
            if xi != x {
                map[x] = least[x];
                map[xi] = g.inv(least[x]);
            } else {
                map[x] = f
                    .fiber(x)
                    .iter()
                    .find(|&y| g.mul(y, y) == g.identity())
                    .unwrap_or(least[x]);
            }
        }
        map
    };
    let is_sym = map[h.identity()] == g.identity()
        && h.elements().all(|x| map[h.inv(x)] == g.inv(map[x]));
    Ok(Section {
        hom: f.clone(),
        map,
        symmetric: is_sym,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force isomorphism search for tiny groups.
    fn isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
        fn extend(a: &FiniteGroup, b: &FiniteGroup, map: &mut Vec<usize>, used: &mut Vec<bool>, x: usize) -> bool {
            if x == a.order() {
                return a.elements().all(|p| a.elements().all(|q| map[a.mul(p, q)] == b.mul(map[p], map[q])));
            }
            for y in b.elements() {
                if !used[y] {
                    used[y] = true;
                    map[x] = y;
                    if extend(a, b, map, used, x + 1) {
                        return true;
                    }
                    used[y] = false;
                }
            }
            false
        }
        a.order() == b.order() && extend(a, b, &mut vec![0; a.order()], &mut vec![false; b.order()], 0)
    }

    fn check_axioms(g: &FiniteGroup) {
        let e = g.identity();
        for a in g.elements() {
            assert_eq!(g.mul(e, a), a);
            assert_eq!(g.mul(a, e), a);
            assert_eq!(g.mul(a, g.inv(a)), e);
            for b in g.elements() {
                for c in g.elements() {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn constructions_satisfy_axioms() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let groups = [
            FiniteGroup::cyclic(1).unwrap(),
            FiniteGroup::cyclic(12).unwrap(),
            FiniteGroup::dihedral(6).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::alternating(4).unwrap(),
            FiniteGroup::dicyclic(3).unwrap(),
            FiniteGroup::direct_product(&z2, &FiniteGroup::dihedral(4).unwrap()),
            FiniteGroup::semidirect(&z2, &z3, &[vec![0, 1, 2], vec![0, 2, 1]]).unwrap(),
            FiniteGroup::from_permutations("p", 4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]]).unwrap().0,
        ];
        for g in &groups {
            check_axioms(g);
        }
        assert_eq!(groups[0].order(), 1);
        assert_eq!(groups[3].order(), 24);
        assert_eq!(groups[8].order(), 24);
    }

    #[test]
    fn s3_and_its_semidirect_model() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let sd = FiniteGroup::semidirect(&z2, &z3, &[vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        assert!(isomorphic(&s3, &sd));
        assert!(isomorphic(&s3, &FiniteGroup::dihedral(3).unwrap()));
        assert!(!isomorphic(&s3, &FiniteGroup::cyclic(6).unwrap()));
    }

    #[test]
    fn bad_tables_name_the_axiom() {
        let err = FiniteGroup::from_table("x", &[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(err.to_string().contains("inverse"), "{err}");
        // a loop of order 5 that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table("loop", &t).unwrap_err();
        assert!(err.to_string().contains("associativity"), "{err}");
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let err = FiniteGroup::semidirect(&z2, &z3, &[vec![0, 1, 2], vec![1, 2, 0]]).unwrap_err();
        assert!(err.to_string().contains("automorphism"), "{err}");
    }

    #[test]
    fn quotients_and_kernels() {
        let z6 = Arc::new(FiniteGroup::cyclic(6).unwrap());
        let n = z6.subset([0, 3]).unwrap();
        let (q, f) = quotient_by_normal(&z6, &n).unwrap();
        assert_eq!(q.order(), 3);
        assert!(isomorphic(&q, &FiniteGroup::cyclic(3).unwrap()));
        assert_eq!(f.table(), &[0, 1, 2, 0, 1, 2]);
        assert_eq!(f.kernel(), n);

        let (q1, f1) = quotient_by_normal(&z6, &z6.identity_set()).unwrap();
        assert_eq!(*q1, *z6);
        assert_eq!(f1.kernel(), z6.identity_set());

        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let a3 = s3.derived_subgroup();
        let (q2, f2) = quotient_by_normal(&s3, &a3).unwrap();
        assert_eq!(q2.order(), 2);
        assert_eq!(f2.kernel(), a3);

        let trivial = Arc::new(FiniteGroup::cyclic(1).unwrap());
        let c = GroupHom::new(s3.clone(), trivial, vec![0; 6]).unwrap();
        assert_eq!(c.kernel(), s3.full_set());
        assert_eq!(GroupHom::identity(s3.clone()).kernel(), s3.identity_set());

        let transposition = s3.subset([0, 1]).unwrap();
        let err = quotient_by_normal(&s3, &transposition).unwrap_err();
        assert!(matches!(err, Error::NotNormal(_)), "{err}");
        let err = quotient_by_normal(&z6, &z6.subset([0, 1]).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotSubgroup(_)), "{err}");
    }

    #[test]
    fn quotient_kernel_roundtrip_on_all_normal_subgroups() {
        for g in [FiniteGroup::dihedral(4).unwrap(), FiniteGroup::symmetric(4).unwrap()] {
            let g = Arc::new(g);
            // normal subgroups are unions of classes; enumerate those unions
            let classes = g.conjugacy_classes();
            for mask in 0u32..1 << classes.len() {
                let mut n = g.empty_set();
                for (i, c) in classes.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        n.union_with(c);
                    }
                }
                if g.check_normal(&n).is_ok() {
                    let (q, f) = quotient_by_normal(&g, &n).unwrap();
                    assert_eq!(f.kernel(), n);
                    assert_eq!(q.order() * n.count(), g.order());
                }
            }
        }
    }

    #[test]
    fn sections() {
        let z6 = Arc::new(FiniteGroup::cyclic(6).unwrap());
        let (_, f) = quotient_by_normal(&z6, &z6.subset([0, 3]).unwrap()).unwrap();
        let g = make_section(&f, true).unwrap();
        assert_eq!(g.table(), &[0, 1, 5]);
        assert!(g.is_symmetric());
        let plain = make_section(&f, false).unwrap();
        assert_eq!(plain.table(), &[0, 1, 2]);
        assert!(!plain.is_symmetric());

        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let (_, sign) = quotient_by_normal(&s3, &s3.derived_subgroup()).unwrap();
        let g = make_section(&sign, true).unwrap();
        assert!(g.is_symmetric());
        assert_eq!(g.apply(0), 0);
        assert_eq!(s3.element_order(g.apply(1)), 2);

        // Z4 → Z2 has no involutive preimage of the generator
        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let (_, f) = quotient_by_normal(&z4, &z4.subset([0, 2]).unwrap()).unwrap();
        let g = make_section(&f, true).unwrap();
        assert!(!g.is_symmetric());
        for y in f.target().elements() {
            assert_eq!(f.apply(g.apply(y)), y);
        }

        let id = GroupHom::identity(s3.clone());
        assert_eq!(make_section(&id, true).unwrap().table(), &[0, 1, 2, 3, 4, 5]);

        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let not_onto = GroupHom::new(z2.clone(), z6.clone(), vec![0, 3]).unwrap();
        assert!(matches!(make_section(&not_onto, false), Err(Error::NotSurjective(1))));
    }

    #[test]
    fn homomorphisms_from_generators() {
        let z6 = Arc::new(FiniteGroup::cyclic(6).unwrap());
        let z3 = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let f = GroupHom::from_generators(z6.clone(), z3.clone(), &[(1, 1)]).unwrap();
        assert_eq!(f.table(), &[0, 1, 2, 0, 1, 2]);
        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        assert!(GroupHom::from_generators(z4, z3, &[(1, 1)]).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec: GroupSpec = r#"{"kind":"semidirect","h":{"kind":"cyclic","n":2},"k":{"kind":"cyclic","n":3},"action":[[0,1,2],[0,2,1]]}"#
            .parse()
            .unwrap();
        assert_eq!(spec.build().unwrap().order(), 6);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json.parse::<GroupSpec>().unwrap(), spec);
        assert!(r#"{"kind":"cyclic"}"#.parse::<GroupSpec>().is_err());
        let t: GroupSpec = r#"{"kind":"table","mul":[[0,1],[1,0]]}"#.parse().unwrap();
        assert_eq!(t.build().unwrap().order(), 2);
    }

    #[test]
    fn subgroup_extraction() {
        let s4 = FiniteGroup::symmetric(4).unwrap();
        let (v4, embed) = subgroup_as_group(&s4, &s4.derived_subgroup().clone(), "A4").unwrap();
        assert_eq!(v4.order(), 12);
        check_axioms(&v4);
        for a in v4.elements() {
            for b in v4.elements() {
                assert_eq!(embed[v4.mul(a, b)], s4.mul(embed[a], embed[b]));
            }
        }
    }
}
