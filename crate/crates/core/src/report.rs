//! Tallies of exact checks with counterexample witnesses, and sampling plans.

use std::collections::BTreeMap;
use std::fmt;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::Subset;

/// Witnesses kept per check.
pub const MAX_WITNESSES: usize = 5;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub skip_reasons: Vec<String>,
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        self.passed += other.passed;
        self.failed += other.failed;
        self.skipped += other.skipped;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
        for r in other.skip_reasons {
            if !self.skip_reasons.contains(&r) {
                self.skip_reasons.push(r);
            }
        }
    }
}

/// Named checks with pass/fail/skip counts, ordered by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: BTreeMap<String, Tally>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report {
            title: title.into(),
            checks: BTreeMap::new(),
        }
    }

    fn tally(&mut self, name: &str) -> &mut Tally {
        if !self.checks.contains_key(name) {
            self.checks.insert(name.to_string(), Tally::default());
        }
        self.checks.get_mut(name).unwrap()
    }

    /// Records one evaluation of `name`; the witness is built only on failure.
    pub fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) -> bool {
        let t = self.tally(name);
        if ok {
            t.passed += 1;
        } else {
            t.failed += 1;
            if t.witnesses.len() < MAX_WITNESSES {
                t.witnesses.push(witness());
            }
        }
        ok
    }

    pub fn skip(&mut self, name: &str, reason: &str) {
        let t = self.tally(name);
        t.skipped += 1;
        if !t.skip_reasons.iter().any(|r| r == reason) {
            t.skip_reasons.push(reason.to_string());
        }
    }

    /// Folds `other` into `self`, keeping the earliest witnesses.
    pub fn merge(&mut self, other: Report) {
        for (name, t) in other.checks {
            self.tally(&name).merge(t);
        }
    }

    /// Folds `other` into `self` with every check name prefixed.
    pub fn merge_prefixed(&mut self, prefix: &str, other: Report) {
        for (name, t) in other.checks {
            self.tally(&format!("{prefix}: {name}")).merge(t);
        }
    }

    pub fn skipped(&self) -> u64 {
        self.checks.values().map(|t| t.skipped).sum()
    }

    pub fn failures(&self) -> u64 {
        self.checks.values().map(|t| t.failed).sum()
    }

    pub fn passed(&self) -> u64 {
        self.checks.values().map(|t| t.passed).sum()
    }

    pub fn is_ok(&self) -> bool {
        self.failures() == 0
    }

    pub fn get(&self, name: &str) -> Option<&Tally> {
        self.checks.get(name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for (name, t) in &self.checks {
            writeln!(
                f,
                "  {name}: {} passed, {} failed, {} skipped",
                t.passed, t.failed, t.skipped
            )?;
            for w in &t.witnesses {
                writeln!(f, "    counterexample: {w}")?;
            }
        }
        Ok(())
    }
}

/// How a family of subsets or pairs is traversed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sample {
    Exhaustive,
    Random { count: usize, seed: u64 },
}

impl Sample {
    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Index pairs into a family of size `n`: all of them, or `count` drawn
    /// uniformly with replacement.
    pub fn pairs(self, n: usize) -> Vec<(usize, usize)> {
        match self {
            Sample::Exhaustive => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
            Sample::Random { count, seed } => {
                if n == 0 {
                    return Vec::new();
                }
                let mut rng = Sample::rng(seed);
                (0..count)
                    .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
                    .collect()
            }
        }
    }

    /// Indices into a family of size `n`.
    pub fn indices(self, n: usize) -> Vec<usize> {
        match self {
            Sample::Exhaustive => (0..n).collect(),
            Sample::Random { count, seed } => {
                if n == 0 {
                    return Vec::new();
                }
                let mut rng = Sample::rng(seed);
                (0..count).map(|_| rng.random_range(0..n)).collect()
            }
        }
    }
}

/// A uniformly random subset of `{0, .., universe - 1}`.
pub fn random_subset<R: RngExt + ?Sized>(rng: &mut R, universe: usize) -> Subset {
    let mut s = Subset::empty(universe);
    for x in 0..universe {
        if rng.random::<bool>() {
            s.insert(x);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tallies_merge_in_order() {
        let mut a = Report::new("a");
        a.check("x", true, || unreachable!());
        a.check("x", false, || "first".into());
        let mut b = Report::new("b");
        b.check("x", false, || "second".into());
        b.skip("y", "outside domain");
        b.skip("y", "outside domain");
        a.merge(b);
        let x = a.get("x").unwrap();
        assert_eq!((x.passed, x.failed), (1, 2));
        assert_eq!(x.witnesses, vec!["first", "second"]);
        assert_eq!(a.get("y").unwrap().skipped, 2);
        assert_eq!(a.get("y").unwrap().skip_reasons.len(), 1);
        assert!(!a.is_ok());
    }

    #[test]
    fn sampling_is_reproducible() {
        let s = Sample::Random { count: 20, seed: 7 };
        assert_eq!(s.pairs(10), s.pairs(10));
        assert_ne!(s.pairs(10), Sample::Random { count: 20, seed: 8 }.pairs(10));
        assert_eq!(Sample::Exhaustive.pairs(3).len(), 9);
        assert!(s.pairs(0).is_empty());
    }
}
