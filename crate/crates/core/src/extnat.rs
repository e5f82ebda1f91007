//! Extended naturals `Z>=0 ∪ {∞}` and exact extended ratios.
//!
//! Every word length and integer-valued metric in this crate lands in
//! [`ExtNat`]. Ratios of word lengths (the multiplicative function-space
//! metric) are kept as exact fractions in [`ExtRatio`] so that no check ever
//! needs a floating-point tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A value in `Z>=0 ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

pub use ExtNat::{Fin, Inf};

impl ExtNat {
    pub const ZERO: ExtNat = Fin(0);
    pub const ONE: ExtNat = Fin(1);

    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    pub fn is_inf(self) -> bool {
        matches!(self, Inf)
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<u64> {
        match self {
            Fin(n) => Some(n),
            Inf => None,
        }
    }

    /// Supremum of a family; the empty family has supremum 0.
    pub fn sup<I: IntoIterator<Item = ExtNat>>(values: I) -> ExtNat {
        values.into_iter().fold(ExtNat::ZERO, ExtNat::max)
    }

    /// `log` of a multiplicative value, for presentation only.
    pub fn ln(self) -> f64 {
        match self {
            Fin(0) => f64::NEG_INFINITY,
            Fin(n) => (n as f64).ln(),
            Inf => f64::INFINITY,
        }
    }

    pub fn saturating_sub(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (Inf, _) => Inf,
            (Fin(_), Inf) => Fin(0),
            (Fin(a), Fin(b)) => Fin(a.saturating_sub(b)),
        }
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        Fin(n)
    }
}

impl From<usize> for ExtNat {
    fn from(n: usize) -> Self {
        Fin(n as u64)
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Fin(a), Fin(b)) => a.cmp(b),
            (Fin(_), Inf) => Ordering::Less,
            (Inf, Fin(_)) => Ordering::Greater,
            (Inf, Inf) => Ordering::Equal,
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (Fin(a), Fin(b)) => a.checked_add(b).map_or(Inf, Fin),
            _ => Inf,
        }
    }
}

/// `∞·0 = 0`, `∞·n = ∞` for `n >= 1`.
impl Mul for ExtNat {
    type Output = ExtNat;

    fn mul(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (Fin(0), _) | (_, Fin(0)) => Fin(0),
            (Fin(a), Fin(b)) => a.checked_mul(b).map_or(Inf, Fin),
            _ => Inf,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(n) => write!(f, "{n}"),
            Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Fin(n) => serializer.serialize_u64(*n),
            Inf => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExtNatVisitor;

        impl Visitor<'_> for ExtNatVisitor {
            type Value = ExtNat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative integer or the string \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtNat, E> {
                Ok(Fin(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtNat, E> {
                u64::try_from(v)
                    .map(Fin)
                    .map_err(|_| E::custom("negative value"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtNat, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ExtNatVisitor)
    }
}

impl std::str::FromStr for ExtNat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Inf);
        }
        s.parse::<u64>()
            .map(Fin)
            .map_err(|e| format!("invalid extended natural {s:?}: {e}"))
    }
}

/// An exact value in `Q>=0 ∪ {∞}`, stored as a reduced fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtRatio {
    Frac { num: u64, den: u64 },
    Inf,
}

impl ExtRatio {
    pub const ONE: ExtRatio = ExtRatio::Frac { num: 1, den: 1 };
    pub const ZERO: ExtRatio = ExtRatio::Frac { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> ExtRatio {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den);
        ExtRatio::Frac {
            num: num / g,
            den: den / g,
        }
    }

    /// `a / b` with the conventions `∞/∞ = 1`, `c/∞ = 0` and `∞/c = ∞` for finite `c`.
    ///
    /// Returns `None` when the denominator is the finite value 0.
    pub fn ratio(a: ExtNat, b: ExtNat) -> Option<ExtRatio> {
        match (a, b) {
            (_, Fin(0)) => None,
            (Fin(a), Fin(b)) => Some(ExtRatio::new(a, b)),
            (Inf, Inf) => Some(ExtRatio::ONE),
            (Fin(_), Inf) => Some(ExtRatio::ZERO),
            (Inf, Fin(_)) => Some(ExtRatio::Inf),
        }
    }

    /// The value as an extended natural, when it is integral.
    pub fn as_ext_nat(self) -> Option<ExtNat> {
        match self {
            ExtRatio::Inf => Some(Inf),
            ExtRatio::Frac { num, den: 1 } => Some(Fin(num)),
            ExtRatio::Frac { .. } => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtRatio::Inf => f64::INFINITY,
            ExtRatio::Frac { num, den } => num as f64 / den as f64,
        }
    }
}

impl From<ExtNat> for ExtRatio {
    fn from(n: ExtNat) -> Self {
        match n {
            Fin(n) => ExtRatio::Frac { num: n, den: 1 },
            Inf => ExtRatio::Inf,
        }
    }
}

impl PartialOrd for ExtRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRatio::Inf, ExtRatio::Inf) => Ordering::Equal,
            (ExtRatio::Inf, _) => Ordering::Greater,
            (_, ExtRatio::Inf) => Ordering::Less,
            (ExtRatio::Frac { num: a, den: b }, ExtRatio::Frac { num: c, den: d }) => {
                (*a as u128 * *d as u128).cmp(&(*c as u128 * *b as u128))
            }
        }
    }
}

impl fmt::Display for ExtRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRatio::Inf => f.write_str("inf"),
            ExtRatio::Frac { num, den: 1 } => write!(f, "{num}"),
            ExtRatio::Frac { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl Serialize for ExtRatio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtRatio::Frac { num, den: 1 } => serializer.serialize_u64(*num),
            other => serializer.serialize_str(&other.to_string()),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_at_infinity() {
        assert_eq!(Fin(3) + Inf, Inf);
        assert_eq!(Inf + Fin(0), Inf);
        assert_eq!(Fin(3).min(Inf), Fin(3));
        assert_eq!(Fin(3).max(Inf), Inf);
        assert_eq!(Inf * Fin(0), Fin(0));
        assert_eq!(Fin(0) * Inf, Fin(0));
        assert_eq!(Inf * Fin(2), Inf);
        assert_eq!(Fin(u64::MAX) + Fin(1), Inf);
    }

    #[test]
    fn empty_sup_is_zero() {
        assert_eq!(ExtNat::sup(std::iter::empty()), Fin(0));
        assert_eq!(ExtNat::sup([Fin(2), Inf, Fin(1)]), Inf);
    }

    #[test]
    fn parse_and_serialize_inf() {
        assert_eq!("inf".parse::<ExtNat>().unwrap(), Inf);
        assert_eq!("12".parse::<ExtNat>().unwrap(), Fin(12));
        assert!("-1".parse::<ExtNat>().is_err());
        assert_eq!(serde_json::to_string(&vec![Fin(1), Inf]).unwrap(), r#"[1,"inf"]"#);
        let back: Vec<ExtNat> = serde_json::from_str(r#"[1,"inf"]"#).unwrap();
        assert_eq!(back, vec![Fin(1), Inf]);
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(ExtRatio::ratio(Inf, Inf), Some(ExtRatio::ONE));
        assert_eq!(ExtRatio::ratio(Fin(5), Inf), Some(ExtRatio::ZERO));
        assert_eq!(ExtRatio::ratio(Inf, Fin(2)), Some(ExtRatio::Inf));
        assert_eq!(ExtRatio::ratio(Fin(4), Fin(6)), Some(ExtRatio::new(2, 3)));
        assert_eq!(ExtRatio::ratio(Fin(1), Fin(0)), None);
        assert!(ExtRatio::new(2, 3) < ExtRatio::ONE);
        assert!(ExtRatio::new(7, 2) > ExtRatio::from(Fin(3)));
        assert_eq!(ExtRatio::new(6, 2).as_ext_nat(), Some(Fin(3)));
    }
}
