use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ClassVector, Rat};
use crate::error::{Error, Result};

/// Name of an irreducible curve, ordered "naturally" so that `E_2 < E_10`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveName(String);

impl CurveName {
    pub fn new(name: impl Into<String>) -> Self {
        CurveName(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn chunks(&self) -> Vec<Chunk<'_>> {
        let mut out = Vec::new();
        let s = self.0.as_str();
        let mut start = 0;
        let bytes = s.as_bytes();
        while start < bytes.len() {
            let digit = bytes[start].is_ascii_digit();
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() == digit {
                end += 1;
            }
            let piece = &s[start..end];
            out.push(if digit {
                Chunk::Num(piece.parse().unwrap_or(u64::MAX))
            } else {
                Chunk::Text(piece)
            });
            start = end;
        }
        out
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Chunk<'a> {
    Num(u64),
    Text(&'a str),
}

impl Ord for CurveName {
    fn cmp(&self, other: &Self) -> Ordering {
        self.chunks().cmp(&other.chunks()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for CurveName {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CurveName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for CurveName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for CurveName {
    fn from(s: &str) -> Self {
        CurveName(s.to_string())
    }
}

impl From<String> for CurveName {
    fn from(s: String) -> Self {
        CurveName(s)
    }
}

/// A finite formal rational combination of named curves. Zero coefficients
/// are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NamedDivisor {
    terms: BTreeMap<CurveName, Rat>,
}

impl NamedDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn curve(name: impl Into<CurveName>) -> Self {
        Self::term(Rat::one(), name)
    }

    pub fn term(coeff: Rat, name: impl Into<CurveName>) -> Self {
        let mut d = Self::zero();
        d.add_term(name, coeff);
        d
    }

    pub fn from_terms<N: Into<CurveName>>(terms: impl IntoIterator<Item = (N, Rat)>) -> Self {
        let mut d = Self::zero();
        for (n, c) in terms {
            d.add_term(n, c);
        }
        d
    }

    pub fn add_term(&mut self, name: impl Into<CurveName>, coeff: Rat) {
        let name = name.into();
        let entry = self.terms.entry(name.clone()).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&name);
        }
    }

    pub fn coeff(&self, name: &str) -> Rat {
        self.terms
            .get(&CurveName::from(name))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CurveName, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Rat::is_integer)
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self::from_terms(self.terms.iter().map(|(n, c)| (n.clone(), c * k)))
    }

    pub fn plus(&self, other: &NamedDivisor) -> Self {
        let mut d = self.clone();
        for (n, c) in other.terms() {
            d.add_term(n.clone(), c.clone());
        }
        d
    }

    pub fn minus(&self, other: &NamedDivisor) -> Self {
        self.plus(&other.scale(&Rat::int(-1)))
    }

    fn map_coeffs(&self, f: impl Fn(&Rat) -> Rat) -> Self {
        Self::from_terms(self.terms.iter().map(|(n, c)| (n.clone(), f(c))))
    }

    /// Round every coefficient down.
    pub fn floor(&self) -> Self {
        self.map_coeffs(Rat::floor)
    }

    /// Fractional parts, all in `[0, 1)`.
    pub fn frac(&self) -> Self {
        self.map_coeffs(Rat::fract)
    }

    pub fn ceil(&self) -> Self {
        self.map_coeffs(Rat::ceil)
    }

    /// Drop every term whose curve fails `keep`.
    pub fn restrict(&self, keep: impl Fn(&str) -> bool) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(n, _)| keep(n.as_str()))
                .map(|(n, c)| (n.clone(), c.clone())),
        )
    }
}

pub fn floor_divisor(d: &NamedDivisor) -> NamedDivisor {
    d.floor()
}

pub fn frac_divisor(d: &NamedDivisor) -> NamedDivisor {
    d.frac()
}

pub fn ceil_divisor(d: &NamedDivisor) -> NamedDivisor {
    d.ceil()
}

impl fmt::Display for NamedDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (name, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if abs == Rat::one() {
                write!(f, "{name}")?;
            } else if abs.is_integer() {
                write!(f, "{}{name}", abs.numer())?;
            } else {
                write!(f, "({abs}){name}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NamedDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NamedDivisor({self})")
    }
}

impl FromStr for NamedDivisor {
    type Err = Error;

    /// Parses expressions such as `E_1 + E_2 - 2E_4`, `1/2*l_3`, `(1/3)Gamma`
    /// or `E_1^T`. A trailing `^T` marks a curve on the contracted surface and
    /// is dropped.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "0" {
            return Ok(NamedDivisor::zero());
        }
        let mut out = NamedDivisor::zero();
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = Rat::one();
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = Rat::int(-1);
                rest = r;
            } else if !first {
                return Err(Error::Parse(format!("expected + or - in {s:?}")));
            }
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            rest = tail;
            let (coeff, name) = split_term(term).ok_or_else(|| Error::Parse(format!("bad term {term:?} in {s:?}")))?;
            out.add_term(name, sign * coeff);
        }
        Ok(out)
    }
}

fn split_term(term: &str) -> Option<(Rat, String)> {
    let (coeff, name) = if let Some(inner) = term.strip_prefix('(') {
        let close = inner.find(')')?;
        (inner[..close].parse::<Rat>().ok()?, &inner[close + 1..])
    } else {
        let start = term.find(|c: char| c.is_ascii_alphabetic())?;
        let c = term[..start].trim_end_matches('*');
        let coeff = if c.is_empty() { Rat::one() } else { c.parse().ok()? };
        (coeff, &term[start..])
    };
    let name = name.trim_start_matches('*');
    let name = name.strip_suffix("^T").unwrap_or(name);
    let valid =
        name.chars().next()?.is_ascii_alphabetic() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    valid.then(|| (coeff, name.to_string()))
}

/// One entry of a curve registry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveEntry {
    pub name: CurveName,
    pub class: ClassVector,
    pub is_prime: bool,
}

/// Named curves with their classes in a single lattice, in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRegistry {
    entries: Vec<CurveEntry>,
}

impl CurveRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert or replace a curve.
    pub fn insert(&mut self, name: impl Into<CurveName>, class: ClassVector, is_prime: bool) {
        let name = name.into();
        match self.entries.iter_mut().find(|e| e.name == name) {
            Some(e) => {
                e.class = class;
                e.is_prime = is_prime;
            }
            None => self.entries.push(CurveEntry { name, class, is_prime }),
        }
    }

    pub fn get(&self, name: &str) -> Option<&CurveEntry> {
        self.entries.iter().find(|e| e.name.as_str() == name)
    }

    pub fn class(&self, name: &str) -> Result<&ClassVector> {
        self.get(name)
            .map(|e| &e.class)
            .ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn entries(&self) -> &[CurveEntry] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> impl Iterator<Item = &mut CurveEntry> {
        self.entries.iter_mut()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    /// Linear combination of the registered classes.
    pub fn class_of(&self, rank: usize, d: &NamedDivisor) -> Result<ClassVector> {
        let mut v = ClassVector::zero(rank);
        for (name, c) in d.terms() {
            let class = self.class(name.as_str())?;
            if class.len() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: class.len(),
                });
            }
            v = v.add_scaled(c, class);
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut names: Vec<CurveName> = ["E_10", "E_2", "Gamma", "E_1", "lp_3", "l_3"]
            .into_iter()
            .map(CurveName::from)
            .collect();
        names.sort();
        let sorted: Vec<&str> = names.iter().map(CurveName::as_str).collect();
        assert_eq!(sorted, ["E_1", "E_2", "E_10", "Gamma", "l_3", "lp_3"]);
    }

    #[test]
    fn zero_coefficients_not_stored() {
        let mut d = NamedDivisor::curve("E_1");
        d.add_term("E_1", Rat::int(-1));
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn floor_of_negative_half() {
        let d = NamedDivisor::term(Rat::new(-1, 2), "l_1");
        assert_eq!(floor_divisor(&d), NamedDivisor::term(Rat::int(-1), "l_1"));
        assert_eq!(frac_divisor(&d), NamedDivisor::term(Rat::new(1, 2), "l_1"));
        assert_eq!(ceil_divisor(&d), NamedDivisor::zero());
    }

    #[test]
    fn floor_of_integral_is_identity() {
        let d: NamedDivisor = "E_1 + E_2 - 3E_4".parse().unwrap();
        assert_eq!(floor_divisor(&d), d);
        assert!(frac_divisor(&d).is_zero());
    }

    #[test]
    fn parse_and_display() {
        let d: NamedDivisor = "E_1^T + 1/2*l_3 - (1/3)Gamma - 2E_4".parse().unwrap();
        assert_eq!(d.coeff("E_1"), Rat::one());
        assert_eq!(d.coeff("l_3"), Rat::new(1, 2));
        assert_eq!(d.coeff("Gamma"), Rat::new(-1, 3));
        assert_eq!(d.coeff("E_4"), Rat::int(-2));
        assert_eq!(d.to_string(), "E_1 - 2E_4 - (1/3)Gamma + (1/2)l_3");
        assert_eq!(d.to_string().parse::<NamedDivisor>().unwrap(), d);
        assert!("E_1 +".parse::<NamedDivisor>().is_err());
        assert!("2".parse::<NamedDivisor>().is_err());
        assert!("0".parse::<NamedDivisor>().unwrap().is_zero());
    }

    #[test]
    fn unknown_curve_in_class_of() {
        let reg = CurveRegistry::new();
        let err = reg.class_of(2, &NamedDivisor::curve("X")).unwrap_err();
        assert_eq!(err, Error::UnknownCurve("X".into()));
        assert!(reg.class_of(2, &NamedDivisor::zero()).unwrap().is_zero());
    }
}
