use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Complexity, ComplexityModel};
use crate::error::{Error, Result};

/// Largest universe whose full power set [`SetModel`] will enumerate.
pub const ENUMERATION_LIMIT: u32 = 20;

/// A labeled finite universe of `1..=64` positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Universe(u8);

impl Universe {
    pub fn new(size: u32) -> Result<Self> {
        if (1..=64).contains(&size) {
            Ok(Universe(size as u8))
        } else {
            Err(Error::InvalidUniverse(size))
        }
    }

    pub fn size(self) -> u32 {
        self.0 as u32
    }

    /// Bit mask of all positions.
    pub fn full_mask(self) -> u64 {
        if self.0 == 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }
}

impl TryFrom<u32> for Universe {
    type Error = Error;
    fn try_from(v: u32) -> Result<Self> {
        Universe::new(v)
    }
}

impl From<Universe> for u32 {
    fn from(u: Universe) -> u32 {
        u.size()
    }
}

/// A subset of a [`Universe`]; its complexity is its cardinality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SetString {
    universe: Universe,
    bits: u64,
}

impl SetString {
    pub fn empty(universe: Universe) -> Self {
        SetString { universe, bits: 0 }
    }

    pub fn full(universe: Universe) -> Self {
        SetString {
            universe,
            bits: universe.full_mask(),
        }
    }

    pub fn from_bits(universe: Universe, bits: u64) -> Result<Self> {
        let stray = bits & !universe.full_mask();
        if stray != 0 {
            return Err(Error::PositionOutOfRange {
                position: stray.trailing_zeros(),
                size: universe.size(),
            });
        }
        Ok(SetString { universe, bits })
    }

    pub fn from_positions<I: IntoIterator<Item = u32>>(universe: Universe, positions: I) -> Result<Self> {
        let mut bits = 0u64;
        for p in positions {
            if p >= universe.size() {
                return Err(Error::PositionOutOfRange {
                    position: p,
                    size: universe.size(),
                });
            }
            bits |= 1 << p;
        }
        Ok(SetString { universe, bits })
    }

    /// Parses `{0,2,5}`, `0,2,5` or `{}`.
    pub fn parse(universe: Universe, label: &str) -> Result<Self> {
        let inner = label.trim();
        let inner = inner
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .unwrap_or(inner);
        let mut positions = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            positions.push(
                part.parse::<u32>()
                    .map_err(|_| Error::BadSetLabel(label.to_string()))?,
            );
        }
        SetString::from_positions(universe, positions)
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, position: u32) -> bool {
        position < 64 && self.bits >> position & 1 == 1
    }

    pub fn positions(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.universe.size()).filter(move |&p| self.contains(p))
    }

    pub fn union(&self, other: &SetString) -> Result<SetString> {
        self.same_universe(other)?;
        Ok(SetString {
            universe: self.universe,
            bits: self.bits | other.bits,
        })
    }

    pub fn intersection(&self, other: &SetString) -> Result<SetString> {
        self.same_universe(other)?;
        Ok(SetString {
            universe: self.universe,
            bits: self.bits & other.bits,
        })
    }

    pub fn difference(&self, other: &SetString) -> Result<SetString> {
        self.same_universe(other)?;
        Ok(SetString {
            universe: self.universe,
            bits: self.bits & !other.bits,
        })
    }

    pub fn is_subset(&self, other: &SetString) -> bool {
        self.bits & !other.bits == 0
    }

    fn same_universe(&self, other: &SetString) -> Result<()> {
        if self.universe == other.universe {
            Ok(())
        } else {
            Err(Error::UniverseMismatch(self.universe.size(), other.universe.size()))
        }
    }
}

impl fmt::Display for SetString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.positions().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

fn common_universe<'a, I: IntoIterator<Item = &'a SetString>>(sets: I) -> Result<Option<Universe>> {
    let mut universe = None;
    for s in sets {
        match universe {
            None => universe = Some(s.universe),
            Some(u) if u != s.universe => {
                return Err(Error::UniverseMismatch(u.size(), s.universe.size()))
            }
            Some(_) => {}
        }
    }
    Ok(universe)
}

/// `C(items... | condition)` in the set model: `|union(items) \ condition|`.
pub fn set_complexity(items: &[SetString], condition: Option<&SetString>) -> Result<Complexity> {
    if items.is_empty() {
        return Err(Error::NoItems);
    }
    common_universe(items.iter().chain(condition))?;
    let union = items.iter().fold(0u64, |acc, s| acc | s.bits);
    let cond = condition.map_or(0, |c| c.bits);
    Ok(Complexity::Bits((union & !cond).count_ones()))
}

/// `I(x:y)` or `I(x:y|z)` in the set model: `|(x ∩ y) \ z|`.
pub fn set_information(x: &SetString, y: &SetString, condition: Option<&SetString>) -> Result<Complexity> {
    common_universe([x, y].into_iter().chain(condition))?;
    let cond = condition.map_or(0, |c| c.bits);
    Ok(Complexity::Bits((x.bits & y.bits & !cond).count_ones()))
}

/// The set model over the full power set of a small universe. Item `i` is the
/// subset whose bit mask is `i`.
#[derive(Clone, Copy, Debug)]
pub struct SetModel {
    universe: Universe,
}

impl SetModel {
    pub fn new(universe: Universe) -> Result<Self> {
        if universe.size() > ENUMERATION_LIMIT {
            return Err(Error::UniverseTooLarge {
                size: universe.size(),
                limit: ENUMERATION_LIMIT,
            });
        }
        Ok(SetModel { universe })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn set(&self, item: usize) -> SetString {
        SetString {
            universe: self.universe,
            bits: item as u64,
        }
    }

    pub fn item(&self, set: &SetString) -> Result<usize> {
        if set.universe != self.universe {
            return Err(Error::UniverseMismatch(self.universe.size(), set.universe.size()));
        }
        Ok(set.bits as usize)
    }
}

impl ComplexityModel for SetModel {
    fn len(&self) -> usize {
        1usize << self.universe.size()
    }

    fn label(&self, item: usize) -> String {
        self.set(item).to_string()
    }

    fn index_of(&self, label: &str) -> Option<usize> {
        SetString::parse(self.universe, label).ok().map(|s| s.bits as usize)
    }

    fn complexity(&self, x: usize, given: Option<usize>) -> Complexity {
        let cond = given.unwrap_or(0);
        Complexity::Bits((x & !cond).count_ones())
    }

    fn joint(&self, items: &[usize], given: Option<usize>) -> Result<Complexity> {
        if items.is_empty() {
            return Err(Error::NoItems);
        }
        for &i in items.iter().chain(given.as_ref()) {
            self.check_item(i)?;
        }
        let union = items.iter().fold(0usize, |acc, &i| acc | i);
        Ok(Complexity::Bits((union & !given.unwrap_or(0)).count_ones()))
    }

    fn triangle_slack(&self) -> Option<u32> {
        Some(0)
    }
}
