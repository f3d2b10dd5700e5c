//! Computable stand-ins for Kolmogorov complexity.
//!
//! Two models are provided:
//!
//! * the set (Venn) model, where a string is a subset of a finite universe
//!   and every complexity is the cardinality of a union or difference;
//! * description systems, explicit finite tables of
//!   `(code, condition, output)` programs where `C(x|c)` is the length of the
//!   shortest code producing `x` from `c`.
//!
//! Both are exposed through [`ComplexityModel`], which enumerates a finite
//! item domain indexed `0..len()`.

mod set;
mod table;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use set::{set_complexity, set_information, SetModel, SetString, Universe, ENUMERATION_LIMIT};
pub use table::{table_complexity, DescriptionSystem, Program, SystemFile};

/// A description length in bits, or `Infinite` when nothing describes the
/// string. Orders finite values below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Complexity {
    Bits(u32),
    Infinite,
}

impl Complexity {
    pub const ZERO: Complexity = Complexity::Bits(0);

    pub fn bits(self) -> Option<u32> {
        match self {
            Complexity::Bits(b) => Some(b),
            Complexity::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Complexity::Bits(_))
    }

    /// `self <= bound` with `Infinite` never within a finite bound.
    pub fn within(self, bound: u32) -> bool {
        matches!(self, Complexity::Bits(b) if b <= bound)
    }

    /// `self < bound`; used for the strict inequalities of the path lemma.
    pub fn below(self, bound: u32) -> bool {
        matches!(self, Complexity::Bits(b) if b < bound)
    }
}

impl std::fmt::Display for Complexity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Complexity::Bits(b) => write!(f, "{b}"),
            Complexity::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Complexity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Complexity::Bits(b) => s.serialize_u32(*b),
            Complexity::Infinite => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Complexity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match Option::<u32>::deserialize(d)? {
            Some(b) => Complexity::Bits(b),
            None => Complexity::Infinite,
        })
    }
}

/// A finite model of conditional description length.
///
/// Items are indexed `0..len()`. `complexity(x, None)` is the unconditional
/// value `C(x)`.
pub trait ComplexityModel: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn label(&self, item: usize) -> String;

    fn index_of(&self, label: &str) -> Option<usize>;

    /// `C(x | given)`. Callers guarantee the indices are in range.
    fn complexity(&self, x: usize, given: Option<usize>) -> Complexity;

    /// `C(items... | given)` for models that fix a pairing convention.
    fn joint(&self, _items: &[usize], _given: Option<usize>) -> Result<Complexity> {
        Err(Error::JointUnsupported)
    }

    /// Additive slack of the triangle inequality
    /// `C(a|c) <= C(a|b) + C(b|c) + slack`, when the model guarantees one.
    fn triangle_slack(&self) -> Option<u32> {
        None
    }

    fn check_item(&self, item: usize) -> Result<usize> {
        if item < self.len() {
            Ok(item)
        } else {
            Err(Error::UnknownItem(item))
        }
    }

    fn resolve(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownMember(label.to_string()))
    }
}

/// Information distance `max(C(a|b), C(b|a))`.
pub fn information_distance<M: ComplexityModel + ?Sized>(model: &M, a: usize, b: usize) -> Complexity {
    model.complexity(a, Some(b)).max(model.complexity(b, Some(a)))
}

/// `C(x,y) - C(x) - C(y|x)`, the defect of the chain rule.
///
/// Requires joint complexity; description systems refuse it.
pub fn chain_rule_defect<M: ComplexityModel + ?Sized>(model: &M, x: usize, y: usize) -> Result<i64> {
    model.check_item(x)?;
    model.check_item(y)?;
    let joint = model.joint(&[x, y], None)?;
    let parts = [joint, model.complexity(x, None), model.complexity(y, Some(x))];
    let mut bits = [0i64; 3];
    for (slot, value) in bits.iter_mut().zip(parts) {
        *slot = value.bits().ok_or(Error::JointUnsupported)? as i64;
    }
    Ok(bits[0] - bits[1] - bits[2])
}
