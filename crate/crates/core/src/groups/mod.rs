//! Root systems and finite reflection groups.
//!
//! Every model lives in an ambient Euclidean space with orthonormal
//! coordinates `x_1..x_N`. When the reflection representation has no exact
//! orthonormal model of its own dimension (type A, I2(3), I2(5), I2(6), E6) the
//! roots span a proper subspace V and the orthogonal complement is fixed
//! pointwise by the group. Polynomials on V are then the polynomials killed by
//! every directional derivative along the complement, and the apolar pairing
//! restricted to them is the orthonormal pairing on V.

mod group;
mod roots;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::scalars::FieldKind;

pub use group::{GroupElement, ReflectionGroup};
pub use roots::{reflection_matrix, RootSystem};

/// Default cap on the number of enumerated group elements.
pub const DEFAULT_MAX_GROUP_ORDER: u128 = 52_000;

/// Environment variable overriding [`DEFAULT_MAX_GROUP_ORDER`].
pub const MAX_GROUP_ORDER_ENV: &str = "CANON_MAX_GROUP_ORDER";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("unsupported reflection group: {0}")]
    Unsupported(String),
    #[error("{0} is only built on request (pass --allow-large)")]
    NeedsOptIn(GroupType),
    #[error("{group} has no exact model over {field}{hint}")]
    FieldUnsupported {
        group: GroupType,
        field: FieldKind,
        hint: &'static str,
    },
    #[error("{group} has order {order}, above the element cap {cap} (set {MAX_GROUP_ORDER_ENV} to raise it)")]
    OrderCap { group: GroupType, order: u128, cap: u128 },
    #[error("zero vector has no reflection")]
    ZeroRoot,
    #[error("group elements have not been enumerated")]
    NotEnumerated,
    #[error("root system closure is inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Irreducible finite reflection group types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupType {
    A(usize),
    B(usize),
    D(usize),
    I2(u32),
    H3,
    H4,
    F4,
    E(usize),
}

impl GroupType {
    /// Parse from a family label, a rank and the dihedral parameter.
    pub fn parse(label: &str, rank: Option<usize>, m: Option<u32>) -> Result<Self, GroupError> {
        let bad = |msg: String| GroupError::Unsupported(msg);
        let label = label.trim();
        let need_rank = || rank.ok_or_else(|| bad(format!("type {label} needs a rank")));
        let check_rank = |expected: usize| match rank {
            Some(r) if r != expected => Err(bad(format!("type {label} has rank {expected}, not {r}"))),
            _ => Ok(()),
        };
        let t = match label {
            "A" => GroupType::A(need_rank()?),
            "B" => GroupType::B(need_rank()?),
            "D" => GroupType::D(need_rank()?),
            "E" => GroupType::E(need_rank()?),
            "E6" | "E7" | "E8" => {
                let r = label[1..].parse().expect("digit");
                check_rank(r)?;
                GroupType::E(r)
            }
            "I" | "I2" => {
                check_rank(2)?;
                GroupType::I2(m.ok_or_else(|| bad("type I2 needs --m".into()))?)
            }
            "H" => match need_rank()? {
                3 => GroupType::H3,
                4 => GroupType::H4,
                r => return Err(bad(format!("no group of type H{r}"))),
            },
            "H3" => {
                check_rank(3)?;
                GroupType::H3
            }
            "H4" => {
                check_rank(4)?;
                GroupType::H4
            }
            "F" | "F4" => {
                check_rank(4)?;
                GroupType::F4
            }
            other => return Err(bad(format!("unknown type label {other:?}"))),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        let bad = |msg: &str| Err(GroupError::Unsupported(format!("{self}: {msg}")));
        match *self {
            GroupType::A(n) | GroupType::B(n) if n == 0 => bad("rank must be positive"),
            GroupType::D(n) if n < 3 => bad("type D needs rank at least 3"),
            GroupType::I2(m) if m < 3 => bad("dihedral type needs m >= 3"),
            GroupType::E(n) if !(6..=8).contains(&n) => bad("type E exists in ranks 6, 7, 8"),
            GroupType::E(n) if n > 6 => Err(GroupError::Unsupported(format!(
                "{self} (order {}) is out of scope: its antiinvariant has degree {} in {} variables, \
                 far beyond exact desk-scale computation",
                self.order(),
                self.num_positive_roots(),
                n
            ))),
            _ if self.ambient_dim() > crate::polys::MAX_VARS => bad("too many variables"),
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GroupType::A(_) => "A",
            GroupType::B(_) => "B",
            GroupType::D(_) => "D",
            GroupType::I2(_) => "I2",
            GroupType::H3 => "H3",
            GroupType::H4 => "H4",
            GroupType::F4 => "F4",
            GroupType::E(6) => "E6",
            GroupType::E(7) => "E7",
            GroupType::E(_) => "E8",
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            GroupType::A(n) | GroupType::B(n) | GroupType::D(n) | GroupType::E(n) => n,
            GroupType::I2(_) => 2,
            GroupType::H3 => 3,
            GroupType::H4 | GroupType::F4 => 4,
        }
    }

    /// Number of coordinates of the model the group acts on.
    pub fn ambient_dim(&self) -> usize {
        match *self {
            GroupType::A(n) => n + 1,
            GroupType::I2(3 | 5 | 6) => 3,
            GroupType::E(6) => 8,
            _ => self.rank(),
        }
    }

    pub fn dihedral_m(&self) -> Option<u32> {
        match *self {
            GroupType::I2(m) => Some(m),
            _ => None,
        }
    }

    /// Degrees of the basic invariants, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = match *self {
            GroupType::A(n) => (2..=n as u32 + 1).collect(),
            GroupType::B(n) => (1..=n as u32).map(|i| 2 * i).collect(),
            GroupType::D(n) => (1..n as u32).map(|i| 2 * i).chain([n as u32]).collect(),
            GroupType::I2(m) => vec![2, m],
            GroupType::H3 => vec![2, 6, 10],
            GroupType::H4 => vec![2, 12, 20, 30],
            GroupType::F4 => vec![2, 6, 8, 12],
            GroupType::E(6) => vec![2, 5, 6, 8, 9, 12],
            GroupType::E(7) => vec![2, 6, 8, 10, 12, 14, 18],
            GroupType::E(_) => vec![2, 8, 12, 14, 18, 20, 24, 30],
        };
        d.sort_unstable();
        d
    }

    /// Classical group order.
    pub fn order(&self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        match *self {
            GroupType::A(n) => fact(n + 1),
            GroupType::B(n) => (1u128 << n) * fact(n),
            GroupType::D(n) => (1u128 << (n - 1)) * fact(n),
            GroupType::I2(m) => 2 * m as u128,
            GroupType::H3 => 120,
            GroupType::H4 => 14_400,
            GroupType::F4 => 1_152,
            GroupType::E(6) => 51_840,
            GroupType::E(7) => 2_903_040,
            GroupType::E(_) => 696_729_600,
        }
    }

    /// Number of positive roots, i.e. the degree of the antiinvariant.
    pub fn num_positive_roots(&self) -> usize {
        match *self {
            GroupType::A(n) => n * (n + 1) / 2,
            GroupType::B(n) => n * n,
            GroupType::D(n) => n * (n - 1),
            GroupType::I2(m) => m as usize,
            GroupType::H3 => 15,
            GroupType::H4 => 60,
            GroupType::F4 => 24,
            GroupType::E(6) => 36,
            GroupType::E(7) => 63,
            GroupType::E(_) => 120,
        }
    }

    /// Types that are only built when explicitly requested.
    pub fn needs_opt_in(&self) -> bool {
        matches!(self, GroupType::H4 | GroupType::E(_))
    }

    pub fn is_crystallographic(&self) -> bool {
        match *self {
            GroupType::I2(m) => matches!(m, 3 | 4 | 6),
            GroupType::H3 | GroupType::H4 => false,
            _ => true,
        }
    }

    /// Coefficient field selected by `--field auto`.
    pub fn auto_field(&self) -> FieldKind {
        match *self {
            GroupType::H3 | GroupType::H4 | GroupType::I2(5) => FieldKind::QuadSqrt5,
            GroupType::I2(m) if !matches!(m, 3 | 4 | 6) => FieldKind::Float,
            _ => FieldKind::Rational,
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupType::A(n) => write!(f, "A{n}"),
            GroupType::B(n) => write!(f, "B{n}"),
            GroupType::D(n) => write!(f, "D{n}"),
            GroupType::I2(m) => write!(f, "I2({m})"),
            GroupType::E(n) => write!(f, "E{n}"),
            other => f.write_str(other.label()),
        }
    }
}

impl FromStr for GroupType {
    type Err = GroupError;

    /// Accepts compact names such as `B3`, `D4`, `I2(5)`, `H3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            let m = inner
                .parse()
                .map_err(|_| GroupError::Unsupported(format!("bad dihedral order in {s:?}")))?;
            return GroupType::parse("I2", Some(2), Some(m));
        }
        let split = s
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| GroupError::Unsupported(format!("missing rank in {s:?}")))?;
        let rank = s[split..]
            .parse()
            .map_err(|_| GroupError::Unsupported(format!("bad rank in {s:?}")))?;
        GroupType::parse(&s[..split], Some(rank), None)
    }
}

/// Element cap from the environment, or the default.
pub fn max_group_order() -> u128 {
    std::env::var(MAX_GROUP_ORDER_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_GROUP_ORDER)
}
