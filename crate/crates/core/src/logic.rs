//! Three-valued decisions and valuations that may only be known from below.

use std::cmp::Ordering;
use std::fmt;

/// Outcome of a predicate evaluated at bounded precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Yes,
    No,
    Undecided,
}

impl Decision {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::Yes
        } else {
            Decision::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Decision::Yes
    }

    pub fn is_no(self) -> bool {
        self == Decision::No
    }

    pub fn is_decided(self) -> bool {
        self != Decision::Undecided
    }

    pub fn and(self, other: Decision) -> Decision {
        match (self, other) {
            (Decision::No, _) | (_, Decision::No) => Decision::No,
            (Decision::Yes, Decision::Yes) => Decision::Yes,
            _ => Decision::Undecided,
        }
    }

    pub fn or(self, other: Decision) -> Decision {
        match (self, other) {
            (Decision::Yes, _) | (_, Decision::Yes) => Decision::Yes,
            (Decision::No, Decision::No) => Decision::No,
            _ => Decision::Undecided,
        }
    }

    pub fn not(self) -> Decision {
        match self {
            Decision::Yes => Decision::No,
            Decision::No => Decision::Yes,
            Decision::Undecided => Decision::Undecided,
        }
    }

    /// Material implication `premise => conclusion`.
    pub fn implies(self, conclusion: Decision) -> Decision {
        self.not().or(conclusion)
    }

    pub fn all<I: IntoIterator<Item = Decision>>(it: I) -> Decision {
        it.into_iter().fold(Decision::Yes, Decision::and)
    }

    pub fn any<I: IntoIterator<Item = Decision>>(it: I) -> Decision {
        it.into_iter().fold(Decision::No, Decision::or)
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Yes => "yes",
            Decision::No => "no",
            Decision::Undecided => "undecided",
        })
    }
}

/// An extended integer, `Fin(n) < Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    Fin(i64),
    Inf,
}

impl Ext {
    fn add(self, other: Ext) -> Ext {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::Inf,
        }
    }
}

/// A p-adic valuation (or an `ord` value) as far as it is known.
///
/// `AtLeast(m)` only arises from precision limits: the true value is some
/// integer `>= m` or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
    AtLeast(i64),
}

/// `ord` takes values in the same domain as the valuation.
pub type OrdValue = Valuation;

impl Valuation {
    fn lo(self) -> Ext {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => Ext::Fin(v),
            Valuation::Infinite => Ext::Inf,
        }
    }

    fn hi(self) -> Ext {
        match self {
            Valuation::Finite(v) => Ext::Fin(v),
            Valuation::Infinite | Valuation::AtLeast(_) => Ext::Inf,
        }
    }

    fn from_bounds(lo: Ext, hi: Ext) -> Valuation {
        match (lo, hi) {
            (Ext::Inf, _) => Valuation::Infinite,
            (Ext::Fin(a), Ext::Fin(b)) if a == b => Valuation::Finite(a),
            (Ext::Fin(a), _) => Valuation::AtLeast(a),
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, Valuation::AtLeast(_))
    }

    /// `self <= other`, three-valued.
    pub fn le(self, other: Valuation) -> Decision {
        if self.hi() <= other.lo() {
            Decision::Yes
        } else if self.lo() > other.hi() {
            Decision::No
        } else {
            Decision::Undecided
        }
    }

    pub fn lt(self, other: Valuation) -> Decision {
        other.le(self).not()
    }

    pub fn ge(self, other: Valuation) -> Decision {
        other.le(self)
    }

    pub fn eq_decided(self, other: Valuation) -> Decision {
        self.le(other).and(other.le(self))
    }

    pub fn min(self, other: Valuation) -> Valuation {
        Valuation::from_bounds(self.lo().min(other.lo()), self.hi().min(other.hi()))
    }

    pub fn add(self, other: Valuation) -> Valuation {
        Valuation::from_bounds(self.lo().add(other.lo()), self.hi().add(other.hi()))
    }

    pub fn scale(self, k: i64) -> Valuation {
        assert!(k > 0);
        match self {
            Valuation::Finite(v) => Valuation::Finite(v * k),
            Valuation::AtLeast(v) => Valuation::AtLeast(v * k),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    pub fn shift(self, by: i64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + by),
            Valuation::AtLeast(v) => Valuation::AtLeast(v + by),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    /// Ordering when both sides are exact; `None` otherwise.
    pub fn cmp_exact(self, other: Valuation) -> Option<Ordering> {
        if self.is_exact() && other.is_exact() {
            Some(self.lo().cmp(&other.lo()))
        } else {
            None
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}
