//! Divisibility relations as values.
//!
//! A [`DivRelation`] wraps a three-valued predicate `a | b` on the elements
//! of one ambient ring, together with the prime `p` and the digit precision
//! the ring is modelled at. The precision fixes the window in which `ord`
//! is searched.

mod checks;

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

pub use checks::{
    check_axioms, check_cancellation, check_complement, check_kochen, check_seminorm_laws, check_total,
    kochen_relation,
    CheckReport, PropertyReport,
};

use crate::error::{Error, Result};
use crate::funcring::{divides_star, CompactSpace, LCFunction};
use crate::logic::{Decision, OrdValue, Valuation};
use crate::padic::{check_prime, rational_pow_p, PAdic, Rational};
use crate::ring::RingElement;

/// Which ring a relation is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingTag {
    Rationals,
    PAdic,
    /// `C(X, Q_p)` on one space, or on every desk-scale space when `None`.
    Functions(Option<CompactSpace>),
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Rationals => f.write_str("Q"),
            RingTag::PAdic => f.write_str("Q_p"),
            RingTag::Functions(None) => f.write_str("C(X,Q_p)"),
            RingTag::Functions(Some(CompactSpace::Finite(n))) => write!(f, "C(finite:{n},Q_p)"),
            RingTag::Functions(Some(CompactSpace::ZpLevel { k, .. })) => write!(f, "C(zp:{k},Q_p)"),
        }
    }
}

type Predicate<E> = Arc<dyn Fn(&E, &E) -> Decision + Send + Sync>;

pub struct DivRelation<E> {
    name: String,
    prime: u32,
    ring: RingTag,
    precision: u32,
    predicate: Predicate<E>,
}

impl<E> Clone for DivRelation<E> {
    fn clone(&self) -> Self {
        DivRelation {
            name: self.name.clone(),
            prime: self.prime,
            ring: self.ring,
            precision: self.precision,
            predicate: Arc::clone(&self.predicate),
        }
    }
}

impl<E> fmt::Debug for DivRelation<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DivRelation")
            .field("name", &self.name)
            .field("prime", &self.prime)
            .field("ring", &self.ring)
            .field("precision", &self.precision)
            .finish_non_exhaustive()
    }
}

/// `||a|| = p^(-ord a)`, or an upper bound when `ord` is only bounded below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemiNorm {
    Exact(Rational),
    AtMost(Rational),
}

impl<E: RingElement> DivRelation<E> {
    pub fn new(
        name: impl Into<String>,
        prime: u32,
        ring: RingTag,
        precision: u32,
        predicate: impl Fn(&E, &E) -> Decision + Send + Sync + 'static,
    ) -> Result<Self> {
        check_prime(prime as u64)?;
        if precision == 0 {
            return Err(Error::InvalidPrecision);
        }
        Ok(DivRelation {
            name: name.into(),
            prime,
            ring,
            precision,
            predicate: Arc::new(predicate),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `a | b`.
    pub fn divides(&self, a: &E, b: &E) -> Decision {
        (self.predicate)(a, b)
    }

    /// The `ord` search window `[-(N + 16), N + 16]`.
    pub fn window(&self) -> (i64, i64) {
        let w = self.precision as i64 + 16;
        (-w, w)
    }

    /// `a |' b  <=>  hom(a) | hom(b)` for a unital ring map `hom: F -> E`.
    pub fn pullback<F, H>(&self, name: impl Into<String>, ring: RingTag, hom: H) -> DivRelation<F>
    where
        F: RingElement,
        H: Fn(&F) -> E + Send + Sync + 'static,
        E: 'static,
    {
        let inner = Arc::clone(&self.predicate);
        DivRelation {
            name: name.into(),
            prime: self.prime,
            ring,
            precision: self.precision,
            predicate: Arc::new(move |a: &F, b: &F| inner(&hom(a), &hom(b))),
        }
    }

    fn p_power(&self, like: &E, m: i64) -> E {
        like.scalar(&rational_pow_p(self.prime, m))
    }

    /// `p^m | a`.
    pub fn p_power_divides(&self, m: i64, a: &E) -> Decision {
        self.divides(&self.p_power(a, m), a)
    }

    /// `ord a = sup { m : p^m | a }`, by binary search in [`Self::window`].
    ///
    /// Assumes `p^m | a => p^(m-1) | a`, which holds for every relation
    /// satisfying transitivity.
    pub fn ord(&self, a: &E) -> Result<OrdValue> {
        let (lo, hi) = self.window();
        let in_support = self.divides(&a.scalar(&Rational::zero()), a);
        if in_support.is_yes() {
            return Ok(Valuation::Infinite);
        }
        match self.p_power_divides(lo, a) {
            Decision::Yes => {}
            Decision::No => return Err(Error::WindowExceeded { lo, hi }),
            Decision::Undecided => return Err(Error::InsufficientPrecision("ord")),
        }
        if self.p_power_divides(hi, a).is_yes() {
            return match in_support {
                Decision::Undecided => Ok(Valuation::AtLeast(hi)),
                _ => Err(Error::WindowExceeded { lo, hi }),
            };
        }
        let (mut yes, mut not_yes) = (lo, hi);
        while not_yes - yes > 1 {
            let mid = yes + (not_yes - yes) / 2;
            if self.p_power_divides(mid, a).is_yes() {
                yes = mid;
            } else {
                not_yes = mid;
            }
        }
        match self.p_power_divides(yes + 1, a) {
            Decision::No => Ok(Valuation::Finite(yes)),
            _ => Ok(Valuation::AtLeast(yes)),
        }
    }

    pub fn seminorm(&self, a: &E) -> Result<SemiNorm> {
        Ok(match self.ord(a)? {
            Valuation::Infinite => SemiNorm::Exact(Rational::zero()),
            Valuation::Finite(m) => SemiNorm::Exact(rational_pow_p(self.prime, -m)),
            Valuation::AtLeast(m) => SemiNorm::AtMost(rational_pow_p(self.prime, -m)),
        })
    }
}

/// `a |_p b  <=>  v_p(a) <= v_p(b)` on `Q_p`.
pub fn canonical_qp(prime: u32, precision: u32) -> Result<DivRelation<PAdic>> {
    DivRelation::new("canonical-qp", prime, RingTag::PAdic, precision, |a: &PAdic, b: &PAdic| {
        if a.prime() != b.prime() {
            return Decision::Undecided;
        }
        a.valuation().le(b.valuation())
    })
}

/// `f |* g  <=>  v_p(f(x)) <= v_p(g(x))` for every point `x`.
pub fn canonical_star(
    prime: u32,
    precision: u32,
    space: Option<CompactSpace>,
) -> Result<DivRelation<LCFunction>> {
    DivRelation::new(
        "canonical-star",
        prime,
        RingTag::Functions(space),
        precision,
        move |f: &LCFunction, g: &LCFunction| {
            if space.is_some_and(|s| s != f.space() || s != g.space()) {
                return Decision::Undecided;
            }
            divides_star(f, g).unwrap_or(Decision::Undecided)
        },
    )
}

/// The canonical relation on `Q_p` pulled back along `Q -> Q_p`.
pub fn rationals_via_qp(prime: u32, precision: u32) -> Result<DivRelation<Rational>> {
    let qp = canonical_qp(prime, precision)?;
    Ok(qp.pullback("rational", RingTag::Rationals, move |r: &Rational| {
        PAdic::embed(r, prime, precision)
    }))
}

/// The canonical relation on `C(X, Q_p)` pulled back to `Q_p` along
/// evaluation at one point.
pub fn evaluation_at(
    rel: &DivRelation<PAdic>,
    index: usize,
) -> DivRelation<LCFunction> {
    rel.pullback(
        format!("{}@{index}", rel.name()),
        RingTag::Functions(None),
        move |f: &LCFunction| f.values()[index].clone(),
    )
}
