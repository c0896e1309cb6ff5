//! The ring `C(X, Q_p)` for finite discrete `X` and for `X = Z_p` seen
//! through its cosets `a + p^k Z_p`.
//!
//! A function is a vector of values, one per point or coset. Cosets of a
//! level-`k` space are indexed by their representatives `0..p^k`, and the
//! spectrum of the ring is the set of evaluation maps at those indices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::logic::{Decision, Valuation};
use crate::padic::{check_prime, rational_pow_p, vp_rational, PAdic, Rational};
use crate::ring::RingElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompactSpace {
    Finite(usize),
    ZpLevel { k: u32, p: u32 },
}

impl CompactSpace {
    pub fn finite(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::parse(0, "a finite space needs at least one point"));
        }
        Ok(CompactSpace::Finite(n))
    }

    pub fn zp_level(k: u32, p: u32) -> Result<Self> {
        check_prime(p as u64)?;
        Ok(CompactSpace::ZpLevel { k, p })
    }

    /// Number of points (finite) or cosets (level `k`).
    pub fn size(&self) -> usize {
        match *self {
            CompactSpace::Finite(n) => n,
            CompactSpace::ZpLevel { k, p } => (p as usize).pow(k),
        }
    }

    fn header(&self) -> String {
        match *self {
            CompactSpace::Finite(n) => format!("finite:{n}"),
            CompactSpace::ZpLevel { k, .. } => format!("zp:{k}"),
        }
    }
}

/// A point of the maximal spectrum in the finite model: evaluation at
/// `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpectrumPoint {
    pub index: usize,
}

pub fn spectrum_points(space: &CompactSpace) -> Vec<SpectrumPoint> {
    (0..space.size()).map(|index| SpectrumPoint { index }).collect()
}

/// A locally constant `Q_p`-valued function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LCFunction {
    space: CompactSpace,
    prime: u32,
    values: Vec<PAdic>,
}

impl LCFunction {
    pub fn new(space: CompactSpace, prime: u32, values: Vec<PAdic>) -> Result<Self> {
        check_prime(prime as u64)?;
        if let CompactSpace::ZpLevel { p, .. } = space {
            if p != prime {
                return Err(Error::PrimeMismatch(p, prime));
            }
        }
        if values.len() != space.size() {
            return Err(Error::SpaceMismatch);
        }
        if let Some(v) = values.iter().find(|v| v.prime() != prime) {
            return Err(Error::PrimeMismatch(v.prime(), prime));
        }
        Ok(LCFunction {
            space,
            prime,
            values,
        })
    }

    pub fn constant(space: CompactSpace, c: &PAdic) -> Result<Self> {
        Self::new(space, c.prime(), vec![c.clone(); space.size()])
    }

    /// The indicator function of one point, at precision `precision`.
    pub fn indicator(space: CompactSpace, prime: u32, pt: SpectrumPoint, precision: u32) -> Result<Self> {
        if pt.index >= space.size() {
            return Err(Error::PointOutOfRange(pt.index));
        }
        let values = (0..space.size())
            .map(|i| {
                if i == pt.index {
                    PAdic::one(prime, precision)
                } else {
                    PAdic::zero(prime, precision)
                }
            })
            .collect();
        Self::new(space, prime, values)
    }

    pub fn space(&self) -> CompactSpace {
        self.space
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn values(&self) -> &[PAdic] {
        &self.values
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&PAdic, &PAdic) -> Result<PAdic>) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| op(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(LCFunction {
            values,
            ..self.clone()
        })
    }

    fn map(&self, op: impl Fn(&PAdic) -> PAdic) -> Self {
        LCFunction {
            values: self.values.iter().map(op).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, PAdic::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, PAdic::sub)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, PAdic::mul)
    }

    pub fn pow(&self, e: u32) -> Self {
        self.map(|v| v.pow(e))
    }

    /// Re-expresses a level-`k` function at level `new_level >= k`: the
    /// coset `r + p^k' Z_p` sits inside `(r mod p^k) + p^k Z_p`.
    pub fn refine(&self, new_level: u32) -> Result<Self> {
        let CompactSpace::ZpLevel { k, p } = self.space else {
            return Err(Error::InvalidRefinement);
        };
        if new_level < k {
            return Err(Error::InvalidRefinement);
        }
        let old = self.values.len();
        let space = CompactSpace::ZpLevel { k: new_level, p };
        let values = (0..space.size()).map(|r| self.values[r % old].clone()).collect();
        Ok(LCFunction {
            space,
            prime: self.prime,
            values,
        })
    }

    /// `max_x |f(x)|_p`.
    pub fn sup_norm(&self) -> Result<Rational> {
        let mut best = Rational::zero();
        let mut bound: Option<i64> = None;
        for v in &self.values {
            match v.valuation() {
                Valuation::Infinite => {}
                Valuation::Finite(_) => best = best.max(v.norm_abs()?),
                Valuation::AtLeast(a) => bound = Some(bound.map_or(a, |b: i64| b.min(a))),
            }
        }
        if let Some(a) = bound {
            // a bounded zero contributes at most p^-a
            if best < rational_pow_p(self.prime, -a) {
                return Err(Error::InsufficientPrecision("sup_norm"));
            }
        }
        Ok(best)
    }

    pub fn gelfand(&self, pt: SpectrumPoint) -> Result<&PAdic> {
        self.values.get(pt.index).ok_or(Error::PointOutOfRange(pt.index))
    }

    /// `min_x v_p(f(x))`, i.e. `ord` of `f` under the canonical divisibility.
    pub fn min_valuation(&self) -> Valuation {
        self.values
            .iter()
            .map(PAdic::valuation)
            .fold(Valuation::Infinite, Valuation::min)
    }

    /// Text form: a header line then one literal per line.
    pub fn to_file_string(&self) -> String {
        let mut s = format!("p={} space={}\n", self.prime, self.space.header());
        for v in &self.values {
            s.push_str(&v.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse_file(text: &str, cap: u32) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty function file"))?;
        let mut prime = None;
        let mut space_spec = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("p", v)) => {
                    let p = v
                        .parse::<u64>()
                        .map_err(|_| Error::parse(1, format!("bad prime `{v}`")))?;
                    prime = Some(check_prime(p).map_err(|e| Error::parse(1, e.to_string()))?);
                }
                Some(("space", v)) => space_spec = Some(v.to_string()),
                _ => return Err(Error::parse(1, format!("unknown header field `{field}`"))),
            }
        }
        let prime = prime.ok_or_else(|| Error::parse(1, "missing field `p`"))?;
        let space_spec = space_spec.ok_or_else(|| Error::parse(1, "missing field `space`"))?;
        let space = match space_spec.split_once(':') {
            Some(("finite", n)) => n
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .map(CompactSpace::Finite)
                .ok_or_else(|| Error::parse(1, format!("bad point count `{n}`")))?,
            Some(("zp", k)) => k
                .parse::<u32>()
                .ok()
                .filter(|&k| (prime as f64).powi(k as i32) <= 1e7)
                .map(|k| CompactSpace::ZpLevel { k, p: prime })
                .ok_or_else(|| Error::parse(1, format!("bad level `{k}`")))?,
            _ => return Err(Error::parse(1, format!("bad space `{space_spec}`"))),
        };
        let mut values = Vec::with_capacity(space.size());
        for (i, line) in lines {
            let v = PAdic::parse_literal(line, prime, cap).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::parse(i + 1, msg),
                other => Error::parse(i + 1, other.to_string()),
            })?;
            values.push(v);
        }
        if values.len() != space.size() {
            return Err(Error::parse(
                0,
                format!("expected {} values, found {}", space.size(), values.len()),
            ));
        }
        Self::new(space, prime, values)
    }
}

impl fmt::Display for LCFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl RingElement for LCFunction {
    fn add(&self, other: &Self) -> Result<Self> {
        LCFunction::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        LCFunction::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        LCFunction::mul(self, other)
    }
    fn pow(&self, e: u32) -> Result<Self> {
        Ok(LCFunction::pow(self, e))
    }
    fn scalar(&self, r: &Rational) -> Self {
        self.map(|v| v.scalar(r))
    }
    fn widen(&self, digits: u32) -> Self {
        self.map(|v| v.widen(digits))
    }
}

/// `f |* g`: `v_p(f(x)) <= v_p(g(x))` at every point.
pub fn divides_star(f: &LCFunction, g: &LCFunction) -> Result<Decision> {
    if f.space != g.space {
        return Err(Error::SpaceMismatch);
    }
    if f.prime != g.prime {
        return Err(Error::PrimeMismatch(f.prime, g.prime));
    }
    Ok(Decision::all(
        f.values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| a.valuation().le(b.valuation())),
    ))
}

/// Both sides of the local-global principle for `p | f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalGlobal {
    /// `p | f(x)` at every spectrum point.
    pub pointwise: Decision,
    /// `p |* f`.
    pub global: Decision,
}

impl LocalGlobal {
    pub fn agree(&self) -> Decision {
        match (self.pointwise, self.global) {
            (Decision::Undecided, _) | (_, Decision::Undecided) => Decision::Undecided,
            (a, b) => Decision::from_bool(a == b),
        }
    }
}

pub fn local_global_check(f: &LCFunction) -> LocalGlobal {
    let one = Valuation::Finite(1);
    let pointwise = Decision::all(
        spectrum_points(&f.space)
            .into_iter()
            .map(|pt| one.le(f.values[pt.index].valuation())),
    );
    let p = f.values[0].scalar(&Rational::from_integer(f.prime.into()));
    let p_fn = LCFunction::constant(f.space, &p).expect("same shape");
    LocalGlobal {
        pointwise,
        global: divides_star(&p_fn, f).expect("same shape"),
    }
}

/// A polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approximation {
    pub function: LCFunction,
    /// Certified bound on `sup_x |target(x) - function(x)|_p`.
    pub error_bound: Rational,
}

/// The level-`k` locally constant function taking the value `target(a)` on
/// the coset `a + p^k Z_p`.
///
/// For coefficients in `Z_(p)`, `x = a mod p^k` gives
/// `target(x) = target(a) mod p^k`, so the error is at most `p^-k`.
pub fn approx_by_level(target: &Polynomial, prime: u32, k: u32, precision: u32) -> Result<Approximation> {
    let space = CompactSpace::zp_level(k, prime)?;
    if precision == 0 {
        return Err(Error::InvalidPrecision);
    }
    for c in target.coeffs() {
        if let Valuation::Finite(v) = vp_rational(c, prime) {
            if v < 0 {
                return Err(Error::UnsupportedTarget);
            }
        }
    }
    let values = (0..space.size())
        .map(|a| {
            let a = Rational::from_integer(BigInt::from(a));
            PAdic::embed(&target.eval(&a), prime, precision)
        })
        .collect();
    let error_bound = if target.degree() <= 0 {
        Rational::zero()
    } else {
        Rational::one() / Rational::from_integer(BigInt::from(prime).pow(k))
    };
    Ok(Approximation {
        function: LCFunction::new(space, prime, values)?,
        error_bound,
    })
}
