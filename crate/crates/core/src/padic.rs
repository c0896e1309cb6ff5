//! Elements of `Q_p` at bounded relative precision, and exact rationals.
//!
//! A nonzero element is stored as `p^v * u` with `u` a unit integer in
//! `[1, p^N)` not divisible by `p`; its digits are known modulo `p^(v + N)`
//! (the absolute precision). Zero comes in two flavours: the exact zero and
//! a zero that is only known to have valuation `>= A` because every digit
//! up to `p^A` vanished.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::logic::Valuation;

pub type Rational = BigRational;

pub const DEFAULT_PRECISION: u32 = 64;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<u32> {
    if is_prime(p) && p <= u32::MAX as u64 {
        Ok(p as u32)
    } else {
        Err(Error::NotPrime(p))
    }
}

pub(crate) fn pow_p(p: u32, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

/// Splits `n != 0` into `(v_p(n), n / p^v_p(n))`.
fn strip_uint(n: &BigUint, p: u32) -> (u32, BigUint) {
    let pb = BigUint::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

fn strip_int(n: &BigInt, p: u32) -> (u32, BigInt) {
    let (v, m) = strip_uint(n.magnitude(), p);
    (v, BigInt::from_biguint(n.sign(), m))
}

/// `v_p(r)`; infinite for `r = 0`.
pub fn vp_rational(r: &Rational, p: u32) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinite;
    }
    let (vn, _) = strip_int(r.numer(), p);
    let (vd, _) = strip_int(r.denom(), p);
    Valuation::Finite(vn as i64 - vd as i64)
}

/// `p^e` as a rational, for any integer `e`.
pub fn rational_pow_p(p: u32, e: i64) -> Rational {
    let base = BigInt::from(pow_p(p, e.unsigned_abs() as u32));
    if e >= 0 {
        Rational::from_integer(base)
    } else {
        Rational::new(BigInt::one(), base)
    }
}

/// `|r|_p = p^(-v_p(r))`, and `0` for `r = 0`.
pub fn abs_p_rational(r: &Rational, p: u32) -> Rational {
    match vp_rational(r, p) {
        Valuation::Finite(v) => rational_pow_p(p, -v),
        _ => Rational::zero(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Zero,
    /// Zero to the available digits: valuation `>= abs`.
    Bounded(i64),
    Unit {
        valuation: i64,
        unit: BigUint,
        precision: u32,
    },
}

/// An element of `Q_p` at bounded relative precision.
///
/// `cap` is the nominal working precision used when constants are created
/// next to this element (see [`PAdic::scalar`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PAdic {
    prime: u32,
    cap: u32,
    repr: Repr,
}

impl PAdic {
    pub fn zero(prime: u32, cap: u32) -> Self {
        PAdic {
            prime,
            cap,
            repr: Repr::Zero,
        }
    }

    pub fn one(prime: u32, cap: u32) -> Self {
        PAdic {
            prime,
            cap,
            repr: Repr::Unit {
                valuation: 0,
                unit: BigUint::one(),
                precision: cap,
            },
        }
    }

    /// A zero known only up to `p^abs`.
    pub fn bounded_zero(prime: u32, abs: i64, cap: u32) -> Self {
        PAdic {
            prime,
            cap,
            repr: Repr::Bounded(abs),
        }
    }

    /// Normalises `p^valuation * n mod p^(valuation + precision)`.
    fn from_scaled(prime: u32, cap: u32, valuation: i64, n: BigUint, precision: u32) -> Self {
        let modulus = pow_p(prime, precision);
        let n = n % &modulus;
        if n.is_zero() {
            return PAdic::bounded_zero(prime, valuation + precision as i64, cap);
        }
        let (k, unit) = strip_uint(&n, prime);
        PAdic {
            prime,
            cap,
            repr: Repr::Unit {
                valuation: valuation + k as i64,
                unit,
                precision: precision - k,
            },
        }
    }

    /// Builds `p^valuation * sum(digits[i] p^i)`; the digit count is the
    /// relative precision and the leading digit must be nonzero.
    pub fn from_digits(prime: u32, valuation: i64, digits: &[u32]) -> Result<Self> {
        check_prime(prime as u64)?;
        if digits.is_empty() {
            return Err(Error::InvalidPrecision);
        }
        if digits[0] == 0 || digits.iter().any(|&d| d >= prime) {
            return Err(Error::parse(0, "digits must lie in [0, p-1] with a nonzero first digit"));
        }
        let mut unit = BigUint::zero();
        for &d in digits.iter().rev() {
            unit = unit * prime + d;
        }
        let precision = digits.len() as u32;
        Ok(PAdic {
            prime,
            cap: precision,
            repr: Repr::Unit {
                valuation,
                unit,
                precision,
            },
        })
    }

    /// Embeds `r` at relative precision `precision`.
    pub fn from_rational(r: &Rational, prime: u32, precision: u32) -> Result<Self> {
        check_prime(prime as u64)?;
        if precision == 0 {
            return Err(Error::InvalidPrecision);
        }
        Ok(Self::embed(r, prime, precision))
    }

    pub(crate) fn embed(r: &Rational, prime: u32, precision: u32) -> Self {
        if r.is_zero() {
            return PAdic::zero(prime, precision);
        }
        let (vn, num) = strip_int(r.numer(), prime);
        let (vd, den) = strip_int(r.denom(), prime);
        let modulus = BigInt::from(pow_p(prime, precision));
        let den_inv = den
            .mod_floor(&modulus)
            .to_biguint()
            .and_then(|d| d.modinv(modulus.magnitude()))
            .expect("denominator is prime to p");
        let num = num.mod_floor(&modulus).to_biguint().expect("non-negative");
        let unit = (num * den_inv) % modulus.magnitude();
        PAdic {
            prime,
            cap: precision,
            repr: Repr::Unit {
                valuation: vn as i64 - vd as i64,
                unit,
                precision,
            },
        }
    }

    pub fn from_integer(n: i64, prime: u32, precision: u32) -> Result<Self> {
        Self::from_rational(&Rational::from_integer(n.into()), prime, precision)
    }

    /// `r * 1` built alongside `self`: same prime, precision `cap`.
    pub fn scalar(&self, r: &Rational) -> Self {
        Self::embed(r, self.prime, self.cap)
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero => Valuation::Infinite,
            Repr::Bounded(a) => Valuation::AtLeast(*a),
            Repr::Unit { valuation, .. } => Valuation::Finite(*valuation),
        }
    }

    /// Relative precision of a nonzero element.
    pub fn precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Unit { precision, .. } => Some(*precision),
            _ => None,
        }
    }

    /// The exponent `A` such that the element is known modulo `p^A`;
    /// `None` for the exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Bounded(a) => Some(*a),
            Repr::Unit {
                valuation,
                precision,
                ..
            } => Some(valuation + *precision as i64),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.repr == Repr::Zero
    }

    /// True for both kinds of zero.
    pub fn is_zero_to_precision(&self) -> bool {
        !matches!(self.repr, Repr::Unit { .. })
    }

    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    /// Base-p digits of the unit part, least significant first.
    pub fn digits(&self) -> Vec<u32> {
        match &self.repr {
            Repr::Unit {
                unit, precision, ..
            } => {
                let pb = BigUint::from(self.prime);
                let mut out = Vec::with_capacity(*precision as usize);
                let mut m = unit.clone();
                for _ in 0..*precision {
                    let (q, r) = m.div_rem(&pb);
                    out.push(r.to_u32().expect("digit < p"));
                    m = q;
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// The stored representative `p^v * u` as a rational. `None` for a
    /// precision-limited zero.
    pub fn to_rational(&self) -> Option<Rational> {
        match &self.repr {
            Repr::Zero => Some(Rational::zero()),
            Repr::Bounded(_) => None,
            Repr::Unit {
                valuation, unit, ..
            } => Some(
                rational_pow_p(self.prime, *valuation)
                    * Rational::from_integer(BigInt::from(unit.clone())),
            ),
        }
    }

    fn same_prime(&self, other: &PAdic) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.prime, other.prime))
        }
    }

    pub fn neg(&self) -> PAdic {
        let repr = match &self.repr {
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => Repr::Unit {
                valuation: *valuation,
                unit: pow_p(self.prime, *precision) - unit,
                precision: *precision,
            },
            other => other.clone(),
        };
        PAdic { repr, ..self.clone() }
    }

    pub fn add(&self, other: &PAdic) -> Result<PAdic> {
        self.same_prime(other)?;
        let p = self.prime;
        let cap = self.cap.max(other.cap);
        let out = match (&self.repr, &other.repr) {
            (Repr::Zero, _) => PAdic { cap, ..other.clone() },
            (_, Repr::Zero) => PAdic { cap, ..self.clone() },
            (Repr::Bounded(a), Repr::Bounded(b)) => PAdic::bounded_zero(p, *a.min(b), cap),
            (
                Repr::Bounded(a),
                Repr::Unit {
                    valuation,
                    unit,
                    precision,
                },
            )
            | (
                Repr::Unit {
                    valuation,
                    unit,
                    precision,
                },
                Repr::Bounded(a),
            ) => {
                let abs = (*a).min(valuation + *precision as i64);
                if *valuation < abs {
                    PAdic::from_scaled(p, cap, *valuation, unit.clone(), (abs - valuation) as u32)
                } else {
                    PAdic::bounded_zero(p, abs, cap)
                }
            }
            (
                Repr::Unit {
                    valuation: va,
                    unit: ua,
                    precision: na,
                },
                Repr::Unit {
                    valuation: vb,
                    unit: ub,
                    precision: nb,
                },
            ) => {
                let v0 = (*va).min(*vb);
                let abs = (va + *na as i64).min(vb + *nb as i64);
                let width = (abs - v0) as u32;
                let sum = ua * pow_p(p, (va - v0) as u32) + ub * pow_p(p, (vb - v0) as u32);
                let modulus = pow_p(p, width);
                if (&sum % &modulus).is_zero() {
                    PAdic::bounded_zero(p, abs, cap)
                } else {
                    PAdic::from_scaled(p, cap, v0, sum, width)
                }
            }
        };
        Ok(out)
    }

    /// `x - x` on identical representations is the exact zero.
    pub fn sub(&self, other: &PAdic) -> Result<PAdic> {
        self.same_prime(other)?;
        if self.repr == other.repr {
            return Ok(PAdic::zero(self.prime, self.cap.max(other.cap)));
        }
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PAdic) -> Result<PAdic> {
        self.same_prime(other)?;
        let p = self.prime;
        let cap = self.cap.max(other.cap);
        let out = match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => PAdic::zero(p, cap),
            (Repr::Bounded(a), Repr::Bounded(b)) => PAdic::bounded_zero(p, a + b, cap),
            (Repr::Bounded(a), Repr::Unit { valuation, .. })
            | (Repr::Unit { valuation, .. }, Repr::Bounded(a)) => {
                PAdic::bounded_zero(p, a + valuation, cap)
            }
            (
                Repr::Unit {
                    valuation: va,
                    unit: ua,
                    precision: na,
                },
                Repr::Unit {
                    valuation: vb,
                    unit: ub,
                    precision: nb,
                },
            ) => {
                let n = (*na).min(*nb);
                let modulus = pow_p(p, n);
                let unit = (ua % &modulus) * (ub % &modulus) % &modulus;
                PAdic {
                    prime: p,
                    cap,
                    repr: Repr::Unit {
                        valuation: va + vb,
                        unit,
                        precision: n,
                    },
                }
            }
        };
        Ok(out)
    }

    pub fn div(&self, other: &PAdic) -> Result<PAdic> {
        self.same_prime(other)?;
        let p = self.prime;
        let cap = self.cap.max(other.cap);
        let (vb, ub, nb) = match &other.repr {
            Repr::Zero => return Err(Error::DivisionByZero),
            Repr::Bounded(_) => return Err(Error::InsufficientPrecision("division")),
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => (*valuation, unit, *precision),
        };
        let out = match &self.repr {
            Repr::Zero => PAdic::zero(p, cap),
            Repr::Bounded(a) => PAdic::bounded_zero(p, a - vb, cap),
            Repr::Unit {
                valuation: va,
                unit: ua,
                precision: na,
            } => {
                let n = (*na).min(nb);
                let modulus = pow_p(p, n);
                let inv = (ub % &modulus)
                    .modinv(&modulus)
                    .expect("unit part is prime to p");
                PAdic {
                    prime: p,
                    cap,
                    repr: Repr::Unit {
                        valuation: va - vb,
                        unit: (ua % &modulus) * inv % &modulus,
                        precision: n,
                    },
                }
            }
        };
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> PAdic {
        let mut result = PAdic::one(self.prime, self.cap);
        if e == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same prime");
            }
            e >>= 1;
            if e == 0 {
                return result;
            }
            base = base.mul(&base).expect("same prime");
        }
    }

    /// Raises the relative precision to at least `digits`, taking the stored
    /// representative as exact (the new digits are zero).
    pub fn widen(&self, digits: u32) -> PAdic {
        let repr = match &self.repr {
            Repr::Unit {
                valuation,
                unit,
                precision,
            } => Repr::Unit {
                valuation: *valuation,
                unit: unit.clone(),
                precision: (*precision).max(digits),
            },
            other => other.clone(),
        };
        PAdic {
            prime: self.prime,
            cap: self.cap.max(digits),
            repr,
        }
    }

    /// Drops digits beyond relative precision `digits`.
    pub fn truncate(&self, digits: u32) -> PAdic {
        match &self.repr {
            Repr::Unit {
                valuation,
                unit,
                precision,
            } if *precision > digits => PAdic {
                prime: self.prime,
                cap: self.cap,
                repr: Repr::Unit {
                    valuation: *valuation,
                    unit: unit % pow_p(self.prime, digits),
                    precision: digits,
                },
            },
            _ => self.clone(),
        }
    }

    /// `|x|_p = p^(-v_p(x))`.
    pub fn norm_abs(&self) -> Result<Rational> {
        match self.valuation() {
            Valuation::Infinite => Ok(Rational::zero()),
            Valuation::Finite(v) => Ok(rational_pow_p(self.prime, -v)),
            Valuation::AtLeast(_) => Err(Error::InsufficientPrecision("norm_abs")),
        }
    }

    /// Whether `x` lies in `U_n(r) = { x : v_p(x - r) >= n }`.
    pub fn in_ball(&self, r: &Rational, n: i64) -> Result<bool> {
        let target_abs = match self.absolute_precision() {
            Some(a) => a.max(n),
            None => n,
        };
        let r_emb = match vp_rational(r, self.prime) {
            Valuation::Finite(v) => Self::embed(r, self.prime, (target_abs - v).max(1) as u32),
            _ => PAdic::zero(self.prime, self.cap),
        };
        let d = self.sub(&r_emb)?;
        match d.valuation() {
            Valuation::Infinite => Ok(true),
            Valuation::Finite(v) => Ok(v >= n),
            Valuation::AtLeast(a) if a >= n => Ok(true),
            Valuation::AtLeast(_) => Err(Error::InsufficientPrecision("in_ball")),
        }
    }

    /// The Kochen operator `(1/p) (x^p - x) / ((x^p - x)^2 - 1)`.
    ///
    /// For `v(x) >= 0` the denominator is a unit since `x^p = x mod p`; for
    /// `v(x) < 0` it is evaluated as `t^2 (1 - t^-2)` with `t = x^p - x`.
    pub fn kochen_gamma(&self) -> Result<PAdic> {
        let p = self.prime;
        let one = PAdic::one(p, self.cap);
        let p_elt = self.scalar(&Rational::from_integer(p.into()));
        match self.valuation() {
            Valuation::Infinite => Ok(PAdic::zero(p, self.cap)),
            Valuation::AtLeast(a) if a >= 0 => {
                Ok(PAdic::bounded_zero(p, a.max(1) - 1, self.cap))
            }
            Valuation::AtLeast(_) => Err(Error::InsufficientPrecision("kochen_gamma")),
            Valuation::Finite(v) if v >= 0 => {
                let t = self.pow(p).sub(self)?;
                match t.valuation() {
                    Valuation::Infinite => Ok(PAdic::zero(p, self.cap)),
                    Valuation::AtLeast(b) => {
                        Ok(PAdic::bounded_zero(p, b.max(1) - 1, self.cap))
                    }
                    Valuation::Finite(_) => {
                        let denom = t.mul(&t)?.sub(&one)?;
                        t.div(&p_elt.mul(&denom)?)
                    }
                }
            }
            Valuation::Finite(_) => {
                let t = self.pow(p).sub(self)?;
                let s = one.div(&t)?;
                let denom = one.sub(&s.mul(&s)?)?;
                s.div(&p_elt.mul(&denom)?)
            }
        }
    }

    /// Parses `0`, `O(p^A)` or `p^v * [d0,d1,...]`, where the base is either
    /// the literal `p` or the prime itself. `cap` applies to zeros.
    pub fn parse_literal(s: &str, prime: u32, cap: u32) -> Result<PAdic> {
        let s = s.trim();
        let base_ok = |b: &str| b.trim() == "p" || b.trim().parse::<u32>().ok() == Some(prime);
        if s == "0" {
            return Ok(PAdic::zero(prime, cap));
        }
        if let Some(inner) = s.strip_prefix("O(").and_then(|x| x.strip_suffix(')')) {
            let (b, e) = inner
                .split_once('^')
                .ok_or_else(|| Error::parse(0, format!("malformed bound `{s}`")))?;
            if !base_ok(b) {
                return Err(Error::parse(0, format!("base `{b}` is not p={prime}")));
            }
            let a = e
                .trim()
                .parse::<i64>()
                .map_err(|_| Error::parse(0, format!("bad exponent `{e}`")))?;
            return Ok(PAdic::bounded_zero(prime, a, cap));
        }
        let (head, tail) = s
            .split_once('*')
            .ok_or_else(|| Error::parse(0, format!("expected `p^v * [digits]`, got `{s}`")))?;
        let (b, e) = head
            .trim()
            .split_once('^')
            .ok_or_else(|| Error::parse(0, format!("expected `p^v`, got `{}`", head.trim())))?;
        if !base_ok(b) {
            return Err(Error::parse(0, format!("base `{b}` is not p={prime}")));
        }
        let v = e
            .trim()
            .parse::<i64>()
            .map_err(|_| Error::parse(0, format!("bad valuation `{e}`")))?;
        let body = tail
            .trim()
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::parse(0, "digits must be enclosed in [ ]"))?;
        let digits = body
            .split(',')
            .map(|d| {
                d.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::parse(0, format!("bad digit `{}`", d.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_digits(prime, v, &digits)
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => f.write_str("0"),
            Repr::Bounded(a) => write!(f, "O({}^{})", self.prime, a),
            Repr::Unit { valuation, .. } => {
                write!(f, "{}^{} * [", self.prime, valuation)?;
                for (i, d) in self.digits().iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{d}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Parses `n` or `n/d`; the result is in lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::parse(0, format!("bad integer `{}`", t.trim())))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::parse(0, "zero denominator"));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// `num/den` in lowest terms with a positive denominator; integers print bare.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        let (n, d) = (r.numer(), r.denom());
        if d.sign() == Sign::Minus {
            format!("{}/{}", -n, d.abs())
        } else {
            format!("{n}/{d}")
        }
    }
}
