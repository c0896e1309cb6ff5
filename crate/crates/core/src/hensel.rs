//! q-th roots of 1-units by Newton iteration, and the root criterion
//! `g |* f  <=>  exists h: h^q = g^q + p f^q` for a prime `q != p`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcring::{LCFunction, SpectrumPoint};
use crate::logic::{Decision, Valuation};
use crate::padic::{check_prime, PAdic, Rational};

/// Input to [`qth_root_of_unit`]: a 1-unit `target` and a prime `q != p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSpec {
    q: u32,
    target: PAdic,
    precision: u32,
}

impl RootSpec {
    pub fn new(q: u32, target: PAdic, precision: u32) -> Result<Self> {
        check_prime(q as u64).map_err(|_| Error::UnsupportedExponent(q))?;
        if q == target.prime() {
            return Err(Error::UnsupportedExponent(q));
        }
        if precision == 0 {
            return Err(Error::InvalidPrecision);
        }
        let is_one_unit =
            target.valuation() == Valuation::Finite(0) && target.digits().first() == Some(&1);
        if !is_one_unit {
            return Err(Error::NotOneUnit);
        }
        Ok(RootSpec {
            q,
            target: target.truncate(precision),
            precision,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn target(&self) -> &PAdic {
        &self.target
    }
}

/// The q-th root `y` of `target` with `y = 1 mod p`.
pub fn qth_root_of_unit(spec: &RootSpec) -> Result<PAdic> {
    qth_root_trace(spec).map(|(y, _)| y)
}

/// Like [`qth_root_of_unit`], also returning `v(y_n^q - target)` for each
/// Newton iterate `y_0 = 1, y_1, ...`.
///
/// `q y^(q-1)` is a unit because `q != p`, so each step at least doubles
/// the residual valuation.
pub fn qth_root_trace(spec: &RootSpec) -> Result<(PAdic, Vec<Valuation>)> {
    let c = &spec.target;
    let p = c.prime();
    let n = c.precision().expect("1-unit has finite valuation");
    let q_elt = PAdic::embed(&Rational::from_integer(spec.q.into()), p, n);
    let mut y = PAdic::one(p, n);
    let mut trace = Vec::new();
    for _ in 0..2 * (n + 8) {
        let residual = y.pow(spec.q).sub(c)?;
        trace.push(residual.valuation());
        if residual.is_zero_to_precision() {
            return Ok((y, trace));
        }
        let slope = q_elt.mul(&y.pow(spec.q - 1))?;
        y = y.sub(&residual.div(&slope)?)?;
    }
    Err(Error::NoConvergence)
}

/// A point where `v_p(g(x)) > v_p(f(x))`, so `g^q + p f^q` has valuation
/// `1 + q v_p(f(x))` there, which `q` does not divide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub point: SpectrumPoint,
    pub vp_g: Valuation,
    pub vp_f: Valuation,
    /// `v_p((g^q + p f^q)(x))`.
    pub vp_rhs: Valuation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootCriterion {
    /// `g |* f`, witnessed by `h` with `h^q = g^q + p f^q`.
    Divides(LCFunction),
    Refuted(Refutation),
}

fn check_exponent(q: u32, p: u32) -> Result<()> {
    check_prime(q as u64).map_err(|_| Error::UnsupportedExponent(q))?;
    if q == p {
        return Err(Error::UnsupportedExponent(q));
    }
    Ok(())
}

fn same_shape(a: &LCFunction, b: &LCFunction) -> Result<()> {
    if a.space() != b.space() {
        return Err(Error::SpaceMismatch);
    }
    if a.prime() != b.prime() {
        return Err(Error::PrimeMismatch(a.prime(), b.prime()));
    }
    Ok(())
}

/// `(g^q + p f^q)(x)` at one point.
fn rhs_at(g: &PAdic, f: &PAdic, q: u32) -> Result<PAdic> {
    let p = g.scalar(&Rational::from_integer(g.prime().into()));
    g.pow(q).add(&p.mul(&f.pow(q))?)
}

fn root_at(g: &PAdic, f: &PAdic, q: u32) -> Result<PAdic> {
    match g.valuation() {
        Valuation::Infinite => {
            // v(g) <= v(f) forces f = 0
            Ok(g.clone())
        }
        Valuation::AtLeast(_) => {
            if f.is_exact_zero() {
                Ok(g.clone())
            } else {
                Err(Error::InsufficientPrecision("divides_by_root_criterion"))
            }
        }
        Valuation::Finite(_) => {
            let ratio = f.div(g)?;
            let p = g.scalar(&Rational::from_integer(g.prime().into()));
            let one = PAdic::one(g.prime(), g.cap());
            let unit = one.add(&p.mul(&ratio.pow(q))?)?;
            let n = unit.precision().expect("1-unit");
            let y = qth_root_of_unit(&RootSpec::new(q, unit, n)?)?;
            g.mul(&y)
        }
    }
}

/// Decides `g |* f` through the root criterion.
///
/// If some point has `v_p(g(x)) > v_p(f(x))` the first such point is
/// returned as a refutation. Otherwise `h` is assembled coset by coset as
/// `g(x) * (1 + p (f(x)/g(x))^q)^(1/q)`, with `h(x) = 0` where `g(x) = 0`.
pub fn divides_by_root_criterion(g: &LCFunction, f: &LCFunction, q: u32) -> Result<RootCriterion> {
    same_shape(g, f)?;
    check_exponent(q, g.prime())?;
    let mut undecided = false;
    for (i, (gv, fv)) in g.values().iter().zip(f.values()).enumerate() {
        match gv.valuation().le(fv.valuation()) {
            Decision::Yes => {}
            Decision::Undecided => undecided = true,
            Decision::No => {
                return Ok(RootCriterion::Refuted(Refutation {
                    point: SpectrumPoint { index: i },
                    vp_g: gv.valuation(),
                    vp_f: fv.valuation(),
                    vp_rhs: rhs_at(gv, fv, q)?.valuation(),
                }));
            }
        }
    }
    if undecided {
        return Err(Error::InsufficientPrecision("divides_by_root_criterion"));
    }
    let values = g
        .values()
        .par_iter()
        .zip(f.values().par_iter())
        .map(|(gv, fv)| root_at(gv, fv, q))
        .collect::<Result<Vec<_>>>()?;
    Ok(RootCriterion::Divides(LCFunction::new(g.space(), g.prime(), values)?))
}

/// Checks `h^q = g^q + p f^q` pointwise to the available precision.
pub fn verify_root_identity(h: &LCFunction, g: &LCFunction, f: &LCFunction, q: u32) -> Result<Decision> {
    same_shape(h, g)?;
    same_shape(g, f)?;
    let mut out = Decision::Yes;
    for ((hv, gv), fv) in h.values().iter().zip(g.values()).zip(f.values()) {
        let rhs = rhs_at(gv, fv, q)?;
        let diff = hv.pow(q).sub(&rhs)?;
        let d = match (diff.valuation(), rhs.valuation()) {
            (Valuation::Infinite, _) => Decision::Yes,
            (Valuation::Finite(_), _) => Decision::No,
            (Valuation::AtLeast(a), Valuation::Finite(r)) if a > r => Decision::Yes,
            _ => Decision::Undecided,
        };
        out = out.and(d);
    }
    Ok(out)
}

/// Fewest relative digits on which `h^q` and `g^q + p f^q` agree over all
/// points; `None` when they agree exactly everywhere.
pub fn root_identity_digits(h: &LCFunction, g: &LCFunction, f: &LCFunction, q: u32) -> Result<Option<i64>> {
    same_shape(h, g)?;
    same_shape(g, f)?;
    let mut worst: Option<i64> = None;
    for ((hv, gv), fv) in h.values().iter().zip(g.values()).zip(f.values()) {
        let rhs = rhs_at(gv, fv, q)?;
        let diff = hv.pow(q).sub(&rhs)?;
        let agree = match (diff.valuation(), rhs.valuation()) {
            (Valuation::Infinite, _) => continue,
            (Valuation::Finite(d) | Valuation::AtLeast(d), Valuation::Finite(r)) => d - r,
            (_, _) => 0,
        };
        worst = Some(worst.map_or(agree, |w| w.min(agree)));
    }
    Ok(worst)
}
