//! Sampled property checks for divisibility relations.
//!
//! Each check runs `trials` independent instances, each with its own seeded
//! generator, and tallies pass / fail / undecided. Instances that cannot be
//! decided at the available precision are never counted as passes.

use std::fmt;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::DivRelation;
use crate::logic::{Decision, Valuation};
use crate::padic::{vp_rational, Rational};
use crate::ring::RingElement;
use crate::sampling::{trial_rng, RationalSampler, Sampler, Stratum};

/// One line of a check report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub id: String,
    pub trials: u64,
    pub pass: u64,
    pub fail: u64,
    pub undecided: u64,
    /// First counterexample, by trial index.
    pub witness: Option<String>,
}

impl PropertyReport {
    fn empty(id: &str) -> Self {
        PropertyReport {
            id: id.to_string(),
            trials: 0,
            pass: 0,
            fail: 0,
            undecided: 0,
            witness: None,
        }
    }

    /// Associative merge; the left operand's witness wins.
    pub fn merge(mut self, other: PropertyReport) -> PropertyReport {
        self.trials += other.trials;
        self.pass += other.pass;
        self.fail += other.fail;
        self.undecided += other.undecided;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self
    }

    fn record(mut self, outcome: Outcome) -> Self {
        self.trials += 1;
        match outcome {
            Outcome::Pass => self.pass += 1,
            Outcome::Undecided => self.undecided += 1,
            Outcome::Fail(w) => {
                self.fail += 1;
                if self.witness.is_none() {
                    self.witness = Some(w);
                }
            }
        }
        self
    }

    pub fn is_clean(&self) -> bool {
        self.fail == 0
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "axiom={} trials={} pass={} fail={} undecided={} witness={}",
            self.id,
            self.trials,
            self.pass,
            self.fail,
            self.undecided,
            self.witness.as_deref().unwrap_or("-")
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub lines: Vec<PropertyReport>,
}

impl CheckReport {
    pub fn get(&self, id: &str) -> Option<&PropertyReport> {
        self.lines.iter().find(|l| l.id == id)
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.lines.extend(other.lines);
    }

    pub fn total_failures(&self) -> u64 {
        self.lines.iter().map(|l| l.fail).sum()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Undecided,
}

impl Outcome {
    fn from_decision(d: Decision, witness: impl FnOnce() -> String) -> Outcome {
        match d {
            Decision::Yes => Outcome::Pass,
            Decision::No => Outcome::Fail(witness()),
            Decision::Undecided => Outcome::Undecided,
        }
    }
}

fn witness<E: fmt::Display>(elems: &[&E]) -> String {
    elems
        .iter()
        .map(|e| format!("({e})"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn run<F>(id: &str, seed: u64, stream: u64, trials: u64, instance: F) -> PropertyReport
where
    F: Fn(&mut ChaCha8Rng) -> Outcome + Sync,
{
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|t| instance(&mut trial_rng(seed, stream, t)))
        .collect();
    outcomes
        .into_iter()
        .fold(PropertyReport::empty(id), PropertyReport::record)
}

/// Evaluates a ring expression; arithmetic failures make the instance
/// undecided.
macro_rules! tryr {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(_) => return Outcome::Undecided,
        }
    };
}

/// Axioms (1)-(8): divisibility, p-divisibility (Kochen relation) and the
/// p-archimedean property.
pub fn check_axioms<E, S>(rel: &DivRelation<E>, sampler: &S, trials: u64, seed: u64) -> CheckReport
where
    E: RingElement,
    S: Sampler<E>,
{
    let p = rel.prime();
    let zero = |x: &E| x.scalar(&Rational::zero());
    let one = |x: &E| x.scalar(&Rational::from_integer(1.into()));
    let p_elt = move |x: &E| x.scalar(&Rational::from_integer(p.into()));
    let mut lines = Vec::new();

    lines.push(run("1", seed, 1, trials, |rng| {
        let a = &sampler.draw(rng, 1, Stratum::Free)[0];
        Outcome::from_decision(rel.divides(a, a), || witness(&[a]))
    }));

    lines.push(run("2", seed, 2, trials, |rng| {
        let stratum = Stratum::pick(rng);
        let x = sampler.draw(rng, 3, stratum);
        let (a, b, c) = (&x[0], &x[1], &x[2]);
        let d = rel.divides(a, b).and(rel.divides(b, c)).implies(rel.divides(a, c));
        Outcome::from_decision(d, || witness(&[a, b, c]))
    }));

    lines.push(run("3", seed, 3, trials, |rng| {
        let stratum = Stratum::pick(rng);
        let x = sampler.draw(rng, 3, stratum);
        let (a, b, c) = (&x[0], &x[1], &x[2]);
        let diff = tryr!(b.sub(c));
        let d = rel.divides(a, b).and(rel.divides(a, c)).implies(rel.divides(a, &diff));
        Outcome::from_decision(d, || witness(&[a, b, c]))
    }));

    lines.push(run("4", seed, 4, trials, |rng| {
        let stratum = Stratum::pick(rng);
        let x = sampler.draw(rng, 3, stratum);
        let (a, b, c) = (&x[0], &x[1], &x[2]);
        let (ac, bc) = (tryr!(a.mul(c)), tryr!(b.mul(c)));
        let d = rel.divides(a, b).implies(rel.divides(&ac, &bc));
        Outcome::from_decision(d, || witness(&[a, b, c]))
    }));

    lines.push(run("5", seed, 5, trials, |rng| {
        let a = &sampler.draw(rng, 1, Stratum::Free)[0];
        Outcome::from_decision(rel.divides(&zero(a), &one(a)).not(), || "(0) (1)".into())
    }));

    lines.push(run("6", seed, 6, trials, |rng| {
        let a = &sampler.draw(rng, 1, Stratum::Free)[0];
        let pa = tryr!(p_elt(a).mul(a));
        let d = rel.divides(&zero(a), a).not().implies(rel.divides(&pa, a).not());
        Outcome::from_decision(d, || witness(&[a]))
    }));

    lines.push(check_kochen(rel, sampler, trials, seed));

    lines.push(run("8", seed, 8, trials, |rng| {
        let a = &sampler.draw(rng, 1, Stratum::Free)[0];
        let (lo, _) = rel.window();
        let mut undecided = false;
        for m in (lo..=0).rev() {
            match rel.p_power_divides(m, a) {
                Decision::Yes => return Outcome::Pass,
                Decision::Undecided => undecided = true,
                Decision::No => {}
            }
        }
        if undecided {
            Outcome::Undecided
        } else {
            Outcome::Fail(witness(&[a]))
        }
    }));

    CheckReport { lines }
}

/// Axiom (7) alone. Half of the pairs are forced to share their valuation.
pub fn check_kochen<E, S>(rel: &DivRelation<E>, sampler: &S, trials: u64, seed: u64) -> PropertyReport
where
    E: RingElement,
    S: Sampler<E>,
{
    run("7", seed, 7, trials, |rng| {
        let stratum = if rng.gen_bool(0.5) { Stratum::Collide } else { Stratum::pick(rng) };
        let x = sampler.draw(rng, 2, stratum);
        let (a, b) = (&x[0], &x[1]);
        Outcome::from_decision(tryr!(kochen_relation(rel, a, b)), || witness(&[a, b]))
    })
}

/// Axiom (7): `p[(a^p b - b^p a)^2 - (b^(p+1))^2] | (a^p b - b^p a) b^(p+1)`.
///
/// The bracket cancels heavily when `v(a) = v(b)`, so both operands are
/// widened to `2(p+1)N` digits first; the stored representatives are exact,
/// so the widened evaluation is exact as well.
pub fn kochen_relation<E: RingElement>(rel: &DivRelation<E>, a: &E, b: &E) -> crate::Result<Decision> {
    let p = rel.prime();
    let digits = 2 * (p + 1) * rel.precision();
    let (a, b) = (a.widen(digits), b.widen(digits));
    let u = a.pow(p)?.mul(&b)?.sub(&b.pow(p)?.mul(&a)?)?;
    let w = b.pow(p + 1)?;
    let lhs = a
        .scalar(&Rational::from_integer(p.into()))
        .mul(&u.mul(&u)?.sub(&w.mul(&w)?)?)?;
    let rhs = u.mul(&w)?;
    Ok(rel.divides(&lhs, &rhs))
}

/// Totality: `a | b` or `b | a`.
pub fn check_total<E, S>(rel: &DivRelation<E>, sampler: &S, trials: u64, seed: u64) -> PropertyReport
where
    E: RingElement,
    S: Sampler<E>,
{
    run("total", seed, 9, trials, |rng| {
        let x = sampler.draw(rng, 2, Stratum::Free);
        let (a, b) = (&x[0], &x[1]);
        Outcome::from_decision(rel.divides(a, b).or(rel.divides(b, a)), || witness(&[a, b]))
    })
}

/// Cancellation: `0 !| c` and `ac | bc` imply `a | b`.
pub fn check_cancellation<E, S>(rel: &DivRelation<E>, sampler: &S, trials: u64, seed: u64) -> PropertyReport
where
    E: RingElement,
    S: Sampler<E>,
{
    run("cancel", seed, 10, trials, |rng| {
        let stratum = Stratum::pick(rng);
        let x = sampler.draw(rng, 3, stratum);
        let (a, b, c) = (&x[0], &x[1], &x[2]);
        let (ac, bc) = (tryr!(a.mul(c)), tryr!(b.mul(c)));
        let zero = c.scalar(&Rational::zero());
        let premise = rel.divides(&zero, c).not().and(rel.divides(&ac, &bc));
        Outcome::from_decision(premise.implies(rel.divides(a, b)), || witness(&[a, b, c]))
    })
}

/// `a | b  <=>  not (pb | a)` for pairs not both in the support.
pub fn check_complement<E, S>(rel: &DivRelation<E>, sampler: &S, trials: u64, seed: u64) -> PropertyReport
where
    E: RingElement,
    S: Sampler<E>,
{
    let p = Rational::from_integer(rel.prime().into());
    run("complement", seed, 11, trials, |rng| {
        let stratum = Stratum::pick(rng);
        let x = sampler.draw(rng, 2, stratum);
        let (a, b) = (&x[0], &x[1]);
        let zero = a.scalar(&Rational::zero());
        // on the support both sides hold: 0 | 0 and p0 | 0
        match rel.divides(&zero, a).and(rel.divides(&zero, b)) {
            Decision::Yes => return Outcome::Pass,
            Decision::Undecided => return Outcome::Undecided,
            Decision::No => {}
        }
        let pb = tryr!(b.scalar(&p).mul(b));
        let lhs = rel.divides(a, b);
        let rhs = rel.divides(&pb, a).not();
        let d = match (lhs, rhs) {
            (Decision::Undecided, _) | (_, Decision::Undecided) => Decision::Undecided,
            (l, r) => Decision::from_bool(l == r),
        };
        Outcome::from_decision(d, || witness(&[a, b]))
    })
}

fn ord_or_undecided<E: RingElement>(rel: &DivRelation<E>, a: &E) -> Option<Valuation> {
    rel.ord(a).ok()
}

/// Semi-norm laws for `||a|| = p^(-ord a)`, phrased on `ord`:
/// ultrametric, submultiplicative, `||r|| = |r|_p`, `||ra|| = |r|_p ||a||`,
/// power multiplicativity and `p | a^2 => p | a`.
pub fn check_seminorm_laws<E, S>(rel: &DivRelation<E>, sampler: &S, trials: u64, seed: u64) -> CheckReport
where
    E: RingElement,
    S: Sampler<E>,
{
    let p = rel.prime();
    let rationals = RationalSampler::new(p);
    let mut lines = Vec::new();

    macro_rules! ord {
        ($x:expr) => {
            match ord_or_undecided(rel, $x) {
                Some(v) => v,
                None => return Outcome::Undecided,
            }
        };
    }

    lines.push(run("ultrametric", seed, 21, trials, |rng| {
        let stratum = Stratum::pick(rng);
        let x = sampler.draw(rng, 2, stratum);
        let (a, b) = (&x[0], &x[1]);
        let sum = tryr!(a.add(b));
        let d = ord!(a).min(ord!(b)).le(ord!(&sum));
        Outcome::from_decision(d, || witness(&[a, b]))
    }));

    lines.push(run("submultiplicative", seed, 22, trials, |rng| {
        let x = sampler.draw(rng, 2, Stratum::Free);
        let (a, b) = (&x[0], &x[1]);
        let prod = tryr!(a.mul(b));
        let d = ord!(a).add(ord!(b)).le(ord!(&prod));
        Outcome::from_decision(d, || witness(&[a, b]))
    }));

    lines.push(run("rational", seed, 23, trials, |rng| {
        let like = &sampler.draw(rng, 1, Stratum::Free)[0];
        let r = &rationals.draw(rng, 1, Stratum::Free)[0];
        let d = ord!(&like.scalar(r)).eq_decided(vp_rational(r, p));
        Outcome::from_decision(d, || format!("({r})"))
    }));

    lines.push(run("scalar", seed, 24, trials, |rng| {
        let a = &sampler.draw(rng, 1, Stratum::Free)[0];
        let r = &rationals.draw(rng, 1, Stratum::Free)[0];
        if r.is_zero() {
            return Outcome::Pass;
        }
        let ra = tryr!(a.scalar(r).mul(a));
        let d = ord!(&ra).eq_decided(ord!(a).add(vp_rational(r, p)));
        Outcome::from_decision(d, || format!("({r}) ({a})"))
    }));

    lines.push(run("power", seed, 25, trials, |rng| {
        let a = &sampler.draw(rng, 1, Stratum::Free)[0];
        let sq = tryr!(a.mul(a));
        let d = ord!(&sq).eq_decided(ord!(a).scale(2));
        Outcome::from_decision(d, || witness(&[a]))
    }));

    lines.push(run("square-root", seed, 26, trials, |rng| {
        let a = &sampler.draw(rng, 1, Stratum::Free)[0];
        let sq = tryr!(a.mul(a));
        let d = rel.p_power_divides(1, &sq).implies(rel.p_power_divides(1, a));
        Outcome::from_decision(d, || witness(&[a]))
    }));

    CheckReport { lines }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divrel::{canonical_qp, canonical_star, rationals_via_qp};
    use crate::funcring::CompactSpace;
    use crate::padic::PAdic;
    use crate::sampling::{FunctionSampler, PAdicSampler};

    #[test]
    fn report_line_format() {
        let r = PropertyReport {
            id: "7".into(),
            trials: 10,
            pass: 8,
            fail: 1,
            undecided: 1,
            witness: Some("(3^0 * [1])".into()),
        };
        assert_eq!(
            r.to_string(),
            "axiom=7 trials=10 pass=8 fail=1 undecided=1 witness=(3^0 * [1])"
        );
        let clean = PropertyReport::empty("1");
        assert_eq!(clean.to_string(), "axiom=1 trials=0 pass=0 fail=0 undecided=0 witness=-");
    }

    #[test]
    fn merge_is_associative() {
        let mk = |pass, fail, w: Option<&str>| PropertyReport {
            id: "x".into(),
            trials: pass + fail,
            pass,
            fail,
            undecided: 0,
            witness: w.map(String::from),
        };
        let (a, b, c) = (mk(1, 0, None), mk(2, 1, Some("b")), mk(0, 3, Some("c")));
        assert_eq!(
            a.clone().merge(b.clone()).merge(c.clone()),
            a.merge(b.merge(c))
        );
    }

    #[test]
    fn kochen_instance_a_equals_b_equals_one() {
        let rel = canonical_qp(3, 16).unwrap();
        let one = PAdic::one(3, 16);
        assert_eq!(kochen_relation(&rel, &one, &one).unwrap(), Decision::Yes);
    }

    #[test]
    fn canonical_qp_passes_small_run() {
        let rel = canonical_qp(3, 16).unwrap();
        let s = PAdicSampler::new(3, 16);
        let report = check_axioms(&rel, &s, 300, 0);
        assert_eq!(report.lines.len(), 8);
        assert_eq!(report.total_failures(), 0, "{report}");
        assert!(check_total(&rel, &s, 300, 0).is_clean());
        assert!(check_cancellation(&rel, &s, 300, 0).is_clean());
        assert!(check_complement(&rel, &s, 300, 0).is_clean());
        assert_eq!(check_seminorm_laws(&rel, &s, 300, 0).total_failures(), 0);
    }

    #[test]
    fn canonical_star_not_total_no_cancellation() {
        let rel = canonical_star(3, 16, None).unwrap();
        let s = FunctionSampler::new(
            vec![CompactSpace::Finite(2)],
            PAdicSampler::new(3, 16).with_zero_rate(0.15),
        );
        assert_eq!(check_axioms(&rel, &s, 300, 0).total_failures(), 0);
        let total = check_total(&rel, &s, 300, 0);
        assert!(total.fail > 0 && total.witness.is_some());
        let cancel = check_cancellation(&rel, &s, 1000, 0);
        assert!(cancel.fail > 0 && cancel.witness.is_some());
    }

    #[test]
    fn rational_pullback_seminorm() {
        let rel = rationals_via_qp(5, 64).unwrap();
        let s = RationalSampler::new(5);
        let report = check_seminorm_laws(&rel, &s, 300, 4);
        assert_eq!(report.total_failures(), 0, "{report}");
        assert_eq!(report.get("rational").unwrap().pass, 300);
    }

    #[test]
    fn deterministic_given_seed() {
        let rel = canonical_qp(2, 16).unwrap();
        let s = PAdicSampler::new(2, 16);
        let a = check_axioms(&rel, &s, 200, 42).to_string();
        let b = check_axioms(&rel, &s, 200, 42).to_string();
        assert_eq!(a, b);
    }

    #[test]
    fn broken_relation_is_caught() {
        // "v(a) < v(b)" is not reflexive and must fail axiom (1)
        let rel = DivRelation::new("strict", 3, crate::divrel::RingTag::PAdic, 16, |a: &PAdic, b: &PAdic| {
            a.valuation().lt(b.valuation())
        })
        .unwrap();
        let s = PAdicSampler::new(3, 16);
        let report = check_axioms(&rel, &s, 100, 0);
        assert_eq!(report.get("1").unwrap().fail, 100);
        assert!(report.get("1").unwrap().witness.is_some());
    }
}
