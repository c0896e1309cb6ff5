use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use cxqp::divrel;
use cxqp::funcring::{divides_star, CompactSpace, LCFunction};
use cxqp::hensel::{divides_by_root_criterion, qth_root_trace, verify_root_identity, RootCriterion, RootSpec};
use cxqp::padic::{rational_pow_p, vp_rational, PAdic, Rational};
use cxqp::{Decision, Valuation};

const N: u32 = 24;

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7])
}

fn rational() -> impl Strategy<Value = Rational> {
    (-100_000i64..100_000, 1i64..5_000).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

/// A prime and an element with exact `N`-digit representative.
fn padic() -> impl Strategy<Value = PAdic> {
    prime().prop_flat_map(|p| {
        (-5i64..5, prop::collection::vec(0..p, N as usize), 1..p).prop_map(move |(v, mut digits, lead)| {
            digits[0] = lead;
            PAdic::from_digits(p, v, &digits).unwrap()
        })
    })
}

fn padic_pair() -> impl Strategy<Value = (PAdic, PAdic)> {
    prime().prop_flat_map(|p| {
        let one = move || {
            (-5i64..5, prop::collection::vec(0..p, N as usize), 1..p).prop_map(move |(v, mut d, lead)| {
                d[0] = lead;
                PAdic::from_digits(p, v, &d).unwrap()
            })
        };
        (one(), one())
    })
}

fn embed(r: &Rational, p: u32) -> PAdic {
    PAdic::from_rational(r, p, N).unwrap()
}

fn agree(a: &PAdic, b: &PAdic) -> bool {
    a.sub(b).unwrap().is_zero_to_precision()
}

/// `(1/p)(x^p - x)/((x^p - x)^2 - 1)` computed over the rationals.
fn gamma_oracle(x: &Rational, p: u32) -> Rational {
    let t = num_traits::pow(x.clone(), p as usize) - x;
    let den = &t * &t - Rational::one();
    t / den / Rational::from_integer(p.into())
}

fn function_pair(p: u32, size: usize) -> impl Strategy<Value = (LCFunction, LCFunction)> {
    let value = move || {
        prop_oneof![
            1 => Just(None),
            6 => (-4i64..4, 1i64..10_000).prop_map(Some),
        ]
        .prop_map(move |x| match x {
            None => PAdic::zero(p, N),
            Some((v, u)) => {
                let u = if u % p as i64 == 0 { u + 1 } else { u };
                embed(&(Rational::from_integer(u.into()) * rational_pow_p(p, v)), p)
            }
        })
    };
    let space = CompactSpace::Finite(size);
    (
        prop::collection::vec(value(), size),
        prop::collection::vec(value(), size),
    )
        .prop_map(move |(a, b)| (LCFunction::new(space, p, a).unwrap(), LCFunction::new(space, p, b).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn vp_round_trip(r in nonzero_rational(), p in prime()) {
        prop_assert_eq!(embed(&r, p).valuation(), vp_rational(&r, p));
    }

    #[test]
    fn embed_is_multiplicative(r in rational(), s in rational(), p in prime()) {
        let prod = embed(&r, p).mul(&embed(&s, p)).unwrap();
        prop_assert!(agree(&prod, &embed(&(&r * &s), p)));
        if !(&r * &s).is_zero() {
            prop_assert_eq!(prod.digits(), embed(&(&r * &s), p).digits());
        }
    }

    #[test]
    fn embed_is_additive(r in rational(), s in rational(), p in prime()) {
        let sum = embed(&r, p).add(&embed(&s, p)).unwrap();
        prop_assert!(agree(&sum, &embed(&(&r + &s), p)));
    }

    #[test]
    fn valuation_is_multiplicative((a, b) in padic_pair()) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.valuation(), a.valuation().add(b.valuation()));
        prop_assert_eq!(ab.precision(), Some(N));
    }

    #[test]
    fn ultrametric((a, b) in padic_pair()) {
        let s = a.add(&b).unwrap();
        let m = a.valuation().min(b.valuation());
        prop_assert!(m.le(s.valuation()).is_yes());
        if a.valuation() != b.valuation() {
            prop_assert_eq!(s.valuation(), m);
        }
    }

    #[test]
    fn division_inverts_multiplication((a, b) in padic_pair()) {
        let q = a.mul(&b).unwrap().div(&b).unwrap();
        prop_assert!(agree(&q, &a));
    }

    #[test]
    fn literal_round_trip(a in padic()) {
        let text = a.to_string();
        prop_assert_eq!(PAdic::parse_literal(&text, a.prime(), N).unwrap(), a);
    }

    #[test]
    fn kochen_matches_rational_oracle(x in rational(), p in prime()) {
        let g = embed(&x, p).kochen_gamma().unwrap();
        let oracle = gamma_oracle(&x, p);
        prop_assert!(Valuation::Finite(0).le(vp_rational(&oracle, p)).is_yes());
        prop_assert!(agree(&g, &embed(&oracle, p)), "x={} g={} oracle={}", x, g, oracle);
    }

    #[test]
    fn kochen_is_integral(x in padic()) {
        let g = x.kochen_gamma().unwrap();
        prop_assert!(Valuation::Finite(0).le(g.valuation()).is_yes());
    }

    #[test]
    fn ord_is_valuation_on_qp(a in padic()) {
        let rel = divrel::canonical_qp(a.prime(), N).unwrap();
        prop_assert_eq!(rel.ord(&a).unwrap(), a.valuation());
    }

    #[test]
    fn rational_pullback_ord(r in rational(), p in prime()) {
        let rel = divrel::rationals_via_qp(p, N).unwrap();
        prop_assert_eq!(rel.ord(&r).unwrap(), vp_rational(&r, p));
    }

    #[test]
    fn hensel_root_is_a_root(p in prime(), q in prop::sample::select(vec![2u32, 3, 5, 7]), t in -10_000i64..10_000) {
        prop_assume!(p != q);
        let c = embed(&Rational::from_integer((1 + p as i64 * t).into()), p);
        let (y, trace) = qth_root_trace(&RootSpec::new(q, c.clone(), N).unwrap()).unwrap();
        prop_assert!(agree(&y.pow(q), &c));
        prop_assert_eq!(y.digits()[0], 1);
        let finite: Vec<i64> = trace.iter().filter_map(|v| v.finite()).collect();
        for w in finite.windows(2) {
            prop_assert!(w[1] >= 2 * w[0] || (p == 2 && w[1] > w[0]));
        }
    }

    #[test]
    fn root_criterion_matches_star(
        (p, q, (g, f)) in (prime(), prop::sample::select(vec![2u32, 3, 5]), 1usize..4)
            .prop_flat_map(|(p, q, n)| (Just(p), Just(q), function_pair(p, n)))
    ) {
        prop_assume!(p != q);
        let star = divides_star(&g, &f).unwrap();
        match divides_by_root_criterion(&g, &f, q).unwrap() {
            RootCriterion::Divides(h) => {
                prop_assert_eq!(star, Decision::Yes);
                prop_assert_eq!(verify_root_identity(&h, &g, &f, q).unwrap(), Decision::Yes);
            }
            RootCriterion::Refuted(r) => {
                prop_assert_eq!(star, Decision::No);
                let v = r.vp_rhs.finite().unwrap();
                prop_assert_ne!(v.rem_euclid(q as i64), 0);
                prop_assert_eq!(v, 1 + q as i64 * r.vp_f.finite().unwrap());
            }
        }
    }

    #[test]
    fn star_divisibility_is_pointwise((g, f) in (prime(), 1usize..6).prop_flat_map(|(p, n)| function_pair(p, n))) {
        let expected = g.values().iter().zip(f.values()).all(|(a, b)| a.valuation().le(b.valuation()).is_yes());
        prop_assert_eq!(divides_star(&g, &f).unwrap(), Decision::from_bool(expected));
    }

    #[test]
    fn function_file_round_trip((g, _) in (prime(), 1usize..6).prop_flat_map(|(p, n)| function_pair(p, n))) {
        let text = g.to_file_string();
        prop_assert_eq!(LCFunction::parse_file(&text, N).unwrap(), g);
    }
}
