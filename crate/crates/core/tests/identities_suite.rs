use idforge::exactnum::{binomial, rat_int, QuadExtNum, Rational};
use idforge::identities::*;
use idforge::polyalg::{rising, rising_shifted, MultiPoly, RationalFn, Var};
use num_traits::One;
use proptest::prelude::*;

fn rho() -> MultiPoly {
    MultiPoly::var(Var::Rho)
}

fn beta() -> MultiPoly {
    MultiPoly::var(Var::Beta)
}

#[test]
fn family_examples() {
    assert_eq!(build_g1(0), (MultiPoly::one(), MultiPoly::one()));
    let two_two_rho = &MultiPoly::from_int(2) + &rho().scale(&rat_int(2));
    assert_eq!(build_g1(1), (two_two_rho.clone(), two_two_rho));
    let (l, r) = build_g2(1);
    assert_eq!(l, &MultiPoly::one() + &rho());
    assert_eq!(r, l);

    let minus_one = RationalFn::from_poly(MultiPoly::from_int(-1));
    assert_eq!(build_ex1(1, 1), (minus_one.clone(), minus_one));
    let (l, r) = build_ex1(2, 0);
    assert!(l.numerator().is_zero() && r.numerator().is_zero());

    let want = (&beta() * &(&MultiPoly::one() - &rho())).scale(&rat_int(2));
    assert_eq!(build_ex2(2), (want.clone(), want.clone()));
    let (l, r) = build_ex3(1);
    assert!(l.is_zero() && r.is_zero());
    assert_eq!(build_ex3(2), (want.clone(), want));
}

#[test]
fn ex2_and_ex3_agree() {
    for n in 0..=10 {
        let (l2, r2) = build_ex2(n);
        let (l3, r3) = build_ex3(n);
        assert_eq!(r2, r3, "n={n}");
        assert_eq!(l2, l3, "n={n}");
    }
}

#[test]
fn coefficientwise_comparison() {
    for n in 0..=10 {
        for (l, r) in [build_ex2(n), build_ex3(n)] {
            let diff = &l - &r;
            for k in 0..=n as u32 {
                assert!(diff.coefficient_of(Var::Rho, k).is_zero(), "n={n} k={k}");
            }
        }
    }
}

#[test]
fn vandermonde_independently() {
    let alpha = MultiPoly::var(Var::Alpha);
    for n in 0..=10u32 {
        let lhs: MultiPoly = (0..=n)
            .map(|m| {
                (&rising(&beta(), n - m) * &rising(&alpha, m))
                    .scale(&rat_int(binomial(n as i64, m as i64)))
            })
            .sum();
        assert_eq!(lhs, rising(&(&alpha + &beta()), n));
    }
    assert!(verify("VANDERMONDE", &params(&[("n", 10)])).unwrap().passed());
}

#[test]
fn documented_special_values() {
    let one = |id: &str, p: &[(&str, i64)]| {
        let (l, r) = lookup(id).unwrap().build(&params(p)).unwrap();
        (l.to_string(), r.to_string())
    };
    assert_eq!(one("R-G1-23", &[("k", 1)]).0, "6");
    assert_eq!(one("R-G1-LUC", &[("k", 1)]), ("2".into(), "2".into()));
    assert_eq!(one("R-G1-I-4N", &[("n", 1)]).1, "1680");
}

#[test]
fn derived_entries_are_rechecked() {
    for d in registry().iter().filter(|d| d.derivation.is_some()) {
        let p: Params = d.params.iter().map(|s| (s.name.to_string(), s.min.max(0).min(s.max))).collect();
        let p = if d.check_params(&p).is_ok() { p } else { continue };
        let r = verify(d.id, &p).unwrap();
        assert!(r.passed(), "{} {:?}", d.id, r.witness);
        assert!(r.derivation_checked, "{}", d.id);
    }
}

#[test]
fn perturbed_fixture_reports_constant_term() {
    let bad = lookup("THM1.i").unwrap().with_perturbed_rhs();
    let r = verify_descriptor(&bad, &params(&[("k", 5)])).unwrap();
    assert_eq!(r.status, Status::Fail);
    assert!(r.witness.unwrap().starts_with("coefficient of 1:"));
}

#[test]
fn negative_m_cells_are_empirical() {
    let r = verify("THM1.iii", &params(&[("n", 4), ("m", -3)])).unwrap();
    assert!(r.empirical);
    let r = verify("THM1.iii", &params(&[("n", 4), ("m", 3)])).unwrap();
    assert!(!r.empirical && r.passed());
}

#[test]
fn grid_is_worker_independent() {
    let ranges = GridRanges { k_max: 8, n_max: 6, m_min: -2, m_max: 4 };
    let ids = ["THM1.i", "THM1.iii", "R-EX2-COEF", "COR-PHI-FIB"];
    let a = verify_grid(&ids, &ranges, 1).unwrap();
    let b = verify_grid(&ids, &ranges, 3).unwrap();
    let key = |v: &[VerificationResult]| v.iter().map(|r| (r.id.clone(), r.params.clone(), r.status)).collect::<Vec<_>>();
    assert_eq!(key(&a), key(&b));
    assert!(a.iter().all(|r| r.passed()));
    assert!(a.iter().any(|r| r.empirical));
}

#[test]
fn fibonacci_lucas_examples() {
    assert_eq!((fibonacci(0), lucas(0)), (0.into(), 2.into()));
    assert_eq!((fibonacci(5), lucas(5)), (5.into(), 11.into()));
    let (f, l) = (fibonacci(3), lucas(3));
    assert_eq!(&l * &l - 5 * &f * &f, (-4).into());
}

#[test]
fn phi_power_law() {
    let phi = QuadExtNum::golden_phi();
    let one_plus = QuadExtNum::from_rational(Rational::one(), 5).unwrap().checked_add(&phi).unwrap();
    let half = Rational::new(1.into(), 2.into());
    for n in 0..=30u64 {
        let fl = fib_lucas(n);
        let p = idforge::exactnum::Scalar::pow(&one_plus, n as u32);
        assert_eq!(p.rational_part(), &(rat_int(fl.l.clone()) * &half));
        assert_eq!(p.radical_part(), &(rat_int(fl.f.clone()) * &half));
        let q = idforge::exactnum::Scalar::pow(&phi, n as u32);
        let sign = rat_int(if n % 2 == 0 { 1 } else { -1 });
        assert_eq!(q.rational_part(), &(rat_int(fl.l) * &half * &sign));
        assert_eq!(q.radical_part(), &(-(rat_int(fl.f) * &half) * &sign));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn poch_addition(n in 0u32..12, m in 0u32..12) {
        let lhs = &rising_shifted(Var::Beta, 0, n) * &rising_shifted(Var::Beta, n as i64, m);
        prop_assert_eq!(lhs, rising(&beta(), n + m));
    }

    #[test]
    fn g1_sides_agree_at_rationals(k in 0i64..25, p in -9i64..9, q in 1i64..5) {
        let (l, r) = build_g1(k);
        let x = Rational::new(p.into(), q.into());
        prop_assert_eq!(l.partial_eval(Var::Rho, &x), r.partial_eval(Var::Rho, &x));
    }

    #[test]
    fn any_in_range_cell_of_a_small_entry_passes(idx in 0usize..34, size in 0i64..7) {
        let d = &registry()[idx % registry().len()];
        let p: Params = d.params.iter().map(|s| (s.name.to_string(), size.clamp(s.min, s.max))).collect();
        prop_assume!(d.check_params(&p).is_ok());
        let r = verify_descriptor(d, &p).unwrap();
        prop_assert!(r.passed(), "{} {:?}: {:?}", d.id, p, r.witness);
    }
}
