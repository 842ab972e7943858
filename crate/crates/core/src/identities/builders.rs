//! The five parametric families (G1, G2, Ex1, Ex2, Ex3), each side built
//! from its own formula, and the Fibonacci/Lucas sequences.

use num_traits::{One, Zero};

use crate::exactnum::{binomial, double_factorial, factorial, rat, rat_int, Integer, Rational};
use crate::polyalg::{rising_shifted, Monomial, MultiPoly, RationalFn, ShiftedFactors, Var};

pub(crate) fn q_binom(n: i64, k: i64) -> Rational {
    rat_int(binomial(n, k))
}

pub(crate) fn q_dfact(n: i64) -> Rational {
    rat_int(double_factorial(n).expect("argument >= -1"))
}

pub(crate) fn q_fact(n: i64) -> Rational {
    rat_int(factorial(n).expect("argument >= 0"))
}

pub(crate) fn q_pow(base: i64, e: i64) -> Rational {
    let b = rat_int(base);
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b.recip(), (-e) as usize)
    }
}

pub(crate) fn sign(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub(crate) fn rho() -> MultiPoly {
    MultiPoly::var(Var::Rho)
}

pub(crate) fn rho_pow(e: i64) -> MultiPoly {
    MultiPoly::term(Rational::one(), Monomial::var(Var::Rho, e as u32))
}

pub(crate) fn one_plus_rho() -> MultiPoly {
    &MultiPoly::one() + &rho()
}

pub(crate) fn one_minus_rho() -> MultiPoly {
    &MultiPoly::one() - &rho()
}

/// `(β + shift)^(n)`, `n >= 0`.
pub(crate) fn poch_beta(shift: i64, n: i64) -> MultiPoly {
    rising_shifted(Var::Beta, shift, n as u32)
}

/// `(2k)!/k! (1+ρ)^k` against
/// `Σ_j binom(2k,2j) (1+ρ)^(2k-2j) (1-ρ²)^j (2j-1)!! (2k-2j-1)!!`.
pub fn build_g1(k: i64) -> (MultiPoly, MultiPoly) {
    let lhs = one_plus_rho()
        .pow(k as u32)
        .scale(&(q_fact(2 * k) / q_fact(k)));

    // The rhs coefficients are integers; accumulate them densely.
    let k_us = k as usize;
    let mut acc = vec![Integer::zero(); 2 * k_us + 1];
    for j in 0..=k_us {
        let c = binomial(2 * k, 2 * j as i64)
            * double_factorial(2 * j as i64 - 1).expect("argument >= -1")
            * double_factorial(2 * k - 2 * j as i64 - 1).expect("argument >= -1");
        let plus = binomial_row(2 * (k_us - j));
        let minus_sq = binomial_row(j);
        for (t, b) in minus_sq.iter().enumerate() {
            let cb = if t % 2 == 0 { &c * b } else { -(&c * b) };
            for (i, a) in plus.iter().enumerate() {
                acc[i + 2 * t] += &cb * a;
            }
        }
    }
    let rhs = MultiPoly::from_terms(
        acc.into_iter()
            .enumerate()
            .map(|(i, c)| (Monomial::var(Var::Rho, i as u32), Rational::from_integer(c))),
    );
    (lhs, rhs)
}

/// `binom(n, 0..=n)`.
fn binomial_row(n: usize) -> Vec<Integer> {
    let mut row = vec![Integer::one()];
    for i in 0..n {
        let next = row[i].clone() * Integer::from(n - i) / Integer::from(i + 1);
        row.push(next);
    }
    row
}

/// `(1+ρ)^k` against
/// `2^-k Σ_{j=0}^{2k} Σ_{m=0}^{⌊j/2⌋} (2ρ)^(j-2m) binom(k,j-2m) binom(k-j+2m,m)`.
pub fn build_g2(k: i64) -> (MultiPoly, MultiPoly) {
    let lhs = one_plus_rho().pow(k as u32);
    let mut rhs = MultiPoly::zero();
    for j in 0..=2 * k {
        for m in 0..=j / 2 {
            let e = j - 2 * m;
            let c = q_pow(2, e) * q_binom(k, e) * q_binom(k - j + 2 * m, m);
            if !c.is_zero() {
                rhs = rhs + rho_pow(e).scale(&c);
            }
        }
    }
    (lhs, rhs.scale(&q_pow(2, -k)))
}

/// `Σ_j (-1)^j binom(n,j) (β)^(j+m)/(β)^(j)` against
/// `(-1)^n n! binom(m,n) (β)^(m)/(β)^(n)`, for any integer `m`.
///
/// Both sides are put over the least common denominator of their Pochhammer
/// ratios; for `m >= 0` that denominator is 1.
pub fn build_ex1(n: i64, m: i64) -> (RationalFn, RationalFn) {
    let terms: Vec<(Rational, ShiftedFactors)> = (0..=n)
        .map(|j| {
            let ratio = ShiftedFactors::poch(Var::Beta, j + m).div(&ShiftedFactors::poch(Var::Beta, j));
            (sign(j) * q_binom(n, j), ratio)
        })
        .collect();
    let lhs = ShiftedFactors::sum(Var::Beta, &terms);

    let c = sign(n) * q_fact(n) * q_binom(m, n);
    let ratio = ShiftedFactors::poch(Var::Beta, m).div(&ShiftedFactors::poch(Var::Beta, n));
    let rhs = ShiftedFactors::sum(Var::Beta, &[(c, ratio)]);
    (lhs, rhs)
}

/// Common right-hand side of Ex2 and Ex3:
/// `0` for odd `n`, `n!/(n/2)! (β)^(n/2) (1-ρ)^(n/2)` for even `n`.
pub fn moment_rhs(n: i64) -> MultiPoly {
    if n % 2 == 1 {
        return MultiPoly::zero();
    }
    let h = n / 2;
    (&poch_beta(0, h) * &one_minus_rho().pow(h as u32)).scale(&(q_fact(n) / q_fact(h)))
}

/// `Σ_m (-1)^m binom(n,m) (β)^(m) (β)^(n-m) Σ_k binom(m,k) binom(n-m,k) ρ^k k!/(β)^(k)`,
/// with `(β)^(m)/(β)^(k)` expanded as `(β+k)^(m-k)`.
pub fn build_ex2(n: i64) -> (MultiPoly, MultiPoly) {
    let mut lhs = MultiPoly::zero();
    for m in 0..=n {
        let outer = sign(m) * q_binom(n, m);
        let rest = poch_beta(0, n - m);
        for k in 0..=m.min(n - m) {
            let c = &outer * q_binom(m, k) * q_binom(n - m, k) * q_fact(k);
            let beta_part = &poch_beta(k, m - k) * &rest;
            lhs = lhs + (&beta_part * &rho_pow(k)).scale(&c);
        }
    }
    (lhs, moment_rhs(n))
}

/// `Σ_m (-1)^(n-m) binom(n,m) Σ_j binom(m,j) (1-ρ)^j ρ^(m-j) (β)^(n-j) (β+m-j)^(j)`.
pub fn build_ex3(n: i64) -> (MultiPoly, MultiPoly) {
    let omr = one_minus_rho();
    let omr_pows: Vec<MultiPoly> = (0..=n).map(|j| omr.pow(j as u32)).collect();
    let mut lhs = MultiPoly::zero();
    for m in 0..=n {
        let outer = sign(n - m) * q_binom(n, m);
        for j in 0..=m {
            let c = &outer * q_binom(m, j);
            let beta_part = &poch_beta(0, n - j) * &poch_beta(m - j, j);
            let rho_part = &omr_pows[j as usize] * &rho_pow(m - j);
            lhs = lhs + (&beta_part * &rho_part).scale(&c);
        }
    }
    (lhs, moment_rhs(n))
}

/// Fibonacci and Lucas numbers at one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibLucas {
    pub n: u64,
    pub f: Integer,
    pub l: Integer,
}

pub fn fib_lucas(n: u64) -> FibLucas {
    let (mut f0, mut f1) = (Integer::zero(), Integer::one());
    let (mut l0, mut l1) = (Integer::from(2), Integer::one());
    for _ in 0..n {
        let f2 = &f0 + &f1;
        f0 = std::mem::replace(&mut f1, f2);
        let l2 = &l0 + &l1;
        l0 = std::mem::replace(&mut l1, l2);
    }
    FibLucas { n, f: f0, l: l0 }
}

pub fn fibonacci(n: u64) -> Integer {
    fib_lucas(n).f
}

pub fn lucas(n: u64) -> Integer {
    fib_lucas(n).l
}

pub(crate) fn q_fib(n: i64) -> Rational {
    rat_int(fibonacci(n as u64))
}

pub(crate) fn q_luc(n: i64) -> Rational {
    rat_int(lucas(n as u64))
}

pub(crate) fn half() -> Rational {
    rat(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> MultiPoly {
        MultiPoly::var(Var::Beta)
    }

    #[test]
    fn g1_small_cases() {
        let (l, r) = build_g1(0);
        assert_eq!(l, MultiPoly::one());
        assert_eq!(r, MultiPoly::one());
        let (l, r) = build_g1(1);
        let expect = one_plus_rho().scale(&rat(2, 1));
        assert_eq!(l, expect);
        assert_eq!(r, expect);
        let (l, r) = build_g1(3);
        assert_eq!(l, r);
    }

    #[test]
    fn g2_small_cases() {
        let (l, r) = build_g2(0);
        assert_eq!((l, r), (MultiPoly::one(), MultiPoly::one()));
        let (l, r) = build_g2(1);
        assert_eq!(l, one_plus_rho());
        assert_eq!(r, one_plus_rho());
        let (l, r) = build_g2(6);
        assert_eq!(l, r);
    }

    #[test]
    fn ex1_small_cases() {
        let (l, r) = build_ex1(1, 1);
        let minus_one = RationalFn::from_poly(MultiPoly::from_int(-1));
        assert_eq!(l, minus_one);
        assert_eq!(r, minus_one);
        let (l, r) = build_ex1(2, 0);
        assert!(l.numerator().is_zero());
        assert!(r.numerator().is_zero());
        let (l, r) = build_ex1(3, 5);
        assert_eq!(l, r);
        assert!(l.as_poly().is_some());
    }

    #[test]
    fn ex1_negative_m_is_a_rational_function() {
        // n = 1, m = -1: 1/(β-1) - 1/β on both sides.
        let (l, r) = build_ex1(1, -1);
        let expect = RationalFn::new(MultiPoly::one(), &b() * &(&b() - &MultiPoly::one())).unwrap();
        assert_eq!(l, expect);
        assert_eq!(r, expect);
    }

    #[test]
    fn ex2_small_cases() {
        let (l, r) = build_ex2(1);
        assert!(l.is_zero() && r.is_zero());
        let (l, r) = build_ex2(2);
        let expect = (&b() * &one_minus_rho()).scale(&rat(2, 1));
        assert_eq!(l, expect);
        assert_eq!(r, expect);
        let (l, r) = build_ex2(8);
        assert_eq!(l, r);
    }

    #[test]
    fn ex3_small_cases() {
        let (l, r) = build_ex3(0);
        assert_eq!((l, r), (MultiPoly::one(), MultiPoly::one()));
        let (l, r) = build_ex3(1);
        assert!(l.is_zero() && r.is_zero());
        let (l, r) = build_ex3(2);
        assert_eq!(l, build_ex2(2).0);
        assert_eq!(l, r);
    }

    #[test]
    fn fibonacci_lucas_values() {
        assert_eq!(fibonacci(0), Integer::from(0));
        assert_eq!(lucas(0), Integer::from(2));
        assert_eq!(fibonacci(5), Integer::from(5));
        assert_eq!(lucas(5), Integer::from(11));
        let fl = fib_lucas(3);
        assert_eq!(&fl.l * &fl.l - Integer::from(5) * &fl.f * &fl.f, Integer::from(-4));
    }

    #[test]
    fn fibonacci_lucas_recurrences() {
        for n in 1..60u64 {
            assert_eq!(fibonacci(n + 1), fibonacci(n) + fibonacci(n - 1));
            assert_eq!(lucas(n + 1), lucas(n) + lucas(n - 1));
        }
    }
}
