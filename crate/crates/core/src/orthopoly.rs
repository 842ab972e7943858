//! Probabilists' Hermite polynomials, generalized Laguerre polynomials with a
//! symbolic shape parameter β, and the connection coefficients
//! `H_{j,n} = E[X^j p_n(X)]` against their orthonormal versions.
//!
//! Laguerre normalization:
//! `L_n(x|β) = Σ_k (-1)^k (β)^(n) / ((n-k)! (β)^(k)) x^k / k!`, so the leading
//! coefficient is `(-1)^n / n!` and `L_n(x|β)` is the textbook `L_n^(β-1)(x)`.
//! The orthonormal versions are `h_n = H_n / sqrt(n!)` and
//! `l_n = sqrt(n! / (β)^(n)) L_n`.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::exactnum::{binomial, double_factorial, factorial, rat_int, Integer, Rational};
use crate::polyalg::{rising_shifted, Monomial, MultiPoly, RationalFn, Var};

fn fact(n: usize) -> Integer {
    factorial(n as i64).expect("nonnegative")
}

fn fact_q(n: usize) -> Rational {
    rat_int(fact(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitePoly {
    pub n: usize,
    /// Polynomial in `x`.
    pub poly: MultiPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaguerrePoly {
    pub n: usize,
    /// Polynomial in `x` and `β`.
    pub poly: MultiPoly,
}

/// `H_0 .. H_n` from `H_{k+1} = x H_k - k H_{k-1}`.
pub fn hermite_table(n: usize) -> Vec<HermitePoly> {
    let x = MultiPoly::var(Var::X);
    let mut out: Vec<HermitePoly> = Vec::with_capacity(n + 1);
    let mut prev = MultiPoly::zero();
    let mut cur = MultiPoly::one();
    for k in 0..=n {
        out.push(HermitePoly {
            n: k,
            poly: cur.clone(),
        });
        let next = &(&x * &cur) - &prev.scale(&rat_int(k as i64));
        prev = std::mem::replace(&mut cur, next);
    }
    out
}

pub fn hermite(n: usize) -> HermitePoly {
    hermite_table(n).pop().expect("table is nonempty")
}

/// `(-1)^k (β+k)^(n-k) / ((n-k)! k!)`, the `x^k` coefficient of `L_n(x|β)`.
fn laguerre_coefficient(n: usize, k: usize) -> MultiPoly {
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let scale = Rational::new(Integer::from(sign), fact(n - k) * fact(k));
    rising_shifted(Var::Beta, k as i64, (n - k) as u32).scale(&scale)
}

pub fn laguerre(n: usize) -> LaguerrePoly {
    let poly = (0..=n)
        .map(|k| &laguerre_coefficient(n, k) * &MultiPoly::term(Rational::one(), Monomial::var(Var::X, k as u32)))
        .sum();
    LaguerrePoly { n, poly }
}

/// `L_n(x | β + shift)`.
pub fn laguerre_shifted(n: usize, shift: i64) -> MultiPoly {
    laguerre(n)
        .poly
        .substitute(Var::Beta, &MultiPoly::shifted_var(Var::Beta, rat_int(shift)))
}

/// Coefficients `c_i` with `x^j = Σ c_i H_i(x)`, listed from `i = j` down.
pub fn monomial_in_hermite(j: usize) -> Vec<(usize, Rational)> {
    (0..=j / 2)
        .map(|m| {
            let den = num_traits::pow(Integer::from(2), m) * fact(m) * fact(j - 2 * m);
            (j - 2 * m, Rational::new(fact(j), den))
        })
        .collect()
}

/// Coefficients `c_k(β)` with `x^j = Σ c_k L_k(x|β)`, for `k = 0 ..= j`.
///
/// `c_k = (-1)^k j!/(j-k)! · (β+k)^(j-k)`.
pub fn monomial_in_laguerre(j: usize) -> Vec<(usize, MultiPoly)> {
    (0..=j)
        .map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let scale = Rational::new(Integer::from(sign) * fact(j), fact(j - k));
            (k, rising_shifted(Var::Beta, k as i64, (j - k) as u32).scale(&scale))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Normal,
    Gamma,
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Case::Normal => "normal",
            Case::Gamma => "gamma",
        })
    }
}

/// `H_{j,n}` with its radical factored out.
///
/// The represented value is `radical_free / sqrt(n!)` in the normal case and
/// `radical_free · sqrt(n! / (β)^(n))` in the gamma case. Every product that
/// leaves this module (see [`mixed_moment_term`]) is radical-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionCoeff {
    pub case: Case,
    pub j: usize,
    pub n: usize,
    pub radical_free: MultiPoly,
}

impl ConnectionCoeff {
    pub fn is_zero(&self) -> bool {
        self.radical_free.is_zero()
    }

    /// `H_{j,n}^2`, which no longer carries a radical.
    pub fn squared(&self) -> RationalFn {
        let c2 = &self.radical_free * &self.radical_free;
        match self.case {
            Case::Normal => RationalFn::from_poly(c2.scale(&fact_q(self.n).recip())),
            Case::Gamma => RationalFn::new(
                c2.scale(&fact_q(self.n)),
                rising_shifted(Var::Beta, 0, self.n as u32),
            )
            .expect("(β)^(n) is a nonzero polynomial"),
        }
    }
}

/// Normal case: `j! / (2^((j-n)/2) ((j-n)/2)!)`, zero when `n > j` or `j - n`
/// is odd.
pub fn connection_normal(j: usize, n: usize) -> ConnectionCoeff {
    let radical_free = if n > j || (j - n) % 2 == 1 {
        MultiPoly::zero()
    } else {
        let h = (j - n) / 2;
        let den = num_traits::pow(Integer::from(2), h) * fact(h);
        MultiPoly::constant(Rational::new(fact(j), den))
    };
    ConnectionCoeff {
        case: Case::Normal,
        j,
        n,
        radical_free,
    }
}

/// Gamma case: `(-1)^n binom(j, n) (β)^(j)`, zero when `n > j`.
pub fn connection_gamma(j: usize, n: usize) -> ConnectionCoeff {
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let c = binomial(j as i64, n as i64) * sign;
    let radical_free = rising_shifted(Var::Beta, 0, j as u32).scale(&rat_int(c));
    ConnectionCoeff {
        case: Case::Gamma,
        j,
        n,
        radical_free,
    }
}

pub fn connection(case: Case, j: usize, n: usize) -> ConnectionCoeff {
    match case {
        Case::Normal => connection_normal(j, n),
        Case::Gamma => connection_gamma(j, n),
    }
}

/// `H_{m,j} H_{l,j}`, the weight of `ρ^j` in `E X^m Y^l`.
///
/// Normal: `c_{m,j} c_{l,j} / j!`. Gamma:
/// `binom(m,j) binom(l,j) (β)^(m) (β)^(l) j! / (β)^(j)`, with the ratio
/// expanded as `(β+j)^(m-j)`.
pub fn mixed_moment_term(case: Case, m: usize, l: usize, j: usize) -> MultiPoly {
    if j > m || j > l {
        return MultiPoly::zero();
    }
    match case {
        Case::Normal => {
            let a = connection_normal(m, j).radical_free;
            let b = connection_normal(l, j).radical_free;
            (&a * &b).scale(&fact_q(j).recip())
        }
        Case::Gamma => {
            let c = binomial(m as i64, j as i64) * binomial(l as i64, j as i64) * fact(j);
            let ratio = rising_shifted(Var::Beta, j as i64, (m - j) as u32);
            let other = rising_shifted(Var::Beta, 0, l as u32);
            (&ratio * &other).scale(&rat_int(c))
        }
    }
}

/// `E X^m Y^l = Σ_j ρ^j H_{m,j} H_{l,j}`, a polynomial in ρ (and β for the
/// gamma case).
pub fn mixed_moment(case: Case, m: usize, l: usize) -> MultiPoly {
    (0..=m.min(l))
        .map(|j| {
            &mixed_moment_term(case, m, l, j)
                * &MultiPoly::term(Rational::one(), Monomial::var(Var::Rho, j as u32))
        })
        .sum()
}

/// `η_j(y|β,ρ) = E(X^j | Y = y) = Σ_m binom(j,m) (β)^(j)/(β)^(m) (ρy)^m (1-ρ)^(j-m)`.
pub fn eta_conditional(j: usize) -> MultiPoly {
    let one_minus_rho = &MultiPoly::one() - &MultiPoly::var(Var::Rho);
    let rho_y = MultiPoly::term(
        Rational::one(),
        Monomial::from_pairs(&[(Var::Rho, 1), (Var::Y, 1)]),
    );
    (0..=j)
        .map(|m| {
            let ratio = rising_shifted(Var::Beta, m as i64, (j - m) as u32)
                .scale(&rat_int(binomial(j as i64, m as i64)));
            &(&ratio * &rho_y.pow(m as u32)) * &one_minus_rho.pow((j - m) as u32)
        })
        .sum()
}

/// `j! (1-ρ)^j L_j(-ρy/(1-ρ) | β)` built by rational substitution.
pub fn eta_laguerre_form(j: usize) -> RationalFn {
    let one_minus_rho = &MultiPoly::one() - &MultiPoly::var(Var::Rho);
    let arg = RationalFn::new(
        -MultiPoly::term(
            Rational::one(),
            Monomial::from_pairs(&[(Var::Rho, 1), (Var::Y, 1)]),
        ),
        one_minus_rho.clone(),
    )
    .expect("1 - ρ is nonzero");
    let l = substitute_ratfn(&laguerre(j).poly, Var::X, &arg);
    let front = RationalFn::from_poly(one_minus_rho.pow(j as u32).scale(&fact_q(j)));
    &front * &l
}

/// Substitutes a quotient `N/D` for `v`, over the common denominator `D^deg`.
pub fn substitute_ratfn(p: &MultiPoly, v: Var, r: &RationalFn) -> RationalFn {
    let deg = p.degree_in(v);
    let num_pows: Vec<MultiPoly> = (0..=deg).map(|e| r.numerator().pow(e)).collect();
    let den_pows: Vec<MultiPoly> = (0..=deg).map(|e| r.denominator().pow(e)).collect();
    let mut num = MultiPoly::zero();
    for e in 0..=deg {
        let coeff = p.coefficient_of(v, e);
        if coeff.is_zero() {
            continue;
        }
        let t = &(&coeff * &num_pows[e as usize]) * &den_pows[(deg - e) as usize];
        num = num + t;
    }
    RationalFn::new(num, den_pows[deg as usize].clone()).expect("power of a nonzero denominator")
}

/// Checks `L_n(y|β) = Σ_{j=0}^{max_j} L_{n-j}(x|β+j) (x-y)^j / j!` exactly in
/// (x, y, β). Terms with `j > n` vanish; a `max_j` below `n` truncates the
/// sum and the check fails for `n > 0`.
pub fn laguerre_shift_check(n: usize, max_j: usize) -> bool {
    let lhs = laguerre(n)
        .poly
        .substitute(Var::X, &MultiPoly::var(Var::Y));
    let x_minus_y = &MultiPoly::var(Var::X) - &MultiPoly::var(Var::Y);
    let rhs: MultiPoly = (0..=max_j.min(n))
        .map(|j| {
            (&laguerre_shifted(n - j, j as i64) * &x_minus_y.pow(j as u32))
                .scale(&fact_q(j).recip())
        })
        .sum();
    lhs == rhs
}

/// `E p(X)` for `X ~ Gamma(β, 1)`: every `v^m` becomes `(β)^(m)`.
pub fn gamma_expectation(p: &MultiPoly, v: Var) -> MultiPoly {
    (0..=p.degree_in(v))
        .map(|m| &p.coefficient_of(v, m) * &rising_shifted(Var::Beta, 0, m))
        .sum()
}

/// `E p(X)` for `X ~ N(0, 1)`: `v^m` becomes `(m-1)!!` for even `m`, else 0.
pub fn normal_expectation(p: &MultiPoly, v: Var) -> MultiPoly {
    (0..=p.degree_in(v))
        .filter(|m| m % 2 == 0)
        .map(|m| {
            p.coefficient_of(v, m)
                .scale(&rat_int(double_factorial(m as i64 - 1).expect("m >= 0")))
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn x() -> MultiPoly {
        MultiPoly::var(Var::X)
    }

    fn b() -> MultiPoly {
        MultiPoly::var(Var::Beta)
    }

    #[test]
    fn hermite_low_degrees() {
        assert_eq!(hermite(0).poly, MultiPoly::one());
        assert_eq!(hermite(1).poly, x());
        assert_eq!(hermite(2).poly, &x().pow(2) - &MultiPoly::one());
        assert_eq!(hermite(3).poly, &x().pow(3) - &x().scale(&rat(3, 1)));
    }

    #[test]
    fn hermite_parity() {
        let minus_x = -x();
        for h in hermite_table(15) {
            let flipped = h.poly.substitute(Var::X, &minus_x);
            let expect = if h.n % 2 == 0 { h.poly.clone() } else { -h.poly.clone() };
            assert_eq!(flipped, expect, "n={}", h.n);
        }
    }

    #[test]
    fn laguerre_low_degrees() {
        assert_eq!(laguerre(0).poly, MultiPoly::one());
        assert_eq!(laguerre(1).poly, &b() - &x());
        let l2 = &(&(&b() * &(&b() + &MultiPoly::one())).scale(&rat(1, 2))
            - &(&(&b() + &MultiPoly::one()) * &x()))
            + &x().pow(2).scale(&rat(1, 2));
        assert_eq!(laguerre(2).poly, l2);
    }

    #[test]
    fn laguerre_leading_coefficient() {
        for n in 0..10 {
            let lead = laguerre(n).poly.coefficient_of(Var::X, n as u32);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(lead, MultiPoly::constant(Rational::new(sign.into(), fact(n))));
        }
    }

    #[test]
    fn monomial_expansion_examples() {
        assert_eq!(monomial_in_hermite(0), vec![(0, rat(1, 1))]);
        assert_eq!(monomial_in_hermite(2), vec![(2, rat(1, 1)), (0, rat(1, 1))]);
        assert_eq!(monomial_in_hermite(3), vec![(3, rat(1, 1)), (1, rat(3, 1))]);
        assert_eq!(monomial_in_laguerre(0), vec![(0, MultiPoly::one())]);
        assert_eq!(
            monomial_in_laguerre(1),
            vec![(0, b()), (1, MultiPoly::from_int(-1))]
        );
        let rebuilt: MultiPoly = monomial_in_laguerre(2)
            .into_iter()
            .map(|(k, c)| &c * &laguerre(k).poly)
            .sum();
        assert_eq!(rebuilt, x().pow(2));
    }

    #[test]
    fn connection_examples() {
        assert_eq!(connection_normal(2, 0).radical_free, MultiPoly::one());
        assert_eq!(connection_normal(3, 1).radical_free, MultiPoly::from_int(3));
        assert!(connection_normal(2, 1).is_zero());
        assert_eq!(connection_gamma(1, 1).radical_free, -b());
        assert_eq!(
            connection_gamma(4, 0).radical_free,
            rising_shifted(Var::Beta, 0, 4)
        );
        assert!(connection_gamma(1, 2).is_zero());
    }

    #[test]
    fn gamma_connection_is_moment_of_laguerre() {
        // E[X^j L_n(X)] with E X^m = (β)^(m) equals the radical-free part.
        for j in 0..=10 {
            for n in 0..=10 {
                let integrand = &x().pow(j as u32) * &laguerre(n).poly;
                assert_eq!(
                    gamma_expectation(&integrand, Var::X),
                    connection_gamma(j, n).radical_free,
                    "j={j} n={n}"
                );
            }
        }
    }

    #[test]
    fn normal_connection_is_moment_of_hermite() {
        // E[X^j H_n(X)] = radical-free part (the h_n = H_n/sqrt(n!) radical is
        // the one the coefficient keeps out).
        let hs = hermite_table(14);
        for j in 0..=14 {
            for (n, h) in hs.iter().enumerate() {
                let integrand = &x().pow(j as u32) * &h.poly;
                assert_eq!(
                    normal_expectation(&integrand, Var::X),
                    connection_normal(j, n).radical_free,
                    "j={j} n={n}"
                );
            }
        }
    }

    #[test]
    fn mixed_moment_term_examples() {
        assert_eq!(mixed_moment_term(Case::Normal, 1, 1, 1), MultiPoly::one());
        assert_eq!(mixed_moment_term(Case::Gamma, 1, 1, 0), b().pow(2));
        assert_eq!(mixed_moment_term(Case::Gamma, 1, 1, 1), b());
    }

    #[test]
    fn mixed_moment_term_matches_squared_coefficients() {
        for case in [Case::Normal, Case::Gamma] {
            for m in 0..=8 {
                for j in 0..=8 {
                    let sq = RationalFn::from_poly(mixed_moment_term(case, m, m, j));
                    assert_eq!(sq, connection(case, m, j).squared(), "{case} m={m} j={j}");
                }
            }
        }
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta_conditional(0), MultiPoly::one());
        let rho = MultiPoly::var(Var::Rho);
        let y = MultiPoly::var(Var::Y);
        let e1 = &(&b() * &(&MultiPoly::one() - &rho)) + &(&rho * &y);
        assert_eq!(eta_conditional(1), e1);
        let at0 = eta_conditional(2).partial_eval(Var::Rho, &rat(0, 1));
        assert_eq!(at0, &b().pow(2) + &b());
    }

    #[test]
    fn eta_limits_and_laguerre_form() {
        for j in 0..=12 {
            let e = eta_conditional(j);
            assert_eq!(
                e.partial_eval(Var::Rho, &rat(1, 1)),
                MultiPoly::var(Var::Y).pow(j as u32)
            );
            assert_eq!(
                e.partial_eval(Var::Rho, &rat(0, 1)),
                rising_shifted(Var::Beta, 0, j as u32)
            );
            assert_eq!(RationalFn::from_poly(e), eta_laguerre_form(j), "j={j}");
        }
    }

    #[test]
    fn laguerre_shift_examples() {
        assert!(laguerre_shift_check(0, 0));
        assert!(laguerre_shift_check(1, 1));
        assert!(laguerre_shift_check(5, 5));
        assert!(laguerre_shift_check(5, 9));
        assert!(!laguerre_shift_check(5, 4));
    }

    #[test]
    fn laguerre_shift_with_printed_sign_fails() {
        // With (y - x)^j instead of (x - y)^j the n = 1 case reads
        // β - y = β + y - 2x, which is false.
        let lhs = laguerre(1).poly.substitute(Var::X, &MultiPoly::var(Var::Y));
        let y_minus_x = &MultiPoly::var(Var::Y) - &x();
        let rhs = &laguerre_shifted(1, 0) + &(&laguerre_shifted(0, 1) * &y_minus_x);
        assert_ne!(lhs, rhs);
    }
}
