//! Exact integers and rationals, the combinatorial primitives used by every
//! identity, and elements of the quadratic fields Q(sqrt d).
//!
//! Conventions: `(-1)!! = 0!! = 1`, `binomial(n, k) = 0` for `0 <= n < k`,
//! and the rising factorial extends to negative order as
//! `(x)^(-k) = 1 / ((x-1)(x-2)...(x-k))`, i.e. `Gamma(x-k)/Gamma(x)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

pub fn int(n: i64) -> Integer {
    Integer::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

pub fn rat_int(n: impl Into<Integer>) -> Rational {
    Rational::from_integer(n.into())
}

/// Reads the shortest decimal form of `x` exactly: `0.3` becomes `3/10`, not
/// the binary expansion of the double.
pub fn rational_from_decimal(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("{x} is not finite")));
    }
    let s = format!("{x}");
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.as_str()),
    };
    let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: Integer = format!("{whole}{frac}")
        .parse()
        .map_err(|_| Error::Domain(format!("cannot read {x} as a decimal")))?;
    let den = num_traits::pow(int(10), frac.len());
    let r = Rational::new(digits, den);
    Ok(if neg { -r } else { r })
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: i64) -> Result<Integer> {
    if n < 0 {
        return Err(Error::Domain(format!("factorial of negative {n}")));
    }
    Ok((2..=n).fold(Integer::one(), |acc, i| acc * i))
}

pub fn double_factorial(n: i64) -> Result<Integer> {
    if n < -1 {
        return Err(Error::Domain(format!("double factorial of {n} < -1")));
    }
    let mut acc = Integer::one();
    let mut i = n;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    Ok(acc)
}

/// Generalized binomial coefficient `n(n-1)...(n-k+1)/k!`, defined for every
/// integer `n`; zero for `k < 0`.
pub fn binomial(n: i64, k: i64) -> Integer {
    if k < 0 {
        return Integer::zero();
    }
    if n >= 0 && k > n {
        return Integer::zero();
    }
    // Use the shorter product for nonnegative n.
    let k = if n >= 0 && k > n - k { n - k } else { k };
    let mut acc = Integer::one();
    for i in 0..k {
        // Exact at each step: acc is binom(n, i) before the update.
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Operations shared by the two coefficient fields that identities are
/// evaluated in: the rationals and a fixed quadratic extension.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Radicand of the field the value lives in, `None` for plain rationals.
    fn field_tag(&self) -> Option<i64>;
    /// Embeds a rational into the same field as `self`.
    fn embed(&self, r: &Rational) -> Self;
    fn is_zero_scalar(&self) -> bool;
    fn checked_inv(&self) -> Result<Self>;

    fn one_like(&self) -> Self {
        self.embed(&Rational::one())
    }

    fn zero_like(&self) -> Self {
        self.embed(&Rational::zero())
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for Rational {
    fn field_tag(&self) -> Option<i64> {
        None
    }

    fn embed(&self, r: &Rational) -> Self {
        r.clone()
    }

    fn is_zero_scalar(&self) -> bool {
        Zero::is_zero(self)
    }

    fn checked_inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

/// Rising factorial `(x)^(n)`. For `n >= 0` this is `x(x+1)...(x+n-1)`; for
/// `n < 0` it is `1/((x-1)(x-2)...(x+n))` and reports a pole when one of
/// those factors vanishes.
pub fn rising_factorial<T: Scalar>(x: &T, n: i64) -> Result<T> {
    let mut acc = x.one_like();
    if n >= 0 {
        for i in 0..n {
            acc = acc * (x.clone() + x.embed(&rat_int(i)));
        }
        return Ok(acc);
    }
    for i in 1..=(-n) {
        let factor = x.clone() - x.embed(&rat_int(i));
        if factor.is_zero_scalar() {
            return Err(Error::Pole {
                x: x.to_string(),
                n,
            });
        }
        acc = acc * factor;
    }
    acc.checked_inv()
}

fn is_squarefree(d: i64) -> bool {
    let mut m = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// `a + b*sqrt(d)` for a fixed squarefree `d` (`d = -1` gives the Gaussian
/// rationals, `d = 5` the golden-ratio field).
///
/// The std operators panic when the two operands live in different fields;
/// the `checked_*` methods report [`Error::MixedField`] instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExtNum {
    a: Rational,
    b: Rational,
    d: i64,
}

impl QuadExtNum {
    pub fn new(a: Rational, b: Rational, d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::BadRadicand(d));
        }
        Ok(Self { a, b, d })
    }

    pub fn from_rational(a: Rational, d: i64) -> Result<Self> {
        Self::new(a, Rational::zero(), d)
    }

    /// `sqrt(d)` itself.
    pub fn sqrt(d: i64) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    /// The imaginary unit in Q(i).
    pub fn i() -> Self {
        Self {
            a: Rational::zero(),
            b: Rational::one(),
            d: -1,
        }
    }

    /// `phi = (sqrt 5 - 1)/2`, which satisfies `phi = 1/(1 + phi)`.
    pub fn golden_phi() -> Self {
        Self {
            a: rat(-1, 2),
            b: rat(1, 2),
            d: 5,
        }
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Coefficient `b` of `sqrt(d)`; the imaginary part when `d = -1`.
    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }

    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    /// `a^2 - d b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rat_int(self.d) * &self.b * &self.b
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::MixedField(self.d, other.d))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d: self.d,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            d: self.d,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let d = rat_int(self.d);
        Ok(Self {
            a: &self.a * &other.a + d * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
            d: self.d,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        self.checked_mul(&other.checked_inv()?)
    }
}

impl fmt::Display for QuadExtNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = if self.d == -1 {
            "i".to_string()
        } else {
            format!("√{}", self.d)
        };
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { '-' } else { '+' };
        let b = self.b.abs();
        let coeff = if b.is_one() {
            String::new()
        } else if b.is_integer() {
            b.to_string()
        } else {
            format!("({b})")
        };
        write!(f, "{} {} {}{}", self.a, sign, coeff, unit)
    }
}

impl Scalar for QuadExtNum {
    fn field_tag(&self) -> Option<i64> {
        Some(self.d)
    }

    fn embed(&self, r: &Rational) -> Self {
        Self {
            a: r.clone(),
            b: Rational::zero(),
            d: self.d,
        }
    }

    fn is_zero_scalar(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn checked_inv(&self) -> Result<Self> {
        // Norm is nonzero for nonzero elements since d is not a square.
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conjugate();
        Ok(Self {
            a: c.a / &n,
            b: c.b / &n,
            d: self.d,
        })
    }
}

macro_rules! quad_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for QuadExtNum {
            type Output = QuadExtNum;
            fn $method(self, rhs: QuadExtNum) -> QuadExtNum {
                self.$checked(&rhs).expect("quadratic field mismatch")
            }
        }
        impl<'a> $trait<&'a QuadExtNum> for &'a QuadExtNum {
            type Output = QuadExtNum;
            fn $method(self, rhs: &'a QuadExtNum) -> QuadExtNum {
                self.$checked(rhs).expect("quadratic field mismatch")
            }
        }
    };
}

quad_binop!(Add, add, checked_add);
quad_binop!(Sub, sub, checked_sub);
quad_binop!(Mul, mul, checked_mul);

impl Neg for QuadExtNum {
    type Output = QuadExtNum;
    fn neg(self) -> QuadExtNum {
        Self {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0).unwrap(), int(1));
        assert_eq!(factorial(5).unwrap(), int(120));
        assert_eq!(factorial(10).unwrap(), int(3_628_800));
        assert!(matches!(factorial(-1), Err(Error::Domain(_))));
    }

    #[test]
    fn double_factorial_conventions() {
        assert_eq!(double_factorial(-1).unwrap(), int(1));
        assert_eq!(double_factorial(0).unwrap(), int(1));
        assert_eq!(double_factorial(7).unwrap(), int(105));
        assert_eq!(double_factorial(8).unwrap(), int(384));
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(2, 5), int(0));
        assert_eq!(binomial(-3, 2), int(6));
        assert_eq!(binomial(-1, 3), int(-1));
        assert_eq!(binomial(7, -1), int(0));
        assert_eq!(binomial(0, 0), int(1));
        assert_eq!(binomial(-4, 0), int(1));
    }

    #[test]
    fn pascal_rule_including_negative_upper() {
        for n in -10..=30 {
            for k in 1..=35 {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn double_factorial_against_factorial() {
        for j in 0..=60i64 {
            let lhs = double_factorial(2 * j - 1).unwrap()
                * num_traits::pow(int(2), j as usize)
                * factorial(j).unwrap();
            assert_eq!(lhs, factorial(2 * j).unwrap(), "j={j}");
        }
    }

    #[test]
    fn rising_factorial_examples() {
        assert_eq!(rising_factorial(&rat(3, 2), 0).unwrap(), rat(1, 1));
        assert_eq!(rising_factorial(&rat(1, 1), 6).unwrap(), rat(720, 1));
        assert_eq!(rising_factorial(&rat(1, 2), 3).unwrap(), rat(15, 8));
        assert_eq!(rising_factorial(&rat(5, 1), -2).unwrap(), rat(1, 12));
    }

    #[test]
    fn rising_factorial_special_values() {
        for n in 0..=20i64 {
            assert_eq!(
                rising_factorial(&rat(1, 1), n).unwrap(),
                rat_int(factorial(n).unwrap())
            );
            let half = Rational::new(
                double_factorial(2 * n - 1).unwrap(),
                num_traits::pow(int(2), n as usize),
            );
            assert_eq!(rising_factorial(&rat(1, 2), n).unwrap(), half);
        }
    }

    #[test]
    fn rising_factorial_pole() {
        assert!(matches!(
            rising_factorial(&rat(2, 1), -3),
            Err(Error::Pole { n: -3, .. })
        ));
        assert!(rising_factorial(&rat(2, 1), -1).is_ok());
    }

    #[test]
    fn pochhammer_addition_law() {
        let xs = [rat(1, 3), rat(-7, 2), rat(5, 1), rat(13, 4), rat(-1, 5)];
        for x in &xs {
            for n in -5..=20i64 {
                for m in -5..=20i64 {
                    let (Ok(a), Ok(b), Ok(c)) = (
                        rising_factorial(x, n),
                        rising_factorial(&(x + rat_int(n)), m),
                        rising_factorial(x, n + m),
                    ) else {
                        continue;
                    };
                    assert_eq!(a * b, c, "x={x} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn rising_factorial_inverse_order() {
        let x = rat(17, 3);
        for n in -5..=12i64 {
            let a = rising_factorial(&x, n).unwrap();
            let b = rising_factorial(&(&x + rat_int(n)), -n).unwrap();
            assert_eq!(a * b, rat(1, 1), "n={n}");
        }
    }

    #[test]
    fn rising_factorial_in_quadratic_field() {
        // (i)^(2) = i(i+1) = -1 + i
        let i = QuadExtNum::i();
        let r = rising_factorial(&i, 2).unwrap();
        assert_eq!(r, QuadExtNum::new(rat(-1, 1), rat(1, 1), -1).unwrap());
        // (i)^(-1) = 1/(i-1) = (-1 - i)/2
        let r = rising_factorial(&i, -1).unwrap();
        assert_eq!(r, QuadExtNum::new(rat(-1, 2), rat(-1, 2), -1).unwrap());
    }

    #[test]
    fn quad_examples() {
        let i = QuadExtNum::i();
        assert_eq!(
            i.checked_mul(&i).unwrap(),
            QuadExtNum::from_rational(rat(-1, 1), -1).unwrap()
        );

        let golden = QuadExtNum::new(rat(1, 2), rat(1, 2), 5).unwrap();
        assert_eq!(
            golden.pow(2),
            QuadExtNum::new(rat(3, 2), rat(1, 2), 5).unwrap()
        );

        let u = QuadExtNum::new(rat(1, 1), rat(1, 1), 5).unwrap();
        assert_eq!(
            u.checked_mul(&u.conjugate()).unwrap(),
            QuadExtNum::from_rational(rat(-4, 1), 5).unwrap()
        );
    }

    #[test]
    fn quad_errors() {
        let i = QuadExtNum::i();
        let s5 = QuadExtNum::sqrt(5).unwrap();
        assert_eq!(i.checked_add(&s5), Err(Error::MixedField(-1, 5)));
        assert_eq!(i.checked_mul(&s5), Err(Error::MixedField(-1, 5)));
        let zero = QuadExtNum::from_rational(rat(0, 1), 5).unwrap();
        assert_eq!(s5.checked_div(&zero), Err(Error::DivisionByZero));
        assert_eq!(QuadExtNum::sqrt(4), Err(Error::BadRadicand(4)));
        assert_eq!(QuadExtNum::sqrt(1), Err(Error::BadRadicand(1)));
        assert_eq!(QuadExtNum::sqrt(0), Err(Error::BadRadicand(0)));
    }

    #[test]
    fn golden_phi_fixed_point() {
        let phi = QuadExtNum::golden_phi();
        let one_plus = phi.one_like() + phi.clone();
        assert_eq!(one_plus.checked_inv().unwrap(), phi);
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(rational_from_decimal(0.3).unwrap(), rat(3, 10));
        assert_eq!(rational_from_decimal(-0.5).unwrap(), rat(-1, 2));
        assert_eq!(rational_from_decimal(2.5).unwrap(), rat(5, 2));
        assert_eq!(rational_from_decimal(1.0).unwrap(), rat(1, 1));
        assert!(rational_from_decimal(f64::NAN).is_err());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(
            a in small_rat(), b in small_rat(), c in small_rat(), e in small_rat(),
            d in prop::sample::select(vec![-1i64, 2, 3, 5, -7])
        ) {
            let u = QuadExtNum::new(a, b, d).unwrap();
            let v = QuadExtNum::new(c, e, d).unwrap();
            prop_assert_eq!(u.checked_mul(&v).unwrap().norm(), u.norm() * v.norm());
        }

        #[test]
        fn division_inverts_multiplication(
            a in small_rat(), b in small_rat(), c in small_rat(), e in small_rat()
        ) {
            let u = QuadExtNum::new(a, b, 5).unwrap();
            let v = QuadExtNum::new(c, e, 5).unwrap();
            prop_assume!(!v.is_zero_scalar());
            let q = u.checked_mul(&v).unwrap().checked_div(&v).unwrap();
            prop_assert_eq!(q, u);
        }
    }
}
