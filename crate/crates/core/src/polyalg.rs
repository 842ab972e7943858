//! Sparse multivariate polynomials over the rationals in the fixed variable
//! set {ρ, β, α, x, y}, and quotients of them.
//!
//! A [`MultiPoly`] never stores a zero coefficient, so two polynomials are
//! equal exactly when their term maps are equal. [`RationalFn`] equality is
//! decided by cross-multiplication; no GCD normalization is attempted.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{rat_int, Integer, Rational, Scalar};

const NVARS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Var {
    Rho,
    Beta,
    Alpha,
    X,
    Y,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::Rho, Var::Beta, Var::Alpha, Var::X, Var::Y];

    fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Var::Rho => "ρ",
            Var::Beta => "β",
            Var::Alpha => "α",
            Var::X => "x",
            Var::Y => "y",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Exponent vector, ordered lexicographically by (ρ, β, α, x, y).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial([u32; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: Var, e: u32) -> Self {
        let mut m = [0; NVARS];
        m[v.index()] = e;
        Monomial(m)
    }

    pub fn from_pairs(pairs: &[(Var, u32)]) -> Self {
        let mut m = [0; NVARS];
        for &(v, e) in pairs {
            m[v.index()] += e;
        }
        Monomial(m)
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        Monomial(m)
    }

    fn with_exponent(&self, v: Var, e: u32) -> Monomial {
        let mut m = self.0;
        m[v.index()] = e;
        Monomial(m)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Monomial::ONE {
            return f.write_str("1");
        }
        let mut first = true;
        for v in Var::ALL {
            let e = self.exponent(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("·")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A sparse polynomial with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

/// First monomial (in ascending order) at which two polynomials differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermDifference {
    pub monomial: Monomial,
    pub left: Rational,
    pub right: Rational,
}

impl fmt::Display for TermDifference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coefficient of {}: lhs {} vs rhs {}",
            self.monomial, self.left, self.right
        )
    }
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(rat_int(c))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v, 1))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// `v + c`.
    pub fn shifted_var(v: Var, c: Rational) -> Self {
        Self::var(v) + Self::constant(c)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::ONE)
    }

    /// Returns the constant value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut vs = BTreeSet::new();
        for m in self.terms.keys() {
            for v in Var::ALL {
                if m.exponent(v) > 0 {
                    vs.insert(v);
                }
            }
        }
        vs
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a * c))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The coefficient of `v^degree`, as a polynomial in the other variables.
    pub fn coefficient_of(&self, v: Var, degree: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(v) == degree)
                .map(|(m, c)| (m.with_exponent(v, 0), c.clone()))
                .collect(),
        }
    }

    /// Replaces every occurrence of `v` with `replacement`.
    pub fn substitute(&self, v: Var, replacement: &MultiPoly) -> Self {
        let max = self.degree_in(v);
        let mut powers = Vec::with_capacity(max as usize + 1);
        powers.push(Self::one());
        for e in 1..=max as usize {
            powers.push(&powers[e - 1] * replacement);
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            let rest = Self::term(c.clone(), m.with_exponent(v, 0));
            out = out + &rest * &powers[e];
        }
        out
    }

    /// Substitutes a rational value for `v`, leaving the other variables.
    pub fn partial_eval(&self, v: Var, value: &Rational) -> Self {
        self.substitute(v, &Self::constant(value.clone()))
    }

    /// Exact evaluation over the rationals or a quadratic field.
    ///
    /// Every variable of the polynomial must be assigned, and all assigned
    /// values must share one field.
    pub fn eval<T: Scalar>(&self, assignment: &BTreeMap<Var, T>) -> Result<T> {
        let mut tag: Option<Option<i64>> = None;
        for value in assignment.values() {
            let t = value.field_tag();
            match tag {
                None => tag = Some(t),
                Some(prev) if prev != t => {
                    return Err(Error::MixedField(prev.unwrap_or(1), t.unwrap_or(1)));
                }
                _ => {}
            }
        }
        let Some(template) = assignment.values().next() else {
            return match self.as_constant() {
                Some(_) => Err(Error::Domain(
                    "empty assignment gives no field to evaluate in".into(),
                )),
                None => Err(Error::MissingVariable(
                    self.variables().iter().next().unwrap().to_string(),
                )),
            };
        };
        let mut powers: BTreeMap<Var, Vec<T>> = BTreeMap::new();
        for v in self.variables() {
            let x = assignment
                .get(&v)
                .ok_or_else(|| Error::MissingVariable(v.to_string()))?;
            let deg = self.degree_in(v) as usize;
            let mut ps = Vec::with_capacity(deg + 1);
            ps.push(x.one_like());
            for e in 1..=deg {
                let next = ps[e - 1].clone() * x.clone();
                ps.push(next);
            }
            powers.insert(v, ps);
        }
        let mut acc = template.zero_like();
        for (m, c) in &self.terms {
            let mut t = template.embed(c);
            for (v, ps) in &powers {
                let e = m.exponent(*v) as usize;
                if e > 0 {
                    t = t * ps[e].clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// First monomial, in ascending order, where `self` and `other` differ.
    pub fn first_difference(&self, other: &MultiPoly) -> Option<TermDifference> {
        let keys: BTreeSet<&Monomial> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().find_map(|m| {
            let l = self.coefficient(m);
            let r = other.coefficient(m);
            (l != r).then(|| TermDifference {
                monomial: *m,
                left: l,
                right: r,
            })
        })
    }

    fn mul_ref(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // Multiply integer numerators and divide once at the end; this avoids
        // a gcd per partial product.
        let (a, da) = self.integer_form();
        let (b, db) = other.integer_form();
        let mut acc: HashMap<Monomial, Integer> = HashMap::with_capacity(a.len() * b.len());
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                *acc.entry(ma.times(mb)).or_insert_with(Integer::zero) += ca * cb;
            }
        }
        let den = da * db;
        MultiPoly {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Rational::new(c, den.clone())))
                .collect(),
        }
    }

    /// Integer numerators over the lcm of all denominators.
    fn integer_form(&self) -> (Vec<(Monomial, Integer)>, Integer) {
        let den = self
            .terms
            .values()
            .fold(Integer::one(), |d, c| d.lcm(c.denom()));
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.numer() * (&den / c.denom())))
            .collect();
        (terms, den)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if *m == Monomial::ONE {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}·{m}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.mul_ref(rhs)
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        self.mul_ref(&rhs)
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        Self {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -self.clone()
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> MultiPoly {
        iter.fold(MultiPoly::zero(), |a, b| a + b)
    }
}

/// `base (base+1) ... (base+n-1)` for a polynomial `base`.
pub fn rising(base: &MultiPoly, n: u32) -> MultiPoly {
    let mut acc = MultiPoly::one();
    for i in 0..n {
        acc = &acc * &(base + &MultiPoly::from_int(i as i64));
    }
    acc
}

/// `(v + shift)^(n)` for nonnegative `n`.
pub fn rising_shifted(v: Var, shift: i64, n: u32) -> MultiPoly {
    dense_to_poly(v, &dense_shifted_product((0..n as i64).map(|i| (shift + i, 1))))
}

/// Coefficients, constant first, of `∏ (v + s)^e` over integer shifts.
fn dense_shifted_product(factors: impl Iterator<Item = (i64, i64)>) -> Vec<Integer> {
    let mut acc = vec![Integer::one()];
    for (s, e) in factors {
        let s = Integer::from(s);
        for _ in 0..e {
            let mut next = vec![Integer::zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i] += c * &s;
                next[i + 1] += c;
            }
            acc = next;
        }
    }
    acc
}

fn dense_to_poly(v: Var, coeffs: &[Integer]) -> MultiPoly {
    MultiPoly::from_terms(
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::var(v, i as u32), Rational::from_integer(c.clone()))),
    )
}

/// Symbolic rising factorial `(v)^(n)`: a polynomial for `n >= 0`, and
/// `1/((v-1)...(v+n))` for `n < 0`.
pub fn poch_poly(v: Var, n: i64) -> RationalFn {
    ShiftedFactors::poch(v, n).to_ratfn()
}

/// Quotient of two polynomials; the denominator is never zero.
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFn {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.den
    }

    /// The polynomial this quotient represents, when the denominator is a
    /// nonzero constant.
    pub fn as_poly(&self) -> Option<MultiPoly> {
        let c = self.den.as_constant()?;
        Some(self.num.scale(&c.recip()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn checked_div(&self, other: &RationalFn) -> Result<Self> {
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// `num1·den2 - num2·den1`; zero iff the two quotients are equal.
    pub fn cross_difference(&self, other: &RationalFn) -> (MultiPoly, MultiPoly) {
        (&self.num * &other.den, &other.num * &self.den)
    }

    pub fn first_difference(&self, other: &RationalFn) -> Option<TermDifference> {
        let (l, r) = self.cross_difference(other);
        l.first_difference(&r)
    }

    pub fn eval<T: Scalar>(&self, assignment: &BTreeMap<Var, T>) -> Result<T> {
        let d = self.den.eval(assignment)?;
        if d.is_zero_scalar() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(assignment)? * d.checked_inv()?)
    }

    pub fn partial_eval(&self, v: Var, value: &Rational) -> Result<Self> {
        Self::new(self.num.partial_eval(v, value), self.den.partial_eval(v, value))
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        let (l, r) = self.cross_difference(other);
        l == r
    }
}

impl Eq for RationalFn {}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == MultiPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &'a RationalFn) -> RationalFn {
        if self.den == rhs.den {
            return RationalFn {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        RationalFn {
            num: &self.num * &rhs.den + &rhs.num * &self.den,
            den: &self.den * &rhs.den,
        }
    }
}

impl<'a> Sub<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &'a RationalFn) -> RationalFn {
        let neg = RationalFn {
            num: -&rhs.num,
            den: rhs.den.clone(),
        };
        self + &neg
    }
}

impl<'a> Mul<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &'a RationalFn) -> RationalFn {
        RationalFn {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }
}

/// A product `∏ (v + c)^e_c` of shifted copies of one variable with integer
/// exponents. Rising factorials of any order and their ratios live here
/// exactly, and sums of such products can be put over their least common
/// denominator without any polynomial GCD.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedFactors {
    var: Var,
    exps: BTreeMap<i64, i64>,
}

impl ShiftedFactors {
    pub fn one(var: Var) -> Self {
        Self {
            var,
            exps: BTreeMap::new(),
        }
    }

    /// `(var)^(n)` for any integer `n`.
    pub fn poch(var: Var, n: i64) -> Self {
        let mut f = Self::one(var);
        if n >= 0 {
            for i in 0..n {
                f.bump(i, 1);
            }
        } else {
            for i in 1..=(-n) {
                f.bump(-i, -1);
            }
        }
        f
    }

    fn bump(&mut self, shift: i64, by: i64) {
        let e = self.exps.entry(shift).or_insert(0);
        *e += by;
        if *e == 0 {
            self.exps.remove(&shift);
        }
    }

    /// `(var + shift)^(n)` for any integer `n`.
    pub fn poch_at(var: Var, shift: i64, n: i64) -> Self {
        let base = Self::poch(var, n);
        Self {
            var,
            exps: base.exps.into_iter().map(|(s, e)| (s + shift, e)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.var, other.var, "factor variables differ");
        let mut out = self.clone();
        for (&s, &e) in &other.exps {
            out.bump(s, e);
        }
        out
    }

    pub fn div(&self, other: &Self) -> Self {
        assert_eq!(self.var, other.var, "factor variables differ");
        let mut out = self.clone();
        for (&s, &e) in &other.exps {
            out.bump(s, -e);
        }
        out
    }

    fn expand(var: Var, exps: impl Iterator<Item = (i64, i64)>) -> MultiPoly {
        dense_to_poly(var, &dense_shifted_product(exps))
    }

    pub fn to_ratfn(&self) -> RationalFn {
        let num = Self::expand(self.var, self.exps.iter().filter(|(_, e)| **e > 0).map(|(s, e)| (*s, *e)));
        let den = Self::expand(self.var, self.exps.iter().filter(|(_, e)| **e < 0).map(|(s, e)| (*s, -*e)));
        RationalFn { num, den }
    }

    /// `Σ c_i · F_i` over the least common denominator of the `F_i`.
    pub fn sum(var: Var, terms: &[(Rational, ShiftedFactors)]) -> RationalFn {
        let mut lcd: BTreeMap<i64, i64> = BTreeMap::new();
        for (c, f) in terms {
            if c.is_zero() {
                continue;
            }
            for (&s, &e) in &f.exps {
                if e < 0 {
                    let slot = lcd.entry(s).or_insert(0);
                    *slot = (*slot).max(-e);
                }
            }
        }
        let den = Self::expand(var, lcd.iter().map(|(s, e)| (*s, *e)));
        let mut num: Vec<Rational> = Vec::new();
        for (c, f) in terms {
            if c.is_zero() {
                continue;
            }
            // f · lcd has only nonnegative exponents.
            let mut scaled = f.exps.clone();
            for (&s, &e) in &lcd {
                *scaled.entry(s).or_insert(0) += e;
            }
            let p = dense_shifted_product(scaled.into_iter().filter(|(_, e)| *e > 0));
            if num.len() < p.len() {
                num.resize(p.len(), Rational::zero());
            }
            for (slot, q) in num.iter_mut().zip(&p) {
                *slot += c * q;
            }
        }
        let num = MultiPoly::from_terms(
            num.into_iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(var, i as u32), c)),
        );
        RationalFn { num, den }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, QuadExtNum};
    use proptest::prelude::*;

    fn rho() -> MultiPoly {
        MultiPoly::var(Var::Rho)
    }

    fn beta() -> MultiPoly {
        MultiPoly::var(Var::Beta)
    }

    #[test]
    fn ring_examples() {
        let one = MultiPoly::one();
        let a = &one + &rho();
        let b = &one - &rho();
        assert_eq!(&a * &b, &one - &rho().pow(2));
        assert_eq!(a.pow(0), one);
        assert_eq!(
            a.pow(2),
            MultiPoly::from_terms([
                (Monomial::ONE, rat(1, 1)),
                (Monomial::var(Var::Rho, 1), rat(2, 1)),
                (Monomial::var(Var::Rho, 2), rat(1, 1)),
            ])
        );
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = &rho() - &rho();
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
        assert_eq!(MultiPoly::constant(rat(0, 1)), MultiPoly::zero());
    }

    #[test]
    fn pow_agrees_with_repeated_multiplication() {
        let a = &MultiPoly::one() + &rho();
        let mut acc = MultiPoly::one();
        for _ in 0..7 {
            acc = &acc * &a;
        }
        assert_eq!(a.pow(7), acc);
    }

    #[test]
    fn poch_poly_examples() {
        assert_eq!(poch_poly(Var::Beta, 0), RationalFn::from_poly(MultiPoly::one()));
        assert_eq!(
            poch_poly(Var::Beta, 2),
            RationalFn::from_poly(&beta().pow(2) + &beta())
        );
        let inv = RationalFn::new(MultiPoly::one(), &beta() - &MultiPoly::one()).unwrap();
        assert_eq!(poch_poly(Var::Beta, -1), inv);
    }

    #[test]
    fn eval_examples() {
        let p = &MultiPoly::one() - &rho().pow(2);
        let at = BTreeMap::from([(Var::Rho, rat(2, 3))]);
        assert_eq!(p.eval(&at).unwrap(), rat(5, 9));

        let at = BTreeMap::from([(Var::Rho, QuadExtNum::i())]);
        assert_eq!(
            p.eval(&at).unwrap(),
            QuadExtNum::from_rational(rat(2, 1), -1).unwrap()
        );

        let q = &(&p * &beta()) + &MultiPoly::from_int(7);
        let zeros = BTreeMap::from([(Var::Rho, rat(0, 1)), (Var::Beta, rat(0, 1))]);
        assert_eq!(q.eval(&zeros).unwrap(), rat(7, 1));
    }

    #[test]
    fn eval_errors() {
        let p = &rho() * &beta();
        let at = BTreeMap::from([(Var::Rho, rat(1, 2))]);
        assert_eq!(p.eval(&at), Err(Error::MissingVariable("β".into())));

        let mixed = BTreeMap::from([
            (Var::Rho, QuadExtNum::i()),
            (Var::Beta, QuadExtNum::sqrt(5).unwrap()),
        ]);
        assert!(matches!(p.eval(&mixed), Err(Error::MixedField(..))));
    }

    #[test]
    fn ratfn_equality_by_cross_multiplication() {
        let b_over_b = RationalFn::new(beta(), beta()).unwrap();
        assert_eq!(b_over_b, RationalFn::from_poly(MultiPoly::one()));
        assert!(RationalFn::new(beta(), MultiPoly::zero()).is_err());
        let diff = &(&MultiPoly::one() + &rho()).pow(2)
            - &MultiPoly::from_terms([
                (Monomial::ONE, rat(1, 1)),
                (Monomial::var(Var::Rho, 1), rat(2, 1)),
                (Monomial::var(Var::Rho, 2), rat(1, 1)),
            ]);
        assert!(diff.is_zero());
    }

    #[test]
    fn coefficient_of_examples() {
        let p = MultiPoly::from_terms([
            (Monomial::ONE, rat(1, 1)),
            (Monomial::var(Var::Rho, 1), rat(2, 1)),
            (Monomial::from_pairs(&[(Var::Rho, 2), (Var::Beta, 1)]), rat(1, 1)),
        ]);
        assert_eq!(p.coefficient_of(Var::Rho, 2), beta());
        let cube = (&MultiPoly::one() - &rho()).pow(3);
        assert_eq!(cube.coefficient_of(Var::Rho, 2), MultiPoly::from_int(3));
        assert!(MultiPoly::from_int(5).coefficient_of(Var::Rho, 1).is_zero());
    }

    #[test]
    fn substitution() {
        // (1 + ρ)^2 at ρ = x/2
        let p = (&MultiPoly::one() + &rho()).pow(2);
        let half_x = MultiPoly::var(Var::X).scale(&rat(1, 2));
        let q = p.substitute(Var::Rho, &half_x);
        let expect = (&MultiPoly::one() + &half_x).pow(2);
        assert_eq!(q, expect);
    }

    #[test]
    fn first_difference_reports_lowest_monomial() {
        let p = (&MultiPoly::one() + &rho()).pow(3);
        let q = &p + &MultiPoly::one();
        let d = p.first_difference(&q).unwrap();
        assert_eq!(d.monomial, Monomial::ONE);
        assert_eq!(d.left, rat(1, 1));
        assert_eq!(d.right, rat(2, 1));
        assert!(p.first_difference(&p).is_none());
    }

    #[test]
    fn shifted_factor_sums() {
        // 1/(β-1) - 1/β = 1/(β(β-1))
        let terms = [
            (rat(1, 1), ShiftedFactors::poch(Var::Beta, -1)),
            (
                rat(-1, 1),
                ShiftedFactors::poch(Var::Beta, 0).div(&ShiftedFactors::poch(Var::Beta, 1)),
            ),
        ];
        let s = ShiftedFactors::sum(Var::Beta, &terms);
        let expect = RationalFn::new(MultiPoly::one(), &beta() * &(&beta() - &MultiPoly::one())).unwrap();
        assert_eq!(s, expect);
        assert_eq!(s.denominator().degree_in(Var::Beta), 2);
    }

    #[test]
    fn shifted_factor_poch_matches_product() {
        for n in -6..=8i64 {
            let direct = if n >= 0 {
                RationalFn::from_poly(rising(&beta(), n as u32))
            } else {
                let mut den = MultiPoly::one();
                for i in 1..=(-n) {
                    den = &den * &MultiPoly::shifted_var(Var::Beta, rat_int(-i));
                }
                RationalFn::new(MultiPoly::one(), den).unwrap()
            };
            assert_eq!(poch_poly(Var::Beta, n), direct, "n={n}");
        }
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        let term = (
            -9i64..10,
            1i64..4,
            0u32..=8,
            0u32..=8,
            0u32..=2,
        )
            .prop_map(|(n, d, er, eb, ex)| {
                (
                    Monomial::from_pairs(&[(Var::Rho, er), (Var::Beta, eb), (Var::X, ex)]),
                    rat(n, d),
                )
            });
        prop::collection::vec(term, 0..=6).prop_map(MultiPoly::from_terms)
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..7).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn eval_is_a_ring_homomorphism(
            a in arb_poly(), b in arb_poly(), r in arb_rat(), s in arb_rat(), t in arb_rat(),
            qa in arb_rat(), qb in arb_rat()
        ) {
            let at = BTreeMap::from([(Var::Rho, r), (Var::Beta, s), (Var::X, t)]);
            prop_assert_eq!(
                (&a * &b).eval(&at).unwrap(),
                a.eval(&at).unwrap() * b.eval(&at).unwrap()
            );
            let q = |x: Rational| QuadExtNum::new(x, qb.clone(), 5).unwrap();
            let at5 = BTreeMap::from([
                (Var::Rho, q(qa.clone())),
                (Var::Beta, q(qa.clone() + rat(1, 1))),
                (Var::X, q(qa.clone() - rat(1, 3))),
            ]);
            prop_assert_eq!(
                (&a * &b).eval(&at5).unwrap(),
                a.eval(&at5).unwrap() * b.eval(&at5).unwrap()
            );
        }

        #[test]
        fn coefficients_reconstruct(a in arb_poly()) {
            let rebuilt: MultiPoly = (0..=a.degree_in(Var::Rho))
                .map(|d| &a.coefficient_of(Var::Rho, d) * &rho().pow(d))
                .sum();
            prop_assert_eq!(rebuilt, a);
        }
    }
}
