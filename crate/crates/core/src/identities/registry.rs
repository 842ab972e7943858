//! The registered identities.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::builders::*;
use super::{
    Constraint, Derivation, IdentityDescriptor, ParamSpec, Params, Ring, Value, K_CAP, N_CAP,
};
use crate::error::{Error, Result};
use crate::exactnum::{rat, rat_int, QuadExtNum, Rational};
use crate::polyalg::{rising, MultiPoly, ShiftedFactors, Var};

static REGISTRY: OnceLock<Vec<IdentityDescriptor>> = OnceLock::new();

/// All registered identities, families first.
pub fn registry() -> &'static [IdentityDescriptor] {
    REGISTRY.get_or_init(build_registry)
}

pub fn lookup(id: &str) -> Result<&'static IdentityDescriptor> {
    registry()
        .iter()
        .find(|d| d.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

fn get(p: &Params, name: &str) -> i64 {
    p[name]
}

fn num(r: Rational) -> Value {
    Value::Number(r)
}

fn even(n: i64) -> bool {
    n % 2 == 0
}

/// `1/n!`, zero for negative `n`.
fn inv_fact(n: i64) -> Rational {
    if n < 0 {
        Rational::zero()
    } else {
        q_fact(n).recip()
    }
}

type Pair = Arc<(MultiPoly, MultiPoly)>;

fn cached(family: u8, n: i64, build: fn(i64) -> (MultiPoly, MultiPoly)) -> Pair {
    static CACHE: OnceLock<Mutex<HashMap<(u8, i64), Pair>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&(family, n)) {
        return hit.clone();
    }
    let built = Arc::new(build(n));
    cache.lock().unwrap().insert((family, n), built.clone());
    built
}

fn g1(k: i64) -> Pair {
    cached(1, k, build_g1)
}

fn g2(k: i64) -> Pair {
    cached(2, k, build_g2)
}

fn ex2(n: i64) -> Pair {
    cached(4, n, build_ex2)
}

fn ex3(n: i64) -> Pair {
    cached(5, n, build_ex3)
}

fn at_rho(p: &MultiPoly, r: Rational) -> MultiPoly {
    p.partial_eval(Var::Rho, &r)
}

fn constant(p: &MultiPoly) -> Result<Rational> {
    p.as_constant()
        .ok_or_else(|| Error::Domain(format!("expected a constant, got {p}")))
}

fn at_rho_quad(p: &MultiPoly, x: &QuadExtNum) -> Result<QuadExtNum> {
    p.eval(&BTreeMap::from([(Var::Rho, x.clone())]))
}

/// Both sides of a family at a rational `ρ`, times `scale`.
fn family_at(pair: &Pair, r: Rational, scale: &Rational) -> Result<(Rational, Rational)> {
    Ok((
        constant(&at_rho(&pair.0, r.clone()))? * scale,
        constant(&at_rho(&pair.1, r))? * scale,
    ))
}

fn family_at_quad(pair: &Pair, x: &QuadExtNum) -> Result<(QuadExtNum, QuadExtNum)> {
    Ok((at_rho_quad(&pair.0, x)?, at_rho_quad(&pair.1, x)?))
}

fn ex1_at_beta(n: i64, m: i64, b: Rational) -> Result<(Rational, Rational)> {
    let (l, r) = build_ex1(n, m);
    let at = BTreeMap::from([(Var::Beta, b)]);
    Ok((l.eval(&at)?, r.eval(&at)?))
}

fn k_param() -> ParamSpec {
    ParamSpec { name: "k", min: 0, max: K_CAP }
}

fn n_param(min: i64) -> ParamSpec {
    ParamSpec { name: "n", min, max: N_CAP }
}

/// `n` for entries whose family index grows like `4n`.
fn n4_param() -> ParamSpec {
    ParamSpec { name: "n", min: 0, max: 30 }
}

const K_LE_N: Constraint = Constraint {
    text: "k <= n",
    holds: |p| p["k"] <= p["n"],
};

struct Entry {
    id: &'static str,
    title: &'static str,
    params: Vec<ParamSpec>,
    ring: Ring,
    paper_ref: &'static str,
    sides: fn(&Params) -> Result<(Value, Value)>,
}

impl Entry {
    fn done(self) -> IdentityDescriptor {
        let f = self.sides;
        IdentityDescriptor {
            id: self.id,
            title: self.title,
            params: self.params,
            constraint: None,
            ring: self.ring,
            paper_ref: self.paper_ref,
            sides: Arc::new(f),
            empirical: None,
            derivation: None,
        }
    }

    fn derived(
        self,
        parent: &'static str,
        note: &'static str,
        derive: fn(&Params) -> Result<(Value, Value)>,
    ) -> IdentityDescriptor {
        IdentityDescriptor {
            derivation: Some(Derivation { parent, note, derive }),
            ..self.done()
        }
    }
}

fn poly(p: MultiPoly) -> Value {
    Value::Poly(p)
}

fn build_registry() -> Vec<IdentityDescriptor> {
    use Var::*;
    let mut out = vec![
        Entry {
            id: "THM1.i",
            title: "(2k)!/k! (1+ρ)^k as a sum of double-factorial terms",
            params: vec![k_param()],
            ring: Ring::Polynomial(vec![Rho]),
            paper_ref: "Eq. (G1)",
            sides: |p| {
                let (l, r) = build_g1(get(p, "k"));
                Ok((poly(l), poly(r)))
            },
        }
        .done(),
        Entry {
            id: "THM1.ii",
            title: "(1+ρ)^k as a double sum of binomial products",
            params: vec![k_param()],
            ring: Ring::Polynomial(vec![Rho]),
            paper_ref: "Eq. (G2)",
            sides: |p| {
                let (l, r) = build_g2(get(p, "k"));
                Ok((poly(l), poly(r)))
            },
        }
        .done(),
        IdentityDescriptor {
            empirical: Some(|p| p["m"] < 0),
            ..Entry {
                id: "THM1.iii",
                title: "alternating sum of Pochhammer ratios (β)^(j+m)/(β)^(j)",
                params: vec![n_param(0), ParamSpec { name: "m", min: -N_CAP, max: N_CAP }],
                ring: Ring::RationalFunction(vec![Beta]),
                paper_ref: "Eq. (Ex1)",
                sides: |p| {
                    let (l, r) = build_ex1(get(p, "n"), get(p, "m"));
                    Ok((Value::RatFn(l), Value::RatFn(r)))
                },
            }
            .done()
        },
        Entry {
            id: "THM1.iv",
            title: "E(X-Y)^n for the bivariate gamma law, mixed-moment form",
            params: vec![n_param(0)],
            ring: Ring::Polynomial(vec![Rho, Beta]),
            paper_ref: "Eq. (Ex2)",
            sides: |p| {
                let (l, r) = build_ex2(get(p, "n"));
                Ok((poly(l), poly(r)))
            },
        }
        .done(),
        Entry {
            id: "THM1.v",
            title: "E(X-Y)^n for the bivariate gamma law, conditional-moment form",
            params: vec![n_param(0)],
            ring: Ring::Polynomial(vec![Rho, Beta]),
            paper_ref: "Eq. (Ex3)",
            sides: |p| {
                let (l, r) = build_ex3(get(p, "n"));
                Ok((poly(l), poly(r)))
            },
        }
        .done(),
    ];

    out.extend(g1_remarks());
    out.extend(g2_remarks());
    out.extend(ex1_remarks());
    out.extend(ex2_remarks());
    out.extend(ex3_remarks());
    out.extend(golden_ratio());
    out
}

/// `Σ_{j=0}^{k} binom(2k,2j) w^j (2j-1)!! (2k-2j-1)!!`.
fn weighted_g1_sum(k: i64, w: i64) -> Rational {
    (0..=k)
        .map(|j| q_binom(2 * k, 2 * j) * q_pow(w, j) * q_dfact(2 * j - 1) * q_dfact(2 * k - 2 * j - 1))
        .sum()
}

fn g1_remarks() -> Vec<IdentityDescriptor> {
    vec![
        Entry {
            id: "R-G1-23",
            title: "Σ binom(2k,2j) 5^j (2j-1)!!(2k-2j-1)!! = (2k)! 3^k / k!",
            params: vec![k_param()],
            ring: Ring::Integer,
            paper_ref: "(G1) at rho = 2/3",
            sides: |p| {
                let k = get(p, "k");
                Ok((num(weighted_g1_sum(k, 5)), num(q_fact(2 * k) * q_pow(3, k) / q_fact(k))))
            },
        }
        .derived("THM1.i", "rho = 2/3, times 9^k/5^k", |p| {
            let k = get(p, "k");
            let (l, r) = family_at(&g1(k), rat(2, 3), &(q_pow(9, k) / q_pow(5, k)))?;
            Ok((num(r), num(l)))
        }),
        Entry {
            id: "R-G1-13",
            title: "Σ binom(2k,2j) 2^j (2j-1)!!(2k-2j-1)!! = (2k)! 3^k / (k! 2^k)",
            params: vec![k_param()],
            ring: Ring::Integer,
            paper_ref: "(G1) at rho = 1/3",
            sides: |p| {
                let k = get(p, "k");
                Ok((
                    num(weighted_g1_sum(k, 2)),
                    num(q_fact(2 * k) * q_pow(3, k) / (q_fact(k) * q_pow(2, k))),
                ))
            },
        }
        .derived("THM1.i", "rho = 1/3, times 9^k/8^k", |p| {
            let k = get(p, "k");
            let (l, r) = family_at(&g1(k), rat(1, 3), &(q_pow(9, k) / q_pow(8, k)))?;
            Ok((num(r), num(l)))
        }),
        Entry {
            id: "R-G1-43",
            title: "Σ binom(2k,2j) (-7)^j (2j-1)!!(2k-2j-1)!! = (-1)^k (2k)! 3^k / k!",
            params: vec![k_param()],
            ring: Ring::Integer,
            paper_ref: "(G1) at rho = 4/3",
            sides: |p| {
                let k = get(p, "k");
                Ok((
                    num(weighted_g1_sum(k, -7)),
                    num(sign(k) * q_fact(2 * k) * q_pow(3, k) / q_fact(k)),
                ))
            },
        }
        .derived("THM1.i", "rho = 4/3, times (-9/7)^k", |p| {
            let k = get(p, "k");
            let (l, r) = family_at(&g1(k), rat(4, 3), &(q_pow(-9, k) / q_pow(7, k)))?;
            Ok((num(r), num(l)))
        }),
        Entry {
            id: "R-G1-LUC",
            title: "(2k)!/k! L_k = 2^k Σ binom(2k,2j) (-1)^j L_(2k-2j) (2j-1)!!(2k-2j-1)!!",
            params: vec![k_param()],
            ring: Ring::Integer,
            paper_ref: "(G1) at rho = sqrt(5), rational part",
            sides: |p| {
                let k = get(p, "k");
                Ok((num(q_fact(2 * k) / q_fact(k) * q_luc(k)), num(lucas_fib_g1_sum(k, q_luc))))
            },
        }
        .derived("THM1.i", "rho = sqrt(5), rational part times 2^(1-k)", |p| {
            let k = get(p, "k");
            let (l, r) = family_at_quad(&g1(k), &QuadExtNum::sqrt(5)?)?;
            let s = q_pow(2, 1 - k);
            Ok((num(l.rational_part() * &s), num(r.rational_part() * &s)))
        }),
        Entry {
            id: "R-G1-FIB",
            title: "(2k)!/k! F_k = 2^k Σ binom(2k,2j) (-1)^j F_(2k-2j) (2j-1)!!(2k-2j-1)!!",
            params: vec![k_param()],
            ring: Ring::Integer,
            paper_ref: "(G1) at rho = sqrt(5), irrational part",
            sides: |p| {
                let k = get(p, "k");
                Ok((num(q_fact(2 * k) / q_fact(k) * q_fib(k)), num(lucas_fib_g1_sum(k, q_fib))))
            },
        }
        .derived("THM1.i", "rho = sqrt(5), sqrt(5) part times 2^(1-k)", |p| {
            let k = get(p, "k");
            let (l, r) = family_at_quad(&g1(k), &QuadExtNum::sqrt(5)?)?;
            let s = q_pow(2, 1 - k);
            Ok((num(l.radical_part() * &s), num(r.radical_part() * &s)))
        }),
        Entry {
            id: "R-G1-I-4N",
            title: "(8n)!/(4n)! = Σ binom(8n,2j) (2j-1)!!(8n-2j-1)!!",
            params: vec![n4_param()],
            ring: Ring::Integer,
            paper_ref: "(G1) at rho = i, k = 4n",
            sides: |p| {
                let n = get(p, "n");
                Ok((num(q_fact(8 * n) / q_fact(4 * n)), num(weighted_g1_sum(4 * n, 1))))
            },
        }
        .derived("THM1.i", "rho = i, k = 4n, real part over (-4)^n", |p| {
            let n = get(p, "n");
            let (l, r) = family_at_quad(&g1(4 * n), &QuadExtNum::i())?;
            let s = q_pow(-4, -n);
            Ok((num(l.rational_part() * &s), num(r.rational_part() * &s)))
        }),
        Entry {
            id: "R-G1-I-4N1-A",
            title: "(8n+2)!/(4n+1)! (-4)^n = 2^(4n+1) Σ (-1)^m binom(8n+2,4m+2) (4m+1)!!(8n-4m-1)!!",
            params: vec![n4_param()],
            ring: Ring::Integer,
            paper_ref: "(G1) at rho = i, k = 4n+1, real part",
            sides: |p| {
                let n = get(p, "n");
                let sum: Rational = (0..=2 * n)
                    .map(|m| {
                        sign(m)
                            * q_binom(8 * n + 2, 4 * m + 2)
                            * q_dfact(4 * m + 1)
                            * q_dfact(8 * n - 4 * m - 1)
                    })
                    .sum();
                Ok((
                    num(q_fact(8 * n + 2) / q_fact(4 * n + 1) * q_pow(-4, n)),
                    num(q_pow(2, 4 * n + 1) * sum),
                ))
            },
        }
        .derived("THM1.i", "rho = i, k = 4n+1, real part", |p| {
            let (l, r) = family_at_quad(&g1(4 * get(p, "n") + 1), &QuadExtNum::i())?;
            Ok((num(l.rational_part().clone()), num(r.rational_part().clone())))
        }),
        Entry {
            id: "R-G1-I-4N1-B",
            title: "(8n+2)!/(4n+1)! (-4)^n = 2^(4n+1) Σ (-1)^m binom(8n+2,4m) (4m-1)!!(8n-4m+1)!!",
            params: vec![n4_param()],
            ring: Ring::Integer,
            paper_ref: "(G1) at rho = i, k = 4n+1, imaginary part",
            sides: |p| {
                let n = get(p, "n");
                let sum: Rational = (0..=2 * n)
                    .map(|m| {
                        sign(m)
                            * q_binom(8 * n + 2, 4 * m)
                            * q_dfact(4 * m - 1)
                            * q_dfact(8 * n - 4 * m + 1)
                    })
                    .sum();
                Ok((
                    num(q_fact(8 * n + 2) / q_fact(4 * n + 1) * q_pow(-4, n)),
                    num(q_pow(2, 4 * n + 1) * sum),
                ))
            },
        }
        .derived("THM1.i", "rho = i, k = 4n+1, imaginary part", |p| {
            let (l, r) = family_at_quad(&g1(4 * get(p, "n") + 1), &QuadExtNum::i())?;
            Ok((num(l.radical_part().clone()), num(r.radical_part().clone())))
        }),
    ]
}

/// `2^k Σ_j binom(2k,2j) (-1)^j s(2k-2j) (2j-1)!!(2k-2j-1)!!`.
fn lucas_fib_g1_sum(k: i64, s: fn(i64) -> Rational) -> Rational {
    let sum: Rational = (0..=k)
        .map(|j| {
            q_binom(2 * k, 2 * j) * sign(j) * s(2 * k - 2 * j) * q_dfact(2 * j - 1) * q_dfact(2 * k - 2 * j - 1)
        })
        .sum();
    q_pow(2, k) * sum
}

/// `Σ_{j=0}^{4n} (-1)^j Σ_{m=0}^{j} (-1)^m 4^(j-m) binom(4n, 2j-2m+odd) binom(4n-2j-odd+2m, m)`.
fn g2_i_sum(n: i64, odd: i64) -> Rational {
    let mut acc = Rational::zero();
    for j in 0..=4 * n {
        let mut inner = Rational::zero();
        for m in 0..=j {
            inner += sign(m)
                * q_pow(4, j - m)
                * q_binom(4 * n, 2 * j - 2 * m + odd)
                * q_binom(4 * n - 2 * j - odd + 2 * m, m);
        }
        acc += sign(j) * inner;
    }
    acc
}

fn g2_remarks() -> Vec<IdentityDescriptor> {
    vec![
        Entry {
            id: "R-G2-HALF",
            title: "1 = Σ_j (-1)^j Σ_m binom(k,j-2m) binom(k-j+2m,m)",
            params: vec![k_param()],
            ring: Ring::Integer,
            paper_ref: "(G2) at rho = -1/2",
            sides: |p| {
                let k = get(p, "k");
                let mut acc = Rational::zero();
                for j in 0..=2 * k {
                    for m in 0..=j / 2 {
                        acc += sign(j) * q_binom(k, j - 2 * m) * q_binom(k - j + 2 * m, m);
                    }
                }
                Ok((Value::int(1), num(acc)))
            },
        }
        .derived("THM1.ii", "rho = -1/2, times 2^k", |p| {
            let k = get(p, "k");
            let (l, r) = family_at(&g2(k), rat(-1, 2), &q_pow(2, k))?;
            Ok((num(l), num(r)))
        }),
        Entry {
            id: "R-G2-I-RE",
            title: "4^n = (-1)^n 16^-n Σ_j (-1)^j Σ_m (-1)^m 4^(j-m) binom(4n,2j-2m) binom(4n-2j+2m,m)",
            params: vec![n4_param()],
            ring: Ring::Integer,
            paper_ref: "(G2) at rho = i, k = 4n, real part",
            sides: |p| {
                let n = get(p, "n");
                Ok((num(q_pow(4, n)), num(sign(n) * q_pow(16, -n) * g2_i_sum(n, 0))))
            },
        }
        .derived("THM1.ii", "rho = i, k = 4n, real part times (-1)^n", |p| {
            let n = get(p, "n");
            let (l, r) = family_at_quad(&g2(4 * n), &QuadExtNum::i())?;
            Ok((num(l.rational_part() * sign(n)), num(r.rational_part() * sign(n))))
        }),
        Entry {
            id: "R-G2-I-IM",
            title: "0 = Σ_j (-1)^j Σ_m (-1)^m 4^(j-m) binom(4n,2j-2m+1) binom(4n-2j-1+2m,m)",
            params: vec![n4_param()],
            ring: Ring::Integer,
            paper_ref: "(G2) at rho = i, k = 4n, imaginary part",
            sides: |p| Ok((Value::int(0), num(g2_i_sum(get(p, "n"), 1)))),
        }
        .derived("THM1.ii", "rho = i, k = 4n, imaginary part times 2^(4n-1)", |p| {
            let n = get(p, "n");
            let (l, r) = family_at_quad(&g2(4 * n), &QuadExtNum::i())?;
            let s = q_pow(2, 4 * n - 1);
            Ok((num(l.radical_part() * &s), num(r.radical_part() * &s)))
        }),
    ]
}

fn ex1_remarks() -> Vec<IdentityDescriptor> {
    vec![
        Entry {
            id: "R-EX1-B1",
            title: "Σ (-1)^j binom(n,j) binom(j+k,j) = (-1)^n binom(k,n)",
            params: vec![n_param(0), k_param()],
            ring: Ring::Integer,
            paper_ref: "(Ex1) at beta = 1, m = k",
            sides: |p| {
                let (n, k) = (get(p, "n"), get(p, "k"));
                let l: Rational = (0..=n).map(|j| sign(j) * q_binom(n, j) * q_binom(j + k, j)).sum();
                Ok((num(l), num(sign(n) * q_binom(k, n))))
            },
        }
        .derived("THM1.iii", "beta = 1, m = k, divided by k!", |p| {
            let (n, k) = (get(p, "n"), get(p, "k"));
            let (l, r) = ex1_at_beta(n, k, Rational::one())?;
            let s = q_fact(k).recip();
            Ok((num(l * &s), num(r * s)))
        }),
        Entry {
            id: "R-EX1-B12",
            title: "Σ (-1)^j (2n-1)!!(2j+2k-1)!!/(j!(n-j)!(2j-1)!!) = (-1)^n 2^n binom(k,n) (2k-1)!!",
            params: vec![n_param(0), k_param()],
            ring: Ring::Rational,
            paper_ref: "(Ex1) at beta = 1/2, m = k",
            sides: |p| {
                let (n, k) = (get(p, "n"), get(p, "k"));
                let l: Rational = (0..=n)
                    .map(|j| {
                        sign(j) * q_dfact(2 * n - 1) * q_dfact(2 * j + 2 * k - 1)
                            / (q_fact(j) * q_fact(n - j) * q_dfact(2 * j - 1))
                    })
                    .sum();
                Ok((num(l), num(sign(n) * q_pow(2, n) * q_binom(k, n) * q_dfact(2 * k - 1))))
            },
        }
        .derived("THM1.iii", "beta = 1/2, m = k, times 2^k (2n-1)!!/n!", |p| {
            let (n, k) = (get(p, "n"), get(p, "k"));
            let (l, r) = ex1_at_beta(n, k, half())?;
            let s = q_pow(2, k) * q_dfact(2 * n - 1) / q_fact(n);
            Ok((num(l * &s), num(r * s)))
        }),
        Entry {
            id: "R-EX2-B12",
            title: "Σ (-1)^(n-j) binom(n,j) (2n+2k+2j-1)!!/(2j-1)!! = 2^n (n+k)! (2n+2k-1)!!/(k! (2n-1)!!)",
            params: vec![n_param(0), k_param()],
            ring: Ring::Integer,
            paper_ref: "(Ex1) at beta = 1/2, m = n+k",
            sides: |p| {
                let (n, k) = (get(p, "n"), get(p, "k"));
                let l: Rational = (0..=n)
                    .map(|j| {
                        sign(n - j) * q_binom(n, j) * q_dfact(2 * n + 2 * k + 2 * j - 1) / q_dfact(2 * j - 1)
                    })
                    .sum();
                let r = q_pow(2, n) * q_fact(n + k) * q_dfact(2 * n + 2 * k - 1)
                    / (q_fact(k) * q_dfact(2 * n - 1));
                Ok((num(l), num(r)))
            },
        }
        .derived("THM1.iii", "beta = 1/2, m = n+k, times (-1)^n 2^(n+k)", |p| {
            let (n, k) = (get(p, "n"), get(p, "k"));
            let (l, r) = ex1_at_beta(n, n + k, half())?;
            let s = sign(n) * q_pow(2, n + k);
            Ok((num(l * &s), num(r * s)))
        }),
    ]
}

/// `Σ_m (-1)^m Σ_k binom(m,k) binom(n-m,k) ρ^k`.
fn explr_lhs(n: i64) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for m in 0..=n {
        for k in 0..=m {
            let c = sign(m) * q_binom(m, k) * q_binom(n - m, k);
            acc = acc + rho_pow(k).scale(&c);
        }
    }
    acc
}

fn ex2_at(n: i64, beta: Rational, rho: Rational) -> Result<(Rational, Rational)> {
    let pair = ex2(n);
    let l = pair.0.partial_eval(Var::Beta, &beta).partial_eval(Var::Rho, &rho);
    let r = pair.1.partial_eval(Var::Beta, &beta).partial_eval(Var::Rho, &rho);
    Ok((constant(&l)?, constant(&r)?))
}

fn ex2_remarks() -> Vec<IdentityDescriptor> {
    vec![
        Entry {
            id: "R-EX2-EXPLR",
            title: "Σ_m (-1)^m Σ_k binom(m,k) binom(n-m,k) ρ^k = (1-ρ)^(n/2) or 0",
            params: vec![n_param(0)],
            ring: Ring::Polynomial(vec![Var::Rho]),
            paper_ref: "Eq. (explr)",
            sides: |p| {
                let n = get(p, "n");
                let r = if even(n) { one_minus_rho().pow((n / 2) as u32) } else { MultiPoly::zero() };
                Ok((poly(explr_lhs(n)), poly(r)))
            },
        }
        .derived("THM1.iv", "beta = 1, divided by n!", |p| {
            let n = get(p, "n");
            let pair = ex2(n);
            let s = q_fact(n).recip();
            Ok((
                poly(pair.0.partial_eval(Var::Beta, &Rational::one()).scale(&s)),
                poly(pair.1.partial_eval(Var::Beta, &Rational::one()).scale(&s)),
            ))
        }),
        IdentityDescriptor {
            constraint: Some(K_LE_N),
            ..Entry {
                id: "R-EX2-COEF",
                title: "Σ_m (-1)^(m-k) binom(m,k) binom(n-m,k) = binom(n/2,k) or 0",
                params: vec![n_param(0), k_param()],
                ring: Ring::Integer,
                paper_ref: "Eq. (explr), coefficient of rho^k",
                sides: |p| {
                    let (n, k) = (get(p, "n"), get(p, "k"));
                    let l: Rational =
                        (k..=n).map(|m| sign(m - k) * q_binom(m, k) * q_binom(n - m, k)).sum();
                    let r = if even(n) { q_binom(n / 2, k) } else { Rational::zero() };
                    Ok((num(l), num(r)))
                },
            }
            .derived("THM1.iv", "beta = 1, coefficient of rho^k times (-1)^k/n!", |p| {
                let (n, k) = (get(p, "n"), get(p, "k"));
                let pair = ex2(n);
                let s = sign(k) / q_fact(n);
                let coef = |q: &MultiPoly| {
                    constant(&q.partial_eval(Var::Beta, &Rational::one()).coefficient_of(Var::Rho, k as u32))
                };
                Ok((num(coef(&pair.0)? * &s), num(coef(&pair.1)? * s)))
            })
        },
        Entry {
            id: "R-EX2-RHO1-B1",
            title: "Σ_m (-1)^m Σ_k binom(m,k) binom(n-m,k) = 0",
            params: vec![n_param(1)],
            ring: Ring::Integer,
            paper_ref: "Eq. (explr) at rho = 1",
            sides: |p| {
                let n = get(p, "n");
                let mut acc = Rational::zero();
                for m in 0..=n {
                    for k in 0..=m {
                        acc += sign(m) * q_binom(m, k) * q_binom(n - m, k);
                    }
                }
                Ok((num(acc), Value::int(0)))
            },
        }
        .derived("THM1.iv", "beta = 1, rho = 1, divided by n!", |p| {
            let n = get(p, "n");
            let (l, r) = ex2_at(n, Rational::one(), Rational::one())?;
            let s = q_fact(n).recip();
            Ok((num(l * &s), num(r * s)))
        }),
        Entry {
            id: "R-EX2-B12-X",
            title: "Σ_m (-1)^m (2m-1)!!(2n-2m-1)!! Σ_k x^k/(k!(m-k)!(n-m-k)!(2k-1)!!) = (n-1)!!/(n/2)! (2-x)^(n/2) or 0",
            params: vec![n_param(0)],
            ring: Ring::Polynomial(vec![Var::X]),
            paper_ref: "(Ex2) at beta = 1/2, 2 rho = x",
            sides: |p| {
                let n = get(p, "n");
                let mut l = MultiPoly::zero();
                for m in 0..=n {
                    let outer = sign(m) * q_dfact(2 * m - 1) * q_dfact(2 * n - 2 * m - 1);
                    for k in 0..=m {
                        let c = &outer * inv_fact(k) * inv_fact(m - k) * inv_fact(n - m - k) / q_dfact(2 * k - 1);
                        l = l + MultiPoly::var(Var::X).pow(k as u32).scale(&c);
                    }
                }
                let r = if even(n) {
                    let two_minus_x = &MultiPoly::from_int(2) - &MultiPoly::var(Var::X);
                    two_minus_x.pow((n / 2) as u32).scale(&(q_dfact(n - 1) / q_fact(n / 2)))
                } else {
                    MultiPoly::zero()
                };
                Ok((poly(l), poly(r)))
            },
        }
        .derived("THM1.iv", "beta = 1/2, rho = x/2, times 2^n/n!", |p| {
            let n = get(p, "n");
            let pair = ex2(n);
            let x_half = MultiPoly::var(Var::X).scale(&half());
            let s = q_pow(2, n) / q_fact(n);
            let map = |q: &MultiPoly| q.partial_eval(Var::Beta, &half()).substitute(Var::Rho, &x_half).scale(&s);
            Ok((poly(map(&pair.0)), poly(map(&pair.1))))
        }),
        Entry {
            id: "R-EX2-X0",
            title: "Σ_m (-1)^m binom(n,m) (2m-1)!!(2n-2m-1)!! = n!(n-1)!! 2^(n/2)/(n/2)! or 0",
            params: vec![n_param(0)],
            ring: Ring::Integer,
            paper_ref: "(Ex2) at beta = 1/2, rho = 0",
            sides: |p| {
                let n = get(p, "n");
                let l: Rational = (0..=n)
                    .map(|m| sign(m) * q_binom(n, m) * q_dfact(2 * m - 1) * q_dfact(2 * n - 2 * m - 1))
                    .sum();
                let r = if even(n) {
                    q_fact(n) * q_dfact(n - 1) * q_pow(2, n / 2) / q_fact(n / 2)
                } else {
                    Rational::zero()
                };
                Ok((num(l), num(r)))
            },
        }
        .derived("THM1.iv", "beta = 1/2, rho = 0, times 2^n", |p| {
            let n = get(p, "n");
            let (l, r) = ex2_at(n, half(), Rational::zero())?;
            let s = q_pow(2, n);
            Ok((num(l * &s), num(r * s)))
        }),
        Entry {
            id: "R-EX2-RHO1",
            title: "Σ_m (-1)^m binom(n,m) (β)^(m)(β)^(n-m) Σ_k binom(m,k) binom(n-m,k) k!/(β)^(k) = 0",
            params: vec![n_param(1)],
            ring: Ring::RationalFunction(vec![Var::Beta]),
            paper_ref: "(Ex2) at rho = 1",
            sides: |p| {
                let n = get(p, "n");
                let mut terms = Vec::new();
                for m in 0..=n {
                    let pm = ShiftedFactors::poch(Var::Beta, m).mul(&ShiftedFactors::poch(Var::Beta, n - m));
                    for k in 0..=m {
                        let c = sign(m) * q_binom(n, m) * q_binom(m, k) * q_binom(n - m, k) * q_fact(k);
                        terms.push((c, pm.div(&ShiftedFactors::poch(Var::Beta, k))));
                    }
                }
                Ok((Value::RatFn(ShiftedFactors::sum(Var::Beta, &terms)), Value::int(0)))
            },
        }
        .derived("THM1.iv", "rho = 1", |p| {
            let pair = ex2(get(p, "n"));
            Ok((poly(at_rho(&pair.0, Rational::one())), poly(at_rho(&pair.1, Rational::one()))))
        }),
    ]
}

fn poch_b(n: i64) -> MultiPoly {
    poch_beta(0, n)
}

fn ex3_remarks() -> Vec<IdentityDescriptor> {
    vec![
        Entry {
            id: "R-EX3-RHO0",
            title: "Σ_m (-1)^(n-m) binom(n,m) (β)^(n-m)(β)^(m) = n!/(n/2)! (β)^(n/2) or 0",
            params: vec![n_param(0)],
            ring: Ring::Polynomial(vec![Var::Beta]),
            paper_ref: "(Ex3) at rho = 0",
            sides: |p| {
                let n = get(p, "n");
                let l: MultiPoly = (0..=n)
                    .map(|m| (&poch_b(n - m) * &poch_b(m)).scale(&(sign(n - m) * q_binom(n, m))))
                    .sum();
                let r = if even(n) {
                    poch_b(n / 2).scale(&(q_fact(n) / q_fact(n / 2)))
                } else {
                    MultiPoly::zero()
                };
                Ok((poly(l), poly(r)))
            },
        }
        .derived("THM1.v", "rho = 0", |p| {
            let pair = ex3(get(p, "n"));
            Ok((poly(at_rho(&pair.0, Rational::zero())), poly(at_rho(&pair.1, Rational::zero()))))
        }),
        Entry {
            id: "VANDERMONDE",
            title: "Σ_m binom(n,m) (β)^(n-m)(α)^(m) = (α+β)^(n)",
            params: vec![n_param(0)],
            ring: Ring::Polynomial(vec![Var::Beta, Var::Alpha]),
            paper_ref: "rising-factorial Vandermonde convolution",
            sides: |p| {
                let n = get(p, "n");
                let alpha = MultiPoly::var(Var::Alpha);
                let l: MultiPoly = (0..=n)
                    .map(|m| (&poch_b(n - m) * &rising(&alpha, m as u32)).scale(&q_binom(n, m)))
                    .sum();
                let r = rising(&(&alpha + &MultiPoly::var(Var::Beta)), n as u32);
                Ok((poly(l), poly(r)))
            },
        }
        .done(),
        Entry {
            id: "R-EX3-HALF",
            title: "Σ_m (-1)^(n-m) binom(n,m) 2^-m Σ_j binom(m,j) (β)^(n-j)(β+m-j)^(j) = n!/(2^(n/2)(n/2)!) (β)^(n/2) or 0",
            params: vec![n_param(0)],
            ring: Ring::Polynomial(vec![Var::Beta]),
            paper_ref: "(Ex3) at rho = 1/2",
            sides: |p| {
                let n = get(p, "n");
                let mut l = MultiPoly::zero();
                for m in 0..=n {
                    let outer = sign(n - m) * q_binom(n, m) * q_pow(2, -m);
                    for j in 0..=m {
                        let t = &poch_b(n - j) * &poch_beta(m - j, j);
                        l = l + t.scale(&(&outer * q_binom(m, j)));
                    }
                }
                let r = if even(n) {
                    poch_b(n / 2).scale(&(q_fact(n) / (q_pow(2, n / 2) * q_fact(n / 2))))
                } else {
                    MultiPoly::zero()
                };
                Ok((poly(l), poly(r)))
            },
        }
        .derived("THM1.v", "rho = 1/2", |p| {
            let pair = ex3(get(p, "n"));
            Ok((poly(at_rho(&pair.0, half())), poly(at_rho(&pair.1, half()))))
        }),
        IdentityDescriptor {
            constraint: Some(K_LE_N),
            ..Entry {
                id: "R-EX3-COEF",
                title: "Σ_m (-1)^(m-k) (n-k)!/((m-k)!(n-m-k)!) (β)^(m)(β)^(n-m) = (n/2)! binom(n-k,n/2) (β)^(k)(β)^(n/2) or 0",
                params: vec![n_param(0), k_param()],
                ring: Ring::Polynomial(vec![Var::Beta]),
                paper_ref: "(Ex3), coefficient of rho^k",
                sides: |p| {
                    let (n, k) = (get(p, "n"), get(p, "k"));
                    let l: MultiPoly = (k..=n)
                        .map(|m| {
                            let c = sign(m - k) * q_fact(n - k) * inv_fact(m - k) * inv_fact(n - m - k);
                            (&poch_b(m) * &poch_b(n - m)).scale(&c)
                        })
                        .sum();
                    let r = if even(n) {
                        (&poch_b(k) * &poch_b(n / 2)).scale(&(q_fact(n / 2) * q_binom(n - k, n / 2)))
                    } else {
                        MultiPoly::zero()
                    };
                    Ok((poly(l), poly(r)))
                },
            }
            .derived("THM1.v", "coefficient of rho^k times (-1)^k k!(n-k)! (β)^(k)/n!", |p| {
                let (n, k) = (get(p, "n"), get(p, "k"));
                let pair = ex3(n);
                let s = sign(k) * q_fact(k) * q_fact(n - k) / q_fact(n);
                let map = |q: &MultiPoly| (&q.coefficient_of(Var::Rho, k as u32) * &poch_b(k)).scale(&s);
                Ok((poly(map(&pair.0)), poly(map(&pair.1))))
            })
        },
    ]
}

/// `1 + φ = (1+√5)/2`.
fn one_plus_phi() -> QuadExtNum {
    QuadExtNum::golden_phi() + QuadExtNum::from_rational(Rational::one(), 5).expect("5 is squarefree")
}

fn quad(a: Rational, b: Rational) -> QuadExtNum {
    QuadExtNum::new(a, b, 5).expect("5 is squarefree")
}

fn phi_corollary_sum(k: i64, luc: bool) -> Rational {
    (0..=k)
        .map(|j| {
            let (a, b) = (2 * k - 2 * j, j);
            let mix = if luc {
                q_luc(a) * q_luc(b) - rat_int(5) * q_fib(a) * q_fib(b)
            } else {
                q_fib(a) * q_luc(b) - q_luc(a) * q_fib(b)
            };
            sign(j) * q_binom(2 * k, 2 * j) * q_dfact(2 * j - 1) * q_dfact(2 * k - 2 * j - 1) * mix
        })
        .sum()
}

fn golden_ratio() -> Vec<IdentityDescriptor> {
    vec![
        Entry {
            id: "COR-PHI-LUC",
            title: "2 (2k)!/k! L_k = Σ (-1)^j binom(2k,2j) (2j-1)!!(2k-2j-1)!! (L_(2k-2j) L_j - 5 F_(2k-2j) F_j)",
            params: vec![k_param()],
            ring: Ring::Integer,
            paper_ref: "(G1) at the golden ratio, rational part",
            sides: |p| {
                let k = get(p, "k");
                Ok((num(rat_int(2) * q_fact(2 * k) / q_fact(k) * q_luc(k)), num(phi_corollary_sum(k, true))))
            },
        }
        .derived("THM1.i", "1 + rho = 1 + phi, rational part times 4", |p| {
            let (l, r) = family_at_quad(&g1(get(p, "k")), &QuadExtNum::golden_phi())?;
            let four = rat_int(4);
            Ok((num(l.rational_part() * &four), num(r.rational_part() * four)))
        }),
        Entry {
            id: "COR-PHI-FIB",
            title: "2 (2k)!/k! F_k = Σ (-1)^j binom(2k,2j) (2j-1)!!(2k-2j-1)!! (F_(2k-2j) L_j - L_(2k-2j) F_j)",
            params: vec![k_param()],
            ring: Ring::Integer,
            paper_ref: "(G1) at the golden ratio, irrational part",
            sides: |p| {
                let k = get(p, "k");
                Ok((num(rat_int(2) * q_fact(2 * k) / q_fact(k) * q_fib(k)), num(phi_corollary_sum(k, false))))
            },
        }
        .derived("THM1.i", "1 + rho = 1 + phi, sqrt(5) part times 4", |p| {
            let (l, r) = family_at_quad(&g1(get(p, "k")), &QuadExtNum::golden_phi())?;
            let four = rat_int(4);
            Ok((num(l.radical_part() * &four), num(r.radical_part() * four)))
        }),
        Entry {
            id: "POCH-ADD",
            title: "(β)^(n) (β+n)^(m) = (β)^(n+m)",
            params: vec![n_param(0), ParamSpec { name: "m", min: 0, max: N_CAP }],
            ring: Ring::Polynomial(vec![Var::Beta]),
            paper_ref: "rising-factorial addition law",
            sides: |p| {
                let (n, m) = (get(p, "n"), get(p, "m"));
                let l = &poch_beta(0, n) * &poch_beta(n, m);
                Ok((poly(l), poly(rising(&MultiPoly::var(Var::Beta), (n + m) as u32))))
            },
        }
        .done(),
        Entry {
            id: "LF-INV",
            title: "L_n^2 - 5 F_n^2 = 4 (-1)^n",
            params: vec![n_param(0)],
            ring: Ring::Integer,
            paper_ref: "Lucas-Fibonacci norm identity",
            sides: |p| {
                let FibLucas { f, l, .. } = fib_lucas(get(p, "n") as u64);
                Ok((num(rat_int(&l * &l - crate::exactnum::Integer::from(5) * &f * &f)), num(rat_int(4) * sign(get(p, "n")))))
            },
        }
        .derived("PHI-POW", "4 N((1+phi)^n) = 4 N(1+phi)^n", |p| {
            let n = get(p, "n");
            let pow = crate::exactnum::Scalar::pow(&one_plus_phi(), n as u32);
            let four = rat_int(4);
            Ok((num(pow.norm() * &four), num(num_traits::pow(one_plus_phi().norm(), n as usize) * four)))
        }),
        Entry {
            id: "PHI-POW",
            title: "(1+φ)^n = L_n/2 + F_n √5/2 and φ^n = (-1)^n (L_n/2 - F_n √5/2)",
            params: vec![n_param(0)],
            ring: Ring::QuadExt(5),
            paper_ref: "golden-ratio power law, phi = 1/(1+phi)",
            sides: |p| {
                let n = get(p, "n");
                let e = n as u32;
                let lhs = Value::Tuple(vec![
                    Value::Quad(crate::exactnum::Scalar::pow(&one_plus_phi(), e)),
                    Value::Quad(crate::exactnum::Scalar::pow(&QuadExtNum::golden_phi(), e)),
                ]);
                let (l2, f2) = (q_luc(n) * half(), q_fib(n) * half());
                let rhs = Value::Tuple(vec![
                    Value::Quad(quad(l2.clone(), f2.clone())),
                    Value::Quad(quad(sign(n) * l2, -(sign(n) * f2))),
                ]);
                Ok((lhs, rhs))
            },
        }
        .done(),
    ]
}
