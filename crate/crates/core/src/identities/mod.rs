//! Registry of the identities and the verifier that checks them.
//!
//! Every entry builds its two sides independently and compares them exactly.
//! Entries that specialize one of the five parametric families also carry a
//! derivation: the parent family is evaluated at the specialization point and
//! rescaled, and the result must reproduce both printed sides.

mod builders;
mod registry;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{QuadExtNum, Rational, Scalar};
use crate::polyalg::{MultiPoly, RationalFn, Var};

pub use builders::{
    build_ex1, build_ex2, build_ex3, build_g1, build_g2, fib_lucas, fibonacci, lucas, moment_rhs,
    FibLucas,
};
pub use registry::{lookup, registry};

/// Largest `k` any entry accepts.
pub const K_CAP: i64 = 100;
/// Largest `n` any entry accepts.
pub const N_CAP: i64 = 80;

pub type Params = BTreeMap<String, i64>;

/// Builds `Params` from name/value pairs.
pub fn params(pairs: &[(&str, i64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Where both sides of an entry live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ring {
    Integer,
    Rational,
    Polynomial(Vec<Var>),
    RationalFunction(Vec<Var>),
    QuadExt(i64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = |vs: &[Var]| vs.iter().map(|v| v.symbol()).collect::<Vec<_>>().join(", ");
        match self {
            Ring::Integer => write!(f, "Z"),
            Ring::Rational => write!(f, "Q"),
            Ring::Polynomial(vs) => write!(f, "Q[{}]", vars(vs)),
            Ring::RationalFunction(vs) => write!(f, "Q({})", vars(vs)),
            Ring::QuadExt(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One side of an identity, evaluated.
#[derive(Clone, Debug)]
pub enum Value {
    Number(Rational),
    Quad(QuadExtNum),
    Poly(MultiPoly),
    RatFn(RationalFn),
    Tuple(Vec<Value>),
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Number(Rational::from_integer(n.into()))
    }

    /// The same value plus one, componentwise for tuples.
    pub fn plus_one(&self) -> Value {
        match self {
            Value::Number(r) => Value::Number(r + Rational::one()),
            Value::Quad(q) => Value::Quad(q.clone() + q.one_like()),
            Value::Poly(p) => Value::Poly(p + &MultiPoly::one()),
            Value::RatFn(r) => Value::RatFn(r + &RationalFn::from_poly(MultiPoly::one())),
            Value::Tuple(vs) => Value::Tuple(vs.iter().map(Value::plus_one).collect()),
        }
    }

    fn as_ratfn(&self) -> Option<RationalFn> {
        match self {
            Value::Number(r) => Some(RationalFn::from_poly(MultiPoly::constant(r.clone()))),
            Value::Poly(p) => Some(RationalFn::from_poly(p.clone())),
            Value::RatFn(r) => Some(r.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(r) => write!(f, "{r}"),
            Value::Quad(q) => write!(f, "{q}"),
            Value::Poly(p) => write!(f, "{p}"),
            Value::RatFn(r) => write!(f, "{r}"),
            Value::Tuple(vs) => {
                write!(f, "(")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// `None` when the values are equal, otherwise a description of the first
/// place they differ.
pub fn compare(lhs: &Value, rhs: &Value) -> Option<String> {
    match (lhs, rhs) {
        (Value::Number(a), Value::Number(b)) => (a != b).then(|| format!("lhs {a} != rhs {b}")),
        (Value::Quad(a), Value::Quad(b)) => (a != b).then(|| format!("lhs {a} != rhs {b}")),
        (Value::Poly(a), Value::Poly(b)) => a.first_difference(b).map(|d| d.to_string()),
        (Value::Tuple(a), Value::Tuple(b)) => {
            if a.len() != b.len() {
                return Some(format!("tuple lengths {} and {}", a.len(), b.len()));
            }
            a.iter()
                .zip(b)
                .enumerate()
                .find_map(|(i, (x, y))| compare(x, y).map(|w| format!("component {i}: {w}")))
        }
        _ => match (lhs.as_ratfn(), rhs.as_ratfn()) {
            (Some(a), Some(b)) => a
                .first_difference(&b)
                .map(|d| format!("cross-multiplied {d}")),
            _ => Some(format!("incomparable values {lhs} and {rhs}")),
        },
    }
}

/// Allowed values of one parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub min: i64,
    pub max: i64,
}

/// A relation between parameters beyond their individual ranges.
#[derive(Clone, Copy, Debug)]
pub struct Constraint {
    pub text: &'static str,
    pub holds: fn(&Params) -> bool,
}

/// Rebuilds an entry from its parent family.
#[derive(Clone, Copy, Debug)]
pub struct Derivation {
    pub parent: &'static str,
    pub note: &'static str,
    pub derive: fn(&Params) -> Result<(Value, Value)>,
}

pub type SidesFn = Arc<dyn Fn(&Params) -> Result<(Value, Value)> + Send + Sync>;

#[derive(Clone)]
pub struct IdentityDescriptor {
    pub id: &'static str,
    pub title: &'static str,
    pub params: Vec<ParamSpec>,
    pub constraint: Option<Constraint>,
    pub ring: Ring,
    pub paper_ref: &'static str,
    pub sides: SidesFn,
    /// Parameter cells outside the proved range.
    pub empirical: Option<fn(&Params) -> bool>,
    pub derivation: Option<Derivation>,
}

impl fmt::Debug for IdentityDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityDescriptor")
            .field("id", &self.id)
            .field("params", &self.params)
            .field("ring", &self.ring)
            .finish_non_exhaustive()
    }
}

impl IdentityDescriptor {
    /// Rejects missing, extra, out-of-range or constraint-violating params.
    pub fn check_params(&self, p: &Params) -> Result<()> {
        for spec in &self.params {
            let v = *p.get(spec.name).ok_or_else(|| {
                Error::OutOfRange(format!("{}: missing parameter {}", self.id, spec.name))
            })?;
            if v < spec.min || v > spec.max {
                return Err(Error::OutOfRange(format!(
                    "{}: {}={} outside [{}, {}]",
                    self.id, spec.name, v, spec.min, spec.max
                )));
            }
        }
        if let Some(extra) = p.keys().find(|k| !self.params.iter().any(|s| s.name == k.as_str())) {
            return Err(Error::OutOfRange(format!(
                "{}: unexpected parameter {extra}",
                self.id
            )));
        }
        if let Some(c) = &self.constraint {
            if !(c.holds)(p) {
                return Err(Error::OutOfRange(format!("{}: requires {}", self.id, c.text)));
            }
        }
        Ok(())
    }

    pub fn is_empirical(&self, p: &Params) -> bool {
        self.empirical.is_some_and(|f| f(p))
    }

    /// Both sides at `p`, after checking `p`.
    pub fn build(&self, p: &Params) -> Result<(Value, Value)> {
        self.check_params(p)?;
        (self.sides)(p)
    }

    /// A copy whose right-hand side is off by one.
    pub fn with_perturbed_rhs(&self) -> IdentityDescriptor {
        let inner = self.sides.clone();
        IdentityDescriptor {
            sides: Arc::new(move |p| {
                let (l, r) = inner(p)?;
                Ok((l, r.plus_one()))
            }),
            derivation: None,
            ..self.clone()
        }
    }

    /// Every in-range parameter cell inside `ranges`, in lexicographic order.
    pub fn grid_cells(&self, ranges: &GridRanges) -> Vec<Params> {
        let mut cells = vec![Params::new()];
        for spec in &self.params {
            let (lo, hi) = ranges.bounds(spec.name);
            let (lo, hi) = (lo.max(spec.min), hi.min(spec.max));
            let mut next = Vec::new();
            for cell in &cells {
                for v in lo..=hi {
                    let mut c = cell.clone();
                    c.insert(spec.name.to_string(), v);
                    next.push(c);
                }
            }
            cells = next;
        }
        cells.retain(|c| self.constraint.as_ref().is_none_or(|k| (k.holds)(c)));
        cells.sort();
        cells
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationResult {
    pub id: String,
    pub params: Params,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub elapsed_ms: f64,
    pub empirical: bool,
    pub derivation_checked: bool,
    pub paper_ref: String,
}

impl VerificationResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Checks one descriptor at one parameter cell.
pub fn verify_descriptor(desc: &IdentityDescriptor, p: &Params) -> Result<VerificationResult> {
    desc.check_params(p)?;
    let start = Instant::now();
    let witness = match (desc.sides)(p) {
        Err(e) => Some(format!("evaluation failed: {e}")),
        Ok((lhs, rhs)) => compare(&lhs, &rhs).or_else(|| {
            let d = desc.derivation.as_ref()?;
            match (d.derive)(p) {
                Err(e) => Some(format!("derivation from {} failed: {e}", d.parent)),
                Ok((dl, dr)) => compare(&dl, &lhs)
                    .map(|w| format!("derivation from {} ({}), lhs: {w}", d.parent, d.note))
                    .or_else(|| {
                        compare(&dr, &rhs).map(|w| {
                            format!("derivation from {} ({}), rhs: {w}", d.parent, d.note)
                        })
                    }),
            }
        }),
    };
    Ok(VerificationResult {
        id: desc.id.to_string(),
        params: p.clone(),
        status: if witness.is_none() { Status::Pass } else { Status::Fail },
        witness,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        empirical: desc.is_empirical(p),
        derivation_checked: desc.derivation.is_some(),
        paper_ref: desc.paper_ref.to_string(),
    })
}

/// Checks a registered identity at one parameter cell.
pub fn verify(id: &str, p: &Params) -> Result<VerificationResult> {
    verify_descriptor(lookup(id)?, p)
}

/// Upper (and for `m`, lower) bounds of a verification grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridRanges {
    pub k_max: i64,
    pub n_max: i64,
    pub m_min: i64,
    pub m_max: i64,
}

impl GridRanges {
    /// `k, n <= max`, `m` in `0..=max`.
    pub fn up_to(max: i64) -> Self {
        Self {
            k_max: max,
            n_max: max,
            m_min: 0,
            m_max: max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max < 0 || self.n_max < 0 {
            return Err(Error::Config("k-max and n-max must be nonnegative".into()));
        }
        if self.k_max > K_CAP {
            return Err(Error::Config(format!("k-max {} exceeds the cap {K_CAP}", self.k_max)));
        }
        if self.n_max > N_CAP {
            return Err(Error::Config(format!("n-max {} exceeds the cap {N_CAP}", self.n_max)));
        }
        if self.m_min > self.m_max {
            return Err(Error::Config(format!("empty m range {}..{}", self.m_min, self.m_max)));
        }
        if self.m_min < -N_CAP || self.m_max > N_CAP {
            return Err(Error::Config(format!("m range exceeds the cap ±{N_CAP}")));
        }
        Ok(())
    }

    fn bounds(&self, name: &str) -> (i64, i64) {
        match name {
            "k" => (0, self.k_max),
            "m" => (self.m_min, self.m_max),
            _ => (0, self.n_max),
        }
    }
}

/// Verifies every in-range cell of every listed identity on a pool of
/// `workers` threads. Results are sorted by id, then parameters.
pub fn verify_grid(ids: &[&str], ranges: &GridRanges, workers: usize) -> Result<Vec<VerificationResult>> {
    ranges.validate()?;
    let descs = ids.iter().map(|id| lookup(id)).collect::<Result<Vec<_>>>()?;
    verify_descriptors(&descs, ranges, workers)
}

/// [`verify_grid`] over explicit descriptors.
pub fn verify_descriptors(
    descs: &[&IdentityDescriptor],
    ranges: &GridRanges,
    workers: usize,
) -> Result<Vec<VerificationResult>> {
    let cells: Vec<(&IdentityDescriptor, Params)> = descs
        .iter()
        .flat_map(|d| d.grid_cells(ranges).into_iter().map(move |c| (*d, c)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    // Expensive cells tend to sit at the end of each family; start them first.
    let mut results = pool.install(|| {
        cells
            .par_iter()
            .rev()
            .map(|(d, c)| verify_descriptor(d, c))
            .collect::<Result<Vec<_>>>()
    })?;
    results.sort_by(|a, b| (&a.id, &a.params).cmp(&(&b.id, &b.params)));
    Ok(results)
}
