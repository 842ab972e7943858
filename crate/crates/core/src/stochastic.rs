//! Correlated normal and gamma pairs, their exact moments, and Monte Carlo
//! estimates to hold against them.
//!
//! Floating point lives only here. Exact values are computed from the
//! rational reading of the sampler parameters (`0.3` is `3/10`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, rational_from_decimal, rising_factorial, to_f64, Rational};
use crate::orthopoly::{mixed_moment, Case};
use crate::polyalg::{rising, MultiPoly, Var};

/// Independent streams every estimate is split into. Fixed, so that the
/// result does not depend on how many threads run them.
pub const STREAMS: u64 = 16;

/// Smallest sample count accepted by [`estimate_moments`].
pub const MIN_SAMPLES: u64 = 1000;

/// Largest `|z|` accepted by the Monte Carlo gate.
pub const Z_GATE: f64 = 5.0;

/// Source of `(X, Y)` pairs.
pub trait PairSampler: Sync {
    fn case(&self) -> Case;
    fn seed(&self) -> u64;
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64);
}

/// Standard normal pair with correlation `rho`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPairSampler {
    pub rho: f64,
    pub seed: u64,
}

impl GaussianPairSampler {
    pub fn new(rho: f64, seed: u64) -> Result<Self> {
        if !(rho > -1.0 && rho < 1.0) {
            return Err(Error::Domain(format!("normal requires rho in (-1,1), got {rho}")));
        }
        Ok(Self { rho, seed })
    }
}

impl PairSampler for GaussianPairSampler {
    fn case(&self) -> Case {
        Case::Normal
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let z1: f64 = StandardNormal.sample(rng);
        let z2: f64 = StandardNormal.sample(rng);
        (z1, self.rho * z1 + (1.0 - self.rho * self.rho).sqrt() * z2)
    }
}

/// Gamma(β) pair with correlation `rho`, drawn as a Poisson mixture:
/// `X ~ Gamma(β)`, `N | X ~ Poisson(ρX/(1-ρ))`, `Y = (1-ρ) Gamma(β+N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaPairSampler {
    pub beta: f64,
    pub rho: f64,
    pub seed: u64,
    conditional_scale: f64,
}

impl GammaPairSampler {
    pub fn new(beta: f64, rho: f64, seed: u64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Domain(format!("gamma requires beta > 0, got {beta}")));
        }
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::Domain(format!("gamma requires rho in [0,1), got {rho}")));
        }
        Ok(Self {
            beta,
            rho,
            seed,
            conditional_scale: 1.0 - rho,
        })
    }

    /// Replaces the `(1-ρ)` factor on `Y`. Only useful to build a sampler
    /// that is known to be wrong.
    pub fn with_conditional_scale(mut self, scale: f64) -> Self {
        self.conditional_scale = scale;
        self
    }
}

impl PairSampler for GammaPairSampler {
    fn case(&self) -> Case {
        Case::Gamma
    }

    fn seed(&self) -> u64 {
        self.seed
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let x = Gamma::new(self.beta, 1.0).expect("beta > 0").sample(rng);
        let lambda = self.rho * x / (1.0 - self.rho);
        let n = if lambda > 0.0 {
            Poisson::new(lambda).expect("lambda > 0").sample(rng)
        } else {
            0.0
        };
        let y = Gamma::new(self.beta + n, 1.0).expect("shape > 0").sample(rng);
        (x, self.conditional_scale * y)
    }
}

pub fn sample_normal_pair<R: Rng + ?Sized>(s: &GaussianPairSampler, rng: &mut R) -> (f64, f64) {
    s.sample(rng)
}

pub fn sample_gamma_pair<R: Rng + ?Sized>(s: &GammaPairSampler, rng: &mut R) -> (f64, f64) {
    s.sample(rng)
}

/// A function of one pair whose mean is estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Statistic {
    /// `(X - Y)^n`
    DiffPower { n: u32 },
    /// `X^m Y^l`
    Mixed { m: u32, l: u32 },
}

impl Statistic {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            Statistic::DiffPower { n } => (x - y).powi(n as i32),
            Statistic::Mixed { m, l } => x.powi(m as i32) * y.powi(l as i32),
        }
    }
}

impl std::fmt::Display for Statistic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Statistic::DiffPower { n } => write!(f, "(X-Y)^{n}"),
            Statistic::Mixed { m: 1, l: 1 } => write!(f, "XY"),
            Statistic::Mixed { m, l } => write!(f, "X^{m} Y^{l}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

/// Running mean and sum of squared deviations with a Neumaier-compensated
/// mean update.
#[derive(Clone, Copy, Debug, Default)]
struct Welford {
    n: u64,
    mean: f64,
    comp: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let delta = v - self.value();
        self.add_to_mean(delta / self.n as f64);
        self.m2 += delta * (v - self.value());
    }

    fn value(&self) -> f64 {
        self.mean + self.comp
    }

    fn add_to_mean(&mut self, d: f64) {
        let t = self.mean + d;
        if self.mean.abs() >= d.abs() {
            self.comp += (self.mean - t) + d;
        } else {
            self.comp += (d - t) + self.mean;
        }
        self.mean = t;
    }

    fn merge(&self, other: &Welford) -> Welford {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let delta = other.value() - self.value();
        let mut out = *self;
        out.n = n;
        out.add_to_mean(delta * other.n as f64 / n as f64);
        out.m2 = self.m2 + other.m2 + delta * delta * (self.n as f64 * other.n as f64 / n as f64);
        out
    }

    fn estimate(&self) -> MomentEstimate {
        let var = self.m2 / (self.n - 1) as f64;
        MomentEstimate {
            mean: self.value(),
            std_error: (var / self.n as f64).sqrt(),
            n_samples: self.n,
        }
    }
}

/// Seed of stream `index` for a sampler seeded with `seed`.
pub fn stream_seed(seed: u64, index: u64) -> u64 {
    seed ^ index
}

/// Means of several statistics over the same `n_samples` pairs.
///
/// The pairs are drawn in [`STREAMS`] streams seeded `seed ^ index` and the
/// stream summaries are merged in index order, so the result depends only on
/// the seed. Streams run on the current rayon pool.
pub fn estimate_moments<S: PairSampler>(
    sampler: &S,
    stats: &[Statistic],
    n_samples: u64,
) -> Result<Vec<MomentEstimate>> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::Domain(format!(
            "need at least {MIN_SAMPLES} samples, got {n_samples}"
        )));
    }
    let per = n_samples / STREAMS;
    let extra = n_samples % STREAMS;
    let summaries: Vec<Vec<Welford>> = (0..STREAMS)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(sampler.seed(), i));
            let count = per + u64::from(i < extra);
            let mut acc = vec![Welford::default(); stats.len()];
            for _ in 0..count {
                let (x, y) = sampler.sample(&mut rng);
                for (w, s) in acc.iter_mut().zip(stats) {
                    w.push(s.eval(x, y));
                }
            }
            acc
        })
        .collect();
    Ok((0..stats.len())
        .map(|k| {
            summaries
                .iter()
                .fold(Welford::default(), |acc, s| acc.merge(&s[k]))
                .estimate()
        })
        .collect())
}

pub fn estimate_moment<S: PairSampler>(
    sampler: &S,
    stat: Statistic,
    n_samples: u64,
) -> Result<MomentEstimate> {
    Ok(estimate_moments(sampler, &[stat], n_samples)?.remove(0))
}

/// `(mean - exact) / std_error`.
pub fn z_compare(est: &MomentEstimate, exact: &Rational) -> Result<f64> {
    if !(est.std_error > 0.0) {
        return Err(Error::Domain("standard error must be positive".into()));
    }
    Ok((est.mean - to_f64(exact)) / est.std_error)
}

/// `E(X-Y)^n` for the standard normal pair: `n!/(n/2)! (1-ρ)^(n/2)` for even
/// `n`, else 0, as a polynomial in ρ.
pub fn closed_moment_normal_poly(n: u32) -> MultiPoly {
    if n % 2 == 1 {
        return MultiPoly::zero();
    }
    let h = n / 2;
    let c = Rational::from_integer(factorial(n as i64).unwrap() / factorial(h as i64).unwrap());
    (&MultiPoly::one() - &MultiPoly::var(Var::Rho)).pow(h).scale(&c)
}

/// `E(X-Y)^n` for the gamma pair: `n!/(n/2)! (β)^(n/2) (1-ρ)^(n/2)` for
/// even `n`, else 0, as a polynomial in ρ and β.
pub fn closed_moment_gamma_poly(n: u32) -> MultiPoly {
    if n % 2 == 1 {
        return MultiPoly::zero();
    }
    &closed_moment_normal_poly(n) * &rising(&MultiPoly::var(Var::Beta), n / 2)
}

pub fn closed_moment_normal(n: u32, rho: &Rational) -> Rational {
    closed_moment_normal_poly(n)
        .partial_eval(Var::Rho, rho)
        .constant_term()
}

pub fn closed_moment_gamma(n: u32, beta: &Rational, rho: &Rational) -> Rational {
    closed_moment_gamma_poly(n)
        .partial_eval(Var::Rho, rho)
        .partial_eval(Var::Beta, beta)
        .constant_term()
}

/// `E X^n = (β)^(n)` for `X ~ Gamma(β)`, as a polynomial in β.
pub fn gamma_raw_moment(n: u32) -> MultiPoly {
    rising(&MultiPoly::var(Var::Beta), n)
}

pub fn gamma_raw_moment_at(n: u32, beta: &Rational) -> Rational {
    rising_factorial(beta, n as i64).expect("nonnegative order has no pole")
}

/// `E X^m Y^l` at a point; `beta` is ignored in the normal case.
pub fn mixed_moment_at(case: Case, m: u32, l: u32, rho: &Rational, beta: &Rational) -> Rational {
    let mut p = mixed_moment(case, m as usize, l as usize).partial_eval(Var::Rho, rho);
    if case == Case::Gamma {
        p = p.partial_eval(Var::Beta, beta);
    }
    p.constant_term()
}

/// Exact mean of `stat` under the law of `case` at `(rho, beta)`.
pub fn exact_statistic(case: Case, stat: Statistic, rho: &Rational, beta: &Rational) -> Rational {
    match (case, stat) {
        (Case::Normal, Statistic::DiffPower { n }) => closed_moment_normal(n, rho),
        (Case::Gamma, Statistic::DiffPower { n }) => closed_moment_gamma(n, beta, rho),
        (_, Statistic::Mixed { m, l }) => mixed_moment_at(case, m, l, rho, beta),
    }
}

/// Mean of `Y - β(1-ρ) - ρX` within one band of `X`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrendBin {
    pub x_lo: f64,
    pub x_hi: f64,
    pub count: u64,
    pub mean_residual: f64,
    pub std_error: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendReport {
    pub bins: Vec<TrendBin>,
    /// Least-squares slope of `Y` on `X`.
    pub slope: f64,
    pub intercept: f64,
    pub max_abs_z: f64,
    pub passed: bool,
}

/// Bins below this count are reported but not gated.
pub const MIN_BIN_COUNT: u64 = 200;

/// Checks `E(Y | X = x) = β(1-ρ) + ρx` on `bins` equal-width bands of `X`
/// covering `[0, β + 4√β]`.
pub fn conditional_mean_trend(
    sampler: &GammaPairSampler,
    n_samples: u64,
    bins: usize,
) -> Result<TrendReport> {
    if n_samples < MIN_SAMPLES || bins == 0 {
        return Err(Error::Domain("trend check needs samples and bins".into()));
    }
    let (beta, rho) = (sampler.beta, sampler.rho);
    let x_hi = beta + 4.0 * beta.sqrt();
    let width = x_hi / bins as f64;
    let per = n_samples / STREAMS;
    let extra = n_samples % STREAMS;
    // Per stream: a Welford per bin, plus sums for the regression.
    type Partial = (Vec<Welford>, [f64; 5]);
    let partials: Vec<Partial> = (0..STREAMS)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(sampler.seed, i));
            let mut acc = vec![Welford::default(); bins];
            let mut sums = [0.0; 5];
            for _ in 0..per + u64::from(i < extra) {
                let (x, y) = sampler.sample(&mut rng);
                let b = (x / width) as usize;
                if b < bins {
                    acc[b].push(y - beta * (1.0 - rho) - rho * x);
                }
                sums[0] += 1.0;
                sums[1] += x;
                sums[2] += y;
                sums[3] += x * x;
                sums[4] += x * y;
            }
            (acc, sums)
        })
        .collect();
    let mut merged = vec![Welford::default(); bins];
    let mut sums = [0.0; 5];
    for (acc, s) in &partials {
        for (m, w) in merged.iter_mut().zip(acc) {
            *m = m.merge(w);
        }
        for (t, v) in sums.iter_mut().zip(s) {
            *t += v;
        }
    }
    let [n, sx, sy, sxx, sxy] = sums;
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let bins: Vec<TrendBin> = merged
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let (mean, se) = if w.n >= 2 {
                let e = w.estimate();
                (e.mean, e.std_error)
            } else {
                (f64::NAN, f64::NAN)
            };
            TrendBin {
                x_lo: i as f64 * width,
                x_hi: (i + 1) as f64 * width,
                count: w.n,
                mean_residual: mean,
                std_error: se,
                z: mean / se,
            }
        })
        .collect();
    let max_abs_z = bins
        .iter()
        .filter(|b| b.count >= MIN_BIN_COUNT)
        .map(|b| b.z.abs())
        .fold(0.0, f64::max);
    Ok(TrendReport {
        passed: max_abs_z <= Z_GATE,
        bins,
        slope,
        intercept,
        max_abs_z,
    })
}

/// One Monte Carlo comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McCell {
    pub case: Case,
    pub statistic: Statistic,
    pub rho: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub estimate: MomentEstimate,
    pub exact: f64,
    pub z: f64,
    /// 1, or 2 when the first seed missed the gate.
    pub attempts: u32,
    pub passed: bool,
}

/// One parameter point of a Monte Carlo sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McPoint {
    pub case: Case,
    pub rho: f64,
    pub beta: f64,
}

/// The normal and gamma points and statistics of the standard sweep.
pub fn standard_mc_points() -> Vec<McPoint> {
    let mut out: Vec<McPoint> = [-0.5, 0.0, 0.3, 0.9]
        .into_iter()
        .map(|rho| McPoint {
            case: Case::Normal,
            rho,
            beta: 1.0,
        })
        .collect();
    for rho in [0.0, 0.3, 0.7] {
        for beta in [0.5, 1.0, 2.5] {
            out.push(McPoint {
                case: Case::Gamma,
                rho,
                beta,
            });
        }
    }
    out
}

pub fn standard_statistics() -> Vec<Statistic> {
    vec![
        Statistic::DiffPower { n: 2 },
        Statistic::DiffPower { n: 4 },
        Statistic::DiffPower { n: 6 },
        Statistic::Mixed { m: 1, l: 1 },
    ]
}

/// Seed used for the single retry of a cell that missed the gate.
pub fn retry_seed(seed: u64) -> u64 {
    seed.wrapping_add(0x9E37_79B9_7F4A_7C15).rotate_left(17)
}

fn estimates_at(point: &McPoint, stats: &[Statistic], n: u64, seed: u64) -> Result<Vec<MomentEstimate>> {
    match point.case {
        Case::Normal => estimate_moments(&GaussianPairSampler::new(point.rho, seed)?, stats, n),
        Case::Gamma => estimate_moments(&GammaPairSampler::new(point.beta, point.rho, seed)?, stats, n),
    }
}

/// Estimates every statistic at `point`, compares each with its exact value
/// and redraws once, with [`retry_seed`], the statistics that miss
/// `|z| <= 5`.
pub fn mc_check_point(point: &McPoint, stats: &[Statistic], n_samples: u64, seed: u64) -> Result<Vec<McCell>> {
    let rho_q = rational_from_decimal(point.rho)?;
    let beta_q = rational_from_decimal(point.beta)?;
    let exact: Vec<Rational> = stats
        .iter()
        .map(|s| exact_statistic(point.case, *s, &rho_q, &beta_q))
        .collect();
    let first = estimates_at(point, stats, n_samples, seed)?;
    let mut cells = Vec::with_capacity(stats.len());
    let mut retry: Vec<usize> = Vec::new();
    for (i, (est, ex)) in first.iter().zip(&exact).enumerate() {
        let z = z_compare(est, ex)?;
        if z.abs() > Z_GATE {
            retry.push(i);
        }
        cells.push(McCell {
            case: point.case,
            statistic: stats[i],
            rho: point.rho,
            beta: (point.case == Case::Gamma).then_some(point.beta),
            estimate: *est,
            exact: to_f64(ex),
            z,
            attempts: 1,
            passed: z.abs() <= Z_GATE,
        });
    }
    if !retry.is_empty() {
        let sub: Vec<Statistic> = retry.iter().map(|&i| stats[i]).collect();
        let second = estimates_at(point, &sub, n_samples, retry_seed(seed))?;
        for (&i, est) in retry.iter().zip(second) {
            let z = z_compare(&est, &exact[i])?;
            cells[i] = McCell {
                estimate: est,
                z,
                attempts: 2,
                passed: z.abs() <= Z_GATE,
                ..cells[i].clone()
            };
        }
    }
    Ok(cells)
}
