//! Exchangeable vectors under the uniform-permutation law: conditional
//! moments, negative covariance, the variance bound, concentration of
//! exchangeable random measures, and a counterexample to a Gaussian-type tail
//! bound for exchangeable sums.

mod concentration;

pub use concentration::{
    measure_concentration_check, permutation_trend_test, ConcentrationReport, ConcentrationRow, MassGenerator,
};

use crate::ghp::{q_int, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

/// Largest length handled by permutation enumeration.
pub const ENUMERATION_MAX: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExchError {
    #[error("need at least {need} values, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("index {0} out of range")]
    Index(usize),
    #[error("indices must differ")]
    SameIndex,
    #[error("{0} values exceed the enumeration limit")]
    TooLong(usize),
    #[error("mixture weights must be positive and the classes nonempty and of equal length")]
    BadMixture,
    #[error("generator failed the exchangeability test (p = {0:.4})")]
    NotExchangeable(f64),
}

/// A value vector; its law is the uniform law over its coordinate
/// permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeableVector {
    pub values: Vec<Q>,
}

impl ExchangeableVector {
    pub fn new(values: Vec<Q>) -> Self {
        ExchangeableVector { values }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        ExchangeableVector { values: values.iter().map(|&v| q_int(v)).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm2_sq(&self) -> Q {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn total(&self) -> Q {
        self.values.iter().sum()
    }

    /// Integer coordinates after clearing denominators, with the scale.
    fn scaled(&self) -> (Vec<i128>, BigInt) {
        let mut l = BigInt::one();
        for v in &self.values {
            l = l.lcm(v.denom());
        }
        let ints = self.values.iter().map(|v| (v.numer() * (&l / v.denom())).to_i128().expect("small values")).collect();
        (ints, l)
    }
}

/// Visits every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            visit(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// `E[f(ξ_k) | class] = (1/n) Σ f(x_i)` and
/// `E[g(ξ_k, ξ_l) | class] = (1/(n(n-1))) Σ_{i≠j} g(x_i, x_j)`.
pub fn empirical_conditional_moments(
    v: &ExchangeableVector,
    f: impl Fn(&Q) -> Q,
    g: impl Fn(&Q, &Q) -> Q,
) -> Result<(Q, Q), ExchError> {
    let n = v.len();
    if n < 2 {
        return Err(ExchError::TooShort { need: 2, got: n });
    }
    let single: Q = v.values.iter().map(&f).sum::<Q>() / q_int(n as i64);
    let mut pair = Q::zero();
    for (i, a) in v.values.iter().enumerate() {
        for (j, b) in v.values.iter().enumerate() {
            if i != j {
                pair += g(a, b);
            }
        }
    }
    Ok((single, pair / q_int((n * (n - 1)) as i64)))
}

/// The same two moments by averaging over all `n!` permutations.
pub fn enumerated_moments(
    v: &ExchangeableVector,
    f: impl Fn(&Q) -> Q,
    g: impl Fn(&Q, &Q) -> Q,
    k: usize,
    l: usize,
) -> Result<(Q, Q), ExchError> {
    check_pair(v, k, l)?;
    let mut s1 = Q::zero();
    let mut s2 = Q::zero();
    for_each_permutation(v.len(), |p| {
        s1 += f(&v.values[p[k]]);
        s2 += g(&v.values[p[k]], &v.values[p[l]]);
    });
    let total = Q::from_integer(factorial(v.len()));
    Ok((s1 / &total, s2 / total))
}

fn check_pair(v: &ExchangeableVector, k: usize, l: usize) -> Result<(), ExchError> {
    let n = v.len();
    if n > ENUMERATION_MAX {
        return Err(ExchError::TooLong(n));
    }
    if n < 2 {
        return Err(ExchError::TooShort { need: 2, got: n });
    }
    if k >= n || l >= n {
        return Err(ExchError::Index(k.max(l)));
    }
    if k == l {
        return Err(ExchError::SameIndex);
    }
    Ok(())
}

/// `Cov(ξ_k, ξ_l | class)` in closed form.
pub fn conditional_covariance(v: &ExchangeableVector, k: usize, l: usize) -> Result<Q, ExchError> {
    let n = v.len();
    if k >= n || l >= n {
        return Err(ExchError::Index(k.max(l)));
    }
    if k == l {
        return Err(ExchError::SameIndex);
    }
    let (mean, pair) = empirical_conditional_moments(v, |x| x.clone(), |a, b| a * b)?;
    Ok(pair - &mean * &mean)
}

/// `Cov(ξ_k, ξ_l | class)` by permutation enumeration, in integer arithmetic.
pub fn covariance_by_enumeration(v: &ExchangeableVector, k: usize, l: usize) -> Result<Q, ExchError> {
    check_pair(v, k, l)?;
    let (x, scale) = v.scaled();
    let (mut sk, mut sl, mut skl) = (0i128, 0i128, 0i128);
    for_each_permutation(v.len(), |p| {
        sk += x[p[k]];
        sl += x[p[l]];
        skl += x[p[k]] * x[p[l]];
    });
    let m = factorial(v.len());
    let num = Q::new(BigInt::from(skl), m.clone()) - Q::new(BigInt::from(sk), m.clone()) * Q::new(BigInt::from(sl), m);
    Ok(num / Q::from_integer(&scale * &scale))
}

/// Finite mixture of value classes: pick a class with probability
/// proportional to its weight, then permute uniformly.
#[derive(Clone, Debug, PartialEq)]
pub struct ExchangeableMixture {
    pub classes: Vec<(Q, ExchangeableVector)>,
}

impl ExchangeableMixture {
    pub fn single(v: ExchangeableVector) -> Self {
        ExchangeableMixture { classes: vec![(Q::one(), v)] }
    }

    fn n(&self) -> Result<usize, ExchError> {
        let n = self.classes.first().ok_or(ExchError::BadMixture)?.1.len();
        let ok = self.classes.iter().all(|(w, v)| *w > Q::zero() && v.len() == n) && n > 0;
        ok.then_some(n).ok_or(ExchError::BadMixture)
    }

    fn probabilities(&self) -> Vec<Q> {
        let total: Q = self.classes.iter().map(|(w, _)| w.clone()).sum();
        self.classes.iter().map(|(w, _)| w / &total).collect()
    }

    /// A random mixture of 1 to 3 integer classes of length `n`.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let c = rng.gen_range(1..=3);
        let classes = (0..c)
            .map(|_| {
                let w = q_int(rng.gen_range(1..=5));
                (w, ExchangeableVector::from_ints(&(0..n).map(|_| rng.gen_range(-6..=6)).collect::<Vec<_>>()))
            })
            .collect();
        ExchangeableMixture { classes }
    }
}

/// One side-by-side evaluation of an inequality `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub lhs: Q,
    pub rhs: Q,
    pub holds: bool,
}

impl BoundCheck {
    pub fn margin(&self) -> Q {
        &self.rhs - &self.lhs
    }

    /// `trial,lhs,rhs,margin` with exact rationals.
    pub fn csv_row(&self, trial: usize) -> String {
        format!("{trial},{},{},{}", self.lhs, self.rhs, self.margin())
    }
}

pub const BOUND_CSV_HEADER: &str = "trial,lhs,rhs,margin";

/// `E[S_k | class]` and `E[S_k^2 | class]`, exactly.
fn partial_sum_moments(v: &ExchangeableVector, k: usize) -> (Q, Q) {
    if v.len() <= ENUMERATION_MAX {
        partial_sum_moments_enumerated(v, k)
    } else {
        partial_sum_moments_closed(v, k)
    }
}

fn partial_sum_moments_enumerated(v: &ExchangeableVector, k: usize) -> (Q, Q) {
    let n = v.len();
    {
        let (x, scale) = v.scaled();
        let (mut s, mut s2) = (0i128, 0i128);
        for_each_permutation(n, |p| {
            let t: i128 = p[..k].iter().map(|&i| x[i]).sum();
            s += t;
            s2 += t * t;
        });
        let m = factorial(n);
        let sc = Q::from_integer(scale);
        (Q::new(BigInt::from(s), m.clone()) / &sc, Q::new(BigInt::from(s2), m) / (&sc * &sc))
    }
}

/// Sampling without replacement: `Var(S_k) = k (n−k)/(n−1) σ²`.
fn partial_sum_moments_closed(v: &ExchangeableVector, k: usize) -> (Q, Q) {
    let n = v.len();
    {
        let nn = q_int(n as i64);
        let mean = v.total() / &nn;
        let sigma2 = v.norm2_sq() / &nn - &mean * &mean;
        let kk = q_int(k as i64);
        let var = if n == 1 { Q::zero() } else { &kk * q_int((n - k) as i64) / q_int(n as i64 - 1) * sigma2 };
        let e = &kk * &mean;
        let e2 = var + &e * &e;
        (e, e2)
    }
}

/// `Var(S_k) ≤ (k/n) E‖ξ‖² + (k²/n²) Var(S_n)` for a mixture law, with the
/// left side computed exactly.
pub fn variance_bound_check(law: &ExchangeableMixture, k: usize) -> Result<BoundCheck, ExchError> {
    let n = law.n()?;
    if k == 0 || k > n {
        return Err(ExchError::Index(k));
    }
    let probs = law.probabilities();
    let (mut e, mut e2, mut norm, mut tot, mut tot2) = (Q::zero(), Q::zero(), Q::zero(), Q::zero(), Q::zero());
    for ((_, v), p) in law.classes.iter().zip(&probs) {
        let (a, b) = partial_sum_moments(v, k);
        e += p * a;
        e2 += p * b;
        norm += p * v.norm2_sq();
        let t = v.total();
        tot += p * &t;
        tot2 += p * &t * &t;
    }
    let lhs = e2 - &e * &e;
    let var_n = tot2 - &tot * &tot;
    let (kk, nn) = (q_int(k as i64), q_int(n as i64));
    let rhs = &kk / &nn * norm + &kk * &kk / (&nn * &nn) * var_n;
    let holds = lhs <= rhs;
    Ok(BoundCheck { lhs, rhs, holds })
}

/// Outcome of a batch of random variance-bound and covariance trials.
#[derive(Clone, Debug, PartialEq)]
pub struct ExchangeableTrials {
    pub trials: usize,
    pub bound_violations: usize,
    pub positive_covariances: usize,
    pub identity_mismatches: usize,
    pub rows: Vec<String>,
}

/// Random mixtures with `n ≤ max_n`: checks the variance bound at a random
/// `k`, the sign of every class's conditional covariance, and the closed
/// forms against enumeration.
pub fn random_trials<R: Rng>(trials: usize, max_n: usize, rng: &mut R) -> ExchangeableTrials {
    let mut out =
        ExchangeableTrials { trials, bound_violations: 0, positive_covariances: 0, identity_mismatches: 0, rows: Vec::new() };
    for t in 0..trials {
        let n = rng.gen_range(1..=max_n);
        let law = ExchangeableMixture::random(n, rng);
        let k = rng.gen_range(1..=n);
        let check = variance_bound_check(&law, k).expect("valid law");
        out.bound_violations += !check.holds as usize;
        out.rows.push(check.csv_row(t));
        if n >= 2 {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n - 1));
            let b = if b >= a { b + 1 } else { b };
            for (_, v) in &law.classes {
                let c = covariance_by_enumeration(v, a, b).unwrap();
                out.positive_covariances += (c > Q::zero()) as usize;
                out.identity_mismatches += (conditional_covariance(v, a, b).unwrap() != c) as usize;
            }
        }
    }
    out
}

/// The tail bound `P(|Σ_{i≤k} (X_i − E X_i)| > 2t | ‖X‖₂) ≤ 2 exp(−2t²/‖X‖₂²)`
/// evaluated on `X = (Y, …, Y)` with `k = n` and `t = εn`.
#[derive(Clone, Debug, PartialEq)]
pub struct RemarkReport {
    pub epsilon: f64,
    pub values: Vec<f64>,
    pub mean: f64,
    /// Per value of `Y`: the indicator `1{|Y − EY| > 2ε}` and the first `n`
    /// with `2 exp(−2nε²/Y²)` below it, if any.
    pub per_value: Vec<(f64, u8, Option<u64>)>,
    /// First `n` at which the bound fails for some value of `Y`.
    pub first_violation: Option<u64>,
    /// First `n` at which it fails for every value of `Y`.
    pub violated_surely_from: Option<u64>,
    pub displayed: String,
}

impl RemarkReport {
    pub fn rhs(&self, n: u64, y: f64) -> f64 {
        2.0 * (-2.0 * n as f64 * self.epsilon * self.epsilon / (y * y)).exp()
    }
}

/// `Y` uniform on `values`.
pub fn remark_counterexample(values: &[f64], epsilon: f64) -> RemarkReport {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let per_value: Vec<(f64, u8, Option<u64>)> = values
        .iter()
        .map(|&y| {
            let ind = ((y - mean).abs() > 2.0 * epsilon) as u8;
            // 2 exp(−2nε²/y²) < 1  iff  n > y² ln 2 / (2ε²)
            let first = (ind == 1).then(|| {
                let t = y * y * std::f64::consts::LN_2 / (2.0 * epsilon * epsilon);
                let mut n = t.floor().max(0.0) as u64;
                while 2.0 * (-2.0 * n as f64 * epsilon * epsilon / (y * y)).exp() >= 1.0 {
                    n += 1;
                }
                n
            });
            (y, ind, first)
        })
        .collect();
    let firsts: Vec<Option<u64>> = per_value.iter().map(|p| p.2).collect();
    let first_violation = firsts.iter().flatten().min().copied();
    let violated_surely_from = if firsts.iter().all(|f| f.is_some()) { firsts.iter().flatten().max().copied() } else { None };
    RemarkReport {
        epsilon,
        values: values.to_vec(),
        mean,
        per_value,
        first_violation,
        violated_surely_from,
        displayed: "1{|Y - E Y| > 2 eps} <= 2 exp(-2 n eps^2 / Y^2)".into(),
    }
}
