//! Random parameters and random class members.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classes::ClassParams;
use crate::error::{param, Result};
use crate::operator::OperatorParams;
use crate::series::{NegSeries, SeriesAnp};

/// Exponents above `n + p` that random members may use.
pub const MEMBER_SPAN: u32 = 64;
pub const MEMBER_MAX_SUPPORT: usize = 8;

/// Closed intervals for each class parameter. `σ` and `μ` are drawn as
/// fractions of `p` and `λ` so every draw satisfies `σ < p` and `μ ≤ λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamRanges {
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub sigma_ratio: (f64, f64),
    pub delta: (f64, f64),
    pub lambda: (f64, f64),
    pub mu_ratio: (f64, f64),
    pub l: (f64, f64),
    pub p: (u32, u32),
    pub n: (u32, u32),
}

impl Default for ParamRanges {
    fn default() -> Self {
        ParamRanges {
            a: (-1.0, 0.9),
            b: (0.05, 1.0),
            sigma_ratio: (0.0, 0.95),
            delta: (0.0, 3.0),
            lambda: (0.0, 2.0),
            mu_ratio: (0.0, 1.0),
            l: (0.0, 2.0),
            p: (1, 4),
            n: (1, 3),
        }
    }
}

fn ordered<T: PartialOrd + std::fmt::Debug>(name: &str, r: &(T, T)) -> Result<()> {
    if !(r.0 <= r.1) {
        return param(format!("range {name} is empty: {r:?}"));
    }
    Ok(())
}

impl ParamRanges {
    pub fn validate(&self) -> Result<()> {
        ordered("a", &self.a)?;
        ordered("b", &self.b)?;
        ordered("sigma_ratio", &self.sigma_ratio)?;
        ordered("delta", &self.delta)?;
        ordered("lambda", &self.lambda)?;
        ordered("mu_ratio", &self.mu_ratio)?;
        ordered("l", &self.l)?;
        ordered("p", &self.p)?;
        ordered("n", &self.n)?;
        if self.a.0 < -1.0 || self.b.1 > 1.0 || self.b.0 <= 0.0 || self.a.0 >= self.b.1 - 1e-3 {
            return param("need -1 <= A < B <= 1 with B > 0 reachable");
        }
        if self.sigma_ratio.0 < 0.0 || self.sigma_ratio.1 >= 1.0 {
            return param("sigma_ratio must lie in [0, 1)");
        }
        if self.mu_ratio.0 < 0.0 || self.mu_ratio.1 > 1.0 {
            return param("mu_ratio must lie in [0, 1]");
        }
        if self.delta.0 < 0.0 || self.lambda.0 < 0.0 || self.l.0 < 0.0 {
            return param("delta, lambda and l must be nonnegative");
        }
        if self.p.0 == 0 || self.n.0 == 0 {
            return param("p and n must be at least 1");
        }
        Ok(())
    }
}

fn uniform(rng: &mut impl Rng, r: (f64, f64)) -> f64 {
    if r.0 == r.1 {
        r.0
    } else {
        rng.gen_range(r.0..=r.1)
    }
}

pub fn random_operator(ranges: &ParamRanges, rng: &mut impl Rng) -> Result<OperatorParams> {
    let lambda = uniform(rng, ranges.lambda);
    let mu = lambda * uniform(rng, ranges.mu_ratio);
    let p = rng.gen_range(ranges.p.0..=ranges.p.1);
    OperatorParams::new(uniform(rng, ranges.delta), lambda, mu, uniform(rng, ranges.l), p)
}

/// `(A, B)` with `A < B`, drawn inside the configured intervals.
pub fn random_ab(ranges: &ParamRanges, rng: &mut impl Rng) -> (f64, f64) {
    loop {
        let b = uniform(rng, ranges.b);
        let hi = ranges.a.1.min(b - 1e-3);
        if hi >= ranges.a.0 {
            return (uniform(rng, (ranges.a.0, hi)), b);
        }
    }
}

pub fn random_class(ranges: &ParamRanges, rng: &mut impl Rng) -> Result<ClassParams> {
    let op = random_operator(ranges, rng)?;
    class_for(op, ranges, rng)
}

/// Draws `A, B, σ, n` around a given operator.
pub fn class_for(op: OperatorParams, ranges: &ParamRanges, rng: &mut impl Rng) -> Result<ClassParams> {
    let (a, b) = random_ab(ranges, rng);
    let sigma = op.p as f64 * uniform(rng, ranges.sigma_ratio);
    let n = rng.gen_range(ranges.n.0..=ranges.n.1);
    ClassParams::new(op, a, b, sigma, n)
}

fn random_support(lo: u32, rng: &mut impl Rng) -> Vec<u32> {
    let count = rng.gen_range(1..=MEMBER_MAX_SUPPORT);
    let mut ks: Vec<u32> = (0..count).map(|_| rng.gen_range(lo..=lo + MEMBER_SPAN)).collect();
    ks.sort_unstable();
    ks.dedup();
    ks
}

/// A member whose coefficient sum is exactly `load · (B-A)(p-σ)`.
pub fn member_with_load(cls: &ClassParams, load: f64, rng: &mut impl Rng) -> Result<NegSeries> {
    let ks = random_support(cls.first_exponent(), rng);
    let w: Vec<f64> = ks.iter().map(|_| rng.gen_range(f64::EPSILON..1.0)).collect();
    let total: f64 = w.iter().sum();
    let mags = ks
        .iter()
        .zip(&w)
        .map(|(&k, &wk)| (k, load * cls.rhs() * (wk / total) / cls.weight(k)));
    NegSeries::from_mags(cls.p(), cls.n, mags)
}

/// A member with load factor uniform on `(0, 1]`, support of at most eight
/// exponents in `[n+p, n+p+64]`.
pub fn random_member(cls: &ClassParams, rng: &mut impl Rng) -> Result<NegSeries> {
    let load = 1.0 - rng.gen_range(0.0..1.0);
    member_with_load(cls, load, rng)
}

/// A series with complex coefficients of modulus below 1 on a random support.
pub fn random_series(p: u32, n: u32, rng: &mut impl Rng) -> Result<SeriesAnp> {
    let ks = random_support(n + p, rng);
    let terms = ks.into_iter().map(|k| {
        let m: f64 = rng.gen_range(0.0..1.0);
        (k, Complex64::from_polar(m, rng.gen_range(0.0..std::f64::consts::TAU)))
    });
    SeriesAnp::from_terms(p, n, terms)
}
