//! Janowski-type classes built on the multiplier transformation.
//!
//! A function `f ∈ A(n, p)` belongs to the class with parameters
//! `(A, B, σ)` at level `δ` when `F = J_p^δ f` satisfies
//!
//! ```text
//! | (F'/z^{p-1} - p) / (B F'/z^{p-1} - [pB + (A - B)(p - σ)]) | < 1   on |z| < 1.
//! ```
//!
//! For negative-coefficient functions `z^p - Σ |a_k| z^k` this is equivalent to
//! the linear coefficient condition `Σ k(1+B)Φ_k |a_k| ≤ (B - A)(p - σ)`,
//! which is what [`coeff_sum`] evaluates exactly. For general coefficients the
//! same inequality on `|a_k|` is only sufficient, and the disk condition is
//! checked by sampling ([`subordination_scan`]).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::fractional::gamma::factorial_ratio;
use crate::operator::{apply_j, OperatorParams};
use crate::report::{MarginTracker, VerifyReport, Witness};
use crate::series::{DiskGrid, GridPoint, NegSeries, SeriesAnp};

/// Absolute slack on the membership margin. Boundary functions are members.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Below this the indicator's denominator is treated as zero.
const SINGULAR_DENOMINATOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    pub op: OperatorParams,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub sigma: f64,
    pub n: u32,
}

impl ClassParams {
    pub fn new(op: OperatorParams, a: f64, b: f64, sigma: f64, n: u32) -> Result<Self> {
        let cls = ClassParams { op, a, b, sigma, n };
        cls.validate()?;
        Ok(cls)
    }

    /// `-1 ≤ A < B ≤ 1`, `0 < B`, `0 ≤ σ < p`, `n ≥ 1`, plus the operator's own
    /// constraints.
    pub fn validate(&self) -> Result<()> {
        self.op.validate()?;
        if self.n == 0 {
            return param("gap index n must be at least 1");
        }
        if !(-1.0 <= self.a && self.a < self.b && self.b <= 1.0 && self.b > 0.0) {
            return param(format!("need -1 <= A < B <= 1 and B > 0, got A = {}, B = {}", self.a, self.b));
        }
        if !(0.0 <= self.sigma && self.sigma < self.op.p as f64) {
            return param(format!("need 0 <= sigma < p, got sigma = {} with p = {}", self.sigma, self.op.p));
        }
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.op.p
    }

    /// Smallest exponent after `z^p`.
    pub fn first_exponent(&self) -> u32 {
        self.n + self.op.p
    }

    /// `(B - A)(p - σ)`.
    pub fn rhs(&self) -> f64 {
        (self.b - self.a) * (self.op.p as f64 - self.sigma)
    }

    /// `k(1 + B)Φ_p^k`.
    pub fn weight(&self, k: u32) -> f64 {
        k as f64 * (1.0 + self.b) * self.op.phi(k)
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        ClassParams {
            op: self.op.with_delta(delta),
            ..*self
        }
    }

    pub fn with_sigma(&self, sigma: f64) -> Self {
        ClassParams { sigma, ..*self }
    }

    fn check_shape(&self, p: u32, n: u32) -> Result<()> {
        if p != self.op.p || n != self.n {
            return param(format!(
                "series has (p, n) = ({p}, {n}) but the class has ({}, {})",
                self.op.p, self.n
            ));
        }
        Ok(())
    }

    fn check_exponent(&self, k: u32) -> Result<()> {
        if k < self.first_exponent() {
            return param(format!("k = {k} is below n + p = {}", self.first_exponent()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub member: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl MembershipVerdict {
    fn new(lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        MembershipVerdict {
            member: margin >= -MEMBERSHIP_TOL,
            lhs,
            rhs,
            margin,
        }
    }
}

/// Exact membership test for a negative-coefficient function.
pub fn coeff_sum(cls: &ClassParams, f: &NegSeries) -> Result<MembershipVerdict> {
    crate::coverage::touch(crate::coverage::Op::CoeffSum);
    cls.validate()?;
    cls.check_shape(f.p(), f.n())?;
    let lhs = f.terms().map(|(k, m)| cls.weight(k) * m).sum();
    Ok(MembershipVerdict::new(lhs, cls.rhs()))
}

/// The same coefficient sum on `|a_k|` for a general series; passing it is
/// sufficient (not necessary) for membership.
pub fn coeff_sum_abs(cls: &ClassParams, f: &SeriesAnp) -> Result<MembershipVerdict> {
    cls.validate()?;
    cls.check_shape(f.p(), f.n())?;
    let lhs = f.terms().map(|(k, a)| cls.weight(k) * a.norm()).sum();
    Ok(MembershipVerdict::new(lhs, cls.rhs()))
}

/// Sharp bound `|a_k| ≤ (B - A)(p - σ) / (k(1 + B)Φ_p^k)`.
pub fn coeff_bound(cls: &ClassParams, k: u32) -> Result<f64> {
    crate::coverage::touch(crate::coverage::Op::CoeffBound);
    cls.validate()?;
    cls.check_exponent(k)?;
    Ok(cls.rhs() / cls.weight(k))
}

/// `z^p - coeff_bound(k) z^k`, sitting exactly on the class boundary.
pub fn extremal_term(cls: &ClassParams, k: u32) -> Result<NegSeries> {
    crate::coverage::touch(crate::coverage::Op::ExtremalTerm);
    let m = coeff_bound(cls, k)?;
    NegSeries::from_mags(cls.p(), cls.n, [(k, m)])
}

/// Precomputed `k Φ_k a_k` for repeated indicator evaluation.
struct Indicator {
    p: u32,
    terms: Vec<(u32, Complex64)>,
    b: f64,
    bracket: f64,
}

impl Indicator {
    fn new(cls: &ClassParams, f: &SeriesAnp) -> Result<Self> {
        cls.validate()?;
        cls.check_shape(f.p(), f.n())?;
        let transformed = apply_j(&cls.op, f)?;
        let p = cls.p();
        let pf = p as f64;
        Ok(Indicator {
            p,
            terms: transformed.terms().map(|(k, a)| (k - p, a * k as f64)).collect(),
            b: cls.b,
            bracket: pf * cls.b + (cls.a - cls.b) * (pf - cls.sigma),
        })
    }

    fn eval(&self, z: Complex64) -> Result<f64> {
        // F'/z^{p-1} - p, summed directly rather than by cancellation.
        let mut excess = Complex64::default();
        let mut power = Complex64::new(1.0, 0.0);
        let mut last = 0;
        for &(e, c) in &self.terms {
            power *= z.powu(e - last);
            last = e;
            excess += c * power;
        }
        let ratio = excess + self.p as f64;
        let den = ratio * self.b - self.bracket;
        if den.norm() < SINGULAR_DENOMINATOR {
            return Err(Error::Singular(format!("indicator denominator vanishes at z = {z}")));
        }
        Ok((excess / den).norm())
    }
}

/// `|(F'/z^{p-1} - p) / (B F'/z^{p-1} - [pB + (A - B)(p - σ)])|` with
/// `F = J_p^δ f`. Values below 1 satisfy the class condition at `z`.
pub fn subordination_indicator(cls: &ClassParams, f: &SeriesAnp, z: Complex64) -> Result<f64> {
    crate::coverage::touch(crate::coverage::Op::SubordinationIndicator);
    Indicator::new(cls, f)?.eval(z)
}

const RESAMPLE_STEP: f64 = 1e-3;
const RESAMPLE_TRIES: u32 = 3;

fn eval_with_resample(ind: &Indicator, pt: GridPoint) -> Result<(f64, GridPoint)> {
    match ind.eval(pt.z) {
        Ok(v) => Ok((v, pt)),
        Err(Error::Singular(_)) => {
            for j in 1..=RESAMPLE_TRIES {
                let moved = GridPoint::polar(pt.radius, pt.angle + RESAMPLE_STEP * j as f64);
                if let Ok(v) = ind.eval(moved.z) {
                    return Ok((v, moved));
                }
            }
            Err(Error::Singular(format!(
                "indicator singular at r = {}, angle = {} after {RESAMPLE_TRIES} resamples",
                pt.radius, pt.angle
            )))
        }
        Err(e) => Err(e),
    }
}

/// Sampled check of the class condition: evaluates the indicator on every
/// grid point and passes iff the maximum stays below 1. `worst_margin` is
/// `1 - max`. This is a falsifier, not a proof.
pub fn subordination_scan(cls: &ClassParams, f: &SeriesAnp, grid: &DiskGrid) -> Result<VerifyReport> {
    crate::coverage::touch(crate::coverage::Op::SubordinationScan);
    grid.validate()?;
    let ind = Indicator::new(cls, f)?;
    let values: Vec<Result<(f64, GridPoint)>> =
        grid.points().into_par_iter().map(|pt| eval_with_resample(&ind, pt)).collect();
    let mut tracker = MarginTracker::new();
    for v in values {
        let (value, pt) = v?;
        tracker.record(1.0 - value, || Witness {
            label: format!("indicator at r = {}, angle = {:.6}", pt.radius, pt.angle),
            point: Some([pt.z.re, pt.z.im]),
            value,
        });
    }
    Ok(tracker.finish_strict("subordination-scan", true))
}

/// Growth (`q = 0`) and distortion (`q ≥ 1`) bounds on `|f^{(q)}(z)|` over
/// `|z| = r` for negative-coefficient class members:
///
/// ```text
/// (p!/(p-q)! ∓ (B-A)(p-σ)(n+p-1)! / ((1+B)Φ_{n+p}(n+p-q)!) r^n) r^{p-q}
/// ```
///
/// The lower value is returned as computed, even when negative.
pub fn distortion_bounds(cls: &ClassParams, q: u32, r: f64) -> Result<(f64, f64)> {
    crate::coverage::touch(crate::coverage::Op::DistortionBounds);
    cls.validate()?;
    let p = cls.p();
    if q >= p {
        return param(format!("derivative order q = {q} must be below p = {p}"));
    }
    if !(0.0..1.0).contains(&r) {
        return param(format!("radius {r} is outside [0, 1)"));
    }
    let m = cls.first_exponent();
    let lead = factorial_ratio(p, p - q);
    let spread = cls.rhs() * factorial_ratio(m - 1, m - q) / ((1.0 + cls.b) * cls.op.phi(m)) * r.powi(cls.n as i32);
    let scale = r.powi((p - q) as i32);
    Ok(((lead - spread) * scale, (lead + spread) * scale))
}

/// `λ - μ ≥ (l + p)/(2p)` or `λ = μ = 0`.
pub fn inclusion_hypothesis(op: &OperatorParams) -> bool {
    crate::coverage::touch(crate::coverage::Op::InclusionHypothesis);
    let p = op.p as f64;
    (op.lambda == 0.0 && op.mu == 0.0) || op.lambda - op.mu >= (op.l + p) / (2.0 * p)
}

/// `Re{1 + Σ_{k=n+p}^{order} z^{k-p} / Φ_p^k(1, λ, μ, l)}`.
///
/// With `λ = μ = 0` every multiplier is 1 and the full series
/// `1 + z^n/(1 - z)` is summed in closed form instead.
pub fn kernel_real_part(op: &OperatorParams, n: u32, z: Complex64, order: u32) -> f64 {
    crate::coverage::touch(crate::coverage::Op::KernelRealPart);
    if op.lambda == 0.0 && op.mu == 0.0 {
        return (1.0 + z.powu(n) / (1.0 - z)).re;
    }
    let unit = op.with_delta(1.0);
    let p = op.p;
    let mut acc = Complex64::new(1.0, 0.0);
    let mut power = z.powu(n);
    for k in (n + p)..=order.max(n + p) {
        acc += power / unit.phi(k);
        power *= z;
    }
    acc.re
}
