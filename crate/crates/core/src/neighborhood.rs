//! Weighted coefficient neighborhoods.
//!
//! With `s_k = k(1+B)Φ_k / ((B-A)(p-σ))` (defined for `k ≥ n+p`), the
//! `η`-neighborhood of `f` is every `g` with `Σ s_k |b_k - a_k| ≤ η`.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::{coeff_bound, subordination_scan, ClassParams};
use crate::error::{param, Result};
use crate::harness::rng::stream;
use crate::report::{MarginTracker, VerifyReport, Witness};
use crate::series::{DiskGrid, NegSeries, SeriesAnp};

/// Slack on the inclusive `≤ η` boundary.
pub const NEIGHBORHOOD_TOL: f64 = 1e-12;

/// Exponents above `n + p` that random neighbors may touch.
pub const NEIGHBOR_SPAN: u32 = 64;
const NEIGHBOR_MAX_SUPPORT: usize = 8;

pub fn s_weight(cls: &ClassParams, k: u32) -> Result<f64> {
    crate::coverage::touch(crate::coverage::Op::SWeight);
    cls.validate()?;
    if k < cls.first_exponent() {
        return param(format!("k = {k} is below n + p = {}", cls.first_exponent()));
    }
    Ok(cls.weight(k) / cls.rhs())
}

fn check_pair(cls: &ClassParams, fp: (u32, u32), gp: (u32, u32)) -> Result<()> {
    if fp != gp {
        return param(format!("mismatched (p, n): {fp:?} vs {gp:?}"));
    }
    if fp != (cls.p(), cls.n) {
        return param(format!("series (p, n) = {fp:?} does not match the class"));
    }
    Ok(())
}

/// `Σ s_k |b_k - a_k|` over the union of both supports.
pub fn distance(cls: &ClassParams, f: &SeriesAnp, g: &SeriesAnp) -> Result<f64> {
    crate::coverage::touch(crate::coverage::Op::Distance);
    check_pair(cls, (f.p(), f.n()), (g.p(), g.n()))?;
    let mut ks: Vec<u32> = f.terms().chain(g.terms()).map(|(k, _)| k).collect();
    ks.sort_unstable();
    ks.dedup();
    let mut d = 0.0;
    for k in ks {
        d += s_weight(cls, k)? * (g.coeff(k) - f.coeff(k)).norm();
    }
    Ok(d)
}

/// `Σ s_k ||b_k| - |a_k||` for negative-coefficient functions.
pub fn distance_negative(cls: &ClassParams, f: &NegSeries, g: &NegSeries) -> Result<f64> {
    crate::coverage::touch(crate::coverage::Op::Distance);
    check_pair(cls, (f.p(), f.n()), (g.p(), g.n()))?;
    let mut ks: Vec<u32> = f.terms().chain(g.terms()).map(|(k, _)| k).collect();
    ks.sort_unstable();
    ks.dedup();
    let mut d = 0.0;
    for k in ks {
        d += s_weight(cls, k)? * (g.mag(k) - f.mag(k)).abs();
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodSpec {
    pub cls: ClassParams,
    pub eta: f64,
}

impl NeighborhoodSpec {
    pub fn new(cls: ClassParams, eta: f64) -> Result<Self> {
        cls.validate()?;
        if !(eta > 0.0) || !eta.is_finite() {
            return param(format!("neighborhood radius must be positive, got {eta}"));
        }
        Ok(NeighborhoodSpec { cls, eta })
    }

    pub fn contains(&self, f: &SeriesAnp, g: &SeriesAnp) -> Result<bool> {
        crate::coverage::touch(crate::coverage::Op::InNeighborhood);
        Ok(distance(&self.cls, f, g)? <= self.eta + NEIGHBORHOOD_TOL)
    }

    pub fn contains_negative(&self, f: &NegSeries, g: &NegSeries) -> Result<bool> {
        crate::coverage::touch(crate::coverage::Op::InNeighborhood);
        Ok(distance_negative(&self.cls, f, g)? <= self.eta + NEIGHBORHOOD_TOL)
    }
}

/// `n[λμ(n+p)+λ-μ] / (n[λμ(n+p)+λ-μ] + p + l)`: the largest radius for which
/// the neighborhood of a level-`(δ+1)` member stays inside level `δ`.
pub fn eta_threshold(cls: &ClassParams) -> f64 {
    crate::coverage::touch(crate::coverage::Op::EtaThreshold);
    let op = &cls.op;
    let n = cls.n as f64;
    let num = n * (op.lambda * op.mu * (n + op.p as f64) + op.lambda - op.mu);
    num / (num + op.p as f64 + op.l)
}

/// `f = z^p - c_{δ+1} z^{n+p}` on the level-`(δ+1)` boundary and
/// `g = z^p - (c_{δ+1} + c_δ η*) z^{n+p}`, where `c_δ` is the level-`δ`
/// coefficient bound at `n+p`.
pub fn witness_pair(cls: &ClassParams, eta_star: f64) -> Result<(NegSeries, NegSeries)> {
    crate::coverage::touch(crate::coverage::Op::WitnessPair);
    cls.validate()?;
    let threshold = eta_threshold(cls);
    if !(eta_star > threshold) {
        return param(format!("eta* = {eta_star} must exceed the threshold {threshold}"));
    }
    let k = cls.first_exponent();
    let upper = coeff_bound(&cls.with_delta(cls.op.delta + 1.0), k)?;
    let lower = coeff_bound(cls, k)?;
    let f = NegSeries::from_mags(cls.p(), cls.n, [(k, upper)])?;
    let g = NegSeries::from_mags(cls.p(), cls.n, [(k, upper + lower * eta_star)])?;
    Ok((f, g))
}

fn random_support(cls: &ClassParams, rng: &mut impl Rng) -> Vec<u32> {
    let lo = cls.first_exponent();
    let count = rng.gen_range(1..=NEIGHBOR_MAX_SUPPORT);
    let mut ks: Vec<u32> = (0..count).map(|_| rng.gen_range(lo..=lo + NEIGHBOR_SPAN)).collect();
    ks.sort_unstable();
    ks.dedup();
    ks
}

/// A random general-coefficient `g` with `distance(f, g) = u η`, `u` uniform
/// on `(0, 1]`.
pub fn random_neighbor(cls: &ClassParams, f: &SeriesAnp, eta: f64, rng: &mut impl Rng) -> Result<SeriesAnp> {
    let ks = random_support(cls, rng);
    let mut raw = Vec::with_capacity(ks.len());
    let mut total = 0.0;
    for &k in &ks {
        let w: f64 = rng.gen_range(0.0..1.0) + f64::EPSILON;
        let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        raw.push((k, Complex64::from_polar(w, phase)));
        total += s_weight(cls, k)? * w;
    }
    let u: f64 = 1.0 - rng.gen_range(0.0..1.0);
    let scale = u * eta / total;
    let mut terms: Vec<(u32, Complex64)> = f.terms().collect();
    for (k, d) in raw {
        match terms.iter_mut().find(|t| t.0 == k) {
            Some(t) => t.1 += d * scale,
            None => terms.push((k, d * scale)),
        }
    }
    let top = terms.iter().map(|t| t.0).max().unwrap_or(f.p());
    SeriesAnp::from_terms(f.p(), f.n(), terms)?.with_order(f.order().max(top))
}

/// A random negative-coefficient `g` with `distance_negative(f, g) ≤ η`.
/// Decreases never push a magnitude below zero.
pub fn random_neg_neighbor(cls: &ClassParams, f: &NegSeries, eta: f64, rng: &mut impl Rng) -> Result<NegSeries> {
    let mut ks = random_support(cls, rng);
    ks.extend(f.terms().map(|(k, _)| k));
    ks.sort_unstable();
    ks.dedup();
    let mut deltas = Vec::with_capacity(ks.len());
    let mut total = 0.0;
    for &k in &ks {
        let s = s_weight(cls, k)?;
        let a = f.mag(k);
        let d = if a > 0.0 && rng.gen_bool(0.5) {
            -a * rng.gen_range(0.0..=1.0)
        } else {
            eta / s * rng.gen_range(0.0..=1.0)
        };
        total += s * d.abs();
        deltas.push((k, d));
    }
    let target = eta * (1.0 - rng.gen_range(0.0..1.0));
    let scale = if total > target { target / total } else { 1.0 };
    let mags = deltas.into_iter().map(|(k, d)| (k, (f.mag(k) + d * scale).max(0.0)));
    let g = NegSeries::from_mags(f.p(), f.n(), mags)?;
    let order = f.order().max(g.order());
    g.with_order(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationSampling {
    pub eps_samples: usize,
    pub neighbors: usize,
}

impl Default for PerturbationSampling {
    fn default() -> Self {
        PerturbationSampling {
            eps_samples: 64,
            neighbors: 128,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationOutcome {
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub report: VerifyReport,
}

/// `(f + ε z^p)/(1 + ε)`.
fn eps_perturbed(f: &SeriesAnp, eps: Complex64) -> Result<SeriesAnp> {
    let inv = 1.0 / (1.0 + eps);
    SeriesAnp::from_terms(f.p(), f.n(), f.terms().map(|(k, a)| (k, a * inv)))?.with_order(f.order())
}

/// Sampled check of the perturbation criterion: if `(f + εz^p)/(1+ε)` is a
/// class member for every `|ε| < η`, then so is every `g` within distance `η`
/// of `f`.
///
/// The hypothesis is sampled at `eps_samples` values of `ε` and the
/// conclusion at `neighbors` random neighbors, each judged by
/// [`subordination_scan`]. The check fails only when the sampled hypothesis
/// holds and some sampled neighbor is not a member.
pub fn theorem41_check(
    cls: &ClassParams,
    f: &SeriesAnp,
    eta: f64,
    sampling: PerturbationSampling,
    grid: &DiskGrid,
    seed: u64,
) -> Result<PerturbationOutcome> {
    crate::coverage::touch(crate::coverage::Op::Theorem41Check);
    NeighborhoodSpec::new(*cls, eta)?;
    let eps: Vec<Complex64> = (0..sampling.eps_samples as u64)
        .map(|i| {
            let mut rng = stream(seed, "neighborhood-perturbation/eps", i);
            let r = eta * rng.gen_range(0.0..1.0);
            Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .filter(|e| (1.0 + e).norm() > 1e-12)
        .collect();
    let hyp: Vec<Result<(Complex64, VerifyReport)>> = eps
        .into_par_iter()
        .map(|e| Ok((e, subordination_scan(cls, &eps_perturbed(f, e)?, grid)?)))
        .collect();
    let mut hyp_track = MarginTracker::new();
    for h in hyp {
        let (e, rep) = h?;
        hyp_track.record(rep.worst_margin, || Witness {
            label: format!("eps = {e}"),
            point: rep.witness.as_ref().and_then(|w| w.point),
            value: rep.witness.as_ref().map_or(0.0, |w| w.value),
        });
    }
    let concl: Vec<Result<(SeriesAnp, VerifyReport)>> = (0..sampling.neighbors as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream(seed, "neighborhood-perturbation/neighbor", j);
            let g = random_neighbor(cls, f, eta, &mut rng)?;
            let rep = subordination_scan(cls, &g, grid)?;
            Ok((g, rep))
        })
        .collect();
    let mut concl_track = MarginTracker::new();
    for c in concl {
        let (g, rep) = c?;
        concl_track.record(rep.worst_margin, || Witness {
            label: format!("neighbor {}", g.to_json()),
            point: rep.witness.as_ref().and_then(|w| w.point),
            value: rep.witness.as_ref().map_or(0.0, |w| w.value),
        });
    }
    let hypothesis_holds = hyp_track.samples() == 0 || hyp_track.worst() > 0.0;
    let conclusion_holds = concl_track.samples() == 0 || concl_track.worst() > 0.0;
    let hyp_samples = hyp_track.samples();
    let mut report = if hypothesis_holds {
        let mut r = concl_track.finish_strict("neighborhood-perturbation", true);
        r.samples += hyp_samples;
        r.with_note(format!("hypothesis held on {hyp_samples} sampled eps"))
    } else {
        let mut r = hyp_track.finish_strict("neighborhood-perturbation", true);
        r.pass = true;
        r.with_note("hypothesis failed at a sampled eps; conclusion not required")
    };
    report = report.with_note("sampled, non-exhaustive");
    Ok(PerturbationOutcome {
        hypothesis_holds,
        conclusion_holds,
        report,
    })
}
