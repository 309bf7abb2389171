//! Lower bounds for `Re(f/κ_m)` and `Re(κ_m/f)`, where `κ_m` is the partial
//! sum of `f` through `z^m`.
//!
//! With `θ_k = s_k` (the neighborhood weights) and `Σ θ_k |a_k| ≤ 1`:
//!
//! ```text
//! Re(f/κ_m) ≥ 1 - 1/θ_{m+1},    Re(κ_m/f) ≥ θ_{m+1}/(1 + θ_{m+1}).
//! ```

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::{ClassParams, MEMBERSHIP_TOL};
use crate::error::{Error, Result};
use crate::neighborhood::s_weight;
use crate::report::{MarginTracker, VerifyReport, Witness};
use crate::series::{DiskGrid, GridPoint, NegSeries, Polynomial};

/// Slack allowed below each bound on the grid.
pub const RATIO_SLACK: f64 = 1e-9;

const RESAMPLE_STEP: f64 = 1e-3;
const RESAMPLE_TRIES: u32 = 3;
const ZERO_DENOMINATOR: f64 = 1e-300;

pub fn theta(cls: &ClassParams, k: u32) -> Result<f64> {
    crate::coverage::touch(crate::coverage::Op::Theta);
    s_weight(cls, k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioBounds {
    pub f_over_partial: f64,
    pub partial_over_f: f64,
}

/// `(1 - 1/θ_{m+1}, θ_{m+1}/(1 + θ_{m+1}))`.
///
/// Accepts any `m` with `m + 1 ≥ n + p`; the bounds are meaningless unless
/// `θ_{m+1} > 1`, which is reported as a hypothesis error.
pub fn ratio_bounds(cls: &ClassParams, m: u32) -> Result<RatioBounds> {
    crate::coverage::touch(crate::coverage::Op::RatioBounds);
    let t = theta(cls, m + 1)?;
    if !(t > 1.0) {
        return Err(Error::Hypothesis(format!("theta_{} = {t} is not above 1", m + 1)));
    }
    Ok(RatioBounds {
        f_over_partial: 1.0 - 1.0 / t,
        partial_over_f: t / (1.0 + t),
    })
}

/// `z^p - z^{m+1}/θ_{m+1}`.
pub fn extremal_partial(cls: &ClassParams, m: u32) -> Result<NegSeries> {
    crate::coverage::touch(crate::coverage::Op::ExtremalPartial);
    let t = theta(cls, m + 1)?;
    NegSeries::from_mags(cls.p(), cls.n, [(m + 1, 1.0 / t)])
}

/// `Σ θ_k |a_k|`.
pub fn theta_sum(cls: &ClassParams, f: &NegSeries) -> Result<f64> {
    let mut s = 0.0;
    for (k, a) in f.terms() {
        s += theta(cls, k)? * a;
    }
    Ok(s)
}

struct Sample {
    pt: GridPoint,
    f_over_partial: f64,
    partial_over_f: f64,
}

fn ratios(f: &Polynomial, part: &Polynomial, z: Complex64) -> Option<(f64, f64)> {
    let fv = f.evaluate(z);
    let kv = part.evaluate(z);
    if fv.norm() < ZERO_DENOMINATOR || kv.norm() < ZERO_DENOMINATOR {
        return None;
    }
    Some(((fv / kv).re, (kv / fv).re))
}

fn sample(f: &Polynomial, part: &Polynomial, pt: GridPoint) -> Result<Sample> {
    for j in 0..=RESAMPLE_TRIES {
        let moved = GridPoint::polar(pt.radius, pt.angle + RESAMPLE_STEP * j as f64);
        if let Some((a, b)) = ratios(f, part, moved.z) {
            return Ok(Sample {
                pt: moved,
                f_over_partial: a,
                partial_over_f: b,
            });
        }
    }
    Err(Error::Singular(format!(
        "f or its partial sum vanishes near r = {}, angle = {}",
        pt.radius, pt.angle
    )))
}

/// A partial-sums report with the bounds and the observed minima as numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    #[serde(flatten)]
    pub report: VerifyReport,
    pub bounds: Option<RatioBounds>,
    pub observed_minima: Option<RatioBounds>,
}

/// Evaluates both ratios on the grid and passes iff each stays above its
/// bound minus [`RATIO_SLACK`]. `f` must satisfy `Σ θ_k |a_k| ≤ 1`.
pub fn verify_ratio(cls: &ClassParams, f: &NegSeries, m: u32, grid: &DiskGrid) -> Result<VerifyReport> {
    ratio_report(cls, f, m, grid).map(|r| r.report)
}

/// [`verify_ratio`] keeping the bounds and minima.
pub fn ratio_report(cls: &ClassParams, f: &NegSeries, m: u32, grid: &DiskGrid) -> Result<RatioReport> {
    crate::coverage::touch(crate::coverage::Op::VerifyRatio);
    cls.validate()?;
    grid.validate()?;
    if (f.p(), f.n()) != (cls.p(), cls.n) {
        return Err(Error::Parameter("series (p, n) does not match the class".into()));
    }
    if m + 1 < cls.first_exponent() {
        return Ok(RatioReport {
            report: MarginTracker::new()
                .finish("partial-sums", 0.0, true)
                .with_note(format!("m = {m} is below the admissible range; skipped")),
            bounds: None,
            observed_minima: None,
        });
    }
    let load = theta_sum(cls, f)?;
    if load > 1.0 + MEMBERSHIP_TOL {
        return Err(Error::Hypothesis(format!("sum of theta_k |a_k| is {load}, above 1")));
    }
    let bounds = ratio_bounds(cls, m)?;
    let fp = f.to_series().to_polynomial();
    let part = f.partial_sum(m).to_series().to_polynomial();
    let samples: Vec<Result<Sample>> = grid.points().into_par_iter().map(|pt| sample(&fp, &part, pt)).collect();
    let mut tracker = MarginTracker::new();
    let (mut min_a, mut min_b) = (f64::INFINITY, f64::INFINITY);
    for s in samples {
        let s = s?;
        min_a = min_a.min(s.f_over_partial);
        min_b = min_b.min(s.partial_over_f);
        let (ma, mb) = (s.f_over_partial - bounds.f_over_partial, s.partial_over_f - bounds.partial_over_f);
        let (margin, value, which) = if ma <= mb {
            (ma, s.f_over_partial, "Re(f/partial)")
        } else {
            (mb, s.partial_over_f, "Re(partial/f)")
        };
        tracker.record(margin, || Witness {
            label: format!("{which} at r = {}, angle = {:.6}", s.pt.radius, s.pt.angle),
            point: Some([s.pt.z.re, s.pt.z.im]),
            value,
        });
    }
    let report = tracker
        .finish("partial-sums", RATIO_SLACK, true)
        .with_note("range read as m >= n + p")
        .with_note(format!(
            "bounds {:.12} / {:.12}, observed minima {:.12} / {:.12}",
            bounds.f_over_partial, bounds.partial_over_f, min_a, min_b
        ));
    Ok(RatioReport {
        report,
        bounds: Some(bounds),
        observed_minima: Some(RatioBounds {
            f_over_partial: min_a,
            partial_over_f: min_b,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::OperatorParams;

    fn silverman() -> ClassParams {
        ClassParams::new(OperatorParams::new(0.0, 1.0, 0.0, 0.0, 1).unwrap(), -1.0, 1.0, 0.0, 1).unwrap()
    }

    #[test]
    fn theta_examples() {
        for k in 2..10 {
            assert_eq!(theta(&silverman(), k).unwrap(), k as f64);
        }
        let b = ratio_bounds(&silverman(), 1).unwrap();
        assert_eq!((b.f_over_partial, b.partial_over_f), (0.5, 2.0 / 3.0));
        assert!(theta(&silverman(), 1).is_err());
    }

    #[test]
    fn identity_ratios_are_one() {
        let f = NegSeries::identity(1, 1).unwrap();
        let r = verify_ratio(&silverman(), &f, 3, &DiskGrid::default_grid()).unwrap();
        assert!(r.pass);
        // the second bound 4/5 is the tighter one
        assert!((r.worst_margin - (1.0 - 0.8)).abs() < 1e-12);
    }

    #[test]
    fn extremal_approaches_bound() {
        let cls = ClassParams::new(OperatorParams::new(1.0, 0.9, 0.3, 0.2, 2).unwrap(), -0.2, 0.6, 0.7, 1).unwrap();
        for m in 3..8 {
            let f = extremal_partial(&cls, m).unwrap();
            assert!((theta_sum(&cls, &f).unwrap() - 1.0).abs() < 1e-15);
            let grid = DiskGrid::radial(vec![0.5, 0.9, 0.99, 0.999, 0.9999]).unwrap();
            let r = verify_ratio(&cls, &f, m, &grid).unwrap();
            assert!(r.pass);
            let t = theta(&cls, m + 1).unwrap();
            let want = (1.0 - 0.9999f64.powi((m - 2 + 1) as i32)) / t;
            assert!((r.worst_margin - want).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn gate_rejects_heavy_functions() {
        let f = NegSeries::from_mags(1, 1, [(2, 0.6)]).unwrap();
        assert!(matches!(
            verify_ratio(&silverman(), &f, 2, &DiskGrid::default_grid()),
            Err(Error::Hypothesis(_))
        ));
    }
}
