//! The individual campaign checks. Each one draws its randomness from
//! [`stream`] keyed by its own id, runs its samples in parallel, and folds the
//! margins in sample order so the report does not depend on scheduling.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::rng::stream;
use super::sample::{member_with_load, random_class, random_member, random_operator, random_series};
use super::CampaignConfig;
use crate::classes::{
    coeff_sum, distortion_bounds, extremal_term, inclusion_hypothesis, kernel_real_part, subordination_indicator,
    subordination_scan, ClassParams, MEMBERSHIP_TOL,
};
use crate::closure::{cauchy_schwarz_sum, closure_check, extremal_tuple, upsilon, ClosureKind};
use crate::error::{Error, Result};
use crate::fractional::quadrature::{bernardi_integral, fractional_integral};
use crate::fractional::{
    bernardi, bernardi_general, bounds_71, bounds_72, compose_direct, derivative_gate, frac_apply, frac_power,
    lemma71_compose, theta_kernel, wp_kernel, ComposeOrder, FracParams, GeneralizedSeries,
};
use crate::neighborhood::{
    distance_negative, eta_threshold, random_neg_neighbor, theorem41_check, witness_pair, NeighborhoodSpec,
    PerturbationSampling,
};
use crate::operator::{apply_j, apply_j_recursive, preset, OperatorParams, Preset};
use crate::partial_sums::{extremal_partial, verify_ratio};
use crate::report::{MarginTracker, VerifyReport, Witness};
use crate::series::{quasi_conv, DiskGrid, NegSeries, RADIAL_PROBES};

pub(super) fn dispatch(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    match id {
        "closure-sharpness" => closure_sharpness(cfg, id),
        "coefficient-necessity" => coefficient_necessity(cfg, id),
        "coefficient-sharpness" => coefficient_sharpness(cfg, id),
        "coefficient-sufficiency" => coefficient_sufficiency(cfg, id),
        "distortion" => distortion(cfg, id),
        "fractional-compose" => fractional_compose(cfg, id),
        "fractional-derivative-bounds" => fractional_bounds(cfg, id, false),
        "fractional-integral-bounds" => fractional_bounds(cfg, id, true),
        "fractional-quadrature" => fractional_quadrature(cfg, id),
        "inclusion-ab" => inclusion_ab(cfg, id),
        "inclusion-delta" => inclusion_delta(cfg, id),
        "kernel-real-part" => kernel_real(cfg, id),
        "neighborhood-perturbation" => neighborhood_perturbation(cfg, id),
        "neighborhood-radius" => neighborhood_radius(cfg, id),
        "neighborhood-sharpness" => neighborhood_sharpness(cfg, id),
        "operator-recursion" => operator_recursion(cfg, id),
        "partial-sums" => partial_sums(cfg, id),
        "partial-sums-sharpness" => partial_sums_sharpness(cfg, id),
        "quasi-convolution" => closure_random(cfg, id, ClosureKind::Product),
        "square-sum" => closure_random(cfg, id, ClosureKind::Squares),
        _ => Err(Error::UnknownName(id.to_string())),
    }
}

/// Runs `count` independent samples in parallel and merges them in index
/// order.
fn par_samples<F>(cfg: &CampaignConfig, id: &str, count: usize, body: F) -> Result<MarginTracker>
where
    F: Fn(&mut ChaCha8Rng, u64) -> Result<MarginTracker> + Sync,
{
    let parts: Vec<Result<MarginTracker>> = (0..count as u64)
        .into_par_iter()
        .map(|i| body(&mut stream(cfg.seed, id, i), i))
        .collect();
    let mut tracker = MarginTracker::new();
    for p in parts {
        tracker.merge(p?);
    }
    Ok(tracker)
}

fn witness(label: String, point: Option<Complex64>, value: f64) -> Witness {
    Witness {
        label,
        point: point.map(|z| [z.re, z.im]),
        value,
    }
}

fn describe(cls: &ClassParams) -> String {
    let op = &cls.op;
    format!(
        "p={} n={} delta={} lambda={} mu={} l={} A={} B={} sigma={}",
        op.p, cls.n, op.delta, op.lambda, op.mu, op.l, cls.a, cls.b, cls.sigma
    )
}

fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if lo >= hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

/// The parameter set with `p = 4, n = 1, δ = 0, λ = 1, μ = l = 0, A = -1,
/// B = 1, σ = 0` used as a fixed panel by several checks.
fn panel() -> Result<ClassParams> {
    ClassParams::new(OperatorParams::new(0.0, 1.0, 0.0, 0.0, 4)?, -1.0, 1.0, 0.0, 1)
}

fn operator_recursion(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let tol = cfg.tol(id, 1e-10);
    let t = par_samples(cfg, id, cfg.param_sets, |rng, i| {
        let name = Preset::ALL[i as usize % Preset::ALL.len()].name();
        let base = random_operator(&cfg.ranges, rng)?;
        let n = rng.gen_range(cfg.ranges.n.0..=cfg.ranges.n.1);
        let mut t = MarginTracker::new();
        for delta in [1.0, 2.0, 3.0] {
            let op = preset(name)?.apply_to(base.with_delta(delta))?;
            for _ in 0..cfg.series_per_set {
                let f = random_series(op.p, n, rng)?;
                let direct = apply_j(&op, &f)?;
                let recursive = apply_j_recursive(&op, &f)?;
                let mut err: f64 = 0.0;
                for k in 0..=direct.order().max(recursive.order()) {
                    let (a, b) = (direct.coeff(k), recursive.coeff(k));
                    let scale = a.norm().max(b.norm());
                    if scale > 0.0 {
                        err = err.max((a - b).norm() / scale);
                    }
                }
                t.record(tol - err, || {
                    witness(format!("{name} delta={delta} p={} n={n} series {}", op.p, f.to_json()), None, err)
                });
            }
        }
        Ok(t)
    })?;
    Ok(t.finish(id, 0.0, false))
}

fn coefficient_sharpness(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let tol = cfg.tol(id, MEMBERSHIP_TOL);
    let t = par_samples(cfg, id, cfg.param_sets, |rng, _| {
        let cls = random_class(&cfg.ranges, rng)?;
        let mut t = MarginTracker::new();
        let lo = cls.first_exponent();
        for k in lo..=lo + 20 {
            let f = extremal_term(&cls, k)?;
            let edge = coeff_sum(&cls, &f)?.margin;
            let inside = coeff_sum(&cls, &f.scaled(1.0 - 1e-3)?)?.member;
            let outside = !coeff_sum(&cls, &f.scaled(1.0 + 1e-3)?)?.member;
            let margin = if inside && outside { tol - edge.abs() } else { -1.0 };
            t.record(margin, || {
                witness(
                    format!("k={k} {} (inside={inside}, outside={outside})", describe(&cls)),
                    None,
                    edge,
                )
            });
        }
        Ok(t)
    })?;
    Ok(t.finish(id, 0.0, false))
}

fn coefficient_sufficiency(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let t = par_samples(cfg, id, cfg.sufficiency_members, |rng, _| {
        let cls = random_class(&cfg.ranges, rng)?;
        let f = random_member(&cls, rng)?;
        let rep = subordination_scan(&cls, &f.to_series(), &cfg.grid)?;
        let mut t = MarginTracker::new();
        let mut rep = rep;
        if let Some(w) = rep.witness.as_mut() {
            w.label = format!("{} for {} f={}", w.label, describe(&cls), f.to_json());
        }
        t.absorb(&rep);
        Ok(t)
    })?;
    Ok(t.finish_strict(id, true))
}

fn coefficient_necessity(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let t = par_samples(cfg, id, cfg.violators, |rng, _| {
        let cls = random_class(&cfg.ranges, rng)?;
        let f = member_with_load(&cls, 1.0, rng)?.scaled(1.1)?.to_series();
        let mut best = f64::NEG_INFINITY;
        let mut at = 0.0;
        for r in RADIAL_PROBES {
            let v = match subordination_indicator(&cls, &f, r.into()) {
                Ok(v) => v,
                Err(Error::Singular(_)) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            if v > best {
                best = v;
                at = r;
            }
        }
        let mut t = MarginTracker::new();
        t.record(best - 1.0, || {
            witness(
                format!("largest indicator at z = {at} for {} f={}", describe(&cls), f.to_json()),
                Some(at.into()),
                best,
            )
        });
        Ok(t)
    })?;
    Ok(t.finish(id, 0.0, true))
}

fn kernel_real(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let tol = cfg.tol(id, 1e-4);
    let points = cfg.grid.points();
    let t = par_samples(cfg, id, cfg.kernel_draws, |rng, i| {
        let drawn = random_operator(&cfg.ranges, rng)?;
        let zero = OperatorParams::new(drawn.delta, 0.0, 0.0, drawn.l, drawn.p)?;
        let mut op = zero;
        if i % 2 == 1 {
            for _ in 0..100 {
                let cand = random_operator(&cfg.ranges, rng)?;
                if inclusion_hypothesis(&cand) {
                    op = cand;
                    break;
                }
            }
        }
        let n = rng.gen_range(cfg.ranges.n.0..=cfg.ranges.n.1);
        let mut t = MarginTracker::new();
        if !inclusion_hypothesis(&op) {
            return Ok(t);
        }
        for pt in &points {
            let re = kernel_real_part(&op, n, pt.z, cfg.kernel_order);
            t.record(re - 0.5, || {
                witness(
                    format!(
                        "n={n} p={} lambda={} mu={} l={} at r = {}, angle = {:.6}",
                        op.p, op.lambda, op.mu, op.l, pt.radius, pt.angle
                    ),
                    Some(pt.z),
                    re,
                )
            });
        }
        Ok(t)
    })?;
    Ok(t.finish(id, tol, true))
}

fn inclusion_delta(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let t = par_samples(cfg, id, cfg.members, |rng, _| {
        let cls = random_class(&cfg.ranges, rng)?;
        let f = random_member(&cls.with_delta(cls.op.delta + 1.0), rng)?;
        let v = coeff_sum(&cls, &f)?;
        let mut t = MarginTracker::new();
        t.record(v.margin, || witness(format!("{} f={}", describe(&cls), f.to_json()), None, v.lhs));
        Ok(t)
    })?;
    Ok(t.finish(id, cfg.tol(id, MEMBERSHIP_TOL), false))
}

fn inclusion_ab(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let t = par_samples(cfg, id, cfg.members, |rng, _| {
        let inner = random_class(&cfg.ranges, rng)?;
        let (a1, b1) = (inner.a, inner.b);
        let a2 = uniform(rng, cfg.ranges.a.0, a1);
        let b2 = uniform(rng, b1, cfg.ranges.b.1);
        let outer = ClassParams::new(inner.op, a2, b2, inner.sigma, inner.n)?;
        let f = random_member(&inner.with_delta(inner.op.delta + 1.0), rng)?;
        let v = coeff_sum(&outer, &f)?;
        let mut t = MarginTracker::new();
        t.record(v.margin, || {
            witness(format!("inner {} outer A={a2} B={b2} f={}", describe(&inner), f.to_json()), None, v.lhs)
        });
        Ok(t)
    })?;
    Ok(t.finish(id, cfg.tol(id, MEMBERSHIP_TOL), false))
}

const DISTORTION_RADII: [f64; 3] = [0.3, 0.6, 0.9];
const DISTORTION_ANGLES: usize = 128;

/// Checks `lo ≤ |f^{(q)}| ≤ hi` on `|z| = r` at the sample angles and at `±r`.
fn distortion_inside(cls: &ClassParams, f: &NegSeries, label: &str, t: &mut MarginTracker) -> Result<()> {
    let s = f.to_series();
    for q in 0..cls.p() {
        let d = s.derivative(q);
        for r in DISTORTION_RADII {
            let (lo, hi) = distortion_bounds(cls, q, r)?;
            let mut zs: Vec<Complex64> = (0..DISTORTION_ANGLES)
                .map(|j| Complex64::from_polar(r, TAU * j as f64 / DISTORTION_ANGLES as f64))
                .collect();
            zs.push(Complex64::new(-r, 0.0));
            for z in zs {
                let m = d.evaluate(z).norm();
                let margin = (m - lo).min(hi - m);
                t.record(margin, || {
                    witness(format!("{label} q={q} |f^(q)| vs [{lo}, {hi}] at |z| = {r}"), Some(z), m)
                });
            }
        }
    }
    Ok(())
}

/// The extremal `z^p - c z^{n+p}` meets the lower bound at `z = r` and the
/// upper bound where `z^n = -r^n`.
fn distortion_attained(cls: &ClassParams, t: &mut MarginTracker) -> Result<()> {
    let f = extremal_term(cls, cls.first_exponent())?.to_series();
    let up_angle = PI / cls.n as f64;
    for q in 0..cls.p() {
        let d = f.derivative(q);
        for r in DISTORTION_RADII {
            let (lo, hi) = distortion_bounds(cls, q, r)?;
            let low = d.evaluate(r.into()).re;
            t.record(-(low - lo).abs(), || {
                witness(format!("lower bound at z = r, q={q}, {}", describe(cls)), Some(r.into()), low)
            });
            let z = Complex64::from_polar(r, up_angle);
            let high = d.evaluate(z).norm();
            t.record(-(high - hi).abs(), || {
                witness(format!("upper bound at r e^(i pi/n), q={q}, {}", describe(cls)), Some(z), high)
            });
        }
    }
    Ok(())
}

fn distortion(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let tol = cfg.tol(id, 1e-9);
    let mut t = par_samples(cfg, id, cfg.param_sets + 1, |rng, i| {
        let cls = if i == 0 { panel()? } else { random_class(&cfg.ranges, rng)? };
        let mut t = MarginTracker::new();
        distortion_attained(&cls, &mut t)?;
        let lo = cls.first_exponent();
        for k in lo..=lo + 64 {
            distortion_inside(&cls, &extremal_term(&cls, k)?, &format!("single term k={k}, {}", describe(&cls)), &mut t)?;
        }
        Ok(t)
    })?;
    let members = par_samples(cfg, &format!("{id}/members"), cfg.members, |rng, _| {
        let cls = random_class(&cfg.ranges, rng)?;
        let f = random_member(&cls, rng)?;
        let mut t = MarginTracker::new();
        distortion_inside(&cls, &f, &format!("member {} f={}", describe(&cls), f.to_json()), &mut t)?;
        Ok(t)
    })?;
    t.merge(members);
    Ok(t.finish(id, tol, true))
}

fn neighborhood_radius(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let parts: Vec<Result<(MarginTracker, bool)>> = (0..cfg.members as u64)
        .into_par_iter()
        .map(|i| {
            let rng = &mut stream(cfg.seed, id, i);
            let cls = random_class(&cfg.ranges, rng)?;
            let eta = eta_threshold(&cls);
            let mut t = MarginTracker::new();
            if !(eta > 0.0) {
                return Ok((t, false));
            }
            let spec = NeighborhoodSpec::new(cls, eta)?;
            let f = random_member(&cls.with_delta(cls.op.delta + 1.0), rng)?;
            for _ in 0..cfg.neighbors_per_member {
                let g = random_neg_neighbor(&cls, &f, eta, rng)?;
                if !spec.contains_negative(&f, &g)? {
                    let d = distance_negative(&cls, &f, &g)?;
                    t.record(-1.0, || witness(format!("neighbor outside radius {eta}"), None, d));
                    continue;
                }
                let v = coeff_sum(&cls, &g)?;
                t.record(v.margin, || {
                    witness(format!("{} eta={eta} f={} g={}", describe(&cls), f.to_json(), g.to_json()), None, v.lhs)
                });
            }
            Ok((t, true))
        })
        .collect();
    let mut t = MarginTracker::new();
    let mut skipped = 0;
    for p in parts {
        let (part, used) = p?;
        skipped += usize::from(!used);
        t.merge(part);
    }
    if skipped > 0 {
        t.note(format!("{skipped} draws with zero radius skipped"));
    }
    Ok(t.finish(id, cfg.tol(id, MEMBERSHIP_TOL), false))
}

fn neighborhood_sharpness(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let t = par_samples(cfg, id, cfg.param_sets, |rng, _| {
        let mut cls = random_class(&cfg.ranges, rng)?;
        while !(eta_threshold(&cls) > 0.0) {
            cls = random_class(&cfg.ranges, rng)?;
        }
        let eta = eta_threshold(&cls);
        let eta_star = eta * (1.0 + 1e-6);
        let (f, g) = witness_pair(&cls, eta_star)?;
        let fails = -coeff_sum(&cls, &g)?.margin;
        let on_edge = MEMBERSHIP_TOL - coeff_sum(&cls.with_delta(cls.op.delta + 1.0), &f)?.margin.abs();
        let d = distance_negative(&cls, &f, &g)?;
        let at_radius = if NeighborhoodSpec::new(cls, eta_star)?.contains_negative(&f, &g)? {
            MEMBERSHIP_TOL - (d - eta_star).abs()
        } else {
            -1.0
        };
        let margin = fails.min(on_edge).min(at_radius);
        let mut t = MarginTracker::new();
        t.record(margin, || {
            witness(
                format!(
                    "{} eta*={eta_star}: g excess {fails:e}, f edge {on_edge:e}, distance {d}",
                    describe(&cls)
                ),
                None,
                margin,
            )
        });
        Ok(t)
    })?;
    Ok(t.finish_strict(id, false))
}

fn neighborhood_perturbation(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let sampling = PerturbationSampling {
        eps_samples: cfg.eps_samples,
        neighbors: cfg.perturbation_neighbors,
    };
    let mut cases = Vec::with_capacity(cfg.perturbation_functions + 1);
    for i in 0..cfg.perturbation_functions as u64 {
        let rng = &mut stream(cfg.seed, id, i);
        let cls = random_class(&cfg.ranges, rng)?;
        let f = random_member(&cls, rng)?.scaled(0.5)?.to_series();
        let eta = uniform(rng, 0.01, 0.5);
        cases.push((cls, f, eta, rng.gen::<u64>()));
    }
    {
        let rng = &mut stream(cfg.seed, id, cfg.perturbation_functions as u64);
        let cls = ClassParams::new(OperatorParams::new(0.0, 1.0, 0.0, 0.0, 1)?, -1.0, 1.0, 0.0, 1)?;
        cases.push((cls, NegSeries::identity(1, 1)?.to_series(), 1.5, rng.gen::<u64>()));
    }
    let mut t = MarginTracker::new();
    let mut held = 0;
    for (cls, f, eta, seed) in &cases {
        let out = theorem41_check(cls, f, *eta, sampling, &cfg.grid, *seed)?;
        t.note(format!(
            "eta={eta}, {}: hypothesis {}, conclusion {}",
            describe(cls),
            if out.hypothesis_holds { "held" } else { "failed" },
            if out.conclusion_holds { "held" } else { "failed" }
        ));
        if out.hypothesis_holds {
            held += 1;
            let mut rep = out.report;
            if let Some(w) = rep.witness.as_mut() {
                w.label = format!("{} (eta={eta}, {}, f={})", w.label, describe(cls), f.to_json());
            }
            t.absorb(&rep);
        }
    }
    t.note(format!("hypothesis held for {held} of {} functions", cases.len()));
    t.note("sampled, non-exhaustive");
    Ok(t.finish_strict(id, true))
}

fn partial_sums(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let t = par_samples(cfg, id, cfg.members, |rng, _| {
        let cls = random_class(&cfg.ranges, rng)?;
        let f = random_member(&cls, rng)?;
        let lo = cls.first_exponent();
        let m = rng.gen_range(lo..=lo + 10);
        let mut rep = verify_ratio(&cls, &f, m, &cfg.grid)?;
        if let Some(w) = rep.witness.as_mut() {
            w.label = format!("{} (m={m}, {}, f={})", w.label, describe(&cls), f.to_json());
        }
        let mut t = MarginTracker::new();
        t.absorb(&rep);
        Ok(t)
    })?;
    Ok(t.finish(id, cfg.tol(id, crate::partial_sums::RATIO_SLACK), true)
        .with_note("range read as m >= n + p"))
}

fn partial_sums_sharpness(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let grid = DiskGrid::radial(vec![0.5, 0.9, 0.99, 0.999, 0.9999])?;
    let gap = cfg.tol(id, 1e-3);
    let t = par_samples(cfg, id, cfg.param_sets, |rng, _| {
        let cls = random_class(&cfg.ranges, rng)?;
        let lo = cls.first_exponent();
        let mut t = MarginTracker::new();
        for m in lo..=lo + 5 {
            let f = extremal_partial(&cls, m)?;
            let worst = verify_ratio(&cls, &f, m, &grid)?.worst_margin;
            let margin = (gap - worst).min(worst + crate::partial_sums::RATIO_SLACK);
            t.record(margin, || witness(format!("m={m} {}: closest approach", describe(&cls)), None, worst));
        }
        Ok(t)
    })?;
    Ok(t.finish(id, 0.0, true))
}

/// `m ∈ {2, 3}` classes sharing everything except `σ`.
fn random_tuple(cfg: &CampaignConfig, rng: &mut impl Rng) -> Result<Vec<ClassParams>> {
    let base = random_class(&cfg.ranges, rng)?;
    let m = rng.gen_range(2..=3);
    let p = base.p() as f64;
    (0..m)
        .map(|_| {
            let r = uniform(rng, cfg.ranges.sigma_ratio.0, cfg.ranges.sigma_ratio.1);
            Ok(base.with_sigma(p * r))
        })
        .collect()
}

fn closure_random(cfg: &CampaignConfig, id: &str, kind: ClosureKind) -> Result<VerifyReport> {
    let parts: Vec<Result<(MarginTracker, bool)>> = (0..cfg.members as u64)
        .into_par_iter()
        .map(|i| {
            let rng = &mut stream(cfg.seed, id, i);
            let clss = random_tuple(cfg, rng)?;
            let fs = clss.iter().map(|c| random_member(c, rng)).collect::<Result<Vec<_>>>()?;
            let mut t = MarginTracker::new();
            let rep = match closure_check(kind, &clss, &fs) {
                Ok(rep) => rep,
                Err(Error::Vacuous(_)) => return Ok((t, false)),
                Err(e) => return Err(e),
            };
            let label = || {
                let sigmas: Vec<f64> = clss.iter().map(|c| c.sigma).collect();
                let fs: Vec<String> = fs.iter().map(NegSeries::to_json).collect();
                format!("{} sigmas={sigmas:?} fs={}", describe(&clss[0]), fs.join(" "))
            };
            let mut rep = rep;
            if let Some(w) = rep.witness.as_mut() {
                w.label = format!("{} for {}", w.label, label());
            }
            t.absorb(&rep);
            if kind == ClosureKind::Product {
                let cs = cauchy_schwarz_sum(&[clss[0], clss[1]], &fs[0], &fs[1])?;
                t.record(1.0 - cs, || witness(format!("Cauchy-Schwarz sum for {}", label()), None, cs));
            }
            Ok((t, true))
        })
        .collect();
    let mut t = MarginTracker::new();
    let mut vacuous = 0;
    for p in parts {
        let (part, used) = p?;
        vacuous += usize::from(!used);
        t.merge(part);
    }
    if vacuous > 0 {
        t.note(format!("{vacuous} tuples skipped: closure parameter outside [0, p)"));
    }
    Ok(t.finish(id, cfg.tol(id, MEMBERSHIP_TOL), false))
}

fn closure_sharpness(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let edge = cfg.tol(id, 1e-10);
    let t = par_samples(cfg, id, cfg.param_sets, |rng, _| {
        let clss = random_tuple(cfg, rng)?;
        let fs = extremal_tuple(&clss)?;
        let label = format!("{} sigmas={:?}", describe(&clss[0]), clss.iter().map(|c| c.sigma).collect::<Vec<_>>());
        let mut t = MarginTracker::new();
        let rep = closure_check(ClosureKind::Product, &clss, &fs)?;
        t.record(edge - rep.worst_margin.abs(), || {
            witness(format!("extremal tuple margin at Upsilon, {label}"), None, rep.worst_margin)
        });
        let ups = upsilon(&clss)?.new_sigma;
        let p = clss[0].p() as f64;
        if ups + 1e-4 < p {
            let v = coeff_sum(&clss[0].with_sigma(ups + 1e-4), &quasi_conv(&fs)?)?;
            t.record(-v.margin, || witness(format!("extremal tuple at Upsilon + 1e-4, {label}"), None, v.margin));
        }
        if clss[0].sigma >= 0.01 {
            let mut lowered = clss.clone();
            lowered[0] = lowered[0].with_sigma(lowered[0].sigma - 0.01);
            let ups2 = upsilon(&lowered)?.new_sigma;
            t.record(ups - ups2, || witness(format!("Upsilon after lowering sigma_1, {label}"), None, ups2));
        }
        Ok(t)
    })?;
    Ok(t.finish_strict(id, false))
}

fn fractional_compose(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let tol = cfg.tol(id, 1e-12);
    let t = par_samples(cfg, id, cfg.members, |rng, _| {
        let cls = random_class(&cfg.ranges, rng)?;
        let f = random_member(&cls, rng)?;
        let nu = uniform(rng, -2.0, 1.0);
        let vartheta = uniform(rng, 0.0, 3.0);
        let fp = if nu < 0.0 {
            FracParams::integral(-nu, vartheta)?
        } else {
            FracParams::derivative(nu, vartheta)?
        };
        let mut t = MarginTracker::new();
        let outer = compose_direct(&f, &fp)?;
        let closed = lemma71_compose(&f, nu, vartheta, ComposeOrder::DerivativeOfBernardi)?;
        let d = closed.max_rel_diff(&outer);
        t.record(tol - d, || witness(format!("D(I f), nu={nu}, vartheta={vartheta}, f={}", f.to_json()), None, d));
        let inner = bernardi_general(&frac_apply(&GeneralizedSeries::from_neg(&f), &fp)?, vartheta, f.p())?;
        let closed = lemma71_compose(&f, nu, vartheta, ComposeOrder::BernardiOfDerivative)?;
        let d = closed.max_rel_diff(&inner);
        t.record(tol - d, || witness(format!("I(D f), nu={nu}, vartheta={vartheta}, f={}", f.to_json()), None, d));
        Ok(t)
    })?;
    Ok(t.finish(id, 0.0, false))
}

fn fractional_quadrature(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    let mono_tol = cfg.tol(id, 1e-6);
    let mut t = MarginTracker::new();
    for rho in 1u32..=6 {
        let f = crate::series::Polynomial::from_terms([(rho, Complex64::new(1.0, 0.0))]);
        for nu in [0.25, 0.5, 0.75] {
            for z in [0.3f64, 0.8] {
                let (c, e) = frac_power(rho as f64, -nu)?;
                let want = c * z.powf(e);
                let got = fractional_integral(&f, nu, z)?;
                let d = (got - want).abs();
                t.record(mono_tol - d, || {
                    witness(format!("z^{rho}, nu={nu}: quadrature vs power rule"), Some(z.into()), got)
                });
            }
        }
    }
    let tail = par_samples(cfg, id, cfg.param_sets, |rng, _| {
        let cls = random_class(&cfg.ranges, rng)?;
        let f = random_member(&cls, rng)?;
        let vartheta = uniform(rng, 0.0, 3.0);
        let closed = bernardi(&f.to_series(), vartheta)?;
        let poly = f.to_series().to_polynomial();
        let mut t = MarginTracker::new();
        for z in [0.3f64, 0.8] {
            let want = closed.evaluate(z.into()).re;
            let got = bernardi_integral(&poly, vartheta, f.p(), z)?;
            let d = (got - want).abs();
            t.record(crate::fractional::quadrature::ORACLE_TOL - d, || {
                witness(format!("Bernardi quadrature, vartheta={vartheta}, f={}", f.to_json()), Some(z.into()), got)
            });
        }
        Ok(t)
    })?;
    t.merge(tail);
    Ok(t.finish(id, 0.0, true))
}

const FRACTIONAL_RADII: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
const FRACTIONAL_ANGLES: usize = 32;

fn fractional_bounds(cfg: &CampaignConfig, id: &str, integral: bool) -> Result<VerifyReport> {
    let tol = cfg.tol(id, 1e-9);
    let draw = |rng: &mut ChaCha8Rng, cls: &ClassParams| -> Result<FracParams> {
        let vartheta = uniform(rng, -(cls.p() as f64) + 0.1, 3.0);
        if integral {
            FracParams::integral(uniform(rng, 0.1, 2.0), vartheta)
        } else {
            FracParams::derivative(uniform(rng, 0.0, 1.0), vartheta)
        }
    };
    let bounds = |cls: &ClassParams, fp: &FracParams, r: f64| {
        if integral {
            bounds_71(cls, fp.nu, fp.vartheta, r)
        } else {
            bounds_72(cls, fp.nu, fp.vartheta, r)
        }
    };
    let kernel = |k: u32, cls: &ClassParams, fp: &FracParams| {
        if integral {
            theta_kernel(k, cls.p(), fp.nu, fp.vartheta)
        } else {
            wp_kernel(k, cls.p(), fp.nu, fp.vartheta)
        }
    };
    let mut t = par_samples(cfg, id, cfg.param_sets, |rng, _| {
        let cls = random_class(&cfg.ranges, rng)?;
        let fp = draw(rng, &cls)?;
        let label = format!("{} nu={} vartheta={}", describe(&cls), fp.nu, fp.vartheta);
        let g = compose_direct(&extremal_term(&cls, cls.first_exponent())?, &fp)?;
        let mut t = MarginTracker::new();
        for r in [0.3, 0.6, 0.9] {
            let (lo, hi) = bounds(&cls, &fp, r)?;
            let low = g.evaluate_real(r)?;
            t.record(-(low - lo).abs(), || witness(format!("extremal lower bound at z = r, {label}"), Some(r.into()), low));
            let z = Complex64::from_polar(r, PI / cls.n as f64);
            let high = g.evaluate(z)?.norm();
            t.record(-(high - hi).abs(), || witness(format!("extremal upper bound, {label}"), Some(z), high));
        }
        let lo = cls.first_exponent();
        for k in lo..lo + 50 {
            let (a, b) = (kernel(k, &cls, &fp), kernel(k + 1, &cls, &fp));
            t.record(a - b, || witness(format!("kernel not monotone at k={k}, {label}"), None, b));
        }
        Ok(t)
    })?;
    let members = par_samples(cfg, &format!("{id}/members"), cfg.members, |rng, _| {
        let cls = random_class(&cfg.ranges, rng)?;
        let f = random_member(&cls, rng)?;
        let fp = draw(rng, &cls)?;
        let label = format!("{} nu={} vartheta={} f={}", describe(&cls), fp.nu, fp.vartheta, f.to_json());
        let mut t = MarginTracker::new();
        if !integral {
            let (lhs, rhs) = derivative_gate(&cls, &f);
            t.record(rhs - lhs, || witness(format!("derivative gate, {label}"), None, lhs));
        }
        let g = compose_direct(&f, &fp)?;
        for r in FRACTIONAL_RADII {
            let (lo, hi) = bounds(&cls, &fp, r)?;
            for j in 0..FRACTIONAL_ANGLES {
                let z = Complex64::from_polar(r, TAU * j as f64 / FRACTIONAL_ANGLES as f64);
                let m = g.evaluate(z)?.norm();
                t.record((m - lo).min(hi - m), || {
                    witness(format!("modulus vs [{lo}, {hi}], {label}"), Some(z), m)
                });
            }
        }
        Ok(t)
    })?;
    t.merge(members);
    Ok(t.finish(id, tol, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CampaignConfig {
        CampaignConfig {
            members: 8,
            sufficiency_members: 8,
            violators: 8,
            param_sets: 4,
            series_per_set: 4,
            kernel_draws: 4,
            kernel_order: 100,
            neighbors_per_member: 8,
            eps_samples: 4,
            perturbation_neighbors: 4,
            perturbation_functions: 1,
            grid: DiskGrid::new(vec![0.5, 0.9], 16, 0).unwrap(),
            ..CampaignConfig::default()
        }
    }

    #[test]
    fn every_id_dispatches() {
        let cfg = small();
        for id in super::super::CHECK_IDS {
            let rep = dispatch(&cfg, id).unwrap_or_else(|e| panic!("{id}: {e}"));
            assert_eq!(rep.theorem_id, id);
        }
    }

    #[test]
    fn exact_checks_pass_on_small_runs() {
        let cfg = small();
        for id in [
            "operator-recursion",
            "coefficient-sharpness",
            "inclusion-delta",
            "inclusion-ab",
            "neighborhood-radius",
            "neighborhood-sharpness",
            "closure-sharpness",
            "fractional-compose",
        ] {
            let rep = dispatch(&cfg, id).unwrap();
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn distortion_panel_exceeds_upper_bound() {
        let cls = panel().unwrap();
        let mut t = MarginTracker::new();
        distortion_inside(&cls, &extremal_term(&cls, 6).unwrap(), "panel", &mut t).unwrap();
        assert!(t.worst() < -1e-9);
    }
}
