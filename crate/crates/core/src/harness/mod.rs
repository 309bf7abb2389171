//! Seeded verification campaigns over every inequality in the crate.
//!
//! A campaign runs a list of named checks (see [`CHECK_IDS`]) against one
//! [`CampaignConfig`] and returns one [`VerifyReport`] per check, sorted by
//! id. Reports for the same configuration are byte-identical across runs.

mod checks;
pub mod rng;
pub mod sample;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{VerifyReport, Witness};
use crate::series::DiskGrid;
pub use sample::{random_class, random_member, ParamRanges};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub seed: u64,
    /// Random members per property check.
    pub members: usize,
    /// Members scanned by the disk-sampling sufficiency check.
    pub sufficiency_members: usize,
    /// Over-weighted functions probed by the necessity check.
    pub violators: usize,
    /// Parameter sets for the sharpness and attainment checks.
    pub param_sets: usize,
    /// Random series per parameter set in the operator comparison.
    pub series_per_set: usize,
    /// Parameter draws for the kernel real-part check.
    pub kernel_draws: usize,
    /// Truncation order of the kernel series.
    pub kernel_order: u32,
    /// Neighbors drawn per member in the exact neighborhood check.
    pub neighbors_per_member: usize,
    /// `ε` samples and neighbors for the perturbation check.
    pub eps_samples: usize,
    pub perturbation_neighbors: usize,
    /// Functions tried by the perturbation check.
    pub perturbation_functions: usize,
    pub grid: DiskGrid,
    /// Per-check overrides of the default tolerance.
    pub tolerances: BTreeMap<String, f64>,
    pub ranges: ParamRanges,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            seed: 1,
            members: 200,
            sufficiency_members: 500,
            violators: 100,
            param_sets: 20,
            series_per_set: 100,
            kernel_draws: 50,
            kernel_order: 500,
            neighbors_per_member: 50,
            eps_samples: 64,
            perturbation_neighbors: 128,
            perturbation_functions: 4,
            grid: DiskGrid::default_grid(),
            tolerances: BTreeMap::new(),
            ranges: ParamRanges::default(),
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parameter(format!("cannot parse `{value}` for key `{key}`")))
}

fn parse_pair<T: std::str::FromStr>(key: &str, value: &str) -> Result<(T, T)> {
    let (lo, hi) = value
        .split_once(',')
        .ok_or_else(|| Error::Parameter(format!("`{key}` needs two comma-separated values")))?;
    Ok((parse(key, lo.trim())?, parse(key, hi.trim())?))
}

impl CampaignConfig {
    /// Reads `key = value` lines; `#` starts a comment. Unlisted keys keep
    /// their defaults.
    ///
    /// Keys: `seed`, `members`, `sufficiency_members`, `violators`,
    /// `param_sets`, `series_per_set`, `kernel_draws`, `kernel_order`,
    /// `neighbors_per_member`, `eps_samples`, `perturbation_neighbors`,
    /// `perturbation_functions`, `grid_radii` (comma list), `grid_angles`,
    /// `grid_seed`, `grid_extra_random`, `tolerance.<check-id>`, and the
    /// ranges `a`, `b`, `sigma_ratio`, `delta`, `lambda`, `mu_ratio`, `l`,
    /// `p`, `n` as `lo, hi`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = CampaignConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "seed" => cfg.seed = parse(key, value)?,
                "members" => cfg.members = parse(key, value)?,
                "sufficiency_members" => cfg.sufficiency_members = parse(key, value)?,
                "violators" => cfg.violators = parse(key, value)?,
                "param_sets" => cfg.param_sets = parse(key, value)?,
                "series_per_set" => cfg.series_per_set = parse(key, value)?,
                "kernel_draws" => cfg.kernel_draws = parse(key, value)?,
                "kernel_order" => cfg.kernel_order = parse(key, value)?,
                "neighbors_per_member" => cfg.neighbors_per_member = parse(key, value)?,
                "eps_samples" => cfg.eps_samples = parse(key, value)?,
                "perturbation_neighbors" => cfg.perturbation_neighbors = parse(key, value)?,
                "perturbation_functions" => cfg.perturbation_functions = parse(key, value)?,
                "grid_radii" => {
                    cfg.grid.radii = value
                        .split(',')
                        .map(|v| parse(key, v.trim()))
                        .collect::<Result<Vec<f64>>>()?
                }
                "grid_angles" => cfg.grid.angles = parse(key, value)?,
                "grid_seed" => cfg.grid.seed = parse(key, value)?,
                "grid_extra_random" => cfg.grid.extra_random = parse(key, value)?,
                "a" => cfg.ranges.a = parse_pair(key, value)?,
                "b" => cfg.ranges.b = parse_pair(key, value)?,
                "sigma_ratio" => cfg.ranges.sigma_ratio = parse_pair(key, value)?,
                "delta" => cfg.ranges.delta = parse_pair(key, value)?,
                "lambda" => cfg.ranges.lambda = parse_pair(key, value)?,
                "mu_ratio" => cfg.ranges.mu_ratio = parse_pair(key, value)?,
                "l" => cfg.ranges.l = parse_pair(key, value)?,
                "p" => cfg.ranges.p = parse_pair(key, value)?,
                "n" => cfg.ranges.n = parse_pair(key, value)?,
                _ => match key.strip_prefix("tolerance.") {
                    Some(id) if CHECK_IDS.contains(&id) => {
                        cfg.tolerances.insert(id.to_string(), parse(key, value)?);
                    }
                    Some(id) => return Err(Error::UnknownName(id.to_string())),
                    None => return Err(Error::UnknownName(key.to_string())),
                },
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.ranges.validate()?;
        if self.tolerances.values().any(|t| !(*t >= 0.0)) {
            return Err(Error::Parameter("tolerances must be nonnegative".into()));
        }
        Ok(())
    }

    pub(crate) fn tol(&self, id: &str, default: f64) -> f64 {
        self.tolerances.get(id).copied().unwrap_or(default)
    }
}

/// Every check id, sorted.
pub const CHECK_IDS: [&str; 20] = [
    "closure-sharpness",
    "coefficient-necessity",
    "coefficient-sharpness",
    "coefficient-sufficiency",
    "distortion",
    "fractional-compose",
    "fractional-derivative-bounds",
    "fractional-integral-bounds",
    "fractional-quadrature",
    "inclusion-ab",
    "inclusion-delta",
    "kernel-real-part",
    "neighborhood-perturbation",
    "neighborhood-radius",
    "neighborhood-sharpness",
    "operator-recursion",
    "partial-sums",
    "partial-sums-sharpness",
    "quasi-convolution",
    "square-sum",
];

/// Runs a single named check.
pub fn run_check(cfg: &CampaignConfig, id: &str) -> Result<VerifyReport> {
    if !CHECK_IDS.contains(&id) {
        return Err(Error::UnknownName(id.to_string()));
    }
    let outcome = checks::dispatch(cfg, id);
    Ok(outcome.unwrap_or_else(|e| VerifyReport {
        theorem_id: id.to_string(),
        pass: false,
        samples: 0,
        worst_margin: 0.0,
        witness: Some(Witness {
            label: format!("check aborted: {e}"),
            point: None,
            value: 0.0,
        }),
        sampled: false,
        notes: vec![format!("error: {e}")],
    }))
}

/// Runs the listed checks in parallel and returns their reports sorted by
/// id. Unknown ids are rejected before anything runs; duplicates run once.
pub fn run_campaign(cfg: &CampaignConfig, theorems: &[String]) -> Result<Vec<VerifyReport>> {
    cfg.validate()?;
    let mut ids: Vec<&str> = Vec::with_capacity(theorems.len());
    for t in theorems {
        let id = CHECK_IDS
            .iter()
            .find(|c| **c == t.as_str())
            .ok_or_else(|| Error::UnknownName(t.clone()))?;
        ids.push(id);
    }
    ids.sort_unstable();
    ids.dedup();
    let mut reports = ids
        .into_par_iter()
        .map(|id| run_check(cfg, id))
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.theorem_id.cmp(&b.theorem_id));
    Ok(reports)
}

pub fn all_checks() -> Vec<String> {
    CHECK_IDS.iter().map(|s| s.to_string()).collect()
}

pub fn reports_to_json(reports: &[VerifyReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

/// `theorem_id,pass,samples,worst_margin,sampled`, one row per report.
pub fn reports_to_csv(reports: &[VerifyReport]) -> String {
    let mut out = String::from("theorem_id,pass,samples,worst_margin,sampled\n");
    for r in reports {
        let _ = writeln!(out, "{},{},{},{:e},{}", r.theorem_id, r.pass, r.samples, r.worst_margin, r.sampled);
    }
    out
}
