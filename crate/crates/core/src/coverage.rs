//! Process-wide record of which public operations have run.
//!
//! Each operation sets a flag on entry; the harness tests read the flags after
//! a campaign to confirm every operation was exercised.

use std::sync::atomic::{AtomicBool, Ordering};

macro_rules! ops {
    ($($v:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Op { $($v),* }

        impl Op {
            pub const ALL: &'static [Op] = &[$(Op::$v),*];

            pub fn name(self) -> &'static str {
                match self { $(Op::$v => $name),* }
            }
        }
    };
}

ops! {
    Phi => "phi",
    ApplyJ => "apply_j",
    ApplyJRecursive => "apply_j_recursive",
    Preset => "preset",
    CoeffSum => "coeff_sum",
    CoeffBound => "coeff_bound",
    ExtremalTerm => "extremal_term",
    SubordinationIndicator => "subordination_indicator",
    SubordinationScan => "subordination_scan",
    DistortionBounds => "distortion_bounds",
    InclusionHypothesis => "inclusion_hypothesis",
    KernelRealPart => "kernel_real_part",
    SWeight => "s_weight",
    Distance => "distance",
    InNeighborhood => "in_neighborhood",
    EtaThreshold => "eta_threshold",
    WitnessPair => "witness_pair",
    Theorem41Check => "theorem41_check",
    Theta => "theta",
    RatioBounds => "ratio_bounds",
    ExtremalPartial => "extremal_partial",
    VerifyRatio => "verify_ratio",
    Upsilon => "upsilon",
    Chi => "chi",
    HSquares => "h_squares",
    ClosureCheck => "closure_check",
    LogGamma => "log_gamma",
    FracPower => "frac_power",
    Bernardi => "bernardi",
    FracApply => "frac_apply",
    Lemma71Compose => "lemma71_compose",
    Bounds71 => "bounds_71",
    Bounds72 => "bounds_72",
    QuadratureOracle71 => "quadrature_oracle_71",
}

#[allow(clippy::declare_interior_mutable_const)]
const UNSET: AtomicBool = AtomicBool::new(false);
static TOUCHED: [AtomicBool; Op::ALL.len()] = [UNSET; Op::ALL.len()];

#[inline]
pub(crate) fn touch(op: Op) {
    let flag = &TOUCHED[op as usize];
    if !flag.load(Ordering::Relaxed) {
        flag.store(true, Ordering::Relaxed);
    }
}

pub fn was_touched(op: Op) -> bool {
    TOUCHED[op as usize].load(Ordering::Relaxed)
}

pub fn untouched() -> Vec<Op> {
    Op::ALL.iter().copied().filter(|op| !was_touched(*op)).collect()
}

pub fn reset() {
    for flag in &TOUCHED {
        flag.store(false, Ordering::Relaxed);
    }
}
