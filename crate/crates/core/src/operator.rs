//! The multiplier transformation `J_p^δ(λ, μ, l)`.
//!
//! On `A(n, p)` the operator is diagonal: it fixes `z^p` and multiplies `a_k`
//! by
//!
//! ```text
//! Φ_p^k(δ, λ, μ, l) = [((k - p)(λμk + λ - μ) + p + l) / (p + l)]^δ
//! ```
//!
//! For integer `δ` it is also the `δ`-fold iterate of the differential step
//!
//! ```text
//! g ↦ [λμ z² g'' + (λ - μ + (1 - p)λμ) z g' + (p(1 - λ + μ) + l) g] / (p + l)
//! ```
//!
//! which [`apply_j_recursive`] implements independently as a cross-check.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::series::{Polynomial, SeriesAnp};

/// `(δ, λ, μ, l, p)` with `λ ≥ μ ≥ 0`, `δ ≥ 0`, `l ≥ 0`, `p ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorParams {
    pub delta: f64,
    pub lambda: f64,
    pub mu: f64,
    pub l: f64,
    pub p: u32,
}

impl OperatorParams {
    pub fn new(delta: f64, lambda: f64, mu: f64, l: f64, p: u32) -> Result<Self> {
        let op = OperatorParams {
            delta,
            lambda,
            mu,
            l,
            p,
        };
        op.validate()?;
        Ok(op)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.delta, self.lambda, self.mu, self.l];
        if vals.iter().any(|v| !v.is_finite()) {
            return param("operator parameters must be finite");
        }
        if self.p == 0 {
            return param("valence p must be at least 1");
        }
        if self.delta < 0.0 {
            return param(format!("delta must be >= 0, got {}", self.delta));
        }
        if self.l < 0.0 {
            return param(format!("l must be >= 0, got {}", self.l));
        }
        if !(self.lambda >= self.mu && self.mu >= 0.0) {
            return param(format!(
                "need lambda >= mu >= 0, got lambda = {}, mu = {}",
                self.lambda, self.mu
            ));
        }
        Ok(())
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        OperatorParams { delta, ..*self }
    }

    /// `((k - p)(λμk + λ - μ) + p + l) / (p + l)`, at least 1 for `k ≥ p`.
    pub fn base(&self, k: u32) -> f64 {
        assert!(k >= self.p, "multiplier needs k >= p (k = {k}, p = {})", self.p);
        let p = self.p as f64;
        let k = k as f64;
        let lm = self.lambda * self.mu;
        let base = ((k - p) * (lm * k + self.lambda - self.mu) + p + self.l) / (p + self.l);
        assert!(base > 0.0, "multiplier base {base} is not positive");
        base
    }

    /// `Φ_p^k(δ, λ, μ, l)`.
    pub fn phi(&self, k: u32) -> f64 {
        crate::coverage::touch(crate::coverage::Op::Phi);
        pow_real(self.base(k), self.delta)
    }
}

pub(crate) fn pow_real(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 || base == 1.0 {
        return 1.0;
    }
    if exponent.fract() == 0.0 && exponent <= 64.0 {
        base.powi(exponent as i32)
    } else {
        (exponent * base.ln()).exp()
    }
}

fn check_valence(op: &OperatorParams, f: &SeriesAnp) -> Result<()> {
    if op.p != f.p() {
        return param(format!(
            "valence mismatch: operator has p = {}, series has p = {}",
            op.p,
            f.p()
        ));
    }
    Ok(())
}

/// `J_p^δ(λ, μ, l) f` via the closed-form multiplier.
pub fn apply_j(op: &OperatorParams, f: &SeriesAnp) -> Result<SeriesAnp> {
    crate::coverage::touch(crate::coverage::Op::ApplyJ);
    op.validate()?;
    check_valence(op, f)?;
    Ok(f.map_coeffs(|k, a| a * op.phi(k)))
}

/// `J_p^δ(λ, μ, l) f` by iterating the differential step `δ` times.
///
/// Integer `δ` only.
pub fn apply_j_recursive(op: &OperatorParams, f: &SeriesAnp) -> Result<SeriesAnp> {
    crate::coverage::touch(crate::coverage::Op::ApplyJRecursive);
    op.validate()?;
    check_valence(op, f)?;
    if op.delta.fract() != 0.0 {
        return Err(Error::Unsupported(format!(
            "the differential recursion needs an integer delta, got {}",
            op.delta
        )));
    }
    let p = op.p as f64;
    let lm = op.lambda * op.mu;
    let c2 = lm;
    let c1 = op.lambda - op.mu + (1.0 - p) * lm;
    let c0 = p * (1.0 - op.lambda + op.mu) + op.l;
    let norm = p + op.l;
    if norm <= 0.0 {
        return param("p + l must be positive");
    }

    let mut g: Polynomial = f.to_polynomial();
    for _ in 0..op.delta as u64 {
        let second = g.derivative(2).shifted(2).scaled(c2);
        let first = g.derivative(1).shifted(1).scaled(c1);
        g = second.add(&first).add(&g.scaled(c0)).scaled(1.0 / norm);
    }
    g.into_series(f.p(), f.n(), f.order(), 1e-12)
}

/// Operators that `J_p^δ(λ, μ, l)` reduces to under fixed parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Salagean,
    AlOboudi,
    DenizOrhan,
    ChoSrivastava,
    UralegaddiSomanatha,
    AcuOwa,
    Catas,
    Shenan,
    Kwon,
    Kumar,
    CatasP,
}

/// Parameters pinned by a [`Preset`]; `None` means free.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PartialParams {
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub l: Option<f64>,
    pub p: Option<u32>,
    /// The reduction is stated for `δ ∈ {0, 1, 2, …}` only.
    pub integer_delta: bool,
}

impl PartialParams {
    /// Overrides the pinned fields of `base`.
    pub fn apply_to(&self, base: OperatorParams) -> Result<OperatorParams> {
        if self.integer_delta && base.delta.fract() != 0.0 {
            return param(format!("this preset needs an integer delta, got {}", base.delta));
        }
        OperatorParams::new(
            base.delta,
            self.lambda.unwrap_or(base.lambda),
            self.mu.unwrap_or(base.mu),
            self.l.unwrap_or(base.l),
            self.p.unwrap_or(base.p),
        )
    }
}

impl Preset {
    pub const ALL: [Preset; 11] = [
        Preset::Salagean,
        Preset::AlOboudi,
        Preset::DenizOrhan,
        Preset::ChoSrivastava,
        Preset::UralegaddiSomanatha,
        Preset::AcuOwa,
        Preset::Catas,
        Preset::Shenan,
        Preset::Kwon,
        Preset::Kumar,
        Preset::CatasP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Salagean => "salagean",
            Preset::AlOboudi => "al-oboudi",
            Preset::DenizOrhan => "deniz-orhan",
            Preset::ChoSrivastava => "cho-srivastava",
            Preset::UralegaddiSomanatha => "uralegaddi-somonatha",
            Preset::AcuOwa => "acu-owa",
            Preset::Catas => "catas",
            Preset::Shenan => "shenan",
            Preset::Kwon => "kwon",
            Preset::Kumar => "kumar",
            Preset::CatasP => "catas-p",
        }
    }

    pub fn params(self) -> PartialParams {
        let fixed = |lambda, mu, l, p, integer_delta| PartialParams {
            lambda,
            mu,
            l,
            p,
            integer_delta,
        };
        match self {
            Preset::Salagean => fixed(Some(1.0), Some(0.0), Some(0.0), Some(1), true),
            Preset::AlOboudi => fixed(None, Some(0.0), Some(0.0), Some(1), true),
            Preset::DenizOrhan => fixed(None, None, Some(0.0), Some(1), false),
            Preset::ChoSrivastava => fixed(Some(1.0), Some(0.0), None, Some(1), true),
            Preset::UralegaddiSomanatha => fixed(Some(1.0), Some(0.0), Some(1.0), Some(1), true),
            Preset::AcuOwa => fixed(None, Some(0.0), Some(0.0), Some(1), false),
            Preset::Catas => fixed(None, Some(0.0), None, Some(1), false),
            Preset::Shenan => fixed(Some(1.0), Some(0.0), Some(0.0), None, true),
            Preset::Kwon => fixed(None, Some(0.0), Some(0.0), None, true),
            Preset::Kumar => fixed(Some(1.0), Some(0.0), None, None, false),
            Preset::CatasP => fixed(None, Some(0.0), None, None, false),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

pub fn preset(name: &str) -> Result<PartialParams> {
    crate::coverage::touch(crate::coverage::Op::Preset);
    name.parse::<Preset>().map(Preset::params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesAnp;
    use num_complex::Complex64;

    fn op(delta: f64, lambda: f64, mu: f64, l: f64, p: u32) -> OperatorParams {
        OperatorParams::new(delta, lambda, mu, l, p).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(op(0.0, 2.0, 1.0, 3.0, 2).phi(9), 1.0);
        assert_eq!(op(2.5, 2.0, 1.0, 3.0, 2).phi(2), 1.0);
        assert_eq!(op(2.0, 1.0, 0.0, 0.0, 1).phi(3), 9.0);
        assert_eq!(op(1.0, 1.0, 1.0, 0.0, 1).phi(2), 3.0);
        // lambda = mu = 0 gives a constant multiplier
        assert_eq!(op(3.7, 0.0, 0.0, 0.4, 2).phi(40), 1.0);
    }

    #[test]
    fn phi_salagean_is_power_of_k() {
        let s = op(3.0, 1.0, 0.0, 0.0, 1);
        for k in 1..30u32 {
            assert_eq!(s.phi(k), (k as f64).powi(3));
        }
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(OperatorParams::new(-1.0, 1.0, 0.0, 0.0, 1).is_err());
        assert!(OperatorParams::new(1.0, 0.5, 1.0, 0.0, 1).is_err());
        assert!(OperatorParams::new(1.0, 1.0, -0.1, 0.0, 1).is_err());
        assert!(OperatorParams::new(1.0, 1.0, 0.0, -1.0, 1).is_err());
        assert!(OperatorParams::new(1.0, 1.0, 0.0, 0.0, 0).is_err());
    }

    #[test]
    fn apply_examples() {
        let f = SeriesAnp::from_real(1, 1, [(2, 1.0)]).unwrap();
        assert_eq!(apply_j(&op(0.0, 2.0, 1.0, 1.0, 1), &f).unwrap(), f);
        let id = SeriesAnp::identity(1, 1).unwrap();
        assert_eq!(apply_j(&op(2.0, 2.0, 1.0, 1.0, 1), &id).unwrap(), id);
        let g = apply_j(&op(1.0, 1.0, 0.0, 0.0, 1), &f).unwrap();
        assert_eq!(g.coeff(2), Complex64::new(2.0, 0.0));
        let wrong = SeriesAnp::identity(2, 1).unwrap();
        assert!(apply_j(&op(1.0, 1.0, 0.0, 0.0, 1), &wrong).is_err());
    }

    #[test]
    fn recursion_fixes_leading_term() {
        for p in 1..5 {
            let id = SeriesAnp::identity(p, 1).unwrap();
            let out = apply_j_recursive(&op(1.0, 1.7, 0.4, 0.3, p), &id).unwrap();
            assert!(out.is_identity());
        }
    }

    #[test]
    fn recursion_matches_closed_form() {
        let f = SeriesAnp::from_terms(2, 1, [(3, Complex64::new(0.3, -0.2)), (5, Complex64::new(-1.0, 0.5)), (9, Complex64::new(0.01, 0.0))]).unwrap();
        for delta in 0..4 {
            let o = op(delta as f64, 1.3, 0.6, 0.8, 2);
            let a = apply_j(&o, &f).unwrap();
            let b = apply_j_recursive(&o, &f).unwrap();
            for k in 3..=9 {
                let (x, y) = (a.coeff(k), b.coeff(k));
                assert!((x - y).norm() <= 1e-10 * x.norm().max(1e-300), "delta {delta} k {k}");
            }
        }
    }

    #[test]
    fn recursion_rejects_fractional_delta() {
        let f = SeriesAnp::identity(1, 1).unwrap();
        assert!(matches!(apply_j_recursive(&op(0.5, 1.0, 0.0, 0.0, 1), &f), Err(Error::Unsupported(_))));
    }

    #[test]
    fn presets() {
        let s = preset("salagean").unwrap();
        assert_eq!((s.lambda, s.mu, s.l, s.p), (Some(1.0), Some(0.0), Some(0.0), Some(1)));
        let u = preset("uralegaddi-somonatha").unwrap();
        assert_eq!((u.lambda, u.mu, u.l, u.p), (Some(1.0), Some(0.0), Some(1.0), Some(1)));
        let c = preset("catas-p").unwrap();
        assert_eq!((c.lambda, c.mu, c.l, c.p), (None, Some(0.0), None, None));
        assert!(matches!(preset("ruscheweyh"), Err(Error::UnknownName(_))));
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
    }

    #[test]
    fn salagean_preset_gives_k_power() {
        let base = op(2.0, 5.0, 2.0, 3.0, 4);
        let sal = preset("salagean").unwrap().apply_to(base).unwrap();
        assert_eq!(sal.phi(5), 25.0);
        assert!(preset("salagean").unwrap().apply_to(base.with_delta(0.5)).is_err());
    }

    #[test]
    fn powers_commute_and_add() {
        let f = SeriesAnp::from_terms(2, 1, [(3, Complex64::new(0.4, -0.2)), (6, Complex64::new(-0.1, 0.3))]).unwrap();
        let a = op(0.7, 1.3, 0.4, 0.9, 2);
        let b = a.with_delta(1.6);
        let ab = apply_j(&a, &apply_j(&b, &f).unwrap()).unwrap();
        let ba = apply_j(&b, &apply_j(&a, &f).unwrap()).unwrap();
        let sum = apply_j(&a.with_delta(2.3), &f).unwrap();
        for k in [3, 6] {
            assert!((ab.coeff(k) - ba.coeff(k)).norm() < 1e-14);
            assert!((ab.coeff(k) - sum.coeff(k)).norm() < 1e-13 * sum.coeff(k).norm());
        }
    }
}
