//! Riemann–Liouville fractional calculus on truncated series, the
//! Bernardi-type integral operator, and the growth bounds that combine them.
//!
//! Everything acts termwise through
//! `D_z^ν z^ρ = Γ(ρ+1)/Γ(ρ+1-ν) z^{ρ-ν}` (negative `ν` is the fractional
//! integral), so results live in a [`GeneralizedSeries`] with real exponents.

pub mod gamma;
pub mod quadrature;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classes::ClassParams;
use crate::error::{param, Error, Result};
use crate::series::{NegSeries, SeriesAnp};
use gamma::gamma_ratio;

/// Exponents closer than this are merged.
pub const EXPONENT_MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "direction")]
pub enum Direction {
    /// `D_z^{-ν}` with `ν > 0`.
    Integral,
    /// `D_z^ν` with `0 ≤ ν < 1`.
    Derivative,
    /// `d^{n0}/dz^{n0} D_z^ν` with `0 ≤ ν < 1`.
    Iterated { n0: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    pub nu: f64,
    pub vartheta: f64,
    #[serde(flatten)]
    pub direction: Direction,
}

impl FracParams {
    pub fn integral(nu: f64, vartheta: f64) -> Result<Self> {
        Self::checked(nu, vartheta, Direction::Integral)
    }

    pub fn derivative(nu: f64, vartheta: f64) -> Result<Self> {
        Self::checked(nu, vartheta, Direction::Derivative)
    }

    pub fn iterated(n0: u32, nu: f64, vartheta: f64) -> Result<Self> {
        Self::checked(nu, vartheta, Direction::Iterated { n0 })
    }

    fn checked(nu: f64, vartheta: f64, direction: Direction) -> Result<Self> {
        let fp = FracParams { nu, vartheta, direction };
        fp.validate()?;
        Ok(fp)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.nu.is_finite() || !self.vartheta.is_finite() {
            return param("fractional parameters must be finite");
        }
        match self.direction {
            Direction::Integral if self.nu <= 0.0 => param(format!("integral order must be positive, got {}", self.nu)),
            Direction::Derivative | Direction::Iterated { .. } if !(0.0..1.0).contains(&self.nu) => {
                param(format!("derivative order must lie in [0, 1), got {}", self.nu))
            }
            _ => Ok(()),
        }
    }

    /// Signed order handed to the power rule.
    fn power_order(&self) -> f64 {
        match self.direction {
            Direction::Integral => -self.nu,
            _ => self.nu,
        }
    }

    /// `ϑ + p > 0`, required wherever the Bernardi operator is involved.
    pub fn check_vartheta(&self, p: u32) -> Result<()> {
        check_vartheta(self.vartheta, p)
    }
}

fn check_vartheta(vartheta: f64, p: u32) -> Result<()> {
    if !(vartheta + p as f64 > 0.0) {
        return param(format!("need vartheta + p > 0, got vartheta = {vartheta}, p = {p}"));
    }
    Ok(())
}

/// Sparse real-coefficient series with real exponents, sorted ascending.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GeneralizedSeries {
    terms: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    e: f64,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    terms: Vec<TermJson>,
}

impl GeneralizedSeries {
    /// Sorts, merges exponents within [`EXPONENT_MERGE_TOL`] and drops exact
    /// zeros.
    pub fn new<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut raw: Vec<(f64, f64)> = terms.into_iter().collect();
        if raw.iter().any(|(e, c)| !e.is_finite() || !c.is_finite()) {
            return Err(Error::Format("exponents and coefficients must be finite".into()));
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match merged.last_mut() {
                Some(last) if (e - last.0).abs() <= EXPONENT_MERGE_TOL => last.1 += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|t| t.1 != 0.0);
        Ok(GeneralizedSeries { terms: merged })
    }

    /// Requires real coefficients.
    pub fn from_series(f: &SeriesAnp) -> Result<Self> {
        let p = f.p();
        let mut terms = vec![(p as f64, 1.0)];
        for (k, a) in f.terms() {
            if a.im != 0.0 {
                return Err(Error::Unsupported(format!("complex coefficient at k = {k}")));
            }
            terms.push((k as f64, a.re));
        }
        Self::new(terms)
    }

    pub fn from_neg(f: &NegSeries) -> Self {
        let mut terms = vec![(f.p() as f64, 1.0)];
        terms.extend(f.terms().map(|(k, m)| (k as f64, -m)));
        GeneralizedSeries { terms }
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at an exponent within the merge tolerance.
    pub fn coeff_at(&self, e: f64) -> f64 {
        self.terms
            .iter()
            .find(|t| (t.0 - e).abs() <= EXPONENT_MERGE_TOL)
            .map_or(0.0, |t| t.1)
    }

    /// Principal branch `z^e = exp(e Log z)`. At `z = 0` positive powers
    /// vanish, `z^0 = 1`, and negative powers are an error.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::default();
        for &(e, c) in &self.terms {
            acc += c * principal_pow(z, e)?;
        }
        Ok(acc)
    }

    pub fn evaluate_real(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return param("real evaluation needs x ≥ 0; use evaluate for other points");
        }
        Ok(self.evaluate(x.into())?.re)
    }

    /// Largest relative coefficient difference, matching exponents within the
    /// merge tolerance; a term present on one side only counts as relative
    /// difference 1.
    pub fn max_rel_diff(&self, other: &GeneralizedSeries) -> f64 {
        let mut worst: f64 = 0.0;
        for &(e, c) in &self.terms {
            let d = other.coeff_at(e);
            worst = worst.max((c - d).abs() / c.abs().max(d.abs()));
        }
        for &(e, c) in &other.terms {
            if self.coeff_at(e) == 0.0 && c != 0.0 {
                worst = worst.max(1.0);
            }
        }
        worst
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SeriesJson = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::new(raw.terms.into_iter().map(|t| (t.e, t.c)))
    }

    pub fn to_json(&self) -> String {
        let raw = SeriesJson {
            terms: self.terms.iter().map(|&(e, c)| TermJson { e, c }).collect(),
        };
        serde_json::to_string(&raw).expect("finite floats serialize")
    }

    fn map_terms(&self, mut f: impl FnMut(f64, f64) -> Result<(f64, f64)>) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len());
        for &(e, c) in &self.terms {
            out.push(f(e, c)?);
        }
        Self::new(out)
    }
}

fn principal_pow(z: Complex64, e: f64) -> Result<Complex64> {
    if z == Complex64::default() {
        return match e {
            e if e > 0.0 => Ok(Complex64::default()),
            0.0 => Ok(Complex64::new(1.0, 0.0)),
            _ => Err(Error::Singular(format!("z^{e} at z = 0"))),
        };
    }
    if e == e.trunc() && e.abs() <= i32::MAX as f64 {
        return Ok(z.powi(e as i32));
    }
    Ok((z.ln() * e).exp())
}

/// `D_z^ν z^ρ = Γ(ρ+1)/Γ(ρ+1-ν) z^{ρ-ν}`; negative `ν` integrates.
pub fn frac_power(rho: f64, nu: f64) -> Result<(f64, f64)> {
    crate::coverage::touch(crate::coverage::Op::FracPower);
    if !(rho > -1.0) {
        return param(format!("power rule needs rho > -1, got {rho}"));
    }
    if nu == 0.0 {
        return Ok((1.0, rho));
    }
    let den = rho + 1.0 - nu;
    if den <= 0.0 && den == den.floor() {
        // 1/Γ vanishes at the pole: the term is annihilated.
        return Ok((0.0, rho - nu));
    }
    let c = gamma_ratio(rho + 1.0, den)
        .ok_or_else(|| Error::Singular(format!("gamma pole for rho = {rho}, nu = {nu}")))?;
    Ok((c, rho - nu))
}

/// Termwise `z^k ↦ ((ϑ+p)/(ϑ+k)) z^k`.
pub fn bernardi(f: &SeriesAnp, vartheta: f64) -> Result<SeriesAnp> {
    crate::coverage::touch(crate::coverage::Op::Bernardi);
    let p = f.p();
    check_vartheta(vartheta, p)?;
    Ok(f.map_coeffs(|k, a| a * ((vartheta + p as f64) / (vartheta + k as f64))))
}

/// The Bernardi kernel on real exponents, `z^e ↦ ((ϑ+p)/(ϑ+e)) z^e`.
pub fn bernardi_general(f: &GeneralizedSeries, vartheta: f64, p: u32) -> Result<GeneralizedSeries> {
    crate::coverage::touch(crate::coverage::Op::Bernardi);
    check_vartheta(vartheta, p)?;
    let top = vartheta + p as f64;
    f.map_terms(|e, c| {
        let den = vartheta + e;
        if den.abs() < EXPONENT_MERGE_TOL {
            return Err(Error::Singular(format!("vartheta + exponent vanishes at exponent {e}")));
        }
        Ok((e, c * top / den))
    })
}

/// Applies the power rule to every term, then `n0` classical derivatives for
/// the iterated direction. Terms annihilated by a gamma pole or by
/// differentiating a constant are dropped.
pub fn frac_apply(f: &GeneralizedSeries, fp: &FracParams) -> Result<GeneralizedSeries> {
    crate::coverage::touch(crate::coverage::Op::FracApply);
    fp.validate()?;
    let order = fp.power_order();
    let mut out = f.map_terms(|e, c| {
        let (g, e2) = frac_power(e, order).map_err(|err| match err {
            Error::Singular(msg) => Error::Singular(format!("term z^{e}: {msg}")),
            other => other,
        })?;
        Ok((e2, c * g))
    })?;
    if let Direction::Iterated { n0 } = fp.direction {
        for _ in 0..n0 {
            out = out.map_terms(|e, c| Ok((e - 1.0, c * e)))?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComposeOrder {
    /// `D_z^ν (I_{ϑ,p} f)`.
    DerivativeOfBernardi,
    /// `I_{ϑ,p} (D_z^ν f)`.
    BernardiOfDerivative,
}

/// Closed forms for the two compositions of the Bernardi operator with
/// `D_z^ν` (any real `ν`) on a negative-coefficient function.
pub fn lemma71_compose(f: &NegSeries, nu: f64, vartheta: f64, order: ComposeOrder) -> Result<GeneralizedSeries> {
    crate::coverage::touch(crate::coverage::Op::Lemma71Compose);
    let p = f.p();
    check_vartheta(vartheta, p)?;
    let top = vartheta + p as f64;
    let kernel = |k: u32| -> Result<f64> {
        let kf = k as f64;
        let shift = match order {
            ComposeOrder::DerivativeOfBernardi => 0.0,
            ComposeOrder::BernardiOfDerivative => nu,
        };
        let den = vartheta + kf - shift;
        if den == 0.0 {
            return Err(Error::Singular(format!("vanishing denominator at k = {k}")));
        }
        let g = if nu == 0.0 {
            1.0
        } else if (kf + 1.0 - nu) <= 0.0 && (kf + 1.0 - nu).fract() == 0.0 {
            0.0
        } else {
            gamma_ratio(kf + 1.0, kf + 1.0 - nu).ok_or_else(|| Error::Singular(format!("gamma pole at k = {k}")))?
        };
        Ok(top * g / den)
    };
    let mut terms = vec![(p as f64 - nu, kernel(p)?)];
    for (k, m) in f.terms() {
        terms.push((k as f64 - nu, -kernel(k)? * m));
    }
    GeneralizedSeries::new(terms)
}

/// `Θ(k) = (ϑ+p)Γ(k+1)Γ(p+1+ν) / ((ϑ+k)Γ(k+1+ν)Γ(p+1))`, for `ν > 0`.
pub fn theta_kernel(k: u32, p: u32, nu: f64, vartheta: f64) -> f64 {
    let (kf, pf) = (k as f64, p as f64);
    let g = gamma_ratio(kf + 1.0, kf + 1.0 + nu).unwrap_or(f64::NAN)
        * gamma_ratio(pf + 1.0 + nu, pf + 1.0).unwrap_or(f64::NAN);
    (vartheta + pf) * g / (vartheta + kf)
}

/// `℘(k) = (ϑ+p)Γ(k)Γ(p+1-ν) / ((ϑ+k)Γ(k+1-ν)Γ(p+1))`, for `0 ≤ ν < 1`.
pub fn wp_kernel(k: u32, p: u32, nu: f64, vartheta: f64) -> f64 {
    let (kf, pf) = (k as f64, p as f64);
    let g = gamma_ratio(kf, kf + 1.0 - nu).unwrap_or(f64::NAN)
        * gamma_ratio(pf + 1.0 - nu, pf + 1.0).unwrap_or(f64::NAN);
    (vartheta + pf) * g / (vartheta + kf)
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return param(format!("radius {r} is outside (0, 1)"));
    }
    Ok(())
}

/// Bounds on `|D_z^{-ν}(I_{ϑ,p} f)(z)|` over `|z| = r` for class members:
///
/// ```text
/// { Γ(p+1)/Γ(p+1+ν) ∓ (ϑ+p)Γ(n+p+1)(B-A)(p-σ) / ((ϑ+n+p)Γ(n+p+1+ν)(n+p)(1+B)Φ_{n+p}) r^n } r^{p+ν}
/// ```
pub fn bounds_71(cls: &ClassParams, nu: f64, vartheta: f64, r: f64) -> Result<(f64, f64)> {
    crate::coverage::touch(crate::coverage::Op::Bounds71);
    cls.validate()?;
    if !(nu > 0.0) {
        return param(format!("integral order must be positive, got {nu}"));
    }
    check_vartheta(vartheta, cls.p())?;
    check_radius(r)?;
    let (p, m) = (cls.p() as f64, cls.first_exponent());
    let mf = m as f64;
    let lead = gamma_ratio(p + 1.0, p + 1.0 + nu).unwrap_or(f64::NAN);
    let spread = (vartheta + p) * gamma_ratio(mf + 1.0, mf + 1.0 + nu).unwrap_or(f64::NAN) * cls.rhs()
        / ((vartheta + mf) * mf * (1.0 + cls.b) * cls.op.phi(m))
        * r.powi(cls.n as i32);
    let scale = r.powf(p + nu);
    Ok(((lead - spread) * scale, (lead + spread) * scale))
}

/// Bounds on `|D_z^ν(I_{ϑ,p} f)(z)|` over `|z| = r` for `0 ≤ ν < 1`:
///
/// ```text
/// { Γ(p+1)/Γ(p+1-ν) ∓ (ϑ+p)Γ(n+p)(B-A)(p-σ) / ((ϑ+n+p)Γ(n+p+1-ν)(1+B)Φ_{n+p}) r^n } r^{p-ν}
/// ```
pub fn bounds_72(cls: &ClassParams, nu: f64, vartheta: f64, r: f64) -> Result<(f64, f64)> {
    crate::coverage::touch(crate::coverage::Op::Bounds72);
    cls.validate()?;
    if !(0.0..1.0).contains(&nu) {
        return param(format!("derivative order must lie in [0, 1), got {nu}"));
    }
    check_vartheta(vartheta, cls.p())?;
    check_radius(r)?;
    let (p, m) = (cls.p() as f64, cls.first_exponent());
    let mf = m as f64;
    let lead = gamma_ratio(p + 1.0, p + 1.0 - nu).unwrap_or(f64::NAN);
    let spread = (vartheta + p) * gamma_ratio(mf, mf + 1.0 - nu).unwrap_or(f64::NAN) * cls.rhs()
        / ((vartheta + mf) * (1.0 + cls.b) * cls.op.phi(m))
        * r.powi(cls.n as i32);
    let scale = r.powf(p - nu);
    Ok(((lead - spread) * scale, (lead + spread) * scale))
}

/// The left side of the derivative-bound gate,
/// `Σ k|a_k| ≤ (B-A)(p-σ)/((1+B)Φ_{n+p})`, as (lhs, rhs).
pub fn derivative_gate(cls: &ClassParams, f: &NegSeries) -> (f64, f64) {
    let lhs = f.terms().map(|(k, m)| k as f64 * m).sum();
    let rhs = cls.rhs() / ((1.0 + cls.b) * cls.op.phi(cls.first_exponent()));
    (lhs, rhs)
}

/// `D_z^{∓ν}(I_{ϑ,p} f)` built from the independent pieces: Bernardi first,
/// then the power rule.
pub fn compose_direct(f: &NegSeries, fp: &FracParams) -> Result<GeneralizedSeries> {
    fp.check_vartheta(f.p())?;
    let b = bernardi(&f.to_series(), fp.vartheta)?;
    frac_apply(&GeneralizedSeries::from_series(&b)?, fp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::OperatorParams;
    use std::f64::consts::PI;

    fn class() -> ClassParams {
        ClassParams::new(OperatorParams::new(1.0, 0.8, 0.2, 0.5, 2).unwrap(), -0.5, 0.7, 0.4, 1).unwrap()
    }

    #[test]
    fn power_rule_examples() {
        assert_eq!(frac_power(2.5, 0.0).unwrap(), (1.0, 2.5));
        let (c, e) = frac_power(1.0, 0.5).unwrap();
        assert!((c - 2.0 / PI.sqrt()).abs() < 1e-13 && e == 0.5);
        let (c, e) = frac_power(1.0, -1.0).unwrap();
        assert!((c - 0.5).abs() < 1e-15 && e == 2.0);
        assert!(frac_power(-1.0, 0.5).is_err());
        // D^2 z = 0
        assert_eq!(frac_power(1.0, 2.0).unwrap().0, 0.0);
    }

    #[test]
    fn integral_then_derivative_telescopes() {
        for rho in [0.5, 1.0, 3.0, 7.25] {
            let (c1, e1) = frac_power(rho, -0.3).unwrap();
            let (c2, e2) = frac_power(e1, 0.3).unwrap();
            assert!((c1 * c2 - 1.0).abs() < 1e-12 && (e2 - rho).abs() < 1e-12);
        }
    }

    #[test]
    fn merging_and_json() {
        let s = GeneralizedSeries::new([(1.5, 1.0), (0.5, 2.0), (1.5 + 1e-14, 0.5), (2.0, 0.0)]).unwrap();
        assert_eq!(s.terms(), &[(0.5, 2.0), (1.5, 1.5)]);
        let back = GeneralizedSeries::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(GeneralizedSeries::from_json("{\"terms\":[{\"e\":1}]}").is_err());
    }

    #[test]
    fn bernardi_examples() {
        let f = SeriesAnp::from_real(1, 1, [(2, 1.0)]).unwrap();
        let b = bernardi(&f, 1.0).unwrap();
        assert!((b.coeff(2).re - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(b.coeff(1).re, 1.0);
        assert!(bernardi(&f, -1.0).is_err());
    }

    #[test]
    fn iterated_derivative() {
        let f = GeneralizedSeries::new([(2.0, 1.0)]).unwrap();
        let fp = FracParams::iterated(1, 0.5, 0.0).unwrap();
        let got = frac_apply(&f, &fp).unwrap();
        // D^{1.5} z^2 = Γ(3)/Γ(1.5) z^{0.5}
        let want = 2.0 / gamma_ratio(1.5, 1.0).unwrap();
        assert!((got.coeff_at(0.5) - want).abs() < 1e-12);
        assert!(FracParams::derivative(1.0, 0.0).is_err());
        assert!(FracParams::integral(0.0, 0.0).is_err());
    }

    #[test]
    fn compose_matches_direct() {
        let f = NegSeries::from_mags(2, 1, [(3, 0.05), (5, 0.01)]).unwrap();
        let fp = FracParams::derivative(0.4, 0.7).unwrap();
        let closed = lemma71_compose(&f, 0.4, 0.7, ComposeOrder::DerivativeOfBernardi).unwrap();
        assert!(closed.max_rel_diff(&compose_direct(&f, &fp).unwrap()) < 1e-12);
        let closed = lemma71_compose(&f, 0.0, 0.7, ComposeOrder::DerivativeOfBernardi).unwrap();
        let b = GeneralizedSeries::from_series(&bernardi(&f.to_series(), 0.7).unwrap()).unwrap();
        assert!(closed.max_rel_diff(&b) < 1e-15);
        let g = GeneralizedSeries::from_neg(&f);
        let other = bernardi_general(&frac_apply(&g, &fp).unwrap(), 0.7, 2).unwrap();
        let closed = lemma71_compose(&f, 0.4, 0.7, ComposeOrder::BernardiOfDerivative).unwrap();
        assert!(closed.max_rel_diff(&other) < 1e-12);
    }

    #[test]
    fn kernels_decrease() {
        for k in 3..60 {
            assert!(theta_kernel(k + 1, 2, 0.7, 0.3) <= theta_kernel(k, 2, 0.7, 0.3));
            assert!(wp_kernel(k + 1, 2, 0.7, 0.3) <= wp_kernel(k, 2, 0.7, 0.3));
        }
        assert!((theta_kernel(2, 2, 0.7, 0.3) - 1.0).abs() < 1e-14);
        assert!((wp_kernel(2, 2, 0.7, 0.3) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn bounds_attained_by_extremal() {
        let cls = class();
        let ext = crate::classes::extremal_term(&cls, cls.first_exponent()).unwrap();
        for r in [0.1, 0.5, 0.9] {
            let (lo, hi) = bounds_71(&cls, 0.6, 0.3, r).unwrap();
            let img = compose_direct(&ext, &FracParams::integral(0.6, 0.3).unwrap()).unwrap();
            assert!((img.evaluate_real(r).unwrap().abs() - lo).abs() < 1e-12);
            let far = Complex64::from_polar(r, PI / cls.n as f64);
            assert!((img.evaluate(far).unwrap().norm() - hi).abs() < 1e-12);
            let (lo, _) = bounds_72(&cls, 0.6, 0.3, r).unwrap();
            let img = compose_direct(&ext, &FracParams::derivative(0.6, 0.3).unwrap()).unwrap();
            assert!((img.evaluate_real(r).unwrap().abs() - lo).abs() < 1e-12);
        }
        let (lo, hi) = bounds_71(&cls, 0.6, 0.3, 1e-6).unwrap();
        assert!(lo.abs() < 1e-12 && hi.abs() < 1e-12);
        assert!(bounds_72(&cls, 1.0, 0.3, 0.5).is_err());
    }

    #[test]
    fn quadrature_matches_power_rule() {
        for rho in 1..=6u32 {
            for nu in [0.25, 0.5, 0.75] {
                let f = crate::series::Polynomial::from_terms([(rho, 1.0.into())]);
                for z in [0.3f64, 0.8] {
                    let (c, e) = frac_power(rho as f64, -nu).unwrap();
                    let want = c * z.powf(e);
                    let got = quadrature::fractional_integral(&f, nu, z).unwrap();
                    assert!((got - want).abs() < 1e-8, "rho={rho} nu={nu} z={z}");
                }
            }
        }
    }
}
