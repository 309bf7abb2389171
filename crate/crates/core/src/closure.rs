//! Closure of the classes under quasi-convolution and under summing squared
//! coefficients.
//!
//! For members `f_j` of the classes with parameters `σ_j` (everything else
//! shared), the quasi-convolution lies in the class at
//!
//! ```text
//! Υ = p - Π_j (B-A)(p-σ_j) / ((B-A) [(n+p)(1+B)Φ_{n+p}]^{m-1})
//! ```
//!
//! and `z^p - Σ_k (Σ_j |a_{k,j}|²) z^k` lies in the class at
//! `χ = p - m(B-A)(p-σ*)² / ((n+p)(1+B)Φ_{n+p})` with `σ* = min σ_j`.

use serde::{Deserialize, Serialize};

use crate::classes::{coeff_sum, extremal_term, ClassParams, MEMBERSHIP_TOL};
use crate::error::{param, Error, Result};
use crate::report::{MarginTracker, VerifyReport, Witness};
use crate::series::{quasi_conv, shared_shape, NegSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureKind {
    Product,
    Squares,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureResult {
    pub kind: ClosureKind,
    pub new_sigma: f64,
    pub sigmas: Vec<f64>,
    /// Set when `new_sigma` falls outside `[0, p)`, where no class exists.
    pub vacuous: bool,
}

/// Checks that the classes agree on everything except `σ`; returns the first.
fn shared(clss: &[ClassParams]) -> Result<ClassParams> {
    let first = *clss.first().ok_or_else(|| Error::Parameter("empty class list".into()))?;
    for c in clss {
        c.validate()?;
        if c.op != first.op || c.a != first.a || c.b != first.b || c.n != first.n {
            return param("classes must share everything except sigma");
        }
    }
    Ok(first)
}

/// `(n+p)(1+B)Φ_{n+p}`.
fn lead_weight(cls: &ClassParams) -> f64 {
    cls.weight(cls.first_exponent())
}

fn result(kind: ClosureKind, cls: &ClassParams, clss: &[ClassParams], new_sigma: f64) -> ClosureResult {
    ClosureResult {
        kind,
        new_sigma,
        sigmas: clss.iter().map(|c| c.sigma).collect(),
        vacuous: !(new_sigma >= 0.0 && new_sigma < cls.p() as f64),
    }
}

pub fn upsilon(clss: &[ClassParams]) -> Result<ClosureResult> {
    crate::coverage::touch(crate::coverage::Op::Upsilon);
    let cls = shared(clss)?;
    let ba = cls.b - cls.a;
    let p = cls.p() as f64;
    let w = lead_weight(&cls);
    // Pair each (B-A)(p-σ_j) after the first with one factor of w to keep the
    // running product near 1.
    let mut ratio = p - clss[0].sigma;
    for c in &clss[1..] {
        ratio *= ba * (p - c.sigma) / w;
    }
    Ok(result(ClosureKind::Product, &cls, clss, p - ratio))
}

pub fn chi(clss: &[ClassParams]) -> Result<ClosureResult> {
    crate::coverage::touch(crate::coverage::Op::Chi);
    let cls = shared(clss)?;
    let p = cls.p() as f64;
    let star = clss.iter().map(|c| c.sigma).fold(f64::INFINITY, f64::min);
    let m = clss.len() as f64;
    let new_sigma = p - m * (cls.b - cls.a) * (p - star).powi(2) / lead_weight(&cls);
    Ok(result(ClosureKind::Squares, &cls, clss, new_sigma))
}

pub fn closure_sigma(kind: ClosureKind, clss: &[ClassParams]) -> Result<ClosureResult> {
    match kind {
        ClosureKind::Product => upsilon(clss),
        ClosureKind::Squares => chi(clss),
    }
}

/// `z^p - Σ_k (Σ_j |a_{k,j}|²) z^k`.
pub fn h_squares(fs: &[NegSeries]) -> Result<NegSeries> {
    crate::coverage::touch(crate::coverage::Op::HSquares);
    let (p, n) = shared_shape(fs)?;
    let mut acc: std::collections::BTreeMap<u32, f64> = std::collections::BTreeMap::new();
    for f in fs {
        for (k, m) in f.terms() {
            *acc.entry(k).or_insert(0.0) += m * m;
        }
    }
    let order = fs.iter().map(NegSeries::order).max().unwrap_or(p);
    NegSeries::from_mags(p, n, acc)?.with_order(order)
}

/// The combined function for `kind`.
pub fn combine(kind: ClosureKind, fs: &[NegSeries]) -> Result<NegSeries> {
    match kind {
        ClosureKind::Product => quasi_conv(fs),
        ClosureKind::Squares => h_squares(fs),
    }
}

/// Combines members `fs[j]` of `clss[j]` and checks the result against the
/// class at the closure parameter with exact coefficient arithmetic.
///
/// Inputs that are not members give a hypothesis error; a closure parameter
/// outside `[0, p)` gives [`Error::Vacuous`].
pub fn closure_check(kind: ClosureKind, clss: &[ClassParams], fs: &[NegSeries]) -> Result<VerifyReport> {
    crate::coverage::touch(crate::coverage::Op::ClosureCheck);
    if clss.len() != fs.len() {
        return param(format!("{} classes but {} functions", clss.len(), fs.len()));
    }
    for (j, (c, f)) in clss.iter().zip(fs).enumerate() {
        let v = coeff_sum(c, f)?;
        if !v.member {
            return Err(Error::Hypothesis(format!("function {j} is not a member (margin {})", v.margin)));
        }
    }
    let res = closure_sigma(kind, clss)?;
    if res.vacuous {
        return Err(Error::Vacuous(res.new_sigma));
    }
    let combined = combine(kind, fs)?;
    let v = coeff_sum(&clss[0].with_sigma(res.new_sigma), &combined)?;
    let id = match kind {
        ClosureKind::Product => "quasi-convolution",
        ClosureKind::Squares => "square-sum",
    };
    let mut t = MarginTracker::new();
    t.record(v.margin, || Witness {
        label: format!("combined function at sigma = {}", res.new_sigma),
        point: None,
        value: v.lhs,
    });
    Ok(t.finish(id, MEMBERSHIP_TOL, false))
}

/// The extremal tuple `z^p - (B-A)(p-σ_j)/((n+p)(1+B)Φ_{n+p}) z^{n+p}`.
pub fn extremal_tuple(clss: &[ClassParams]) -> Result<Vec<NegSeries>> {
    shared(clss)?;
    clss.iter().map(|c| extremal_term(c, c.first_exponent())).collect()
}

/// `Σ_k kΦ_k(1+B) √(|a_{k,1}||a_{k,2}|) / √(Π_j (B-A)(p-σ_j))`, which the
/// Cauchy–Schwarz step bounds by 1 for members.
pub fn cauchy_schwarz_sum(clss: &[ClassParams; 2], f1: &NegSeries, f2: &NegSeries) -> Result<f64> {
    shared(clss)?;
    shared_shape([f1, f2])?;
    let den = (clss[0].rhs() * clss[1].rhs()).sqrt();
    Ok(f1
        .terms()
        .map(|(k, m)| clss[0].weight(k) * (m * f2.mag(k)).sqrt())
        .sum::<f64>()
        / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::OperatorParams;

    fn base(sigma: f64) -> ClassParams {
        ClassParams::new(OperatorParams::new(0.0, 1.0, 0.0, 0.0, 1).unwrap(), -1.0, 1.0, sigma, 1).unwrap()
    }

    fn richer(sigma: f64) -> ClassParams {
        ClassParams::new(OperatorParams::new(1.2, 1.1, 0.5, 0.3, 3).unwrap(), -0.6, 0.8, sigma, 2).unwrap()
    }

    #[test]
    fn upsilon_examples() {
        assert!((upsilon(&[base(0.3)]).unwrap().new_sigma - 0.3).abs() < 1e-15);
        let u = upsilon(&[base(0.0), base(0.0)]).unwrap();
        assert!((u.new_sigma - 0.5).abs() < 1e-15 && !u.vacuous);
        // equal σ: [(B-A)(p-σ)]^m / ((B-A) W^{m-1})
        let c = richer(1.1);
        let w = (5.0) * 1.8 * c.op.phi(5);
        let want = 3.0 - c.rhs().powi(3) / (1.4 * w * w);
        assert!((upsilon(&[c, c, c]).unwrap().new_sigma - want).abs() < 1e-13);
        assert!(upsilon(&[base(0.0), richer(0.0)]).is_err());
    }

    #[test]
    fn chi_examples() {
        assert!((chi(&[base(0.0)]).unwrap().new_sigma - 0.5).abs() < 1e-15);
        let one = chi(&[richer(0.5), richer(1.0)]).unwrap().new_sigma;
        let two = chi(&[richer(0.5), richer(1.0), richer(2.0)]).unwrap().new_sigma;
        assert!(two < one);
    }

    #[test]
    fn squares() {
        let f1 = NegSeries::from_mags(1, 1, [(2, 0.3)]).unwrap();
        let f2 = NegSeries::from_mags(1, 1, [(2, 0.4)]).unwrap();
        assert!((h_squares(&[f1.clone(), f2]).unwrap().mag(2) - 0.25).abs() < 1e-15);
        let one = h_squares(std::slice::from_ref(&f1)).unwrap();
        let two = h_squares(&[f1.clone(), f1]).unwrap();
        assert_eq!(two.mag(2), 2.0 * one.mag(2));
    }

    #[test]
    fn extremal_tuples_are_sharp() {
        let clss = [richer(0.4), richer(1.7)];
        let fs = extremal_tuple(&clss).unwrap();
        let r = closure_check(ClosureKind::Product, &clss, &fs).unwrap();
        assert!(r.pass && r.worst_margin.abs() < 1e-10);
        let u = upsilon(&clss).unwrap().new_sigma;
        let shifted = coeff_sum(&clss[0].with_sigma(u + 1e-4), &quasi_conv(&fs).unwrap()).unwrap();
        assert!(shifted.margin < 0.0);
        assert!(closure_check(ClosureKind::Squares, &clss, &fs).unwrap().pass);
        assert!(cauchy_schwarz_sum(&clss, &fs[0], &fs[1]).unwrap() <= 1.0 + 1e-12);
    }

    #[test]
    fn identity_absorbs() {
        let clss = [richer(0.4), richer(1.7)];
        let fs = [NegSeries::identity(3, 2).unwrap(), extremal_term(&clss[1], 7).unwrap()];
        let r = closure_check(ClosureKind::Product, &clss, &fs).unwrap();
        assert!(r.pass);
        let bad = [fs[1].scaled(3.0).unwrap(), fs[1].clone()];
        assert!(matches!(closure_check(ClosureKind::Product, &clss, &bad), Err(Error::Hypothesis(_))));
    }
}
