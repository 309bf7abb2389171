//! Truncated power series `z^p + Σ_{k ≥ n+p} a_k z^k` and the coefficientwise
//! products used throughout the crate.
//!
//! Coefficients are stored sparsely: most fixtures are single-term
//! perturbations of `z^p`. The leading `z^p` coefficient is implicit and
//! always 1.

mod grid;
mod json;

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{param, Error, Result};

pub use grid::{DiskGrid, GridPoint, RADIAL_PROBES};

/// Truncation order used when series are generated rather than parsed.
///
/// The kernel tails sampled here decay like `1/k²`; two hundred terms keep the
/// tail below 1e-4 on `|z| ≤ 0.99`.
pub const DEFAULT_ORDER: u32 = 200;

/// A member of `A(n, p)` truncated at exponent `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesAnp {
    p: u32,
    n: u32,
    order: u32,
    coeffs: BTreeMap<u32, Complex64>,
}

/// `z^p - Σ |a_k| z^k`, stored as the nonnegative magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct NegSeries {
    p: u32,
    n: u32,
    order: u32,
    mags: BTreeMap<u32, f64>,
}

/// A general sparse polynomial, used for derivatives and intermediate results
/// whose leading coefficient is no longer 1.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: BTreeMap<u32, Complex64>,
}

fn check_shape(p: u32, n: u32) -> Result<()> {
    if p == 0 {
        return param("valence p must be at least 1");
    }
    if n == 0 {
        return param("gap index n must be at least 1");
    }
    Ok(())
}

fn check_exponent(p: u32, n: u32, k: u32) -> Result<()> {
    if k < n + p {
        return Err(Error::Format(format!(
            "exponent {k} lies below n + p = {}",
            n + p
        )));
    }
    Ok(())
}

impl SeriesAnp {
    /// The bare `z^p`.
    pub fn identity(p: u32, n: u32) -> Result<Self> {
        check_shape(p, n)?;
        Ok(SeriesAnp {
            p,
            n,
            order: p,
            coeffs: BTreeMap::new(),
        })
    }

    /// Builds `z^p + Σ a_k z^k` from `(k, a_k)` pairs. Zero coefficients are
    /// dropped; duplicates are rejected. The truncation order is the largest
    /// exponent given (or `p` when there are none).
    pub fn from_terms<I>(p: u32, n: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Complex64)>,
    {
        check_shape(p, n)?;
        let mut coeffs = BTreeMap::new();
        let mut order = p;
        for (k, a) in terms {
            check_exponent(p, n, k)?;
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::Format(format!("non-finite coefficient at k = {k}")));
            }
            if coeffs.contains_key(&k) {
                return Err(Error::Format(format!("duplicate exponent {k}")));
            }
            order = order.max(k);
            if a != Complex64::new(0.0, 0.0) {
                coeffs.insert(k, a);
            }
        }
        Ok(SeriesAnp { p, n, order, coeffs })
    }

    /// Same as [`from_terms`](Self::from_terms) with real coefficients.
    pub fn from_real<I>(p: u32, n: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        Self::from_terms(p, n, terms.into_iter().map(|(k, a)| (k, Complex64::new(a, 0.0))))
    }

    /// Raises the truncation order; stored terms are unaffected.
    pub fn with_order(mut self, order: u32) -> Result<Self> {
        let top = self.coeffs.keys().next_back().copied().unwrap_or(self.p);
        if order < top.max(self.p) {
            return param(format!("order {order} is below the highest stored exponent {top}"));
        }
        self.order = order;
        Ok(self)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficient of `z^k`; 1 at `k = p`.
    pub fn coeff(&self, k: u32) -> Complex64 {
        if k == self.p {
            return Complex64::new(1.0, 0.0);
        }
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    /// Stored `(k, a_k)` pairs for `k ≥ n + p`, in increasing `k`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.coeffs.iter().map(|(k, a)| (*k, *a))
    }

    /// Dense coefficient vector `a_0 ..= a_order`, including the leading 1.
    pub fn dense(&self) -> Vec<Complex64> {
        (0..=self.order).map(|k| if k < self.p { Complex64::default() } else { self.coeff(k) }).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn map_coeffs(&self, mut f: impl FnMut(u32, Complex64) -> Complex64) -> SeriesAnp {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, &a)| (k, f(k, a)))
            .filter(|(_, a)| *a != Complex64::default())
            .collect();
        SeriesAnp {
            p: self.p,
            n: self.n,
            order: self.order,
            coeffs,
        }
    }

    /// Direct summation of the truncated series.
    ///
    /// Points with `|z| ≥ 1` are accepted (the sum is finite) but logged.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        if z.norm() >= 1.0 {
            log::warn!("evaluating outside the unit disk at |z| = {}", z.norm());
        }
        let lead = z.powu(self.p);
        let mut acc = lead;
        let mut power = lead;
        let mut last = self.p;
        for (&k, &a) in &self.coeffs {
            power *= z.powu(k - last);
            last = k;
            acc += a * power;
        }
        acc
    }

    /// `q`-th derivative; `z^k` becomes `k!/(k-q)! z^{k-q}`.
    pub fn derivative(&self, q: u32) -> Polynomial {
        self.to_polynomial().derivative(q)
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs.insert(self.p, Complex64::new(1.0, 0.0));
        Polynomial { coeffs }
    }

    /// Coefficientwise (Hadamard) product, truncated at the smaller order.
    pub fn hadamard(&self, other: &SeriesAnp) -> Result<SeriesAnp> {
        if self.p != other.p || self.n != other.n {
            return param(format!(
                "hadamard product needs matching (p, n); got ({}, {}) and ({}, {})",
                self.p, self.n, other.p, other.n
            ));
        }
        let order = self.order.min(other.order);
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| **k <= order)
            .filter_map(|(k, a)| other.coeffs.get(k).map(|b| (*k, a * b)))
            .filter(|(_, c)| *c != Complex64::default())
            .collect();
        Ok(SeriesAnp {
            p: self.p,
            n: self.n,
            order,
            coeffs,
        })
    }
}

impl NegSeries {
    pub fn identity(p: u32, n: u32) -> Result<Self> {
        check_shape(p, n)?;
        Ok(NegSeries {
            p,
            n,
            order: p,
            mags: BTreeMap::new(),
        })
    }

    /// Builds `z^p - Σ m_k z^k` from `(k, m_k)` with every `m_k ≥ 0`.
    pub fn from_mags<I>(p: u32, n: u32, mags: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        check_shape(p, n)?;
        let mut out = BTreeMap::new();
        let mut order = p;
        for (k, m) in mags {
            check_exponent(p, n, k)?;
            if !(m >= 0.0) || !m.is_finite() {
                return Err(Error::Format(format!("magnitude at k = {k} must be finite and nonnegative, got {m}")));
            }
            if out.contains_key(&k) {
                return Err(Error::Format(format!("duplicate exponent {k}")));
            }
            order = order.max(k);
            if m > 0.0 {
                out.insert(k, m);
            }
        }
        Ok(NegSeries {
            p,
            n,
            order,
            mags: out,
        })
    }

    pub fn with_order(mut self, order: u32) -> Result<Self> {
        let top = self.mags.keys().next_back().copied().unwrap_or(self.p);
        if order < top.max(self.p) {
            return param(format!("order {order} is below the highest stored exponent {top}"));
        }
        self.order = order;
        Ok(self)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `|a_k|`, zero when absent.
    pub fn mag(&self, k: u32) -> f64 {
        self.mags.get(&k).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.mags.iter().map(|(k, m)| (*k, *m))
    }

    pub fn is_identity(&self) -> bool {
        self.mags.is_empty()
    }

    /// Multiplies every magnitude by `factor ≥ 0`.
    pub fn scaled(&self, factor: f64) -> Result<NegSeries> {
        NegSeries::from_mags(self.p, self.n, self.terms().map(|(k, m)| (k, m * factor)))?.with_order(self.order)
    }

    /// The signed form, coefficient `-|a_k|` at `z^k`.
    pub fn to_series(&self) -> SeriesAnp {
        SeriesAnp {
            p: self.p,
            n: self.n,
            order: self.order,
            coeffs: self.mags.iter().map(|(&k, &m)| (k, Complex64::new(-m, 0.0))).collect(),
        }
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.to_series().evaluate(z)
    }

    /// `κ_m`: the bare `z^p` for `m < n + p`, else the terms up to `z^m`.
    pub fn partial_sum(&self, m: u32) -> NegSeries {
        let mags = if m < self.n + self.p {
            BTreeMap::new()
        } else {
            self.mags.range(..=m).map(|(k, v)| (*k, *v)).collect()
        };
        NegSeries {
            p: self.p,
            n: self.n,
            order: self.order.min(m).max(self.p),
            mags,
        }
    }
}

/// Checks that every series in `fs` shares `p` and `n` with the first.
pub(crate) fn shared_shape<'a, I>(fs: I) -> Result<(u32, u32)>
where
    I: IntoIterator<Item = &'a NegSeries>,
{
    let mut iter = fs.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::Parameter("empty list of functions".into()))?;
    for f in iter {
        if f.p != first.p || f.n != first.n {
            return param(format!(
                "mismatched (p, n): ({}, {}) vs ({}, {})",
                first.p, first.n, f.p, f.n
            ));
        }
    }
    Ok((first.p, first.n))
}

/// Quasi-convolution `z^p - Σ (Π_j |a_{k,j}|) z^k`.
///
/// Factors at each exponent are multiplied in sorted order, so any
/// permutation of `fs` produces bit-identical magnitudes.
pub fn quasi_conv(fs: &[NegSeries]) -> Result<NegSeries> {
    let (p, n) = shared_shape(fs)?;
    let order = fs.iter().map(|f| f.order).min().unwrap_or(p);
    let mut mags = BTreeMap::new();
    for &k in fs[0].mags.keys().filter(|k| **k <= order) {
        let mut factors: Vec<f64> = Vec::with_capacity(fs.len());
        for f in fs {
            match f.mags.get(&k) {
                Some(m) => factors.push(*m),
                None => break,
            }
        }
        if factors.len() < fs.len() {
            continue;
        }
        factors.sort_by(f64::total_cmp);
        let prod = factors.iter().product::<f64>();
        if prod > 0.0 {
            mags.insert(k, prod);
        }
    }
    Ok(NegSeries { p, n, order, mags })
}

impl Polynomial {
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, Complex64)>,
    {
        let mut coeffs = BTreeMap::new();
        for (k, a) in terms {
            *coeffs.entry(k).or_insert_with(Complex64::default) += a;
        }
        coeffs.retain(|_, a| *a != Complex64::default());
        Polynomial { coeffs }
    }

    pub fn coeff(&self, k: u32) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.coeffs.iter().map(|(k, a)| (*k, *a))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        let mut power = Complex64::new(1.0, 0.0);
        let mut last = 0;
        for (&k, &a) in &self.coeffs {
            power *= z.powu(k - last);
            last = k;
            acc += a * power;
        }
        acc
    }

    /// `q`-th derivative. Each coefficient is multiplied by `k, k-1, …, k-q+1`
    /// in that order, so differentiating once twice matches differentiating
    /// twice bit for bit.
    pub fn derivative(&self, q: u32) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| **k >= q)
            .map(|(&k, &a)| {
                let c = (0..q).fold(a, |acc, j| acc * (k - j) as f64);
                (k - q, c)
            })
            .collect();
        Polynomial { coeffs }
    }

    /// Multiplies by `z^shift`.
    pub fn shifted(&self, shift: u32) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|(&k, &a)| (k + shift, a)).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Polynomial {
        Polynomial::from_terms(self.coeffs.iter().map(|(&k, &a)| (k, a * factor)))
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        Polynomial::from_terms(self.terms().chain(other.terms()))
    }

    /// Reads the polynomial back as a member of `A(n, p)`.
    ///
    /// The `z^p` coefficient must equal 1 within `tol` and nothing may sit
    /// below `n + p` other than that term.
    pub fn into_series(self, p: u32, n: u32, order: u32, tol: f64) -> Result<SeriesAnp> {
        let lead = self.coeff(p);
        if (lead - Complex64::new(1.0, 0.0)).norm() > tol {
            return param(format!("leading coefficient {lead} is not 1"));
        }
        let terms = self.coeffs.into_iter().filter(|(k, _)| *k != p);
        let s = SeriesAnp::from_terms(p, n, terms.filter(|(k, _)| *k <= order))?;
        s.with_order(order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn evaluate_monomials_and_polynomials() {
        let f = SeriesAnp::identity(2, 1).unwrap();
        assert_eq!(f.evaluate(c(0.5)), c(0.25));
        let g = SeriesAnp::from_real(1, 1, [(2, -1.0)]).unwrap();
        assert_eq!(g.evaluate(c(0.5)), c(0.25));
        let h = SeriesAnp::from_real(1, 1, [(2, -0.5)]).unwrap();
        assert!((h.evaluate(c(0.5)) - c(0.375)).norm() < 1e-15);
    }

    #[test]
    fn derivative_rules() {
        let f = SeriesAnp::from_real(1, 1, [(2, -0.5)]).unwrap();
        assert_eq!(f.derivative(0), f.to_polynomial());
        let d = f.derivative(1);
        assert_eq!(d.coeff(0), c(1.0));
        assert_eq!(d.coeff(1), c(-1.0));
        let cube = SeriesAnp::identity(3, 1).unwrap();
        let d2 = cube.derivative(2);
        assert_eq!(d2, Polynomial::from_terms([(1, c(6.0))]));
    }

    #[test]
    fn hadamard_examples() {
        let f = SeriesAnp::from_real(1, 1, [(2, 2.0)]).unwrap();
        let g = SeriesAnp::from_real(1, 1, [(2, 3.0)]).unwrap();
        let h = f.hadamard(&g).unwrap();
        assert_eq!(h.coeff(2), c(6.0));
        let id = SeriesAnp::identity(1, 1).unwrap();
        assert!(f.hadamard(&id).unwrap().is_identity());
        let other = SeriesAnp::identity(2, 1).unwrap();
        assert!(matches!(f.hadamard(&other), Err(Error::Parameter(_))));
    }

    #[test]
    fn quasi_conv_examples() {
        let f1 = NegSeries::from_mags(1, 1, [(2, 0.5)]).unwrap();
        let f2 = NegSeries::from_mags(1, 1, [(2, 0.4)]).unwrap();
        assert_eq!(quasi_conv(std::slice::from_ref(&f1)).unwrap(), f1);
        let q = quasi_conv(&[f1.clone(), f2]).unwrap();
        assert!((q.mag(2) - 0.2).abs() < 1e-16);
        let id = NegSeries::identity(1, 1).unwrap();
        assert!(quasi_conv(&[f1.clone(), id]).unwrap().is_identity());
        assert!(quasi_conv(&[]).is_err());
        let other = NegSeries::identity(1, 2).unwrap();
        assert!(quasi_conv(&[f1, other]).is_err());
    }

    #[test]
    fn partial_sum_examples() {
        let f = NegSeries::from_mags(2, 1, [(3, 0.1), (5, 0.2)]).unwrap();
        assert!(f.partial_sum(1).is_identity());
        assert_eq!(f.partial_sum(f.order()), f);
        let g = NegSeries::from_mags(1, 1, [(2, 0.3), (3, 0.1)]).unwrap();
        let s = g.partial_sum(2);
        assert_eq!(s.mag(2), 0.3);
        assert_eq!(s.mag(3), 0.0);
    }

    #[test]
    fn construction_errors() {
        assert!(SeriesAnp::identity(0, 1).is_err());
        assert!(SeriesAnp::from_real(2, 2, [(3, 1.0)]).is_err());
        assert!(SeriesAnp::from_real(1, 1, [(2, 1.0), (2, 2.0)]).is_err());
        assert!(NegSeries::from_mags(1, 1, [(2, -0.1)]).is_err());
    }

    fn small_series() -> impl Strategy<Value = SeriesAnp> {
        proptest::collection::btree_map(2u32..12, (-2.0f64..2.0, -2.0f64..2.0), 0..6).prop_map(|m| {
            SeriesAnp::from_terms(1, 1, m.into_iter().map(|(k, (re, im))| (k, Complex64::new(re, im)))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn hadamard_matches_double_loop(f in small_series(), g in small_series()) {
            let h = f.hadamard(&g).unwrap();
            prop_assert_eq!(&h, &g.hadamard(&f).unwrap());
            let order = f.order().min(g.order());
            // independent double loop over dense vectors
            let (df, dg) = (f.dense(), g.dense());
            for (i, a) in df.iter().enumerate().take(order as usize + 1).skip(2) {
                for (j, b) in dg.iter().enumerate().take(order as usize + 1).skip(2) {
                    if i == j {
                        prop_assert_eq!(h.coeff(i as u32), a * b);
                    }
                }
            }
        }

        #[test]
        fn repeated_derivative_is_exact(f in small_series(), q in 0u32..4) {
            let once = (0..q).fold(f.to_polynomial(), |acc, _| acc.derivative(1));
            prop_assert_eq!(once, f.derivative(q));
        }

        #[test]
        fn quasi_conv_is_order_invariant(a in proptest::collection::vec(0.0f64..1.0, 3), b in proptest::collection::vec(0.0f64..1.0, 3)) {
            let fs: Vec<NegSeries> = a.iter().zip(&b).map(|(x, y)| NegSeries::from_mags(1, 1, [(2, *x), (3, *y)]).unwrap()).collect();
            let fwd = quasi_conv(&fs).unwrap();
            let rev: Vec<NegSeries> = fs.iter().rev().cloned().collect();
            let mid = vec![fs[1].clone(), fs[2].clone(), fs[0].clone()];
            prop_assert_eq!(&fwd, &quasi_conv(&rev).unwrap());
            prop_assert_eq!(&fwd, &quasi_conv(&mid).unwrap());
        }

        #[test]
        fn partial_sum_keeps_prefix(m in 1u32..12, mags in proptest::collection::btree_map(2u32..12, 0.01f64..1.0, 0..6)) {
            let f = NegSeries::from_mags(1, 1, mags).unwrap();
            let s = f.partial_sum(m);
            for k in 2..12 {
                if k <= m { prop_assert_eq!(s.mag(k), f.mag(k)); } else { prop_assert_eq!(s.mag(k), 0.0); }
            }
        }
    }
}
