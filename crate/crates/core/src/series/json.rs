//! JSON forms of the series types.
//!
//! `{"p": 1, "n": 1, "terms": [{"k": 2, "re": -0.5, "im": 0.0}]}` for
//! [`SeriesAnp`], `{"k": 2, "mag": 0.5}` terms for [`NegSeries`]. Exponents
//! must be strictly increasing. An optional `"order"` raises the truncation.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{NegSeries, SeriesAnp};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct ComplexTerm {
    k: u32,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct MagTerm {
    k: u32,
    mag: f64,
}

#[derive(Serialize, Deserialize)]
struct Doc<T> {
    p: u32,
    n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<u32>,
    terms: Vec<T>,
}

fn strictly_increasing(ks: impl Iterator<Item = u32>) -> Result<()> {
    let mut last: Option<u32> = None;
    for k in ks {
        if let Some(prev) = last {
            if k == prev {
                return Err(Error::Format(format!("duplicate exponent {k}")));
            }
            if k < prev {
                return Err(Error::Format(format!("exponents not increasing at {k}")));
            }
        }
        last = Some(k);
    }
    Ok(())
}

fn explicit_order(order: u32, top: Option<u32>, p: u32) -> Option<u32> {
    (order != top.unwrap_or(p)).then_some(order)
}

impl SeriesAnp {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Doc<ComplexTerm> = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        strictly_increasing(doc.terms.iter().map(|t| t.k))?;
        let s = SeriesAnp::from_terms(doc.p, doc.n, doc.terms.iter().map(|t| (t.k, Complex64::new(t.re, t.im))))?;
        match doc.order {
            Some(o) => s.with_order(o),
            None => Ok(s),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serialization is infallible")
    }
}

impl NegSeries {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Doc<MagTerm> = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        strictly_increasing(doc.terms.iter().map(|t| t.k))?;
        let s = NegSeries::from_mags(doc.p, doc.n, doc.terms.iter().map(|t| (t.k, t.mag)))?;
        match doc.order {
            Some(o) => s.with_order(o),
            None => Ok(s),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serialization is infallible")
    }
}

impl Serialize for SeriesAnp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let top = self.coeffs.keys().next_back().copied();
        Doc {
            p: self.p,
            n: self.n,
            order: explicit_order(self.order, top, self.p),
            terms: self.terms().map(|(k, a)| ComplexTerm { k, re: a.re, im: a.im }).collect(),
        }
        .serialize(s)
    }
}

impl Serialize for NegSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let top = self.mags.keys().next_back().copied();
        Doc {
            p: self.p,
            n: self.n,
            order: explicit_order(self.order, top, self.p),
            terms: self.terms().map(|(k, mag)| MagTerm { k, mag }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SeriesAnp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        SeriesAnp::from_json(&v.to_string()).map_err(serde::de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for NegSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        NegSeries::from_json(&v.to_string()).map_err(serde::de::Error::custom)
    }
}
