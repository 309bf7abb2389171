//! Adaptive Gauss–Kronrod (7/15) on `[0, 1]`, plus the two integral-operator
//! oracles that are built on it.

#![allow(clippy::excessive_precision)]

use crate::error::{param, Error, Result};
use crate::fractional::gamma::ln_gamma;
use crate::series::Polynomial;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_INTERVALS: usize = 4000;

/// Absolute error target of the operator oracles.
pub const ORACLE_TOL: f64 = 1e-8;

fn kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = WGK[7] * f(c);
    let mut g = WG[3] * f(c);
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    est: f64,
    err: f64,
}

/// Global adaptive scheme: repeatedly bisects the piece with the largest
/// error estimate until the summed estimate meets `tol`.
fn adapt(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (est, err) = kronrod(f, a, b);
    let mut pieces = vec![Piece { a, b, est, err }];
    let mut total_err = err;
    while total_err > tol && pieces.len() < MAX_INTERVALS {
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p.err > acc.1 { (i, p.err) } else { acc });
        let worst = pieces.swap_remove(idx);
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            pieces.push(worst);
            break;
        }
        let (l, le) = kronrod(f, worst.a, m);
        let (r, re) = kronrod(f, m, worst.b);
        pieces.push(Piece { a: worst.a, b: m, est: l, err: le });
        pieces.push(Piece { a: m, b: worst.b, est: r, err: re });
        total_err = pieces.iter().map(|p| p.err).sum();
    }
    let mut sorted: Vec<&Piece> = pieces.iter().collect();
    sorted.sort_by(|x, y| x.a.total_cmp(&y.a));
    (sorted.iter().map(|p| p.est).sum(), total_err)
}

/// `∫_a^b f` to absolute accuracy `tol`, or a quadrature error carrying the
/// best estimate and its error bound.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && tol > 0.0) {
        return param("integration limits must be finite and the tolerance positive");
    }
    let (estimate, error) = adapt(&f, a, b, tol);
    if !estimate.is_finite() || error > tol {
        return Err(Error::Quadrature { estimate, error });
    }
    Ok(estimate)
}

fn real_eval(f: &Polynomial, x: f64) -> f64 {
    f.evaluate(x.into()).re
}

/// Fractional integral of order `ν > 0` at a real point `0 < z < 1`,
/// `(1/Γ(ν)) ∫_0^z f(ζ)(z - ζ)^{ν-1} dζ`, by direct quadrature.
///
/// The substitution `ζ = z(1 - t^{1/ν})` absorbs the endpoint singularity and
/// leaves `z^ν/Γ(ν+1) ∫_0^1 f(z(1 - t^{1/ν})) dt`.
pub fn fractional_integral(f: &Polynomial, nu: f64, z: f64) -> Result<f64> {
    crate::coverage::touch(crate::coverage::Op::QuadratureOracle71);
    if !(nu > 0.0) {
        return param(format!("fractional integral needs nu > 0, got {nu}"));
    }
    if !(z > 0.0 && z < 1.0) {
        return param(format!("quadrature oracle needs a real point in (0, 1), got {z}"));
    }
    let inv = 1.0 / nu;
    let scale = (nu * z.ln() - ln_gamma(nu + 1.0)?).exp();
    let inner = integrate(|t| real_eval(f, z * (1.0 - t.powf(inv))), 0.0, 1.0, ORACLE_TOL / scale.max(1.0))?;
    Ok(scale * inner)
}

/// Bernardi-type integral `((ϑ+p)/z^ϑ) ∫_0^z t^{ϑ-1} f(t) dt` at real
/// `0 < z < 1` for `f = z^p + …`, by quadrature.
///
/// With `t = z s` and `s = u^{1/(ϑ+p)}` the integrand becomes `f(zs)/s^p`,
/// which is smooth on `[0, 1]`.
pub fn bernardi_integral(f: &Polynomial, vartheta: f64, p: u32, z: f64) -> Result<f64> {
    if !(vartheta + p as f64 > 0.0) {
        return param(format!("need vartheta + p > 0, got vartheta = {vartheta}, p = {p}"));
    }
    if !(z > 0.0 && z < 1.0) {
        return param(format!("quadrature oracle needs a real point in (0, 1), got {z}"));
    }
    let inv = 1.0 / (vartheta + p as f64);
    integrate(
        |u| {
            let s = u.powf(inv);
            real_eval(f, z * s) / s.powi(p as i32)
        },
        0.0,
        1.0,
        ORACLE_TOL,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x| 3.0 * x * x + 1.0, 0.0, 1.0, 1e-14).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn weak_singularity() {
        // ∫_0^1 x^{-1/2} = 2
        let v = integrate(|x| x.powf(-0.5), 0.0, 1.0, 1e-8).unwrap();
        assert!((v - 2.0).abs() < 1e-8);
    }

    #[test]
    fn reports_failure() {
        match integrate(|x| 1.0 / x, 0.0, 1.0, 1e-10) {
            Err(Error::Quadrature { estimate, error }) => assert!(error > 1e-10 || !estimate.is_finite()),
            other => panic!("expected quadrature error, got {other:?}"),
        }
    }

    #[test]
    fn order_one_is_antiderivative() {
        let f = Polynomial::from_terms([(1, 1.0.into()), (2, (-0.5).into())]);
        let want = 0.5 * 0.36 - 0.5 * 0.216 / 3.0;
        assert!((fractional_integral(&f, 1.0, 0.6).unwrap() - want).abs() < 1e-8);
    }

    #[test]
    fn bernardi_on_monomials() {
        // z^2 with ϑ = 1, p = 1 → (2/3) z^2
        let f = Polynomial::from_terms([(1, 1.0.into()), (2, (-0.5).into())]);
        let want = 0.5 - 0.5 * (2.0 / 3.0) * 0.25;
        assert!((bernardi_integral(&f, 1.0, 1, 0.5).unwrap() - want).abs() < 1e-8);
    }
}
