//! Catalog of concrete contraction families.
//!
//! Every [`FunctionSpec`] variant carries its value, analytic first and
//! second derivatives, a double-double evaluator, its domain, and its
//! attracting fixed point. Specs have a canonical text form such as
//! `sqrt_affine(c=2)` or `cheb_inverse(k=5,scaled=false)`.
//!
//! | family | f(t) | L | m = f'(L) |
//! |---|---|---|---|
//! | `sqrt_affine(c)` | √(c+t) | (1+√(1+4c))/2 | 1/(2L) |
//! | `kth_root(l,k)` | (lᵏ−l+t)^{1/k} | l | 1/(k lᵏ⁻¹) |
//! | `mobius(a,b,d)` | (at+b)/(t+d) | larger-|λ| fixed point | (ad−b)/(L+d)² |
//! | `log_shift(l)` | ln(eˡ−l+t) | l | e⁻ˡ |
//! | `rational_demo()` | 6−(2t+16)/(t²+1) | 5 | 4/13 |
//! | `power_map(alpha)` | t^α | 1 | α |
//! | `scaled_cube_root()` | ∛(t/4) | 1/2 | 1/3 |
//! | `exp_conjugate()` | exp(√(2+ln t)) | e² | 1/4 |
//! | `cheb_inverse(k,scaled)` | f_K(t) or K f_K(t/K) | 1 or K | 1/K² |
//! | `continued_fraction(a,b)` | a+b/t | as mobius(a,b,0) | −b/L² |
//! | `non_smooth_demo()` | 1+g(t−1), g=.5z−.24z²+.024z²\|z\| | 1 | 1/2 |
//! | `quartic_demo()` | 1+g(t−1), g=z/2−z⁴/12 | 1 | 1/2 |
//!
//! Newton seeds, where Newton is used at all, are `L + 0.5` from the
//! closed-form value above; the fixed points themselves are analytic and only
//! refined to double-double accuracy.

use std::fmt;
use std::str::FromStr;

use crate::chebyshev;
use crate::error::{Error, Result};
use crate::mobius::MobiusCoeffs;
use crate::numeric::{finite, Ext, Precision};

/// A real map that can be iterated in binary64 or double-double arithmetic.
pub trait IterMap: fmt::Debug + Sync {
    fn label(&self) -> String;
    fn eval(&self, t: f64) -> Result<f64>;
    fn eval_ext(&self, t: Ext) -> Result<Ext>;
    fn deriv1(&self, t: f64) -> Result<f64>;
    fn deriv2(&self, t: f64) -> Result<f64>;

    /// Evaluates in the requested precision, returning a double-double either way.
    fn eval_in(&self, precision: Precision, t: Ext) -> Result<Ext> {
        match precision {
            Precision::Double => self.eval(t.to_f64()).map(Ext::from_f64),
            Precision::Extended => self.eval_ext(t),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FunctionSpec {
    SqrtAffine { c: f64 },
    KthRoot { l: f64, k: u32 },
    Mobius { a: f64, b: f64, d: f64 },
    LogShift { l: f64 },
    RationalDemo,
    PowerMap { alpha: f64 },
    ScaledCubeRoot,
    ExpConjugate,
    ChebyInverse { k: u32, scaled: bool },
    ContinuedFraction { a: f64, b: f64 },
    NonSmoothDemo,
    QuarticDemo,
}

/// Real domain of a catalog map: an interval, possibly with one excluded pole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub lo_inclusive: bool,
    pub pole: Option<f64>,
}

impl Domain {
    fn all() -> Domain {
        Domain {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            lo_inclusive: false,
            pole: None,
        }
    }

    fn from(lo: f64, inclusive: bool) -> Domain {
        Domain {
            lo,
            hi: f64::INFINITY,
            lo_inclusive: inclusive,
            pole: None,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        if !t.is_finite() {
            return false;
        }
        let above = if self.lo_inclusive {
            t >= self.lo
        } else {
            t > self.lo
        };
        above && t < self.hi && self.pole != Some(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointInfo {
    pub l: f64,
    /// The same fixed point to double-double accuracy.
    pub l_ext: Ext,
    pub m: f64,
    /// f''(L), when defined.
    pub s: Option<f64>,
    pub attracting: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootLikeReport {
    pub interval: (f64, f64),
    pub is_contraction: bool,
    pub fprime_positive: bool,
    pub fsecond_negative: bool,
    pub verdict: bool,
}

const E2: f64 = 7.38905609893065;

impl FunctionSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let fin = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match *self {
            FunctionSpec::SqrtAffine { c } => {
                if !fin(&[c]) || c <= -0.25 {
                    return bad(format!("sqrt_affine needs c > -1/4, got {c}"));
                }
            }
            FunctionSpec::KthRoot { l, k } => {
                if k < 2 || !fin(&[l]) || l <= 0.0 {
                    return bad(format!("kth_root needs k >= 2 and l > 0, got l={l}, k={k}"));
                }
                if (k as f64) * l.powi(k as i32 - 1) <= 1.0 {
                    return bad(format!("kth_root(l={l},k={k}) has f'(L) >= 1"));
                }
            }
            FunctionSpec::Mobius { a, b, d } => {
                MobiusCoeffs::new(a, b, d)?;
            }
            FunctionSpec::LogShift { l } => {
                if !fin(&[l]) || l <= 0.0 {
                    return bad(format!("log_shift needs l > 0, got {l}"));
                }
            }
            FunctionSpec::PowerMap { alpha } => {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return bad(format!("power_map needs 0 < alpha < 1, got {alpha}"));
                }
            }
            FunctionSpec::ChebyInverse { k, .. } => {
                if !(2..=64).contains(&k) {
                    return bad(format!("cheb_inverse needs 2 <= k <= 64, got {k}"));
                }
            }
            FunctionSpec::ContinuedFraction { a, b } => {
                if !fin(&[a, b]) || b == 0.0 {
                    return bad(format!("continued_fraction needs b != 0, got a={a}, b={b}"));
                }
            }
            FunctionSpec::RationalDemo
            | FunctionSpec::ScaledCubeRoot
            | FunctionSpec::ExpConjugate
            | FunctionSpec::NonSmoothDemo
            | FunctionSpec::QuarticDemo => {}
        }
        Ok(())
    }

    /// Every catalog variant, with representative parameters.
    pub fn examples() -> Vec<FunctionSpec> {
        vec![
            FunctionSpec::SqrtAffine { c: 2.0 },
            FunctionSpec::SqrtAffine { c: 6.0 },
            FunctionSpec::KthRoot { l: 3.0, k: 3 },
            FunctionSpec::KthRoot { l: 1.5, k: 2 },
            FunctionSpec::Mobius {
                a: 3.0,
                b: 6.0,
                d: 4.0,
            },
            FunctionSpec::LogShift { l: 1.0 },
            FunctionSpec::RationalDemo,
            FunctionSpec::PowerMap { alpha: 0.5 },
            FunctionSpec::ScaledCubeRoot,
            FunctionSpec::ExpConjugate,
            FunctionSpec::ChebyInverse {
                k: 3,
                scaled: false,
            },
            FunctionSpec::ChebyInverse { k: 5, scaled: true },
            FunctionSpec::ContinuedFraction { a: 2.0, b: 15.0 },
            FunctionSpec::NonSmoothDemo,
            FunctionSpec::QuarticDemo,
        ]
    }

    /// `(a, b, d)` for the Möbius and continued-fraction variants.
    pub fn mobius_coeffs(&self) -> Option<(f64, f64, f64)> {
        match *self {
            FunctionSpec::Mobius { a, b, d } => Some((a, b, d)),
            FunctionSpec::ContinuedFraction { a, b } => Some((a, b, 0.0)),
            _ => None,
        }
    }

    pub fn domain(&self) -> Domain {
        match *self {
            FunctionSpec::SqrtAffine { c } => Domain::from(-c, true),
            FunctionSpec::KthRoot { l, k } => Domain::from(l - l.powi(k as i32), true),
            FunctionSpec::LogShift { l } => Domain::from(l - l.exp(), false),
            FunctionSpec::PowerMap { .. } | FunctionSpec::ScaledCubeRoot => Domain::from(0.0, true),
            FunctionSpec::ExpConjugate => Domain::from((-2f64).exp(), true),
            FunctionSpec::ChebyInverse { k, scaled } => {
                Domain::from(if scaled { -(k as f64) } else { -1.0 }, true)
            }
            FunctionSpec::Mobius { .. } | FunctionSpec::ContinuedFraction { .. } => {
                let (_, _, d) = self.mobius_coeffs().unwrap();
                Domain {
                    pole: Some(-d),
                    ..Domain::all()
                }
            }
            FunctionSpec::RationalDemo
            | FunctionSpec::NonSmoothDemo
            | FunctionSpec::QuarticDemo => Domain::all(),
        }
    }

    /// A well-conditioned interval around the fixed point, inside the domain,
    /// used for sampling and as the default verification interval.
    pub fn sample_interval(&self) -> Result<(f64, f64)> {
        let fp = fixed_point(self)?;
        let l = fp.l;
        let around_base = |base: f64| (base + 0.1 * (l - base), l + 2.0 * (l - base));
        Ok(match *self {
            FunctionSpec::SqrtAffine { .. }
            | FunctionSpec::KthRoot { .. }
            | FunctionSpec::LogShift { .. }
            | FunctionSpec::ExpConjugate => around_base(self.domain().lo),
            FunctionSpec::ChebyInverse { k, scaled } => {
                let s = if scaled { k as f64 } else { 1.0 };
                (-0.9 * s, 5.0 * s)
            }
            FunctionSpec::Mobius { .. } | FunctionSpec::ContinuedFraction { .. } => {
                let (a, b, d) = self.mobius_coeffs().unwrap();
                let mc = MobiusCoeffs::new(a, b, d)?;
                let e = mc.eigen()?;
                let r = 0.5 * (e.l + d).abs().min((e.l - e.l1).abs());
                (l - r, l + r)
            }
            FunctionSpec::RationalDemo => (3.5, 10.0),
            FunctionSpec::PowerMap { .. } => (0.1, 4.0),
            FunctionSpec::ScaledCubeRoot => (0.05, 3.0),
            FunctionSpec::NonSmoothDemo => (-0.28, 2.2),
            FunctionSpec::QuarticDemo => (0.0, 2.0),
        })
    }

    fn check(&self, t: f64) -> Result<()> {
        if self.domain().contains(t) {
            Ok(())
        } else {
            Err(Error::Domain {
                what: self.to_string(),
                t,
            })
        }
    }

    /// Interior check for derivatives, which blow up at closed endpoints.
    fn check_interior(&self, t: f64) -> Result<()> {
        self.check(t)?;
        let dom = self.domain();
        if dom.lo_inclusive && t == dom.lo {
            return Err(Error::Domain {
                what: format!("derivative of {self}"),
                t,
            });
        }
        Ok(())
    }
}

impl IterMap for FunctionSpec {
    fn label(&self) -> String {
        self.to_string()
    }

    fn eval(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        let v = match *self {
            FunctionSpec::SqrtAffine { c } => (c + t).sqrt(),
            FunctionSpec::KthRoot { l, k } => (l.powi(k as i32) - l + t).powf(1.0 / k as f64),
            FunctionSpec::Mobius { .. } | FunctionSpec::ContinuedFraction { .. } => {
                let (a, b, d) = self.mobius_coeffs().unwrap();
                (a * t + b) / (t + d)
            }
            // The argument minus 1 is formed in double-double so the constant
            // e^l − l − 1 does not round before t is added.
            FunctionSpec::LogShift { l } => {
                let u = Ext::from_f64(l).exp() - l - 1.0 + t;
                u.to_f64().ln_1p()
            }
            FunctionSpec::RationalDemo => 6.0 - (2.0 * t + 16.0) / (t * t + 1.0),
            FunctionSpec::PowerMap { alpha } => t.powf(alpha),
            FunctionSpec::ScaledCubeRoot => (t / 4.0).cbrt(),
            FunctionSpec::ExpConjugate => (2.0 + t.ln()).sqrt().exp(),
            FunctionSpec::ChebyInverse { k, scaled } => chebyshev::f_k(k, t, scaled)?,
            // The polynomial demos cancel near their small values, so they
            // are rounded from the double-double result.
            FunctionSpec::NonSmoothDemo | FunctionSpec::QuarticDemo => {
                return finite(
                    self.eval_ext(Ext::from_f64(t))?.to_f64(),
                    "catalog evaluation",
                );
            }
        };
        finite(v, "catalog evaluation")
    }

    fn eval_ext(&self, t: Ext) -> Result<Ext> {
        self.check(t.to_f64())?;
        let v = match *self {
            FunctionSpec::SqrtAffine { c } => (t + c).sqrt(),
            FunctionSpec::KthRoot { l, k } => {
                let lk = Ext::from_f64(l).powi(k as i32);
                (lk - l + t).nth_root(k)
            }
            FunctionSpec::Mobius { .. } | FunctionSpec::ContinuedFraction { .. } => {
                let (a, b, d) = self.mobius_coeffs().unwrap();
                let den = t + d;
                if den.is_zero() {
                    return Err(Error::Domain {
                        what: self.to_string(),
                        t: t.to_f64(),
                    });
                }
                (t * a + b) / den
            }
            FunctionSpec::LogShift { l } => (Ext::from_f64(l).exp() - l + t).ln(),
            FunctionSpec::RationalDemo => Ext::from_f64(6.0) - (t * 2.0 + 16.0) / (t.sqr() + 1.0),
            FunctionSpec::PowerMap { alpha } => {
                if t.is_zero() {
                    Ext::ZERO
                } else {
                    t.powf(Ext::from_f64(alpha))
                }
            }
            FunctionSpec::ScaledCubeRoot => (t / 4.0).nth_root(3),
            FunctionSpec::ExpConjugate => (t.ln() + 2.0).sqrt().exp(),
            FunctionSpec::ChebyInverse { k, scaled } => chebyshev::f_k_ext(k, t, scaled)?,
            FunctionSpec::NonSmoothDemo => {
                let z = t - 1.0;
                let z2 = z.sqr();
                Ext::ONE + z * 0.5 - z2 * 0.24 + z2 * z.abs() * 0.024
            }
            FunctionSpec::QuarticDemo => {
                let z = t - 1.0;
                Ext::ONE + z / 2.0 - z.sqr().sqr() / 12.0
            }
        };
        crate::numeric::finite_ext(v, "catalog evaluation")
    }

    fn deriv1(&self, t: f64) -> Result<f64> {
        self.check_interior(t)?;
        let v = match *self {
            FunctionSpec::SqrtAffine { c } => 0.5 / (c + t).sqrt(),
            FunctionSpec::KthRoot { l, k } => {
                let kf = k as f64;
                (l.powi(k as i32) - l + t).powf(1.0 / kf - 1.0) / kf
            }
            FunctionSpec::Mobius { .. } | FunctionSpec::ContinuedFraction { .. } => {
                let (a, b, d) = self.mobius_coeffs().unwrap();
                (a * d - b) / ((t + d) * (t + d))
            }
            FunctionSpec::LogShift { l } => 1.0 / (l.exp() - l + t),
            FunctionSpec::RationalDemo => {
                let q = t * t + 1.0;
                (2.0 * t * t + 32.0 * t - 2.0) / (q * q)
            }
            FunctionSpec::PowerMap { alpha } => alpha * t.powf(alpha - 1.0),
            FunctionSpec::ScaledCubeRoot => 0.25f64.cbrt() / 3.0 * t.powf(-2.0 / 3.0),
            FunctionSpec::ExpConjugate => {
                let r = (2.0 + t.ln()).sqrt();
                r.exp() / (2.0 * r * t)
            }
            FunctionSpec::ChebyInverse { k, scaled } => chebyshev::f_k_derivs(k, t, scaled)?.0,
            FunctionSpec::NonSmoothDemo => {
                let z = t - 1.0;
                0.5 - 0.48 * z + 0.072 * z * z.abs()
            }
            FunctionSpec::QuarticDemo => {
                let z = t - 1.0;
                0.5 - z.powi(3) / 3.0
            }
        };
        finite(v, "first derivative")
    }

    fn deriv2(&self, t: f64) -> Result<f64> {
        self.check_interior(t)?;
        let v = match *self {
            FunctionSpec::SqrtAffine { c } => -0.25 / (c + t).powf(1.5),
            FunctionSpec::KthRoot { l, k } => {
                let kf = k as f64;
                (1.0 / kf) * (1.0 / kf - 1.0) * (l.powi(k as i32) - l + t).powf(1.0 / kf - 2.0)
            }
            FunctionSpec::Mobius { .. } | FunctionSpec::ContinuedFraction { .. } => {
                let (a, b, d) = self.mobius_coeffs().unwrap();
                2.0 * (b - a * d) / (t + d).powi(3)
            }
            FunctionSpec::LogShift { l } => {
                let u = l.exp() - l + t;
                -1.0 / (u * u)
            }
            FunctionSpec::RationalDemo => {
                let q = t * t + 1.0;
                (-4.0 * t.powi(3) - 96.0 * t * t + 12.0 * t + 32.0) / q.powi(3)
            }
            FunctionSpec::PowerMap { alpha } => alpha * (alpha - 1.0) * t.powf(alpha - 2.0),
            FunctionSpec::ScaledCubeRoot => -2.0 / 9.0 * 0.25f64.cbrt() * t.powf(-5.0 / 3.0),
            FunctionSpec::ExpConjugate => {
                let r = (2.0 + t.ln()).sqrt();
                let g1 = r.exp() / (2.0 * r * t);
                let r1 = 1.0 / (2.0 * r * t);
                g1 * (r1 * (1.0 - 1.0 / r) - 1.0 / t)
            }
            FunctionSpec::ChebyInverse { k, scaled } => chebyshev::f_k_derivs(k, t, scaled)?.1,
            FunctionSpec::NonSmoothDemo => -0.48 + 0.144 * (t - 1.0).abs(),
            FunctionSpec::QuarticDemo => -(t - 1.0).powi(2),
        };
        finite(v, "second derivative")
    }
}

/// Refines an approximate attracting fixed point to double-double accuracy.
pub fn refine_fixed_point_ext<M: IterMap + ?Sized>(map: &M, l: f64) -> Result<Ext> {
    let slope = map.deriv1(l)? - 1.0;
    if slope == 0.0 {
        return Ok(Ext::from_f64(l));
    }
    let mut t = Ext::from_f64(l);
    for _ in 0..4 {
        let r = map.eval_ext(t)? - t;
        t -= r / slope;
    }
    Ok(t)
}

/// Newton iteration on f(t) - t from `seed`, to a residual of 1e-14.
pub fn newton_fixed_point<M: IterMap + ?Sized>(map: &M, seed: f64) -> Result<f64> {
    let mut t = seed;
    for _ in 0..100 {
        let r = map.eval(t)? - t;
        if r.abs() <= 1e-14 * t.abs().max(1.0) {
            return Ok(t);
        }
        let slope = map.deriv1(t)? - 1.0;
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        t -= r / slope;
        if !t.is_finite() {
            break;
        }
    }
    Err(Error::NoFixedPoint(map.label()))
}

pub fn fixed_point(spec: &FunctionSpec) -> Result<FixedPointInfo> {
    spec.validate()?;
    let (l, m, s) = match *spec {
        FunctionSpec::SqrtAffine { c } => {
            let l = (1.0 + (1.0 + 4.0 * c).sqrt()) / 2.0;
            (l, 1.0 / (2.0 * l), -1.0 / (4.0 * l.powi(3)))
        }
        FunctionSpec::KthRoot { l, k } => {
            let kf = k as f64;
            (
                l,
                1.0 / (kf * l.powi(k as i32 - 1)),
                (1.0 / kf) * (1.0 / kf - 1.0) * l.powi(1 - 2 * k as i32),
            )
        }
        FunctionSpec::Mobius { .. } | FunctionSpec::ContinuedFraction { .. } => {
            let (a, b, d) = spec.mobius_coeffs().unwrap();
            let mc = MobiusCoeffs::new(a, b, d)?;
            let e = mc
                .eigen()
                .map_err(|_| Error::NoFixedPoint(spec.to_string()))?;
            let den = e.l + d;
            (
                e.l,
                (a * d - b) / (den * den),
                2.0 * (b - a * d) / den.powi(3),
            )
        }
        FunctionSpec::LogShift { l } => (l, (-l).exp(), -(-2.0 * l).exp()),
        FunctionSpec::RationalDemo => (5.0, 4.0 / 13.0, -27.0 / 169.0),
        FunctionSpec::PowerMap { alpha } => (1.0, alpha, alpha * (alpha - 1.0)),
        FunctionSpec::ScaledCubeRoot => (0.5, 1.0 / 3.0, -4.0 / 9.0),
        FunctionSpec::ExpConjugate => (E2, 0.25, -7.0 / (32.0 * E2)),
        FunctionSpec::ChebyInverse { k, scaled } => {
            let kf = k as f64;
            let s = -(kf * kf - 1.0) / (3.0 * kf.powi(4));
            if scaled {
                (kf, 1.0 / (kf * kf), s / kf)
            } else {
                (1.0, 1.0 / (kf * kf), s)
            }
        }
        FunctionSpec::NonSmoothDemo => (1.0, 0.5, -0.48),
        FunctionSpec::QuarticDemo => (1.0, 0.5, 0.0),
    };
    let l_ext = match *spec {
        FunctionSpec::SqrtAffine { c } => ((Ext::from_f64(c) * 4.0 + 1.0).sqrt() + 1.0) / 2.0,
        FunctionSpec::ExpConjugate => Ext::TWO.exp(),
        _ => refine_fixed_point_ext(spec, l)?,
    };
    Ok(FixedPointInfo {
        l,
        l_ext,
        m,
        s: Some(s),
        attracting: m.abs() < 1.0,
    })
}

/// Maximal interval `(lo, hi)` on which `0 < f' < 1`, from the family's
/// closed form. `hi` is `+inf` for every supported family.
pub fn contraction_interval(spec: &FunctionSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    match *spec {
        FunctionSpec::SqrtAffine { c } => Ok((0.25 - c, f64::INFINITY)),
        FunctionSpec::KthRoot { l, k } => {
            let kf = k as f64;
            Ok((
                l - l.powi(k as i32) + (1.0 / kf).powf(kf / (kf - 1.0)),
                f64::INFINITY,
            ))
        }
        FunctionSpec::ChebyInverse { k, scaled } => {
            let z = chebyshev::unit_slope_point(k)?;
            let s = if scaled { k as f64 } else { 1.0 };
            Ok((z * s, f64::INFINITY))
        }
        _ => Err(Error::Unsupported(format!(
            "closed-form contraction interval of {spec}; use root_like_neighborhood"
        ))),
    }
}

/// Grid check of the root-like conditions `0 < f' < 1`, `f'' < 0` on an
/// interval, plus the requirement that the fixed point lies strictly inside.
///
/// Grid points are cell midpoints, so open-interval endpoints are never
/// evaluated; the fixed point itself is always checked too.
pub fn verify_root_like(
    spec: &FunctionSpec,
    interval: (f64, f64),
    grid_points: usize,
) -> Result<RootLikeReport> {
    let (lo, hi) = interval;
    if grid_points < 16 {
        return Err(Error::InvalidParameter(format!(
            "grid_points must be >= 16, got {grid_points}"
        )));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "verification interval must be finite and nonempty, got ({lo}, {hi})"
        )));
    }
    let fp = fixed_point(spec)?;
    let h = (hi - lo) / grid_points as f64;
    let mut pts: Vec<f64> = (0..grid_points)
        .map(|i| lo + (i as f64 + 0.5) * h)
        .collect();
    let l_inside = fp.l > lo && fp.l < hi;
    if l_inside {
        pts.push(fp.l);
    }
    let mut report = RootLikeReport {
        interval,
        is_contraction: true,
        fprime_positive: true,
        fsecond_negative: true,
        verdict: false,
    };
    for &t in &pts {
        if !spec.domain().contains(t) {
            return Err(Error::Domain {
                what: spec.to_string(),
                t,
            });
        }
        let d1 = spec.deriv1(t)?;
        let d2 = spec.deriv2(t)?;
        report.is_contraction &= d1.abs() < 1.0;
        report.fprime_positive &= d1 > 0.0;
        report.fsecond_negative &= d2 < 0.0;
    }
    report.verdict =
        report.is_contraction && report.fprime_positive && report.fsecond_negative && l_inside;
    Ok(report)
}

fn root_like_at(spec: &FunctionSpec, t: f64) -> bool {
    if !spec.domain().contains(t) {
        return false;
    }
    match (spec.deriv1(t), spec.deriv2(t)) {
        (Ok(d1), Ok(d2)) => d1 > 0.0 && d1 < 1.0 && d2 < 0.0,
        _ => false,
    }
}

/// Widest interval around the fixed point on which the root-like conditions
/// hold at every scan point. The scan steps by `max(1,|L|)·1e-3` and stops
/// at radius `100·max(1,|L|)`, so `hi` may be that cap rather than a true
/// boundary.
pub fn root_like_neighborhood(spec: &FunctionSpec) -> Result<RootLikeReport> {
    let fp = fixed_point(spec)?;
    let scale = fp.l.abs().max(1.0);
    let step = scale * 1e-3;
    let max_steps = 100_000;
    if !root_like_at(spec, fp.l) {
        return Ok(RootLikeReport {
            interval: (fp.l, fp.l),
            is_contraction: spec.deriv1(fp.l).map(|d| d.abs() < 1.0).unwrap_or(false),
            fprime_positive: spec.deriv1(fp.l).map(|d| d > 0.0).unwrap_or(false),
            fsecond_negative: spec.deriv2(fp.l).map(|d| d < 0.0).unwrap_or(false),
            verdict: false,
        });
    }
    let walk = |dir: f64| {
        let mut last = fp.l;
        for i in 1..=max_steps {
            let t = fp.l + dir * step * i as f64;
            if !root_like_at(spec, t) {
                break;
            }
            last = t;
        }
        last
    };
    let lo = walk(-1.0);
    let hi = walk(1.0);
    if hi - lo <= 2.0 * step {
        return Ok(RootLikeReport {
            interval: (lo, hi),
            is_contraction: true,
            fprime_positive: true,
            fsecond_negative: true,
            verdict: false,
        });
    }
    verify_root_like(spec, (lo, hi), 1024)
}

// ---------------------------------------------------------------------------
// Text form

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FunctionSpec::SqrtAffine { c } => write!(f, "sqrt_affine(c={})", fmt_num(c)),
            FunctionSpec::KthRoot { l, k } => write!(f, "kth_root(l={},k={k})", fmt_num(l)),
            FunctionSpec::Mobius { a, b, d } => {
                write!(
                    f,
                    "mobius(a={},b={},d={})",
                    fmt_num(a),
                    fmt_num(b),
                    fmt_num(d)
                )
            }
            FunctionSpec::LogShift { l } => write!(f, "log_shift(l={})", fmt_num(l)),
            FunctionSpec::RationalDemo => write!(f, "rational_demo()"),
            FunctionSpec::PowerMap { alpha } => write!(f, "power_map(alpha={})", fmt_num(alpha)),
            FunctionSpec::ScaledCubeRoot => write!(f, "scaled_cube_root()"),
            FunctionSpec::ExpConjugate => write!(f, "exp_conjugate()"),
            FunctionSpec::ChebyInverse { k, scaled } => {
                write!(f, "cheb_inverse(k={k},scaled={scaled})")
            }
            FunctionSpec::ContinuedFraction { a, b } => {
                write!(f, "continued_fraction(a={},b={})", fmt_num(a), fmt_num(b))
            }
            FunctionSpec::NonSmoothDemo => write!(f, "non_smooth_demo()"),
            FunctionSpec::QuarticDemo => write!(f, "quartic_demo()"),
        }
    }
}

/// Parses a decimal literal or an integer ratio `p/q`.
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let v = if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad ratio numerator in `{s}`")))?;
        let q: i64 = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad ratio denominator in `{s}`")))?;
        if q == 0 {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        p as f64 / q as f64
    } else {
        s.parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad number `{s}`")))?
    };
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite number `{s}`")));
    }
    Ok(v)
}

struct Args<'a> {
    family: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Args<'a> {
    fn take(&mut self, key: &str) -> Option<&'a str> {
        let i = self.pairs.iter().position(|(k, _)| *k == key)?;
        Some(self.pairs.remove(i).1)
    }

    fn real(&mut self, key: &str) -> Result<f64> {
        let v = self
            .take(key)
            .ok_or_else(|| Error::Parse(format!("{} requires `{key}=`", self.family)))?;
        parse_real(v)
    }

    fn natural(&mut self, key: &str) -> Result<u32> {
        let v = self
            .take(key)
            .ok_or_else(|| Error::Parse(format!("{} requires `{key}=`", self.family)))?;
        v.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("`{key}` must be a natural number, got `{v}`")))
    }

    fn flag(&mut self, key: &str, default: bool) -> Result<bool> {
        match self.take(key) {
            None => Ok(default),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(v) => Err(Error::Parse(format!(
                "`{key}` must be true or false, got `{v}`"
            ))),
        }
    }

    fn finish(self) -> Result<()> {
        match self.pairs.first() {
            None => Ok(()),
            Some((k, _)) => Err(Error::Parse(format!(
                "unknown key `{k}` for {}",
                self.family
            ))),
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s
            .find('(')
            .ok_or_else(|| Error::Parse(format!("expected `family(...)`, got `{s}`")))?;
        if !s.ends_with(')') {
            return Err(Error::Parse(format!("missing `)` in `{s}`")));
        }
        let family = s[..open].trim();
        let body = s[open + 1..s.len() - 1].trim();
        let mut pairs = Vec::new();
        if !body.is_empty() {
            for item in body.split(',') {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value, got `{item}`")))?;
                pairs.push((k.trim(), v.trim()));
            }
        }
        let mut args = Args { family, pairs };
        let spec = match family {
            "sqrt_affine" => FunctionSpec::SqrtAffine { c: args.real("c")? },
            "kth_root" => FunctionSpec::KthRoot {
                l: args.real("l")?,
                k: args.natural("k")?,
            },
            "mobius" => FunctionSpec::Mobius {
                a: args.real("a")?,
                b: args.real("b")?,
                d: args.real("d")?,
            },
            "log_shift" => FunctionSpec::LogShift { l: args.real("l")? },
            "rational_demo" => FunctionSpec::RationalDemo,
            "power_map" => FunctionSpec::PowerMap {
                alpha: args.real("alpha")?,
            },
            "scaled_cube_root" => FunctionSpec::ScaledCubeRoot,
            "exp_conjugate" => FunctionSpec::ExpConjugate,
            "cheb_inverse" => FunctionSpec::ChebyInverse {
                k: args.natural("k")?,
                scaled: args.flag("scaled", false)?,
            },
            "continued_fraction" => FunctionSpec::ContinuedFraction {
                a: args.real("a")?,
                b: args.real("b")?,
            },
            "non_smooth_demo" => FunctionSpec::NonSmoothDemo,
            "quartic_demo" => FunctionSpec::QuarticDemo,
            other => return Err(Error::Parse(format!("unknown function family `{other}`"))),
        };
        args.finish()?;
        spec.validate()?;
        Ok(spec)
    }
}
