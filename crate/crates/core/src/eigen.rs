//! Eigen-functions `φ` with `f = φ ∘ μ_α ∘ φ⁻¹`, `μ_α(θ) = αθ`.
//!
//! With `L = φ(0)` and `θ₀ = φ⁻¹(t0)`, the candidate-sequence limit is
//! `|θ₀ φ'(0)|` when `φ'(0) ≠ 0` (then `f'(L) = α`), and `|θ₀² φ''(0)/2|` when
//! `φ'(0) = 0` (then `f'(L) = α²`).
//!
//! For `f(t) = √(C + t)` the eigen-function normalized by `φ'(0) = 1` satisfies
//! `φ(θ)² = C + φ(2Lθ)`. Differentiating `n` times at 0 gives
//!
//! ```text
//! φ⁽ⁿ⁾(0) = Σ_{k=1}^{n−1} C(n,k) φ⁽ᵏ⁾(0) φ⁽ⁿ⁻ᵏ⁾(0) / ((2L)ⁿ − 2L)
//! ```
//!
//! which is exact in rationals whenever `L` is rational.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::catalog::{FunctionSpec, IterMap};
use crate::error::{Error, Result};
use crate::numeric::{
    ext_from_rational, ratio_over_factors, rational_binomial, rational_sqrt,
    rational_to_sci_string, BigRational, Ext,
};

/// Closed-form eigen-functions of catalog maps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Phi {
    /// `2 cos θ` for `√(2 + t)`, α = 1/2.
    TwoCos,
    /// `2 cos √(−θ)` (θ ≤ 0), `2 cosh √θ` (θ > 0) for `√(2 + t)`, α = 1/4.
    TwoCosSqrt,
    /// `e^θ` for `t^α`.
    Exp,
    /// `e^θ / 2` for `∛(t/4)`, α = 1/3.
    HalfExp,
    /// `exp(2 cos θ)` for `exp(√(2 + ln t))`, α = 1/2.
    ExpTwoCos,
    /// `cos θ` for `f_K`, α = 1/K.
    Cos { k: u32 },
    /// `cos √(−θ)` for `f_K`, α = 1/K².
    CosSqrt { k: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenPair {
    pub phi: Phi,
    pub alpha: f64,
    pub l: f64,
}

/// Signed `θ²` for `φ = 2cos`-type maps: `arccos(x)²` on `[-1, 1]`,
/// `−arccosh(x)²` above 1 (where `θ` is imaginary).
fn theta_sq_of_cos(x: f64) -> f64 {
    if x <= 1.0 {
        x.max(-1.0).acos().powi(2)
    } else {
        -x.acosh().powi(2)
    }
}

impl EigenPair {
    pub fn sqrt2() -> EigenPair {
        EigenPair {
            phi: Phi::TwoCos,
            alpha: 0.5,
            l: 2.0,
        }
    }

    pub fn sqrt2_second() -> EigenPair {
        EigenPair {
            phi: Phi::TwoCosSqrt,
            alpha: 0.25,
            l: 2.0,
        }
    }

    pub fn power(alpha: f64) -> Result<EigenPair> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        Ok(EigenPair {
            phi: Phi::Exp,
            alpha,
            l: 1.0,
        })
    }

    pub fn scaled_cube_root() -> EigenPair {
        EigenPair {
            phi: Phi::HalfExp,
            alpha: 1.0 / 3.0,
            l: 0.5,
        }
    }

    pub fn exp_conjugate() -> EigenPair {
        EigenPair {
            phi: Phi::ExpTwoCos,
            alpha: 0.5,
            l: 2f64.exp(),
        }
    }

    pub fn cheb(k: u32) -> Result<EigenPair> {
        crate::chebyshev::cheb_poly(k)?;
        Ok(EigenPair {
            phi: Phi::Cos { k },
            alpha: 1.0 / k as f64,
            l: 1.0,
        })
    }

    pub fn cheb_second(k: u32) -> Result<EigenPair> {
        crate::chebyshev::cheb_poly(k)?;
        Ok(EigenPair {
            phi: Phi::CosSqrt { k },
            alpha: 1.0 / (k * k) as f64,
            l: 1.0,
        })
    }

    /// Every built-in pair, with representative parameters.
    pub fn builtins() -> Vec<EigenPair> {
        vec![
            EigenPair::sqrt2(),
            EigenPair::sqrt2_second(),
            EigenPair::power(0.5).unwrap(),
            EigenPair::power(0.3).unwrap(),
            EigenPair::scaled_cube_root(),
            EigenPair::exp_conjugate(),
            EigenPair::cheb(3).unwrap(),
            EigenPair::cheb(5).unwrap(),
            EigenPair::cheb_second(4).unwrap(),
        ]
    }

    /// The catalog map conjugated by this pair.
    pub fn spec(&self) -> FunctionSpec {
        match self.phi {
            Phi::TwoCos | Phi::TwoCosSqrt => FunctionSpec::SqrtAffine { c: 2.0 },
            Phi::Exp => FunctionSpec::PowerMap { alpha: self.alpha },
            Phi::HalfExp => FunctionSpec::ScaledCubeRoot,
            Phi::ExpTwoCos => FunctionSpec::ExpConjugate,
            Phi::Cos { k } | Phi::CosSqrt { k } => FunctionSpec::ChebyInverse { k, scaled: false },
        }
    }

    pub fn phi(&self, theta: f64) -> f64 {
        let cos_sqrt = |th: f64| {
            if th <= 0.0 {
                (-th).sqrt().cos()
            } else {
                th.sqrt().cosh()
            }
        };
        match self.phi {
            Phi::TwoCos => 2.0 * theta.cos(),
            Phi::TwoCosSqrt => 2.0 * cos_sqrt(theta),
            Phi::Exp => theta.exp(),
            Phi::HalfExp => 0.5 * theta.exp(),
            Phi::ExpTwoCos => (2.0 * theta.cos()).exp(),
            Phi::Cos { .. } => theta.cos(),
            Phi::CosSqrt { .. } => cos_sqrt(theta),
        }
    }

    /// `φ'(0)`.
    pub fn d1_at0(&self) -> f64 {
        match self.phi {
            Phi::TwoCos | Phi::ExpTwoCos | Phi::Cos { .. } => 0.0,
            Phi::TwoCosSqrt | Phi::Exp => 1.0,
            Phi::HalfExp | Phi::CosSqrt { .. } => 0.5,
        }
    }

    /// `φ''(0)`.
    pub fn d2_at0(&self) -> f64 {
        match self.phi {
            Phi::TwoCos => -2.0,
            Phi::TwoCosSqrt => 1.0 / 6.0,
            Phi::Exp => 1.0,
            Phi::HalfExp => 0.5,
            Phi::ExpTwoCos => -2.0 * 2f64.exp(),
            Phi::Cos { .. } => -1.0,
            Phi::CosSqrt { .. } => 1.0 / 12.0,
        }
    }

    fn out_of_range(&self, t: f64) -> Error {
        Error::Domain {
            what: format!("inverse eigen-function {:?}", self.phi),
            t,
        }
    }

    /// `φ⁻¹(t)` for first-order pairs; `θ²` (signed, see below) otherwise.
    ///
    /// For the cosine-type pairs `θ` is real only for `t ≤ L`; above `L` the
    /// branch is imaginary and `θ²` is negative.
    fn inverse_or_square(&self, t: f64) -> Result<f64> {
        let v = match self.phi {
            Phi::Exp if t > 0.0 => t.ln(),
            Phi::HalfExp if t > 0.0 => (2.0 * t).ln(),
            Phi::TwoCos if t >= -2.0 => theta_sq_of_cos(t / 2.0),
            Phi::TwoCosSqrt if t >= -2.0 => -theta_sq_of_cos(t / 2.0),
            Phi::ExpTwoCos if t > 0.0 && t.ln() >= -2.0 => theta_sq_of_cos(t.ln() / 2.0),
            Phi::Cos { .. } if t >= -1.0 => theta_sq_of_cos(t),
            Phi::CosSqrt { .. } if t >= -1.0 => -theta_sq_of_cos(t),
            _ => return Err(self.out_of_range(t)),
        };
        Ok(v)
    }

    /// `φ⁻¹(t)` for pairs with `φ'(0) ≠ 0`.
    pub fn phi_inv(&self, t: f64) -> Result<f64> {
        if self.d1_at0() == 0.0 {
            return Err(Error::WrongOrder(format!("{:?} has φ'(0) = 0", self.phi)));
        }
        self.inverse_or_square(t)
    }

    /// The multiplier `f'(L)` implied by the pair.
    pub fn multiplier(&self) -> f64 {
        if self.d1_at0() != 0.0 {
            self.alpha
        } else {
            self.alpha * self.alpha
        }
    }
}

/// `|φ⁻¹(t0) φ'(0)|`.
pub fn limit_first_order(ep: &EigenPair, t0: f64) -> Result<f64> {
    Ok((ep.phi_inv(t0)? * ep.d1_at0()).abs())
}

/// `|θ₀² φ''(0)/2|` with `θ₀ = φ⁻¹(t0)`.
pub fn limit_second_order(ep: &EigenPair, t0: f64) -> Result<f64> {
    if ep.d1_at0() != 0.0 {
        return Err(Error::WrongOrder(format!("{:?} has φ'(0) ≠ 0", ep.phi)));
    }
    Ok((ep.inverse_or_square(t0)? * ep.d2_at0() / 2.0).abs())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Conjugation {
    /// `t ↦ β + f(t − β)`.
    Translate(f64),
    /// `t ↦ β f(t/β)`.
    Scale(f64),
}

/// Closed-form limit for a conjugated first-order pair.
pub fn conjugate_limit(kind: Conjugation, base: &EigenPair, t0: f64) -> Result<f64> {
    match kind {
        Conjugation::Translate(beta) => limit_first_order(base, t0 - beta),
        Conjugation::Scale(beta) => {
            if beta == 0.0 || !beta.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "scale factor must be nonzero, got {beta}"
                )));
            }
            Ok((base.phi_inv(t0 / beta)? * beta * base.d1_at0()).abs())
        }
    }
}

/// A catalog map conjugated by a translation or scaling, iterable like any
/// other map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conjugated {
    pub base: FunctionSpec,
    pub kind: Conjugation,
}

impl Conjugated {
    pub fn new(base: FunctionSpec, kind: Conjugation) -> Result<Conjugated> {
        if let Conjugation::Scale(beta) = kind {
            if beta == 0.0 || !beta.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "scale factor must be nonzero, got {beta}"
                )));
            }
        }
        Ok(Conjugated { base, kind })
    }

    /// Fixed point of the conjugated map from the base fixed point.
    pub fn map_fixed_point(&self, l: Ext) -> Ext {
        match self.kind {
            Conjugation::Translate(b) => l + b,
            Conjugation::Scale(b) => l * b,
        }
    }
}

impl IterMap for Conjugated {
    fn label(&self) -> String {
        match self.kind {
            Conjugation::Translate(b) => format!("{b} + {}(t - {b})", self.base),
            Conjugation::Scale(b) => format!("{b} * {}(t / {b})", self.base),
        }
    }

    fn eval(&self, t: f64) -> Result<f64> {
        match self.kind {
            Conjugation::Translate(b) => Ok(b + self.base.eval(t - b)?),
            Conjugation::Scale(b) => Ok(b * self.base.eval(t / b)?),
        }
    }

    fn eval_ext(&self, t: Ext) -> Result<Ext> {
        match self.kind {
            Conjugation::Translate(b) => Ok(self.base.eval_ext(t - b)? + b),
            Conjugation::Scale(b) => Ok(self.base.eval_ext(t / b)? * b),
        }
    }

    fn deriv1(&self, t: f64) -> Result<f64> {
        match self.kind {
            Conjugation::Translate(b) => self.base.deriv1(t - b),
            Conjugation::Scale(b) => self.base.deriv1(t / b),
        }
    }

    fn deriv2(&self, t: f64) -> Result<f64> {
        match self.kind {
            Conjugation::Translate(b) => self.base.deriv2(t - b),
            Conjugation::Scale(b) => Ok(self.base.deriv2(t / b)? / b),
        }
    }
}

/// Closed-form limit for `√(2 + t)`: `arccos(t0/2)²` on `[-2, 2]`,
/// `arccosh(t0/2)²` above.
pub fn sqrt2_phi_closed(t0: f64) -> Result<f64> {
    if !t0.is_finite() || t0 < -2.0 {
        return Err(Error::Domain {
            what: "sqrt2_phi_closed".into(),
            t: t0,
        });
    }
    Ok(theta_sq_of_cos(t0 / 2.0).abs())
}

const MAX_TERMS: usize = 200;

/// Taylor data of the eigen-function of `√(C + t)` normalized by `φ'(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSeries {
    pub c: f64,
    pub l: Ext,
    pub alpha: f64,
    /// `φ⁽ⁿ⁾(0)` exactly, when `L` is rational.
    pub derivs_exact: Option<Vec<BigRational>>,
    /// `φ⁽ⁿ⁾(0)` to double-double accuracy.
    pub derivs: Vec<Ext>,
    /// Taylor coefficients `φ⁽ⁿ⁾(0)/n!`.
    pub coeffs: Vec<Ext>,
}

/// `x / n!` without a full-size gcd.
fn over_factorial(x: &BigRational, n: usize) -> BigRational {
    let ks: Vec<BigInt> = (2..=n).map(BigInt::from).collect();
    ratio_over_factors(x.numer().clone(), x.denom().clone(), &ks)
}

fn factorial(n: usize) -> BigRational {
    (1..=n).fold(BigRational::one(), |acc, k| {
        acc * BigRational::from_integer(k.into())
    })
}

pub fn build_phi_series(c: f64, n_terms: usize) -> Result<RationalSeries> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "C must be positive, got {c}"
        )));
    }
    if !(2..=MAX_TERMS).contains(&n_terms) {
        return Err(Error::InvalidParameter(format!(
            "n_terms must lie in 2..={MAX_TERMS}, got {n_terms}"
        )));
    }
    let cq = BigRational::from_float(c).expect("finite");
    let four = BigRational::from_integer(4.into());
    let disc = BigRational::one() + four * &cq;
    let two = BigRational::from_integer(2.into());
    let l_exact = rational_sqrt(&disc).map(|r| (BigRational::one() + r) / &two);
    let l_ext = match &l_exact {
        Some(q) => ext_from_rational(q),
        None => ((Ext::from_f64(c) * 4.0 + 1.0).sqrt() + 1.0) / 2.0,
    };
    let alpha = (Ext::ONE / (l_ext * 2.0)).to_f64();

    let (derivs_exact, derivs, coeffs) = if let Some(l) = &l_exact {
        let two_l = &two * l;
        let d = if two_l.is_integer() {
            integer_scaled_derivs(l, two_l.to_integer(), n_terms)
        } else {
            rational_derivs(l, &two_l, n_terms)?
        };
        let coeffs: Vec<BigRational> = d
            .iter()
            .enumerate()
            .map(|(n, x)| over_factorial(x, n))
            .collect();
        let ext: Vec<Ext> = d.iter().map(ext_from_rational).collect();
        let cext: Vec<Ext> = coeffs.iter().map(ext_from_rational).collect();
        (Some(d), ext, cext)
    } else {
        let two_l = l_ext * 2.0;
        let mut d: Vec<Ext> = vec![l_ext, Ext::ONE];
        let mut pow = two_l;
        for n in 2..n_terms {
            pow *= two_l;
            let den = pow - two_l;
            if den.is_zero() {
                return Err(Error::NonIntegerGrowth(n));
            }
            let mut sum = Ext::ZERO;
            for k in 1..n {
                sum += ext_from_rational(&rational_binomial(n as u32, k as u32)?) * d[k] * d[n - k];
            }
            d.push(sum / den);
        }
        let coeffs = d
            .iter()
            .enumerate()
            .map(|(n, x)| *x / ext_from_rational(&factorial(n)))
            .collect();
        (None, d, coeffs)
    };
    Ok(RationalSeries {
        c,
        l: l_ext,
        alpha,
        derivs_exact,
        derivs,
        coeffs,
    })
}

/// Derivative recursion in reduced rationals. Each step reduces fractions with
/// denominators near `Π (sʲ − s)`, so this is only used when `s = 2L` is not an
/// integer.
fn rational_derivs(
    l: &BigRational,
    two_l: &BigRational,
    n_terms: usize,
) -> Result<Vec<BigRational>> {
    let mut d: Vec<BigRational> = vec![l.clone(), BigRational::one()];
    let mut pow = two_l.clone();
    for n in 2..n_terms {
        pow = &pow * two_l;
        let den = &pow - two_l;
        if den.is_zero() {
            return Err(Error::NonIntegerGrowth(n));
        }
        let mut sum = BigRational::zero();
        for k in 1..n {
            sum += rational_binomial(n as u32, k as u32)? * &d[k] * &d[n - k];
        }
        d.push(sum / den);
    }
    Ok(d)
}

/// Derivative recursion for integer `s = 2L ≥ 3`, division-free.
///
/// With `Pₙ = Π_{j=2}^{n} (sʲ − s)` and `Nₙ = φ⁽ⁿ⁾(0)·Pₙ`, the ratio
/// `P_{n−1}/(P_k P_{n−k})` is the Gaussian binomial `[n−2, k−1]_s`, so
/// `Nₙ = Σ C(n,k) [n−2, k−1]_s N_k N_{n−k}` in integers. Only the final
/// `Nₙ/Pₙ` is reduced, factor by factor.
fn integer_scaled_derivs(l: &BigRational, s: BigInt, n_terms: usize) -> Vec<BigRational> {
    let mut d: Vec<BigRational> = vec![l.clone(), BigRational::one()];
    let mut s_pow: Vec<BigInt> = vec![BigInt::one()];
    for j in 1..n_terms.max(2) {
        s_pow.push(&s_pow[j - 1] * &s);
    }
    let mut gauss: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    let mut pascal: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
    let mut num: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    let mut w: Vec<BigInt> = Vec::with_capacity(n_terms);
    for n in 2..n_terms {
        if n >= 3 {
            let prev = &gauss[n - 3];
            let mut row = vec![BigInt::one(); n - 1];
            for r in 1..n - 2 {
                row[r] = &prev[r - 1] + &s_pow[r] * &prev[r];
            }
            gauss.push(row);
        }
        let mut next = vec![BigInt::one(); n + 1];
        for k in 1..n {
            next[k] = &pascal[k - 1] + &pascal[k];
        }
        pascal = next;
        let g = &gauss[n - 2];
        // Terms k and n − k coincide.
        let mut sum = BigInt::zero();
        for k in 1..=(n - 1) / 2 {
            sum += &pascal[k] * &g[k - 1] * &num[k] * &num[n - k];
        }
        sum *= 2;
        if n % 2 == 0 {
            let h = n / 2;
            sum += &pascal[h] * &g[h - 1] * &num[h] * &num[h];
        }
        w.push(&s_pow[n] - &s);
        d.push(ratio_over_factors(sum.clone(), BigInt::one(), &w));
        num.push(sum);
    }
    d
}

impl RationalSeries {
    /// Exact Taylor coefficients `φ⁽ⁿ⁾(0)/n!`, when available.
    pub fn coeffs_exact(&self) -> Option<Vec<BigRational>> {
        self.derivs_exact.as_ref().map(|d| {
            d.iter()
                .enumerate()
                .map(|(n, x)| over_factorial(x, n))
                .collect()
        })
    }

    /// Degree of the full Taylor polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `p_n(θ)` for `n ≤ degree`.
    pub fn eval(&self, n: usize, theta: Ext) -> Ext {
        self.coeffs[..=n.min(self.degree())]
            .iter()
            .rev()
            .fold(Ext::ZERO, |acc, &c| acc * theta + c)
    }

    /// `p_n'(θ)`.
    pub fn eval_deriv(&self, n: usize, theta: Ext) -> Ext {
        let n = n.min(self.degree());
        (1..=n)
            .rev()
            .fold(Ext::ZERO, |acc, k| acc * theta + self.coeffs[k] * k as f64)
    }

    /// CSV rows `n,numerator,denominator,decimal` of the Taylor coefficients.
    /// Numerator and denominator are empty when the series is not exact.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Unsupported(format!("CSV output failed: {e}"));
        w.write_record(["n", "numerator", "denominator", "decimal"])
            .map_err(io)?;
        match self.coeffs_exact() {
            Some(exact) => {
                for (n, q) in exact.iter().enumerate() {
                    w.write_record([
                        n.to_string(),
                        q.numer().to_string(),
                        q.denom().to_string(),
                        rational_to_sci_string(q, 30),
                    ])
                    .map_err(io)?;
                }
            }
            None => {
                for (n, x) in self.coeffs.iter().enumerate() {
                    w.write_record([
                        n.to_string(),
                        String::new(),
                        String::new(),
                        x.to_sci_string(30),
                    ])
                    .map_err(io)?;
                }
            }
        }
        w.flush()
            .map_err(|e| Error::Unsupported(format!("CSV output failed: {e}")))?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesErrorReport {
    pub n: usize,
    pub max_error: f64,
    pub avg_error: f64,
    pub theta_range: (f64, f64),
}

pub const DEFAULT_QUAD_POINTS: usize = 129;
const MAX_GRID: usize = 1000;

/// `E_n(θ) = |√(C + p_n(θ)) − p_n(αθ)|`: maximum over a 1000-point grid and
/// mean over the range by composite Simpson on `quad_points` nodes.
pub fn phi_series_error(
    rs: &RationalSeries,
    n: usize,
    range: (f64, f64),
    quad_points: usize,
) -> Result<SeriesErrorReport> {
    let (a, b) = range;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidParameter(format!("bad range ({a}, {b})")));
    }
    if quad_points < 65 || quad_points.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "quad_points must be odd and at least 65, got {quad_points}"
        )));
    }
    if n > rs.degree() {
        return Err(Error::InvalidParameter(format!(
            "degree {n} exceeds the series degree {}",
            rs.degree()
        )));
    }
    let e = |theta: f64| -> Result<f64> {
        let th = Ext::from_f64(theta);
        let rad = rs.eval(n, th) + rs.c;
        if rad.is_sign_negative() {
            return Err(Error::RadicandNegative(theta));
        }
        Ok((rad.sqrt() - rs.eval(n, th * rs.alpha)).abs().to_f64())
    };
    let mut max_error = 0.0f64;
    for i in 0..MAX_GRID {
        let th = a + (b - a) * i as f64 / (MAX_GRID - 1) as f64;
        max_error = max_error.max(e(th)?);
    }
    let h = (b - a) / (quad_points - 1) as f64;
    let mut sum = 0.0;
    for i in 0..quad_points {
        let w = if i == 0 || i == quad_points - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let v = e(a + h * i as f64)?;
        max_error = max_error.max(v);
        sum += w * v;
    }
    let avg_error = (sum * h / 3.0 / (b - a)).min(max_error);
    Ok(SeriesErrorReport {
        n,
        max_error,
        avg_error,
        theta_range: range,
    })
}

/// `θ` nearest 0 with `p(θ) = target`, using the full series polynomial.
/// Scans `[−2L², 2L²]` outward from 0 for a sign change, then refines by
/// bisection and Newton to `1e-12`.
pub fn phi_root_for_limit(rs: &RationalSeries, target: f64) -> Result<f64> {
    let n = rs.degree();
    let tgt = Ext::from_f64(target);
    let g = |th: f64| (rs.eval(n, Ext::from_f64(th)) - tgt).to_f64();
    let g0 = g(0.0);
    if g0 == 0.0 {
        return Ok(0.0);
    }
    let l = rs.l.to_f64();
    let reach = 2.0 * l * l;
    let steps = 4000;
    let h = reach / steps as f64;
    let mut bracket = None;
    for i in 1..=steps {
        for dir in [-1.0, 1.0] {
            let (x0, x1) = (dir * h * (i - 1) as f64, dir * h * i as f64);
            let (g0, g1) = (g(x0), g(x1));
            if g1 == 0.0 {
                return Ok(x1);
            }
            if g0.signum() != g1.signum() {
                bracket = Some(if x0 < x1 { (x0, x1) } else { (x1, x0) });
                break;
            }
        }
        if bracket.is_some() {
            break;
        }
    }
    let (mut lo, mut hi) = bracket
        .ok_or_else(|| Error::NoBracket(format!("p(θ) = {target} on [−{reach}, {reach}]")))?;
    let glo = g(lo).signum();
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == glo {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    let mut th = Ext::from_f64(0.5 * (lo + hi));
    for _ in 0..8 {
        let r = rs.eval(n, th) - tgt;
        let d = rs.eval_deriv(n, th);
        if d.is_zero() {
            break;
        }
        let dx = r / d;
        th -= dx;
        if dx.abs().to_f64() < 1e-30 {
            break;
        }
    }
    let th = th.to_f64();
    if !(th >= lo - 1e-9 && th <= hi + 1e-9) || g(th).abs() > 1e-12 * target.abs().max(1.0) {
        return Err(Error::NotConverged(format!(
            "root refinement for target {target}"
        )));
    }
    Ok(th)
}

/// `φ⁽ⁿ⁾(0) ≤ 2(2ⁿ⁻¹ − 1)/(6(6ⁿ⁻¹ − 1))`, the explicit bound for `C = 6`.
pub fn c6_derivative_bound(n: usize) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let six = BigRational::from_integer(6.into());
    let p2 = num_traits::pow(two.clone(), n - 1);
    let p6 = num_traits::pow(six.clone(), n - 1);
    two * (p2 - BigRational::one()) / (six * (p6 - BigRational::one()))
}

/// True when every exact derivative from index 1 on is at most 1.
pub fn derivs_at_most_one(rs: &RationalSeries) -> Option<bool> {
    rs.derivs_exact.as_ref().map(|d| {
        d[1..]
            .iter()
            .all(|x| x <= &BigRational::one() && !x.is_negative())
    })
}
