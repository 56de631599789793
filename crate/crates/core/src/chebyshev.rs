//! Chebyshev polynomials `p_K` with `cos(Kθ) = p_K(cos θ)`, their
//! increasing-branch inverses `f_K` on `[-1, ∞)`, and the nested-radical
//! limits `π²/8` and `Kπ²/8`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::catalog::FunctionSpec;
use crate::error::{Error, Result};
use crate::iteration::{candidate_sequence, CandidateSequence};
use crate::numeric::{Ext, Precision};

const MAX_K: u32 = 64;

/// `p_K` with exact integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebPoly {
    pub k: u32,
    pub coeffs: Vec<BigInt>,
}

fn check_k(k: u32) -> Result<()> {
    if (2..=MAX_K).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "K must lie in 2..={MAX_K}, got {k}"
        )))
    }
}

pub fn cheb_poly(k: u32) -> Result<ChebPoly> {
    check_k(k)?;
    let mut prev: Vec<BigInt> = vec![BigInt::one()];
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for _ in 1..k {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * 2;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(ChebPoly { k, coeffs: cur })
}

impl ChebPoly {
    /// Horner evaluation in double-double; the monomial form cancels badly
    /// in binary64 for large K.
    pub fn eval(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(Ext::ZERO, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
            .to_f64()
    }
}

impl std::fmt::Display for ChebPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one() && i > 0;
            if !unit {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

/// `(T_K(x), T_K'(x), T_K''(x))` by the three-term recurrence.
pub fn cheb_eval_with_derivs(k: u32, x: f64) -> (f64, f64, f64) {
    let (mut t0, mut t1) = (1.0, x);
    let (mut d0, mut d1) = (0.0, 1.0);
    let (mut s0, mut s1) = (0.0, 0.0);
    if k == 0 {
        return (1.0, 0.0, 0.0);
    }
    for _ in 1..k {
        let t2 = 2.0 * x * t1 - t0;
        let d2 = 2.0 * t1 + 2.0 * x * d1 - d0;
        let s2 = 4.0 * d1 + 2.0 * x * s1 - s0;
        (t0, t1, d0, d1, s0, s1) = (t1, t2, d1, d2, s1, s2);
    }
    (t1, d1, s1)
}

fn domain_lo(k: u32, scaled: bool) -> f64 {
    if scaled {
        -(k as f64)
    } else {
        -1.0
    }
}

fn out_of_domain(k: u32, t: f64, scaled: bool) -> Error {
    Error::Domain {
        what: format!("f_{k}{}", if scaled { " (scaled)" } else { "" }),
        t,
    }
}

/// Increasing-branch inverse of `p_K`: the arccos form on `[-1, 1]`, the
/// arccosh form above 1. The scaled variant is `K f_K(t/K)`.
pub fn f_k(k: u32, t: f64, scaled: bool) -> Result<f64> {
    check_k(k)?;
    if !t.is_finite() || t < domain_lo(k, scaled) {
        return Err(out_of_domain(k, t, scaled));
    }
    let kf = k as f64;
    let x = if scaled { t / kf } else { t };
    let y = if x <= 1.0 {
        (x.max(-1.0).acos() / kf).cos()
    } else {
        (x.acosh() / kf).cosh()
    };
    Ok(if scaled { kf * y } else { y })
}

pub fn f_k_ext(k: u32, t: Ext, scaled: bool) -> Result<Ext> {
    check_k(k)?;
    if !t.is_finite() || t.to_f64() < domain_lo(k, scaled) {
        return Err(out_of_domain(k, t.to_f64(), scaled));
    }
    let kf = k as f64;
    let x = if scaled { t / kf } else { t };
    let y = if x <= Ext::ONE {
        (x.acos() / kf).cos()
    } else {
        (x.acosh() / kf).cosh()
    };
    Ok(if scaled { y * kf } else { y })
}

/// `(f', f'')` from the inverse-function rule at `x = f_K(t)`:
/// `f' = 1/p'(x)`, `f'' = -p''(x)/p'(x)³`.
pub fn f_k_derivs(k: u32, t: f64, scaled: bool) -> Result<(f64, f64)> {
    let kf = k as f64;
    let y = f_k(k, t, scaled)?;
    let x = if scaled { y / kf } else { y };
    let (_, p1, p2) = cheb_eval_with_derivs(k, x);
    if p1 <= 0.0 {
        return Err(out_of_domain(k, t, scaled));
    }
    let d1 = 1.0 / p1;
    let d2 = -p2 / (p1 * p1 * p1);
    Ok(if scaled { (d1, d2 / kf) } else { (d1, d2) })
}

/// The unique `z ∈ (-1, 1)` with `f_K'(z) = 1`, by bisection.
pub fn unit_slope_point(k: u32) -> Result<f64> {
    check_k(k)?;
    let slope = |t: f64| f_k_derivs(k, t, false).map(|d| d.0 - 1.0);
    let (mut lo, mut hi) = (-1.0 + 1e-12, 1.0);
    if !(slope(lo)? > 0.0 && slope(hi)? < 0.0) {
        return Err(Error::NoBracket(format!("f_{k}' = 1 on (-1, 1)")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if slope(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Closed-form candidate limit `arccos(t0)²/2` for the unscaled map.
pub fn cheb_candidate_limit(k: u32, t0: f64) -> Result<f64> {
    check_k(k)?;
    if !(-1.0..1.0).contains(&t0) {
        return Err(out_of_domain(k, t0, false));
    }
    Ok(t0.acos().powi(2) / 2.0)
}

/// Closed-form candidate limit `K arccos(t0/K)²/2` for the scaled map.
///
/// For K=3, t0=0 this is `lim 9ⁿ(3 − f⁽ⁿ⁾(0)) = 3π²/8`. A nested-radical
/// chain with r radicals equals `f⁽ʳ⁻¹⁾` applied to the innermost radical, so
/// radical-count indexing is this sequence shifted by one step; the shift
/// rescales the limit by 9 and no index convention is assumed here.
pub fn cheb_candidate_limit_scaled(k: u32, t0: f64) -> Result<f64> {
    check_k(k)?;
    let kf = k as f64;
    if !(-kf..kf).contains(&t0) {
        return Err(out_of_domain(k, t0, true));
    }
    Ok(kf * (t0 / kf).acos().powi(2) / 2.0)
}

/// `c_n = K^{2n} |L − f_K^{(n)}(t0)|` with `L = 1` (or `K` when scaled), in
/// extended precision. The table ends where cancellation near `L` would
/// dominate.
pub fn cheb_nested_table(k: u32, t0: f64, n: usize, scaled: bool) -> Result<CandidateSequence> {
    check_k(k)?;
    let spec = FunctionSpec::ChebyInverse { k, scaled };
    let kf = k as f64;
    let l = if scaled { Ext::from_f64(kf) } else { Ext::ONE };
    candidate_sequence(
        &spec,
        l,
        1.0 / (kf * kf),
        Ext::from_f64(t0),
        n,
        Precision::Extended,
    )
}
