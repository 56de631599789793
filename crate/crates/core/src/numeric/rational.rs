use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Ext;
use crate::error::{Error, Result};

/// Exact binomial coefficient `C(n, k)` for `0 <= k <= n <= 1000`.
pub fn rational_binomial(n: u32, k: u32) -> Result<BigRational> {
    if k > n || n > 1000 {
        return Err(Error::InvalidParameter(format!(
            "binomial({n}, {k}) outside 0 <= k <= n <= 1000"
        )));
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Ok(BigRational::from_integer(acc))
}

/// `num / (den · Π factors)` in lowest terms, given `gcd(num, den) = 1` and
/// positive `den` and factors.
///
/// Uses `gcd(N, ab) = gcd(N, a) · gcd(N / gcd(N, a), b)`, so each factor is
/// reduced against the numerator on its own. With small factors every gcd
/// starts from `N mod f`, which is far cheaper than one gcd against the full
/// product.
pub fn ratio_over_factors<'a>(
    num: BigInt,
    den: BigInt,
    factors: impl IntoIterator<Item = &'a BigInt>,
) -> BigRational {
    if num.is_zero() {
        return BigRational::zero();
    }
    let mut num = num;
    let mut den = den;
    for f in factors {
        let h = (&num % f).gcd(f);
        if h.is_one() {
            den *= f;
        } else {
            num /= &h;
            den *= f / &h;
        }
    }
    BigRational::new_raw(num, den)
}

fn ext_from_bigint(n: &BigInt) -> Ext {
    let hi = n.to_f64().unwrap_or(f64::INFINITY);
    if !hi.is_finite() {
        return Ext::from_f64(hi);
    }
    let rem = n - BigInt::from_f64_exact(hi);
    Ext::new(hi, rem.to_f64().unwrap_or(0.0))
}

trait FromF64Exact {
    fn from_f64_exact(x: f64) -> BigInt;
}

impl FromF64Exact for BigInt {
    fn from_f64_exact(x: f64) -> BigInt {
        num_traits::FromPrimitive::from_f64(x).unwrap_or_else(BigInt::zero)
    }
}

/// Nearest double-double to an exact rational.
pub fn ext_from_rational(q: &BigRational) -> Ext {
    let (n, d) = (q.numer(), q.denom());
    // Pre-scale so huge numerators and denominators keep their ratio.
    let bits = n.bits() as i64 - d.bits() as i64;
    if n.bits() > 1000 || d.bits() > 1000 {
        let shift = 200i64;
        let scaled = if bits >= 0 {
            (n << shift as usize) / (d << bits as usize)
        } else {
            (n << (shift - bits) as usize) / d
        };
        return ext_from_bigint(&scaled).ldexp((bits - shift) as i32);
    }
    ext_from_bigint(n) / ext_from_bigint(d)
}

/// Exact square root of a rational when it exists.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// Exact decimal rendering of a rational in scientific notation with
/// `digits` significant digits, rounded half away from zero.
pub fn rational_to_sci_string(q: &BigRational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let neg = q.is_negative();
    let a = q.abs();
    let ten = BigInt::from(10u32);
    // Find e with 10^e <= a < 10^(e+1).
    let est = (a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2;
    let mut e = est.floor() as i64;
    let pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while a < pow(e) {
        e -= 1;
    }
    while a >= pow(e + 1) {
        e += 1;
    }
    let scaled = &a * pow(digits as i64 - 1 - e);
    let mut m = scaled.floor().to_integer();
    let frac = scaled - BigRational::from_integer(m.clone());
    if frac * BigInt::from(2) >= BigRational::one() {
        m += 1;
    }
    let mut s = m.to_str_radix(10);
    if s.len() > digits {
        s.truncate(digits);
        e += 1;
    }
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&s[..1]);
    if digits > 1 {
        out.push('.');
        out.push_str(&s[1..]);
    }
    out.push_str(&format!("e{e}"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    proptest! {
        #[test]
        fn ratio_over_factors_is_reduced(
            n in -100_000i64..100_000,
            d in 1i64..1000,
            fs in proptest::collection::vec(1i64..500, 0..8),
        ) {
            let q = r(n, d);
            let factors: Vec<BigInt> = fs.iter().map(|&f| BigInt::from(f)).collect();
            let prod = factors.iter().fold(BigInt::one(), |a, f| a * f);
            let got = ratio_over_factors(q.numer().clone(), q.denom().clone(), &factors);
            let want = BigRational::new(q.numer().clone(), q.denom() * prod);
            prop_assert_eq!(got.numer(), want.numer());
            prop_assert_eq!(got.denom(), want.denom());
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(rational_binomial(5, 1).unwrap(), r(5, 1));
        assert_eq!(rational_binomial(5, 2).unwrap(), r(10, 1));
        assert_eq!(rational_binomial(6, 3).unwrap(), r(20, 1));
        assert_eq!(rational_binomial(0, 0).unwrap(), r(1, 1));
        assert!(rational_binomial(3, 4).is_err());
        assert!(rational_binomial(1001, 1).is_err());
        // Row sum of Pascal's triangle.
        let row: BigRational = (0..=60).map(|k| rational_binomial(60, k).unwrap()).sum();
        assert_eq!(row, BigRational::from_integer(BigInt::one() << 60usize));
    }

    #[test]
    fn sci_strings() {
        assert_eq!(rational_to_sci_string(&r(97, 31573395000), 6), "3.07221e-9");
        assert_eq!(rational_to_sci_string(&r(1, 3), 5), "3.3333e-1");
        assert_eq!(rational_to_sci_string(&r(-2, 3), 3), "-6.67e-1");
        assert_eq!(rational_to_sci_string(&r(999, 1000), 2), "1.0e0");
        assert_eq!(rational_to_sci_string(&r(3, 1), 1), "3e0");
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(rational_sqrt(&r(25, 1)), Some(r(5, 1)));
        assert_eq!(rational_sqrt(&r(9, 4)), Some(r(3, 2)));
        assert_eq!(rational_sqrt(&r(2, 1)), None);
        assert_eq!(rational_sqrt(&r(-4, 1)), None);
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigInt::one() << 3000usize;
        let q = BigRational::new(big.clone() * BigInt::from(3), big);
        assert_eq!(ext_from_rational(&q).to_f64(), 3.0);
        let third = ext_from_rational(&r(1, 3));
        assert!(((third * 3.0) - 1.0).abs().to_f64() < 1e-31);
    }

    proptest! {
        #[test]
        fn rational_add_sub_exact(p in -10_000i64..10_000, q in 1i64..10_000,
                                  a in -10_000i64..10_000, b in 1i64..10_000) {
            let x = r(p, q);
            let y = r(a, b);
            prop_assert_eq!((x.clone() + y.clone()) - y, x);
        }

        #[test]
        fn ext_f64_round_trip(x in proptest::num::f64::NORMAL) {
            prop_assert_eq!(Ext::from_f64(x).to_f64(), x);
        }
    }
}
