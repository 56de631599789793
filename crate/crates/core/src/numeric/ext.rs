//! Double-double extended reals.
//!
//! An [`Ext`] is the unevaluated sum `hi + lo` of two binary64 numbers with
//! `|lo| <= ulp(hi)/2`, giving roughly 106 bits (about 32 decimal digits) of
//! significand. The elementary functions here are accurate to a few units in
//! the last place of that format, which is what the candidate-sequence code
//! needs once `|L - t_n|` drops below binary64 resolution.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Unit roundoff of the double-double format, 2^-104.
///
/// The true format precision is closer to 2^-106; the elementary functions
/// lose a couple of bits, so noise estimates use this more honest value.
pub const EXT_EPS: f64 = 4.930380657631324e-32;

/// Unit roundoff of binary64, 2^-53.
pub const F64_EPS: f64 = 1.1102230246251565e-16;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Ext {
    hi: f64,
    lo: f64,
}

impl Ext {
    pub const ZERO: Ext = Ext { hi: 0.0, lo: 0.0 };
    pub const ONE: Ext = Ext { hi: 1.0, lo: 0.0 };
    pub const TWO: Ext = Ext { hi: 2.0, lo: 0.0 };
    pub const PI: Ext = Ext {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };
    pub const FRAC_PI_2: Ext = Ext {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123233995736766e-17,
    };
    pub const LN_2: Ext = Ext {
        hi: std::f64::consts::LN_2,
        lo: 2.3190468138462996e-17,
    };
    pub const E: Ext = Ext {
        hi: std::f64::consts::E,
        lo: 1.4456468917292502e-16,
    };

    /// Builds a value from an unnormalized pair.
    pub fn new(hi: f64, lo: f64) -> Ext {
        let (hi, lo) = two_sum(hi, lo);
        Ext { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Ext {
        Ext { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0
    }

    pub fn abs(self) -> Ext {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Multiplies by an exact power of two.
    pub fn ldexp(self, k: i32) -> Ext {
        let s = 2f64.powi(k);
        Ext {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn sqr(self) -> Ext {
        let (p1, mut p2) = two_prod(self.hi, self.hi);
        p2 += 2.0 * self.hi * self.lo;
        p2 += self.lo * self.lo;
        let (hi, lo) = quick_two_sum(p1, p2);
        Ext { hi, lo }
    }

    pub fn recip(self) -> Ext {
        Ext::ONE / self
    }

    pub fn floor(self) -> Ext {
        let hi = self.hi.floor();
        if hi == self.hi {
            let (hi, lo) = quick_two_sum(hi, self.lo.floor());
            Ext { hi, lo }
        } else {
            Ext { hi, lo: 0.0 }
        }
    }

    pub fn round(self) -> Ext {
        let hi = self.hi.round();
        if hi == self.hi {
            let (hi, lo) = quick_two_sum(hi, self.lo.round());
            Ext { hi, lo }
        } else if (hi - self.hi).abs() == 0.5 {
            // Exactly half-way in hi; lo decides.
            let lo = self.lo;
            if hi > self.hi && lo < 0.0 {
                Ext::from_f64(hi - 1.0)
            } else if hi < self.hi && lo > 0.0 {
                Ext::from_f64(hi + 1.0)
            } else {
                Ext::from_f64(hi)
            }
        } else {
            Ext::from_f64(hi)
        }
    }

    pub fn powi(self, n: i32) -> Ext {
        if n == 0 {
            return Ext::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Ext::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    /// Square root; NaN for negative input.
    pub fn sqrt(self) -> Ext {
        if self.hi == 0.0 {
            return Ext::ZERO;
        }
        if self.hi < 0.0 {
            return Ext::from_f64(f64::NAN);
        }
        let y = Ext::from_f64(self.hi.sqrt());
        // One Newton step doubles the 53 correct bits.
        y + (self - y.sqr()) / (y * 2.0)
    }

    /// Real `k`-th root. Odd roots of negative numbers are negative; even
    /// roots of negative numbers are NaN.
    pub fn nth_root(self, k: u32) -> Ext {
        assert!(k >= 1, "root index must be positive");
        if k == 1 || self.hi == 0.0 {
            return self;
        }
        if k == 2 {
            return self.sqrt();
        }
        if self.hi < 0.0 {
            if k.is_multiple_of(2) {
                return Ext::from_f64(f64::NAN);
            }
            return -(-self).nth_root(k);
        }
        let kf = k as f64;
        let mut y = Ext::from_f64(self.hi.powf(1.0 / kf));
        for _ in 0..2 {
            let yk1 = y.powi(k as i32 - 1);
            y -= (yk1 * y - self) / (yk1 * kf);
        }
        y
    }

    pub fn exp(self) -> Ext {
        if self.hi > 709.78 {
            return Ext::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Ext::ZERO;
        }
        if self.hi == 0.0 {
            return Ext::ONE;
        }
        let k = (self.hi / Ext::LN_2.hi).round();
        let r = (self - Ext::LN_2 * k).ldexp(-10);
        // expm1(r) by Taylor; |r| < 3.4e-4 so ten terms reach 1e-40.
        let mut term = r;
        let mut s = r;
        for i in 2..=12 {
            term = term * r / (i as f64);
            s += term;
            if term.hi.abs() < 1e-36 * s.hi.abs() {
                break;
            }
        }
        for _ in 0..10 {
            // e^{2x} - 1 = (e^x - 1)(e^x - 1 + 2)
            s = s * (s + 2.0);
        }
        (s + 1.0).ldexp(k as i32)
    }

    /// Natural logarithm; NaN for non-positive input.
    pub fn ln(self) -> Ext {
        if self.hi <= 0.0 {
            return Ext::from_f64(f64::NAN);
        }
        if self == Ext::ONE {
            return Ext::ZERO;
        }
        let mut y = Ext::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - 1.0;
        }
        y
    }

    pub fn powf(self, p: Ext) -> Ext {
        (p * self.ln()).exp()
    }

    /// Taylor kernels on |r| <= pi/4.
    fn sin_cos_taylor(r: Ext) -> (Ext, Ext) {
        let r2 = r.sqr();
        let mut s = r;
        let mut term = r;
        let mut i = 1.0;
        loop {
            term = -term * r2 / ((i + 1.0) * (i + 2.0));
            s += term;
            i += 2.0;
            if term.hi.abs() < 1e-35 || i > 60.0 {
                break;
            }
        }
        let mut c = Ext::ONE;
        let mut term = Ext::ONE;
        let mut i = 0.0;
        loop {
            term = -term * r2 / ((i + 1.0) * (i + 2.0));
            c += term;
            i += 2.0;
            if term.hi.abs() < 1e-35 || i > 60.0 {
                break;
            }
        }
        (s, c)
    }

    /// Simultaneous sine and cosine. Argument reduction uses a
    /// double-double pi/2, adequate for |x| up to about 1e6.
    pub fn sin_cos(self) -> (Ext, Ext) {
        if self.hi == 0.0 {
            return (Ext::ZERO, Ext::ONE);
        }
        let k = (self.hi / Ext::FRAC_PI_2.hi).round();
        let r = self - Ext::FRAC_PI_2 * k;
        let (s, c) = Ext::sin_cos_taylor(r);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Ext {
        self.sin_cos().0
    }

    pub fn cos(self) -> Ext {
        self.sin_cos().1
    }

    /// Two-argument arctangent with result in (-pi, pi].
    pub fn atan2(y: Ext, x: Ext) -> Ext {
        if x.hi == 0.0 && y.hi == 0.0 {
            return Ext::ZERO;
        }
        if x.hi == 0.0 {
            return if y.hi > 0.0 {
                Ext::FRAC_PI_2
            } else {
                -Ext::FRAC_PI_2
            };
        }
        if y.hi == 0.0 {
            return if x.hi > 0.0 { Ext::ZERO } else { Ext::PI };
        }
        let r = (x.sqr() + y.sqr()).sqrt();
        let xx = x / r;
        let yy = y / r;
        let mut z = Ext::from_f64(y.to_f64().atan2(x.to_f64()));
        for _ in 0..2 {
            let (sz, cz) = z.sin_cos();
            if xx.hi.abs() > yy.hi.abs() {
                z += (yy - sz) / cz;
            } else {
                z -= (xx - cz) / sz;
            }
        }
        z
    }

    /// Arc cosine on [-1, 1]; NaN outside.
    pub fn acos(self) -> Ext {
        if self.hi.abs() > 1.0 || (self.hi.abs() == 1.0 && self.lo * self.hi > 0.0) {
            return Ext::from_f64(f64::NAN);
        }
        let s = ((Ext::ONE - self) * (Ext::ONE + self)).sqrt();
        Ext::atan2(s, self)
    }

    pub fn cosh(self) -> Ext {
        let e = self.exp();
        (e + e.recip()) * 0.5
    }

    /// Inverse hyperbolic cosine on [1, inf); NaN below 1.
    pub fn acosh(self) -> Ext {
        if self < Ext::ONE {
            return Ext::from_f64(f64::NAN);
        }
        let s = ((self - 1.0) * (self + 1.0)).sqrt();
        (self + s).ln()
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_sci_string(self, digits: usize) -> String {
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        if self.hi == 0.0 {
            return "0".to_string();
        }
        let digits = digits.clamp(1, 34);
        let neg = self.hi < 0.0;
        let x = self.abs();
        let mut e = x.hi.log10().floor() as i32;
        let mut s = x / Ext::from_f64(10.0).powi(e);
        if s.hi >= 10.0 {
            s /= 10.0;
            e += 1;
        } else if s.hi < 1.0 {
            s *= 10.0;
            e -= 1;
        }
        let mut ds: Vec<u8> = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let d = s.floor().hi.clamp(0.0, 9.0);
            ds.push(d as u8);
            s = (s - d) * 10.0;
        }
        // Round on the extra digit.
        let round_up = ds.pop().map(|d| d >= 5).unwrap_or(false);
        if round_up {
            let mut i = ds.len();
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.pop();
                    e += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push((b'0' + ds[0]) as char);
        if ds.len() > 1 {
            out.push('.');
            for d in &ds[1..] {
                out.push((b'0' + d) as char);
            }
        }
        out.push_str(&format!("e{}", e));
        out
    }
}

impl From<f64> for Ext {
    fn from(x: f64) -> Ext {
        Ext::from_f64(x)
    }
}

impl From<Ext> for f64 {
    fn from(x: Ext) -> f64 {
        x.to_f64()
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Ext) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(32);
        f.write_str(&self.to_sci_string(digits))
    }
}

impl Neg for Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        Ext {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, b: Ext) -> Ext {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Ext { hi, lo }
    }
}

impl Add<f64> for Ext {
    type Output = Ext;
    fn add(self, b: f64) -> Ext {
        let (s1, s2) = two_sum(self.hi, b);
        let s2 = s2 + self.lo;
        let (hi, lo) = quick_two_sum(s1, s2);
        Ext { hi, lo }
    }
}

impl Sub for Ext {
    type Output = Ext;
    fn sub(self, b: Ext) -> Ext {
        self + (-b)
    }
}

impl Sub<f64> for Ext {
    type Output = Ext;
    fn sub(self, b: f64) -> Ext {
        self + (-b)
    }
}

impl Mul for Ext {
    type Output = Ext;
    fn mul(self, b: Ext) -> Ext {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        p2 += self.hi * b.lo + self.lo * b.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Ext { hi, lo }
    }
}

impl Mul<f64> for Ext {
    type Output = Ext;
    fn mul(self, b: f64) -> Ext {
        let (p1, mut p2) = two_prod(self.hi, b);
        p2 += self.lo * b;
        let (hi, lo) = quick_two_sum(p1, p2);
        Ext { hi, lo }
    }
}

impl Div for Ext {
    type Output = Ext;
    fn div(self, b: Ext) -> Ext {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Ext { hi: q1, lo: q2 } + q3
    }
}

impl Div<f64> for Ext {
    type Output = Ext;
    fn div(self, b: f64) -> Ext {
        self / Ext::from_f64(b)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for Ext {
            fn $m(&mut self, b: Ext) { *self = *self $op b; }
        }
        impl $tr<f64> for Ext {
            fn $m(&mut self, b: f64) { *self = *self $op b; }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);
