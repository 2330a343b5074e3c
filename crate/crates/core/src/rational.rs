//! Exact rational and Gaussian-rational scalars.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational with 128-bit numerator and denominator.
pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn q_to_f64(x: &Q) -> f64 {
    // i128 -> f64 is lossy for huge values but the ratio stays accurate.
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Parses a decimal literal (`12`, `0.25`, `1e-3`, `2.5E2`) into an exact rational.
pub fn parse_decimal(text: &str) -> Option<Q> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let (neg, body) = match text.as_bytes()[0] {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], body[pos + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let scale = exponent - frac_part.len() as i32;
    let ten = 10i128;
    let value = if scale >= 0 {
        Q::from_integer(numer.checked_mul(ten.checked_pow(scale as u32)?)?)
    } else {
        Q::new(numer, ten.checked_pow((-scale) as u32)?)
    };
    Some(if neg { -value } else { value })
}

/// Best rational approximation of a finite float with bounded denominator.
pub fn q_from_f64(x: f64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    // Shortest round-trip decimal is exact for user-facing inputs like 0.1.
    parse_decimal(&format!("{x:e}"))
}

fn fmt_q(x: &Q, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x.is_integer() {
        write!(f, "{}", x.numer())
    } else {
        write!(f, "{}/{}", x.numer(), x.denom())
    }
}

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussQ {
    pub re: Q,
    pub im: Q,
}

impl GaussQ {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn real(re: Q) -> Self {
        Self { re, im: Q::zero() }
    }

    pub fn imag(im: Q) -> Self {
        Self { re: Q::zero(), im }
    }

    pub fn i() -> Self {
        Self::imag(Q::one())
    }

    pub fn from_int(n: i128) -> Self {
        Self::real(qi(n))
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero()
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self { re: self.re * k, im: self.im * k }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }

    pub fn inv(&self) -> Option<Self> {
        let norm = self.re * self.re + self.im * self.im;
        if norm.is_zero() {
            return None;
        }
        Some(Self { re: self.re / norm, im: -self.im / norm })
    }

    /// `(-i/2)^k`, the factor produced by moving `k` letters `P` past `X`.
    pub fn minus_half_i_pow(k: u32) -> Self {
        let mag = Q::new(1, 1i128 << k);
        match k % 4 {
            0 => Self::real(mag),
            1 => Self::imag(-mag),
            2 => Self::real(-mag),
            _ => Self::imag(mag),
        }
    }
}

impl Zero for GaussQ {
    fn zero() -> Self {
        Self { re: Q::zero(), im: Q::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussQ {
    fn one() -> Self {
        Self::real(Q::one())
    }
}

impl Add for GaussQ {
    type Output = GaussQ;
    fn add(self, o: GaussQ) -> GaussQ {
        GaussQ { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<'a> Add<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn add(self, o: &GaussQ) -> GaussQ {
        GaussQ { re: self.re + o.re, im: self.im + o.im }
    }
}

impl AddAssign<&GaussQ> for GaussQ {
    fn add_assign(&mut self, o: &GaussQ) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl SubAssign<&GaussQ> for GaussQ {
    fn sub_assign(&mut self, o: &GaussQ) {
        self.re -= o.re;
        self.im -= o.im;
    }
}

impl Sub for GaussQ {
    type Output = GaussQ;
    fn sub(self, o: GaussQ) -> GaussQ {
        GaussQ { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<'a> Sub<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn sub(self, o: &GaussQ) -> GaussQ {
        GaussQ { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussQ {
    type Output = GaussQ;
    fn mul(self, o: GaussQ) -> GaussQ {
        &self * &o
    }
}

impl<'a> Mul<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn mul(self, o: &GaussQ) -> GaussQ {
        GaussQ { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl Neg for GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for GaussQ {
    /// Real: `3/2`; imaginary: `3/2 i` or `i`; mixed: `(3/2 + 1/4 i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_q(&self.re, f),
            (true, false) if self.im.is_one() => write!(f, "i"),
            (true, false) if (-self.im).is_one() => write!(f, "-i"),
            (true, false) => {
                fmt_q(&self.im, f)?;
                write!(f, " i")
            }
            (false, false) => {
                write!(f, "(")?;
                fmt_q(&self.re, f)?;
                if self.im.is_negative() {
                    write!(f, " - ")?;
                    fmt_q(&self.im.abs(), f)?;
                } else {
                    write!(f, " + ")?;
                    fmt_q(&self.im, f)?;
                }
                write!(f, " i)")
            }
        }
    }
}

/// Binomial coefficient as i128.
pub fn binomial(n: u32, k: u32) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as i128 / (j + 1) as i128;
    }
    acc
}

pub fn factorial(n: u32) -> i128 {
    (1..=n as i128).product::<i128>().max(1)
}

pub fn lcm(a: i128, b: i128) -> i128 {
    a.lcm(&b)
}
