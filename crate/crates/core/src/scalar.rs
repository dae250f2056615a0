//! The numeric tower: exact rationals and toleranced floats behind one trait.
//!
//! Every algorithm in this crate is generic over [`Scalar`]. The exact
//! instantiation ([`Rational`]) decides every predicate without error; the
//! float instantiation ([`Float`]) treats values within the global tolerance
//! of each other as equal.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Default comparison tolerance for [`Float`].
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(DEFAULT_TOLERANCE.to_bits());

/// Current float-mode comparison tolerance.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(AtomicOrdering::Relaxed))
}

/// Overrides the float-mode comparison tolerance for the whole process.
pub fn set_tolerance(tau: f64) {
    assert!(tau.is_finite() && tau >= 0.0, "tolerance must be finite and non-negative");
    TOLERANCE_BITS.store(tau.to_bits(), AtomicOrdering::Relaxed);
}

/// Numeric mode of a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" | "rational" => Ok(Mode::Exact),
            "float" | "f64" => Ok(Mode::Float),
            other => Err(format!("unknown numeric mode `{other}` (expected exact|float)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An ordered field element with (possibly toleranced) sign decisions.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// True when comparisons are decided without tolerance.
    const EXACT: bool;
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(r: &Rational) -> Self;
    /// Exact value of `self` as a rational (floats convert their binary value).
    fn to_ratio(&self) -> Rational;
    fn to_f64(&self) -> f64;

    /// Sign of the value; floats within tolerance of zero report `Equal`.
    fn sign(&self) -> Ordering;

    /// True only for an exact zero, regardless of mode.
    fn is_exact_zero(&self) -> bool;

    fn abs(&self) -> Self;

    /// Whether a squared length is small enough that the two endpoints
    /// coincide: exact zero, or `sqrt(self) <= tau` in float mode.
    fn is_negligible_sq(&self) -> bool;

    fn from_f64(v: f64) -> Self {
        Self::from_ratio(&f64_to_ratio(v))
    }

    fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    /// Toleranced comparison.
    fn cmp_s(&self, other: &Self) -> Ordering {
        (self.clone() - other).sign()
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_i64(2)
    }

    fn max_s(self, other: Self) -> Self {
        if other.cmp_s(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    fn min_s(self, other: Self) -> Self {
        if other.cmp_s(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

/// Exact rational of a finite `f64`.
pub fn f64_to_ratio(v: f64) -> Rational {
    BigRational::from_float(v).expect("finite float")
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(r: &Rational) -> Self {
        r.clone()
    }

    fn to_ratio(&self) -> Rational {
        self.clone()
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn sign(&self) -> Ordering {
        if Signed::is_positive(self) {
            Ordering::Greater
        } else if Signed::is_negative(self) {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_negligible_sq(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Nearest `f64` to a rational; robust against huge numerators/denominators.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() && (v != 0.0 || Zero::is_zero(r.numer())) {
            return v;
        }
    }
    // Shift both parts into range before dividing.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 60).max(0) as usize;
    let shift_d = (db - 60).max(0) as usize;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(1.0);
    let exp = shift_n as i64 - shift_d as i64;
    (n / d) * 2f64.powi(exp.clamp(-2000, 2000) as i32)
}

/// Floating-point scalar with toleranced sign decisions.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Float(pub f64);

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

macro_rules! float_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Float {
            type Output = Float;
            #[inline]
            fn $method(self, rhs: Float) -> Float {
                Float(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Float> for Float {
            type Output = Float;
            #[inline]
            fn $method(self, rhs: &'a Float) -> Float {
                Float(self.0 $op rhs.0)
            }
        }
    };
}

float_binop!(Add, add, +);
float_binop!(Sub, sub, -);
float_binop!(Mul, mul, *);
float_binop!(Div, div, /);

impl Neg for Float {
    type Output = Float;
    #[inline]
    fn neg(self) -> Float {
        Float(-self.0)
    }
}

impl Scalar for Float {
    const EXACT: bool = false;
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Float(0.0)
    }

    fn one() -> Self {
        Float(1.0)
    }

    fn from_i64(v: i64) -> Self {
        Float(v as f64)
    }

    fn from_ratio(r: &Rational) -> Self {
        Float(ratio_to_f64(r))
    }

    fn to_ratio(&self) -> Rational {
        f64_to_ratio(self.0)
    }

    fn to_f64(&self) -> f64 {
        self.0
    }

    fn from_f64(v: f64) -> Self {
        Float(v)
    }

    #[inline]
    fn sign(&self) -> Ordering {
        let tau = tolerance();
        if self.0 > tau {
            Ordering::Greater
        } else if self.0 < -tau {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    fn is_exact_zero(&self) -> bool {
        self.0 == 0.0
    }

    fn abs(&self) -> Self {
        Float(self.0.abs())
    }

    fn is_negligible_sq(&self) -> bool {
        let tau = tolerance();
        self.0 <= tau * tau
    }
}

/// Parses `"p/q"`, integers, or decimal literals (`"-1.25e-3"`) exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if Zero::is_zero(&d) {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all.parse::<BigInt>().unwrap_or_default());
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num::pow(ten, scale as usize);
    } else {
        value /= num::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Formats a rational as `"p/q"`, or `"p"` when integral.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rational approximation `round(v * 2^bits) / 2^bits`.
pub fn dyadic_round(v: &Rational, bits: u32) -> Rational {
    let scale = BigRational::from_integer(BigInt::from(1u8) << bits as usize);
    let scaled = (v * &scale).round();
    scaled / scale
}

pub fn ratio_from_i64(v: i64) -> Rational {
    <BigRational as FromPrimitive>::from_i64(v).expect("integer")
}
