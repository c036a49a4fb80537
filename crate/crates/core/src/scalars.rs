//! Coefficient fields.
//!
//! Three coefficient families are supported: exact rationals, the exact
//! quadratic field Q(sqrt5) and IEEE doubles. Generic code is written against
//! the [`Field`] trait; the dynamically typed [`Scalar`] is used at the
//! serialization boundary where the family is only known at runtime.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Decimal value of sqrt(5) used by the float embedding.
pub const SQRT5_F64: f64 = 2.236_067_977_499_79;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot mix scalar families {0} and {1}")]
    VariantMismatch(FieldKind, FieldKind),
    #[error("cannot parse {text:?} as a {kind} scalar")]
    Parse { kind: FieldKind, text: String },
    #[error("{0} is not an exact scalar")]
    Inexact(FieldKind),
}

/// The three coefficient families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    QuadSqrt5,
    Float,
}

impl FieldKind {
    /// Label used in the JSON formats.
    pub fn label(self) -> &'static str {
        match self {
            FieldKind::Rational => "Q",
            FieldKind::QuadSqrt5 => "Q(sqrt5)",
            FieldKind::Float => "float",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "Q" => Some(FieldKind::Rational),
            "Q(sqrt5)" => Some(FieldKind::QuadSqrt5),
            "float" => Some(FieldKind::Float),
            _ => None,
        }
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, FieldKind::Float)
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A coefficient field usable by the polynomial engine.
///
/// Arithmetic is exact for every implementor except `f64`. `key` gives a
/// hashable identity used when deduplicating group elements and orbit points;
/// for floats it is a rounded grid position.
pub trait Field:
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
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    type Key: Hash + Eq + Clone + Send + Sync + fmt::Debug;

    const KIND: FieldKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn from_rational(v: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// Sign test under the real embedding with sqrt5 > 0.
    fn is_positive(&self) -> bool;
    fn to_f64(&self) -> f64;
    fn key(&self) -> Self::Key;
    /// sqrt(5) when the field contains (or approximates) it.
    fn sqrt5() -> Option<Self>;
    /// Only the float family accepts arbitrary reals.
    fn from_f64(v: f64) -> Option<Self>;
    fn to_scalar(&self) -> Scalar;
    fn from_scalar(s: &Scalar) -> Result<Self, ScalarError>;

    /// Zero test used for pivoting; floats treat tiny values as zero.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_exact() -> bool {
        Self::KIND.is_exact()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) * Self::from_i64(den).inv().expect("zero denominator")
    }

    fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        let inv = other.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(self.clone() * inv)
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

// ---------------------------------------------------------------------------
// Rationals

/// Arbitrary precision rational number in lowest terms with positive
/// denominator (guaranteed by `num_rational`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScalarError::Parse {
            kind: FieldKind::Rational,
            text: s.to_string(),
        };
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

macro_rules! forward_binops {
    ($ty:ty) => {
        impl Add for $ty {
            type Output = $ty;
            fn add(mut self, rhs: $ty) -> $ty {
                self += &rhs;
                self
            }
        }
        impl<'a> Add<&'a $ty> for $ty {
            type Output = $ty;
            fn add(mut self, rhs: &'a $ty) -> $ty {
                self += rhs;
                self
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(mut self, rhs: $ty) -> $ty {
                self -= &rhs;
                self
            }
        }
        impl<'a> Sub<&'a $ty> for $ty {
            type Output = $ty;
            fn sub(mut self, rhs: &'a $ty) -> $ty {
                self -= rhs;
                self
            }
        }
        impl Mul for $ty {
            type Output = $ty;
            fn mul(mut self, rhs: $ty) -> $ty {
                self *= &rhs;
                self
            }
        }
        impl<'a> Mul<&'a $ty> for $ty {
            type Output = $ty;
            fn mul(mut self, rhs: &'a $ty) -> $ty {
                self *= rhs;
                self
            }
        }
    };
}

impl<'a> AddAssign<&'a Rational> for Rational {
    fn add_assign(&mut self, rhs: &'a Rational) {
        self.0 += &rhs.0;
    }
}
impl<'a> SubAssign<&'a Rational> for Rational {
    fn sub_assign(&mut self, rhs: &'a Rational) {
        self.0 -= &rhs.0;
    }
}
impl<'a> MulAssign<&'a Rational> for Rational {
    fn mul_assign(&mut self, rhs: &'a Rational) {
        self.0 *= &rhs.0;
    }
}
impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}
forward_binops!(Rational);

impl Field for Rational {
    type Key = Rational;

    const KIND: FieldKind = FieldKind::Rational;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
    fn from_bigint(v: &BigInt) -> Self {
        Rational(BigRational::from_integer(v.clone()))
    }
    fn from_rational(v: &BigRational) -> Self {
        Rational(v.clone())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn is_positive(&self) -> bool {
        self.0.is_positive()
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.0)
    }
    fn key(&self) -> Self::Key {
        self.clone()
    }
    fn sqrt5() -> Option<Self> {
        None
    }
    fn from_f64(_: f64) -> Option<Self> {
        None
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Rational(self.clone())
    }
    fn from_scalar(s: &Scalar) -> Result<Self, ScalarError> {
        match s {
            Scalar::Rational(r) => Ok(r.clone()),
            Scalar::QuadExt(q) if q.b.is_zero() => Ok(Rational(q.a.clone())),
            other => Err(ScalarError::VariantMismatch(other.kind(), FieldKind::Rational)),
        }
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        return v;
    }
    // Very large numerators/denominators: scale into range first.
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

// ---------------------------------------------------------------------------
// Q(sqrt5)

/// `a + b*sqrt5` with rational components.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSqrt5 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt5 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt5 { a: a.0, b: b.0 }
    }

    /// The golden ratio (1 + sqrt5)/2.
    pub fn golden() -> Self {
        QSqrt5 {
            a: BigRational::new(1.into(), 2.into()),
            b: BigRational::new(1.into(), 2.into()),
        }
    }

    /// Norm down to Q: a^2 - 5 b^2.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(5.into()) * &self.b * &self.b
    }

    pub fn conjugate(&self) -> Self {
        QSqrt5 {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

impl fmt::Debug for QSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{}{}{}*sqrt5",
            Rational(self.a.clone()),
            sign,
            Rational(self.b.abs())
        )
    }
}

impl FromStr for QSqrt5 {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScalarError::Parse {
            kind: FieldKind::QuadSqrt5,
            text: s.to_string(),
        };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(rest) = t.strip_suffix("*sqrt5") else {
            let a: Rational = t.parse().map_err(|_| err())?;
            return Ok(QSqrt5 {
                a: a.0,
                b: BigRational::zero(),
            });
        };
        // split at the last sign that is not the leading one
        let split = rest
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (a_txt, b_txt) = match split {
            Some(i) => (&rest[..i], &rest[i..]),
            None => ("0", rest),
        };
        let a: Rational = a_txt.parse().map_err(|_| err())?;
        let b: Rational = b_txt.trim_start_matches('+').parse().map_err(|_| err())?;
        Ok(QSqrt5 { a: a.0, b: b.0 })
    }
}

impl<'a> AddAssign<&'a QSqrt5> for QSqrt5 {
    fn add_assign(&mut self, rhs: &'a QSqrt5) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}
impl<'a> SubAssign<&'a QSqrt5> for QSqrt5 {
    fn sub_assign(&mut self, rhs: &'a QSqrt5) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}
impl<'a> MulAssign<&'a QSqrt5> for QSqrt5 {
    fn mul_assign(&mut self, rhs: &'a QSqrt5) {
        if rhs.b.is_zero() {
            self.a *= &rhs.a;
            self.b *= &rhs.a;
            return;
        }
        let five = BigRational::from_integer(5.into());
        let a = &self.a * &rhs.a + five * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        self.a = a;
        self.b = b;
    }
}
impl Neg for QSqrt5 {
    type Output = QSqrt5;
    fn neg(self) -> QSqrt5 {
        QSqrt5 {
            a: -self.a,
            b: -self.b,
        }
    }
}
forward_binops!(QSqrt5);

impl Field for QSqrt5 {
    type Key = QSqrt5;

    const KIND: FieldKind = FieldKind::QuadSqrt5;

    fn zero() -> Self {
        QSqrt5 {
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }
    fn one() -> Self {
        QSqrt5 {
            a: BigRational::one(),
            b: BigRational::zero(),
        }
    }
    fn from_i64(v: i64) -> Self {
        QSqrt5 {
            a: BigRational::from_integer(v.into()),
            b: BigRational::zero(),
        }
    }
    fn from_bigint(v: &BigInt) -> Self {
        QSqrt5 {
            a: BigRational::from_integer(v.clone()),
            b: BigRational::zero(),
        }
    }
    fn from_rational(v: &BigRational) -> Self {
        QSqrt5 {
            a: v.clone(),
            b: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // sqrt5 is irrational, so the norm of a nonzero element is nonzero.
        let n = self.norm();
        Some(QSqrt5 {
            a: &self.a / &n,
            b: -(&self.b / &n),
        })
    }
    fn is_positive(&self) -> bool {
        let (a, b) = (&self.a, &self.b);
        match (a.signum(), b.signum()) {
            (sa, sb) if sb.is_zero() => sa.is_positive(),
            (sa, sb) if sa.is_zero() => sb.is_positive(),
            (sa, sb) if sa.is_positive() && sb.is_positive() => true,
            (sa, sb) if sa.is_negative() && sb.is_negative() => false,
            (sa, _) => {
                // opposite signs: compare a^2 with 5 b^2
                let lhs = a * a;
                let rhs = BigRational::from_integer(5.into()) * b * b;
                if sa.is_positive() {
                    lhs > rhs
                } else {
                    rhs > lhs
                }
            }
        }
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.a) + ratio_to_f64(&self.b) * SQRT5_F64
    }
    fn key(&self) -> Self::Key {
        self.clone()
    }
    fn sqrt5() -> Option<Self> {
        Some(QSqrt5 {
            a: BigRational::zero(),
            b: BigRational::one(),
        })
    }
    fn from_f64(_: f64) -> Option<Self> {
        None
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::QuadExt(self.clone())
    }
    fn from_scalar(s: &Scalar) -> Result<Self, ScalarError> {
        match s {
            Scalar::QuadExt(q) => Ok(q.clone()),
            Scalar::Rational(r) => Ok(QSqrt5::from_rational(&r.0)),
            other => Err(ScalarError::VariantMismatch(other.kind(), FieldKind::QuadSqrt5)),
        }
    }
}

// ---------------------------------------------------------------------------
// Floats

/// Grid used to hash float vectors.
const FLOAT_KEY_SCALE: f64 = 1e9;

/// Threshold below which a float pivot counts as zero.
pub const FLOAT_PIVOT_EPS: f64 = 1e-9;

impl Field for f64 {
    type Key = i64;

    const KIND: FieldKind = FieldKind::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn from_rational(v: &BigRational) -> Self {
        ratio_to_f64(v)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / *self)
        }
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn key(&self) -> i64 {
        (*self * FLOAT_KEY_SCALE).round() as i64
    }
    fn sqrt5() -> Option<Self> {
        Some(SQRT5_F64)
    }
    fn from_f64(v: f64) -> Option<Self> {
        Some(v)
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }
    fn from_scalar(s: &Scalar) -> Result<Self, ScalarError> {
        Ok(s.to_f64())
    }
    fn is_negligible(&self) -> bool {
        self.abs() < FLOAT_PIVOT_EPS
    }
}

// ---------------------------------------------------------------------------
// Dynamic scalar

/// Runtime-tagged scalar. Operations between different families fail.
#[derive(Debug, Clone)]
pub enum Scalar {
    Rational(Rational),
    QuadExt(QSqrt5),
    Float(f64),
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            (Scalar::QuadExt(a), Scalar::QuadExt(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            (Scalar::Rational(r), Scalar::QuadExt(q)) | (Scalar::QuadExt(q), Scalar::Rational(r)) => {
                q.b.is_zero() && q.a == r.0
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn kind(&self) -> FieldKind {
        match self {
            Scalar::Rational(_) => FieldKind::Rational,
            Scalar::QuadExt(_) => FieldKind::QuadSqrt5,
            Scalar::Float(_) => FieldKind::Float,
        }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Scalar::Rational(Rational::new(num, den))
    }

    pub fn quad(a: Rational, b: Rational) -> Self {
        Scalar::QuadExt(QSqrt5::new(a, b))
    }

    pub fn parse(kind: FieldKind, text: &str) -> Result<Self, ScalarError> {
        match kind {
            FieldKind::Rational => text.parse().map(Scalar::Rational),
            FieldKind::QuadSqrt5 => text.parse().map(Scalar::QuadExt),
            FieldKind::Float => text
                .trim()
                .parse::<f64>()
                .map(Scalar::Float)
                .map_err(|_| ScalarError::Parse {
                    kind,
                    text: text.to_string(),
                }),
        }
    }

    pub fn apply(&self, op: ScalarOp, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        fn go<F: Field>(a: F, b: &F, op: ScalarOp) -> Result<F, ScalarError> {
            Ok(match op {
                ScalarOp::Add => a + b,
                ScalarOp::Sub => a - b,
                ScalarOp::Mul => a * b,
                ScalarOp::Div => a.checked_div(b)?,
            })
        }
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => go(a.clone(), b, op).map(Scalar::Rational),
            (Scalar::QuadExt(a), Scalar::QuadExt(b)) => go(a.clone(), b, op).map(Scalar::QuadExt),
            (Scalar::Float(a), Scalar::Float(b)) => go(*a, b, op).map(Scalar::Float),
            (a, b) => Err(ScalarError::VariantMismatch(a.kind(), b.kind())),
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.apply(ScalarOp::Add, rhs)
    }
    pub fn sub(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.apply(ScalarOp::Sub, rhs)
    }
    pub fn mul(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.apply(ScalarOp::Mul, rhs)
    }
    pub fn div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.apply(ScalarOp::Div, rhs)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64(),
            Scalar::QuadExt(q) => q.to_f64(),
            Scalar::Float(v) => *v,
        }
    }

    /// Exact sign test; floats are rejected.
    pub fn is_positive(&self) -> Result<bool, ScalarError> {
        match self {
            Scalar::Rational(r) => Ok(r.is_positive()),
            Scalar::QuadExt(q) => Ok(q.is_positive()),
            Scalar::Float(_) => Err(ScalarError::Inexact(FieldKind::Float)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::QuadExt(q) => write!(f, "{q}"),
            // Debug formatting of f64 is the shortest round-trip form.
            Scalar::Float(v) => write!(f, "{v:?}"),
        }
    }
}
