//! Scalar fields for the Hilbert-space layer.
//!
//! Linear algebra in [`crate::subspace`] is written against [`Scalar`], a
//! complex field with conjugation. Two instances ship:
//!
//! * [`ExactComplex`]: Gaussian rationals over arbitrary-precision integers.
//!   Equality is exact, which is what lattice-law checking needs.
//! * [`num_complex::Complex64`]: floating point with a fixed pivot tolerance,
//!   handy for quick numerics and for cross-checking the exact path.

use std::fmt::{self, Debug};
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational.
pub type Rational = BigRational;

/// Gaussian rational `a + b i` with exact arithmetic.
pub type ExactComplex = Complex<BigRational>;

/// Absolute tolerance used by the floating-point instance when pivoting.
pub const FLOAT_TOLERANCE: f64 = 1e-10;

pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {
    /// The real subfield; Born values and Gram norms live here.
    type Real: Clone + Debug + PartialEq + PartialOrd + Num + Neg<Output = Self::Real>;

    fn conj(&self) -> Self;
    fn re(&self) -> Self::Real;
    fn from_real(r: Self::Real) -> Self;

    /// Zero test used when eliminating. Exact for rational types.
    fn is_negligible(&self) -> bool;

    /// Preference weight for pivot selection; the largest weight wins, ties
    /// go to the earliest row.
    fn pivot_weight(&self) -> f64;

    fn norm_sqr(&self) -> Self::Real {
        (self.clone() * self.conj()).re()
    }
}

impl Scalar for ExactComplex {
    type Real = BigRational;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn re(&self) -> BigRational {
        self.re.clone()
    }

    fn from_real(r: BigRational) -> Self {
        Complex::new(r, BigRational::zero())
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

impl Scalar for Complex64 {
    type Real = f64;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn re(&self) -> f64 {
        self.re
    }

    fn from_real(r: f64) -> Self {
        Complex64::new(r, 0.0)
    }

    fn is_negligible(&self) -> bool {
        self.norm() < FLOAT_TOLERANCE
    }

    fn pivot_weight(&self) -> f64 {
        self.norm()
    }
}

/// Shorthand for an exact complex with integer parts.
pub fn cint(re: i64, im: i64) -> ExactComplex {
    Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    )
}

/// Shorthand for an exact vector with real integer entries.
pub fn ivec(entries: &[i64]) -> Vec<ExactComplex> {
    entries.iter().map(|&x| cint(x, 0)).collect()
}

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Lossy conversion of an exact scalar to floating point.
pub fn to_complex64(z: &ExactComplex) -> Complex64 {
    use num_traits::ToPrimitive;
    Complex64::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

fn parse_unsigned_rational(s: &str, whole: &str) -> Result<BigRational> {
    let bad = || Error::InvalidScalar(whole.to_string());
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    match s.split_once('/') {
        None if digits(s) => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
        Some((n, d)) if digits(n) && digits(d) => {
            let n = BigInt::from_str(n).map_err(|_| bad())?;
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        _ => Err(bad()),
    }
}

fn split_sign(s: &str) -> (bool, &str) {
    match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    }
}

/// Parses a scalar literal.
///
/// Accepted forms, with `r` an unsigned `digits` or `digits/digits`:
/// `[±]r`, `[±]r i`, `[±]r ± r i` (no interior whitespace), e.g. `"1"`,
/// `"-1/2"`, `"0+1i"`, `"3/4-1/4i"`.
pub fn parse_scalar(text: &str) -> Result<ExactComplex> {
    let bad = || Error::InvalidScalar(text.to_string());
    let (neg, body) = split_sign(text);
    if body.is_empty() {
        return Err(bad());
    }
    let signed = |neg: bool, r: BigRational| if neg { -r } else { r };

    if let Some(imag_body) = body.strip_suffix('i') {
        // Either a pure imaginary or `re ± im i`.
        if let Some(pos) = imag_body.find(['+', '-']) {
            let (re_txt, rest) = imag_body.split_at(pos);
            let (im_neg, im_txt) = split_sign(rest);
            let re = signed(neg, parse_unsigned_rational(re_txt, text)?);
            let im = signed(im_neg, parse_unsigned_rational(im_txt, text)?);
            return Ok(Complex::new(re, im));
        }
        let im = signed(neg, parse_unsigned_rational(imag_body, text)?);
        return Ok(Complex::new(BigRational::zero(), im));
    }
    if body.contains(['+', '-']) {
        return Err(bad());
    }
    Ok(Complex::new(
        signed(neg, parse_unsigned_rational(body, text)?),
        BigRational::zero(),
    ))
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a scalar in the literal grammar accepted by [`parse_scalar`].
pub fn format_scalar(z: &ExactComplex) -> String {
    if z.im.is_zero() {
        return fmt_rational(&z.re);
    }
    if z.re.is_zero() {
        return format!("{}i", fmt_rational(&z.im));
    }
    let sign = if z.im.is_negative() { '-' } else { '+' };
    format!("{}{}{}i", fmt_rational(&z.re), sign, fmt_rational(&z.im.abs()))
}

/// Display adapter for exact vectors, `(a, b, c)`.
pub struct VecDisplay<'a>(pub &'a [ExactComplex]);

impl fmt::Display for VecDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, z) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_scalar(z))?;
        }
        write!(f, ")")
    }
}
