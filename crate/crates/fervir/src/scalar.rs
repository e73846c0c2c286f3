//! Exact arithmetic in the real quadratic field K = Q(sqrt 2).
//!
//! Every scalar in the crate is a `ScalarK`. The field is big enough to hold
//! the 1/sqrt(2) factor of the zero-mode action together with all module
//! parameters; square roots of other parameters are always supplied by the
//! caller rather than adjoined.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers. Kept reduced with a positive denominator by
/// construction; zero is 0/1.
pub type Rational = BigRational;

/// Element `a + b*sqrt(2)` of K. Components are reduced rationals and equality
/// is componentwise, so every value has a unique representation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScalarK {
    rational_part: Rational,
    sqrt2_part: Rational,
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

impl ScalarK {
    pub fn new(rational_part: Rational, sqrt2_part: Rational) -> Self {
        ScalarK {
            rational_part,
            sqrt2_part,
        }
    }

    pub fn zero() -> Self {
        ScalarK::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        ScalarK::new(Rational::one(), Rational::zero())
    }

    /// The generator sqrt(2).
    pub fn sqrt2() -> Self {
        ScalarK::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        ScalarK::new(Rational::from_integer(big(n)), Rational::zero())
    }

    /// The rational p/q. Panics if q = 0.
    pub fn from_rat(p: i64, q: i64) -> Self {
        ScalarK::new(Rational::new(big(p), big(q)), Rational::zero())
    }

    pub fn from_rational(r: Rational) -> Self {
        ScalarK::new(r, Rational::zero())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational_part
    }

    pub fn sqrt2_part(&self) -> &Rational {
        &self.sqrt2_part
    }

    pub fn is_zero(&self) -> bool {
        self.rational_part.is_zero() && self.sqrt2_part.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rational_part.is_one() && self.sqrt2_part.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt2_part.is_zero()
    }

    /// Numeric sign under the real embedding sqrt(2) = 1.414...
    pub fn is_positive(&self) -> bool {
        let a = &self.rational_part;
        let b = &self.sqrt2_part;
        if b.is_zero() {
            return a.is_positive();
        }
        if a.is_zero() {
            return b.is_positive();
        }
        match (a.is_positive(), b.is_positive()) {
            (true, true) => true,
            (false, false) => false,
            // a and b of opposite signs: compare a^2 with 2 b^2.
            (true, false) => (a * a - Rational::from_integer(big(2)) * b * b).is_positive(),
            (false, true) => !(a * a - Rational::from_integer(big(2)) * b * b).is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && !self.is_positive()
    }

    /// Multiplicative inverse. The norm a^2 - 2 b^2 vanishes only at 0 because
    /// sqrt(2) is irrational.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a = &self.rational_part;
        let b = &self.sqrt2_part;
        let norm = a * a - Rational::from_integer(big(2)) * b * b;
        Ok(ScalarK::new(a / &norm, -(b / &norm)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Integer power, negative exponents via the inverse. 0^0 = 1.
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            if self.is_zero() {
                return Err(Error::ZeroToNegativePower);
            }
            return self.inv()?.pow(-n);
        }
        let mut acc = ScalarK::one();
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Exact square root in K, if one exists. Returns the positive root.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(ScalarK::zero());
        }
        if !self.is_positive() {
            return None;
        }
        let a = &self.rational_part;
        let b = &self.sqrt2_part;
        let two = Rational::from_integer(big(2));
        if b.is_zero() {
            // t = p with p^2 = a, or t = q*sqrt(2) with 2 q^2 = a.
            if let Some(p) = rational_sqrt(a) {
                return Some(ScalarK::new(p, Rational::zero()));
            }
            if let Some(q) = rational_sqrt(&(a / &two)) {
                return Some(ScalarK::new(Rational::zero(), q));
            }
            return None;
        }
        // t = p + q*sqrt(2) with p^2 + 2 q^2 = a and 2 p q = b; p^2 is a root
        // of u^2 - a u + b^2/2.
        let disc = a * a - &two * b * b;
        let s = rational_sqrt(&disc)?;
        for root in [(a + &s) / &two, (a - &s) / &two] {
            if let Some(p) = rational_sqrt(&root) {
                if p.is_zero() {
                    continue;
                }
                let q = b / (&two * &p);
                let cand = ScalarK::new(p, q);
                if &(&cand * &cand) == self {
                    return Some(if cand.is_positive() { cand } else { -&cand });
                }
            }
        }
        None
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rational::zero());
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(Rational::new(ns, ds))
    } else {
        None
    }
}

/// lambda^r for half-integer r, given a square root s of lambda: with
/// lambda = s^2 this is s^(2r). `twice_r` holds 2r.
pub fn half_power(s: &ScalarK, twice_r: i64) -> Result<ScalarK> {
    s.pow(twice_r)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl<'a, 'b> $trait<&'b ScalarK> for &'a ScalarK {
            type Output = ScalarK;
            fn $method(self, other: &'b ScalarK) -> ScalarK {
                let $a = self;
                let $b = other;
                $body
            }
        }
        impl $trait<ScalarK> for ScalarK {
            type Output = ScalarK;
            fn $method(self, other: ScalarK) -> ScalarK {
                (&self).$method(&other)
            }
        }
    };
}

fn rat_add(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else {
        a + b
    }
}

fn rat_sub(a: &Rational, b: &Rational) -> Rational {
    if b.is_zero() {
        a.clone()
    } else if a.is_zero() {
        -b.clone()
    } else {
        a - b
    }
}

fn rat_mul(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() || b.is_zero() {
        Rational::zero()
    } else if a.is_one() {
        b.clone()
    } else if b.is_one() {
        a.clone()
    } else {
        a * b
    }
}

forward_binop!(Add, add, |a, b| ScalarK::new(
    rat_add(&a.rational_part, &b.rational_part),
    rat_add(&a.sqrt2_part, &b.sqrt2_part)
));
forward_binop!(Sub, sub, |a, b| ScalarK::new(
    rat_sub(&a.rational_part, &b.rational_part),
    rat_sub(&a.sqrt2_part, &b.sqrt2_part)
));
forward_binop!(Mul, mul, |a, b| {
    // The pure-rational case skips the sqrt(2) cross terms entirely.
    if a.sqrt2_part.is_zero() && b.sqrt2_part.is_zero() {
        return ScalarK::new(rat_mul(&a.rational_part, &b.rational_part), Rational::zero());
    }
    let cross = rat_mul(&a.sqrt2_part, &b.sqrt2_part);
    let doubled = if cross.is_zero() {
        Rational::zero()
    } else {
        Rational::from_integer(big(2)) * cross
    };
    ScalarK::new(
        rat_add(&rat_mul(&a.rational_part, &b.rational_part), &doubled),
        rat_add(
            &rat_mul(&a.rational_part, &b.sqrt2_part),
            &rat_mul(&a.sqrt2_part, &b.rational_part),
        ),
    )
});

impl Neg for &ScalarK {
    type Output = ScalarK;
    fn neg(self) -> ScalarK {
        ScalarK::new(-self.rational_part.clone(), -self.sqrt2_part.clone())
    }
}

impl Neg for ScalarK {
    type Output = ScalarK;
    fn neg(self) -> ScalarK {
        -&self
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ScalarK {
    /// Canonical text form: `p/q`, or `p/q+r/s*w2` / `p/q-r/s*w2` with `w2`
    /// denoting sqrt(2). Integer shorthand when the denominator is 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt2_part.is_zero() {
            return write!(f, "{}", fmt_rational(&self.rational_part));
        }
        let sign = if self.sqrt2_part.is_negative() { '-' } else { '+' };
        write!(
            f,
            "{}{}{}*w2",
            fmt_rational(&self.rational_part),
            sign,
            fmt_rational(&self.sqrt2_part.abs())
        )
    }
}

impl fmt::Debug for ScalarK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

impl FromStr for ScalarK {
    type Err = Error;

    /// Accepts `p/q`, `p/q+r/s*w2`, `p/q-r/s*w2`, and the shorthand
    /// `r/s*w2` for a pure sqrt(2) multiple.
    fn from_str(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || Error::Parse {
            msg: format!("invalid scalar `{text}`"),
            col: 0,
        };
        if t.is_empty() {
            return Err(err());
        }
        if let Some(head) = t.strip_suffix("*w2") {
            // Either `r/s*w2` or `p/q(+|-)r/s*w2`: split at the last +/- that
            // is not a leading sign.
            let bytes = head.as_bytes();
            let mut split = None;
            for i in (1..bytes.len()).rev() {
                if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' {
                    split = Some(i);
                    break;
                }
            }
            match split {
                Some(i) => {
                    let a = parse_rational(&head[..i]).ok_or_else(err)?;
                    let sign = if bytes[i] == b'-' { -1 } else { 1 };
                    let b = parse_rational(&head[i + 1..]).ok_or_else(err)?;
                    Ok(ScalarK::new(a, b * Rational::from_integer(big(sign))))
                }
                None => {
                    let b = parse_rational(head).ok_or_else(err)?;
                    Ok(ScalarK::new(Rational::zero(), b))
                }
            }
        } else {
            let a = parse_rational(&t).ok_or_else(err)?;
            Ok(ScalarK::from_rational(a))
        }
    }
}

impl serde::Serialize for ScalarK {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for ScalarK {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Renders a linear combination from (coefficient, symbol-text) pairs using
/// the shared term syntax: `1` coefficients are dropped, pure rationals fold
/// their sign into the separator, and coefficients with a sqrt(2) part are
/// parenthesized. Returns "0" for the empty combination.
pub(crate) fn format_terms<I: IntoIterator<Item = (ScalarK, String)>>(terms: I) -> String {
    let mut out = String::new();
    for (coeff, sym) in terms {
        if coeff.is_zero() {
            continue;
        }
        let first = out.is_empty();
        if coeff.is_rational() {
            let positive = coeff.is_positive();
            let abs = if positive { coeff.clone() } else { -&coeff };
            // A leading negative sign folds into the coefficient (a bare
            // "-sym" is not in the grammar), later ones into the separator.
            if first {
                if !positive {
                    out.push('-');
                }
                if abs.is_one() && positive {
                    out.push_str(&sym);
                } else {
                    out.push_str(&format!("{abs}*{sym}"));
                }
            } else {
                out.push_str(if positive { " + " } else { " - " });
                if abs.is_one() {
                    out.push_str(&sym);
                } else {
                    out.push_str(&format!("{abs}*{sym}"));
                }
            }
        } else {
            if !first {
                out.push_str(" + ");
            }
            out.push_str(&format!("({coeff})*{sym}"));
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}
