//! Exact scalars over the rationals and prime fields.
//!
//! Every [`FieldValue`] is kept in canonical form (reduced fractions with a
//! positive denominator, or residues in `[0, p)`), so equality of values is
//! plain structural equality and zero tests are exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field mismatch: {left} vs {right}")]
    SpecMismatch { left: FieldSpec, right: FieldSpec },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime in [2, 2^31)")]
    NotPrime(u64),
    #[error("invalid {field} value {text:?}: {reason}")]
    Parse {
        field: FieldSpec,
        text: String,
        reason: &'static str,
    },
    #[error("invalid field name {0:?} (expected \"Q\" or \"GF(p)\")")]
    UnknownField(String),
}

/// A prime modulus `p` with `2 <= p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(2..1u64 << 31).contains(&p) || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeModulus(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The field a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(PrimeModulus),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        PrimeModulus::new(p).map(FieldSpec::Prime)
    }

    pub fn characteristic(self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => p.get(),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("Q"),
            FieldSpec::Prime(p) => write!(f, "GF({})", p.get()),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Accepts `Q` or `GF(p)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let inner = s
            .strip_prefix("GF(")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| FieldError::UnknownField(s.to_string()))?;
        let p: u64 = inner
            .parse()
            .map_err(|_| FieldError::UnknownField(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Residue { value: u32, modulus: PrimeModulus },
}

/// An exact field element in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldValue(Repr);

impl FieldValue {
    pub fn zero(spec: FieldSpec) -> Self {
        Self::from_int(spec, 0)
    }

    pub fn one(spec: FieldSpec) -> Self {
        Self::from_int(spec, 1)
    }

    pub fn from_int(spec: FieldSpec, n: i64) -> Self {
        match spec {
            FieldSpec::Rationals => FieldValue(Repr::Rational(BigRational::from_integer(n.into()))),
            FieldSpec::Prime(modulus) => {
                let p = modulus.get() as i64;
                FieldValue(Repr::Residue {
                    value: n.rem_euclid(p) as u32,
                    modulus,
                })
            }
        }
    }

    /// `num / den` in the given field.
    pub fn from_ratio(spec: FieldSpec, num: i64, den: i64) -> Result<Self, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        match spec {
            FieldSpec::Rationals => Ok(FieldValue(Repr::Rational(BigRational::new(
                num.into(),
                den.into(),
            )))),
            FieldSpec::Prime(_) => {
                let d = Self::from_int(spec, den);
                Self::from_int(spec, num).try_mul(&d.inv()?)
            }
        }
    }

    pub fn from_rational(value: BigRational) -> Self {
        FieldValue(Repr::Rational(value))
    }

    pub fn spec(&self) -> FieldSpec {
        match &self.0 {
            Repr::Rational(_) => FieldSpec::Rationals,
            Repr::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_zero(),
            Repr::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(r) => r.is_one(),
            Repr::Residue { value, .. } => *value == 1,
        }
    }

    /// The rational payload, if this is an element of Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(r) => Some(r),
            Repr::Residue { .. } => None,
        }
    }

    /// The residue payload, if this is an element of GF(p).
    pub fn as_residue(&self) -> Option<u32> {
        match &self.0 {
            Repr::Rational(_) => None,
            Repr::Residue { value, .. } => Some(*value),
        }
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        let (left, right) = (self.spec(), other.spec());
        if left != right {
            return Err(FieldError::SpecMismatch { left, right });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldValue(Repr::Rational(a + b)),
            (Repr::Residue { value: a, modulus }, Repr::Residue { value: b, .. }) => {
                let p = modulus.get() as u64;
                FieldValue(Repr::Residue {
                    value: ((*a as u64 + *b as u64) % p) as u32,
                    modulus: *modulus,
                })
            }
            _ => unreachable!("specs checked"),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldValue(Repr::Rational(a * b)),
            (Repr::Residue { value: a, modulus }, Repr::Residue { value: b, .. }) => {
                let p = modulus.get() as u64;
                FieldValue(Repr::Residue {
                    value: ((*a as u64 * *b as u64) % p) as u32,
                    modulus: *modulus,
                })
            }
            _ => unreachable!("specs checked"),
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn neg(&self) -> Self {
        match &self.0 {
            Repr::Rational(a) => FieldValue(Repr::Rational(-a)),
            Repr::Residue { value, modulus } => FieldValue(Repr::Residue {
                value: if *value == 0 {
                    0
                } else {
                    modulus.get() - value
                },
                modulus: *modulus,
            }),
        }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Rational(a) => FieldValue(Repr::Rational(a.recip())),
            Repr::Residue { value, modulus } => {
                let p = modulus.get() as u64;
                FieldValue(Repr::Residue {
                    value: pow_mod(*value as u64, p - 2, p) as u32,
                    modulus: *modulus,
                })
            }
        })
    }

    /// Parses the canonical text form: `-?digits(/digits)?` for Q (reduced,
    /// denominator > 1 when present, no leading zeros) and a decimal residue
    /// in `[0, p)` for GF(p). Non-canonical spellings are rejected.
    pub fn parse(spec: FieldSpec, text: &str) -> Result<Self, FieldError> {
        let err = |reason| FieldError::Parse {
            field: spec,
            text: text.to_string(),
            reason,
        };
        match spec {
            FieldSpec::Rationals => {
                let (negative, body) = match text.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, text),
                };
                let (num_text, den_text) = match body.split_once('/') {
                    Some((n, d)) => (n, Some(d)),
                    None => (body, None),
                };
                let num =
                    parse_canonical_digits(num_text).ok_or_else(|| err("malformed numerator"))?;
                if negative && num.is_zero() {
                    return Err(err("negative zero"));
                }
                let num = if negative { -num } else { num };
                let den = match den_text {
                    None => BigInt::one(),
                    Some(d) => {
                        let den = parse_canonical_digits(d)
                            .ok_or_else(|| err("malformed denominator"))?;
                        if den.is_zero() {
                            return Err(err("zero denominator"));
                        }
                        if den.is_one() {
                            return Err(err("denominator 1 must be omitted"));
                        }
                        if !num.gcd(&den).is_one() {
                            return Err(err("fraction not reduced"));
                        }
                        den
                    }
                };
                Ok(FieldValue(Repr::Rational(BigRational::new_raw(num, den))))
            }
            FieldSpec::Prime(modulus) => {
                let n = parse_canonical_digits(text).ok_or_else(|| err("malformed residue"))?;
                if n >= BigInt::from(modulus.get()) {
                    return Err(err("residue out of range"));
                }
                let value: u32 = n.try_into().map_err(|_| err("residue out of range"))?;
                Ok(FieldValue(Repr::Residue { value, modulus }))
            }
        }
    }
}

fn parse_canonical_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if s.len() > 1 && s.starts_with('0') {
        return None;
    }
    s.parse().ok()
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(r) => {
                debug_assert!(r.denom().is_positive());
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl std::ops::Neg for &FieldValue {
    type Output = FieldValue;

    fn neg(self) -> FieldValue {
        FieldValue::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> FieldValue {
        FieldValue::from_ratio(FieldSpec::Rationals, n, d).unwrap()
    }

    #[test]
    fn rational_addition() {
        assert_eq!(q(1, 2).try_add(&q(1, 3)).unwrap(), q(5, 6));
        assert_eq!(q(1, 2).try_add(&q(1, 3)).unwrap().to_string(), "5/6");
    }

    #[test]
    fn characteristic_two() {
        let gf2 = FieldSpec::prime(2).unwrap();
        let one = FieldValue::one(gf2);
        assert!(one.try_add(&one).unwrap().is_zero());
    }

    #[test]
    fn inverses() {
        let gf5 = FieldSpec::prime(5).unwrap();
        assert_eq!(
            FieldValue::from_int(gf5, 2).inv().unwrap(),
            FieldValue::from_int(gf5, 3)
        );
        assert_eq!(q(3, 4).inv().unwrap(), q(4, 3));
        let gf7 = FieldSpec::prime(7).unwrap();
        for a in 1..7 {
            let a = FieldValue::from_int(gf7, a);
            assert!(a.try_mul(&a.inv().unwrap()).unwrap().is_one());
        }
        assert_eq!(FieldValue::zero(gf7).inv(), Err(FieldError::DivisionByZero));
        assert_eq!(
            FieldValue::zero(FieldSpec::Rationals).inv(),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn mismatched_fields() {
        let gf3 = FieldSpec::prime(3).unwrap();
        let err = q(1, 1).try_add(&FieldValue::one(gf3)).unwrap_err();
        assert!(matches!(err, FieldError::SpecMismatch { .. }));
        let gf5 = FieldSpec::prime(5).unwrap();
        assert!(FieldValue::one(gf3).try_mul(&FieldValue::one(gf5)).is_err());
    }

    #[test]
    fn primality_is_checked() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(2_147_483_647).is_ok());
        for bad in [0, 1, 4, 9, 91, 1u64 << 31, 4_294_967_311] {
            assert_eq!(FieldSpec::prime(bad), Err(FieldError::NotPrime(bad)));
        }
    }

    #[test]
    fn canonical_text() {
        let gf5 = FieldSpec::prime(5).unwrap();
        for good in [
            "0",
            "7",
            "-7",
            "1/2",
            "-22/7",
            "123456789012345678901234567890",
        ] {
            let v = FieldValue::parse(FieldSpec::Rationals, good).unwrap();
            assert_eq!(v.to_string(), good);
        }
        for bad in [
            "", "-", "-0", "01", "+1", "2/4", "3/1", "1/0", "1/-2", "1/02", " 1", "1.5",
        ] {
            assert!(
                FieldValue::parse(FieldSpec::Rationals, bad).is_err(),
                "{bad}"
            );
        }
        assert_eq!(
            FieldValue::parse(gf5, "4").unwrap(),
            FieldValue::from_int(gf5, 4)
        );
        for bad in ["5", "-1", "04", "1/2", ""] {
            assert!(FieldValue::parse(gf5, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn field_names() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!(
            "GF(7)".parse::<FieldSpec>().unwrap(),
            FieldSpec::prime(7).unwrap()
        );
        assert!("GF(8)".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::prime(13).unwrap().to_string(), "GF(13)");
    }
}
