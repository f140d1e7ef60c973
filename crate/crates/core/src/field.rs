//! Exact coefficient fields: the rationals and prime fields.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field of every computation.
/// Serialized as `"Q"` or `"F<p>"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum CoeffField {
    Rationals,
    Prime(u32),
}

impl From<CoeffField> for String {
    fn from(f: CoeffField) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for CoeffField {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl CoeffField {
    pub fn prime(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(CoeffField::Prime(p))
        } else {
            Err(Error::InvalidField(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            CoeffField::Rationals => 0,
            CoeffField::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            CoeffField::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            CoeffField::Prime(p) => Scalar::Mod { v: v.rem_euclid(p as i64) as u32, p },
        }
    }

    /// `(-1)^k`.
    pub fn sign(&self, k: i64) -> Scalar {
        self.from_i64(if k.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    /// Parses a decimal coefficient such as `"3"`, `"-2"` or `"1/2"`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let bad = || Error::Parse(format!("invalid coefficient {s:?}"));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        match *self {
            CoeffField::Rationals => Ok(Scalar::Rat(BigRational::new(num, den))),
            CoeffField::Prime(p) => {
                let pb = BigInt::from(p);
                let n = ((num % &pb) + &pb) % &pb;
                let d = ((den % &pb) + &pb) % &pb;
                if d.is_zero() {
                    return Err(Error::Parse(format!("denominator of {s:?} vanishes mod {p}")));
                }
                let n = Scalar::Mod { v: n.to_u32().unwrap(), p };
                let d = Scalar::Mod { v: d.to_u32().unwrap(), p };
                Ok(n * d.inverse())
            }
        }
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffField::Rationals => write!(f, "Q"),
            CoeffField::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for CoeffField {
    type Err = Error;

    /// Accepts `Q` or `F<p>` (for example `F2`, `F3`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" || s == "q" {
            return Ok(CoeffField::Rationals);
        }
        let digits = s
            .strip_prefix("Fp")
            .or_else(|| s.strip_prefix('F'))
            .or_else(|| s.strip_prefix('f'))
            .ok_or_else(|| Error::InvalidField(format!("unknown field {s:?}")))?;
        let p: u32 = digits
            .parse()
            .map_err(|_| Error::InvalidField(format!("unknown field {s:?}")))?;
        CoeffField::prime(p)
    }
}

/// An element of a [`CoeffField`]. Prime-field elements carry their modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { v: u32, p: u32 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { v, .. } => *v == 1,
        }
    }

    pub fn field(&self) -> CoeffField {
        match self {
            Scalar::Rat(_) => CoeffField::Rationals,
            Scalar::Mod { p, .. } => CoeffField::Prime(*p),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inverse(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Mod { v, p } => {
                let (p64, mut base, mut e, mut acc) = (*p as u64, *v as u64, *p as u64 - 2, 1u64);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p64;
                    }
                    base = base * base % p64;
                    e >>= 1;
                }
                Scalar::Mod { v: acc as u32, p: *p }
            }
        }
    }

    pub fn to_decimal(&self) -> String {
        match self {
            Scalar::Rat(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { v, .. } => v.to_string(),
        }
    }

    pub fn is_negative_one(&self) -> bool {
        (-self.clone()).is_one()
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal())
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) if p == q => {
                Scalar::Mod { v: ((*a as u64 + *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) if p == q => {
                Scalar::Mod { v: ((*a as u64 * *b as u64) % *p as u64) as u32, p: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { v, p } => Scalar::Mod { v: (*p - *v) % *p, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fields() {
        assert_eq!("Q".parse::<CoeffField>().unwrap(), CoeffField::Rationals);
        assert_eq!("F2".parse::<CoeffField>().unwrap(), CoeffField::Prime(2));
        assert_eq!("Fp3".parse::<CoeffField>().unwrap(), CoeffField::Prime(3));
        assert!("F4".parse::<CoeffField>().is_err());
        assert!(CoeffField::prime(1).is_err());
        assert_eq!(serde_json::to_string(&CoeffField::Prime(5)).unwrap(), "\"F5\"");
        assert_eq!(serde_json::from_str::<CoeffField>("\"Q\"").unwrap(), CoeffField::Rationals);
        assert!(serde_json::from_str::<CoeffField>("\"F6\"").is_err());
    }

    #[test]
    fn prime_arithmetic() {
        let f = CoeffField::Prime(7);
        let a = f.from_i64(3);
        assert!((&a * &a.inverse()).is_one());
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert_eq!(f.parse_scalar("1/2").unwrap(), f.from_i64(4));
    }

    #[test]
    fn rational_parse() {
        let q = CoeffField::Rationals;
        let h = q.parse_scalar("-3/6").unwrap();
        assert_eq!(h.to_decimal(), "-1/2");
        assert!(q.parse_scalar("1/0").is_err());
    }
}
