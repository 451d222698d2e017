//! Exact field elements: arbitrary-precision rationals and prime fields.
//!
//! Rationals are kept in lowest terms with positive denominator; prime-field
//! values are canonical representatives in `[0, p-1]`. No floating point
//! appears anywhere in the engine.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    /// The field of rational numbers.
    Rational,
    /// The prime field with the given characteristic.
    Prime(u64),
}

impl FieldTag {
    /// Builds a prime-field tag, rejecting composite or trivial moduli.
    pub fn prime(p: u64) -> Result<FieldTag> {
        if is_prime(p) {
            Ok(FieldTag::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "q"),
            FieldTag::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { residue: u64, modulus: u64 },
}

impl Scalar {
    pub fn zero(field: FieldTag) -> Scalar {
        match field {
            FieldTag::Rational => Scalar::Rational(BigRational::zero()),
            FieldTag::Prime(p) => Scalar::Prime {
                residue: 0,
                modulus: p,
            },
        }
    }

    pub fn one(field: FieldTag) -> Scalar {
        match field {
            FieldTag::Rational => Scalar::Rational(BigRational::one()),
            FieldTag::Prime(p) => Scalar::Prime {
                residue: 1 % p,
                modulus: p,
            },
        }
    }

    pub fn from_integer(n: i64, field: FieldTag) -> Scalar {
        match field {
            FieldTag::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldTag::Prime(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::Prime {
                    residue: r,
                    modulus: p,
                }
            }
        }
    }

    /// Builds a rational `num/den` (reduced, positive denominator).
    pub fn rational(num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Ok(Scalar::Rational(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    pub fn field(&self) -> FieldTag {
        match self {
            Scalar::Rational(_) => FieldTag::Rational,
            Scalar::Prime { modulus, .. } => FieldTag::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { residue, modulus } => *residue == 1 % *modulus,
        }
    }

    fn check(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "field mismatch");
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.check(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Prime {
                    residue: a,
                    modulus,
                },
                Scalar::Prime { residue: b, .. },
            ) => Scalar::Prime {
                residue: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.check(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Prime {
                    residue: a,
                    modulus,
                },
                Scalar::Prime { residue: b, .. },
            ) => Scalar::Prime {
                residue: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { residue, modulus } => Scalar::Prime {
                residue: if *residue == 0 { 0 } else { modulus - residue },
                modulus: *modulus,
            },
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Prime { residue, modulus } => Scalar::Prime {
                residue: mod_pow(*residue, *modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Canonical serialization: `a/b` for rationals, the residue for prime
    /// fields.
    pub fn render(&self) -> String {
        match self {
            Scalar::Rational(r) => format!("{}/{}", r.numer(), r.denom()),
            Scalar::Prime { residue, .. } => residue.to_string(),
        }
    }

    /// Parses the serialized form. Accepts `a/b` or a bare integer for
    /// rationals; an integer for prime fields.
    pub fn parse(text: &str, field: FieldTag) -> Result<Scalar> {
        match field {
            FieldTag::Rational => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (text.trim(), "1"),
                };
                let n = BigInt::from_str(num)
                    .map_err(|_| Error::Invalid(format!("bad rational {text:?}")))?;
                let d = BigInt::from_str(den)
                    .map_err(|_| Error::Invalid(format!("bad rational {text:?}")))?;
                if d.is_zero() {
                    return Err(Error::Invalid(format!("zero denominator in {text:?}")));
                }
                Ok(Scalar::Rational(BigRational::new(n, d)))
            }
            FieldTag::Prime(p) => {
                let v = i128::from_str(text.trim())
                    .map_err(|_| Error::Invalid(format!("bad prime-field value {text:?}")))?;
                let r = v.rem_euclid(p as i128) as u64;
                Ok(Scalar::Prime {
                    residue: r,
                    modulus: p,
                })
            }
        }
    }

    /// Sign test; prime-field representatives count as non-negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Prime { .. } => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc: u128 = 1;
    let m = modulus as u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}
