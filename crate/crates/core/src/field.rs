//! Exact scalar fields: prime fields GF(p) with p < 2^31 and the rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Largest admissible characteristic (exclusive).
pub const PRIME_LIMIT: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is out of range (must be below 2^31)")]
    OutOfRange(String),
    #[error("unrecognised field descriptor {0:?} (expected \"gf <p>\" or \"rational\")")]
    BadDescriptor(String),
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {text:?} as an element of {field}")]
    BadScalar { text: String, field: FieldSpec },
}

/// The field the entries of a matrix live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u32),
    Rational,
}

impl FieldSpec {
    /// Validated prime field.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= PRIME_LIMIT {
            return Err(FieldError::OutOfRange(p.to_string()));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    /// Parses `"gf <p>"` or `"rational"`.
    pub fn parse(descriptor: &str) -> Result<Self, FieldError> {
        let words: Vec<&str> = descriptor.split_whitespace().collect();
        match words.as_slice() {
            ["rational"] => Ok(FieldSpec::Rational),
            ["gf", p] => {
                let digits = p.strip_prefix('+').unwrap_or(p);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(FieldError::BadDescriptor(descriptor.to_string()));
                }
                match digits.parse::<u64>() {
                    Ok(p) => Self::prime(p),
                    Err(_) => Err(FieldError::OutOfRange(digits.to_string())),
                }
            }
            _ => Err(FieldError::BadDescriptor(descriptor.to_string())),
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rational => 0,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "gf {p}"),
            FieldSpec::Rational => f.write_str("rational"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FieldSpec::parse(s)
    }
}

/// Deterministic Miller-Rabin; the witness set is exact for all n < 3.3 * 10^24.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub(crate) fn reduce_i64(value: i64, p: u32) -> u32 {
    value.rem_euclid(p as i64) as u32
}

pub(crate) fn reduce_bigint(value: &BigInt, p: u32) -> u32 {
    let m = BigInt::from(p);
    let r = ((value % &m) + &m) % &m;
    u32::try_from(r).expect("residue fits in u32")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Residue(u32),
    Ratio(BigRational),
}

/// An element of a [`FieldSpec`].
///
/// Residues are kept in `[0, p)`; rationals are kept in lowest terms with a
/// positive denominator (maintained by `BigRational`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: FieldSpec,
    repr: Repr,
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldSpec, value: i64) -> Self {
        let repr = match field {
            FieldSpec::Prime(p) => Repr::Residue(reduce_i64(value, p)),
            FieldSpec::Rational => Repr::Ratio(BigRational::from_integer(value.into())),
        };
        Scalar { field, repr }
    }

    /// `numer / denom` in `field`; for prime fields the denominator is inverted.
    pub fn from_fraction(
        field: FieldSpec,
        numer: BigInt,
        denom: BigInt,
    ) -> Result<Self, FieldError> {
        if denom.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        match field {
            FieldSpec::Rational => Ok(Scalar {
                field,
                repr: Repr::Ratio(BigRational::new(numer, denom)),
            }),
            FieldSpec::Prime(p) => {
                let n = reduce_bigint(&numer, p);
                let d = reduce_bigint(&denom, p);
                if d == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(Self::residue(
                    p,
                    mul_mod(n as u64, inv_mod(d as u64, p as u64), p as u64) as u32,
                ))
            }
        }
    }

    pub(crate) fn residue(p: u32, value: u32) -> Self {
        debug_assert!(value < p);
        Scalar {
            field: FieldSpec::Prime(p),
            repr: Repr::Residue(value),
        }
    }

    pub(crate) fn ratio(value: BigRational) -> Self {
        Scalar {
            field: FieldSpec::Rational,
            repr: Repr::Ratio(value),
        }
    }

    /// Parses the textual form: decimal integers for GF(p) (reduced mod p),
    /// `a` or `a/b` for rationals.
    pub fn parse(field: FieldSpec, text: &str) -> Result<Self, FieldError> {
        let bad = || FieldError::BadScalar {
            text: text.to_string(),
            field,
        };
        match field {
            FieldSpec::Prime(p) => {
                let value: BigInt = text.parse().map_err(|_| bad())?;
                Ok(Self::residue(p, reduce_bigint(&value, p)))
            }
            FieldSpec::Rational => {
                let (numer, denom) = match text.split_once('/') {
                    Some((a, b)) => (
                        a.parse::<BigInt>().map_err(|_| bad())?,
                        b.parse::<BigInt>().map_err(|_| bad())?,
                    ),
                    None => (text.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
                };
                if denom.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(Self::ratio(BigRational::new(numer, denom)))
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Residue(v) => *v == 0,
            Repr::Ratio(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Residue(v) => *v == 1,
            Repr::Ratio(q) => q.is_one(),
        }
    }

    /// The residue in `[0, p)` for prime-field elements.
    pub fn as_residue(&self) -> Option<u32> {
        match &self.repr {
            Repr::Residue(v) => Some(*v),
            Repr::Ratio(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Ratio(q) => Some(q),
            Repr::Residue(_) => None,
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::Mismatch(self.field, other.field))
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        Ok(match (&self.repr, &other.repr, self.field) {
            (Repr::Residue(a), Repr::Residue(b), FieldSpec::Prime(p)) => {
                Self::residue(p, ((*a as u64 + *b as u64) % p as u64) as u32)
            }
            (Repr::Ratio(a), Repr::Ratio(b), _) => Self::ratio(a + b),
            _ => unreachable!("representation always matches field"),
        })
    }

    pub fn neg(&self) -> Scalar {
        match (&self.repr, self.field) {
            (Repr::Residue(a), FieldSpec::Prime(p)) => Self::residue(p, (p - a) % p),
            (Repr::Ratio(a), _) => Self::ratio(-a),
            _ => unreachable!("representation always matches field"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        Ok(match (&self.repr, &other.repr, self.field) {
            (Repr::Residue(a), Repr::Residue(b), FieldSpec::Prime(p)) => {
                Self::residue(p, mul_mod(*a as u64, *b as u64, p as u64) as u32)
            }
            (Repr::Ratio(a), Repr::Ratio(b), _) => Self::ratio(a * b),
            _ => unreachable!("representation always matches field"),
        })
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match (&self.repr, self.field) {
            (Repr::Residue(a), FieldSpec::Prime(p)) => {
                Self::residue(p, inv_mod(*a as u64, p as u64) as u32)
            }
            (Repr::Ratio(a), _) => Self::ratio(a.recip()),
            _ => unreachable!("representation always matches field"),
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        self.mul(&other.inv()?)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Residue(v) => write!(f, "{v}"),
            Repr::Ratio(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Repr::Ratio(q) => {
                debug_assert!(q.denom().is_positive());
                write!(f, "{}/{}", q.numer(), q.denom())
            }
        }
    }
}
