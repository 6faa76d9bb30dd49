//! Exact scalars: arbitrary-precision rationals and prime-field residues.
//!
//! Every form and matrix carries a [`Field`] tag; arithmetic between two
//! scalars of different fields is a programming error and panics. Public
//! entry points that accept user data (rank, parsing, form arithmetic)
//! check the tags first and report [`Error::MixedScalars`] instead.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default prime for randomized search: 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Prime field `F_p`; `p` must be a prime below 2^32 so products fit a `u64`.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 32 {
            return Err(Error::Domain(format!("modulus {p} exceeds 32 bits")));
        }
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    /// True when the characteristic is 0 or exceeds `bound`.
    pub fn char_exceeds(self, bound: u64) -> bool {
        match self {
            Field::Rational => true,
            Field::Prime(p) => p > bound,
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Mod(Fp::new(0, p)),
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Mod(Fp::from_i64(v, p)),
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = (v % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
                Scalar::Mod(Fp::new(r.to_u64().unwrap(), p))
            }
        }
    }

    /// `num / den` in this field; fails when `den` vanishes in the field.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let n = self.from_bigint(num);
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::Parse(format!("denominator {den} vanishes in {self}")));
        }
        Ok(n.div(&d))
    }

    /// A uniformly random element: all of `F_p`, or an integer in `[-bound, bound]` over Q.
    pub fn random<R: Rng + ?Sized>(self, rng: &mut R, bound: i64) -> Scalar {
        match self {
            Field::Rational => self.from_i64(rng.gen_range(-bound..=bound)),
            Field::Prime(p) => Scalar::Mod(Fp::new(rng.gen_range(0..p), p)),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Deterministic trial division; moduli are at most 32 bits.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut k = 3;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

/// A residue modulo a prime `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Fp {
        Fp {
            value: value % modulus,
            modulus,
        }
    }

    pub fn from_i64(v: i64, modulus: u64) -> Fp {
        let m = modulus as i128;
        Fp::new((((v as i128) % m + m) % m) as u64, modulus)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn inv(self) -> Fp {
        assert!(self.value != 0, "inverse of zero in F_{}", self.modulus);
        Fp::new(pow_mod(self.value, self.modulus - 2, self.modulus), self.modulus)
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, m: u64) -> u64 {
    pow_mod(a, m - 2, m)
}

/// A field element tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod(Fp),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Mod(x) => Field::Prime(x.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Mod(x) => x.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Mod(x) => x.value == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod(a), Scalar::Mod(b)) if a.modulus == b.modulus => {
                Scalar::Mod(Fp::new(a.value + b.value, a.modulus))
            }
            _ => panic!("mixed scalar fields: {} and {}", self.field(), other.field()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod(a) => Scalar::Mod(Fp::new(a.modulus - a.value, a.modulus)),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod(a), Scalar::Mod(b)) if a.modulus == b.modulus => {
                Scalar::Mod(Fp::new(a.value * b.value, a.modulus))
            }
            _ => panic!("mixed scalar fields: {} and {}", self.field(), other.field()),
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Mod(a) => Scalar::Mod(a.inv()),
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    pub fn mul_u64(&self, k: u64) -> Scalar {
        self.mul(&self.field().from_i64(k as i64))
    }

    /// Residue value for prime-field scalars.
    pub fn as_fp(&self) -> Option<Fp> {
        match self {
            Scalar::Mod(x) => Some(*x),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Mod(_) => None,
        }
    }

    /// True when the printed form needs a leading minus sign.
    pub(crate) fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Mod(_) => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Mod(x) => write!(f, "{}", x.value),
        }
    }
}
