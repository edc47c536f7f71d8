//! Exact scalars over ℚ, GF(p) and ℚ(q).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, RatFunc};

const PRIME_BOUND: u64 = 1 << 31;

/// The field a scalar lives in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldContext {
    Rationals,
    PrimeField(u64),
    /// Rational functions in one indeterminate `q` over ℚ.
    RationalFunctions,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldContext {
    pub fn prime(p: u64) -> Result<Self> {
        if p < PRIME_BOUND && is_prime(p) {
            Ok(FieldContext::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// 0 for the two characteristic-zero fields.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldContext::PrimeField(p) => *p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldContext::Rationals => Scalar::Rational(BigRational::zero()),
            FieldContext::PrimeField(p) => Scalar::Prime { p: *p, v: 0 },
            FieldContext::RationalFunctions => Scalar::RatFunc(RatFunc::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Scalar {
        match self {
            FieldContext::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
            FieldContext::PrimeField(p) => Scalar::Prime { p: *p, v: n.rem_euclid(*p as i64) as u64 },
            FieldContext::RationalFunctions => {
                Scalar::RatFunc(RatFunc::from_rational(BigRational::from_integer(n.into())))
            }
        }
    }

    /// Image of the rational `a/b`; errors when `b` vanishes in the field.
    pub fn ratio(&self, a: i64, b: i64) -> Result<Scalar> {
        self.int(a).div(&self.int(b))
    }

    pub fn from_rational(&self, c: &BigRational) -> Result<Scalar> {
        match self {
            FieldContext::Rationals => Ok(Scalar::Rational(c.clone())),
            FieldContext::RationalFunctions => Ok(Scalar::RatFunc(RatFunc::from_rational(c.clone()))),
            FieldContext::PrimeField(p) => {
                let m = BigInt::from(*p);
                let reduce = |n: &BigInt| -> u64 {
                    let r = ((n % &m) + &m) % &m;
                    r.to_u64().unwrap()
                };
                let num = Scalar::Prime { p: *p, v: reduce(c.numer()) };
                let den = Scalar::Prime { p: *p, v: reduce(c.denom()) };
                num.div(&den)
            }
        }
    }

    /// The indeterminate of ℚ(q).
    pub fn q(&self) -> Result<Scalar> {
        match self {
            FieldContext::RationalFunctions => Ok(Scalar::RatFunc(RatFunc::monomial(BigRational::one(), 1))),
            _ => Err(Error::NoVariable),
        }
    }

    /// Nonzero elements `1..p` for prime fields; `None` for infinite fields.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldContext::PrimeField(p) => Some(*p),
            _ => None,
        }
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldContext::Rationals => write!(f, "q"),
            FieldContext::PrimeField(p) => write!(f, "gf{}", p),
            FieldContext::RationalFunctions => write!(f, "fq"),
        }
    }
}

/// Parses the command-line names `q` (ℚ), `gfP` (GF(P)) and `fq` (ℚ(q)).
impl FromStr for FieldContext {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" => Ok(FieldContext::Rationals),
            "fq" => Ok(FieldContext::RationalFunctions),
            _ => match s.strip_prefix("gf").map(str::parse::<u64>) {
                Some(Ok(p)) => FieldContext::prime(p),
                _ => Err(Error::Parse(format!("unknown field '{}'", s))),
            },
        }
    }
}

/// An exact field element tagged with its field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Prime { p: u64, v: u64 },
    RatFunc(RatFunc),
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let quo = r / new_r;
        (t, new_t) = (new_t, t - quo * new_t);
        (r, new_r) = (new_r, r - quo * new_r);
    }
    t.rem_euclid(p as i64) as u64
}

impl Scalar {
    pub fn ctx(&self) -> FieldContext {
        match self {
            Scalar::Rational(_) => FieldContext::Rationals,
            Scalar::Prime { p, .. } => FieldContext::PrimeField(*p),
            Scalar::RatFunc(_) => FieldContext::RationalFunctions,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(a) => a.is_zero(),
            Scalar::Prime { v, .. } => *v == 0,
            Scalar::RatFunc(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(a) => a.is_one(),
            Scalar::Prime { v, .. } => *v == 1,
            Scalar::RatFunc(f) => f.is_one(),
        }
    }

    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar> {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Prime { p, v }, Scalar::Prime { p: p2, v: w }) if p == p2 => {
                Ok(Scalar::Prime { p: *p, v: (v + w) % p })
            }
            (Scalar::RatFunc(a), Scalar::RatFunc(b)) => Ok(Scalar::RatFunc(a.add(b))),
            _ => Err(Error::ContextMismatch),
        }
    }

    pub fn checked_sub(&self, o: &Scalar) -> Result<Scalar> {
        self.checked_add(&o.neg())
    }

    pub fn checked_mul(&self, o: &Scalar) -> Result<Scalar> {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Prime { p, v }, Scalar::Prime { p: p2, v: w }) if p == p2 => {
                Ok(Scalar::Prime { p: *p, v: (v * w) % p })
            }
            (Scalar::RatFunc(a), Scalar::RatFunc(b)) => Ok(Scalar::RatFunc(a.mul(b))),
            _ => Err(Error::ContextMismatch),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { p, v } => Scalar::Prime { p: *p, v: (p - v) % p },
            Scalar::RatFunc(f) => Scalar::RatFunc(f.neg()),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Prime { p, v } => Scalar::Prime { p: *p, v: inv_mod(*v, *p) },
            Scalar::RatFunc(f) => Scalar::RatFunc(f.recip().unwrap()),
        })
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        if self.ctx() != o.ctx() {
            return Err(Error::ContextMismatch);
        }
        self.checked_mul(&o.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, k: i64) -> Result<Scalar> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.ctx().one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Heuristic size, used only to prefer cheap pivots in elimination.
    pub fn weight(&self) -> usize {
        match self {
            Scalar::Rational(a) => (a.numer().bits() + a.denom().bits()) as usize,
            Scalar::Prime { .. } => 0,
            Scalar::RatFunc(f) => f.weight(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        match self {
            Scalar::RatFunc(f) => Some(f),
            _ => None,
        }
    }

    /// `Some(k)` when the scalar is exactly `q^k` in ℚ(q).
    pub fn q_exponent(&self) -> Option<i64> {
        let f = self.as_ratfunc()?;
        let one = BigRational::one();
        match (f.num().as_monomial(), f.den().as_monomial()) {
            (Some((c, a)), Some((d, b))) if *c == one && *d == one => Some(a as i64 - b as i64),
            _ => None,
        }
    }
}

pub fn rational_to_string(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational '{}'", s));
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let a: BigInt = a.parse().map_err(|_| bad())?;
    let b: BigInt = b.parse().map_err(|_| bad())?;
    if b.is_zero() || b.is_negative() {
        return Err(bad());
    }
    Ok(BigRational::new(a, b))
}

impl Scalar {
    pub fn from_poly_ratio(num: Poly, den: Poly) -> Result<Scalar> {
        RatFunc::new(num, den).map(Scalar::RatFunc).ok_or(Error::DivisionByZero)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(a) => write!(f, "{}", a),
            Scalar::Prime { v, .. } => write!(f, "{}", v),
            Scalar::RatFunc(r) => write!(f, "{}", r),
        }
    }
}

// Operator sugar for code that has already checked contexts; mismatches panic.
impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.checked_add(o).expect("scalar context mismatch")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.checked_sub(o).expect("scalar context mismatch")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.checked_mul(o).expect("scalar context mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}
