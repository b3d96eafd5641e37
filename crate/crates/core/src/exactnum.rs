//! Exact arithmetic in Q(√q).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `a + b·√q` with `a`, `b` rational and `q` a fixed positive integer.
///
/// When `q` is a perfect square `b` is always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    q: u64,
}

fn perfect_sqrt(q: u64) -> Option<u64> {
    let r = q.sqrt();
    (r * r == q).then_some(r)
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational, q: u64) -> Self {
        assert!(q > 0, "q must be positive");
        match perfect_sqrt(q) {
            Some(r) if !b.is_zero() => {
                Scalar { a: a + b * BigRational::from_integer(r.into()), b: BigRational::zero(), q }
            }
            _ => Scalar { a, b, q },
        }
    }

    pub fn zero(q: u64) -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero(), q)
    }

    pub fn one(q: u64) -> Self {
        Scalar::from_int(1, q)
    }

    pub fn from_int(n: i64, q: u64) -> Self {
        Scalar::from_rational(BigRational::from_integer(n.into()), q)
    }

    pub fn from_bigint(n: BigInt, q: u64) -> Self {
        Scalar::from_rational(BigRational::from_integer(n), q)
    }

    pub fn from_rational(r: BigRational, q: u64) -> Self {
        Scalar::new(r, BigRational::zero(), q)
    }

    pub fn ratio(n: i64, d: i64, q: u64) -> Self {
        Scalar::from_rational(BigRational::new(n.into(), d.into()), q)
    }

    /// `v^k` where `v = √q`.
    pub fn v_pow(k: i64, q: u64) -> Self {
        let qi = BigInt::from(q);
        let half = k.div_euclid(2);
        let odd = k.rem_euclid(2) == 1;
        let mag = num_traits::pow(qi, half.unsigned_abs() as usize);
        let p = if half >= 0 { BigRational::from_integer(mag) } else { BigRational::new(BigInt::one(), mag) };
        if odd {
            Scalar::new(BigRational::zero(), p, q)
        } else {
            Scalar::new(p, BigRational::zero(), q)
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt_part(&self) -> &BigRational {
        &self.b
    }

    /// The value as a rational when the √q part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // (a + b√q)^-1 = (a - b√q) / (a² - q b²); the norm is nonzero unless q is a square
        let qr = BigRational::from_integer(self.q.into());
        let norm = &self.a * &self.a - &qr * &self.b * &self.b;
        Ok(Scalar::new(&self.a / &norm, -&self.b / &norm, self.q))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one(self.q);
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn check_q(&self, other: &Scalar) {
        assert_eq!(self.q, other.q, "mixing scalars over different q");
    }
}

fn rat_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√{}", self.b, self.q),
            (false, false) => {
                let sign = if self.b.is_negative() { "-" } else { "+" };
                write!(f, "{} {} {}√{}", self.a, sign, self.b.abs(), self.q)
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("a", &rat_str(&self.a))?;
        m.serialize_entry("b", &rat_str(&self.b))?;
        m.end()
    }
}

/// Wire form of a scalar; `q` comes from the surrounding context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarRepr {
    pub a: String,
    pub b: String,
}

impl ScalarRepr {
    pub fn into_scalar(self, q: u64) -> Result<Scalar> {
        let a = parse_rat(&self.a).ok_or_else(|| Error::Invalid(format!("bad rational {:?}", self.a)))?;
        let b = parse_rat(&self.b).ok_or_else(|| Error::Invalid(format!("bad rational {:?}", self.b)))?;
        Ok(Scalar::new(a, b, q))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    /// Deserializes with `q` taken from a `"q"` field, defaulting to 2 when absent.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: String,
            b: String,
            q: Option<u64>,
        }
        let raw = Raw::deserialize(d)?;
        ScalarRepr { a: raw.a, b: raw.b }.into_scalar(raw.q.unwrap_or(2)).map_err(D::Error::custom)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.check_q(o);
        Scalar { a: &self.a + &o.a, b: &self.b + &o.b, q: self.q }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.check_q(o);
        Scalar { a: &self.a - &o.a, b: &self.b - &o.b, q: self.q }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.check_q(o);
        let qr = BigRational::from_integer(self.q.into());
        let a = &self.a * &o.a + qr * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        Scalar::new(a, b, self.q)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -&self.a, b: -&self.b, q: self.q }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.check_q(o);
        self.a += &o.a;
        self.b += &o.b;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self += &o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.check_q(o);
        self.a -= &o.a;
        self.b -= &o.b;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}
