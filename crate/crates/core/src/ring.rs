//! Coefficient rings: the integers and prime fields.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Coefficient ring. Elements are carried as `i64`; over `F_p` they are kept
/// reduced into `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integers,
    PrimeField(u64),
}

impl Ring {
    pub const F2: Ring = Ring::PrimeField(2);

    /// Builds `F_p`, rejecting composite or tiny moduli.
    pub fn prime_field(p: u64) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::Input(format!("{p} is not prime")));
        }
        if p > (1 << 31) {
            return Err(Error::Input(format!("prime {p} too large for exact i64 products")));
        }
        Ok(Ring::PrimeField(p))
    }

    pub fn is_field(self) -> bool {
        matches!(self, Ring::PrimeField(_))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Ring::Integers => 0,
            Ring::PrimeField(p) => p,
        }
    }

    #[inline]
    pub fn norm(self, a: i64) -> i64 {
        match self {
            Ring::Integers => a,
            Ring::PrimeField(p) => a.rem_euclid(p as i64),
        }
    }

    #[inline]
    pub fn add(self, a: i64, b: i64) -> i64 {
        match self {
            Ring::Integers => a.checked_add(b).expect("integer overflow in addition"),
            Ring::PrimeField(p) => (a + b).rem_euclid(p as i64),
        }
    }

    #[inline]
    pub fn sub(self, a: i64, b: i64) -> i64 {
        match self {
            Ring::Integers => a.checked_sub(b).expect("integer overflow in subtraction"),
            Ring::PrimeField(p) => (a - b).rem_euclid(p as i64),
        }
    }

    #[inline]
    pub fn mul(self, a: i64, b: i64) -> i64 {
        match self {
            Ring::Integers => a.checked_mul(b).expect("integer overflow in product"),
            Ring::PrimeField(p) => (a * b).rem_euclid(p as i64),
        }
    }

    #[inline]
    pub fn neg(self, a: i64) -> i64 {
        self.norm(-a)
    }

    /// `(-1)^k` as a ring element.
    #[inline]
    pub fn sign(self, k: usize) -> i64 {
        self.norm(if k % 2 == 0 { 1 } else { -1 })
    }

    pub fn is_unit(self, a: i64) -> bool {
        match self {
            Ring::Integers => a == 1 || a == -1,
            Ring::PrimeField(_) => self.norm(a) != 0,
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(self, a: i64) -> i64 {
        match self {
            Ring::Integers => {
                assert!(a == 1 || a == -1, "{a} is not a unit in Z");
                a
            }
            Ring::PrimeField(p) => {
                let a = self.norm(a);
                assert!(a != 0, "zero has no inverse");
                pow_mod(a as u64, p - 2, p) as i64
            }
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Ring> {
        if s == "Z" {
            return Ok(Ring::Integers);
        }
        if let Some(rest) = s.strip_prefix('F') {
            let p: u64 = rest
                .parse()
                .map_err(|_| Error::Input(format!("bad ring tag {s:?}")))?;
            return Ring::prime_field(p);
        }
        Err(Error::Input(format!("bad ring tag {s:?}")))
    }
}

impl serde::Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Ring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Ring, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for r in [Ring::Integers, Ring::F2, Ring::PrimeField(7)] {
            assert_eq!(r.to_string().parse::<Ring>().unwrap(), r);
        }
        assert!("F4".parse::<Ring>().is_err());
        assert!("Q".parse::<Ring>().is_err());
    }

    #[test]
    fn field_inverse() {
        let r = Ring::PrimeField(7);
        for a in 1..7 {
            assert_eq!(r.mul(a, r.inv(a)), 1);
        }
        assert_eq!(r.sign(3), 6);
    }
}
