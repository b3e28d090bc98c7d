use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// p-adic valuation of a fixed-precision element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PVal {
    Exact(u32),
    /// The element vanishes to the stored precision.
    AtLeast(u32),
}

impl PVal {
    pub fn value(&self) -> u32 {
        match *self {
            PVal::Exact(v) | PVal::AtLeast(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, PVal::Exact(_))
    }
}

/// An element of Z_p known modulo p^prec.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PAdicInt {
    p: u64,
    residue: BigUint,
    prec: u32,
}

pub fn pow_big(p: u64, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(p), e as usize)
}

impl PAdicInt {
    pub fn new(p: u64, value: &BigInt, prec: u32) -> Self {
        let m = BigInt::from(pow_big(p, prec));
        let r = value.mod_floor(&m);
        PAdicInt { p, residue: r.to_biguint().unwrap(), prec }
    }

    pub fn from_i128(p: u64, value: i128, prec: u32) -> Self {
        Self::new(p, &BigInt::from(value), prec)
    }

    pub fn zero(p: u64, prec: u32) -> Self {
        PAdicInt { p, residue: BigUint::zero(), prec }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        Self::from_i128(p, 1, prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn residue_u64(&self) -> u64 {
        self.residue.to_u64().expect("residue fits in u64")
    }

    /// Representative in (-p^prec/2, p^prec/2].
    pub fn symmetric(&self) -> BigInt {
        let m = BigInt::from(pow_big(self.p, self.prec));
        let r = BigInt::from(self.residue.clone());
        if &r * 2 > m {
            r - m
        } else {
            r
        }
    }

    fn modulus(&self) -> BigUint {
        pow_big(self.p, self.prec)
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let prec = prec.min(self.prec);
        PAdicInt { p: self.p, residue: &self.residue % pow_big(self.p, prec), prec }
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        PAdicInt { p: self.p, residue: (&self.residue + &o.residue) % pow_big(self.p, prec), prec }
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        PAdicInt { p: self.p, residue: (&m - &self.residue) % &m, prec: self.prec }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        PAdicInt { p: self.p, residue: (&self.residue * &o.residue) % pow_big(self.p, prec), prec }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.p, self.prec);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn valuation(&self) -> PVal {
        if self.residue.is_zero() {
            return PVal::AtLeast(self.prec);
        }
        let mut v = 0;
        let mut r = self.residue.clone();
        let p = BigUint::from(self.p);
        while (&r % &p).is_zero() {
            r /= &p;
            v += 1;
        }
        PVal::Exact(v)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == PVal::Exact(0)
    }

    /// Exact division by p^v; costs v digits of precision.
    pub fn div_p_pow(&self, v: u32) -> Result<Self> {
        if v > self.prec {
            return Err(Error::Domain(format!("cannot divide by p^{v} at precision {}", self.prec)));
        }
        let pv = pow_big(self.p, v);
        let (q, r) = self.residue.div_rem(&pv);
        if !r.is_zero() {
            return Err(Error::Domain(format!("element not divisible by p^{v}")));
        }
        Ok(PAdicInt { p: self.p, residue: q, prec: self.prec - v })
    }

    /// Inverse of a unit.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::Domain("inverse of a non-unit".into()));
        }
        let m = BigInt::from(self.modulus());
        let e = BigInt::from(self.residue.clone()).extended_gcd(&m);
        Ok(PAdicInt::new(self.p, &e.x, self.prec))
    }

    /// Division by an integer: its p-part by exact shifting, its unit part by inversion.
    pub fn div_int(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("division by zero".into()));
        }
        let (mut u, mut v) = (n, 0);
        while u % self.p == 0 {
            u /= self.p;
            v += 1;
        }
        let q = self.div_p_pow(v)?;
        Ok(q.mul(&PAdicInt::from_i128(self.p, u as i128, q.prec).inverse()?))
    }

    /// Equality on the common precision.
    pub fn congruent(&self, o: &Self) -> bool {
        let prec = self.prec.min(o.prec);
        self.with_prec(prec).residue == o.with_prec(prec).residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.residue.is_one() || self.prec == 0
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.residue, self.p, self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_and_division() {
        let x = PAdicInt::from_i128(3, 18, 6);
        assert_eq!(x.valuation(), PVal::Exact(2));
        let y = x.div_p_pow(2).unwrap();
        assert_eq!((y.residue_u64(), y.prec()), (2, 4));
        assert_eq!(PAdicInt::zero(3, 5).valuation(), PVal::AtLeast(5));
        assert!(x.div_p_pow(3).is_err());
    }

    #[test]
    fn inverse_and_symmetric() {
        let x = PAdicInt::from_i128(5, 2, 4);
        assert!(x.mul(&x.inverse().unwrap()).is_one());
        assert_eq!(PAdicInt::from_i128(3, -4, 5).symmetric(), BigInt::from(-4));
        assert_eq!(PAdicInt::from_i128(3, 12, 4).div_int(6).unwrap().residue_u64(), 2);
    }
}
