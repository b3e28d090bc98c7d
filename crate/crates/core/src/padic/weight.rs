use super::character::exp_p;
use super::int::{PAdicInt, PVal};
use super::series::{TSeries, Val};
use crate::arith::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightMode {
    Universal,
    Center(PAdicInt),
    /// Only v(beta) is known.
    Boundary(Rational),
}

/// A point (or the formal variable) of one component of weight space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpec {
    pub j: u32,
    pub mode: WeightMode,
}

impl WeightSpec {
    pub fn universal(j: u32) -> Self {
        WeightSpec { j, mode: WeightMode::Universal }
    }

    pub fn center(j: u32, beta: PAdicInt) -> Result<Self> {
        match beta.valuation() {
            PVal::Exact(v) if v < 1 => Err(Error::Domain("center weight needs v_p(beta) >= 1".into())),
            _ => Ok(WeightSpec { j, mode: WeightMode::Center(beta) }),
        }
    }

    pub fn boundary(j: u32, v: Rational) -> Result<Self> {
        if v <= Rational::from_integer(0) || v >= Rational::from_integer(1) {
            return Err(Error::Domain(format!("boundary valuation {v} outside (0, 1)")));
        }
        Ok(WeightSpec { j, mode: WeightMode::Boundary(v) })
    }
}

/// beta = exp(p)^k - 1, the T-coordinate of weight k with a conductor-1 character.
pub fn center_beta(p: u64, k: u32, prec: u32) -> PAdicInt {
    exp_p(p, prec).pow(k as u64).sub(&PAdicInt::one(p, prec))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Specialized {
    Value(PAdicInt),
    Valuation(Val),
}

pub fn specialize(a: &TSeries, w: &WeightSpec) -> Result<Specialized> {
    match &w.mode {
        WeightMode::Universal => Err(Error::Usage("cannot specialize at the universal weight".into())),
        WeightMode::Center(beta) => Ok(Specialized::Value(a.evaluate(beta)?)),
        WeightMode::Boundary(v) => Ok(Specialized::Valuation(a.valuation_at(*v))),
    }
}
