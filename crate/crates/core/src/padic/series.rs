use super::int::{PAdicInt, PVal};
use super::modulus::Modulus;
use crate::arith::Rational;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Certainty attached to a computed valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flag {
    Exact,
    /// True value is at least the recorded one (precision-limited).
    AtLeast,
    /// Ultrametric tie: recorded value is a lower bound only.
    Tie,
}

/// A valuation with its certainty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Val {
    pub value: Rational,
    pub flag: Flag,
}

impl Val {
    pub fn exact(value: Rational) -> Self {
        Val { value, flag: Flag::Exact }
    }

    pub fn at_least(value: Rational) -> Self {
        Val { value, flag: Flag::AtLeast }
    }
}

/// The truncation window (p^M, T^K).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub p: u64,
    pub m: u32,
    pub k: usize,
    pub pm: u64,
    pub modulus: Modulus,
}

impl Window {
    pub fn new(p: u64, m: u32, k: usize) -> Result<Self> {
        let pm = (p as u128).checked_pow(m).filter(|&x| x < (1u128 << 63));
        let Some(pm) = pm else {
            return Err(Error::Usage(format!("p^M = {p}^{m} must stay below 2^63")));
        };
        if m == 0 || k == 0 {
            return Err(Error::Usage("precision window must be nonempty".into()));
        }
        Ok(Window { p, m, k, pm: pm as u64, modulus: Modulus::new(pm as u64) })
    }

    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.pm as i128) as u64
    }
}

/// Element of Z_p[[T]] modulo (p^M, T^K); coefficients are plain residues mod p^M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    pub w: Window,
    pub coeffs: Vec<u64>,
}

fn vp_u64(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// min_m (v_p(b_m) + m v) for coefficients known to individual precisions; terms past the
/// list contribute at least len * v.
pub fn point_valuation(coeffs: &[PAdicInt], v: Rational) -> Val {
    let mut bound = v * Rational::from_integer(coeffs.len() as i64);
    let mut best: Option<(Rational, usize)> = None;
    for (m, c) in coeffs.iter().enumerate() {
        let shift = v * Rational::from_integer(m as i64);
        match c.valuation() {
            PVal::AtLeast(prec) => bound = bound.min(Rational::from_integer(prec as i64) + shift),
            PVal::Exact(e) => {
                let val = Rational::from_integer(e as i64) + shift;
                best = match best {
                    Some((b, n)) if b < val => Some((b, n)),
                    Some((b, n)) if b == val => Some((b, n + 1)),
                    _ => Some((val, 1)),
                };
            }
        }
    }
    match best {
        Some((b, _)) if b >= bound => Val::at_least(bound),
        Some((b, 1)) => Val::exact(b),
        Some((b, _)) => Val { value: b, flag: Flag::Tie },
        None => Val::at_least(bound),
    }
}

impl TSeries {
    pub fn zero(w: Window) -> Self {
        TSeries { w, coeffs: vec![0; w.k] }
    }

    pub fn constant(w: Window, c: i128) -> Self {
        let mut s = Self::zero(w);
        s.coeffs[0] = w.reduce(c);
        s
    }

    pub fn one(w: Window) -> Self {
        Self::constant(w, 1)
    }

    /// T itself (zero when K = 1).
    pub fn t(w: Window) -> Self {
        let mut s = Self::zero(w);
        if w.k > 1 {
            s.coeffs[1] = 1;
        }
        s
    }

    pub fn from_coeffs(w: Window, c: &[i128]) -> Self {
        let mut s = Self::zero(w);
        for (slot, &x) in s.coeffs.iter_mut().zip(c) {
            *slot = w.reduce(x);
        }
        s
    }

    /// The same series in a window with fewer T-coefficients.
    pub fn truncate(&self, k: usize) -> Self {
        let k = k.min(self.w.k).max(1);
        let w = Window { k, ..self.w };
        TSeries { w, coeffs: self.coeffs[..k].to_vec() }
    }

    pub fn p_prec(&self) -> u32 {
        self.w.m
    }

    pub fn t_prec(&self) -> usize {
        self.w.k
    }

    pub fn coeff(&self, m: usize) -> PAdicInt {
        PAdicInt::from_i128(self.w.p, self.coeffs[m] as i128, self.w.m)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let md = &self.w.modulus;
        TSeries { w: self.w, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| md.add(a, b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let md = &self.w.modulus;
        TSeries { w: self.w, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| md.sub(a, b)).collect() }
    }

    pub fn neg(&self) -> Self {
        let md = &self.w.modulus;
        TSeries { w: self.w, coeffs: self.coeffs.iter().map(|&a| md.neg(a)).collect() }
    }

    pub fn scale(&self, c: i128) -> Self {
        let md = &self.w.modulus;
        let c = md.to_mont(self.w.reduce(c));
        TSeries { w: self.w, coeffs: self.coeffs.iter().map(|&a| md.mul(a, c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let md = &self.w.modulus;
        let k = self.w.k;
        let b: Vec<u64> = o.coeffs.iter().map(|&x| md.to_mont(x)).collect();
        let mut out = vec![0u64; k];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for j in 0..k - i {
                // plain * mont -> plain
                out[i + j] = md.add(out[i + j], md.mul(a, b[j]));
            }
        }
        TSeries { w: self.w, coeffs: out }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.w);
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

    /// (p, T)-adic valuation min_m (v_p(b_m) + m).
    pub fn mval(&self) -> Val {
        let bound = (self.w.m as usize).min(self.w.k) as i64;
        let best = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(m, &c)| vp_u64(c, self.w.p) as i64 + m as i64)
            .min();
        match best {
            Some(v) if v < bound => Val::exact(Rational::from_integer(v)),
            _ => Val::at_least(Rational::from_integer(bound)),
        }
    }

    /// Valuation at a point of valuation v: min_m (v_p(b_m) + m v), with tie and window flags.
    pub fn valuation_at(&self, v: Rational) -> Val {
        let coeffs: Vec<PAdicInt> = (0..self.w.k).map(|m| self.coeff(m)).collect();
        point_valuation(&coeffs, v)
    }

    /// Sum b_m beta^m for v_p(beta) >= 1, to the precision the window certifies.
    pub fn evaluate(&self, beta: &PAdicInt) -> Result<PAdicInt> {
        let vb = match beta.valuation() {
            PVal::Exact(v) | PVal::AtLeast(v) => v,
        };
        if vb < 1 {
            return Err(Error::Domain("center specialization needs v_p(beta) >= 1".into()));
        }
        let tail = (vb as u64).saturating_mul(self.w.k as u64).min(u32::MAX as u64) as u32;
        let prec = self.w.m.min(beta.prec()).min(tail);
        let beta = beta.with_prec(prec);
        let mut acc = PAdicInt::zero(self.w.p, prec);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&beta).add(&PAdicInt::from_i128(self.w.p, c as i128, prec));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn mval_examples() {
        let w = Window::new(3, 6, 8).unwrap();
        assert_eq!(TSeries::from_coeffs(w, &[1, 1]).mval(), Val::exact(q(0, 1)));
        assert_eq!(TSeries::from_coeffs(w, &[0, 0, 3]).mval(), Val::exact(q(3, 1)));
        assert_eq!(TSeries::zero(w).mval(), Val::at_least(q(6, 1)));
        let w = Window::new(3, 6, 4).unwrap();
        assert_eq!(TSeries::from_coeffs(w, &[729 * 2]).mval(), Val::at_least(q(4, 1)));
    }

    #[test]
    fn boundary_valuations() {
        let w = Window::new(3, 8, 10).unwrap();
        let half = q(1, 2);
        assert_eq!(TSeries::from_coeffs(w, &[1, 1]).valuation_at(half), Val::exact(q(0, 1)));
        assert_eq!(TSeries::from_coeffs(w, &[0, 0, 0, 1]).valuation_at(half), Val::exact(q(3, 2)));
        // p T + T^2: the T^2 term alone gives 1
        assert_eq!(TSeries::from_coeffs(w, &[0, 3, 1]).valuation_at(half), Val::exact(q(1, 1)));
        let tie = TSeries::from_coeffs(w, &[0, 3, 0, 1]).valuation_at(half);
        assert_eq!(tie, Val { value: q(3, 2), flag: Flag::Tie });
        let short = Window::new(3, 8, 2).unwrap();
        assert_eq!(TSeries::from_coeffs(short, &[0, 9]).valuation_at(half), Val::at_least(q(1, 1)));
    }
}
