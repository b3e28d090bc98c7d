use crate::arith::gcd;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Point of P^1(Q) stored as a reduced fraction a/c with c >= 0; infinity is 1/0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cusp {
    num: i128,
    den: i128,
}

impl Cusp {
    pub const INFINITY: Cusp = Cusp { num: 1, den: 0 };

    pub fn new(a: i128, c: i128) -> Self {
        assert!(a != 0 || c != 0, "0/0 is not a cusp");
        let g = gcd(a, c);
        let (mut a, mut c) = (a / g, c / g);
        if c < 0 || (c == 0 && a < 0) {
            a = -a;
            c = -c;
        }
        Cusp { num: a, den: c }
    }

    pub fn int(n: i128) -> Self {
        Cusp { num: n, den: 1 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn is_infinity(&self) -> bool {
        self.den == 0
    }

    /// Whether the cusp lies in the Gamma_0(n)-orbit of infinity.
    pub fn equivalent_to_infinity(&self, n: i128) -> bool {
        self.den % n == 0
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 0 {
            f.write_str("oo")
        } else if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Finite formal Z-combination of cusps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divisor {
    support: BTreeMap<Cusp, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    /// {to} - {from}
    pub fn path(from: Cusp, to: Cusp) -> Self {
        let mut d = Self::zero();
        d.add_point(to, 1);
        d.add_point(from, -1);
        d
    }

    pub fn add_point(&mut self, x: Cusp, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.support.entry(x).or_insert(0);
        *e += n;
        if *e == 0 {
            self.support.remove(&x);
        }
    }

    pub fn add_scaled(&mut self, other: &Divisor, n: i64) {
        for (&x, &m) in &other.support {
            self.add_point(x, m * n);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.support.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cusp, &i64)> {
        self.support.iter()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.support.iter().map(|(x, n)| format!("{n}{{{x}}}")).collect();
        f.write_str(&parts.join(" + "))
    }
}
