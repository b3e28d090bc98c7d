use crate::manin::Mat2;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Nebentypus-style twist by a character of (Z/p^m)^x.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Epsilon {
    Trivial,
    /// The Legendre symbol mod p.
    Quadratic,
}

impl Epsilon {
    pub fn value(&self, a: i128, p: i128) -> i64 {
        match self {
            Epsilon::Trivial => 1,
            Epsilon::Quadratic => legendre(a, p),
        }
    }

    /// Component j of weight space containing the weight (k, eps).
    pub fn component(&self, k: u32, p: i128) -> u32 {
        let shift = match self {
            Epsilon::Trivial => 0,
            Epsilon::Quadratic => (p as u32 - 1) / 2,
        };
        (k + shift) % (p as u32 - 1)
    }
}

pub fn legendre(a: i128, p: i128) -> i64 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut r: i128 = 1;
    let (mut base, mut e) = (a, (p - 1) / 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub n: usize,
    pub entries: Vec<BigInt>,
}

impl QMatrix {
    pub fn zero(n: usize) -> Self {
        QMatrix { n, entries: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(d: &[BigInt]) -> Self {
        let mut m = Self::zero(d.len());
        for (i, x) in d.iter().enumerate() {
            m.entries[i * d.len() + i] = x.clone();
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.n + j]
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        let n = self.n;
        let mut r = QMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        *r.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        r
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_scalar(&self) -> Option<BigInt> {
        let s = self.get(0, 0).clone();
        for i in 0..self.n {
            for j in 0..self.n {
                let want = if i == j { s.clone() } else { BigInt::zero() };
                if *self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(s)
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

/// Matrix of psi -> psi | g on the dual basis of {1, z, .., z^k}.
///
/// Row i holds the monomial coefficients of g . z^i = eps(a) (a + cz)^{k-i} (b + dz)^i, so the
/// coefficient vector transforms as psi -> Q psi and Q(g1 g2) = Q(g2) Q(g1).
pub fn dual_action(g: &Mat2, k: usize, eps: Epsilon, p: i128) -> QMatrix {
    let lin_a = [BigInt::from(g.a), BigInt::from(g.c)];
    let lin_b = [BigInt::from(g.b), BigInt::from(g.d)];
    let e = BigInt::from(eps.value(g.a, p));
    let mut q = QMatrix::zero(k + 1);
    for i in 0..=k {
        let mut poly = vec![BigInt::one()];
        for _ in 0..(k - i) {
            poly = poly_mul(&poly, &lin_a);
        }
        for _ in 0..i {
            poly = poly_mul(&poly, &lin_b);
        }
        for (j, c) in poly.into_iter().enumerate() {
            *q.get_mut(i, j) = c * &e;
        }
    }
    q
}
