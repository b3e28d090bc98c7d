use super::cusp::Cusp;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Mul;

/// Integer 2x2 matrix (a b; c d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1, 0, 0, 1);
    /// (1 1; 0 1)
    pub const TRANSLATE: Mat2 = Mat2::new(1, 1, 0, 1);

    pub const fn new(a: i128, b: i128, c: i128, d: i128) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> i128 {
        self.a * self.d - self.b * self.c
    }

    /// (d -b; -c a), equal to det * inverse.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    /// Exact inverse of a determinant +-1 matrix.
    pub fn inverse_unimodular(&self) -> Mat2 {
        let det = self.det();
        assert!(det == 1 || det == -1, "matrix {self} is not unimodular");
        let adj = self.adjugate();
        Mat2::new(adj.a * det, adj.b * det, adj.c * det, adj.d * det)
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// Canonical representative mod +-1: first nonzero entry of the first column positive.
    pub fn normalize_pm(&self) -> Mat2 {
        if self.a < 0 || (self.a == 0 && self.c < 0) {
            self.neg()
        } else {
            *self
        }
    }

    /// Sign representative used when acting on coefficient modules: the upper-left entry mod p
    /// lies in 1..=(p-1)/2 (for p = 3, a = 1 mod 3, which is multiplicative on Sigma_0(3)).
    /// Matrices with a = 0 mod p are returned unchanged.
    pub fn sign_lift(&self, p: i128) -> Mat2 {
        let r = self.a.rem_euclid(p);
        if r > (p - 1) / 2 {
            self.neg()
        } else {
            *self
        }
    }

    pub fn translate(k: i128) -> Mat2 {
        Mat2::new(1, k, 0, 1)
    }

    /// Mobius action on a cusp; valid for any nonsingular matrix.
    pub fn act(&self, x: Cusp) -> Cusp {
        let (n, d) = (x.num(), x.den());
        Cusp::new(self.a * n + self.b * d, self.c * n + self.d * d)
    }

    pub fn in_gamma0(&self, n: i128) -> bool {
        self.det() == 1 && self.c % n == 0
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}
