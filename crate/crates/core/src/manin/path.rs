use super::cusp::{Cusp, Divisor};
use super::matrix::Mat2;
use crate::arith::ext_gcd;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Oriented geodesic between two cusps whose matrix (a b; c d) = (end | start) has det +-1.
///
/// Column signs are canonical (the cusps are normalized), so two paths are equal exactly
/// when their matrices agree mod +-1 on each column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnimodPath {
    pub end: Cusp,
    pub start: Cusp,
}

impl UnimodPath {
    pub fn new(start: Cusp, end: Cusp) -> Self {
        let p = UnimodPath { end, start };
        let det = p.matrix().det();
        assert!(det == 1 || det == -1, "path {start} -> {end} is not unimodular");
        p
    }

    /// Path from b/d to a/c.
    pub fn from_matrix(g: Mat2) -> Self {
        Self::new(Cusp::new(g.b, g.d), Cusp::new(g.a, g.c))
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.end.num(), self.start.num(), self.end.den(), self.start.den())
    }

    /// The element g of SL_2(Z) (up to sign) with g.0 = start and g.oo = end.
    pub fn sl2(&self) -> Mat2 {
        let m = self.matrix();
        if m.det() == 1 {
            m
        } else {
            Mat2::new(m.a, -m.b, m.c, -m.d)
        }
    }

    pub fn reverse(&self) -> Self {
        UnimodPath { end: self.start, start: self.end }
    }

    pub fn boundary(&self) -> Divisor {
        Divisor::path(self.start, self.end)
    }

    pub fn act(&self, g: &Mat2) -> Self {
        Self::new(g.act(self.start), g.act(self.end))
    }

    pub fn touches(&self, x: Cusp) -> bool {
        self.start == x || self.end == x
    }
}

impl fmt::Display for UnimodPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.start, self.end)
    }
}

/// Some g in SL_2(Z) with g.oo = x.
pub fn sl2_sending_infinity_to(x: Cusp) -> Mat2 {
    let (a, c) = (x.num(), x.den());
    let (_, s, t) = ext_gcd(a, c);
    Mat2::new(a, -t, c, s)
}

/// Continued-fraction chain of unimodular paths from `from` to `to`.
///
/// The chain is the image under h of the convergent chain oo -> p_0/q_0 -> ... of h^{-1}(to),
/// where h sends oo to `from`.
pub fn cf_decompose(from: Cusp, to: Cusp) -> Vec<UnimodPath> {
    if from == to {
        return Vec::new();
    }
    let h = sl2_sending_infinity_to(from);
    let y = h.inverse_unimodular().act(to);
    debug_assert!(!y.is_infinity());
    let (mut r, mut q) = (y.num(), y.den());
    let (mut p_prev, mut q_prev) = (1i128, 0i128);
    let (mut p_cur, mut q_cur);
    let a0 = r.div_euclid(q);
    p_cur = a0;
    q_cur = 1;
    let mut verts = vec![Cusp::INFINITY, Cusp::new(p_cur, q_cur)];
    let rem = r - a0 * q;
    r = q;
    q = rem;
    while q != 0 {
        let ai = r.div_euclid(q);
        let rem = r - ai * q;
        let p_next = ai * p_cur + p_prev;
        let q_next = ai * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        verts.push(Cusp::new(p_cur, q_cur));
        r = q;
        q = rem;
    }
    verts
        .windows(2)
        .map(|w| UnimodPath::new(h.act(w[0]), h.act(w[1])))
        .collect()
}
