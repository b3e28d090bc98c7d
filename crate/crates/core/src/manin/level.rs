use super::cusp::Divisor;
use super::domain::{build_domain, FundamentalDomain};
use super::express::{express, ExpressContext, GroupWord, WordTerm};
use super::matrix::Mat2;
use super::path::UnimodPath;
use crate::arith::{ext_gcd, gcd, is_prime, mod_floor, mod_inv};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Coset representatives eta of Gamma_0(N p^m) in Gamma_0(N).
///
/// Index j < p^m is eta_j = (1 0; N j 1); index p^m + u is the matrix with bottom row
/// (N, d), d = p u mod p^m (for m = 1 this is eta_oo = (a b; N p)).
#[derive(Clone, Debug)]
pub struct LevelLift {
    pub n: i128,
    pub p: i128,
    pub m: u32,
    pub pm: i128,
    pub etas: Vec<Mat2>,
}

impl LevelLift {
    pub fn new(n: i128, p: i128, m: u32) -> Self {
        assert!(m >= 1 && gcd(n, p) == 1);
        let pm = p.pow(m);
        let mut etas: Vec<Mat2> = (0..pm).map(|j| Mat2::new(1, 0, n * j, 1)).collect();
        for u in 0..pm / p {
            let mut d = p * u;
            if d == 0 {
                d = pm;
            }
            while gcd(n, d) != 1 {
                d += pm;
            }
            let (_, x, y) = ext_gcd(d, n);
            // a d - b n = 1
            etas.push(Mat2::new(x, -y, n, d));
        }
        LevelLift { n, p, m, pm, etas }
    }

    /// Number s of cosets, p^{m-1}(p+1).
    pub fn count(&self) -> usize {
        self.etas.len()
    }

    pub fn coset_index(&self, g: &Mat2) -> usize {
        let c1 = g.c / self.n;
        let d = mod_floor(g.d, self.pm);
        if d % self.p != 0 {
            let j = mod_floor(c1, self.pm) * mod_inv(d, self.pm).unwrap() % self.pm;
            j as usize
        } else {
            let sigma = d * mod_inv(c1, self.pm).expect("bottom row is primitive") % self.pm;
            (self.pm + sigma / self.p) as usize
        }
    }

    /// gamma = delta . eta_j with delta in Gamma_0(N p^m).
    pub fn factor(&self, g: &Mat2) -> (Mat2, usize) {
        debug_assert!(g.in_gamma0(self.n));
        let j = self.coset_index(g);
        let delta = (*g * self.etas[j].inverse_unimodular()).normalize_pm();
        debug_assert!(delta.in_gamma0(self.n * self.pm), "{g} = {delta} eta_{j}");
        (delta, j)
    }

    /// Lifts a word over Gamma_0(N) in t generators to one over Gamma_0(N p^m) in s t generators,
    /// generator (i, j) having index i s + j.
    pub fn lift_word(&self, w: &GroupWord) -> GroupWord {
        let s = self.count();
        let terms = w
            .terms
            .iter()
            .map(|t| {
                let (delta, j) = self.factor(&t.gamma);
                WordTerm { gamma: delta, coeff: t.coeff, gen: t.gen * s + j }
            })
            .collect();
        GroupWord { terms }
    }
}

/// Membership in the monoid (Z_p^x Z_p; pZ_p pZ_p) for an integer matrix.
pub fn in_lower_monoid(g: &Mat2, p: i128) -> bool {
    g.det() != 0 && mod_floor(g.a, p) != 0 && mod_floor(g.c, p) == 0 && mod_floor(g.d, p) == 0
}

/// One summand s . phi(e_index) | g of (U_p phi)(e_i).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpTerm {
    pub a: i128,
    pub delta: Mat2,
    /// delta^{-1} gamma_a, the matrix acting on the coefficient module.
    pub g: Mat2,
    pub coeff: i64,
    pub index: usize,
}

/// Level-N domain, generators and the lift to level N p^m.
#[derive(Clone, Debug)]
pub struct ManinData {
    pub l: i128,
    pub p: i128,
    pub fd: FundamentalDomain,
    pub ctx: ExpressContext,
    pub lift: LevelLift,
}

impl ManinData {
    pub fn new(p: i128, l: i128, m: u32) -> Result<Self> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::Usage(format!("p = {p} must be an odd prime")));
        }
        if l < 2 || !is_prime(l as u64) || l % 12 != 11 {
            return Err(Error::Usage(format!("l = {l} must be a prime congruent to 11 mod 12")));
        }
        if l == p {
            return Err(Error::Usage("p and l must differ".into()));
        }
        let fd = build_domain(l * l)?;
        let ctx = ExpressContext::new(&fd)?;
        let lift = LevelLift::new(l * l, p, m);
        Ok(ManinData { l, p, fd, ctx, lift })
    }

    pub fn level(&self) -> i128 {
        self.fd.level
    }

    pub fn t(&self) -> usize {
        self.ctx.generators.len()
    }

    /// Number of generators s t at level N p^m.
    pub fn st(&self) -> usize {
        self.t() * self.lift.count()
    }

    /// The path e~_i = eta_j e_{i'} at level N p^m.
    pub fn lifted_generator(&self, index: usize) -> UnimodPath {
        let s = self.lift.count();
        self.ctx.generators[index / s].act(&self.lift.etas[index % s])
    }

    pub fn lifted_generators(&self) -> Vec<UnimodPath> {
        (0..self.st()).map(|i| self.lifted_generator(i)).collect()
    }

    pub fn express(&self, d: &Divisor) -> Result<GroupWord> {
        express(d, &self.fd, &self.ctx)
    }

    /// Word over Gamma_0(N p^m) for g . [e~_index], g any matrix preserving C.
    pub fn express_translate(&self, g: &Mat2, index: usize) -> Result<GroupWord> {
        let e = self.lifted_generator(index);
        let w = self.ctx.express_path(&self.fd, g.act(e.start), g.act(e.end))?;
        Ok(self.lift.lift_word(&w))
    }

    /// Decomposition of gamma_a e~_i, gamma_a = (1 a; 0 p), with monoid membership asserted.
    pub fn up_cosets(&self, index: usize, a: i128) -> Result<Vec<UpTerm>> {
        let gamma_a = Mat2::new(1, a, 0, self.p);
        let w = self.express_translate(&gamma_a, index)?;
        w.terms
            .into_iter()
            .map(|t| {
                let g = t.gamma.inverse_unimodular() * gamma_a;
                if !in_lower_monoid(&g, self.p) {
                    return Err(Error::Internal(format!("delta^-1 gamma_a = {g} outside the monoid")));
                }
                Ok(UpTerm { a, delta: t.gamma, g, coeff: t.coeff, index: t.gen })
            })
            .collect()
    }

    /// All U_p summands, grouped by source generator i.
    pub fn up_table(&self) -> Result<Vec<Vec<UpTerm>>> {
        (0..self.st())
            .map(|i| {
                let mut all = Vec::new();
                for a in 0..self.p {
                    all.extend(self.up_cosets(i, a)?);
                }
                Ok(all)
            })
            .collect()
    }
}
