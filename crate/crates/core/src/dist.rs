//! Mahler-basis matrices of the monoid action on integral distributions.
//!
//! For g = (a b; c d) with a a unit and p | c, functions on Z_p carry the action
//! (g . f)(z) = chi(a + cz) f((b + dz)/(a + cz)). Row m of the distribution-side matrix P(g)
//! holds the Mahler coefficients of g . binom(z, m), so a distribution with coefficient vector
//! c (c_n = mu(binom(z, n))) is sent to P c, and P(g1 g2) = P(g2) P(g1).

use crate::arith::vp_factorial;
use crate::error::{Error, Result};
use crate::manin::Mat2;
use crate::padic::{char_working_prec, universal_char, Flag, PAdicInt, TSeries, Val, Window};
use crate::verdict::{Tally, Verdict};
use num_bigint::BigInt;
use std::collections::HashMap;

/// Memoized values of the universal character on one component.
#[derive(Clone, Debug)]
pub struct CharCache {
    pub w: Window,
    pub j: u32,
    key_mod: i128,
    map: HashMap<i128, TSeries>,
}

impl CharCache {
    pub fn new(w: Window, j: u32) -> Self {
        // the character value only depends on u modulo p^prec
        let prec = char_working_prec(&w);
        let key_mod = (w.p as i128).checked_pow(prec).unwrap_or(0);
        CharCache { w, j, key_mod, map: HashMap::new() }
    }

    pub fn get(&mut self, u: i128) -> Result<TSeries> {
        let key = if self.key_mod > 0 { u.rem_euclid(self.key_mod) } else { u };
        if let Some(v) = self.map.get(&key) {
            return Ok(v.clone());
        }
        let v = universal_char(&BigInt::from(u), self.j, &self.w)?;
        self.map.insert(key, v.clone());
        Ok(v)
    }
}

/// Which estimate of the entry decay applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// a unit, p | c, p | d.
    LowerMonoid,
    /// a unit, p | c.
    Sigma0,
}

impl Regime {
    pub fn of(g: &Mat2, p: i128) -> Option<Regime> {
        if g.det() == 0 || g.a.rem_euclid(p) == 0 || g.c.rem_euclid(p) != 0 {
            None
        } else if g.d.rem_euclid(p) == 0 {
            Some(Regime::LowerMonoid)
        } else {
            Some(Regime::Sigma0)
        }
    }

    /// Lower bound for mval(P_{m,n}).
    pub fn bound(&self, m: usize, n: usize, p: usize) -> i64 {
        let b = match self {
            Regime::LowerMonoid => n as i64 - (m / p) as i64,
            Regime::Sigma0 => n as i64 - m as i64,
        };
        b.max(0)
    }
}

/// Three-valued comparison of a computed valuation with a required lower bound.
pub fn check_bound(v: Val, bound: i64) -> Verdict {
    let ok = v.value >= crate::arith::Rational::from_integer(bound);
    match (v.flag, ok) {
        (_, true) => Verdict::Pass,
        (Flag::Exact, false) => Verdict::Fail,
        _ => Verdict::Inconclusive,
    }
}

/// Mahler coefficients from the values f(0), .., f(n-1): the iterated forward differences at 0.
pub fn mahler_coefficients(values: &[TSeries]) -> Vec<TSeries> {
    let mut work = values.to_vec();
    let mut out = Vec::with_capacity(values.len());
    for len in (1..=values.len()).rev() {
        out.push(work[0].clone());
        for i in 0..len - 1 {
            work[i] = work[i + 1].sub(&work[i]);
        }
    }
    out
}

/// Values sum_n c_n binom(z, n) at z = 0..len.
pub fn mahler_evaluate(coeffs: &[TSeries], len: usize) -> Vec<TSeries> {
    (0..len)
        .map(|z| {
            let mut acc = TSeries::zero(coeffs[0].w);
            let mut binom: i128 = 1;
            for (n, c) in coeffs.iter().enumerate().take(z + 1) {
                acc = acc.add(&c.scale(binom));
                binom = binom * (z - n) as i128 / (n + 1) as i128;
            }
            acc
        })
        .collect()
}

/// Samples chi(a + cz) binom((b + dz)/(a + cz), m) for m < n_rows at z = 0..n_samples.
fn sample_rows(g: &Mat2, cache: &mut CharCache, n_rows: usize, n_samples: usize) -> Result<(Vec<Vec<TSeries>>, u32)> {
    let w = cache.w;
    let p = w.p;
    let guard = vp_factorial(n_rows.saturating_sub(1) as u64, p);
    let prec = w.m + guard;
    let mut rows = vec![Vec::with_capacity(n_samples); n_rows];
    for z in 0..n_samples as i128 {
        let u = g.a + g.c * z;
        let chi = cache.get(u)?;
        let x = PAdicInt::from_i128(p, g.b + g.d * z, prec).mul(&PAdicInt::from_i128(p, u, prec).inverse()?);
        let mut num = PAdicInt::one(p, prec);
        let mut unit_fact = PAdicInt::one(p, prec);
        let mut v_fact = 0;
        for (m, row) in rows.iter_mut().enumerate() {
            if m > 0 {
                num = num.mul(&x.sub(&PAdicInt::from_i128(p, m as i128 - 1, prec)));
                let mut q = m as u64;
                while q % p == 0 {
                    q /= p;
                    v_fact += 1;
                }
                unit_fact = unit_fact.mul(&PAdicInt::from_i128(p, q as i128, prec));
            }
            let binom = num.div_p_pow(v_fact)?.mul(&unit_fact.inverse()?);
            let r = (binom.residue() % num_bigint::BigUint::from(w.pm)).try_into().unwrap_or(0u64);
            row.push(chi.scale(r as i128));
        }
    }
    Ok((rows, guard))
}

/// Mahler coefficients 0..n_cols of g . binom(z, n).
pub fn act_on_basis(g: &Mat2, n: usize, cache: &mut CharCache, n_cols: usize) -> Result<Vec<TSeries>> {
    if Regime::of(g, cache.w.p as i128).is_none() {
        return Err(Error::Domain(format!("{g} is outside the monoid (a unit, c = 0 mod p)")));
    }
    let (rows, _) = sample_rows(g, cache, n + 1, n_cols)?;
    Ok(mahler_coefficients(&rows[n]))
}

/// Truncated matrix of the action, with the entry-decay verdicts.
#[derive(Clone, Debug)]
pub struct ActMatrix {
    pub gamma: Mat2,
    pub j: u32,
    pub n_rows: usize,
    pub n_cols: usize,
    /// entries[m][n] = P_{m,n}
    pub entries: Vec<Vec<TSeries>>,
    /// Guard digits reserved for the binomials, v_p((n_rows - 1)!).
    pub guard: u32,
    pub sigma0: Tally,
    /// Present when g lies in the lower monoid.
    pub monoid: Option<Tally>,
}

impl ActMatrix {
    pub fn window(&self) -> Window {
        self.entries[0][0].w
    }

    /// Product self * o on the common window (rows of self, columns of o).
    pub fn matmul(&self, o: &ActMatrix) -> Vec<Vec<TSeries>> {
        let w = self.window();
        let inner = self.n_cols.min(o.n_rows);
        (0..self.n_rows)
            .map(|i| {
                (0..o.n_cols)
                    .map(|j| {
                        let mut acc = TSeries::zero(w);
                        for k in 0..inner {
                            acc = acc.add(&self.entries[i][k].mul(&o.entries[k][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn act_matrix(g: &Mat2, cache: &mut CharCache, n_rows: usize, n_cols: usize) -> Result<ActMatrix> {
    let p = cache.w.p;
    let Some(regime) = Regime::of(g, p as i128) else {
        return Err(Error::Domain(format!("{g} is outside the monoid (a unit, c = 0 mod p)")));
    };
    let (rows, guard) = sample_rows(g, cache, n_rows, n_cols)?;
    let entries: Vec<Vec<TSeries>> = rows.iter().map(|r| mahler_coefficients(r)).collect();
    let mut sigma0 = Tally::default();
    let mut monoid = (regime == Regime::LowerMonoid).then(Tally::default);
    for (m, row) in entries.iter().enumerate() {
        for (n, e) in row.iter().enumerate() {
            let v = e.mval();
            sigma0.add(check_bound(v, Regime::Sigma0.bound(m, n, p as usize)));
            if let Some(t) = monoid.as_mut() {
                t.add(check_bound(v, Regime::LowerMonoid.bound(m, n, p as usize)));
            }
        }
    }
    if sigma0.fail > 0 || monoid.map_or(false, |t| t.fail > 0) {
        return Err(Error::Internal(format!("entry decay estimate fails for {g}; action convention broken")));
    }
    Ok(ActMatrix { gamma: *g, j: cache.j, n_rows, n_cols, entries, guard, sigma0, monoid })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cache() -> CharCache {
        CharCache::new(Window::new(3, 8, 12).unwrap(), 0)
    }

    #[test]
    fn identity_gives_unit_vectors() {
        let mut c = cache();
        let a = act_matrix(&Mat2::IDENTITY, &mut c, 6, 6).unwrap();
        for m in 0..6 {
            for n in 0..6 {
                let want = if m == n { TSeries::one(c.w) } else { TSeries::zero(c.w) };
                assert_eq!(a.entries[m][n], want);
            }
        }
    }

    #[test]
    fn scaling_fixes_constants() {
        let mut c = cache();
        let col = act_on_basis(&Mat2::new(1, 0, 0, 3), 0, &mut c, 5).unwrap();
        assert_eq!(col[0], TSeries::one(c.w));
        assert!(col[1..].iter().all(|s| s.is_zero()));
    }

    #[test]
    fn translation_is_pascal() {
        let mut c = cache();
        let a = act_matrix(&Mat2::new(1, 1, 0, 1), &mut c, 7, 7).unwrap();
        for m in 1..7 {
            let nonzero: Vec<usize> = (0..7).filter(|&n| !a.entries[m][n].is_zero()).collect();
            assert_eq!(nonzero, vec![m - 1, m]);
            assert_eq!(a.entries[m][m - 1], TSeries::one(c.w));
        }
    }

    #[test]
    fn outside_monoid_is_rejected() {
        let mut c = cache();
        assert!(act_matrix(&Mat2::new(3, 1, 1, 1), &mut c, 3, 3).is_err());
        assert!(act_matrix(&Mat2::new(1, 0, 1, 1), &mut c, 3, 3).is_err());
    }
}
