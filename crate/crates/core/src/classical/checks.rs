use super::action::{dual_action, Epsilon, QMatrix};
use super::up::{classical_up, expected_dimension, slopes, Slope};
use crate::arith::{mod_inv, vp_factorial, Rational};
use crate::error::{Error, Result};
use crate::manin::{Mat2, ManinData};
use crate::padic::{center_beta, Window};
use crate::spectral::{assemble_up, degree_level};
use crate::verdict::Verdict;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// W = (a p^m, b; N p^m, p^m) with a p^m - b N = 1; `shift` moves a by multiples of N.
pub fn atkin_lehner_matrix(n: i128, p: i128, m: u32, shift: i128) -> Mat2 {
    let pm = p.pow(m);
    let a = mod_inv(pm, n).expect("p is prime to N") + shift * n;
    let b = (a * pm - 1) / n;
    Mat2::new(a * pm, b, n * pm, pm)
}

/// psi -> psi | W on (V^k)^{st}; the twist only sees the Gamma_0 part of delta^{-1} W.
pub fn w_operator(md: &ManinData, w: &Mat2, k: usize, eps: Epsilon) -> Result<QMatrix> {
    let p = md.p;
    let b = k + 1;
    let mut out = QMatrix::zero(md.st() * b);
    for i in 0..md.st() {
        for t in md.express_translate(w, i)?.terms {
            let d = t.gamma.inverse_unimodular().sign_lift(p);
            let q = dual_action(&(d * *w), k, Epsilon::Trivial, p);
            let c = BigInt::from(t.coeff * eps.value(d.a, p));
            for r in 0..b {
                for s in 0..b {
                    let e = q.get(r, s);
                    if !e.is_zero() {
                        *out.get_mut(i * b + r, t.gen * b + s) += e * &c;
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtkinLehnerReport {
    pub k: usize,
    pub dim: usize,
    pub expected_dim: usize,
    /// Ascending.
    pub slopes: Vec<Slope>,
    /// Indices i with a_i + b_{d-1-i} != k + 1.
    pub unpaired: Vec<usize>,
    pub pairing: Verdict,
    pub mult_ordinary: usize,
    pub mult_critical: usize,
    pub multiplicity: Verdict,
    pub w: Vec<Mat2>,
    /// The scalar W^2 equals, per choice of W, when it is scalar. Recorded only.
    pub w_square: Vec<Option<String>>,
    pub verdict: Verdict,
}

/// Slope pairing a_i + b_{d-1-i} = k + 1 between the eps and eps^{-1} spaces.
///
/// Trivial and quadratic eps are self-inverse, so both lists come from one matrix.
pub fn atkin_lehner_check(md: &ManinData, k: i64, eps: Epsilon) -> Result<AtkinLehnerReport> {
    if k < 0 {
        return Err(Error::Usage(format!("weight k = {k} must be non-negative")));
    }
    let k = k as usize;
    let p = md.p;
    let up = classical_up(md, k, eps)?;
    let expected_dim = expected_dimension(p, md.lift.m, md.t(), k);
    let mut a = slopes(&up, p as u64);
    a.sort();
    let b = a.clone();
    let dim = a.len();
    let target = Slope::Finite(Rational::from_integer(k as i64 + 1));
    let unpaired: Vec<usize> = (0..dim)
        .filter(|&i| match (a[i], b[dim - 1 - i]) {
            (Slope::Finite(x), Slope::Finite(y)) => Slope::Finite(x + y) != target,
            _ => true,
        })
        .collect();
    let pairing = if dim != expected_dim { Verdict::Fail } else { Verdict::from_bool(unpaired.is_empty()) };
    let mult_ordinary = a.iter().filter(|s| **s == Slope::Finite(Rational::zero())).count();
    let mult_critical = a.iter().filter(|s| **s == target).count();
    let multiplicity = Verdict::from_bool(mult_ordinary == mult_critical);
    let n = md.level();
    let mut w = Vec::new();
    let mut w_square = Vec::new();
    for shift in 0..2 {
        let wm = atkin_lehner_matrix(n, p, md.lift.m, shift);
        let op = w_operator(md, &wm, k, eps)?;
        w_square.push(op.mul(&op).is_scalar().map(|s| s.to_string()));
        w.push(wm);
    }
    Ok(AtkinLehnerReport {
        k,
        dim,
        expected_dim,
        slopes: a,
        unpaired,
        pairing,
        mult_ordinary,
        mult_critical,
        multiplicity,
        w,
        w_square,
        verdict: pairing.and(multiplicity),
    })
}

/// Precision of the center-weight lift in the control comparison.
pub const CONTROL_PREC: u32 = 30;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ControlReport {
    pub k: usize,
    pub j: u32,
    /// Classical slopes below k + 1, ascending.
    pub classical: Vec<Rational>,
    /// Overconvergent slopes below k + 1, ascending.
    pub overconvergent: Vec<Rational>,
    /// Degree > k columns vanish on the degree <= k rows at the center.
    pub triangular: Verdict,
    /// p^prec exceeds twice the bound on the lifted block entries.
    pub lift: Verdict,
    /// Every slope of the complementary block is at least k + 1.
    pub tail: Verdict,
    pub ordinary_rank: usize,
    pub verdict: Verdict,
}

/// Sub-(k+1) multisets; Infinite slopes never count.
pub fn below(s: &[Slope], k: usize) -> Vec<Rational> {
    let cap = Rational::from_integer(k as i64 + 1);
    let mut v: Vec<Rational> = s
        .iter()
        .filter_map(|x| match x {
            Slope::Finite(r) if *r < cap => Some(*r),
            _ => None,
        })
        .collect();
    v.sort();
    v
}

/// Classical against overconvergent slopes below k + 1 at the center weight of (k, trivial).
///
/// At the center, U_p in the Mahler basis is block lower triangular with the classical action on
/// degrees <= k. That block is lifted to an integer matrix and its slopes taken exactly; the
/// complementary block has every slope >= k + 1 as soon as d - floor(d/p) >= k + 1 for d > k.
pub fn control_check(md: &ManinData, k: usize, eps: Epsilon) -> Result<ControlReport> {
    if eps != Epsilon::Trivial {
        return Err(Error::Usage("center weights exist only for the trivial character".into()));
    }
    let p = md.p as u64;
    let st = md.st();
    let j = eps.component(k as u32, md.p);
    let prec = CONTROL_PREC;
    let window = Window::new(p, prec, prec as usize)?;
    let table = md.up_table()?;
    let u = assemble_up(md, j, window, k + 2)?;
    if u.decay.fail + u.row_estimate.fail > 0 {
        return Err(Error::Internal("decay estimate failed during the control check".into()));
    }
    let beta = center_beta(p, k as u32, prec + 2);
    let sp = u.specialize(&beta)?;
    let low = st * (k + 1);

    let mut triangular = Verdict::Pass;
    let mut eff = prec;
    for row in &sp[..low] {
        for (c, e) in row {
            eff = eff.min(e.prec());
            if *c >= low && !e.is_zero() {
                triangular = Verdict::Fail;
            }
        }
    }

    let fact: u64 = (1..=k as u64).product();
    let l = BigInt::from(fact);
    let mut bound = BigInt::zero();
    for terms in &table {
        let mut row = BigInt::zero();
        for t in terms {
            let g = t.g;
            let h = BigInt::from(g.a.abs().max(g.b.abs()).max(g.c.abs()).max(g.d.abs()));
            let x = BigInt::from((k + 1) * (k + 1)) * h;
            row += BigInt::from(t.coeff.unsigned_abs()) * BigInt::from(1u64 << k) * &l * x.pow(k as u32);
        }
        bound = bound.max(row);
    }
    let modulus = BigInt::from(p).pow(eff);
    let lift = if BigInt::from(2) * &bound < modulus { Verdict::Pass } else { Verdict::Inconclusive };

    let mut a = QMatrix::zero(low);
    for (r, row) in sp[..low].iter().enumerate() {
        for (c, e) in row {
            if *c < low {
                let scaled = e.mul(&crate::padic::PAdicInt::new(p, &l, e.prec()));
                *a.get_mut(r, *c) = scaled.symmetric();
            }
        }
    }
    let shift = Rational::from_integer(vp_factorial(k as u64, p) as i64);
    let over: Vec<Slope> = slopes(&a, p)
        .into_iter()
        .map(|s| match s {
            Slope::Finite(r) => Slope::Finite(r - shift),
            s => s,
        })
        .collect();
    let tail = if degree_level(k + 1, p) as usize >= k + 1 { Verdict::Pass } else { Verdict::Inconclusive };

    let classical = below(&slopes(&classical_up(md, k, eps)?, p), k);
    let overconvergent = below(&over, k);
    let certified = triangular.and(lift).and(tail);
    let verdict = match certified {
        Verdict::Fail => Verdict::Fail,
        _ if classical != overconvergent => Verdict::Fail,
        v => v,
    };
    let ordinary_rank = classical.iter().filter(|r| r.is_zero()).count();
    Ok(ControlReport { k, j, classical, overconvergent, triangular, lift, tail, ordinary_rank, verdict })
}

/// Parity (-1)^k eps(-1) of the weight; the sign lift is a section only for p = 3.
pub fn check_parity(p: i128, k: usize, eps: Epsilon) -> Result<()> {
    let odd = (k % 2 == 1) != (eps.value(-1, p) == -1);
    if p > 3 && odd {
        return Err(Error::Usage(format!("(k = {k}, {eps:?}) is odd; its space is zero for p = {p}")));
    }
    Ok(())
}

