use super::action::{dual_action, Epsilon, QMatrix};
use super::charpoly::{charpoly_exact, vp_big};
use crate::arith::Rational;
use crate::error::Result;
use crate::manin::{Mat2, ManinData, UpTerm};
use crate::newton::Polygon;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Matrix of psi -> sum_terms coeff * psi(e~_index) | g on (V^k)^{st}, generator-major.
pub fn assemble_classical(st: usize, table: &[Vec<UpTerm>], k: usize, eps: Epsilon, p: i128) -> QMatrix {
    let b = k + 1;
    let mut u = QMatrix::zero(st * b);
    for (i, terms) in table.iter().enumerate() {
        for t in terms {
            let q = dual_action(&t.g.sign_lift(p), k, eps, p);
            let c = BigInt::from(t.coeff);
            for r in 0..b {
                for s in 0..b {
                    let e = q.get(r, s);
                    if !e.is_zero() {
                        *u.get_mut(i * b + r, t.index * b + s) += e * &c;
                    }
                }
            }
        }
    }
    u
}

/// Exact U_p on Symb_{Gamma_0(N p^m), C}(V^{(k, eps)}), m taken from the lift in `md`.
pub fn classical_up(md: &ManinData, k: usize, eps: Epsilon) -> Result<QMatrix> {
    super::checks::check_parity(md.p, k, eps)?;
    let table = md.up_table()?;
    Ok(assemble_classical(md.st(), &table, k, eps, md.p))
}

/// d_{k,m} = p^{m-1}(p+1) t (k+1).
pub fn expected_dimension(p: i128, m: u32, t: usize, k: usize) -> usize {
    (p.pow(m - 1) * (p + 1)) as usize * t * (k + 1)
}

/// A U_p slope; zero eigenvalues have infinite slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slope {
    Finite(Rational),
    Infinite,
}

/// Slopes of an integer matrix: Newton polygon of det(1 - X A) with respect to v_p.
pub fn slopes(a: &QMatrix, p: u64) -> Vec<Slope> {
    slopes_from_charpoly(&charpoly_exact(a), p)
}

/// Slopes from det(lambda - A) given from lambda^0 up.
pub fn slopes_from_charpoly(cp: &[BigInt], p: u64) -> Vec<Slope> {
    let n = cp.len() - 1;
    // c_i (coefficient of X^i in det(1 - XA)) is the coefficient of lambda^{n-i}
    let pts: Vec<(usize, Rational)> = (0..=n)
        .filter_map(|i| vp_big(&cp[n - i], p).map(|v| (i, Rational::from_integer(v as i64))))
        .collect();
    let poly = Polygon::from_values(&pts);
    let mut out: Vec<Slope> = poly.slope_list().into_iter().map(Slope::Finite).collect();
    out.resize(n, Slope::Infinite);
    out
}

/// Operator for W-conjugation checks: psi -> sum coeff * psi(e~_index) | g for the
/// decomposition of w . e~_i.
pub fn classical_operator(md: &ManinData, w: &Mat2, k: usize, eps: Epsilon) -> Result<QMatrix> {
    let mut table = Vec::with_capacity(md.st());
    for i in 0..md.st() {
        let word = md.express_translate(w, i)?;
        table.push(
            word.terms
                .into_iter()
                .map(|t| UpTerm { a: 0, delta: t.gamma, g: t.gamma.inverse_unimodular() * *w, coeff: t.coeff, index: t.gen })
                .collect::<Vec<_>>(),
        );
    }
    Ok(assemble_classical(md.st(), &table, k, eps, md.p))
}
