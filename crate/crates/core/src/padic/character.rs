use super::int::{pow_big, PAdicInt, PVal};
use super::series::{TSeries, Window};
use crate::arith::vp_factorial;
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

/// The (p-1)-th root of unity congruent to u mod p.
pub fn teichmuller(u: &BigInt, p: u64, prec: u32) -> Result<PAdicInt> {
    let mut x = PAdicInt::new(p, u, prec);
    if !x.is_unit() {
        return Err(Error::Domain(format!("{u} is not a unit mod {p}")));
    }
    loop {
        let y = x.pow(p);
        if y == x {
            return Ok(x);
        }
        x = y;
    }
}

/// Largest v_p(n) for 1 <= n <= terms.
fn max_vp(terms: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut q = p;
    while q <= terms {
        v += 1;
        q *= p;
    }
    v
}

/// Number of terms of sum x^n/n (v(x) >= 1) whose valuation can fall below prec.
fn log_terms(prec: u32, p: u64) -> u64 {
    // n - floor(log_p n) is non-decreasing
    let mut n = 0u64;
    while (n + 1) - (max_vp(n + 1, p) as u64) < prec as u64 {
        n += 1;
    }
    n
}

/// Digits lost by `plog` at input precision prec.
pub fn plog_loss(prec: u32, p: u64) -> u32 {
    max_vp(log_terms(prec, p), p)
}

/// p-adic logarithm of a 1-unit; the result loses `plog_loss` digits.
pub fn plog(u: &PAdicInt) -> Result<PAdicInt> {
    let p = u.p();
    let x = u.sub(&PAdicInt::one(p, u.prec()));
    if matches!(x.valuation(), PVal::Exact(0)) {
        return Err(Error::Domain(format!("{u} is not a 1-unit")));
    }
    let terms = log_terms(u.prec(), p);
    let out_prec = u.prec() - plog_loss(u.prec(), p);
    let mut acc = PAdicInt::zero(p, out_prec);
    let mut xn = PAdicInt::one(p, u.prec());
    for n in 1..=terms {
        xn = xn.mul(&x);
        let term = xn.div_int(n)?.with_prec(out_prec);
        acc = if n % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
    }
    Ok(acc)
}

/// sum p^n / n! modulo p^prec.
pub fn exp_p(p: u64, prec: u32) -> PAdicInt {
    let mut acc = PAdicInt::zero(p, prec);
    let mut unit_fact = PAdicInt::one(p, prec);
    let mut n: u64 = 0;
    loop {
        if n > 0 {
            let mut u = n;
            while u % p == 0 {
                u /= p;
            }
            unit_fact = unit_fact.mul(&PAdicInt::from_i128(p, u as i128, prec));
        }
        let shift = n as i64 - vp_factorial(n, p) as i64;
        if shift >= prec as i64 {
            if n > 2 * prec as u64 + 4 {
                break;
            }
        } else {
            let pv = PAdicInt::new(p, &BigInt::from(pow_big(p, shift as u32)), prec);
            acc = acc.add(&pv.mul(&unit_fact.inverse().expect("unit")));
        }
        n += 1;
    }
    acc
}

/// Working precision for a universal character value at window w.
pub fn char_working_prec(w: &Window) -> u32 {
    let guard = vp_factorial(w.k as u64 - 1, w.p) + 1;
    let mut prec = w.m + guard;
    while prec - plog_loss(prec, w.p) < w.m + guard {
        prec += 1;
    }
    prec
}

/// omega~(u)^j (1 + T)^c with c = log<u>/p, modulo (p^M, T^K).
pub fn universal_char(u: &BigInt, j: u32, w: &Window) -> Result<TSeries> {
    let p = w.p;
    let prec = char_working_prec(w);
    let omega = teichmuller(u, p, prec)?;
    let one_unit = PAdicInt::new(p, u, prec).mul(&omega.inverse()?);
    let c = plog(&one_unit)?.div_p_pow(1)?;
    let cp = c.prec();
    let mut out = TSeries::zero(*w);
    let mut num = PAdicInt::one(p, cp);
    let mut unit_fact = PAdicInt::one(p, cp);
    let mut v_fact = 0u32;
    for m in 0..w.k {
        if m > 0 {
            num = num.mul(&c.sub(&PAdicInt::from_i128(p, m as i128 - 1, cp)));
            let mut u = m as u64;
            while u % p == 0 {
                u /= p;
                v_fact += 1;
            }
            unit_fact = unit_fact.mul(&PAdicInt::from_i128(p, u as i128, cp));
        }
        let b = num.div_p_pow(v_fact)?.mul(&unit_fact.inverse()?);
        out.coeffs[m] = residue_mod(&b, w);
    }
    let twist = omega.pow(j as u64);
    let t = residue_mod(&twist, w);
    Ok(out.scale(t as i128))
}

fn residue_mod(x: &PAdicInt, w: &Window) -> u64 {
    debug_assert!(x.prec() >= w.m);
    (x.residue() % BigUint::from(w.pm)).to_u64().unwrap()
}

/// exp(p) as an integer representative, modulo p^prec.
pub fn exp_p_integer(p: u64, prec: u32) -> BigInt {
    BigInt::from(exp_p(p, prec).residue().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(&BigInt::from(1), 3, 6).unwrap().residue_u64(), 1);
        assert_eq!(teichmuller(&BigInt::from(2), 3, 6).unwrap().residue_u64(), 728);
        let t = teichmuller(&BigInt::from(2), 5, 4).unwrap();
        assert_eq!(t.residue_u64() % 5, 2);
        assert!(t.pow(4).is_one());
        assert!(teichmuller(&BigInt::from(6), 3, 4).is_err());
    }

    #[test]
    fn plog_examples() {
        assert!(plog(&PAdicInt::one(3, 10)).unwrap().is_zero());
        let e = exp_p(3, 20);
        let l = plog(&e).unwrap();
        assert!(l.congruent(&PAdicInt::from_i128(3, 3, 20)), "{l}");
        assert_eq!(plog(&PAdicInt::from_i128(3, 1 + 3 * 5, 12)).unwrap().valuation(), PVal::Exact(1));
        assert!(plog(&PAdicInt::from_i128(3, 2, 12)).is_err());
    }

    #[test]
    fn universal_char_examples() {
        let w = Window::new(3, 8, 12).unwrap();
        let e = exp_p_integer(3, 40);
        assert_eq!(universal_char(&e, 0, &w).unwrap(), TSeries::from_coeffs(w, &[1, 1]));
        assert_eq!(universal_char(&BigInt::from(1), 1, &w).unwrap(), TSeries::one(w));
        assert_eq!(universal_char(&BigInt::from(-1), 0, &w).unwrap(), TSeries::one(w));
        assert_eq!(universal_char(&BigInt::from(-1), 1, &w).unwrap(), TSeries::constant(w, -1));
    }
}
