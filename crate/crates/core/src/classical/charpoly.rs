use super::action::QMatrix;
use crate::arith::large_primes;
use crate::padic::Modulus;
use crate::spectral::{fredholm_coefficients, RingOps, SparseMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn reduce(x: &BigInt, q: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(q));
    r.to_u64_digits().1.first().copied().unwrap_or(0)
}

/// det(lambda - A) mod a prime q via Hessenberg reduction; coefficients from lambda^0 up.
pub fn charpoly_mod_hessenberg(a: &QMatrix, q: u64) -> Vec<u64> {
    let md = Modulus::new(q);
    let n = a.n;
    let mut h: Vec<Vec<u64>> =
        (0..n).map(|i| (0..n).map(|j| md.to_mont(reduce(a.get(i, j), q))).collect()).collect();
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| h[i][m - 1] != 0) else { continue };
        if piv != m {
            h.swap(piv, m);
            for row in h.iter_mut() {
                row.swap(piv, m);
            }
        }
        let inv = md.to_mont(md.pow_plain(md.from_mont(h[m][m - 1]), q - 2));
        for i in (m + 1)..n {
            if h[i][m - 1] == 0 {
                continue;
            }
            let u = md.mul(h[i][m - 1], inv);
            for j in (m - 1)..n {
                let t = md.mul(u, h[m][j]);
                h[i][j] = md.sub(h[i][j], t);
            }
            for row in h.iter_mut() {
                let t = md.mul(u, row[i]);
                row[m] = md.add(row[m], t);
            }
        }
    }
    let one = md.to_mont(1);
    let mut polys: Vec<Vec<u64>> = vec![vec![one]];
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut pm = vec![0u64; m + 1];
        for (i, &c) in prev.iter().enumerate() {
            pm[i + 1] = md.add(pm[i + 1], c);
            pm[i] = md.sub(pm[i], md.mul(h[m - 1][m - 1], c));
        }
        let mut t = one;
        for i in 1..m {
            t = md.mul(t, h[m - i][m - i - 1]);
            if t == 0 {
                break;
            }
            let coef = md.mul(t, h[m - i - 1][m - 1]);
            for (j, &c) in polys[m - i - 1].iter().enumerate() {
                pm[j] = md.sub(pm[j], md.mul(coef, c));
            }
        }
        polys.push(pm);
    }
    polys.pop().unwrap().into_iter().map(|c| md.from_mont(c)).collect()
}

struct ModRing(Modulus);

impl RingOps for ModRing {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        self.0.to_mont(1)
    }
    fn add_assign(&self, a: &mut u64, b: &u64) {
        *a = self.0.add(*a, *b);
    }
    fn neg(&self, a: &u64) -> u64 {
        self.0.neg(*a)
    }
    fn mul_add(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = self.0.add(*acc, self.0.mul(*a, *b));
    }
}

/// det(lambda - A) mod q by the division-free route, for cross-checking.
pub fn charpoly_mod_berkowitz(a: &QMatrix, q: u64) -> Vec<u64> {
    let md = Modulus::new(q);
    let dense: Vec<Vec<u64>> =
        (0..a.n).map(|i| (0..a.n).map(|j| md.to_mont(reduce(a.get(i, j), q))).collect()).collect();
    let sp = SparseMatrix::from_dense(&dense, |e| *e == 0);
    let c = fredholm_coefficients(&ModRing(md), &sp, a.n);
    // c_i is the coefficient of lambda^{n-i}
    c.into_iter().rev().map(|x| md.from_mont(x)).collect()
}

/// Bound on |coefficients| of det(lambda - A): max_i C(n, i) R^i with R the max row 1-norm.
pub fn coefficient_bound(a: &QMatrix) -> BigInt {
    let n = a.n;
    let r: BigInt = (0..n).map(|i| (0..n).map(|j| a.get(i, j).abs()).sum::<BigInt>()).max().unwrap_or_default();
    let mut best = BigInt::one();
    let mut binom = BigInt::one();
    let mut rp = BigInt::one();
    for i in 1..=n {
        binom = binom * BigInt::from(n - i + 1) / BigInt::from(i);
        rp *= &r;
        let b = &binom * &rp;
        if b > best {
            best = b;
        }
    }
    best
}

/// Exact det(lambda - A) over Z by CRT over 62-bit primes, coefficients from lambda^0 up.
pub fn charpoly_exact(a: &QMatrix) -> Vec<BigInt> {
    let bound = coefficient_bound(a) * 2 + 1;
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); a.n + 1];
    for q in large_primes() {
        let res = charpoly_mod_hessenberg(a, q);
        let qb = BigInt::from(q);
        let minv = {
            let m = modulus.mod_floor(&qb);
            let e = m.extended_gcd(&qb);
            e.x.mod_floor(&qb)
        };
        for (x, r) in acc.iter_mut().zip(res) {
            let diff = (BigInt::from(r) - &*x).mod_floor(&qb);
            let t = (diff * &minv).mod_floor(&qb);
            *x += &modulus * t;
        }
        modulus *= qb;
        if modulus > bound {
            break;
        }
    }
    let half = &modulus / 2;
    acc.into_iter().map(|x| if x > half { x - &modulus } else { x }).collect()
}

/// p-adic valuation of a nonzero big integer.
pub fn vp_big(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}
