use super::berkowitz::{fredholm_coefficients, RingOps, SparseMatrix};
use super::up::UpMatrix;
use crate::dist::check_bound;
use crate::error::{Error, Result};
use crate::padic::{Modulus, PAdicInt, PVal, TSeries, Val, Window};
use crate::verdict::{Tally, Verdict};
use serde::{Deserialize, Serialize};

/// Z_p[[T]] / (p^M, T^K) with elements in Montgomery form.
pub struct SeriesRing {
    pub md: Modulus,
    pub k: usize,
}

impl RingOps for SeriesRing {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.k]
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = self.md.to_mont(1 % self.md.n());
        v
    }

    fn add_assign(&self, a: &mut Vec<u64>, b: &Vec<u64>) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = self.md.add(*x, *y);
        }
    }

    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|&x| self.md.neg(x)).collect()
    }

    fn mul_add(&self, acc: &mut Vec<u64>, a: &Vec<u64>, b: &Vec<u64>) {
        let k = self.k;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (slot, &y) in acc[i..].iter_mut().zip(&b[..k - i]) {
                *slot = self.md.add(*slot, self.md.mul(x, y));
            }
        }
    }
}

/// Z / p^M with elements in Montgomery form.
pub struct ResidueRing {
    pub md: Modulus,
}

impl RingOps for ResidueRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        self.md.to_mont(1 % self.md.n())
    }

    fn add_assign(&self, a: &mut u64, b: &u64) {
        *a = self.md.add(*a, *b);
    }

    fn neg(&self, a: &u64) -> u64 {
        self.md.neg(*a)
    }

    fn mul_add(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = self.md.add(*acc, self.md.mul(*a, *b));
    }
}

/// lambda(0..=n_max) for the recurrence with step floor((n-1)/((p+1)t)) - floor((n-1)/(p(p+1)t)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaProfile {
    pub p: u64,
    pub t: usize,
    pub values: Vec<i64>,
}

pub fn lambda_profile(p: u64, t: usize, n_max: usize) -> LambdaProfile {
    let st = (p as usize + 1) * t;
    let mut values = vec![0i64; n_max + 1];
    for n in 1..=n_max {
        values[n] = values[n - 1] + ((n - 1) / st) as i64 - ((n - 1) / (p as usize * st)) as i64;
    }
    LambdaProfile { p, t, values }
}

impl LambdaProfile {
    pub fn at(&self, n: usize) -> i64 {
        self.values[n]
    }

    /// n_k = p(p+1)kt.
    pub fn n_k(&self, k: usize) -> usize {
        self.p as usize * (self.p as usize + 1) * k * self.t
    }
}

/// d - floor(d/p): the least decay of a diagonal entry of Mahler degree d.
pub fn degree_level(d: usize, p: u64) -> u32 {
    (d - d / p as usize) as u32
}

/// Fewest Mahler degrees whose dropped tail lies in m^level.
pub fn degrees_for_level(p: u64, level: u32) -> usize {
    (0..).find(|&d| degree_level(d, p) >= level).unwrap()
}

/// Truncation level of c_n: every principal minor meeting a dropped index has mval >= this.
pub fn certified_level(u_deg: usize, p: u64, lambda: &LambdaProfile, n: usize) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    degree_level(u_deg, p) + lambda.at(n - 1) as u32
}

#[derive(Clone, Debug)]
pub struct FredholmSeries {
    pub coeffs: Vec<TSeries>,
    /// c_n agrees with the untruncated series modulo m^{level[n]}.
    pub level: Vec<u32>,
    pub st: usize,
    pub n_deg: usize,
}

impl FredholmSeries {
    /// A series known exactly within its window, such as det(1 - X A) of a finite matrix.
    pub fn exact(coeffs: Vec<TSeries>, st: usize) -> Self {
        let n = coeffs.len();
        FredholmSeries { coeffs, level: vec![u32::MAX; n], st, n_deg: usize::MAX }
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn window(&self) -> Window {
        self.coeffs[0].w
    }

    /// Digits of b_{n,m} that the truncation certifies (0 when none).
    pub fn certified_p_prec(&self, n: usize, m: usize) -> u32 {
        let w = self.window();
        if m >= w.k {
            return 0;
        }
        let lvl = self.level[n] as i64 - m as i64;
        lvl.clamp(0, w.m as i64) as u32
    }

    /// b_{n,m} reduced to its certified precision.
    pub fn certified_coeff(&self, n: usize, m: usize) -> PAdicInt {
        self.coeffs[n].coeff(m).with_prec(self.certified_p_prec(n, m))
    }

    /// Precision to which c_n(beta) is certified for v_p(beta) >= 1.
    pub fn certified_center_prec(&self, n: usize) -> u32 {
        let w = self.window();
        w.m.min(self.level[n]).min(w.k as u32)
    }

    /// Same series with every coefficient reduced to its certified window.
    pub fn certified_series(&self, n: usize) -> TSeries {
        let w = self.window();
        let k = (self.level[n] as usize).min(w.k).max(1);
        let mut s = self.coeffs[n].truncate(k);
        for m in 0..k {
            let prec = self.certified_p_prec(n, m);
            let q = (w.p as u128).pow(prec) as u64;
            s.coeffs[m] %= q.max(1);
        }
        s
    }
}

/// c_0..c_{n_max} of det(1 - X U) for the truncated U, certified to m^level.
pub fn fredholm(u: &UpMatrix, n_max: usize, level: u32) -> Result<FredholmSeries> {
    let p = u.p;
    if degree_level(u.n_deg, p) < level {
        let need = degrees_for_level(p, level);
        return Err(Error::Truncation(format!(
            "{} Mahler degrees certify only level {}; increase truncation to N_cols = {} ({} degrees)",
            u.n_deg,
            degree_level(u.n_deg, p),
            u.st * need,
            need
        )));
    }
    let t = u.st / (p as usize + 1);
    let lambda = lambda_profile(p, t, n_max);
    let levels: Vec<u32> = (0..=n_max).map(|n| certified_level(u.n_deg, p, &lambda, n)).collect();
    let top = levels[1..].iter().copied().max().unwrap_or(1) as usize;
    let k = u.window.k.min(top).max(1);
    let ring = SeriesRing { md: u.window.modulus, k };
    let rows = u
        .rows
        .iter()
        .map(|r| r.iter().map(|(c, e)| (*c, e.coeffs[..k].iter().map(|&x| ring.md.to_mont(x)).collect())).collect())
        .collect();
    let a = SparseMatrix { n: u.dim(), rows };
    let w = Window { k, ..u.window };
    let coeffs = fredholm_coefficients(&ring, &a, n_max)
        .into_iter()
        .map(|v| TSeries { w, coeffs: v.into_iter().map(|x| ring.md.from_mont(x)).collect() })
        .collect();
    Ok(FredholmSeries { coeffs, level: levels, st: u.st, n_deg: u.n_deg })
}

/// Three-valued check of v_p(b_{n,m}) >= lambda(n) - m for m < lambda(n).
pub fn coefficient_bound_check(f: &FredholmSeries, lambda: &LambdaProfile) -> Tally {
    let mut tally = Tally::default();
    for n in 0..=f.n_max() {
        let lam = lambda.at(n);
        for m in 0..(lam.max(0) as usize) {
            let b = f.certified_coeff(n, m);
            let v = match b.valuation() {
                PVal::Exact(v) => Val::exact((v as i64).into()),
                PVal::AtLeast(v) => Val::at_least((v as i64).into()),
            };
            tally.add(check_bound(v, lam - m as i64));
        }
    }
    tally
}

/// c_0..c_{n_max} of det(1 - X A) for a specialized matrix over Z / p^prec.
pub fn fredholm_mod(rows: &[Vec<(usize, PAdicInt)>], p: u64, prec: u32, n_max: usize) -> Vec<PAdicInt> {
    let md = Modulus::new((p as u128).pow(prec) as u64);
    let ring = ResidueRing { md };
    let reduce = |x: &PAdicInt| {
        let r = x.with_prec(prec);
        md.to_mont(r.residue_u64())
    };
    let a = SparseMatrix { n: rows.len(), rows: rows.iter().map(|r| r.iter().map(|(c, e)| (*c, reduce(e))).collect()).collect() };
    fredholm_coefficients(&ring, &a, n_max)
        .into_iter()
        .map(|x| PAdicInt::from_i128(p, md.from_mont(x) as i128, prec))
        .collect()
}

/// One compared coefficient of a specialization check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecializeLine {
    pub n: usize,
    pub prec: u32,
    pub agree: bool,
}

/// Charpoly of the specialized matrix against the specialized series, n <= n_cmp.
pub fn specialize_check(u: &UpMatrix, f: &FredholmSeries, beta: &PAdicInt, n_cmp: usize) -> Result<(Verdict, Vec<SpecializeLine>)> {
    let n_cmp = n_cmp.min(f.n_max());
    let prec = u.window.m.min(beta.prec());
    let sp = u.specialize(&beta.with_prec(prec))?;
    let direct = fredholm_mod(&sp, u.p, prec, n_cmp);
    let mut verdict = Verdict::Pass;
    let mut lines = Vec::new();
    for (n, d) in direct.iter().enumerate() {
        let cert = f.certified_center_prec(n).min(prec);
        let via_series = f.coeffs[n].evaluate(beta)?;
        let agree = d.with_prec(cert).congruent(&via_series.with_prec(cert));
        let v = if cert == 0 { Verdict::Inconclusive } else { Verdict::from_bool(agree) };
        verdict = verdict.and(v);
        lines.push(SpecializeLine { n, prec: cert, agree });
    }
    Ok((verdict, lines))
}

/// c_n by Newton's identities from power traces, at precision prec + v_p(n_max!) to absorb the
/// divisions; intended for small dense matrices as a cross-check of the division-free path.
pub fn fredholm_newton(a: &[Vec<i128>], p: u64, prec: u32, n_max: usize) -> Result<Vec<PAdicInt>> {
    let guard = crate::arith::vp_factorial(n_max as u64, p);
    let wp = prec + guard;
    let n = a.len();
    let md = Modulus::new(
        (p as u128).checked_pow(wp).filter(|&x| x < 1 << 63).ok_or_else(|| Error::Usage("Newton-identity precision too large".into()))? as u64,
    );
    let to = |x: i128| md.to_mont(x.rem_euclid(md.n() as i128) as u64);
    let am: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| to(x)).collect()).collect();
    let mut pow = am.clone();
    let mut traces = Vec::with_capacity(n_max);
    for i in 0..n_max {
        if i > 0 {
            let mut next = vec![vec![0u64; n]; n];
            for (r, row) in pow.iter().enumerate() {
                for (k, &x) in row.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for c in 0..n {
                        next[r][c] = md.add(next[r][c], md.mul(x, am[k][c]));
                    }
                }
            }
            pow = next;
        }
        let tr = (0..n).fold(0, |acc, d| md.add(acc, pow[d][d]));
        traces.push(PAdicInt::from_i128(p, md.from_mont(tr) as i128, wp));
    }
    // det(1 - XA) = exp(-sum tr(A^i) X^i / i): n c_n = -sum_{i=1}^n tr(A^i) c_{n-i}
    let mut c = vec![PAdicInt::one(p, wp)];
    for k in 1..=n_max {
        let mut s = PAdicInt::zero(p, wp);
        for i in 1..=k {
            s = s.add(&traces[i - 1].mul(&c[k - i]));
        }
        c.push(s.neg().div_int(k as u64)?);
    }
    Ok(c.into_iter().map(|x| x.with_prec(prec)).collect())
}
