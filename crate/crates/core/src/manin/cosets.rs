use super::matrix::Mat2;
use crate::arith::{ext_gcd, gcd, mod_floor};

/// P^1(Z/N) with a dense lookup table from (c, d) mod N to the class index.
///
/// Classes are numbered in lexicographic order of their least member.
#[derive(Clone, Debug)]
pub struct P1 {
    n: i128,
    reps: Vec<(i128, i128)>,
    table: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl P1 {
    pub fn new(n: i128) -> Self {
        assert!(n >= 1);
        if n == 1 {
            return P1 { n, reps: vec![(0, 1)], table: vec![0] };
        }
        let nu = n as usize;
        let units: Vec<i128> = (1..n).filter(|&u| gcd(u, n) == 1).collect();
        let mut table = vec![NONE; nu * nu];
        let mut reps = Vec::new();
        for c in 0..n {
            for d in 0..n {
                if gcd(gcd(c, d), n) != 1 || table[(c as usize) * nu + d as usize] != NONE {
                    continue;
                }
                let idx = reps.len() as u32;
                reps.push((c, d));
                for &u in &units {
                    let (uc, ud) = ((u * c) % n, (u * d) % n);
                    table[(uc as usize) * nu + ud as usize] = idx;
                }
            }
        }
        P1 { n, reps, table }
    }

    pub fn modulus(&self) -> i128 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, i: usize) -> (i128, i128) {
        self.reps[i]
    }

    pub fn index(&self, c: i128, d: i128) -> usize {
        if self.n == 1 {
            return 0;
        }
        let nu = self.n as usize;
        let (c, d) = (mod_floor(c, self.n) as usize, mod_floor(d, self.n) as usize);
        let i = self.table[c * nu + d];
        assert!(i != NONE, "({c}:{d}) is not a point of P^1(Z/{})", self.n);
        i as usize
    }

    /// Coset index of the right coset Gamma_0(N) g.
    pub fn coset_of(&self, g: &Mat2) -> usize {
        self.index(g.c, g.d)
    }
}

/// Matrix in SL_2(Z) whose bottom row reduces to (c : d) mod n, normalized mod +-1.
pub fn lift_to_sl2(c: i128, d: i128, n: i128) -> Mat2 {
    if n == 1 {
        return Mat2::IDENTITY;
    }
    let (c, d) = (mod_floor(c, n), mod_floor(d, n));
    let (c1, d1) = if c == 0 {
        // (0 : d) with d a unit is the class of (0 : 1) only after scaling; lift (0, d) via (n, d)
        let mut d1 = d;
        while gcd(n, d1) != 1 {
            d1 += n;
        }
        if d1 == 1 {
            (0, 1)
        } else {
            (n, d1)
        }
    } else {
        let mut d1 = d;
        while gcd(c, d1) != 1 {
            d1 += n;
        }
        (c, d1)
    };
    let (g, x, y) = ext_gcd(d1, c1);
    debug_assert_eq!(g, 1);
    Mat2::new(x, -y, c1, d1).normalize_pm()
}

/// Right-coset representatives of Gamma_0(N) in PSL_2(Z), in P^1(Z/N) order.
pub fn coset_reps(n: i128) -> Vec<Mat2> {
    let p1 = P1::new(n);
    (0..p1.len())
        .map(|i| {
            let (c, d) = p1.rep(i);
            lift_to_sl2(c, d, n)
        })
        .collect()
}

/// Numbers of elliptic points of order 2 and 3 for Gamma_0(N).
pub fn elliptic_counts(n: i128) -> (usize, usize) {
    let nu2 = (0..n).filter(|&x| (x * x + 1) % n == 0).count();
    let nu3 = (0..n).filter(|&x| (x * x + x + 1) % n == 0).count();
    (nu2, nu3)
}
