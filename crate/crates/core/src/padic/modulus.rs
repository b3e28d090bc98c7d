/// Montgomery arithmetic modulo an odd n < 2^63.
///
/// Values handed to `mul` are in Montgomery form; `add`/`sub` work on either form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Modulus {
    n: u64,
    neg_inv: u64,
    r2: u64,
}

impl Modulus {
    pub fn new(n: u64) -> Self {
        assert!(n % 2 == 1 && n < (1 << 63), "modulus {n} must be odd and below 2^63");
        let mut inv: u64 = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r2 = if n == 1 { 0 } else { ((u128::MAX % n as u128 + 1) % n as u128) as u64 };
        Modulus { n, neg_inv: inv.wrapping_neg(), r2 }
    }

    #[inline]
    pub fn n(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.n as u128) >> 64) as u64;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }

    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.redc(a as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    /// Product of plain residues.
    #[inline]
    pub fn mul_plain(&self, a: u64, b: u64) -> u64 {
        self.mul(self.mul(a, b), self.r2)
    }

    pub fn reduce_i128(&self, a: i128) -> u64 {
        a.rem_euclid(self.n as i128) as u64
    }

    pub fn pow_plain(&self, a: u64, mut e: u64) -> u64 {
        let mut base = self.to_mont(a);
        let mut acc = self.to_mont(1 % self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        self.from_mont(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_u128_reference(a in 0u64..(1 << 62), b in 0u64..(1 << 62), k in 1u64..(1 << 61)) {
            let n = 2 * k + 1;
            let m = Modulus::new(n);
            let (a, b) = (a % n, b % n);
            prop_assert_eq!(m.mul_plain(a, b), ((a as u128 * b as u128) % n as u128) as u64);
            prop_assert_eq!(m.from_mont(m.to_mont(a)), a);
        }
    }
}
