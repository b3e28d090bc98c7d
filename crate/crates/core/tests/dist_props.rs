use halo_core::classical::{dual_action, Epsilon};
use halo_core::dist::{act_matrix, mahler_coefficients, mahler_evaluate, CharCache, Regime};
use halo_core::manin::Mat2;
use halo_core::padic::{center_beta, PAdicInt, TSeries, Window};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random (a b; c d) with a a unit, c = 0 mod 3 and, for the lower monoid, d = 0 mod 3.
fn random_element(rng: &mut ChaCha8Rng, lower: bool) -> Mat2 {
    loop {
        let a: i128 = rng.gen_range(-200..200);
        let b: i128 = rng.gen_range(-200..200);
        let c: i128 = 3 * rng.gen_range(-70..70);
        let d: i128 = if lower { 3 * rng.gen_range(-70..70) } else { rng.gen_range(-200..200) };
        let g = Mat2::new(a, b, c, d);
        if a % 3 != 0 && g.det() != 0 && (lower || d % 3 != 0) {
            return g;
        }
    }
}

#[test]
fn decay_estimates_on_random_monoid_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let w = Window::new(3, 8, 30).unwrap();
    let mut cache = CharCache::new(w, 0);
    for _ in 0..20 {
        let g = random_element(&mut rng, true);
        let m = act_matrix(&g, &mut cache, 24, 24).expect("no FAIL verdicts");
        assert_eq!(Regime::of(&g, 3), Some(Regime::LowerMonoid));
        assert_eq!(m.monoid.unwrap().fail, 0);
        assert_eq!(m.sigma0.fail, 0);
    }
    for _ in 0..5 {
        let g = random_element(&mut rng, false);
        let m = act_matrix(&g, &mut cache, 24, 24).unwrap();
        assert!(m.monoid.is_none());
        assert_eq!(m.sigma0.fail, 0);
    }
}

#[test]
fn action_is_contravariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (m_prec, k) = (6u32, 8usize);
    let w = Window::new(3, m_prec, k).unwrap();
    let mut cache = CharCache::new(w, 1);
    let size = 5;
    // dropped inner terms have mval >= inner - m, which must clear the whole window
    let inner = m_prec as usize + k + size;
    for _ in 0..10 {
        let g1 = random_element(&mut rng, false);
        let g2 = random_element(&mut rng, false);
        let lhs = act_matrix(&(g1 * g2), &mut cache, size, size).unwrap();
        let p2 = act_matrix(&g2, &mut cache, size, inner).unwrap();
        let p1 = act_matrix(&g1, &mut cache, inner, size).unwrap();
        let rhs = p2.matmul(&p1);
        for i in 0..size {
            for j in 0..size {
                assert_eq!(lhs.entries[i][j], rhs[i][j], "({i},{j}) for {g1} {g2}");
            }
        }
    }
}

proptest! {
    #[test]
    fn mahler_round_trip(vals in prop::collection::vec(prop::collection::vec(-1000i128..1000, 6), 1..12)) {
        let w = Window::new(3, 9, 6).unwrap();
        let series: Vec<TSeries> = vals.iter().map(|c| TSeries::from_coeffs(w, c)).collect();
        let back = mahler_evaluate(&mahler_coefficients(&series), series.len());
        prop_assert_eq!(back, series);
    }
}

fn binomial_to_monomial(n: usize) -> Vec<Vec<BigRational>> {
    // s[m][i]: coefficient of z^i in binom(z, m)
    let mut s = vec![vec![BigRational::zero(); n]; n];
    s[0][0] = BigRational::one();
    for m in 1..n {
        for i in 0..n {
            // binom(z, m) = binom(z, m-1) (z - m + 1) / m
            let mut v = -s[m - 1][i].clone() * BigRational::from_integer(BigInt::from(m - 1));
            if i > 0 {
                v += s[m - 1][i - 1].clone();
            }
            s[m][i] = v / BigRational::from_integer(BigInt::from(m));
        }
    }
    s
}

fn invert_lower(s: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = s.len();
    let mut t = vec![vec![BigRational::zero(); n]; n];
    for col in 0..n {
        for row in 0..n {
            let mut acc = if row == col { BigRational::one() } else { BigRational::zero() };
            for k in 0..row {
                acc -= s[row][k].clone() * t[k][col].clone();
            }
            t[row][col] = acc / s[row][row].clone();
        }
    }
    t
}

fn reduce(q: &BigRational, prec: u32) -> PAdicInt {
    let num = PAdicInt::new(3, q.numer(), prec);
    num.mul(&PAdicInt::new(3, q.denom(), prec).inverse().unwrap())
}

#[test]
fn center_block_matches_classical_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let prec = 12u32;
    for k in 0..4usize {
        let w = Window::new(3, prec, prec as usize).unwrap();
        let mut cache = CharCache::new(w, (k % 2) as u32);
        let beta = center_beta(3, k as u32, prec);
        let s = binomial_to_monomial(k + 1);
        let t = invert_lower(&s);
        for _ in 0..6 {
            let g = random_element(&mut rng, true);
            let p = act_matrix(&g, &mut cache, k + 1, k + 1).unwrap();
            let q = dual_action(&g, k, Epsilon::Trivial, 3);
            for m in 0..=k {
                for n in 0..=k {
                    let mut want = BigRational::zero();
                    for i in 0..=k {
                        for j in 0..=k {
                            want += s[m][i].clone() * BigRational::from_integer(q.get(i, j).clone()) * t[j][n].clone();
                        }
                    }
                    let got = p.entries[m][n].evaluate(&beta).unwrap();
                    assert!(got.congruent(&reduce(&want, prec)), "k={k} g={g} ({m},{n})");
                }
            }
        }
    }
}
