use halo_core::arith::Rational;
use halo_core::classical::*;
use halo_core::manin::{Mat2, ManinData};
use halo_core::Verdict;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::sync::OnceLock;

fn md() -> &'static ManinData {
    static MD: OnceLock<ManinData> = OnceLock::new();
    MD.get_or_init(|| ManinData::new(3, 11, 1).unwrap())
}

fn qmatrix(rows: &[Vec<i64>]) -> QMatrix {
    let mut q = QMatrix::zero(rows.len());
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            *q.get_mut(i, j) = BigInt::from(*x);
        }
    }
    q
}

// Faddeev-LeVerrier over Q: det(lambda - A) from lambda^0 up.
fn charpoly_oracle(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let am: Vec<Vec<BigRational>> =
        a.iter().map(|r| r.iter().map(|x| BigRational::from_integer(BigInt::from(*x))).collect()).collect();
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = BigRational::one();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        for i in 0..n {
            m[i][i] += &c[n - k + 1];
        }
        let mut am_k = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    am_k[i][j] += &am[i][l] * &m[l][j];
                }
            }
        }
        let tr: BigRational = (0..n).map(|i| am_k[i][i].clone()).sum();
        c[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
        m = am_k;
    }
    c.into_iter().map(|x| x.to_integer()).collect()
}

fn sigma0() -> impl Strategy<Value = Mat2> {
    (-20i128..20, -20i128..20, -7i128..7, -20i128..20)
        .prop_map(|(a, b, c, d)| Mat2::new(3 * a + 1, b, 3 * c, d))
        .prop_filter("nonsingular", |g| g.det() != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]
    #[test]
    fn dual_action_is_contravariant(g in sigma0(), h in sigma0(), k in 0usize..4, quad in any::<bool>()) {
        let eps = if quad { Epsilon::Quadratic } else { Epsilon::Trivial };
        let lhs = dual_action(&(g * h), k, eps, 3);
        let rhs = dual_action(&h, k, eps, 3).mul(&dual_action(&g, k, eps, 3));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_charpoly_matches_oracle(rows in prop::collection::vec(prop::collection::vec(-9i64..9, 6), 6)) {
        prop_assert_eq!(charpoly_exact(&qmatrix(&rows)), charpoly_oracle(&rows));
    }
}

#[test]
fn identity_acts_trivially() {
    for k in 0..5 {
        assert_eq!(dual_action(&Mat2::IDENTITY, k, Epsilon::Quadratic, 3), QMatrix::identity(k + 1));
    }
}

#[test]
fn slopes_of_small_matrices() {
    let zero = Slope::Finite(Rational::from_integer(0));
    assert_eq!(slopes(&QMatrix::identity(4), 3), vec![zero; 4]);
    let d = QMatrix::diagonal(&[BigInt::from(1), BigInt::from(3), BigInt::from(9)]);
    let want: Vec<Slope> = (0..3).map(|i| Slope::Finite(Rational::from_integer(i))).collect();
    assert_eq!(slopes(&d, 3), want);
    let nil = qmatrix(&[vec![0, 1], vec![0, 0]]);
    assert_eq!(slopes(&nil, 3), vec![Slope::Infinite, Slope::Infinite]);
}

#[test]
fn classical_dimensions() {
    let md = md();
    for k in 0..2 {
        let u = classical_up(md, k, Epsilon::Trivial).unwrap();
        assert_eq!(u.n, md.st() * (k + 1));
        assert_eq!(u.n, expected_dimension(3, 1, md.t(), k));
        assert_eq!(slopes(&u, 3).len(), u.n);
    }
}

#[test]
fn weight_zero_slopes() {
    let s = slopes(&classical_up(md(), 0, Epsilon::Trivial).unwrap(), 3);
    let count = |x: i64| s.iter().filter(|v| **v == Slope::Finite(Rational::from_integer(x))).count();
    assert_eq!((count(0), count(1)), (66, 22));
}

#[test]
fn atkin_lehner_matrices() {
    let n = md().level();
    let w0 = atkin_lehner_matrix(n, 3, 1, 0);
    let w1 = atkin_lehner_matrix(n, 3, 1, 1);
    assert_ne!(w0, w1);
    for w in [w0, w1] {
        assert_eq!(w.det(), 3);
        assert_eq!(w.c, 3 * n);
        assert_eq!((w.a / 3) * 3 - w.b * n, 1);
        assert!(w.a >= 0);
    }
    assert!(w0.a / 3 < n);
}

#[test]
fn atkin_lehner_rejects_negative_weight() {
    assert!(atkin_lehner_check(md(), -1, Epsilon::Trivial).is_err());
}

#[test]
fn atkin_lehner_weight_one_quadratic_pairs() {
    let r = atkin_lehner_check(md(), 1, Epsilon::Quadratic).unwrap();
    assert_eq!(r.dim, r.expected_dim);
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!((r.mult_ordinary, r.mult_critical), (66, 66));
    assert_eq!(r.w_square[0], r.w_square[1]);
}

#[test]
fn atkin_lehner_weight_zero_quadratic_is_unpaired() {
    // the even twist carries 44 slope-0 newforms with no slope-1 partner
    let r = atkin_lehner_check(md(), 0, Epsilon::Quadratic).unwrap();
    assert_eq!(r.dim, 88);
    assert_eq!(r.unpaired.len(), 44);
    assert_eq!(r.verdict, Verdict::Fail);
}

#[test]
fn odd_weights_rejected_above_three() {
    assert!(check_parity(3, 1, Epsilon::Trivial).is_ok());
    assert!(check_parity(5, 1, Epsilon::Trivial).is_err());
    assert!(check_parity(5, 0, Epsilon::Quadratic).is_ok());
    assert!(check_parity(7, 0, Epsilon::Quadratic).is_err());
    assert!(check_parity(7, 1, Epsilon::Quadratic).is_ok());
}

#[test]
fn control_at_weight_zero() {
    let r = control_check(md(), 0, Epsilon::Trivial).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.classical, r.overconvergent);
    assert_eq!(r.ordinary_rank, 66);
    assert!(control_check(md(), 0, Epsilon::Quadratic).is_err());
}
