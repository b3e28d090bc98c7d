use halo_core::arith::Rational;
use halo_core::padic::{center_beta, exp_p_integer, specialize, teichmuller, universal_char, Flag, PAdicInt, Specialized, TSeries, WeightSpec, Window};
use num_bigint::BigInt;
use proptest::prelude::*;

fn window() -> Window {
    Window::new(3, 10, 12).unwrap()
}

fn series() -> impl Strategy<Value = TSeries> {
    prop::collection::vec(-30000i128..30000, 12).prop_map(|c| TSeries::from_coeffs(window(), &c))
}

fn unit() -> impl Strategy<Value = i64> {
    (-100000i64..100000).prop_filter("unit", |u| u % 3 != 0)
}

#[test]
fn teichmuller_mod_625_matches_brute_force() {
    // x = 2 mod 5, x^4 = 1 mod 5^4, found by exhaustive search
    assert_eq!(teichmuller(&BigInt::from(2), 5, 4).unwrap().residue_u64(), 182);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.mul(&TSeries::one(window())), a);
    }

    #[test]
    fn mval_is_superadditive(a in series(), b in series()) {
        let (va, vb, vab) = (a.mval(), b.mval(), a.mul(&b).mval());
        if va.flag == Flag::Exact && vb.flag == Flag::Exact {
            prop_assert!(vab.value >= va.value + vb.value || vab.flag == Flag::AtLeast);
        }
    }

    #[test]
    fn center_specialization_is_multiplicative(a in series(), b in series(), k in 0u32..4) {
        let beta = center_beta(3, k, 10);
        let w = WeightSpec::center(0, beta).unwrap();
        let val = |s: &TSeries| match specialize(s, &w).unwrap() {
            Specialized::Value(x) => x,
            Specialized::Valuation(_) => unreachable!(),
        };
        prop_assert!(val(&a.mul(&b)).congruent(&val(&a).mul(&val(&b))));
        prop_assert!(val(&a.add(&b)).congruent(&val(&a).add(&val(&b))));
    }

    #[test]
    fn boundary_valuation_of_products(a in series(), b in series(), num in 1i64..10) {
        let v = Rational::new(num, 11);
        let (x, y, xy) = (a.valuation_at(v), b.valuation_at(v), a.mul(&b).valuation_at(v));
        if x.flag == Flag::Exact && y.flag == Flag::Exact && xy.flag != Flag::AtLeast {
            prop_assert_eq!(xy.value, x.value + y.value);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn universal_character_is_multiplicative(u in unit(), v in unit(), j in 0u32..2) {
        let w = window();
        let (u, v) = (BigInt::from(u), BigInt::from(v));
        let lhs = universal_char(&(&u * &v), j, &w).unwrap();
        let rhs = universal_char(&u, j, &w).unwrap().mul(&universal_char(&v, j, &w).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn character_at_center_is_a_power(u in unit(), k in 0u32..4) {
        // at T = exp(p)^k - 1 the character is <u>^k omega(u)^j; for u = 1 mod 3 that is u^k
        let u = if u.rem_euclid(3) == 1 { u } else { -u };
        let w = window();
        let chi = universal_char(&BigInt::from(u), 0, &w).unwrap();
        let got = chi.evaluate(&center_beta(3, k, 10)).unwrap();
        prop_assert!(got.congruent(&PAdicInt::from_i128(3, (u as i128).pow(k), 10)));
    }
}

#[test]
fn exp_generator_maps_to_one_plus_t() {
    let w = Window::new(3, 12, 30).unwrap();
    let c = universal_char(&exp_p_integer(3, 80), 1, &w).unwrap();
    assert_eq!(c, TSeries::from_coeffs(w, &[1, 1]));
}
