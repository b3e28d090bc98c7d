use halo_core::arith::Rational;
use halo_core::manin::ManinData;
use halo_core::newton::*;
use halo_core::padic::{specialize, Specialized, TSeries, Val, WeightSpec, Window};
use halo_core::spectral::{assemble_up, fredholm, lambda_profile, FredholmSeries};
use halo_core::{Error, Verdict};
use proptest::prelude::*;

fn r(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn window() -> Window {
    Window::new(3, 8, 10).unwrap()
}

fn series(cs: &[&[i128]]) -> FredholmSeries {
    FredholmSeries::exact(cs.iter().map(|c| TSeries::from_coeffs(window(), c)).collect(), 4)
}

proptest! {
    #[test]
    fn hull_is_convex_and_below_exact_points(ys in prop::collection::vec((0i64..40, any::<bool>()), 2..20)) {
        let pts: Vec<Point> = ys
            .iter()
            .enumerate()
            .map(|(n, (y, e))| Point { n, y: Rational::from_integer(*y), flag: if *e || n == 0 { Flag::Exact } else { Flag::AtLeast } })
            .collect();
        let poly = Polygon::new(pts.clone());
        prop_assert!(poly.is_lower_convex());
        for p in pts.iter().filter(|p| p.flag == Flag::Exact) {
            prop_assert!(poly.value_at(p.n).unwrap() <= p.y);
        }
    }

    #[test]
    fn lower_bound_scales_with_valuation(t in 1usize..4, a in 1i64..5) {
        let lam = lambda_profile(3, t, 80);
        let (lo, hi) = (lb_polygon(&lam, r(1, 10)), lb_polygon(&lam, r(a, 10)));
        for n in 0..=80 {
            prop_assert_eq!(hi.value_at(n).unwrap(), lo.value_at(n).unwrap() * Rational::from_integer(a));
        }
    }
}

#[test]
fn constant_unit_root_has_slope_zero() {
    let f = series(&[&[1], &[-1]]);
    let poly = newton_at(&f, &WeightSpec::boundary(0, r(1, 2)).unwrap()).unwrap();
    assert_eq!(poly.slopes(), vec![(r(0, 1), 1)]);
}

#[test]
fn t_root_has_slope_v() {
    let f = series(&[&[1], &[0, -1]]);
    let poly = newton_at(&f, &WeightSpec::boundary(0, r(1, 2)).unwrap()).unwrap();
    assert_eq!(poly.slopes(), vec![(r(1, 2), 1)]);
}

#[test]
fn boundary_specializations() {
    let w = WeightSpec::boundary(0, r(1, 2)).unwrap();
    let sq = TSeries::from_coeffs(window(), &[0, 3, 1]);
    assert_eq!(specialize(&sq, &w).unwrap(), Specialized::Valuation(Val::exact(r(1, 1))));
    let cube = TSeries::from_coeffs(window(), &[0, 3, 0, 1]);
    let Specialized::Valuation(v) = specialize(&cube, &w).unwrap() else { panic!() };
    assert_eq!((v.value, v.flag), (r(3, 2), Flag::Tie));
}

#[test]
fn universal_weight_has_no_polygon() {
    assert!(newton_at(&series(&[&[1]]), &WeightSpec::universal(0)).is_err());
}

#[test]
fn bound_polygons_meet_at_n1() {
    let t = 22;
    let lam = lambda_profile(3, t, 600);
    let v = r(1, 100);
    let ub = ub_polygon(3, t, 600, v);
    let lb = lb_polygon(&lam, v);
    assert_eq!(ub.breakpoints(), vec![0, 264, 528, 792]);
    assert_eq!(lambda_at_nk(3, t, 2), lam.at(528));
    for n in [0, 264, 528] {
        assert_eq!(ub.value_at(n), lb.value_at(n));
    }
    assert!(ub.value_at(100).unwrap() > lb.value_at(100).unwrap());
}

#[test]
fn sandwich_flags_points_below_lower_bound() {
    let lb = Polygon::from_values(&[(0, r(0, 1)), (2, r(2, 1))]);
    let ub = Polygon::from_values(&[(0, r(0, 1)), (2, r(4, 1))]);
    let good = Polygon::from_values(&[(0, r(0, 1)), (1, r(1, 1)), (2, r(3, 1))]);
    assert_eq!(sandwich(&good, &lb, &ub).lb.fail, 0);
    let bad = Polygon::from_values(&[(0, r(0, 1)), (1, r(1, 2)), (2, r(3, 1))]);
    assert_eq!(sandwich(&bad, &lb, &ub).lb.fail, 1);
}

#[test]
fn radius_is_enforced() {
    let md = ManinData::new(3, 11, 1).unwrap();
    assert_eq!(boundary_radius(3, md.st()), r(1, 89));
    let u = assemble_up(&md, 0, window(), 3).unwrap();
    let f = fredholm(&u, 8, 2).unwrap();
    match halo_decompose(&f, &[r(1, 7)], 3, md.t()) {
        Err(Error::Domain(msg)) => assert!(msg.contains("1/89"), "{msg}"),
        other => panic!("expected refusal, got {other:?}"),
    }
    let rep = halo_decompose(&f, &[r(1, 90), r(1, 97)], 3, md.t()).unwrap();
    assert_eq!(rep.sandwich.lb.fail + rep.sandwich.ub.fail + rep.dichotomy.fail, 0);
    assert_ne!(rep.stability, Verdict::Fail);
}
