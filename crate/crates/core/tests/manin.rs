use halo_core::arith::ext_gcd;
use halo_core::manin::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::OnceLock;

fn md() -> &'static ManinData {
    static MD: OnceLock<ManinData> = OnceLock::new();
    MD.get_or_init(|| ManinData::new(3, 11, 1).unwrap())
}

fn random_gamma0(rng: &mut ChaCha8Rng, n: i128) -> Mat2 {
    loop {
        let c = n * rng.gen_range(-50i128..50);
        let d = rng.gen_range(-2000i128..2000);
        let (g, x, y) = ext_gcd(d, c);
        if g == 1 {
            return Mat2::new(x, -y, c, d);
        }
    }
}

fn random_cusp(rng: &mut ChaCha8Rng, n: i128) -> Cusp {
    loop {
        let x = Cusp::new(rng.gen_range(-1_000_000i128..=1_000_000), rng.gen_range(1i128..=1_000_000));
        if !x.equivalent_to_infinity(n) {
            return x;
        }
    }
}

// Unordered classes of both orientations of a triangle's edges: a Gamma_0(N)-invariant.
fn triangle_class(p1: &P1, v: [Cusp; 3]) -> BTreeSet<usize> {
    let mut s = BTreeSet::new();
    for i in 0..3 {
        let e = UnimodPath::new(v[i], v[(i + 1) % 3]);
        s.insert(p1.coset_of(&e.sl2()));
        s.insert(p1.coset_of(&e.reverse().sl2()));
    }
    s
}

fn assert_closed_loop(fd: &FundamentalDomain) {
    let b = &fd.boundary;
    for i in 0..b.len() {
        assert_eq!(b[i].end, b[(i + 1) % b.len()].start);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn cf_chain_telescopes(a in -10_000i128..10_000, c in 0i128..10_000, b in -10_000i128..10_000, d in 0i128..10_000) {
        prop_assume!(a != 0 || c != 0);
        prop_assume!(b != 0 || d != 0);
        let (x, y) = (Cusp::new(a, c), Cusp::new(b, d));
        let chain = cf_decompose(x, y);
        let mut total = Divisor::zero();
        for e in &chain {
            prop_assert_eq!(e.matrix().det().abs(), 1);
            total.add_scaled(&e.boundary(), 1);
        }
        if x == y {
            prop_assert!(chain.is_empty());
        } else {
            prop_assert_eq!(chain[0].start, x);
            prop_assert_eq!(chain.last().unwrap().end, y);
        }
        prop_assert_eq!(total, Divisor::path(x, y));
    }
}

#[test]
fn cf_examples() {
    let single = cf_decompose(Cusp::INFINITY, Cusp::int(0));
    assert_eq!(single.len(), 1);
    let ends: Vec<Cusp> = cf_decompose(Cusp::INFINITY, Cusp::new(3, 7)).iter().map(|e| e.end).collect();
    assert_eq!(ends, vec![Cusp::int(0), Cusp::new(1, 2), Cusp::new(3, 7)]);
    assert!(cf_decompose(Cusp::new(2, 5), Cusp::new(2, 5)).is_empty());
}

#[test]
fn coset_counts() {
    assert_eq!(coset_reps(1), vec![Mat2::IDENTITY]);
    assert_eq!(coset_reps(5).len(), 6);
    // brute force: primitive pairs mod 121 up to units
    let n = 121i128;
    let mut classes = BTreeSet::new();
    for c in 0..n {
        for d in 0..n {
            if halo_core::arith::gcd(halo_core::arith::gcd(c, d), n) != 1 {
                continue;
            }
            let canon = (1..n).filter(|u| u % 11 != 0).map(|u| ((u * c) % n, (u * d) % n)).min().unwrap();
            classes.insert(canon);
        }
    }
    let reps = coset_reps(n);
    assert_eq!(reps.len(), classes.len());
    assert_eq!(reps.len(), 132);
    let p1 = P1::new(n);
    let hit: BTreeSet<usize> = reps.iter().map(|g| p1.coset_of(g)).collect();
    assert_eq!(hit.len(), 132);
}

#[test]
fn level_five_domain() {
    let fd = build_domain(5).unwrap();
    assert_eq!(fd.triangles.len(), 2);
    assert_closed_loop(&fd);
}

#[test]
fn level_eleven_matches_the_four_triangles() {
    let fd = build_domain(11).unwrap();
    let c = |a, b| Cusp::new(a, b);
    let listed = [
        [c(0, 1), Cusp::INFINITY, c(1, 1)],
        [c(0, 1), c(1, 1), c(1, 2)],
        [c(0, 1), c(1, 2), c(1, 3)],
        [c(1, 2), c(1, 1), c(2, 3)],
    ];
    let mut want: Vec<BTreeSet<usize>> = listed.iter().map(|v| triangle_class(&fd.p1, *v)).collect();
    let mut got: Vec<BTreeSet<usize>> = fd.triangles.iter().map(|t| triangle_class(&fd.p1, t.vertices)).collect();
    want.sort();
    got.sort();
    assert_eq!(got, want);
    assert!(fd.manin_relation_check().unwrap());
}

#[test]
fn level_121_domain_invariants() {
    let fd = &md().fd;
    assert_eq!(fd.triangles.len(), 44);
    assert_eq!(fd.index(), 132);
    let labels: BTreeSet<usize> = fd.triangles.iter().flat_map(|t| t.cosets).collect();
    assert_eq!(labels.len(), 132);
    assert_closed_loop(fd);
    assert_eq!(fd.euler_characteristic(), 1);
    assert!(!fd.has_fixed_edges());
    for v in fd.vertices() {
        assert!(v.is_infinity() || (v.num() >= 0 && v.num() <= v.den()));
    }
    for pair in &fd.pairs {
        let (e, es) = (fd.boundary[pair.e], fd.boundary[pair.e_star]);
        assert!(pair.gamma.in_gamma0(121));
        assert_eq!(es.act(&pair.gamma), e.reverse());
    }
    assert!(fd.manin_relation_check().unwrap());
    let gens = fd.free_generators().unwrap();
    assert_eq!(2 * (gens.len() + 1), fd.boundary.len());
    assert_eq!(gens.len(), md().t());
    assert_eq!(md().t(), 22);
    assert!(!Cusp::int(0).equivalent_to_infinity(121));
    assert_eq!(fd.vertices_equivalent_to_infinity(), vec![Cusp::INFINITY]);
}

#[test]
fn perturbed_pairing_breaks_manin_relation() {
    let fd = &md().fd;
    let mut gammas: Vec<Mat2> = fd.pairs.iter().map(|p| p.gamma).collect();
    gammas.swap(1, 2);
    assert!(!fd.manin_divisor(&gammas).is_zero());
}

#[test]
fn reduction_is_invariant() {
    let fd = &md().fd;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let rep = fd.reps[i % fd.reps.len()];
        assert_eq!(fd.reduce_to_e(&rep), (rep, Mat2::IDENTITY));
        let g = random_gamma0(&mut rng, 121);
        let (r, h) = fd.reduce_to_e(&rep.act(&g));
        assert_eq!(r, rep);
        assert_eq!(h, g.normalize_pm());
        assert_eq!(rep.act(&h), rep.act(&g));
    }
    for pair in &fd.pairs {
        let (r, h) = fd.reduce_to_e(&fd.boundary[pair.e].reverse());
        assert_eq!(r.act(&h), fd.boundary[pair.e].reverse());
    }
}

#[test]
fn express_round_trips() {
    let md = md();
    let gens = &md.ctx.generators;
    let w = md.express(&gens[0].boundary()).unwrap();
    assert_eq!(w, GroupWord::single(Mat2::IDENTITY, 1, 0));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let g = random_gamma0(&mut rng, 121);
        let j = rng.gen_range(0..gens.len());
        let mut d = gens[j].act(&g).boundary();
        d.add_scaled(&gens[j].boundary(), -1);
        let w = md.express(&d).unwrap();
        assert_eq!(w.evaluate(gens), d);
        assert!(w.len() <= 2);
    }
    for _ in 0..50 {
        let mut d = Divisor::zero();
        let k = rng.gen_range(2..5);
        let mut total = 0;
        for _ in 0..k - 1 {
            let m = rng.gen_range(-3i64..=3);
            d.add_point(random_cusp(&mut rng, 121), m);
            total += m;
        }
        d.add_point(random_cusp(&mut rng, 121), -total);
        assert_eq!(d.degree(), 0);
        assert_eq!(md.express(&d).unwrap().evaluate(gens), d);
    }
    let bad = Divisor::path(Cusp::new(1, 121), Cusp::int(0));
    assert!(md.express(&bad).is_err());
}

#[test]
fn level_lift_factors() {
    let lift = &md().lift;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    assert_eq!(lift.count(), 4);
    assert_eq!(lift.factor(&Mat2::IDENTITY), (Mat2::IDENTITY, 0));
    for _ in 0..100 {
        let g = random_gamma0(&mut rng, 121);
        let (delta, j) = lift.factor(&g);
        assert_eq!(delta.c % 363, 0);
        assert_eq!((delta * lift.etas[j]).normalize_pm(), g.normalize_pm());
        let g3 = random_gamma0(&mut rng, 363);
        assert_eq!(lift.factor(&g3).1, 0);
    }
}

#[test]
fn up_cosets_decompose_and_lie_in_the_monoid() {
    let md = md();
    let gens = md.lifted_generators();
    let table = md.up_table().unwrap();
    for (i, terms) in table.iter().enumerate() {
        for a in 0..3 {
            let gamma_a = Mat2::new(1, a, 0, 3);
            let mut d = Divisor::zero();
            for t in terms.iter().filter(|t| t.a == a) {
                assert!(in_lower_monoid(&t.g, 3));
                assert!(t.delta.in_gamma0(363));
                d.add_scaled(&gens[t.index].act(&t.delta).boundary(), t.coeff);
            }
            assert_eq!(d, Divisor::path(gamma_a.act(gens[i].start), gamma_a.act(gens[i].end)));
        }
    }
    let again = ManinData::new(3, 11, 1).unwrap().up_table().unwrap();
    assert_eq!(again, table);
    assert_eq!(table.iter().map(|t| t.len()).sum::<usize>(), 1089);
}
