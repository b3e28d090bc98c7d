//! The acceptance suite: one verdict row per criterion, shared by `verify-all` and the
//! acceptance test target.

use crate::commands::{manin_data, series, up_matrix};
use crate::config::RunConfig;
use crate::output::{q, tally, Report};
use halo_core::arith::Rational;
use halo_core::classical::{atkin_lehner_check, control_check, Epsilon};
use halo_core::dist::{act_matrix, CharCache};
use halo_core::manin::{build_domain, Cusp, Divisor, ManinData, Mat2, UnimodPath, P1};
use halo_core::newton::{ap_detect, halo_decompose, newton_at, Flag, HaloReport};
use halo_core::padic::{center_beta, WeightSpec, Window};
use halo_core::spectral::{coefficient_bound_check, lambda_profile, specialize_check, FredholmSeries, UpMatrix};
use halo_core::verdict::{Tally, Verdict};
use halo_core::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};

#[derive(Clone, Debug)]
pub struct Row {
    pub id: &'static str,
    pub statement: &'static str,
    pub verdict: Verdict,
    pub detail: String,
    /// Reason the criterion cannot pass as stated, when it is known not to.
    pub known: Option<&'static str>,
}

pub const KNOWN_8: &str = "weight 0 with the quadratic character mod 3 is odd, so its space is the even twist's; \
its 44 slope-0 p-new forms have no slope-1 partners";
pub const KNOWN_9: &str = "1/7, 1/11 and 2/15 all exceed the boundary radius 1/89 for st = 88, and the \
halo analysis refuses samples outside the radius";
pub const KNOWN_11: &str = "the point (n_1, lambda(n_1)/2) needs v(b_{n_1,m}) >= (n_1 - m)/2 certified for \
every m, beyond one-word p-adic precision";

/// Valuations below the boundary radius used in place of the listed samples.
pub fn halo_samples() -> Vec<Rational> {
    vec![Rational::new(1, 90), Rational::new(1, 97), Rational::new(2, 181)]
}

/// Shared, lazily built reference data.
pub struct Context {
    pub cfg: RunConfig,
    md: OnceLock<ManinData>,
    up0: OnceLock<UpMatrix>,
    f0: OnceLock<FredholmSeries>,
    halo: OnceLock<std::result::Result<HaloReport, String>>,
}

impl Context {
    pub fn new(cfg: RunConfig) -> Self {
        Context { cfg, md: OnceLock::new(), up0: OnceLock::new(), f0: OnceLock::new(), halo: OnceLock::new() }
    }

    pub fn md(&self) -> &ManinData {
        self.md.get_or_init(|| manin_data(&self.cfg).expect("validated level"))
    }

    pub fn up0(&self) -> &UpMatrix {
        self.up0.get_or_init(|| up_matrix(&self.cfg, self.md(), 0).expect("reference assembly"))
    }

    pub fn f0(&self) -> &FredholmSeries {
        self.f0.get_or_init(|| series(&self.cfg, self.up0()).expect("reference truncation certifies its level"))
    }

    fn halo(&self) -> &std::result::Result<HaloReport, String> {
        self.halo.get_or_init(|| halo_decompose(self.f0(), &halo_samples(), self.cfg.p, self.md().t()).map_err(|e| e.to_string()))
    }
}

fn row(id: &'static str, statement: &'static str, verdict: Verdict, detail: String) -> Row {
    Row { id, statement, verdict, detail, known: None }
}

fn errored(id: &'static str, statement: &'static str, e: halo_core::Error) -> Row {
    row(id, statement, Verdict::Fail, format!("error: {e}"))
}

// Classes of both orientations of a triangle's edges; invariant under Gamma_0(N).
fn triangle_class(p1: &P1, v: [Cusp; 3]) -> BTreeSet<usize> {
    let mut s = BTreeSet::new();
    for i in 0..3 {
        let e = UnimodPath::new(v[i], v[(i + 1) % 3]);
        s.insert(p1.coset_of(&e.sl2()));
        s.insert(p1.coset_of(&e.reverse().sl2()));
    }
    s
}

pub fn criterion_1(ctx: &Context) -> Row {
    let st = "domain of Gamma_0(121): triangles, Manin relation, cusp vertices";
    let md = ctx.md();
    let fd = &md.fd;
    let relation = match fd.manin_relation_check() {
        Ok(b) => b,
        Err(e) => return errored("1", st, e),
    };
    let vertices = fd.free_generators().is_ok();
    let ok = fd.triangles.len() == 44 && fd.index() == 132 && relation && vertices;
    let detail = format!(
        "{} triangles for index {}, t = {}, relation {}, vertex check {}",
        fd.triangles.len(),
        fd.index(),
        md.t(),
        Verdict::from_bool(relation),
        Verdict::from_bool(vertices)
    );
    row("1", st, Verdict::from_bool(ok), detail)
}

pub fn criterion_2(_: &Context) -> Row {
    let st = "Gamma_0(11) domain: the four listed ideal triangles";
    let fd = match build_domain(11) {
        Ok(fd) => fd,
        Err(e) => return errored("2", st, e),
    };
    let c = Cusp::new;
    let listed = [
        [c(0, 1), Cusp::INFINITY, c(1, 1)],
        [c(0, 1), c(1, 1), c(1, 2)],
        [c(0, 1), c(1, 2), c(1, 3)],
        [c(1, 2), c(1, 1), c(2, 3)],
    ];
    let mut want: Vec<_> = listed.iter().map(|v| triangle_class(&fd.p1, *v)).collect();
    let mut got: Vec<_> = fd.triangles.iter().map(|t| triangle_class(&fd.p1, t.vertices)).collect();
    want.sort();
    got.sort();
    let shown: Vec<String> =
        fd.triangles.iter().map(|t| format!("({})", t.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))).collect();
    row("2", st, Verdict::from_bool(got == want), format!("constructed {}", shown.join(" ")))
}

pub fn criterion_3(ctx: &Context) -> Row {
    let st = "divisor solver round trip on 200 random divisors";
    let md = ctx.md();
    let n = md.level();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut cusp = || loop {
        let x = Cusp::new(rng.gen_range(-1_000_000i128..=1_000_000), rng.gen_range(1i128..=1_000_000));
        if !x.equivalent_to_infinity(n) {
            return x;
        }
    };
    let mut ok = 0;
    let mut terms = 0;
    for i in 0..200 {
        let mut d = Divisor::zero();
        let pts: Vec<Cusp> = (0..2 + i % 4).map(|_| cusp()).collect();
        for (j, x) in pts.iter().enumerate() {
            let m = if j + 1 == pts.len() { -(j as i64) } else { 1 };
            d.add_point(*x, m);
        }
        match md.express(&d) {
            Ok(w) if w.evaluate(&md.ctx.generators) == d => {
                ok += 1;
                terms += w.len();
            }
            _ => {}
        }
    }
    row("3", st, Verdict::from_bool(ok == 200), format!("{ok}/200 exact, {terms} word terms in total"))
}

pub fn criterion_4(ctx: &Context) -> Row {
    let st = "entry decay of the action and row estimate of U_p";
    let p = ctx.cfg.p as i128;
    let window = match Window::new(ctx.cfg.p, ctx.cfg.m, ctx.cfg.k_prec) {
        Ok(w) => w,
        Err(e) => return errored("4", st, e),
    };
    let mut cache = CharCache::new(window, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let (mut lower, mut sigma0) = (Tally::default(), Tally::default());
    let mut done = 0;
    while done < 20 {
        let a = p * rng.gen_range(-30i128..30) + rng.gen_range(1..p);
        let g = Mat2::new(a, rng.gen_range(-90i128..90), p * rng.gen_range(-30i128..30), p * rng.gen_range(-30i128..30));
        if g.det() == 0 {
            continue;
        }
        match act_matrix(&g, &mut cache, 24, 24) {
            Ok(m) => {
                sigma0.merge(&m.sigma0);
                lower.merge(m.monoid.as_ref().expect("lower monoid element"));
            }
            Err(e) => return errored("4", st, e),
        }
        done += 1;
    }
    let u = ctx.up0();
    let fails = lower.fail + sigma0.fail + u.decay.fail + u.row_estimate.fail;
    let detail = format!(
        "random: lower {:?}, sigma0 {:?}; U_p ({} cols): decay {:?}, row {:?}",
        (lower.pass, lower.inconclusive, lower.fail),
        (sigma0.pass, sigma0.inconclusive, sigma0.fail),
        u.dim(),
        (u.decay.pass, u.decay.inconclusive, u.decay.fail),
        (u.row_estimate.pass, u.row_estimate.inconclusive, u.row_estimate.fail)
    );
    row("4", st, if fails == 0 { Verdict::Pass } else { Verdict::Fail }, detail)
}

pub fn criterion_5(ctx: &Context) -> Row {
    let st = "Fredholm coefficient bound v(b_{n,m}) >= lambda(n) - m";
    let t = ctx.md().t();
    let p = ctx.cfg.p;
    let f = ctx.f0();
    let lam = lambda_profile(p, t, f.n_max());
    let bound = coefficient_bound_check(f, &lam);
    let n1 = lam.n_k(1);
    let closed = ((p - 1) * p * (p + 1)) as i64 * t as i64 / 2;
    let recurrence = lambda_profile(p, t, n1).at(n1);
    let first = (0..=f.n_max()).find(|&n| lam.at(n) > 0);
    let detail = format!(
        "n <= {}: {:?} (lambda vanishes up to n = {}); lambda(n_1 = {n1}) = {recurrence}, closed form {closed}",
        f.n_max(),
        (bound.pass, bound.inconclusive, bound.fail),
        first.map_or(format!("{} at least", f.n_max()), |n| (n - 1).to_string())
    );
    let v = if bound.fail > 0 || recurrence != closed { Verdict::Fail } else { bound.verdict() };
    row("5", st, v, detail)
}

pub fn criterion_6(ctx: &Context) -> Row {
    let st = "specialization commutes with the Fredholm determinant";
    let cfg = &ctx.cfg;
    let n_cmp = 20;
    let (v0, l0) = match specialize_check(ctx.up0(), ctx.f0(), &center_beta(cfg.p, 0, cfg.m), n_cmp) {
        Ok(x) => x,
        Err(e) => return errored("6", st, e),
    };
    let one = (|| -> Result<_> {
        let u1 = up_matrix(cfg, ctx.md(), 1)?;
        let f1 = crate::commands::series(&RunConfig { n_max: n_cmp, ..cfg.clone() }, &u1)?;
        specialize_check(&u1, &f1, &center_beta(cfg.p, 1, cfg.m), n_cmp)
    })();
    let (v1, l1) = match one {
        Ok(x) => x,
        Err(e) => return errored("6", st, e),
    };
    let prec = |l: &[halo_core::spectral::SpecializeLine]| l.iter().map(|x| x.prec).min().unwrap_or(0);
    let detail = format!(
        "k=0: {} over n <= {n_cmp} mod p^{}; k=1: {} mod p^{}",
        v0,
        prec(&l0[1..]),
        v1,
        prec(&l1[1..])
    );
    row("6", st, v0.and(v1), detail)
}

pub fn criterion_7(ctx: &Context) -> Row {
    let st = "control theorem: slopes below k+1 at k = 0, 1";
    let mut v = Verdict::Pass;
    let mut parts = Vec::new();
    for k in 0..2 {
        match control_check(ctx.md(), k, Epsilon::Trivial) {
            Ok(r) => {
                v = v.and(r.verdict);
                parts.push(format!(
                    "k={k}: {} classical vs {} overconvergent slopes < {}, ordinary rank {} ({})",
                    r.classical.len(),
                    r.overconvergent.len(),
                    k + 1,
                    r.ordinary_rank,
                    r.verdict
                ));
            }
            Err(e) => return errored("7", st, e),
        }
    }
    row("7", st, v, parts.join("; "))
}

pub fn criterion_8(ctx: &Context) -> Row {
    let st = "Atkin-Lehner pairing at k = 0, quadratic character";
    match atkin_lehner_check(ctx.md(), 0, Epsilon::Quadratic) {
        Ok(r) => Row {
            known: Some(KNOWN_8),
            ..row(
                "8",
                st,
                r.verdict,
                format!(
                    "dim {}, {} unpaired, slope 0 x{} vs slope 1 x{}, W^2 scalar {:?}",
                    r.dim, r.unpaired.len(), r.mult_ordinary, r.mult_critical, r.w_square
                ),
            )
        },
        Err(e) => errored("8", st, e),
    }
}

pub fn criterion_8b(ctx: &Context) -> Row {
    let st = "Atkin-Lehner pairing at k = 1, quadratic character (even parity)";
    match atkin_lehner_check(ctx.md(), 1, Epsilon::Quadratic) {
        Ok(r) => row(
            "8b",
            st,
            r.verdict,
            format!(
                "dim {}, {} unpaired, slope 0 x{} vs slope 2 x{}, W^2 scalar {:?}",
                r.dim, r.unpaired.len(), r.mult_ordinary, r.mult_critical, r.w_square
            ),
        ),
        Err(e) => errored("8b", st, e),
    }
}

pub fn criterion_9(ctx: &Context) -> Row {
    let st = "halo window at v(beta) = 1/7, 1/11, 2/15";
    let listed = [Rational::new(1, 7), Rational::new(1, 11), Rational::new(2, 15)];
    let r = match halo_decompose(ctx.f0(), &listed, ctx.cfg.p, ctx.md().t()) {
        Ok(rep) => row("9", st, halo_verdict(&rep), halo_detail(&rep)),
        Err(e) => row("9", st, Verdict::Fail, format!("refused: {e}")),
    };
    Row { known: Some(KNOWN_9), ..r }
}

fn halo_verdict(rep: &HaloReport) -> Verdict {
    let s = &rep.sandwich;
    if s.lb.fail + s.ub.fail + rep.dichotomy.fail > 0 {
        return Verdict::Fail;
    }
    rep.stability.and(s.lb.verdict()).and(s.ub.verdict())
}

fn halo_detail(rep: &HaloReport) -> String {
    format!(
        "samples {}: breakpoints {:?}, ratios {}; LB {:?}, UB {:?}, stability {}",
        rep.samples.iter().map(q).collect::<Vec<_>>().join(", "),
        rep.breakpoints,
        rep.components.iter().map(|c| format!("{}x{}", q(&c.ratio), c.degree)).collect::<Vec<_>>().join(" "),
        (rep.sandwich.lb.pass, rep.sandwich.lb.inconclusive, rep.sandwich.lb.fail),
        (rep.sandwich.ub.pass, rep.sandwich.ub.inconclusive, rep.sandwich.ub.fail),
        rep.stability
    )
}

pub fn criterion_9b(ctx: &Context) -> Row {
    let st = "halo window at v(beta) = 1/90, 1/97, 2/181 (below the radius)";
    match ctx.halo() {
        Ok(rep) => row("9b", st, halo_verdict(rep), halo_detail(rep)),
        Err(e) => row("9b", st, Verdict::Fail, format!("error: {e}")),
    }
}

pub fn criterion_10(ctx: &Context) -> Row {
    let st = "arithmetic progressions cover the stable slope-ratio window";
    match ctx.halo() {
        Ok(rep) => {
            let budget = ctx.cfg.ap_budget(ctx.md().st());
            let ap = ap_detect(&rep.ratio_multiset(), budget, None);
            let mut found: std::collections::BTreeMap<String, usize> = std::collections::BTreeMap::new();
            for p in &ap.progressions {
                let key = match &p.step {
                    Some(d) => format!("{} + {} i (i < {})", q(&p.start), q(d), p.len),
                    None => format!("{{{}}}", q(&p.start)),
                };
                *found.entry(key).or_insert(0) += 1;
            }
            let found: Vec<String> = found.into_iter().map(|(k, m)| format!("{m} x {k}")).collect();
            let mut detail = format!(
                "{} progressions of budget {budget} over {} ratios: {}",
                ap.progressions.len(),
                rep.covered(),
                found.join("; ")
            );
            if rep.covered() <= budget {
                detail += "; window shorter than one period, so the budget alone admits any cover";
            }
            row("10", st, Verdict::from_bool(ap.within_budget), detail)
        }
        Err(e) => row("10", st, Verdict::Fail, format!("no halo report: {e}")),
    }
}

/// Newton polygon at v(beta) = 1/(p-1) on component 1 through (n_1, lambda(n_1)/(p-1)).
pub fn criterion_11(ctx: &Context) -> Row {
    let st = "touching point at k = 1";
    let p = ctx.cfg.p;
    let t = ctx.md().t();
    let lam = lambda_profile(p, t, 0);
    let n1 = lam.n_k(1);
    let cfg = RunConfig { n_max: n1, k_prec: n1 + 1, trunc_level: 2, n_deg: None, ..ctx.cfg.clone() };
    let run = (|| -> Result<_> {
        let u = up_matrix(&cfg, ctx.md(), 1)?;
        let f = series(&cfg, &u)?;
        let v = Rational::new(1, p as i64 - 1);
        newton_at(&f, &WeightSpec::boundary(1, v)?)
    })();
    let poly = match run {
        Ok(x) => x,
        Err(e) => return Row { known: Some(KNOWN_11), ..errored("11", st, e) },
    };
    let target = Rational::from_integer(lambda_profile(p, t, n1).at(n1)) / Rational::from_integer(p as i64 - 1);
    let pt = poly.points.iter().find(|x| x.n == n1).copied();
    let (verdict, detail) = match pt {
        Some(x) if x.flag == Flag::Exact => {
            let on = poly.value_at(n1) == Some(target) && x.y == target;
            (Verdict::from_bool(on), format!("c_{n1} at {} (EXACT), target {}", q(&x.y), q(&target)))
        }
        Some(x) if x.flag == Flag::Tie => (Verdict::Inconclusive, format!("c_{n1} at {} (TIE), target {}", q(&x.y), q(&target))),
        Some(x) => (Verdict::Fail, format!("c_{n1} only bounded below by {}; target {}", q(&x.y), q(&target))),
        None => (Verdict::Fail, format!("no point at n_1 = {n1}")),
    };
    Row { known: Some(KNOWN_11), ..row("11", st, verdict, detail) }
}

pub type Criterion = fn(&Context) -> Row;

pub fn criteria(extended: bool) -> Vec<Criterion> {
    let mut v: Vec<Criterion> = vec![
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_8b,
        criterion_9,
        criterion_9b,
        criterion_10,
    ];
    if extended {
        v.push(criterion_11);
    }
    v
}

/// Runs criteria on up to `jobs` threads; rows come back in criterion order.
pub fn run(ctx: &Context, list: &[Criterion]) -> Vec<Row> {
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<Option<Row>>> = Mutex::new(vec![None; list.len()]);
    std::thread::scope(|s| {
        for _ in 0..ctx.cfg.jobs.min(list.len()).max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(c) = list.get(i) else { break };
                let r = c(ctx);
                out.lock().unwrap()[i] = Some(r);
            });
        }
    });
    out.into_inner().unwrap().into_iter().map(|r| r.expect("every criterion ran")).collect()
}

pub fn table(rows: &[Row]) -> String {
    let mut s = String::new();
    for r in rows {
        let known = if r.known.is_some() && r.verdict != Verdict::Pass { " [known]" } else { "" };
        s.push_str(&format!("{:<4} {:<13} {}{}: {}\n", r.id, r.verdict.to_string(), r.statement, known, r.detail));
    }
    s
}

pub fn report(rows: &[Row]) -> Report {
    let body = json!({
        "criteria": rows.iter().map(|r| json!({
            "id": r.id,
            "statement": r.statement,
            "verdict": r.verdict.to_string(),
            "detail": r.detail,
            "known_unattainable": r.known,
        })).collect::<Vec<_>>(),
        "summary": tally(&rows.iter().fold(Tally::default(), |mut t, r| { t.add(r.verdict); t })),
    });
    let mut csv = vec![["id", "verdict", "statement", "detail"].map(String::from).to_vec()];
    csv.extend(rows.iter().map(|r| vec![r.id.to_string(), r.verdict.to_string(), r.statement.to_string(), r.detail.clone()]));
    Report::new("verify", body, csv, rows.iter().any(|r| r.verdict.is_fail()))
}
