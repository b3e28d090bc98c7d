use crate::cache;
use crate::config::RunConfig;
use crate::output::{q, tally, Report};
use halo_core::classical::{atkin_lehner_check, classical_up, control_check, slopes, Epsilon, Slope};
use halo_core::manin::ManinData;
use halo_core::newton::{ap_detect, halo_decompose, newton_at, Flag, Polygon};
use halo_core::padic::{center_beta, WeightSpec, Window};
use halo_core::spectral::{
    assemble_from_table, coefficient_bound_check, degree_level, degrees_for_level, fredholm, lambda_profile, FredholmSeries,
    UpMatrix,
};
use halo_core::verdict::Verdict;
use halo_core::{Error, Result};
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub fn manin_data(cfg: &RunConfig) -> Result<ManinData> {
    ManinData::new(cfg.p as i128, cfg.l as i128, 1)
}

pub fn n_deg(cfg: &RunConfig) -> usize {
    cfg.n_deg.unwrap_or_else(|| degrees_for_level(cfg.p, cfg.trunc_level))
}

pub fn up_matrix(cfg: &RunConfig, md: &ManinData, j: u32) -> Result<UpMatrix> {
    let table = cache::up_table(md, cfg.cache_dir.as_deref())?;
    let window = Window::new(cfg.p, cfg.m, cfg.k_prec)?;
    assemble_from_table(cfg.p, md.st(), &table, j, window, n_deg(cfg))
}

pub fn series(cfg: &RunConfig, u: &UpMatrix) -> Result<FredholmSeries> {
    fredholm(u, cfg.n_max, cfg.trunc_level)
}

fn flag(f: Flag) -> &'static str {
    match f {
        Flag::Exact => "EXACT",
        Flag::AtLeast => "AT_LEAST",
        Flag::Tie => "TIE",
    }
}

fn slope_str(s: &Slope) -> String {
    match s {
        Slope::Finite(r) => q(r),
        Slope::Infinite => "inf".into(),
    }
}

pub fn cmd_domain(cfg: &RunConfig) -> Result<Report> {
    let md = manin_data(cfg)?;
    let fd = &md.fd;
    let n = fd.level;
    let b = &fd.boundary;
    let mut checks: Vec<(&str, bool)> = vec![
        ("triangle count = index / 3", 3 * fd.triangles.len() == fd.index()),
        ("boundary is a closed loop", (0..b.len()).all(|i| b[i].end == b[(i + 1) % b.len()].start)),
        ("pairing is fixed-point free", !fd.has_fixed_edges()),
        (
            "pairing elements glue partner edges",
            fd.pairs.iter().all(|p| p.gamma.in_gamma0(n) && b[p.e_star].act(&p.gamma) == b[p.e].reverse()),
        ),
        ("Euler characteristic is 1", fd.euler_characteristic() == 1),
    ];
    checks.push(("Manin relation", fd.manin_relation_check()?));
    checks.push(("no vertex but oo lies in the orbit of oo", fd.free_generators().is_ok()));
    if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
        return Err(Error::Internal(format!("domain invariant failed: {name}")));
    }
    let triangles: Vec<Value> =
        fd.triangles.iter().map(|t| json!(t.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>())).collect();
    let verdicts: BTreeMap<&str, String> = checks.iter().map(|(k, ok)| (*k, Verdict::from_bool(*ok).to_string())).collect();
    let body = json!({
        "p": cfg.p.to_string(),
        "l": cfg.l.to_string(),
        "level": n.to_string(),
        "index": fd.index().to_string(),
        "triangles": triangles,
        "triangle_count": fd.triangles.len().to_string(),
        "boundary_edges": b.len().to_string(),
        "t": md.t().to_string(),
        "st": md.st().to_string(),
        "checks": verdicts,
    });
    let mut csv = vec![vec!["check".to_string(), "verdict".to_string()]];
    csv.extend(checks.iter().map(|(k, ok)| vec![k.to_string(), Verdict::from_bool(*ok).to_string()]));
    Ok(Report::new("domain", body, csv, false))
}

pub fn cmd_fredholm(cfg: &RunConfig) -> Result<Report> {
    let md = manin_data(cfg)?;
    let u = up_matrix(cfg, &md, cfg.j)?;
    let f = series(cfg, &u)?;
    let lambda = lambda_profile(cfg.p, md.t(), cfg.n_max);
    let bound = coefficient_bound_check(&f, &lambda);
    let k_window = f.window().k;
    let mut csv = vec![["n", "m", "b", "certified_digits"].map(String::from).to_vec()];
    let coeffs: Vec<Value> = (0..=f.n_max())
        .map(|n| {
            let digits: Vec<u32> = (0..k_window).map(|m| f.certified_p_prec(n, m)).collect();
            let b: Vec<String> = (0..k_window).map(|m| f.certified_coeff(n, m).residue().to_string()).collect();
            for m in 0..k_window {
                csv.push(vec![n.to_string(), m.to_string(), b[m].clone(), digits[m].to_string()]);
            }
            json!({
                "n": n.to_string(),
                "level": f.level[n].min(u32::MAX - 1).to_string(),
                "b": b,
                "certified_digits": digits.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let failed = bound.fail + u.decay.fail + u.row_estimate.fail > 0;
    let body = json!({
        "p": cfg.p.to_string(),
        "l": cfg.l.to_string(),
        "component": cfg.j.to_string(),
        "prec_p": cfg.m.to_string(),
        "prec_t": cfg.k_prec.to_string(),
        "n_max": cfg.n_max.to_string(),
        "truncation": {
            "mahler_degrees": u.n_deg.to_string(),
            "n_cols": u.dim().to_string(),
            "level": degree_level(u.n_deg, cfg.p).to_string(),
            "t_window": k_window.to_string(),
            "nonzero_entries": u.nnz().to_string(),
        },
        "verdicts": {
            "entry decay": tally(&u.decay),
            "row estimate": tally(&u.row_estimate),
            "Fredholm coefficient bound": tally(&bound),
        },
        "coefficients": coeffs,
    });
    Ok(Report::new("fredholm", body, csv, failed))
}

fn polygon_json(label: String, poly: &Polygon) -> Value {
    json!({
        "weight": label,
        "points": poly.points.iter().map(|p| json!({"n": p.n.to_string(), "v": q(&p.y), "flag": flag(p.flag)})).collect::<Vec<_>>(),
        "segments": poly.segments.iter().map(|s| json!({
            "from": s.from.to_string(), "to": s.to.to_string(), "slope": q(&s.slope), "flagged": s.flagged,
        })).collect::<Vec<_>>(),
    })
}

pub fn cmd_newton(cfg: &RunConfig) -> Result<Report> {
    let md = manin_data(cfg)?;
    let f = series(cfg, &up_matrix(cfg, &md, cfg.j)?)?;
    let mut weights: Vec<(String, WeightSpec)> =
        cfg.betas.iter().map(|v| Ok((format!("v={}", q(v)), WeightSpec::boundary(cfg.j, *v)?))).collect::<Result<_>>()?;
    if weights.is_empty() {
        if cfg.k < 0 {
            return Err(Error::Usage("--k must be non-negative".into()));
        }
        let beta = center_beta(cfg.p, cfg.k as u32, cfg.m);
        weights.push((format!("k={}", cfg.k), WeightSpec::center(cfg.j, beta)?));
    }
    let mut csv = vec![["weight", "from", "to", "slope", "flagged"].map(String::from).to_vec()];
    let mut polys = Vec::new();
    for (label, w) in weights {
        let poly = newton_at(&f, &w)?;
        for s in &poly.segments {
            csv.push(vec![label.clone(), s.from.to_string(), s.to.to_string(), q(&s.slope), s.flagged.to_string()]);
        }
        polys.push(polygon_json(label, &poly));
    }
    let body = json!({ "p": cfg.p.to_string(), "l": cfg.l.to_string(), "component": cfg.j.to_string(), "polygons": polys });
    Ok(Report::new("newton", body, csv, false))
}

pub fn cmd_halo(cfg: &RunConfig) -> Result<Report> {
    if cfg.betas.is_empty() {
        return Err(Error::Usage("halo needs at least one --beta".into()));
    }
    let md = manin_data(cfg)?;
    let radius = halo_core::newton::boundary_radius(cfg.p, md.st());
    if let Some(v) = cfg.betas.iter().find(|v| **v >= radius) {
        return Err(Error::Domain(format!("v(beta) = {} refused: the boundary radius is {}", q(v), q(&radius))));
    }
    let f = series(cfg, &up_matrix(cfg, &md, cfg.j)?)?;
    let rep = halo_decompose(&f, &cfg.betas, cfg.p, md.t())?;
    let ap = ap_detect(&rep.ratio_multiset(), cfg.ap_budget(md.st()), None);
    let sandwich_fail = rep.sandwich.lb.fail + rep.sandwich.ub.fail;
    let failed = sandwich_fail > 0 || rep.stability.is_fail() || rep.dichotomy.fail > 0;
    let mut csv = vec![["from", "to", "degree", "ratio", "alpha", "flagged"].map(String::from).to_vec()];
    let comps: Vec<Value> = rep
        .components
        .iter()
        .map(|c| {
            csv.push(vec![c.from.to_string(), c.to.to_string(), c.degree.to_string(), q(&c.ratio), q(&c.alpha), c.flagged.to_string()]);
            json!({
                "from": c.from.to_string(),
                "to": c.to.to_string(),
                "degree": c.degree.to_string(),
                "ratio": q(&c.ratio),
                "alpha": q(&c.alpha),
                "interval": c.interval.map(|i| if i.open { format!("({}, {})", i.k, i.k + 1) } else { format!("[{0}, {0}]", i.k) }),
                "flagged": c.flagged,
            })
        })
        .collect();
    let body = json!({
        "p": cfg.p.to_string(),
        "l": cfg.l.to_string(),
        "n_max": rep.n_max.to_string(),
        "radius": q(&rep.radius),
        "samples": rep.samples.iter().map(q).collect::<Vec<_>>(),
        "breakpoints": rep.breakpoints.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "components": comps,
        "verdicts": {
            "lower bound": tally(&rep.sandwich.lb),
            "upper bound": tally(&rep.sandwich.ub),
            "stability across samples": rep.stability.to_string(),
            "slope intervals": rep.intervals.to_string(),
            "unit dichotomy": tally(&rep.dichotomy),
            "h consistency": tally(&rep.h_consistency),
        },
        "progressions": {
            "budget": ap.budget.to_string(),
            "within_budget": ap.within_budget,
            "found": ap.progressions.iter().map(|p| json!({
                "start": q(&p.start), "step": p.step.as_ref().map(q), "len": p.len.to_string(),
            })).collect::<Vec<_>>(),
            "residual": ap.residual.iter().map(q).collect::<Vec<_>>(),
        },
    });
    Ok(Report::new("halo", body, csv, failed))
}

pub fn cmd_classical(cfg: &RunConfig) -> Result<Report> {
    if cfg.k < 0 {
        return Err(Error::Usage(format!("--k {} must be non-negative", cfg.k)));
    }
    let md = manin_data(cfg)?;
    let k = cfg.k as usize;
    let s = slopes(&classical_up(&md, k, cfg.eps)?, cfg.p);
    let mut mult: BTreeMap<Slope, usize> = BTreeMap::new();
    for x in &s {
        *mult.entry(*x).or_insert(0) += 1;
    }
    let al = atkin_lehner_check(&md, cfg.k, cfg.eps)?;
    let control = if cfg.eps == Epsilon::Trivial { Some(control_check(&md, k, cfg.eps)?) } else { None };
    let failed = al.verdict.is_fail() || control.as_ref().is_some_and(|c| c.verdict.is_fail());
    let mut csv = vec![vec!["slope".to_string(), "multiplicity".to_string()]];
    csv.extend(mult.iter().map(|(s, m)| vec![slope_str(s), m.to_string()]));
    let body = json!({
        "p": cfg.p.to_string(),
        "l": cfg.l.to_string(),
        "k": k.to_string(),
        "eps": format!("{:?}", cfg.eps).to_lowercase(),
        "dimension": s.len().to_string(),
        "slopes": mult.iter().map(|(s, m)| json!({"slope": slope_str(s), "multiplicity": m.to_string()})).collect::<Vec<_>>(),
        "Atkin-Lehner pairing": {
            "verdict": al.verdict.to_string(),
            "pairing": al.pairing.to_string(),
            "unpaired": al.unpaired.len().to_string(),
            "slope 0 multiplicity": al.mult_ordinary.to_string(),
            "slope k+1 multiplicity": al.mult_critical.to_string(),
            "W": al.w.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "W^2 scalar": al.w_square.clone(),
        },
        "control theorem": control.map(|c| json!({
            "verdict": c.verdict.to_string(),
            "classical below k+1": c.classical.iter().map(q).collect::<Vec<_>>(),
            "overconvergent below k+1": c.overconvergent.iter().map(q).collect::<Vec<_>>(),
            "block triangular": c.triangular.to_string(),
            "integral lift": c.lift.to_string(),
            "tail slopes >= k+1": c.tail.to_string(),
            "ordinary rank": c.ordinary_rank.to_string(),
        })),
    });
    Ok(Report::new("classical", body, csv, failed))
}
