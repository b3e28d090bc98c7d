use super::polygon::{Flag, Point, Polygon};
use crate::arith::{fmt_rational, Rational};
use crate::error::{Error, Result};
use crate::padic::{point_valuation, PAdicInt, PVal, Val, WeightMode, WeightSpec};
use crate::spectral::{FredholmSeries, LambdaProfile};
use crate::verdict::{Tally, Verdict};
use serde::{Deserialize, Serialize};

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn certified_coeffs(f: &FredholmSeries, n: usize) -> Vec<PAdicInt> {
    (0..f.window().k).map(|m| f.certified_coeff(n, m)).collect()
}

fn to_point(n: usize, v: Val) -> Point {
    Point { n, y: v.value, flag: v.flag }
}

/// v(c_n(beta)) at a boundary valuation, with the index attaining it when that is unique.
pub fn boundary_point(f: &FredholmSeries, n: usize, v: Rational) -> (Val, Option<usize>) {
    let coeffs = certified_coeffs(f, n);
    let val = point_valuation(&coeffs, v);
    let arg = (val.flag == Flag::Exact).then(|| {
        coeffs.iter().enumerate().find_map(|(m, c)| match c.valuation() {
            PVal::Exact(e) if q(e as i64) + v * q(m as i64) == val.value => Some(m),
            _ => None,
        })
    });
    (val, arg.flatten())
}

/// Newton polygon of the specialized series; non-exact points are kept as constraints.
pub fn newton_at(f: &FredholmSeries, w: &WeightSpec) -> Result<Polygon> {
    let points = (0..=f.n_max())
        .map(|n| -> Result<Point> {
            match &w.mode {
                WeightMode::Universal => Err(Error::Usage("Newton polygons need a specialized weight".into())),
                WeightMode::Boundary(v) => Ok(to_point(n, boundary_point(f, n, *v).0)),
                WeightMode::Center(beta) => {
                    let c = f.coeffs[n].evaluate(beta)?.with_prec(f.certified_center_prec(n));
                    Ok(match c.valuation() {
                        PVal::Exact(e) => Point { n, y: q(e as i64), flag: Flag::Exact },
                        PVal::AtLeast(e) => Point { n, y: q(e as i64), flag: Flag::AtLeast },
                    })
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Polygon::new(points))
}

/// Points (n, lambda(n) v).
pub fn lb_polygon(lambda: &LambdaProfile, v: Rational) -> Polygon {
    Polygon::from_values(&lambda.values.iter().enumerate().map(|(n, &l)| (n, q(l) * v)).collect::<Vec<_>>())
}

/// lambda(n_k) = (p-1)p(p+1)k^2 t/2.
pub fn lambda_at_nk(p: u64, t: usize, k: usize) -> i64 {
    let (p, t, k) = (p as i64, t as i64, k as i64);
    (p - 1) * p * (p + 1) * k * k * t / 2
}

/// Vertices (n_k, lambda(n_k) v) for every n_k up to and including the first one past n_max.
pub fn ub_polygon(p: u64, t: usize, n_max: usize, v: Rational) -> Polygon {
    let step = p as usize * (p as usize + 1) * t;
    let mut pts = Vec::new();
    for k in 0.. {
        let nk = step * k;
        pts.push((nk, q(lambda_at_nk(p, t, k)) * v));
        if nk >= n_max {
            break;
        }
    }
    Polygon::from_values(&pts)
}

/// LB <= Newt and Newt <= UB verdicts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sandwich {
    pub lb: Tally,
    pub ub: Tally,
}

pub fn sandwich(newt: &Polygon, lb: &Polygon, ub: &Polygon) -> Sandwich {
    let mut out = Sandwich::default();
    for pt in &newt.points {
        let Some(l) = lb.value_at(pt.n) else { continue };
        out.lb.add(match (pt.y >= l, pt.flag) {
            (true, _) => Verdict::Pass,
            (false, Flag::Exact) => Verdict::Fail,
            _ => Verdict::Inconclusive,
        });
    }
    // the hull of exact points bounds the true polygon from above on its range
    for n in 0..=newt.max_x() {
        if let (Some(h), Some(u)) = (newt.value_at(n), ub.value_at(n)) {
            out.ub.add(if h <= u { Verdict::Pass } else { Verdict::Inconclusive });
        }
    }
    out
}

/// Unit detection of b_{n, lambda(n)}: None when no digit is certified.
pub fn lambda_unit(f: &FredholmSeries, lambda: &LambdaProfile, n: usize) -> Option<bool> {
    let m = lambda.at(n) as usize;
    if f.certified_p_prec(n, m) == 0 {
        return None;
    }
    Some(f.certified_coeff(n, m).is_unit())
}

/// Either v(c_n) = lambda(n) v (unit case) or v(c_n) >= lambda(n) v + min(v, 1 - v).
pub fn dichotomy(f: &FredholmSeries, lambda: &LambdaProfile, v: Rational) -> Tally {
    let mut t = Tally::default();
    for n in 0..=f.n_max() {
        let (val, _) = boundary_point(f, n, v);
        let base = q(lambda.at(n)) * v;
        let verdict = match lambda_unit(f, lambda, n) {
            None => Verdict::Inconclusive,
            Some(true) => match val.flag {
                Flag::Exact => Verdict::from_bool(val.value == base),
                _ if val.value > base => Verdict::Fail,
                _ => Verdict::Inconclusive,
            },
            Some(false) => {
                let need = base + v.min(q(1) - v);
                match (val.value >= need, val.flag) {
                    (true, _) => Verdict::Pass,
                    (false, Flag::Exact) => Verdict::Fail,
                    _ => Verdict::Inconclusive,
                }
            }
        };
        t.add(verdict);
    }
    t
}

/// 8 / (st(p^2 - 1) + 8).
pub fn boundary_radius(p: u64, st: usize) -> Rational {
    let p = p as i64;
    Rational::new(8, st as i64 * (p * p - 1) + 8)
}

/// Interval I of a component: [k, k] or (k, k + 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeInterval {
    pub k: i64,
    pub open: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaloComponent {
    pub from: usize,
    pub to: usize,
    pub degree: usize,
    /// slope / v(beta)
    pub ratio: Rational,
    /// ratio / (p - 1)
    pub alpha: Rational,
    pub interval: Option<SlopeInterval>,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaloReport {
    pub n_max: usize,
    pub radius: Rational,
    pub samples: Vec<Rational>,
    pub breakpoints: Vec<usize>,
    pub components: Vec<HaloComponent>,
    /// Breakpoints and ratios agree across samples.
    pub stability: Verdict,
    pub intervals: Verdict,
    pub sandwich: Sandwich,
    pub dichotomy: Tally,
    /// b_{n, lambda(n)} is a unit (None: undetermined).
    pub lambda_units: Vec<Option<bool>>,
    /// h_n with v(c_n(beta)) = h_n v(beta), when a unit coefficient attains it.
    pub h: Vec<Option<usize>>,
    pub h_consistency: Tally,
}

fn interval_of(p: u64, t: usize, from: usize, to: usize, ratio: Rational) -> Option<SlopeInterval> {
    let step = p as usize * (p as usize + 1) * t;
    let pm1 = q(p as i64 - 1);
    let k = from / step;
    if to > (k + 1) * step {
        // straddles n_{k+1}: must be the segment of slope (p-1)(k+1)
        return (ratio == pm1 * q(k as i64 + 1)).then_some(SlopeInterval { k: k as i64 + 1, open: false });
    }
    let (lo, hi) = (pm1 * q(k as i64), pm1 * q(k as i64 + 1));
    if ratio == lo {
        Some(SlopeInterval { k: k as i64, open: false })
    } else if ratio == hi {
        Some(SlopeInterval { k: k as i64 + 1, open: false })
    } else if ratio > lo && ratio < hi {
        Some(SlopeInterval { k: k as i64, open: true })
    } else {
        None
    }
}

/// Boundary decomposition over several v(beta) below the radius.
pub fn halo_decompose(f: &FredholmSeries, samples: &[Rational], p: u64, t: usize) -> Result<HaloReport> {
    let st = (p as usize + 1) * t;
    let radius = boundary_radius(p, st);
    if samples.is_empty() {
        return Err(Error::Usage("halo analysis needs at least one v(beta)".into()));
    }
    for &v in samples {
        if v <= q(0) || v >= radius {
            return Err(Error::Domain(format!(
                "v(beta) = {} is not in (0, {}), the boundary radius for st = {st}",
                fmt_rational(&v),
                fmt_rational(&radius)
            )));
        }
    }
    let n_max = f.n_max();
    let lambda = crate::spectral::lambda_profile(p, t, n_max);
    let mut polys = Vec::new();
    let mut sand = Sandwich::default();
    let mut dich = Tally::default();
    for &v in samples {
        let poly = newton_at(f, &WeightSpec::boundary(0, v)?)?;
        let s = sandwich(&poly, &lb_polygon(&lambda, v), &ub_polygon(p, t, n_max, v));
        sand.lb.merge(&s.lb);
        sand.ub.merge(&s.ub);
        dich.merge(&dichotomy(f, &lambda, v));
        polys.push(poly);
    }
    let first = &polys[0];
    let exact_set = |pl: &Polygon| pl.points.iter().filter(|x| x.flag == Flag::Exact).map(|x| x.n).collect::<Vec<_>>();
    let ratios = |pl: &Polygon, v: Rational| pl.segments.iter().map(|s| s.slope / v).collect::<Vec<_>>();
    let mut stability = Verdict::Pass;
    for (pl, &v) in polys.iter().zip(samples).skip(1) {
        let same = pl.breakpoints() == first.breakpoints() && ratios(pl, v) == ratios(first, samples[0]);
        if !same {
            let v = if exact_set(pl) == exact_set(first) { Verdict::Fail } else { Verdict::Inconclusive };
            stability = stability.and(v);
        }
    }
    let mut intervals = Verdict::Pass;
    let components: Vec<HaloComponent> = first
        .segments
        .iter()
        .map(|s| {
            let ratio = s.slope / samples[0];
            let interval = interval_of(p, t, s.from, s.to, ratio);
            let flagged = polys.iter().any(|pl| pl.segments.iter().any(|x| x.from == s.from && x.flagged));
            intervals = intervals.and(match (interval.is_some(), flagged) {
                (true, _) => Verdict::Pass,
                (false, true) => Verdict::Inconclusive,
                (false, false) => Verdict::Fail,
            });
            HaloComponent { from: s.from, to: s.to, degree: s.len(), ratio, alpha: ratio / q(p as i64 - 1), interval, flagged }
        })
        .collect();
    let lambda_units = (0..=n_max).map(|n| lambda_unit(f, &lambda, n)).collect();
    let mut h = Vec::with_capacity(n_max + 1);
    let mut h_consistency = Tally::default();
    for n in 0..=n_max {
        let (_, arg) = boundary_point(f, n, samples[0]);
        let hn = arg.filter(|&m| f.certified_coeff(n, m).is_unit());
        if let Some(m) = hn {
            for &v in samples {
                let (val, _) = boundary_point(f, n, v);
                h_consistency.add(match val.flag {
                    Flag::Exact => Verdict::from_bool(val.value == q(m as i64) * v),
                    _ => Verdict::Inconclusive,
                });
            }
        } else {
            h_consistency.add(Verdict::Inconclusive);
        }
        h.push(hn);
    }
    Ok(HaloReport {
        n_max,
        radius,
        samples: samples.to_vec(),
        breakpoints: first.breakpoints(),
        components,
        stability,
        intervals,
        sandwich: sand,
        dichotomy: dich,
        lambda_units,
        h,
        h_consistency,
    })
}

impl HaloReport {
    /// Slope ratios with multiplicity, from the stable window.
    pub fn ratio_multiset(&self) -> Vec<(Rational, usize)> {
        self.components.iter().map(|c| (c.ratio, c.degree)).collect()
    }

    pub fn covered(&self) -> usize {
        self.components.iter().map(|c| c.degree).sum()
    }
}
