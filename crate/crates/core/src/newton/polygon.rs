use crate::arith::Rational;
use serde::{Deserialize, Serialize};

pub use crate::padic::Flag;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point {
    pub n: usize,
    pub y: Rational,
    pub flag: Flag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub from: usize,
    pub to: usize,
    pub slope: Rational,
    /// Some non-exact point constrains this segment from below.
    pub flagged: bool,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.to - self.from
    }

    pub fn is_empty(&self) -> bool {
        self.to == self.from
    }
}

/// Lower convex hull of the EXACT points; other points are kept as constraints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polygon {
    pub points: Vec<Point>,
    pub hull: Vec<(usize, Rational)>,
    pub segments: Vec<Segment>,
}

fn slope(a: (usize, Rational), b: (usize, Rational)) -> Rational {
    (b.1 - a.1) / Rational::from_integer((b.0 - a.0) as i64)
}

impl Polygon {
    pub fn new(mut points: Vec<Point>) -> Self {
        points.sort_by_key(|p| p.n);
        let mut hull: Vec<(usize, Rational)> = Vec::new();
        for p in points.iter().filter(|p| p.flag == Flag::Exact) {
            let q = (p.n, p.y);
            if let Some(last) = hull.last() {
                if last.0 == q.0 {
                    continue;
                }
            }
            while hull.len() >= 2 {
                let (h1, h2) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if slope(h1, h2) >= slope(h2, q) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(q);
        }
        let segments = hull
            .windows(2)
            .map(|w| {
                let s = slope(w[0], w[1]);
                let flagged = points.iter().any(|p| {
                    p.flag != Flag::Exact
                        && p.n >= w[0].0
                        && p.n <= w[1].0
                        && p.y <= w[0].1 + s * Rational::from_integer((p.n - w[0].0) as i64)
                });
                Segment { from: w[0].0, to: w[1].0, slope: s, flagged }
            })
            .collect();
        Polygon { points, hull, segments }
    }

    /// Polygon through exact points (n, y_n).
    pub fn from_values(values: &[(usize, Rational)]) -> Self {
        Self::new(values.iter().map(|&(n, y)| Point { n, y, flag: Flag::Exact }).collect())
    }

    /// (slope, multiplicity) per hull segment, slopes non-decreasing.
    pub fn slopes(&self) -> Vec<(Rational, usize)> {
        self.segments.iter().map(|s| (s.slope, s.len())).collect()
    }

    /// Slopes expanded with multiplicity.
    pub fn slope_list(&self) -> Vec<Rational> {
        self.segments.iter().flat_map(|s| std::iter::repeat(s.slope).take(s.len())).collect()
    }

    pub fn breakpoints(&self) -> Vec<usize> {
        self.hull.iter().map(|h| h.0).collect()
    }

    /// Value of the hull at n, if n lies in its x-range.
    pub fn value_at(&self, n: usize) -> Option<Rational> {
        let first = self.hull.first()?;
        if n < first.0 {
            return None;
        }
        for w in self.hull.windows(2) {
            if n <= w[1].0 {
                return Some(w[0].1 + slope(w[0], w[1]) * Rational::from_integer((n - w[0].0) as i64));
            }
        }
        (self.hull.last()?.0 == n).then(|| self.hull.last().unwrap().1)
    }

    pub fn max_x(&self) -> usize {
        self.hull.last().map_or(0, |h| h.0)
    }

    /// Lower convexity and slope monotonicity of the hull.
    pub fn is_lower_convex(&self) -> bool {
        let exact_below = self.points.iter().filter(|p| p.flag == Flag::Exact).all(|p| match self.value_at(p.n) {
            Some(v) => p.y >= v,
            None => true,
        });
        exact_below && self.segments.windows(2).all(|w| w[0].slope < w[1].slope)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn diagonal_slopes() {
        let poly = Polygon::from_values(&[(0, q(0, 1)), (1, q(0, 1)), (2, q(1, 1)), (3, q(3, 1))]);
        assert_eq!(poly.slope_list(), vec![q(0, 1), q(1, 1), q(2, 1)]);
        assert!(poly.is_lower_convex());
    }

    #[test]
    fn collinear_points_merge() {
        let poly = Polygon::from_values(&[(0, q(0, 1)), (1, q(1, 2)), (2, q(1, 1)), (4, q(2, 1))]);
        assert_eq!(poly.slopes(), vec![(q(1, 2), 4)]);
        assert_eq!(poly.breakpoints(), vec![0, 4]);
    }

    #[test]
    fn low_inexact_point_flags_segment() {
        let pts = vec![
            Point { n: 0, y: q(0, 1), flag: Flag::Exact },
            Point { n: 1, y: q(1, 4), flag: Flag::Tie },
            Point { n: 2, y: q(1, 1), flag: Flag::Exact },
        ];
        let poly = Polygon::new(pts);
        assert!(poly.segments[0].flagged);
        let pts = vec![
            Point { n: 0, y: q(0, 1), flag: Flag::Exact },
            Point { n: 1, y: q(3, 4), flag: Flag::AtLeast },
            Point { n: 2, y: q(1, 1), flag: Flag::Exact },
        ];
        assert!(!Polygon::new(pts).segments[0].flagged);
    }
}
