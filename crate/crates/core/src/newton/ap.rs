use crate::arith::Rational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// start, start + step, .., start + (len - 1) step; a lone value has no step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    pub start: Rational,
    pub step: Option<Rational>,
    pub len: usize,
}

/// Greedy cover of a finite multiset by arithmetic progressions. The result is evidence of
/// consistency on the window only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApReport {
    pub progressions: Vec<Progression>,
    pub residual: Vec<Rational>,
    pub budget: usize,
    pub within_budget: bool,
}

/// Covers the multiset (value, multiplicity) with at most `budget` progressions. With `step`
/// fixed, only that common difference is tried; otherwise the longest progression from the
/// smallest remaining value wins (smaller step on ties).
pub fn ap_detect(values: &[(Rational, usize)], budget: usize, step: Option<Rational>) -> ApReport {
    let mut left: BTreeMap<Rational, usize> = BTreeMap::new();
    for &(v, m) in values {
        if m > 0 {
            *left.entry(v).or_insert(0) += m;
        }
    }
    let mut progressions = Vec::new();
    while progressions.len() < budget {
        let Some((&a, _)) = left.iter().next() else { break };
        let run = |d: Rational| {
            let mut len = 1;
            while left.contains_key(&(a + d * Rational::from_integer(len as i64))) {
                len += 1;
            }
            len
        };
        let candidates: Vec<Rational> = match step {
            Some(d) => vec![d],
            None => left.keys().filter(|&&x| x > a).map(|&x| x - a).collect(),
        };
        let mut best: Option<(usize, Rational)> = None;
        for d in candidates {
            let len = run(d);
            if len > 1 && best.map_or(true, |(l, bd)| len > l || (len == l && d < bd)) {
                best = Some((len, d));
            }
        }
        let (len, d) = match best {
            Some((l, d)) => (l, Some(d)),
            None => (1, None),
        };
        for i in 0..len {
            let x = a + d.unwrap_or_default() * Rational::from_integer(i as i64);
            let c = left.get_mut(&x).unwrap();
            *c -= 1;
            if *c == 0 {
                left.remove(&x);
            }
        }
        progressions.push(Progression { start: a, step: d, len });
    }
    let residual: Vec<Rational> = left.iter().flat_map(|(&v, &m)| std::iter::repeat(v).take(m)).collect();
    let within_budget = residual.is_empty();
    ApReport { progressions, residual, budget, within_budget }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn consecutive_integers_form_one_progression() {
        let vals: Vec<(Rational, usize)> = (0..=9).map(|i| (q(i, 1), 1)).collect();
        let r = ap_detect(&vals, 4, None);
        assert_eq!(r.progressions, vec![Progression { start: q(0, 1), step: Some(q(1, 1)), len: 10 }]);
        assert!(r.within_budget);
    }

    #[test]
    fn halves_and_integers() {
        let vals = [(q(1, 2), 1), (q(3, 2), 1), (q(5, 2), 1), (q(1, 1), 1), (q(2, 1), 1)];
        let fixed = ap_detect(&vals, 4, Some(q(1, 1)));
        assert_eq!(fixed.progressions.len(), 2);
        assert_eq!(fixed.progressions[0], Progression { start: q(1, 2), step: Some(q(1, 1)), len: 3 });
        // without a prescribed step the five values are one progression of step 1/2
        assert_eq!(ap_detect(&vals, 4, None).progressions.len(), 1);
    }

    #[test]
    fn budget_leaves_residual() {
        let vals = [(q(0, 1), 3)];
        let r = ap_detect(&vals, 2, None);
        assert_eq!(r.progressions.len(), 2);
        assert_eq!(r.residual, vec![q(0, 1)]);
        assert!(!r.within_budget);
    }
}
