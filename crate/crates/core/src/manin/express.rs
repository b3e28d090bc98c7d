use super::cusp::{Cusp, Divisor};
use super::domain::FundamentalDomain;
use super::matrix::Mat2;
use super::path::{cf_decompose, UnimodPath};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// One term coeff * gamma . [generator].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WordTerm {
    pub gamma: Mat2,
    pub coeff: i64,
    pub gen: usize,
}

/// Formal Z[Gamma]-combination of generators; like terms are merged, so coefficients other
/// than +-1 stand for repeated terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupWord {
    pub terms: Vec<WordTerm>,
}

impl GroupWord {
    pub fn from_map(map: BTreeMap<(Mat2, usize), i64>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|((gamma, gen), coeff)| WordTerm { gamma, coeff, gen })
            .collect();
        GroupWord { terms }
    }

    pub fn single(gamma: Mat2, coeff: i64, gen: usize) -> Self {
        GroupWord { terms: vec![WordTerm { gamma: gamma.normalize_pm(), coeff, gen }] }
    }

    /// Sum of coeff * gamma . [gens[gen]].
    pub fn evaluate(&self, gens: &[UnimodPath]) -> Divisor {
        let mut d = Divisor::zero();
        for t in &self.terms {
            d.add_scaled(&gens[t.gen].act(&t.gamma).boundary(), t.coeff);
        }
        d
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Default)]
struct Accum(BTreeMap<(Mat2, usize), i64>);

impl Accum {
    fn add_word(&mut self, left: &Mat2, w: &GroupWord, coeff: i64) {
        for t in &w.terms {
            let g = (*left * t.gamma).normalize_pm();
            *self.0.entry((g, t.gen)).or_insert(0) += coeff * t.coeff;
        }
    }
}

/// Precomputed words for the elements of E not touching oo, over the free generators.
#[derive(Clone, Debug)]
pub struct ExpressContext {
    pub generators: Vec<UnimodPath>,
    rep_words: HashMap<UnimodPath, GroupWord>,
    zero_one: UnimodPath,
}

impl ExpressContext {
    pub fn new(fd: &FundamentalDomain) -> Result<Self> {
        let generators = fd.free_generators()?;
        let b = fd.boundary.len();
        // generator words for each boundary edge (except the oo pair)
        let mut edge_word: Vec<Option<GroupWord>> = vec![None; b];
        for (gi, pair) in fd.pairs.iter().enumerate().skip(1) {
            let gen = gi - 1;
            edge_word[pair.e] = Some(GroupWord::single(Mat2::IDENTITY, 1, gen));
            // [e*] = -gamma^{-1}[e]
            edge_word[pair.e_star] = Some(GroupWord::single(pair.gamma.inverse_unimodular(), -1, gen));
        }
        let pos: HashMap<Cusp, usize> = fd.boundary.iter().enumerate().map(|(i, e)| (e.start, i)).collect();
        let mut rep_words = HashMap::new();
        for (i, e) in fd.boundary.iter().enumerate() {
            if let Some(w) = &edge_word[i] {
                rep_words.insert(*e, w.clone());
            }
        }
        let arc_word = |from: Cusp, to: Cusp| -> GroupWord {
            let (s, t) = (pos[&from], pos[&to]);
            let mut acc = Accum::default();
            // forward arc s, s+1, .., t must avoid loop position 1 (the vertex oo) strictly inside
            let forward_ok = {
                let mut k = s;
                let mut ok = true;
                while k != t {
                    if k == 1 {
                        ok = false;
                    }
                    k = (k + 1) % b;
                }
                ok
            };
            if forward_ok {
                let mut k = s;
                while k != t {
                    acc.add_word(&Mat2::IDENTITY, edge_word[k].as_ref().expect("arc avoids oo"), 1);
                    k = (k + 1) % b;
                }
            } else {
                let mut k = s;
                while k != t {
                    let prev = (k + b - 1) % b;
                    acc.add_word(&Mat2::IDENTITY, edge_word[prev].as_ref().expect("arc avoids oo"), -1);
                    k = prev;
                }
            }
            GroupWord::from_map(acc.0)
        };
        for e in &fd.internal {
            rep_words.insert(*e, arc_word(e.start, e.end));
            rep_words.insert(e.reverse(), arc_word(e.end, e.start));
        }
        let zero_one = UnimodPath::new(Cusp::int(0), Cusp::int(1));
        if !rep_words.contains_key(&zero_one) {
            return Err(Error::Internal("0 -> 1 is not an interior edge of the domain".into()));
        }
        Ok(ExpressContext { generators, rep_words, zero_one })
    }

    pub fn rep_word(&self, e: &UnimodPath) -> Option<&GroupWord> {
        self.rep_words.get(e)
    }

    /// Word for the divisor of a chain of unimodular paths whose two ends lie in C.
    fn chain_into(&self, fd: &FundamentalDomain, chain: &[UnimodPath], acc: &mut Accum) -> Result<()> {
        let n = fd.level;
        let zero_inf = UnimodPath::new(Cusp::int(0), Cusp::INFINITY);
        let inf_one = UnimodPath::new(Cusp::INFINITY, Cusp::int(1));
        let mut j = 0;
        while j < chain.len() {
            let q = chain[j];
            if q.end.equivalent_to_infinity(n) {
                let q_next = chain
                    .get(j + 1)
                    .ok_or_else(|| Error::Internal("chain ends in the orbit of oo".into()))?;
                let (r1, g1) = fd.reduce_to_e(&q);
                let (r2, g2) = fd.reduce_to_e(q_next);
                if r1 != zero_inf || r2 != inf_one {
                    return Err(Error::Internal(format!("unexpected reductions {r1}, {r2} at an oo-vertex")));
                }
                // q + q_next = g1 . ({1 + k} - {0}) where g1^{-1} g2 = (1 k; 0 1)
                let u = g1.inverse_unimodular() * g2;
                let u = if u.a < 0 { u.neg() } else { u };
                if u.c != 0 || u.a != 1 || u.d != 1 {
                    return Err(Error::Internal(format!("shift {u} is not upper unipotent")));
                }
                let k = u.b;
                let w01 = &self.rep_words[&self.zero_one];
                if k >= 0 {
                    for i in 0..=k {
                        acc.add_word(&(g1 * Mat2::translate(i)), w01, 1);
                    }
                } else {
                    for i in (k + 1)..=-1 {
                        acc.add_word(&(g1 * Mat2::translate(i)), w01, -1);
                    }
                }
                j += 2;
            } else {
                let (r, g) = fd.reduce_to_e(&q);
                let w = self
                    .rep_words
                    .get(&r)
                    .ok_or_else(|| Error::Internal(format!("no word for representative {r}")))?;
                acc.add_word(&g, w, 1);
                j += 1;
            }
        }
        Ok(())
    }

    /// Word for the path divisor {to} - {from}, both ends in C.
    pub fn express_path(&self, fd: &FundamentalDomain, from: Cusp, to: Cusp) -> Result<GroupWord> {
        let mut acc = Accum::default();
        self.path_into(fd, from, to, 1, &mut acc)?;
        Ok(GroupWord::from_map(acc.0))
    }

    fn path_into(&self, fd: &FundamentalDomain, from: Cusp, to: Cusp, coeff: i64, acc: &mut Accum) -> Result<()> {
        let chain = cf_decompose(from, to);
        if coeff == 1 {
            return self.chain_into(fd, &chain, acc);
        }
        let mut local = Accum::default();
        self.chain_into(fd, &chain, &mut local)?;
        for ((g, gen), c) in local.0 {
            *acc.0.entry((g, gen)).or_insert(0) += c * coeff;
        }
        Ok(())
    }
}

/// Writes a degree-zero divisor supported on C as a word in the free generators.
pub fn express(d: &Divisor, fd: &FundamentalDomain, ctx: &ExpressContext) -> Result<GroupWord> {
    if d.degree() != 0 {
        return Err(Error::Domain(format!("divisor {d} has degree {}", d.degree())));
    }
    if let Some((x, _)) = d.iter().find(|(x, _)| x.equivalent_to_infinity(fd.level)) {
        return Err(Error::Domain(format!("support point {x} lies in the orbit of oo")));
    }
    let mut acc = Accum::default();
    let mut it = d.iter();
    let Some((&base, _)) = it.next() else { return Ok(GroupWord::default()) };
    for (&x, &n) in it {
        ctx.path_into(fd, base, x, n, &mut acc)?;
    }
    Ok(GroupWord::from_map(acc.0))
}
