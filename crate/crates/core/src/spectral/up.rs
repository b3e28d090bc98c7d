use crate::dist::{act_matrix, check_bound, CharCache};
use crate::error::Result;
use crate::manin::{ManinData, UpTerm};
use crate::padic::{PAdicInt, TSeries, Window};
use crate::verdict::Tally;
use std::collections::{BTreeMap, BTreeSet};

/// Truncated U_p on (D^int)^{st}: global index d st + i for Mahler degree d and generator i.
#[derive(Clone, Debug)]
pub struct UpMatrix {
    pub p: u64,
    pub j: u32,
    pub window: Window,
    pub st: usize,
    /// Mahler degrees kept per generator.
    pub n_deg: usize,
    pub rows: Vec<Vec<(usize, TSeries)>>,
    /// Entry decay of every summand's action matrix.
    pub decay: Tally,
    /// Decay of the assembled entries against the row estimate.
    pub row_estimate: Tally,
    /// Pairs (i, i') with generator i' occurring in the decomposition of U_p e~_i.
    pub support: BTreeSet<(usize, usize)>,
}

/// max(floor(col/st) - floor(row/(p st)), 0).
pub fn row_bound(row: usize, col: usize, st: usize, p: usize) -> i64 {
    ((col / st) as i64 - (row / (p * st)) as i64).max(0)
}

/// Assembles U_p from its summands; g is sign-lifted before acting.
pub fn assemble_from_table(p: u64, st: usize, table: &[Vec<UpTerm>], j: u32, window: Window, n_deg: usize) -> Result<UpMatrix> {
    let mut cache = CharCache::new(window, j);
    let dim = st * n_deg;
    let mut acc: Vec<BTreeMap<usize, TSeries>> = vec![BTreeMap::new(); dim];
    let mut decay = Tally::default();
    let mut support = BTreeSet::new();
    for (i, terms) in table.iter().enumerate() {
        for t in terms {
            support.insert((i, t.index));
            let pm = act_matrix(&t.g.sign_lift(p as i128), &mut cache, n_deg, n_deg)?;
            decay.merge(pm.monoid.as_ref().unwrap_or(&pm.sigma0));
            for (dr, row) in pm.entries.iter().enumerate() {
                for (dc, e) in row.iter().enumerate() {
                    if e.is_zero() {
                        continue;
                    }
                    let slot = acc[dr * st + i].entry(dc * st + t.index).or_insert_with(|| TSeries::zero(window));
                    *slot = slot.add(&e.scale(t.coeff as i128));
                }
            }
        }
    }
    let mut row_estimate = Tally::default();
    let rows: Vec<Vec<(usize, TSeries)>> = acc
        .into_iter()
        .enumerate()
        .map(|(r, m)| {
            m.into_iter()
                .filter(|(_, e)| !e.is_zero())
                .inspect(|(c, e)| row_estimate.add(check_bound(e.mval(), row_bound(r, *c, st, p as usize))))
                .collect()
        })
        .collect();
    Ok(UpMatrix { p, j, window, st, n_deg, rows, decay, row_estimate, support })
}

pub fn assemble_up(md: &ManinData, j: u32, window: Window, n_deg: usize) -> Result<UpMatrix> {
    let table = md.up_table()?;
    assemble_from_table(md.p as u64, md.st(), &table, j, window, n_deg)
}

impl UpMatrix {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, c: usize) -> TSeries {
        match self.rows[r].binary_search_by_key(&c, |(k, _)| *k) {
            Ok(k) => self.rows[r][k].1.clone(),
            Err(_) => TSeries::zero(self.window),
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn trace(&self) -> TSeries {
        (0..self.dim()).fold(TSeries::zero(self.window), |acc, i| acc.add(&self.get(i, i)))
    }

    /// Principal block of the first n_deg' Mahler degrees.
    pub fn principal(&self, n_deg: usize) -> UpMatrix {
        let dim = self.st * n_deg.min(self.n_deg);
        let rows = self.rows[..dim].iter().map(|r| r.iter().filter(|(c, _)| *c < dim).cloned().collect()).collect();
        UpMatrix { n_deg: n_deg.min(self.n_deg), rows, ..self.clone() }
    }

    /// Entries evaluated at beta with v_p(beta) >= 1.
    pub fn specialize(&self, beta: &PAdicInt) -> Result<Vec<Vec<(usize, PAdicInt)>>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(c, e)| Ok((*c, e.evaluate(beta)?))).collect())
            .collect()
    }
}
