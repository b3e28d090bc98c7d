//! Division-free characteristic polynomial over a commutative ring.

/// Ring operations on elements carried by value; the context holds moduli and windows.
pub trait RingOps {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem);
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// acc += a * b
    fn mul_add(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem);
}

/// Square matrix with sparse rows, each sorted by column.
#[derive(Clone, Debug)]
pub struct SparseMatrix<E> {
    pub n: usize,
    pub rows: Vec<Vec<(usize, E)>>,
}

impl<E: Clone> SparseMatrix<E> {
    pub fn from_dense(dense: &[Vec<E>], is_zero: impl Fn(&E) -> bool) -> Self {
        let rows = dense
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, e)| !is_zero(e)).map(|(j, e)| (j, e.clone())).collect())
            .collect();
        SparseMatrix { n: dense.len(), rows }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&E> {
        self.rows[i].binary_search_by_key(&j, |(c, _)| *c).ok().map(|k| &self.rows[i][k].1)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }
}

/// Coefficients c_0..c_{n_max} of det(1 - X A), by Berkowitz's recursion on leading minors.
///
/// Only R A^j S with j <= n_max - 2 is formed, so the cost is about n_max n^3 / 3 ring
/// multiplications (less with sparsity).
pub fn fredholm_coefficients<R: RingOps>(ring: &R, a: &SparseMatrix<R::Elem>, n_max: usize) -> Vec<R::Elem> {
    let n = a.n;
    let mut cols: Vec<Vec<(usize, R::Elem)>> = vec![Vec::new(); n];
    for (i, row) in a.rows.iter().enumerate() {
        for (j, e) in row {
            cols[*j].push((i, e.clone()));
        }
    }
    let mut p: Vec<R::Elem> = vec![ring.one()];
    for r in 1..=n {
        let i0 = r - 1;
        let top = r.min(n_max);
        let mut q: Vec<R::Elem> = Vec::with_capacity(top + 1);
        q.push(ring.one());
        if top >= 1 {
            q.push(a.get(i0, i0).map_or_else(|| ring.zero(), |e| ring.neg(e)));
        }
        if top >= 2 {
            let mut v: Vec<R::Elem> = vec![ring.zero(); i0];
            for (i, e) in &cols[i0] {
                if *i < i0 {
                    v[*i] = e.clone();
                }
            }
            let row_r: Vec<&(usize, R::Elem)> = a.rows[i0].iter().take_while(|(c, _)| *c < i0).collect();
            for j in 2..=top {
                if j > 2 {
                    let mut w = vec![ring.zero(); i0];
                    for (i, wi) in w.iter_mut().enumerate() {
                        for (c, e) in a.rows[i].iter().take_while(|(c, _)| *c < i0) {
                            ring.mul_add(wi, e, &v[*c]);
                        }
                    }
                    v = w;
                }
                let mut s = ring.zero();
                for (c, e) in &row_r {
                    ring.mul_add(&mut s, e, &v[*c]);
                }
                q.push(ring.neg(&s));
            }
        }
        let mut next = vec![ring.zero(); top + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            for l in 0..=i {
                if i - l < p.len() {
                    ring.mul_add(slot, &q[l], &p[i - l]);
                }
            }
        }
        p = next;
    }
    p.resize(n_max + 1, ring.zero());
    p
}
