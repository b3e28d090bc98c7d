use super::cosets::{coset_reps, elliptic_counts, P1};
use super::cusp::{Cusp, Divisor};
use super::matrix::Mat2;
use super::path::UnimodPath;
use crate::error::{Error, Result};
use std::collections::{HashMap, VecDeque};

/// Ideal triangle g.R of the Farey tessellation, R = (0, oo, 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub vertices: [Cusp; 3],
    /// Clockwise edges; their coset indices form the triangle's label.
    pub edges: [UnimodPath; 3],
    pub cosets: [usize; 3],
}

/// A pair of boundary edges with gamma . e_star = reverse(e).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPair {
    pub e: usize,
    pub e_star: usize,
    pub gamma: Mat2,
}

#[derive(Clone, Debug)]
pub struct FundamentalDomain {
    pub level: i128,
    pub p1: P1,
    pub triangles: Vec<Triangle>,
    /// Clockwise loop; edge 0 is 0 -> oo and edge 1 is oo -> 1.
    pub boundary: Vec<UnimodPath>,
    pub internal: Vec<UnimodPath>,
    /// For each coset index, the element of E in that class.
    pub reps: Vec<UnimodPath>,
    /// Boundary edge index of each boundary edge's partner and its pairing element.
    pub partner: Vec<usize>,
    pub pair_gamma: Vec<Mat2>,
    /// Pairs with the oo pair (e = oo -> 1, e* = 0 -> oo) first.
    pub pairs: Vec<BoundaryPair>,
}

fn clockwise_edges(x: Cusp, w: Cusp, y: Cusp) -> [UnimodPath; 3] {
    // triangle glued below the boundary edge x -> y with new vertex w
    [UnimodPath::new(y, x), UnimodPath::new(x, w), UnimodPath::new(w, y)]
}

fn path_class(p1: &P1, e: &UnimodPath) -> usize {
    p1.coset_of(&e.sl2())
}

/// The Farey neighbour of the edge {x, y} opposite to `inner`.
fn opposite_vertex(x: Cusp, y: Cusp, inner: Cusp) -> Cusp {
    let plus = Cusp::new(x.num() + y.num(), x.den() + y.den());
    if plus != inner {
        return plus;
    }
    Cusp::new(x.num() - y.num(), x.den() - y.den())
}

/// Greedy Pollack-Stevens domain: seed with R, glue unused triangle classes across boundary
/// edges in breadth-first order, never across an edge touching oo (so the domain stays in the
/// strip 0 <= Re z <= 1).
pub fn build_domain(n: i128) -> Result<FundamentalDomain> {
    if n < 1 {
        return Err(Error::Usage(format!("level must be positive, got {n}")));
    }
    let (_, nu3) = elliptic_counts(n);
    if nu3 > 0 {
        return Err(Error::UnsupportedLevel {
            level: n as i64,
            reason: format!("{nu3} elliptic points of order 3"),
        });
    }
    let p1 = P1::new(n);
    let mu = p1.len();
    if n == 1 {
        return Err(Error::UnsupportedLevel { level: 1, reason: "elliptic points present".into() });
    }
    let zero = Cusp::int(0);
    let one = Cusp::int(1);
    let inf = Cusp::INFINITY;

    let mut used = vec![false; mu];
    let mut triangles = Vec::new();
    let mut internal = Vec::new();
    let seed_edges = [UnimodPath::new(zero, inf), UnimodPath::new(inf, one), UnimodPath::new(one, zero)];
    let mut add_triangle = |vertices: [Cusp; 3], edges: [UnimodPath; 3], used: &mut Vec<bool>| -> bool {
        let cosets = edges.map(|e| path_class(&p1, &e));
        if cosets.iter().any(|&c| used[c]) {
            debug_assert!(cosets.iter().all(|&c| used[c]));
            return false;
        }
        for &c in &cosets {
            used[c] = true;
        }
        triangles.push(Triangle { vertices, edges, cosets });
        true
    };
    add_triangle([zero, inf, one], seed_edges, &mut used);

    // Loop of vertices (clockwise) and, per edge starting at loop[i], the inner third vertex.
    let mut verts = vec![zero, inf, one];
    let mut inner: HashMap<(Cusp, Cusp), Cusp> = HashMap::new();
    inner.insert((zero, inf), one);
    inner.insert((inf, one), zero);
    inner.insert((one, zero), inf);
    let mut queue: VecDeque<(Cusp, Cusp)> = VecDeque::from(vec![(one, zero)]);
    let mut placed = 1;
    while let Some((x, y)) = queue.pop_front() {
        if placed * 3 == mu {
            break;
        }
        let Some(&third) = inner.get(&(x, y)) else { continue };
        let w = opposite_vertex(x, y, third);
        let edges = clockwise_edges(x, w, y);
        if !add_triangle([x, w, y], edges, &mut used) {
            continue;
        }
        placed += 1;
        let pos = verts.iter().position(|&v| v == x).expect("edge start on loop");
        verts.insert(pos + 1, w);
        inner.remove(&(x, y));
        internal.push(UnimodPath::new(x, y));
        inner.insert((x, w), y);
        inner.insert((w, y), x);
        queue.push_back((x, w));
        queue.push_back((w, y));
    }
    if placed * 3 != mu {
        return Err(Error::Internal(format!("gluing stalled at {placed} of {} triangles", mu / 3)));
    }
    let b = verts.len();
    let boundary: Vec<UnimodPath> = (0..b).map(|i| UnimodPath::new(verts[i], verts[(i + 1) % b])).collect();

    let mut reps: Vec<Option<UnimodPath>> = vec![None; mu];
    for e in boundary.iter().chain(internal.iter()).chain(internal.iter().map(|e| e.reverse()).collect::<Vec<_>>().iter()) {
        let c = path_class(&p1, e);
        if reps[c].is_some() {
            return Err(Error::Internal(format!("two elements of E in coset {c}")));
        }
        reps[c] = Some(*e);
    }
    let reps: Vec<UnimodPath> = reps
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| Error::Internal(format!("coset {i} has no element of E"))))
        .collect::<Result<_>>()?;

    let index_of: HashMap<UnimodPath, usize> = boundary.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut partner = Vec::with_capacity(b);
    let mut pair_gamma = Vec::with_capacity(b);
    for e in &boundary {
        let rev = e.reverse();
        let star = reps[path_class(&p1, &rev)];
        let j = *index_of
            .get(&star)
            .ok_or_else(|| Error::Internal(format!("reverse of boundary edge {e} reduces to interior edge {star}")))?;
        let gamma = (rev.sl2() * star.sl2().inverse_unimodular()).normalize_pm();
        debug_assert!(gamma.in_gamma0(n));
        partner.push(j);
        pair_gamma.push(gamma);
    }
    let mut pairs = vec![BoundaryPair { e: 1, e_star: 0, gamma: pair_gamma[1] }];
    for i in 2..b {
        if partner[i] > i {
            pairs.push(BoundaryPair { e: i, e_star: partner[i], gamma: pair_gamma[i] });
        }
    }
    Ok(FundamentalDomain { level: n, p1, triangles, boundary, internal, reps, partner, pair_gamma, pairs })
}

impl FundamentalDomain {
    pub fn index(&self) -> usize {
        self.p1.len()
    }

    pub fn vertices(&self) -> Vec<Cusp> {
        self.boundary.iter().map(|e| e.start).collect()
    }

    /// Whether some boundary edge is paired with itself (an elliptic point of order 2).
    pub fn has_fixed_edges(&self) -> bool {
        self.partner.iter().enumerate().any(|(i, &j)| i == j)
    }

    fn require_torsion_free(&self) -> Result<()> {
        if self.has_fixed_edges() {
            return Err(Error::UnsupportedLevel {
                level: self.level as i64,
                reason: "boundary pairing has fixed edges (elliptic points of order 2)".into(),
            });
        }
        Ok(())
    }

    /// (rep, gamma) with rep in E and gamma . rep = e.
    pub fn reduce_to_e(&self, e: &UnimodPath) -> (UnimodPath, Mat2) {
        let g = e.sl2();
        let rep = self.reps[self.p1.coset_of(&g)];
        let gamma = (g * rep.sl2().inverse_unimodular()).normalize_pm();
        (rep, gamma)
    }

    pub fn coset_reps(&self) -> Vec<Mat2> {
        coset_reps(self.level)
    }

    /// sum over pairs of (1 - gamma_i^{-1})[e_i], as a divisor.
    pub fn manin_divisor(&self, gammas: &[Mat2]) -> Divisor {
        let mut total = Divisor::zero();
        for (pair, g) in self.pairs.iter().zip(gammas) {
            let e = self.boundary[pair.e];
            total.add_scaled(&e.boundary(), 1);
            total.add_scaled(&e.act(&g.inverse_unimodular()).boundary(), -1);
        }
        total
    }

    pub fn manin_relation_check(&self) -> Result<bool> {
        self.require_torsion_free()?;
        let gammas: Vec<Mat2> = self.pairs.iter().map(|p| p.gamma).collect();
        Ok(self.manin_divisor(&gammas).is_zero())
    }

    /// Vertices of the domain in the Gamma_0(N)-orbit of oo.
    pub fn vertices_equivalent_to_infinity(&self) -> Vec<Cusp> {
        self.vertices().into_iter().filter(|v| v.equivalent_to_infinity(self.level)).collect()
    }

    /// The boundary pairs other than the oo pair, after verifying that oo is the only
    /// vertex in its Gamma_0(N)-orbit.
    pub fn free_generators(&self) -> Result<Vec<UnimodPath>> {
        self.require_torsion_free()?;
        let bad = self.vertices_equivalent_to_infinity();
        if bad != vec![Cusp::INFINITY] {
            return Err(Error::Internal(format!("vertices equivalent to oo: {bad:?}")));
        }
        Ok(self.pairs[1..].iter().map(|p| self.boundary[p.e]).collect())
    }

    /// Euler characteristic V - E + F of the triangulated disk.
    pub fn euler_characteristic(&self) -> i64 {
        let v = self.boundary.len() as i64;
        let e = (self.boundary.len() + self.internal.len()) as i64;
        v - e + self.triangles.len() as i64
    }
}
