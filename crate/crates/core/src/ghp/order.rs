//! The order `X ⊴ X'`: a surjective 1-Lipschitz map `X' -> X` under which
//! every point of `X` receives at least its own mass.

use super::{mm_space_of_map, GhpError, MmSpace, Q};
use crate::map_kernel::PlanarMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

/// A map from the points of `X'` to the points of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderWitness {
    pub map: Vec<usize>,
}

impl OrderWitness {
    /// Checks surjectivity, the Lipschitz bound and pointwise mass contraction.
    pub fn verify(&self, x: &MmSpace, x2: &MmSpace) -> Result<(), GhpError> {
        if self.map.len() != x2.len() {
            return Err(GhpError::BadWitness(format!("map has {} entries for {} points", self.map.len(), x2.len())));
        }
        let mut pre = vec![Q::from_integer(0.into()); x.len()];
        for (a, &t) in self.map.iter().enumerate() {
            if t >= x.len() {
                return Err(GhpError::BadWitness(format!("image {t} out of range")));
            }
            pre[t] += &x2.mass()[a];
        }
        for a in 0..x2.len() {
            for b in 0..x2.len() {
                if x.d(self.map[a], self.map[b]) > x2.d(a, b) {
                    return Err(GhpError::BadWitness(format!("distance grows between {a} and {b}")));
                }
            }
        }
        let mut hit = vec![false; x.len()];
        self.map.iter().for_each(|&t| hit[t] = true);
        if let Some(t) = hit.iter().position(|&h| !h) {
            return Err(GhpError::BadWitness(format!("point {t} is not hit")));
        }
        for (t, p) in pre.iter().enumerate() {
            if &x.mass()[t] > p {
                return Err(GhpError::BadWitness(format!("point {t} receives too little mass")));
            }
        }
        Ok(())
    }

    /// `self ∘ other` for witnesses `X' -> X` and `X'' -> X'`.
    pub fn compose(&self, other: &OrderWitness) -> OrderWitness {
        OrderWitness { map: other.map.iter().map(|&y| self.map[y]).collect() }
    }
}

/// Size limits for the exact search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderBudget {
    pub max_target: usize,
    pub max_source: usize,
    pub max_nodes: u64,
}

impl Default for OrderBudget {
    fn default() -> Self {
        OrderBudget { max_target: 10, max_source: 12, max_nodes: 200_000_000 }
    }
}

fn scaled_masses(x: &MmSpace, x2: &MmSpace) -> Option<(Vec<i128>, Vec<i128>)> {
    let mut l = BigInt::one();
    for m in x.mass().iter().chain(x2.mass()) {
        l = l.lcm(m.denom());
    }
    let conv = |v: &[Q]| v.iter().map(|m| (m.numer() * (&l / m.denom())).to_i128()).collect::<Option<Vec<_>>>();
    Some((conv(x.mass())?, conv(x2.mass())?))
}

struct Search<'a> {
    n: usize,
    order: Vec<usize>,
    /// `ok[a * n2 + b][s * n + t]`: may `a, b` be sent to `s, t`?
    ok: Vec<Vec<bool>>,
    n2: usize,
    mu: Vec<i128>,
    mu2: Vec<i128>,
    assign: Vec<usize>,
    cover: Vec<usize>,
    got: Vec<i128>,
    nodes: u64,
    deepest: usize,
    budget: &'a OrderBudget,
}

impl Search<'_> {
    fn run(&mut self, idx: usize, rest_mass: i128) -> Result<bool, GhpError> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(GhpError::Budget { nodes: self.nodes, assigned: self.deepest });
        }
        self.deepest = self.deepest.max(idx);
        if idx == self.order.len() {
            return Ok(true);
        }
        let a = self.order[idx];
        let left = self.order.len() - idx - 1;
        let rest = rest_mass - self.mu2[a];
        for t in 0..self.n {
            let fits = self.order[..idx].iter().all(|&b| self.ok[a * self.n2 + b][t * self.n + self.assign[b]]);
            if !fits {
                continue;
            }
            self.assign[a] = t;
            self.cover[t] += 1;
            self.got[t] += self.mu2[a];
            let uncovered = self.cover.iter().filter(|&&c| c == 0).count();
            let deficit: i128 = (0..self.n).map(|s| (self.mu[s] - self.got[s]).max(0)).sum();
            if uncovered <= left && deficit <= rest && self.run(idx + 1, rest)? {
                return Ok(true);
            }
            self.cover[t] -= 1;
            self.got[t] -= self.mu2[a];
        }
        Ok(false)
    }
}

/// Decides `X ⊴ X'` exactly. `Ok(Some(w))` is a verified witness, `Ok(None)`
/// an exhaustive refutation; a budget overrun is an error, never a guess.
pub fn order_leq(x: &MmSpace, x2: &MmSpace, budget: &OrderBudget) -> Result<Option<OrderWitness>, GhpError> {
    let (n, n2) = (x.len(), x2.len());
    if n > budget.max_target || n2 > budget.max_source {
        return Err(GhpError::Budget { nodes: 0, assigned: 0 });
    }
    if n == 0 || n2 == 0 {
        return Err(GhpError::Empty);
    }
    if n > n2 || x.total_mass() > x2.total_mass() || x.diameter() > x2.diameter() {
        return Ok(None);
    }
    let (mu, mu2) = scaled_masses(x, x2).ok_or(GhpError::Overflow)?;
    let mut ok = vec![vec![false; n * n]; n2 * n2];
    for a in 0..n2 {
        for b in 0..n2 {
            for s in 0..n {
                for t in 0..n {
                    ok[a * n2 + b][s * n + t] = x.d(s, t) <= x2.d(a, b);
                }
            }
        }
    }
    // most eccentric points first
    let mut order: Vec<usize> = (0..n2).collect();
    let ecc: Vec<Q> = (0..n2).map(|a| (0..n2).map(|b| x2.d(a, b).clone()).max().unwrap()).collect();
    order.sort_by(|&a, &b| ecc[b].cmp(&ecc[a]).then(a.cmp(&b)));
    let total: i128 = mu2.iter().sum();
    let mut s = Search {
        n,
        order,
        ok,
        n2,
        mu,
        mu2,
        assign: vec![0; n2],
        cover: vec![0; n],
        got: vec![0; n],
        nodes: 0,
        deepest: 0,
        budget,
    };
    if !s.run(0, total)? {
        return Ok(None);
    }
    let w = OrderWitness { map: s.assign };
    w.verify(x, x2)?;
    Ok(Some(w))
}

/// A measure-preserving isometry `X' -> X`, if one exists.
pub fn find_isometry(x: &MmSpace, x2: &MmSpace) -> Option<Vec<usize>> {
    let n = x.len();
    if n != x2.len() {
        return None;
    }
    fn go(x: &MmSpace, x2: &MmSpace, a: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if a == map.len() {
            return true;
        }
        for t in 0..used.len() {
            if used[t] || x.mass()[t] != x2.mass()[a] || (0..a).any(|b| x.d(t, map[b]) != x2.d(a, b)) {
                continue;
            }
            used[t] = true;
            map[a] = t;
            if go(x, x2, a + 1, map, used) {
                return true;
            }
            used[t] = false;
        }
        false
    }
    let mut map = vec![0; n];
    go(x, x2, 0, &mut map, &mut vec![false; n]).then_some(map)
}

/// Turns a surjective graph homomorphism `G' -> G` into a witness for
/// `X(G) ⊴ X(G')`.
pub fn witness_from_graph_hom(g: &PlanarMap, g2: &PlanarMap, hom: &[usize]) -> Result<OrderWitness, GhpError> {
    if hom.len() != g2.num_vertices() {
        return Err(GhpError::NotHomomorphism(format!("{} images for {} vertices", hom.len(), g2.num_vertices())));
    }
    if let Some(&v) = hom.iter().find(|&&v| v >= g.num_vertices()) {
        return Err(GhpError::NotHomomorphism(format!("image {v} out of range")));
    }
    let adj = g.neighbors();
    for d in 0..g2.darts() {
        let (u, v) = (hom[g2.origin(d)], hom[g2.head(d)]);
        if u != v && !adj[u].contains(&v) {
            return Err(GhpError::NotHomomorphism(format!("edge {} is not mapped to an edge", d >> 1)));
        }
        if u == v {
            return Err(GhpError::NotHomomorphism(format!("edge {} collapses to a vertex", d >> 1)));
        }
    }
    let mut hit = vec![false; g.num_vertices()];
    hom.iter().for_each(|&v| hit[v] = true);
    if let Some(v) = hit.iter().position(|&h| !h) {
        return Err(GhpError::NotHomomorphism(format!("vertex {v} is not hit")));
    }
    let w = OrderWitness { map: hom.to_vec() };
    w.verify(&mm_space_of_map(g), &mm_space_of_map(g2))?;
    Ok(w)
}
