//! Finite metric measure spaces with exact rational arithmetic: Hausdorff and
//! Prokhorov distances, correspondence bounds, and the Lipschitz order.

mod order;
mod prokhorov;

pub use order::{find_isometry, order_leq, witness_from_graph_hom, OrderBudget, OrderWitness};
pub use prokhorov::{coarse_grained_bound, prokhorov, prokhorov_exact, ProkhorovBound, PROKHOROV_EXACT_MAX};

use crate::map_kernel::{bfs_distances, PlanarMap};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Q = BigRational;

pub fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_frac(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

pub fn q_to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GhpError {
    #[error("metric axiom fails: {0}")]
    NotMetric(String),
    #[error("negative mass at point {0}")]
    NegativeMass(usize),
    #[error("size mismatch: {0}")]
    Size(String),
    #[error("empty point set")]
    Empty,
    #[error("scalars must be positive")]
    NonPositiveScalar,
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("relation is not a correspondence: {0}")]
    NotCorrespondence(String),
    #[error("search budget exceeded after {nodes} nodes ({assigned} points assigned at best)")]
    Budget { nodes: u64, assigned: usize },
    #[error("not a valid witness: {0}")]
    BadWitness(String),
    #[error("not a surjective graph homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("mass denominators too large for exact subset sums")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Distances between points of a finite set.
pub trait Metric {
    fn len(&self) -> usize;
    fn dist(&self, i: usize, j: usize) -> Q;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn diameter_of(&self, cell: &[usize]) -> Q {
        let mut best = Q::zero();
        for (k, &i) in cell.iter().enumerate() {
            for &j in &cell[k + 1..] {
                let d = self.dist(i, j);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    /// A partition into cells of diameter `< eps`.
    fn partition(&self, eps: &Q) -> Vec<Vec<usize>> {
        prokhorov::greedy_cells(self, eps)
    }
}

/// Points on the real line.
#[derive(Clone, Debug, PartialEq)]
pub struct LinePoints {
    pub pos: Vec<Q>,
}

impl Metric for LinePoints {
    fn len(&self) -> usize {
        self.pos.len()
    }

    fn dist(&self, i: usize, j: usize) -> Q {
        (&self.pos[i] - &self.pos[j]).abs()
    }

    fn diameter_of(&self, cell: &[usize]) -> Q {
        let (Some(lo), Some(hi)) = (cell.iter().map(|&i| &self.pos[i]).min(), cell.iter().map(|&i| &self.pos[i]).max())
        else {
            return Q::zero();
        };
        hi - lo
    }

    /// Maximal runs of sorted points spanning less than `eps`.
    fn partition(&self, eps: &Q) -> Vec<Vec<usize>> {
        let mut idx: Vec<usize> = (0..self.pos.len()).collect();
        idx.sort_by(|&a, &b| self.pos[a].cmp(&self.pos[b]));
        let mut cells: Vec<Vec<usize>> = Vec::new();
        let mut start: Option<&Q> = None;
        for i in idx {
            match start {
                Some(s) if &self.pos[i] - s < *eps => cells.last_mut().unwrap().push(i),
                _ => {
                    start = Some(&self.pos[i]);
                    cells.push(vec![i]);
                }
            }
        }
        cells
    }
}

/// A finite metric measure space `(X, d, μ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MmSpace {
    dist: Vec<Vec<Q>>,
    mass: Vec<Q>,
}

impl Metric for MmSpace {
    fn len(&self) -> usize {
        self.mass.len()
    }

    fn dist(&self, i: usize, j: usize) -> Q {
        self.dist[i][j].clone()
    }
}

impl MmSpace {
    /// Validates symmetry, zero diagonal, positivity off the diagonal, the
    /// triangle inequality and nonnegative masses.
    pub fn new(dist: Vec<Vec<Q>>, mass: Vec<Q>) -> Result<Self, GhpError> {
        let n = mass.len();
        if dist.len() != n || dist.iter().any(|r| r.len() != n) {
            return Err(GhpError::Size(format!("{n} masses but a non-square or mismatched distance matrix")));
        }
        for i in 0..n {
            if mass[i].is_negative() {
                return Err(GhpError::NegativeMass(i));
            }
            if !dist[i][i].is_zero() {
                return Err(GhpError::NotMetric(format!("d({i},{i}) != 0")));
            }
            for j in 0..n {
                if dist[i][j] != dist[j][i] {
                    return Err(GhpError::NotMetric(format!("d({i},{j}) != d({j},{i})")));
                }
                if i != j && !dist[i][j].is_positive() {
                    return Err(GhpError::NotMetric(format!("d({i},{j}) <= 0")));
                }
                for k in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        return Err(GhpError::NotMetric(format!("triangle inequality at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(MmSpace { dist, mass })
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn d(&self, i: usize, j: usize) -> &Q {
        &self.dist[i][j]
    }

    pub fn mass(&self) -> &[Q] {
        &self.mass
    }

    pub fn total_mass(&self) -> Q {
        self.mass.iter().sum()
    }

    pub fn diameter(&self) -> Q {
        self.dist.iter().flatten().max().cloned().unwrap_or_else(Q::zero)
    }

    /// CSV: `n`, then `n` masses, then `n` rows of distances, rationals as `p/q`.
    pub fn to_csv(&self) -> String {
        let mut s = format!("{}\n", self.len());
        for m in &self.mass {
            s.push_str(&format!("{m}\n"));
        }
        for row in &self.dist {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self, GhpError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let parse = |t: &str| -> Result<Q, GhpError> { t.trim().parse::<Q>().map_err(|e| GhpError::Parse(format!("{t}: {e}"))) };
        let n: usize = lines
            .next()
            .ok_or_else(|| GhpError::Parse("missing size".into()))?
            .trim()
            .parse()
            .map_err(|_| GhpError::Parse("bad size".into()))?;
        let mut mass = Vec::with_capacity(n);
        for _ in 0..n {
            mass.push(parse(lines.next().ok_or_else(|| GhpError::Parse("missing mass".into()))?)?);
        }
        let mut dist = Vec::with_capacity(n);
        for _ in 0..n {
            let row = lines.next().ok_or_else(|| GhpError::Parse("missing distance row".into()))?;
            dist.push(row.split(',').map(parse).collect::<Result<Vec<_>, _>>()?);
        }
        MmSpace::new(dist, mass)
    }
}

/// Vertices with graph distances and unit masses.
pub fn mm_space_of_map(q: &PlanarMap) -> MmSpace {
    let n = q.num_vertices();
    let dist = (0..n)
        .map(|v| bfs_distances(q, v).expect("vertex exists").into_iter().map(|d| q_int(d as i64)).collect())
        .collect();
    MmSpace { dist, mass: vec![q_int(1); n] }
}

/// `(a, b)·X`: distances times `a`, masses times `b`.
pub fn rescale(x: &MmSpace, a: &Q, b: &Q) -> Result<MmSpace, GhpError> {
    if !a.is_positive() || !b.is_positive() {
        return Err(GhpError::NonPositiveScalar);
    }
    Ok(MmSpace {
        dist: x.dist.iter().map(|r| r.iter().map(|d| d * a).collect()).collect(),
        mass: x.mass.iter().map(|m| m * b).collect(),
    })
}

fn set_distance<M: Metric>(m: &M, x: usize, set: &[usize]) -> Q {
    set.iter().map(|&y| m.dist(x, y)).min().expect("nonempty")
}

/// Two-sided sup-inf Hausdorff distance between point sets.
pub fn hausdorff<M: Metric>(m: &M, k1: &[usize], k2: &[usize]) -> Result<Q, GhpError> {
    if k1.is_empty() || k2.is_empty() {
        return Err(GhpError::Empty);
    }
    if k1.iter().chain(k2).any(|&i| i >= m.len()) {
        return Err(GhpError::Size("point out of range".into()));
    }
    let a = k1.iter().map(|&x| set_distance(m, x, k2)).max().unwrap();
    let b = k2.iter().map(|&y| set_distance(m, y, k1)).max().unwrap();
    Ok(a.max(b))
}

/// A relation between two point sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    pub pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn diagonal(n: usize) -> Self {
        Correspondence { pairs: (0..n).map(|i| (i, i)).collect() }
    }

    fn check(&self, n1: usize, n2: usize) -> Result<(), GhpError> {
        let mut a = vec![false; n1];
        let mut b = vec![false; n2];
        for &(x, y) in &self.pairs {
            if x >= n1 || y >= n2 {
                return Err(GhpError::NotCorrespondence(format!("pair ({x},{y}) out of range")));
            }
            a[x] = true;
            b[y] = true;
        }
        if let Some(x) = a.iter().position(|&t| !t) {
            return Err(GhpError::NotCorrespondence(format!("point {x} of the first space is not covered")));
        }
        if let Some(y) = b.iter().position(|&t| !t) {
            return Err(GhpError::NotCorrespondence(format!("point {y} of the second space is not covered")));
        }
        Ok(())
    }
}

pub fn distortion(x: &MmSpace, x2: &MmSpace, r: &Correspondence) -> Result<Q, GhpError> {
    r.check(x.len(), x2.len())?;
    let mut best = Q::zero();
    for &(a, a2) in &r.pairs {
        for &(b, b2) in &r.pairs {
            let v = (x.d(a, b) - x2.d(a2, b2)).abs();
            if v > best {
                best = v;
            }
        }
    }
    Ok(best)
}

/// A finite measure on `X × X'`, as masses on pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMeasure {
    pub mass: Vec<((usize, usize), Q)>,
}

impl CouplingMeasure {
    /// The image of `μ` under `x -> (x, x)`.
    pub fn diagonal_lift(mu: &[Q]) -> Self {
        CouplingMeasure { mass: mu.iter().enumerate().map(|(i, m)| ((i, i), m.clone())).collect() }
    }
}

/// Upper bound on the GHP distance from a correspondence and a coupling.
///
/// With `e = max(dis R, ν(R^c), δ_P(π_*ν, μ), δ_P(π'_*ν, μ'))`, every `ε > e`
/// satisfies the strict hypotheses of the correspondence lemma, so the GHP
/// distance is below `3ε` for all such `ε`; the returned value `3e` is the
/// infimum of those bounds. Prokhorov terms use the certified upper end when
/// the exact routine is out of budget.
pub fn ghp_upper_bound(x: &MmSpace, x2: &MmSpace, r: &Correspondence, nu: &CouplingMeasure) -> Result<Q, GhpError> {
    let dis = distortion(x, x2, r)?;
    let mut in_r = std::collections::HashSet::new();
    for &p in &r.pairs {
        in_r.insert(p);
    }
    let mut outside = Q::zero();
    let mut p1 = vec![Q::zero(); x.len()];
    let mut p2 = vec![Q::zero(); x2.len()];
    for ((a, b), m) in &nu.mass {
        if *a >= x.len() || *b >= x2.len() {
            return Err(GhpError::Size(format!("coupling pair ({a},{b}) out of range")));
        }
        if m.is_negative() {
            return Err(GhpError::NegativeMass(*a));
        }
        if !in_r.contains(&(*a, *b)) {
            outside += m;
        }
        p1[*a] += m;
        p2[*b] += m;
    }
    let d1 = prokhorov(x, &p1, x.mass())?.upper;
    let d2 = prokhorov(x2, &p2, x2.mass())?.upper;
    let e = [dis, outside, d1, d2].into_iter().max().unwrap();
    Ok(e * q_int(3))
}

#[cfg(test)]
mod tests;
