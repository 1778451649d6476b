use super::{GhpError, Metric, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest support handled by exact subset enumeration.
pub const PROKHOROV_EXACT_MAX: usize = 15;

/// Certified enclosure of a Prokhorov distance; `lower == upper` when exact.
#[derive(Clone, Debug, PartialEq)]
pub struct ProkhorovBound {
    pub lower: Q,
    pub upper: Q,
}

impl ProkhorovBound {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

fn check_inputs<M: Metric>(m: &M, mu: &[Q], nu: &[Q]) -> Result<(), GhpError> {
    if mu.len() != m.len() || nu.len() != m.len() {
        return Err(GhpError::Size(format!("{} points, {} and {} masses", m.len(), mu.len(), nu.len())));
    }
    if let Some(i) = mu.iter().chain(nu).position(|x| x.is_negative()) {
        return Err(GhpError::NegativeMass(i % m.len()));
    }
    Ok(())
}

/// Masses times a common denominator, as machine integers.
fn scaled(mu: &[Q], nu: &[Q]) -> Result<(BigInt, Vec<i128>, Vec<i128>), GhpError> {
    let mut l = BigInt::one();
    for x in mu.iter().chain(nu) {
        l = l.lcm(x.denom());
    }
    let conv = |v: &[Q]| -> Result<Vec<i128>, GhpError> {
        v.iter().map(|x| (x.numer() * (&l / x.denom())).to_i128().ok_or(GhpError::Overflow)).collect()
    };
    let (a, b) = (conv(mu)?, conv(nu)?);
    // subset sums stay below the grand total
    a.iter().chain(&b).try_fold(0i128, |s, &x| s.checked_add(x)).ok_or(GhpError::Overflow)?;
    Ok((l, a, b))
}

fn distinct_distances<M: Metric>(m: &M) -> Vec<Q> {
    let mut ds = vec![Q::zero()];
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            ds.push(m.dist(i, j));
        }
    }
    ds.sort();
    ds.dedup();
    ds
}

/// Exact Prokhorov distance for supports of at most [`PROKHOROV_EXACT_MAX`]
/// points.
///
/// Closed `ε`-neighbourhoods are constant on each interval between
/// consecutive distance values `d_k`, so the condition holds on that interval
/// iff `ε ≥ g_k`, the worst mass defect over all subsets. The infimum is then
/// `min_k max(d_k, g_k)`.
pub fn prokhorov_exact<M: Metric>(m: &M, mu: &[Q], nu: &[Q]) -> Result<Q, GhpError> {
    check_inputs(m, mu, nu)?;
    let n = m.len();
    if n > PROKHOROV_EXACT_MAX {
        return Err(GhpError::Size(format!("{n} points exceed the exact limit {PROKHOROV_EXACT_MAX}")));
    }
    if n == 0 {
        return Ok(Q::zero());
    }
    let (l, a, b) = scaled(mu, nu)?;
    let full = 1usize << n;
    let mut sa = vec![0i128; full];
    let mut sb = vec![0i128; full];
    for s in 1..full {
        let low = s.trailing_zeros() as usize;
        sa[s] = sa[s & (s - 1)] + a[low];
        sb[s] = sb[s & (s - 1)] + b[low];
    }
    let mut nb = vec![0usize; full];
    let mut best: Option<Q> = None;
    for d in distinct_distances(m) {
        let ball: Vec<usize> = (0..n).map(|x| (0..n).filter(|&y| m.dist(x, y) <= d).fold(0, |acc, y| acc | 1 << y)).collect();
        let mut g = 0i128;
        for s in 1..full {
            let low = s.trailing_zeros() as usize;
            nb[s] = nb[s & (s - 1)] | ball[low];
            g = g.max(sa[s] - sb[nb[s]]).max(sb[s] - sa[nb[s]]);
        }
        let g = Q::new(BigInt::from(g), l.clone());
        let cand = if g > d { g } else { d };
        if best.as_ref().is_none_or(|b| &cand < b) {
            best = Some(cand);
        }
    }
    Ok(best.unwrap())
}

/// `ε + Σ_i |μ(Z_i) − ν(Z_i)|` for a partition into cells of diameter `< ε`.
pub fn coarse_grained_bound<M: Metric>(m: &M, cells: &[Vec<usize>], eps: &Q, mu: &[Q], nu: &[Q]) -> Result<Q, GhpError> {
    check_inputs(m, mu, nu)?;
    let mut seen = vec![false; m.len()];
    let mut total = eps.clone();
    for (c, cell) in cells.iter().enumerate() {
        for &x in cell {
            if x >= m.len() || seen[x] {
                return Err(GhpError::Partition(format!("point {x} is out of range or in two cells")));
            }
            seen[x] = true;
        }
        if &m.diameter_of(cell) >= eps {
            return Err(GhpError::Partition(format!("cell {c} has diameter at least eps")));
        }
        let dm: Q = cell.iter().map(|&x| &mu[x]).sum();
        let dn: Q = cell.iter().map(|&x| &nu[x]).sum();
        total += (dm - dn).abs();
    }
    if let Some(x) = seen.iter().position(|&s| !s) {
        return Err(GhpError::Partition(format!("point {x} is in no cell")));
    }
    Ok(total)
}

/// Lower bound from the single set `{x}`: `min_r max(r, μ(x) − ν(B(x, r)))`.
fn atom_bound<M: Metric>(m: &M, x: usize, mu: &[Q], nu: &[Q]) -> Q {
    let mut by_dist: Vec<(Q, usize)> = (0..m.len()).map(|y| (m.dist(x, y), y)).collect();
    by_dist.sort();
    let mut covered = Q::zero();
    let mut best: Option<Q> = None;
    let mut i = 0;
    while i < by_dist.len() {
        let r = by_dist[i].0.clone();
        while i < by_dist.len() && by_dist[i].0 == r {
            covered += &nu[by_dist[i].1];
            i += 1;
        }
        let defect = &mu[x] - &covered;
        let cand = if defect > r { defect } else { r };
        if best.as_ref().is_none_or(|b| &cand < b) {
            best = Some(cand);
        }
    }
    best.unwrap_or_else(Q::zero)
}

/// Greedy partition into balls of radius `< ε/2`, hence diameter `< ε`.
pub(super) fn greedy_cells<M: Metric + ?Sized>(m: &M, eps: &Q) -> Vec<Vec<usize>> {
    let half = eps / Q::from_integer(BigInt::from(2));
    let mut taken = vec![false; m.len()];
    let mut cells = Vec::new();
    for c in 0..m.len() {
        if taken[c] {
            continue;
        }
        let cell: Vec<usize> = (c..m.len()).filter(|&y| !taken[y] && m.dist(c, y) < half).collect();
        for &y in &cell {
            taken[y] = true;
        }
        cells.push(cell);
    }
    cells
}

/// Exact value for small supports; otherwise a certified interval whose lower
/// end comes from the whole space and single heavy atoms, and whose upper end
/// is the best coarse-grained bound over greedy partitions at dyadic scales.
pub fn prokhorov<M: Metric>(m: &M, mu: &[Q], nu: &[Q]) -> Result<ProkhorovBound, GhpError> {
    check_inputs(m, mu, nu)?;
    if mu == nu {
        return Ok(ProkhorovBound { lower: Q::zero(), upper: Q::zero() });
    }
    if m.len() <= PROKHOROV_EXACT_MAX {
        let v = prokhorov_exact(m, mu, nu)?;
        return Ok(ProkhorovBound { lower: v.clone(), upper: v });
    }
    let tm: Q = mu.iter().sum();
    let tn: Q = nu.iter().sum();
    let mut lower = (&tm - &tn).abs();
    for (p, r) in [(mu, nu), (nu, mu)] {
        let mut heavy: Vec<usize> = (0..m.len()).collect();
        heavy.sort_by(|&i, &j| p[j].cmp(&p[i]));
        for &x in heavy.iter().take(32) {
            let b = atom_bound(m, x, p, r);
            if b > lower {
                lower = b;
            }
        }
    }
    let all: Vec<usize> = (0..m.len()).collect();
    let diam = m.diameter_of(&all);
    // one cell of diameter < ε always works once ε exceeds the diameter
    let mut eps = diam + Q::one();
    let mut upper = &eps + (&tm - &tn).abs();
    for _ in 0..16 {
        let cells = m.partition(&eps);
        let b = coarse_grained_bound(m, &cells, &eps, mu, nu)?;
        if b < upper {
            upper = b;
        }
        eps /= Q::from_integer(BigInt::from(2));
    }
    Ok(ProkhorovBound { lower, upper })
}
