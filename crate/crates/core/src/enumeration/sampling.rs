//! Seeded uniform samplers.
//!
//! Uniform quadrangulations come from labelled trees: a uniform plane tree
//! with `n` edges, i.i.d. label increments in {-1, 0, 1}, and a fair sign.
//! Each corner is joined to the next corner (cyclically, in contour order)
//! whose label is one less, or to an extra vertex when its label is minimal.
//! Every rooted quadrangulation with `n` faces has `n + 2` vertices, so the
//! pointed-to-rooted projection keeps the law uniform.

use super::{enumerate_maps, Budget, EnumError};
use crate::decomposition::{irreducible_components, Submap};
use crate::map_kernel::{MapClass, PlanarMap};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error("size must be positive")]
    ZeroSize,
    #[error("no unique largest irreducible component after {0} attempts")]
    RetryCap(usize),
    #[error("the requested class is empty at this size")]
    EmptyClass,
    #[error(transparent)]
    Enumeration(#[from] EnumError),
}

/// SplitMix64 finaliser.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-replica seed derived from the user seed.
pub fn mix_seed(seed: u64, replica: u64) -> u64 {
    splitmix64(seed ^ splitmix64(replica.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform Dyck path of length `2n` as up (true) / down steps, by the cycle lemma.
fn dyck_path<R: Rng>(n: usize, rng: &mut R) -> Vec<bool> {
    let mut steps: Vec<bool> = (0..2 * n + 1).map(|i| i < n).collect();
    steps.shuffle(rng);
    // rotate to start right after the first minimum of the partial sums
    let (mut h, mut min, mut at) = (0i64, 0i64, 0usize);
    for (i, &s) in steps.iter().enumerate() {
        h += if s { 1 } else { -1 };
        if h < min {
            min = h;
            at = i + 1;
        }
    }
    let len = steps.len();
    steps.rotate_left(at % len);
    steps.pop();
    steps
}

pub fn sample_quadrangulation_with<R: Rng>(n: usize, rng: &mut R) -> PlanarMap {
    let path = dyck_path(n, rng);
    let m = 2 * n;
    // contour: vertex of each corner, and labels
    let mut corner_vertex = Vec::with_capacity(m);
    let mut label = vec![0i64];
    let mut stack = vec![0usize];
    for &up in &path {
        let v = *stack.last().unwrap();
        corner_vertex.push(v);
        if up {
            let child = label.len();
            label.push(label[v] + rng.gen_range(-1..=1));
            stack.push(child);
        } else {
            stack.pop();
        }
    }
    let star = label.len();
    let lab: Vec<i64> = corner_vertex.iter().map(|&v| label[v]).collect();
    let lo = *lab.iter().min().unwrap();
    let hi = *lab.iter().max().unwrap();
    let first_min = lab.iter().position(|&l| l == lo).unwrap();

    // successor of each corner (None = the extra vertex)
    let width = (hi - lo + 1) as usize;
    let mut upcoming = vec![usize::MAX; width];
    let mut succ = vec![None; m];
    for p in (0..2 * m).rev() {
        let i = p % m;
        if p < m && lab[i] > lo {
            let s = upcoming[(lab[i] - 1 - lo) as usize];
            succ[i] = Some(s % m);
        }
        upcoming[(lab[i] - lo) as usize] = p;
    }

    // positions on the contour circle, doubled so the extra vertex fits in a gap
    let total = 2 * m;
    let star_pos = 2 * first_min + 1;
    let pos_of = |s: Option<usize>| s.map_or(star_pos, |c| 2 * c);
    // arcs attached to each corner, as (offset, dart)
    let mut at_corner: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    let mut at_star: Vec<(usize, usize)> = Vec::new();
    for i in 0..m {
        let (out, inc) = (2 * i, 2 * i + 1);
        let tp = pos_of(succ[i]);
        at_corner[i].push(((tp + total - 2 * i) % total, out));
        match succ[i] {
            Some(j) => at_corner[j].push(((2 * i + total - 2 * j) % total, inc)),
            None => at_star.push(((2 * i + total - star_pos) % total, inc)),
        }
    }
    // counterclockwise within a corner: decreasing offset
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); star + 1];
    for i in 0..m {
        at_corner[i].sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let v = corner_vertex[i];
        rotation[v].extend(at_corner[i].iter().map(|&(_, d)| d));
    }
    at_star.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    rotation[star] = at_star.iter().map(|&(_, d)| d).collect();

    let mut next = vec![0; 2 * m];
    for rot in &rotation {
        for (k, &d) in rot.iter().enumerate() {
            next[d] = rot[(k + 1) % rot.len()];
        }
    }
    let root = if rng.gen_bool(0.5) { 0 } else { 1 };
    PlanarMap::new(next, root).expect("tree encoding yields a quadrangulation")
}

/// Uniform rooted quadrangulation with `n` faces.
pub fn sample_quadrangulation(n: usize, seed: u64) -> Result<PlanarMap, SampleError> {
    if n == 0 {
        return Err(SampleError::ZeroSize);
    }
    Ok(sample_quadrangulation_with(n, &mut rng_from_seed(seed)))
}

#[derive(Clone, Debug)]
pub struct IrreducibleDraw {
    /// The component, rerooted uniformly among its darts.
    pub map: PlanarMap,
    /// Its face count.
    pub size: usize,
    /// Whether the largest component of the accepted host was unique.
    pub unique: bool,
    /// Host draws used, including the accepted one.
    pub attempts: usize,
    pub host: PlanarMap,
    pub component: Submap,
}

pub const RETRY_CAP: usize = 1000;

/// Largest irreducible component of a uniform quadrangulation with `m`
/// faces, conditioned on being unique, rerooted uniformly.
pub fn sample_irreducible_from_host<R: Rng>(m: usize, rng: &mut R) -> Result<IrreducibleDraw, SampleError> {
    if m == 0 {
        return Err(SampleError::ZeroSize);
    }
    for attempt in 1..=RETRY_CAP {
        let host = sample_quadrangulation_with(m, rng);
        let report = irreducible_components(&host);
        if report.l_irr == 0 || !report.unique_largest {
            continue;
        }
        let comp = report.components.iter().find(|c| c.size == report.l_irr).unwrap();
        let map = comp.submap.to_map(&host);
        let root = rng.gen_range(0..map.darts());
        let map = map.reroot(root).unwrap();
        debug_assert_eq!(crate::map_kernel::classify(&map), MapClass::IrreducibleQuadrangulation);
        return Ok(IrreducibleDraw { size: comp.size, map, unique: true, attempts: attempt, host, component: comp.submap.clone() });
    }
    Err(SampleError::RetryCap(RETRY_CAP))
}

/// The randomized-size irreducible sampler: host size `9 * n_target`.
pub fn sample_irreducible_randomized_size(n_target: usize, seed: u64) -> Result<IrreducibleDraw, SampleError> {
    sample_irreducible_from_host(9 * n_target, &mut rng_from_seed(seed))
}

/// Uniform member of the hexagon class with `k` quadrangular faces.
pub fn sample_irreducible_hexagon_small(k: usize, seed: u64, budget: &Budget) -> Result<PlanarMap, SampleError> {
    let all = enumerate_maps(MapClass::IrreducibleHexagon, k, budget)?;
    if all.is_empty() {
        return Err(SampleError::EmptyClass);
    }
    let i = rng_from_seed(seed).gen_range(0..all.len());
    Ok(all[i].clone())
}

#[cfg(test)]
mod tests {
    use super::super::for_each_quadrangulation;
    use super::*;
    use crate::map_kernel::{canonical_key, serialize};
    use std::collections::HashMap;

    fn chi_square_ok(counts: &HashMap<Vec<u32>, u64>, classes: usize, draws: u64) -> bool {
        // Wilson-Hilferty upper quantile at p = 0.001
        let df = (classes - 1) as f64;
        let z = 3.090_232;
        let crit = df * (1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt()).powi(3);
        let e = draws as f64 / classes as f64;
        let stat: f64 = counts.values().map(|&o| (o as f64 - e).powi(2) / e).sum::<f64>()
            + (classes - counts.len()) as f64 * e;
        stat < crit
    }

    #[test]
    fn support_and_uniformity_small_n() {
        for n in 1..=4 {
            let mut support = HashMap::new();
            for_each_quadrangulation(n, |m| {
                support.insert(canonical_key(&m), 0u64);
            });
            let draws = 40_000u64;
            let mut rng = rng_from_seed(7 + n as u64);
            for _ in 0..draws {
                let q = sample_quadrangulation_with(n, &mut rng);
                *support.get_mut(&canonical_key(&q)).expect("sample outside the class") += 1;
            }
            assert!(chi_square_ok(&support, support.len(), draws), "n = {n}");
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let a = sample_quadrangulation(50, 3).unwrap();
        let b = sample_quadrangulation(50, 3).unwrap();
        assert_eq!(serialize(&a), serialize(&b));
        assert_ne!(serialize(&a), serialize(&sample_quadrangulation(50, 4).unwrap()));
        assert_eq!(sample_quadrangulation(0, 1).unwrap_err(), SampleError::ZeroSize);
    }

    #[test]
    fn large_samples_are_quadrangulations() {
        let q = sample_quadrangulation(5000, 11).unwrap();
        assert!(q.is_quadrangulation());
        assert_eq!(q.num_vertices(), 5002);
    }

    #[test]
    fn seeds_mix() {
        assert_ne!(mix_seed(1, 0), mix_seed(1, 1));
        assert_ne!(mix_seed(1, 0), mix_seed(2, 0));
        assert_eq!(mix_seed(9, 9), mix_seed(9, 9));
    }

    #[test]
    fn hexagon_sampler() {
        let b = Budget::default();
        assert_eq!(sample_irreducible_hexagon_small(2, 0, &b).unwrap_err(), SampleError::EmptyClass);
        let mut freq = HashMap::new();
        for s in 0..2000 {
            let m = sample_irreducible_hexagon_small(3, s, &b).unwrap();
            *freq.entry(canonical_key(&m)).or_insert(0u64) += 1;
        }
        assert_eq!(freq.len(), 2);
        assert!(chi_square_ok(&freq, 2, 2000));
        assert!(sample_irreducible_hexagon_small(11, 0, &b).is_err());
    }
}
