//! Distance profiles of a uniform quadrangulation and of its largest
//! irreducible component, each under its own scaling.

use crate::{mean, ExpError, ExperimentConfig};
use qmaps::decomposition::largest_component;
use qmaps::enumeration::sampling::{rng_from_seed, sample_quadrangulation_with};
use qmaps::map_kernel::{bfs_distances, PlanarMap};
use rand::Rng;
use rayon::prelude::*;
use std::fmt::Write;

/// Smallest host size accepted; below it the component is too small for a
/// meaningful profile.
pub const PROFILE_FLOOR: usize = 1000;
/// The CDFs are written on the grid `0, 0.05, …, 4`.
const GRID_STEP: f64 = 0.05;
const GRID_POINTS: usize = 81;

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileReplica {
    pub n: usize,
    pub replica: usize,
    /// Face count of the largest component.
    pub m: usize,
    pub ks: f64,
    pub host_cdf: Vec<f64>,
    pub comp_cdf: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileReport {
    pub replicas: Vec<ProfileReplica>,
    /// `(n, mean KS)` along the ladder.
    pub mean_ks: Vec<(usize, f64)>,
}

impl ProfileReport {
    pub fn to_csv(&self, cfg: &ExperimentConfig) -> String {
        let mut s = cfg.header();
        s.push_str("\nn,replica,m,kind,x,value\n");
        for r in &self.replicas {
            let _ = writeln!(s, "{},{},{},ks,,{}", r.n, r.replica, r.m, r.ks);
            for (kind, cdf) in [("host_cdf", &r.host_cdf), ("comp_cdf", &r.comp_cdf)] {
                for (i, v) in cdf.iter().enumerate() {
                    let _ = writeln!(s, "{},{},{},{kind},{},{v}", r.n, r.replica, r.m, i as f64 * GRID_STEP);
                }
            }
        }
        for (n, k) in &self.mean_ks {
            let _ = writeln!(s, "# summary n={n} mean_ks={k}");
        }
        s
    }
}

/// Two-sample Kolmogorov–Smirnov statistic of sorted samples.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// Scaled distances from a uniform vertex, sorted.
fn profile<R: Rng>(m: &PlanarMap, scale: f64, rng: &mut R) -> Vec<f64> {
    let src = rng.gen_range(0..m.num_vertices());
    let mut v: Vec<f64> = bfs_distances(m, src).expect("vertex exists").iter().map(|&d| d as f64 * scale).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn cdf_on_grid(sorted: &[f64]) -> Vec<f64> {
    (0..GRID_POINTS)
        .map(|i| sorted.partition_point(|&x| x <= i as f64 * GRID_STEP) as f64 / sorted.len() as f64)
        .collect()
}

fn one_replica(n: usize, replica: usize, seed: u64) -> Result<ProfileReplica, ExpError> {
    let mut rng = rng_from_seed(seed);
    let q = sample_quadrangulation_with(n, &mut rng);
    let (sub, _) = largest_component(&q, &mut rng).ok_or_else(|| ExpError::Invariant(format!("no irreducible component at n = {n}")))?;
    let comp = sub.to_map(&q);
    let m = comp.num_faces();
    let host = profile(&q, (9.0 / (8.0 * n as f64)).powf(0.25), &mut rng);
    let inner = profile(&comp, (8.0 * m as f64).powf(-0.25), &mut rng);
    Ok(ProfileReplica { n, replica, m, ks: ks_statistic(&host, &inner), host_cdf: cdf_on_grid(&host), comp_cdf: cdf_on_grid(&inner) })
}

pub fn run_profile_match(cfg: &ExperimentConfig) -> Result<ProfileReport, ExpError> {
    cfg.need_ladder()?;
    cfg.need_replicas()?;
    if let Some(&n) = cfg.ladder.iter().find(|&&n| n < PROFILE_FLOOR) {
        return Err(ExpError::Input(format!("size {n} is below the floor {PROFILE_FLOOR}")));
    }
    cfg.check_sizes(&cfg.ladder)?;
    let mut replicas = Vec::new();
    let mut mean_ks = Vec::new();
    for &n in &cfg.ladder {
        let batch = (0..cfg.replicas)
            .into_par_iter()
            .map(|r| one_replica(n, r, cfg.replica_seed(n, r)))
            .collect::<Result<Vec<_>, _>>()?;
        mean_ks.push((n, mean(batch.iter().map(|r| r.ks))));
        replicas.extend(batch);
    }
    Ok(ProfileReport { replicas, mean_ks })
}
