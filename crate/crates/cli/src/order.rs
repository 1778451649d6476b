//! Face-opening chains with verified order witnesses, exact order searches on
//! small openings, and an exhaustive antisymmetry scan.
//!
//! The chains use arbitrary openings. They are not the uniform growth
//! coupling, which is not implemented.

use crate::{ExpError, ExperimentConfig};
use qmaps::enumeration::for_each_quadrangulation;
use qmaps::enumeration::sampling::{rng_from_seed, sample_quadrangulation_with};
use qmaps::ghp::{find_isometry, mm_space_of_map, order_leq, q_to_f64, witness_from_graph_hom, MmSpace, OrderBudget, OrderWitness};
use qmaps::growth::{close_face, open_face};
use qmaps::map_kernel::{canonical_key, PlanarMap};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

pub const CHAIN_STEPS: usize = 100;
pub const EXACT_OPENINGS: usize = 200;

/// Emitted with every opening-based result.
pub const GROWTH_WARNING: &str =
    "openings are chosen uniformly among vertex/edge-pair choices; the resulting maps are not uniform and this is not the uniform growth coupling";

#[derive(Clone, Debug, PartialEq)]
pub struct ChainResult {
    pub start_faces: usize,
    pub witnessed: usize,
    pub diameters: Vec<u32>,
    pub vertices: Vec<usize>,
    pub composite_verified: bool,
    pub pair_compositions_verified: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntisymmetryScan {
    pub max_faces: usize,
    pub spaces: usize,
    pub pairs: usize,
    pub mutual: usize,
    pub isometric: usize,
}

impl AntisymmetryScan {
    pub fn violations(&self) -> usize {
        self.mutual - self.isometric
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderReport {
    pub chains: Vec<ChainResult>,
    pub exact_openings: usize,
    pub exact_witnessed: usize,
    pub antisymmetry: AntisymmetryScan,
}

impl OrderReport {
    pub fn to_json(&self, cfg: &ExperimentConfig) -> String {
        let chains: Vec<Value> = self
            .chains
            .iter()
            .map(|c| {
                json!({
                    "start_faces": c.start_faces,
                    "steps": CHAIN_STEPS,
                    "witnessed": c.witnessed,
                    "diameters": c.diameters,
                    "vertices": c.vertices,
                    "composite_verified": c.composite_verified,
                    "pair_compositions_verified": c.pair_compositions_verified,
                })
            })
            .collect();
        let a = &self.antisymmetry;
        let v = json!({
            "header": cfg.header(),
            "warning": GROWTH_WARNING,
            "chains": chains,
            "exact_openings": { "count": self.exact_openings, "witnessed": self.exact_witnessed },
            "antisymmetry": {
                "max_faces": a.max_faces, "spaces": a.spaces, "pairs": a.pairs,
                "mutual": a.mutual, "isometric": a.isometric, "violations": a.violations(),
            },
        });
        serde_json::to_string_pretty(&v).expect("plain values") + "\n"
    }
}

/// A random opening at a uniform vertex and uniform pair of its edges.
pub fn random_opening<R: Rng>(m: &PlanarMap, rng: &mut R) -> PlanarMap {
    loop {
        let v = rng.gen_range(0..m.num_vertices());
        let ds = m.vertex_darts(v);
        if ds.len() < 2 {
            continue;
        }
        let i = rng.gen_range(0..ds.len());
        let j = (i + rng.gen_range(1..ds.len())) % ds.len();
        // parallel edges share both ends and are skipped
        if let Ok(o) = open_face(m, ds[i] >> 1, ds[j] >> 1) {
            return o;
        }
    }
}

fn diameter(x: &MmSpace) -> u32 {
    q_to_f64(&x.diameter()) as u32
}

fn step_witness(m: &PlanarMap, o: &PlanarMap) -> Result<OrderWitness, ExpError> {
    let (back, hom) = close_face(o, o.face_of(o.darts() - 1)).map_err(|e| ExpError::Invariant(e.to_string()))?;
    if back.next_slice() != m.next_slice() {
        return Err(ExpError::Invariant("closing the new face does not restore the map".into()));
    }
    witness_from_graph_hom(&back, o, &hom).map_err(|e| ExpError::Invariant(e.to_string()))
}

fn run_chain(start_faces: usize, seed: u64) -> Result<ChainResult, ExpError> {
    let mut rng = rng_from_seed(seed);
    let mut m = sample_quadrangulation_with(start_faces, &mut rng);
    let mut x = mm_space_of_map(&m);
    let x0 = x.clone();
    let mut res = ChainResult {
        start_faces,
        witnessed: 0,
        diameters: vec![diameter(&x)],
        vertices: vec![x.len()],
        composite_verified: false,
        pair_compositions_verified: 0,
    };
    let mut spaces = vec![x.clone()];
    let mut steps: Vec<OrderWitness> = Vec::new();
    for _ in 0..CHAIN_STEPS {
        let o = random_opening(&m, &mut rng);
        let x2 = mm_space_of_map(&o);
        let w = step_witness(&m, &o)?;
        w.verify(&x, &x2).map_err(|e| ExpError::Invariant(format!("step witness rejected: {e}")))?;
        res.witnessed += 1;
        res.diameters.push(diameter(&x2));
        res.vertices.push(x2.len());
        steps.push(w);
        spaces.push(x2.clone());
        m = o;
        x = x2;
    }
    if res.diameters.windows(2).any(|p| p[1] < p[0]) {
        return Err(ExpError::Invariant("diameter decreased along a chain".into()));
    }
    // transitivity: consecutive pairs, then the whole chain
    for i in (0..steps.len() - 1).step_by(10) {
        let w = steps[i].compose(&steps[i + 1]);
        w.verify(&spaces[i], &spaces[i + 2]).map_err(|e| ExpError::Invariant(format!("composed witness rejected: {e}")))?;
        res.pair_compositions_verified += 1;
    }
    let total = steps.iter().skip(1).fold(steps[0].clone(), |acc, w| acc.compose(w));
    total.verify(&x0, &x).map_err(|e| ExpError::Invariant(format!("chain witness rejected: {e}")))?;
    res.composite_verified = true;
    Ok(res)
}

/// Exact searches `X(m) ⊴ X(Open(m))` for random maps with at most
/// `max_faces` faces; returns the number of verified witnesses.
pub fn exact_openings(count: usize, max_faces: usize, seed: u64) -> Result<usize, ExpError> {
    let mut rng = rng_from_seed(seed);
    let budget = OrderBudget::default();
    let mut ok = 0;
    for _ in 0..count {
        let m = sample_quadrangulation_with(rng.gen_range(1..=max_faces), &mut rng);
        let o = random_opening(&m, &mut rng);
        let (x, x2) = (mm_space_of_map(&m), mm_space_of_map(&o));
        match order_leq(&x, &x2, &budget) {
            Ok(Some(w)) if w.verify(&x, &x2).is_ok() => ok += 1,
            Ok(_) => {}
            Err(e) => return Err(ExpError::Budget(e.to_string())),
        }
    }
    Ok(ok)
}

/// Every pair of distinct unrooted quadrangulations with at most `max_faces`
/// faces: a mutual order must come with a measure-preserving isometry.
pub fn antisymmetry_scan(max_faces: usize) -> Result<AntisymmetryScan, ExpError> {
    let mut seen = std::collections::HashSet::new();
    let mut spaces = Vec::new();
    for n in 1..=max_faces {
        for_each_quadrangulation(n, |q| {
            let key = (0..q.darts()).map(|d| canonical_key(&q.reroot(d).unwrap())).min().unwrap();
            if seen.insert(key) {
                spaces.push(mm_space_of_map(&q));
            }
        });
    }
    let budget = OrderBudget::default();
    let leq = |a: &MmSpace, b: &MmSpace| order_leq(a, b, &budget).map_err(|e| ExpError::Budget(e.to_string()));
    let pairs: Vec<(usize, usize)> = (0..spaces.len()).flat_map(|i| (i + 1..spaces.len()).map(move |j| (i, j))).collect();
    let outcomes = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&spaces[i], &spaces[j]);
            let mutual = leq(a, b)?.is_some() && leq(b, a)?.is_some();
            Ok((mutual, mutual && find_isometry(a, b).is_some()))
        })
        .collect::<Result<Vec<(bool, bool)>, ExpError>>()?;
    Ok(AntisymmetryScan {
        max_faces,
        spaces: spaces.len(),
        pairs: pairs.len(),
        mutual: outcomes.iter().filter(|o| o.0).count(),
        isometric: outcomes.iter().filter(|o| o.1).count(),
    })
}

/// `replicas` chains of [`CHAIN_STEPS`] openings from maps with `n` faces
/// (default 2), [`EXACT_OPENINGS`] exact searches on maps with at most
/// `budget` faces, and the antisymmetry scan up to the largest ladder size.
pub fn run_order_demos(cfg: &ExperimentConfig) -> Result<OrderReport, ExpError> {
    cfg.need_replicas()?;
    let start = cfg.n.unwrap_or(2);
    if start == 0 || cfg.budget == 0 {
        return Err(ExpError::Input("sizes must be positive".into()));
    }
    let scan_max = cfg.ladder.iter().copied().max().unwrap_or(4);
    if cfg.budget > 8 || scan_max > 5 {
        return Err(ExpError::Budget("exact order searches are limited to 8 faces and scans to 5".into()));
    }
    let chains =
        (0..cfg.replicas).into_par_iter().map(|r| run_chain(start, cfg.replica_seed(start, r))).collect::<Result<Vec<_>, _>>()?;
    let exact_witnessed = exact_openings(EXACT_OPENINGS, cfg.budget, cfg.replica_seed(0, usize::MAX))?;
    let antisymmetry = antisymmetry_scan(scan_max)?;
    Ok(OrderReport { chains, exact_openings: EXACT_OPENINGS, exact_witnessed, antisymmetry })
}
