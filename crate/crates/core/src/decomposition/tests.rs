use super::*;
use crate::enumeration::{for_each_quadrangulation, sample_quadrangulation};
use crate::map_kernel::fixtures::*;
use crate::map_kernel::{canonical_form_with_labels, canonical_key, serialize};
use std::collections::{BTreeSet, HashMap};

fn component_sets(q: &PlanarMap) -> BTreeSet<Vec<usize>> {
    irreducible_components(q).components.iter().map(|c| c.submap.edges()).collect()
}

fn check_routes(q: &PlanarMap, brute: bool) {
    let comps = component_sets(q);
    let mut via_blocks = BTreeSet::new();
    for d in 0..q.darts() {
        if let Some(e) = root_block_edges(q, d) {
            via_blocks.insert(e);
        }
    }
    assert_eq!(comps, via_blocks, "{}", serialize(q));
    if brute {
        let b: BTreeSet<Vec<usize>> = brute_force_components(q).into_iter().collect();
        assert_eq!(comps, b, "{}", serialize(q));
    }
}

#[test]
fn routes_agree_exhaustively_small() {
    for n in 1..=6 {
        for_each_quadrangulation(n, |q| check_routes(&q, true));
    }
}

#[test]
fn routes_agree_on_samples() {
    for seed in 0..30 {
        let q = sample_quadrangulation(60, seed).unwrap();
        check_routes(&q, false);
    }
}

/// The map and a submap, both relabelled canonically.
fn normal(q: &PlanarMap, s: &Submap) -> (String, Vec<usize>, usize) {
    let (c, lab) = canonical_form_with_labels(q);
    let mut d: Vec<usize> = s.darts.iter().map(|&x| lab[x]).collect();
    d.sort_unstable();
    (serialize(&c), d, lab[s.root])
}

fn round_trips(q: &PlanarMap) -> usize {
    let mut count = 0;
    for c in irreducible_components(q).components {
        for &r in &c.submap.darts {
            let s = Submap { darts: c.submap.darts.clone(), root: r };
            let dec = detach(q, &s).unwrap();
            assert_eq!(dec.fillers.len(), c.size);
            assert!(dec.fillers.iter().all(is_filler));
            let (q2, s2) = glue(&dec).unwrap();
            assert_eq!(normal(q, &s), normal(&q2, &s2));
            let again = detach(&q2, &s2).unwrap();
            assert_eq!(canonical_key(&again.core), canonical_key(&dec.core));
            assert_eq!(again.index, dec.index);
            for (a, b) in again.fillers.iter().zip(&dec.fillers) {
                assert_eq!(canonical_key(a), canonical_key(b));
            }
            count += 1;
        }
    }
    count
}

#[test]
fn detach_glue_round_trip_exhaustive() {
    for n in 6..=7 {
        for_each_quadrangulation(n, |q| {
            round_trips(&q);
        });
    }
}

#[test]
fn detach_glue_round_trip_samples() {
    for seed in 0..10 {
        let q = sample_quadrangulation(80, seed).unwrap();
        round_trips(&q);
    }
}

fn filler_counts(max: usize) -> Vec<u64> {
    let mut out = vec![0u64; max + 1];
    for k in 2..=max {
        for_each_quadrangulation(k, |m| {
            if is_filler(&m) {
                out[k] += 1;
            }
        });
    }
    out
}

/// Sum over size vectors: number of filler tuples with the given total size.
fn tuples(counts: &[u64], parts: usize, total: usize) -> u64 {
    if parts == 0 {
        return (total == 0) as u64;
    }
    (2..counts.len()).filter(|&k| k <= total).map(|k| counts[k] * tuples(counts, parts - 1, total - k)).sum()
}

#[test]
fn counting_identity() {
    let n_max = 7;
    let fill = filler_counts(n_max - 4);
    assert_eq!(fill[2], 1);
    // left side: (map, rooted component of size l) pairs
    let mut lhs: HashMap<(usize, usize), u64> = HashMap::new();
    let mut irr: HashMap<usize, u64> = HashMap::new();
    for n in 6..=n_max {
        for_each_quadrangulation(n, |q| {
            for c in irreducible_components(&q).components {
                *lhs.entry((n, c.size)).or_default() += 4 * c.size as u64;
            }
            if crate::map_kernel::is_irreducible(&q) {
                *irr.entry(n).or_default() += 1;
            }
        });
    }
    assert_eq!(lhs[&(6, 6)], 24);
    for (&(n, l), &v) in &lhs {
        let rhs = irr[&l] * tuples(&fill, l, n + l) * 4 * n as u64;
        assert_eq!(v, rhs, "n = {n}, l = {l}");
    }
}

#[test]
fn two_cubes_tie() {
    let cube = cube();
    let mut fillers = vec![four_cycle(); 6];
    fillers[2] = cube.clone();
    let (q, _) = glue(&Decomposition { core: cube.clone(), fillers, index: 0 }).unwrap();
    assert_eq!(q.num_faces(), 10);
    let rep = irreducible_components(&q);
    assert_eq!(rep.sizes, vec![6, 6]);
    assert!(!rep.unique_largest);
    let a = &rep.components[0].submap;
    let b = &rep.components[1].submap;
    let w = separation_witness(&q, a, b).unwrap();
    assert_eq!(w.len(), 4);
    let mut rng = crate::enumeration::sampling::rng_from_seed(1);
    let (_, unique) = largest_component(&q, &mut rng).unwrap();
    assert!(!unique);
}

#[test]
fn mass_measure_totals() {
    let q = sample_quadrangulation(200, 5).unwrap();
    let rep = irreducible_components(&q);
    let c = rep.components.iter().find(|c| c.size == rep.l_irr).unwrap();
    let dec = detach(&q, &c.submap).unwrap();
    let mut rng = crate::enumeration::sampling::rng_from_seed(2);
    let mass = component_mass_measure(&dec, &mut rng);
    let total: u64 = mass.iter().sum();
    assert_eq!(total as usize + dec.core.num_vertices(), q.num_vertices());
}

#[test]
fn psi_is_white_to_black_on_the_left() {
    let q = cube();
    let col = crate::map_kernel::canonical_bicoloring(&q).unwrap();
    for f in 0..q.num_faces() {
        let p = psi_root_edge(&q, f).unwrap();
        assert!(!col.is_black(q.origin(p)));
        assert_eq!(q.face_of(p ^ 1), f);
    }
}

