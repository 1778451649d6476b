use super::pattern::*;
use super::{close_face, open_face};
use crate::enumeration::gluing::for_each_map;
use crate::enumeration::sampling::{rng_from_seed, sample_quadrangulation_with};
use crate::enumeration::{hexagon_class_by_growth, sample_irreducible_randomized_size};
use crate::ghp::{mm_space_of_map, witness_from_graph_hom};
use crate::map_kernel::*;
use rand::Rng;

fn pattern() -> Pattern {
    p0().expect("fixture")
}

fn diameter(m: &PlanarMap) -> u32 {
    (0..m.num_vertices()).map(|v| *bfs_distances(m, v).unwrap().iter().max().unwrap()).max().unwrap()
}

/// Random adjacent edge pair at a random vertex of degree at least 2.
fn random_opening<R: Rng>(m: &PlanarMap, rng: &mut R) -> Option<PlanarMap> {
    let v = rng.gen_range(0..m.num_vertices());
    let ds = m.vertex_darts(v);
    if ds.len() < 2 {
        return None;
    }
    let i = rng.gen_range(0..ds.len());
    let j = (i + rng.gen_range(1..ds.len())) % ds.len();
    open_face(m, ds[i] >> 1, ds[j] >> 1).ok()
}

#[test]
fn fixture_is_pinned_and_rediscovered() {
    assert_eq!(sha256_hex(P0_FIXTURE), P0_SHA256);
    let found = discover_p0().unwrap();
    assert_eq!(serialize(found.map()), P0_FIXTURE);
    let listed: Vec<String> =
        include_str!("../../fixtures/p0_candidates.pmap").split("\n\n").map(|s| format!("{}\n", s.trim_end())).collect();
    assert_eq!(pattern_candidates(), listed);
}

#[test]
fn pattern_shape() {
    let p = pattern();
    let m = p.map();
    assert_eq!(m.num_vertices(), 13);
    assert_eq!(p.inner_faces(), 9);
    assert_eq!(p.boundary_len(), 6);
    assert!(is_irreducible_hexagon_dissection(m));
    assert!(has_long_inner_paths(m));
    assert_eq!(boundary_symmetries(m), 3);
    assert_eq!(diameter(m), 4);
}

#[test]
fn occurs_in_itself_three_times() {
    let p = pattern();
    let occ = occurrences(p.map(), &p);
    assert_eq!(occ.len(), 3);
    assert_eq!(occ.copies.len(), 1);
    for &e in &occ.darts {
        assert_eq!(canonical_key(&p.map().reroot(e).unwrap()), canonical_key(p.map()));
    }
}

#[test]
fn small_maps_have_no_occurrence() {
    let p = pattern();
    for n in 1..=6 {
        crate::enumeration::for_each_quadrangulation(n, |q| assert_eq!(count_occurrences(&q, &p), 0));
    }
    let unrooted = |m: &PlanarMap| (0..m.darts()).map(|d| canonical_key(&m.reroot(d).unwrap())).min().unwrap();
    let target = unrooted(p.map());
    for k in 3..=9 {
        for m in hexagon_class_by_growth(k) {
            let expect = if k == 9 && unrooted(&m) == target { 3 } else { 0 };
            assert_eq!(count_occurrences(&m, &p), expect, "k = {k}");
        }
    }
}

#[test]
fn fill_then_remove_exhaustive() {
    let p = pattern();
    // chord dissections (k = 2) belong to the class used by the pattern identities
    let mut inputs = Vec::new();
    for_each_map(6, 4, 2, |m| {
        if is_irreducible_hexagon_dissection(&m) {
            inputs.push(m)
        }
    });
    assert_eq!(inputs.len(), 3);
    for k in 3..=8 {
        inputs.extend(hexagon_class_by_growth(k));
    }
    for (i, qh) in inputs.iter().enumerate() {
        let k = qh.num_faces() - 1;
        let (q, bar) = fill_hexagon(qh, &p, i as u64).unwrap();
        assert!(q.is_quadrangulation());
        assert_eq!(q.num_faces(), k + 9);
        assert!(is_irreducible(&q));
        let occ = occurrences(&q, &p);
        assert!(occ.darts.contains(&bar));
        assert_eq!(occ.len() % 3, 0);
        // below 14 faces a second copy overlaps the inserted one
        if k >= 5 {
            assert_eq!(occ.len(), count_occurrences(qh, &p) + 3);
            assert!(occ.copies_disjoint());
        } else {
            assert!(occ.len() > 3, "k = {k}: {}", occ.len());
            assert!(!occ.copies_disjoint());
        }
        let back = remove_occurrence(&q, &p, bar).unwrap();
        assert_eq!(canonical_key(&back), canonical_key(qh));
    }
}

#[test]
fn irreducibility_is_equivalent_both_ways() {
    // every simple-boundary hexagon quadrangulation up to 5 inner faces
    let p = pattern();
    let mut seen = [0usize; 2];
    for k in 1..=5 {
        for_each_map(6, 4, k, |qh| {
            let hex = qh.face_darts(qh.root_face());
            let mut vs: Vec<usize> = hex.iter().map(|&d| qh.origin(d)).collect();
            vs.sort_unstable();
            vs.dedup();
            if vs.len() != 6 {
                return;
            }
            let (q, bar) = glue_into_root_face(&qh, &p).unwrap();
            let lhs = is_irreducible(&q);
            assert_eq!(lhs, is_irreducible_hexagon_dissection(&qh));
            let back = remove_occurrence(&q, &p, bar).unwrap();
            assert_eq!(canonical_key(&back), canonical_key(&qh));
            seen[lhs as usize] += 1;
        });
    }
    assert!(seen[0] > 0 && seen[1] > 0);
}

#[test]
fn removal_from_sampled_maps() {
    let p = pattern();
    let mut removed = 0;
    for r in 0..40 {
        let draw = sample_irreducible_randomized_size(1500, 1000 + r).unwrap();
        let q = draw.map;
        let occ = occurrences(&q, &p);
        assert_eq!(occ.len() % 3, 0);
        assert_eq!(occ.len(), 3 * occ.copies.len());
        assert!(occ.copies_disjoint());
        for &e in occ.darts.iter().take(3) {
            let h = remove_occurrence(&q, &p, e).unwrap();
            assert!(is_irreducible_hexagon_dissection(&h));
            assert_eq!(h.num_faces() - 1, q.num_faces() - 9);
            assert_eq!(count_occurrences(&h, &p) + 3, occ.len());
            let (back, bar) = glue_into_root_face(&h, &p).unwrap();
            assert_eq!(canonical_key(&back.reroot(bar).unwrap()), canonical_key(&q.reroot(e).unwrap()));
            removed += 1;
        }
    }
    assert!(removed > 0);
}

#[test]
fn rejects_bad_inputs() {
    let p = pattern();
    let q = fixtures::cube();
    assert_eq!(remove_occurrence(&q, &p, 0).unwrap_err(), PatternError::NotAnOccurrence(0));
    assert_eq!(fill_hexagon(&q, &p, 0).unwrap_err(), PatternError::NotInClass);
    assert!(matches!(Pattern::new(fixtures::path2()), Err(PatternError::RootFaceNotSimple)));
}

#[test]
fn openings_keep_quadrangulations_and_are_witnessed() {
    let mut rng = rng_from_seed(21);
    let mut done = 0;
    while done < 500 {
        let n = rng.gen_range(1..12);
        let m = sample_quadrangulation_with(n, &mut rng);
        let Some(o) = random_opening(&m, &mut rng) else { continue };
        assert!(o.is_quadrangulation());
        assert_eq!(
            (o.num_vertices(), o.num_edges(), o.num_faces()),
            (m.num_vertices() + 1, m.num_edges() + 2, m.num_faces() + 1)
        );
        assert_eq!(o.root(), m.root());
        let (back, hom) = close_face(&o, o.face_of(o.darts() - 1)).unwrap();
        assert_eq!(back.next_slice(), m.next_slice());
        if done % 10 == 0 {
            let w = witness_from_graph_hom(&back, &o, &hom).unwrap();
            w.verify(&mm_space_of_map(&m), &mm_space_of_map(&o)).unwrap();
        }
        done += 1;
    }
}

#[test]
fn coupling_statistics_invariants() {
    let s = coupling_statistics(200, 6, 3, &pattern()).unwrap();
    assert!(s.invariants_hold);
    assert_eq!(s.replicas, 6);
    assert!(s.mean_size > 0.0 && s.occ_rate >= 0.0 && s.root_rate <= 1.0);
}
