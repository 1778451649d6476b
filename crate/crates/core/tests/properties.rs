use proptest::prelude::*;
use qmaps::decomposition::{detach, glue, irreducible_components, Submap};
use qmaps::enumeration::sampling::{rng_from_seed, sample_quadrangulation_with};
use qmaps::exchangeable::{conditional_covariance, variance_bound_check, ExchangeableMixture, ExchangeableVector};
use qmaps::ghp::{
    hausdorff, mm_space_of_map, prokhorov, prokhorov_exact, q_frac, q_int, witness_from_graph_hom, LinePoints, Q,
};
use qmaps::growth::{close_face, open_face};
use qmaps::map_kernel::{canonical_key, classify, deserialize, serialize, MapClass, PlanarMap};
use rand::seq::SliceRandom;
use rand::Rng;

fn sample(n: usize, seed: u64) -> PlanarMap {
    sample_quadrangulation_with(n, &mut rng_from_seed(seed))
}

/// The same map under a random renaming of edges and dart orientations.
fn relabel(m: &PlanarMap, seed: u64) -> PlanarMap {
    let mut rng = rng_from_seed(seed);
    let mut perm: Vec<usize> = (0..m.num_edges()).collect();
    perm.shuffle(&mut rng);
    let flip: Vec<usize> = (0..m.num_edges()).map(|_| rng.gen_range(0..2)).collect();
    let sigma = |d: usize| 2 * perm[d >> 1] + ((d & 1) ^ flip[d >> 1]);
    let mut next = vec![0; m.darts()];
    for d in 0..m.darts() {
        next[sigma(d)] = sigma(m.next(d));
    }
    PlanarMap::new(next, sigma(m.root())).unwrap()
}

fn probability(weights: &[u32]) -> Vec<Q> {
    let total: i64 = weights.iter().map(|&w| w as i64).sum();
    weights.iter().map(|&w| q_frac(w as i64, total)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrangulation_counts_and_serialization(n in 1usize..60, seed in any::<u64>()) {
        let q = sample(n, seed);
        prop_assert!(q.is_quadrangulation());
        prop_assert_eq!((q.num_faces(), q.num_edges(), q.num_vertices()), (n, 2 * n, n + 2));
        prop_assert_eq!(deserialize(&serialize(&q)).unwrap(), q);
    }

    #[test]
    fn canonical_key_ignores_labels(n in 1usize..40, seed in any::<u64>(), s2 in any::<u64>()) {
        let q = sample(n, seed);
        prop_assert_eq!(canonical_key(&relabel(&q, s2)), canonical_key(&q));
    }

    #[test]
    fn component_sizes_are_consistent(n in 1usize..120, seed in any::<u64>()) {
        let q = sample(n, seed);
        let rep = irreducible_components(&q);
        prop_assert!(rep.l_irr <= rep.l_s && rep.l_s <= n);
        prop_assert_eq!(rep.sizes.first().copied().unwrap_or(0), rep.l_irr);
        prop_assert!(rep.sizes.windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(rep.unique_largest, rep.sizes.len() == 1 || (rep.sizes.len() > 1 && rep.sizes[0] > rep.sizes[1]));
        for c in &rep.components {
            prop_assert_eq!(classify(&c.submap.to_map(&q)), MapClass::IrreducibleQuadrangulation);
        }
    }

    #[test]
    fn detach_then_glue_is_identity(n in 6usize..50, seed in any::<u64>(), pick in any::<u64>()) {
        let q = sample(n, seed);
        let rep = irreducible_components(&q);
        if let Some(c) = rep.components.first() {
            let darts = &c.submap.darts;
            let s = Submap { darts: darts.clone(), root: darts[(pick % darts.len() as u64) as usize] };
            let dec = detach(&q, &s).unwrap();
            let faces: usize = dec.fillers.iter().map(|f| f.num_faces()).sum();
            prop_assert_eq!(faces, n + c.size);
            let (q2, s2) = glue(&dec).unwrap();
            prop_assert_eq!(canonical_key(&q2.reroot(s2.root).unwrap()), canonical_key(&q.reroot(s.root).unwrap()));
        }
    }

    #[test]
    fn openings_are_monotone(n in 1usize..20, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let m = sample_quadrangulation_with(n, &mut rng);
        let v = rng.gen_range(0..m.num_vertices());
        let ds = m.vertex_darts(v);
        prop_assume!(ds.len() >= 2);
        let o = open_face(&m, ds[0] >> 1, ds[1] >> 1);
        prop_assume!(o.is_ok());
        let o = o.unwrap();
        prop_assert_eq!((o.num_vertices(), o.num_edges(), o.num_faces()), (n + 3, 2 * n + 2, n + 1));
        let (back, hom) = close_face(&o, o.face_of(o.darts() - 1)).unwrap();
        prop_assert_eq!(back.next_slice(), m.next_slice());
        let (x, x2) = (mm_space_of_map(&m), mm_space_of_map(&o));
        let w = witness_from_graph_hom(&back, &o, &hom).unwrap();
        prop_assert!(w.verify(&x, &x2).is_ok());
        prop_assert!(x.diameter() <= x2.diameter());
    }

    #[test]
    fn prokhorov_is_a_metric_on_small_supports(
        pos in prop::collection::vec(0i64..20, 2..7),
        a in prop::collection::vec(1u32..9, 7),
        b in prop::collection::vec(1u32..9, 7),
        c in prop::collection::vec(1u32..9, 7),
    ) {
        let k = pos.len();
        let m = LinePoints { pos: pos.iter().map(|&p| q_frac(p, 10)).collect() };
        let (mu, nu, rho) = (probability(&a[..k]), probability(&b[..k]), probability(&c[..k]));
        let d = |x: &[Q], y: &[Q]| prokhorov_exact(&m, x, y).unwrap();
        prop_assert_eq!(d(&mu, &mu), q_int(0));
        prop_assert_eq!(d(&mu, &nu), d(&nu, &mu));
        prop_assert!(d(&mu, &rho) <= d(&mu, &nu) + d(&nu, &rho));
        let b = prokhorov(&m, &mu, &nu).unwrap();
        prop_assert!(b.is_exact() && b.lower == d(&mu, &nu));
    }

    #[test]
    fn certified_interval_is_ordered(
        pos in prop::collection::vec(0i64..1000, 16..40),
        w in prop::collection::vec(1u32..50, 40),
    ) {
        let k = pos.len();
        let m = LinePoints { pos: pos.iter().map(|&p| q_frac(p, 1000)).collect() };
        let mu = probability(&w[..k]);
        let unif = vec![q_frac(1, k as i64); k];
        let b = prokhorov(&m, &mu, &unif).unwrap();
        prop_assert!(b.lower <= b.upper);
        prop_assert!(b.lower >= q_int(0) && b.upper <= q_int(2));
    }

    #[test]
    fn hausdorff_is_symmetric(pos in prop::collection::vec(-50i64..50, 2..12), split in any::<u64>()) {
        let m = LinePoints { pos: pos.iter().map(|&p| q_int(p)).collect() };
        let mut rng = rng_from_seed(split);
        let k1: Vec<usize> = (0..pos.len()).filter(|_| rng.gen_bool(0.5)).collect();
        let k2: Vec<usize> = (0..pos.len()).filter(|_| rng.gen_bool(0.5)).collect();
        prop_assume!(!k1.is_empty() && !k2.is_empty());
        prop_assert_eq!(hausdorff(&m, &k1, &k2).unwrap(), hausdorff(&m, &k2, &k1).unwrap());
        prop_assert_eq!(hausdorff(&m, &k1, &k1).unwrap(), q_int(0));
    }

    #[test]
    fn exchangeable_bound_and_covariance_sign(n in 2usize..7, seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let law = ExchangeableMixture::random(n, &mut rng);
        for k in 1..=n {
            prop_assert!(variance_bound_check(&law, k).unwrap().holds);
        }
        for (_, v) in &law.classes {
            prop_assert!(conditional_covariance(v, 0, n - 1).unwrap() <= q_int(0));
        }
    }

    #[test]
    fn constant_vectors_have_zero_covariance(c in -20i64..20, n in 2usize..9) {
        let v = ExchangeableVector::from_ints(&vec![c; n]);
        prop_assert_eq!(conditional_covariance(&v, 0, 1).unwrap(), q_int(0));
    }
}
