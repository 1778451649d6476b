use super::*;
use crate::enumeration::{for_each_quadrangulation, sampling::rng_from_seed, sampling::sample_quadrangulation_with};
use crate::growth::{close_face, open_face};
use crate::map_kernel::fixtures::*;
use rand::Rng;

fn line(points: &[i64]) -> MmSpace {
    let n = points.len();
    let dist = (0..n).map(|i| (0..n).map(|j| q_int((points[i] - points[j]).abs())).collect()).collect();
    MmSpace::new(dist, vec![q_int(1); n]).unwrap()
}

fn random_masses<R: Rng>(n: usize, rng: &mut R) -> Vec<Q> {
    (0..n).map(|_| q_frac(rng.gen_range(0..5), rng.gen_range(1..4))).collect()
}

/// Small space: a random quadrangulation's vertices with random masses.
fn random_space<R: Rng>(rng: &mut R, faces: usize) -> MmSpace {
    let q = sample_quadrangulation_with(faces, rng);
    let s = mm_space_of_map(&q);
    let mass = random_masses(s.len(), rng);
    MmSpace::new((0..s.len()).map(|i| (0..s.len()).map(|j| s.d(i, j).clone()).collect()).collect(), mass).unwrap()
}

#[test]
fn four_cycle_space() {
    let s = mm_space_of_map(&four_cycle());
    assert_eq!(s.len(), 4);
    assert_eq!(s.total_mass(), q_int(4));
    assert_eq!(s.diameter(), q_int(2));
    let q = cube();
    assert_eq!(mm_space_of_map(&q).total_mass(), q_int(q.num_faces() as i64 + 2));
}

#[test]
fn rejects_non_metrics() {
    let bad = vec![vec![q_int(0), q_int(1), q_int(5)], vec![q_int(1), q_int(0), q_int(1)], vec![q_int(5), q_int(1), q_int(0)]];
    assert!(matches!(MmSpace::new(bad, vec![q_int(1); 3]), Err(GhpError::NotMetric(_))));
    let asym = vec![vec![q_int(0), q_int(1)], vec![q_int(2), q_int(0)]];
    assert!(MmSpace::new(asym, vec![q_int(1); 2]).is_err());
    let s = line(&[0, 1]);
    assert!(MmSpace::new(vec![vec![q_int(0), q_int(1)], vec![q_int(1), q_int(0)]], vec![q_int(-1), q_int(1)]).is_err());
    assert_eq!(rescale(&s, &q_int(0), &q_int(1)).unwrap_err(), GhpError::NonPositiveScalar);
}

#[test]
fn csv_round_trip() {
    let s = rescale(&mm_space_of_map(&cube()), &q_frac(3, 2), &q_frac(1, 7)).unwrap();
    assert_eq!(MmSpace::from_csv(&s.to_csv()).unwrap(), s);
    assert!(MmSpace::from_csv("2\n1\n").is_err());
}

#[test]
fn rescale_composes() {
    let s = mm_space_of_map(&cube());
    assert_eq!(rescale(&s, &q_int(1), &q_int(1)).unwrap(), s);
    let once = rescale(&rescale(&s, &q_int(2), &q_frac(1, 3)).unwrap(), &q_frac(5, 2), &q_int(3)).unwrap();
    assert_eq!(once, rescale(&s, &q_int(5), &q_int(1)).unwrap());
}

fn hausdorff_scan(m: &MmSpace, a: &[usize], b: &[usize]) -> Q {
    let mut cands: Vec<Q> = (0..m.len()).flat_map(|i| (0..m.len()).map(move |j| (i, j))).map(|(i, j)| m.d(i, j).clone()).collect();
    cands.sort();
    let within = |s: &[usize], t: &[usize], e: &Q| s.iter().all(|&x| t.iter().any(|&y| m.d(x, y) <= e));
    cands.into_iter().find(|e| within(a, b, e) && within(b, a, e)).unwrap()
}

#[test]
fn hausdorff_matches_scan() {
    let p = line(&[0, 1, 2]);
    assert_eq!(hausdorff(&p, &[0], &[0, 2]).unwrap(), q_int(2));
    assert_eq!(hausdorff(&p, &[1], &[1]).unwrap(), q_int(0));
    assert_eq!(hausdorff(&p, &[], &[1]).unwrap_err(), GhpError::Empty);
    let mut rng = rng_from_seed(3);
    for _ in 0..200 {
        let s = { let k = rng.gen_range(1..6); random_space(&mut rng, k) };
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<usize> {
            let v: Vec<usize> = (0..s.len()).filter(|_| rng.gen_bool(0.4)).collect();
            if v.is_empty() {
                vec![0]
            } else {
                v
            }
        };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        assert_eq!(hausdorff(&s, &a, &b).unwrap(), hausdorff_scan(&s, &a, &b));
    }
}

/// Independent oracle: smallest candidate (a distance or a difference of two
/// subset masses) at which the two-sided condition holds for every subset.
fn prokhorov_oracle(m: &MmSpace, mu: &[Q], nu: &[Q]) -> Q {
    let n = m.len();
    let sum = |v: &[Q], s: usize| -> Q { (0..n).filter(|&i| s >> i & 1 == 1).map(|i| v[i].clone()).sum() };
    let mut cands: Vec<Q> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            cands.push(m.d(i, j).clone());
        }
    }
    for a in 0..1usize << n {
        for b in 0..1usize << n {
            for (p, r) in [(mu, nu), (nu, mu)] {
                let v = sum(p, a) - sum(r, b);
                if v >= q_int(0) {
                    cands.push(v);
                }
            }
        }
    }
    cands.sort();
    cands.dedup();
    let holds = |e: &Q| {
        (0..1usize << n).all(|a| {
            let nb = (0..n).filter(|&y| (0..n).any(|x| a >> x & 1 == 1 && m.d(x, y) <= e)).fold(0, |acc, y| acc | 1 << y);
            sum(mu, a) <= sum(nu, nb) + e && sum(nu, a) <= sum(mu, nb) + e
        })
    };
    cands.into_iter().find(|e| holds(e)).unwrap()
}

#[test]
fn prokhorov_small_cases() {
    let p = line(&[0, 1]);
    assert_eq!(prokhorov_exact(&p, &[q_int(1), q_int(0)], &[q_int(0), q_int(1)]).unwrap(), q_int(1));
    let one = line(&[0]);
    assert_eq!(prokhorov_exact(&one, &[q_int(2)], &[q_int(1)]).unwrap(), q_int(1));
    let s = mm_space_of_map(&cube());
    assert_eq!(prokhorov_exact(&s, s.mass(), s.mass()).unwrap(), q_int(0));
}

#[test]
fn prokhorov_matches_oracle() {
    let mut rng = rng_from_seed(5);
    for _ in 0..60 {
        let s = { let k = rng.gen_range(1..4); random_space(&mut rng, k) };
        let mu = random_masses(s.len(), &mut rng);
        let nu = random_masses(s.len(), &mut rng);
        assert_eq!(prokhorov_exact(&s, &mu, &nu).unwrap(), prokhorov_oracle(&s, &mu, &nu));
    }
}

#[test]
fn coarse_bound_dominates_exact() {
    let mut rng = rng_from_seed(6);
    for _ in 0..200 {
        let s = { let k = rng.gen_range(1..9); random_space(&mut rng, k) };
        let mu = random_masses(s.len(), &mut rng);
        let nu = random_masses(s.len(), &mut rng);
        let exact = prokhorov_exact(&s, &mu, &nu).unwrap();
        let eps = q_int(rng.gen_range(1..4));
        let cells: Vec<Vec<usize>> = if eps == q_int(1) {
            (0..s.len()).map(|i| vec![i]).collect()
        } else {
            // greedy balls of radius < eps / 2
            let mut taken = vec![false; s.len()];
            let mut cells = Vec::new();
            for c in 0..s.len() {
                if !taken[c] {
                    let cell: Vec<usize> = (0..s.len()).filter(|&y| !taken[y] && s.d(c, y) * q_int(2) < eps).collect();
                    cell.iter().for_each(|&y| taken[y] = true);
                    cells.push(cell);
                }
            }
            cells
        };
        let b = coarse_grained_bound(&s, &cells, &eps, &mu, &nu).unwrap();
        assert!(b >= exact);
        assert_eq!(coarse_grained_bound(&s, &cells, &eps, &mu, &mu).unwrap(), eps);
    }
    let p = line(&[0, 1, 2]);
    let m = vec![q_int(1); 3];
    assert!(coarse_grained_bound(&p, &[vec![0, 1, 2]], &q_int(2), &m, &m).is_err());
    assert!(coarse_grained_bound(&p, &[vec![0], vec![1]], &q_int(1), &m, &m).is_err());
}

#[test]
fn large_prokhorov_interval_is_consistent() {
    let pts = LinePoints { pos: (0..40).map(|i| q_frac(i, 40)).collect() };
    let mut rng = rng_from_seed(8);
    let w: Vec<i64> = (0..40).map(|_| rng.gen_range(1..10)).collect();
    let tot: i64 = w.iter().sum();
    let mu: Vec<Q> = w.iter().map(|&x| q_frac(x, tot)).collect();
    let nu = vec![q_frac(1, 40); 40];
    let b = prokhorov(&pts, &mu, &nu).unwrap();
    assert!(!b.is_exact() || b.lower == b.upper);
    assert!(b.lower <= b.upper);
    assert!(b.upper <= q_int(2));
    // a shift of the first 15 points is computed exactly and lies in the interval of its restriction
    let small = LinePoints { pos: pts.pos[..15].to_vec() };
    let e = prokhorov_exact(&small, &mu[..15], &nu[..15]).unwrap();
    let iv = prokhorov(&small, &mu[..15], &nu[..15]).unwrap();
    assert!(iv.is_exact() && iv.lower == e);
}

#[test]
fn distortion_and_ghp_bound() {
    let s = mm_space_of_map(&cube());
    let diag = Correspondence::diagonal(s.len());
    assert_eq!(distortion(&s, &s, &diag).unwrap(), q_int(0));
    let nu = CouplingMeasure::diagonal_lift(s.mass());
    assert_eq!(ghp_upper_bound(&s, &s, &diag, &nu).unwrap(), q_int(0));
    // all pairs: max |d - d'| over every combination
    let p = line(&[0, 1, 3]);
    let all = Correspondence { pairs: (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).collect() };
    assert_eq!(distortion(&p, &p, &all).unwrap(), q_int(3));
    let bad = Correspondence { pairs: vec![(0, 0)] };
    assert!(distortion(&p, &p, &bad).is_err());
    // rescaling bound with diagonal data
    for (a, b) in [(q_frac(11, 10), q_frac(9, 10)), (q_frac(1, 2), q_int(2)), (q_int(1), q_frac(5, 4))] {
        let t = rescale(&s, &a, &b).unwrap();
        let nu = CouplingMeasure::diagonal_lift(t.mass());
        let bound = ghp_upper_bound(&t, &s, &diag, &nu).unwrap();
        let e = (&a - q_int(1)).abs() * s.diameter();
        let f = (&b - q_int(1)).abs() * s.total_mass();
        let eps_n = q_int(2) * e.max(f);
        assert!(bound <= q_int(3) * eps_n);
        assert!(bound >= (t.total_mass() - s.total_mass()).abs());
    }
}

#[test]
fn path_below_four_cycle() {
    let (path, cyc) = (mm_space_of_map(&path2()), mm_space_of_map(&four_cycle()));
    let w = order_leq(&path, &cyc, &OrderBudget::default()).unwrap().unwrap();
    w.verify(&path, &cyc).unwrap();
    assert!(order_leq(&cyc, &path, &OrderBudget::default()).unwrap().is_none());
    // the face-closing fold
    let q = four_cycle();
    let (back, hom) = close_face(&q, 0).unwrap();
    assert_eq!(back.num_vertices(), 3);
    witness_from_graph_hom(&back, &q, &hom).unwrap();
    assert!(witness_from_graph_hom(&back, &q, &[0, 0, 0, 0]).is_err());
}

#[test]
fn reflexive_and_transitive() {
    let mut rng = rng_from_seed(9);
    let mut m = sample_quadrangulation_with(3, &mut rng);
    let x0 = mm_space_of_map(&m);
    let id = order_leq(&x0, &x0, &OrderBudget::default()).unwrap().unwrap();
    id.verify(&x0, &x0).unwrap();
    let mut chain = vec![(m.clone(), None::<OrderWitness>)];
    for _ in 0..3 {
        let e = rng.gen_range(0..m.num_edges());
        let v = m.origin(2 * e);
        let others: Vec<usize> = m.vertex_darts(v).iter().map(|d| d >> 1).filter(|&x| x != e).collect();
        let Some(&e2) = others.first() else { continue };
        let Ok(o) = open_face(&m, e, e2) else { continue };
        let (_, hom) = close_face(&o, o.face_of(o.darts() - 1)).unwrap();
        let w = witness_from_graph_hom(&m, &o, &hom).unwrap();
        chain.push((o.clone(), Some(w)));
        m = o;
    }
    // compose all witnesses back to the start
    let mut acc: Option<OrderWitness> = None;
    for (_, w) in chain.iter().skip(1) {
        let w = w.clone().unwrap();
        acc = Some(match acc {
            None => w,
            Some(a) => a.compose(&w),
        });
    }
    if let Some(a) = acc {
        a.verify(&x0, &mm_space_of_map(&chain.last().unwrap().0)).unwrap();
    }
}

#[test]
fn singleton_contraction_implies_subset_contraction() {
    let mut rng = rng_from_seed(10);
    for _ in 0..40 {
        let q = sample_quadrangulation_with(rng.gen_range(1..4), &mut rng);
        let x = mm_space_of_map(&q);
        let o = {
            let e = rng.gen_range(0..q.num_edges());
            let v = q.origin(2 * e);
            let Some(e2) = q.vertex_darts(v).iter().map(|d| d >> 1).find(|&x| x != e) else { continue };
            match open_face(&q, e, e2) {
                Ok(o) => o,
                Err(_) => continue,
            }
        };
        let x2 = mm_space_of_map(&o);
        let w = order_leq(&x, &x2, &OrderBudget::default()).unwrap().unwrap();
        for a in 0..1usize << x.len() {
            let lhs: Q = (0..x.len()).filter(|&i| a >> i & 1 == 1).map(|i| x.mass()[i].clone()).sum();
            let rhs: Q = (0..x2.len()).filter(|&j| a >> w.map[j] & 1 == 1).map(|j| x2.mass()[j].clone()).sum();
            assert!(lhs <= rhs);
        }
        assert!(x.diameter() <= x2.diameter());
        assert!(x.total_mass() <= x2.total_mass());
    }
}

#[test]
fn antisymmetry_on_tiny_maps() {
    let mut spaces = Vec::new();
    for n in 1..=3 {
        for_each_quadrangulation(n, |q| spaces.push(mm_space_of_map(&q)));
    }
    let b = OrderBudget::default();
    for x in &spaces {
        for y in &spaces {
            let fwd = order_leq(x, y, &b).unwrap();
            if fwd.is_some() && order_leq(y, x, &b).unwrap().is_some() {
                assert!(find_isometry(x, y).is_some());
            }
        }
    }
}

#[test]
fn budget_is_reported() {
    let big = mm_space_of_map(&sample_quadrangulation_with(12, &mut rng_from_seed(1)));
    assert!(matches!(order_leq(&big, &big, &OrderBudget::default()), Err(GhpError::Budget { .. })));
    let tight = OrderBudget { max_nodes: 3, ..OrderBudget::default() };
    let c = mm_space_of_map(&cube());
    assert!(matches!(order_leq(&c, &c, &tight), Err(GhpError::Budget { .. })));
}
