use super::{Dart, PlanarMap};
use std::collections::VecDeque;

/// Breadth-first exploration order of a rooted map.
///
/// Vertices are swept in queue order; each sweep lists the darts of the
/// vertex counterclockwise from the dart through which it was reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalOrder {
    pub darts: Vec<Dart>,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub faces: Vec<usize>,
    /// Position of each dart in `darts`.
    pub dart_rank: Vec<usize>,
}

pub fn canonical_order(m: &PlanarMap) -> CanonicalOrder {
    let n = m.darts();
    let mut seen_v = vec![false; m.num_vertices()];
    let mut darts = Vec::with_capacity(n);
    let mut vertices = Vec::with_capacity(m.num_vertices());
    let mut queue = VecDeque::new();
    queue.push_back(m.root());
    seen_v[m.origin(m.root())] = true;
    while let Some(a) = queue.pop_front() {
        vertices.push(m.origin(a));
        let mut x = a;
        loop {
            darts.push(x);
            let t = x ^ 1;
            let h = m.origin(t);
            if !seen_v[h] {
                seen_v[h] = true;
                queue.push_back(t);
            }
            x = m.next(x);
            if x == a {
                break;
            }
        }
    }
    let mut dart_rank = vec![0; n];
    for (i, &d) in darts.iter().enumerate() {
        dart_rank[d] = i;
    }
    let mut seen_e = vec![false; m.num_edges()];
    let mut seen_f = vec![false; m.num_faces()];
    let mut edges = Vec::with_capacity(m.num_edges());
    let mut faces = Vec::with_capacity(m.num_faces());
    for &d in &darts {
        if !seen_e[d >> 1] {
            seen_e[d >> 1] = true;
            edges.push(d >> 1);
        }
        let f = m.face_of(d);
        if !seen_f[f] {
            seen_f[f] = true;
            faces.push(f);
        }
    }
    CanonicalOrder { darts, vertices, edges, faces, dart_rank }
}

/// Relabels darts by the canonical order: the `k`-th edge to appear gets darts
/// `2k, 2k + 1`, the earlier-seen dart taking the even label. Two rooted maps
/// are isomorphic iff their canonical forms are equal.
pub fn canonical_form(m: &PlanarMap) -> PlanarMap {
    canonical_form_with_labels(m).0
}

/// Canonical form together with the old-to-new dart table.
pub fn canonical_form_with_labels(m: &PlanarMap) -> (PlanarMap, Vec<usize>) {
    let order = canonical_order(m);
    let n = m.darts();
    let mut new_id = vec![usize::MAX; n];
    let mut k = 0;
    for &d in &order.darts {
        if new_id[d] == usize::MAX {
            new_id[d] = 2 * k;
            new_id[d ^ 1] = 2 * k + 1;
            k += 1;
        }
    }
    let mut next = vec![0; n];
    for d in 0..n {
        next[new_id[d]] = new_id[m.next(d)];
    }
    let cm = PlanarMap::new(next, 0).expect("relabeling preserves validity");
    (cm, new_id)
}

/// Compact canonical key: the rotation of the canonical form.
pub fn canonical_key(m: &PlanarMap) -> Vec<u32> {
    canonical_form(m).next_slice().iter().map(|&x| x as u32).collect()
}
