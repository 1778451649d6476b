//! Opening a face along a two-edge path, and closing it again.

use crate::map_kernel::{Dart, PlanarMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpenError {
    #[error("edge {0} is out of range")]
    NoSuchEdge(usize),
    #[error("the two edges must be distinct")]
    SameEdge,
    #[error("edge {0} is a loop")]
    Loop(usize),
    #[error("edges {0} and {1} do not share exactly one endpoint")]
    NotAdjacent(usize, usize),
    #[error("face {0} is out of range")]
    NoSuchFace(usize),
    #[error("face {0} cannot be closed: {1}")]
    NotClosable(usize, &'static str),
}

/// Slits `m` along the path formed by edges `e` and `e2` and fills the hole
/// with a new quadrangular face. Existing darts keep their labels, the two
/// new edges take the next two edge ids, and the root is unchanged.
pub fn open_face(m: &PlanarMap, e: usize, e2: usize) -> Result<PlanarMap, OpenError> {
    let ne = m.num_edges();
    for x in [e, e2] {
        if x >= ne {
            return Err(OpenError::NoSuchEdge(x));
        }
        if m.origin(2 * x) == m.head(2 * x) {
            return Err(OpenError::Loop(x));
        }
    }
    if e == e2 {
        return Err(OpenError::SameEdge);
    }
    let ends = |x: usize| [m.origin(2 * x), m.head(2 * x)];
    let (p, q) = (ends(e), ends(e2));
    let shared: Vec<usize> = p.iter().copied().filter(|v| q.contains(v)).collect();
    if shared.len() != 1 {
        return Err(OpenError::NotAdjacent(e, e2));
    }
    let y = shared[0];
    // a: y -> x along e, b: y -> z along e2
    let a = if m.origin(2 * e) == y { 2 * e } else { 2 * e + 1 };
    let b = if m.origin(2 * e2) == y { 2 * e2 } else { 2 * e2 + 1 };

    // darts strictly between a and b counterclockwise move to the new vertex
    let mut arc = Vec::new();
    let mut d = m.next(a);
    while d != b {
        arc.push(d);
        d = m.next(d);
    }

    let n = m.darts();
    let (a2, ax) = (n, n + 1); // y' -> x, x -> y'
    let (b2, bz) = (n + 2, n + 3); // y' -> z, z -> y'
    let mut next: Vec<Dart> = m.next_slice().to_vec();
    next.extend_from_slice(&[0; 4]);

    next[a] = b;
    let mut last = a2;
    for &d in &arc {
        next[last] = d;
        last = d;
    }
    next[last] = b2;
    next[b2] = a2;

    // at x the new dart sits just before x -> y
    let t = a ^ 1;
    let pt = m.prev(t);
    next[pt] = ax;
    next[ax] = t;
    // at z the new dart sits just after z -> y
    let u = b ^ 1;
    let nu = m.next(u);
    next[u] = bz;
    next[bz] = nu;

    Ok(PlanarMap::new(next, m.root()).expect("opening preserves planarity"))
}

/// Collapses a quadrangular face by identifying two opposite corners.
///
/// The merged-away corner is the one whose two face edges carry the largest
/// ids, so that closing the face just created by [`open_face`] restores the
/// original map exactly. Returns the closed map and the vertex map from `m`
/// onto it, which is a surjective graph homomorphism.
pub fn close_face(m: &PlanarMap, f: usize) -> Result<(PlanarMap, Vec<usize>), OpenError> {
    if f >= m.num_faces() {
        return Err(OpenError::NoSuchFace(f));
    }
    let fd = m.face_darts(f);
    if fd.len() != 4 {
        return Err(OpenError::NotClosable(f, "face is not quadrangular"));
    }
    let mut edges: Vec<usize> = fd.iter().map(|&d| d >> 1).collect();
    edges.sort_unstable();
    edges.dedup();
    if edges.len() != 4 {
        return Err(OpenError::NotClosable(f, "face boundary repeats an edge"));
    }
    // choose i so that the corner at origin(fd[i]) is merged away;
    // the face reads c, b, w1, w2 with w2 = fd[i] leaving y'
    let mut best: Option<(usize, usize, usize)> = None;
    for i in 0..4 {
        let w2 = fd[i];
        let w1 = fd[(i + 3) % 4];
        let c = fd[(i + 1) % 4];
        let b = fd[(i + 2) % 4];
        let (yp, y) = (m.origin(w2), m.origin(b));
        let (x, z) = (m.origin(c), m.origin(w1));
        if yp == y || x == z {
            continue;
        }
        let (lo, hi) = ((w1 >> 1).min(w2 >> 1), (w1 >> 1).max(w2 >> 1));
        if best.is_none_or(|(l, h, _)| (lo, hi) > (l, h)) {
            best = Some((lo, hi, i));
        }
    }
    let (_, _, i) = best.ok_or(OpenError::NotClosable(f, "opposite corners coincide"))?;
    let w2 = fd[i];
    let w1 = fd[(i + 3) % 4];
    let c = fd[(i + 1) % 4];
    let b = fd[(i + 2) % 4];
    let a = c ^ 1;
    let yp = m.origin(w2);
    let y = m.origin(b);

    let mut next: Vec<Dart> = m.next_slice().to_vec();
    // splice the rotation of y' (minus w2 and twin(w1)) between a and b
    let mut arc = Vec::new();
    let mut d = m.next(w2);
    while d != (w1 ^ 1) {
        arc.push(d);
        d = m.next(d);
    }
    let mut last = a;
    for &d in &arc {
        next[last] = d;
        last = d;
    }
    next[last] = b;
    // drop twin(w2) at x and w1 at z
    for r in [w2 ^ 1, w1] {
        let p = m.prev(r);
        next[p] = m.next(r);
    }

    let (r1, r2) = (w1 >> 1, w2 >> 1);
    let removed = |e: usize| e == r1 || e == r2;
    let mut new_id = vec![usize::MAX; m.darts()];
    let mut k = 0;
    for e in 0..m.num_edges() {
        if !removed(e) {
            new_id[2 * e] = 2 * k;
            new_id[2 * e + 1] = 2 * k + 1;
            k += 1;
        }
    }
    let mut out = vec![0; 2 * k];
    for d in 0..m.darts() {
        if new_id[d] != usize::MAX {
            out[new_id[d]] = new_id[next[d]];
        }
    }
    // a removed root is replaced by the dart it merges with
    let partner = |d: Dart| -> Dart {
        if d == w2 {
            a
        } else if d == (w2 ^ 1) {
            c
        } else if d == w1 {
            b ^ 1
        } else if d == (w1 ^ 1) {
            b
        } else {
            d
        }
    };
    let closed = PlanarMap::new(out, new_id[partner(m.root())]).map_err(|_| OpenError::NotClosable(f, "result is not planar"))?;

    // vertex map: follow any surviving dart at each old vertex
    let mut hom = vec![usize::MAX; m.num_vertices()];
    for d in 0..m.darts() {
        let v = m.origin(d);
        if hom[v] != usize::MAX {
            continue;
        }
        let p = partner(d);
        hom[v] = closed.origin(new_id[p]);
    }
    debug_assert_eq!(hom[yp], hom[y]);
    Ok((closed, hom))
}
