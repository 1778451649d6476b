//! Rooted planar maps stored as rotation systems on darts.
//!
//! Edge `k` owns darts `2k` and `2k + 1`, so the twin of `d` is `d ^ 1`.
//! `next(d)` is the next dart counterclockwise around the origin of `d`.
//! Faces are the orbits of `d -> next(twin(d))`; the face of `d` is the face
//! on its right, and the root face is the face right of the root dart.

pub mod canonical;
pub mod classify;
mod cycles;
mod serial;

pub use canonical::{canonical_form, canonical_form_with_labels, canonical_key, canonical_order, CanonicalOrder};
pub use classify::{classify, four_cycles, is_irreducible, is_irreducible_hexagon_dissection, MapClass};
pub use cycles::{cycle_sides, is_rightmost_cycle, CycleSides};
pub use serial::{deserialize, serialize};

use std::collections::VecDeque;
use thiserror::Error;

pub type Dart = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("map must have a positive even number of darts, got {0}")]
    DartCount(usize),
    #[error("sequence length {got} does not match dart count {expected}")]
    Length { expected: usize, got: usize },
    #[error("dart {0} is out of range")]
    OutOfRange(usize),
    #[error("twin has a fixed point at dart {0}")]
    TwinFixedPoint(usize),
    #[error("twin is not an involution at dart {0}")]
    TwinNotInvolution(usize),
    #[error("twin must pair darts 2k and 2k+1 (dart {0})")]
    TwinLayout(usize),
    #[error("next is not a permutation (dart {0} has two preimages)")]
    NextNotPermutation(usize),
    #[error("map is disconnected")]
    Disconnected,
    #[error("Euler characteristic is {0}, expected 2")]
    Euler(i64),
    #[error("map is not bipartite")]
    NotBipartite,
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("cycle is not simple: {0}")]
    NotSimpleCycle(String),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
}

/// A validated rooted planar map. Immutable once built.
#[derive(Clone, Debug)]
pub struct PlanarMap {
    next: Vec<Dart>,
    prev: Vec<Dart>,
    root: Dart,
    vertex: Vec<usize>,
    face: Vec<usize>,
    vertex_rep: Vec<Dart>,
    face_rep: Vec<Dart>,
}

impl PartialEq for PlanarMap {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root && self.next == other.next
    }
}
impl Eq for PlanarMap {}

/// Validates raw permutations and returns the map.
pub fn build_map(darts: usize, twin: &[Dart], next: &[Dart], root: Dart) -> Result<PlanarMap, MapError> {
    if twin.len() != darts {
        return Err(MapError::Length { expected: darts, got: twin.len() });
    }
    for (d, &t) in twin.iter().enumerate() {
        if t >= darts {
            return Err(MapError::OutOfRange(t));
        }
        if t == d {
            return Err(MapError::TwinFixedPoint(d));
        }
        if twin[t] != d {
            return Err(MapError::TwinNotInvolution(d));
        }
        if t != d ^ 1 {
            return Err(MapError::TwinLayout(d));
        }
    }
    if next.len() != darts {
        return Err(MapError::Length { expected: darts, got: next.len() });
    }
    PlanarMap::new(next.to_vec(), root)
}

fn orbits(n: usize, step: impl Fn(Dart) -> Dart) -> (Vec<usize>, Vec<Dart>) {
    let mut label = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(s);
        let mut d = s;
        loop {
            label[d] = id;
            d = step(d);
            if d == s {
                break;
            }
        }
    }
    (label, reps)
}

impl PlanarMap {
    /// Builds a map from its rotation; twins are implicit (`d ^ 1`).
    pub fn new(next: Vec<Dart>, root: Dart) -> Result<Self, MapError> {
        let n = next.len();
        if n == 0 || n % 2 == 1 {
            return Err(MapError::DartCount(n));
        }
        if root >= n {
            return Err(MapError::OutOfRange(root));
        }
        let mut prev = vec![usize::MAX; n];
        for (d, &x) in next.iter().enumerate() {
            if x >= n {
                return Err(MapError::OutOfRange(x));
            }
            if prev[x] != usize::MAX {
                return Err(MapError::NextNotPermutation(x));
            }
            prev[x] = d;
        }
        let (vertex, vertex_rep) = orbits(n, |d| next[d]);
        let (face, face_rep) = orbits(n, |d| next[d ^ 1]);

        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for x in [d ^ 1, next[d]] {
                if !seen[x] {
                    seen[x] = true;
                    count += 1;
                    stack.push(x);
                }
            }
        }
        if count != n {
            return Err(MapError::Disconnected);
        }
        let chi = vertex_rep.len() as i64 - (n / 2) as i64 + face_rep.len() as i64;
        if chi != 2 {
            return Err(MapError::Euler(chi));
        }
        Ok(PlanarMap { next, prev, root, vertex, face, vertex_rep, face_rep })
    }

    pub fn darts(&self) -> usize {
        self.next.len()
    }
    pub fn num_edges(&self) -> usize {
        self.next.len() / 2
    }
    pub fn num_vertices(&self) -> usize {
        self.vertex_rep.len()
    }
    pub fn num_faces(&self) -> usize {
        self.face_rep.len()
    }
    pub fn root(&self) -> Dart {
        self.root
    }
    #[inline]
    pub fn twin(&self, d: Dart) -> Dart {
        d ^ 1
    }
    #[inline]
    pub fn next(&self, d: Dart) -> Dart {
        self.next[d]
    }
    #[inline]
    pub fn prev(&self, d: Dart) -> Dart {
        self.prev[d]
    }
    /// Next dart along the face on the right of `d`.
    #[inline]
    pub fn phi(&self, d: Dart) -> Dart {
        self.next[d ^ 1]
    }
    /// Previous dart along the face on the right of `d`.
    #[inline]
    pub fn phi_inv(&self, d: Dart) -> Dart {
        self.prev[d] ^ 1
    }
    #[inline]
    pub fn origin(&self, d: Dart) -> usize {
        self.vertex[d]
    }
    #[inline]
    pub fn head(&self, d: Dart) -> usize {
        self.vertex[d ^ 1]
    }
    #[inline]
    pub fn face_of(&self, d: Dart) -> usize {
        self.face[d]
    }
    #[inline]
    pub fn edge_of(&self, d: Dart) -> usize {
        d >> 1
    }
    pub fn root_face(&self) -> usize {
        self.face[self.root]
    }
    pub fn next_slice(&self) -> &[Dart] {
        &self.next
    }
    pub fn twin_vec(&self) -> Vec<Dart> {
        (0..self.darts()).map(|d| d ^ 1).collect()
    }
    /// Some dart leaving vertex `v`.
    pub fn vertex_dart(&self, v: usize) -> Dart {
        self.vertex_rep[v]
    }
    /// Some dart with face `f` on its right.
    pub fn face_dart(&self, f: usize) -> Dart {
        self.face_rep[f]
    }

    /// Darts leaving the origin of `d`, counterclockwise starting at `d`.
    pub fn rotation_from(&self, d: Dart) -> Vec<Dart> {
        let mut out = vec![d];
        let mut x = self.next[d];
        while x != d {
            out.push(x);
            x = self.next[x];
        }
        out
    }
    pub fn vertex_darts(&self, v: usize) -> Vec<Dart> {
        self.rotation_from(self.vertex_rep[v])
    }
    /// Darts with the face of `d` on their right, in boundary order from `d`.
    pub fn face_cycle_from(&self, d: Dart) -> Vec<Dart> {
        let mut out = vec![d];
        let mut x = self.phi(d);
        while x != d {
            out.push(x);
            x = self.phi(x);
        }
        out
    }
    pub fn face_darts(&self, f: usize) -> Vec<Dart> {
        self.face_cycle_from(self.face_rep[f])
    }
    pub fn degree(&self, v: usize) -> usize {
        self.vertex_darts(v).len()
    }

    /// Same permutations, new root.
    pub fn reroot(&self, d: Dart) -> Result<PlanarMap, MapError> {
        if d >= self.darts() {
            return Err(MapError::OutOfRange(d));
        }
        let mut m = self.clone();
        m.root = d;
        Ok(m)
    }

    pub fn is_quadrangulation(&self) -> bool {
        self.face_rep.iter().all(|&r| self.face_cycle_from(r).len() == 4)
    }

    pub fn has_loop(&self) -> bool {
        (0..self.darts()).step_by(2).any(|d| self.origin(d) == self.head(d))
    }

    /// No loops and no two edges with the same endpoints.
    pub fn is_simple(&self) -> bool {
        if self.has_loop() {
            return false;
        }
        let mut mark = vec![usize::MAX; self.num_vertices()];
        for v in 0..self.num_vertices() {
            for d in self.vertex_darts(v) {
                let h = self.head(d);
                if mark[h] == v {
                    return false;
                }
                mark[h] = v;
            }
        }
        true
    }

    /// Relabels darts so that the given darts (closed under twin, listed
    /// edge by edge) become dense; returns the new map and the old-to-new table.
    pub fn induced(&self, darts: &[Dart], root: Dart) -> Result<(PlanarMap, Vec<usize>), MapError> {
        let mut keep = vec![false; self.darts()];
        for &d in darts {
            keep[d] = true;
        }
        let mut new_id = vec![usize::MAX; self.darts()];
        let mut k = 0;
        for e in 0..self.num_edges() {
            let (a, b) = (2 * e, 2 * e + 1);
            if keep[a] != keep[b] {
                return Err(MapError::TwinNotInvolution(if keep[a] { a } else { b }));
            }
            if keep[a] {
                new_id[a] = 2 * k;
                new_id[b] = 2 * k + 1;
                k += 1;
            }
        }
        if root >= self.darts() || !keep[root] {
            return Err(MapError::OutOfRange(root));
        }
        let mut next = vec![0; 2 * k];
        for d in 0..self.darts() {
            if !keep[d] {
                continue;
            }
            let mut x = self.next[d];
            while !keep[x] {
                x = self.next[x];
            }
            next[new_id[d]] = new_id[x];
        }
        let m = PlanarMap::new(next, new_id[root])?;
        Ok((m, new_id))
    }

    /// Undirected simple adjacency (neighbor lists, duplicates removed).
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for v in 0..self.num_vertices() {
            for d in self.vertex_darts(v) {
                adj[v].push(self.head(d));
            }
            adj[v].sort_unstable();
            adj[v].dedup();
        }
        adj
    }
}

/// Builds a map from face cycles over an arbitrary id space.
///
/// Each cycle lists ids in face order (each dart followed by the next dart of
/// the face on its right), `twin` pairs the ids, and every id in a cycle must
/// have its twin in some cycle. Returns the map and the new-to-old table.
pub fn from_face_cycles(
    faces: &[Vec<usize>],
    twin: impl Fn(usize) -> usize,
    root: usize,
    id_space: usize,
) -> Result<(PlanarMap, Vec<usize>), MapError> {
    let mut phi = vec![usize::MAX; id_space];
    let mut order = Vec::new();
    for f in faces {
        for (i, &x) in f.iter().enumerate() {
            if x >= id_space {
                return Err(MapError::OutOfRange(x));
            }
            if phi[x] != usize::MAX {
                return Err(MapError::NextNotPermutation(x));
            }
            phi[x] = f[(i + 1) % f.len()];
            order.push(x);
        }
    }
    let mut new_id = vec![usize::MAX; id_space];
    let mut old = Vec::with_capacity(order.len());
    for &x in &order {
        if new_id[x] != usize::MAX {
            continue;
        }
        let t = twin(x);
        if t >= id_space || phi[t] == usize::MAX || t == x || twin(t) != x {
            return Err(MapError::TwinNotInvolution(x));
        }
        new_id[x] = old.len();
        old.push(x);
        new_id[t] = old.len();
        old.push(t);
    }
    if root >= id_space || new_id[root] == usize::MAX {
        return Err(MapError::OutOfRange(root));
    }
    let next: Vec<Dart> = old.iter().map(|&x| new_id[phi[twin(x)]]).collect();
    Ok((PlanarMap::new(next, new_id[root])?, old))
}

/// `(face-id, degree)` for every face.
pub fn face_degrees(m: &PlanarMap) -> Vec<(usize, usize)> {
    (0..m.num_faces()).map(|f| (f, m.face_darts(f).len())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    White,
}

/// Proper two-colouring with the root dart oriented black to white.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicoloring {
    pub colors: Vec<Color>,
}

impl Bicoloring {
    pub fn is_black(&self, v: usize) -> bool {
        self.colors[v] == Color::Black
    }
}

pub fn canonical_bicoloring(m: &PlanarMap) -> Result<Bicoloring, MapError> {
    let mut colors: Vec<Option<Color>> = vec![None; m.num_vertices()];
    let s = m.origin(m.root());
    colors[s] = Some(Color::Black);
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        let c = colors[v].unwrap();
        let other = if c == Color::Black { Color::White } else { Color::Black };
        for d in m.vertex_darts(v) {
            let h = m.head(d);
            match colors[h] {
                None => {
                    colors[h] = Some(other);
                    queue.push_back(h);
                }
                Some(x) if x == c => return Err(MapError::NotBipartite),
                _ => {}
            }
        }
    }
    Ok(Bicoloring { colors: colors.into_iter().map(|c| c.unwrap()).collect() })
}

/// Graph distances from `source` in the underlying multigraph.
pub fn bfs_distances(m: &PlanarMap, source: usize) -> Result<Vec<u32>, MapError> {
    if source >= m.num_vertices() {
        return Err(MapError::NoSuchVertex(source));
    }
    let mut dist = vec![u32::MAX; m.num_vertices()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let start = m.vertex_dart(v);
        let mut d = start;
        loop {
            let h = m.head(d);
            if dist[h] == u32::MAX {
                dist[h] = dist[v] + 1;
                queue.push_back(h);
            }
            d = m.next(d);
            if d == start {
                break;
            }
        }
    }
    Ok(dist)
}

/// A few small maps used throughout the tests and examples.
pub mod fixtures {
    use super::PlanarMap;

    /// Two edges sharing a middle vertex: the one-face quadrangulation.
    pub fn path2() -> PlanarMap {
        PlanarMap::new(vec![2, 1, 0, 3], 0).unwrap()
    }

    /// The 4-cycle `v0 v1 v2 v3`, rooted `v0 -> v1`.
    pub fn four_cycle() -> PlanarMap {
        // edge i joins v_i -> v_{i+1}: dart 2i leaves v_i, dart 2i+1 leaves v_{i+1}.
        let mut next = vec![0; 8];
        for i in 0..4 {
            let out = 2 * i;
            let back = 2 * ((i + 3) % 4) + 1;
            next[out] = back;
            next[back] = out;
        }
        PlanarMap::new(next, 0).unwrap()
    }

    /// Builds a map from faces given as vertex cycles (each face listed with
    /// the face on the right, i.e. clockwise). Every undirected edge must be
    /// used once in each direction. The root is the first oriented edge of
    /// the first face.
    pub fn from_faces(faces: &[Vec<usize>]) -> PlanarMap {
        from_faces_labeled(faces).0
    }

    /// As [`from_faces`], also returning the vertex id of each input label.
    pub fn from_faces_labeled(faces: &[Vec<usize>]) -> (PlanarMap, Vec<usize>) {
        use std::collections::HashMap;
        let mut dart_of: HashMap<(usize, usize), usize> = HashMap::new();
        let mut count = 0;
        for f in faces {
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                if dart_of.contains_key(&(a, b)) {
                    continue;
                }
                let d = 2 * count;
                count += 1;
                dart_of.insert((a, b), d);
                dart_of.insert((b, a), d + 1);
            }
        }
        // phi(a->b) = b->c within a face; next(twin(d)) = phi(d)
        let mut next = vec![usize::MAX; 2 * count];
        for f in faces {
            for i in 0..f.len() {
                let (a, b, c) = (f[i], f[(i + 1) % f.len()], f[(i + 2) % f.len()]);
                let d = dart_of[&(a, b)];
                next[d ^ 1] = dart_of[&(b, c)];
            }
        }
        let root = dart_of[&(faces[0][0], faces[0][1])];
        let m = PlanarMap::new(next, root).expect("faces describe a planar map");
        let top = faces.iter().flatten().copied().max().unwrap_or(0);
        let mut id = vec![usize::MAX; top + 1];
        for (&(a, _), &d) in &dart_of {
            id[a] = m.origin(d);
        }
        (m, id)
    }

    /// The cube, rooted on a face boundary.
    pub fn cube() -> PlanarMap {
        cube_labeled().0
    }

    /// The cube with vertex labels 0..3 (bottom square) and 4..7 (top square).
    pub fn cube_labeled() -> (PlanarMap, Vec<usize>) {
        from_faces_labeled(&[
            vec![0, 1, 2, 3],
            vec![4, 7, 6, 5],
            vec![0, 4, 5, 1],
            vec![1, 5, 6, 2],
            vec![2, 6, 7, 3],
            vec![3, 7, 4, 0],
        ])
    }
}
