//! Occurrences of a hexagon-bounded pattern, and the fill/remove pair.

use crate::enumeration::hexagon_class_by_growth;
use crate::enumeration::sampling::rng_from_seed;
use crate::map_kernel::{
    canonical_form, canonical_key, deserialize, from_face_cycles, is_irreducible_hexagon_dissection, serialize, Dart,
    MapError, PlanarMap,
};
use rand::Rng;
use sha2::{Digest, Sha256};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern root face is not a simple cycle")]
    RootFaceNotSimple,
    #[error("no occurrence of the pattern at dart {0}")]
    NotAnOccurrence(Dart),
    #[error("input is not an irreducible quadrangulation of the hexagon")]
    NotInClass,
    #[error("pattern boundary has length {pattern}, hole has length {hole}")]
    BoundaryMismatch { pattern: usize, hole: usize },
    #[error("no candidate passes the pattern filter")]
    NoCandidate,
    #[error("fixture checksum mismatch: {0}")]
    Checksum(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A map whose root face has a simple boundary, with lookup tables for
/// anchored matching.
#[derive(Clone, Debug)]
pub struct Pattern {
    map: PlanarMap,
    /// Darts of the root face, starting at the root.
    boundary: Vec<Dart>,
    /// Whether the corner between `d` and `next(d)` lies inside the pattern.
    inner_corner: Vec<bool>,
    /// Whether the edge of `d` lies on the root face.
    boundary_edge: Vec<bool>,
}

impl Pattern {
    pub fn new(map: PlanarMap) -> Result<Self, PatternError> {
        let boundary = map.face_cycle_from(map.root());
        let mut vs: Vec<usize> = boundary.iter().map(|&d| map.origin(d)).collect();
        vs.sort_unstable();
        vs.dedup();
        if vs.len() != boundary.len() {
            return Err(PatternError::RootFaceNotSimple);
        }
        let outer = map.root_face();
        let inner_corner = (0..map.darts()).map(|d| map.face_of(map.next(d)) != outer).collect();
        let mut boundary_edge = vec![false; map.darts()];
        for &d in &boundary {
            boundary_edge[d] = true;
            boundary_edge[d ^ 1] = true;
        }
        Ok(Pattern { map, boundary, inner_corner, boundary_edge })
    }

    pub fn map(&self) -> &PlanarMap {
        &self.map
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.len()
    }

    /// Quadrangular faces strictly inside the boundary.
    pub fn inner_faces(&self) -> usize {
        self.map.num_faces() - 1
    }
}

/// Reusable scratch space for anchored matching in one host map.
struct Matcher<'a> {
    p: &'a Pattern,
    q: &'a PlanarMap,
    image: Vec<Dart>,
    dart_stamp: Vec<u32>,
    vertex_stamp: Vec<u32>,
    stamp: u32,
    stack: Vec<Dart>,
}

impl<'a> Matcher<'a> {
    fn new(p: &'a Pattern, q: &'a PlanarMap) -> Self {
        Matcher {
            p,
            q,
            image: vec![usize::MAX; p.map.darts()],
            dart_stamp: vec![0; q.darts()],
            vertex_stamp: vec![0; q.num_vertices()],
            stamp: 0,
            stack: Vec::new(),
        }
    }

    fn assign(&mut self, x: Dart, y: Dart) -> bool {
        if self.image[x] != usize::MAX {
            return self.image[x] == y;
        }
        if self.dart_stamp[y] == self.stamp {
            return false;
        }
        self.dart_stamp[y] = self.stamp;
        self.image[x] = y;
        self.stack.push(x);
        true
    }

    /// Maps the pattern root to `e` and propagates through twins and inner
    /// corners; succeeds iff the result is an embedding of the closed disc.
    fn try_at(&mut self, e: Dart) -> bool {
        self.stamp += 1;
        self.image.iter_mut().for_each(|x| *x = usize::MAX);
        self.stack.clear();
        let (p, q) = (self.p, self.q);
        if !self.assign(p.map.root(), e) {
            return false;
        }
        while let Some(x) = self.stack.pop() {
            let y = self.image[x];
            if !self.assign(x ^ 1, y ^ 1) {
                return false;
            }
            if p.inner_corner[x] && !self.assign(p.map.next(x), q.next(y)) {
                return false;
            }
        }
        if self.image.contains(&usize::MAX) {
            return false;
        }
        // distinct pattern vertices must land on distinct host vertices
        for v in 0..p.map.num_vertices() {
            let w = q.origin(self.image[p.map.vertex_dart(v)]);
            if self.vertex_stamp[w] == self.stamp {
                return false;
            }
            self.vertex_stamp[w] = self.stamp;
        }
        true
    }
}

/// The darts of `q` at which `p` occurs, grouped by unrooted copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceSet {
    pub darts: Vec<Dart>,
    /// Host faces covered by each copy, sorted, one entry per copy.
    pub copies: Vec<Vec<usize>>,
}

impl OccurrenceSet {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Distinct copies never share a face.
    pub fn copies_disjoint(&self) -> bool {
        let mut all: Vec<usize> = self.copies.iter().flatten().copied().collect();
        let n = all.len();
        all.sort_unstable();
        all.dedup();
        all.len() == n
    }
}

pub fn occurrences(q: &PlanarMap, p: &Pattern) -> OccurrenceSet {
    let mut m = Matcher::new(p, q);
    let mut darts = Vec::new();
    let mut copies: Vec<Vec<usize>> = Vec::new();
    for e in 0..q.darts() {
        if !m.try_at(e) {
            continue;
        }
        darts.push(e);
        let mut faces: Vec<usize> =
            (0..p.map.darts()).filter(|&x| p.inner_corner[x]).map(|x| q.face_of(q.next(m.image[x]))).collect();
        faces.sort_unstable();
        faces.dedup();
        if !copies.contains(&faces) {
            copies.push(faces);
        }
    }
    OccurrenceSet { darts, copies }
}

/// `N(q)`, the number of darts carrying an occurrence.
pub fn count_occurrences(q: &PlanarMap, p: &Pattern) -> usize {
    let mut m = Matcher::new(p, q);
    (0..q.darts()).filter(|&e| m.try_at(e)).count()
}

pub fn is_occurrence(q: &PlanarMap, p: &Pattern, e: Dart) -> bool {
    e < q.darts() && Matcher::new(p, q).try_at(e)
}

/// The submap on the other side of the occurrence at `e`, rooted at `rev(e)`.
pub fn remove_occurrence(q: &PlanarMap, p: &Pattern, e: Dart) -> Result<PlanarMap, PatternError> {
    let mut m = Matcher::new(p, q);
    if e >= q.darts() || !m.try_at(e) {
        return Err(PatternError::NotAnOccurrence(e));
    }
    let mut drop = vec![false; q.darts()];
    for x in 0..p.map.darts() {
        if !p.boundary_edge[x] {
            drop[m.image[x]] = true;
        }
    }
    let keep: Vec<Dart> = (0..q.darts()).filter(|&d| !drop[d]).collect();
    Ok(q.induced(&keep, e ^ 1)?.0)
}

/// Glues `p` into the hexagonal root face of `qh`, pattern root onto the
/// reversed root of `qh`, then reroots uniformly at random. Returns the
/// filled map and the dart `ē` (reversed root of `qh`) in it.
pub fn fill_hexagon(qh: &PlanarMap, p: &Pattern, seed: u64) -> Result<(PlanarMap, Dart), PatternError> {
    if !is_irreducible_hexagon_dissection(qh) {
        return Err(PatternError::NotInClass);
    }
    let (filled, bar) = glue_into_root_face(qh, p)?;
    let mut rng = rng_from_seed(seed);
    let root = rng.gen_range(0..filled.darts());
    Ok((filled.reroot(root)?, bar))
}

/// Gluing without class check or rerooting; the root is `ē`.
pub fn glue_into_root_face(qh: &PlanarMap, p: &Pattern) -> Result<(PlanarMap, Dart), PatternError> {
    let hole = qh.face_cycle_from(qh.root());
    let k = hole.len();
    if k != p.boundary.len() {
        return Err(PatternError::BoundaryMismatch { pattern: p.boundary.len(), hole: k });
    }
    let off = qh.darts();
    let outer_q = qh.root_face();
    let outer_p = p.map.root_face();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for f in 0..qh.num_faces() {
        if f != outer_q {
            faces.push(qh.face_darts(f));
        }
    }
    for f in 0..p.map.num_faces() {
        if f != outer_p {
            faces.push(p.map.face_darts(f).into_iter().map(|d| d + off).collect());
        }
    }
    // hole dart h_j is replaced by the reverse of pattern dart p_{-j}
    let mut twin: Vec<usize> = (0..off + p.map.darts()).map(|x| x ^ 1).collect();
    for j in 0..k {
        let a = hole[j] ^ 1;
        let b = p.boundary[(k - j) % k] ^ 1;
        twin[a] = b + off;
        twin[b + off] = a;
    }
    let bar = qh.root() ^ 1;
    let (m, old) = from_face_cycles(&faces, |x| twin[x], bar, off + p.map.darts())?;
    let bar_new = old.iter().position(|&x| x == bar).expect("kept");
    Ok((m, bar_new))
}

/// Shortest paths between distinct boundary vertices through inner vertices
/// only, boundary edges excluded: at least 3 for boundary neighbours and more
/// than 3 otherwise.
pub fn has_long_inner_paths(p: &PlanarMap) -> bool {
    let hex = p.face_cycle_from(p.root());
    let k = hex.len();
    let on_hex: Vec<Option<usize>> = {
        let mut v = vec![None; p.num_vertices()];
        for (i, &d) in hex.iter().enumerate() {
            v[p.origin(d)] = Some(i);
        }
        v
    };
    let mut boundary_edge = vec![false; p.num_edges()];
    for &d in &hex {
        boundary_edge[d >> 1] = true;
    }
    for (i, &d0) in hex.iter().enumerate() {
        let s = p.origin(d0);
        let mut dist = vec![u32::MAX; p.num_vertices()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u != s && on_hex[u].is_some() {
                continue;
            }
            for d in p.vertex_darts(u) {
                if boundary_edge[d >> 1] {
                    continue;
                }
                let w = p.head(d);
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        for (w, j) in on_hex.iter().enumerate() {
            let Some(j) = *j else { continue };
            if j == i || dist[w] == u32::MAX {
                continue;
            }
            let neighbours = (i + 1) % k == j || (j + 1) % k == i;
            if dist[w] < 3 || (!neighbours && dist[w] == 3) {
                return false;
            }
        }
    }
    true
}

/// Rootings on the boundary that give back the same rooted map.
pub fn boundary_symmetries(p: &PlanarMap) -> usize {
    let key = canonical_key(p);
    p.face_cycle_from(p.root()).into_iter().filter(|&d| canonical_key(&p.reroot(d).unwrap()) == key).count()
}

/// Quadrangular faces of the pattern.
pub const PATTERN_FACES: usize = 9;

/// Canonical serializations of every rooted map in the hexagon class with
/// nine quadrangular faces that has long inner paths and exactly three
/// boundary symmetries, sorted.
pub fn pattern_candidates() -> Vec<String> {
    let mut out: Vec<String> = hexagon_class_by_growth(PATTERN_FACES)
        .into_iter()
        .filter(|m| is_irreducible_hexagon_dissection(m) && has_long_inner_paths(m) && boundary_symmetries(m) == 3)
        .map(|m| serialize(&canonical_form(&m)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Recomputes the pattern from scratch: the least candidate.
pub fn discover_p0() -> Result<Pattern, PatternError> {
    let first = pattern_candidates().into_iter().next().ok_or(PatternError::NoCandidate)?;
    Pattern::new(deserialize(&first)?)
}

pub const P0_FIXTURE: &str = include_str!("../../fixtures/p0.pmap");
pub const P0_SHA256: &str = "d5e7ab486705a65084586ea1877e48825257fa1c4bd722debeb6e7fd5c09082b";

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// The frozen pattern, checked against its pinned checksum.
pub fn p0() -> Result<Pattern, PatternError> {
    let got = sha256_hex(P0_FIXTURE);
    if got != P0_SHA256 {
        return Err(PatternError::Checksum(got));
    }
    Pattern::new(deserialize(P0_FIXTURE)?)
}

/// Monte-Carlo summary of `N` over irreducible quadrangulations drawn by
/// the randomized-size sampler.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingStats {
    pub n_target: usize,
    pub replicas: usize,
    pub mean_size: f64,
    pub mean_n: f64,
    pub var_n: f64,
    /// Standard deviation of `N / mean(N)`; NaN when no occurrence was seen.
    pub sd_beta: f64,
    /// Mean of `N / (4 * size)`, the fraction of darts in `Occ`.
    pub occ_rate: f64,
    /// Fraction of draws whose root dart lies in `Occ`.
    pub root_rate: f64,
    /// Every draw had `N ≡ 0 (mod 3)` and disjoint copies.
    pub invariants_hold: bool,
}

pub fn coupling_statistics(
    n_target: usize,
    replicas: usize,
    seed: u64,
    p: &Pattern,
) -> Result<CouplingStats, crate::enumeration::SampleError> {
    let mut ns = Vec::with_capacity(replicas);
    let (mut size_sum, mut rate_sum, mut root_hits) = (0.0, 0.0, 0usize);
    let mut ok = true;
    for r in 0..replicas {
        let draw = crate::enumeration::sample_irreducible_randomized_size(n_target, crate::enumeration::mix_seed(seed, r as u64))?;
        let occ = occurrences(&draw.map, p);
        ok &= occ.len() % 3 == 0 && occ.copies_disjoint() && occ.copies.len() * 3 == occ.len();
        root_hits += occ.darts.binary_search(&draw.map.root()).is_ok() as usize;
        size_sum += draw.size as f64;
        rate_sum += occ.len() as f64 / (4 * draw.size) as f64;
        ns.push(occ.len() as f64);
    }
    let k = replicas.max(1) as f64;
    let mean = ns.iter().sum::<f64>() / k;
    let var = ns.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    let sd_beta = if mean > 0.0 { var.sqrt() / mean } else { f64::NAN };
    Ok(CouplingStats {
        n_target,
        replicas,
        mean_size: size_sum / k,
        mean_n: mean,
        var_n: var,
        sd_beta,
        occ_rate: rate_sum / k,
        root_rate: root_hits as f64 / k,
        invariants_hold: ok,
    })
}
