//! Cutting a quadrangulation along one irreducible component.
//!
//! The component keeps its faces; each face is filled by a quadrangulation
//! whose root face is a simple 4-cycle with a solo root edge and a solo
//! opposite edge (a filler). The trivial filler is the 4-cycle itself.

use super::{rightmost_version, DecompError, Submap};
use crate::map_kernel::{
    canonical_bicoloring, canonical_order, classify, from_face_cycles, Dart, MapClass, PlanarMap,
};
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// The component as a rooted irreducible quadrangulation.
    pub core: PlanarMap,
    /// One filler per core face, in canonical face order.
    pub fillers: Vec<PlanarMap>,
    /// Position of the original root in the canonical dart order of the map
    /// rooted at the core root.
    pub index: usize,
}

/// Root edge for the filler of face `f`: among darts having `f` on their left
/// and leaving a white vertex, the first in canonical order.
pub fn psi_root_edge(m: &PlanarMap, f: usize) -> Option<Dart> {
    let col = canonical_bicoloring(m).ok()?;
    let rank = canonical_order(m).dart_rank;
    m.face_darts(f).iter().map(|&b| b ^ 1).filter(|&d| !col.is_black(m.origin(d))).min_by_key(|&d| rank[d])
}

fn has_parallel(m: &PlanarMap, d: Dart) -> bool {
    let (u, v) = (m.origin(d), m.head(d));
    m.vertex_darts(u).iter().any(|&x| x != d && m.head(x) == v)
}

/// Whether `m` can fill a face: a quadrangulation whose root face is a simple
/// 4-cycle and whose root edge and opposite edge have no parallels.
pub fn is_filler(m: &PlanarMap) -> bool {
    if !m.is_quadrangulation() {
        return false;
    }
    let fd = m.face_cycle_from(m.root());
    let mut vs: Vec<usize> = fd.iter().map(|&d| m.origin(d)).collect();
    vs.sort_unstable();
    vs.dedup();
    vs.len() == 4 && !has_parallel(m, fd[0]) && !has_parallel(m, fd[2])
}

/// Face `f` of `m` as a φ-cycle with `b[m] ^ 1 == psi`.
fn face_with_psi(m: &PlanarMap, f: usize) -> Result<(Vec<Dart>, usize), DecompError> {
    let b = m.face_cycle_from(m.face_dart(f));
    let psi = psi_root_edge(m, f).ok_or(DecompError::NotIrreducible)?;
    let k = b.iter().position(|&x| x ^ 1 == psi).unwrap();
    Ok((b, k))
}

pub fn detach(q: &PlanarMap, s: &Submap) -> Result<Decomposition, DecompError> {
    let col = canonical_bicoloring(&q.reroot(s.root)?)?;
    let s2 = rightmost_version(q, &col, &s.darts, s.root);
    let q2 = q.reroot(s2.root)?;
    let (core, old_to_new) = q.induced(&s2.darts, s2.root)?;
    if classify(&core) != MapClass::IrreducibleQuadrangulation {
        return Err(DecompError::NotIrreducible);
    }
    let mut new_to_old = vec![0; core.darts()];
    for &d in &s2.darts {
        new_to_old[old_to_new[d]] = d;
    }
    let mut on_core = vec![false; q.num_edges()];
    for &d in &s2.darts {
        on_core[d >> 1] = true;
    }
    let mut fillers = Vec::with_capacity(core.num_faces());
    let mut inside = vec![false; q.num_faces()];
    for f in canonical_order(&core).faces {
        let (b, k) = face_with_psi(&core, f)?;
        let hb: Vec<Dart> = b.iter().map(|&x| new_to_old[x]).collect();
        // host faces inside core face f
        let mut faces_in = vec![q.face_of(hb[0])];
        inside[faces_in[0]] = true;
        let mut i = 0;
        while i < faces_in.len() {
            for d in q.face_darts(faces_in[i]) {
                let g = q.face_of(d ^ 1);
                if !on_core[d >> 1] && !inside[g] {
                    inside[g] = true;
                    faces_in.push(g);
                }
            }
            i += 1;
        }
        let mut cycles: Vec<Vec<Dart>> = faces_in.iter().map(|&g| q.face_darts(g)).collect();
        for &g in &faces_in {
            inside[g] = false;
        }
        cycles.push((0..4).map(|t| hb[(k + 4 - t) % 4] ^ 1).collect());
        let (filler, _) = from_face_cycles(&cycles, |d| d ^ 1, hb[k] ^ 1, q.darts())?;
        fillers.push(filler);
    }
    let index = canonical_order(&q2).dart_rank[q.root()];
    Ok(Decomposition { core, fillers, index })
}

/// Inverse of [`detach`]: the host map and the component as a submap of it.
pub fn glue(dec: &Decomposition) -> Result<(PlanarMap, Submap), DecompError> {
    let core = &dec.core;
    if classify(core) != MapClass::IrreducibleQuadrangulation {
        return Err(DecompError::NotIrreducible);
    }
    let faces = canonical_order(core).faces;
    if faces.len() != dec.fillers.len() {
        return Err(DecompError::FillerCount { expected: faces.len(), got: dec.fillers.len() });
    }
    let mut base = Vec::with_capacity(faces.len());
    let mut total = 0;
    for (j, fl) in dec.fillers.iter().enumerate() {
        if !is_filler(fl) {
            return Err(DecompError::Filler(j, "root face must be a simple 4-cycle with solo root and opposite edges"));
        }
        base.push(total);
        total += fl.darts();
    }
    // global id of the inner dart behind each core dart, and back
    let mut core_to_global = vec![0; core.darts()];
    let mut global_to_core = vec![usize::MAX; total];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for (j, &f) in faces.iter().enumerate() {
        let fl = &dec.fillers[j];
        let (b, k) = face_with_psi(core, f)?;
        let mut o = vec![fl.root()];
        for t in 1..4 {
            o.push(fl.phi(o[t - 1]));
        }
        for (i, &x) in b.iter().enumerate() {
            let g = base[j] + (o[(k + 4 - i) % 4] ^ 1);
            core_to_global[x] = g;
            global_to_core[g] = x;
        }
        let rf = fl.root_face();
        for g in 0..fl.num_faces() {
            if g != rf {
                cycles.push(fl.face_darts(g).iter().map(|&d| base[j] + d).collect());
            }
        }
    }
    let twin = |y: usize| -> usize {
        match global_to_core[y] {
            usize::MAX => y ^ 1,
            c => core_to_global[c ^ 1],
        }
    };
    let (q2, new_to_old) = from_face_cycles(&cycles, twin, core_to_global[core.root()], total)?;
    let mut old_to_new = vec![usize::MAX; total];
    for (n, &o) in new_to_old.iter().enumerate() {
        old_to_new[o] = n;
    }
    let order = canonical_order(&q2);
    let &r = order.darts.get(dec.index).ok_or(DecompError::Index(dec.index))?;
    let q = q2.reroot(r)?;
    let darts: Vec<Dart> = (0..core.darts()).map(|c| old_to_new[core_to_global[c]]).collect();
    let col = canonical_bicoloring(&q)?;
    let s = rightmost_version(&q, &col, &darts, old_to_new[core_to_global[core.root()]]);
    Ok((q, s))
}

/// Mass `V(filler) - 4` placed on a uniform corner of each core face.
pub fn component_mass_measure<R: Rng>(dec: &Decomposition, rng: &mut R) -> Vec<u64> {
    let mut mass = vec![0u64; dec.core.num_vertices()];
    for (f, fl) in canonical_order(&dec.core).faces.into_iter().zip(&dec.fillers) {
        let corners = dec.core.face_darts(f);
        let v = dec.core.origin(corners[rng.gen_range(0..corners.len())]);
        mass[v] += (fl.num_vertices() - 4) as u64;
    }
    mass
}
