//! Irreducible components of a simple quadrangulation.
//!
//! A region is a 4-cycle read with the region on its right. Starting from one
//! region, each side is crossed to the innermost 4-cycle beyond it; the
//! regions reached this way are the faces of one irreducible component.

use crate::map_kernel::{four_cycles, from_face_cycles, Dart, PlanarMap};
use std::collections::{HashMap, HashSet};

pub type Region = [Dart; 4];

pub(crate) fn region_key(r: &Region) -> Region {
    let mut k = *r;
    k.sort_unstable();
    k
}

/// Rotation positions and an adjacency lookup for a simple map.
pub(crate) struct SimpleIndex<'a> {
    pub s: &'a PlanarMap,
    pos: Vec<usize>,
    rot: Vec<Vec<Dart>>,
    edge: HashMap<(usize, usize), Dart>,
}

impl<'a> SimpleIndex<'a> {
    pub fn new(s: &'a PlanarMap) -> Self {
        let mut pos = vec![0; s.darts()];
        let mut rot = Vec::with_capacity(s.num_vertices());
        let mut edge = HashMap::with_capacity(s.darts());
        for v in 0..s.num_vertices() {
            let r = s.vertex_darts(v);
            for (i, &d) in r.iter().enumerate() {
                pos[d] = i;
                edge.insert((v, s.head(d)), d);
            }
            rot.push(r);
        }
        SimpleIndex { s, pos, rot, edge }
    }

    pub fn dart(&self, u: usize, v: usize) -> Option<Dart> {
        self.edge.get(&(u, v)).copied()
    }

    fn ccw(&self, d: Dart, k: usize) -> Dart {
        let r = &self.rot[self.s.origin(d)];
        r[(self.pos[d] + k) % r.len()]
    }

    fn cw(&self, d: Dart, k: usize) -> Dart {
        let r = &self.rot[self.s.origin(d)];
        r[(self.pos[d] + r.len() - k % r.len()) % r.len()]
    }

    /// Counterclockwise steps from `a` to `b` around their common origin.
    fn offset(&self, a: Dart, b: Dart) -> usize {
        let deg = self.rot[self.s.origin(a)].len();
        (self.pos[b] + deg - self.pos[a]) % deg
    }

    fn four_distinct(&self, r: &Region) -> bool {
        let mut v = r.map(|d| self.s.origin(d));
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }

    /// A common neighbour of two opposite corners outside the region.
    fn has_diagonal(&self, r: &Region) -> bool {
        (0..2).any(|i| {
            let back = r[(i + 3) % 4] ^ 1;
            let c = self.s.origin(r[(i + 2) % 4]);
            let mut x = self.s.next(r[i]);
            while x != back {
                if self.dart(self.s.head(x), c).is_some() {
                    return true;
                }
                x = self.s.next(x);
            }
            false
        })
    }

    /// Innermost 4-cycle across side `i` of `r`, as a region.
    fn across(&self, r: &Region, i: usize) -> Option<Region> {
        let d = r[i];
        let (u, v) = (self.s.origin(d), self.s.head(d));
        let ulim = self.offset(d, r[(i + 3) % 4] ^ 1);
        let vlim = self.offset(r[(i + 1) % 4], d ^ 1);
        for ox in (1..=ulim).rev() {
            let xd = self.ccw(d, ox);
            let x = self.s.head(xd);
            if x == v {
                continue;
            }
            for ow in (1..=vlim).rev() {
                if ox == ulim && ow == vlim {
                    continue;
                }
                let wd = self.cw(d ^ 1, ow);
                let w = self.s.head(wd);
                if w == u || w == x {
                    continue;
                }
                if let Some(xw) = self.dart(x, w) {
                    return Some([d ^ 1, xd, xw, wd ^ 1]);
                }
            }
        }
        None
    }

    /// Regions of the component whose first region is `r0`, or `None` when
    /// that component is degenerate (fewer than four regions).
    pub fn component_from(&self, r0: Region) -> Option<Vec<Region>> {
        if !self.four_distinct(&r0) || self.has_diagonal(&r0) {
            return None;
        }
        let c0: Vec<usize> = r0.iter().map(|d| d >> 1).collect();
        let mut seen: HashSet<Region> = HashSet::from([region_key(&r0)]);
        let mut regions = vec![r0];
        let mut k = 0;
        while k < regions.len() {
            let r = regions[k];
            for i in 0..4 {
                if k > 0 && c0.contains(&(r[i] >> 1)) {
                    continue;
                }
                let nb = self.across(&r, i)?;
                if seen.insert(region_key(&nb)) {
                    regions.push(nb);
                }
            }
            k += 1;
        }
        (regions.len() >= 4).then_some(regions)
    }

    pub fn is_face(&self, r: &Region) -> bool {
        (0..4).all(|i| self.s.phi(r[i]) == r[(i + 1) % 4])
    }

    /// Every non-degenerate component, each once.
    pub fn all_components(&self) -> Vec<Vec<Region>> {
        let s = self.s;
        let mut done: HashSet<Region> = HashSet::new();
        let mut out = Vec::new();
        let mut seeds: Vec<Region> = Vec::new();
        for f in 0..s.num_faces() {
            let fd = s.face_darts(f);
            if fd.len() == 4 {
                seeds.push([fd[0], fd[1], fd[2], fd[3]]);
            }
        }
        for [a, b, c, d] in four_cycles(s) {
            let fwd = [self.dart(a, b), self.dart(b, c), self.dart(c, d), self.dart(d, a)];
            let [Some(p), Some(q), Some(r), Some(t)] = fwd else { continue };
            let one = [p, q, r, t];
            if self.is_face(&one) || self.is_face(&[t ^ 1, r ^ 1, q ^ 1, p ^ 1]) {
                continue;
            }
            seeds.push(one);
            seeds.push([t ^ 1, r ^ 1, q ^ 1, p ^ 1]);
        }
        for seed in seeds {
            if done.contains(&region_key(&seed)) {
                continue;
            }
            if let Some(regions) = self.component_from(seed) {
                for r in &regions {
                    done.insert(region_key(r));
                }
                out.push(regions);
            }
        }
        out
    }
}

/// The regions as a map rooted at `root`, with the new-to-old dart table.
pub(crate) fn regions_map(s: &PlanarMap, regions: &[Region], root: Dart) -> (PlanarMap, Vec<Dart>) {
    let faces: Vec<Vec<Dart>> = regions.iter().map(|r| r.to_vec()).collect();
    from_face_cycles(&faces, |d| d ^ 1, root, s.darts()).expect("regions close up into a planar map")
}

/// Irreducible component of a simple quadrangulation holding the root face,
/// or `None` when that component is degenerate.
pub fn irreducible_root_block(s: &PlanarMap) -> Option<PlanarMap> {
    let fd = s.face_darts(s.root_face());
    if fd.len() != 4 || !s.is_simple() {
        return None;
    }
    let ix = SimpleIndex::new(s);
    let regions = ix.component_from([fd[0], fd[1], fd[2], fd[3]])?;
    Some(regions_map(s, &regions, s.root()).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_kernel::fixtures::*;
    use crate::map_kernel::{canonical_key, classify, MapClass};

    #[test]
    fn cube_is_its_own_component() {
        let q = cube();
        let k = irreducible_root_block(&q).unwrap();
        assert_eq!(canonical_key(&k), canonical_key(&q));
        let ix = SimpleIndex::new(&q);
        let all = ix.all_components();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].len(), 6);
    }

    #[test]
    fn small_maps_have_no_component() {
        assert!(irreducible_root_block(&four_cycle()).is_none());
        assert!(irreducible_root_block(&path2()).is_none());
        assert!(SimpleIndex::new(&four_cycle()).all_components().is_empty());
    }

    #[test]
    fn results_are_irreducible() {
        let q = cube();
        for d in 0..q.darts() {
            let k = irreducible_root_block(&q.reroot(d).unwrap()).unwrap();
            assert_eq!(classify(&k), MapClass::IrreducibleQuadrangulation);
        }
    }
}
