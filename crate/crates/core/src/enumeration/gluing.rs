//! Exhaustive generation of rooted planar maps by gluing polygons.
//!
//! Polygons are labelled in discovery order: polygon 0 is the root face with
//! darts `0..r` (root at 0), each later polygon is created when the smallest
//! unmatched dart is glued to it, and its darts are labelled from the glued
//! one. The labelling is a deterministic function of the rooted map, so every
//! map is produced exactly once. Gluings that would raise the genus (matching
//! two sides on different boundary components of the partial surface) are
//! never explored, and boundary components of odd length are cut early.

use crate::map_kernel::PlanarMap;

const FREE: usize = usize::MAX;

struct Gluer<'a> {
    /// Number of darts of polygon `p` and its first dart label.
    sizes: Vec<usize>,
    starts: Vec<usize>,
    inner: usize,
    inner_faces: usize,
    twin: Vec<usize>,
    visit: &'a mut dyn FnMut(&[usize], &[usize], &[usize]),
}

impl Gluer<'_> {
    fn polygon(&self, d: usize) -> usize {
        // polygons are few; linear scan is fine
        let mut p = self.starts.len() - 1;
        while self.starts[p] > d {
            p -= 1;
        }
        p
    }

    fn phi(&self, d: usize) -> usize {
        let p = self.polygon(d);
        let (s, k) = (self.starts[p], self.sizes[p]);
        s + (d - s + 1) % k
    }

    /// Next unmatched side along the boundary component through `d`.
    fn boundary_next(&self, d: usize) -> usize {
        let mut x = self.phi(d);
        while self.twin[x] != FREE {
            x = self.phi(self.twin[x]);
        }
        x
    }

    fn total(&self) -> usize {
        self.starts.last().map_or(0, |&s| s + self.sizes[self.sizes.len() - 1])
    }

    fn run(&mut self, from: usize) {
        let total = self.total();
        let mut d = from;
        while d < total && self.twin[d] != FREE {
            d += 1;
        }
        if d == total {
            if self.starts.len() - 1 == self.inner_faces {
                (self.visit)(&self.twin[..total], &self.starts, &self.sizes);
            }
            return;
        }
        // open a new polygon
        if self.starts.len() - 1 < self.inner_faces {
            let s = total;
            self.starts.push(s);
            self.sizes.push(self.inner);
            self.twin[d] = s;
            self.twin[s] = d;
            self.run(d + 1);
            self.twin[d] = FREE;
            self.twin[s] = FREE;
            self.starts.pop();
            self.sizes.pop();
        }
        // close against an existing side at odd distance on the same boundary
        let mut e = self.boundary_next(d);
        let mut j = 1;
        while e != d {
            if j % 2 == 1 {
                self.twin[d] = e;
                self.twin[e] = d;
                self.run(d + 1);
                self.twin[d] = FREE;
                self.twin[e] = FREE;
            }
            e = self.boundary_next(e);
            j += 1;
        }
    }
}

/// Visits every rooted planar map whose root face has degree `root_degree`
/// and which has exactly `inner_faces` further faces of degree `inner`.
/// Both degrees must be even. The callback gets each map already converted.
pub fn for_each_map(root_degree: usize, inner: usize, inner_faces: usize, mut visit: impl FnMut(PlanarMap)) {
    assert!(root_degree % 2 == 0 && inner % 2 == 0 && root_degree > 0 && inner > 0);
    let cap = root_degree + inner * inner_faces;
    let mut convert = |twin: &[usize], starts: &[usize], sizes: &[usize]| {
        visit(to_planar_map(twin, starts, sizes));
    };
    let mut g = Gluer {
        sizes: vec![root_degree],
        starts: vec![0],
        inner,
        inner_faces,
        twin: vec![FREE; cap],
        visit: &mut convert,
    };
    g.run(0);
}

/// Converts a polygon gluing into a rotation system with the `2k, 2k+1` layout.
fn to_planar_map(twin: &[usize], starts: &[usize], sizes: &[usize]) -> PlanarMap {
    let n = twin.len();
    let mut phi = vec![0; n];
    for (p, &s) in starts.iter().enumerate() {
        for i in 0..sizes[p] {
            phi[s + i] = s + (i + 1) % sizes[p];
        }
    }
    let mut id = vec![FREE; n];
    let mut k = 0;
    for d in 0..n {
        if id[d] == FREE {
            id[d] = 2 * k;
            id[twin[d]] = 2 * k + 1;
            k += 1;
        }
    }
    // next(x) = phi(twin(x))
    let mut next = vec![0; n];
    for x in 0..n {
        next[id[x]] = id[phi[twin[x]]];
    }
    PlanarMap::new(next, id[0]).expect("gluing yields a planar map")
}
