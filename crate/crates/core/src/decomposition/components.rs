use super::irreducible::{Region, SimpleIndex};
use super::simple::{block_map, simple_blocks};
use super::Submap;
use crate::map_kernel::{
    canonical_bicoloring, classify, cycle_sides, four_cycles, is_rightmost_cycle, Bicoloring, Dart, MapClass,
    PlanarMap,
};
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub submap: Submap,
    /// Face count.
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub components: Vec<Component>,
    /// Component sizes, largest first.
    pub sizes: Vec<usize>,
    pub unique_largest: bool,
    /// Faces in the largest simple block.
    pub l_s: usize,
    /// Faces in the largest irreducible component (0 if none).
    pub l_irr: usize,
}

impl ComponentReport {
    pub fn second_largest(&self) -> usize {
        self.sizes.get(1).copied().unwrap_or(0)
    }
}

/// Host edges of a component found in a block: of the two host darts behind
/// each block edge, the one leaving a black vertex (its parallels all lie on
/// its left).
fn lift(block_to_host: &[Dart], col: &Bicoloring, q: &PlanarMap, regions: &[Region], is_face: impl Fn(&Region) -> bool) -> Submap {
    let host_dart = |x: Dart| -> Dart {
        let h = block_to_host[x];
        if col.is_black(q.origin(h)) {
            h
        } else {
            block_to_host[x ^ 1] ^ 1
        }
    };
    let mut edges = Vec::with_capacity(2 * regions.len());
    let mut root_trivial = usize::MAX;
    let mut root_any = usize::MAX;
    for r in regions {
        let trivial = is_face(r);
        for &x in r {
            let h = host_dart(x);
            edges.push(h >> 1);
            if col.is_black(q.origin(h)) {
                root_any = root_any.min(h);
                if trivial {
                    root_trivial = root_trivial.min(h);
                }
            }
        }
    }
    let root = if root_trivial != usize::MAX { root_trivial } else { root_any };
    Submap::from_edges(edges, root)
}

/// All irreducible components of `q`, found block by block.
pub fn irreducible_components(q: &PlanarMap) -> ComponentReport {
    let blocks = simple_blocks(q);
    let col = canonical_bicoloring(q).expect("quadrangulations are bipartite");
    let mut components = Vec::new();
    for (p, faces) in blocks.pieces.iter().enumerate() {
        if faces.len() < 4 {
            continue;
        }
        let (s, to_host) = block_map(q, &blocks, p, q.face_dart(faces[0]));
        let ix = SimpleIndex::new(&s);
        for regions in ix.all_components() {
            let submap = lift(&to_host, &col, q, &regions, |r| ix.is_face(r));
            components.push(Component { submap, size: regions.len() });
        }
    }
    let mut sizes: Vec<usize> = components.iter().map(|c| c.size).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let l_irr = sizes.first().copied().unwrap_or(0);
    let unique_largest = l_irr > 0 && sizes.get(1).is_none_or(|&s| s < l_irr);
    ComponentReport { components, sizes, unique_largest, l_s: blocks.largest(), l_irr }
}

/// Host edges of the irreducible component met from dart `at`: the simple
/// block of the face right of `at`, then the component of that face in the
/// block. Edges are lifted with the coloring of `q`.
pub fn root_block_edges(q: &PlanarMap, at: Dart) -> Option<Vec<usize>> {
    let blocks = simple_blocks(q);
    let (s, to_host) = block_map(q, &blocks, blocks.piece_of_face[q.face_of(at)], at);
    let fd = s.face_darts(s.root_face());
    if fd.len() != 4 {
        return None;
    }
    let ix = SimpleIndex::new(&s);
    let regions = ix.component_from([fd[0], fd[1], fd[2], fd[3]])?;
    let col = canonical_bicoloring(q).ok()?;
    Some(lift(&to_host, &col, q, &regions, |r| ix.is_face(r)).edges())
}

/// Components by exhaustive search: vertex sets spanning an irreducible
/// quadrangulation whose faces are all rightmost cycles of `q`. Exponential;
/// for small maps only. Returns sorted edge lists.
pub fn brute_force_components(q: &PlanarMap) -> Vec<Vec<usize>> {
    let nv = q.num_vertices();
    assert!(nv <= 20, "brute force is for small maps");
    let mut between: Vec<Vec<Vec<Dart>>> = vec![vec![Vec::new(); nv]; nv];
    for d in 0..q.darts() {
        if d & 1 == 0 {
            let (u, v) = (q.origin(d), q.head(d));
            between[u.min(v)][u.max(v)].push(d);
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for mask in 1u32..(1 << nv) {
        let k = mask.count_ones() as usize;
        if k < 6 {
            continue;
        }
        let l = k - 2;
        let vs: Vec<usize> = (0..nv).filter(|&v| mask >> v & 1 == 1).collect();
        let mut pairs = Vec::new();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                if !between[a][b].is_empty() {
                    pairs.push((a, b));
                }
            }
        }
        if pairs.len() != 2 * l {
            continue;
        }
        // every choice of one parallel per pair
        let mut choice = vec![0usize; pairs.len()];
        loop {
            let darts: Vec<Dart> =
                pairs.iter().zip(&choice).flat_map(|(&(a, b), &c)| [between[a][b][c], between[a][b][c] ^ 1]).collect();
            if let Ok((m, new_id)) = q.induced(&darts, darts[0]) {
                if m.num_faces() == l && classify(&m) == MapClass::IrreducibleQuadrangulation {
                    let mut old = vec![0; m.darts()];
                    for &d in &darts {
                        old[new_id[d]] = d;
                    }
                    let rightmost = (0..m.num_faces()).all(|f| {
                        let cyc: Vec<Dart> = m.face_darts(f).iter().map(|&x| old[x]).collect();
                        is_rightmost_cycle(q, &cyc).unwrap_or(false)
                    });
                    if rightmost {
                        let mut e: Vec<usize> = darts.iter().step_by(2).map(|d| d >> 1).collect();
                        e.sort_unstable();
                        out.push(e);
                    }
                }
            }
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < between[pairs[i].0][pairs[i].1].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// A 4-cycle of `q` with `a` on one closed side and `b` on the other, if any.
pub fn separation_witness(q: &PlanarMap, a: &Submap, b: &Submap) -> Option<Vec<Dart>> {
    let nv = q.num_vertices();
    let mut between: Vec<Vec<Dart>> = vec![Vec::new(); nv * nv];
    for d in 0..q.darts() {
        between[q.origin(d) * nv + q.head(d)].push(d);
    }
    let inside = |s: &Submap, on_cycle: &[bool], side: &[bool]| {
        s.darts.iter().all(|&d| on_cycle[d >> 1] || (side[q.face_of(d)] && side[q.face_of(d ^ 1)]))
    };
    for [v0, v1, v2, v3] in four_cycles(q) {
        let vs = [v0, v1, v2, v3];
        let opts: Vec<&Vec<Dart>> = (0..4).map(|i| &between[vs[i] * nv + vs[(i + 1) % 4]]).collect();
        for &d0 in opts[0] {
            for &d1 in opts[1] {
                for &d2 in opts[2] {
                    for &d3 in opts[3] {
                        let cyc = vec![d0, d1, d2, d3];
                        let Ok(sides) = cycle_sides(q, &cyc) else { continue };
                        let mut on_cycle = vec![false; q.num_edges()];
                        for &d in &cyc {
                            on_cycle[d >> 1] = true;
                        }
                        let mut left = vec![false; q.num_faces()];
                        let mut right = vec![false; q.num_faces()];
                        sides.left.iter().for_each(|&f| left[f] = true);
                        sides.right.iter().for_each(|&f| right[f] = true);
                        if (inside(a, &on_cycle, &left) && inside(b, &on_cycle, &right))
                            || (inside(a, &on_cycle, &right) && inside(b, &on_cycle, &left))
                        {
                            return Some(cyc);
                        }
                    }
                }
            }
        }
    }
    None
}

/// A largest component chosen uniformly among the maximal ones, rooted at a
/// uniform dart of it; the flag says whether the maximum was unique.
pub fn largest_component<R: Rng>(q: &PlanarMap, rng: &mut R) -> Option<(Submap, bool)> {
    let rep = irreducible_components(q);
    let best: Vec<&Component> = rep.components.iter().filter(|c| c.size == rep.l_irr).collect();
    if best.is_empty() {
        return None;
    }
    let c = best[rng.gen_range(0..best.len())];
    let root = c.submap.darts[rng.gen_range(0..c.submap.darts.len())];
    Some((Submap { darts: c.submap.darts.clone(), root }, best.len() == 1))
}
