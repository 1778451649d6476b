//! Simple blocks: every bundle of parallel edges is cut into lenses, and each
//! region between consecutive parallels becomes a map of its own.

use crate::map_kernel::{from_face_cycles, Dart, PlanarMap};

#[derive(Clone, Debug)]
pub struct SimpleBlocks {
    /// Twin after fusing each dart with its nearest clockwise parallel.
    pub fused: Vec<Dart>,
    pub piece_of_face: Vec<usize>,
    /// Faces of each block.
    pub pieces: Vec<Vec<usize>>,
}

impl SimpleBlocks {
    /// Face counts of the blocks.
    pub fn sizes(&self) -> Vec<usize> {
        self.pieces.iter().map(Vec::len).collect()
    }

    /// Face count of the largest block.
    pub fn largest(&self) -> usize {
        self.pieces.iter().map(Vec::len).max().unwrap_or(0)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn simple_blocks(q: &PlanarMap) -> SimpleBlocks {
    let n = q.darts();
    let mut fused = vec![0; n];
    // last position (in the doubled clockwise sweep) seen for each head
    let mut last = vec![0usize; q.num_vertices()];
    for u in 0..q.num_vertices() {
        let mut cw = q.vertex_darts(u);
        cw.reverse();
        let k = cw.len();
        for t in (0..2 * k).rev() {
            let i = t % k;
            let h = q.head(cw[i]);
            if t < k {
                fused[cw[i]] = cw[last[h]] ^ 1;
            }
            last[h] = i;
        }
    }
    let mut parent: Vec<usize> = (0..q.num_faces()).collect();
    for d in 0..n {
        let (a, b) = (find(&mut parent, q.face_of(d)), find(&mut parent, q.face_of(fused[d])));
        if a != b {
            parent[a] = b;
        }
    }
    let mut id = vec![usize::MAX; q.num_faces()];
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    let mut piece_of_face = vec![0; q.num_faces()];
    for f in 0..q.num_faces() {
        let r = find(&mut parent, f);
        if id[r] == usize::MAX {
            id[r] = pieces.len();
            pieces.push(Vec::new());
        }
        piece_of_face[f] = id[r];
        pieces[id[r]].push(f);
    }
    SimpleBlocks { fused, piece_of_face, pieces }
}

/// Block `piece` as a map rooted at host dart `root`, with the block-to-host
/// dart table.
pub fn block_map(q: &PlanarMap, blocks: &SimpleBlocks, piece: usize, root: Dart) -> (PlanarMap, Vec<Dart>) {
    let faces: Vec<Vec<Dart>> = blocks.pieces[piece].iter().map(|&f| q.face_darts(f)).collect();
    from_face_cycles(&faces, |d| blocks.fused[d], root, q.darts()).expect("a block is a planar map")
}

/// The block holding the root face, rooted at the root.
pub fn simple_root_block(q: &PlanarMap) -> PlanarMap {
    let b = simple_blocks(q);
    block_map(q, &b, b.piece_of_face[q.root_face()], q.root()).0
}
