use super::PlanarMap;
use std::collections::HashSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapClass {
    GeneralQuadrangulation,
    SimpleQuadrangulation,
    IrreducibleQuadrangulation,
    IrreducibleHexagon,
    Other,
}

/// All 4-cycles of the underlying simple graph, each once, as `[a, b, c, d]`
/// with `a` the smallest vertex. Parallel edges are ignored.
pub fn four_cycles(m: &PlanarMap) -> Vec<[usize; 4]> {
    let adj = m.neighbors();
    let n = adj.len();
    let mut out = Vec::new();
    let mut via: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut touched = Vec::new();
    for a in 0..n {
        for &b in &adj[a] {
            if b <= a {
                continue;
            }
            for &c in &adj[b] {
                if c <= a {
                    continue;
                }
                if via[c].is_empty() {
                    touched.push(c);
                }
                via[c].push(b);
            }
        }
        for &c in &touched {
            let bs = &via[c];
            for i in 0..bs.len() {
                for j in i + 1..bs.len() {
                    out.push([a, bs[i], c, bs[j]]);
                }
            }
            via[c].clear();
        }
        touched.clear();
    }
    out
}

fn facial_quads(m: &PlanarMap) -> HashSet<[usize; 4]> {
    let mut set = HashSet::new();
    for f in 0..m.num_faces() {
        let ds = m.face_darts(f);
        if ds.len() != 4 {
            continue;
        }
        let mut vs: [usize; 4] = [0; 4];
        for (i, &d) in ds.iter().enumerate() {
            vs[i] = m.origin(d);
        }
        vs.sort_unstable();
        if vs.windows(2).all(|w| w[0] != w[1]) {
            set.insert(vs);
        }
    }
    set
}

fn all_four_cycles_facial(m: &PlanarMap) -> bool {
    let facial = facial_quads(m);
    four_cycles(m).into_iter().all(|c| {
        let mut s = c;
        s.sort_unstable();
        facial.contains(&s)
    })
}

/// Root face of degree 6 with six distinct vertices, all other faces of
/// degree 4, no multiple edges, every 4-cycle facial.
pub fn is_irreducible_hexagon_dissection(m: &PlanarMap) -> bool {
    let rf = m.root_face();
    let hex = m.face_darts(rf);
    if hex.len() != 6 {
        return false;
    }
    let mut vs: Vec<usize> = hex.iter().map(|&d| m.origin(d)).collect();
    vs.sort_unstable();
    vs.dedup();
    if vs.len() != 6 {
        return false;
    }
    if (0..m.num_faces()).any(|f| f != rf && m.face_darts(f).len() != 4) {
        return false;
    }
    m.is_simple() && all_four_cycles_facial(m)
}

pub fn classify(m: &PlanarMap) -> MapClass {
    if m.is_quadrangulation() {
        if !m.is_simple() {
            MapClass::GeneralQuadrangulation
        } else if m.num_faces() >= 4 && all_four_cycles_facial(m) {
            MapClass::IrreducibleQuadrangulation
        } else {
            MapClass::SimpleQuadrangulation
        }
    } else if is_irreducible_hexagon_dissection(m) && m.num_vertices() > 6 {
        MapClass::IrreducibleHexagon
    } else {
        MapClass::Other
    }
}

pub fn is_irreducible(m: &PlanarMap) -> bool {
    classify(m) == MapClass::IrreducibleQuadrangulation
}
