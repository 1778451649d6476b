use super::{canonical_bicoloring, Dart, MapError, PlanarMap};

/// Faces on either side of a simple cycle given as a closed dart walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSides {
    /// Faces to the left of the cycle darts.
    pub left: Vec<usize>,
    /// Faces to the right of the cycle darts.
    pub right: Vec<usize>,
}

fn check_simple(m: &PlanarMap, cycle: &[Dart]) -> Result<(), MapError> {
    if cycle.is_empty() {
        return Err(MapError::NotSimpleCycle("empty".into()));
    }
    let mut seen = vec![false; m.num_vertices()];
    let mut used = vec![false; m.num_edges()];
    for (i, &d) in cycle.iter().enumerate() {
        if d >= m.darts() {
            return Err(MapError::OutOfRange(d));
        }
        let nxt = cycle[(i + 1) % cycle.len()];
        if m.head(d) != m.origin(nxt) {
            return Err(MapError::NotSimpleCycle(format!("dart {d} does not end where dart {nxt} starts")));
        }
        let v = m.origin(d);
        if seen[v] {
            return Err(MapError::NotSimpleCycle(format!("vertex {v} repeated")));
        }
        seen[v] = true;
        if used[d >> 1] {
            return Err(MapError::NotSimpleCycle(format!("edge {} repeated", d >> 1)));
        }
        used[d >> 1] = true;
    }
    Ok(())
}

fn flood(m: &PlanarMap, start: usize, blocked: &[bool], side: &mut [bool]) {
    let mut stack = vec![start];
    side[start] = true;
    while let Some(f) = stack.pop() {
        for d in m.face_darts(f) {
            if blocked[d >> 1] {
                continue;
            }
            let g = m.face_of(d ^ 1);
            if !side[g] {
                side[g] = true;
                stack.push(g);
            }
        }
    }
}

/// Partition of the faces by the Jordan curve of a simple cycle.
pub fn cycle_sides(m: &PlanarMap, cycle: &[Dart]) -> Result<CycleSides, MapError> {
    check_simple(m, cycle)?;
    let mut blocked = vec![false; m.num_edges()];
    for &d in cycle {
        blocked[d >> 1] = true;
    }
    let mut right = vec![false; m.num_faces()];
    let mut left = vec![false; m.num_faces()];
    flood(m, m.face_of(cycle[0]), &blocked, &mut right);
    flood(m, m.face_of(cycle[0] ^ 1), &blocked, &mut left);
    let collect = |s: &[bool]| (0..s.len()).filter(|&f| s[f]).collect::<Vec<_>>();
    Ok(CycleSides { left: collect(&left), right: collect(&right) })
}

/// True iff every parallel edge of every cycle edge lies on the left of the
/// black-to-white orientation of that edge.
pub fn is_rightmost_cycle(m: &PlanarMap, cycle: &[Dart]) -> Result<bool, MapError> {
    let sides = cycle_sides(m, cycle)?;
    let col = canonical_bicoloring(m)?;
    let mut on_left = vec![false; m.num_faces()];
    for &f in &sides.left {
        on_left[f] = true;
    }
    let mut on_cycle = vec![false; m.num_edges()];
    for &d in cycle {
        on_cycle[d >> 1] = true;
    }
    for &c in cycle {
        // the left of the black-to-white orientation is the cycle's left iff c is black-to-white
        let want_left = col.is_black(m.origin(c));
        let (u, v) = (m.origin(c), m.head(c));
        for p in m.vertex_darts(u) {
            if p == c || m.head(p) != v || on_cycle[p >> 1] {
                continue;
            }
            if on_left[m.face_of(p)] != want_left {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn facial_cycle_has_single_face_side() {
        let q = cube();
        let f = q.face_darts(q.root_face());
        let s = cycle_sides(&q, &f).unwrap();
        assert_eq!(s.right, vec![q.root_face()]);
        assert_eq!(s.left.len(), 5);
        assert!(is_rightmost_cycle(&q, &f).unwrap());
    }

    #[test]
    fn hexagonal_belt_of_cube() {
        let (q, id) = cube_labeled();
        let vs = [0usize, 1, 2, 6, 7, 4];
        let dart_between = |a: usize, b: usize| {
            (0..q.darts()).find(|&d| q.origin(d) == id[a] && q.head(d) == id[b]).unwrap()
        };
        let cyc: Vec<usize> = (0..6).map(|i| dart_between(vs[i], vs[(i + 1) % 6])).collect();
        let s = cycle_sides(&q, &cyc).unwrap();
        assert_eq!((s.left.len(), s.right.len()), (3, 3));
    }

    /// 4-cycle v0 v1 v2 v3 plus a second v0-v1 edge outside it (a 2-gon face).
    fn square_with_doubled_edge() -> PlanarMap {
        let mut next = vec![0; 10];
        for (a, b) in [(0, 7), (7, 8), (8, 0), (2, 1), (1, 9), (9, 2), (4, 3), (3, 4), (5, 6), (6, 5)] {
            next[a] = b;
        }
        PlanarMap::new(next, 0).unwrap()
    }

    #[test]
    fn parallel_edge_on_the_wrong_side() {
        let m = square_with_doubled_edge();
        assert_eq!((m.num_vertices(), m.num_faces()), (4, 3));
        // the cycle through the inner copy has the outer copy on its right
        assert!(!is_rightmost_cycle(&m, &[0, 2, 4, 6]).unwrap());
        assert!(is_rightmost_cycle(&m, &[8, 2, 4, 6]).unwrap());
    }

    #[test]
    fn rejects_non_simple() {
        let p = path2();
        assert!(matches!(cycle_sides(&p, &[0, 1]), Err(MapError::NotSimpleCycle(_))));
        assert!(matches!(cycle_sides(&p, &[0, 2]), Err(MapError::NotSimpleCycle(_))));
    }
}
