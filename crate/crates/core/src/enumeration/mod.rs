//! Exhaustive enumeration of small rooted maps and uniform samplers.
//!
//! The enumerators glue polygons and never touch the samplers, so they can
//! serve as exact oracles for them.

pub mod gluing;
pub mod sampling;

pub use sampling::{
    mix_seed, sample_irreducible_hexagon_small, sample_irreducible_randomized_size, sample_quadrangulation,
    IrreducibleDraw, SampleError,
};

use crate::growth::open_face;
use crate::map_kernel::{canonical_form, canonical_key, classify, serialize, MapClass, PlanarMap};
use std::collections::HashSet;
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("size {n} exceeds the enumeration budget of {max} for {class}")]
    Budget { class: &'static str, n: usize, max: usize },
    #[error("class {0:?} cannot be enumerated")]
    Unsupported(MapClass),
}

/// Size limits for exhaustive generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest face count for quadrangulations (general, simple, irreducible).
    pub quadrangulation: usize,
    /// Largest quadrangular-face count for the hexagon class.
    pub hexagon: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { quadrangulation: 7, hexagon: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationTable {
    pub class: MapClass,
    /// Face count; quadrangular faces only for the hexagon class.
    pub n: usize,
    pub count: u64,
    /// Canonical serializations, sorted, when requested.
    pub maps: Option<Vec<String>>,
}

impl EnumerationTable {
    pub fn csv_row(&self) -> String {
        format!("{},{},{}", class_name(self.class), self.n, self.count)
    }

    /// Newline-separated PMAP records.
    pub fn pmap_records(&self) -> String {
        let mut s = String::new();
        for m in self.maps.iter().flatten() {
            let _ = write!(s, "{m}");
        }
        s
    }
}

pub fn class_name(c: MapClass) -> &'static str {
    match c {
        MapClass::GeneralQuadrangulation => "general",
        MapClass::SimpleQuadrangulation => "simple",
        MapClass::IrreducibleQuadrangulation => "irreducible",
        MapClass::IrreducibleHexagon => "irreducible-hexagon",
        MapClass::Other => "other",
    }
}

pub fn parse_class(s: &str) -> Option<MapClass> {
    Some(match s {
        "general" => MapClass::GeneralQuadrangulation,
        "simple" => MapClass::SimpleQuadrangulation,
        "irreducible" => MapClass::IrreducibleQuadrangulation,
        "irreducible-hexagon" | "hexagon" => MapClass::IrreducibleHexagon,
        _ => return None,
    })
}

/// Closed form for rooted quadrangulations with `n` faces:
/// `2 * 3^n * (2n)! / (n! (n+2)!)`.
pub fn rooted_quadrangulation_count(n: u64) -> u128 {
    let mut c: u128 = 1; // binom(2n, n)
    for i in 0..n as u128 {
        c = c * (2 * n as u128 - i) / (i + 1);
    }
    2 * 3u128.pow(n as u32) * c / ((n as u128 + 1) * (n as u128 + 2))
}

/// `6 / ((m+2)(m+1)) * binom(2m, m)`, the hexagon-class formula at argument `m`.
pub fn hexagon_formula(m: u64) -> u128 {
    let mut c: u128 = 1;
    for i in 0..m as u128 {
        c = c * (2 * m as u128 - i) / (i + 1);
    }
    6 * c / ((m as u128 + 2) * (m as u128 + 1))
}

/// Offset between quadrangular-face count and the formula argument:
/// `|hexagon class with k quad faces| = hexagon_formula(k - HEXAGON_OFFSET)`.
pub const HEXAGON_OFFSET: usize = 2;

/// Every rooted quadrangulation with `n` faces, each exactly once.
pub fn for_each_quadrangulation(n: usize, visit: impl FnMut(PlanarMap)) {
    assert!(n >= 1);
    gluing::for_each_map(4, 4, n - 1, visit);
}

/// Hexagon class by filtering all gluings with a hexagonal root face.
pub fn hexagon_class_by_gluing(k: usize) -> Vec<PlanarMap> {
    let mut out = Vec::new();
    gluing::for_each_map(6, 4, k, |m| {
        if classify(&m) == MapClass::IrreducibleHexagon {
            out.push(m);
        }
    });
    out
}

/// Hexagon class by repeated face openings.
///
/// Starts from the class at three quadrangular faces (obtained by gluing) and
/// opens every pair of adjacent edges, keeping results in the class; every
/// member of the class at `k + 1` faces arises this way from one at `k`.
/// Returns one canonical map per rooted isomorphism class.
pub fn hexagon_class_by_growth(k: usize) -> Vec<PlanarMap> {
    if k < 3 {
        return Vec::new();
    }
    let mut level = hexagon_class_by_gluing(3);
    for _ in 3..k {
        level = grow_hexagon_level(&level);
    }
    level.into_iter().map(|m| canonical_form(&m)).collect()
}

fn grow_hexagon_level(level: &[PlanarMap]) -> Vec<PlanarMap> {
    let mut seen_unrooted: HashSet<Vec<u32>> = HashSet::new();
    let mut out = Vec::new();
    let mut seen_rooted: HashSet<Vec<u32>> = HashSet::new();
    for m in level {
        for y in 0..m.num_vertices() {
            let ds = m.vertex_darts(y);
            for i in 0..ds.len() {
                for j in i + 1..ds.len() {
                    let Ok(o) = open_face(m, ds[i] >> 1, ds[j] >> 1) else { continue };
                    if classify(&o) != MapClass::IrreducibleHexagon {
                        continue;
                    }
                    let hex = o.face_darts(o.root_face());
                    let keys: Vec<Vec<u32>> = hex.iter().map(|&d| canonical_key(&o.reroot(d).unwrap())).collect();
                    let min = keys.iter().min().unwrap().clone();
                    if !seen_unrooted.insert(min) {
                        continue;
                    }
                    for (d, key) in hex.iter().zip(keys) {
                        if seen_rooted.insert(key) {
                            out.push(o.reroot(*d).unwrap());
                        }
                    }
                }
            }
        }
    }
    out
}

fn check_budget(class: MapClass, n: usize, budget: &Budget) -> Result<(), EnumError> {
    let max = match class {
        MapClass::IrreducibleHexagon => budget.hexagon,
        MapClass::Other => return Err(EnumError::Unsupported(class)),
        _ => budget.quadrangulation,
    };
    if n > max {
        return Err(EnumError::Budget { class: class_name(class), n, max });
    }
    Ok(())
}

/// All rooted maps of `class` at size `n`, one per isomorphism class.
pub fn enumerate_maps(class: MapClass, n: usize, budget: &Budget) -> Result<Vec<PlanarMap>, EnumError> {
    check_budget(class, n, budget)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    Ok(match class {
        MapClass::IrreducibleHexagon => hexagon_class_by_growth(n),
        _ => {
            let mut out = Vec::new();
            for_each_quadrangulation(n, |m| {
                let c = classify(&m);
                let keep = match class {
                    MapClass::GeneralQuadrangulation => true,
                    MapClass::SimpleQuadrangulation => c != MapClass::GeneralQuadrangulation,
                    _ => c == class,
                };
                if keep {
                    out.push(m);
                }
            });
            out
        }
    })
}

/// Exact count of `class` at size `n`, with the sorted list of canonical
/// serializations when `with_list` is set.
pub fn enumerate(class: MapClass, n: usize, budget: &Budget, with_list: bool) -> Result<EnumerationTable, EnumError> {
    check_budget(class, n, budget)?;
    if class == MapClass::GeneralQuadrangulation && !with_list && n >= 1 {
        let mut count = 0u64;
        for_each_quadrangulation(n, |_| count += 1);
        return Ok(EnumerationTable { class, n, count, maps: None });
    }
    let maps = enumerate_maps(class, n, budget)?;
    let count = maps.len() as u64;
    let maps = with_list.then(|| {
        let mut v: Vec<String> = maps.iter().map(|m| serialize(&canonical_form(m))).collect();
        v.sort();
        v
    });
    Ok(EnumerationTable { class, n, count, maps })
}

/// Rooted isomorphism via canonical forms.
pub fn are_isomorphic(a: &PlanarMap, b: &PlanarMap) -> bool {
    a.darts() == b.darts() && canonical_key(a) == canonical_key(b)
}
