#![allow(dead_code)]

use cubecat::cube::{CubeCat, CubeMorphism};
use cubecat::site::{BaseMorphism, Site, Subset};
use proptest::prelude::*;

pub fn site(i: usize) -> Site {
    match i % 3 {
        0 => Site::plain(),
        1 => Site::connections(),
        _ => Site::symmetric(),
    }
}

/// Degree bound used for property tests on a site.
pub fn bound(site: &Site) -> usize {
    if site.label().contains("sigma") { 2 } else { 3 }
}

pub fn subset(n: usize, mask: u64) -> Subset {
    Subset::new(n, mask & ((1u64 << n) - 1)).unwrap()
}

pub fn base(site: &Site, m: usize, n: usize, pick: usize) -> Option<BaseMorphism> {
    let homs = site.homs(m, n).unwrap();
    (!homs.is_empty()).then(|| homs[pick % homs.len()].clone())
}

pub fn cube(cat: &CubeCat, m: usize, n: usize, pick: usize) -> CubeMorphism {
    let homs = cat.homs(m, n);
    homs.get(pick % homs.len()).clone()
}

pub fn seeds() -> impl Strategy<Value = (usize, [usize; 4], [usize; 4], u64, u64)> {
    (0usize..3, [0usize..4, 0usize..4, 0usize..4, 0usize..4], any::<[usize; 4]>(), any::<u64>(), any::<u64>())
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}
