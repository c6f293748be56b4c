//! Lazily enumerated hom-sets of □(R) with index lookup and composition tables.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::cube::{cube_compose_unchecked, CubeMorphism};
use crate::error::{Error, Result};
use crate::site::Site;
use crate::spans::Span;

pub struct HomSet {
    items: Vec<CubeMorphism>,
    index: HashMap<CubeMorphism, usize>,
}

impl HomSet {
    pub fn items(&self) -> &[CubeMorphism] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, i: usize) -> &CubeMorphism {
        &self.items[i]
    }

    pub fn index_of(&self, m: &CubeMorphism) -> Option<usize> {
        self.index.get(m).copied()
    }
}

pub struct CubeCat {
    site: Site,
    bound: usize,
    homs: Vec<OnceLock<HomSet>>,
    comp: Vec<OnceLock<Vec<u32>>>,
}

/// Every morphism `m → n`, ordered by dagger leg, forward leg, then marker.
pub fn enumerate_homs(site: &Site, m: usize, n: usize) -> Result<Vec<CubeMorphism>> {
    let mut out = Vec::new();
    for span in Span::all(site, m, n)? {
        for xi in span.image().neg().sub_subsets() {
            out.push(CubeMorphism { span: span.clone(), xi });
        }
    }
    Ok(out)
}

impl CubeCat {
    pub fn new(site: Site, bound: usize) -> Self {
        let k = bound + 1;
        CubeCat {
            site,
            bound,
            homs: (0..k * k).map(|_| OnceLock::new()).collect(),
            comp: (0..k * k * k).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn site(&self) -> &Site {
        &self.site
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if n > self.bound {
            return Err(Error::Truncation { needed: n, bound: self.bound });
        }
        self.site.check_degree(n)
    }

    pub fn try_homs(&self, m: usize, n: usize) -> Result<&HomSet> {
        self.check(m)?;
        self.check(n)?;
        Ok(self.homs(m, n))
    }

    /// Panics beyond the bound; use [`CubeCat::try_homs`] for untrusted degrees.
    pub fn homs(&self, m: usize, n: usize) -> &HomSet {
        assert!(m <= self.bound && n <= self.bound, "hom({m},{n}) beyond bound {}", self.bound);
        self.homs[m * (self.bound + 1) + n].get_or_init(|| {
            let items = enumerate_homs(&self.site, m, n).expect("degrees were checked");
            let index = items.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
            HomSet { items, index }
        })
    }

    pub fn index_of(&self, m: &CubeMorphism) -> usize {
        self.homs(m.src(), m.dst()).index_of(m).expect("morphism belongs to its hom-set")
    }

    pub fn identity_index(&self, n: usize) -> usize {
        self.index_of(&CubeMorphism::identity(&self.site, n))
    }

    pub fn compose(&self, outer: &CubeMorphism, inner: &CubeMorphism) -> CubeMorphism {
        cube_compose_unchecked(&self.site, outer, inner)
    }

    /// Index of `g∘f` for `f ∈ hom(a,b)`, `g ∈ hom(b,c)`, via a cached table.
    pub fn compose_idx(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> usize {
        let k = self.bound + 1;
        let nab = self.homs(a, b).len();
        let table = self.comp[(a * k + b) * k + c].get_or_init(|| {
            let (ab, bc, ac) = (self.homs(a, b), self.homs(b, c), self.homs(a, c));
            let mut t = Vec::with_capacity(ab.len() * bc.len());
            for gm in bc.items() {
                for fm in ab.items() {
                    t.push(ac.index_of(&self.compose(gm, fm)).expect("composite is enumerated") as u32);
                }
            }
            t
        });
        table[g * nab + f] as usize
    }

    /// The category truncated at `2d`, wide enough for tensors of `d`-truncated presheaves.
    pub fn shared(site: Site, d: usize) -> Arc<Self> {
        Arc::new(CubeCat::new(site, 2 * d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::hom_count_formula;

    #[test]
    fn small_counts() {
        let c = CubeCat::new(Site::plain(), 3);
        assert_eq!(c.homs(1, 1).len(), 3);
        assert_eq!(c.homs(2, 1).len(), 4);
        for n in 0..=3 {
            assert_eq!(c.homs(0, n).len(), 1 << n);
            assert_eq!(c.homs(n, 0).len(), 1);
        }
        let cc = CubeCat::new(Site::connections(), 2);
        assert_eq!(cc.homs(2, 1).len(), 5);
    }

    #[test]
    fn enumeration_matches_formula() {
        for site in [Site::plain(), Site::connections(), Site::symmetric()] {
            let c = CubeCat::new(site.clone(), 3);
            for m in 0..=3 {
                for n in 0..=3 {
                    assert_eq!(c.homs(m, n).len() as u128, hom_count_formula(&site, m, n).unwrap());
                }
            }
        }
    }

    #[test]
    fn composition_table_agrees() {
        let c = CubeCat::new(Site::connections(), 2);
        for gi in 0..c.homs(1, 2).len() {
            for fi in 0..c.homs(2, 1).len() {
                let direct = c.compose(c.homs(1, 2).get(gi), c.homs(2, 1).get(fi));
                assert_eq!(c.compose_idx(2, 1, 2, gi, fi), c.index_of(&direct));
            }
        }
    }

    #[test]
    fn out_of_bound_is_an_error() {
        let c = CubeCat::new(Site::plain(), 2);
        assert!(c.try_homs(3, 1).is_err());
    }
}
