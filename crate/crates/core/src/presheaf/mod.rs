//! Degree-truncated presheaves over □(R) and their natural transformations.
//!
//! A presheaf stores, for every pair of degrees `k, n ≤ D`, the action of each
//! morphism `m: k → n` as a table `X(n) → X(k)`, indexed by the position of `m`
//! in the enumerated hom-set of the shared [`CubeCat`].

pub mod colimit;
pub mod io;
pub mod skeleton;
pub mod tensor;
pub mod verify;

use std::fmt;
use std::sync::Arc;

use crate::cube::{CubeCat, CubeMorphism};
use crate::error::{Error, Result};
use crate::site::Site;

pub use colimit::{colimit, induced_map, Colimit, Diagram};
pub use skeleton::{
    attachment_square, boundary, boundary_coequalizer, dimension, nondegenerate_decompose, skeleton, Attachment,
    Decomposition,
};
pub use tensor::{cylinder, is_homotopy, representable_tensor_iso, tensor, tensor_map, Cylinder, Tensor};

#[derive(Clone)]
pub struct Presheaf {
    cat: Arc<CubeCat>,
    d: usize,
    cells: Vec<Vec<String>>,
    /// `act[n][k][m * |X(n)| + x]` is `x·m` for the `m`-th morphism of `hom(k, n)`.
    act: Vec<Vec<Vec<u32>>>,
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        self.site().label() == other.site().label()
            && self.d == other.d
            && self.cells == other.cells
            && self.act == other.act
    }
}

impl fmt::Debug for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presheaf[{}, D={}, cells={:?}]", self.site().label(), self.d, self.counts())
    }
}

impl Presheaf {
    /// Builds the action tables from `action(n, k, m, x) = x·m`; functoriality is not checked.
    pub(crate) fn build(
        cat: &Arc<CubeCat>,
        d: usize,
        cells: Vec<Vec<String>>,
        mut action: impl FnMut(usize, usize, usize, usize) -> usize,
    ) -> Result<Self> {
        if d > cat.bound() {
            return Err(Error::Truncation { needed: d, bound: cat.bound() });
        }
        if cells.len() != d + 1 {
            return Err(Error::Schema(format!("expected cell sets for degrees 0..={d}, found {}", cells.len())));
        }
        let mut act = Vec::with_capacity(d + 1);
        for n in 0..=d {
            let mut row = Vec::with_capacity(d + 1);
            for k in 0..=d {
                let homs = cat.homs(k, n).len();
                let mut t = Vec::with_capacity(homs * cells[n].len());
                for m in 0..homs {
                    for x in 0..cells[n].len() {
                        let y = action(n, k, m, x);
                        if y >= cells[k].len() {
                            return Err(Error::Schema(format!("action lands outside X({k})")));
                        }
                        t.push(y as u32);
                    }
                }
                row.push(t);
            }
            act.push(row);
        }
        Ok(Presheaf { cat: cat.clone(), d, cells, act })
    }

    /// Builds from an action function and checks functoriality.
    pub fn from_fn(
        cat: &Arc<CubeCat>,
        d: usize,
        cells: Vec<Vec<String>>,
        action: impl FnMut(usize, usize, usize, usize) -> usize,
    ) -> Result<Self> {
        let p = Presheaf::build(cat, d, cells, action)?;
        p.check_functoriality()?;
        Ok(p)
    }

    pub fn empty(cat: &Arc<CubeCat>, d: usize) -> Result<Self> {
        Presheaf::build(cat, d, vec![Vec::new(); d + 1], |_, _, _, _| 0)
    }

    /// `□[r]`: cells `hom(n, r)`, acting by precomposition.
    pub fn representable(cat: &Arc<CubeCat>, r: usize, d: usize) -> Result<Self> {
        cat.check(r)?;
        if r > d {
            return Err(Error::Truncation { needed: r, bound: d });
        }
        cat.check(d)?;
        let cells = (0..=d).map(|n| cat.homs(n, r).items().iter().map(|m| m.to_string()).collect()).collect();
        Presheaf::build(cat, d, cells, |n, k, m, x| cat.compose_idx(k, n, r, x, m))
    }

    pub fn cat(&self) -> &Arc<CubeCat> {
        &self.cat
    }

    pub fn site(&self) -> &Site {
        self.cat.site()
    }

    pub fn max_degree(&self) -> usize {
        self.d
    }

    pub fn cells(&self, n: usize) -> &[String] {
        &self.cells[n]
    }

    pub fn count(&self, n: usize) -> usize {
        self.cells[n].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    pub fn cell_index(&self, n: usize, name: &str) -> Option<usize> {
        self.cells.get(n)?.iter().position(|c| c == name)
    }

    /// `x·m` for `x ∈ X(n)` and the `m`-th morphism of `hom(k, n)`.
    pub fn act_idx(&self, n: usize, k: usize, m: usize, x: usize) -> usize {
        self.act[n][k][m * self.cells[n].len() + x] as usize
    }

    pub fn act(&self, x: usize, m: &CubeMorphism) -> Result<usize> {
        let (k, n) = (m.src(), m.dst());
        if n > self.d || k > self.d {
            return Err(Error::Truncation { needed: n.max(k), bound: self.d });
        }
        if x >= self.count(n) {
            return Err(Error::InvalidMorphism(format!("no cell {x} in degree {n}")));
        }
        let mi = self.cat.homs(k, n).index_of(m).ok_or_else(|| Error::InvalidMorphism(m.to_string()))?;
        Ok(self.act_idx(n, k, mi, x))
    }

    /// The restriction to degrees `≤ k`.
    pub fn truncate(&self, k: usize) -> Presheaf {
        let k = k.min(self.d);
        let act = self.act[..=k].iter().map(|row| row[..=k].to_vec()).collect();
        Presheaf { cat: self.cat.clone(), d: k, cells: self.cells[..=k].to_vec(), act }
    }

    pub(crate) fn same_site(&self, other: &Presheaf) -> Result<()> {
        if self.site().label() != other.site().label() || self.d != other.d {
            return Err(Error::Diagram(format!(
                "presheaves over {} (D={}) and {} (D={})",
                self.site().label(),
                self.d,
                other.site().label(),
                other.d
            )));
        }
        Ok(())
    }

    /// Identities act trivially and `x·(g∘f) = (x·g)·f` for every composable pair.
    pub fn check_functoriality(&self) -> Result<()> {
        let cat = &self.cat;
        for n in 0..=self.d {
            let id = cat.identity_index(n);
            for x in 0..self.count(n) {
                if self.act_idx(n, n, id, x) != x {
                    return Err(Error::Functoriality(format!("identity of {n} moves cell {}", self.cells[n][x])));
                }
            }
        }
        for a in 0..=self.d {
            for b in 0..=self.d {
                for c in 0..=self.d {
                    let (nab, nbc) = (cat.homs(a, b).len(), cat.homs(b, c).len());
                    for g in 0..nbc {
                        for f in 0..nab {
                            let gf = cat.compose_idx(a, b, c, g, f);
                            for x in 0..self.count(c) {
                                if self.act_idx(c, a, gf, x) != self.act_idx(b, a, f, self.act_idx(c, b, g, x)) {
                                    return Err(Error::Functoriality(format!(
                                        "cell {} with g = {}, f = {}",
                                        self.cells[c][x],
                                        cat.homs(b, c).get(g),
                                        cat.homs(a, b).get(f)
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The subpresheaf on the kept cells, with its inclusion.
    pub fn subpresheaf(self: &Arc<Self>, keep: &[Vec<bool>]) -> Result<PresheafMap> {
        let mut new_index: Vec<Vec<Option<usize>>> = Vec::with_capacity(self.d + 1);
        let mut cells = Vec::with_capacity(self.d + 1);
        let mut back = Vec::with_capacity(self.d + 1);
        for n in 0..=self.d {
            let mut idx = vec![None; self.count(n)];
            let mut names = Vec::new();
            let mut b = Vec::new();
            for x in 0..self.count(n) {
                if keep[n][x] {
                    idx[x] = Some(names.len());
                    names.push(self.cells[n][x].clone());
                    b.push(x as u32);
                }
            }
            new_index.push(idx);
            cells.push(names);
            back.push(b);
        }
        for n in 0..=self.d {
            for k in 0..=self.d {
                for m in 0..self.cat.homs(k, n).len() {
                    for &x in &back[n] {
                        if !keep[k][self.act_idx(n, k, m, x as usize)] {
                            return Err(Error::Diagram(format!(
                                "cell {} acted on by {} leaves the subpresheaf",
                                self.cells[n][x as usize],
                                self.cat.homs(k, n).get(m)
                            )));
                        }
                    }
                }
            }
        }
        let sub = Presheaf::build(&self.cat, self.d, cells, |n, k, m, x| {
            new_index[k][self.act_idx(n, k, m, back[n][x] as usize)].expect("closed")
        })?;
        Ok(PresheafMap { source: Arc::new(sub), target: self.clone(), cells: back })
    }
}

/// A natural transformation, given degreewise by cell maps.
#[derive(Clone, Debug, PartialEq)]
pub struct PresheafMap {
    pub source: Arc<Presheaf>,
    pub target: Arc<Presheaf>,
    pub cells: Vec<Vec<u32>>,
}

impl PresheafMap {
    pub fn new(source: Arc<Presheaf>, target: Arc<Presheaf>, cells: Vec<Vec<u32>>) -> Result<Self> {
        source.same_site(&target)?;
        if cells.len() != source.d + 1 || (0..=source.d).any(|n| cells[n].len() != source.count(n)) {
            return Err(Error::Diagram("cell map does not cover the source".into()));
        }
        if (0..=source.d).any(|n| cells[n].iter().any(|&y| y as usize >= target.count(n))) {
            return Err(Error::Diagram("cell map lands outside the target".into()));
        }
        let map = PresheafMap { source, target, cells };
        map.check_naturality()?;
        Ok(map)
    }

    pub fn from_fn(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let cells = (0..=source.d).map(|n| (0..source.count(n)).map(|x| f(n, x) as u32).collect()).collect();
        PresheafMap::new(source, target, cells)
    }

    pub fn identity(x: &Arc<Presheaf>) -> Self {
        let cells = (0..=x.d).map(|n| (0..x.count(n) as u32).collect()).collect();
        PresheafMap { source: x.clone(), target: x.clone(), cells }
    }

    /// The unique map out of the empty presheaf.
    pub fn from_empty(source: Arc<Presheaf>, target: Arc<Presheaf>) -> Result<Self> {
        if !source.is_empty() {
            return Err(Error::Diagram("source is not empty".into()));
        }
        PresheafMap::new(source, target.clone(), vec![Vec::new(); target.d + 1])
    }

    /// Postcomposition `□[r] → □[s]` with `g: r → s`.
    pub fn postcompose(source: &Arc<Presheaf>, target: &Arc<Presheaf>, g: &CubeMorphism) -> Result<Self> {
        let cat = source.cat().clone();
        let (r, s) = (g.src(), g.dst());
        let gi = cat.try_homs(r, s)?.index_of(g).ok_or_else(|| Error::InvalidMorphism(g.to_string()))?;
        for (p, deg) in [(source, r), (target, s)] {
            if (0..=p.d).any(|n| p.count(n) != cat.homs(n, deg).len()) {
                return Err(Error::Diagram(format!("expected the representable on {deg}")));
            }
        }
        PresheafMap::from_fn(source.clone(), target.clone(), |n, x| cat.compose_idx(n, r, s, gi, x))
    }

    pub fn truncate(&self, k: usize) -> PresheafMap {
        let k = k.min(self.source.d);
        PresheafMap {
            source: Arc::new(self.source.truncate(k)),
            target: Arc::new(self.target.truncate(k)),
            cells: self.cells[..=k].to_vec(),
        }
    }

    pub fn apply(&self, n: usize, x: usize) -> usize {
        self.cells[n][x] as usize
    }

    pub fn check_naturality(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        let cat = s.cat();
        for n in 0..=s.d {
            for k in 0..=s.d {
                for m in 0..cat.homs(k, n).len() {
                    for x in 0..s.count(n) {
                        let lhs = self.apply(k, s.act_idx(n, k, m, x));
                        let rhs = t.act_idx(n, k, m, self.apply(n, x));
                        if lhs != rhs {
                            return Err(Error::Diagram(format!(
                                "naturality fails at cell {} and {}",
                                s.cells[n][x],
                                cat.homs(k, n).get(m)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PresheafMap) -> Result<Self> {
        if *inner.target != *self.source {
            return Err(Error::NotComposable("presheaf maps".into()));
        }
        let cells = inner.cells.iter().zip(&self.cells).map(|(a, b)| a.iter().map(|&x| b[x as usize]).collect()).collect();
        Ok(PresheafMap { source: inner.source.clone(), target: self.target.clone(), cells })
    }

    pub fn image(&self) -> Vec<Vec<bool>> {
        (0..=self.target.d)
            .map(|n| {
                let mut hit = vec![false; self.target.count(n)];
                for &y in &self.cells[n] {
                    hit[y as usize] = true;
                }
                hit
            })
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        self.cells.iter().zip(self.image()).all(|(c, img)| img.iter().filter(|&&b| b).count() == c.len())
    }

    pub fn is_surjective(&self) -> bool {
        self.image().iter().all(|img| img.iter().all(|&b| b))
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}
