//! The simplicial realization `∫^r X(r) × N(2^r)`.

use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::cube::cube_pushforward_unchecked;
use crate::error::{Error, Result};
use crate::presheaf::tensor::generators;
use crate::presheaf::{Presheaf, PresheafMap, Tensor};
use crate::site::Subset;
use crate::topology::{chain_count, chain_degeneracy, chain_face, chain_index, chain_masks, SimplicialMap, SimplicialSet};

/// A simplex of the coend before the quotient: a cell `x ∈ X(r)` and a chain in `2^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Point {
    pub r: usize,
    pub x: usize,
    pub chain: usize,
}

pub struct Realization {
    pub set: Arc<SimplicialSet>,
    pub source: Arc<Presheaf>,
    offsets: Vec<Vec<usize>>,
    class: Vec<Vec<u32>>,
    reps: Vec<Vec<Point>>,
}

impl Realization {
    fn index(&self, k: usize, p: Point) -> usize {
        self.offsets[k][p.r] + p.x * chain_count(p.r, k) + p.chain
    }

    pub fn class_of(&self, k: usize, p: Point) -> usize {
        self.class[k][self.index(k, p)] as usize
    }

    pub fn representative(&self, k: usize, s: usize) -> Point {
        self.reps[k][s]
    }

    fn points(&self, k: usize) -> impl Iterator<Item = Point> + '_ {
        let x = &self.source;
        (0..=x.max_degree())
            .flat_map(move |r| (0..x.count(r)).flat_map(move |c| (0..chain_count(r, k)).map(move |chain| Point { r, x: c, chain })))
    }

    /// The simplicial map given on points; checks it is constant on classes.
    pub fn induced(&self, target: Arc<SimplicialSet>, f: impl Fn(usize, Point) -> Result<usize>) -> Result<SimplicialMap> {
        let mut cells = Vec::with_capacity(self.set.dimension() + 1);
        for k in 0..=self.set.dimension() {
            let mut row = vec![u32::MAX; self.set.count(k)];
            for p in self.points(k) {
                let c = self.class_of(k, p);
                let v = f(k, p)? as u32;
                if row[c] != u32::MAX && row[c] != v {
                    return Err(Error::Diagram(format!("map is not constant on the class of simplex {c} in dimension {k}")));
                }
                row[c] = v;
            }
            cells.push(row);
        }
        SimplicialMap::new(self.set.clone(), target, cells)
    }
}

/// Pushes every chain of `2^{r'}` forward along `m : r' → r`.
fn push_table(masks: &[u64], k: usize, r_src: usize, r_dst: usize) -> Vec<usize> {
    (0..chain_count(r_src, k))
        .map(|c| chain_index(r_dst, &chain_masks(r_src, k, c).iter().map(|&s| masks[s as usize]).collect::<Vec<_>>()))
        .collect()
}

/// Realizes `X` up to simplicial dimension `dim`.
pub fn realize(x: &Arc<Presheaf>, dim: usize) -> Result<Realization> {
    let cat = x.cat();
    let site = cat.site();
    let d = x.max_degree();
    let gens = generators(cat, d);
    let mut offsets = Vec::with_capacity(dim + 1);
    let mut class = Vec::with_capacity(dim + 1);
    let mut reps = Vec::with_capacity(dim + 1);
    for k in 0..=dim {
        let mut off = vec![0usize; d + 2];
        for r in 0..=d {
            off[r + 1] = off[r] + x.count(r) * chain_count(r, k);
        }
        let mut uf = UnionFind::<usize>::new(off[d + 1]);
        for r in 0..=d {
            for rs in 0..=d {
                for &m in &gens[rs][r] {
                    let morphism = cat.homs(rs, r).get(m);
                    let masks: Vec<u64> = (0..1u64 << rs)
                        .map(|s| cube_pushforward_unchecked(site, morphism, Subset::new(rs, s).expect("in range")).mask())
                        .collect();
                    let push = push_table(&masks, k, rs, r);
                    for c in 0..x.count(r) {
                        let xm = x.act_idx(r, rs, m, c);
                        for (chain, &pushed) in push.iter().enumerate() {
                            uf.union(off[rs] + xm * chain_count(rs, k) + chain, off[r] + c * chain_count(r, k) + pushed);
                        }
                    }
                }
            }
        }
        let mut root_class = vec![u32::MAX; off[d + 1]];
        let mut cls = vec![0u32; off[d + 1]];
        let mut rep = Vec::new();
        for r in 0..=d {
            for c in 0..x.count(r) {
                for chain in 0..chain_count(r, k) {
                    let i = off[r] + c * chain_count(r, k) + chain;
                    let root = uf.find_mut(i);
                    if root_class[root] == u32::MAX {
                        root_class[root] = rep.len() as u32;
                        rep.push(Point { r, x: c, chain });
                    }
                    cls[i] = root_class[root];
                }
            }
        }
        offsets.push(off);
        class.push(cls);
        reps.push(rep);
    }
    let lookup = |k: usize, p: Point| class[k][offsets[k][p.r] + p.x * chain_count(p.r, k) + p.chain] as usize;
    let set = SimplicialSet::from_fn(
        dim,
        reps.iter().map(Vec::len).collect(),
        |k, i, s| {
            let p = reps[k][s];
            lookup(k - 1, Point { chain: chain_face(p.r, k, i, p.chain), ..p })
        },
        |k, i, s| {
            let p = reps[k][s];
            lookup(k + 1, Point { chain: chain_degeneracy(p.r, k, i, p.chain), ..p })
        },
    )?;
    Ok(Realization { set: Arc::new(set), source: x.clone(), offsets, class, reps })
}

/// `|f| : |X| → |Y|` between realizations of the same dimension.
pub fn realize_map(src: &Realization, dst: &Realization, f: &PresheafMap) -> Result<SimplicialMap> {
    if *f.source != *src.source || *f.target != *dst.source {
        return Err(Error::Diagram("map does not match the realized presheaves".into()));
    }
    if src.set.dimension() != dst.set.dimension() {
        return Err(Error::DegreeMismatch { expected: src.set.dimension(), found: dst.set.dimension() });
    }
    src.induced(dst.set.clone(), |k, p| Ok(dst.class_of(k, Point { x: f.apply(p.r, p.x), ..p })))
}

/// `|X ⊗ Y| → |X| × |Y|`, splitting the chain pushed along `φ : t → p+q` into its two
/// coordinate blocks. Returns the realization of the tensor, the product and the map.
pub fn realize_tensor_comparison(t: &Tensor, dim: usize) -> Result<(Realization, Arc<SimplicialSet>, SimplicialMap)> {
    let cat = t.object.cat().clone();
    let site = cat.site().clone();
    let whole = realize(&t.object, dim)?;
    let (left, right) = (realize(&t.left, dim)?, realize(&t.right, dim)?);
    let product = Arc::new(left.set.product(&right.set)?);
    let ny: Vec<usize> = (0..=dim).map(|k| right.set.count(k)).collect();
    let map = whole.induced(product.clone(), |k, pt| {
        let e = t.representative(pt.r, pt.x);
        let phi = cat.homs(pt.r, e.p + e.q).get(e.phi);
        let pushed: Vec<u64> = chain_masks(pt.r, k, pt.chain)
            .iter()
            .map(|&s| cube_pushforward_unchecked(&site, phi, Subset::new(pt.r, s).expect("in range")).mask())
            .collect();
        let low = (1u64 << e.p) - 1;
        let a: Vec<u64> = pushed.iter().map(|s| s & low).collect();
        let b: Vec<u64> = pushed.iter().map(|s| s >> e.p).collect();
        let ca = left.class_of(k, Point { r: e.p, x: e.x, chain: chain_index(e.p, &a) });
        let cb = right.class_of(k, Point { r: e.q, x: e.y, chain: chain_index(e.q, &b) });
        Ok(ca * ny[k] + cb)
    })?;
    Ok((whole, product, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::CubeCat;
    use crate::presheaf::boundary;
    use crate::site::Site;
    use crate::topology::{homology, nerve_boolean};

    #[test]
    fn representable_realizes_to_the_cube() {
        for site in [Site::plain(), Site::connections()] {
            let cat = CubeCat::shared(site, 2);
            for n in 0..=2 {
                let rep = Arc::new(Presheaf::representable(&cat, n, 2).unwrap());
                let r = realize(&rep, 3).unwrap();
                assert_eq!(r.set.counts(), nerve_boolean(n, 3).unwrap().counts());
            }
        }
    }

    #[test]
    fn square_boundary_is_a_circle() {
        let cat = CubeCat::shared(Site::plain(), 2);
        let b = boundary(&cat, 2, 2).unwrap();
        let r = realize(&b.source, 2).unwrap();
        let h = homology(&r.set, 1).unwrap();
        assert_eq!(h.iter().map(|g| g.betti).collect::<Vec<_>>(), vec![1, 1]);
        let whole = realize(&b.target, 2).unwrap();
        assert!(realize_map(&r, &whole, &b).unwrap().is_injective());
    }
}
