//! The convolution tensor `X ⊗ Y = ∫^{p,q} □(−, p⊗q) × X(p) × Y(q)` and cylinders.

use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::cube::{cube_compose_unchecked, iota1, iota_dagger, tensor_mor, CubeCat, CubeMorphism};
use crate::error::{Error, Result};
use crate::presheaf::{dimension, nondegenerate_decompose, Presheaf, PresheafMap};
use crate::site::{BaseMorphism, SiteKind, Subset};

/// An element `(φ, x, y)` with `φ: t → p+q`, `x ∈ X(p)`, `y ∈ Y(q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Element {
    pub p: usize,
    pub q: usize,
    pub phi: usize,
    pub x: usize,
    pub y: usize,
}

pub struct Tensor {
    pub object: Arc<Presheaf>,
    pub left: Arc<Presheaf>,
    pub right: Arc<Presheaf>,
    /// The factors restricted to their dimensions.
    skel_left: Arc<Presheaf>,
    skel_right: Arc<Presheaf>,
    offsets: Vec<Vec<Vec<usize>>>,
    class: Vec<Vec<u32>>,
    reps: Vec<Vec<Element>>,
}

/// Morphisms generating `□` up to degree `d`: those between adjacent degrees and the
/// non-trivial automorphisms.
pub fn generators(cat: &CubeCat, d: usize) -> Vec<Vec<Vec<usize>>> {
    (0..=d)
        .map(|a| {
            (0..=d)
                .map(|b| {
                    let homs = cat.homs(a, b).items();
                    (0..homs.len())
                        .filter(|&i| a.abs_diff(b) == 1 || (a == b && homs[i].is_iso() && !homs[i].is_identity()))
                        .collect()
                })
                .collect()
        })
        .collect()
}

impl Tensor {
    fn index(&self, t: usize, e: Element) -> usize {
        self.offsets[t][e.p][e.q] + (e.phi * self.skel_left.count(e.p) + e.x) * self.skel_right.count(e.q) + e.y
    }

    pub fn class_of(&self, t: usize, e: Element) -> usize {
        self.class[t][self.index(t, e)] as usize
    }

    /// Like [`Tensor::class_of`], first moving degeneracies of cells above the
    /// factor dimensions into `φ`.
    pub fn class_of_any(&self, t: usize, mut e: Element) -> Result<usize> {
        let cat = self.object.cat();
        let site = cat.site();
        if e.p > self.skel_left.max_degree() {
            let dec = nondegenerate_decompose(&self.left, e.p, e.x)?;
            let s = tensor_mor(site, &dec.sigma, &CubeMorphism::identity(site, e.q))?;
            let phi = cube_compose_unchecked(site, &s, cat.homs(t, e.p + e.q).get(e.phi));
            e = Element { p: dec.degree, x: dec.core, phi: cat.try_homs(t, dec.degree + e.q)?.index_of(&phi).expect("enumerated"), ..e };
        }
        if e.q > self.skel_right.max_degree() {
            let dec = nondegenerate_decompose(&self.right, e.q, e.y)?;
            let s = tensor_mor(site, &CubeMorphism::identity(site, e.p), &dec.sigma)?;
            let phi = cube_compose_unchecked(site, &s, cat.homs(t, e.p + e.q).get(e.phi));
            e = Element { q: dec.degree, y: dec.core, phi: cat.try_homs(t, e.p + dec.degree)?.index_of(&phi).expect("enumerated"), ..e };
        }
        Ok(self.class_of(t, e))
    }

    pub fn representative(&self, t: usize, c: usize) -> Element {
        self.reps[t][c]
    }

    pub fn elements(&self, t: usize) -> impl Iterator<Item = Element> + '_ {
        let cat = self.object.cat().clone();
        let (dl, dr) = (self.skel_left.max_degree(), self.skel_right.max_degree());
        (0..=dl).flat_map(move |p| (0..=dr).map(move |q| (p, q))).flat_map(move |(p, q)| {
            let homs = cat.homs(t, p + q).len();
            let (nx, ny) = (self.skel_left.count(p), self.skel_right.count(q));
            (0..homs * nx * ny).map(move |i| Element { p, q, phi: i / (nx * ny), x: (i / ny) % nx, y: i % ny })
        })
    }

    /// The map out of the coend given on elements; checks it is constant on classes.
    pub fn induced(&self, target: Arc<Presheaf>, f: impl Fn(usize, Element) -> usize) -> Result<PresheafMap> {
        self.try_induced(target, |t, e| Ok(f(t, e)))
    }

    pub fn try_induced(&self, target: Arc<Presheaf>, f: impl Fn(usize, Element) -> Result<usize>) -> Result<PresheafMap> {
        let d = self.object.max_degree();
        let mut cells = Vec::with_capacity(d + 1);
        for t in 0..=d {
            let mut row: Vec<Option<u32>> = vec![None; self.object.count(t)];
            for e in self.elements(t) {
                let c = self.class_of(t, e);
                let v = f(t, e)? as u32;
                match row[c] {
                    Some(w) if w != v => {
                        return Err(Error::Diagram(format!("map is not constant on {}", self.object.cells(t)[c])))
                    }
                    _ => row[c] = Some(v),
                }
            }
            cells.push(row.into_iter().map(|v| v.expect("classes are inhabited")).collect());
        }
        PresheafMap::new(self.object.clone(), target, cells)
    }
}

pub fn tensor(x: &Arc<Presheaf>, y: &Arc<Presheaf>) -> Result<Tensor> {
    tensor_truncated(x, y, x.max_degree().max(y.max_degree()))
}

/// `X` restricted to its dimension, which loses nothing for a coend.
fn skeletal(x: &Arc<Presheaf>) -> Result<Arc<Presheaf>> {
    let k = dimension(x)?.unwrap_or(0);
    Ok(if k == x.max_degree() { x.clone() } else { Arc::new(x.truncate(k)) })
}

/// `X ⊗ Y` truncated at `d_out`; needs the category up to `dim X + dim Y`.
pub fn tensor_truncated(x: &Arc<Presheaf>, y: &Arc<Presheaf>, d_out: usize) -> Result<Tensor> {
    let (left, right) = (x.clone(), y.clone());
    let (x, y) = (&skeletal(x)?, &skeletal(y)?);
    let cat = x.cat().clone();
    let site = cat.site().clone();
    if site.label() != y.site().label() {
        return Err(Error::Diagram("tensor factors live over different sites".into()));
    }
    let e0 = CubeMorphism::identity(&site, 0);
    tensor_mor(&site, &e0, &e0)?;
    let (dl, dr) = (x.max_degree(), y.max_degree());
    let needed = (dl + dr).max(d_out);
    if needed > cat.bound() {
        return Err(Error::Truncation { needed, bound: cat.bound() });
    }

    let mut offsets = vec![vec![vec![0usize; dr + 1]; dl + 1]; d_out + 1];
    let mut sizes = vec![0usize; d_out + 1];
    for t in 0..=d_out {
        for p in 0..=dl {
            for q in 0..=dr {
                offsets[t][p][q] = sizes[t];
                sizes[t] += cat.homs(t, p + q).len() * x.count(p) * y.count(q);
            }
        }
    }
    let idx = |t: usize, e: Element| offsets[t][e.p][e.q] + (e.phi * x.count(e.p) + e.x) * y.count(e.q) + e.y;

    let gl = generators(&cat, dl);
    let gr = generators(&cat, dr);
    let mut uf: Vec<UnionFind<usize>> = sizes.iter().map(|&s| UnionFind::new(s)).collect();
    for q in 0..=dr {
        let idq = CubeMorphism::identity(&site, q);
        for p0 in 0..=dl {
            for p in 0..=dl {
                for &ai in &gl[p0][p] {
                    let a = tensor_mor(&site, cat.homs(p0, p).get(ai), &idq)?;
                    for t in 0..=d_out {
                        let src = cat.homs(t, p0 + q);
                        let dst = cat.homs(t, p + q);
                        for (phi, f) in src.items().iter().enumerate() {
                            let moved = dst.index_of(&cube_compose_unchecked(&site, &a, f)).expect("composite is enumerated");
                            for xi in 0..x.count(p) {
                                let xa = x.act_idx(p, p0, ai, xi);
                                for yi in 0..y.count(q) {
                                    let l = idx(t, Element { p: p0, q, phi, x: xa, y: yi });
                                    let r = idx(t, Element { p, q, phi: moved, x: xi, y: yi });
                                    uf[t].union(l, r);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for p in 0..=dl {
        let idp = CubeMorphism::identity(&site, p);
        for q0 in 0..=dr {
            for q in 0..=dr {
                for &bi in &gr[q0][q] {
                    let b = tensor_mor(&site, &idp, cat.homs(q0, q).get(bi))?;
                    for t in 0..=d_out {
                        let src = cat.homs(t, p + q0);
                        let dst = cat.homs(t, p + q);
                        for (phi, f) in src.items().iter().enumerate() {
                            let moved = dst.index_of(&cube_compose_unchecked(&site, &b, f)).expect("composite is enumerated");
                            for yi in 0..y.count(q) {
                                let yb = y.act_idx(q, q0, bi, yi);
                                for xi in 0..x.count(p) {
                                    let l = idx(t, Element { p, q: q0, phi, x: xi, y: yb });
                                    let r = idx(t, Element { p, q, phi: moved, x: xi, y: yi });
                                    uf[t].union(l, r);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let decode = |t: usize, i: usize| -> Element {
        for p in 0..=dl {
            for q in 0..=dr {
                let (nx, ny) = (x.count(p), y.count(q));
                let o = offsets[t][p][q];
                if i >= o && i < o + cat.homs(t, p + q).len() * nx * ny {
                    let j = i - o;
                    return Element { p, q, phi: j / (nx * ny), x: (j / ny) % nx, y: j % ny };
                }
            }
        }
        unreachable!("index within the element range")
    };
    let mut class = Vec::with_capacity(d_out + 1);
    let mut reps = Vec::with_capacity(d_out + 1);
    for (t, u) in uf.iter_mut().enumerate() {
        let mut root_class = vec![u32::MAX; sizes[t]];
        let mut c = vec![0u32; sizes[t]];
        let mut r = Vec::new();
        for i in 0..sizes[t] {
            let root = u.find_mut(i);
            if root_class[root] == u32::MAX {
                root_class[root] = r.len() as u32;
                r.push(decode(t, i));
            }
            c[i] = root_class[root];
        }
        class.push(c);
        reps.push(r);
    }
    let cells: Vec<Vec<String>> = reps
        .iter()
        .enumerate()
        .map(|(t, r)| {
            r.iter()
                .map(|e| format!("[{}|{}|{}]", cat.homs(t, e.p + e.q).get(e.phi), x.cells(e.p)[e.x], y.cells(e.q)[e.y]))
                .collect()
        })
        .collect();
    let object = Presheaf::build(&cat, d_out, cells, |t, k, m, c| {
        let e = reps[t][c];
        let phi = cat.compose_idx(k, t, e.p + e.q, e.phi, m);
        class[k][idx(k, Element { phi, ..e })] as usize
    })?;
    Ok(Tensor { object: Arc::new(object), left, right, skel_left: x.clone(), skel_right: y.clone(), offsets, class, reps })
}

/// `f ⊗ g: X ⊗ Y → X′ ⊗ Y′`.
pub fn tensor_map(src: &Tensor, dst: &Tensor, f: &PresheafMap, g: &PresheafMap) -> Result<PresheafMap> {
    let fits = |m: &PresheafMap, from: &Presheaf, to: &Presheaf| *m.source == *from && *m.target == *to;
    if !fits(f, &src.left, &dst.left) || !fits(g, &src.right, &dst.right) {
        return Err(Error::Diagram("tensor factors do not match the maps".into()));
    }
    src.try_induced(dst.object.clone(), |t, e| dst.class_of_any(t, Element { x: f.apply(e.p, e.x), y: g.apply(e.q, e.y), ..e }))
}

fn representable_on(p: &Presheaf, r: usize) -> Result<()> {
    let cat = p.cat();
    if (0..=p.max_degree()).any(|n| p.count(n) != cat.homs(n, r).len()) {
        return Err(Error::Diagram(format!("expected the representable on {r}")));
    }
    Ok(())
}

/// `□[m] ⊗ □[n] → □[m+n]`, `[φ, x, y] ↦ (x⊗y)∘φ`.
pub fn representable_tensor_iso(t: &Tensor, m: usize, n: usize) -> Result<PresheafMap> {
    representable_on(&t.left, m)?;
    representable_on(&t.right, n)?;
    let cat = t.object.cat().clone();
    let site = cat.site().clone();
    let target = Arc::new(Presheaf::representable(&cat, m + n, t.object.max_degree())?);
    t.induced(target, |s, e| {
        let xy = tensor_mor(&site, cat.homs(e.p, m).get(e.x), cat.homs(e.q, n).get(e.y)).expect("site is monoidal");
        let c = cube_compose_unchecked(&site, &xy, cat.homs(s, e.p + e.q).get(e.phi));
        cat.homs(s, m + n).index_of(&c).expect("composite is enumerated")
    })
}

pub struct Cylinder {
    /// `X ⊗ □[1]`.
    pub tensor: Tensor,
    pub iota0: PresheafMap,
    pub iota1: PresheafMap,
    /// `Cyl X → X`, induced by `□[1] → □[0]`.
    pub retraction: PresheafMap,
}

pub fn cylinder(x: &Arc<Presheaf>) -> Result<Cylinder> {
    let cat = x.cat().clone();
    let site = cat.site().clone();
    let d = x.max_degree();
    let interval = Arc::new(Presheaf::representable(&cat, 1, 1)?);
    let tensor = tensor_truncated(x, &interval, d)?;
    let vertex = |top: bool| {
        let xi = if top { Subset::full(1) } else { Subset::empty(1) };
        let v = CubeMorphism::face(&site, Subset::empty(1), xi).expect("vertex of the interval");
        cat.homs(0, 1).index_of(&v).expect("vertex is enumerated")
    };
    let include = |top: bool| {
        let v = vertex(top);
        let cells = (0..=d)
            .map(|n| {
                (0..x.count(n))
                    .map(|c| Ok(tensor.class_of_any(n, Element { p: n, q: 0, phi: cat.identity_index(n), x: c, y: v })? as u32))
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PresheafMap::new(x.clone(), tensor.object.clone(), cells)
    };
    let (iota0, iota1) = (include(false)?, include(true)?);
    let retraction = tensor.induced(x.clone(), |t, e| {
        let bang = tensor_mor(&site, &CubeMorphism::identity(&site, e.p), cat.homs(e.q, 0).get(0)).expect("monoidal");
        let c = cube_compose_unchecked(&site, &bang, cat.homs(t, e.p + e.q).get(e.phi));
        x.act_idx(e.p, t, cat.homs(t, e.p).index_of(&c).expect("enumerated"), e.x)
    })?;
    Ok(Cylinder { tensor, iota0, iota1, retraction })
}

/// `h ∘ ι⁰ = f₀` and `h ∘ ι¹ = f₁`, cellwise.
pub fn is_homotopy(cyl: &Cylinder, h: &PresheafMap, f0: &PresheafMap, f1: &PresheafMap) -> Result<bool> {
    if *h.source != *cyl.tensor.object {
        return Err(Error::Diagram("homotopy is not defined on the cylinder".into()));
    }
    Ok(h.compose(&cyl.iota0)? == *f0 && h.compose(&cyl.iota1)? == *f1)
}

/// On `Cyl □[n]` over the connection site, `[φ, x, y] ↦ σ∘(x⊗y)∘φ` with `σ` the
/// connection merging the last two coordinates. Returns the homotopy and its
/// endpoints `id` and `ι¹ι†` as maps `□[n] → □[n]`.
pub fn connection_homotopy(cyl: &Cylinder, n: usize) -> Result<(PresheafMap, PresheafMap, PresheafMap)> {
    let x = cyl.tensor.left.clone();
    representable_on(&x, n)?;
    let cat = x.cat().clone();
    let site = cat.site().clone();
    if site.kind() != SiteKind::Connections || n == 0 {
        return Err(Error::InvalidMorphism("the connection homotopy needs □ᶜ and n ≥ 1".into()));
    }
    let map: Vec<usize> = (0..=n).map(|i| i.min(n - 1)).collect();
    let sigma = CubeMorphism::base(BaseMorphism::new(n, map, 0));
    let h = cyl.tensor.induced(x.clone(), |t, e| {
        let xy = tensor_mor(&site, cat.homs(e.p, n).get(e.x), cat.homs(e.q, 1).get(e.y)).expect("monoidal");
        let c = cube_compose_unchecked(&site, &sigma, &cube_compose_unchecked(&site, &xy, cat.homs(t, e.p + e.q).get(e.phi)));
        cat.homs(t, n).index_of(&c).expect("enumerated")
    })?;
    let end = cube_compose_unchecked(&site, &iota1(&site, n - 1), &iota_dagger(&site, n - 1));
    let f1 = PresheafMap::postcompose(&x, &x, &end)?;
    Ok((h, PresheafMap::identity(&x), f1))
}
