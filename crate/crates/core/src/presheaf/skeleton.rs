//! Skeleta, boundaries of representables, non-degenerate decompositions and
//! the cell-attachment squares `sk_{n-1} → sk_n`.

use std::sync::Arc;

use crate::cube::{CubeCat, CubeMorphism};
use crate::error::{Error, Result};
use crate::presheaf::colimit::{colimit, coproduct, induced_map, quotient, Colimit, Diagram};
use crate::presheaf::{Presheaf, PresheafMap};
use crate::site::Subset;

/// Inclusion of the cells factoring through degree `≤ n`; negative `n` gives the empty subpresheaf.
pub fn skeleton(x: &Arc<Presheaf>, n: isize) -> Result<PresheafMap> {
    let d = x.max_degree();
    let cat = x.cat();
    let mut keep: Vec<Vec<bool>> = (0..=d).map(|k| vec![(k as isize) <= n; x.count(k)]).collect();
    let top = if n < 0 { 0 } else { (n as usize).min(d) + 1 };
    for j in 0..top {
        for k in (j + 1)..=d {
            for m in 0..cat.homs(k, j).len() {
                for y in 0..x.count(j) {
                    keep[k][x.act_idx(j, k, m, y)] = true;
                }
            }
        }
    }
    x.subpresheaf(&keep)
}

/// The least `k` with `sk_k X = X`; `None` for the empty presheaf.
pub fn dimension(x: &Arc<Presheaf>) -> Result<Option<usize>> {
    if x.is_empty() {
        return Ok(None);
    }
    for k in 0..x.max_degree() {
        if skeleton(x, k as isize)?.is_surjective() {
            return Ok(Some(k));
        }
    }
    Ok(Some(x.max_degree()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    /// A morphism `σγ†` of the degeneracy class with `x = core·sigma`.
    pub sigma: CubeMorphism,
    pub degree: usize,
    pub core: usize,
}

/// The least-degree factorization through a degeneracy, first in enumeration order.
pub fn nondegenerate_decompose(x: &Presheaf, n: usize, cell: usize) -> Result<Decomposition> {
    if n > x.max_degree() || cell >= x.count(n) {
        return Err(Error::InvalidMorphism(format!("no cell {cell} in degree {n}")));
    }
    let cat = x.cat();
    for j in 0..=n {
        for (mi, sigma) in cat.homs(n, j).items().iter().enumerate() {
            if !sigma.is_collapse() {
                continue;
            }
            if let Some(y) = (0..x.count(j)).find(|&y| x.act_idx(j, n, mi, y) == cell) {
                return Ok(Decomposition { sigma: sigma.clone(), degree: j, core: y });
            }
        }
    }
    unreachable!("the identity is a degeneracy")
}

pub fn is_nondegenerate(x: &Presheaf, n: usize, cell: usize) -> bool {
    nondegenerate_decompose(x, n, cell).map(|dec| dec.degree == n).unwrap_or(false)
}

/// `∂□[r] ⊆ □[r]`: cells whose normal form has a proper face `δ`.
pub fn boundary(cat: &Arc<CubeCat>, r: usize, d: usize) -> Result<PresheafMap> {
    let rep = Arc::new(Presheaf::representable(cat, r, d)?);
    let site = cat.site();
    let keep: Vec<Vec<bool>> = (0..=d)
        .map(|n| cat.homs(n, r).items().iter().map(|f| !f.normal_form(site).delta.is_full()).collect())
        .collect();
    rep.subpresheaf(&keep)
}

/// `∂□[r]` as the coequalizer of the codimension-two faces into the codimension-one faces,
/// mapped into `□[r]`.
pub fn boundary_coequalizer(cat: &Arc<CubeCat>, r: usize, d: usize) -> Result<PresheafMap> {
    let site = cat.site();
    let rep = Arc::new(Presheaf::representable(cat, r, d)?);
    let empty = Arc::new(Presheaf::empty(cat, d)?);
    if r == 0 {
        return PresheafMap::from_empty(empty, rep);
    }
    let full = Subset::full(r);
    let drop = |i: usize| full.meet(Subset::singleton(r, i).neg());
    let mut faces = Vec::new();
    for i in 0..r {
        for top in [false, true] {
            let xi = if top { Subset::singleton(r, i) } else { Subset::empty(r) };
            faces.push(CubeMorphism::face(site, drop(i), xi)?);
        }
    }
    let cube = Arc::new(Presheaf::representable(cat, r - 1, d)?);
    let sum = coproduct(cat, d, &vec![cube.clone(); faces.len()])?;

    let mut pairs: Vec<(usize, CubeMorphism, usize, CubeMorphism)> = Vec::new();
    for i in 0..r {
        for j in (i + 1)..r {
            let delta = full.meet(Subset::from_positions(r, &[i, j])?.neg());
            for xi in Subset::from_positions(r, &[i, j])?.sub_subsets() {
                let leg = |k: usize| -> Result<(usize, CubeMorphism)> {
                    let d1 = drop(k);
                    let top = xi.contains(k) as usize;
                    Ok((2 * k + top, CubeMorphism::face(site, d1.restrict(delta), d1.restrict(xi))?))
                };
                let (a, ea) = leg(i)?;
                let (b, eb) = leg(j)?;
                pairs.push((a, ea, b, eb));
            }
        }
    }
    let quotient_legs: Colimit = if pairs.is_empty() {
        let f = PresheafMap::from_empty(empty.clone(), sum.object.clone())?;
        colimit(&Diagram::Coequalizer(f.clone(), f))?
    } else {
        let small = Arc::new(Presheaf::representable(cat, r - 2, d)?);
        let source = coproduct(cat, d, &vec![small.clone(); pairs.len()])?;
        let into = |pick_b: bool| -> Result<PresheafMap> {
            let mut cells = vec![Vec::new(); d + 1];
            for (a, ea, b, eb) in &pairs {
                let (k, e) = if pick_b { (*b, eb) } else { (*a, ea) };
                let ei = cat.homs(r - 2, r - 1).index_of(e).expect("face is enumerated");
                for (n, row) in cells.iter_mut().enumerate() {
                    for u in 0..small.count(n) {
                        let v = cat.compose_idx(n, r - 2, r - 1, ei, u);
                        row.push(sum.legs[k].apply(n, v) as u32);
                    }
                }
            }
            PresheafMap::new(source.object.clone(), sum.object.clone(), cells)
        };
        colimit(&Diagram::Coequalizer(into(false)?, into(true)?))?
    };
    let mut cells = vec![Vec::new(); d + 1];
    for face in &faces {
        let fi = cat.homs(r - 1, r).index_of(face).expect("face is enumerated");
        for (n, row) in cells.iter_mut().enumerate() {
            for v in 0..cube.count(n) {
                row.push(cat.compose_idx(n, r - 1, r, fi, v) as u32);
            }
        }
    }
    let to_rep = PresheafMap::new(sum.object.clone(), rep, cells)?;
    induced_map(&quotient_legs, &[to_rep.clone()], &to_rep.target)
}

/// Restricts `map: A → X` along a monomorphism `mono: S → X`.
pub fn factor_through(map: &PresheafMap, mono: &PresheafMap) -> Result<PresheafMap> {
    let d = map.source.max_degree();
    let mut cells = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut inv = vec![None; mono.target.count(n)];
        for (s, &x) in mono.cells[n].iter().enumerate() {
            inv[x as usize] = Some(s as u32);
        }
        let row = map.cells[n]
            .iter()
            .map(|&x| inv[x as usize])
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::Diagram(format!("map leaves the subpresheaf in degree {n}")))?;
        cells.push(row);
    }
    PresheafMap::new(map.source.clone(), mono.source.clone(), cells)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub degree: usize,
    /// Orbits of non-degenerate cells under automorphisms of the degree.
    pub orbits: usize,
    pub pushout: bool,
    pub pullback: bool,
}

/// The square `⊔ ∂A[α] → sk_{n-1}X`, `⊔ A[α] → sk_n X` with `A[α] = □[n]/Stab(x_α)`.
pub fn attachment_square(x: &Arc<Presheaf>, n: usize) -> Result<Attachment> {
    let d = x.max_degree();
    if n > d {
        return Err(Error::Truncation { needed: n, bound: d });
    }
    let cat = x.cat();
    let below = skeleton(x, n as isize - 1)?;
    let upto = skeleton(x, n as isize)?;
    let step = factor_through(&below, &upto)?;

    let autos: Vec<usize> =
        cat.homs(n, n).items().iter().enumerate().filter(|(_, g)| g.is_iso()).map(|(i, _)| i).collect();
    let mut seen = vec![false; x.count(n)];
    let mut reps = Vec::new();
    for c in 0..x.count(n) {
        if seen[c] || !is_nondegenerate(x, n, c) {
            continue;
        }
        for &g in &autos {
            seen[x.act_idx(n, n, g, c)] = true;
        }
        reps.push(c);
    }

    let rep = Arc::new(Presheaf::representable(cat, n, d)?);
    let bnd = boundary(cat, n, d)?;
    let id = cat.identity_index(n);
    let mut cubes = Vec::new();
    let mut faces = Vec::new();
    let mut chis = Vec::new();
    let mut incs = Vec::new();
    for &c in &reps {
        let stab: Vec<(usize, usize, usize)> =
            autos.iter().filter(|&&g| x.act_idx(n, n, g, c) == c).map(|&g| (n, id, g)).collect();
        let proj = quotient(&rep, &stab, false)?;
        let cell = PresheafMap::from_fn(rep.clone(), x.clone(), |k, f| x.act_idx(n, k, f, c))?;
        let single = Colimit { object: proj.target.clone(), legs: vec![proj.clone()] };
        chis.push(induced_map(&single, &[cell], x)?);
        let keep = proj.compose(&bnd)?.image();
        let inc = proj.target.subpresheaf(&keep)?;
        cubes.push(proj.target.clone());
        faces.push(inc.source.clone());
        incs.push(inc);
    }
    let cubes_sum = coproduct(cat, d, &cubes)?;
    let faces_sum = coproduct(cat, d, &faces)?;
    let glue = induced_map(
        &faces_sum,
        &incs.iter().zip(&cubes_sum.legs).map(|(i, l)| l.compose(i)).collect::<Result<Vec<_>>>()?,
        &cubes_sum.object,
    )?;
    let chi = induced_map(&cubes_sum, &chis, x)?;
    let chi_n = factor_through(&chi, &upto)?;
    let attach = match factor_through(&chi.compose(&glue)?, &below) {
        Ok(m) => m,
        Err(_) => return Ok(Attachment { degree: n, orbits: reps.len(), pushout: false, pullback: false }),
    };
    let square = colimit(&Diagram::Pushout(attach, glue.clone()))?;
    let pushout = match induced_map(&square, &[step.clone(), chi_n.clone()], &upto.source) {
        Ok(m) => m.is_bijective(),
        Err(_) => false,
    };
    let in_below = step.image();
    let in_faces = glue.image();
    let pullback = (0..=d).all(|k| {
        (0..cubes_sum.object.count(k)).all(|a| in_below[k][chi_n.apply(k, a)] == in_faces[k][a])
    });
    Ok(Attachment { degree: n, orbits: reps.len(), pushout, pullback })
}
