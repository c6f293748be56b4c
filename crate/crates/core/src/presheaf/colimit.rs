//! Finite colimits of presheaves, computed pointwise.

use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::cube::CubeCat;
use crate::error::{Error, Result};
use crate::presheaf::{Presheaf, PresheafMap};

pub enum Diagram {
    Coproduct(Vec<Arc<Presheaf>>),
    /// Two maps out of a common source.
    Pushout(PresheafMap, PresheafMap),
    /// Two parallel maps.
    Coequalizer(PresheafMap, PresheafMap),
}

/// The colimit object with one leg per vertex of the diagram (the shared source excluded).
pub struct Colimit {
    pub object: Arc<Presheaf>,
    pub legs: Vec<PresheafMap>,
}

pub fn colimit(diagram: &Diagram) -> Result<Colimit> {
    let out = match diagram {
        Diagram::Coproduct(parts) => {
            let first = parts.first().ok_or_else(|| Error::Diagram("empty coproduct has no site".into()))?;
            coproduct(first.cat(), first.max_degree(), parts)?
        }
        Diagram::Pushout(f, g) => {
            if *f.source != *g.source {
                return Err(Error::Diagram("pushout legs have different sources".into()));
            }
            pushout(f, g)?
        }
        Diagram::Coequalizer(f, g) => {
            if *f.source != *g.source || *f.target != *g.target {
                return Err(Error::Diagram("coequalizer arrows are not parallel".into()));
            }
            let pairs = relations(f.source.as_ref(), |n, a| (f.apply(n, a), g.apply(n, a)));
            let q = quotient(&f.target, &pairs, true)?;
            Colimit { object: q.target.clone(), legs: vec![q] }
        }
    };
    out.object.check_functoriality()?;
    Ok(out)
}

fn relations(a: &Presheaf, f: impl Fn(usize, usize) -> (usize, usize)) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for n in 0..=a.max_degree() {
        for x in 0..a.count(n) {
            let (l, r) = f(n, x);
            out.push((n, l, r));
        }
    }
    out
}

pub(crate) fn coproduct(cat: &Arc<CubeCat>, d: usize, parts: &[Arc<Presheaf>]) -> Result<Colimit> {
    let mut offsets = vec![vec![0usize; parts.len() + 1]; d + 1];
    let mut cells = vec![Vec::new(); d + 1];
    for (i, p) in parts.iter().enumerate() {
        if p.site().label() != cat.site().label() || p.max_degree() != d {
            return Err(Error::Diagram("coproduct summands disagree on site or degree".into()));
        }
        for n in 0..=d {
            offsets[n][i + 1] = offsets[n][i] + p.count(n);
            cells[n].extend(p.cells(n).iter().map(|c| format!("{i}:{c}")));
        }
    }
    let owner = |n: usize, x: usize| offsets[n].partition_point(|&o| o <= x) - 1;
    let object = Arc::new(Presheaf::build(cat, d, cells, |n, k, m, x| {
        let i = owner(n, x);
        offsets[k][i] + parts[i].act_idx(n, k, m, x - offsets[n][i])
    })?);
    let legs = parts
        .iter()
        .enumerate()
        .map(|(i, p)| PresheafMap {
            source: p.clone(),
            target: object.clone(),
            cells: (0..=d).map(|n| (0..p.count(n)).map(|x| (offsets[n][i] + x) as u32).collect()).collect(),
        })
        .collect();
    Ok(Colimit { object, legs })
}

fn pushout(f: &PresheafMap, g: &PresheafMap) -> Result<Colimit> {
    let sum = coproduct(f.target.cat(), f.target.max_degree(), &[f.target.clone(), g.target.clone()])?;
    let (l, r) = (&sum.legs[0], &sum.legs[1]);
    let pairs = relations(f.source.as_ref(), |n, a| (l.apply(n, f.apply(n, a)), r.apply(n, g.apply(n, a))));
    let q = quotient(&sum.object, &pairs, true)?;
    let legs = vec![q.compose(l)?, q.compose(r)?];
    Ok(Colimit { object: q.target.clone(), legs })
}

/// The quotient by the congruence generated by `(degree, x, y)` pairs, with its projection.
/// When `closed` holds the pairs are already stable under the action and no closure is run.
/// Each class is named after, and ordered by, its least member.
pub fn quotient(x: &Arc<Presheaf>, pairs: &[(usize, usize, usize)], closed: bool) -> Result<PresheafMap> {
    let d = x.max_degree();
    let cat = x.cat();
    let mut uf: Vec<UnionFind<usize>> = (0..=d).map(|n| UnionFind::new(x.count(n))).collect();
    let mut queue: Vec<(usize, usize, usize)> = pairs.to_vec();
    while let Some((n, a, b)) = queue.pop() {
        if a >= x.count(n) || b >= x.count(n) {
            return Err(Error::Diagram(format!("relation names a missing cell in degree {n}")));
        }
        if uf[n].union(a, b) && !closed {
            for k in 0..=d {
                for m in 0..cat.homs(k, n).len() {
                    queue.push((k, x.act_idx(n, k, m, a), x.act_idx(n, k, m, b)));
                }
            }
        }
    }
    let mut class = Vec::with_capacity(d + 1);
    let mut reps = Vec::with_capacity(d + 1);
    for (n, u) in uf.iter_mut().enumerate() {
        let mut root_class = vec![usize::MAX; x.count(n)];
        let mut c = vec![0u32; x.count(n)];
        let mut r = Vec::new();
        for a in 0..x.count(n) {
            let root = u.find_mut(a);
            if root_class[root] == usize::MAX {
                root_class[root] = r.len();
                r.push(a);
            }
            c[a] = root_class[root] as u32;
        }
        class.push(c);
        reps.push(r);
    }
    let cells = (0..=d).map(|n| reps[n].iter().map(|&a| x.cells(n)[a].clone()).collect()).collect();
    let object = Presheaf::build(cat, d, cells, |n, k, m, c| class[k][x.act_idx(n, k, m, reps[n][c])] as usize)?;
    Ok(PresheafMap { source: x.clone(), target: Arc::new(object), cells: class })
}

/// The map out of a colimit determined by one map per leg; fails if they disagree.
pub fn induced_map(colimit: &Colimit, maps: &[PresheafMap], target: &Arc<Presheaf>) -> Result<PresheafMap> {
    if maps.len() != colimit.legs.len() {
        return Err(Error::Diagram("one map per leg is required".into()));
    }
    let object = &colimit.object;
    let target = target.clone();
    let d = object.max_degree();
    let mut cells: Vec<Vec<Option<u32>>> = (0..=d).map(|n| vec![None; object.count(n)]).collect();
    for (leg, map) in colimit.legs.iter().zip(maps) {
        if *leg.source != *map.source || *map.target != *target {
            return Err(Error::Diagram("induced map does not match the diagram".into()));
        }
        for n in 0..=d {
            for (a, &c) in leg.cells[n].iter().enumerate() {
                let v = map.cells[n][a];
                match cells[n][c as usize] {
                    Some(w) if w != v => {
                        return Err(Error::Diagram(format!("legs disagree on cell {}", object.cells(n)[c as usize])))
                    }
                    _ => cells[n][c as usize] = Some(v),
                }
            }
        }
    }
    let cells = cells
        .into_iter()
        .map(|row| row.into_iter().collect::<Option<Vec<u32>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Diagram("legs are not jointly surjective".into()))?;
    PresheafMap::new(object.clone(), target, cells)
}
