//! Base sites: Δ̃⁺ (injections), Δ̃ (monotone maps) and Δ̃G for a crossed group G.

pub mod crossed;
pub mod lattice;
pub mod verify;

use std::fmt;
use std::path::Path;
use std::sync::Arc;

pub use crossed::{CrossedGroup, CrossedTable};
pub use lattice::{lattice_eval, LatticeOp, LatticeValue, Subset};

use crate::error::{Error, Result};

/// Weakly (or strictly) increasing sequences of length `m` in `0..n`, lexicographically.
pub fn monotone_maps(m: usize, n: usize, strict: bool) -> Vec<Vec<usize>> {
    fn go(m: usize, n: usize, strict: bool, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in lo..n {
            cur.push(v);
            go(m, n, strict, if strict { v + 1 } else { v }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, n, strict, 0, &mut Vec::with_capacity(m), &mut out);
    out
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseMorphism {
    pub src: usize,
    pub dst: usize,
    pub map: Vec<usize>,
    pub twist: usize,
}

impl BaseMorphism {
    pub fn new(dst: usize, map: Vec<usize>, twist: usize) -> Self {
        BaseMorphism { src: map.len(), dst, map, twist }
    }

    pub fn image(&self) -> Subset {
        let mut mask = 0u64;
        for &v in &self.map {
            mask |= 1 << v;
        }
        Subset::raw(self.dst, mask)
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst && self.twist == 0 && self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_full()
    }

    pub fn is_strictly_monotone(&self) -> bool {
        self.map.windows(2).all(|w| w[0] < w[1])
    }
}

impl fmt::Debug for BaseMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BaseMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{}→{}", self.map, self.src, self.dst)?;
        if self.twist != 0 {
            write!(f, "·x{}", self.twist)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteKind {
    Plain,
    Connections,
    Crossed,
}

#[derive(Clone, Debug)]
pub struct Site {
    kind: SiteKind,
    group: CrossedGroup,
    label: String,
}

impl Site {
    pub fn plain() -> Self {
        Site { kind: SiteKind::Plain, group: CrossedGroup::Trivial, label: "plain".into() }
    }

    pub fn connections() -> Self {
        Site { kind: SiteKind::Connections, group: CrossedGroup::Trivial, label: "connections".into() }
    }

    pub fn symmetric() -> Self {
        Site { kind: SiteKind::Crossed, group: CrossedGroup::Symmetric, label: "crossed:sigma".into() }
    }

    pub fn crossed(table: CrossedTable, label: impl Into<String>) -> Self {
        Site {
            kind: SiteKind::Crossed,
            group: CrossedGroup::Table(Arc::new(table)),
            label: label.into(),
        }
    }

    /// Parses `plain`, `connections`, `crossed:sigma` or `crossed:<path>`.
    pub fn from_selector(selector: &str, table: Option<&Path>) -> Result<Self> {
        match selector {
            "plain" => Ok(Site::plain()),
            "connections" => Ok(Site::connections()),
            "sigma" | "crossed:sigma" => Ok(Site::symmetric()),
            "crossed" => match table {
                Some(p) => Site::load_crossed(p),
                None => Err(Error::Usage("site `crossed` needs --crossed-table".into())),
            },
            s => match s.strip_prefix("crossed:") {
                Some(p) => Site::load_crossed(Path::new(p)),
                None => Err(Error::Usage(format!("unknown site `{s}`"))),
            },
        }
    }

    fn load_crossed(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let table = CrossedTable::from_json(&text)?;
        Ok(Site::crossed(table, format!("crossed:{}", path.display())))
    }

    pub fn kind(&self) -> SiteKind {
        self.kind
    }

    pub fn group(&self) -> &CrossedGroup {
        &self.group
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn max_arity(&self) -> Option<usize> {
        self.group.max_arity()
    }

    pub fn check_degree(&self, n: usize) -> Result<()> {
        match self.max_arity() {
            Some(a) if n > a => Err(Error::Truncation { needed: n, bound: a }),
            _ if n > lattice::MAX_DEGREE => Err(Error::Truncation { needed: n, bound: lattice::MAX_DEGREE }),
            _ => Ok(()),
        }
    }

    pub fn validate(&self, f: &BaseMorphism) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidMorphism(format!("{f}: {why}")));
        self.check_degree(f.src)?;
        self.check_degree(f.dst)?;
        if f.map.len() != f.src {
            return bad("map length differs from source");
        }
        if f.map.iter().any(|&v| v >= f.dst) {
            return bad("value outside target");
        }
        if !f.map.windows(2).all(|w| w[0] <= w[1]) {
            return bad("map is not monotone");
        }
        if self.kind == SiteKind::Plain && !f.is_strictly_monotone() {
            return bad("map is not injective");
        }
        if f.twist >= self.group.order(f.src)? {
            return bad("twist is not an element of the group");
        }
        Ok(())
    }

    pub fn identity(&self, n: usize) -> BaseMorphism {
        BaseMorphism::new(n, (0..n).collect(), 0)
    }

    /// The distinguished injection `|δ| → n` onto `δ`.
    pub fn injection(&self, delta: Subset) -> BaseMorphism {
        BaseMorphism::new(delta.degree(), delta.positions(), 0)
    }

    pub fn is_injection(&self, f: &BaseMorphism) -> bool {
        f.twist == 0 && f.is_strictly_monotone()
    }

    /// Morphisms of `R⁻`: surjections composed with an automorphism.
    pub fn is_degeneracy(&self, f: &BaseMorphism) -> bool {
        f.is_surjective()
    }

    pub fn homs(&self, m: usize, n: usize) -> Result<Vec<BaseMorphism>> {
        self.check_degree(m)?;
        self.check_degree(n)?;
        let strict = self.kind == SiteKind::Plain;
        let k = self.group.order(m)?;
        let mut out = Vec::new();
        for f in monotone_maps(m, n, strict) {
            for x in 0..k {
                out.push(BaseMorphism::new(n, f.clone(), x));
            }
        }
        Ok(out)
    }

    /// Surjective morphisms `m → s`, in enumeration order.
    pub fn degeneracies(&self, m: usize, s: usize) -> Result<Vec<BaseMorphism>> {
        Ok(self.homs(m, s)?.into_iter().filter(|f| f.is_surjective()).collect())
    }

    pub fn compose(&self, outer: &BaseMorphism, inner: &BaseMorphism) -> Result<BaseMorphism> {
        if inner.dst != outer.src {
            return Err(Error::NotComposable(format!("{outer} ∘ {inner}")));
        }
        Ok(self.compose_unchecked(outer, inner))
    }

    /// `(g,y)∘(f,x) = (g∘(y·f), (f^∗y)·x)`.
    pub fn compose_unchecked(&self, outer: &BaseMorphism, inner: &BaseMorphism) -> BaseMorphism {
        debug_assert_eq!(inner.dst, outer.src);
        if outer.twist == 0 {
            let map = inner.map.iter().map(|&i| outer.map[i]).collect();
            return BaseMorphism::new(outer.dst, map, inner.twist);
        }
        let yf = self.group.act(outer.twist, &inner.map, inner.dst);
        let fy = self.group.restrict(&inner.map, inner.dst, outer.twist);
        let map = yf.iter().map(|&i| outer.map[i]).collect();
        BaseMorphism::new(outer.dst, map, self.group.mul(inner.src, fy, inner.twist))
    }

    /// `f = δ∘σ` with `σ` surjective (carrying the twist) and `δ` the image.
    pub fn factorize(&self, f: &BaseMorphism) -> (BaseMorphism, Subset) {
        let image = f.image();
        let map = f.map.iter().map(|&v| image.rank(v)).collect();
        (BaseMorphism::new(image.len(), map, f.twist), image)
    }

    pub fn pushforward(&self, f: &BaseMorphism, delta: Subset) -> Subset {
        debug_assert_eq!(delta.degree(), f.src);
        let mut mask = 0u64;
        if f.twist == 0 {
            for i in delta.positions() {
                mask |= 1 << f.map[i];
            }
        } else {
            for i in self.group.act(f.twist, &delta.positions(), f.src) {
                mask |= 1 << f.map[i];
            }
        }
        Subset::raw(f.dst, mask)
    }

    pub fn pushforward_checked(&self, f: &BaseMorphism, delta: Subset) -> Result<Subset> {
        if delta.degree() != f.src {
            return Err(Error::DegreeMismatch { expected: f.src, found: delta.degree() });
        }
        Ok(self.pushforward(f, delta))
    }

    /// `f^∗δ` only.
    pub fn preimage(&self, f: &BaseMorphism, delta: Subset) -> Subset {
        let mut mask = 0u64;
        for i in 0..f.src {
            if self.pushforward(f, Subset::singleton(f.src, i)).leq(delta) {
                mask |= 1 << i;
            }
        }
        Subset::raw(f.src, mask)
    }

    /// The pullback of `δ` along `f` and the induced map `|f^∗δ| → |δ|`.
    pub fn pullback(&self, f: &BaseMorphism, delta: Subset) -> (Subset, BaseMorphism) {
        debug_assert_eq!(delta.degree(), f.dst);
        let pre = self.preimage(f, delta);
        let comp = self.compose_unchecked(f, &self.injection(pre));
        let map = comp.map.iter().map(|&v| delta.rank(v)).collect();
        (pre, BaseMorphism::new(delta.len(), map, comp.twist))
    }

    pub fn pullback_checked(&self, f: &BaseMorphism, delta: Subset) -> Result<(Subset, BaseMorphism)> {
        if delta.degree() != f.dst {
            return Err(Error::DegreeMismatch { expected: f.dst, found: delta.degree() });
        }
        Ok(self.pullback(f, delta))
    }

    /// `¬f^∗f_∗(¬δ)`: the greatest element below `δ` saturated for `f`.
    pub fn max_saturated(&self, f: &BaseMorphism, delta: Subset) -> Result<Subset> {
        if delta.degree() != f.src {
            return Err(Error::DegreeMismatch { expected: f.src, found: delta.degree() });
        }
        Ok(self.preimage(f, self.pushforward(f, delta.neg())).neg())
    }

    pub fn is_monoidal(&self) -> bool {
        self.tensor(&self.identity(0), &self.identity(0)).is_ok()
    }

    /// Block sum `f ⊗ g`.
    pub fn tensor(&self, f: &BaseMorphism, g: &BaseMorphism) -> Result<BaseMorphism> {
        let mut map = f.map.clone();
        map.extend(g.map.iter().map(|&v| v + f.dst));
        let twist = self.group.block_sum(f.src, f.twist, g.src, g.twist)?;
        Ok(BaseMorphism::new(f.dst + g.dst, map, twist))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm(dst: usize, map: &[usize]) -> BaseMorphism {
        BaseMorphism::new(dst, map.to_vec(), 0)
    }

    fn s(n: usize, p: &[usize]) -> Subset {
        Subset::from_positions(n, p).unwrap()
    }

    #[test]
    fn compose_plain_maps() {
        let c = Site::connections();
        assert_eq!(c.compose(&bm(2, &[0, 1]), &bm(2, &[0, 0])).unwrap(), bm(2, &[0, 0]));
        assert!(c.compose(&bm(2, &[0, 1]), &bm(3, &[0, 0])).is_err());
    }

    #[test]
    fn unit_twists_reproduce_plain_composition() {
        let sg = Site::symmetric();
        let c = Site::connections();
        for f in c.homs(2, 2).unwrap() {
            for g in c.homs(2, 2).unwrap() {
                assert_eq!(sg.compose(&g, &f).unwrap(), c.compose(&g, &f).unwrap());
            }
        }
    }

    #[test]
    fn crossed_composition_matches_set_maps() {
        let sg = Site::symmetric();
        let as_set = |f: &BaseMorphism| -> Vec<usize> {
            let p = crossed::perm_unrank(f.src, f.twist);
            (0..f.src).map(|i| f.map[p[i]]).collect()
        };
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..3 {
                    for f in sg.homs(a, b).unwrap() {
                        for g in sg.homs(b, c).unwrap() {
                            let gf = sg.compose(&g, &f).unwrap();
                            let expect: Vec<usize> = as_set(&f).iter().map(|&i| as_set(&g)[i]).collect();
                            assert_eq!(as_set(&gf), expect);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn factorize_examples() {
        let c = Site::connections();
        assert_eq!(c.factorize(&bm(2, &[0, 0, 1])), (bm(2, &[0, 0, 1]), Subset::full(2)));
        assert_eq!(c.factorize(&bm(3, &[0, 2])), (bm(2, &[0, 1]), s(3, &[0, 2])));
        assert_eq!(c.factorize(&bm(3, &[1, 1])), (bm(1, &[0, 0]), s(3, &[1])));
    }

    #[test]
    fn pushforward_examples() {
        let c = Site::connections();
        assert_eq!(c.pushforward(&bm(2, &[0, 0, 1]), s(3, &[0, 2])), s(2, &[0, 1]));
        assert_eq!(c.pushforward(&bm(2, &[0, 0, 1]), Subset::empty(3)), Subset::empty(2));
        assert_eq!(c.pushforward(&bm(3, &[0, 2]), s(2, &[1])), s(3, &[2]));
    }

    #[test]
    fn pullback_examples() {
        let c = Site::connections();
        let f = bm(2, &[0, 0, 1]);
        assert_eq!(c.pullback(&f, s(2, &[1])), (s(3, &[2]), bm(1, &[0])));
        let id = c.identity(3);
        for d in Subset::all(3) {
            assert_eq!(c.pullback(&id, d), (d, c.identity(d.len())));
        }
        let pulled = c.preimage(&f, s(2, &[1]));
        assert_eq!(c.pushforward(&f, pulled), s(2, &[1]).meet(f.image()));
    }

    #[test]
    fn max_saturated_examples() {
        let c = Site::connections();
        let f = bm(1, &[0, 0]);
        assert_eq!(c.max_saturated(&f, s(2, &[0])).unwrap(), Subset::empty(2));
        assert_eq!(c.max_saturated(&f, Subset::full(2)).unwrap(), Subset::full(2));
        let inj = bm(3, &[0, 2]);
        for d in Subset::all(2) {
            assert_eq!(c.max_saturated(&inj, d).unwrap(), d);
        }
        assert!(c.max_saturated(&f, Subset::full(3)).is_err());
    }

    #[test]
    fn hom_enumeration_sizes() {
        assert_eq!(Site::plain().homs(1, 2).unwrap().len(), 2);
        assert_eq!(Site::connections().homs(2, 1).unwrap().len(), 1);
        assert_eq!(Site::symmetric().homs(2, 2).unwrap().len(), 6);
        let hs = Site::symmetric().homs(2, 2).unwrap();
        let mut sorted = hs.clone();
        sorted.sort();
        assert_eq!(hs, sorted);
    }

    #[test]
    fn validate_rejects_bad_morphisms() {
        let p = Site::plain();
        assert!(p.validate(&bm(1, &[0, 0])).is_err());
        assert!(p.validate(&bm(2, &[1, 0])).is_err());
        assert!(p.validate(&BaseMorphism { src: 2, dst: 2, map: vec![0], twist: 0 }).is_err());
        assert!(Site::symmetric().validate(&BaseMorphism::new(2, vec![0, 1], 2)).is_err());
        assert!(Site::symmetric().validate(&BaseMorphism::new(2, vec![0, 1], 1)).is_ok());
    }

    #[test]
    fn selectors() {
        assert_eq!(Site::from_selector("plain", None).unwrap().label(), "plain");
        assert_eq!(Site::from_selector("crossed:sigma", None).unwrap().kind(), SiteKind::Crossed);
        assert!(Site::from_selector("cubes", None).is_err());
        assert!(Site::from_selector("crossed:/nonexistent.json", None).is_err());
    }
}
