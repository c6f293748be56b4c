//! The cubicalization □(R): marked spans `(ξ, fγ†)` with `im(f) ∧ ξ = 0`.

pub mod cat;
pub mod verify;

use std::fmt;

use crate::error::{Error, Result};
use crate::site::{BaseMorphism, Site, SiteKind, Subset};
use crate::spans::{span_compose_unchecked, span_pushforward_unchecked, span_tensor, Span};

pub use cat::{CubeCat, HomSet};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeMorphism {
    pub span: Span,
    pub xi: Subset,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub gamma: Subset,
    pub sigma: BaseMorphism,
    pub delta: Subset,
    pub xi: Subset,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Class {
    Iso,
    Face { delta: Subset, xi: Subset },
    Collapse,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceMeet {
    /// `ε₁^{δ₁^∗ξ₂}` into the source of the first face.
    pub leg_a: CubeMorphism,
    pub leg_b: CubeMorphism,
    pub composite: CubeMorphism,
}

impl CubeMorphism {
    pub fn new(span: Span, xi: Subset) -> Result<Self> {
        if xi.degree() != span.dst() {
            return Err(Error::DegreeMismatch { expected: span.dst(), found: xi.degree() });
        }
        if !span.image().meet(xi).is_empty() {
            return Err(Error::InvalidMorphism(format!("marker {xi} meets the image of {span}")));
        }
        Ok(CubeMorphism { span, xi })
    }

    pub fn src(&self) -> usize {
        self.span.src()
    }

    pub fn dst(&self) -> usize {
        self.span.dst()
    }

    pub fn identity(site: &Site, n: usize) -> Self {
        CubeMorphism { span: Span::identity(site, n), xi: Subset::empty(n) }
    }

    pub fn from_span(span: Span) -> Self {
        let xi = Subset::empty(span.dst());
        CubeMorphism { span, xi }
    }

    pub fn base(f: BaseMorphism) -> Self {
        CubeMorphism::from_span(Span::inject(f))
    }

    /// `δ^ξ: |δ| → n`.
    pub fn face(site: &Site, delta: Subset, xi: Subset) -> Result<Self> {
        CubeMorphism::new(Span::inject(site.injection(delta)), xi)
    }

    pub fn dagger(site: &Site, gamma: Subset) -> Self {
        CubeMorphism::from_span(Span::dagger(site, gamma))
    }

    pub fn is_identity(&self) -> bool {
        self.xi.is_empty() && self.span.is_identity()
    }

    pub fn is_iso(&self) -> bool {
        self.xi.is_empty() && self.span.gamma.is_full() && self.src() == self.dst() && self.span.f.is_surjective()
    }

    /// Degeneracy class `σγ†`: full image and empty marker.
    pub fn is_collapse(&self) -> bool {
        self.xi.is_empty() && self.span.f.is_surjective()
    }

    pub fn normal_form(&self, site: &Site) -> NormalForm {
        let (sigma, delta) = site.factorize(&self.span.f);
        NormalForm { gamma: self.span.gamma, sigma, delta, xi: self.xi }
    }

    pub fn classify(&self, site: &Site) -> Class {
        let nf = self.normal_form(site);
        let bijective = nf.sigma.src == nf.sigma.dst;
        if nf.gamma.is_full() && nf.delta.is_full() && nf.xi.is_empty() && bijective {
            Class::Iso
        } else if nf.gamma.is_full() && nf.sigma.is_identity() {
            Class::Face { delta: nf.delta, xi: nf.xi }
        } else if nf.delta.is_full() && nf.xi.is_empty() {
            Class::Collapse
        } else {
            Class::Mixed
        }
    }
}

impl NormalForm {
    pub fn validate(&self) -> Result<()> {
        let err = |m: &str| Err(Error::InvalidMorphism(format!("normal form: {m}")));
        if self.xi.degree() != self.delta.degree() {
            return err("delta and xi live in different degrees");
        }
        if !self.delta.meet(self.xi).is_empty() {
            return err("delta meets xi");
        }
        if self.sigma.src != self.gamma.len() || self.sigma.dst != self.delta.len() {
            return err("sigma does not connect |gamma| to |delta|");
        }
        if !self.sigma.is_surjective() {
            return err("sigma is not surjective");
        }
        Ok(())
    }

    /// `δ^ξ σ γ†`, assembled directly.
    pub fn assemble(&self, site: &Site) -> CubeMorphism {
        let f = site.compose_unchecked(&site.injection(self.delta), &self.sigma);
        CubeMorphism { span: Span { gamma: self.gamma, f }, xi: self.xi }
    }

    /// `δ^ξ ∘ σ ∘ γ†`, assembled through cube composition.
    pub fn reassemble(&self, site: &Site) -> CubeMorphism {
        let face = CubeMorphism { span: Span::inject(site.injection(self.delta)), xi: self.xi };
        let sigma = CubeMorphism::base(self.sigma.clone());
        let dag = CubeMorphism::dagger(site, self.gamma);
        cube_compose_unchecked(site, &face, &cube_compose_unchecked(site, &sigma, &dag))
    }
}

impl fmt::Debug for CubeMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CubeMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.span, self.xi)
    }
}

pub fn cube_compose(site: &Site, outer: &CubeMorphism, inner: &CubeMorphism) -> Result<CubeMorphism> {
    if inner.dst() != outer.src() {
        return Err(Error::NotComposable(format!("{outer} ∘ {inner}")));
    }
    let out = cube_compose_unchecked(site, outer, inner);
    if !out.span.image().meet(out.xi).is_empty() {
        return Err(Error::InvalidMorphism(format!("composite {out} violates disjointness")));
    }
    Ok(out)
}

/// `(ζ, G)∘(ξ, F) = (ζ ∨ G_∗ξ, Λ(¬G_∗ξ) G F)`.
pub fn cube_compose_unchecked(site: &Site, outer: &CubeMorphism, inner: &CubeMorphism) -> CubeMorphism {
    debug_assert_eq!(inner.dst(), outer.src());
    let push = span_pushforward_unchecked(site, &outer.span, inner.xi);
    let gf = span_compose_unchecked(site, &outer.span, &inner.span);
    let span = if push.is_empty() { gf } else { span_compose_unchecked(site, &Span::lambda(site, push.neg()), &gf) };
    CubeMorphism { span, xi: outer.xi.join(push) }
}

/// `(f^ξγ†)_∗(η) = f_∗γ^∗(η) ∨ ξ`.
pub fn cube_pushforward(site: &Site, m: &CubeMorphism, eta: Subset) -> Result<Subset> {
    if eta.degree() != m.src() {
        return Err(Error::DegreeMismatch { expected: m.src(), found: eta.degree() });
    }
    Ok(cube_pushforward_unchecked(site, m, eta))
}

pub fn cube_pushforward_unchecked(site: &Site, m: &CubeMorphism, eta: Subset) -> Subset {
    span_pushforward_unchecked(site, &m.span, eta).join(m.xi)
}

fn as_face(site: &Site, m: &CubeMorphism) -> Result<(Subset, Subset)> {
    match m.classify(site) {
        Class::Face { delta, xi } => Ok((delta, xi)),
        Class::Iso if m.is_identity() => Ok((Subset::full(m.dst()), Subset::empty(m.dst()))),
        _ => Err(Error::InvalidMorphism(format!("{m} is not a face"))),
    }
}

/// The intersection of two faces with a common target, if nonempty.
pub fn face_meet(site: &Site, a: &CubeMorphism, b: &CubeMorphism) -> Result<Option<FaceMeet>> {
    if a.dst() != b.dst() {
        return Err(Error::NotComposable(format!("faces {a} and {b} have different targets")));
    }
    let (d1, x1) = as_face(site, a)?;
    let (d2, x2) = as_face(site, b)?;
    if x1.meet(d2.neg()) != x2.meet(d1.neg()) {
        return Ok(None);
    }
    let meet = d1.meet(d2);
    let leg_a = CubeMorphism::face(site, d1.restrict(meet), d1.restrict(x2))?;
    let leg_b = CubeMorphism::face(site, d2.restrict(meet), d2.restrict(x1))?;
    let composite = CubeMorphism::face(site, meet, x1.join(x2))?;
    Ok(Some(FaceMeet { leg_a, leg_b, composite }))
}

fn require_monoidal(site: &Site) -> Result<()> {
    if site.kind() == SiteKind::Crossed && site.group().perm(0, 0).is_none() {
        return Err(Error::NotMonoidal(site.label().to_string()));
    }
    Ok(())
}

/// `a ⊗ b`: offset concatenation of every component.
pub fn tensor_mor(site: &Site, a: &CubeMorphism, b: &CubeMorphism) -> Result<CubeMorphism> {
    require_monoidal(site)?;
    Ok(CubeMorphism { span: span_tensor(site, &a.span, &b.span)?, xi: a.xi.concat(b.xi) })
}

/// `c(m) = m ⊗ id₁`; the new coordinate is the last one.
pub fn enlarge(site: &Site, m: &CubeMorphism) -> Result<CubeMorphism> {
    tensor_mor(site, m, &CubeMorphism::identity(site, 1))
}

/// `ι: n → n+1`, missing the last coordinate.
pub fn iota(n: usize) -> Subset {
    Subset::full(n).extend(false)
}

pub fn iota0(site: &Site, n: usize) -> CubeMorphism {
    CubeMorphism::face(site, iota(n), Subset::empty(n + 1)).expect("ι is disjoint from ∅")
}

pub fn iota1(site: &Site, n: usize) -> CubeMorphism {
    CubeMorphism::face(site, iota(n), iota(n).neg()).expect("ι is disjoint from ¬ι")
}

pub fn iota_dagger(site: &Site, n: usize) -> CubeMorphism {
    CubeMorphism::dagger(site, iota(n))
}

/// Closed-form `|□(m,n)| = Σ_a C(m,a) Σ_s |R⁻(a,s)| C(n,s) 2^{n−s}`.
pub fn hom_count_formula(site: &Site, m: usize, n: usize) -> Result<u128> {
    fn binom(n: usize, k: usize) -> u128 {
        if k > n {
            return 0;
        }
        (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    }
    let surj = |a: usize, s: usize| -> Result<u128> {
        Ok(match site.kind() {
            SiteKind::Plain => (a == s) as u128,
            _ if a == 0 || s == 0 => (a == 0 && s == 0) as u128,
            SiteKind::Connections => binom(a - 1, s - 1),
            SiteKind::Crossed => binom(a - 1, s - 1) * site.group().order(a)? as u128,
        })
    };
    let mut total = 0u128;
    for a in 0..=m {
        for s in 0..=a.min(n) {
            total += binom(m, a) * surj(a, s)? * binom(n, s) * (1u128 << (n - s));
        }
    }
    Ok(total)
}
