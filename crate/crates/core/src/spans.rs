//! The span category V(R): morphisms `f γ†` composed by pullback.

use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::finite::HomTables;
use crate::json;
use crate::report::{Check, Report};
use crate::site::{BaseMorphism, Site, Subset};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub gamma: Subset,
    pub f: BaseMorphism,
}

impl Span {
    pub fn new(gamma: Subset, f: BaseMorphism) -> Result<Self> {
        if gamma.len() != f.src {
            return Err(Error::InvalidMorphism(format!(
                "dagger leg {gamma} has {} elements but the forward leg starts at {}",
                gamma.len(),
                f.src
            )));
        }
        Ok(Span { gamma, f })
    }

    pub fn src(&self) -> usize {
        self.gamma.degree()
    }

    pub fn dst(&self) -> usize {
        self.f.dst
    }

    pub fn identity(site: &Site, n: usize) -> Self {
        Span { gamma: Subset::full(n), f: site.identity(n) }
    }

    /// `γ†: n → |γ|`.
    pub fn dagger(site: &Site, gamma: Subset) -> Self {
        Span { gamma, f: site.identity(gamma.len()) }
    }

    /// A base morphism seen as a span with full dagger leg.
    pub fn inject(f: BaseMorphism) -> Self {
        Span { gamma: Subset::full(f.src), f }
    }

    /// `Λ(ξ) = ξξ†`.
    pub fn lambda(site: &Site, xi: Subset) -> Self {
        Span { gamma: xi, f: site.injection(xi) }
    }

    pub fn image(&self) -> Subset {
        self.f.image()
    }

    pub fn is_identity(&self) -> bool {
        self.gamma.is_full() && self.f.is_identity()
    }

    /// All spans `m → n`, ordered by dagger leg then forward leg.
    pub fn all(site: &Site, m: usize, n: usize) -> Result<Vec<Span>> {
        site.check_degree(m)?;
        site.check_degree(n)?;
        let mut out = Vec::new();
        for gamma in Subset::all(m) {
            for f in site.homs(gamma.len(), n)? {
                out.push(Span { gamma, f });
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Span {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "({})({})†", self.f, self.gamma)
    }
}

pub fn span_compose(site: &Site, outer: &Span, inner: &Span) -> Result<Span> {
    if inner.dst() != outer.src() {
        return Err(Error::NotComposable(format!("{outer} ∘ {inner}")));
    }
    Ok(span_compose_unchecked(site, outer, inner))
}

/// `(gβ†)(fγ†) = (g f′)(γ f^∗β)†` where `f′: |f^∗β| → |β|` is the pulled-back leg.
pub fn span_compose_unchecked(site: &Site, outer: &Span, inner: &Span) -> Span {
    let (pre, restricted) = site.pullback(&inner.f, outer.gamma);
    Span { gamma: inner.gamma.expand(pre), f: site.compose_unchecked(&outer.f, &restricted) }
}

/// `(fγ†)_∗(η) = f_∗(γ^∗η)`.
pub fn span_pushforward(site: &Site, s: &Span, eta: Subset) -> Result<Subset> {
    if eta.degree() != s.src() {
        return Err(Error::DegreeMismatch { expected: s.src(), found: eta.degree() });
    }
    Ok(site.pushforward(&s.f, s.gamma.restrict(eta)))
}

pub(crate) fn span_pushforward_unchecked(site: &Site, s: &Span, eta: Subset) -> Subset {
    site.pushforward(&s.f, s.gamma.restrict(eta))
}

pub fn span_tensor(site: &Site, a: &Span, b: &Span) -> Result<Span> {
    Ok(Span { gamma: a.gamma.concat(b.gamma), f: site.tensor(&a.f, &b.f)? })
}

fn wspan(s: &Span) -> serde_json::Value {
    json::span(s)
}

pub fn span_tables(site: &Site, d: usize) -> Result<HomTables<Span>> {
    for n in 0..=d {
        site.check_degree(n)?;
    }
    HomTables::build(d, |m, n| Span::all(site, m, n).unwrap(), |g, f| span_compose_unchecked(site, g, f))
        .map_err(|(g, f)| Error::InvalidMorphism(format!("composite {g} ∘ {f} is not enumerated")))
}

pub fn verify_span_identities(site: &Site, d: usize) -> Result<Report> {
    let t = span_tables(site, d)?;
    let mut report = Report::new(format!("span-identities[{}, D={d}]", site.label()));

    let mut assoc = Check::new("span composition is associative");
    t.check_associativity(&mut assoc, |f, g, h| json!({"f": wspan(f), "g": wspan(g), "h": wspan(h)}));
    report.push(assoc);
    let mut units = Check::new("identity spans are units");
    t.check_units(|n| Span::identity(site, n), &mut units, |f| json!({"f": wspan(f)}));
    report.push(units);

    let mut split = Check::new("γ†γ = id");
    for n in 0..=d {
        for g in Subset::all(n) {
            let c = span_compose_unchecked(site, &Span::dagger(site, g), &Span::inject(site.injection(g)));
            split.record(c.is_identity(), || json!({"gamma": json::subset(g)}));
        }
    }
    report.push(split);

    let mut functorial = Check::new("span pushforward is functorial");
    for a in 0..=d {
        for b in 0..=d {
            for (fi, f) in t.hom(a, b).iter().enumerate() {
                for c in 0..=d {
                    for (gi, g) in t.hom(b, c).iter().enumerate() {
                        let gf = &t.hom(a, c)[t.compose_idx(a, b, c, gi, fi)];
                        for eta in Subset::all(a) {
                            let lhs = span_pushforward_unchecked(site, gf, eta);
                            let rhs = span_pushforward_unchecked(site, g, span_pushforward_unchecked(site, f, eta));
                            functorial.record(lhs == rhs, || json!({"f": wspan(f), "g": wspan(g), "eta": json::subset(eta)}));
                        }
                    }
                }
            }
        }
    }
    report.push(functorial);

    let mut interchange = Check::new("interchange δ₁†δ₂ = η₁η₂† on pullbacks of injections");
    let mut po = Check::new("dagger squares of injections are pushouts against representables");
    for n in 0..=d {
        for d1 in Subset::all(n) {
            for d2 in Subset::all(n) {
                let meet = d1.meet(d2);
                let e1 = d1.restrict(meet);
                let e2 = d2.restrict(meet);
                let dag = |g: Subset| Span::dagger(site, g);
                let inj = |g: Subset| Span::inject(site.injection(g));
                let comp = |a: &Span, b: &Span| span_compose_unchecked(site, a, b);
                let w = || json!({"delta1": json::subset(d1), "delta2": json::subset(d2)});
                interchange.record(comp(&dag(d1), &inj(d2)) == comp(&inj(e1), &dag(e2)), w);
                interchange.record(comp(&dag(d2), &inj(d1)) == comp(&inj(e2), &dag(e1)), w);
                interchange.record(comp(&dag(e1), &dag(d1)) == comp(&dag(e2), &dag(d2)), w);
                check_pushout(site, &t, &dag(d1), &dag(d2), &dag(e1), &dag(e2), &mut po, w);
            }
        }
    }
    report.push(interchange);
    report.push(po);

    let mut posplit = Check::new("saturated dagger squares commute and are pushouts against representables");
    for r0 in 0..=d {
        for r2 in 0..=d {
            for sigma in site.degeneracies(r0, r2)? {
                for gamma in Subset::all(r0) {
                    let g0 = site.max_saturated(&sigma, gamma)?;
                    let eps0 = gamma.restrict(g0);
                    let (sig1, gamma1) = site.factorize(&site.compose_unchecked(&sigma, &site.injection(g0)));
                    let top = Span::dagger(site, gamma);
                    let left = Span::inject(sigma.clone());
                    let right = span_compose_unchecked(site, &Span::inject(sig1.clone()), &Span::dagger(site, eps0));
                    let bottom = Span::dagger(site, gamma1);
                    let w = || json!({"sigma": json::base(&sigma), "gamma": json::subset(gamma)});
                    let commutes = span_compose_unchecked(site, &right, &top) == span_compose_unchecked(site, &bottom, &left);
                    posplit.record(commutes && site.preimage(&sigma, gamma1) == g0, w);
                    check_pushout(site, &t, &top, &left, &right, &bottom, &mut posplit, w);
                }
            }
        }
    }
    report.push(posplit);

    let mut mono = Check::new("monomorphisms of V(R) are exactly full-γ spans with monic f");
    for a in 0..=d {
        for b in 0..=d {
            for (fi, s) in t.hom(a, b).iter().enumerate() {
                let mut v_mono = true;
                let mut r_mono = true;
                for z in 0..=d {
                    let mut seen = std::collections::HashSet::new();
                    for u in 0..t.hom(z, a).len() {
                        if !seen.insert(t.compose_idx(z, a, b, fi, u)) {
                            v_mono = false;
                        }
                    }
                    let mut seen = std::collections::HashSet::new();
                    for u in site.homs(z, s.f.src)? {
                        if !seen.insert(site.compose_unchecked(&s.f, &u)) {
                            r_mono = false;
                        }
                    }
                }
                mono.record(v_mono == (s.gamma.is_full() && r_mono), || json!({"span": wspan(s)}));
            }
        }
    }
    report.push(mono);
    Ok(report)
}

/// Checks that the commutative square `right∘top = bottom∘left` is a pushout
/// against every representable of degree at most `t.d`.
fn check_pushout(
    site: &Site,
    t: &HomTables<Span>,
    top: &Span,
    left: &Span,
    right: &Span,
    bottom: &Span,
    check: &mut Check,
    w: impl Fn() -> serde_json::Value + Copy,
) {
    if right.dst() > t.d || top.dst() > t.d || left.dst() > t.d {
        return;
    }
    for z in 0..=t.d {
        for f1 in t.hom(top.dst(), z) {
            for f2 in t.hom(left.dst(), z) {
                if span_compose_unchecked(site, f1, top) != span_compose_unchecked(site, f2, left) {
                    continue;
                }
                let lifts = t
                    .hom(right.dst(), z)
                    .iter()
                    .filter(|f| span_compose_unchecked(site, f, right) == *f1 && span_compose_unchecked(site, f, bottom) == *f2)
                    .count();
                check.record(lifts == 1, w);
            }
        }
    }
}
