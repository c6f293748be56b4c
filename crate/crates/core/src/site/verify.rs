//! Exhaustive checks of the thin-powered and crossed-group axioms.

use std::collections::{HashMap, HashSet};

use serde_json::json;

use crate::error::Result;
use crate::json;
use crate::report::{Check, Report};
use crate::site::{monotone_maps, BaseMorphism, CrossedGroup, Site, SiteKind, Subset};

/// All hom-sets of a site up to a degree, with brute-force factorization data.
struct Enumerated<'a> {
    site: &'a Site,
    d: usize,
    homs: Vec<Vec<Vec<BaseMorphism>>>,
    /// Bit `δ.mask` is set when the morphism factors through the injection `δ`.
    through: HashMap<BaseMorphism, u64>,
}

impl<'a> Enumerated<'a> {
    fn new(site: &'a Site, d: usize) -> Result<Self> {
        let mut homs = vec![Vec::new(); d + 1];
        for m in 0..=d {
            for n in 0..=d {
                homs[m].push(site.homs(m, n)?);
            }
        }
        let mut through: HashMap<BaseMorphism, u64> = HashMap::new();
        for m in 0..=d {
            for n in 0..=d {
                for f in &homs[m][n] {
                    through.entry(f.clone()).or_insert(0);
                }
                for delta in Subset::all(n) {
                    let inj = site.injection(delta);
                    for v in &homs[m][delta.len()] {
                        *through.entry(site.compose_unchecked(&inj, v)).or_insert(0) |= 1 << delta.mask();
                    }
                }
            }
        }
        Ok(Enumerated { site, d, homs, through })
    }

    fn hom(&self, m: usize, n: usize) -> &[BaseMorphism] {
        &self.homs[m][n]
    }

    fn factors_through(&self, f: &BaseMorphism, delta: Subset) -> bool {
        self.through[f] >> delta.mask() & 1 == 1
    }

    /// Left orthogonality against every distinguished injection, by brute force.
    fn orthogonal(&self, sigma: &BaseMorphism) -> bool {
        for b in 0..=self.d {
            for u in self.hom(sigma.dst, b) {
                let us = self.site.compose_unchecked(u, sigma);
                for delta in Subset::all(b) {
                    if self.factors_through(&us, delta) && !self.factors_through(u, delta) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn witness_f(f: &BaseMorphism) -> serde_json::Value {
    json!({"f": json::base(f)})
}

pub fn verify_site_axioms(site: &Site, d: usize) -> Result<Report> {
    let e = Enumerated::new(site, d)?;
    let mut report = Report::new(format!("site-axioms[{}, D={d}]", site.label()));

    let mut assoc = Check::new("composition is associative and unital");
    let index: Vec<Vec<HashMap<&BaseMorphism, usize>>> = (0..=d)
        .map(|m| (0..=d).map(|n| e.hom(m, n).iter().enumerate().map(|(i, f)| (f, i)).collect()).collect())
        .collect();
    let mut comp = vec![vec![vec![Vec::new(); d + 1]; d + 1]; d + 1];
    for a in 0..=d {
        for b in 0..=d {
            for c in 0..=d {
                let mut t = Vec::with_capacity(e.hom(b, c).len() * e.hom(a, b).len());
                for g in e.hom(b, c) {
                    for f in e.hom(a, b) {
                        t.push(index[a][c][&site.compose_unchecked(g, f)]);
                    }
                }
                comp[a][b][c] = t;
            }
        }
    }
    for a in 0..=d {
        for b in 0..=d {
            for f in e.hom(a, b) {
                assoc.record(
                    site.compose_unchecked(&site.identity(b), f) == *f
                        && site.compose_unchecked(f, &site.identity(a)) == *f,
                    || witness_f(f),
                );
            }
            let nab = e.hom(a, b).len();
            for c in 0..=d {
                let nbc = e.hom(b, c).len();
                let nac = e.hom(a, c).len();
                for z in 0..=d {
                    for h in 0..e.hom(c, z).len() {
                        for g in 0..nbc {
                            let hg = comp[b][c][z][h * nbc + g];
                            for f in 0..nab {
                                let lhs = comp[a][c][z][h * nac + comp[a][b][c][g * nab + f]];
                                let rhs = comp[a][b][z][hg * nab + f];
                                assoc.record(lhs == rhs, || {
                                    json!({"f": json::base(&e.hom(a, b)[f]), "g": json::base(&e.hom(b, c)[g]), "h": json::base(&e.hom(c, z)[h])})
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    report.push(assoc);

    let mut di1 = Check::new("DI1 distinguished injections are monomorphisms");
    for n in 0..=d {
        for delta in Subset::all(n) {
            let inj = site.injection(delta);
            for t in 0..=d {
                let mut seen = HashSet::new();
                for g in e.hom(t, delta.len()) {
                    let ok = seen.insert(site.compose_unchecked(&inj, g));
                    di1.record(ok, || json!({"delta": json::subset(delta), "g": json::base(g)}));
                }
            }
        }
    }
    report.push(di1);

    let mut di2 = Check::new("DI2 distinguished injections compose");
    for n in 0..=d {
        for delta in Subset::all(n) {
            for eps in Subset::all(delta.len()) {
                let c = site.compose_unchecked(&site.injection(delta), &site.injection(eps));
                di2.record(site.is_injection(&c) && c == site.injection(delta.expand(eps)), || {
                    json!({"delta": json::subset(delta), "eps": json::subset(eps)})
                });
            }
        }
    }
    report.push(di2);

    let mut minus = HashSet::new();
    let mut rminus = Check::new("R⁻ (orthogonal to R⁺₀) is exactly the surjective morphisms");
    for m in 0..=d {
        for s in 0..=d {
            for f in e.hom(m, s) {
                let orth = e.orthogonal(f);
                if orth {
                    minus.insert(f.clone());
                }
                rminus.record(orth == site.is_degeneracy(f), || witness_f(f));
            }
        }
    }
    report.push(rminus);

    let mut di3 = Check::new("DI3 unique (R⁻, R⁺₀)-factorization");
    for m in 0..=d {
        for n in 0..=d {
            for f in e.hom(m, n) {
                let mut found = Vec::new();
                for delta in Subset::all(n) {
                    let inj = site.injection(delta);
                    for sigma in e.hom(m, delta.len()) {
                        if minus.contains(sigma) && site.compose_unchecked(&inj, sigma) == *f {
                            found.push((sigma.clone(), delta));
                        }
                    }
                }
                let ok = found.len() == 1 && found[0] == site.factorize(f);
                di3.record(ok, || json!({"f": json::base(f), "factorizations": found.len()}));
            }
        }
    }
    report.push(di3);

    let mut boolean = Check::new("R⁺₀/r is the Boolean lattice 2^r under factorization order");
    for n in 0..=d {
        let injections: Vec<_> = (0..=n).flat_map(|k| e.hom(k, n).iter().filter(|f| site.is_injection(f)).cloned().collect::<Vec<_>>()).collect();
        boolean.record(injections.len() == 1 << n, || json!({"r": n, "count": injections.len()}));
        for a in Subset::all(n) {
            for b in Subset::all(n) {
                let ordered = e.factors_through(&site.injection(a), b);
                boolean.record(ordered == a.leq(b), || json!({"a": json::subset(a), "b": json::subset(b)}));
            }
        }
    }
    report.push(boolean);

    let mut image = Check::new("pushforward is the image of f∘δ");
    let mut joins = Check::new("pushforward preserves joins and the least element");
    let mut galois = Check::new("Galois connection f_∗ ⊣ f^∗ and f_∗f^∗(δ′) = δ′∧im(f)");
    let mut semi = Check::new("semicompleteness: the pullback square is a pullback");
    let mut coherent = Check::new("coherence: f^∗ preserves joins and the least element");
    let mut fact = Check::new("factorize re-composes to f");
    let mut sat = Check::new("max_saturated is the greatest saturated element below δ");
    for m in 0..=d {
        for n in 0..=d {
            for f in e.hom(m, n) {
                let (sigma, delta) = site.factorize(f);
                fact.record(site.compose_unchecked(&site.injection(delta), &sigma) == *f, || witness_f(f));
                coherent.record(site.preimage(f, Subset::empty(n)).is_empty(), || witness_f(f));
                joins.record(site.pushforward(f, Subset::empty(m)).is_empty(), || witness_f(f));
                for a in Subset::all(m) {
                    let pa = site.pushforward(f, a);
                    let img = site.factorize(&site.compose_unchecked(f, &site.injection(a))).1;
                    image.record(pa == img, || json!({"f": json::base(f), "delta": json::subset(a)}));
                    for b in Subset::all(m) {
                        let ok = site.pushforward(f, a.join(b)) == pa.join(site.pushforward(f, b));
                        joins.record(ok, || json!({"f": json::base(f), "a": json::subset(a), "b": json::subset(b)}));
                    }
                    for dp in Subset::all(n) {
                        let ok = pa.leq(dp) == a.leq(site.preimage(f, dp));
                        galois.record(ok, || json!({"f": json::base(f), "delta": json::subset(a), "delta'": json::subset(dp)}));
                    }
                    let best = site.max_saturated(f, a)?;
                    let saturated = |g: Subset| site.preimage(f, site.pushforward(f, g.neg())) == g.neg();
                    let ok = best.leq(a)
                        && saturated(best)
                        && a.sub_subsets().filter(|&g| saturated(g)).all(|g| g.leq(best));
                    sat.record(ok, || json!({"f": json::base(f), "delta": json::subset(a)}));
                }
                for dp in Subset::all(n) {
                    let (pre, restricted) = site.pullback(f, dp);
                    galois.record(site.pushforward(f, pre) == dp.meet(f.image()), || {
                        json!({"f": json::base(f), "delta'": json::subset(dp)})
                    });
                    let commutes = site.compose_unchecked(f, &site.injection(pre))
                        == site.compose_unchecked(&site.injection(dp), &restricted);
                    semi.record(commutes, || json!({"f": json::base(f), "delta": json::subset(dp)}));
                    for t in 0..=d {
                        for u in e.hom(t, m) {
                            let fu = site.compose_unchecked(f, u);
                            let ok = e.factors_through(&fu, dp) == e.factors_through(u, pre);
                            semi.record(ok, || json!({"f": json::base(f), "delta": json::subset(dp), "u": json::base(u)}));
                        }
                    }
                    for dq in Subset::all(n) {
                        let ok = site.preimage(f, dp.join(dq)) == site.preimage(f, dp).join(site.preimage(f, dq));
                        coherent.record(ok, || json!({"f": json::base(f), "a": json::subset(dp), "b": json::subset(dq)}));
                    }
                }
            }
        }
    }
    report.push(image);
    report.push(joins);
    report.push(galois);
    report.push(semi);
    report.push(coherent);
    report.push(fact);
    report.push(sat);

    let mut inj_id = Check::new("δ^∗δ_∗ = id for distinguished injections");
    for n in 0..=d {
        for delta in Subset::all(n) {
            let inj = site.injection(delta);
            for g in Subset::all(delta.len()) {
                inj_id.record(site.preimage(&inj, site.pushforward(&inj, g)) == g, || {
                    json!({"delta": json::subset(delta), "gamma": json::subset(g)})
                });
            }
        }
    }
    report.push(inj_id);

    let mut stable = Check::new("stability: pullbacks of surjections are surjections and σ_∗σ^∗ = id");
    for m in 0..=d {
        for s in 0..=d {
            for sigma in e.hom(m, s).iter().filter(|f| minus.contains(*f)) {
                for dp in Subset::all(s) {
                    let (pre, restricted) = site.pullback(sigma, dp);
                    let ok = minus.contains(&restricted) && site.pushforward(sigma, pre) == dp;
                    stable.record(ok, || json!({"sigma": json::base(sigma), "delta": json::subset(dp)}));
                }
            }
        }
    }
    report.push(stable);

    let mut pbfun = Check::new("pullback is functorial: (gf)^∗δ = f^∗g^∗δ");
    for a in 0..=d {
        for b in 0..=d {
            for f in e.hom(a, b) {
                for c in 0..=d {
                    for g in e.hom(b, c) {
                        let gf = site.compose_unchecked(g, f);
                        for dl in Subset::all(c) {
                            let ok = site.preimage(&gf, dl) == site.preimage(f, site.preimage(g, dl));
                            pbfun.record(ok, || json!({"f": json::base(f), "g": json::base(g), "delta": json::subset(dl)}));
                        }
                    }
                }
            }
        }
    }
    report.push(pbfun);

    if site.kind() == SiteKind::Crossed {
        report.extend(verify_crossed_group(site.group(), d)?);
    }
    Ok(report)
}

/// (CG1)–(CG4), the group action laws and functoriality of `f ↦ f^∗`.
pub fn verify_crossed_group(g: &CrossedGroup, d: usize) -> Result<Report> {
    let mut report = Report::new(format!("crossed-group[D={d}]"));
    let maps = |m: usize, n: usize| monotone_maps(m, n, false);
    let comp = |f: &[usize], h: &[usize]| -> Vec<usize> { h.iter().map(|&i| f[i]).collect() };
    let mut cg1 = Check::new("CG1 x·(fg) = (x·f)(f^∗x·g)");
    let mut cg2 = Check::new("CG2 f^∗(xy) = ((y·f)^∗x)(f^∗y)");
    let mut cg3 = Check::new("CG3 x·1 = 1");
    let mut cg4 = Check::new("CG4 f^∗1 = 1");
    let mut action = Check::new("G(r) acts on Δ̃(s,r)");
    let mut presheaf = Check::new("G is a presheaf: (fg)^∗x = g^∗f^∗x, 1^∗x = x");
    for r in 0..=d {
        let k = g.order(r)?;
        let id: Vec<usize> = (0..r).collect();
        for x in 0..k {
            cg3.record(g.act(x, &id, r) == id, || json!({"r": r, "x": x}));
            presheaf.record(g.restrict(&id, r, x) == x, || json!({"r": r, "x": x}));
        }
        for s in 0..=d {
            for f in maps(s, r) {
                cg4.record(g.restrict(&f, r, 0) == 0, || json!({"f": f, "r": r}));
                for x in 0..k {
                    let xf = g.act(x, &f, r);
                    let fx = g.restrict(&f, r, x);
                    action.record(g.act(0, &f, r) == f, || json!({"f": f}));
                    for y in 0..k {
                        let xy = g.mul(r, x, y);
                        action.record(g.act(xy, &f, r) == g.act(x, &g.act(y, &f, r), r), || {
                            json!({"f": f, "x": x, "y": y})
                        });
                        let yf = g.act(y, &f, r);
                        let rhs = g.mul(s, g.restrict(&yf, r, x), g.restrict(&f, r, y));
                        cg2.record(g.restrict(&f, r, xy) == rhs, || json!({"f": f, "r": r, "x": x, "y": y}));
                    }
                    for t in 0..=d {
                        for h in maps(t, s) {
                            let lhs = g.act(x, &comp(&f, &h), r);
                            let rhs = comp(&xf, &g.act(fx, &h, s));
                            cg1.record(lhs == rhs, || json!({"f": f, "g": h, "r": r, "x": x}));
                            let ok = g.restrict(&comp(&f, &h), r, x) == g.restrict(&h, s, fx);
                            presheaf.record(ok, || json!({"f": f, "g": h, "r": r, "x": x}));
                        }
                    }
                }
            }
        }
    }
    for c in [cg1, cg2, cg3, cg4, action, presheaf] {
        report.push(c);
    }
    Ok(report)
}
