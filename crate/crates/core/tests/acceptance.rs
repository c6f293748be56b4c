//! One pass/fail line per acceptance criterion; exits nonzero if any fails.

use std::collections::HashSet;
use std::sync::Arc;

use cubecat::cube::verify::{verify_crossed_module, verify_cube_axioms};
use cubecat::cube::{cube_compose, hom_count_formula, iota0, iota1, iota_dagger, CubeCat, CubeMorphism};
use cubecat::presheaf::tensor::connection_homotopy;
use cubecat::presheaf::verify::{boundary_pushout_product, samples};
use cubecat::presheaf::{attachment_square, boundary, boundary_coequalizer, cylinder, is_homotopy, Presheaf, PresheafMap};
use cubecat::report::Report;
use cubecat::site::verify::verify_site_axioms;
use cubecat::site::Site;
use cubecat::spans::verify_span_identities;
use cubecat::topology::verify::{expected_homology, product_counts, realized_homology};
use cubecat::topology::nerve_boolean;
use cubecat::Result;

struct Outcome {
    ok: bool,
    detail: String,
}

fn suites(reports: Vec<Report>) -> Outcome {
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.to_text()).collect();
    let cases: usize = reports.iter().map(Report::cases).sum();
    Outcome {
        ok: failed.is_empty(),
        detail: if failed.is_empty() { format!("{} suites, {cases} cases", reports.len()) } else { failed.join("\n") },
    }
}

fn criterion_1() -> Result<Outcome> {
    Ok(suites(vec![
        verify_site_axioms(&Site::plain(), 4)?,
        verify_site_axioms(&Site::connections(), 4)?,
        verify_site_axioms(&Site::symmetric(), 3)?,
    ]))
}

fn criterion_2() -> Result<Outcome> {
    Ok(suites(vec![
        verify_crossed_module(&Site::plain(), 3)?,
        verify_crossed_module(&Site::connections(), 3)?,
        verify_crossed_module(&Site::symmetric(), 2)?,
    ]))
}

/// A map `{0,1}^m → {0,1}^n` as the table of output masks.
type VertexMap = Vec<u16>;

fn vertex_compose(g: &VertexMap, f: &VertexMap) -> VertexMap {
    f.iter().map(|&v| g[v as usize]).collect()
}

/// Generators between adjacent degrees as vertex maps: faces insert a constant
/// coordinate, degeneracies forget one, connections merge two neighbours by `or`.
fn vertex_generators(a: usize, b: usize, connections: bool) -> Vec<VertexMap> {
    let bit = |v: usize, i: usize| (v >> i) & 1;
    let mut out = Vec::new();
    if b == a + 1 {
        for i in 0..=a {
            for e in 0..2 {
                out.push(
                    (0..1usize << a)
                        .map(|v| {
                            let low = v & ((1 << i) - 1);
                            let high = v >> i;
                            (low | e << i | high << (i + 1)) as u16
                        })
                        .collect(),
                );
            }
        }
    }
    if a == b + 1 {
        for i in 0..a {
            out.push((0..1usize << a).map(|v| ((v & ((1 << i) - 1)) | (v >> (i + 1)) << i) as u16).collect());
        }
        if connections {
            for i in 0..b {
                out.push(
                    (0..1usize << a)
                        .map(|v| {
                            let merged = bit(v, i) | bit(v, i + 1);
                            ((v & ((1 << i) - 1)) | merged << i | (v >> (i + 2)) << (i + 1)) as u16
                        })
                        .collect(),
                );
            }
        }
    }
    out
}

/// Hom-sets of the category of vertex maps generated up to degree `top`.
fn vertex_oracle(top: usize, connections: bool) -> Vec<Vec<HashSet<VertexMap>>> {
    let mut homs: Vec<Vec<HashSet<VertexMap>>> = (0..=top).map(|_| vec![HashSet::new(); top + 1]).collect();
    for (a, row) in homs.iter_mut().enumerate() {
        row[a].insert((0..1u16 << a).collect());
    }
    let gens: Vec<Vec<Vec<VertexMap>>> =
        (0..=top).map(|b| (0..=top).map(|c| vertex_generators(b, c, connections)).collect()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..=top {
            for b in 0..=top {
                for c in 0..=top {
                    let new: Vec<VertexMap> = gens[b][c]
                        .iter()
                        .flat_map(|g| homs[a][b].iter().map(move |f| vertex_compose(g, f)))
                        .filter(|h| !homs[a][c].contains(h))
                        .collect();
                    if !new.is_empty() {
                        changed = true;
                        homs[a][c].extend(new);
                    }
                }
            }
        }
    }
    homs
}

fn criterion_3() -> Result<Outcome> {
    let mut problems = Vec::new();
    let plain = vertex_oracle(4, false);
    let conn = vertex_oracle(4, true);
    let fixed = [
        ("|□(1,1)|", plain[1][1].len(), 3),
        ("|□(2,1)|", plain[2][1].len(), 4),
        ("|□ᶜ(2,1)|", conn[2][1].len(), 5),
    ];
    for (name, got, want) in fixed {
        if got != want {
            problems.push(format!("{name} = {got}, expected {want}"));
        }
    }
    for n in 0..=4 {
        if plain[0][n].len() != 1 << n || conn[0][n].len() != 1 << n {
            problems.push(format!("|□(0,{n})| ≠ 2^{n}"));
        }
    }
    for (site, oracle) in [(Site::plain(), &plain), (Site::connections(), &conn)] {
        let cat = CubeCat::new(site.clone(), 4);
        for m in 0..=4 {
            for n in 0..=4 {
                let enumerated = cat.homs(m, n).len();
                let formula = hom_count_formula(&site, m, n)?;
                if enumerated != oracle[m][n].len() || formula != enumerated as u128 {
                    problems.push(format!(
                        "{} ({m},{n}): enumeration {enumerated}, oracle {}, formula {formula}",
                        site.label(),
                        oracle[m][n].len()
                    ));
                }
            }
        }
    }
    let sigma = CubeCat::new(Site::symmetric(), 3);
    for m in 0..=3 {
        for n in 0..=3 {
            if hom_count_formula(sigma.site(), m, n)? != sigma.homs(m, n).len() as u128 {
                problems.push(format!("crossed:sigma ({m},{n}): formula disagrees with enumeration"));
            }
        }
    }
    Ok(Outcome {
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            "oracle, enumeration and closed form agree for m,n ≤ 4".into()
        } else {
            problems.join("; ")
        },
    })
}

fn criterion_4() -> Result<Outcome> {
    let reports = vec![
        verify_cube_axioms(&Site::plain(), 3)?,
        verify_cube_axioms(&Site::connections(), 3)?,
        verify_cube_axioms(&Site::symmetric(), 2)?,
    ];
    let wanted = ["associative", "normal form"];
    let relevant: Vec<_> = reports
        .iter()
        .flat_map(|r| r.checks.iter())
        .filter(|c| wanted.iter().any(|w| c.name.contains(w)))
        .collect();
    let ok = relevant.len() >= 2 * reports.len() && relevant.iter().all(|c| c.passed());
    let mut out = suites(reports);
    out.ok &= ok;
    Ok(out)
}

fn criterion_5() -> Result<Outcome> {
    Ok(suites(vec![
        verify_span_identities(&Site::plain(), 3)?,
        verify_span_identities(&Site::connections(), 3)?,
        verify_span_identities(&Site::symmetric(), 3)?,
    ]))
}

fn criterion_6() -> Result<Outcome> {
    let mut problems = Vec::new();
    let mut cases = 0;
    for site in [Site::plain(), Site::connections()] {
        let cat = CubeCat::shared(site.clone(), 3);
        for r in 0..=3 {
            let rep = Arc::new(Presheaf::representable(&cat, r, 3)?);
            for n in 0..=r {
                let a = attachment_square(&rep, n)?;
                cases += 1;
                if !(a.pushout && a.pullback) {
                    problems.push(format!("{} rep:{r} degree {n}: square is not bicartesian", site.label()));
                }
            }
            cases += 1;
            if boundary(&cat, r, 3)?.image() != boundary_coequalizer(&cat, r, 3)?.image() {
                problems.push(format!("{} ∂□[{r}]: filter and coequalizer differ", site.label()));
            }
        }
    }
    Ok(Outcome {
        ok: problems.is_empty(),
        detail: if problems.is_empty() { format!("{cases} cases") } else { problems.join("; ") },
    })
}

fn criterion_7() -> Result<Outcome> {
    let mut problems = Vec::new();
    for site in [Site::plain(), Site::connections(), Site::symmetric()] {
        let cat = CubeCat::shared(site.clone(), 3);
        for m in 0..=3 {
            for n in 0..=3 - m {
                let (counts, iso) = boundary_pushout_product(&cat, m, n, 3)?;
                if !(counts && iso) {
                    problems.push(format!("{} m={m} n={n}: counts {counts}, isomorphism {iso}", site.label()));
                }
            }
        }
        let small = CubeCat::shared(site.clone(), 2);
        let objects = [
            ("rep:1", Arc::new(Presheaf::representable(&small, 1, 2)?)),
            ("boundary:2", boundary(&small, 2, 2)?.source),
        ];
        for (a, x) in &objects {
            for (b, y) in &objects {
                let (tensor, product) = product_counts(x, y, 2, 3)?;
                if tensor != product {
                    problems.push(format!("{} |{a} ⊗ {b}| {tensor:?} vs {product:?}", site.label()));
                }
            }
        }
    }
    Ok(Outcome {
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            "pushout-products and realization counts agree on three sites".into()
        } else {
            problems.join("; ")
        },
    })
}

/// Chains `S₀ ⊆ … ⊆ S_k` in `2ⁿ`, counted by brute force over all tuples.
fn brute_chain_count(n: usize, k: usize) -> usize {
    let subsets = 1usize << n;
    (0..subsets.pow(k as u32 + 1))
        .filter(|&t| {
            let s: Vec<usize> = (0..=k).map(|j| t / subsets.pow(j as u32) % subsets).collect();
            s.windows(2).all(|w| w[0] & !w[1] == 0)
        })
        .count()
}

fn criterion_8() -> Result<Outcome> {
    let mut problems = Vec::new();
    for site in [Site::plain(), Site::connections()] {
        let cat = CubeCat::shared(site.clone(), 3);
        for n in 0..=3 {
            let rep = Arc::new(Presheaf::representable(&cat, n, 3)?);
            let h = realized_homology(&rep, 2)?;
            if h != expected_homology(None, 2) {
                problems.push(format!("{} |rep:{n}| has homology {h:?}", site.label()));
            }
        }
        for n in 1..=3 {
            let b = boundary(&cat, n, 3)?.source;
            let h = realized_homology(&b, 2)?;
            if h != expected_homology(Some(n), 2) {
                problems.push(format!("{} |boundary:{n}| has homology {h:?}", site.label()));
            }
        }
    }
    for n in 0..=3 {
        let s = nerve_boolean(n, 4)?;
        for k in 0..=4 {
            let brute = brute_chain_count(n, k);
            if s.count(k) != (k + 2).pow(n as u32) || brute != s.count(k) {
                problems.push(format!("N(2^{n}) has {} {k}-simplices, brute force {brute}", s.count(k)));
            }
        }
    }
    Ok(Outcome {
        ok: problems.is_empty(),
        detail: if problems.is_empty() { "cubes are acyclic, boundaries are spheres, nerve counts exact".into() } else { problems.join("; ") },
    })
}

fn criterion_9() -> Result<Outcome> {
    let mut problems = Vec::new();
    for site in [Site::plain(), Site::connections(), Site::symmetric()] {
        for n in 0..=3 {
            let id = CubeMorphism::identity(&site, n);
            for (name, iota) in [("ι⁰", iota0(&site, n)), ("ι¹", iota1(&site, n))] {
                if cube_compose(&site, &iota_dagger(&site, n), &iota)? != id {
                    problems.push(format!("{} ι†{name} ≠ id at {n}", site.label()));
                }
            }
        }
        let cat = CubeCat::shared(site.clone(), 3);
        for s in samples(&cat, 3)? {
            let cyl = cylinder(&s.object)?;
            let id = PresheafMap::identity(&s.object);
            if cyl.retraction.compose(&cyl.iota0)? != id || cyl.retraction.compose(&cyl.iota1)? != id {
                problems.push(format!("{} Cyl {}: retraction does not split the ends", site.label(), s.name));
            }
        }
    }
    let cat = CubeCat::shared(Site::connections(), 3);
    let rep = Arc::new(Presheaf::representable(&cat, 1, 3)?);
    let cyl = cylinder(&rep)?;
    let (h, f0, f1) = connection_homotopy(&cyl, 1)?;
    if !is_homotopy(&cyl, &h, &f0, &f1)? || f0 == f1 {
        problems.push("the connection is not a homotopy id ≃ δδ† on rep:1".into());
    }
    Ok(Outcome {
        ok: problems.is_empty(),
        detail: if problems.is_empty() { "ends split at degrees ≤ 3; connection homotopy validates".into() } else { problems.join("; ") },
    })
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 9] = [
        ("axiom suites", criterion_1),
        ("crossed-module suite", criterion_2),
        ("hom counts", criterion_3),
        ("normal forms and associativity", criterion_4),
        ("span identities", criterion_5),
        ("skeleta and boundaries", criterion_6),
        ("monoidality", criterion_7),
        ("topology", criterion_8),
        ("cylinder", criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run().unwrap_or_else(|e| Outcome { ok: false, detail: format!("error: {e}") });
        if !outcome.ok {
            failures += 1;
        }
        println!("criterion {} {}: {} ({})", i + 1, if outcome.ok { "PASS" } else { "FAIL" }, name, outcome.detail);
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
