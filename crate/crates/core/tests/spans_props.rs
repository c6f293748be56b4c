mod common;

use common::{bound, seeds, site, subset};
use cubecat::spans::{span_compose, span_pushforward, Span};
use proptest::prelude::*;

fn pick(site: &cubecat::site::Site, m: usize, n: usize, i: usize) -> Option<Span> {
    let all = Span::all(site, m, n).unwrap();
    (!all.is_empty()).then(|| all[i % all.len()].clone())
}

proptest! {
    #![proptest_config(common::config(512))]

    #[test]
    fn composition_is_associative((s, deg, p, _a, _b) in seeds()) {
        let site = site(s);
        let d = bound(&site) + 1;
        let (a, b, c, e) = (deg[0] % d, deg[1] % d, deg[2] % d, deg[3] % d);
        if let (Some(f), Some(g), Some(h)) = (pick(&site, a, b, p[0]), pick(&site, b, c, p[1]), pick(&site, c, e, p[2])) {
            let left = span_compose(&site, &h, &span_compose(&site, &g, &f).unwrap()).unwrap();
            let right = span_compose(&site, &span_compose(&site, &h, &g).unwrap(), &f).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn dagger_splits_injection((s, deg, _p, a, _b) in seeds()) {
        let site = site(s);
        let n = deg[0] % (bound(&site) + 1);
        let gamma = subset(n, a);
        let composite = span_compose(&site, &Span::dagger(&site, gamma), &Span::inject(site.injection(gamma))).unwrap();
        prop_assert!(composite.is_identity());
        prop_assert_eq!(composite, Span::identity(&site, gamma.len()));
    }

    #[test]
    fn pushforward_is_functorial((s, deg, p, a, _b) in seeds()) {
        let site = site(s);
        let d = bound(&site) + 1;
        let (x, y, z) = (deg[0] % d, deg[1] % d, deg[2] % d);
        if let (Some(f), Some(g)) = (pick(&site, x, y, p[0]), pick(&site, y, z, p[1])) {
            let eta = subset(x, a);
            let gf = span_compose(&site, &g, &f).unwrap();
            let stepwise = span_pushforward(&site, &g, span_pushforward(&site, &f, eta).unwrap()).unwrap();
            prop_assert_eq!(span_pushforward(&site, &gf, eta).unwrap(), stepwise);
        }
    }

    #[test]
    fn composites_are_enumerated_once((s, deg, p, _a, _b) in seeds()) {
        let site = site(s);
        let d = bound(&site) + 1;
        let (x, y, z) = (deg[0] % d, deg[1] % d, deg[2] % d);
        if let (Some(f), Some(g)) = (pick(&site, x, y, p[0]), pick(&site, y, z, p[1])) {
            let gf = span_compose(&site, &g, &f).unwrap();
            prop_assert_eq!(gf.gamma.len(), gf.f.src);
            let all = Span::all(&site, x, z).unwrap();
            prop_assert_eq!(all.iter().filter(|s| **s == gf).count(), 1);
        }
    }
}
