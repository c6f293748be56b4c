mod common;

use common::{base, bound, seeds, site, subset};
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::config(512))]

    #[test]
    fn pushforward_preserves_joins((s, deg, pick, a, b) in seeds()) {
        let site = site(s);
        let (m, n) = (deg[0] % (bound(&site) + 1), deg[1] % (bound(&site) + 1));
        if let Some(f) = base(&site, m, n, pick[0]) {
            let (d1, d2) = (subset(m, a), subset(m, b));
            prop_assert_eq!(
                site.pushforward(&f, d1.join(d2)),
                site.pushforward(&f, d1).join(site.pushforward(&f, d2))
            );
        }
    }

    #[test]
    fn galois_connection((s, deg, pick, a, b) in seeds()) {
        let site = site(s);
        let (m, n) = (deg[0] % (bound(&site) + 1), deg[1] % (bound(&site) + 1));
        if let Some(f) = base(&site, m, n, pick[0]) {
            let delta = subset(m, a);
            let target = subset(n, b);
            prop_assert!(delta.leq(site.pullback(&f, site.pushforward(&f, delta)).0));
            prop_assert_eq!(site.pushforward(&f, site.pullback(&f, target).0), target.meet(f.image()));
        }
    }

    #[test]
    fn injections_and_surjections_split((s, deg, pick, a, b) in seeds()) {
        let site = site(s);
        let n = deg[0] % (bound(&site) + 1);
        let gamma = subset(n, a);
        let inj = site.injection(gamma);
        let eta = subset(gamma.len(), b);
        prop_assert_eq!(site.pullback(&inj, site.pushforward(&inj, eta)).0, eta);
        let (x, y) = (subset(n, b), subset(n, pick[1] as u64));
        prop_assert_eq!(site.pullback(&inj, x.join(y)).0, site.pullback(&inj, x).0.join(site.pullback(&inj, y).0));
        let s_deg = deg[1] % (n + 1);
        let surj = site.degeneracies(n, s_deg).unwrap();
        if !surj.is_empty() {
            let sigma = &surj[pick[2] % surj.len()];
            let t = subset(s_deg, a);
            prop_assert_eq!(site.pushforward(sigma, site.pullback(sigma, t).0), t);
        }
    }

    #[test]
    fn factorization_recomposes((s, deg, pick, _a, _b) in seeds()) {
        let site = site(s);
        let (m, n) = (deg[0] % (bound(&site) + 1), deg[1] % (bound(&site) + 1));
        if let Some(f) = base(&site, m, n, pick[0]) {
            let (sigma, delta) = site.factorize(&f);
            prop_assert!(sigma.is_surjective());
            prop_assert_eq!(site.compose(&site.injection(delta), &sigma).unwrap(), f);
        }
    }

    #[test]
    fn base_composition_is_associative((s, deg, pick, _a, _b) in seeds()) {
        let site = site(s);
        let d = bound(&site) + 1;
        let (a, b, c, e) = (deg[0] % d, deg[1] % d, deg[2] % d, deg[3] % d);
        if let (Some(f), Some(g), Some(h)) = (base(&site, a, b, pick[0]), base(&site, b, c, pick[1]), base(&site, c, e, pick[2])) {
            let left = site.compose(&h, &site.compose(&g, &f).unwrap()).unwrap();
            let right = site.compose(&site.compose(&h, &g).unwrap(), &f).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
