mod common;

use common::{bound, cube, seeds, site, subset};
use cubecat::cube::{cube_compose, cube_pushforward, iota0, iota1, iota_dagger, CubeCat, CubeMorphism, enlarge};
use cubecat::site::Subset;
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::config(384))]

    #[test]
    fn composition_is_associative((s, deg, p, _a, _b) in seeds()) {
        let site = site(s);
        let d = bound(&site);
        let cat = CubeCat::shared(site.clone(), d);
        let (a, b, c, e) = (deg[0] % (d + 1), deg[1] % (d + 1), deg[2] % (d + 1), deg[3] % (d + 1));
        let (f, g, h) = (cube(&cat, a, b, p[0]), cube(&cat, b, c, p[1]), cube(&cat, c, e, p[2]));
        let left = cube_compose(&site, &h, &cube_compose(&site, &g, &f).unwrap()).unwrap();
        let right = cube_compose(&site, &cube_compose(&site, &h, &g).unwrap(), &f).unwrap();
        prop_assert!(left.span.image().meet(left.xi).is_empty());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn normal_forms_roundtrip((s, deg, p, _a, _b) in seeds()) {
        let site = site(s);
        let d = bound(&site);
        let cat = CubeCat::shared(site.clone(), d);
        let m = cube(&cat, deg[0] % (d + 1), deg[1] % (d + 1), p[0]);
        let nf = m.normal_form(&site);
        prop_assert!(nf.validate().is_ok());
        prop_assert_eq!(nf.reassemble(&site), m.clone());
        prop_assert_eq!(nf.assemble(&site), m.clone());
        prop_assert_eq!(nf.reassemble(&site).normal_form(&site), nf);
    }

    #[test]
    fn pushforward_is_functorial((s, deg, p, a, _b) in seeds()) {
        let site = site(s);
        let d = bound(&site);
        let cat = CubeCat::shared(site.clone(), d);
        let (x, y, z) = (deg[0] % (d + 1), deg[1] % (d + 1), deg[2] % (d + 1));
        let (f, g) = (cube(&cat, x, y, p[0]), cube(&cat, y, z, p[1]));
        let gf = cube_compose(&site, &g, &f).unwrap();
        let eta = subset(x, a);
        let stepwise = cube_pushforward(&site, &g, cube_pushforward(&site, &f, eta).unwrap()).unwrap();
        prop_assert_eq!(cube_pushforward(&site, &gf, eta).unwrap(), stepwise);
        prop_assert_eq!(cube_pushforward(&site, &f, Subset::empty(x)).unwrap(), f.xi);
    }

    #[test]
    fn cylinder_maps_are_natural((s, deg, p, _a, _b) in seeds()) {
        let site = site(s);
        if !site.is_monoidal() {
            return Ok(());
        }
        let d = bound(&site) - 1;
        let cat = CubeCat::shared(site.clone(), d);
        let (m, n) = (deg[0] % (d + 1), deg[1] % (d + 1));
        let f = cube(&cat, m, n, p[0]);
        let cf = enlarge(&site, &f).unwrap();
        for (iota_m, iota_n) in [(iota0(&site, m), iota0(&site, n)), (iota1(&site, m), iota1(&site, n))] {
            prop_assert_eq!(
                cube_compose(&site, &cf, &iota_m).unwrap(),
                cube_compose(&site, &iota_n, &f).unwrap()
            );
        }
        prop_assert_eq!(
            cube_compose(&site, &f, &iota_dagger(&site, m)).unwrap(),
            cube_compose(&site, &iota_dagger(&site, n), &cf).unwrap()
        );
        prop_assert!(cube_compose(&site, &iota_dagger(&site, m), &iota0(&site, m)).unwrap() == CubeMorphism::identity(&site, m));
    }
}
