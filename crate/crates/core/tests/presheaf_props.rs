mod common;

use std::sync::{Arc, OnceLock};

use common::{bound, site};
use cubecat::cube::CubeCat;
use cubecat::presheaf::verify::{associator_check, samples, unitors, Sample};
use cubecat::presheaf::{dimension, nondegenerate_decompose, skeleton};
use proptest::prelude::*;

fn objects(s: usize) -> &'static [Sample] {
    static CACHE: [OnceLock<Vec<Sample>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CACHE[s % 3].get_or_init(|| {
        let site = site(s);
        let d = bound(&site);
        samples(&CubeCat::shared(site, d), d).unwrap()
    })
}

proptest! {
    #![proptest_config(common::config(96))]

    #[test]
    fn skeleta_are_nested(s in 0usize..3, which in any::<usize>()) {
        let objs = objects(s);
        let x = &objs[which % objs.len()].object;
        let d = x.max_degree() as isize;
        let mut previous: Option<Vec<Vec<bool>>> = None;
        for n in -1..=d + 1 {
            let image = skeleton(x, n).unwrap().image();
            if let Some(p) = &previous {
                prop_assert!(p.iter().flatten().zip(image.iter().flatten()).all(|(a, b)| !a || *b));
            }
            previous = Some(image);
        }
        prop_assert!(skeleton(x, d).unwrap().is_bijective());
        let top = dimension(x).unwrap().map_or(-1, |v| v as isize);
        prop_assert!(skeleton(x, top).unwrap().is_bijective());
    }

    #[test]
    fn skeleton_inclusion_reflects_degeneracies(s in 0usize..3, which in any::<usize>(), level in 0isize..3, pick in any::<[usize; 3]>()) {
        let objs = objects(s);
        let x = &objs[which % objs.len()].object;
        let image = skeleton(x, level).unwrap().image();
        let cat = x.cat();
        let d = x.max_degree();
        let n = pick[0] % (d + 1);
        let j = pick[1] % (n + 1);
        if x.count(j) == 0 {
            return Ok(());
        }
        let collapses: Vec<usize> = (0..cat.homs(n, j).len()).filter(|&i| cat.homs(n, j).get(i).is_collapse()).collect();
        let sigma = collapses[pick[2] % collapses.len()];
        for y in 0..x.count(j) {
            if image[n][x.act_idx(j, n, sigma, y)] {
                prop_assert!(image[j][y]);
            }
        }
    }

    #[test]
    fn decomposition_recomposes(s in 0usize..3, which in any::<usize>(), pick in any::<[usize; 3]>()) {
        let objs = objects(s);
        let x = &objs[which % objs.len()].object;
        let cat = x.cat();
        let d = x.max_degree();
        let n = pick[0] % (d + 1);
        if x.count(n) == 0 {
            return Ok(());
        }
        let cell = pick[1] % x.count(n);
        let dec = nondegenerate_decompose(x, n, cell).unwrap();
        prop_assert_eq!(x.act(dec.core, &dec.sigma).unwrap(), cell);
        for (ti, tau) in cat.homs(d, n).items().iter().enumerate().filter(|(_, t)| t.is_collapse()) {
            let up = x.act_idx(n, d, ti, cell);
            let other = nondegenerate_decompose(x, d, up).unwrap();
            prop_assert_eq!(other.degree, dec.degree, "{}", tau);
            let k = dec.degree;
            let same_orbit = cat.homs(k, k).items().iter().filter(|m| m.is_iso()).any(|iso| x.act(dec.core, iso).unwrap() == other.core);
            prop_assert!(same_orbit);
        }
    }
}

#[test]
fn tensor_is_unital_and_associative_on_representables() {
    for s in 0..3 {
        let site = site(s);
        if !site.is_monoidal() {
            continue;
        }
        let d = bound(&site);
        let cat = CubeCat::shared(site, d);
        for a in 0..=d {
            for b in 0..=d - a {
                for c in 0..=d - a - b {
                    assert!(associator_check(&cat, a, b, c, d).unwrap(), "({a},{b},{c})");
                }
            }
            let x = Arc::new(cubecat::presheaf::Presheaf::representable(&cat, a, d).unwrap());
            let (r, l) = unitors(&cat, &x, d).unwrap();
            assert!(r.is_bijective() && l.is_bijective());
        }
    }
}
