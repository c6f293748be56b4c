mod common;

use std::sync::{Arc, OnceLock};

use common::site;
use cubecat::cube::CubeCat;
use cubecat::presheaf::verify::{samples, Sample};
use cubecat::presheaf::{dimension, skeleton};
use cubecat::report::Check;
use cubecat::topology::{nerve_boolean, normalized_chains, realize, realize_map, smith_normal_form, Matrix};
use proptest::prelude::*;

fn objects(s: usize) -> &'static [Sample] {
    static CACHE: [OnceLock<Vec<Sample>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CACHE[s % 3].get_or_init(|| samples(&CubeCat::shared(site(s), 2), 2).unwrap())
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-6i64..7, c), r))
}

proptest! {
    #![proptest_config(common::config(256))]

    #[test]
    fn smith_form_is_certified(rows in matrix()) {
        let m = Matrix::from_rows(&rows).unwrap();
        let f = smith_normal_form(&m).unwrap();
        prop_assert!(f.certify(&m).unwrap());
        prop_assert!(f.invariants.iter().all(|&v| v > 0));
        prop_assert!(f.invariants.windows(2).all(|w| w[1] % w[0] == 0));
        prop_assert!(f.rank() <= m.rows().min(m.cols()));
    }

    #[test]
    fn nerves_satisfy_identities(n in 0usize..4, k in 0usize..5) {
        let s = nerve_boolean(n, k).unwrap();
        let mut c = Check::new("identities");
        s.check_identities(&mut c);
        prop_assert!(c.passed());
        prop_assert!(normalized_chains(&s).square_zero().unwrap());
    }
}

proptest! {
    #![proptest_config(common::config(32))]

    #[test]
    fn realizations_are_simplicial(s in 0usize..3, which in any::<usize>(), top in 1usize..4) {
        let objs = objects(s);
        let sample = &objs[which % objs.len()];
        let r = realize(&sample.object, top).unwrap();
        let mut c = Check::new("identities");
        r.set.check_identities(&mut c);
        prop_assert!(c.passed());
        prop_assert!(normalized_chains(&r.set).square_zero().unwrap());
        let rep = sample.name.strip_prefix("rep:").and_then(|n| n.parse::<usize>().ok());
        if rep.is_some_and(|n| n <= top) {
            prop_assert_eq!(r.set.euler_characteristic(), 1);
        }
        let sq = r.set.product(&r.set).unwrap();
        let mut c = Check::new("product identities");
        sq.check_identities(&mut c);
        prop_assert!(c.passed());
    }

    #[test]
    fn monomorphisms_realize_injectively(s in 0usize..3, which in any::<usize>(), level in -1isize..3) {
        let objs = objects(s);
        let x: &Arc<_> = &objs[which % objs.len()].object;
        let top = dimension(x).unwrap().map_or(-1, |v| v as isize);
        let inc = skeleton(x, level.min(top)).unwrap();
        let whole = realize(x, 3).unwrap();
        let part = realize(&inc.source, 3).unwrap();
        prop_assert!(realize_map(&part, &whole, &inc).unwrap().is_injective());
    }
}
