mod common;

use filtk::graphk::{fk_module, graph_checks, tor1_fast};
use filtk::ntcat::NtCategory;
use filtk::ntmod::{
    check_exact, projective_dimension, rational_projective_dimension, tor, validate, Engine,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn random_graph_modules() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for space in ["C2", "Z3", "S"] {
        let cat = NtCategory::builtin(space).unwrap();
        for _ in 0..15 {
            let g = common::random_graph(space, &mut rng);
            assert!(graph_checks(&g).triangular);
            let m = fk_module(&g).unwrap();
            assert!(validate(&m, &cat.table, &cat.presentation.relations).is_valid());
            assert!(check_exact(cat, &m).unwrap().is_exact(), "{space}");
            let rep = tor(cat, &m, &[1, 2], Engine::Auto).unwrap();
            assert!(rep.aggregate(2).is_zero(), "{space}");
            assert!(projective_dimension(cat, &m, 2, Engine::Auto).unwrap() <= 2);
            assert!(rational_projective_dimension(cat, &m, 2, Engine::Auto).unwrap() <= 1);
            let flipped = tor(cat, &m.negate_odd(), &[1, 2], Engine::Auto).unwrap();
            assert_eq!(flipped.aggregate(1), rep.aggregate(1));
            if let Some(fast) = tor1_fast(cat, &m).unwrap() {
                assert_eq!(fast, rep.aggregate(1), "{space}");
                let generic = tor(cat, &m, &[1], Engine::Generic).unwrap();
                assert_eq!(generic.aggregate(1), fast);
            }
        }
    }
}
