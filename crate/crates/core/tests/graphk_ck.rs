use filtk::graphk::{fk_module, graph_checks, BlockGraph, GraphFile};
use filtk::ntcat::NtCategory;
use filtk::ntmod::{check_exact, tor, validate, Engine};

fn load(text: &str) -> BlockGraph {
    BlockGraph::from_file(&serde_json::from_str::<GraphFile>(text).unwrap()).unwrap()
}

fn ck_z3() -> BlockGraph {
    load(include_str!("../../../fixtures/ck_z3.json"))
}

fn ck_s() -> BlockGraph {
    load(include_str!("../../../fixtures/ck_s.json"))
}

#[test]
fn examples_pass_the_structural_checks() {
    for g in [ck_z3(), ck_s()] {
        let r = graph_checks(&g);
        assert!(r.all_pass(), "{r:?}");
    }
}

#[test]
fn fk_modules_are_valid_and_exact() {
    for g in [ck_z3(), ck_s()] {
        let cat = NtCategory::builtin(g.space.name()).unwrap();
        let m = fk_module(&g).unwrap();
        let v = validate(&m, &cat.table, &cat.presentation.relations);
        assert!(v.is_valid(), "{:?}", v.violations);
        let e = check_exact(cat, &m).unwrap();
        assert!(e.is_exact(), "{:?}", e.first_failure());
        let rep = tor(cat, &m, &[1, 2], Engine::Auto).unwrap();
        println!(
            "{}: Tor_1 {} / Tor_2 {}",
            g.space.name(),
            rep.aggregate(1),
            rep.aggregate(2)
        );
    }
}

fn col(m: &filtk::zexact::matrix::IntMatrix, j: usize) -> Vec<i64> {
    m.col(j).iter().map(|x| i64::try_from(x).unwrap()).collect()
}

#[test]
fn z3_odd_witness_lattices() {
    let w = filtk::graphk::z3_odd_witness(&ck_z3()).unwrap();
    assert_eq!(w.group.to_string(), "Z/2");
    assert_eq!((w.intersection.cols(), w.image.cols()), (1, 1));
    let base = [1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0];
    let (a, b) = (col(&w.intersection, 0), col(&w.image, 0));
    let up_to_sign = |v: &[i64], k: i64| {
        v.iter().zip(&base).all(|(x, y)| *x == k * y)
            || v.iter().zip(&base).all(|(x, y)| *x == -k * y)
    };
    assert!(up_to_sign(&a, 1), "{a:?}");
    assert!(up_to_sign(&b, 2), "{b:?}");
}

#[test]
fn s_even_complex() {
    use filtk::graphk::tor1_fast_part;
    use filtk::zexact::graded::Parity;
    use num_bigint::BigInt;
    let cat = NtCategory::builtin("S").unwrap();
    let (f, g, h) = tor1_fast_part(cat, &fk_module(&ck_s()).unwrap(), Parity::Even)
        .unwrap()
        .unwrap();
    assert_eq!(f.source.normal_form().to_string(), "Z^2 + Z/2");
    assert_eq!(
        f.target.normal_form().to_string(),
        "Z^1 + Z/2 + Z/2 + Z/2 + Z/2"
    );
    assert_eq!(g.target.normal_form().to_string(), "Z/2 + Z/2 + Z/2");
    assert_eq!(h.group.to_string(), "Z/2");
    for s in [1, -1] {
        let x: Vec<BigInt> = [0, 1, s, 0, 1].into_iter().map(BigInt::from).collect();
        let c = h.class_of(&x).expect("a cycle");
        assert!(
            c.iter().any(|v| v != &BigInt::from(0)),
            "class of {x:?} vanishes"
        );
    }
}

#[test]
fn fast_path_matches_the_generic_engine() {
    use filtk::graphk::{tor1_fast, tor_ck};
    for g in [ck_z3(), ck_s()] {
        let cat = NtCategory::builtin(g.space.name()).unwrap();
        let fast = tor1_fast(cat, &fk_module(&g).unwrap()).unwrap().unwrap();
        let slow = tor_ck(&g, &[1], Engine::Generic).unwrap();
        assert_eq!(fast, slow.aggregate(1), "{}", g.space.name());
    }
}
