use filtk::ntcat::elementary::derived_presentation;
use filtk::ntcat::{
    builtin_presentation, hom_closure, ideal_checks, ArrowKind, ElemMap, HomTable, NtCategory,
};
use filtk::zexact::graded::Parity;
use num_bigint::BigInt;

const ALL: [&str; 6] = ["Z1", "Z2", "Z3", "Z4", "S", "C2"];

fn compose_path(
    t: &HomTable,
    objs: &[usize],
    elems: &[Vec<(usize, BigInt)>],
) -> Vec<(usize, BigInt)> {
    let mut v = t.identity(objs[0]).clone();
    for (k, e) in elems.iter().enumerate() {
        v = t.compose(objs[0], objs[k], objs[k + 1], &v, e);
    }
    v
}

#[test]
fn tables_are_associative_and_satisfy_relations() {
    for name in ALL {
        let cat = NtCategory::builtin(name).unwrap();
        cat.table
            .verify_structure()
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        cat.table.relations_vanish(&cat.presentation).unwrap();
    }
}

#[test]
fn total_ranks() {
    let expect = [
        ("Z1", 6),
        ("Z2", 20),
        ("Z3", 65),
        ("Z4", 230),
        ("S", 65),
        ("C2", 106),
    ];
    for (name, r) in expect {
        assert_eq!(
            NtCategory::builtin(name).unwrap().table.total_rank(),
            r,
            "{name}"
        );
    }
}

#[test]
fn ideal_is_nilpotent_and_split() {
    for name in ALL {
        let cat = NtCategory::builtin(name).unwrap();
        let d = ideal_checks(&cat.table);
        assert!(d.nilpotent, "{name}");
        assert!(d.semidirect, "{name}");
        assert!(d.nilpotency_index.unwrap() <= cat.table.max_len + 1);
        assert_eq!(d.ss.len(), cat.table.len());
    }
}

#[test]
fn derived_relations_match_printed_ones() {
    for m in 1..=3 {
        let name = format!("Z{m}");
        let cat = NtCategory::builtin(&name).unwrap();
        let derived = derived_presentation(&cat.space, &name, &cat.gens).unwrap();
        let t = hom_closure(&derived, cat.table.max_len).unwrap();
        assert_eq!(t.total_rank(), cat.table.total_rank());
        t.relations_vanish(&cat.presentation).unwrap();
        cat.table.relations_vanish(&derived).unwrap();
    }
}

#[test]
fn reconstructed_flags() {
    for name in ALL {
        let p = builtin_presentation(name).unwrap();
        assert_eq!(p.reconstructed, name == "S" || name == "C2");
    }
    assert!(builtin_presentation("Z5").is_err());
}

#[test]
fn minimal_open_sets_represent_points() {
    // Hom(U_x, Y) is Z in even degree when x lies in Y and zero otherwise
    for name in ALL {
        let cat = NtCategory::builtin(name).unwrap();
        let x = &cat.space;
        for p in 0..x.len() {
            let a = cat.object_of(x.min_open(p)).unwrap();
            for b in 0..cat.table.len() {
                let y = cat.object_set(b);
                let want = if y.contains(p) { (1, 0) } else { (0, 0) };
                assert_eq!(
                    cat.table.graded_rank(a, b),
                    want,
                    "{name} {} -> {}",
                    x.render(x.min_open(p)),
                    x.render(y)
                );
            }
        }
    }
}

#[test]
fn pseudocircle_endomorphisms() {
    let cat = NtCategory::builtin("C2").unwrap();
    let x = &cat.space;
    let s = |l: &str| x.parse_set(l).unwrap();
    let full = cat.object_of(x.full()).unwrap();
    assert_eq!(cat.table.graded_rank(full, full), (1, 1));

    let r = cat
        .element(&ElemMap::new(ArrowKind::R, s("1234"), s("1")))
        .unwrap();
    let d = cat
        .element(&ElemMap::new(ArrowKind::Delta, s("1"), s("3")))
        .unwrap();
    let i = cat
        .element(&ElemMap::new(ArrowKind::I, s("3"), s("1234")))
        .unwrap();
    let objs = [
        full,
        cat.object_of(s("1")).unwrap(),
        cat.object_of(s("3")).unwrap(),
        full,
    ];
    let lp = compose_path(&cat.table, &objs, &[r, d, i]);
    assert!(!lp.is_empty());
    assert_eq!(cat.table.parity_of(full, full, &lp), Some(Parity::Odd));
    assert!(cat.table.compose(full, full, full, &lp, &lp).is_empty());
}

#[test]
fn cache_roundtrip() {
    let cat = NtCategory::builtin("Z3").unwrap();
    let json = serde_json::to_string(&cat.table.to_cache()).unwrap();
    let back = HomTable::from_cache(&serde_json::from_str(&json).unwrap()).unwrap();
    assert_eq!(back.total_rank(), 65);
    back.relations_vanish(&cat.presentation).unwrap();
    let a = cat.object_of(cat.space.full()).unwrap();
    assert_eq!(back.graded_rank(a, a), cat.table.graded_rank(a, a));
}
