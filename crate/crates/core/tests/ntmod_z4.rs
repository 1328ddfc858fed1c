use filtk::ntcat::NtCategory;
use filtk::ntmod::{length_two_resolution, projective_dimension, tor_for, Engine};
use filtk::zexact::{AbGroupNF, GradedNF};

fn sum(m: &filtk::ntmod::GradedModule, cat: &NtCategory, labels: &[&str]) -> GradedNF {
    labels
        .iter()
        .map(|l| m.entry_nf(cat.table.object(l).unwrap()))
        .fold(GradedNF::default(), |a, b| a.direct_sum(&b))
}

fn graded(even: usize, odd: usize) -> GradedNF {
    GradedNF {
        even: AbGroupNF::free(even),
        odd: AbGroupNF::free(odd),
    }
}

#[test]
fn entries_of_the_cokernel() {
    let cat = NtCategory::builtin("Z4").unwrap();
    let m = length_two_resolution(cat)
        .unwrap()
        .module(&cat.table)
        .unwrap();
    let (l5, top) = (
        sum(&m, cat, &["15", "25", "35", "45"]),
        sum(&m, cat, &["12345"]),
    );
    let faces = sum(&m, cat, &["1235", "1245", "1345", "2345"]);
    // the three nodes of the cyclic sequence at S_12345, each graded as a whole
    assert_eq!(l5.direct_sum(&top.shift()), graded(0, 3));
    assert_eq!(
        sum(&m, cat, &["125", "135", "145", "235", "245", "345"]),
        graded(6, 0)
    );
    assert_eq!(
        sum(&m, cat, &["5"]).direct_sum(&faces.shift()),
        graded(0, 9)
    );
    assert_eq!((l5, top, faces), (graded(0, 0), graded(3, 0), graded(8, 0)));
}

#[test]
fn tor_two_and_projective_dimension() {
    let cat = NtCategory::builtin("Z4").unwrap();
    let r = length_two_resolution(cat).unwrap();
    let m = r.module(&cat.table).unwrap();
    let y = cat.table.object("12345").unwrap();
    let rep = tor_for(cat, &m, &[y], &[2], Engine::Builtin).unwrap();
    assert_eq!(rep.at("12345", 2).unwrap(), &graded(1, 0));
    assert_eq!(projective_dimension(cat, &m, 4, Engine::Auto).unwrap(), 2);
    for k in [2u64, 3, 5] {
        let mk = m.tensor_mod_k(k).unwrap();
        let rep = tor_for(cat, &mk, &[y], &[2], Engine::Builtin).unwrap();
        let g = rep.at("12345", 2).unwrap();
        assert_eq!(g.even, AbGroupNF::from_cyclic(0, &[k.into()]));
        assert!(g.odd.is_zero());
        assert_eq!(projective_dimension(cat, &mk, 4, Engine::Auto).unwrap(), 3);
        r.mod_k(&cat.table, k as i64)
            .unwrap()
            .check(&cat.table, &mk)
            .unwrap();
    }
}
