mod common;

use filtk::finspace::{FiniteSpace, BUILTIN_SPACES};
use filtk::graphk::{fk_module, k_groups, tor_ck};
use filtk::ntcat::NtCategory;
use filtk::ntmod::{tor, Engine, TorReport};
use filtk::zexact::{
    kernel, rank, smith, subquotient_homology, AbGroupNF, GroupHom, IntMatrix, Presentation,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c)
            .prop_map(move |v| IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()))
    })
}

fn is_unimodular(m: &IntMatrix) -> bool {
    let n = m.rows();
    let f = smith(m).invariant_factors();
    m.is_square() && f.len() == n && f.iter().all(|d| d == &BigInt::from(1))
}

/// A unimodular matrix from a sequence of elementary operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64, bool)]) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n == 0 {
        return m;
    }
    for &(i, j, k, swap) in ops {
        let (i, j) = (i % n, j % n);
        for c in 0..n {
            if swap {
                let (a, b) = (m.get(i, c).clone(), m.get(j, c).clone());
                m.set(i, c, b);
                m.set(j, c, a);
            } else if i != j {
                let v = m.get(i, c) + m.get(j, c) * k;
                m.set(i, c, v);
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_form_is_a_diagonal_divisor_chain(a in matrix(5, 6)) {
        let sf = smith(&a);
        prop_assert_eq!(&(&sf.u * &a) * &sf.v, sf.s.clone());
        prop_assert!(sf.u.rows() == 0 || is_unimodular(&sf.u));
        prop_assert!(sf.v.rows() == 0 || is_unimodular(&sf.v));
        let d = sf.invariant_factors();
        for (i, x) in d.iter().enumerate() {
            prop_assert!(x > &BigInt::from(0));
            if i + 1 < d.len() {
                prop_assert_eq!(&d[i + 1] % x, BigInt::from(0));
            }
        }
        for i in 0..sf.s.rows() {
            for j in 0..sf.s.cols() {
                prop_assert!(i == j || sf.s.get(i, j) == &BigInt::from(0));
            }
        }
    }

    #[test]
    fn normal_form_ignores_unimodular_changes(
        a in matrix(4, 5),
        rops in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3, any::<bool>()), 0..8),
        cops in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3, any::<bool>()), 0..8),
    ) {
        let p = Presentation::new(a.rows(), a.clone());
        let b = &(&unimodular(a.rows(), &rops) * &a) * &unimodular(a.cols(), &cops);
        let q = Presentation::new(b.rows(), b);
        let nf = p.normal_form();
        prop_assert_eq!(&nf, &q.normal_form());
        prop_assert_eq!(nf.rank, a.rows() - rank(&a));
        prop_assert!(nf.torsion.iter().all(|d| d > &BigInt::from(1)));
    }

    #[test]
    fn group_strings_round_trip(rank in 0usize..4, orders in proptest::collection::vec(0i64..12, 0..5)) {
        let g = AbGroupNF::from_cyclic(rank, &orders.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>());
        prop_assert_eq!(AbGroupNF::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn homology_survives_negating_both_maps(g in matrix(4, 3), coeffs in proptest::collection::vec(-3i64..=3, 12)) {
        // columns of f are combinations of a kernel basis, so g f = 0
        let k = kernel(&g);
        let c = IntMatrix::from_vec(k.cols(), 3, coeffs[..3 * k.cols()].iter().map(|&x| BigInt::from(x)).collect());
        let f = &k * &c;
        let hom = |m: &IntMatrix| GroupHom::new_unchecked(Presentation::free(m.cols()), Presentation::free(m.rows()), m.clone());
        let h = subquotient_homology(&hom(&f), &hom(&g)).unwrap();
        let h2 = subquotient_homology(&hom(&-&f), &hom(&-&g)).unwrap();
        prop_assert_eq!(h.group, h2.group);
    }
}

#[test]
fn builtin_topologies_are_lattices() {
    for name in BUILTIN_SPACES {
        let x = FiniteSpace::builtin(name).unwrap();
        let opens: Vec<_> = x.opens().collect();
        assert!(x.is_open(x.full()) && opens.iter().any(|o| o.is_empty()));
        for a in &opens {
            for b in &opens {
                assert!(x.is_open(a.union(*b)) && x.is_open(a.inter(*b)), "{name}");
            }
        }
        assert!(x.is_t0());
        for s in x.lc_subsets(false) {
            assert!(s.v.is_subset(s.u) && s.u.minus(s.v) == s.value);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn graph_invariants(seed in any::<u64>(), space in prop::sample::select(vec!["Z3", "S", "C2"])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_graph(space, &mut rng);
        let cat = NtCategory::builtin(space).unwrap();
        // rank-nullity on every object
        for k in 0..cat.table.len() {
            let s = k_groups(&g, cat.object_set(k)).unwrap();
            prop_assert_eq!(s.k1.rank + rank(&s.phi), s.vertices.len());
            prop_assert_eq!(s.k0.rank, s.k1.rank);
        }
        let m = fk_module(&g).unwrap();
        let rep = tor(cat, &m, &[1, 2], Engine::Auto).unwrap();
        let flipped = tor(cat, &m.negate_odd(), &[1, 2], Engine::Auto).unwrap();
        prop_assert_eq!(&rep.entries, &flipped.entries);
        prop_assert_eq!(TorReport::from_json(&rep.to_json()).unwrap().entries, rep.entries.clone());
        let per_object = AbGroupNF::sum_all(rep.entries.values().filter_map(|m| m.get(&1)).map(|g| &g.odd));
        prop_assert_eq!(per_object, rep.aggregate(1).odd);
        prop_assert_eq!(tor_ck(&g, &[1, 2], Engine::Auto).unwrap().entries, rep.entries);
    }
}
