#![allow(dead_code)]

use filtk::ntcat::NtCategory;
use filtk::ntmod::{coker_module, GradedModule, Summand, Variance};
use filtk::zexact::Parity;
use num_bigint::BigInt;
use rand::Rng;

fn random_sums(cat: &NtCategory, rng: &mut impl Rng, n: usize) -> Vec<Summand> {
    (0..n)
        .map(|_| {
            Summand::new(
                rng.gen_range(0..cat.table.len()),
                Parity::from_bit(rng.gen_range(0..2)),
            )
        })
        .collect()
}

/// Cokernel of a random map between small sums of free left modules.
pub fn random_module(cat: &NtCategory, rng: &mut impl Rng) -> GradedModule {
    let t = &cat.table;
    let (nd, ns) = (rng.gen_range(1..=3), rng.gen_range(0..=3));
    let dst = random_sums(cat, rng, nd);
    let src = random_sums(cat, rng, ns);
    let mut f = vec![vec![Vec::new(); src.len()]; dst.len()];
    for (l, d) in dst.iter().enumerate() {
        for (k, s) in src.iter().enumerate() {
            for (i, e) in t.basis(d.obj, s.obj).iter().enumerate() {
                let x: i64 = rng.gen_range(-2..=2);
                if e.parity == s.shift + d.shift && x != 0 && rng.gen_bool(0.6) {
                    f[l][k].push((i, BigInt::from(x)));
                }
            }
        }
    }
    coker_module(t, Variance::Left, &src, &dst, &f).expect("random cokernel")
}

/// A random graph over `space` whose edges respect the open hulls, with a
/// loop at every vertex so there are no sinks or sources.
pub fn random_graph(space: &str, rng: &mut impl Rng) -> filtk::graphk::BlockGraph {
    use filtk::finspace::FiniteSpace;
    use filtk::zexact::matrix::IntMatrix;
    let x = FiniteSpace::builtin(space).unwrap();
    let mut pts: Vec<usize> = (0..x.len()).collect();
    pts.sort_by_key(|&p| x.min_open(p).len());
    let blocks: Vec<(usize, usize)> = pts.iter().map(|&p| (p, rng.gen_range(1..=3))).collect();
    let owner: Vec<usize> = blocks
        .iter()
        .flat_map(|&(p, k)| std::iter::repeat(p).take(k))
        .collect();
    let n = owner.len();
    let mut a = IntMatrix::zeros(n, n);
    for v in 0..n {
        for w in 0..n {
            let lo = if v == w { 1 } else { 0 };
            if x.min_open(owner[v]).contains(owner[w]) {
                a.set(v, w, BigInt::from(rng.gen_range(lo..=3)));
            }
        }
    }
    filtk::graphk::BlockGraph::new(x, blocks, a).unwrap()
}
