//! Tor of graph modules, with direct formulas for `Tor_1` over `Z3` and `S`.

use num_bigint::BigInt;

use super::graph::BlockGraph;
use super::kgroups::fk_module;
use crate::error::{Error, Result};
use crate::ntcat::{ArrowKind, NtCategory};
use crate::ntmod::free::{summands, ElemMatrix, Summand};
use crate::ntmod::{tensored_complex, tor, Engine, GradedModule, ModuleEval, TorReport};
use crate::zexact::graded::{GradedNF, Parity};
use crate::zexact::group::{
    quotient_of_lattice, subquotient_homology, AbGroupNF, GroupHom, Homology,
};
use crate::zexact::matrix::IntMatrix;
use crate::zexact::smith::{image_basis, kernel};
use crate::zexact::sparse::SparseRow;

/// Tor of the filtrated K-theory module in the given degrees.
pub fn tor_ck(g: &BlockGraph, ns: &[usize], engine: Engine) -> Result<TorReport> {
    let cat = NtCategory::builtin(g.space.name())?;
    tor(cat, &fk_module(g)?, ns, engine)
}

/// A three-term complex of free right modules whose homology with an exact
/// module is `Tor_1(NT_ss, M)`.
pub struct ShortComplex {
    pub levels: [Vec<Summand>; 3],
    pub d2: ElemMatrix,
    pub d1: ElemMatrix,
}

type Entry<'a> = (usize, usize, i64, ArrowKind, &'a str, &'a str);

fn complex(
    cat: &NtCategory,
    labels: [&[&str]; 3],
    d2: &[Entry],
    d1: &[Entry],
) -> Result<ShortComplex> {
    let t = &cat.table;
    let levels = [
        summands(t, labels[0])?,
        summands(t, labels[1])?,
        summands(t, labels[2])?,
    ];
    let fill = |rows: usize, cols: usize, es: &[Entry]| -> Result<ElemMatrix> {
        let mut m = vec![vec![SparseRow::new(); cols]; rows];
        for &(r, c, sign, kind, s, d) in es {
            m[r][c] = cat
                .word(&[(kind, s, d)])?
                .into_iter()
                .map(|(b, x)| (b, x * sign))
                .collect();
        }
        Ok(m)
    };
    Ok(ShortComplex {
        d2: fill(levels[1].len(), levels[0].len(), d2)?,
        d1: fill(levels[2].len(), levels[1].len(), d1)?,
        levels,
    })
}

/// The complex for `space`, if there is a direct formula.
pub fn tor1_complex(cat: &NtCategory) -> Result<Option<ShortComplex>> {
    use ArrowKind::{Delta as D, I, R};
    match cat.name() {
        "Z3" => complex(
            cat,
            [&["14", "24", "34"], &["124", "134", "234"], &["1234"]],
            &[
                (0, 0, 1, I, "14", "124"),
                (0, 1, -1, I, "24", "124"),
                (1, 0, -1, I, "14", "134"),
                (1, 2, 1, I, "34", "134"),
                (2, 1, 1, I, "24", "234"),
                (2, 2, -1, I, "34", "234"),
            ],
            &[
                (0, 0, 1, I, "124", "1234"),
                (0, 1, 1, I, "134", "1234"),
                (0, 2, 1, I, "234", "1234"),
            ],
        )
        .map(Some),
        "S" => complex(
            cat,
            [&["12'", "4", "13'"], &["34", "1'", "24"], &["234"]],
            &[
                (0, 0, 1, D, "12", "34"),
                (0, 1, -1, I, "4", "34"),
                (1, 0, -1, R, "12", "1"),
                (1, 2, 1, R, "13", "1"),
                (2, 1, 1, I, "4", "24"),
                (2, 2, -1, D, "13", "24"),
            ],
            &[
                (0, 0, 1, I, "34", "234"),
                (0, 1, 1, D, "1", "234"),
                (0, 2, 1, I, "24", "234"),
            ],
        )
        .map(Some),
        _ => Ok(None),
    }
}

/// The short complex tensored with `m` on part `p`, and its homology.
pub fn tor1_fast_part(
    cat: &NtCategory,
    m: &GradedModule,
    p: Parity,
) -> Result<Option<(GroupHom, GroupHom, Homology)>> {
    let Some(c) = tor1_complex(cat)? else {
        return Ok(None);
    };
    let ev = ModuleEval::new(&cat.table, m);
    let [a, b, d] = &c.levels;
    let (f, g) = tensored_complex(&ev, [a, b, d], &c.d2, &c.d1, p)?;
    let h = subquotient_homology(&f, &g)?;
    Ok(Some((f, g, h)))
}

/// `Tor_1(NT_ss, M)` for an exact module over `Z3` or `S`, read off the
/// short complex.
pub fn tor1_fast(cat: &NtCategory, m: &GradedModule) -> Result<Option<GradedNF>> {
    let (Some(e), Some(o)) = (
        tor1_fast_part(cat, m, Parity::Even)?,
        tor1_fast_part(cat, m, Parity::Odd)?,
    ) else {
        return Ok(None);
    };
    Ok(Some(GradedNF {
        even: e.2.group,
        odd: o.2.group,
    }))
}

/// `(ker f ∩ im phi_0) / phi_0(ker f)` for a graph over `Z3`, where `phi_0`
/// is the sum of the matrices of the sets `j4` and `f` the signed coordinate
/// map into the sets `1234 \ k`.
#[derive(Clone, Debug)]
pub struct OddWitness {
    pub group: AbGroupNF,
    /// Columns: a basis of `ker f ∩ im phi_0`.
    pub intersection: IntMatrix,
    /// Columns: a basis of `phi_0(ker f)`.
    pub image: IntMatrix,
}

pub fn z3_odd_witness(g: &BlockGraph) -> Result<OddWitness> {
    if g.space.name() != "Z3" {
        return Err(Error::Graph(
            "the witness lattices are defined over Z3".into(),
        ));
    }
    let x = &g.space;
    let set = |l: &str| x.parse_set(l).map(|s| g.vertices(s));
    let tops = [set("14")?, set("24")?, set("34")?];
    let mids = [set("124")?, set("134")?, set("234")?];
    let signs: [[i64; 3]; 3] = [[1, -1, 0], [-1, 0, 1], [0, 1, -1]];
    let nt: usize = tops.iter().map(Vec::len).sum();
    let nm: usize = mids.iter().map(Vec::len).sum();
    let mut f = IntMatrix::zeros(nm, nt);
    let mut phi0 = IntMatrix::zeros(nt, nt);
    let mut r0 = 0;
    for (r, mid) in mids.iter().enumerate() {
        let mut c0 = 0;
        for (c, top) in tops.iter().enumerate() {
            if signs[r][c] != 0 {
                for (j, v) in top.iter().enumerate() {
                    let i = mid
                        .iter()
                        .position(|w| w == v)
                        .expect("top vertices lie in mid");
                    f.set(r0 + i, c0 + j, BigInt::from(signs[r][c]));
                }
            }
            if r == 0 {
                phi0.set_block(c0, c0, &g.phi_block(top, top));
            }
            c0 += top.len();
        }
        r0 += mid.len();
    }
    let kf = kernel(&f);
    let im = image_basis(&phi0);
    // solutions of kf a = im b
    let both = kernel(&kf.hstack(&(-&im)));
    let a = IntMatrix::from_columns(
        kf.cols(),
        &(0..both.cols())
            .map(|j| both.col(j)[..kf.cols()].to_vec())
            .collect::<Vec<_>>(),
    );
    let inter = image_basis(&(&kf * &a));
    let image = image_basis(&(&phi0 * &kf));
    let group = quotient_of_lattice(&inter, &image).group;
    Ok(OddWitness {
        group,
        intersection: inter,
        image,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::FiniteSpace;

    #[test]
    fn point_graphs_have_no_higher_tor() {
        let a = IntMatrix::from_rows(&[[2, 1], [1, 3]], 2);
        let g = BlockGraph::new(FiniteSpace::point(), vec![(0, 2)], a).unwrap();
        let rep = tor_ck(&g, &[1, 2, 3], Engine::Generic).unwrap();
        for n in 1..=3 {
            assert!(rep.aggregate(n).is_zero());
        }
    }

    #[test]
    fn short_complexes_compose_to_zero() {
        for name in ["Z3", "S"] {
            let cat = NtCategory::builtin(name).unwrap();
            let c = tor1_complex(cat).unwrap().unwrap();
            let t = &cat.table;
            for (l, row) in c.d1.iter().enumerate() {
                for k in 0..c.levels[0].len() {
                    let mut acc = SparseRow::new();
                    for (j, e) in row.iter().enumerate() {
                        let (a, b, d) =
                            (c.levels[0][k].obj, c.levels[1][j].obj, c.levels[2][l].obj);
                        acc = crate::zexact::sparse::axpy(
                            &acc,
                            &BigInt::from(1),
                            &t.compose(a, b, d, &c.d2[j][k], e),
                        );
                    }
                    assert!(acc.iter().all(|(_, x)| x == &BigInt::from(0)), "{name}");
                }
            }
        }
    }
}
