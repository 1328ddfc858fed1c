//! The ideal generated by non-identity arrows and its complement spanned by
//! identities.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::closure::HomTable;
use crate::zexact::matrix::IntMatrix;
use crate::zexact::smith::{image_basis, rank};
use crate::zexact::sparse::SparseRow;

/// Lattice bases, per ordered object pair, of the nil ideal and its powers.
#[derive(Clone, Debug)]
pub struct RingIdealData {
    /// `nil[a][b]`: columns span the ideal inside Hom(a, b).
    pub nil: Vec<Vec<IntMatrix>>,
    /// Identity elements, one per object.
    pub ss: Vec<SparseRow>,
    pub nilpotency_index: Option<usize>,
    pub nilpotent: bool,
    pub semidirect: bool,
}

impl RingIdealData {
    pub fn nil_rank(&self) -> usize {
        self.nil.iter().flatten().map(|m| m.cols()).sum()
    }
}

pub(crate) fn dense(v: &[(usize, BigInt)], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (k, x) in v {
        out[*k] += x;
    }
    out
}

pub(crate) fn sparse(v: &[BigInt]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| (k, x.clone()))
        .collect()
}

fn lattice(t: &HomTable, a: usize, b: usize, gens: &[SparseRow]) -> IntMatrix {
    let n = t.dim(a, b);
    if gens.is_empty() || n == 0 {
        return IntMatrix::zeros(n, 0);
    }
    let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| dense(g, n)).collect();
    image_basis(&IntMatrix::from_columns(n, &cols))
}

/// Products `y o x` with `x` from `left[a][b]` and `y` from `right[b][c]`.
fn product(t: &HomTable, left: &[Vec<IntMatrix>], right: &[Vec<IntMatrix>]) -> Vec<Vec<IntMatrix>> {
    let n = t.len();
    let mut out = vec![vec![IntMatrix::zeros(0, 0); n]; n];
    for a in 0..n {
        for c in 0..n {
            let mut gens = Vec::new();
            for b in 0..n {
                let (l, r) = (&left[a][b], &right[b][c]);
                for i in 0..l.cols() {
                    let x = sparse(&l.col(i));
                    for j in 0..r.cols() {
                        let v = t.compose(a, b, c, &x, &sparse(&r.col(j)));
                        if !v.is_empty() {
                            gens.push(v);
                        }
                    }
                }
            }
            out[a][c] = lattice(t, a, c, &gens);
        }
    }
    out
}

/// Computes the ideal generated by all arrows, its nilpotency index and
/// whether every Hom group splits as ideal plus identities.
pub fn ideal_checks(t: &HomTable) -> RingIdealData {
    let n = t.len();
    let full: Vec<Vec<IntMatrix>> = (0..n)
        .map(|a| (0..n).map(|b| IntMatrix::identity(t.dim(a, b))).collect())
        .collect();
    let mut arrows = vec![vec![Vec::new(); n]; n];
    for (k, ar) in t.quiver.arrows.iter().enumerate() {
        arrows[ar.src][ar.dst].push(t.arrow(k).clone());
    }
    let arrows: Vec<Vec<IntMatrix>> = (0..n)
        .map(|a| (0..n).map(|b| lattice(t, a, b, &arrows[a][b])).collect())
        .collect();
    let nil = product(t, &full, &product(t, &arrows, &full));
    let nil: Vec<Vec<IntMatrix>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let m = nil[a][b].hstack(&arrows[a][b]);
                    if m.cols() == 0 {
                        m
                    } else {
                        image_basis(&m)
                    }
                })
                .collect()
        })
        .collect();

    let ss: Vec<SparseRow> = (0..n).map(|a| t.identity(a).clone()).collect();
    let mut semidirect = true;
    for a in 0..n {
        for b in 0..n {
            let d = t.dim(a, b);
            let mut m = nil[a][b].clone();
            if a == b {
                m = m.hstack(&IntMatrix::column(&dense(&ss[a], d)));
            }
            if m.cols() != d || (d > 0 && rank(&m) != d) || !unimodular(&m) {
                semidirect = false;
            }
        }
    }

    let bound = t.max_len + 1;
    let mut power = nil.clone();
    let mut index = None;
    for k in 1..=bound {
        if power.iter().flatten().all(|m| m.cols() == 0) {
            index = Some(k);
            break;
        }
        power = product(t, &power, &nil);
    }
    RingIdealData {
        nil,
        ss,
        nilpotency_index: index,
        nilpotent: index.is_some(),
        semidirect,
    }
}

fn unimodular(m: &IntMatrix) -> bool {
    if m.rows() == 0 {
        return true;
    }
    let f = crate::zexact::smith::invariant_factors(m);
    f.len() == m.rows() && f.iter().all(|x| x.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntcat::{hom_closure, CatPresentation, GradedQuiver, NtCategory};

    #[test]
    fn trivial_category() {
        let q = GradedQuiver::new(vec!["pt".into()]).unwrap();
        let t = hom_closure(&CatPresentation::new("pt", q), 2).unwrap();
        let d = ideal_checks(&t);
        assert_eq!(d.nil_rank(), 0);
        assert!(d.nilpotent && d.semidirect);
        assert_eq!(d.nilpotency_index, Some(1));
    }

    #[test]
    fn square_zero_loop() {
        // a loop x with x^2 = 0: ideal spanned by x, index 2
        let mut q = GradedQuiver::new(vec!["A".into()]).unwrap();
        q.add_arrow("A", "A", "x", crate::ntcat::ArrowKind::I)
            .unwrap();
        let mut p = CatPresentation::new("loop", q);
        p.add_relation(&[(1, &["x", "x"])]).unwrap();
        let t = hom_closure(&p, 4).unwrap();
        let d = ideal_checks(&t);
        assert_eq!(d.nil_rank(), 1);
        assert_eq!(d.nilpotency_index, Some(2));
        assert!(d.semidirect);
    }

    #[test]
    fn z2_and_c2() {
        for name in ["Z2", "C2"] {
            let cat = NtCategory::builtin(name).unwrap();
            let d = ideal_checks(&cat.table);
            assert!(d.nilpotent && d.semidirect, "{name}");
            let n = cat.table.len();
            assert_eq!(d.nil_rank() + n, cat.table.total_rank());
        }
    }
}
