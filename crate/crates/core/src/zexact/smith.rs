//! Smith normal form with transformation matrices, and the lattice
//! operations built on it (kernels, images, solving over Z).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `u * a * v == s`, `s` diagonal with `d_1 | d_2 | ...`, all `d_i >= 0`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `u`; kept because image lattices need it.
    pub u_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

struct Tracker {
    u: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Tracker {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(a, b);
        }
    }
    // row[dst] += k row[src]  =>  U <- E U,  U^-1 <- U^-1 E^-1 (col[src] -= k col[dst])
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, k);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.add_col_multiple(src, dst, &-k);
        }
    }
    fn negate_row(&mut self, i: usize) {
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(i);
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
    }
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, k);
        }
    }
}

fn diagonalize(mut a: IntMatrix, tr: &mut Tracker) -> (IntMatrix, usize) {
    let (m, n) = (a.rows(), a.cols());
    let mut t = 0;
    while t < m && t < n {
        // pivot of minimal absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if a.get(bi, bj).abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        tr.swap_rows(t, pi);
        a.swap_cols(t, pj);
        tr.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            // clear column t
            for i in t + 1..m {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                let nq = -q;
                a.add_row_multiple(i, t, &nq);
                tr.add_row(i, t, &nq);
                if !a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            // clear row t
            for j in t + 1..n {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                let nq = -q;
                a.add_col_multiple(j, t, &nq);
                tr.add_col(j, t, &nq);
                if !a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remaining entry of row/column t to the pivot
                let mut bi = t;
                let mut bj = t;
                for i in t + 1..m {
                    let x = a.get(i, t);
                    if !x.is_zero() && x.abs() < a.get(bi, bj).abs() {
                        bi = i;
                        bj = t;
                    }
                }
                for j in t + 1..n {
                    let x = a.get(t, j);
                    if !x.is_zero() && x.abs() < a.get(bi, bj).abs() {
                        bi = t;
                        bj = j;
                    }
                }
                a.swap_rows(t, bi);
                tr.swap_rows(t, bi);
                a.swap_cols(t, bj);
                tr.swap_cols(t, bj);
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = a.get(t, t).clone();
            let mut offender = None;
            'search: for i in t + 1..m {
                for j in t + 1..n {
                    if !a.get(i, j).is_multiple_of(&p) {
                        offender = Some(i);
                        break 'search;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    tr.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            tr.negate_row(t);
        }
        t += 1;
    }
    (a, t)
}

/// Smith normal form `u * a * v = s`.
pub fn smith(a: &IntMatrix) -> SmithForm {
    let mut tr = Tracker {
        u: Some(IntMatrix::identity(a.rows())),
        u_inv: Some(IntMatrix::identity(a.rows())),
        v: Some(IntMatrix::identity(a.cols())),
    };
    let (s, rank) = diagonalize(a.clone(), &mut tr);
    SmithForm {
        u: tr.u.unwrap(),
        s,
        v: tr.v.unwrap(),
        u_inv: tr.u_inv.unwrap(),
        rank,
    }
}

/// Diagonal only; cheaper when no transforms are needed.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut tr = Tracker {
        u: None,
        u_inv: None,
        v: None,
    };
    let (s, rank) = diagonalize(a.clone(), &mut tr);
    (0..rank).map(|i| s.get(i, i).clone()).collect()
}

pub fn rank(a: &IntMatrix) -> usize {
    column_echelon(a).len()
}

/// Columns form a lattice basis of `{x : a x = 0}`.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let mut tr = Tracker {
        u: None,
        u_inv: None,
        v: Some(IntMatrix::identity(a.cols())),
    };
    let (_, r) = diagonalize(a.clone(), &mut tr);
    let v = tr.v.unwrap();
    let cols: Vec<usize> = (r..a.cols()).collect();
    v.select_cols(&cols)
}

/// Lattice basis (as columns) of the column span of `a`.
pub fn image_basis(a: &IntMatrix) -> IntMatrix {
    let cols = column_echelon(a);
    IntMatrix::from_columns(a.rows(), &cols)
}

/// Integer solution of `a x = b`, if one exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let sf = smith(a);
    solve_with(&sf, b)
}

/// Solve using a precomputed Smith form of `a`.
pub fn solve_with(sf: &SmithForm, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ub = sf.u.mul_vec(b);
    let n = sf.v.rows();
    let mut y = vec![BigInt::zero(); n];
    for (i, x) in ub.iter().enumerate() {
        if i < sf.rank {
            let d = sf.s.get(i, i);
            let (q, r) = x.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !x.is_zero() {
            return None;
        }
    }
    Some(sf.v.mul_vec(&y))
}

pub fn in_column_span(a: &IntMatrix, b: &[BigInt]) -> bool {
    if b.iter().all(|x| x.is_zero()) {
        return true;
    }
    if a.cols() == 0 {
        return false;
    }
    solve(a, b).is_some()
}

/// Column-style Hermite reduction returning a basis of the column lattice.
///
/// Works on the transpose as rows: classic row echelon with gcd steps.
fn column_echelon(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = a.columns();
    let dim = a.rows();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut pivot_row = 0;
    let mut pool: Vec<Vec<BigInt>> = rows
        .drain(..)
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    while pivot_row < dim && !pool.is_empty() {
        // gcd-reduce all vectors on coordinate pivot_row
        loop {
            let mut idx: Option<usize> = None;
            for (k, r) in pool.iter().enumerate() {
                if r[pivot_row].is_zero() {
                    continue;
                }
                match idx {
                    Some(b) if pool[b][pivot_row].abs() <= r[pivot_row].abs() => {}
                    _ => idx = Some(k),
                }
            }
            let Some(p) = idx else { break };
            let piv = pool[p].clone();
            let mut others_nonzero = false;
            for (k, r) in pool.iter_mut().enumerate() {
                if k == p || r[pivot_row].is_zero() {
                    continue;
                }
                let q = r[pivot_row].div_floor(&piv[pivot_row]);
                for (x, y) in r.iter_mut().zip(&piv) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
                if !r[pivot_row].is_zero() {
                    others_nonzero = true;
                }
            }
            if !others_nonzero {
                let mut v = pool.swap_remove(p);
                if v[pivot_row].is_negative() {
                    for x in v.iter_mut() {
                        *x = -std::mem::take(x);
                    }
                }
                basis.push(v);
                break;
            }
        }
        pool.retain(|r| r.iter().any(|x| !x.is_zero()));
        pivot_row += 1;
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zexact::matrix::ivec;

    fn check(a: &IntMatrix) -> SmithForm {
        let sf = smith(a);
        assert_eq!(&(&sf.u * a) * &sf.v, sf.s);
        assert_eq!(&sf.u * &sf.u_inv, IntMatrix::identity(a.rows()));
        for i in 0..sf.s.rows() {
            for j in 0..sf.s.cols() {
                if i != j {
                    assert!(sf.s.get(i, j).is_zero());
                }
            }
        }
        for i in 1..sf.rank {
            assert!(sf.s.get(i, i).is_multiple_of(sf.s.get(i - 1, i - 1)));
        }
        sf
    }

    #[test]
    fn zero_one_by_one() {
        let a = IntMatrix::from_rows(&[[0]], 1);
        let sf = check(&a);
        assert_eq!(sf.s, a);
        assert_eq!(sf.u, IntMatrix::identity(1));
        assert_eq!(sf.v, IntMatrix::identity(1));
    }

    #[test]
    fn two_by_two() {
        // rows reduce to (2 0; 0 -4) by hand, normalized to (2, 4)
        let a = IntMatrix::from_rows(&[[2, 4], [6, 8]], 2);
        let sf = check(&a);
        assert_eq!(sf.invariant_factors(), ivec(&[2, 4]));
    }

    #[test]
    fn identity_is_fixed() {
        let a = IntMatrix::identity(3);
        let sf = check(&a);
        assert_eq!(sf.s, a);
        assert_eq!(sf.u, a);
        assert_eq!(sf.v, a);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel(&IntMatrix::from_rows(&[[1, 1, 1]], 3));
        assert_eq!(k.cols(), 2);
        assert!((&IntMatrix::from_rows(&[[1, 1, 1]], 3) * &k).is_zero());
        // unimodular check: the basis spans (1,-1,0) and (0,1,-1)
        let span = image_basis(&k);
        assert!(in_column_span(&span, &ivec(&[1, -1, 0])));
        assert!(in_column_span(&span, &ivec(&[0, 1, -1])));

        assert_eq!(kernel(&IntMatrix::identity(4)).cols(), 0);

        let k = kernel(&IntMatrix::from_rows(&[[2, 2], [2, 2]], 2));
        assert_eq!(k.cols(), 1);
        let c = k.col(0);
        assert!(c == ivec(&[1, -1]) || c == ivec(&[-1, 1]));
    }

    #[test]
    fn solve_over_z() {
        let a = IntMatrix::from_rows(&[[2, 0], [0, 3]], 2);
        assert!(solve(&a, &ivec(&[4, 9])).is_some());
        assert!(solve(&a, &ivec(&[1, 0])).is_none());
    }
}
