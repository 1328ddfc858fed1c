//! Incremental integer row echelon form over sparse rows.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Sparse row: `(column, value)` pairs, sorted by column, no zeros.
pub type SparseRow = Vec<(usize, BigInt)>;

/// `a + k * b`
pub fn axpy(a: &[(usize, BigInt)], k: &BigInt, b: &[(usize, BigInt)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, k * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + k * &b[j].1;
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_row(a: &[(usize, BigInt)], k: &BigInt) -> SparseRow {
    if k.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(c, v)| (*c, v * k)).collect()
}

/// Hermite-style echelon form of the lattice spanned by the inserted rows,
/// with pivots at the smallest column of each row.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivots.contains_key(&c)
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.pivots.values()
    }

    /// Whether every pivot entry is a unit.
    pub fn unit_pivots(&self) -> bool {
        self.pivots
            .values()
            .all(|r| r[0].1.abs() == BigInt::from(1))
    }

    /// Adds a row to the lattice; returns whether the lattice changed.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut v: SparseRow = row.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        let mut changed = false;
        loop {
            let Some((c, b)) = v.first().cloned() else {
                return changed;
            };
            let Some(p) = self.pivots.get_mut(&c) else {
                if b.is_negative() {
                    v = scale_row(&v, &BigInt::from(-1));
                }
                self.pivots.insert(c, v);
                return true;
            };
            let a = p[0].1.clone();
            if (&b % &a).is_zero() {
                v = axpy(&v, &-(&b / &a), p);
            } else {
                let e = a.extended_gcd(&b);
                let g = e.gcd.abs();
                let sign = if e.gcd.is_negative() {
                    BigInt::from(-1)
                } else {
                    BigInt::from(1)
                };
                let newp = axpy(&scale_row(p, &(&e.x * &sign)), &(&e.y * &sign), &v);
                let newv = axpy(&scale_row(p, &(&b / &g)), &-(&a / &g), &v);
                *p = newp;
                v = newv;
                changed = true;
            }
        }
    }

    /// Subtracts pivot rows wherever the pivot divides the entry.
    pub fn reduce(&self, row: &[(usize, BigInt)]) -> SparseRow {
        let mut v: SparseRow = row.to_vec();
        let mut cursor = 0;
        loop {
            let next = v.iter().position(|(c, x)| {
                *c >= cursor && self.pivots.get(c).is_some_and(|p| (x % &p[0].1).is_zero())
            });
            let Some(k) = next else {
                return v;
            };
            let (c, x) = v[k].clone();
            let p = &self.pivots[&c];
            v = axpy(&v, &-(&x / &p[0].1), p);
            cursor = c + 1;
        }
    }

    /// Whether the row lies in the lattice (only exact when pivots are units).
    pub fn contains(&self, row: &[(usize, BigInt)]) -> bool {
        self.reduce(row).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[(usize, i64)]) -> SparseRow {
        v.iter().map(|&(c, x)| (c, BigInt::from(x))).collect()
    }

    #[test]
    fn gcd_pivots() {
        let mut e = SparseEchelon::new();
        assert!(e.insert(row(&[(0, 4), (1, 1)])));
        assert!(e.insert(row(&[(0, 6), (2, 1)])));
        assert_eq!(e.rank(), 2);
        // lattice contains 2*e0 + ... : (4,1,0),(6,0,1) -> (2, -1, 1)
        assert!(e.contains(&row(&[(0, 2), (1, -1), (2, 1)])));
        assert!(!e.insert(row(&[(0, 2), (1, -1), (2, 1)])));
    }

    #[test]
    fn reduction_to_standard_columns() {
        let mut e = SparseEchelon::new();
        e.insert(row(&[(0, 1), (2, -1)]));
        e.insert(row(&[(1, 1), (2, -1), (3, 1)]));
        assert!(e.unit_pivots());
        assert_eq!(e.reduce(&row(&[(0, 1), (1, 1)])), row(&[(2, 2), (3, -1)]));
    }
}
