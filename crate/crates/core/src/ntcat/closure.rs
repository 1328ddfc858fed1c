//! Hom groups of a presented category, computed by linear algebra on
//! bounded-length paths.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::quiver::{ArrowKind, CatPresentation, GradedQuiver};
use crate::error::{Error, Result};
use crate::zexact::sparse::{axpy, scale_row, SparseEchelon, SparseRow};
use crate::zexact::{IntMatrix, Parity, Presentation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElem {
    /// Arrow indices in traversal order; empty for an identity.
    pub path: Vec<usize>,
    pub parity: Parity,
}

/// Bases of all Hom groups with composition structure constants.
#[derive(Clone, Debug)]
pub struct HomTable {
    pub name: String,
    pub quiver: GradedQuiver,
    pub max_len: usize,
    basis: Vec<Vec<Vec<BasisElem>>>,
    identity: Vec<SparseRow>,
    arrow_coords: Vec<SparseRow>,
    // (a, b, c) -> [i][j] -> basis_j(b, c) o basis_i(a, b) in Hom(a, c)
    comp: HashMap<(usize, usize, usize), Vec<Vec<SparseRow>>>,
}

/// Per source object, every path of length at most `len`, grouped by target.
fn enumerate_paths(q: &GradedQuiver, len: usize) -> Vec<Vec<Vec<Vec<usize>>>> {
    let n = q.len();
    let mut out = vec![vec![Vec::new(); n]; n];
    let mut out_arrows = vec![Vec::new(); n];
    for (k, a) in q.arrows.iter().enumerate() {
        out_arrows[a.src].push(k);
    }
    for s in 0..n {
        let mut frontier: Vec<(usize, Vec<usize>)> = vec![(s, Vec::new())];
        out[s][s].push(Vec::new());
        for _ in 0..len {
            let mut next = Vec::new();
            for (at, p) in &frontier {
                for &k in &out_arrows[*at] {
                    let mut np = p.clone();
                    np.push(k);
                    let d = q.arrows[k].dst;
                    out[s][d].push(np.clone());
                    next.push((d, np));
                }
            }
            frontier = next;
        }
    }
    out
}

struct PairSpace {
    paths: Vec<Vec<usize>>,
    col: HashMap<Vec<usize>, usize>,
    ech: SparseEchelon,
}

impl PairSpace {
    fn new(mut paths: Vec<Vec<usize>>) -> Self {
        // longest paths get the smallest columns, so they become pivots
        paths.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let col = paths
            .iter()
            .enumerate()
            .map(|(k, p)| (p.clone(), k))
            .collect();
        PairSpace {
            paths,
            col,
            ech: SparseEchelon::new(),
        }
    }

    fn standard(&self) -> Vec<usize> {
        (0..self.paths.len())
            .filter(|&c| !self.ech.is_pivot(c))
            .collect()
    }
}

struct Closure {
    spaces: Vec<Vec<PairSpace>>,
}

fn close(p: &CatPresentation, len: usize) -> Closure {
    let q = &p.quiver;
    let n = q.len();
    let all = enumerate_paths(q, len);
    let mut spaces: Vec<Vec<PairSpace>> = all
        .iter()
        .map(|row| row.iter().map(|ps| PairSpace::new(ps.clone())).collect())
        .collect();
    // paths into each object, with their sources
    let mut into: Vec<Vec<(usize, &Vec<usize>)>> = vec![Vec::new(); n];
    for (s, row) in all.iter().enumerate() {
        for (d, ps) in row.iter().enumerate() {
            for path in ps {
                into[d].push((s, path));
            }
        }
    }
    for rel in &p.relations {
        let m = rel.max_len();
        if m > len {
            continue;
        }
        for (x, pre) in &into[rel.src] {
            if pre.len() + m > len {
                continue;
            }
            let budget = len - m - pre.len();
            for (y, posts) in all[rel.dst].iter().enumerate() {
                for post in posts.iter().filter(|p| p.len() <= budget) {
                    let space = &mut spaces[*x][y];
                    let mut row: SparseRow = Vec::new();
                    for (c, t) in &rel.terms {
                        let mut w = (*pre).clone();
                        w.extend_from_slice(t);
                        w.extend_from_slice(post);
                        row.push((space.col[&w], c.clone()));
                    }
                    row.sort_by_key(|e| e.0);
                    space.ech.insert(row);
                }
            }
        }
    }
    Closure { spaces }
}

impl Closure {
    fn dims(&self) -> Vec<Vec<usize>> {
        self.spaces
            .iter()
            .map(|row| row.iter().map(|s| s.paths.len() - s.ech.rank()).collect())
            .collect()
    }
}

/// Computes all Hom groups from a presentation. Fails unless the ranks agree
/// at lengths `max_len - 1` and `max_len` and every path of length `max_len`
/// reduces to shorter ones.
pub fn hom_closure(p: &CatPresentation, max_len: usize) -> Result<HomTable> {
    if max_len == 0 {
        return Err(Error::Computation("max_len must be at least 1".into()));
    }
    let q = &p.quiver;
    let n = q.len();
    let lower = close(p, max_len - 1);
    let upper = close(p, max_len);
    if lower.dims() != upper.dims() {
        return Err(Error::NotStabilised(max_len));
    }
    for row in &upper.spaces {
        for s in row {
            if s.standard().iter().any(|&c| s.paths[c].len() == max_len) {
                return Err(Error::NotStabilised(max_len));
            }
        }
    }
    for (a, row) in upper.spaces.iter().enumerate() {
        for (b, s) in row.iter().enumerate() {
            if !s.ech.unit_pivots() {
                let label = format!("{} -> {}", q.objects[a], q.objects[b]);
                return Err(if quotient_has_torsion(s) {
                    Error::TorsionHom(label)
                } else {
                    Error::Computation(format!("relations are not monic in path order on {label}"))
                });
            }
        }
    }

    let mut basis = vec![vec![Vec::new(); n]; n];
    let mut position: Vec<Vec<HashMap<usize, usize>>> = vec![vec![HashMap::new(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let s = &upper.spaces[a][b];
            for (k, c) in s.standard().into_iter().rev().enumerate() {
                let path = s.paths[c].clone();
                let parity = q.path_parity(&path)?;
                basis[a][b].push(BasisElem { path, parity });
                position[a][b].insert(c, k);
            }
        }
    }
    // coordinates of a path of length <= max_len
    let coords_short = |a: usize, b: usize, path: &[usize]| -> SparseRow {
        let s = &upper.spaces[a][b];
        let red = s.ech.reduce(&[(s.col[path], BigInt::one())]);
        let mut v: SparseRow = red
            .into_iter()
            .map(|(c, x)| (position[a][b][&c], x))
            .collect();
        v.sort_by_key(|e| e.0);
        v
    };
    let target = |a: usize, path: &[usize]| path.last().map(|&k| q.arrows[k].dst).unwrap_or(a);
    // any length, by reducing prefixes
    fn coords_any(
        a: usize,
        path: &[usize],
        max_len: usize,
        basis: &[Vec<Vec<BasisElem>>],
        target: &dyn Fn(usize, &[usize]) -> usize,
        short: &dyn Fn(usize, usize, &[usize]) -> SparseRow,
    ) -> SparseRow {
        let b = target(a, path);
        if path.len() <= max_len {
            return short(a, b, path);
        }
        let (head, tail) = path.split_at(max_len);
        let mid = target(a, head);
        let mut acc: SparseRow = Vec::new();
        for (k, x) in short(a, mid, head) {
            let mut w = basis[a][mid][k].path.clone();
            w.extend_from_slice(tail);
            let part = coords_any(a, &w, max_len, basis, target, short);
            acc = axpy(&acc, &x, &part);
        }
        acc
    }

    let identity: Vec<SparseRow> = (0..n).map(|a| coords_short(a, a, &[])).collect();
    let arrow_coords: Vec<SparseRow> = q
        .arrows
        .iter()
        .enumerate()
        .map(|(k, ar)| coords_short(ar.src, ar.dst, &[k]))
        .collect();
    let mut comp = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            if basis[a][b].is_empty() {
                continue;
            }
            for c in 0..n {
                if basis[b][c].is_empty() {
                    continue;
                }
                let mut table = Vec::with_capacity(basis[a][b].len());
                for x in &basis[a][b] {
                    let mut row = Vec::with_capacity(basis[b][c].len());
                    for y in &basis[b][c] {
                        let mut w = x.path.clone();
                        w.extend_from_slice(&y.path);
                        row.push(coords_any(a, &w, max_len, &basis, &target, &coords_short));
                    }
                    table.push(row);
                }
                comp.insert((a, b, c), table);
            }
        }
    }
    Ok(HomTable {
        name: p.name.clone(),
        quiver: q.clone(),
        max_len,
        basis,
        identity,
        arrow_coords,
        comp,
    })
}

fn quotient_has_torsion(s: &PairSpace) -> bool {
    let n = s.paths.len();
    let rows: Vec<&SparseRow> = s.ech.rows().collect();
    let mut m = IntMatrix::zeros(n, rows.len());
    for (j, r) in rows.iter().enumerate() {
        for (c, x) in r.iter() {
            m.set(*c, j, x.clone());
        }
    }
    !Presentation::new(n, m).normal_form().torsion.is_empty()
}

/// Serializable form of a table: basis words and nonzero structure constants.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableCache {
    pub name: String,
    pub max_len: usize,
    pub objects: Vec<String>,
    pub arrows: Vec<(String, String, String, u8, ArrowKind)>,
    pub basis: Vec<(usize, usize, Vec<Vec<usize>>)>,
    /// `(a, b, c, i, j, [(k, coeff)])`
    pub constants: Vec<(usize, usize, usize, usize, usize, Vec<(usize, i64)>)>,
}

impl HomTable {
    pub fn len(&self) -> usize {
        self.quiver.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quiver.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.quiver.objects
    }

    pub fn object(&self, name: &str) -> Result<usize> {
        self.quiver.object(name)
    }

    pub fn basis(&self, a: usize, b: usize) -> &[BasisElem] {
        &self.basis[a][b]
    }

    pub fn dim(&self, a: usize, b: usize) -> usize {
        self.basis[a][b].len()
    }

    /// Ranks of the even and odd parts of Hom(a, b).
    pub fn graded_rank(&self, a: usize, b: usize) -> (usize, usize) {
        let odd = self.basis[a][b]
            .iter()
            .filter(|e| e.parity == Parity::Odd)
            .count();
        (self.basis[a][b].len() - odd, odd)
    }

    pub fn identity(&self, a: usize) -> &SparseRow {
        &self.identity[a]
    }

    pub fn arrow(&self, k: usize) -> &SparseRow {
        &self.arrow_coords[k]
    }

    /// `y o x` for `x` in Hom(a, b) and `y` in Hom(b, c).
    pub fn compose(
        &self,
        a: usize,
        b: usize,
        c: usize,
        x: &[(usize, BigInt)],
        y: &[(usize, BigInt)],
    ) -> SparseRow {
        let Some(t) = self.comp.get(&(a, b, c)) else {
            return Vec::new();
        };
        let mut acc = Vec::new();
        for (i, xi) in x {
            for (j, yj) in y {
                acc = axpy(&acc, &(xi * yj), &t[*i][*j]);
            }
        }
        acc
    }

    /// Coordinates of a path of arrows starting at `a`.
    pub fn eval_path(&self, a: usize, path: &[usize]) -> SparseRow {
        let mut at = a;
        let mut v = self.identity[a].clone();
        for &k in path {
            let ar = &self.quiver.arrows[k];
            v = self.compose(a, at, ar.dst, &v, &self.arrow_coords[k]);
            at = ar.dst;
        }
        v
    }

    /// Structure constant product of two basis elements.
    pub fn basis_product(&self, a: usize, b: usize, c: usize, i: usize, j: usize) -> &SparseRow {
        &self.comp[&(a, b, c)][i][j]
    }

    pub fn parity_of(&self, a: usize, b: usize, v: &[(usize, BigInt)]) -> Option<Parity> {
        let mut p = None;
        for (k, x) in v {
            if x.is_zero() {
                continue;
            }
            let q = self.basis[a][b][*k].parity;
            if *p.get_or_insert(q) != q {
                return None;
            }
        }
        p
    }

    /// Checks associativity, identities and parity on all basis elements.
    pub fn verify_structure(&self) -> Result<()> {
        let n = self.len();
        let e = |k: usize| vec![(k, BigInt::one())];
        for a in 0..n {
            for b in 0..n {
                for i in 0..self.dim(a, b) {
                    let x = e(i);
                    let left = self.compose(a, a, b, &self.identity[a], &x);
                    let right = self.compose(a, b, b, &x, &self.identity[b]);
                    if left != x || right != x {
                        return Err(Error::Computation(format!(
                            "identity fails on Hom({a}, {b})"
                        )));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.dim(a, b) == 0 {
                    continue;
                }
                for c in 0..n {
                    if self.dim(b, c) == 0 {
                        continue;
                    }
                    for i in 0..self.dim(a, b) {
                        for j in 0..self.dim(b, c) {
                            let xy = self.basis_product(a, b, c, i, j);
                            let par = self.basis[a][b][i].parity + self.basis[b][c][j].parity;
                            if !xy.is_empty() && self.parity_of(a, c, xy) != Some(par) {
                                return Err(Error::Parity(format!("product on {a},{b},{c}")));
                            }
                            for d in 0..n {
                                for k in 0..self.dim(c, d) {
                                    let lhs = self.compose(a, c, d, xy, &e(k));
                                    let yz = self.basis_product(b, c, d, j, k);
                                    let rhs = self.compose(a, b, d, &e(i), yz);
                                    if lhs != rhs {
                                        return Err(Error::Computation(format!(
                                            "associativity fails on {a},{b},{c},{d}"
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Evaluates every relation of `p` (over the same quiver) in the table.
    pub fn relations_vanish(&self, p: &CatPresentation) -> Result<()> {
        for rel in &p.relations {
            let mut acc = Vec::new();
            for (c, path) in &rel.terms {
                acc = axpy(&acc, c, &self.eval_path(rel.src, path));
            }
            if !acc.is_empty() {
                return Err(Error::InvalidRelation(format!(
                    "relation from {} to {} does not vanish",
                    p.quiver.objects[rel.src], p.quiver.objects[rel.dst]
                )));
            }
        }
        Ok(())
    }

    pub fn total_rank(&self) -> usize {
        self.basis.iter().flatten().map(|v| v.len()).sum()
    }

    pub fn to_cache(&self) -> TableCache {
        let q = &self.quiver;
        let n = self.len();
        let mut basis = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if !self.basis[a][b].is_empty() {
                    basis.push((
                        a,
                        b,
                        self.basis[a][b].iter().map(|e| e.path.clone()).collect(),
                    ));
                }
            }
        }
        let mut keys: Vec<&(usize, usize, usize)> = self.comp.keys().collect();
        keys.sort();
        let mut constants = Vec::new();
        for &(a, b, c) in keys {
            for (i, row) in self.comp[&(a, b, c)].iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if !v.is_empty() {
                        let v = v
                            .iter()
                            .map(|(k, x)| (*k, i64::try_from(x).expect("small constant")))
                            .collect();
                        constants.push((a, b, c, i, j, v));
                    }
                }
            }
        }
        TableCache {
            name: self.name.clone(),
            max_len: self.max_len,
            objects: q.objects.clone(),
            arrows: q
                .arrows
                .iter()
                .map(|a| {
                    (
                        q.objects[a.src].clone(),
                        q.objects[a.dst].clone(),
                        a.name.clone(),
                        a.parity.bit(),
                        a.kind,
                    )
                })
                .collect(),
            basis,
            constants,
        }
    }

    pub fn from_cache(c: &TableCache) -> Result<Self> {
        let mut q = GradedQuiver::new(c.objects.clone())?;
        for (s, d, name, par, kind) in &c.arrows {
            q.add_arrow_with_parity(s, d, name, *kind, Parity::from_bit(*par))?;
        }
        let n = q.len();
        let mut basis = vec![vec![Vec::new(); n]; n];
        for (a, b, words) in &c.basis {
            for w in words {
                basis[*a][*b].push(BasisElem {
                    path: w.clone(),
                    parity: q.path_parity(w)?,
                });
            }
        }
        let mut comp: HashMap<(usize, usize, usize), Vec<Vec<SparseRow>>> = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    let (da, db) = (basis[a][b].len(), basis[b][cc].len());
                    if da > 0 && db > 0 {
                        comp.insert((a, b, cc), vec![vec![Vec::new(); db]; da]);
                    }
                }
            }
        }
        for (a, b, cc, i, j, v) in &c.constants {
            let t = comp
                .get_mut(&(*a, *b, *cc))
                .ok_or_else(|| Error::Parse("constant for an empty hom".into()))?;
            t[*i][*j] = v.iter().map(|&(k, x)| (k, BigInt::from(x))).collect();
        }
        let identity = (0..n)
            .map(|a| {
                basis[a][a]
                    .iter()
                    .position(|e| e.path.is_empty())
                    .map(|k| vec![(k, BigInt::one())])
                    .unwrap_or_default()
            })
            .collect();
        let mut t = HomTable {
            name: c.name.clone(),
            quiver: q,
            max_len: c.max_len,
            basis,
            identity,
            arrow_coords: Vec::new(),
            comp,
        };
        t.arrow_coords = (0..t.quiver.arrows.len())
            .map(|k| {
                let a = &t.quiver.arrows[k];
                t.basis[a.src][a.dst]
                    .iter()
                    .position(|e| e.path == [k])
                    .map(|p| vec![(p, BigInt::one())])
                    .unwrap_or_default()
            })
            .collect();
        Ok(t)
    }

    /// `-v`
    pub fn neg(v: &[(usize, BigInt)]) -> SparseRow {
        scale_row(v, &BigInt::from(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_object() -> CatPresentation {
        CatPresentation::new("pt", GradedQuiver::new(vec!["1".into()]).unwrap())
    }

    #[test]
    fn trivial_category() {
        let t = hom_closure(&one_object(), 1).unwrap();
        assert_eq!(t.dim(0, 0), 1);
        assert_eq!(t.identity(0), &vec![(0, BigInt::one())]);
        t.verify_structure().unwrap();
    }

    #[test]
    fn nilpotent_loop() {
        // d: a -> a odd with d o d = 0
        let mut q = GradedQuiver::new(vec!["a".into()]).unwrap();
        q.add_arrow("a", "a", "d", ArrowKind::Delta).unwrap();
        let mut p = CatPresentation::new("loop", q);
        p.add_relation(&[(1, &["d", "d"])]).unwrap();
        let t = hom_closure(&p, 3).unwrap();
        assert_eq!(t.graded_rank(0, 0), (1, 1));
        t.verify_structure().unwrap();
        t.relations_vanish(&p).unwrap();
        let back = HomTable::from_cache(&t.to_cache()).unwrap();
        back.verify_structure().unwrap();
        assert_eq!(back.eval_path(0, &[0, 0]), Vec::new());
    }

    #[test]
    fn free_loop_does_not_stabilise() {
        let mut q = GradedQuiver::new(vec!["a".into()]).unwrap();
        q.add_arrow("a", "a", "d", ArrowKind::I).unwrap();
        let p = CatPresentation::new("loop", q);
        assert!(matches!(hom_closure(&p, 4), Err(Error::NotStabilised(4))));
    }

    #[test]
    fn torsion_is_rejected() {
        let mut q = GradedQuiver::new(vec!["a".into(), "b".into()]).unwrap();
        q.add_arrow("a", "b", "f", ArrowKind::I).unwrap();
        let mut p = CatPresentation::new("t", q);
        p.add_relation(&[(2, &["f"])]).unwrap();
        assert!(matches!(hom_closure(&p, 2), Err(Error::TorsionHom(_))));
    }

    #[test]
    fn commuting_square() {
        let mut q =
            GradedQuiver::new(vec!["a".into(), "b".into(), "c".into(), "d".into()]).unwrap();
        q.add_arrow("a", "b", "f", ArrowKind::I).unwrap();
        q.add_arrow("a", "c", "g", ArrowKind::I).unwrap();
        q.add_arrow("b", "d", "h", ArrowKind::I).unwrap();
        q.add_arrow("c", "d", "k", ArrowKind::I).unwrap();
        let mut p = CatPresentation::new("sq", q);
        p.add_relation(&[(1, &["f", "h"]), (-1, &["g", "k"])])
            .unwrap();
        let t = hom_closure(&p, 3).unwrap();
        assert_eq!(t.dim(0, 3), 1);
        let fh = t.eval_path(0, &[0, 2]);
        let gk = t.eval_path(0, &[1, 3]);
        assert_eq!(fh, gk);
        t.verify_structure().unwrap();
    }
}
