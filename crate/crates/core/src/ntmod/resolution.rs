//! Free resolutions of the simple right modules `S_Y`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::free::{action_at, check_elem_matrix, free_at, map_at, ElemMatrix, Summand, Variance};
use crate::error::{Error, Result};
use crate::ntcat::{ArrowKind, HomTable, NtCategory};
use crate::zexact::graded::Parity;
use crate::zexact::group::{quotient_of_lattice, subquotient_homology, GroupHom, Presentation};
use crate::zexact::matrix::IntMatrix;
use crate::zexact::smith::{image_basis, in_column_span, kernel};
use crate::zexact::sparse::{axpy, SparseRow};

/// What follows the explicitly stored levels.
#[derive(Clone, Debug)]
pub enum Tail {
    /// All further levels vanish.
    Zero,
    /// `F_{n+3} = F_n[1]` for `n >= start`; the first differential past the
    /// stored ones is `junction: F_start[1] -> F_{start+2}`, and
    /// `d_{n+3} = d_n` after that.
    Periodic { start: usize, junction: ElemMatrix },
    /// Not computed further.
    Open,
}

#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub space: String,
    pub target: usize,
    /// `levels[n]` is `F_n`; `F_0 = Q_Y`.
    pub levels: Vec<Vec<Summand>>,
    /// `diffs[n - 1]` is `d_n: F_n -> F_{n-1}`.
    pub diffs: Vec<ElemMatrix>,
    pub tail: Tail,
    pub reconstructed: bool,
}

fn zero_matrix(rows: usize, cols: usize) -> ElemMatrix {
    vec![vec![Vec::new(); cols]; rows]
}

impl FreeResolution {
    pub fn level(&self, n: usize) -> Option<Vec<Summand>> {
        if n < self.levels.len() {
            return Some(self.levels[n].clone());
        }
        match &self.tail {
            Tail::Zero => Some(Vec::new()),
            Tail::Open => None,
            Tail::Periodic { .. } => Some(
                self.level(n - 3)?
                    .into_iter()
                    .map(Summand::shifted)
                    .collect(),
            ),
        }
    }

    /// `d_n` for `n >= 1`.
    pub fn diff(&self, n: usize) -> Option<ElemMatrix> {
        assert!(n >= 1);
        if n <= self.diffs.len() {
            return Some(self.diffs[n - 1].clone());
        }
        match &self.tail {
            Tail::Zero => Some(zero_matrix(self.level(n - 1)?.len(), self.level(n)?.len())),
            Tail::Open => None,
            Tail::Periodic { junction, .. } => {
                if n == self.diffs.len() + 1 {
                    Some(junction.clone())
                } else {
                    self.diff(n - 3)
                }
            }
        }
    }

    /// Number of stored levels after which nothing is known, if finite.
    pub fn known_depth(&self) -> Option<usize> {
        match self.tail {
            Tail::Open => Some(self.levels.len() - 1),
            _ => None,
        }
    }

    /// Length when the resolution is finite.
    pub fn length(&self) -> Option<usize> {
        match self.tail {
            Tail::Zero => Some(self.levels.iter().rposition(|l| !l.is_empty()).unwrap_or(0)),
            _ => None,
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.tail, Tail::Periodic { .. })
    }

    pub fn describe_level(&self, t: &HomTable, n: usize) -> String {
        match self.level(n) {
            None => "?".into(),
            Some(l) if l.is_empty() => "0".into(),
            Some(l) => l
                .iter()
                .map(|s| {
                    let sh = if s.shift == Parity::Odd { "[1]" } else { "" };
                    format!("Q_{}{sh}", t.objects()[s.obj])
                })
                .collect::<Vec<_>>()
                .join(" + "),
        }
    }

    /// Checks `d_{n-1} d_n = 0` for `2 <= n <= upto` on the table.
    pub fn check_composites(&self, t: &HomTable, upto: usize) -> Result<()> {
        for n in 1..=upto {
            let (Some(a), Some(b), Some(d)) = (self.level(n), self.level(n - 1), self.diff(n))
            else {
                break;
            };
            check_elem_matrix(t, Variance::Right, &a, &b, &d)?;
            if n < 2 {
                continue;
            }
            let (Some(c), Some(e)) = (self.level(n - 2), self.diff(n - 1)) else {
                break;
            };
            for (m, cz) in c.iter().enumerate() {
                for (k, az) in a.iter().enumerate() {
                    let mut acc = Vec::new();
                    for (l, bz) in b.iter().enumerate() {
                        let v = t.compose(az.obj, bz.obj, cz.obj, &d[l][k], &e[m][l]);
                        acc = axpy(&acc, &BigInt::one(), &v);
                    }
                    if !acc.is_empty() {
                        return Err(Error::CompositionNonzero);
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks exactness of the augmented complex at levels `0..=upto` on
    /// underlying groups at every object.
    pub fn check_exact(&self, t: &HomTable, upto: usize) -> Result<()> {
        let f0 = self.level(0).unwrap();
        if f0 != vec![Summand::new(self.target, Parity::Even)] {
            return Err(Error::Computation("resolution must start with Q_Y".into()));
        }
        let id = identity_index(t, self.target)?;
        for n in 0..=upto {
            let (Some(fa), Some(fb), Some(d)) =
                (self.level(n + 1), self.level(n), self.diff(n + 1))
            else {
                break;
            };
            for w in 0..t.len() {
                for p in Parity::both() {
                    let fbw = free_at(t, Variance::Right, &fb, w);
                    let incoming = map_at(t, Variance::Right, &fa, &fb, &d, w, p)?;
                    let outgoing = if n == 0 {
                        let mut m = IntMatrix::zeros(
                            usize::from(w == self.target && p == Parity::Even),
                            fbw.len(p),
                        );
                        if m.rows() == 1 {
                            m.set(0, fbw.position(p, 0, id).unwrap(), BigInt::one());
                        }
                        m
                    } else {
                        let fc = self.level(n - 1).unwrap();
                        map_at(t, Variance::Right, &fb, &fc, &self.diff(n).unwrap(), w, p)?
                    };
                    let free = |k: usize| Presentation::free(k);
                    let f = GroupHom::new_unchecked(
                        free(incoming.cols()),
                        free(incoming.rows()),
                        incoming,
                    );
                    let g = GroupHom::new_unchecked(
                        free(outgoing.cols()),
                        free(outgoing.rows()),
                        outgoing,
                    );
                    let h = subquotient_homology(&f, &g)?;
                    if !h.group.is_zero() {
                        return Err(Error::Computation(format!(
                            "resolution of S_{} is not exact at level {n}, object {}, {p} part",
                            t.objects()[self.target],
                            t.objects()[w]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `d∘d = 0` and exactness through a few periods past the stored part.
    pub fn validate(&self, t: &HomTable) -> Result<()> {
        let upto = match self.tail {
            Tail::Periodic { .. } => self.levels.len() + 6,
            _ => self.levels.len(),
        };
        self.check_composites(t, upto + 1)?;
        self.check_exact(t, upto)
    }
}

fn identity_index(t: &HomTable, y: usize) -> Result<usize> {
    match t.identity(y).as_slice() {
        [(k, c)] if c.is_one() => Ok(*k),
        _ => Err(Error::Computation("identity is not a basis element".into())),
    }
}

/// Kernel lattices, per object and parity, of a map between free sums.
type Lattices = Vec<[IntMatrix; 2]>;

fn hnf(m: IntMatrix) -> IntMatrix {
    if m.cols() == 0 {
        m
    } else {
        image_basis(&m)
    }
}

fn kernels(t: &HomTable, src: &[Summand], dst: &[Summand], d: &ElemMatrix) -> Result<Lattices> {
    let mut out = Vec::with_capacity(t.len());
    for w in 0..t.len() {
        let mut pair = Vec::new();
        for p in Parity::both() {
            let a = map_at(t, Variance::Right, src, dst, d, w, p)?;
            let k = if a.cols() == 0 {
                a.clone()
            } else if a.rows() == 0 {
                IntMatrix::identity(a.cols())
            } else {
                kernel(&a)
            };
            pair.push(hnf(k));
        }
        let odd = pair.pop().unwrap();
        out.push([pair.pop().unwrap(), odd]);
    }
    Ok(out)
}

fn first_syzygy(t: &HomTable, y: usize) -> Result<Lattices> {
    let f0 = [Summand::new(y, Parity::Even)];
    let id = identity_index(t, y)?;
    let mut out = Vec::with_capacity(t.len());
    for w in 0..t.len() {
        let at = free_at(t, Variance::Right, &f0, w);
        let mut pair = Vec::new();
        for p in Parity::both() {
            let n = at.len(p);
            let skip = if w == y && p == Parity::Even {
                at.position(p, 0, id)
            } else {
                None
            };
            let cols: Vec<Vec<BigInt>> = (0..n)
                .filter(|&k| Some(k) != skip)
                .map(|k| {
                    let mut v = vec![BigInt::zero(); n];
                    v[k] = BigInt::one();
                    v
                })
                .collect();
            pair.push(if cols.is_empty() {
                IntMatrix::zeros(n, 0)
            } else {
                IntMatrix::from_columns(n, &cols)
            });
        }
        let odd = pair.pop().unwrap();
        out.push([pair.pop().unwrap(), odd]);
    }
    Ok(out)
}

/// Chooses generators of the submodule `k` of the free sum `sums` modulo
/// its decomposable part, returning new summands and the columns of the
/// covering map.
fn cover(
    t: &HomTable,
    sums: &[Summand],
    k: &Lattices,
) -> Result<(Vec<Summand>, Vec<Vec<SparseRow>>)> {
    let mut new = Vec::new();
    let mut cols = Vec::new();
    for w in 0..t.len() {
        let at = free_at(t, Variance::Right, sums, w);
        for p in Parity::both() {
            let kw = &k[w][p.bit() as usize];
            if kw.cols() == 0 {
                continue;
            }
            let mut dec = IntMatrix::zeros(kw.rows(), 0);
            for (g, ar) in t.quiver.arrows.iter().enumerate() {
                if ar.src != w {
                    continue;
                }
                let q = p + ar.parity;
                let kv = &k[ar.dst][q.bit() as usize];
                if kv.cols() == 0 {
                    continue;
                }
                dec = dec.hstack(&(&action_at(t, Variance::Right, sums, g, q)? * kv));
            }
            // greedy: basis vectors not yet in the span of what we have
            let mut chosen: Vec<Vec<BigInt>> = Vec::new();
            let mut span = dec.clone();
            for j in 0..kw.cols() {
                let v = kw.col(j);
                if span.cols() > 0 && in_column_span(&span, &v) {
                    continue;
                }
                span = span.hstack(&IntMatrix::column(&v));
                chosen.push(v);
            }
            let minimal = quotient_of_lattice(kw, &dec).generators;
            if minimal.len() < chosen.len() {
                chosen = minimal;
            }
            for v in chosen {
                new.push(Summand::new(w, p));
                let mut col = vec![Vec::new(); sums.len()];
                for (i, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        let (s, b) = at.part(p)[i];
                        col[s].push((b, x.clone()));
                    }
                }
                for c in &mut col {
                    c.sort_by_key(|e| e.0);
                }
                cols.push(col);
            }
        }
    }
    Ok((new, cols))
}

/// Generic resolution of `S_Y` through level `depth`.
pub fn resolve_simple(t: &HomTable, y: usize, depth: usize) -> Result<FreeResolution> {
    let mut levels = vec![vec![Summand::new(y, Parity::Even)]];
    let mut diffs = Vec::new();
    let mut k = first_syzygy(t, y)?;
    let mut tail = Tail::Open;
    for n in 0..depth {
        if k.iter().all(|l| l[0].cols() == 0 && l[1].cols() == 0) {
            tail = Tail::Zero;
            break;
        }
        let (new, cols) = cover(t, &levels[n], &k)?;
        let d: ElemMatrix = (0..levels[n].len())
            .map(|l| cols.iter().map(|c| c[l].clone()).collect())
            .collect();
        k = kernels(t, &new, &levels[n], &d)?;
        levels.push(new);
        diffs.push(d);
    }
    if matches!(tail, Tail::Open) && k.iter().all(|l| l[0].cols() == 0 && l[1].cols() == 0) {
        tail = Tail::Zero;
    }
    Ok(FreeResolution {
        space: t.name.clone(),
        target: y,
        levels,
        diffs,
        tail,
        reconstructed: false,
    })
}

/// `x -> x o phi` from `F(w)` part `p` to `F(v)` part `q`, for `phi` in Hom(v, w).
fn precompose_at(
    t: &HomTable,
    sums: &[Summand],
    (w, p): (usize, Parity),
    (v, q): (usize, Parity),
    phi: &SparseRow,
) -> Result<IntMatrix> {
    let (fw, fv) = (
        free_at(t, Variance::Right, sums, w),
        free_at(t, Variance::Right, sums, v),
    );
    let mut out = IntMatrix::zeros(fv.len(q), fw.len(p));
    for (col, &(k, b)) in fw.part(p).iter().enumerate() {
        for (c, x) in t.compose(v, w, sums[k].obj, phi, &[(b, BigInt::one())]) {
            if x.is_zero() {
                continue;
            }
            let row = fv
                .position(q, k, c)
                .ok_or_else(|| Error::Parity("precomposition does not preserve parity".into()))?;
            *out.get_mut(row, col) += x;
        }
    }
    Ok(out)
}

/// Lattice of maps `J: F_start[1] -> F_{start+2}` with `d_{start+2} J = 0`
/// and `J d_{start+1}[1] = 0`, as columns over the concatenated values of
/// `J` on the generators.
fn junction_lattice(t: &HomTable, r: &FreeResolution, start: usize) -> Result<IntMatrix> {
    let src: Vec<Summand> = r.levels[start].iter().map(|s| s.shifted()).collect();
    let (f1, f2) = (&r.levels[start + 1], &r.levels[start + 2]);
    let widths: Vec<usize> = src
        .iter()
        .map(|s| free_at(t, Variance::Right, f2, s.obj).len(s.shift))
        .collect();
    let ncols: usize = widths.iter().sum();
    let mut all = IntMatrix::zeros(0, ncols);
    let mut off = 0;
    for (s, w) in src.iter().zip(&widths) {
        let a = map_at(
            t,
            Variance::Right,
            f2,
            f1,
            &r.diffs[start + 1],
            s.obj,
            s.shift,
        )?;
        let mut m = IntMatrix::zeros(a.rows(), ncols);
        m.set_block(0, off, &a);
        all = all.vstack(&m);
        off += w;
    }
    let d = &r.diffs[start];
    for (u, su) in f1.iter().enumerate() {
        let q = su.shift.flip();
        let mut m = IntMatrix::zeros(free_at(t, Variance::Right, f2, su.obj).len(q), ncols);
        let mut off = 0;
        for (k, s) in src.iter().enumerate() {
            if !d[k][u].is_empty() {
                let a = precompose_at(t, f2, (s.obj, s.shift), (su.obj, q), &d[k][u])?;
                m.set_block(0, off, &a);
            }
            off += widths[k];
        }
        all = all.vstack(&m);
    }
    Ok(if all.rows() == 0 {
        IntMatrix::identity(ncols)
    } else {
        hnf(kernel(&all))
    })
}

fn junction_from(t: &HomTable, r: &FreeResolution, start: usize, v: &[BigInt]) -> ElemMatrix {
    let f2 = &r.levels[start + 2];
    let src = &r.levels[start];
    let mut j = zero_matrix(f2.len(), src.len());
    let mut off = 0;
    for (k, s) in src.iter().enumerate() {
        let at = free_at(t, Variance::Right, f2, s.obj);
        for (i, &(l, b)) in at.part(s.shift.flip()).iter().enumerate() {
            if !v[off + i].is_zero() {
                j[l][k].push((b, v[off + i].clone()));
            }
        }
        off += at.len(s.shift.flip());
    }
    for row in &mut j {
        for e in row {
            e.sort_by_key(|x| x.0);
        }
    }
    j
}

/// Turns a generic resolution computed past level `start + 3` into a
/// periodic one, if its shapes repeat. The map closing the loop is the
/// generic `d_{start+3}` when that works, otherwise a small combination of
/// solutions of the two composite conditions that keeps the loop exact.
pub fn fold_periodic(t: &HomTable, mut r: FreeResolution, start: usize) -> Result<FreeResolution> {
    if r.levels.len() < start + 4 {
        return Err(Error::Computation("resolution too short to fold".into()));
    }
    let shifted: Vec<Summand> = r.levels[start].iter().map(|s| s.shifted()).collect();
    if r.levels[start + 3] != shifted {
        return Err(Error::Computation("levels do not repeat".into()));
    }
    let generic = r.diffs[start + 2].clone();
    r.levels.truncate(start + 3);
    r.diffs.truncate(start + 2);
    let attempt = |r: &FreeResolution, junction: ElemMatrix| {
        let mut c = r.clone();
        c.tail = Tail::Periodic { start, junction };
        c.validate(t).ok().map(|_| c)
    };
    if let Some(c) = attempt(&r, generic) {
        return Ok(c);
    }
    let l = junction_lattice(t, &r, start)?;
    let n = l.cols();
    if n > 8 {
        return Err(Error::Computation(format!(
            "junction lattice of rank {n} is too large to search"
        )));
    }
    // coefficient vectors in {-1, 0, 1}^n, fewest nonzero entries first
    let mut coeffs: Vec<Vec<i64>> = (0..3usize.pow(n as u32))
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let c = (x % 3) as i64 - 1;
                    x /= 3;
                    c
                })
                .collect()
        })
        .filter(|c: &Vec<i64>| c.iter().any(|&x| x != 0))
        .collect();
    coeffs.sort_by_key(|c| c.iter().filter(|&&x| x != 0).count());
    for c in coeffs {
        let mut v = vec![BigInt::zero(); l.rows()];
        for (j, &x) in c.iter().enumerate() {
            if x != 0 {
                for (i, e) in l.col(j).iter().enumerate() {
                    v[i] += e * x;
                }
            }
        }
        if let Some(c) = attempt(&r, junction_from(t, &r, start, &v)) {
            return Ok(c);
        }
    }
    Err(Error::Computation(
        "no exact periodic continuation found".into(),
    ))
}

/// Known level shapes of catalogued resolutions: object labels with an
/// odd shift marked by a trailing `'`.
struct Shape {
    start: usize,
    levels: &'static [&'static [&'static str]],
}

fn known_shape(space: &str, y: &str) -> Option<Shape> {
    let p = |start, levels| Some(Shape { start, levels });
    match (space, y) {
        ("C2", "3") => p(0, &[&["3"], &["1'", "2'"], &["123'"]]),
        ("C2", "4") => p(0, &[&["4"], &["1'", "2'"], &["124'"]]),
        ("C2", "134") => p(0, &[&["134"], &["3", "4"], &["1'"]]),
        ("C2", "234") => p(0, &[&["234"], &["3", "4"], &["2'"]]),
        ("C2", "13") => p(0, &[&["13"], &["134"], &["4"]]),
        ("C2", "14") => p(0, &[&["14"], &["134"], &["3"]]),
        ("C2", "23") => p(0, &[&["23"], &["234"], &["4"]]),
        ("C2", "24") => p(0, &[&["24"], &["234"], &["3"]]),
        ("C2", "1234") => p(0, &[&["1234"], &["134", "234"], &["3", "4"]]),
        ("C2", "123") => p(
            1,
            &[
                &["123"],
                &["1234", "13", "23"],
                &["134", "234"],
                &["4", "123'"],
            ],
        ),
        ("C2", "124") => p(
            1,
            &[
                &["124"],
                &["1234", "14", "24"],
                &["134", "234"],
                &["3", "124'"],
            ],
        ),
        ("C2", "1") => p(
            1,
            &[
                &["1"],
                &["123", "124"],
                &["1234", "23", "24"],
                &["234", "1'"],
            ],
        ),
        ("C2", "2") => p(
            1,
            &[
                &["2"],
                &["123", "124"],
                &["1234", "13", "14"],
                &["134", "2'"],
            ],
        ),
        ("Z4", "12345") => p(
            2,
            &[
                &["12345"],
                &["1235", "1245", "1345", "2345"],
                &["125", "135", "145", "235", "245", "345"],
                &["15", "25", "35", "45", "12345'"],
                &["5", "1235'", "1245'", "1345'", "2345'"],
            ],
        ),
        _ => None,
    }
}

fn same_shape(t: &HomTable, level: &[Summand], want: &[&str]) -> bool {
    let mut have: Vec<String> = level
        .iter()
        .map(|s| {
            format!(
                "{}{}",
                t.objects()[s.obj],
                if s.shift == Parity::Odd { "'" } else { "" }
            )
        })
        .collect();
    let mut want: Vec<String> = want.iter().map(|s| s.to_string()).collect();
    have.sort();
    want.sort();
    have == want
}

/// Resolutions of the known shapes with differentials solved for by the
/// generic engine.
fn reconstructed(cat: &NtCategory, y: usize) -> Result<FreeResolution> {
    let t = &cat.table;
    let label = &t.objects()[y];
    let pr = known_shape(cat.name(), label)
        .ok_or_else(|| Error::MissingResolution(format!("{} {label}", cat.name())))?;
    let r = resolve_simple(t, y, pr.start + 3)?;
    for (n, want) in pr.levels.iter().enumerate() {
        if !same_shape(t, &r.levels[n], want) {
            return Err(Error::Computation(format!(
                "level {n} of the resolution of S_{label} has shape {}",
                r.describe_level(t, n)
            )));
        }
    }
    let mut r = fold_periodic(t, r, pr.start)?;
    r.reconstructed = true;
    Ok(r)
}

struct Words<'a> {
    cat: &'a NtCategory,
}

impl Words<'_> {
    fn set(&self, s: &str) -> crate::finspace::PointSet {
        self.cat.space.parse_set(s).expect("label")
    }

    fn obj(&self, s: &str) -> usize {
        self.cat.object_of(self.set(s)).expect("object")
    }

    fn word(&self, steps: &[(ArrowKind, &str, &str)]) -> Result<SparseRow> {
        self.cat.word(steps)
    }

    fn i(&self, s: &str, d: &str) -> Result<SparseRow> {
        self.word(&[(ArrowKind::I, s, d)])
    }

    fn r(&self, s: &str, d: &str) -> Result<SparseRow> {
        self.word(&[(ArrowKind::R, s, d)])
    }

    fn delta(&self, s: &str, d: &str) -> Result<SparseRow> {
        self.word(&[(ArrowKind::Delta, s, d)])
    }

    fn sums(&self, l: &[&str]) -> Vec<Summand> {
        l.iter()
            .map(|s| match s.strip_suffix('\'') {
                Some(x) => Summand::new(self.obj(x), Parity::Odd),
                None => Summand::new(self.obj(s), Parity::Even),
            })
            .collect()
    }
}

fn neg(v: SparseRow) -> SparseRow {
    v.into_iter().map(|(k, x)| (k, -x)).collect()
}

/// The resolutions of all simple modules over `Z3`.
fn z3_resolution(cat: &NtCategory, y: &str) -> Result<FreeResolution> {
    use ArrowKind::*;
    let w = Words { cat };
    let z = Vec::new;
    let rest = |a: &str, b: &str| -> String { a.chars().filter(|c| !b.contains(*c)).collect() };
    let (levels, diffs, start, junction): (Vec<Vec<Summand>>, Vec<ElemMatrix>, usize, ElemMatrix) =
        match y {
            "14" | "24" | "34" => {
                let j = &y[..1];
                (
                    vec![w.sums(&[y]), w.sums(&["4"]), w.sums(&[&format!("{j}'")])],
                    vec![vec![vec![w.i("4", y)?]], vec![vec![w.delta(j, "4")?]]],
                    0,
                    vec![vec![w.r(y, j)?]],
                )
            }
            "4" => (
                vec![
                    w.sums(&["4"]),
                    w.sums(&["1'", "2'", "3'"]),
                    w.sums(&["1234'"]),
                ],
                vec![
                    vec![vec![
                        w.delta("1", "4")?,
                        w.delta("2", "4")?,
                        w.delta("3", "4")?,
                    ]],
                    vec![
                        vec![w.r("1234", "1")?],
                        vec![w.r("1234", "2")?],
                        vec![w.r("1234", "3")?],
                    ],
                ],
                0,
                vec![vec![w.i("4", "1234")?]],
            ),
            "1" | "2" | "3" => {
                let c = rest("1234", y);
                (
                    vec![w.sums(&[y]), w.sums(&["1234"]), w.sums(&[&c])],
                    vec![vec![vec![w.r("1234", y)?]], vec![vec![w.i(&c, "1234")?]]],
                    0,
                    vec![vec![w.delta(y, &c)?]],
                )
            }
            "124" | "134" | "234" => {
                let (j, k) = (&y[..1], &y[1..2]);
                let (j4, k4) = (format!("{j}4"), format!("{k}4"));
                (
                    vec![w.sums(&[y]), w.sums(&[&j4, &k4]), w.sums(&["4"])],
                    vec![
                        vec![vec![w.i(&j4, y)?, w.i(&k4, y)?]],
                        vec![vec![w.i("4", &j4)?], vec![neg(w.i("4", &k4)?)]],
                    ],
                    0,
                    vec![vec![w.word(&[(R, y, k), (Delta, k, "4")])?]],
                )
            }
            "1234" => {
                let d1234_14 = w.word(&[(R, "1234", "3"), (Delta, "3", "14")])?;
                let d234_4 = w.word(&[(R, "234", "2"), (Delta, "2", "4")])?;
                (
                    vec![
                        w.sums(&["1234"]),
                        w.sums(&["124", "134", "234"]),
                        w.sums(&["14", "24", "34"]),
                        w.sums(&["4", "1234'"]),
                    ],
                    vec![
                        vec![vec![
                            w.i("124", "1234")?,
                            w.i("134", "1234")?,
                            w.i("234", "1234")?,
                        ]],
                        vec![
                            vec![w.i("14", "124")?, neg(w.i("24", "124")?), z()],
                            vec![neg(w.i("14", "134")?), z(), w.i("34", "134")?],
                            vec![z(), w.i("24", "234")?, neg(w.i("34", "234")?)],
                        ],
                        vec![
                            vec![w.i("4", "14")?, d1234_14],
                            vec![w.i("4", "24")?, z()],
                            vec![w.i("4", "34")?, z()],
                        ],
                    ],
                    1,
                    vec![
                        vec![z(), z(), d234_4],
                        vec![
                            w.i("124", "1234")?,
                            w.i("134", "1234")?,
                            w.i("234", "1234")?,
                        ],
                    ],
                )
            }
            _ => return Err(Error::MissingResolution(format!("Z3 {y}"))),
        };
    Ok(FreeResolution {
        space: "Z3".into(),
        target: w.obj(y),
        levels,
        diffs,
        tail: Tail::Periodic { start, junction },
        reconstructed: false,
    })
}

/// Catalogued resolution of `S_Y`, validated once per process.
pub fn builtin_resolution(space: &str, y: &str) -> Result<&'static FreeResolution> {
    static CACHE: OnceLock<Mutex<HashMap<(String, String), &'static FreeResolution>>> =
        OnceLock::new();
    let key = (space.to_string(), y.to_string());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&key) {
        return Ok(r);
    }
    let cat =
        NtCategory::builtin(space).map_err(|_| Error::MissingResolution(format!("{space} {y}")))?;
    let obj = cat
        .table
        .object(y)
        .map_err(|_| Error::MissingResolution(format!("{space} {y}")))?;
    let r = match space {
        "Z3" => z3_resolution(cat, y)?,
        _ => reconstructed(cat, obj)?,
    };
    r.validate(&cat.table)?;
    let r: &'static FreeResolution = Box::leak(Box::new(r));
    cache.lock().unwrap().insert(key, r);
    Ok(r)
}

/// Whether the catalogue has an entry for `(space, y)`.
pub fn has_builtin_resolution(space: &str, y: &str) -> bool {
    space == "Z3" || known_shape(space, y).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z3_catalogue_is_valid() {
        let cat = NtCategory::builtin("Z3").unwrap();
        for y in cat.table.objects() {
            let r = builtin_resolution("Z3", y).unwrap_or_else(|e| panic!("{y}: {e}"));
            assert!(r.is_periodic());
        }
    }

    #[test]
    fn generic_resolution_is_exact() {
        let cat = NtCategory::builtin("Z3").unwrap();
        let t = &cat.table;
        for y in 0..t.len() {
            let r = resolve_simple(t, y, 5).unwrap();
            r.check_composites(t, 5).unwrap();
            r.check_exact(t, 4).unwrap();
        }
    }

    #[test]
    fn point_resolution_has_length_zero() {
        use crate::ntcat::{hom_closure, CatPresentation, GradedQuiver};
        let q = GradedQuiver::new(vec!["1".into()]).unwrap();
        let t = hom_closure(&CatPresentation::new("pt", q), 2).unwrap();
        let r = resolve_simple(&t, 0, 3).unwrap();
        assert_eq!(r.length(), Some(0));
        r.validate(&t).unwrap();
    }

    #[test]
    fn reconstructed_catalogue_matches_printed_shapes() {
        let cat = NtCategory::builtin("C2").unwrap();
        for y in cat.table.objects() {
            let r = builtin_resolution("C2", y).unwrap_or_else(|e| panic!("{y}: {e}"));
            assert!(r.reconstructed && r.is_periodic());
        }
        let r = builtin_resolution("Z4", "12345").unwrap();
        assert_eq!(r.levels.len(), 5);
    }

    #[test]
    fn missing_entry() {
        assert!(matches!(
            builtin_resolution("Z4", "5"),
            Err(Error::MissingResolution(_))
        ));
        assert!(has_builtin_resolution("C2", "123"));
    }
}
