//! Finite sums of shifted free modules, evaluated objectwise.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntcat::HomTable;
use crate::zexact::graded::Parity;
use crate::zexact::matrix::IntMatrix;
use crate::zexact::sparse::SparseRow;

/// Left modules are covariant, right modules contravariant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    #[default]
    Left,
    Right,
}

/// One summand `P_Y[shift]` (left) or `Q_Y[shift]` (right).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Summand {
    pub obj: usize,
    pub shift: Parity,
}

impl Summand {
    pub fn new(obj: usize, shift: Parity) -> Self {
        Summand { obj, shift }
    }

    pub fn shifted(self) -> Self {
        Summand {
            obj: self.obj,
            shift: self.shift.flip(),
        }
    }
}

/// Matrix of table elements; `rows` index target summands, columns source
/// summands. For right modules entry `(l, k)` lies in Hom(src_k, dst_l),
/// for left modules in Hom(dst_l, src_k).
pub type ElemMatrix = Vec<Vec<SparseRow>>;

/// Generators of a free sum at one object, split by parity: for each
/// generator its summand and its basis index in the Hom group.
#[derive(Clone, Debug, Default)]
pub struct FreeAt {
    pub parts: [Vec<(usize, usize)>; 2],
}

impl FreeAt {
    pub fn part(&self, p: Parity) -> &[(usize, usize)] {
        &self.parts[p.bit() as usize]
    }

    pub fn len(&self, p: Parity) -> usize {
        self.parts[p.bit() as usize].len()
    }

    /// Position of (summand, basis index) within its parity part.
    pub fn position(&self, p: Parity, s: usize, b: usize) -> Option<usize> {
        self.part(p).iter().position(|&x| x == (s, b))
    }
}

fn hom_pair(side: Variance, obj: usize, w: usize) -> (usize, usize) {
    match side {
        Variance::Left => (obj, w),
        Variance::Right => (w, obj),
    }
}

pub fn free_at(t: &HomTable, side: Variance, sums: &[Summand], w: usize) -> FreeAt {
    let mut out = FreeAt::default();
    for (k, s) in sums.iter().enumerate() {
        let (a, b) = hom_pair(side, s.obj, w);
        for (i, e) in t.basis(a, b).iter().enumerate() {
            out.parts[(e.parity + s.shift).bit() as usize].push((k, i));
        }
    }
    out
}

fn place(
    out: &mut IntMatrix,
    at: &FreeAt,
    p: Parity,
    s: usize,
    col: usize,
    v: &[(usize, BigInt)],
) -> Result<()> {
    for (b, x) in v {
        if x.is_zero() {
            continue;
        }
        let row = at.position(p, s, *b).ok_or_else(|| {
            Error::Parity("map between free modules does not preserve parity".into())
        })?;
        *out.get_mut(row, col) += x;
    }
    Ok(())
}

/// The degree-zero map given by `m`, at object `w` on parity part `p`.
pub fn map_at(
    t: &HomTable,
    side: Variance,
    src: &[Summand],
    dst: &[Summand],
    m: &ElemMatrix,
    w: usize,
    p: Parity,
) -> Result<IntMatrix> {
    let (fs, fd) = (free_at(t, side, src, w), free_at(t, side, dst, w));
    map_at_with(t, side, src, dst, m, w, p, &fs, &fd)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn map_at_with(
    t: &HomTable,
    side: Variance,
    src: &[Summand],
    dst: &[Summand],
    m: &ElemMatrix,
    w: usize,
    p: Parity,
    fs: &FreeAt,
    fd: &FreeAt,
) -> Result<IntMatrix> {
    let mut out = IntMatrix::zeros(fd.len(p), fs.len(p));
    for (col, &(k, i)) in fs.part(p).iter().enumerate() {
        let x = vec![(i, BigInt::from(1))];
        for (l, d) in dst.iter().enumerate() {
            let phi = &m[l][k];
            if phi.is_empty() {
                continue;
            }
            let v = match side {
                Variance::Right => t.compose(w, src[k].obj, d.obj, &x, phi),
                Variance::Left => t.compose(d.obj, src[k].obj, w, phi, &x),
            };
            place(&mut out, fd, p, l, col, &v)?;
        }
    }
    Ok(out)
}

/// Action of arrow `g` on a free sum, restricted to source parity `p`.
/// Left: F(src g) -> F(dst g); right: F(dst g) -> F(src g).
pub fn action_at(
    t: &HomTable,
    side: Variance,
    sums: &[Summand],
    g: usize,
    p: Parity,
) -> Result<IntMatrix> {
    let ar = &t.quiver.arrows[g];
    let (from, to) = match side {
        Variance::Left => (ar.src, ar.dst),
        Variance::Right => (ar.dst, ar.src),
    };
    let (fs, fd) = (free_at(t, side, sums, from), free_at(t, side, sums, to));
    let q = p + ar.parity;
    let mut out = IntMatrix::zeros(fd.len(q), fs.len(p));
    let e = t.arrow(g);
    for (col, &(k, i)) in fs.part(p).iter().enumerate() {
        let x = vec![(i, BigInt::from(1))];
        let z = sums[k].obj;
        let v = match side {
            Variance::Right => t.compose(ar.src, ar.dst, z, e, &x),
            Variance::Left => t.compose(z, ar.src, ar.dst, &x, e),
        };
        place(&mut out, &fd, q, k, col, &v)?;
    }
    Ok(out)
}

/// Checks that every entry of `m` is homogeneous of the parity forced by the
/// shifts and lies in the right Hom group.
pub fn check_elem_matrix(
    t: &HomTable,
    side: Variance,
    src: &[Summand],
    dst: &[Summand],
    m: &ElemMatrix,
) -> Result<()> {
    if m.len() != dst.len() || m.iter().any(|r| r.len() != src.len()) {
        return Err(Error::Shape(format!(
            "expected a {}x{} matrix of elements",
            dst.len(),
            src.len()
        )));
    }
    for (l, d) in dst.iter().enumerate() {
        for (k, s) in src.iter().enumerate() {
            let (a, b) = match side {
                Variance::Right => (s.obj, d.obj),
                Variance::Left => (d.obj, s.obj),
            };
            let v = &m[l][k];
            if v.iter().any(|(i, _)| *i >= t.dim(a, b)) {
                return Err(Error::Shape(format!(
                    "entry ({l}, {k}) is not in Hom({}, {})",
                    t.objects()[a],
                    t.objects()[b]
                )));
            }
            if let Some(par) = t.parity_of(a, b, v) {
                if par != s.shift + d.shift {
                    return Err(Error::Parity(format!(
                        "entry ({l}, {k}) has the wrong parity"
                    )));
                }
            } else if v.iter().any(|(_, x)| !x.is_zero()) {
                return Err(Error::Parity(format!(
                    "entry ({l}, {k}) is not homogeneous"
                )));
            }
        }
    }
    Ok(())
}

/// Summands from object labels; a trailing `'` marks an odd shift.
pub fn summands(t: &HomTable, labels: &[&str]) -> Result<Vec<Summand>> {
    labels
        .iter()
        .map(|s| match s.strip_suffix('\'') {
            Some(x) => Ok(Summand::new(t.object(x)?, Parity::Odd)),
            None => Ok(Summand::new(t.object(s)?, Parity::Even)),
        })
        .collect()
}
