//! K-groups of subquotients and the filtrated K-theory module of a graph.

use num_bigint::BigInt;

use super::graph::BlockGraph;
use crate::error::{Error, Result};
use crate::finspace::PointSet;
use crate::ntcat::{ArrowKind, NtCategory};
use crate::ntmod::{ActionMats, GradedModule, Variance};
use crate::zexact::graded::{GradedGroup, Parity};
use crate::zexact::group::{AbGroupNF, Presentation};
use crate::zexact::matrix::IntMatrix;
use crate::zexact::smith::{image_basis, kernel, solve};

/// `K_0 = coker(phi)`, `K_1 = ker(phi)` for `phi = (A^t - I)` on `V_Y`.
#[derive(Clone, Debug)]
pub struct SubquotientK {
    pub y: PointSet,
    pub vertices: Vec<usize>,
    pub phi: IntMatrix,
    pub k0: AbGroupNF,
    /// Columns: a basis of `ker(phi)`.
    pub k1_basis: IntMatrix,
    pub k1: AbGroupNF,
}

impl SubquotientK {
    pub fn k0_presentation(&self) -> Presentation {
        Presentation::new(self.vertices.len(), self.phi.clone())
    }

    /// Coordinates of a kernel vector in `k1_basis`.
    fn k1_coords(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if self.k1_basis.cols() == 0 {
            return Ok(Vec::new());
        }
        solve(&self.k1_basis, v).ok_or_else(|| Error::Graph("vector is not in the kernel".into()))
    }
}

pub fn k_groups(g: &BlockGraph, y: PointSet) -> Result<SubquotientK> {
    if !g.space.is_locally_closed(y) {
        return Err(Error::Graph(format!(
            "{} is not locally closed",
            g.space.render(y)
        )));
    }
    if let Some((p, q)) = g.triangularity_violations(y).first() {
        let l = g.space.labels();
        return Err(Error::Graph(format!(
            "edges from block {} to block {} break the restriction",
            l[*p], l[*q]
        )));
    }
    let vertices = g.vertices(y);
    let phi = g.phi_block(&vertices, &vertices);
    let n = vertices.len();
    let k = if n == 0 {
        IntMatrix::zeros(0, 0)
    } else {
        kernel(&phi)
    };
    let k1_basis = if k.cols() == 0 {
        IntMatrix::zeros(n, 0)
    } else {
        image_basis(&k)
    };
    Ok(SubquotientK {
        y,
        k0: Presentation::new(n, phi.clone()).normal_form(),
        k1: AbGroupNF::free(k1_basis.cols()),
        vertices,
        phi,
        k1_basis,
    })
}

/// Matrix sending coordinates on `from` to coordinates on `to` (shared
/// vertices kept, others dropped or zero).
fn transfer(from: &[usize], to: &[usize]) -> IntMatrix {
    let mut m = IntMatrix::zeros(to.len(), from.len());
    for (j, v) in from.iter().enumerate() {
        if let Some(i) = to.iter().position(|w| w == v) {
            m.set(i, j, BigInt::from(1));
        }
    }
    m
}

fn k1_map(src: &SubquotientK, dst: &SubquotientK, coord: &IntMatrix) -> Result<IntMatrix> {
    let mut m = IntMatrix::zeros(dst.k1_basis.cols(), src.k1_basis.cols());
    for j in 0..src.k1_basis.cols() {
        let v = coord.mul_vec(&src.k1_basis.col(j));
        for (i, x) in dst.k1_coords(&v)?.into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    Ok(m)
}

/// The filtrated K-theory of the graph algebra as a left module.
/// `i` and `r` act by coordinate inclusion and projection; the odd part of
/// `delta: C -> U` is `v -> (A^t)[V_U, V_C] v` and its even part vanishes.
pub fn fk_module(g: &BlockGraph) -> Result<GradedModule> {
    let cat = NtCategory::builtin(g.space.name())?;
    let t = &cat.table;
    let ks: Vec<SubquotientK> = (0..t.len())
        .map(|k| k_groups(g, cat.object_set(k)))
        .collect::<Result<_>>()?;
    let entries: Vec<GradedGroup> = ks
        .iter()
        .map(|k| GradedGroup::new(k.k0_presentation(), Presentation::free(k.k1_basis.cols())))
        .collect();
    let mut actions = Vec::with_capacity(t.quiver.arrows.len());
    for ar in &t.quiver.arrows {
        let (s, d) = (&ks[ar.src], &ks[ar.dst]);
        let act = match ar.kind {
            ArrowKind::I | ArrowKind::R => {
                let c = transfer(&s.vertices, &d.vertices);
                ActionMats {
                    degree: Parity::Even,
                    mats: [c.clone(), k1_map(s, d, &c)?],
                }
            }
            ArrowKind::Delta => {
                let x = g.phi_block(&d.vertices, &s.vertices);
                let even = IntMatrix::zeros(d.k1_basis.cols(), s.vertices.len());
                ActionMats {
                    degree: Parity::Odd,
                    mats: [even, &x * &s.k1_basis],
                }
            }
        };
        actions.push(act);
    }
    let m = GradedModule {
        space: cat.name().to_string(),
        variance: Variance::Left,
        entries,
        actions,
    };
    m.check_shapes(t)?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::FiniteSpace;

    #[test]
    fn single_block_groups() {
        // B' = (2 2; 2 2): K_1 = Z, K_0 = Z + Z/2
        let a = IntMatrix::from_rows(&[[3, 2], [2, 3]], 2);
        let g = BlockGraph::new(FiniteSpace::point(), vec![(0, 2)], a).unwrap();
        let k = k_groups(&g, PointSet::singleton(0)).unwrap();
        assert_eq!(k.k1, AbGroupNF::free(1));
        assert_eq!(k.k0.to_string(), "Z^1 + Z/2");
        let v = k.k1_basis.col(0);
        assert_eq!(v[0].clone() + &v[1], BigInt::from(0));
    }

    #[test]
    fn rank_nullity() {
        let a = IntMatrix::from_rows(&[[3, 2], [1, 2]], 2);
        let g = BlockGraph::new(FiniteSpace::point(), vec![(0, 2)], a).unwrap();
        let k = k_groups(&g, PointSet::singleton(0)).unwrap();
        assert_eq!((k.k1.rank, k.k0.rank, k.k0.torsion.len()), (1, 1, 0));
    }
}
