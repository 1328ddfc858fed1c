use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::smith::{image_basis, kernel, smith, solve, solve_with};
use crate::error::{Error, Result};

/// `Z^rank + Z/d_1 + ... + Z/d_k` with `1 < d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbGroupNF {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbGroupNF {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbGroupNF {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Canonical form of `Z^rank + (+) Z/d` for arbitrary cyclic orders `d`
    /// (zeros count as free summands, units are dropped).
    pub fn from_cyclic(rank: usize, orders: &[BigInt]) -> Self {
        let n = orders.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, d) in orders.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        let mut g = Presentation::new(n, m).normal_form();
        g.rank += rank;
        g
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbGroupNF) -> AbGroupNF {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        AbGroupNF::from_cyclic(self.rank + other.rank, &orders)
    }

    pub fn sum_all<'a>(gs: impl IntoIterator<Item = &'a AbGroupNF>) -> AbGroupNF {
        let mut rank = 0;
        let mut orders = Vec::new();
        for g in gs {
            rank += g.rank;
            orders.extend(g.torsion.iter().cloned());
        }
        AbGroupNF::from_cyclic(rank, &orders)
    }

    /// Parses the canonical string form, e.g. `"Z^2 + Z/2 + Z/4"` or `"0"`.
    pub fn parse(s: &str) -> Result<AbGroupNF> {
        let s = s.trim();
        if s == "0" {
            return Ok(AbGroupNF::zero());
        }
        let mut rank = 0usize;
        let mut orders = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            if let Some(d) = part.strip_prefix("Z/") {
                let d: BigInt = d
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad cyclic order in {part:?}")))?;
                orders.push(d);
            } else if let Some(r) = part.strip_prefix("Z^") {
                rank += r
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad rank in {part:?}")))?;
            } else if part == "Z" {
                rank += 1;
            } else {
                return Err(Error::Parse(format!("unrecognised group summand {part:?}")));
            }
        }
        Ok(AbGroupNF::from_cyclic(rank, &orders))
    }
}

impl fmt::Display for AbGroupNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(format!("Z^{}", self.rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// The group `Z^n / (column span of relations)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: usize,
    pub relations: IntMatrix,
}

impl Presentation {
    pub fn new(generators: usize, relations: IntMatrix) -> Self {
        assert_eq!(
            relations.rows(),
            generators,
            "relation matrix must have one row per generator"
        );
        Presentation {
            generators,
            relations,
        }
    }

    pub fn free(n: usize) -> Self {
        Presentation {
            generators: n,
            relations: IntMatrix::zeros(n, 0),
        }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn normal_form(&self) -> AbGroupNF {
        if self.relations.cols() == 0 {
            return AbGroupNF::free(self.generators);
        }
        let sf = smith(&self.relations);
        let torsion: Vec<BigInt> = sf
            .invariant_factors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        AbGroupNF {
            rank: self.generators - sf.rank,
            torsion,
        }
    }

    /// Whether `x` represents the zero element.
    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        if x.iter().all(|v| v.is_zero()) {
            return true;
        }
        self.relations.cols() > 0 && solve(&self.relations, x).is_some()
    }

    pub fn direct_sum(parts: &[&Presentation]) -> Presentation {
        let n = parts.iter().map(|p| p.generators).sum();
        let rels: Vec<IntMatrix> = parts.iter().map(|p| p.relations.clone()).collect();
        Presentation {
            generators: n,
            relations: IntMatrix::block_diag(&rels),
        }
    }

    /// Appends `k * identity` to the relations (tensoring with `Z/k`).
    pub fn tensor_mod(&self, k: &BigInt) -> Presentation {
        let extra = IntMatrix::scalar(self.generators, k.clone());
        Presentation {
            generators: self.generators,
            relations: self.relations.hstack(&extra),
        }
    }

    /// Relations with zero columns removed, for tidier output.
    pub fn trimmed(&self) -> Presentation {
        let keep: Vec<usize> = (0..self.relations.cols())
            .filter(|&j| (0..self.generators).any(|i| !self.relations.get(i, j).is_zero()))
            .collect();
        Presentation {
            generators: self.generators,
            relations: self.relations.select_cols(&keep),
        }
    }
}

/// Homomorphism between presented groups, given on generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    pub source: Presentation,
    pub target: Presentation,
    /// target generators x source generators
    pub matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: Presentation, target: Presentation, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.generators || matrix.cols() != source.generators {
            return Err(Error::Shape(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators,
                source.generators
            )));
        }
        let h = GroupHom {
            source,
            target,
            matrix,
        };
        if !h.is_well_defined() {
            return Err(Error::NotWellDefined(
                "relations of the source do not map into relations of the target".into(),
            ));
        }
        Ok(h)
    }

    /// Skips the well-definedness check.
    pub fn new_unchecked(source: Presentation, target: Presentation, matrix: IntMatrix) -> Self {
        GroupHom {
            source,
            target,
            matrix,
        }
    }

    pub fn zero(source: Presentation, target: Presentation) -> Self {
        let m = IntMatrix::zeros(target.generators, source.generators);
        GroupHom {
            source,
            target,
            matrix: m,
        }
    }

    pub fn identity(p: Presentation) -> Self {
        let m = IntMatrix::identity(p.generators);
        GroupHom {
            source: p.clone(),
            target: p,
            matrix: m,
        }
    }

    pub fn is_well_defined(&self) -> bool {
        maps_into_span(
            &(&self.matrix * &self.source.relations),
            &self.target.relations,
        )
    }

    /// Whether the induced map on groups is zero.
    pub fn is_zero(&self) -> bool {
        maps_into_span(&self.matrix, &self.target.relations)
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target.generators != other.source.generators {
            return Err(Error::Shape(
                "composable maps need matching middle group".into(),
            ));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: &other.matrix * &self.matrix,
        })
    }

    pub fn negate(&self) -> GroupHom {
        GroupHom {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: -&self.matrix,
        }
    }

    pub fn kernel(&self) -> Subgroup {
        // x with M x in span(R_target)
        let stacked = self.matrix.hstack(&self.target.relations);
        let k = kernel(&stacked);
        let n = self.source.generators;
        let rows: Vec<usize> = (0..n).collect();
        let gens = k.select_rows(&rows);
        Subgroup::new(self.source.clone(), gens)
    }

    pub fn image_group(&self) -> AbGroupNF {
        // im = span(M) + R_target inside Z^target / R_target
        let sub = Subgroup::new(self.target.clone(), self.matrix.clone());
        sub.as_group()
    }

    pub fn cokernel(&self) -> Presentation {
        Presentation::new(
            self.target.generators,
            self.target.relations.hstack(&self.matrix),
        )
    }
}

fn maps_into_span(cols: &IntMatrix, span: &IntMatrix) -> bool {
    if cols.is_zero() {
        return true;
    }
    if span.cols() == 0 {
        return false;
    }
    let sf = smith(span);
    (0..cols.cols()).all(|j| solve_with(&sf, &cols.col(j)).is_some())
}

/// A subgroup of a presented group, spanned (modulo the ambient relations)
/// by the columns of `gens`.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub ambient: Presentation,
    pub gens: IntMatrix,
}

impl Subgroup {
    pub fn new(ambient: Presentation, gens: IntMatrix) -> Self {
        assert_eq!(gens.rows(), ambient.generators);
        Subgroup { ambient, gens }
    }

    /// The subgroup as an abstract group: lattice `L = span(gens) + R` modulo `R`.
    pub fn as_group(&self) -> AbGroupNF {
        let lattice = image_basis(&self.gens.hstack(&self.ambient.relations));
        quotient_of_lattice(&lattice, &self.ambient.relations).group
    }
}

/// `lattice / sub` where `sub ⊆ lattice ⊆ Z^n`, with coordinates.
#[derive(Debug)]
pub struct LatticeQuotient {
    pub group: AbGroupNF,
    /// Columns: representatives in `Z^n` of generators of the cyclic summands,
    /// torsion ones first (in the order of `group.torsion`), then free ones.
    pub generators: Vec<Vec<BigInt>>,
    basis: IntMatrix,
    u: IntMatrix,
    orders: Vec<BigInt>,
}

impl LatticeQuotient {
    /// Coordinates of the class of `x` (which must lie in the lattice) with
    /// respect to `generators`; torsion coordinates reduced modulo their order.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = if self.basis.cols() == 0 {
            if x.iter().all(|v| v.is_zero()) {
                Vec::new()
            } else {
                return None;
            }
        } else {
            solve(&self.basis, x)?
        };
        let z = self.u.mul_vec(&y);
        let mut out = Vec::new();
        for (zi, d) in z.iter().zip(&self.orders) {
            if d.is_one() {
                continue;
            }
            if d.is_zero() {
                out.push(zi.clone());
            } else {
                out.push(zi.mod_floor(d));
            }
        }
        // reorder: torsion first, then free; orders are nondecreasing with zeros last
        Some(out)
    }

    pub fn is_zero_class(&self, x: &[BigInt]) -> Option<bool> {
        Some(self.coordinates(x)?.iter().all(|v| v.is_zero()))
    }
}

/// Computes `lattice / sub`, where the columns of `lattice` are a basis and the
/// columns of `sub` lie in its span.
pub fn quotient_of_lattice(lattice: &IntMatrix, sub: &IntMatrix) -> LatticeQuotient {
    let l = lattice.cols();
    let n = lattice.rows();
    if l == 0 {
        return LatticeQuotient {
            group: AbGroupNF::zero(),
            generators: Vec::new(),
            basis: lattice.clone(),
            u: IntMatrix::zeros(0, 0),
            orders: Vec::new(),
        };
    }
    let mut coords = Vec::with_capacity(sub.cols());
    if sub.cols() > 0 {
        let sf = smith(lattice);
        for j in 0..sub.cols() {
            let c = solve_with(&sf, &sub.col(j)).expect("sub-lattice must lie inside the lattice");
            coords.push(c);
        }
    }
    let rel = if coords.is_empty() {
        IntMatrix::zeros(l, 0)
    } else {
        IntMatrix::from_columns(l, &coords)
    };
    let sf = smith(&rel);
    let mut orders = Vec::with_capacity(l);
    for i in 0..l {
        if i < sf.rank {
            orders.push(sf.s.get(i, i).clone());
        } else {
            orders.push(BigInt::zero());
        }
    }
    // generator i of the diagonal form is u_inv e_i in lattice coordinates
    let mut generators = Vec::new();
    let mut torsion = Vec::new();
    let mut rank = 0;
    for (i, d) in orders.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let coeff = sf.u_inv.col(i);
        let v = lattice.mul_vec(&coeff);
        if d.is_zero() {
            rank += 1;
        } else {
            torsion.push(d.clone());
        }
        generators.push(v);
    }
    let _ = n;
    LatticeQuotient {
        group: AbGroupNF { rank, torsion },
        generators,
        basis: lattice.clone(),
        u: sf.u,
        orders,
    }
}

/// Homology `ker(g) / im(f)` of `A --f--> B --g--> C` at `B`.
#[derive(Debug)]
pub struct Homology {
    pub group: AbGroupNF,
    quotient: LatticeQuotient,
    /// Lattice basis of `{x in Z^B : g x in span(R_C)}` (columns).
    pub cycles: IntMatrix,
}

impl Homology {
    /// Representatives in the generators of `B` of the cyclic summands;
    /// torsion summands first, in the order of `group.torsion`, then free ones.
    pub fn witnesses(&self) -> &[Vec<BigInt>] {
        &self.quotient.generators
    }

    /// Class of a cycle `x`, in the coordinates of `witnesses()`.
    /// Returns `None` if `x` is not a cycle.
    pub fn class_of(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        self.quotient.coordinates(x)
    }
}

pub fn subquotient_homology(f: &GroupHom, g: &GroupHom) -> Result<Homology> {
    if f.target.generators != g.source.generators {
        return Err(Error::Shape(
            "homology needs f: A -> B and g: B -> C".into(),
        ));
    }
    let gf = f.then(g)?;
    if !gf.is_zero() {
        return Err(Error::CompositionNonzero);
    }
    let b = &f.target;
    let cyc = g.kernel();
    let cycles = image_basis(&cyc.gens.hstack(&b.relations));
    let boundaries = f.matrix.hstack(&b.relations);
    let quotient = quotient_of_lattice(&cycles, &boundaries);
    Ok(Homology {
        group: quotient.group.clone(),
        quotient,
        cycles,
    })
}

/// Builds the direct sum of homomorphisms as a block matrix.
pub fn block_hom(
    source: &[&Presentation],
    target: &[&Presentation],
    blocks: &[Vec<IntMatrix>],
) -> GroupHom {
    let s = Presentation::direct_sum(source);
    let t = Presentation::direct_sum(target);
    let mut m = IntMatrix::zeros(t.generators, s.generators);
    let mut r0 = 0;
    for (bi, tp) in target.iter().enumerate() {
        let mut c0 = 0;
        for (bj, sp) in source.iter().enumerate() {
            let blk = &blocks[bi][bj];
            assert_eq!(
                (blk.rows(), blk.cols()),
                (tp.generators, sp.generators),
                "block ({bi},{bj}) has wrong shape"
            );
            m.set_block(r0, c0, blk);
            c0 += sp.generators;
        }
        r0 += tp.generators;
    }
    GroupHom::new_unchecked(s, t, m)
}

/// Reduces a vector modulo the given positive orders (0 meaning free).
pub fn reduce_mod(v: &[BigInt], orders: &[BigInt]) -> Vec<BigInt> {
    v.iter()
        .zip(orders)
        .map(|(x, d)| {
            if d.is_zero() {
                x.clone()
            } else {
                x.mod_floor(d)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zexact::matrix::ivec;

    fn nf(n: usize, rows: &[&[i64]], cols: usize) -> AbGroupNF {
        Presentation::new(n, IntMatrix::from_rows(rows, cols)).normal_form()
    }

    #[test]
    fn normal_forms() {
        assert_eq!(nf(2, &[&[2, 2], &[2, 2]], 2).to_string(), "Z^1 + Z/2");
        assert_eq!(Presentation::free(3).normal_form().to_string(), "Z^3");
        assert_eq!(nf(2, &[&[1, 1], &[1, 1]], 2).to_string(), "Z^1");
        assert_eq!(AbGroupNF::zero().to_string(), "0");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "Z^1 + Z/2", "Z^3", "Z/2 + Z/6"] {
            assert_eq!(AbGroupNF::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(AbGroupNF::parse("Z/2 + Z/3").unwrap().to_string(), "Z/6");
    }

    #[test]
    fn trivial_homologies() {
        let z2 = Presentation::free(2);
        let f = GroupHom::zero(z2.clone(), z2.clone());
        let g = GroupHom::zero(z2.clone(), z2.clone());
        assert_eq!(
            subquotient_homology(&f, &g).unwrap().group,
            AbGroupNF::free(2)
        );

        let z = Presentation::free(1);
        let id = GroupHom::identity(z.clone());
        let to_zero = GroupHom::zero(z.clone(), Presentation::zero());
        assert!(subquotient_homology(&id, &to_zero).unwrap().group.is_zero());
        assert!(matches!(
            subquotient_homology(&id, &id),
            Err(Error::CompositionNonzero)
        ));
    }

    #[test]
    fn identified_s_complex() {
        // Z + Z/2 + Z -> (Z/2)^2 + Z + (Z/2)^2 -> (Z/2)^3
        let two = BigInt::from(2);
        let a = Presentation::new(3, IntMatrix::from_rows(&[[0], [2], [0]], 1));
        let b = Presentation::new(
            5,
            IntMatrix::block_diag(&[
                IntMatrix::scalar(2, two.clone()),
                IntMatrix::zeros(1, 0),
                IntMatrix::scalar(2, two.clone()),
            ]),
        );
        let c = Presentation::new(3, IntMatrix::scalar(3, two));
        let f = GroupHom::new(
            a,
            b.clone(),
            IntMatrix::from_rows(&[[0, 1, 0], [0, 0, 0], [-2, 0, 2], [0, 1, 0], [0, 0, 0]], 3),
        )
        .unwrap();
        let g = GroupHom::new(
            b,
            c,
            IntMatrix::from_rows(&[[1, 0, 0, 1, 0], [0, 1, 1, 0, 0], [0, 0, 1, 0, 1]], 5),
        )
        .unwrap();
        let h = subquotient_homology(&f, &g).unwrap();
        assert_eq!(h.group.to_string(), "Z/2");
        let cls = h.class_of(&ivec(&[0, 1, 1, 0, 1])).expect("cycle");
        assert_eq!(cls, ivec(&[1]));
        // negating both differentials leaves homology unchanged
        let h2 = subquotient_homology(&f.negate(), &g.negate()).unwrap();
        assert_eq!(h2.group, h.group);
    }
}
