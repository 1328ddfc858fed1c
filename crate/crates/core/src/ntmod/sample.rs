//! Explicit finite resolutions by free left modules, and the module over
//! `Z4` of projective dimension two built from one.

use num_bigint::BigInt;

use super::free::{map_at, summands, ElemMatrix, Summand, Variance};
use super::module::{coker_module, GradedModule};
use crate::error::{Error, Result};
use crate::ntcat::{ArrowKind, HomTable, NtCategory};
use crate::zexact::graded::Parity;
use crate::zexact::group::{subquotient_homology, GroupHom, Presentation};
use crate::zexact::matrix::IntMatrix;
use crate::zexact::sparse::SparseRow;

/// `0 -> L_n -> ... -> L_0` of free left modules; `diffs[n - 1]: L_n -> L_{n-1}`.
#[derive(Clone, Debug)]
pub struct LeftResolution {
    pub levels: Vec<Vec<Summand>>,
    pub diffs: Vec<ElemMatrix>,
}

impl LeftResolution {
    pub fn length(&self) -> usize {
        self.levels.len() - 1
    }

    /// The resolved module, `coker(d_1)`.
    pub fn module(&self, t: &HomTable) -> Result<GradedModule> {
        coker_module(
            t,
            Variance::Left,
            &self.levels[1],
            &self.levels[0],
            &self.diffs[0],
        )
    }

    /// Checks `d d = 0`, injectivity of the top map, exactness in between
    /// and that `coker(d_1)` has the entries of `m` objectwise.
    pub fn check(&self, t: &HomTable, m: &GradedModule) -> Result<()> {
        let n = self.length();
        for w in 0..t.len() {
            for p in Parity::both() {
                let mats: Vec<IntMatrix> = (1..=n)
                    .map(|k| {
                        map_at(
                            t,
                            Variance::Left,
                            &self.levels[k],
                            &self.levels[k - 1],
                            &self.diffs[k - 1],
                            w,
                            p,
                        )
                    })
                    .collect::<Result<_>>()?;
                let hom = |k: usize| {
                    GroupHom::new_unchecked(
                        Presentation::free(mats[k].cols()),
                        Presentation::free(mats[k].rows()),
                        mats[k].clone(),
                    )
                };
                // level k sits between d_{k+1} and d_k; the top one between 0 and d_n
                for k in 1..=n {
                    let f = if k < n {
                        hom(k)
                    } else {
                        GroupHom::zero(Presentation::zero(), Presentation::free(mats[n - 1].cols()))
                    };
                    let h = subquotient_homology(&f, &hom(k - 1)).map_err(|_| {
                        Error::Computation(format!("composite into level {} is nonzero", k - 1))
                    })?;
                    if !h.group.is_zero() {
                        return Err(Error::Computation(format!(
                            "not exact at level {k} on {} ({p})",
                            t.objects()[w]
                        )));
                    }
                }
                let c = Presentation::new(mats[0].rows(), mats[0].clone()).normal_form();
                if c != m.entries[w].part(p).normal_form() {
                    return Err(Error::Computation(format!(
                        "cokernel differs from the module on {}",
                        t.objects()[w]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Resolution of `M ⊗ Z/k` for a resolution of length two of `M`:
    /// the cone of multiplication by `k`.
    pub fn mod_k(&self, t: &HomTable, k: i64) -> Result<LeftResolution> {
        if self.length() != 2 {
            return Err(Error::Computation(
                "tensoring a resolution needs length two".into(),
            ));
        }
        let (p3, p4, p5) = (&self.levels[0], &self.levels[1], &self.levels[2]);
        let (beta, alpha) = (&self.diffs[0], &self.diffs[1]);
        let cat = |a: &[Summand], b: &[Summand]| [a, b].concat();
        let levels = vec![p3.clone(), cat(p4, p3), cat(p5, p4), p5.clone()];
        let d1 = hcat(beta, &scalar(t, p3, k));
        let d2 = vcat(
            &hcat(alpha, &scalar(t, p4, -k)),
            &hcat(&empty(p3.len(), p5.len()), beta),
        );
        let d3 = vcat(&scalar(t, p5, k), alpha);
        Ok(LeftResolution {
            levels,
            diffs: vec![d1, d2, d3],
        })
    }
}

fn empty(rows: usize, cols: usize) -> ElemMatrix {
    vec![vec![Vec::new(); cols]; rows]
}

fn scalar(t: &HomTable, sums: &[Summand], k: i64) -> ElemMatrix {
    let mut m = empty(sums.len(), sums.len());
    for (i, s) in sums.iter().enumerate() {
        m[i][i] = t
            .identity(s.obj)
            .iter()
            .map(|(b, x)| (*b, x * BigInt::from(k)))
            .collect();
    }
    m
}

fn hcat(a: &ElemMatrix, b: &ElemMatrix) -> ElemMatrix {
    a.iter()
        .zip(b)
        .map(|(x, y)| [x.as_slice(), y.as_slice()].concat())
        .collect()
}

fn vcat(a: &ElemMatrix, b: &ElemMatrix) -> ElemMatrix {
    a.iter().chain(b).cloned().collect()
}

/// `0 -> P_12345 -> (+) P_{12345\i} -> (+) P_{jk5}` over `Z4`.
pub fn length_two_resolution(cat: &NtCategory) -> Result<LeftResolution> {
    if cat.name() != "Z4" {
        return Err(Error::MissingResolution(format!(
            "no length two example over {}",
            cat.name()
        )));
    }
    let t = &cat.table;
    let i = |s: &str, d: &str| cat.word(&[(ArrowKind::I, s, d)]);
    let neg = |v: SparseRow| -> SparseRow { v.into_iter().map(|(b, x)| (b, -x)).collect() };
    let faces = ["2345", "1345", "1245", "1235"];
    let pairs = ["345", "245", "145", "235", "135", "125"];
    let signs: [[i8; 4]; 6] = [
        [1, -1, 0, 0],
        [-1, 0, 1, 0],
        [0, 1, -1, 0],
        [1, 0, 0, -1],
        [0, -1, 0, 1],
        [0, 0, 1, -1],
    ];
    let mut beta = empty(6, 4);
    for (r, row) in signs.iter().enumerate() {
        for (c, &s) in row.iter().enumerate() {
            if s != 0 {
                let e = i(pairs[r], faces[c])?;
                beta[r][c] = if s > 0 { e } else { neg(e) };
            }
        }
    }
    let alpha = faces
        .iter()
        .map(|f| Ok(vec![i(f, "12345")?]))
        .collect::<Result<ElemMatrix>>()?;
    Ok(LeftResolution {
        levels: vec![
            summands(t, &pairs)?,
            summands(t, &faces)?,
            summands(t, &["12345"])?,
        ],
        diffs: vec![beta, alpha],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntmod::module::validate;

    #[test]
    fn z4_example_resolves_its_cokernel() {
        let cat = NtCategory::builtin("Z4").unwrap();
        let r = length_two_resolution(cat).unwrap();
        let m = r.module(&cat.table).unwrap();
        assert!(validate(&m, &cat.table, &cat.presentation.relations).is_valid());
        r.check(&cat.table, &m).unwrap();
        let r3 = r.mod_k(&cat.table, 3).unwrap();
        r3.check(&cat.table, &m.tensor_mod_k(3).unwrap()).unwrap();
    }
}
