//! Graded modules over a presented category.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::free::{action_at, check_elem_matrix, free_at, map_at, ElemMatrix, Summand, Variance};
use crate::error::{Error, Result};
use crate::ntcat::HomTable;
use crate::zexact::graded::{GradedGroup, GradedNF, Parity};
use crate::zexact::group::{GroupHom, Presentation};
use crate::zexact::matrix::IntMatrix;

/// Matrices of a map of fixed degree between two graded groups; `mats[p]`
/// starts at source part `p` and lands in part `p + degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMats {
    pub degree: Parity,
    pub mats: [IntMatrix; 2],
}

impl ActionMats {
    pub fn zero(src: &GradedGroup, dst: &GradedGroup, degree: Parity) -> Self {
        let m =
            |p: Parity| IntMatrix::zeros(dst.part(p + degree).generators, src.part(p).generators);
        ActionMats {
            degree,
            mats: [m(Parity::Even), m(Parity::Odd)],
        }
    }

    pub fn identity(g: &GradedGroup) -> Self {
        ActionMats {
            degree: Parity::Even,
            mats: [
                IntMatrix::identity(g.even.generators),
                IntMatrix::identity(g.odd.generators),
            ],
        }
    }

    pub fn part(&self, p: Parity) -> &IntMatrix {
        &self.mats[p.bit() as usize]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ActionMats) -> ActionMats {
        let m = |p: Parity| other.part(p + self.degree) * self.part(p);
        ActionMats {
            degree: self.degree + other.degree,
            mats: [m(Parity::Even), m(Parity::Odd)],
        }
    }

    pub fn add_scaled(&mut self, k: &BigInt, other: &ActionMats) {
        for p in Parity::both() {
            let i = p.bit() as usize;
            self.mats[i] = self.mats[i].add(&other.part(p).scale(k));
        }
    }

    pub fn to_hom(&self, src: &GradedGroup, dst: &GradedGroup, p: Parity) -> GroupHom {
        GroupHom::new_unchecked(
            src.part(p).clone(),
            dst.part(p + self.degree).clone(),
            self.part(p).clone(),
        )
    }

    pub fn is_zero_on(&self, src: &GradedGroup, dst: &GradedGroup) -> bool {
        Parity::both()
            .iter()
            .all(|&p| self.to_hom(src, dst, p).is_zero())
    }
}

/// A graded module: one graded group per object, one map per arrow.
/// Arrow `g: a -> b` acts `M(a) -> M(b)` on left modules and
/// `M(b) -> M(a)` on right modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    pub space: String,
    pub variance: Variance,
    pub entries: Vec<GradedGroup>,
    pub actions: Vec<ActionMats>,
}

impl GradedModule {
    pub fn zero(t: &HomTable, variance: Variance) -> Self {
        let entries = vec![GradedGroup::zero(); t.len()];
        let actions = t
            .quiver
            .arrows
            .iter()
            .map(|a| ActionMats::zero(&entries[0], &entries[0], a.parity))
            .collect();
        GradedModule {
            space: t.name.clone(),
            variance,
            entries,
            actions,
        }
    }

    /// Source and target object of the action of arrow `g`.
    pub fn action_ends(&self, t: &HomTable, g: usize) -> (usize, usize) {
        let a = &t.quiver.arrows[g];
        match self.variance {
            Variance::Left => (a.src, a.dst),
            Variance::Right => (a.dst, a.src),
        }
    }

    pub fn entry_nf(&self, obj: usize) -> GradedNF {
        self.entries[obj].normal_form()
    }

    /// Shape and well-definedness of entries and actions.
    pub fn check_shapes(&self, t: &HomTable) -> Result<()> {
        if self.entries.len() != t.len() || self.actions.len() != t.quiver.arrows.len() {
            return Err(Error::InvalidModule(
                "entries or actions do not match the category".into(),
            ));
        }
        for (g, act) in self.actions.iter().enumerate() {
            let ar = &t.quiver.arrows[g];
            if act.degree != ar.parity {
                return Err(Error::InvalidModule(format!(
                    "action of {} has the wrong degree",
                    ar.name
                )));
            }
            let (a, b) = self.action_ends(t, g);
            let (src, dst) = (&self.entries[a], &self.entries[b]);
            for p in Parity::both() {
                let m = act.part(p);
                if m.rows() != dst.part(p + act.degree).generators
                    || m.cols() != src.part(p).generators
                {
                    return Err(Error::InvalidModule(format!(
                        "action of {} has the wrong shape",
                        ar.name
                    )));
                }
                if !act.to_hom(src, dst, p).is_well_defined() {
                    return Err(Error::InvalidModule(format!(
                        "action of {} is not well defined",
                        ar.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Entrywise tensor product with `Z/k`.
    pub fn tensor_mod_k(&self, k: u64) -> Result<GradedModule> {
        if k < 2 {
            return Err(Error::InvalidModule("tensoring needs k >= 2".into()));
        }
        let k = BigInt::from(k);
        let mut out = self.clone();
        for e in &mut out.entries {
            e.even = e.even.tensor_mod(&k);
            e.odd = e.odd.tensor_mod(&k);
        }
        Ok(out)
    }

    /// Negates the action of every odd arrow.
    pub fn negate_odd(&self) -> GradedModule {
        let mut out = self.clone();
        for a in &mut out.actions {
            if a.degree == Parity::Odd {
                a.mats = [-&a.mats[0], -&a.mats[1]];
            }
        }
        out
    }

    /// `M[1]`: parts of every entry swapped.
    pub fn shifted(&self) -> GradedModule {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.shift();
        }
        for a in &mut out.actions {
            a.mats.swap(0, 1);
        }
        out
    }
}

/// Evaluates table elements on a module, caching basis elements.
pub struct ModuleEval<'a> {
    pub t: &'a HomTable,
    pub m: &'a GradedModule,
    cache: RefCell<HashMap<(usize, usize, usize), ActionMats>>,
}

impl<'a> ModuleEval<'a> {
    pub fn new(t: &'a HomTable, m: &'a GradedModule) -> Self {
        ModuleEval {
            t,
            m,
            cache: RefCell::new(HashMap::new()),
        }
    }

    fn ends(&self, a: usize, b: usize) -> (usize, usize) {
        match self.m.variance {
            Variance::Left => (a, b),
            Variance::Right => (b, a),
        }
    }

    fn path(&self, a: usize, path: &[usize]) -> ActionMats {
        let b = path
            .last()
            .map(|&k| self.t.quiver.arrows[k].dst)
            .unwrap_or(a);
        let (start, steps): (usize, Vec<usize>) = match self.m.variance {
            Variance::Left => (a, path.to_vec()),
            Variance::Right => (b, path.iter().rev().copied().collect()),
        };
        let mut acc = ActionMats::identity(&self.m.entries[start]);
        for k in steps {
            acc = acc.then(&self.m.actions[k]);
        }
        acc
    }

    pub fn basis(&self, a: usize, b: usize, k: usize) -> ActionMats {
        if let Some(x) = self.cache.borrow().get(&(a, b, k)) {
            return x.clone();
        }
        let e = &self.t.basis(a, b)[k];
        let v = self.path(a, &e.path);
        self.cache.borrow_mut().insert((a, b, k), v.clone());
        v
    }

    /// `M(x)` for a homogeneous `x` in Hom(a, b).
    pub fn eval(&self, a: usize, b: usize, x: &[(usize, BigInt)]) -> Result<ActionMats> {
        let (s, d) = self.ends(a, b);
        let deg = self
            .t
            .parity_of(a, b, x)
            .or(if x.iter().all(|(_, c)| c.is_zero()) {
                Some(Parity::Even)
            } else {
                None
            })
            .ok_or_else(|| Error::Parity("element is not homogeneous".into()))?;
        let mut acc = ActionMats::zero(&self.m.entries[s], &self.m.entries[d], deg);
        for (k, c) in x {
            if !c.is_zero() {
                acc.add_scaled(c, &self.basis(a, b, *k));
            }
        }
        Ok(acc)
    }

    /// `M(x)` with degree forced, so that zero elements get the right shape.
    pub fn eval_deg(
        &self,
        a: usize,
        b: usize,
        x: &[(usize, BigInt)],
        deg: Parity,
    ) -> Result<ActionMats> {
        let mut v = self.eval(a, b, x)?;
        if x.is_empty() {
            let (s, d) = self.ends(a, b);
            v = ActionMats::zero(&self.m.entries[s], &self.m.entries[d], deg);
        } else if v.degree != deg {
            return Err(Error::Parity("element has unexpected parity".into()));
        }
        Ok(v)
    }
}

/// Result of [`validate`]: the relations that fail, with their objects.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks actions and that every relation of the category acts as zero.
pub fn validate(
    m: &GradedModule,
    t: &HomTable,
    relations: &[crate::ntcat::PathRelation],
) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if let Err(e) = m.check_shapes(t) {
        rep.violations.push(e.to_string());
        return rep;
    }
    let ev = ModuleEval::new(t, m);
    for (n, r) in relations.iter().enumerate() {
        let (s, d) = ev.ends(r.src, r.dst);
        let deg = r
            .terms
            .first()
            .and_then(|(_, p)| t.quiver.path_parity(p).ok())
            .unwrap_or(Parity::Even);
        let mut acc = ActionMats::zero(&m.entries[s], &m.entries[d], deg);
        for (c, p) in &r.terms {
            acc.add_scaled(c, &ev.path(r.src, p));
        }
        if !acc.is_zero_on(&m.entries[s], &m.entries[d]) {
            let words: Vec<String> = r
                .terms
                .iter()
                .map(|(c, p)| format!("{c}*{}", t.quiver.path_name(p, r.src)))
                .collect();
            rep.violations.push(format!(
                "relation {n} ({}) fails on {} -> {}",
                words.join(" + "),
                t.objects()[r.src],
                t.objects()[r.dst]
            ));
        }
    }
    rep
}

/// `M / NT_nil M` per object.
pub fn m_ss(m: &GradedModule, t: &HomTable) -> Vec<GradedNF> {
    let mut out = Vec::with_capacity(t.len());
    for y in 0..t.len() {
        let e = &m.entries[y];
        let mut rels = [e.even.relations.clone(), e.odd.relations.clone()];
        for (g, act) in m.actions.iter().enumerate() {
            let (_, to) = m.action_ends(t, g);
            if to != y {
                continue;
            }
            for p in Parity::both() {
                let q = (p + act.degree).bit() as usize;
                rels[q] = rels[q].hstack(act.part(p));
            }
        }
        let [re, ro] = rels;
        out.push(GradedNF {
            even: Presentation::new(e.even.generators, re).normal_form(),
            odd: Presentation::new(e.odd.generators, ro).normal_form(),
        });
    }
    out
}

/// Cokernel of a map between sums of free modules of the given variance.
pub fn coker_module(
    t: &HomTable,
    side: Variance,
    src: &[Summand],
    dst: &[Summand],
    f: &ElemMatrix,
) -> Result<GradedModule> {
    check_elem_matrix(t, side, src, dst, f)?;
    let mut entries = Vec::with_capacity(t.len());
    for w in 0..t.len() {
        let fd = free_at(t, side, dst, w);
        let mut parts = Vec::new();
        for p in Parity::both() {
            let rel = map_at(t, side, src, dst, f, w, p)?;
            parts.push(Presentation::new(fd.len(p), rel));
        }
        let odd = parts.pop().unwrap();
        entries.push(GradedGroup::new(parts.pop().unwrap(), odd));
    }
    let mut actions = Vec::with_capacity(t.quiver.arrows.len());
    for (g, ar) in t.quiver.arrows.iter().enumerate() {
        let m0 = action_at(t, side, dst, g, Parity::Even)?;
        let m1 = action_at(t, side, dst, g, Parity::Odd)?;
        actions.push(ActionMats {
            degree: ar.parity,
            mats: [m0, m1],
        });
    }
    Ok(GradedModule {
        space: t.name.clone(),
        variance: side,
        entries,
        actions,
    })
}

/// `P_Y[shift]` (left) or `Q_Y[shift]` (right).
pub fn free_module(t: &HomTable, y: usize, side: Variance, shift: Parity) -> Result<GradedModule> {
    coker_module(t, side, &[], &[Summand::new(y, shift)], &vec![Vec::new()])
}

/// The simple right module `S_Y`: `Z` in even degree at `Y`.
pub fn simple_module(t: &HomTable, y: usize) -> GradedModule {
    let mut m = GradedModule::zero(t, Variance::Right);
    m.entries[y] = GradedGroup::new(Presentation::free(1), Presentation::zero());
    for (g, ar) in t.quiver.arrows.iter().enumerate() {
        let (a, b) = m.action_ends(t, g);
        m.actions[g] = ActionMats::zero(&m.entries[a], &m.entries[b], ar.parity);
    }
    m
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PartFile {
    pub gens: usize,
    #[serde(default)]
    pub rels: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct EntryFile {
    #[serde(default)]
    pub even: PartFile,
    #[serde(default)]
    pub odd: PartFile,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ActionFile {
    #[serde(rename = "evenPart", default)]
    pub even_part: Vec<Vec<i64>>,
    #[serde(rename = "oddPart", default)]
    pub odd_part: Vec<Vec<i64>>,
}

/// JSON form of a module; missing entries and actions are zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleFile {
    pub space: String,
    #[serde(default)]
    pub variance: Variance,
    #[serde(default)]
    pub entries: BTreeMap<String, EntryFile>,
    #[serde(default)]
    pub actions: BTreeMap<String, ActionFile>,
}

fn part_from(f: &PartFile) -> Result<Presentation> {
    let mut cols = Vec::new();
    for r in &f.rels {
        if r.len() != f.gens {
            return Err(Error::InvalidModule(format!(
                "relation of length {} for {} generators",
                r.len(),
                f.gens
            )));
        }
        cols.push(r.iter().map(|&x| BigInt::from(x)).collect());
    }
    Ok(Presentation::new(
        f.gens,
        if cols.is_empty() {
            IntMatrix::zeros(f.gens, 0)
        } else {
            IntMatrix::from_columns(f.gens, &cols)
        },
    ))
}

fn matrix_from(rows: &[Vec<i64>], r: usize, c: usize, what: &str) -> Result<IntMatrix> {
    if rows.is_empty() {
        return Ok(IntMatrix::zeros(r, c));
    }
    if rows.len() != r || rows.iter().any(|x| x.len() != c) {
        return Err(Error::InvalidModule(format!(
            "{what}: expected a {r}x{c} matrix"
        )));
    }
    Ok(IntMatrix::from_rows(rows, c))
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::InvalidModule("entry does not fit in 64 bits".into()))
}

fn rows_of(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(to_i64).collect())
        .collect()
}

impl GradedModule {
    pub fn from_file(f: &ModuleFile, t: &HomTable) -> Result<GradedModule> {
        let mut m = GradedModule::zero(t, f.variance);
        m.space = f.space.clone();
        for (name, e) in &f.entries {
            let k = t.object(name)?;
            m.entries[k] = GradedGroup::new(part_from(&e.even)?, part_from(&e.odd)?);
        }
        for g in 0..t.quiver.arrows.len() {
            let (a, b) = m.action_ends(t, g);
            m.actions[g] =
                ActionMats::zero(&m.entries[a], &m.entries[b], t.quiver.arrows[g].parity);
        }
        for (name, act) in &f.actions {
            let g = t.quiver.arrow(name)?;
            let (a, b) = m.action_ends(t, g);
            let deg = t.quiver.arrows[g].parity;
            let (src, dst) = (&m.entries[a], &m.entries[b]);
            let m0 = matrix_from(
                &act.even_part,
                dst.part(deg).generators,
                src.even.generators,
                name,
            )?;
            let m1 = matrix_from(
                &act.odd_part,
                dst.part(deg.flip()).generators,
                src.odd.generators,
                name,
            )?;
            m.actions[g] = ActionMats {
                degree: deg,
                mats: [m0, m1],
            };
        }
        Ok(m)
    }

    pub fn to_file(&self, t: &HomTable) -> Result<ModuleFile> {
        let mut entries = BTreeMap::new();
        for (k, e) in self.entries.iter().enumerate() {
            let part = |p: &Presentation| -> Result<PartFile> {
                let rels = rows_of(&p.relations.transpose())?;
                Ok(PartFile {
                    gens: p.generators,
                    rels,
                })
            };
            if e.even.generators + e.odd.generators > 0 {
                entries.insert(
                    t.objects()[k].clone(),
                    EntryFile {
                        even: part(&e.even)?,
                        odd: part(&e.odd)?,
                    },
                );
            }
        }
        let mut actions = BTreeMap::new();
        for (g, a) in self.actions.iter().enumerate() {
            if a.mats.iter().any(|m| !m.is_zero()) {
                actions.insert(
                    t.quiver.arrows[g].name.clone(),
                    ActionFile {
                        even_part: rows_of(&a.mats[0])?,
                        odd_part: rows_of(&a.mats[1])?,
                    },
                );
            }
        }
        Ok(ModuleFile {
            space: self.space.clone(),
            variance: self.variance,
            entries,
            actions,
        })
    }

    pub fn load(path: &Path, t: &HomTable) -> Result<GradedModule> {
        let f: ModuleFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        GradedModule::from_file(&f, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntcat::NtCategory;

    #[test]
    fn free_modules_are_valid() {
        let cat = NtCategory::builtin("Z2").unwrap();
        let t = &cat.table;
        for y in 0..t.len() {
            for side in [Variance::Left, Variance::Right] {
                for sh in Parity::both() {
                    let m = free_module(t, y, side, sh).unwrap();
                    assert!(validate(&m, t, &cat.presentation.relations).is_valid());
                }
            }
            // the Yoneda unit lies in Q_Y(Y), in even degree
            let q = free_module(t, y, Variance::Right, Parity::Even).unwrap();
            assert!(q.entries[y].even.generators >= 1);
        }
    }

    #[test]
    fn free_module_semisimple_part() {
        let cat = NtCategory::builtin("Z2").unwrap();
        let t = &cat.table;
        for y in 0..t.len() {
            let p = free_module(t, y, Variance::Left, Parity::Even).unwrap();
            let ss = m_ss(&p, t);
            for (w, g) in ss.iter().enumerate() {
                assert_eq!(g.even.rank, usize::from(w == y));
                assert!(g.odd.is_zero());
            }
        }
    }

    #[test]
    fn flipped_relation_is_reported() {
        let cat = NtCategory::builtin("Z2").unwrap();
        let t = &cat.table;
        let full = cat.object_of(cat.space.full()).unwrap();
        let mut m = free_module(t, full, Variance::Right, Parity::Even).unwrap();
        assert!(validate(&m, t, &cat.presentation.relations).is_valid());
        // negate one inclusion that takes part in a commuting square
        let g = t
            .quiver
            .arrows
            .iter()
            .position(|a| a.name.starts_with("i_") && a.dst == full)
            .unwrap();
        m.actions[g] = ActionMats {
            degree: m.actions[g].degree,
            mats: [-&m.actions[g].mats[0], -&m.actions[g].mats[1]],
        };
        let rep = validate(&m, t, &cat.presentation.relations);
        assert!(!rep.is_valid());
    }

    #[test]
    fn json_roundtrip() {
        let cat = NtCategory::builtin("Z2").unwrap();
        let t = &cat.table;
        let m = free_module(t, 0, Variance::Left, Parity::Odd)
            .unwrap()
            .tensor_mod_k(3)
            .unwrap();
        let f = m.to_file(t).unwrap();
        let back = GradedModule::from_file(
            &serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap(),
            t,
        )
        .unwrap();
        assert_eq!(
            back.entries
                .iter()
                .map(|e| e.normal_form())
                .collect::<Vec<_>>(),
            m.entries
                .iter()
                .map(|e| e.normal_form())
                .collect::<Vec<_>>()
        );
        assert_eq!(back.actions, m.actions);
    }

    #[test]
    fn cokernels_of_identity_and_zero() {
        let cat = NtCategory::builtin("Z1").unwrap();
        let t = &cat.table;
        let s = [Summand::new(0, Parity::Even)];
        let id = coker_module(
            t,
            Variance::Left,
            &s,
            &s,
            &vec![vec![t.identity(0).clone()]],
        )
        .unwrap();
        assert!(id.entries.iter().all(|e| e.normal_form().is_zero()));
        let z = coker_module(t, Variance::Left, &s, &s, &vec![vec![Vec::new()]]).unwrap();
        let p = free_module(t, 0, Variance::Left, Parity::Even).unwrap();
        let nf = |m: &GradedModule| {
            m.entries
                .iter()
                .map(|e| e.normal_form())
                .collect::<Vec<_>>()
        };
        assert_eq!(nf(&z), nf(&p));
    }
}
