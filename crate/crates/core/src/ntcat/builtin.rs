//! Built-in categories for the spaces `Z1`..`Z4`, `S` and `C2`.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;

use super::closure::{hom_closure, HomTable};
use super::elementary::{
    bound, derived_presentation, elementary_equations, express_all, incl, quiver_for, restr,
    ElemMap, MatMap, PathCombo,
};
use super::ideal::{ideal_checks, RingIdealData};
use super::quiver::{ArrowKind, CatPresentation};
use crate::error::{Error, Result};
use crate::finspace::{FiniteSpace, PointSet};
use crate::zexact::sparse::{axpy, SparseRow};

/// Generating arrows of `Z_m`: the cube of inclusions above the open point,
/// restrictions from the whole space to each closed point, and boundary
/// maps from each closed point to the open point.
pub fn z_generators(m: usize) -> (FiniteSpace, Vec<ElemMap>) {
    let x = FiniteSpace::z_space(m);
    let top = PointSet::singleton(m);
    let full = x.full();
    let mut gens = Vec::new();
    for s in 0..(1u64 << m) {
        let from = PointSet(s).union(top);
        for j in 0..m {
            if !from.contains(j) {
                gens.push(ElemMap::new(
                    ArrowKind::I,
                    from,
                    from.union(PointSet::singleton(j)),
                ));
            }
        }
    }
    for j in 0..m {
        gens.push(ElemMap::new(ArrowKind::R, full, PointSet::singleton(j)));
    }
    for j in 0..m {
        gens.push(ElemMap::new(ArrowKind::Delta, PointSet::singleton(j), top));
    }
    (x, gens)
}

fn parse_gens(x: &FiniteSpace, list: &[(&str, &str, &str)]) -> Vec<ElemMap> {
    list.iter()
        .map(|(k, s, d)| {
            let kind = match *k {
                "i" => ArrowKind::I,
                "r" => ArrowKind::R,
                _ => ArrowKind::Delta,
            };
            ElemMap::new(kind, x.parse_set(s).unwrap(), x.parse_set(d).unwrap())
        })
        .collect()
}

pub fn s_generators() -> (FiniteSpace, Vec<ElemMap>) {
    let x = FiniteSpace::s_space();
    let gens = parse_gens(
        &x,
        &[
            ("r", "123", "12"),
            ("d", "123", "4"),
            ("r", "123", "13"),
            ("d", "12", "34"),
            ("r", "12", "1"),
            ("i", "4", "34"),
            ("i", "4", "24"),
            ("r", "13", "1"),
            ("d", "13", "24"),
            ("i", "34", "234"),
            ("d", "1", "234"),
            ("i", "24", "234"),
            ("r", "234", "2"),
            ("i", "234", "1234"),
            ("r", "234", "3"),
            ("i", "2", "123"),
            ("i", "3", "123"),
            ("r", "1234", "123"),
        ],
    );
    (x, gens)
}

pub fn c2_generators() -> (FiniteSpace, Vec<ElemMap>) {
    let x = FiniteSpace::pseudocircle();
    let gens = parse_gens(
        &x,
        &[
            ("i", "3", "134"),
            ("i", "3", "234"),
            ("i", "4", "234"),
            ("i", "4", "134"),
            ("r", "134", "13"),
            ("r", "134", "14"),
            ("i", "134", "1234"),
            ("r", "234", "23"),
            ("r", "234", "24"),
            ("i", "234", "1234"),
            ("i", "13", "123"),
            ("i", "14", "124"),
            ("i", "23", "123"),
            ("i", "24", "124"),
            ("r", "1234", "123"),
            ("r", "1234", "124"),
            ("r", "123", "1"),
            ("r", "123", "2"),
            ("r", "124", "1"),
            ("r", "124", "2"),
            ("d", "1", "3"),
            ("d", "1", "4"),
            ("d", "2", "3"),
            ("d", "2", "4"),
        ],
    );
    (x, gens)
}

/// The published relation pattern for `Z_m`: a commuting cube, the
/// vanishing composites `(full \ j) -> full -> j` and `j -> m+1 -> j,m+1`,
/// and the vanishing sum of the maps `full -> j -> m+1`.
pub fn z_presentation(m: usize) -> Result<CatPresentation> {
    let (x, gens) = z_generators(m);
    let q = quiver_for(&x, &gens)?;
    let mut p = CatPresentation::new(&format!("Z{m}"), q);
    let top = PointSet::singleton(m);
    let full = x.full();
    let name = |kind, a: PointSet, b: PointSet| ElemMap::new(kind, a, b).name(&x);
    for s in 0..(1u64 << m) {
        let from = PointSet(s).union(top);
        for j in 0..m {
            for k in j + 1..m {
                if from.contains(j) || from.contains(k) {
                    continue;
                }
                let (sj, sk) = (
                    from.union(PointSet::singleton(j)),
                    from.union(PointSet::singleton(k)),
                );
                let sjk = sj.union(sk);
                let a = [name(ArrowKind::I, from, sj), name(ArrowKind::I, sj, sjk)];
                let b = [name(ArrowKind::I, from, sk), name(ArrowKind::I, sk, sjk)];
                p.add_relation(&[
                    (1, &[a[0].as_str(), a[1].as_str()]),
                    (-1, &[b[0].as_str(), b[1].as_str()]),
                ])?;
            }
        }
    }
    for j in 0..m {
        let pj = PointSet::singleton(j);
        let a = name(ArrowKind::I, full.minus(pj), full);
        let b = name(ArrowKind::R, full, pj);
        p.add_relation(&[(1, &[a.as_str(), b.as_str()])])?;
        let d = name(ArrowKind::Delta, pj, top);
        let i = name(ArrowKind::I, top, top.union(pj));
        p.add_relation(&[(1, &[d.as_str(), i.as_str()])])?;
    }
    let sum: Vec<[String; 2]> = (0..m)
        .map(|j| {
            let pj = PointSet::singleton(j);
            [
                name(ArrowKind::R, full, pj),
                name(ArrowKind::Delta, pj, top),
            ]
        })
        .collect();
    let terms: Vec<(i64, [&str; 2])> = sum
        .iter()
        .map(|[a, b]| (1, [a.as_str(), b.as_str()]))
        .collect();
    let terms: Vec<(i64, &[&str])> = terms.iter().map(|(c, w)| (*c, &w[..])).collect();
    p.add_relation(&terms)?;
    Ok(p)
}

pub const BUILTIN_CATEGORIES: [&str; 6] = ["Z1", "Z2", "Z3", "Z4", "S", "C2"];

fn generators(name: &str) -> Result<(FiniteSpace, Vec<ElemMap>)> {
    match name {
        "Z1" => Ok(z_generators(1)),
        "Z2" => Ok(z_generators(2)),
        "Z3" => Ok(z_generators(3)),
        "Z4" => Ok(z_generators(4)),
        "S" => Ok(s_generators()),
        "C2" => Ok(c2_generators()),
        "pt" => Ok((FiniteSpace::point(), Vec::new())),
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// Presentation of a built-in category. For `Z_m` this is the published
/// pattern; for `S` and `C2` the relations are rewritten from the
/// naturality equations and flagged as reconstructed.
pub fn builtin_presentation(name: &str) -> Result<CatPresentation> {
    match name {
        "Z1" => z_presentation(1),
        "Z2" => z_presentation(2),
        "Z3" => z_presentation(3),
        "Z4" => z_presentation(4),
        "S" | "C2" => {
            let (x, gens) = generators(name)?;
            let mut p = derived_presentation(&x, name, &gens)?;
            p.reconstructed = true;
            Ok(p)
        }
        "pt" => {
            let (x, gens) = generators(name)?;
            derived_presentation(&x, name, &gens)
        }
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// Closure length used for the built-in tables.
pub fn builtin_max_len(name: &str) -> usize {
    match name {
        "Z1" => 4,
        "Z2" => 5,
        "Z3" => 7,
        "Z4" => 8,
        "S" => 7,
        _ => 8,
    }
}

/// A category together with its space, table and the expressions of all
/// elementary maps through the generators.
#[derive(Debug)]
pub struct NtCategory {
    pub space: FiniteSpace,
    pub presentation: CatPresentation,
    pub table: HomTable,
    pub gens: Vec<ElemMap>,
    expr: HashMap<ElemMap, PathCombo>,
    objects: HashMap<PointSet, usize>,
    ideal: OnceLock<RingIdealData>,
}

impl NtCategory {
    pub fn new(
        space: FiniteSpace,
        gens: Vec<ElemMap>,
        presentation: CatPresentation,
        max_len: usize,
    ) -> Result<Self> {
        let eqs = elementary_equations(&space);
        let expr = express_all(&space, &gens, &eqs)?;
        let table = hom_closure(&presentation, max_len)?;
        let objects = space
            .lc_star()
            .into_iter()
            .map(|s| (s, table.object(&space.render(s)).expect("object of LC*")))
            .collect();
        Ok(NtCategory {
            space,
            presentation,
            table,
            gens,
            expr,
            objects,
            ideal: OnceLock::new(),
        })
    }

    /// Built-in category, computed once per process.
    pub fn builtin(name: &str) -> Result<&'static NtCategory> {
        static CACHE: OnceLock<std::sync::Mutex<HashMap<String, &'static NtCategory>>> =
            OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.lock().unwrap().get(name) {
            return Ok(c);
        }
        let (x, gens) = generators(name)?;
        let p = builtin_presentation(name)?;
        let cat: &'static NtCategory = Box::leak(Box::new(NtCategory::new(
            x,
            gens,
            p,
            builtin_max_len(name),
        )?));
        cache.lock().unwrap().insert(name.to_string(), cat);
        Ok(cat)
    }

    pub fn name(&self) -> &str {
        &self.presentation.name
    }

    /// Nil ideal data of the table, computed on first use.
    pub fn ideal(&self) -> &RingIdealData {
        self.ideal.get_or_init(|| ideal_checks(&self.table))
    }

    pub fn reconstructed(&self) -> bool {
        self.presentation.reconstructed
    }

    pub fn object_of(&self, s: PointSet) -> Result<usize> {
        self.objects
            .get(&s)
            .copied()
            .ok_or_else(|| Error::UnknownObject(self.space.render(s)))
    }

    pub fn object_set(&self, k: usize) -> PointSet {
        self.space
            .parse_set(&self.table.objects()[k])
            .expect("object label")
    }

    /// Coordinates of an elementary map in the table.
    pub fn element(&self, e: &ElemMap) -> Result<SparseRow> {
        let combo = self
            .expr
            .get(e)
            .ok_or_else(|| Error::UnknownArrow(e.name(&self.space)))?;
        let a = self.object_of(e.src)?;
        let mut acc = Vec::new();
        for (path, c) in combo {
            acc = axpy(&acc, &BigInt::from(*c), &self.table.eval_path(a, path));
        }
        Ok(acc)
    }

    fn matrix(&self, m: &MatMap) -> Result<Vec<MapEntry>> {
        let mut out = Vec::new();
        for (&(a, b), combo) in &m.entries {
            let (s, d) = (self.object_of(m.src[a])?, self.object_of(m.dst[b])?);
            let mut acc = Vec::new();
            for (word, c) in combo {
                let mut v = self.table.identity(s).clone();
                let mut at = s;
                for e in word {
                    let next = self.object_of(e.dst)?;
                    v = self.table.compose(s, at, next, &v, &self.element(e)?);
                    at = next;
                }
                acc = axpy(&acc, &BigInt::from(*c), &v);
            }
            out.push(MapEntry {
                src_comp: a,
                dst_comp: b,
                src: s,
                dst: d,
                element: acc,
            });
        }
        Ok(out)
    }

    /// Components of a locally closed set, as objects.
    /// Composite of elementary maps given by labels, in traversal order.
    pub fn word(&self, steps: &[(ArrowKind, &str, &str)]) -> Result<SparseRow> {
        let parse = |l: &str| {
            self.space
                .parse_set(l)
                .and_then(|s| self.object_of(s).map(|o| (s, o)))
        };
        let (_, a) = parse(
            steps
                .first()
                .ok_or_else(|| Error::Parse("empty word".into()))?
                .1,
        )?;
        let mut v = self.table.identity(a).clone();
        let mut at = a;
        for &(kind, s, d) in steps {
            let ((ss, so), (ds, d_obj)) = (parse(s)?, parse(d)?);
            if so != at {
                return Err(Error::Parse(format!("word does not compose at {s}")));
            }
            let e = self.element(&ElemMap::new(kind, ss, ds))?;
            v = self.table.compose(a, at, d_obj, &v, &e);
            at = d_obj;
        }
        Ok(v)
    }

    pub fn components(&self, s: PointSet) -> Result<Vec<usize>> {
        self.space
            .components(s)
            .into_iter()
            .map(|c| self.object_of(c))
            .collect()
    }

    /// `i: u -> y` between arbitrary locally closed sets, entrywise.
    pub fn incl(&self, u: PointSet, y: PointSet) -> Result<Vec<MapEntry>> {
        self.matrix(&incl(&self.space, u, y))
    }

    pub fn restr(&self, y: PointSet, c: PointSet) -> Result<Vec<MapEntry>> {
        self.matrix(&restr(&self.space, y, c))
    }

    pub fn bound(&self, c: PointSet, u: PointSet) -> Result<Vec<MapEntry>> {
        self.matrix(&bound(&self.space, c, u))
    }
}

/// One component of a map between locally closed sets.
#[derive(Clone, Debug)]
pub struct MapEntry {
    pub src_comp: usize,
    pub dst_comp: usize,
    pub src: usize,
    pub dst: usize,
    pub element: SparseRow,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_generator_counts() {
        let (_, g) = z_generators(4);
        // 32 cube edges, 4 restrictions, 4 boundaries
        assert_eq!(g.len(), 40);
        let p = z_presentation(4).unwrap();
        assert_eq!(p.quiver.len(), 20);
        // 24 squares, 4 + 4 vanishing composites, one sum
        assert_eq!(p.relations.len(), 24 + 8 + 1);
    }
}
