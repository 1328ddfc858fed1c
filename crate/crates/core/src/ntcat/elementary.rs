//! Elementary transformations of a finite space and the naturality
//! relations between them.
//!
//! An elementary map is one of
//! - `i`: `U -> Y` for `U` open in `Y`,
//! - `r`: `Y -> C` for `C` closed in `Y`,
//! - `d`: `C -> U` (odd) for disjoint `U, C` whose union `W` is locally
//!   closed with `U` open in `W`,
//!
//! all between connected sets. Maps between disconnected sets are matrices
//! over connected components. The relations used are functoriality of `i`
//! and `r`, the base change `r o i = sum i o r` over the components of
//! `U ∩ C`, and naturality of `d` under open restriction, closed restriction
//! and change of splitting; the latter includes the vanishing composites of
//! the six-term sequences.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;

use super::quiver::{ArrowKind, CatPresentation, GradedQuiver, PathRelation};
use crate::error::{Error, Result};
use crate::finspace::{FiniteSpace, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemMap {
    pub kind: ArrowKind,
    pub src: PointSet,
    pub dst: PointSet,
}

impl ElemMap {
    pub fn new(kind: ArrowKind, src: PointSet, dst: PointSet) -> Self {
        ElemMap { kind, src, dst }
    }

    pub fn is_valid(&self, x: &FiniteSpace) -> bool {
        if !x.is_connected(self.src) || !x.is_connected(self.dst) {
            return false;
        }
        match self.kind {
            ArrowKind::I => self.src != self.dst && x.is_relatively_open(self.src, self.dst),
            ArrowKind::R => self.src != self.dst && x.is_relatively_closed(self.dst, self.src),
            ArrowKind::Delta => {
                let w = self.src.union(self.dst);
                self.src.inter(self.dst).is_empty()
                    && x.is_locally_closed(w)
                    && x.is_connected(w)
                    && x.is_relatively_open(self.dst, w)
            }
        }
    }

    pub fn name(&self, x: &FiniteSpace) -> String {
        format!(
            "{}_{}^{}",
            self.kind.letter(),
            x.render(self.src),
            x.render(self.dst)
        )
    }
}

/// Formal combination of words; words list maps in traversal order and the
/// empty word is an identity.
pub type Combo = BTreeMap<Vec<ElemMap>, i64>;

fn add_into(acc: &mut Combo, word: Vec<ElemMap>, c: i64) {
    let e = acc.entry(word).or_insert(0);
    *e += c;
    if *e == 0 {
        acc.retain(|_, v| *v != 0);
    }
}

/// A map between two locally closed sets, as a matrix over their components.
#[derive(Clone, Debug)]
pub struct MatMap {
    pub src: Vec<PointSet>,
    pub dst: Vec<PointSet>,
    pub entries: BTreeMap<(usize, usize), Combo>,
}

impl MatMap {
    fn zero(x: &FiniteSpace, src: PointSet, dst: PointSet) -> Self {
        MatMap {
            src: x.components(src),
            dst: x.components(dst),
            entries: BTreeMap::new(),
        }
    }

    fn set(&mut self, a: usize, b: usize, word: Vec<ElemMap>) {
        let mut c = Combo::new();
        c.insert(word, 1);
        self.entries.insert((a, b), c);
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &MatMap) -> MatMap {
        let mut entries: BTreeMap<(usize, usize), Combo> = BTreeMap::new();
        for (&(a, b), f) in &self.entries {
            for (&(b2, c), g) in &other.entries {
                if b != b2 {
                    continue;
                }
                let acc = entries.entry((a, c)).or_default();
                for (w1, c1) in f {
                    for (w2, c2) in g {
                        let mut w = w1.clone();
                        w.extend_from_slice(w2);
                        add_into(acc, w, c1 * c2);
                    }
                }
            }
        }
        entries.retain(|_, v| !v.is_empty());
        MatMap {
            src: self.src.clone(),
            dst: other.dst.clone(),
            entries,
        }
    }

    /// Entrywise `self - other` as equations `(src comp, dst comp, combo)`.
    fn difference(&self, other: &MatMap) -> Vec<(PointSet, PointSet, Combo)> {
        let mut keys: BTreeSet<(usize, usize)> = self.entries.keys().copied().collect();
        keys.extend(other.entries.keys().copied());
        let mut out = Vec::new();
        for k in keys {
            let mut acc = self.entries.get(&k).cloned().unwrap_or_default();
            if let Some(g) = other.entries.get(&k) {
                for (w, c) in g {
                    add_into(&mut acc, w.clone(), -c);
                }
            }
            if !acc.is_empty() {
                out.push((self.src[k.0], self.dst[k.1], acc));
            }
        }
        out
    }
}

/// `i: u -> y`, `u` open in `y`.
pub fn incl(x: &FiniteSpace, u: PointSet, y: PointSet) -> MatMap {
    let mut m = MatMap::zero(x, u, y);
    for a in 0..m.src.len() {
        if let Some(b) = m.dst.iter().position(|yb| m.src[a].is_subset(*yb)) {
            let word = if m.src[a] == m.dst[b] {
                vec![]
            } else {
                vec![ElemMap::new(ArrowKind::I, m.src[a], m.dst[b])]
            };
            m.set(a, b, word);
        }
    }
    m
}

/// `r: y -> c`, `c` closed in `y`.
pub fn restr(x: &FiniteSpace, y: PointSet, c: PointSet) -> MatMap {
    let mut m = MatMap::zero(x, y, c);
    for k in 0..m.dst.len() {
        if let Some(b) = m.src.iter().position(|yb| m.dst[k].is_subset(*yb)) {
            let word = if m.src[b] == m.dst[k] {
                vec![]
            } else {
                vec![ElemMap::new(ArrowKind::R, m.src[b], m.dst[k])]
            };
            m.set(b, k, word);
        }
    }
    m
}

/// `d: c -> u` for the splitting `u ∪ c`.
pub fn bound(x: &FiniteSpace, c: PointSet, u: PointSet) -> MatMap {
    let mut m = MatMap::zero(x, c, u);
    for k in 0..m.src.len() {
        for a in 0..m.dst.len() {
            if x.is_connected(m.src[k].union(m.dst[a])) {
                m.set(
                    k,
                    a,
                    vec![ElemMap::new(ArrowKind::Delta, m.src[k], m.dst[a])],
                );
            }
        }
    }
    m
}

/// Relatively open subsets of `y`, including the empty set and `y`.
fn rel_opens(x: &FiniteSpace, y: PointSet) -> Vec<PointSet> {
    x.subspace_opens(y).into_iter().collect()
}

/// All naturality equations, each `sum c * word = 0` between two connected sets.
pub fn elementary_equations(x: &FiniteSpace) -> Vec<(PointSet, PointSet, Combo)> {
    let mut eqs: Vec<(PointSet, PointSet, Combo)> = Vec::new();
    let lc: Vec<PointSet> = x
        .lc_subsets(false)
        .into_iter()
        .map(|l| l.value)
        .filter(|s| !s.is_empty())
        .collect();
    let conn = x.lc_star();
    for &y in &conn {
        let opens = rel_opens(x, y);
        let proper: Vec<PointSet> = opens
            .iter()
            .copied()
            .filter(|u| !u.is_empty() && *u != y)
            .collect();
        let closed: Vec<PointSet> = proper.iter().map(|u| y.minus(*u)).collect();
        for &u in &proper {
            for &v in &proper {
                if u != v && u.is_subset(v) {
                    eqs.extend(
                        incl(x, u, v)
                            .then(&incl(x, v, y))
                            .difference(&incl(x, u, y)),
                    );
                }
            }
        }
        for &c in &closed {
            for &d in &closed {
                if c != d && d.is_subset(c) {
                    eqs.extend(
                        restr(x, y, c)
                            .then(&restr(x, c, d))
                            .difference(&restr(x, y, d)),
                    );
                }
            }
        }
        for &u in &proper {
            for &c in &closed {
                let k = u.inter(c);
                let lhs = incl(x, u, y).then(&restr(x, y, c));
                let rhs = if k.is_empty() {
                    MatMap::zero(x, u, c)
                } else {
                    restr(x, u, k).then(&incl(x, k, c))
                };
                eqs.extend(lhs.difference(&rhs));
            }
        }
    }
    for &w in &lc {
        let opens = rel_opens(x, w);
        for &u in opens.iter().filter(|u| !u.is_empty() && **u != w) {
            let c = w.minus(u);
            let d = bound(x, c, u);
            for &wo in opens.iter().filter(|o| **o != w) {
                let (u1, c1) = (u.inter(wo), c.inter(wo));
                if c1.is_empty() {
                    continue;
                }
                let lhs = incl(x, c1, c).then(&d);
                let rhs = if u1.is_empty() {
                    MatMap::zero(x, c1, u)
                } else {
                    bound(x, c1, u1).then(&incl(x, u1, u))
                };
                eqs.extend(lhs.difference(&rhs));
            }
            for f in opens.iter().filter(|o| !o.is_empty()).map(|o| w.minus(*o)) {
                let (u2, c2) = (u.inter(f), c.inter(f));
                if u2.is_empty() {
                    continue;
                }
                let lhs = d.then(&restr(x, u, u2));
                let rhs = if c2.is_empty() {
                    MatMap::zero(x, c, u2)
                } else {
                    restr(x, c, c2).then(&bound(x, c2, u2))
                };
                eqs.extend(lhs.difference(&rhs));
            }
        }
        // change of splitting, including the vanishing six-term composites
        for &u1 in &opens {
            for &u2 in &opens {
                if u1 == u2 || !u1.is_subset(u2) {
                    continue;
                }
                let (c1, c2) = (w.minus(u1), w.minus(u2));
                let lhs = if u1.is_empty() {
                    MatMap::zero(x, c1, u2)
                } else {
                    bound(x, c1, u1).then(&incl(x, u1, u2))
                };
                let rhs = if c2.is_empty() {
                    MatMap::zero(x, c1, u2)
                } else {
                    restr(x, c1, c2).then(&bound(x, c2, u2))
                };
                eqs.extend(lhs.difference(&rhs));
            }
        }
    }
    let mut seen = BTreeSet::new();
    eqs.retain(|(s, d, c)| seen.insert((*s, *d, normalize(c))));
    eqs
}

fn normalize(c: &Combo) -> Combo {
    let sign = c.values().next().map(|v| v.signum()).unwrap_or(1);
    c.iter().map(|(w, v)| (w.clone(), v * sign)).collect()
}

/// Every elementary map of `x`.
pub fn elementary_maps(x: &FiniteSpace) -> Vec<ElemMap> {
    let conn = x.lc_star();
    let mut out = Vec::new();
    for &a in &conn {
        for &b in &conn {
            for kind in [ArrowKind::I, ArrowKind::R, ArrowKind::Delta] {
                let e = ElemMap::new(kind, a, b);
                if e.is_valid(x) {
                    out.push(e);
                }
            }
        }
    }
    out
}

/// A path combination in a quiver, keyed by arrow-index words.
pub type PathCombo = BTreeMap<Vec<usize>, i64>;

/// Expresses every elementary map through the given generators, which must
/// themselves be elementary maps. Fails if some map is not reachable.
pub fn express_all(
    x: &FiniteSpace,
    gens: &[ElemMap],
    eqs: &[(PointSet, PointSet, Combo)],
) -> Result<HashMap<ElemMap, PathCombo>> {
    let mut expr: HashMap<ElemMap, PathCombo> = HashMap::new();
    for (k, g) in gens.iter().enumerate() {
        if !g.is_valid(x) {
            return Err(Error::InvalidRelation(format!(
                "{} is not an elementary map",
                g.name(x)
            )));
        }
        expr.insert(*g, PathCombo::from([(vec![k], 1)]));
    }
    // e = -c * sum(other terms) whenever e occurs alone with a unit coefficient
    let mut expansions: Vec<(ElemMap, Vec<(Vec<ElemMap>, i64)>)> = Vec::new();
    for (_, _, combo) in eqs {
        for (w, c) in combo {
            if w.len() != 1 || c.abs() != 1 {
                continue;
            }
            let e = w[0];
            let rest: Vec<(Vec<ElemMap>, i64)> = combo
                .iter()
                .filter(|(v, _)| *v != w)
                .map(|(v, d)| (v.clone(), -c * d))
                .collect();
            if rest.iter().any(|(v, _)| v.contains(&e)) {
                continue;
            }
            expansions.push((e, rest));
        }
    }
    expansions
        .sort_by_key(|(_, rest)| rest.iter().map(|(v, _)| v.len()).sum::<usize>() + rest.len());
    let targets = elementary_maps(x);
    loop {
        let mut progress = false;
        for (e, rest) in &expansions {
            if expr.contains_key(e) {
                continue;
            }
            if rest
                .iter()
                .all(|(v, _)| v.iter().all(|l| expr.contains_key(l)))
            {
                let mut acc = PathCombo::new();
                for (v, c) in rest {
                    for (p, d) in substitute(v, &expr) {
                        let slot = acc.entry(p).or_insert(0);
                        *slot += c * d;
                    }
                }
                acc.retain(|_, v| *v != 0);
                expr.insert(*e, acc);
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    if let Some(missing) = targets.iter().find(|e| !expr.contains_key(e)) {
        return Err(Error::InvalidRelation(format!(
            "{} is not expressible through the given generators",
            missing.name(x)
        )));
    }
    Ok(expr)
}

fn substitute(word: &[ElemMap], expr: &HashMap<ElemMap, PathCombo>) -> PathCombo {
    let mut acc = PathCombo::from([(Vec::new(), 1)]);
    for l in word {
        let mut next = PathCombo::new();
        for (p, c) in &acc {
            for (q, d) in &expr[l] {
                let mut w = p.clone();
                w.extend_from_slice(q);
                *next.entry(w).or_insert(0) += c * d;
            }
        }
        next.retain(|_, v| *v != 0);
        acc = next;
    }
    acc
}

/// Rewrites all naturality equations in terms of the generators.
pub fn derived_relations(
    x: &FiniteSpace,
    quiver: &GradedQuiver,
    expr: &HashMap<ElemMap, PathCombo>,
    eqs: &[(PointSet, PointSet, Combo)],
) -> Result<Vec<PathRelation>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (s, d, combo) in eqs {
        let mut acc = PathCombo::new();
        for (w, c) in combo {
            for (p, e) in substitute(w, expr) {
                *acc.entry(p).or_insert(0) += c * e;
            }
        }
        acc.retain(|_, v| *v != 0);
        if acc.is_empty() {
            continue;
        }
        let sign = acc.values().next().unwrap().signum();
        let key: Vec<(Vec<usize>, i64)> = acc.iter().map(|(p, c)| (p.clone(), c * sign)).collect();
        if !seen.insert(key.clone()) {
            continue;
        }
        let src = quiver.object(&x.render(*s))?;
        let dst = quiver.object(&x.render(*d))?;
        let terms = key.into_iter().map(|(p, c)| (BigInt::from(c), p)).collect();
        out.push(PathRelation::new(quiver, src, dst, terms)?);
    }
    Ok(out)
}

/// Quiver on LC(X)* with the given elementary maps as arrows.
pub fn quiver_for(x: &FiniteSpace, gens: &[ElemMap]) -> Result<GradedQuiver> {
    let objects: Vec<String> = x.lc_star().into_iter().map(|s| x.render(s)).collect();
    let mut q = GradedQuiver::new(objects)?;
    for g in gens {
        q.add_arrow(&x.render(g.src), &x.render(g.dst), &g.name(x), g.kind)?;
    }
    Ok(q)
}

/// Presentation whose relations are all naturality equations rewritten
/// through `gens`.
pub fn derived_presentation(
    x: &FiniteSpace,
    name: &str,
    gens: &[ElemMap],
) -> Result<CatPresentation> {
    let q = quiver_for(x, gens)?;
    let eqs = elementary_equations(x);
    let expr = express_all(x, gens, &eqs)?;
    let rels = derived_relations(x, &q, &expr, &eqs)?;
    let mut p = CatPresentation::new(name, q);
    p.relations = rels;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(x: &FiniteSpace, s: &str) -> PointSet {
        x.parse_set(s).unwrap()
    }

    #[test]
    fn elementary_validity() {
        let c2 = FiniteSpace::pseudocircle();
        assert!(ElemMap::new(ArrowKind::I, set(&c2, "3"), set(&c2, "134")).is_valid(&c2));
        assert!(!ElemMap::new(ArrowKind::I, set(&c2, "1"), set(&c2, "13")).is_valid(&c2));
        assert!(ElemMap::new(ArrowKind::R, set(&c2, "134"), set(&c2, "13")).is_valid(&c2));
        assert!(ElemMap::new(ArrowKind::Delta, set(&c2, "1"), set(&c2, "3")).is_valid(&c2));
        assert!(!ElemMap::new(ArrowKind::Delta, set(&c2, "3"), set(&c2, "1")).is_valid(&c2));
    }

    #[test]
    fn boundary_matrix_components() {
        let z3 = FiniteSpace::z_space(3);
        let d = bound(&z3, set(&z3, "123"), set(&z3, "4"));
        assert_eq!(d.src.len(), 3);
        assert_eq!(d.entries.len(), 3);
    }

    #[test]
    fn six_term_composites_are_relations() {
        let z3 = FiniteSpace::z_space(3);
        let eqs = elementary_equations(&z3);
        let d = ElemMap::new(ArrowKind::Delta, set(&z3, "1"), set(&z3, "4"));
        let i = ElemMap::new(ArrowKind::I, set(&z3, "4"), set(&z3, "14"));
        assert!(eqs
            .iter()
            .any(|(_, _, c)| c.len() == 1 && c.contains_key(&vec![d, i])));
    }
}
