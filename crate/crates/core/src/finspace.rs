//! Finite topological spaces given by their open sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A subset of the points of a finite space, as a bit mask.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct PointSet(pub u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn singleton(i: usize) -> Self {
        PointSet(1 << i)
    }
    pub fn full(n: usize) -> Self {
        PointSet(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
    pub fn union(self, o: PointSet) -> PointSet {
        PointSet(self.0 | o.0)
    }
    pub fn inter(self, o: PointSet) -> PointSet {
        PointSet(self.0 & o.0)
    }
    pub fn minus(self, o: PointSet) -> PointSet {
        PointSet(self.0 & !o.0)
    }
    pub fn is_subset(self, o: PointSet) -> bool {
        self.0 & !o.0 == 0
    }
    pub fn points(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }
    pub fn from_points(pts: impl IntoIterator<Item = usize>) -> Self {
        PointSet(pts.into_iter().fold(0, |acc, i| acc | 1 << i))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSpace {
    name: String,
    labels: Vec<String>,
    opens: BTreeSet<PointSet>,
    /// minimal open neighbourhood of each point
    min_open: Vec<PointSet>,
    t0: bool,
}

/// A locally closed subset together with opens `v ⊆ u` with `value = u \ v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LCSubset {
    pub value: PointSet,
    pub u: PointSet,
    pub v: PointSet,
}

impl LCSubset {
    pub fn validates(&self, x: &FiniteSpace) -> bool {
        x.is_open(self.u)
            && x.is_open(self.v)
            && self.v.is_subset(self.u)
            && self.u.minus(self.v) == self.value
    }
}

/// JSON description of a space.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceFile {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

pub const BUILTIN_SPACES: [&str; 6] = ["Z1", "Z2", "Z3", "Z4", "S", "C2"];

impl FiniteSpace {
    pub fn new(
        name: &str,
        labels: Vec<String>,
        opens: impl IntoIterator<Item = PointSet>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 || n > 63 {
            return Err(Error::NotTopology(format!(
                "unsupported number of points {n}"
            )));
        }
        let uniq: BTreeSet<&String> = labels.iter().collect();
        if uniq.len() != n {
            return Err(Error::NotTopology("duplicate point labels".into()));
        }
        let full = PointSet::full(n);
        let opens: BTreeSet<PointSet> = opens.into_iter().collect();
        if !opens.contains(&PointSet::EMPTY) {
            return Err(Error::NotTopology("the empty set must be open".into()));
        }
        if !opens.contains(&full) {
            return Err(Error::NotTopology("the whole space must be open".into()));
        }
        for o in &opens {
            if !o.is_subset(full) {
                return Err(Error::NotTopology(
                    "open set mentions an unknown point".into(),
                ));
            }
        }
        for a in &opens {
            for b in &opens {
                if !opens.contains(&a.union(*b)) {
                    return Err(Error::NotTopology("not closed under union".into()));
                }
                if !opens.contains(&a.inter(*b)) {
                    return Err(Error::NotTopology("not closed under intersection".into()));
                }
            }
        }
        let min_open: Vec<PointSet> = (0..n)
            .map(|i| {
                opens
                    .iter()
                    .filter(|o| o.contains(i))
                    .fold(full, |acc, o| acc.inter(*o))
            })
            .collect();
        let t0 = (0..n).all(|i| (0..n).all(|j| i == j || min_open[i] != min_open[j]));
        Ok(FiniteSpace {
            name: name.to_string(),
            labels,
            opens,
            min_open,
            t0,
        })
    }

    pub fn from_file(f: &SpaceFile) -> Result<Self> {
        let idx: BTreeMap<&str, usize> = f
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_str(), i))
            .collect();
        let mut opens = Vec::new();
        for o in &f.opens {
            let mut s = PointSet::EMPTY;
            for p in o {
                let i = idx
                    .get(p.as_str())
                    .ok_or_else(|| Error::UnknownObject(p.clone()))?;
                s = s.union(PointSet::singleton(*i));
            }
            opens.push(s);
        }
        Self::new("custom", f.points.clone(), opens)
    }

    pub fn to_file(&self) -> SpaceFile {
        SpaceFile {
            points: self.labels.clone(),
            opens: self
                .opens
                .iter()
                .map(|o| o.points().map(|i| self.labels[i].clone()).collect())
                .collect(),
        }
    }

    fn numbered(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    /// `Z_m`: points `1..=m+1`, open iff empty or containing `m+1`.
    pub fn z_space(m: usize) -> Self {
        let n = m + 1;
        let opens = (0..1u64 << n)
            .map(PointSet)
            .filter(|s| s.is_empty() || s.contains(m));
        Self::new(&format!("Z{m}"), Self::numbered(n), opens).expect("Z_m is a topology")
    }

    fn from_strings(name: &str, n: usize, opens: &[&str]) -> Self {
        let labels = Self::numbered(n);
        let sets = opens.iter().map(|s| {
            PointSet::from_points(s.chars().map(|c| c.to_digit(10).unwrap() as usize - 1))
        });
        Self::new(name, labels, sets).expect("built-in topology")
    }

    /// The four-point space with two unrelated distinguished ideals.
    pub fn s_space() -> Self {
        Self::from_strings("S", 4, &["", "4", "24", "34", "234", "1234"])
    }

    /// The pseudocircle: `1 < 3, 1 < 4, 2 < 3, 2 < 4`.
    pub fn pseudocircle() -> Self {
        Self::from_strings("C2", 4, &["", "3", "4", "34", "134", "234", "1234"])
    }

    pub fn point() -> Self {
        Self::new("pt", vec!["1".into()], [PointSet::EMPTY, PointSet(1)]).unwrap()
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "Z1" => Ok(Self::z_space(1)),
            "Z2" => Ok(Self::z_space(2)),
            "Z3" => Ok(Self::z_space(3)),
            "Z4" => Ok(Self::z_space(4)),
            "S" => Ok(Self::s_space()),
            "C2" => Ok(Self::pseudocircle()),
            "pt" => Ok(Self::point()),
            _ => Err(Error::UnknownBuiltin(name.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn len(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn full(&self) -> PointSet {
        PointSet::full(self.len())
    }
    pub fn opens(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.opens.iter().copied()
    }
    pub fn is_t0(&self) -> bool {
        self.t0
    }
    pub fn is_open(&self, s: PointSet) -> bool {
        self.opens.contains(&s)
    }
    pub fn is_closed(&self, s: PointSet) -> bool {
        self.is_open(self.full().minus(s))
    }
    pub fn min_open(&self, i: usize) -> PointSet {
        self.min_open[i]
    }

    /// Smallest open set containing `s`.
    pub fn open_hull(&self, s: PointSet) -> PointSet {
        s.points()
            .fold(PointSet::EMPTY, |acc, i| acc.union(self.min_open[i]))
    }

    /// Smallest closed set containing `s`.
    pub fn closure(&self, s: PointSet) -> PointSet {
        let n = self.len();
        PointSet::from_points((0..n).filter(|&j| !self.min_open[j].inter(s).is_empty()))
    }

    /// `x ⤳ y`: every open set containing `x` contains `y`.
    pub fn specializes(&self, x: usize, y: usize) -> bool {
        self.min_open[x].contains(y)
    }

    pub fn is_locally_closed(&self, s: PointSet) -> bool {
        let u = self.open_hull(s);
        self.is_open(u.minus(s))
    }

    /// Whether `u` is open in the subspace `y`.
    pub fn is_relatively_open(&self, u: PointSet, y: PointSet) -> bool {
        u.is_subset(y) && self.open_hull(u).inter(y) == u
    }

    pub fn is_relatively_closed(&self, c: PointSet, y: PointSet) -> bool {
        c.is_subset(y) && self.is_relatively_open(y.minus(c), y)
    }

    /// Open sets of the subspace `y`.
    pub fn subspace_opens(&self, y: PointSet) -> BTreeSet<PointSet> {
        self.opens.iter().map(|o| o.inter(y)).collect()
    }

    /// Connected components of the subspace `y`, computed from its topology.
    pub fn components(&self, y: PointSet) -> Vec<PointSet> {
        let opens = self.subspace_opens(y);
        let clopen: Vec<PointSet> = opens
            .iter()
            .copied()
            .filter(|o| opens.contains(&y.minus(*o)))
            .collect();
        let mut comps: BTreeSet<PointSet> = BTreeSet::new();
        for i in y.points() {
            let c = clopen
                .iter()
                .filter(|o| o.contains(i))
                .fold(y, |acc, o| acc.inter(*o));
            comps.insert(c);
        }
        let mut v: Vec<PointSet> = comps.into_iter().collect();
        v.sort_by_key(|c| c.points().next());
        v
    }

    pub fn is_connected(&self, y: PointSet) -> bool {
        !y.is_empty() && self.components(y).len() == 1
    }

    /// Locally closed subsets by brute force over pairs of opens; with
    /// `connected_only`, the nonempty connected ones.
    pub fn lc_subsets(&self, connected_only: bool) -> Vec<LCSubset> {
        let mut seen: BTreeMap<PointSet, LCSubset> = BTreeMap::new();
        for &u in &self.opens {
            for &v in &self.opens {
                if !v.is_subset(u) {
                    continue;
                }
                let y = u.minus(v);
                if connected_only && !self.is_connected(y) {
                    continue;
                }
                seen.entry(y).or_insert(LCSubset { value: y, u, v });
            }
        }
        let mut out: Vec<LCSubset> = seen.into_values().collect();
        out.sort_by(|a, b| self.cmp_sets(a.value, b.value));
        out
    }

    /// Canonical ordering of subsets: by size, then by rendered label.
    pub fn cmp_sets(&self, a: PointSet, b: PointSet) -> std::cmp::Ordering {
        a.len()
            .cmp(&b.len())
            .then_with(|| self.render(a).cmp(&self.render(b)))
    }

    /// Nonempty connected locally closed subsets.
    pub fn lc_star(&self) -> Vec<PointSet> {
        self.lc_subsets(true).into_iter().map(|l| l.value).collect()
    }

    /// All `(U, Y \ U)` with `U` relatively open in `Y`, including the trivial ones.
    pub fn open_pairs(&self, y: PointSet) -> Vec<(PointSet, PointSet)> {
        self.subspace_opens(y)
            .into_iter()
            .map(|u| (u, y.minus(u)))
            .collect()
    }

    /// Sorted concatenation of labels, e.g. `"124"`; `"{}"` for the empty set.
    pub fn render(&self, s: PointSet) -> String {
        if s.is_empty() {
            return "{}".into();
        }
        let sep = if self.labels.iter().all(|l| l.chars().count() == 1) {
            ""
        } else {
            ","
        };
        s.points()
            .map(|i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn parse_set(&self, s: &str) -> Result<PointSet> {
        let s = s.trim();
        if s == "{}" || s.is_empty() {
            return Ok(PointSet::EMPTY);
        }
        let parts: Vec<String> = if s.contains(',') {
            s.split(',').map(|p| p.trim().to_string()).collect()
        } else {
            s.chars().map(|c| c.to_string()).collect()
        };
        let mut set = PointSet::EMPTY;
        for p in parts {
            let i = self
                .labels
                .iter()
                .position(|l| *l == p)
                .ok_or_else(|| Error::UnknownObject(s.to_string()))?;
            set = set.union(PointSet::singleton(i));
        }
        Ok(set)
    }

    /// Covering pairs `(x, y)` with `y ⤳`-below `x`: `y` is in the minimal
    /// open set of `x`, with nothing strictly between.
    pub fn hasse_edges(&self) -> Result<Vec<(usize, usize)>> {
        if !self.t0 {
            return Err(Error::NotT0);
        }
        let n = self.len();
        let lt = |x: usize, y: usize| x != y && self.specializes(x, y);
        let mut edges = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if lt(x, y) && !(0..n).any(|z| lt(x, z) && lt(z, y)) {
                    edges.push((x, y));
                }
            }
        }
        Ok(edges)
    }

    /// Whether every connected component has a path-shaped Hasse diagram.
    pub fn is_accordion_union(&self) -> Result<bool> {
        let edges = self.hasse_edges()?;
        for comp in self.components(self.full()) {
            let pts: Vec<usize> = comp.points().collect();
            let e: Vec<&(usize, usize)> = edges.iter().filter(|(a, _)| comp.contains(*a)).collect();
            if e.len() + 1 != pts.len() {
                return Ok(false);
            }
            let mut deg = BTreeMap::new();
            for (a, b) in &e {
                *deg.entry(*a).or_insert(0) += 1;
                *deg.entry(*b).or_insert(0) += 1;
            }
            // a connected graph with |V|-1 edges and max degree 2 is a path
            if deg.values().any(|&d| d > 2) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opens: Vec<String> = self.opens.iter().map(|o| self.render(*o)).collect();
        write!(
            f,
            "{} on {{{}}}: opens {{{}}}",
            self.name,
            self.labels.join(","),
            opens.join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(x: &FiniteSpace) -> BTreeSet<String> {
        x.lc_star().into_iter().map(|s| x.render(s)).collect()
    }

    fn set_of(v: &[&str]) -> BTreeSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn builtins() {
        let z3 = FiniteSpace::z_space(3);
        assert_eq!(z3.len(), 4);
        assert_eq!(z3.opens().count(), 9);
        assert!(z3.opens().all(|o| o.is_empty() || o.contains(3)));
        let s = FiniteSpace::s_space();
        let opens: BTreeSet<String> = s.opens().map(|o| s.render(o)).collect();
        assert_eq!(opens, set_of(&["{}", "4", "24", "34", "234", "1234"]));
        let p = FiniteSpace::point();
        assert_eq!(p.opens().count(), 2);
        assert!(matches!(
            FiniteSpace::builtin("Q7"),
            Err(Error::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn rejects_non_topology() {
        let r = FiniteSpace::new(
            "bad",
            vec!["1".into(), "2".into()],
            [PointSet(0), PointSet(1), PointSet(2), PointSet(3)],
        );
        assert!(r.is_ok());
        let r = FiniteSpace::new(
            "bad",
            vec!["1".into(), "2".into(), "3".into()],
            [PointSet(0), PointSet(1), PointSet(2), PointSet(7)],
        );
        assert!(matches!(r, Err(Error::NotTopology(_))));
    }

    #[test]
    fn non_t0_is_flagged() {
        let x = FiniteSpace::new(
            "indiscrete",
            vec!["1".into(), "2".into()],
            [PointSet(0), PointSet(3)],
        )
        .unwrap();
        assert!(!x.is_t0());
        assert!(matches!(x.is_accordion_union(), Err(Error::NotT0)));
    }

    #[test]
    fn lc_star_lists() {
        assert_eq!(
            names(&FiniteSpace::pseudocircle()),
            set_of(&[
                "3", "4", "134", "234", "1234", "13", "14", "23", "24", "124", "123", "1", "2"
            ])
        );
        assert_eq!(
            names(&FiniteSpace::z_space(3)),
            set_of(&["1", "2", "3", "4", "14", "24", "34", "124", "134", "234", "1234"])
        );
        assert_eq!(
            names(&FiniteSpace::s_space()),
            set_of(&["4", "24", "34", "234", "1234", "123", "12", "13", "1", "2", "3"])
        );
        assert_eq!(FiniteSpace::z_space(4).lc_star().len(), 20);
    }

    #[test]
    fn accordion() {
        assert!(FiniteSpace::z_space(2).is_accordion_union().unwrap());
        assert!(!FiniteSpace::z_space(3).is_accordion_union().unwrap());
        assert!(!FiniteSpace::pseudocircle().is_accordion_union().unwrap());
        assert!(FiniteSpace::z_space(1).is_accordion_union().unwrap());
    }

    #[test]
    fn open_pairs_examples() {
        let z3 = FiniteSpace::z_space(3);
        let four = z3.parse_set("4").unwrap();
        let pairs = z3.open_pairs(four);
        assert!(pairs.iter().all(|(u, _)| u.is_empty() || *u == four));
        let all = z3.parse_set("1234").unwrap();
        let us: BTreeSet<String> = z3
            .open_pairs(all)
            .iter()
            .map(|(u, _)| z3.render(*u))
            .collect();
        for u in ["4", "14", "24", "34", "124", "134", "234"] {
            assert!(us.contains(u), "{u}");
        }
        let s = FiniteSpace::s_space();
        let y = s.parse_set("234").unwrap();
        let us: BTreeSet<String> = s.open_pairs(y).iter().map(|(u, _)| s.render(*u)).collect();
        for u in ["4", "24", "34"] {
            assert!(us.contains(u), "{u}");
        }
    }

    /// Every topology on `n` points, by filtering all families of subsets.
    fn all_topologies(n: usize) -> Vec<FiniteSpace> {
        let full = PointSet::full(n);
        let middle: Vec<PointSet> = (1..(1u64 << n) - 1).map(PointSet).collect();
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut out = Vec::new();
        for mask in 0u64..1 << middle.len() {
            let mut opens = vec![PointSet::EMPTY, full];
            opens.extend(
                middle
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, s)| *s),
            );
            if let Ok(x) = FiniteSpace::new("t", labels.clone(), opens) {
                out.push(x);
            }
        }
        out
    }

    // every topology on n points is the up-set topology of a preorder
    fn topologies_from_preorders(n: usize) -> Vec<FiniteSpace> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut out = Vec::new();
        for mask in 0u64..1 << pairs.len() {
            let le = |a: usize, b: usize| {
                a == b
                    || pairs
                        .iter()
                        .position(|&p| p == (a, b))
                        .is_some_and(|k| mask >> k & 1 == 1)
            };
            let transitive =
                (0..n).all(|a| (0..n).all(|b| !le(a, b) || (0..n).all(|c| !le(b, c) || le(a, c))));
            if !transitive {
                continue;
            }
            let opens: Vec<PointSet> = (0..1u64 << n)
                .map(PointSet)
                .filter(|u| {
                    u.points()
                        .all(|a| (0..n).all(|b| !le(a, b) || u.contains(b)))
                })
                .collect();
            out.push(FiniteSpace::new("t", labels.clone(), opens).unwrap());
        }
        out
    }

    // components via the comparability graph of the specialization preorder
    fn graph_components(x: &FiniteSpace, y: PointSet) -> BTreeSet<PointSet> {
        let mut out = BTreeSet::new();
        let mut left = y;
        while let Some(start) = left.points().next() {
            let mut comp = PointSet::singleton(start);
            loop {
                let grown = PointSet::from_points(y.points().filter(|&b| {
                    comp.points()
                        .any(|a| x.specializes(a, b) || x.specializes(b, a))
                }))
                .union(comp);
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            out.insert(comp);
            left = left.minus(comp);
        }
        out
    }

    #[test]
    fn brute_force_oracle_small_spaces() {
        let counts: Vec<usize> = (1..=4).map(|n| all_topologies(n).len()).collect();
        assert_eq!(counts, vec![1, 4, 29, 355]);
        assert_eq!(topologies_from_preorders(4).len(), 355);
        let five = topologies_from_preorders(5);
        assert_eq!(five.len(), 6942);
        for n in 1..=5 {
            let spaces = if n == 5 {
                five.clone()
            } else {
                all_topologies(n)
            };
            for x in spaces {
                let full = x.full();
                let lc: BTreeSet<PointSet> = x.lc_subsets(false).iter().map(|l| l.value).collect();
                for s in (0..=full.0).map(PointSet) {
                    // locally closed iff open in its closure
                    let direct = x.is_relatively_open(s, x.closure(s));
                    assert_eq!(lc.contains(&s), direct);
                    assert_eq!(x.is_locally_closed(s), direct);
                    let comps: BTreeSet<PointSet> = x.components(s).into_iter().collect();
                    assert_eq!(comps, graph_components(&x, s));
                }
                for l in x.lc_subsets(true) {
                    assert!(l.validates(&x));
                    assert!(x.is_connected(l.value));
                }
            }
        }
    }
}
