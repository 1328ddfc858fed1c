//! Block adjacency matrices over a finite space and their structural checks.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finspace::{FiniteSpace, PointSet};
use crate::zexact::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFile {
    pub point: String,
    pub vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub space: String,
    pub blocks: Vec<BlockFile>,
    pub adjacency: Vec<Vec<i64>>,
}

/// A graph whose vertices are grouped into one block per point of a space.
/// `adjacency[v][w]` counts edges `v -> w`; vertices are numbered block by
/// block in the order of `blocks`.
#[derive(Clone, Debug)]
pub struct BlockGraph {
    pub space: FiniteSpace,
    /// Point of each block.
    pub blocks: Vec<usize>,
    /// Vertex count of each block.
    pub sizes: Vec<usize>,
    pub adjacency: IntMatrix,
}

impl BlockGraph {
    pub fn new(
        space: FiniteSpace,
        blocks: Vec<(usize, usize)>,
        adjacency: IntMatrix,
    ) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.1).sum();
        if adjacency.rows() != n || adjacency.cols() != n {
            return Err(Error::Graph(format!("adjacency must be {n}x{n}")));
        }
        let mut seen = vec![false; space.len()];
        for &(p, _) in &blocks {
            if p >= space.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Graph(
                    "blocks must be in bijection with the points".into(),
                ));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Graph("every point needs a block".into()));
        }
        for v in 0..n {
            for w in 0..n {
                if adjacency.get(v, w).sign() == num_bigint::Sign::Minus {
                    return Err(Error::Graph("edge counts must be nonnegative".into()));
                }
            }
        }
        let (blocks, sizes) = blocks.into_iter().unzip();
        Ok(BlockGraph {
            space,
            blocks,
            sizes,
            adjacency,
        })
    }

    pub fn from_file(f: &GraphFile) -> Result<Self> {
        let space = FiniteSpace::builtin(&f.space)?;
        let blocks = f
            .blocks
            .iter()
            .map(|b| {
                let s = space.parse_set(&b.point)?;
                match s.points().collect::<Vec<_>>()[..] {
                    [p] => Ok((p, b.vertices)),
                    _ => Err(Error::Graph(format!(
                        "block point {:?} is not a single point",
                        b.point
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let n = f.adjacency.len();
        if f.adjacency.iter().any(|r| r.len() != n) {
            return Err(Error::Graph("adjacency must be square".into()));
        }
        BlockGraph::new(space, blocks, IntMatrix::from_rows(&f.adjacency, n))
    }

    pub fn to_file(&self) -> GraphFile {
        let n = self.adjacency.rows();
        GraphFile {
            space: self.space.name().to_string(),
            blocks: self
                .blocks
                .iter()
                .zip(&self.sizes)
                .map(|(&p, &k)| BlockFile {
                    point: self.space.labels()[p].clone(),
                    vertices: k,
                })
                .collect(),
            adjacency: (0..n)
                .map(|v| {
                    (0..n)
                        .map(|w| i64::try_from(self.adjacency.get(v, w)).expect("small entry"))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        BlockGraph::from_file(&serde_json::from_str(&text)?)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.rows()
    }

    /// Point of each vertex.
    pub fn vertex_points(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .zip(&self.sizes)
            .flat_map(|(&p, &k)| std::iter::repeat(p).take(k))
            .collect()
    }

    /// Vertices over the points of `s`, in vertex order.
    pub fn vertices(&self, s: PointSet) -> Vec<usize> {
        self.vertex_points()
            .iter()
            .enumerate()
            .filter(|(_, &p)| s.contains(p))
            .map(|(v, _)| v)
            .collect()
    }

    /// `(A^t - I)` restricted to rows `rows` and columns `cols`.
    pub fn phi_block(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                let mut x = self.adjacency.get(c, r).clone();
                if r == c {
                    x -= 1;
                }
                m.set(i, j, x);
            }
        }
        m
    }

    /// Edges `p -> q` between blocks with `q` outside the smallest open set
    /// around `p`, restricted to points of `s`.
    pub fn triangularity_violations(&self, s: PointSet) -> Vec<(usize, usize)> {
        let pts = self.vertex_points();
        let mut out = Vec::new();
        for v in 0..pts.len() {
            for w in 0..pts.len() {
                let (p, q) = (pts[v], pts[w]);
                if s.contains(p)
                    && s.contains(q)
                    && !self
                        .adjacency
                        .get(v, w)
                        .sign()
                        .eq(&num_bigint::Sign::NoSign)
                    && !self.space.min_open(p).contains(q)
                    && !out.contains(&(p, q))
                {
                    out.push((p, q));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    pub triangular: bool,
    /// Point pairs `(p, q)` with an edge that leaves the open hull of `p`.
    pub violations: Vec<(String, String)>,
    pub sinks: Vec<usize>,
    pub sources: Vec<usize>,
    pub condition_k: bool,
    /// Vertices that return to themselves along exactly one path.
    pub single_cycle_vertices: Vec<usize>,
}

impl GraphReport {
    pub fn all_pass(&self) -> bool {
        self.triangular && self.sinks.is_empty() && self.sources.is_empty() && self.condition_k
    }
}

/// Number of first-return paths at `v`, capped at 2.
pub fn return_paths(a: &IntMatrix, v: usize) -> u8 {
    let n = a.rows();
    let edges =
        |x: usize, y: usize| -> u64 { u64::try_from(a.get(x, y)).unwrap_or(u64::MAX).min(2) };
    // vertices other than v reachable from v and reaching v without passing v
    let reach = |fwd: bool| {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = (0..n)
            .filter(|&w| w != v && (if fwd { edges(v, w) } else { edges(w, v) }) > 0)
            .collect();
        for &w in &stack {
            seen[w] = true;
        }
        while let Some(x) = stack.pop() {
            for y in 0..n {
                let e = if fwd { edges(x, y) } else { edges(y, x) };
                if y != v && e > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    let (from, to) = (reach(true), reach(false));
    let live: Vec<bool> = (0..n).map(|w| from[w] && to[w]).collect();
    // a cycle among live vertices gives infinitely many return paths
    let mut state = vec![0u8; n];
    fn cyclic(x: usize, live: &[bool], a: &dyn Fn(usize, usize) -> u64, st: &mut [u8]) -> bool {
        st[x] = 1;
        for y in 0..live.len() {
            if live[y] && a(x, y) > 0 && (st[y] == 1 || (st[y] == 0 && cyclic(y, live, a, st))) {
                return true;
            }
        }
        st[x] = 2;
        false
    }
    for w in 0..n {
        if live[w] && state[w] == 0 && cyclic(w, &live, &edges, &mut state) {
            return 2;
        }
    }
    // acyclic: count paths through live vertices, capped
    let mut memo: Vec<Option<u64>> = vec![None; n];
    fn to_v(
        x: usize,
        v: usize,
        live: &[bool],
        a: &dyn Fn(usize, usize) -> u64,
        memo: &mut [Option<u64>],
    ) -> u64 {
        if let Some(c) = memo[x] {
            return c;
        }
        let mut c = a(x, v);
        for y in 0..live.len() {
            if live[y] && a(x, y) > 0 {
                c = (c + a(x, y) * to_v(y, v, live, a, memo)).min(2);
            }
        }
        memo[x] = Some(c.min(2));
        c.min(2)
    }
    let mut total = edges(v, v);
    for w in 0..n {
        if live[w] && edges(v, w) > 0 {
            total = (total + edges(v, w) * to_v(w, v, &live, &edges, &mut memo)).min(2);
        }
    }
    total as u8
}

pub fn graph_checks(g: &BlockGraph) -> GraphReport {
    let a = &g.adjacency;
    let n = a.rows();
    let viol = g.triangularity_violations(g.space.full());
    let labels = g.space.labels();
    let nonzero = |v: usize, w: usize| !a.get(v, w).sign().eq(&num_bigint::Sign::NoSign);
    let single: Vec<usize> = (0..n).filter(|&v| return_paths(a, v) == 1).collect();
    GraphReport {
        triangular: viol.is_empty(),
        violations: viol
            .into_iter()
            .map(|(p, q)| (labels[p].clone(), labels[q].clone()))
            .collect(),
        sinks: (0..n).filter(|&v| !(0..n).any(|w| nonzero(v, w))).collect(),
        sources: (0..n).filter(|&v| !(0..n).any(|w| nonzero(w, v))).collect(),
        condition_k: single.is_empty(),
        single_cycle_vertices: single,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_point(loops: i64) -> BlockGraph {
        BlockGraph::new(
            FiniteSpace::point(),
            vec![(0, 1)],
            IntMatrix::from_rows(&[[loops]], 1),
        )
        .unwrap()
    }

    #[test]
    fn condition_k_on_loops() {
        assert!(!graph_checks(&one_point(1)).condition_k);
        assert!(graph_checks(&one_point(2)).condition_k);
        let r = graph_checks(&one_point(0));
        assert!(r.condition_k && r.sinks == vec![0] && r.sources == vec![0]);
    }

    #[test]
    fn return_paths_through_other_vertices() {
        // v -> w -> v only: one path; a loop at w makes infinitely many
        let a = IntMatrix::from_rows(&[[0, 1], [1, 0]], 2);
        assert_eq!(return_paths(&a, 0), 1);
        let b = IntMatrix::from_rows(&[[0, 1], [1, 1]], 2);
        assert_eq!(return_paths(&b, 0), 2);
        assert_eq!(return_paths(&b, 1), 2);
        let c = IntMatrix::from_rows(&[[0, 2], [1, 0]], 2);
        assert_eq!(return_paths(&c, 0), 2);
    }

    #[test]
    fn edges_must_stay_in_open_hulls() {
        let x = FiniteSpace::z_space(1);
        let open = (0..2).find(|&p| x.is_open(PointSet::singleton(p))).unwrap();
        let closed = 1 - open;
        let a = IntMatrix::from_rows(&[[2, 1], [0, 2]], 2);
        let bad = BlockGraph::new(x.clone(), vec![(open, 1), (closed, 1)], a.clone()).unwrap();
        assert!(!graph_checks(&bad).triangular);
        let good = BlockGraph::new(x, vec![(closed, 1), (open, 1)], a).unwrap();
        assert!(graph_checks(&good).triangular);
    }

    #[test]
    fn json_roundtrip() {
        let g = one_point(3);
        let f = g.to_file();
        let h = BlockGraph::from_file(&f).unwrap();
        assert_eq!(h.to_file(), f);
    }
}
