//! Exactness of the six-term sequences of a module.

use serde::Serialize;

use super::free::Variance;
use super::module::{GradedModule, ModuleEval};
use crate::error::{Error, Result};
use crate::finspace::PointSet;
use crate::ntcat::{MapEntry, NtCategory};
use crate::zexact::graded::{GradedGroup, Parity};
use crate::zexact::group::{subquotient_homology, GroupHom};
use crate::zexact::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub u: String,
    pub y: String,
    /// First node where exactness fails.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub pairs: Vec<PairVerdict>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.pairs.iter().all(|p| p.failure.is_none())
    }

    pub fn first_failure(&self) -> Option<&PairVerdict> {
        self.pairs.iter().find(|p| p.failure.is_some())
    }
}

/// Value of a module on a locally closed set: sum over its components.
struct Block {
    group: GradedGroup,
    offsets: [Vec<usize>; 2],
}

fn block(cat: &NtCategory, m: &GradedModule, s: PointSet) -> Result<Block> {
    let objs = cat.components(s)?;
    let parts: Vec<&GradedGroup> = objs.iter().map(|&o| &m.entries[o]).collect();
    let group = GradedGroup::direct_sum(&parts);
    let mut offsets = [Vec::new(), Vec::new()];
    for p in Parity::both() {
        let mut at = 0;
        for g in &parts {
            offsets[p.bit() as usize].push(at);
            at += g.part(p).generators;
        }
    }
    Ok(Block { group, offsets })
}

/// The map induced by `entries` (a map from the set of `from` to that of
/// `to` in the category), as a map of module values. For right modules the
/// direction is reversed.
fn induced(
    ev: &ModuleEval,
    entries: &[MapEntry],
    from: &Block,
    to: &Block,
    deg: Parity,
) -> Result<[GroupHom; 2]> {
    let right = ev.m.variance == Variance::Right;
    let (s, d) = if right { (to, from) } else { (from, to) };
    let mut out = Vec::new();
    for p in Parity::both() {
        let q = p + deg;
        let mut mat = IntMatrix::zeros(d.group.part(q).generators, s.group.part(p).generators);
        for e in entries {
            let a = ev.eval_deg(e.src, e.dst, &e.element, deg)?;
            let (sc, dc) = if right {
                (e.dst_comp, e.src_comp)
            } else {
                (e.src_comp, e.dst_comp)
            };
            mat.set_block(
                d.offsets[q.bit() as usize][dc],
                s.offsets[p.bit() as usize][sc],
                a.part(p),
            );
        }
        out.push(GroupHom::new_unchecked(
            s.group.part(p).clone(),
            d.group.part(q).clone(),
            mat,
        ));
    }
    let odd = out.pop().unwrap();
    Ok([out.pop().unwrap(), odd])
}

fn exact_at(f: &GroupHom, g: &GroupHom) -> bool {
    match subquotient_homology(f, g) {
        Ok(h) => h.group.is_zero(),
        Err(_) => false,
    }
}

fn check_pair(
    cat: &NtCategory,
    m: &GradedModule,
    ev: &ModuleEval,
    u: PointSet,
    y: PointSet,
) -> Result<Option<String>> {
    let c = y.minus(u);
    let (bu, by, bc) = (block(cat, m, u)?, block(cat, m, y)?, block(cat, m, c)?);
    let i = induced(ev, &cat.incl(u, y)?, &bu, &by, Parity::Even)?;
    let r = induced(ev, &cat.restr(y, c)?, &by, &bc, Parity::Even)?;
    let d = induced(ev, &cat.bound(c, u)?, &bc, &bu, Parity::Odd)?;
    // the cyclic sequence g0 -f-> g1 -g-> g2 -h-> g0[1]
    let (names, f, g, h) = match m.variance {
        Variance::Left => (["M(U)", "M(Y)", "M(Y\\U)"], &i, &r, &d),
        Variance::Right => (["M(Y\\U)", "M(Y)", "M(U)"], &r, &i, &d),
    };
    for p in Parity::both() {
        let q = p.flip();
        let nodes = [
            (names[1], &f[p.bit() as usize], &g[p.bit() as usize]),
            (names[2], &g[p.bit() as usize], &h[p.bit() as usize]),
            (names[0], &h[q.bit() as usize], &f[p.bit() as usize]),
        ];
        for (name, a, b) in nodes {
            if !exact_at(a, b) {
                return Ok(Some(format!("{name} in {p} degree")));
            }
        }
    }
    Ok(None)
}

/// Checks every six-term sequence `M(U) -> M(Y) -> M(Y\U) -> M(U)[1]`
/// for `U` a proper nonempty open subset of a locally closed `Y`.
pub fn check_exact(cat: &NtCategory, m: &GradedModule) -> Result<ExactnessReport> {
    m.check_shapes(&cat.table)?;
    if m.entries.len() != cat.table.len() {
        return Err(Error::InvalidModule(
            "module does not match the category".into(),
        ));
    }
    let ev = ModuleEval::new(&cat.table, m);
    let x = &cat.space;
    let mut rep = ExactnessReport::default();
    for l in x.lc_subsets(false) {
        let y = l.value;
        for (u, c) in x.open_pairs(y) {
            if u.is_empty() || c.is_empty() {
                continue;
            }
            let failure = check_pair(cat, m, &ev, u, y)?;
            rep.pairs.push(PairVerdict {
                u: x.render(u),
                y: x.render(y),
                failure,
            });
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntmod::module::free_module;
    use crate::zexact::group::Presentation;

    #[test]
    fn free_modules_are_exact() {
        for name in ["Z2", "Z3"] {
            let cat = NtCategory::builtin(name).unwrap();
            for y in 0..cat.table.len() {
                for side in [Variance::Left, Variance::Right] {
                    let m = free_module(&cat.table, y, side, Parity::Even).unwrap();
                    let rep = check_exact(cat, &m).unwrap();
                    assert!(
                        rep.is_exact(),
                        "{name} {y} {side:?}: {:?}",
                        rep.first_failure()
                    );
                }
            }
        }
    }

    #[test]
    fn lone_open_value_is_not_exact() {
        let cat = NtCategory::builtin("Z1").unwrap();
        let x = &cat.space;
        let u = cat.object_of(x.parse_set("2").unwrap()).unwrap();
        let mut m = GradedModule::zero(&cat.table, Variance::Left);
        m.entries[u] = GradedGroup::new(Presentation::free(1), Presentation::zero());
        for g in 0..m.actions.len() {
            let (a, b) = m.action_ends(&cat.table, g);
            m.actions[g] =
                crate::ntmod::ActionMats::zero(&m.entries[a], &m.entries[b], m.actions[g].degree);
        }
        let rep = check_exact(cat, &m).unwrap();
        assert!(!rep.is_exact());
    }
}
