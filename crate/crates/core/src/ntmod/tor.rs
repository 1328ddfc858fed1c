//! `Tor(NT_ss, M)` from free resolutions of the simple right modules.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::free::{ElemMatrix, Summand, Variance};
use super::module::{m_ss, GradedModule, ModuleEval};
use super::resolution::{
    builtin_resolution, has_builtin_resolution, resolve_simple, FreeResolution,
};
use crate::error::{Error, Result};
use crate::ntcat::NtCategory;
use crate::zexact::graded::{GradedNF, Parity};
use crate::zexact::group::{subquotient_homology, AbGroupNF, GroupHom, Homology, Presentation};
use crate::zexact::matrix::IntMatrix;

/// Where resolutions come from. `Auto` prefers the catalogue.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Builtin,
    Generic,
    #[default]
    Auto,
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Engine> {
        match s {
            "builtin" => Ok(Engine::Builtin),
            "generic" => Ok(Engine::Generic),
            "auto" => Ok(Engine::Auto),
            _ => Err(Error::Parse(format!("unknown engine {s:?}"))),
        }
    }
}

/// Resolution of `S_y` known at least through level `upto`.
pub fn resolution_for(
    cat: &NtCategory,
    y: usize,
    upto: usize,
    engine: Engine,
) -> Result<Arc<FreeResolution>> {
    let label = &cat.table.objects()[y];
    let builtin = match engine {
        Engine::Builtin => true,
        Engine::Generic => false,
        Engine::Auto => has_builtin_resolution(cat.name(), label),
    };
    if builtin {
        return Ok(Arc::new(builtin_resolution(cat.name(), label)?.clone()));
    }
    type Cache = Mutex<HashMap<(String, usize), Arc<FreeResolution>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (cat.name().to_string(), y);
    if let Some(r) = cache.lock().unwrap().get(&key) {
        if r.known_depth().map_or(true, |d| d >= upto) {
            return Ok(r.clone());
        }
    }
    let r = Arc::new(resolve_simple(&cat.table, y, upto.max(4))?);
    cache.lock().unwrap().insert(key, r.clone());
    Ok(r)
}

fn level_group(ev: &ModuleEval, level: &[Summand], p: Parity) -> Presentation {
    let parts: Vec<&Presentation> = level
        .iter()
        .map(|s| ev.m.entries[s.obj].part(p + s.shift))
        .collect();
    Presentation::direct_sum(&parts)
}

/// `d ⊗ M` on parity part `p`: the block `(l, k)` is `M(d_lk)`.
fn tensored(
    ev: &ModuleEval,
    src: &[Summand],
    dst: &[Summand],
    d: &ElemMatrix,
    p: Parity,
) -> Result<GroupHom> {
    let (gs, gd) = (level_group(ev, src, p), level_group(ev, dst, p));
    let mut mat = IntMatrix::zeros(gd.generators, gs.generators);
    let mut row = 0;
    for (l, sl) in dst.iter().enumerate() {
        let mut col = 0;
        for (k, sk) in src.iter().enumerate() {
            let a = ev.eval_deg(sk.obj, sl.obj, &d[l][k], sk.shift + sl.shift)?;
            let blk = a.part(p + sk.shift);
            mat.set_block(row, col, blk);
            col += ev.m.entries[sk.obj].part(p + sk.shift).generators;
        }
        row += ev.m.entries[sl.obj].part(p + sl.shift).generators;
    }
    Ok(GroupHom::new_unchecked(gs, gd, mat))
}

/// The maps `C_{n+1} -> C_n -> C_{n-1}` of `r ⊗ M` on part `p`.
pub fn tensored_pair(
    ev: &ModuleEval,
    r: &FreeResolution,
    n: usize,
    p: Parity,
) -> Result<(GroupHom, GroupHom)> {
    let missing = || Error::Computation(format!("resolution not known at level {}", n + 1));
    let (top, mid) = (
        r.level(n + 1).ok_or_else(missing)?,
        r.level(n).ok_or_else(missing)?,
    );
    let f = tensored(ev, &top, &mid, &r.diff(n + 1).ok_or_else(missing)?, p)?;
    let g = if n == 0 {
        let c = level_group(ev, &mid, p);
        GroupHom::zero(c, Presentation::zero())
    } else {
        let low = r.level(n - 1).ok_or_else(missing)?;
        tensored(ev, &mid, &low, &r.diff(n).ok_or_else(missing)?, p)?
    };
    Ok((f, g))
}

/// `top -d2-> mid -d1-> low`, a complex of free right modules, tensored
/// with `M` on part `p`.
pub fn tensored_complex(
    ev: &ModuleEval,
    [top, mid, low]: [&[Summand]; 3],
    d2: &ElemMatrix,
    d1: &ElemMatrix,
    p: Parity,
) -> Result<(GroupHom, GroupHom)> {
    Ok((
        tensored(ev, top, mid, d2, p)?,
        tensored(ev, mid, low, d1, p)?,
    ))
}

/// `Tor_n(S_Y, M)` on part `p`, with cycle representatives.
pub fn tor_homology(ev: &ModuleEval, r: &FreeResolution, n: usize, p: Parity) -> Result<Homology> {
    let (f, g) = tensored_pair(ev, r, n, p)?;
    subquotient_homology(&f, &g)
}

fn tor_nf(ev: &ModuleEval, r: &FreeResolution, n: usize) -> Result<GradedNF> {
    Ok(GradedNF {
        even: tor_homology(ev, r, n, Parity::Even)?.group,
        odd: tor_homology(ev, r, n, Parity::Odd)?.group,
    })
}

/// Tor groups per object label and degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TorReport {
    pub entries: BTreeMap<String, BTreeMap<usize, GradedNF>>,
    /// Some resolution used has solved-for differentials rather than explicit ones.
    pub reconstructed: bool,
}

impl TorReport {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .entries
            .values()
            .flat_map(|m| m.keys().copied())
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn at(&self, y: &str, n: usize) -> Option<&GradedNF> {
        self.entries.get(y)?.get(&n)
    }

    /// `Tor_n(NT_ss, M)`: the sum over all objects.
    pub fn aggregate(&self, n: usize) -> GradedNF {
        let parts: Vec<&GradedNF> = self.entries.values().filter_map(|m| m.get(&n)).collect();
        GradedNF {
            even: AbGroupNF::sum_all(parts.iter().map(|g| &g.even)),
            odd: AbGroupNF::sum_all(parts.iter().map(|g| &g.odd)),
        }
    }

    pub fn is_free(&self, n: usize) -> bool {
        self.aggregate(n).is_free()
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        for (y, m) in &self.entries {
            let mut per = Map::new();
            for (n, g) in m {
                per.insert(
                    n.to_string(),
                    json!({"even": g.even.to_string(), "odd": g.odd.to_string()}),
                );
            }
            out.insert(y.clone(), Value::Object(per));
        }
        Value::Object(out)
    }

    pub fn from_json(v: &Value) -> Result<TorReport> {
        let bad = || Error::Parse("malformed Tor report".into());
        let mut rep = TorReport::default();
        for (y, per) in v.as_object().ok_or_else(bad)? {
            let mut m = BTreeMap::new();
            for (n, g) in per.as_object().ok_or_else(bad)? {
                let n: usize = n.parse().map_err(|_| bad())?;
                let part =
                    |k: &str| AbGroupNF::parse(g.get(k).and_then(Value::as_str).ok_or_else(bad)?);
                m.insert(
                    n,
                    GradedNF {
                        even: part("even")?,
                        odd: part("odd")?,
                    },
                );
            }
            rep.entries.insert(y.clone(), m);
        }
        Ok(rep)
    }
}

fn check_module(cat: &NtCategory, m: &GradedModule) -> Result<()> {
    if m.variance != Variance::Left {
        return Err(Error::InvalidModule(
            "Tor with NT_ss needs a left module".into(),
        ));
    }
    if m.space != cat.name() {
        return Err(Error::InvalidModule(format!(
            "module over {} used with {}",
            m.space,
            cat.name()
        )));
    }
    m.check_shapes(&cat.table)
}

/// `Tor_n(S_Y, M)` for the given objects and degrees.
pub fn tor_for(
    cat: &NtCategory,
    m: &GradedModule,
    ys: &[usize],
    ns: &[usize],
    engine: Engine,
) -> Result<TorReport> {
    check_module(cat, m)?;
    let ev = ModuleEval::new(&cat.table, m);
    let top = ns.iter().copied().max().unwrap_or(0) + 1;
    let mut rep = TorReport::default();
    for &y in ys {
        let r = resolution_for(cat, y, top, engine)?;
        rep.reconstructed |= r.reconstructed;
        let mut per = BTreeMap::new();
        for &n in ns {
            per.insert(n, tor_nf(&ev, &r, n)?);
        }
        rep.entries.insert(cat.table.objects()[y].clone(), per);
    }
    Ok(rep)
}

/// `Tor_n(S_Y, M)` for every object `Y`.
pub fn tor(cat: &NtCategory, m: &GradedModule, ns: &[usize], engine: Engine) -> Result<TorReport> {
    let ys: Vec<usize> = (0..cat.table.len()).collect();
    tor_for(cat, m, &ys, ns, engine)
}

fn check_hypotheses(cat: &NtCategory) -> Result<()> {
    let id = cat.ideal();
    if !(id.nilpotent && id.semidirect) {
        return Err(Error::HypothesisNotVerified(format!(
            "nil ideal of {} is not verified nilpotent and split",
            cat.name()
        )));
    }
    Ok(())
}

/// Least `n <= max_n` with `Tor_n(NT_ss, M)` free and `Tor_{n+1}` zero;
/// at `n = 0` freeness of `M_ss` stands in for that of `Tor_0`.
pub fn projective_dimension(
    cat: &NtCategory,
    m: &GradedModule,
    max_n: usize,
    engine: Engine,
) -> Result<usize> {
    check_hypotheses(cat)?;
    let ns: Vec<usize> = (1..=max_n + 1).collect();
    let rep = tor(cat, m, &ns, engine)?;
    let ss_free = m_ss(m, &cat.table).iter().all(GradedNF::is_free);
    for n in 0..=max_n {
        let free = if n == 0 { ss_free } else { rep.is_free(n) };
        if free && rep.aggregate(n + 1).is_zero() {
            return Ok(n);
        }
    }
    Err(Error::Inconclusive(max_n))
}

/// Rank of `Tor_n(NT_ss, M)`, i.e. the dimension of the rational Tor.
pub fn rational_tor(cat: &NtCategory, m: &GradedModule, n: usize, engine: Engine) -> Result<usize> {
    let g = tor(cat, m, &[n], engine)?.aggregate(n);
    Ok(g.even.rank + g.odd.rank)
}

/// Projective dimension after tensoring with the rationals: the least `n`
/// with rational `Tor_{n+1}` zero.
pub fn rational_projective_dimension(
    cat: &NtCategory,
    m: &GradedModule,
    max_n: usize,
    engine: Engine,
) -> Result<usize> {
    check_hypotheses(cat)?;
    let ns: Vec<usize> = (1..=max_n + 1).collect();
    let rep = tor(cat, m, &ns, engine)?;
    (0..=max_n)
        .find(|&n| {
            let g = rep.aggregate(n + 1);
            g.even.rank + g.odd.rank == 0
        })
        .ok_or(Error::Inconclusive(max_n))
}
