//! Graded quivers with integer path relations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zexact::Parity;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArrowKind {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "r")]
    R,
    #[serde(rename = "delta", alias = "d")]
    Delta,
}

impl ArrowKind {
    pub fn parity(self) -> Parity {
        match self {
            ArrowKind::Delta => Parity::Odd,
            _ => Parity::Even,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            ArrowKind::I => "i",
            ArrowKind::R => "r",
            ArrowKind::Delta => "d",
        }
    }
}

impl fmt::Display for ArrowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub name: String,
    pub parity: Parity,
    pub kind: ArrowKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedQuiver {
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl GradedQuiver {
    pub fn new(objects: Vec<String>) -> Result<Self> {
        let mut index = HashMap::new();
        for (k, o) in objects.iter().enumerate() {
            if index.insert(o.clone(), k).is_some() {
                return Err(Error::Parse(format!("duplicate object {o}")));
            }
        }
        Ok(GradedQuiver {
            objects,
            arrows: Vec::new(),
            index,
            arrow_index: HashMap::new(),
        })
    }

    pub fn add_arrow(
        &mut self,
        src: &str,
        dst: &str,
        name: &str,
        kind: ArrowKind,
    ) -> Result<usize> {
        self.add_arrow_with_parity(src, dst, name, kind, kind.parity())
    }

    pub fn add_arrow_with_parity(
        &mut self,
        src: &str,
        dst: &str,
        name: &str,
        kind: ArrowKind,
        parity: Parity,
    ) -> Result<usize> {
        let s = self.object(src)?;
        let d = self.object(dst)?;
        if self.arrow_index.contains_key(name) || name.starts_with("id:") {
            return Err(Error::Parse(format!(
                "duplicate or reserved arrow name {name}"
            )));
        }
        let k = self.arrows.len();
        self.arrows.push(Arrow {
            src: s,
            dst: d,
            name: name.to_string(),
            parity,
            kind,
        });
        self.arrow_index.insert(name.to_string(), k);
        Ok(k)
    }

    pub fn object(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn arrow(&self, name: &str) -> Result<usize> {
        self.arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Parity of a path, or an error if it is not composable.
    pub fn path_parity(&self, path: &[usize]) -> Result<Parity> {
        for w in path.windows(2) {
            if self.arrows[w[0]].dst != self.arrows[w[1]].src {
                return Err(Error::InvalidRelation(format!(
                    "{} is not followed by {}",
                    self.arrows[w[0]].name, self.arrows[w[1]].name
                )));
            }
        }
        Ok(path
            .iter()
            .fold(Parity::Even, |p, &a| p + self.arrows[a].parity))
    }

    pub fn path_name(&self, path: &[usize], src: usize) -> String {
        if path.is_empty() {
            return format!("id:{}", self.objects[src]);
        }
        path.iter()
            .rev()
            .map(|&a| self.arrows[a].name.as_str())
            .collect::<Vec<_>>()
            .join(" . ")
    }
}

/// A formal integer combination of parallel paths. Paths list arrows in the
/// order they are traversed; the empty path is the identity of `src`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathRelation {
    pub src: usize,
    pub dst: usize,
    pub terms: Vec<(BigInt, Vec<usize>)>,
}

impl PathRelation {
    /// Collects like terms and checks that all summands are parallel paths of
    /// one parity.
    pub fn new(
        q: &GradedQuiver,
        src: usize,
        dst: usize,
        terms: Vec<(BigInt, Vec<usize>)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
        for (c, p) in terms {
            *acc.entry(p).or_insert_with(BigInt::zero) += c;
        }
        let terms: Vec<(BigInt, Vec<usize>)> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (c, p))
            .collect();
        let mut parity = None;
        for (_, p) in &terms {
            let (s, d) = match (p.first(), p.last()) {
                (Some(&a), Some(&b)) => (q.arrows[a].src, q.arrows[b].dst),
                _ => (src, src),
            };
            if s != src || d != dst {
                return Err(Error::InvalidRelation(format!(
                    "summand {} is not parallel to {} -> {}",
                    q.path_name(p, src),
                    q.objects[src],
                    q.objects[dst]
                )));
            }
            let par = q.path_parity(p)?;
            if *parity.get_or_insert(par) != par {
                return Err(Error::InvalidRelation("summands of mixed parity".into()));
            }
        }
        Ok(PathRelation { src, dst, terms })
    }

    pub fn is_trivial(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0)
    }
}

/// A presented category: quiver plus relations.
#[derive(Clone, Debug)]
pub struct CatPresentation {
    pub name: String,
    pub quiver: GradedQuiver,
    pub relations: Vec<PathRelation>,
    /// Set when the relation list was reconstructed rather than taken from a
    /// published list.
    pub reconstructed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrowFile {
    pub src: String,
    pub dst: String,
    pub name: String,
    pub parity: u8,
    pub kind: ArrowKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermFile {
    pub coeff: i64,
    pub path: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CategoryFile {
    #[serde(default)]
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowFile>,
    pub relations: Vec<Vec<TermFile>>,
    #[serde(default)]
    pub reconstructed: bool,
}

impl CatPresentation {
    pub fn new(name: &str, quiver: GradedQuiver) -> Self {
        CatPresentation {
            name: name.to_string(),
            quiver,
            relations: Vec::new(),
            reconstructed: false,
        }
    }

    /// Adds `sum coeff * path = 0`, with paths given by arrow names.
    pub fn add_relation(&mut self, terms: &[(i64, &[&str])]) -> Result<()> {
        let mut parsed = Vec::new();
        for (c, names) in terms {
            let p = names
                .iter()
                .map(|n| self.quiver.arrow(n))
                .collect::<Result<Vec<_>>>()?;
            parsed.push((BigInt::from(*c), p));
        }
        let (src, dst) = endpoints(&self.quiver, &parsed)?;
        let rel = PathRelation::new(&self.quiver, src, dst, parsed)?;
        self.relations.push(rel);
        Ok(())
    }

    pub fn from_file(f: &CategoryFile) -> Result<Self> {
        let mut q = GradedQuiver::new(f.objects.clone())?;
        for a in &f.arrows {
            if a.parity > 1 {
                return Err(Error::Parse(format!(
                    "arrow {} has parity {}",
                    a.name, a.parity
                )));
            }
            q.add_arrow_with_parity(&a.src, &a.dst, &a.name, a.kind, Parity::from_bit(a.parity))?;
        }
        let mut p = CatPresentation::new(&f.name, q);
        p.reconstructed = f.reconstructed;
        for rel in &f.relations {
            let mut terms = Vec::new();
            let mut ident = None;
            for t in rel {
                let mut path = Vec::new();
                for n in &t.path {
                    if let Some(obj) = n.strip_prefix("id:") {
                        ident = Some(p.quiver.object(obj)?);
                    } else {
                        path.push(p.quiver.arrow(n)?);
                    }
                }
                terms.push((BigInt::from(t.coeff), path));
            }
            let (src, dst) = match endpoints(&p.quiver, &terms) {
                Ok(e) => e,
                Err(_) if ident.is_some() => (ident.unwrap(), ident.unwrap()),
                Err(e) => return Err(e),
            };
            p.relations
                .push(PathRelation::new(&p.quiver, src, dst, terms)?);
        }
        Ok(p)
    }

    pub fn to_file(&self) -> CategoryFile {
        let q = &self.quiver;
        CategoryFile {
            name: self.name.clone(),
            objects: q.objects.clone(),
            arrows: q
                .arrows
                .iter()
                .map(|a| ArrowFile {
                    src: q.objects[a.src].clone(),
                    dst: q.objects[a.dst].clone(),
                    name: a.name.clone(),
                    parity: a.parity.bit(),
                    kind: a.kind,
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.terms
                        .iter()
                        .map(|(c, p)| TermFile {
                            coeff: i64::try_from(c).unwrap_or(i64::MAX),
                            path: if p.is_empty() {
                                vec![format!("id:{}", q.objects[r.src])]
                            } else {
                                p.iter().map(|&a| q.arrows[a].name.clone()).collect()
                            },
                        })
                        .collect()
                })
                .collect(),
            reconstructed: self.reconstructed,
        }
    }
}

fn endpoints(q: &GradedQuiver, terms: &[(BigInt, Vec<usize>)]) -> Result<(usize, usize)> {
    terms
        .iter()
        .find(|(_, p)| !p.is_empty())
        .map(|(_, p)| (q.arrows[p[0]].src, q.arrows[*p.last().unwrap()].dst))
        .ok_or_else(|| Error::InvalidRelation("relation without a nonempty path".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> CatPresentation {
        let mut q = GradedQuiver::new(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        q.add_arrow("a", "b", "f", ArrowKind::I).unwrap();
        q.add_arrow("b", "c", "g", ArrowKind::R).unwrap();
        q.add_arrow("a", "c", "h", ArrowKind::I).unwrap();
        q.add_arrow("c", "a", "d", ArrowKind::Delta).unwrap();
        CatPresentation::new("tiny", q)
    }

    #[test]
    fn relation_checks() {
        let mut p = tiny();
        p.add_relation(&[(1, &["f", "g"]), (-1, &["h"])]).unwrap();
        assert!(p.add_relation(&[(1, &["f"]), (1, &["h"])]).is_err());
        assert!(p.add_relation(&[(1, &["g", "f"])]).is_err());
        // mixed parity: h.d.h is odd, h is even, and they are not parallel anyway
        assert!(p
            .add_relation(&[(1, &["h", "d", "h"]), (1, &["h"])])
            .is_err());
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.quiver.path_parity(&[2, 3]).unwrap(), Parity::Odd);
    }

    #[test]
    fn json_roundtrip() {
        let mut p = tiny();
        p.add_relation(&[(1, &["f", "g"]), (-1, &["h"])]).unwrap();
        p.add_relation(&[(1, &["h", "d"])]).unwrap();
        let f = p.to_file();
        let text = serde_json::to_string(&f).unwrap();
        let back = CatPresentation::from_file(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.relations, p.relations);
        assert_eq!(back.quiver, p.quiver);
    }
}
