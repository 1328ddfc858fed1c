//! Z/2-graded groups and parity-respecting maps.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::group::{AbGroupNF, GroupHom, Presentation};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u8) -> Parity {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn both() -> [Parity; 2] {
        [Parity::Even, Parity::Odd]
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedGroup {
    pub even: Presentation,
    pub odd: Presentation,
}

impl GradedGroup {
    pub fn new(even: Presentation, odd: Presentation) -> Self {
        GradedGroup { even, odd }
    }

    pub fn zero() -> Self {
        GradedGroup {
            even: Presentation::zero(),
            odd: Presentation::zero(),
        }
    }

    pub fn part(&self, p: Parity) -> &Presentation {
        match p {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    pub fn part_mut(&mut self, p: Parity) -> &mut Presentation {
        match p {
            Parity::Even => &mut self.even,
            Parity::Odd => &mut self.odd,
        }
    }

    /// Degree shift `[1]`: swaps the parts.
    pub fn shift(&self) -> GradedGroup {
        GradedGroup {
            even: self.odd.clone(),
            odd: self.even.clone(),
        }
    }

    pub fn shifted_by(&self, p: Parity) -> GradedGroup {
        match p {
            Parity::Even => self.clone(),
            Parity::Odd => self.shift(),
        }
    }

    pub fn direct_sum(parts: &[&GradedGroup]) -> GradedGroup {
        let ev: Vec<&Presentation> = parts.iter().map(|g| &g.even).collect();
        let od: Vec<&Presentation> = parts.iter().map(|g| &g.odd).collect();
        GradedGroup {
            even: Presentation::direct_sum(&ev),
            odd: Presentation::direct_sum(&od),
        }
    }

    pub fn normal_form(&self) -> GradedNF {
        GradedNF {
            even: self.even.normal_form(),
            odd: self.odd.normal_form(),
        }
    }
}

/// Isomorphism class of a graded group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GradedNF {
    pub even: AbGroupNF,
    pub odd: AbGroupNF,
}

impl GradedNF {
    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }
    pub fn is_free(&self) -> bool {
        self.even.is_free() && self.odd.is_free()
    }
    pub fn direct_sum(&self, other: &GradedNF) -> GradedNF {
        GradedNF {
            even: self.even.direct_sum(&other.even),
            odd: self.odd.direct_sum(&other.odd),
        }
    }
    pub fn shift(&self) -> GradedNF {
        GradedNF {
            even: self.odd.clone(),
            odd: self.even.clone(),
        }
    }
    pub fn part(&self, p: Parity) -> &AbGroupNF {
        match p {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }
}

impl fmt::Display for GradedNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "even: {}, odd: {}", self.even, self.odd)
    }
}

/// A map of graded groups of a fixed degree. `even_part` starts at the even
/// part of the source; `odd_part` at the odd part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedHom {
    pub degree: Parity,
    pub even_part: GroupHom,
    pub odd_part: GroupHom,
}

impl GradedHom {
    pub fn new(degree: Parity, even_part: GroupHom, odd_part: GroupHom) -> Result<Self> {
        for (p, h) in [(Parity::Even, &even_part), (Parity::Odd, &odd_part)] {
            if !h.is_well_defined() {
                return Err(Error::NotWellDefined(format!(
                    "{p} component of a degree-{} map",
                    degree.bit()
                )));
            }
        }
        Ok(GradedHom {
            degree,
            even_part,
            odd_part,
        })
    }

    pub fn new_unchecked(degree: Parity, even_part: GroupHom, odd_part: GroupHom) -> Self {
        GradedHom {
            degree,
            even_part,
            odd_part,
        }
    }

    /// Builds a map from its two matrices; the matrix for source parity `p`
    /// lands in target parity `p + degree`.
    pub fn from_matrices(
        source: &GradedGroup,
        target: &GradedGroup,
        degree: Parity,
        even: IntMatrix,
        odd: IntMatrix,
    ) -> Result<Self> {
        let ev = GroupHom::new(source.even.clone(), target.part(degree).clone(), even)?;
        let od = GroupHom::new(
            source.odd.clone(),
            target.part(Parity::Odd + degree).clone(),
            odd,
        )?;
        Ok(GradedHom {
            degree,
            even_part: ev,
            odd_part: od,
        })
    }

    pub fn zero(source: &GradedGroup, target: &GradedGroup, degree: Parity) -> Self {
        GradedHom {
            degree,
            even_part: GroupHom::zero(source.even.clone(), target.part(degree).clone()),
            odd_part: GroupHom::zero(
                source.odd.clone(),
                target.part(Parity::Odd + degree).clone(),
            ),
        }
    }

    pub fn identity(g: &GradedGroup) -> Self {
        GradedHom {
            degree: Parity::Even,
            even_part: GroupHom::identity(g.even.clone()),
            odd_part: GroupHom::identity(g.odd.clone()),
        }
    }

    pub fn part(&self, p: Parity) -> &GroupHom {
        match p {
            Parity::Even => &self.even_part,
            Parity::Odd => &self.odd_part,
        }
    }

    pub fn source(&self) -> GradedGroup {
        GradedGroup {
            even: self.even_part.source.clone(),
            odd: self.odd_part.source.clone(),
        }
    }

    pub fn target(&self) -> GradedGroup {
        match self.degree {
            Parity::Even => GradedGroup {
                even: self.even_part.target.clone(),
                odd: self.odd_part.target.clone(),
            },
            Parity::Odd => GradedGroup {
                even: self.odd_part.target.clone(),
                odd: self.even_part.target.clone(),
            },
        }
    }

    /// `other ∘ self`; parities add.
    pub fn then(&self, other: &GradedHom) -> Result<GradedHom> {
        let mid_even = self.part(Parity::Even).target.generators;
        let next_from = self.degree;
        if other.part(next_from).source.generators != mid_even {
            return Err(Error::Parity(
                "middle groups of the composite do not match".into(),
            ));
        }
        let ev = self.even_part.then(other.part(self.degree))?;
        let od = self.odd_part.then(other.part(Parity::Odd + self.degree))?;
        Ok(GradedHom {
            degree: self.degree + other.degree,
            even_part: ev,
            odd_part: od,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.even_part.is_zero() && self.odd_part.is_zero()
    }

    pub fn is_well_defined(&self) -> bool {
        self.even_part.is_well_defined() && self.odd_part.is_well_defined()
    }

    pub fn negate(&self) -> GradedHom {
        GradedHom {
            degree: self.degree,
            even_part: self.even_part.negate(),
            odd_part: self.odd_part.negate(),
        }
    }

    /// Sum of two maps with the same source, target and degree.
    pub fn add(&self, other: &GradedHom) -> Result<GradedHom> {
        if self.degree != other.degree {
            return Err(Error::Parity("cannot add maps of different degree".into()));
        }
        let mut out = self.clone();
        out.even_part.matrix = self.even_part.matrix.add(&other.even_part.matrix);
        out.odd_part.matrix = self.odd_part.matrix.add(&other.odd_part.matrix);
        Ok(out)
    }

    pub fn scale(&self, k: &num_bigint::BigInt) -> GradedHom {
        let mut out = self.clone();
        out.even_part.matrix = self.even_part.matrix.scale(k);
        out.odd_part.matrix = self.odd_part.matrix.scale(k);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_swaps_parts() {
        let g = GradedGroup::new(Presentation::free(1), Presentation::zero());
        let s = g.shift();
        assert_eq!(s.even.generators, 0);
        assert_eq!(s.odd.generators, 1);
        assert_eq!(s.shift(), g);
    }

    #[test]
    fn parity_mismatch_is_reported() {
        let a = GradedGroup::new(Presentation::free(1), Presentation::free(2));
        let b = GradedGroup::new(Presentation::free(3), Presentation::zero());
        let f = GradedHom::zero(&a, &b, Parity::Even);
        // f lands in b; composing with a map whose source is a again is a mismatch
        let g = GradedHom::zero(&a, &a, Parity::Even);
        assert!(f.then(&g).is_err());
        assert!(f.then(&GradedHom::zero(&b, &a, Parity::Odd)).is_ok());
    }

    #[test]
    fn direct_sum_of_shifted_entries() {
        // Z[1] + Z[1]^8
        let z1 = GradedGroup::new(Presentation::free(1), Presentation::zero()).shift();
        let parts: Vec<&GradedGroup> = std::iter::repeat(&z1).take(9).collect();
        let nf = GradedGroup::direct_sum(&parts).normal_form();
        assert!(nf.even.is_zero());
        assert_eq!(nf.odd, AbGroupNF::free(9));
    }
}
