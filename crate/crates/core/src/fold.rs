//! Non-simply-laced diagrams as orbit quotients of simply-laced covers.

use serde::Serialize;

use crate::diagram::{DynkinDiagram, Family, FlagRules, LabeledDiagram, VertexSet};
use crate::error::{FusionError, Result};
use crate::weight::weight_fuse_search_by;

/// Cover used for `B_n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum BCover {
    #[default]
    D,
    A,
}

/// A folding `cover -> target`; `projection[v - 1]` is the target vertex of
/// cover vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Folding {
    pub target: (Family, u32),
    pub cover: (Family, u32),
    pub projection: Vec<u32>,
}

impl Folding {
    pub fn for_target(family: Family, rank: u32, b_cover: BCover) -> Result<Self> {
        DynkinDiagram::new(family, rank)?;
        let n = rank;
        let (cover, projection): ((Family, u32), Vec<u32>) = match (family, b_cover) {
            (Family::C, _) => ((Family::A, 2 * n - 1), (1..2 * n).map(|i| i.min(2 * n - i)).collect()),
            (Family::B, BCover::A) => ((Family::A, 2 * n), (1..=2 * n).map(|i| i.min(2 * n + 1 - i)).collect()),
            (Family::B, BCover::D) => ((Family::D, n + 1), (1..=n + 1).map(|i| i.min(n)).collect()),
            (Family::F, _) => ((Family::E, 6), vec![4, 1, 3, 2, 3, 4]),
            (Family::G, _) => ((Family::D, 4), vec![2, 1, 2, 2]),
            (family, _) => return Err(FusionError::UnsupportedFamily { family, op: "folding" }),
        };
        Ok(Folding { target: (family, rank), cover, projection })
    }

    pub fn cover_diagram(&self) -> DynkinDiagram {
        DynkinDiagram::new(self.cover.0, self.cover.1).expect("cover ranks are legal")
    }

    pub fn fiber(&self, target_vertex: u32) -> VertexSet {
        self.preimage(VertexSet::singleton(target_vertex))
    }

    pub fn preimage(&self, set: VertexSet) -> VertexSet {
        self.projection.iter().enumerate().filter(|(_, t)| set.contains(**t)).map(|(i, _)| i as u32 + 1).collect()
    }

    pub fn project(&self, set: VertexSet) -> VertexSet {
        set.iter().map(|v| self.projection[(v - 1) as usize]).collect()
    }

    /// True when `set` is a union of fibres.
    pub fn is_stable(&self, set: VertexSet) -> bool {
        self.preimage(self.project(set)) == set
    }
}

pub fn unfold(ld: &LabeledDiagram) -> Result<(LabeledDiagram, Folding)> {
    unfold_with(ld, BCover::default())
}

pub fn unfold_with(ld: &LabeledDiagram, b_cover: BCover) -> Result<(LabeledDiagram, Folding)> {
    let f = Folding::for_target(ld.family(), ld.rank(), b_cover)?;
    let cover = LabeledDiagram::new(f.cover_diagram(), f.preimage(ld.plus()), f.preimage(ld.minus()))?;
    Ok((cover, f))
}

pub fn fold_back(j: VertexSet, f: &Folding) -> Result<VertexSet> {
    if !f.is_stable(j) {
        return Err(FusionError::NotStable(format!("{j} is not a union of orbits")));
    }
    Ok(f.project(j))
}

pub fn fold_fuse(ld: &LabeledDiagram) -> Result<VertexSet> {
    fold_fuse_with(ld, BCover::default())
}

/// Unfolds, runs the weight algorithm on the cover trying tied selections in
/// the order of their images in the target, and folds back the first stable
/// outcome.
pub fn fold_fuse_with(ld: &LabeledDiagram, b_cover: BCover) -> Result<VertexSet> {
    let (cover, f) = unfold_with(ld, b_cover)?;
    let found = weight_fuse_search_by(&cover, &FlagRules::default(), &|s| f.project(s), &|j| f.is_stable(j))?;
    match found {
        Some(j) => fold_back(j, &f),
        None => Err(FusionError::Consistency(format!("no stable outcome on the cover of {ld}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn ld(f: Family, n: u32, plus: &[u32], minus: &[u32]) -> LabeledDiagram {
        LabeledDiagram::from_lists(f, n, plus, minus).unwrap()
    }

    #[test]
    fn unfold_examples() {
        let (c, _) = unfold(&ld(Family::C, 3, &[1, 2], &[3])).unwrap();
        assert_eq!((c.family(), c.rank(), c.plus(), c.minus()), (Family::A, 5, set(&[1, 2, 4, 5]), set(&[3])));
        let (c, _) = unfold(&ld(Family::B, 3, &[1, 2], &[3])).unwrap();
        assert_eq!((c.family(), c.rank(), c.plus(), c.minus()), (Family::D, 4, set(&[1, 2]), set(&[3, 4])));
        let (c, _) = unfold_with(&ld(Family::B, 3, &[1, 2], &[3]), BCover::A).unwrap();
        assert_eq!((c.family(), c.rank(), c.plus(), c.minus()), (Family::A, 6, set(&[1, 2, 5, 6]), set(&[3, 4])));
        let (c, _) = unfold(&ld(Family::G, 2, &[2], &[1])).unwrap();
        assert_eq!((c.family(), c.plus(), c.minus()), (Family::D, set(&[1, 3, 4]), set(&[2])));
        let (c, _) = unfold(&ld(Family::F, 4, &[1, 3], &[2, 4])).unwrap();
        assert_eq!((c.family(), c.plus(), c.minus()), (Family::E, set(&[2, 3, 5]), set(&[1, 4, 6])));
    }

    #[test]
    fn fold_back_examples() {
        let c3 = Folding::for_target(Family::C, 3, BCover::D).unwrap();
        assert_eq!(fold_back(set(&[1, 2, 4, 5]), &c3).unwrap(), set(&[1, 2]));
        let f4 = Folding::for_target(Family::F, 4, BCover::D).unwrap();
        assert_eq!(fold_back(set(&[2, 3, 5]), &f4).unwrap(), set(&[1, 3]));
        let g2 = Folding::for_target(Family::G, 2, BCover::D).unwrap();
        assert_eq!(fold_back(set(&[1, 3, 4]), &g2).unwrap(), set(&[2]));
        assert!(matches!(fold_back(set(&[1, 3]), &g2), Err(FusionError::NotStable(_))));
    }

    #[test]
    fn fold_fuse_examples() {
        assert_eq!(fold_fuse(&ld(Family::C, 3, &[1, 2], &[3])).unwrap(), set(&[1, 2]));
        assert_eq!(fold_fuse_with(&ld(Family::B, 3, &[1, 2], &[3]), BCover::A).unwrap(), set(&[1, 2]));
        assert_eq!(fold_fuse(&ld(Family::B, 3, &[1, 2], &[3])).unwrap(), set(&[1, 2]));
        assert_eq!(fold_fuse(&ld(Family::F, 4, &[1, 3], &[2, 4])).unwrap(), set(&[1, 3]));
        assert_eq!(fold_fuse(&ld(Family::G, 2, &[2], &[1])).unwrap(), set(&[2]));
    }

    #[test]
    fn f4_alternative_is_conjugate() {
        let d = DynkinDiagram::new(Family::F, 4).unwrap();
        assert!(crate::conjugacy::is_conjugate(&d, set(&[1, 3]), set(&[1, 4])));
    }

    #[test]
    fn projection_inverts_preimage() {
        for (fam, n) in [(Family::B, 2), (Family::B, 4), (Family::C, 2), (Family::C, 4), (Family::F, 4), (Family::G, 2)]
        {
            for cover in [BCover::D, BCover::A] {
                let f = Folding::for_target(fam, n, cover).unwrap();
                for bits in 0..(1u64 << n) {
                    let s = VertexSet::from_bits(bits);
                    assert_eq!(f.project(f.preimage(s)), s);
                    assert!(f.is_stable(f.preimage(s)));
                }
            }
        }
    }
}
