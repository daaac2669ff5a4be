//! One entry point over all fusion methods.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::conjugacy::{canonicalize, closure, is_conjugate, levi_type, ConjugacyTable, TABLE_RANK_LIMIT};
use crate::diagram::{DynkinDiagram, Family, LabeledDiagram, VertexSet};
use crate::epattern::epattern_fuse;
use crate::error::{FusionError, Result};
use crate::fold::{fold_fuse, unfold};
use crate::oracle::{
    classical_partition, regular_partition, signature_fuse, AdjointOracle, SignatureMatch, SignatureTable,
};
use crate::partition::{labeled_partition, partition_fuse, partition_to_j, Partition};
use crate::weight::weight_fuse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Weight,
    Partition,
    EPattern,
    Fold,
    Oracle,
    Auto,
}

impl Method {
    pub const ALL: [Method; 6] =
        [Method::Weight, Method::Partition, Method::EPattern, Method::Fold, Method::Oracle, Method::Auto];

    pub fn name(self) -> &'static str {
        match self {
            Method::Weight => "weight",
            Method::Partition => "partition",
            Method::EPattern => "epattern",
            Method::Fold => "fold",
            Method::Oracle => "oracle",
            Method::Auto => "auto",
        }
    }

    /// The concrete method `Auto` stands for.
    pub fn resolve(self, family: Family) -> Method {
        match (self, family) {
            (Method::Auto, Family::A | Family::D) => Method::Partition,
            (Method::Auto, Family::E) => Method::Weight,
            (Method::Auto, _) => Method::Fold,
            (m, _) => m,
        }
    }

    pub fn supports(self, family: Family) -> bool {
        match self.resolve(family) {
            Method::Weight | Method::EPattern => family.is_simply_laced(),
            Method::Partition => matches!(family, Family::A | Family::D),
            Method::Fold => !family.is_simply_laced(),
            _ => true,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = FusionError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.to_ascii_lowercase())
            .ok_or_else(|| FusionError::Precondition(format!("unknown method {s:?}")))
    }
}

/// Result of one fusion. `alternatives` lists further classes the oracle
/// cannot separate from `j` (very even orbits in type D).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FusionOutcome {
    pub method: Method,
    pub j: VertexSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_j: Option<VertexSet>,
    pub levi_type: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<VertexSet>,
}

impl FusionOutcome {
    /// True when `other` is conjugate to `j` or to one of the alternatives.
    pub fn admits(&self, d: &DynkinDiagram, other: VertexSet) -> bool {
        std::iter::once(self.j).chain(self.alternatives.iter().copied()).any(|j| is_conjugate(d, j, other))
    }
}

type Bundle = Arc<(AdjointOracle, SignatureTable)>;
type ClassicalBundle = Arc<(ConjugacyTable, Vec<(VertexSet, Partition)>)>;

/// Fusion front end with a lazily filled cache of signature tables.
#[derive(Debug, Default)]
pub struct Fuser {
    cache_dir: Option<PathBuf>,
    tables: Mutex<HashMap<(Family, u32), Bundle>>,
    classical: Mutex<HashMap<(Family, u32), ClassicalBundle>>,
}

impl Fuser {
    pub fn new(cache_dir: Option<PathBuf>) -> Self {
        Fuser { cache_dir, ..Fuser::default() }
    }

    /// Conjugacy table of `d` with the regular partition of each class.
    pub fn classical_bundle(&self, d: &DynkinDiagram) -> Result<ClassicalBundle> {
        let key = (d.family(), d.rank());
        if let Some(b) = self.classical.lock().expect("class cache lock").get(&key) {
            return Ok(b.clone());
        }
        let table = ConjugacyTable::new(d)?;
        let reps = table
            .representatives()
            .iter()
            .map(|&rep| Ok((rep, regular_partition(d.family(), d.rank(), rep)?)))
            .collect::<Result<Vec<_>>>()?;
        let bundle = Arc::new((table, reps));
        self.classical.lock().expect("class cache lock").insert(key, bundle.clone());
        Ok(bundle)
    }

    pub fn signature_bundle(&self, d: &DynkinDiagram) -> Result<Bundle> {
        let key = (d.family(), d.rank());
        let mut tables = self.tables.lock().expect("signature cache lock");
        if let Some(b) = tables.get(&key) {
            return Ok(b.clone());
        }
        let table = SignatureTable::load_or_build(d, self.cache_dir.as_deref())?;
        let bundle = Arc::new((AdjointOracle::new(d)?, table));
        tables.insert(key, bundle.clone());
        Ok(bundle)
    }

    pub fn fuse(&self, ld: &LabeledDiagram, method: Method) -> Result<FusionOutcome> {
        let family = ld.family();
        let resolved = method.resolve(family);
        if !method.supports(family) {
            return Err(FusionError::UnsupportedFamily { family, op: resolved.name() });
        }
        let mut alternatives = Vec::new();
        let j = match resolved {
            Method::Weight => {
                let j = weight_fuse(ld)?;
                if method == Method::Auto && family == Family::E {
                    let check = epattern_fuse(ld)?;
                    if !is_conjugate(ld.diagram(), j, check) {
                        return Err(FusionError::Consistency(format!(
                            "weight gives {j} but local patterns give {check} on {ld}"
                        )));
                    }
                }
                j
            }
            Method::Partition => partition_fuse(ld)?,
            Method::EPattern => epattern_fuse(ld)?,
            Method::Fold => fold_fuse(ld)?,
            Method::Oracle => {
                let mut found = self.oracle_classes(ld)?;
                let j = found.remove(0);
                alternatives = found;
                j
            }
            Method::Auto => unreachable!("resolved above"),
        };
        let d = ld.diagram();
        let partition = match family {
            Family::A | Family::D => Some(labeled_partition(ld)?.parts().to_vec()),
            _ => None,
        };
        Ok(FusionOutcome {
            method: resolved,
            j,
            canonical_j: (ld.rank() <= TABLE_RANK_LIMIT).then(|| canonicalize(d, j)),
            levi_type: levi_type(d, j),
            partition,
            alternatives,
        })
    }

    /// Representatives of every class consistent with the oracle, least
    /// first.
    fn oracle_classes(&self, ld: &LabeledDiagram) -> Result<Vec<VertexSet>> {
        let d = ld.diagram();
        match ld.family() {
            Family::A | Family::D => {
                let target = classical_partition(ld)?;
                if d.rank() > TABLE_RANK_LIMIT {
                    return Ok(vec![partition_to_j(&target, ld.family(), ld.rank())?]);
                }
                let bundle = self.classical_bundle(d)?;
                let hits: Vec<VertexSet> = bundle.1.iter().filter(|(_, p)| *p == target).map(|(j, _)| *j).collect();
                if hits.is_empty() {
                    return Err(FusionError::Falsified(ld.to_string()));
                }
                Ok(hits)
            }
            Family::E => {
                let bundle = self.signature_bundle(d)?;
                match signature_fuse(ld, &bundle.0, &bundle.1)? {
                    SignatureMatch::Unique(j) => Ok(vec![j]),
                    SignatureMatch::Ambiguous(js) => Ok(js),
                }
            }
            _ => {
                let (cover, f) = unfold(ld)?;
                let cd = cover.diagram();
                let mut folded = BTreeSet::new();
                for class in self.oracle_classes(&cover)? {
                    let stable = closure(cd, class).into_iter().filter(|s| f.is_stable(*s));
                    folded.extend(stable.map(|s| canonicalize(d, f.project(s))));
                }
                if folded.is_empty() {
                    return Err(FusionError::Consistency(format!("no stable member in the oracle class of {cover}")));
                }
                Ok(folded.into_iter().collect())
            }
        }
    }
}

/// Fusion without a disk cache.
pub fn fuse(ld: &LabeledDiagram, method: Method) -> Result<FusionOutcome> {
    Fuser::default().fuse(ld, method)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("nope".parse::<Method>().is_err());
    }

    #[test]
    fn auto_dispatch() {
        let d6 = LabeledDiagram::from_lists(Family::D, 6, &[3, 4, 5], &[1, 2, 6]).unwrap();
        let out = fuse(&d6, Method::Auto).unwrap();
        assert_eq!(out.method, Method::Partition);
        assert_eq!(out.partition, Some(vec![4, 4, 2, 2]));
        let g2 = LabeledDiagram::from_lists(Family::G, 2, &[2], &[1]).unwrap();
        let out = fuse(&g2, Method::Auto).unwrap();
        assert_eq!((out.method, out.j), (Method::Fold, set(&[2])));
        let e8 = LabeledDiagram::from_lists(Family::E, 8, &[1, 3, 5, 6], &[2, 4, 7, 8]).unwrap();
        assert_eq!(fuse(&e8, Method::Auto).unwrap().j, set(&[1, 2, 3, 5, 6, 8]));
        assert!(matches!(fuse(&g2, Method::Weight), Err(FusionError::UnsupportedFamily { .. })));
    }

    #[test]
    fn oracle_on_every_family() {
        let cases = [
            LabeledDiagram::from_lists(Family::A, 3, &[1, 3], &[2]).unwrap(),
            LabeledDiagram::from_lists(Family::D, 4, &[1, 2, 3], &[4]).unwrap(),
            LabeledDiagram::from_lists(Family::E, 6, &[1, 3, 5], &[2, 4, 6]).unwrap(),
            LabeledDiagram::from_lists(Family::F, 4, &[1, 3], &[2, 4]).unwrap(),
            LabeledDiagram::from_lists(Family::C, 3, &[1, 2], &[3]).unwrap(),
        ];
        for ld in cases {
            let auto = fuse(&ld, Method::Auto).unwrap();
            let oracle = fuse(&ld, Method::Oracle).unwrap();
            assert!(oracle.admits(ld.diagram(), auto.j), "{ld}");
        }
    }

    #[test]
    fn very_even_alternatives() {
        let d4 = LabeledDiagram::from_lists(Family::D, 4, &[1, 2, 3], &[4]).unwrap();
        let out = fuse(&d4, Method::Oracle).unwrap();
        assert_eq!(out.alternatives.len(), 1);
        assert!(!is_conjugate(d4.diagram(), out.j, out.alternatives[0]));
    }
}
