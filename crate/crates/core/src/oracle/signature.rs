use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conjugacy::class_representatives;
use crate::diagram::{DynkinDiagram, Family, LabeledDiagram, VertexSet};
use crate::error::{FusionError, Result};
use crate::oracle::chevalley::ChevalleyAlgebra;
use crate::oracle::matrix::{echelon_basis, IntMatrix};
use crate::oracle::roots::RootSystem;
use crate::partition::Partition;

pub const CONVENTION: &str = "extraspecial-height-v1";

/// `ranks[k] = rank(M^k)`, ending with the first zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RankSignature {
    pub ranks: Vec<usize>,
}

impl RankSignature {
    /// Ranks of successive powers computed directly.
    pub fn of_powers(m: &IntMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(FusionError::Precondition("matrix is not square".into()));
        }
        let mut ranks = vec![m.rows()];
        let mut power = m.clone();
        loop {
            let r = power.rank();
            if r == *ranks.last().unwrap() && r > 0 {
                return Err(FusionError::NotNilpotent);
            }
            ranks.push(r);
            if r == 0 {
                return Ok(RankSignature { ranks });
            }
            power = power.mul(m);
        }
    }

    /// Ranks of powers of a matrix that maps grade `d` into grade `d + 1`,
    /// computed one graded block at a time.
    pub fn graded(m: &IntMatrix, degrees: &[i32]) -> Result<Self> {
        let dim = m.rows();
        if !m.is_square() || degrees.len() != dim {
            return Err(FusionError::Precondition("grading does not fit the matrix".into()));
        }
        let mut blocks: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (i, &d) in degrees.iter().enumerate() {
            blocks.entry(d).or_default().push(i);
        }
        let mut maps: BTreeMap<i32, Vec<Vec<BigInt>>> = BTreeMap::new();
        for (r, c, v) in m.entries() {
            if degrees[r] != degrees[c] + 1 {
                return Err(FusionError::Precondition("matrix does not raise the grading by one".into()));
            }
            let dc = degrees[c];
            let src = &blocks[&dc];
            let tgt = &blocks[&(dc + 1)];
            let block = maps.entry(dc).or_insert_with(|| vec![vec![BigInt::zero(); src.len()]; tgt.len()]);
            let (ti, si) = (tgt.binary_search(&r).unwrap(), src.binary_search(&c).unwrap());
            block[ti][si] = v.clone();
        }
        let mut ranks = vec![dim];
        let mut images: Vec<(i32, Vec<Vec<BigInt>>)> = blocks
            .iter()
            .map(|(&d, idx)| {
                let basis =
                    (0..idx.len()).map(|k| (0..idx.len()).map(|j| BigInt::from(u8::from(j == k))).collect()).collect();
                (d, basis)
            })
            .collect();
        loop {
            let mut next = Vec::new();
            for (d, vecs) in images {
                let Some(block) = maps.get(&d) else {
                    continue;
                };
                let mapped: Vec<Vec<BigInt>> = vecs
                    .iter()
                    .map(|v| {
                        block
                            .iter()
                            .map(|row| row.iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
                            .collect()
                    })
                    .collect();
                let basis = echelon_basis(mapped);
                if !basis.is_empty() {
                    next.push((d + 1, basis));
                }
            }
            let r: usize = next.iter().map(|(_, b)| b.len()).sum();
            if r == *ranks.last().unwrap() && r > 0 {
                return Err(FusionError::NotNilpotent);
            }
            ranks.push(r);
            if r == 0 {
                return Ok(RankSignature { ranks });
            }
            images = next;
        }
    }

    pub fn kernel_dim(&self) -> usize {
        self.ranks[0] - self.ranks.get(1).copied().unwrap_or(0)
    }

    /// Multiplicity of part `j` is `r_{j-1} - 2 r_j + r_{j+1}`.
    pub fn jordan_type(&self) -> Partition {
        let r = |k: usize| self.ranks.get(k).copied().unwrap_or(0) as i64;
        let mut parts = Vec::new();
        for j in 1..self.ranks.len() {
            let mult = r(j - 1) - 2 * r(j) + r(j + 1);
            parts.extend(std::iter::repeat_n(j as u32, mult as usize));
        }
        Partition::new(parts)
    }
}

/// Adjoint model of a simply-laced diagram.
#[derive(Clone, Debug)]
pub struct AdjointOracle {
    pub algebra: ChevalleyAlgebra,
}

impl AdjointOracle {
    pub fn new(d: &DynkinDiagram) -> Result<Self> {
        Ok(AdjointOracle { algebra: ChevalleyAlgebra::new(RootSystem::of(d))? })
    }

    pub fn signature(&self, plus: VertexSet, minus: VertexSet) -> Result<RankSignature> {
        let m = self.algebra.ad_matrix(plus, minus);
        RankSignature::graded(&m, &self.algebra.degrees(plus, minus))
    }

    pub fn signature_of(&self, ld: &LabeledDiagram) -> Result<RankSignature> {
        self.signature(ld.plus(), ld.minus())
    }

    /// Signature of the regular nilpotent of the Levi of `j`.
    pub fn levi_signature(&self, j: VertexSet) -> Result<RankSignature> {
        self.signature(j, VertexSet::EMPTY)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureEntry {
    pub j: VertexSet,
    pub ranks: Vec<usize>,
}

/// Signatures of one representative per conjugacy class of subsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureTable {
    pub version: u32,
    pub family: Family,
    pub rank: u32,
    pub convention: String,
    pub entries: Vec<SignatureEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignatureMatch {
    Unique(VertexSet),
    Ambiguous(Vec<VertexSet>),
}

impl SignatureTable {
    pub fn build(d: &DynkinDiagram) -> Result<Self> {
        let oracle = AdjointOracle::new(d)?;
        let reps = class_representatives(d)?;
        let entries = reps
            .par_iter()
            .map(|&j| Ok(SignatureEntry { j, ranks: oracle.levi_signature(j)?.ranks }))
            .collect::<Result<Vec<_>>>()?;
        Ok(SignatureTable { version: 1, family: d.family(), rank: d.rank(), convention: CONVENTION.into(), entries })
    }

    pub fn cache_path(dir: &Path, family: Family, rank: u32) -> PathBuf {
        dir.join(format!("signatures-{family}{rank}-{CONVENTION}.json"))
    }

    /// Reads the cached table under `dir` if present and current, otherwise
    /// builds it and writes it there.
    pub fn load_or_build(d: &DynkinDiagram, dir: Option<&Path>) -> Result<Self> {
        let Some(dir) = dir else {
            return Self::build(d);
        };
        let path = Self::cache_path(dir, d.family(), d.rank());
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(t) = serde_json::from_str::<SignatureTable>(&text) {
                if t.family == d.family() && t.rank == d.rank() && t.convention == CONVENTION && t.version == 1 {
                    return Ok(t);
                }
            }
        }
        let table = Self::build(d)?;
        fs::create_dir_all(dir).map_err(|e| FusionError::Cache(e.to_string()))?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let text = serde_json::to_string(&table).map_err(|e| FusionError::Cache(e.to_string()))?;
        fs::write(&tmp, text).map_err(|e| FusionError::Cache(e.to_string()))?;
        fs::rename(&tmp, &path).map_err(|e| FusionError::Cache(e.to_string()))?;
        Ok(table)
    }

    pub fn matches(&self, sig: &RankSignature) -> Vec<VertexSet> {
        self.entries.iter().filter(|e| e.ranks == sig.ranks).map(|e| e.j).collect()
    }

    /// Groups of representatives sharing one signature.
    pub fn collisions(&self) -> Vec<Vec<VertexSet>> {
        let mut by: BTreeMap<&[usize], Vec<VertexSet>> = BTreeMap::new();
        for e in &self.entries {
            by.entry(&e.ranks).or_default().push(e.j);
        }
        by.into_values().filter(|v| v.len() > 1).collect()
    }
}

/// Identifies the fusion class by comparing adjoint rank signatures.
pub fn signature_fuse(ld: &LabeledDiagram, oracle: &AdjointOracle, table: &SignatureTable) -> Result<SignatureMatch> {
    if table.family != ld.family() || table.rank != ld.rank() {
        return Err(FusionError::Precondition("signature table is for another diagram".into()));
    }
    let sig = oracle.signature_of(ld)?;
    let hits = table.matches(&sig);
    match hits.len() {
        0 => Err(FusionError::Falsified(ld.to_string())),
        1 => Ok(SignatureMatch::Unique(hits[0])),
        _ => Ok(SignatureMatch::Ambiguous(hits)),
    }
}
