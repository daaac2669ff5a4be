//! Dynkin diagrams, labeled diagrams, components and chunks.
//!
//! Vertices use Bourbaki numbering and are stored as bit sets, so every
//! diagram has rank at most [`MAX_RANK`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};

pub const MAX_RANK: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub const ALL: [Family; 7] = [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G];

    pub fn is_simply_laced(self) -> bool {
        matches!(self, Family::A | Family::D | Family::E)
    }

    pub fn legal_ranks(self) -> &'static str {
        match self {
            Family::A => "at least 1",
            Family::B | Family::C | Family::D => "at least 2",
            Family::E => "6, 7, or 8",
            Family::F => "4",
            Family::G => "2",
        }
    }

    pub fn accepts_rank(self, rank: u32) -> bool {
        if rank > MAX_RANK {
            return false;
        }
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C | Family::D => rank >= 2,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = FusionError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            "F" | "f" => Ok(Family::F),
            "G" | "g" => Ok(Family::G),
            other => Err(FusionError::UnknownFamily(other.to_string())),
        }
    }
}

/// A set of vertex ids in `1..=64`.
///
/// Ordering is lexicographic on the ascending vertex lists.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The set `{1, ..., n}`.
    pub fn full(n: u32) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: u32) -> Self {
        debug_assert!((1..=MAX_RANK).contains(&v));
        VertexSet(1u64 << (v - 1))
    }

    pub fn contains(self, v: u32) -> bool {
        (1..=MAX_RANK).contains(&v) && self.0 & (1u64 << (v - 1)) != 0
    }

    pub fn insert(&mut self, v: u32) {
        self.0 |= Self::singleton(v).0;
    }

    pub fn remove(&mut self, v: u32) {
        self.0 &= !Self::singleton(v).0;
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn min(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros())
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() + 1;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<u32> {
        self.iter().collect()
    }

    /// Image under a vertex permutation given as `perm[v - 1] = image of v`.
    pub fn map(self, perm: &[u32]) -> Self {
        self.iter().map(|v| perm[(v - 1) as usize]).collect()
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        if let Some(bad) = v.iter().find(|&&x| x == 0 || x > MAX_RANK) {
            return Err(serde::de::Error::custom(format!("vertex {bad} out of range")));
        }
        Ok(v.into_iter().collect())
    }
}

/// An edge of a Dynkin diagram. For multiple bonds `short` names the end
/// the arrow points to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bond {
    pub a: u32,
    pub b: u32,
    pub multiplicity: u8,
    pub short: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DynkinDiagram {
    family: Family,
    rank: u32,
    bonds: Vec<Bond>,
    adjacency: Vec<VertexSet>,
}

impl DynkinDiagram {
    pub fn new(family: Family, rank: u32) -> Result<Self> {
        if !family.accepts_rank(rank) {
            return Err(FusionError::InvalidRank { family, rank, legal: family.legal_ranks() });
        }
        let n = rank;
        let single = |a, b| Bond { a, b, multiplicity: 1, short: None };
        let mut bonds = Vec::new();
        match family {
            Family::A => bonds.extend((1..n).map(|i| single(i, i + 1))),
            Family::B | Family::C => {
                bonds.extend((1..n - 1).map(|i| single(i, i + 1)));
                let short = if family == Family::B { n } else { n - 1 };
                bonds.push(Bond { a: n - 1, b: n, multiplicity: 2, short: Some(short) });
            }
            Family::D => {
                if n >= 3 {
                    bonds.extend((1..n - 1).map(|i| single(i, i + 1)));
                    bonds.push(single(n - 2, n));
                }
            }
            Family::E => {
                bonds.push(single(1, 3));
                bonds.extend((3..n).map(|i| single(i, i + 1)));
                bonds.push(single(2, 4));
            }
            Family::F => {
                bonds.push(single(1, 2));
                bonds.push(Bond { a: 2, b: 3, multiplicity: 2, short: Some(3) });
                bonds.push(single(3, 4));
            }
            Family::G => bonds.push(Bond { a: 1, b: 2, multiplicity: 3, short: Some(1) }),
        }
        let mut adjacency = vec![VertexSet::EMPTY; n as usize];
        for b in &bonds {
            adjacency[(b.a - 1) as usize].insert(b.b);
            adjacency[(b.b - 1) as usize].insert(b.a);
        }
        Ok(DynkinDiagram { family, rank, bonds, adjacency })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.rank)
    }

    pub fn is_simply_laced(&self) -> bool {
        self.family.is_simply_laced()
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    pub fn neighbors(&self, v: u32) -> VertexSet {
        self.adjacency[(v - 1) as usize]
    }

    /// Vertices outside `set` adjacent to some vertex of `set`.
    pub fn boundary(&self, set: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for v in set.iter() {
            out = out.union(self.neighbors(v));
        }
        out.difference(set)
    }

    pub fn bond(&self, a: u32, b: u32) -> Option<&Bond> {
        self.bonds.iter().find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    /// Connected components of the subgraph induced on `set`, ordered by
    /// least vertex.
    pub fn components(&self, set: VertexSet) -> Vec<VertexSet> {
        let mut rest = set;
        let mut out = Vec::new();
        while let Some(seed) = rest.min() {
            let mut comp = VertexSet::singleton(seed);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.neighbors(v));
                }
                frontier = next.intersection(set).difference(comp);
                comp = comp.union(frontier);
            }
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self, set: VertexSet) -> bool {
        self.components(set).len() == 1
    }

    /// Cartan matrix with `c[i][j] = <alpha_j, alpha_i^vee>`, zero-indexed.
    pub fn cartan(&self) -> Vec<Vec<i32>> {
        let n = self.rank as usize;
        let mut c = vec![vec![0i32; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for b in &self.bonds {
            let (a, bb) = ((b.a - 1) as usize, (b.b - 1) as usize);
            match b.short {
                None => {
                    c[a][bb] = -1;
                    c[bb][a] = -1;
                }
                Some(s) => {
                    let (s, l) = if s == b.a { (a, bb) } else { (bb, a) };
                    c[s][l] = -(b.multiplicity as i32);
                    c[l][s] = -1;
                }
            }
        }
        c
    }

    /// Abstract type of a connected vertex subset with its local Bourbaki
    /// numbering.
    pub fn classify(&self, set: VertexSet) -> Result<Shape> {
        if set.is_empty() || !self.is_connected(set) {
            return Err(FusionError::Precondition(format!("{set} is not a connected subdiagram")));
        }
        let k = set.len();
        let deg = |v: u32| self.neighbors(v).intersection(set).len();
        let multi: Vec<&Bond> =
            self.bonds.iter().filter(|b| b.multiplicity > 1 && set.contains(b.a) && set.contains(b.b)).collect();
        let branch: Vec<u32> = set.iter().filter(|&v| deg(v) == 3).collect();
        let walk = |start: u32, avoid: Option<u32>| -> Vec<u32> {
            let mut path = vec![start];
            let mut prev = avoid;
            let mut cur = start;
            loop {
                let mut nbrs = self.neighbors(cur).intersection(set);
                if let Some(p) = prev {
                    nbrs.remove(p);
                }
                if let Some(b) = avoid {
                    nbrs.remove(b);
                }
                match nbrs.min() {
                    Some(n) if nbrs.len() == 1 => {
                        path.push(n);
                        prev = Some(cur);
                        cur = n;
                    }
                    _ => break,
                }
            }
            path
        };
        let bad = || FusionError::Consistency(format!("{set} is not of finite type"));

        if branch.is_empty() {
            let start = if k == 1 { set.min().unwrap() } else { set.iter().find(|&v| deg(v) == 1).ok_or_else(bad)? };
            let mut order = walk(start, None);
            if order.len() as u32 != k {
                return Err(bad());
            }
            if multi.is_empty() {
                return Ok(Shape { family: Family::A, rank: k, order });
            }
            let bond = multi[0];
            let pos = |v: u32| order.iter().position(|&x| x == v).unwrap();
            let short = bond.short.unwrap();
            if bond.multiplicity == 3 {
                if order[0] != short {
                    order.reverse();
                }
                return Ok(Shape { family: Family::G, rank: 2, order });
            }
            let lo = pos(bond.a).min(pos(bond.b));
            if k == 4 && lo == 1 {
                if order[1] == short {
                    order.reverse();
                }
                return Ok(Shape { family: Family::F, rank: 4, order });
            }
            if (k == 2 && order[1] != short) || (k > 2 && lo == 0) {
                order.reverse();
            }
            let family = if order[order.len() - 1] == short { Family::B } else { Family::C };
            return Ok(Shape { family, rank: k, order });
        }

        if branch.len() != 1 || !multi.is_empty() {
            return Err(bad());
        }
        let b = branch[0];
        let mut arms: Vec<Vec<u32>> = self.neighbors(b).intersection(set).iter().map(|u| walk(u, Some(b))).collect();
        arms.sort_by_key(|a| (a.len(), *a.last().unwrap()));
        let lens: Vec<usize> = arms.iter().map(Vec::len).collect();
        match lens.as_slice() {
            [1, 1, l] => {
                let (chain, tips) =
                    if *l == 1 { (&arms[0], [arms[1][0], arms[2][0]]) } else { (&arms[2], [arms[0][0], arms[1][0]]) };
                let mut order: Vec<u32> = chain.iter().rev().copied().collect();
                order.push(b);
                order.extend(tips);
                Ok(Shape { family: Family::D, rank: k, order })
            }
            [1, 2, 2..=4] => {
                let mut order = vec![arms[1][1], arms[0][0], arms[1][0], b];
                order.extend(arms[2].iter().copied());
                Ok(Shape { family: Family::E, rank: k, order })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// Abstract type of a connected subdiagram; `order[i]` is the ambient
/// vertex carrying local label `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub family: Family,
    pub rank: u32,
    pub order: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledDiagram {
    diagram: DynkinDiagram,
    plus: VertexSet,
    minus: VertexSet,
}

impl LabeledDiagram {
    pub fn new(diagram: DynkinDiagram, plus: VertexSet, minus: VertexSet) -> Result<Self> {
        let all = diagram.vertices();
        if let Some(v) = plus.union(minus).difference(all).min() {
            return Err(FusionError::VertexOutOfRange { vertex: v, rank: diagram.rank });
        }
        if let Some(v) = plus.intersection(minus).min() {
            return Err(FusionError::LabelsOverlap(v));
        }
        Ok(LabeledDiagram { diagram, plus, minus })
    }

    pub fn from_lists(family: Family, rank: u32, plus: &[u32], minus: &[u32]) -> Result<Self> {
        let diagram = DynkinDiagram::new(family, rank)?;
        for &v in plus.iter().chain(minus) {
            if v == 0 || v > rank {
                return Err(FusionError::VertexOutOfRange { vertex: v, rank });
            }
        }
        if let Some(&v) = plus.iter().find(|v| minus.contains(v)) {
            return Err(FusionError::LabelsOverlap(v));
        }
        Self::new(diagram, plus.iter().copied().collect(), minus.iter().copied().collect())
    }

    /// Every vertex labeled: `plus` given, `minus` its complement.
    pub fn full(diagram: DynkinDiagram, plus: VertexSet) -> Result<Self> {
        let minus = diagram.vertices().difference(plus);
        Self::new(diagram, plus, minus)
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn family(&self) -> Family {
        self.diagram.family
    }

    pub fn rank(&self) -> u32 {
        self.diagram.rank
    }

    pub fn plus(&self) -> VertexSet {
        self.plus
    }

    pub fn minus(&self) -> VertexSet {
        self.minus
    }

    pub fn labeled(&self) -> VertexSet {
        self.plus.union(self.minus)
    }

    pub fn is_full(&self) -> bool {
        self.labeled() == self.diagram.vertices()
    }

    pub fn sign(&self, v: u32) -> Option<Sign> {
        if self.plus.contains(v) {
            Some(Sign::Plus)
        } else if self.minus.contains(v) {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn with_sign(&self, sign: Sign) -> VertexSet {
        match sign {
            Sign::Plus => self.plus,
            Sign::Minus => self.minus,
        }
    }

    /// Keeps only the labels on `keep`.
    pub fn restrict(&self, keep: VertexSet) -> Self {
        LabeledDiagram {
            diagram: self.diagram.clone(),
            plus: self.plus.intersection(keep),
            minus: self.minus.intersection(keep),
        }
    }

    pub fn unlabel(&self, v: u32) -> Self {
        let mut out = self.clone();
        out.plus.remove(v);
        out.minus.remove(v);
        out
    }

    pub fn flip(&self) -> Self {
        LabeledDiagram { diagram: self.diagram.clone(), plus: self.minus, minus: self.plus }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&LabeledDiagramJson::from(self)).expect("plain struct serializes")
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: LabeledDiagramJson =
            serde_json::from_str(text).map_err(|e| FusionError::MalformedJson(e.to_string()))?;
        raw.into_labeled()
    }
}

impl fmt::Display for LabeledDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} +{} -{}", self.diagram, self.plus, self.minus)
    }
}

pub fn flip_labels(ld: &LabeledDiagram) -> LabeledDiagram {
    ld.flip()
}

pub fn parse_json(text: &str) -> Result<LabeledDiagram> {
    LabeledDiagram::parse_json(text)
}

pub fn to_json(ld: &LabeledDiagram) -> String {
    ld.to_json()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDiagramJson {
    pub family: String,
    pub rank: u32,
    #[serde(default)]
    pub plus: Vec<u32>,
    #[serde(default)]
    pub minus: Vec<u32>,
}

impl LabeledDiagramJson {
    pub fn into_labeled(self) -> Result<LabeledDiagram> {
        let family: Family = self.family.parse()?;
        LabeledDiagram::from_lists(family, self.rank, &self.plus, &self.minus)
    }
}

impl From<&LabeledDiagram> for LabeledDiagramJson {
    fn from(ld: &LabeledDiagram) -> Self {
        LabeledDiagramJson {
            family: ld.family().to_string(),
            rank: ld.rank(),
            plus: ld.plus.to_vec(),
            minus: ld.minus.to_vec(),
        }
    }
}

/// All label assignments of a diagram: `2^n` full ones, or `3^n` when
/// unlabeled vertices are allowed.
pub fn all_labelings(d: &DynkinDiagram, sparse: bool) -> Vec<LabeledDiagram> {
    let n = d.rank();
    let mut out = Vec::new();
    if sparse {
        let total = 3u64.pow(n);
        for code in 0..total {
            let (mut plus, mut minus, mut c) = (VertexSet::EMPTY, VertexSet::EMPTY, code);
            for v in 1..=n {
                match c % 3 {
                    1 => plus.insert(v),
                    2 => minus.insert(v),
                    _ => {}
                }
                c /= 3;
            }
            out.push(LabeledDiagram { diagram: d.clone(), plus, minus });
        }
    } else {
        for bits in 0..(1u64 << n) {
            let plus = VertexSet::from_bits(bits);
            out.push(LabeledDiagram { diagram: d.clone(), plus, minus: d.vertices().difference(plus) });
        }
    }
    out
}

/// A connected piece of the labeled part, renumbered as a Bourbaki diagram
/// of its own type. `embedding[i]` is the original vertex with local label
/// `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledComponent {
    pub local: LabeledDiagram,
    pub embedding: Vec<u32>,
}

impl LabeledComponent {
    pub fn to_global(&self, local: VertexSet) -> VertexSet {
        local.iter().map(|v| self.embedding[(v - 1) as usize]).collect()
    }

    pub fn to_local(&self, global: VertexSet) -> VertexSet {
        self.embedding.iter().enumerate().filter(|(_, g)| global.contains(**g)).map(|(i, _)| i as u32 + 1).collect()
    }

    pub fn vertices(&self) -> VertexSet {
        self.embedding.iter().copied().collect()
    }
}

pub fn labeled_components(ld: &LabeledDiagram) -> Vec<LabeledComponent> {
    let d = ld.diagram();
    d.components(ld.labeled())
        .into_iter()
        .map(|comp| {
            let shape = d.classify(comp).expect("subdiagrams of a Dynkin diagram are Dynkin");
            let local_d = DynkinDiagram::new(shape.family, shape.rank).expect("classified shapes have legal ranks");
            let local_set = |s: VertexSet| -> VertexSet {
                shape.order.iter().enumerate().filter(|(_, g)| s.contains(**g)).map(|(i, _)| i as u32 + 1).collect()
            };
            let local = LabeledDiagram { plus: local_set(ld.plus), minus: local_set(ld.minus), diagram: local_d };
            LabeledComponent { local, embedding: shape.order }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChunkFlag {
    D3,
    Ab,
    Asharp,
}

/// Which rank-2 chunks of an E-type component carry the `Ab` flag.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum AbRule {
    /// The last two vertices of the unique longest arm.
    #[default]
    LongArmTail,
    /// Any rank-2 chunk through the branch vertex.
    BranchEdge,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FlagRules {
    pub ab: AbRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chunk {
    pub vertices: VertexSet,
    pub sign: Sign,
    pub kind: (Family, u32),
    pub flag: Option<ChunkFlag>,
}

impl Chunk {
    pub fn rank(&self) -> u32 {
        self.vertices.len()
    }

    /// Type A in the sense of the weight algorithm; `D3` chunks are not.
    pub fn is_type_a(&self) -> bool {
        self.kind.0 == Family::A
    }
}

/// Chunks of a connected labeled diagram in its own Bourbaki numbering.
pub fn component_chunks(ld: &LabeledDiagram, rules: &FlagRules) -> Vec<Chunk> {
    let d = ld.diagram();
    let n = d.rank();
    let mut out = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        for vertices in d.components(ld.with_sign(sign)) {
            let shape = d.classify(vertices).expect("chunks are Dynkin");
            let mut kind = (shape.family, shape.rank);
            let mut flag = None;
            match d.family() {
                Family::D if n >= 4 => {
                    if vertices == [n - 2, n - 1, n].into_iter().collect() {
                        flag = Some(ChunkFlag::D3);
                        kind = (Family::D, 3);
                    }
                }
                Family::E if shape.family == Family::A => {
                    let interior4 = vertices.contains(4) && d.neighbors(4).intersection(vertices).len() == 2;
                    match shape.rank {
                        3 if interior4 => flag = Some(ChunkFlag::Asharp),
                        4 if interior4 && vertices.contains(2) => flag = Some(ChunkFlag::Asharp),
                        2 => {
                            let hit = match rules.ab {
                                AbRule::LongArmTail => n >= 7 && vertices == [n - 1, n].into_iter().collect(),
                                AbRule::BranchEdge => vertices.contains(4),
                            };
                            if hit {
                                flag = Some(ChunkFlag::Ab);
                            }
                        }
                        _ => {}
                    }
                }
                _ => {}
            }
            out.push(Chunk { vertices, sign, kind, flag });
        }
    }
    out.sort_by_key(|c| c.vertices);
    out
}

/// Chunks of every labeled component, in original vertex numbering. Flags
/// are assigned relative to the component containing the chunk.
pub fn chunks(ld: &LabeledDiagram) -> Result<Vec<Chunk>> {
    chunks_with(ld, &FlagRules::default())
}

pub fn chunks_with(ld: &LabeledDiagram, rules: &FlagRules) -> Result<Vec<Chunk>> {
    if !ld.diagram().is_simply_laced() {
        return Err(FusionError::UnsupportedFamily { family: ld.family(), op: "chunks" });
    }
    let mut out = Vec::new();
    for comp in labeled_components(ld) {
        for mut c in component_chunks(&comp.local, rules) {
            c.vertices = comp.to_global(c.vertices);
            out.push(c);
        }
    }
    out.sort_by_key(|c| c.vertices);
    Ok(out)
}

/// Diagram automorphisms as permutations with `perm[v - 1] = image of v`.
pub fn list_automorphisms(d: &DynkinDiagram) -> Vec<Vec<u32>> {
    let n = d.rank();
    let id: Vec<u32> = (1..=n).collect();
    let swap = |pairs: &[(u32, u32)]| {
        let mut p = id.clone();
        for &(a, b) in pairs {
            p.swap((a - 1) as usize, (b - 1) as usize);
        }
        p
    };
    match (d.family(), n) {
        (Family::A, n) if n >= 2 => vec![id.clone(), id.iter().rev().copied().collect()],
        (Family::D, 2) => vec![id.clone(), swap(&[(1, 2)])],
        (Family::D, 4) => {
            vec![id.clone(), swap(&[(3, 4)]), swap(&[(1, 3)]), swap(&[(1, 4)]), vec![3, 2, 4, 1], vec![4, 2, 1, 3]]
        }
        (Family::D, n) if n >= 3 => vec![id.clone(), swap(&[(n - 1, n)])],
        (Family::E, 6) => vec![id.clone(), swap(&[(1, 6), (3, 5)])],
        _ => vec![id],
    }
}

pub fn apply_automorphism(ld: &LabeledDiagram, sigma: &[u32]) -> Result<LabeledDiagram> {
    if !list_automorphisms(ld.diagram()).iter().any(|p| p == sigma) {
        return Err(FusionError::NotAnAutomorphism);
    }
    Ok(LabeledDiagram { diagram: ld.diagram.clone(), plus: ld.plus.map(sigma), minus: ld.minus.map(sigma) })
}

/// Inverse of a permutation in `perm[v - 1]` form.
pub fn invert_permutation(perm: &[u32]) -> Vec<u32> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[(p - 1) as usize] = i as u32 + 1;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn bourbaki_edges() {
        let d6 = DynkinDiagram::new(Family::D, 6).unwrap();
        assert_eq!(d6.neighbors(4), set(&[3, 5, 6]));
        let e8 = DynkinDiagram::new(Family::E, 8).unwrap();
        assert_eq!(e8.neighbors(4), set(&[2, 3, 5]));
        assert_eq!(e8.neighbors(2), set(&[4]));
        let d2 = DynkinDiagram::new(Family::D, 2).unwrap();
        assert!(d2.bonds().is_empty());
    }

    #[test]
    fn rank_errors() {
        let err = DynkinDiagram::new(Family::E, 9).unwrap_err();
        assert_eq!(err.to_string(), "rank must be 6, 7, or 8");
        assert!(DynkinDiagram::new(Family::F, 3).is_err());
        assert!(DynkinDiagram::new(Family::A, 0).is_err());
    }

    #[test]
    fn cartan_double_bond() {
        let b2 = DynkinDiagram::new(Family::B, 2).unwrap().cartan();
        assert_eq!(b2, vec![vec![2, -1], vec![-2, 2]]);
        let g2 = DynkinDiagram::new(Family::G, 2).unwrap().cartan();
        assert_eq!(g2, vec![vec![2, -3], vec![-1, 2]]);
    }

    #[test]
    fn classify_preserves_bourbaki() {
        for (f, n) in [(Family::A, 5), (Family::D, 4), (Family::D, 7), (Family::E, 6), (Family::E, 8)] {
            let d = DynkinDiagram::new(f, n).unwrap();
            let s = d.classify(d.vertices()).unwrap();
            assert_eq!((s.family, s.rank), (f, n));
            assert_eq!(s.order, (1..=n).collect::<Vec<_>>());
        }
        for (f, n) in [(Family::B, 4), (Family::C, 3), (Family::F, 4), (Family::G, 2), (Family::B, 2)] {
            let d = DynkinDiagram::new(f, n).unwrap();
            let s = d.classify(d.vertices()).unwrap();
            assert_eq!((s.family, s.rank, s.order), (f, n, (1..=n).collect::<Vec<_>>()));
        }
    }

    #[test]
    fn classify_subdiagrams() {
        let e8 = DynkinDiagram::new(Family::E, 8).unwrap();
        let s = e8.classify(set(&[2, 3, 4, 5, 6, 7, 8])).unwrap();
        assert_eq!((s.family, s.rank), (Family::D, 7));
        assert_eq!(s.order, vec![8, 7, 6, 5, 4, 2, 3]);
        let s = e8.classify(set(&[1, 2, 3, 4, 5, 6])).unwrap();
        assert_eq!((s.family, s.order.clone()), (Family::E, vec![1, 2, 3, 4, 5, 6]));
        let s = e8.classify(set(&[1, 2, 3, 4])).unwrap();
        assert_eq!((s.family, s.order), (Family::A, vec![1, 3, 4, 2]));
        let f4 = DynkinDiagram::new(Family::F, 4).unwrap();
        let s = f4.classify(set(&[2, 3])).unwrap();
        assert_eq!((s.family, s.order), (Family::B, vec![2, 3]));
        let s = f4.classify(set(&[2, 3, 4])).unwrap();
        assert_eq!((s.family, s.order), (Family::C, vec![4, 3, 2]));
        let s = f4.classify(set(&[1, 2, 3])).unwrap();
        assert_eq!((s.family, s.order), (Family::B, vec![1, 2, 3]));
    }

    #[test]
    fn components_examples() {
        let a5 = LabeledDiagram::from_lists(Family::A, 5, &[1, 2], &[4, 5]).unwrap();
        let comps = labeled_components(&a5);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.local.family() == Family::A && c.local.rank() == 2));
        let e8 = LabeledDiagram::from_lists(Family::E, 8, &[1, 3], &[7, 8]).unwrap();
        let comps = labeled_components(&e8);
        assert_eq!(comps.iter().map(|c| c.vertices()).collect::<Vec<_>>(), vec![set(&[1, 3]), set(&[7, 8])]);
    }

    #[test]
    fn chunk_examples() {
        let d16 =
            LabeledDiagram::from_lists(Family::D, 16, &[2, 3, 4, 5, 10, 11, 12, 13], &[1, 6, 7, 8, 9, 14, 15, 16])
                .unwrap();
        let cs = chunks(&d16).unwrap();
        assert_eq!(cs.len(), 5);
        let d3 = cs.iter().find(|c| c.vertices == set(&[14, 15, 16])).unwrap();
        assert_eq!(d3.flag, Some(ChunkFlag::D3));
        assert!(!d3.is_type_a());

        let e8 = LabeledDiagram::from_lists(Family::E, 8, &[1, 2, 3, 4], &[5, 6, 7, 8]).unwrap();
        let cs = chunks(&e8).unwrap();
        assert_eq!(cs[0].vertices, set(&[1, 2, 3, 4]));
        assert_eq!((cs[0].kind, cs[0].flag), ((Family::A, 4), Some(ChunkFlag::Asharp)));
        assert_eq!((cs[1].kind, cs[1].flag), ((Family::A, 4), None));

        let e8b = LabeledDiagram::from_lists(Family::E, 8, &[1, 3, 5, 6], &[2, 4, 7, 8]).unwrap();
        let ab: Vec<_> = chunks(&e8b).unwrap().into_iter().filter(|c| c.flag == Some(ChunkFlag::Ab)).collect();
        assert_eq!(ab.len(), 1);
        assert_eq!(ab[0].vertices, set(&[7, 8]));

        let a4 = LabeledDiagram::from_lists(Family::A, 4, &[1, 2], &[3, 4]).unwrap();
        assert!(chunks(&a4).unwrap().iter().all(|c| c.flag.is_none()));
        let b3 = LabeledDiagram::from_lists(Family::B, 3, &[1], &[]).unwrap();
        assert!(chunks(&b3).is_err());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let text = r#"{"family":"D","rank":6,"plus":[3,4,5],"minus":[1,2,6]}"#;
        let ld = parse_json(text).unwrap();
        assert_eq!(to_json(&ld), text);
        assert!(parse_json(r#"{"family":"A","rank":1,"plus":[1],"minus":[]}"#).is_ok());
        let err = parse_json(r#"{"family":"A","rank":2,"plus":[1],"minus":[1]}"#).unwrap_err();
        assert_eq!(err.to_string(), "labels overlap at vertex 1");
        let err = parse_json(r#"{"family":"A","rank":2,"plus":[3]}"#).unwrap_err();
        assert_eq!(err.to_string(), "vertex 3 out of range 1..=2");
        assert!(matches!(parse_json("{nope"), Err(FusionError::MalformedJson(_))));
    }

    #[test]
    fn automorphisms() {
        let e6 = DynkinDiagram::new(Family::E, 6).unwrap();
        assert_eq!(list_automorphisms(&e6), vec![vec![1, 2, 3, 4, 5, 6], vec![6, 2, 5, 4, 3, 1]]);
        let d4 = DynkinDiagram::new(Family::D, 4).unwrap();
        let ld = LabeledDiagram::new(d4.clone(), set(&[3]), VertexSet::EMPTY).unwrap();
        assert_eq!(apply_automorphism(&ld, &[1, 2, 4, 3]).unwrap().plus(), set(&[4]));
        assert!(apply_automorphism(&ld, &[2, 1, 3, 4]).is_err());
        for p in list_automorphisms(&d4) {
            for &(a, b) in &[(1, 2), (2, 3), (2, 4)] {
                assert!(d4.neighbors(p[a as usize - 1]).contains(p[b as usize - 1]));
            }
        }
    }

    #[test]
    fn vertex_set_order_is_lexicographic() {
        assert!(set(&[1, 5]) < set(&[2]));
        assert!(set(&[1]) < set(&[1, 2]));
        assert_eq!(set(&[3, 1]).to_vec(), vec![1, 3]);
    }
}
