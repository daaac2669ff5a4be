//! Weyl-conjugacy of simple-root subsets.
//!
//! Moves: for `J ⊆ K`, `tau_K` applies to each component of `K` the diagram
//! involution `-w_0` of that component. Closures are generated by the moves
//! with `K = J ∪ {v}`, which only touch the component of `K` through `v`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use crate::diagram::{DynkinDiagram, Family, VertexSet};
use crate::error::{FusionError, Result};
use crate::oracle::roots::RootSystem;

pub const TABLE_RANK_LIMIT: u32 = 20;
pub const ORBIT_RANK_LIMIT: u32 = 6;

/// `-w_0` on a connected component, as a map on its vertices.
fn component_involution(d: &DynkinDiagram, comp: VertexSet) -> Vec<(u32, u32)> {
    let shape = d.classify(comp).expect("components of a Dynkin diagram are Dynkin");
    let o = &shape.order;
    let m = o.len();
    let pairs: Vec<(usize, usize)> = match (shape.family, shape.rank) {
        (Family::A, r) if r >= 2 => (0..m).map(|i| (i, m - 1 - i)).collect(),
        (Family::D, r) if r % 2 == 1 => vec![(m - 2, m - 1), (m - 1, m - 2)],
        (Family::E, 6) => vec![(0, 5), (5, 0), (2, 4), (4, 2)],
        _ => Vec::new(),
    };
    pairs.into_iter().map(|(a, b)| (o[a], o[b])).collect()
}

fn apply_involution(pairs: &[(u32, u32)], v: u32) -> u32 {
    pairs.iter().find(|(a, _)| *a == v).map_or(v, |&(_, b)| b)
}

/// `tau_K(J)` for `J ⊆ K`.
pub fn elementary_move(d: &DynkinDiagram, j: VertexSet, k: VertexSet) -> Result<VertexSet> {
    if !j.is_subset(k) || !k.is_subset(d.vertices()) {
        return Err(FusionError::Precondition(format!("{j} is not contained in {k}")));
    }
    let mut out = VertexSet::EMPTY;
    for comp in d.components(k) {
        let inv = component_involution(d, comp);
        for v in j.intersection(comp).iter() {
            out.insert(apply_involution(&inv, v));
        }
    }
    Ok(out)
}

fn single_moves(d: &DynkinDiagram, j: VertexSet) -> Vec<VertexSet> {
    let mut out = Vec::new();
    for v in d.vertices().difference(j).iter() {
        let k = j.union(VertexSet::singleton(v));
        let comp = d.components(k).into_iter().find(|c| c.contains(v)).expect("v lies in some component");
        let image = apply_involution(&component_involution(d, comp), v);
        let mut next = k;
        next.remove(image);
        if next != j {
            out.push(next);
        }
    }
    out
}

/// All subsets reachable from `j` by elementary moves.
pub fn closure(d: &DynkinDiagram, j: VertexSet) -> BTreeSet<VertexSet> {
    let mut seen: BTreeSet<VertexSet> = [j].into();
    let mut queue: VecDeque<VertexSet> = [j].into();
    while let Some(cur) = queue.pop_front() {
        for next in single_moves(d, cur) {
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Closure using every `K ⊇ J`, not only single-vertex extensions.
pub fn closure_all_supersets(d: &DynkinDiagram, j: VertexSet) -> BTreeSet<VertexSet> {
    let all = d.vertices();
    let mut seen: BTreeSet<VertexSet> = [j].into();
    let mut queue: VecDeque<VertexSet> = [j].into();
    while let Some(cur) = queue.pop_front() {
        let free = all.difference(cur).to_vec();
        for bits in 0..(1u64 << free.len()) {
            let extra: VertexSet =
                free.iter().enumerate().filter(|(i, _)| bits & (1 << i) != 0).map(|(_, &v)| v).collect();
            let next = elementary_move(d, cur, cur.union(extra)).expect("cur is inside K");
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen
}

pub fn is_conjugate(d: &DynkinDiagram, j: VertexSet, j2: VertexSet) -> bool {
    j.len() == j2.len() && closure(d, j).contains(&j2)
}

/// Lexicographically least member of the class of `j`.
pub fn canonicalize(d: &DynkinDiagram, j: VertexSet) -> VertexSet {
    *closure(d, j).iter().next().expect("closure contains j")
}

pub fn class_representatives(d: &DynkinDiagram) -> Result<Vec<VertexSet>> {
    Ok(ConjugacyTable::new(d)?.representatives().to_vec())
}

/// Class of every subset of a diagram.
#[derive(Clone, Debug)]
pub struct ConjugacyTable {
    class_of: Vec<u32>,
    reps: Vec<VertexSet>,
}

impl ConjugacyTable {
    pub fn new(d: &DynkinDiagram) -> Result<Self> {
        if d.rank() > TABLE_RANK_LIMIT {
            return Err(FusionError::CapabilityExceeded {
                op: "conjugacy table",
                rank: d.rank(),
                limit: TABLE_RANK_LIMIT,
            });
        }
        let total = 1usize << d.rank();
        let mut class_of = vec![u32::MAX; total];
        let mut reps = Vec::new();
        for bits in 0..total {
            if class_of[bits] != u32::MAX {
                continue;
            }
            let cl = closure(d, VertexSet::from_bits(bits as u64));
            let id = reps.len() as u32;
            for s in &cl {
                class_of[s.bits() as usize] = id;
            }
            reps.push(*cl.iter().next().unwrap());
        }
        let mut order: Vec<usize> = (0..reps.len()).collect();
        order.sort_by_key(|&i| reps[i]);
        let mut renum = vec![0u32; reps.len()];
        for (new, &old) in order.iter().enumerate() {
            renum[old] = new as u32;
        }
        for c in class_of.iter_mut() {
            *c = renum[*c as usize];
        }
        let reps = order.iter().map(|&i| reps[i]).collect();
        Ok(ConjugacyTable { class_of, reps })
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[VertexSet] {
        &self.reps
    }

    pub fn class_id(&self, j: VertexSet) -> u32 {
        self.class_of[j.bits() as usize]
    }

    pub fn canonical(&self, j: VertexSet) -> VertexSet {
        self.reps[self.class_id(j) as usize]
    }

    pub fn same_class(&self, a: VertexSet, b: VertexSet) -> bool {
        self.class_id(a) == self.class_id(b)
    }
}

/// Levi type of `j`, e.g. `A3+2A1`; `0` for the empty set.
pub fn levi_type(d: &DynkinDiagram, j: VertexSet) -> String {
    let mut counts: BTreeMap<(Family, std::cmp::Reverse<u32>), usize> = BTreeMap::new();
    for comp in d.components(j) {
        let s = d.classify(comp).expect("components are Dynkin");
        *counts.entry((s.family, std::cmp::Reverse(s.rank))).or_default() += 1;
    }
    if counts.is_empty() {
        return "0".into();
    }
    counts
        .iter()
        .map(|((f, r), &c)| if c == 1 { format!("{f}{}", r.0) } else { format!("{c}{f}{}", r.0) })
        .collect::<Vec<_>>()
        .join("+")
}

/// Brute-force conjugacy on root lines under simple reflections.
#[derive(Clone, Debug)]
pub struct OrbitOracle {
    rank: u32,
    reflections: Vec<Vec<u16>>,
}

impl OrbitOracle {
    pub fn new(d: &DynkinDiagram) -> Result<Self> {
        Self::with_limit(d, ORBIT_RANK_LIMIT)
    }

    pub fn with_limit(d: &DynkinDiagram, limit: u32) -> Result<Self> {
        if d.rank() > limit {
            return Err(FusionError::CapabilityExceeded { op: "orbit oracle", rank: d.rank(), limit });
        }
        let rs = RootSystem::of(d);
        let np = rs.n_positive();
        let line = |r: usize| if rs.is_positive(r) { r } else { rs.negative(r) };
        let reflections =
            (0..d.rank() as usize).map(|i| (0..np).map(|p| line(rs.reflect(i, p)) as u16).collect()).collect();
        Ok(OrbitOracle { rank: d.rank(), reflections })
    }

    fn state(j: VertexSet) -> Vec<u16> {
        j.iter().map(|v| (v - 1) as u16).collect()
    }

    fn as_simple(&self, state: &[u16]) -> Option<VertexSet> {
        state.iter().all(|&p| (p as u32) < self.rank).then(|| state.iter().map(|&p| p as u32 + 1).collect())
    }

    /// Runs the orbit BFS of `j`, stopping early when `stop` accepts a
    /// subset; returns every subset state met.
    fn search(&self, j: VertexSet, stop: impl Fn(VertexSet) -> bool) -> (bool, BTreeSet<VertexSet>) {
        let start = Self::state(j);
        let mut seen: HashSet<Vec<u16>> = [start.clone()].into();
        let mut queue: VecDeque<Vec<u16>> = [start].into();
        let mut subsets = BTreeSet::new();
        while let Some(cur) = queue.pop_front() {
            if let Some(s) = self.as_simple(&cur) {
                subsets.insert(s);
                if stop(s) {
                    return (true, subsets);
                }
            }
            for refl in &self.reflections {
                let mut next: Vec<u16> = cur.iter().map(|&p| refl[p as usize]).collect();
                next.sort_unstable();
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        (false, subsets)
    }

    pub fn is_conjugate(&self, j: VertexSet, j2: VertexSet) -> bool {
        j.len() == j2.len() && self.search(j, |s| s == j2).0
    }

    /// Subsets conjugate to `j`.
    pub fn class_of(&self, j: VertexSet) -> BTreeSet<VertexSet> {
        self.search(j, |_| false).1
    }

    /// Partition of all subsets into classes.
    pub fn classes(&self) -> Vec<BTreeSet<VertexSet>> {
        let mut assigned: HashMap<VertexSet, usize> = HashMap::new();
        let mut out: Vec<BTreeSet<VertexSet>> = Vec::new();
        for bits in 0..(1u64 << self.rank) {
            let j = VertexSet::from_bits(bits);
            if assigned.contains_key(&j) {
                continue;
            }
            let cl = self.class_of(j);
            for s in &cl {
                assigned.insert(*s, out.len());
            }
            out.push(cl);
        }
        out
    }
}

pub fn orbit_is_conjugate(d: &DynkinDiagram, j: VertexSet, j2: VertexSet) -> Result<bool> {
    Ok(OrbitOracle::new(d)?.is_conjugate(j, j2))
}
