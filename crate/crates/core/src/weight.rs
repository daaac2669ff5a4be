//! The weight algorithm.
//!
//! Each pass works on one connected labeled component in its own Bourbaki
//! numbering: dominant chunks are selected, the selection is refined by the
//! priority cascade, selected vertices join `J`, their neighbours lose their
//! labels, and the remaining labeled components are processed again.

use std::collections::BTreeSet;
use std::fmt;

use crate::diagram::{
    component_chunks, labeled_components, Chunk, ChunkFlag, Family, FlagRules, LabeledDiagram, VertexSet,
};
use crate::error::{FusionError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(w) => write!(f, "{w}"),
            Weight::Infinite => f.write_str("inf"),
        }
    }
}

pub fn chunk_weight(c: &Chunk) -> Weight {
    let r = c.rank();
    match (c.flag, c.kind.0) {
        (Some(ChunkFlag::D3), _) => Weight::Finite(5),
        (Some(ChunkFlag::Ab), _) => Weight::Finite(3),
        (_, Family::A) => Weight::Finite(r + 1),
        (_, Family::D) => Weight::Finite(2 * r - 1),
        _ => Weight::Infinite,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Selection {
    pub chunks: Vec<Chunk>,
}

impl Selection {
    fn new(mut chunks: Vec<Chunk>) -> Self {
        chunks.sort_by_key(|c| c.vertices);
        Selection { chunks }
    }

    pub fn vertices(&self) -> VertexSet {
        self.chunks.iter().fold(VertexSet::EMPTY, |acc, c| acc.union(c.vertices))
    }

    pub fn len(&self) -> usize {
        self.chunks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chunks.is_empty()
    }

    pub fn type_a_count(&self) -> usize {
        self.chunks.iter().filter(|c| c.is_type_a()).count()
    }

    pub fn has_flag(&self, flag: ChunkFlag) -> bool {
        self.chunks.iter().any(|c| c.flag == Some(flag))
    }

    fn key(&self) -> Vec<VertexSet> {
        self.chunks.iter().map(|c| c.vertices).collect()
    }

    fn map(&self, f: impl Fn(VertexSet) -> VertexSet) -> Selection {
        Selection::new(self.chunks.iter().map(|c| Chunk { vertices: f(c.vertices), ..c.clone() }).collect())
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.chunks.iter().map(|c| c.vertices.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// The cascade step at which the pool became a singleton, or 6 if ties
/// survived all filters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub chosen: Selection,
    pub all_tied: Vec<Selection>,
    pub decided_at: u8,
}

fn branch_vertex(ld: &LabeledDiagram) -> Option<u32> {
    let d = ld.diagram();
    d.vertices().iter().find(|&v| d.neighbors(v).len() == 3)
}

/// Extra vertices of a selection: unselected vertices whose only neighbour
/// is a branch vertex lying in the selection.
pub fn extra_vertices(ld: &LabeledDiagram, sel: &Selection) -> VertexSet {
    let d = ld.diagram();
    let chosen = sel.vertices();
    let Some(b) = branch_vertex(ld) else {
        return VertexSet::EMPTY;
    };
    if !chosen.contains(b) {
        return VertexSet::EMPTY;
    }
    d.neighbors(b)
        .difference(chosen)
        .iter()
        .filter(|&v| ld.labeled().contains(v) && d.neighbors(v) == VertexSet::singleton(b))
        .collect()
}

fn maximum_independent_sets(adj: &[u64]) -> Vec<u64> {
    fn rec(i: usize, adj: &[u64], chosen: u64, blocked: u64, count: u32, best: &mut u32, out: &mut Vec<u64>) {
        let m = adj.len();
        if count + ((m - i) as u32) < *best {
            return;
        }
        if i == m {
            if count > *best {
                *best = count;
                out.clear();
            }
            out.push(chosen);
            return;
        }
        if blocked & (1 << i) == 0 {
            rec(i + 1, adj, chosen | 1 << i, blocked | adj[i], count + 1, best, out);
        }
        rec(i + 1, adj, chosen, blocked, count, best, out);
    }
    let mut best = 0;
    let mut out = Vec::new();
    rec(0, adj, 0, 0, 0, &mut best, &mut out);
    out
}

fn local_max_selections(ld: &LabeledDiagram, rules: &FlagRules) -> Vec<Selection> {
    let d = ld.diagram();
    let all = component_chunks(ld, rules);
    let top = all.iter().map(chunk_weight).max().expect("component has a labeled vertex");
    let dominant: Vec<Chunk> = all.into_iter().filter(|c| chunk_weight(c) == top).collect();
    let adj: Vec<u64> = dominant
        .iter()
        .map(|c| {
            let near = d.boundary(c.vertices);
            dominant
                .iter()
                .enumerate()
                .filter(|(_, o)| !o.vertices.is_disjoint(near))
                .fold(0u64, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    maximum_independent_sets(&adj)
        .into_iter()
        .map(|mask| {
            Selection::new(
                dominant.iter().enumerate().filter(|(j, _)| mask & (1 << j) != 0).map(|(_, c)| c.clone()).collect(),
            )
        })
        .collect()
}

fn local_refine(ld: &LabeledDiagram, candidates: Vec<Selection>) -> Refinement {
    let mut pool = candidates;
    let mut decided_at = 1u8;
    let mut narrow = |pool: &mut Vec<Selection>, step: u8, keep: &dyn Fn(&Selection) -> bool| {
        if pool.len() <= 1 {
            return;
        }
        let next: Vec<Selection> = pool.iter().filter(|s| keep(s)).cloned().collect();
        if !next.is_empty() {
            *pool = next;
        }
        if pool.len() == 1 {
            decided_at = step;
        }
    };
    let most_a = pool.iter().map(Selection::type_a_count).max().unwrap_or(0);
    narrow(&mut pool, 2, &|s| s.type_a_count() == most_a);
    narrow(&mut pool, 3, &|s| extra_vertices(ld, s).is_empty());
    narrow(&mut pool, 4, &|s| s.has_flag(ChunkFlag::Asharp));
    narrow(&mut pool, 5, &|s| !s.has_flag(ChunkFlag::Ab));
    if pool.len() > 1 {
        decided_at = 6;
    }
    pool.sort_by_key(Selection::key);
    Refinement { chosen: pool[0].clone(), all_tied: pool, decided_at }
}

fn single_component(ld: &LabeledDiagram) -> Result<crate::diagram::LabeledComponent> {
    if !ld.diagram().is_simply_laced() {
        return Err(FusionError::UnsupportedFamily { family: ld.family(), op: "weight algorithm" });
    }
    let mut comps = labeled_components(ld);
    if comps.len() != 1 {
        return Err(FusionError::Precondition(format!(
            "expected one connected labeled component, found {}",
            comps.len()
        )));
    }
    Ok(comps.remove(0))
}

/// Maximum selections of dominant chunks for a connected labeled diagram.
pub fn max_selections(ld: &LabeledDiagram) -> Result<Vec<Selection>> {
    max_selections_with(ld, &FlagRules::default())
}

pub fn max_selections_with(ld: &LabeledDiagram, rules: &FlagRules) -> Result<Vec<Selection>> {
    let comp = single_component(ld)?;
    Ok(local_max_selections(&comp.local, rules).iter().map(|s| s.map(|v| comp.to_global(v))).collect())
}

/// Applies the priority cascade. `candidates` are in the numbering of `ld`.
pub fn refine_selection(ld: &LabeledDiagram, candidates: Vec<Selection>) -> Result<Refinement> {
    if candidates.is_empty() {
        return Err(FusionError::Precondition("no candidate selections".into()));
    }
    let comp = single_component(ld)?;
    let local: Vec<Selection> = candidates.iter().map(|s| s.map(|v| comp.to_local(v))).collect();
    let r = local_refine(&comp.local, local);
    let back = |s: &Selection| s.map(|v| comp.to_global(v));
    Ok(Refinement {
        chosen: back(&r.chosen),
        all_tied: r.all_tied.iter().map(back).collect(),
        decided_at: r.decided_at,
    })
}

pub fn weight_fuse(ld: &LabeledDiagram) -> Result<VertexSet> {
    weight_fuse_with(ld, &FlagRules::default())
}

pub fn weight_fuse_with(ld: &LabeledDiagram, rules: &FlagRules) -> Result<VertexSet> {
    if !ld.diagram().is_simply_laced() {
        return Err(FusionError::UnsupportedFamily { family: ld.family(), op: "weight algorithm" });
    }
    let mut j = VertexSet::EMPTY;
    for comp in labeled_components(ld) {
        j = j.union(comp.to_global(fuse_component(&comp.local, rules, false)?.remove(0)));
    }
    Ok(j)
}

/// Every output reachable by branching over all final ties.
pub fn weight_fuse_all(ld: &LabeledDiagram) -> Result<BTreeSet<VertexSet>> {
    weight_fuse_all_with(ld, &FlagRules::default())
}

pub fn weight_fuse_all_with(ld: &LabeledDiagram, rules: &FlagRules) -> Result<BTreeSet<VertexSet>> {
    if !ld.diagram().is_simply_laced() {
        return Err(FusionError::UnsupportedFamily { family: ld.family(), op: "weight algorithm" });
    }
    let mut acc: BTreeSet<VertexSet> = [VertexSet::EMPTY].into();
    for comp in labeled_components(ld) {
        let outs: BTreeSet<VertexSet> =
            fuse_component(&comp.local, rules, true)?.into_iter().map(|j| comp.to_global(j)).collect();
        acc = acc.iter().flat_map(|a| outs.iter().map(move |o| a.union(*o))).collect();
    }
    Ok(acc)
}

/// Depth-first search over final ties, visiting outputs in tie order, so the
/// first output visited is the one `weight_fuse_with` returns. Returns the
/// first output accepted by `accept`.
pub fn weight_fuse_search_with(
    ld: &LabeledDiagram,
    rules: &FlagRules,
    accept: &dyn Fn(VertexSet) -> bool,
) -> Result<Option<VertexSet>> {
    run_search(ld, rules, None, accept)
}

/// As `weight_fuse_search_with`, but tied selections at each level are tried
/// in increasing order of `key` applied to their vertex sets.
pub fn weight_fuse_search_by(
    ld: &LabeledDiagram,
    rules: &FlagRules,
    key: &dyn Fn(VertexSet) -> VertexSet,
    accept: &dyn Fn(VertexSet) -> bool,
) -> Result<Option<VertexSet>> {
    run_search(ld, rules, Some(key), accept)
}

fn run_search(
    ld: &LabeledDiagram,
    rules: &FlagRules,
    key: Option<&dyn Fn(VertexSet) -> VertexSet>,
    accept: &dyn Fn(VertexSet) -> bool,
) -> Result<Option<VertexSet>> {
    if !ld.diagram().is_simply_laced() {
        return Err(FusionError::UnsupportedFamily { family: ld.family(), op: "weight algorithm" });
    }
    let identity: Vec<u32> = (1..=ld.rank()).collect();
    Ok(search(vec![(ld.clone(), identity)], VertexSet::EMPTY, rules, &Search { key, accept }))
}

struct Search<'a> {
    key: Option<&'a dyn Fn(VertexSet) -> VertexSet>,
    accept: &'a dyn Fn(VertexSet) -> bool,
}

type Task = (LabeledDiagram, Vec<u32>);

fn search(mut tasks: Vec<Task>, j: VertexSet, rules: &FlagRules, how: &Search) -> Option<VertexSet> {
    let Some((ld, emb)) = tasks.pop() else {
        return (how.accept)(j).then_some(j);
    };
    let mut comps = labeled_components(&ld);
    if comps.len() != 1 {
        for c in comps.into_iter().rev() {
            let e = c.embedding.iter().map(|&v| emb[(v - 1) as usize]).collect();
            tasks.push((c.local, e));
        }
        return search(tasks, j, rules, how);
    }
    let c = comps.remove(0);
    let emb: Vec<u32> = c.embedding.iter().map(|&v| emb[(v - 1) as usize]).collect();
    let local = c.local;
    let d = local.diagram();
    let to_global = |s: VertexSet| -> VertexSet { s.iter().map(|v| emb[(v - 1) as usize]).collect() };
    let mut tied = local_refine(&local, local_max_selections(&local, rules)).all_tied;
    if let Some(key) = how.key {
        tied.sort_by_cached_key(|s| key(to_global(s.vertices())));
    }
    for sel in tied {
        let chosen = sel.vertices();
        let rest = local.labeled().difference(chosen).difference(d.boundary(chosen));
        let mut next = tasks.clone();
        next.push((local.restrict(rest), emb.clone()));
        if let Some(found) = search(next, j.union(to_global(chosen)), rules, how) {
            return Some(found);
        }
    }
    None
}

fn fuse_component(ld: &LabeledDiagram, rules: &FlagRules, exhaustive: bool) -> Result<Vec<VertexSet>> {
    let d = ld.diagram();
    let r = local_refine(ld, local_max_selections(ld, rules));
    let picks = if exhaustive { r.all_tied } else { vec![r.chosen] };
    let mut outs = BTreeSet::new();
    for sel in picks {
        let chosen = sel.vertices();
        let rest = ld.labeled().difference(chosen).difference(d.boundary(chosen));
        let sub = ld.restrict(rest);
        if exhaustive {
            for j in weight_fuse_all_with(&sub, rules)? {
                outs.insert(chosen.union(j));
            }
        } else {
            outs.insert(chosen.union(weight_fuse_with(&sub, rules)?));
        }
    }
    Ok(outs.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn d16() -> LabeledDiagram {
        LabeledDiagram::from_lists(Family::D, 16, &[2, 3, 4, 5, 10, 11, 12, 13], &[1, 6, 7, 8, 9, 14, 15, 16]).unwrap()
    }

    fn d14() -> LabeledDiagram {
        LabeledDiagram::from_lists(Family::D, 14, &[1, 2, 5, 6, 9, 12, 13], &[3, 4, 7, 8, 10, 11, 14]).unwrap()
    }

    #[test]
    fn weights() {
        let cs = crate::diagram::chunks(&d16()).unwrap();
        let w: Vec<Weight> = cs.iter().map(chunk_weight).collect();
        assert_eq!(
            w,
            vec![Weight::Finite(2), Weight::Finite(5), Weight::Finite(5), Weight::Finite(5), Weight::Finite(5)]
        );
        assert!(Weight::Infinite > Weight::Finite(u32::MAX));
        let e8 = LabeledDiagram::from_lists(Family::E, 8, &[1, 2, 3, 4, 5, 6], &[7, 8]).unwrap();
        let cs = crate::diagram::chunks(&e8).unwrap();
        assert_eq!(chunk_weight(&cs[0]), Weight::Infinite);
    }

    #[test]
    fn search_first_hit_is_default() {
        for ld in [d16(), d14()] {
            let first = weight_fuse_search_with(&ld, &FlagRules::default(), &|_| true).unwrap();
            assert_eq!(first, Some(weight_fuse(&ld).unwrap()));
            let all = weight_fuse_all(&ld).unwrap();
            let last = *all.iter().next_back().unwrap();
            let hit = weight_fuse_search_with(&ld, &FlagRules::default(), &|j| j == last).unwrap();
            assert_eq!(hit, Some(last));
            assert_eq!(weight_fuse_search_with(&ld, &FlagRules::default(), &|_| false).unwrap(), None);
        }
    }

    #[test]
    fn d16_selections() {
        let sels = max_selections(&d16()).unwrap();
        let keys: BTreeSet<Vec<VertexSet>> = sels.iter().map(Selection::key).collect();
        let expect: BTreeSet<Vec<VertexSet>> = [
            vec![set(&[2, 3, 4, 5]), set(&[10, 11, 12, 13])],
            vec![set(&[2, 3, 4, 5]), set(&[14, 15, 16])],
            vec![set(&[6, 7, 8, 9]), set(&[14, 15, 16])],
        ]
        .into();
        assert_eq!(keys, expect);
        let r = refine_selection(&d16(), sels).unwrap();
        assert_eq!(r.chosen.vertices(), set(&[2, 3, 4, 5, 10, 11, 12, 13]));
        assert_eq!(r.decided_at, 2);
    }

    #[test]
    fn d14_selections() {
        let sels = max_selections(&d14()).unwrap();
        assert_eq!(sels.len(), 6);
        assert!(sels.iter().all(|s| s.len() == 3));
        let r = refine_selection(&d14(), sels).unwrap();
        assert_eq!(r.all_tied.len(), 3);
        assert!(r.all_tied.iter().all(|s| !s.vertices().contains(12)));
        assert!(r.all_tied.iter().all(|s| set(&[10, 11]).is_subset(s.vertices())));
        assert_eq!(r.chosen.vertices(), set(&[1, 2, 5, 6, 10, 11]));
    }

    #[test]
    fn worked_walkthroughs() {
        assert_eq!(weight_fuse(&d16()).unwrap(), set(&[2, 3, 4, 5, 7, 8, 10, 11, 12, 13, 15, 16]));
        assert_eq!(weight_fuse(&d14()).unwrap(), set(&[1, 2, 5, 6, 8, 10, 11, 13, 14]));
        let e8a = LabeledDiagram::from_lists(Family::E, 8, &[1, 2, 3, 4], &[5, 6, 7, 8]).unwrap();
        let r = refine_selection(&e8a, max_selections(&e8a).unwrap()).unwrap();
        assert_eq!((r.chosen.vertices(), r.decided_at), (set(&[1, 2, 3, 4]), 4));
        assert_eq!(weight_fuse(&e8a).unwrap(), set(&[1, 2, 3, 4, 6, 7, 8]));
        let e8b = LabeledDiagram::from_lists(Family::E, 8, &[1, 3, 5, 6], &[2, 4, 7, 8]).unwrap();
        let r = refine_selection(&e8b, max_selections(&e8b).unwrap()).unwrap();
        assert_eq!((r.chosen.vertices(), r.decided_at), (set(&[1, 3, 5, 6]), 5));
        assert_eq!(weight_fuse(&e8b).unwrap(), set(&[1, 2, 3, 5, 6, 8]));
    }

    #[test]
    fn single_sign_is_identity() {
        let ld = LabeledDiagram::from_lists(Family::E, 7, &[1, 2, 5, 7], &[]).unwrap();
        assert_eq!(weight_fuse(&ld).unwrap(), set(&[1, 2, 5, 7]));
        let single = LabeledDiagram::from_lists(Family::A, 3, &[1, 2, 3], &[]).unwrap();
        assert_eq!(max_selections(&single).unwrap().len(), 1);
    }

    #[test]
    fn tie_branching_includes_default() {
        let all = weight_fuse_all(&d14()).unwrap();
        assert!(all.contains(&weight_fuse(&d14()).unwrap()));
        assert!(all.len() > 1);
    }
}
