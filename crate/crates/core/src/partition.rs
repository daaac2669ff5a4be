//! Jordan partitions in types A and D from path digraphs, and Levi subsets
//! realizing a given partition.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{labeled_components, DynkinDiagram, Family, LabeledDiagram, VertexSet};
use crate::error::{FusionError, Result};

/// Parts in descending order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn multiplicity(&self, part: u32) -> usize {
        self.0.iter().filter(|&&p| p == part).count()
    }

    fn distinct(&self) -> BTreeSet<u32> {
        self.0.iter().copied().collect()
    }

    fn odd_multiplicity_values(&self) -> BTreeSet<u32> {
        self.distinct().into_iter().filter(|&p| self.multiplicity(p) % 2 == 1).collect()
    }

    /// No odd part occurs.
    pub fn is_very_even(&self) -> bool {
        self.0.iter().all(|p| p % 2 == 0)
    }

    /// Either every part has even multiplicity, or exactly `1` and one other
    /// odd part have odd multiplicity.
    pub fn satisfies_type_d_rule(&self) -> bool {
        let odd = self.odd_multiplicity_values();
        match odd.len() {
            0 => true,
            2 => odd.contains(&1) && odd.iter().all(|p| p % 2 == 1),
            _ => false,
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// A digraph on vertices `1..=vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDigraph {
    pub vertex_count: u32,
    pub arcs: BTreeSet<(u32, u32)>,
}

impl PathDigraph {
    fn successors(&self, v: u32, alive: &[bool]) -> Vec<u32> {
        self.arcs.range((v, 0)..(v + 1, 0)).map(|&(_, w)| w).filter(|&w| alive[w as usize]).collect()
    }

    fn topological_order(&self) -> Result<Vec<u32>> {
        let n = self.vertex_count as usize;
        let mut indeg = vec![0usize; n + 1];
        for &(_, b) in &self.arcs {
            indeg[b as usize] += 1;
        }
        let mut stack: Vec<u32> = (1..=self.vertex_count).filter(|&v| indeg[v as usize] == 0).collect();
        let mut order = Vec::with_capacity(n);
        let alive = vec![true; n + 1];
        while let Some(v) = stack.pop() {
            order.push(v);
            for w in self.successors(v, &alive) {
                indeg[w as usize] -= 1;
                if indeg[w as usize] == 0 {
                    stack.push(w);
                }
            }
        }
        if order.len() != n {
            return Err(FusionError::CyclicDigraph);
        }
        Ok(order)
    }

    /// All longest directed paths among `alive` vertices, lexicographically
    /// sorted, with their length in arcs.
    fn longest_paths(&self, order: &[u32], alive: &[bool]) -> (u32, Vec<Vec<u32>>) {
        let mut dist = vec![0u32; self.vertex_count as usize + 1];
        for &v in order.iter().rev() {
            if alive[v as usize] {
                dist[v as usize] = self.successors(v, alive).iter().map(|&w| dist[w as usize] + 1).max().unwrap_or(0);
            }
        }
        let longest = (1..=self.vertex_count).filter(|&v| alive[v as usize]).map(|v| dist[v as usize]).max();
        let Some(longest) = longest.filter(|&l| l > 0) else {
            return (0, Vec::new());
        };
        let mut paths = Vec::new();
        let mut stack: Vec<Vec<u32>> = (1..=self.vertex_count)
            .filter(|&v| alive[v as usize] && dist[v as usize] == longest)
            .map(|v| vec![v])
            .collect();
        while let Some(path) = stack.pop() {
            let last = *path.last().unwrap();
            if dist[last as usize] == 0 {
                paths.push(path);
                continue;
            }
            for w in self.successors(last, alive) {
                if dist[w as usize] + 1 == dist[last as usize] {
                    let mut next = path.clone();
                    next.push(w);
                    stack.push(next);
                }
            }
        }
        paths.sort();
        (longest, paths)
    }
}

pub fn build_digraph(ld: &LabeledDiagram) -> Result<PathDigraph> {
    let n = ld.rank();
    let mut arcs = BTreeSet::new();
    let mut orient = |a: u32, b: u32, label: u32| {
        if ld.plus().contains(label) {
            arcs.insert((a, b));
        } else if ld.minus().contains(label) {
            arcs.insert((b, a));
        }
    };
    let vertex_count = match ld.family() {
        Family::A => {
            for i in 1..=n {
                orient(i, i + 1, i);
            }
            n + 1
        }
        Family::D => {
            for i in 1..=n - 2 {
                orient(i, i + 1, i);
            }
            orient(n - 1, n, n - 1);
            orient(n - 1, n + 1, n);
            orient(n, n + 2, n);
            orient(n + 1, n + 2, n - 1);
            for j in 1..=n - 2 {
                orient(n + 1 + j, n + 2 + j, n - 1 - j);
            }
            2 * n
        }
        family => return Err(FusionError::UnsupportedFamily { family, op: "build_digraph" }),
    };
    Ok(PathDigraph { vertex_count, arcs })
}

/// Which disjoint sets of longest paths a peeling stage may remove.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PeelRule {
    /// Sets of maximum cardinality.
    #[default]
    Maximum,
    /// Sets that cannot be extended.
    Maximal,
}

/// Inclusion-maximal disjoint subsets of `paths` as index lists, in the
/// order that prefers earlier paths; restricted to the largest size under
/// `PeelRule::Maximum`.
fn disjoint_sets(paths: &[Vec<u32>], rule: PeelRule) -> Vec<Vec<usize>> {
    fn rec(i: usize, k: usize, pick: &mut Vec<usize>, clash: &dyn Fn(usize, usize) -> bool, out: &mut Vec<Vec<usize>>) {
        if i == k {
            if (0..k).all(|x| pick.contains(&x) || pick.iter().any(|&y| clash(x, y))) {
                out.push(pick.clone());
            }
            return;
        }
        if pick.iter().all(|&y| !clash(i, y)) {
            pick.push(i);
            rec(i + 1, k, pick, clash, out);
            pick.pop();
        }
        rec(i + 1, k, pick, clash, out);
    }
    let clash = |a: usize, b: usize| paths[a].iter().any(|v| paths[b].contains(v));
    let mut out = Vec::new();
    rec(0, paths.len(), &mut Vec::new(), &clash, &mut out);
    if rule == PeelRule::Maximum {
        let best = out.iter().map(Vec::len).max().unwrap_or(0);
        out.retain(|s| s.len() == best);
    }
    out
}

/// Peeling with the first admissible disjoint set at every stage, paths
/// being ordered lexicographically.
pub fn peel_partition(g: &PathDigraph) -> Result<Partition> {
    peel_partition_with(g, PeelRule::default())
}

pub fn peel_partition_with(g: &PathDigraph, rule: PeelRule) -> Result<Partition> {
    let order = g.topological_order()?;
    let mut alive = vec![true; g.vertex_count as usize + 1];
    alive[0] = false;
    let mut parts = Vec::new();
    loop {
        let (len, paths) = g.longest_paths(&order, &alive);
        if len == 0 {
            break;
        }
        let choice = disjoint_sets(&paths, rule).swap_remove(0);
        for &i in &choice {
            for &v in &paths[i] {
                alive[v as usize] = false;
            }
        }
        parts.extend(std::iter::repeat_n(len + 1, choice.len()));
    }
    parts.extend(alive.iter().filter(|&&a| a).map(|_| 1));
    Ok(Partition::new(parts))
}

/// Every partition reachable by branching over all admissible disjoint sets
/// of longest paths at every stage.
pub fn peel_partition_all(g: &PathDigraph) -> Result<BTreeSet<Partition>> {
    peel_partition_all_with(g, PeelRule::default())
}

pub fn peel_partition_all_with(g: &PathDigraph, rule: PeelRule) -> Result<BTreeSet<Partition>> {
    fn rec(
        g: &PathDigraph,
        order: &[u32],
        rule: PeelRule,
        alive: &[bool],
        parts: &mut Vec<u32>,
        out: &mut BTreeSet<Partition>,
    ) {
        let (len, paths) = g.longest_paths(order, alive);
        if len == 0 {
            let mut all = parts.clone();
            all.extend(alive.iter().filter(|&&a| a).map(|_| 1));
            out.insert(Partition::new(all));
            return;
        }
        for choice in disjoint_sets(&paths, rule) {
            let mut next = alive.to_vec();
            for &i in &choice {
                for &v in &paths[i] {
                    next[v as usize] = false;
                }
            }
            let before = parts.len();
            parts.extend(std::iter::repeat_n(len + 1, choice.len()));
            rec(g, order, rule, &next, parts, out);
            parts.truncate(before);
        }
    }
    let order = g.topological_order()?;
    let mut alive = vec![true; g.vertex_count as usize + 1];
    alive[0] = false;
    let mut out = BTreeSet::new();
    rec(g, &order, rule, &alive, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Packs `A_{a-1}` blocks from the left, each followed by one omitted
/// vertex.
fn pack_blocks(sizes: &[u32]) -> VertexSet {
    let mut j = VertexSet::EMPTY;
    let mut pos = 1;
    for &a in sizes {
        for v in pos..pos + a - 1 {
            j.insert(v);
        }
        pos += a;
    }
    j
}

/// A subset whose Levi has a regular nilpotent of Jordan type `p`.
pub fn partition_to_j(p: &Partition, family: Family, rank: u32) -> Result<VertexSet> {
    match family {
        Family::A => {
            if p.size() != rank + 1 {
                return Err(FusionError::Precondition(format!("{p} is not a partition of {}", rank + 1)));
            }
            Ok(pack_blocks(p.parts()))
        }
        Family::D => {
            if p.size() != 2 * rank {
                return Err(FusionError::Precondition(format!("{p} is not a partition of {}", 2 * rank)));
            }
            if !p.satisfies_type_d_rule() {
                return Err(FusionError::PartitionInvariant(p.to_string()));
            }
            let odd = p.odd_multiplicity_values();
            if odd.is_empty() && p.is_very_even() {
                return Err(FusionError::Precondition(format!("{p} is very even; use the very even reduction")));
            }
            let mut rest = p.parts().to_vec();
            let mut q = 0;
            if let Some(&big) = odd.iter().find(|&&x| x != 1) {
                for x in [big, 1] {
                    let at = rest.iter().position(|&y| y == x).unwrap();
                    rest.remove(at);
                }
                q = big.div_ceil(2);
            }
            let pairs: Vec<u32> = rest.chunks(2).map(|c| c[0]).collect();
            let mut j = pack_blocks(&pairs);
            for v in rank - q + 1..=rank {
                if q > 0 {
                    j.insert(v);
                }
            }
            Ok(j)
        }
        family => Err(FusionError::UnsupportedFamily { family, op: "partition_to_j" }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeryEvenReduction {
    /// The type `A_{n-1}` chain on vertices `1..n-1`.
    pub reduced: LabeledDiagram,
    pub fork_swapped: bool,
    pub flipped: bool,
}

impl VeryEvenReduction {
    /// Carries a subset of the chain back to the `D_n` numbering.
    pub fn lift(&self, j: VertexSet) -> VertexSet {
        let n = self.reduced.rank() + 1;
        if !self.fork_swapped {
            return j;
        }
        j.iter().map(|v| if v == n - 1 { n } else { v }).collect()
    }
}

pub fn very_even_reduce(ld: &LabeledDiagram) -> Result<VeryEvenReduction> {
    let n = ld.rank();
    if ld.family() != Family::D || n < 4 || n % 2 == 1 {
        return Err(FusionError::Precondition("very even reduction needs D_n with n even".into()));
    }
    if !peel_partition(&build_digraph(ld)?)?.is_very_even() {
        return Err(FusionError::Precondition(format!("{ld} does not have a very even partition")));
    }
    let tail = |ld: &LabeledDiagram| -> Vec<Option<crate::diagram::Sign>> { (n - 3..=n).map(|v| ld.sign(v)).collect() };
    use crate::diagram::Sign::{Minus, Plus};
    let target = vec![Some(Plus), Some(Plus), Some(Plus), Some(Minus)];
    let swap: Vec<u32> = (1..=n)
        .map(|v| {
            if v == n - 1 {
                n
            } else if v == n {
                n - 1
            } else {
                v
            }
        })
        .collect();
    let swapped_ld = |ld: &LabeledDiagram| {
        LabeledDiagram::new(ld.diagram().clone(), ld.plus().map(&swap), ld.minus().map(&swap))
            .expect("swap keeps labels disjoint")
    };
    for flipped in [false, true] {
        for fork_swapped in [false, true] {
            let mut cand = if flipped { ld.flip() } else { ld.clone() };
            if fork_swapped {
                cand = swapped_ld(&cand);
            }
            if tail(&cand) == target {
                let chain = VertexSet::full(n - 1);
                let reduced = LabeledDiagram::new(
                    DynkinDiagram::new(Family::A, n - 1)?,
                    cand.plus().intersection(chain),
                    cand.minus().intersection(chain),
                )?;
                return Ok(VeryEvenReduction { reduced, fork_swapped, flipped });
            }
        }
    }
    Err(FusionError::Consistency(format!("very even labeling {ld} has an unexpected fork pattern")))
}

/// Fusion for types A and D, component by component.
pub fn partition_fuse(ld: &LabeledDiagram) -> Result<VertexSet> {
    if !matches!(ld.family(), Family::A | Family::D) {
        return Err(FusionError::UnsupportedFamily { family: ld.family(), op: "partition_fuse" });
    }
    let mut j = VertexSet::EMPTY;
    for comp in labeled_components(ld) {
        j = j.union(comp.to_global(classical_component_fuse(&comp.local)?));
    }
    Ok(j)
}

/// Fusion of a connected, fully labeled type A or D diagram.
pub(crate) fn classical_component_fuse(local: &LabeledDiagram) -> Result<VertexSet> {
    let p = peel_partition(&build_digraph(local)?)?;
    match local.family() {
        Family::A => partition_to_j(&p, Family::A, local.rank()),
        Family::D => {
            if !p.satisfies_type_d_rule() {
                return Err(FusionError::PartitionInvariant(p.to_string()));
            }
            if p.is_very_even() {
                let red = very_even_reduce(local)?;
                let inner = partition_fuse(&red.reduced)?;
                Ok(red.lift(inner))
            } else {
                partition_to_j(&p, Family::D, local.rank())
            }
        }
        family => Err(FusionError::UnsupportedFamily { family, op: "partition_fuse" }),
    }
}

/// The Jordan type of `X` for the whole labeled diagram.
pub fn labeled_partition(ld: &LabeledDiagram) -> Result<Partition> {
    peel_partition(&build_digraph(ld)?)
}
