//! Type E fusion by local rewriting. Each step finds one of five labeled
//! shapes, drops the label of one designated vertex, and recurses; type A
//! and D components go to the partition algorithm.

use std::fmt;

use serde::Serialize;

use crate::diagram::{labeled_components, Family, LabeledDiagram, VertexSet};
use crate::error::{FusionError, Result};
use crate::partition::classical_component_fuse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Role {
    Alpha(u8),
    Beta(u8),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Alpha(i) => write!(f, "alpha{i}"),
            Role::Beta(i) => write!(f, "beta{i}"),
        }
    }
}

/// Pattern (4) either forbids any neighbour at `beta1` (strict) or allows
/// neighbours there that satisfy the usual sign condition (relaxed).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PatternConfig {
    pub relaxed4: bool,
}

/// An occurrence of a pattern. `flipped` means the roles of `+` and `-` are
/// exchanged; `reversed` means the occurrence is the mirror image of the
/// first one in search order (path read from its larger end, or the `beta`
/// arm of pattern (4) on the long side of the branch vertex).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternMatch {
    pub kind: u8,
    pub roles: Vec<(Role, u32)>,
    pub flipped: bool,
    pub reversed: bool,
}

impl PatternMatch {
    pub fn vertex(&self, role: Role) -> Option<u32> {
        self.roles.iter().find(|(r, _)| *r == role).map(|(_, v)| *v)
    }

    pub fn vertices(&self) -> VertexSet {
        self.roles.iter().map(|(_, v)| *v).collect()
    }

    /// The vertex whose label the rewrite deletes.
    pub fn removed(&self) -> u32 {
        let role = if self.kind == 4 { Role::Beta(2) } else { Role::Beta(1) };
        self.vertex(role).expect("every pattern has its removable role")
    }
}

const SEARCH_ORDER: [u8; 5] = [1, 2, 3, 5, 4];

fn holds(ld: &LabeledDiagram, m: &PatternMatch, cfg: &PatternConfig) -> bool {
    let (a, b) = if m.flipped { (ld.minus(), ld.plus()) } else { (ld.plus(), ld.minus()) };
    let signs_ok = m.roles.iter().all(|(r, v)| match r {
        Role::Alpha(_) => a.contains(*v),
        Role::Beta(_) => b.contains(*v),
    });
    if !signs_ok {
        return false;
    }
    let d = ld.diagram();
    let externals = d.boundary(m.vertices()).intersection(ld.labeled());
    if !externals.is_subset(a) {
        return false;
    }
    if m.kind == 4 && !cfg.relaxed4 {
        let b1 = m.vertex(Role::Beta(1)).expect("pattern (4) has beta1");
        if !d.neighbors(b1).intersection(externals).is_empty() {
            return false;
        }
    }
    true
}

fn labeled_paths(ld: &LabeledDiagram, len: usize) -> Vec<Vec<u32>> {
    fn extend(ld: &LabeledDiagram, path: &mut Vec<u32>, len: usize, out: &mut Vec<Vec<u32>>) {
        if path.len() == len {
            out.push(path.clone());
            return;
        }
        let last = *path.last().expect("paths start nonempty");
        for w in ld.diagram().neighbors(last).intersection(ld.labeled()).iter() {
            if !path.contains(&w) {
                path.push(w);
                extend(ld, path, len, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in ld.labeled().iter() {
        extend(ld, &mut vec![v], len, &mut out);
    }
    out.sort();
    out
}

fn candidates(ld: &LabeledDiagram, kind: u8) -> Vec<PatternMatch> {
    let mut out = Vec::new();
    for flipped in [false, true] {
        match kind {
            1..=3 => {
                let k = kind as usize;
                for p in labeled_paths(ld, 2 * k) {
                    let mut roles: Vec<(Role, u32)> = (0..k).map(|i| (Role::Alpha(i as u8 + 1), p[i])).collect();
                    roles.extend((0..k).map(|i| (Role::Beta(i as u8 + 1), p[k + i])));
                    out.push(PatternMatch { kind, roles, flipped, reversed: p[0] > p[2 * k - 1] });
                }
            }
            4 => {
                let short = [3u32, 1];
                let long = [5u32, 6];
                for (reversed, beta_arm, alpha_arm) in [(false, short, long), (true, long, short)] {
                    let roles = vec![
                        (Role::Beta(1), beta_arm[1]),
                        (Role::Beta(2), 2),
                        (Role::Beta(3), beta_arm[0]),
                        (Role::Alpha(1), 4),
                        (Role::Alpha(2), alpha_arm[0]),
                        (Role::Alpha(3), alpha_arm[1]),
                    ];
                    if roles.iter().all(|(_, v)| ld.labeled().contains(*v)) {
                        out.push(PatternMatch { kind, roles, flipped, reversed });
                    }
                }
            }
            5 => {
                if ld.rank() == 8 && ld.is_full() {
                    let mut roles: Vec<(Role, u32)> = (1..=4).map(|i| (Role::Alpha(i as u8), i)).collect();
                    roles.extend((1..=4).map(|i| (Role::Beta(i as u8), i + 4)));
                    out.push(PatternMatch { kind, roles, flipped, reversed: false });
                }
            }
            _ => unreachable!("patterns are numbered 1 to 5"),
        }
    }
    out
}

/// Every occurrence of one pattern kind, in search order.
pub fn pattern_matches(ld: &LabeledDiagram, kind: u8, cfg: &PatternConfig) -> Vec<PatternMatch> {
    if ld.family() != Family::E || !(1..=5).contains(&kind) {
        return Vec::new();
    }
    candidates(ld, kind).into_iter().filter(|m| holds(ld, m, cfg)).collect()
}

pub fn find_pattern(ld: &LabeledDiagram) -> Result<Option<PatternMatch>> {
    find_pattern_with(ld, &PatternConfig::default())
}

/// First occurrence in the order (1), (2), (3), (5), (4). `None` when only
/// one sign is present.
pub fn find_pattern_with(ld: &LabeledDiagram, cfg: &PatternConfig) -> Result<Option<PatternMatch>> {
    if ld.family() != Family::E {
        return Err(FusionError::UnsupportedFamily { family: ld.family(), op: "find_pattern" });
    }
    if ld.plus().is_empty() || ld.minus().is_empty() {
        return Ok(None);
    }
    for kind in SEARCH_ORDER {
        if let Some(m) = candidates(ld, kind).into_iter().find(|m| holds(ld, m, cfg)) {
            return Ok(Some(m));
        }
    }
    Err(FusionError::DetectionGap(ld.to_string()))
}

pub fn apply_pattern(ld: &LabeledDiagram, m: &PatternMatch) -> Result<LabeledDiagram> {
    apply_pattern_with(ld, m, &PatternConfig::default())
}

pub fn apply_pattern_with(ld: &LabeledDiagram, m: &PatternMatch, cfg: &PatternConfig) -> Result<LabeledDiagram> {
    if ld.family() != Family::E || !holds(ld, m, cfg) {
        return Err(FusionError::StaleMatch);
    }
    Ok(ld.unlabel(m.removed()))
}

pub fn epattern_fuse(ld: &LabeledDiagram) -> Result<VertexSet> {
    epattern_fuse_with(ld, &PatternConfig::default())
}

pub fn epattern_fuse_with(ld: &LabeledDiagram, cfg: &PatternConfig) -> Result<VertexSet> {
    if !ld.diagram().is_simply_laced() {
        return Err(FusionError::UnsupportedFamily { family: ld.family(), op: "epattern_fuse" });
    }
    let mut j = VertexSet::EMPTY;
    for comp in labeled_components(ld) {
        let local = &comp.local;
        let part = if local.plus().is_empty() || local.minus().is_empty() {
            local.labeled()
        } else if local.family() == Family::E {
            let m = find_pattern_with(local, cfg)?.expect("both signs are present");
            epattern_fuse_with(&apply_pattern_with(local, &m, cfg)?, cfg)?
        } else {
            classical_component_fuse(local)?
        };
        j = j.union(comp.to_global(part));
    }
    Ok(j)
}
