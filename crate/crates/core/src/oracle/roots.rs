use std::collections::HashMap;

use crate::diagram::{DynkinDiagram, Family};
use crate::error::Result;

/// Roots in simple-root coordinates. Indices `0..n_positive` are the
/// positive roots ordered by height, then by decreasing coordinate vector,
/// so simple root `alpha_v` has index `v - 1`; index
/// `n_positive + k` is the negative of root `k`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    family: Family,
    rank: u32,
    cartan: Vec<Vec<i32>>,
    roots: Vec<Vec<i32>>,
    index: HashMap<Vec<i32>, usize>,
    n_positive: usize,
}

impl RootSystem {
    pub fn new(family: Family, rank: u32) -> Result<Self> {
        let d = DynkinDiagram::new(family, rank)?;
        Ok(Self::of(&d))
    }

    pub fn of(d: &DynkinDiagram) -> Self {
        let n = d.rank() as usize;
        let cartan = d.cartan();
        let simple: Vec<Vec<i32>> = (0..n).map(|i| (0..n).map(|j| i32::from(i == j)).collect()).collect();
        let mut seen: std::collections::HashSet<Vec<i32>> = simple.iter().cloned().collect();
        let mut frontier = simple;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for r in &frontier {
                for i in 0..n {
                    let s = reflect(&cartan, i, r);
                    if seen.insert(s.clone()) {
                        next.push(s);
                    }
                }
            }
            frontier = next;
        }
        let mut positive: Vec<Vec<i32>> = seen.into_iter().filter(|r| r.iter().all(|&c| c >= 0)).collect();
        positive.sort_by(|a, b| a.iter().sum::<i32>().cmp(&b.iter().sum::<i32>()).then_with(|| b.cmp(a)));
        let n_positive = positive.len();
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|r| r.iter().map(|c| -c).collect::<Vec<i32>>()));
        let index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        RootSystem { family: d.family(), rank: d.rank(), cartan, roots, index, n_positive }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn n_positive(&self) -> usize {
        self.n_positive
    }

    pub fn root(&self, i: usize) -> &[i32] {
        &self.roots[i]
    }

    pub fn index_of(&self, coords: &[i32]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.n_positive
    }

    pub fn negative(&self, i: usize) -> usize {
        if i < self.n_positive {
            i + self.n_positive
        } else {
            i - self.n_positive
        }
    }

    /// Index of the simple root `alpha_v`, `v` one-based.
    pub fn simple(&self, v: u32) -> usize {
        v as usize - 1
    }

    pub fn height(&self, i: usize) -> i32 {
        self.roots[i].iter().sum()
    }

    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let s: Vec<i32> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x + y).collect();
        self.index_of(&s)
    }

    /// `<beta, alpha_i^vee>` for root `beta` and zero-based simple index `i`.
    pub fn pairing(&self, beta: usize, i: usize) -> i32 {
        self.roots[beta].iter().zip(&self.cartan[i]).map(|(c, a)| c * a).sum()
    }

    pub fn reflect(&self, i: usize, beta: usize) -> usize {
        self.index_of(&reflect(&self.cartan, i, &self.roots[beta])).expect("W permutes roots")
    }
}

fn reflect(cartan: &[Vec<i32>], i: usize, r: &[i32]) -> Vec<i32> {
    let p: i32 = r.iter().zip(&cartan[i]).map(|(c, a)| c * a).sum();
    let mut out = r.to_vec();
    out[i] -= p;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        for (f, n, count) in [
            (Family::A, 2, 6),
            (Family::A, 5, 30),
            (Family::B, 3, 18),
            (Family::C, 4, 32),
            (Family::D, 4, 24),
            (Family::D, 6, 60),
            (Family::E, 6, 72),
            (Family::E, 7, 126),
            (Family::E, 8, 240),
            (Family::F, 4, 48),
            (Family::G, 2, 12),
        ] {
            let rs = RootSystem::new(f, n).unwrap();
            assert_eq!(rs.len(), count, "{f}{n}");
        }
    }

    #[test]
    fn highest_root_e8() {
        let rs = RootSystem::new(Family::E, 8).unwrap();
        assert_eq!(rs.root(rs.n_positive() - 1), &[2, 3, 4, 6, 5, 4, 3, 2]);
        assert_eq!(rs.height(rs.n_positive() - 1), 29);
    }

    #[test]
    fn ordering_and_negation() {
        let rs = RootSystem::new(Family::A, 3).unwrap();
        assert_eq!(rs.root(0), &[1, 0, 0]);
        assert_eq!(rs.root(3), &[1, 1, 0]);
        assert_eq!(rs.root(4), &[0, 1, 1]);
        for i in 0..rs.len() {
            let neg: Vec<i32> = rs.root(i).iter().map(|c| -c).collect();
            assert_eq!(rs.index_of(&neg), Some(rs.negative(i)));
        }
    }
}
