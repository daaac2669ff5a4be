//! Chevalley basis of a simply-laced Lie algebra.
//!
//! Signs come from extraspecial pairs: for each non-simple positive root
//! `xi`, the pair `(alpha, xi - alpha)` with `alpha` least in the root order
//! gets `N = +1`, and every other constant is forced by the standard
//! relations.

use crate::diagram::VertexSet;
use crate::error::{FusionError, Result};
use crate::oracle::matrix::IntMatrix;
use crate::oracle::roots::RootSystem;

#[derive(Clone, Debug)]
pub struct StructureConstants {
    n_roots: usize,
    table: Vec<i8>,
}

impl StructureConstants {
    /// `N(a, b)` with `[e_a, e_b] = N(a, b) e_{a+b}`; zero when `a + b` is
    /// not a root.
    pub fn get(&self, a: usize, b: usize) -> i32 {
        self.table[a * self.n_roots + b] as i32
    }
}

pub fn structure_constants(rs: &RootSystem) -> Result<StructureConstants> {
    if !rs.family().is_simply_laced() {
        return Err(FusionError::UnsupportedFamily { family: rs.family(), op: "structure_constants" });
    }
    let m = rs.len();
    let np = rs.n_positive();
    let mut pos = vec![0i8; np * np];

    fn general(rs: &RootSystem, pos: &[i8], a: usize, b: usize) -> i32 {
        let np = rs.n_positive();
        let Some(c) = rs.sum(a, b) else {
            return 0;
        };
        let (pa, pb) = (rs.is_positive(a), rs.is_positive(b));
        match (pa, pb) {
            (true, true) => pos[a * np + b] as i32,
            (false, false) => -general(rs, pos, rs.negative(a), rs.negative(b)),
            (true, false) => {
                if rs.is_positive(c) {
                    -general(rs, pos, rs.negative(b), c)
                } else {
                    general(rs, pos, rs.negative(c), a)
                }
            }
            (false, true) => -general(rs, pos, b, a),
        }
    }

    for xi in rs.rank() as usize..np {
        let pairs: Vec<(usize, usize)> = (0..np)
            .filter_map(|g| rs.sum(g, rs.negative(xi)).map(|d| (g, rs.negative(d))))
            .filter(|&(g, d)| rs.is_positive(g) && rs.is_positive(d) && g < d)
            .collect();
        let &(alpha, beta) = pairs.first().expect("non-simple positive roots decompose");
        pos[alpha * np + beta] = 1;
        pos[beta * np + alpha] = -1;
        for &(g, d) in &pairs[1..] {
            let (ng, nd) = (rs.negative(g), rs.negative(d));
            let t1 = general(rs, &pos, beta, ng) * general(rs, &pos, alpha, nd);
            let t2 = general(rs, &pos, ng, alpha) * general(rs, &pos, beta, nd);
            let v = t1 + t2;
            if v.abs() != 1 {
                return Err(FusionError::Consistency(format!("structure constant {v} at root {xi}")));
            }
            pos[g * np + d] = v as i8;
            pos[d * np + g] = -v as i8;
        }
    }

    let mut table = vec![0i8; m * m];
    for a in 0..m {
        for b in 0..m {
            table[a * m + b] = general(rs, &pos, a, b) as i8;
        }
    }
    Ok(StructureConstants { n_roots: m, table })
}

/// The Lie algebra with basis: positive root vectors, Cartan elements
/// `h_1..h_r`, negative root vectors.
#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    pub roots: RootSystem,
    pub constants: StructureConstants,
}

impl ChevalleyAlgebra {
    pub fn new(roots: RootSystem) -> Result<Self> {
        let constants = structure_constants(&roots)?;
        Ok(ChevalleyAlgebra { roots, constants })
    }

    pub fn dim(&self) -> usize {
        self.roots.len() + self.roots.rank() as usize
    }

    pub fn rank(&self) -> usize {
        self.roots.rank() as usize
    }

    /// Basis position of the root vector `e_r`.
    pub fn root_slot(&self, r: usize) -> usize {
        if self.roots.is_positive(r) {
            r
        } else {
            r + self.rank()
        }
    }

    pub fn cartan_slot(&self, i: usize) -> usize {
        self.roots.n_positive() + i
    }

    /// Bracket of two basis elements as a sparse vector.
    pub fn bracket(&self, x: usize, y: usize) -> Vec<(usize, i64)> {
        let np = self.roots.n_positive();
        let r = self.rank();
        let as_root = |s: usize| -> Option<usize> {
            if s < np {
                Some(s)
            } else if s >= np + r {
                Some(s - r)
            } else {
                None
            }
        };
        match (as_root(x), as_root(y)) {
            (Some(a), Some(b)) => {
                if b == self.roots.negative(a) {
                    return self
                        .roots
                        .root(a)
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (self.cartan_slot(i), c as i64))
                        .collect();
                }
                match self.roots.sum(a, b) {
                    Some(s) => vec![(self.root_slot(s), self.constants.get(a, b) as i64)],
                    None => Vec::new(),
                }
            }
            (None, Some(b)) => {
                let p = self.roots.pairing(b, x - np) as i64;
                if p == 0 {
                    Vec::new()
                } else {
                    vec![(y, p)]
                }
            }
            (Some(a), None) => {
                let p = self.roots.pairing(a, y - np) as i64;
                if p == 0 {
                    Vec::new()
                } else {
                    vec![(x, -p)]
                }
            }
            (None, None) => Vec::new(),
        }
    }

    /// Matrix of `ad X` for `X = sum e_{alpha_v} (v in plus) + sum e_{-alpha_v}
    /// (v in minus)`.
    pub fn ad_matrix(&self, plus: VertexSet, minus: VertexSet) -> IntMatrix {
        let dim = self.dim();
        let mut m = IntMatrix::zeros(dim, dim);
        let terms: Vec<usize> = plus
            .iter()
            .map(|v| self.root_slot(self.roots.simple(v)))
            .chain(minus.iter().map(|v| self.root_slot(self.roots.negative(self.roots.simple(v)))))
            .collect();
        for col in 0..dim {
            for &t in &terms {
                for (row, c) in self.bracket(t, col) {
                    m.add_to(row, col, c);
                }
            }
        }
        m
    }

    /// Grade of each basis element for the weights `+1` on `plus`, `-1` on
    /// `minus`, `0` elsewhere; `ad X` raises it by one.
    pub fn degrees(&self, plus: VertexSet, minus: VertexSet) -> Vec<i32> {
        let mut deg = vec![0; self.dim()];
        for r in 0..self.roots.len() {
            let g: i32 = self
                .roots
                .root(r)
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let v = i as u32 + 1;
                    if plus.contains(v) {
                        c
                    } else if minus.contains(v) {
                        -c
                    } else {
                        0
                    }
                })
                .sum();
            deg[self.root_slot(r)] = g;
        }
        deg
    }
}

pub fn ad_matrix(alg: &ChevalleyAlgebra, plus: VertexSet, minus: VertexSet) -> IntMatrix {
    alg.ad_matrix(plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Family;

    fn algebra(f: Family, n: u32) -> ChevalleyAlgebra {
        ChevalleyAlgebra::new(RootSystem::new(f, n).unwrap()).unwrap()
    }

    fn bracket_vec(alg: &ChevalleyAlgebra, x: &[i64], y: &[i64]) -> Vec<i64> {
        let mut out = vec![0; alg.dim()];
        for (i, &a) in x.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, &b) in y.iter().enumerate().filter(|(_, b)| **b != 0) {
                for (k, c) in alg.bracket(i, j) {
                    out[k] += a * b * c;
                }
            }
        }
        out
    }

    fn unit(alg: &ChevalleyAlgebra, i: usize) -> Vec<i64> {
        let mut v = vec![0; alg.dim()];
        v[i] = 1;
        v
    }

    fn jacobi_holds(alg: &ChevalleyAlgebra, x: usize, y: usize, z: usize) -> bool {
        let (ex, ey, ez) = (unit(alg, x), unit(alg, y), unit(alg, z));
        let a = bracket_vec(alg, &ex, &bracket_vec(alg, &ey, &ez));
        let b = bracket_vec(alg, &ey, &bracket_vec(alg, &ez, &ex));
        let c = bracket_vec(alg, &ez, &bracket_vec(alg, &ex, &ey));
        a.iter().zip(&b).zip(&c).all(|((p, q), r)| p + q + r == 0)
    }

    #[test]
    fn a2_constant() {
        let alg = algebra(Family::A, 2);
        let n = alg.constants.get(0, 1);
        assert_eq!(n.abs(), 1);
        assert_eq!(alg.constants.get(1, 0), -n);
    }

    #[test]
    fn antisymmetry_and_magnitude() {
        for (f, n) in [(Family::D, 5), (Family::E, 6)] {
            let alg = algebra(f, n);
            let rs = &alg.roots;
            for a in 0..rs.len() {
                for b in 0..rs.len() {
                    let v = alg.constants.get(a, b);
                    assert_eq!(v, -alg.constants.get(b, a));
                    assert_eq!(v != 0, rs.sum(a, b).is_some());
                    if v != 0 {
                        assert_eq!(v.abs(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_exhaustive_small() {
        for (f, n) in [(Family::A, 3), (Family::D, 4)] {
            let alg = algebra(f, n);
            let d = alg.dim();
            for x in 0..d {
                for y in 0..d {
                    for z in 0..d {
                        assert!(jacobi_holds(&alg, x, y, z), "{f}{n} {x} {y} {z}");
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_root_triples_e6() {
        let alg = algebra(Family::E, 6);
        let d = alg.dim();
        for x in (0..d).step_by(3) {
            for y in 0..d {
                for z in (y..d).step_by(5) {
                    assert!(jacobi_holds(&alg, x, y, z));
                }
            }
        }
    }

    #[test]
    fn sl2_adjoint() {
        let alg = algebra(Family::A, 1);
        let m = alg.ad_matrix(VertexSet::singleton(1), VertexSet::EMPTY);
        let expect = IntMatrix::from_rows(&[vec![0, -2, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        assert_eq!(m, expect);
        let zero = alg.ad_matrix(VertexSet::EMPTY, VertexSet::EMPTY);
        assert!(zero.is_zero());
    }

    #[test]
    fn ad_raises_degree() {
        let alg = algebra(Family::E, 6);
        let plus: VertexSet = [1, 4, 6].into_iter().collect();
        let minus: VertexSet = [2, 3].into_iter().collect();
        let m = alg.ad_matrix(plus, minus);
        let deg = alg.degrees(plus, minus);
        for (r, c, _) in m.entries() {
            assert_eq!(deg[r], deg[c] + 1);
        }
    }
}
