use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.data.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    /// Rank by fraction-free Bareiss elimination.
    pub fn rank(&self) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| self.data[i * cols..(i + 1) * cols].to_vec()).collect();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let (top, bottom) = a.split_at_mut(r + 1);
            let pivot_row = &top[r];
            let pivot = pivot_row[c].clone();
            for row in bottom.iter_mut() {
                let lead = row[c].clone();
                for j in c + 1..cols {
                    let v = &row[j] * &pivot - &lead * &pivot_row[j];
                    row[j] = v / &prev;
                }
                row[c] = BigInt::zero();
            }
            prev = pivot;
            r += 1;
        }
        r
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Row-reduces `vectors` to a basis of their span with primitive integer
/// rows in echelon form.
pub fn echelon_basis(vectors: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vectors.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    let Some(width) = rows.first().map(Vec::len) else {
        return rows;
    };
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..width {
        let Some(p) = rows.iter().position(|r| !r[c].is_zero()) else {
            continue;
        };
        let pivot_row = primitive(rows.swap_remove(p));
        let pivot = pivot_row[c].clone();
        for row in rows.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let g = pivot.gcd(&row[c]);
            let (mp, mr) = (&row[c] / &g, &pivot / &g);
            for j in c..width {
                row[j] = &row[j] * &mr - &pivot_row[j] * &mp;
            }
            *row = primitive(std::mem::take(row));
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        basis.push(pivot_row);
        if rows.is_empty() {
            break;
        }
    }
    basis
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_small() {
        assert_eq!(IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).rank(), 2);
        assert_eq!(IntMatrix::zeros(3, 4).rank(), 0);
        let m = IntMatrix::from_rows(&[vec![0, 0, 3], vec![0, 2, 1], vec![0, 4, 5]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn echelon_spans() {
        let v = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let b = echelon_basis(vec![v(&[2, 4, 6]), v(&[1, 2, 3]), v(&[0, 0, 5]), v(&[0, 0, 0])]);
        assert_eq!(b.len(), 2);
        assert_eq!(b[0], v(&[1, 2, 3]));
    }

    #[test]
    fn product() {
        let a = IntMatrix::from_rows(&[vec![0, 1], vec![0, 0]]);
        assert!(a.mul(&a).is_zero());
        assert_eq!(a.mul(&IntMatrix::identity(2)), a);
    }
}
