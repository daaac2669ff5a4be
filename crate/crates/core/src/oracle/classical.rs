use crate::diagram::{Family, LabeledDiagram, VertexSet};
use crate::error::{FusionError, Result};
use crate::oracle::matrix::IntMatrix;
use crate::oracle::signature::RankSignature;
use crate::partition::Partition;

/// `X` in the defining representation: `sl_{n+1}` for `A_n`, `so_{2n}` for
/// `D_n`. Negative root vectors are transposes of the positive ones.
type Entry = (usize, usize, i64);

pub fn classical_matrix(ld: &LabeledDiagram) -> Result<IntMatrix> {
    let n = ld.rank() as usize;
    let (dim, positive): (usize, Vec<Vec<Entry>>) = match ld.family() {
        Family::A => (n + 1, (1..=n).map(|i| vec![(i, i + 1, 1)]).collect()),
        Family::D => {
            let mut xs: Vec<Vec<Entry>> = (1..n).map(|i| vec![(i, i + 1, 1), (i + 1 + n, i + n, -1)]).collect();
            xs.push(vec![(n - 1, 2 * n, 1), (n, 2 * n - 1, -1)]);
            (2 * n, xs)
        }
        family => return Err(FusionError::UnsupportedFamily { family, op: "classical_matrix" }),
    };
    let mut m = IntMatrix::zeros(dim, dim);
    for (k, entries) in positive.iter().enumerate() {
        let v = k as u32 + 1;
        for &(r, c, x) in entries {
            if ld.plus().contains(v) {
                m.add_to(r - 1, c - 1, x);
            } else if ld.minus().contains(v) {
                m.add_to(c - 1, r - 1, x);
            }
        }
    }
    Ok(m)
}

/// Jordan type of a nilpotent matrix from the ranks of its powers.
pub fn jordan_partition(m: &IntMatrix) -> Result<Partition> {
    Ok(RankSignature::of_powers(m)?.jordan_type())
}

/// Jordan type of `X` for an A or D labeled diagram.
pub fn classical_partition(ld: &LabeledDiagram) -> Result<Partition> {
    jordan_partition(&classical_matrix(ld)?)
}

/// Jordan type of the regular nilpotent of the Levi of `j`.
pub fn regular_partition(ld_family: Family, rank: u32, j: VertexSet) -> Result<Partition> {
    let ld = LabeledDiagram::from_lists(ld_family, rank, &j.to_vec(), &[])?;
    classical_partition(&ld)
}
