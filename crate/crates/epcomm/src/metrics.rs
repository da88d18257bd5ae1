//! Agreement measures between two-community label vectors.

use crate::error::{Error, Result};
use crate::label::LabelVector;

/// 2x2 joint frequency matrix between two labelings; entries sum to 1.
#[derive(Debug, Clone, Copy)]
pub struct ConfusionMatrix {
    pub r: [[f64; 2]; 2],
}

impl ConfusionMatrix {
    pub fn row_marginals(&self) -> [f64; 2] {
        [self.r[0][0] + self.r[0][1], self.r[1][0] + self.r[1][1]]
    }

    pub fn col_marginals(&self) -> [f64; 2] {
        [self.r[0][0] + self.r[1][0], self.r[0][1] + self.r[1][1]]
    }
}

pub fn confusion_matrix(a: &LabelVector, b: &LabelVector) -> Result<ConfusionMatrix> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let mut counts = [[0usize; 2]; 2];
    for i in 0..a.len() {
        let ai = usize::from(a.get(i) == -1);
        let bi = usize::from(b.get(i) == -1);
        counts[ai][bi] += 1;
    }
    let n = a.len() as f64;
    let mut r = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = counts[i][j] as f64 / n;
        }
    }
    Ok(ConfusionMatrix { r })
}

/// Normalized mutual information: mutual information divided by joint
/// entropy, in [0, 1] and invariant under relabeling communities on either
/// side. Lands exactly on 1 for identical bipartitions.
pub fn nmi(a: &LabelVector, b: &LabelVector) -> Result<f64> {
    nmi_with_flag(a, b).map(|(value, _)| value)
}

/// `nmi` plus a flag raised for the degenerate case of two constant
/// labelings, where the joint entropy is zero and the value is set by the
/// identical-partition rule rather than the formula.
pub fn nmi_with_flag(a: &LabelVector, b: &LabelVector) -> Result<(f64, bool)> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if a.same_partition(b) {
        let degenerate = a.count_plus() == 0 || a.count_plus() == a.len();
        return Ok((1.0, degenerate));
    }
    let cm = confusion_matrix(a, b)?;
    let rows = cm.row_marginals();
    let cols = cm.col_marginals();
    let mut info = 0.0;
    let mut joint_entropy = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let rij = cm.r[i][j];
            if rij > 0.0 {
                info += rij * (rij / (rows[i] * cols[j])).ln();
                joint_entropy -= rij * rij.ln();
            }
        }
    }
    if joint_entropy == 0.0 {
        // Both labelings constant but different partitions cannot happen for
        // two-community labels; keep the documented rule anyway.
        return Ok((0.0, true));
    }
    Ok(((info / joint_entropy).clamp(0.0, 1.0), false))
}

/// Fraction of nodes on which the labelings disagree, minimized over the
/// global community swap.
pub fn misclustered_fraction(a: &LabelVector, b: &LabelVector) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let n = a.len();
    let disagreements = (0..n).filter(|&i| a.get(i) != b.get(i)).count();
    Ok(disagreements.min(n - disagreements) as f64 / n as f64)
}
