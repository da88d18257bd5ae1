//! Two-community label vectors with entries +1 / -1.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Assignment of every node to one of two communities, stored as +1/-1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelVector(Vec<i8>);

impl LabelVector {
    /// Builds a label vector, rejecting any entry other than +1 or -1.
    pub fn new(labels: Vec<i8>) -> Result<Self> {
        if labels.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidLabel);
        }
        Ok(LabelVector(labels))
    }

    /// All nodes in community +1.
    pub fn all_plus(n: usize) -> Self {
        LabelVector(vec![1; n])
    }

    /// First `n1` nodes +1, the rest -1.
    pub fn split(n1: usize, n2: usize) -> Self {
        let mut v = vec![1i8; n1 + n2];
        v[n1..].fill(-1);
        LabelVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    /// Global sign flip (swaps the two communities).
    pub fn negated(&self) -> Self {
        LabelVector(self.0.iter().map(|&v| -v).collect())
    }

    /// Number of nodes labeled +1.
    pub fn count_plus(&self) -> usize {
        self.0.iter().filter(|&&v| v == 1).count()
    }

    /// True if the two vectors describe the same bipartition, i.e. they are
    /// equal or equal after a global sign flip.
    pub fn same_partition(&self, other: &Self) -> bool {
        self == other || *self == other.negated()
    }

    /// Reads one label per line. Accepts the conventions {1, 2} and {+1, -1}:
    /// `1` and `+1` map to +1, `2` and `-1` map to -1.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut labels = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let tok = line.trim();
            if tok.is_empty() || tok.starts_with('#') {
                continue;
            }
            let v = match tok {
                "1" | "+1" => 1,
                "2" | "-1" => -1,
                _ => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("expected a label in {{1,2}} or {{+1,-1}}, got {tok:?}"),
                    })
                }
            };
            labels.push(v);
        }
        if labels.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "empty label file".into(),
            });
        }
        Ok(LabelVector(labels))
    }

    /// Writes one `1` / `-1` per line.
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        for &v in &self.0 {
            writeln!(w, "{v}")?;
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for LabelVector {
    type Output = i8;
    fn index(&self, i: usize) -> &i8 {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_entries() {
        assert!(LabelVector::new(vec![1, -1, 0]).is_err());
        assert!(LabelVector::new(vec![1, -1, 1]).is_ok());
    }

    #[test]
    fn reads_both_conventions() {
        let v = LabelVector::read("1\n2\n2\n1\n".as_bytes()).unwrap();
        assert_eq!(v.as_slice(), &[1, -1, -1, 1]);
        let w = LabelVector::read("+1\n-1\n-1\n+1\n".as_bytes()).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn read_reports_line_numbers() {
        let err = LabelVector::read("1\n3\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let v = LabelVector::split(3, 2);
        let mut buf = Vec::new();
        v.write(&mut buf).unwrap();
        let back = LabelVector::read(buf.as_slice()).unwrap();
        assert_eq!(v, back);
    }

    #[test]
    fn partition_equality_ignores_global_sign() {
        let v = LabelVector::split(2, 2);
        assert!(v.same_partition(&v.negated()));
        let mut w = v.clone();
        w.flip(0);
        assert!(!v.same_partition(&w));
    }
}
