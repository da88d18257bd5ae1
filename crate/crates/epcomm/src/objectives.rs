//! Block-count statistics and the four community criteria.
//!
//! All four criteria are functions of five integers: the ordered-pair edge
//! counts within and between the two communities and the community sizes.
//! Counts stay exact integers across any sequence of single-node flips; the
//! criteria touch floating point only at evaluation time.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::label::LabelVector;

/// Which criterion the detector maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// Stochastic block model profile likelihood.
    Bm,
    /// Degree-corrected block model profile likelihood.
    Dc,
    /// Newman-Girvan modularity (rescaled two-community form).
    Ng,
    /// Community extraction.
    Ex,
}

impl Criterion {
    /// BM, DC, and NG are invariant under swapping the two communities;
    /// extraction is not.
    pub fn is_symmetric(self) -> bool {
        !matches!(self, Criterion::Ex)
    }

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Bm => "bm",
            Criterion::Dc => "dc",
            Criterion::Ng => "ng",
            Criterion::Ex => "ex",
        }
    }

    pub fn parse(s: &str) -> Option<Criterion> {
        match s {
            "bm" => Some(Criterion::Bm),
            "dc" => Some(Criterion::Dc),
            "ng" => Some(Criterion::Ng),
            "ex" => Some(Criterion::Ex),
            _ => None,
        }
    }
}

/// Sufficient statistics for the two-community criteria. Within-community
/// counts are over ordered pairs, so each undirected edge inside community k
/// contributes 2 to `o_kk`; `o12` counts one orientation of the cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockCounts {
    pub o11: i64,
    pub o22: i64,
    pub o12: i64,
    pub n1: i64,
    pub n2: i64,
}

impl BlockCounts {
    /// Degree sum of community 1.
    pub fn o1(&self) -> i64 {
        self.o11 + self.o12
    }

    /// Degree sum of community 2.
    pub fn o2(&self) -> i64 {
        self.o22 + self.o12
    }

    /// Total degree m; conserved by every flip.
    pub fn total_degree(&self) -> i64 {
        self.o11 + self.o22 + 2 * self.o12
    }
}

/// Counts from scratch in O(m).
pub fn block_counts(graph: &Graph, labels: &LabelVector) -> Result<BlockCounts> {
    if labels.len() != graph.n() {
        return Err(Error::LengthMismatch {
            expected: graph.n(),
            got: labels.len(),
        });
    }
    let mut c = BlockCounts {
        o11: 0,
        o22: 0,
        o12: 0,
        n1: 0,
        n2: 0,
    };
    for i in 0..graph.n() {
        if labels.get(i) == 1 {
            c.n1 += 1;
        } else {
            c.n2 += 1;
        }
        for &j in graph.neighbors(i) {
            match (labels.get(i), labels.get(j as usize)) {
                (1, 1) => c.o11 += 1,
                (-1, -1) => c.o22 += 1,
                (1, -1) => c.o12 += 1,
                _ => {} // the (-1, 1) orientation mirrors o12
            }
        }
    }
    Ok(c)
}

/// Applies the single-node flip to both the counts and the caller's label
/// vector in O(degree of i).
pub fn flip_update(counts: &mut BlockCounts, graph: &Graph, labels: &mut LabelVector, i: usize) {
    let own = labels.get(i);
    let mut same = 0i64;
    let mut other = 0i64;
    for &j in graph.neighbors(i) {
        if labels.get(j as usize) == own {
            same += 1;
        } else {
            other += 1;
        }
    }
    if own == 1 {
        counts.o11 -= 2 * same;
        counts.o22 += 2 * other;
        counts.o12 += same - other;
        counts.n1 -= 1;
        counts.n2 += 1;
    } else {
        counts.o22 -= 2 * same;
        counts.o11 += 2 * other;
        counts.o12 += same - other;
        counts.n2 -= 1;
        counts.n1 += 1;
    }
    labels.flip(i);
}

/// x * ln(x) with the likelihood convention 0 * ln 0 = 0.
fn xlogx(x: i64) -> f64 {
    if x <= 0 {
        0.0
    } else {
        let x = x as f64;
        x * x.ln()
    }
}

/// Degree-corrected block model profile likelihood:
/// `o11 ln o11 + o22 ln o22 + 2 o12 ln o12 - 2 o1 ln o1 - 2 o2 ln o2`.
///
/// Terms are grouped so the value is bit-identical under the community swap
/// (relying on commutativity of float addition); the detector counts
/// antipodal candidates as exact ties.
pub fn q_dc(c: &BlockCounts) -> f64 {
    let within = xlogx(c.o11) + xlogx(c.o22);
    let degrees = xlogx(c.o1()) + xlogx(c.o2());
    within + 2.0 * xlogx(c.o12) - 2.0 * degrees
}

/// Block model profile likelihood:
/// `q_dc + 2 o1 ln(o1/n1) + 2 o2 ln(o2/n2)`. A labeling that leaves one
/// community empty on a nonempty graph is not a valid bipartition and maps to
/// -inf so the optimizer discards it.
pub fn q_bm(c: &BlockCounts) -> f64 {
    if (c.n1 == 0 || c.n2 == 0) && c.total_degree() > 0 {
        return f64::NEG_INFINITY;
    }
    let size_term = |o: i64, nk: i64| -> f64 {
        if o == 0 {
            0.0
        } else {
            o as f64 * (o as f64 / nk as f64).ln()
        }
    };
    // Same grouping discipline as q_dc so the swap symmetry stays exact.
    q_dc(c) + 2.0 * (size_term(c.o1(), c.n1) + size_term(c.o2(), c.n2))
}

/// Rescaled Newman-Girvan modularity: `2 o1 o2 / (o1 + o2) - 2 o12`.
pub fn q_ng(c: &BlockCounts) -> Result<f64> {
    let m = c.total_degree();
    if m <= 0 {
        return Err(Error::EmptyGraph);
    }
    let (o1, o2) = (c.o1() as f64, c.o2() as f64);
    Ok(2.0 * o1 * o2 / (o1 + o2) - 2.0 * c.o12 as f64)
}

/// Community extraction: `(n2 / n1) o11 - o12`. The extracted community must
/// be nonempty; n1 = 0 maps to -inf.
pub fn q_ex(c: &BlockCounts) -> f64 {
    if c.n1 == 0 {
        return f64::NEG_INFINITY;
    }
    c.n2 as f64 / c.n1 as f64 * c.o11 as f64 - c.o12 as f64
}

/// Criterion dispatch for the optimizer's scan. Requires a nonempty graph
/// (checked once by the caller, not per evaluation).
pub(crate) fn evaluate(criterion: Criterion, c: &BlockCounts) -> f64 {
    match criterion {
        Criterion::Bm => q_bm(c),
        Criterion::Dc => q_dc(c),
        Criterion::Ng => {
            debug_assert!(c.total_degree() > 0);
            let (o1, o2) = (c.o1() as f64, c.o2() as f64);
            2.0 * o1 * o2 / (o1 + o2) - 2.0 * c.o12 as f64
        }
        Criterion::Ex => q_ex(c),
    }
}
