//! The extreme-point detector and its closed-form geometric approximation.
//!
//! Detection proceeds in three steps: embed the graph in the plane, walk the
//! boundary of the projected label cube, and return the enumerated label
//! vector maximizing the chosen criterion. Criterion values along the walk
//! are maintained incrementally, so the whole scan after the embedding costs
//! O(n (average degree + log n)).

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::label::LabelVector;
use crate::objectives::{block_counts, evaluate, flip_update, Criterion};
use crate::spectral::{embedding, Embedding};
use crate::zonotope::sweep_vertices;

/// Detection diagnostics carried alongside the labels.
#[derive(Debug, Clone, Copy, Default)]
pub struct Diagnostics {
    /// The two leading Laplacian eigenvalues were closer than the solver
    /// tolerance; the embedding basis is one arbitrary orthonormal choice.
    pub eigen_gap_warning: bool,
    /// Embedding columns too small to sweep; their nodes were pinned to +1.
    pub degenerate_nodes: usize,
}

#[derive(Debug, Clone)]
pub struct DetectionResult {
    pub labels: LabelVector,
    /// The chosen criterion evaluated at `labels`.
    pub objective_value: f64,
    /// Number of candidate labelings scored during the scan.
    pub candidates_evaluated: usize,
    /// Distinct bipartitions tied for the maximum (a candidate and its
    /// global negation count as one bipartition).
    pub tie_broken: bool,
    pub diagnostics: Diagnostics,
}

/// Embeds the graph and maximizes `criterion` over the extreme-point
/// candidates.
pub fn ep_detect(
    graph: &Graph,
    criterion: Criterion,
    epsilon: f64,
    tol: f64,
    seed: u64,
) -> Result<DetectionResult> {
    let emb = embedding(graph, epsilon, tol, seed)?;
    ep_search(graph, criterion, &emb)
}

/// The scan over extreme points for an already computed embedding. Exposed
/// separately so rotated or hand-built embeddings can be fed in directly.
pub fn ep_search(graph: &Graph, criterion: Criterion, emb: &Embedding) -> Result<DetectionResult> {
    if graph.n() == 0 || graph.total_degree() == 0 {
        return Err(Error::EmptyGraph);
    }
    if emb.n() != graph.n() {
        return Err(Error::LengthMismatch {
            expected: graph.n(),
            got: emb.n(),
        });
    }
    let sweep = sweep_vertices(emb);

    // Symmetric criteria take the same value on antipodal vertices, and for a
    // clean sweep the second half of the walk is exactly the negation of the
    // first, so half the candidates suffice.
    let steps_to_scan = if criterion.is_symmetric() && sweep.is_clean() {
        sweep.half_steps()
    } else {
        // The final step returns to the start vertex; skip its re-evaluation.
        sweep.num_steps().saturating_sub(1)
    };

    let mut labels = sweep.start_labels.clone();
    let mut counts = block_counts(graph, &labels)?;
    let mut best_value = evaluate(criterion, &counts);
    let mut best_labels = vec![labels.clone()];
    let mut candidates_evaluated = 1usize;

    for s in 0..steps_to_scan {
        for &i in sweep.step(s) {
            flip_update(&mut counts, graph, &mut labels, i);
        }
        let value = evaluate(criterion, &counts);
        candidates_evaluated += 1;
        if value > best_value {
            best_value = value;
            best_labels.clear();
            best_labels.push(labels.clone());
        } else if value == best_value {
            best_labels.push(labels.clone());
        }
    }

    if best_value == f64::NEG_INFINITY {
        return Err(Error::NoValidBipartition);
    }
    let tie_broken = best_labels
        .iter()
        .any(|c| !c.same_partition(&best_labels[0]));
    let labels = tie_break(best_labels, emb);
    Ok(DetectionResult {
        labels,
        objective_value: best_value,
        candidates_evaluated,
        tie_broken,
        diagnostics: Diagnostics {
            eigen_gap_warning: emb.eigen_gap_warning,
            degenerate_nodes: sweep.degenerate_nodes.len(),
        },
    })
}

/// Among equally scoring candidates, picks the one whose projection lies
/// farthest from the line through the projections of the two constant label
/// vectors; remaining ties go to the earliest candidate in sweep order.
pub fn tie_break(candidates: Vec<LabelVector>, emb: &Embedding) -> LabelVector {
    assert!(
        !candidates.is_empty(),
        "tie_break needs at least one candidate"
    );
    let ones = emb.project(&LabelVector::all_plus(emb.n()));
    let axis_norm = ones[0].hypot(ones[1]);
    if candidates.len() == 1 || axis_norm < 1e-12 {
        return candidates.into_iter().next().expect("nonempty");
    }
    let mut best_idx = 0;
    let mut best_dist = f64::NEG_INFINITY;
    for (idx, cand) in candidates.iter().enumerate() {
        let p = emb.project(cand);
        let dist = (ones[0] * p[1] - ones[1] * p[0]).abs() / axis_norm;
        if dist > best_dist {
            best_dist = dist;
            best_idx = idx;
        }
    }
    candidates
        .into_iter()
        .nth(best_idx)
        .expect("index in range")
}

/// The geometric approximation: labels from the signs of
/// `(u1 . 1) u2 - (u2 . 1) u1`, the direction across the projected cube
/// perpendicular to the constant vector's image. Exact zeros map to +1.
pub fn aep_detect(emb: &Embedding) -> Result<LabelVector> {
    let n = emb.n();
    let s1: f64 = emb.basis[0].iter().sum();
    let s2: f64 = emb.basis[1].iter().sum();
    let mut labels = Vec::with_capacity(n);
    let mut any_nonzero = false;
    for i in 0..n {
        let v = s1 * emb.basis[1][i] - s2 * emb.basis[0][i];
        if v != 0.0 {
            any_nonzero = true;
        }
        labels.push(if v < 0.0 { -1 } else { 1 });
    }
    if !any_nonzero {
        return Err(Error::DegenerateEmbedding);
    }
    LabelVector::new(labels)
}

/// `aep_detect` on the graph's own embedding.
pub fn aep_detect_graph(graph: &Graph, epsilon: f64, tol: f64, seed: u64) -> Result<LabelVector> {
    aep_detect(&embedding(graph, epsilon, tol, seed)?)
}

/// Brute-force reference: the exact maximum of `criterion` over all 2^n
/// labelings, walked in Gray-code order with incremental updates. Guarded to
/// n <= 20; this exists to validate the extreme-point search on small
/// instances.
pub fn exhaustive_max(graph: &Graph, criterion: Criterion) -> Result<(f64, LabelVector)> {
    const LIMIT: usize = 20;
    let n = graph.n();
    if n == 0 || graph.total_degree() == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > LIMIT {
        return Err(Error::BruteForceTooLarge { n, limit: LIMIT });
    }
    let mut labels = LabelVector::all_plus(n);
    let mut counts = block_counts(graph, &labels)?;
    let mut best_value = evaluate(criterion, &counts);
    let mut best_labels = labels.clone();
    // For symmetric criteria the last coordinate can stay fixed (the global
    // sign flip does not change the value); extraction scans both
    // orientations. Gray code: step t flips the lowest set bit of t.
    let sweep_bits = if criterion.is_symmetric() { n - 1 } else { n };
    let steps = 1u64 << sweep_bits;
    for t in 1..steps {
        let i = t.trailing_zeros() as usize;
        flip_update(&mut counts, graph, &mut labels, i);
        let value = evaluate(criterion, &counts);
        if value > best_value {
            best_value = value;
            best_labels = labels.clone();
        }
    }
    if best_value == f64::NEG_INFINITY {
        return Err(Error::NoValidBipartition);
    }
    Ok((best_value, best_labels))
}
