//! Enumeration of the label vectors at the extreme points of the projected
//! cube U [-1,1]^n.
//!
//! The projection of the cube by a 2 x n matrix is a zonotope: the Minkowski
//! sum of the n segments [-g_i, g_i] built from the columns g_i. Its boundary
//! has at most 2n vertices, and walking it counter-clockwise flips exactly one
//! label per step when the column angles are distinct. The sweep emits flips
//! rather than materialized label vectors so a consumer can evaluate an
//! objective with O(degree) incremental updates.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::label::LabelVector;
use crate::spectral::Embedding;

/// Angle events closer than this are treated as coincident and flipped as one
/// multi-flip step.
const ANGLE_TOL: f64 = 1e-12;

/// Columns with norm below this fraction of the largest column norm carry no
/// signal; they are pinned to +1 and excluded from the sweep.
const DEGENERATE_COLUMN_FRACTION: f64 = 1e-12;

/// Boundary walk of the projected cube, starting from the vertex with the
/// smallest y-coordinate and proceeding counter-clockwise.
#[derive(Debug, Clone)]
pub struct CandidateSweep {
    /// Labels at the minimal-y vertex.
    pub start_labels: LabelVector,
    /// Node indices flipped along the walk, grouped into steps.
    flip_order: Vec<usize>,
    step_offsets: Vec<usize>,
    /// Number of leading steps whose event angle lies in [0, pi). For distinct
    /// angles, the vertex after these steps is the antipode of the start.
    half_steps: usize,
    /// True when every step flips a single node (all angles distinct).
    distinct_angles: bool,
    /// Nodes whose generator column was negligibly small, pinned to +1.
    pub degenerate_nodes: Vec<usize>,
}

impl CandidateSweep {
    pub fn num_steps(&self) -> usize {
        self.step_offsets.len() - 1
    }

    pub fn step(&self, s: usize) -> &[usize] {
        &self.flip_order[self.step_offsets[s]..self.step_offsets[s + 1]]
    }

    pub fn steps(&self) -> impl Iterator<Item = &[usize]> {
        (0..self.num_steps()).map(|s| self.step(s))
    }

    /// Total number of single-label flips over the full walk (2 per swept
    /// node).
    pub fn total_flips(&self) -> usize {
        self.flip_order.len()
    }

    pub fn half_steps(&self) -> usize {
        self.half_steps
    }

    /// True when the walk is a clean one-flip-per-step boundary with no
    /// pinned nodes, which is the almost-sure case for data embeddings.
    pub fn is_clean(&self) -> bool {
        self.distinct_angles && self.degenerate_nodes.is_empty()
    }

    /// Materializes the distinct candidate label vectors along the walk
    /// (start vertex plus every step except the final one, which returns to
    /// the start). Intended for tests and small n; detection consumes flips
    /// incrementally instead.
    pub fn candidate_labels(&self) -> Vec<LabelVector> {
        let mut out = Vec::with_capacity(self.num_steps());
        let mut cur = self.start_labels.clone();
        out.push(cur.clone());
        let steps = self.num_steps();
        for s in 0..steps.saturating_sub(1) {
            for &i in self.step(s) {
                cur.flip(i);
            }
            out.push(cur.clone());
        }
        out
    }
}

/// Runs the angle sweep over the embedding's columns.
pub fn sweep_vertices(embedding: &Embedding) -> CandidateSweep {
    let cols: Vec<[f64; 2]> = (0..embedding.n()).map(|i| embedding.column(i)).collect();
    sweep_generators(&cols)
}

/// Angle sweep over raw 2-vector generators, O(n log n).
pub fn sweep_generators(cols: &[[f64; 2]]) -> CandidateSweep {
    let n = cols.len();
    let max_norm = cols.iter().map(|c| c[0].hypot(c[1])).fold(0.0f64, f64::max);
    let threshold = DEGENERATE_COLUMN_FRACTION * max_norm;

    let mut degenerate_nodes = Vec::new();
    let mut start = vec![1i8; n];
    // Events: (angle of +-g_i, node, sign the flip sets).
    let mut events: Vec<(f64, usize, i8)> = Vec::with_capacity(2 * n);
    for (i, c) in cols.iter().enumerate() {
        if c[0].hypot(c[1]) <= threshold {
            degenerate_nodes.push(i);
            continue;
        }
        // Start at the lowest vertex: oppose the y-component, breaking exact
        // ties by opposing the x-component.
        start[i] = if c[1] > 0.0 {
            -1
        } else if c[1] < 0.0 {
            1
        } else if c[0] > 0.0 {
            -1
        } else {
            1
        };
        let plus = normalize_angle(c[1].atan2(c[0]));
        let minus = normalize_angle((-c[1]).atan2(-c[0]));
        // Traversing the boundary edge in the direction of +g_i sets the
        // label to +1; the opposite edge sets it back to -1.
        events.push((plus, i, 1));
        events.push((minus, i, -1));
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));

    // Group events with coincident angles into multi-flip steps. Angles
    // within ANGLE_TOL of the 2*pi wrap were normalized to 0 above, so the
    // grouping never straddles the wrap.
    let mut step_offsets = vec![0usize];
    let mut flip_order = Vec::with_capacity(events.len());
    let mut step_angles = Vec::new();
    let mut idx = 0;
    while idx < events.len() {
        let group_start = idx;
        let base = events[idx].0;
        let mut last = base;
        while idx < events.len() && events[idx].0 - last <= ANGLE_TOL {
            last = events[idx].0;
            idx += 1;
        }
        for e in &events[group_start..idx] {
            flip_order.push(e.1);
        }
        step_offsets.push(flip_order.len());
        step_angles.push(base);
    }

    let half_steps = step_angles
        .iter()
        .filter(|&&a| a < std::f64::consts::PI)
        .count();
    let distinct_angles = step_offsets.windows(2).all(|w| w[1] - w[0] == 1);

    CandidateSweep {
        start_labels: LabelVector::new(start).expect("start labels are +-1"),
        flip_order,
        step_offsets,
        half_steps,
        distinct_angles,
        degenerate_nodes,
    }
}

fn normalize_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut a = a % two_pi;
    if a < 0.0 {
        a += two_pi;
    }
    if two_pi - a <= ANGLE_TOL {
        a = 0.0;
    }
    a
}

/// Brute-force oracle: enumerates all 2^n sign vectors, projects each, and
/// returns those whose projection is a strict corner of the convex hull
/// (collinear boundary points excluded, turn tolerance 1e-9). Guarded to
/// n <= 15.
pub fn brute_force_vertices(cols: &[[f64; 2]]) -> Result<BTreeSet<Vec<i8>>> {
    const LIMIT: usize = 15;
    let n = cols.len();
    if n > LIMIT {
        return Err(Error::BruteForceTooLarge { n, limit: LIMIT });
    }
    let total = 1usize << n;
    let mut points = Vec::with_capacity(total);
    for mask in 0..total {
        let mut p = [0.0f64; 2];
        for (i, c) in cols.iter().enumerate() {
            let s = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
            p[0] += s * c[0];
            p[1] += s * c[1];
        }
        points.push(p);
    }
    let corners = strict_hull_corners(&points);
    let mut out = BTreeSet::new();
    for (mask, p) in points.iter().enumerate() {
        if corners.contains(&point_key(*p)) {
            let signs: Vec<i8> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
                .collect();
            out.insert(signs);
        }
    }
    Ok(out)
}

fn point_key(p: [f64; 2]) -> (u64, u64) {
    (p[0].to_bits(), p[1].to_bits())
}

/// Strict convex-hull corners of a point set via the monotone chain, popping
/// non-left turns so collinear boundary points are not reported.
fn strict_hull_corners(points: &[[f64; 2]]) -> BTreeSet<(u64, u64)> {
    const TOL: f64 = 1e-9;
    let keys: BTreeSet<(u64, u64)> = points.iter().map(|&p| point_key(p)).collect();
    let mut unique: Vec<[f64; 2]> = keys
        .iter()
        .map(|&(x, y)| [f64::from_bits(x), f64::from_bits(y)])
        .collect();
    unique.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if unique.len() == 1 {
        return BTreeSet::from([point_key(unique[0])]);
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &unique {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= TOL {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in unique.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= TOL {
            upper.pop();
        }
        upper.push(p);
    }
    // The lexicographic endpoints appear in both chains.
    lower.pop();
    upper.pop();
    lower.into_iter().chain(upper).map(point_key).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sweep_label_set(cols: &[[f64; 2]]) -> BTreeSet<Vec<i8>> {
        sweep_generators(cols)
            .candidate_labels()
            .into_iter()
            .map(|l| l.as_slice().to_vec())
            .collect()
    }

    #[test]
    fn axis_aligned_square() {
        let cols = [[1.0, 0.0], [0.0, 1.0]];
        let set = sweep_label_set(&cols);
        assert_eq!(set.len(), 4);
        for s in [[1, 1], [1, -1], [-1, 1], [-1, -1]] {
            assert!(set.contains(s.as_slice()));
        }
        let sweep = sweep_generators(&cols);
        // Lowest vertex is (-1, -1); ties on the x-axis column oppose x.
        assert_eq!(sweep.start_labels.as_slice(), &[-1, -1]);
        assert!(sweep.is_clean());
    }

    #[test]
    fn walk_returns_to_start_with_two_flips_each() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.random_range(1..=10);
            let cols: Vec<[f64; 2]> = (0..n)
                .map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
                .collect();
            let sweep = sweep_generators(&cols);
            let mut counts = vec![0usize; n];
            let mut cur = sweep.start_labels.clone();
            for step in sweep.steps() {
                for &i in step {
                    cur.flip(i);
                    counts[i] += 1;
                }
            }
            assert_eq!(cur, sweep.start_labels);
            for i in 0..n {
                if sweep.degenerate_nodes.contains(&i) {
                    assert_eq!(counts[i], 0);
                } else {
                    assert_eq!(counts[i], 2, "node {i} flipped {} times", counts[i]);
                }
            }
        }
    }

    #[test]
    fn duplicate_angles_grouped_but_still_cover_extremes() {
        // Two identical columns: the projection is a segment scaled by 2; the
        // sweep must still contain the maximizer of any linear functional.
        let cols = [[1.0, 0.0], [1.0, 0.0]];
        let sweep = sweep_generators(&cols);
        assert!(!sweep.is_clean());
        let set = sweep_label_set(&cols);
        let brute = brute_force_vertices(&cols).unwrap();
        for want in &brute {
            assert!(set.contains(want), "missing {want:?}");
        }
    }

    #[test]
    fn brute_force_tiny_cases() {
        let single = brute_force_vertices(&[[1.0, 1.0]]).unwrap();
        assert_eq!(single.len(), 2);
        let square = brute_force_vertices(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(square.len(), 4);
        assert!(brute_force_vertices(&vec![[1.0, 0.0]; 16]).is_err());
    }

    #[test]
    fn sweep_matches_brute_force_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..40 {
            let n = rng.random_range(3..=10);
            let cols: Vec<[f64; 2]> = (0..n)
                .map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
                .collect();
            let sweep = sweep_generators(&cols);
            if !sweep.is_clean() {
                continue;
            }
            assert_eq!(sweep_label_set(&cols), brute_force_vertices(&cols).unwrap());
        }
    }

    #[test]
    fn consecutive_candidates_differ_in_one_label() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let cols: Vec<[f64; 2]> = (0..8)
            .map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .collect();
        let sweep = sweep_generators(&cols);
        assert!(sweep.is_clean());
        let cands = sweep.candidate_labels();
        assert_eq!(cands.len(), 16);
        for pair in cands.windows(2) {
            let diff = pair[0]
                .as_slice()
                .iter()
                .zip(pair[1].as_slice())
                .filter(|(a, b)| a != b)
                .count();
            assert_eq!(diff, 1);
        }
    }

    #[test]
    fn antipodal_symmetry_and_halfway_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let cols: Vec<[f64; 2]> = (0..9)
            .map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .collect();
        let sweep = sweep_generators(&cols);
        assert!(sweep.is_clean());
        let set = sweep_label_set(&cols);
        for s in &set {
            let neg: Vec<i8> = s.iter().map(|v| -v).collect();
            assert!(set.contains(&neg));
        }
        // After the first half of the steps the walk reaches the antipode.
        let mut cur = sweep.start_labels.clone();
        for s in 0..sweep.half_steps() {
            for &i in sweep.step(s) {
                cur.flip(i);
            }
        }
        assert_eq!(cur, sweep.start_labels.negated());
    }

    #[test]
    fn rotation_preserves_the_vertex_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let cols: Vec<[f64; 2]> = (0..7)
            .map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .collect();
        let base = sweep_label_set(&cols);
        for angle in [0.3, 1.2, 2.9, 4.4] {
            let (s, c) = f64::sin_cos(angle);
            let rotated: Vec<[f64; 2]> = cols
                .iter()
                .map(|g| [c * g[0] - s * g[1], s * g[0] + c * g[1]])
                .collect();
            assert_eq!(sweep_label_set(&rotated), base);
        }
    }

    #[test]
    fn zero_column_is_pinned() {
        let cols = [[0.0, 0.0], [1.0, 0.5]];
        let sweep = sweep_generators(&cols);
        assert_eq!(sweep.degenerate_nodes, vec![0]);
        assert_eq!(sweep.start_labels.get(0), 1);
        for step in sweep.steps() {
            assert!(!step.contains(&0));
        }
    }
}
