//! Comparison methods: regularized spectral clustering and the
//! leading-eigenvector-signs modularity heuristic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::label::LabelVector;
use crate::linalg::{dot, LinearOperator, Shifted};
use crate::spectral::{leading_eigenpairs, regularizer_tau, RegularizedLaplacian};

/// Output of the two-cluster Lloyd iteration.
#[derive(Debug, Clone)]
pub struct KMeansResult {
    /// Per-point cluster id, 0 or 1.
    pub assignment: Vec<u8>,
    pub centers: [[f64; 2]; 2],
    /// Sum of squared distances to assigned centers, minimal over restarts.
    pub inertia: f64,
    pub restarts_used: usize,
    /// All points coincide; the result is a single cluster.
    pub degenerate: bool,
}

const LLOYD_MAX_ITERS: usize = 300;

/// K-means with K = 2 on points in the plane: `restarts` seeded random-point
/// initializations, Lloyd iterations to an assignment fixpoint (or 300
/// iterations), best inertia wins with ties going to the earliest restart.
pub fn kmeans(points: &[[f64; 2]], restarts: usize, seed: u64) -> Result<KMeansResult> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "k-means needs at least 2 points, got {n}"
        )));
    }
    if restarts == 0 {
        return Err(Error::InvalidParameter(
            "k-means needs at least one restart".into(),
        ));
    }
    let identical = points.iter().all(|p| p == &points[0]);
    if identical {
        return Ok(KMeansResult {
            assignment: vec![0; n],
            centers: [points[0], points[0]],
            inertia: 0.0,
            restarts_used: restarts,
            degenerate: true,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<KMeansResult> = None;
    for _ in 0..restarts {
        // Random-point initialization with distinct locations; after a few
        // collisions (mostly duplicated inputs) fall back to the first
        // differing point.
        let mut a = points[rng.random_range(0..n)];
        let mut b = points[rng.random_range(0..n)];
        for _ in 0..64 {
            if a != b {
                break;
            }
            a = points[rng.random_range(0..n)];
            b = points[rng.random_range(0..n)];
        }
        if a == b {
            b = *points
                .iter()
                .find(|p| **p != a)
                .expect("points are not all identical");
        }
        let mut centers = [a, b];
        let mut assignment = vec![0u8; n];
        for _ in 0..LLOYD_MAX_ITERS {
            let mut changed = false;
            for (i, p) in points.iter().enumerate() {
                let d0 = sq_dist(p, &centers[0]);
                let d1 = sq_dist(p, &centers[1]);
                let c = u8::from(d1 < d0);
                if assignment[i] != c {
                    assignment[i] = c;
                    changed = true;
                }
            }
            let mut sums = [[0.0f64; 2]; 2];
            let mut counts = [0usize; 2];
            for (i, p) in points.iter().enumerate() {
                let c = assignment[i] as usize;
                sums[c][0] += p[0];
                sums[c][1] += p[1];
                counts[c] += 1;
            }
            for c in 0..2 {
                if counts[c] > 0 {
                    centers[c] = [sums[c][0] / counts[c] as f64, sums[c][1] / counts[c] as f64];
                }
                // An emptied cluster keeps its previous center.
            }
            if !changed {
                break;
            }
        }
        let inertia: f64 = points
            .iter()
            .zip(&assignment)
            .map(|(p, &c)| sq_dist(p, &centers[c as usize]))
            .sum();
        if best.as_ref().is_none_or(|b| inertia < b.inertia) {
            best = Some(KMeansResult {
                assignment,
                centers,
                inertia,
                restarts_used: restarts,
                degenerate: false,
            });
        }
    }
    Ok(best.expect("at least one restart ran"))
}

fn sq_dist(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

/// Regularized spectral clustering: k-means on the rows of the two leading
/// eigenvectors of L_tau (unscaled, unlike the detection embedding).
pub fn scr(
    graph: &Graph,
    epsilon: f64,
    restarts: usize,
    tol: f64,
    seed: u64,
) -> Result<LabelVector> {
    let tau = regularizer_tau(graph, epsilon)?;
    let lap = RegularizedLaplacian::new(graph, tau)?;
    let shifted = Shifted {
        op: &lap,
        shift: 1.0,
    };
    let pairs = leading_eigenpairs(&shifted, 2, tol, seed)?;
    let points: Vec<[f64; 2]> = (0..graph.n())
        .map(|i| [pairs[0].vector[i], pairs[1].vector[i]])
        .collect();
    let km = kmeans(&points, restarts, seed ^ 0x6b5f_c3a1)?;
    LabelVector::new(
        km.assignment
            .iter()
            .map(|&c| if c == 0 { 1 } else { -1 })
            .collect(),
    )
}

/// The regularized modularity operator
/// `B x = (A + tau 1 1^T) x - d_tau (d_tau . x) / m_tau`
/// applied implicitly; d_tau are the regularized degrees d_i + n tau, whose
/// sum m_tau keeps B's row sums at zero.
pub struct ModularityOperator<'g> {
    graph: &'g Graph,
    tau: f64,
    d_tau: Vec<f64>,
    m_tau: f64,
}

impl<'g> ModularityOperator<'g> {
    pub fn new(graph: &'g Graph, tau: f64) -> Result<Self> {
        if graph.total_degree() == 0 {
            return Err(Error::EmptyGraph);
        }
        let n = graph.n() as f64;
        let d_tau: Vec<f64> = (0..graph.n())
            .map(|i| graph.degree(i) as f64 + n * tau)
            .collect();
        let m_tau = d_tau.iter().sum();
        Ok(ModularityOperator {
            graph,
            tau,
            d_tau,
            m_tau,
        })
    }

    /// Upper bound on the spectral norm, used to shift the operator so the
    /// algebraically largest eigenvalue dominates in magnitude.
    pub fn norm_bound(&self) -> f64 {
        let max_deg = (0..self.graph.n())
            .map(|i| self.graph.degree(i))
            .max()
            .unwrap_or(0) as f64;
        let n = self.graph.n() as f64;
        let d_norm_sq = dot(&self.d_tau, &self.d_tau);
        max_deg + self.tau * n + d_norm_sq / self.m_tau
    }
}

impl LinearOperator for ModularityOperator<'_> {
    fn dim(&self) -> usize {
        self.graph.n()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let ones_dot: f64 = x.iter().sum();
        let deg_dot = dot(&self.d_tau, x) / self.m_tau;
        for i in 0..self.graph.n() {
            let mut acc = 0.0;
            for &j in self.graph.neighbors(i) {
                acc += x[j as usize];
            }
            out[i] = acc + self.tau * ones_dot - self.d_tau[i] * deg_dot;
        }
    }
}

/// Leading-eigenvector signs: labels from the signs of the top eigenvector of
/// the regularized modularity operator; zero entries map to +1.
pub fn les(graph: &Graph, epsilon: f64, tol: f64, seed: u64) -> Result<LabelVector> {
    let tau = regularizer_tau(graph, epsilon)?;
    let op = ModularityOperator::new(graph, tau)?;
    let shift = op.norm_bound() + 1.0;
    let shifted = Shifted { op: &op, shift };
    let pairs = leading_eigenpairs(&shifted, 1, tol, seed)?;
    LabelVector::new(
        pairs[0]
            .vector
            .iter()
            .map(|&v| if v < 0.0 { -1 } else { 1 })
            .collect(),
    )
}
