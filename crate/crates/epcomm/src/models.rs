//! Block-model samplers and closed-form population oracles.
//!
//! Networks are generated from a two-community (degree-corrected) stochastic
//! block model. The base probability pattern `P0 = [[w1, r], [r, w2]]` is
//! rescaled so the expected average degree hits a target `lambda`:
//! `P = lambda P0 / ((n-1) (pi^T P0 pi) E[theta]^2)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::label::LabelVector;
use crate::linalg::DenseSym;

/// Hub-node degree multipliers: theta = `low` with probability `low_prob`,
/// otherwise 1. The default is low = 0.2 with probability gamma.
#[derive(Debug, Clone, Copy)]
pub struct ThetaDist {
    pub low: f64,
    pub low_prob: f64,
}

impl ThetaDist {
    pub fn mean(&self) -> f64 {
        self.low * self.low_prob + (1.0 - self.low_prob)
    }
}

/// Generator parameters for one simulated network.
#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    /// Within-community weight pair (w1, w2).
    pub w: (f64, f64),
    /// Out-in probability ratio; larger is harder.
    pub r: f64,
    /// Target expected average degree.
    pub lambda: f64,
    /// Fraction of low-degree nodes (theta = 0.2); gamma = 0 is the plain
    /// block model.
    pub gamma: f64,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n1 + self.n2 != self.n {
            return Err(Error::InvalidParameter(format!(
                "community sizes {} + {} must equal n = {}",
                self.n1, self.n2, self.n
            )));
        }
        if self.gamma.is_nan() || !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be in [0,1], got {}",
                self.gamma
            )));
        }
        if self.lambda.is_nan() || self.lambda <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if self.r < 0.0 || self.w.0 <= 0.0 || self.w.1 <= 0.0 {
            return Err(Error::InvalidParameter(
                "r must be nonnegative and weights positive".into(),
            ));
        }
        Ok(())
    }

    pub fn theta_dist(&self) -> ThetaDist {
        ThetaDist {
            low: 0.2,
            low_prob: self.gamma,
        }
    }

    /// Balanced two-community setting.
    pub fn balanced(n: usize, w: (f64, f64), r: f64, lambda: f64, gamma: f64, seed: u64) -> Self {
        SimConfig {
            n,
            n1: n / 2,
            n2: n - n / 2,
            w,
            r,
            lambda,
            gamma,
            seed,
        }
    }

    /// One tight community of 60 nodes against a 240-node diffuse background,
    /// the standard benchmark for the extraction criterion.
    pub fn extraction_benchmark(lambda: f64, seed: u64) -> Self {
        SimConfig {
            n: 300,
            n1: 60,
            n2: 240,
            w: (0.4, 0.1),
            r: 0.1,
            lambda,
            gamma: 0.0,
            seed,
        }
    }
}

/// The rescaled 2x2 edge probability matrix; errors if the degree target
/// pushes any probability above 1.
pub fn edge_prob_matrix(cfg: &SimConfig) -> Result<[[f64; 2]; 2]> {
    edge_prob_matrix_with_theta(cfg, cfg.theta_dist())
}

pub fn edge_prob_matrix_with_theta(cfg: &SimConfig, theta: ThetaDist) -> Result<[[f64; 2]; 2]> {
    cfg.validate()?;
    let p0 = [[cfg.w.0, cfg.r], [cfg.r, cfg.w.1]];
    let pi = [cfg.n1 as f64 / cfg.n as f64, cfg.n2 as f64 / cfg.n as f64];
    let quad = pi[0] * pi[0] * p0[0][0] + 2.0 * pi[0] * pi[1] * p0[0][1] + pi[1] * pi[1] * p0[1][1];
    let mean_theta = theta.mean();
    let denom = (cfg.n as f64 - 1.0) * quad * mean_theta * mean_theta;
    let mut p = [[0.0; 2]; 2];
    for k in 0..2 {
        for l in 0..2 {
            p[k][l] = cfg.lambda * p0[k][l] / denom;
            if p[k][l] > 1.0 {
                return Err(Error::InfeasibleDegreeTarget { prob: p[k][l] });
            }
        }
    }
    Ok(p)
}

/// Draws one network: fixed labels (first n1 nodes +1), i.i.d. theta, and
/// independent Bernoulli edges on the upper triangle (an O(n^2) pair scan;
/// fine for benchmark sizes). Deterministic per seed.
pub fn sample_dcsbm(cfg: &SimConfig) -> Result<(Graph, LabelVector, Vec<f64>)> {
    sample_dcsbm_with_theta(cfg, cfg.theta_dist())
}

pub fn sample_dcsbm_with_theta(
    cfg: &SimConfig,
    theta_dist: ThetaDist,
) -> Result<(Graph, LabelVector, Vec<f64>)> {
    let p = edge_prob_matrix_with_theta(cfg, theta_dist)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let labels = LabelVector::split(cfg.n1, cfg.n2);
    let theta: Vec<f64> = (0..cfg.n)
        .map(|_| {
            if rng.random::<f64>() < theta_dist.low_prob {
                theta_dist.low
            } else {
                1.0
            }
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..cfg.n {
        let ci = if i < cfg.n1 { 0 } else { 1 };
        for j in (i + 1)..cfg.n {
            let cj = if j < cfg.n1 { 0 } else { 1 };
            let prob = theta[i] * theta[j] * p[ci][cj];
            if rng.random::<f64>() < prob {
                edges.push((i, j));
            }
        }
    }
    let (graph, _, _) = Graph::from_edges(cfg.n, &edges)?;
    Ok((graph, labels, theta))
}

/// Closed-form spectrum of the expected adjacency matrix of the plain block
/// model with probability matrix `(lambda/n) [[1, r], [r, omega]]` (lambda on
/// the expected-degree scale) and community fractions pi1, pi2.
#[derive(Debug, Clone)]
pub struct PopulationSpectrum {
    pub rho1: f64,
    pub rho2: f64,
    /// Unit-norm eigenvectors, piecewise constant on the two communities.
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    /// Level ratios a_i / b_i of the first-community level to the second;
    /// infinite when the vector is supported on the first community only.
    pub r1: f64,
    pub r2: f64,
}

pub fn population_spectrum(
    pi1: f64,
    pi2: f64,
    r: f64,
    omega: f64,
    lambda: f64,
    n: usize,
) -> Result<PopulationSpectrum> {
    if pi1 <= 0.0 || pi2 <= 0.0 || (pi1 + pi2 - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(
            "pi must be positive and sum to 1".into(),
        ));
    }
    let disc = (pi1 + pi2 * omega).powi(2) - 4.0 * pi1 * pi2 * (omega - r * r);
    if disc < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "negative discriminant {disc} (invalid block-model parameters)"
        )));
    }
    let root = disc.sqrt();
    let mu = [
        0.5 * ((pi1 + pi2 * omega) + root),
        0.5 * ((pi1 + pi2 * omega) - root),
    ];
    let n1 = (pi1 * n as f64).round() as usize;
    let n2 = n - n1;

    // Eigenvectors of the 2x2 quotient matrix [[pi1, pi2 r], [pi1 r, pi2 w]]:
    // (a, b) solves the eigen equation for mu_i; pick the better-conditioned
    // of the two cross-row solutions, falling back to the coordinate axes
    // when the quotient is already diagonal (r = 0).
    let mut us = Vec::new();
    let mut ratios = Vec::new();
    for (idx, &m) in mu.iter().enumerate() {
        let cand1 = [pi2 * r, m - pi1]; // from row 1
        let cand2 = [m - pi2 * omega, pi1 * r]; // from row 2
        let n1sq = cand1[0] * cand1[0] + cand1[1] * cand1[1];
        let n2sq = cand2[0] * cand2[0] + cand2[1] * cand2[1];
        let mut ab = if n1sq >= n2sq { cand1 } else { cand2 };
        let scale = (n1sq.max(n2sq)).sqrt();
        if scale < 1e-14 * (1.0 + m.abs()) {
            // Degenerate quotient: any basis works; use the axes.
            ab = if idx == 0 { [1.0, 0.0] } else { [0.0, 1.0] };
        }
        // Normalize so that n1 a^2 + n2 b^2 = 1.
        let nrm = (n1 as f64 * ab[0] * ab[0] + n2 as f64 * ab[1] * ab[1]).sqrt();
        let (a, b) = (ab[0] / nrm, ab[1] / nrm);
        let mut u = vec![a; n1];
        u.extend(std::iter::repeat_n(b, n2));
        us.push(u);
        ratios.push(if b == 0.0 { f64::INFINITY } else { a / b });
    }

    let u2 = us.pop().expect("two eigenvectors");
    let u1 = us.pop().expect("two eigenvectors");
    Ok(PopulationSpectrum {
        rho1: lambda * mu[0],
        rho2: lambda * mu[1],
        u1,
        u2,
        r1: ratios[0],
        r2: ratios[1],
    })
}

const DENSE_GUARD: usize = 1000;

/// Dense expected adjacency of the plain block model draw described by `cfg`
/// (gamma is ignored; entries are P_{c_i c_j} with a zero diagonal). Guarded
/// to n <= 1000; this is a test oracle, not a production path.
pub fn expected_adjacency(cfg: &SimConfig) -> Result<DenseSym> {
    if cfg.n > DENSE_GUARD {
        return Err(Error::InvalidParameter(format!(
            "expected_adjacency is limited to n <= {DENSE_GUARD}, got {}",
            cfg.n
        )));
    }
    let p = edge_prob_matrix_with_theta(
        cfg,
        ThetaDist {
            low: 0.2,
            low_prob: 0.0,
        },
    )?;
    let n1 = cfg.n1;
    Ok(DenseSym::from_fn(cfg.n, |i, j| {
        if i == j {
            0.0
        } else {
            p[usize::from(i >= n1)][usize::from(j >= n1)]
        }
    }))
}

/// Dense expectation matrix matching `population_spectrum` exactly: the full
/// two-block matrix `(lambda/n) [[1, r], [r, omega]]`, diagonal included.
/// Same n <= 1000 guard as `expected_adjacency`.
pub fn population_block_matrix(
    pi1: f64,
    r: f64,
    omega: f64,
    lambda: f64,
    n: usize,
) -> Result<DenseSym> {
    if n > DENSE_GUARD {
        return Err(Error::InvalidParameter(format!(
            "population_block_matrix is limited to n <= {DENSE_GUARD}, got {n}"
        )));
    }
    let n1 = (pi1 * n as f64).round() as usize;
    let scale = lambda / n as f64;
    let p = [[scale, scale * r], [scale * r, scale * omega]];
    Ok(DenseSym::from_fn(n, |i, j| {
        p[usize::from(i >= n1)][usize::from(j >= n1)]
    }))
}
