//! Spectral embedding from the regularized graph Laplacian.
//!
//! The two leading eigenvectors of
//! `L_tau = D_tau^{-1/2} (A + tau 1 1^T) D_tau^{-1/2}`
//! are computed on the implicit operator (the dense rank-one term is never
//! materialized), rescaled by `D_tau^{1/2}`, and orthonormalized into a 2 x n
//! basis whose row space approximates the leading eigenspace of the expected
//! adjacency matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{axpy, dot, norm, scale, tridiag_eigen, LinearOperator, Shifted};

/// Default regularization fraction; the embedding is insensitive to it over
/// a wide range.
pub const DEFAULT_EPSILON: f64 = 0.25;

/// Default eigensolver residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Regularization constant `tau = epsilon * (average degree) / n`, the
/// observed-degree stand-in for the unknown expected degree.
pub fn regularizer_tau(graph: &Graph, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    if graph.n() == 0 || graph.total_degree() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(epsilon * graph.average_degree() / graph.n() as f64)
}

/// The regularized Laplacian applied implicitly in O(m + n).
pub struct RegularizedLaplacian<'g> {
    graph: &'g Graph,
    tau: f64,
    dtau_inv_sqrt: Vec<f64>,
}

impl<'g> RegularizedLaplacian<'g> {
    pub fn new(graph: &'g Graph, tau: f64) -> Result<Self> {
        if tau <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tau must be positive, got {tau}"
            )));
        }
        let n = graph.n() as f64;
        let dtau_inv_sqrt = (0..graph.n())
            .map(|i| 1.0 / (graph.degree(i) as f64 + n * tau).sqrt())
            .collect();
        Ok(RegularizedLaplacian {
            graph,
            tau,
            dtau_inv_sqrt,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// sqrt of the regularized degree d_i + n*tau.
    pub fn dtau_sqrt(&self, i: usize) -> f64 {
        1.0 / self.dtau_inv_sqrt[i]
    }
}

impl LinearOperator for RegularizedLaplacian<'_> {
    fn dim(&self) -> usize {
        self.graph.n()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.graph.n();
        let mut z = vec![0.0; n];
        for i in 0..n {
            z[i] = self.dtau_inv_sqrt[i] * x[i];
        }
        let ones_dot: f64 = z.iter().sum();
        for i in 0..n {
            let mut acc = 0.0;
            for &j in self.graph.neighbors(i) {
                acc += z[j as usize];
            }
            out[i] = self.dtau_inv_sqrt[i] * (acc + self.tau * ones_dot);
        }
    }
}

/// y = L_tau x without materializing anything dense.
pub fn regularized_laplacian_apply(graph: &Graph, tau: f64, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != graph.n() {
        return Err(Error::LengthMismatch {
            expected: graph.n(),
            got: x.len(),
        });
    }
    let op = RegularizedLaplacian::new(graph, tau)?;
    let mut out = vec![0.0; graph.n()];
    op.apply(x, &mut out);
    Ok(out)
}

/// One converged eigenpair.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Knobs for `leading_eigenpairs_opts`; the plain entry point uses defaults.
#[derive(Debug, Clone)]
pub struct EigenOptions {
    pub tol: f64,
    pub seed: u64,
    /// Cap on operator applications; defaults to max(10 n, 200).
    pub max_applies: Option<usize>,
}

/// Leading eigenpairs of a symmetric operator, ordered by descending
/// magnitude. Each returned pair satisfies `||A v - lambda v|| <= tol` and the
/// vectors are mutually orthonormal. Deterministic for a fixed seed.
pub fn leading_eigenpairs<O: LinearOperator + ?Sized>(
    op: &O,
    k: usize,
    tol: f64,
    seed: u64,
) -> Result<Vec<EigenPair>> {
    leading_eigenpairs_opts(
        op,
        k,
        &EigenOptions {
            tol,
            seed,
            max_applies: None,
        },
    )
}

/// Lanczos iteration with full reorthogonalization, deflated against already
/// converged pairs and restarted on breakdown, so exactly degenerate leading
/// eigenvalues still yield an orthonormal basis of the invariant subspace.
pub fn leading_eigenpairs_opts<O: LinearOperator + ?Sized>(
    op: &O,
    k: usize,
    opts: &EigenOptions,
) -> Result<Vec<EigenPair>> {
    let n = op.dim();
    let tol = opts.tol;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "cannot extract {k} orthonormal eigenvectors from dimension {n}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter("tol must be positive".into()));
    }
    let budget = opts.max_applies.unwrap_or((10 * n).max(200));
    let mut applies = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut locked: Vec<EigenPair> = Vec::new();
    let max_basis = n.min(600);

    let fail = |locked: &[EigenPair], applies: usize| Error::EigenNoConvergence {
        index: locked.len(),
        applies,
    };

    while locked.len() < k {
        if applies >= budget {
            return Err(fail(&locked, applies));
        }
        // Random start orthogonal to everything already locked.
        let mut v = random_unit(&mut rng, n, &locked)?;
        let mut basis: Vec<Vec<f64>> = vec![v.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![0.0; n];

        loop {
            if applies >= budget {
                // Harvest whatever already satisfies the contract before
                // giving up.
                harvest(
                    op,
                    &basis,
                    &alphas,
                    &betas,
                    tol,
                    k,
                    &mut locked,
                    &mut applies,
                    budget,
                )?;
                if locked.len() >= k {
                    break;
                }
                return Err(fail(&locked, applies));
            }
            op.apply(&v, &mut w);
            applies += 1;
            let alpha = dot(&v, &w);
            axpy(&mut w, -alpha, &v);
            if let Some(beta_prev) = betas.last() {
                let prev = &basis[basis.len() - 2];
                axpy(&mut w, -beta_prev, prev);
            }
            // Full reorthogonalization (two passes) keeps the basis clean and
            // the deflation exact.
            for _ in 0..2 {
                for p in &locked {
                    let c = dot(&w, &p.vector);
                    axpy(&mut w, -c, &p.vector);
                }
                for b in &basis {
                    let c = dot(&w, b);
                    axpy(&mut w, -c, b);
                }
            }
            alphas.push(alpha);
            let beta = norm(&w);
            let dim = alphas.len();
            let scale_est = alphas.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
            let breakdown = beta <= 1e3 * f64::EPSILON * scale_est * (n as f64).sqrt();

            let due =
                dim.is_multiple_of(10) || dim == max_basis || breakdown || dim == n - locked.len();
            if due {
                let need = k - locked.len();
                let done = harvest_if_converged(
                    op,
                    &basis,
                    &alphas,
                    &betas,
                    beta,
                    tol,
                    need,
                    &mut locked,
                    &mut applies,
                    budget,
                )?;
                if done {
                    break;
                }
            }
            if breakdown || dim == max_basis || dim == n - locked.len() {
                // Krylov space exhausted for this start vector: keep whatever
                // converged and restart deflated.
                harvest(
                    op,
                    &basis,
                    &alphas,
                    &betas,
                    tol,
                    k,
                    &mut locked,
                    &mut applies,
                    budget,
                )?;
                break;
            }
            scale(&mut w, 1.0 / beta);
            betas.push(beta);
            basis.push(w.clone());
            v.copy_from_slice(&w);
        }
    }

    locked.sort_by(|a, b| {
        b.value
            .abs()
            .partial_cmp(&a.value.abs())
            .unwrap()
            .then(b.value.partial_cmp(&a.value).unwrap())
    });
    locked.truncate(k);
    Ok(locked)
}

/// Ritz pairs of the current tridiagonal, ordered by descending magnitude.
/// `betas` may carry one extra trailing entry (pushed for the next Lanczos
/// step); only the first dim-1 couplings belong to the current T.
fn ritz_pairs(alphas: &[f64], betas: &[f64]) -> Result<Vec<(f64, Vec<f64>)>> {
    let dim = alphas.len();
    let (values, vectors) = tridiag_eigen(alphas, &betas[..dim - 1])?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .abs()
            .partial_cmp(&values[a].abs())
            .unwrap()
            .then(values[b].partial_cmp(&values[a]).unwrap())
    });
    Ok(order
        .into_iter()
        .map(|col| {
            let coeffs: Vec<f64> = (0..dim).map(|row| vectors[row * dim + col]).collect();
            (values[col], coeffs)
        })
        .collect())
}

/// Checks the top `need` Ritz pairs; locks them all if every residual bound
/// and verified residual meets tol. Returns true when the caller can stop.
#[allow(clippy::too_many_arguments)]
fn harvest_if_converged<O: LinearOperator + ?Sized>(
    op: &O,
    basis: &[Vec<f64>],
    alphas: &[f64],
    betas: &[f64],
    beta_last: f64,
    tol: f64,
    need: usize,
    locked: &mut Vec<EigenPair>,
    applies: &mut usize,
    budget: usize,
) -> Result<bool> {
    let dim = alphas.len();
    if dim < need {
        return Ok(false);
    }
    let pairs = ritz_pairs(alphas, betas)?;
    let bound_ok = pairs
        .iter()
        .take(need)
        .all(|(_, coeffs)| beta_last * coeffs[dim - 1].abs() <= 0.5 * tol);
    if !bound_ok {
        return Ok(false);
    }
    let mut accepted = Vec::new();
    for (_, coeffs) in pairs.iter().take(need) {
        if *applies >= budget {
            return Ok(false);
        }
        match verified_pair(op, basis, coeffs, tol, applies) {
            Some(pair) => accepted.push(pair),
            None => return Ok(false),
        }
    }
    locked.extend(accepted);
    Ok(true)
}

/// Harvests every Ritz pair (up to the number still needed) whose verified
/// residual meets tol. Used on breakdown / exhaustion.
#[allow(clippy::too_many_arguments)]
fn harvest<O: LinearOperator + ?Sized>(
    op: &O,
    basis: &[Vec<f64>],
    alphas: &[f64],
    betas: &[f64],
    tol: f64,
    k: usize,
    locked: &mut Vec<EigenPair>,
    applies: &mut usize,
    budget: usize,
) -> Result<()> {
    if alphas.is_empty() {
        return Ok(());
    }
    let pairs = ritz_pairs(alphas, betas)?;
    for (_, coeffs) in &pairs {
        if locked.len() >= k || *applies >= budget {
            break;
        }
        if let Some(pair) = verified_pair(op, basis, coeffs, tol, applies) {
            locked.push(pair);
        }
    }
    Ok(())
}

/// Assembles a Ritz vector and accepts it only if the raw residual
/// `||A y - theta y||` meets tol; theta is the fresh Rayleigh quotient.
fn verified_pair<O: LinearOperator + ?Sized>(
    op: &O,
    basis: &[Vec<f64>],
    coeffs: &[f64],
    tol: f64,
    applies: &mut usize,
) -> Option<EigenPair> {
    let n = basis[0].len();
    let mut y = vec![0.0; n];
    for (c, b) in coeffs.iter().zip(basis) {
        axpy(&mut y, *c, b);
    }
    let nrm = norm(&y);
    if nrm < 1e-12 {
        return None;
    }
    scale(&mut y, 1.0 / nrm);
    let mut ay = vec![0.0; n];
    op.apply(&y, &mut ay);
    *applies += 1;
    let theta = dot(&y, &ay);
    axpy(&mut ay, -theta, &y);
    if norm(&ay) <= tol {
        Some(EigenPair {
            value: theta,
            vector: y,
        })
    } else {
        None
    }
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize, locked: &[EigenPair]) -> Result<Vec<f64>> {
    for _ in 0..32 {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for p in locked {
                let c = dot(&v, &p.vector);
                axpy(&mut v, -c, &p.vector);
            }
        }
        let nrm = norm(&v);
        if nrm > 1e-8 {
            scale(&mut v, 1.0 / nrm);
            return Ok(v);
        }
    }
    Err(Error::InvalidParameter(
        "failed to draw a start vector".into(),
    ))
}

/// 2 x n orthonormal basis spanning the scaled leading eigenvectors of the
/// regularized Laplacian.
#[derive(Debug, Clone)]
pub struct Embedding {
    /// Two orthonormal rows of length n.
    pub basis: [Vec<f64>; 2],
    pub tau: f64,
    pub epsilon: f64,
    /// The two leading eigenvalues of L_tau, for diagnostics.
    pub eigenvalues: [f64; 2],
    /// Set when the leading eigenvalue gap fell below the solver tolerance;
    /// the basis is then an arbitrary orthonormal basis of the subspace.
    pub eigen_gap_warning: bool,
}

impl Embedding {
    pub fn n(&self) -> usize {
        self.basis[0].len()
    }

    /// Column i of the basis as a point in the plane.
    pub fn column(&self, i: usize) -> [f64; 2] {
        [self.basis[0][i], self.basis[1][i]]
    }

    /// Projection U e of a +1/-1 label vector.
    pub fn project(&self, labels: &crate::label::LabelVector) -> [f64; 2] {
        let mut p = [0.0; 2];
        for i in 0..self.n() {
            let s = labels.get(i) as f64;
            p[0] += s * self.basis[0][i];
            p[1] += s * self.basis[1][i];
        }
        p
    }

    /// Applies a 2x2 orthogonal transform to the rows; the detection output
    /// is invariant under this.
    pub fn rotated(&self, m: [[f64; 2]; 2]) -> Embedding {
        let n = self.n();
        let mut rows = [vec![0.0; n], vec![0.0; n]];
        for i in 0..n {
            let c = self.column(i);
            rows[0][i] = m[0][0] * c[0] + m[0][1] * c[1];
            rows[1][i] = m[1][0] * c[0] + m[1][1] * c[1];
        }
        Embedding {
            basis: rows,
            tau: self.tau,
            epsilon: self.epsilon,
            eigenvalues: self.eigenvalues,
            eigen_gap_warning: self.eigen_gap_warning,
        }
    }

    /// Writes the basis as CSV, one row per line.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> Result<()> {
        for row in &self.basis {
            let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Computes the two leading eigenvectors u_1, u_2 of L_tau, forms
/// D_tau^{1/2} u_i, and orthonormalizes the pair into the embedding basis.
pub fn embedding(graph: &Graph, epsilon: f64, tol: f64, seed: u64) -> Result<Embedding> {
    let tau = regularizer_tau(graph, epsilon)?;
    let n = graph.n();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "graph must have at least 2 nodes for a 2-dimensional embedding".into(),
        ));
    }
    let lap = RegularizedLaplacian::new(graph, tau)?;
    // L_tau has spectrum in [-1, 1] with leading eigenvalue 1; shifting by +1
    // makes the algebraically largest pair dominant in magnitude.
    let shifted = Shifted {
        op: &lap,
        shift: 1.0,
    };
    let pairs = leading_eigenpairs(&shifted, 2, tol, seed)?;
    let values = [pairs[0].value - 1.0, pairs[1].value - 1.0];
    let gap = (values[0] - values[1]).abs();

    let mut rows = [Vec::new(), Vec::new()];
    for (slot, pair) in rows.iter_mut().zip(&pairs) {
        let mut w: Vec<f64> = (0..n).map(|i| lap.dtau_sqrt(i) * pair.vector[i]).collect();
        let nrm = norm(&w);
        scale(&mut w, 1.0 / nrm);
        *slot = w;
    }
    // Gram-Schmidt the second row against the first.
    let c = dot(&rows[1].clone(), &rows[0]);
    let first = rows[0].clone();
    axpy(&mut rows[1], -c, &first);
    let nrm = norm(&rows[1]);
    if nrm < 1e-12 {
        return Err(Error::InvalidParameter(
            "scaled eigenvectors are colinear; no 2-dimensional embedding".into(),
        ));
    }
    scale(&mut rows[1], 1.0 / nrm);

    Ok(Embedding {
        basis: rows,
        tau,
        epsilon,
        eigenvalues: values,
        eigen_gap_warning: gap < tol,
    })
}
