//! Normalized Hermite functions and Hermite-Gauss quadrature.
//!
//! The normalized Hermite function of degree `n` is
//!
//! ```text
//! H~_n(x) = e^{-x^2/2} H_n(x) / sqrt(2^n n!)
//! ```
//!
//! It is evaluated through its own three-term recurrence
//! `H~_{n+1} = x sqrt(2/(n+1)) H~_n - sqrt(n/(n+1)) H~_{n-1}`,
//! so the physicists' polynomial `H_n` (which overflows for moderate `n`)
//! is never formed. Derivatives are obtained by applying
//! `H~'_n = sqrt(n/2) H~_{n-1} - sqrt((n+1)/2) H~_{n+1}` to coefficient
//! vectors, which keeps every derivative inside the same function family.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Mantissas above this are pulled back into range during the recurrence.
const RESCALE_THRESHOLD: f64 = 1e150;

/// Evaluates `H~_0(x) .. H~_{max_n}(x)`.
///
/// The recurrence is started from 1 instead of `e^{-x^2/2}` and the
/// Gaussian factor is applied at the end together with a running
/// log-scale, so neither underflow of the Gaussian nor growth of the
/// polynomial part can poison intermediate values.
pub fn hermite_functions(max_n: usize, x: f64) -> Vec<f64> {
    let gaussian_log = -0.5 * x * x;
    let mut out = Vec::with_capacity(max_n + 1);
    let mut log_scale = 0.0;
    let mut prev = 1.0;
    out.push(gaussian_log.exp());
    if max_n == 0 {
        return out;
    }
    let mut cur = SQRT_2 * x;
    out.push(cur * gaussian_log.exp());
    for n in 1..max_n {
        let nf = n as f64;
        let mut next = x * (2.0 / (nf + 1.0)).sqrt() * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        if next.abs() > RESCALE_THRESHOLD {
            next /= RESCALE_THRESHOLD;
            prev /= RESCALE_THRESHOLD;
            log_scale += RESCALE_THRESHOLD.ln();
        }
        cur = next;
        out.push(cur * (log_scale + gaussian_log).exp());
    }
    out
}

/// `H~_n(x)`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    hermite_functions(n, x)[n]
}

/// Coefficients of `g'` given the coefficients of `g = sum a_n H~_n`.
///
/// The result is one entry longer than the input.
pub fn differentiate_expansion(coeffs: &[f64]) -> Vec<f64> {
    let len = coeffs.len() + 1;
    let at = |i: isize| -> f64 {
        if i < 0 || i as usize >= coeffs.len() {
            0.0
        } else {
            coeffs[i as usize]
        }
    };
    (0..len)
        .map(|m| {
            let mf = m as f64;
            let mi = m as isize;
            at(mi + 1) * ((mf + 1.0) / 2.0).sqrt() - at(mi - 1) * (mf / 2.0).sqrt()
        })
        .collect()
}

/// Value and first three derivatives of `sum a_n H~_n` at `x`.
pub fn eval_expansion(coeffs: &[f64], x: f64) -> [f64; 4] {
    if coeffs.is_empty() {
        return [0.0; 4];
    }
    let d1 = differentiate_expansion(coeffs);
    let d2 = differentiate_expansion(&d1);
    let d3 = differentiate_expansion(&d2);
    let table = hermite_functions(d3.len() - 1, x);
    let dot = |c: &[f64]| c.iter().zip(&table).map(|(a, h)| a * h).sum::<f64>();
    [dot(coeffs), dot(&d1), dot(&d2), dot(&d3)]
}

/// `d^p H~_n / dx^p` at `x` for `p` in `{1, 2, 3}`.
pub fn hermite_function_derivative(n: usize, x: f64, deriv_order: u32) -> Result<f64> {
    if !(1..=3).contains(&deriv_order) {
        return Err(Error::Domain(format!(
            "derivative order must be 1, 2 or 3 (got {deriv_order})"
        )));
    }
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    for _ in 0..deriv_order {
        coeffs = differentiate_expansion(&coeffs);
    }
    let table = hermite_functions(coeffs.len() - 1, x);
    Ok(coeffs.iter().zip(&table).map(|(a, h)| a * h).sum())
}

/// The family `H~_0 .. H~_order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteBasis {
    order: usize,
}

impl HermiteBasis {
    pub fn new(order: usize) -> Self {
        Self { order }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.order + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All basis values at `x`.
    pub fn values(&self, x: f64) -> Vec<f64> {
        hermite_functions(self.order, x)
    }

    pub fn eval(&self, n: usize, x: f64) -> Result<f64> {
        self.check_index(n)?;
        Ok(hermite_function(n, x))
    }

    pub fn derivative(&self, n: usize, x: f64, deriv_order: u32) -> Result<f64> {
        self.check_index(n)?;
        hermite_function_derivative(n, x, deriv_order)
    }

    /// Value and three derivatives of the expansion with the given coefficients.
    pub fn eval_expansion(&self, coeffs: &[f64], x: f64) -> Result<[f64; 4]> {
        if coeffs.len() != self.len() {
            return Err(Error::Contract(format!(
                "expected {} coefficients, got {}",
                self.len(),
                coeffs.len()
            )));
        }
        Ok(eval_expansion(coeffs, x))
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n > self.order {
            return Err(Error::Domain(format!(
                "index {n} exceeds basis order {}",
                self.order
            )));
        }
        Ok(())
    }
}

/// Hermite-Gauss nodes with the weights that integrate `H~_n H~_m` exactly.
///
/// `sum_j weights[j] * p(nodes[j]) == integral of p over the real line` for
/// every `p = e^{-x^2} q` with `deg q <= 2 * size - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// Quadrature sum of `f` over the real line.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Builds the `num_nodes`-point Hermite-Gauss grid.
///
/// Nodes are the eigenvalues of the symmetric Jacobi matrix of the
/// Hermite recurrence (zero diagonal, off-diagonal `sqrt(j/2)`), polished
/// by two Newton steps on `H~_{num_nodes}`. Weights are
/// `sqrt(pi) / (num_nodes * H~_{num_nodes-1}(x_j)^2)`.
pub fn gauss_hermite_grid(num_nodes: usize) -> Result<QuadratureGrid> {
    if num_nodes < 1 {
        return Err(Error::Domain(
            "a quadrature grid needs at least one node".into(),
        ));
    }
    let q = num_nodes;
    let mut jacobi = DMatrix::<f64>::zeros(q, q);
    for j in 1..q {
        let off = (j as f64 / 2.0).sqrt();
        jacobi[(j - 1, j)] = off;
        jacobi[(j, j - 1)] = off;
    }
    let eigen = SymmetricEigen::try_new(jacobi, f64::EPSILON, 10_000).ok_or_else(|| {
        Error::Numerical(format!(
            "symmetric eigensolver did not converge for the {q}-point Jacobi matrix"
        ))
    })?;
    let mut nodes: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    if nodes.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical(
            "non-finite eigenvalue in Jacobi matrix".into(),
        ));
    }
    nodes.sort_by(|a, b| a.total_cmp(b));

    let qf = q as f64;
    for x in nodes.iter_mut() {
        for _ in 0..2 {
            let h = hermite_functions(q, *x);
            let slope = (2.0 * qf).sqrt() * h[q - 1] - *x * h[q];
            if slope != 0.0 {
                *x -= h[q] / slope;
            }
        }
    }
    // exact mirror symmetry
    for j in 0..q / 2 {
        let half = 0.5 * (nodes[q - 1 - j] - nodes[j]);
        nodes[j] = -half;
        nodes[q - 1 - j] = half;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Numerical(format!(
            "polished nodes of the {q}-point grid are not strictly increasing"
        )));
    }

    let weights = nodes
        .iter()
        .map(|&x| {
            let h = hermite_function(q - 1, x);
            PI.sqrt() / (qf * h * h)
        })
        .collect();
    Ok(QuadratureGrid { nodes, weights })
}
