//! Pseudospectral collocation of the MHD Falkner-Skan equation.
//!
//! The residual of the trial expansion is forced to vanish at the `N + 2`
//! Hermite-Gauss nodes mapped onto `(0, inf)`. The unknowns are the `N + 1`
//! coefficients and `lambda`, so the system is square; it is solved by a
//! damped Newton iteration with a forward-difference Jacobian.

use nalgebra::{DMatrix, DVector};

use crate::domain_map::LogMap;
use crate::error::{Error, Result};
use crate::hermite::{gauss_hermite_grid, QuadratureGrid};
use crate::trial::{ProblemParams, TrialSolution};

/// Discretization and iteration settings of one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    /// Expansion order `N`.
    pub order: usize,
    /// Map constant.
    pub k: f64,
    /// Domain scaling.
    pub l: f64,
    /// Target max-norm of the nodal residual.
    pub residual_tol: f64,
    /// Newton stops once the step max-norm falls below this (relative to the unknowns).
    pub step_tol: f64,
    pub max_iter: usize,
    /// Smallest step fraction tried by the line search.
    pub damping_min: f64,
}

impl SolveConfig {
    pub const DEFAULT_K: f64 = 2.0;
    pub const DEFAULT_L: f64 = 1.0;
    pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;
    pub const DEFAULT_STEP_TOL: f64 = 1e-12;
    pub const DEFAULT_MAX_ITER: usize = 100;
    pub const DEFAULT_DAMPING_MIN: f64 = 1.0 / 1024.0;

    /// Default tolerances for the given `(N, k, l)`.
    pub fn new(order: usize, k: f64, l: f64) -> Self {
        Self {
            order,
            k,
            l,
            residual_tol: Self::DEFAULT_RESIDUAL_TOL,
            step_tol: Self::DEFAULT_STEP_TOL,
            max_iter: Self::DEFAULT_MAX_ITER,
            damping_min: Self::DEFAULT_DAMPING_MIN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 4 {
            return Err(Error::Domain(format!(
                "expansion order N must be >= 4 (got {})",
                self.order
            )));
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::Domain(format!(
                "map constant k must be positive (got {})",
                self.k
            )));
        }
        if !(self.l.is_finite() && self.l > 0.0) {
            return Err(Error::Domain(format!(
                "scaling l must be positive (got {})",
                self.l
            )));
        }
        if !(self.residual_tol > 0.0 && self.step_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        if self.max_iter < 1 {
            return Err(Error::Domain("max_iter must be at least 1".into()));
        }
        if !(self.damping_min > 0.0 && self.damping_min <= 1.0) {
            return Err(Error::Domain(format!(
                "damping_min must lie in (0, 1] (got {})",
                self.damping_min
            )));
        }
        Ok(())
    }

    /// The `N + 2` point Hermite-Gauss grid used for collocation.
    pub fn grid(&self) -> Result<QuadratureGrid> {
        gauss_hermite_grid(self.order + 2)
    }

    /// Collocation points on the half line.
    pub fn collocation_points(&self) -> Result<Vec<f64>> {
        Ok(LogMap::new(self.k)?.transform_nodes(&self.grid()?))
    }
}

/// Outcome of a Newton solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: TrialSolution,
    /// Max-norm of the residual at the collocation points.
    pub residual_norm: f64,
    /// Accepted Newton steps.
    pub iterations: usize,
    pub skin_friction: f64,
    pub converged: bool,
}

/// `F''' + F F'' + beta (1 - F'^2) - M^2 (F' - 1)` at `tau > 0`.
pub fn residual_at(solution: &TrialSolution, params: &ProblemParams, tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("residual needs tau > 0 (got {tau})")));
    }
    Ok(params.residual(solution.eval_all(tau)?))
}

/// Residuals at the mapped nodes of `grid`, which must have `N + 2` points.
pub fn assemble_system(
    solution: &TrialSolution,
    params: &ProblemParams,
    grid: &QuadratureGrid,
) -> Result<Vec<f64>> {
    let expected = solution.order() + 2;
    if grid.size() != expected {
        return Err(Error::Contract(format!(
            "order {} needs {expected} collocation nodes, grid has {}",
            solution.order(),
            grid.size()
        )));
    }
    let points = LogMap::new(solution.k())?.transform_nodes(grid);
    residuals_at(solution, params, &points)
}

fn residuals_at(
    solution: &TrialSolution,
    params: &ProblemParams,
    points: &[f64],
) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|&tau| residual_at(solution, params, tau))
        .collect()
}

/// Largest `|Res|` at `samples` log-spaced points between the first and
/// last collocation point.
pub fn max_residual_between_nodes(
    solution: &TrialSolution,
    params: &ProblemParams,
    samples: usize,
) -> Result<f64> {
    let grid = gauss_hermite_grid(solution.order() + 2)?;
    let points = LogMap::new(solution.k())?.transform_nodes(&grid);
    let lo = points[0].ln();
    let hi = points[points.len() - 1].ln();
    let mut worst = 0.0f64;
    for i in 0..samples {
        let frac = if samples > 1 {
            i as f64 / (samples - 1) as f64
        } else {
            0.5
        };
        let tau = (lo + frac * (hi - lo)).exp();
        worst = worst.max(residual_at(solution, params, tau)?.abs());
    }
    Ok(worst)
}

/// Starting point: zero coefficients and `lambda = 2 / (l^2 max(M, 1))`,
/// i.e. a wall shear of `max(M, 1)`.
pub fn initial_guess(params: &ProblemParams, config: &SolveConfig) -> Result<TrialSolution> {
    let lambda = 2.0 / (config.l * config.l * params.magnetic().max(1.0));
    TrialSolution::zeros(config.order, lambda, config.k, config.l)
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |acc, x| {
        if x.is_nan() {
            f64::INFINITY
        } else {
            acc.max(x.abs())
        }
    })
}

struct System<'a> {
    params: &'a ProblemParams,
    points: Vec<f64>,
    k: f64,
    l: f64,
}

impl System<'_> {
    fn unpack(&self, unknowns: &[f64]) -> Result<TrialSolution> {
        let (coeffs, lambda) = unknowns.split_at(unknowns.len() - 1);
        TrialSolution::new(coeffs.to_vec(), lambda[0], self.k, self.l)
    }

    fn residuals(&self, unknowns: &[f64]) -> Result<Vec<f64>> {
        residuals_at(&self.unpack(unknowns)?, self.params, &self.points)
    }

    fn jacobian(&self, unknowns: &[f64], base: &[f64]) -> Result<DMatrix<f64>> {
        let n = unknowns.len();
        let mut jac = DMatrix::<f64>::zeros(n, n);
        let mut shifted = unknowns.to_vec();
        for j in 0..n {
            let h = (1e-7 * unknowns[j].abs()).max(1e-7);
            shifted[j] = unknowns[j] + h;
            let r = self.residuals(&shifted)?;
            shifted[j] = unknowns[j];
            for i in 0..n {
                jac[(i, j)] = (r[i] - base[i]) / h;
            }
        }
        Ok(jac)
    }
}

/// Solves the collocation system by damped Newton iteration.
///
/// `initial` must share `(N, k, l)` with `config`; without it the
/// [`initial_guess`] is used. Running out of iterations or line-search
/// room yields a report with `converged == false`, not an error.
pub fn newton_solve(
    params: &ProblemParams,
    config: &SolveConfig,
    initial: Option<&TrialSolution>,
) -> Result<SolveReport> {
    config.validate()?;
    let start = match initial {
        Some(sol) => {
            if sol.order() != config.order || sol.k() != config.k || sol.l() != config.l {
                return Err(Error::Contract(format!(
                    "initial guess has (N, k, l) = ({}, {}, {}), config has ({}, {}, {})",
                    sol.order(),
                    sol.k(),
                    sol.l(),
                    config.order,
                    config.k,
                    config.l
                )));
            }
            sol.clone()
        }
        None => initial_guess(params, config)?,
    };

    let system = System {
        params,
        points: config.collocation_points()?,
        k: config.k,
        l: config.l,
    };
    let mut unknowns: Vec<f64> = start.coeffs().to_vec();
    unknowns.push(start.lambda());
    let mut residual = system.residuals(&unknowns)?;
    let mut norm = max_norm(&residual);
    if !norm.is_finite() {
        return Err(Error::Numerical(
            "residual is not finite at the initial guess".into(),
        ));
    }

    let mut iterations = 0;
    let mut converged = norm <= config.residual_tol;
    while !converged && iterations < config.max_iter {
        let jac = system.jacobian(&unknowns, &residual)?;
        let lu = jac.lu();
        let pivots = lu.u().diagonal();
        let largest = pivots.iter().fold(0.0f64, |a, p| a.max(p.abs()));
        let smallest = pivots.iter().fold(f64::INFINITY, |a, p| a.min(p.abs()));
        let pivot_ratio = if largest > 0.0 {
            smallest / largest
        } else {
            0.0
        };
        if !(pivot_ratio > unknowns.len() as f64 * f64::EPSILON) {
            return Err(Error::SingularJacobian {
                iteration: iterations,
                pivot_ratio,
            });
        }
        let rhs = DVector::from_iterator(residual.len(), residual.iter().map(|r| -r));
        let step = lu.solve(&rhs).ok_or(Error::SingularJacobian {
            iteration: iterations,
            pivot_ratio,
        })?;

        let scale = 1.0 + max_norm(&unknowns);
        if max_norm(step.as_slice()) <= config.step_tol * scale {
            converged = true;
            break;
        }

        let mut alpha = 1.0;
        let mut accepted = None;
        while alpha >= config.damping_min {
            let trial: Vec<f64> = unknowns
                .iter()
                .zip(step.iter())
                .map(|(u, d)| u + alpha * d)
                .collect();
            // a non-positive lambda or a non-finite residual counts as no decrease
            if let Ok(r) = system.residuals(&trial) {
                let n = max_norm(&r);
                if n < norm {
                    accepted = Some((trial, r, n));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((trial, r, n)) = accepted else {
            break;
        };
        unknowns = trial;
        residual = r;
        norm = n;
        iterations += 1;
        converged = norm <= config.residual_tol;
    }

    let solution = system.unpack(&unknowns)?;
    let skin_friction = solution.skin_friction()?;
    Ok(SolveReport {
        solution,
        residual_norm: norm,
        iterations,
        skin_friction,
        converged,
    })
}

/// Walks `M` up through `magnetic_steps`, warm-starting each solve from the
/// previous one. Returns the first non-converged report if a step fails.
pub fn continuation_solve(
    params_target: &ProblemParams,
    config: &SolveConfig,
    magnetic_steps: &[f64],
) -> Result<SolveReport> {
    let Some(&last) = magnetic_steps.last() else {
        return Err(Error::Domain(
            "continuation needs at least one M value".into(),
        ));
    };
    if magnetic_steps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(
            "continuation M values must be strictly ascending".into(),
        ));
    }
    let target = params_target.magnetic();
    if (last - target).abs() > 1e-12 * target.abs().max(1.0) {
        return Err(Error::Domain(format!(
            "continuation must end at the target M = {target} (ends at {last})"
        )));
    }

    let mut previous: Option<TrialSolution> = None;
    let mut report = None;
    for &m_val in magnetic_steps {
        let params = params_target.with_magnetic(m_val)?;
        let step = newton_solve(&params, config, previous.as_ref())?;
        if !step.converged {
            return Ok(step);
        }
        previous = Some(step.solution.clone());
        report = Some(step);
    }
    Ok(report.expect("at least one continuation step"))
}
