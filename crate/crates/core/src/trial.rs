//! Boundary-adapted trial expansion for the Falkner-Skan equation.
//!
//! With `s = tau / l` the approximant is
//!
//! ```text
//! F(tau) = p(s) + q(s) * B(s)
//! p(s)   = s^2 / (s + lambda)
//! q(s)   = s^2 / (s + 1)
//! B(s)   = sum_i a_i H~_i(ln(s) / k)
//! ```
//!
//! `p` and `q` both vanish to second order at the wall, so `F(0) = F'(0) = 0`
//! for every coefficient vector, and `p'(s) -> 1` carries the free-stream
//! condition. `lambda` is an unknown of the collocation system and fixes
//! the wall shear: `F''(0) = 2 / (lambda l^2)`.

use serde::{Deserialize, Serialize};

use crate::domain_map::{chain_factors, UNDERFLOW_CUTOFF};
use crate::error::{Error, Result};
use crate::hermite::eval_expansion;

/// Physical parameters of the MHD Falkner-Skan equation
/// `f''' + f f'' + beta (1 - f'^2) - M^2 (f' - 1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    m: f64,
    beta: f64,
    magnetic: f64,
}

impl ProblemParams {
    /// `m` is the wedge power and `magnetic` the parameter `M`.
    pub fn new(m: f64, magnetic: f64) -> Result<Self> {
        if !m.is_finite() || (m + 1.0).abs() < 1e-12 {
            return Err(Error::Domain(format!(
                "wedge power m must be finite and != -1 (got {m})"
            )));
        }
        if !(magnetic.is_finite() && magnetic >= 0.0) {
            return Err(Error::Domain(format!(
                "magnetic parameter M must be non-negative (got {magnetic})"
            )));
        }
        Ok(Self {
            m,
            beta: 2.0 * m / (m + 1.0),
            magnetic,
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Pressure-gradient parameter `2m / (m + 1)`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn magnetic(&self) -> f64 {
        self.magnetic
    }

    /// Same `m`, different `M`.
    pub fn with_magnetic(&self, magnetic: f64) -> Result<Self> {
        Self::new(self.m, magnetic)
    }

    /// Left-hand side of the ODE for given `(f, f', f'', f''')`.
    pub fn residual(&self, f: [f64; 4]) -> f64 {
        let [f0, f1, f2, f3] = f;
        f3 + f0 * f2 + self.beta * (1.0 - f1 * f1) - self.magnetic * self.magnetic * (f1 - 1.0)
    }
}

/// Coefficients `a_0..a_N`, the asymptote parameter `lambda`, the map
/// constant `k` and the scaling `l` of one trial expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSolution {
    coeffs: Vec<f64>,
    lambda: f64,
    k: f64,
    l: f64,
}

impl TrialSolution {
    pub fn new(coeffs: Vec<f64>, lambda: f64, k: f64, l: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain(
                "trial expansion needs at least one coefficient".into(),
            ));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("non-finite coefficient {bad}")));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Invariant(format!(
                "lambda must be positive (got {lambda})"
            )));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Domain(format!(
                "map constant k must be positive (got {k})"
            )));
        }
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::Domain(format!(
                "scaling l must be positive (got {l})"
            )));
        }
        Ok(Self {
            coeffs,
            lambda,
            k,
            l,
        })
    }

    /// All-zero coefficients of order `order`.
    pub fn zeros(order: usize, lambda: f64, k: f64, l: f64) -> Result<Self> {
        Self::new(vec![0.0; order + 1], lambda, k, l)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// Expansion order `N` (one less than the number of coefficients).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `d^p F / d tau^p` at `tau` for `p` in `0..=3`.
    pub fn eval(&self, tau: f64, deriv_order: u32) -> Result<f64> {
        if deriv_order > 3 {
            return Err(Error::Domain(format!(
                "derivative order must be in 0..=3 (got {deriv_order})"
            )));
        }
        Ok(self.eval_all(tau)?[deriv_order as usize])
    }

    /// `F, F', F'', F'''` at `tau`.
    pub fn eval_all(&self, tau: f64) -> Result<[f64; 4]> {
        if !(tau >= 0.0) || tau.is_infinite() {
            return Err(Error::Domain(format!(
                "tau must be finite and >= 0 (got {tau})"
            )));
        }
        let s = tau / self.l;
        let p = rational_part(s, self.lambda);
        let q = rational_part(s, 1.0);
        let b = self.basis_part(s);
        let f = [
            p[0] + q[0] * b[0],
            p[1] + q[1] * b[0] + q[0] * b[1],
            p[2] + q[2] * b[0] + 2.0 * q[1] * b[1] + q[0] * b[2],
            p[3] + q[3] * b[0] + 3.0 * q[2] * b[1] + 3.0 * q[1] * b[2] + q[0] * b[3],
        ];
        let inv_l = 1.0 / self.l;
        Ok([
            f[0],
            f[1] * inv_l,
            f[2] * inv_l * inv_l,
            f[3] * inv_l * inv_l * inv_l,
        ])
    }

    /// Wall shear `F''(0) = 2 / (lambda l^2)`.
    ///
    /// The basis term and all of its derivatives vanish at the wall faster
    /// than any power of `tau`, so only `p` contributes.
    pub fn skin_friction(&self) -> Result<f64> {
        if !(self.lambda > 0.0) {
            return Err(Error::Invariant(format!(
                "lambda must be positive (got {})",
                self.lambda
            )));
        }
        Ok(2.0 / (self.lambda * self.l * self.l))
    }

    /// `B(s)` and its first three `s`-derivatives.
    fn basis_part(&self, s: f64) -> [f64; 4] {
        if s < UNDERFLOW_CUTOFF {
            return [0.0; 4];
        }
        let t = s.ln() / self.k;
        let g = eval_expansion(&self.coeffs, t);
        // s > 0 here, chain_factors cannot fail
        let d = chain_factors(s, self.k, [g[1], g[2], g[3]]).unwrap_or([0.0; 3]);
        [g[0], d[0], d[1], d[2]]
    }
}

/// `s^2/(s+c)` and its first three derivatives.
fn rational_part(s: f64, c: f64) -> [f64; 4] {
    let d = s + c;
    let c2 = c * c;
    [
        s * s / d,
        1.0 - c2 / (d * d),
        2.0 * c2 / (d * d * d),
        -6.0 * c2 / (d * d * d * d),
    ]
}

/// On-disk form of a solved expansion.
///
/// ```json
/// {"m": .., "M": .., "N": .., "k": .., "l": .., "lambda": .., "coeffs": [..]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub m: f64,
    #[serde(rename = "M")]
    pub magnetic: f64,
    #[serde(rename = "N")]
    pub order: usize,
    pub k: f64,
    pub l: f64,
    pub lambda: f64,
    pub coeffs: Vec<f64>,
}

impl SolutionDocument {
    pub fn new(params: &ProblemParams, solution: &TrialSolution) -> Self {
        Self {
            m: params.m(),
            magnetic: params.magnetic(),
            order: solution.order(),
            k: solution.k(),
            l: solution.l(),
            lambda: solution.lambda(),
            coeffs: solution.coeffs().to_vec(),
        }
    }

    pub fn params(&self) -> Result<ProblemParams> {
        ProblemParams::new(self.m, self.magnetic)
    }

    pub fn solution(&self) -> Result<TrialSolution> {
        if self.coeffs.len() != self.order + 1 {
            return Err(Error::Contract(format!(
                "N = {} but {} coefficients given",
                self.order,
                self.coeffs.len()
            )));
        }
        TrialSolution::new(self.coeffs.clone(), self.lambda, self.k, self.l)
    }
}
