//! Shooting-method reference solver.
//!
//! Integrates `f''' = -f f'' - beta (1 - f'^2) + M^2 (f' - 1)` from
//! `(f, f', f'')(0) = (0, 0, s)` with classical fixed-step RK4 and searches
//! for the `s` that sends `f'(tau_max)` to 1. Shares no code with the
//! spectral path beyond [`ProblemParams`].
//!
//! Perturbations of the far-field state grow like `e^{M tau}`, so for
//! strong fields every trial trajectory leaves the physical branch well
//! before `tau_max`. The root search therefore classifies a trial slope by
//! the direction in which its trajectory departs from `f' = 1`, which stays
//! reliable long after the terminal value itself has overflowed.

use crate::error::{Error, Result};
use crate::trial::ProblemParams;

/// State magnitude treated as blow-up.
pub const DIVERGENCE_LIMIT: f64 = 1e8;

/// `|f' - 1|` beyond which a trajectory is considered to have left the
/// attached-flow branch.
const DEPARTURE_LIMIT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    /// Truncation length of the integration interval.
    pub tau_max: f64,
    /// RK4 step.
    pub h: f64,
    /// Initial bracket for `f''(0)`.
    pub bracket: (f64, f64),
    /// Accept a root once `|f'(tau_max) - 1|` drops below this.
    pub root_tol: f64,
}

impl ShootingConfig {
    pub const DEFAULT_TAU_MAX: f64 = 10.0;
    pub const DEFAULT_H: f64 = 1e-3;
    pub const DEFAULT_ROOT_TOL: f64 = 1e-14;

    /// Defaults with the bracket `(0.1, 1.5 max(M,1) max(1, sqrt(1+beta)))`.
    pub fn for_params(params: &ProblemParams) -> Self {
        let growth = (1.0 + params.beta()).max(0.0).sqrt().max(1.0);
        Self {
            tau_max: Self::DEFAULT_TAU_MAX,
            h: Self::DEFAULT_H,
            bracket: (0.1, 1.5 * params.magnetic().max(1.0) * growth),
            root_tol: Self::DEFAULT_ROOT_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_max >= 5.0 && self.tau_max.is_finite()) {
            return Err(Error::Domain(format!(
                "tau_max must be >= 5 (got {})",
                self.tau_max
            )));
        }
        if !(self.h > 0.0 && self.h <= 0.01) {
            return Err(Error::Domain(format!(
                "step h must lie in (0, 0.01] (got {})",
                self.h
            )));
        }
        if !(self.bracket.0 < self.bracket.1) {
            return Err(Error::Domain(format!(
                "bracket must satisfy low < high (got {:?})",
                self.bracket
            )));
        }
        if !(self.root_tol > 0.0) {
            return Err(Error::Domain("root_tol must be positive".into()));
        }
        Ok(())
    }
}

type State = [f64; 3];

fn rhs(params: &ProblemParams, y: &State) -> State {
    let m2 = params.magnetic() * params.magnetic();
    [
        y[1],
        y[2],
        -y[0] * y[2] - params.beta() * (1.0 - y[1] * y[1]) + m2 * (y[1] - 1.0),
    ]
}

fn rk4_step(params: &ProblemParams, y: &State, h: f64) -> State {
    let shift = |base: &State, k: &State, c: f64| -> State {
        [base[0] + c * k[0], base[1] + c * k[1], base[2] + c * k[2]]
    };
    let k1 = rhs(params, y);
    let k2 = rhs(params, &shift(y, &k1, 0.5 * h));
    let k3 = rhs(params, &shift(y, &k2, 0.5 * h));
    let k4 = rhs(params, &shift(y, &k3, h));
    let mut out = *y;
    for i in 0..3 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn step_count(config: &ShootingConfig) -> (usize, f64) {
    let n = (config.tau_max / config.h).round().max(1.0) as usize;
    (n, config.tau_max / n as f64)
}

/// `f'(tau_max)` for the initial curvature `s`.
///
/// Fails with [`Error::Divergence`] once any state component exceeds
/// [`DIVERGENCE_LIMIT`] in magnitude.
pub fn integrate_ivp(params: &ProblemParams, s: f64, config: &ShootingConfig) -> Result<f64> {
    config.validate()?;
    let (n, h) = step_count(config);
    let mut y = [0.0, 0.0, s];
    for i in 0..n {
        y = rk4_step(params, &y, h);
        if y.iter().any(|v| !(v.abs() <= DIVERGENCE_LIMIT)) {
            return Err(Error::Divergence {
                tau: (i + 1) as f64 * h,
                slope: y[1],
            });
        }
    }
    Ok(y[1])
}

/// What a trial slope tells the root search.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Probe {
    /// Integration reached `tau_max`; holds `f'(tau_max) - 1`.
    Reached(f64),
    /// The trajectory left the branch; holds the sign of `f' - 1` at departure.
    Departed(f64),
}

impl Probe {
    fn sign(&self) -> f64 {
        match *self {
            Probe::Reached(0.0) => 0.0,
            Probe::Reached(v) => v.signum(),
            Probe::Departed(s) => s,
        }
    }

    fn value(&self) -> f64 {
        match *self {
            Probe::Reached(v) => v,
            Probe::Departed(s) => s * f64::INFINITY,
        }
    }
}

fn probe(params: &ProblemParams, s: f64, config: &ShootingConfig) -> Probe {
    let (n, h) = step_count(config);
    let mut y = [0.0, 0.0, s];
    for _ in 0..n {
        y = rk4_step(params, &y, h);
        let excess = y[1] - 1.0;
        if excess.is_nan() {
            return Probe::Departed(1.0);
        }
        if excess.abs() > DEPARTURE_LIMIT || y.iter().any(|v| v.abs() > DIVERGENCE_LIMIT) {
            return Probe::Departed(excess.signum());
        }
    }
    Probe::Reached(y[1] - 1.0)
}

/// Result of a root search with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOutcome {
    /// The recovered wall curvature `f''(0)`.
    pub skin_friction: f64,
    /// `f'(tau_max) - 1` at the root, when the trajectory reaches `tau_max`.
    pub terminal_mismatch: Option<f64>,
    /// Width of the final bracket.
    pub bracket_width: f64,
    pub evaluations: usize,
}

/// The root `f''(0)` of `f'(tau_max; s) = 1`.
pub fn shoot(params: &ProblemParams, config: &ShootingConfig) -> Result<f64> {
    Ok(shoot_detailed(params, config)?.skin_friction)
}

/// Bisection on the departure direction, with Illinois-style false-position
/// steps whenever both bracket ends have finite terminal mismatches.
pub fn shoot_detailed(params: &ProblemParams, config: &ShootingConfig) -> Result<ShootingOutcome> {
    config.validate()?;
    search(params, config)
}

fn search(params: &ProblemParams, config: &ShootingConfig) -> Result<ShootingOutcome> {
    let (mut lo, mut hi) = config.bracket;
    let mut p_lo = probe(params, lo, config);
    let mut p_hi = probe(params, hi, config);
    let mut evaluations = 2;
    let done = |s: f64, p: Probe, width: f64, evaluations: usize| ShootingOutcome {
        skin_friction: s,
        terminal_mismatch: match p {
            Probe::Reached(v) => Some(v),
            Probe::Departed(_) => None,
        },
        bracket_width: width,
        evaluations,
    };
    if p_lo.sign() == 0.0 {
        return Ok(done(lo, p_lo, hi - lo, evaluations));
    }
    if p_hi.sign() == 0.0 {
        return Ok(done(hi, p_hi, hi - lo, evaluations));
    }
    if p_lo.sign() == p_hi.sign() {
        return Err(Error::Bracketing {
            low: lo,
            high: hi,
            low_mismatch: p_lo.value(),
            high_mismatch: p_hi.value(),
        });
    }

    // Illinois weights for the retained endpoint
    let mut w_lo = 1.0;
    let mut w_hi = 1.0;
    let mut last_side = 0i8;
    for _ in 0..400 {
        let width = hi - lo;
        let candidate = match (p_lo, p_hi) {
            (Probe::Reached(a), Probe::Reached(b)) => {
                let (a, b) = (a * w_lo, b * w_hi);
                let x = lo - a * width / (b - a);
                if x > lo && x < hi {
                    x
                } else {
                    0.5 * (lo + hi)
                }
            }
            _ => 0.5 * (lo + hi),
        };
        let p = probe(params, candidate, config);
        evaluations += 1;
        if let Probe::Reached(v) = p {
            if v.abs() <= config.root_tol {
                return Ok(done(candidate, p, width, evaluations));
            }
        }
        if p.sign() == p_lo.sign() {
            lo = candidate;
            p_lo = p;
            w_lo = 1.0;
            if last_side == -1 {
                w_hi *= 0.5;
            }
            last_side = -1;
        } else {
            hi = candidate;
            p_hi = p;
            w_hi = 1.0;
            if last_side == 1 {
                w_lo *= 0.5;
            }
            last_side = 1;
        }
        let width = hi - lo;
        if width <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            let (s, p) = match (p_lo, p_hi) {
                (Probe::Reached(a), Probe::Reached(b)) if b.abs() < a.abs() => (hi, p_hi),
                (Probe::Reached(_), _) => (lo, p_lo),
                (_, Probe::Reached(_)) => (hi, p_hi),
                _ => (0.5 * (lo + hi), Probe::Departed(0.0)),
            };
            return Ok(done(s, p, width, evaluations));
        }
    }
    Err(Error::Numerical(format!(
        "shooting did not converge; final bracket [{lo}, {hi}]"
    )))
}

/// Roots at step sizes `4h`, `2h`, `h` and the observed convergence order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOrderCheck {
    /// Roots for `4h`, `2h` and `h`, in that order.
    pub roots: [f64; 3],
    /// `log2(|s(4h) - s(2h)| / |s(2h) - s(h)|)`.
    pub order: f64,
}

pub fn step_order_check(params: &ProblemParams, config: &ShootingConfig) -> Result<StepOrderCheck> {
    config.validate()?;
    let mut roots = [0.0; 3];
    for (slot, factor) in roots.iter_mut().zip([4.0, 2.0, 1.0]) {
        let coarse = ShootingConfig {
            h: config.h * factor,
            ..*config
        };
        // coarser steps may exceed the user-facing limit on h
        *slot = search(params, &coarse)?.skin_friction;
    }
    let order = ((roots[0] - roots[1]).abs() / (roots[1] - roots[2]).abs()).log2();
    Ok(StepOrderCheck { roots, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn far_field_state_is_invariant() {
        for &(m, mag) in &[(-0.6, 5.0), (2.0, 100.0), (0.0, 0.0), (0.5, 3.0)] {
            let params = ProblemParams::new(m, mag).unwrap();
            for &f0 in &[0.0, 2.5, 40.0] {
                let d = rhs(&params, &[f0, 1.0, 0.0]);
                assert_eq!(d[1], 0.0);
                assert_eq!(d[2], 0.0);
            }
        }
    }

    #[test]
    fn zero_data_stays_zero_for_blasius() {
        let params = ProblemParams::new(0.0, 0.0).unwrap();
        let config = ShootingConfig::for_params(&params);
        assert_eq!(integrate_ivp(&params, 0.0, &config).unwrap(), 0.0);
    }

    #[test]
    fn blow_up_is_reported() {
        let params = ProblemParams::new(2.0, 20.0).unwrap();
        let config = ShootingConfig::for_params(&params);
        assert!(matches!(
            integrate_ivp(&params, 25.0, &config),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let params = ProblemParams::new(0.0, 0.0).unwrap();
        let base = ShootingConfig::for_params(&params);
        assert!(base.validate().is_ok());
        assert!(ShootingConfig {
            tau_max: 4.0,
            ..base
        }
        .validate()
        .is_err());
        assert!(ShootingConfig { h: 0.02, ..base }.validate().is_err());
        assert!(ShootingConfig {
            bracket: (1.0, 1.0),
            ..base
        }
        .validate()
        .is_err());
    }

    #[test]
    fn empty_bracket_reports_both_ends() {
        let params = ProblemParams::new(0.0, 0.0).unwrap();
        let config = ShootingConfig {
            bracket: (0.1, 0.2),
            ..ShootingConfig::for_params(&params)
        };
        match shoot(&params, &config) {
            Err(Error::Bracketing {
                low_mismatch,
                high_mismatch,
                ..
            }) => {
                assert!(low_mismatch < 0.0 && high_mismatch < 0.0);
            }
            other => panic!("expected a bracketing error, got {other:?}"),
        }
    }

    #[test]
    fn blasius_wall_shear() {
        let params = ProblemParams::new(0.0, 0.0).unwrap();
        let s = shoot(&params, &ShootingConfig::for_params(&params)).unwrap();
        assert_abs_diff_eq!(s, 0.469600, epsilon = 5e-6);
    }
}
