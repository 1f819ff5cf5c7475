//! Hermite-function pseudospectral solver for the MHD Falkner-Skan
//! boundary-layer equation
//!
//! ```text
//! f''' + f f'' + beta (1 - f'^2) - M^2 (f' - 1) = 0,
//! f(0) = f'(0) = 0,  f'(inf) = 1,
//! ```
//!
//! on the half line, together with a shooting-method reference solver.
//!
//! ```no_run
//! use fskan::{newton_solve, ProblemParams, SolveConfig};
//!
//! let params = ProblemParams::new(-0.6, 20.0)?;
//! let report = newton_solve(&params, &SolveConfig::new(15, 1.0, 1.0), None)?;
//! println!("f''(0) = {}", report.skin_friction);
//! # Ok::<(), fskan::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod collocation;
pub mod domain_map;
pub mod error;
pub mod hermite;
pub mod presets;
pub mod shooting;
pub mod trial;

pub use collocation::{
    assemble_system, continuation_solve, initial_guess, max_residual_between_nodes, newton_solve,
    residual_at, SolveConfig, SolveReport,
};
pub use domain_map::{chain_factors, transform_nodes, LogMap};
pub use error::{Error, Result};
pub use hermite::{
    gauss_hermite_grid, hermite_function, hermite_function_derivative, hermite_functions,
    HermiteBasis, QuadratureGrid,
};
pub use shooting::{
    integrate_ivp, shoot, shoot_detailed, step_order_check, ShootingConfig, ShootingOutcome,
    StepOrderCheck,
};
pub use trial::{ProblemParams, SolutionDocument, TrialSolution};
