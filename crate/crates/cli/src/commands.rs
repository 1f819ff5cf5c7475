use std::fs;
use std::path::Path;

use fskan::presets::{self, TableCase};
use fskan::{
    newton_solve, shoot, shoot_detailed, step_order_check, ProblemParams, ShootingConfig,
    SolutionDocument, SolveConfig, SolveReport, TrialSolution,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::{
    CoeffsArgs, FileConfig, Format, OracleArgs, ProblemFlags, ProfileArgs, SolveArgs,
    SpectralFlags, SweepArgs,
};
use crate::output::{cell, csv, json, opt_cell, sig12};
use crate::CliError;

/// Fallbacks for cases outside the published tables.
const DEFAULT_ORDER: usize = 20;
const DEFAULT_SAMPLES: usize = 201;

/// What a command produced, and whether it counts as success.
pub struct Outcome {
    pub text: String,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self {
            text,
            failure: None,
        }
    }
}

fn params_from(flags: &ProblemFlags) -> Result<ProblemParams, CliError> {
    let m = flags
        .m
        .ok_or_else(|| CliError::Usage("missing --m".into()))?;
    let magnetic = flags
        .magnetic
        .ok_or_else(|| CliError::Usage("missing --M".into()))?;
    Ok(ProblemParams::new(m, magnetic)?)
}

/// Unset N, k, l come from the published row for `(m, M)` when there is
/// one, otherwise from the library defaults.
fn solve_config(params: &ProblemParams, flags: &SpectralFlags) -> Result<SolveConfig, CliError> {
    let row = presets::find(params.m(), params.magnetic());
    if flags.preset.is_some() && row.is_none() && flags.order.is_none() {
        return Err(CliError::Usage(format!(
            "preset {} has no row for m = {}, M = {}",
            presets::PAPER_TABLES,
            params.m(),
            params.magnetic()
        )));
    }
    let mut config = SolveConfig::new(
        flags
            .order
            .or(row.map(|r| r.order))
            .unwrap_or(DEFAULT_ORDER),
        flags
            .k
            .or(row.map(|r| r.k))
            .unwrap_or(SolveConfig::DEFAULT_K),
        flags
            .l
            .or(row.map(|r| r.l))
            .unwrap_or(SolveConfig::DEFAULT_L),
    );
    if let Some(tol) = flags.tol {
        config.residual_tol = tol;
    }
    if let Some(max_iter) = flags.max_iter {
        config.max_iter = max_iter;
    }
    config.validate()?;
    Ok(config)
}

fn shooting_config(
    params: &ProblemParams,
    tau_max: Option<f64>,
    h: Option<f64>,
) -> Result<ShootingConfig, CliError> {
    let mut config = ShootingConfig::for_params(params);
    if let Some(t) = tau_max {
        config.tau_max = t;
    }
    if let Some(h) = h {
        config.h = h;
    }
    config.validate()?;
    Ok(config)
}

fn only_json(format: Option<Format>, command: &str) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::Usage(format!("{command} writes JSON only"))),
        _ => Ok(()),
    }
}

/// Report document; also a valid solution document for `profile`/`coeffs`.
#[derive(Serialize)]
struct ReportDoc {
    m: f64,
    #[serde(rename = "M")]
    magnetic: f64,
    #[serde(rename = "N")]
    order: usize,
    k: f64,
    l: f64,
    lambda: f64,
    coeffs: Vec<f64>,
    skin_friction: f64,
    residual_norm: f64,
    iterations: usize,
    converged: bool,
}

impl ReportDoc {
    fn new(params: &ProblemParams, report: &SolveReport) -> Self {
        let doc = SolutionDocument::new(params, &report.solution);
        Self {
            m: doc.m,
            magnetic: doc.magnetic,
            order: doc.order,
            k: doc.k,
            l: doc.l,
            lambda: doc.lambda,
            coeffs: doc.coeffs,
            skin_friction: sig12(report.skin_friction),
            residual_norm: sig12(report.residual_norm),
            iterations: report.iterations,
            converged: report.converged,
        }
    }
}

fn not_converged(params: &ProblemParams, report: &SolveReport) -> String {
    format!(
        "Newton did not converge for m = {}, M = {} (residual {:.3e} after {} iterations)",
        params.m(),
        params.magnetic(),
        report.residual_norm,
        report.iterations
    )
}

pub fn solve(
    args: &SolveArgs,
    file: &FileConfig,
    format: Option<Format>,
) -> Result<Outcome, CliError> {
    only_json(format, "solve")?;
    let params = params_from(&args.problem.merged(file))?;
    let config = solve_config(&params, &args.spectral.merged(file))?;
    let report = newton_solve(&params, &config, None)?;
    let text = json(&ReportDoc::new(&params, &report))?;
    let failure = (!report.converged).then(|| not_converged(&params, &report));
    Ok(Outcome { text, failure })
}

#[derive(Serialize)]
struct SweepRow {
    m: f64,
    #[serde(rename = "M")]
    magnetic: f64,
    #[serde(rename = "N")]
    order: usize,
    k: f64,
    l: f64,
    skin_friction: Option<f64>,
    oracle_value: Option<f64>,
    abs_diff: Option<f64>,
    converged: bool,
    #[serde(skip)]
    problem: Option<String>,
}

fn sweep_row(
    params: &ProblemParams,
    config: &SolveConfig,
    oracle: Option<&ShootingConfig>,
) -> SweepRow {
    let mut problem = None;
    let (skin_friction, converged) = match newton_solve(params, config, None) {
        Ok(r) => {
            if !r.converged {
                problem = Some(not_converged(params, &r));
            }
            (Some(r.skin_friction), r.converged)
        }
        Err(e) => {
            problem = Some(format!(
                "m = {}, M = {}: {e}",
                params.m(),
                params.magnetic()
            ));
            (None, false)
        }
    };
    let oracle_value = oracle.and_then(|c| match shoot(params, c) {
        Ok(s) => Some(s),
        Err(e) => {
            problem.get_or_insert(format!("oracle, M = {}: {e}", params.magnetic()));
            None
        }
    });
    let abs_diff = skin_friction
        .zip(oracle_value)
        .map(|(a, b)| sig12((a - b).abs()));
    SweepRow {
        m: params.m(),
        magnetic: params.magnetic(),
        order: config.order,
        k: config.k,
        l: config.l,
        skin_friction: skin_friction.map(sig12),
        oracle_value: oracle_value.map(sig12),
        abs_diff,
        converged,
        problem,
    }
}

const SWEEP_HEADER: [&str; 9] = [
    "m",
    "M",
    "N",
    "k",
    "l",
    "skin_friction",
    "oracle_value",
    "abs_diff",
    "converged",
];

pub fn sweep(
    args: &SweepArgs,
    file: &FileConfig,
    format: Option<Format>,
) -> Result<Outcome, CliError> {
    let spectral = args.spectral.merged(file);
    let m = args.m.or(file.m);
    let list = args
        .magnetic_list
        .clone()
        .or_else(|| file.magnetic_list.clone());
    let with_oracle = args.with_oracle || file.with_oracle.unwrap_or(false);
    let tau_max = args.tau_max.or(file.tau_max);
    let h = args.h.or(file.h);

    let cases: Vec<(f64, f64)> = match (list, spectral.preset) {
        (Some(list), _) => {
            let m = m.ok_or_else(|| CliError::Usage("missing --m".into()))?;
            list.into_iter().map(|mag| (m, mag)).collect()
        }
        (None, Some(_)) => presets::published_cases()
            .iter()
            .filter(|c: &&TableCase| m.is_none_or(|m| (c.m - m).abs() < 1e-12))
            .map(|c| (c.m, c.magnetic))
            .collect(),
        (None, None) => {
            return Err(CliError::Usage(
                "sweep needs --M-list or --preset paper-tables".into(),
            ))
        }
    };
    if cases.is_empty() {
        return Err(CliError::Usage(
            "nothing to sweep: the M list is empty".into(),
        ));
    }

    // reject bad input before spending time on any solve
    let mut jobs = Vec::with_capacity(cases.len());
    for (m, mag) in cases {
        let params = ProblemParams::new(m, mag)?;
        let config = solve_config(
            &params,
            &SpectralFlags {
                preset: None,
                ..spectral.clone()
            },
        )?;
        let oracle = if with_oracle {
            Some(shooting_config(&params, tau_max, h)?)
        } else {
            None
        };
        jobs.push((params, config, oracle));
    }
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|(p, c, o)| sweep_row(p, c, o.as_ref()))
        .collect();

    let failures: Vec<&str> = rows.iter().filter_map(|r| r.problem.as_deref()).collect();
    let failure = (!failures.is_empty()).then(|| failures.join("\n"));
    let text = match format.unwrap_or(Format::Csv) {
        Format::Json => json(&rows)?,
        Format::Csv => csv(
            &SWEEP_HEADER,
            rows.iter().map(|r| {
                vec![
                    cell(r.m),
                    cell(r.magnetic),
                    r.order.to_string(),
                    cell(r.k),
                    cell(r.l),
                    opt_cell(r.skin_friction),
                    opt_cell(r.oracle_value),
                    opt_cell(r.abs_diff),
                    r.converged.to_string(),
                ]
            }),
        ),
    };
    Ok(Outcome { text, failure })
}

/// A solution document, possibly carrying the report's `converged` flag.
#[derive(Deserialize)]
struct StoredSolution {
    #[serde(flatten)]
    doc: SolutionDocument,
    converged: Option<bool>,
}

fn read_solution(path: &Path) -> Result<(StoredSolution, TrialSolution), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let stored: StoredSolution = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("malformed solution file {}: {e}", path.display())))?;
    stored.doc.params()?;
    let solution = stored.doc.solution()?;
    Ok((stored, solution))
}

#[derive(Serialize)]
struct ProfileRow {
    tau: f64,
    f: f64,
    fp: f64,
    fpp: f64,
}

pub fn profile(
    args: &ProfileArgs,
    file: &FileConfig,
    format: Option<Format>,
) -> Result<Outcome, CliError> {
    let tau_max = args
        .tau_max
        .or(file.tau_max)
        .unwrap_or(ShootingConfig::DEFAULT_TAU_MAX);
    let samples = args.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
    if !(tau_max.is_finite() && tau_max > 0.0) {
        return Err(CliError::Usage(format!(
            "--tau-max must be positive (got {tau_max})"
        )));
    }
    if samples < 2 {
        return Err(CliError::Usage(format!(
            "--samples must be at least 2 (got {samples})"
        )));
    }

    let solution = match args.solution.as_ref().or(file.solution.as_ref()) {
        Some(path) => {
            let (stored, solution) = read_solution(path)?;
            if stored.converged == Some(false) {
                return Err(CliError::Failed(format!(
                    "{} holds a non-converged solution",
                    path.display()
                )));
            }
            solution
        }
        None => {
            let params = params_from(&args.problem.merged(file))?;
            let config = solve_config(&params, &args.spectral.merged(file))?;
            let report = newton_solve(&params, &config, None)?;
            if !report.converged {
                return Err(CliError::Failed(not_converged(&params, &report)));
            }
            report.solution
        }
    };

    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let tau = if i + 1 == samples {
            tau_max
        } else {
            tau_max * i as f64 / (samples - 1) as f64
        };
        let [f, fp, fpp, _] = solution.eval_all(tau)?;
        rows.push(ProfileRow {
            tau: sig12(tau),
            f: sig12(f),
            fp: sig12(fp),
            fpp: sig12(fpp),
        });
    }
    let text = match format.unwrap_or(Format::Csv) {
        Format::Json => json(&rows)?,
        Format::Csv => csv(
            &["tau", "f", "fp", "fpp"],
            rows.iter()
                .map(|r| vec![cell(r.tau), cell(r.f), cell(r.fp), cell(r.fpp)]),
        ),
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct CoeffRow {
    i: usize,
    abs_a: f64,
    log10_abs_a: f64,
}

pub fn coeffs(
    args: &CoeffsArgs,
    file: &FileConfig,
    format: Option<Format>,
) -> Result<Outcome, CliError> {
    let path = args
        .solution
        .as_ref()
        .or(file.solution.as_ref())
        .ok_or_else(|| CliError::Usage("coeffs needs --solution".into()))?;
    let (_, solution) = read_solution(path)?;
    let rows: Vec<CoeffRow> = solution
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| CoeffRow {
            i,
            abs_a: sig12(a.abs()),
            log10_abs_a: sig12(a.abs().log10()),
        })
        .collect();
    let text = match format.unwrap_or(Format::Csv) {
        // JSON has no -inf; zero coefficients come out as null there
        Format::Json => json(&rows)?,
        Format::Csv => csv(
            &["i", "abs_a", "log10_abs_a"],
            rows.iter()
                .map(|r| vec![r.i.to_string(), cell(r.abs_a), cell(r.log10_abs_a)]),
        ),
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct OracleDoc {
    m: f64,
    #[serde(rename = "M")]
    magnetic: f64,
    tau_max: f64,
    h: f64,
    skin_friction: f64,
    /// `f'(tau_max) - 1` at the root, or null when the trajectory departs.
    residual_check: Option<f64>,
    bracket_width: f64,
    h_order_estimate: f64,
}

pub fn oracle(
    args: &OracleArgs,
    file: &FileConfig,
    format: Option<Format>,
) -> Result<Outcome, CliError> {
    only_json(format, "oracle")?;
    let params = params_from(&args.problem.merged(file))?;
    let config = shooting_config(&params, args.tau_max.or(file.tau_max), args.h.or(file.h))?;
    let outcome = shoot_detailed(&params, &config)?;
    let check = step_order_check(&params, &config)?;
    let doc = OracleDoc {
        m: params.m(),
        magnetic: params.magnetic(),
        tau_max: config.tau_max,
        h: config.h,
        skin_friction: sig12(outcome.skin_friction),
        residual_check: outcome.terminal_mismatch.map(sig12),
        bracket_width: sig12(outcome.bracket_width),
        h_order_estimate: sig12(check.order),
    };
    Ok(Outcome::ok(json(&doc)?))
}
