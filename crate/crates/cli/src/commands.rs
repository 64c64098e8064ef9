//! The four subcommands, each a function of a [`JobConfig`].

use std::path::PathBuf;

use lspline_core::assembly::{build_q, build_r, row_dominance};
use lspline_core::kernel::{dominance_bound, local_max_at_zero, DEFAULT_SAMPLES};
use lspline_core::splinefit::interpolate_with;
use lspline_core::{FrequencyVector, KernelContext, KnotVector, Result as CoreResult};

use crate::error::{CliError, CliResult};
use crate::input::read_samples;
use crate::literal::parse_lambda;
use crate::report::{
    emit, pair, pairs, Classification, DiagDoc, DiagDominance, InterpDoc, InterpDominance, MatricesDoc,
    SymmetryVerdicts, TauTaylor,
};

/// Half-width of the `diag` window when the step bound is infinite.
pub const UNBOUNDED_WINDOW: f64 = 8.0;

/// Default number of uniform evaluation points for `interp`.
pub const DEFAULT_GRID: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Interp,
    Diag,
    Matrices,
    Selftest,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalGrid {
    /// Uniform points from the first to the last knot, both included.
    Count(usize),
    Points(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub command: Command,
    pub lambda_spec: String,
    pub input_path: Option<PathBuf>,
    pub knots: Option<Vec<f64>>,
    pub eval_grid: Option<EvalGrid>,
    pub output_path: Option<PathBuf>,
    pub delta_override: Option<f64>,
    pub samples: usize,
}

impl JobConfig {
    pub fn new(command: Command, lambda_spec: impl Into<String>) -> Self {
        JobConfig {
            command,
            lambda_spec: lambda_spec.into(),
            input_path: None,
            knots: None,
            eval_grid: None,
            output_path: None,
            delta_override: None,
            samples: DEFAULT_SAMPLES,
        }
    }

    fn lambda(&self) -> CliResult<FrequencyVector> {
        parse_lambda(&self.lambda_spec)
    }
}

pub fn run(cfg: &JobConfig) -> CliResult<()> {
    match cfg.command {
        Command::Interp => cmd_interp(cfg),
        Command::Diag => cmd_diag(cfg),
        Command::Matrices => cmd_matrices(cfg),
        Command::Selftest => crate::selftest::run_selftest(),
    }
}

fn grid_points(grid: &EvalGrid, knots: &KnotVector) -> CliResult<Vec<f64>> {
    match grid {
        EvalGrid::Count(m) if *m < 2 => Err(CliError::Parse(format!("grid needs at least 2 points, got {m}"))),
        EvalGrid::Count(m) => {
            let (a, b) = (knots.first(), knots.last());
            let last = m - 1;
            Ok((0..*m)
                .map(|i| if i == last { b } else { a + (b - a) * i as f64 / last as f64 })
                .collect())
        }
        EvalGrid::Points(p) if p.is_empty() => Err(CliError::Parse("empty evaluation point list".into())),
        EvalGrid::Points(p) => Ok(p.clone()),
    }
}

pub fn interp_doc(cfg: &JobConfig) -> CliResult<InterpDoc> {
    let lam = cfg.lambda()?;
    let path = cfg
        .input_path
        .as_deref()
        .ok_or_else(|| CliError::Parse("interp needs --input".into()))?;
    let data = read_samples(path)?;
    let knots = KnotVector::new(data.t)?;
    let ctx = KernelContext::new(&lam)?;
    knots.check_steps(ctx.delta())?;
    let row_ratios = row_dominance(&build_r(&ctx, &knots)?)?;
    let delta = ctx.delta();
    let spline = interpolate_with(ctx, &knots, &data.values)?;
    log::info!("solved R gamma = Q^T g for {} knots via {}", knots.len(), spline.solver_path());

    let grid = grid_points(cfg.eval_grid.as_ref().unwrap_or(&EvalGrid::Count(DEFAULT_GRID)), &knots)?;
    let values = grid.iter().map(|&t| spline.eval(t)).collect::<CoreResult<Vec<_>>>()?;
    let max_row_ratio = row_ratios.iter().copied().fold(0.0, f64::max);
    Ok(InterpDoc {
        lambda: pairs(lam.as_slice()),
        delta,
        knots: knots.as_slice().to_vec(),
        g: pairs(spline.g()),
        gamma: pairs(spline.gamma()),
        dominance: InterpDominance {
            strictly_dominant: row_ratios.iter().all(|r| *r < 1.0),
            max_row_ratio,
            row_ratios,
            solver: spline.solver_path().to_string(),
        },
        grid,
        values: pairs(&values),
    })
}

pub fn cmd_interp(cfg: &JobConfig) -> CliResult<()> {
    emit(&interp_doc(cfg)?, cfg.output_path.as_deref())
}

/// Whether `f(−x) = −f(x)` at 40 points of `(0, min(0.95δ, 3)]`.
fn odd_on_grid(ctx: &KernelContext, f: impl Fn(f64) -> CoreResult<lspline_core::Complex64>) -> CoreResult<bool> {
    let top = ctx.delta().finite().map_or(3.0, |d| (0.95 * d).min(3.0));
    for i in 1..=40 {
        let x = top * i as f64 / 40.0;
        let (p, m) = (f(x)?, f(-x)?);
        if (p + m).norm() > 1e-9 * (p.norm() + m.norm()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Uneven steps scaled into the admissible range.
fn probe_knots(ctx: &KernelContext) -> CliResult<KnotVector> {
    let pattern = [0.31, 0.87, 0.55, 0.72, 0.18, 0.64, 0.9, 0.42];
    let scale = ctx.delta().finite().map_or(1.0, |d| (0.95 * d / 0.9).min(1.0));
    let steps: Vec<f64> = pattern.iter().map(|h| h * scale).collect();
    Ok(KnotVector::from_steps(0.0, &steps)?)
}

pub fn diag_doc(cfg: &JobConfig) -> CliResult<DiagDoc> {
    let lam = cfg.lambda()?;
    let ctx = KernelContext::new(&lam)?;
    let window = cfg
        .delta_override
        .unwrap_or_else(|| ctx.delta().finite().unwrap_or(UNBOUNDED_WINDOW));
    let report = dominance_bound(&ctx, window, cfg.samples)?;
    let class = lam.classify();
    let (tau0, c1, c2) = ctx.tau_taylor2();

    let sigma_odd = odd_on_grid(&ctx, |x| ctx.sigma(x))?;
    let rho_odd = odd_on_grid(&ctx, |x| ctx.rho(x))?;
    let r_symmetric = build_r(&ctx, &probe_knots(&ctx)?)?.is_symmetric(1e-9);
    let balanced = lam.has_balanced_pairs();
    let consistent = sigma_odd == class.is_symmetric && r_symmetric == class.is_symmetric && rho_odd == balanced;
    if !consistent {
        log::warn!("symmetry verdicts disagree with the classification of {lam}");
    }
    log::info!(
        "M_delta over [-{window}, {window}] is {:.6}; dominance {}guaranteed",
        report.m_delta_estimate,
        if report.dominance_guaranteed() { "" } else { "not " }
    );

    Ok(DiagDoc {
        lambda: pairs(lam.as_slice()),
        delta: ctx.delta(),
        classification: Classification {
            real: class.is_real,
            conjugation_invariant: class.is_conjugation_invariant,
            symmetric: class.is_symmetric,
            balanced_pairs: balanced,
        },
        tau_taylor: TauTaylor { tau0: pair(tau0), c1: pair(c1), c2: pair(c2) },
        local_max_at_zero: local_max_at_zero(&lam).ok(),
        dominance: DiagDominance {
            delta: window,
            samples: cfg.samples,
            m_delta: report.m_delta_estimate,
            hypothesis_checked: report.hypothesis_checked,
            guaranteed: report.dominance_guaranteed(),
            probe_max_row_ratio: report.per_row_ratios.iter().copied().reduce(f64::max),
        },
        symmetry: SymmetryVerdicts { sigma_odd, r_symmetric, rho_odd, consistent },
    })
}

pub fn cmd_diag(cfg: &JobConfig) -> CliResult<()> {
    emit(&diag_doc(cfg)?, cfg.output_path.as_deref())
}

pub fn matrices_doc(cfg: &JobConfig) -> CliResult<MatricesDoc> {
    let lam = cfg.lambda()?;
    let t = match (&cfg.knots, &cfg.input_path) {
        (Some(k), _) => k.clone(),
        (None, Some(p)) => read_samples(p)?.t,
        (None, None) => return Err(CliError::Parse("matrices needs --knots or --input".into())),
    };
    let knots = KnotVector::new(t)?;
    let ctx = KernelContext::new(&lam)?;
    knots.check_steps(ctx.delta())?;
    let r = build_r(&ctx, &knots)?;
    let q = build_q(&ctx, &knots)?;
    let ratios = row_dominance(&r)?;
    Ok(MatricesDoc::new(&lam, ctx.delta(), &knots, &r, &q, ratios))
}

pub fn cmd_matrices(cfg: &JobConfig) -> CliResult<()> {
    emit(&matrices_doc(cfg)?, cfg.output_path.as_deref())
}
