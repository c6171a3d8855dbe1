use std::collections::BTreeMap;
use std::time::Instant;

use goldfish_core::dynamics::{
    goldfish_exact_with_gap, integrate_partial, EcmSystem, GeodesicSystem, GoldfishSystem,
};
use goldfish_core::hyperbolic::{self, CothSystem, HyperbolicData, SinhSystem};
use goldfish_core::reduction::eigen_track;
use goldfish_core::{geometry, EcmState, GoldfishState, Result};
use nalgebra::DVector;
use serde::Serialize;

use crate::config::{RunConfig, SystemKind};
use crate::simulate::{geodesic_state, goldfish_state, hyperbolic_data, matrix_flow};
use crate::CliError;

/// Positions on the output grid; shorter than the grid when the solver
/// stopped early.
type Positions = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub report: ComparisonReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub system: &'static str,
    pub solvers: Vec<String>,
    /// Wall-clock seconds per solver.
    pub seconds: BTreeMap<String, f64>,
    pub rows: usize,
    pub truncated: bool,
    pub errors: BTreeMap<String, String>,
}

/// Solver names accepted for each system.
pub fn solvers_for(system: SystemKind) -> &'static [&'static str] {
    match system {
        SystemKind::Goldfish => &[
            "rk_integration",
            "flat_exact",
            "matrix_eigen",
            "ecm_integration",
            "geodesic_flow",
        ],
        SystemKind::Ecm => &["rk_integration"],
        SystemKind::Matrix => &["matrix_eigen"],
        SystemKind::Geodesic => &["rk_integration", "flat_exact"],
        SystemKind::HyperbolicSinh => &["rk_integration", "matrix_geodesic"],
        SystemKind::HyperbolicCoth => &["z_eigen", "s_exact", "rk_integration"],
    }
}

fn positions_of(n: usize, states: Vec<Vec<f64>>) -> Positions {
    states.into_iter().map(|mut y| {
        y.truncate(n);
        y
    })
    .collect()
}

fn pointwise(grid: &[f64], f: impl Fn(f64) -> Result<Vec<f64>>) -> (Positions, Option<String>) {
    let mut out = Vec::with_capacity(grid.len());
    for &t in grid {
        match f(t) {
            Ok(q) => out.push(q),
            Err(e) => return (out, Some(e.to_string())),
        }
    }
    (out, None)
}

fn integrated(
    cfg: &RunConfig,
    system: &dyn goldfish_core::dynamics::OdeSystem,
    y0: &[f64],
) -> (Positions, Option<String>) {
    let (traj, err) = integrate_partial(system, y0, &cfg.grid(), &cfg.integrator());
    (positions_of(cfg.n, traj.states), err.map(|e| e.to_string()))
}

fn exact_goldfish(cfg: &RunConfig, s: &GoldfishState) -> (Positions, Option<String>) {
    pointwise(&cfg.grid(), |t| {
        goldfish_exact_with_gap(s, t, cfg.collision_gap).map(|q| q.into_vec())
    })
}

fn hyperbolic_solver(cfg: &RunConfig, d: &HyperbolicData, name: &str) -> Result<(Positions, Option<String>)> {
    let grid = cfg.grid();
    Ok(match name {
        "z_eigen" => pointwise(&grid, |t| hyperbolic::z_eigen_solution(d, t).map(|q| q.into_vec())),
        "s_exact" => pointwise(&grid, |t| hyperbolic::s_exact(d, t).map(|(_, q)| q.into_vec())),
        "matrix_geodesic" => pointwise(&grid, |t| hyperbolic::geodesic_eigen_data(d, t).map(|(q, _)| q)),
        _ => {
            let s0 = d.initial_state()?;
            if cfg.system == SystemKind::HyperbolicSinh {
                let sys = SinhSystem::new(cfg.n, d.a);
                integrated(cfg, &sys, &sys.pack(&s0))
            } else {
                let sys = CothSystem::new(cfg.n);
                integrated(cfg, &sys, &sys.pack(&s0))
            }
        }
    })
}

fn run_solver(cfg: &RunConfig, name: &str) -> std::result::Result<(Positions, Option<String>), CliError> {
    let grid = cfg.grid();
    let solver_err = |e: goldfish_core::Error| (Vec::new(), Some(e.to_string()));
    Ok(match (cfg.system, name) {
        (SystemKind::Goldfish, "rk_integration") => {
            let s = goldfish_state(cfg)?;
            let sys = GoldfishSystem::new(cfg.n);
            integrated(cfg, &sys, &sys.pack(&s))
        }
        (SystemKind::Goldfish, "flat_exact") => exact_goldfish(cfg, &goldfish_state(cfg)?),
        (SystemKind::Goldfish | SystemKind::Matrix, "matrix_eigen") => {
            match eigen_track(&matrix_flow(cfg)?, &grid) {
                Ok(track) => (track.eigenvalues, None),
                Err(e) => solver_err(e),
            }
        }
        (SystemKind::Goldfish, "ecm_integration") => {
            match EcmState::on_constraint_surface(&goldfish_state(cfg)?) {
                Ok(s) => {
                    let sys = EcmSystem::new(cfg.n);
                    integrated(cfg, &sys, &sys.pack(&s))
                }
                Err(e) => solver_err(e),
            }
        }
        (SystemKind::Goldfish, "geodesic_flow") => {
            let s = goldfish_state(cfg)?;
            let pi = geometry::metric(&s.q) * DVector::from_column_slice(&s.qdot);
            let g = goldfish_core::GeodesicState::new(s.q, pi.as_slice().to_vec())?;
            let sys = GeodesicSystem::new(cfg.n);
            integrated(cfg, &sys, &sys.pack(&g))
        }
        (SystemKind::Ecm, "rk_integration") => {
            let out = crate::simulate::simulate(cfg)?;
            let states = out.rows.into_iter().map(|r| r[1..].to_vec()).collect();
            (positions_of(cfg.n, states), out.report.error)
        }
        (SystemKind::Geodesic, "rk_integration") => {
            let g = geodesic_state(cfg)?;
            let sys = GeodesicSystem::new(cfg.n);
            integrated(cfg, &sys, &sys.pack(&g))
        }
        (SystemKind::Geodesic, "flat_exact") => {
            let g = geodesic_state(cfg)?;
            let qdot = geometry::inverse_metric(&g.q) * DVector::from_column_slice(&g.pi);
            let s = GoldfishState::new(g.q, qdot.as_slice().to_vec())?;
            exact_goldfish(cfg, &s)
        }
        (SystemKind::HyperbolicSinh | SystemKind::HyperbolicCoth, _)
            if solvers_for(cfg.system).contains(&name) =>
        {
            let d = hyperbolic_data(cfg)?;
            hyperbolic_solver(cfg, &d, name).unwrap_or_else(solver_err)
        }
        _ => {
            return Err(CliError::Config(format!(
                "solver `{name}` does not apply to system {} (available: {})",
                cfg.system.name(),
                solvers_for(cfg.system).join(", ")
            )))
        }
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, |m: f64, v| if v.is_nan() { f64::NAN } else { m.max(v) })
}

/// Runs each solver on the configured grid and tabulates the pairwise
/// maximum absolute position discrepancy at each output time.
pub fn compare(cfg: &RunConfig, solvers: &[String]) -> std::result::Result<Comparison, CliError> {
    cfg.validate()?;
    if solvers.is_empty() {
        return Err(CliError::Config("no solvers given".into()));
    }
    for (i, s) in solvers.iter().enumerate() {
        if !solvers_for(cfg.system).contains(&s.as_str()) {
            return Err(CliError::Config(format!(
                "solver `{s}` does not apply to system {} (available: {})",
                cfg.system.name(),
                solvers_for(cfg.system).join(", ")
            )));
        }
        if solvers[..i].contains(s) {
            return Err(CliError::Config(format!("solver `{s}` listed twice")));
        }
    }
    let grid = cfg.grid();
    let mut seconds = BTreeMap::new();
    let mut errors = BTreeMap::new();
    let mut results = Vec::with_capacity(solvers.len());
    for name in solvers {
        let start = Instant::now();
        let (positions, err) = run_solver(cfg, name)?;
        seconds.insert(name.clone(), start.elapsed().as_secs_f64());
        if let Some(e) = err {
            errors.insert(name.clone(), e);
        }
        results.push(positions);
    }
    let len = results.iter().map(Vec::len).min().unwrap_or(0).min(grid.len());
    let mut header = vec!["t".to_string()];
    let mut pairs = Vec::new();
    for i in 0..solvers.len() {
        for j in i + 1..solvers.len() {
            header.push(format!("{}_vs_{}", solvers[i], solvers[j]));
            pairs.push((i, j));
        }
    }
    let rows = (0..len)
        .map(|k| {
            std::iter::once(grid[k])
                .chain(pairs.iter().map(|&(i, j)| max_abs_diff(&results[i][k], &results[j][k])))
                .collect()
        })
        .collect::<Vec<Vec<f64>>>();
    Ok(Comparison {
        header,
        report: ComparisonReport {
            system: cfg.system.name(),
            solvers: solvers.to_vec(),
            seconds,
            rows: rows.len(),
            truncated: !errors.is_empty(),
            errors,
        },
        rows,
    })
}
