use std::collections::BTreeMap;

use goldfish_core::dynamics::{
    integrate_partial, EcmSystem, GeodesicSystem, GoldfishSystem, OdeSystem, Trajectory,
};
use goldfish_core::hyperbolic::{CothSystem, HyperbolicData, SinhSystem};
use goldfish_core::reduction::{eigen_track, rank1_velocity, MatrixFlow};
use goldfish_core::{geometry, Antisymmetric, Configuration, EcmState, GeodesicState, GoldfishState};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::config::{RunConfig, SystemKind};
use crate::CliError;

/// Rows on the output grid plus run diagnostics. `error` is set when the
/// solver stopped early; `rows` then holds what was computed before.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOutput {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub report: SimulationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub system: &'static str,
    pub rows: usize,
    pub truncated: bool,
    pub error: Option<String>,
    /// Largest absolute value of each diagnostic series.
    pub diagnostics: BTreeMap<String, f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn configuration(cfg: &RunConfig, q: &[f64]) -> Result<Configuration, CliError> {
    Configuration::with_gap(q.to_vec(), cfg.collision_gap).map_err(CliError::invalid_data)
}

pub(crate) fn goldfish_state(cfg: &RunConfig) -> Result<GoldfishState, CliError> {
    let q = configuration(cfg, cfg.q0.as_deref().unwrap_or_default())?;
    GoldfishState::new(q, cfg.qdot0.clone().unwrap_or_default()).map_err(CliError::invalid_data)
}

pub(crate) fn hyperbolic_data(cfg: &RunConfig) -> Result<HyperbolicData, CliError> {
    HyperbolicData::new(
        cfg.a.unwrap_or(1.0),
        cfg.a_vec.clone().unwrap_or_default(),
        cfg.c_vec.clone().unwrap_or_default(),
    )
    .map_err(CliError::invalid_data)
}

pub(crate) fn geodesic_state(cfg: &RunConfig) -> Result<GeodesicState, CliError> {
    let q = configuration(cfg, cfg.q0.as_deref().unwrap_or_default())?;
    let pi = match (&cfg.pi0, &cfg.qdot0) {
        (Some(pi), _) => pi.clone(),
        (None, Some(v)) => (geometry::metric(&q) * DVector::from_column_slice(v))
            .as_slice()
            .to_vec(),
        (None, None) => return Err(CliError::Config("missing field pi0".into())),
    };
    GeodesicState::new(q, pi).map_err(CliError::invalid_data)
}

pub(crate) fn matrix_flow(cfg: &RunConfig) -> Result<MatrixFlow, CliError> {
    let to_matrix = |m: &[Vec<f64>]| DMatrix::from_fn(cfg.n, cfg.n, |i, j| m[i][j]);
    match (&cfg.x0, &cfg.v0) {
        (Some(x0), Some(v0)) => MatrixFlow::new(to_matrix(x0), to_matrix(v0)),
        _ => {
            let s = goldfish_state(cfg)?;
            rank1_velocity(&s.q, &s.qdot)
        }
    }
    .map_err(CliError::invalid_data)
}

fn from_trajectory(
    cfg: &RunConfig,
    header: Vec<String>,
    (traj, err): (Trajectory, Option<goldfish_core::Error>),
) -> SimulationOutput {
    let rows = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(t, y)| std::iter::once(*t).chain(y.iter().copied()).collect())
        .collect::<Vec<Vec<f64>>>();
    let diagnostics = traj
        .diagnostics
        .keys()
        .map(|k| (k.clone(), traj.max_abs(k).unwrap_or(0.0)))
        .collect();
    SimulationOutput {
        header,
        report: SimulationReport {
            system: cfg.system.name(),
            rows: rows.len(),
            truncated: err.is_some(),
            error: err.map(|e| e.to_string()),
            diagnostics,
            accepted_steps: traj.accepted_steps,
            rejected_steps: traj.rejected_steps,
        },
        rows,
    }
}

fn run_ode(cfg: &RunConfig, system: &dyn OdeSystem, y0: &[f64], header: Vec<String>) -> SimulationOutput {
    let result = integrate_partial(system, y0, &cfg.grid(), &cfg.integrator());
    from_trajectory(cfg, header, result)
}

/// Runs the configured system. Invalid initial data is a configuration
/// error; solver failures are reported inside the output.
pub fn simulate(cfg: &RunConfig) -> Result<SimulationOutput, CliError> {
    cfg.validate()?;
    let n = cfg.n;
    let mut header = vec!["t".to_string()];
    header.extend(names("q", n));
    Ok(match cfg.system {
        SystemKind::Goldfish => {
            let s = goldfish_state(cfg)?;
            let sys = GoldfishSystem::new(n);
            header.extend(names("qdot", n));
            run_ode(cfg, &sys, &sys.pack(&s), header)
        }
        SystemKind::Ecm => {
            let q = configuration(cfg, cfg.q0.as_deref().unwrap_or_default())?;
            let f0 = cfg.f0.as_deref().unwrap_or_default();
            let f = Antisymmetric::from_fn(n, |i, j| f0[i][j]);
            let s = EcmState::new(q, cfg.p0.clone().unwrap_or_default(), f)
                .map_err(CliError::invalid_data)?;
            let sys = EcmSystem::new(n);
            header.extend(names("p", n));
            for i in 1..=n {
                for j in i + 1..=n {
                    header.push(format!("f{i}_{j}"));
                }
            }
            run_ode(cfg, &sys, &sys.pack(&s), header)
        }
        SystemKind::Geodesic => {
            let s = geodesic_state(cfg)?;
            let sys = GeodesicSystem::new(n);
            header.extend(names("pi", n));
            run_ode(cfg, &sys, &sys.pack(&s), header)
        }
        SystemKind::HyperbolicSinh | SystemKind::HyperbolicCoth => {
            let d = hyperbolic_data(cfg)?;
            let s0 = d.initial_state().map_err(CliError::invalid_data)?;
            header.extend(names("qdot", n));
            if cfg.system == SystemKind::HyperbolicSinh {
                let sys = SinhSystem::new(n, d.a);
                run_ode(cfg, &sys, &sys.pack(&s0), header)
            } else {
                let sys = CothSystem::new(n);
                run_ode(cfg, &sys, &sys.pack(&s0), header)
            }
        }
        SystemKind::Matrix => {
            let m = matrix_flow(cfg)?;
            let grid = cfg.grid();
            let (rows, error) = match eigen_track(&m, &grid) {
                Ok(track) => (
                    track
                        .times
                        .iter()
                        .zip(&track.eigenvalues)
                        .map(|(t, e)| std::iter::once(*t).chain(e.iter().copied()).collect())
                        .collect(),
                    None,
                ),
                Err(e) => (Vec::new(), Some(e.to_string())),
            };
            SimulationOutput {
                header,
                report: SimulationReport {
                    system: cfg.system.name(),
                    rows: rows.len(),
                    truncated: error.is_some(),
                    error,
                    diagnostics: BTreeMap::new(),
                    accepted_steps: 0,
                    rejected_steps: 0,
                },
                rows,
            }
        }
    })
}
