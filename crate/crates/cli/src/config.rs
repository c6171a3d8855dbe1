use std::path::Path;

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    Goldfish,
    Ecm,
    Matrix,
    Geodesic,
    HyperbolicSinh,
    HyperbolicCoth,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Goldfish => "goldfish",
            Self::Ecm => "ecm",
            Self::Matrix => "matrix",
            Self::Geodesic => "geodesic",
            Self::HyperbolicSinh => "hyperbolic-sinh",
            Self::HyperbolicCoth => "hyperbolic-coth",
        }
    }
}

fn default_rel_tol() -> f64 {
    1e-10
}

fn default_abs_tol() -> f64 {
    1e-12
}

fn default_collision_gap() -> f64 {
    1e-8
}

fn default_output_points() -> usize {
    101
}

/// One simulation run. Physics fields have no defaults; which of them are
/// required depends on `system`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemKind,
    #[serde(rename = "N")]
    pub n: usize,
    pub q0: Option<Vec<f64>>,
    pub qdot0: Option<Vec<f64>>,
    pub p0: Option<Vec<f64>>,
    pub f0: Option<Vec<Vec<f64>>>,
    pub pi0: Option<Vec<f64>>,
    pub x0: Option<Vec<Vec<f64>>>,
    pub v0: Option<Vec<Vec<f64>>>,
    pub a: Option<f64>,
    pub a_vec: Option<Vec<f64>>,
    pub c_vec: Option<Vec<f64>>,
    pub t_end: f64,
    #[serde(default = "default_output_points")]
    pub output_points: usize,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "default_collision_gap")]
    pub collision_gap: f64,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn grid(&self) -> Vec<f64> {
        goldfish_core::dynamics::uniform_grid(0.0, self.t_end, self.output_points)
    }

    pub fn integrator(&self) -> goldfish_core::IntegratorConfig {
        goldfish_core::IntegratorConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            collision_gap: self.collision_gap,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return invalid("N must be at least 1");
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return invalid("t_end must be positive");
        }
        if self.output_points < 2 {
            return invalid("output_points must be at least 2");
        }
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("collision_gap", self.collision_gap),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return invalid(&format!("{name} must be positive"));
            }
        }
        match self.system {
            SystemKind::Goldfish => {
                self.vector("q0", &self.q0)?;
                self.vector("qdot0", &self.qdot0)?;
            }
            SystemKind::Ecm => {
                self.vector("q0", &self.q0)?;
                self.vector("p0", &self.p0)?;
                let f = self.matrix("f0", &self.f0)?;
                for i in 0..self.n {
                    for j in 0..self.n {
                        if f[i][j] != -f[j][i] {
                            return invalid("f0 must be antisymmetric");
                        }
                    }
                }
            }
            SystemKind::Matrix => match (&self.x0, &self.v0) {
                (Some(_), Some(_)) => {
                    self.matrix("x0", &self.x0)?;
                    self.matrix("v0", &self.v0)?;
                }
                (None, None) => {
                    self.vector("q0", &self.q0)?;
                    self.vector("qdot0", &self.qdot0)?;
                }
                _ => return invalid("matrix system needs both x0 and v0, or q0 and qdot0"),
            },
            SystemKind::Geodesic => {
                self.vector("q0", &self.q0)?;
                match (&self.qdot0, &self.pi0) {
                    (Some(_), None) => {
                        self.vector("qdot0", &self.qdot0)?;
                    }
                    (None, Some(_)) => {
                        self.vector("pi0", &self.pi0)?;
                    }
                    _ => return invalid("geodesic system needs exactly one of qdot0, pi0"),
                }
            }
            SystemKind::HyperbolicSinh | SystemKind::HyperbolicCoth => {
                if self.system == SystemKind::HyperbolicSinh && self.a.is_none() {
                    return invalid("missing field a");
                }
                self.vector("a_vec", &self.a_vec)?;
                self.vector("c_vec", &self.c_vec)?;
            }
        }
        Ok(())
    }

    fn vector<'a>(&self, name: &str, v: &'a Option<Vec<f64>>) -> Result<&'a [f64], CliError> {
        match v {
            None => invalid(&format!("missing field {name}")),
            Some(v) if v.len() != self.n => {
                invalid(&format!("{name} has {} entries, expected N = {}", v.len(), self.n))
            }
            Some(v) if !v.iter().all(|x| x.is_finite()) => invalid(&format!("{name} is not finite")),
            Some(v) => Ok(v),
        }
    }

    fn matrix<'a>(
        &self,
        name: &str,
        m: &'a Option<Vec<Vec<f64>>>,
    ) -> Result<&'a [Vec<f64>], CliError> {
        match m {
            None => invalid(&format!("missing field {name}")),
            Some(m) if m.len() != self.n || m.iter().any(|r| r.len() != self.n) => {
                invalid(&format!("{name} must be N x N"))
            }
            Some(m) => Ok(m),
        }
    }
}

fn invalid<T>(msg: &str) -> Result<T, CliError> {
    Err(CliError::Config(msg.to_string()))
}
