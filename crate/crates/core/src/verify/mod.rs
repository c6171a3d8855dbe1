//! Named property checks grouped in suites, with a deterministic report.

mod dynamics;
mod geometry;
mod hyperbolic;
mod poisson;
mod reduction;
mod symfun;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::sampling::Sampler;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Symfun,
    Geometry,
    Poisson,
    Dynamics,
    Reduction,
    Hyperbolic,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Symfun,
        Suite::Geometry,
        Suite::Poisson,
        Suite::Dynamics,
        Suite::Reduction,
        Suite::Hyperbolic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Symfun => "symfun",
            Suite::Geometry => "geometry",
            Suite::Poisson => "poisson",
            Suite::Dynamics => "dynamics",
            Suite::Reduction => "reduction",
            Suite::Hyperbolic => "hyperbolic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    All,
    Only(Suite),
}

impl Selector {
    pub fn includes(self, suite: Suite) -> bool {
        match self {
            Selector::All => true,
            Selector::Only(s) => s == suite,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSelector(pub String);

impl fmt::Display for UnknownSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown suite `{}` (expected all, symfun, geometry, poisson, dynamics, reduction or hyperbolic)",
            self.0
        )
    }
}

impl std::error::Error for UnknownSelector {}

impl FromStr for Selector {
    type Err = UnknownSelector;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(Selector::All);
        }
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .map(Selector::Only)
            .ok_or_else(|| UnknownSelector(s.to_string()))
    }
}

/// How a residual is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// `residual < tolerance`.
    Below,
    /// `residual <= tolerance` (exact checks with tolerance 0).
    AtMost,
    /// `residual > tolerance` (negative controls).
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub max_residual: f64,
    pub tolerance: f64,
    pub criterion: Criterion,
}

impl Outcome {
    pub fn below(max_residual: f64, tolerance: f64) -> Self {
        Self {
            max_residual,
            tolerance,
            criterion: Criterion::Below,
        }
    }

    pub fn at_most(max_residual: f64, tolerance: f64) -> Self {
        Self {
            max_residual,
            tolerance,
            criterion: Criterion::AtMost,
        }
    }

    pub fn above(max_residual: f64, tolerance: f64) -> Self {
        Self {
            max_residual,
            tolerance,
            criterion: Criterion::Above,
        }
    }

    /// Turns a failed computation into a failing outcome with infinite residual.
    pub fn failed(tolerance: f64) -> Self {
        Self::below(f64::INFINITY, tolerance)
    }

    pub fn pass(&self) -> bool {
        match self.criterion {
            Criterion::Below => self.max_residual < self.tolerance,
            Criterion::AtMost => self.max_residual <= self.tolerance,
            Criterion::Above => self.max_residual > self.tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub suite: Suite,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seconds: f64,
}

pub(crate) struct Check {
    pub name: &'static str,
    pub suite: Suite,
    pub run: fn(u64) -> Outcome,
}

fn registry() -> Vec<Check> {
    let mut checks = Vec::new();
    checks.extend(symfun::checks());
    checks.extend(geometry::checks());
    checks.extend(poisson::checks());
    checks.extend(dynamics::checks());
    checks.extend(reduction::checks());
    checks.extend(hyperbolic::checks());
    checks
}

/// Names of every registered check, sorted.
pub fn check_names(selector: Selector) -> Vec<&'static str> {
    let mut names: Vec<_> = registry()
        .into_iter()
        .filter(|c| selector.includes(c.suite))
        .map(|c| c.name)
        .collect();
    names.sort_unstable();
    names
}

/// FNV-1a, used to give each check its own stream derived from the run seed.
fn tag_hash(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Sampler for the stream `tag` of a run seeded with `seed`.
pub fn sampler(seed: u64, tag: &str) -> Sampler {
    Sampler::new(seed ^ tag_hash(tag))
}

/// Runs the selected checks in name order. Wall-clock time is recorded only
/// when `timings` is set; otherwise `seconds` is zero so reports are
/// reproducible byte for byte.
pub fn run(selector: Selector, seed: u64, timings: bool) -> Vec<CheckResult> {
    let mut checks: Vec<Check> = registry()
        .into_iter()
        .filter(|c| selector.includes(c.suite))
        .collect();
    checks.sort_by_key(|c| c.name);
    checks
        .into_iter()
        .map(|c| {
            let start = Instant::now();
            let outcome = (c.run)(seed);
            let seconds = if timings {
                start.elapsed().as_secs_f64()
            } else {
                0.0
            };
            CheckResult {
                name: c.name.to_string(),
                suite: c.suite,
                max_residual: outcome.max_residual,
                tolerance: outcome.tolerance,
                pass: outcome.pass(),
                seconds,
            }
        })
        .collect()
}

/// Runs a single named check.
pub fn run_one(name: &str, seed: u64) -> Option<CheckResult> {
    let check = registry().into_iter().find(|c| c.name == name)?;
    let start = Instant::now();
    let outcome = (check.run)(seed);
    Some(CheckResult {
        name: check.name.to_string(),
        suite: check.suite,
        max_residual: outcome.max_residual,
        tolerance: outcome.tolerance,
        pass: outcome.pass(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, |m: f64, v| if v.is_nan() { f64::INFINITY } else { m.max(v) })
}

/// Folds residuals into their maximum, treating NaN as a failure.
pub(crate) fn worst(acc: f64, v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        acc.max(v)
    }
}
