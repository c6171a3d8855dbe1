use nalgebra::DMatrix;

use super::{max_abs_diff, sampler, worst, Check, Outcome, Suite};
use crate::dynamics::{ecm_rhs, goldfish_rhs, EcmState, GoldfishState};
use crate::poisson::{
    self, bracket_eval, ecm_hamiltonian_observable, g_observable, hamiltonian_flow,
    invariant_observable, jacobi_residual, DiracCoefficient, PoissonStructure,
};
use crate::sampling::Sampler;
use crate::symfun::Configuration;

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "poisson_antisymmetry",
            suite: Suite::Poisson,
            run: antisymmetry,
        },
        Check {
            name: "poisson_jacobi_ecm",
            suite: Suite::Poisson,
            run: jacobi_ecm,
        },
        Check {
            name: "poisson_jacobi_goldfish",
            suite: Suite::Poisson,
            run: jacobi_goldfish,
        },
        Check {
            name: "poisson_commuting_integrals",
            suite: Suite::Poisson,
            run: commuting_integrals,
        },
        Check {
            name: "poisson_dirac_factor2_reproduces_goldfish",
            suite: Suite::Poisson,
            run: dirac_factor2,
        },
        Check {
            name: "poisson_dirac_printed_factor1_negative",
            suite: Suite::Poisson,
            run: dirac_factor1,
        },
        Check {
            name: "poisson_ecm_flow_matches_rhs",
            suite: Suite::Poisson,
            run: ecm_flow,
        },
        Check {
            name: "poisson_g_weakly_conserved_on_surface",
            suite: Suite::Poisson,
            run: g_on_surface,
        },
        Check {
            name: "poisson_g_not_conserved_off_surface",
            suite: Suite::Poisson,
            run: g_off_surface,
        },
        Check {
            name: "poisson_invariants_commute_with_g",
            suite: Suite::Poisson,
            run: invariants_commute,
        },
    ]
}

fn ecm_point(s: &mut Sampler, n: usize) -> Vec<f64> {
    let q = s.configuration(n);
    let p = s.velocities(n);
    let f = s.spins(n);
    let mut z = q.into_vec();
    z.extend(p);
    z.extend_from_slice(f.upper());
    z
}

fn goldfish_point(s: &mut Sampler, n: usize) -> Vec<f64> {
    let mut z = s.configuration(n).into_vec();
    z.extend(s.velocities(n));
    z
}

fn antisymmetry(seed: u64) -> Outcome {
    let mut s = sampler(seed, "poisson_antisymmetry");
    let mut res: f64 = 0.0;
    for k in 0..100 {
        let n = 2 + k % 3;
        for (st, z) in [
            (PoissonStructure::ecm(n), ecm_point(&mut s, n)),
            (
                PoissonStructure::goldfish(n, DiracCoefficient::Corrected),
                goldfish_point(&mut s, n),
            ),
        ] {
            let m = st.bracket_matrix(&z);
            res = worst(res, (&m + m.transpose()).amax());
        }
    }
    Outcome::at_most(res, 0.0)
}

fn all_triples(st: &PoissonStructure, z: &[f64]) -> f64 {
    let d = st.dim();
    let mut res: f64 = 0.0;
    for a in 0..d {
        for b in a + 1..d {
            for c in b + 1..d {
                res = worst(res, jacobi_residual(st, z, (a, b, c)).abs());
            }
        }
    }
    res
}

fn jacobi_ecm(seed: u64) -> Outcome {
    let mut s = sampler(seed, "poisson_jacobi_ecm");
    let mut res: f64 = 0.0;
    for k in 0..100 {
        let n = 2 + k % 3;
        let z = ecm_point(&mut s, n);
        res = worst(res, all_triples(&PoissonStructure::ecm(n), &z));
    }
    Outcome::below(res, 1e-8)
}

fn jacobi_goldfish(seed: u64) -> Outcome {
    let mut s = sampler(seed, "poisson_jacobi_goldfish");
    let mut res: f64 = 0.0;
    for k in 0..100 {
        let n = 2 + k % 3;
        let z = goldfish_point(&mut s, n);
        res = worst(
            res,
            all_triples(&PoissonStructure::goldfish(n, DiracCoefficient::Corrected), &z),
        );
    }
    Outcome::below(res, 1e-8)
}

fn commuting_integrals(seed: u64) -> Outcome {
    let mut s = sampler(seed, "poisson_commuting_integrals");
    let mut res: f64 = 0.0;
    for k in 0..20 {
        let n = 2 + k % 4;
        let q = s.configuration(n);
        let pi = s.velocities(n);
        for m in 0..n {
            for l in m + 1..n {
                res = worst(res, poisson::commutation_check(&q, &pi, m, l, 1e-3).abs());
            }
        }
    }
    Outcome::below(res, 1e-6)
}

/// Largest deviation between the bracket-induced acceleration and the
/// goldfish right-hand side at one random state.
fn dirac_residual(coefficient: DiracCoefficient, s: &mut Sampler, n: usize) -> f64 {
    let st = PoissonStructure::goldfish(n, coefficient);
    let z = goldfish_point(s, n);
    let (qdot, qddot) = match poisson::reduced_goldfish_motion(&st, &z) {
        Ok(m) => m,
        Err(_) => return f64::INFINITY,
    };
    let q = Configuration::new(z[..n].to_vec()).expect("sampled configuration");
    let expected = goldfish_rhs(&GoldfishState::new(q, qdot).expect("lengths match"));
    max_abs_diff(&qddot, &expected)
}

fn dirac_factor2(seed: u64) -> Outcome {
    let mut s = sampler(seed, "poisson_dirac_factor2");
    let mut res: f64 = 0.0;
    for k in 0..100 {
        res = worst(res, dirac_residual(DiracCoefficient::Corrected, &mut s, 2 + k % 5));
    }
    Outcome::below(res, 1e-9)
}

/// Reports the smallest residual over the sample: every state must miss.
fn dirac_factor1(seed: u64) -> Outcome {
    let mut s = sampler(seed, "poisson_dirac_factor1");
    let mut res = f64::INFINITY;
    for k in 0..100 {
        res = res.min(dirac_residual(DiracCoefficient::Printed, &mut s, 2 + k % 5));
    }
    Outcome::above(res, 0.1)
}

fn ecm_state(z: &[f64], n: usize) -> EcmState {
    let q = Configuration::new(z[..n].to_vec()).expect("sampled configuration");
    let f = crate::antisym::Antisymmetric::from_upper(n, z[2 * n..].to_vec()).expect("layout");
    EcmState::new(q, z[n..2 * n].to_vec(), f).expect("lengths match")
}

fn ecm_flow(seed: u64) -> Outcome {
    let mut s = sampler(seed, "poisson_ecm_flow_matches_rhs");
    let mut res: f64 = 0.0;
    for k in 0..50 {
        let n = 2 + k % 4;
        let st = PoissonStructure::ecm(n);
        let z = ecm_point(&mut s, n);
        let flow = match hamiltonian_flow(&st, &ecm_hamiltonian_observable(&st), &z) {
            Ok(f) => f,
            Err(_) => return Outcome::failed(1e-9),
        };
        let r = ecm_rhs(&ecm_state(&z, n));
        let mut direct = r.qdot.clone();
        direct.extend(r.pdot);
        direct.extend_from_slice(r.fdot.upper());
        res = worst(res, max_abs_diff(&flow, &direct));
    }
    Outcome::below(res, 1e-9)
}

fn g_brackets_with_h(st: &PoissonStructure, z: &[f64]) -> f64 {
    let n = st.particles();
    let h = ecm_hamiltonian_observable(st);
    let mut res: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            match bracket_eval(st, &g_observable(st, i, j), &h, z) {
                Ok(v) => res = worst(res, v.abs()),
                Err(_) => return f64::INFINITY,
            }
        }
    }
    res
}

fn g_on_surface(seed: u64) -> Outcome {
    let mut s = sampler(seed, "poisson_g_on_surface");
    let mut res: f64 = 0.0;
    for k in 0..100 {
        let n = 2 + k % 4;
        let q = s.configuration(n);
        let v = s.velocities(n);
        let gs = GoldfishState::new(q, v).expect("lengths match");
        let ecm = EcmState::on_constraint_surface(&gs).expect("positive velocities");
        let st = PoissonStructure::ecm(n);
        res = worst(res, g_brackets_with_h(&st, &poisson::ecm_point(&ecm)));
    }
    Outcome::below(res, 1e-9)
}

/// Lower decile of `max |{G_ij, H}|` over random off-surface points: the
/// bracket is nonzero at generic points, not at every point.
fn g_off_surface(seed: u64) -> Outcome {
    let mut s = sampler(seed, "poisson_g_off_surface");
    let mut values: Vec<f64> = (0..100)
        .map(|k| {
            let n = 2 + k % 4;
            let st = PoissonStructure::ecm(n);
            let z = ecm_point(&mut s, n);
            g_brackets_with_h(&st, &z)
        })
        .collect();
    values.sort_by(f64::total_cmp);
    Outcome::above(values[values.len() / 10], 1e-3)
}

fn invariants_commute(seed: u64) -> Outcome {
    let mut s = sampler(seed, "poisson_invariants_commute_with_g");
    let mut res: f64 = 0.0;
    for k in 0..30 {
        let n = 2 + k % 3;
        let st = PoissonStructure::ecm_with_frame(n);
        let mut z = ecm_point(&mut s, n);
        let r = DMatrix::from_fn(n, n, |_, _| s.uniform(-1.0, 1.0));
        z.extend(r.transpose().iter());
        for i in 0..n {
            for j in i + 1..n {
                let g = g_observable(&st, i, j);
                for m in 0..n {
                    for velocity in [false, true] {
                        match bracket_eval(&st, &g, &invariant_observable(&st, m, velocity), &z) {
                            Ok(v) => res = worst(res, v.abs()),
                            Err(_) => return Outcome::failed(1e-9),
                        }
                    }
                }
            }
        }
    }
    Outcome::below(res, 1e-9)
}
