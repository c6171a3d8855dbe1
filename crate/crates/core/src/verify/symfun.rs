use nalgebra::DMatrix;

use super::{max_abs_diff, sampler, worst, Check, Outcome, Suite};
use crate::symfun::{self, DEFAULT_IMAG_TOL};

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "symfun_roundtrip",
            suite: Suite::Symfun,
            run: roundtrip,
        },
        Check {
            name: "symfun_jacobian_det",
            suite: Suite::Symfun,
            run: jacobian_det,
        },
        Check {
            name: "symfun_jacobian_inverse",
            suite: Suite::Symfun,
            run: jacobian_inverse,
        },
        Check {
            name: "symfun_jacobian_fd",
            suite: Suite::Symfun,
            run: jacobian_fd,
        },
    ]
}

fn roundtrip(seed: u64) -> Outcome {
    let mut s = sampler(seed, "symfun_roundtrip");
    let mut res: f64 = 0.0;
    for k in 0..100 {
        let q = s.configuration(2 + k % 5);
        match symfun::roots_from_coords(&symfun::elem_sym_coords(&q), DEFAULT_IMAG_TOL) {
            Ok(r) => res = worst(res, max_abs_diff(r.as_slice(), q.as_slice())),
            Err(_) => return Outcome::failed(1e-9),
        }
    }
    Outcome::below(res, 1e-9)
}

fn jacobian_det(seed: u64) -> Outcome {
    let mut s = sampler(seed, "symfun_jacobian_det");
    let mut res: f64 = 0.0;
    for k in 0..100 {
        let q = s.configuration_in(2 + k % 5, 3.0);
        let closed = symfun::jacobian_det(&q);
        let lu = symfun::jacobian(&q).determinant();
        res = worst(res, (closed - lu).abs() / closed.abs());
    }
    Outcome::below(res, 1e-9)
}

fn jacobian_inverse(seed: u64) -> Outcome {
    let mut s = sampler(seed, "symfun_jacobian_inverse");
    let mut res: f64 = 0.0;
    for k in 0..100 {
        let n = 2 + k % 5;
        let q = s.configuration_in(n, 3.0);
        let prod = symfun::jacobian(&q) * symfun::jacobian_inverse(&q);
        res = worst(res, (prod - DMatrix::<f64>::identity(n, n)).amax());
    }
    Outcome::below(res, 1e-10)
}

fn jacobian_fd(seed: u64) -> Outcome {
    let mut s = sampler(seed, "symfun_jacobian_fd");
    let mut res: f64 = 0.0;
    for k in 0..20 {
        let n = 2 + k % 5;
        let q = s.configuration(n);
        let jac = symfun::jacobian(&q);
        let base = q.as_slice();
        for i in 0..n {
            let h = 1e-6 * base[i].abs().max(1.0);
            let mut qp = base.to_vec();
            qp[i] += h;
            let mut qm = base.to_vec();
            qm[i] -= h;
            let ep = symfun::elementary_symmetric(&qp);
            let em = symfun::elementary_symmetric(&qm);
            for m in 0..n {
                let fd = (ep[m + 1] - em[m + 1]) / (2.0 * h);
                res = worst(res, (fd - jac[(m, i)]).abs());
            }
        }
    }
    Outcome::below(res, 1e-6)
}
