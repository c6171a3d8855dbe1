//! Fixed benchmark inputs shared by the benches in `benches/`.

use goldfish_core::hyperbolic::HyperbolicData;
use goldfish_core::{Configuration, GoldfishState};

/// Well-separated positions in `[-2, 2]` with velocities in `[0.6, 1.4]`.
pub fn goldfish_state(n: usize) -> GoldfishState {
    let q = (0..n)
        .map(|i| -2.0 + 4.0 * (i as f64 + 0.5) / n as f64)
        .collect();
    let qdot = (0..n).map(|i| 0.6 + 0.8 * ((i * 7 % n) as f64) / n as f64).collect();
    GoldfishState::new(Configuration::new(q).expect("sorted"), qdot).expect("matching lengths")
}

pub fn hyperbolic_data(n: usize, a: f64) -> HyperbolicData {
    let s = goldfish_state(n);
    HyperbolicData::new(a, s.q.into_vec(), s.qdot).expect("valid data")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for n in 1..=8 {
            let s = goldfish_state(n);
            assert!(s.q.min_gap() > 0.4 || n == 1);
            assert!(s.qdot.iter().all(|v| (0.6..=1.4).contains(v)));
            assert_eq!(hyperbolic_data(n, 1.0).len(), n);
        }
    }
}
