use serde::{Deserialize, Serialize};

use super::torus::{dist_to_integer, frac_mul, Frequency};

/// Result of scanning `‖nω‖·n·(1 + log n)²` over `1 ≤ n ≤ N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiophantineCertificate {
    pub omega: f64,
    pub epsilon: f64,
    pub horizon: u64,
    pub margin: f64,
    pub worst_n: u64,
    pub passes: bool,
}

/// Exhaustive scan; `‖nω‖` is evaluated with an exact fractional part so
/// rational frequencies give exactly zero once `n` hits the denominator.
pub fn diophantine_margin(w: Frequency, eps: f64, horizon: u64) -> DiophantineCertificate {
    let horizon = horizon.max(1);
    let mut margin = f64::INFINITY;
    let mut worst_n = 1;
    for n in 1..=horizon {
        let nf = n as f64;
        let d = dist_to_integer(frac_mul(nf, w.omega));
        let log = 1.0 + nf.ln();
        let v = d * nf * log * log;
        if v < margin {
            margin = v;
            worst_n = n;
        }
    }
    DiophantineCertificate {
        omega: w.omega,
        epsilon: eps,
        horizon,
        margin,
        worst_n,
        passes: margin >= eps,
    }
}
