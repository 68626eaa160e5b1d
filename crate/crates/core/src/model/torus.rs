//! Skew-shift dynamics on the two-torus.

use serde::{Deserialize, Serialize};

/// Reduce `t` into `[0, 1)`.
///
/// Uses `t - floor(t)`; the one rounding case that lands on `1.0`
/// (tiny negative inputs) is folded back to `0.0`.
#[inline]
pub fn mod1(t: f64) -> f64 {
    let r = t - t.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Fractional part of `m * t` for an integer-valued `m`, without the
/// cancellation a plain product suffers once `|m * t|` is large.
///
/// The product is split into its rounded value and the exact rounding
/// error (via fused multiply-add); the integer part of the rounded value is
/// discarded before the error is added back.
#[inline]
pub fn frac_mul(m: f64, t: f64) -> f64 {
    let p = m * t;
    let err = m.mul_add(t, -p);
    mod1(mod1(p) + err)
}

/// Distance from `t` to the nearest integer.
#[inline]
pub fn dist_to_integer(t: f64) -> f64 {
    let r = mod1(t);
    r.min(1.0 - r)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub x: f64,
    pub y: f64,
}

impl Phase {
    pub fn new(x: f64, y: f64) -> Self {
        Phase {
            x: mod1(x),
            y: mod1(y),
        }
    }

    pub const ORIGIN: Phase = Phase { x: 0.0, y: 0.0 };
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub omega: f64,
}

impl Frequency {
    pub fn new(omega: f64) -> Self {
        Frequency { omega: mod1(omega) }
    }

    /// The golden-mean frequency (√5 − 1)/2.
    pub fn golden() -> Self {
        Frequency::new((5f64.sqrt() - 1.0) * 0.5)
    }
}

/// One step of `T(x, y) = (x + y, y + ω)`.
pub fn skew_shift_step(p: Phase, w: Frequency) -> Phase {
    Phase::new(p.x + p.y, p.y + w.omega)
}

/// `T^j(p)` from the closed form
/// `(x + j·y + j(j−1)/2·ω, y + j·ω)`, valid for negative `j` as well.
pub fn orbit_point(p: Phase, w: Frequency, j: i64) -> Phase {
    let jf = j as f64;
    let tri = ((j as i128) * (j as i128 - 1) / 2) as f64;
    let x = mod1(p.x + frac_mul(jf, p.y) + frac_mul(tri, w.omega));
    let y = mod1(p.y + frac_mul(jf, w.omega));
    Phase { x, y }
}

/// Positions `0..=n` of the forward orbit.
pub fn skew_shift_orbit(p: Phase, w: Frequency, n: usize) -> Vec<Phase> {
    (0..=n as i64).map(|j| orbit_point(p, w, j)).collect()
}
