//! Properness counting for the secure alignment conditions and the
//! eavesdropper-antenna count at which leakage starts to grow.

use serde::Serialize;

use crate::channel::SystemConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub n_eq: u64,
    pub n_v: u64,
    pub proper: bool,
    /// Largest eavesdropper array the system stays proper for; infinite when `K = 1`.
    pub max_nre: f64,
    pub silr_onset_nre: u64,
}

/// Scalar equations in the interference and eavesdropper alignment conditions:
/// `K(K−1)d² + K(Nre−d)d`.
pub fn equation_count(cfg: &SystemConfig) -> u64 {
    let (k, d, nre) = (cfg.k as u64, cfg.d as u64, cfg.nre as u64);
    k * (k - 1) * d * d + k * (nre - d) * d
}

/// Free variables in the precoders and receive subspaces:
/// `Kd(Nt+Nr−2d) + d(Nre−d)`.
pub fn variable_count(cfg: &SystemConfig) -> u64 {
    let (k, d, nt, nr, nre) = (cfg.k as u64, cfg.d as u64, cfg.nt as u64, cfg.nr as u64, cfg.nre as u64);
    k * d * (nt + nr - 2 * d) + d * (nre - d)
}

/// Closed-form properness test `K(Nt+Nr) − (K²+1)d ≥ Nre(K−1)`.
pub fn closed_form_proper(cfg: &SystemConfig) -> bool {
    let (k, d, nt, nr, nre) = (cfg.k as i64, cfg.d as i64, cfg.nt as i64, cfg.nr as i64, cfg.nre as i64);
    k * (nt + nr) - (k * k + 1) * d >= nre * (k - 1)
}

/// `(K(Nt+Nr) − (K²+1)d)/(K−1)`, or `+∞` for a single pair.
pub fn max_eavesdropper_antennas(cfg: &SystemConfig) -> f64 {
    if cfg.k == 1 {
        return f64::INFINITY;
    }
    let k = cfg.k as f64;
    (k * (cfg.nt + cfg.nr) as f64 - (k * k + 1.0) * cfg.d as f64) / (k - 1.0)
}

/// `Nt − Nr + 2d`, clamped below at `d`.
pub fn silr_onset(cfg: &SystemConfig) -> u64 {
    let onset = cfg.nt as i64 - cfg.nr as i64 + 2 * cfg.d as i64;
    onset.max(cfg.d as i64) as u64
}

/// Full report. Properness uses the raw counts, which stay defined at `K = 1`.
pub fn is_proper(cfg: &SystemConfig) -> FeasibilityReport {
    let n_eq = equation_count(cfg);
    let n_v = variable_count(cfg);
    FeasibilityReport {
        n_eq,
        n_v,
        proper: n_v >= n_eq,
        max_nre: max_eavesdropper_antennas(cfg),
        silr_onset_nre: silr_onset(cfg),
    }
}
