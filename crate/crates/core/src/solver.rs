//! Alternating-minimization interference alignment with an eavesdropper.
//!
//! The leakage cost has two parts. `j1` is the interference each legitimate
//! receiver sees outside its interference subspace `U_k`; `j2` is the signal
//! power the eavesdropper receives outside the `d`-dimensional subspace
//! `U_eaves`. The WSLM variant minimizes `j1 + j2`; the conventional variant
//! minimizes `j1` alone. Each iteration re-solves every precoder from the
//! previous subspaces, then every subspace from the new precoders; both
//! half-steps are exact eigenvector minimizers so the cost never increases.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::channel::{matrix_to_json, ChannelSet};
use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::matrix::{
    frobenius, frobenius_sqr, orthonormal_complement, random_orthonormal, select_eigvecs,
    singular_values, ComplexMatrix, Spectrum,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Minimize legitimate interference leakage and eavesdropper signal leakage.
    Wslm,
    /// Minimum-interference-leakage baseline that ignores the eavesdropper.
    Conventional,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Wslm, Variant::Conventional];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Wslm => "wslm",
            Variant::Conventional => "conventional",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "wslm" => Ok(Variant::Wslm),
            "conventional" => Ok(Variant::Conventional),
            other => Err(format!("unknown variant `{other}` (expected wslm or conventional)")),
        }
    }
}

/// Transmit precoders `F_ℓ`, each `Nt × d` with `F_ℓᴴF_ℓ = (Pt/d)·I`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSet {
    pub f: Vec<ComplexMatrix>,
}

/// Receiver interference subspaces `U_k` (`Nr × (Nr−d)`) and the eavesdropper
/// signal subspace `U_eaves` (`Nre × d`).
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSet {
    pub u: Vec<ComplexMatrix>,
    pub eaves: ComplexMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub j1: f64,
    pub j2: f64,
    /// `j1 + j2` for WSLM, `j1` for the conventional variant.
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub kappa_max: usize,
    pub cost_epsilon: f64,
    pub delta_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            kappa_max: 500,
            cost_epsilon: 1e-9,
            delta_tolerance: 1e-12,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.kappa_max == 0 {
            return Err(Error::InvalidOptions {
                field: "kappa_max",
                reason: "must be at least 1".into(),
            });
        }
        if !(self.cost_epsilon >= 0.0 && self.cost_epsilon.is_finite()) {
            return Err(Error::InvalidOptions {
                field: "cost_epsilon",
                reason: format!("must be a finite non-negative number, got {}", self.cost_epsilon),
            });
        }
        if !(self.delta_tolerance >= 0.0 && self.delta_tolerance.is_finite()) {
            return Err(Error::InvalidOptions {
                field: "delta_tolerance",
                reason: format!("must be a finite non-negative number, got {}", self.delta_tolerance),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IaSolution {
    pub precoders: PrecoderSet,
    pub subspaces: SubspaceSet,
    /// Cost after initialization followed by the cost after each iteration.
    pub cost_trajectory: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub variant: Variant,
}

impl IaSolution {
    pub fn final_cost(&self) -> f64 {
        *self.cost_trajectory.last().expect("trajectory holds the initial cost")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImliResidual {
    pub rx: usize,
    pub tx: usize,
    /// `‖W_kᴴ H(k,ℓ) F_ℓ‖_F`.
    pub value: f64,
}

/// Post-hoc check of the three alignment conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentCheck {
    pub rank_ok: Vec<bool>,
    pub imli_residual: Vec<ImliResidual>,
    pub eaves_residual: Vec<f64>,
}

impl AlignmentCheck {
    pub fn max_imli(&self) -> f64 {
        self.imli_residual.iter().map(|r| r.value).fold(0.0, f64::max)
    }

    pub fn max_eaves(&self) -> f64 {
        self.eaves_residual.iter().copied().fold(0.0, f64::max)
    }
}

fn check_precoders(cs: &ChannelSet, p: &PrecoderSet) -> Result<()> {
    let cfg = cs.config();
    if p.f.len() != cfg.k {
        return Err(Error::Dimension(format!("expected {} precoders, got {}", cfg.k, p.f.len())));
    }
    for (l, f) in p.f.iter().enumerate() {
        if f.shape() != (cfg.nt, cfg.d) {
            return Err(Error::Dimension(format!(
                "precoder {} is {}x{}, expected {}x{}",
                l + 1,
                f.nrows(),
                f.ncols(),
                cfg.nt,
                cfg.d
            )));
        }
    }
    Ok(())
}

fn check_subspaces(cs: &ChannelSet, s: &SubspaceSet) -> Result<()> {
    let cfg = cs.config();
    if s.u.len() != cfg.k {
        return Err(Error::Dimension(format!("expected {} subspaces, got {}", cfg.k, s.u.len())));
    }
    for (k, u) in s.u.iter().enumerate() {
        if u.shape() != (cfg.nr, cfg.nr - cfg.d) {
            return Err(Error::Dimension(format!(
                "subspace U_{} is {}x{}, expected {}x{}",
                k + 1,
                u.nrows(),
                u.ncols(),
                cfg.nr,
                cfg.nr - cfg.d
            )));
        }
    }
    if s.eaves.shape() != (cfg.nre, cfg.d) {
        return Err(Error::Dimension(format!(
            "eavesdropper subspace is {}x{}, expected {}x{}",
            s.eaves.nrows(),
            s.eaves.ncols(),
            cfg.nre,
            cfg.d
        )));
    }
    Ok(())
}

/// `‖X − U·UᴴX‖_F²`.
fn outside_energy(x: &ComplexMatrix, u: &ComplexMatrix) -> f64 {
    let inside = u * (u.adjoint() * x);
    frobenius_sqr(&(x - inside))
}

pub fn cost_total(cs: &ChannelSet, p: &PrecoderSet, s: &SubspaceSet, variant: Variant) -> Result<CostBreakdown> {
    check_precoders(cs, p)?;
    check_subspaces(cs, s)?;
    let k_users = cs.config().k;
    let mut j1 = 0.0;
    for k in 0..k_users {
        for l in (0..k_users).filter(|&l| l != k) {
            j1 += outside_energy(&(cs.h(k, l) * &p.f[l]), &s.u[k]);
        }
    }
    let j2: f64 = (0..k_users)
        .map(|l| outside_energy(&(cs.eaves(l) * &p.f[l]), &s.eaves))
        .sum();
    let total = match variant {
        Variant::Wslm => j1 + j2,
        Variant::Conventional => j1,
    };
    Ok(CostBreakdown { j1, j2, total })
}

/// `Hᴴ(I − UUᴴ)H`.
fn leakage_gram(h: &ComplexMatrix, u: &ComplexMatrix) -> ComplexMatrix {
    let uh = u.adjoint() * h;
    h.adjoint() * h - uh.adjoint() * uh
}

/// The quadratic form whose `d` smallest eigenvectors give precoder `tx`.
pub fn precoder_objective(cs: &ChannelSet, s: &SubspaceSet, variant: Variant, tx: usize) -> Result<ComplexMatrix> {
    check_subspaces(cs, s)?;
    let cfg = cs.config();
    let mut q = ComplexMatrix::zeros(cfg.nt, cfg.nt);
    for k in (0..cfg.k).filter(|&k| k != tx) {
        q += leakage_gram(cs.h(k, tx), &s.u[k]);
    }
    if variant == Variant::Wslm {
        q += leakage_gram(cs.eaves(tx), &s.eaves);
    }
    Ok(q)
}

pub fn update_precoders(cs: &ChannelSet, s: &SubspaceSet, variant: Variant) -> Result<PrecoderSet> {
    let cfg = cs.config();
    let scale = (cfg.pt / cfg.d as f64).sqrt();
    let f = (0..cfg.k)
        .map(|tx| {
            let q = precoder_objective(cs, s, variant, tx)?;
            Ok(select_eigvecs(&q, cfg.d, Spectrum::Smallest)?.scale(scale))
        })
        .collect::<Result<_>>()?;
    Ok(PrecoderSet { f })
}

/// `Σ_ℓ (H(rx,ℓ)F_ℓ)(H(rx,ℓ)F_ℓ)ᴴ` over `ℓ ≠ excluded`.
pub(crate) fn received_gram(cs: &ChannelSet, p: &PrecoderSet, rx: usize, excluded: Option<usize>) -> ComplexMatrix {
    let n = cs.config().rx_antennas(rx);
    let mut g = ComplexMatrix::zeros(n, n);
    for l in (0..cs.config().k).filter(|&l| Some(l) != excluded) {
        let hf = cs.h(rx, l) * &p.f[l];
        g += &hf * hf.adjoint();
    }
    g
}

pub fn update_rx_subspaces(cs: &ChannelSet, p: &PrecoderSet) -> Result<Vec<ComplexMatrix>> {
    check_precoders(cs, p)?;
    let cfg = cs.config();
    (0..cfg.k)
        .map(|k| select_eigvecs(&received_gram(cs, p, k, Some(k)), cfg.nr - cfg.d, Spectrum::Dominant))
        .collect()
}

pub fn update_eaves_subspace(cs: &ChannelSet, p: &PrecoderSet) -> Result<ComplexMatrix> {
    check_precoders(cs, p)?;
    let cfg = cs.config();
    select_eigvecs(&received_gram(cs, p, cfg.k, None), cfg.d, Spectrum::Dominant)
}

fn update_subspaces(cs: &ChannelSet, p: &PrecoderSet) -> Result<SubspaceSet> {
    Ok(SubspaceSet {
        u: update_rx_subspaces(cs, p)?,
        eaves: update_eaves_subspace(cs, p)?,
    })
}

/// Random orthonormal precoders scaled to `F_ℓᴴF_ℓ = (Pt/d)·I`.
pub fn initial_precoders(cs: &ChannelSet, seed: u64) -> Result<PrecoderSet> {
    let cfg = cs.config();
    let scale = (cfg.pt / cfg.d as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = (0..cfg.k)
        .map(|_| Ok(random_orthonormal(cfg.nt, cfg.d, &mut rng)?.scale(scale)))
        .collect::<Result<_>>()?;
    Ok(PrecoderSet { f })
}

/// Run the alternating minimization from a seeded random start.
///
/// Stops after `kappa_max` iterations, once the cost drops to `cost_epsilon`,
/// or once a full iteration changes it by at most `delta_tolerance`. At least
/// one iteration always runs.
pub fn solve(cs: &ChannelSet, seed: u64, variant: Variant, opts: &SolverOptions) -> Result<IaSolution> {
    opts.validate()?;
    let mut precoders = initial_precoders(cs, seed)?;
    let mut subspaces = update_subspaces(cs, &precoders)?;
    let mut cost = cost_total(cs, &precoders, &subspaces, variant)?.total;
    let mut trajectory = vec![cost];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.kappa_max {
        precoders = update_precoders(cs, &subspaces, variant)?;
        subspaces = update_subspaces(cs, &precoders)?;
        let next = cost_total(cs, &precoders, &subspaces, variant)?.total;
        trajectory.push(next);
        iterations += 1;
        let delta = (cost - next).abs();
        cost = next;
        if cost <= opts.cost_epsilon || delta <= opts.delta_tolerance {
            converged = true;
            break;
        }
    }

    Ok(IaSolution {
        precoders,
        subspaces,
        cost_trajectory: trajectory,
        iterations,
        converged,
        variant,
    })
}

/// Receive filters `W_k`: orthonormal bases of `span(U_k)⊥`, each `Nr × d`.
pub fn compute_receive_filters(s: &SubspaceSet) -> Result<Vec<ComplexMatrix>> {
    s.u.iter().map(orthonormal_complement).collect()
}

pub fn check_ia_conditions(cs: &ChannelSet, sol: &IaSolution, tol: f64) -> Result<AlignmentCheck> {
    check_precoders(cs, &sol.precoders)?;
    check_subspaces(cs, &sol.subspaces)?;
    let cfg = cs.config();
    let f = &sol.precoders.f;
    let w = compute_receive_filters(&sol.subspaces)?;
    let w_eaves = orthonormal_complement(&sol.subspaces.eaves)?;

    let rank_ok = (0..cfg.k)
        .map(|k| {
            let s = singular_values(&(w[k].adjoint() * cs.h(k, k) * &f[k]));
            match (s.first(), s.get(cfg.d - 1)) {
                (Some(&lead), Some(&dth)) => dth > tol * lead,
                _ => false,
            }
        })
        .collect();

    let mut imli_residual = Vec::new();
    for (k, wk) in w.iter().enumerate() {
        for l in (0..cfg.k).filter(|&l| l != k) {
            imli_residual.push(ImliResidual {
                rx: k,
                tx: l,
                value: frobenius(&(wk.adjoint() * cs.h(k, l) * &f[l])),
            });
        }
    }
    let eaves_residual = (0..cfg.k)
        .map(|l| frobenius(&(w_eaves.adjoint() * cs.eaves(l) * &f[l])))
        .collect();

    Ok(AlignmentCheck {
        rank_ok,
        imli_residual,
        eaves_residual,
    })
}

fn matrices_json(ms: &[ComplexMatrix]) -> Value {
    Value::Array(
        ms.iter()
            .map(|m| json!({"rows": m.nrows(), "cols": m.ncols(), "data": matrix_to_json(m)}))
            .collect(),
    )
}

pub fn solution_to_json(sol: &IaSolution) -> Value {
    json!({
        "variant": sol.variant,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "cost_trajectory": sol.cost_trajectory,
        "precoders": matrices_json(&sol.precoders.f),
        "subspaces": matrices_json(&sol.subspaces.u),
        "eaves_subspace": matrices_json(std::slice::from_ref(&sol.subspaces.eaves))[0].clone(),
    })
}

pub fn save_solution(sol: &IaSolution, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&solution_to_json(sol)).expect("solution JSON is serializable");
    write_atomic(path.as_ref(), text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{generate_channels, SystemConfig};
    use crate::matrix::{hermitian_eig, identity, orthonormality_error};
    use num_complex::Complex64;

    fn zero_channels(cfg: SystemConfig) -> ChannelSet {
        let links = (0..=cfg.k)
            .map(|rx| (0..cfg.k).map(|_| ComplexMatrix::zeros(cfg.rx_antennas(rx), cfg.nt)).collect())
            .collect();
        ChannelSet::from_links(cfg, 0, links).unwrap()
    }

    fn basis(n: usize, cols: std::ops::Range<usize>) -> ComplexMatrix {
        let m = cols.len();
        ComplexMatrix::from_fn(n, m, |i, j| {
            if i == cols.start + j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn zero_channels_cost_nothing() {
        let cfg = SystemConfig::new(3, 4, 4, 3, 2, 2.0);
        let cs = zero_channels(cfg);
        let p = initial_precoders(&cs, 1).unwrap();
        let s = update_subspaces(&cs, &p).unwrap();
        let c = cost_total(&cs, &p, &s, Variant::Wslm).unwrap();
        assert_eq!((c.j1, c.j2, c.total), (0.0, 0.0, 0.0));
    }

    #[test]
    fn single_pair_has_no_interference_term() {
        let cfg = SystemConfig::new(1, 4, 4, 4, 2, 1.0);
        let cs = generate_channels(cfg, 3).unwrap();
        let p = initial_precoders(&cs, 1).unwrap();
        let s = update_subspaces(&cs, &p).unwrap();
        let c = cost_total(&cs, &p, &s, Variant::Wslm).unwrap();
        assert_eq!(c.j1, 0.0);
        assert!(c.j2 >= 0.0);
    }

    #[test]
    fn cost_reports_all_parts_for_both_variants() {
        let cfg = SystemConfig::new(2, 3, 3, 3, 1, 1.0);
        let cs = generate_channels(cfg, 5).unwrap();
        let p = initial_precoders(&cs, 2).unwrap();
        let s = update_subspaces(&cs, &p).unwrap();
        let w = cost_total(&cs, &p, &s, Variant::Wslm).unwrap();
        let c = cost_total(&cs, &p, &s, Variant::Conventional).unwrap();
        assert_eq!((w.j1, w.j2), (c.j1, c.j2));
        assert_eq!(w.total, w.j1 + w.j2);
        assert_eq!(c.total, c.j1);
    }

    #[test]
    fn cost_rejects_wrong_shapes() {
        let cfg = SystemConfig::new(2, 3, 3, 3, 1, 1.0);
        let cs = generate_channels(cfg, 5).unwrap();
        let p = PrecoderSet {
            f: vec![ComplexMatrix::zeros(3, 2); 2],
        };
        let s = SubspaceSet {
            u: vec![basis(3, 0..2); 2],
            eaves: basis(3, 0..1),
        };
        assert!(matches!(cost_total(&cs, &p, &s, Variant::Wslm), Err(Error::Dimension(_))));
    }

    #[test]
    fn diagonal_objective_picks_leading_basis_vectors() {
        // identity channels: Q_ℓ is the complement projector of the other receiver's U
        let cfg = SystemConfig::new(2, 4, 4, 4, 2, 3.0);
        let eye = identity(4);
        let links = vec![vec![eye.clone(), eye.clone()]; 3];
        let cs = ChannelSet::from_links(cfg, 0, links).unwrap();
        let s = SubspaceSet {
            u: vec![basis(4, 2..4); 2],
            eaves: basis(4, 2..4),
        };
        let q = precoder_objective(&cs, &s, Variant::Conventional, 0).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| q[(i, i)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, 0.0, 0.0]);

        let s = SubspaceSet {
            u: vec![basis(4, 0..2); 2],
            eaves: basis(4, 0..2),
        };
        let p = update_precoders(&cs, &s, Variant::Conventional).unwrap();
        let scale = (cfg.pt / cfg.d as f64).sqrt();
        let want = basis(4, 0..2).scale(scale);
        for f in &p.f {
            // same span and scale as √(Pt/d)·[e₁ e₂]
            assert!(frobenius(&(f * f.adjoint() - &want * want.adjoint())) < 1e-12);
        }
    }

    #[test]
    fn precoders_meet_power_constraint_and_minimize_trace() {
        let cfg = SystemConfig::new(3, 5, 4, 4, 2, 7.0);
        let cs = generate_channels(cfg, 9).unwrap();
        let p0 = initial_precoders(&cs, 4).unwrap();
        let s = update_subspaces(&cs, &p0).unwrap();
        for variant in Variant::ALL {
            let p = update_precoders(&cs, &s, variant).unwrap();
            for (l, f) in p.f.iter().enumerate() {
                let gram = f.adjoint() * f - identity(cfg.d).scale(cfg.pt / cfg.d as f64);
                assert!(frobenius(&gram) < 1e-9);
                let q = precoder_objective(&cs, &s, variant, l).unwrap();
                let eig = hermitian_eig(&q).unwrap();
                let want = cfg.pt / cfg.d as f64 * eig.values[..cfg.d].iter().sum::<f64>();
                let got = (f.adjoint() * &q * f).trace().re;
                assert!((got - want).abs() < 1e-8, "{got} vs {want}");
            }
        }
    }

    #[test]
    fn degenerate_rx_update_is_deterministic() {
        let cfg = SystemConfig::new(2, 3, 4, 3, 1, 1.0);
        let cs = zero_channels(cfg);
        let p = initial_precoders(&cs, 1).unwrap();
        let a = update_rx_subspaces(&cs, &p).unwrap();
        let b = update_rx_subspaces(&cs, &p).unwrap();
        assert_eq!(a, b);
        for u in &a {
            assert_eq!(u.shape(), (4, 3));
            assert!(orthonormality_error(u) < 1e-10);
        }
    }

    #[test]
    fn rx_subspace_contains_low_rank_interference() {
        // Nr - d = 3 ≥ d = 1 with K = 2: one interfering stream.
        let cfg = SystemConfig::new(2, 3, 4, 2, 1, 2.0);
        let cs = generate_channels(cfg, 12).unwrap();
        let p = initial_precoders(&cs, 3).unwrap();
        let u = update_rx_subspaces(&cs, &p).unwrap();
        for (k, uk) in u.iter().enumerate() {
            let hf = cs.h(k, 1 - k) * &p.f[1 - k];
            assert!(outside_energy(&hf, uk) < 1e-20 + 1e-12 * frobenius_sqr(&hf));
        }
    }

    #[test]
    fn eaves_subspace_spans_exact_low_rank_signal() {
        let cfg = SystemConfig::new(1, 4, 4, 5, 2, 1.0);
        let cs = generate_channels(cfg, 6).unwrap();
        let p = initial_precoders(&cs, 6).unwrap();
        let u = update_eaves_subspace(&cs, &p).unwrap();
        assert_eq!(u.shape(), (5, 2));
        assert!(orthonormality_error(&u) < 1e-10);
        let hf = cs.eaves(0) * &p.f[0];
        assert!(outside_energy(&hf, &u) < 1e-12);
    }

    #[test]
    fn eaves_subspace_captures_top_trace() {
        let cfg = SystemConfig::new(3, 4, 4, 6, 2, 1.5);
        let cs = generate_channels(cfg, 31).unwrap();
        let p = initial_precoders(&cs, 8).unwrap();
        let u = update_eaves_subspace(&cs, &p).unwrap();
        let g = received_gram(&cs, &p, cfg.k, None);
        let top: f64 = hermitian_eig(&g).unwrap().values[4..].iter().sum();
        let got = (u.adjoint() * &g * &u).trace().re;
        assert!((got - top).abs() < 1e-8);
    }

    #[test]
    fn iteration_budget_boundaries() {
        let cfg = SystemConfig::new(3, 5, 5, 4, 2, 1.0);
        let cs = generate_channels(cfg, 1).unwrap();
        let zero = SolverOptions {
            kappa_max: 0,
            ..Default::default()
        };
        assert!(matches!(
            solve(&cs, 1, Variant::Wslm, &zero),
            Err(Error::InvalidOptions { field: "kappa_max", .. })
        ));
        let one = SolverOptions {
            kappa_max: 1,
            ..Default::default()
        };
        let sol = solve(&cs, 1, Variant::Wslm, &one).unwrap();
        assert_eq!(sol.cost_trajectory.len(), 2);
        assert_eq!(sol.iterations, 1);
    }

    #[test]
    fn conventional_stopping_cost_is_j1() {
        let cfg = SystemConfig::new(3, 6, 6, 4, 2, 1.0);
        let cs = generate_channels(cfg, 2).unwrap();
        let sol = solve(&cs, 3, Variant::Conventional, &SolverOptions::default()).unwrap();
        let c = cost_total(&cs, &sol.precoders, &sol.subspaces, Variant::Conventional).unwrap();
        assert_eq!(sol.final_cost(), c.j1);
    }

    #[test]
    fn receive_filters_complete_the_basis() {
        let s = SubspaceSet {
            u: vec![basis(5, 0..3)],
            eaves: basis(3, 0..1),
        };
        let w = compute_receive_filters(&s).unwrap();
        assert_eq!(w[0].shape(), (5, 2));
        let target = basis(5, 3..5);
        assert!(frobenius(&(&w[0] * w[0].adjoint() - &target * target.adjoint())) < 1e-12);

        let cfg = SystemConfig::new(2, 4, 6, 3, 2, 1.0);
        let cs = generate_channels(cfg, 4).unwrap();
        let p = initial_precoders(&cs, 4).unwrap();
        let s = update_subspaces(&cs, &p).unwrap();
        for (u, w) in s.u.iter().zip(compute_receive_filters(&s).unwrap()) {
            assert!(frobenius(&(u.adjoint() * &w)) < 1e-10);
            let mut full = ComplexMatrix::zeros(6, 6);
            full.columns_mut(0, 4).copy_from(u);
            full.columns_mut(4, 2).copy_from(&w);
            assert!(orthonormality_error(&full) < 1e-9);
        }
    }

    #[test]
    fn residuals_positive_for_unaligned_and_zero_for_empty_channels() {
        let cfg = SystemConfig::new(3, 4, 4, 4, 2, 1.0);
        let cs = generate_channels(cfg, 21).unwrap();
        let p = initial_precoders(&cs, 5).unwrap();
        let s = update_subspaces(&cs, &p).unwrap();
        let sol = IaSolution {
            precoders: p.clone(),
            subspaces: s.clone(),
            cost_trajectory: vec![1.0],
            iterations: 0,
            converged: false,
            variant: Variant::Wslm,
        };
        let chk = check_ia_conditions(&cs, &sol, 1e-6).unwrap();
        assert_eq!(chk.imli_residual.len(), 6);
        assert!(chk.imli_residual.iter().all(|r| r.value > 0.0));
        assert!(chk.eaves_residual.iter().all(|&r| r > 0.0));

        let zero = zero_channels(cfg);
        let chk = check_ia_conditions(&zero, &sol, 1e-6).unwrap();
        assert!(chk.rank_ok.iter().all(|ok| !ok));
        assert_eq!(chk.max_imli(), 0.0);
        assert_eq!(chk.max_eaves(), 0.0);
    }
}
