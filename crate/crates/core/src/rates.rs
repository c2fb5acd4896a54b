//! Main-link, leakage and secrecy rates in bits/s/Hz.
//!
//! Rates treat interference as Gaussian noise and are evaluated directly from
//! the precoders. `log₂ det(I + S·R⁻¹)` is computed as
//! `log₂ det(R + S) − log₂ det(R)` with Cholesky factorizations, never an
//! explicit inverse.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::channel::ChannelSet;
use crate::error::{Error, Result};
use crate::matrix::{identity, logdet_psd, ComplexMatrix};
use crate::solver::{received_gram, PrecoderSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub main_rates: Vec<f64>,
    pub leakage_rates: Vec<f64>,
    pub secrecy_rates: Vec<f64>,
    /// Sum main-link rate.
    pub smlr: f64,
    /// Sum information-leakage rate.
    pub silr: f64,
    /// Secrecy sum rate.
    pub ssr: f64,
}

fn check(cs: &ChannelSet, p: &PrecoderSet) -> Result<()> {
    let cfg = cs.config();
    if p.f.len() != cfg.k || p.f.iter().any(|f| f.shape() != (cfg.nt, cfg.d)) {
        return Err(Error::Dimension(format!(
            "rates need {} precoders of shape {}x{}",
            cfg.k, cfg.nt, cfg.d
        )));
    }
    Ok(())
}

/// Interference-plus-noise covariance at receiver `rx` (0-based, `K` is the
/// eavesdropper) with transmitter `excluded_tx` left out of the sum.
pub fn interference_covariance(
    cs: &ChannelSet,
    p: &PrecoderSet,
    rx: usize,
    excluded_tx: usize,
) -> Result<ComplexMatrix> {
    let cfg = cs.config();
    if rx > cfg.k || excluded_tx >= cfg.k {
        return Err(Error::Dimension(format!(
            "covariance index (rx {}, tx {}) out of range for K = {}",
            rx + 1,
            excluded_tx + 1,
            cfg.k
        )));
    }
    check(cs, p)?;
    let n = cfg.rx_antennas(rx);
    Ok(received_gram(cs, p, rx, Some(excluded_tx)) + identity(n).scale(cfg.sigma2))
}

fn link_rate(cs: &ChannelSet, p: &PrecoderSet, rx: usize, tx: usize) -> Result<f64> {
    let r = interference_covariance(cs, p, rx, tx)?;
    let hf = cs.h(rx, tx) * &p.f[tx];
    let signal = &hf * hf.adjoint();
    let bits = (logdet_psd(&(&r + signal))? - logdet_psd(&r)?) / LN_2;
    Ok(bits.max(0.0))
}

fn check_user(cs: &ChannelSet, k: usize) -> Result<()> {
    if k >= cs.config().k {
        return Err(Error::Dimension(format!("user {} out of range 1..={}", k + 1, cs.config().k)));
    }
    Ok(())
}

/// Achievable rate of pair `k` at its own receiver.
pub fn main_rate(cs: &ChannelSet, p: &PrecoderSet, k: usize) -> Result<f64> {
    check_user(cs, k)?;
    link_rate(cs, p, k, k)
}

/// Rate at which the eavesdropper can decode pair `k`.
pub fn leakage_rate(cs: &ChannelSet, p: &PrecoderSet, k: usize) -> Result<f64> {
    check_user(cs, k)?;
    link_rate(cs, p, cs.config().k, k)
}

pub fn rate_report(cs: &ChannelSet, p: &PrecoderSet) -> Result<RateReport> {
    check(cs, p)?;
    let k_users = cs.config().k;
    let main_rates = (0..k_users).map(|k| main_rate(cs, p, k)).collect::<Result<Vec<_>>>()?;
    let leakage_rates = (0..k_users).map(|k| leakage_rate(cs, p, k)).collect::<Result<Vec<_>>>()?;
    Ok(assemble(main_rates, leakage_rates))
}

/// Combine per-user rates into a report; secrecy rate is `max(main − leakage, 0)`.
pub fn assemble(main_rates: Vec<f64>, leakage_rates: Vec<f64>) -> RateReport {
    let secrecy_rates: Vec<f64> = main_rates
        .iter()
        .zip(&leakage_rates)
        .map(|(m, e)| (m - e).max(0.0))
        .collect();
    RateReport {
        smlr: main_rates.iter().sum(),
        silr: leakage_rates.iter().sum(),
        ssr: secrecy_rates.iter().sum(),
        main_rates,
        leakage_rates,
        secrecy_rates,
    }
}
