//! System configuration and Rayleigh-fading channel realizations.
//!
//! Receivers are indexed `0..K` for the legitimate pairs and `K` for the
//! eavesdropper; transmitters are indexed `0..K`. Channel files use the same
//! layout with 1-based indices.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::matrix::{gaussian_matrix, ComplexMatrix};

/// Dimensions and power budget of a `(Nt×Nr, Nre, d)^K` system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Number of Tx-Rx pairs.
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "Nt")]
    pub nt: usize,
    #[serde(rename = "Nr")]
    pub nr: usize,
    /// Eavesdropper antennas.
    #[serde(rename = "Nre")]
    pub nre: usize,
    /// Data streams per pair.
    pub d: usize,
    /// Total transmit power per transmitter (linear).
    #[serde(rename = "Pt")]
    pub pt: f64,
    /// Noise variance at every receiver, eavesdropper included.
    #[serde(default = "unit_noise")]
    pub sigma2: f64,
}

fn unit_noise() -> f64 {
    1.0
}

impl SystemConfig {
    /// Build with unit noise variance.
    pub fn new(k: usize, nt: usize, nr: usize, nre: usize, d: usize, pt: f64) -> Self {
        SystemConfig {
            k,
            nt,
            nr,
            nre,
            d,
            pt,
            sigma2: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: String| Err(Error::InvalidConfig { field, reason });
        for (field, v) in [("K", self.k), ("Nt", self.nt), ("Nr", self.nr), ("Nre", self.nre), ("d", self.d)] {
            if v == 0 {
                return bad(field, "must be at least 1".into());
            }
        }
        if !(self.pt.is_finite() && self.pt > 0.0) {
            return bad("Pt", format!("must be positive and finite, got {}", self.pt));
        }
        if !(self.sigma2.is_finite() && self.sigma2 > 0.0) {
            return bad("sigma2", format!("must be positive and finite, got {}", self.sigma2));
        }
        if self.d > self.nt.min(self.nr) {
            return bad("d", format!("{} exceeds min(Nt, Nr) = {}", self.d, self.nt.min(self.nr)));
        }
        if self.d > self.nre {
            return bad("d", format!("{} exceeds Nre = {}", self.d, self.nre));
        }
        if self.nr <= self.d {
            return bad("Nr", format!("Nr - d must be at least 1 (Nr = {}, d = {})", self.nr, self.d));
        }
        Ok(())
    }

    /// Row count of `H(rx, ·)`.
    pub fn rx_antennas(&self, rx: usize) -> usize {
        if rx == self.k {
            self.nre
        } else {
            self.nr
        }
    }
}

/// Every channel matrix `H(rx, tx)` of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    config: SystemConfig,
    seed: u64,
    /// Row-major over `(rx, tx)`, `rx ∈ 0..=K`, `tx ∈ 0..K`.
    links: Vec<ComplexMatrix>,
}

impl ChannelSet {
    /// Assemble from explicit matrices, `links[rx][tx]` with `rx ∈ 0..=K`.
    pub fn from_links(config: SystemConfig, seed: u64, links: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        config.validate()?;
        if links.len() != config.k + 1 {
            return Err(Error::Dimension(format!(
                "expected {} receiver rows of channels, got {}",
                config.k + 1,
                links.len()
            )));
        }
        let mut flat = Vec::with_capacity(config.k * (config.k + 1));
        for (rx, row) in links.into_iter().enumerate() {
            if row.len() != config.k {
                return Err(Error::Dimension(format!(
                    "receiver {} has {} channels, expected {}",
                    rx + 1,
                    row.len(),
                    config.k
                )));
            }
            for (tx, h) in row.into_iter().enumerate() {
                let want = (config.rx_antennas(rx), config.nt);
                if h.shape() != want {
                    return Err(Error::Integrity {
                        rx: rx + 1,
                        tx: tx + 1,
                        reason: format!("shape {:?} does not match config {:?}", h.shape(), want),
                    });
                }
                flat.push(h);
            }
        }
        Ok(ChannelSet {
            config,
            seed,
            links: flat,
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `H(rx, tx)`, 0-based; `rx == K` is the eavesdropper.
    pub fn h(&self, rx: usize, tx: usize) -> &ComplexMatrix {
        assert!(rx <= self.config.k && tx < self.config.k, "channel index ({rx},{tx}) out of range");
        &self.links[rx * self.config.k + tx]
    }

    /// Eavesdropper channel from transmitter `tx`.
    pub fn eaves(&self, tx: usize) -> &ComplexMatrix {
        self.h(self.config.k, tx)
    }

    /// Iterate `(rx, tx, H)` in file order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &ComplexMatrix)> {
        let k = self.config.k;
        self.links.iter().enumerate().map(move |(i, h)| (i / k, i % k, h))
    }
}

/// Draw every `H(rx, tx)` with i.i.d. CN(0, 1) entries.
///
/// Link `(rx, tx)` reads ChaCha stream `rx·K + tx` of the generator keyed by
/// `seed`, so each matrix is independent of generation order.
pub fn generate_channels(config: SystemConfig, seed: u64) -> Result<ChannelSet> {
    config.validate()?;
    let k = config.k;
    let links = (0..=k)
        .map(|rx| {
            (0..k)
                .map(|tx| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream((rx * k + tx) as u64);
                    gaussian_matrix(config.rx_antennas(rx), config.nt, &mut rng)
                })
                .collect()
        })
        .collect();
    ChannelSet::from_links(config, seed, links)
}

pub(crate) fn matrix_to_json(m: &ComplexMatrix) -> Value {
    let mut data = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            data.push(json!([z.re, z.im]));
        }
    }
    Value::Array(data)
}

pub fn channels_to_json(cs: &ChannelSet) -> Value {
    let channels: Vec<Value> = cs
        .iter()
        .map(|(rx, tx, h)| {
            json!({
                "rx": rx + 1,
                "tx": tx + 1,
                "rows": h.nrows(),
                "cols": h.ncols(),
                "data": matrix_to_json(h),
            })
        })
        .collect();
    json!({
        "config": cs.config,
        "seed": cs.seed,
        "channels": channels,
    })
}

pub fn save_channels(cs: &ChannelSet, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(&channels_to_json(cs)).expect("channel JSON is serializable");
    write_atomic(path.as_ref(), text.as_bytes())
}

fn parse_err(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Parse {
        field: field.into(),
        reason: reason.into(),
    }
}

fn get<'a>(obj: &'a Value, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("{ctx}{key}"), "missing"))
}

fn as_usize(v: &Value, field: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(field, format!("expected a non-negative integer, got {v}")))
}

fn as_f64(v: &Value, field: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| parse_err(field, format!("expected a number, got {v}")))
}

/// Parse a complex matrix stored as a row-major `[[re, im], …]` array.
pub(crate) fn matrix_from_json(v: &Value, rows: usize, cols: usize, field: &str) -> Result<ComplexMatrix> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err(field, "expected an array of [re, im] pairs"))?;
    if arr.len() != rows * cols {
        return Err(parse_err(
            field,
            format!("expected {} entries for {rows}x{cols}, found {}", rows * cols, arr.len()),
        ));
    }
    let mut data = Vec::with_capacity(arr.len());
    for (i, z) in arr.iter().enumerate() {
        let f = format!("{field}[{i}]");
        let pair = z
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| parse_err(&f, "expected a [re, im] pair"))?;
        let re = as_f64(&pair[0], &f)?;
        let im = as_f64(&pair[1], &f)?;
        data.push(Complex64::new(re, im));
    }
    Ok(ComplexMatrix::from_row_slice(rows, cols, &data))
}

pub fn channels_from_json(doc: &Value) -> Result<ChannelSet> {
    let config: SystemConfig = serde_json::from_value(get(doc, "config", "")?.clone())
        .map_err(|e| parse_err("config", e.to_string()))?;
    config.validate()?;
    let seed = get(doc, "seed", "")?
        .as_u64()
        .ok_or_else(|| parse_err("seed", "expected an unsigned 64-bit integer"))?;
    let entries = get(doc, "channels", "")?
        .as_array()
        .ok_or_else(|| parse_err("channels", "expected an array"))?;

    let k = config.k;
    let mut slots: Vec<Option<ComplexMatrix>> = vec![None; k * (k + 1)];
    for (n, entry) in entries.iter().enumerate() {
        let ctx = format!("channels[{n}].");
        let rx = as_usize(get(entry, "rx", &ctx)?, &format!("{ctx}rx"))?;
        let tx = as_usize(get(entry, "tx", &ctx)?, &format!("{ctx}tx"))?;
        if !(1..=k + 1).contains(&rx) || !(1..=k).contains(&tx) {
            return Err(parse_err(format!("{ctx}rx/tx"), format!("index ({rx},{tx}) out of range")));
        }
        let rows = as_usize(get(entry, "rows", &ctx)?, &format!("{ctx}rows"))?;
        let cols = as_usize(get(entry, "cols", &ctx)?, &format!("{ctx}cols"))?;
        let want = (config.rx_antennas(rx - 1), config.nt);
        if (rows, cols) != want {
            return Err(Error::Integrity {
                rx,
                tx,
                reason: format!("recorded shape {rows}x{cols}, config requires {}x{}", want.0, want.1),
            });
        }
        let h = matrix_from_json(get(entry, "data", &ctx)?, rows, cols, &format!("{ctx}data"))?;
        let slot = &mut slots[(rx - 1) * k + (tx - 1)];
        if slot.is_some() {
            return Err(Error::Integrity {
                rx,
                tx,
                reason: "duplicate entry".into(),
            });
        }
        *slot = Some(h);
    }

    let mut links = Vec::with_capacity(k + 1);
    for rx in 0..=k {
        let mut row = Vec::with_capacity(k);
        for tx in 0..k {
            let h = slots[rx * k + tx].take().ok_or(Error::Integrity {
                rx: rx + 1,
                tx: tx + 1,
                reason: "missing from file".into(),
            })?;
            row.push(h);
        }
        links.push(row);
    }
    ChannelSet::from_links(config, seed, links)
}

pub fn load_channels(path: impl AsRef<Path>) -> Result<ChannelSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| parse_err("<document>", e.to_string()))?;
    channels_from_json(&doc)
}
