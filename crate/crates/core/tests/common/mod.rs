//! Scalar-loop reference implementations used as independent oracles.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;
use wslm_core::{ChannelSet, ComplexMatrix, PrecoderSet, SubspaceSet};

pub type Dense = Vec<Vec<Complex64>>;

pub fn dense(m: &ComplexMatrix) -> Dense {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    let mut out = vec![vec![Complex64::new(0.0, 0.0); m]; n];
    for i in 0..n {
        for j in 0..m {
            for t in 0..k {
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    out
}

pub fn adjoint(a: &Dense) -> Dense {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| (0..rows).map(|i| a[i][j].conj()).collect()).collect()
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect()
}

pub fn eye(n: usize, scale: f64) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| Complex64::new(if i == j { scale } else { 0.0 }, 0.0)).collect())
        .collect()
}

/// `‖x‖² − ‖Uᴴx‖²`, which equals the energy outside `span(U)` for orthonormal `U`.
fn residual_energy(x: &Dense, u: &Dense) -> f64 {
    let n = x.len();
    let d = x.first().map_or(0, |r| r.len());
    let r = u.first().map_or(0, |r| r.len());
    let mut total = 0.0;
    for j in 0..d {
        for i in 0..n {
            total += x[i][j].norm_sqr();
        }
        for c in 0..r {
            let mut coef = Complex64::new(0.0, 0.0);
            for t in 0..n {
                coef += u[t][c].conj() * x[t][j];
            }
            total -= coef.norm_sqr();
        }
    }
    total
}

/// Leakage costs `(j1, j2)` evaluated straight from their definitions.
pub fn cost_oracle(cs: &ChannelSet, p: &PrecoderSet, s: &SubspaceSet) -> (f64, f64) {
    let k = cs.config().k;
    let mut j1 = 0.0;
    for rx in 0..k {
        for tx in (0..k).filter(|&t| t != rx) {
            let hf = matmul(&dense(cs.h(rx, tx)), &dense(&p.f[tx]));
            j1 += residual_energy(&hf, &dense(&s.u[rx]));
        }
    }
    let mut j2 = 0.0;
    for tx in 0..k {
        let hf = matmul(&dense(cs.eaves(tx)), &dense(&p.f[tx]));
        j2 += residual_energy(&hf, &dense(&s.eaves));
    }
    (j1, j2)
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse(a: &Dense) -> Dense {
    let n = a.len();
    let mut m: Dense = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm())).unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let f = m[row][col];
                for j in 0..2 * n {
                    let sub = f * m[col][j];
                    m[row][j] -= sub;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// `log|det A|` via LU with partial pivoting.
pub fn log_abs_det(a: &Dense) -> f64 {
    let n = a.len();
    let mut m = a.clone();
    let mut acc = 0.0;
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm())).unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        acc += p.norm().ln();
        for row in col + 1..n {
            let f = m[row][col] / p;
            for j in col..n {
                let sub = f * m[col][j];
                m[row][j] -= sub;
            }
        }
    }
    acc
}

/// `log₂ det(I + S·R⁻¹)` with an explicit inverse, for receiver `rx` decoding `tx`.
pub fn rate_oracle(cs: &ChannelSet, p: &PrecoderSet, rx: usize, tx: usize) -> f64 {
    let cfg = cs.config();
    let n = cfg.rx_antennas(rx);
    let mut r = eye(n, cfg.sigma2);
    for l in (0..cfg.k).filter(|&l| l != tx) {
        let hf = matmul(&dense(cs.h(rx, l)), &dense(&p.f[l]));
        r = add(&r, &matmul(&hf, &adjoint(&hf)));
    }
    let hf = matmul(&dense(cs.h(rx, tx)), &dense(&p.f[tx]));
    let s = matmul(&hf, &adjoint(&hf));
    let m = add(&eye(n, 1.0), &matmul(&s, &inverse(&r)));
    log_abs_det(&m) / std::f64::consts::LN_2
}

/// All `m`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, m, &mut Vec::new(), &mut out);
    out
}
