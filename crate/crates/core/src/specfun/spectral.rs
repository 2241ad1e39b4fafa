// Copyright 2026 The useries Authors
//
// Licensed under the Apache license, version 2.0 (the "license");
// you may not use this file except in compliance with the license.
// You may obtain a copy of the license at
//
//     http://www.apache.org/licenses/license-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the license is distributed on an "as is" basis,
// without warranties or conditions of any kind, either express or implied.
// See the license for the specific language governing permissions and
// limitations under the license.

//! Spectral constants of the trapezoidal aliasing error.

use super::gamma::log_gamma_complex;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A nonzero Fourier index `m` paired with the base `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralIndex {
    pub m: i32,
    pub b: f64,
    pub alpha: Complex64,
}

impl SpectralIndex {
    pub fn new(m: i32, b: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("spectral index m must be nonzero".into()));
        }
        if !(b > 1.0) {
            return Err(Error::Domain(format!("base b = {b} must exceed 1")));
        }
        Ok(SpectralIndex {
            m,
            b,
            alpha: alpha_m(m, b),
        })
    }
}

/// α_m = 2mπi / log b.
pub fn alpha_m(m: i32, b: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * m as f64 * PI / b.ln())
}

/// 𝒞(m) = −Γ((1 − α_m)/2)/√π · exp(−α_m log(√2 σ)).
pub fn c_m(m: i32, b: f64, sigma: f64) -> Result<Complex64> {
    let idx = SpectralIndex::new(m, b)?;
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("sigma = {sigma} must be positive")));
    }
    let a = idx.alpha;
    let lg = log_gamma_complex((1.0 - a) * 0.5)?;
    let log_val = lg - 0.5 * PI.ln() - a * (2.0_f64.sqrt() * sigma).ln();
    Ok(-log_val.exp())
}

/// ℐ_m = cosh(mπ²/log b) Γ(1 + α_m), composed in log space.
pub fn i_m(m: i32, b: f64) -> Result<Complex64> {
    let idx = SpectralIndex::new(m, b)?;
    let x = (m as f64 * PI * PI / b.ln()).abs();
    let log_cosh = x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2;
    Ok((log_gamma_complex(1.0 + idx.alpha)? + log_cosh).exp())
}
