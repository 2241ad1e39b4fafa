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

//! The oscillatory integral 𝒥_m(x) = ∫₀ˣ sin(t) t^{α_m} dt and its complement ℐ_m − 𝒥_m(x).

use super::quad::{integrate_panels, QuadratureConfig};
use super::spectral::{alpha_m, i_m};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

// Below this point the power series of sin is used.
const SERIES_END: f64 = 1.0;

fn pow_alpha(t: f64, a: Complex64) -> Complex64 {
    (a * t.ln()).exp()
}

/// ∫₀ˣ sin(t) t^α dt by the power series of sin; accurate for x ≤ 1.
fn j_series(x: f64, a: Complex64) -> Complex64 {
    if x == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let xa = pow_alpha(x, a);
    let x2 = x * x;
    let mut coef = x2; // x^{2n+2} / (2n+1)!
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..40 {
        let k = (2 * n + 2) as f64;
        let term = coef / (a + k);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
        coef *= -x2 / ((2 * n + 2) * (2 * n + 3)) as f64;
    }
    sum * xa
}

/// 𝒥_m(x_end) by the series on `[0, 1]` and adaptive quadrature on panels
/// split at multiples of π.
pub fn oscillatory_j(m: i32, b: f64, x_end: f64, quad: &QuadratureConfig) -> Result<Complex64> {
    if !(x_end >= 0.0) {
        return Err(Error::Domain(format!(
            "x_end = {x_end} must be nonnegative"
        )));
    }
    if m == 0 || !(b > 1.0) {
        return Err(Error::Domain(format!("invalid (m, b) = ({m}, {b})")));
    }
    let a = alpha_m(m, b);
    let head_end = x_end.min(SERIES_END);
    let head = j_series(head_end, a);
    if x_end <= SERIES_END {
        return Ok(head);
    }
    let mut breaks = vec![SERIES_END];
    let mut k = 1.0;
    while k * PI < x_end {
        breaks.push(k * PI);
        k += 1.0;
    }
    breaks.push(x_end);
    let q = integrate_panels(|t| pow_alpha(t, a) * t.sin(), &breaks, quad)?;
    Ok(head + q.value)
}

/// ∫ₓ^∞ e^{−u} (x + i s u)^α du for s = ±1.
fn rotated(x: f64, a: Complex64, s: f64, quad: &QuadratureConfig) -> Result<Complex64> {
    let breaks = [0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 96.0];
    let q = integrate_panels(
        |u| (a * Complex64::new(x, s * u).ln() - u).exp(),
        &breaks,
        quad,
    )?;
    Ok(q.value)
}

/// Threshold above which [`i_minus_j`] switches to the rotated-contour form.
pub fn contour_threshold(m: i32, b: f64) -> f64 {
    (4.0 * alpha_m(m, b).norm()).max(40.0)
}

/// ℐ_m − 𝒥_m(x), the Abel-regularized ∫ₓ^∞ sin(t) t^{α_m} dt.
///
/// Small x uses the direct difference; large x rotates the contour,
/// ½[e^{ix} A₊ + e^{−ix} A₋] with A± = ∫₀^∞ e^{−u}(x ± iu)^α du.
pub fn i_minus_j(m: i32, b: f64, x: f64, quad: &QuadratureConfig) -> Result<Complex64> {
    if x < contour_threshold(m, b) {
        return Ok(i_m(m, b)? - oscillatory_j(m, b, x, quad)?);
    }
    i_minus_j_contour(m, b, x, quad)
}

/// The rotated-contour form of ℐ_m − 𝒥_m(x); requires x > |α_m|.
pub fn i_minus_j_contour(m: i32, b: f64, x: f64, quad: &QuadratureConfig) -> Result<Complex64> {
    let a = alpha_m(m, b);
    if !(x > a.norm()) {
        return Err(Error::Domain(format!(
            "contour form needs x > |alpha| = {}, got {x}",
            a.norm()
        )));
    }
    let ap = rotated(x, a, 1.0, quad)?;
    let am = rotated(x, a, -1.0, quad)?;
    let e = Complex64::new(x.cos(), x.sin());
    Ok((e * ap + e.conj() * am) * 0.5)
}
