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

//! Complex log-gamma by upward recurrence and the Stirling series.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

// B_{2k} / (2k (2k - 1)), k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const SHIFT_TO: f64 = 8.0;

fn stirling(z: Complex64) -> Complex64 {
    let half_ln_2pi = 0.5 * (2.0 * PI).ln();
    let zi = z.inv();
    let zi2 = zi * zi;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = zi;
    for c in STIRLING {
        series += p * c;
        p *= zi2;
    }
    (z - 0.5) * z.ln() - z + half_ln_2pi + series
}

/// log Γ(z) on the branch that is analytic off the negative real axis and
/// real for real z > 0.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("log_gamma of non-finite {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole(z.re));
    }
    if z.re < -SHIFT_TO {
        // reflection; exp of the result is exact, the branch follows the principal logs
        let s = (z * PI).sin();
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - log_gamma_complex(1.0 - z)?);
    }
    // log Π (z + k): modulus as one log of the product, phase as a sum of args
    let mut w = z;
    let mut modulus = 1.0;
    let mut phase = 0.0;
    while w.norm() < SHIFT_TO || w.re < 0.5 {
        modulus *= w.norm();
        phase += w.arg();
        w += 1.0;
    }
    Ok(stirling(w) - Complex64::new(modulus.ln(), phase))
}

/// Γ(z) via [`log_gamma_complex`].
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma_complex(z)?.exp())
}

/// Large-|β| estimate of |Γ(α + iβ)|.
pub fn gamma_magnitude_asymptotic(alpha: f64, beta: f64) -> f64 {
    (2.0 * PI).sqrt()
        * (alpha * alpha + beta * beta).powf((2.0 * alpha - 1.0) / 4.0)
        * (-0.5 * PI * beta.abs()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_values() {
        assert!(log_gamma_complex(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma_complex(c(2.0, 0.0)).unwrap().norm() < 1e-14);
        assert_relative_eq!(
            log_gamma_complex(c(0.5, 0.0)).unwrap().re,
            0.572_364_942_924_700_1,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            log_gamma_complex(c(10.0, 0.0)).unwrap().re,
            362_880.0_f64.ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn one_plus_two_i() {
        let v = log_gamma_complex(c(1.0, 2.0)).unwrap();
        assert_relative_eq!(v.re, -1.876_078_786_430_929_3, max_relative = 1e-13);
        assert_relative_eq!(v.im, 0.129_646_316_309_788_3, max_relative = 1e-12);
    }

    #[test]
    fn poles_rejected() {
        for z in [0.0, -1.0, -7.0, -30.0] {
            assert!(matches!(log_gamma_complex(c(z, 0.0)), Err(Error::Pole(_))));
        }
    }

    #[test]
    fn negative_real_axis_reflection() {
        // Γ(-20.5) = π / (sin(-20.5π) Γ(21.5))
        let g = gamma_complex(c(-20.5, 0.0)).unwrap();
        let g215 = gamma_complex(c(21.5, 0.0)).unwrap();
        let expect = PI / ((-20.5 * PI).sin() * g215.re);
        assert_relative_eq!(g.re, expect, max_relative = 1e-12);
        assert!(g.im.abs() < 1e-12 * g.re.abs());
    }

    #[test]
    fn asymptotic_magnitude_values() {
        assert_relative_eq!(
            gamma_magnitude_asymptotic(0.5, 20.0),
            5.692_806_152_405_845e-14,
            max_relative = 1e-12
        );
        assert_relative_eq!(gamma_magnitude_asymptotic(0.5, 0.0), (2.0 * PI).sqrt());
        let exact = log_gamma_complex(c(0.5, 50.0)).unwrap().re.exp();
        assert_relative_eq!(
            exact / gamma_magnitude_asymptotic(0.5, 50.0),
            1.0,
            max_relative = 1e-3
        );
    }
}
