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

//! Special functions and quadrature primitives.

pub mod gamma;
pub mod oscillatory;
pub mod quad;
pub mod sici;
pub mod spectral;

pub use gamma::{gamma_complex, gamma_magnitude_asymptotic, log_gamma_complex};
pub use oscillatory::{i_minus_j, oscillatory_j};
pub use quad::{integrate, integrate_panels, QuadValue, Quadrature, QuadratureConfig};
pub use sici::si;
pub use spectral::{alpha_m, c_m, i_m, SpectralIndex};

/// Error function.
pub fn erf_real(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function.
pub fn erfc_real(x: f64) -> f64 {
    libm::erfc(x)
}

/// Smallest x guaranteed to satisfy x^{3/2} e^{−x} ≤ ε.
pub fn min_x_bound(epsilon: f64) -> f64 {
    let e = std::f64::consts::E;
    (1.5 * 1.5_f64.ln() + (1.0 / epsilon).ln()) * e / (e - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn erf_values() {
        assert_eq!(erf_real(0.0), 0.0);
        assert_eq!(erfc_real(0.0), 1.0);
        assert_relative_eq!(erf_real(1.0), 0.842_700_792_949_714_9, max_relative = 1e-15);
        assert_eq!(erf_real(-0.7), -erf_real(0.7));
        for x in [-3.0, -0.2, 0.0, 0.4, 1.7, 5.0] {
            assert!((erf_real(x) + erfc_real(x) - 1.0).abs() <= 1e-15);
        }
        assert_eq!(erfc_real(40.0), 0.0);
    }

    #[test]
    fn x_bound_values() {
        assert_relative_eq!(
            min_x_bound(1.0),
            0.962_154_534_713_054,
            max_relative = 1e-13
        );
        let x = min_x_bound(1e-4);
        assert_relative_eq!(x, 15.532_698_465_517_54, max_relative = 1e-13);
        assert!(x.powf(1.5) * (-x).exp() <= 1e-4);
    }
}
