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

use super::kspace::{half_space_kvectors, kspace_sums};
use super::realspace::image_sums;
use super::system::ParticleSystem;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::specfun::erfc_real;
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest admissible real- and Fourier-space tail.
pub const EWALD_TAIL_TOL: f64 = 1e-14;
const TAIL_ARG: f64 = 5.8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EwaldParams {
    pub alpha: f64,
    pub r_real: f64,
    pub k_cut: f64,
}

impl EwaldParams {
    /// Real-space cutoff equal to the box edge, both tails near 1e-15.
    pub fn for_box(l: f64) -> Self {
        let alpha = TAIL_ARG / l;
        EwaldParams {
            alpha,
            r_real: l,
            k_cut: 2.0 * alpha * TAIL_ARG,
        }
    }

    /// Cutoffs for a given splitting parameter.
    pub fn with_alpha(alpha: f64) -> Self {
        EwaldParams {
            alpha,
            r_real: TAIL_ARG / alpha,
            k_cut: 2.0 * alpha * TAIL_ARG,
        }
    }

    pub fn real_tail(&self) -> f64 {
        erfc_real(self.alpha * self.r_real)
    }

    pub fn kspace_tail(&self) -> f64 {
        (-(self.k_cut * self.k_cut) / (4.0 * self.alpha * self.alpha)).exp()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.r_real > 0.0 && self.k_cut > 0.0) {
            return Err(Error::Domain("Ewald parameters must be positive".into()));
        }
        let (r, k) = (self.real_tail(), self.kspace_tail());
        if r > EWALD_TAIL_TOL || k > EWALD_TAIL_TOL {
            return Err(Error::Tolerance(format!(
                "Ewald tails too large: real {r:.2e}, reciprocal {k:.2e} (limit {EWALD_TAIL_TOL:.0e})"
            )));
        }
        Ok(())
    }
}

/// Periodic Coulomb energy and forces by Ewald summation (tinfoil).
pub fn ewald_energy_forces(
    sys: &ParticleSystem,
    p: &EwaldParams,
    exec: Execution,
) -> Result<(f64, Vec<Vec3>)> {
    p.validate()?;
    let a = p.alpha;
    let c = 2.0 * a / PI.sqrt();
    let real = image_sums(sys, p.r_real, 1, exec, |d2, out| {
        let d = d2.sqrt();
        let g = erfc_real(a * d) / d;
        out[0] = (g, (g + c * (-a * a * d2).exp()) / d2);
    });
    let ks = half_space_kvectors(sys.box_length(), p.k_cut);
    let w: Vec<f64> = ks
        .iter()
        .map(|k| {
            let k2 = k.norm2();
            4.0 * PI * (-k2 / (4.0 * a * a)).exp() / k2
        })
        .collect();
    let recip = kspace_sums(sys, &ks, &[w], exec);
    let self_e = -a * sys.charge_sq_sum() / PI.sqrt();
    let energy = real.energies[0] + recip.energies[0] + self_e;
    let forces = real.forces[0]
        .iter()
        .zip(&recip.forces[0])
        .map(|(a, b)| *a + *b)
        .collect();
    Ok((energy, forces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::system::madelung_system;

    #[test]
    fn madelung_constant() {
        let s = madelung_system(40.0).unwrap();
        let (u, f) =
            ewald_energy_forces(&s, &EwaldParams::for_box(40.0), Execution::Sequential).unwrap();
        let mc = u * 2.0 * 20.0 / 8.0;
        assert!((mc + 1.747_564_594_633_182_2).abs() <= 1e-12 * 1.75, "{mc}");
        assert!(f.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn loose_cutoffs_rejected() {
        let p = EwaldParams {
            alpha: 0.3,
            r_real: 5.0,
            k_cut: 2.0,
        };
        assert!(matches!(p.validate(), Err(Error::Tolerance(_))));
    }
}
